//! Tree data for the spectra pictures, emitted as DOT and JSON.

use std::fmt::Write as _;

use serde::Serialize;

use berkfilter::exactnum::{fmt_rat, int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Branch,
    Leaf,
    Arc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Node {
    pub id: usize,
    pub label: String,
    pub kind: NodeKind,
    /// A rational or an interval, in text form.
    pub parameter: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TreeData {
    pub kind: String,
    pub nodes: Vec<Node>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeData {
    fn push(&mut self, parent: Option<usize>, label: String, kind: NodeKind, parameter: String) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node {
            id,
            label,
            kind,
            parameter,
        });
        if let Some(p) = parent {
            self.edges.push((p, id));
        }
        id
    }

    pub fn count(&self, kind: NodeKind) -> usize {
        self.nodes.iter().filter(|n| n.kind == kind).count()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        writeln!(s, "digraph \"{}\" {{", self.kind).unwrap();
        for n in &self.nodes {
            let shape = match n.kind {
                NodeKind::Branch => "ellipse",
                NodeKind::Leaf => "point",
                NodeKind::Arc => "box",
            };
            writeln!(
                s,
                "  n{} [label=\"{}\\n{}\", shape={shape}];",
                n.id,
                n.label.replace('"', "\\\""),
                n.parameter
            )
            .unwrap();
        }
        for (a, b) in &self.edges {
            writeln!(s, "  n{a} -> n{b};").unwrap();
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree data serializes")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeKind {
    SpecZ { primes: Vec<u64> },
    TrivialBelowOne { radius: Rational },
    TrivialAboveOne { radius: Rational, centers: Vec<String> },
}

impl TreeKind {
    pub fn name(&self) -> &'static str {
        match self {
            TreeKind::SpecZ { .. } => "spec_Z",
            TreeKind::TrivialBelowOne { .. } => "trivial_R_lt_1",
            TreeKind::TrivialAboveOne { .. } => "trivial_R_geq_1",
        }
    }
}

pub fn emit_tree(kind: &TreeKind) -> TreeData {
    let mut t = TreeData {
        kind: kind.name().to_string(),
        ..TreeData::default()
    };
    match kind {
        TreeKind::SpecZ { primes } => {
            let root = t.push(None, "trivial norm".into(), NodeKind::Branch, "1".into());
            for p in primes {
                let arc = t.push(Some(root), format!("{p}-adic |.|_{p}^a"), NodeKind::Arc, "a in (0, inf)".into());
                t.push(Some(arc), format!("ResidueTrivial({p})"), NodeKind::Leaf, "a = inf".into());
            }
            t.push(Some(root), "archimedean |.|^a".into(), NodeKind::Arc, "a in (0, 1]".into());
        }
        TreeKind::TrivialBelowOne { radius } => {
            let r = fmt_rat(radius);
            let root = t.push(None, "Gauss point".into(), NodeKind::Branch, format!("r = {r}"));
            let arc = t.push(Some(root), "radius".into(), NodeKind::Arc, format!("[0, {r}]"));
            t.push(Some(arc), "evaluation at 0".into(), NodeKind::Leaf, "r = 0".into());
        }
        TreeKind::TrivialAboveOne { radius, centers } => {
            let r = fmt_rat(radius);
            let root = t.push(None, "Gauss point".into(), NodeKind::Branch, format!("r = {r}"));
            let branch = if *radius > int(1) {
                let arc = t.push(Some(root), "radius".into(), NodeKind::Arc, format!("[1, {r}]"));
                t.push(Some(arc), "unit point".into(), NodeKind::Branch, "r = 1".into())
            } else {
                root
            };
            for k in centers {
                let arc = t.push(Some(branch), format!("center {k}"), NodeKind::Arc, "[0, 1)".into());
                t.push(Some(arc), format!("evaluation at {k}"), NodeKind::Leaf, "r = 0".into());
            }
        }
    }
    t
}
