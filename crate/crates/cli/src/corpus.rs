//! The fixture corpus: one `field | R | grammar | text` entry per line.

use berkfilter::field::{Ambient, PAdicQ, TAdicField, TrivialQ, ValuedField};

use crate::commands::{parse_field, parse_rational, FieldSpec};
use crate::error::CliError;
use crate::lower::{
    filters_equal, lower_elem, print_ball, print_filter, print_poly, print_series, read_ball, read_filter,
    read_poly, read_series,
};
use crate::parse::{parse_element, Grammar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub line: usize,
    pub field: String,
    pub radius: String,
    pub grammar: Grammar,
    pub text: String,
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.splitn(4, '|').map(str::trim).collect();
        let [field, radius, grammar, body] = parts[..] else {
            return Err(CliError::Usage(format!("corpus line {}: expected 4 fields", i + 1)));
        };
        let grammar = match grammar {
            "element" => Grammar::Element,
            "ball" => Grammar::Ball,
            "filter" => Grammar::Filter,
            "poly" => Grammar::Poly,
            "series" => Grammar::Series,
            g => return Err(CliError::Usage(format!("corpus line {}: unknown grammar '{g}'", i + 1))),
        };
        out.push(CorpusEntry {
            line: i + 1,
            field: field.to_string(),
            radius: radius.to_string(),
            grammar,
            text: body.to_string(),
        });
    }
    Ok(out)
}

/// Parses the entry, prints it, reparses the printed form and compares.
/// Returns the printed text.
pub fn check_roundtrip(entry: &CorpusEntry) -> Result<String, CliError> {
    let r = parse_rational(&entry.radius, "R")?;
    match parse_field(&entry.field)? {
        FieldSpec::Trivial => roundtrip_in(&Ambient::new(TrivialQ, r)?, entry),
        FieldSpec::PAdic(p) => roundtrip_in(&Ambient::new(PAdicQ::new(p)?, r)?, entry),
        FieldSpec::TAdic(b) => roundtrip_in(&Ambient::new(TAdicField::new(b)?, r)?, entry),
    }
}

fn compare<T>(entry: &CorpusEntry, a: T, b: T, printed: String, eq: impl Fn(&T, &T) -> bool) -> Result<String, CliError> {
    if eq(&a, &b) {
        Ok(printed)
    } else {
        Err(CliError::Usage(format!(
            "corpus line {}: '{}' printed as '{printed}' which reparses to a different value",
            entry.line, entry.text
        )))
    }
}

fn roundtrip_in<F: ValuedField>(amb: &Ambient<F>, entry: &CorpusEntry) -> Result<String, CliError> {
    let field = amb.field();
    let t = entry.text.as_str();
    match entry.grammar {
        Grammar::Element => {
            let k = lower_elem(field, &parse_element(t)?)?;
            let p = k.to_string();
            let again = lower_elem(field, &parse_element(&p)?)?;
            compare(entry, k, again, p, |a, b| a == b)
        }
        Grammar::Ball => {
            let b = read_ball(amb, t)?;
            let p = print_ball(&b);
            compare(entry, b, read_ball(amb, &p)?, p, |a, b| a == b)
        }
        Grammar::Filter => {
            let f = read_filter(amb, t)?;
            let p = print_filter(&f);
            compare(entry, f, read_filter(amb, &p)?, p, filters_equal)
        }
        Grammar::Poly => {
            let f = read_poly(field, t)?;
            let p = print_poly(&f);
            compare(entry, f, read_poly(field, &p)?, p, |a, b| a == b)
        }
        Grammar::Series => {
            let s = read_series(field, t)?;
            let p = print_series(&s);
            compare(entry, s, read_series(field, &p)?, p, |a, b| a == b)
        }
    }
}
