//! Turning parsed syntax into library values over a concrete field, and back.

use berkfilter::ball::{Chain, FilterGenerator, FormalBall, RGoodFilter};
use berkfilter::exactnum::{fmt_rat, Rational};
use berkfilter::field::{Ambient, ValuedField};
use berkfilter::seminorm::{Factorization, Poly, TruncSeries};

use crate::error::CliError;
use crate::parse::{
    constant_value, parse_ball, parse_filter, parse_poly, parse_series, BallAst, Expr, FilterAst,
    PolyAst, SeriesAst,
};

fn semantic(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn lower_elem<F: ValuedField>(field: &F, e: &Expr) -> Result<F::Elem, CliError> {
    Ok(match e {
        Expr::Num(q) => field.from_rational(q),
        Expr::FieldVar => field
            .variable()
            .ok_or_else(|| semantic(format!("'t' is not an element of {}", field.name())))?,
        Expr::PolyVar => return Err(semantic("'T' is not allowed in a field element")),
        Expr::Neg(a) => field.neg(&lower_elem(field, a)?),
        Expr::Add(a, b) => field.add(&lower_elem(field, a)?, &lower_elem(field, b)?),
        Expr::Sub(a, b) => field.sub(&lower_elem(field, a)?, &lower_elem(field, b)?),
        Expr::Mul(a, b) => field.mul(&lower_elem(field, a)?, &lower_elem(field, b)?),
        Expr::Div(a, b) => field
            .div(&lower_elem(field, a)?, &lower_elem(field, b)?)
            .ok_or(CliError::Module(berkfilter::Error::DivisionByZero))?,
        Expr::Pow(a, n) => field.pow(&lower_elem(field, a)?, *n),
    })
}

pub fn lower_rational(e: &Expr, what: &str) -> Result<Rational, CliError> {
    constant_value(e).ok_or_else(|| semantic(format!("{what} must be a rational constant")))
}

fn lower_poly_expr<F: ValuedField>(field: &F, e: &Expr) -> Result<Poly<F::Elem>, CliError> {
    Ok(match e {
        Expr::PolyVar => Poly::new(field, vec![field.zero(), field.one()]),
        Expr::Num(_) | Expr::FieldVar => Poly::new(field, vec![lower_elem(field, e)?]),
        Expr::Neg(a) => lower_poly_expr(field, a)?.mul(field, &Poly::new(field, vec![field.neg(&field.one())])),
        Expr::Add(a, b) => lower_poly_expr(field, a)?.add(field, &lower_poly_expr(field, b)?),
        Expr::Sub(a, b) => {
            let nb = lower_poly_expr(field, b)?.mul(field, &Poly::new(field, vec![field.neg(&field.one())]));
            lower_poly_expr(field, a)?.add(field, &nb)
        }
        Expr::Mul(a, b) => lower_poly_expr(field, a)?.mul(field, &lower_poly_expr(field, b)?),
        Expr::Div(a, b) => {
            if b.mentions_poly_var() {
                return Err(semantic("division by a polynomial in T"));
            }
            let d = lower_elem(field, b)?;
            let inv = field
                .inv(&d)
                .ok_or(CliError::Module(berkfilter::Error::DivisionByZero))?;
            lower_poly_expr(field, a)?.mul(field, &Poly::new(field, vec![inv]))
        }
        Expr::Pow(a, n) => {
            let base = lower_poly_expr(field, a)?;
            let mut acc = Poly::new(field, vec![field.one()]);
            for _ in 0..*n {
                acc = acc.mul(field, &base);
            }
            acc
        }
    })
}

/// Multiplicative factors of a top-level product.
fn factors<'a>(e: &'a Expr, out: &mut Vec<(&'a Expr, bool)>) {
    match e {
        Expr::Mul(a, b) => {
            factors(a, out);
            factors(b, out);
        }
        Expr::Div(a, b) if !b.mentions_poly_var() => {
            factors(a, out);
            out.push((b, true));
        }
        Expr::Pow(a, n) if a.mentions_poly_var() => {
            for _ in 0..*n {
                factors(a, out);
            }
        }
        other => out.push((other, false)),
    }
}

/// `c·∏(T − b_j)` when the expression is a product of constants and linear
/// factors (or is itself of degree at most one).
fn witness<F: ValuedField>(field: &F, e: &Expr, p: &Poly<F::Elem>) -> Result<Option<Factorization<F::Elem>>, CliError> {
    if p.is_zero() {
        return Ok(None);
    }
    let split = |q: &Poly<F::Elem>| -> Option<(F::Elem, Option<F::Elem>)> {
        match q.coeffs() {
            [c] => Some((c.clone(), None)),
            [c0, c1] => Some((c1.clone(), Some(field.div(&field.neg(c0), c1)?))),
            _ => None,
        }
    };
    if p.coeffs().len() <= 2 {
        let (lead, root) = split(p).expect("degree <= 1");
        return Ok(Some(Factorization {
            lead,
            roots: root.into_iter().collect(),
        }));
    }
    let mut fs = Vec::new();
    factors(e, &mut fs);
    let mut lead = field.one();
    let mut roots = Vec::new();
    for (f, inverted) in fs {
        let q = lower_poly_expr(field, f)?;
        let Some((c, root)) = split(&q) else {
            return Ok(None);
        };
        if inverted {
            lead = field.div(&lead, &c).ok_or(CliError::Module(berkfilter::Error::DivisionByZero))?;
        } else {
            lead = field.mul(&lead, &c);
            roots.extend(root);
        }
    }
    Ok(Some(Factorization { lead, roots }))
}

pub fn lower_poly<F: ValuedField>(field: &F, ast: &PolyAst) -> Result<Poly<F::Elem>, CliError> {
    match ast {
        PolyAst::Dense(cs) => {
            let c = cs.iter().map(|e| lower_elem(field, e)).collect::<Result<Vec<_>, _>>()?;
            Ok(Poly::new(field, c))
        }
        PolyAst::Expr(e) => {
            let p = lower_poly_expr(field, e)?;
            match witness(field, e, &p)? {
                Some(w) => Ok(Poly::with_witness(field, p.coeffs().to_vec(), w)?),
                None => Ok(p),
            }
        }
    }
}

pub fn lower_ball<F: ValuedField>(amb: &Ambient<F>, ast: &BallAst) -> Result<FormalBall<F::Elem>, CliError> {
    let radius = lower_rational(&ast.radius, "ball radius")?;
    let center = lower_elem(amb.field(), &ast.center)?;
    Ok(FormalBall::new(amb, center, radius)?)
}

pub fn lower_filter<F: ValuedField>(amb: &Ambient<F>, ast: &FilterAst) -> Result<RGoodFilter<F>, CliError> {
    match ast {
        FilterAst::Disc { center, radius } => {
            let r = lower_rational(radius, "limit radius")?;
            let k = lower_elem(amb.field(), center)?;
            Ok(RGoodFilter::disc_point(amb.clone(), k, r)?)
        }
        FilterAst::Chain(balls) => {
            let bs = balls.iter().map(|b| lower_ball(amb, b)).collect::<Result<Vec<_>, _>>()?;
            Ok(RGoodFilter::chain_prefix(amb.clone(), bs)?)
        }
    }
}

pub fn lower_series<F: ValuedField>(field: &F, ast: &SeriesAst) -> Result<TruncSeries<F::Elem>, CliError> {
    let c = ast.coeffs.iter().map(|e| lower_elem(field, e)).collect::<Result<Vec<_>, _>>()?;
    let tail = lower_rational(&ast.tail, "tail bound")?;
    Ok(TruncSeries::new(c, tail)?)
}

pub fn read_ball<F: ValuedField>(amb: &Ambient<F>, text: &str) -> Result<FormalBall<F::Elem>, CliError> {
    lower_ball(amb, &parse_ball(text)?)
}

pub fn read_filter<F: ValuedField>(amb: &Ambient<F>, text: &str) -> Result<RGoodFilter<F>, CliError> {
    lower_filter(amb, &parse_filter(text)?)
}

pub fn read_poly<F: ValuedField>(field: &F, text: &str) -> Result<Poly<F::Elem>, CliError> {
    lower_poly(field, &parse_poly(text)?)
}

pub fn read_series<F: ValuedField>(field: &F, text: &str) -> Result<TruncSeries<F::Elem>, CliError> {
    lower_series(field, &parse_series(text)?)
}

pub fn print_ball<E: std::fmt::Display + Clone>(b: &FormalBall<E>) -> String {
    format!("B({}; {})", fmt_rat(b.radius()), b.center())
}

pub fn print_filter<F: ValuedField>(f: &RGoodFilter<F>) -> String {
    match f.generator() {
        FilterGenerator::DiscPoint {
            center,
            limit_radius,
        } => format!("disc({center}, {})", fmt_rat(limit_radius)),
        FilterGenerator::Chain(chain) => {
            let n = chain.len().unwrap_or(1);
            let balls: Vec<String> = chain.prefix(n.saturating_sub(1)).iter().map(print_ball).collect();
            let more = if matches!(chain, Chain::Lazy(_)) { ", ..." } else { "" };
            format!("chain[{}{more}]", balls.join(", "))
        }
    }
}

pub fn print_poly<E: std::fmt::Display + Clone + PartialEq>(p: &Poly<E>) -> String {
    match p.witness() {
        Some(w) => {
            let mut s = format!("({})", w.lead);
            for b in &w.roots {
                s.push_str(&format!("*(T-({b}))"));
            }
            s
        }
        None if p.is_zero() => "poly[0]".to_string(),
        None => p.to_string(),
    }
}

pub fn print_series<E: std::fmt::Display>(s: &TruncSeries<E>) -> String {
    s.to_string()
}

/// Structural equality of filter presentations.
pub fn filters_equal<F: ValuedField>(a: &RGoodFilter<F>, b: &RGoodFilter<F>) -> bool {
    let same = match (a.generator(), b.generator()) {
        (
            FilterGenerator::DiscPoint {
                center: c1,
                limit_radius: r1,
            },
            FilterGenerator::DiscPoint {
                center: c2,
                limit_radius: r2,
            },
        ) => c1 == c2 && r1 == r2,
        (FilterGenerator::Chain(x), FilterGenerator::Chain(y)) => match (x.len(), y.len()) {
            (Some(n), Some(m)) if n == m => x.prefix(n - 1) == y.prefix(m - 1),
            _ => false,
        },
        _ => false,
    };
    same && a.ambient().radius() == b.ambient().radius()
}

#[cfg(test)]
mod tests {
    use super::*;
    use berkfilter::exactnum::{int, rat};
    use berkfilter::field::{PAdicQ, TAdicField, TrivialQ};

    #[test]
    fn expression_form_carries_witness() {
        let q3 = PAdicQ::new(3).unwrap();
        let p = read_poly(&q3, "3*(T-1)*(T+1)").unwrap();
        assert_eq!(p.coeffs(), &[int(-3), int(0), int(3)]);
        let w = p.witness().unwrap();
        assert_eq!(w.lead, int(3));
        assert_eq!(w.roots, vec![int(1), int(-1)]);
        assert!(read_poly(&q3, "T^2+1").unwrap().witness().is_none());
        assert!(read_poly(&q3, "poly[-1, 0, 1]").unwrap().witness().is_none());
        let p = read_poly(&q3, "(2*T-1)^2/4").unwrap();
        assert_eq!(p.witness().unwrap().roots, vec![rat(1, 2), rat(1, 2)]);
    }

    #[test]
    fn semantic_errors() {
        let amb = Ambient::new(TrivialQ, rat(1, 2)).unwrap();
        let e = read_filter(&amb, "disc(7, 1/4)").unwrap_err();
        assert_eq!(e.code(), "center_not_in_k_r");
        assert!(e.to_string().contains("center not in K_R"));
        let q2 = Ambient::new(PAdicQ::new(2).unwrap(), int(1)).unwrap();
        assert!(read_filter(&q2, "disc(2, 1/4)").is_ok());
        assert!(read_ball(&q2, "B(1/2; t)").is_err());
    }

    #[test]
    fn tadic_elements() {
        let f = TAdicField::new(rat(1, 2)).unwrap();
        let amb = Ambient::new(f.clone(), int(1)).unwrap();
        let b = read_ball(&amb, "B(1/4; t^2/(1+t))").unwrap();
        assert_eq!(f.norm(b.center()), rat(1, 4));
        let again = read_ball(&amb, &print_ball(&b)).unwrap();
        assert_eq!(b, again);
    }
}
