use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ball::FormalBall;
use crate::exactnum::{int, Rational};
use crate::field::ValuedField;

use super::poly::{hat_ball_poly, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulusReport<E> {
    /// `hat(B, f)`.
    pub bound: Rational,
    pub samples: usize,
    /// Sample points with `|f(z)| > bound`.
    pub violations: Vec<E>,
    /// First sample attaining `|f(z)| = bound`.
    pub witness: Option<E>,
}

impl<E> ModulusReport<E> {
    pub fn sound(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Samples `z = k + s·u` in the closed disc `|z − k| <= q`, where `s` is the
/// largest value-group scale `<= q`. The first integral `u` are `0, 1, 2, …`,
/// the rest are random.
pub fn max_modulus_oracle<F: ValuedField>(
    field: &F,
    ball: &FormalBall<F::Elem>,
    f: &Poly<F::Elem>,
    sample_count: usize,
    seed: u64,
) -> ModulusReport<F::Elem> {
    let bound = hat_ball_poly(field, ball, f);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = field.disc_scale(ball.radius());
    let deterministic = sample_count.div_ceil(2).max(1);
    let mut points = Vec::with_capacity(sample_count.max(1));
    match &scale {
        None => points.push(ball.center().clone()),
        Some(s) => {
            for i in 0..sample_count.max(1) {
                let u = if i < deterministic {
                    field.from_rational(&int(i as i64))
                } else {
                    field.sample_integral(&mut rng)
                };
                points.push(field.add(ball.center(), &field.mul(s, &u)));
            }
        }
    }
    let mut report = ModulusReport {
        bound,
        samples: points.len(),
        violations: Vec::new(),
        witness: None,
    };
    for z in points {
        let v = field.norm(&f.eval(field, &z));
        if v > report.bound {
            report.violations.push(z);
        } else if v == report.bound && report.witness.is_none() {
            report.witness = Some(z);
        }
    }
    report
}
