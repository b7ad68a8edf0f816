//! Structural comparison of polynomials up to a constant factor, with a
//! reproducible numeric witness when they differ.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{EvalPoint, LaurentPoly};
use crate::cyclofield::Cyclo;
use crate::error::CoreError;

/// Outcome of [`compare`]: `q` relative to `p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Comparison {
    /// `q == p` exactly.
    Equal,
    /// `q == c * p` for the given nonzero constant `c != 1`.
    Proportional(Cyclo),
    /// Neither; the point is a concrete evaluation where the two disagree.
    Distinct(EvalPoint),
}

/// Fixed seed for the witness search, so a given pair of distinct
/// polynomials always produces the same witness point.
const WITNESS_SEED: u64 = 0x1009_5EED_0001;

/// Decide whether `q` equals `p`, is a constant multiple of `p`, or differs.
///
/// The distinct case carries an evaluation point at which the two take
/// different values; the search draws small nonzero rationals from a
/// deterministic generator, so results are stable across runs.
pub fn compare(p: &LaurentPoly, q: &LaurentPoly) -> Result<Comparison, CoreError> {
    p.check_same_vars(q)?;
    if p == q {
        return Ok(Comparison::Equal);
    }
    // Proportionality requires identical supports; test the ratio of the
    // first coefficients against every term.
    if !p.is_zero()
        && p.term_count() == q.term_count()
        && p.terms().zip(q.terms()).all(|((e1, _), (e2, _))| e1 == e2)
    {
        let (_, p0) = p.terms().next().unwrap();
        let (_, q0) = q.terms().next().unwrap();
        let ratio = q0.div(p0)?;
        let proportional = p
            .terms()
            .zip(q.terms())
            .all(|((_, cp), (_, cq))| cq == &(cp * &ratio));
        if proportional {
            return Ok(Comparison::Proportional(ratio));
        }
    }
    Ok(Comparison::Distinct(find_witness(p, q)))
}

/// Search for a point where `p` and `q` evaluate differently. `p != q`
/// guarantees one exists; random small rationals find it almost surely.
fn find_witness(p: &LaurentPoly, q: &LaurentPoly) -> EvalPoint {
    let mut rng = ChaCha8Rng::seed_from_u64(WITNESS_SEED);
    for attempt in 0..10_000u32 {
        // Widen the sampling range if early rounds are unlucky.
        let bound = 8 + 4 * (attempt / 16) as i64;
        let pt = random_point(p, &mut rng, bound);
        let vp = p.evaluate(&pt).expect("point covers all variables");
        let vq = q.evaluate(&pt).expect("point covers all variables");
        if vp != vq {
            return pt;
        }
    }
    unreachable!("distinct polynomials must separate at some rational point")
}

fn random_point(p: &LaurentPoly, rng: &mut ChaCha8Rng, bound: i64) -> EvalPoint {
    let assignments: Vec<(String, Cyclo)> = p
        .vars()
        .names()
        .iter()
        .map(|name| {
            let num = loop {
                let n = rng.gen_range(-bound..=bound);
                if n != 0 {
                    break n;
                }
            };
            let den = rng.gen_range(1..=6i64);
            (name.clone(), Cyclo::from_ratio(num, den))
        })
        .collect();
    EvalPoint::new(assignments).expect("nonzero coordinates by construction")
}
