//! Exact division of Laurent polynomials.
//!
//! Monomials are units here, so division reduces to ordinary multivariate
//! polynomial division after clearing the minimum exponent of every variable
//! on numerator and denominator separately. The ordinary division recurses on
//! one variable at a time, dividing leading coefficients in the remaining
//! variables; any nonzero remainder is reported as an error rather than
//! discarded.

use super::{LaurentPoly, Monomial};
use crate::cyclofield::Cyclo;
use crate::error::CoreError;

/// Divide `num` by `den` exactly, or fail with the nonzero remainder that
/// obstructed the division.
pub fn exact_divide(num: &LaurentPoly, den: &LaurentPoly) -> Result<LaurentPoly, CoreError> {
    num.check_same_vars(den)?;
    if den.is_zero() {
        return Err(CoreError::DivisionByZero);
    }
    if num.is_zero() {
        return Ok(LaurentPoly::zero(num.vars()));
    }
    let n = num.vars().len();
    // Shift both operands to ordinary polynomials (all exponents >= 0) by
    // dividing out the monomial x^min on each side; the two shifts recombine
    // into a single monomial factor on the quotient.
    let min_of = |p: &LaurentPoly| -> Monomial {
        let mut mins = vec![i32::MAX; n];
        for (exps, _) in p.terms() {
            for (m, &e) in mins.iter_mut().zip(exps) {
                *m = (*m).min(e);
            }
        }
        mins
    };
    let num_min = min_of(num);
    let den_min = min_of(den);
    let neg = |v: &[i32]| -> Monomial { v.iter().map(|&e| -e).collect() };
    let shifted_num = num.mul_monomial(&neg(&num_min), &Cyclo::one())?;
    let shifted_den = den.mul_monomial(&neg(&den_min), &Cyclo::one())?;

    let top = if n == 0 { 0 } else { n - 1 };
    let quotient = divide_rec(&shifted_num, &shifted_den, top).map_err(|rem| {
        CoreError::NotDivisible {
            remainder: Box::new(rem),
            context: format!(
                "dividing a {}-term polynomial by a {}-term polynomial",
                num.term_count(),
                den.term_count()
            ),
        }
    })?;
    let shift: Monomial = num_min.iter().zip(&den_min).map(|(a, b)| a - b).collect();
    quotient.mul_monomial(&shift, &Cyclo::one())
}

/// Ordinary polynomial division over variables `0..=var` (all exponents of
/// those variables are non-negative on entry). On failure returns the
/// residual polynomial that could not be divided.
fn divide_rec(
    num: &LaurentPoly,
    den: &LaurentPoly,
    var: usize,
) -> Result<LaurentPoly, LaurentPoly> {
    if num.is_zero() {
        return Ok(LaurentPoly::zero(num.vars()));
    }
    if num.vars().is_empty() {
        // No variables: both sides are field constants.
        let c_num = num.constant_value().expect("constant");
        let c_den = den.constant_value().expect("constant");
        let q = c_num.div(&c_den).map_err(|_| num.clone())?;
        return Ok(LaurentPoly::constant(num.vars(), q));
    }

    let deg = |p: &LaurentPoly| -> i32 {
        p.terms().map(|(e, _)| e[var]).max().unwrap_or(0)
    };
    // Terms of `p` with exponent `d` in the principal variable, that exponent
    // zeroed out: the leading coefficient as a polynomial in fewer variables
    // (over the same variable set, for arithmetic convenience).
    let slice = |p: &LaurentPoly, d: i32| -> LaurentPoly {
        let picked = p
            .terms()
            .filter(|(e, _)| e[var] == d)
            .map(|(e, c)| {
                let mut e = e.clone();
                e[var] = 0;
                (e, c.clone())
            })
            .collect::<Vec<_>>();
        LaurentPoly::from_terms(p.vars(), picked).expect("aligned terms")
    };

    let den_deg = deg(den);
    let den_lead = slice(den, den_deg);
    let mut rest = num.clone();
    let mut quotient = LaurentPoly::zero(num.vars());
    while !rest.is_zero() {
        let rest_deg = deg(&rest);
        if rest_deg < den_deg {
            return Err(rest);
        }
        let rest_lead = slice(&rest, rest_deg);
        let q_coeff = if var == 0 {
            // The slices are constant in all remaining structure only when
            // there is a single variable; otherwise recurse on the next one.
            divide_constants(&rest_lead, &den_lead).ok_or_else(|| rest.clone())?
        } else {
            divide_rec(&rest_lead, &den_lead, var - 1).map_err(|_| rest.clone())?
        };
        let mut shift = vec![0; num.vars().len()];
        shift[var] = rest_deg - den_deg;
        let q_term = q_coeff.mul_monomial(&shift, &Cyclo::one()).expect("aligned");
        let product = q_term.checked_mul(den).expect("same varset");
        rest = rest.checked_sub(&product).expect("same varset");
        quotient = quotient.checked_add(&q_term).expect("same varset");
        debug_assert!(deg(&rest) < rest_deg || rest.is_zero());
    }
    Ok(quotient)
}

/// Division when both slices must be constants (single-variable base case).
fn divide_constants(num: &LaurentPoly, den: &LaurentPoly) -> Option<LaurentPoly> {
    let c_num = num.constant_value()?;
    let c_den = den.constant_value()?;
    let q = c_num.div(&c_den).ok()?;
    Some(LaurentPoly::constant(num.vars(), q))
}
