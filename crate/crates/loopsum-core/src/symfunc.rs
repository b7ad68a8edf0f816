//! The symmetric-function families underlying the loop-model sum rules.
//!
//! Everything here is built from two generating products over a variable
//! list `z_1, .., z_L`:
//!
//! * the elementary symmetric polynomials `E_m`, with generating product
//!   `prod_j (1 + z_j u)`;
//! * their doubled variants `eps_m`, the elementary symmetric polynomials of
//!   the list `z_1, 1/z_1, .., z_L, 1/z_L`, with generating product
//!   `prod_j (1 + z_j u)(1 + u/z_j)`.
//!
//! On top of these sit two two-boundary generating polynomials in an extra
//! variable `t` (one per boundary condition), their specialisations with `t`
//! eliminated, and three derived families `mu_i`, `nu_i`, `lambda_i` that
//! appear as determinant entries. Index conventions follow the defining
//! sums; out-of-range indices give the zero polynomial rather than an error,
//! which keeps determinant staircases and convolution identities uniform.

use crate::cyclofield::Cyclo;
use crate::error::CoreError;
use crate::laurent::{exact_divide, LaurentPoly, Monomial, VarSet};

/// Exponent vector with the given `(position, exponent)` entries set.
fn exps(n: usize, entries: &[(usize, i32)]) -> Monomial {
    let mut e = vec![0; n];
    for &(i, k) in entries {
        e[i] += k;
    }
    e
}

/// `2(w - 1/w)`, the constant denominator of the `mu`/`nu` sums; its square
/// is -12, so it is nonzero and invertible.
fn double_a() -> Cyclo {
    let a = &Cyclo::omega() - &Cyclo::omega_pow(-1);
    &Cyclo::from_int(2) * &a
}

fn double_a_inv() -> Cyclo {
    double_a().inv().expect("2(w - 1/w) is nonzero")
}

/// All elementary symmetric polynomials `E_0, .., E_n` of the variables.
pub fn elem_all(vars: &VarSet) -> Vec<LaurentPoly> {
    let n = vars.len();
    let mut rows: Vec<LaurentPoly> = (0..=n).map(|_| LaurentPoly::zero(vars)).collect();
    rows[0] = LaurentPoly::one(vars);
    for i in 0..n {
        // Multiply the generating product by (1 + z_i u), descending so each
        // degree reads the previous variable's coefficients.
        for m in (1..=i + 1).rev() {
            let shifted = rows[m - 1]
                .mul_monomial(&exps(n, &[(i, 1)]), &Cyclo::one())
                .expect("aligned exponents");
            rows[m] = rows[m].checked_add(&shifted).expect("same variables");
        }
    }
    rows
}

/// The elementary symmetric polynomial `E_m`; zero outside `0 <= m <= n`.
pub fn elem(vars: &VarSet, m: i64) -> LaurentPoly {
    let n = vars.len() as i64;
    if !(0..=n).contains(&m) {
        return LaurentPoly::zero(vars);
    }
    elem_all(vars).swap_remove(m as usize)
}

/// All doubled elementary symmetric polynomials `eps_0, .., eps_2n`:
/// the `E_m` of the doubled list `z_1, 1/z_1, .., z_n, 1/z_n`.
pub fn eps_all(vars: &VarSet) -> Vec<LaurentPoly> {
    let n = vars.len();
    let mut rows: Vec<LaurentPoly> = (0..=2 * n).map(|_| LaurentPoly::zero(vars)).collect();
    rows[0] = LaurentPoly::one(vars);
    for i in 0..n {
        // Multiply by (1 + z_i u)(1 + u/z_i) = 1 + (z_i + 1/z_i) u + u^2.
        for m in (1..=2 * (i + 1)).rev() {
            let up = rows[m - 1]
                .mul_monomial(&exps(n, &[(i, 1)]), &Cyclo::one())
                .expect("aligned exponents");
            let down = rows[m - 1]
                .mul_monomial(&exps(n, &[(i, -1)]), &Cyclo::one())
                .expect("aligned exponents");
            let mut acc = rows[m].checked_add(&up).expect("same variables");
            acc = acc.checked_add(&down).expect("same variables");
            if m >= 2 {
                acc = acc.checked_add(&rows[m - 2]).expect("same variables");
            }
            rows[m] = acc;
        }
    }
    rows
}

/// The doubled elementary symmetric polynomial `eps_m`; zero outside
/// `0 <= m <= 2n`. Palindromic: `eps_m == eps_{2n-m}`.
pub fn eps(vars: &VarSet, m: i64) -> LaurentPoly {
    let n = vars.len() as i64;
    if !(0..=2 * n).contains(&m) {
        return LaurentPoly::zero(vars);
    }
    eps_all(vars).swap_remove(m as usize)
}

/// Open-boundary specialisation factor attached to the distinguished
/// variable `x`: `prod_{y != x} (x + 1/x + y + 1/y)`.
pub fn f_open(vars: &VarSet, distinguished: &str) -> Result<LaurentPoly, CoreError> {
    let d = vars.index_of(distinguished)?;
    let n = vars.len();
    let mut acc = LaurentPoly::one(vars);
    for j in 0..n {
        if j == d {
            continue;
        }
        let factor = LaurentPoly::from_terms(
            vars,
            [
                (exps(n, &[(d, 1)]), Cyclo::one()),
                (exps(n, &[(d, -1)]), Cyclo::one()),
                (exps(n, &[(j, 1)]), Cyclo::one()),
                (exps(n, &[(j, -1)]), Cyclo::one()),
            ],
        )?;
        acc = acc.checked_mul(&factor)?;
    }
    Ok(acc)
}

/// Periodic-boundary specialisation factor attached to the distinguished
/// variable `x`: `x * prod_{y != x} (x + y)`.
pub fn f_periodic(vars: &VarSet, distinguished: &str) -> Result<LaurentPoly, CoreError> {
    let d = vars.index_of(distinguished)?;
    let n = vars.len();
    let mut acc = LaurentPoly::var(vars, distinguished)?;
    for j in 0..n {
        if j == d {
            continue;
        }
        let factor = LaurentPoly::from_terms(
            vars,
            [
                (exps(n, &[(d, 1)]), Cyclo::one()),
                (exps(n, &[(j, 1)]), Cyclo::one()),
            ],
        )?;
        acc = acc.checked_mul(&factor)?;
    }
    Ok(acc)
}

/// Periodic generating polynomial in an extra variable `t` (appended last):
///
/// `t/(2(w - 1/w)) * { prod_j (w z_j + t)(z_j/w - t)
///                   - prod_j (z_j/w + t)(w z_j - t) }`.
///
/// Only even powers of `t` survive the antisymmetrisation.
pub fn pp_gen(vars: &VarSet) -> Result<LaurentPoly, CoreError> {
    let ext = vars.with_appended("t")?;
    let n = ext.len();
    let t = n - 1;
    let mut plus = LaurentPoly::one(&ext);
    let mut minus = LaurentPoly::one(&ext);
    for j in 0..vars.len() {
        let pair = |za: Cyclo, ta: Cyclo, zb: Cyclo, tb: Cyclo| -> Result<LaurentPoly, CoreError> {
            let first = LaurentPoly::from_terms(
                &ext,
                [(exps(n, &[(j, 1)]), za), (exps(n, &[(t, 1)]), ta)],
            )?;
            let second = LaurentPoly::from_terms(
                &ext,
                [(exps(n, &[(j, 1)]), zb), (exps(n, &[(t, 1)]), tb)],
            )?;
            first.checked_mul(&second)
        };
        let one = Cyclo::one();
        let w = Cyclo::omega();
        let w_inv = Cyclo::omega_pow(-1);
        plus = plus.checked_mul(&pair(w.clone(), one.clone(), w_inv.clone(), -&one)?)?;
        minus = minus.checked_mul(&pair(w_inv, one.clone(), w, -&one)?)?;
    }
    let diff = plus.checked_sub(&minus)?;
    let shifted = diff.mul_monomial(&exps(n, &[(t, 1)]), &Cyclo::one())?;
    Ok(shifted.scale(&double_a_inv()))
}

/// The periodic generating polynomial with `t^2` sent to `-1` and the full
/// variable product divided out. Satisfies the pair reduction
/// `Q_L(z w, z/w, rest) = (z + 1/z) Q_{L-1}(z, rest)`.
pub fn pp_fixed(vars: &VarSet) -> Result<LaurentPoly, CoreError> {
    let gen = pp_gen(vars)?;
    let max_t = gen.max_exponent("t")?.unwrap_or(0);
    let mut acc = LaurentPoly::zero(vars);
    let mut e = 0;
    while e <= max_t {
        let c = gen.coeff_in_var("t", e)?;
        let signed = if (e / 2) % 2 == 0 { c } else { c.neg() };
        acc = acc.checked_add(&signed)?;
        e += 2;
    }
    // Dividing by the product of all variables is a monomial shift.
    acc.mul_monomial(&vec![-1; vars.len()], &Cyclo::one())
}

/// Open-boundary generating polynomial in an extra variable `t` (appended
/// last):
///
/// `(-1)^L t / (2 (1 - t^2)(w - 1/w)) * { A - B }`, where `A` runs over
/// `(t + w z_j)(w + t z_j)(t + w^2 z_j)(w^2 + t z_j) / (z_j^2 t^2)` and `B`
/// is the mirror image with `w -> 1/w`. The division by `1 - t^2` is exact;
/// a failure would surface as an error rather than a truncation.
pub fn p_open_gen(vars: &VarSet) -> Result<LaurentPoly, CoreError> {
    let ext = vars.with_appended("t")?;
    let n = ext.len();
    let t = n - 1;
    let l = vars.len();
    let product = |k1: i64, k2: i64| -> Result<LaurentPoly, CoreError> {
        let mut acc = LaurentPoly::one(&ext);
        for j in 0..l {
            for &k in &[k1, k2] {
                let first = LaurentPoly::from_terms(
                    &ext,
                    [
                        (exps(n, &[(t, 1)]), Cyclo::one()),
                        (exps(n, &[(j, 1)]), Cyclo::omega_pow(k)),
                    ],
                )?;
                let second = LaurentPoly::from_terms(
                    &ext,
                    [
                        (exps(n, &[]), Cyclo::omega_pow(k)),
                        (exps(n, &[(j, 1), (t, 1)]), Cyclo::one()),
                    ],
                )?;
                acc = acc.checked_mul(&first)?.checked_mul(&second)?;
            }
            acc = acc.mul_monomial(&exps(n, &[(j, -2), (t, -2)]), &Cyclo::one())?;
        }
        Ok(acc)
    };
    let diff = product(1, 2)?.checked_sub(&product(-1, -2)?)?;
    let mut scale = double_a_inv();
    if l % 2 == 1 {
        scale = -&scale;
    }
    let numerator = diff
        .mul_monomial(&exps(n, &[(t, 1)]), &Cyclo::one())?
        .scale(&scale);
    let one_minus_t2 = LaurentPoly::from_terms(
        &ext,
        [
            (exps(n, &[]), Cyclo::one()),
            (exps(n, &[(t, 2)]), -&Cyclo::one()),
        ],
    )?;
    exact_divide(&numerator, &one_minus_t2)
}

/// The open generating polynomial specialised at `t = w`. Satisfies the pair
/// reduction `P_L(z w, z/w, rest) = (z^2 + 1 + 1/z^2) P_{L-1}(z, rest)`
/// exactly, with `P_1 = eps_1` and `P_2 = eps_1 eps_2`. This specialisation is
/// also the divisor in the even-size nu-determinant expression for the open
/// sum (see the sumrule module).
pub fn p_open_fixed(vars: &VarSet) -> Result<LaurentPoly, CoreError> {
    p_open_gen(vars)?.subst_const("t", &Cyclo::omega())
}

/// Determinant-entry family for the periodic model:
///
/// `mu_i = (1/(2(w - 1/w))) * sum_{m=0}^{L} (-1)^{L+m}
///         (w^{2(i-m)-1} - w^{2(m-i)+1}) E_m E_{2i-m-1}`,
///
/// zero outside `1 <= i <= L`. Equivalently, `mu_j` is the coefficient of
/// `t^{2(L-j+1)}` in [`pp_gen`].
pub fn mu(vars: &VarSet, i: i64) -> LaurentPoly {
    mu_from(&elem_all(vars), vars, i)
}

fn mu_from(es: &[LaurentPoly], vars: &VarSet, i: i64) -> LaurentPoly {
    let l = vars.len() as i64;
    if !(1..=l).contains(&i) {
        return LaurentPoly::zero(vars);
    }
    let mut acc = LaurentPoly::zero(vars);
    for m in 0..=l {
        let partner = 2 * i - m - 1;
        if !(0..=l).contains(&partner) {
            continue;
        }
        let mut phase = &Cyclo::omega_pow(2 * (i - m) - 1) - &Cyclo::omega_pow(2 * (m - i) + 1);
        if (l + m) % 2 == 1 {
            phase = -&phase;
        }
        let product = es[m as usize]
            .checked_mul(&es[partner as usize])
            .expect("same variables");
        acc = acc
            .checked_add(&product.scale(&phase))
            .expect("same variables");
    }
    acc.scale(&double_a_inv())
}

/// Determinant-entry family for the open model:
///
/// `nu_i = (1/(2(w - 1/w))) * sum_{j=0}^{2L} (-1)^{j+i}
///         (w^{2(j-i)+1} - w^{-2(j-i)-1}) eps_{2i-1-j} eps_j`.
///
/// The sum self-truncates: out-of-range `eps` indices contribute nothing, so
/// `nu_i = 0` for `i <= 0` without a separate rule.
pub fn nu(vars: &VarSet, i: i64) -> LaurentPoly {
    nu_from(&eps_all(vars), vars, i)
}

fn nu_from(epss: &[LaurentPoly], vars: &VarSet, i: i64) -> LaurentPoly {
    let l = vars.len() as i64;
    let mut acc = LaurentPoly::zero(vars);
    for j in 0..=2 * l {
        let partner = 2 * i - 1 - j;
        if !(0..=2 * l).contains(&partner) {
            continue;
        }
        let mut phase = &Cyclo::omega_pow(2 * (j - i) + 1) - &Cyclo::omega_pow(-2 * (j - i) - 1);
        if (j + i).rem_euclid(2) == 1 {
            phase = -&phase;
        }
        let product = epss[partner as usize]
            .checked_mul(&epss[j as usize])
            .expect("same variables");
        acc = acc
            .checked_add(&product.scale(&phase))
            .expect("same variables");
    }
    acc.scale(&double_a_inv())
}

/// Alternating partial sums of the `nu` family:
/// `lambda_i = sum_{k=i}^{L-1} (-1)^k nu_{L-k}`, so `lambda_i = 0` for
/// `i >= L`. Negative `i` extends the same sum (the extra `nu` indices above
/// `L` stay meaningful up to `2L`).
pub fn lam(vars: &VarSet, i: i64) -> LaurentPoly {
    let l = vars.len() as i64;
    let epss = eps_all(vars);
    let mut acc = LaurentPoly::zero(vars);
    for k in i..l {
        let mut term = nu_from(&epss, vars, l - k);
        if k.rem_euclid(2) == 1 {
            term = term.neg();
        }
        acc = acc.checked_add(&term).expect("same variables");
    }
    acc
}
