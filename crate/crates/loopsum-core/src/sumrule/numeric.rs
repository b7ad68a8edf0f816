//! Field-valued evaluation of the symmetric families and sum rules at
//! concrete points.
//!
//! The randomized verification mode needs both sides of an identity at many
//! random points; expanding full symbolic polynomials first would dominate
//! the cost at larger sizes. This module therefore re-evaluates each family
//! directly over field values, mirroring the defining sums of `symfunc` and
//! the index staircases of `polymatrix` entry for entry. Unit tests pin the
//! two implementations against each other at small sizes so they cannot
//! drift apart silently.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cyclofield::Cyclo;
use crate::error::CoreError;
use crate::polymatrix::MatrixKind;

/// `2(w - 1/w)`, the constant denominator of the `mu`/`nu` sums.
fn double_a() -> Cyclo {
    let a = &Cyclo::omega() - &Cyclo::omega_pow(-1);
    &Cyclo::from_int(2) * &a
}

fn double_a_inv() -> Cyclo {
    double_a().inv().expect("2(w - 1/w) is nonzero")
}

/// Values `E_0, .., E_n` of the elementary symmetric polynomials at `point`.
pub(crate) fn elem_vals(point: &[Cyclo]) -> Vec<Cyclo> {
    let n = point.len();
    let mut rows = vec![Cyclo::zero(); n + 1];
    rows[0] = Cyclo::one();
    for (i, z) in point.iter().enumerate() {
        for m in (1..=i + 1).rev() {
            let shifted = &rows[m - 1] * z;
            rows[m] += &shifted;
        }
    }
    rows
}

/// Values `eps_0, .., eps_2n` of the doubled elementary symmetric
/// polynomials at `point`. All coordinates must be nonzero.
pub(crate) fn eps_vals(point: &[Cyclo]) -> Result<Vec<Cyclo>, CoreError> {
    let n = point.len();
    let mut rows = vec![Cyclo::zero(); 2 * n + 1];
    rows[0] = Cyclo::one();
    for (i, z) in point.iter().enumerate() {
        let s = z + &z.inv()?;
        for m in (1..=2 * (i + 1)).rev() {
            let mut acc = &rows[m] + &(&rows[m - 1] * &s);
            if m >= 2 {
                acc += &rows[m - 2];
            }
            rows[m] = acc;
        }
    }
    Ok(rows)
}

/// Indexed lookup treating out-of-range indices as zero.
fn pick(vals: &[Cyclo], k: i64) -> Cyclo {
    if k < 0 || k as usize >= vals.len() {
        Cyclo::zero()
    } else {
        vals[k as usize].clone()
    }
}

/// Value of `mu_i` from precomputed elementary values (`es = elem_vals`).
pub(crate) fn mu_val(es: &[Cyclo], i: i64) -> Cyclo {
    let l = es.len() as i64 - 1;
    if !(1..=l).contains(&i) {
        return Cyclo::zero();
    }
    let mut acc = Cyclo::zero();
    for m in 0..=l {
        let partner = 2 * i - m - 1;
        if !(0..=l).contains(&partner) {
            continue;
        }
        let mut phase = &Cyclo::omega_pow(2 * (i - m) - 1) - &Cyclo::omega_pow(2 * (m - i) + 1);
        if (l + m) % 2 == 1 {
            phase = -&phase;
        }
        acc += &(&(&es[m as usize] * &es[partner as usize]) * &phase);
    }
    &acc * &double_a_inv()
}

/// Value of `nu_i` from precomputed doubled values (`epss = eps_vals`).
pub(crate) fn nu_val(epss: &[Cyclo], i: i64) -> Cyclo {
    let two_l = epss.len() as i64 - 1;
    let mut acc = Cyclo::zero();
    for j in 0..=two_l {
        let partner = 2 * i - 1 - j;
        if !(0..=two_l).contains(&partner) {
            continue;
        }
        let mut phase = &Cyclo::omega_pow(2 * (j - i) + 1) - &Cyclo::omega_pow(-2 * (j - i) - 1);
        if (j + i).rem_euclid(2) == 1 {
            phase = -&phase;
        }
        acc += &(&(&epss[partner as usize] * &epss[j as usize]) * &phase);
    }
    &acc * &double_a_inv()
}

/// Value of `lambda_i` from precomputed doubled values.
pub(crate) fn lam_val(epss: &[Cyclo], i: i64) -> Cyclo {
    let l = (epss.len() as i64 - 1) / 2;
    let mut acc = Cyclo::zero();
    for k in i..l {
        let mut term = nu_val(epss, l - k);
        if k.rem_euclid(2) == 1 {
            term = -&term;
        }
        acc += &term;
    }
    acc
}

/// Exact determinant of a square field-valued matrix by Gaussian
/// elimination with row pivoting. The 0x0 determinant is one.
pub(crate) fn det_val(mut m: Vec<Vec<Cyclo>>) -> Result<Cyclo, CoreError> {
    let n = m.len();
    for row in &m {
        if row.len() != n {
            return Err(CoreError::NonSquare {
                rows: n,
                cols: row.len(),
            });
        }
    }
    let mut acc = Cyclo::one();
    for k in 0..n {
        let pivot = match (k..n).find(|&r| !m[r][k].is_zero()) {
            Some(r) => r,
            None => return Ok(Cyclo::zero()),
        };
        if pivot != k {
            m.swap(k, pivot);
            acc = -&acc;
        }
        let inv = m[k][k].inv()?;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] * &inv;
            for j in k + 1..n {
                let delta = &factor * &m[k][j];
                let updated = &m[i][j] - &delta;
                m[i][j] = updated;
            }
            m[i][k] = Cyclo::zero();
        }
        acc *= &m[k][k];
    }
    Ok(acc)
}

/// The determinant matrix of the given kind evaluated at `point`, mirroring
/// the entry staircases of the symbolic builder index for index.
pub(crate) fn matrix_vals(kind: MatrixKind, point: &[Cyclo]) -> Result<Vec<Vec<Cyclo>>, CoreError> {
    let l = point.len() as i64;
    if l == 0 {
        return Err(CoreError::SizeRule {
            kind: kind.name().into(),
            detail: "at least one variable is required".into(),
        });
    }
    let size = |n: i64| -> usize { n.max(0) as usize };
    let build = |m: usize, f: &dyn Fn(i64, i64) -> Cyclo| -> Vec<Vec<Cyclo>> {
        (0..m)
            .map(|r| (0..m).map(|c| f(r as i64, c as i64)).collect())
            .collect()
    };
    Ok(match kind {
        MatrixKind::EStaircase => {
            let es = elem_vals(point);
            build(size(l - 1), &|r, c| pick(&es, 3 * (c + 1) - 2 * (r + 1)))
        }
        MatrixKind::EpsDoubled => {
            let ep = eps_vals(point)?;
            build(size(2 * l - 2), &|r, c| pick(&ep, 3 * (c + 1) - 2 * (r + 1)))
        }
        MatrixKind::VMinus => {
            let ep = eps_vals(point)?;
            build(size(l - 1), &|r, c| {
                let (i, j) = (r + 1, c + 1);
                &pick(&ep, 3 * j - 2 * i) - &pick(&ep, 3 * j + 2 * i - 4 * l)
            })
        }
        MatrixKind::WPlus => {
            let ep = eps_vals(point)?;
            build(size(l - 1), &|r, c| {
                let (i, j) = (r + l, c + l);
                &pick(&ep, 3 * j - 2 * i) + &pick(&ep, 3 * j + 2 * i - 4 * l)
            })
        }
        MatrixKind::Mu => {
            let es = elem_vals(point);
            if l % 2 == 0 {
                build(size(l / 2), &|i, j| mu_val(&es, 3 * i - j + 1))
            } else {
                build(size((l - 1) / 2), &|r, c| {
                    mu_val(&es, 3 * (r + 1) - (c + 1))
                })
            }
        }
        MatrixKind::NuDiff => {
            let ep = eps_vals(point)?;
            let m = l / 2;
            if l % 2 == 1 {
                build(size(m), &|i, j| {
                    &nu_val(&ep, 3 * i - j + 1) - &nu_val(&ep, 3 * i + j + 3 - l)
                })
            } else {
                build(size(m), &|i, j| {
                    &nu_val(&ep, 3 * i - j + 2) - &nu_val(&ep, 3 * i + j + 2 - l)
                })
            }
        }
        MatrixKind::LambdaDiff => {
            let ep = eps_vals(point)?;
            let m = if l % 2 == 1 { (l - 1) / 2 } else { l / 2 - 1 };
            build(size(m), &|r, c| {
                let (i, j) = (r + 1, c + 1);
                &lam_val(&ep, 3 * i - j) - &lam_val(&ep, 3 * i + j)
            })
        }
    })
}

/// Determinant of the given matrix kind at `point`.
pub(crate) fn det_of(kind: MatrixKind, point: &[Cyclo]) -> Result<Cyclo, CoreError> {
    det_val(matrix_vals(kind, point)?)
}

/// Periodic sum value via the elementary staircase determinant.
pub(crate) fn zp_val(point: &[Cyclo]) -> Result<Cyclo, CoreError> {
    if point.len() <= 1 {
        return Ok(Cyclo::one());
    }
    det_of(MatrixKind::EStaircase, point)
}

/// Open sum value via the lambda-difference determinant.
pub(crate) fn z_open_val(point: &[Cyclo]) -> Result<Cyclo, CoreError> {
    if point.len() <= 2 {
        return Ok(Cyclo::one());
    }
    det_of(MatrixKind::LambdaDiff, point)
}

/// Doubled-list determinant value (the product-form sum).
pub(crate) fn ztilde_val(point: &[Cyclo]) -> Result<Cyclo, CoreError> {
    det_of(MatrixKind::EpsDoubled, point)
}

/// Value of the difference-block determinant.
pub(crate) fn v_val(point: &[Cyclo]) -> Result<Cyclo, CoreError> {
    det_of(MatrixKind::VMinus, point)
}

/// Value of the sum-block determinant, including its constant one-half.
pub(crate) fn w_val(point: &[Cyclo]) -> Result<Cyclo, CoreError> {
    Ok(&det_of(MatrixKind::WPlus, point)? * &Cyclo::from_ratio(1, 2))
}

/// Value of the plus-variant square matrix determinant (entries
/// `eps_{3j-2i} + eps_{3j+2i-4L}` over `1 <= i, j <= L-1`).
pub(crate) fn plus_range_val(point: &[Cyclo]) -> Result<Cyclo, CoreError> {
    let l = point.len() as i64;
    let ep = eps_vals(point)?;
    let m = (l - 1).max(0) as usize;
    let rows = (0..m)
        .map(|r| {
            (0..m)
                .map(|c| {
                    let (i, j) = (r as i64 + 1, c as i64 + 1);
                    &pick(&ep, 3 * j - 2 * i) + &pick(&ep, 3 * j + 2 * i - 4 * l)
                })
                .collect()
        })
        .collect();
    det_val(rows)
}

/// Open specialisation factor at the distinguished index:
/// `prod_{j != d} (z_d + 1/z_d + z_j + 1/z_j)`.
pub(crate) fn f_open_val(point: &[Cyclo], d: usize) -> Result<Cyclo, CoreError> {
    let s_d = &point[d] + &point[d].inv()?;
    let mut acc = Cyclo::one();
    for (j, z) in point.iter().enumerate() {
        if j == d {
            continue;
        }
        acc *= &(&s_d + &(z + &z.inv()?));
    }
    Ok(acc)
}

/// Periodic specialisation factor at the distinguished index:
/// `z_d * prod_{j != d} (z_d + z_j)`.
pub(crate) fn f_periodic_val(point: &[Cyclo], d: usize) -> Cyclo {
    let mut acc = point[d].clone();
    for (j, z) in point.iter().enumerate() {
        if j == d {
            continue;
        }
        acc *= &(&point[d] + z);
    }
    acc
}

/// Periodic generating polynomial evaluated at `(point, t)`:
/// `t/(2(w - 1/w)) * { prod_j (w z_j + t)(z_j/w - t)
///                   - prod_j (z_j/w + t)(w z_j - t) }`.
pub(crate) fn pp_gen_val(point: &[Cyclo], t: &Cyclo) -> Cyclo {
    let w = Cyclo::omega();
    let w_inv = Cyclo::omega_pow(-1);
    let mut plus = Cyclo::one();
    let mut minus = Cyclo::one();
    for z in point {
        plus *= &(&(&(&w * z) + t) * &(&(&w_inv * z) - t));
        minus *= &(&(&(&w_inv * z) + t) * &(&(&w * z) - t));
    }
    &(&(&plus - &minus) * t) * &double_a_inv()
}

/// The `t`-eliminated periodic polynomial at `point`: the alternating sum
/// of the even `t`-coefficients of the generating polynomial, divided by
/// the product of all coordinates. The coefficient of `t^{2(L-j+1)}` is
/// `mu_j`, so the sum telescopes over the `mu` values.
pub(crate) fn pp_fixed_val(point: &[Cyclo]) -> Result<Cyclo, CoreError> {
    let l = point.len() as i64;
    let es = elem_vals(point);
    let mut acc = Cyclo::zero();
    for j in 1..=l {
        let mut term = mu_val(&es, j);
        if (l - j + 1).rem_euclid(2) == 1 {
            term = -&term;
        }
        acc += &term;
    }
    let mut denom = Cyclo::one();
    for z in point {
        denom *= z;
    }
    acc.div(&denom)
}

/// Open generating polynomial evaluated at `(point, t)`. Rejects `t` with
/// `t^2 = 1`, where the defining quotient degenerates.
pub(crate) fn p_open_gen_val(point: &[Cyclo], t: &Cyclo) -> Result<Cyclo, CoreError> {
    let one = Cyclo::one();
    let t2 = t * t;
    let denom_t = &one - &t2;
    if denom_t.is_zero() {
        return Err(CoreError::ZeroValue("1 - t^2".into()));
    }
    let product = |k1: i64, k2: i64| -> Result<Cyclo, CoreError> {
        let mut acc = Cyclo::one();
        for z in point {
            for &k in &[k1, k2] {
                let wk = Cyclo::omega_pow(k);
                acc *= &(&(t + &(&wk * z)) * &(&wk + &(t * z)));
            }
            acc = acc.div(&(&(z * z) * &t2))?;
        }
        Ok(acc)
    };
    let diff = &product(1, 2)? - &product(-1, -2)?;
    let mut scale = double_a_inv();
    if point.len() % 2 == 1 {
        scale = -&scale;
    }
    (&(&diff * t) * &scale).div(&denom_t)
}

/// The open generating polynomial at `t = w`.
pub(crate) fn p_open_fixed_val(point: &[Cyclo]) -> Result<Cyclo, CoreError> {
    p_open_gen_val(point, &Cyclo::omega())
}

/// Draws a nonzero rational with numerator in `-9..=9` and denominator in
/// `1..=4`. This range is small enough to keep coefficient growth mild and
/// large enough that accidental collisions on distinct polynomials are
/// negligible.
pub(crate) fn draw_cyclo(rng: &mut ChaCha8Rng) -> Cyclo {
    let num = loop {
        let n = rng.gen_range(-9i64..=9);
        if n != 0 {
            break n;
        }
    };
    let den = rng.gen_range(1i64..=4);
    Cyclo::from_ratio(num, den)
}

/// Draws `n` independent nonzero rational coordinates.
pub(crate) fn draw_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Cyclo> {
    (0..n).map(|_| draw_cyclo(rng)).collect()
}

/// Draws a nonzero rational avoiding `t^2 = 1`, the degenerate locus of the
/// open generating polynomial.
pub(crate) fn draw_t(rng: &mut ChaCha8Rng) -> Cyclo {
    loop {
        let t = draw_cyclo(rng);
        let t2 = &t * &t;
        if !(&Cyclo::one() - &t2).is_zero() {
            return t;
        }
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::laurent::{EvalPoint, LaurentPoly, VarSet};
    use crate::polymatrix::{build_matrix, det, DetAlgo};
    use crate::symfunc::{
        elem, eps, f_open, f_periodic, lam, mu, nu, p_open_gen, pp_fixed, pp_gen,
    };

    fn zvars(n: usize) -> VarSet {
        VarSet::numbered("z", n)
    }

    fn eval_at(p: &LaurentPoly, point: &[Cyclo]) -> Cyclo {
        let assignments: Vec<(String, Cyclo)> = p
            .vars()
            .names()
            .iter()
            .cloned()
            .zip(point.iter().cloned())
            .collect();
        p.evaluate(&EvalPoint::new(assignments).unwrap()).unwrap()
    }

    fn sample_points(n: usize, count: usize) -> Vec<Vec<Cyclo>> {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        (0..count).map(|_| draw_point(&mut rng, n)).collect()
    }

    #[test]
    fn family_values_match_symbolic_families() {
        for l in 1..=4usize {
            let vars = zvars(l);
            for point in sample_points(l, 3) {
                let es = elem_vals(&point);
                let ep = eps_vals(&point).unwrap();
                for m in 0..=l as i64 {
                    assert_eq!(es[m as usize], eval_at(&elem(&vars, m), &point));
                }
                for m in 0..=2 * l as i64 {
                    assert_eq!(ep[m as usize], eval_at(&eps(&vars, m), &point));
                }
                for i in -1..=l as i64 + 1 {
                    assert_eq!(mu_val(&es, i), eval_at(&mu(&vars, i), &point), "mu {i}");
                }
                for i in 0..=2 * l as i64 {
                    assert_eq!(nu_val(&ep, i), eval_at(&nu(&vars, i), &point), "nu {i}");
                }
                for i in -1..=l as i64 {
                    assert_eq!(lam_val(&ep, i), eval_at(&lam(&vars, i), &point), "lam {i}");
                }
            }
        }
    }

    #[test]
    fn determinant_values_match_symbolic_determinants() {
        for l in 2..=4usize {
            let vars = zvars(l);
            let points = sample_points(l, 2);
            for kind in MatrixKind::ALL {
                let symbolic = det(&build_matrix(kind, &vars).unwrap(), DetAlgo::Bareiss).unwrap();
                for point in &points {
                    assert_eq!(
                        det_of(kind, point).unwrap(),
                        eval_at(&symbolic, point),
                        "kind {kind:?} at L={l}"
                    );
                }
            }
        }
    }

    #[test]
    fn factor_and_generating_values_match_symbolic_forms() {
        for l in 1..=3usize {
            let vars = zvars(l);
            let names = vars.names().to_vec();
            let ext = vars.with_appended("t").unwrap();
            let pp = pp_gen(&vars).unwrap();
            let pg = p_open_gen(&vars).unwrap();
            let qq = pp_fixed(&vars).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            for _ in 0..3 {
                let point = draw_point(&mut rng, l);
                let t = draw_t(&mut rng);
                let mut extended = point.clone();
                extended.push(t.clone());
                for d in 0..l {
                    assert_eq!(
                        f_periodic_val(&point, d),
                        eval_at(&f_periodic(&vars, &names[d]).unwrap(), &point)
                    );
                    assert_eq!(
                        f_open_val(&point, d).unwrap(),
                        eval_at(&f_open(&vars, &names[d]).unwrap(), &point)
                    );
                }
                assert_eq!(pp_gen_val(&point, &t), eval_at(&pp, &extended));
                assert_eq!(p_open_gen_val(&point, &t).unwrap(), eval_at(&pg, &extended));
                assert_eq!(pp_fixed_val(&point).unwrap(), eval_at(&qq, &point));
            }
        }
    }

    #[test]
    fn gaussian_determinant_handles_pivoting_and_singularity() {
        let zero = Cyclo::zero();
        let one = Cyclo::one();
        let two = Cyclo::from_int(2);
        // Needs a row swap: [[0, 1], [2, 0]] has determinant -2.
        let m = vec![
            vec![zero.clone(), one.clone()],
            vec![two.clone(), zero.clone()],
        ];
        assert_eq!(det_val(m).unwrap(), Cyclo::from_int(-2));
        // Singular matrix.
        let s = vec![vec![one.clone(), one.clone()], vec![one.clone(), one]];
        assert!(det_val(s).unwrap().is_zero());
        // Empty matrix has determinant one.
        assert!(det_val(Vec::new()).unwrap().is_one());
    }
}
