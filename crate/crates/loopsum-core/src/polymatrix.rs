//! Polynomial matrices with exact determinants.
//!
//! Provides the rectangular [`PolyMatrix`] container, builders for every
//! determinant family used by the sum rules ([`build_matrix`]), two exact
//! determinant algorithms ([`det`]), the centrosymmetric block split
//! ([`centro_blocks`]), and the row/column reduction that exhibits the
//! mu-determinant recursion ([`row_column_reduce`]).

use std::collections::HashMap;
use std::fmt;

use crate::cyclofield::Cyclo;
use crate::error::CoreError;
use crate::laurent::{exact_divide, LaurentPoly, VarSet};
use crate::symfunc::{elem, eps, lam, mu, nu};

/// A dense rectangular matrix of Laurent polynomials over one shared
/// variable set. Immutable after construction.
#[derive(Clone, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    vars: VarSet,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    /// Builds a matrix from row-major nested vectors. Every entry must share
    /// `vars`, and the rows must be rectangular.
    pub fn from_rows(vars: &VarSet, rows: Vec<Vec<LaurentPoly>>) -> Result<Self, CoreError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(CoreError::SizeRule {
                    kind: "matrix".into(),
                    detail: format!("ragged rows: expected {ncols} columns, found {}", row.len()),
                });
            }
            for entry in row {
                if entry.vars() != vars {
                    return Err(CoreError::VarSetMismatch {
                        left: vars.joined(),
                        right: entry.vars().joined(),
                    });
                }
                entries.push(entry);
            }
        }
        Ok(Self {
            rows: nrows,
            cols: ncols,
            vars: vars.clone(),
            entries,
        })
    }

    /// Builds an `nrows x ncols` matrix by evaluating `f(row, col)`
    /// (0-based) for every position.
    pub fn from_fn<F>(vars: &VarSet, nrows: usize, ncols: usize, mut f: F) -> Result<Self, CoreError>
    where
        F: FnMut(usize, usize) -> Result<LaurentPoly, CoreError>,
    {
        let mut rows = Vec::with_capacity(nrows);
        for r in 0..nrows {
            let mut row = Vec::with_capacity(ncols);
            for c in 0..ncols {
                row.push(f(r, c)?);
            }
            rows.push(row);
        }
        Self::from_rows(vars, rows)
    }

    /// The `n x n` identity matrix over `vars`.
    pub fn identity(vars: &VarSet, n: usize) -> Self {
        Self::from_fn(vars, n, n, |r, c| {
            Ok(if r == c {
                LaurentPoly::one(vars)
            } else {
                LaurentPoly::zero(vars)
            })
        })
        .expect("identity entries share vars")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    /// Entry at 0-based `(row, col)`. Panics when out of range.
    pub fn entry(&self, row: usize, col: usize) -> &LaurentPoly {
        assert!(row < self.rows && col < self.cols, "matrix index out of range");
        &self.entries[row * self.cols + col]
    }

    /// Row-major iterator over `(row, col, entry)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &LaurentPoly)> {
        self.entries
            .iter()
            .enumerate()
            .map(|(k, e)| (k / self.cols, k % self.cols, e))
    }

    /// Exact matrix product.
    pub fn mul(&self, rhs: &Self) -> Result<Self, CoreError> {
        if self.vars != rhs.vars {
            return Err(CoreError::VarSetMismatch {
                left: self.vars.joined(),
                right: rhs.vars.joined(),
            });
        }
        if self.cols != rhs.rows {
            return Err(CoreError::SizeRule {
                kind: "matrix product".into(),
                detail: format!(
                    "inner dimensions differ: {}x{} times {}x{}",
                    self.rows, self.cols, rhs.rows, rhs.cols
                ),
            });
        }
        Self::from_fn(&self.vars, self.rows, rhs.cols, |r, c| {
            let mut acc = LaurentPoly::zero(&self.vars);
            for k in 0..self.cols {
                acc = acc.checked_add(&self.entry(r, k).checked_mul(rhs.entry(k, c))?)?;
            }
            Ok(acc)
        })
    }

    /// Scales every entry by a field constant.
    pub fn scale(&self, c: &Cyclo) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            vars: self.vars.clone(),
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    /// The sub-matrix spanned by 0-based row range `r0..r1` and column range
    /// `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        Self::from_fn(&self.vars, r1 - r0, c1 - c0, |r, c| {
            Ok(self.entry(r0 + r, c0 + c).clone())
        })
        .expect("block entries share vars")
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {:?}", self.rows, self.cols, self.vars)?;
        fmt::Display::fmt(self, f)
    }
}

/// The determinant families. Sizes are functions of the variable count `L`:
///
/// * `EStaircase` — `(L-1) x (L-1)`, entries `E_{3j-2i}` (1-based `i, j`).
/// * `EpsDoubled` — `(2L-2) x (2L-2)`, entries `eps_{3j-2i}` (1-based).
/// * `VMinus` — `(L-1) x (L-1)`, entries `eps_{3j-2i} - eps_{3j+2i-4L}`
///   (1-based).
/// * `WPlus` — `(L-1) x (L-1)`, entries `eps_{3j-2i} + eps_{3j+2i-4L}` with
///   `i, j` running over `L..=2L-2`.
/// * `Mu` — even `L`: `(L/2) x (L/2)`, entries `mu_{3i-j+1}` (0-based);
///   odd `L`: `((L-1)/2)^2`, entries `mu_{3i-j}` (1-based).
/// * `NuDiff` — odd `L = 2m+1`: `m x m`, entries
///   `nu_{3i-j+1} - nu_{3i+j+3-L}` (0-based); even `L = 2m`: `m x m`,
///   entries `nu_{3i-j+2} - nu_{3i+j+2-L}` (0-based).
/// * `LambdaDiff` — `m x m` with entries `lambda_{3i-j} - lambda_{3i+j}`
///   (1-based), `m = (L-1)/2` for odd `L` and `m = L/2 - 1` for even `L`.
///
/// Out-of-range family indices contribute zero entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    EStaircase,
    EpsDoubled,
    VMinus,
    WPlus,
    Mu,
    NuDiff,
    LambdaDiff,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 7] = [
        MatrixKind::EStaircase,
        MatrixKind::EpsDoubled,
        MatrixKind::VMinus,
        MatrixKind::WPlus,
        MatrixKind::Mu,
        MatrixKind::NuDiff,
        MatrixKind::LambdaDiff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::EStaircase => "e-staircase",
            MatrixKind::EpsDoubled => "eps-doubled",
            MatrixKind::VMinus => "v-minus",
            MatrixKind::WPlus => "w-plus",
            MatrixKind::Mu => "mu",
            MatrixKind::NuDiff => "nu-diff",
            MatrixKind::LambdaDiff => "lambda-diff",
        }
    }
}

impl std::str::FromStr for MatrixKind {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, CoreError> {
        MatrixKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CoreError::Parse(format!("unknown matrix kind `{s}`")))
    }
}

/// Builds the determinant matrix of the given kind over `vars`. Empty (0x0)
/// matrices are legal and have determinant one.
pub fn build_matrix(kind: MatrixKind, vars: &VarSet) -> Result<PolyMatrix, CoreError> {
    let l = vars.len() as i64;
    if l == 0 {
        return Err(CoreError::SizeRule {
            kind: kind.name().into(),
            detail: "at least one variable is required".into(),
        });
    }
    let size = |n: i64| -> usize { n.max(0) as usize };
    match kind {
        MatrixKind::EStaircase => PolyMatrix::from_fn(vars, size(l - 1), size(l - 1), |r, c| {
            let (i, j) = (r as i64 + 1, c as i64 + 1);
            Ok(elem(vars, 3 * j - 2 * i))
        }),
        MatrixKind::EpsDoubled => {
            PolyMatrix::from_fn(vars, size(2 * l - 2), size(2 * l - 2), |r, c| {
                let (i, j) = (r as i64 + 1, c as i64 + 1);
                Ok(eps(vars, 3 * j - 2 * i))
            })
        }
        MatrixKind::VMinus => PolyMatrix::from_fn(vars, size(l - 1), size(l - 1), |r, c| {
            let (i, j) = (r as i64 + 1, c as i64 + 1);
            eps(vars, 3 * j - 2 * i).checked_sub(&eps(vars, 3 * j + 2 * i - 4 * l))
        }),
        MatrixKind::WPlus => PolyMatrix::from_fn(vars, size(l - 1), size(l - 1), |r, c| {
            let (i, j) = (r as i64 + l, c as i64 + l);
            eps(vars, 3 * j - 2 * i).checked_add(&eps(vars, 3 * j + 2 * i - 4 * l))
        }),
        MatrixKind::Mu => {
            if l % 2 == 0 {
                PolyMatrix::from_fn(vars, size(l / 2), size(l / 2), |r, c| {
                    let (i, j) = (r as i64, c as i64);
                    Ok(mu(vars, 3 * i - j + 1))
                })
            } else {
                PolyMatrix::from_fn(vars, size((l - 1) / 2), size((l - 1) / 2), |r, c| {
                    let (i, j) = (r as i64 + 1, c as i64 + 1);
                    Ok(mu(vars, 3 * i - j))
                })
            }
        }
        MatrixKind::NuDiff => {
            let m = l / 2;
            if l % 2 == 1 {
                PolyMatrix::from_fn(vars, size(m), size(m), |r, c| {
                    let (i, j) = (r as i64, c as i64);
                    nu(vars, 3 * i - j + 1).checked_sub(&nu(vars, 3 * i + j + 3 - l))
                })
            } else {
                PolyMatrix::from_fn(vars, size(m), size(m), |r, c| {
                    let (i, j) = (r as i64, c as i64);
                    nu(vars, 3 * i - j + 2).checked_sub(&nu(vars, 3 * i + j + 2 - l))
                })
            }
        }
        MatrixKind::LambdaDiff => {
            let m = if l % 2 == 1 { (l - 1) / 2 } else { l / 2 - 1 };
            PolyMatrix::from_fn(vars, size(m), size(m), |r, c| {
                let (i, j) = (r as i64 + 1, c as i64 + 1);
                lam(vars, 3 * i - j).checked_sub(&lam(vars, 3 * i + j))
            })
        }
    }
}

/// Determinant algorithm selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetAlgo {
    /// Recursive cofactor expansion with subset memoization. Reference
    /// implementation for small matrices.
    Cofactor,
    /// Fraction-free Bareiss elimination; every internal division is exact.
    /// Falls back to cofactor expansion if an internal division ever fails.
    Bareiss,
}

/// Exact determinant of a square matrix. The 0x0 determinant is one.
pub fn det(m: &PolyMatrix, algo: DetAlgo) -> Result<LaurentPoly, CoreError> {
    if !m.is_square() {
        return Err(CoreError::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    match algo {
        DetAlgo::Cofactor => Ok(det_cofactor(m)),
        DetAlgo::Bareiss => match det_bareiss(m) {
            Ok(value) => Ok(value),
            Err(CoreError::NotDivisible { context, .. }) => {
                eprintln!(
                    "bareiss elimination hit an inexact division ({context}); \
                     falling back to cofactor expansion"
                );
                Ok(det_cofactor(m))
            }
            Err(other) => Err(other),
        },
    }
}

fn det_cofactor(m: &PolyMatrix) -> LaurentPoly {
    let n = m.rows;
    if n == 0 {
        return LaurentPoly::one(&m.vars);
    }
    assert!(n <= 32, "cofactor expansion limited to 32x32");
    // memo[mask] = determinant of the submatrix on rows n-|mask|..n-1 and the
    // column set `mask`.
    let mut memo: HashMap<u32, LaurentPoly> = HashMap::new();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    det_masked(m, full, &mut memo)
}

fn det_masked(m: &PolyMatrix, mask: u32, memo: &mut HashMap<u32, LaurentPoly>) -> LaurentPoly {
    if mask == 0 {
        return LaurentPoly::one(&m.vars);
    }
    if let Some(hit) = memo.get(&mask) {
        return hit.clone();
    }
    let k = mask.count_ones() as usize;
    let row = m.rows - k;
    let mut acc = LaurentPoly::zero(&m.vars);
    let mut sign_flip = false;
    for col in 0..m.cols {
        if mask & (1 << col) == 0 {
            continue;
        }
        let entry = m.entry(row, col);
        if !entry.is_zero() {
            let minor = det_masked(m, mask & !(1 << col), memo);
            let term = entry.checked_mul(&minor).expect("shared vars");
            acc = if sign_flip {
                acc.checked_sub(&term).expect("shared vars")
            } else {
                acc.checked_add(&term).expect("shared vars")
            };
        }
        sign_flip = !sign_flip;
    }
    memo.insert(mask, acc.clone());
    acc
}

fn det_bareiss(m: &PolyMatrix) -> Result<LaurentPoly, CoreError> {
    let n = m.rows;
    if n == 0 {
        return Ok(LaurentPoly::one(&m.vars));
    }
    let mut a: Vec<Vec<LaurentPoly>> = (0..n)
        .map(|r| (0..n).map(|c| m.entry(r, c).clone()).collect())
        .collect();
    let mut negate = false;
    let mut prev = LaurentPoly::one(&m.vars);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(LaurentPoly::zero(&m.vars)),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let numerator = a[k][k]
                    .checked_mul(&a[i][j])?
                    .checked_sub(&a[i][k].checked_mul(&a[k][j])?)?;
                a[i][j] = exact_divide(&numerator, &prev)?;
            }
            a[i][k] = LaurentPoly::zero(&m.vars);
        }
        prev = a[k][k].clone();
    }
    let result = a[n - 1][n - 1].clone();
    Ok(if negate { -&result } else { result })
}

/// Result of the centrosymmetric block split: the two diagonal blocks of
/// `T m T^{-1}` and the number of nonzero off-block entries. The residue is
/// reported, never asserted zero, so imperfect centrosymmetry is observable.
#[derive(Clone, Debug)]
pub struct CentroBlocks {
    /// Top-left block (difference combinations).
    pub minus: PolyMatrix,
    /// Bottom-right block (sum combinations).
    pub plus: PolyMatrix,
    /// Count of nonzero entries outside the two diagonal blocks.
    pub residue: usize,
}

/// Conjugates an even-sized square matrix by the block transformation
///
/// ```text
/// T = [ -I  J ]        T^{-1} = 1/2 [ -I  I ]
///     [  I  J ]                     [  J  J ]
/// ```
///
/// where `J` is the counter-identity, and returns the two diagonal blocks
/// together with the off-block residue count.
pub fn centro_blocks(m: &PolyMatrix) -> Result<CentroBlocks, CoreError> {
    if !m.is_square() {
        return Err(CoreError::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if m.rows % 2 != 0 {
        return Err(CoreError::SizeRule {
            kind: "centro-blocks".into(),
            detail: format!("size {} is odd; an even size is required", m.rows),
        });
    }
    let k = m.rows / 2;
    let vars = m.vars.clone();
    let one = LaurentPoly::one(&vars);
    let zero = LaurentPoly::zero(&vars);
    let half = Cyclo::from_ratio(1, 2);

    let t = PolyMatrix::from_fn(&vars, 2 * k, 2 * k, |r, c| {
        Ok(if r < k {
            if c == r {
                -&one
            } else if c == 2 * k - 1 - r {
                one.clone()
            } else {
                zero.clone()
            }
        } else if c == r - k {
            one.clone()
        } else if c >= k && c == 2 * k - 1 - (r - k) {
            one.clone()
        } else {
            zero.clone()
        })
    })?;
    let t_inv = PolyMatrix::from_fn(&vars, 2 * k, 2 * k, |r, c| {
        Ok(if r < k {
            if c == r {
                LaurentPoly::constant(&vars, -&half)
            } else if c == k + r {
                LaurentPoly::constant(&vars, half.clone())
            } else {
                zero.clone()
            }
        } else if c == k - 1 - (r - k) || c == 2 * k - 1 - (r - k) {
            LaurentPoly::constant(&vars, half.clone())
        } else {
            zero.clone()
        })
    })?;

    let conjugated = t.mul(m)?.mul(&t_inv)?;
    let minus = conjugated.block(0, k, 0, k);
    let plus = conjugated.block(k, 2 * k, k, 2 * k);
    let residue = conjugated
        .iter()
        .filter(|&(r, c, e)| ((r < k) != (c < k)) && !e.is_zero())
        .count();
    Ok(CentroBlocks {
        minus,
        plus,
        residue,
    })
}

/// Result of the mu-matrix row/column reduction: the leading block, the
/// corner entry, and the count of nonzero non-corner entries in the last row
/// (zero when the reduction telescopes as expected).
#[derive(Clone, Debug)]
pub struct MuReduction {
    pub block: PolyMatrix,
    pub corner: LaurentPoly,
    pub off_residue: usize,
}

/// Applies the unimodular row operation `A` (lower triangular, `A[r][c] =
/// z^{6(r-c)}`) from the left and the unimodular column operation `B` (unit
/// lower bidiagonal with `-z^2` below the diagonal) from the right, then
/// splits off the last row and column. Because `det A = det B = 1` the
/// determinant factors as `corner * det(block)` whenever the rest of the
/// last row vanishes.
pub fn row_column_reduce(m: &PolyMatrix, z: &str) -> Result<MuReduction, CoreError> {
    if !m.is_square() {
        return Err(CoreError::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let p = m.rows;
    if p == 0 {
        return Err(CoreError::SizeRule {
            kind: "row-column-reduce".into(),
            detail: "matrix must be nonempty".into(),
        });
    }
    if !m.vars.contains(z) {
        return Err(CoreError::UnknownVariable(z.into()));
    }
    let vars = m.vars.clone();
    let a = PolyMatrix::from_fn(&vars, p, p, |r, c| {
        if r >= c {
            LaurentPoly::var_pow(&vars, z, 6 * (r as i32 - c as i32))
        } else {
            Ok(LaurentPoly::zero(&vars))
        }
    })?;
    let minus_z2 = LaurentPoly::var_pow(&vars, z, 2).map(|q| -&q)?;
    let b = PolyMatrix::from_fn(&vars, p, p, |r, c| {
        Ok(if r == c {
            LaurentPoly::one(&vars)
        } else if r == c + 1 {
            minus_z2.clone()
        } else {
            LaurentPoly::zero(&vars)
        })
    })?;
    let reduced = a.mul(m)?.mul(&b)?;
    let block = reduced.block(0, p - 1, 0, p - 1);
    let corner = reduced.entry(p - 1, p - 1).clone();
    let off_residue = (0..p - 1)
        .filter(|&c| !reduced.entry(p - 1, c).is_zero())
        .count();
    Ok(MuReduction {
        block,
        corner,
        off_residue,
    })
}

#[cfg(test)]
mod tests;
