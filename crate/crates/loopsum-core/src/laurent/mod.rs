//! Sparse multivariate Laurent polynomials over Q(w).
//!
//! A [`LaurentPoly`] is a finite map from exponent vectors (negative entries
//! allowed) to nonzero [`Cyclo`] coefficients, over a fixed ordered
//! [`VarSet`]. The zero polynomial is the empty map, no zero coefficient is
//! ever stored, and the map is ordered, so equality is structural.

mod compare;
mod divide;
mod render;

pub use compare::{compare, Comparison};
pub use divide::exact_divide;
pub use render::{PolyJson, TermJson};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::cyclofield::Cyclo;
use crate::error::CoreError;

/// Exponent vector aligned with a [`VarSet`]; entry `i` is the exponent of
/// variable `i`, and negative entries are allowed.
pub type Monomial = Vec<i32>;

/// An ordered list of distinct variable names. Cheap to clone; the order is
/// fixed for the lifetime of a computation and defines exponent positions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarSet(Arc<Vec<String>>);

impl VarSet {
    /// Build a variable set from distinct names.
    pub fn new<I, S>(names: I) -> Result<Self, CoreError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(CoreError::DuplicateVariable(n.clone()));
            }
        }
        Ok(VarSet(Arc::new(names)))
    }

    /// `prefix1, prefix2, .., prefixN` — the conventional numbered list.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        VarSet(Arc::new((1..=n).map(|i| format!("{prefix}{i}")).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.iter().any(|n| n == name)
    }

    /// Position of `name`, or an `UnknownVariable` error.
    pub fn index_of(&self, name: &str) -> Result<usize, CoreError> {
        self.0
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| CoreError::UnknownVariable(name.to_string()))
    }

    /// A new set with `name` appended at the end.
    pub fn with_appended(&self, name: &str) -> Result<Self, CoreError> {
        if self.contains(name) {
            return Err(CoreError::DuplicateVariable(name.to_string()));
        }
        let mut names = self.0.as_ref().clone();
        names.push(name.to_string());
        Ok(VarSet(Arc::new(names)))
    }

    /// A new set with the variable at `index` removed.
    fn without_index(&self, index: usize) -> Self {
        let mut names = self.0.as_ref().clone();
        names.remove(index);
        VarSet(Arc::new(names))
    }

    /// Comma-joined names, used in error messages.
    pub fn joined(&self) -> String {
        self.0.join(", ")
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.joined())
    }
}

/// An assignment of a nonzero field value to every variable of some set.
/// Nonzero is mandatory because Laurent monomials invert variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvalPoint {
    values: BTreeMap<String, Cyclo>,
}

impl EvalPoint {
    pub fn new<I, S>(assignments: I) -> Result<Self, CoreError>
    where
        I: IntoIterator<Item = (S, Cyclo)>,
        S: Into<String>,
    {
        let mut values = BTreeMap::new();
        for (name, value) in assignments {
            let name = name.into();
            if value.is_zero() {
                return Err(CoreError::ZeroValue(name));
            }
            values.insert(name, value);
        }
        Ok(EvalPoint { values })
    }

    pub fn get(&self, name: &str) -> Option<&Cyclo> {
        self.values.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Cyclo)> {
        self.values.iter()
    }
}

impl fmt::Display for EvalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (name, value)) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{name}: {value}")?;
        }
        write!(f, "}}")
    }
}

/// Sparse Laurent polynomial over Q(w).
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: VarSet,
    terms: BTreeMap<Monomial, Cyclo>,
}

impl LaurentPoly {
    // ----- constructors -------------------------------------------------

    pub fn zero(vars: &VarSet) -> Self {
        LaurentPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &VarSet) -> Self {
        Self::constant(vars, Cyclo::one())
    }

    pub fn constant(vars: &VarSet, c: Cyclo) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; vars.len()], c);
        }
        LaurentPoly { vars: vars.clone(), terms }
    }

    /// The variable `name` as a polynomial.
    pub fn var(vars: &VarSet, name: &str) -> Result<Self, CoreError> {
        Self::var_pow(vars, name, 1)
    }

    /// `name^k` as a polynomial.
    pub fn var_pow(vars: &VarSet, name: &str, k: i32) -> Result<Self, CoreError> {
        let idx = vars.index_of(name)?;
        let mut exps = vec![0; vars.len()];
        exps[idx] = k;
        Ok(Self::from_terms(vars, [(exps, Cyclo::one())])?)
    }

    /// Build from raw `(exponents, coefficient)` pairs; like terms are merged
    /// and zero coefficients dropped, so the result is canonical.
    pub fn from_terms<I>(vars: &VarSet, terms: I) -> Result<Self, CoreError>
    where
        I: IntoIterator<Item = (Monomial, Cyclo)>,
    {
        let mut map: BTreeMap<Monomial, Cyclo> = BTreeMap::new();
        for (exps, coeff) in terms {
            if exps.len() != vars.len() {
                return Err(CoreError::Parse(format!(
                    "exponent vector of length {} over {} variables",
                    exps.len(),
                    vars.len()
                )));
            }
            if coeff.is_zero() {
                continue;
            }
            match map.entry(exps) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(coeff);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += &coeff;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        Ok(LaurentPoly { vars: vars.clone(), terms: map })
    }

    // ----- inspection ----------------------------------------------------

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Iterate terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Cyclo)> {
        self.terms.iter()
    }

    /// The coefficient of an exact monomial (zero if absent).
    pub fn coeff(&self, exps: &[i32]) -> Cyclo {
        self.terms.get(exps).cloned().unwrap_or_else(Cyclo::zero)
    }

    /// If the polynomial is a constant, its value (the zero polynomial is the
    /// constant 0).
    pub fn constant_value(&self) -> Option<Cyclo> {
        match self.terms.len() {
            0 => Some(Cyclo::zero()),
            1 => {
                let (exps, c) = self.terms.iter().next().unwrap();
                exps.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Minimum exponent of `var` over all terms (`None` for the zero
    /// polynomial).
    pub fn min_exponent(&self, var: &str) -> Result<Option<i32>, CoreError> {
        let idx = self.vars.index_of(var)?;
        Ok(self.terms.keys().map(|e| e[idx]).min())
    }

    /// Maximum exponent of `var` over all terms (`None` for the zero
    /// polynomial).
    pub fn max_exponent(&self, var: &str) -> Result<Option<i32>, CoreError> {
        let idx = self.vars.index_of(var)?;
        Ok(self.terms.keys().map(|e| e[idx]).max())
    }

    /// Maximum over terms of the sum of exponents (`None` for zero).
    pub fn total_degree(&self) -> Option<i32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    fn check_same_vars(&self, other: &Self) -> Result<(), CoreError> {
        if self.vars != other.vars {
            return Err(CoreError::VarSetMismatch {
                left: self.vars.joined(),
                right: other.vars.joined(),
            });
        }
        Ok(())
    }

    // ----- arithmetic ----------------------------------------------------

    /// Exact sum; errors if the variable sets differ.
    pub fn checked_add(&self, other: &Self) -> Result<Self, CoreError> {
        self.check_same_vars(other)?;
        let mut terms = self.terms.clone();
        for (exps, coeff) in &other.terms {
            match terms.entry(exps.clone()) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(coeff.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += coeff;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        Ok(LaurentPoly { vars: self.vars.clone(), terms })
    }

    /// Exact difference; errors if the variable sets differ.
    pub fn checked_sub(&self, other: &Self) -> Result<Self, CoreError> {
        self.checked_add(&other.neg())
    }

    /// Exact product; errors if the variable sets differ.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, CoreError> {
        self.check_same_vars(other)?;
        let mut terms: BTreeMap<Monomial, Cyclo> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exps: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let prod = c1 * c2;
                match terms.entry(exps) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += &prod;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                }
            }
        }
        Ok(LaurentPoly { vars: self.vars.clone(), terms })
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    /// Multiply every coefficient by the constant `c`.
    pub fn scale(&self, c: &Cyclo) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    /// Multiply by the monomial `c * x^exps` (a unit of the Laurent ring when
    /// `c != 0`; `c = 0` gives the zero polynomial).
    pub fn mul_monomial(&self, exps: &[i32], c: &Cyclo) -> Result<Self, CoreError> {
        if exps.len() != self.vars.len() {
            return Err(CoreError::Parse(format!(
                "monomial of length {} over {} variables",
                exps.len(),
                self.vars.len()
            )));
        }
        if c.is_zero() {
            return Ok(Self::zero(&self.vars));
        }
        Ok(LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), k * c))
                .collect(),
        })
    }

    /// Small non-negative power by repeated multiplication.
    pub fn pow(&self, k: usize) -> Self {
        let mut result = Self::one(&self.vars);
        for _ in 0..k {
            result = result.checked_mul(self).expect("same varset");
        }
        result
    }

    // ----- substitution and evaluation ------------------------------------

    /// Replace every occurrence `var^k` by `coeff^k * target^(+-k)`.
    ///
    /// `target` may be an existing variable (its exponents merge), the same
    /// name as `var`, or a fresh name (which takes `var`'s position in the
    /// variable order). `coeff` must be nonzero because `k` may be negative.
    pub fn substitute(
        &self,
        var: &str,
        coeff: &Cyclo,
        target: &str,
        invert_exponent: bool,
    ) -> Result<Self, CoreError> {
        let src = self.vars.index_of(var)?;
        if coeff.is_zero() {
            return Err(CoreError::ZeroValue(format!("substitution image of {var}")));
        }
        // Variable set after the rewrite: `var` goes away; a fresh target
        // takes its slot so renames keep the surrounding order.
        let (new_vars, dst) = if target == var {
            (self.vars.clone(), src)
        } else if self.vars.contains(target) {
            let removed = self.vars.without_index(src);
            (removed.clone(), removed.index_of(target)?)
        } else {
            let mut names = self.vars.names().to_vec();
            names[src] = target.to_string();
            (VarSet(Arc::new(names)), src)
        };
        let keeps_slot = target == var || !self.vars.contains(target);
        let sign: i32 = if invert_exponent { -1 } else { 1 };
        let mut out: Vec<(Monomial, Cyclo)> = Vec::with_capacity(self.terms.len());
        for (exps, c) in &self.terms {
            let k = exps[src];
            let new_coeff = c * &coeff.pow(k as i64)?;
            let mut e: Monomial;
            if keeps_slot {
                e = exps.clone();
                e[src] = sign * k;
            } else {
                e = exps.clone();
                e.remove(src);
                e[dst] += sign * k;
            }
            out.push((e, new_coeff));
        }
        Self::from_terms(&new_vars, out)
    }

    /// Substitute `var` by the nonzero field constant `value`, removing the
    /// variable from the set.
    pub fn subst_const(&self, var: &str, value: &Cyclo) -> Result<Self, CoreError> {
        let src = self.vars.index_of(var)?;
        if value.is_zero() {
            return Err(CoreError::ZeroValue(format!("substitution image of {var}")));
        }
        let new_vars = self.vars.without_index(src);
        let mut out: Vec<(Monomial, Cyclo)> = Vec::with_capacity(self.terms.len());
        for (exps, c) in &self.terms {
            let k = exps[src];
            let mut e = exps.clone();
            e.remove(src);
            out.push((e, c * &value.pow(k as i64)?));
        }
        Self::from_terms(&new_vars, out)
    }

    /// Exact value at a point covering all variables with nonzero values.
    pub fn evaluate(&self, pt: &EvalPoint) -> Result<Cyclo, CoreError> {
        let values: Vec<&Cyclo> = self
            .vars
            .names()
            .iter()
            .map(|n| {
                pt.get(n)
                    .ok_or_else(|| CoreError::MissingAssignment(n.clone()))
            })
            .collect::<Result<_, _>>()?;
        let mut acc = Cyclo::zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (v, &k) in values.iter().zip(exps) {
                if k != 0 {
                    term *= &v.pow(k as i64)?;
                }
            }
            acc += &term;
        }
        Ok(acc)
    }

    /// The coefficient of `var^k`, as a polynomial in the remaining variables.
    pub fn coeff_in_var(&self, var: &str, k: i32) -> Result<Self, CoreError> {
        let idx = self.vars.index_of(var)?;
        let new_vars = self.vars.without_index(idx);
        let mut out = Vec::new();
        for (exps, c) in &self.terms {
            if exps[idx] == k {
                let mut e = exps.clone();
                e.remove(idx);
                out.push((e, c.clone()));
            }
        }
        Self::from_terms(&new_vars, out)
    }

    /// Re-express this polynomial over a larger variable set containing every
    /// variable of the current one.
    pub fn embed(&self, target: &VarSet) -> Result<Self, CoreError> {
        let positions: Vec<usize> = self
            .vars
            .names()
            .iter()
            .map(|n| target.index_of(n))
            .collect::<Result<_, _>>()?;
        let mut out = Vec::with_capacity(self.terms.len());
        for (exps, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (&pos, &k) in positions.iter().zip(exps) {
                e[pos] = k;
            }
            out.push((e, c.clone()));
        }
        Self::from_terms(target, out)
    }

    /// Exchange two variables (the exponent columns swap; the variable set is
    /// unchanged). Transpositions generate every permutation of arguments.
    pub fn swap_vars(&self, x: &str, y: &str) -> Result<Self, CoreError> {
        let i = self.vars.index_of(x)?;
        let j = self.vars.index_of(y)?;
        let mut out = Vec::with_capacity(self.terms.len());
        for (exps, c) in &self.terms {
            let mut e = exps.clone();
            e.swap(i, j);
            out.push((e, c.clone()));
        }
        Self::from_terms(&self.vars, out)
    }

    /// Replace `var` by its reciprocal (`var -> 1/var`).
    pub fn invert_var(&self, var: &str) -> Result<Self, CoreError> {
        self.substitute(var, &Cyclo::one(), var, true)
    }

    /// Internal invariant: no stored zero coefficients, exponent vectors all
    /// of the right length. Used by tests.
    pub fn is_canonical(&self) -> bool {
        self.terms
            .iter()
            .all(|(e, c)| e.len() == self.vars.len() && !c.is_zero())
    }
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::neg(self)
    }
}

/// Operator sugar for references. These panic on variable-set mismatch; use
/// the `checked_*` methods when the sets are not equal by construction.
impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_add(rhs).expect("variable sets must match")
    }
}

impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_sub(rhs).expect("variable sets must match")
    }
}

impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.checked_mul(rhs).expect("variable sets must match")
    }
}

#[cfg(test)]
mod tests;
