//! Sum rules of the loop model, computed by every determinantal route, plus
//! an independent recurrence-driven interpolation oracle and an
//! identity-verification engine.
//!
//! The periodic sum `Z^p` has two routes: the staircase determinant of
//! elementary symmetric polynomials ([`Method::DetE`], the reference) and the
//! parity-split `mu` determinants ([`Method::DetMu`]). The open sum `Z` has
//! four: two determinant-over-divisor forms ([`Method::VOverPp`],
//! [`Method::WOverP`]), the `nu` difference determinant ([`Method::DetNu`],
//! with a polynomial divisor in the even case), and the uniform `lambda`
//! difference determinant ([`Method::DetLambda`], the reference). Every
//! result records the constant relating its value to the reference route;
//! constants are measured, never assumed.
//!
//! The plus-variant route [`Method::WOverP`] is defined for sizes 2..=4: from
//! size 5 on, its determinant stops being a multiple of the divisor (this is
//! a property of the formula itself, established by machine computation) and
//! the computation reports the obstruction loudly as a division failure.

mod oracle;
pub mod verify;

pub(crate) mod numeric;

pub use oracle::oracle_interpolate;
pub use verify::{
    verify, verify_many, IdentityId, Verdict, VerificationReport, VerifyMode, Witness,
};

use std::fmt;
use std::str::FromStr;

use crate::cyclofield::Cyclo;
use crate::error::CoreError;
use crate::laurent::{compare, exact_divide, Comparison, LaurentPoly, VarSet};
use crate::polymatrix::{build_matrix, det, DetAlgo, MatrixKind, PolyMatrix};
use crate::symfunc::{eps_all, p_open_fixed, pp_fixed};

/// Boundary condition selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Periodic,
    Open,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Periodic => "periodic",
            Model::Open => "open",
        }
    }

    pub const ALL: [Model; 2] = [Model::Periodic, Model::Open];
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| CoreError::Parse(format!("unknown model `{s}`")))
    }
}

/// Computation route for a sum rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// Periodic reference: staircase determinant of `E_{3j-2i}`.
    DetE,
    /// Periodic: parity-split determinants of `mu` entries.
    DetMu,
    /// Open: minus-variant determinant divided by the periodic divisor.
    VOverPp,
    /// Open: plus-variant determinant divided by the periodic divisor
    /// (defined for sizes 2..=4; loud division failure beyond).
    WOverP,
    /// Open: `nu` difference determinant (even sizes carry a divisor).
    DetNu,
    /// Open reference: `lambda` difference determinant.
    DetLambda,
    /// Either model: recurrence-interpolation oracle.
    OracleInterp,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::DetE => "det-e",
            Method::DetMu => "det-mu",
            Method::VOverPp => "v-over-pp",
            Method::WOverP => "w-over-p",
            Method::DetNu => "det-nu",
            Method::DetLambda => "det-lambda",
            Method::OracleInterp => "oracle-interp",
        }
    }

    pub const ALL: [Method; 7] = [
        Method::DetE,
        Method::DetMu,
        Method::VOverPp,
        Method::WOverP,
        Method::DetNu,
        Method::DetLambda,
        Method::OracleInterp,
    ];

    /// The methods applicable to each model, reference first.
    pub fn for_model(model: Model) -> &'static [Method] {
        match model {
            Model::Periodic => &[Method::DetE, Method::DetMu],
            Model::Open => &[
                Method::DetLambda,
                Method::VOverPp,
                Method::WOverP,
                Method::DetNu,
            ],
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| CoreError::Parse(format!("unknown method `{s}`")))
    }
}

/// One computed sum rule: the polynomial, the route that produced it, and
/// the measured constant relating it to the reference route of its model.
#[derive(Clone, Debug, PartialEq)]
pub struct SumRuleResult {
    value: LaurentPoly,
    method: Method,
    vars: VarSet,
    normalization: Cyclo,
}

impl SumRuleResult {
    /// Wrap a computed value, asserting the symmetry invariants: permutation
    /// invariance always, and per-variable inversion invariance for
    /// open-model routes.
    pub(crate) fn new(
        value: LaurentPoly,
        method: Method,
        vars: VarSet,
        normalization: Cyclo,
        open_model: bool,
    ) -> Self {
        let names = vars.names();
        for pair in names.windows(2) {
            let swapped = value
                .swap_vars(&pair[0], &pair[1])
                .expect("variables belong to the result");
            assert_eq!(
                swapped, value,
                "{method} result must be symmetric in {} and {}",
                pair[0], pair[1]
            );
        }
        if open_model {
            for name in names {
                let inverted = value
                    .invert_var(name)
                    .expect("variables belong to the result");
                assert_eq!(
                    inverted, value,
                    "{method} result must be invariant under {name} -> 1/{name}"
                );
            }
        }
        SumRuleResult {
            value,
            method,
            vars,
            normalization,
        }
    }

    pub fn value(&self) -> &LaurentPoly {
        &self.value
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    /// The measured constant `c` with `value = c * reference` (reference:
    /// [`Method::DetE`] for periodic, [`Method::DetLambda`] for open).
    pub fn normalization(&self) -> &Cyclo {
        &self.normalization
    }
}

/// Constant relating `value` to `reference`, i.e. `c` with
/// `value = c * reference`. Panics if the two are not proportional: the
/// routes are theorems for every size this crate exposes, so a mismatch is
/// a broken build, not a runtime condition.
fn measured_constant(reference: &LaurentPoly, value: &LaurentPoly, what: &str) -> Cyclo {
    match compare(reference, value).expect("same variable set") {
        Comparison::Equal => Cyclo::one(),
        Comparison::Proportional(c) => c,
        Comparison::Distinct(point) => {
            panic!("{what} is not proportional to its reference route (witness {point})")
        }
    }
}

/// Minus-variant determinant (no prefactor): entries
/// `eps_{3j-2i} - eps_{3j+2i-4L}` over `1 <= i,j <= L-1`.
pub fn v_poly(vars: &VarSet) -> Result<LaurentPoly, CoreError> {
    let m = build_matrix(MatrixKind::VMinus, vars)?;
    det(&m, DetAlgo::Bareiss)
}

/// Plus-variant determinant with its overall one-half prefactor: entries
/// `eps_{3j-2i} + eps_{3j+2i-4L}` over `L <= i,j <= 2L-2`, halved.
pub fn w_poly(vars: &VarSet) -> Result<LaurentPoly, CoreError> {
    let m = build_matrix(MatrixKind::WPlus, vars)?;
    Ok(det(&m, DetAlgo::Bareiss)?.scale(&Cyclo::from_ratio(1, 2)))
}

/// Doubled-list determinant: the full `(2L-2) x (2L-2)` determinant of
/// `eps_{3j-2i}`. Equal to the product of [`v_poly`] and [`w_poly`].
pub fn ztilde_poly(vars: &VarSet) -> Result<LaurentPoly, CoreError> {
    let m = build_matrix(MatrixKind::EpsDoubled, vars)?;
    det(&m, DetAlgo::Bareiss)
}

/// The plus-signed matrix over the minus-variant index range: entries
/// `eps_{3j-2i} + eps_{3j+2i-4L}` for `1 <= i,j <= L-1`. This is the
/// numerator of the [`Method::WOverP`] route. It is deliberately not one of
/// the published matrix kinds: for `L <= 4` the shifted index `3j+2i-4L`
/// is always negative, so the matrix coincides entry-wise with the
/// minus-variant one, and from `L = 5` on the two diverge (the corner picks
/// up `eps_0`) and the determinant stops being a multiple of the divisor.
fn plus_range_matrix(vars: &VarSet) -> Result<PolyMatrix, CoreError> {
    let l = vars.len() as i64;
    if l == 0 {
        return Err(CoreError::SizeRule {
            kind: "plus-range".into(),
            detail: "needs at least one variable".into(),
        });
    }
    let n = (l - 1).max(0) as usize;
    let epss = eps_all(vars);
    let entry = |r: usize, c: usize| -> Result<LaurentPoly, CoreError> {
        let i = r as i64 + 1;
        let j = c as i64 + 1;
        let pick = |idx: i64| -> LaurentPoly {
            if (0..=2 * l).contains(&idx) {
                epss[idx as usize].clone()
            } else {
                LaurentPoly::zero(vars)
            }
        };
        pick(3 * j - 2 * i).checked_add(&pick(3 * j + 2 * i - 4 * l))
    };
    PolyMatrix::from_fn(vars, n, n, entry)
}

/// Compute the periodic sum rule by the requested route.
///
/// `normalization` records the measured constant relating the result to the
/// [`Method::DetE`] reference (1 for the reference itself).
///
/// # Panics
/// Panics if `method` is not a periodic route.
pub fn zp_compute(vars: &VarSet, method: Method) -> Result<SumRuleResult, CoreError> {
    let value = match method {
        Method::DetE => det(&build_matrix(MatrixKind::EStaircase, vars)?, DetAlgo::Bareiss)?,
        Method::DetMu => det(&build_matrix(MatrixKind::Mu, vars)?, DetAlgo::Bareiss)?,
        other => panic!("{other} is not a periodic route"),
    };
    let normalization = if method == Method::DetE {
        Cyclo::one()
    } else {
        let reference = det(&build_matrix(MatrixKind::EStaircase, vars)?, DetAlgo::Bareiss)?;
        measured_constant(&reference, &value, method.name())
    };
    Ok(SumRuleResult::new(
        value,
        method,
        vars.clone(),
        normalization,
        false,
    ))
}

/// Compute the open sum rule by the requested route.
///
/// `normalization` records the measured constant relating the result to the
/// [`Method::DetLambda`] reference (1 for the reference itself). The ratio
/// routes surface division failures loudly: a nonzero remainder is reported
/// as [`CoreError::NotDivisible`] with the full remainder attached, because
/// it falsifies the corresponding closed form at that size.
///
/// # Panics
/// Panics if `method` is not an open route.
pub fn z_open_compute(vars: &VarSet, method: Method) -> Result<SumRuleResult, CoreError> {
    let value = match method {
        Method::DetLambda => det(&build_matrix(MatrixKind::LambdaDiff, vars)?, DetAlgo::Bareiss)?,
        Method::VOverPp => {
            let numerator = v_poly(vars)?;
            exact_divide(&numerator, &pp_fixed(vars)?)?
        }
        Method::WOverP => {
            let numerator = det(&plus_range_matrix(vars)?, DetAlgo::Bareiss)?;
            exact_divide(&numerator, &pp_fixed(vars)?)?
        }
        Method::DetNu => {
            let d = det(&build_matrix(MatrixKind::NuDiff, vars)?, DetAlgo::Bareiss)?;
            if vars.len() % 2 == 0 && vars.len() > 0 {
                exact_divide(&d, &p_open_fixed(vars)?)?
            } else {
                d
            }
        }
        other => panic!("{other} is not an open route"),
    };
    let normalization = if method == Method::DetLambda {
        Cyclo::one()
    } else {
        let reference = det(&build_matrix(MatrixKind::LambdaDiff, vars)?, DetAlgo::Bareiss)?;
        measured_constant(&reference, &value, method.name())
    };
    Ok(SumRuleResult::new(
        value,
        method,
        vars.clone(),
        normalization,
        true,
    ))
}

/// Scale one variable in place: `var -> c * var`.
pub(crate) fn scale_var(p: &LaurentPoly, var: &str, c: &Cyclo) -> Result<LaurentPoly, CoreError> {
    p.substitute(var, c, var, false)
}

/// Substitute the last two variables by the pair `(c_first * fresh,
/// c_second * fresh)`. The fresh name takes the first substituted slot, so
/// `(z_1, .., z_n)` becomes `(z_1, .., z_{n-2}, fresh)`.
pub(crate) fn pair_subst_last(
    p: &LaurentPoly,
    fresh: &str,
    c_first: &Cyclo,
    c_second: &Cyclo,
) -> Result<LaurentPoly, CoreError> {
    let names = p.vars().names();
    assert!(names.len() >= 2, "pair substitution needs two variables");
    let last = names[names.len() - 1].clone();
    let second_last = names[names.len() - 2].clone();
    let step = p.substitute(&second_last, c_first, fresh, false)?;
    step.substitute(&last, c_second, fresh, false)
}

/// Substitute the first two variables by the pair `(c_first * fresh,
/// c_second * fresh)`: `(z_1, .., z_n)` becomes `(fresh, z_3, .., z_n)`.
pub(crate) fn pair_subst_first(
    p: &LaurentPoly,
    fresh: &str,
    c_first: &Cyclo,
    c_second: &Cyclo,
) -> Result<LaurentPoly, CoreError> {
    let names = p.vars().names();
    assert!(names.len() >= 2, "pair substitution needs two variables");
    let first = names[0].clone();
    let second = names[1].clone();
    let step = p.substitute(&first, c_first, fresh, false)?;
    step.substitute(&second, c_second, fresh, false)
}
