//! Exact computer algebra for loop-model sum rules.
//!
//! The crate is organized bottom-up:
//!
//! * [`cyclofield`] — arithmetic in the coefficient field Q(w), w a primitive
//!   sixth root of unity;
//! * [`laurent`] — sparse multivariate Laurent polynomials over Q(w);
//! * [`symfunc`] — the symmetric-function families (elementary E, doubled-list
//!   eps, mu, nu, lambda) and the generating polynomials they come from;
//! * [`polymatrix`] — polynomial matrices, exact determinants, and the
//!   centrosymmetric block transformation;
//! * [`sumrule`] — every determinantal route to the open and periodic sum
//!   rules, an independent recurrence-interpolation oracle, and the identity
//!   verification engine.
//!
//! All arithmetic is exact; there is no floating point anywhere in the crate.

pub mod cyclofield;
pub mod error;
pub mod laurent;
pub mod polymatrix;
pub mod sumrule;
pub mod symfunc;
#[cfg(test)]
pub(crate) mod testutil;

pub use cyclofield::{Cyclo, Rational};
pub use error::CoreError;
pub use laurent::{compare, exact_divide, Comparison, EvalPoint, LaurentPoly, Monomial, VarSet};
pub use polymatrix::{
    build_matrix, centro_blocks, det, row_column_reduce, CentroBlocks, DetAlgo, MatrixKind,
    MuReduction, PolyMatrix,
};
pub use sumrule::{
    oracle_interpolate, v_poly, verify, verify_many, w_poly, z_open_compute, zp_compute,
    ztilde_poly, IdentityId, Method, Model, SumRuleResult, Verdict, VerificationReport,
    VerifyMode, Witness,
};
