//! Polynomial arithmetic: sparse multivariate polynomials with a text
//! grammar, Laurent data for chart substitutions, dense univariate
//! polynomials with finite-field factorization, residue-field extensions and
//! Sylvester resultants.

mod gcd;
mod laurent;
mod parse;
mod residue;
mod resultant;
mod sparse;
mod univariate;

use thiserror::Error;

pub use gcd::bivariate_gcd;
pub use laurent::{LaurentMonomial, LaurentPoly};
pub use parse::parse_poly;
pub use residue::ResidueField;
pub use resultant::{bareiss_det, resultant, uni_resultant, DegenerationWarning, Resultant};
pub use sparse::{var_list, Assignment, Exponents, SparsePoly};
pub use univariate::{factor, roots, squarefree_decomposition, UniPoly};

use crate::exactfield::FieldError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable lists differ: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("expected {expected} coordinates, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("substitution leaves {var}^{exponent}; the image is not a polynomial")]
    NegativeExponent { var: String, exponent: i64 },
    #[error("zero polynomial where a nonzero one is required")]
    ZeroInput,
    #[error("polynomial involves variables other than `{0}`")]
    NotUnivariate(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}
