//! Exact coefficient fields.
//!
//! Every algebraic routine in the crate is generic over [`Field`], a context
//! object that owns the arithmetic while elements stay plain values. Two
//! concrete families ship here: the binary fields GF(2^k) for `1 <= k <= 32`
//! with a frozen modulus table, and the rationals. Finite extensions of either
//! are built on top of univariate polynomials in
//! [`crate::polyring::ResidueField`].

mod gf2k;
mod rational;

use std::fmt::Debug;
use std::hash::Hash;

use rand::RngCore;
use thiserror::Error;

pub use gf2k::{gf_make_field, gf_primitive_root_of_unity, GfElem, GfEmbedding, GfField, MODULUS_TABLE};
pub use rational::{Rational, RationalField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("extension degree {0} outside 1..=32")]
    DegreeOutOfRange(u32),
    #[error("{r} does not divide 2^{k} - 1")]
    NoRootOfUnity { r: u64, k: u32 },
    #[error("cannot parse field element `{0}`")]
    Parse(String),
    #[error("GF(2^{small}) does not embed into GF(2^{large})")]
    NoEmbedding { small: u32, large: u32 },
}

/// Arithmetic context for an exact field.
///
/// Elements are compared structurally, so every implementation keeps them in
/// a canonical form. The `Ord` bound is only a canonical ordering used for
/// deterministic output; it carries no algebraic meaning.
pub trait Field: Clone + Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError>;
    /// Image of an integer under the canonical ring map from Z.
    fn from_int(&self, n: i64) -> Self::Elem;
    /// 0 for the rationals, 2 for binary fields.
    fn characteristic(&self) -> u32;
    /// `Some(d)` when the field has `2^d` elements.
    fn log2_size(&self) -> Option<u32>;
    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem;
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError>;
    /// Short human-readable name, e.g. `GF(2^3)`.
    fn name(&self) -> String;

    /// All elements, when the field is small enough to enumerate.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            e >>= 1;
        }
        acc
    }

    /// `a^(2^times)`, computed by repeated squaring.
    fn frobenius(&self, a: &Self::Elem, times: u32) -> Self::Elem {
        let mut x = a.clone();
        for _ in 0..times {
            x = self.square(&x);
        }
        x
    }

    /// Unique square root in a finite field of characteristic 2.
    ///
    /// Returns `None` for fields where square roots are not computed this way.
    fn sqrt_char2(&self, a: &Self::Elem) -> Option<Self::Elem> {
        match (self.characteristic(), self.log2_size()) {
            (2, Some(d)) => Some(self.frobenius(a, d - 1)),
            _ => None,
        }
    }
}

/// Parses a field shorthand such as `q10` (GF(2^10)).
///
/// A trailing `x` (as in `q3x`) is accepted and ignored; it marks requests
/// for exhaustive enumeration in the command line tool.
pub fn parse_field_spec(spec: &str) -> Result<GfField, FieldError> {
    let body = spec.trim().strip_prefix('q').ok_or_else(|| FieldError::Parse(spec.to_string()))?;
    let body = body.strip_suffix('x').unwrap_or(body);
    let k: u32 = body.parse().map_err(|_| FieldError::Parse(spec.to_string()))?;
    gf_make_field(k)
}
