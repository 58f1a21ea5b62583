//! Bigraded Cox-ring ambients, divisor classes, charts and adjunction.
//!
//! Three families are supported: `P_n` with Cox variables
//! `(w0, w1, x0, x1, x2, y)`, `Q_n` with `(w0, w1, x0, x1, x2, z)`, and the
//! weighted projective space `T_n = P(1,1,1,2,...,2)` with
//! `(x0, x1, x2, y0, ..., yn)`. Classes are stored in the `(F, H)` basis; for
//! `T_n` only the `H` coefficient is used.

mod charts;
mod equations;
mod veronese;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactfield::Field;
use crate::polyring::{PolyError, SparsePoly};

pub use charts::{chart_atlas, ChartMap, CoordDef, CoordRole, QuotientTag};
pub use equations::{klein_quartic, p_vars, pull_back_z, q_vars, x_equation, z_equation, BASE_VARS, PLANE_VARS};
pub use veronese::{factorization_variant, veronese_pushforward, VeroneseData};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxError {
    #[error("n must be nonnegative, got {0}")]
    NegativeN(i64),
    #[error("zero polynomial has no class")]
    ZeroPolynomial,
    #[error("inhomogeneous polynomial: `{first}` has class {first_class} but `{second}` has class {second_class}")]
    Inhomogeneous { first: String, first_class: DivisorClass, second: String, second_class: DivisorClass },
    #[error("polynomial variables {got:?} do not match the ambient {expected:?}")]
    VariableMismatch { expected: Vec<String>, got: Vec<String> },
    #[error("expected a form of degree {expected} in w0, w1")]
    WrongDegree { expected: u32 },
    #[error("a is not the product b*c")]
    NotAProduct,
    #[error("identity check failed: {0}")]
    IdentityFailed(String),
    #[error("unsupported ambient for this operation: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    P,
    Q,
    T,
}

/// The class `f * F + h * H` in `Cl = Z^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct DivisorClass {
    pub f: i64,
    pub h: i64,
}

impl DivisorClass {
    pub const F: DivisorClass = DivisorClass { f: 1, h: 0 };
    pub const H: DivisorClass = DivisorClass { f: 0, h: 1 };

    pub fn new(f: i64, h: i64) -> Self {
        DivisorClass { f, h }
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.f + o.f, self.h + o.h)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.f - o.f, self.h - o.h)
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass::new(-self.f, -self.h)
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, c: DivisorClass) -> DivisorClass {
        DivisorClass::new(self * c.f, self * c.h)
    }
}

/// Prints e.g. `H - 2F`, `-3H + 8F`, `0`.
impl fmt::Display for DivisorClass {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (k, sym) in [(self.h, "H"), (self.f, "F")] {
            if k == 0 {
                continue;
            }
            let mag = if k.abs() == 1 { sym.to_string() } else { format!("{}{sym}", k.abs()) };
            match (s.is_empty(), k < 0) {
                (true, false) => s.push_str(&mag),
                (true, true) => s.push_str(&format!("-{mag}")),
                (false, false) => s.push_str(&format!(" + {mag}")),
                (false, true) => s.push_str(&format!(" - {mag}")),
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        out.write_str(&s)
    }
}

/// Cox data of a simplicial toric variety of Picard rank at most two.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientSpec {
    pub name: String,
    pub family: Family,
    pub n: u32,
    pub vars: Vec<String>,
    /// One row per grading: `[F-degree, H-degree]`, or just `[degree]` for `T_n`.
    pub weights: Vec<Vec<i64>>,
    /// Partition of `vars` describing the irrelevant ideal.
    pub irrelevant: Vec<Vec<String>>,
}

fn check_n(n: i64) -> Result<u32, CoxError> {
    u32::try_from(n).map_err(|_| CoxError::NegativeN(n))
}

pub fn make_p(n: i64) -> Result<AmbientSpec, CoxError> {
    let n = check_n(n)?;
    Ok(two_block(Family::P, n, "y", (-(n as i64), 2)))
}

pub fn make_q(n: i64) -> Result<AmbientSpec, CoxError> {
    let n = check_n(n)?;
    Ok(two_block(Family::Q, n, "z", (-2 * n as i64, 4)))
}

fn two_block(family: Family, n: u32, fiber: &str, col: (i64, i64)) -> AmbientSpec {
    let vars: Vec<String> = ["w0", "w1", "x0", "x1", "x2", fiber].iter().map(|s| s.to_string()).collect();
    AmbientSpec {
        name: format!("{family:?}_{n}"),
        family,
        n,
        weights: vec![vec![1, 1, 0, 0, 0, col.0], vec![0, 0, 1, 1, 1, col.1]],
        irrelevant: vec![vars[..2].to_vec(), vars[2..].to_vec()],
        vars,
    }
}

pub fn make_t(n: i64) -> Result<AmbientSpec, CoxError> {
    let n = check_n(n)?;
    let mut vars: Vec<String> = ["x0", "x1", "x2"].iter().map(|s| s.to_string()).collect();
    vars.extend((0..=n).map(|i| format!("y{i}")));
    let mut w = vec![1, 1, 1];
    w.extend(std::iter::repeat_n(2, n as usize + 1));
    Ok(AmbientSpec { name: format!("T_{n}"), family: Family::T, n, irrelevant: vec![vars.clone()], vars, weights: vec![w] })
}

impl AmbientSpec {
    pub fn var_list(&self) -> Arc<[String]> {
        self.vars.iter().cloned().collect()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    /// Class of the `i`-th Cox variable.
    pub fn column(&self, i: usize) -> DivisorClass {
        match self.weights.len() {
            1 => DivisorClass::new(0, self.weights[0][i]),
            _ => DivisorClass::new(self.weights[0][i], self.weights[1][i]),
        }
    }

    /// Class of a Cox monomial with (possibly negative) exponents.
    pub fn monomial_class(&self, exps: &[i64]) -> DivisorClass {
        exps.iter().enumerate().fold(DivisorClass::default(), |acc, (i, &e)| acc + e * self.column(i))
    }
}

/// Common class of all terms of `p`.
pub fn bidegree<F: Field>(p: &SparsePoly<F>, spec: &AmbientSpec) -> Result<DivisorClass, CoxError> {
    let p = if p.vars().as_ref() == spec.vars.as_slice() {
        p.clone()
    } else {
        p.with_vars(&spec.var_list()).map_err(|_| CoxError::VariableMismatch { expected: spec.vars.clone(), got: p.vars().to_vec() })?
    };
    let mut first: Option<(String, DivisorClass)> = None;
    for (e, c) in p.terms() {
        let cls = spec.monomial_class(&e.iter().map(|&k| k as i64).collect::<Vec<_>>());
        let label = SparsePoly::monomial(p.field(), p.vars(), c.clone(), e.clone()).format();
        match &first {
            None => first = Some((label, cls)),
            Some((l0, c0)) if *c0 != cls => {
                return Err(CoxError::Inhomogeneous { first: l0.clone(), first_class: *c0, second: label, second_class: cls });
            }
            _ => {}
        }
    }
    first.map(|(_, c)| c).ok_or(CoxError::ZeroPolynomial)
}

/// `K = -(sum of the weight columns)`.
pub fn canonical_class(spec: &AmbientSpec) -> DivisorClass {
    -(0..spec.vars.len()).fold(DivisorClass::default(), |acc, i| acc + spec.column(i))
}

/// Canonical class of a hypersurface of class `d`: `K + d`.
pub fn adjunction(spec: &AmbientSpec, hypersurface: DivisorClass) -> DivisorClass {
    canonical_class(spec) + hypersurface
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{gf_make_field, RationalField};
    use crate::polyring::parse_poly;
    use proptest::prelude::*;

    #[test]
    fn weight_columns() {
        let p = make_p(5).unwrap();
        assert_eq!(p.column(5), DivisorClass::new(-5, 2));
        let q = make_q(5).unwrap();
        assert_eq!(q.column(5), DivisorClass::new(-10, 4));
        let t = make_t(2).unwrap();
        assert_eq!(t.weights, vec![vec![1, 1, 1, 2, 2, 2]]);
        assert_eq!(t.irrelevant.len(), 1);
        assert!(make_p(-1).is_err());
    }

    #[test]
    fn bidegree_examples() {
        let f = gf_make_field(1).unwrap();
        let p5 = make_p(5).unwrap();
        let vs = p5.var_list();
        let eq = parse_poly(&f, &vs, "w0^10*y^2 + w0*w1^9*y^2 + x0^3*x1 + x1^3*x2 + x2^3*x0").unwrap();
        assert_eq!(bidegree(&eq, &p5).unwrap(), 4 * DivisorClass::H);
        assert_eq!(bidegree(&parse_poly(&f, &vs, "w0").unwrap(), &p5).unwrap(), DivisorClass::F);
        let m = 6;
        let k = m;
        let s = parse_poly(&f, &vs, &format!("y^{m}*w0^{k}")).unwrap();
        assert_eq!(bidegree(&s, &p5).unwrap(), DivisorClass::new(-4 * m, 2 * m));
        let bad = parse_poly(&f, &vs, "w0 + x0").unwrap();
        match bidegree(&bad, &p5) {
            Err(CoxError::Inhomogeneous { first, second, .. }) => {
                assert_eq!((first.as_str(), second.as_str()), ("x0", "w0"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn adjunction_examples() {
        for n in 0..10 {
            let q = make_q(n).unwrap();
            assert_eq!(adjunction(&q, 4 * DivisorClass::H), DivisorClass::new(2 * n - 2, -3));
            let p = make_p(n).unwrap();
            assert_eq!(adjunction(&p, 4 * DivisorClass::H), DivisorClass::new(n - 2, -1));
        }
        assert_eq!(canonical_class(&make_t(2).unwrap()), DivisorClass::new(0, -9));
    }

    #[test]
    fn class_display() {
        assert_eq!(DivisorClass::new(-2, 1).to_string(), "H - 2F");
        assert_eq!(DivisorClass::new(8, -3).to_string(), "-3H + 8F");
        assert_eq!(DivisorClass::default().to_string(), "0");
    }

    proptest! {
        #[test]
        fn bidegree_is_additive(e1 in proptest::collection::vec(0u32..4, 6), e2 in proptest::collection::vec(0u32..4, 6), n in 0i64..8) {
            let f = RationalField;
            let spec = make_p(n).unwrap();
            let vs = spec.var_list();
            let p = SparsePoly::monomial(&f, &vs, f.one(), e1);
            let q = SparsePoly::monomial(&f, &vs, f.from_int(3), e2);
            prop_assert_eq!(bidegree(&p.mul(&q), &spec).unwrap(), bidegree(&p, &spec).unwrap() + bidegree(&q, &spec).unwrap());
        }
    }
}
