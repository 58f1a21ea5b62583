//! Smoothness and singularity checks: plane quartics, hypersurface charts of
//! the toric ambients, the half points over the zeros of `a`, and monomial
//! symmetry of the quartic.

mod chart;
mod elimination;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use chart::{hunt_rational_singularity, hypersurface_smooth_on_chart};
pub use elimination::{affine_zeros_2d, projective_zeros, trivial_tower, ClosedPoint, Tower, TowerElem, ZeroSet};

use crate::coxtoric::{chart_atlas, make_p, CoxError, QuotientTag};
use crate::exactfield::{gf_primitive_root_of_unity, Field, FieldError, GfField};
use crate::polyring::{factor, PolyError, ResidueField, SparsePoly, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SingularError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous in {0} variables")]
    NotHomogeneous(usize),
    #[error("chart and equation do not match: {0}")]
    ChartMismatch(String),
    #[error("`a` has a multiple component through {root}")]
    MultipleComponent { root: String },
    #[error("`a` must be a form of degree {expected} in w0, w1")]
    WrongDegree { expected: u32 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Cox(#[from] CoxError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Smooth,
    Singular,
    Undecided,
}

/// A point over a finite extension, coordinates as text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessPoint {
    pub field: String,
    pub degree: usize,
    pub coords: BTreeMap<String, String>,
    /// Every checked polynomial vanishes at the point (recomputed after construction).
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocusSummary {
    Empty,
    Finite { closed_points: usize, geometric_points: usize },
    PositiveDimensional,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfPoint {
    /// `(w0:w1)` of the root of `a`.
    pub point: String,
    pub multiplicity: u32,
    /// Weights of the cyclic action on the chart coordinates `x0, x1, x2`.
    pub weights: Vec<u32>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityReport {
    pub chart: String,
    pub status: Verdict,
    pub witness: Option<WitnessPoint>,
    pub singular_locus: Option<LocusSummary>,
    pub half_points: Vec<HalfPoint>,
    pub method: String,
    pub note: Option<String>,
    /// Singular points with coordinates in the working field, when the
    /// decider enumerated them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rational_points: Option<Vec<BTreeMap<String, String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneCurveReport {
    pub verdict: Verdict,
    pub witness: Option<WitnessPoint>,
    pub note: Option<String>,
}

impl PlaneCurveReport {
    pub fn is_smooth(&self) -> Option<bool> {
        match self.verdict {
            Verdict::Smooth => Some(true),
            Verdict::Singular => Some(false),
            Verdict::Undecided => None,
        }
    }
}

pub(crate) fn witness_from_closed<F: Field>(p: &ClosedPoint<F>, names: &[String], polys: &[SparsePoly<F>], idx: &[usize]) -> WitnessPoint {
    let verified = polys.iter().all(|g| p.field.is_zero(&p.eval(g, idx)));
    WitnessPoint {
        field: p.field_name(),
        degree: p.degree(),
        coords: names.iter().cloned().zip(p.describe()).collect(),
        verified,
    }
}

/// Whether the projective plane curve `g = 0` is nonsingular over the
/// algebraic closure. `g` must have exactly three variables.
pub fn plane_curve_smooth<F: Field>(g: &SparsePoly<F>) -> Result<PlaneCurveReport, SingularError> {
    if g.is_zero() {
        return Err(SingularError::ZeroPolynomial);
    }
    if g.nvars() != 3 {
        return Err(SingularError::NotHomogeneous(3));
    }
    let d = g.total_degree().unwrap();
    if !g.terms().keys().all(|e| e.iter().sum::<u32>() == d) {
        return Err(SingularError::NotHomogeneous(3));
    }
    let mut system = vec![g.clone()];
    system.extend(g.gradient());
    let names: Vec<String> = g.vars().to_vec();
    Ok(match projective_zeros(&system, [0, 1, 2]) {
        ZeroSet::Finite(pts) if pts.is_empty() => PlaneCurveReport { verdict: Verdict::Smooth, witness: None, note: None },
        ZeroSet::Finite(pts) => PlaneCurveReport {
            verdict: Verdict::Singular,
            witness: Some(witness_from_closed(&pts[0], &names, &system, &[0, 1, 2])),
            note: Some(format!("{} singular closed points", pts.len())),
        },
        ZeroSet::PositiveDimensional { witness } => PlaneCurveReport {
            verdict: Verdict::Singular,
            witness: witness.map(|w| witness_from_closed(&w, &names, &system, &[0, 1, 2])),
            note: Some("singular locus contains a curve".into()),
        },
        ZeroSet::Undecided(why) => PlaneCurveReport { verdict: Verdict::Undecided, witness: None, note: Some(why) },
    })
}

/// `a(1, w)` and `a(w, 1)` as univariate polynomials, with `a` a form of
/// degree `2n` in `w0, w1`.
pub fn dehomogenize_base<F: Field>(a: &SparsePoly<F>, n: u32) -> Result<(UniPoly<F>, UniPoly<F>), SingularError> {
    let base = crate::polyring::var_list(&["w0", "w1"]);
    let a = a.with_vars(&base)?;
    if a.is_zero() || !a.terms().keys().all(|e| e[0] + e[1] == 2 * n) {
        return Err(SingularError::WrongDegree { expected: 2 * n });
    }
    let f = a.field().clone();
    let a0 = a.specialize(&[(0, f.one())]).to_univariate(1)?;
    let a1 = a.specialize(&[(1, f.one())]).to_univariate(0)?;
    Ok((a0, a1))
}

/// The points of `(x0 = x1 = x2 = 0)` on `X_n`, one per geometric root of
/// `a` on the projective line. Each is a `1/2(1,1,1)` point when the root is
/// simple and the chart action has weights `(1,1,1)` on the `x` coordinates.
///
/// Roots are written in the residue field of their closed point; conjugate
/// roots appear as powers `s^(q^i)` of the generator. Over fields that are
/// not factored (the rationals) each simple root is listed by index.
pub fn half_point_check<F: Field>(n: u32, a: &SparsePoly<F>) -> Result<Vec<HalfPoint>, SingularError> {
    let (a0, a1) = dehomogenize_base(a, n)?;
    let f = a.field().clone();
    let deg = a0.degree().unwrap();
    let at_infinity = 2 * n as usize - deg;
    if at_infinity >= 2 {
        return Err(SingularError::MultipleComponent { root: "(0:1)".into() });
    }
    let g = a0.gcd(&a0.derivative());
    if !g.is_constant() {
        let root = match factor(&g) {
            Some(fs) => {
                let k = ResidueField::new(&fs[0].0);
                format!("(1:{})", k.format(&k.generator()))
            }
            None => format!("root of {}", g.format("w1")),
        };
        return Err(SingularError::MultipleComponent { root });
    }
    // Cyclic weights on x0, x1, x2 in the fiber-inverted chart.
    let spec = make_p(n as i64)?;
    let atlas = chart_atlas(&spec)?;
    let weights_at = |id: &str| -> Vec<u32> {
        let c = atlas.iter().find(|c| c.id == id).expect("fiber chart");
        match &c.quotient {
            QuotientTag::Cyclic { weights, .. } => ["x0", "x1", "x2"].iter().map(|x| weights[c.coord_index(x).unwrap()]).collect(),
            QuotientTag::Trivial => vec![0, 0, 0],
        }
    };
    let w_affine = weights_at("U(w0,y)");
    let w_inf = weights_at("U(w1,y)");
    let good = |w: &[u32]| w.iter().all(|&x| x == 1);

    let mut out = Vec::new();
    match factor(&a0) {
        Some(fs) => {
            for (r, _) in fs {
                let k = ResidueField::new(&r);
                let s = k.generator();
                let q_log = f.log2_size().unwrap();
                let dr = r.degree().unwrap();
                let d_at = a0.derivative().map(&k, |c| k.embed(c));
                for i in 0..dr {
                    let rho = k.frobenius(&s, q_log * i as u32);
                    let simple = !k.is_zero(&d_at.eval(&rho));
                    out.push(HalfPoint {
                        point: format!("(1:{})", k.format(&rho)),
                        multiplicity: 1,
                        weights: w_affine.clone(),
                        ok: simple && good(&w_affine),
                    });
                }
            }
        }
        None => {
            for i in 0..deg {
                out.push(HalfPoint {
                    point: format!("(1:root {} of {})", i + 1, a0.format("w1")),
                    multiplicity: 1,
                    weights: w_affine.clone(),
                    ok: good(&w_affine),
                });
            }
        }
    }
    if at_infinity == 1 {
        let simple = !f.is_zero(&a1.derivative().eval(&f.zero()));
        out.push(HalfPoint { point: "(0:1)".into(), multiplicity: 1, weights: w_inf.clone(), ok: simple && good(&w_inf) });
    }
    Ok(out)
}

/// Exact invariance of `g` under `x_i -> zeta^(e_i) x_i` (`zeta` a primitive
/// `r`-th root of unity) and under the variable permutation `x_i -> x_perm[i]`.
/// Either transformation may be omitted.
pub fn monomial_invariance(g: &SparsePoly<GfField>, diagonal: Option<(&[i64], u64)>, perm: Option<&[usize]>) -> Result<bool, SingularError> {
    let f = g.field();
    if let Some((exps, r)) = diagonal {
        if exps.len() != g.nvars() {
            return Err(PolyError::ArityMismatch { expected: g.nvars(), got: exps.len() }.into());
        }
        let zeta = gf_primitive_root_of_unity(f, r)?;
        let image = SparsePoly::from_terms(
            f,
            g.vars(),
            g.terms().iter().map(|(e, c)| {
                let k: i64 = e.iter().zip(exps).map(|(&ei, &ai)| ei as i64 * ai).sum();
                (e.clone(), f.mul(c, &f.pow(&zeta, k.rem_euclid(r as i64) as u64)))
            }),
        );
        if image != *g {
            return Ok(false);
        }
    }
    if let Some(perm) = perm {
        if perm.len() != g.nvars() {
            return Err(PolyError::ArityMismatch { expected: g.nvars(), got: perm.len() }.into());
        }
        let image = SparsePoly::from_terms(
            f,
            g.vars(),
            g.terms().iter().map(|(e, c)| {
                let mut out = vec![0; e.len()];
                for (i, &ei) in e.iter().enumerate() {
                    out[perm[i]] += ei;
                }
                (out, *c)
            }),
        );
        if image != *g {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxtoric::{klein_quartic, PLANE_VARS};
    use crate::exactfield::{gf_make_field, RationalField};
    use crate::polyring::{parse_poly, var_list};

    fn plane() -> std::sync::Arc<[String]> {
        var_list(&PLANE_VARS)
    }

    #[test]
    fn klein_is_smooth() {
        let q = RationalField;
        assert_eq!(plane_curve_smooth(&klein_quartic(&q, &plane())).unwrap().verdict, Verdict::Smooth);
        for k in [1, 3, 8] {
            let f = gf_make_field(k).unwrap();
            assert_eq!(plane_curve_smooth(&klein_quartic(&f, &plane())).unwrap().verdict, Verdict::Smooth, "k={k}");
        }
    }

    #[test]
    fn quadruple_line() {
        let f = gf_make_field(1).unwrap();
        let r = plane_curve_smooth(&parse_poly(&f, &plane(), "x0^4").unwrap()).unwrap();
        assert_eq!(r.verdict, Verdict::Singular);
        let w = r.witness.unwrap();
        assert!(w.verified);
        assert_eq!(w.coords["x0"], "0");
    }

    #[test]
    fn nodal_cubic_point() {
        let f = gf_make_field(3).unwrap();
        let g = parse_poly(&f, &plane(), "x0*x1*x2 + x1^3 + x2^3").unwrap();
        let r = plane_curve_smooth(&g).unwrap();
        assert_eq!(r.verdict, Verdict::Singular);
        let w = r.witness.unwrap();
        assert!(w.verified);
        assert_eq!((w.coords["x0"].as_str(), w.coords["x1"].as_str()), ("1", "0"));
        // Over the rationals the eliminant is not factored.
        let q = RationalField;
        let g = parse_poly(&q, &plane(), "x0*x1*x2 + x1^3 + x2^3").unwrap();
        assert_eq!(plane_curve_smooth(&g).unwrap().verdict, Verdict::Undecided);
    }

    #[test]
    fn plane_curve_errors() {
        let f = gf_make_field(1).unwrap();
        assert_eq!(plane_curve_smooth(&SparsePoly::zero(&f, &plane())), Err(SingularError::ZeroPolynomial));
        let g = parse_poly(&f, &plane(), "x0^2 + x1").unwrap();
        assert!(matches!(plane_curve_smooth(&g), Err(SingularError::NotHomogeneous(_))));
    }

    #[test]
    fn half_points_examples() {
        let base = var_list(&["w0", "w1"]);
        let f = gf_make_field(1).unwrap();
        let hp = half_point_check(1, &parse_poly(&f, &base, "w0*w1").unwrap()).unwrap();
        assert_eq!(hp.len(), 2);
        assert!(hp.iter().all(|h| h.ok && h.weights == vec![1, 1, 1]));

        assert!(matches!(
            half_point_check(1, &parse_poly(&f, &base, "w1^2").unwrap()),
            Err(SingularError::MultipleComponent { .. })
        ));
        assert!(matches!(
            half_point_check(1, &parse_poly(&f, &base, "w0^2").unwrap()),
            Err(SingularError::MultipleComponent { .. })
        ));

        let a = parse_poly(&f, &base, "w0^4 + w0^2*w1^2 + w0*w1^3 + w1^4").unwrap();
        let hp = half_point_check(2, &a).unwrap();
        assert_eq!(hp.len(), 4);
        assert!(hp.iter().all(|h| h.ok));
        // conjugates are distinct
        let pts: std::collections::BTreeSet<_> = hp.iter().map(|h| h.point.clone()).collect();
        assert_eq!(pts.len(), 4);

        let q = RationalField;
        let hp = half_point_check(2, &parse_poly(&q, &base, "w0^3*w1 + w1^4").unwrap()).unwrap();
        assert_eq!(hp.len(), 4);
    }

    #[test]
    fn klein_symmetries() {
        let f = gf_make_field(3).unwrap();
        let k = klein_quartic(&f, &plane());
        assert!(monomial_invariance(&k, None, Some(&[1, 2, 0])).unwrap());
        assert!(!monomial_invariance(&k, None, Some(&[1, 0, 2])).unwrap());
        assert!(monomial_invariance(&k, Some((&[1, 4, 2], 7)), None).unwrap());
        assert!(!monomial_invariance(&k, Some((&[1, 1, 1], 7)), None).unwrap());
        let f4 = gf_make_field(4).unwrap();
        assert!(matches!(
            monomial_invariance(&klein_quartic(&f4, &plane()), Some((&[1, 4, 2], 7)), None),
            Err(SingularError::Field(FieldError::NoRootOfUnity { .. }))
        ));
    }
}
