//! Critical points in characteristic 2: the critical set of the Klein
//! quartic, critical points of binary forms `a(w0, w1)`, and the local
//! shape of `a f` at pairs of such points.
//!
//! A critical point counts as almost nondegenerate when, in local
//! coordinates `(w, t1, t2)`, the gradient vanishes, the cross terms
//! `w t1` and `w t2` are absent, the `t1 t2` coefficient is nonzero and the
//! `w^3` coefficient is nonzero. Square terms carry no quadratic data in
//! characteristic 2 and are ignored.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxtoric::{klein_quartic, PLANE_VARS};
use crate::exactfield::{Field, FieldError};
use crate::polyring::{factor, var_list, PolyError, ResidueField, SparsePoly, UniPoly};
use crate::singular::{dehomogenize_base, projective_zeros, SingularError, ZeroSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CriticalError {
    #[error("GF(2^{k}) has no primitive 7th root of unity; use a degree divisible by 3")]
    NoSeventhRoots { k: u32 },
    #[error("critical points need a finite field of characteristic 2")]
    NotFinite,
    #[error("the critical locus is not finite")]
    InfiniteCriticalLocus,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no suitable `a` found in {trials} trials")]
    Exhausted { trials: usize },
    #[error(transparent)]
    Singular(#[from] SingularError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    AlmostNondegenerate,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// The function is nonzero at the point.
    ValueNonzero,
    /// (i) gradient vanishes.
    Gradient,
    /// (ii) no `w t_i` terms.
    CrossTerms,
    /// (iii) nonzero `t1 t2` coefficient.
    QuadraticBlock,
    /// (iv) nonzero `w^3` coefficient.
    Cubic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    pub chart: String,
    pub field: String,
    pub degree: usize,
    pub coords: BTreeMap<String, String>,
}

/// Low-order Taylor coefficients at the point, as text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalData {
    pub constant: String,
    pub gradient: Vec<String>,
    /// Coefficient of `w^2`.
    pub quadratic: String,
    pub cross: Vec<String>,
    /// Coefficient of `t1 t2`; absent for functions of one variable.
    pub mixed: Option<String>,
    /// Coefficient of `w^3`.
    pub cubic: String,
    /// Hessian of the plane factor in its chart, when there is one.
    pub hessian_f: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub location: Location,
    pub local: LocalData,
    pub classification: Classification,
    pub failing: Vec<Condition>,
}

/// A critical point of `f` in the plane, normalized so that its first
/// nonzero coordinate is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneCriticalPoint<F: Field> {
    pub point: [F::Elem; 3],
    pub f_value: F::Elem,
    /// Hessian of `f` on the chart of the first nonzero coordinate.
    pub hessian: F::Elem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hessian<F: Field> {
    pub value: F::Elem,
    /// The gradient vanishes at the point.
    pub critical: bool,
}

/// Determinant of the matrix of formal second partials of `g` in the
/// variables `u, v` at `point`, which lists values for every variable of `g`.
pub fn hessian2<F: Field>(g: &SparsePoly<F>, point: &[F::Elem], u: usize, v: usize) -> Result<Hessian<F>, PolyError> {
    let f = g.field();
    let gu = g.partial_at(u);
    let gv = g.partial_at(v);
    let critical = f.is_zero(&gu.eval(point)?) && f.is_zero(&gv.eval(point)?);
    let huu = gu.partial_at(u).eval(point)?;
    let hvv = gv.partial_at(v).eval(point)?;
    let huv = gu.partial_at(v).eval(point)?;
    let value = f.sub(&f.mul(&huu, &hvv), &f.square(&huv));
    Ok(Hessian { value, critical })
}

fn plane_vars() -> Arc<[String]> {
    var_list(&PLANE_VARS)
}

fn require_char2<F: Field>(field: &F) -> Result<u32, CriticalError> {
    match (field.characteristic(), field.log2_size()) {
        (2, Some(k)) => Ok(k),
        _ => Err(CriticalError::NotFinite),
    }
}

/// `Cr(f)`: common zeros in the plane of the three partials of the Klein
/// quartic, computed by elimination. Every point is defined over the working
/// field when it contains the 7th roots of unity.
pub fn cr_f<F: Field>(field: &F) -> Result<Vec<PlaneCriticalPoint<F>>, CriticalError> {
    let k = require_char2(field)?;
    if k % 3 != 0 {
        return Err(CriticalError::NoSeventhRoots { k });
    }
    let f = klein_quartic(field, &plane_vars());
    let pts = match projective_zeros(&f.gradient(), [0, 1, 2]) {
        ZeroSet::Finite(p) => p,
        ZeroSet::PositiveDimensional { .. } => return Err(CriticalError::InfiniteCriticalLocus),
        ZeroSet::Undecided(why) => return Err(CriticalError::Precondition(why)),
    };
    let mut out = Vec::new();
    for p in pts {
        let c = p.base_coords().ok_or(CriticalError::NoSeventhRoots { k })?;
        let j = c.iter().position(|x| !field.is_zero(x)).expect("projective point");
        let inv = field.inv(&c[j])?;
        let point: [F::Elem; 3] = std::array::from_fn(|i| field.mul(&c[i], &inv));
        let f_value = f.eval(&point)?;
        let (u, v) = others(j);
        let hessian = hessian2(&f.specialize(&[(j, field.one())]), &point, u, v)?.value;
        out.push(PlaneCriticalPoint { point, f_value, hessian });
    }
    Ok(out)
}

fn others(j: usize) -> (usize, usize) {
    match j {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// A critical point of `a` on the projective line, over the residue field
/// of its closed point.
#[derive(Debug, Clone)]
pub struct BaseCriticalPoint<F: Field> {
    pub field: ResidueField<F>,
    pub coords: [Vec<F::Elem>; 2],
}

/// Closed points of `Cr(a) = (da/dw0 = da/dw1 = 0)` on the projective line.
pub fn cr_a_points<F: Field>(a: &SparsePoly<F>, n: u32) -> Result<Vec<BaseCriticalPoint<F>>, CriticalError> {
    require_char2(a.field())?;
    dehomogenize_base(a, n)?;
    let field = a.field().clone();
    let a = a.with_vars(&var_list(&["w0", "w1"]))?;
    let d0 = a.partial_at(0);
    let d1 = a.partial_at(1);
    let on_chart = |d: &SparsePoly<F>| d.specialize(&[(0, field.one())]).to_univariate(1);
    let mut g = on_chart(&d0)?.gcd(&on_chart(&d1)?);
    // When `a` is a square every point is critical; the zeros of `a` are
    // then reported, all of them degenerate.
    let whole_line = g.is_zero();
    if whole_line {
        g = a.specialize(&[(0, field.one())]).to_univariate(1)?;
    }
    let mut out = Vec::new();
    if !g.is_constant() {
        for (r, _) in factor(&g).ok_or(CriticalError::NotFinite)? {
            let k = ResidueField::new(&r);
            out.push(BaseCriticalPoint { coords: [k.one(), k.generator()], field: k });
        }
    }
    let inf = [field.zero(), field.one()];
    let at_inf = if whole_line { field.is_zero(&a.eval(&inf)?) } else { field.is_zero(&d0.eval(&inf)?) && field.is_zero(&d1.eval(&inf)?) };
    if at_inf {
        let k = ResidueField::new(&UniPoly::x(&field));
        out.push(BaseCriticalPoint { coords: [k.zero(), k.one()], field: k });
    }
    Ok(out)
}

/// `a` on the chart of the point, as a polynomial in the local coordinate
/// centred at the point.
fn local_base<F: Field>(a: &SparsePoly<F>, p: &BaseCriticalPoint<F>) -> (usize, UniPoly<ResidueField<F>>, Vec<F::Elem>) {
    let k = &p.field;
    let a = a.with_vars(&var_list(&["w0", "w1"])).expect("binary form");
    let i = if k.is_zero(&p.coords[0]) { 1 } else { 0 };
    let rho = k.div(&p.coords[1 - i], &p.coords[i]).expect("nonzero");
    let chart = a.specialize(&[(i, a.field().one())]).to_univariate(1 - i).expect("binary form");
    let local = chart.map(k, |c| k.embed(c)).shift(&rho);
    (i, local, rho)
}

fn fmt_res<F: Field>(k: &ResidueField<F>, a: &[F::Elem]) -> String {
    match k.as_base(a) {
        Some(b) => k.base().format(&b),
        None => k.format(&a.to_vec()),
    }
}

/// Critical points of `a` with the local conditions: `a != 0` at the point,
/// no linear term, and a nonzero `w^3` coefficient.
pub fn cr_a<F: Field>(a: &SparsePoly<F>, n: u32) -> Result<Vec<CriticalPoint>, CriticalError> {
    let pts = cr_a_points(a, n)?;
    Ok(pts
        .iter()
        .map(|p| {
            let k = &p.field;
            let (chart, local, _) = local_base(a, p);
            let c = |i: usize| local.coeff(i);
            let mut failing = Vec::new();
            if k.is_zero(&c(0)) {
                failing.push(Condition::ValueNonzero);
            }
            if !k.is_zero(&c(1)) {
                failing.push(Condition::Gradient);
            }
            if k.is_zero(&c(3)) {
                failing.push(Condition::Cubic);
            }
            let location = Location {
                chart: format!("U(w{chart})"),
                field: if k.degree() == 1 { a.field().name() } else { k.name() },
                degree: k.degree(),
                coords: ["w0", "w1"].iter().map(|s| s.to_string()).zip(p.coords.iter().map(|v| fmt_res(k, v))).collect(),
            };
            CriticalPoint {
                location,
                local: LocalData {
                    constant: fmt_res(k, &c(0)),
                    gradient: vec![fmt_res(k, &c(1))],
                    quadratic: fmt_res(k, &c(2)),
                    cross: Vec::new(),
                    mixed: None,
                    cubic: fmt_res(k, &c(3)),
                    hessian_f: None,
                },
                classification: if failing.is_empty() { Classification::AlmostNondegenerate } else { Classification::Degenerate },
                failing,
            }
        })
        .collect())
}

/// Classifies the critical point of `g` at `center` with local coordinates
/// `w = var w_idx` and `t1, t2 = vars t_idx`. `g` may have no other variables.
pub fn classify_critical_point<F: Field>(g: &SparsePoly<F>, center: &[F::Elem], w_idx: usize, t_idx: (usize, usize)) -> Result<CriticalPoint, CriticalError> {
    classify_with(g, center, w_idx, t_idx, |x| g.field().format(x))
}

fn classify_with<F: Field>(
    g: &SparsePoly<F>,
    center: &[F::Elem],
    w_idx: usize,
    t_idx: (usize, usize),
    fmt: impl Fn(&F::Elem) -> String,
) -> Result<CriticalPoint, CriticalError> {
    let f = g.field();
    if g.nvars() != 3 {
        return Err(PolyError::ArityMismatch { expected: 3, got: g.nvars() }.into());
    }
    let local_names = var_list(&["w", "t1", "t2"]);
    let mut perm_vars = vec![String::new(); 3];
    perm_vars[w_idx] = "w".into();
    perm_vars[t_idx.0] = "t1".into();
    perm_vars[t_idx.1] = "t2".into();
    let local_order: Arc<[String]> = perm_vars.into();
    let exp = g.taylor_expand(center, 3, &local_order)?.with_vars(&local_names)?;
    let c = |e: [u32; 3]| exp.coeff(&e);
    let zero = |x: &F::Elem| f.is_zero(x);
    let gradient = [c([1, 0, 0]), c([0, 1, 0]), c([0, 0, 1])];
    let cross = [c([1, 1, 0]), c([1, 0, 1])];
    let mixed = c([0, 1, 1]);
    let cubic = c([3, 0, 0]);
    let mut failing = Vec::new();
    if !gradient.iter().all(zero) {
        failing.push(Condition::Gradient);
    }
    if !cross.iter().all(zero) {
        failing.push(Condition::CrossTerms);
    }
    if zero(&mixed) {
        failing.push(Condition::QuadraticBlock);
    }
    if zero(&cubic) {
        failing.push(Condition::Cubic);
    }
    Ok(CriticalPoint {
        location: Location {
            chart: "affine".into(),
            field: f.name(),
            degree: 1,
            coords: g.vars().iter().cloned().zip(center.iter().map(&fmt)).collect(),
        },
        local: LocalData {
            constant: fmt(&c([0, 0, 0])),
            gradient: gradient.iter().map(&fmt).collect(),
            quadratic: fmt(&c([2, 0, 0])),
            cross: cross.iter().map(&fmt).collect(),
            mixed: Some(fmt(&mixed)),
            cubic: fmt(&cubic),
            hessian_f: None,
        },
        classification: if failing.is_empty() { Classification::AlmostNondegenerate } else { Classification::Degenerate },
        failing,
    })
}

/// Checks the critical point of `a f` on `(a != 0)` over the base point
/// `p` and the plane point `x` (coordinates in the residue field of `p`).
pub fn verify_almost_nondegenerate<F: Field>(
    a: &SparsePoly<F>,
    f: &SparsePoly<F>,
    p: &BaseCriticalPoint<F>,
    x: &[Vec<F::Elem>; 3],
) -> Result<CriticalPoint, CriticalError> {
    let k = &p.field;
    let (chart_w, local_a, rho) = local_base(a, p);
    if k.is_zero(&local_a.coeff(0)) {
        return Err(CriticalError::Precondition("a vanishes at the point".into()));
    }
    let j = x.iter().position(|c| !k.is_zero(c)).ok_or_else(|| CriticalError::Precondition("x is zero".into()))?;
    let inv = k.inv(&x[j])?;
    let xn: Vec<Vec<F::Elem>> = x.iter().map(|c| k.mul(c, &inv)).collect();
    let (u, v) = others(j);

    let f = f.with_vars(&plane_vars())?;
    let vars3 = var_list(&["w", "u", "v"]);
    let a_chart = local_a.shift(&k.neg(&rho));
    let a3 = SparsePoly::from_terms(k, &vars3, a_chart.coeffs().iter().enumerate().map(|(i, c)| (vec![i as u32, 0, 0], c.clone())));
    let f3 = SparsePoly::from_terms(k, &vars3, f.specialize(&[(j, f.field().one())]).terms().iter().map(|(e, c)| (vec![0, e[u], e[v]], k.embed(c))));
    let g = a3.mul(&f3);
    let center = [rho.clone(), xn[u].clone(), xn[v].clone()];
    let mut cp = classify_with(&g, &center, 0, (1, 2), |c| fmt_res(k, c))?;
    cp.local.hessian_f = Some(fmt_res(k, &hessian2(&f3, &center, 1, 2)?.value));

    let mut coords = BTreeMap::new();
    for (name, c) in ["w0", "w1"].iter().zip(&p.coords) {
        coords.insert(name.to_string(), fmt_res(k, c));
    }
    for (i, c) in xn.iter().enumerate() {
        coords.insert(format!("x{i}"), fmt_res(k, c));
    }
    cp.location = Location {
        chart: format!("U(w{chart_w},x{j})"),
        field: if k.degree() == 1 { k.base().name() } else { k.name() },
        degree: k.degree(),
        coords,
    };
    Ok(cp)
}

/// Critical points of `z` on `Z` away from `(a = 0)`: every pair of a
/// critical point of `a` with `a != 0` and a point of `Cr(f)`, classified.
pub fn critical_pairs<F: Field>(a: &SparsePoly<F>, n: u32) -> Result<Vec<CriticalPoint>, CriticalError> {
    let field = a.field();
    let crf = cr_f(field)?;
    let f = klein_quartic(field, &plane_vars());
    let mut out = Vec::new();
    for p in cr_a_points(a, n)? {
        let k = &p.field;
        let (_, local, _) = local_base(a, &p);
        if k.is_zero(&local.coeff(0)) {
            continue;
        }
        for q in &crf {
            let x = [k.embed(&q.point[0]), k.embed(&q.point[1]), k.embed(&q.point[2])];
            out.push(verify_almost_nondegenerate(a, &f, &p, &x)?);
        }
    }
    Ok(out)
}

/// `a` is a form of degree `2n` without multiple components.
pub fn is_squarefree_form<F: Field>(a: &SparsePoly<F>, n: u32) -> Result<bool, CriticalError> {
    let (a0, _) = dehomogenize_base(a, n)?;
    Ok(2 * n as usize - a0.degree().unwrap() <= 1 && a0.gcd(&a0.derivative()).is_constant())
}

/// Squarefree, and every critical point of `a` is almost nondegenerate.
pub fn passes_genericity<F: Field>(a: &SparsePoly<F>, n: u32) -> Result<bool, CriticalError> {
    if a.is_zero() || !is_squarefree_form(a, n)? {
        return Ok(false);
    }
    Ok(cr_a(a, n)?.iter().all(|p| p.classification == Classification::AlmostNondegenerate))
}

pub const DEFAULT_BUDGET: usize = 1000;

/// Samples forms of degree `2n` from a ChaCha8 stream seeded with `seed`
/// until one is squarefree and all its critical points pass the local
/// conditions.
pub fn random_generic_a<F: Field>(n: u32, field: &F, seed: u64, budget: usize) -> Result<SparsePoly<F>, CriticalError> {
    require_char2(field)?;
    let base = var_list(&["w0", "w1"]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let terms: Vec<(Vec<u32>, F::Elem)> = (0..=2 * n).map(|i| (vec![2 * n - i, i], field.random(&mut rng))).collect();
        let a = SparsePoly::from_terms(field, &base, terms);
        if passes_genericity(&a, n)? {
            return Ok(a);
        }
    }
    Err(CriticalError::Exhausted { trials: budget })
}

#[cfg(test)]
mod tests;
