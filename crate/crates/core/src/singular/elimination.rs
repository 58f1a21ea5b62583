//! Zero sets of polynomial systems in two affine or three homogeneous
//! variables, as lists of closed points.
//!
//! A closed point carries its own residue field, always presented as a
//! two-step tower `F[s]/(r)` then `[s]/(g)`; rational points have both
//! steps of degree one.

use crate::exactfield::Field;
use crate::polyring::{bivariate_gcd, factor, resultant, ResidueField, SparsePoly, UniPoly};

pub type Tower<F> = ResidueField<ResidueField<F>>;
pub type TowerElem<F> = Vec<Vec<<F as Field>::Elem>>;

#[derive(Debug, Clone)]
pub struct ClosedPoint<F: Field> {
    pub field: Tower<F>,
    pub coords: Vec<TowerElem<F>>,
}

/// The trivial tower `F[s]/(s)` then `[s]/(s)`.
pub fn trivial_tower<F: Field>(base: &F) -> Tower<F> {
    let k1 = ResidueField::new(&UniPoly::x(base));
    ResidueField::new(&UniPoly::x(&k1))
}

pub fn tower_embed<F: Field>(k: &Tower<F>, c: &F::Elem) -> TowerElem<F> {
    k.embed(&k.base().embed(c))
}

impl<F: Field> ClosedPoint<F> {
    pub fn rational(base: &F, coords: &[F::Elem]) -> Self {
        let field = trivial_tower(base);
        let coords = coords.iter().map(|c| tower_embed(&field, c)).collect();
        ClosedPoint { field, coords }
    }

    /// Number of geometric points in the closed point.
    pub fn degree(&self) -> usize {
        self.field.degree() * self.field.base().degree()
    }

    pub fn base(&self) -> &F {
        self.field.base().base()
    }

    pub fn embed(&self, c: &F::Elem) -> TowerElem<F> {
        tower_embed(&self.field, c)
    }

    pub fn base_coords(&self) -> Option<Vec<F::Elem>> {
        self.coords.iter().map(|c| self.field.as_base(c).and_then(|c1| self.field.base().as_base(&c1))).collect()
    }

    pub fn is_rational(&self) -> bool {
        self.base_coords().is_some()
    }

    /// Evaluates `p` with its variable `idx[i]` set to the `i`-th coordinate
    /// and every other variable set to zero.
    pub fn eval(&self, p: &SparsePoly<F>, idx: &[usize]) -> TowerElem<F> {
        let k = &self.field;
        let mut point = vec![k.zero(); p.nvars()];
        for (c, &i) in self.coords.iter().zip(idx) {
            point[i] = c.clone();
        }
        p.eval_in(k, |c| tower_embed(k, c), &point).expect("arity")
    }

    /// Coordinates as text; extension elements are written in the tower.
    pub fn describe(&self) -> Vec<String> {
        match self.base_coords() {
            Some(cs) => cs.iter().map(|c| self.base().format(c)).collect(),
            None => self.coords.iter().map(|c| self.field.format(c)).collect(),
        }
    }

    /// Text description of the residue field.
    pub fn field_name(&self) -> String {
        if self.degree() == 1 {
            self.base().name()
        } else {
            format!("degree {} extension of {}", self.degree(), self.base().name())
        }
    }
}

#[derive(Debug, Clone)]
pub enum ZeroSet<F: Field> {
    Finite(Vec<ClosedPoint<F>>),
    PositiveDimensional { witness: Option<ClosedPoint<F>> },
    Undecided(String),
}

impl<F: Field> ZeroSet<F> {
    pub fn is_empty(&self) -> Option<bool> {
        match self {
            ZeroSet::Finite(v) => Some(v.is_empty()),
            ZeroSet::PositiveDimensional { .. } => Some(false),
            ZeroSet::Undecided(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&ClosedPoint<F>> {
        match self {
            ZeroSet::Finite(v) => v.first(),
            ZeroSet::PositiveDimensional { witness } => witness.as_ref(),
            ZeroSet::Undecided(_) => None,
        }
    }
}

fn nonzero_constant<F: Field>(p: &SparsePoly<F>) -> bool {
    p.as_constant().is_some_and(|c| !p.field().is_zero(&c))
}

/// Common zeros over the algebraic closure of polynomials involving only
/// the variables `u` and `v`. Points have coordinates `[u, v]`.
pub fn affine_zeros_2d<F: Field>(polys: &[SparsePoly<F>], u: usize, v: usize) -> ZeroSet<F> {
    let origin = polys.first().map(|p| {
        let f = p.field();
        ClosedPoint::rational(f, &[f.zero(), f.zero()])
    });
    let polys: Vec<SparsePoly<F>> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    if polys.iter().any(nonzero_constant) {
        return ZeroSet::Finite(Vec::new());
    }
    let Some(first) = polys.first() else {
        return ZeroSet::PositiveDimensional { witness: origin };
    };
    let f = first.field().clone();
    let h = polys.iter().fold(SparsePoly::zero(&f, first.vars()), |acc, p| bivariate_gcd(&acc, p, u, v));
    if !h.is_constant() {
        return ZeroSet::PositiveDimensional { witness: point_on_curve(&h, u, v) };
    }

    let vname = first.vars()[v].clone();
    let mut g = UniPoly::zero(&f);
    for p in polys.iter().filter(|p| p.degree_in(v).unwrap_or(0) == 0) {
        g = g.gcd(&p.to_univariate(u).expect("bivariate input"));
    }
    for (i, p) in polys.iter().enumerate() {
        for q in &polys[i + 1..] {
            if p.degree_in(v).unwrap_or(0) == 0 || q.degree_in(v).unwrap_or(0) == 0 {
                continue;
            }
            let r = resultant(p, q, &vname).expect("nonzero inputs").value;
            if !r.is_zero() {
                g = g.gcd(&r.to_univariate(u).expect("bivariate input"));
            }
        }
    }
    if g.is_zero() {
        return ZeroSet::Undecided("every pairwise resultant vanishes".into());
    }
    if g.is_constant() {
        return ZeroSet::Finite(Vec::new());
    }
    let Some(fac) = factor(&g) else {
        return ZeroSet::Undecided(format!("eliminant of degree {} over {} is not factored", g.degree().unwrap(), f.name()));
    };
    let mut out = Vec::new();
    for (r, _) in fac {
        let k1 = ResidueField::new(&r);
        let s = k1.generator();
        let mut gv = UniPoly::zero(&k1);
        for p in &polys {
            let sp = p.specialize_in(&k1, |c| k1.embed(c), &[(u, s.clone())]);
            gv = gv.gcd(&sp.to_univariate(v).expect("bivariate input"));
        }
        if gv.is_zero() {
            // r(u) divides every polynomial, contradicting the gcd above.
            return ZeroSet::Undecided("vertical line in the zero set".into());
        }
        if gv.is_constant() {
            continue;
        }
        for (gk, _) in factor(&gv).expect("finite residue field") {
            let k2 = ResidueField::new(&gk);
            let coords = vec![k2.embed(&s), k2.generator()];
            out.push(ClosedPoint { field: k2, coords });
        }
    }
    ZeroSet::Finite(out)
}

/// A closed point on the curve `h = 0`, searching small `u` values.
fn point_on_curve<F: Field>(h: &SparsePoly<F>, u: usize, v: usize) -> Option<ClosedPoint<F>> {
    let f = h.field().clone();
    if h.degree_in(v).unwrap_or(0) == 0 {
        let (r, _) = factor(&h.to_univariate(u).ok()?)?.into_iter().next()?;
        let k1 = ResidueField::new(&r);
        let k2 = ResidueField::new(&UniPoly::x(&k1));
        let coords = vec![k2.embed(&k1.generator()), k2.zero()];
        return Some(ClosedPoint { field: k2, coords });
    }
    let candidates: Vec<F::Elem> = match f.elements() {
        Some(els) => els.into_iter().take(64).collect(),
        None => (0..16).map(|i| f.from_int(i)).collect(),
    };
    for c in candidates {
        let hv = h.specialize(&[(u, c.clone())]).to_univariate(v).ok()?;
        if hv.is_constant() {
            continue;
        }
        let (gk, _) = factor(&hv)?.into_iter().next()?;
        let k1 = ResidueField::new(&UniPoly::linear(&f, &c));
        let gk1 = gk.map(&k1, |x| k1.embed(x));
        let k2 = ResidueField::new(&gk1);
        let coords = vec![k2.embed(&k1.embed(&c)), k2.generator()];
        return Some(ClosedPoint { field: k2, coords });
    }
    None
}

/// Common zeros in the projective plane of homogeneous polynomials in the
/// variables `idx = [i0, i1, i2]`. Points are normalized to have their
/// first nonzero coordinate equal to 1.
pub fn projective_zeros<F: Field>(polys: &[SparsePoly<F>], idx: [usize; 3]) -> ZeroSet<F> {
    let Some(first) = polys.first() else {
        return ZeroSet::PositiveDimensional { witness: None };
    };
    let f = first.field().clone();
    let [i0, i1, i2] = idx;
    let mut out = Vec::new();

    let chart: Vec<SparsePoly<F>> = polys.iter().map(|p| p.specialize(&[(i0, f.one())])).collect();
    match affine_zeros_2d(&chart, i1, i2) {
        ZeroSet::Undecided(why) => return ZeroSet::Undecided(why),
        ZeroSet::PositiveDimensional { witness } => {
            return ZeroSet::PositiveDimensional { witness: witness.map(|w| lift(&w)) };
        }
        ZeroSet::Finite(pts) => out.extend(pts.iter().map(lift)),
    }

    let mut g = UniPoly::zero(&f);
    for p in polys {
        g = g.gcd(&p.specialize(&[(i0, f.zero()), (i1, f.one())]).to_univariate(i2).expect("three variables"));
    }
    if g.is_zero() {
        let w = ClosedPoint::rational(&f, &[f.zero(), f.one(), f.zero()]);
        return ZeroSet::PositiveDimensional { witness: Some(w) };
    }
    if !g.is_constant() {
        let Some(fac) = factor(&g) else {
            return ZeroSet::Undecided(format!("line eliminant of degree {} is not factored", g.degree().unwrap()));
        };
        for (r, _) in fac {
            let k1 = ResidueField::new(&r);
            let k2 = ResidueField::new(&UniPoly::x(&k1));
            let coords = vec![k2.zero(), k2.one(), k2.embed(&k1.generator())];
            out.push(ClosedPoint { field: k2, coords });
        }
    }

    let at_corner = polys.iter().all(|p| {
        let c = p.specialize(&[(i0, f.zero()), (i1, f.zero()), (i2, f.one())]);
        c.is_zero()
    });
    if at_corner {
        out.push(ClosedPoint::rational(&f, &[f.zero(), f.zero(), f.one()]));
    }
    ZeroSet::Finite(out)
}

fn lift<F: Field>(p: &ClosedPoint<F>) -> ClosedPoint<F> {
    let mut coords = vec![p.field.one()];
    coords.extend(p.coords.iter().cloned());
    ClosedPoint { field: p.field.clone(), coords }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{gf_make_field, RationalField};
    use crate::polyring::{parse_poly, var_list};

    #[test]
    fn two_lines_meet_once() {
        let f = gf_make_field(2).unwrap();
        let vs = var_list(&["u", "v"]);
        let p = parse_poly(&f, &vs, "u + v + 1").unwrap();
        let q = parse_poly(&f, &vs, "u + (t)*v").unwrap();
        match affine_zeros_2d(&[p.clone(), q.clone()], 0, 1) {
            ZeroSet::Finite(pts) => {
                assert_eq!(pts.len(), 1);
                assert!(pts[0].is_rational());
                assert!(pts[0].field.is_zero(&pts[0].eval(&p, &[0, 1])));
                assert!(pts[0].field.is_zero(&pts[0].eval(&q, &[0, 1])));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn conjugate_points() {
        // u^2 + u + 1 = 0, v = u over GF(2): one closed point of degree 2.
        let f = gf_make_field(1).unwrap();
        let vs = var_list(&["u", "v"]);
        let p = parse_poly(&f, &vs, "u^2 + u + 1").unwrap();
        let q = parse_poly(&f, &vs, "u + v").unwrap();
        match affine_zeros_2d(&[p.clone(), q.clone()], 0, 1) {
            ZeroSet::Finite(pts) => {
                assert_eq!(pts.len(), 1);
                assert_eq!(pts[0].degree(), 2);
                assert!(pts[0].field.is_zero(&pts[0].eval(&p, &[0, 1])));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn curve_component() {
        let f = gf_make_field(1).unwrap();
        let vs = var_list(&["u", "v"]);
        let p = parse_poly(&f, &vs, "u*v + u").unwrap();
        let q = parse_poly(&f, &vs, "u^2").unwrap();
        match affine_zeros_2d(&[p.clone(), q.clone()], 0, 1) {
            ZeroSet::PositiveDimensional { witness: Some(w) } => {
                assert!(w.field.is_zero(&w.eval(&p, &[0, 1])));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rationals_empty_or_undecided() {
        let q = RationalField;
        let vs = var_list(&["u", "v"]);
        let p = parse_poly(&q, &vs, "u^2 + v^2 + 1").unwrap();
        let d = parse_poly(&q, &vs, "u").unwrap();
        let e = parse_poly(&q, &vs, "v").unwrap();
        assert_eq!(affine_zeros_2d(&[p.clone(), d.clone(), e], 0, 1).is_empty(), Some(true));
        assert_eq!(affine_zeros_2d(&[p, d], 0, 1).is_empty(), None);
    }

    #[test]
    fn projective_corner_and_line() {
        let f = gf_make_field(1).unwrap();
        let vs = var_list(&["x0", "x1", "x2"]);
        // x0 = 0 and x1 = 0 meet only at (0:0:1)
        let zs = projective_zeros(&[parse_poly(&f, &vs, "x0").unwrap(), parse_poly(&f, &vs, "x1").unwrap()], [0, 1, 2]);
        match zs {
            ZeroSet::Finite(pts) => {
                assert_eq!(pts.len(), 1);
                assert_eq!(pts[0].base_coords().unwrap(), vec![f.zero(), f.zero(), f.one()]);
            }
            other => panic!("{other:?}"),
        }
        // x0 and x1 + x2: (0:1:1)
        let zs = projective_zeros(&[parse_poly(&f, &vs, "x0").unwrap(), parse_poly(&f, &vs, "x1 + x2").unwrap()], [0, 1, 2]);
        assert_eq!(zs.witness().unwrap().base_coords().unwrap(), vec![f.zero(), f.one(), f.one()]);
    }
}
