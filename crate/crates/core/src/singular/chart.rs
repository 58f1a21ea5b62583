//! Singular locus of a hypersurface restricted to one chart.
//!
//! On the charts `U(w_i, x_j)` the restricted equation separates as
//! `E = A(w) t^e + F(u, v)` with `w` the base coordinate, `t` the fiber
//! coordinate and `u, v` the remaining plane coordinates. The Jacobian system
//! then reduces to plane-curve data:
//!
//! * `e` a unit: every singular point has `t = 0` or `A(w) = 0`, and lies over
//!   the singular points of the affine curve `F = 0`.
//! * characteristic 2 and `e = 2`: `dE/dt` vanishes identically, so besides
//!   the points over `Sing(F = 0)` there are the points with `dF = 0`,
//!   `A'(w) = 0` and `t^2 = F(u, v) / A(w)`.

use super::elimination::{tower_embed, ClosedPoint, Tower};
use super::{affine_zeros_2d, witness_from_closed, LocusSummary, SingularError, SingularityReport, Verdict, WitnessPoint, ZeroSet};
use crate::coxtoric::{ChartMap, CoordRole};
use crate::exactfield::Field;
use crate::polyring::{factor, roots, ResidueField, SparsePoly, UniPoly};

type Tower3<F> = ResidueField<Tower<F>>;
type Elem3<F> = <Tower3<F> as Field>::Elem;

/// A point with coordinates in a three-step tower over the base field.
struct DeepPoint<F: Field> {
    field: Tower3<F>,
    coords: Vec<Elem3<F>>,
}

fn embed3<F: Field>(l: &Tower3<F>, c: &F::Elem) -> Elem3<F> {
    l.embed(&tower_embed(l.base(), c))
}

fn format3<F: Field>(l: &Tower3<F>, a: &Elem3<F>) -> String {
    let k2 = l.base();
    let k1 = k2.base();
    match l.as_base(a) {
        None => l.format(a),
        Some(b2) => match k2.as_base(&b2) {
            None => k2.format(&b2),
            Some(b1) => match k1.as_base(&b1) {
                None => k1.format(&b1),
                Some(b0) => k1.base().format(&b0),
            },
        },
    }
}

impl<F: Field> DeepPoint<F> {
    fn degree(&self) -> usize {
        self.field.degree() * self.field.base().degree() * self.field.base().base().degree()
    }

    fn witness(&self, names: &[String], polys: &[SparsePoly<F>]) -> WitnessPoint {
        let l = &self.field;
        let verified = polys.iter().all(|g| l.is_zero(&g.eval_in(l, |c| embed3(l, c), &self.coords).expect("arity")));
        let degree = self.degree();
        WitnessPoint {
            field: if degree == 1 { l.base().base().base().name() } else { l.name() },
            degree,
            coords: names.iter().cloned().zip(self.coords.iter().map(|c| format3(l, c))).collect(),
            verified,
        }
    }
}

struct Split<F: Field> {
    w: usize,
    t: usize,
    u: usize,
    v: usize,
    a: UniPoly<F>,
    e: u32,
    f: SparsePoly<F>,
}

fn split<F: Field>(chart: &ChartMap, p: &SparsePoly<F>) -> Option<Split<F>> {
    let base = chart.coords_with_role(CoordRole::Base);
    let fiber = chart.coords_with_role(CoordRole::Fiber);
    let plane = chart.coords_with_role(CoordRole::Plane);
    if base.len() != 1 || fiber.len() != 1 || plane.len() != 2 {
        return None;
    }
    let (w, t, u, v) = (base[0], fiber[0], plane[0], plane[1]);
    let field = p.field();
    let mut e = None;
    let mut a = Vec::new();
    let mut f_terms = Vec::new();
    for (ex, c) in p.terms() {
        if ex[t] > 0 {
            if ex[u] > 0 || ex[v] > 0 || e.is_some_and(|e0| e0 != ex[t]) {
                return None;
            }
            e = Some(ex[t]);
            let i = ex[w] as usize;
            if a.len() <= i {
                a.resize(i + 1, field.zero());
            }
            a[i] = c.clone();
        } else {
            if ex[w] > 0 {
                return None;
            }
            f_terms.push((ex.clone(), c.clone()));
        }
    }
    Some(Split {
        w,
        t,
        u,
        v,
        a: UniPoly::new(field, a),
        e: e.unwrap_or(1),
        f: SparsePoly::from_terms(field, p.vars(), f_terms),
    })
}

/// Singular points of the hypersurface `equation = 0` on one chart.
///
/// Quotient charts are not decided here: their fixed locus is the subject
/// of [`super::half_point_check`] and their free locus is covered by the
/// trivial charts. When the restricted equation does not have the separated
/// shape, the result is undecided unless an exhaustive search over the
/// working field finds a singular point.
pub fn hypersurface_smooth_on_chart<F: Field>(chart: &ChartMap, equation: &SparsePoly<F>) -> Result<SingularityReport, SingularError> {
    if equation.is_zero() {
        return Err(SingularError::ZeroPolynomial);
    }
    let e = chart.restrict(equation).map_err(|err| SingularError::ChartMismatch(err.to_string()))?;
    let mut report = SingularityReport {
        chart: chart.id.clone(),
        status: Verdict::Undecided,
        witness: None,
        singular_locus: None,
        half_points: Vec::new(),
        method: "elimination".into(),
        note: None,
        rational_points: None,
    };
    if chart.is_quotient() {
        report.method = "none".into();
        report.note = Some("quotient chart; fixed points are checked by the half point check".into());
        return Ok(report);
    }
    let mut system = vec![e.clone()];
    system.extend(e.gradient());
    match split(chart, &e) {
        Some(s) => decide(&e, &system, &s, &chart.coords, &mut report),
        None => report.note = Some("restricted equation is not of the form A(w) t^e + F".into()),
    }
    if report.status == Verdict::Undecided && report.witness.is_none() {
        if let Some(w) = hunt_rational_singularity(&e, &chart.coords) {
            report.status = Verdict::Singular;
            report.witness = Some(w);
            report.method = "exhaustive search".into();
        }
    }
    Ok(report)
}

fn decide<F: Field>(e_poly: &SparsePoly<F>, system: &[SparsePoly<F>], s: &Split<F>, names: &[String], report: &mut SingularityReport) {
    let field = e_poly.field();
    let fu = s.f.partial_at(s.u);
    let fv = s.f.partial_at(s.v);
    let sing_curve = affine_zeros_2d(&[s.f.clone(), fu.clone(), fv.clone()], s.u, s.v);
    if let ZeroSet::Undecided(why) = &sing_curve {
        report.note = Some(format!("plane curve: {why}"));
        return;
    }
    let e_is_unit = !field.is_zero(&field.from_int(s.e as i64));

    // Points over Sing(F = 0) with t = 0 (and A(w) = 0 when e = 1).
    if let Some(x) = sing_curve.witness().cloned() {
        let needs_root = e_is_unit && s.e == 1 && !s.a.is_zero();
        if needs_root && s.a.is_constant() {
            report.status = Verdict::Smooth;
            report.singular_locus = Some(LocusSummary::Empty);
        report.rational_points = Some(Vec::new());
            return;
        }
        report.status = Verdict::Singular;
        let point = if needs_root { root_point(&x, &s.a, s) } else { Some(lift(&x, &field.zero(), s)) };
        report.witness = point.map(|p| p.witness(names, system));
        report.singular_locus = Some(match &sing_curve {
            ZeroSet::Finite(pts) if needs_root && squarefree(&s.a) => LocusSummary::Finite {
                closed_points: pts.len(),
                geometric_points: pts.iter().map(|q| q.degree()).sum::<usize>() * s.a.degree().unwrap(),
            },
            _ => LocusSummary::PositiveDimensional,
        });
        return;
    }
    if matches!(sing_curve, ZeroSet::PositiveDimensional { .. }) {
        // Positive-dimensional but no witness was produced.
        report.status = Verdict::Singular;
        report.singular_locus = Some(LocusSummary::PositiveDimensional);
        return;
    }

    // Sing(F = 0) is empty from here on.
    if e_is_unit {
        report.status = Verdict::Smooth;
        report.singular_locus = Some(LocusSummary::Empty);
        report.rational_points = Some(Vec::new());
        return;
    }
    if s.e != 2 {
        report.note = Some(format!("fiber exponent {} vanishes in the field", s.e));
        return;
    }
    let crit = match affine_zeros_2d(&[fu, fv], s.u, s.v) {
        ZeroSet::Finite(p) => p,
        ZeroSet::PositiveDimensional { .. } => {
            report.note = Some("critical locus of the plane part is a curve".into());
            return;
        }
        ZeroSet::Undecided(why) => {
            report.note = Some(format!("critical locus of the plane part: {why}"));
            return;
        }
    };
    let da = s.a.derivative();
    if crit.is_empty() || s.a.is_zero() {
        report.status = Verdict::Smooth;
        report.singular_locus = Some(LocusSummary::Empty);
        report.rational_points = Some(Vec::new());
        return;
    }
    if da.is_zero() {
        report.status = Verdict::Singular;
        report.singular_locus = Some(LocusSummary::PositiveDimensional);
        report.note = Some("A'(w) vanishes identically".into());
        report.witness = constant_base_point(&crit[0], s).map(|p| p.witness(names, system));
        return;
    }
    let mut closed = 0;
    let mut geometric = 0;
    let mut rational = Vec::new();
    for x in &crit {
        let k2 = &x.field;
        let da2 = da.map(k2, |c| tower_embed(k2, c));
        if da2.is_constant() {
            continue;
        }
        let Some(fac) = factor(&da2) else {
            report.note = Some("derivative of A is not factored over this field".into());
            return;
        };
        for (r, _) in fac {
            let l = ResidueField::new(&r);
            let w = l.generator();
            let aw = s.a.map(&l, |c| embed3(&l, c)).eval(&w);
            if l.is_zero(&aw) {
                continue;
            }
            closed += 1;
            let mut p = lift_into(x, &l, s);
            let gamma = s.f.eval_in(&l, |c| embed3(&l, c), &p.coords).expect("arity");
            let Some(t) = l.sqrt_char2(&l.div(&gamma, &aw).expect("nonzero")) else {
                report.note = Some("square roots are not available in this field".into());
                return;
            };
            p.coords[s.w] = w;
            p.coords[s.t] = t;
            geometric += p.degree();
            if p.degree() == 1 {
                rational.push(p.witness(names, system).coords);
            }
            if report.witness.is_none() {
                report.witness = Some(p.witness(names, system));
            }
        }
    }
    if closed == 0 {
        report.status = Verdict::Smooth;
        report.singular_locus = Some(LocusSummary::Empty);
        report.rational_points = Some(Vec::new());
    } else {
        report.status = Verdict::Singular;
        report.singular_locus = Some(LocusSummary::Finite { closed_points: closed, geometric_points: geometric });
        rational.sort();
        report.rational_points = Some(rational);
    }
}

fn squarefree<F: Field>(a: &UniPoly<F>) -> bool {
    a.gcd(&a.derivative()).is_constant()
}

/// Puts the plane point `x` into a trivial top extension, with `w = w0` and `t = 0`.
fn lift<F: Field>(x: &ClosedPoint<F>, w0: &F::Elem, s: &Split<F>) -> DeepPoint<F> {
    let l = ResidueField::new(&UniPoly::x(&x.field));
    let mut p = lift_into(x, &l, s);
    p.coords[s.w] = embed3(&l, w0);
    p
}

fn lift_into<F: Field>(x: &ClosedPoint<F>, l: &Tower3<F>, s: &Split<F>) -> DeepPoint<F> {
    let n = 4;
    let mut coords = vec![l.zero(); n];
    coords[s.u] = l.embed(&x.coords[0]);
    coords[s.v] = l.embed(&x.coords[1]);
    DeepPoint { field: l.clone(), coords }
}

/// `t = 0`, `w` a root of `a`, over the plane point `x`.
fn root_point<F: Field>(x: &ClosedPoint<F>, a: &UniPoly<F>, s: &Split<F>) -> Option<DeepPoint<F>> {
    let k2 = &x.field;
    let (r, _) = factor(&a.map(k2, |c| tower_embed(k2, c)))?.into_iter().next()?;
    let l = ResidueField::new(&r);
    let mut p = lift_into(x, &l, s);
    p.coords[s.w] = l.generator();
    Some(p)
}

/// A point over the plane point `x` with `w` in the base field, `A(w) != 0`,
/// and `t^2 = F(x) / A(w)`.
fn constant_base_point<F: Field>(x: &ClosedPoint<F>, s: &Split<F>) -> Option<DeepPoint<F>> {
    let field = s.a.field();
    let w0 = field.elements()?.into_iter().find(|c| !field.is_zero(&s.a.eval(c)))?;
    let mut p = lift(x, &w0, s);
    let l = p.field.clone();
    let gamma = s.f.eval_in(&l, |c| embed3(&l, c), &p.coords).ok()?;
    let aw = embed3(&l, &s.a.eval(&w0));
    p.coords[s.t] = l.sqrt_char2(&l.div(&gamma, &aw).ok()?)?;
    Some(p)
}

const HUNT_LIMIT: u64 = 1 << 18;

/// Searches for a singular point of `p = 0` with coordinates in the working
/// field: every value of all but the last coordinate is tried and the last
/// one is solved for. Gives up on fields without an element list or when
/// the search space exceeds `2^18` lines.
pub fn hunt_rational_singularity<F: Field>(p: &SparsePoly<F>, names: &[String]) -> Option<WitnessPoint> {
    let field = p.field();
    let els = field.elements()?;
    let m = p.nvars();
    if m == 0 {
        return None;
    }
    let lines = (els.len() as u64).checked_pow(m as u32 - 1)?;
    if lines > HUNT_LIMIT {
        return None;
    }
    let mut system = vec![p.clone()];
    system.extend(p.gradient());
    let idx: Vec<usize> = (0..m).collect();
    let mut digits = vec![0usize; m - 1];
    loop {
        let vals: Vec<(usize, F::Elem)> = digits.iter().enumerate().map(|(i, &d)| (i, els[d].clone())).collect();
        let mut g = UniPoly::zero(field);
        for q in &system {
            g = g.gcd(&q.specialize(&vals).to_univariate(m - 1).expect("single variable left"));
        }
        let last = if g.is_zero() { Some(field.zero()) } else if g.is_constant() { None } else { roots(&g).and_then(|r| r.into_iter().next()) };
        if let Some(last) = last {
            let mut coords: Vec<F::Elem> = vals.into_iter().map(|(_, c)| c).collect();
            coords.push(last);
            let pt = ClosedPoint::rational(field, &coords);
            return Some(witness_from_closed(&pt, names, &system, &idx));
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return None;
            }
            digits[i] += 1;
            if digits[i] < els.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}
