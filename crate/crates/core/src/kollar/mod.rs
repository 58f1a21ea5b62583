//! Bookkeeping for the big line bundle built from the purely inseparable
//! double cover: the differential of a section, the classes of the sheaves
//! involved, pole orders along the weighted blowup of a half point,
//! separation by sections of `M^m`, and reduction of `a` modulo 2.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxtoric::{adjunction, bidegree, canonical_class, chart_atlas, make_p, make_q, x_equation, AmbientSpec, ChartMap, CoxError, DivisorClass};
use crate::exactfield::{Field, FieldError, RationalField};
use crate::polyring::{roots, var_list, LaurentPoly, PolyError, SparsePoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KollarError {
    #[error("bigness needs n >= 5, got {0}")]
    NTooSmall(u32),
    #[error("m = {m} does not satisfy m > n/(n-4) for n = {n}")]
    MTooSmall { n: u32, m: u32 },
    #[error("section has class {got}, expected {expected}")]
    ClassMismatch { expected: DivisorClass, got: DivisorClass },
    #[error("chart {0} is not in the atlas of the section's ambient")]
    ChartMismatch(String),
    #[error("assignment misses {0:?}")]
    IncompleteAssignment(Vec<String>),
    #[error("coefficient {0} has an even denominator")]
    EvenDenominator(String),
    #[error("could not sample enough points on the chart")]
    SamplingFailed,
    #[error(transparent)]
    Cox(#[from] CoxError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A section `s` of `L^m` on a toric ambient.
#[derive(Debug, Clone)]
pub struct SectionData<F: Field> {
    pub ambient: AmbientSpec,
    pub line_class: DivisorClass,
    pub m: i64,
    pub section: SparsePoly<F>,
}

impl<F: Field> SectionData<F> {
    pub fn new(ambient: AmbientSpec, line_class: DivisorClass, m: i64, section: SparsePoly<F>) -> Result<Self, KollarError> {
        let section = section.with_vars(&ambient.var_list())?;
        let expected = m * line_class;
        let got = if section.is_zero() { expected } else { bidegree(&section, &ambient)? };
        if got != expected {
            return Err(KollarError::ClassMismatch { expected, got });
        }
        Ok(SectionData { ambient, line_class, m, section })
    }
}

/// Local expression of `ds` on a chart: the partials of the dehomogenized
/// section in the chart coordinates.
pub fn d_section<F: Field>(sd: &SectionData<F>, chart: &ChartMap) -> Result<Vec<SparsePoly<F>>, KollarError> {
    if chart.ambient != sd.ambient.name {
        return Err(KollarError::ChartMismatch(chart.id.clone()));
    }
    Ok(chart.restrict(&sd.section)?.gradient())
}

/// `ds` restricted to the hypersurface `equation = 0`, on a chart where the
/// section restricts to a coordinate `t` and the equation reads `A t + B`
/// with `A, B` free of `t`. There `t = -B/A`; the returned components are
/// `A^2 d(-B/A) = B dA - A dB` in the other coordinates (with `t` omitted).
pub fn d_section_on_hypersurface<F: Field>(sd: &SectionData<F>, chart: &ChartMap, equation: &SparsePoly<F>) -> Result<Vec<(String, SparsePoly<F>)>, KollarError> {
    if chart.ambient != sd.ambient.name {
        return Err(KollarError::ChartMismatch(chart.id.clone()));
    }
    let s = chart.restrict(&sd.section)?;
    let e = chart.restrict(equation)?;
    let t = s.support_vars();
    let f = s.field();
    let [t] = t.as_slice() else {
        return Err(KollarError::ChartMismatch(chart.id.clone()));
    };
    let t = *t;
    if s.total_degree() != Some(1) || e.degree_in(t) != Some(1) {
        return Err(KollarError::ChartMismatch(chart.id.clone()));
    }
    let parts = e.coefficients_in(t);
    let (b, a) = (&parts[0], &parts[1]);
    let scale = s.terms().values().next().cloned().unwrap_or_else(|| f.one());
    let mut out = Vec::new();
    for (i, name) in chart.coords.iter().enumerate() {
        if i == t {
            continue;
        }
        let comp = b.mul(&a.partial_at(i)).sub(&a.mul(&b.partial_at(i)));
        out.push((name.clone(), comp.scale(&scale)));
    }
    Ok(out)
}

/// Class of `Q(L, z) = L^2 ⊗ ω_Z` with `L = 2H - nF` on `Z ⊂ Q_n`.
pub fn q_class(n: u32) -> Result<DivisorClass, KollarError> {
    let q = make_q(n as i64)?;
    let line = DivisorClass::new(-(n as i64), 2);
    let z_class = DivisorClass::new(0, 4);
    let omega = adjunction(&q, z_class);
    debug_assert_eq!(omega, canonical_class(&q) + z_class);
    Ok(2 * line + omega)
}

/// Class of `M`, the reflexive square of the pullback of `Q`.
pub fn m_class(n: u32) -> Result<DivisorClass, KollarError> {
    Ok(2 * q_class(n)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleLedgerEntry {
    pub exponents: [u32; 3],
    /// Weights of the blowup on the orbifold coordinates.
    pub weights: [String; 3],
    pub vanishing: String,
    pub pole_bound: String,
    pub net: String,
    pub certified: bool,
}

/// Order along the exceptional divisor of the `1/2(1,1,1)` blowup of the
/// monomial `xi^e`, against a pole bound for the accompanying 2-form.
pub fn pole_ledger(exponents: [u32; 3], pole_bound: Rational64) -> PoleLedgerEntry {
    let half = Rational64::new(1, 2);
    let vanishing: Rational64 = exponents.iter().map(|&e| half * e as i64).sum();
    let net = vanishing - pole_bound;
    PoleLedgerEntry {
        exponents,
        weights: [half.to_string(), half.to_string(), half.to_string()],
        vanishing: vanishing.to_string(),
        pole_bound: pole_bound.to_string(),
        net: net.to_string(),
        certified: net >= Rational64::from_integer(0),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub trials: usize,
    pub passed: bool,
}

fn random_poly<F: Field>(field: &F, vars: &std::sync::Arc<[String]>, rng: &mut ChaCha8Rng, terms: usize, max_exp: u32) -> SparsePoly<F> {
    use rand::Rng;
    SparsePoly::from_terms(
        field,
        vars,
        (0..terms).map(|_| ((0..vars.len()).map(|_| rng.gen_range(0..=max_exp)).collect(), field.random(rng))),
    )
}

/// Formal differential identities in characteristic 2, checked on random
/// polynomials in `xi0, xi1, xi2` plus one Laurent instance.
pub fn char2_differential_identities<F: Field>(field: &F, seed: u64, trials: usize) -> Vec<IdentityCheck> {
    let vars = var_list(&["xi0", "xi1", "xi2"]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = |p: &SparsePoly<F>| p.gradient();
    let mut fourth = true;
    let mut square = true;
    let mut leibniz = true;
    let mut square_factor = true;
    for _ in 0..trials {
        let u = random_poly(field, &vars, &mut rng, 3, 3);
        let v = random_poly(field, &vars, &mut rng, 3, 3);
        let u2 = u.pow(2);
        let u4 = u2.pow(2);
        fourth &= d(&u4.mul(&v)) == d(&v).iter().map(|c| u4.mul(c)).collect::<Vec<_>>();
        square_factor &= d(&u2.mul(&v)) == d(&v).iter().map(|c| u2.mul(c)).collect::<Vec<_>>();
        square &= d(&u2).iter().all(|c| c.is_zero());
        leibniz &= d(&u.mul(&v)) == d(&u).iter().zip(d(&v)).map(|(du, dv)| u.mul(&dv).add(&v.mul(du))).collect::<Vec<_>>();
    }
    // d(xi1 xi0^3) = xi0^4 d(xi1 / xi0)
    let one = field.one();
    let lhs = LaurentPoly::monomial(field, &vars, one.clone(), vec![3, 1, 0]);
    let ratio = LaurentPoly::monomial(field, &vars, one.clone(), vec![-1, 1, 0]);
    let xi04 = LaurentPoly::monomial(field, &vars, one, vec![4, 0, 0]);
    let laurent = (0..3).all(|i| lhs.derivative(i) == xi04.mul(&ratio.derivative(i)));
    vec![
        IdentityCheck { name: "d(u^4 v) = u^4 dv".into(), trials, passed: fourth },
        IdentityCheck { name: "d(u^2 v) = u^2 dv".into(), trials, passed: square_factor },
        IdentityCheck { name: "d(u^2) = 0".into(), trials, passed: square },
        IdentityCheck { name: "d(uv) = u dv + v du".into(), trials, passed: leibniz },
        IdentityCheck { name: "d(xi1 xi0^3) = xi0^4 d(xi1/xi0)".into(), trials: 1, passed: laurent },
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationFailure {
    pub first: Vec<String>,
    pub second: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BignessCertificate {
    pub n: u32,
    pub m: u32,
    pub k: u32,
    pub l: u32,
    pub field: String,
    pub sections: Vec<String>,
    pub section_class: DivisorClass,
    /// Every section has the class of `M^m`.
    pub degree_checks: bool,
    /// Images on the chart `U(w0,y)`.
    pub restricted: Vec<String>,
    /// The images contain 1, w1 and every product of two plane coordinates.
    pub restricted_contains_required: bool,
    pub samples: usize,
    pub failures: Vec<SeparationFailure>,
    pub note: String,
}

impl BignessCertificate {
    pub fn passed(&self) -> bool {
        self.degree_checks && self.restricted_contains_required && self.failures.is_empty() && self.samples > 0
    }
}

/// `k = (n-4)m` and `l = (n-4)m - n`, checking `n >= 5` and `m > n/(n-4)`.
pub fn bigness_parameters(n: u32, m: u32) -> Result<(u32, u32), KollarError> {
    if n < 5 {
        return Err(KollarError::NTooSmall(n));
    }
    let k = (n - 4) * m;
    if k <= n {
        return Err(KollarError::MTooSmall { n, m });
    }
    Ok((k, k - n))
}

/// The monomial sections `y^m w0^(k-j) w1^j` and `y^(m-1) w_i^l x_a x_b`.
pub fn bigness_sections<F: Field>(field: &F, n: u32, m: u32) -> Result<Vec<SparsePoly<F>>, KollarError> {
    let (k, l) = bigness_parameters(n, m)?;
    let p = make_p(n as i64)?;
    let vars = p.var_list();
    let idx = |name: &str| p.var_index(name).expect("P_n variable");
    let mono = |pairs: &[(usize, u32)]| {
        let mut e = vec![0u32; vars.len()];
        for &(i, k) in pairs {
            e[i] += k;
        }
        SparsePoly::monomial(field, &vars, field.one(), e)
    };
    let (w0, w1, y) = (idx("w0"), idx("w1"), idx("y"));
    let mut out: Vec<SparsePoly<F>> = (0..=k).map(|j| mono(&[(y, m), (w0, k - j), (w1, j)])).collect();
    for w in [w0, w1] {
        for a in 0..3 {
            for b in a..3 {
                out.push(mono(&[(y, m - 1), (w, l), (idx(&format!("x{a}")), 1), (idx(&format!("x{b}")), 1)]));
            }
        }
    }
    Ok(out)
}

/// Degree bookkeeping for the sections of `M^m`, their images on
/// `U(w0,y)`, and a separation test on `samples` random pairs of points of
/// `X ∩ U(w0,y)` over the field of `a`.
///
/// Separation is a sampled check, not a proof that the map is generically
/// finite. In characteristic 2 the cyclic group of order 2 has a single
/// rational point, so orbits of rational points are points.
pub fn bigness_certificate<F: Field>(n: u32, m: u32, a: &SparsePoly<F>, samples: usize, seed: u64) -> Result<BignessCertificate, KollarError> {
    let (k, l) = bigness_parameters(n, m)?;
    let field = a.field().clone();
    let p = make_p(n as i64)?;
    let sections = bigness_sections(&field, n, m)?;
    let target = m as i64 * m_class(n)?;
    let degree_checks = sections.iter().all(|s| bidegree(s, &p).ok() == Some(target));

    let chart = chart_atlas(&p)?.into_iter().find(|c| c.id == "U(w0,y)").expect("fiber chart");
    let restricted: Vec<SparsePoly<F>> = sections.iter().map(|s| chart.restrict(s)).collect::<Result<_, _>>()?;
    let cv = chart.coord_vars();
    let mut required = vec![SparsePoly::one(&field, &cv), SparsePoly::var(&field, &cv, "w1")?];
    for a_ in 0..3 {
        for b in a_..3 {
            required.push(SparsePoly::var(&field, &cv, &format!("x{a_}"))?.mul(&SparsePoly::var(&field, &cv, &format!("x{b}"))?));
        }
    }
    let restricted_contains_required = required.iter().all(|r| restricted.contains(r));

    let eq = chart.restrict(&x_equation(a, n)?)?;
    let (failures, tested) = separation(&eq, &restricted, samples, seed)?;
    Ok(BignessCertificate {
        n,
        m,
        k,
        l,
        field: field.name(),
        sections: sections.iter().map(|s| s.format()).collect(),
        section_class: target,
        degree_checks,
        restricted: restricted.iter().map(|s| s.format()).collect(),
        restricted_contains_required,
        samples: tested,
        failures,
        note: "separation is sampled; generic finiteness is not proven".into(),
    })
}

fn separation<F: Field>(eq: &SparsePoly<F>, sections: &[SparsePoly<F>], samples: usize, seed: u64) -> Result<(Vec<SeparationFailure>, usize), KollarError> {
    let field = eq.field();
    let solve_for = eq.var_index("x0")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Vec<F::Elem>> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut attempts = 0;
    while points.len() < 2 * samples {
        attempts += 1;
        if attempts > 100 * samples + 1000 {
            return Err(KollarError::SamplingFailed);
        }
        let vals: Vec<(usize, F::Elem)> = (0..eq.nvars()).filter(|&i| i != solve_for).map(|i| (i, field.random(&mut rng))).collect();
        let uni = eq.specialize(&vals).to_univariate(solve_for)?;
        if uni.is_constant() {
            continue;
        }
        let Some(rs) = roots(&uni) else { return Err(KollarError::SamplingFailed) };
        let Some(r) = rs.into_iter().next() else { continue };
        let mut pt = vec![field.zero(); eq.nvars()];
        for (i, v) in vals {
            pt[i] = v;
        }
        pt[solve_for] = r;
        let key: Vec<String> = pt.iter().map(|c| field.format(c)).collect();
        if seen.insert(key) {
            points.push(pt);
        }
    }
    let value = |pt: &[F::Elem]| -> Vec<F::Elem> { sections.iter().map(|s| s.eval(pt).expect("arity")).collect() };
    let mut failures = Vec::new();
    for pair in points.chunks(2) {
        if value(&pair[0]) == value(&pair[1]) {
            let fmt = |p: &[F::Elem]| p.iter().map(|c| field.format(c)).collect();
            failures.push(SeparationFailure { first: fmt(&pair[0]), second: fmt(&pair[1]) });
        }
    }
    Ok((failures, samples))
}

/// `a = sum alpha_i w0^(2n-i) w1^i` over the rationals, in the variables
/// `alpha0, ..., alpha_2n, w0, w1`.
pub fn generic_a_template(n: u32) -> SparsePoly<RationalField> {
    let names: Vec<String> = (0..=2 * n).map(|i| format!("alpha{i}")).chain(["w0".to_string(), "w1".to_string()]).collect();
    let vars: std::sync::Arc<[String]> = names.into();
    let q = RationalField;
    let len = vars.len();
    SparsePoly::from_terms(
        &q,
        &vars,
        (0..=2 * n).map(|i| {
            let mut e = vec![0u32; len];
            e[i as usize] = 1;
            e[len - 2] = 2 * n - i;
            e[len - 1] = i;
            (e, q.one())
        }),
    )
}

/// Reduction of a template with 2-integral rational coefficients: every
/// variable other than `w0, w1` is replaced by its assigned value in the
/// target field of characteristic 2.
pub fn specialize_mod2<F: Field>(template: &SparsePoly<RationalField>, target: &F, assignment: &BTreeMap<String, F::Elem>) -> Result<SparsePoly<F>, KollarError> {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let params: Vec<usize> = (0..template.nvars()).filter(|&i| !["w0", "w1"].contains(&template.vars()[i].as_str())).collect();
    let missing: Vec<String> = params.iter().map(|&i| template.vars()[i].clone()).filter(|v| !assignment.contains_key(v)).collect();
    if !missing.is_empty() {
        return Err(KollarError::IncompleteAssignment(missing));
    }
    let base = var_list(&["w0", "w1"]);
    let iw0 = template.var_index("w0")?;
    let iw1 = template.var_index("w1")?;
    let mut out = SparsePoly::zero(target, &base);
    for (e, c) in template.terms() {
        if c.denom().is_even() {
            return Err(KollarError::EvenDenominator(c.to_string()));
        }
        let reduce = |x: &num_bigint::BigInt| target.from_int(x.mod_floor(&2.into()).to_i64().unwrap());
        let mut coeff = target.div(&reduce(c.numer()), &reduce(c.denom()))?;
        for &i in &params {
            coeff = target.mul(&coeff, &target.pow(&assignment[&template.vars()[i]], e[i] as u64));
        }
        let mut be = vec![0u32; 2];
        be[0] = e[iw0];
        be[1] = e[iw1];
        out = out.add(&SparsePoly::monomial(target, &base, coeff, be));
    }
    Ok(out)
}

/// Integer values reduced into a field of characteristic 2.
pub fn reduce_integer_assignment<F: Field>(target: &F, values: &BTreeMap<String, i64>) -> BTreeMap<String, F::Elem> {
    values.iter().map(|(k, v)| (k.clone(), target.from_int(*v))).collect()
}
