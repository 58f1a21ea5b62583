//! Runs every check for one choice of `n`, `a` and field and collects the
//! results into a [`CertificateReport`].

use std::time::Instant;

use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::coxtoric::{adjunction, chart_atlas, klein_quartic, make_p, make_q, veronese_pushforward, factorization_variant, x_equation, z_equation, DivisorClass, PLANE_VARS};
use crate::critical::{cr_a, cr_a_points, cr_f, critical_pairs, is_squarefree_form, random_generic_a, Classification, DEFAULT_BUDGET};
use crate::exactfield::{gf_make_field, parse_field_spec, Field, FieldError, GfField};
use crate::kollar::{bigness_certificate, char2_differential_identities, m_class, pole_ledger, q_class};
use crate::polyring::{factor, parse_poly, var_list, PolyError, SparsePoly, UniPoly};
use crate::singular::{dehomogenize_base, half_point_check, hypersurface_smooth_on_chart, plane_curve_smooth, LocusSummary, Verdict};

pub const SCHEMA_VERSION: &str = "dpcert-report/1";
pub const SCHEMA_JSON: &str = include_str!("../../schema/certificate_report.schema.json");
pub const DEFAULT_SAMPLES: usize = 200;
const LARGEST_FIELD: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "UNDECIDED")]
    Undecided,
    #[serde(rename = "N/A")]
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// The statement being checked.
    pub claim: String,
    pub status: Status,
    pub field: String,
    /// Set when the check ran over a larger field than requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extended_to: Option<String>,
    pub witness: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Not part of the canonical hash.
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub schema: String,
    pub n: u32,
    pub m: Option<u32>,
    pub field: String,
    pub seed: Option<u64>,
    pub a: String,
    pub checks: Vec<CheckRecord>,
    pub overall: Status,
    pub hash: String,
}

impl CertificateReport {
    /// SHA-256 of the canonical JSON with timings zeroed and the hash blank.
    pub fn canonical_hash(&self) -> String {
        let mut c = self.clone();
        c.hash.clear();
        for r in &mut c.checks {
            r.wall_ms = 0.0;
        }
        let bytes = serde_json::to_vec(&c).expect("report serializes");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn exit_code(&self) -> i32 {
        match self.overall {
            Status::Pass | Status::NotApplicable => 0,
            _ => 1,
        }
    }
}

/// Combined verdict: any failure fails, then any undecided check makes the
/// whole undecided; all-N/A stays N/A.
pub fn overall(statuses: impl IntoIterator<Item = Status>) -> Status {
    let all: Vec<Status> = statuses.into_iter().collect();
    if all.contains(&Status::Fail) {
        Status::Fail
    } else if all.contains(&Status::Undecided) {
        Status::Undecided
    } else if all.iter().all(|s| *s == Status::NotApplicable) {
        Status::NotApplicable
    } else {
        Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ASource {
    Explicit(String),
    Random { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub n: u32,
    pub a: ASource,
    pub field: String,
    pub m: Option<u32>,
    pub samples: usize,
    /// Worker threads; `None` reads `DPCERT_WORKERS`, then uses the rayon default.
    pub workers: Option<usize>,
}

impl VerifyOptions {
    pub fn new(n: u32, a: ASource, field: &str) -> Self {
        VerifyOptions { n, a, field: field.into(), m: None, samples: DEFAULT_SAMPLES, workers: None }
    }
}

struct Outcome {
    status: Status,
    witness: Value,
    detail: Option<String>,
    extended_to: Option<String>,
}

impl Outcome {
    fn new(status: Status, witness: Value) -> Self {
        Outcome { status, witness, detail: None, extended_to: None }
    }

    fn pass_if(ok: bool, witness: Value) -> Self {
        Self::new(if ok { Status::Pass } else { Status::Fail }, witness)
    }

    fn undecided(why: impl ToString) -> Self {
        Outcome { status: Status::Undecided, witness: Value::Null, detail: Some(why.to_string()), extended_to: None }
    }

    fn detail(mut self, d: impl ToString) -> Self {
        self.detail = Some(d.to_string());
        self
    }
}

type CheckFn<'a> = Box<dyn Fn() -> Outcome + Send + Sync + 'a>;

struct Check<'a> {
    name: &'static str,
    claim: &'static str,
    run: CheckFn<'a>,
}

/// Smallest valid `m` for bigness: the least integer above `n/(n-4)`.
pub fn default_m(n: u32) -> Option<u32> {
    (n >= 5).then(|| n / (n - 4) + 1)
}

/// A field containing the requested one and GF(8), where the critical
/// points of `f` live.
fn with_cube_roots(field: &GfField) -> Result<GfField, FieldError> {
    let k = field.degree();
    if k.is_multiple_of(3) {
        return Ok(*field);
    }
    let big = num_integer::lcm(k, 3);
    if big > LARGEST_FIELD {
        return Err(FieldError::Parse(format!("GF(2^{big}) is beyond the modulus table")));
    }
    gf_make_field(big)
}

fn lift_a(a: &SparsePoly<GfField>, big: &GfField) -> Result<SparsePoly<GfField>, FieldError> {
    let e = a.field().embedding_into(big)?;
    Ok(a.map_coeffs(big, |c| e.apply(c)))
}

fn resolve_a(opts: &VerifyOptions, field: &GfField) -> Result<SparsePoly<GfField>, PipelineError> {
    let base = var_list(&["w0", "w1"]);
    match &opts.a {
        ASource::Explicit(text) => {
            let a = parse_poly(field, &base, text)?;
            if a.is_zero() || !a.terms().keys().all(|e| e[0] + e[1] == 2 * opts.n) {
                return Err(PipelineError::InvalidParameters(format!("a must be a nonzero form of degree {} in w0, w1", 2 * opts.n)));
            }
            Ok(a)
        }
        ASource::Random { seed } => {
            random_generic_a(opts.n, field, *seed, DEFAULT_BUDGET).map_err(|e| PipelineError::InvalidParameters(format!("no generic a: {e}")))
        }
    }
}

fn workers(opts: &VerifyOptions) -> Option<usize> {
    opts.workers.or_else(|| std::env::var("DPCERT_WORKERS").ok()?.parse().ok()).filter(|&w| w > 0)
}

/// Runs every check for the given parameters. Mathematical failures become
/// report entries; only bad parameters are errors.
pub fn verify_all(opts: &VerifyOptions) -> Result<CertificateReport, PipelineError> {
    let n = opts.n;
    if n < 1 {
        return Err(PipelineError::InvalidParameters("n must be at least 1".into()));
    }
    if let Some(m) = opts.m {
        if n >= 5 && (n - 4) * m <= n {
            return Err(PipelineError::InvalidParameters(format!("m = {m} must exceed n/(n-4) for n = {n}")));
        }
    }
    let field = parse_field_spec(&opts.field)?;
    let a = resolve_a(opts, &field)?;
    let seed = match opts.a {
        ASource::Random { seed } => Some(seed),
        ASource::Explicit(_) => None,
    };
    let m = opts.m.or_else(|| default_m(n));
    let checks = build_checks(n, m, &a, &field, seed.unwrap_or(0), opts.samples);

    let field_name = field.name();
    let run_one = |c: &Check| {
        let start = Instant::now();
        let out = (c.run)();
        CheckRecord {
            name: c.name.into(),
            claim: c.claim.into(),
            status: out.status,
            field: field_name.clone(),
            extended_to: out.extended_to,
            witness: out.witness,
            detail: out.detail,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers(opts) {
        pool = pool.num_threads(w);
    }
    let pool = pool.build().map_err(|e| PipelineError::InvalidParameters(e.to_string()))?;
    let mut records: Vec<CheckRecord> = pool.install(|| checks.par_iter().map(run_one).collect());
    records.sort_by(|x, y| x.name.cmp(&y.name));

    let mut report = CertificateReport {
        schema: SCHEMA_VERSION.into(),
        n,
        m,
        field: field.name(),
        seed,
        a: a.format(),
        overall: overall(records.iter().map(|r| r.status)),
        checks: records,
        hash: String::new(),
    };
    report.hash = report.canonical_hash();
    Ok(report)
}

fn build_checks<'a>(n: u32, m: Option<u32>, a: &'a SparsePoly<GfField>, field: &'a GfField, seed: u64, samples: usize) -> Vec<Check<'a>> {
    vec![
        Check { name: "squarefree_a", claim: "a has no repeated factor", run: Box::new(move || check_squarefree(a, n)) },
        Check { name: "klein_smooth", claim: "f = 0 is a smooth plane quartic", run: Box::new(move || check_klein(field)) },
        Check {
            name: "singular_x",
            claim: "on the charts U(w_i, x_j) the singular points of X are the preimages of Cr(a) x Cr(f)",
            run: Box::new(move || check_singular_x(a, n, field)),
        },
        Check { name: "smooth_z", claim: "Z is smooth on the charts U(w_i, x_j)", run: Box::new(move || check_smooth_z(a, n)) },
        Check { name: "half_points", claim: "X has 2n points with x = 0, each of type 1/2(1,1,1)", run: Box::new(move || check_half_points(a, n)) },
        Check { name: "cr_f", claim: "Cr(f) is 7 points, f and the Hessian are nonzero there", run: Box::new(move || check_crf(field)) },
        Check { name: "cr_a", claim: "every critical point of a is almost nondegenerate", run: Box::new(move || check_cra(a, n)) },
        Check {
            name: "critical_pairs",
            claim: "every critical point of z on Z with a != 0 is almost nondegenerate",
            run: Box::new(move || check_pairs(a, n, field)),
        },
        Check { name: "classes", claim: "K_Z = -3H + (2n-2)F, Q = H - 2F, M = 2H - 4F", run: Box::new(move || check_classes(n)) },
        Check { name: "pole_ledger", claim: "xi0^2 xi1^2 xi2^2 vanishes to order 3 along E against a pole of order 2", run: Box::new(check_pole) },
        Check { name: "differential_identities", claim: "d(u^4 v) = u^4 dv and d(u^2) = 0 in characteristic 2", run: Box::new(move || check_identities(field, seed)) },
        Check {
            name: "bigness",
            claim: "the listed sections of M^m have the right class and separate sampled points",
            run: Box::new(move || check_bigness(a, n, m, seed, samples)),
        },
        Check { name: "veronese", claim: "q(y w0^n, ..., y w1^n) = a y^2", run: Box::new(move || check_veronese(a, n)) },
        Check { name: "factorization_variant", claim: "b (c y)^2 + c f = c (a y^2 + f) for a = b c", run: Box::new(move || check_variant(a, n)) },
    ]
}

fn check_squarefree(a: &SparsePoly<GfField>, n: u32) -> Outcome {
    match is_squarefree_form(a, n) {
        Ok(true) => Outcome::new(Status::Pass, Value::Null),
        Ok(false) => {
            let (a0, _) = match dehomogenize_base(a, n) {
                Ok(p) => p,
                Err(e) => return Outcome::undecided(e),
            };
            let g = a0.gcd(&a0.derivative());
            let at_inf = 2 * n as usize - a0.degree().unwrap_or(0);
            Outcome::new(Status::Fail, json!({ "gcd_with_derivative": g.format("w1"), "order_at_infinity": at_inf }))
        }
        Err(e) => Outcome::undecided(e),
    }
}

fn check_klein(field: &GfField) -> Outcome {
    match plane_curve_smooth(&klein_quartic(field, &var_list(&PLANE_VARS))) {
        Ok(r) => match r.verdict {
            Verdict::Smooth => Outcome::new(Status::Pass, Value::Null),
            Verdict::Singular => Outcome::new(Status::Fail, json!(r.witness)),
            Verdict::Undecided => Outcome::undecided(r.note.unwrap_or_default()),
        },
        Err(e) => Outcome::undecided(e),
    }
}

fn fiber_charts(n: u32, q: bool) -> Vec<crate::coxtoric::ChartMap> {
    let spec = if q { make_q(n as i64) } else { make_p(n as i64) }.expect("n >= 1");
    chart_atlas(&spec).expect("atlas").into_iter().filter(|c| !c.is_quotient()).collect()
}

fn check_singular_x(a: &SparsePoly<GfField>, n: u32, field: &GfField) -> Outcome {
    let eq = match x_equation(a, n) {
        Ok(e) => e,
        Err(e) => return Outcome::undecided(e),
    };
    let base_pts = match cr_a_points(a, n) {
        Ok(p) => p,
        Err(e) => return Outcome::undecided(e),
    };
    let big = match with_cube_roots(field) {
        Ok(b) => b,
        Err(e) => return Outcome::undecided(e),
    };
    let crf = match cr_f(&big) {
        Ok(p) => p,
        Err(e) => return Outcome::undecided(e),
    };
    let mut rows = Vec::new();
    let mut status = Status::Pass;
    for chart in fiber_charts(n, false) {
        let wi = if chart.inverted.iter().any(|v| v == "w0") { 0 } else { 1 };
        let xj = PLANE_VARS.iter().position(|x| chart.inverted.iter().any(|v| v == x)).expect("plane chart");
        let over_a: usize = base_pts.iter().filter(|p| !p.field.is_zero(&p.coords[wi])).map(|p| p.field.degree()).sum();
        let over_f = crf.iter().filter(|p| !big.is_zero(&p.point[xj])).count();
        let expected = over_a * over_f;
        let report = match hypersurface_smooth_on_chart(&chart, &eq) {
            Ok(r) => r,
            Err(e) => return Outcome::undecided(e),
        };
        let found = match (&report.status, &report.singular_locus) {
            (Verdict::Smooth, _) => Some(0),
            (Verdict::Singular, Some(LocusSummary::Finite { geometric_points, .. })) => Some(*geometric_points),
            _ => None,
        };
        let verified = report.witness.as_ref().is_none_or(|w| w.verified);
        let row_status = match found {
            Some(g) if g == expected && verified => Status::Pass,
            Some(_) => Status::Fail,
            None if report.status == Verdict::Undecided => Status::Undecided,
            None => Status::Fail,
        };
        status = overall([status, row_status]);
        rows.push(json!({
            "chart": chart.id,
            "verdict": report.status,
            "geometric_points": found,
            "expected": expected,
            "witness": report.witness,
        }));
    }
    let mut out = Outcome::new(status, Value::Array(rows));
    if big != *field {
        out.extended_to = Some(big.name());
    }
    out
}

fn check_smooth_z(a: &SparsePoly<GfField>, n: u32) -> Outcome {
    let eq = match z_equation(a, n) {
        Ok(e) => e,
        Err(e) => return Outcome::undecided(e),
    };
    let mut rows = Vec::new();
    let mut status = Status::Pass;
    for chart in fiber_charts(n, true) {
        let r = match hypersurface_smooth_on_chart(&chart, &eq) {
            Ok(r) => r,
            Err(e) => return Outcome::undecided(e),
        };
        status = overall([
            status,
            match r.status {
                Verdict::Smooth => Status::Pass,
                Verdict::Singular => Status::Fail,
                Verdict::Undecided => Status::Undecided,
            },
        ]);
        rows.push(json!({ "chart": r.chart, "verdict": r.status, "witness": r.witness }));
    }
    Outcome::new(status, Value::Array(rows))
}

fn check_half_points(a: &SparsePoly<GfField>, n: u32) -> Outcome {
    match half_point_check(n, a) {
        Ok(pts) => {
            let ok = pts.len() == 2 * n as usize && pts.iter().all(|p| p.ok);
            Outcome::pass_if(ok, json!(pts))
        }
        Err(e) => Outcome::new(Status::Fail, Value::Null).detail(e),
    }
}

fn check_crf(field: &GfField) -> Outcome {
    let big = match with_cube_roots(field) {
        Ok(b) => b,
        Err(e) => return Outcome::undecided(e),
    };
    let mut out = match cr_f(&big) {
        Ok(pts) => {
            let ok = pts.len() == 7 && pts.iter().all(|p| !big.is_zero(&p.f_value) && !big.is_zero(&p.hessian));
            let w: Vec<Value> = pts
                .iter()
                .map(|p| {
                    json!({
                        "point": p.point.iter().map(|c| big.format(c)).collect::<Vec<_>>(),
                        "f": big.format(&p.f_value),
                        "hessian": big.format(&p.hessian),
                    })
                })
                .collect();
            Outcome::pass_if(ok, Value::Array(w))
        }
        Err(e) => Outcome::undecided(e),
    };
    if big != *field {
        out.extended_to = Some(big.name());
    }
    out
}

fn check_cra(a: &SparsePoly<GfField>, n: u32) -> Outcome {
    match cr_a(a, n) {
        Ok(pts) => Outcome::pass_if(pts.iter().all(|p| p.classification == Classification::AlmostNondegenerate), json!(pts)),
        Err(e) => Outcome::undecided(e),
    }
}

fn check_pairs(a: &SparsePoly<GfField>, n: u32, field: &GfField) -> Outcome {
    let big = match with_cube_roots(field) {
        Ok(b) => b,
        Err(e) => return Outcome::undecided(e),
    };
    let lifted = match lift_a(a, &big) {
        Ok(l) => l,
        Err(e) => return Outcome::undecided(e),
    };
    let mut out = match critical_pairs(&lifted, n) {
        Ok(pts) => {
            let ok = pts.iter().all(|p| p.classification == Classification::AlmostNondegenerate);
            Outcome::pass_if(ok, json!(pts)).detail(format!("{} pairs", pts.len()))
        }
        Err(e) => Outcome::undecided(e),
    };
    if big != *field {
        out.extended_to = Some(big.name());
    }
    out
}

fn check_classes(n: u32) -> Outcome {
    let q = make_q(n as i64).expect("n >= 1");
    let k_z = adjunction(&q, DivisorClass::new(0, 4));
    let (qc, mc) = match (q_class(n), m_class(n)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return Outcome::undecided(e),
    };
    let ok = k_z == DivisorClass::new(2 * n as i64 - 2, -3) && qc == DivisorClass::new(-2, 1) && mc == DivisorClass::new(-4, 2);
    Outcome::pass_if(ok, json!({ "omega_z": k_z.to_string(), "q": qc.to_string(), "m": mc.to_string() }))
}

fn check_pole() -> Outcome {
    let e = pole_ledger([2, 2, 2], Rational64::from_integer(2));
    Outcome::pass_if(e.certified, json!(e))
}

fn check_identities(field: &GfField, seed: u64) -> Outcome {
    let r = char2_differential_identities(field, seed, 20);
    Outcome::pass_if(r.iter().all(|c| c.passed), json!(r))
}

fn check_bigness(a: &SparsePoly<GfField>, n: u32, m: Option<u32>, seed: u64, samples: usize) -> Outcome {
    let Some(m) = m.filter(|_| n >= 5) else {
        return Outcome::new(Status::NotApplicable, Value::Null).detail("needs n >= 5");
    };
    match bigness_certificate(n, m, a, samples, seed) {
        Ok(c) => {
            let note = c.note.clone();
            Outcome::pass_if(c.passed(), json!(c)).detail(note)
        }
        Err(e) => Outcome::new(Status::Fail, Value::Null).detail(e),
    }
}

fn check_veronese(a: &SparsePoly<GfField>, n: u32) -> Outcome {
    match veronese_pushforward(n, a) {
        Ok(v) => Outcome::new(Status::Pass, json!({ "q": v.q.format(), "relations": v.relations.len() })),
        Err(e) => Outcome::new(Status::Fail, Value::Null).detail(e),
    }
}

/// A splitting `a = b c` into nonconstant forms, from the first factor of
/// `a(1, w)` over the field, or from a root at infinity.
fn sample_split(a: &SparsePoly<GfField>, n: u32) -> Option<(SparsePoly<GfField>, SparsePoly<GfField>)> {
    let base = var_list(&["w0", "w1"]);
    let field = a.field();
    let a = a.with_vars(&base).ok()?;
    let (a0, _) = dehomogenize_base(&a, n).ok()?;
    let deg = a0.degree()?;
    let homogenize = |p: &UniPoly<GfField>, d: usize| {
        SparsePoly::from_terms(field, &base, p.coeffs().iter().enumerate().map(|(i, c)| (vec![(d - i) as u32, i as u32], *c)))
    };
    let b = if deg < 2 * n as usize {
        SparsePoly::var(field, &base, "w0").ok()?
    } else {
        let fs = factor(&a0)?;
        if fs.len() < 2 && fs.first().is_none_or(|(_, e)| *e < 2) {
            return None;
        }
        let r = &fs[0].0;
        homogenize(r, r.degree()?)
    };
    let c = a.exact_div(&b)?;
    (!c.is_constant()).then_some((b, c))
}

fn check_variant(a: &SparsePoly<GfField>, n: u32) -> Outcome {
    let Some((b, c)) = sample_split(a, n) else {
        return Outcome::new(Status::NotApplicable, Value::Null).detail("a does not split over the field");
    };
    match factorization_variant(a, &b, &c) {
        Ok(v) => Outcome::new(Status::Pass, json!({ "b": b.format(), "c": c.format(), "variant": v.format() })),
        Err(e) => Outcome::new(Status::Fail, json!({ "b": b.format(), "c": c.format() })).detail(e),
    }
}
