//! One line per acceptance criterion. Tolerances: every comparison is exact;
//! wall-clock limits are the constants below.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use num_rational::Rational64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dpcert_core::coxtoric::{adjunction, chart_atlas, factorization_variant, klein_quartic, make_p, make_q, veronese_pushforward, x_equation, z_equation, DivisorClass, PLANE_VARS};
use dpcert_core::critical::{cr_a_points, cr_f, critical_pairs, hessian2, is_squarefree_form, random_generic_a, Classification, DEFAULT_BUDGET};
use dpcert_core::exactfield::{gf_make_field, gf_primitive_root_of_unity, Field, GfElem, GfField};
use dpcert_core::kollar::{bigness_certificate, m_class, pole_ledger, q_class};
use dpcert_core::oracle::{compare_chart_singular, compare_crf};
use dpcert_core::polyring::{parse_poly, var_list, SparsePoly};
use dpcert_core::singular::{half_point_check, hypersurface_smooth_on_chart, LocusSummary, Verdict};

const LIMIT_CRF_S: f64 = 1.0;
const LIMIT_SMOOTH_S: f64 = 30.0;
const LIMIT_PAIRS_S: f64 = 10.0;
const LIMIT_BIGNESS_S: f64 = 30.0;
const LIMIT_END_TO_END_S: f64 = 120.0;

const A2: &str = "w0^4 + w0^2*w1^2 + w0*w1^3 + w1^4";

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn criterion(id: u32, title: &str, limit: Option<f64>, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let res = catch_unwind(AssertUnwindSafe(body));
    let secs = start.elapsed().as_secs_f64();
    let (mut pass, mut detail) = match res {
        Ok(o) => (o.pass, o.detail),
        Err(e) => (false, format!("panicked: {}", e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())),
    };
    if let Some(l) = limit {
        if secs >= l {
            pass = false;
            detail = format!("{detail}; over the {l} s limit");
        }
    }
    println!("criterion {id:>2} {:<4} {title} ({secs:.2} s): {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn base() -> std::sync::Arc<[String]> {
    var_list(&["w0", "w1"])
}

fn random_form(field: &GfField, deg: u32, rng: &mut ChaCha8Rng) -> SparsePoly<GfField> {
    loop {
        let terms: Vec<(Vec<u32>, GfElem)> = (0..=deg).map(|i| (vec![deg - i, i], field.random(rng))).collect();
        let a = SparsePoly::from_terms(field, &base(), terms);
        if !a.is_zero() && a.total_degree() == Some(deg) {
            return a;
        }
    }
}

fn random_squarefree(field: &GfField, n: u32, seed: u64) -> SparsePoly<GfField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let a = random_form(field, 2 * n, &mut rng);
        if is_squarefree_form(&a, n).unwrap() {
            return a;
        }
    }
}

fn c1() -> Outcome {
    let f = gf_make_field(3).unwrap();
    let z = gf_primitive_root_of_unity(&f, 7).unwrap();
    let got: BTreeSet<[GfElem; 3]> = cr_f(&f).unwrap().iter().map(|p| p.point).collect();
    let want: BTreeSet<[GfElem; 3]> = (0..7).map(|i| [f.one(), f.pow(&z, 3 * i), f.pow(&z, i)]).collect();
    outcome(got == want, format!("{} points, expected 7", got.len()))
}

fn c2() -> Outcome {
    let f = gf_make_field(3).unwrap();
    let z = gf_primitive_root_of_unity(&f, 7).unwrap();
    let g = klein_quartic(&f, &var_list(&PLANE_VARS)).specialize(&[(0, f.one())]);
    let mut ok = true;
    for i in 0..7u64 {
        let h = hessian2(&g, &[f.one(), f.pow(&z, 3 * i), f.pow(&z, i)], 1, 2).unwrap();
        ok &= h.critical && h.value == f.pow(&z, 12 * i) && !f.is_zero(&h.value);
    }
    outcome(ok, "Hessian at (1:z^3i:z^i) is z^12i, nonzero, i = 0..6")
}

fn c3() -> Outcome {
    let f = gf_make_field(3).unwrap();
    let g = klein_quartic(&f, &var_list(&PLANE_VARS));
    let pts = cr_f(&f).unwrap();
    let ok = pts.len() == 7 && pts.iter().all(|p| !f.is_zero(&g.eval(&p.point).unwrap()));
    outcome(ok, "f is nonzero at all 7 critical points")
}

fn c4() -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=20u32 {
        let q = make_q(n as i64).unwrap();
        let kz = adjunction(&q, DivisorClass::new(0, 4));
        if kz != DivisorClass::new(2 * n as i64 - 2, -3) || q_class(n).unwrap() != DivisorClass::new(-2, 1) || m_class(n).unwrap() != DivisorClass::new(-4, 2) {
            bad.push(n);
        }
    }
    outcome(bad.is_empty(), format!("n = 1..20, mismatches at {bad:?}"))
}

/// Geometric number of points of `Cr(a)` on `w_i != 0`.
fn cr_a_count(a: &SparsePoly<GfField>, n: u32, i: usize) -> usize {
    cr_a_points(a, n).unwrap().iter().filter(|p| !p.field.is_zero(&p.coords[i])).map(|p| p.field.degree()).sum()
}

fn c5() -> Outcome {
    let f = gf_make_field(8).unwrap();
    let (mut z_smooth, mut x_smooth, mut x_explained, mut total) = (0, 0, 0, 0);
    for n in [1u32, 2, 5, 6] {
        let p_charts: Vec<_> = chart_atlas(&make_p(n as i64).unwrap()).unwrap().into_iter().filter(|c| !c.is_quotient()).collect();
        let q_charts: Vec<_> = chart_atlas(&make_q(n as i64).unwrap()).unwrap().into_iter().filter(|c| !c.is_quotient()).collect();
        assert_eq!((p_charts.len(), q_charts.len()), (6, 6));
        for s in 0..20 {
            total += 1;
            let a = random_squarefree(&f, n, 1000 * n as u64 + s);
            let ze = z_equation(&a, n).unwrap();
            if q_charts.iter().all(|c| hypersurface_smooth_on_chart(c, &ze).unwrap().status == Verdict::Smooth) {
                z_smooth += 1;
            }
            let xe = x_equation(&a, n).unwrap();
            let reports: Vec<_> = p_charts.iter().map(|c| (c, hypersurface_smooth_on_chart(c, &xe).unwrap())).collect();
            if reports.iter().all(|(_, r)| r.status == Verdict::Smooth) {
                x_smooth += 1;
            }
            // the singular points found are exactly the preimages of Cr(a) x Cr(f)
            let explained = reports.iter().all(|(c, r)| {
                let i = if c.inverted.iter().any(|v| v == "w0") { 0 } else { 1 };
                let expected = 7 * cr_a_count(&a, n, i);
                match (&r.status, &r.singular_locus) {
                    (Verdict::Smooth, _) => expected == 0,
                    (Verdict::Singular, Some(LocusSummary::Finite { geometric_points, .. })) => *geometric_points == expected && r.witness.as_ref().is_some_and(|w| w.verified),
                    _ => false,
                }
            });
            if explained {
                x_explained += 1;
            }
        }
    }
    outcome(
        z_smooth == total && x_smooth == total,
        format!(
            "Z smooth on all six charts for {z_smooth}/{total}; X smooth for {x_smooth}/{total}; \
             X singular locus equal to the preimage of Cr(a) x Cr(f) for {x_explained}/{total}"
        ),
    )
}

fn c6() -> Outcome {
    let f = gf_make_field(8).unwrap();
    let mut bad = Vec::new();
    for n in 1..=6u32 {
        for s in 0..5 {
            let a = random_squarefree(&f, n, 77 * n as u64 + s);
            let h = half_point_check(n, &a).unwrap();
            if h.len() != 2 * n as usize || !h.iter().all(|p| p.ok && p.multiplicity == 1) {
                bad.push((n, s));
            }
        }
    }
    outcome(bad.is_empty(), format!("n = 1..6, 5 seeds each, failures {bad:?}"))
}

/// Critical points of `a f` with `a != 0`, by enumerating the field.
fn brute_force_af(f: &GfField, a: &SparsePoly<GfField>) -> BTreeSet<String> {
    let els = f.elements().unwrap();
    let vars = var_list(&["w", "u", "v"]);
    let plane = klein_quartic(f, &var_list(&PLANE_VARS));
    let fl = SparsePoly::from_terms(f, &vars, plane.terms().iter().map(|(e, c)| (vec![0, e[1], e[2]], *c)));
    let mut out = BTreeSet::new();
    for chart in 0..2 {
        // chart 0: w0 = 1, w1 = w; chart 1: w1 = 1, w0 = w, only w = 0
        let al = SparsePoly::from_terms(
            f,
            &vars,
            a.terms().iter().map(|(e, c)| (vec![if chart == 0 { e[1] } else { e[0] }, 0, 0], *c)),
        );
        let g = al.mul(&fl);
        let grad = g.gradient();
        let ws: Vec<GfElem> = if chart == 0 { els.clone() } else { vec![f.zero()] };
        for w in &ws {
            if f.is_zero(&al.eval(&[*w, f.zero(), f.zero()]).unwrap()) {
                continue;
            }
            for u in &els {
                for v in &els {
                    let p = [*w, *u, *v];
                    if grad.iter().all(|d| f.is_zero(&d.eval(&p).unwrap())) {
                        let wp = if chart == 0 { format!("(1:{})", f.format(w)) } else { "(0:1)".to_string() };
                        out.insert(format!("{wp} (1:{}:{})", f.format(u), f.format(v)));
                    }
                }
            }
        }
    }
    out
}

fn product_set(f: &GfField, a: &SparsePoly<GfField>, n: u32) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for p in cr_a_points(a, n).unwrap() {
        let k = &p.field;
        if k.degree() != 1 {
            continue;
        }
        let c = [k.as_base(&p.coords[0]).unwrap(), k.as_base(&p.coords[1]).unwrap()];
        let wp = if f.is_zero(&c[0]) { "(0:1)".to_string() } else { format!("(1:{})", f.format(&f.div(&c[1], &c[0]).unwrap())) };
        let awp = a.eval(&c).unwrap();
        if f.is_zero(&awp) {
            continue;
        }
        for q in cr_f(f).unwrap() {
            out.insert(format!("{wp} (1:{}:{})", f.format(&q.point[1]), f.format(&q.point[2])));
        }
    }
    out
}

fn c7() -> Outcome {
    let mut details = Vec::new();
    let mut ok = true;
    for k in [3, 6] {
        let f = gf_make_field(k).unwrap();
        let a = parse_poly(&f, &base(), A2).unwrap();
        let pairs = critical_pairs(&a, 2).unwrap();
        let all_an = !pairs.is_empty() && pairs.iter().all(|p| p.classification == Classification::AlmostNondegenerate);
        let brute = brute_force_af(&f, &a);
        let product = product_set(&f, &a, 2);
        ok &= all_an && brute == product;
        details.push(format!("GF(2^{k}): {} pairs all almost nondegenerate = {all_an}, enumeration {} = product {}", pairs.len(), brute.len(), product.len()));
    }
    outcome(ok, details.join("; "))
}

fn c8() -> Outcome {
    let f = gf_make_field(10).unwrap();
    let a = random_generic_a(5, &f, 42, DEFAULT_BUDGET).unwrap();
    let c = bigness_certificate(5, 6, &a, 200, 42).unwrap();
    let mut need = vec!["1".to_string(), "w1".to_string()];
    for i in 0..3 {
        for j in i..3 {
            need.push(if i == j { format!("x{i}^2") } else { format!("x{i}*x{j}") });
        }
    }
    let restricted_ok = need.iter().all(|s| c.restricted.contains(s));
    let ok = (c.k, c.l) == (6, 1)
        && c.sections.len() == 19
        && c.section_class == DivisorClass::new(-24, 12)
        && c.degree_checks
        && restricted_ok
        && c.samples == 200
        && c.failures.is_empty();
    outcome(ok, format!("k = {}, l = {}, {} sections of class {}, {}/{} pairs separated", c.k, c.l, c.sections.len(), c.section_class, c.samples - c.failures.len(), c.samples))
}

fn c9() -> Outcome {
    let e = pole_ledger([2, 2, 2], Rational64::from_integer(2));
    let ok = e.vanishing == "3" && e.pole_bound == "2" && e.net == "1" && e.certified;
    outcome(ok, format!("vanishing {}, pole {}, net {}", e.vanishing, e.pole_bound, e.net))
}

fn c10() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for k in [3, 6] {
        let f = gf_make_field(k).unwrap();
        let c = compare_crf(&f).unwrap();
        ok &= c.agree;
        let a = parse_poly(&f, &base(), A2).unwrap();
        let mut agree = 0;
        let mut points = 0;
        let mut charts = 0;
        for (spec, eq) in [(make_p(2).unwrap(), x_equation(&a, 2).unwrap()), (make_q(2).unwrap(), z_equation(&a, 2).unwrap())] {
            for chart in chart_atlas(&spec).unwrap().iter().filter(|c| !c.is_quotient()) {
                let c = compare_chart_singular(chart, &eq).unwrap();
                charts += 1;
                agree += c.agree as usize;
                points += c.brute_force.len();
            }
        }
        ok &= agree == charts;
        parts.push(format!("GF(2^{k}): Cr(f) agree = {}, charts {agree}/{charts} agree ({points} rational singular points)", c.agree));
    }
    outcome(ok, parts.join("; "))
}

fn c11() -> Outcome {
    let f = gf_make_field(8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut ver, mut var) = (0, 0);
    for i in 0..100u32 {
        let n = 1 + i % 6;
        let a = random_form(&f, 2 * n, &mut rng);
        ver += veronese_pushforward(n, &a).is_ok() as usize;
        let d = 1 + i % (2 * n - 1).max(1);
        let d = d.min(2 * n - 1);
        let b = random_form(&f, d, &mut rng);
        let c = random_form(&f, 2 * n - d, &mut rng);
        var += factorization_variant(&b.mul(&c), &b, &c).is_ok() as usize;
    }
    outcome(ver == 100 && var == 100, format!("Veronese {ver}/100, factorization {var}/100"))
}

fn c12() -> Outcome {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_dpcert")).args(["verify", "--n", "5", "--seed", "42", "--field", "q10", "--m", "6"]).output().unwrap();
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        (out.status.code(), v)
    };
    let (c1, r1) = run();
    let (c2, r2) = run();
    let all_pass = r1["checks"].as_array().unwrap().iter().all(|c| c["status"] == "PASS");
    let same = r1["hash"] == r2["hash"];
    outcome(c1 == Some(0) && c2 == Some(0) && all_pass && same, format!("exit {c1:?}/{c2:?}, every check PASS = {all_pass}, hash stable = {same}"))
}

#[test]
fn acceptance() {
    let results = [
        criterion(1, "Cr(f) over GF(8)", Some(LIMIT_CRF_S), c1),
        criterion(2, "Hessians at Cr(f)", Some(LIMIT_CRF_S), c2),
        criterion(3, "Cr(f) off f = 0", None, c3),
        criterion(4, "class ledger", None, c4),
        criterion(5, "smoothness suite", Some(LIMIT_SMOOTH_S), c5),
        criterion(6, "half point census", None, c6),
        criterion(7, "almost nondegeneracy", Some(LIMIT_PAIRS_S), c7),
        criterion(8, "bigness certificate", Some(LIMIT_BIGNESS_S), c8),
        criterion(9, "pole ledger", None, c9),
        criterion(10, "oracle equivalence", None, c10),
        criterion(11, "identity suites", None, c11),
        criterion(12, "end to end", Some(LIMIT_END_TO_END_S), c12),
    ];
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, p)| !**p).map(|(i, _)| i + 1).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
