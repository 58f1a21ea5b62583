use super::*;
use crate::exactfield::{gf_make_field, gf_primitive_root_of_unity, GfElem, GfField};
use crate::polyring::parse_poly;
use proptest::prelude::*;

fn base() -> Arc<[String]> {
    var_list(&["w0", "w1"])
}

const A2: &str = "w0^4 + w0^2*w1^2 + w0*w1^3 + w1^4";

/// Exhaustive projective critical points of the Klein quartic, with the
/// partials written out by hand.
fn crf_oracle(f: &GfField) -> Vec<[GfElem; 3]> {
    let els = f.elements().unwrap();
    let (z, o) = (f.zero(), f.one());
    let mut pts = Vec::new();
    let mut cands: Vec<[GfElem; 3]> = Vec::new();
    for &a in &els {
        for &b in &els {
            cands.push([o, a, b]);
        }
        cands.push([z, o, a]);
    }
    cands.push([z, z, o]);
    for [x0, x1, x2] in cands {
        let p = |a: GfElem, e: u64| f.pow(&a, e);
        let d0 = f.add(&f.mul(&p(x0, 2), &x1), &p(x2, 3));
        let d1 = f.add(&p(x0, 3), &f.mul(&p(x1, 2), &x2));
        let d2 = f.add(&p(x1, 3), &f.mul(&p(x2, 2), &x0));
        if f.is_zero(&d0) && f.is_zero(&d1) && f.is_zero(&d2) {
            pts.push([x0, x1, x2]);
        }
    }
    pts.sort();
    pts
}

#[test]
fn crf_matches_roots_of_unity_formula() {
    for k in [3, 6] {
        let f = gf_make_field(k).unwrap();
        let zeta = gf_primitive_root_of_unity(&f, 7).unwrap();
        let pts = cr_f(&f).unwrap();
        assert_eq!(pts.len(), 7);
        let mut expected: Vec<[GfElem; 3]> = (0..7).map(|i| [f.one(), f.pow(&zeta, 3 * i), f.pow(&zeta, i)]).collect();
        expected.sort();
        let mut got: Vec<[GfElem; 3]> = pts.iter().map(|p| p.point).collect();
        got.sort();
        assert_eq!(got, expected);
        for i in 0..7u64 {
            let p = pts.iter().find(|p| p.point[2] == f.pow(&zeta, i)).unwrap();
            assert!(!f.is_zero(&p.f_value));
            assert_eq!(p.hessian, f.pow(&zeta, 12 * i));
        }
    }
}

#[test]
fn crf_matches_exhaustive_search() {
    let f = gf_make_field(3).unwrap();
    let mut got: Vec<[GfElem; 3]> = cr_f(&f).unwrap().iter().map(|p| p.point).collect();
    got.sort();
    assert_eq!(got, crf_oracle(&f));
    // No critical points over GF(2) other than (1:1:1), and none over GF(4).
    assert_eq!(crf_oracle(&gf_make_field(1).unwrap()).len(), 1);
    assert_eq!(crf_oracle(&gf_make_field(2).unwrap()).len(), 1);
}

#[test]
fn crf_needs_seventh_roots() {
    assert_eq!(cr_f(&gf_make_field(4).unwrap()), Err(CriticalError::NoSeventhRoots { k: 4 }));
}

#[test]
fn unit_point_values() {
    let f = gf_make_field(1).unwrap();
    let g = klein_quartic(&f, &plane_vars());
    let one = [f.one(); 3];
    for d in g.gradient() {
        assert_eq!(d.eval(&one).unwrap(), f.zero());
    }
    assert_eq!(g.eval(&one).unwrap(), f.one());
    let h = hessian2(&g.specialize(&[(0, f.one())]), &one, 1, 2).unwrap();
    assert!(h.critical);
    assert_eq!(h.value, f.one());
}

#[test]
fn hessian_of_product() {
    let f = gf_make_field(2).unwrap();
    let vs = var_list(&["u", "v"]);
    let g = parse_poly(&f, &vs, "u*v").unwrap();
    let h = hessian2(&g, &[f.zero(), f.zero()], 0, 1).unwrap();
    assert_eq!(h.value, f.one());
    assert!(h.critical);
    let h = hessian2(&g, &[f.one(), f.zero()], 0, 1).unwrap();
    assert!(!h.critical);
}

#[test]
fn cr_a_examples() {
    let f = gf_make_field(8).unwrap();
    let a = parse_poly(&f, &base(), A2).unwrap();
    let pts = cr_a(&a, 2).unwrap();
    assert_eq!(pts.len(), 1);
    let p = &pts[0];
    assert_eq!(p.location.coords["w1"], "0");
    assert_eq!((p.local.constant.as_str(), p.local.quadratic.as_str(), p.local.cubic.as_str()), ("1", "1", "1"));
    assert_eq!(p.classification, Classification::AlmostNondegenerate);

    let a = parse_poly(&f, &base(), "w0^2 + w0*w1 + w1^2").unwrap();
    assert!(cr_a(&a, 1).unwrap().is_empty());

    let a = parse_poly(&f, &base(), "w1^2").unwrap();
    let pts = cr_a(&a, 1).unwrap();
    assert_eq!(pts.len(), 1);
    assert_eq!(pts[0].classification, Classification::Degenerate);
    assert!(pts[0].failing.contains(&Condition::ValueNonzero));
}

/// Exhaustive gradient search for `Cr(a)` over the field, both charts.
fn cra_oracle(f: &GfField, a: &SparsePoly<GfField>) -> Vec<[GfElem; 2]> {
    let d0 = a.partial_at(0);
    let d1 = a.partial_at(1);
    let mut out = Vec::new();
    let mut cands: Vec<[GfElem; 2]> = f.elements().unwrap().into_iter().map(|w| [f.one(), w]).collect();
    cands.push([f.zero(), f.one()]);
    for p in cands {
        if f.is_zero(&d0.eval(&p).unwrap()) && f.is_zero(&d1.eval(&p).unwrap()) {
            out.push(p);
        }
    }
    out
}

#[test]
fn cr_a_matches_exhaustive_search() {
    let f = gf_make_field(8).unwrap();
    let a = parse_poly(&f, &base(), A2).unwrap();
    assert_eq!(cra_oracle(&f, &a), vec![[f.one(), f.zero()]]);
    let a = random_generic_a(2, &f, 7, DEFAULT_BUDGET).unwrap();
    let rational: Vec<BaseCriticalPoint<GfField>> = cr_a_points(&a, 2).unwrap().into_iter().filter(|p| p.field.degree() == 1).collect();
    assert_eq!(rational.len(), cra_oracle(&f, &a).len());
    for p in cra_oracle(&f, &a) {
        assert!(!f.is_zero(&a.eval(&p).unwrap()));
    }
}

#[test]
fn normal_form_examples() {
    let f = gf_make_field(1).unwrap();
    let vs = var_list(&["x1", "x2", "x3"]);
    let o = [f.zero(); 3];
    let g = parse_poly(&f, &vs, "x1^2 + x2*x3 + x1^3").unwrap();
    let cp = classify_critical_point(&g, &o, 0, (1, 2)).unwrap();
    assert_eq!(cp.classification, Classification::AlmostNondegenerate);
    let g = parse_poly(&f, &vs, "x1^2 + x2*x3").unwrap();
    let cp = classify_critical_point(&g, &o, 0, (1, 2)).unwrap();
    assert_eq!(cp.failing, vec![Condition::Cubic]);
    let g = parse_poly(&f, &vs, "x1*x2 + x2*x3 + x1^3").unwrap();
    assert_eq!(classify_critical_point(&g, &o, 0, (1, 2)).unwrap().failing, vec![Condition::CrossTerms]);
}

#[test]
fn pair_at_origin_and_unit_point() {
    let f = gf_make_field(3).unwrap();
    let a = parse_poly(&f, &base(), A2).unwrap();
    let pairs = critical_pairs(&a, 2).unwrap();
    assert_eq!(pairs.len(), 7);
    assert!(pairs.iter().all(|p| p.classification == Classification::AlmostNondegenerate));
    let unit = pairs.iter().find(|p| ["x0", "x1", "x2"].iter().all(|x| p.location.coords[*x] == "1")).unwrap();
    assert_eq!(unit.location.coords["w1"], "0");
    assert_eq!(unit.local.constant, "1");
    assert_eq!(unit.local.cubic, "1");
    assert_eq!(unit.local.hessian_f.as_deref(), Some("1"));
    assert_eq!(unit.location.chart, "U(w0,x0)");
}

#[test]
fn pair_requires_a_nonzero() {
    let f = gf_make_field(3).unwrap();
    let a = parse_poly(&f, &base(), "w1^2").unwrap();
    let p = &cr_a_points(&a, 1).unwrap()[0];
    let k = &p.field;
    let x = [k.one(), k.one(), k.one()];
    assert!(matches!(verify_almost_nondegenerate(&a, &klein_quartic(&f, &plane_vars()), p, &x), Err(CriticalError::Precondition(_))));
}

#[test]
fn sampler_examples() {
    let f = gf_make_field(8).unwrap();
    let a = random_generic_a(5, &f, 42, DEFAULT_BUDGET).unwrap();
    assert!(is_squarefree_form(&a, 5).unwrap());
    assert!(cr_a(&a, 5).unwrap().iter().all(|p| p.classification == Classification::AlmostNondegenerate));
    assert_eq!(random_generic_a(5, &f, 42, DEFAULT_BUDGET).unwrap(), a);

    // Cr(a) misses (a = 0): checked point by point over GF(2^8).
    let a = random_generic_a(2, &f, 7, DEFAULT_BUDGET).unwrap();
    let d0 = a.partial_at(0);
    let d1 = a.partial_at(1);
    let mut cands: Vec<[GfElem; 2]> = f.elements().unwrap().into_iter().map(|w| [f.one(), w]).collect();
    cands.push([f.zero(), f.one()]);
    for p in cands {
        let crit = f.is_zero(&d0.eval(&p).unwrap()) && f.is_zero(&d1.eval(&p).unwrap());
        assert!(!(crit && f.is_zero(&a.eval(&p).unwrap())));
    }

    let f2 = gf_make_field(1).unwrap();
    match random_generic_a(1, &f2, 3, 50) {
        Ok(a) => assert!(is_squarefree_form(&a, 1).unwrap()),
        Err(e) => assert_eq!(e, CriticalError::Exhausted { trials: 50 }),
    }
}

/// Critical points of `A(w) F(x1, x2)` with `A != 0` on the chart
/// `w0 = x0 = 1`, by exhaustive search over GF(8).
#[test]
fn product_critical_points_are_pairs() {
    let f = gf_make_field(3).unwrap();
    let a = random_generic_a(2, &f, 11, DEFAULT_BUDGET).unwrap();
    let vars = var_list(&["w1", "x1", "x2"]);
    let a3 = a.with_vars(&var_list(&["w0", "w1", "x1", "x2"])).unwrap().specialize(&[(0, f.one())]);
    let a3 = SparsePoly::from_terms(&f, &vars, a3.terms().iter().map(|(e, c)| (vec![e[1], 0, 0], *c)));
    let f3 = parse_poly(&f, &vars, "x1 + x1^3*x2 + x2^3").unwrap();
    let g = a3.mul(&f3);
    let grad = g.gradient();
    let els = f.elements().unwrap();
    let mut brute = Vec::new();
    for &w in &els {
        for &x1 in &els {
            for &x2 in &els {
                let p = [w, x1, x2];
                if !f.is_zero(&a3.eval(&p).unwrap()) && grad.iter().all(|d| f.is_zero(&d.eval(&p).unwrap())) {
                    brute.push(p);
                }
            }
        }
    }
    let crf: Vec<[GfElem; 3]> = cr_f(&f).unwrap().into_iter().map(|p| p.point).collect();
    let mut pairs = Vec::new();
    for p in cr_a_points(&a, 2).unwrap() {
        let k = &p.field;
        if k.degree() != 1 || k.is_zero(&p.coords[0]) {
            continue;
        }
        let w = k.as_base(&p.coords[1]).unwrap();
        for x in &crf {
            pairs.push([w, x[1], x[2]]);
        }
    }
    brute.sort();
    pairs.sort();
    assert_eq!(brute, pairs);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn scaling_a_keeps_classification(seed in 0u64..1000, c in 1u64..256) {
        let f = gf_make_field(8).unwrap();
        let terms: Vec<(Vec<u32>, GfElem)> = {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..=4).map(|i| (vec![4 - i, i], f.random(&mut rng))).collect()
        };
        let a = SparsePoly::from_terms(&f, &base(), terms);
        prop_assume!(!a.is_zero() && a.terms().keys().all(|e| e[0] + e[1] == 4));
        let scaled = a.scale(&f.element(c));
        let left: Vec<_> = cr_a(&a, 2).unwrap().into_iter().map(|p| (p.location.coords.clone(), p.failing)).collect();
        let right: Vec<_> = cr_a(&scaled, 2).unwrap().into_iter().map(|p| (p.location.coords.clone(), p.failing)).collect();
        prop_assert_eq!(left, right);
    }
}
