use dpcert_core::coxtoric::{chart_atlas, make_p, make_q, pull_back_z, x_equation, z_equation};
use dpcert_core::critical::{critical_pairs, random_generic_a, Classification, DEFAULT_BUDGET};
use dpcert_core::exactfield::{gf_make_field, Field};
use dpcert_core::kollar::{generic_a_template, reduce_integer_assignment, specialize_mod2};
use dpcert_core::oracle::compare_chart_singular;
use dpcert_core::pipeline::{verify_all, ASource, Status, VerifyOptions};
use dpcert_core::polyring::{var_list, SparsePoly};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn z_pulls_back_to_x(n in 1u32..5, seed in any::<u64>()) {
        let f = gf_make_field(5).unwrap();
        let a = random_generic_a(n, &f, seed, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(pull_back_z(&z_equation(&a, n).unwrap(), n).unwrap(), x_equation(&a, n).unwrap());
    }

    #[test]
    fn chart_decider_matches_enumeration(seed in any::<u64>()) {
        let f = gf_make_field(3).unwrap();
        let a = random_generic_a(2, &f, seed, DEFAULT_BUDGET).unwrap();
        for (spec, eq) in [(make_p(2).unwrap(), x_equation(&a, 2).unwrap()), (make_q(2).unwrap(), z_equation(&a, 2).unwrap())] {
            for chart in chart_atlas(&spec).unwrap().iter().filter(|c| !c.is_quotient()) {
                let c = compare_chart_singular(chart, &eq).unwrap();
                prop_assert!(c.agree, "{} {:?} {:?}", chart.id, c.elimination, c.brute_force);
            }
        }
    }

    #[test]
    fn random_instances_verify(n in 1u32..4, seed in 0u64..1000) {
        let mut o = VerifyOptions::new(n, ASource::Random { seed }, "q6");
        o.samples = 10;
        let r = verify_all(&o).unwrap();
        prop_assert_eq!(r.overall, Status::Pass);
    }
}

#[test]
fn generic_pairs_are_almost_nondegenerate() {
    let f = gf_make_field(6).unwrap();
    for n in [2, 3, 5] {
        let a = random_generic_a(n, &f, 42, DEFAULT_BUDGET).unwrap();
        let pairs = critical_pairs(&a, n).unwrap();
        assert_eq!(pairs.len() % 7, 0);
        assert!(pairs.iter().all(|p| p.classification == Classification::AlmostNondegenerate));
    }
}

#[test]
fn integer_template_reduces_like_coefficients() {
    let f = gf_make_field(1).unwrap();
    let vals = (0..=4).map(|i| (format!("alpha{i}"), i as i64 + 1)).collect();
    let a = specialize_mod2(&generic_a_template(2), &f, &reduce_integer_assignment(&f, &vals)).unwrap();
    // alpha_i = i + 1 is odd for even i
    let want = SparsePoly::from_terms(&f, &var_list(&["w0", "w1"]), [(vec![4, 0], f.one()), (vec![2, 2], f.one()), (vec![0, 4], f.one())]);
    assert_eq!(a, want);
}
