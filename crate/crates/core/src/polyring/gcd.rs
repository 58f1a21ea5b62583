use super::sparse::SparsePoly;
use super::univariate::UniPoly;
use crate::exactfield::Field;

/// Greatest common divisor of two polynomials in the variables `u` and `v`
/// (indices into the shared variable list; no other variable may occur).
///
/// Computed as content times primitive part with a primitive pseudo-remainder
/// sequence in `v` over `F[u]`. The result is normalized to a monic leading
/// term; `gcd(0, 0) = 0`.
pub fn bivariate_gcd<F: Field>(p: &SparsePoly<F>, q: &SparsePoly<F>, u: usize, v: usize) -> SparsePoly<F> {
    if p.is_zero() {
        return normalize(q);
    }
    if q.is_zero() {
        return normalize(p);
    }
    let (cp, pp) = content_split(p, u, v);
    let (cq, pq) = content_split(q, u, v);
    let c = cp.gcd(&cq);
    let mut a = pp;
    let mut b = pq;
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    let prim = loop {
        if b.degree_in(v).unwrap_or(0) == 0 {
            // b is primitive and free of v, hence a nonzero constant.
            break SparsePoly::one(p.field(), p.vars());
        }
        let r = pseudo_rem(&a, &b, v);
        if r.is_zero() {
            break b;
        }
        a = b;
        b = content_split(&r, u, v).1;
    };
    normalize(&SparsePoly::from_univariate(&c, p.vars(), u).mul(&prim))
}

/// `(content in F[u], primitive part)` with respect to `v`.
fn content_split<F: Field>(p: &SparsePoly<F>, u: usize, v: usize) -> (UniPoly<F>, SparsePoly<F>) {
    let f = p.field();
    let mut c = UniPoly::zero(f);
    for coeff in p.coefficients_in(v) {
        if !coeff.is_zero() {
            c = c.gcd(&coeff.to_univariate(u).expect("bivariate input"));
        }
    }
    let cs = SparsePoly::from_univariate(&c, p.vars(), u);
    (c, p.exact_div(&cs).expect("content divides"))
}

fn pseudo_rem<F: Field>(a: &SparsePoly<F>, b: &SparsePoly<F>, v: usize) -> SparsePoly<F> {
    let db = b.degree_in(v).unwrap();
    let lb = b.coefficients_in(v).pop().unwrap();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v).unwrap() >= db {
        let dr = r.degree_in(v).unwrap();
        let lr = r.coefficients_in(v).pop().unwrap();
        let mut e = vec![0; a.nvars()];
        e[v] = dr - db;
        let shift = SparsePoly::monomial(a.field(), a.vars(), a.field().one(), e);
        r = r.mul(&lb).sub(&lr.mul(&shift).mul(b));
    }
    r
}

fn normalize<F: Field>(p: &SparsePoly<F>) -> SparsePoly<F> {
    match p.leading_term() {
        None => p.clone(),
        Some((_, c)) => p.scale(&p.field().inv(c).unwrap()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{gf_make_field, RationalField};
    use crate::polyring::{parse_poly, var_list};
    use proptest::prelude::*;

    #[test]
    fn shared_line() {
        let q = RationalField;
        let vs = var_list(&["u", "v"]);
        let p1 = parse_poly(&q, &vs, "(u + v)*(u - 2)").unwrap();
        let p2 = parse_poly(&q, &vs, "(u + v)*(v^2 + 1)").unwrap();
        assert_eq!(bivariate_gcd(&p1, &p2, 0, 1), parse_poly(&q, &vs, "u + v").unwrap());
        let p3 = parse_poly(&q, &vs, "u*v + 1").unwrap();
        assert!(bivariate_gcd(&p1, &p3, 0, 1).is_constant());
    }

    #[test]
    fn content_only() {
        let f = gf_make_field(1).unwrap();
        let vs = var_list(&["u", "v"]);
        let p1 = parse_poly(&f, &vs, "u^2*v + u^2").unwrap();
        let p2 = parse_poly(&f, &vs, "u*v^3 + u").unwrap();
        // gcd = u (v + 1)
        assert_eq!(bivariate_gcd(&p1, &p2, 0, 1), parse_poly(&f, &vs, "u*v + u").unwrap());
    }

    proptest! {
        #[test]
        fn common_factor_is_found(a in proptest::collection::vec((0u32..3, 0u32..3, 1u64..8), 1..4),
                                  b in proptest::collection::vec((0u32..3, 0u32..3, 1u64..8), 1..4),
                                  g in proptest::collection::vec((0u32..2, 0u32..2, 1u64..8), 1..3)) {
            let f = gf_make_field(3).unwrap();
            let vs = var_list(&["u", "v"]);
            let mk = |ts: &Vec<(u32, u32, u64)>| SparsePoly::from_terms(&f, &vs, ts.iter().map(|&(i, j, c)| (vec![i, j], f.element(c))));
            let (a, b, g) = (mk(&a), mk(&b), mk(&g));
            prop_assume!(!a.is_zero() && !b.is_zero() && !g.is_zero());
            let d = bivariate_gcd(&a.mul(&g), &b.mul(&g), 0, 1);
            prop_assert!(d.exact_div(&normalize(&g)).is_some());
            prop_assert!(a.mul(&g).exact_div(&d).is_some());
            prop_assert!(b.mul(&g).exact_div(&d).is_some());
        }
    }
}
