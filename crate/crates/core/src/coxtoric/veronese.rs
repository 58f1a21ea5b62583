use std::collections::BTreeMap;
use std::sync::Arc;

use super::equations::{klein_quartic, p_vars, BASE_VARS};
use super::CoxError;
use crate::exactfield::Field;
use crate::polyring::{Assignment, SparsePoly};

#[derive(Debug, Clone)]
pub struct VeroneseData<F: Field> {
    /// Quadric in `y0..yn` with `q(y w0^n, y w0^(n-1) w1, ..., y w1^n) = a y^2`.
    pub q: SparsePoly<F>,
    /// `y_i y_j - y_k y_l` for `i + j = k + l`, cutting out the Veronese image.
    pub relations: Vec<SparsePoly<F>>,
}

/// Pushes `a y^2` forward along `y_i = y w0^(n-i) w1^i`.
///
/// The coefficient of `w0^(2n-j) w1^j` goes to `y_ceil(j/2) y_floor(j/2)`.
/// The defining identity is re-checked by substitution before returning.
pub fn veronese_pushforward<F: Field>(n: u32, a: &SparsePoly<F>) -> Result<VeroneseData<F>, CoxError> {
    let base: Arc<[String]> = BASE_VARS.iter().map(|s| s.to_string()).collect();
    let a = a.with_vars(&base)?;
    if a.is_zero() || !a.terms().keys().all(|e| e[0] + e[1] == 2 * n) {
        return Err(CoxError::WrongDegree { expected: 2 * n });
    }
    let f = a.field().clone();
    let yv: Arc<[String]> = (0..=n).map(|i| format!("y{i}")).collect();
    let q = SparsePoly::from_terms(
        &f,
        &yv,
        a.terms().iter().map(|(e, c)| {
            let j = e[1] as usize;
            let mut ex = vec![0u32; n as usize + 1];
            ex[j.div_ceil(2)] += 1;
            ex[j / 2] += 1;
            (ex, c.clone())
        }),
    );

    let mut relations = Vec::new();
    for s in 0..=2 * n {
        let pairs: Vec<(u32, u32)> = (0..=s / 2).map(|i| (i, s - i)).filter(|&(_, j)| j <= n).collect();
        for (x, p1) in pairs.iter().enumerate() {
            for p2 in &pairs[x + 1..] {
                let m = |(i, j): (u32, u32)| {
                    let mut e = vec![0u32; n as usize + 1];
                    e[i as usize] += 1;
                    e[j as usize] += 1;
                    SparsePoly::monomial(&f, &yv, f.one(), e)
                };
                relations.push(m(*p1).sub(&m(*p2)));
            }
        }
    }

    // q(y xi) = a y^2
    let target: Arc<[String]> = ["w0", "w1", "y"].iter().map(|s| s.to_string()).collect();
    let mut asg = BTreeMap::new();
    for i in 0..=n {
        let e = vec![(n - i) as i64, i as i64, 1];
        asg.insert(format!("y{i}"), Assignment::Monomial(f.one(), e));
    }
    let lhs = q.substitute(&asg, &target)?;
    let y = SparsePoly::var(&f, &target, "y")?;
    let rhs = a.with_vars(&target)?.mul(&y.pow(2));
    if lhs != rhs {
        return Err(CoxError::IdentityFailed(format!("q(y xi) = {lhs} but a y^2 = {rhs}")));
    }
    Ok(VeroneseData { q, relations })
}

/// Builds `b t^2 + c f` for a splitting `a = b c` and checks that `t = c y`
/// turns it into `c (a y^2 + f)`.
pub fn factorization_variant<F: Field>(a: &SparsePoly<F>, b: &SparsePoly<F>, c: &SparsePoly<F>) -> Result<SparsePoly<F>, CoxError> {
    let base: Arc<[String]> = BASE_VARS.iter().map(|s| s.to_string()).collect();
    let (a, b, c) = (a.with_vars(&base)?, b.with_vars(&base)?, c.with_vars(&base)?);
    if a != b.mul(&c) {
        return Err(CoxError::NotAProduct);
    }
    let deg = a.total_degree().unwrap_or(0);
    let n = deg / 2;
    let field = a.field().clone();
    let tv: Arc<[String]> = ["w0", "w1", "x0", "x1", "x2", "t"].iter().map(|s| s.to_string()).collect();
    let t = SparsePoly::var(&field, &tv, "t")?;
    let variant = b.with_vars(&tv)?.mul(&t.pow(2)).add(&c.with_vars(&tv)?.mul(&klein_quartic(&field, &tv)));

    // Substitute t -> c y in the union of both variable lists.
    let pv = p_vars(n);
    let union: Arc<[String]> = tv.iter().cloned().chain(std::iter::once("y".to_string())).collect();
    let cy = c.with_vars(&union)?.mul(&SparsePoly::var(&field, &union, "y")?);
    let mut asg = BTreeMap::new();
    asg.insert("t".to_string(), Assignment::Poly(cy));
    let lhs = variant.with_vars(&union)?.substitute(&asg, &union)?.with_vars(&pv)?;
    let y = SparsePoly::var(&field, &pv, "y")?;
    let rhs = c.with_vars(&pv)?.mul(&a.with_vars(&pv)?.mul(&y.pow(2)).add(&klein_quartic(&field, &pv)));
    if lhs != rhs {
        return Err(CoxError::IdentityFailed("b (c y)^2 + c f differs from c (a y^2 + f)".into()));
    }
    Ok(variant)
}
