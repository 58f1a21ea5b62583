use std::collections::BTreeMap;
use std::sync::Arc;

use super::{CoxError, make_p, make_q};
use crate::exactfield::Field;
use crate::polyring::{Assignment, SparsePoly};

pub const BASE_VARS: [&str; 2] = ["w0", "w1"];
pub const PLANE_VARS: [&str; 3] = ["x0", "x1", "x2"];

pub fn p_vars(n: u32) -> Arc<[String]> {
    make_p(n as i64).unwrap().var_list()
}

pub fn q_vars(n: u32) -> Arc<[String]> {
    make_q(n as i64).unwrap().var_list()
}

/// `f = x0^3 x1 + x1^3 x2 + x2^3 x0` over the given variable list, which
/// must contain `x0, x1, x2`.
pub fn klein_quartic<F: Field>(field: &F, vars: &Arc<[String]>) -> SparsePoly<F> {
    let i: Vec<usize> = PLANE_VARS.iter().map(|v| vars.iter().position(|w| w == v).expect("plane variable")).collect();
    let term = |a: usize, b: usize| {
        let mut e = vec![0; vars.len()];
        e[i[a]] = 3;
        e[i[b]] = 1;
        (e, field.one())
    };
    SparsePoly::from_terms(field, vars, [term(0, 1), term(1, 2), term(2, 0)])
}

fn check_base_form<F: Field>(a: &SparsePoly<F>, n: u32) -> Result<(), CoxError> {
    let base: Arc<[String]> = BASE_VARS.iter().map(|s| s.to_string()).collect();
    let a = a.with_vars(&base)?;
    if a.is_zero() || !a.terms().keys().all(|e| e[0] + e[1] == 2 * n) {
        return Err(CoxError::WrongDegree { expected: 2 * n });
    }
    Ok(())
}

/// `a y^2 + f` in the Cox ring of `P_n`; `a` is a form of degree `2n` in `w0, w1`.
pub fn x_equation<F: Field>(a: &SparsePoly<F>, n: u32) -> Result<SparsePoly<F>, CoxError> {
    check_base_form(a, n)?;
    let vars = p_vars(n);
    let a = a.with_vars(&vars)?;
    let y = SparsePoly::var(a.field(), &vars, "y")?;
    Ok(a.mul(&y.pow(2)).add(&klein_quartic(a.field(), &vars)))
}

/// `a z + f` in the Cox ring of `Q_n`.
pub fn z_equation<F: Field>(a: &SparsePoly<F>, n: u32) -> Result<SparsePoly<F>, CoxError> {
    check_base_form(a, n)?;
    let vars = q_vars(n);
    let a = a.with_vars(&vars)?;
    let z = SparsePoly::var(a.field(), &vars, "z")?;
    Ok(a.mul(&z).add(&klein_quartic(a.field(), &vars)))
}

/// Pulls a `Q_n` polynomial back along `z = y^2` to `P_n`.
pub fn pull_back_z<F: Field>(p: &SparsePoly<F>, n: u32) -> Result<SparsePoly<F>, CoxError> {
    let pv = p_vars(n);
    // Route through the union of both variable lists.
    let union: Arc<[String]> = q_vars(n).iter().cloned().chain(std::iter::once("y".to_string())).collect();
    let p = p.with_vars(&union)?;
    let y = SparsePoly::var(p.field(), &union, "y")?;
    let mut asg = BTreeMap::new();
    asg.insert("z".to_string(), Assignment::Poly(y.pow(2)));
    Ok(p.substitute(&asg, &union)?.with_vars(&pv)?)
}
