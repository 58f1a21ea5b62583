//! Exhaustive searches over a finite working field, used to cross-check the
//! elimination-based results.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coxtoric::{klein_quartic, ChartMap, CoxError, PLANE_VARS};
use crate::critical::{cr_f, CriticalError};
use crate::exactfield::Field;
use crate::polyring::{var_list, PolyError, SparsePoly};
use crate::singular::{hypersurface_smooth_on_chart, SingularError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("field {0} has no element list")]
    NotEnumerable(String),
    #[error("search space of {0} lines is too large")]
    TooLarge(u64),
    #[error(transparent)]
    Critical(#[from] CriticalError),
    #[error(transparent)]
    Singular(#[from] SingularError),
    #[error(transparent)]
    Cox(#[from] CoxError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub name: String,
    pub field: String,
    pub elimination: Vec<String>,
    pub brute_force: Vec<String>,
    pub agree: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

const LINE_LIMIT: u64 = 1 << 20;

fn elements<F: Field>(field: &F) -> Result<Vec<F::Elem>, OracleError> {
    field.elements().ok_or_else(|| OracleError::NotEnumerable(field.name()))
}

/// Points of the projective plane with first nonzero coordinate 1 at which
/// every partial of the Klein quartic vanishes.
pub fn brute_force_crf<F: Field>(field: &F) -> Result<Vec<[F::Elem; 3]>, OracleError> {
    let els = elements(field)?;
    let vars = var_list(&PLANE_VARS);
    let grad = klein_quartic(field, &vars).gradient();
    let (z, o) = (field.zero(), field.one());
    let mut cands = vec![[z.clone(), z.clone(), o.clone()]];
    for a in &els {
        cands.push([z.clone(), o.clone(), a.clone()]);
        for b in &els {
            cands.push([o.clone(), a.clone(), b.clone()]);
        }
    }
    Ok(cands.into_iter().filter(|p| grad.iter().all(|g| field.is_zero(&g.eval(p).expect("arity")))).collect())
}

fn format_point<F: Field>(field: &F, p: &[F::Elem]) -> String {
    format!("({})", p.iter().map(|c| field.format(c)).collect::<Vec<_>>().join(":"))
}

pub fn compare_crf<F: Field>(field: &F) -> Result<OracleComparison, OracleError> {
    let mut elim: Vec<String> = cr_f(field)?.iter().map(|p| format_point(field, &p.point)).collect();
    let mut brute: Vec<String> = brute_force_crf(field)?.iter().map(|p| format_point(field, p)).collect();
    elim.sort();
    brute.sort();
    Ok(OracleComparison {
        name: "crf".into(),
        field: field.name(),
        agree: elim == brute,
        elimination: elim,
        brute_force: brute,
        note: None,
    })
}

/// Every point of the chart with coordinates in the field where the
/// restricted equation and all its partials vanish. All coordinates but
/// the last are enumerated; the last is found among the roots of the gcd
/// of the specialized system.
pub fn brute_force_chart_singular<F: Field>(chart: &ChartMap, equation: &SparsePoly<F>) -> Result<Vec<BTreeMap<String, String>>, OracleError> {
    let field = equation.field();
    let els = elements(field)?;
    let e = chart.restrict(equation)?;
    let mut system = vec![e.clone()];
    system.extend(e.gradient());
    let m = e.nvars();
    let last = m - 1;
    let lines = (els.len() as u64).pow(last as u32);
    if lines > LINE_LIMIT {
        return Err(OracleError::TooLarge(lines));
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; last];
    for _ in 0..lines {
        let vals: Vec<(usize, F::Elem)> = idx.iter().enumerate().map(|(i, &j)| (i, els[j].clone())).collect();
        let mut g = None;
        for p in &system {
            let u = p.specialize(&vals).to_univariate(last)?;
            g = Some(match g {
                None => u,
                Some(h) => u.gcd(&h),
            });
        }
        let g = g.expect("nonempty system");
        if !g.is_constant() || g.is_zero() {
            for c in &els {
                if g.is_zero() || field.is_zero(&g.eval(c)) {
                    let mut pt: BTreeMap<String, String> = vals.iter().map(|(i, v)| (chart.coords[*i].clone(), field.format(v))).collect();
                    pt.insert(chart.coords[last].clone(), field.format(c));
                    out.push(pt);
                }
            }
        }
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < els.len() {
                break;
            }
            *slot = 0;
        }
    }
    out.sort();
    Ok(out)
}

fn format_map(p: &BTreeMap<String, String>) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",")
}

pub fn compare_chart_singular<F: Field>(chart: &ChartMap, equation: &SparsePoly<F>) -> Result<OracleComparison, OracleError> {
    let field = equation.field();
    let report = hypersurface_smooth_on_chart(chart, equation)?;
    let mut brute: Vec<String> = brute_force_chart_singular(chart, equation)?.iter().map(format_map).collect();
    brute.sort();
    let (elim, agree, note) = match report.rational_points {
        Some(pts) => {
            let mut elim: Vec<String> = pts.iter().map(format_map).collect();
            elim.sort();
            let agree = elim == brute;
            (elim, agree, None)
        }
        None => (Vec::new(), false, Some(format!("decider did not enumerate points: {:?}", report.status))),
    };
    Ok(OracleComparison {
        name: format!("singular {}", chart.id),
        field: field.name(),
        elimination: elim,
        brute_force: brute,
        agree,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxtoric::{chart_atlas, make_p, make_q, x_equation, z_equation};
    use crate::exactfield::gf_make_field;
    use crate::polyring::parse_poly;

    const A2: &str = "w0^4 + w0^2*w1^2 + w0*w1^3 + w1^4";

    #[test]
    fn crf_oracle_agrees() {
        for k in [3, 6] {
            let f = gf_make_field(k).unwrap();
            let c = compare_crf(&f).unwrap();
            assert!(c.agree);
            assert_eq!(c.brute_force.len(), 7);
        }
        // without seventh roots of unity only (1:1:1) survives
        for k in [1, 2] {
            let f = gf_make_field(k).unwrap();
            let pts = brute_force_crf(&f).unwrap();
            assert_eq!(pts, vec![[f.one(), f.one(), f.one()]]);
        }
    }

    #[test]
    fn chart_oracle_agrees_over_f8() {
        let f = gf_make_field(3).unwrap();
        let a = parse_poly(&f, &var_list(&["w0", "w1"]), A2).unwrap();
        let p = make_p(2).unwrap();
        let x = x_equation(&a, 2).unwrap();
        let mut total = 0;
        for chart in chart_atlas(&p).unwrap().iter().filter(|c| !c.is_quotient()) {
            let c = compare_chart_singular(chart, &x).unwrap();
            assert!(c.agree, "{}: {:?} vs {:?}", chart.id, c.elimination, c.brute_force);
            total += c.brute_force.len();
        }
        assert!(total > 0);
        let q = make_q(2).unwrap();
        let z = z_equation(&a, 2).unwrap();
        for chart in chart_atlas(&q).unwrap().iter().filter(|c| !c.is_quotient()) {
            let c = compare_chart_singular(chart, &z).unwrap();
            assert!(c.agree && c.brute_force.is_empty(), "{}", chart.id);
        }
    }

    #[test]
    fn chart_oracle_agrees_over_f64() {
        let f = gf_make_field(6).unwrap();
        let a = parse_poly(&f, &var_list(&["w0", "w1"]), A2).unwrap();
        let p = make_p(2).unwrap();
        let x = x_equation(&a, 2).unwrap();
        let chart = chart_atlas(&p).unwrap().into_iter().find(|c| c.id == "U(w0,x0)").unwrap();
        let c = compare_chart_singular(&chart, &x).unwrap();
        assert!(c.agree);
        assert_eq!(c.brute_force.len(), 7);
    }
}
