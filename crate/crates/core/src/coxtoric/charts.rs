use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{AmbientSpec, CoxError, Family};
use crate::exactfield::Field;
use crate::polyring::{Assignment, LaurentMonomial, SparsePoly};

/// `coord^denom = prod cox_var^cox_exps`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordDef {
    pub coord: String,
    pub denom: i64,
    pub cox_exps: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuotientTag {
    Trivial,
    /// `mu_order` acting on the chart coordinates with the given weights.
    Cyclic { order: u32, weights: Vec<u32> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordRole {
    Base,
    Plane,
    Fiber,
}

/// An affine chart `(u1 != 0) ∩ ... ` of a toric ambient, one inverted
/// variable per irrelevant block.
///
/// Chart coordinates reuse the names of the Cox variables they come from.
/// Restriction sends inverted variables to 1 and every other Cox variable to
/// its coordinate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartMap {
    pub id: String,
    pub ambient: String,
    pub cox_vars: Vec<String>,
    pub inverted: Vec<String>,
    pub coords: Vec<String>,
    pub roles: Vec<CoordRole>,
    pub defs: Vec<CoordDef>,
    pub substitution: BTreeMap<String, LaurentMonomial>,
    pub quotient: QuotientTag,
}

impl ChartMap {
    pub fn coord_vars(&self) -> Arc<[String]> {
        self.coords.iter().cloned().collect()
    }

    pub fn is_quotient(&self) -> bool {
        !matches!(self.quotient, QuotientTag::Trivial)
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    pub fn coords_with_role(&self, role: CoordRole) -> Vec<usize> {
        (0..self.coords.len()).filter(|&i| self.roles[i] == role).collect()
    }

    /// Dehomogenizes a Cox polynomial to the chart.
    pub fn restrict<F: Field>(&self, p: &SparsePoly<F>) -> Result<SparsePoly<F>, CoxError> {
        let cox: Arc<[String]> = self.cox_vars.iter().cloned().collect();
        let p = p.with_vars(&cox)?;
        let f = p.field();
        let assignment: BTreeMap<String, Assignment<F>> =
            self.substitution.iter().map(|(v, m)| (v.clone(), Assignment::Monomial(f.one(), m.exps.clone()))).collect();
        Ok(p.substitute(&assignment, &self.coord_vars())?)
    }

    /// Image of a Cox Laurent monomial; inverted variables disappear.
    pub fn restrict_monomial(&self, cox_exps: &[i64]) -> LaurentMonomial {
        let mut out = LaurentMonomial::one(&self.coords);
        for (v, &e) in self.cox_vars.iter().zip(cox_exps) {
            out = out.mul(&self.substitution[v].pow(e));
        }
        out
    }

    /// Cox exponents of a monomial in the chart coordinates, using the
    /// coordinate definitions; `None` if the exponents are not integral.
    pub fn expand_coordinates(&self, coord_exps: &[i64]) -> Option<Vec<i64>> {
        let lcm = self.defs.iter().fold(1i64, |acc, d| acc.lcm(&d.denom));
        let mut acc = vec![0i64; self.cox_vars.len()];
        for (d, &e) in self.defs.iter().zip(coord_exps) {
            for (a, &k) in acc.iter_mut().zip(&d.cox_exps) {
                *a += e * k * (lcm / d.denom);
            }
        }
        acc.iter().map(|&a| (a % lcm == 0).then_some(a / lcm)).collect()
    }
}

/// All standard charts: one inverted variable from each irrelevant block.
pub fn chart_atlas(spec: &AmbientSpec) -> Result<Vec<ChartMap>, CoxError> {
    let mut out = Vec::new();
    match spec.family {
        Family::P | Family::Q => {
            for i in &spec.irrelevant[0] {
                for j in &spec.irrelevant[1] {
                    out.push(make_chart(spec, &[i.clone(), j.clone()])?);
                }
            }
        }
        Family::T => {
            for u in &spec.irrelevant[0] {
                out.push(make_chart(spec, std::slice::from_ref(u))?);
            }
        }
    }
    Ok(out)
}

fn make_chart(spec: &AmbientSpec, inverted: &[String]) -> Result<ChartMap, CoxError> {
    let idx: Vec<usize> = inverted.iter().map(|v| spec.var_index(v).unwrap()).collect();
    let rank = spec.rank();
    // Columns of the inverted variables, as a rank x rank matrix.
    let col = |i: usize| -> Vec<i64> { spec.weights.iter().map(|row| row[i]).collect() };
    let m: Vec<Vec<i64>> = idx.iter().map(|&i| col(i)).collect();
    let (det, adj) = match rank {
        1 => (m[0][0], vec![vec![1]]),
        2 => {
            // m[k] is the k-th column; entries m[col][row].
            let det = m[0][0] * m[1][1] - m[1][0] * m[0][1];
            (det, vec![vec![m[1][1], -m[1][0]], vec![-m[0][1], m[0][0]]])
        }
        _ => return Err(CoxError::Unsupported(spec.name.clone())),
    };
    if det == 0 {
        return Err(CoxError::Unsupported(format!("{}: singular chart matrix", spec.name)));
    }
    let order = det.unsigned_abs() as i64;
    let sign = det.signum();
    let coords: Vec<String> = spec.vars.iter().filter(|v| !inverted.contains(v)).cloned().collect();
    let mut defs = Vec::new();
    let mut substitution = BTreeMap::new();
    let mut roles = Vec::new();
    let mut weights = Vec::new();
    for (vi, v) in spec.vars.iter().enumerate() {
        if inverted.contains(v) {
            substitution.insert(v.clone(), LaurentMonomial::one(&coords));
            continue;
        }
        let c = col(vi);
        // order * lambda = sign * adj * c, so coord^order = v^order * prod u^(-order*lambda_u).
        let scaled: Vec<i64> = adj.iter().map(|row| sign * row.iter().zip(&c).map(|(a, b)| a * b).sum::<i64>()).collect();
        let mut exps = vec![0i64; spec.vars.len()];
        exps[vi] = order;
        for (k, &u) in idx.iter().enumerate() {
            exps[u] -= scaled[k];
        }
        let g = exps.iter().fold(order, |acc, &e| acc.gcd(&e));
        defs.push(CoordDef { coord: v.clone(), denom: order / g, cox_exps: exps.iter().map(|e| e / g).collect() });
        let ci = coords.iter().position(|x| x == v).unwrap();
        let mut unit = vec![0; coords.len()];
        unit[ci] = 1;
        substitution.insert(v.clone(), LaurentMonomial::new(&coords, unit));
        roles.push(role_of(spec, v));
        // Stabilizer of the inverted variables acts through the H-grading.
        let h = *spec.weights.last().unwrap().get(vi).unwrap();
        weights.push(h.rem_euclid(order) as u32);
    }
    let quotient = if order == 1 { QuotientTag::Trivial } else { QuotientTag::Cyclic { order: order as u32, weights } };
    Ok(ChartMap {
        id: format!("U({})", inverted.join(",")),
        ambient: spec.name.clone(),
        cox_vars: spec.vars.clone(),
        inverted: inverted.to_vec(),
        coords,
        roles,
        defs,
        substitution,
        quotient,
    })
}

fn role_of(spec: &AmbientSpec, v: &str) -> CoordRole {
    if spec.family != Family::T && spec.irrelevant[0].iter().any(|b| b == v) {
        CoordRole::Base
    } else if v.starts_with('x') {
        CoordRole::Plane
    } else {
        CoordRole::Fiber
    }
}
