use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::sparse::SparsePoly;
use super::PolyError;
use crate::exactfield::Field;

/// Monomial with integer exponents over a named variable list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentMonomial {
    pub vars: Vec<String>,
    pub exps: Vec<i64>,
}

impl LaurentMonomial {
    pub fn new(vars: &[String], exps: Vec<i64>) -> Self {
        assert_eq!(vars.len(), exps.len(), "exponent vector length");
        LaurentMonomial { vars: vars.to_vec(), exps }
    }

    pub fn one(vars: &[String]) -> Self {
        Self::new(vars, vec![0; vars.len()])
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "variable lists differ");
        Self::new(&self.vars, self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect())
    }

    pub fn pow(&self, k: i64) -> Self {
        Self::new(&self.vars, self.exps.iter().map(|e| e * k).collect())
    }

    pub fn is_polynomial(&self) -> bool {
        self.exps.iter().all(|&e| e >= 0)
    }

    pub fn format(&self) -> String {
        let parts: Vec<String> = self
            .vars
            .iter()
            .zip(&self.exps)
            .filter(|(_, &e)| e != 0)
            .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Finite sum of Laurent monomials with field coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly<F: Field> {
    field: F,
    vars: Arc<[String]>,
    terms: BTreeMap<Vec<i64>, F::Elem>,
}

impl<F: Field> LaurentPoly<F> {
    pub fn zero(field: &F, vars: &Arc<[String]>) -> Self {
        LaurentPoly { field: field.clone(), vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn monomial(field: &F, vars: &Arc<[String]>, c: F::Elem, exps: Vec<i64>) -> Self {
        let mut p = Self::zero(field, vars);
        p.add_term(exps, c);
        p
    }

    pub fn constant(field: &F, vars: &Arc<[String]>, c: F::Elem) -> Self {
        Self::monomial(field, vars, c, vec![0; vars.len()])
    }

    pub fn one(field: &F, vars: &Arc<[String]>) -> Self {
        Self::constant(field, vars, field.one())
    }

    pub fn from_poly(p: &SparsePoly<F>) -> Self {
        let mut out = Self::zero(p.field(), p.vars());
        for (e, c) in p.terms() {
            out.add_term(e.iter().map(|&k| k as i64).collect(), c.clone());
        }
        out
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, F::Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<i64>, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        let f = &self.field;
        match self.terms.remove(&e) {
            Some(old) => {
                let s = f.add(&old, &c);
                if !f.is_zero(&s) {
                    self.terms.insert(e, s);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "variable lists differ");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(&self.field, &self.vars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), self.field.neg(c));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "variable lists differ");
        let f = &self.field;
        let mut out = Self::zero(f, &self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1.iter().zip(e2).map(|(a, b)| a + b).collect(), f.mul(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(&self.field, &self.vars), |acc, _| acc.mul(self))
    }

    /// Formal derivative; `d(v^e) = e v^(e-1)` for every integer `e`.
    pub fn derivative(&self, i: usize) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, &self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, f.mul(&f.from_int(e[i]), c));
        }
        out
    }

    /// The polynomial, if no negative exponent survives.
    pub fn to_poly(&self) -> Result<SparsePoly<F>, PolyError> {
        for e in self.terms.keys() {
            if let Some(i) = e.iter().position(|&k| k < 0) {
                return Err(PolyError::NegativeExponent { var: self.vars[i].clone(), exponent: e[i] });
            }
        }
        Ok(SparsePoly::from_terms(&self.field, &self.vars, self.terms.iter().map(|(e, c)| (e.iter().map(|&k| k as u32).collect(), c.clone()))))
    }
}
