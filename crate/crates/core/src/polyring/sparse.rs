use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::laurent::LaurentPoly;
use super::univariate::{wrap_coefficient, UniPoly};
use super::PolyError;
use crate::exactfield::Field;

pub type Exponents = Vec<u32>;

/// Exact multivariate polynomial over `F`.
///
/// Terms live in a `BTreeMap` keyed by exponent vectors, so iteration is in
/// lexicographic order with respect to the variable list. Zero coefficients
/// are never stored.
#[derive(Clone, PartialEq)]
pub struct SparsePoly<F: Field> {
    field: F,
    vars: Arc<[String]>,
    terms: BTreeMap<Exponents, F::Elem>,
}

/// Image of a variable under [`SparsePoly::substitute`].
#[derive(Debug, Clone)]
pub enum Assignment<F: Field> {
    Poly(SparsePoly<F>),
    /// Laurent monomial `c * prod v_i^{e_i}` in the target variables.
    Monomial(F::Elem, Vec<i64>),
}

pub fn var_list(names: &[&str]) -> Arc<[String]> {
    names.iter().map(|s| s.to_string()).collect()
}

impl<F: Field> SparsePoly<F> {
    pub fn zero(field: &F, vars: &Arc<[String]>) -> Self {
        SparsePoly { field: field.clone(), vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(field: &F, vars: &Arc<[String]>, c: F::Elem) -> Self {
        Self::monomial(field, vars, c, vec![0; vars.len()])
    }

    pub fn one(field: &F, vars: &Arc<[String]>) -> Self {
        Self::constant(field, vars, field.one())
    }

    pub fn monomial(field: &F, vars: &Arc<[String]>, c: F::Elem, exps: Exponents) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut p = Self::zero(field, vars);
        if !field.is_zero(&c) {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn var(field: &F, vars: &Arc<[String]>, name: &str) -> Result<Self, PolyError> {
        let i = index_of(vars, name)?;
        Ok(Self::var_at(field, vars, i))
    }

    pub fn var_at(field: &F, vars: &Arc<[String]>, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(field, vars, field.one(), e)
    }

    pub fn from_terms(field: &F, vars: &Arc<[String]>, terms: impl IntoIterator<Item = (Exponents, F::Elem)>) -> Self {
        let mut p = Self::zero(field, vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn vars(&self) -> &Arc<[String]> {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        index_of(&self.vars, name)
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, F::Elem> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` if the polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<F::Elem> {
        match self.terms.len() {
            0 => Some(self.field.zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn coeff(&self, exps: &[u32]) -> F::Elem {
        self.terms.get(exps).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Indices of variables that actually occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect()
    }

    /// Leading term in lexicographic order.
    pub fn leading_term(&self) -> Option<(&Exponents, &F::Elem)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, e: Exponents, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = self.field.add(old, &c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.vars != other.vars {
            return Err(PolyError::VariableMismatch { left: self.vars.to_vec(), right: other.vars.to_vec() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let f = &self.field;
        let mut out = Self::zero(f, &self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, f.mul(c1, c2));
            }
        }
        Ok(out)
    }

    /// Sum; panics on mismatched variable lists (see [`Self::try_add`]).
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("variable lists differ")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product; panics on mismatched variable lists (see [`Self::try_mul`]).
    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("variable lists differ")
    }

    pub fn neg(&self) -> Self {
        self.map_terms(|c| self.field.neg(c))
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        self.map_terms(|c| self.field.mul(c, s))
    }

    fn map_terms(&self, g: impl Fn(&F::Elem) -> F::Elem) -> Self {
        Self::from_terms(&self.field, &self.vars, self.terms.iter().map(|(e, c)| (e.clone(), g(c))))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field, &self.vars);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn eval(&self, point: &[F::Elem]) -> Result<F::Elem, PolyError> {
        self.eval_in(&self.field.clone(), |c| c.clone(), point)
    }

    /// Evaluates at a point of an extension `G`, mapping coefficients with `embed`.
    pub fn eval_in<G: Field>(&self, g: &G, embed: impl Fn(&F::Elem) -> G::Elem, point: &[G::Elem]) -> Result<G::Elem, PolyError> {
        if point.len() != self.nvars() {
            return Err(PolyError::ArityMismatch { expected: self.nvars(), got: point.len() });
        }
        let mut acc = g.zero();
        for (e, c) in &self.terms {
            let mut t = embed(c);
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = g.mul(&t, &g.pow(x, k as u64));
                }
            }
            acc = g.add(&acc, &t);
        }
        Ok(acc)
    }

    pub fn partial(&self, var: &str) -> Result<Self, PolyError> {
        Ok(self.partial_at(self.var_index(var)?))
    }

    /// Formal derivative in the `i`-th variable; the exponent is multiplied in the field.
    pub fn partial_at(&self, i: usize) -> Self {
        let f = &self.field;
        Self::from_terms(
            f,
            &self.vars,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut e2 = e.clone();
                e2[i] -= 1;
                (e2, f.mul(&f.from_int(e[i] as i64), c))
            }),
        )
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars()).map(|i| self.partial_at(i)).collect()
    }

    pub fn map_coeffs<G: Field>(&self, g: &G, phi: impl Fn(&F::Elem) -> G::Elem) -> SparsePoly<G> {
        SparsePoly::from_terms(g, &self.vars, self.terms.iter().map(|(e, c)| (e.clone(), phi(c))))
    }

    /// Re-expresses the polynomial over another variable list containing
    /// every variable that occurs.
    pub fn with_vars(&self, vars: &Arc<[String]>) -> Result<Self, PolyError> {
        let mut pos = Vec::with_capacity(self.nvars());
        for (i, v) in self.vars.iter().enumerate() {
            match vars.iter().position(|w| w == v) {
                Some(j) => pos.push(Some(j)),
                None if self.degree_in(i).unwrap_or(0) == 0 => pos.push(None),
                None => return Err(PolyError::UnknownVariable(v.clone())),
            }
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e2 = vec![0; vars.len()];
            for (k, p) in e.iter().zip(&pos) {
                if let Some(j) = p {
                    e2[*j] += k;
                }
            }
            (e2, c.clone())
        });
        Ok(Self::from_terms(&self.field, vars, terms))
    }

    /// Substitutes variables by polynomials or Laurent monomials in
    /// `target_vars`. Unassigned variables must also occur in `target_vars`.
    pub fn substitute(&self, assignment: &BTreeMap<String, Assignment<F>>, target_vars: &Arc<[String]>) -> Result<Self, PolyError> {
        let lp = self.substitute_laurent(assignment, target_vars)?;
        lp.to_poly()
    }

    /// Like [`Self::substitute`] but keeps negative exponents.
    pub fn substitute_laurent(&self, assignment: &BTreeMap<String, Assignment<F>>, target_vars: &Arc<[String]>) -> Result<LaurentPoly<F>, PolyError> {
        let f = &self.field;
        for name in assignment.keys() {
            self.var_index(name)?;
        }
        let mut images: Vec<LaurentPoly<F>> = Vec::with_capacity(self.nvars());
        for name in self.vars.iter() {
            let img = match assignment.get(name) {
                Some(Assignment::Poly(p)) => {
                    if p.vars != *target_vars {
                        return Err(PolyError::VariableMismatch { left: p.vars.to_vec(), right: target_vars.to_vec() });
                    }
                    LaurentPoly::from_poly(p)
                }
                Some(Assignment::Monomial(c, e)) => {
                    if e.len() != target_vars.len() {
                        return Err(PolyError::ArityMismatch { expected: target_vars.len(), got: e.len() });
                    }
                    LaurentPoly::monomial(f, target_vars, c.clone(), e.clone())
                }
                None => match target_vars.iter().position(|v| v == name) {
                    Some(j) => {
                        let mut e = vec![0; target_vars.len()];
                        e[j] = 1;
                        LaurentPoly::monomial(f, target_vars, f.one(), e)
                    }
                    None if self.degree_in(images.len()).unwrap_or(0) == 0 => LaurentPoly::zero(f, target_vars),
                    None => return Err(PolyError::UnknownVariable(name.clone())),
                },
            };
            images.push(img);
        }
        let mut out = LaurentPoly::zero(f, target_vars);
        // Cache powers per variable; exponents here are small.
        let mut powers: Vec<Vec<LaurentPoly<F>>> = images.iter().map(|im| vec![LaurentPoly::one(f, target_vars), im.clone()]).collect();
        for (e, c) in &self.terms {
            let mut t = LaurentPoly::constant(f, target_vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][k as usize]);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Polynomial `g` in the variables `local` with `self(x) = g(x - center)`,
    /// dropping terms of total degree above `order`.
    pub fn taylor_expand(&self, center: &[F::Elem], order: u32, local: &Arc<[String]>) -> Result<Self, PolyError> {
        if center.len() != self.nvars() {
            return Err(PolyError::ArityMismatch { expected: self.nvars(), got: center.len() });
        }
        if local.len() != self.nvars() {
            return Err(PolyError::ArityMismatch { expected: self.nvars(), got: local.len() });
        }
        let f = &self.field;
        let mut assignment = BTreeMap::new();
        for (i, (name, c)) in self.vars.iter().zip(center).enumerate() {
            let shifted = SparsePoly::var_at(f, local, i).add(&SparsePoly::constant(f, local, c.clone()));
            assignment.insert(name.clone(), Assignment::Poly(shifted));
        }
        let full = self.substitute(&assignment, local)?;
        Ok(full.truncate(order))
    }

    /// Drops terms of total degree above `order`.
    pub fn truncate(&self, order: u32) -> Self {
        Self::from_terms(&self.field, &self.vars, self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() <= order).map(|(e, c)| (e.clone(), c.clone())))
    }

    /// Part of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self::from_terms(&self.field, &self.vars, self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() == d).map(|(e, c)| (e.clone(), c.clone())))
    }

    /// Coefficients with respect to the `i`-th variable, lowest power first.
    /// The variable list is unchanged; the `i`-th exponent is zero in each.
    pub fn coefficients_in(&self, i: usize) -> Vec<Self> {
        let d = self.degree_in(i).unwrap_or(0) as usize;
        let mut out = vec![Self::zero(&self.field, &self.vars); d + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[i] as usize;
            e2[i] = 0;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    /// Converts a polynomial involving at most the `i`-th variable.
    pub fn to_univariate(&self, i: usize) -> Result<UniPoly<F>, PolyError> {
        let f = &self.field;
        let d = self.degree_in(i).unwrap_or(0) as usize;
        let mut cs = vec![f.zero(); d + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &k)| j != i && k > 0) {
                return Err(PolyError::NotUnivariate(self.vars[i].clone()));
            }
            cs[e[i] as usize] = c.clone();
        }
        Ok(UniPoly::new(f, cs))
    }

    pub fn from_univariate(p: &UniPoly<F>, vars: &Arc<[String]>, i: usize) -> Self {
        let f = p.field();
        Self::from_terms(
            f,
            vars,
            p.coeffs().iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; vars.len()];
                e[i] = k as u32;
                (e, c.clone())
            }),
        )
    }

    /// Specializes the listed variables to field values (others untouched).
    pub fn specialize(&self, values: &[(usize, F::Elem)]) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, &self.vars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let mut c2 = c.clone();
            for (i, v) in values {
                c2 = f.mul(&c2, &f.pow(v, e[*i] as u64));
                e2[*i] = 0;
            }
            out.add_term(e2, c2);
        }
        out
    }

    /// Specializes some variables to values in an extension field `G`.
    pub fn specialize_in<G: Field>(&self, g: &G, embed: impl Fn(&F::Elem) -> G::Elem, values: &[(usize, G::Elem)]) -> SparsePoly<G> {
        let mut out = SparsePoly::zero(g, &self.vars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let mut c2 = embed(c);
            for (i, v) in values {
                c2 = g.mul(&c2, &g.pow(v, e[*i] as u64));
                e2[*i] = 0;
            }
            out.add_term(e2, c2);
        }
        out
    }

    /// True when every term has the same weighted degree.
    pub fn is_homogeneous_wrt(&self, weights: &[i64]) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().zip(weights).map(|(&k, &w)| k as i64 * w).sum::<i64>());
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let f = &self.field;
        let (de, dc) = d.leading_term()?;
        let dinv = f.inv(dc).ok()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(f, &self.vars);
        while let Some((re, rc)) = rem.leading_term() {
            if re.iter().zip(de).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Exponents = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let qc = f.mul(rc, &dinv);
            let t = Self::monomial(f, &self.vars, qc, qe);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Canonical text form; see the module docs for the grammar.
    pub fn format(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .zip(self.vars.iter())
                    .filter(|(&k, _)| k > 0)
                    .map(|(&k, v)| if k == 1 { v.clone() } else { format!("{v}^{k}") })
                    .collect();
                let coeff = wrap_coefficient(&f.format(c));
                match (mono.is_empty(), f.is_one(c)) {
                    (true, _) => coeff,
                    (false, true) => mono.join("*"),
                    (false, false) => format!("{coeff}*{}", mono.join("*")),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl<F: Field> fmt::Display for SparsePoly<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(&self.format())
    }
}

impl<F: Field> fmt::Debug for SparsePoly<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "SparsePoly[{}]({})", self.vars.join(","), self.format())
    }
}

pub(crate) fn index_of(vars: &[String], name: &str) -> Result<usize, PolyError> {
    vars.iter().position(|v| v == name).ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
}
