//! Dense univariate polynomials over an exact field.
//!
//! Besides the usual Euclidean toolkit this module factors polynomials over
//! finite fields of characteristic 2 (squarefree decomposition, distinct
//! degree splitting, then trace-based equal degree splitting). Factor lists
//! are sorted, so results do not depend on the internal random choices.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactfield::Field;

#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly<F: Field> {
    field: F,
    /// Coefficients from low to high degree, no trailing zeros.
    coeffs: Vec<F::Elem>,
}

impl<F: Field> UniPoly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &F) -> Self {
        UniPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    /// The polynomial `x`.
    pub fn x(field: &F) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    /// `x - c`.
    pub fn linear(field: &F, c: &F::Elem) -> Self {
        Self::new(field, vec![field.neg(c), field.one()])
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coeff(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(&self.coeff(i), &other.coeff(i))).collect();
        Self::new(f, coeffs)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Self::new(f, out)
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => self.scale(&self.field.inv(lc).expect("leading coefficient is nonzero")),
        }
    }

    /// Euclidean division. Panics when `divisor` is zero.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        let f = &self.field;
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = f.inv(divisor.leading_coeff().unwrap()).unwrap();
        let mut rem = self.coeffs.clone();
        let Some(d) = self.degree() else {
            return (Self::zero(f), Self::zero(f));
        };
        if d < dd {
            return (Self::zero(f), self.clone());
        }
        let mut quot = vec![f.zero(); d - dd + 1];
        for i in (dd..=d).rev() {
            let c = f.mul(&rem[i], &lc_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i - dd + j] = f.sub(&rem[i - dd + j], &f.mul(&c, b));
            }
            quot[i - dd] = c;
        }
        rem.truncate(dd);
        (Self::new(f, quot), Self::new(f, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divrem(divisor).1
    }

    /// Quotient of an exact division; `None` when the remainder is nonzero.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.divrem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s)` with `g = gcd(self, m)` monic and `s * self = g (mod m)`.
    pub fn gcd_with_cofactor(&self, m: &Self) -> (Self, Self) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), m.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        match r0.leading_coeff() {
            None => (r0, s0),
            Some(lc) => {
                let inv = f.inv(lc).unwrap();
                (r0.scale(&inv), s0.scale(&inv))
            }
        }
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| f.mul(&f.from_int(i as i64), c)).collect();
        Self::new(f, coeffs)
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn map<G: Field>(&self, target: &G, phi: impl Fn(&F::Elem) -> G::Elem) -> UniPoly<G> {
        UniPoly::new(target, self.coeffs.iter().map(phi).collect())
    }

    /// Coefficients of `self(x + c)`, i.e. the Taylor expansion at `c`.
    pub fn shift(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        let x_plus_c = Self::new(f, vec![c.clone(), f.one()]);
        self.coeffs.iter().rev().fold(Self::zero(f), |acc, a| acc.mul(&x_plus_c).add(&Self::constant(f, a.clone())))
    }

    pub fn mulmod(&self, other: &Self, m: &Self) -> Self {
        self.mul(other).rem(m)
    }

    /// `self^(2^times) mod m`.
    pub fn frobenius_mod(&self, times: u32, m: &Self) -> Self {
        let mut x = self.rem(m);
        for _ in 0..times {
            x = x.mulmod(&x, m);
        }
        x
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Writes the polynomial in variable `var`, highest degree first.
    pub fn format(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if f.is_zero(c) {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let coeff = f.format(c);
            parts.push(match (mono.is_empty(), f.is_one(c)) {
                (true, _) => wrap_coefficient(&coeff),
                (false, true) => mono,
                (false, false) => format!("{}*{mono}", wrap_coefficient(&coeff)),
            });
        }
        parts.join(" + ")
    }

    fn random_below(field: &F, degree: usize, rng: &mut ChaCha8Rng) -> Self {
        Self::new(field, (0..degree).map(|_| field.random(rng)).collect())
    }
}

/// Parenthesizes a printed coefficient unless it is a plain decimal integer.
pub(crate) fn wrap_coefficient(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_digit()) {
        s.to_string()
    } else {
        format!("({s})")
    }
}

/// Squarefree decomposition `p = lc * prod g_i^{m_i}` with monic, pairwise
/// coprime, squarefree `g_i`. Supported in characteristic 0 and for finite
/// fields of characteristic 2.
pub fn squarefree_decomposition<F: Field>(p: &UniPoly<F>) -> Vec<(UniPoly<F>, u32)> {
    let mut out = Vec::new();
    if p.is_constant() {
        return out;
    }
    sqf_rec(&p.monic(), 1, &mut out);
    out.sort_by(|a, b| (a.1, a.0.coeffs.len(), &a.0.coeffs).cmp(&(b.1, b.0.coeffs.len(), &b.0.coeffs)));
    out
}

fn sqf_rec<F: Field>(f: &UniPoly<F>, scale: u32, out: &mut Vec<(UniPoly<F>, u32)>) {
    let field = f.field().clone();
    let d = f.derivative();
    if d.is_zero() {
        if f.is_constant() {
            return;
        }
        let root = char2_square_root(f);
        sqf_rec(&root, scale * 2, out);
        return;
    }
    let mut c = f.gcd(&d);
    let mut w = f.exact_div(&c).unwrap();
    let mut i = 1;
    while !w.is_constant() {
        let y = w.gcd(&c);
        let z = w.exact_div(&y).unwrap();
        if !z.is_constant() {
            out.push((z.monic(), i * scale));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w).unwrap();
    }
    if !c.is_constant() {
        assert_eq!(field.characteristic(), 2, "residual p-th power outside characteristic 2");
        let root = char2_square_root(&c);
        sqf_rec(&root, scale * 2, out);
    }
}

/// The polynomial `r` with `r^2 = p`, for `p` a polynomial in `x^2` over a
/// finite field of characteristic 2.
fn char2_square_root<F: Field>(p: &UniPoly<F>) -> UniPoly<F> {
    let f = p.field();
    let coeffs = p
        .coeffs()
        .iter()
        .step_by(2)
        .map(|c| f.sqrt_char2(c).expect("square roots need a finite field of characteristic 2"))
        .collect();
    UniPoly::new(f, coeffs)
}

/// Complete factorization into monic irreducibles with multiplicities.
///
/// Returns `None` for fields without a factorization routine (the
/// rationals). The leading coefficient is dropped.
pub fn factor<F: Field>(p: &UniPoly<F>) -> Option<Vec<(UniPoly<F>, u32)>> {
    let field = p.field();
    let log2q = field.log2_size()?;
    if field.characteristic() != 2 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x0d1f_fe7e);
    let mut out = Vec::new();
    for (g, mult) in squarefree_decomposition(p) {
        for (block, degree) in distinct_degree(&g, log2q) {
            for irreducible in equal_degree(&block, degree, log2q, &mut rng) {
                out.push((irreducible, mult));
            }
        }
    }
    out.sort_by(|a, b| (a.0.coeffs.len(), &a.0.coeffs, a.1).cmp(&(b.0.coeffs.len(), &b.0.coeffs, b.1)));
    Some(out)
}

/// Distinct roots lying in the coefficient field, sorted.
pub fn roots<F: Field>(p: &UniPoly<F>) -> Option<Vec<F::Elem>> {
    let field = p.field();
    let mut out: Vec<F::Elem> = factor(p)?
        .into_iter()
        .filter(|(g, _)| g.degree() == Some(1))
        .map(|(g, _)| field.neg(&g.coeffs[0]))
        .collect();
    out.sort();
    Some(out)
}

fn distinct_degree<F: Field>(g: &UniPoly<F>, log2q: u32) -> Vec<(UniPoly<F>, usize)> {
    let field = g.field();
    let mut out = Vec::new();
    let mut rest = g.monic();
    let x = UniPoly::x(field);
    let mut h = x.clone();
    let mut i = 1;
    while rest.degree().unwrap_or(0) >= 2 * i {
        h = h.frobenius_mod(log2q, &rest);
        let d = rest.gcd(&h.sub(&x));
        if !d.is_constant() {
            rest = rest.exact_div(&d).unwrap();
            h = h.rem(&rest);
            out.push((d, i));
        }
        i += 1;
    }
    if let Some(deg) = rest.degree().filter(|&d| d > 0) {
        out.push((rest, deg));
    }
    out
}

fn equal_degree<F: Field>(g: &UniPoly<F>, degree: usize, log2q: u32, rng: &mut ChaCha8Rng) -> Vec<UniPoly<F>> {
    let n = g.degree().unwrap();
    if n == degree {
        return vec![g.monic()];
    }
    let field = g.field();
    let trace_len = log2q * degree as u32;
    loop {
        let h = UniPoly::random_below(field, n, rng);
        if h.is_constant() {
            continue;
        }
        let mut acc = h.clone();
        let mut trace = h.clone();
        for _ in 1..trace_len {
            acc = acc.mulmod(&acc, g);
            trace = trace.add(&acc);
        }
        let u = g.gcd(&trace);
        if !u.is_constant() && u.degree() != g.degree() {
            let v = g.exact_div(&u).unwrap();
            let mut out = equal_degree(&u, degree, log2q, rng);
            out.extend(equal_degree(&v, degree, log2q, rng));
            return out;
        }
    }
}
