use rand::RngCore;

use super::{Field, FieldError};

/// Modulus used for GF(2^k), indexed by `k - 1`, as a bit pattern with bit `i`
/// holding the coefficient of `t^i`.
///
/// Entry `k` is the numerically smallest irreducible polynomial of degree `k`
/// over GF(2) other than `t` itself. The table is frozen: changing an entry
/// changes every printed element of that field.
pub const MODULUS_TABLE: [u64; 32] = [
    0x3,           // t + 1
    0x7,           // t^2 + t + 1
    0xb,           // t^3 + t + 1
    0x13,          // t^4 + t + 1
    0x25,          // t^5 + t^2 + 1
    0x43,          // t^6 + t + 1
    0x83,          // t^7 + t + 1
    0x11b,         // t^8 + t^4 + t^3 + t + 1
    0x203,         // t^9 + t + 1
    0x409,         // t^10 + t^3 + 1
    0x805,         // t^11 + t^2 + 1
    0x1009,        // t^12 + t^3 + 1
    0x201b,        // t^13 + t^4 + t^3 + t + 1
    0x4021,        // t^14 + t^5 + 1
    0x8003,        // t^15 + t + 1
    0x1002b,       // t^16 + t^5 + t^3 + t + 1
    0x20009,       // t^17 + t^3 + 1
    0x40009,       // t^18 + t^3 + 1
    0x80027,       // t^19 + t^5 + t^2 + t + 1
    0x100009,      // t^20 + t^3 + 1
    0x200005,      // t^21 + t^2 + 1
    0x400003,      // t^22 + t + 1
    0x800021,      // t^23 + t^5 + 1
    0x100001b,     // t^24 + t^4 + t^3 + t + 1
    0x2000009,     // t^25 + t^3 + 1
    0x400001b,     // t^26 + t^4 + t^3 + t + 1
    0x8000027,     // t^27 + t^5 + t^2 + t + 1
    0x10000003,    // t^28 + t + 1
    0x20000005,    // t^29 + t^2 + 1
    0x40000003,    // t^30 + t + 1
    0x80000009,    // t^31 + t^3 + 1
    0x10000008d,   // t^32 + t^7 + t^3 + t^2 + 1
];

/// GF(2^k) in the polynomial basis `1, t, ..., t^(k-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GfField {
    k: u32,
    modulus: u64,
}

/// Bit-vector of length `k`; bit `i` is the coefficient of `t^i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GfElem(pub u32);

pub fn gf_make_field(k: u32) -> Result<GfField, FieldError> {
    if !(1..=32).contains(&k) {
        return Err(FieldError::DegreeOutOfRange(k));
    }
    Ok(GfField { k, modulus: MODULUS_TABLE[k as usize - 1] })
}

/// An element of exact multiplicative order `r`.
///
/// The result is `g^((2^k - 1) / r)` where `g` is the first multiplicative
/// generator found by scanning elements in increasing bit order.
pub fn gf_primitive_root_of_unity(field: &GfField, r: u64) -> Result<GfElem, FieldError> {
    let order = field.order_of_group();
    if r == 0 || !order.is_multiple_of(r) {
        return Err(FieldError::NoRootOfUnity { r, k: field.k });
    }
    let g = field.multiplicative_generator();
    Ok(field.pow(&g, order / r))
}

impl GfField {
    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn modulus_bits(&self) -> u64 {
        self.modulus
    }

    pub fn size(&self) -> u64 {
        1u64 << self.k
    }

    fn order_of_group(&self) -> u64 {
        (1u64 << self.k) - 1
    }

    fn mask(&self) -> u64 {
        (1u64 << self.k) - 1
    }

    /// Modulus printed as a polynomial in `t`.
    pub fn modulus_string(&self) -> String {
        format_bits(self.modulus)
    }

    pub fn element(&self, bits: u64) -> GfElem {
        GfElem(self.reduce(bits as u128))
    }

    /// The class of `t`.
    pub fn generator_class(&self) -> GfElem {
        self.element(2)
    }

    fn reduce(&self, mut x: u128) -> u32 {
        let k = self.k;
        let m = self.modulus as u128;
        while x >> k != 0 {
            let top = 127 - x.leading_zeros();
            x ^= m << (top - k);
        }
        x as u32
    }

    /// First element (in bit order) generating the multiplicative group.
    pub fn multiplicative_generator(&self) -> GfElem {
        let order = self.order_of_group();
        if order == 1 {
            return self.one();
        }
        let primes = prime_factors(order);
        (2..=self.mask())
            .map(|b| GfElem(b as u32))
            .find(|g| primes.iter().all(|p| !self.is_one(&self.pow(g, order / p))))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: &GfElem) -> Option<u64> {
        if self.is_zero(a) {
            return None;
        }
        let mut order = self.order_of_group();
        for p in prime_factors(order) {
            while order.is_multiple_of(p) && self.is_one(&self.pow(a, order / p)) {
                order /= p;
            }
        }
        Some(order)
    }

    /// The canonical embedding of `self` into `large`, sending `t` to the
    /// first root of this field's modulus in the power sequence of a
    /// generator of the subfield.
    pub fn embedding_into(&self, large: &GfField) -> Result<GfEmbedding, FieldError> {
        if !large.k.is_multiple_of(self.k) {
            return Err(FieldError::NoEmbedding { small: self.k, large: large.k });
        }
        if large.k == self.k {
            return Ok(GfEmbedding { small: *self, large: *large, image_of_t: self.generator_class() });
        }
        let sub_order = self.order_of_group();
        let h = large.pow(&large.multiplicative_generator(), large.order_of_group() / sub_order);
        let mut candidate = large.one();
        for _ in 0..sub_order {
            if large.is_zero(&large.eval_bits_poly(self.modulus, &candidate)) {
                return Ok(GfEmbedding { small: *self, large: *large, image_of_t: candidate });
            }
            candidate = large.mul(&candidate, &h);
        }
        Err(FieldError::NoEmbedding { small: self.k, large: large.k })
    }

    /// Evaluates a GF(2)-polynomial given as bits at `x`.
    fn eval_bits_poly(&self, bits: u64, x: &GfElem) -> GfElem {
        let mut acc = self.zero();
        for i in (0..64).rev() {
            acc = self.mul(&acc, x);
            if bits >> i & 1 == 1 {
                acc = self.add(&acc, &self.one());
            }
        }
        acc
    }
}

/// Ring embedding GF(2^k) -> GF(2^K) for `k | K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GfEmbedding {
    pub small: GfField,
    pub large: GfField,
    pub image_of_t: GfElem,
}

impl GfEmbedding {
    pub fn apply(&self, a: &GfElem) -> GfElem {
        let large = &self.large;
        let mut acc = large.zero();
        let mut power = large.one();
        for i in 0..self.small.k {
            if a.0 >> i & 1 == 1 {
                acc = large.add(&acc, &power);
            }
            power = large.mul(&power, &self.image_of_t);
        }
        acc
    }
}

impl Field for GfField {
    type Elem = GfElem;

    fn zero(&self) -> GfElem {
        GfElem(0)
    }

    fn one(&self) -> GfElem {
        GfElem(1)
    }

    fn add(&self, a: &GfElem, b: &GfElem) -> GfElem {
        GfElem(a.0 ^ b.0)
    }

    fn neg(&self, a: &GfElem) -> GfElem {
        *a
    }

    fn sub(&self, a: &GfElem, b: &GfElem) -> GfElem {
        GfElem(a.0 ^ b.0)
    }

    fn mul(&self, a: &GfElem, b: &GfElem) -> GfElem {
        let x = a.0 as u128;
        let mut y = b.0;
        let mut acc: u128 = 0;
        let mut shift = 0;
        while y != 0 {
            if y & 1 == 1 {
                acc ^= x << shift;
            }
            y >>= 1;
            shift += 1;
        }
        GfElem(self.reduce(acc))
    }

    fn inv(&self, a: &GfElem) -> Result<GfElem, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.order_of_group() - 1))
    }

    fn from_int(&self, n: i64) -> GfElem {
        GfElem((n.rem_euclid(2)) as u32)
    }

    fn characteristic(&self) -> u32 {
        2
    }

    fn log2_size(&self) -> Option<u32> {
        Some(self.k)
    }

    fn random(&self, rng: &mut dyn RngCore) -> GfElem {
        GfElem((rng.next_u64() & self.mask()) as u32)
    }

    fn format(&self, a: &GfElem) -> String {
        format_bits(a.0 as u64)
    }

    fn parse(&self, s: &str) -> Result<GfElem, FieldError> {
        let err = || FieldError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut bits: u64 = 0;
        for term in compact.split('+') {
            let degree = match term {
                "0" => continue,
                "1" => 0,
                "t" => 1,
                _ => term.strip_prefix("t^").and_then(|e| e.parse::<u32>().ok()).ok_or_else(err)?,
            };
            if degree >= self.k {
                return Err(err());
            }
            bits ^= 1 << degree;
        }
        Ok(GfElem(bits as u32))
    }

    fn name(&self) -> String {
        format!("GF(2^{})", self.k)
    }

    fn elements(&self) -> Option<Vec<GfElem>> {
        (self.k <= 20).then(|| (0..self.size()).map(|b| GfElem(b as u32)).collect())
    }
}

fn format_bits(bits: u64) -> String {
    if bits == 0 {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for i in (0..64).rev() {
        if bits >> i & 1 == 1 {
            parts.push(match i {
                0 => "1".to_string(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            });
        }
    }
    parts.join("+")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
