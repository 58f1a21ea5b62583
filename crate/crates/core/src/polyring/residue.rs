use std::sync::Arc;

use rand::RngCore;

use super::univariate::UniPoly;
use crate::exactfield::{Field, FieldError};

/// The extension `F[s]/(m)` for a monic irreducible `m`.
///
/// Closed points of a variety over `F` live in such fields. Elements are
/// reduced coefficient vectors (low degree first, no trailing zeros), so
/// structural equality is field equality. Irreducibility of the modulus is
/// the caller's responsibility; with a reducible modulus `inv` may fail.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueField<F: Field> {
    base: F,
    modulus: Arc<UniPoly<F>>,
}

impl<F: Field> ResidueField<F> {
    pub fn new(modulus: &UniPoly<F>) -> Self {
        assert!(modulus.degree().unwrap_or(0) >= 1, "residue modulus must be nonconstant");
        ResidueField { base: modulus.field().clone(), modulus: Arc::new(modulus.monic()) }
    }

    pub fn base(&self) -> &F {
        &self.base
    }

    pub fn modulus(&self) -> &UniPoly<F> {
        &self.modulus
    }

    /// Degree of the extension over the base field.
    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn embed(&self, a: &F::Elem) -> Vec<F::Elem> {
        self.reduce(UniPoly::constant(&self.base, a.clone()))
    }

    /// Class of the polynomial variable `s`, a root of the modulus.
    pub fn generator(&self) -> Vec<F::Elem> {
        self.reduce(UniPoly::x(&self.base))
    }

    pub fn from_poly(&self, p: &UniPoly<F>) -> Vec<F::Elem> {
        self.reduce(p.clone())
    }

    pub fn to_poly(&self, a: &[F::Elem]) -> UniPoly<F> {
        UniPoly::new(&self.base, a.to_vec())
    }

    /// `Some(c)` when the element lies in the base field.
    pub fn as_base(&self, a: &[F::Elem]) -> Option<F::Elem> {
        match a.len() {
            0 => Some(self.base.zero()),
            1 => Some(a[0].clone()),
            _ => None,
        }
    }

    fn reduce(&self, p: UniPoly<F>) -> Vec<F::Elem> {
        p.rem(&self.modulus).coeffs().to_vec()
    }
}

impl<F: Field> Field for ResidueField<F> {
    type Elem = Vec<F::Elem>;

    fn zero(&self) -> Self::Elem {
        Vec::new()
    }

    fn one(&self) -> Self::Elem {
        self.embed(&self.base.one())
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.to_poly(a).add(&self.to_poly(b)).coeffs().to_vec()
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.to_poly(a).neg().coeffs().to_vec()
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.reduce(self.to_poly(a).mul(&self.to_poly(b)))
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem, FieldError> {
        if a.is_empty() {
            return Err(FieldError::DivisionByZero);
        }
        let (g, s) = self.to_poly(a).gcd_with_cofactor(&self.modulus);
        if g.degree() != Some(0) {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.reduce(s))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }

    fn from_int(&self, n: i64) -> Self::Elem {
        self.embed(&self.base.from_int(n))
    }

    fn characteristic(&self) -> u32 {
        self.base.characteristic()
    }

    fn log2_size(&self) -> Option<u32> {
        self.base.log2_size().map(|d| d * self.degree() as u32)
    }

    fn random(&self, rng: &mut dyn RngCore) -> Self::Elem {
        let cs = (0..self.degree()).map(|_| self.base.random(rng)).collect();
        self.reduce(UniPoly::new(&self.base, cs))
    }

    /// Polynomial in the generator `s` with bracketed base coefficients.
    fn format(&self, a: &Self::Elem) -> String {
        if a.is_empty() {
            return "0".to_string();
        }
        let parts: Vec<String> = a
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !self.base.is_zero(c))
            .map(|(i, c)| match i {
                0 => format!("[{}]", self.base.format(c)),
                1 => format!("[{}]s", self.base.format(c)),
                _ => format!("[{}]s^{i}", self.base.format(c)),
            })
            .collect();
        parts.join("+")
    }

    fn parse(&self, s: &str) -> Result<Self::Elem, FieldError> {
        // Only base-field constants are accepted; extension elements are
        // produced by computation, not typed in.
        Ok(self.embed(&self.base.parse(s)?))
    }

    fn name(&self) -> String {
        format!("{}[s]/({})", self.base.name(), self.modulus.format("s"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::gf_make_field;
    use proptest::prelude::*;

    #[test]
    fn gf4_as_extension_of_gf2() {
        let f2 = gf_make_field(1).unwrap();
        let m = UniPoly::new(&f2, vec![f2.one(), f2.one(), f2.one()]);
        let k = ResidueField::new(&m);
        assert_eq!(k.log2_size(), Some(2));
        let s = k.generator();
        // s^2 = s + 1, s^3 = 1
        assert_eq!(k.square(&s), k.add(&s, &k.one()));
        assert_eq!(k.pow(&s, 3), k.one());
        assert_eq!(k.mul(&s, &k.inv(&s).unwrap()), k.one());
        assert_eq!(k.sqrt_char2(&k.square(&s)), Some(s));
    }

    #[test]
    fn tower_over_gf8() {
        // Degree-two extension of GF(8) given by s^2 + s + t.
        let f8 = gf_make_field(3).unwrap();
        let m = UniPoly::new(&f8, vec![f8.element(2), f8.one(), f8.one()]);
        let k = ResidueField::new(&m);
        let s = k.generator();
        let q = 1u64 << k.log2_size().unwrap();
        assert_eq!(k.pow(&s, q - 1), k.one());
    }

    proptest! {
        #[test]
        fn inverse_in_gf256_over_gf16(a in proptest::collection::vec(0u64..16, 0..2)) {
            let f16 = gf_make_field(4).unwrap();
            // s^2 + s + t^3 has no root in GF(16): checked by exhaustion in the assertion.
            let m = UniPoly::new(&f16, vec![f16.element(8), f16.one(), f16.one()]);
            prop_assert!(super::super::univariate::roots(&m).unwrap().is_empty());
            let k = ResidueField::new(&m);
            let x = k.from_poly(&UniPoly::new(&f16, a.iter().map(|&b| f16.element(b)).collect()));
            if !k.is_zero(&x) {
                prop_assert_eq!(k.mul(&x, &k.inv(&x).unwrap()), k.one());
            }
        }
    }
}
