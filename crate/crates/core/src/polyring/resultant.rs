use serde::Serialize;

use super::sparse::SparsePoly;
use super::univariate::UniPoly;
use super::PolyError;
use crate::exactfield::Field;

/// Resultant together with the data needed to interpret its zeros.
#[derive(Debug, Clone)]
pub struct Resultant<F: Field> {
    pub value: SparsePoly<F>,
    pub lc_p: SparsePoly<F>,
    pub lc_q: SparsePoly<F>,
    /// Present when both leading coefficients are nonconstant, so that
    /// `value` also vanishes where they vanish simultaneously without a
    /// common root.
    pub warning: Option<DegenerationWarning>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegenerationWarning {
    pub var: String,
    pub lc_p: String,
    pub lc_q: String,
}

/// Sylvester resultant of `p` and `q` with respect to `var`.
pub fn resultant<F: Field>(p: &SparsePoly<F>, q: &SparsePoly<F>, var: &str) -> Result<Resultant<F>, PolyError> {
    let i = p.var_index(var)?;
    if p.vars() != q.vars() {
        return Err(PolyError::VariableMismatch { left: p.vars().to_vec(), right: q.vars().to_vec() });
    }
    if p.is_zero() || q.is_zero() {
        return Err(PolyError::ZeroInput);
    }
    let cp = p.coefficients_in(i);
    let cq = q.coefficients_in(i);
    let (m, n) = (cp.len() - 1, cq.len() - 1);
    let lc_p = cp[m].clone();
    let lc_q = cq[n].clone();
    let warning = (!lc_p.is_constant() && !lc_q.is_constant()).then(|| DegenerationWarning { var: var.to_string(), lc_p: lc_p.format(), lc_q: lc_q.format() });
    let value = sylvester_det(&cp, &cq, p);
    Ok(Resultant { value, lc_p, lc_q, warning })
}

fn sylvester_det<F: Field>(cp: &[SparsePoly<F>], cq: &[SparsePoly<F>], like: &SparsePoly<F>) -> SparsePoly<F> {
    let (m, n) = (cp.len() - 1, cq.len() - 1);
    let zero = SparsePoly::zero(like.field(), like.vars());
    if m == 0 && n == 0 {
        return SparsePoly::one(like.field(), like.vars());
    }
    let size = m + n;
    let mut mat = vec![vec![zero.clone(); size]; size];
    // Rows hold coefficients from the highest power down.
    for r in 0..n {
        for (j, c) in cp.iter().rev().enumerate() {
            mat[r][r + j] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in cq.iter().rev().enumerate() {
            mat[n + r][r + j] = c.clone();
        }
    }
    bareiss_det(mat, like)
}

/// Fraction-free determinant of a square matrix over a polynomial ring.
pub fn bareiss_det<F: Field>(mut mat: Vec<Vec<SparsePoly<F>>>, like: &SparsePoly<F>) -> SparsePoly<F> {
    let n = mat.len();
    let one = SparsePoly::one(like.field(), like.vars());
    if n == 0 {
        return one;
    }
    let mut negate = false;
    let mut prev = one;
    for k in 0..n - 1 {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    negate = !negate;
                }
                None => return SparsePoly::zero(like.field(), like.vars()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = mat[k][k].mul(&mat[i][j]).sub(&mat[i][k].mul(&mat[k][j]));
                mat[i][j] = num.exact_div(&prev).expect("Bareiss step divides exactly");
            }
        }
        prev = mat[k][k].clone();
    }
    let det = mat[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

/// Resultant of two univariate polynomials over a field, via the Euclidean
/// remainder sequence.
pub fn uni_resultant<F: Field>(p: &UniPoly<F>, q: &UniPoly<F>) -> F::Elem {
    let f = p.field();
    let (Some(mut dp), Some(mut dq)) = (p.degree(), q.degree()) else {
        return f.zero();
    };
    let (mut a, mut b) = (p.clone(), q.clone());
    let mut acc = f.one();
    loop {
        if dq == 0 {
            return f.mul(&acc, &f.pow(b.leading_coeff().unwrap(), dp as u64));
        }
        let r = a.rem(&b);
        let Some(dr) = r.degree() else {
            return f.zero();
        };
        // Res(a, b) = (-1)^{deg a deg b} lc(b)^{deg a - deg r} Res(b, r)
        if dp % 2 == 1 && dq % 2 == 1 {
            acc = f.neg(&acc);
        }
        acc = f.mul(&acc, &f.pow(b.leading_coeff().unwrap(), (dp - dr) as u64));
        a = b;
        b = r;
        dp = dq;
        dq = dr;
    }
}
