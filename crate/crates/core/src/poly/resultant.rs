//! Resultants and discriminants.
//!
//! The primary route is the determinant of the Sylvester matrix by
//! fraction-free (Bareiss) elimination, which only needs exact division and
//! so works over `Q` and over `Q[x]` alike. A Euclidean remainder-sequence
//! route over a field is kept as an independent cross-check.

use num_traits::Zero;

use super::dense::Poly;
use crate::error::{usage, Result};
use crate::scalar::ExactDiv;

/// Sylvester matrix of `a` (degree `m`) and `b` (degree `n`), size `m + n`.
pub fn sylvester_matrix<T: ExactDiv>(a: &Poly<T>, b: &Poly<T>) -> Vec<Vec<T>> {
    let m = a.degree().unwrap_or(0);
    let n = b.degree().unwrap_or(0);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (poly, deg, count) in [(a, m, n), (b, n, m)] {
        for shift in 0..count {
            let mut row = vec![T::zero(); size];
            for k in 0..=deg {
                // highest coefficient first
                row[shift + k] = poly.coeff(deg - k);
            }
            rows.push(row);
        }
    }
    rows
}

/// Determinant by Bareiss elimination with row pivoting.
pub fn bareiss_determinant<T: ExactDiv>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = num.div_exact(&prev);
            }
            m[i][k] = T::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// `Res(a, b)` as the Sylvester determinant. Both inputs must be nonzero.
pub fn resultant<T: ExactDiv>(a: &Poly<T>, b: &Poly<T>) -> Result<T> {
    if a.is_zero() || b.is_zero() {
        return usage("resultant of the zero polynomial");
    }
    Ok(bareiss_determinant(sylvester_matrix(a, b)))
}

/// `Res(a, b)` via the Euclidean remainder sequence. Coefficients must form a
/// field.
pub fn resultant_euclidean<T: ExactDiv>(a: &Poly<T>, b: &Poly<T>) -> Result<T> {
    if a.is_zero() || b.is_zero() {
        return usage("resultant of the zero polynomial");
    }
    let mut a = a.clone();
    let mut b = b.clone();
    let mut acc = T::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        if db == 0 {
            let lb = b.lead().unwrap().clone();
            return Ok((0..da).fold(acc, |x, _| x * lb.clone()));
        }
        let (_, r) = a.div_rem(&b);
        let Some(dr) = r.degree() else {
            return Ok(T::zero());
        };
        if (da * db) % 2 == 1 {
            acc = -acc;
        }
        let lb = b.lead().unwrap().clone();
        for _ in 0..(da - dr) {
            acc = acc * lb.clone();
        }
        a = b;
        b = r;
    }
}

/// `Disc(p) = (-1)^(d(d-1)/2) Res(p, p') / lc(p)`.
pub fn discriminant<T: ExactDiv>(p: &Poly<T>) -> Result<T> {
    let Some(d) = p.degree() else {
        return usage("discriminant of the zero polynomial");
    };
    if d == 0 {
        return usage("discriminant needs degree >= 1");
    }
    let res = resultant(p, &p.derivative())?;
    let q = res.div_exact(p.lead().unwrap());
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -q } else { q })
}
