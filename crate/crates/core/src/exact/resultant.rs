//! Resultants of polynomials whose coefficients lie in `Q[x]`.
//!
//! A bivariate polynomial is stored as its coefficient list in the
//! eliminated variable (index = power), each coefficient a `UPoly` in the
//! surviving variable.

use super::upoly::UPoly;

pub type BiPoly = Vec<UPoly>;

fn degree(p: &[UPoly]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Determinant over `Q[x]` by fraction-free (Bareiss) elimination.
pub fn det(mut m: Vec<Vec<UPoly>>) -> UPoly {
    let n = m.len();
    if n == 0 {
        return UPoly::one();
    }
    let mut neg = false;
    let mut prev = UPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(i) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return UPoly::zero();
            };
            m.swap(k, i);
            neg = !neg;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = UPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if neg {
        -&d
    } else {
        d
    }
}

/// Sylvester resultant with respect to the eliminated variable.
pub fn resultant(p: &[UPoly], q: &[UPoly]) -> UPoly {
    let (Some(m), Some(n)) = (degree(p), degree(q)) else {
        return UPoly::zero();
    };
    if m == 0 {
        return p[0].pow(n as u32);
    }
    if n == 0 {
        return q[0].pow(m as u32);
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![UPoly::zero(); size];
        for (j, c) in p[..=m].iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![UPoly::zero(); size];
        for (j, c) in q[..=n].iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    det(rows)
}

/// Coefficient-wise derivative in the eliminated variable.
pub fn derivative(p: &[UPoly]) -> BiPoly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&super::rat::int(i as i64)))
        .collect()
}

/// Lifts a univariate polynomial in the eliminated variable with constant coefficients.
pub fn constant_coeffs(p: &UPoly) -> BiPoly {
    p.coeffs()
        .iter()
        .map(|c| UPoly::constant(c.clone()))
        .collect()
}
