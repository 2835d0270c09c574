//! Exact dense linear algebra over the rationals, just enough for pairing
//! matrices: determinant, inverse, matrix product.

use crate::rat::Rat;

pub type Mat = Vec<Vec<Rat>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    let inner = b.len();
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if b[k][j].is_zero() {
                    continue;
                }
                let prod = &a[i][k] * &b[k][j];
                out[i][j] += &prod;
            }
        }
    }
    out
}

/// Determinant by fraction-free-ish Gaussian elimination (exact rationals,
/// so ordinary elimination is already exact).
pub fn determinant(m: &Mat) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = det * &p;
        let pinv = p.recip().expect("nonzero pivot");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &pinv;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= &delta;
            }
        }
    }
    det
}

/// Exact inverse via Gauss-Jordan; `None` for singular matrices.
pub fn inverse(m: &Mat) -> Option<Mat> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let pinv = a[col][col].recip()?;
        for c in 0..n {
            a[col][c] = &a[col][c] * &pinv;
            inv[col][c] = &inv[col][c] * &pinv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let da = &factor * &a[col][c];
                a[r][c] -= &da;
                let di = &factor * &inv[col][c];
                inv[r][c] -= &di;
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Mat {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rat::from_int(x)).collect())
            .collect()
    }

    #[test]
    fn det_and_inverse() {
        let m = mat(&[&[2, 1], &[1, 1]]);
        assert_eq!(determinant(&m), Rat::one());
        let inv = inverse(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));

        let singular = mat(&[&[1, 2], &[2, 4]]);
        assert_eq!(determinant(&singular), Rat::zero());
        assert!(inverse(&singular).is_none());
    }

    #[test]
    fn hyperbolic_block() {
        let m = mat(&[&[0, 1], &[1, 0]]);
        assert_eq!(determinant(&m), Rat::from_int(-1));
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, m);
    }
}
