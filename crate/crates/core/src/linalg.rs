//! Dense Gaussian elimination for the handful of tiny systems the model needs
//! (5×5 steady state, 2–4 parameter normal equations).

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Solves `a · x = b` by LU factorization with partial pivoting.
///
/// Rows are first scaled to unit max-norm. A pivot of the scaled matrix
/// smaller than `n·ε` is reported as [`Error::Singular`].
pub fn solve<T: Scalar, const N: usize>(mut a: [[T; N]; N], mut b: [T; N]) -> Result<[T; N]> {
    for (row, rhs) in a.iter_mut().zip(b.iter_mut()) {
        let s = row.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        if s > T::zero() {
            for v in row.iter_mut() {
                *v = *v / s;
            }
            *rhs = *rhs / s;
        }
    }
    let tiny = T::lit(N as f64) * T::epsilon();

    for col in 0..N {
        let (pivot_row, pivot) =
            (col..N)
                .map(|r| (r, a[r][col].abs()))
                .fold(
                    (col, -T::one()),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if !(pivot > tiny) {
            return Err(Error::Singular {
                column: col,
                pivot: pivot.to_f64_lossy(),
            });
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..N {
            let f = a[row][col] / a[col][col];
            if f == T::zero() {
                continue;
            }
            let top = a[col];
            for (dst, v) in a[row].iter_mut().zip(top).skip(col) {
                *dst = *dst - f * v;
            }
            b[row] = b[row] - f * b[col];
        }
    }

    let mut x = [T::zero(); N];
    for row in (0..N).rev() {
        let tail = (row + 1..N).fold(T::zero(), |s, k| s + a[row][k] * x[k]);
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

/// `m · v` for a square array matrix.
pub fn mat_vec<T: Scalar, const N: usize>(m: &[[T; N]; N], v: &[T; N]) -> [T; N] {
    let mut out = [T::zero(); N];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row.iter().zip(v).fold(T::zero(), |s, (a, b)| s + *a * *b);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_permuted_system() {
        let a: [[f64; 3]; 3] = [[0.0, 2.0, 1.0], [1.0, 1.0, 0.0], [3.0, 0.0, 1.0]];
        let x_true = [1.0, -2.0, 0.5];
        let b = mat_vec(&a, &x_true);
        let x = solve(a, b).unwrap();
        for (u, v) in x.iter().zip(x_true) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn flags_rank_deficiency() {
        let a = [[1.0, 2.0], [2.0, 4.0]];
        assert!(matches!(
            solve(a, [1.0, 2.0]),
            Err(Error::Singular { column: 1, .. })
        ));
        assert!(matches!(
            solve([[0.0f64; 3]; 3], [0.0; 3]),
            Err(Error::Singular { column: 0, .. })
        ));
    }

    #[test]
    fn row_scale_does_not_matter() {
        let a: [[f64; 2]; 2] = [[1e12, 2e12], [3.0, -1.0]];
        let x = solve(a, [5e12, 1.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
    }
}
