//! Small dense linear algebra kernels.
//!
//! Dimensions here never exceed 9, so everything is plain Gaussian
//! elimination or Cholesky on stack arrays / short vectors.

use crate::scalar::{cr, Cplx, Real};

/// Outcome of a pivoted elimination that hit a (numerically) zero pivot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularPivot<T> {
    /// Ratio of the largest to the smallest pivot magnitude.
    pub condition_estimate: T,
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
///
/// A pivot is treated as zero when it falls below `rel_tol` times the
/// largest pivot seen; the returned estimate is the ratio of extreme pivots.
pub fn solve_complex<T: Real, const N: usize>(
    mut a: [[Cplx<T>; N]; N],
    mut b: [Cplx<T>; N],
    rel_tol: T,
) -> Result<([Cplx<T>; N], T), SingularPivot<T>> {
    let mut max_piv = T::zero();
    let mut min_piv = T::infinity();
    for col in 0..N {
        let (piv_row, piv_mag) = (col..N)
            .map(|r| (r, a[r][col].norm()))
            .fold((col, T::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
        max_piv = max_piv.max(piv_mag);
        min_piv = min_piv.min(piv_mag);
        if piv_mag <= rel_tol * max_piv || piv_mag == T::zero() {
            let cond = if piv_mag == T::zero() {
                T::infinity()
            } else {
                max_piv / piv_mag
            };
            return Err(SingularPivot {
                condition_estimate: cond,
            });
        }
        a.swap(col, piv_row);
        b.swap(col, piv_row);
        let inv = a[col][col].inv();
        for r in col + 1..N {
            let f = a[r][col] * inv;
            if f == cr(T::zero()) {
                continue;
            }
            for k in col..N {
                let t = a[col][k];
                a[r][k] -= f * t;
            }
            let t = b[col];
            b[r] -= f * t;
        }
    }
    let mut x = [cr(T::zero()); N];
    for r in (0..N).rev() {
        let mut s = b[r];
        for k in r + 1..N {
            s -= a[r][k] * x[k];
        }
        x[r] = s / a[r][r];
    }
    Ok((x, max_piv / min_piv))
}

/// In-place Cholesky factorisation of a symmetric positive definite matrix
/// stored row-major in `a` (`n × n`). Returns `false` if not positive definite.
pub fn cholesky_in_place<T: Real>(a: &mut [T], n: usize) -> bool {
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= a[j * n + k] * a[j * n + k];
        }
        if !(d > T::zero()) || !d.is_finite() {
            return false;
        }
        let d = d.sqrt();
        a[j * n + j] = d;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= a[i * n + k] * a[j * n + k];
            }
            a[i * n + j] = s / d;
        }
    }
    true
}

/// Solves `L Lᵀ x = b` given the lower factor produced by [`cholesky_in_place`].
pub fn cholesky_solve<T: Real>(l: &[T], n: usize, b: &[T]) -> Vec<T> {
    let mut y = b.to_vec();
    for i in 0..n {
        let mut s = y[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k * n + i] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    y
}

/// Inverse of a symmetric positive definite matrix, or `None`.
pub fn spd_inverse<T: Real>(a: &[T], n: usize) -> Option<Vec<T>> {
    let mut l = a.to_vec();
    if !cholesky_in_place(&mut l, n) {
        return None;
    }
    let mut inv = vec![T::zero(); n * n];
    let mut e = vec![T::zero(); n];
    for j in 0..n {
        e.iter_mut().for_each(|v| *v = T::zero());
        e[j] = T::one();
        let col = cholesky_solve(&l, n, &e);
        for i in 0..n {
            inv[i * n + j] = col[i];
        }
    }
    Some(inv)
}

/// Eigenvalues of a 3×3 Hermitian matrix in ascending order.
///
/// Jacobi rotations on the real embedding; accurate to roundoff relative to
/// the largest eigenvalue even for (near-)degenerate spectra.
pub fn hermitian3_eigenvalues<T: Real>(m: &[[Cplx<T>; 3]; 3]) -> [T; 3] {
    // real 6x6 embedding [[Re, -Im], [Im, Re]] has each eigenvalue twice
    let mut a = [[T::zero(); 6]; 6];
    for i in 0..3 {
        for j in 0..3 {
            let h = if i == j {
                cr(m[i][i].re)
            } else {
                (m[i][j] + m[j][i].conj()) * T::half()
            };
            a[i][j] = h.re;
            a[i + 3][j + 3] = h.re;
            a[i][j + 3] = -h.im;
            a[i + 3][j] = h.im;
        }
    }
    let mut ev = symmetric_eigenvalues(a);
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    [
        (ev[0] + ev[1]) * T::half(),
        (ev[2] + ev[3]) * T::half(),
        (ev[4] + ev[5]) * T::half(),
    ]
}

/// Cyclic Jacobi eigenvalues of a real symmetric matrix (unsorted).
fn symmetric_eigenvalues<T: Real, const N: usize>(mut a: [[T; N]; N]) -> [T; N] {
    for _sweep in 0..64 {
        let mut off = T::zero();
        let mut diag = T::zero();
        for i in 0..N {
            diag += a[i][i] * a[i][i];
            for j in i + 1..N {
                off += a[i][j] * a[i][j];
            }
        }
        if off <= T::epsilon() * T::epsilon() * diag || off == T::zero() {
            break;
        }
        for p in 0..N {
            for q in p + 1..N {
                if a[p][q] == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::two() * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..N {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..N {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut out = [T::zero(); N];
    for i in 0..N {
        out[i] = a[i][i];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn complex_solve_matches_known_system() {
        let a = [
            [Complex64::new(2.0, 1.0), Complex64::new(0.0, 0.0)],
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0)],
        ];
        let x_true = [Complex64::new(1.0, -2.0), Complex64::new(0.5, 0.25)];
        let b = [
            a[0][0] * x_true[0] + a[0][1] * x_true[1],
            a[1][0] * x_true[0] + a[1][1] * x_true[1],
        ];
        let (x, _) = solve_complex(a, b, 1e-14).unwrap();
        for i in 0..2 {
            assert_relative_eq!(x[i].re, x_true[i].re, epsilon = 1e-14);
            assert_relative_eq!(x[i].im, x_true[i].im, epsilon = 1e-14);
        }
    }

    #[test]
    fn complex_solve_reports_singular() {
        let one = Complex64::new(1.0, 0.0);
        let a = [[one, one], [one, one]];
        let err = solve_complex(a, [one, one], 1e-12).unwrap_err();
        assert!(err.condition_estimate > 1e12);
    }

    #[test]
    fn cholesky_inverse_of_spd() {
        let a = [4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0];
        let inv = spd_inverse(&a, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let s: f64 = (0..3).map(|k| a[i * 3 + k] * inv[k * 3 + j]).sum();
                assert_relative_eq!(s, if i == j { 1.0 } else { 0.0 }, epsilon = 1e-14);
            }
        }
        assert!(spd_inverse(&[1.0, 2.0, 2.0, 1.0], 2).is_none());
    }

    #[test]
    fn hermitian_eigenvalues_diagonal_and_degenerate() {
        let z = Complex64::new(0.0, 0.0);
        let d = [
            [Complex64::new(3.0, 0.0), z, z],
            [z, Complex64::new(-1.0, 0.0), z],
            [z, z, Complex64::new(0.5, 0.0)],
        ];
        let e = hermitian3_eigenvalues(&d);
        assert_relative_eq!(e[0], -1.0, epsilon = 1e-14);
        assert_relative_eq!(e[1], 0.5, epsilon = 1e-14);
        assert_relative_eq!(e[2], 3.0, epsilon = 1e-14);
        let i3 = [
            [Complex64::new(2.0, 0.0), z, z],
            [z, Complex64::new(2.0, 0.0), z],
            [z, z, Complex64::new(2.0, 0.0)],
        ];
        assert_eq!(hermitian3_eigenvalues(&i3), [2.0, 2.0, 2.0]);
    }
}
