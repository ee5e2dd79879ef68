//! Small dense complex-Hermitian helpers on top of nalgebra.
//!
//! Matrices here are at most `M_max x M_max` (a handful of BS antennas), so
//! dense decompositions are always the right tool.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted ascending.
///
/// Cyclic Jacobi with complex rotations. The matrices here never exceed a
/// handful of rows, where Jacobi gives fully accurate eigenvectors even for
/// nearly diagonal inputs (a regime where shifted tridiagonal QL can return
/// badly rotated vectors). The input is symmetrized first so tiny Hermitian
/// violations from accumulated rounding do not leak into the result.
pub fn hermitian_eig_ascending(a: &DMatrix<Complex64>) -> (DVector<f64>, DMatrix<Complex64>) {
    let m = a.nrows();
    let mut w = (a + a.adjoint()).scale(0.5);
    let mut v = DMatrix::<Complex64>::identity(m, m);
    let scale: f64 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for _sweep in 0..64 {
        let off: f64 = (0..m)
            .flat_map(|p| (0..m).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| w[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = w[(p, q)];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                let phase = apq / apq.norm();
                let app = w[(p, p)].re;
                let aqq = w[(q, q)].re;
                let tau = (aqq - app) / (2.0 * apq.norm());
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // columns: (x_p, x_q) <- (c x_p - s conj(phase) x_q, s phase x_p + c x_q)
                for i in 0..m {
                    let xp = w[(i, p)];
                    let xq = w[(i, q)];
                    w[(i, p)] = xp * c - xq * phase.conj() * s;
                    w[(i, q)] = xp * phase * s + xq * c;
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = vp * c - vq * phase.conj() * s;
                    v[(i, q)] = vp * phase * s + vq * c;
                }
                // rows (the adjoint rotation)
                for j in 0..m {
                    let xp = w[(p, j)];
                    let xq = w[(q, j)];
                    w[(p, j)] = xp * c - xq * phase * s;
                    w[(q, j)] = xp * phase.conj() * s + xq * c;
                }
                w[(p, q)] = Complex64::new(0.0, 0.0);
                w[(q, p)] = Complex64::new(0.0, 0.0);
                w[(p, p)] = Complex64::new(w[(p, p)].re, 0.0);
                w[(q, q)] = Complex64::new(w[(q, q)].re, 0.0);
            }
        }
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| w[(i, i)].re.partial_cmp(&w[(j, j)].re).unwrap());
    let vals = DVector::from_fn(m, |i, _| w[(order[i], order[i])].re);
    let mut vecs = DMatrix::zeros(m, m);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &v.column(src));
    }
    (vals, vecs)
}

/// Max entrywise deviation of `phi' * phi` from the identity.
pub fn unitarity_defect(phi: &DMatrix<Complex64>) -> f64 {
    let m = phi.ncols();
    let g = phi.adjoint() * phi;
    let mut worst = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            let target = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            worst = worst.max((g[(i, j)] - target).norm());
        }
    }
    worst
}

/// `v' * a * v` for Hermitian `a`; the imaginary part is rounding noise and is dropped.
pub fn quad_form(v: &DVector<Complex64>, a: &DMatrix<Complex64>) -> f64 {
    (v.adjoint() * a * v)[(0, 0)].re
}

/// Checks that all eigenvalues are strictly positive, with the clamp rule for
/// tiny negatives produced by finite-precision Hermitian eigensolvers:
/// values in `[-tol, 0)` are clamped to zero, anything below `-tol` is an error.
pub fn clamp_psd(eigvals: &mut DVector<f64>, trace: f64) -> Result<()> {
    let tol = 1e-10 * trace.abs().max(f64::MIN_POSITIVE);
    for v in eigvals.iter_mut() {
        if *v < -tol {
            return Err(Error::NotPsd(format!("eigenvalue {v:.3e} below -{tol:.3e}")));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(())
}
