//! Singular value decomposition of a real 3x3 matrix by one-sided (Hestenes)
//! Jacobi rotations.
//!
//! Each rotation orthogonalises a pair of columns of the working copy of `K`,
//! which is the cyclic Jacobi sweep on `KᵀK` carried out without forming the
//! product. Working on `K` directly keeps small singular values accurate to
//! machine precision relative to the largest one.

use nalgebra::{Matrix3, Vector3};

const MAX_SWEEPS: usize = 64;

/// `K = U diag(singular) Vᵀ` with `singular` sorted descending and `U`, `V`
/// orthogonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd3 {
    pub u: Matrix3<f64>,
    pub singular: [f64; 3],
    pub v: Matrix3<f64>,
}

impl Svd3 {
    pub fn reconstruct(&self) -> Matrix3<f64> {
        self.u * Matrix3::from_diagonal(&Vector3::from(self.singular)) * self.v.transpose()
    }

    /// Largest entry of `|U S Vᵀ - k|`.
    pub fn reconstruction_residual(&self, k: &Matrix3<f64>) -> f64 {
        (self.reconstruct() - k).amax()
    }
}

pub fn svd3(k: &Matrix3<f64>) -> Svd3 {
    let mut a = *k;
    let mut v = Matrix3::<f64>::identity();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let alpha = a.column(p).norm_squared();
            let beta = a.column(q).norm_squared();
            let gamma = a.column(p).dot(&a.column(q));
            if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                continue;
            }
            rotated = true;
            let zeta = (beta - alpha) / (2.0 * gamma);
            let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
            let cs = 1.0 / (1.0 + t * t).sqrt();
            let sn = cs * t;
            rotate_columns(&mut a, p, q, cs, sn);
            rotate_columns(&mut v, p, q, cs, sn);
        }
        if !rotated {
            break;
        }
    }

    let norms: [f64; 3] = std::array::from_fn(|j| a.column(j).norm());
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let singular = order.map(|j| norms[j]);
    let mut u = Matrix3::<f64>::zeros();
    let mut vs = Matrix3::<f64>::zeros();
    let mut filled = 0;
    for (dst, &src) in order.iter().enumerate() {
        vs.set_column(dst, &v.column(src));
        if norms[src] > 0.0 {
            u.set_column(dst, &(a.column(src) / norms[src]));
            filled += 1;
        }
    }
    complete_basis(&mut u, filled);

    Svd3 {
        u,
        singular,
        v: vs,
    }
}

fn rotate_columns(m: &mut Matrix3<f64>, p: usize, q: usize, cs: f64, sn: f64) {
    for row in 0..3 {
        let (x, y) = (m[(row, p)], m[(row, q)]);
        m[(row, p)] = cs * x - sn * y;
        m[(row, q)] = sn * x + cs * y;
    }
}

/// Fills columns `filled..3` of `u` with an orthonormal complement of the
/// first `filled` columns.
fn complete_basis(u: &mut Matrix3<f64>, filled: usize) {
    let mut have = filled;
    for e in 0..3 {
        if have == 3 {
            break;
        }
        let mut w = Vector3::<f64>::zeros();
        w[e] = 1.0;
        for j in 0..have {
            let col = u.column(j).into_owned();
            w -= col * col.dot(&w);
        }
        let n = w.norm();
        if n > 1e-6 {
            u.set_column(have, &(w / n));
            have += 1;
        }
    }
}
