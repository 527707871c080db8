//! Thin SVD by one-sided (Hestenes) Jacobi rotations.

use super::eig::Rotation;
use super::matrix::{inner, norm, ComplexMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 80;

/// `A = U diag(sigma) V*` with `k = min(rows, cols)` singular triples, sigma descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn max(&self) -> f64 {
        self.sigma[0]
    }

    pub fn min(&self) -> f64 {
        *self.sigma.last().unwrap()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let mut us = self.u.clone();
        for (j, &s) in self.sigma.iter().enumerate() {
            for i in 0..us.rows() {
                us[(i, j)] *= s;
            }
        }
        &us * &self.v.adjoint()
    }
}

pub fn svd(a: &ComplexMatrix) -> Svd {
    if a.rows() >= a.cols() {
        svd_tall(a)
    } else {
        let t = svd_tall(&a.adjoint());
        Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        }
    }
}

fn svd_tall(a: &ComplexMatrix) -> Svd {
    let n = a.cols();
    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let wp = w.column(p);
                let wq = w.column(q);
                let alpha = inner(&wp, &wp).re;
                let beta = inner(&wq, &wq).re;
                let gamma = inner(&wp, &wq);
                if gamma.norm() <= 1e-300 || gamma.norm() <= 2e-16 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let rot = Rotation::hermitian(alpha, beta, gamma);
                rot.apply_right(&mut w, p, q);
                rot.apply_right(&mut v, p, q);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| norm(&w.column(j))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let v = v.select_columns(&order);

    let smax = sigma[0];
    let mut ucols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for (k, &j) in order.iter().enumerate() {
        let s = sigma[k];
        let cand = if s > 0.0 && s > smax * 1e-300 {
            w.column(j).iter().map(|z| z / s).collect()
        } else {
            vec![ZERO; a.rows()]
        };
        ucols.push(cand);
    }
    orthonormalize_columns(&mut ucols);
    Svd {
        u: ComplexMatrix::from_columns(&ucols),
        sigma,
        v,
    }
}

/// Modified Gram-Schmidt applied twice; columns that collapse are replaced by
/// completion vectors drawn from the standard basis.
pub(crate) fn orthonormalize_columns(cols: &mut [Vec<C64>]) {
    let m = cols.first().map_or(0, Vec::len);
    for j in 0..cols.len() {
        let mut c = cols[j].clone();
        let original = norm(&c);
        for _ in 0..2 {
            for prev in cols.iter().take(j) {
                let h = inner(prev, &c);
                for (x, p) in c.iter_mut().zip(prev) {
                    *x -= h * p;
                }
            }
        }
        let nc = norm(&c);
        if original > 0.0 && nc > 1e-8 * original {
            cols[j] = c.iter().map(|z| z / nc).collect();
            continue;
        }
        // completion
        let mut best: Option<Vec<C64>> = None;
        let mut best_norm = 0.0;
        for e in 0..m {
            let mut c = ComplexMatrix::basis_vector(m, e);
            for _ in 0..2 {
                for prev in cols.iter().take(j) {
                    let h = inner(prev, &c);
                    for (x, p) in c.iter_mut().zip(prev) {
                        *x -= h * p;
                    }
                }
            }
            let nc = norm(&c);
            if nc > best_norm {
                best_norm = nc;
                best = Some(c);
            }
        }
        let c = best.expect("completion requires j < m");
        cols[j] = c.iter().map(|z| z / best_norm).collect();
    }
}
