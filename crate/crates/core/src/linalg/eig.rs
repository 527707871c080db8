//! Hermitian eigendecomposition by cyclic Jacobi rotations.

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};
use crate::tol::ToleranceConfig;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with a unitary matrix of eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermEig {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }
}

/// Unitary 2x2 rotation `[[jpp, jpq], [jqp, jqq]]` that diagonalizes the Hermitian
/// block `[[a, g], [conj(g), b]]` via `J* B J`. `g` must be nonzero.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Rotation {
    pub jpp: C64,
    pub jpq: C64,
    pub jqp: C64,
    pub jqq: C64,
}

impl Rotation {
    pub(crate) fn hermitian(a: f64, b: f64, g: C64) -> Self {
        let abs_g = g.norm();
        let phase = g / abs_g;
        let theta = (b - a) / (2.0 * abs_g);
        let t = if theta.abs() > 1e150 {
            0.5 / theta
        } else {
            theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
        };
        let c = 1.0 / (t * t + 1.0).sqrt();
        let s = t * c;
        let pc = phase.conj();
        Self {
            jpp: C64::new(c, 0.0),
            jpq: C64::new(s, 0.0),
            jqp: -pc * s,
            jqq: pc * c,
        }
    }

    /// Right-multiplies columns `p`, `q` of `m` by the rotation.
    pub(crate) fn apply_right(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        for k in 0..m.rows() {
            let mp = m[(k, p)];
            let mq = m[(k, q)];
            m[(k, p)] = mp * self.jpp + mq * self.jqp;
            m[(k, q)] = mp * self.jpq + mq * self.jqq;
        }
    }

    /// Left-multiplies rows `p`, `q` of `m` by the adjoint of the rotation.
    fn apply_left_adjoint(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        for k in 0..m.cols() {
            let mp = m[(p, k)];
            let mq = m[(q, k)];
            m[(p, k)] = self.jpp.conj() * mp + self.jqp.conj() * mq;
            m[(q, k)] = self.jpq.conj() * mp + self.jqq.conj() * mq;
        }
    }
}

/// Checked Hermitian eigendecomposition: rejects non-square or non-Hermitian input.
pub fn herm_eig(h: &ComplexMatrix, tol: &ToleranceConfig) -> Result<HermEig> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let asym = h.asymmetry();
    if asym > tol.rel_tol * h.frobenius_norm() {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    Ok(eigh(h))
}

/// Eigendecomposition of the Hermitian part of a square matrix.
pub(crate) fn eigh(h: &ComplexMatrix) -> HermEig {
    let n = h.rows();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let mut off = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    off += a[(p, q)].norm_sqr();
                }
            }
            if off.sqrt() <= 1e-16 * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let g = a[(p, q)];
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    if g.norm() <= 1e-300 || g.norm() <= 1e-18 * (app.abs() + aqq.abs()) {
                        a[(p, q)] = C64::new(0.0, 0.0);
                        a[(q, p)] = C64::new(0.0, 0.0);
                        continue;
                    }
                    let rot = Rotation::hermitian(app, aqq, g);
                    rot.apply_right(&mut a, p, q);
                    rot.apply_left_adjoint(&mut a, p, q);
                    rot.apply_right(&mut v, p, q);
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    HermEig {
        values: order.iter().map(|&i| a[(i, i)].re).collect(),
        vectors: v.select_columns(&order),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::ONE;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = crate::rng::gaussian_matrix(&mut rng, n, n);
        g.hermitian_part()
    }

    #[test]
    fn diagonal_case() {
        let h = ComplexMatrix::diag_real(&[3.0, 2.0]);
        let e = herm_eig(&h, &ToleranceConfig::default()).unwrap();
        assert_eq!(e.values, vec![2.0, 3.0]);
        assert_eq!(e.vectors[(1, 0)].norm(), 1.0);
        assert_eq!(e.vectors[(0, 1)].norm(), 1.0);
    }

    #[test]
    fn swap_matrix_spectrum() {
        let h = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = herm_eig(&h, &ToleranceConfig::default()).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_reconstruction() {
        for seed in 0..20 {
            let h = random_hermitian(5, seed);
            let e = herm_eig(&h, &ToleranceConfig::default()).unwrap();
            let lam = ComplexMatrix::diag_real(&e.values);
            let rec = &(&e.vectors * &lam) * &e.vectors.adjoint();
            assert!(rec.distance(&h) <= 1e-10 * h.frobenius_norm(), "seed {seed}");
            let gram = &e.vectors.adjoint() * &e.vectors;
            assert!(gram.distance(&ComplexMatrix::identity(5)) < 1e-12);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let tol = ToleranceConfig::default();
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(herm_eig(&a, &tol), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            herm_eig(&ComplexMatrix::zeros(2, 3), &tol),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn complex_phase_entries() {
        let i = C64::new(0.0, 1.0);
        let h = ComplexMatrix::from_rows(&[vec![ONE, i], vec![-i, ONE]]);
        let e = eigh(&h);
        assert!(e.values[0].abs() < 1e-15);
        assert!((e.values[1] - 2.0).abs() < 1e-15);
    }
}
