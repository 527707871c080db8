//! Dense complex linear algebra: eigendecomposition, SVD, norms and the
//! norm-attaining subspace of an operator.

pub mod eig;
pub mod matrix;
pub mod svd;

pub use eig::{herm_eig, HermEig};
pub use matrix::{inner, norm, normalized, quadratic_form, ComplexMatrix, C64, ONE, ZERO};
pub use svd::{svd, Svd};

use crate::error::{Error, Result};
use crate::tol::ToleranceConfig;

/// Operator norm: the largest singular value.
pub fn op_norm(a: &ComplexMatrix) -> f64 {
    svd(a).max()
}

/// `inf ‖Aξ‖` over unit `ξ`; zero whenever `A` has more columns than rows.
pub fn min_modulus(a: &ComplexMatrix) -> f64 {
    if a.cols() > a.rows() {
        return 0.0;
    }
    svd(a).min()
}

/// `|A| = (A*A)^{1/2}`.
pub fn abs_op(a: &ComplexMatrix) -> ComplexMatrix {
    let s = svd(a);
    let mut vs = s.v.clone();
    for (j, &sv) in s.sigma.iter().enumerate() {
        for i in 0..vs.rows() {
            vs[(i, j)] *= sv;
        }
    }
    &vs * &s.v.adjoint()
}

/// Sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> f64 {
    svd(a).sigma.iter().sum()
}

/// Moore-Penrose pseudoinverse, discarding singular values at or below `rcond * σ_max`.
pub fn pinv(a: &ComplexMatrix, rcond: f64) -> ComplexMatrix {
    let s = svd(a);
    let cut = rcond * s.max();
    let mut out = ComplexMatrix::zeros(a.cols(), a.rows());
    for (k, &sv) in s.sigma.iter().enumerate() {
        if sv <= cut || sv == 0.0 {
            continue;
        }
        let vk = s.v.column(k);
        let uk = s.u.column(k);
        for i in 0..a.cols() {
            for j in 0..a.rows() {
                out[(i, j)] += vk[i] * uk[j].conj() / sv;
            }
        }
    }
    out
}

/// Smallest singular value above `rcond * σ_max`, or `None` for the zero matrix.
pub fn smallest_nonzero_singular(a: &ComplexMatrix, rcond: f64) -> Option<f64> {
    let s = svd(a);
    let cut = rcond * s.max();
    s.sigma.iter().copied().rev().find(|&x| x > cut && x > 0.0)
}

/// Orthonormal basis of the top right-singular subspace of `T` together with
/// the spectral gap to the rest of the spectrum.
#[derive(Debug, Clone)]
pub struct NormAttainSpace {
    /// `n x k`, orthonormal columns.
    pub basis: ComplexMatrix,
    pub op_norm: f64,
    /// Norm of `T` restricted to the orthogonal complement; zero when `k = n`.
    pub restricted_norm: f64,
    pub gap: f64,
}

impl NormAttainSpace {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// `Q c` for coefficients `c` in the basis.
    pub fn lift(&self, coeffs: &[C64]) -> Vec<C64> {
        self.basis.matvec(coeffs)
    }
}

pub fn norm_attain_space(t: &ComplexMatrix, tol: &ToleranceConfig) -> Result<NormAttainSpace> {
    let s = svd(t);
    let top = s.max();
    if top == 0.0 {
        return Err(Error::DegenerateOperator);
    }
    let cut = top * (1.0 - tol.cluster_tol);
    let k = s.sigma.iter().take_while(|&&x| x >= cut).count();
    let restricted = s.sigma.get(k).copied().unwrap_or(0.0);
    let idx: Vec<usize> = (0..k).collect();
    Ok(NormAttainSpace {
        basis: s.v.select_columns(&idx),
        op_norm: top,
        restricted_norm: restricted,
        gap: top - restricted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn op_norm_examples() {
        assert_eq!(op_norm(&ComplexMatrix::identity(2)), 1.0);
        let a = ComplexMatrix::diag_real(&[-1.0, 1.0]);
        assert_eq!(op_norm(&a), 1.0);
        // ‖I + λA‖ = max(|1-λ|, |1+λ|)
        for lam in [C64::new(0.3, -0.2), C64::new(-2.0, 1.0), C64::new(0.0, 5.0)] {
            let m = ComplexMatrix::identity(2).add_scaled(lam, &a);
            let expect = (ONE - lam).norm().max((ONE + lam).norm());
            assert!((op_norm(&m) - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn min_modulus_examples() {
        assert_eq!(min_modulus(&ComplexMatrix::identity(3)), 1.0);
        let d = ComplexMatrix::diag_real(&[0.5, 2.0 / 3.0, 0.75]);
        assert!((min_modulus(&d) - 0.5).abs() < 1e-15);
        let z = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[2.0, 0.0]]);
        assert_eq!(min_modulus(&z), 0.0);
        assert_eq!(min_modulus(&ComplexMatrix::zeros(2, 3)), 0.0);
    }

    #[test]
    fn abs_op_examples() {
        let d = ComplexMatrix::diag(&[C64::new(-2.0, 0.0), C64::new(0.0, 3.0)]);
        let a = abs_op(&d);
        assert!(a.distance(&ComplexMatrix::diag_real(&[2.0, 3.0])) < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let u = ComplexMatrix::from_rows(&[
            vec![C64::new(h, 0.0), C64::new(0.0, h)],
            vec![C64::new(0.0, h), C64::new(h, 0.0)],
        ]);
        assert!(abs_op(&u).distance(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn norm_attain_examples() {
        let tol = ToleranceConfig::default();
        let s = norm_attain_space(&ComplexMatrix::diag_real(&[2.0, 1.0]), &tol).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis[(0, 0)].norm(), 1.0);
        assert_eq!(s.restricted_norm, 1.0);
        assert_eq!(s.gap, 1.0);

        let s = norm_attain_space(&ComplexMatrix::diag_real(&[0.5, 2.0 / 3.0, 0.75]), &tol).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis[(2, 0)].norm(), 1.0);

        let s = norm_attain_space(&ComplexMatrix::identity(3), &tol).unwrap();
        assert_eq!(s.dim(), 3);
        assert_eq!(s.restricted_norm, 0.0);

        assert_eq!(
            norm_attain_space(&ComplexMatrix::zeros(2, 2), &tol).unwrap_err(),
            Error::DegenerateOperator
        );
    }

    #[test]
    fn pinv_of_diag() {
        let d = ComplexMatrix::diag_real(&[2.0, 0.0]);
        let p = pinv(&d, 1e-12);
        assert!(p.distance(&ComplexMatrix::diag_real(&[0.5, 0.0])) < 1e-15);
        assert_eq!(smallest_nonzero_singular(&d, 1e-12), Some(2.0));
        assert_eq!(smallest_nonzero_singular(&ComplexMatrix::zeros(2, 2), 1e-12), None);
    }
}
