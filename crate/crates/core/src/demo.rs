//! Finite truncations of `T = diag(1/2, 2/3, 3/4, ...)` on `ℓ²` with `S = e₁e₁*`.
//!
//! Each truncation attains its norm at `e_N` and is strongly orthogonal to `S`,
//! but the gap between the top singular value and the rest closes as `N` grows,
//! so the infinite operator has no norm-attaining vector.

use serde::Serialize;

use crate::bj::{strong_bj_ortho, Status};
use crate::error::{Error, Result};
use crate::linalg::{norm_attain_space, op_norm, ComplexMatrix, ONE};
use crate::report::complex_array;
use crate::tol::ToleranceConfig;

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DemoReport {
    pub n: usize,
    pub norm: f64,
    pub expected_norm: f64,
    pub status: Status,
    pub witness: Vec<[f64; 2]>,
    /// Index (1-based) of the basis vector the witness concentrates on.
    pub witness_index: usize,
    /// `1 - |⟨ξ, e_N⟩|`.
    pub witness_error: f64,
    /// `‖T_N‖` minus the norm of `T_N` on the orthocomplement of its norm-attaining subspace.
    pub gap: f64,
    pub expected_gap: f64,
}

pub fn truncation(n: usize) -> (ComplexMatrix, ComplexMatrix) {
    let d: Vec<f64> = (1..=n).map(|k| k as f64 / (k as f64 + 1.0)).collect();
    let e1 = ComplexMatrix::basis_vector(n, 0);
    (ComplexMatrix::diag_real(&d), ComplexMatrix::outer(&e1, &e1))
}

pub fn demo_l2(n: usize, tol: &ToleranceConfig) -> Result<DemoReport> {
    if n < 2 {
        return Err(Error::InvalidConfig(format!("N = {n} must be at least 2")));
    }
    let (t, s) = truncation(n);
    let norm = op_norm(&t);
    let v = strong_bj_ortho(&t, &s, tol)?;
    let xi = v.witness_vector.clone().unwrap_or_default();
    let witness_index = xi
        .iter()
        .enumerate()
        .map(|(k, z)| (k + 1, z.norm()))
        .fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a })
        .0;
    let witness_error = if xi.is_empty() { 1.0 } else { 1.0 - xi[n - 1].norm() };

    let h0 = norm_attain_space(&t, tol)?;
    let q = &h0.basis;
    let complement = ComplexMatrix::identity(n).add_scaled(-ONE, &(q * &q.adjoint()));
    let rest = op_norm(&(&t * &complement));
    let nf = n as f64;
    Ok(DemoReport {
        n,
        norm,
        expected_norm: nf / (nf + 1.0),
        status: v.status,
        witness: complex_array(&xi),
        witness_index,
        witness_error,
        gap: norm - rest,
        expected_gap: nf / (nf + 1.0) - (nf - 1.0) / nf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_truncations() {
        let tol = ToleranceConfig::default();
        let r = demo_l2(2, &tol).unwrap();
        assert!((r.norm - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(r.status, Status::True);
        assert_eq!(r.witness_index, 2);
        assert!(r.witness_error < 1e-12);
        assert!((r.gap - (2.0 / 3.0 - 0.5)).abs() < 1e-12);
        assert!(demo_l2(1, &tol).is_err());
        let g10 = demo_l2(10, &tol).unwrap().gap;
        let g20 = demo_l2(20, &tol).unwrap().gap;
        assert!(g20 < g10);
    }
}
