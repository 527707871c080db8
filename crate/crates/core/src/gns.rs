//! Concrete GNS model for a density matrix: `π(c) = c ⊗ I_r` on `C^n ⊗ C^r`
//! with cyclic vector built from `√P`.

use serde::Serialize;

use crate::bj::{strong_bj_ortho, DensityMatrix, Status};
use crate::error::{Error, Result};
use crate::linalg::eig::eigh;
use crate::linalg::{inner, min_modulus, norm, op_norm, svd, ComplexMatrix, C64};
use crate::rng::{matrix_in_ball, seeded};
use crate::tol::ToleranceConfig;

#[derive(Debug, Clone)]
pub struct GnsRep {
    pub support_rank: usize,
    pub rep_dim: usize,
    /// Row-major vectorization of `sqrt_p`; index `i r + j` is `e_i ⊗ f_j`.
    pub xi: Vec<C64>,
    /// `n x r`, columns `√p_j v_j` over the retained eigenpairs of `P`.
    pub sqrt_p: ComplexMatrix,
}

impl GnsRep {
    pub fn n(&self) -> usize {
        self.sqrt_p.rows()
    }

    /// `π(c) = c ⊗ I_r` as an explicit matrix.
    pub fn pi(&self, c: &ComplexMatrix) -> ComplexMatrix {
        c.kron_identity(self.support_rank)
    }

    /// `π(c) ξ` without forming the Kronecker product.
    pub fn act(&self, c: &ComplexMatrix) -> Vec<C64> {
        (c * &self.sqrt_p).to_vec()
    }

    /// `[π(c) ξ, ξ]`.
    pub fn state(&self, c: &ComplexMatrix) -> C64 {
        inner(&self.xi, &self.act(c))
    }
}

pub fn gns_construct(p: &DensityMatrix, tol: &ToleranceConfig) -> Result<GnsRep> {
    let checked = DensityMatrix::new(p.matrix().clone(), tol)?;
    let e = eigh(checked.matrix());
    let keep: Vec<usize> = (0..e.values.len()).filter(|&j| e.values[j] > tol.cluster_tol).collect();
    if keep.is_empty() {
        return Err(Error::InvalidState("no eigenvalue above the support threshold".into()));
    }
    let n = p.dim();
    let r = keep.len();
    let cols: Vec<Vec<C64>> = keep
        .iter()
        .map(|&j| {
            let s = e.values[j].sqrt();
            e.vector(j).iter().map(|z| z * s).collect()
        })
        .collect();
    let sqrt_p = ComplexMatrix::from_columns(&cols);
    Ok(GnsRep {
        support_rank: r,
        rep_dim: n * r,
        xi: sqrt_p.to_vec(),
        sqrt_p,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RepReport {
    pub samples: usize,
    pub support_rank: usize,
    /// Minimum over samples of the inequality slack.
    pub worst_slack: f64,
    /// `tr(P a²)` for the self-adjoint case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state_of_square: Option<f64>,
    pub holds: bool,
}

/// `‖a + bc‖² - ‖a‖² - ‖π(bc)ξ‖²`.
pub fn rep_slack(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix, rep: &GnsRep) -> f64 {
    let na = op_norm(a);
    let lhs = op_norm(&(a + &(b * c)));
    let pv = norm(&rep.act(&(b * c)));
    lhs * lhs - na * na - pv * pv
}

/// Samples `c` with `‖c‖ <= 2`; the first sample is `c = 0`.
fn sample_cs(n: usize, trials: usize, seed: u64) -> Vec<ComplexMatrix> {
    let mut rng = seeded(seed);
    (0..trials)
        .map(|k| {
            if k == 0 {
                ComplexMatrix::zeros(n, n)
            } else {
                matrix_in_ball(&mut rng, n, n, 2.0)
            }
        })
        .collect()
}

/// Representation form of strong orthogonality: `‖a + bc‖² >= ‖a‖² + ‖π(bc)ξ‖²`.
pub fn verify_strong_bj_rep(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<RepReport> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let v = strong_bj_ortho(a, b, tol)?;
    if v.status != Status::True {
        return Err(Error::NotOrthogonal);
    }
    let p = DensityMatrix::pure(v.witness_vector.as_ref().unwrap());
    let rep = gns_construct(&p, tol)?;
    let na = op_norm(a);
    let worst = sample_cs(a.rows(), trials, seed)
        .iter()
        .map(|c| rep_slack(a, b, c, &rep))
        .fold(f64::INFINITY, f64::min);
    Ok(RepReport {
        samples: trials,
        support_rank: rep.support_rank,
        worst_slack: worst,
        state_of_square: None,
        holds: trials == 0 || worst >= -tol.rel_tol * na * na,
    })
}

/// For self-adjoint noninvertible `a`: `‖I + ab‖² >= 1 + ‖π(ab)ξ‖²` with the state
/// concentrated on a kernel vector of `a`.
pub fn selfadjoint_noninvertible_rep(
    a: &ComplexMatrix,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<RepReport> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let asym = a.asymmetry();
    if asym > tol.rel_tol * a.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let na = op_norm(a);
    let mm = min_modulus(a);
    if mm > tol.witness_tol * na {
        return Err(Error::Invertible(mm));
    }
    let n = a.rows();
    let sv = svd(a);
    let xi0 = sv.v.column(n - 1);
    let p = DensityMatrix::pure(&xi0);
    let a2 = a * a;
    let phi = p.apply(&a2).re;
    let rep = gns_construct(&p, tol)?;
    let id = ComplexMatrix::identity(n);
    let worst = sample_cs(n, trials, seed)
        .iter()
        .map(|b| rep_slack(&id, a, b, &rep))
        .fold(f64::INFINITY, f64::min);
    Ok(RepReport {
        samples: trials,
        support_rank: rep.support_rank,
        worst_slack: worst,
        state_of_square: Some(phi),
        holds: phi <= tol.rel_tol * na * na && (trials == 0 || worst >= -tol.rel_tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use crate::rng::{gaussian_matrix, haar_unitary};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn pure_state_representation() {
        let e1 = ComplexMatrix::basis_vector(3, 0);
        let rep = gns_construct(&DensityMatrix::pure(&e1), &tol()).unwrap();
        assert_eq!(rep.support_rank, 1);
        assert_eq!(rep.rep_dim, 3);
        assert!((rep.xi[0].norm() - 1.0).abs() < 1e-15);
        let c = gaussian_matrix(&mut seeded(1), 3, 3);
        assert!((rep.state(&c) - c[(0, 0)]).norm() < 1e-14);
        assert_eq!(rep.pi(&c).rows(), 3);
    }

    #[test]
    fn maximally_mixed_state() {
        let n = 3;
        let p = DensityMatrix::new(ComplexMatrix::identity(n).scale_real(1.0 / n as f64), &tol()).unwrap();
        let rep = gns_construct(&p, &tol()).unwrap();
        assert_eq!(rep.support_rank, n);
        assert!((norm(&rep.xi) - 1.0).abs() < 1e-14);
        let mut rng = seeded(2);
        for _ in 0..20 {
            let c = gaussian_matrix(&mut rng, n, n);
            let expect = c.trace() / n as f64;
            assert!((rep.state(&c) - expect).norm() <= 1e-10 * op_norm(&c));
        }
    }

    #[test]
    fn representation_axioms() {
        let mut rng = seeded(3);
        let u = haar_unitary(&mut rng, 3);
        let d = ComplexMatrix::diag_real(&[0.5, 0.3, 0.2]);
        let p = DensityMatrix::new(&(&u * &d) * &u.adjoint(), &tol()).unwrap();
        let rep = gns_construct(&p, &tol()).unwrap();
        let b = gaussian_matrix(&mut rng, 3, 3);
        let c = gaussian_matrix(&mut rng, 3, 3);
        assert!(rep.pi(&(&b * &c)).distance(&(&rep.pi(&b) * &rep.pi(&c))) < 1e-12);
        assert!(rep.pi(&(&b + &c)).distance(&(&rep.pi(&b) + &rep.pi(&c))) < 1e-12);
        assert!(rep.pi(&c.adjoint()).distance(&rep.pi(&c).adjoint()) < 1e-15);
        assert!(rep.pi(&ComplexMatrix::identity(3)).distance(&ComplexMatrix::identity(9)) == 0.0);
        assert!((op_norm(&rep.pi(&c)) - op_norm(&c)).abs() < 1e-12);
        assert!((rep.state(&c) - p.apply(&c)).norm() < 1e-12);
        assert!((rep.state(&ComplexMatrix::identity(3)) - ONE).norm() < 1e-14);
    }

    #[test]
    fn invalid_state_rejected() {
        let bad = ComplexMatrix::diag_real(&[1.5, -0.5]);
        assert!(matches!(
            DensityMatrix::new(bad, &tol()),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn strong_rep_examples() {
        let a = ComplexMatrix::diag_real(&[2.0, 1.0]);
        let b = ComplexMatrix::outer(&ComplexMatrix::basis_vector(2, 1), &ComplexMatrix::basis_vector(2, 1))
            .scale_real(3.0);
        let r = verify_strong_bj_rep(&a, &b, 50, 1, &tol()).unwrap();
        assert!(r.holds);
        assert!(r.worst_slack >= -1e-9 * 4.0);
        let rep = gns_construct(&DensityMatrix::pure(&ComplexMatrix::basis_vector(2, 0)), &tol()).unwrap();
        assert_eq!(rep_slack(&a, &b, &ComplexMatrix::zeros(2, 2), &rep), 0.0);
        let z = ComplexMatrix::zeros(2, 2);
        let r = verify_strong_bj_rep(&a, &z, 10, 1, &tol()).unwrap();
        assert!(r.worst_slack.abs() < 1e-15);
        assert_eq!(
            verify_strong_bj_rep(&a, &ComplexMatrix::identity(2), 5, 1, &tol()).unwrap_err(),
            Error::NotOrthogonal
        );
    }

    #[test]
    fn selfadjoint_examples() {
        let a = ComplexMatrix::diag_real(&[0.0, 1.0]);
        let r = selfadjoint_noninvertible_rep(&a, 50, 2, &tol()).unwrap();
        assert!(r.holds && r.worst_slack >= -1e-12);
        assert_eq!(r.state_of_square, Some(0.0));
        let r = selfadjoint_noninvertible_rep(&ComplexMatrix::zeros(2, 2), 10, 2, &tol()).unwrap();
        assert!(r.worst_slack.abs() < 1e-15);
        assert!(matches!(
            selfadjoint_noninvertible_rep(&ComplexMatrix::identity(2), 5, 1, &tol()),
            Err(Error::Invertible(_))
        ));
        let j = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            selfadjoint_noninvertible_rep(&j, 5, 1, &tol()),
            Err(Error::NotHermitian { .. })
        ));
    }
}
