//! Deciders for exact, Birkhoff-James and strong Birkhoff-James orthogonality of
//! module elements `x, y` (m x n matrices with inner product `x*y`), plus the
//! Pythagorean bound, the best-approximation scalar `γ` and the distance to the
//! submodule `y·A`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::eig::eigh;
use crate::linalg::{
    min_modulus, norm_attain_space, op_norm, pinv, quadratic_form, svd, ComplexMatrix, NormAttainSpace, C64, ONE,
    ZERO,
};
use crate::numrange::{compress, contains_zero_scaled, MembershipStatus};
use crate::opt::ellipsoid_min;
use crate::rng::{haar_unitary, seeded};
use crate::tol::ToleranceConfig;

const GAMMA_ITERS: usize = 600;
const SLACK_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    True,
    False,
    Uncertain,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::True => "true",
            Status::False => "false",
            Status::Uncertain => "uncertain",
        }
    }

    pub fn is_decided(self) -> bool {
        self != Status::Uncertain
    }

    /// Three-way classification of a nonnegative residual: at most `tol` is true,
    /// above `10 tol` is false, in between is uncertain.
    pub(crate) fn from_residual(r: f64, tol: f64) -> Self {
        if r <= tol {
            Status::True
        } else if r > 10.0 * tol {
            Status::False
        } else {
            Status::Uncertain
        }
    }
}

/// Positive trace-one matrix; the state `c ↦ tr(P c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    p: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(p: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        if !p.is_square() {
            return Err(Error::NotSquare {
                rows: p.rows(),
                cols: p.cols(),
            });
        }
        let scale = p.frobenius_norm().max(1.0);
        if p.asymmetry() > tol.rel_tol * scale {
            return Err(Error::InvalidState("not Hermitian".into()));
        }
        let tr = p.trace();
        if (tr - ONE).norm() > tol.rel_tol * scale {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let lmin = eigh(&p).min();
        if lmin < -tol.rel_tol * scale {
            return Err(Error::InvalidState(format!("negative eigenvalue {lmin:e}")));
        }
        Ok(Self { p: p.hermitian_part() })
    }

    /// `ξξ*` for a unit vector `ξ`.
    pub fn pure(xi: &[C64]) -> Self {
        Self {
            p: ComplexMatrix::outer(xi, xi),
        }
    }

    pub(crate) fn from_trusted(p: ComplexMatrix) -> Self {
        Self { p }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.p.rows()
    }

    /// `tr(P c)`.
    pub fn apply(&self, c: &ComplexMatrix) -> C64 {
        (&self.p * c).trace()
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub status: Status,
    /// Normalized decision statistic; its meaning depends on the relation.
    pub margin: f64,
    pub witness_vector: Option<Vec<C64>>,
    pub witness_state: Option<DensityMatrix>,
}

impl Verdict {
    fn plain(status: Status, margin: f64) -> Self {
        Self {
            status,
            margin,
            witness_vector: None,
            witness_state: None,
        }
    }

    fn with_witness(status: Status, margin: f64, xi: Vec<C64>) -> Self {
        let state = DensityMatrix::pure(&xi);
        Self {
            status,
            margin,
            witness_vector: Some(xi),
            witness_state: Some(state),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GammaResult {
    #[serde(serialize_with = "crate::report::ser_complex")]
    pub gamma: C64,
    pub min_value: f64,
    pub pythagorean_slack: f64,
    pub unique: bool,
}

pub(crate) fn check_same_shape(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<()> {
    x.same_shape(y)
}

/// `x ⊥ y`: `‖x*y‖ <= witnessTol ‖x‖ ‖y‖`. Margin is `‖x*y‖ / (‖x‖ ‖y‖)`.
pub fn exact_ortho(x: &ComplexMatrix, y: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Verdict> {
    check_same_shape(x, y)?;
    let (nx, ny) = (op_norm(x), op_norm(y));
    if nx == 0.0 || ny == 0.0 {
        return Ok(Verdict::plain(Status::True, 0.0));
    }
    let r = op_norm(&(&x.adjoint() * y)) / (nx * ny);
    Ok(Verdict::plain(Status::from_residual(r, tol.witness_tol), r))
}

fn attain_or_zero(t: &ComplexMatrix, tol: &ToleranceConfig) -> Option<NormAttainSpace> {
    norm_attain_space(t, tol).ok()
}

/// `T ⊥_B S` via `0 ∈ W(Q* S*T Q)` with `Q` spanning the norm-attaining subspace of `T`.
///
/// Margin is the support-function value of the compression divided by `‖T‖ ‖S‖`:
/// positive values separate zero from the numerical range.
pub fn bj_ortho(t: &ComplexMatrix, s: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Verdict> {
    check_same_shape(t, s)?;
    let Some(h0) = attain_or_zero(t, tol) else {
        return Ok(Verdict::with_witness(Status::True, 0.0, ComplexMatrix::basis_vector(t.cols(), 0)));
    };
    let scale = h0.op_norm * op_norm(s);
    let st = &s.adjoint() * t;
    let c = compress(&st, &h0.basis)?;
    let m = contains_zero_scaled(&c, tol, scale);
    let margin = if scale > 0.0 { m.margin / scale } else { 0.0 };
    match m.status {
        MembershipStatus::Inside => {
            let xi = h0.lift(m.witness.as_ref().expect("inside carries a witness"));
            Ok(Verdict::with_witness(Status::True, margin, xi))
        }
        MembershipStatus::Outside => Ok(Verdict::plain(Status::False, margin)),
        MembershipStatus::Borderline => {
            // the strong-orthogonality candidate is also a numerical-range candidate
            let sv = svd(&(&st * &h0.basis));
            let v = sv.v.column(sv.sigma.len() - 1);
            if quadratic_form(&c, &v).norm() <= tol.witness_tol * scale {
                return Ok(Verdict::with_witness(Status::True, margin, h0.lift(&v)));
            }
            Ok(Verdict::plain(Status::Uncertain, margin))
        }
    }
}

/// `T ⊥ˢ_B S` via `σ_min(S*T Q) = 0`. Margin is `σ_min / (‖T‖ ‖S‖)`.
pub fn strong_bj_ortho(t: &ComplexMatrix, s: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Verdict> {
    check_same_shape(t, s)?;
    let Some(h0) = attain_or_zero(t, tol) else {
        return Ok(Verdict::with_witness(Status::True, 0.0, ComplexMatrix::basis_vector(t.cols(), 0)));
    };
    let ns = op_norm(s);
    if ns == 0.0 {
        return Ok(Verdict::with_witness(Status::True, 0.0, h0.basis.column(0)));
    }
    let m = &(&s.adjoint() * t) * &h0.basis;
    let sv = svd(&m);
    let k = sv.sigma.len() - 1;
    let r = sv.sigma[k] / (h0.op_norm * ns);
    let status = Status::from_residual(r, tol.witness_tol);
    let xi = h0.lift(&sv.v.column(k));
    if status == Status::True {
        Ok(Verdict::with_witness(status, r, xi))
    } else {
        Ok(Verdict {
            status,
            margin: r,
            witness_vector: Some(xi),
            witness_state: None,
        })
    }
}

/// Rank-one state `ξξ*` from the BJ witness.
pub fn state_witness(t: &ComplexMatrix, s: &ComplexMatrix, tol: &ToleranceConfig) -> Result<DensityMatrix> {
    let v = bj_ortho(t, s, tol)?;
    if v.status != Status::True {
        return Err(Error::NotOrthogonal);
    }
    Ok(DensityMatrix::pure(v.witness_vector.as_ref().unwrap()))
}

fn pythagorean_slack(t: &ComplexMatrix, s: &ComplexMatrix, m: f64, lambdas: &[C64]) -> f64 {
    let nt = op_norm(t);
    lambdas
        .iter()
        .map(|&l| {
            let v = op_norm(&t.add_scaled(l, s));
            v * v - nt * nt - l.norm_sqr() * m * m
        })
        .fold(f64::INFINITY, f64::min)
}

/// Worst value of `‖T + λS‖² - ‖T‖² - |λ|² m(S)²` over the samples.
pub fn pythagorean_check(
    t: &ComplexMatrix,
    s: &ComplexMatrix,
    lambdas: &[C64],
    tol: &ToleranceConfig,
) -> Result<f64> {
    if bj_ortho(t, s, tol)?.status != Status::True {
        return Err(Error::NotOrthogonal);
    }
    Ok(pythagorean_slack(t, s, min_modulus(s), lambdas))
}

/// Sample points `λ` spread over several scales around zero.
pub fn lambda_samples(scale: f64, count: usize, seed: u64) -> Vec<C64> {
    let mut rng = seeded(seed);
    (0..count)
        .map(|_| {
            let u: f64 = rng.random_range(-2.0..0.5);
            let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            C64::from_polar(scale * 10f64.powf(u), phi)
        })
        .collect()
}

fn norm_with_grad(t: &ComplexMatrix, s: &ComplexMatrix, l: C64) -> (f64, C64) {
    let m = t.add_scaled(l, s);
    let sv = svd(&m);
    let u = sv.u.column(0);
    let v = sv.v.column(0);
    let w = crate::linalg::inner(&u, &s.matvec(&v));
    (sv.max(), w.conj())
}

/// Minimizer of `λ ↦ ‖T + λS‖` started from a given centre.
pub fn gamma_min_from(t: &ComplexMatrix, s: &ComplexMatrix, start: C64, tol: &ToleranceConfig) -> Result<C64> {
    check_same_shape(t, s)?;
    let ns = op_norm(s);
    if ns == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let r = start.norm() + 2.0 * op_norm(t) / ns + f64::MIN_POSITIVE;
    let res = ellipsoid_min(|l| norm_with_grad(t, s, l), start, r, tol.opt_tol * 1e-4, GAMMA_ITERS);
    Ok(res.arg)
}

pub fn gamma_min(t: &ComplexMatrix, s: &ComplexMatrix, tol: &ToleranceConfig) -> Result<GammaResult> {
    check_same_shape(t, s)?;
    let ns = op_norm(s);
    if ns == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let sa = s.adjoint();
    let ls = -(&sa * t).trace() / (&sa * s).trace();
    let mut best: Option<(C64, f64)> = None;
    for start in [ZERO, ls] {
        let g = gamma_min_from(t, s, start, tol)?;
        let v = op_norm(&t.add_scaled(g, s));
        if best.is_none_or(|(_, bv)| v < bv) {
            best = Some((g, v));
        }
    }
    let (gamma, min_value) = best.unwrap();
    let m = min_modulus(s);
    let shifted = t.add_scaled(gamma, s);
    let samples = lambda_samples((min_value / ns).max(f64::MIN_POSITIVE), SLACK_SAMPLES, 0x9a77a);
    let slack = pythagorean_slack(&shifted, s, m, &samples);
    Ok(GammaResult {
        gamma,
        min_value,
        pythagorean_slack: slack,
        unique: m > 10.0 * tol.witness_tol * ns,
    })
}

/// `min_a ‖x + y a‖` with its minimizer. The minimum is `‖(I - yy⁺) x‖`, attained at `a = -y⁺x`.
pub fn dist_to_submodule_arg(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &ToleranceConfig,
) -> Result<(f64, ComplexMatrix)> {
    check_same_shape(x, y)?;
    let a = -&(&pinv(y, tol.rel_tol) * x);
    Ok((op_norm(&(x + &(y * &a))), a))
}

pub fn dist_to_submodule(x: &ComplexMatrix, y: &ComplexMatrix, tol: &ToleranceConfig) -> Result<f64> {
    Ok(dist_to_submodule_arg(x, y, tol)?.0)
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct UnitaryReport {
    pub min_modulus: f64,
    pub trials: usize,
    pub true_count: usize,
    pub false_count: usize,
    pub uncertain_count: usize,
    /// The sampled verdicts match the noninvertibility of `S`.
    pub consistent: bool,
}

/// Checks "`T ⊥_B S` for every unitary `T` iff `S` is noninvertible" on sampled unitaries.
/// The first trial is the unitary polar factor of `S`, which separates whenever `S` is invertible.
pub fn unitary_bj_iff_noninvertible(
    s: &ComplexMatrix,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<UnitaryReport> {
    if !s.is_square() {
        return Err(Error::NotSquare {
            rows: s.rows(),
            cols: s.cols(),
        });
    }
    let n = s.rows();
    let mm = min_modulus(s);
    let mut rng = seeded(seed);
    let mut counts = [0usize; 3];
    for k in 0..trials {
        let t = if k == 0 {
            let sv = svd(s);
            &sv.u * &sv.v.adjoint()
        } else {
            haar_unitary(&mut rng, n)
        };
        match bj_ortho(&t, s, tol)?.status {
            Status::True => counts[0] += 1,
            Status::False => counts[1] += 1,
            Status::Uncertain => counts[2] += 1,
        }
    }
    let consistent = if mm <= tol.witness_tol {
        counts[0] == trials
    } else if mm > 10.0 * tol.witness_tol {
        trials == 0 || counts[1] > 0
    } else {
        true
    };
    Ok(UnitaryReport {
        min_modulus: mm,
        trials,
        true_count: counts[0],
        false_count: counts[1],
        uncertain_count: counts[2],
        consistent,
    })
}
