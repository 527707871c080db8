//! Approximate orthogonality: `⊥ᵉ`, `⊥ᵉ_B` and the strong variant `⊥ˢ_{Bᵉ}`, with
//! the state conditions that bracket the strong relation.
//!
//! The strong relation is decided through the quantity
//! `τ = min ‖P x*y‖₁` over densities `P` supported on the norm-attaining subspace
//! of `x`: for any such `P` and any `a`,
//! `‖x + ya‖² >= tr(P x*x) - 2 ‖P x*y‖₁ ‖a‖`, which certifies the inequality when
//! `τ <= ε ‖x‖ ‖y‖`. Conversely a first-order argument at `a = 0` shows some
//! `t a` violates it whenever `τ > ε ‖x‖ ‖y‖`; the search below looks for it.

use serde::Serialize;

use crate::bj::{bj_ortho, check_same_shape, dist_to_submodule_arg, strong_bj_ortho, DensityMatrix, Status};
use crate::error::{Error, Result};
use crate::linalg::eig::eigh;
use crate::linalg::{
    inner, norm_attain_space, op_norm, pinv, smallest_nonzero_singular, svd, trace_norm, ComplexMatrix, C64, ZERO,
};
use crate::opt::{ellipsoid_min, golden_max, project_simplex};
use crate::rng::{derive_seed, matrix_in_ball, seeded, unit_vector};
use crate::tol::ToleranceConfig;

const LAMBDA_ITERS: usize = 600;
const TAU_STEPS: usize = 300;
const TAU_RESTARTS: usize = 8;
const RANDOM_SEEDS: usize = 4;
const DESCENT_STEPS: usize = 150;

/// Argument at which the defining inequality was evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum Minimizer {
    Scalar(C64),
    Element(ComplexMatrix),
}

#[derive(Debug, Clone)]
pub struct EpsVerdict {
    pub status: Status,
    pub epsilon: f64,
    /// For `False`, a violating argument; otherwise the best point examined.
    pub minimizer_arg: Option<Minimizer>,
    /// Estimate of `inf (functional) / ‖x‖²`; for `⊥ᵉ` it is `‖x*y‖/(‖x‖‖y‖) - ε`.
    pub slack: f64,
}

pub fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && (0.0..1.0).contains(&eps) {
        Ok(())
    } else {
        Err(Error::EpsOutOfRange(eps))
    }
}

/// `‖x*y‖ <= ε ‖x‖ ‖y‖`.
pub fn eps_ortho(x: &ComplexMatrix, y: &ComplexMatrix, eps: f64, tol: &ToleranceConfig) -> Result<EpsVerdict> {
    check_eps(eps)?;
    check_same_shape(x, y)?;
    let (nx, ny) = (op_norm(x), op_norm(y));
    let r = if nx == 0.0 || ny == 0.0 {
        0.0
    } else {
        op_norm(&(&x.adjoint() * y)) / (nx * ny)
    };
    let status = Status::from_residual((r - eps).max(0.0), tol.witness_tol);
    Ok(EpsVerdict {
        status,
        epsilon: eps,
        minimizer_arg: None,
        slack: r - eps,
    })
}

fn normalize_pair(x: &ComplexMatrix, y: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix, f64, f64) {
    let (nx, ny) = (op_norm(x), op_norm(y));
    (x.scale_real(1.0 / nx), y.scale_real(1.0 / ny), nx, ny)
}

/// `g(λ) = ‖x + λy‖² + 2ε|λ| - 1` for unit-norm `x`, `y`, with a subgradient.
fn g_scalar(x: &ComplexMatrix, y: &ComplexMatrix, eps: f64, l: C64) -> (f64, C64) {
    let sv = svd(&x.add_scaled(l, y));
    let s1 = sv.max();
    let w = inner(&sv.u.column(0), &y.matvec(&sv.v.column(0)));
    let mut g = 2.0 * s1 * w.conj();
    if l.norm() > 0.0 {
        g += 2.0 * eps * l / l.norm();
    }
    (s1 * s1 + 2.0 * eps * l.norm() - 1.0, g)
}

fn minimize_g_scalar(x: &ComplexMatrix, y: &ComplexMatrix, eps: f64, tol: &ToleranceConfig) -> (C64, f64) {
    let r = 2.0 + 2.0 * eps;
    let res = ellipsoid_min(|l| g_scalar(x, y, eps, l), ZERO, r, tol.opt_tol * 1e-4, LAMBDA_ITERS);
    (res.arg, res.value)
}

/// `‖x + λy‖² >= ‖x‖² - 2ε|λ|‖x‖‖y‖` for all `λ`.
pub fn eps_bj(x: &ComplexMatrix, y: &ComplexMatrix, eps: f64, tol: &ToleranceConfig) -> Result<EpsVerdict> {
    check_eps(eps)?;
    check_same_shape(x, y)?;
    if x.is_zero() || y.is_zero() {
        return Ok(EpsVerdict {
            status: Status::True,
            epsilon: eps,
            minimizer_arg: Some(Minimizer::Scalar(ZERO)),
            slack: 0.0,
        });
    }
    let (xh, yh, nx, ny) = normalize_pair(x, y);
    let (l, value) = minimize_g_scalar(&xh, &yh, eps, tol);
    let status = if eps == 0.0 {
        bj_ortho(x, y, tol)?.status
    } else if value >= -tol.rel_tol {
        Status::True
    } else if value < -10.0 * tol.rel_tol {
        Status::False
    } else {
        Status::Uncertain
    };
    Ok(EpsVerdict {
        status,
        epsilon: eps,
        minimizer_arg: Some(Minimizer::Scalar(l * nx / ny)),
        slack: value,
    })
}

/// Density on the norm-attaining subspace of `x` (approximately) minimizing `‖P x*y‖₁`.
#[derive(Debug, Clone)]
pub struct StateBound {
    /// `‖P x*y‖₁ / (‖x‖ ‖y‖)`.
    pub tau: f64,
    /// `1 - tr(P x*x) / ‖x‖²`.
    pub defect: f64,
    pub state: DensityMatrix,
}

fn density_on(q: &ComplexMatrix, r: &ComplexMatrix) -> ComplexMatrix {
    &(q * r) * &q.adjoint()
}

fn project_density(r: &ComplexMatrix) -> ComplexMatrix {
    let e = eigh(r);
    let p = project_simplex(&e.values);
    let mut vp = e.vectors.clone();
    for (j, &pj) in p.iter().enumerate() {
        for i in 0..vp.rows() {
            vp[(i, j)] *= pj;
        }
    }
    (&vp * &e.vectors.adjoint()).hermitian_part()
}

/// Minimizes `‖R N‖₁` over `k x k` densities `R`.
fn min_trace_norm_density(n_mat: &ComplexMatrix, seed: u64) -> (f64, ComplexMatrix) {
    let k = n_mat.rows();
    let f = |r: &ComplexMatrix| trace_norm(&(r * n_mat));
    // best pure state: smallest singular direction of N*
    let sv = svd(&n_mat.adjoint());
    let v = sv.v.column(sv.sigma.len() - 1);
    let pure = ComplexMatrix::outer(&v, &v);
    let mut best = (sv.min(), pure.clone());
    if k == 1 || best.0 == 0.0 {
        return best;
    }
    let scale = op_norm(n_mat);
    if scale == 0.0 {
        return best;
    }
    let mut rng = seeded(seed);
    let mut starts = vec![pure, ComplexMatrix::identity(k).scale_real(1.0 / k as f64)];
    while starts.len() < TAU_RESTARTS {
        let u = unit_vector(&mut rng, k);
        let w = unit_vector(&mut rng, k);
        let mix = &ComplexMatrix::outer(&u, &u).scale_real(0.5) + &ComplexMatrix::outer(&w, &w).scale_real(0.5);
        starts.push(mix);
    }
    for start in starts {
        let mut r = start;
        for t in 0..TAU_STEPS {
            let rn = &r * n_mat;
            let s = svd(&rn);
            let val: f64 = s.sigma.iter().sum();
            if val < best.0 {
                best = (val, r.clone());
            }
            let w = &s.u * &s.v.adjoint();
            let g = (n_mat * &w.adjoint()).hermitian_part();
            let eta = 0.5 / (scale * ((t + 1) as f64).sqrt());
            r = project_density(&r.add_scaled(C64::new(-eta, 0.0), &g));
        }
        let val = f(&r);
        if val < best.0 {
            best = (val, r);
        }
    }
    best
}

/// State bound for a nonzero pair.
pub fn state_bound(x: &ComplexMatrix, y: &ComplexMatrix, tol: &ToleranceConfig) -> Result<StateBound> {
    check_same_shape(x, y)?;
    let h0 = norm_attain_space(x, tol)?;
    let ny = op_norm(y);
    let nx = h0.op_norm;
    let q = &h0.basis;
    let m = &x.adjoint() * y;
    let n_mat = &q.adjoint() * &m;
    let seed = derive_seed(&[x.rows() as u64, x.cols() as u64, q.cols() as u64]);
    let (t, r) = min_trace_norm_density(&n_mat, seed);
    let p = density_on(q, &r);
    let xx = &x.adjoint() * x;
    let attained = (&p * &xx).trace().re;
    Ok(StateBound {
        tau: if ny == 0.0 { 0.0 } else { t / (nx * ny) },
        defect: (1.0 - attained / (nx * nx)).max(0.0),
        state: DensityMatrix::from_trusted(p),
    })
}

/// `G(a) = ‖x + ya‖² + 2ε‖a‖ - 1` for unit-norm `x`, `y`, with a subgradient.
fn g_element(x: &ComplexMatrix, y: &ComplexMatrix, eps: f64, a: &ComplexMatrix) -> (f64, ComplexMatrix) {
    let sv = svd(&(x + &(y * a)));
    let s1 = sv.max();
    let u = sv.u.column(0);
    let v = sv.v.column(0);
    let yu = y.adjoint().matvec(&u);
    let mut g = ComplexMatrix::outer(&yu, &v).scale_real(2.0 * s1);
    let sa = svd(a);
    if sa.max() > 0.0 {
        g = g.add_scaled(C64::new(2.0 * eps, 0.0), &ComplexMatrix::outer(&sa.u.column(0), &sa.v.column(0)));
    }
    (s1 * s1 + 2.0 * eps * sa.max() - 1.0, g)
}

struct ElementSearch<'a> {
    x: &'a ComplexMatrix,
    y: &'a ComplexMatrix,
    eps: f64,
    row_proj: ComplexMatrix,
    radius: f64,
}

impl ElementSearch<'_> {
    fn value(&self, a: &ComplexMatrix) -> f64 {
        g_element(self.x, self.y, self.eps, a).0
    }

    fn project(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let p = &self.row_proj * a;
        let n = op_norm(&p);
        if n > self.radius {
            p.scale_real(self.radius / n)
        } else {
            p
        }
    }

    /// Minimizes `G(t d)` over `t` in `[0, t_max]`.
    fn line(&self, d: &ComplexMatrix) -> (f64, ComplexMatrix) {
        let nd = op_norm(d);
        if nd == 0.0 {
            return (self.value(d), d.clone());
        }
        let t_max = self.radius / nd;
        let (t, v) = golden_max(|t| -self.value(&d.scale_real(t)), 0.0, t_max, 1e-12 * t_max);
        (-v, d.scale_real(t))
    }

    fn descend(&self, start: ComplexMatrix, target: f64) -> (f64, ComplexMatrix) {
        let mut a = start;
        let (mut best_v, mut best_a) = (self.value(&a), a.clone());
        for t in 0..DESCENT_STEPS {
            let (v, g) = g_element(self.x, self.y, self.eps, &a);
            if v < best_v {
                best_v = v;
                best_a = a.clone();
            }
            if best_v < target {
                break;
            }
            let gn = g.frobenius_norm();
            if gn == 0.0 {
                break;
            }
            let step = 0.2 * self.radius / ((t + 1) as f64).sqrt() / gn;
            a = self.project(&a.add_scaled(C64::new(-step, 0.0), &g));
        }
        (best_v, best_a)
    }
}

/// `‖x + ya‖² >= ‖x‖² - 2ε‖a‖‖x‖‖y‖` for all `a`.
pub fn eps_strong_bj(x: &ComplexMatrix, y: &ComplexMatrix, eps: f64, tol: &ToleranceConfig) -> Result<EpsVerdict> {
    check_eps(eps)?;
    check_same_shape(x, y)?;
    let n = x.cols();
    if x.is_zero() || y.is_zero() {
        return Ok(EpsVerdict {
            status: Status::True,
            epsilon: eps,
            minimizer_arg: Some(Minimizer::Element(ComplexMatrix::zeros(n, n))),
            slack: 0.0,
        });
    }
    let (nx, ny) = (op_norm(x), op_norm(y));
    let unscale = |a: &ComplexMatrix| a.scale_real(nx / ny);

    if eps == 0.0 {
        let v = strong_bj_ortho(x, y, tol)?;
        let (d, a) = dist_to_submodule_arg(x, y, tol)?;
        return Ok(EpsVerdict {
            status: v.status,
            epsilon: eps,
            minimizer_arg: Some(Minimizer::Element(a)),
            slack: ((d / nx).powi(2) - 1.0).min(0.0),
        });
    }

    let (xh, yh, _, _) = normalize_pair(x, y);
    let sigma_plus = smallest_nonzero_singular(&yh, tol.rel_tol).unwrap_or(1.0);
    let radius = (2.0 + 2.0 * eps) / sigma_plus;
    let bound = state_bound(&xh, &yh, tol)?;
    let excess = (bound.tau - eps).max(0.0);
    let lower = -bound.defect - 2.0 * radius * excess;
    if lower >= -tol.rel_tol {
        return Ok(EpsVerdict {
            status: Status::True,
            epsilon: eps,
            minimizer_arg: Some(Minimizer::Element(ComplexMatrix::zeros(n, n))),
            slack: lower.min(0.0),
        });
    }

    let yp = pinv(&yh, tol.rel_tol);
    let search = ElementSearch {
        x: &xh,
        y: &yh,
        eps,
        row_proj: &yp * &yh,
        radius,
    };
    let target = -10.0 * tol.rel_tol;

    // pseudoinverse seed first: when it already violates it is the natural witness
    let pinv_seed = search.project(&-&(&yp * &xh));
    let v_pinv = search.value(&pinv_seed);
    if v_pinv < target {
        let (best, _) = search.line(&pinv_seed);
        return Ok(EpsVerdict {
            status: Status::False,
            epsilon: eps,
            minimizer_arg: Some(Minimizer::Element(unscale(&pinv_seed))),
            slack: best.min(v_pinv),
        });
    }

    // direction of steepest first-order decrease for the state found above
    let q = bound.state.matrix();
    let pm = q * &(&xh.adjoint() * &yh);
    let sp = svd(&pm);
    let descent = -&(&sp.v * &sp.u.adjoint());
    let mut dirs = vec![descent, pinv_seed, -&(&yh.adjoint() * &xh)];
    let mut rng = seeded(derive_seed(&[n as u64, x.rows() as u64, eps.to_bits()]));
    for _ in 0..RANDOM_SEEDS {
        dirs.push(matrix_in_ball(&mut rng, n, n, radius));
    }

    let mut best = (0.0, ComplexMatrix::zeros(n, n));
    for d in dirs {
        let d = search.project(&d);
        let (v, a) = search.line(&d);
        let (v, a) = if v < target { (v, a) } else { search.descend(a, target) };
        if v < best.0 {
            best = (v, a);
        }
        if best.0 < target {
            break;
        }
    }
    let status = if best.0 < target {
        Status::False
    } else {
        Status::Uncertain
    };
    Ok(EpsVerdict {
        status,
        epsilon: eps,
        minimizer_arg: Some(Minimizer::Element(unscale(&best.1))),
        slack: best.0,
    })
}

/// A density `P` on the norm-attaining subspace of `x` with `‖P x*y‖₁ <= ε‖x‖‖y‖`, if one is found.
pub fn sufficient_state_check(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    eps: f64,
    tol: &ToleranceConfig,
) -> Result<Option<DensityMatrix>> {
    check_eps(eps)?;
    check_same_shape(x, y)?;
    if x.is_zero() {
        return Ok(Some(DensityMatrix::pure(&ComplexMatrix::basis_vector(x.cols(), 0))));
    }
    let b = state_bound(x, y, tol)?;
    Ok((b.tau <= eps).then_some(b.state))
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct NecessaryReport {
    /// `φ(⟨x,y⟩⟨y,x⟩)` for normalized `x`, `y`.
    pub phi_value: f64,
    /// `‖P x*y‖₁` for normalized `x`, `y`.
    pub trace_norm: f64,
    pub phi_bound: f64,
    pub trace_norm_bound: f64,
    pub holds: bool,
}

/// State built from `z = x - y⟨y,x⟩` (normalized inputs) and its two measured bounds.
pub fn necessary_state_check(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    eps: f64,
    tol: &ToleranceConfig,
) -> Result<NecessaryReport> {
    if !(eps.is_finite() && (0.0..0.5).contains(&eps)) {
        return Err(Error::EpsOutOfRange(eps));
    }
    check_same_shape(x, y)?;
    if eps_strong_bj(x, y, eps, tol)?.status != Status::True {
        return Err(Error::NotApproxOrthogonal);
    }
    let phi_bound = 2.0 * eps + tol.rel_tol;
    let trace_norm_bound = phi_bound.sqrt();
    if x.is_zero() || y.is_zero() {
        return Ok(NecessaryReport {
            phi_value: 0.0,
            trace_norm: 0.0,
            phi_bound,
            trace_norm_bound,
            holds: true,
        });
    }
    let (xh, yh, _, _) = normalize_pair(x, y);
    let yx = &yh.adjoint() * &xh;
    let z = &xh - &(&yh * &yx);
    let e = eigh(&(&z.adjoint() * &z));
    let xi = e.vector(e.values.len() - 1);
    let p = DensityMatrix::pure(&xi);
    let m = &xh.adjoint() * &yh;
    let phi_value = p.apply(&(&m * &yx)).re;
    let trace_norm = trace_norm(&(p.matrix() * &m));
    Ok(NecessaryReport {
        phi_value,
        trace_norm,
        phi_bound,
        trace_norm_bound,
        holds: phi_value <= phi_bound && trace_norm <= trace_norm_bound,
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TransferReport {
    pub hypothesis: Status,
    pub conclusion: Status,
    pub holds: bool,
}

/// `x*x ⊥ˢ_{Bᵉ} x*y` (in the algebra) should imply `x ⊥ˢ_{Bᵉ} y`.
pub fn inner_transfer_check(
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    eps: f64,
    tol: &ToleranceConfig,
) -> Result<TransferReport> {
    check_eps(eps)?;
    check_same_shape(x, y)?;
    let xa = x.adjoint();
    let hypothesis = eps_strong_bj(&(&xa * x), &(&xa * y), eps, tol)?.status;
    let conclusion = eps_strong_bj(x, y, eps, tol)?.status;
    Ok(TransferReport {
        hypothesis,
        conclusion,
        holds: !(hypothesis == Status::True && conclusion == Status::False),
    })
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PreservingReport {
    pub pairs: usize,
    /// Some sampled pair fails the preservation hypothesis, so the bound is not tested.
    pub vacuous: bool,
    pub hypothesis_failures: usize,
    pub norm_estimate: f64,
    /// Minimum of `‖Tx‖ / (‖T‖ ‖x‖)` over sampled `x`.
    pub worst_ratio: f64,
    pub required_ratio: f64,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn apply_map(tmap: &ComplexMatrix, x: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_vec(x.rows(), x.cols(), &tmap.matvec(&x.to_vec()))
}

/// Consistency harness for the norm bound satisfied by maps preserving `⊥ˢ_{Bᵉ}`.
/// `tmap` acts on row-major vectorizations of `m x n` elements.
pub fn preserving_map_bound_check(
    tmap: &ComplexMatrix,
    m: usize,
    n: usize,
    eps: f64,
    trials: usize,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<PreservingReport> {
    if !(eps.is_finite() && (0.0..0.5).contains(&eps)) {
        return Err(Error::EpsOutOfRange(eps));
    }
    let dim = m * n;
    if tmap.shape() != (dim, dim) {
        return Err(Error::DimensionMismatch {
            expected: format!("{dim}x{dim}"),
            actual: format!("{}x{}", tmap.rows(), tmap.cols()),
        });
    }
    let mut rng = seeded(seed);
    let mut xs = Vec::with_capacity(trials);
    let mut failures = 0;
    for _ in 0..trials {
        let x = crate::rng::gaussian_matrix(&mut rng, m, n);
        let big_y = crate::rng::gaussian_matrix(&mut rng, m, n);
        // y with v1* y* x v1 = 0, where v1 is a top right-singular vector of x
        let sx = svd(&x);
        let u1 = sx.u.column(0);
        let v1 = sx.v.column(0);
        let coeff = inner(&u1, &big_y.matvec(&v1));
        let y = big_y.add_scaled(-coeff, &ComplexMatrix::outer(&u1, &v1));
        let (tx, ty) = (apply_map(tmap, &x), apply_map(tmap, &y));
        if eps_strong_bj(&tx, &ty, eps, tol)?.status == Status::False {
            failures += 1;
        }
        xs.push(x);
    }
    let mut norm_estimate: f64 = 0.0;
    for x in xs.iter().cloned().chain((0..4 * trials.max(1)).map(|_| crate::rng::gaussian_matrix(&mut rng, m, n))) {
        let nx = op_norm(&x);
        if nx > 0.0 {
            norm_estimate = norm_estimate.max(op_norm(&apply_map(tmap, &x)) / nx);
        }
    }
    let required = 1.0 - 16.0 * eps;
    let worst = xs
        .iter()
        .map(|x| {
            let d = norm_estimate * op_norm(x);
            if d == 0.0 {
                1.0
            } else {
                op_norm(&apply_map(tmap, x)) / d
            }
        })
        .fold(f64::INFINITY, f64::min);
    let vacuous = failures > 0;
    let note = (norm_estimate == 0.0).then(|| "map is zero; bound is degenerate".to_string());
    Ok(PreservingReport {
        pairs: trials,
        vacuous,
        hypothesis_failures: failures,
        norm_estimate,
        worst_ratio: if trials == 0 { 1.0 } else { worst },
        required_ratio: required,
        holds: vacuous || trials == 0 || worst >= required - tol.rel_tol,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{gaussian_matrix, haar_unitary};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn i2() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    fn a() -> ComplexMatrix {
        ComplexMatrix::diag_real(&[-1.0, 1.0])
    }

    fn b() -> ComplexMatrix {
        ComplexMatrix::diag_real(&[1.0, 0.0])
    }

    #[test]
    fn eps_range_checked() {
        assert_eq!(eps_ortho(&i2(), &b(), 1.0, &tol()).unwrap_err(), Error::EpsOutOfRange(1.0));
        assert!(eps_bj(&i2(), &b(), -0.1, &tol()).is_err());
        assert!(eps_strong_bj(&i2(), &b(), f64::NAN, &tol()).is_err());
    }

    #[test]
    fn eps_ortho_examples() {
        for eps in [0.0, 0.3, 0.99] {
            let v = eps_ortho(&i2(), &b(), eps, &tol()).unwrap();
            assert_eq!(v.status, Status::False);
            assert!((v.slack + eps - 1.0).abs() < 1e-12);
        }
        let p1 = ComplexMatrix::diag_real(&[1.0, 0.0, 0.0]);
        let p2 = ComplexMatrix::diag_real(&[0.0, 1.0, 1.0]);
        assert_eq!(eps_ortho(&p1, &p2, 0.0, &tol()).unwrap().status, Status::True);
    }

    #[test]
    fn eps_bj_examples() {
        for eps in [0.0, 0.1, 0.25, 0.49] {
            assert_eq!(eps_bj(&i2(), &a(), eps, &tol()).unwrap().status, Status::True, "eps {eps}");
        }
        let x = gaussian_matrix(&mut seeded(1), 3, 2);
        for eps in [0.0, 0.2, 0.45] {
            let v = eps_bj(&x, &x, eps, &tol()).unwrap();
            assert_eq!(v.status, Status::False);
            let Some(Minimizer::Scalar(l)) = v.minimizer_arg else { panic!() };
            let nx = op_norm(&x);
            let lhs = op_norm(&x.add_scaled(l, &x)).powi(2);
            assert!(lhs < nx * nx - 2.0 * eps * l.norm() * nx * nx);
        }
    }

    #[test]
    fn eps_strong_examples() {
        for eps in [0.0, 0.1, 0.25, 0.49] {
            let v = eps_strong_bj(&i2(), &a(), eps, &tol()).unwrap();
            assert_eq!(v.status, Status::False, "eps {eps}");
            let Some(Minimizer::Element(m)) = v.minimizer_arg else { panic!() };
            assert!(m.distance(&-&a()) < 1e-12);
            assert!(op_norm(&(&i2() + &(&a() * &m))) <= 1e-9);
            let v = eps_strong_bj(&i2(), &b(), eps, &tol()).unwrap();
            assert_eq!(v.status, Status::True, "eps {eps}");
        }
    }

    #[test]
    fn self_orthogonality() {
        let mut rng = seeded(2);
        for _ in 0..10 {
            let x = gaussian_matrix(&mut rng, 3, 3);
            for eps in [0.0, 0.2, 0.49] {
                assert_eq!(eps_strong_bj(&x, &x, eps, &tol()).unwrap().status, Status::False);
            }
        }
        let z = ComplexMatrix::zeros(2, 2);
        assert_eq!(eps_strong_bj(&z, &z, 0.3, &tol()).unwrap().status, Status::True);
    }

    #[test]
    fn false_verdicts_carry_violations() {
        let mut rng = seeded(3);
        for _ in 0..20 {
            let x = gaussian_matrix(&mut rng, 3, 3);
            let y = gaussian_matrix(&mut rng, 3, 3);
            for eps in [0.05, 0.2] {
                let v = eps_strong_bj(&x, &y, eps, &tol()).unwrap();
                if v.status == Status::False {
                    let Some(Minimizer::Element(m)) = v.minimizer_arg else { panic!() };
                    let nx = op_norm(&x);
                    let ny = op_norm(&y);
                    let g = op_norm(&(&x + &(&y * &m))).powi(2) + 2.0 * eps * op_norm(&m) * nx * ny - nx * nx;
                    assert!(g < -1e-8 * nx * nx, "{g}");
                }
            }
        }
    }

    #[test]
    fn state_checks_on_examples() {
        let p = sufficient_state_check(&i2(), &b(), 0.1, &tol()).unwrap().unwrap();
        assert!(p.matrix().distance(&ComplexMatrix::diag_real(&[0.0, 1.0])) < 1e-6);
        assert!(sufficient_state_check(&i2(), &i2(), 0.5, &tol()).unwrap().is_none());
        let z = ComplexMatrix::zeros(2, 2);
        assert!(sufficient_state_check(&i2(), &z, 0.0, &tol()).unwrap().is_some());

        let r = necessary_state_check(&i2(), &b(), 0.2, &tol()).unwrap();
        assert!(r.holds);
        assert!(r.phi_value.abs() < 1e-15);
        let r2 = necessary_state_check(&i2().scale_real(3.0), &b().scale(C64::new(0.0, -2.0)), 0.2, &tol()).unwrap();
        assert_eq!(r.phi_value, r2.phi_value);
        assert_eq!(
            necessary_state_check(&i2(), &a(), 0.2, &tol()).unwrap_err(),
            Error::NotApproxOrthogonal
        );
        let p1 = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let p2 = ComplexMatrix::diag_real(&[0.0, 1.0]);
        let r = necessary_state_check(&p1, &p2, 0.0, &tol()).unwrap();
        assert_eq!((r.phi_value, r.trace_norm), (0.0, 0.0));
    }

    #[test]
    fn transfer_examples() {
        let p1 = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let p2 = ComplexMatrix::diag_real(&[0.0, 1.0]);
        let r = inner_transfer_check(&p1, &p2, 0.1, &tol()).unwrap();
        assert_eq!((r.hypothesis, r.conclusion), (Status::True, Status::True));
        let y = gaussian_matrix(&mut seeded(4), 2, 2);
        let r = inner_transfer_check(&i2(), &y, 0.1, &tol()).unwrap();
        assert_eq!(r.hypothesis, r.conclusion);
        assert!(r.holds);
    }

    #[test]
    fn preserving_map_examples() {
        let u = haar_unitary(&mut seeded(5), 3).scale_real(2.0);
        let r = preserving_map_bound_check(&u, 3, 1, 0.0, 10, 1, &tol()).unwrap();
        assert!(!r.vacuous && r.holds);
        assert!((r.worst_ratio - 1.0).abs() < 1e-12);
        let z = ComplexMatrix::zeros(4, 4);
        let r = preserving_map_bound_check(&z, 2, 2, 0.1, 5, 1, &tol()).unwrap();
        assert!(r.note.is_some() && r.holds);
        let c = gaussian_matrix(&mut seeded(6), 4, 4);
        let c = c.scale_real(0.5 / op_norm(&c));
        let r = preserving_map_bound_check(&c, 2, 2, 0.05, 10, 1, &tol()).unwrap();
        assert!(r.vacuous || r.holds);
    }
}
