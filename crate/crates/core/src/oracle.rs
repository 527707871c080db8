//! Brute-force cross-validators and seeded instance generators.
//!
//! The oracles only evaluate norms and quadratic forms; they use no
//! eigen-decomposition of the compressed operators, no numerical-range sweep and no
//! convex certificates, so agreement with the deciders is independent evidence.

use rand::Rng;
use serde::Serialize;

use crate::bj::{Status, Verdict};
use crate::error::{Error, Result};
use crate::linalg::{inner, normalized, op_norm, pinv, quadratic_form, svd, ComplexMatrix, C64, ONE, ZERO};
use crate::rng::{derive_seed, gaussian_matrix, haar_unitary, matrix_in_ball, seeded, unit_vector, SeededRng};

pub const MAX_DIM: usize = 8;
/// Relative norm decrease below which an oracle calls the pair orthogonal.
pub const ORACLE_TRUE: f64 = 1e-6;
/// Relative norm decrease above which an oracle decisively calls the pair non-orthogonal.
pub const ORACLE_GATE: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Ensemble {
    GaussianDense,
    DiagonalDominant,
    Projection,
    Unitary,
    /// Pairs whose inner product `x*y` is positive semidefinite.
    PsdProduct,
    /// Pairs that are Birkhoff-James orthogonal by construction (every other one strongly).
    BjPair,
}

impl Ensemble {
    pub const ALL: [Ensemble; 6] = [
        Ensemble::GaussianDense,
        Ensemble::DiagonalDominant,
        Ensemble::Projection,
        Ensemble::Unitary,
        Ensemble::PsdProduct,
        Ensemble::BjPair,
    ];

    fn tag(self) -> u64 {
        self as u64 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceGenSpec {
    pub dim: usize,
    pub seed: u64,
    pub ensemble: Ensemble,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub x: ComplexMatrix,
    pub y: ComplexMatrix,
}

/// Deterministic, random-access instance stream.
#[derive(Debug, Clone)]
pub struct Generator {
    spec: InstanceGenSpec,
}

pub fn generate(spec: InstanceGenSpec) -> Result<Generator> {
    if spec.dim == 0 || spec.dim > MAX_DIM {
        return Err(Error::Unsupported(format!("dimension {} (supported: 1..={MAX_DIM})", spec.dim)));
    }
    Ok(Generator { spec })
}

fn top_pair(x: &ComplexMatrix) -> (Vec<C64>, Vec<C64>) {
    let s = svd(x);
    (s.u.column(0), s.v.column(0))
}

fn random_projection(rng: &mut SeededRng, n: usize) -> ComplexMatrix {
    let rank = rng.random_range(1..=n);
    let u = haar_unitary(rng, n);
    let q = u.select_columns(&(0..rank).collect::<Vec<_>>());
    &q * &q.adjoint()
}

impl Generator {
    pub fn spec(&self) -> InstanceGenSpec {
        self.spec
    }

    pub fn instance(&self, index: usize) -> Instance {
        let s = self.spec;
        let n = s.dim;
        let mut rng = seeded(derive_seed(&[s.seed, s.ensemble.tag(), n as u64, index as u64]));
        match s.ensemble {
            Ensemble::GaussianDense => Instance {
                x: gaussian_matrix(&mut rng, n, n),
                y: gaussian_matrix(&mut rng, n, n),
            },
            Ensemble::DiagonalDominant => {
                let make = |rng: &mut SeededRng| {
                    let d: Vec<C64> = (0..n)
                        .map(|_| C64::from_polar(rng.random_range(1.0..4.0), rng.random_range(0.0..std::f64::consts::TAU)))
                        .collect();
                    &ComplexMatrix::diag(&d) + &gaussian_matrix(rng, n, n).scale_real(0.1)
                };
                let x = make(&mut rng);
                let y = make(&mut rng);
                Instance { x, y }
            }
            Ensemble::Projection => Instance {
                x: random_projection(&mut rng, n),
                y: random_projection(&mut rng, n),
            },
            Ensemble::Unitary => Instance {
                x: haar_unitary(&mut rng, n),
                y: gaussian_matrix(&mut rng, n, n),
            },
            Ensemble::PsdProduct => {
                let x = gaussian_matrix(&mut rng, n, n);
                let rank = rng.random_range(1..=n);
                let w = gaussian_matrix(&mut rng, n, rank);
                let mut g = &w * &w.adjoint();
                if index % 2 == 1 {
                    // put the top right-singular vector of x into the kernel of g
                    let (_, v1) = top_pair(&x);
                    let p = ComplexMatrix::identity(n).add_scaled(-ONE, &ComplexMatrix::outer(&v1, &v1));
                    g = &(&p * &g) * &p;
                }
                let g = g.hermitian_part();
                // x*y = g
                let y = &pinv(&x, 1e-14).adjoint() * &g;
                Instance { x, y }
            }
            Ensemble::BjPair => {
                let x = gaussian_matrix(&mut rng, n, n);
                let big_y = gaussian_matrix(&mut rng, n, n);
                let (u1, v1) = top_pair(&x);
                let y = if index.is_multiple_of(2) {
                    let c = inner(&u1, &big_y.matvec(&v1));
                    big_y.add_scaled(-c, &ComplexMatrix::outer(&u1, &v1))
                } else {
                    let p = ComplexMatrix::identity(n).add_scaled(-ONE, &ComplexMatrix::outer(&u1, &u1));
                    &p * &big_y
                };
                Instance { x, y }
            }
        }
    }

    pub fn take(&self, count: usize) -> Vec<Instance> {
        (0..count).map(|i| self.instance(i)).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OracleMin {
    pub min_norm: f64,
    #[serde(serialize_with = "crate::report::ser_complex")]
    pub arg: C64,
    /// `1 - minNorm / ‖T‖`, zero for `T = 0`.
    pub delta: f64,
}

impl OracleMin {
    pub fn verdict(&self) -> Status {
        if self.delta <= ORACLE_TRUE {
            Status::True
        } else {
            Status::False
        }
    }
}

/// Default search radius: beyond `2‖T‖/‖S‖` the norm `‖T + λS‖` exceeds `‖T‖`.
pub fn default_bj_radius(t: &ComplexMatrix, s: &ComplexMatrix) -> f64 {
    let ns = op_norm(s);
    if ns == 0.0 {
        0.0
    } else {
        2.0 * op_norm(t) / ns
    }
}

/// Polar grid over `|λ| <= grid_radius` (radii spaced quadratically so small `λ` are
/// dense), followed by compass-search refinement of the best grid point.
pub fn oracle_bj(t: &ComplexMatrix, s: &ComplexMatrix, grid_radius: f64, grid_steps: usize) -> Result<OracleMin> {
    if grid_steps < 64 {
        return Err(Error::InvalidConfig(format!("gridSteps {grid_steps} < 64")));
    }
    t.same_shape(s)?;
    let nt = op_norm(t);
    let f = |l: C64| op_norm(&t.add_scaled(l, s));
    let mut best = (nt, ZERO);
    if grid_radius > 0.0 && !s.is_zero() {
        for i in 1..=grid_steps {
            let r = grid_radius * (i as f64 / grid_steps as f64).powi(2);
            for j in 0..grid_steps {
                let l = C64::from_polar(r, std::f64::consts::TAU * j as f64 / grid_steps as f64);
                let v = f(l);
                if v < best.0 {
                    best = (v, l);
                }
            }
        }
        let mut h = grid_radius / grid_steps as f64;
        let dirs: Vec<C64> = (0..8).map(|k| C64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * k as f64)).collect();
        while h > 1e-13 * (1.0 + grid_radius) {
            let mut moved = false;
            for &d in &dirs {
                let l = best.1 + d * h;
                let v = f(l);
                if v < best.0 {
                    best = (v, l);
                    moved = true;
                }
            }
            if !moved {
                h *= 0.5;
            }
        }
    }
    Ok(OracleMin {
        min_norm: best.0,
        arg: best.1,
        delta: if nt == 0.0 { 0.0 } else { 1.0 - best.0 / nt },
    })
}

#[derive(Debug, Clone)]
pub struct OracleStrongMin {
    pub min_norm: f64,
    pub arg: ComplexMatrix,
    /// `1 - minNorm / ‖x‖`, zero for `x = 0`.
    pub delta: f64,
}

impl OracleStrongMin {
    pub fn verdict(&self) -> Status {
        if self.delta <= ORACLE_TRUE {
            Status::True
        } else {
            Status::False
        }
    }
}

/// Sampling minimum of `‖x + ya‖` over `a`: pseudoinverse seed and its multiples,
/// random points, then a random-direction descent from the best candidate.
pub fn oracle_strong_bj(x: &ComplexMatrix, y: &ComplexMatrix, samples: usize, seed: u64) -> Result<OracleStrongMin> {
    if samples < 1000 {
        return Err(Error::InvalidConfig(format!("samples {samples} < 1000")));
    }
    x.same_shape(y)?;
    let n = x.cols();
    let nx = op_norm(x);
    let f = |a: &ComplexMatrix| op_norm(&(x + &(y * a)));
    let mut best = (nx, ComplexMatrix::zeros(n, n));
    let consider = |a: ComplexMatrix, best: &mut (f64, ComplexMatrix)| {
        let v = f(&a);
        if v < best.0 {
            *best = (v, a);
        }
    };
    if !y.is_zero() && nx > 0.0 {
        let seed_a = -&(&pinv(y, 1e-12) * x);
        for k in 0..=20 {
            consider(seed_a.scale_real(k as f64 / 10.0), &mut best);
        }
        let mut rng = seeded(seed);
        let r1 = 2.0 * nx / op_norm(y);
        let r2 = 2.0 * op_norm(&seed_a);
        for k in 0..samples {
            let r = if k % 2 == 0 { r1 } else { r2.max(r1) };
            consider(matrix_in_ball(&mut rng, n, n, r), &mut best);
        }
        let mut h = 0.1 * r1.max(op_norm(&best.1));
        let mut fails = 0;
        for _ in 0..2000 {
            if h < 1e-12 * (1.0 + r1) {
                break;
            }
            let d = gaussian_matrix(&mut rng, n, n);
            let d = d.scale_real(h / op_norm(&d));
            let cand = &best.1 + &d;
            let v = f(&cand);
            if v < best.0 {
                best = (v, cand);
                fails = 0;
            } else {
                fails += 1;
                if fails >= 20 {
                    h *= 0.5;
                    fails = 0;
                }
            }
        }
    }
    Ok(OracleStrongMin {
        min_norm: best.0,
        delta: if nx == 0.0 { 0.0 } else { 1.0 - best.0 / nx },
        arg: best.1,
    })
}

#[derive(Debug, Clone)]
pub struct OracleRange {
    pub points: Vec<C64>,
    /// Signed distance from zero to the sampled hull: negative inside, positive outside.
    pub margin: f64,
}

impl OracleRange {
    pub fn contains_zero(&self) -> bool {
        self.margin <= 0.0
    }
}

fn orient(o: C64, a: C64, b: C64) -> f64 {
    (a - o).re * (b - o).im - (a - o).im * (b - o).re
}

fn convex_hull(points: &[C64]) -> Vec<C64> {
    let mut p: Vec<C64> = points.to_vec();
    p.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let mut h: Vec<C64> = Vec::with_capacity(2 * p.len());
    for pass in 0..2 {
        let start = h.len();
        let iter: Box<dyn Iterator<Item = &C64>> = if pass == 0 {
            Box::new(p.iter())
        } else {
            Box::new(p.iter().rev())
        };
        for &q in iter {
            while h.len() >= start + 2 && orient(h[h.len() - 2], h[h.len() - 1], q) <= 0.0 {
                h.pop();
            }
            h.push(q);
        }
        h.pop();
    }
    h
}

fn segment_distance(a: C64, b: C64) -> f64 {
    let d = b - a;
    let dd = d.norm_sqr();
    if dd == 0.0 {
        return a.norm();
    }
    let t = (-(a.re * d.re + a.im * d.im) / dd).clamp(0.0, 1.0);
    (a + d * t).norm()
}

/// Signed distance from zero to the convex hull of `points` and the nearest hull point.
fn hull_margin(points: &[C64]) -> (f64, C64) {
    let h = convex_hull(points);
    let nearest = |h: &[C64]| -> (f64, C64) {
        let mut best = (f64::INFINITY, ZERO);
        for k in 0..h.len() {
            let (a, b) = (h[k], h[(k + 1) % h.len()]);
            let d = b - a;
            let dd = d.norm_sqr();
            let t = if dd == 0.0 {
                0.0
            } else {
                (-(a.re * d.re + a.im * d.im) / dd).clamp(0.0, 1.0)
            };
            let p = a + d * t;
            if p.norm() < best.0 {
                best = (p.norm(), p);
            }
        }
        best
    };
    match h.len() {
        0 => (f64::INFINITY, ZERO),
        1 => (h[0].norm(), h[0]),
        2 => (segment_distance(h[0], h[1]), nearest(&h).1),
        _ => {
            let inside = (0..h.len()).all(|k| orient(h[k], h[(k + 1) % h.len()], ZERO) >= 0.0);
            let (d, p) = nearest(&h);
            if inside {
                (-d, p)
            } else {
                (d, p)
            }
        }
    }
}

/// Unit vector approximately minimizing `Re(conj(d) ξ*Cξ)` by projected gradient steps.
fn descend_direction(c: &ComplexMatrix, d: C64, start: Vec<C64>) -> Vec<C64> {
    let h = c.scale(d.conj()).hermitian_part();
    let eta = 0.5 / op_norm(&h).max(f64::MIN_POSITIVE);
    let mut xi = start;
    for _ in 0..300 {
        let hx = h.matvec(&xi);
        let rq = inner(&xi, &hx).re;
        let step: Vec<C64> = xi.iter().zip(&hx).map(|(x, g)| x - (g - x * rq) * eta).collect();
        match normalized(&step) {
            Some(v) => xi = v,
            None => break,
        }
    }
    xi
}

/// Sampled numerical range: uniform sphere samples, refined support points in many
/// directions, and adaptive refinement toward zero.
pub fn oracle_numrange(c: &ComplexMatrix, samples: usize, seed: u64) -> Result<OracleRange> {
    if !c.is_square() {
        return Err(Error::NotSquare {
            rows: c.rows(),
            cols: c.cols(),
        });
    }
    let n = c.rows();
    let mut rng = seeded(seed);
    let mut vecs: Vec<Vec<C64>> = Vec::with_capacity(samples);
    let mut points: Vec<C64> = Vec::with_capacity(samples + 1100);
    for _ in 0..samples {
        let xi = unit_vector(&mut rng, n);
        points.push(quadratic_form(c, &xi));
        vecs.push(xi);
    }
    if c.is_zero() {
        return Ok(OracleRange {
            margin: 0.0,
            points,
        });
    }
    let dirs = 256;
    for k in 0..dirs {
        let d = C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / dirs as f64);
        let start = (0..vecs.len())
            .min_by(|&i, &j| (d.conj() * points[i]).re.total_cmp(&(d.conj() * points[j]).re))
            .map(|i| vecs[i].clone())
            .unwrap_or_else(|| unit_vector(&mut rng, n));
        let xi = descend_direction(c, d, start);
        points.push(quadratic_form(c, &xi));
    }
    for _ in 0..64 {
        let (m, p) = hull_margin(&points);
        if m <= 0.0 || p.norm() == 0.0 {
            break;
        }
        let d = p / p.norm();
        let xi = descend_direction(c, d, unit_vector(&mut rng, n));
        let w = quadratic_form(c, &xi);
        if (d.conj() * w).re >= p.norm() * (1.0 - 1e-14) {
            break;
        }
        points.push(w);
    }
    let (margin, _) = hull_margin(&points);
    Ok(OracleRange { points, margin })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Agreement {
    Agree,
    Disagree,
    Borderline,
}

/// Margin-gated comparison of a decider verdict with an oracle's relative decrease `delta`.
///
/// A certified `True` must not coexist with a decisive oracle decrease; a `False`
/// agrees when the oracle finds a decisive decrease. Everything else is borderline.
pub fn compare(verdict: &Verdict, delta: f64) -> Agreement {
    match verdict.status {
        Status::True if delta <= ORACLE_TRUE => Agreement::Agree,
        Status::True if delta > ORACLE_GATE => Agreement::Disagree,
        Status::False if delta > ORACLE_GATE => Agreement::Agree,
        _ => Agreement::Borderline,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bj::{bj_ortho, strong_bj_ortho};
    use crate::numrange::{contains_zero, MembershipStatus};
    use crate::tol::ToleranceConfig;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn oracle_bj_examples() {
        let t = gaussian_matrix(&mut seeded(1), 3, 3);
        let z = ComplexMatrix::zeros(3, 3);
        let o = oracle_bj(&t, &z, 1.0, 64).unwrap();
        assert_eq!(o.min_norm, op_norm(&t));
        let i2 = ComplexMatrix::identity(2);
        let a = ComplexMatrix::diag_real(&[-1.0, 1.0]);
        let o = oracle_bj(&i2, &a, default_bj_radius(&i2, &a), 64).unwrap();
        assert_eq!(o.min_norm, 1.0);
        assert_eq!(o.arg, ZERO);
        assert_eq!(o.verdict(), Status::True);
        assert!(oracle_bj(&i2, &a, 1.0, 10).is_err());
    }

    #[test]
    fn oracle_strong_examples() {
        let i2 = ComplexMatrix::identity(2);
        let a = ComplexMatrix::diag_real(&[-1.0, 1.0]);
        let b = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let o = oracle_strong_bj(&i2, &a, 1000, 1).unwrap();
        assert!(o.min_norm < 1e-12);
        assert!(o.arg.distance(&-&a) < 1e-9);
        let o = oracle_strong_bj(&i2, &b, 1000, 1).unwrap();
        assert!((o.min_norm - 1.0).abs() < 1e-12);
        assert_eq!(o.verdict(), Status::True);
        let o = oracle_strong_bj(&i2, &ComplexMatrix::zeros(2, 2), 1000, 1).unwrap();
        assert_eq!(o.min_norm, 1.0);
    }

    #[test]
    fn oracle_numrange_examples() {
        let o = oracle_numrange(&ComplexMatrix::identity(2), 10_000, 1).unwrap();
        assert!((o.margin - 1.0).abs() < 1e-9);
        let o = oracle_numrange(&ComplexMatrix::diag_real(&[1.0, -1.0]), 10_000, 1).unwrap();
        assert!(o.contains_zero());
    }

    #[test]
    fn numrange_oracle_agreement() {
        let mut rng = seeded(9);
        for n in 2..=4 {
            for _ in 0..15 {
                let c = gaussian_matrix(&mut rng, n, n);
                let scale = op_norm(&c);
                let r = contains_zero(&c, &tol());
                let o = oracle_numrange(&c, 10_000, 2).unwrap();
                if o.margin.abs() <= 10.0 * tol().witness_tol * scale {
                    continue;
                }
                match r.status {
                    MembershipStatus::Inside => assert!(o.contains_zero(), "oracle margin {}", o.margin),
                    MembershipStatus::Outside => assert!(!o.contains_zero()),
                    MembershipStatus::Borderline => {}
                }
            }
        }
    }

    #[test]
    fn generator_contracts() {
        for e in Ensemble::ALL {
            let g = generate(InstanceGenSpec {
                dim: 3,
                seed: 11,
                ensemble: e,
            })
            .unwrap();
            assert_eq!(g.take(4), g.take(4));
            assert_eq!(g.instance(2), g.instance(2));
        }
        let g = generate(InstanceGenSpec {
            dim: 3,
            seed: 1,
            ensemble: Ensemble::Projection,
        })
        .unwrap();
        for inst in g.take(10) {
            let p = inst.x;
            assert!((&p * &p).distance(&p) < 1e-12);
            assert!(p.asymmetry() < 1e-12);
        }
        let g = generate(InstanceGenSpec {
            dim: 4,
            seed: 1,
            ensemble: Ensemble::PsdProduct,
        })
        .unwrap();
        for inst in g.take(10) {
            let m = &inst.x.adjoint() * &inst.y;
            assert!(m.asymmetry() <= 1e-9 * m.frobenius_norm());
            assert!(crate::linalg::eig::eigh(&m).min() >= -1e-9 * op_norm(&m));
        }
        let g = generate(InstanceGenSpec {
            dim: 3,
            seed: 1,
            ensemble: Ensemble::BjPair,
        })
        .unwrap();
        for (k, inst) in g.take(10).into_iter().enumerate() {
            assert_eq!(bj_ortho(&inst.x, &inst.y, &tol()).unwrap().status, Status::True);
            if k % 2 == 1 {
                assert_eq!(strong_bj_ortho(&inst.x, &inst.y, &tol()).unwrap().status, Status::True);
            }
        }
        assert!(generate(InstanceGenSpec {
            dim: 9,
            seed: 1,
            ensemble: Ensemble::GaussianDense
        })
        .is_err());
    }

    #[test]
    fn deciders_agree_with_oracles_small_run() {
        let g = generate(InstanceGenSpec {
            dim: 2,
            seed: 5,
            ensemble: Ensemble::BjPair,
        })
        .unwrap();
        for inst in g.take(10) {
            let v = bj_ortho(&inst.x, &inst.y, &tol()).unwrap();
            let o = oracle_bj(&inst.x, &inst.y, default_bj_radius(&inst.x, &inst.y), 64).unwrap();
            assert_ne!(compare(&v, o.delta), Agreement::Disagree);
            let v = strong_bj_ortho(&inst.x, &inst.y, &tol()).unwrap();
            let o = oracle_strong_bj(&inst.x, &inst.y, 1000, 3).unwrap();
            assert_ne!(compare(&v, o.delta), Agreement::Disagree);
        }
    }
}
