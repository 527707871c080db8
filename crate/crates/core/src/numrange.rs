//! Numerical range `W(C) = {ξ*Cξ : ‖ξ‖ = 1}`: compression, support function,
//! membership of zero and construction of a unit vector `ξ` with `ξ*Cξ = 0`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::eig::eigh;
use crate::linalg::{inner, norm, normalized, op_norm, quadratic_form, ComplexMatrix, C64, ONE, ZERO};
use crate::opt::golden_max;
use crate::rng::{seeded, unit_vector};
use crate::tol::ToleranceConfig;

const SWEEP: usize = 64;
const GILBERT_STEPS: usize = 200;
const RESTARTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipStatus {
    Inside,
    Outside,
    Borderline,
}

#[derive(Debug, Clone)]
pub struct RangeMembership {
    pub status: MembershipStatus,
    /// `max_θ λ_min(Herm(e^{iθ}C))`: positive when zero is separated from `W(C)`.
    pub margin: f64,
    /// Angle attaining `margin`.
    pub theta: f64,
    pub witness: Option<Vec<C64>>,
}

/// `Q* C Q`.
pub fn compress(c: &ComplexMatrix, q: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !c.is_square() {
        return Err(Error::NotSquare {
            rows: c.rows(),
            cols: c.cols(),
        });
    }
    if q.rows() != c.rows() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} rows in Q", c.rows()),
            actual: format!("{}", q.rows()),
        });
    }
    Ok(&(&q.adjoint() * c) * q)
}

fn rotated_herm(c: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    c.scale(C64::from_polar(1.0, theta)).hermitian_part()
}

/// `λ_min((e^{iθ}C + e^{-iθ}C*) / 2)`.
pub fn support_min(c: &ComplexMatrix, theta: f64) -> f64 {
    eigh(&rotated_herm(c, theta)).min()
}

/// Point of `W(C)` (and its unit vector) minimizing `Re(e^{iθ} w)`.
fn support_point(c: &ComplexMatrix, theta: f64) -> (C64, Vec<C64>) {
    let e = eigh(&rotated_herm(c, theta));
    let v = e.vector(0);
    (quadratic_form(c, &v), v)
}

/// Membership test with tolerances measured against `‖C‖`.
pub fn contains_zero(c: &ComplexMatrix, tol: &ToleranceConfig) -> RangeMembership {
    let scale = op_norm(c);
    contains_zero_scaled(c, tol, scale)
}

/// Membership test with tolerances measured against an explicit `scale`.
pub(crate) fn contains_zero_scaled(c: &ComplexMatrix, tol: &ToleranceConfig, scale: f64) -> RangeMembership {
    let n = c.rows();
    if c.is_zero() || scale == 0.0 {
        return RangeMembership {
            status: MembershipStatus::Inside,
            margin: 0.0,
            theta: 0.0,
            witness: Some(ComplexMatrix::basis_vector(n, 0)),
        };
    }

    let mut points: Vec<(C64, Vec<C64>)> = Vec::with_capacity(SWEEP + 8);
    let mut best_k = 0;
    let mut best_f = f64::NEG_INFINITY;
    for k in 0..SWEEP {
        let theta = 2.0 * PI * k as f64 / SWEEP as f64;
        let h = rotated_herm(c, theta);
        let e = eigh(&h);
        if e.min() > best_f {
            best_f = e.min();
            best_k = k;
        }
        let v = e.vector(0);
        points.push((quadratic_form(c, &v), v));
    }
    let step = 2.0 * PI / SWEEP as f64;
    let centre = step * best_k as f64;
    let (theta, refined) = golden_max(|t| support_min(c, t), centre - step, centre + step, tol.opt_tol);
    let (margin, theta) = if refined >= best_f {
        (refined, theta)
    } else {
        (best_f, centre)
    };
    points.push(support_point(c, theta));

    let band = 10.0 * tol.witness_tol * scale;
    if margin > band {
        return RangeMembership {
            status: MembershipStatus::Outside,
            margin,
            theta,
            witness: None,
        };
    }
    let witness = if margin > tol.witness_tol * scale {
        None
    } else {
        find_witness(c, points, tol.witness_tol * scale)
    };
    let status = if witness.is_some() {
        MembershipStatus::Inside
    } else {
        MembershipStatus::Borderline
    };
    RangeMembership {
        status,
        margin,
        theta,
        witness,
    }
}

/// Unit `ξ` with `|ξ*Cξ| <= witnessTol * max(1, ‖C‖)`.
pub fn zero_witness(c: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Vec<C64>> {
    if !c.is_square() {
        return Err(Error::NotSquare {
            rows: c.rows(),
            cols: c.cols(),
        });
    }
    let accept = tol.witness_tol * op_norm(c).max(1.0);
    if c.is_zero() {
        return Ok(ComplexMatrix::basis_vector(c.rows(), 0));
    }
    let points = (0..SWEEP)
        .map(|k| support_point(c, 2.0 * PI * k as f64 / SWEEP as f64))
        .collect();
    find_witness(c, points, accept).ok_or(Error::NoWitnessFound)
}

fn find_witness(c: &ComplexMatrix, mut points: Vec<(C64, Vec<C64>)>, accept: f64) -> Option<Vec<C64>> {
    let ok = |xi: &[C64]| quadratic_form(c, xi).norm() <= accept;

    if let Some((_, v)) = points.iter().find(|(w, _)| w.norm() <= accept) {
        return Some(v.clone());
    }

    for _ in 0..GILBERT_STEPS {
        let near = closest_in_hull(&points);
        let mu = near.point;
        if mu.norm() <= 0.5 * accept {
            if let Some(xi) = realize(c, &points, &near) {
                if ok(&xi) {
                    return Some(xi);
                }
            }
            break;
        }
        // support in the direction of the closest point
        let d = mu / mu.norm();
        let theta = (-d.arg()).rem_euclid(2.0 * PI);
        let (w, v) = support_point(c, theta);
        if w.norm() <= accept {
            return Some(v);
        }
        let progress = mu.norm() - (d.conj() * w).re;
        points.push((w, v));
        if progress <= 1e-15 * mu.norm().max(accept) {
            break;
        }
    }
    descend(c, accept)
}

/// Location of the point of the convex hull closest to the origin.
#[derive(Debug, Clone)]
enum Near {
    Vertex(usize),
    Edge(usize, usize),
    /// Origin inside the triangle; the ray from the first vertex through the origin
    /// meets the opposite edge.
    Triangle(usize, usize, usize),
}

#[derive(Debug, Clone)]
struct Closest {
    point: C64,
    at: Near,
}

fn cross(o: C64, a: C64, b: C64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Monotone-chain convex hull (counter-clockwise), returning indices.
pub(crate) fn hull_indices(pts: &[C64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&i, &j| {
        pts[i]
            .re
            .total_cmp(&pts[j].re)
            .then(pts[i].im.total_cmp(&pts[j].im))
    });
    idx.dedup_by(|a, b| pts[*a] == pts[*b]);
    if idx.len() <= 2 {
        return idx;
    }
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && cross(pts[lower[lower.len() - 2]], pts[lower[lower.len() - 1]], pts[i]) <= 0.0 {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && cross(pts[upper[upper.len() - 2]], pts[upper[upper.len() - 1]], pts[i]) <= 0.0 {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn closest_on_segment(a: C64, b: C64) -> (C64, f64) {
    let d = b - a;
    let dd = d.norm_sqr();
    if dd == 0.0 {
        return (a, 0.0);
    }
    let t = (-(a.re * d.re + a.im * d.im) / dd).clamp(0.0, 1.0);
    (a + d * t, t)
}

fn closest_in_hull(points: &[(C64, Vec<C64>)]) -> Closest {
    let pts: Vec<C64> = points.iter().map(|p| p.0).collect();
    let h = hull_indices(&pts);
    if h.len() == 1 {
        return Closest {
            point: pts[h[0]],
            at: Near::Vertex(h[0]),
        };
    }
    if h.len() >= 3 {
        let zero = ZERO;
        let inside = (0..h.len()).all(|k| cross(pts[h[k]], pts[h[(k + 1) % h.len()]], zero) >= 0.0);
        if inside {
            let a = h[0];
            for k in 1..h.len() - 1 {
                let (b, c) = (h[k], h[k + 1]);
                if cross(pts[a], pts[b], zero) >= 0.0
                    && cross(pts[b], pts[c], zero) >= 0.0
                    && cross(pts[c], pts[a], zero) >= 0.0
                {
                    return Closest {
                        point: zero,
                        at: Near::Triangle(a, b, c),
                    };
                }
            }
        }
    }
    let mut best = Closest {
        point: pts[h[0]],
        at: Near::Vertex(h[0]),
    };
    let m = h.len();
    let edges = if m == 2 { 1 } else { m };
    for k in 0..edges {
        let (i, j) = (h[k], h[(k + 1) % m]);
        let (p, t) = closest_on_segment(pts[i], pts[j]);
        if p.norm() < best.point.norm() {
            best = Closest {
                point: p,
                at: if t <= 0.0 {
                    Near::Vertex(i)
                } else if t >= 1.0 {
                    Near::Vertex(j)
                } else {
                    Near::Edge(i, j)
                },
            };
        }
    }
    best
}

fn realize(c: &ComplexMatrix, points: &[(C64, Vec<C64>)], near: &Closest) -> Option<Vec<C64>> {
    match near.at {
        Near::Vertex(i) => Some(points[i].1.clone()),
        Near::Edge(i, j) => segment_solve(c, &points[i].1, &points[j].1, near.point),
        Near::Triangle(a, b, cc) => {
            let (wa, wb, wc) = (points[a].0, points[b].0, points[cc].0);
            // ray wa + s (0 - wa) meets wb + t (wc - wb)
            let dir = -wa;
            let e = wc - wb;
            let den = dir.re * e.im - dir.im * e.re;
            if den.abs() <= f64::EPSILON * dir.norm() * e.norm() {
                // degenerate triangle: origin lies on one of its edges
                let (p, _) = closest_on_segment(wa, wb);
                let (q, _) = closest_on_segment(wb, wc);
                return if p.norm() <= q.norm() {
                    segment_solve(c, &points[a].1, &points[b].1, p)
                } else {
                    segment_solve(c, &points[b].1, &points[cc].1, q)
                };
            }
            let rhs = wb - wa;
            let t = ((rhs.re * dir.im - rhs.im * dir.re) / den).clamp(0.0, 1.0);
            let p = wb + e * t;
            let xp = segment_solve(c, &points[b].1, &points[cc].1, p)?;
            let wp = quadratic_form(c, &xp);
            let (target, _) = closest_on_segment(wa, wp);
            segment_solve(c, &points[a].1, &xp, target)
        }
    }
}

/// Given unit `x`, `y` with `x*Cx = a`, `y*Cy = b` and a target `mu` on `[a, b]`,
/// returns a unit vector in `span{x, y}` with `ξ*Cξ = mu`.
pub(crate) fn segment_solve(c: &ComplexMatrix, x: &[C64], y: &[C64], mu: C64) -> Option<Vec<C64>> {
    let a = quadratic_form(c, x);
    let b = quadratic_form(c, y);
    let ab = b - a;
    if (a - mu).norm() <= (b - mu).norm() && (a - mu).norm() == 0.0 {
        return Some(x.to_vec());
    }
    if ab.norm() == 0.0 {
        return Some(x.to_vec());
    }
    let rot = C64::from_polar(1.0, -ab.arg());
    let n = c.rows();
    let shifted = c.add_scaled(-mu, &ComplexMatrix::identity(n)).scale(rot);
    let h = shifted.hermitian_part();
    let k = (&shifted - &shifted.adjoint()).scale(C64::new(0.0, -0.5));

    let xky = inner(x, &k.matvec(y));
    let mut phase = if xky.norm() > 0.0 {
        C64::new(0.0, 1.0) * xky.conj() / xky.norm()
    } else {
        ONE
    };
    if (phase * inner(x, y)).re < 0.0 {
        phase = -phase;
    }
    let ye: Vec<C64> = y.iter().map(|z| z * phase).collect();
    let aa = quadratic_form(&h, x).re;
    let bb = quadratic_form(&h, &ye).re;
    let dd = inner(x, &h.matvec(&ye)).re;
    if aa >= 0.0 {
        return Some(x.to_vec());
    }
    if bb <= 0.0 {
        return Some(y.to_vec());
    }
    let disc = (dd * dd - aa * bb).sqrt();
    let (cs, sn) = if dd >= 0.0 {
        (dd + disc, -aa)
    } else {
        (bb, -dd + disc)
    };
    // tan s = sn / cs
    let z: Vec<C64> = x.iter().zip(&ye).map(|(p, q)| p * cs + q * sn).collect();
    normalized(&z)
}

/// Projected gradient descent on `|ξ*Cξ|²` over the unit sphere.
fn descend(c: &ComplexMatrix, accept: f64) -> Option<Vec<C64>> {
    let n = c.rows();
    let cn = op_norm(c);
    let eta = 0.25 / (cn * cn);
    let ca = c.adjoint();
    let mut rng = seeded(0x6e72);
    for _ in 0..RESTARTS {
        let mut xi = unit_vector(&mut rng, n);
        for _ in 0..2000 {
            let q = quadratic_form(c, &xi);
            if q.norm() <= accept {
                return Some(xi);
            }
            let cx = c.matvec(&xi);
            let cax = ca.matvec(&xi);
            let g: Vec<C64> = cx.iter().zip(&cax).map(|(u, v)| q.conj() * u + q * v).collect();
            let step: Vec<C64> = xi.iter().zip(&g).map(|(x, gi)| x - gi * eta).collect();
            xi = normalized(&step)?;
        }
    }
    None
}

/// `|ξ*Cξ|` for a unit vector.
pub fn residual(c: &ComplexMatrix, xi: &[C64]) -> f64 {
    debug_assert!((norm(xi) - 1.0).abs() < 1e-8);
    quadratic_form(c, xi).norm()
}
