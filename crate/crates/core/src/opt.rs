//! Small optimizers: a planar ellipsoid method for convex functions of one
//! complex variable, golden-section search, and Euclidean projection onto the
//! probability simplex.

use crate::linalg::C64;

/// Value and a subgradient at a point. The subgradient is packed as
/// `∂/∂Re λ + i ∂/∂Im λ`.
pub type ValueGrad = (f64, C64);

#[derive(Debug, Clone, Copy)]
pub struct EllipsoidResult {
    pub arg: C64,
    pub value: f64,
    pub iterations: usize,
}

/// Minimizes a convex `f: C -> R` over the disk `|λ - center| <= radius` with the
/// central-cut ellipsoid method. Returns the best point evaluated.
///
/// Stops once the ellipsoid's largest semi-axis falls below `tol * (1 + |best|)`
/// or after `max_iter` cuts.
pub fn ellipsoid_min<F>(f: F, center: C64, radius: f64, tol: f64, max_iter: usize) -> EllipsoidResult
where
    F: Fn(C64) -> ValueGrad,
{
    let mut c = [center.re, center.im];
    let r2 = radius * radius;
    let mut p = [[r2, 0.0], [0.0, r2]];
    let (v0, mut g) = f(center);
    let mut best = EllipsoidResult {
        arg: center,
        value: v0,
        iterations: 0,
    };
    for it in 0..max_iter {
        best.iterations = it + 1;
        let gv = [g.re, g.im];
        let pg = [
            p[0][0] * gv[0] + p[0][1] * gv[1],
            p[1][0] * gv[0] + p[1][1] * gv[1],
        ];
        let gpg = gv[0] * pg[0] + gv[1] * pg[1];
        // zero or NaN: no cut available
        if gpg.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            break;
        }
        let s = gpg.sqrt();
        let b = [pg[0] / s, pg[1] / s];
        c[0] -= b[0] / 3.0;
        c[1] -= b[1] / 3.0;
        for i in 0..2 {
            for j in 0..2 {
                p[i][j] = 4.0 / 3.0 * (p[i][j] - 2.0 / 3.0 * b[i] * b[j]);
            }
        }
        let sym = 0.5 * (p[0][1] + p[1][0]);
        p[0][1] = sym;
        p[1][0] = sym;

        let tr = p[0][0] + p[1][1];
        let det = p[0][0] * p[1][1] - sym * sym;
        let lmax = 0.5 * (tr + ((tr * tr - 4.0 * det).max(0.0)).sqrt());
        let z = C64::new(c[0], c[1]);
        let (v, gz) = f(z);
        if v < best.value {
            best.value = v;
            best.arg = z;
        }
        g = gz;
        if lmax.sqrt() <= tol * (1.0 + best.arg.norm()) {
            break;
        }
    }
    best
}

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`.
/// Returns `(argmax, max)`.
pub fn golden_max<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iters = 0;
    while (b - a) > tol && iters < 200 {
        iters += 1;
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Euclidean projection of `v` onto `{p : p_i >= 0, sum p_i = 1}`.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        css += uk;
        let t = (css - 1.0) / (k as f64 + 1.0);
        if uk - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipsoid_finds_kink_minimum() {
        // |λ - (1 + 2i)| + 0.1 |λ|, minimized at 1 + 2i
        let target = C64::new(1.0, 2.0);
        let f = |z: C64| {
            let d = z - target;
            let mut g = C64::new(0.0, 0.0);
            if d.norm() > 0.0 {
                g += d / d.norm();
            }
            if z.norm() > 0.0 {
                g += 0.1 * z / z.norm();
            }
            (d.norm() + 0.1 * z.norm(), g)
        };
        let r = ellipsoid_min(f, C64::new(0.0, 0.0), 10.0, 1e-12, 1000);
        assert!((r.arg - target).norm() < 1e-9, "{:?}", r);
    }

    #[test]
    fn ellipsoid_smooth_quadratic() {
        let t = C64::new(-0.3, 0.7);
        let f = |z: C64| ((z - t).norm_sqr(), 2.0 * (z - t));
        let r = ellipsoid_min(f, C64::new(0.0, 0.0), 3.0, 1e-12, 1000);
        assert!((r.arg - t).norm() < 1e-9);
        assert!(r.value < 1e-17);
    }

    #[test]
    fn golden_section_parabola() {
        let (x, v) = golden_max(|x| -(x - 0.3) * (x - 0.3) + 2.0, -1.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn simplex_projection() {
        assert_eq!(project_simplex(&[0.5, 0.5]), vec![0.5, 0.5]);
        assert_eq!(project_simplex(&[2.0, 0.0]), vec![1.0, 0.0]);
        let p = project_simplex(&[0.3, -0.2, 0.9]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(p.iter().all(|&x| x >= 0.0));
        assert!((p[0] - 0.2).abs() < 1e-15 && p[1] == 0.0 && (p[2] - 0.8).abs() < 1e-15);
    }
}
