//! Seeded random matrices and vectors.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::matrix::{norm, ComplexMatrix, C64};
use crate::linalg::svd::orthonormalize_columns;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes several words into one seed (splitmix64 finalizer per word).
pub fn derive_seed(parts: &[u64]) -> u64 {
    let mut h: u64 = 0x9e37_79b9_7f4a_7c15;
    for &p in parts {
        let mut z = h ^ p.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        h = z ^ (z >> 31);
    }
    h
}

/// Standard complex normal: real and imaginary parts independent N(0, 1/2).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_normal(rng)).collect()
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(m, n, |_, _| complex_normal(rng))
}

/// Uniform point on the unit sphere of `C^n`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    loop {
        let v = gaussian_vector(rng, n);
        let nv = norm(&v);
        if nv > 1e-12 {
            return v.iter().map(|z| z / nv).collect();
        }
    }
}

/// Haar-distributed unitary via Gram-Schmidt on a Gaussian matrix. Gram-Schmidt
/// yields the QR factor with positive diagonal in `R`, which is the Haar measure.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| g.column(j)).collect();
    orthonormalize_columns(&mut cols);
    ComplexMatrix::from_columns(&cols)
}

/// Random matrix with operator norm at most `radius` (Gaussian direction scaled by a
/// uniform radius).
pub fn matrix_in_ball<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize, radius: f64) -> ComplexMatrix {
    let g = gaussian_matrix(rng, m, n);
    let gn = crate::linalg::op_norm(&g);
    let r: f64 = rng.random::<f64>() * radius;
    g.scale_real(if gn > 0.0 { r / gn } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::op_norm;

    #[test]
    fn haar_is_unitary() {
        let mut rng = seeded(3);
        for n in 1..6 {
            let u = haar_unitary(&mut rng, n);
            assert!((&u.adjoint() * &u).distance(&ComplexMatrix::identity(n)) < 1e-12);
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let a = gaussian_matrix(&mut seeded(9), 3, 3);
        let b = gaussian_matrix(&mut seeded(9), 3, 3);
        assert_eq!(a, b);
        assert_ne!(derive_seed(&[1, 2]), derive_seed(&[2, 1]));
    }

    #[test]
    fn ball_respects_radius() {
        let mut rng = seeded(5);
        for _ in 0..20 {
            assert!(op_norm(&matrix_in_ball(&mut rng, 3, 3, 2.0)) <= 2.0 + 1e-12);
        }
    }
}
