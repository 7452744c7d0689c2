//! Seeded random matrices and vectors for tests and optimizer restarts.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::{C64, CMatrix};

/// Deterministic RNG from a bare seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Child seed for restart `index`, stable across serial and parallel
/// schedules.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 step
    let mut z = seed
        .wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn standard_normal(rng: &mut impl Rng) -> f64 {
    // Box-Muller; the second variate is discarded.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Complex Gaussian (Ginibre) matrix.
pub fn ginibre(rng: &mut impl Rng, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, |_, _| {
        C64::new(standard_normal(rng), standard_normal(rng))
    })
}

/// Random density matrix G G^dag / tr from the Hilbert-Schmidt ensemble.
pub fn density_hs(rng: &mut impl Rng, dim: usize) -> CMatrix {
    loop {
        let g = ginibre(rng, dim);
        let rho = g.mul(&g.dagger());
        let t = rho.trace().re;
        if t > 1e-12 {
            return rho.scale_re(1.0 / t).hermitize();
        }
    }
}

/// Random unitary: modified Gram-Schmidt orthonormalization of a
/// Ginibre matrix (columns).
pub fn unitary(rng: &mut impl Rng, dim: usize) -> CMatrix {
    loop {
        let g = ginibre(rng, dim);
        if let Some(u) = orthonormalize_columns(&g) {
            return u;
        }
    }
}

fn orthonormalize_columns(g: &CMatrix) -> Option<CMatrix> {
    let n = g.dim();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| g.column(j)).collect();
    for j in 0..n {
        for k in 0..j {
            let proj: C64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..n {
                let d = proj * cols[k][i];
                cols[j][i] -= d;
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            return None;
        }
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    Some(CMatrix::from_fn(n, |i, j| cols[j][i]))
}

/// Random real unit vector.
pub fn unit_vector(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..len).map(|_| standard_normal(rng)).collect();
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hs_norm;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = rng_from_seed(42);
        for dim in [2, 3, 5] {
            let u = unitary(&mut rng, dim);
            let d = hs_norm(&u.dagger().mul(&u).sub(&CMatrix::identity(dim)));
            assert!(d < 1e-12, "dim {dim}: {d:.3e}");
        }
    }

    #[test]
    fn density_is_density() {
        let mut rng = rng_from_seed(1);
        let rho = density_hs(&mut rng, 4);
        assert!(rho.is_density(1e-10));
    }

    #[test]
    fn child_seeds_distinct() {
        let a = child_seed(0, 0);
        let b = child_seed(0, 1);
        let c = child_seed(1, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
    }
}
