use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::{vdot, vnorm, CMat3};
use crate::scalar::{c, cr, Real, C};

/// Haar-distributed unitary, deterministic per seed.
pub fn haar_random_unitary<T: Real>(seed: u64) -> CMat3<T> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    haar_random_unitary_from(&mut rng)
}

/// `count` independent Haar unitaries from one stream seeded by `seed`.
pub fn haar_random_batch<T: Real>(count: usize, seed: u64) -> Vec<CMat3<T>> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..count).map(|_| haar_random_unitary_from(&mut rng)).collect()
}

/// Haar-distributed unitary drawn from `rng`.
///
/// Columns of a standard complex Gaussian matrix are orthonormalized by
/// modified Gram–Schmidt. This is the QR factorization whose triangular factor
/// has a real positive diagonal, which is exactly the phase correction that
/// makes the result Haar distributed.
pub fn haar_random_unitary_from<T: Real, R: Rng + ?Sized>(rng: &mut R) -> CMat3<T> {
    let half = std::f64::consts::FRAC_1_SQRT_2;
    loop {
        let mut cols = [[C::<T>::zero(); 3]; 3];
        for col in cols.iter_mut() {
            for z in col.iter_mut() {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                *z = c(T::lit(re * half), T::lit(im * half));
            }
        }
        let mut ok = true;
        for j in 0..3 {
            for k in 0..j {
                let proj = vdot(&cols[k], &cols[j]);
                let basis = cols[k];
                for (z, b) in cols[j].iter_mut().zip(basis) {
                    *z -= b * proj;
                }
            }
            let n = vnorm(&cols[j]);
            if n <= T::epsilon().sqrt() {
                ok = false;
                break;
            }
            cols[j] = cols[j].map(|z| z / cr(n));
        }
        if ok {
            // one re-orthogonalization pass keeps unitarity at rounding level
            for j in 0..3 {
                for k in 0..j {
                    let proj = vdot(&cols[k], &cols[j]);
                    let basis = cols[k];
                    for (z, b) in cols[j].iter_mut().zip(basis) {
                        *z -= b * proj;
                    }
                }
                let n = vnorm(&cols[j]);
                cols[j] = cols[j].map(|z| z / cr(n));
            }
            return CMat3::from_columns(cols);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_with_unit_determinant_modulus() {
        for seed in 0..100 {
            let u = haar_random_unitary::<f64>(seed);
            assert!(u.is_unitary(1e-12));
            assert!((u.det().norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(haar_random_unitary::<f64>(9), haar_random_unitary::<f64>(9));
        assert_ne!(
            haar_random_unitary::<f64>(9),
            haar_random_unitary::<f64>(10)
        );
    }
}
