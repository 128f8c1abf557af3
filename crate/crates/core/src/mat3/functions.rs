use super::eigen::{eig_hermitian, eig_unitary};
use super::CMat3;
use crate::error::Result;
use crate::scalar::{cis, cr, Real};

/// Per-eigenvalue multiples of `2pi` added to the principal generator
/// eigenvalues when taking a matrix logarithm. Entries follow the eigenvalue
/// order of [`eig_unitary`](super::eig_unitary).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BranchVector(pub [i32; 3]);

impl BranchVector {
    pub const PRINCIPAL: Self = Self([0, 0, 0]);

    pub fn is_principal(&self) -> bool {
        *self == Self::PRINCIPAL
    }

    pub fn sum(&self) -> i32 {
        self.0.iter().sum()
    }

    /// Every branch with `|k_j| <= range`, in lexicographic order.
    pub fn enumerate(range: u32) -> impl Iterator<Item = Self> {
        let r = range as i32;
        (-r..=r)
            .flat_map(move |a| (-r..=r).flat_map(move |b| (-r..=r).map(move |c| Self([a, b, c]))))
    }
}

impl From<[i32; 3]> for BranchVector {
    fn from(k: [i32; 3]) -> Self {
        Self(k)
    }
}

/// `exp(-i g)` for Hermitian `g`, computed spectrally.
pub fn expm_hermitian_generator<T: Real>(g: &CMat3<T>) -> Result<CMat3<T>> {
    let es = eig_hermitian(g)?;
    Ok(es.map_values(|lam| cis(-lam.re)))
}

/// Hermitian `g` with `exp(-i g) = u`.
///
/// The generator eigenvalues are `-phase_j + 2pi k_j`, where `phase_j` are the
/// principal eigenphases of `u` in `(-pi, pi]` ordered as by `eig_unitary`.
/// The principal branch therefore yields eigenvalues in `[-pi, pi)`.
pub fn logm_unitary<T: Real>(u: &CMat3<T>, branch: BranchVector) -> Result<CMat3<T>> {
    let es = eig_unitary(u)?;
    let phases = es.phases();
    let mut vals = [cr(T::zero()); 3];
    for j in 0..3 {
        vals[j] = cr(-phases[j] + T::TAU() * T::lit(branch.0[j] as f64));
    }
    let g = es.vectors * CMat3::diag(vals) * es.vectors.adjoint();
    Ok(g.hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat3::{eig_hermitian, frobenius_distance, haar_random_unitary};
    use crate::scalar::c;

    #[test]
    fn expm_zero_and_diagonal() {
        let z = CMat3::<f64>::zero();
        assert!(
            frobenius_distance(&expm_hermitian_generator(&z).unwrap(), &CMat3::identity()) < 1e-15
        );
        let d = CMat3::diag_real([0.3, -1.2, 2.5]);
        let e = expm_hermitian_generator(&d).unwrap();
        let want = CMat3::diag([cis(-0.3), cis(1.2), cis(-2.5)]);
        assert!(frobenius_distance(&e, &want) < 1e-15);
    }

    #[test]
    fn logm_principal_cases() {
        let g = logm_unitary(&CMat3::<f64>::identity(), BranchVector::PRINCIPAL).unwrap();
        assert!(g.frobenius_norm() < 1e-15);
        let u = CMat3::diag([cis(-0.3), c(1.0, 0.0), c(1.0, 0.0)]);
        let g = logm_unitary(&u, BranchVector::PRINCIPAL).unwrap();
        assert!(frobenius_distance(&g, &CMat3::diag_real([0.3, 0.0, 0.0])) < 1e-14);
    }

    #[test]
    fn principal_generator_eigenvalues_in_half_open_strip() {
        for seed in 0..30 {
            let u = haar_random_unitary::<f64>(seed);
            let g = logm_unitary(&u, BranchVector::PRINCIPAL).unwrap();
            for v in eig_hermitian(&g).unwrap().values {
                assert!(v.re >= -std::f64::consts::PI - 1e-12 && v.re < std::f64::consts::PI);
            }
        }
    }

    #[test]
    fn branch_enumeration_counts() {
        assert_eq!(BranchVector::enumerate(0).count(), 1);
        assert_eq!(BranchVector::enumerate(1).count(), 27);
        assert_eq!(BranchVector::enumerate(2).count(), 125);
        assert!(BranchVector::enumerate(1).next().unwrap() == BranchVector([-1, -1, -1]));
    }
}
