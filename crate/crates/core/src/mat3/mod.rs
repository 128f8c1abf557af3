//! Fixed-size complex 3×3 linear algebra.
//!
//! Everything here is written out by hand for the 3×3 case: arithmetic,
//! structural predicates, Hermitian/unitary eigendecomposition, the matrix
//! exponential of a Hermitian generator, the branch-aware logarithm of a
//! unitary and Haar sampling.

mod eigen;
mod functions;
mod haar;

pub use eigen::{eig_hermitian, eig_unitary, EigenSystem};
pub use functions::{expm_hermitian_generator, logm_unitary, BranchVector};
pub use haar::{haar_random_batch, haar_random_unitary, haar_random_unitary_from};

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{cr, Real, C};

/// A 3×3 complex matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat3<T: Real> {
    m: [[C<T>; 3]; 3],
}

impl<T: Real> CMat3<T> {
    /// Builds a matrix from rows, rejecting NaN/Inf entries.
    pub fn try_from_rows(m: [[C<T>; 3]; 3]) -> Result<Self> {
        if m.iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            Ok(Self { m })
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Builds a matrix from rows.
    ///
    /// Panics on non-finite entries; use [`CMat3::try_from_rows`] for untrusted data.
    pub fn from_rows(m: [[C<T>; 3]; 3]) -> Self {
        Self::try_from_rows(m).expect("finite matrix entries")
    }

    /// Builds a matrix from real rows.
    pub fn from_real(m: [[T; 3]; 3]) -> Self {
        Self::from_fn(|i, j| cr(m[i][j]))
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut m = [[C::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z = f(i, j);
            }
        }
        Self::from_rows(m)
    }

    pub fn zero() -> Self {
        Self {
            m: [[C::zero(); 3]; 3],
        }
    }

    pub fn identity() -> Self {
        Self::diag([C::new(T::one(), T::zero()); 3])
    }

    pub fn diag(d: [C<T>; 3]) -> Self {
        let mut out = Self::zero();
        for (i, z) in d.into_iter().enumerate() {
            out.m[i][i] = z;
        }
        out
    }

    pub fn diag_real(d: [T; 3]) -> Self {
        Self::diag(d.map(cr))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: [[C<T>; 3]; 3]) -> Self {
        Self::from_fn(|i, j| cols[j][i])
    }

    pub fn rows(&self) -> &[[C<T>; 3]; 3] {
        &self.m
    }

    pub fn column(&self, j: usize) -> [C<T>; 3] {
        [self.m[0][j], self.m[1][j], self.m[2][j]]
    }

    pub fn diagonal(&self) -> [C<T>; 3] {
        [self.m[0][0], self.m[1][1], self.m[2][2]]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.m[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.m[j][i])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.m[i][j].conj())
    }

    pub fn trace(&self) -> C<T> {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    pub fn det(&self) -> C<T> {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self::from_fn(|i, j| self.m[i][j] * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(cr(s))
    }

    /// `A B - B A`.
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// `A B + B A`.
    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// `self · v`.
    pub fn apply(&self, v: &[C<T>; 3]) -> [C<T>; 3] {
        let mut out = [C::zero(); 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.m[i][0] * v[0] + self.m[i][1] * v[1] + self.m[i][2] * v[2];
        }
        out
    }

    pub fn frobenius_norm(&self) -> T {
        self.m
            .iter()
            .flatten()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// Largest entry deviation of `A†A` from the identity, in Frobenius norm.
    pub fn unitarity_deviation(&self) -> T {
        frobenius_distance(&(self.adjoint() * *self), &Self::identity())
    }

    pub fn hermiticity_deviation(&self) -> T {
        frobenius_distance(self, &self.adjoint())
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Frobenius norm of the off-diagonal part.
    pub fn off_diagonal_norm(&self) -> T {
        let mut acc = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    acc += self.m[i][j].norm_sqr();
                }
            }
        }
        acc.sqrt()
    }

    pub fn is_diagonal(&self, tol: T) -> bool {
        self.off_diagonal_norm() <= tol
    }

    /// Real part of `Tr(A† B)`, the Frobenius inner product.
    pub fn frobenius_inner(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc += (self.m[i][j].conj() * other.m[i][j]).re;
            }
        }
        acc
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale_real(T::lit(0.5))
    }

    /// `(A - A†) / 2i`.
    pub fn skew_part(&self) -> Self {
        (*self - self.adjoint()).scale(C::new(T::zero(), -T::lit(0.5)))
    }

    /// Converts to another precision.
    pub fn cast<U: Real>(&self) -> CMat3<U> {
        CMat3::from_fn(|i, j| {
            let z = self.m[i][j];
            C::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64()))
        })
    }

    pub(crate) fn require_hermitian(&self) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation <= T::precondition_tol() {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                deviation: deviation.as_f64(),
            })
        }
    }

    pub(crate) fn require_unitary(&self) -> Result<()> {
        let deviation = self.unitarity_deviation();
        if deviation <= T::precondition_tol() {
            Ok(())
        } else {
            Err(Error::NotUnitary {
                deviation: deviation.as_f64(),
            })
        }
    }
}

/// `sqrt(sum |a_ij - b_ij|^2)`.
pub fn frobenius_distance<T: Real>(a: &CMat3<T>, b: &CMat3<T>) -> T {
    (*a - *b).frobenius_norm()
}

/// Frobenius distance after removing the best global phase between `a` and `b`.
pub fn phase_insensitive_distance<T: Real>(a: &CMat3<T>, b: &CMat3<T>) -> T {
    let overlap = (a.adjoint() * *b).trace();
    let phase = if overlap.norm() > T::zero() {
        overlap / cr(overlap.norm())
    } else {
        cr(T::one())
    };
    frobenius_distance(&a.scale(phase), b)
}

impl<T: Real> Index<(usize, usize)> for CMat3<T> {
    type Output = C<T>;
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.m[i][j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for CMat3<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.m[i][j]
    }
}

impl<T: Real> Add for CMat3<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.m[i][j] + rhs.m[i][j])
    }
}

impl<T: Real> AddAssign for CMat3<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<T: Real> Sub for CMat3<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.m[i][j] - rhs.m[i][j])
    }
}

impl<T: Real> Neg for CMat3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.m[i][j])
    }
}

impl<T: Real> Mul for CMat3<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = [[C::zero(); 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z = self.m[i][0] * rhs.m[0][j]
                    + self.m[i][1] * rhs.m[1][j]
                    + self.m[i][2] * rhs.m[2][j];
            }
        }
        Self { m: out }
    }
}

impl<T: Real> Mul<C<T>> for CMat3<T> {
    type Output = Self;
    fn mul(self, rhs: C<T>) -> Self {
        self.scale(rhs)
    }
}

impl<T: Real> std::iter::Sum for CMat3<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

pub(crate) fn vdot<T: Real>(a: &[C<T>; 3], b: &[C<T>; 3]) -> C<T> {
    a[0].conj() * b[0] + a[1].conj() * b[1] + a[2].conj() * b[2]
}

pub(crate) fn vnorm<T: Real>(a: &[C<T>; 3]) -> T {
    (a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()).sqrt()
}
