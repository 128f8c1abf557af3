use num_traits::Zero;

use super::{vdot, vnorm, CMat3};
use crate::error::Result;
use crate::scalar::{cr, wrap_pi, Real, C};

/// Eigenvalues with the matching unit eigenvectors stored as columns of `vectors`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenSystem<T: Real> {
    pub values: [C<T>; 3],
    pub vectors: CMat3<T>,
}

impl<T: Real> EigenSystem<T> {
    /// `V · diag(values) · V†`.
    pub fn reconstruct(&self) -> CMat3<T> {
        self.vectors * CMat3::diag(self.values) * self.vectors.adjoint()
    }

    /// Applies `f` to every eigenvalue and rebuilds the matrix in the same frame.
    pub fn map_values(&self, f: impl Fn(C<T>) -> C<T>) -> CMat3<T> {
        self.vectors * CMat3::diag(self.values.map(f)) * self.vectors.adjoint()
    }

    pub fn vector(&self, j: usize) -> [C<T>; 3] {
        self.vectors.column(j)
    }

    /// Principal phases of the eigenvalues, each in `(-pi, pi]`.
    pub fn phases(&self) -> [T; 3] {
        self.values.map(principal_phase)
    }
}

/// Principal argument in `(-pi, pi]`, with values within rounding of `-pi`
/// folded onto `+pi` so that `-1` always maps to `pi`.
pub(crate) fn principal_phase<T: Real>(z: C<T>) -> T {
    let phase = wrap_pi(z.arg());
    if phase <= -T::PI() + T::epsilon() * T::lit(64.0) {
        T::PI()
    } else {
        phase
    }
}

// Cyclic complex Jacobi sweep over the leading n×n block of `a`.
// Returns the accumulated unitary V with V† A V diagonal.
fn jacobi_hermitian<T: Real>(a: &mut [[C<T>; 3]; 3], n: usize) -> [[C<T>; 3]; 3] {
    let mut v = [[C::zero(); 3]; 3];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = cr(T::one());
    }
    let scale = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .fold(T::zero(), |acc, (i, j)| acc + a[i][j].norm_sqr())
        .sqrt();
    if scale == T::zero() {
        return v;
    }
    let target = T::epsilon() * scale * T::lit(0.1);
    for _sweep in 0..50 {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p][q].norm_sqr();
            }
        }
        if off.sqrt() <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                let r = apq.norm();
                if r <= target * T::lit(1e-3) {
                    continue;
                }
                // Phase-align the pivot, then a real rotation zeroes it.
                let phase = apq / cr(r);
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                let tau = (aqq - app) / (r + r);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                // G acts on (p, q): G_pp = c, G_pq = s, G_qp = -s conj(phase), G_qq = c conj(phase)
                let gpp = cr(cs);
                let gpq = cr(sn);
                let gqp = -phase.conj() * sn;
                let gqq = phase.conj() * cs;
                // A <- A G
                for row in a.iter_mut().take(n) {
                    let xp = row[p];
                    let xq = row[q];
                    row[p] = xp * gpp + xq * gqp;
                    row[q] = xp * gpq + xq * gqq;
                }
                // A <- G† A
                for col in 0..n {
                    let xp = a[p][col];
                    let xq = a[q][col];
                    a[p][col] = gpp.conj() * xp + gqp.conj() * xq;
                    a[q][col] = gpq.conj() * xp + gqq.conj() * xq;
                }
                a[p][q] = C::zero();
                a[q][p] = C::zero();
                a[p][p] = cr(a[p][p].re);
                a[q][q] = cr(a[q][q].re);
                for row in v.iter_mut() {
                    let xp = row[p];
                    let xq = row[q];
                    row[p] = xp * gpp + xq * gqp;
                    row[q] = xp * gpq + xq * gqq;
                }
            }
        }
    }
    v
}

// Rotates each column so that its largest-magnitude entry is real positive.
fn fix_phases<T: Real>(cols: &mut [[C<T>; 3]; 3]) {
    for col in cols.iter_mut() {
        let max = col.iter().fold(T::zero(), |m, z| m.max(z.norm()));
        if max == T::zero() {
            continue;
        }
        // first entry within rounding of the maximum, so ties resolve to the lowest index
        let pivot = col
            .iter()
            .position(|z| z.norm() >= max * (T::one() - T::lit(1e-9)))
            .unwrap_or(0);
        let phase = col[pivot].conj() / cr(col[pivot].norm());
        for z in col.iter_mut() {
            *z *= phase;
        }
    }
}

fn columns_of<T: Real>(v: &[[C<T>; 3]; 3]) -> [[C<T>; 3]; 3] {
    let mut cols = [[C::zero(); 3]; 3];
    for (j, col) in cols.iter_mut().enumerate() {
        for (i, z) in col.iter_mut().enumerate() {
            *z = v[i][j];
        }
    }
    cols
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are real and ascending; eigenvectors are orthonormal with the
/// largest-magnitude entry of each made real positive.
pub fn eig_hermitian<T: Real>(m: &CMat3<T>) -> Result<EigenSystem<T>> {
    m.require_hermitian()?;
    let mut a = m.hermitian_part().m;
    let v = jacobi_hermitian(&mut a, 3);
    let mut pairs: Vec<(T, [C<T>; 3])> = columns_of(&v)
        .into_iter()
        .enumerate()
        .map(|(j, col)| (a[j][j].re, col))
        .collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite eigenvalues"));
    let mut cols = [pairs[0].1, pairs[1].1, pairs[2].1];
    fix_phases(&mut cols);
    Ok(EigenSystem {
        values: [cr(pairs[0].0), cr(pairs[1].0), cr(pairs[2].0)],
        vectors: CMat3::from_columns(cols),
    })
}

/// Eigendecomposition of a unitary matrix.
///
/// The Hermitian part `(M+M†)/2` is diagonalized first. Any group of its
/// eigenvalues closer than `1e-3` is re-diagonalized using the restriction of
/// `(M-M†)/2i` mixed with the centred Hermitian part, so eigenvalues sharing a
/// real part are separated and near-degenerate pairs keep full accuracy. Eigenvalues are Rayleigh quotients
/// projected onto the unit circle and sorted by ascending principal phase in
/// `(-pi, pi]`.
pub fn eig_unitary<T: Real>(m: &CMat3<T>) -> Result<EigenSystem<T>> {
    m.require_unitary()?;
    let herm = m.hermitian_part();
    let skew = m.skew_part();
    let mut a = herm.m;
    let v = jacobi_hermitian(&mut a, 3);
    let diag = [a[0][0].re, a[1][1].re, a[2][2].re];
    let mut order = [0usize, 1, 2];
    order.sort_by(|&x, &y| diag[x].partial_cmp(&diag[y]).expect("finite"));
    let all_cols = columns_of(&v);
    let mut cols = [all_cols[order[0]], all_cols[order[1]], all_cols[order[2]]];
    let sorted = [diag[order[0]], diag[order[1]], diag[order[2]]];

    // contiguous groups of near-equal Hermitian eigenvalues
    let tol = T::lit(1e-3).max(T::degeneracy_tol());
    let mut start = 0;
    while start < 3 {
        let mut end = start + 1;
        while end < 3 && sorted[end] - sorted[end - 1] <= tol {
            end += 1;
        }
        let n = end - start;
        if n > 1 {
            refine_group(&mut cols[start..end], &herm, &skew);
        }
        start = end;
    }

    fix_phases(&mut cols);
    let mut pairs: Vec<(C<T>, [C<T>; 3])> = cols
        .into_iter()
        .map(|col| {
            let z = vdot(&col, &m.apply(&col));
            let n = z.norm();
            let z = if n > T::zero() {
                z / cr(n)
            } else {
                cr(T::one())
            };
            (z, col)
        })
        .collect();
    pairs.sort_by(|x, y| {
        principal_phase(x.0)
            .partial_cmp(&principal_phase(y.0))
            .expect("finite")
    });
    Ok(EigenSystem {
        values: [pairs[0].0, pairs[1].0, pairs[2].0],
        vectors: CMat3::from_columns([pairs[0].1, pairs[1].1, pairs[2].1]),
    })
}

// Re-diagonalizes a near-degenerate group of Hermitian-part eigenvectors using
// the skew part, which separates eigenvalues sharing a real part.
fn refine_group<T: Real>(cols: &mut [[C<T>; 3]], herm: &CMat3<T>, skew: &CMat3<T>) {
    let n = cols.len();
    // irrational weight so the mixed operator separates every distinct eigenvalue of M
    let mix = T::lit(0.381_966_011_250_105_15);
    let mut mean = T::zero();
    for col in cols.iter() {
        mean += vdot(col, &herm.apply(col)).re;
    }
    mean /= T::lit(n as f64);
    let op = *skew + (*herm - CMat3::identity().scale_real(mean)).scale_real(mix);
    let mut sub = [[C::zero(); 3]; 3];
    for i in 0..n {
        let oi = op.apply(&cols[i]);
        for (j, z) in sub[..n].iter_mut().enumerate() {
            z[i] = vdot(&cols[j], &oi);
        }
    }
    // make the restricted block exactly Hermitian
    for i in 0..n {
        sub[i][i] = cr(sub[i][i].re);
        for j in (i + 1)..n {
            let avg = (sub[i][j] + sub[j][i].conj()) * cr(T::lit(0.5));
            sub[i][j] = avg;
            sub[j][i] = avg.conj();
        }
    }
    let w = jacobi_hermitian(&mut sub, n);
    let old: Vec<[C<T>; 3]> = cols.to_vec();
    for (k, col) in cols.iter_mut().enumerate() {
        let mut new = [C::<T>::zero(); 3];
        for (j, o) in old.iter().enumerate() {
            for r in 0..3 {
                new[r] += o[r] * w[j][k];
            }
        }
        let nrm = vnorm(&new);
        *col = new.map(|z| z / cr(nrm));
    }
    // order within the group by the skew-part value for determinism
    cols.sort_by(|x, y| {
        let ex = vdot(x, &op.apply(x)).re;
        let ey = vdot(y, &op.apply(y)).re;
        ex.partial_cmp(&ey).expect("finite")
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat3::{frobenius_distance, haar_random_unitary};
    use crate::scalar::c;

    fn residual(m: &CMat3<f64>, es: &EigenSystem<f64>) -> f64 {
        frobenius_distance(m, &es.reconstruct())
    }

    fn orthonormality(es: &EigenSystem<f64>) -> f64 {
        frobenius_distance(&(es.vectors.adjoint() * es.vectors), &CMat3::identity())
    }

    #[test]
    fn diagonal_hermitian() {
        let m = CMat3::diag_real([1.0, -1.0, 0.0]);
        let es = eig_hermitian(&m).unwrap();
        let vals: Vec<f64> = es.values.iter().map(|z| z.re).collect();
        assert_eq!(vals, vec![-1.0, 0.0, 1.0]);
        assert!(residual(&m, &es) < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = CMat3::<f64>::identity();
        m[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            eig_hermitian(&m),
            Err(crate::Error::NotHermitian { .. })
        ));
        assert!(matches!(
            eig_unitary(&m),
            Err(crate::Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn degenerate_hermitian_spectra() {
        for m in [
            CMat3::<f64>::identity(),
            CMat3::diag_real([1.0, 1.0, 0.0]),
            CMat3::from_real([[0.5, 0.5, 0.0], [0.5, 0.5, 0.0], [0.0, 0.0, 0.0]]),
        ] {
            let es = eig_hermitian(&m).unwrap();
            assert!(residual(&m, &es) <= 1e-12 * m.frobenius_norm().max(1.0));
            assert!(orthonormality(&es) < 1e-12);
        }
    }

    #[test]
    fn unitary_spectrum_is_phase_sorted() {
        for seed in 0..50 {
            let u = haar_random_unitary::<f64>(seed);
            let es = eig_unitary(&u).unwrap();
            let ph = es.phases();
            assert!(ph[0] <= ph[1] && ph[1] <= ph[2]);
            for z in es.values {
                assert!((z.norm() - 1.0).abs() < 1e-12);
            }
            assert!(
                residual(&u, &es) <= 1e-12 * u.frobenius_norm(),
                "seed {seed}"
            );
            assert!(orthonormality(&es) < 1e-12);
        }
    }

    #[test]
    fn conjugate_pair_with_shared_real_part() {
        // e^{±i 0.4} share a real part, so the Hermitian part alone is degenerate
        let q = haar_random_unitary::<f64>(11);
        let d = CMat3::diag([
            crate::scalar::cis(0.4),
            crate::scalar::cis(-0.4),
            c(-1.0, 0.0),
        ]);
        let u = q * d * q.adjoint();
        let es = eig_unitary(&u).unwrap();
        assert!(residual(&u, &es) < 1e-12);
        let ph = es.phases();
        assert!((ph[0] + 0.4).abs() < 1e-12 && (ph[1] - 0.4).abs() < 1e-12);
        assert!((ph[2] - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn largest_entry_real_positive() {
        let u = haar_random_unitary::<f64>(3);
        let es = eig_unitary(&u).unwrap();
        for j in 0..3 {
            let col = es.vector(j);
            let k = (0..3)
                .max_by(|&a, &b| col[a].norm().partial_cmp(&col[b].norm()).unwrap())
                .unwrap();
            assert!(col[k].im.abs() < 1e-14 && col[k].re > 0.0);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let u = haar_random_unitary::<f32>(5);
        let es = eig_unitary(&u).unwrap();
        let err = (u - es.reconstruct()).frobenius_norm();
        assert!(err < 1e-5, "{err}");
    }
}
