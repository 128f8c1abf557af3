//! Symmetries of a gate and the redundancy they induce in decompositions.
//!
//! For a gate `u` with a non-degenerate spectrum, every unitary that commutes
//! with `u` is `T(θ) = V diag(e^{-iθ1}, e^{-iθ2}, e^{-iθ3}) V†` where `V` is
//! the eigenframe of `u`. Conjugation is always `T · X · T†`.

use crate::dod::DodParams;
use crate::error::{Error, Result};
use crate::mat3::{
    eig_hermitian, eig_unitary, expm_hermitian_generator, frobenius_distance, CMat3,
};
use crate::scalar::{cis, wrap_pi, wrap_two_pi, Real, C};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutantFamily<T: Real> {
    /// Eigenvectors of the target as columns, in `eig_unitary` order.
    pub frame: CMat3<T>,
    pub eigenvalues: [C<T>; 3],
    pub target: CMat3<T>,
}

impl<T: Real> CommutantFamily<T> {
    pub fn sample(&self, theta: [T; 3]) -> CMat3<T> {
        self.frame * CMat3::diag(theta.map(|t| cis(-t))) * self.frame.adjoint()
    }

    /// Re-indexes angles given against another eigenvalue ordering.
    ///
    /// `theta[j]` belongs to the eigenvalue `order[j]`; the result is indexed
    /// like `self.eigenvalues`. Fails when `order` is not a permutation of the
    /// spectrum to within `tol`.
    pub fn relabel(&self, order: [C<T>; 3], theta: [T; 3], tol: T) -> Result<[T; 3]> {
        let mut out = [T::zero(); 3];
        let mut used = [false; 3];
        for (lam, th) in order.iter().zip(theta) {
            let hit = (0..3)
                .filter(|&i| !used[i])
                .min_by(|&a, &b| {
                    (self.eigenvalues[a] - lam)
                        .norm()
                        .partial_cmp(&(self.eigenvalues[b] - lam).norm())
                        .unwrap()
                })
                .ok_or_else(|| {
                    Error::InvalidConfig("eigenvalue order has repeated entries".into())
                })?;
            let gap = (self.eigenvalues[hit] - lam).norm();
            if gap > tol {
                return Err(Error::InvalidConfig(format!(
                    "eigenvalue {lam} is not in the spectrum (gap {gap})"
                )));
            }
            used[hit] = true;
            out[hit] = th;
        }
        Ok(out)
    }
}

/// The three-parameter commutant of `u`.
pub fn commutant<T: Real>(u: &CMat3<T>) -> Result<CommutantFamily<T>> {
    let es = eig_unitary(u)?;
    let v = es.values;
    let gap = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| (v[i] - v[j]).norm())
        .fold(T::infinity(), T::min);
    if gap <= T::degeneracy_tol() {
        return Err(Error::DegenerateSpectrum { gap: gap.as_f64() });
    }
    Ok(CommutantFamily {
        frame: es.vectors,
        eigenvalues: v,
        target: *u,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConjugatedDecomposition<T: Real> {
    /// `T·exp(-i G_d)·T†`.
    pub diagonal_factor: CMat3<T>,
    /// `T·exp(-i G_o)·T†`.
    pub offdiag_factor: CMat3<T>,
    pub still_dod_form: bool,
    pub params: Option<DodParams<T>>,
}

impl<T: Real> ConjugatedDecomposition<T> {
    pub fn product(&self) -> CMat3<T> {
        self.diagonal_factor * self.offdiag_factor
    }
}

/// Conjugates both factors of a decomposition by `t`.
///
/// The result is again a diagonal–off-diagonal decomposition when the first
/// factor stays diagonal and `t G_o t†` keeps a zero diagonal (to `1e-9`).
pub fn conjugate_decomposition<T: Real>(
    t: &CMat3<T>,
    p: &DodParams<T>,
) -> Result<ConjugatedDecomposition<T>> {
    t.require_unitary()?;
    let td = t.adjoint();
    let diagonal_factor = *t * CMat3::diag(p.phi.map(|x| cis(-x))) * td;
    let g_o = (*t * p.g_o() * td).hermitian_part();
    let offdiag_factor = *t * expm_hermitian_generator(&p.g_o())? * td;
    let tol = T::lit(1e-9).max(T::epsilon() * T::lit(1e3));
    let diag_ok = diagonal_factor.is_diagonal(tol);
    let zero_diag = (0..3).all(|i| g_o[(i, i)].re.abs() <= tol);
    let still_dod_form = diag_ok && zero_diag;
    let params = still_dod_form.then(|| {
        let g_d = (*t * p.g_d() * td).hermitian_part();
        let phi = if g_d.is_diagonal(tol) {
            [0, 1, 2].map(|i| g_d[(i, i)].re)
        } else {
            [0, 1, 2].map(|i| {
                let z = diagonal_factor[(i, i)];
                -z.im.atan2(z.re)
            })
        };
        DodParams::from_generators(&CMat3::diag_real(phi), &g_o).canonical()
    });
    Ok(ConjugatedDecomposition {
        diagonal_factor,
        offdiag_factor,
        still_dod_form,
        params,
    })
}

/// How one parameter set of a gate maps onto another.
///
/// With `x` the sorted eigenvalues of the (conjugated) source off-diagonal
/// generator and `y` those of the other set, the relation reads
/// `y[permutation[j]] = scale · x[j]` in a shared eigenframe. The shifts
/// satisfy `scale · x[j] + shifts[j] = x[j]`, are multiples of `2π/3`, and are
/// all congruent to the centre phase that the diagonal parts differ by.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport<T: Real> {
    /// True when the second argument is the source of the relation.
    pub reversed: bool,
    pub conjugator: CMat3<T>,
    pub conjugator_theta: Option<[T; 3]>,
    /// Level permutation when the conjugator is a permutation matrix up to phase.
    pub level_permutation: Option<[usize; 3]>,
    pub permutation: [usize; 3],
    pub scale: T,
    pub shifts: [T; 3],
    pub source_eigenvalues: [T; 3],
    pub target_eigenvalues: [T; 3],
    /// `shifts[j] / (1 - scale)`, the eigenvalues fixed by the relation; equal
    /// to the source eigenvalues when `scale = 1`.
    pub fixed_points: [T; 3],
    pub residual: T,
}

impl<T: Real> RelationReport<T> {
    /// `(scale, shift)` per source eigenvalue.
    pub fn affine(&self) -> [(T, T); 3] {
        self.shifts.map(|d| (self.scale, d))
    }
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Searches conjugations by the gate's commutant involutions, eigenvalue
/// pairings and scales `s ∈ {1, -2}` for the best relation between two
/// parameter sets of `u`.
pub fn relate_solutions<T: Real>(
    pa: &DodParams<T>,
    pb: &DodParams<T>,
    u: &CMat3<T>,
) -> Result<RelationReport<T>> {
    u.require_unitary()?;
    let limit = T::lit(5e-3);
    for p in [pa, pb] {
        let d = frobenius_distance(&crate::dod::compose_dod(p), u);
        if d > limit {
            return Err(Error::InvalidConfig(format!(
                "parameter set does not compose to the gate (distance {d})"
            )));
        }
    }
    let mut conjugators = vec![(CMat3::identity(), None)];
    if let Ok(family) = commutant(u) {
        let pi = T::PI();
        let z = T::zero();
        for theta in [[z, z, pi], [z, pi, z], [z, pi, pi]] {
            conjugators.push((family.sample(theta), Some(theta)));
        }
    }

    let mut best: Option<RelationReport<T>> = None;
    let margin = T::lit(1e-9);
    for reversed in [false, true] {
        let (src, dst) = if reversed { (pb, pa) } else { (pa, pb) };
        let eb = eig_hermitian(&dst.g_o())?;
        let y = eb.values.map(|v| v.re);
        let db = CMat3::diag(dst.phi.map(|x| cis(-x)));
        for (c, theta) in &conjugators {
            let ga = (*c * src.g_o() * c.adjoint()).hermitian_part();
            let ea = eig_hermitian(&ga)?;
            let x = ea.values.map(|v| v.re);
            let da = *c * CMat3::diag(src.phi.map(|x| cis(-x))) * c.adjoint();
            let proj: [CMat3<T>; 3] = [0, 1, 2].map(|j| {
                let v = ea.vector(j);
                CMat3::from_fn(|r, k| v[r] * v[k].conj())
            });
            for perm in PERMUTATIONS {
                let predicted: CMat3<T> = (0..3).map(|j| proj[j].scale_real(y[perm[j]])).sum();
                let frame = frobenius_distance(&predicted, &dst.g_o());
                for scale in [T::one(), T::lit(-2.0)] {
                    let cand = fit(scale, x, y, perm, &da, &db, frame);
                    let better = match &best {
                        None => true,
                        Some(b) => cand.0 < b.residual - margin,
                    };
                    if better {
                        best = Some(RelationReport {
                            reversed,
                            conjugator: *c,
                            conjugator_theta: *theta,
                            level_permutation: level_permutation(c),
                            permutation: perm,
                            scale,
                            shifts: cand.1,
                            source_eigenvalues: x,
                            target_eigenvalues: y,
                            fixed_points: cand.2,
                            residual: cand.0,
                        });
                    }
                }
            }
        }
    }
    let best = best.expect("at least one candidate");
    if best.residual > T::lit(1e-2) {
        return Err(Error::NoRelationFound {
            best_residual: best.residual.as_f64(),
        });
    }
    Ok(best)
}

// Residual, shifts and fixed points of one candidate relation.
fn fit<T: Real>(
    scale: T,
    x: [T; 3],
    y: [T; 3],
    perm: [usize; 3],
    da: &CMat3<T>,
    db: &CMat3<T>,
    frame: T,
) -> (T, [T; 3], [T; 3]) {
    let third = T::TAU() / T::lit(3.0);
    let one_minus = T::one() - scale;
    let mut shifts = [T::zero(); 3];
    let mut res = frame;
    for j in 0..3 {
        res = res.max((y[perm[j]] - scale * x[j]).abs());
        let want = one_minus * x[j];
        let k = (want / third).round().max(-T::lit(3.0)).min(T::lit(3.0));
        shifts[j] = k * third;
        res = res.max((want - shifts[j]).abs());
    }
    // every shift must be the same centre phase modulo 2π
    for j in 1..3 {
        res = res.max(wrap_pi(shifts[j] - shifts[0]).abs());
    }
    let centre = cis(-shifts[0]);
    res = res.max(frobenius_distance(&da.scale(centre), db));
    let fixed = if one_minus == T::zero() {
        x
    } else {
        shifts.map(|d| d / one_minus)
    };
    (res, shifts, fixed)
}

fn level_permutation<T: Real>(c: &CMat3<T>) -> Option<[usize; 3]> {
    let tol = T::lit(1e-9);
    let mut perm = [0usize; 3];
    for (i, slot) in perm.iter_mut().enumerate() {
        let hits: Vec<usize> = (0..3).filter(|&j| c[(i, j)].norm() > tol).collect();
        if hits.len() != 1 || (c[(i, hits[0])].norm() - T::one()).abs() > tol {
            return None;
        }
        *slot = hits[0];
    }
    let mut seen = perm;
    seen.sort_unstable();
    (seen == [0, 1, 2]).then_some(perm)
}

/// Phases `θ` under which the commutant of `u` reproduces `target` up to a
/// global phase, when `target` commutes with `u` and is diagonal in its frame.
pub fn theta_for<T: Real>(family: &CommutantFamily<T>, target: &CMat3<T>) -> Option<[T; 3]> {
    let inner = family.frame.adjoint() * *target * family.frame;
    if !inner.is_diagonal(T::lit(1e-9)) {
        return None;
    }
    let d = inner.diagonal();
    let ref_phase = d[0].im.atan2(d[0].re);
    Some(d.map(|z| wrap_two_pi(-(z.im.atan2(z.re) - ref_phase))))
}
