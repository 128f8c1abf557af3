//! Cartan (KAK) decompositions `u = e^{iχ} · D · exp(-i X) · P` for the three
//! level-pair splits, and the two-photon-free rewriting of split C.
//!
//! Each split fixes a diagonal sign matrix `Θ`. Conjugation by `Θ` fixes the
//! subalgebra 𝔎 (a 2×2 block plus a commuting diagonal) and negates 𝔓, so
//! `M = Θ u† Θ u = P²` and `K = u P†` is block diagonal.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gates::walsh_hadamard;
use crate::gellmann::{basis, check_cartan_split, decompose, DiagonalVariant, GellCoeffs};
use crate::mat3::{
    expm_hermitian_generator, frobenius_distance, logm_unitary, phase_insensitive_distance,
    BranchVector, CMat3,
};
use crate::report::{DiscrepancyReport, ReportEntry};
use crate::scalar::{cis, wrap_pi, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitName {
    A,
    B,
    C,
}

impl SplitName {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::A => "A",
            Self::B => "B",
            Self::C => "C",
        }
    }
}

impl fmt::Display for SplitName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SplitName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Self::A),
            "B" => Ok(Self::B),
            "C" => Ok(Self::C),
            _ => Err(Error::UnknownSplit(s.to_string())),
        }
    }
}

/// A Cartan split with its Euler frame.
///
/// `block` is the level pair acted on by 𝔎's SU(2) part, with `z`, `y`, `x`
/// the Gell-Mann indices that act as the Pauli matrices on it. `commuting` is
/// the diagonal element of 𝔎 that commutes with the whole block.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanSplit {
    pub name: SplitName,
    pub k_indices: [usize; 4],
    pub p_indices: [usize; 4],
    pub involution_sign: [f64; 3],
    pub block: (usize, usize),
    pub spectator: usize,
    pub z: usize,
    pub y: usize,
    pub x: usize,
    pub commuting: usize,
}

impl CartanSplit {
    pub fn theta<T: Real>(&self) -> CMat3<T> {
        CMat3::diag_real(self.involution_sign.map(T::lit))
    }

    /// Basis variant containing the split's diagonal pair.
    pub fn variant(&self) -> DiagonalVariant {
        match self.name {
            SplitName::A => DiagonalVariant::Standard,
            SplitName::B => DiagonalVariant::Variant10_12,
            SplitName::C => DiagonalVariant::Variant9_11,
        }
    }

    pub fn diag_support(&self) -> [usize; 2] {
        [self.z, self.commuting]
    }

    pub fn first_support(&self) -> [usize; 2] {
        [self.x, self.y]
    }
}

/// One of the splits `A` (block 0–1), `B` (block 1–2) or `C` (block 0–2).
pub fn split(name: &str) -> Result<CartanSplit> {
    Ok(split_named(name.parse()?))
}

pub fn split_named(name: SplitName) -> CartanSplit {
    match name {
        SplitName::A => CartanSplit {
            name,
            k_indices: [1, 2, 3, 8],
            p_indices: [4, 5, 6, 7],
            involution_sign: [1.0, 1.0, -1.0],
            block: (0, 1),
            spectator: 2,
            z: 3,
            y: 2,
            x: 1,
            commuting: 8,
        },
        SplitName::B => CartanSplit {
            name,
            k_indices: [6, 7, 10, 12],
            p_indices: [1, 2, 4, 5],
            involution_sign: [-1.0, 1.0, 1.0],
            block: (1, 2),
            spectator: 0,
            z: 10,
            y: 7,
            x: 6,
            commuting: 12,
        },
        SplitName::C => CartanSplit {
            name,
            k_indices: [4, 5, 9, 11],
            p_indices: [1, 2, 6, 7],
            involution_sign: [1.0, -1.0, 1.0],
            block: (0, 2),
            spectator: 1,
            z: 9,
            y: 5,
            x: 4,
            commuting: 11,
        },
    }
}

pub fn all_splits() -> [CartanSplit; 3] {
    [SplitName::A, SplitName::B, SplitName::C].map(split_named)
}

/// `u = k · p` with `Θ k Θ = k` and `log p ∈ 𝔓`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KakFactors<T: Real> {
    pub k: CMat3<T>,
    pub p: CMat3<T>,
    /// Hermitian `h` with `p = exp(-i h)` and `h` in the span of 𝔓.
    pub p_generator: CMat3<T>,
    pub branch: BranchVector,
    /// Norm of the discarded non-𝔓 part of `log M / 2`.
    pub foreign: T,
}

fn selection_tol<T: Real>() -> T {
    T::lit(1e-9).max(T::epsilon() * T::lit(1e4))
}

pub fn kak_factor<T: Real>(u: &CMat3<T>, s: &CartanSplit) -> Result<KakFactors<T>> {
    u.require_unitary()?;
    let theta = s.theta::<T>();
    let m = theta * u.adjoint() * theta * *u;
    let mut best: Option<(T, T, BranchVector, GellCoeffs<T>)> = None;
    for branch in BranchVector::enumerate(1) {
        let g = logm_unitary(&m, branch)?.scale_real(T::lit(0.5));
        let co = decompose(&g, DiagonalVariant::Standard)?;
        let foreign = co.foreign_norm(&s.p_indices);
        let size = g.frobenius_norm();
        let better = match &best {
            None => true,
            Some((bf, bs, _, _)) => {
                let slack = T::epsilon() * T::lit(1e3);
                foreign < *bf - slack || (foreign <= *bf + slack && size < *bs - slack)
            }
        };
        if better {
            best = Some((foreign, size, branch, co));
        }
    }
    let (foreign, _, branch, co) = best.expect("branch enumeration is non-empty");
    if foreign > selection_tol() {
        return Err(Error::BranchSelectionFailed {
            best_foreign: foreign.as_f64(),
        });
    }
    let mut kept = GellCoeffs::default();
    for &i in &s.p_indices {
        kept.c[i] = co.c[i];
    }
    let p_generator = kept.reconstruct();
    let p = expm_hermitian_generator(&p_generator)?;
    let k = *u * p.adjoint();
    Ok(KakFactors {
        k,
        p,
        p_generator,
        branch,
        foreign,
    })
}

/// `e^{iχ} · exp(-i(d0 λz + d1 λw)) · exp(-i(f0 λx + f1 λy)) · exp(-i Σ s_j λ_pj)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanFactors<T: Real> {
    pub global_phase: T,
    /// Coefficients of `(z, commuting)`, e.g. `(β3, α8)` for split A.
    pub diag_coeffs: [T; 2],
    /// Coefficients of `(x, y)`, e.g. `(β1, β2)` for split A.
    pub first_off: [T; 2],
    /// Coefficients over `p_indices`.
    pub second_off: [T; 4],
    /// z–y–z Euler angles `(α1, α2, α3)` of the block.
    pub euler: [T; 3],
    pub split: CartanSplit,
    /// Largest structural defect discarded while factoring.
    pub foreign: T,
}

impl<T: Real> CartanFactors<T> {
    pub fn generators(&self) -> [GellCoeffs<T>; 3] {
        let s = &self.split;
        let d = GellCoeffs::from_pairs(&[
            (s.z, self.diag_coeffs[0]),
            (s.commuting, self.diag_coeffs[1]),
        ]);
        let f = GellCoeffs::from_pairs(&[(s.x, self.first_off[0]), (s.y, self.first_off[1])]);
        let p = GellCoeffs::from_pairs(&[0, 1, 2, 3].map(|j| (s.p_indices[j], self.second_off[j])));
        [d, f, p]
    }

    pub fn supports(&self) -> [Vec<usize>; 3] {
        let s = &self.split;
        [
            s.diag_support().to_vec(),
            s.first_support().to_vec(),
            s.p_indices.to_vec(),
        ]
    }

    /// The three factors without the global phase.
    pub fn factor_matrices(&self) -> [CMat3<T>; 3] {
        self.generators()
            .map(|g| expm_hermitian_generator(&g.reconstruct()).expect("Hermitian by construction"))
    }
}

pub fn compose_factors<T: Real>(f: &CartanFactors<T>) -> CMat3<T> {
    let [d, x, p] = f.factor_matrices();
    (d * x * p).scale(cis(f.global_phase))
}

// z–y–z angles of `[[a, b], [-b*, a*]] = e^{-iα1σz} e^{-iα2σy} e^{-iα3σz}`.
fn euler_zyz<T: Real>(a: num_complex::Complex<T>, b: num_complex::Complex<T>) -> [T; 3] {
    let alpha2 = b.norm().atan2(a.norm());
    let tiny = T::epsilon().sqrt() * T::lit(1e-3);
    let arg = |z: num_complex::Complex<T>| z.im.atan2(z.re);
    if b.norm() <= tiny {
        return [wrap_pi(-arg(a)), T::zero(), T::zero()];
    }
    if a.norm() <= tiny {
        return [wrap_pi(-arg(-b)), alpha2, T::zero()];
    }
    let sum = -arg(a);
    let diff = -arg(-b);
    let half = T::lit(0.5);
    [
        wrap_pi((sum + diff) * half),
        alpha2,
        wrap_pi((sum - diff) * half),
    ]
}

/// Full decomposition of `u` over split `s`.
pub fn cartan_decompose<T: Real>(u: &CMat3<T>, s: &CartanSplit) -> Result<CartanFactors<T>> {
    u.require_unitary()?;
    let det = u.det();
    let chi = det.im.atan2(det.re) / T::lit(3.0);
    let u_su = u.scale(cis(-chi));
    let kak = kak_factor(&u_su, s)?;
    let k = kak.k;
    let theta = s.theta::<T>();
    let k_defect = frobenius_distance(&(theta * k * theta), &k);

    let (a, b) = s.block;
    let spectator = k[(s.spectator, s.spectator)];
    let r3 = T::lit(3.0).sqrt();
    // exp(-iα_w λ_w) puts e^{2iα_w/√3} on the spectator level
    let alpha_w = r3 * spectator.im.atan2(spectator.re) * T::lit(0.5);
    let unphase = cis(alpha_w / r3);
    let (ka, kb) = (k[(a, a)] * unphase, k[(a, b)] * unphase);
    let euler = euler_zyz(ka, kb);
    let [a1, a2, a3] = euler;
    let two = T::lit(2.0);
    let first_off = [a2 * (two * a3).sin(), a2 * (two * a3).cos()];
    let diag_coeffs = [a1 + a3, alpha_w];

    let pco = decompose(&kak.p_generator, DiagonalVariant::Standard)?;
    let second_off = [0, 1, 2, 3].map(|j| pco.c[s.p_indices[j]]);
    Ok(CartanFactors {
        global_phase: chi,
        diag_coeffs,
        first_off,
        second_off,
        euler,
        split: s.clone(),
        foreign: kak.foreign.max(k_defect),
    })
}

/// One factor `exp(-i · angle · Σ c_j λ_j)` of a Givens chain.
#[derive(Clone, Debug, PartialEq)]
pub struct GivensFactor<T: Real> {
    pub support: Vec<usize>,
    /// Unit-norm coefficients (all zero for an identity factor).
    pub coeffs: GellCoeffs<T>,
    pub angle: T,
}

impl<T: Real> GivensFactor<T> {
    fn new(coeffs: GellCoeffs<T>, scale: T) -> Self {
        let norm = coeffs
            .c
            .iter()
            .fold(T::zero(), |acc, v| acc + *v * *v)
            .sqrt();
        let support = coeffs.support(T::zero());
        if norm == T::zero() {
            return Self {
                support,
                coeffs,
                angle: T::zero(),
            };
        }
        Self {
            support,
            coeffs: coeffs.scale(T::one() / norm),
            angle: norm * scale,
        }
    }

    pub fn matrix(&self) -> CMat3<T> {
        let g = self.coeffs.reconstruct().scale_real(self.angle);
        expm_hermitian_generator(&g).expect("Hermitian by construction")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GivensChain<T: Real> {
    pub factors: Vec<GivensFactor<T>>,
    pub global_phase: T,
    pub source: CartanFactors<T>,
}

impl<T: Real> GivensChain<T> {
    pub fn product(&self) -> CMat3<T> {
        let m = self
            .factors
            .iter()
            .fold(CMat3::identity(), |acc, f| acc * f.matrix());
        m.scale(cis(self.global_phase))
    }

    /// Largest `|c4| + |c5|` over the factors' generators.
    pub fn two_photon_weight(&self) -> T {
        self.factors
            .iter()
            .map(|f| (f.coeffs.c[4].abs() + f.coeffs.c[5].abs()) * f.angle.abs())
            .fold(T::zero(), T::max)
    }

    /// Whether the three factors obtained by only relabelling `λ4 → λ6` and
    /// `λ5 → λ7` in the middle factor reproduce the source product.
    pub fn compresses_to_three(&self, tol: T) -> bool {
        self.relabel_distance() <= tol
    }

    /// Frobenius distance between the relabelled three-factor product and
    /// the source product.
    pub fn relabel_distance(&self) -> T {
        let f = &self.source;
        let [d, _, p] = f.factor_matrices();
        let middle = GellCoeffs::from_pairs(&[(6, f.first_off[0]), (7, f.first_off[1])]);
        let x = expm_hermitian_generator(&middle.reconstruct()).expect("Hermitian by construction");
        let three = (d * x * p).scale(cis(f.global_phase));
        frobenius_distance(&three, &compose_factors(f))
    }
}

/// Rewrites the `λ4/λ5` middle factor of a split-C decomposition as
/// `exp(-i(π/2)λ2) · exp(-i(c6 λ6 + c7 λ7)) · exp(+i(π/2)λ2)`.
pub fn eliminate_two_photon<T: Real>(f: &CartanFactors<T>) -> Result<GivensChain<T>> {
    if f.split.name != SplitName::C {
        return Err(Error::WrongSplit {
            expected: "C",
            found: f.split.name.as_str(),
        });
    }
    let [d, x, p] = f.generators();
    let mut factors = vec![GivensFactor::new(d, T::one())];
    if x.c[4] == T::zero() && x.c[5] == T::zero() {
        factors.push(GivensFactor::new(x, T::one()));
    } else {
        let half_pi = T::FRAC_PI_2();
        let l2 = GellCoeffs::from_pairs(&[(2, T::one())]);
        // R = exp(+i(π/2)λ2); R X R† lives on {λ6, λ7}
        let r = expm_hermitian_generator(&l2.reconstruct().scale_real(-half_pi))?;
        let moved = (r * x.reconstruct() * r.adjoint()).hermitian_part();
        let mc = decompose(&moved, DiagonalVariant::Standard)?;
        let mut pure = GellCoeffs::default();
        pure.c[6] = mc.c[6];
        pure.c[7] = mc.c[7];
        factors.push(GivensFactor::new(l2, half_pi));
        factors.push(GivensFactor::new(pure, T::one()));
        factors.push(GivensFactor::new(l2, -half_pi));
    }
    factors.push(GivensFactor::new(p, T::one()));
    Ok(GivensChain {
        factors,
        global_phase: f.global_phase,
        source: f.clone(),
    })
}

/// The printed two-photon-free Hamiltonians and times for the Walsh-Hadamard
/// gate, composed as `exp(-iH1θ1) exp(-iH2θ2) exp(-iH3θ3)`.
pub fn printed_h_list() -> CMat3<f64> {
    let h1 = CMat3::diag_real([0.9631, -0.6091, 0.8471]);
    let h2 = CMat3::from_real([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 1.0, 0.0]]);
    let h3 = basis::<f64>(2).expect("valid").scale_real(0.5907)
        + basis::<f64>(7).expect("valid").scale_real(0.8069);
    let e = |h: CMat3<f64>, t: f64| expm_hermitian_generator(&h.scale_real(t)).expect("Hermitian");
    e(h1, 6.5239) * e(h2, 5.9977) * e(h3, 4.4994)
}

/// `|Tr(W† G)| / 3` for the printed Hamiltonian list, with the phase-free
/// Frobenius distance as a note.
pub fn h_list_fidelity() -> ReportEntry {
    let g = printed_h_list();
    let w = walsh_hadamard::<f64>();
    let fid = (w.adjoint() * g).trace().norm() / 3.0;
    let dist = phase_insensitive_distance(&g, &w);
    ReportEntry::info(
        "gfin",
        "printed H-list fidelity to W",
        vec![fid],
        format!("phase-insensitive Frobenius distance {dist:.4}"),
    )
}

/// Largest deviation over `angles` of `exp(iλ2θ) λ_j exp(-iλ2θ)` from
/// `λ_j cos θ + λ_k sin θ`.
pub fn lambda2_identity_deviation(j: usize, k: usize, angles: &[f64]) -> Result<f64> {
    let (lj, lk) = (basis::<f64>(j)?, basis::<f64>(k)?);
    let mut worst = 0.0f64;
    for &t in angles {
        let want = lj.scale_real(t.cos()) + lk.scale_real(t.sin());
        worst = worst.max(frobenius_distance(&rotate_by_lambda2(j, t)?, &want));
    }
    Ok(worst)
}

/// Twenty angles in `(-π, π)`, fixed by `seed`.
pub fn sample_angles(seed: u64) -> Vec<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
    (0..20)
        .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect()
}

/// The two-photon elimination audit: the conjugation identities as printed,
/// the Walsh-Hadamard chain under split C, and the printed Hamiltonian list.
pub fn verify_gfin() -> Result<DiscrepancyReport> {
    let section = "gfin";
    let angles = sample_angles(11);
    let mut r = DiscrepancyReport::default();
    r.push(ReportEntry::check(
        section,
        "exp(i l2 t) l5 exp(-i l2 t) = l5 cos t + l7 sin t",
        lambda2_identity_deviation(5, 7, &angles)?,
        1e-12,
    ));
    r.push(ReportEntry::check(
        section,
        "exp(i l2 t) l4 exp(-i l2 t) = l4 cos t + l6 sin t",
        lambda2_identity_deviation(4, 6, &angles)?,
        1e-12,
    ));
    let w = walsh_hadamard::<f64>();
    let f = cartan_decompose(&w, &split_named(SplitName::C))?;
    let chain = eliminate_two_photon(&f)?;
    r.push(ReportEntry::check(
        section,
        "W chain two-photon weight",
        chain.two_photon_weight(),
        1e-9,
    ));
    r.push(ReportEntry::check(
        section,
        "W chain product",
        frobenius_distance(&chain.product(), &w),
        1e-9,
    ));
    r.push(ReportEntry::info(
        section,
        "W relabelled three-factor distance",
        vec![chain.relabel_distance()],
        "l4 -> l6, l5 -> l7 in the middle factor",
    ));
    r.push(h_list_fidelity());
    Ok(r)
}

/// Checks that every split satisfies the Cartan closure conditions.
pub fn splits_are_valid() -> bool {
    all_splits()
        .iter()
        .all(|s| check_cartan_split(&s.k_indices, &s.p_indices))
}

/// `exp(iλ2θ) λ_j exp(-iλ2θ)`.
pub fn rotate_by_lambda2<T: Real>(j: usize, theta: T) -> Result<CMat3<T>> {
    let r = expm_hermitian_generator(&basis::<T>(2)?.scale_real(-theta))?;
    Ok(r * basis::<T>(j)? * r.adjoint())
}
