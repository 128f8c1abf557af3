//! Diagonal–off-diagonal decomposition `U = exp(-i G_d) · exp(-i G_o)`.
//!
//! `G_d = diag(φ0, φ1, φ2)` and `G_o` is Hermitian with zero diagonal. The
//! solver reduces the nine real unknowns to the three phases: for fixed `φ`
//! the only candidate for `G_o` is a logarithm of `exp(+i G_d) U`, so the
//! system to solve is "the diagonal of that logarithm vanishes".

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::gates::walsh_hadamard;
use crate::mat3::{
    expm_hermitian_generator, frobenius_distance, logm_unitary, BranchVector, CMat3,
};
use crate::report::{DiscrepancyReport, ReportEntry};
use crate::scalar::{c, circular_distance, cis, cr, wrap_pi, wrap_two_pi, Real, C};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DodParams<T: Real> {
    pub phi: [T; 3],
    pub m01: C<T>,
    pub m02: C<T>,
    pub m12: C<T>,
}

impl<T: Real> Default for DodParams<T> {
    fn default() -> Self {
        let z = cr(T::zero());
        Self {
            phi: [T::zero(); 3],
            m01: z,
            m02: z,
            m12: z,
        }
    }
}

impl<T: Real> DodParams<T> {
    pub fn g_d(&self) -> CMat3<T> {
        CMat3::diag_real(self.phi)
    }

    pub fn g_o(&self) -> CMat3<T> {
        let z = cr(T::zero());
        CMat3::from_rows([
            [z, self.m01, self.m02],
            [self.m01.conj(), z, self.m12],
            [self.m02.conj(), self.m12.conj(), z],
        ])
    }

    /// Reads `φ` from the diagonal of `g_d` and the `m`s from the upper
    /// triangle of `g_o`.
    pub fn from_generators(g_d: &CMat3<T>, g_o: &CMat3<T>) -> Self {
        Self {
            phi: [g_d[(0, 0)].re, g_d[(1, 1)].re, g_d[(2, 2)].re],
            m01: g_o[(0, 1)],
            m02: g_o[(0, 2)],
            m12: g_o[(1, 2)],
        }
    }

    /// Phases reduced to `[0, 2π)`.
    pub fn canonical(&self) -> Self {
        Self {
            phi: self.phi.map(wrap_two_pi),
            ..*self
        }
    }

    pub fn is_finite(&self) -> bool {
        self.phi.iter().all(|p| p.is_finite())
            && [self.m01, self.m02, self.m12]
                .iter()
                .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `|m01|² + |m02|² + |m12|²`, which equals `½ Tr(G_o²)`.
    pub fn offdiag_cost(&self) -> T {
        self.m01.norm_sqr() + self.m02.norm_sqr() + self.m12.norm_sqr()
    }

    /// Euclidean distance over circular phase differences and the real and
    /// imaginary parts of the `m`s.
    pub fn distance(&self, other: &Self) -> T {
        let mut acc = T::zero();
        for j in 0..3 {
            let d = circular_distance(self.phi[j], other.phi[j]);
            acc += d * d;
        }
        for (a, b) in [
            (self.m01, other.m01),
            (self.m02, other.m02),
            (self.m12, other.m12),
        ] {
            acc += (a - b).norm_sqr();
        }
        acc.sqrt()
    }

    /// `[φ0, φ1, φ2, Re m01, Im m01, Re m02, Im m02, Re m12, Im m12]`.
    pub fn to_array(&self) -> [f64; 9] {
        [
            self.phi[0].as_f64(),
            self.phi[1].as_f64(),
            self.phi[2].as_f64(),
            self.m01.re.as_f64(),
            self.m01.im.as_f64(),
            self.m02.re.as_f64(),
            self.m02.im.as_f64(),
            self.m12.re.as_f64(),
            self.m12.im.as_f64(),
        ]
    }

    pub fn from_array(a: [f64; 9]) -> Self {
        let l = T::lit;
        Self {
            phi: [l(a[0]), l(a[1]), l(a[2])],
            m01: c(l(a[3]), l(a[4])),
            m02: c(l(a[5]), l(a[6])),
            m12: c(l(a[7]), l(a[8])),
        }
    }
}

/// Multi-start solver settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveConfig<T: Real> {
    /// Grid points per phase axis.
    pub starts: usize,
    /// Largest `|k_j|` in the enumerated log branches.
    pub branch_range: u32,
    /// Reconstruction tolerance `‖compose(p) - u‖_F`.
    pub tol: T,
    pub dedup_tol: T,
    /// Non-zero seeds shift the start grid by a random offset.
    pub seed: u64,
}

impl<T: Real> Default for SolveConfig<T> {
    fn default() -> Self {
        Self {
            starts: 8,
            branch_range: 1,
            tol: T::lit(1e-9).max(T::epsilon() * T::lit(1e3)),
            dedup_tol: T::lit(1e-6).max(T::epsilon().sqrt() * T::lit(10.0)),
            seed: 0,
        }
    }
}

impl<T: Real> SolveConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.starts < 2 {
            return Err(Error::InvalidConfig(format!(
                "starts must be at least 2, got {}",
                self.starts
            )));
        }
        if !(self.tol > T::zero()) {
            return Err(Error::InvalidConfig("tol must be positive".into()));
        }
        if !(self.dedup_tol >= T::zero()) {
            return Err(Error::InvalidConfig(
                "dedup_tol must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSet<T: Real> {
    pub solutions: Vec<DodParams<T>>,
    /// `‖compose(p) - target‖_F` per solution.
    pub residuals: Vec<T>,
    pub labels: Vec<String>,
    pub target: CMat3<T>,
}

impl<T: Real> SolutionSet<T> {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&DodParams<T>> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| &self.solutions[i])
    }
}

/// `exp(-i G_d) · exp(-i G_o)`.
pub fn compose_dod<T: Real>(p: &DodParams<T>) -> CMat3<T> {
    let d = CMat3::diag(p.phi.map(|x| cis(-x)));
    let o = expm_hermitian_generator(&p.g_o()).expect("g_o is Hermitian by construction");
    d * o
}

/// Diagonal of `logm(exp(+i G_d(φ)) u, branch)`.
///
/// The logarithm is the Hermitian generator `g` with `exp(-i g) = ·`, so this
/// is minus the imaginary part of the diagonal of the ordinary matrix
/// logarithm. It vanishes exactly when `g` is a valid off-diagonal generator.
pub fn phase_residual<T: Real>(phi: [T; 3], u: &CMat3<T>, branch: BranchVector) -> Result<[T; 3]> {
    u.require_unitary()?;
    residual_unchecked(phi, u, branch)
}

fn residual_unchecked<T: Real>(phi: [T; 3], u: &CMat3<T>, branch: BranchVector) -> Result<[T; 3]> {
    let g = logm_unitary(&left_undo(phi, u), branch)?;
    Ok([g[(0, 0)].re, g[(1, 1)].re, g[(2, 2)].re])
}

fn left_undo<T: Real>(phi: [T; 3], u: &CMat3<T>) -> CMat3<T> {
    CMat3::diag(phi.map(cis)) * *u
}

/// `φ0 + φ1 + φ2 + arg det u`, reduced to `(-π, π]`.
///
/// Zero for an exact decomposition since `det u = exp(-i Σφ)`.
pub fn phase_sum_check<T: Real>(p: &DodParams<T>, u: &CMat3<T>) -> T {
    let det = u.det();
    wrap_pi(p.phi[0] + p.phi[1] + p.phi[2] + det.im.atan2(det.re))
}

/// Branches compatible with a traceless off-diagonal generator.
///
/// At a root `exp(+i G_d) u` has unit determinant, so its principal phases sum
/// to `-2π`, `0` or `2π` and the branch offsets must sum to `-1`, `0` or `1`.
pub fn candidate_branches(range: u32) -> Vec<BranchVector> {
    BranchVector::enumerate(range)
        .filter(|b| b.sum().abs() <= 1)
        .collect()
}

/// Finds every distinct root reachable from a `starts³` phase grid crossed
/// with the compatible branches.
///
/// Starts are independent and evaluated in parallel; the result only depends
/// on `u` and `cfg`. Solutions are sorted by off-diagonal cost.
pub fn solve_dod<T: Real>(u: &CMat3<T>, cfg: &SolveConfig<T>) -> Result<SolutionSet<T>> {
    cfg.validate()?;
    u.require_unitary()?;
    let offset = grid_offset::<T>(cfg.seed, cfg.starts);
    let n = cfg.starts;
    let step = T::TAU() / T::lit(n as f64);
    let branches = candidate_branches(cfg.branch_range);
    let jobs: Vec<(BranchVector, [T; 3])> = branches
        .iter()
        .flat_map(|&b| {
            (0..n * n * n).map(move |idx| {
                let ijk = [idx / (n * n), (idx / n) % n, idx % n];
                let phi = [0, 1, 2].map(|a| T::lit(ijk[a] as f64) * step + offset[a]);
                (b, phi)
            })
        })
        .collect();

    let roots: Vec<(DodParams<T>, T)> = jobs
        .par_iter()
        .filter_map(|(b, start)| newton(u, *b, *start).and_then(|phi| extract(u, phi, *b)))
        .filter(|(_, r)| *r <= cfg.tol)
        .collect();

    let mut sorted = roots;
    sorted.sort_by(|a, b| {
        a.0.offdiag_cost()
            .partial_cmp(&b.0.offdiag_cost())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| lexical(&a.0.phi, &b.0.phi))
    });
    let mut solutions: Vec<DodParams<T>> = Vec::new();
    let mut residuals = Vec::new();
    for (p, r) in sorted {
        if solutions.iter().all(|q| q.distance(&p) >= cfg.dedup_tol) {
            solutions.push(p);
            residuals.push(r);
        }
    }
    if solutions.is_empty() {
        return Err(Error::NoSolutionFound);
    }
    let labels = (1..=solutions.len()).map(|i| format!("s{i}")).collect();
    Ok(SolutionSet {
        solutions,
        residuals,
        labels,
        target: *u,
    })
}

fn lexical<T: Real>(a: &[T; 3], b: &[T; 3]) -> std::cmp::Ordering {
    for j in 0..3 {
        match a[j].partial_cmp(&b[j]) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

fn grid_offset<T: Real>(seed: u64, starts: usize) -> [T; 3] {
    if seed == 0 {
        return [T::zero(); 3];
    }
    let cell = std::f64::consts::TAU / starts as f64;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    [(); 3].map(|_| T::lit(rng.random::<f64>() * cell))
}

fn norm3<T: Real>(r: &[T; 3]) -> T {
    (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt()
}

// Damped Newton with a central-difference Jacobian.
fn newton<T: Real>(u: &CMat3<T>, branch: BranchVector, start: [T; 3]) -> Option<[T; 3]> {
    const MAX_ITER: usize = 60;
    const MAX_HALVINGS: usize = 20;
    let h = T::epsilon().cbrt();
    let stop = T::epsilon() * T::lit(64.0);
    let mut phi = start;
    let mut r = residual_unchecked(phi, u, branch).ok()?;
    let mut rn = norm3(&r);
    for _ in 0..MAX_ITER {
        if rn <= stop {
            break;
        }
        let mut jac = [[T::zero(); 3]; 3];
        for j in 0..3 {
            let mut p = phi;
            let mut m = phi;
            p[j] += h;
            m[j] -= h;
            let rp = residual_unchecked(p, u, branch).ok()?;
            let rm = residual_unchecked(m, u, branch).ok()?;
            for i in 0..3 {
                jac[i][j] = (rp[i] - rm[i]) / (h + h);
            }
        }
        let dx = solve3(jac, r.map(|x| -x))?;
        let mut t = T::one();
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial = [phi[0] + t * dx[0], phi[1] + t * dx[1], phi[2] + t * dx[2]];
            if let Ok(rt) = residual_unchecked(trial, u, branch) {
                let tn = norm3(&rt);
                if tn < rn {
                    phi = trial;
                    r = rt;
                    rn = tn;
                    accepted = true;
                    break;
                }
            }
            t *= T::lit(0.5);
        }
        if !accepted {
            break;
        }
    }
    let loose = T::epsilon().sqrt();
    (rn <= loose).then_some(phi)
}

// Gaussian elimination with partial pivoting; `None` when singular.
fn solve3<T: Real>(mut a: [[T; 3]; 3], mut b: [T; 3]) -> Option<[T; 3]> {
    let scale = a.iter().flatten().fold(T::zero(), |m, x| m.max(x.abs()));
    if !(scale > T::zero()) {
        return None;
    }
    for col in 0..3 {
        let piv =
            (col..3).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() <= scale * T::epsilon() * T::lit(16.0) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
        }
    }
    let mut x = [T::zero(); 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in row + 1..3 {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

fn extract<T: Real>(u: &CMat3<T>, phi: [T; 3], branch: BranchVector) -> Option<(DodParams<T>, T)> {
    let g = logm_unitary(&left_undo(phi, u), branch).ok()?;
    let p = DodParams::from_generators(&CMat3::diag_real(phi), &g).canonical();
    if !p.is_finite() {
        return None;
    }
    let r = frobenius_distance(&compose_dod(&p), u);
    Some((p, r))
}

#[derive(Deserialize)]
struct Table1File {
    rows: Vec<Table1Row>,
}

#[derive(Deserialize)]
struct Table1Row {
    label: String,
    m01: [f64; 2],
    m12: [f64; 2],
    m02: [f64; 2],
    phi: [f64; 3],
}

const TABLE1: &str = include_str!("../fixtures/table1.json");

/// The five printed parameter sets for the Walsh-Hadamard gate, labelled
/// "1" to "5". Residuals are the reconstruction errors of the printed values.
pub fn table1() -> SolutionSet<f64> {
    let file: Table1File = serde_json::from_str(TABLE1).expect("well-formed Table I fixture");
    let target = walsh_hadamard();
    let mut set = SolutionSet {
        solutions: vec![],
        residuals: vec![],
        labels: vec![],
        target,
    };
    for row in file.rows {
        let p = DodParams {
            phi: row.phi,
            m01: c(row.m01[0], row.m01[1]),
            m02: c(row.m02[0], row.m02[1]),
            m12: c(row.m12[0], row.m12[1]),
        };
        set.residuals
            .push(frobenius_distance(&compose_dod(&p), &target));
        set.solutions.push(p);
        set.labels.push(row.label);
    }
    set
}

/// Reconstruction (to `5e-3`) and phase-sum (to `1e-3`) checks of every
/// printed parameter set.
pub fn verify_table1() -> DiscrepancyReport {
    let set = table1();
    let mut r = DiscrepancyReport::default();
    for ((p, res), label) in set.solutions.iter().zip(&set.residuals).zip(&set.labels) {
        r.push(ReportEntry::check(
            "table1",
            format!("set {label} composes to W"),
            *res,
            5e-3,
        ));
        r.push(ReportEntry::check(
            "table1",
            format!("set {label} phase sum"),
            phase_sum_check(p, &set.target).abs(),
            1e-3,
        ));
    }
    r
}

/// For each solver root, the closest printed set and its canonical distance.
pub fn match_table1(found: &SolutionSet<f64>) -> Vec<(String, Option<usize>, f64)> {
    let printed = table1();
    printed
        .solutions
        .iter()
        .zip(&printed.labels)
        .map(|(p, label)| {
            let p = p.canonical();
            let best = found
                .solutions
                .iter()
                .enumerate()
                .map(|(i, q)| (i, p.distance(q)))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
            match best {
                Some((i, d)) => (label.clone(), Some(i), d),
                None => (label.clone(), None, f64::INFINITY),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat3::{eig_unitary, haar_random_unitary};
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn zero_params_give_identity() {
        let p = DodParams::<f64>::default();
        assert!(frobenius_distance(&compose_dod(&p), &CMat3::identity()) < 1e-15);
        assert_eq!(phase_sum_check(&p, &CMat3::identity()), 0.0);
    }

    #[test]
    fn printed_sets_reconstruct_wh() {
        let set = table1();
        assert_eq!(set.labels, ["1", "2", "3", "4", "5"]);
        for r in &set.residuals {
            assert!(*r < 5e-3, "{r}");
        }
        assert!(verify_table1().all_match());
    }

    #[test]
    fn printed_phase_sums() {
        let set = table1();
        let s1 = set.get("1").unwrap();
        assert!((s1.phi.iter().sum::<f64>() - FRAC_PI_2).abs() < 1e-3);
        let s2 = set.get("2").unwrap();
        assert!((s2.phi.iter().sum::<f64>() - FRAC_PI_2 - 4.0 * PI).abs() < 1e-3);
    }

    #[test]
    fn residual_vanishes_at_constructed_fixed_point() {
        let p = DodParams {
            phi: [0.0; 3],
            m01: c(0.3, -0.1),
            m02: c(0.2, 0.4),
            m12: c(-0.5, 0.0),
        };
        let u = compose_dod(&p);
        let r = phase_residual([0.0; 3], &u, BranchVector::PRINCIPAL).unwrap();
        assert!(norm3(&r) < 1e-12);
    }

    #[test]
    fn residual_matches_second_spectral_path() {
        let u = haar_random_unitary::<f64>(11);
        let phi = [0.4, -1.3, 2.2];
        let r = phase_residual(phi, &u, BranchVector::PRINCIPAL).unwrap();
        let es = eig_unitary(&left_undo(phi, &u)).unwrap();
        for i in 0..3 {
            let mut want = 0.0;
            for j in 0..3 {
                let v = es.vectors[(i, j)];
                want += -es.phases()[j] * v.norm_sqr();
            }
            assert!((r[i] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_rejects_non_unitary() {
        let m = CMat3::<f64>::identity().scale_real(2.0);
        assert!(matches!(
            phase_residual([0.0; 3], &m, BranchVector::PRINCIPAL),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn branch_count() {
        assert_eq!(candidate_branches(0).len(), 1);
        assert_eq!(candidate_branches(1).len(), 19);
    }

    #[test]
    fn identity_contains_zero_solution() {
        let cfg = SolveConfig {
            starts: 3,
            ..SolveConfig::default()
        };
        let set = solve_dod(&CMat3::<f64>::identity(), &cfg).unwrap();
        assert!(set
            .solutions
            .iter()
            .any(|p| p.distance(&DodParams::default()) < 1e-9));
        for (p, r) in set.solutions.iter().zip(&set.residuals) {
            assert!(*r <= cfg.tol);
            assert!(p.phi.iter().all(|x| (0.0..2.0 * PI).contains(x)));
        }
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = SolveConfig {
            starts: 1,
            ..SolveConfig::<f64>::default()
        };
        assert!(matches!(
            solve_dod(&CMat3::identity(), &cfg),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn linear_solver() {
        let x: [f64; 3] = solve3(
            [[2.0, 1.0, 0.0], [0.0, 3.0, 1.0], [1.0, 0.0, 4.0]],
            [3.0, 4.0, 5.0],
        )
        .unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-14);
        }
        assert!(solve3(
            [[1.0, 2.0, 3.0], [2.0, 4.0, 6.0], [0.0, 0.0, 1.0]],
            [1.0, 1.0, 1.0]
        )
        .is_none());
    }
}
