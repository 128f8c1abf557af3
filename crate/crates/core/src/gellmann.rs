//! The extended Gell-Mann basis `λ0..λ12`.
//!
//! `λ0 = sqrt(2/3)·I` and `λ1..λ8` are the usual orthogonal basis with
//! `Tr(λi λj) = 2 δij`. `λ9..λ12` are alternative diagonal elements:
//! `(λ9, λ11)` and `(λ10, λ12)` each replace the pair `(λ3, λ8)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::mat3::CMat3;
use crate::report::{DiscrepancyReport, ReportEntry};
use crate::scalar::{c, Real, C};

/// Number of extended basis elements.
pub const BASIS_LEN: usize = 13;

/// Off-diagonal elements shared by every variant.
pub const OFF_DIAGONAL: [usize; 6] = [1, 2, 4, 5, 6, 7];

/// Which traceless diagonal pair completes the basis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagonalVariant {
    /// `(λ3, λ8)`.
    #[default]
    Standard,
    /// `(λ9, λ11)`.
    Variant9_11,
    /// `(λ10, λ12)`.
    Variant10_12,
}

impl DiagonalVariant {
    pub const ALL: [DiagonalVariant; 3] = [Self::Standard, Self::Variant9_11, Self::Variant10_12];

    pub fn diagonal_pair(self) -> [usize; 2] {
        match self {
            Self::Standard => [3, 8],
            Self::Variant9_11 => [9, 11],
            Self::Variant10_12 => [10, 12],
        }
    }

    /// The eight traceless elements, ordered as in the printed commutator tables.
    pub fn indices(self) -> [usize; 8] {
        let [a, b] = self.diagonal_pair();
        [1, 2, a, 4, 5, 6, 7, b]
    }

    pub fn contains(self, index: usize) -> bool {
        self.indices().contains(&index)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Standard => "standard",
            Self::Variant9_11 => "variant9-11",
            Self::Variant10_12 => "variant10-12",
        }
    }
}

impl fmt::Display for DiagonalVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DiagonalVariant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| {
                format!(
                    "unknown basis variant {s:?} (expected standard, variant9-11 or variant10-12)"
                )
            })
    }
}

/// Basis element `λ_index` for `index` in `0..=12`.
pub fn basis<T: Real>(index: usize) -> Result<CMat3<T>> {
    let z = T::zero();
    let o = T::one();
    let r3 = T::lit(3.0).sqrt();
    let m = match index {
        0 => CMat3::identity().scale_real((T::lit(2.0) / T::lit(3.0)).sqrt()),
        1 => CMat3::from_real([[z, o, z], [o, z, z], [z, z, z]]),
        2 => {
            let mut m = CMat3::zero();
            m[(0, 1)] = c(z, -o);
            m[(1, 0)] = c(z, o);
            m
        }
        3 => CMat3::diag_real([o, -o, z]),
        4 => CMat3::from_real([[z, z, o], [z, z, z], [o, z, z]]),
        5 => {
            let mut m = CMat3::zero();
            m[(0, 2)] = c(z, -o);
            m[(2, 0)] = c(z, o);
            m
        }
        6 => CMat3::from_real([[z, z, z], [z, z, o], [z, o, z]]),
        7 => {
            let mut m = CMat3::zero();
            m[(1, 2)] = c(z, -o);
            m[(2, 1)] = c(z, o);
            m
        }
        8 => CMat3::diag_real([o / r3, o / r3, -(o + o) / r3]),
        9 => CMat3::diag_real([o, z, -o]),
        10 => CMat3::diag_real([z, o, -o]),
        11 => CMat3::diag_real([o / r3, -(o + o) / r3, o / r3]),
        12 => CMat3::diag_real([-(o + o) / r3, o / r3, o / r3]),
        _ => {
            return Err(Error::IndexOutOfRange {
                index,
                context: "Gell-Mann basis (0..=12)",
            })
        }
    };
    Ok(m)
}

fn basis_unchecked<T: Real>(index: usize) -> CMat3<T> {
    basis(index).expect("index within 0..=12")
}

/// Real coefficients over `λ0..λ12`.
///
/// A vector produced by [`decompose`] only populates `λ0`, the six
/// off-diagonal elements and the diagonal pair of one variant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GellCoeffs<T: Real> {
    pub c: [T; BASIS_LEN],
}

impl<T: Real> Default for GellCoeffs<T> {
    fn default() -> Self {
        Self {
            c: [T::zero(); BASIS_LEN],
        }
    }
}

impl<T: Real> GellCoeffs<T> {
    pub fn from_pairs(pairs: &[(usize, T)]) -> Self {
        let mut out = Self::default();
        for &(i, v) in pairs {
            out.c[i] += v;
        }
        out
    }

    /// `Σ c_i λ_i`.
    pub fn reconstruct(&self) -> CMat3<T> {
        self.c
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != T::zero())
            .map(|(i, v)| basis_unchecked::<T>(i).scale_real(*v))
            .sum()
    }

    /// Euclidean norm of the coefficients outside `allowed`.
    pub fn foreign_norm(&self, allowed: &[usize]) -> T {
        self.c
            .iter()
            .enumerate()
            .filter(|(i, _)| !allowed.contains(i))
            .fold(T::zero(), |acc, (_, v)| acc + *v * *v)
            .sqrt()
    }

    /// Indices whose coefficient magnitude exceeds `tol`.
    pub fn support(&self, tol: T) -> Vec<usize> {
        (0..BASIS_LEN).filter(|&i| self.c[i].abs() > tol).collect()
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            c: self.c.map(|v| v * s),
        }
    }

    pub fn to_f64(&self) -> [f64; BASIS_LEN] {
        self.c.map(|v| v.as_f64())
    }
}

/// Coefficients of Hermitian `h` over `λ0`, the off-diagonal elements and the
/// diagonal pair selected by `variant`.
///
/// Off-diagonal and `λ0` coefficients are `Tr(h λ_i)/2`. The two diagonal
/// coefficients solve the 2×2 Gram system of the selected pair, which is what
/// makes the same routine valid for every variant.
pub fn decompose<T: Real>(h: &CMat3<T>, variant: DiagonalVariant) -> Result<GellCoeffs<T>> {
    h.require_hermitian()?;
    let h = h.hermitian_part();
    let half = T::lit(0.5);
    let mut out = GellCoeffs::default();
    for i in std::iter::once(0).chain(OFF_DIAGONAL) {
        out.c[i] = (h * basis_unchecked::<T>(i)).trace().re * half;
    }
    let [a, b] = variant.diagonal_pair();
    let la = basis_unchecked::<T>(a);
    let lb = basis_unchecked::<T>(b);
    let gaa = (la * la).trace().re;
    let gab = (la * lb).trace().re;
    let gbb = (lb * lb).trace().re;
    let ra = (h * la).trace().re;
    let rb = (h * lb).trace().re;
    let det = gaa * gbb - gab * gab;
    out.c[a] = (ra * gbb - rb * gab) / det;
    out.c[b] = (gaa * rb - gab * ra) / det;
    Ok(out)
}

fn check_index(i: usize) -> Result<()> {
    if i < BASIS_LEN {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange {
            index: i,
            context: "structure constant (0..=12)",
        })
    }
}

/// `f_ijk = Tr([λi, λj] λk) / 4i`.
pub fn structure_constant_f<T: Real>(i: usize, j: usize, k: usize) -> Result<T> {
    check_index(i)?;
    check_index(j)?;
    check_index(k)?;
    let (li, lj, lk) = (
        basis_unchecked::<T>(i),
        basis_unchecked::<T>(j),
        basis_unchecked::<T>(k),
    );
    let t = (li.commutator(&lj) * lk).trace();
    Ok((t / C::new(T::zero(), T::lit(4.0))).re)
}

/// `d_ijk = Tr({λi, λj} λk) / 4`.
pub fn structure_constant_d<T: Real>(i: usize, j: usize, k: usize) -> Result<T> {
    check_index(i)?;
    check_index(j)?;
    check_index(k)?;
    let (li, lj, lk) = (
        basis_unchecked::<T>(i),
        basis_unchecked::<T>(j),
        basis_unchecked::<T>(k),
    );
    Ok((li.anticommutator(&lj) * lk).trace().re * T::lit(0.25))
}

/// All non-vanishing `f` and `d` values of one basis variant, over every
/// ordering of its eight traceless elements.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants<T: Real> {
    pub f: BTreeMap<(usize, usize, usize), T>,
    pub d: BTreeMap<(usize, usize, usize), T>,
    pub basis_variant: DiagonalVariant,
}

impl<T: Real> StructureConstants<T> {
    pub fn compute(variant: DiagonalVariant) -> Self {
        let idx = variant.indices();
        let cutoff = T::epsilon() * T::lit(100.0);
        let mut f = BTreeMap::new();
        let mut d = BTreeMap::new();
        for &i in &idx {
            for &j in &idx {
                for &k in &idx {
                    let fv = structure_constant_f::<T>(i, j, k).expect("valid index");
                    if fv.abs() > cutoff {
                        f.insert((i, j, k), fv);
                    }
                    let dv = structure_constant_d::<T>(i, j, k).expect("valid index");
                    if dv.abs() > cutoff {
                        d.insert((i, j, k), dv);
                    }
                }
            }
        }
        Self {
            f,
            d,
            basis_variant: variant,
        }
    }

    pub fn f(&self, i: usize, j: usize, k: usize) -> T {
        self.f.get(&(i, j, k)).copied().unwrap_or_else(T::zero)
    }

    pub fn d(&self, i: usize, j: usize, k: usize) -> T {
        self.d.get(&(i, j, k)).copied().unwrap_or_else(T::zero)
    }

    /// Largest violation of total antisymmetry of `f` and total symmetry of `d`.
    pub fn symmetry_violation(&self) -> T {
        let mut worst = T::zero();
        for (&(i, j, k), &v) in &self.f {
            for (p, sign) in [
                ((j, i, k), -1.0),
                ((i, k, j), -1.0),
                ((k, j, i), -1.0),
                ((j, k, i), 1.0),
                ((k, i, j), 1.0),
            ] {
                worst = worst.max((self.f(p.0, p.1, p.2) - v * T::lit(sign)).abs());
            }
        }
        for (&(i, j, k), &v) in &self.d {
            for p in [(j, i, k), (i, k, j), (k, j, i), (j, k, i), (k, i, j)] {
                worst = worst.max((self.d(p.0, p.1, p.2) - v).abs());
            }
        }
        worst
    }

    /// Reconstructs `λi λj` from `(2/3) δij I + Σ_k (i f_ijk + d_ijk) λk`.
    pub fn product(&self, i: usize, j: usize) -> CMat3<T> {
        let mut out = if i == j {
            CMat3::identity().scale_real(T::lit(2.0) / T::lit(3.0))
        } else {
            CMat3::zero()
        };
        for k in self.basis_variant.indices() {
            let coeff = C::new(self.d(i, j, k), self.f(i, j, k));
            if coeff != C::new(T::zero(), T::zero()) {
                out += basis_unchecked::<T>(k).scale(coeff);
            }
        }
        out
    }
}

/// Whether `(k_indices, p_indices)` satisfies the Cartan conditions
/// `[K,K] ⊆ K`, `[P,P] ⊆ K`, `[P,K] ⊆ P`.
///
/// Every commutator `-i[a, b]` is projected onto the span of the target set;
/// the split is valid when every residual is at most `1e-12` (in double
/// precision). Overlapping sets or indices outside `1..=12` yield `false`.
pub fn check_cartan_split(k_indices: &[usize], p_indices: &[usize]) -> bool {
    let valid = |s: &[usize]| s.iter().all(|&i| (1..BASIS_LEN).contains(&i));
    if !valid(k_indices) || !valid(p_indices) || k_indices.iter().any(|i| p_indices.contains(i)) {
        return false;
    }
    let k_basis = SpanProjector::new(k_indices);
    let p_basis = SpanProjector::new(p_indices);
    let tol = 1e-12;
    let closes = |xs: &[usize], ys: &[usize], target: &SpanProjector| {
        xs.iter().all(|&x| {
            ys.iter().all(|&y| {
                let comm = basis_unchecked::<f64>(x)
                    .commutator(&basis_unchecked::<f64>(y))
                    .scale(C::new(0.0, -1.0));
                target.residual(&comm) <= tol
            })
        })
    };
    closes(k_indices, k_indices, &k_basis)
        && closes(p_indices, p_indices, &k_basis)
        && closes(p_indices, k_indices, &p_basis)
}

// Orthonormal (Frobenius) basis for the real span of a set of basis elements.
struct SpanProjector {
    ortho: Vec<CMat3<f64>>,
}

impl SpanProjector {
    fn new(indices: &[usize]) -> Self {
        let mut ortho: Vec<CMat3<f64>> = Vec::new();
        for &i in indices {
            let mut v = basis_unchecked::<f64>(i);
            for q in &ortho {
                v = v - q.scale_real(q.frobenius_inner(&v));
            }
            let n = v.frobenius_norm();
            if n > 1e-12 {
                ortho.push(v.scale_real(1.0 / n));
            }
        }
        Self { ortho }
    }

    fn residual(&self, m: &CMat3<f64>) -> f64 {
        let mut r = *m;
        for q in &self.ortho {
            r = r - q.scale_real(q.frobenius_inner(&r));
        }
        r.frobenius_norm()
    }
}

#[derive(Deserialize)]
struct PrintedTables {
    variants: Vec<PrintedVariant>,
}

#[derive(Deserialize)]
struct PrintedVariant {
    basis: String,
    f: Vec<PrintedConstant>,
    d: Vec<PrintedConstant>,
    commutators: PrintedCommutators,
}

#[derive(Deserialize)]
struct PrintedConstant {
    label: String,
    indices: [usize; 3],
    value: String,
}

#[derive(Deserialize)]
struct PrintedCommutators {
    order: [usize; 8],
    rows: Vec<Vec<String>>,
}

const PRINTED_TABLES: &str = include_str!("../fixtures/appendix_constants.json");

// Evaluates the small closed set of symbolic constants used in the fixture.
fn symbolic_value(s: &str) -> f64 {
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s),
    };
    let r3 = 3f64.sqrt();
    let v = match body {
        "0" => 0.0,
        "1" => 1.0,
        "2" => 2.0,
        "1/2" => 0.5,
        "s3" => r3,
        "s3/2" => r3 / 2.0,
        "1/s3" => 1.0 / r3,
        "1/(2s3)" => 1.0 / (2.0 * r3),
        other => panic!("unsupported symbolic constant {other:?} in appendix fixture"),
    };
    sign * v
}

fn printed_cell(cell: &str) -> [f64; BASIS_LEN] {
    let mut out = [0.0; BASIS_LEN];
    if cell.trim() == "0" {
        return out;
    }
    for term in cell.split_whitespace() {
        let (coef, idx) = term.split_once(':').expect("coefficient:index term");
        out[idx.parse::<usize>().expect("basis index")] += symbolic_value(coef);
    }
    out
}

/// Recomputes every printed structure constant and commutator-table cell from
/// the trace formulas and reports matches and mismatches.
///
/// Also lists non-vanishing constants that the printed lists omit (as
/// informational entries, after accounting for index permutations).
pub fn verify_constant_tables() -> DiscrepancyReport {
    let printed: PrintedTables =
        serde_json::from_str(PRINTED_TABLES).expect("well-formed appendix fixture");
    let tol = 1e-12;
    let mut report = DiscrepancyReport::default();
    for pv in &printed.variants {
        let variant: DiagonalVariant = pv.basis.parse().expect("known basis variant");
        let section = format!("appendix/{}", variant.name());
        let consts = StructureConstants::<f64>::compute(variant);

        for (kind, list) in [("f", &pv.f), ("d", &pv.d)] {
            let mut covered = std::collections::BTreeSet::new();
            for entry in list {
                let [i, j, k] = entry.indices;
                let computed = if kind == "f" {
                    consts.f(i, j, k)
                } else {
                    consts.d(i, j, k)
                };
                let mut sorted = entry.indices;
                sorted.sort_unstable();
                covered.insert(sorted);
                let e = ReportEntry::compare(
                    &section,
                    format!("{} {}", entry.label, kind_indices(entry.indices)),
                    vec![symbolic_value(&entry.value)],
                    vec![computed],
                    tol,
                );
                report.push(e);
            }
            let table = if kind == "f" { &consts.f } else { &consts.d };
            for (&(i, j, k), &v) in table {
                let ascending = if kind == "f" {
                    i < j && j < k
                } else {
                    i <= j && j <= k
                };
                if ascending && !covered.contains(&[i, j, k]) {
                    report.push(ReportEntry::info(
                        &section,
                        format!("{kind} ({i},{j},{k}) not in printed list"),
                        vec![v],
                        "non-vanishing by the trace formula but absent from the printed list",
                    ));
                }
            }
        }

        let order = pv.commutators.order;
        let half = C::new(0.0, -1.0);
        for (r, row) in pv.commutators.rows.iter().enumerate() {
            for (col, cell) in row.iter().enumerate() {
                let (a, b) = (order[r], order[col]);
                let comm = basis_unchecked::<f64>(a)
                    .commutator(&basis_unchecked::<f64>(b))
                    .scale(half);
                let computed = decompose(&comm, variant)
                    .expect("commutator is anti-Hermitian")
                    .c;
                let want = printed_cell(cell);
                let e = ReportEntry::compare(
                    &section,
                    format!("[l{a},l{b}]"),
                    variant.indices().iter().map(|&i| want[i]).collect(),
                    variant.indices().iter().map(|&i| computed[i]).collect(),
                    tol,
                )
                .with_note(format!(
                    "coefficients of i*lambda over {:?}",
                    variant.indices()
                ));
                report.push(e);
            }
        }
    }
    report
}

fn kind_indices(idx: [usize; 3]) -> String {
    format!("({},{},{})", idx[0], idx[1], idx[2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat3::frobenius_distance;

    #[test]
    fn basis_matches_listed_matrices() {
        let l3 = basis::<f64>(3).unwrap();
        assert_eq!(l3, CMat3::diag_real([1.0, -1.0, 0.0]));
        let l0 = basis::<f64>(0).unwrap();
        assert!((l0.trace().re - 6f64.sqrt()).abs() < 1e-15);
        let diff = basis::<f64>(9).unwrap() - basis::<f64>(10).unwrap();
        assert_eq!(diff, l3);
        assert!(matches!(
            basis::<f64>(13),
            Err(Error::IndexOutOfRange { index: 13, .. })
        ));
    }

    #[test]
    fn orthogonality_over_standard_basis() {
        for i in 0..=8 {
            for j in 0..=8 {
                let t = (basis::<f64>(i).unwrap() * basis::<f64>(j).unwrap()).trace();
                let want = if i == j { 2.0 } else { 0.0 };
                assert!(
                    (t.re - want).abs() <= 1e-15 && t.im.abs() <= 1e-15,
                    "({i},{j})"
                );
            }
        }
    }

    #[test]
    fn all_elements_hermitian() {
        for i in 0..BASIS_LEN {
            assert!(basis::<f64>(i).unwrap().is_hermitian(0.0));
        }
    }

    #[test]
    fn decompose_basis_and_identity() {
        let c5 = decompose(&basis::<f64>(5).unwrap(), DiagonalVariant::Standard).unwrap();
        for (i, v) in c5.c.iter().enumerate() {
            assert!((v - if i == 5 { 1.0 } else { 0.0 }).abs() < 1e-15);
        }
        let ci = decompose(&CMat3::<f64>::identity(), DiagonalVariant::Standard).unwrap();
        assert!((ci.c[0] - 1.5f64.sqrt()).abs() < 1e-15);
        assert!(ci.foreign_norm(&[0]) < 1e-15);
    }

    #[test]
    fn variant_decompositions_reconstruct() {
        let h = CMat3::from_fn(|i, j| {
            if i == j {
                c([0.3, -1.1, 2.0][i], 0.0)
            } else if i < j {
                c(0.2 * (i + j) as f64, -0.1 * j as f64)
            } else {
                c(0.2 * (i + j) as f64, 0.1 * i as f64)
            }
        });
        for v in DiagonalVariant::ALL {
            let co = decompose(&h, v).unwrap();
            assert!(frobenius_distance(&co.reconstruct(), &h) < 1e-14, "{v}");
            let mut allowed = vec![0];
            allowed.extend(v.indices());
            assert_eq!(co.foreign_norm(&allowed), 0.0);
        }
    }

    #[test]
    fn decompose_rejects_non_hermitian() {
        let m = basis::<f64>(1).unwrap().scale(c(0.0, 1.0));
        assert!(matches!(
            decompose(&m, DiagonalVariant::Standard),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn named_structure_constants() {
        let r3 = 3f64.sqrt();
        assert!((structure_constant_f::<f64>(1, 2, 3).unwrap() - 1.0).abs() < 1e-15);
        assert!((structure_constant_f::<f64>(4, 5, 8).unwrap() - r3 / 2.0).abs() < 1e-15);
        assert!((structure_constant_f::<f64>(1, 2, 9).unwrap() - 0.5).abs() < 1e-15);
        for k in 0..BASIS_LEN {
            assert_eq!(structure_constant_f::<f64>(1, 1, k).unwrap(), 0.0);
        }
        assert!(structure_constant_f::<f64>(1, 2, 13).is_err());
    }

    #[test]
    fn product_rule_all_variants() {
        for v in DiagonalVariant::ALL {
            let sc = StructureConstants::<f64>::compute(v);
            assert!(sc.symmetry_violation() < 1e-15);
            for i in v.indices() {
                for j in v.indices() {
                    let lhs = basis::<f64>(i).unwrap() * basis::<f64>(j).unwrap();
                    assert!(
                        frobenius_distance(&lhs, &sc.product(i, j)) < 1e-12,
                        "{v} ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn splits_from_the_decompositions() {
        assert!(check_cartan_split(&[1, 2, 3, 8], &[4, 5, 6, 7]));
        assert!(check_cartan_split(&[6, 7, 10, 12], &[1, 2, 4, 5]));
        assert!(check_cartan_split(&[4, 5, 9, 11], &[1, 2, 6, 7]));
        assert!(check_cartan_split(&[2, 5, 7], &[1, 3, 4, 6, 8]));
        assert!(!check_cartan_split(&[1, 4], &[2, 3, 5, 6, 7, 8]));
        assert!(!check_cartan_split(&[1, 2], &[2, 3]));
        assert!(!check_cartan_split(&[1, 13], &[2]));
    }

    #[test]
    fn symbolic_fixture_values() {
        assert_eq!(symbolic_value("-1/2"), -0.5);
        assert!((symbolic_value("-1/(2s3)") + 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-16);
        assert_eq!(printed_cell("1:3 s3:8")[8], 3f64.sqrt());
    }

    #[test]
    fn standard_lists_match_trace_formula() {
        let report = verify_constant_tables();
        let standard: Vec<_> = report
            .entries
            .iter()
            .filter(|e| {
                e.section == "appendix/standard"
                    && (e.item.starts_with("f_") || e.item.starts_with("d_"))
            })
            .collect();
        assert_eq!(standard.len(), 25);
        assert!(standard.iter().all(|e| !e.is_mismatch()));
        assert!(!report.find("[l1,l2]").unwrap().is_mismatch());
    }

    #[test]
    fn single_precision_orthogonality() {
        for i in 1..=8 {
            let t = (basis::<f32>(i).unwrap() * basis::<f32>(i).unwrap())
                .trace()
                .re;
            assert!((t - 2.0).abs() < 1e-6);
        }
    }
}
