//! Gate constants: the Walsh-Hadamard gate `W`, the level swap `S` and the
//! Hamiltonian `H_W` with `W = exp(-i H_W π/2)`.

use crate::mat3::{frobenius_distance, CMat3};
use crate::report::{DiscrepancyReport, ReportEntry};
use crate::scalar::{cis, cr, Real};

/// `(1/√3)·[[1,1,1],[1,ω,ω̄],[1,ω̄,ω]]` with `ω = e^{2πi/3}`.
pub fn walsh_hadamard<T: Real>() -> CMat3<T> {
    let one = cr(T::one());
    let w = cis(T::TAU() / T::lit(3.0));
    let wb = w.conj();
    CMat3::from_rows([[one, one, one], [one, w, wb], [one, wb, w]])
        .scale_real(T::one() / T::lit(3.0).sqrt())
}

/// Permutation exchanging levels 1 and 2.
pub fn swap12<T: Real>() -> CMat3<T> {
    let (z, o) = (T::zero(), T::one());
    CMat3::from_real([[o, z, z], [z, z, o], [z, o, z]])
}

pub fn wh_hamiltonian<T: Real>() -> CMat3<T> {
    let r3 = T::lit(3.0).sqrt();
    let a = T::one() / r3;
    let b = T::one() / (T::lit(2.0) * r3);
    let one = T::one();
    CMat3::from_real([[-one + a, a, a], [a, -one - b, -b], [a, -b, -one - b]])
}

/// Named gates accepted on the command line.
pub fn by_name<T: Real>(name: &str) -> Option<CMat3<T>> {
    match name {
        "wh" => Some(walsh_hadamard()),
        "swap12" => Some(swap12()),
        "identity" => Some(CMat3::identity()),
        _ => None,
    }
}

/// Checks `SWS = W`, `Wᵀ = W`, `W² = S` and `det W = -i` on the built-in `W`.
pub fn verify_wh_relations() -> DiscrepancyReport {
    verify_wh_relations_for(&walsh_hadamard())
}

/// The same four checks on a candidate `w`, each to `1e-12`.
pub fn verify_wh_relations_for(w: &CMat3<f64>) -> DiscrepancyReport {
    let s = swap12::<f64>();
    let tol = 1e-12;
    let section = "gates";
    let det = w.det();
    let mut r = DiscrepancyReport::default();
    r.push(ReportEntry::check(
        section,
        "SWS = W",
        frobenius_distance(&(s * *w * s), w),
        tol,
    ));
    r.push(ReportEntry::check(
        section,
        "W^T = W",
        frobenius_distance(&w.transpose(), w),
        tol,
    ));
    r.push(ReportEntry::check(
        section,
        "W^2 = S",
        frobenius_distance(&(*w * *w), &s),
        tol,
    ));
    r.push(ReportEntry::compare(
        section,
        "det W = -i",
        vec![0.0, -1.0],
        vec![det.re, det.im],
        tol,
    ));
    r
}
