use std::path::PathBuf;

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};
use su3_forge::cartan::{
    cartan_decompose, compose_factors, eliminate_two_photon, split_named, verify_gfin, SplitName,
};
use su3_forge::cost::{drive_power_proxy, hs_cost, table2_audit, table2_report};
use su3_forge::dod::{
    compose_dod, match_table1, phase_sum_check, solve_dod, table1, verify_table1, SolveConfig,
};
use su3_forge::gates::{by_name, swap12, verify_wh_relations, walsh_hadamard, wh_hamiltonian};
use su3_forge::gellmann::{
    basis, verify_constant_tables, DiagonalVariant, GellCoeffs, StructureConstants,
};
use su3_forge::mat3::{expm_hermitian_generator, frobenius_distance, haar_random_batch};
use su3_forge::report::{DiscrepancyReport, ReportEntry};
use su3_forge::symmetry::{commutant, relate_solutions};
use su3_forge::{Mat3, Params, Solutions};

use crate::doc::{pair, read_json, read_matrix, require_unitary, MatrixDocument, ReportDocument};
use crate::fail::{invalid, Failure};
use crate::known::{annotate, undocumented};

type Outcome = Result<(ReportDocument, u8), Failure>;

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Method {
    Dod,
    CartanA,
    CartanB,
    CartanC,
    Givens,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
pub enum Section {
    Table1,
    Table2,
    Appendix,
    Gates,
    Gfin,
    All,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("target").required(true).args(["input", "gate"]))]
pub struct DecomposeArgs {
    #[arg(long, value_enum)]
    method: Method,
    /// Matrix document to decompose.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Built-in gate: wh, swap12 or identity.
    #[arg(long)]
    gate: Option<String>,
    /// Grid points per phase axis.
    #[arg(long, default_value_t = 8)]
    starts: usize,
    /// Largest log-branch offset.
    #[arg(long, default_value_t = 1)]
    branches: u32,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    section: Section,
}

#[derive(Args)]
pub struct CostArgs {
    /// Solution set from `decompose --method dod`; the printed sets when absent.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("mode").required(true).args(["theta", "relate"]))]
pub struct SymmetryArgs {
    #[arg(long, default_value = "wh")]
    gate: String,
    /// Commutant phases `t1,t2,t3`; accepts forms like `pi`, `-pi/2`, `2*pi/3`.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Eigenvalues the phases refer to, e.g. `i,-1,1`; defaults to ascending phase.
    #[arg(long, allow_hyphen_values = true)]
    order: Option<String>,
    /// Two labels of the solution set, e.g. `2,5`.
    #[arg(long)]
    relate: Option<String>,
    /// Solution set for `--relate`; the printed sets when absent.
    #[arg(long)]
    solutions: Option<PathBuf>,
}

#[derive(Args)]
pub struct StructconstArgs {
    #[arg(long, default_value = "standard")]
    basis: String,
}

#[derive(Args)]
pub struct RandomArgs {
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn named_gate(name: &str) -> Result<Mat3, Failure> {
    by_name::<f64>(name).ok_or_else(|| {
        invalid(format!(
            "unknown gate {name:?}; expected wh, swap12 or identity"
        ))
    })
}

fn lambda(i: usize) -> String {
    format!("l{i}")
}

fn coeff_map(g: &GellCoeffs<f64>, support: &[usize]) -> Value {
    let mut m = Map::new();
    for &i in support {
        m.insert(lambda(i), json!(g.c[i]));
    }
    Value::Object(m)
}

fn params_json(p: &Params) -> Value {
    json!({ "phi": p.phi, "m01": pair(p.m01), "m02": pair(p.m02), "m12": pair(p.m12) })
}

pub fn decompose(a: DecomposeArgs) -> Outcome {
    let (target, source) = match (&a.input, &a.gate) {
        (Some(path), _) => (read_matrix(path)?, json!({ "input": path })),
        (None, Some(g)) => (named_gate(g)?, json!({ "gate": g })),
        (None, None) => return Err(invalid("one of --input or --gate is required")),
    };
    require_unitary(&target)?;
    let mut inputs = source;
    inputs["method"] = json!(a
        .method
        .to_possible_value()
        .map(|v| v.get_name().to_string()));
    match a.method {
        Method::Dod => decompose_dod(&a, target, inputs),
        Method::CartanA => decompose_cartan(target, SplitName::A, inputs),
        Method::CartanB => decompose_cartan(target, SplitName::B, inputs),
        Method::CartanC => decompose_cartan(target, SplitName::C, inputs),
        Method::Givens => decompose_givens(target, inputs),
    }
}

fn decompose_dod(a: &DecomposeArgs, target: Mat3, mut inputs: Value) -> Outcome {
    let cfg = SolveConfig {
        starts: a.starts,
        branch_range: a.branches,
        tol: a.tol,
        seed: a.seed,
        ..SolveConfig::default()
    };
    cfg.validate()?;
    inputs["starts"] = json!(a.starts);
    inputs["branches"] = json!(a.branches);
    inputs["tol"] = json!(a.tol);
    inputs["seed"] = json!(a.seed);
    let set = match solve_dod(&target, &cfg) {
        Ok(s) => s,
        Err(su3_forge::Error::NoSolutionFound) => {
            let results =
                json!({ "target": MatrixDocument::from_mat(&target, None), "solutions": [] });
            return Ok((ReportDocument::new("decompose", inputs, results), 1));
        }
        Err(e) => return Err(e.into()),
    };
    // Printed rows apply only when the target is the Walsh-Hadamard gate.
    let is_wh = frobenius_distance(&target, &walsh_hadamard()) < 1e-12;
    let matches = if is_wh {
        match_table1(&set)
    } else {
        Vec::new()
    };
    let mut rows = Vec::new();
    for (i, (p, label)) in set.solutions.iter().zip(&set.labels).enumerate() {
        let printed = matches
            .iter()
            .find(|(_, idx, d)| *idx == Some(i) && *d <= 1e-3)
            .map(|(l, _, d)| json!({ "label": l, "distance": d }));
        let mut row = params_json(p);
        row["label"] = json!(label);
        row["residual"] = json!(set.residuals[i]);
        row["phase_sum_defect"] = json!(phase_sum_check(p, &target));
        row["diag_cost"] = json!(hs_cost(&p.g_d(), 1.0)?);
        row["offdiag_cost"] = json!(hs_cost(&p.g_o(), 1.0)?);
        row["drive_power_proxy"] = json!(drive_power_proxy(&p.g_o())?);
        row["printed_match"] = printed.unwrap_or(Value::Null);
        rows.push(row);
    }
    let results = json!({
        "target": MatrixDocument::from_mat(&target, None),
        "count": rows.len(),
        "solutions": rows,
    });
    Ok((ReportDocument::new("decompose", inputs, results), 0))
}

fn decompose_cartan(target: Mat3, name: SplitName, inputs: Value) -> Outcome {
    let f = cartan_decompose(&target, &split_named(name))?;
    let gens = f.generators();
    let supports = f.supports();
    let names = ["diagonal", "first_off_diagonal", "second_off_diagonal"];
    let factors: Vec<Value> = (0..3)
        .map(|j| {
            json!({
                "name": names[j],
                "support": supports[j].iter().map(|&i| lambda(i)).collect::<Vec<_>>(),
                "coefficients": coeff_map(&gens[j], &supports[j]),
            })
        })
        .collect();
    let results = json!({
        "split": name.as_str(),
        "k_indices": f.split.k_indices,
        "p_indices": f.split.p_indices,
        "global_phase": f.global_phase,
        "factors": factors,
        "euler": f.euler,
        "beta": [f.first_off[0], f.first_off[1], f.diag_coeffs[0]],
        "foreign_support": f.foreign,
        "reconstruction_residual": frobenius_distance(&compose_factors(&f), &target),
    });
    Ok((ReportDocument::new("decompose", inputs, results), 0))
}

fn decompose_givens(target: Mat3, inputs: Value) -> Outcome {
    let f = cartan_decompose(&target, &split_named(SplitName::C))?;
    let chain = eliminate_two_photon(&f)?;
    let factors: Vec<Value> = chain
        .factors
        .iter()
        .map(|g| {
            json!({
                "support": g.support.iter().map(|&i| lambda(i)).collect::<Vec<_>>(),
                "coefficients": coeff_map(&g.coeffs, &g.support),
                "angle": g.angle,
            })
        })
        .collect();
    let results = json!({
        "split": "C",
        "global_phase": chain.global_phase,
        "factors": factors,
        "two_photon_weight": chain.two_photon_weight(),
        "reconstruction_residual": frobenius_distance(&chain.product(), &target),
        "relabel_distance": chain.relabel_distance(),
        "compresses_to_three": chain.compresses_to_three(1e-9),
    });
    Ok((ReportDocument::new("decompose", inputs, results), 0))
}

fn gates_report() -> DiscrepancyReport {
    let mut r = verify_wh_relations();
    let h = wh_hamiltonian::<f64>().scale_real(std::f64::consts::FRAC_PI_2);
    let u = expm_hermitian_generator(&h).expect("Hermitian");
    r.push(ReportEntry::check(
        "gates",
        "exp(-i H_W pi/2) = W",
        frobenius_distance(&u, &walsh_hadamard()),
        1e-12,
    ));
    r
}

pub fn verify_paper(a: VerifyArgs) -> Outcome {
    let all = [
        Section::Table1,
        Section::Table2,
        Section::Appendix,
        Section::Gates,
        Section::Gfin,
    ];
    let sections: Vec<Section> = if a.section == Section::All {
        all.to_vec()
    } else {
        vec![a.section]
    };
    let mut report = DiscrepancyReport::default();
    let mut results = Map::new();
    for s in &sections {
        match s {
            Section::Table1 => report.extend(verify_table1()),
            Section::Table2 => {
                let cost = table2_report(&table1())?;
                report.extend(table2_audit(&cost));
                results.insert("table2".into(), serde_json::to_value(&cost)?);
            }
            Section::Appendix => report.extend(verify_constant_tables()),
            Section::Gates => report.extend(gates_report()),
            Section::Gfin => report.extend(verify_gfin()?),
            Section::All => unreachable!(),
        }
    }
    let list = annotate(report);
    let bad = undocumented(&list);
    let names: Vec<String> = sections
        .iter()
        .filter_map(|s| s.to_possible_value().map(|v| v.get_name().to_string()))
        .collect();
    results.insert("checked".into(), json!(list.len()));
    results.insert("undocumented_mismatches".into(), json!(bad));
    results.insert(
        "documented_mismatches".into(),
        json!(list.iter().filter(|d| d.documented).count()),
    );
    results.insert("passed".into(), json!(bad == 0));
    let mut doc = ReportDocument::new(
        "verify-paper",
        json!({ "section": names }),
        Value::Object(results),
    );
    doc.discrepancies = list;
    Ok((doc, if bad == 0 { 0 } else { 1 }))
}

fn complex_field(v: &Value, key: &str) -> Result<Complex64, Failure> {
    let p: [f64; 2] = serde_json::from_value(v.get(key).cloned().unwrap_or(Value::Null))
        .map_err(|e| invalid(format!("solution field {key}: {e}")))?;
    Ok(Complex64::new(p[0], p[1]))
}

/// Reads the `results` of a `decompose --method dod` report.
fn read_solutions(path: &std::path::Path) -> Result<Solutions, Failure> {
    let v = read_json(path)?;
    let body = v.get("results").unwrap_or(&v);
    let target: MatrixDocument = serde_json::from_value(
        body.get("target").cloned().unwrap_or(Value::Null),
    )
    .map_err(|e| {
        invalid(format!(
            "{}: missing or malformed target: {e}",
            path.display()
        ))
    })?;
    let target = target.to_mat()?;
    require_unitary(&target)?;
    let rows = body
        .get("solutions")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid(format!("{}: missing solutions list", path.display())))?;
    let mut set = Solutions {
        solutions: Vec::new(),
        residuals: Vec::new(),
        labels: Vec::new(),
        target,
    };
    for (i, row) in rows.iter().enumerate() {
        let phi: [f64; 3] = serde_json::from_value(row.get("phi").cloned().unwrap_or(Value::Null))
            .map_err(|e| invalid(format!("solution {i} phi: {e}")))?;
        let p = Params {
            phi,
            m01: complex_field(row, "m01")?,
            m02: complex_field(row, "m02")?,
            m12: complex_field(row, "m12")?,
        };
        if !p.is_finite() {
            return Err(invalid(format!("solution {i} has non-finite entries")));
        }
        let label = row
            .get("label")
            .and_then(Value::as_str)
            .map(str::to_string)
            .unwrap_or_else(|| format!("s{}", i + 1));
        set.residuals
            .push(frobenius_distance(&compose_dod(&p), &set.target));
        set.solutions.push(p);
        set.labels.push(label);
    }
    Ok(set)
}

pub fn cost(a: CostArgs) -> Outcome {
    let (set, inputs) = match &a.input {
        Some(p) => (read_solutions(p)?, json!({ "input": p })),
        None => (table1(), json!({ "input": "printed" })),
    };
    let report = table2_report(&set)?;
    let is_wh = frobenius_distance(&set.target, &walsh_hadamard()) < 1e-12;
    let audit = if is_wh {
        table2_audit(&report)
    } else {
        DiscrepancyReport::default()
    };
    let mut doc = ReportDocument::new("cost", inputs, serde_json::to_value(&report)?);
    doc.discrepancies = annotate(audit);
    Ok((doc, 0))
}

fn parse_angle(s: &str) -> Result<f64, Failure> {
    let t = s.trim().replace(' ', "");
    let bad = || invalid(format!("cannot parse angle {s:?}"));
    if let Ok(v) = t.parse::<f64>() {
        return Ok(v);
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.as_str()),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad())?),
        None => (body, 1.0),
    };
    let factor = match num {
        "pi" => 1.0,
        _ => num
            .strip_suffix("*pi")
            .ok_or_else(bad)?
            .parse::<f64>()
            .map_err(|_| bad())?,
    };
    let v = factor * std::f64::consts::PI / den;
    Ok(if neg { -v } else { v })
}

fn parse_eigenvalue(s: &str) -> Result<Complex64, Failure> {
    match s.trim() {
        "i" | "+i" => Ok(Complex64::new(0.0, 1.0)),
        "-i" => Ok(Complex64::new(0.0, -1.0)),
        t => t
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| invalid(format!("cannot parse eigenvalue {s:?}"))),
    }
}

fn triple<T>(s: &str, f: impl Fn(&str) -> Result<T, Failure>) -> Result<[T; 3], Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(invalid(format!(
            "expected three comma-separated values, got {s:?}"
        )));
    }
    Ok([f(parts[0])?, f(parts[1])?, f(parts[2])?])
}

pub fn symmetry(a: SymmetryArgs) -> Outcome {
    if let Some(spec) = &a.relate {
        return relate(&a, spec);
    }
    let u = named_gate(&a.gate)?;
    let theta_arg = a
        .theta
        .as_deref()
        .ok_or_else(|| invalid("--theta or --relate is required"))?;
    let theta = triple(theta_arg, parse_angle)?;
    let family = commutant(&u)?;
    let sorted = match &a.order {
        Some(o) => family
            .relabel(triple(o, parse_eigenvalue)?, theta, 1e-9)
            .map_err(|e| invalid(e.to_string()))?,
        None => theta,
    };
    let t = family.sample(sorted);
    let results = json!({
        "gate": a.gate,
        "eigenvalues": family.eigenvalues.map(pair),
        "theta": sorted,
        "matrix": MatrixDocument::from_mat(&t, None),
        "commutator_norm": t.commutator(&u).frobenius_norm(),
        "distance_to_swap12": frobenius_distance(&t, &swap12()),
    });
    let inputs = json!({ "gate": a.gate, "theta": theta, "order": a.order });
    Ok((ReportDocument::new("symmetry", inputs, results), 0))
}

fn relate(a: &SymmetryArgs, spec: &str) -> Outcome {
    let set = match &a.solutions {
        Some(p) => read_solutions(p)?,
        None => table1(),
    };
    let (la, lb) = spec.split_once(',').ok_or_else(|| {
        invalid(format!(
            "--relate expects two labels like 2,5, got {spec:?}"
        ))
    })?;
    let get = |l: &str| {
        set.get(l.trim())
            .copied()
            .ok_or_else(|| invalid(format!("no solution labelled {l:?}")))
    };
    let (pa, pb) = (get(la)?, get(lb)?);
    let r = relate_solutions(&pa, &pb, &set.target)?;
    let results = json!({
        "sets": [la.trim(), lb.trim()],
        "reversed": r.reversed,
        "conjugator": MatrixDocument::from_mat(&r.conjugator, None),
        "conjugator_theta": r.conjugator_theta,
        "level_permutation": r.level_permutation,
        "permutation": r.permutation,
        "scale": r.scale,
        "shifts": r.shifts,
        "source_eigenvalues": r.source_eigenvalues,
        "target_eigenvalues": r.target_eigenvalues,
        "fixed_points": r.fixed_points,
        "residual": r.residual,
    });
    let inputs = json!({ "relate": spec, "solutions": a.solutions });
    Ok((ReportDocument::new("symmetry", inputs, results), 0))
}

pub fn structconst(a: StructconstArgs) -> Outcome {
    let variant: DiagonalVariant = a.basis.parse().map_err(|e: String| invalid(e))?;
    let sc = StructureConstants::<f64>::compute(variant);
    let idx = variant.indices();
    let ordered = |(i, j, k): (usize, usize, usize), strict: bool| {
        let pos = |x| idx.iter().position(|&y| y == x).unwrap();
        if strict {
            pos(i) < pos(j) && pos(j) < pos(k)
        } else {
            pos(i) <= pos(j) && pos(j) <= pos(k)
        }
    };
    let f: Vec<Value> =
        sc.f.iter()
            .filter(|(&ijk, _)| ordered(ijk, true))
            .map(|(&(i, j, k), v)| json!({ "ijk": [i, j, k], "value": v }))
            .collect();
    let d: Vec<Value> =
        sc.d.iter()
            .filter(|(&ijk, _)| ordered(ijk, false))
            .map(|(&(i, j, k), v)| json!({ "ijk": [i, j, k], "value": v }))
            .collect();
    let mut product_residual = 0.0f64;
    for &i in &idx {
        for &j in &idx {
            let direct = basis::<f64>(i)? * basis::<f64>(j)?;
            product_residual = product_residual.max(frobenius_distance(&direct, &sc.product(i, j)));
        }
    }
    let results = json!({
        "basis": variant.name(),
        "indices": idx,
        "f": f,
        "d": d,
        "symmetry_violation": sc.symmetry_violation(),
        "product_rule_residual": product_residual,
    });
    let section = format!("appendix/{}", variant.name());
    let mut audit = DiscrepancyReport::default();
    for e in verify_constant_tables().entries {
        if e.section == section {
            audit.push(e);
        }
    }
    let mut doc = ReportDocument::new("structconst", json!({ "basis": a.basis }), results);
    doc.discrepancies = annotate(audit);
    Ok((doc, 0))
}

pub fn random(a: RandomArgs) -> Outcome {
    let matrices: Vec<MatrixDocument> = haar_random_batch::<f64>(a.count, a.seed)
        .iter()
        .enumerate()
        .map(|(i, m)| MatrixDocument::from_mat(m, Some(format!("r{i}"))))
        .collect();
    let results = json!({ "count": a.count, "matrices": matrices });
    Ok((
        ReportDocument::new(
            "random",
            json!({ "count": a.count, "seed": a.seed }),
            results,
        ),
        0,
    ))
}
