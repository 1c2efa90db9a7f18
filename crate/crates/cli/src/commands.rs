use std::fs;
use std::path::Path;

use qsv_core::design::{
    adaptive_w3, check as locality_check, general_homogeneous, homogeneous_operator,
    homogeneous_radius, inhomogeneous_fallback, protocol_from_table, revise_design,
    HomogeneousDesign, Protocol, ProtocolDocument,
};
use qsv_core::linalg::{hermitian_eigenvalues, HermitianOperator, TOL};
use qsv_core::pauli::{completeness, positivity_min, quasi_prob};
use qsv_core::runtime::{
    fidelity_estimate, required_copies, rescale_for_estimation, rescaled_protocol, simulate_counts,
    witness as witness_report, worst_case_bad_state, SimulationReport, Source,
};
use qsv_core::states::{parse_state_spec, w_state};
use qsv_core::{LocalityMode, LocalityVerdict, QsvError, StateVector, Transformation};
use serde_json::{json, Value};

use crate::output::{document, emit, print_out, to_value, CliResult, Failure, INFEASIBLE};
use crate::{
    DesignArgs, EstimateArgs, ExportArgs, Format, SimulateArgs, TableArgs, TableChoice, WitnessArgs,
};

/// Weights as `a,b,c`; each entry a decimal or a fraction `p/q`.
pub fn parse_weights(spec: &str) -> Result<Transformation, Failure> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Failure::Input(format!(
            "expected three weights, got {} in '{spec}'",
            parts.len()
        )));
    }
    let number = |s: &str| -> Result<f64, Failure> {
        let bad = || Failure::Input(format!("cannot parse weight '{s}'"));
        let value = match s.split_once('/') {
            Some((p, q)) => {
                let p: f64 = p.trim().parse().map_err(|_| bad())?;
                let q: f64 = q.trim().parse().map_err(|_| bad())?;
                if q == 0.0 {
                    return Err(bad());
                }
                p / q
            }
            None => s.parse().map_err(|_| bad())?,
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(bad())
        }
    };
    let w = [number(parts[0])?, number(parts[1])?, number(parts[2])?];
    Ok(Transformation::new(w)?)
}

fn spectrum(op: &HermitianOperator) -> Vec<f64> {
    hermitian_eigenvalues(op).eigenvalues
}

struct Inputs {
    psi: StateVector,
    t: Transformation,
    mode: LocalityMode,
}

fn inputs(a: &TableArgs) -> Result<Inputs, Failure> {
    Ok(Inputs {
        psi: parse_state_spec(&a.state)?,
        t: parse_weights(&a.weights)?,
        mode: a.mode.parse()?,
    })
}

fn header(a: &TableArgs, i: &Inputs) -> Value {
    json!({
        "state": a.state,
        "weights": i.t.weights(),
        "mode": i.mode.to_string(),
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

struct Designed {
    route: &'static str,
    design: HomogeneousDesign,
    /// `(a, ν before revision)`.
    revision: Option<(f64, f64)>,
    verdict: LocalityVerdict,
    protocol: Option<Protocol>,
    fallback: Option<Protocol>,
}

fn run_design(i: &Inputs, revise: bool) -> Result<Designed, Failure> {
    let (route, mut design, mut revision) = match homogeneous_radius(&i.psi, &i.t) {
        Ok(d) => ("homogeneous", d, None),
        Err(QsvError::NoLocalHomogeneous { .. }) => {
            let (rev, d) = general_homogeneous(&i.psi, &i.t)?;
            ("general", d, Some((rev.a, 1.0)))
        }
        Err(e) => return Err(e.into()),
    };
    if revise && revision.is_none() {
        let (rev, d) = revise_design(&design)?;
        revision = Some((rev.a, design.nu));
        design = d;
    }
    let verdict = locality_check(&design.table, i.mode)?;
    let nonadaptive = verdict.positivity_min >= -TOL && completeness(&design.table) <= 1.0 + TOL;
    let mut protocol = None;
    let mut fallback = None;
    if nonadaptive {
        protocol = Some(protocol_from_table(&design.table)?);
    } else if verdict.local && is_w3(&i.psi) {
        let tree = Protocol::from_tree(adaptive_w3())?;
        let want = homogeneous_operator(&i.psi, design.nu)?;
        if tree.operator().approx_eq(&want, 1e-9) {
            protocol = Some(tree);
        }
    } else if !verdict.local {
        fallback = inhomogeneous_fallback(&i.psi, &i.t).ok();
    }
    Ok(Designed {
        route,
        design,
        revision,
        verdict,
        protocol,
        fallback,
    })
}

fn is_w3(psi: &StateVector) -> bool {
    psi.qubits() == 3 && w_state(3).is_ok_and(|w| w.fidelity(psi) > 1.0 - 1e-9)
}

pub fn design(a: &DesignArgs) -> CliResult {
    let i = inputs(&a.table)?;
    let d = run_design(&i, a.revise)?;
    let feasible = d.verdict.local;
    let doc = d.protocol.as_ref().map(Protocol::to_document);
    let fallback = d.fallback.as_ref().map(Protocol::to_document);
    let report = merge(
        header(&a.table, &i),
        json!({
            "route": d.route,
            "feasible": feasible,
            "nu": d.design.nu,
            "efficiency": d.design.efficiency(),
            "revision": d.revision.map(|(a, nu)| json!({"a": a, "nu_before": nu})),
            "verdict": to_value(&d.verdict),
            "spectrum": spectrum(&homogeneous_operator(&i.psi, d.design.nu)?),
            "table": to_value(&d.design.table.to_document()),
            "protocol": doc.as_ref().map(to_value),
            "fallback_protocol": fallback.as_ref().map(to_value),
        }),
    );
    let mut extra = vec![("table.csv", d.design.table.to_csv())];
    if let Some(p) = doc.as_ref().or(fallback.as_ref()) {
        extra.push(("protocol.json", document(p)));
    }
    emit(
        report,
        a.table.out.as_deref(),
        "design",
        &extra,
        if feasible { 0 } else { INFEASIBLE },
    )
}

pub fn check(a: &TableArgs) -> CliResult {
    let i = inputs(a)?;
    let table = quasi_prob(&i.psi.projector(), &i.t);
    let verdict = locality_check(&table, i.mode)?;
    let report = merge(header(a, &i), to_value(&verdict));
    let code = if verdict.local { 0 } else { INFEASIBLE };
    emit(
        report,
        a.out.as_deref(),
        "check",
        &[("table.csv", table.to_csv())],
        code,
    )
}

pub fn revise(a: &TableArgs) -> CliResult {
    let i = inputs(a)?;
    let d = run_design(&i, true)?;
    let (identity_weight, nu) = d.revision.expect("revision requested");
    let report = merge(
        header(a, &i),
        json!({
            "route": d.route,
            "a": identity_weight,
            "nu": nu,
            "revised_nu": d.design.nu,
            "verdict": to_value(&d.verdict),
            "table": to_value(&d.design.table.to_document()),
        }),
    );
    emit(
        report,
        a.out.as_deref(),
        "revise",
        &[("table.csv", d.design.table.to_csv())],
        0,
    )
}

fn load_protocol(path: &Path) -> Result<Protocol, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("{} is not JSON: {e}", path.display())))?;
    // accept a bare protocol or a full design report
    let inner = ["protocol", "fallback_protocol"]
        .iter()
        .find_map(|k| value.get(*k).filter(|v| !v.is_null()));
    let value = match inner {
        Some(inner) if value.get("settings").is_none() => inner.clone(),
        _ => value,
    };
    let doc: ProtocolDocument = serde_json::from_value(value)
        .map_err(|e| Failure::Input(format!("{} is not a protocol: {e}", path.display())))?;
    Ok(Protocol::from_document(&doc)?)
}

fn source_at(
    omega: &HermitianOperator,
    psi: &StateVector,
    epsilon: f64,
) -> Result<StateVector, Failure> {
    if epsilon == 0.0 {
        Ok(psi.clone())
    } else {
        Ok(worst_case_bad_state(omega, psi, epsilon)?)
    }
}

pub fn simulate(a: &SimulateArgs) -> CliResult {
    let i = inputs(&a.design.table)?;
    let protocol = match &a.protocol {
        Some(path) => load_protocol(path)?,
        None => {
            let d = run_design(&i, a.design.revise)?;
            d.protocol.or(d.fallback).ok_or(QsvError::NoProtocol)?
        }
    };
    if protocol.qubits() != i.psi.qubits() {
        return Err(QsvError::DimensionMismatch {
            expected: protocol.operator().dim(),
            found: i.psi.dim(),
        }
        .into());
    }
    let copies = match a.copies {
        Some(c) => c,
        None => required_copies(a.epsilon, a.gamma, protocol.nu())?,
    };
    let state = source_at(protocol.operator(), &i.psi, a.epsilon)?;
    let single = protocol.pass_probability(&state.projector());
    let hits = simulate_counts(&protocol, &Source::Pure(state), copies, a.trials, a.seed)?;
    let report = SimulationReport {
        protocol: protocol.kind(),
        epsilon: a.epsilon,
        gamma: a.gamma,
        nu: protocol.nu(),
        copies,
        trials: a.trials,
        seed: a.seed,
        acceptance_rate: hits as f64 / a.trials as f64,
    };
    let report = merge(
        merge(header(&a.design.table, &i), to_value(&report)),
        json!({
            "single_copy_pass": single,
            "predicted_acceptance": single.powi(copies.min(i32::MAX as u64) as i32),
            "spectrum": spectrum(protocol.operator()),
        }),
    );
    emit(report, a.design.table.out.as_deref(), "simulate", &[], 0)
}

pub fn estimate(a: &EstimateArgs) -> CliResult {
    let i = inputs(&a.design.table)?;
    let d = run_design(&i, a.design.revise)?;
    let table = &d.design.table;
    let (protocol, scale) = if positivity_min(table) >= -TOL && completeness(table) <= 1.0 + TOL {
        (protocol_from_table(table)?, 1.0)
    } else {
        let (rescaled, scale) = rescale_for_estimation(table)?;
        (rescaled_protocol(&rescaled, scale)?, scale)
    };
    let direction = homogeneous_operator(&i.psi, protocol.nu())?;
    let state = source_at(&direction, &i.psi, a.epsilon)?;
    let hits = simulate_counts(&protocol, &Source::Pure(state), 1, a.trials, a.seed)?;
    let est = fidelity_estimate(hits, a.trials, protocol.nu(), scale)?;
    let report = merge(
        merge(header(&a.design.table, &i), to_value(&est)),
        json!({
            "route": d.route,
            "nu": protocol.nu(),
            "true_fidelity": 1.0 - a.epsilon,
            "seed": a.seed,
        }),
    );
    emit(report, a.design.table.out.as_deref(), "estimate", &[], 0)
}

pub fn witness(a: &WitnessArgs) -> CliResult {
    let psi = parse_state_spec(&a.state)?;
    let w = witness_report(&psi)?;
    let report = merge(json!({"state": a.state}), to_value(&w.to_document()));
    emit(report, a.out.as_deref(), "witness", &[], 0)
}

pub fn export(a: &ExportArgs) -> CliResult {
    let i = inputs(&a.design.table)?;
    let table = match a.table {
        TableChoice::Target => quasi_prob(&i.psi.projector(), &i.t),
        TableChoice::Design => run_design(&i, a.design.revise)?.design.table,
    };
    let (name, text) = match a.format {
        Format::Csv => ("table.csv", table.to_csv()),
        Format::Json => ("table.json", document(&table.to_document())),
    };
    print_out(&text);
    if let Some(dir) = &a.design.table.out {
        fs::create_dir_all(dir)
            .and_then(|_| fs::write(dir.join(name), &text))
            .map_err(|e| {
                Failure::Input(format!("cannot write {}: {e}", dir.join(name).display()))
            })?;
    }
    Ok(std::process::ExitCode::SUCCESS)
}
