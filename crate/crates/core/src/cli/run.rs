use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use super::descriptor::*;
use crate::cross_section::{assemble_scaled_operator, energy_slope, ground_state, write_energy_curve_csv};
use crate::effective_model::{
    asymptotic_energy, binding_verdict, critical_pitch_with, expanded_potential, phase_diagram, write_phase_csv,
    write_potential_csv, EffectivePotential, TubeKind,
};
use crate::geometry::{write_curve_csv, PerturbedHelix};
use crate::numerics::smallest_eigenpairs;
use crate::numerics::eigen::DEFAULT_EIGEN_TOL;
use crate::straightened_tube::{
    bound_states_below_threshold, trial_function, variational_gap, write_gap_csv, AlphaProfile, TubeConfig,
};
use crate::{Error, Result};

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_)
        | Error::Config(_)
        | Error::Json(_)
        | Error::TooCoarse { .. }
        | Error::MemoryCap { .. } => 2,
        Error::Asymmetric { .. }
        | Error::SingularPivot { .. }
        | Error::NoConvergence { .. }
        | Error::NoSignChange { .. }
        | Error::FrameUndefined { .. }
        | Error::TiltUndefined { .. } => 3,
        Error::InvariantViolation(_) | Error::SupportViolation(_) => 4,
        Error::Io(_) => 5,
    }
}

/// In-memory result of one command.
#[derive(Debug, Clone, Default)]
pub struct RunOutcome {
    /// `(file name, CSV text)`.
    pub tables: Vec<(String, String)>,
    pub results: Value,
    /// Grid sizes, residuals and solver notes.
    pub diagnostics: Value,
    /// Human-readable lines for stdout.
    pub summary: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    /// Fully resolved descriptor; `helixwg run manifest.json` repeats the run.
    pub descriptor: RunDescriptor,
    pub threads: usize,
    pub budget_seconds: f64,
    pub elapsed_seconds: f64,
    pub outputs: Vec<String>,
    pub diagnostics: Value,
    pub results: Value,
}

fn csv_text(f: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::InvalidInput(e.to_string()))
}

fn units_header(command: &str) -> Vec<String> {
    vec![
        format!("helixwg {} {command}", env!("CARGO_PKG_VERSION")),
        "units: hbar^2/(2m) = 1; lengths in the helix length unit, energies in 1/length^2".into(),
    ]
}

/// Runs the command on the current rayon pool without touching the disk.
pub fn execute(desc: &RunDescriptor) -> Result<RunOutcome> {
    desc.validate()?;
    match &desc.command {
        Command::Frenet(p) => frenet(p),
        Command::CrossSpectrum(p) => cross_spectrum(p),
        Command::TubeBind(p) => tube_bind(p),
        Command::Effective(p) => effective(p),
        Command::CriticalPitch(p) => critical(p),
        Command::PhaseDiagram(p) => phase(p),
    }
}

fn frenet(p: &FrenetParams) -> Result<RunOutcome> {
    let curve = PerturbedHelix::new(p.helix, p.perturbation)?;
    let n = p.samples - 1;
    let s: Vec<f64> = (0..=n).map(|i| p.s_min + (p.s_max - p.s_min) * i as f64 / n as f64).collect();
    let mut header = units_header("frenet");
    header.push("t: curve parameter; s: arc length from t = 0; x,y,z: point on the curve".into());
    header.push("kappa: curvature |G'xG''|/|G'|^3; tau: torsion; alpha: ribbon tilt atan(n1/b1) (rad)".into());
    let text = csv_text(|b| write_curve_csv(&curve, &s, &header, b))?;
    Ok(RunOutcome {
        tables: vec![("frenet.csv".into(), text)],
        results: json!({ "kappa0": p.helix.kappa0(), "tau0": p.helix.tau0(), "samples": p.samples }),
        diagnostics: json!({}),
        summary: vec![format!(
            "frenet: {} samples, kappa0 = {:.12}, tau0 = {:.12}",
            p.samples,
            p.helix.kappa0(),
            p.helix.tau0()
        )],
    })
}

fn cross_spectrum(p: &CrossSpectrumParams) -> Result<RunOutcome> {
    let mut rows = Vec::with_capacity(p.alphas.len());
    let mut states = Vec::with_capacity(p.alphas.len());
    for &a in &p.alphas {
        let g = ground_state(&p.cross_section, a, p.beta0)?;
        if !g.is_positive() {
            return Err(Error::InvariantViolation(format!(
                "ground state changes sign at alpha = {a} (min {:e})",
                g.min_interior_value
            )));
        }
        rows.push((a, g.energy_extrapolated));
        states.push(json!({
            "alpha": a, "energy": g.energy, "energy_fine": g.energy_fine,
            "energy_extrapolated": g.energy_extrapolated, "residual": g.residual, "nodes": g.grid.len(),
        }));
    }
    let mut header = units_header("cross-spectrum");
    header.push("energy: two-grid extrapolation 2E(h/2) - E(h) of the lowest eigenvalue of h(alpha)".into());
    let energies = csv_text(|b| write_energy_curve_csv(&rows, &header, b))?;

    let (grid, op) = assemble_scaled_operator(&p.cross_section, 1.0, p.beta0)?;
    let spec = smallest_eigenpairs(&op, p.count.min(grid.len()), DEFAULT_EIGEN_TOL)?;
    let mut spectrum = String::new();
    for line in units_header("cross-spectrum") {
        spectrum.push_str(&format!("# {line}\n"));
    }
    spectrum.push_str(&format!("# lowest eigenvalues of h(1) on spacing {}\nindex,eigenvalue,residual\n", p.cross_section.grid_spacing));
    for (i, (e, r)) in spec.eigenvalues.iter().zip(&spec.residual_norms).enumerate() {
        spectrum.push_str(&format!("{i},{e:.12e},{r:.3e}\n"));
    }
    let slope = energy_slope(&p.cross_section, p.beta0)?;
    Ok(RunOutcome {
        tables: vec![("energies.csv".into(), energies), ("spectrum.csv".into(), spectrum)],
        results: json!({
            "slope": slope.value, "slope_error_estimate": slope.error_estimate, "slope_flagged": slope.flagged,
            "eigenvalues": spec.eigenvalues,
        }),
        diagnostics: json!({ "nodes": grid.len(), "states": states, "certified": spec.certified, "warnings": spec.warnings }),
        summary: vec![
            format!("E(1) = {:.10} (lowest of {} eigenvalues)", spec.eigenvalues[0], spec.eigenvalues.len()),
            format!("dE/dalpha at 1 = {:.8} (+- {:.1e})", slope.value, slope.error_estimate),
        ],
    })
}

fn tube_bind(p: &TubeBindParams) -> Result<RunOutcome> {
    let r = bound_states_below_threshold(&p.tube, p.count)?;
    let mut text = String::new();
    for line in units_header("tube-bind") {
        text.push_str(&format!("# {line}\n"));
    }
    text.push_str(&format!(
        "# threshold E(1) = {:.12e} on the tube cross-section grid; cutoff = {:.12e}\n",
        r.threshold, r.cutoff
    ));
    text.push_str("# L: box half-length; eigenvalue of the straightened-tube form; residual ||Ax - lambda x||\n");
    text.push_str("L,index,eigenvalue,residual\n");
    for b in 0..2 {
        for (i, (e, res)) in r.eigenvalues[b].iter().zip(&r.residuals[b]).enumerate() {
            text.push_str(&format!("{},{i},{e:.12e},{res:.3e}\n", r.box_half_lengths[b]));
        }
    }
    let mut tables = vec![("bound_states.csv".into(), text)];
    let mut summary = vec![if r.bound_states.is_empty() {
        format!("no bound states below E(1) = {:.10}", r.threshold)
    } else {
        format!(
            "{} bound state(s) below E(1) = {:.10}: {:?}",
            r.bound_states.len(),
            r.threshold,
            r.bound_states
        )
    }];
    let mut gaps = Vec::new();
    if let Some(g) = &p.gap_sweep {
        let mut rows = Vec::with_capacity(g.epsilons.len());
        for &eps in &g.epsilons {
            let cfg = TubeConfig {
                alpha_profile: AlphaProfile::tent(eps, g.s0),
                ..p.tube.clone()
            };
            let psi = trial_function(&cfg, g.s0, eps, eps.powf(g.delta_power), g.tail)?;
            let gap = variational_gap(&cfg, &psi)?;
            rows.push((eps, gap.gap));
            gaps.push(gap);
        }
        let mut header = units_header("tube-bind");
        header.push(format!(
            "gap: q[Psi] - E(1)||Psi||^2 for the tent 1 + eps(s0 - |s|), s0 = {}, delta = eps^{}",
            g.s0, g.delta_power
        ));
        tables.push(("gap.csv".into(), csv_text(|b| write_gap_csv(&rows, &header, b))?));
        summary.push(format!("trial gaps: {rows:?}"));
    }
    Ok(RunOutcome {
        tables,
        results: json!({ "bound_states": r.bound_states, "threshold": r.threshold, "gaps": gaps }),
        diagnostics: json!({ "unknowns": r.unknowns, "certified": r.certified, "cutoff": r.cutoff }),
        summary,
    })
}

fn effective(p: &EffectiveParams) -> Result<RunOutcome> {
    let pot = EffectivePotential::sample(p.kind, p.helix, p.perturbation, p.half_length, p.samples)?;
    let verdict = binding_verdict(&pot, p.confirm)?;
    let rows: Vec<(f64, f64, f64)> = pot
        .samples
        .iter()
        .map(|&(s, v)| (s, v, expanded_potential(p.kind, &p.helix, &p.perturbation, s)))
        .collect();
    let mut header = units_header("effective");
    header.push(format!(
        "v_exact: effective potential from the exact geometry at t(s); v_expansion: first order in eps; E0 = {:.12e}",
        pot.e0
    ));
    let text = csv_text(|b| write_potential_csv(&rows, &header, b))?;
    let lowest = verdict.eigenvalue_check.as_ref().and_then(|r| r.eigenvalues.first().copied());
    Ok(RunOutcome {
        tables: vec![("potential.csv".into(), text)],
        results: json!({
            "E0": asymptotic_energy(p.kind, &p.helix), "mean_integral": verdict.mean_integral,
            "binds": verdict.binds, "lowest_eigenvalue_minus_E0": lowest,
            "shallow_well_ratio": verdict.shallow_well_ratio,
        }),
        diagnostics: json!({
            "eigen_residuals": verdict.eigenvalue_check.as_ref().map(|r| r.residual_norms.clone()),
        }),
        summary: vec![format!(
            "mean integral = {:.6e}: {}",
            verdict.mean_integral,
            if verdict.binds { "binds" } else { "no binding" }
        )],
    })
}

fn kind_name(k: TubeKind) -> &'static str {
    match k {
        TubeKind::Circular => "circular",
        TubeKind::Ribbon => "ribbon",
    }
}

fn critical(p: &CriticalPitchParams) -> Result<RunOutcome> {
    let kinds = p.kind.map_or(TubeKind::ALL.to_vec(), |k| vec![k]);
    let mut text = String::new();
    for line in units_header("critical-pitch") {
        text.push_str(&format!("# {line}\n"));
    }
    text.push_str("# pitch R0*beta0 where the first-order mean potential changes sign\n");
    text.push_str("kind,r0,from_coefficient,from_exact_path,beta0_critical\n");
    let mut res = Vec::new();
    let mut summary = Vec::new();
    for k in kinds {
        let c = critical_pitch_with(k, p.r0, p.epsilon)?;
        text.push_str(&format!(
            "{},{},{:.9},{:.9},{:.9}\n",
            kind_name(k),
            p.r0,
            c.from_coefficient,
            c.from_exact_path,
            c.from_coefficient / p.r0
        ));
        summary.push(format!(
            "{}: R0*beta0 = {:.4} (coefficient {:.7}, exact path {:.7})",
            kind_name(k),
            c.from_coefficient,
            c.from_coefficient,
            c.from_exact_path
        ));
        res.push(json!({ "kind": k, "critical": c }));
    }
    Ok(RunOutcome {
        tables: vec![("critical_pitch.csv".into(), text)],
        results: Value::Array(res),
        diagnostics: json!({}),
        summary,
    })
}

fn phase(p: &PhaseDiagramParams) -> Result<RunOutcome> {
    let mut rows = Vec::new();
    for &k in &p.kinds {
        rows.extend(phase_diagram(k, &p.pitches, p.epsilon, p.confirm)?);
    }
    let mismatches: Vec<_> = rows.iter().filter(|r| !r.matches_prediction()).collect();
    let mut header = units_header("phase-diagram");
    header.push(format!(
        "mean_integral: int (V - E0) ds at eps = {}; predicted: above the critical pitch a squeeze binds, below it an inflation",
        p.epsilon
    ));
    let text = csv_text(|b| write_phase_csv(&rows, &header, b))?;
    let summary = vec![format!(
        "{} verdicts, {} disagree with the two-regime prediction",
        rows.len(),
        mismatches.len()
    )];
    Ok(RunOutcome {
        tables: vec![("phase_diagram.csv".into(), text)],
        results: json!({ "rows": rows.len(), "mismatches": mismatches }),
        diagnostics: json!({}),
        summary,
    })
}

/// Converts a `#`-commented CSV table into JSON row objects.
fn table_to_json(text: &str) -> Value {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let Some(head) = lines.next() else {
        return Value::Array(vec![]);
    };
    let cols: Vec<&str> = head.split(',').collect();
    let rows = lines
        .map(|l| {
            let obj: serde_json::Map<String, Value> = cols
                .iter()
                .zip(l.split(','))
                .map(|(c, v)| {
                    let val = v
                        .parse::<f64>()
                        .ok()
                        .and_then(|x| serde_json::Number::from_f64(x).map(Value::Number))
                        .unwrap_or_else(|| Value::String(v.to_string()));
                    (c.to_string(), val)
                })
                .collect();
            Value::Object(obj)
        })
        .collect();
    Value::Array(rows)
}

/// Files written by [`run`].
#[derive(Debug, Clone)]
pub struct RunReport {
    pub outputs: Vec<PathBuf>,
    pub manifest: Manifest,
    pub summary: Vec<String>,
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(Error::Io)
}

/// Validates, runs on a pool of `desc.threads` workers and writes the tables
/// (or `results.json`) and `manifest.json` into the output directory.
pub fn run(desc: &RunDescriptor) -> Result<RunReport> {
    desc.validate()?;
    let threads = desc.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("cannot build worker pool: {e}")))?;
    let start = Instant::now();
    let outcome = pool.install(|| execute(desc))?;
    let elapsed = start.elapsed().as_secs_f64();

    let dir = &desc.output.dir;
    fs::create_dir_all(dir)?;
    let mut outputs = Vec::new();
    match desc.output.format {
        OutputFormat::Csv => {
            for (name, text) in &outcome.tables {
                let path = dir.join(name);
                write(&path, text)?;
                outputs.push(path);
            }
        }
        OutputFormat::Json => {
            let tables: serde_json::Map<String, Value> = outcome
                .tables
                .iter()
                .map(|(n, t)| (n.trim_end_matches(".csv").to_string(), table_to_json(t)))
                .collect();
            let path = dir.join("results.json");
            write(&path, &serde_json::to_string_pretty(&json!({ "results": outcome.results, "tables": tables }))?)?;
            outputs.push(path);
        }
    }
    let manifest = Manifest {
        tool: "helixwg",
        version: env!("CARGO_PKG_VERSION"),
        command: desc.command.name(),
        descriptor: desc.clone(),
        threads,
        budget_seconds: desc.command.budget_seconds(),
        elapsed_seconds: elapsed,
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        diagnostics: outcome.diagnostics,
        results: outcome.results,
    };
    let mpath = dir.join("manifest.json");
    write(&mpath, &serde_json::to_string_pretty(&manifest)?)?;
    outputs.push(mpath);
    Ok(RunReport {
        outputs,
        manifest,
        summary: outcome.summary,
    })
}
