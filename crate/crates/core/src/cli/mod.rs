//! Batch command line: JSON run descriptors in, `#`-commented CSV tables
//! and a `manifest.json` out.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 solver failure,
//! 4 invariant violation, 5 I/O error.

mod descriptor;
mod run;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use descriptor::{
    Command, CriticalPitchParams, CrossSpectrumParams, EffectiveParams, FrenetParams, GapSweep, OutputFormat,
    OutputSpec, PhaseDiagramParams, RunDescriptor, TubeBindParams,
};
pub use run::{execute, exit_code, run, Manifest, RunOutcome, RunReport};

use crate::effective_model::TubeKind;
use crate::geometry::{HelixParams, PerturbationProfile};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(name = "helixwg", version, about = "Bound states of hard-wall helical quantum waveguides")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Args)]
struct Common {
    /// JSON document: a full run descriptor or just the parameter block.
    config: Option<PathBuf>,
    /// Output directory, overriding the one in the document.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Runs a descriptor (or a previous manifest.json).
    Run {
        descriptor: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Frame, curvature, torsion and ribbon tilt along a perturbed helix.
    Frenet(Common),
    /// Transverse ground energies E(alpha) and the slope at alpha = 1.
    CrossSpectrum(Common),
    /// Direct search for bound states of the straightened tube.
    TubeBind(Common),
    /// Thin-tube effective potential and its binding verdict.
    Effective(Common),
    /// Critical pitch R0*beta0 of the circular and ribbon models.
    CriticalPitch {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_kind)]
        kind: Option<TubeKind>,
    },
    /// Binding verdicts over a grid of pitches for squeezes and inflations.
    PhaseDiagram(Common),
}

fn parse_kind(s: &str) -> std::result::Result<TubeKind, String> {
    match s {
        "circular" | "circ" => Ok(TubeKind::Circular),
        "ribbon" => Ok(TubeKind::Ribbon),
        _ => Err(format!("unknown kind {s:?}, expected circular or ribbon")),
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(Error::Io)
}

/// Descriptor for a subcommand: the document may be a full descriptor for
/// the same command or only its parameter block; without a document the
/// defaults are used where they exist.
fn descriptor_for(name: &str, common: &Common, default: Option<serde_json::Value>) -> Result<RunDescriptor> {
    let mut desc = match &common.config {
        Some(path) => {
            let text = read(path)?;
            let value: serde_json::Value = serde_json::from_str(&text)?;
            if value.get("command").is_some() || value.get("descriptor").is_some() {
                RunDescriptor::from_json(&text)?
            } else {
                serde_json::from_value(serde_json::json!({ "command": name, "params": value }))?
            }
        }
        None => match default {
            Some(params) => serde_json::from_value(serde_json::json!({ "command": name, "params": params }))?,
            None => return Err(Error::Config(format!("{name} needs a configuration document"))),
        },
    };
    if desc.command.name() != name {
        return Err(Error::Config(format!(
            "document is a {} descriptor, not {name}",
            desc.command.name()
        )));
    }
    if let Some(out) = &common.out {
        desc.output.dir = out.clone();
    }
    Ok(desc)
}

fn resolve(cli: Cli) -> Result<RunDescriptor> {
    match cli.command {
        Sub::Run { descriptor, out } => {
            let mut d = RunDescriptor::from_json(&read(&descriptor)?)?;
            if let Some(o) = out {
                d.output.dir = o;
            }
            Ok(d)
        }
        Sub::Frenet(c) => {
            let def = serde_json::to_value(FrenetParams {
                helix: HelixParams { r0: 1.0, beta0: 1.0 },
                perturbation: PerturbationProfile::unperturbed(),
                s_min: 0.0,
                s_max: 10.0,
                samples: 201,
            })?;
            descriptor_for("frenet", &c, Some(def))
        }
        Sub::CrossSpectrum(c) => descriptor_for("cross-spectrum", &c, None),
        Sub::TubeBind(c) => descriptor_for("tube-bind", &c, None),
        Sub::Effective(c) => descriptor_for("effective", &c, None),
        Sub::CriticalPitch { common, kind } => {
            let mut d = descriptor_for(
                "critical-pitch",
                &common,
                Some(serde_json::to_value(CriticalPitchParams::default())?),
            )?;
            if let (Some(k), Command::CriticalPitch(p)) = (kind, &mut d.command) {
                p.kind = Some(k);
            }
            Ok(d)
        }
        Sub::PhaseDiagram(c) => descriptor_for(
            "phase-diagram",
            &c,
            Some(serde_json::to_value(PhaseDiagramParams::default())?),
        ),
    }
}

/// Parses `args`, runs, prints the summary and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match resolve(cli).and_then(|d| run(&d)) {
        Ok(report) => {
            for line in &report.summary {
                println!("{line}");
            }
            for p in &report.outputs {
                println!("wrote {}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
