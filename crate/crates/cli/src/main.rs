//! Command-line front end: configuration ingestion, command dispatch, and
//! serialization of every report as a table, JSON record, or CSV rows.
//!
//! Exit codes: 0 success, 2 configuration/parse/validation errors, 3
//! numerical indeterminacy, 1 selftest failure.

mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use callias_core::acceptance;
use callias_core::chern::{boundary_ch, plaquette_chern, split_eigenbundles, SphereMesh};
use callias_core::equivariant::{closed_form, lefschetz_numeric, lefschetz_symbolic};
use callias_core::error::CoreError;
use callias_core::hopf::verify_suite;
use callias_core::index::{cross_check, main_index_with_mesh, twisted_flat_index_with_tol};
use callias_core::model::{chart_connections, Chirality, ConfigMode, MonopoleConfig};
use callias_core::sphere::discretized_spectrum;

use config::{parse_config, ConfigDoc};
use output::OutputFormat;

#[derive(Parser, Debug)]
#[command(
    name = "callias",
    version,
    about = "L²-indices of Dirac operators of Dirac-type singular monopoles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Path to the JSON configuration document.
    #[arg(long, global = true)]
    config: Option<String>,

    /// Output format for the report.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    out: OutputFormat,

    /// Chirality of the Dirac operator, + or -.
    #[arg(long, global = true, default_value = "+", allow_hyphen_values = true)]
    chirality: String,

    /// Angular truncation for mode sums and spectra.
    #[arg(long, global = true)]
    qmax: Option<u32>,

    /// Grid size (colatitude nodes for `spectrum`, quadrature nodes for
    /// `equivariant`).
    #[arg(long, global = true)]
    grid: Option<usize>,

    /// Boundary mesh as NxM (colatitude x longitude), minimum 40x80.
    #[arg(long, global = true, default_value = "40x80")]
    mesh: String,

    /// Decay-classification margin for the shooting method.
    #[arg(long, global = true, default_value_t = 0.1)]
    tol: f64,

    /// Seed for all randomized sampling.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Stencil scale for the Hopf finite-difference checks.
    #[arg(long, global = true, default_value_t = 1e-4)]
    h: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Index of D± by the boundary/weight formula, with cross-checks.
    Index,
    /// Equivariant fixed-point index, exact and by quadrature.
    Equivariant,
    /// Discretized twisted sphere spectrum per component charge.
    Spectrum,
    /// Per-mode radial Fredholm indices and their totals per component.
    RadialIndex,
    /// Per-component boundary degrees, the eigenbundle split, and the
    /// signed boundary integrals.
    Chern,
    /// Hopf correspondence battery at seeded sample points.
    HopfVerify {
        /// Monopole weight to lift.
        #[arg(long, default_value_t = 1)]
        k: i64,
        /// Sample points per check.
        #[arg(long, default_value_t = 6)]
        samples: usize,
    },
    /// Runs the full acceptance battery.
    Selftest,
}

fn chirality_of(cli: &Cli) -> Result<Chirality, String> {
    match cli.chirality.as_str() {
        "+" => Ok(Chirality::Plus),
        "-" => Ok(Chirality::Minus),
        other => Err(format!("chirality must be + or -, got {other}")),
    }
}

fn mesh_of(cli: &Cli, radius: f64) -> Result<SphereMesh, CoreError> {
    let parts: Vec<&str> = cli.mesh.split('x').collect();
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| CoreError::Input(format!("bad mesh spec {}", cli.mesh)))
    };
    if parts.len() != 2 {
        return Err(CoreError::Input(format!("bad mesh spec {}", cli.mesh)));
    }
    SphereMesh::new(parse(parts[0])?, parse(parts[1])?, radius)
}

fn load_config(cli: &Cli) -> Result<(ConfigDoc, MonopoleConfig), (u8, String)> {
    let path = cli.config.as_ref().ok_or((
        2u8,
        "--config PATH is required for this command".to_string(),
    ))?;
    let text =
        std::fs::read_to_string(path).map_err(|e| (2u8, format!("cannot read {path}: {e}")))?;
    parse_config(&text).map_err(|e| (2u8, e.to_string()))
}

fn core_exit(e: &CoreError) -> u8 {
    match e {
        CoreError::InvalidConfig(_) | CoreError::Input(_) | CoreError::Domain(_) => 2,
        CoreError::Indeterminate(_) | CoreError::Internal(_) => 3,
    }
}

fn record(command: &str, inputs: Value, results: Value, checks: Value) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "inputs": inputs,
        "results": results,
        "checks": checks,
    })
}

fn run(cli: &Cli) -> Result<Value, (u8, String)> {
    let chirality = chirality_of(cli).map_err(|m| (2u8, m))?;
    match &cli.command {
        Command::Index => {
            let (doc, cfg) = load_config(cli)?;
            let mesh =
                mesh_of(cli, cfg.boundary_radius).map_err(|e| (core_exit(&e), e.to_string()))?;
            let rep = main_index_with_mesh(&cfg, chirality, &mesh)
                .map_err(|e| (core_exit(&e), e.to_string()))?;
            let crossed = cross_check(&cfg).map_err(|e| (core_exit(&e), e.to_string()))?;
            Ok(record(
                "index",
                json!({"config": doc, "chirality": chirality, "mesh": cli.mesh}),
                serde_json::to_value(&rep).unwrap(),
                json!({"expressions_agree": rep.consistency, "stokes_cross_check": crossed}),
            ))
        }
        Command::Equivariant => {
            let (doc, cfg) = load_config(cli)?;
            if cfg.mode != ConfigMode::CompactModel {
                return Err((2, "equivariant requires a compact-model config".into()));
            }
            let nodes = cli.grid.unwrap_or(4096);
            if !(16..=1 << 22).contains(&nodes) {
                return Err((
                    2,
                    format!("grid {nodes} outside [16, 2^22] quadrature nodes"),
                ));
            }
            let weights = cfg.weights_by_point();
            let symbolic = lefschetz_symbolic(&weights, cfg.rank, chirality)
                .map_err(|e| (core_exit(&e), e.to_string()))?;
            let numeric = lefschetz_numeric(&weights, cfg.rank, chirality, nodes)
                .map_err(|e| (core_exit(&e), e.to_string()))?;
            let closed = closed_form(&weights, chirality);
            Ok(record(
                "equivariant",
                json!({"config": doc, "chirality": chirality, "quadrature_nodes": nodes}),
                json!({
                    "symbolic": symbolic,
                    "numeric": format!("{numeric:.6}"),
                    "closed_form": closed,
                }),
                json!({
                    "symbolic_equals_closed_form": symbolic == closed,
                    "numeric_within_tolerance": (numeric - symbolic as f64).abs() < 1e-6,
                }),
            ))
        }
        Command::Spectrum => {
            let (doc, cfg) = load_config(cli)?;
            let q_max = cli.qmax.unwrap_or(5).clamp(1, 16);
            let grid = cli.grid.unwrap_or(256);
            if !(64..=2048).contains(&grid) {
                return Err((
                    2,
                    format!("grid {grid} outside [64, 2048] colatitude nodes"),
                ));
            }
            let mut per_component = Vec::new();
            let mut all_ok = true;
            for j in 0..cfg.rank {
                let k = cfg.component_charge(j);
                let rep = discretized_spectrum(k, q_max, grid)
                    .map_err(|e| (core_exit(&e), e.to_string()))?;
                all_ok &= !rep.flagged;
                per_component.push(json!({
                    "component": j,
                    "charge": k,
                    "levels": rep.levels,
                    "max_rel_error": rep.max_rel_error,
                    "zero_modes": [rep.zero_modes_plus, rep.zero_modes_minus],
                    "flagged": rep.flagged,
                }));
            }
            Ok(record(
                "spectrum",
                json!({"config": doc, "qmax": q_max, "grid": grid}),
                json!({"components": per_component}),
                json!({"all_levels_matched": all_ok}),
            ))
        }
        Command::RadialIndex => {
            let (doc, cfg) = load_config(cli)?;
            if cfg.mode != ConfigMode::CompleteWithBoundary {
                return Err((
                    2,
                    "radial-index requires a complete-with-boundary config".into(),
                ));
            }
            if !(cli.tol > 0.0 && cli.tol <= 0.5) {
                return Err((2, format!("tol {} outside (0, 0.5]", cli.tol)));
            }
            let q_max = cli.qmax.unwrap_or(8).clamp(1, 32);
            let mut per_component = Vec::new();
            let mut total = 0i64;
            let mut agree = true;
            for j in 0..cfg.rank {
                let k = cfg.component_charge(j);
                let a = cfg.mass.values[j];
                let rep = twisted_flat_index_with_tol(k, a, chirality, q_max, cli.tol)
                    .map_err(|e| (core_exit(&e), e.to_string()))?;
                total += rep.total;
                let ms = rep.mode_verification.as_ref().unwrap();
                agree &= ms.agrees;
                per_component.push(json!({
                    "component": j,
                    "charge": k,
                    "mass": a,
                    "formula_index": rep.total,
                    "mode_sum": ms.mode_sum,
                    "per_mode": ms.per_mode,
                }));
            }
            Ok(record(
                "radial-index",
                json!({"config": doc, "chirality": chirality, "qmax": q_max, "tol": cli.tol}),
                json!({"components": per_component, "total": total}),
                json!({"mode_sums_agree": agree}),
            ))
        }
        Command::Chern => {
            let (doc, cfg) = load_config(cli)?;
            let mesh =
                mesh_of(cli, cfg.boundary_radius).map_err(|e| (core_exit(&e), e.to_string()))?;
            let mut degrees = Vec::new();
            let mut outward_total = 0i64;
            for j in 0..cfg.rank {
                let d = plaquette_chern(&mesh, &chart_connections(&cfg, j))
                    .map_err(|e| (core_exit(&e), e.to_string()))?;
                outward_total += d;
                degrees.push(json!({"component": j, "outward_degree": d}));
            }
            let split =
                split_eigenbundles(&cfg, chirality).map_err(|e| (core_exit(&e), e.to_string()))?;
            let b_plus = boundary_ch(&cfg, Chirality::Plus, &mesh)
                .map_err(|e| (core_exit(&e), e.to_string()))?;
            let b_minus = boundary_ch(&cfg, Chirality::Minus, &mesh)
                .map_err(|e| (core_exit(&e), e.to_string()))?;
            Ok(record(
                "chern",
                json!({"config": doc, "chirality": chirality, "mesh": cli.mesh}),
                json!({
                    "outward_degrees": degrees,
                    "split": split,
                    "boundary_integral_plus": b_plus,
                    "boundary_integral_minus": b_minus,
                }),
                json!({
                    "split_additivity": b_plus + b_minus == -outward_total,
                }),
            ))
        }
        Command::HopfVerify { k, samples } => {
            if !(cli.h > 0.0 && cli.h <= 1e-2) {
                return Err((2, format!("h {} outside (0, 1e-2]", cli.h)));
            }
            let samples = (*samples).clamp(1, 100);
            let rep = verify_suite(*k, cli.seed, cli.h, samples)
                .map_err(|e| (core_exit(&e), e.to_string()))?;
            let checks = json!({
                "fiber_identity_below_1e-12": rep.max_fiber_identity_residual < 1e-12,
                "connection_below_1e-10": rep.max_generator_residual < 1e-10,
                "asd_below_1e-4": rep.max_asd_residual_at_target < 1e-4,
                "clifford_exact": rep.clifford.lifted_relations_ok
                    && rep.clifford.frame_relations_ok
                    && rep.clifford.volume_normalization_ok,
                "intertwine_below_1e-3": rep.max_intertwine_residual < 1e-3,
            });
            Ok(record(
                "hopf-verify",
                json!({"k": k, "seed": cli.seed, "h": cli.h, "samples": samples}),
                serde_json::to_value(&rep).unwrap(),
                checks,
            ))
        }
        Command::Selftest => {
            let results = acceptance::run_all(cli.seed);
            for r in &results {
                // keep stdout byte-identical across runs for machine formats
                if cli.out == OutputFormat::Table {
                    println!("{r}");
                } else {
                    eprintln!("{r}");
                }
            }
            let all = results.iter().all(|r| r.passed);
            if !all {
                return Err((1, "selftest failed".into()));
            }
            Ok(record(
                "selftest",
                json!({"seed": cli.seed}),
                serde_json::to_value(&results).unwrap(),
                json!({"all_passed": all}),
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(value) => {
            println!("{}", output::render(&value, cli.out));
            ExitCode::SUCCESS
        }
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
