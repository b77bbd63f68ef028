//! One binary, one subcommand per pipeline stage.
//!
//! Exit codes: 0 on success (all checks pass), 1 when a verification or
//! numerical check fails, 2 on usage or schema errors. Machine output goes
//! to stdout under `--json`; human summaries always go to stderr.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use tracelab::covering::{build_covering, covering_params, verify_covering};
use tracelab::divdiff::{
    combinations, divided_difference, seminorm, seminorm_curve, DivDiffRequest, SeminormMode,
};
use tracelab::error::Error;
use tracelab::geometry::{Metric, PartedSet};
use tracelab::interpolate::{assemble, extend_values, DPolicy};
use tracelab::io::{
    save_json, BundleFile, ClustersFile, CoverFile, PartsFile, SetFile, WeightFile,
};
use tracelab::lab::{generate, run_suite, Scenario, ScenarioKind, SuiteName};
use tracelab::separation::{
    blowup_curve, count_condition, counterexample_sequence, decompose, is_weakly_separated,
    max_eps, SeparationParams,
};
use tracelab::svg::{render_covering, render_separation, write_svg};
use tracelab::weight::Weight;

#[derive(Parser)]
#[command(name = "tracelab", version, about = "Divided-difference trace spaces on point sets")]
struct Cli {
    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct WeightArg {
    /// Weight descriptor file; defaults to the log weight matching the
    /// input's metric.
    #[arg(long)]
    weight: Option<PathBuf>,
}

impl WeightArg {
    fn resolve(&self, metric: Metric) -> Result<Weight, Error> {
        match &self.weight {
            Some(path) => WeightFile::load(path)?.to_weight(),
            None => Ok(match metric {
                Metric::Plane => Weight::log_plane(),
                Metric::Disk => Weight::korenblum_disk(),
            }),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Divided differences of every tuple of the given order.
    Divdiff {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        order: usize,
        /// Use Blaschke denominators (requires points inside the unit disk).
        #[arg(long)]
        hyperbolic: bool,
    },
    /// Damped supremum of divided differences, or a curve over damping levels.
    Seminorm {
        #[arg(long)]
        input: PathBuf,
        /// Tuple size n (differences of order n-1).
        #[arg(long)]
        order: usize,
        #[arg(long = "B", default_value_t = 1.0, allow_hyphen_values = true)]
        b: f64,
        /// Sample the curve on `b0:b1:steps` instead of a single level.
        #[arg(long)]
        curve: Option<String>,
        /// With --curve: also report the first level whose value is <= A.
        #[arg(long = "A")]
        target_a: Option<f64>,
        /// Lower-bound mode from this many random tuples.
        #[arg(long)]
        sampled: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        hyperbolic: bool,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Weak-separation check, or the largest feasible eps via --find-eps.
    Separation {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long = "C", default_value_t = 1.0)]
        c: f64,
        #[arg(long)]
        find_eps: bool,
        /// Render the disks to this SVG file.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Split a set into n weakly separated parts.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long = "C")]
        c: f64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Blow-up curve of the cluster counterexample values.
    Counterexample {
        #[arg(long)]
        clusters: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long = "B", default_value_t = 1.0)]
        b: f64,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Build and verify a disk covering of a parted set.
    Cover {
        #[arg(long)]
        input: PathBuf,
        /// Part labels from a decomposition file (defaults to the input's).
        #[arg(long)]
        parts: Option<PathBuf>,
        /// Separation scale; defaults to the largest feasible value.
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long = "C", default_value_t = 0.25)]
        c: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Extend values given on one part to the whole union, constant per disk.
    Extend {
        /// Set with parts and values (read on the chosen part).
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        part: usize,
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Assemble the interpolant and verify it reproduces the values.
    Interpolate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        parts: Option<PathBuf>,
        #[arg(long)]
        cover: PathBuf,
        /// Damping exponent (defaults to 0; interpolation is exponent-free).
        #[arg(long = "D", default_value_t = 0.0)]
        d: f64,
        /// Require the disk metric (Blaschke factors).
        #[arg(long)]
        hyperbolic: bool,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Run a verification suite (exit 1 on any failing record).
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Scenario generation and suite runs.
    #[command(subcommand)]
    Lab(LabCommand),
    /// Render a covering or separation picture.
    Render {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long = "C", default_value_t = 1.0)]
        c: f64,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        weight: WeightArg,
    },
}

#[derive(Subcommand)]
enum LabCommand {
    /// Generate a scenario point set.
    Generate {
        /// lattice | perturbed_lattice | radial_disk | clustered | union_of_separated
        #[arg(long)]
        kind: String,
        /// Comma-separated key=value parameters for the kind.
        #[arg(long, default_value = "")]
        params: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Companion clusters file for the clustered kind.
        #[arg(long)]
        clusters_out: Option<PathBuf>,
        #[command(flatten)]
        weight: WeightArg,
    },
    /// Run a suite and write its report.
    Run {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    tracelab::configure_threads_from_env();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Domain(_)
                | Error::InvalidInput(_)
                | Error::Schema { .. }
                | Error::Io(_)
                | Error::Json(_) => 2,
                Error::Precondition(_)
                | Error::Budget(_)
                | Error::Verification(_)
                | Error::Conditioning(_) => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn emit(cli: &Cli, value: serde_json::Value) -> Result<(), Error> {
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&value)?);
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, Error> {
    match &cli.command {
        Command::Divdiff { input, order, hyperbolic } => {
            let file = SetFile::load(input)?;
            let v = file.to_valued_set()?;
            let metric = if *hyperbolic { Metric::Disk } else { Metric::Plane };
            let k = order + 1;
            if k > v.len() {
                return Err(Error::InvalidInput(format!(
                    "order {order} needs {k} points, set has {}",
                    v.len()
                )));
            }
            if (v.len() as f64).powi(k as i32) > 1e7 {
                return Err(Error::Budget("too many tuples at this order".into()));
            }
            let mut tuples = Vec::new();
            let mut values = Vec::new();
            for combo in combinations(v.len(), k) {
                let req = DivDiffRequest::new(combo.clone())?;
                let dd = divided_difference(&v, &req, metric)?;
                tuples.push(combo);
                values.push(json!({ "re": dd.re, "im": dd.im }));
            }
            eprintln!("{} tuples of order {order}", tuples.len());
            emit(cli, json!({ "order": order, "tuples": tuples, "values": values }))?;
            Ok(true)
        }

        Command::Seminorm { input, order, b, curve, target_a, sampled, seed, hyperbolic, weight } => {
            let file = SetFile::load(input)?;
            let v = file.to_valued_set()?;
            let metric = v.set().metric();
            if *hyperbolic && metric != Metric::Disk {
                return Err(Error::InvalidInput(
                    "--hyperbolic requires a disk-metric input".into(),
                ));
            }
            let w = weight.resolve(metric)?;
            let mode = match sampled {
                Some(k) => SeminormMode::Sampled { tuples: *k, seed: *seed },
                None => SeminormMode::Exact,
            };
            if let Some(arg) = curve {
                let (b0, b1, steps) = parse_curve(arg)?;
                let bs: Vec<f64> = (0..steps)
                    .map(|i| b0 + (b1 - b0) * i as f64 / (steps.max(2) - 1) as f64)
                    .collect();
                let curve = seminorm_curve(&v, &w, *order, &bs, mode)?;
                eprintln!("seminorm curve over {} levels", curve.samples.len());
                let membership = target_a.map(|a| curve.first_level_below(a));
                emit(
                    cli,
                    json!({ "curve": curve.samples, "membership_B": membership.flatten() }),
                )?;
            } else {
                let s = seminorm(&v, &w, *order, *b, mode)?;
                eprintln!("S_{{{b}}} = {s:.12e}");
                emit(cli, json!({ "order": order, "B": b, "value": s }))?;
            }
            Ok(true)
        }

        Command::Separation { input, eps, c, find_eps, svg, weight } => {
            let file = SetFile::load(input)?;
            let set = file.to_point_set()?;
            let w = weight.resolve(set.metric())?;
            if *find_eps {
                let best = max_eps(&set, &w, *c)?;
                eprintln!("largest feasible eps at C={c}: {best:.12e}");
                emit(cli, json!({ "C": c, "max_eps": best }))?;
                return Ok(true);
            }
            let eps = eps.ok_or_else(|| {
                Error::InvalidInput("provide --eps or use --find-eps".into())
            })?;
            let params = SeparationParams::new(eps, *c)?;
            let report = is_weakly_separated(&set, &w, &params)?;
            let count = count_condition(&set, &w, &params)?;
            if let Some(path) = svg {
                write_svg(path, &render_separation(&set, &w, &params, &report)?)?;
            }
            eprintln!(
                "separated: {} (min margin {:.6e}), max disk count {}",
                report.separated, report.min_margin, count.max_count
            );
            emit(
                cli,
                json!({
                    "separated": report.separated,
                    "witness": report.witness,
                    "min_margin": report.min_margin,
                    "max_count": count.max_count,
                }),
            )?;
            Ok(report.separated)
        }

        Command::Decompose { input, n, eps, c, out, weight } => {
            let file = SetFile::load(input)?;
            let set = file.to_point_set()?;
            let w = weight.resolve(set.metric())?;
            let params = SeparationParams::new(*eps, *c)?;
            let dec = decompose(&set, &w, &params, *n)?;
            PartsFile {
                schema: tracelab::io::SCHEMA.into(),
                parts: dec.parts.clone(),
                eps_prime: dec.params_prime.eps,
                c_prime: dec.params_prime.c,
            }
            .save(out)?;
            eprintln!(
                "{} parts written to {} (eps'={:.6e}, C'={:.6e})",
                dec.parts.len(),
                out.display(),
                dec.params_prime.eps,
                dec.params_prime.c
            );
            emit(
                cli,
                json!({
                    "parts": dec.parts,
                    "eps_prime": dec.params_prime.eps,
                    "C_prime": dec.params_prime.c,
                }),
            )?;
            Ok(true)
        }

        Command::Counterexample { clusters, n, b, weight } => {
            let family = ClustersFile::load(clusters)?.to_family()?;
            let w = weight.resolve(family.metric)?;
            family.validate(&w)?;
            let cx = counterexample_sequence(&family, *n)?;
            let curve = blowup_curve(&cx, &w, *n, *b)?;
            let floor = (-b * *n as f64 * w.e0).exp();
            let mut pass = true;
            for bp in &curve {
                if bp.value < bp.scale as f64 * floor * (1.0 - 1e-6) {
                    pass = false;
                }
            }
            eprintln!(
                "{} clusters, damped order-{n} values from {:.6e} to {:.6e}",
                curve.len(),
                curve.first().map(|p| p.value).unwrap_or(0.0),
                curve.last().map(|p| p.value).unwrap_or(0.0)
            );
            emit(
                cli,
                json!({
                    "n": n,
                    "B": b,
                    "floor_per_scale": floor,
                    "curve": curve,
                    "diverges": pass,
                }),
            )?;
            Ok(pass)
        }

        Command::Cover { input, parts, eps, c, out, svg, weight } => {
            let file = SetFile::load(input)?;
            let parted = load_parted(&file, parts.as_deref())?;
            let w = weight.resolve(parted.set().metric())?;
            let eps = match eps {
                Some(e) => *e,
                None => covering_params(&parted, &w, *c)?,
            };
            let cov = build_covering(&parted, &w, eps, *c)?;
            let report = verify_covering(&cov, &parted, &w)?;
            CoverFile::from_covering(&cov).save(out)?;
            if let Some(path) = svg {
                write_svg(path, &render_covering(&parted, &cov))?;
            }
            eprintln!(
                "{} disks covering {} points; all clauses pass: {}",
                cov.centers.len(),
                parted.set().len(),
                report.all_pass()
            );
            emit(
                cli,
                json!({
                    "centers": cov.centers,
                    "radii": cov.radii,
                    "constants": {
                        "a": cov.constants.a,
                        "b": cov.constants.b,
                        "B1": cov.constants.b1,
                        "B2": cov.constants.b2,
                        "eps": cov.constants.eps,
                    },
                    "all_clauses_pass": report.all_pass(),
                }),
            )?;
            Ok(report.all_pass())
        }

        Command::Extend { input, part, cover, out } => {
            let file = SetFile::load(input)?;
            let parted = file.to_parted_set()?;
            let cov = CoverFile::load(cover)?.to_covering(parted.set())?;
            let all_values = file.to_valued_set()?;
            let part_values: Vec<_> = parted
                .part(*part)
                .iter()
                .map(|&i| all_values.value(i))
                .collect();
            let extended = extend_values(&parted, *part, &part_values, &cov)?;
            let mut out_file = SetFile::from_valued_set(&extended);
            out_file.parts = file.parts.clone();
            out_file.save(out)?;
            eprintln!("extension written to {}", out.display());
            emit(cli, json!({ "points": extended.len(), "part": part }))?;
            Ok(true)
        }

        Command::Interpolate { input, parts, cover, d, hyperbolic, out, weight } => {
            let file = SetFile::load(input)?;
            let parted = load_parted(&file, parts.as_deref())?;
            if *hyperbolic && parted.set().metric() != Metric::Disk {
                return Err(Error::InvalidInput(
                    "--hyperbolic requires a disk-metric input".into(),
                ));
            }
            let omega = file.to_valued_set()?;
            let w = weight.resolve(parted.set().metric())?;
            let cov = CoverFile::load(cover)?.to_covering(parted.set())?;
            let bundle = assemble(
                &omega,
                &parted,
                &cov,
                &w,
                DPolicy::Fixed(*d),
                tracelab::interpolate::DEFAULT_RESIDUAL_TOL,
            )?;
            BundleFile::from_bundle(&bundle).save(out)?;
            eprintln!(
                "interpolant over {} disks: max residual {:.3e}, max leakage {:.3e}",
                cov.centers.len(),
                bundle.max_rel_residual,
                bundle.max_leakage
            );
            emit(
                cli,
                json!({
                    "D": bundle.d,
                    "max_rel_residual": bundle.max_rel_residual,
                    "max_leakage": bundle.max_leakage,
                    "coeff_sum": bundle.coeff_sum,
                }),
            )?;
            Ok(true)
        }

        Command::Verify { suite, trials, seed } => {
            let name = SuiteName::from_str(suite)?;
            let report = run_suite(name, *trials, *seed)?;
            eprintln!(
                "suite {}: {} passed, {} failed",
                report.suite, report.passed, report.failed
            );
            emit(cli, serde_json::to_value(&report)?)?;
            Ok(report.all_pass())
        }

        Command::Lab(LabCommand::Generate { kind, params, seed, out, clusters_out, weight }) => {
            let kind = parse_kind(kind, params)?;
            let metric = kind_metric(&kind);
            let w = weight.resolve(metric)?;
            let generated = generate(&Scenario { kind, seed: *seed }, &w)?;
            let mut file = SetFile::from_point_set(&generated.set);
            if let Some(parts) = &generated.parts {
                file.parts = Some(parts.clone());
            }
            file.save(out)?;
            if let Some(path) = clusters_out {
                match &generated.clusters {
                    Some(family) => ClustersFile::from_family(family).save(path)?,
                    None => {
                        return Err(Error::InvalidInput(
                            "this scenario kind has no cluster annotation".into(),
                        ))
                    }
                }
            }
            eprintln!("{} points written to {}", generated.set.len(), out.display());
            emit(
                cli,
                json!({
                    "points": generated.set.len(),
                    "parts": generated.parts.as_ref().map(|p| p.len()),
                    "clusters": generated.clusters.as_ref().map(|f| f.clusters.len()),
                }),
            )?;
            Ok(true)
        }

        Command::Lab(LabCommand::Run { suite, trials, seed, report }) => {
            let name = SuiteName::from_str(suite)?;
            let result = run_suite(name, *trials, *seed)?;
            if let Some(path) = report {
                save_json(path, &result)?;
            }
            eprintln!(
                "suite {}: {} passed, {} failed ({} trials, seed {seed}, prng {})",
                result.suite, result.passed, result.failed, trials, result.prng
            );
            emit(cli, serde_json::to_value(&result)?)?;
            Ok(result.all_pass())
        }

        Command::Render { input, cover, eps, c, out, weight } => {
            let file = SetFile::load(input)?;
            match cover {
                Some(path) => {
                    let parted = file.to_parted_set()?;
                    let cov = CoverFile::load(path)?.to_covering(parted.set())?;
                    write_svg(out, &render_covering(&parted, &cov))?;
                }
                None => {
                    let set = file.to_point_set()?;
                    let w = weight.resolve(set.metric())?;
                    let eps = eps.ok_or_else(|| {
                        Error::InvalidInput("render needs --cover or --eps".into())
                    })?;
                    let params = SeparationParams::new(eps, *c)?;
                    let report = is_weakly_separated(&set, &w, &params)?;
                    write_svg(out, &render_separation(&set, &w, &params, &report)?)?;
                }
            }
            eprintln!("rendered {}", out.display());
            Ok(true)
        }
    }
}

fn load_parted(file: &SetFile, parts: Option<&Path>) -> Result<PartedSet, Error> {
    match parts {
        Some(path) => {
            let parts_file = PartsFile::load(path)?;
            PartedSet::new(file.to_point_set()?, parts_file.parts)
        }
        None => file.to_parted_set(),
    }
}

fn parse_curve(arg: &str) -> Result<(f64, f64, usize), Error> {
    let parts: Vec<&str> = arg.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "curve must be b0:b1:steps, got {arg}"
        )));
    }
    let b0 = parts[0]
        .parse::<f64>()
        .map_err(|e| Error::InvalidInput(format!("bad b0: {e}")))?;
    let b1 = parts[1]
        .parse::<f64>()
        .map_err(|e| Error::InvalidInput(format!("bad b1: {e}")))?;
    let steps = parts[2]
        .parse::<usize>()
        .map_err(|e| Error::InvalidInput(format!("bad steps: {e}")))?;
    if steps < 2 {
        return Err(Error::InvalidInput("curve needs at least 2 steps".into()));
    }
    Ok((b0, b1, steps))
}

fn kind_metric(kind: &ScenarioKind) -> Metric {
    match kind {
        ScenarioKind::RadialDisk { .. } => Metric::Disk,
        ScenarioKind::UnionOfSeparated { metric, .. } => *metric,
        _ => Metric::Plane,
    }
}

fn parse_kind(kind: &str, params: &str) -> Result<ScenarioKind, Error> {
    let mut map = std::collections::BTreeMap::new();
    for pair in params.split(',').filter(|s| !s.is_empty()) {
        let (k, v) = pair.split_once('=').ok_or_else(|| {
            Error::InvalidInput(format!("parameter '{pair}' is not key=value"))
        })?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    let get_f64 = |map: &std::collections::BTreeMap<String, String>, key: &str, default: f64| {
        map.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|e| Error::InvalidInput(format!("bad {key}: {e}")))
            })
            .unwrap_or(Ok(default))
    };
    let get_usize = |map: &std::collections::BTreeMap<String, String>, key: &str, default: usize| {
        map.get(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|e| Error::InvalidInput(format!("bad {key}: {e}")))
            })
            .unwrap_or(Ok(default))
    };
    match kind {
        "lattice" => Ok(ScenarioKind::Lattice {
            step: get_f64(&map, "step", 3.0)?,
            extent: get_f64(&map, "extent", 9.0)?,
        }),
        "perturbed_lattice" => Ok(ScenarioKind::PerturbedLattice {
            step: get_f64(&map, "step", 3.0)?,
            extent: get_f64(&map, "extent", 9.0)?,
            jitter: get_f64(&map, "jitter", 0.2)?,
        }),
        "radial_disk" => Ok(ScenarioKind::RadialDisk {
            rings: get_usize(&map, "rings", 4)?,
        }),
        "clustered" => Ok(ScenarioKind::Clustered {
            n: get_usize(&map, "n", 2)?,
            levels: get_usize(&map, "levels", 8)?,
        }),
        "union_of_separated" => {
            let metric = match map.get("metric").map(String::as_str).unwrap_or("plane") {
                "plane" => Metric::Plane,
                "disk" => Metric::Disk,
                other => {
                    return Err(Error::InvalidInput(format!(
                        "metric must be plane or disk, got '{other}'"
                    )))
                }
            };
            Ok(ScenarioKind::UnionOfSeparated {
                n: get_usize(&map, "n", 2)?,
                bases: get_usize(&map, "bases", 9)?,
                metric,
            })
        }
        other => Err(Error::InvalidInput(format!(
            "unknown scenario kind '{other}' (expected lattice, perturbed_lattice, \
             radial_disk, clustered or union_of_separated)"
        ))),
    }
}
