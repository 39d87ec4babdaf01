//! The eight subcommands. Every randomized subcommand takes an explicit
//! `--seed`; results are bit-identical across platforms, thread counts and
//! reruns. Reports are JSON on stdout (optionally duplicated to a file);
//! bulk records go to CSV files, each paired with a run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use rayon::prelude::*;
use serde_json::{json, Value};

use thurston_core::bounds::{self, BoundReport, CorpusSummary, RatioStats};
use thurston_core::construction::{self, ThurstonRep};
use thurston_core::geometry::{self, IsomClass};
use thurston_core::model::ModelParams;
use thurston_core::walk::{self, TrajectoryRun, ValidatedMeasure, WalkConfig};
use thurston_core::words::{ElementClass, Word};

use crate::errors::CliError;
use crate::formats;
use crate::manifest;

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the representation from intersection data: μ, freeness, K.
    Construct(ConstructArgs),
    /// Classify one word and audit its bounds when pseudo-Anosov.
    Classify(ClassifyArgs),
    /// Run random-walk trajectories and write per-step records as CSV.
    Walk(WalkArgs),
    /// Drift and Furstenberg–Kesten bounds from a walk CSV or inline run.
    Drift(AggregateArgs),
    /// Spectral-convergence report from a walk CSV or inline run.
    Spectral(AggregateArgs),
    /// Closed-form bound, exact probability and Monte Carlo for the random
    /// intersection-data model.
    Model(ModelArgs),
    /// Salem-power exponent window for a pseudo-Anosov word.
    Salem(SalemArgs),
    /// Sample random words and audit the stretch-factor bounds to CSV.
    Audit(AuditArgs),
}

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Construct(args) => cmd_construct(&args),
        Command::Classify(args) => cmd_classify(&args),
        Command::Walk(args) => cmd_walk(&args),
        Command::Drift(args) => cmd_drift(&args),
        Command::Spectral(args) => cmd_spectral(&args),
        Command::Model(args) => cmd_model(&args),
        Command::Salem(args) => cmd_salem(&args),
        Command::Audit(args) => cmd_audit(&args),
    }
}

/// Prints the report to stdout and optionally duplicates it to a file.
fn print_report(report: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report)? + "\n";
    print!("{text}");
    if let Some(path) = out {
        fs::write(path, &text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn isom_tag(class: IsomClass) -> &'static str {
    match class {
        IsomClass::Identity => "identity",
        IsomClass::Elliptic => "elliptic",
        IsomClass::Parabolic => "parabolic",
        IsomClass::Hyperbolic => "hyperbolic",
    }
}

// ---------------------------------------------------------------- construct

#[derive(Debug, Args)]
pub struct ConstructArgs {
    /// Intersection-data JSON file.
    #[arg(long)]
    pub data: PathBuf,
    /// Also write the report JSON here (paired with a manifest).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn cmd_construct(args: &ConstructArgs) -> Result<(), CliError> {
    let data = formats::load_data(&args.data)?;
    let rep = construction::build_representation(&data)?;
    let graph = construction::config_graph(&data);
    let dynkin = construction::dynkin_recognize(&graph);
    let free = construction::leininger_is_free(&data);
    let report = json!({
        "mu": rep.mu,
        "sqrt_mu": rep.sqrt_mu,
        "mu_is_four": rep.mu_is_four,
        "primitive": true,
        "pf_iterations": rep.pf.iterations,
        "pf_residual": rep.pf.residual,
        "leininger_free": free,
        "dynkin_type": dynkin.tag(),
        "config_graph_connected": graph.is_connected(),
        "K": bounds::k_constant(rep.mu).ok(),
    });
    print_report(&report, args.out.as_deref())?;
    if let Some(out) = &args.out {
        let params = json!({
            "data": args.data.display().to_string(),
            "out": out.display().to_string(),
        });
        manifest::emit("construct", params, None, &[&args.data], &[out])?;
    }
    Ok(())
}

// ----------------------------------------------------------------- classify

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Intersection-data JSON file.
    #[arg(long)]
    pub data: PathBuf,
    /// Word in the twist generators (letters a, b, A, B).
    #[arg(long)]
    pub word: String,
    /// Also write the report JSON here (paired with a manifest).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn cmd_classify(args: &ClassifyArgs) -> Result<(), CliError> {
    let data = formats::load_data(&args.data)?;
    let rep = construction::build_representation(&data)?;
    let word = Word::parse(&args.word)?;
    let free = construction::leininger_is_free(&data);
    let class = word.classify(rep.mu_is_four);
    let mat = rep.matrix_of(&word);
    let matrix_class = geometry::classify_matrix(&mat);
    let mut flagged = false;
    let log_lambda = if class == ElementClass::PseudoAnosov {
        match geometry::log_stretch_factor(&mat) {
            Ok(l) => Some(l),
            // The word-level classification is authoritative; the trace
            // margin over |tr| = 2 is merely below f64 resolution.
            Err(_) => {
                flagged = true;
                Some(0.0)
            }
        }
    } else {
        None
    };
    let bounds_report = if class == ElementClass::PseudoAnosov && !flagged && rep.mu >= 4.0 {
        let r = bounds::audit_element(&rep, &word, free)?;
        json!({
            "cyclic_norm": r.cyclic_norm,
            "log_lambda": r.log_lambda,
            "lower": r.lower,
            "upper": r.upper,
            "pass_lower": r.pass_lower,
            "pass_upper": r.pass_upper,
        })
    } else {
        Value::Null
    };
    let estimate = (matrix_class == IsomClass::Hyperbolic)
        .then(|| geometry::translation_length_estimate(&mat));
    let report = json!({
        "word": word.to_text(),
        "word_norm": word.norm(),
        "cyclic_norm": word.cyclic_norm(),
        "mu": rep.mu,
        "mu_is_four": rep.mu_is_four,
        "free_group": free,
        "class": class.tag(),
        "matrix_class": isom_tag(matrix_class),
        "log_lambda": log_lambda,
        "stretch_flagged_zero": flagged,
        "displacement": geometry::teich_displacement(&mat),
        "translation_length_estimate": estimate,
        "bounds": bounds_report,
    });
    print_report(&report, args.out.as_deref())?;
    if let Some(out) = &args.out {
        let params = json!({
            "data": args.data.display().to_string(),
            "word": args.word,
            "out": out.display().to_string(),
        });
        manifest::emit("classify", params, None, &[&args.data], &[out])?;
    }
    Ok(())
}

// --------------------------------------------------------------------- walk

#[derive(Debug, Args)]
pub struct WalkArgs {
    /// Intersection-data JSON file.
    #[arg(long)]
    pub data: PathBuf,
    /// Measure JSON file (atom words with probabilities).
    #[arg(long)]
    pub measure: PathBuf,
    /// Steps per trajectory.
    #[arg(long)]
    pub steps: u64,
    /// Number of trajectories.
    #[arg(long)]
    pub trajectories: u64,
    /// Master seed (trajectory t uses the derived stream (seed, t)).
    #[arg(long)]
    pub seed: u64,
    /// Record every STRIDE steps (the final step is always recorded).
    #[arg(long, default_value_t = 1)]
    pub stride: u64,
    /// Report the mapping-torus volume bound for this closed-surface genus.
    #[arg(long)]
    pub genus: Option<u64>,
    /// Output CSV path (paired with a manifest).
    #[arg(long)]
    pub out: PathBuf,
}

/// Maps trajectories over the rayon pool; per-trajectory streams make the
/// result identical to the sequential run.
fn run_parallel(
    rep: &ThurstonRep,
    measure: &ValidatedMeasure,
    config: &WalkConfig,
) -> Result<Vec<TrajectoryRun>, CliError> {
    config.validate()?;
    (0..config.trajectories)
        .into_par_iter()
        .map(|traj| walk::sample_trajectory(rep, measure, config, traj))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Into::into)
}

fn last_non_pa_json(runs: &[TrajectoryRun]) -> Value {
    let mut histogram: BTreeMap<u64, u64> = BTreeMap::new();
    let mut all_pa = 0u64;
    for row in walk::last_non_pa(runs) {
        match row.last {
            Some(n) => *histogram.entry(n).or_insert(0) += 1,
            None => all_pa += 1,
        }
    }
    json!({
        "all_pa_trajectories": all_pa,
        "histogram": histogram
            .into_iter()
            .map(|(last, count)| json!({ "last": last, "count": count }))
            .collect::<Vec<_>>(),
    })
}

fn aggregate_json(runs: &[TrajectoryRun], genus: Option<u64>) -> Result<Value, CliError> {
    let drift = if runs.len() >= 2 {
        Some(walk::drift_estimate(runs)?)
    } else {
        None
    };
    let fk = walk::fk_upper_bounds(runs)?;
    let spectral = match &drift {
        Some(d) => Some(walk::spectral_report(runs, d.value)?),
        None => None,
    };
    let volume = match genus {
        Some(g) => {
            let coefficient = bounds::volume_upper_bound(g, 1.0)?;
            json!({
                "genus": g,
                "coefficient": coefficient,
                "at_drift": drift.as_ref().map(|d| coefficient * d.value),
            })
        }
        None => Value::Null,
    };
    Ok(json!({
        "drift": drift.as_ref().map(|d| json!({
            "value": d.value,
            "std_error": d.std_error,
            "trajectories": d.trajectories,
            "steps": d.steps,
        })),
        "fk": fk
            .iter()
            .map(|r| json!({ "n": r.n, "mean": r.mean, "running_min": r.running_min }))
            .collect::<Vec<_>>(),
        "spectral": spectral.as_ref().map(|rows| {
            rows.iter()
                .map(|r| json!({
                    "n": r.n,
                    "fraction_pa": r.fraction_pa,
                    "mean_abs_dev": r.mean_abs_dev,
                }))
                .collect::<Vec<_>>()
        }),
        "last_non_pa": last_non_pa_json(runs),
        "volume_upper_bound": volume,
    }))
}

fn cmd_walk(args: &WalkArgs) -> Result<(), CliError> {
    // Validate the genus before the long computation.
    if let Some(g) = args.genus {
        bounds::volume_upper_bound(g, 1.0)?;
    }
    let data = formats::load_data(&args.data)?;
    let rep = construction::build_representation(&data)?;
    let spec = formats::load_measure(&args.measure)?;
    let measure = walk::validate_measure(&rep, &spec)?;
    for warning in measure.warnings() {
        eprintln!("warning: {warning}");
    }
    let config = WalkConfig {
        steps: args.steps,
        trajectories: args.trajectories,
        seed: args.seed,
        record_stride: args.stride,
    };
    let runs = run_parallel(&rep, &measure, &config)?;
    formats::write_walk_csv(&args.out, &runs)?;
    let mut report = aggregate_json(&runs, args.genus)?;
    report["mu"] = json!(rep.mu);
    report["mu_is_four"] = json!(rep.mu_is_four);
    report["warnings"] = json!(measure
        .warnings()
        .iter()
        .map(|w| w.to_string())
        .collect::<Vec<_>>());
    print_report(&report, None)?;
    let params = json!({
        "data": args.data.display().to_string(),
        "measure": args.measure.display().to_string(),
        "steps": args.steps,
        "trajectories": args.trajectories,
        "seed": args.seed,
        "stride": args.stride,
        "genus": args.genus,
        "out": args.out.display().to_string(),
    });
    manifest::emit(
        "walk",
        params,
        Some(args.seed),
        &[&args.data, &args.measure],
        &[&args.out],
    )?;
    Ok(())
}

// --------------------------------------------------------- drift / spectral

#[derive(Debug, Args)]
pub struct AggregateArgs {
    /// Existing walk CSV to aggregate (alternative to an inline run).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Intersection-data JSON file (inline run).
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Measure JSON file (inline run).
    #[arg(long)]
    pub measure: Option<PathBuf>,
    /// Steps per trajectory (inline run).
    #[arg(long)]
    pub steps: Option<u64>,
    /// Number of trajectories (inline run).
    #[arg(long)]
    pub trajectories: Option<u64>,
    /// Master seed (inline run).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Record stride (inline run).
    #[arg(long, default_value_t = 1)]
    pub stride: u64,
    /// Also write the report JSON here (paired with a manifest).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Obtains trajectory runs either from a walk CSV or from an inline run,
/// together with the input files involved.
fn aggregate_runs(args: &AggregateArgs) -> Result<(Vec<TrajectoryRun>, Vec<PathBuf>), CliError> {
    if let Some(input) = &args.input {
        return Ok((formats::read_walk_csv(input)?, vec![input.clone()]));
    }
    let (Some(data_path), Some(measure_path), Some(steps), Some(trajectories), Some(seed)) = (
        &args.data,
        &args.measure,
        args.steps,
        args.trajectories,
        args.seed,
    ) else {
        return Err(CliError::Input(
            "provide --input CSV, or all of --data --measure --steps --trajectories --seed \
             for an inline run"
                .to_string(),
        ));
    };
    let data = formats::load_data(data_path)?;
    let rep = construction::build_representation(&data)?;
    let spec = formats::load_measure(measure_path)?;
    let measure = walk::validate_measure(&rep, &spec)?;
    for warning in measure.warnings() {
        eprintln!("warning: {warning}");
    }
    let config = WalkConfig {
        steps,
        trajectories,
        seed,
        record_stride: args.stride,
    };
    let runs = run_parallel(&rep, &measure, &config)?;
    Ok((runs, vec![data_path.clone(), measure_path.clone()]))
}

fn aggregate_params(subcommand: &str, args: &AggregateArgs) -> Value {
    json!({
        "subcommand": subcommand,
        "input": args.input.as_ref().map(|p| p.display().to_string()),
        "data": args.data.as_ref().map(|p| p.display().to_string()),
        "measure": args.measure.as_ref().map(|p| p.display().to_string()),
        "steps": args.steps,
        "trajectories": args.trajectories,
        "seed": args.seed,
        "stride": args.stride,
        "out": args.out.as_ref().map(|p| p.display().to_string()),
    })
}

fn emit_aggregate(
    subcommand: &str,
    args: &AggregateArgs,
    inputs: &[PathBuf],
    report: &Value,
) -> Result<(), CliError> {
    print_report(report, args.out.as_deref())?;
    if let Some(out) = &args.out {
        let input_refs: Vec<&Path> = inputs.iter().map(PathBuf::as_path).collect();
        manifest::emit(
            subcommand,
            aggregate_params(subcommand, args),
            args.seed,
            &input_refs,
            &[out],
        )?;
    }
    Ok(())
}

fn cmd_drift(args: &AggregateArgs) -> Result<(), CliError> {
    let (runs, inputs) = aggregate_runs(args)?;
    let drift = walk::drift_estimate(&runs)?;
    let fk = walk::fk_upper_bounds(&runs)?;
    let report = json!({
        "drift": {
            "value": drift.value,
            "std_error": drift.std_error,
            "trajectories": drift.trajectories,
            "steps": drift.steps,
        },
        "fk": fk
            .iter()
            .map(|r| json!({ "n": r.n, "mean": r.mean, "running_min": r.running_min }))
            .collect::<Vec<_>>(),
    });
    emit_aggregate("drift", args, &inputs, &report)
}

fn cmd_spectral(args: &AggregateArgs) -> Result<(), CliError> {
    let (runs, inputs) = aggregate_runs(args)?;
    let drift = walk::drift_estimate(&runs)?;
    let rows = walk::spectral_report(&runs, drift.value)?;
    let report = json!({
        "drift": {
            "value": drift.value,
            "std_error": drift.std_error,
            "trajectories": drift.trajectories,
            "steps": drift.steps,
        },
        "spectral": rows
            .iter()
            .map(|r| json!({
                "n": r.n,
                "fraction_pa": r.fraction_pa,
                "mean_abs_dev": r.mean_abs_dev,
            }))
            .collect::<Vec<_>>(),
        "last_non_pa": last_non_pa_json(&runs),
    });
    emit_aggregate("spectral", args, &inputs, &report)
}

// -------------------------------------------------------------------- model

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Rows of the random intersection matrix.
    #[arg(long)]
    pub n: u32,
    /// Columns of the random intersection matrix.
    #[arg(long)]
    pub m: u32,
    /// Entries are uniform on {0,…,k−1}; multiplicities on {1,…,k}.
    #[arg(long)]
    pub k: u64,
    /// Monte Carlo trials (requires --seed).
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed for the Monte Carlo run.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write the report JSON here (paired with a manifest).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn cmd_model(args: &ModelArgs) -> Result<(), CliError> {
    let params = ModelParams::new(args.n, args.m, args.k)?;
    let mc = match (args.trials, args.seed) {
        (Some(trials), Some(seed)) => Some(params.mc_estimate(trials, seed)),
        (Some(_), None) => {
            return Err(CliError::Input(
                "--seed is required with --trials".to_string(),
            ))
        }
        _ => None,
    };
    let exact = params.brute_force_prob().ok();
    let report = json!({
        "n": args.n,
        "m": args.m,
        "k": args.k,
        "exact_bound": params.exact_bound(),
        "bad_event_prob_exact": params.bad_event_prob_exact(),
        "exact_prob": exact.map(|e| e.as_f64()),
        "exact_prob_fraction": exact.map(|e| {
            let (num, den) = e.reduced();
            format!("{num}/{den}")
        }),
        "mc_estimate": mc.map(|m| m.p_hat),
        "mc_std_error": mc.map(|m| m.std_error),
        "trials": mc.map(|m| m.trials),
        "seed": args.seed,
    });
    print_report(&report, args.out.as_deref())?;
    if let Some(out) = &args.out {
        let params_json = json!({
            "n": args.n,
            "m": args.m,
            "k": args.k,
            "trials": args.trials,
            "seed": args.seed,
            "out": out.display().to_string(),
        });
        manifest::emit("model", params_json, args.seed, &[], &[out])?;
    }
    Ok(())
}

// -------------------------------------------------------------------- salem

#[derive(Debug, Args)]
pub struct SalemArgs {
    /// Intersection-data JSON file.
    #[arg(long)]
    pub data: PathBuf,
    /// Pseudo-Anosov word whose stretch factor is to be matched.
    #[arg(long)]
    pub word: String,
    /// log λ_s of the candidate Salem (or other algebraic) number.
    #[arg(long, allow_negative_numbers = true)]
    pub salem_log: f64,
    /// Also write the report JSON here (paired with a manifest).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn cmd_salem(args: &SalemArgs) -> Result<(), CliError> {
    let data = formats::load_data(&args.data)?;
    let rep = construction::build_representation(&data)?;
    let word = Word::parse(&args.word)?;
    let free = construction::leininger_is_free(&data);
    let window = bounds::salem_power_window(&rep, &word, args.salem_log, free)?;
    let log_lambda = geometry::log_stretch_factor(&rep.matrix_of(&word)).ok();
    let report = json!({
        "word": word.to_text(),
        "cyclic_norm": word.cyclic_norm(),
        "free_group": free,
        "log_salem": args.salem_log,
        "k_constant": bounds::k_constant(rep.mu)?,
        "k_min": window.k_min,
        "k_max": window.k_max,
        "log_lambda": log_lambda,
        "estimated_k": log_lambda.map(|l| l / args.salem_log),
    });
    print_report(&report, args.out.as_deref())?;
    if let Some(out) = &args.out {
        let params = json!({
            "data": args.data.display().to_string(),
            "word": args.word,
            "salem_log": args.salem_log,
            "out": out.display().to_string(),
        });
        manifest::emit("salem", params, None, &[&args.data], &[out])?;
    }
    Ok(())
}

// -------------------------------------------------------------------- audit

#[derive(Debug, Args)]
pub struct AuditArgs {
    /// Intersection-data JSON file.
    #[arg(long)]
    pub data: PathBuf,
    /// Number of random words to sample.
    #[arg(long)]
    pub count: u64,
    /// Sampled letter counts are uniform on 1..=MAX_NORM.
    #[arg(long)]
    pub max_norm: u64,
    /// Master seed (word i uses the derived stream (seed, i)).
    #[arg(long)]
    pub seed: u64,
    /// Output CSV path (paired with a manifest).
    #[arg(long)]
    pub out: PathBuf,
}

/// Samples and audits the corpus, returning the per-word reports alongside
/// the summary (the CSV needs every row; the summary mirrors
/// [`bounds::audit_corpus`]).
fn audit_rows(
    rep: &ThurstonRep,
    args: &AuditArgs,
    free: bool,
) -> Result<(Vec<BoundReport>, CorpusSummary), CliError> {
    let mut reports = Vec::new();
    let mut summary = CorpusSummary {
        sampled: 0,
        pseudo_anosov: 0,
        audited: 0,
        skipped_near_parabolic: 0,
        violations: Vec::new(),
        ratio: None,
    };
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for i in 0..args.count {
        let word = bounds::corpus_word(args.seed, i, args.max_norm);
        summary.sampled += 1;
        if word.classify(rep.mu_is_four) != ElementClass::PseudoAnosov {
            continue;
        }
        summary.pseudo_anosov += 1;
        match bounds::audit_element(rep, &word, free) {
            Ok(report) => {
                summary.audited += 1;
                let ratio = report.log_lambda / report.cyclic_norm as f64;
                min = min.min(ratio);
                max = max.max(ratio);
                sum += ratio;
                if !report.passed() {
                    summary.violations.push(report.clone());
                }
                reports.push(report);
            }
            Err(bounds::BoundsError::MatrixNotHyperbolic) => {
                summary.skipped_near_parabolic += 1;
            }
            Err(other) => return Err(other.into()),
        }
    }
    if summary.audited > 0 {
        summary.ratio = Some(RatioStats {
            min,
            mean: sum / summary.audited as f64,
            max,
        });
    }
    Ok((reports, summary))
}

fn cmd_audit(args: &AuditArgs) -> Result<(), CliError> {
    if args.count == 0 || args.max_norm == 0 {
        return Err(CliError::Input(
            "--count and --max-norm must be positive".to_string(),
        ));
    }
    let data = formats::load_data(&args.data)?;
    let rep = construction::build_representation(&data)?;
    let free = construction::leininger_is_free(&data);
    let (reports, summary) = audit_rows(&rep, args, free)?;
    formats::write_audit_csv(&args.out, &reports)?;
    let report = json!({
        "mu": rep.mu,
        "free_group": free,
        "sampled": summary.sampled,
        "pseudo_anosov": summary.pseudo_anosov,
        "audited": summary.audited,
        "skipped_near_parabolic": summary.skipped_near_parabolic,
        "violations": summary.violations.len(),
        "ratio": summary.ratio.map(|r| json!({
            "min": r.min,
            "mean": r.mean,
            "max": r.max,
        })),
    });
    print_report(&report, None)?;
    let params = json!({
        "data": args.data.display().to_string(),
        "count": args.count,
        "max_norm": args.max_norm,
        "seed": args.seed,
        "out": args.out.display().to_string(),
    });
    manifest::emit("audit", params, Some(args.seed), &[&args.data], &[&args.out])?;
    Ok(())
}
