mod io;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use szne::circuits::ParamAssignment;
use szne::experiments::{
    data_efficiency, hybrid_study, metrology_sweep, residual_report, residual_stats, run_vqa_study, EstimatorKind,
    ExperimentConfig, KDE_GRID_POINTS,
};
use szne::mitigation::{
    build_training_datasets, run_conventional_zne, run_hybrid, run_szne, train_surrogates, validate_and_select,
    MeasurementLedger, MitigationRun,
};
use szne::rng::{self, tag};
use szne::sim::Device;

#[derive(Parser)]
#[command(name = "szne", version, about = "Surrogate-enabled zero-noise extrapolation experiments")]
struct Cli {
    /// TOML experiment configuration; built-in defaults when omitted.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(short, long, global = true, env = "SZNE_OUT_DIR")]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, env = "SZNE_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build labelled training datasets for every noise level.
    Collect,
    /// Fit one surrogate per level from collected datasets.
    Train {
        #[arg(long, default_value = "datasets.jsonl")]
        data: PathBuf,
    },
    /// Conventional ZNE on random inputs.
    Zne,
    /// Surrogate-only ZNE on the same inputs.
    Szne {
        #[arg(long, default_value = "surrogates.jsonl")]
        surrogates: PathBuf,
    },
    /// Hybrid S-ZNE. Without `--surrogates` runs the full shadow-kernel study.
    Hybrid {
        #[arg(long)]
        surrogates: Option<PathBuf>,
    },
    /// Variational ground-state search driven by the chosen estimator.
    Vqa {
        #[arg(long)]
        estimator: Option<EstimatorKind>,
    },
    /// GHZ phase sweep comparing unmitigated, ZNE and S-ZNE.
    Metrology {
        /// Also run the training-set-size study.
        #[arg(long)]
        data_efficiency: bool,
    },
    /// Residual statistics and KDE curve for a results CSV.
    Report {
        #[arg(long)]
        runs: PathBuf,
    },
}

struct Ctx {
    cfg: ExperimentConfig,
    out: PathBuf,
}

impl Ctx {
    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    /// Resolves a user path: as given if it exists, else inside the output directory.
    fn input(&self, p: &Path) -> PathBuf {
        if p.exists() || p.is_absolute() {
            p.to_path_buf()
        } else {
            self.out.join(p)
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg: ExperimentConfig = match &cli.config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    Ok(cfg.with_master_seed())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let cfg = load_config(&cli)?;
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output_dir.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("szne-out"));
    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let ctx = Ctx { cfg, out };
    match &cli.command {
        Command::Collect => collect(&ctx),
        Command::Train { data } => train(&ctx, data),
        Command::Zne => zne(&ctx),
        Command::Szne { surrogates } => szne(&ctx, surrogates),
        Command::Hybrid { surrogates } => hybrid(&ctx, surrogates.as_deref()),
        Command::Vqa { estimator } => vqa(&ctx, *estimator),
        Command::Metrology { data_efficiency } => metrology(&ctx, *data_efficiency),
        Command::Report { runs } => report(&ctx, runs),
    }
}

fn collect(ctx: &Ctx) -> Result<()> {
    let p = &ctx.cfg.pipeline;
    let device = p.device()?;
    let ledger = MeasurementLedger::new();
    let ds = build_training_datasets(
        &device,
        &p.levels(),
        p.train_samples,
        p.train_budget,
        p.label_mode(),
        &p.sampler(),
        p.seed,
        &ledger,
    )?;
    io::write_datasets(&ctx.path("datasets.jsonl"), &ds)?;
    io::write_json(&ctx.path("ledger_collect.json"), &ledger.summary())?;
    log::info!("collected {} records per level, {} shots", p.train_samples, ledger.summary().total);
    Ok(())
}

fn train(ctx: &Ctx, data: &Path) -> Result<()> {
    let p = &ctx.cfg.pipeline;
    let device = p.device()?;
    let ds = io::read_datasets(&ctx.input(data))?;
    let surrogates = train_surrogates(&ds, &p.surrogate_spec(&device)?, p.seed)?;
    io::write_surrogates(&ctx.path("surrogates.jsonl"), &surrogates)?;
    log::info!("trained {} surrogates", surrogates.len());
    Ok(())
}

fn inference_inputs(ctx: &Ctx, device: &Device) -> Vec<ParamAssignment> {
    let p = &ctx.cfg.pipeline;
    let mut r = rng::stream(p.seed, &[tag::TEST]);
    (0..p.inputs).map(|_| p.sampler().sample(device.dimension(), &mut r)).collect()
}

fn attach_ideal(device: &Device, run: MitigationRun) -> MitigationRun {
    match device.ideal(&ParamAssignment::new(run.x.clone())) {
        Ok(v) => run.with_ideal(v),
        Err(_) => run,
    }
}

fn finish_runs(ctx: &Ctx, name: &str, runs: &[MitigationRun], ledger: &MeasurementLedger) -> Result<()> {
    io::write_runs(&ctx.path(&format!("{name}.csv")), runs)?;
    io::write_json(&ctx.path(&format!("ledger_{name}.json")), &ledger.summary())?;
    if let Ok(rep) = residual_report(runs) {
        log::info!("{name}: {} runs, MSE {:.3e}", runs.len(), rep.mse);
    }
    Ok(())
}

fn zne(ctx: &Ctx) -> Result<()> {
    let p = &ctx.cfg.pipeline;
    let device = p.device()?;
    let scheme = p.scheme()?;
    let ledger = MeasurementLedger::new();
    let runs = inference_inputs(ctx, &device)
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let mut r = rng::stream(p.seed, &[tag::INFERENCE, i as u64]);
            Ok(attach_ideal(&device, run_conventional_zne(&device, x, &scheme, p.shots, &ledger, &mut r)?))
        })
        .collect::<Result<Vec<_>>>()?;
    finish_runs(ctx, "zne", &runs, &ledger)
}

fn szne(ctx: &Ctx, surrogates: &Path) -> Result<()> {
    let p = &ctx.cfg.pipeline;
    let device = p.device()?;
    let scheme = p.scheme()?;
    let models = io::read_surrogates(&ctx.input(surrogates))?;
    let ledger = MeasurementLedger::new();
    let runs = inference_inputs(ctx, &device)
        .par_iter()
        .map(|x| Ok(attach_ideal(&device, run_szne(&models, x, &scheme, &ledger)?)))
        .collect::<Result<Vec<_>>>()?;
    finish_runs(ctx, "szne", &runs, &ledger)
}

fn hybrid(ctx: &Ctx, surrogates: Option<&Path>) -> Result<()> {
    let Some(path) = surrogates else {
        let r = hybrid_study(&ctx.cfg.hybrid)?;
        io::write_runs(&ctx.path("hybrid.csv"), &r.hybrid)?;
        io::write_runs(&ctx.path("hybrid_conventional.csv"), &r.conventional)?;
        io::write_json(
            &ctx.path("hybrid_summary.json"),
            &serde_json::json!({
                "selection": r.selection,
                "mse_hybrid": r.mse_hybrid,
                "mse_conventional": r.mse_conventional,
                "hybrid_ledger": r.hybrid_ledger,
                "conventional_ledger": r.conventional_ledger,
            }),
        )?;
        log::info!(
            "selected {:?}; MSE hybrid {:.3e} vs conventional {:.3e}",
            r.selection.selected,
            r.mse_hybrid,
            r.mse_conventional
        );
        return Ok(());
    };
    let p = &ctx.cfg.pipeline;
    let device = p.device()?;
    let scheme = p.scheme()?;
    let models = io::read_surrogates(&ctx.input(path))?;
    let ledger = MeasurementLedger::new();
    let mut vr = rng::stream(p.seed, &[tag::VALIDATION]);
    let validation: Vec<ParamAssignment> = (0..p.validation_samples)
        .map(|_| p.sampler().sample(device.dimension(), &mut vr))
        .collect();
    let sel = validate_and_select(
        &models,
        &device,
        &validation,
        &scheme.levels,
        p.validation_shots,
        p.threshold,
        p.seed,
        &ledger,
    )?;
    io::write_json(&ctx.path("selection.json"), &sel)?;
    let runs = inference_inputs(ctx, &device)
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let mut r = rng::stream(p.seed, &[tag::INFERENCE, i as u64]);
            let run = run_hybrid(&models, &sel.selected, &device, x, &scheme, p.shots, &ledger, &mut r)?;
            Ok(attach_ideal(&device, run))
        })
        .collect::<Result<Vec<_>>>()?;
    finish_runs(ctx, "hybrid", &runs, &ledger)
}

fn vqa(ctx: &Ctx, estimator: Option<EstimatorKind>) -> Result<()> {
    let mut cfg = ctx.cfg.vqa.clone();
    if let Some(e) = estimator {
        cfg.estimator = e;
    }
    let r = run_vqa_study(&cfg)?;
    let dim = r.trajectory.final_x.len();
    let mut header = vec!["iteration".to_string()];
    header.extend((0..dim).map(|k| format!("x{k}")));
    header.push("energy".into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    io::write_table(
        &ctx.path("vqa_trajectory.csv"),
        &header,
        r.trajectory.steps.iter().map(|s| {
            let mut row = vec![s.iteration.to_string()];
            row.extend(s.x.iter().map(|v| v.to_string()));
            row.push(s.energy.to_string());
            row
        }),
    )?;
    io::write_json(
        &ctx.path("vqa_summary.json"),
        &serde_json::json!({
            "estimator": r.estimator,
            "final_energy": r.trajectory.final_energy,
            "final_x": r.trajectory.final_x,
            "final_ideal": r.final_ideal,
            "exact": r.exact,
            "ledger": r.ledger,
        }),
    )?;
    log::info!(
        "{:?}: final energy {:.4} (exact {:?}), {} shots",
        r.estimator,
        r.trajectory.final_energy,
        r.exact,
        r.ledger.total
    );
    Ok(())
}

fn metrology(ctx: &Ctx, with_efficiency: bool) -> Result<()> {
    let r = metrology_sweep(&ctx.cfg.metrology)?;
    io::write_table(
        &ctx.path("metrology.csv"),
        &["phase", "ideal", "unmitigated", "zne", "szne"],
        r.unmitigated.iter().zip(&r.zne).zip(&r.szne).map(|((u, z), s)| {
            vec![
                u.x[0].to_string(),
                u.ideal.unwrap_or(f64::NAN).to_string(),
                u.estimate.to_string(),
                z.estimate.to_string(),
                s.estimate.to_string(),
            ]
        }),
    )?;
    io::write_json(
        &ctx.path("metrology_summary.json"),
        &serde_json::json!({
            "unmitigated": r.unmitigated_summary,
            "zne": r.zne_summary,
            "szne": r.szne_summary,
        }),
    )?;
    log::info!(
        "MSE unmitigated {:.3e}, ZNE {:.3e}, S-ZNE {:.3e}",
        r.unmitigated_summary.mse,
        r.zne_summary.mse,
        r.szne_summary.mse
    );
    if with_efficiency {
        let rows = data_efficiency(&ctx.cfg.data_efficiency)?;
        io::write_table(
            &ctx.path("data_efficiency.csv"),
            &["samples", "level", "mse"],
            rows.iter()
                .map(|r| vec![r.samples.to_string(), r.level.to_string(), r.mse.to_string()]),
        )?;
    }
    Ok(())
}

fn report(ctx: &Ctx, runs: &Path) -> Result<()> {
    let residuals = io::read_residuals(&ctx.input(runs))?;
    let rep = residual_stats(&residuals, KDE_GRID_POINTS)?;
    let stem = runs.file_stem().and_then(|s| s.to_str()).unwrap_or("runs");
    io::write_table(
        &ctx.path(&format!("{stem}_kde.csv")),
        &["residual", "density"],
        rep.grid
            .iter()
            .zip(&rep.density)
            .map(|(g, d)| vec![g.to_string(), d.to_string()]),
    )?;
    io::write_json(
        &ctx.path(&format!("{stem}_report.json")),
        &serde_json::json!({
            "count": rep.count,
            "mse": rep.mse,
            "mean": rep.mean,
            "bandwidth": rep.bandwidth,
            "peak": rep.peak(),
        }),
    )?;
    log::info!("{stem}: MSE {:.3e}, mean {:.3e}, KDE peak {:.3e}", rep.mse, rep.mean, rep.peak());
    Ok(())
}
