use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dbsvol_core::{
    cross_validate_with_threshold, fit, generate_cohort, select_subset, EvalReport, FitConfig,
    SearchMode, SolverMode, SynthConfig, DEFAULT_THRESHOLD,
};

use crate::cohort_file::{
    read_cohort, read_table, table_to_cohort, write_cohort, write_predictions,
};
use crate::error::{CliError, Result};
use crate::model_file::{load_model, save_model};
use crate::report::{render_eval, render_subset};

/// Estimate sample volume from measured analyte amounts.
#[derive(Debug, Parser)]
#[command(name = "dbsvol", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model on a cohort CSV with a volume column.
    Fit(FitArgs),
    /// Append predicted volumes to a cohort CSV.
    Predict(PredictArgs),
    /// Score a model against known volumes, or cross-validate its settings.
    Evaluate(EvaluateArgs),
    /// Search for the analyte subset with the best cross-validated correlation.
    Select(SelectArgs),
    /// Write a synthetic cohort from the 17-analyte fixture panel.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SolverArg {
    Auto,
    Direct,
    MinimumNorm,
}

#[derive(Debug, Args)]
pub struct FitFlags {
    /// Ridge penalty added to the normal matrix diagonal.
    #[arg(long, default_value_t = 0.0)]
    pub ridge: f64,
    /// Relative singular-value cutoff for rank decisions.
    #[arg(long, default_value_t = dbsvol_core::fitting::DEFAULT_RANK_TOLERANCE)]
    pub rank_tolerance: f64,
    #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
    pub solver: SolverArg,
}

impl FitFlags {
    fn config(&self) -> FitConfig {
        FitConfig {
            ridge: self.ridge,
            rank_tolerance: self.rank_tolerance,
            solver_mode: match self.solver {
                SolverArg::Auto => SolverMode::Auto,
                SolverArg::Direct => SolverMode::Direct,
                SolverArg::MinimumNorm => SolverMode::MinimumNorm,
            },
        }
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Restrict to these analyte columns (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub analytes: Option<Vec<String>>,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    #[command(flatten)]
    pub fit: FitFlags,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: f64,
    /// Refit the model's panel and settings under k-fold cross-validation.
    #[arg(long)]
    pub folds: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub max_size: usize,
    #[arg(long, default_value_t = 5)]
    pub folds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Forward selection instead of exhaustive search.
    #[arg(long)]
    pub greedy: bool,
    /// Candidate analyte columns (comma separated); all by default.
    #[arg(long, value_delimiter = ',')]
    pub analytes: Option<Vec<String>>,
    #[command(flatten)]
    pub fit: FitFlags,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value_t = 2637)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.02)]
    pub noise_cv: f64,
    /// Smallest volume, microliters.
    #[arg(long, default_value_t = 20.0)]
    pub volume_min: f64,
    /// Largest volume, microliters.
    #[arg(long, default_value_t = 100.0)]
    pub volume_max: f64,
    /// Subset of the fixture panel to emit (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub analytes: Option<Vec<String>>,
    /// Analytes that scale with volume; the others are volume-free.
    #[arg(long, value_delimiter = ',')]
    pub signal: Option<Vec<String>>,
}

fn create(path: &PathBuf) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Fit(a) => cmd_fit(&a, out),
        Command::Predict(a) => cmd_predict(&a, out),
        Command::Evaluate(a) => cmd_evaluate(&a, out),
        Command::Select(a) => cmd_select(&a, out),
        Command::Synth(a) => cmd_synth(&a, out),
    }
}

pub fn cmd_fit(args: &FitArgs, out: &mut dyn Write) -> Result<()> {
    let cohort = read_cohort(&args.input, args.analytes.as_deref(), true)?;
    let model = fit(&cohort, &args.fit.config())?;
    save_model(&model, &args.output)?;
    let predicted = model.predict_cohort(&cohort)?;
    let report = EvalReport::from_predictions(
        &predicted,
        cohort.volumes().unwrap_or_default(),
        args.threshold,
    )?;
    emit(
        out,
        &format!("analytes = {}\n", model.panel().analytes().join(",")),
    )?;
    emit(
        out,
        &format!(
            "solver = {}\nrank = {}\n",
            model.meta().solver.as_str(),
            model.meta().rank
        ),
    )?;
    emit(out, &render_eval("in-sample", &report))
}

pub fn cmd_predict(args: &PredictArgs, out: &mut dyn Write) -> Result<()> {
    let model = load_model(&args.model)?;
    let table = read_table(&args.input)?;
    if table
        .column(crate::cohort_file::PREDICTION_COLUMN)
        .is_some()
    {
        return Err(CliError::Format {
            path: args.input.clone(),
            message: format!(
                "input already has a {:?} column",
                crate::cohort_file::PREDICTION_COLUMN
            ),
        });
    }
    let cohort = table_to_cohort(&table, Some(model.panel().analytes()), false, &args.input)?;
    let predictions = model.predict_cohort(&cohort)?;
    match &args.output {
        Some(path) => write_predictions(&table, &predictions, create(path)?),
        None => write_predictions(&table, &predictions, out),
    }
}

pub fn cmd_evaluate(args: &EvaluateArgs, out: &mut dyn Write) -> Result<()> {
    let model = load_model(&args.model)?;
    let cohort = read_cohort(&args.input, Some(model.panel().analytes()), true)?;
    let truth = cohort.volumes().unwrap_or_default();
    let text = match args.folds {
        None => {
            let predicted = model.predict_cohort(&cohort)?;
            render_eval(
                "model",
                &EvalReport::from_predictions(&predicted, truth, args.threshold)?,
            )
        }
        Some(folds) => {
            let meta = model.meta();
            let config = FitConfig {
                ridge: meta.ridge,
                rank_tolerance: meta.rank_tolerance,
                solver_mode: SolverMode::Auto,
            };
            let report =
                cross_validate_with_threshold(&cohort, &config, folds, args.seed, args.threshold)?;
            render_eval(
                &format!("{folds}-fold cross-validation, seed {}", args.seed),
                &report,
            )
        }
    };
    emit(out, &text)
}

pub fn cmd_select(args: &SelectArgs, out: &mut dyn Write) -> Result<()> {
    let cohort = read_cohort(&args.input, args.analytes.as_deref(), true)?;
    let mode = if args.greedy {
        SearchMode::Greedy
    } else {
        SearchMode::Exhaustive
    };
    let result = select_subset(
        &cohort,
        &args.fit.config(),
        args.max_size,
        args.folds,
        args.seed,
        mode,
    )?;
    emit(out, &render_subset(&result))
}

pub fn cmd_synth(args: &SynthArgs, out: &mut dyn Write) -> Result<()> {
    let mut config = SynthConfig::default_panel(args.n, args.seed);
    config.noise_cv = args.noise_cv;
    config.volume_min = args.volume_min;
    config.volume_max = args.volume_max;
    if let Some(codes) = &args.analytes {
        config = config.project(codes)?;
    }
    if let Some(codes) = &args.signal {
        config = config.with_signal(codes)?;
    }
    let cohort = generate_cohort(&config)?;
    match &args.output {
        Some(path) => write_cohort(&cohort, create(path)?),
        None => write_cohort(&cohort, out),
    }
}
