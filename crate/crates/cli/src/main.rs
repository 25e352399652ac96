mod commands;
mod error;
mod files;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use emofractal::config::{AnalysisConfig, CwtEngine, MethodSelection};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "emofractal",
    version,
    about = "Multifractal speech-emotion analysis"
)]
struct Cli {
    /// Seed for every random draw (synthesis, cross-validation splits).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Config file: `key = value` lines or a JSON AnalysisConfig.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one config key, e.g. `--set mfdfa.order=2` (repeatable).
    #[arg(long = "set", global = true, value_parser = settings::parse_pair)]
    overrides: Vec<(String, String)>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic test series.
    Synth(SynthArgs),
    /// Estimate singularity spectra of one WAV or CSV series.
    Analyze {
        input: PathBuf,
        #[command(flatten)]
        flags: AnalysisFlags,
        /// Output directory (default: current directory).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Extract (S, alpha1, alpha2) for every in-scope clip of a corpus.
    Features {
        root: PathBuf,
        #[arg(long, value_enum)]
        convention: Convention,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (0 = one per logical CPU).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[command(flatten)]
        flags: AnalysisFlags,
    },
    /// Train the one-vs-one linear SVM on a features CSV.
    Train {
        features: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Soft-margin regularization C.
        #[arg(long = "c")]
        c: Option<f64>,
    },
    /// Classify rows of a features CSV, or WAV/CSV series files.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Write predictions here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        flags: AnalysisFlags,
    },
    /// Confusion matrix against a model, or repeated random-split validation.
    Evaluate {
        features: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long, default_value_t = 12)]
        test_per_class: usize,
        #[arg(long = "c")]
        c: Option<f64>,
        /// Also validate each corpus (language) separately.
        #[arg(long)]
        per_corpus: bool,
        /// JSON report path; the text table goes next to it as `.txt`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[command(subcommand)]
    kind: SynthKind,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Sample rate written to WAV output.
    #[arg(long, global = true, default_value_t = 16000)]
    rate: u32,
    /// Randomly permute the generated samples.
    #[arg(long, global = true)]
    shuffle: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum SynthKind {
    /// Deterministic binomial multiplicative cascade.
    Cascade {
        #[arg(long, default_value_t = 0.75)]
        a: f64,
        #[arg(long, default_value_t = 16)]
        levels: u32,
    },
    /// Gaussian white noise.
    Noise {
        #[arg(long, default_value_t = 65536)]
        n: usize,
    },
    /// Fractional Gaussian noise (length must be a power of two).
    Fgn {
        #[arg(long, default_value_t = 65536)]
        n: usize,
        #[arg(long, default_value_t = 0.7)]
        hurst: f64,
    },
}

#[derive(Args, Debug, Default)]
pub struct AnalysisFlags {
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// MFDFA detrending polynomial order (0-3).
    #[arg(long)]
    detrend_order: Option<usize>,
    /// WTMM Gaussian-derivative order m (1-4).
    #[arg(long)]
    wavelet_order: Option<u32>,
    #[arg(long, value_enum)]
    engine: Option<Engine>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Method {
    Mfdfa,
    Wtmm,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Engine {
    Auto,
    Direct,
    Fft,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum Convention {
    Berlin,
    Tess,
}

impl AnalysisFlags {
    fn apply(&self, cfg: &mut AnalysisConfig) -> Result<(), CliError> {
        if let Some(m) = self.method {
            cfg.method = match m {
                Method::Mfdfa => MethodSelection::Mfdfa,
                Method::Wtmm => MethodSelection::Wtmm,
                Method::Both => MethodSelection::Both,
            };
        }
        if let Some(o) = self.detrend_order {
            cfg.mfdfa.order = o;
        }
        if let Some(m) = self.wavelet_order {
            cfg.wtmm.wavelet_order = m;
        }
        if let Some(e) = self.engine {
            cfg.wtmm.engine = match e {
                Engine::Auto => CwtEngine::Auto,
                Engine::Direct => CwtEngine::Direct,
                Engine::Fft => CwtEngine::Fft,
            };
        }
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))
    }
}

fn base_config(cli: &Cli) -> Result<AnalysisConfig, CliError> {
    let mut cfg = AnalysisConfig::default();
    if let Some(path) = &cli.config {
        settings::load_file(&mut cfg, path)?;
    }
    settings::apply_pairs(&mut cfg, &cli.overrides)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = base_config(&cli)?;
    match cli.command {
        Command::Synth(args) => commands::synth(&args, cfg.seed),
        Command::Analyze {
            input,
            flags,
            out_dir,
        } => {
            flags.apply(&mut cfg)?;
            let dir = out_dir
                .or_else(|| cfg.output_dir.clone().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("."));
            commands::analyze(&input, &dir, &cfg)
        }
        Command::Features {
            root,
            convention,
            out,
            workers,
            flags,
        } => {
            flags.apply(&mut cfg)?;
            commands::features(&root, convention, &out, workers, &cfg)
        }
        Command::Train { features, out, c } => {
            if let Some(c) = c {
                cfg.svm_c = c;
            }
            commands::train(&features, &out, cfg.svm_c)
        }
        Command::Predict {
            model,
            inputs,
            out,
            flags,
        } => {
            flags.apply(&mut cfg)?;
            commands::predict(&model, &inputs, out.as_deref(), &cfg)
        }
        Command::Evaluate {
            features,
            model,
            runs,
            test_per_class,
            c,
            per_corpus,
            out,
        } => {
            if let Some(c) = c {
                cfg.svm_c = c;
            }
            let opts = commands::EvalOptions {
                runs,
                test_per_class,
                per_corpus,
                seed: cfg.seed,
                c: cfg.svm_c,
            };
            commands::evaluate(&features, model.as_deref(), &opts, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
