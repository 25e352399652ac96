use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use emofractal::audio_io::{scan_corpus, Corpus, EmotionLabel};
use emofractal::classify::{
    cross_validate, evaluate as evaluate_model, extract_features, svm_predict, svm_train,
    ConfusionMatrix, CrossValidation, FeatureVector, SvmModel, MODEL_VERSION,
};
use emofractal::config::{AnalysisConfig, MethodSelection};
use emofractal::mfdfa::mfdfa_analyze;
use emofractal::spectrum::{MultifractalResult, Surface};
use emofractal::synth::{binomial_cascade, fgn, shuffle, white_noise, CascadeSpec};
use emofractal::wtmm::wtmm_analyze;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::files::{self, SCHEMA_VERSION};
use crate::{Convention, SynthArgs, SynthKind};

pub fn synth(args: &SynthArgs, seed: u64) -> Result<(), CliError> {
    let out = args
        .out
        .as_deref()
        .ok_or_else(|| CliError::Usage("synth needs --out <file>".into()))?;
    let x = match args.kind {
        SynthKind::Cascade { a, levels } => binomial_cascade(CascadeSpec::new(a, levels)?),
        SynthKind::Noise { n } => white_noise(n, seed)?,
        SynthKind::Fgn { n, hurst } => fgn(n, hurst, seed)?,
    };
    let x = if args.shuffle { shuffle(&x, seed) } else { x };
    files::write_series(out, x.samples(), args.rate)
}

#[derive(Serialize)]
struct FitReport<'a> {
    schema_version: u32,
    input: String,
    method: &'static str,
    fit: &'a emofractal::spectrum::SpectrumFit,
    /// Area under the low-Holder branch of the spectrum.
    low_fluct_area: Option<f64>,
    n_points: usize,
    n_pruned: usize,
    low_confidence_q: &'a [f64],
    tau: &'a emofractal::spectrum::ScalingExponents,
    hurst: Option<&'a emofractal::mfdfa::HurstSpectrum>,
    config: &'a AnalysisConfig,
}

fn spectrum_csv(r: &MultifractalResult) -> String {
    let mut s = format!(
        "# emofractal spectrum v{SCHEMA_VERSION} method={}\nq,tau,alpha,f_alpha,pruned\n",
        r.method.as_str()
    );
    for p in &r.spectrum.points {
        let _ = writeln!(s, "{},{},{},{},{}", p.q, p.tau, p.alpha, p.f, p.pruned);
    }
    s
}

/// Long-format scaling data behind the exponents: `F_q(s)` for MFDFA,
/// `Z(q, s)` for WTMM.
fn scaling_csv(r: &MultifractalResult) -> String {
    let (qs, scales, values, name) = match &r.surface {
        Surface::Fluctuation(f) => (f.qs.values(), f.scales.scales(), &f.values, "F"),
        Surface::Partition(z) => (z.qs.values(), z.scales.scales(), &z.values, "Z"),
    };
    let mut s = format!(
        "# emofractal scaling v{SCHEMA_VERSION} method={}\nq,scale,{name}\n",
        r.method.as_str()
    );
    for (qi, q) in qs.iter().enumerate() {
        for (si, sc) in scales.iter().enumerate() {
            let _ = writeln!(s, "{q},{sc},{}", values[qi][si]);
        }
    }
    s
}

pub fn analyze(input: &Path, dir: &Path, cfg: &AnalysisConfig) -> Result<(), CliError> {
    let x = files::read_series(input)?;
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "series".into());
    let mut results = Vec::new();
    if matches!(cfg.method, MethodSelection::Mfdfa | MethodSelection::Both) {
        results.push(mfdfa_analyze(&x, &cfg.mfdfa)?);
    }
    if matches!(cfg.method, MethodSelection::Wtmm | MethodSelection::Both) {
        results.push(wtmm_analyze(&x, &cfg.wtmm)?);
    }
    for r in &results {
        let m = r.method.as_str();
        let report = FitReport {
            schema_version: SCHEMA_VERSION,
            input: input.display().to_string(),
            method: m,
            fit: &r.fit,
            low_fluct_area: emofractal::spectrum::low_fluct_area(&r.spectrum).ok(),
            n_points: r.spectrum.points.len(),
            n_pruned: r.spectrum.n_pruned(),
            low_confidence_q: &r.low_confidence_q,
            tau: &r.tau,
            hurst: r.hurst.as_ref(),
            config: cfg,
        };
        files::write_bytes(
            &dir.join(format!("{stem}.{m}.spectrum.csv")),
            spectrum_csv(r).as_bytes(),
        )?;
        files::write_bytes(
            &dir.join(format!("{stem}.{m}.scaling.csv")),
            scaling_csv(r).as_bytes(),
        )?;
        files::write_json(&dir.join(format!("{stem}.{m}.fit.json")), &report)?;
        println!(
            "{m}: alpha0 {:.4}  alpha1 {:.4}  alpha2 {:.4}  width {:.4}",
            r.fit.alpha0, r.fit.alpha1, r.fit.alpha2, r.fit.width
        );
    }
    Ok(())
}

pub fn features(
    root: &Path,
    convention: Convention,
    out: &Path,
    workers: usize,
    cfg: &AnalysisConfig,
) -> Result<(), CliError> {
    let corpus = match convention {
        Convention::Berlin => Corpus::Berlin,
        Convention::Tess => Corpus::Tess,
    };
    let entries = scan_corpus(root, corpus)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let results: Vec<(PathBuf, Result<FeatureVector, CliError>)> = pool.install(|| {
        entries
            .par_iter()
            .map(|e| {
                let rel = e.path.strip_prefix(root).unwrap_or(&e.path).to_path_buf();
                let fv = files::read_series(&e.path).and_then(|x| {
                    Ok(extract_features(&x, cfg)?
                        .labeled(rel.to_string_lossy().replace('\\', "/"), Some(e.label)))
                });
                (rel, fv)
            })
            .collect()
    });

    let mut rows = Vec::new();
    let mut skipped = 0usize;
    for (rel, r) in results {
        match r {
            Ok(fv) => rows.push(fv),
            Err(e) => {
                skipped += 1;
                eprintln!("warning: skipping {}: {e}", rel.display());
            }
        }
    }
    rows.sort_by(|a, b| a.path.cmp(&b.path));
    files::write_bytes(out, &files::features_csv(&rows)?)?;
    eprintln!(
        "{} clips found, {} feature rows written to {}, {skipped} skipped",
        entries.len(),
        rows.len(),
        out.display()
    );
    Ok(())
}

fn labeled(rows: Vec<FeatureVector>, path: &Path) -> Result<Vec<FeatureVector>, CliError> {
    if let Some(fv) = rows.iter().find(|fv| fv.label.is_none()) {
        return Err(CliError::Input(format!(
            "{}: row {:?} has no label",
            path.display(),
            fv.path
        )));
    }
    Ok(rows)
}

pub fn train(features: &Path, out: &Path, c: f64) -> Result<(), CliError> {
    let rows = labeled(files::read_features(features)?, features)?;
    let model = svm_train(&rows, c)?;
    files::write_json(out, &model)?;
    let cm = evaluate_model(&model, &rows)?;
    println!(
        "trained on {} vectors, classes {:?}, training accuracy {:.4}",
        rows.len(),
        model.classes.iter().map(|c| c.as_str()).collect::<Vec<_>>(),
        cm.accuracy()
    );
    Ok(())
}

fn load_model(path: &Path) -> Result<SvmModel, CliError> {
    let model: SvmModel = files::read_json(path)?;
    if model.version != MODEL_VERSION {
        return Err(CliError::Input(format!(
            "{}: model version {} is not supported (expected {MODEL_VERSION})",
            path.display(),
            model.version
        )));
    }
    Ok(model)
}

pub fn predict(
    model: &Path,
    inputs: &[PathBuf],
    out: Option<&Path>,
    cfg: &AnalysisConfig,
) -> Result<(), CliError> {
    let model = load_model(model)?;
    let mut rows = Vec::new();
    for input in inputs {
        let is_features = input
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
            && files::is_features_file(input);
        if is_features {
            rows.extend(files::read_features(input)?);
        } else {
            let x = files::read_series(input)?;
            rows.push(extract_features(&x, cfg)?.labeled(input.display().to_string(), None));
        }
    }
    let mut text = format!("# emofractal predictions v{SCHEMA_VERSION}\npath,label,predicted\n");
    for fv in &rows {
        let p = svm_predict(&model, fv)?;
        let truth = fv.label.map(|l| l.to_string()).unwrap_or_default();
        let _ = writeln!(text, "{},{truth},{p}", csv_field(&fv.path));
    }
    match out {
        Some(path) => files::write_bytes(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub struct EvalOptions {
    pub runs: usize,
    pub test_per_class: usize,
    pub per_corpus: bool,
    pub seed: u64,
    pub c: f64,
}

#[derive(Serialize)]
struct ConfusionReport {
    labels: [EmotionLabel; 3],
    counts: [[u64; 3]; 3],
    accuracy: f64,
}

impl From<&ConfusionMatrix> for ConfusionReport {
    fn from(cm: &ConfusionMatrix) -> Self {
        Self {
            labels: EmotionLabel::ALL,
            counts: cm.counts,
            accuracy: cm.accuracy(),
        }
    }
}

#[derive(Serialize)]
struct CvReport {
    group: String,
    n_vectors: usize,
    mean_accuracy: Option<f64>,
    std_accuracy: Option<f64>,
    runs: Vec<ConfusionReport>,
    error: Option<String>,
}

impl CvReport {
    fn new(group: &str, n: usize, cv: Result<CrossValidation, emofractal::Error>) -> Self {
        match cv {
            Ok(cv) => Self {
                group: group.into(),
                n_vectors: n,
                mean_accuracy: Some(cv.mean_accuracy),
                std_accuracy: Some(cv.std_accuracy),
                runs: cv.runs.iter().map(ConfusionReport::from).collect(),
                error: None,
            },
            Err(e) => Self {
                group: group.into(),
                n_vectors: n,
                mean_accuracy: None,
                std_accuracy: None,
                runs: Vec::new(),
                error: Some(e.to_string()),
            },
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
enum EvalReport {
    Model {
        schema_version: u32,
        confusion: ConfusionReport,
    },
    CrossValidation {
        schema_version: u32,
        runs: usize,
        test_per_class: usize,
        seed: u64,
        #[serde(rename = "C")]
        c: f64,
        results: Vec<CvReport>,
    },
}

pub fn evaluate(
    features: &Path,
    model: Option<&Path>,
    opts: &EvalOptions,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let rows = labeled(files::read_features(features)?, features)?;
    let (report, table) = match model {
        Some(path) => {
            let model = load_model(path)?;
            let cm = evaluate_model(&model, &rows)?;
            let table = format!("{cm}\n");
            let report = EvalReport::Model {
                schema_version: SCHEMA_VERSION,
                confusion: (&cm).into(),
            };
            (report, table)
        }
        None => {
            let cv = |data: &[FeatureVector]| {
                cross_validate(data, opts.runs, opts.test_per_class, opts.seed, opts.c)
            };
            let pooled = cv(&rows)?;
            let mut results = vec![CvReport::new("pooled", rows.len(), Ok(pooled))];
            if opts.per_corpus {
                for corpus in [Corpus::Berlin, Corpus::Tess] {
                    let group: Vec<FeatureVector> = rows
                        .iter()
                        .filter(|fv| Corpus::detect(&fv.path) == Some(corpus))
                        .cloned()
                        .collect();
                    if !group.is_empty() {
                        let name = format!("{corpus:?}").to_lowercase();
                        results.push(CvReport::new(&name, group.len(), cv(&group)));
                    }
                }
            }
            let mut table = String::new();
            for r in &results {
                match (r.mean_accuracy, r.std_accuracy, &r.error) {
                    (Some(m), Some(s), _) => {
                        let _ = writeln!(
                            table,
                            "{:<8} n={:<5} accuracy {:.2}% +- {:.3} over {} runs",
                            r.group,
                            r.n_vectors,
                            100.0 * m,
                            100.0 * s,
                            r.runs.len()
                        );
                    }
                    (_, _, e) => {
                        let _ = writeln!(
                            table,
                            "{:<8} n={:<5} {}",
                            r.group,
                            r.n_vectors,
                            e.as_deref().unwrap_or("")
                        );
                    }
                }
            }
            let report = EvalReport::CrossValidation {
                schema_version: SCHEMA_VERSION,
                runs: opts.runs,
                test_per_class: opts.test_per_class,
                seed: opts.seed,
                c: opts.c,
                results,
            };
            (report, table)
        }
    };
    print!("{table}");
    if let Some(path) = out {
        files::write_json(path, &report)?;
        files::write_bytes(&path.with_extension("txt"), table.as_bytes())?;
    }
    Ok(())
}
