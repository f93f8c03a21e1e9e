//! The four subcommands, independent of argument parsing.

use std::io::Write;
use std::path::{Path, PathBuf};

use skewjs_core::centroid::{
    jeffreys_centroid_fixed_point, jeffreys_objective, js_centroid, separable_positive_centroid, vector_skew_centroid,
};
use skewjs_core::cluster::lloyd_cluster;
use skewjs_core::divergence::vector_skew_js;
use skewjs_core::{
    CentroidProblem, ClusteringConfig, DiscreteDensity, DivergenceKind, KlMean, PositiveDensity, SkewProfile,
    SolverSettings,
};

use crate::error::{CliError, Result};
use crate::histogram::{self, HistogramFile};
use crate::pgm::PgmImage;
use crate::report::{fmt_num, CentroidSummary, ClusterSummary, HistogramSummary, Num, RunReport};
use crate::svg::{overlay_chart, Series};

#[derive(Debug, Clone)]
pub struct DivOptions {
    pub inputs: [PathBuf; 2],
    pub kind: DivergenceKind,
    /// Evaluate [`catalog`] instead of `kind`.
    pub all: bool,
    pub bits: bool,
}

/// Every divergence kind at its default parameters.
pub fn catalog() -> Vec<DivergenceKind> {
    vec![
        DivergenceKind::Kl,
        DivergenceKind::KlPlus,
        DivergenceKind::Jeffreys,
        DivergenceKind::Js,
        DivergenceKind::SkewK(0.5),
        DivergenceKind::SkewJsAsym(0.5),
        DivergenceKind::SkewJsSym(0.5),
        DivergenceKind::VectorSkewJs(SkewProfile::jensen_shannon()),
        DivergenceKind::KlAlphaBeta { alpha: 0.0, beta: 0.5 },
        DivergenceKind::BiVectorSkew {
            base: Box::new(DivergenceKind::Kl),
            alpha: vec![0.0, 1.0],
            beta: vec![1.0, 0.0],
            weights: vec![1.0, 1.0],
        },
        DivergenceKind::MeanSymmetrizedKl(KlMean::Arithmetic),
        DivergenceKind::MeanSymmetrizedKl(KlMean::Harmonic),
        DivergenceKind::MeanSymmetrizedKl(KlMean::Min),
        DivergenceKind::MeanSymmetrizedKl(KlMean::Max),
    ]
}

pub fn cmd_div(opts: &DivOptions, out: &mut dyn Write) -> Result<RunReport> {
    let p = HistogramFile::read(&opts.inputs[0])?.density()?;
    let q = HistogramFile::read(&opts.inputs[1])?.density()?;
    if p.len() != q.len() {
        return Err(CliError::Semantic(format!(
            "dimension mismatch: {} has {} bins, {} has {}",
            opts.inputs[0].display(),
            p.len(),
            opts.inputs[1].display(),
            q.len()
        )));
    }
    let kinds = if opts.all { catalog() } else { vec![opts.kind.clone()] };
    let scale = if opts.bits { std::f64::consts::LN_2 } else { 1.0 };
    let mut report = RunReport::new("div", &opts.inputs);
    report.unit = Some(if opts.bits { "bits" } else { "nats" }.into());
    let mut text = String::new();
    for kind in &kinds {
        let value = kind.evaluate(&p, &q)? / scale;
        report.values.insert(kind.name().into(), Num(value));
        if opts.all {
            text.push_str(&format!("{} {}\n", kind.name(), fmt_num(value)));
        } else {
            text.push_str(&format!("{}\n", fmt_num(value)));
        }
    }
    emit(out, &text)?;
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CentroidMode {
    /// CCCP on the probability simplex.
    Exact,
    /// Per-bin relaxation on positive measures, then normalized.
    Positive,
    /// Positive Jeffreys centroid, normalized.
    Jeffreys,
}

impl CentroidMode {
    pub fn name(self) -> &'static str {
        match self {
            CentroidMode::Exact => "exact",
            CentroidMode::Positive => "positive",
            CentroidMode::Jeffreys => "jeffreys",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CentroidOptions {
    pub inputs: Vec<PathBuf>,
    pub mode: CentroidMode,
    pub profile: SkewProfile,
    /// Barycenter weights; uniform when absent.
    pub omega: Option<Vec<f64>>,
    pub settings: SolverSettings,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
    /// Also compute the Jeffreys centroid, report its JS objective and draw it.
    pub compare_jeffreys: bool,
}

pub fn cmd_centroid(opts: &CentroidOptions, out: &mut dyn Write) -> Result<RunReport> {
    if opts.inputs.is_empty() {
        return Err(CliError::Semantic("centroid needs at least one input".into()));
    }
    let densities = read_densities(&opts.inputs)?;
    let n = densities.len();
    let omega = match &opts.omega {
        Some(w) if w.len() != n => {
            return Err(CliError::Semantic(format!("{} weights for {n} inputs", w.len())));
        }
        Some(w) => w.clone(),
        None => vec![1.0 / n as f64; n],
    };
    opts.profile.interior_alpha_bar()?;
    let positives: Vec<PositiveDensity> = densities.iter().map(DiscreteDensity::to_positive).collect();
    let js_objective = |c: &DiscreteDensity| -> Result<f64> {
        let mut total = 0.0;
        for (p, w) in densities.iter().zip(&omega) {
            total += w * vector_skew_js(p, c, &opts.profile)?;
        }
        Ok(total)
    };

    let mut summary = CentroidSummary {
        mode: opts.mode.name().into(),
        bins: densities[0].len(),
        iterations: 0,
        converged: true,
        projected: false,
        initial_energy: None,
        final_energy: None,
        energy_trace_len: 0,
        max_energy_increase: None,
        stationarity_gap: None,
        kkt_gap: None,
        fixed_point_residual: None,
        js_objective: Num(0.0),
        jeffreys_objective: None,
        jeffreys_js_objective: None,
    };
    let centroid = match opts.mode {
        CentroidMode::Exact => {
            let problem = CentroidProblem::from_densities(&densities)?
                .with_weights(omega.clone())?
                .with_profile(opts.profile.clone())?
                .with_settings(opts.settings);
            let result = if opts.profile.is_jensen_shannon() {
                js_centroid(&problem)?
            } else {
                vector_skew_centroid(&problem)?
            };
            let trace = &result.energy_trace;
            summary.iterations = result.iterations;
            summary.converged = result.converged;
            summary.projected = result.projected;
            summary.initial_energy = trace.first().copied().map(Num);
            summary.final_energy = trace.last().copied().map(Num);
            summary.energy_trace_len = trace.len();
            summary.max_energy_increase = Some(Num(trace.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)));
            summary.stationarity_gap = Some(Num(result.stationarity_gap));
            summary.kkt_gap = Some(Num(result.kkt_gap));
            summary.fixed_point_residual = Some(Num(result.fixed_point_residual));
            result.density
        }
        CentroidMode::Positive => {
            let c = separable_positive_centroid(&positives, &omega, &opts.profile, &opts.settings)?;
            summary.iterations = c.iterations;
            summary.converged = c.converged;
            c.density
        }
        CentroidMode::Jeffreys => {
            let c = jeffreys_centroid_fixed_point(&positives, &omega, &opts.settings)?;
            summary.iterations = c.iterations;
            summary.converged = c.converged;
            summary.jeffreys_objective = Some(Num(jeffreys_objective(&positives, &omega, &c.positive)?));
            c.density
        }
    };
    summary.js_objective = Num(js_objective(&centroid)?);
    let jeffreys = if opts.compare_jeffreys {
        let c = jeffreys_centroid_fixed_point(&positives, &omega, &opts.settings)?;
        summary.jeffreys_js_objective = Some(Num(js_objective(&c.density)?));
        Some(c.density)
    } else {
        None
    };

    let mut report = RunReport::new("centroid", &opts.inputs);
    let mut text = format!(
        "mode {}\niterations {}\nconverged {}\njs_objective {}\n",
        summary.mode,
        summary.iterations,
        summary.converged,
        fmt_num(summary.js_objective.0)
    );
    if let Some(Num(e)) = summary.final_energy {
        text.push_str(&format!("final_energy {}\n", fmt_num(e)));
    }
    if let Some(Num(g)) = summary.stationarity_gap {
        text.push_str(&format!("stationarity_gap {}\n", fmt_num(g)));
    }
    if let Some(Num(j)) = summary.jeffreys_js_objective {
        text.push_str(&format!("jeffreys_js_objective {}\n", fmt_num(j)));
    }
    match &opts.out {
        Some(path) => {
            histogram::write_csv(path, centroid.bins())?;
            report.outputs.push(path.display().to_string());
        }
        None => text.push_str(&histogram::to_csv(centroid.bins())),
    }
    if let Some(path) = &opts.svg {
        let labels: Vec<String> = opts.inputs.iter().map(|p| file_label(p)).collect();
        let inputs: Vec<Series> = labels
            .iter()
            .zip(&densities)
            .map(|(label, d)| Series { label, bins: d.bins() })
            .collect();
        let main_label = format!("{} centroid", opts.mode.name());
        let mut cents = vec![Series {
            label: &main_label,
            bins: centroid.bins(),
        }];
        if let Some(j) = &jeffreys {
            cents.push(Series {
                label: "jeffreys centroid",
                bins: j.bins(),
            });
        }
        let chart = overlay_chart(&format!("{} centroid", opts.mode.name()), &inputs, &cents);
        std::fs::write(path, chart).map_err(|e| CliError::write(path, e))?;
        report.outputs.push(path.display().to_string());
    }
    report.centroid = Some(summary);
    emit(out, &text)?;
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct HistOptions {
    pub image: PathBuf,
    pub normalize: bool,
    pub negative: bool,
    pub out: Option<PathBuf>,
}

pub fn cmd_hist(opts: &HistOptions, out: &mut dyn Write) -> Result<RunReport> {
    let image = PgmImage::read(&opts.image)?;
    let mut bins = image.histogram(opts.negative);
    if opts.normalize {
        let total = image.pixels.len() as f64;
        bins.iter_mut().for_each(|b| *b /= total);
    }
    let mut report = RunReport::new("hist", &[&opts.image]);
    report.histogram = Some(HistogramSummary {
        bins: bins.len(),
        pixels: image.pixels.len(),
        maxval: image.maxval,
        normalized: opts.normalize,
        negative: opts.negative,
    });
    match &opts.out {
        Some(path) => {
            histogram::write_csv(path, &bins)?;
            report.outputs.push(path.display().to_string());
        }
        None => emit(out, &histogram::to_csv(&bins))?,
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct ClusterOptions {
    pub inputs: Vec<PathBuf>,
    pub k: usize,
    pub kind: DivergenceKind,
    pub seed: u64,
    pub max_rounds: usize,
    /// Assign to the k-means++ seeds without centroid updates.
    pub seeding_only: bool,
    pub settings: SolverSettings,
    pub out: Option<PathBuf>,
}

pub fn cmd_cluster(opts: &ClusterOptions, out: &mut dyn Write) -> Result<RunReport> {
    let densities = read_densities(&opts.inputs)?;
    if opts.k > densities.len() {
        return Err(CliError::Semantic(format!(
            "k = {} exceeds the {} inputs",
            opts.k,
            densities.len()
        )));
    }
    let config = ClusteringConfig {
        k: opts.k,
        divergence: opts.kind.clone(),
        seed: opts.seed,
        max_rounds: opts.max_rounds,
        use_centroid_updates: !opts.seeding_only,
        settings: opts.settings,
    };
    let clustering = lloyd_cluster(&densities, &config)?;
    let rows: String = clustering
        .assignment
        .iter()
        .enumerate()
        .map(|(i, c)| format!("{i},{c}\n"))
        .collect();
    let mut report = RunReport::new("cluster", &opts.inputs);
    let objective = clustering.objective_trace.last().copied().unwrap_or(0.0);
    let mut text = format!(
        "rounds {}\nconverged {}\nobjective {}\n",
        clustering.rounds,
        clustering.converged,
        fmt_num(objective)
    );
    match &opts.out {
        Some(path) => {
            std::fs::write(path, &rows).map_err(|e| CliError::write(path, e))?;
            report.outputs.push(path.display().to_string());
        }
        None => text.push_str(&rows),
    }
    report.cluster = Some(ClusterSummary {
        k: opts.k,
        divergence: opts.kind.name().into(),
        seed: opts.seed,
        seeds: clustering.seeds,
        assignment: clustering.assignment,
        rounds: clustering.rounds,
        converged: clustering.converged,
        objective_trace: clustering.objective_trace.into_iter().map(Num).collect(),
    });
    emit(out, &text)?;
    Ok(report)
}

fn read_densities(paths: &[PathBuf]) -> Result<Vec<DiscreteDensity>> {
    let densities = paths
        .iter()
        .map(|p| HistogramFile::read(p)?.density())
        .collect::<Result<Vec<_>>>()?;
    if let Some(first) = densities.first() {
        for (p, d) in paths.iter().zip(&densities) {
            if d.len() != first.len() {
                return Err(CliError::Semantic(format!(
                    "dimension mismatch: {} has {} bins, {} has {}",
                    paths[0].display(),
                    first.len(),
                    p.display(),
                    d.len()
                )));
            }
        }
    }
    Ok(densities)
}

fn file_label(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn emit(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::write("<stdout>", e))
}
