//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use skewjs_core::{DivergenceKind, KlMean, SkewProfile, SolverSettings};

use crate::commands::{self, CentroidMode, CentroidOptions, ClusterOptions, DivOptions, HistOptions};
use crate::error::{CliError, Result};
use crate::report::RunReport;

#[derive(Debug, Parser)]
#[command(
    name = "skewjs",
    version,
    about = "Vector-skew Jensen-Shannon divergences, centroids and clustering of histograms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Divergence between two histograms, in nats.
    Div(DivArgs),
    /// Centroid of n histograms.
    Centroid(CentroidArgs),
    /// Grey-level histogram of a PGM image.
    Hist(HistArgs),
    /// k-means++ seeding and Lloyd clustering of histograms.
    Cluster(ClusterArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindName {
    Kl,
    #[value(name = "kl+")]
    KlPlus,
    Jeffreys,
    Js,
    SkewK,
    SkewJsAsym,
    SkewJs,
    Vskew,
    KlAb,
    BiVskew,
    KlMean,
    KlArithmetic,
    KlHarmonic,
    KlMin,
    KlMax,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeanName {
    Arithmetic,
    Harmonic,
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaseName {
    Kl,
    #[value(name = "kl+")]
    KlPlus,
    Jeffreys,
    Js,
}

/// Parameters shared by every divergence kind.
#[derive(Debug, Clone, Args)]
pub struct KindArgs {
    #[arg(long, value_enum, default_value = "js")]
    pub kind: KindName,
    /// Skew (scalar kinds) or skew vector (vskew, bi-vskew), comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub alpha: Vec<f64>,
    /// Second skew (kl-ab) or right skew vector (bi-vskew).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub beta: Vec<f64>,
    /// Weights of the skew vector; uniform for vskew, ones for bi-vskew when absent.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub w: Vec<f64>,
    /// Mean for kl-mean.
    #[arg(long, value_enum, default_value = "arithmetic")]
    pub mean: MeanName,
    /// Base divergence for bi-vskew.
    #[arg(long, value_enum, default_value = "kl")]
    pub base: BaseName,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub energy_tol: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub param_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub grad_tol: f64,
}

impl SolverArgs {
    fn settings(&self) -> Result<SolverSettings> {
        for (flag, v) in [
            ("--energy-tol", self.energy_tol),
            ("--param-tol", self.param_tol),
            ("--grad-tol", self.grad_tol),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(CliError::Flag {
                    flag,
                    message: format!("{v} is not a non-negative number"),
                });
            }
        }
        Ok(SolverSettings {
            max_iters: self.max_iters,
            energy_tol: self.energy_tol,
            param_tol: self.param_tol,
            grad_tol: self.grad_tol,
            ..SolverSettings::default()
        })
    }
}

#[derive(Debug, Args)]
pub struct DivArgs {
    pub p: PathBuf,
    pub q: PathBuf,
    #[command(flatten)]
    pub kind: KindArgs,
    /// Print every kind at its default parameters.
    #[arg(long)]
    pub all: bool,
    /// Divide by log 2.
    #[arg(long)]
    pub bits: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeName {
    Exact,
    Positive,
    Jeffreys,
}

#[derive(Debug, Args)]
pub struct CentroidArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: ModeName,
    /// Skew vector of the profile; the JS profile (0,1) when absent.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub alpha: Vec<f64>,
    /// Profile weights; uniform when absent.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub w: Vec<f64>,
    /// Barycenter weights, one per input; uniform when absent.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub omega: Vec<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Centroid histogram CSV; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Also compute the Jeffreys centroid for the report and chart.
    #[arg(long)]
    pub compare_jeffreys: bool,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HistArgs {
    pub image: PathBuf,
    /// Divide counts by the pixel count.
    #[arg(long)]
    pub normalize: bool,
    /// Count maxval - v instead of v.
    #[arg(long)]
    pub negative: bool,
    /// Histogram CSV; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub k: usize,
    #[command(flatten)]
    pub kind: KindArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub max_rounds: usize,
    /// Stop after seeding; any divergence kind is accepted.
    #[arg(long)]
    pub seeding_only: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Assignment CSV with `index,cluster` rows; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

impl KindArgs {
    pub fn build(&self) -> Result<DivergenceKind> {
        let kind = match self.kind {
            KindName::Kl => DivergenceKind::Kl,
            KindName::KlPlus => DivergenceKind::KlPlus,
            KindName::Jeffreys => DivergenceKind::Jeffreys,
            KindName::Js => DivergenceKind::Js,
            KindName::SkewK => DivergenceKind::SkewK(self.scalar_alpha()?),
            KindName::SkewJsAsym => DivergenceKind::SkewJsAsym(self.scalar_alpha()?),
            KindName::SkewJs => DivergenceKind::SkewJsSym(self.scalar_alpha()?),
            KindName::Vskew => DivergenceKind::VectorSkewJs(profile(&self.alpha, &self.w)?),
            KindName::KlAb => DivergenceKind::KlAlphaBeta {
                alpha: single("--alpha", &self.alpha, 0.0)?,
                beta: single("--beta", &self.beta, 0.5)?,
            },
            KindName::BiVskew => {
                let alpha = or_default(&self.alpha, &[0.0, 1.0]);
                let beta = or_default(&self.beta, &[1.0, 0.0]);
                let weights = if self.w.is_empty() {
                    vec![1.0; alpha.len()]
                } else {
                    self.w.clone()
                };
                DivergenceKind::BiVectorSkew {
                    base: Box::new(match self.base {
                        BaseName::Kl => DivergenceKind::Kl,
                        BaseName::KlPlus => DivergenceKind::KlPlus,
                        BaseName::Jeffreys => DivergenceKind::Jeffreys,
                        BaseName::Js => DivergenceKind::Js,
                    }),
                    alpha,
                    beta,
                    weights,
                }
            }
            KindName::KlMean => DivergenceKind::MeanSymmetrizedKl(match self.mean {
                MeanName::Arithmetic => KlMean::Arithmetic,
                MeanName::Harmonic => KlMean::Harmonic,
                MeanName::Min => KlMean::Min,
                MeanName::Max => KlMean::Max,
            }),
            KindName::KlArithmetic => DivergenceKind::MeanSymmetrizedKl(KlMean::Arithmetic),
            KindName::KlHarmonic => DivergenceKind::MeanSymmetrizedKl(KlMean::Harmonic),
            KindName::KlMin => DivergenceKind::MeanSymmetrizedKl(KlMean::Min),
            KindName::KlMax => DivergenceKind::MeanSymmetrizedKl(KlMean::Max),
        };
        kind.validate()?;
        Ok(kind)
    }

    fn scalar_alpha(&self) -> Result<f64> {
        single("--alpha", &self.alpha, 0.5)
    }
}

fn single(flag: &'static str, values: &[f64], default: f64) -> Result<f64> {
    match values {
        [] => Ok(default),
        [v] => Ok(*v),
        _ => Err(CliError::Flag {
            flag,
            message: format!("expected one value, got {}", values.len()),
        }),
    }
}

fn or_default(values: &[f64], default: &[f64]) -> Vec<f64> {
    if values.is_empty() {
        default.to_vec()
    } else {
        values.to_vec()
    }
}

/// Skew profile from flags; weights within `1e-9` of summing to one are
/// renormalized so that rounded decimals are accepted.
pub fn profile(alpha: &[f64], w: &[f64]) -> Result<SkewProfile> {
    if alpha.is_empty() && w.is_empty() {
        return Ok(SkewProfile::jensen_shannon());
    }
    if alpha.is_empty() {
        return Err(CliError::Flag {
            flag: "--w",
            message: "profile weights need --alpha".into(),
        });
    }
    if w.is_empty() {
        return Ok(SkewProfile::uniform(alpha.to_vec())?);
    }
    Ok(SkewProfile::new(alpha.to_vec(), renormalized(w))?)
}

fn renormalized(w: &[f64]) -> Vec<f64> {
    let total: f64 = w.iter().sum();
    if (total - 1.0).abs() <= 1e-9 {
        w.iter().map(|x| x / total).collect()
    } else {
        w.to_vec()
    }
}

/// Runs one command line; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "skewjs: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    let (report, path) = match command {
        Command::Div(a) => {
            let opts = DivOptions {
                inputs: [a.p, a.q],
                kind: a.kind.build()?,
                all: a.all,
                bits: a.bits,
            };
            (commands::cmd_div(&opts, out)?, a.report)
        }
        Command::Centroid(a) => {
            let opts = CentroidOptions {
                inputs: a.inputs,
                mode: match a.mode {
                    ModeName::Exact => CentroidMode::Exact,
                    ModeName::Positive => CentroidMode::Positive,
                    ModeName::Jeffreys => CentroidMode::Jeffreys,
                },
                profile: profile(&a.alpha, &a.w)?,
                omega: (!a.omega.is_empty()).then(|| renormalized(&a.omega)),
                settings: a.solver.settings()?,
                out: a.out,
                svg: a.svg,
                compare_jeffreys: a.compare_jeffreys,
            };
            (commands::cmd_centroid(&opts, out)?, a.report)
        }
        Command::Hist(a) => {
            let opts = HistOptions {
                image: a.image,
                normalize: a.normalize,
                negative: a.negative,
                out: a.out,
            };
            (commands::cmd_hist(&opts, out)?, a.report)
        }
        Command::Cluster(a) => {
            let opts = ClusterOptions {
                inputs: a.inputs,
                k: a.k,
                kind: a.kind.build()?,
                seed: a.seed,
                max_rounds: a.max_rounds,
                seeding_only: a.seeding_only,
                settings: a.solver.settings()?,
                out: a.out,
            };
            (commands::cmd_cluster(&opts, out)?, a.report)
        }
    };
    if let Some(path) = path {
        finish(report, &path)?;
    }
    Ok(())
}

fn finish(mut report: RunReport, path: &std::path::Path) -> Result<()> {
    report.outputs.push(path.display().to_string());
    report.write(path)
}
