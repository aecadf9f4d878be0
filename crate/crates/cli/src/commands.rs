use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::{json, Value};

use ots_core::dependence::{
    mixed_linear_correlations_with, mixed_quantile_correlations_with, total_mixed_c_cor_with,
    total_mixed_c_qcor_with, DEFAULT_QUANTILE_NODES,
};
use ots_core::inference::{bootstrap_standard_error, DEFAULT_BOOTSTRAP_RESAMPLES};
use ots_core::mining::kmeans::{DEFAULT_MAX_ITERATIONS, DEFAULT_RESTARTS};
use ots_core::mining::kmeans_cluster_with;
use ots_core::mining::outliers::{outlier_report, DEFAULT_RANGE_COEF};
use ots_core::simulate::models::simulate;
use ots_core::{
    adjusted_rand_index, ci_marginal_feature, classical_mds, cumulative_correlations, holm_adjust,
    kappa_diagnostics, make_benchmark_dataset, pairwise_distance_matrix, pam_cluster,
    test_marginal_feature, BenchmarkSpec, DeltaMethod, DistanceKind, DistanceMatrix, DistanceScale,
    FeatureMatrix, GeneratorSpec, IndexConvention, LaggedProbabilityProfile, MarginalFeature,
    MarginalFeatureSet, OrdinalSeries, OtsDataset, ProbabilityProfile, SeriesMetric, StateDistance,
    StateSpace,
};

use crate::error::{CliError, Result};
use crate::io::{
    export_feature_matrix, load_manifest, load_numeric, load_series, long_csv, matrix_csv,
    write_dataset, SeriesFormat,
};
use crate::plot::{BoxPlot, KappaPlot, Plot, ScatterPlot, SeriesPlot};

#[derive(Parser, Debug)]
#[command(
    name = "ots",
    version,
    about = "Ordinal time series analysis from the command line"
)]
pub struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Marginal and lagged joint probabilities.
    Probs {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long)]
        lag: Option<usize>,
    },
    /// The six marginal features.
    Features {
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        distance: DistanceArgs,
        /// Divide by d(s0, sn).
        #[arg(long)]
        normalized: bool,
    },
    /// Ordinal Cohen's kappa at lags 1..=max-lag with critical values.
    Kappa {
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        distance: DistanceArgs,
        #[arg(long, default_value_t = 10)]
        max_lag: usize,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Also write an SVG and its data CSV.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Cumulative correlations and their total.
    Tcc {
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long, default_value_t = 1)]
        lag: usize,
    },
    /// Correlations between the cumulative indicators and a numeric covariate.
    MixedCor {
        #[command(flatten)]
        series: SeriesArgs,
        /// Numeric series, one value per line.
        #[arg(long)]
        covariate: PathBuf,
        #[arg(long, default_value_t = 1)]
        lag: usize,
        #[arg(long, value_enum, default_value = "linear")]
        kind: MixedKind,
        /// Quantile level for per-state quantile correlations.
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_QUANTILE_NODES)]
        nodes: usize,
        #[arg(long, value_enum, default_value = "definitional")]
        convention: Convention,
    },
    /// Asymptotic test of a marginal feature.
    Test {
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        distance: DistanceArgs,
        #[command(flatten)]
        method: MethodArgs,
        /// disp, asym or skew.
        #[arg(long)]
        feature: MarginalFeature,
        #[arg(long)]
        h0: f64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Asymptotic confidence interval of a marginal feature.
    Ci {
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        distance: DistanceArgs,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long)]
        feature: MarginalFeature,
        #[arg(long, default_value_t = 0.95)]
        level: f64,
    },
    /// Holm step-down adjustment of p-values.
    Holm {
        /// Comma separated p-values.
        #[arg(long = "p", alias = "p-values", value_delimiter = ',', required = true)]
        p_values: Vec<f64>,
    },
    /// Pairwise dissimilarities between the series of a dataset, as CSV.
    Dist {
        #[command(flatten)]
        dissim: DissimilarityArgs,
    },
    /// Classical multidimensional scaling.
    Mds {
        #[command(flatten)]
        dissim: DissimilarityArgs,
        #[arg(long, default_value_t = 2)]
        dims: usize,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Partitioning around medoids.
    Pam {
        #[command(flatten)]
        dissim: DissimilarityArgs,
        #[arg(short, long)]
        k: usize,
    },
    /// k-means on a feature matrix.
    Kmeans {
        #[command(flatten)]
        dataset: DatasetArgs,
        #[command(flatten)]
        features: FeatureArgs,
        #[arg(short, long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
    },
    /// Adjusted Rand index of two labelings.
    Ari {
        #[arg(long, value_delimiter = ',', required = true)]
        a: Vec<i64>,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<i64>,
    },
    /// Outlier scores, ranking and boxplot fence.
    Outliers {
        #[command(flatten)]
        dissim: DissimilarityArgs,
        #[arg(long, default_value_t = DEFAULT_RANGE_COEF)]
        range_coef: f64,
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Generate one series or a labelled benchmark collection.
    Simulate {
        /// Shipped benchmark 1, 2 or 3.
        #[arg(long, conflicts_with_all = ["config", "generator"])]
        benchmark: Option<usize>,
        /// Benchmark description as JSON.
        #[arg(long, conflicts_with = "generator")]
        config: Option<PathBuf>,
        /// Single generator description as JSON.
        #[arg(long)]
        generator: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write manifest.json and series.csv here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Feature matrix of a dataset as CSV.
    ExportFeatures {
        #[command(flatten)]
        dataset: DatasetArgs,
        #[command(flatten)]
        features: FeatureArgs,
    },
    /// Draw one series against its state levels (SVG plus data CSV).
    Plot {
        #[command(flatten)]
        series: SeriesArgs,
    },
}

#[derive(Args, Debug)]
pub struct StateArgs {
    /// Number of states, labelled 0..k-1.
    #[arg(long)]
    pub states: Option<usize>,
    /// Comma separated state labels in ascending order.
    #[arg(long, value_delimiter = ',', conflicts_with = "states")]
    pub state_labels: Option<Vec<String>>,
}

impl StateArgs {
    fn space(&self) -> Result<Option<Arc<StateSpace>>> {
        let space = match (&self.states, &self.state_labels) {
            (Some(k), _) => StateSpace::numbered(*k)?,
            (None, Some(labels)) => StateSpace::new(labels.iter().cloned())?,
            (None, None) => return Ok(None),
        };
        Ok(Some(Arc::new(space)))
    }
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    /// Series file.
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "column")]
    pub format: SeriesFormat,
    /// Which series of a long file to use, by position starting at 1.
    #[arg(long)]
    pub series_index: Option<usize>,
    #[command(flatten)]
    pub states: StateArgs,
}

impl SeriesArgs {
    fn load(&self) -> Result<OrdinalSeries> {
        let states = self
            .states
            .space()?
            .ok_or_else(|| CliError::Invalid("give --states or --state-labels".into()))?;
        let mut all = load_series(&self.input, self.format, &states)?;
        match self.series_index {
            Some(i) if i >= 1 && i <= all.len() => Ok(all.swap_remove(i - 1)),
            Some(i) => Err(CliError::Invalid(format!(
                "series index {i} outside 1..={}",
                all.len()
            ))),
            None if all.len() == 1 => Ok(all.remove(0)),
            None => Err(CliError::Invalid(format!(
                "file holds {} series; pick one with --series-index",
                all.len()
            ))),
        }
    }
}

#[derive(Args, Debug)]
pub struct DistanceArgs {
    /// block, hamming, euclidean or custom.
    #[arg(long)]
    pub distance: Option<DistanceKind>,
    /// Square CSV matrix for the custom distance.
    #[arg(long)]
    pub distance_matrix: Option<PathBuf>,
}

impl DistanceArgs {
    fn build(&self, states: &StateSpace, fallback: Option<DistanceKind>) -> Result<StateDistance> {
        let custom = self
            .distance_matrix
            .as_deref()
            .map(read_square_matrix)
            .transpose()?;
        let kind = match (self.distance, &custom) {
            (Some(k), _) => k,
            (None, Some(_)) => DistanceKind::Custom,
            (None, None) => fallback.unwrap_or(DistanceKind::Block),
        };
        Ok(StateDistance::build(kind, states, custom)?)
    }
}

#[derive(Args, Debug)]
pub struct MethodArgs {
    /// Long-run covariance for dependent series instead of the iid formula.
    #[arg(long)]
    pub temporal: bool,
    /// Bartlett bandwidth for --temporal.
    #[arg(long, requires = "temporal")]
    pub bandwidth: Option<usize>,
    /// Also report a circular block bootstrap standard error.
    #[arg(long)]
    pub bootstrap: bool,
    #[arg(long, default_value_t = DEFAULT_BOOTSTRAP_RESAMPLES)]
    pub resamples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

impl MethodArgs {
    fn method(&self) -> DeltaMethod {
        let m = if self.temporal {
            DeltaMethod::temporal()
        } else {
            DeltaMethod::iid()
        };
        match self.bandwidth {
            Some(h) => m.with_bandwidth(h),
            None => m,
        }
    }
}

#[derive(Args, Debug)]
pub struct DatasetArgs {
    /// Dataset manifest (JSON).
    #[arg(long, conflicts_with = "input")]
    pub manifest: Option<PathBuf>,
    /// Long CSV with columns series_id,t,value.
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub states: StateArgs,
}

impl DatasetArgs {
    fn load(&self) -> Result<(OtsDataset, Option<DistanceKind>)> {
        if let Some(path) = &self.manifest {
            let (manifest, dataset) = load_manifest(path)?;
            return Ok((dataset, manifest.distance));
        }
        let input = self
            .input
            .as_ref()
            .ok_or_else(|| CliError::Invalid("give --manifest or --input".into()))?;
        let states = self
            .states
            .space()?
            .ok_or_else(|| CliError::Invalid("give --states or --state-labels".into()))?;
        let series = load_series(input, SeriesFormat::Long, &states)?;
        let name = input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Ok((OtsDataset::new(name, states, series, None)?, None))
    }
}

#[derive(Args, Debug)]
pub struct DissimilarityArgs {
    #[command(flatten)]
    pub dataset: DatasetArgs,
    /// d1 (cumulative) or pmf.
    #[arg(long, default_value = "d1")]
    pub metric: SeriesMetric,
    /// Lag depth of the joint probabilities.
    #[arg(long, default_value_t = 2)]
    pub lags: usize,
    /// squared or root.
    #[arg(long, default_value = "squared")]
    pub scale: DistanceScale,
}

impl DissimilarityArgs {
    fn compute(&self) -> Result<(OtsDataset, DistanceMatrix)> {
        let (dataset, _) = self.dataset.load()?;
        let dm = pairwise_distance_matrix(&dataset, self.metric, self.lags, self.scale)?;
        Ok((dataset, dm))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FeatureKind {
    Cumulative,
    Pmf,
    Summary,
}

#[derive(Args, Debug)]
pub struct FeatureArgs {
    #[arg(long, value_enum, default_value = "summary")]
    pub kind: FeatureKind,
    #[arg(long, default_value_t = 2)]
    pub lags: usize,
    #[command(flatten)]
    pub distance: DistanceArgs,
}

impl FeatureArgs {
    fn matrix(
        &self,
        dataset: &OtsDataset,
        fallback: Option<DistanceKind>,
    ) -> Result<FeatureMatrix> {
        Ok(match self.kind {
            FeatureKind::Cumulative => FeatureMatrix::cumulative(dataset, self.lags)?,
            FeatureKind::Pmf => FeatureMatrix::pmf(dataset, self.lags)?,
            FeatureKind::Summary => {
                let dist = self.distance.build(dataset.state_space(), fallback)?;
                FeatureMatrix::summary(dataset, &dist)?
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MixedKind {
    Linear,
    Quantile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Definitional,
    EstimatorDisplay,
}

impl From<Convention> for IndexConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Definitional => IndexConvention::Definitional,
            Convention::EstimatorDisplay => IndexConvention::EstimatorDisplay,
        }
    }
}

fn read_square_matrix(path: &Path) -> Result<DMatrix<f64>> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| CliError::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message: e.to_string(),
            })?;
        rows.push(row);
    }
    let size = rows.len();
    if size == 0 || rows.iter().any(|r| r.len() != size) {
        return Err(CliError::Invalid(format!(
            "{} is not a square matrix",
            path.display()
        )));
    }
    Ok(DMatrix::from_fn(size, size, |i, j| rows[i][j]))
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn with_fields<T: Serialize>(value: &T, extra: Value) -> Result<Value> {
    let mut v = serde_json::to_value(value)?;
    if let (Value::Object(map), Value::Object(more)) = (&mut v, extra) {
        map.extend(more);
    }
    Ok(v)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text)?;
            info!("wrote {}", path.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn write_plot<P: Plot>(plot: &P, path: &Path) -> Result<()> {
    let data = plot.artifact().write(path)?;
    info!("wrote {} and {}", path.display(), data.display());
    Ok(())
}

fn ari_against(dataset: &OtsDataset, labels: &[usize]) -> Result<Option<f64>> {
    dataset
        .class_labels()
        .map(|truth| adjusted_rand_index(truth, labels))
        .transpose()
        .map_err(Into::into)
}

pub fn execute(cli: Cli) -> Result<()> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Probs { series, lag } => {
            let s = series.load()?;
            let marginal = ProbabilityProfile::estimate(&s);
            let mut v = json!({
                "length": s.len(),
                "states": s.state_space().labels(),
                "p_hat": marginal.p_hat,
                "f_hat": marginal.f_hat,
            });
            if let Some(lag) = lag {
                let joint = LaggedProbabilityProfile::estimate(&s, lag)?;
                v["lag"] = json!(lag);
                v["p_joint"] = json!(matrix_rows(&joint.p_joint));
                v["f_joint"] = json!(matrix_rows(&joint.f_joint));
            }
            emit(out, &to_json(&v)?)
        }
        Command::Features {
            series,
            distance,
            normalized,
        } => {
            let s = series.load()?;
            let dist = distance.build(s.state_space(), None)?;
            let set = MarginalFeatureSet::compute(&s, &dist, normalized)?;
            emit(
                out,
                &to_json(&with_fields(&set, json!({ "distance": dist.kind() }))?)?,
            )
        }
        Command::Kappa {
            series,
            distance,
            max_lag,
            alpha,
            plot,
        } => {
            let s = series.load()?;
            let dist = distance.build(s.state_space(), None)?;
            let diag = kappa_diagnostics(&s, &dist, max_lag, alpha)?;
            if let Some(path) = plot {
                let figure = KappaPlot {
                    kappas: diag.kappas.clone(),
                    lower: diag.critical_lower,
                    upper: diag.critical_upper,
                };
                write_plot(&figure, &path)?;
            }
            let v = with_fields(
                &diag,
                json!({ "significant_lags": diag.significant_lags() }),
            )?;
            emit(out, &to_json(&v)?)
        }
        Command::Tcc { series, lag } => {
            let s = series.load()?;
            let psi = cumulative_correlations(&s, lag)?;
            let tcc = psi.values.iter().map(|v| v * v).sum::<f64>() / psi.values.len() as f64;
            let v = json!({
                "lag": lag,
                "tcc": tcc,
                "psi": matrix_rows(&psi.values),
                "clamped": psi.clamped,
            });
            emit(out, &to_json(&v)?)
        }
        Command::MixedCor {
            series,
            covariate,
            lag,
            kind,
            rho,
            nodes,
            convention,
        } => {
            let s = series.load()?;
            let z = load_numeric(&covariate)?;
            let convention = IndexConvention::from(convention);
            let v = match kind {
                MixedKind::Linear => json!({
                    "kind": "linear",
                    "total": total_mixed_c_cor_with(&s, &z, lag, convention)?,
                    "correlations": mixed_linear_correlations_with(&s, &z, lag, convention)?,
                }),
                MixedKind::Quantile => {
                    let mut v = json!({
                        "kind": "quantile",
                        "nodes": nodes,
                        "total": total_mixed_c_qcor_with(&s, &z, lag, nodes, convention)?,
                    });
                    if let Some(rho) = rho {
                        v["rho"] = json!(rho);
                        v["correlations"] = serde_json::to_value(
                            mixed_quantile_correlations_with(&s, &z, lag, rho, convention)?,
                        )?;
                    }
                    v
                }
            };
            emit(out, &to_json(&v)?)
        }
        Command::Test {
            series,
            distance,
            method,
            feature,
            h0,
            alpha,
        } => {
            let s = series.load()?;
            let dist = distance.build(s.state_space(), None)?;
            let result = test_marginal_feature(&s, &dist, feature, h0, alpha, &method.method())?;
            let mut v = with_fields(
                &result,
                json!({ "feature": feature, "rejects": result.rejects() }),
            )?;
            if method.bootstrap {
                v["bootstrap_standard_error"] = json!(bootstrap_standard_error(
                    &s,
                    &dist,
                    feature,
                    method.resamples,
                    method.seed
                )?);
            }
            emit(out, &to_json(&v)?)
        }
        Command::Ci {
            series,
            distance,
            method,
            feature,
            level,
        } => {
            let s = series.load()?;
            let dist = distance.build(s.state_space(), None)?;
            let ci = ci_marginal_feature(&s, &dist, feature, level, &method.method())?;
            let mut v = with_fields(
                &ci,
                json!({ "feature": feature, "mode": method.method().mode }),
            )?;
            if method.bootstrap {
                v["bootstrap_standard_error"] = json!(bootstrap_standard_error(
                    &s,
                    &dist,
                    feature,
                    method.resamples,
                    method.seed
                )?);
            }
            emit(out, &to_json(&v)?)
        }
        Command::Holm { p_values } => {
            let adjusted = holm_adjust(&p_values)?;
            emit(
                out,
                &to_json(&json!({ "p_values": p_values, "adjusted": adjusted }))?,
            )
        }
        Command::Dist { dissim } => {
            let (dataset, dm) = dissim.compute()?;
            let header: Vec<String> = (1..=dataset.len()).map(|i| i.to_string()).collect();
            emit(out, &matrix_csv(Some(&header), matrix_rows(&dm.to_full()))?)
        }
        Command::Mds { dissim, dims, plot } => {
            let (dataset, dm) = dissim.compute()?;
            let embedding = classical_mds(&dm, dims)?;
            if let Some(path) = plot {
                let figure = ScatterPlot {
                    points: embedding
                        .coordinates
                        .iter()
                        .map(|c| (c[0], c.get(1).copied().unwrap_or(0.0)))
                        .collect(),
                    groups: dataset.class_labels().map(<[i64]>::to_vec),
                };
                write_plot(&figure, &path)?;
            }
            emit(out, &to_json(&embedding)?)
        }
        Command::Pam { dissim, k } => {
            let (dataset, dm) = dissim.compute()?;
            let result = pam_cluster(&dm, k)?;
            let ari = ari_against(&dataset, &result.labels)?;
            emit(
                out,
                &to_json(&with_fields(&result, json!({ "ari": ari }))?)?,
            )
        }
        Command::Kmeans {
            dataset,
            features,
            k,
            seed,
            restarts,
        } => {
            let (dataset, fallback) = dataset.load()?;
            let fm = features.matrix(&dataset, fallback)?;
            let result = kmeans_cluster_with(&fm, k, seed, restarts, DEFAULT_MAX_ITERATIONS)?;
            let ari = ari_against(&dataset, &result.labels)?;
            emit(
                out,
                &to_json(&with_fields(&result, json!({ "ari": ari }))?)?,
            )
        }
        Command::Ari { a, b } => {
            let ari = adjusted_rand_index(&a, &b)?;
            emit(out, &to_json(&json!({ "ari": ari }))?)
        }
        Command::Outliers {
            dissim,
            range_coef,
            plot,
        } => {
            let (_, dm) = dissim.compute()?;
            let report = outlier_report(&dm, range_coef)?;
            if let Some(path) = plot {
                let figure = BoxPlot {
                    scores: report.scores.clone(),
                    range_coef,
                };
                write_plot(&figure, &path)?;
            }
            emit(out, &to_json(&report)?)
        }
        Command::Simulate {
            benchmark,
            config,
            generator,
            seed,
            out_dir,
        } => {
            if let Some(path) = generator {
                let mut spec: GeneratorSpec = serde_json::from_str(&read_text(&path)?)
                    .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
                if let Some(seed) = seed {
                    spec.seed = seed;
                }
                let s = simulate(&spec)?;
                let text: String = s.codes().iter().map(|c| format!("{c}\n")).collect();
                return emit(out, &text);
            }
            let spec = match (benchmark, config) {
                (Some(i), _) => BenchmarkSpec::shipped(i)?,
                (None, Some(path)) => BenchmarkSpec::from_json(&read_text(&path)?)?,
                (None, None) => {
                    return Err(CliError::Invalid(
                        "give --benchmark, --config or --generator".into(),
                    ))
                }
            };
            let dataset = make_benchmark_dataset(&spec, seed.unwrap_or(1))?;
            match out_dir {
                Some(dir) => {
                    let manifest = write_dataset(&dir, &dataset, Some(DistanceKind::Block))?;
                    info!("wrote {}", manifest.display());
                    Ok(())
                }
                None => emit(out, &long_csv(&dataset)),
            }
        }
        Command::ExportFeatures { dataset, features } => {
            let (dataset, fallback) = dataset.load()?;
            let fm = features.matrix(&dataset, fallback)?;
            emit(out, &export_feature_matrix(&fm, dataset.class_labels())?)
        }
        Command::Plot { series } => {
            let s = series.load()?;
            let path = out.ok_or_else(|| CliError::Invalid("plot needs --out".into()))?;
            let figure = SeriesPlot {
                states: s.state_space().labels().to_vec(),
                codes: s.codes().to_vec(),
            };
            write_plot(&figure, path)
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}
