//! `svdd` command-line tool: bandwidth selection, training, scoring, grid
//! export, cross-validation, and the random-polygon simulation study.
//!
//! Machine-readable results go to stdout as `key=value` pairs (reals with
//! full 17-digit precision) or to `--out` files; human diagnostics go to
//! stderr. Exit codes: 0 success, 2 input/config, 3 degenerate bandwidth,
//! 4 solver infeasible, 5 model file, 6 search failure.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use svdd::{
    bandwidth, default_s_grid, run_simulation, train, BandwidthConfig, Dataset,
    GridSpec, Label, Position, SimulationParams, TrainConfig, DEFAULT_DELTA,
    DEFAULT_GRID_RESOLUTION,
};
use svdd_cli::csv_io::fmt_full;
use svdd_cli::{
    load_model, read_table, save_model, write_atomic, CliError, CliResult, CsvSpec, CsvTable,
    HeaderMode, RNG_ID,
};

#[derive(Parser)]
#[command(name = "svdd", version, about = "One-class classification with automatic Gaussian bandwidth selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    Mean,
    Median,
    Median2,
}

#[derive(Clone, Copy, ValueEnum)]
enum HeaderArg {
    /// Header iff the first row has a non-numeric cell.
    Auto,
    Yes,
    No,
}

impl From<HeaderArg> for HeaderMode {
    fn from(arg: HeaderArg) -> Self {
        match arg {
            HeaderArg::Auto => HeaderMode::Auto,
            HeaderArg::Yes => HeaderMode::Yes,
            HeaderArg::No => HeaderMode::No,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PositiveArg {
    Inlier,
    Outlier,
}

impl From<PositiveArg> for Label {
    fn from(arg: PositiveArg) -> Self {
        match arg {
            PositiveArg::Inlier => Label::Inlier,
            PositiveArg::Outlier => Label::Outlier,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute a bandwidth from data without training.
    Bandwidth {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "mean")]
        criterion: CriterionArg,
        /// Tolerance factor in (0,1); defaults to sqrt(2)e-6.
        #[arg(long)]
        delta: Option<f64>,
        /// Repeat-count column (name or 0-based index); mean criterion only.
        #[arg(long)]
        weights_col: Option<String>,
        /// Subsample size for the approximate median.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "auto")]
        header: HeaderArg,
    },
    /// Train a model and write it to a file.
    Train {
        input: PathBuf,
        /// Expected outlier fraction; C = 1/(N f).
        #[arg(long, default_value_t = 0.001)]
        f: f64,
        #[arg(long, value_enum, conflicts_with = "bandwidth")]
        criterion: Option<CriterionArg>,
        /// Fixed bandwidth instead of a criterion.
        #[arg(long)]
        bandwidth: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Pair-update budget; defaults to 100 * N.
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long, value_enum, default_value = "auto")]
        header: HeaderArg,
    },
    /// Score a CSV against a saved model.
    Score {
        model: PathBuf,
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        header: HeaderArg,
    },
    /// Export the scored grid of a 2-D model.
    Grid {
        model: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GRID_RESOLUTION)]
        resolution: usize,
        /// `auto` (training box + 10% per side) or `x0,x1,y0,y1`.
        #[arg(long, default_value = "auto", allow_hyphen_values = true)]
        bounds: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bandwidth search maximizing F1 on labeled evaluation data.
    Crossval {
        train: PathBuf,
        eval: PathBuf,
        /// Label column in the eval CSV (name or 0-based index);
        /// values 1/inlier and 0/outlier.
        #[arg(long)]
        label_col: String,
        /// `auto` (20 log-spaced around the mean criterion, plus the mean
        /// criterion itself) or a comma list of bandwidths.
        #[arg(long, default_value = "auto")]
        grid: String,
        #[arg(long, default_value_t = 0.001)]
        f: f64,
        #[arg(long, value_enum, default_value = "inlier")]
        positive: PositiveArg,
        #[arg(long)]
        delta: Option<f64>,
        /// Trace CSV with one s,f1 row per grid point.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        header: HeaderArg,
    },
    /// Random-polygon study of the criterion F1 ratios.
    Simulate {
        /// Inclusive range `a..b` or comma list of vertex counts.
        #[arg(long, default_value = "5..30")]
        vertices: String,
        #[arg(long, default_value_t = 20)]
        per_count: usize,
        #[arg(long, default_value_t = 600)]
        n_sample: usize,
        #[arg(long, default_value_t = 0.001)]
        f: f64,
        /// Log-spaced bandwidths searched for F_max (criterion values are
        /// always added on top).
        #[arg(long, default_value_t = 30)]
        grid_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3.0)]
        r_min: f64,
        #[arg(long, default_value_t = 5.0)]
        r_max: f64,
        #[arg(long, default_value_t = DEFAULT_GRID_RESOLUTION)]
        resolution: usize,
        /// Per-polygon CSV.
        #[arg(long)]
        out: PathBuf,
        /// Quartile CSV per vertex count; defaults to `<out>_agg.csv`.
        #[arg(long)]
        agg_out: Option<PathBuf>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Bandwidth {
            input,
            criterion,
            delta,
            weights_col,
            sample,
            seed,
            header,
        } => cmd_bandwidth(&input, criterion, delta, weights_col, sample, seed, header),
        Command::Train {
            input,
            f,
            criterion,
            bandwidth,
            delta,
            sample,
            seed,
            out,
            tol,
            max_iter,
            header,
        } => cmd_train(
            &input, f, criterion, bandwidth, delta, sample, seed, &out, tol, max_iter, header,
        ),
        Command::Score {
            model,
            input,
            out,
            header,
        } => cmd_score(&model, &input, &out, header),
        Command::Grid {
            model,
            resolution,
            bounds,
            out,
        } => cmd_grid(&model, resolution, &bounds, &out),
        Command::Crossval {
            train,
            eval,
            label_col,
            grid,
            f,
            positive,
            delta,
            out,
            header,
        } => cmd_crossval(&train, &eval, &label_col, &grid, f, positive, delta, &out, header),
        Command::Simulate {
            vertices,
            per_count,
            n_sample,
            f,
            grid_size,
            seed,
            r_min,
            r_max,
            resolution,
            out,
            agg_out,
        } => cmd_simulate(
            &vertices, per_count, n_sample, f, grid_size, seed, r_min, r_max, resolution, &out,
            agg_out,
        ),
    }
}

fn load_features(path: &Path, header: HeaderArg, weights_col: Option<String>) -> CliResult<Dataset> {
    let spec = CsvSpec {
        header: header.into(),
        weights_col,
        label_col: None,
    };
    svdd_cli::csv_io::read_dataset(path, &spec)
}

#[allow(clippy::too_many_arguments)]
fn cmd_bandwidth(
    input: &Path,
    criterion: CriterionArg,
    delta: Option<f64>,
    weights_col: Option<String>,
    sample: Option<usize>,
    seed: Option<u64>,
    header: HeaderArg,
) -> CliResult<()> {
    if weights_col.is_some() && criterion != CriterionArg::Mean {
        return Err(CliError::Usage(
            "--weights-col is only supported with the mean criterion".into(),
        ));
    }
    let data = load_features(input, header, weights_col)?;
    let delta = delta.unwrap_or(DEFAULT_DELTA);
    let n = data.n();
    let p = data.dim();
    let ln_term = ((n as f64 - 1.0) / (delta * delta)).ln();
    match criterion {
        CriterionArg::Mean => {
            if data.weights().is_some() {
                let s = bandwidth::weighted_mean_criterion(&data, delta)?;
                println!("s={} criterion=mean n={n} p={p} weighted=1", fmt_full(s));
                eprintln!("weighted mean criterion: s = {s:.6} (N = {n}, p = {p})");
            } else {
                let dbar2 = bandwidth::mean_sq_pairwise_closed_form(&data)?;
                let s = bandwidth::mean_criterion(&data, delta)?;
                println!(
                    "s={} criterion=mean n={n} p={p} dbar2={}",
                    fmt_full(s),
                    fmt_full(dbar2)
                );
                eprintln!("mean criterion: s = {s:.6} (N = {n}, p = {p}, mean sq dist = {dbar2:.6})");
            }
        }
        CriterionArg::Median => {
            let s = bandwidth::median_criterion(&data, delta, sample, seed)?;
            let median = s * ln_term.sqrt();
            let sampled = sample.map(|m| m < n).unwrap_or(n > bandwidth::EXACT_MEDIAN_LIMIT);
            println!(
                "s={} criterion=median n={n} p={p} median_dist={} sampled={}",
                fmt_full(s),
                fmt_full(median),
                u8::from(sampled)
            );
            eprintln!("median criterion: s = {s:.6} (N = {n}, p = {p}, median dist = {median:.6})");
        }
        CriterionArg::Median2 => {
            let s = bandwidth::median2_criterion(&data)?;
            let median = s * std::f64::consts::SQRT_2;
            println!(
                "s={} criterion=median2 n={n} p={p} median_dist={}",
                fmt_full(s),
                fmt_full(median)
            );
            eprintln!("median2 criterion: s = {s:.6} (N = {n}, p = {p}, median dist = {median:.6})");
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_train(
    input: &Path,
    f: f64,
    criterion: Option<CriterionArg>,
    fixed: Option<f64>,
    delta: Option<f64>,
    sample: Option<usize>,
    seed: Option<u64>,
    out: &Path,
    tol: f64,
    max_iter: Option<usize>,
    header: HeaderArg,
) -> CliResult<()> {
    let data = load_features(input, header, None)?;
    let mut bw = match (criterion, fixed) {
        (_, Some(s)) => BandwidthConfig::fixed(s),
        (Some(CriterionArg::Mean), None) | (None, None) => BandwidthConfig::mean(),
        (Some(CriterionArg::Median), None) => BandwidthConfig::median(),
        (Some(CriterionArg::Median2), None) => BandwidthConfig::median2(),
    };
    if let Some(d) = delta {
        bw = bw.with_delta(d);
    }
    bw = bw.with_sample(sample).with_seed(seed);
    let config = TrainConfig::new(f, bw)
        .with_tolerance(tol)
        .with_max_iterations(max_iter);
    let model = train(&data, &config)?;
    save_model(&model, out)?;

    let boundary = model
        .position_tags()
        .iter()
        .filter(|&&t| t == Position::Boundary)
        .count();
    let outside = model
        .position_tags()
        .iter()
        .filter(|&&t| t == Position::Outside)
        .count();
    let prov = model.provenance();
    println!(
        "s={} c={} r2={} n_sv={} n_boundary={boundary} n_outside={outside} converged={} iterations={} kkt_violation={}",
        fmt_full(model.bandwidth()),
        fmt_full(model.penalty()),
        fmt_full(model.threshold()),
        model.n_support_vectors(),
        prov.converged,
        prov.iterations,
        fmt_full(prov.kkt_violation),
    );
    eprintln!(
        "trained on {} points: s = {:.6}, C = {:.6}, R^2 = {:.6}, {} support vectors ({} boundary, {} outside), converged = {}; model written to {}",
        prov.n_train,
        model.bandwidth(),
        model.penalty(),
        model.threshold(),
        model.n_support_vectors(),
        boundary,
        outside,
        prov.converged,
        out.display()
    );
    Ok(())
}

fn cmd_score(model_path: &Path, input: &Path, out: &Path, header: HeaderArg) -> CliResult<()> {
    let model = load_model(model_path)?;
    let spec = CsvSpec {
        header: header.into(),
        ..Default::default()
    };
    let table: CsvTable = read_table(input, &spec)?;

    let mut csv = String::from("index,dist2,outlier\n");
    let mut n_outliers = 0usize;
    let n = table.rows.len();
    if n > 0 {
        let batch = svdd_cli::csv_io::table_to_dataset(table)?;
        let report = model.classify(&batch)?;
        for (i, pt) in report.points.iter().enumerate() {
            n_outliers += usize::from(pt.is_outlier);
            csv.push_str(&format!(
                "{i},{},{}\n",
                fmt_full(pt.dist2),
                u8::from(pt.is_outlier)
            ));
        }
    }
    write_atomic(out, &csv)?;
    println!(
        "n={n} n_outliers={n_outliers} threshold={}",
        fmt_full(model.threshold())
    );
    eprintln!(
        "scored {n} rows against {}: {n_outliers} outliers at R^2 = {:.6}; written to {}",
        model_path.display(),
        model.threshold(),
        out.display()
    );
    Ok(())
}

fn cmd_grid(model_path: &Path, resolution: usize, bounds: &str, out: &Path) -> CliResult<()> {
    let model = load_model(model_path)?;
    if model.dim() != 2 {
        return Err(svdd::Error::NotTwoDimensional(model.dim()).into());
    }
    let spec = if bounds == "auto" {
        let min = model.data_min();
        let max = model.data_max();
        GridSpec::around([min[0], min[1]], [max[0], max[1]], resolution)?
    } else {
        let parts: Vec<f64> = bounds
            .split(',')
            .map(|tok| tok.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| {
                CliError::Usage(format!("--bounds must be `auto` or x0,x1,y0,y1, got {bounds:?}"))
            })?;
        if parts.len() != 4 {
            return Err(CliError::Usage(format!(
                "--bounds needs 4 values, got {}",
                parts.len()
            )));
        }
        GridSpec::new(parts[0], parts[1], parts[2], parts[3], resolution)?
    };
    let cells = model.score_grid(&spec)?;
    let mut csv = String::from("x,y,dist2,inlier\n");
    for cell in &cells {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt_full(cell.x),
            fmt_full(cell.y),
            fmt_full(cell.dist2),
            u8::from(cell.is_inlier)
        ));
    }
    write_atomic(out, &csv)?;
    println!(
        "rows={} resolution={} x_min={} x_max={} y_min={} y_max={}",
        cells.len(),
        spec.resolution,
        fmt_full(spec.x_min),
        fmt_full(spec.x_max),
        fmt_full(spec.y_min),
        fmt_full(spec.y_max)
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_crossval(
    train_path: &Path,
    eval_path: &Path,
    label_col: &str,
    grid: &str,
    f: f64,
    positive: PositiveArg,
    delta: Option<f64>,
    out: &Path,
    header: HeaderArg,
) -> CliResult<()> {
    let train_data = load_features(train_path, header, None)?;
    let eval_spec = CsvSpec {
        header: header.into(),
        weights_col: None,
        label_col: Some(label_col.to_owned()),
    };
    let eval_data = svdd_cli::csv_io::read_dataset(eval_path, &eval_spec)?;

    let s_grid: Vec<f64> = if grid == "auto" {
        default_s_grid(&train_data, delta.unwrap_or(DEFAULT_DELTA))?
    } else {
        let parsed: Vec<f64> = grid
            .split(',')
            .map(|tok| tok.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CliError::Usage(format!("--grid must be `auto` or a comma list, got {grid:?}")))?;
        if parsed.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(CliError::Usage("--grid bandwidths must be positive and finite".into()));
        }
        parsed
    };

    let result = svdd::bandwidth_grid_search(&train_data, &eval_data, &s_grid, f, positive.into())?;
    let mut csv = String::from("s,f1\n");
    for (s, f1) in &result.trace {
        csv.push_str(&format!("{},{}\n", fmt_full(*s), fmt_full(*f1)));
    }
    write_atomic(out, &csv)?;
    println!(
        "best_s={} best_f1={} grid_size={}",
        fmt_full(result.best_s),
        fmt_full(result.best_f1),
        result.trace.len()
    );
    eprintln!(
        "searched {} bandwidths: best s = {:.6} with F1 = {:.4}; trace written to {}",
        result.trace.len(),
        result.best_s,
        result.best_f1,
        out.display()
    );
    Ok(())
}

fn parse_vertex_counts(raw: &str) -> CliResult<Vec<usize>> {
    let usage = || {
        CliError::Usage(format!(
            "--vertices must be an inclusive range `a..b` or a comma list, got {raw:?}"
        ))
    };
    if let Some((lo, hi)) = raw.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| usage())?;
        let hi: usize = hi.trim().parse().map_err(|_| usage())?;
        if lo > hi {
            return Err(usage());
        }
        Ok((lo..=hi).collect())
    } else {
        raw.split(',')
            .map(|tok| tok.trim().parse::<usize>().map_err(|_| usage()))
            .collect()
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    vertices: &str,
    per_count: usize,
    n_sample: usize,
    f: f64,
    grid_size: usize,
    seed: u64,
    r_min: f64,
    r_max: f64,
    resolution: usize,
    out: &Path,
    agg_out: Option<PathBuf>,
) -> CliResult<()> {
    let params = SimulationParams {
        vertex_counts: parse_vertex_counts(vertices)?,
        polygons_per_count: per_count,
        n_sample,
        outlier_fraction: f,
        s_grid_size: grid_size,
        seed,
        r_min,
        r_max,
        grid_resolution: resolution,
    };
    let report = run_simulation(&params)?;

    let mut csv = String::from(
        "n_vertices,seed,s_mean,s_median,s_max,f_mean,f_median,f_max,ratio_mean,ratio_median\n",
    );
    for r in &report.records {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.n_vertices,
            r.seed,
            fmt_full(r.s_mean),
            fmt_full(r.s_median),
            fmt_full(r.s_best),
            fmt_full(r.f_mean),
            fmt_full(r.f_median),
            fmt_full(r.f_max),
            fmt_full(r.ratio_mean),
            fmt_full(r.ratio_median)
        ));
    }
    write_atomic(out, &csv)?;

    let agg_path = agg_out.unwrap_or_else(|| derive_agg_path(out));
    let mut agg_csv =
        String::from("n_vertices,criterion,n_polygons,n_excluded,min,q1,median,q3,max,mean\n");
    for agg in &report.aggregates {
        for (name, stats) in [("mean", &agg.ratio_mean), ("median", &agg.ratio_median)] {
            agg_csv.push_str(&format!(
                "{},{name},{},{},{},{},{},{},{},{}\n",
                agg.n_vertices,
                agg.n_polygons,
                agg.n_excluded,
                fmt_full(stats.min),
                fmt_full(stats.q1),
                fmt_full(stats.median),
                fmt_full(stats.q3),
                fmt_full(stats.max),
                fmt_full(stats.mean)
            ));
        }
    }
    write_atomic(&agg_path, &agg_csv)?;

    println!(
        "polygons={} excluded={} rng={RNG_ID} master_seed={seed}",
        report.records.len(),
        report.exclusions.len()
    );
    for agg in &report.aggregates {
        println!(
            "vertices={} n={} ratio_mean_min={} ratio_mean_q2={} ratio_median_min={} ratio_median_q2={}",
            agg.n_vertices,
            agg.n_polygons,
            fmt_full(agg.ratio_mean.min),
            fmt_full(agg.ratio_mean.median),
            fmt_full(agg.ratio_median.min),
            fmt_full(agg.ratio_median.median)
        );
    }
    for excl in &report.exclusions {
        eprintln!(
            "excluded polygon (vertices = {}, seed = {}): {}",
            excl.n_vertices, excl.seed, excl.reason
        );
    }
    eprintln!(
        "simulation finished: {} polygons, {} excluded; per-polygon CSV {}, aggregates {}",
        report.records.len(),
        report.exclusions.len(),
        out.display(),
        agg_path.display()
    );
    Ok(())
}

fn derive_agg_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    let ext = out
        .extension()
        .map(|e| format!(".{}", e.to_string_lossy()))
        .unwrap_or_default();
    out.with_file_name(format!("{stem}_agg{ext}"))
}
