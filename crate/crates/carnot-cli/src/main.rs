//! Experiment front end: group inspection, degree sampling, blow-up
//! traces, measures, dimension estimates and characteristic-set bounds.
//!
//! Exit codes: 0 success, 2 usage/configuration errors, 3 when a
//! convergence audit misses its tolerance.

use carnot::exterior::{brute_force_max_degree, degree_profile};
use carnot::gmt::{
    blowup_trace, box_dimension, charset_covering_experiment, charset_dim_bound,
    intrinsic_measure, riemannian_measure, BlowupParams, EstimatorSpec, ExperimentOptions,
    McParams,
};
use carnot::io;
use carnot::linalg::Mat;
use carnot::manifold::{
    builtin_chart, grid_nodes, sample_characteristic_set, SampleClass, DEFAULT_REL_TOL,
};
use carnot::metric::HomogeneousQuasiNorm;
use carnot::{Algebra, Chart, Point};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "carnot", version, about = "stratified-group geometry experiments")]
struct Cli {
    /// Cap on worker threads (default: all available).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory for JSON/CSV artifacts.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect a group: dimensions, grading, D(p) table, validation.
    Group(GroupArgs),
    /// Sample pointwise degrees and classify the characteristic set.
    Degree(DegreeArgs),
    /// Blow-up trace at a transversal point.
    Blowup(BlowupArgs),
    /// Intrinsic and Riemannian measures of a chart piece.
    Measure(MeasureArgs),
    /// Box-counting dimension of a sampled set.
    Dimension(DimensionArgs),
    /// Characteristic-set dimension bound or covering experiment.
    Charset(CharsetArgs),
}

#[derive(Args, Debug, Serialize)]
struct GroupArgs {
    /// Builtin name (abelian:n, heisenberg:n, engel, free_step2:m).
    #[arg(long, conflicts_with = "group")]
    builtin: Option<String>,
    /// Group source: builtin name or definition file.
    #[arg(long)]
    group: Option<String>,
}

#[derive(Args, Debug, Serialize)]
struct DegreeArgs {
    #[arg(long)]
    group: Option<String>,
    /// Chart source: builtin name or definition file.
    #[arg(long)]
    chart: String,
    /// Grid resolution per parameter axis.
    #[arg(long, default_value_t = 41)]
    grid: usize,
    /// Relative coefficient threshold.
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    tol: f64,
}

#[derive(Args, Debug, Serialize)]
struct BlowupArgs {
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    chart: String,
    /// Base parameter (comma-separated), default the origin.
    #[arg(long)]
    t0: Option<String>,
    /// Radii as hi:lo[:count], log-spaced (default count 8).
    #[arg(long, default_value = "1e-1:1e-3.5:8")]
    radii: String,
    /// Quadrature resolution per axis for the density ratio.
    #[arg(long, default_value_t = 1501)]
    grid: usize,
    /// Sampling resolution per axis for the set distance.
    #[arg(long = "set-grid", default_value_t = 401)]
    set_grid: usize,
    /// Audit tolerance on the final Hausdorff distance.
    #[arg(long, default_value_t = 0.05)]
    tol: f64,
    /// Constant auxiliary metric file `{"matrix": [[...], ...]}`.
    #[arg(long)]
    metric: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct MeasureArgs {
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    chart: String,
    /// Projection degree (default D(p)).
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long, default_value_t = 96)]
    grid: usize,
    #[arg(long = "mc-samples", default_value_t = 200_000)]
    mc_samples: usize,
    #[arg(long)]
    metric: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct DimensionArgs {
    #[arg(long)]
    group: Option<String>,
    /// Chart to sample (or use --points).
    #[arg(long, conflicts_with = "points")]
    chart: Option<String>,
    /// Point-cloud CSV (header x1..xn).
    #[arg(long)]
    points: Option<PathBuf>,
    /// Number of log-spaced scales (two decades).
    #[arg(long, default_value_t = 8)]
    scales: usize,
    /// Sample count when sampling a chart.
    #[arg(long, default_value_t = 150_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct CharsetArgs {
    #[arg(long)]
    group: Option<String>,
    /// Evaluate the dimension bound instead of the experiment.
    #[arg(long, requires = "lambda", requires = "p")]
    bound: bool,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, conflicts_with = "bound")]
    chart: Option<String>,
    /// Scale parameter of the counting lemma.
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    /// Covering radii as hi:lo[:count] or a single value.
    #[arg(long, default_value = "1e-1:1e-2:3")]
    r: String,
    #[arg(long, default_value_t = 41)]
    grid: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        carnot::parallel::set_max_threads(t.max(1));
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> carnot::Result<ExitCode> {
    std::fs::create_dir_all(&cli.out)?;
    match &cli.command {
        Command::Group(args) => cmd_group(cli, args),
        Command::Degree(args) => cmd_degree(cli, args),
        Command::Blowup(args) => cmd_blowup(cli, args),
        Command::Measure(args) => cmd_measure(cli, args),
        Command::Dimension(args) => cmd_dimension(cli, args),
        Command::Charset(args) => cmd_charset(cli, args),
    }
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

fn err(msg: impl Into<String>) -> carnot::Error {
    carnot::Error::Parse(msg.into())
}

/// Loads the group and chart; a chart file may name its own group when the
/// flag is omitted.
fn load_group_and_chart(
    group: &Option<String>,
    chart_src: &str,
) -> carnot::Result<(Algebra, Chart, String, String)> {
    if Path::new(chart_src).exists() {
        let text = std::fs::read_to_string(chart_src)?;
        let file: io::ChartFile = serde_json::from_str(&text)
            .map_err(|e| err(format!("chart file {chart_src}: {e}")))?;
        let group_src = group
            .clone()
            .or_else(|| file.group.clone())
            .ok_or_else(|| err("no group given: pass --group or set it in the chart file"))?;
        let alg: Algebra = io::resolve_group(&group_src)?;
        let chart = io::chart_from_file(&file, alg.dim())?;
        Ok((alg, chart, group_src, chart_src.to_string()))
    } else {
        let group_src = group
            .clone()
            .ok_or_else(|| err("builtin charts need --group"))?;
        let alg: Algebra = io::resolve_group(&group_src)?;
        let chart = builtin_chart(&alg, chart_src)?;
        Ok((alg, chart, group_src, chart_src.to_string()))
    }
}

fn parse_log_range(spec: &str, default_count: usize) -> carnot::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let parse = |s: &str| -> carnot::Result<f64> {
        // accept forms like 1e-3.5
        if let Ok(v) = s.parse::<f64>() {
            return Ok(v);
        }
        if let Some(rest) = s.strip_prefix("1e") {
            if let Ok(exp) = rest.parse::<f64>() {
                return Ok(10f64.powf(exp));
            }
        }
        Err(err(format!("bad number '{s}' in range '{spec}'")))
    };
    match parts.as_slice() {
        [single] => Ok(vec![parse(single)?]),
        [hi, lo] | [hi, lo, _] => {
            let hi = parse(hi)?;
            let lo = parse(lo)?;
            let k = if parts.len() == 3 {
                parts[2].parse::<usize>().map_err(|_| err("bad count"))?
            } else {
                default_count
            };
            if k < 2 || !(hi > 0.0) || !(lo > 0.0) {
                return Err(err("range needs positive endpoints and count >= 2"));
            }
            Ok((0..k)
                .map(|i| hi * (lo / hi).powf(i as f64 / (k - 1) as f64))
                .collect())
        }
        _ => Err(err(format!("bad range '{spec}', expected hi:lo[:count]"))),
    }
}

fn load_metric(path: &Option<PathBuf>, n: usize) -> carnot::Result<Option<Mat<f64>>> {
    let Some(path) = path else { return Ok(None) };
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| err(format!("metric file: {e}")))?;
    let rows = v["matrix"]
        .as_array()
        .ok_or_else(|| err("metric file needs a 'matrix' array"))?;
    if rows.len() != n {
        return Err(err(format!("metric must be {n} x {n}")));
    }
    let mut m = Mat::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| err("metric rows must be arrays"))?;
        if row.len() != n {
            return Err(err(format!("metric must be {n} x {n}")));
        }
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = x.as_f64().ok_or_else(|| err("metric entries must be numbers"))?;
        }
    }
    Ok(Some(m))
}

fn parse_t0(spec: &Option<String>, p: usize) -> carnot::Result<Vec<f64>> {
    match spec {
        None => Ok(vec![0.0; p]),
        Some(s) => {
            let vals: Vec<f64> = s
                .split(',')
                .map(|x| x.trim().parse::<f64>().map_err(|_| err(format!("bad t0 entry '{x}'"))))
                .collect::<carnot::Result<_>>()?;
            if vals.len() != p {
                return Err(err(format!("t0 has {} entries for {p} parameters", vals.len())));
            }
            Ok(vals)
        }
    }
}

fn emit(cli: &Cli, name: &str, payload: Value) -> carnot::Result<PathBuf> {
    let path = cli.out.join(name);
    let text = serde_json::to_string_pretty(&payload).expect("serializable");
    std::fs::write(&path, text + "\n")?;
    Ok(path)
}

fn provenance(command: &str, config: Value, result: Value) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "config": config,
        "result": result,
    })
}

fn write_csv(cli: &Cli, name: &str, text: &str) -> carnot::Result<PathBuf> {
    let path = cli.out.join(name);
    std::fs::write(&path, text)?;
    Ok(path)
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

fn cmd_group(cli: &Cli, args: &GroupArgs) -> carnot::Result<ExitCode> {
    let source = args
        .builtin
        .clone()
        .or_else(|| args.group.clone())
        .ok_or_else(|| err("pass --builtin <name> or --group <source>"))?;
    let alg: Algebra = io::resolve_group(&source)?;
    let report = alg.validate();
    let n = alg.dim();
    let mut dtable = Vec::with_capacity(n);
    for p in 1..=n {
        let profile = degree_profile(&alg, p)?;
        let brute = brute_force_max_degree(&alg, p)?;
        if profile.max_degree != brute {
            return Err(carnot::Error::Structure(format!(
                "D({p}) formula ({}) disagrees with enumeration ({brute})",
                profile.max_degree
            )));
        }
        dtable.push(profile.max_degree);
    }

    println!("group          {source}");
    println!("dimension n    {n}");
    println!("step           {}", alg.step());
    println!("layers         {:?}", alg.layer_dims());
    println!("homogeneous Q  {}", alg.homogeneous_dimension());
    println!("D(p), p=1..n   {dtable:?}");
    println!("validation     {}", report);

    let violations: Vec<String> = report.violations.iter().map(|v| format!("{v:?}")).collect();
    let result = json!({
        "n": n,
        "step": alg.step(),
        "layers": alg.layer_dims(),
        "homogeneous_dimension": alg.homogeneous_dimension(),
        "max_degree_table": dtable,
        "valid": report.is_valid(),
        "violations": violations,
    });
    let payload = provenance("group", json!({"source": source}), result);
    let path = emit(cli, "group.json", payload)?;
    println!("wrote          {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_degree(cli: &Cli, args: &DegreeArgs) -> carnot::Result<ExitCode> {
    let (alg, chart, group_src, chart_src) = load_group_and_chart(&args.group, &args.chart)?;
    let samples = sample_characteristic_set(&alg, &chart, args.grid, args.tol)?;
    let count = |class: SampleClass| samples.iter().filter(|s| s.class == class).count();
    let counts = json!({
        "total": samples.len(),
        "transversal": count(SampleClass::Transversal),
        "class_a": count(SampleClass::A),
        "class_b": count(SampleClass::B),
        "singular": count(SampleClass::Singular),
    });
    println!(
        "samples {}  transversal {}  A {}  B {}  singular {}",
        samples.len(),
        count(SampleClass::Transversal),
        count(SampleClass::A),
        count(SampleClass::B),
        count(SampleClass::Singular)
    );
    let csv_path = write_csv(cli, "degree.csv", &io::char_samples_to_csv(&samples))?;
    let config = json!({
        "group": group_src, "chart": chart_src, "grid": args.grid, "tol": args.tol,
    });
    let payload = provenance("degree", config, counts);
    let json_path = emit(cli, "degree.json", payload)?;
    println!("wrote {}", csv_path.display());
    println!("wrote {}", json_path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_blowup(cli: &Cli, args: &BlowupArgs) -> carnot::Result<ExitCode> {
    let (alg, chart, group_src, chart_src) = load_group_and_chart(&args.group, &args.chart)?;
    let norm = HomogeneousQuasiNorm::standard(alg.step());
    let radii = parse_log_range(&args.radii, 8)?;
    let t0 = parse_t0(&args.t0, chart.params())?;
    let metric = load_metric(&args.metric, alg.dim())?;
    let params = BlowupParams {
        set_resolution: args.set_grid,
        ball_grid: args.grid,
        mc: McParams { samples: 200_000, seed: args.seed },
        ..Default::default()
    };
    let trace = blowup_trace(&alg, &norm, &chart, &t0, &radii, metric.as_ref(), &params)?;

    let spread = trace.tail_spread(3);
    let final_h = *trace.hausdorff.last().unwrap();
    let last = *trace.density_ratio.last().unwrap();
    let limit_err = (last - trace.predicted_limit).abs() / trace.predicted_limit.abs().max(1e-300);
    println!("radii            {:?}", trace.radii);
    println!("hausdorff        {:?}", trace.hausdorff);
    println!("density ratio    {:?}", trace.density_ratio);
    println!("predicted limit  {:.6}", trace.predicted_limit);
    println!("tail spread      {:.4}", spread);
    println!("final hausdorff  {:.6}", final_h);

    let audit_pass = spread < 0.05 && final_h < args.tol && limit_err < 0.05;
    let result = json!({
        "trace": io::blowup_trace_json(&trace),
        "audit": {
            "tail_spread": spread,
            "final_hausdorff": final_h,
            "limit_relative_error": limit_err,
            "pass": audit_pass,
        },
    });
    let config = json!({
        "group": group_src, "chart": chart_src, "t0": t0, "radii": args.radii,
        "grid": args.grid, "set_grid": args.set_grid, "tol": args.tol, "seed": args.seed,
    });
    let payload = provenance("blowup", config, result);
    let json_path = emit(cli, "blowup.json", payload)?;
    let h_rows: Vec<(f64, f64)> =
        trace.radii.iter().copied().zip(trace.hausdorff.iter().copied()).collect();
    let d_rows: Vec<(f64, f64)> =
        trace.radii.iter().copied().zip(trace.density_ratio.iter().copied()).collect();
    let h_path = write_csv(cli, "blowup_hausdorff.csv", &io::two_column_csv("r", "hausdorff", &h_rows))?;
    let d_path = write_csv(cli, "blowup_density.csv", &io::two_column_csv("r", "density_ratio", &d_rows))?;
    println!("wrote {}", json_path.display());
    println!("wrote {}", h_path.display());
    println!("wrote {}", d_path.display());
    if !audit_pass {
        eprintln!("audit failed: spread {spread:.4}, final hausdorff {final_h:.6}, limit error {limit_err:.4}");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_measure(cli: &Cli, args: &MeasureArgs) -> carnot::Result<ExitCode> {
    let (alg, chart, group_src, chart_src) = load_group_and_chart(&args.group, &args.chart)?;
    let profile = degree_profile(&alg, chart.params())?;
    let degree = args.degree.unwrap_or(profile.max_degree);
    let region = chart.domain().to_vec();
    let quad = EstimatorSpec::Quadrature { grid: args.grid };
    let mc = EstimatorSpec::MonteCarlo { samples: args.mc_samples, seed: args.seed };
    let iq = intrinsic_measure(&alg, &chart, &region, degree, quad)?;
    let im = intrinsic_measure(&alg, &chart, &region, degree, mc)?;
    let metric = load_metric(&args.metric, alg.dim())?.unwrap_or_else(|| Mat::identity(alg.dim()));
    let rq = riemannian_measure(&alg, &chart, &region, &metric, quad)?;
    println!("intrinsic (quadrature)   {:.12}", iq.value);
    println!(
        "intrinsic (monte carlo)  {:.12} +- {:.2e}",
        im.value,
        im.std_error.unwrap_or(0.0)
    );
    println!("riemannian (quadrature)  {:.12}", rq.value);
    let result = json!({
        "degree": degree,
        "intrinsic_quadrature": { "value": iq.value, "samples": iq.samples },
        "intrinsic_monte_carlo": {
            "value": im.value, "samples": im.samples, "std_error": im.std_error,
        },
        "riemannian_quadrature": { "value": rq.value, "samples": rq.samples },
    });
    let config = json!({
        "group": group_src, "chart": chart_src, "degree": degree, "grid": args.grid,
        "mc_samples": args.mc_samples, "seed": args.seed,
    });
    let payload = provenance("measure", config, result);
    let path = emit(cli, "measure.json", payload)?;
    println!("wrote {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_dimension(cli: &Cli, args: &DimensionArgs) -> carnot::Result<ExitCode> {
    let points: Vec<Point>;
    let alg: Algebra;
    let source;
    if let Some(path) = &args.points {
        let group_src = args
            .group
            .clone()
            .ok_or_else(|| err("--points needs --group for the ambient group"))?;
        alg = io::resolve_group(&group_src)?;
        points = io::points_from_csv(&std::fs::read_to_string(path)?, alg.dim())?;
        source = json!({"group": group_src, "points": path});
    } else {
        let chart_src = args.chart.as_ref().ok_or_else(|| err("pass --chart or --points"))?;
        let (a, chart, group_src, chart_name) = load_group_and_chart(&args.group, chart_src)?;
        alg = a;
        let per_axis =
            (args.samples as f64).powf(1.0 / chart.params() as f64).ceil().max(2.0) as usize;
        let nodes = grid_nodes(&chart, per_axis)?;
        points = nodes
            .iter()
            .map(|t| alg.point(chart.eval(t)))
            .collect::<carnot::Result<_>>()?;
        source = json!({"group": group_src, "chart": chart_name, "samples": points.len()});
    }
    if points.is_empty() {
        return Err(err("no points to analyze"));
    }
    let norm = HomogeneousQuasiNorm::standard(alg.step());
    // two decades below a quarter of the sampled quasi-diameter
    let mut reach = 0.0f64;
    for p in &points {
        let d = norm.distance(&alg, &points[0], p);
        if d > reach {
            reach = d;
        }
    }
    if !(reach > 0.0) {
        return Err(err("sampled set is a single point; dimension is 0"));
    }
    let r_max = reach / 4.0;
    let k = args.scales.max(4);
    let scales: Vec<f64> = (0..k)
        .map(|i| r_max * (0.01f64).powf(i as f64 / (k - 1) as f64))
        .collect();
    let est = box_dimension(&norm, &alg, &points, &scales)?;
    println!("scales  {:?}", est.scales);
    println!("counts  {:?}", est.counts);
    println!("slope   {:.4} +- {:.4}  (residual {:.4})", est.slope, est.half_width, est.residual);
    let config = json!({
        "source": source, "scales": args.scales, "seed": args.seed,
    });
    let payload = provenance("dimension", config, io::dim_estimate_json(&est));
    let json_path = emit(cli, "dimension.json", payload)?;
    let rows: Vec<(f64, f64)> =
        est.scales.iter().copied().zip(est.counts.iter().map(|&c| c as f64)).collect();
    let csv_path = write_csv(cli, "dimension.csv", &io::two_column_csv("r", "count", &rows))?;
    println!("wrote {}", json_path.display());
    println!("wrote {}", csv_path.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_charset(cli: &Cli, args: &CharsetArgs) -> carnot::Result<ExitCode> {
    let group_src =
        args.group.clone().ok_or_else(|| err("charset needs --group"))?;
    if args.bound {
        let alg: Algebra = io::resolve_group(&group_src)?;
        let lambda = args.lambda.expect("required by clap");
        let p = args.p.expect("required by clap");
        let profile = degree_profile(&alg, p)?;
        let bound = charset_dim_bound(&profile, lambda)?;
        println!(
            "p = {p}, ell = {}, D(p) = {}, lambda = {lambda}: dim_H bound = {}",
            bound.ell, profile.max_degree, bound.bound
        );
        let config = json!({"group": group_src, "p": p, "lambda": lambda});
        let payload = provenance("charset", config, io::charset_bound_json(&bound));
        let path = emit(cli, "charset.json", payload)?;
        println!("wrote {}", path.display());
        return Ok(ExitCode::SUCCESS);
    }
    let chart_src = args.chart.as_ref().ok_or_else(|| err("pass --bound or --chart"))?;
    let (alg, chart, group_src, chart_name) =
        load_group_and_chart(&Some(group_src), chart_src)?;
    let norm = HomogeneousQuasiNorm::standard(alg.step());
    let radii = parse_log_range(&args.r, 3)?;
    let opts = ExperimentOptions { locate_resolution: args.grid, ..Default::default() };
    let mut runs = Vec::new();
    let mut worst_norm: Vec<f64> = Vec::new();
    let mut empty = true;
    for &r in &radii {
        let exp = charset_covering_experiment(&alg, &norm, &chart, args.eps, r, &opts)?;
        if !exp.is_empty() {
            empty = false;
        }
        let w = exp
            .class_a
            .iter()
            .chain(exp.class_b.iter())
            .map(|a| a.normalized)
            .fold(0.0f64, f64::max);
        worst_norm.push(w);
        runs.push(json!({ "r": r, "experiment": io::charset_experiment_json(&exp) }));
    }
    if empty {
        println!("no characteristic points found: empty experiment");
    } else {
        println!("radii              {radii:?}");
        println!("normalized counts  {worst_norm:?}");
    }
    // boundedness audit: the implied constant must not grow with 1/r
    let audit_pass = if empty || radii.len() < 3 {
        true
    } else {
        let coarse = worst_norm[..2].iter().cloned().fold(0.0f64, f64::max);
        let fine = worst_norm[worst_norm.len() - 1];
        fine <= 2.0 * coarse.max(1e-12)
    };
    let config = json!({
        "group": group_src, "chart": chart_name, "eps": args.eps, "r": args.r,
        "grid": args.grid,
    });
    let result = json!({ "empty": empty, "runs": runs, "audit_pass": audit_pass });
    let payload = provenance("charset", config, result);
    let path = emit(cli, "charset.json", payload)?;
    println!("wrote {}", path.display());
    if !audit_pass {
        eprintln!("audit failed: normalized covering counts grew beyond 2x the coarse scales");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}
