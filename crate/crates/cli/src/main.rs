use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use poisson_sor::experiment::{
    format_real, parse_config, parse_edge_condition, plot_script, run_sweep, sweep_minimum, write_sweep_csv,
    ConfigFile, ExperimentConfig, OmegaRange, DEFAULT_OMEGA_STEP,
};
use poisson_sor::omega::PredictionDetail;
use poisson_sor::oracle::radius_curve;
use poisson_sor::robin::{classify, MaxPositiveRoots};
use poisson_sor::solver::{DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE};
use poisson_sor::{
    make_grid, predict_detailed, select_wavenumber, spectral_radius, build_sweep_matrix, BoundarySet,
    EdgeCondition, Error, Prediction, RobinPair, Scheme, SorVariant, WavenumberMode,
};

#[derive(Debug, Parser)]
#[command(name = "poisson-sor", version, about = "Optimal SOR relaxation for the 2-D Poisson equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Iteration counts over a range of omega, as CSV.
    Sweep(SweepArgs),
    /// Resolved modes and the optimal omega from the closed-form formulas.
    Predict(ProblemArgs),
    /// Spectral radius of the dense sweep matrix over a range of omega, as CSV.
    Oracle(OracleArgs),
    /// Wavenumber selected by a pair of Robin edges.
    RobinRoots(RobinArgs),
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// Key-value file with defaults for any of the flags below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    /// central2 or hoc
    #[arg(long, value_parser = parse_scheme)]
    scheme: Option<Scheme>,
    /// point or line
    #[arg(long, value_parser = parse_variant)]
    variant: Option<SorVariant>,
    /// dirichlet, neumann or robin:a,b
    #[arg(long, value_parser = parse_edge)]
    bc_left: Option<EdgeCondition>,
    #[arg(long, value_parser = parse_edge)]
    bc_right: Option<EdgeCondition>,
    #[arg(long, value_parser = parse_edge)]
    bc_bottom: Option<EdgeCondition>,
    #[arg(long, value_parser = parse_edge)]
    bc_top: Option<EdgeCondition>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RangeArgs {
    #[arg(long)]
    omega_start: Option<f64>,
    #[arg(long)]
    omega_stop: Option<f64>,
    #[arg(long)]
    omega_step: Option<f64>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    range: RangeArgs,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// Also write a gnuplot script for the CSV (needs --out).
    #[arg(long)]
    plot_script: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    range: RangeArgs,
}

#[derive(Debug, Args)]
struct RobinArgs {
    /// Value coefficient of the low edge.
    #[arg(allow_negative_numbers = true)]
    a: f64,
    /// Derivative coefficient of the low edge.
    #[arg(allow_negative_numbers = true)]
    b: f64,
    /// Value coefficient of the high edge.
    #[arg(allow_negative_numbers = true)]
    c: f64,
    /// Derivative coefficient of the high edge.
    #[arg(allow_negative_numbers = true)]
    d: f64,
    #[arg(long, default_value_t = 30)]
    n_cells: usize,
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<SorVariant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_edge(s: &str) -> Result<EdgeCondition, String> {
    parse_edge_condition(s).map_err(|e| e.to_string())
}

/// Errors that are the user's fault rather than the problem's.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn load_config(path: Option<&Path>) -> Result<ConfigFile> {
    let Some(path) = path else { return Ok(ConfigFile::default()) };
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Flags merged over the config file, then defaults.
fn resolve(problem: &ProblemArgs, range: Option<&RangeArgs>, tol: Option<f64>, max_iters: Option<usize>) -> Result<ExperimentConfig> {
    let file = load_config(problem.config.as_deref())?;
    let nx = problem.nx.or(file.nx).ok_or_else(|| usage("--nx is required"))?;
    let ny = problem.ny.or(file.ny).ok_or_else(|| usage("--ny is required"))?;
    let grid = make_grid(nx, ny).map_err(|e| usage(e.to_string()))?;
    let edge = |flag: Option<EdgeCondition>, file: Option<EdgeCondition>| flag.or(file).unwrap_or(EdgeCondition::Dirichlet);
    let bcs = BoundarySet::new(
        edge(problem.bc_left, file.bc_left),
        edge(problem.bc_right, file.bc_right),
        edge(problem.bc_bottom, file.bc_bottom),
        edge(problem.bc_top, file.bc_top),
    )
    .map_err(|e| usage(e.to_string()))?;
    let scheme = problem.scheme.or(file.scheme).unwrap_or(Scheme::Central2);
    let variant = problem.variant.or(file.variant).unwrap_or(SorVariant::PointSor);
    let mut config = ExperimentConfig::new(grid, bcs, scheme, variant);
    let (start, stop, step) = (
        range.and_then(|r| r.omega_start).or(file.omega_start).unwrap_or(config.omega.start),
        range.and_then(|r| r.omega_stop).or(file.omega_stop).unwrap_or(config.omega.stop),
        range.and_then(|r| r.omega_step).or(file.omega_step).unwrap_or(DEFAULT_OMEGA_STEP),
    );
    config.omega = OmegaRange::new(start, stop, step).map_err(|e| usage(e.to_string()))?;
    config.tolerance = tol.or(file.tol).unwrap_or(DEFAULT_TOLERANCE);
    if !(config.tolerance > 0.0) {
        return Err(usage(format!("--tol must be positive, got {}", config.tolerance)));
    }
    config.max_iterations = max_iters.or(file.max_iters).unwrap_or(DEFAULT_MAX_ITERATIONS);
    if config.max_iterations == 0 {
        return Err(usage("--max-iters must be positive"));
    }
    config.output = problem.out.clone().or(file.out);
    Ok(config)
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn metadata(config: &ExperimentConfig) -> Vec<(String, String)> {
    let g = &config.grid;
    let b = &config.bcs;
    [
        ("nx", g.nx.to_string()),
        ("ny", g.ny.to_string()),
        ("scheme", config.scheme.to_string()),
        ("variant", config.variant.to_string()),
        ("bc_left", b.left.to_string()),
        ("bc_right", b.right.to_string()),
        ("bc_bottom", b.bottom.to_string()),
        ("bc_top", b.top.to_string()),
        ("omega_start", format_real(config.omega.start)),
        ("omega_stop", format_real(config.omega.stop)),
        ("omega_step", format_real(config.omega.step)),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

fn prediction_summary(config: &ExperimentConfig) -> (Option<f64>, (String, String)) {
    match predict_detailed(&config.grid, &config.bcs, config.scheme, config.variant) {
        Ok(p) => (Some(p.omega.omega_opt), ("predicted_omega".into(), format_real(p.omega.omega_opt))),
        Err(e) => (None, ("predicted_omega".into(), format!("unavailable ({e})"))),
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let config = resolve(&args.problem, Some(&args.range), args.tol, args.max_iters)?;
    if args.plot_script.is_some() && config.output.is_none() {
        return Err(usage("--plot-script needs --out"));
    }
    config.bcs.ensure_solvable()?;
    let records = run_sweep(&config)?;
    let mut meta = metadata(&config);
    meta.push(("tolerance".into(), format_real(config.tolerance)));
    meta.push(("max_iterations".into(), config.max_iterations.to_string()));
    let (predicted, predicted_line) = prediction_summary(&config);
    let mut summary = Vec::new();
    match sweep_minimum(&records) {
        Some(best) => {
            summary.push(("argmin_omega".to_string(), format_real(best.omega)));
            summary.push(("argmin_iterations".to_string(), best.iterations.to_string()));
        }
        None => summary.push(("argmin_omega".to_string(), "none".to_string())),
    }
    summary.push(predicted_line);
    let converged = records.iter().filter(|r| r.converged).count();
    summary.push(("converged_runs".into(), format!("{converged}/{}", records.len())));

    let mut out = open_output(config.output.as_deref())?;
    write_sweep_csv(&mut out, &meta, &records, &summary)?;
    out.flush()?;

    if let (Some(script), Some(csv)) = (&args.plot_script, &config.output) {
        let title = format!(
            "{} {} SOR, {}x{}",
            config.scheme, config.variant, config.grid.nx, config.grid.ny
        );
        std::fs::write(script, plot_script(&csv.to_string_lossy(), &title, predicted))
            .with_context(|| format!("cannot write {}", script.display()))?;
    }
    Ok(())
}

fn mode_lines(axis: &str, mode: WavenumberMode) -> Vec<(String, String)> {
    let kind = match mode {
        WavenumberMode::Trig(_) => "trig",
        WavenumberMode::Hyper(_) => "hyper",
        WavenumberMode::Zero => "zero",
    };
    vec![
        (format!("{axis}_mode"), kind.to_string()),
        (axis.to_string(), format_real(mode.wavenumber())),
    ]
}

fn prediction_lines(p: &Prediction) -> Vec<(String, String)> {
    let mut lines = mode_lines("kx", p.kx);
    lines.extend(mode_lines("ky", p.ky));
    let mut push = |k: &str, v: f64| lines.push((k.to_string(), format_real(v)));
    match p.detail {
        PredictionDetail::Quadratic { r } => push("r", r),
        PredictionDetail::HocPoint(c) => {
            push("c1", c.c1);
            push("c2", c.c2);
            push("p", c.p);
            push("q", c.q);
            push("delta", c.delta_kk);
            push("k1", c.k1);
            push("k2", c.k2);
            push("omega_first_order", c.omega_first_order());
            push("omega_second_order", c.omega_second_order());
        }
    }
    push("omega_opt", p.omega.omega_opt);
    if let Some(rho) = p.omega.predicted_spectral_radius {
        push("predicted_spectral_radius", rho);
    }
    lines.push(("approximate".into(), p.omega.approximate.to_string()));
    lines
}

fn cmd_predict(args: &ProblemArgs) -> Result<()> {
    let config = resolve(args, None, None, None)?;
    let p = predict_detailed(&config.grid, &config.bcs, config.scheme, config.variant)?;
    let mut out = open_output(config.output.as_deref())?;
    for (k, v) in metadata(&config).into_iter().take(8).chain(prediction_lines(&p)) {
        writeln!(out, "{k}={v}")?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_oracle(args: &OracleArgs) -> Result<()> {
    let config = resolve(&args.problem, Some(&args.range), None, None)?;
    config.bcs.ensure_solvable()?;
    let (g, b, s, v) = (&config.grid, &config.bcs, config.scheme, config.variant);
    let curve = radius_curve(g, b, s, v, &config.omega.values())?;
    let radius = |w: f64| -> Result<f64> { Ok(spectral_radius(&build_sweep_matrix(g, b, s, v, w)?)?) };

    let mut summary = Vec::new();
    let best = curve.iter().copied().fold(None, |best: Option<(f64, f64)>, (w, r)| match best {
        Some((_, rb)) if rb <= r => best,
        _ => Some((w, r)),
    });
    if let Some((w, r)) = best {
        summary.push(("oracle_omega".to_string(), format_real(w)));
        summary.push(("oracle_radius".to_string(), format_real(r)));
    }
    match predict_detailed(g, b, s, v) {
        Ok(p) => {
            let w = p.omega.omega_opt;
            summary.push(("predicted_omega".into(), format_real(w)));
            summary.push(("radius_at_predicted".into(), format_real(radius(w)?)));
            if let Some((wb, _)) = best {
                summary.push(("omega_difference".into(), format_real(wb - w)));
            }
            if let PredictionDetail::HocPoint(c) = p.detail {
                let w1 = c.omega_first_order();
                summary.push(("omega_first_order".into(), format_real(w1)));
                if w1 > 0.0 && w1 < 2.0 {
                    summary.push(("radius_at_first_order".into(), format_real(radius(w1)?)));
                }
            }
        }
        Err(e) => summary.push(("predicted_omega".into(), format!("unavailable ({e})"))),
    }

    let mut out = open_output(config.output.as_deref())?;
    for (k, val) in metadata(&config) {
        writeln!(out, "# {k}={val}")?;
    }
    writeln!(out, "omega,spectral_radius")?;
    for (w, r) in &curve {
        writeln!(out, "{},{}", format_real(*w), format_real(*r))?;
    }
    for (k, val) in summary {
        writeln!(out, "# {k}={val}")?;
    }
    out.flush()?;
    Ok(())
}

fn classification_name(c: MaxPositiveRoots) -> &'static str {
    match c {
        MaxPositiveRoots::Zero => "zero",
        MaxPositiveRoots::One => "one",
        MaxPositiveRoots::AtMostOne => "at-most-one",
        MaxPositiveRoots::AtMostTwo => "at-most-two",
    }
}

fn cmd_robin_roots(args: &RobinArgs) -> Result<()> {
    let RobinArgs { a, b, c, d, n_cells } = *args;
    let pair = RobinPair::new(a, b, c, d, n_cells).map_err(|e| usage(e.to_string()))?;
    let mut lines = vec![
        ("a".to_string(), format_real(a)),
        ("b".into(), format_real(b)),
        ("c".into(), format_real(c)),
        ("d".into(), format_real(d)),
        ("n_cells".into(), n_cells.to_string()),
        ("det".into(), format_real(pair.det())),
    ];
    match pair.mn() {
        Some((m, n)) => {
            let class = classify(m, n)?;
            lines.push(("m".into(), format_real(m)));
            lines.push(("n".into(), format_real(n)));
            lines.push(("hyperbolic_roots".into(), classification_name(class.max_positive_roots).into()));
        }
        None => lines.push(("hyperbolic_roots".into(), "closed form (ad - bc = 0)".into())),
    }
    let low = EdgeCondition::robin(a, b).map_err(|e| usage(e.to_string()))?;
    let high = EdgeCondition::robin(c, d).map_err(|e| usage(e.to_string()))?;
    let mode = select_wavenumber(low, high, n_cells)?;
    let (equation, residual) = match mode {
        WavenumberMode::Trig(k) => ("trig", Some(pair.trig_residual(k))),
        WavenumberMode::Hyper(k) => ("hyper", Some(pair.hyper_residual(k))),
        WavenumberMode::Zero => ("none (linear mode)", None),
    };
    lines.push(("equation".into(), equation.into()));
    lines.push(("k".into(), format_real(mode.wavenumber())));
    if let Some(r) = residual {
        lines.push(("residual".into(), format_real(r)));
    }
    let mut out = io::stdout().lock();
    for (k, v) in lines {
        writeln!(out, "{k}={v}")?;
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::NonConvergent { .. } | Error::NonSolvable) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::RobinRoots(a) => cmd_robin_roots(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
