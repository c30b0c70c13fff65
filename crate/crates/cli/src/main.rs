use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use fracwave::harness::{
    emit_report, render, run_bench, run_refinement, verify, Example, ExperimentConfig, RefineAxis,
    ReportFormat,
};
use fracwave::solver1d::Backend;

/// Convergence studies for time-fractional diffusion-wave solvers.
#[derive(Parser)]
#[command(name = "fracwave", version)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, env = "FRACWAVE_THREADS", global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a refinement study and write its report.
    Run(RunArgs),
    /// Run the property and cross-validation suites.
    Verify {
        /// Print outcomes as JSON lines.
        #[arg(long)]
        json: bool,
    },
    /// Time both backends under time refinement.
    Bench {
        #[arg(long, value_parser = parse_backend)]
        backend: Option<Backend>,
        /// Time steps, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [16384usize, 32768, 65536, 131072])]
        n: Vec<usize>,
        #[arg(long, default_value_t = 16)]
        m: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// ex1, ex2, ex3, low_reg or low_reg_wave.
    #[arg(long)]
    example: Option<String>,
    /// Lower order.
    #[arg(long)]
    alpha: Option<f64>,
    /// Upper order.
    #[arg(long)]
    beta: Option<f64>,
    /// Time exponent of the low-regularity example.
    #[arg(long)]
    nu: Option<f64>,
    /// time, space or sigma.
    #[arg(long, value_parser = parse_axis)]
    refine: Option<RefineAxis>,
    /// Time steps: the list when refining time, one value otherwise.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Spatial cells: the list when refining space, one value otherwise.
    #[arg(long, value_delimiter = ',')]
    m: Vec<usize>,
    /// Quadrature cells: the list when refining sigma, one value otherwise.
    #[arg(long, value_delimiter = ',')]
    j: Vec<usize>,
    #[arg(long, value_parser = parse_backend)]
    backend: Option<Backend>,
    /// Also report the discrete L2 error.
    #[arg(long)]
    l2: bool,
    /// Output files; the format follows the extension (.csv, .md, .svg).
    #[arg(long)]
    out: Vec<PathBuf>,
}

fn parse_backend(s: &str) -> std::result::Result<Backend, String> {
    s.parse().map_err(|e: fracwave::Error| e.to_string())
}

fn parse_axis(s: &str) -> std::result::Result<RefineAxis, String> {
    s.parse().map_err(|e: fracwave::Error| e.to_string())
}

fn single(values: &[usize], name: &str) -> Result<Option<usize>> {
    match values {
        [] => Ok(None),
        [v] => Ok(Some(*v)),
        _ => bail!("--{name} takes one value unless it is the refined parameter"),
    }
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let base = match &args.config {
        Some(path) => Some(
            ExperimentConfig::from_json_file(path)
                .with_context(|| format!("reading {}", path.display()))?,
        ),
        None => None,
    };
    let (mut a1, mut a2, mut nu, mut j) = (0.5, 1.5, 1.5, 16usize);
    if let Some(c) = &base {
        match c.example {
            Example::Ex1 { alpha1, alpha2 } | Example::Ex3 { alpha1, alpha2 } => (a1, a2) = (alpha1, alpha2),
            Example::LowReg { nu: v, alpha1, alpha2 } => (nu, a1, a2) = (v, alpha1, alpha2),
            Example::LowRegWave { nu: v } => nu = v,
            Example::Ex2 { intervals } => j = intervals,
        }
    }
    a1 = args.alpha.unwrap_or(a1);
    a2 = args.beta.unwrap_or(a2);
    nu = args.nu.unwrap_or(nu);
    let refine = args
        .refine
        .or(base.as_ref().map(|c| c.refine))
        .context("--refine is required without a config file")?;
    if refine != RefineAxis::Sigma {
        if let Some(v) = single(&args.j, "j")? {
            j = v;
        }
    }
    let id = match (&args.example, &base) {
        (Some(id), _) => id.clone(),
        (None, Some(c)) => c.example.id().to_string(),
        (None, None) => bail!("--example is required without a config file"),
    };
    let example = Example::from_id(&id, a1, a2, nu, j)?;

    let mut config = base.unwrap_or_else(|| ExperimentConfig::new(example, refine, Vec::new()));
    config.example = example;
    config.refine = refine;
    let list = match refine {
        RefineAxis::Time => &args.n,
        RefineAxis::Space => &args.m,
        RefineAxis::Sigma => &args.j,
    };
    if !list.is_empty() {
        config.resolutions = list.clone();
    }
    if refine != RefineAxis::Time {
        if let Some(n) = single(&args.n, "n")? {
            config.steps = Some(n);
        }
    }
    if refine != RefineAxis::Space {
        if let Some(m) = single(&args.m, "m")? {
            config.cells = Some(m);
        }
    }
    if let Some(b) = args.backend {
        config.backend = b;
    }
    config.l2 |= args.l2;
    for path in &args.out {
        match ReportFormat::from_path(path)? {
            ReportFormat::Csv => config.outputs.csv = Some(path.clone()),
            ReportFormat::Markdown => config.outputs.markdown = Some(path.clone()),
            ReportFormat::Svg => config.outputs.svg = Some(path.clone()),
        }
    }
    config.validate()?;
    Ok(config)
}

fn run(args: &RunArgs) -> Result<()> {
    let config = build_config(args)?;
    let report = run_refinement(&config)?;
    print!("{}", render(&report, ReportFormat::Markdown)?);
    if config.l2 {
        for r in &report.rows {
            if let Some(e) = r.l2_error {
                println!("{} L2 error {e:.4e}", r.resolution);
            }
        }
    }
    let outputs = [
        (&config.outputs.csv, ReportFormat::Csv),
        (&config.outputs.markdown, ReportFormat::Markdown),
        (&config.outputs.svg, ReportFormat::Svg),
    ];
    for (path, format) in outputs {
        if let Some(path) = path {
            emit_report(&report, format, path).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("warning: could not size the worker pool: {e}");
        }
    }
    let outcome = match &cli.command {
        Command::Run(args) => run(args).map(|()| true),
        Command::Verify { json } => verify::run_all().map_err(Into::into).map(|checks| {
            for c in &checks {
                if *json {
                    println!("{}", serde_json::to_string(c).unwrap_or_default());
                } else {
                    let mark = if c.passed { "PASS" } else { "FAIL" };
                    println!("{mark} {:<48} worst {:.3e} (limit {:.1e})  {}", c.name, c.worst, c.limit, c.detail);
                }
            }
            checks.iter().all(|c| c.passed)
        }),
        Command::Bench { backend, n, m } => bench(*backend, n, *m).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn bench(backend: Option<Backend>, steps: &[usize], cells: usize) -> Result<()> {
    let backends = match backend {
        Some(b) => vec![b],
        None => vec![Backend::Fast, Backend::Stepping],
    };
    for b in backends {
        println!("{b:?} backend, M = {cells}");
        println!("{:>10} {:>12} {:>8}", "N", "seconds", "ratio");
        for row in run_bench(b, steps, cells)? {
            let ratio = row.ratio.map(|r| format!("{r:.2}")).unwrap_or_else(|| "--".into());
            println!("{:>10} {:>12.4} {:>8}", row.steps, row.seconds, ratio);
        }
    }
    Ok(())
}
