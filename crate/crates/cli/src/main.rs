//! `pointmass`: runs, kernel tables, diffusion waves, run analysis and the
//! verification suites.
//!
//! Exit codes: 0 success, 1 failed verification or failed computation,
//! 2 invalid arguments or configuration.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};

use pointmass_core::analysis::{bound_ratio, decay_report, delta_surrogate, waves_for};
use pointmass_core::config::parse_config_in;
use pointmass_core::greenfn::{evaluate_kernel, GreenTable, KernelKind, Transmission, SMALL_T};
use pointmass_core::model::{eigensystem, CharSystem, PressureLaw};
use pointmass_core::selfsim::DiffusionWave;
use pointmass_core::solver::io::SERIES_FILE;
use pointmass_core::solver::{read_series, read_snapshots, run};
use pointmass_core::verify::{run_all, run_suite, Suite};
use pointmass_core::Error;

/// Overrides the output directory of `simulate` (the `--out-dir` flag wins).
const OUTPUT_DIR_ENV: &str = "POINTMASS_OUTPUT_DIR";
/// Copy of the configuration stored beside the run outputs.
const CONFIG_COPY: &str = "config.txt";

#[derive(Parser)]
#[command(name = "pointmass", version, about = "Point mass in a 1D viscous compressible fluid")]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Fluid {
    #[arg(long, default_value_t = 1.4)]
    gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    nu: f64,
}

impl Fluid {
    fn char_system(&self) -> Result<CharSystem, Error> {
        eigensystem(&PressureLaw::gamma(self.gamma)?, self.nu)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the coupled solver described by a configuration file.
    Simulate {
        config: PathBuf,
        /// Output directory; overrides the config and POINTMASS_OUTPUT_DIR.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Tabulate G, Gstar, GT or GR as CSV.
    Green {
        #[arg(long)]
        kind: String,
        /// Comma-separated x values (nonzero).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
        /// `a,b,n`: n uniform points on [a, b], x = 0 skipped.
        #[arg(long, allow_hyphen_values = true)]
        x_range: Option<String>,
        /// Comma-separated times.
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        /// Particle mass (transmission rate 2/m).
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[command(flatten)]
        fluid: Fluid,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate a diffusion wave theta_i as CSV.
    Selfsim {
        /// 1 for lambda = c, 2 for lambda = -c.
        #[arg(long)]
        branch: usize,
        #[arg(long, allow_hyphen_values = true)]
        mass: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        x_range: Option<String>,
        #[command(flatten)]
        fluid: Fluid,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit decay rates and the bound ratio of a finished run.
    Analyze {
        run_dir: PathBuf,
        /// Fit window `t_lo,t_hi` (default: last decade of the run).
        #[arg(long)]
        window: Option<String>,
        /// Configuration of the run (default: the copy stored by simulate).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Skip the bound ratio even when snapshots exist.
        #[arg(long)]
        no_bound: bool,
    },
    /// Run a property suite: model, specialfns, selfsim, greenfn, solver, analysis or all.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Failure class, mapped to the exit code.
enum Failure {
    Usage(anyhow::Error),
    Failed(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        // configuration and argument problems are usage errors
        match e.downcast_ref::<Error>() {
            Some(Error::Config(_) | Error::InvalidParameter { .. } | Error::InvalidPressureLaw(_) | Error::InterfaceEvaluation) => {
                Failure::Usage(e)
            }
            _ => Failure::Failed(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

type Outcome = Result<(), Failure>;

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(anyhow!("{msg}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Simulate { config, out_dir } => simulate(&config, out_dir),
        Command::Green {
            kind,
            x,
            x_range,
            t,
            mass,
            fluid,
            out,
        } => green(&kind, x, x_range.as_deref(), &t, mass, fluid, out.as_deref()),
        Command::Selfsim {
            branch,
            mass,
            t,
            x,
            x_range,
            fluid,
            out,
        } => selfsim(branch, mass, &t, x, x_range.as_deref(), fluid, out.as_deref()),
        Command::Analyze {
            run_dir,
            window,
            config,
            no_bound,
        } => analyze(&run_dir, window.as_deref(), config.as_deref(), no_bound),
        Command::Verify { suite, seed } => verify(&suite, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Failed(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read_config(path: &Path) -> Result<(String, pointmass_core::config::RunConfig), Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::Usage)?;
    let base = path.parent().filter(|p| !p.as_os_str().is_empty());
    let cfg = parse_config_in(&text, base).map_err(|e| Failure::Usage(anyhow!("{}: {e}", path.display())))?;
    Ok((text, cfg))
}

fn simulate(config: &Path, out_dir: Option<PathBuf>) -> Outcome {
    let (text, mut cfg) = read_config(config)?;
    let env_dir = std::env::var_os(OUTPUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    cfg.output_dir = out_dir.or(env_dir).or(cfg.output_dir);
    let Some(dir) = cfg.output_dir.clone() else {
        return Err(usage(format!(
            "no output directory: set [output] dir, {OUTPUT_DIR_ENV} or --out-dir"
        )));
    };
    let spec = cfg.run_spec()?;
    let out = run(&spec)?;
    fs::write(dir.join(CONFIG_COPY), text).with_context(|| format!("writing {}", dir.display()))?;
    let l = &out.ledger;
    println!("output_dir: {}", dir.display());
    println!("steps: {}", out.steps);
    println!("max_newton_iterations: {}", out.max_newton_iterations);
    println!("snapshots: {}", out.snapshots.len());
    println!("mass_drift: {:e}", l.mass_drift());
    println!("momentum_drift: {:e}", l.momentum_drift());
    println!("energy_drift: {:e}", l.energy_drift());
    if out.initial_masses.tail_warning() {
        eprintln!("warning: initial data do not vanish at the truncation boundary; masses may be inaccurate");
    }
    Ok(())
}

/// `--x` values plus an optional `a,b,n` range, with `x = 0` removed.
fn abscissae(x: Vec<f64>, range: Option<&str>) -> Result<Vec<f64>, Failure> {
    let mut xs = x;
    if let Some(r) = range {
        let parts: Vec<&str> = r.split(',').map(str::trim).collect();
        let parsed = match parts.as_slice() {
            [a, b, n] => a.parse::<f64>().ok().zip(b.parse::<f64>().ok()).zip(n.parse::<usize>().ok()),
            _ => None,
        };
        let Some(((a, b), n)) = parsed.filter(|&((a, b), n)| n >= 2 && a < b) else {
            return Err(usage(format!("--x-range expects `a,b,n` with a < b and n >= 2, got `{r}`")));
        };
        xs.extend((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64));
    }
    xs.retain(|&x| x != 0.0);
    if xs.is_empty() {
        return Err(usage("no nonzero x values given (use --x or --x-range)"));
    }
    Ok(xs)
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn green(kind: &str, x: Vec<f64>, range: Option<&str>, ts: &[f64], mass: f64, fluid: Fluid, out: Option<&Path>) -> Outcome {
    let kind = KernelKind::parse(kind).ok_or_else(|| usage(format!("unknown kernel `{kind}` (G, Gstar, GT, GR)")))?;
    let xs = abscissae(x, range)?;
    let cs = fluid.char_system()?;
    let tr = Transmission::new(mass)?;
    let mut s = String::from("x,t,kind,entry_11,entry_12,entry_21,entry_22,singular_weight\n");
    for &t in ts {
        let table = if t >= SMALL_T && kind != KernelKind::Gstar {
            Some(GreenTable::new(t, &cs, tr)?)
        } else {
            None
        };
        for &x in &xs {
            let k = evaluate_kernel(kind, x, t, &cs, tr, table.as_ref())?;
            let g = k.regular;
            let _ = writeln!(
                s,
                "{x},{t},{},{},{},{},{},{}",
                kind.name(),
                g[(0, 0)],
                g[(0, 1)],
                g[(1, 0)],
                g[(1, 1)],
                k.singular_weight
            );
        }
    }
    emit(out, &s)
}

fn selfsim(branch: usize, mass: f64, ts: &[f64], x: Vec<f64>, range: Option<&str>, fluid: Fluid, out: Option<&Path>) -> Outcome {
    if !(branch == 1 || branch == 2) {
        return Err(usage(format!("--branch must be 1 or 2, got {branch}")));
    }
    let cs = fluid.char_system()?;
    let i = branch - 1;
    let wave = DiffusionWave::new(i, cs.lambda[i], cs.nu, mass)?;
    let mut xs = x;
    if let Some(r) = range {
        xs.extend(abscissae(Vec::new(), Some(r))?);
    }
    if xs.is_empty() {
        return Err(usage("no x values given (use --x or --x-range)"));
    }
    let mut s = String::from("x,t,theta,dtheta_dx\n");
    for &t in ts {
        for &x in &xs {
            let j = wave.jet(x, t)?;
            let _ = writeln!(s, "{x},{t},{},{}", j.theta, j.theta_x);
        }
    }
    emit(out, &s)
}

fn analyze(dir: &Path, window: Option<&str>, config: Option<&Path>, no_bound: bool) -> Outcome {
    let series_path = dir.join(SERIES_FILE);
    if !series_path.is_file() {
        return Err(usage(format!("{} has no {SERIES_FILE}", dir.display())));
    }
    let series = read_series(&series_path)?;
    let (first, last) = match (series.first(), series.last()) {
        (Some(f), Some(l)) => (*f, *l),
        _ => return Err(Failure::Failed(anyhow!("{} is empty", series_path.display()))),
    };
    let window = match window {
        None => (0.1 * last.t, last.t),
        Some(w) => {
            let parsed = w
                .split_once(',')
                .and_then(|(a, b)| a.trim().parse::<f64>().ok().zip(b.trim().parse::<f64>().ok()));
            parsed.ok_or_else(|| usage(format!("--window expects `t_lo,t_hi`, got `{w}`")))?
        }
    };

    let stored = dir.join(CONFIG_COPY);
    let cfg_path = config.map(Path::to_path_buf).or_else(|| stored.is_file().then_some(stored));
    let cs = match &cfg_path {
        Some(p) => read_config(p)?.1.char_system()?,
        None => Fluid { gamma: 1.4, nu: 1.0 }.char_system()?,
    };

    let bound = if no_bound {
        None
    } else {
        match bound_for(dir, first.v, &cs) {
            Ok(b) => b,
            Err(e) => {
                eprintln!("warning: bound ratio skipped: {e:#}");
                None
            }
        }
    };
    let report = decay_report(&series, window, bound)?;
    let text = report.to_text();
    fs::write(dir.join("report.txt"), &text).with_context(|| format!("writing report in {}", dir.display()))?;
    fs::write(dir.join("fit.csv"), report.to_csv()).with_context(|| format!("writing fit.csv in {}", dir.display()))?;
    print!("{text}");
    Ok(())
}

fn bound_for(dir: &Path, v0: f64, cs: &CharSystem) -> anyhow::Result<Option<pointmass_core::analysis::BoundRatio>> {
    let snaps = read_snapshots(dir)?;
    let Some(initial) = snaps.first() else {
        return Ok(None);
    };
    if initial.t != 0.0 || snaps.len() < 2 {
        bail!("need the t = 0 snapshot and at least one later one");
    }
    let delta = delta_surrogate(&initial.tau, &initial.u, cs)?;
    let waves = waves_for(initial, v0, cs)?;
    Ok(Some(bound_ratio(&snaps, &waves, delta.delta, cs)?))
}

fn verify(suite: &str, seed: u64) -> Outcome {
    let reports = if suite == "all" {
        run_all(seed)
    } else {
        let s = Suite::parse(suite).ok_or_else(|| {
            usage(format!(
                "unknown suite `{suite}` (model, specialfns, selfsim, greenfn, solver, analysis, all)"
            ))
        })?;
        vec![run_suite(s, seed)]
    };
    let mut failed = Vec::new();
    for r in &reports {
        print!("{r}");
        if !r.passed() {
            failed.push(r.suite.name());
        }
    }
    if failed.is_empty() {
        println!("verify {suite} (seed {seed}): all checks passed");
        Ok(())
    } else {
        Err(Failure::Failed(anyhow!("verification failed in: {}", failed.join(", "))))
    }
}
