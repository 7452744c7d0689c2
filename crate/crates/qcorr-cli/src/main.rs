//! Command-line front end: compute measures for one state, sweep the
//! physical (f, fhat) region, and emit the reference figure datasets
//! as CSV.
//!
//! Exit codes: 0 success, 1 internal or selftest failure, 2 invalid
//! user input.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use qcorr::measures::{
    self, gd_lower_bound, measure_report, min_upper_bound, normalization_factor,
    scaled_discord_from_dg,
};
use qcorr::oracles::{oracle_gd, oracle_lqu, oracle_min, OptimizerConfig};
use qcorr::ortho::OrthoState;
use qcorr::{Error, Result};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "qcorr",
    version,
    about = "Quantumness measures for orthogonally invariant bipartite states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute all measures for a single state
    State(StateArgs),
    /// Evaluate every grid point of the physical (f, fhat) region into a CSV file
    Sweep(SweepArgs),
    /// Emit one of the reference figure datasets as CSV
    Figure(FigureArgs),
    /// Run the algebraic identity suite
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct StateArgs {
    /// Subsystem dimension
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long)]
    f: Option<f64>,
    #[arg(long)]
    fhat: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    /// Also run the optimization oracles
    #[arg(long)]
    oracle: bool,
    #[arg(long, env = "QCORR_SEED", default_value_t = 0)]
    seed: u64,
    /// Random restarts for the oracles
    #[arg(long, default_value_t = 64)]
    restarts: usize,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Grid resolution per axis (>= 2)
    #[arg(long, default_value_t = 41)]
    grid: usize,
    #[arg(long)]
    out: PathBuf,
    /// Append oracle columns (slow)
    #[arg(long)]
    oracle: bool,
    #[arg(long, env = "QCORR_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 64)]
    restarts: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
}

#[derive(Args)]
struct FigureArgs {
    /// Which dataset to generate
    #[arg(value_enum)]
    id: FigureId,
    /// Points per axis (curves) or per side (region grid)
    #[arg(long, default_value_t = 100)]
    grid: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, env = "QCORR_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, env = "QCORR_SEED", default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::State(args) => cmd_state(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Figure(args) => cmd_figure(args),
        Command::Selftest(args) => cmd_selftest(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(classify(&e))
        }
    }
}

/// 2 for bad user input, 1 for anything internal.
fn classify(e: &Error) -> u8 {
    match e {
        Error::NotPhysical { .. }
        | Error::ParameterRange { .. }
        | Error::TraceCondition { .. }
        | Error::DimensionTooSmall { .. } => 2,
        _ => 1,
    }
}

fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn cfg_from(seed: u64, restarts: usize) -> OptimizerConfig {
    OptimizerConfig {
        seeds: restarts.max(1),
        rng_seed: seed,
        ..Default::default()
    }
}

fn resolve_state(args: &StateArgs) -> std::result::Result<OrthoState, String> {
    let by_f = args.f.is_some() || args.fhat.is_some();
    let by_abc = args.a.is_some() || args.b.is_some() || args.c.is_some();
    if by_f && by_abc {
        return Err("give either --f/--fhat or --a/--b/--c, not both".into());
    }
    if by_f {
        match (args.f, args.fhat) {
            (Some(f), Some(fhat)) => {
                OrthoState::from_ffhat(args.n, f, fhat).map_err(|e| e.to_string())
            }
            _ => Err("both --f and --fhat are required".into()),
        }
    } else if by_abc {
        // a defaults to the trace-condition solution when omitted
        let b = args.b.unwrap_or(0.0);
        let c = args.c.unwrap_or(0.0);
        let nf = args.n as f64;
        let a = args.a.unwrap_or((1.0 - nf * (b + c)) / (nf * nf));
        OrthoState::from_abc(args.n, a, b, c).map_err(|e| e.to_string())
    } else {
        Err("give either --f/--fhat or --a/--b/--c".into())
    }
}

fn cmd_state(args: StateArgs) -> Result<ExitCode> {
    let state = match resolve_state(&args) {
        Ok(s) => s,
        Err(msg) => {
            eprintln!("error: {msg}");
            return Ok(ExitCode::from(2));
        }
    };
    if !state.is_physical() {
        eprintln!(
            "error: {} violated (positivity margin {:.3e})",
            state.tightest_constraint(),
            state.positivity_margin()
        );
        return Ok(ExitCode::from(2));
    }
    let report = measure_report(&state)?;
    let mut out = String::new();
    let _ = writeln!(out, "n = {}", state.n());
    let _ = writeln!(out, "f = {}", num(report.f));
    let _ = writeln!(out, "fhat = {}", num(report.fhat));
    let _ = writeln!(out, "a = {}", num(state.a()));
    let _ = writeln!(out, "b = {}", num(state.b()));
    let _ = writeln!(out, "c = {}", num(state.c()));
    let _ = writeln!(out, "physical = {}", report.physical);
    let _ = writeln!(out, "lqu = {}", num(report.lqu));
    let _ = writeln!(out, "dg_lower = {}", num(report.dg_lower));
    let _ = writeln!(out, "min_upper = {}", num(report.min_upper));
    let _ = writeln!(out, "dg_normalized_lower = {}", num(report.dg_normalized_lower));
    let _ = writeln!(out, "min_normalized_upper = {}", num(report.min_normalized_upper));
    let _ = writeln!(out, "scaled_discord_lower = {}", num(report.scaled_discord_lower));
    let _ = writeln!(out, "negativity = {}", num(report.negativity));
    let _ = writeln!(out, "npt = {}", report.npt);
    if args.oracle {
        let cfg = cfg_from(args.seed, args.restarts);
        let rho = state.density_matrix()?;
        let spectrum = measures::fixed_spectrum(state.n());
        let lqu = oracle_lqu(&rho, &spectrum, &cfg)?;
        let gd = oracle_gd(&rho, (state.n(), state.n()), &cfg)?;
        let mn = oracle_min(&rho, (state.n(), state.n()), &cfg)?;
        let _ = writeln!(out, "oracle_lqu = {}", num(lqu.value));
        let _ = writeln!(out, "oracle_gd = {}", num(gd.value));
        let _ = writeln!(out, "oracle_min = {}", num(mn.value));
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

struct CsvDoc {
    lines: Vec<String>,
}

impl CsvDoc {
    fn new(seed: u64, spec: &str, header: &str) -> Self {
        CsvDoc {
            lines: vec![
                format!("# qcorr {VERSION}"),
                format!("# seed: {seed}"),
                format!("# spec: {spec}"),
                header.to_string(),
            ],
        }
    }

    fn row(&mut self, fields: &[String]) {
        self.lines.push(fields.join(","));
    }

    fn comment(&mut self, text: &str) {
        self.lines.push(format!("# {text}"));
    }

    /// Write the document; failures are user-input errors (exit 2).
    fn write(self, path: &Path) -> std::result::Result<ExitCode, ExitCode> {
        let body = self.lines.join("\n") + "\n";
        match std::fs::write(path, body) {
            Ok(()) => Ok(ExitCode::SUCCESS),
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                Err(ExitCode::from(2))
            }
        }
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode> {
    if args.grid < 2 {
        eprintln!("error: --grid must be at least 2");
        return Ok(ExitCode::from(2));
    }
    if args.n < 2 {
        eprintln!("error: --n must be at least 2");
        return Ok(ExitCode::from(2));
    }
    let n = args.n;
    let nf = n as f64;
    let cfg = cfg_from(args.seed, args.restarts);

    // warm the per-dimension caches before the parallel section
    measures::dg_max_cached(n)?;

    // row-major grid over the bounding rectangle of the physical region
    let mut points = Vec::with_capacity(args.grid * args.grid);
    for i in 0..args.grid {
        let f = -1.0 + 2.0 * i as f64 / (args.grid - 1) as f64;
        for j in 0..args.grid {
            let fhat = nf * j as f64 / (args.grid - 1) as f64;
            points.push((f, fhat));
        }
    }

    let rows: Vec<Option<Vec<String>>> = points
        .par_iter()
        .map(|&(f, fhat)| {
            let state = OrthoState::from_ffhat(n, f, fhat).ok()?;
            if !state.is_physical() {
                return None;
            }
            let report = measure_report(&state).ok()?;
            let mut fields = vec![
                num(report.f),
                num(report.fhat),
                num(report.lqu),
                num(report.dg_lower),
                num(report.min_upper),
                num(report.dg_normalized_lower),
                num(report.min_normalized_upper),
                num(report.scaled_discord_lower),
                num(report.negativity),
                if report.physical { "1" } else { "0" }.to_string(),
                if report.npt { "1" } else { "0" }.to_string(),
            ];
            if args.oracle {
                let rho = state.density_matrix().ok()?;
                let spectrum = measures::fixed_spectrum(n);
                fields.push(num(oracle_lqu(&rho, &spectrum, &cfg).ok()?.value));
                fields.push(num(oracle_gd(&rho, (n, n), &cfg).ok()?.value));
                fields.push(num(oracle_min(&rho, (n, n), &cfg).ok()?.value));
            }
            Some(fields)
        })
        .collect();

    let mut header = "f,fhat,lqu,dg_lower,min_upper,dg_normalized_lower,min_normalized_upper,scaled_discord_lower,negativity,physical,npt".to_string();
    if args.oracle {
        header.push_str(",oracle_lqu,oracle_gd,oracle_min");
    }
    let spec = format!(
        "sweep n={n} grid={} oracle={} restarts={}",
        args.grid, args.oracle, args.restarts
    );
    let mut doc = CsvDoc::new(args.seed, &spec, &header);
    let mut skipped = 0usize;
    for row in rows {
        match row {
            Some(fields) => doc.row(&fields),
            None => skipped += 1,
        }
    }
    doc.comment(&format!("skipped: {skipped}"));
    Ok(doc.write(&args.out).unwrap_or_else(|code| code))
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

fn cmd_figure(args: FigureArgs) -> Result<ExitCode> {
    if args.grid < 2 {
        eprintln!("error: --grid must be at least 2");
        return Ok(ExitCode::from(2));
    }
    let n = 3usize;
    let nf = n as f64;
    let doc = match args.id {
        FigureId::Fig1 => {
            // sign of b1*c1 over the physical region: the branch map of
            // the fixed-spectrum uncertainty formula
            let spec = format!("figure fig1 n=3 grid={}", args.grid);
            let mut doc = CsvDoc::new(args.seed, &spec, "f,fhat,sign_b1c1");
            for f in linspace(-1.0, 1.0, args.grid) {
                for fhat in linspace(0.0, nf, args.grid) {
                    let state = OrthoState::from_ffhat(n, f, fhat)?;
                    if !state.is_physical() {
                        continue;
                    }
                    let sc = state.sqrt_coeffs()?;
                    let prod = sc.b1 * sc.c1;
                    let sign = if prod.abs() <= 1e-12 {
                        0
                    } else if prod > 0.0 {
                        1
                    } else {
                        -1
                    };
                    doc.row(&[num(f), num(fhat), sign.to_string()]);
                }
            }
            doc
        }
        FigureId::Fig2 => {
            let spec = format!("figure fig2 n=3 grid={}", args.grid);
            let mut doc = CsvDoc::new(args.seed, &spec, "b,lqu");
            for b in linspace(-1.0 / 6.0, 1.0 / 12.0, args.grid) {
                doc.row(&[num(b), num(measures::lqu_werner(b)?)]);
            }
            doc
        }
        FigureId::Fig3 => {
            let spec = format!("figure fig3 n=3 grid={}", args.grid);
            let mut doc = CsvDoc::new(args.seed, &spec, "c,lqu");
            for c in linspace(-1.0 / 24.0, 1.0 / 3.0, args.grid) {
                doc.row(&[num(c), num(measures::lqu_isotropic(c)?)]);
            }
            doc
        }
        FigureId::Fig4 => {
            // subclass a = 1/n^2, c = -b: both discord bound endpoints
            // (normalized and scaled) against squared negativity
            let spec = format!("figure fig4 n=3 grid={}", args.grid);
            let mut doc = CsvDoc::new(
                args.seed,
                &spec,
                "b,dg_lower_norm,dg_upper_norm,dt_lower,dt_upper,negativity_sq",
            );
            let norm = normalization_factor(n);
            for b in linspace(-1.0 / 9.0, 1.0 / 18.0, args.grid) {
                let state = OrthoState::from_abc(n, 1.0 / (nf * nf), b, -b)?;
                let lower = gd_lower_bound(&state);
                let upper = min_upper_bound(&state);
                let purity = state.purity();
                let dt_lower = scaled_discord_from_dg(lower, purity, n)?;
                let dt_upper = scaled_discord_from_dg(upper, purity, n)?;
                let neg = measures::negativity(&state.density_matrix()?, (n, n))?;
                doc.row(&[
                    num(b),
                    num(norm * lower),
                    num(norm * upper),
                    num(dt_lower),
                    num(dt_upper),
                    num(neg * neg),
                ]);
            }
            doc
        }
    };
    Ok(doc.write(&args.out).unwrap_or_else(|code| code))
}

fn cmd_selftest(args: SelftestArgs) -> Result<ExitCode> {
    let outcomes = qcorr::selftest::run(args.seed);
    let mut all_ok = true;
    for o in &outcomes {
        let status = if o.passed { "ok  " } else { "FAIL" };
        println!(
            "{status} {} (worst {:.3e}, tolerance {:.1e})",
            o.name, o.worst, o.tolerance
        );
        all_ok &= o.passed;
    }
    if all_ok {
        println!("selftest: {} checks passed", outcomes.len());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("selftest: FAILED");
        Ok(ExitCode::from(1))
    }
}
