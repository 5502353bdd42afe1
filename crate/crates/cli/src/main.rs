use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qudual_core::complementarity::{predictability_of_b, visibility_of_b};
use qudual_core::simultaneous::optimal_entanglement;
use qudual_core::uncertainty::normalized_product;
use qudual_core::{
    distinguishability, duality, entangle, entangled_visibility, estimate_a, estimate_b, mean_var, robertson,
    sample_sharp, sample_simultaneous, simultaneous_product, sweep, verify, write_csv, DensityMatrix, Error, Figure,
    Gauge, Level, SampleReport, VerifyConfig,
};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "qudual", version, about = "Complementarity and uncertainty for two-level systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print single-state quantities
    Compute(ComputeArgs),
    /// Write figure data as CSV
    Sweep(SweepArgs),
    /// Run the built-in invariant suites
    Verify(VerifyArgs),
    /// Run the Monte-Carlo oracles for one state
    Mc(McArgs),
}

#[derive(clap::Args)]
struct ComputeArgs {
    #[arg(long)]
    w_plus: f64,
    /// Off-diagonal magnitude |rho_12|
    #[arg(long, required_unless_present = "pure", conflicts_with = "pure")]
    rho12: Option<f64>,
    /// Use the pure state with this w_plus
    #[arg(long)]
    pure: bool,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Phase of the complementary observable; defaults to theta
    #[arg(long)]
    varrho: Option<f64>,
    /// Meter overlap c for the simultaneous measurement (needs --pure)
    #[arg(long, requires = "pure")]
    c: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    a: f64,
    #[arg(long, default_value_t = 0.5)]
    b: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureArg {
    #[value(name = "1")]
    One,
    #[value(name = "3")]
    Three,
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    figure: FigureArg,
    #[arg(long, default_value_t = 201)]
    points: usize,
    /// Output file; stdout if omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "full")]
    level: LevelArg,
    #[arg(long, env = "QUDUAL_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1.0, hide = true)]
    tolerance_scale: f64,
}

#[derive(clap::Args)]
struct McArgs {
    #[arg(long, default_value_t = 0.9)]
    w_plus: f64,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Meter overlap; defaults to the optimal value for w_plus
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = 1_000_000)]
    n: u64,
    #[arg(long, env = "QUDUAL_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

enum Failure {
    /// Bad parameters: exit 2.
    Invalid(String),
    /// Output could not be written: exit 3.
    Unwritable(String),
    /// A check failed: exit 1.
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(args) => compute(&args),
        Command::Sweep(args) => run_sweep(&args),
        Command::Verify(args) => run_verify(&args),
        Command::Mc(args) => run_mc(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Unwritable(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn line(label: &str, value: f64) {
    println!("{label:<14} {value}");
}

fn compute(args: &ComputeArgs) -> Result<(), Failure> {
    let rho = match args.rho12 {
        Some(r) => DensityMatrix::new(args.w_plus, r, args.theta)?,
        None => DensityMatrix::pure(args.w_plus, args.theta)?,
    };
    let varrho = args.varrho.unwrap_or(rho.theta());
    let gauge = Gauge::new(args.a, args.b)?;
    let (a, b) = (gauge.observable_a(), gauge.observable_b(varrho));
    // Validate c before printing anything.
    let psi = args.c.map(|c| entangle(args.w_plus, args.theta, c)).transpose()?;

    let d = duality(&rho);
    line("P", d.p);
    line("V", d.v);
    line("P^2+V^2", d.sum_sq);
    line("purity", d.purity);
    line("P_B", predictability_of_b(&rho, varrho));
    line("V_B", visibility_of_b(&rho, varrho));
    let ma = mean_var(&rho, &a);
    let mb = mean_var(&rho, &b);
    line("mean_A", ma.mean);
    line("var_A", ma.variance);
    line("mean_B", mb.mean);
    line("var_B", mb.variance);
    let rep = robertson(&rho, &a, &b);
    line("robertson_lhs", rep.lhs);
    line("robertson_rhs", rep.rhs);
    line("product", normalized_product(&rho, &a, &b));

    if let Some(psi) = psi {
        line("c", psi.c());
        line("D", distinguishability(&psi));
        line("V_e", entangled_visibility(&psi));
        if psi.c() > 0.0 && psi.c() < 1.0 {
            let ea = estimate_a(&psi, gauge.a)?;
            let eb = estimate_b(&psi, varrho, gauge.b)?;
            line("var_A'", ea.variance);
            line("var_B'", eb.variance);
        } else {
            println!("{:<14} undefined at c = {}", "var_A'", psi.c());
        }
        let sim = simultaneous_product(args.w_plus, psi.c())?;
        line("sim_product", sim.value);
        line("c_opt", optimal_entanglement(args.w_plus)?.c);
    }
    Ok(())
}

fn run_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let figure = match args.figure {
        FigureArg::One => Figure::Products,
        FigureArg::Three => Figure::Simultaneous,
    };
    let rows = sweep(figure, args.points)?;
    match &args.out {
        Some(path) => {
            let unwritable = |e: io::Error| Failure::Unwritable(format!("cannot write {}: {e}", path.display()));
            let file = File::create(path).map_err(unwritable)?;
            write_csv(&rows, BufWriter::new(file)).map_err(unwritable)
        }
        None => write_csv(&rows, io::stdout().lock()).map_err(|e| Failure::Unwritable(format!("stdout: {e}"))),
    }
}

fn run_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let level = match args.level {
        LevelArg::Fast => Level::Fast,
        LevelArg::Full => Level::Full,
    };
    let report = verify::run(&VerifyConfig { level, seed: args.seed, tolerance_scale: args.tolerance_scale });
    print!("{report}");
    io::stdout().flush().ok();
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn print_report(label: &str, r: &SampleReport) {
    println!(
        "{label:<10} n={} mean={:.6} (analytic {:.6}, z {:+.2}) var={:.6} (analytic {:.6}, z {:+.2}){}",
        r.n,
        r.empirical_mean,
        r.analytic_mean,
        r.z_mean,
        r.empirical_variance,
        r.analytic_variance,
        r.z_variance,
        if r.outlier { "  OUTLIER" } else { "" }
    );
}

fn run_mc(args: &McArgs) -> Result<(), Failure> {
    let rho = DensityMatrix::pure(args.w_plus, args.theta)?;
    let c = match args.c {
        Some(c) => c,
        None => optimal_entanglement(args.w_plus)?.c,
    };
    let psi = entangle(args.w_plus, args.theta, c)?;
    let gauge = Gauge::default();
    let theta = rho.theta();

    let a = sample_sharp(&rho, &gauge.observable_a(), args.n, args.seed)?;
    let b = sample_sharp(&rho, &gauge.observable_b(theta), args.n, args.seed.wrapping_add(1))?;
    let sim = sample_simultaneous(&psi, theta, args.n, args.seed.wrapping_add(2))?;

    println!("seed {} w_plus {} theta {} c {}", args.seed, args.w_plus, theta, c);
    print_report("A", &a);
    print_report("B", &b);
    print_report("A'", &sim.a);
    print_report("B'", &sim.b);
    println!("joint max |z| {:.2}", sim.joint_max_z());

    if [a, b, sim.a, sim.b].iter().any(|r| r.outlier) || sim.joint_max_z() > qudual_core::montecarlo::Z_GATE {
        Err(Failure::Checks)
    } else {
        Ok(())
    }
}
