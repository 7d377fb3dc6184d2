use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use splitwave::{SchemeVariant, TestCase};
use splitwave_cli::{
    cmd_conserve, cmd_convergence, cmd_dispersion, cmd_run, CliError, DtChoice, RunConfig,
};

#[derive(Parser)]
#[command(
    name = "splitwave",
    about = "Mixed and split finite element schemes for the 1D shallow-water wave equations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Flat key=value config file applied before the flag overrides
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scheme variant (p1p1, p1p0, gp1gp1, gp1gp0, gp0gp1, gp0gp0)
    #[arg(long)]
    scheme: Option<SchemeVariant>,
    /// Number of mesh elements
    #[arg(long)]
    n: Option<usize>,
    /// Initial condition (tc1, tc2, tc3, constant)
    #[arg(long)]
    testcase: Option<TestCase>,
    /// Integration time in cycles
    #[arg(long)]
    cycles: Option<f64>,
    /// Time step: auto, paper, or seconds
    #[arg(long)]
    dt: Option<String>,
    /// Fixed-point stopping tolerance
    #[arg(long)]
    epsilon: Option<f64>,
    /// Output directory (defaults to $SPLITWAVE_OUT or .)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Observation stride in steps (0 = every step)
    #[arg(long)]
    stride: Option<usize>,
}

impl RunArgs {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.load_file(path)?;
        }
        if let Some(s) = self.scheme {
            cfg.scheme = s;
        }
        if let Some(n) = self.n {
            if n < 3 {
                return Err(CliError::Config(format!("n must be at least 3, got {n}")));
            }
            cfg.n = n;
        }
        if let Some(tc) = self.testcase {
            cfg.testcase = tc;
        }
        if let Some(c) = self.cycles {
            if c < 0.0 {
                return Err(CliError::Config("cycles must be nonnegative".into()));
            }
            cfg.cycles = c;
        }
        if let Some(dt) = &self.dt {
            cfg.dt = DtChoice::parse(dt)?;
        }
        if let Some(eps) = self.epsilon {
            if eps <= 0.0 {
                return Err(CliError::Config("epsilon must be positive".into()));
            }
            cfg.epsilon = Some(eps);
        }
        if let Some(out) = self.out {
            cfg.out_dir = out;
        }
        if let Some(stride) = self.stride {
            cfg.stride = stride;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one scheme and emit conservation time series + final fields
    Run(RunArgs),
    /// Emit analytic and numeric dispersion curves
    Dispersion {
        /// Comma-separated variants, or "all"
        #[arg(long, default_value = "all")]
        variants: String,
        /// Samples per curve
        #[arg(long, default_value_t = 64)]
        samples: usize,
        /// Output directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Refinement sweep with L2 errors and observed orders
    Convergence {
        #[arg(long, default_value = "gp1gp0")]
        scheme: SchemeVariant,
        #[arg(long, default_value = "tc1")]
        testcase: TestCase,
        /// Integration time in cycles
        #[arg(long, default_value_t = 0.875)]
        cycles: f64,
        /// Comma-separated mesh sizes (each double the previous)
        #[arg(long, default_value = "16,32,64,128")]
        n_list: String,
        /// CFL target for the step choice
        #[arg(long, default_value_t = 0.1)]
        mu: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conservation drift table over schemes
    Conserve {
        /// Comma-separated variants, or "all"
        #[arg(long, default_value = "all")]
        variants: String,
        #[arg(long, default_value = "tc2")]
        testcase: TestCase,
        #[arg(long, default_value_t = 128)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        cycles: f64,
        /// Time step: auto, paper, or seconds
        #[arg(long, default_value = "auto")]
        dt: String,
        /// Use the reference time step (same as --dt paper)
        #[arg(long, default_value_t = false)]
        paper_dt: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_variants(spec: &str) -> Result<Vec<SchemeVariant>, CliError> {
    if spec == "all" {
        return Ok(SchemeVariant::ALL.to_vec());
    }
    spec.split(',')
        .map(|s| s.trim().parse::<SchemeVariant>().map_err(CliError::Config))
        .collect()
}

fn parse_n_list(spec: &str) -> Result<Vec<usize>, CliError> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Config(format!("invalid mesh size: {s}")))
        })
        .collect()
}

fn out_dir(explicit: Option<PathBuf>) -> PathBuf {
    explicit
        .or_else(|| std::env::var_os(splitwave_cli::OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => cmd_run(&args.into_config()?),
        Command::Dispersion {
            variants,
            samples,
            out,
        } => {
            if samples == 0 {
                return Err(CliError::Config("samples must be positive".into()));
            }
            cmd_dispersion(&parse_variants(&variants)?, samples, &out_dir(out))
        }
        Command::Convergence {
            scheme,
            testcase,
            cycles,
            n_list,
            mu,
            out,
        } => {
            if mu <= 0.0 {
                return Err(CliError::Config("mu must be positive".into()));
            }
            cmd_convergence(
                scheme,
                testcase,
                cycles,
                &parse_n_list(&n_list)?,
                mu,
                &out_dir(out),
            )
        }
        Command::Conserve {
            variants,
            testcase,
            n,
            cycles,
            dt,
            paper_dt,
            out,
        } => {
            let dt = if paper_dt {
                DtChoice::Paper
            } else {
                DtChoice::parse(&dt)?
            };
            cmd_conserve(
                &parse_variants(&variants)?,
                testcase,
                n,
                cycles,
                dt,
                &out_dir(out),
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("splitwave: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
