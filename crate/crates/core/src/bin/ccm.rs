use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ccmatrix::cli::experiment::{ExperimentSpec, DEFAULT_REPLICATES, DEFAULT_SIZES};
use ccmatrix::cli::sweep::{SweepMode, SweepSpec};
use ccmatrix::cli::{cmd_compress, cmd_constant_comparison, cmd_decompress, cmd_experiment, cmd_info, cmd_sweep};
use ccmatrix::vlb::DEFAULT_STRIDE;
use ccmatrix::{BitLengthDist, Error, KPolicy, Method, Order};

#[derive(Parser)]
#[command(name = "ccm", version, about = "Bit-packed integer matrices and compression-efficiency experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pack a text matrix into a CCM1 container.
    Compress {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Sm)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = OrderArg::Row)]
        order: OrderArg,
        #[arg(long, default_value_t = DEFAULT_STRIDE)]
        stride: usize,
    },
    /// Unpack a container to a text matrix.
    Decompress {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print the efficiency report of a container.
    Info { input: PathBuf },
    /// Replicated efficiency experiment written as CSV.
    Experiment(ExperimentArgs),
    /// Beta-mixture parameter sweep written as CSV.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Sm,
    Vlb,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Row,
    Col,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistArg {
    Uniform,
    Binomial,
    Poisson,
    BetaMixture,
    Constant,
    TwoPoint,
}

#[derive(Clone, Copy, ValueEnum)]
enum KArg {
    Fixed7,
    Derived,
}

impl From<KArg> for KPolicy {
    fn from(k: KArg) -> Self {
        match k {
            KArg::Fixed7 => KPolicy::Fixed7,
            KArg::Derived => KPolicy::Derived,
        }
    }
}

#[derive(Args)]
struct DistParams {
    #[arg(long, value_enum)]
    dist: Option<DistArg>,
    /// Uniform lower bound; first length of two-point.
    #[arg(long)]
    a: Option<u32>,
    /// Uniform upper bound; constant length; second length of two-point.
    #[arg(long)]
    b: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    /// Binomial success probability; two-point probability of `a`.
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    beta1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
    #[arg(long)]
    beta2: Option<f64>,
    #[arg(long)]
    w: Option<f64>,
}

impl DistParams {
    fn build(&self) -> Result<BitLengthDist, Error> {
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required for this distribution")))
        };
        let need_u = |v: Option<u32>, name: &str| {
            v.ok_or_else(|| Error::InvalidParameter(format!("--{name} is required for this distribution")))
        };
        let dist = match self.dist {
            None => return Err(Error::InvalidParameter("pass --table, --fig or --dist".into())),
            Some(DistArg::Uniform) => BitLengthDist::Uniform {
                a: self.a.unwrap_or(1),
                b: self.b.unwrap_or(64),
            },
            Some(DistArg::Binomial) => BitLengthDist::Binomial {
                n: self.n.unwrap_or(64),
                p: self.p.unwrap_or(0.5),
            },
            Some(DistArg::Poisson) => BitLengthDist::PoissonTrunc {
                lambda: need(self.lambda, "lambda")?,
            },
            Some(DistArg::BetaMixture) => BitLengthDist::BetaMixture {
                alpha1: need(self.alpha1, "alpha1")?,
                beta1: need(self.beta1, "beta1")?,
                alpha2: self.alpha2.or(self.alpha1).unwrap_or(1.0),
                beta2: self.beta2.or(self.beta1).unwrap_or(1.0),
                w: self.w.unwrap_or(0.5),
            },
            Some(DistArg::Constant) => BitLengthDist::Constant(need_u(self.b, "b")?),
            Some(DistArg::TwoPoint) => BitLengthDist::TwoPoint {
                b1: need_u(self.a, "a")?,
                b2: need_u(self.b, "b")?,
                p1: need(self.p, "p")?,
            },
        };
        dist.validate()?;
        Ok(dist)
    }
}

#[derive(Args)]
struct ExperimentArgs {
    /// Preset bit-length table: 3 (uniform), 4 (binomial) or 5 (Poisson).
    #[arg(long, conflicts_with = "fig")]
    table: Option<u32>,
    /// Preset figure data: 6 (single-Beta sweep) or 19 (constant bit length).
    #[arg(long)]
    fig: Option<u32>,
    #[command(flatten)]
    dist: DistParams,
    /// Sample sizes; repeat or comma-separate.
    #[arg(long, value_delimiter = ',')]
    size: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    replicates: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = KArg::Fixed7)]
    k: KArg,
    /// Matrix shape used by `--fig 19`.
    #[arg(long, default_value_t = 100)]
    rows: usize,
    #[arg(long, default_value_t = 100)]
    cols: usize,
    #[arg(long)]
    csv: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 1.0)]
    start: f64,
    #[arg(long, default_value_t = 64.0)]
    end: f64,
    #[arg(long, default_value_t = 4.0)]
    step: f64,
    #[arg(long, default_value_t = 0.5)]
    w: f64,
    /// Sweep (alpha, beta) of a single Beta instead of the 4-parameter mixture.
    #[arg(long)]
    single: bool,
    /// Bit lengths drawn per grid point.
    #[arg(long, default_value_t = 10_000)]
    size: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = KArg::Fixed7)]
    k: KArg,
    #[arg(long)]
    csv: PathBuf,
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Compress {
            input,
            output,
            method,
            order,
            stride,
        } => {
            let method = match method {
                MethodArg::Sm => Method::Sm,
                MethodArg::Vlb => Method::Vlb,
            };
            let order = match order {
                OrderArg::Row => Order::RowMajor,
                OrderArg::Col => Order::ColMajor,
            };
            println!("{}", cmd_compress(&input, method, order, stride, &output)?);
        }
        Command::Decompress { input, output } => cmd_decompress(&input, &output)?,
        Command::Info { input } => print!("{}", cmd_info(&input)?),
        Command::Experiment(args) => {
            let sizes = if args.size.is_empty() {
                DEFAULT_SIZES.to_vec()
            } else {
                args.size.clone()
            };
            match (args.table, args.fig) {
                (Some(t), _) => {
                    let mut spec = ExperimentSpec::table(t, sizes, args.replicates, args.seed)?;
                    spec.k_policy = args.k.into();
                    cmd_experiment(&spec, &args.csv)?;
                }
                (None, Some(6)) => {
                    let spec = SweepSpec {
                        mode: SweepMode::Single,
                        sample_size: args.size.first().copied().unwrap_or(10_000),
                        seed: args.seed,
                        k_policy: args.k.into(),
                        ..SweepSpec::default()
                    };
                    report_sweep(&spec, &args.csv)?;
                }
                (None, Some(19)) => cmd_constant_comparison(args.rows, args.cols, args.seed, &args.csv)?,
                (None, Some(f)) => {
                    return Err(Error::InvalidParameter(format!("no figure preset {f}; use 6 or 19")));
                }
                (None, None) => {
                    let mut spec = ExperimentSpec::single(args.dist.build()?, sizes, args.replicates, args.seed);
                    spec.k_policy = args.k.into();
                    cmd_experiment(&spec, &args.csv)?;
                }
            }
        }
        Command::Sweep(args) => {
            let spec = SweepSpec {
                mode: if args.single { SweepMode::Single } else { SweepMode::Mixture },
                start: args.start,
                end: args.end,
                step: args.step,
                w: args.w,
                sample_size: args.size,
                seed: args.seed,
                k_policy: args.k.into(),
            };
            report_sweep(&spec, &args.csv)?;
        }
    }
    Ok(())
}

fn report_sweep(spec: &SweepSpec, csv: &std::path::Path) -> Result<(), Error> {
    let result = cmd_sweep(spec, csv)?;
    println!(
        "grid points: {}\nsm favored: {} ({:.4}%)\nvlb favored: {}",
        result.points.len(),
        result.sm_favored(),
        result.sm_share_percent(),
        result.points.len() - result.sm_favored()
    );
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
