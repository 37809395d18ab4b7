use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hodge_eds::{CliError, FileConfig, Report, Settings};

#[derive(Parser)]
#[command(
    name = "hodge-eds",
    version,
    about = "Exact computations for period-domain differential systems"
)]
struct Cli {
    /// TOML configuration file; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for all randomized searches and fixtures.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Trial count for randomized searches.
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Largest ambient slice dimension accepted for exact rank computations.
    #[arg(long, global = true)]
    budget: Option<usize>,

    /// Write the JSON report to this path; "-" writes it to stdout instead
    /// of the human-readable rendering.
    #[arg(long, global = true)]
    json: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default, Clone)]
struct SubjectArgs {
    /// Weight n of the Hodge structure.
    #[arg(long)]
    weight: Option<usize>,

    /// Hodge numbers h^{n,0},...,h^{0,n}, comma-separated.
    #[arg(long, value_delimiter = ',')]
    hodge: Option<Vec<usize>>,

    /// Middle polarization form: "orthonormal" (default) or "split".
    #[arg(long)]
    middle: Option<String>,
}

#[derive(Args, Default, Clone)]
struct IntArgs {
    #[command(flatten)]
    subject: SubjectArgs,

    /// Normal-form parameters lambda_1,...,lambda_k (integers).
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<i64>>,

    /// Normal-form parameters mu_1,...,mu_k (integers).
    #[arg(long, value_delimiter = ',')]
    mu: Option<Vec<i64>>,
}

#[derive(Args, Default, Clone)]
struct RingArgs {
    /// Hypersurface degree.
    #[arg(long)]
    d: Option<usize>,

    /// File with a fixture polynomial (one "coeff e1 ... ek" term per line).
    #[arg(long)]
    poly: Option<String>,

    /// Number of polynomial ring variables for Gorenstein fixtures.
    #[arg(long)]
    num_vars: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions and structure constants of the graded algebra and its
    /// period domain.
    DomainInfo(SubjectArgs),
    /// Derived flag of the horizontal system, with containment, equality,
    /// and termination checks.
    DerivedFlag(SubjectArgs),
    /// Integral elements: normal forms, sharp constructions, Cartan's test.
    #[command(subcommand)]
    Integral(IntegralCommand),
    /// Curvature-form identities on a constructed integral element.
    ChernVerify(SubjectArgs),
    /// Refined codimension bound on a seeded Gorenstein fixture.
    NlBound(RingArgs),
    /// Jacobian-ring computations for hypersurface fixtures.
    #[command(subcommand)]
    Jacobian(JacobianCommand),
    /// Run the full built-in verification suite.
    Selftest,
}

#[derive(Subcommand)]
enum IntegralCommand {
    /// Verify integrality and polar geometry of the weight-2 normal form.
    Check(IntArgs),
    /// Build a maximal integral element and compare with the sharp bound.
    Construct(IntArgs),
    /// Run Cartan's test on the weight-2 normal form.
    Cartan(IntArgs),
}

#[derive(Subcommand)]
enum JacobianCommand {
    /// Full sextic-with-plane pipeline: tangent codimension two ways,
    /// sigma, and the quadric rank.
    NlPipeline(RingArgs),
    /// Jacobian-ideal rank ladder against the complete-intersection
    /// Hilbert function.
    Smoothness(RingArgs),
    /// Symmetrizer kernel of the multiplication form for a surface.
    Symmetrizer(RingArgs),
}

impl SubjectArgs {
    fn into_config(self) -> FileConfig {
        FileConfig {
            weight: self.weight,
            hodge: self.hodge,
            middle: self.middle,
            ..FileConfig::default()
        }
    }
}

impl IntArgs {
    fn into_config(self) -> FileConfig {
        FileConfig {
            lambda: self.lambda,
            mu: self.mu,
            ..self.subject.into_config()
        }
    }
}

impl RingArgs {
    fn into_config(self) -> FileConfig {
        FileConfig {
            d: self.d,
            poly: self.poly,
            num_vars: self.num_vars,
            ..FileConfig::default()
        }
    }
}

fn settings(cli: &Cli, flags: FileConfig) -> Result<Settings, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    cfg = cfg.merge(flags);
    cfg = cfg.merge(FileConfig {
        seed: cli.seed,
        trials: cli.trials,
        budget: cli.budget,
        ..FileConfig::default()
    });
    Ok(Settings::from_config(cfg))
}

fn run(cli: Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::DomainInfo(args) => {
            let st = settings(&cli, args.clone().into_config())?;
            hodge_eds::domain_info(&st)
        }
        Command::DerivedFlag(args) => {
            let st = settings(&cli, args.clone().into_config())?;
            hodge_eds::derived_flag(&st)
        }
        Command::Integral(sub) => match sub {
            IntegralCommand::Check(args) => {
                let st = settings(&cli, args.clone().into_config())?;
                hodge_eds::integral_check(&st)
            }
            IntegralCommand::Construct(args) => {
                let st = settings(&cli, args.clone().into_config())?;
                hodge_eds::integral_construct(&st)
            }
            IntegralCommand::Cartan(args) => {
                let st = settings(&cli, args.clone().into_config())?;
                hodge_eds::integral_cartan(&st)
            }
        },
        Command::ChernVerify(args) => {
            let st = settings(&cli, args.clone().into_config())?;
            hodge_eds::chern_verify(&st)
        }
        Command::NlBound(args) => {
            let st = settings(&cli, args.clone().into_config())?;
            hodge_eds::nl_bound(&st)
        }
        Command::Jacobian(sub) => match sub {
            JacobianCommand::NlPipeline(args) => {
                let st = settings(&cli, args.clone().into_config())?;
                hodge_eds::jacobian_nl_pipeline(&st)
            }
            JacobianCommand::Smoothness(args) => {
                let st = settings(&cli, args.clone().into_config())?;
                hodge_eds::jacobian_smoothness(&st)
            }
            JacobianCommand::Symmetrizer(args) => {
                let st = settings(&cli, args.clone().into_config())?;
                hodge_eds::jacobian_symmetrizer(&st)
            }
        },
        Command::Selftest => Ok(hodge_eds::run_selftest()),
    }
}

fn emit(report: &Report, json: Option<&str>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&report.value)
        .map_err(|e| CliError::Failed(e.to_string()))?;
    match json {
        Some("-") => println!("{text}"),
        Some(path) => {
            std::fs::write(path, text.as_bytes())
                .map_err(|e| CliError::Failed(format!("{path}: {e}")))?;
            print!("{}", hodge_eds::render(&report.value));
        }
        None => print!("{}", hodge_eds::render(&report.value)),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json.clone();
    match run(cli) {
        Ok(report) => {
            if let Err(e) = emit(&report, json.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
