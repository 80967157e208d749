//! Command-line front end: argument parsing, configuration, caching and report
//! emission.

pub mod commands;
pub mod config;
pub mod render;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};
use pbwsplit::multiindex::MonomialOrder;
use pbwsplit::rootsys::Weight;

use crate::commands::{Check, Settings};
use crate::config::{Format, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] pbwsplit::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use pbwsplit::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(E::ResourceCap { .. } | E::RankTooLarge { .. }) => EXIT_RESOURCE,
            CliError::Core(
                E::InvalidCartan(_)
                | E::UnknownLabel(_)
                | E::InvalidPrime(_)
                | E::NotDominant(_)
                | E::WeightRank { .. }
                | E::NotG2(_)
                | E::Parse(_)
                | E::Json(_),
            ) => EXIT_USAGE,
            CliError::Core(_) => EXIT_VERIFICATION,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "pbwsplit",
    version,
    about = "PBW filtrations of Weyl modules and Frobenius-splitting checks"
)]
pub struct Cli {
    /// JSON run configuration; flags override its fields
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// attach wall time and peak memory to reports
    #[arg(long, global = true)]
    pub stats: bool,
    /// dimension cap for modules and tensor products
    #[arg(long, global = true)]
    pub cap: Option<u64>,
    #[arg(long, global = true, env = "PBWSPLIT_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// write the report here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(short, long, global = true, action = ArgAction::Count)]
    pub verbose: u8,
    /// print the JSON report schema and exit
    #[arg(long)]
    pub schema: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args)]
pub struct TypeArgs {
    /// series label such as A2 or G2
    #[arg(long = "type")]
    pub type_label: Option<String>,
    /// JSON file holding a Cartan matrix
    #[arg(long, conflicts_with = "type_label")]
    pub cartan: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Positive roots in the fixed order with heights and pairings
    Roots {
        #[command(flatten)]
        ty: TypeArgs,
    },
    /// Essential multiindices of V(lambda)
    Essential {
        #[command(flatten)]
        ty: TypeArgs,
        /// highest weight(s) in fundamental coordinates, e.g. 1,0
        #[arg(long, value_parser = parse_weight)]
        weight: Vec<Weight>,
        /// primes; omit for the rationals
        #[arg(long, value_delimiter = ',')]
        p: Vec<u64>,
        /// compare with the G2 inequality table
        #[arg(long)]
        oracle: bool,
        /// monomial order on multiindices: revlex (default) or last-index
        #[arg(long, value_parser = parse_order)]
        order: Option<MonomialOrder>,
    },
    /// PBW filtration of V(lambda), or the induced filtration of V(lambda) (x) V(mu)
    Filtration {
        #[command(flatten)]
        ty: TypeArgs,
        /// highest weight(s) in fundamental coordinates, e.g. 1,0
        #[arg(long, value_parser = parse_weight)]
        weight: Vec<Weight>,
        /// primes; omit for the rationals
        #[arg(long, value_delimiter = ',')]
        p: Vec<u64>,
        /// the second tensor factor mu
        #[arg(long, value_parser = parse_weight)]
        tensor: Option<Weight>,
    },
    /// Splitting criteria
    Verify {
        #[command(flatten)]
        ty: TypeArgs,
        /// the G2 verification chain
        #[arg(long, group = "check")]
        g2: bool,
        /// condition (2) on F_0 v (x) F_0 v
        #[arg(long, group = "check")]
        condition2: bool,
        /// F_0 v_gamma has the maximal PBW degree
        #[arg(long, group = "check")]
        v0: bool,
        /// primes to check
        #[arg(long, value_delimiter = ',')]
        p: Vec<u64>,
        /// monomial order on multiindices: revlex (default) or last-index
        #[arg(long, value_parser = parse_order)]
        order: Option<MonomialOrder>,
    },
}

fn parse_weight(s: &str) -> Result<Weight, String> {
    Weight::parse(s).map_err(|e| e.to_string())
}

fn parse_order(s: &str) -> Result<MonomialOrder, String> {
    MonomialOrder::parse(s).map_err(|e| e.to_string())
}

pub(crate) fn weight_csv(w: &Weight) -> String {
    w.coords()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Rendered output and exit status of one invocation.
pub struct Response {
    pub output: String,
    pub code: i32,
}

fn flags_config(cli: &Cli) -> (RunConfig, Option<Check>, bool) {
    let mut c = RunConfig {
        cap: cli.cap,
        cache_dir: cli.cache_dir.clone(),
        format: cli.format,
        verbosity: cli.verbose,
        ..Default::default()
    };
    let set_ty = |ty: &TypeArgs, c: &mut RunConfig| {
        c.type_label = ty.type_label.clone();
        c.cartan = ty.cartan.clone();
    };
    let mut check = None;
    let mut oracle = false;
    match &cli.command {
        Some(Command::Roots { ty }) => set_ty(ty, &mut c),
        Some(Command::Essential {
            ty,
            weight,
            p,
            oracle: o,
            order,
        }) => {
            set_ty(ty, &mut c);
            c.weights = weight.clone();
            c.primes = p.clone();
            c.order = *order;
            oracle = *o;
        }
        Some(Command::Filtration {
            ty,
            weight,
            p,
            tensor,
        }) => {
            set_ty(ty, &mut c);
            c.weights = weight.clone();
            c.primes = p.clone();
            c.tensor = tensor.clone();
        }
        Some(Command::Verify {
            ty,
            g2,
            condition2,
            v0,
            p,
            order,
        }) => {
            set_ty(ty, &mut c);
            c.primes = p.clone();
            c.order = *order;
            check = match (g2, condition2, v0) {
                (true, _, _) => Some(Check::G2),
                (_, true, _) => Some(Check::Condition2),
                (_, _, true) => Some(Check::V0),
                _ => None,
            };
        }
        None => {}
    }
    (c, check, oracle)
}

fn init_logging(verbosity: u8) {
    let level = match verbosity {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .try_init();
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> Result<Response, CliError> {
    if cli.schema {
        let mut output =
            serde_json::to_string_pretty(&pbwsplit::report::schema()).expect("schema serializes");
        output.push('\n');
        return Ok(Response {
            output,
            code: EXIT_OK,
        });
    }
    let (flags, check, oracle) = flags_config(cli);
    let base = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    let config = base.overlay(flags);
    config.validate()?;
    init_logging(config.verbosity);
    let format = config.format.unwrap_or_default();
    let settings = Settings {
        config,
        stats: cli.stats,
    };

    let (output, ok) = match &cli.command {
        None => return Err(CliError::Usage("no command given; see --help".into())),
        Some(Command::Roots { .. }) => {
            let o = commands::cmd_roots(&settings)?;
            (render::render(&o.tables, format)?, o.ok)
        }
        Some(Command::Essential { .. }) => {
            let o = commands::cmd_essential(&settings, oracle)?;
            (render::render(&o.tables, format)?, o.ok)
        }
        Some(Command::Filtration { .. }) => {
            let o = commands::cmd_filtration(&settings)?;
            (render::render(&o.tables, format)?, o.ok)
        }
        Some(Command::Verify { .. }) => {
            let check = check.ok_or_else(|| {
                CliError::Usage("verify needs one of --g2, --condition2, --v0".into())
            })?;
            let o = commands::cmd_verify(&settings, check)?;
            (render::render(&o.tables, format)?, o.ok)
        }
    };
    Ok(Response {
        output,
        code: if ok { EXIT_OK } else { EXIT_VERIFICATION },
    })
}

/// Parses `args`, runs the command and returns the exit code, writing the
/// report to standard output or `--out` and diagnostics to standard error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(resp) => {
            let written = match &cli.out {
                Some(path) => write_atomic(path, resp.output.as_bytes()),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(resp.output.as_bytes())
                }
            };
            if let Err(e) = written {
                eprintln!("error: writing output: {e}");
                return EXIT_USAGE;
            }
            resp.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn write_atomic(path: &std::path::Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(std::path::Path::new("."));
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        e
    })
}
