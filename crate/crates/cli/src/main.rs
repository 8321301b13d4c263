mod commands;

use clap::{Args, Parser, Subcommand, ValueEnum};
use morselab::homology::Coefficients;
use morselab::lc::CensusPredicate;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: morselab::Error },
    #[error(transparent)]
    Library(#[from] morselab::Error),
}

impl CliError {
    /// 3 usage, 4 unreadable or malformed input, 5 library failure.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 3,
            CliError::Io { .. } | CliError::Input { .. } => 4,
            CliError::Library(morselab::Error::UnknownLabel(_) | morselab::Error::Parse { .. }) => 4,
            CliError::Library(_) => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Search budget in node expansions.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    pub budget: u64,
    /// Coefficients: q, z, f2 or fp:<p>.
    #[arg(long, global = true, value_parser = parse_field)]
    pub field: Option<Coefficients>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Reject non-simplicial intermediate results.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

fn parse_field(s: &str) -> Result<Coefficients, String> {
    s.parse()
}

#[derive(Debug, Parser)]
#[command(name = "morselab", version, about = "Discrete Morse theory on simplicial manifolds with boundary")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pseudo-manifold check, f-vector and Euler characteristic.
    Check { input: PathBuf },
    /// Homology over the chosen coefficients (default z).
    Homology {
        input: PathBuf,
        #[arg(long)]
        reduced: bool,
    },
    /// Algebraic depth from link homology (default: q and f2).
    Adepth { input: PathBuf },
    /// Collapsibility onto a vertex.
    Collapse {
        input: PathBuf,
        /// Remove this facet first (comma-separated labels).
        #[arg(long)]
        delete_facet: Option<String>,
        /// Write the certificate here.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Endo-collapsibility: M minus a facet collapses onto the boundary.
    Endo {
        input: PathBuf,
        /// Remove this facet first (comma-separated labels).
        #[arg(long)]
        delete_facet: Option<String>,
        /// Only try this facet.
        #[arg(long)]
        facet: Option<String>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Collapse depth with witness and obstruction.
    Cdepth {
        input: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Hamiltonian depth.
    Hdepth { input: PathBuf },
    /// Boundary-critical (closed: polar) matchings.
    #[command(subcommand)]
    Morse(MorseCommand),
    /// Transfers a matching to the dual block decomposition.
    Dualize {
        input: PathBuf,
        matching: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        /// Write the dual poset here.
        #[arg(long)]
        poset_out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Lifts a boundary-critical matching to the cone.
    Cone {
        input: PathBuf,
        matching: PathBuf,
        #[arg(long, default_value = "apex")]
        apex: String,
        #[arg(long)]
        complex_out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Patches equatorial matchings on two pieces glued along a shared ridge.
    Patch {
        first: PathBuf,
        second: PathBuf,
        /// Shared ridge (comma-separated labels).
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        complex_out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Transfers a matching to the barycentric subdivision.
    Subdivide {
        input: PathBuf,
        matching: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long)]
        complex_out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Assembly and disassembly of LC gluing scripts.
    #[command(subcommand)]
    Lc(LcCommand),
    /// Enumerates trees of simplices or LC complexes and compares with the bounds.
    Census {
        #[arg(short = 'd')]
        d: usize,
        #[arg(short = 'N')]
        n: usize,
        #[arg(long, value_enum, default_value_t = PredicateArg::Trees)]
        predicate: PredicateArg,
        #[arg(long, default_value_t = 0)]
        max_free: usize,
        /// Emit one JSON line per finished tree on stderr.
        #[arg(long)]
        progress: bool,
    },
    /// Closed-form counting bounds.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Instance generators; facets go to stdout unless --out is given.
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// Shellable, constructible, endo-collapsible, LC and the three depths.
    Hierarchy { input: PathBuf },
    /// Re-validates a certificate against a complex or poset file.
    ValidateCert { input: PathBuf, cert: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    BcToPlain,
    PlainToBc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PredicateArg {
    Trees,
    Lc,
    LcClosed,
}

impl From<PredicateArg> for CensusPredicate {
    fn from(p: PredicateArg) -> Self {
        match p {
            PredicateArg::Trees => CensusPredicate::Trees,
            PredicateArg::Lc => CensusPredicate::Lc,
            PredicateArg::LcClosed => CensusPredicate::LcClosed,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum MorseCommand {
    /// Builds a boundary-critical matching (polar on closed input).
    BuildBc {
        input: PathBuf,
        /// Critical facet (default: the first facet).
        #[arg(long)]
        facet: Option<String>,
        /// Critical vertex for closed input (default: first vertex of the facet).
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Validates a matching and checks the (relative) Morse inequalities.
    Verify {
        input: PathBuf,
        matching: PathBuf,
        /// Compare with plain instead of relative counts.
        #[arg(long)]
        absolute: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum LcCommand {
    /// Runs a gluing script.
    Assemble {
        script: PathBuf,
        #[arg(long)]
        complex_out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Cuts a manifold with an equatorial or polar matching into a gluing script.
    Disassemble {
        input: PathBuf,
        matching: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BoundsCommand {
    /// Number of trees of N d-simplices, an upper bound.
    FussCatalan {
        #[arg(short = 'd')]
        d: u64,
        #[arg(short = 'N')]
        n: u64,
    },
    /// Upper bound on LC types with N facets and m critical (d-1)-cells.
    Enumeration {
        #[arg(short = 'd')]
        d: u64,
        #[arg(short = 'N')]
        n: u64,
        #[arg(short = 'm', default_value_t = 0)]
        m: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenerateCommand {
    /// Grid ball with a drilled tube.
    Furch {
        #[arg(long, value_enum, default_value_t = KnotArg::Trefoil)]
        knot: KnotArg,
        /// Grid size for the straight tube.
        #[arg(long, default_value_t = 5)]
        size: i32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pile of a x b x c cubes, minus interior cubes given as x,y,z.
    Pile {
        a: i32,
        b: i32,
        c: i32,
        #[arg(long = "remove")]
        remove: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random tree of N d-simplices.
    Tree {
        #[arg(short = 'd')]
        d: usize,
        #[arg(short = 'N')]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stacked d-sphere with n stacking steps.
    StackedSphere {
        #[arg(short = 'd')]
        d: usize,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KnotArg {
    Trefoil,
    Straight,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match commands::run(&cli) {
        Ok(out) => {
            let text = match (out.raw, cli.global.format) {
                (Some(raw), _) => raw,
                (None, Format::Json) => serde_json::to_string_pretty(&out.report).expect("reports serialize") + "\n",
                (None, Format::Text) => commands::render_text(&out.report),
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
