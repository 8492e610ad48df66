//! Exact computations over iterated Laurent series fields in positive
//! characteristic: valuations, reduction modulo x^p - x, division checks
//! for symbol products, symbol-length reports and linkage counterexamples.

use clap::{Args, Parser, Subcommand};
use ilsf_cli::run::{self, CliError, CommandKind, OutputFormat, Overrides, RunConfig};

/// Environment variable naming a default config file (TOML with the same
/// keys as the flags: base, p, n, window, budget, format).
const CONFIG_ENV: &str = "ILSF_CONFIG";

#[derive(Parser)]
#[command(name = "ilsf", version, about, long_about = None)]
struct Cli {
    /// Config file path (overrides ILSF_CONFIG)
    #[arg(long, global = true)]
    config: Option<String>,

    #[command(flatten)]
    common: CommonFlags,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonFlags {
    /// Base field descriptor: F2, F4:w^2+w+1, F2(t), or algebraically-closed
    /// where accepted
    #[arg(long, global = true)]
    base: Option<String>,

    /// The prime p
    #[arg(long, global = true)]
    p: Option<u64>,

    /// Number of Laurent variables (or of form slots, per command)
    #[arg(long, global = true)]
    n: Option<u32>,

    /// Per-coordinate exponent window lo..hi, e.g. -2..2
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<String>,

    /// Budget for enumerative searches
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Output format: text or structured
    #[arg(long, global = true)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Valuation and leading coefficient of a Laurent element
    Valuation {
        /// The element, e.g. "a2^-1 + a1"
        #[arg(long)]
        expr: String,
    },
    /// Canonical form of a base-field element modulo x^p - x
    AsReduce {
        /// The element, e.g. "t^-2"
        #[arg(long)]
        expr: String,
    },
    /// Decide whether a product of symbols is a division algebra
    DivisionCheck {
        /// The class, e.g. "[a2^-1,a1)*[a3^-1,a2)"
        #[arg(long)]
        class: String,
        /// Exit nonzero unless the verdict matches: division or not-division
        #[arg(long)]
        expect: Option<String>,
    },
    /// Symbol length of the n-variable tower with a verified witness
    Symlen,
    /// The quadratic-form non-linkage construction over n+1 variables
    LinkageQuad {
        /// Also run the exhaustive isotropy search as corroboration
        #[arg(long)]
        brute_force: bool,
    },
    /// The bilinear-form non-linkage construction over n+1 variables
    LinkageBilinear,
    /// Common (n-1)-fold factor of two monomial Pfister forms (--n is the
    /// variable count)
    CommonFactor {
        /// First slot list, e.g. "<<a1, a2>>"
        #[arg(long)]
        phi: String,
        /// Second slot list, e.g. "<<a2, a3>>"
        #[arg(long)]
        psi: String,
    },
    /// Run the whole reproduction matrix and report pass/fail per item
    ReportAll {
        /// Largest number of variables to exercise
        #[arg(long, default_value_t = 4)]
        max_n: u32,
    },
}

fn main() {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let env_config = std::env::var(CONFIG_ENV).ok();
    let config_path = cli.config.as_deref().or(env_config.as_deref());
    let overrides = Overrides {
        base: cli.common.base,
        p: cli.common.p,
        n: cli.common.n,
        window: cli.common.window,
        budget: cli.common.budget,
        format: cli.common.format,
    };
    let config = RunConfig::resolve(config_path, &overrides)?;
    let kind = match cli.command {
        Command::Valuation { expr } => CommandKind::Valuation { expr },
        Command::AsReduce { expr } => CommandKind::AsReduce { expr },
        Command::DivisionCheck { class, expect } => CommandKind::DivisionCheck { class, expect },
        Command::Symlen => CommandKind::Symlen,
        Command::LinkageQuad { brute_force } => CommandKind::LinkageQuad { brute_force },
        Command::LinkageBilinear => CommandKind::LinkageBilinear,
        Command::CommonFactor { phi, psi } => CommandKind::CommonFactor { phi, psi },
        Command::ReportAll { max_n } => CommandKind::ReportAll { max_n },
    };
    let (report, code) = run::run(&kind, &config)?;
    match config.format {
        OutputFormat::Text => print!("{}", report.render_text()),
        OutputFormat::Structured => println!("{}", report.render_structured()),
    }
    Ok(code)
}
