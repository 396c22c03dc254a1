use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "drh", version, about = "Exact workbench for double ramification hierarchies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct Common {
    /// trivial, hodge, or table=PATH
    #[arg(long, global = true, default_value = "trivial")]
    pub cohft: String,

    /// Largest power of h kept.
    #[arg(long, global = true, default_value_t = 1)]
    pub genus_max: u32,

    /// Largest number of jet variables per monomial.
    #[arg(long, global = true, default_value_t = 3)]
    pub deg_max: u32,

    /// Largest power of e kept; defaults to the genus cap.
    #[arg(long, global = true)]
    pub eps_max: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum Format {
    Plain,
    Latex,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, ValueEnum)]
pub enum Suite {
    All,
    Unit,
    Commutativity,
    String,
    FirstDerivative,
    Dilaton,
    Genus0,
    StringSolution,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the Hamiltonian gbar_{alpha,d}.
    Hamiltonian(Target),
    /// Print the flow of gbar_{alpha,d}.
    Flow(Target),
    /// Print the functional gbar of the unpointed integrals.
    Gbar,
    /// Run verification checks on the windowed hierarchy.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Largest d to build.
        #[arg(long, default_value_t = 2)]
        d_max: u32,
        /// Pairs for the commutativity check, e.g. "1,0:1,1;1,1:1,2";
        /// defaults to all built pairs.
        #[arg(long)]
        pairs: Option<String>,
        /// t-order of the string solution.
        #[arg(long, default_value_t = 3)]
        order: u32,
    },
    /// Print the KdV Hamiltonians from the Lenard recursion.
    Kdv {
        #[arg(long, default_value_t = 5)]
        d_max: u32,
    },
    /// Bracket of two Hamiltonians ("a,d:b,e") or of two densities.
    Bracket {
        #[arg(long, conflicts_with_all = ["f", "g"])]
        pairs: Option<String>,
        #[arg(long, requires = "g")]
        f: Option<String>,
        #[arg(long, requires = "f")]
        g: Option<String>,
    },
    /// Taylor expansion of the string solution and its identity check.
    StringSolution {
        #[arg(long, default_value_t = 3)]
        order: u32,
        #[arg(long, default_value_t = 1)]
        d_max: u32,
    },
}

#[derive(Args, Debug)]
pub struct Target {
    /// Color, starting at 1.
    #[arg(long, default_value_t = 1)]
    pub alpha: usize,
    #[arg(long, default_value_t = 0)]
    pub d: u32,
}
