//! `rainbow`: command-line front end for the solvers and the instance
//! compiler.

mod bench;
mod cmd;
mod out;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rainbow_core::biclique::CoverMode;
use rainbow_core::{Budgets, Config};

use out::{Format, Reporter};

#[derive(Parser, Debug)]
#[command(name = "rainbow", version, about = "Rainbow edge-coloring solvers and SAT instance compiler")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for brute force, subset enumeration and greedy covers.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,
    /// Report style: human text or key=value records.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Brute force runs only below 2^N colorings.
    #[arg(long, global = true)]
    pub brute_force_log2: Option<u32>,
    /// Largest request set for inclusion-exclusion counting.
    #[arg(long, global = true)]
    pub ie_requests: Option<usize>,
    /// Largest side for the greedy biclique cover.
    #[arg(long, global = true)]
    pub greedy_cap: Option<usize>,
    /// Node budget of one branching search.
    #[arg(long, global = true)]
    pub search_nodes: Option<u64>,
    /// Request subsets the maximum solver may try.
    #[arg(long, global = true)]
    pub max_subsets: Option<u64>,
}

impl Global {
    pub fn config(&self) -> rainbow_core::Result<Config> {
        let d = Budgets::default();
        let budgets = Budgets {
            brute_force_log2: self.brute_force_log2.unwrap_or(d.brute_force_log2),
            ie_requests: self.ie_requests.unwrap_or(d.ie_requests),
            greedy_cover_side: self.greedy_cap.unwrap_or(d.greedy_cover_side),
            search_nodes: self.search_nodes.unwrap_or(d.search_nodes),
            max_subsets: self.max_subsets.unwrap_or(d.max_subsets),
            ..d
        };
        let positive = budgets.brute_force_log2 > 0
            && budgets.ie_requests > 0
            && budgets.greedy_cover_side > 0
            && budgets.search_nodes > 0
            && budgets.max_subsets > 0
            && self.workers > 0;
        if !positive {
            return Err(rainbow_core::Error::usage("budgets and --workers must be positive"));
        }
        Ok(Config { budgets, workers: self.workers })
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverChoice {
    Greedy,
    Random,
    Auto,
}

impl From<CoverChoice> for CoverMode {
    fn from(c: CoverChoice) -> CoverMode {
        match c {
            CoverChoice::Greedy => CoverMode::Greedy,
            CoverChoice::Random => CoverMode::Random,
            CoverChoice::Auto => CoverMode::Auto,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverKind {
    /// All pairs of `--n` vertices.
    Complete,
    /// Bipartite complement, greedy construction.
    Greedy,
    /// Bipartite complement, randomized construction.
    Random,
    /// Anti-edges of a graph, guided by a proper vertex coloring.
    Colored,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// Random graph with `--m` edges or edge probability `--p`.
    Graph,
    /// Random graph with up to `--requests` feasible requests.
    Instance,
    /// Random 3-CNF formula.
    Cnf,
    /// Formula with three variables per clause and at most four occurrences.
    Tovey,
    /// Like `tovey`, with a planted model written to `--model`.
    Planted,
    /// Random bipartite graph with capped degrees.
    Bipartite,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide a (subset) rainbow coloring instance; writes a coloring or NULL.
    Solve {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Use the brute-force oracle.
        #[arg(long)]
        brute: bool,
    },
    /// Count the 2-colorings that satisfy every request.
    Count {
        instance: PathBuf,
        /// Use the brute-force oracle.
        #[arg(long)]
        brute: bool,
    },
    /// Report which requests a coloring satisfies.
    Verify { instance: PathBuf, coloring: PathBuf },
    /// Color by conditional expectations over one short path per request.
    Approx {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Shrink a maximum rainbow instance to O(q) vertices.
    Kernelize {
        instance: PathBuf,
        #[arg(short)]
        q: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide whether some coloring satisfies at least q anti-edges.
    Maxsolve {
        instance: PathBuf,
        #[arg(short)]
        q: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build and check a biclique cover.
    Cover {
        #[arg(value_enum)]
        kind: CoverKind,
        /// Graph file; not used by `complete`.
        input: Option<PathBuf>,
        /// Vertex count for `complete`.
        #[arg(long)]
        n: Option<usize>,
        /// The first LEFT vertices form one side of a bipartite input.
        #[arg(long)]
        left: Option<usize>,
        /// Construction for `colored`.
        #[arg(long, value_enum, default_value_t = CoverChoice::Auto)]
        mode: CoverChoice,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile a DIMACS formula into a rainbow coloring instance.
    Reduce {
        cnf: PathBuf,
        /// Last problem: sr2c-ext, srkc-ext, srkc or rkc.
        #[arg(long = "to")]
        target: String,
        #[arg(short, long, default_value_t = 3)]
        k: usize,
        /// Cover construction for request removal.
        #[arg(long, value_enum, default_value_t = CoverChoice::Auto)]
        cover: CoverChoice,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Size report file; printed when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Map a model of the source formula to a coloring of the final instance.
    Lift {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Final instance; the coloring is checked against it.
        #[arg(long)]
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Read a source assignment off a coloring of the final instance.
    Extract {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Seeded random graphs, instances and formulas.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(short, long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        requests: usize,
        #[arg(long, default_value_t = 1)]
        clauses: usize,
        #[arg(long, default_value_t = 4)]
        right: usize,
        #[arg(long, default_value_t = 2)]
        max_deg: usize,
        /// Planted model output for `planted`.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve every instance of a manifest and print a results table.
    Bench {
        manifest: PathBuf,
        /// Leave out wall times so that the table is reproducible.
        #[arg(long)]
        no_time: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let rep = Reporter::new(cli.global.format);
    match cmd::run(&cli, &rep) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            rep.error(&e);
            ExitCode::from(u8::try_from(e.exit_code()).unwrap_or(2))
        }
    }
}
