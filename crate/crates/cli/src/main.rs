use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rookposet::corpus::CorpusSpec;
use rookposet::poset::{build_poset_bounded, poincare_polynomial, BoardPoset, CoatomView, JsonPoset, OracleError};
use rookposet::verify::{run_all, Corpus};
use rookposet::{
    avoids_312, equivalent, lower_bruhat_interval, reconstruct_with, top_permutation, IsoOracle, Partition,
    Permutation, PermutationError, Poset, ReconstructError, ReconstructOptions,
};

const YES: u8 = 0;
const NO: u8 = 1;
const PARSE: u8 = 2;
const RESOURCE: u8 = 3;
const INCONSISTENT: u8 = 4;

/// Rook posets of Ferrers boards.
///
/// Boards are written as weakly increasing parts ("3,3,5,6,6") or as GJW
/// sequences ("g:2,1,2,2,1").
#[derive(Parser)]
#[command(name = "rookposet", version)]
struct Cli {
    /// Largest poset built or compared.
    #[arg(long, global = true, default_value_t = 5000)]
    max_elements: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the block normal form of a board.
    NormalForm { board: String },
    /// Decide whether two boards have isomorphic rook posets.
    Equiv {
        a: String,
        b: String,
        /// Also compare the posets with the brute-force oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Emit the rook poset of a board.
    Poset {
        board: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the rank generating function of the rook poset.
    Poincare { board: String },
    /// Emit the entanglement forest of the coatoms as DOT.
    Entangle {
        board: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print the top permutation of a board and whether it avoids 312.
    Perm { board: String },
    /// Emit the lower Bruhat interval below a permutation such as "[3,2,1]".
    Interval {
        permutation: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Recover the normal form from a JSON poset ("-" reads stdin).
    Reconstruct {
        path: PathBuf,
        /// Confirm the answer with the oracle.
        #[arg(long)]
        verify: bool,
    },
    /// Run the invariant suites over every small board.
    Verify {
        #[arg(long, default_value_t = 4)]
        max_rows: usize,
        #[arg(long, default_value_t = 200)]
        max_poset_size: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl ToString) -> Self {
        Self { code, message: message.to_string() }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::new(RESOURCE, e)
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let max = cli.max_elements;
    match &cli.command {
        Command::NormalForm { board } => {
            println!("{}", parse_board(board)?.gjw().normal_form());
            Ok(YES)
        }
        Command::Equiv { a, b, oracle } => equiv(a, b, *oracle, max),
        Command::Poset { board, format, output } => {
            let poset = build(&parse_board(board)?, max)?;
            emit(&render(poset.poset(), *format), output.as_deref())
        }
        Command::Poincare { board } => {
            println!("{}", poincare_polynomial(build(&parse_board(board)?, max)?.poset()));
            Ok(YES)
        }
        Command::Entangle { board, output } => {
            let poset = build(&parse_board(board)?, max)?;
            let rows = poset.coatom_rows();
            let graph = CoatomView::new(poset.poset()).entanglement_graph();
            let dot = graph.to_dot(|c| {
                let row = rows.iter().find(|&&(_, x)| x == c).map_or(0, |&(r, _)| r);
                format!("row {row}: {}", poset.poset().label(c))
            });
            emit(&dot, output.as_deref())
        }
        Command::Perm { board } => {
            let w = top_permutation(&parse_board(board)?);
            println!("{w}");
            println!("avoids 312: {}", if avoids_312(&w) { "yes" } else { "no" });
            Ok(YES)
        }
        Command::Interval { permutation, format, output } => {
            let w: Permutation = permutation.parse().map_err(|e: PermutationError| Failure::new(PARSE, e))?;
            let interval = lower_bruhat_interval(&w, max).map_err(|e| Failure::new(RESOURCE, e))?;
            emit(&render(&interval, *format), output.as_deref())
        }
        Command::Reconstruct { path, verify } => reconstruct(path, *verify, max),
        Command::Verify { max_rows, max_poset_size } => verify(*max_rows, *max_poset_size, max),
    }
}

fn parse_board(text: &str) -> Result<Partition, Failure> {
    text.parse().map_err(|e| Failure::new(PARSE, e))
}

fn build(board: &Partition, max: usize) -> Result<BoardPoset, Failure> {
    Ok(build_poset_bounded(board, max)?)
}

fn render(poset: &Poset, format: Format) -> String {
    match format {
        Format::Json => JsonPoset::from_poset(poset).to_json_string() + "\n",
        Format::Dot => poset.to_dot(),
    }
}

fn emit(text: &str, output: Option<&Path>) -> Outcome {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(YES)
}

fn equiv(a: &str, b: &str, oracle: bool, max: usize) -> Outcome {
    let (p, q) = (parse_board(a)?, parse_board(b)?);
    let eq = equivalent(&p, &q);
    println!("{}", if eq { "equivalent" } else { "inequivalent" });
    if oracle {
        let (pp, pq) = (build(&p, max)?, build(&q, max)?);
        let iso = IsoOracle::new(max).are_isomorphic(pp.poset(), pq.poset())?;
        println!("oracle: {}", if iso { "isomorphic" } else { "not isomorphic" });
        println!("{}", if iso == eq { "agreement" } else { "disagreement" });
    }
    Ok(if eq { YES } else { NO })
}

fn reconstruct(path: &Path, verify: bool, max: usize) -> Outcome {
    let text = if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        fs::read_to_string(path)
    }
    .map_err(|e| Failure::new(PARSE, format!("{}: {e}", path.display())))?;
    let inconsistent = |reason: String| {
        println!("not a rook poset: {reason}");
        Ok(INCONSISTENT)
    };
    let poset = match JsonPoset::parse(&text).and_then(|j| j.to_poset()) {
        Ok(p) => p,
        Err(e) if e.is_malformed() => return Err(Failure::new(PARSE, e)),
        Err(e) => return inconsistent(e.to_string()),
    };
    let options = ReconstructOptions { max_elements: max, verify, ..Default::default() };
    match reconstruct_with(&poset, &options) {
        Ok(r) => {
            println!("{}", r.normal_form);
            Ok(YES)
        }
        Err(ReconstructError::Inconsistent(step)) => inconsistent(step.to_string()),
        Err(e) => Err(Failure::new(RESOURCE, e)),
    }
}

fn verify(max_rows: usize, max_poset_size: u64, max: usize) -> Outcome {
    if max_rows == 0 || max_poset_size == 0 {
        return Err(Failure::new(PARSE, "corpus bounds must be positive"));
    }
    let corpus = Corpus::build(CorpusSpec { max_rows, max_poset_size }, IsoOracle::new(max));
    println!("corpus: {} boards, {} pairs with equal rank sizes", corpus.len(), corpus.pairs().len());
    let mut ok = true;
    for report in run_all(&corpus) {
        ok &= report.passed();
        println!("{report}");
    }
    Ok(if ok { YES } else { NO })
}
