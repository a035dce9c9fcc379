use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use divlab::io::{read_channel, read_joint, read_pmf};
use divlab::reports::{self, format_sig12, Base, Csv, FigureOptions, GridSpec};
use divlab::tunstall::{build_tree, SourceModel, TreeTarget};
use divlab::{DivergenceKind, Error, Result};

#[derive(Parser)]
#[command(name = "divlab", version, about = "f-divergence bounds, figure sweeps and list-decoding tables")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Logarithm base for reported information quantities: e or 2.
    #[arg(long, global = true, default_value = "e", value_parser = parse_base)]
    base: Base,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override a figure's sweep: a:b:steps or a:b:steps:log.
    #[arg(long, global = true, value_parser = parse_grid)]
    grid: Option<GridSpec>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps (0 picks the machine default).
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the CSV behind figure 1..8.
    Figure { id: u32 },
    /// List-decoding error probability and lower bounds for L = 1..4 (or a supplied joint).
    Table1 {
        /// Joint pmf {"matrix": [[P(x,y)]]} with rows indexed by x.
        #[arg(long)]
        joint: Option<PathBuf>,
    },
    /// Evaluate D(P||Q) for a catalog divergence.
    Eval { kind: String, p: PathBuf, q: PathBuf },
    /// Gap bounds D(P||Q) - D(PW||QW) through a channel {"matrix": [[W(y|x)]]}.
    Sdpi { kind: String, p: PathBuf, q: PathBuf, channel: PathBuf },
    /// Build a Tunstall parse tree and list its leaves.
    Tunstall {
        source: PathBuf,
        #[arg(long, conflicts_with = "codeword_len", required_unless_present = "codeword_len")]
        leaves: Option<usize>,
        /// Codeword length m; the tree gets the largest feasible leaf count not above D^m.
        #[arg(long)]
        codeword_len: Option<u32>,
        #[arg(long, default_value_t = 2)]
        code_alphabet: usize,
    },
    /// Random SDPI sandwich checks across the generator catalog.
    Selfcheck {
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
}

fn parse_base(s: &str) -> std::result::Result<Base, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_grid(s: &str) -> std::result::Result<GridSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Output {
    Csv(Csv),
    Line(String),
}

fn run(global: &Global, command: &Command) -> Result<Output> {
    let kind = |s: &str| s.parse::<DivergenceKind>();
    Ok(match command {
        Command::Figure { id } => {
            Output::Csv(reports::figure(*id, &FigureOptions { base: global.base, grid: global.grid })?)
        }
        Command::Table1 { joint } => Output::Csv(match joint {
            Some(path) => reports::list_table(&read_joint(path)?, 4)?,
            None => reports::table1()?,
        }),
        Command::Eval { kind: k, p, q } => {
            let v = reports::eval(kind(k)?, &read_pmf(p)?, &read_pmf(q)?, global.base)?;
            Output::Line(format_sig12(v))
        }
        Command::Sdpi { kind: k, p, q, channel } => Output::Csv(reports::sdpi_report(
            kind(k)?,
            &read_pmf(p)?,
            &read_pmf(q)?,
            &read_channel(channel)?,
            global.base,
        )?),
        Command::Tunstall { source, leaves, codeword_len, code_alphabet } => {
            let src = SourceModel::new(read_pmf(source)?)?;
            let target = match (leaves, codeword_len) {
                (Some(n), _) => TreeTarget::Leaves(*n),
                (None, Some(m)) => TreeTarget::CodewordLen { m: *m, code_alphabet: *code_alphabet },
                (None, None) => return Err(Error::Input("give --leaves or --codeword-len".into())),
            };
            Output::Csv(reports::tree_csv(&build_tree(&src, target)?))
        }
        Command::Selfcheck { trials } => Output::Csv(reports::selfcheck(global.seed, *trials)?),
    })
}

fn emit(global: &Global, output: Output) -> Result<()> {
    let text = match output {
        Output::Csv(csv) => csv.render(),
        Output::Line(line) => format!("{line}\n"),
    };
    match &global.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.global.workers).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("divlab: cannot start worker pool: {e}");
            return ExitCode::from(1);
        }
    };
    let result = pool.install(|| run(&cli.global, &cli.command)).and_then(|out| emit(&cli.global, out));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("divlab: {e}");
            ExitCode::from(if matches!(e, Error::Io(_)) { 1 } else { 2 })
        }
    }
}
