//! `cayley`: classify Cayley digraphs on cyclic and dihedral groups, run
//! exhaustive sweeps, and check the NNN verdict tables.

mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use cayley_core::aut::cayley_automorphism_group;
use cayley_core::cayley::CayleyDigraph;
use cayley_core::classify::{classify_with, Classification, ClassifyOptions};
use cayley_core::construct::{lemma41_digraph, lemma41_witness};
use cayley_core::group::GroupSpec;
use cayley_core::perm::{Perm, DEFAULT_ELEMENT_CAP};
use cayley_core::sweep::{sweep_with_progress, SweepMode, SweepOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "cayley", version, about = "NNN and CI classification of Cayley digraphs")]
struct Cli {
    /// Worker threads for sweeps.
    #[arg(long, global = true, env = "CAYLEY_JOBS")]
    jobs: Option<usize>,

    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Suppress progress messages.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify one Cayley digraph.
    Classify(InstanceArgs),
    /// Print the automorphism group of one Cayley digraph.
    Aut(InstanceArgs),
    /// Classify every connection set of a group, as JSON lines.
    Sweep(SweepArgs),
    /// Build the dihedral NNN construction and its witness.
    Construct(ConstructArgs),
    /// Check a theorem's verdict table by exhaustive sweeps.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct InstanceArgs {
    /// Group as family:n, e.g. cyclic:12 or dihedral:6.
    #[arg(long)]
    group: GroupSpec,

    /// Comma-separated element codes (dihedral a^i b is n + i).
    #[arg(long, allow_hyphen_values = true)]
    set: String,

    /// Read --set as words such as a^3*b instead of codes.
    #[arg(long)]
    symbolic: bool,

    /// Largest automorphism group enumerated for the census.
    #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
    cap: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Digraph,
    Graph,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    group: GroupSpec,

    #[arg(long, value_enum, default_value = "digraph")]
    mode: ModeArg,

    /// One connection set per Aut(G)-orbit.
    #[arg(long)]
    reduce: bool,

    #[arg(long, default_value_t = DEFAULT_ELEMENT_CAP)]
    cap: usize,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    /// The dihedral family {a, a^-1, b, ...} with its regular witness.
    #[arg(long, required = true)]
    lemma41: bool,

    /// Half the group order: the group is D_2n.
    #[arg(long)]
    n: usize,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// 1: no cyclic group admits an NNN digraph. 2: D_2n admits one exactly for
    /// even n >= 6 with n != 8.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    theorem: u8,

    /// Largest n swept.
    #[arg(long)]
    max_n: usize,
}

/// Failures, split by exit status.
enum Failure {
    Usage(anyhow::Error),
    Internal(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Internal(e.into())
    }
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn parse_set(group: &GroupSpec, text: &str, symbolic: bool) -> Result<Vec<usize>, Failure> {
    let mut codes = Vec::new();
    for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let code = if symbolic {
            group.parse_elem(token).map_err(usage)?.code()
        } else {
            token
                .parse::<usize>()
                .map_err(|_| usage(anyhow!("bad element code {token:?}")))?
        };
        codes.push(code);
    }
    group.connection_set(&codes).map_err(usage)?;
    Ok(codes)
}

fn open_output(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json_line(out: &mut dyn Write, value: &impl Serialize) -> anyhow::Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// A progress callback printing roughly every tenth of the way.
fn progress_printer(label: String, quiet: bool) -> impl Fn(usize, usize) + Sync {
    move |done, total| {
        if quiet {
            return;
        }
        let step = (total / 10).max(1);
        if done % step == 0 || done == total {
            eprintln!("{label}: {done}/{total}");
        }
    }
}

#[derive(Serialize)]
struct WitnessJson<'a> {
    generators: Vec<&'a Perm>,
    order: usize,
    regular: bool,
    x_order: u64,
    dihedral_relation: bool,
    normal_in_aut: bool,
}

#[derive(Serialize)]
struct ConstructJson<'a> {
    n: usize,
    group: GroupSpec,
    set: Vec<usize>,
    witness: WitnessJson<'a>,
    classification: Classification,
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let quiet = cli.quiet;
    let mut out = open_output(&cli.out)?;
    let status = match cli.command {
        Command::Classify(args) => {
            let set = parse_set(&args.group, &args.set, args.symbolic)?;
            let record = classify_with(args.group, &set, ClassifyOptions { cap: args.cap })?;
            write_json_line(&mut out, &record)?;
            ExitCode::SUCCESS
        }
        Command::Aut(args) => {
            let set = parse_set(&args.group, &args.set, args.symbolic)?;
            let digraph = CayleyDigraph::from_codes(args.group, &set).map_err(usage)?;
            write_json_line(&mut out, &cayley_automorphism_group(&digraph))?;
            ExitCode::SUCCESS
        }
        Command::Sweep(args) => {
            let options = SweepOptions {
                mode: match args.mode {
                    ModeArg::Digraph => SweepMode::Digraph,
                    ModeArg::Graph => SweepMode::Graph,
                },
                reduce: args.reduce,
                classify: ClassifyOptions { cap: args.cap },
            };
            let progress = progress_printer(format!("sweep {}", args.group), quiet);
            let result = sweep_with_progress(&args.group, options, &progress).map_err(|e| match e {
                cayley_core::sweep::SweepError::TooLarge(_) => usage(e),
                other => other.into(),
            })?;
            result.write_jsonl(&mut out)?;
            ExitCode::SUCCESS
        }
        Command::Construct(args) => {
            let witness = lemma41_witness(args.n).map_err(usage)?;
            let digraph = lemma41_digraph(args.n)?;
            let aut = cayley_automorphism_group(&digraph);
            let check = witness.check(&aut)?;
            let classification = classify_with(*digraph.group(), &digraph.codes(), ClassifyOptions::default())?;
            let record = ConstructJson {
                n: args.n,
                group: *digraph.group(),
                set: digraph.codes(),
                witness: WitnessJson {
                    generators: vec![&witness.x, &witness.y],
                    order: check.order,
                    regular: check.regular,
                    x_order: check.x_order,
                    dihedral_relation: check.dihedral_relation,
                    normal_in_aut: check.normal_in_aut,
                },
                classification,
            };
            write_json_line(&mut out, &record)?;
            ExitCode::SUCCESS
        }
        Command::Verify(args) => {
            let verified = verify::run(args.theorem, args.max_n, quiet, &mut out)?;
            if verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    };
    out.flush().map_err(anyhow::Error::from)?;
    Ok(status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        pool = pool.num_threads(jobs);
    }
    let pool = match pool.build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
