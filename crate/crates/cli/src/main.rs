use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use bdnsat::backdoor::{find_backdoor, parse_backdoor, serialize_backdoor, ASSIGNMENT_LIMIT};
use bdnsat::encoding::{emit_dimacs, emit_var_map, Mode, QuerySpec};
use bdnsat::mincheck::{check_answer_set, MinCheckOutcome};
use bdnsat::oracle::enumerate_answer_sets;
use bdnsat::reasoning::{auto_backdoor, decide, encode, Answer};
use bdnsat::solver::SolverConfig;
use bdnsat::{parse_program, AtomSet, Program};

const EXIT_YES: u8 = 10;
const EXIT_NO: u8 = 20;
const EXIT_UNKNOWN: u8 = 30;
const EXIT_ERROR: u8 = 1;

/// Brave and skeptical reasoning for disjunctive programs via Normal-backdoors.
#[derive(Debug, Parser)]
#[command(name = "bdnsat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print program statistics.
    Parse {
        file: PathBuf,
        /// Also print the program after ingestion.
        #[arg(long)]
        print: bool,
    },
    /// Print a smallest strong Normal-backdoor.
    Backdoor {
        file: PathBuf,
        #[arg(long, default_value_t = ASSIGNMENT_LIMIT)]
        max_k: usize,
    },
    /// Decide whether a set of atoms is an answer set.
    Check {
        file: PathBuf,
        /// Comma-separated atoms; empty for the empty set.
        #[arg(long, allow_hyphen_values = true)]
        model: String,
        #[command(flatten)]
        backdoor: BackdoorArg,
        /// Print the outcome for each backdoor subset.
        #[arg(long)]
        verbose: bool,
    },
    /// List all answer sets by brute force.
    Enumerate {
        file: PathBuf,
        /// Lift the atom-count guard.
        #[arg(long)]
        force: bool,
    },
    /// Write the CNF for a brave or skeptical query.
    Encode {
        file: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        backdoor: BackdoorArg,
        #[arg(long)]
        out: PathBuf,
        /// Variable-map sidecar.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Answer a brave or skeptical query (exit 10 yes, 20 no, 30 unknown).
    Solve {
        file: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        backdoor: BackdoorArg,
        /// External solver; defaults to $BDNSAT_SOLVER, then the built-in solver.
        #[arg(long)]
        solver: Option<PathBuf>,
        /// Solver timeout in seconds.
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
    },
    /// Backdoor-size table for several programs.
    Stats {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = ASSIGNMENT_LIMIT)]
        max_k: usize,
    },
}

#[derive(Debug, Args)]
struct QueryArgs {
    /// brave or skeptical
    #[arg(long)]
    mode: Mode,
    #[arg(long)]
    atom: String,
}

#[derive(Debug, Args)]
struct BackdoorArg {
    /// Comma-separated backdoor atoms; detected automatically if omitted.
    #[arg(long, conflicts_with = "backdoor_file")]
    backdoor: Option<String>,
    /// File with one backdoor atom per line.
    #[arg(long)]
    backdoor_file: Option<PathBuf>,
}

impl BackdoorArg {
    fn resolve(&self, p: &Program) -> Result<AtomSet> {
        let text = match (&self.backdoor, &self.backdoor_file) {
            (Some(s), _) => s.clone(),
            (None, Some(path)) => read_input(path)?,
            (None, None) => return Ok(auto_backdoor(p)?),
        };
        Ok(parse_backdoor(p, &text)?)
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading standard input")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(path: &Path) -> Result<Program> {
    let text = read_input(path)?;
    parse_program(&text).with_context(|| path.display().to_string())
}

fn parse_model(p: &Program, list: &str) -> Result<AtomSet> {
    let names = list.split(',').map(str::trim).filter(|s| !s.is_empty());
    Ok(p.set_from_names(names)?)
}

fn query_spec(p: &Program, q: &QueryArgs) -> Result<QuerySpec> {
    match p.table().get(&q.atom) {
        Some(a) => Ok(QuerySpec::new(q.mode, a)),
        None => bail!("unknown atom `{}`", q.atom),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_parse(file: &Path, print: bool, out: &mut impl Write) -> Result<()> {
    let p = load(file)?;
    let f = p.flags();
    writeln!(out, "atoms: {}", p.atoms_used().len())?;
    writeln!(out, "rules: {}", p.len())?;
    writeln!(out, "normal: {}", yes_no(f.normal))?;
    writeln!(out, "horn: {}", yes_no(f.horn))?;
    writeln!(out, "negation-free: {}", yes_no(f.negation_free))?;
    writeln!(out, "tight: {}", yes_no(f.tight))?;
    writeln!(
        out,
        "tautologies removed: {}",
        p.ingest_report().tautologies_removed
    )?;
    if print {
        write!(out, "{p}")?;
    }
    Ok(())
}

fn cmd_backdoor(file: &Path, max_k: usize, out: &mut impl Write) -> Result<()> {
    let p = load(file)?;
    match find_backdoor(&p, max_k) {
        Some(b) => write!(out, "{}", serialize_backdoor(b.atoms(), p.table()))?,
        None => writeln!(out, "none within {max_k}")?,
    }
    Ok(())
}

fn cmd_check(
    file: &Path,
    model: &str,
    backdoor: &BackdoorArg,
    verbose: bool,
    out: &mut impl Write,
) -> Result<()> {
    let p = load(file)?;
    let m = parse_model(&p, model)?;
    let x = backdoor.resolve(&p)?;
    let report = check_answer_set(&p, &m, &x)?;
    writeln!(out, "answer set: {}", yes_no(report.is_answer_set))?;
    if !report.is_model {
        writeln!(out, "reason: not a model of the reduct")?;
    } else if let Some(fail) = report.first_failure() {
        writeln!(
            out,
            "reason: smaller model found for subset {}",
            fail.subset.display(p.table())
        )?;
    }
    if verbose {
        writeln!(out, "backdoor: {}", x.display(p.table()))?;
        for s in &report.subsets {
            match &s.outcome {
                MinCheckOutcome::NotContained => {
                    writeln!(out, "subset {}: not contained", s.subset.display(p.table()))?
                }
                MinCheckOutcome::Evaluated {
                    least_model,
                    conditions,
                } => writeln!(
                    out,
                    "subset {}: L = {}, conditions {}",
                    s.subset.display(p.table()),
                    least_model.display(p.table()),
                    conditions
                )?,
            }
        }
    }
    Ok(())
}

fn cmd_enumerate(file: &Path, force: bool, out: &mut impl Write) -> Result<()> {
    let p = load(file)?;
    let sets = enumerate_answer_sets(&p, force)?;
    for m in &sets {
        writeln!(out, "{}", m.display(p.table()))?;
    }
    writeln!(out, "answer sets: {}", sets.len())?;
    Ok(())
}

fn cmd_encode(
    file: &Path,
    query: &QueryArgs,
    backdoor: &BackdoorArg,
    cnf_path: &Path,
    map: Option<&Path>,
) -> Result<()> {
    let p = load(file)?;
    let q = query_spec(&p, query)?;
    let x = backdoor.resolve(&p)?;
    let (enc, cnf) = encode(&p, &x, &q)?;
    let comments = vec![
        format!("{} {}", q.mode, query.atom),
        format!(
            "backdoor {} blocks {} layers {}",
            x.display(p.table()),
            enc.blocks(),
            enc.vars.layers()
        ),
    ];
    let mut w = BufWriter::new(
        fs::File::create(cnf_path).with_context(|| format!("creating {}", cnf_path.display()))?,
    );
    emit_dimacs(&cnf, &comments, &mut w)?;
    w.flush()?;
    if let Some(map) = map {
        let mut w = BufWriter::new(
            fs::File::create(map).with_context(|| format!("creating {}", map.display()))?,
        );
        emit_var_map(&cnf, &mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn cmd_solve(
    file: &Path,
    query: &QueryArgs,
    backdoor: &BackdoorArg,
    solver: Option<PathBuf>,
    timeout: f64,
    out: &mut impl Write,
) -> Result<u8> {
    if !(timeout.is_finite() && timeout > 0.0) {
        bail!("timeout must be a positive number of seconds");
    }
    let p = load(file)?;
    let q = query_spec(&p, query)?;
    let x = backdoor.resolve(&p)?;
    let cfg = SolverConfig::from_env(solver).with_timeout(Duration::from_secs_f64(timeout));
    let d = decide(&p, Some(&x), &q, &cfg)?;
    let code = match d.answer {
        Answer::Yes => {
            writeln!(out, "yes")?;
            EXIT_YES
        }
        Answer::No => {
            writeln!(out, "no")?;
            EXIT_NO
        }
        Answer::Unknown => {
            writeln!(out, "unknown")?;
            if let Some(diag) = &d.sat.diagnostic {
                eprintln!("bdnsat: {diag}");
            }
            EXIT_UNKNOWN
        }
    };
    if let Some(w) = &d.witness {
        writeln!(out, "witness: {}", w.display(p.table()))?;
    }
    Ok(code)
}

struct StatsRow {
    atoms: usize,
    rules: usize,
    backdoor: Option<usize>,
    tight: bool,
}

fn stats_row(path: &Path, max_k: usize) -> Result<StatsRow> {
    let p = load(path)?;
    Ok(StatsRow {
        atoms: p.atoms_used().len(),
        rules: p.len(),
        backdoor: find_backdoor(&p, max_k).map(|b| b.k()),
        tight: p.flags().tight,
    })
}

fn cmd_stats(files: &[PathBuf], max_k: usize, out: &mut impl Write) -> Result<()> {
    let rows: Vec<Result<StatsRow>> = thread::scope(|s| {
        let handles: Vec<_> = files
            .iter()
            .map(|f| s.spawn(move || stats_row(f, max_k)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| bail!("worker panicked")))
            .collect()
    });
    writeln!(out, "file\tatoms\trules\tbackdoor\tbackdoor%\ttight")?;
    for (file, row) in files.iter().zip(rows) {
        let row = row?;
        let (k, pct) = match row.backdoor {
            Some(k) if row.atoms > 0 => (
                k.to_string(),
                format!("{:.2}", 100.0 * k as f64 / row.atoms as f64),
            ),
            Some(k) => (k.to_string(), format!("{:.2}", 0.0)),
            None => (format!(">{max_k}"), "-".to_owned()),
        };
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            file.display(),
            row.atoms,
            row.rules,
            k,
            pct,
            yes_no(row.tight)
        )?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match cli.command {
        Command::Parse { file, print } => cmd_parse(&file, print, &mut out).map(|_| 0)?,
        Command::Backdoor { file, max_k } => cmd_backdoor(&file, max_k, &mut out).map(|_| 0)?,
        Command::Check {
            file,
            model,
            backdoor,
            verbose,
        } => cmd_check(&file, &model, &backdoor, verbose, &mut out).map(|_| 0)?,
        Command::Enumerate { file, force } => cmd_enumerate(&file, force, &mut out).map(|_| 0)?,
        Command::Encode {
            file,
            query,
            backdoor,
            out: cnf,
            map,
        } => cmd_encode(&file, &query, &backdoor, &cnf, map.as_deref()).map(|_| 0)?,
        Command::Solve {
            file,
            query,
            backdoor,
            solver,
            timeout,
        } => cmd_solve(&file, &query, &backdoor, solver, timeout, &mut out)?,
        Command::Stats { files, max_k } => cmd_stats(&files, max_k, &mut out).map(|_| 0)?,
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("bdnsat: {}", first.trim_start_matches("error: "));
            return ExitCode::from(EXIT_ERROR);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("bdnsat: {msg}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
