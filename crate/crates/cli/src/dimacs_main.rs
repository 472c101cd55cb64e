//! `bdnsat-dimacs FILE`: the built-in DPLL behind SAT-competition output.
//! Exits 10 on SAT and 20 on UNSAT, like most SAT solvers.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};

use bdnsat::encoding::parse_dimacs;
use bdnsat::solver::dpll::{solve_dpll, DpllOutcome};

fn run(path: &str) -> Result<u8> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let cnf = parse_dimacs(&text)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match solve_dpll(cnf.num_vars, &cnf.clauses, None) {
        DpllOutcome::Sat(a) => {
            writeln!(out, "s SATISFIABLE")?;
            let mut line = String::from("v");
            for (i, &value) in a.iter().enumerate() {
                let var = i as i64 + 1;
                line.push(' ');
                line.push_str(&(if value { var } else { -var }).to_string());
            }
            writeln!(out, "{line} 0")?;
            10
        }
        DpllOutcome::Unsat => {
            writeln!(out, "s UNSATISFIABLE")?;
            20
        }
        DpllOutcome::Interrupted => {
            writeln!(out, "s UNKNOWN")?;
            0
        }
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let [path] = args.as_slice() else {
        eprintln!("usage: bdnsat-dimacs FILE.cnf");
        return ExitCode::from(1);
    };
    match run(path) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("bdnsat-dimacs: {e:#}");
            ExitCode::from(1)
        }
    }
}
