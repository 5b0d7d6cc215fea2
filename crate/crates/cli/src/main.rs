use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use vartrack::depgraph::{export_dot, CutStrategy};
use vartrack::solver::demos::{demo_any, demo_sudoku, SudokuGrid};
use vartrack::solver::{parse_dimacs, solve, SolverOptions, Status};
use vartrack::value::pointer_name;

#[derive(Parser)]
#[command(name = "vartrack", version, about = "Dependency-tracking solver and reason demos")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a DIMACS CNF file.
    Solve {
        file: PathBuf,
        /// Learned-clause cut.
        #[arg(long, value_enum, default_value_t = Learn::Decision)]
        learn: Learn,
        /// Give up (status UNKNOWN) after this many conflicts.
        #[arg(long)]
        max_conflicts: Option<usize>,
        /// Write the last conflict's dependency graph as DOT to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Print each learned clause as a `l ... 0` line.
        #[arg(long)]
        print_learned: bool,
    },
    /// Run a reason-producing demo.
    #[command(subcommand)]
    Demo(Demo),
}

#[derive(Subcommand)]
enum Demo {
    /// Fold `any` over a list of bits, e.g. `010`, and print its reason.
    Any { bits: String },
    /// Check a 9x9 grid file and print why it is (in)valid.
    Sudoku { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Learn {
    Decision,
    Uip,
}

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn run_solve(
    file: &Path,
    learn: Learn,
    max_conflicts: Option<usize>,
    dot: Option<&Path>,
    print_learned: bool,
) -> Result<ExitCode, String> {
    let formula = parse_dimacs(&read(file)?).map_err(|e| format!("{}: {e}", file.display()))?;
    let opts = SolverOptions {
        strategy: match learn {
            Learn::Decision => CutStrategy::Decision,
            Learn::Uip => CutStrategy::FirstUip,
        },
        max_conflicts,
        record_conflicts: false,
    };
    let result = solve(&formula, &opts).map_err(|e| e.to_string())?;

    println!(
        "c decisions {} propagations {} conflicts {}",
        result.stats.decisions, result.stats.propagations, result.stats.conflicts
    );
    if print_learned {
        for clause in &result.learned {
            let lits: Vec<String> = clause.iter().map(i32::to_string).collect();
            println!("l {} 0", lits.join(" "));
        }
    }
    if let Some(path) = dot {
        let text = match &result.last_conflict {
            Some(g) => export_dot(g, &pointer_name),
            None => "digraph { }\n".to_string(),
        };
        fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let code = match result.status {
        Status::Satisfiable => {
            println!("s SATISFIABLE");
            let model = result.model.unwrap_or_default();
            let lits: Vec<String> = model
                .iter()
                .enumerate()
                .map(|(i, &b)| if b { (i + 1).to_string() } else { format!("-{}", i + 1) })
                .collect();
            if lits.is_empty() {
                println!("v 0");
            } else {
                println!("v {} 0", lits.join(" "));
            }
            EXIT_SAT
        }
        Status::Unsatisfiable => {
            println!("s UNSATISFIABLE");
            EXIT_UNSAT
        }
        Status::Unknown => {
            println!("s UNKNOWN");
            0
        }
    };
    Ok(ExitCode::from(code))
}

fn run_demo(demo: &Demo) -> Result<ExitCode, String> {
    match demo {
        Demo::Any { bits } => {
            let list = bits
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(format!("bits must be 0 or 1, found `{other}`")),
                })
                .collect::<Result<Vec<bool>, String>>()?;
            let d = demo_any(&list).map_err(|e| e.to_string())?;
            println!("any = {}", d.result);
            println!("because {}", d.reasons);
        }
        Demo::Sudoku { file } => {
            let grid: SudokuGrid = read(file)?
                .parse()
                .map_err(|e| format!("{}: {e}", file.display()))?;
            let d = demo_sudoku(&grid).map_err(|e| e.to_string())?;
            println!("sudoku = {}", d.valid);
            if let Some(c) = d.violated {
                println!("violated {c:?}");
            }
            println!("because {}", d.reasons);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match &cli.command {
        Command::Solve {
            file,
            learn,
            max_conflicts,
            dot,
            print_learned,
        } => run_solve(file, *learn, *max_conflicts, dot.as_deref(), *print_learned),
        Command::Demo(demo) => run_demo(demo),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(1)
    })
}
