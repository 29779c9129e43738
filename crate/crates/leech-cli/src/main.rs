//! `leech` command line: solve Leech problems from JSON files, verify
//! solutions, emit the built-in example, and expose the spectral
//! factorization stage.
//!
//! Exit codes: `0` success, `1` I/O, parse, or dimension errors, `2` not
//! solvable, `3` the unsupported semidefinite case.

mod schema;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use leech::solver::solve;
use leech::spectral::{outer_factor, riccati_residual, riccati_stabilizing};
use leech::{matrix, realization, Error, LeechData};

use schema::{
    data_to_problem, matrix_to_data, problem_to_data, realization_from_data, realization_to_data,
    solution_to_file, symbol_from_file, to_canonical_json, DiagnosticsData, FactorFile,
    ProblemFile, SolutionFile, SymbolFile, SCHEMA_VERSION,
};

#[derive(Parser)]
#[command(name = "leech", version, about = "Stable rational solutions of Leech problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the Leech problem in a problem file and write a solution file.
    Solve {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Solvability-margin tolerance (overrides the file options).
        #[arg(long)]
        tol: Option<f64>,
        /// Circle-grid size for residual diagnostics.
        #[arg(long)]
        grid: Option<usize>,
        /// Riccati iteration budget.
        #[arg(long)]
        max_iter: Option<usize>,
        /// Abort instead of proceeding when the realization is not minimal.
        #[arg(long)]
        require_minimal: bool,
    },
    /// Recompute the residual and norm contracts of a solution file.
    Check {
        problem: PathBuf,
        solution: PathBuf,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Write the built-in example problem file.
    Example {
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Spectrally factor a symbol file: stabilizing Q, Phi, and Phi inverse.
    Factor {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Solve { input, output, tol, grid, max_iter, require_minimal } => {
            cmd_solve(&input, &output, tol, grid, max_iter, require_minimal)
        }
        Command::Check { problem, solution, grid } => cmd_check(&problem, &solution, grid),
        Command::Example { output } => cmd_example(&output),
        Command::Factor { input, output, tol, max_iter } => {
            cmd_factor(&input, &output, tol, max_iter)
        }
    };
    ExitCode::from(code)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {what} {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {what} {}: {e}", path.display()))
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T, what: &str) -> Result<(), String> {
    std::fs::write(path, to_canonical_json(value))
        .map_err(|e| format!("cannot write {what} {}: {e}", path.display()))
}

fn cmd_solve(
    input: &Path,
    output: &Path,
    tol: Option<f64>,
    grid: Option<usize>,
    max_iter: Option<usize>,
    require_minimal: bool,
) -> u8 {
    let file: ProblemFile = match read_json(input, "problem file") {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let (data, mut opts, allow_nonminimal) = match problem_to_data(&file) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    if let Some(tol) = tol {
        opts.tol = tol;
    }
    if let Some(grid) = grid {
        opts.grid = grid;
    }
    if let Some(max_iter) = max_iter {
        opts.max_iter = max_iter;
    }

    let minimality = realization::minimality_report(&data, 1e-10);
    if !minimality.is_minimal() {
        eprintln!(
            "warning: realization is not minimal (observability rank {}/{}, \
             controllability rank {}/{}); results follow the formulas but the \
             underlying theory assumes minimality",
            minimality.obs_rank,
            data.n(),
            minimality.ctrl_rank,
            data.n()
        );
        if require_minimal || !allow_nonminimal {
            return fail("aborting on non-minimal realization (minimality required)");
        }
    }

    match solve(&data, &opts) {
        Ok(solution) => {
            let out = solution_to_file(&solution);
            if let Err(e) = write_json(output, &out, "solution file") {
                return fail(&e);
            }
            println!(
                "solved: branch {:?}, leech residual {:.3e}, contraction margin {:.3e}",
                solution.branch,
                solution.diagnostics.leech_residual,
                solution.diagnostics.contraction_margin
            );
            0
        }
        Err(err) => {
            let (status, code) = match err {
                Error::NotSolvable { .. } => ("not_solvable", 2u8),
                Error::SemidefiniteUnsupported { .. } => ("unsupported", 3u8),
                _ => ("error", 1u8),
            };
            eprintln!("error: {err}");
            if code == 2 || code == 3 {
                // Partial report for debugging infeasible inputs.
                let report = SolutionFile {
                    schema_version: SCHEMA_VERSION.to_string(),
                    status: status.to_string(),
                    branch: None,
                    x: None,
                    psi: None,
                    f: None,
                    u: None,
                    diagnostics: DiagnosticsData {
                        solvability_margin: match err {
                            Error::NotSolvable { margin } => Some(margin),
                            Error::SemidefiniteUnsupported { circle_min_eig } => {
                                Some(circle_min_eig)
                            }
                            _ => None,
                        },
                        observable: Some(minimality.observable),
                        controllable: Some(minimality.controllable),
                        obs_rank: Some(minimality.obs_rank),
                        ctrl_rank: Some(minimality.ctrl_rank),
                        ..DiagnosticsData::default()
                    },
                    error: Some(err.to_string()),
                };
                if let Err(e) = write_json(output, &report, "solution file") {
                    return fail(&e);
                }
            }
            code
        }
    }
}

fn cmd_check(problem: &Path, solution: &Path, grid: Option<usize>) -> u8 {
    let problem_file: ProblemFile = match read_json(problem, "problem file") {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let (data, opts, _) = match problem_to_data(&problem_file) {
        Ok(v) => v,
        Err(e) => return fail(&e),
    };
    let solution_file: SolutionFile = match read_json(solution, "solution file") {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let Some(x_data) = &solution_file.x else {
        return fail("solution file contains no X realization");
    };
    let x = match realization_from_data(x_data, "X") {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    if x.output_dim() != data.p() || x.input_dim() != data.q() {
        return fail(&format!(
            "dimension mismatch: X is {}x{}, problem expects {}x{}",
            x.output_dim(),
            x.input_dim(),
            data.p(),
            data.q()
        ));
    }
    let grid = grid.unwrap_or(opts.grid).max(16);
    let g = data.g();
    let k = data.k();
    let mut residual = 0.0f64;
    for i in 0..grid {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / grid as f64;
        let z = Complex64::new(theta.cos(), theta.sin());
        let value = match (g.eval(z), x.eval(z), k.eval(z)) {
            (Ok(gv), Ok(xv), Ok(kv)) => (gv * xv - kv).norm(),
            _ => f64::INFINITY,
        };
        residual = residual.max(value);
    }
    let norm = x.hinf_norm_grid(grid);
    println!("leech residual (max over {grid} circle points): {residual:.6e}");
    println!("hinf norm (grid lower bound): {norm:.12}");
    if residual < 1e-6 && norm <= 1.0 + 1e-6 {
        println!("check passed");
        0
    } else {
        eprintln!("check failed: require residual < 1e-6 and norm <= 1 + 1e-6");
        2
    }
}

fn cmd_example(output: &Path) -> u8 {
    let file = data_to_problem(&LeechData::example());
    match write_json(output, &file, "problem file") {
        Ok(()) => {
            println!("wrote example problem to {}", output.display());
            0
        }
        Err(e) => fail(&e),
    }
}

fn cmd_factor(input: &Path, output: &Path, tol: Option<f64>, max_iter: Option<usize>) -> u8 {
    let file: SymbolFile = match read_json(input, "symbol file") {
        Ok(f) => f,
        Err(e) => return fail(&e),
    };
    let sym = match symbol_from_file(&file) {
        Ok(s) => s,
        Err(e) => return fail(&e),
    };
    let mut riccati_tol = 1e-12;
    let mut iterations = 50_000;
    if let Some(options) = &file.options {
        if let Some(t) = options.tol {
            riccati_tol = t;
        }
        if let Some(m) = options.max_iter {
            iterations = m;
        }
    }
    if let Some(t) = tol {
        riccati_tol = t;
    }
    if let Some(m) = max_iter {
        iterations = m;
    }
    let q = match riccati_stabilizing(&sym, riccati_tol, iterations) {
        Ok(q) => q,
        Err(err @ Error::NoStabilizingSolution { .. }) => {
            eprintln!("error: {err}");
            return 3;
        }
        Err(err) => return fail(&err.to_string()),
    };
    let factor = match outer_factor(&sym, &q) {
        Ok(f) => f,
        Err(err) => return fail(&err.to_string()),
    };
    let innovation = matrix::symmetrize(
        &(sym.r0() - sym.gamma().adjoint() * &q * sym.gamma()),
    );
    let out = FactorFile {
        schema_version: SCHEMA_VERSION.to_string(),
        q: matrix_to_data(&q),
        phi: realization_to_data(factor.phi()),
        phi_inv: realization_to_data(factor.phi_inv()),
        riccati_residual: riccati_residual(&sym, &q),
        innovation_min_eig: matrix::min_hermitian_eig(&innovation),
        closed_loop_spectral_radius: matrix::spectral_radius(factor.phi_inv().a()),
    };
    match write_json(output, &out, "factor file") {
        Ok(()) => {
            println!("wrote spectral factorization to {}", output.display());
            0
        }
        Err(e) => fail(&e),
    }
}

fn fail(message: &str) -> u8 {
    eprintln!("error: {message}");
    1
}
