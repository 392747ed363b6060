use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use dhym_core::report::{
    exit_code_for_error, run_charge, run_check, run_counterexample, run_h_omega, run_phase, run_solve, run_sweep, Report,
};
use dhym_core::torus::{HessianMode, Psi0Spec, SolveOptions};
use dhym_core::Error;

/// Algebraic criteria and a toy solver for the hypercritical dHYM equation.
///
/// Exit codes: 0 positive verdict, 1 negative verdict, 2 borderline, 3 input error.
#[derive(Parser, Debug)]
#[command(name = "dhym", version)]
struct Cli {
    /// Emit the JSON report instead of a text summary.
    #[arg(long, global = true)]
    json: bool,

    /// Builtin model name (cp1, cp2, cp3, blp_cp2, p1xp1) or a model file path.
    #[arg(long, global = true)]
    model: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Chern-number, slicing-angle and stability criteria for [α].
    Check {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<String>,
    },
    /// Central charge polynomials and their winding angles.
    Charge {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<String>,
        /// Restrict to one subvariety (X is the ambient space).
        #[arg(long)]
        subvariety: Option<String>,
    },
    /// Positivity certificates for the linear test family.
    HOmega {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<String>,
        /// Exact rational cot Θ₀ overriding the value derived from the classes.
        #[arg(long, allow_hyphen_values = true)]
        cot_theta: Option<String>,
        /// Kähler class for the twisted positivity condition.
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
        /// Check only m = 0 of the χ condition (valid on projective models).
        #[arg(long)]
        projective_weakening: bool,
    },
    /// Reproduce the blow-up counterexample with exact golden values.
    Counterexample,
    /// Evaluate the criteria over a rational grid of classes; CSV output.
    Sweep {
        /// One `start:end:step` axis (or single value) per basis coefficient, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<String>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the torus dHYM equation by damped Newton.
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        a1: f64,
        #[arg(long, allow_hyphen_values = true)]
        a2: f64,
        /// `amp,kx,ky` for ψ₀ = amp·cos(2π kx x)·cos(2π ky y).
        #[arg(long, default_value = "0,1,1", allow_hyphen_values = true)]
        psi0: String,
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
        #[arg(long, value_enum, default_value_t = HessianArg::Discrete)]
        psi0_hessian: HessianArg,
        /// Write `i,j,x,y,phi,phase` rows of the final iterate here.
        #[arg(long)]
        field_csv: Option<PathBuf>,
    },
    /// Lagrangian phase of a Hermitian pair read from a JSON document.
    Phase {
        /// Path to `{"alpha": [[..]], "omega": [[..]]}`; `-` reads stdin.
        #[arg(long, default_value = "-")]
        input: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HessianArg {
    Discrete,
    Analytic,
}

fn need_model(m: &Option<String>) -> Result<&str, Error> {
    m.as_deref()
        .ok_or_else(|| Error::Parse("--model is required for this command".into()))
}

fn emit(r: &Report, json: bool) -> ExitCode {
    if json {
        println!("{}", r.to_json());
    } else {
        print!("{}", r.to_text());
    }
    ExitCode::from(r.outcome.exit_code() as u8)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let json = cli.json;
    match cli.command {
        Command::Check { alpha, omega } => Ok(emit(&run_check(need_model(&cli.model)?, &alpha, omega.as_deref())?, json)),
        Command::Charge { alpha, omega, subvariety } => Ok(emit(
            &run_charge(need_model(&cli.model)?, &alpha, omega.as_deref(), subvariety.as_deref())?,
            json,
        )),
        Command::HOmega {
            alpha,
            omega,
            cot_theta,
            chi,
            projective_weakening,
        } => Ok(emit(
            &run_h_omega(
                need_model(&cli.model)?,
                &alpha,
                omega.as_deref(),
                cot_theta.as_deref(),
                chi.as_deref(),
                projective_weakening,
            )?,
            json,
        )),
        Command::Counterexample => Ok(emit(&run_counterexample()?, json)),
        Command::Sweep { grid, omega, out } => {
            let csv = run_sweep(need_model(&cli.model)?, &grid, omega.as_deref())?;
            match out {
                Some(p) => std::fs::write(&p, csv).map_err(|e| Error::Parse(format!("writing {}: {e}", p.display())))?,
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve {
            a1,
            a2,
            psi0,
            n,
            tol,
            max_iter,
            psi0_hessian,
            field_csv,
        } => {
            let mode = match psi0_hessian {
                HessianArg::Discrete => HessianMode::Discrete,
                HessianArg::Analytic => HessianMode::Analytic,
            };
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::Parse(format!("--tol {tol} must be positive")));
            }
            let opts = SolveOptions {
                tol,
                max_iter,
                ..SolveOptions::default()
            };
            let out = run_solve(a1, a2, Psi0Spec::parse(&psi0)?, n, mode, opts)?;
            if let (Some(p), Some(csv)) = (field_csv, &out.field_csv) {
                std::fs::write(&p, csv).map_err(|e| Error::Parse(format!("writing {}: {e}", p.display())))?;
            }
            Ok(emit(&out.report, json))
        }
        Command::Phase { input } => {
            let text = if input == "-" {
                let mut s = String::new();
                std::io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| Error::Parse(format!("reading stdin: {e}")))?;
                s
            } else {
                std::fs::read_to_string(&input).map_err(|e| Error::Parse(format!("reading {input}: {e}")))?
            };
            Ok(emit(&run_phase(&text)?, json))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for_error(&e) as u8)
        }
    }
}
