//! Command-line front end. Exit status: 0 on success, 1 when the analysis
//! fails, 2 on usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analysis::{analyze_text, Analysis};
use crate::error::Error;
use crate::numerics::{integrate, Curve, IntegrateConfig};
use crate::quantize::{build_representation, check_anticommutators, compare_with, physical_states};
use crate::report::{check_expectations, emit, parse_expectations, ExpectationResult, Format};
use crate::symmetry::{is_total_derivative, parse_transformation, vary_lagrangian};

#[derive(Parser, Debug)]
#[command(
    name = "hamjac",
    version,
    about = "Hamilton-Jacobi analysis of constrained systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the symbolic pipeline and print a report.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value = "text")]
        report: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Reference values to compare against (default: FILE with the
        /// extension `.expect`, if present).
        #[arg(long)]
        expect: Option<PathBuf>,
    },
    /// Integrate the equations of motion and print a CSV trajectory.
    Integrate {
        file: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        tau_max: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value = "const:1")]
        e_curve: Curve,
        #[arg(long, default_value = "const:0.3")]
        chi_curve: Curve,
        #[arg(long, default_value_t = 6)]
        odd_units: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Initial lower-index momentum (default: rest frame).
        #[arg(long, value_parser = parse_four)]
        p: Option<[f64; 4]>,
        /// Value of the constant `m`.
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the matrix realization and the physical-state space at `p`.
    Quantize {
        file: PathBuf,
        #[arg(long, value_parser = parse_four)]
        p: Option<[f64; 4]>,
        #[arg(long, default_value_t = 1.0)]
        mass: f64,
    },
    /// Vary the Lagrangian and test whether the variation is a total
    /// τ-derivative.
    Vary {
        file: PathBuf,
        #[arg(long)]
        transformation: PathBuf,
    },
}

fn parse_four(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected four comma-separated numbers, got `{s}`"));
    }
    let mut out = [0.0; 4];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("bad number `{p}`"))?;
    }
    Ok(out)
}

enum Failure {
    Usage(String),
    Analysis(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Analysis(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Analysis(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Analysis, Failure> {
    analyze_text(&read(path)?).map_err(|e| Failure::Analysis(format!("{}: {e}", path.display())))
}

fn write_out(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Analysis(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Analysis(e.to_string())),
    }
}

/// Run with explicit argument list and streams; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    2
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Analysis(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Analyze {
            file,
            report,
            out: path,
            expect,
        } => {
            let a = load(&file)?;
            let results = expectations(&a, &file, expect.as_deref())?;
            write_out(out, path.as_deref(), &emit(&a, &results, report))
        }
        Command::Integrate {
            file,
            tau_max,
            steps,
            e_curve,
            chi_curve,
            odd_units,
            seed,
            p,
            mass,
            out: path,
        } => {
            let cfg = IntegrateConfig {
                tau_max,
                steps,
                e_curve,
                chi_curve,
                odd_units,
                seed,
                constants: [("m".to_string(), mass)].into_iter().collect(),
                momentum: p,
            };
            cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
            let a = load(&file)?;
            let t = integrate(&a, &cfg)?;
            write_out(out, path.as_deref(), &t.to_csv())?;
            for c in &t.constraints {
                let _ = writeln!(err, "drift {c}: {:.16e}", t.drift(c).unwrap_or(0.0));
            }
            Ok(())
        }
        Command::Quantize { file, p, mass } => {
            if mass.is_nan() || mass <= 0.0 {
                return Err(Failure::Usage(format!("mass must be positive, got {mass}")));
            }
            let a = load(&file)?;
            let rep = build_representation();
            let dev = check_anticommutators(&rep);
            let mut s = String::new();
            use std::fmt::Write as _;
            let _ = writeln!(s, "anticommutator relations");
            for r in dev.anticommutators.iter().chain(&dev.clifford) {
                let _ = writeln!(s, "  {:<20} {:.3e}", r.name, r.deviation);
            }
            let _ = writeln!(s, "  {:<20} {:.3e}", "gamma5^2 = -1", dev.gamma5_square);
            let _ = writeln!(
                s,
                "max deviation {:.3e} ({})",
                dev.max(),
                if dev.passes() { "ok" } else { "FAIL" }
            );
            if let Some(block) = &a.brackets.constant_block {
                if let Some(target) = crate::bracket::anticommutator_bridge(block) {
                    if target.len() == 5 {
                        let mut gens = rep.psi.to_vec();
                        gens.push(rep.psi5);
                        let _ = writeln!(
                            s,
                            "realization vs brackets of {}: {:.3e}",
                            block.names.join(", "),
                            compare_with(&gens, &target)
                        );
                    }
                }
            }
            let p = p.unwrap_or([mass, 0.0, 0.0, 0.0]);
            let phys = physical_states(&rep, p, mass)?;
            let _ = writeln!(
                s,
                "p = ({}, {}, {}, {}), m = {mass}: p^2 - m^2 = {:.3e} ({})",
                p[0],
                p[1],
                p[2],
                p[3],
                phys.shell_residual,
                if phys.on_shell {
                    "on shell"
                } else {
                    "off shell"
                }
            );
            let _ = writeln!(s, "physical states: dimension {}", phys.dimension());
            write_out(out, None, &s)
        }
        Command::Vary {
            file,
            transformation,
        } => {
            let text = read(&file)?;
            let mut model = crate::frontend::parse_model(&text).map_err(Error::from)?;
            let t = parse_transformation(&mut model, &read(&transformation)?)?;
            let dl = vary_lagrangian(&model, &t)?;
            let test = is_total_derivative(&model, &dl)?;
            let mut s = format!(
                "transformation {}\ndelta L = {}\n",
                t.name,
                model.render(&dl)
            );
            s.push_str(&format!(
                "total derivative: {}\n",
                if test.is_total_derivative {
                    "yes"
                } else {
                    "no"
                }
            ));
            for (q, r) in &test.residual {
                s.push_str(&format!(
                    "  EL[{}] = {}\n",
                    model.name_of(*q),
                    model.render(r)
                ));
            }
            write_out(out, None, &s)
        }
    }
}

fn expectations(
    a: &Analysis,
    file: &Path,
    explicit: Option<&Path>,
) -> Result<Vec<ExpectationResult>, Failure> {
    let path = match explicit {
        Some(p) => p.to_path_buf(),
        None => {
            let sibling = file.with_extension("expect");
            if !sibling.exists() {
                return Ok(Vec::new());
            }
            sibling
        }
    };
    let x = parse_expectations(&a.model, &read(&path)?)
        .map_err(|e| Failure::Analysis(format!("{}: {e}", path.display())))?;
    Ok(check_expectations(a, &x))
}
