use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use majorant::certify::{prove_case, CertifyError, ProofReport, Verdict};
use majorant::explore::{self, TabulateConfig};

const EXIT_FAILED: u8 = 1;
const EXIT_UNSUPPORTED: u8 = 2;

#[derive(Parser)]
#[command(name = "majorant", version, about = "Certified sign checks for d(t) = ∫(G₋^t − G₊^t) over [0, 1/2]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Run the proof for k = 0, 1 or 2 and write its report (JSON).
    ///
    /// Exit status: 0 proven, 1 some fact failed, 2 unsupported k.
    Prove {
        #[arg(long)]
        k: u32,
        /// Report file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate d(t) with a per-point quadrature error bound.
    ///
    /// --step is the node spacing on [0, 1/2]: step 0.001 means N = 500
    /// midpoint nodes. --density is the spacing of the t grid.
    Tabulate {
        #[arg(long)]
        k: u32,
        /// Defaults to k.
        #[arg(long)]
        t_min: Option<f64>,
        /// Defaults to k + 1.
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 0.001)]
        step: f64,
        #[arg(long, default_value_t = 0.01)]
        density: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Use a grid estimate of ‖H″‖∞ (not certified) for the error column.
        #[arg(long)]
        exploratory: bool,
    },
    /// Normalized curves f_k(s) = d(k+s) / max d for each k.
    Shape {
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u32>,
        #[arg(long, default_value_t = 0.001)]
        step: f64,
        #[arg(long, default_value_t = 0.01)]
        density: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inventory of certified constants next to their targets (k = 1, 2).
    Bounds {
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Allow other k with uncertified grid values.
        #[arg(long)]
        exploratory: bool,
    },
    /// Re-check a saved report from its embedded numbers alone.
    Check {
        report: PathBuf,
    },
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Prove { k, out } => {
            let report = match prove_case(k) {
                Ok(r) => r,
                Err(e @ CertifyError::Unsupported { .. }) => return Ok(fail(EXIT_UNSUPPORTED, e)),
                Err(e) => return Ok(fail(EXIT_FAILED, e)),
            };
            let mut w = sink(&out)?;
            writeln!(w, "{}", report.to_json())?;
            w.flush()?;
            for f in &report.facts {
                eprintln!("[{}] {}", if f.holds { "ok" } else { "FAILED" }, f.statement);
            }
            eprintln!("k={}: {:?}", k, report.verdict);
            Ok(if report.verdict == Verdict::Proven { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAILED) })
        }
        Command::Tabulate { k, t_min, t_max, step, density, format, out, exploratory } => {
            let cfg = TabulateConfig {
                k,
                t_min: t_min.unwrap_or(k as f64),
                t_max: t_max.unwrap_or(k as f64 + 1.0),
                step,
                density,
                exploratory,
            };
            let rows = match explore::tabulate(&cfg) {
                Ok(r) => r,
                Err(e @ explore::ExploreError::BadRange(_)) => return Ok(fail(EXIT_UNSUPPORTED, e)),
                Err(e) => return Err(e.into()),
            };
            let mut w = sink(&out)?;
            match format {
                Format::Csv => explore::write_tab_csv(&rows, &mut w)?,
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&rows)?)?,
                Format::Svg => w.write_all(explore::tab_svg(k, &rows).as_bytes())?,
            }
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Shape { k, step, density, format, out } => {
            let mut curves = Vec::new();
            for k in k {
                match explore::shape(k, step, density) {
                    Ok(c) => curves.push(c),
                    Err(e @ explore::ExploreError::BadRange(_)) => return Ok(fail(EXIT_UNSUPPORTED, e)),
                    Err(e) => return Err(e.into()),
                }
            }
            for c in &curves {
                eprintln!("k={}: argmax s = {}", c.k, c.argmax_s);
            }
            let mut w = sink(&out)?;
            match format {
                Format::Csv => explore::write_shape_csv(&curves, &mut w)?,
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&curves)?)?,
                Format::Svg => w.write_all(explore::shape_svg(&curves).as_bytes())?,
            }
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { k, format, out, exploratory } => {
            let rows = match explore::bounds_inventory(k, exploratory) {
                Ok(r) => r,
                Err(e @ explore::ExploreError::Unsupported { .. }) => return Ok(fail(EXIT_UNSUPPORTED, e)),
                Err(e) => return Err(e.into()),
            };
            let mut w = sink(&out)?;
            match format {
                Format::Csv => explore::write_bounds_csv(&rows, &mut w)?,
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&rows)?)?,
                Format::Svg => return Ok(fail(EXIT_UNSUPPORTED, "bounds has no svg form")),
            }
            w.flush()?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { report } => {
            let report = ProofReport::from_json(&std::fs::read_to_string(report)?)?;
            let issues = report.revalidate();
            for i in &issues {
                eprintln!("{i}");
            }
            let ok = issues.is_empty() && report.verdict == Verdict::Proven;
            eprintln!("k={}: {:?}, {} issue(s)", report.k, report.verdict, issues.len());
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAILED) })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => fail(EXIT_FAILED, e),
    }
}
