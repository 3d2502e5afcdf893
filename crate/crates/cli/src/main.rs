use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use isocycle::{
    figure_dataset, parse_config, run_sweep, FigureData, FigureId, OutputFormat, SpectrumRow, SpectrumTable,
    SweepRow, SweepTable, TableError,
};
use isocycle_core::{approx_levels, exact_levels, run_cycle, CycleSpec, Knob, Method, ModelParams, TruncationPolicy};

const EXIT_CONFIG: u8 = 2;
const EXIT_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "isocycle", version, about = "Isoenergetic Rabi cycle: spectra, cycles and sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Two lowest Rabi levels at one parameter point.
    Spectrum {
        #[arg(long, default_value_t = 1.0)]
        g: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 1.0)]
        bigomega: f64,
        #[arg(long, default_value = "exact")]
        method: Method,
        /// Starting cutoff for the exact solver.
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
    },
    /// One cycle.
    Cycle {
        #[arg(long)]
        varied: Knob,
        #[arg(long)]
        xi1: f64,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value = "exact")]
        method: Method,
        #[arg(long, default_value_t = 1.0)]
        g: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 1.0)]
        bigomega: f64,
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
    },
    /// Grid sweep described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the `output` key; stdout when neither is given.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the `format` key.
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Dataset behind one figure (fig1, fig3..fig10).
    Figure {
        id: FigureId,
        /// Directory for `<id>.<format>`; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: OutputFormat,
    },
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("isocycle: {msg}");
    ExitCode::from(code)
}

fn emit(text: Result<String, TableError>, out: Option<&Path>) -> Result<(), String> {
    let text = text.map_err(|e| e.to_string())?;
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_sweep(t: &SweepTable, format: OutputFormat) -> Result<String, TableError> {
    match format {
        OutputFormat::Csv => t.to_csv(),
        OutputFormat::Json => t.to_json(),
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Spectrum { g, omega, bigomega, method, nmax, format } => {
            let params = match ModelParams::new(g, omega, bigomega) {
                Ok(p) => p,
                Err(e) => return fail(EXIT_CONFIG, e),
            };
            let mut policy = TruncationPolicy::default();
            if let Some(n) = nmax {
                policy.n_max = n;
                policy.hard_cap = policy.hard_cap.max(n);
            }
            if let Err(e) = policy.validate() {
                return fail(EXIT_CONFIG, e);
            }
            let pair = match method {
                Method::ExactNumeric => exact_levels(&params, &policy),
                Method::Approximate => approx_levels(&params),
            };
            let pair = match pair {
                Ok(p) => p,
                Err(e) => return fail(EXIT_FAILED, e),
            };
            let table = SpectrumTable { rows: vec![SpectrumRow::new("point", Knob::Coupling, g, &pair)] };
            let text = match format {
                OutputFormat::Csv => table.to_csv(),
                OutputFormat::Json => table.to_json(),
            };
            match emit(text, None) {
                Ok(()) if pair.converged => ExitCode::SUCCESS,
                Ok(()) => fail(EXIT_FAILED, "levels did not converge within the hard cap"),
                Err(e) => fail(EXIT_FAILED, e),
            }
        }
        Command::Cycle { varied, xi1, alpha, method, g, omega, bigomega, format } => {
            let fixed = match ModelParams::new(g, omega, bigomega) {
                Ok(p) => p,
                Err(e) => return fail(EXIT_CONFIG, e),
            };
            let spec = CycleSpec::new(varied, xi1, alpha, fixed, method);
            if let Err(e) = spec.validate() {
                return fail(EXIT_CONFIG, e);
            }
            let outcome = run_cycle(&spec);
            let table = SweepTable { rows: vec![SweepRow::from_outcome(varied, method, xi1, alpha, &outcome)] };
            if let Err(e) = emit(render_sweep(&table, format), None) {
                return fail(EXIT_FAILED, e);
            }
            match outcome {
                Ok(_) => ExitCode::SUCCESS,
                Err(e) => fail(EXIT_FAILED, e),
            }
        }
        Command::Sweep { config, out, format } => {
            let text = match fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => return fail(EXIT_CONFIG, format!("{}: {e}", config.display())),
            };
            let cfg = match parse_config(&text) {
                Ok(c) => c,
                Err(e) => return fail(EXIT_CONFIG, format!("{}: {e}", config.display())),
            };
            let table = run_sweep(&cfg);
            let format = format.unwrap_or(cfg.format);
            let out = out.or(cfg.output.clone());
            if let Err(e) = emit(render_sweep(&table, format), out.as_deref()) {
                return fail(EXIT_FAILED, e);
            }
            let failed = table.rows.len() - table.ok_rows().count();
            if !table.rows.is_empty() && failed == table.rows.len() {
                return fail(EXIT_FAILED, "every grid point failed");
            }
            if failed > 0 {
                eprintln!("isocycle: {failed} of {} points failed", table.rows.len());
            }
            ExitCode::SUCCESS
        }
        Command::Figure { id, out, format } => {
            let data = figure_dataset(id);
            let text = match format {
                OutputFormat::Csv => data.to_csv(),
                OutputFormat::Json => data.to_json(),
            };
            let ext = match format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            };
            let path = match out {
                Some(dir) => {
                    if let Err(e) = fs::create_dir_all(&dir) {
                        return fail(EXIT_FAILED, format!("{}: {e}", dir.display()));
                    }
                    Some(dir.join(format!("{id}.{ext}")))
                }
                None => None,
            };
            if let Err(e) = emit(text, path.as_deref()) {
                return fail(EXIT_FAILED, e);
            }
            if let FigureData::Cycle(t) = &data {
                if t.ok_rows().count() == 0 {
                    return fail(EXIT_FAILED, "every grid point failed");
                }
            }
            ExitCode::SUCCESS
        }
    }
}
