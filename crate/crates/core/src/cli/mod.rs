//! The `qmc` command-line front end.
//!
//! Exit codes: 0 on success, 1 when validation or a numerical check fails,
//! 2 on usage or parse errors.

mod spec;
mod table;

pub use spec::{load, ChainSpec, LoadedChain, DEFAULT_EPS_TAIL};
pub use table::{format_float, Cell, Format, ResultTable};

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::chain::{Distribution, DEFAULT_TOL};
use crate::evolution::{
    classical_trajectory, convergence_bound, long_time_average_column, quantum_trajectory,
    smallest_phase_gap, QuantumState, SpectralChain, NORM_TOL,
};

/// Environment variable capping the worker threads (0 or unset: automatic).
pub const THREADS_ENV: &str = "QMC_THREADS";

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qmc", version, about = "Classical and quantum walks on reversible Markov chains")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Classical,
    Quantum,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(clap::Args, Debug)]
struct OutputArgs {
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check nonnegativity, stochasticity, detailed balance and connectivity.
    Validate {
        spec: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Tabulate kappa(n), E(n) and d_n^2.
    Spectrum {
        spec: PathBuf,
        /// Also diagonalise H numerically and report the deviation.
        #[arg(long)]
        compare: bool,
        /// Deviation allowed by --compare (default 1e-10, 1e-9 on truncated windows).
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evolve a distribution or a state and emit one row per (step, vertex).
    #[command(group(ArgGroup::new("start").required(true).args(["from", "init"])))]
    Evolve {
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Classical)]
        mode: Mode,
        /// Start from the point mass / basis state at this vertex.
        #[arg(long)]
        from: Option<usize>,
        /// JSON array holding the initial distribution or amplitudes
        /// (numbers, or [re, im] pairs in quantum mode).
        #[arg(long)]
        init: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        steps: u64,
        /// Normalisation tolerance, widened by the truncation budget.
        #[arg(long, default_value_t = NORM_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Classical distance to pi against quantum distance to the long-time average.
    Compare {
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        from: usize,
        #[arg(long, default_value_t = 100)]
        steps: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    init_threads();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qmc: {e}");
            e.exit_code()
        }
    }
}

fn init_threads() {
    let n = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
    if n > 0 {
        // Only the first call can configure the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn read_spec(path: &Path) -> Result<LoadedChain, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    load(&text)
}

fn emit(table: &ResultTable, output: &OutputArgs) -> Result<(), CliError> {
    if !table.all_finite() {
        return Err(CliError::Failure("result contains non-finite values".into()));
    }
    let text = table.render(output.format.into());
    match &output.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Failure(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Failure(format!("cannot write output: {e}"))),
    }
}

fn header(table: &mut ResultTable, command: &str, loaded: &LoadedChain) {
    table
        .meta("command", command)
        .meta("spec_sha256", &loaded.spec_hash)
        .meta("chain", loaded.spec.describe())
        .meta("window", loaded.chain.size())
        .meta_float("truncation_budget", loaded.chain.window().truncation_budget());
}

/// Evolution needs a chain that passes validation; family chains carry
/// closed-form data (numerical on truncated windows).
fn spectral_chain(loaded: &LoadedChain) -> Result<SpectralChain, CliError> {
    let fail = |e: crate::Error| CliError::Failure(e.to_string());
    match &loaded.analytic {
        Some(sys) if !sys.is_truncated() => SpectralChain::new(sys.chain.clone(), sys.spectrum.clone()).map_err(fail),
        Some(sys) => SpectralChain::numerical(sys.chain.clone()).map_err(fail),
        None => {
            let report = loaded.chain.validate(DEFAULT_TOL);
            if !report.passes() {
                return Err(CliError::Failure(format!("chain fails validation: {report}")));
            }
            SpectralChain::numerical(loaded.chain.clone()).map_err(fail)
        }
    }
}

fn execute(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Validate { spec, tol } => cmd_validate(&spec, tol),
        Command::Spectrum { spec, compare, tol, output } => cmd_spectrum(&spec, compare, tol, &output),
        Command::Evolve { spec, mode, from, init, steps, tol, output } => {
            cmd_evolve(&spec, mode, from, init.as_deref(), steps, tol, &output)
        }
        Command::Compare { spec, from, steps, output } => cmd_compare(&spec, from, steps, &output),
    }
}

fn cmd_validate(path: &Path, tol: f64) -> Result<i32, CliError> {
    let loaded = read_spec(path)?;
    let report = loaded.chain.validate(tol);
    println!("chain: {}", loaded.spec.describe());
    println!("vertices: {}", loaded.chain.size());
    if let Some(sys) = &loaded.analytic {
        if let crate::chain::WindowKind::Truncated { eps_tail, discarded_mass } = sys.chain.window().kind() {
            println!("truncated: eps_tail={eps_tail:e} discarded_mass={discarded_mass:e}");
            println!("resolved_modes: {}", sys.resolved_modes);
        }
    }
    println!("{report}");
    Ok(if report.passes() { 0 } else { 1 })
}

fn cmd_spectrum(path: &Path, compare: bool, tol: Option<f64>, output: &OutputArgs) -> Result<i32, CliError> {
    let loaded = read_spec(path)?;
    let mut columns = vec!["n", "kappa", "energy", "norm_sq"];
    if compare {
        columns.extend(["kappa_numerical", "deviation"]);
    }
    let mut table = ResultTable::new(&columns);
    header(&mut table, "spectrum", &loaded);

    let Some(sys) = &loaded.analytic else {
        if compare {
            return Err(CliError::Parse("--compare needs a family spec with closed-form eigenvalues".into()));
        }
        let s = spectral_chain(&loaded)?;
        table.meta("source", s.source().as_str());
        let spec = s.spectrum();
        for (rank, n) in spec.order_by_kappa().into_iter().enumerate() {
            table.push(vec![rank.into(), spec.kappa[n].into(), spec.energies[n].into(), 1.0.into()]);
        }
        emit(&table, output)?;
        return Ok(0);
    };

    let spec = &sys.spectrum;
    table.meta("source", spec.source.as_str()).meta("resolved_modes", sys.resolved_modes);
    let mut code = 0;
    let mut numerical_at = vec![None; spec.len()];
    if compare {
        let tol = tol.unwrap_or(if sys.is_truncated() { 1e-9 } else { 1e-10 });
        let num = SpectralChain::numerical(sys.chain.clone()).map_err(|e| CliError::Failure(e.to_string()))?;
        let num_sorted: Vec<f64> = num.spectrum().order_by_kappa().iter().map(|&i| num.spectrum().kappa[i]).collect();
        // Pair by rank; on truncated windows only the resolved modes take part.
        let mut modes: Vec<usize> = (0..sys.resolved_modes).collect();
        modes.sort_by(|&a, &b| spec.kappa[b].total_cmp(&spec.kappa[a]));
        let mut max_dev = 0.0f64;
        for (rank, &n) in modes.iter().enumerate() {
            numerical_at[n] = Some(num_sorted[rank]);
            max_dev = max_dev.max((num_sorted[rank] - spec.kappa[n]).abs());
        }
        table.meta("compared_modes", modes.len()).meta_float("max_deviation", max_dev).meta_float("tolerance", tol);
        if !(max_dev <= tol) {
            eprintln!("qmc: spectrum deviation {max_dev:e} exceeds {tol:e}");
            code = 1;
        }
    }
    for n in 0..spec.len() {
        let mut row: Vec<Cell> =
            vec![n.into(), spec.kappa[n].into(), spec.energies[n].into(), (spec.norm_consts[n] * spec.norm_consts[n]).into()];
        if compare {
            match numerical_at[n] {
                Some(v) => row.extend([v.into(), (v - spec.kappa[n]).abs().into()]),
                None => row.extend([Cell::Empty, Cell::Empty]),
            }
        }
        table.push(row);
    }
    emit(&table, output)?;
    Ok(code)
}

fn read_init(path: &Path) -> Result<Vec<Complex64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    #[derive(serde::Deserialize)]
    #[serde(untagged)]
    enum Entry {
        Real(f64),
        Complex((f64, f64)),
    }
    let entries: Vec<Entry> =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("invalid initial state: {e}")))?;
    Ok(entries
        .into_iter()
        .map(|e| match e {
            Entry::Real(r) => Complex64::new(r, 0.0),
            Entry::Complex((r, i)) => Complex64::new(r, i),
        })
        .collect())
}

fn cmd_evolve(
    path: &Path,
    mode: Mode,
    from: Option<usize>,
    init: Option<&Path>,
    steps: u64,
    tol: f64,
    output: &OutputArgs,
) -> Result<i32, CliError> {
    let loaded = read_spec(path)?;
    let sys = spectral_chain(&loaded)?;
    let m = sys.size();
    let tol = sys.tolerance(tol);
    let fail = |e: crate::Error| CliError::Failure(e.to_string());
    let init_values = init.map(read_init).transpose()?;
    if let Some(v) = &init_values {
        if v.len() != m {
            return Err(CliError::Failure(format!("initial state has {} entries, window has {m}", v.len())));
        }
    }
    let result = match mode {
        Mode::Classical => {
            let p0 = match (&init_values, from) {
                (Some(v), _) => {
                    if v.iter().any(|c| c.im != 0.0) {
                        return Err(CliError::Failure("classical initial distribution must be real".into()));
                    }
                    Distribution::with_tolerance(v.iter().map(|c| c.re).collect(), tol).map_err(fail)?
                }
                (None, Some(y)) => Distribution::delta(m, y).map_err(fail)?,
                (None, None) => unreachable!("clap requires --from or --init"),
            };
            classical_trajectory(&sys, &p0, steps).map_err(fail)?
        }
        Mode::Quantum => {
            let psi0 = match (init_values, from) {
                (Some(v), _) => QuantumState::with_tolerance(v, tol).map_err(fail)?,
                (None, Some(y)) => QuantumState::basis(m, y).map_err(fail)?,
                (None, None) => unreachable!("clap requires --from or --init"),
            };
            quantum_trajectory(&sys, &psi0, steps).map_err(fail)?
        }
    };

    let mut table = ResultTable::new(&["step", "x", "value"]);
    header(&mut table, "evolve", &loaded);
    let defect = result.max_normalisation_defect();
    table
        .meta("mode", result.kind.as_str())
        .meta("source", result.source.as_str())
        .meta("start", from.map_or_else(|| "init".to_string(), |y| y.to_string()))
        .meta("steps", steps)
        .meta_float("tolerance", tol)
        .meta_float("max_normalisation_defect", defect);
    for r in &result.records {
        for (x, v) in r.values.iter().enumerate() {
            table.push(vec![r.step.into(), x.into(), (*v).into()]);
        }
    }
    emit(&table, output)?;
    if defect > tol {
        eprintln!("qmc: normalisation defect {defect:e} exceeds {tol:e}");
        return Ok(1);
    }
    Ok(0)
}

fn cmd_compare(path: &Path, from: usize, steps: u64, output: &OutputArgs) -> Result<i32, CliError> {
    let loaded = read_spec(path)?;
    let sys = spectral_chain(&loaded)?;
    let m = sys.size();
    let fail = |e: crate::Error| CliError::Failure(e.to_string());
    let p0 = Distribution::delta(m, from).map_err(fail)?;
    let classical = classical_trajectory(&sys, &p0, steps).map_err(fail)?;
    let quantum = quantum_trajectory(&sys, &QuantumState::basis(m, from).map_err(fail)?, steps).map_err(fail)?;
    let lta = long_time_average_column(&sys, from).map_err(fail)?;
    let bound = convergence_bound(&sys, &p0).map_err(fail)?;
    let pi = sys.chain().pi().clone();
    let lta_dist = Distribution::from_raw(lta.clone());

    let mut table = ResultTable::new(&["quantity", "step", "x", "value"]);
    header(&mut table, "compare", &loaded);
    table
        .meta("source", sys.source().as_str())
        .meta("start", from)
        .meta("steps", steps)
        .meta_float("classical_rate", bound.rate)
        .meta_float("classical_constant", bound.constant)
        .meta_float("phase_gap", smallest_phase_gap(&sys).unwrap_or(0.0));
    for (c, q) in classical.records.iter().zip(&quantum.records) {
        let l = c.step;
        table.push(vec!["tv_classical".into(), l.into(), Cell::Empty, pi.total_variation(&c.values).into()]);
        table.push(vec!["tv_classical_bound".into(), l.into(), Cell::Empty, (0.5 * bound.at(l)).into()]);
        table.push(vec!["tv_quantum".into(), l.into(), Cell::Empty, lta_dist.total_variation(&q.values).into()]);
    }
    for (x, v) in lta.iter().enumerate() {
        table.push(vec!["long_time_average".into(), Cell::Empty, x.into(), (*v).into()]);
    }
    emit(&table, output)?;
    Ok(0)
}
