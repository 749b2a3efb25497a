//! Command-line front end.
//!
//! Each subcommand loads a [`NetworkDocument`] and prints a human-readable
//! report, or a JSON result document with `--json`. Exit codes: 0 success,
//! 1 failed cross-check or other error, 2 parse error, 3 unsupported mode,
//! 4 size limit.

pub mod document;

use std::io::Write;
use std::path::{Path as FsPath, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::capacity::{fd_capacity, min_cut_value};
use crate::diamond::{self, DiamondNetwork, HdActivation};
use crate::error::Error;
use crate::model::{self, DuplexMode, Network};
use crate::oracle::{self, DEFAULT_MAX_STATES};
use crate::paths::{self, DEFAULT_MAX_PATHS};
use crate::rational::{self, Rational};
use crate::scheduler::{self, Schedule};

pub use document::{
    LinkEntry, LoadedNetwork, NetworkDocument, ParseError, ScheduleDocument, ScheduleEntry,
};

#[derive(Debug, Parser)]
#[command(name = "relaycap", version, about = "Approximate capacity and scheduling for 1-2-1 relay networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: GlobalOptions,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOptions {
    /// Emit a machine-readable JSON result document.
    #[arg(long, global = true)]
    pub json: bool,
    /// Rationalization tolerance for decimal capacities, as "p/q".
    #[arg(long, global = true, value_name = "P/Q")]
    pub epsilon: Option<String>,
    /// Maximum number of enumerated paths.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_PATHS)]
    pub max_paths: usize,
    /// Maximum number of enumerated network states.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STATES)]
    pub max_states: usize,
}

impl Default for GlobalOptions {
    fn default() -> Self {
        GlobalOptions {
            json: false,
            epsilon: None,
            max_paths: DEFAULT_MAX_PATHS,
            max_states: DEFAULT_MAX_STATES,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the approximate capacity.
    Capacity {
        file: PathBuf,
        /// Also print the bracket containing the true capacity.
        #[arg(long)]
        gap: bool,
    },
    /// Compute an optimal schedule of network states.
    Schedule {
        file: PathBuf,
        /// Simulate the schedule and print the achieved rate.
        #[arg(long)]
        verify: bool,
        /// Verify this schedule document instead of computing one.
        #[arg(long, value_name = "FILE")]
        schedule: Option<PathBuf>,
        /// Write the schedule document to FILE.
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Solve the path program and report sparsity and the best single path.
    Paths { file: PathBuf },
    /// Cross-check every available method on one network.
    Check { file: PathBuf },
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Unsupported(String),
    SizeLimit(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::SizeLimit(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Unsupported(m) | CliError::SizeLimit(m) | CliError::Failed(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeLimit { .. } => CliError::SizeLimit(e.to_string()),
            Error::UnsupportedMode(_) => CliError::Unsupported(e.to_string()),
            Error::InvalidNetwork(_) => CliError::Parse(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

/// What a subcommand produced: report lines for stdout, warnings for
/// stderr, and the JSON result document.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub lines: Vec<String>,
    pub warnings: Vec<String>,
    pub json: Value,
    /// Set when a cross-check disagreed.
    pub failed: bool,
}

/// Parses `args` (including the program name), runs the subcommand and
/// writes to `out`/`err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render().ansi())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            for w in &report.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            if cli.options.json {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("json"));
            } else {
                for line in &report.lines {
                    let _ = writeln!(out, "{line}");
                }
            }
            i32::from(report.failed)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let opts = &cli.options;
    match &cli.command {
        Command::Capacity { file, gap } => cmd_capacity(&load(file, opts)?, opts, *gap),
        Command::Schedule {
            file,
            verify,
            schedule,
            output,
        } => {
            let loaded = load(file, opts)?;
            let given = match schedule {
                Some(path) => Some(
                    ScheduleDocument::parse(&read(path)?)
                        .and_then(|d| d.to_schedule())
                        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?,
                ),
                None => None,
            };
            let report = cmd_schedule(&loaded, opts, *verify, given)?;
            if let Some(path) = output {
                let doc = serde_json::to_string_pretty(&report.json["schedule"]).expect("json");
                std::fs::write(path, doc + "\n")
                    .map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))?;
            }
            Ok(report)
        }
        Command::Paths { file } => cmd_paths(&load(file, opts)?, opts),
        Command::Check { file } => cmd_check(&load(file, opts)?, opts),
    }
}

fn read(path: &FsPath) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Failed(format!("{}: {e}", path.display())))
}

/// Reads and parses a network file, applying `--epsilon` if given.
pub fn load(path: &FsPath, opts: &GlobalOptions) -> Result<LoadedNetwork, CliError> {
    let text = read(path)?;
    load_str(&text, opts).map_err(|e| match e {
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn load_str(text: &str, opts: &GlobalOptions) -> Result<LoadedNetwork, CliError> {
    let epsilon = match &opts.epsilon {
        Some(s) => Some(rational::parse_exact(s).map_err(|e| CliError::Parse(format!("--epsilon: {e}")))?),
        None => None,
    };
    NetworkDocument::parse(text)
        .and_then(|doc| doc.to_network(epsilon.as_ref()))
        .map_err(|e| CliError::Parse(e.to_string()))
}

fn exact(r: &Rational) -> String {
    format!("{} ({})", rational::to_string(r), rational::to_decimal(r))
}

fn rationalization_warning(loaded: &LoadedNetwork) -> Option<String> {
    (!loaded.rationalized.is_empty()).then(|| {
        format!(
            "{} decimal capacities rounded down with epsilon = {}",
            loaded.rationalized.len(),
            rational::to_string(&loaded.epsilon)
        )
    })
}

/// Capacity with the method used and any warning.
fn compute_capacity(network: &Network, opts: &GlobalOptions) -> Result<(Rational, &'static str, Option<String>), CliError> {
    match network.mode() {
        DuplexMode::FullDuplex => Ok((fd_capacity(network)?.value, "flow program", None)),
        DuplexMode::HalfDuplex => match DiamondNetwork::from_network(network) {
            Some(d) => Ok((diamond::diamond_capacity(&d)?.value, "diamond relay program", None)),
            None => {
                let warning = format!(
                    "half-duplex network is not a diamond; enumerating network states (up to {}), \
                     which grows exponentially with the number of relays",
                    opts.max_states
                );
                let (v, _) = oracle::brute_force_capacity(network, opts.max_states)?;
                Ok((v, "state enumeration", Some(warning)))
            }
        },
    }
}

pub fn cmd_capacity(loaded: &LoadedNetwork, opts: &GlobalOptions, with_gap: bool) -> Result<Report, CliError> {
    let network = &loaded.network;
    let mut report = Report::default();
    report.warnings.extend(rationalization_warning(loaded));
    let (value, method, warning) = compute_capacity(network, opts)?;
    report.warnings.extend(warning);
    report.lines.push(format!("capacity = {}", exact(&value)));
    let mut doc = json!({
        "capacity": rational::to_string(&value),
        "decimal": rational::to_decimal(&value),
        "method": method,
    });
    if with_gap {
        let gap = model::gap(network.n_relays(), network.mode());
        let upper = rational::to_f64(&value) + gap;
        report.lines.push(format!("gap = {} bits", rational::format_sig(gap, 6)));
        report.lines.push(format!(
            "true capacity in [{}, {}]",
            rational::to_decimal(&value),
            rational::format_sig(upper, 6)
        ));
        doc["gap"] = json!(gap);
        doc["upper_bound"] = json!(upper);
    }
    report.json = doc;
    Ok(report)
}

pub fn cmd_schedule(
    loaded: &LoadedNetwork,
    _opts: &GlobalOptions,
    verify: bool,
    given: Option<Schedule>,
) -> Result<Report, CliError> {
    let network = &loaded.network;
    let mut report = Report::default();
    report.warnings.extend(rationalization_warning(loaded));

    let (capacity, schedule, flow) = match (network.mode(), given) {
        (_, Some(s)) => {
            let cut = min_cut_value(network, &s.activation())?;
            (None, s, cut.flow)
        }
        (DuplexMode::FullDuplex, None) => {
            let cap = fd_capacity(network)?;
            let s = scheduler::bvn_schedule(&cap.activation, network.n_relays())?;
            (Some(cap.value), s, cap.flow)
        }
        (DuplexMode::HalfDuplex, None) => {
            let d = DiamondNetwork::from_network(network).ok_or_else(|| {
                CliError::Unsupported(
                    "half-duplex schedules are only constructed for diamond networks".into(),
                )
            })?;
            let sol = diamond::diamond_capacity(&d)?;
            let flow = HdActivation::from_utilization(&d, &sol.x).flow(&d);
            (Some(sol.value), diamond::hd_schedule(&d)?, flow)
        }
    };

    let doc = ScheduleDocument::from_schedule(&schedule);
    if let Some(c) = &capacity {
        report.lines.push(format!("capacity = {}", exact(c)));
    }
    report.lines.push(format!("states = {}", schedule.len()));
    for (state, d) in schedule.entries() {
        report.lines.push(format!("  {:<14} {state}", rational::to_string(d)));
    }
    let mut json_doc = json!({ "schedule": doc.to_value() });
    if let Some(c) = &capacity {
        json_doc["capacity"] = json!(rational::to_string(c));
    }
    if verify {
        let rate = scheduler::simulate(network, &schedule, &flow)?;
        report.lines.push(format!("verified rate = {}", exact(&rate)));
        json_doc["verified_rate"] = json!(rational::to_string(&rate));
    }
    report.json = json_doc;
    Ok(report)
}

pub fn cmd_paths(loaded: &LoadedNetwork, opts: &GlobalOptions) -> Result<Report, CliError> {
    let network = &loaded.network;
    let mut report = Report::default();
    report.warnings.extend(rationalization_warning(loaded));
    let sol = paths::solve_p1(network, opts.max_paths)?;
    let sparsity = paths::sparsity_report(&sol, network);

    report.lines.push(format!("capacity = {}", exact(&sol.value)));
    report.lines.push(format!("{:<20} {:<16} {}", "path", "x_p", "C_p"));
    let mut rows = Vec::new();
    for (p, x) in sol.active() {
        report.lines.push(format!(
            "{:<20} {:<16} {}",
            p.to_string(),
            rational::to_string(x),
            rational::to_string(&p.capacity())
        ));
        rows.push(json!({
            "nodes": p.nodes(),
            "utilization": rational::to_string(x),
            "capacity": rational::to_string(&p.capacity()),
        }));
    }
    let verdict = |ok: bool| if ok { "ok" } else { "VIOLATED" };
    report.lines.push(format!(
        "active paths = {} (bound 2N+2 = {}: {})",
        sparsity.active_count,
        sparsity.bound,
        verdict(sparsity.ok)
    ));
    let mut doc = json!({
        "capacity": rational::to_string(&sol.value),
        "paths": rows,
        "sparsity": { "active": sparsity.active_count, "bound": sparsity.bound, "ok": sparsity.ok },
    });
    if let Some(t) = &sparsity.two_layer {
        report.lines.push(format!(
            "two-layer bound 2M+1 = {} with M = {}: {} (soft check)",
            t.bound,
            t.relays_per_layer,
            verdict(t.ok)
        ));
        doc["two_layer"] = json!({ "relays_per_layer": t.relays_per_layer, "bound": t.bound, "ok": t.ok });
    }
    match paths::best_path(network) {
        Ok((p, c)) => {
            let ratio = if sol.value == Rational::from_integer(0.into()) {
                Rational::from_integer(1.into())
            } else {
                &c / &sol.value
            };
            report.lines.push(format!(
                "best path {p}: C = {}, ratio to capacity = {}",
                exact(&c),
                exact(&ratio)
            ));
            doc["best_path"] = json!({
                "nodes": p.nodes(),
                "capacity": rational::to_string(&c),
                "ratio": rational::to_string(&ratio),
            });
        }
        Err(Error::NotFound(_)) => report.lines.push("best path: none".into()),
        Err(e) => return Err(e.into()),
    }
    report.json = doc;
    Ok(report)
}

pub fn cmd_check(loaded: &LoadedNetwork, opts: &GlobalOptions) -> Result<Report, CliError> {
    let network = &loaded.network;
    let mut report = Report::default();
    report.warnings.extend(rationalization_warning(loaded));
    let mut results: Vec<(&str, Rational)> = Vec::new();

    match network.mode() {
        DuplexMode::FullDuplex => {
            let cap = fd_capacity(network)?;
            results.push(("flow program", cap.value.clone()));
            results.push(("path program", paths::solve_p1(network, opts.max_paths)?.value));
            results.push(("state enumeration", oracle::brute_force_capacity(network, opts.max_states)?.0));
            results.push(("min cut", min_cut_value(network, &cap.activation)?.value));
        }
        DuplexMode::HalfDuplex => {
            let (oracle_value, oracle_schedule) = oracle::brute_force_capacity(network, opts.max_states)?;
            if let Some(d) = DiamondNetwork::from_network(network) {
                results.push(("activation program", diamond::solve_hd_activation(&d)?.1));
                results.push(("diamond relay program", diamond::diamond_capacity(&d)?.value));
            }
            results.push(("state enumeration", oracle_value));
            results.push(("cut enumeration", oracle::exhaustive_min_cut(network, &oracle_schedule)?));
        }
    }

    let reference = results[0].1.clone();
    let mut rows = Vec::new();
    for (name, value) in &results {
        let pass = *value == reference;
        report.failed |= !pass;
        report.lines.push(format!(
            "{:<22} {:<24} {}",
            name,
            exact(value),
            if pass { "PASS" } else { "FAIL" }
        ));
        rows.push(json!({ "method": name, "value": rational::to_string(value), "pass": pass }));
    }
    report
        .lines
        .push(format!("result: {}", if report.failed { "FAIL" } else { "PASS" }));
    report.json = json!({
        "capacity": rational::to_string(&reference),
        "methods": rows,
        "pass": !report.failed,
    });
    Ok(report)
}
