//! Command-line driver.
//!
//! Exit codes: 0 success, 1 unreadable or malformed input, 2 bad
//! configuration, 3 unreachable target state, 4 solver conflict budget
//! exhausted. `solve` follows the solver convention instead: 10 SAT, 20 UNSAT.

use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use satfuzz_core::target::check_validity_with;
use satfuzz_core::{
    build_graph, build_target_formula, coverage_curve, diff_graphs, encode, generate_with, measure, run_cgf,
    scan_convert, targets_from_diff, CircuitGraph, CnfFormula, CoverageReport, CurvePoint, GenConfig, GenError,
    GenReport, Netlist, Polarity, SatBackend, SatError, Solver, TargetSpec, ValidityVerdict,
};

use crate::external::ExternalSolver;
use crate::manifest::RunManifest;
use crate::report::{curve_rows, csv_string, target_rows, SummaryRow, TableRow, TrialOutcome};
use crate::{bench, blif, dimacs, export, patterns, targets};

pub const SAT_METHOD: &str = "sat-directed";
pub const CGF_METHOD: &str = "cgf";

#[derive(Debug, Parser)]
#[command(name = "satfuzz", version, about = "SAT-directed input generation and coverage for gate-level netlists")]
pub struct Cli {
    /// Write the run manifest (JSON) here instead of stderr.
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate diverse patterns that drive the targets to their values.
    Gen(GenArgs),
    /// Compare SAT-directed generation with the coverage-guided baseline.
    Compare(CompareArgs),
    /// Derive target files from the structural diff of two netlists.
    TargetsDiff(DiffArgs),
    /// Solve a DIMACS file with the built-in solver.
    Solve(SolveArgs),
    /// Render a netlist as Graphviz DOT.
    Dot(DotArgs),
    /// Simulate patterns and dump every node value.
    Sim(SimArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GenOptions {
    /// Pattern budget R.
    #[arg(short = 'R', long = "patterns", default_value_t = 100)]
    pub patterns: usize,
    /// Minimum pairwise Hamming distance.
    #[arg(long, default_value_t = 2)]
    pub dmin: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Consecutive too-close candidates tolerated before stopping.
    #[arg(long, default_value_t = 20)]
    pub retries: usize,
    /// Conflict cap per solver call.
    #[arg(long, value_name = "N")]
    pub conflict_budget: Option<u64>,
    /// External DIMACS solver command line, e.g. "kissat -q".
    #[arg(long, value_name = "CMD")]
    pub solver: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    pub netlist: PathBuf,
    pub targets: PathBuf,
    #[command(flatten)]
    pub options: GenOptions,
    /// CNF of the circuit with the targets as unit clauses.
    #[arg(long, value_name = "PATH")]
    pub dimacs_out: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub patterns_out: Option<PathBuf>,
    /// Summary CSV row (design, gates, nodes, inputs, ...).
    #[arg(long, value_name = "PATH")]
    pub report_out: Option<PathBuf>,
    /// Per-target coverage CSV.
    #[arg(long, value_name = "PATH")]
    pub coverage_out: Option<PathBuf>,
    /// Coverage after each pattern, as CSV.
    #[arg(long, value_name = "PATH")]
    pub curve_out: Option<PathBuf>,
    /// Fill the time column of the summary row.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    pub netlist: PathBuf,
    pub targets: PathBuf,
    #[command(flatten)]
    pub options: GenOptions,
    /// Baseline runs, each with its own seed.
    #[arg(long, default_value_t = 15)]
    pub trials: usize,
    /// Directory for curves.csv, summary.csv and manifest.json.
    #[arg(long, default_value = "compare-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolarityArg {
    #[value(name = "0")]
    Zero,
    #[value(name = "1")]
    One,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct DiffArgs {
    pub original: PathBuf,
    pub modified: PathBuf,
    #[arg(long, value_enum, default_value = "1")]
    pub polarity: PolarityArg,
    /// Target file; with `both`, `_0` and `_1` are added to the file stem.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// DIMACS file, or `-` for stdin.
    pub input: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_name = "N")]
    pub conflict_budget: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct DotArgs {
    pub netlist: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    pub netlist: PathBuf,
    pub patterns: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    InvalidTarget(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) => 1,
            CliError::Config(_) => 2,
            CliError::InvalidTarget(_) => 3,
            CliError::Budget(_) => 4,
        }
    }
}

impl From<SatError> for CliError {
    fn from(e: SatError) -> Self {
        match e {
            SatError::BudgetExhausted(_) => CliError::Budget(e.to_string()),
            SatError::InfeasibleCardinality { .. } => CliError::Config(e.to_string()),
            SatError::Backend(_) => CliError::Parse(e.to_string()),
        }
    }
}

impl From<GenError> for CliError {
    fn from(e: GenError) -> Self {
        match e {
            GenError::Sat(s) => s.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

fn read(path: &Path, manifest: &mut RunManifest) -> Result<String, CliError> {
    let bytes = if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).map(|_| buf)
    } else {
        fs::read(path)
    }
    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    manifest.record_input(path, &bytes);
    String::from_utf8(bytes).map_err(|_| CliError::Parse(format!("{}: not valid UTF-8", path.display())))
}

fn write(path: &Path, text: &str, manifest: &mut RunManifest) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.display().to_string(), source })?;
    }
    fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    manifest.output(path);
    Ok(())
}

/// Netlist file by extension: `.blif` is BLIF, anything else `.bench`.
pub fn load_netlist(path: &Path, manifest: &mut RunManifest) -> Result<Netlist, CliError> {
    let text = read(path, manifest)?;
    let located = |e: crate::SourceError| CliError::Parse(format!("{}: {e}", path.display()));
    let mut netlist = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("blif")) {
        let parsed = blif::parse_blif(&text).map_err(located)?;
        for w in &parsed.warnings {
            eprintln!("warning: {}: {w}", path.display());
        }
        parsed.netlist
    } else {
        bench::parse_bench(&text).map_err(located)?
    };
    if netlist.name.is_empty() {
        netlist.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    Ok(netlist)
}

pub struct Design {
    pub name: String,
    pub graph: CircuitGraph,
    pub formula: CnfFormula,
}

pub fn load_design(path: &Path, manifest: &mut RunManifest) -> Result<Design, CliError> {
    let netlist = load_netlist(path, manifest)?;
    let graph = manifest
        .time("graph", || build_graph(&scan_convert(&netlist)))
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let formula = manifest.time("encode", || encode(&graph));
    Ok(Design { name: netlist.name, graph, formula })
}

fn load_targets(path: &Path, graph: &CircuitGraph, manifest: &mut RunManifest) -> Result<TargetSpec, CliError> {
    let text = read(path, manifest)?;
    targets::parse_targets(&text, graph).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn backend(design: &Design, options: &GenOptions) -> Result<Box<dyn SatBackend>, CliError> {
    Ok(match &options.solver {
        None => {
            let mut s = Solver::from_formula(&design.formula, options.seed);
            s.set_conflict_budget(options.conflict_budget);
            Box::new(s)
        }
        Some(cmd) => {
            let mut s = ExternalSolver::from_command_line(cmd)
                .ok_or_else(|| CliError::Config("empty --solver command".to_string()))?;
            s.load(&design.formula);
            Box::new(s)
        }
    })
}

fn gen_config(options: &GenOptions) -> GenConfig {
    GenConfig {
        pattern_budget: options.patterns,
        d_min: options.dmin,
        retry_budget: options.retries,
        seed: options.seed,
        conflict_budget: options.conflict_budget,
    }
}

fn record_options(manifest: &mut RunManifest, options: &GenOptions) {
    manifest.set("patterns", options.patterns);
    manifest.set("d_min", options.dmin);
    manifest.set("seed", options.seed);
    manifest.set("retries", options.retries);
    manifest.set("conflict_budget", options.conflict_budget);
    manifest.set("solver", options.solver.clone());
}

/// Validity check followed by generation; a fresh backend serves both.
fn targeted_patterns(
    design: &Design,
    spec: &TargetSpec,
    options: &GenOptions,
    manifest: &mut RunManifest,
) -> Result<GenReport, CliError> {
    let config = gen_config(options);
    config.validate(design.graph.input_count())?;
    let mut solver = backend(design, options)?;
    let verdict = manifest.time("validity", || check_validity_with(solver.as_mut(), spec, &design.formula))?;
    if verdict == ValidityVerdict::Invalid {
        return Err(CliError::InvalidTarget(format!(
            "target state is unreachable: no input drives all {} targets to their values (UNSAT)",
            spec.len()
        )));
    }
    let lits = build_target_formula(spec, &design.formula);
    let report =
        manifest.time("generate", || generate_with(solver.as_mut(), &design.formula.input_vars, &lits, &config))?;
    Ok(report)
}

pub struct GenOutcome {
    pub design: Design,
    pub spec: TargetSpec,
    pub report: GenReport,
    pub coverage: CoverageReport,
    pub curve: Vec<CurvePoint>,
    pub row: TableRow,
}

pub fn cmd_gen(args: &GenArgs, manifest: &mut RunManifest) -> Result<GenOutcome, CliError> {
    record_options(manifest, &args.options);
    let design = load_design(&args.netlist, manifest)?;
    let spec = load_targets(&args.targets, &design.graph, manifest)?;
    if let Some(path) = &args.dimacs_out {
        let text = dimacs::write_dimacs(
            &design.formula,
            Some(&design.graph),
            &build_target_formula(&spec, &design.formula),
        );
        write(path, &text, manifest)?;
    }
    let report = targeted_patterns(&design, &spec, &args.options, manifest)?;
    let (coverage, curve) = manifest.time("coverage", || {
        let c = measure(&design.graph, &spec, &report.patterns);
        let k = coverage_curve(&design.graph, &spec, &report.patterns);
        c.and_then(|c| k.map(|k| (c, k)))
    })
    .map_err(|e| CliError::Parse(e.to_string()))?;
    let seconds = if args.timing { manifest.seconds("generate") } else { None };
    let row = TableRow::new(&design.name, &design.graph, &spec, &report, &coverage, seconds);

    if let Some(path) = &args.patterns_out {
        write(path, &patterns::write_patterns(&report.patterns, &design.graph), manifest)?;
    }
    if let Some(path) = &args.report_out {
        write(path, &csv_string(std::slice::from_ref(&row)), manifest)?;
    }
    if let Some(path) = &args.coverage_out {
        write(path, &csv_string(&target_rows(&design.graph, &coverage)), manifest)?;
    }
    if let Some(path) = &args.curve_out {
        write(path, &csv_string(&curve_rows(SAT_METHOD, 0, &curve)), manifest)?;
    }
    Ok(GenOutcome { design, spec, report, coverage, curve, row })
}

pub struct CompareOutcome {
    pub sat: TrialOutcome,
    pub cgf: Vec<TrialOutcome>,
    pub budget: usize,
    pub curves_csv: PathBuf,
    pub summary_csv: PathBuf,
}

/// Seed of baseline trial `t`.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    seed.wrapping_add(1 + t as u64)
}

pub fn cmd_compare(args: &CompareArgs, manifest: &mut RunManifest) -> Result<CompareOutcome, CliError> {
    if args.trials == 0 {
        return Err(CliError::Config("--trials must be positive".to_string()));
    }
    record_options(manifest, &args.options);
    manifest.set("trials", args.trials);
    let design = load_design(&args.netlist, manifest)?;
    let spec = load_targets(&args.targets, &design.graph, manifest)?;
    let budget = args.options.patterns;

    let report = targeted_patterns(&design, &spec, &args.options, manifest)?;
    let coverage_err = |e: satfuzz_core::CoverageError| CliError::Parse(e.to_string());
    let sat_cov = measure(&design.graph, &spec, &report.patterns).map_err(coverage_err)?;
    let sat_curve = coverage_curve(&design.graph, &spec, &report.patterns).map_err(coverage_err)?;
    let sat = TrialOutcome::from_report(&sat_cov);
    let mut curves = curve_rows(SAT_METHOD, 0, &sat_curve);

    let runs = manifest.time("baseline", || {
        (0..args.trials)
            .map(|t| run_cgf(&design.graph, &spec, budget, trial_seed(args.options.seed, t)))
            .collect::<Result<Vec<_>, _>>()
    });
    let runs = runs.map_err(|e| CliError::Config(e.to_string()))?;
    let mut cgf = Vec::with_capacity(runs.len());
    for (t, run) in runs.iter().enumerate() {
        curves.extend(curve_rows(CGF_METHOD, t, &run.curve));
        cgf.push(TrialOutcome::from_report(&run.report));
    }

    let summary = [SummaryRow::new(SAT_METHOD, &[sat], budget), SummaryRow::new(CGF_METHOD, &cgf, budget)];
    let curves_csv = args.out.join("curves.csv");
    let summary_csv = args.out.join("summary.csv");
    write(&curves_csv, &csv_string(&curves), manifest)?;
    write(&summary_csv, &csv_string(&summary), manifest)?;
    Ok(CompareOutcome { sat, cgf, budget, curves_csv, summary_csv })
}

/// Written target files, or the text when no `--out` was given.
pub fn cmd_targets_diff(args: &DiffArgs, manifest: &mut RunManifest) -> Result<Vec<(Option<PathBuf>, String)>, CliError> {
    let original = load_design(&args.original, manifest)?;
    let modified = load_design(&args.modified, manifest)?;
    let diff = diff_graphs(&original.graph, &modified.graph);
    for id in diff.touched() {
        eprintln!("{} {}", modified.graph.node(id).name, diff.reason[&id].tag());
    }
    let polarity = match args.polarity {
        PolarityArg::Zero => Polarity::Zero,
        PolarityArg::One => Polarity::One,
        PolarityArg::Both => Polarity::Both,
    };
    manifest.set("polarity", format!("{polarity:?}"));
    let specs = targets_from_diff(&diff, polarity);
    let values: &[u8] = match polarity {
        Polarity::Zero => &[0],
        Polarity::One => &[1],
        Polarity::Both => &[0, 1],
    };
    let mut written = Vec::new();
    for (i, value) in values.iter().enumerate() {
        let text = specs.get(i).map(|s| targets::write_targets(s, &modified.graph)).unwrap_or_default();
        let path = args.out.as_ref().map(|out| {
            if polarity == Polarity::Both {
                suffixed(out, &format!("_{}", value))
            } else {
                out.clone()
            }
        });
        if let Some(p) = &path {
            write(p, &text, manifest)?;
        }
        written.push((path, text));
    }
    Ok(written)
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}{suffix}"),
    };
    path.with_file_name(name)
}

pub fn cmd_solve(args: &SolveArgs, manifest: &mut RunManifest) -> Result<(String, bool), CliError> {
    let text = read(&args.input, manifest)?;
    let formula =
        dimacs::parse_dimacs(&text).map_err(|e| CliError::Parse(format!("{}: {e}", args.input.display())))?;
    let mut solver = Solver::from_formula(&formula, args.seed);
    solver.set_conflict_budget(args.conflict_budget);
    let result = manifest.time("solve", || solver.solve(&[]))?;
    Ok((dimacs::write_solver_output(&result), result.is_sat()))
}

fn emit(out: Option<&PathBuf>, text: &str, manifest: &mut RunManifest) -> Result<(), CliError> {
    match out {
        Some(p) => write(p, text, manifest),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cli: &Cli, manifest: &mut RunManifest) -> Result<i32, CliError> {
    match &cli.command {
        Command::Gen(args) => {
            let o = cmd_gen(args, manifest)?;
            println!(
                "{}: {} patterns, state coverage {:.2}%, site coverage {:.2}%, d_min {} d_max {}, {:?}",
                o.design.name,
                o.report.patterns.len(),
                o.coverage.state_coverage_pct,
                o.coverage.site_coverage_pct,
                o.report.observed_d_min,
                o.report.observed_d_max,
                o.report.stop_reason
            );
            if args.patterns_out.is_none() {
                print!("{}", patterns::write_patterns(&o.report.patterns, &o.design.graph));
            }
        }
        Command::Compare(args) => {
            let o = cmd_compare(args, manifest)?;
            let agg = crate::report::aggregate(&o.cgf, o.budget);
            println!(
                "{SAT_METHOD}: state {:.2}% after {} patterns (full at {})",
                o.sat.state_pct,
                o.sat.patterns,
                o.sat.full_state_or(o.budget)
            );
            println!(
                "{CGF_METHOD}: state mean {:.2}% [{:.2}, {:.2}] over {} trials (full at {:.2} on average)",
                agg.state_mean,
                agg.state_min,
                agg.state_max,
                o.cgf.len(),
                agg.full_state_at_mean
            );
            println!("wrote {} and {}", o.curves_csv.display(), o.summary_csv.display());
        }
        Command::TargetsDiff(args) => {
            for (path, text) in cmd_targets_diff(args, manifest)? {
                if path.is_none() {
                    print!("{text}");
                }
            }
        }
        Command::Solve(args) => {
            let (text, sat) = cmd_solve(args, manifest)?;
            print!("{text}");
            return Ok(if sat { 10 } else { 20 });
        }
        Command::Dot(args) => {
            let d = load_design(&args.netlist, manifest)?;
            emit(args.out.as_ref(), &export::to_dot(&d.graph), manifest)?;
        }
        Command::Sim(args) => {
            let d = load_design(&args.netlist, manifest)?;
            let text = read(&args.patterns, manifest)?;
            let pats = patterns::parse_patterns(&text, d.graph.input_count())
                .map_err(|e| CliError::Parse(format!("{}: {e}", args.patterns.display())))?;
            let dump = export::value_dump(&d.graph, &pats).map_err(|e| CliError::Parse(e.to_string()))?;
            emit(args.out.as_ref(), &dump, manifest)?;
        }
    }
    Ok(0)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gen(_) => "gen",
        Command::Compare(_) => "compare",
        Command::TargetsDiff(_) => "targets-diff",
        Command::Solve(_) => "solve",
        Command::Dot(_) => "dot",
        Command::Sim(_) => "sim",
    }
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let mut manifest = RunManifest::new(command_name(&cli.command));
    let code = match dispatch(&cli, &mut manifest) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    manifest.set("exit_code", code);
    let target = match (&cli.manifest, &cli.command) {
        (Some(p), _) => Some(p.clone()),
        (None, Command::Compare(a)) if code == 0 => Some(a.out.join("manifest.json")),
        _ => None,
    };
    match target {
        Some(p) => {
            if let Err(e) = fs::write(&p, manifest.to_json()) {
                eprintln!("error: {}: {e}", p.display());
                return if code == 0 { 1 } else { code };
            }
        }
        None => eprintln!("manifest: {}", manifest.to_compact_json()),
    }
    code
}
