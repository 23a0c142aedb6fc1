//! `fisher-eig`: ground-state eigenvalues of the quartic anharmonic
//! oscillator from Fisher-information Legendre structure, an independent
//! Schrödinger reference solver, and the validation suites tying the two
//! together.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage error, 3 solver
//! convergence failure.

mod report;
mod suites;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fisher_eig::benchmark::ROWS;
use fisher_eig::oracle::{cramer_rao_check, solve_ground_state, SolverConfig};
use fisher_eig::quartic::{infer_ground_state, Convention, OscillatorSpec};
use fisher_eig::Error as CoreError;
use report::{render_csv, render_json, render_text, Field, RunReport, TableRow};
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "fisher-eig",
    version,
    about = "Quartic-oscillator ground states from Fisher-information inference"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Infer F2, F4, alpha, E, I, the moments and the CR product
    Infer(InferArgs),
    /// Tabulate E_num (reference solver), E_inferred and the CR product
    Table(TableArgs),
    /// Solve the ground state with the reference Schrödinger solver
    Oracle(OracleArgs),
    /// Run the validation suites
    Check(CheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Literature,
    Paper,
}

impl From<ConventionArg> for Convention {
    fn from(value: ConventionArg) -> Self {
        match value {
            ConventionArg::Literature => Convention::Literature,
            ConventionArg::Paper => Convention::Paper,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Identities,
    Table,
    All,
}

#[derive(Args)]
struct InferArgs {
    /// Harmonic coefficient k
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Anharmonicity constant (a single value)
    #[arg(long)]
    lambda: String,
    #[arg(long, value_enum, default_value_t = ConventionArg::Literature)]
    convention: ConventionArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// Harmonic coefficient k
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Comma-separated anharmonicity values; defaults to the benchmark grid
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Literature)]
    convention: ConventionArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Basis size of the reference solver
    #[arg(long, default_value_t = 256)]
    basis_size: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Harmonic coefficient k
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Anharmonicity constant (a single value)
    #[arg(long)]
    lambda: String,
    #[arg(long, value_enum, default_value_t = ConventionArg::Literature)]
    convention: ConventionArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Basis size of the reference solver
    #[arg(long, default_value_t = 256)]
    basis_size: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Basis size of the reference solver
    #[arg(long, default_value_t = 256)]
    basis_size: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    /// Bad argument values: exit 2 (clap parse errors also exit 2).
    Usage(String),
    /// One or more checks or rows failed: exit 1.
    CheckFailed,
    /// The reference solver did not converge: exit 3.
    Convergence(String),
    Io(String),
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::Convergence(msg) => CliError::Convergence(msg),
            CoreError::Domain(msg) => CliError::Usage(msg),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(CliError::CheckFailed) => {
            eprintln!("error: one or more checks failed");
            1
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Convergence(msg)) => {
            eprintln!("error: convergence: {msg}");
            3
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::process::exit(code);
}

fn parse_lambda_list(raw: &str) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    for token in raw.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err(CliError::Usage(format!(
                "empty entry in --lambda list {raw:?}"
            )));
        }
        let value: f64 = token
            .parse()
            .map_err(|_| CliError::Usage(format!("cannot parse --lambda entry {token:?}")))?;
        if !value.is_finite() || value < 0.0 {
            return Err(CliError::Usage(format!(
                "--lambda entries must be finite and >= 0, got {value}"
            )));
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(CliError::Usage("--lambda list is empty".into()));
    }
    Ok(values)
}

fn parse_single_lambda(raw: &str) -> Result<f64, CliError> {
    let values = parse_lambda_list(raw)?;
    if values.len() != 1 {
        return Err(CliError::Usage(
            "this command takes a single --lambda value".into(),
        ));
    }
    Ok(values[0])
}

fn emit(report: &RunReport, format: FormatArg, out: Option<&PathBuf>) -> Result<(), CliError> {
    let rendered = match format {
        FormatArg::Text => render_text(report),
        FormatArg::Csv => render_csv(report),
        FormatArg::Json => render_json(report),
    };
    match out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            std::io::stdout()
                .flush()
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Infer(args) => cmd_infer(args),
        Command::Table(args) => cmd_table(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Check(args) => cmd_check(args),
    }
}

fn cmd_infer(args: InferArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let lambda = parse_single_lambda(&args.lambda)?;
    let spec = OscillatorSpec::new(args.k, lambda, args.convention.into())?;
    let result = infer_ground_state(&spec)?;

    let mut report = RunReport::new(format!(
        "infer --k {} --lambda {} --convention {}",
        args.k,
        lambda,
        match spec.convention {
            Convention::Literature => "literature",
            Convention::Paper => "paper",
        }
    ));
    report.fields = vec![
        Field { name: "F2", value: Some(result.f2) },
        Field { name: "F4", value: Some(result.f4) },
        Field { name: "alpha", value: Some(result.alpha) },
        Field { name: "E", value: Some(result.energy) },
        Field { name: "I", value: Some(result.fisher_info) },
        Field { name: "x2", value: Some(result.x2) },
        Field { name: "x4", value: result.x4 },
        Field { name: "f", value: Some(result.cr_product) },
    ];
    report.finalize();
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    emit(&report, args.format, args.out.as_ref())
}

fn cmd_table(args: TableArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let lambdas = match &args.lambda {
        Some(raw) => parse_lambda_list(raw)?,
        None => ROWS.iter().map(|row| row.lambda).collect(),
    };
    let config = SolverConfig::hermite(args.basis_size)?;
    let convention: Convention = args.convention.into();

    let mut report = RunReport::new(format!(
        "table --k {} --lambda {} --basis-size {}",
        args.k,
        lambdas
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(","),
        args.basis_size
    ));

    let mut convergence_failure = false;
    for &lambda in &lambdas {
        let reference = if matches!(convention, Convention::Literature) && args.k == 1.0 {
            fisher_eig::benchmark::reference_for(lambda)
        } else {
            None
        };
        let spec = match OscillatorSpec::new(args.k, lambda, convention) {
            Ok(spec) => spec,
            Err(err) => {
                report.rows.push(
                    TableRow {
                        lambda,
                        e_num: None,
                        e_inferred: None,
                        cr_product: None,
                        e_num_reference: None,
                        e_inferred_reference: None,
                        cr_product_reference: None,
                        error: Some(err.to_string()),
                    }
                    .with_references(reference),
                );
                continue;
            }
        };
        let inferred = infer_ground_state(&spec);
        let solved = solve_ground_state(&spec, &config);
        let mut error = None;
        if let Err(err) = &solved {
            if matches!(err, CoreError::Convergence(_)) {
                convergence_failure = true;
            }
            error = Some(err.to_string());
        }
        if let Err(err) = &inferred {
            error = Some(err.to_string());
        }
        report.rows.push(
            TableRow {
                lambda,
                e_num: solved.as_ref().ok().map(|sol| sol.eigenvalue),
                e_inferred: inferred.as_ref().ok().map(|r| r.energy),
                cr_product: inferred.as_ref().ok().map(|r| r.cr_product),
                e_num_reference: None,
                e_inferred_reference: None,
                cr_product_reference: None,
                error,
            }
            .with_references(reference),
        );
    }

    report.summary.max_reference_deviation = {
        let mut worst: Option<f64> = None;
        for row in &report.rows {
            if let (Some(reference), Some(e)) = (row.e_inferred_reference, row.e_inferred) {
                let dev = (e - reference).abs();
                worst = Some(worst.map_or(dev, |w: f64| w.max(dev)));
            }
        }
        worst
    };
    report.finalize();
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    emit(&report, args.format, args.out.as_ref())?;

    if convergence_failure {
        return Err(CliError::Convergence(
            "one or more table rows did not converge".into(),
        ));
    }
    if report.summary.rows_failed > 0 {
        return Err(CliError::CheckFailed);
    }
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let lambda = parse_single_lambda(&args.lambda)?;
    let spec = OscillatorSpec::new(args.k, lambda, args.convention.into())?;
    let config = SolverConfig::hermite(args.basis_size)?;
    let sol = solve_ground_state(&spec, &config)?;

    let mut report = RunReport::new(format!(
        "oracle --k {} --lambda {} --basis-size {}",
        args.k, lambda, args.basis_size
    ));
    report.fields = vec![
        Field { name: "E_num", value: Some(sol.eigenvalue) },
        Field { name: "refinement_shift", value: Some(sol.refinement_shift) },
        Field { name: "alpha", value: Some(sol.alpha()) },
        Field { name: "x2", value: Some(sol.x2) },
        Field { name: "x4", value: Some(sol.x4) },
        Field { name: "I", value: Some(sol.fisher_info) },
        Field { name: "momentum_variance", value: Some(sol.momentum_variance) },
        Field { name: "cr_product", value: Some(cramer_rao_check(&sol)) },
    ];
    report.finalize();
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    emit(&report, args.format, args.out.as_ref())
}

fn cmd_check(args: CheckArgs) -> Result<(), CliError> {
    let start = Instant::now();
    let config = SolverConfig::hermite(args.basis_size)?;
    let suite_name = match args.suite {
        SuiteArg::Identities => "identities",
        SuiteArg::Table => "table",
        SuiteArg::All => "all",
    };
    let mut report = RunReport::new(format!(
        "check --suite {suite_name} --basis-size {}",
        args.basis_size
    ));

    if matches!(args.suite, SuiteArg::Identities | SuiteArg::All) {
        report.checks.extend(suites::identity_suite(&config)?);
    }
    if matches!(args.suite, SuiteArg::Table | SuiteArg::All) {
        let (checks, max_dev) = suites::table_suite(&config)?;
        report.checks.extend(checks);
        report.summary.max_reference_deviation = Some(max_dev);
    }

    report.finalize();
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let pass = report.summary.pass;
    emit(&report, args.format, args.out.as_ref())?;
    if pass {
        Ok(())
    } else {
        Err(CliError::CheckFailed)
    }
}
