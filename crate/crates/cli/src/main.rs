use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use copossible_cli::{parse_request, render_text, run, run_suite_task, CliError, Report, Settings, Task};

/// Environment variable naming a directory that receives the report file
/// when `--output` is not given.
const REPORT_DIR_ENV: &str = "COPOSSIBLE_REPORT_DIR";

#[derive(Parser)]
#[command(name = "copossible", version, about = "Decide subobject independence on finite structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide independence of the pair in the request.
    Decide(Common),
    /// Decide compatibility of the pair in the request.
    Compat(Common),
    /// Tensor independence (finset, finvect) or the tensor operation check (opalg).
    Tensor(Common),
    /// Run the bundled claim suite.
    Suite {
        /// Run only these claims (repeatable).
        #[arg(long = "claim")]
        claims: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Adjudicate atom splits of a Boolean algebra.
    Adjudicate(Common),
    /// Audit a causal site assignment.
    Audit(Common),
    /// Decide every subobject pair of the ambient structure.
    Enumerate(Common),
}

#[derive(Args)]
struct Common {
    /// Request file; `-` reads standard input.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Limit on extension checks (overrides the request budget).
    #[arg(long)]
    budget: Option<u128>,
    /// Numeric tolerance (overrides the request).
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    report: Format,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn read_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    match path {
        None => Err(CliError::Missing("--input".into())),
        Some(p) if p.as_os_str() == "-" => Ok(std::io::read_to_string(std::io::stdin())?),
        Some(p) => Ok(std::fs::read_to_string(p)?),
    }
}

fn execute(task: Task, common: &Common, claims: &[String]) -> Result<Report, CliError> {
    let mut settings = Settings::default();
    if task == Task::Suite {
        if let Some(b) = common.budget {
            settings.budget.max_checks = b;
        }
        return run_suite_task(claims, &settings);
    }
    let req = parse_request(&read_input(&common.input)?)?;
    if let Some(o) = req.budget {
        settings.budget = o.apply(settings.budget);
    }
    settings.tol = req.tol;
    if let Some(b) = common.budget {
        settings.budget.max_checks = b;
    }
    if common.tol.is_some() {
        settings.tol = common.tol;
    }
    run(task, &req, &settings)
}

/// Writes `text` to `path` through a temporary file in the same directory.
fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (task, common, claims) = match &cli.command {
        Command::Decide(c) => (Task::Decide, c, &[][..]),
        Command::Compat(c) => (Task::Compat, c, &[][..]),
        Command::Tensor(c) => (Task::Tensor, c, &[][..]),
        Command::Suite { claims, common } => (Task::Suite, common, claims.as_slice()),
        Command::Adjudicate(c) => (Task::Adjudicate, c, &[][..]),
        Command::Audit(c) => (Task::Audit, c, &[][..]),
        Command::Enumerate(c) => (Task::Enumerate, c, &[][..]),
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(common.jobs).build_global() {
        eprintln!("copossible: thread pool: {e}");
        return ExitCode::from(1);
    }
    let report = execute(task, common, claims).unwrap_or_else(|e| {
        eprintln!("copossible: {e}");
        Report::error(task, None, &e)
    });
    let text = match common.report {
        Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize") + "\n",
        Format::Text => render_text(&report),
    };
    let ext = match common.report {
        Format::Json => "json",
        Format::Text => "txt",
    };
    let target = common.output.clone().or_else(|| {
        std::env::var_os(REPORT_DIR_ENV).map(|d| PathBuf::from(d).join(format!("{}.{ext}", task_name(task))))
    });
    let written = match &target {
        Some(path) => write_atomic(path, &text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("copossible: writing report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(report.exit_code() as u8)
}

fn task_name(task: Task) -> String {
    serde_json::to_value(task).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}
