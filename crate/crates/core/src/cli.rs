//! Command-line front end.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::census::{group_census, monoid_census, run_experiment, Experiment};
use crate::error::{Error, Result};
use crate::groups::named_monoid;
use crate::monoid::{cyclic_monoid, FiniteMonoid};
use crate::verify::suites::{run_suite, Scope, SUITES};
use crate::verify::SuiteReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "powmon",
    version,
    about = "Finite monoids and their reduced power monoids"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a monoid and print its table and element profile.
    Construct {
        #[command(subcommand)]
        source: Source,
    },
    /// Run a verification suite.
    Verify {
        /// all, lemma21, lemma22, lemma24, prop25, lemma31, thm32 or section4.
        suite: String,
        #[command(flatten)]
        common: Common,
        /// Restrict section4 to one pair, written `h:k`.
        #[arg(long)]
        pair: Option<String>,
        /// Restrict lemma31 to one monoid.
        #[arg(long)]
        monoid: Option<String>,
        /// Exponent for lemma31.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Compare power-monoid and base isomorphism over every pair of a census.
    Experiment {
        mode: Mode,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Subcommand)]
pub enum Source {
    /// Read a Cayley table file.
    Table { file: PathBuf },
    /// A named monoid such as z6, d4, q8, klein, z2xz3, idem2 or cm2-2.
    Named { name: String },
    /// Cyclic monoid with the given index and period.
    Cyclic { index: usize, period: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Groups,
    Monoids,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Largest base order to include.
    #[arg(long)]
    pub max_order: Option<usize>,
    /// Node budget per power-monoid search.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Seed for randomized controls.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Fail unless a finding occurs, optionally from the named checker.
    #[arg(long, num_args = 0..=1, default_missing_value = "")]
    pub expect_violation: Option<String>,
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Construct { source } => {
            let m = match source {
                Source::Table { file } => {
                    let text = std::fs::read_to_string(&file)
                        .map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
                    FiniteMonoid::parse_table(&text)?
                }
                Source::Named { name } => named_monoid(&name)?,
                Source::Cyclic { index, period } => cyclic_monoid(index, period)?,
            };
            write_io(stdout, &describe(&m))?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            suite,
            common,
            pair,
            monoid,
            n,
        } => {
            if suite != "all" && !SUITES.contains(&suite.as_str()) {
                return Err(Error::UnknownName(suite));
            }
            let mut scope = Scope::default();
            if let Some(max) = common.max_order {
                scope = scope.with_max_order(max);
            }
            scope.budget = common.budget;
            scope.seed = common.seed;
            scope.monoid = monoid;
            scope.exponent = n;
            scope.pair = match pair {
                None => None,
                Some(p) => {
                    let (h, k) = p
                        .split_once(':')
                        .ok_or_else(|| Error::UnknownName(format!("pair {p}")))?;
                    Some((h.to_string(), k.to_string()))
                }
            };
            let report = with_jobs(common.jobs, || run_suite(&suite, &scope))?;
            let mut text = header(&format!("verify {suite}"), common.seed);
            text.push_str(&format!(
                "# scope\tmonoid_order={}\tgroup_order={}\tpower_group_order={}\tbudget={}\n",
                scope.monoid_order,
                scope.group_order,
                scope.power_group_order,
                budget_text(scope.budget)
            ));
            text.push_str(&render_suite(&report));
            emit(stdout, common.out.as_ref(), &text)?;
            Ok(suite_exit(&report, common.expect_violation.as_deref()))
        }
        Command::Experiment { mode, common } => {
            let start = Instant::now();
            let census = match mode {
                Mode::Groups => group_census(common.max_order.unwrap_or(6))?,
                Mode::Monoids => monoid_census(common.max_order.unwrap_or(2))?,
            };
            let exp = with_jobs(common.jobs, || Ok(run_experiment(&census, common.budget)))?;
            let mut text = header(
                &format!(
                    "experiment {}",
                    if mode == Mode::Groups {
                        "groups"
                    } else {
                        "monoids"
                    }
                ),
                common.seed,
            );
            text.push_str(&format!("# budget={}\n", budget_text(common.budget)));
            text.push_str(&format!("# wall_ms={}\n", start.elapsed().as_millis()));
            text.push_str(Experiment::HEADER);
            text.push('\n');
            for r in &exp.records {
                text.push_str(&r.tsv(&census));
                text.push('\n');
            }
            for line in exp.summary_lines(&census) {
                text.push_str(&line);
                text.push('\n');
            }
            emit(stdout, common.out.as_ref(), &text)?;
            Ok(experiment_exit(
                &exp,
                &census,
                common.expect_violation.is_some(),
            ))
        }
    }
}

fn budget_text(budget: Option<u64>) -> String {
    budget.map_or_else(|| "none".to_string(), |b| b.to_string())
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match jobs {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::PreconditionViolated(format!("thread pool: {e}")))?
            .install(f),
    }
}

fn header(command: &str, seed: u64) -> String {
    let ts = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!(
        "# powmon {} {command}\n# seed={seed}\n# timestamp={ts}\n",
        env!("CARGO_PKG_VERSION")
    )
}

/// Record lines followed by the summary block.
pub fn render_suite(report: &SuiteReport) -> String {
    let mut text = String::from("checker\tinput\tstatus\twitness\n");
    for r in &report.records {
        text.push_str(&r.to_string());
        text.push('\n');
    }
    let failures = report.failures().count();
    text.push_str(&format!("summary\tcases\t{}\n", report.cases()));
    text.push_str(&format!("summary\tfailures\t{failures}\n"));
    text.push_str(&format!(
        "summary\tfindings\t{}\n",
        report.findings().count()
    ));
    text.push_str(&format!(
        "summary\tstatus\t{}\n",
        if failures == 0 { "pass" } else { "fail" }
    ));
    text
}

fn suite_exit(report: &SuiteReport, expect: Option<&str>) -> i32 {
    if !report.passed() {
        return EXIT_FAILURE;
    }
    match expect {
        None => EXIT_OK,
        Some(checker) => {
            let found = report
                .findings()
                .any(|r| checker.is_empty() || r.checker == checker);
            if found {
                EXIT_OK
            } else {
                EXIT_FAILURE
            }
        }
    }
}

fn experiment_exit(exp: &Experiment, census: &[crate::census::CensusEntry], expect: bool) -> i32 {
    let group_exception = exp
        .summary
        .exceptions
        .iter()
        .any(|&(h, k)| census[h].tags.group && census[k].tags.group);
    if group_exception || !exp.summary.pullback_failures.is_empty() {
        return EXIT_FAILURE;
    }
    if expect && exp.summary.exceptions.is_empty() {
        return EXIT_FAILURE;
    }
    EXIT_OK
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Table text, one profile line per element, then a summary block.
pub fn describe(m: &FiniteMonoid) -> String {
    let mut text = m.to_table_text();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    text.push_str("element\torder\tindex\tperiod\tidempotent\tcancellative\tunit\n");
    for a in m.elements() {
        let (index, period) = m.index_period(a);
        text.push_str(&format!(
            "{a}\t{}\t{index}\t{period}\t{}\t{}\t{}\n",
            m.element_order(a).value(),
            yes_no(m.is_idempotent(a)),
            yes_no(m.is_cancellative_element(a)),
            yes_no(m.inverse(a).is_ok()),
        ));
    }
    let units: Vec<String> = m.units().iter().map(|u| u.to_string()).collect();
    text.push_str(&format!("summary\torder\t{}\n", m.size()));
    text.push_str(&format!("summary\tidentity\t{}\n", m.identity()));
    text.push_str(&format!(
        "summary\tcommutative\t{}\n",
        yes_no(m.is_commutative())
    ));
    text.push_str(&format!(
        "summary\tcancellative\t{}\n",
        yes_no(m.is_cancellative())
    ));
    text.push_str(&format!("summary\tgroup\t{}\n", yes_no(m.is_group())));
    text.push_str(&format!("summary\tunits\t{}\n", units.join(",")));
    text
}

fn write_io(w: &mut dyn Write, text: &str) -> Result<()> {
    w.write_all(text.as_bytes()).map_err(io_error)
}

fn emit(stdout: &mut dyn Write, out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        None => write_io(stdout, text),
        Some(path) => File::create(path)
            .and_then(|mut f| f.write_all(text.as_bytes()))
            .map_err(io_error),
    }
}

fn io_error(e: io::Error) -> Error {
    Error::Io(e.to_string())
}
