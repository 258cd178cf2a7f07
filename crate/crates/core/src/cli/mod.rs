//! The `polya` command line.
//!
//! Field descriptors: `quad:<d>`, `biquad:<m>,<n>`, `ccubic:<poly|cond9|cond63|cond<p>>`
//! (p a prime that is 1 mod 3), `poly:<c0,...,cn>` (constant term first).
//!
//! Exit codes: 0 every check passed (skips allowed), 1 some check failed or an
//! internal inconsistency was found, 2 usage or input error, 3 a computation ran out
//! of budget where no skip is possible.

pub mod cache;
pub mod report;
pub mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::abelian::format_invariants;
use crate::arith::is_squarefree;
use crate::error::{Error, Result};
use crate::numberfield::families::FieldDescriptor;
use crate::verify::{run_suite, summarize, Budget, CheckId, CheckResult, FieldCache, Scope, Suite};
use cache::{Cache, CacheRecord};
use report::{order_of, quadratic_record, FieldReport};
use table::{Format, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "polya", version, about = "Polya groups of small Galois number fields")]
pub struct Cli {
    /// Resource preset for class-group computations.
    #[arg(long, global = true, default_value = "default")]
    pub budget: Budget,
    /// Seed for the randomized relation search.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// JSONL result cache; nothing is cached without it.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    #[arg(long, global = true, default_value = "md")]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quadratic fields.
    Quad {
        #[command(subcommand)]
        command: QuadCommand,
    },
    /// Single-field reports.
    Field {
        #[command(subcommand)]
        command: FieldCommand,
    },
    /// Build L = K1 K2 and run compositum checks on it.
    Compositum {
        first: FieldDescriptor,
        second: FieldDescriptor,
        /// Checks to run (default: every pair check).
        #[arg(long, value_delimiter = ',')]
        check: Vec<CheckId>,
    },
    /// Run a verification suite.
    Verify {
        /// quadratic, compositum, cyclic-cubic, relative or all
        suite: Suite,
        #[arg(long, allow_negative_numbers = true)]
        dmin: Option<i64>,
        #[arg(long, allow_negative_numbers = true)]
        dmax: Option<i64>,
        #[arg(long, value_delimiter = ',')]
        check: Vec<CheckId>,
        /// Write every check result here as JSONL.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inspect the result cache.
    Cache {
        #[command(subcommand)]
        command: CacheCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum QuadCommand {
    /// Hilbert's order formula for every squarefree d in [dmin, dmax].
    Scan {
        #[arg(long, allow_negative_numbers = true)]
        dmin: i64,
        #[arg(long, allow_negative_numbers = true)]
        dmax: i64,
        /// Add one to the prediction at this d (tests the failure path).
        #[arg(long, hide = true, allow_negative_numbers = true)]
        inject_fault: Option<i64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum FieldCommand {
    Report { field: FieldDescriptor },
}

#[derive(Debug, Subcommand)]
pub enum CacheCommand {
    /// List the latest record for every descriptor, seed and budget.
    Ls,
}

/// Entry point for the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    execute(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Parse and run, writing the report to `out` and diagnostics to `err`.
pub fn execute<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Inconsistent(_) => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cache = cli.cache.as_ref().map(Cache::new);
    match &cli.command {
        Command::Quad { command: QuadCommand::Scan { dmin, dmax, inject_fault } } => {
            quad_scan(cli, cache.as_ref(), *dmin, *dmax, *inject_fault, out, err)
        }
        Command::Field { command: FieldCommand::Report { field } } => {
            let fc = FieldCache::new(cli.seed, cli.budget);
            let report = FieldReport::build(&fc, field)?;
            if let Some(c) = &cache {
                c.append(&[report.to_record(cli.seed, cli.budget.as_str())])?;
            }
            out.write_all(report.render(cli.format).as_bytes())?;
            Ok(if report.has_failure() { EXIT_FAIL } else { EXIT_OK })
        }
        Command::Compositum { first, second, check } => {
            let mut scope = Scope::empty(Suite::CompositumPairs);
            scope.pairs = vec![(first.clone(), second.clone())];
            let pair_checks: Vec<CheckId> = CheckId::ALL.iter().copied().filter(|c| c.is_pair_check()).collect();
            if let Some(bad) = check.iter().find(|c| !c.is_pair_check()) {
                return Err(Error::InvalidInput(format!("`{bad}` is not a compositum check")));
            }
            scope.checks = Some(if check.is_empty() { pair_checks } else { check.clone() });
            let fc = FieldCache::new(cli.seed, cli.budget);
            if let Ok(pair) = fc.pair(first, second) {
                let group = pair.l.galois_label().unwrap_or_else(|| "not Galois".into());
                writeln!(err, "L = {}, degree {}, Galois group {group}", pair.label(), pair.l.degree())?;
            }
            let results = run_suite(&scope, &fc);
            emit_results(cli.format, &results, out, err)
        }
        Command::Verify { suite, dmin, dmax, check, out: path } => {
            let mut scope = Scope::new(*suite);
            if dmin.is_some() || dmax.is_some() {
                if !matches!(suite, Suite::QuadraticScan | Suite::All) {
                    return Err(Error::InvalidInput("--dmin/--dmax only apply to the quadratic and all suites".into()));
                }
                scope.dmin = dmin.unwrap_or(scope.dmin);
                scope.dmax = dmax.unwrap_or(scope.dmax);
            }
            if !check.is_empty() {
                scope.checks = Some(check.clone());
            }
            let fc = FieldCache::new(cli.seed, cli.budget);
            let results = run_suite(&scope, &fc);
            if let Some(p) = path {
                let mut body = String::new();
                for r in &results {
                    body += &serde_json::to_string(r).map_err(|e| Error::Io(e.to_string()))?;
                    body.push('\n');
                }
                std::fs::write(p, body).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            }
            let mut t = Table::new(&["check", "pass", "fail", "skipped"]);
            for id in CheckId::ALL {
                let rs: Vec<CheckResult> = results.iter().filter(|r| r.check_id == id).cloned().collect();
                if rs.is_empty() {
                    continue;
                }
                let s = summarize(&rs);
                t.push(vec![id.to_string(), s.pass.to_string(), s.fail.to_string(), s.skipped.to_string()]);
            }
            out.write_all(t.render(cli.format).as_bytes())?;
            let notable: Vec<CheckResult> = results.iter().filter(|r| !r.verdict.is_pass()).cloned().collect();
            if !notable.is_empty() && cli.format == Format::Md {
                out.write_all(b"\n")?;
                out.write_all(results_table(&notable).render(cli.format).as_bytes())?;
            }
            let s = summarize(&results);
            writeln!(err, "suite {suite}: pass {}, fail {}, skipped {}", s.pass, s.fail, s.skipped)?;
            Ok(if s.fail > 0 { EXIT_FAIL } else { EXIT_OK })
        }
        Command::Cache { command: CacheCommand::Ls } => {
            let cache = cache.ok_or_else(|| Error::InvalidInput("cache ls needs --cache <path>".into()))?;
            let mut latest = std::collections::BTreeMap::new();
            for r in cache.read_all()? {
                latest.insert((r.field_descriptor.clone(), r.seed.clone(), r.budgets.clone()), r);
            }
            let mut t = Table::new(&["field", "seed", "budget", "disc", "Cl", "Po", "certified", "computed_at"]);
            for r in latest.values() {
                t.push(vec![
                    r.field_descriptor.clone(),
                    r.seed.clone(),
                    r.budgets.clone(),
                    r.disc.clone(),
                    invariants_string(&r.class_invariants),
                    invariants_string(&r.polya_invariants),
                    r.certified.to_string(),
                    r.computed_at.clone(),
                ]);
            }
            out.write_all(t.render(cli.format).as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn invariants_string(inv: &[String]) -> String {
    let parsed: Vec<num_bigint::BigInt> = inv.iter().filter_map(|s| s.parse().ok()).collect();
    format_invariants(&parsed)
}

fn results_table(results: &[CheckResult]) -> Table {
    let mut t = Table::new(&["check", "instance", "verdict", "witness"]);
    for r in results {
        let mut w = r.witness.to_string();
        if let crate::verify::Verdict::Skipped { detail, .. } = &r.verdict {
            w = if r.witness.is_null() { detail.clone() } else { format!("{detail}; {w}") };
        }
        t.push(vec![r.check_id.to_string(), r.instance.clone(), r.verdict.to_string(), w]);
    }
    t
}

fn emit_results(format: Format, results: &[CheckResult], out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    out.write_all(results_table(results).render(format).as_bytes())?;
    let s = summarize(results);
    writeln!(err, "pass {}, fail {}, skipped {}", s.pass, s.fail, s.skipped)?;
    Ok(if s.fail > 0 { EXIT_FAIL } else { EXIT_OK })
}

/// One scan row, rendered only from the record so cached and fresh runs agree.
fn scan_row(d: i64, r: &CacheRecord, fault: u64) -> Result<(Vec<String>, bool)> {
    let computed = order_of(&r.polya_invariants).ok_or_else(|| Error::Parse(format!("bad Polya invariants for d = {d}")))?;
    let predicted: num_bigint::BigInt = r
        .predictions
        .get("hilbert")
        .and_then(|p| p.parse().ok())
        .ok_or_else(|| Error::Parse(format!("record for d = {d} has no hilbert prediction")))?;
    let predicted = predicted + fault;
    let ok = computed == predicted;
    let row = vec![
        d.to_string(),
        r.disc.clone(),
        r.ramified.len().to_string(),
        r.unit_norm.clone().unwrap_or_else(|| "-".into()),
        invariants_string(&r.class_invariants),
        invariants_string(&r.polya_invariants),
        computed.to_string(),
        predicted.to_string(),
        if ok { "pass" } else { "FAIL" }.to_string(),
    ];
    Ok((row, ok))
}

fn quad_scan(
    cli: &Cli,
    cache: Option<&Cache>,
    dmin: i64,
    dmax: i64,
    fault_at: Option<i64>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let ds: Vec<i64> = (dmin..=dmax).filter(|&d| d != 0 && d != 1 && is_squarefree(d)).collect();
    let budget = cli.budget.as_str();
    let known = match cache {
        Some(c) => c.latest(cli.seed, budget)?,
        None => Default::default(),
    };
    let missing: Vec<i64> = ds.iter().copied().filter(|d| !known.contains_key(&FieldDescriptor::Quad(*d).to_string())).collect();
    let fresh: Vec<CacheRecord> =
        missing.par_iter().map(|&d| quadratic_record(d, cli.seed, budget)).collect::<Result<Vec<_>>>()?;
    if let Some(c) = cache {
        c.append(&fresh)?;
    }
    let mut records = known;
    for r in fresh.iter().cloned() {
        records.insert(r.field_descriptor.clone(), r);
    }
    let mut t = Table::new(&["d", "disc", "s", "N(eps)", "Cl", "Po", "|Po|", "predicted", "verdict"]);
    let (mut pass, mut fail) = (0usize, 0usize);
    for &d in &ds {
        let r = &records[&FieldDescriptor::Quad(d).to_string()];
        let (row, ok) = scan_row(d, r, u64::from(fault_at == Some(d)))?;
        if ok {
            pass += 1;
        } else {
            fail += 1;
        }
        t.push(row);
    }
    out.write_all(t.render(cli.format).as_bytes())?;
    writeln!(err, "pass {pass}, fail {fail}, skipped 0 (computed {}, from cache {})", fresh.len(), ds.len() - fresh.len())?;
    Ok(if fail > 0 { EXIT_FAIL } else { EXIT_OK })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = execute(std::iter::once("polya").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn scan_small_range_passes() {
        let (code, out, _) = run_args(&["quad", "scan", "--dmin", "2", "--dmax", "50"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("| 5 | 5 | 1 | -1 | 1 | 1 | 1 | 1 | pass |"), "{out}");
    }

    #[test]
    fn empty_range_is_header_only() {
        let (code, out, _) = run_args(&["quad", "scan", "--dmin", "10", "--dmax", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 2);
    }

    #[test]
    fn injected_fault_fails() {
        let (code, out, _) = run_args(&["quad", "scan", "--dmin", "-30", "--dmax", "-2", "--inject-fault", "-21"]);
        assert_eq!(code, 1);
        assert!(out.contains("| -21 | -84 | 3 | - | Z/2 x Z/2 | Z/2 x Z/2 | 4 | 5 | FAIL |"), "{out}");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["verify", "nonsense"]).0, 2);
        assert_eq!(run_args(&["field", "report", "cubic:7"]).0, 2);
        assert_eq!(run_args(&["--budget", "huge", "cache", "ls"]).0, 2);
        assert_eq!(run_args(&["cache", "ls"]).0, 2);
        assert_eq!(run_args(&["compositum", "quad:5", "quad:-1", "--check", "hilbert"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn csv_scan() {
        let (code, out, _) = run_args(&["--format", "csv", "quad", "scan", "--dmin", "-5", "--dmax", "-5"]);
        assert_eq!(code, 0);
        assert_eq!(out, "d,disc,s,N(eps),Cl,Po,|Po|,predicted,verdict\n-5,-20,2,-,Z/2,Z/2,2,2,pass\n");
    }
}
