//! Recording scan results in the JSONL cache and rendering them as a table.

use polya::abelian::format_invariants;
use polya::cli::cache::Cache;
use polya::cli::report::quadratic_record;
use polya::cli::table::{Format, Table};

fn group(inv: &[String]) -> String {
    format_invariants(&inv.iter().map(|s| s.parse().expect("decimal")).collect::<Vec<_>>())
}

pub fn run() -> polya::Result<()> {
    let path = std::env::temp_dir().join(format!("polya-example-{}.jsonl", std::process::id()));
    let cache = Cache::new(&path);
    let records = (-12..=-2)
        .filter(|&d| polya::arith::is_squarefree(d))
        .map(|d| quadratic_record(d, 0, "default"))
        .collect::<polya::Result<Vec<_>>>()?;
    cache.append(&records)?;

    let mut t = Table::new(&["field", "disc", "Cl", "Po"]);
    for r in cache.latest(0, "default")?.values() {
        t.push(vec![r.field_descriptor.clone(), r.disc.clone(), group(&r.class_invariants), group(&r.polya_invariants)]);
    }
    print!("{}", t.render(Format::Md));
    print!("{}", t.render(Format::Csv));
    std::fs::remove_file(&path)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> polya::Result<()> {
    run()
}
