//! Running the verification harness on a small scope.

use polya::verify::{run_suite, summarize, Budget, CheckId, FieldCache, Scope, Suite};

pub fn run() -> polya::Result<()> {
    let cache = FieldCache::new(0, Budget::Small);
    let mut scope = Scope::new(Suite::CompositumPairs);
    scope.pairs.truncate(4);
    scope.checks = Some(vec![CheckId::TameSum, CheckId::Abhyankar]);
    let results = run_suite(&scope, &cache);
    for r in &results {
        println!("{:<10} {:<30} {}", r.check_id, r.instance, r.verdict);
    }
    let s = summarize(&results);
    println!("pass {}, fail {}, skipped {}", s.pass, s.fail, s.skipped);
    assert_eq!(s.fail, 0);
    Ok(())
}

#[allow(dead_code)]
fn main() -> polya::Result<()> {
    run()
}
