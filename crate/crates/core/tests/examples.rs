#[path = "../examples/abelian_groups.rs"]
mod abelian_groups;

#[path = "../examples/quadratic_fields.rs"]
mod quadratic_fields;

#[path = "../examples/prime_decomposition.rs"]
mod prime_decomposition;

#[path = "../examples/class_groups.rs"]
mod class_groups;

#[path = "../examples/principal_ideals.rs"]
mod principal_ideals;

#[path = "../examples/polya_groups.rs"]
mod polya_groups;

#[path = "../examples/composita.rs"]
mod composita;

#[path = "../examples/relative_polya.rs"]
mod relative_polya;

#[path = "../examples/verification_suite.rs"]
mod verification_suite;

#[path = "../examples/result_cache.rs"]
mod result_cache;


#[test]
fn abelian_groups_runs() {
    abelian_groups::run().unwrap();
}

#[test]
fn quadratic_fields_runs() {
    quadratic_fields::run().unwrap();
}

#[test]
fn prime_decomposition_runs() {
    prime_decomposition::run().unwrap();
}

#[test]
fn class_groups_runs() {
    class_groups::run().unwrap();
}

#[test]
fn principal_ideals_runs() {
    principal_ideals::run().unwrap();
}

#[test]
fn polya_groups_runs() {
    polya_groups::run().unwrap();
}

#[test]
fn composita_runs() {
    composita::run().unwrap();
}

#[test]
fn relative_polya_runs() {
    relative_polya::run().unwrap();
}

#[test]
fn verification_suite_runs() {
    verification_suite::run().unwrap();
}

#[test]
fn result_cache_runs() {
    result_cache::run().unwrap();
}
