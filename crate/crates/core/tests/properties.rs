mod common;

use std::sync::OnceLock;

use common::*;
use proptest::prelude::*;

fn cases() -> &'static [NormCase] {
    static CASES: OnceLock<Vec<NormCase>> = OnceLock::new();
    CASES.get_or_init(norm_cases)
}

proptest! {
    #[test]
    fn smith_form_matches_determinantal_divisors((n, rows) in presentation()) {
        snf_matches_minors(n, &rows)?;
    }

    #[test]
    fn subgroup_orders((inv, a, b) in subgroup_case()) {
        subgroup_laws(&inv, &a, &b)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn norm_of_extended_ideal((i, picks) in norm_input(10)) {
        norm_of_extension(&cases()[i], &picks)?;
    }
}

#[test]
fn efg_sums_to_degree() {
    for k in efg_fields() {
        efg_holds(&k, 200).unwrap();
    }
}
