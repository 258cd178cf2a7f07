//! One line per acceptance criterion; exits non-zero if any gated criterion fails.

mod common;

use std::time::Instant;

use num_bigint::BigInt;
use polya::abelian::{AbelianGroup, GroupElement};
use polya::arith::{is_squarefree, primes_up_to};
use polya::numberfield::families::{quadratic_field, CubicSpec, FieldDescriptor};
use polya::numberfield::NumberField;
use polya::polya::{polya_group, predicted_order_prime_cyclic, FieldData, RelativeExtension};
use polya::quadratic::forms::BinaryForm;
use polya::quadratic::{wide_class_group, QuadraticField};
use polya::verify::{
    check_abhyankar, check_amalgam, check_direct_sum, check_hilbert, check_lemma_intersection, check_lemma_subgroup,
    check_order_formula, check_order_formula_quadratic, check_ostrowski, check_tame_sum, Budget, CheckResult, FieldCache,
};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Outcome = Result<String, String>;
type Criterion<'a> = (u32, &'static str, Box<dyn Fn() -> Outcome + 'a>);

fn quad(d: i64) -> FieldDescriptor {
    FieldDescriptor::Quad(d)
}

fn cubic(c: u32) -> FieldDescriptor {
    FieldDescriptor::CCubic(CubicSpec::Conductor(c))
}

fn scan_ds() -> Vec<i64> {
    (2..=2000i64).flat_map(|a| [-a, a]).filter(|&d| is_squarefree(d)).collect()
}

fn require_pass(results: &[CheckResult]) -> Result<(), String> {
    match results.iter().find(|r| !r.verdict.is_pass()) {
        Some(r) => Err(format!("{} {}: {} {}", r.check_id, r.instance, r.verdict, r.witness)),
        None => Ok(()),
    }
}

fn hilbert_scan() -> Outcome {
    let start = Instant::now();
    let ds = scan_ds();
    let results: Vec<CheckResult> = ds.iter().map(|&d| check_hilbert(d)).collect();
    require_pass(&results)?;
    let secs = start.elapsed().as_secs_f64();
    if secs > 300.0 {
        return Err(format!("took {secs:.1} s"));
    }
    Ok(format!("{} fields with 2 <= |d| <= 2000 match, {secs:.2} s", ds.len()))
}

/// (-b + sqrt D)/2 in the basis {1, omega} of Q(sqrt d).
fn half_root(d: i64, b: i64) -> Vec<BigInt> {
    let c0 = if d.rem_euclid(4) == 1 { (-b - 1) / 2 } else { -b / 2 };
    vec![c0.into(), 1.into()]
}

fn padded_coords(g: &AbelianGroup, x: &GroupElement) -> Vec<BigInt> {
    g.smith_coords(x).expect("element of the group")
}

/// Generic class group of Q(sqrt d) against the form class group. The prime ideal
/// pZ + ((-b + sqrt D)/2)Z is matched with the form (p, b, c); the classes of all
/// non-inert primes below 60 must then span the graph of an isomorphism.
fn oracle_equivalence() -> Outcome {
    let budget = Budget::Default.class_group();
    let mut fields = 0;
    for d in -500i64..=500 {
        if d == 0 || d == 1 || !is_squarefree(d) {
            continue;
        }
        let qf = QuadraticField::new(d).map_err(|e| e.to_string())?;
        let disc = qf.disc();
        if disc.abs() > 500 {
            continue;
        }
        fields += 1;
        let k = quadratic_field(d).map_err(|e| e.to_string())?;
        let data = FieldData::new(k, 0, &budget).map_err(|e| format!("d = {d}: {e}"))?;
        let wide = wide_class_group(&qf).map_err(|e| e.to_string())?;
        let (g, f) = (data.group(), &wide.group);
        if g.invariants() != f.invariants() {
            return Err(format!("d = {d}: engine {:?} vs forms {:?}", g.invariants(), f.invariants()));
        }
        if !data.is_certified() {
            return Err(format!("d = {d}: class group not certified"));
        }
        let (mg, mf) = (g.moduli().to_vec(), f.moduli().to_vec());
        let moduli: Vec<BigInt> = mg.iter().chain(&mf).cloned().collect();
        let n = moduli.len();
        let rel: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { moduli[i].clone() } else { BigInt::from(0) }).collect())
            .collect();
        let product = AbelianGroup::new(n, rel).map_err(|e| e.to_string())?;
        let mut pairs = Vec::new();
        for p in primes_up_to(60) {
            let pi = p as i64;
            for pr in data.field.factor_prime(p).map_err(|e| e.to_string())? {
                if pr.f != 1 {
                    continue;
                }
                let b = (0..2 * pi)
                    .find(|&b| (b * b - disc).rem_euclid(4 * pi) == 0 && pr.ideal.contains(&half_root(d, b)))
                    .ok_or_else(|| format!("d = {d}: no form for a prime above {p}"))?;
                let form = BinaryForm::from_ab(pi, b, disc);
                let x = data.dlog_prime(&pr).map_err(|e| e.to_string())?;
                let y = wide.form_class(&form);
                let mut v = padded_coords(g, &x);
                v.extend(padded_coords(f, &y));
                pairs.push(GroupElement::new(v));
            }
        }
        let graph = product.subgroup(&pairs).map_err(|e| e.to_string())?;
        let unit = |i: usize| GroupElement::new((0..n).map(|j| BigInt::from((i == j) as i64)).collect());
        let left = product.subgroup(&(0..mg.len()).map(unit).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
        let right = product.subgroup(&(mg.len()..n).map(unit).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
        let order = g.order().expect("finite");
        if graph.order() != order || !graph.intersection(&left).is_trivial() || !graph.intersection(&right).is_trivial() {
            return Err(format!("d = {d}: prime classes do not match under the ideal-form correspondence"));
        }
    }
    Ok(format!("{fields} fields with |D| <= 500: same invariants, prime classes correspond"))
}

fn ostrowski_fields() -> Vec<FieldDescriptor> {
    let mut v: Vec<FieldDescriptor> = [-1, -5, -21, -3, 2, 10, 79, -15].into_iter().map(quad).collect();
    v.extend([7, 9, 13, 19, 31, 37, 63].into_iter().map(cubic));
    v.extend([(5, -1), (2, 3), (-1, 2), (-3, 5), (-5, -1)].into_iter().map(|(m, n)| FieldDescriptor::Biquad(m, n)));
    v
}

fn ostrowski(cache: &FieldCache) -> Outcome {
    let fields = ostrowski_fields();
    let results: Vec<CheckResult> = fields.iter().map(|k| check_ostrowski(cache, k, 100)).collect();
    require_pass(&results)?;
    Ok(format!("{} Galois fields, every unramified p <= 100 has a verified generator", fields.len()))
}

fn cyclic_cubic(cache: &FieldCache) -> Outcome {
    let d9 = cache.data(&cubic(9)).map_err(|e| e.to_string())?;
    let po9 = polya_group(&d9, 50).map_err(|e| e.to_string())?;
    let ram9 = d9.field.ramified_primes().map_err(|e| e.to_string())?;
    if po9.order() != 1 || ram9.len() != 1 {
        return Err(format!("conductor 9: |Po| = {}, ramified {ram9:?}", po9.order()));
    }
    let d63 = cache.data(&cubic(63)).map_err(|e| e.to_string())?;
    let po63 = polya_group(&d63, 50).map_err(|e| e.to_string())?;
    let q = cache.data_for(&NumberField::rationals()).map_err(|e| e.to_string())?;
    let ext = RelativeExtension::over_q(&d63.field).map_err(|e| e.to_string())?;
    let pred = predicted_order_prime_cyclic(&ext, &q, &d63).map_err(|e| e.to_string())?;
    if po63.order() != 3 || pred.order_with_infinite != Some(3) || pred.s_with_infinite != 2 || !d63.is_certified() {
        return Err(format!("conductor 63: subgroup order {}, formula {:?}", po63.order(), pred));
    }
    Ok("conductor 9: Po trivial; conductor 63: |Po| = 3 = 3^(2-1) by formula and by subgroup".into())
}

fn tame_sum(cache: &FieldCache) -> Outcome {
    let pairs = [(5, -1), (13, -3), (5, -3), (5, 2), (5, -2), (-3, -1), (-3, 2), (13, -1), (17, -1), (-7, -1), (-7, 5), (-15, -1), (21, -1), (-11, 2)];
    let mut passed = 0;
    for (a, b) in pairs {
        let r = check_tame_sum(cache, &quad(a), &quad(b));
        if r.verdict.is_fail() || (r.verdict.is_skip() && !format!("{}", r.verdict).contains("hypothesis")) {
            return Err(format!("{}: {} {}", r.instance, r.verdict, r.witness));
        }
        if r.runtime_ms > 60_000 {
            return Err(format!("{} took {} ms", r.instance, r.runtime_ms));
        }
        passed += r.verdict.is_pass() as usize;
    }
    if passed < 10 {
        return Err(format!("only {passed} pairs passed"));
    }
    Ok(format!("{passed} quadratic pairs with Po(L) = eps1(Po K1) + eps2(Po K2)"))
}

fn direct_sum(cache: &FieldCache) -> Outcome {
    let (a, b) = (quad(-1), cubic(9));
    let mut results = vec![check_direct_sum(cache, &a, &b), check_amalgam(cache, &a, &b)];
    for p in [2, 3] {
        results.push(check_abhyankar(cache, &a, &b, p));
        results.push(check_lemma_subgroup(cache, &a, &b, p));
        results.push(check_lemma_intersection(cache, &a, &b, p));
    }
    require_pass(&results)?;
    Ok(format!("Q(i) * conductor 9: Po(L) = Po(K1) (+) Po(K2) trivial, {} checks", results.len()))
}

fn order_identity(cache: &FieldCache) -> Outcome {
    let ds = scan_ds();
    let mut results: Vec<CheckResult> = ds.iter().map(|&d| check_order_formula_quadratic(d)).collect();
    let conductors = [7, 9, 13, 19, 31, 37, 43, 61, 63, 67, 73, 79, 97];
    results.extend(conductors.iter().map(|&c| check_order_formula(cache, &cubic(c))));
    require_pass(&results)?;
    Ok(format!("|H1| |Po| = prod e for {} quadratic and {} cyclic cubic fields", ds.len(), conductors.len()))
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(Config { cases, failure_persistence: None, ..Config::default() }, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn property_suites() -> Outcome {
    let norm_cases = common::norm_cases();
    runner(100)
        .run(&common::norm_input(norm_cases.len()), |(i, picks)| common::norm_of_extension(&norm_cases[i], &picks))
        .map_err(|e| format!("norm identity: {e}"))?;
    runner(1000)
        .run(&common::presentation(), |(n, rows)| common::snf_matches_minors(n, &rows))
        .map_err(|e| format!("Smith form: {e}"))?;
    runner(1000)
        .run(&common::subgroup_case(), |(inv, a, b)| common::subgroup_laws(&inv, &a, &b))
        .map_err(|e| format!("subgroups: {e}"))?;
    let mut factorizations = 0;
    for k in common::efg_fields() {
        factorizations += common::efg_holds(&k, 200)?;
    }
    Ok(format!("100 norm triples, 1000 presentations, 1000 subgroup pairs, {factorizations} factorizations"))
}

fn main() {
    let cache = FieldCache::new(0, Budget::Default);
    let criteria: Vec<Criterion> = vec![
        (1, "Hilbert formula scan", Box::new(hilbert_scan)),
        (2, "generic vs form class groups", Box::new(oracle_equivalence)),
        (3, "Ostrowski principality", Box::new(|| ostrowski(&cache))),
        (4, "cyclic cubic formula", Box::new(|| cyclic_cubic(&cache))),
        (5, "compositum tame sum", Box::new(|| tame_sum(&cache))),
        (6, "direct sum instance", Box::new(|| direct_sum(&cache))),
        (7, "order identity", Box::new(|| order_identity(&cache))),
        (8, "property suites", Box::new(property_suites)),
    ];
    let mut failed = 0;
    for (n, name, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n} PASS  {name}: {detail} ({secs:.1} s)"),
            Err(why) => {
                failed += 1;
                println!("criterion {n} FAIL  {name}: {why} ({secs:.1} s)");
            }
        }
    }
    println!("criterion 9 OUT OF SCOPE  Po(Q(i, j, cbrt 7)) = Z/3: degree 12 exceeds the supported degree 8");
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
