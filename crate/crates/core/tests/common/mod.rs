//! Property bodies and strategies shared by the property tests and the acceptance run.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use polya::abelian::{AbelianGroup, GroupElement};
use polya::numberfield::embedding::Embedding;
use polya::numberfield::families::{compositum, FieldDescriptor};
use polya::numberfield::{Ideal, NumberField, PrimeIdeal};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

fn det(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<BigInt>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
                let t = &m[0][j] * det(&minor);
                if j % 2 == 0 { t } else { -t }
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// gcd of the i×i minors for i = 1..=n (0 when all vanish).
pub fn determinantal_divisors(rows: &[Vec<i64>], n: usize) -> Vec<BigInt> {
    let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    (1..=n)
        .map(|i| {
            let mut g = BigInt::zero();
            for rs in subsets(big.len(), i) {
                for cs in subsets(n, i) {
                    let m: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| big[r][c].clone()).collect()).collect();
                    g = g.gcd(&det(&m));
                }
            }
            g
        })
        .collect()
}

pub fn presentation() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=3).prop_flat_map(|n| (Just(n), prop::collection::vec(prop::collection::vec(-12i64..=12, n), 0..=n + 2)))
}

/// Smith invariants against determinantal divisors.
pub fn snf_matches_minors(n: usize, rows: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let g = AbelianGroup::from_i64(n, rows).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let dd = determinantal_divisors(rows, n);
    let mut expected = Vec::new();
    let mut prev = BigInt::one();
    for d in &dd {
        if d.is_zero() {
            break;
        }
        expected.push(d / &prev);
        prev = d.clone();
    }
    expected.resize(n, BigInt::zero());
    prop_assert_eq!(g.moduli(), &expected[..]);
    for w in g.invariants().windows(2) {
        prop_assert!(w[1].is_zero() || (&w[1] % &w[0]).is_zero());
    }
    Ok(())
}

pub fn subgroup_case() -> impl Strategy<Value = (Vec<u64>, Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    prop::collection::vec(1u64..=12, 1..=3).prop_flat_map(|inv| {
        let n = inv.len();
        let elems = prop::collection::vec(prop::collection::vec(-20i64..=20, n), 0..=3);
        (Just(inv), elems.clone(), elems)
    })
}

/// Lagrange and the product formula |H1 + H2| |H1 ∩ H2| = |H1| |H2|.
pub fn subgroup_laws(inv: &[u64], a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let g = AbelianGroup::cyclic_product(inv);
    let order = g.order().unwrap();
    let ea: Vec<GroupElement> = a.iter().map(|x| GroupElement::from_i64(x)).collect();
    let eb: Vec<GroupElement> = b.iter().map(|x| GroupElement::from_i64(x)).collect();
    let h1 = g.subgroup(&ea).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let h2 = g.subgroup(&eb).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let sum = h1.sum(&h2);
    let inter = h1.intersection(&h2);
    prop_assert!((&order % h1.order()).is_zero());
    prop_assert_eq!(sum.order() * inter.order(), h1.order() * h2.order());
    prop_assert!(h1.is_subgroup_of(&sum) && inter.is_subgroup_of(&h1) && inter.is_subgroup_of(&h2));
    let pres: BigInt = h1.invariants().iter().product();
    prop_assert_eq!(pres, h1.order());
    for x in &ea {
        let y = g.smith_coords(x).unwrap();
        prop_assert!(h1.contains_smith(&y));
    }
    Ok(())
}

/// A base field, an extension and the primes of the base below 40.
pub struct NormCase {
    pub k: NumberField,
    pub l: NumberField,
    pub emb: Embedding,
    pub primes: Vec<PrimeIdeal>,
}

pub fn norm_cases() -> Vec<NormCase> {
    let build = |s: &str| s.parse::<FieldDescriptor>().unwrap().build().unwrap();
    let mut out = Vec::new();
    for (a, b) in [("quad:-5", "quad:-1"), ("quad:5", "quad:-3"), ("quad:-1", "ccubic:cond9"), ("quad:-3", "ccubic:cond7"), ("quad:10", "quad:-1")] {
        let (k1, k2) = (build(a), build(b));
        let c = compositum(&k1, &k2).unwrap();
        for (k, emb) in [(k1, c.emb1.clone()), (k2, c.emb2.clone())] {
            let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37].iter().flat_map(|&p| k.factor_prime(p).unwrap()).collect();
            out.push(NormCase { k, l: c.field.clone(), emb, primes });
        }
    }
    out
}

pub fn norm_input(cases: usize) -> impl Strategy<Value = (usize, Vec<(usize, u64)>)> {
    (0..cases, prop::collection::vec((0usize..64, 0u64..=2), 1..=3))
}

/// N_{L/K}(I O_L) = I^{[L:K]}.
pub fn norm_of_extension(case: &NormCase, picks: &[(usize, u64)]) -> Result<(), TestCaseError> {
    let k = &case.k;
    let mut ideal: Ideal = k.unit_ideal();
    for &(i, e) in picks {
        let pr = &case.primes[i % case.primes.len()];
        ideal = k.ideal_mul(&ideal, &k.ideal_pow(&pr.ideal, e));
    }
    let up = case.emb.extend_ideal(&case.l, &ideal);
    let down = case.emb.relative_norm(k, &case.l, &up).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(k.ideal_eq(&down, &k.ideal_pow(&ideal, case.emb.relative_degree() as u64)));
    Ok(())
}

/// Fields whose factorizations are checked exhaustively for Σ e f = n.
pub fn efg_fields() -> Vec<NumberField> {
    let mut out: Vec<NumberField> = [
        "quad:-1", "quad:-5", "quad:-21", "quad:10", "quad:79", "ccubic:cond7", "ccubic:cond9", "ccubic:cond63", "ccubic:cond13",
        "biquad:5,-1", "biquad:2,3", "biquad:-3,5", "poly:-2,0,0,1", "poly:1,1,0,1",
    ]
    .iter()
    .map(|s| s.parse::<FieldDescriptor>().unwrap().build().unwrap())
    .collect();
    for case in norm_cases().into_iter().step_by(2) {
        out.push(case.l);
    }
    out
}

/// Σ e f = n for every p ≤ bound, with e and f constant across the primes of a Galois field.
pub fn efg_holds(k: &NumberField, bound: u64) -> Result<usize, String> {
    let mut count = 0;
    for p in polya::arith::primes_up_to(bound) {
        let primes = k.factor_prime(p).map_err(|e| e.to_string())?;
        let total: u32 = primes.iter().map(|pr| pr.e * pr.f).sum();
        if total as usize != k.degree() {
            return Err(format!("{}: p = {p} gives sum {total}", k.descriptor()));
        }
        if k.is_galois() && primes.iter().any(|pr| (pr.e, pr.f) != (primes[0].e, primes[0].f)) {
            return Err(format!("{}: p = {p} has unequal (e, f)", k.descriptor()));
        }
        count += 1;
    }
    Ok(count)
}
