use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::*;
use super::{CheckId, CheckResult, FieldCache};
use crate::arith::is_squarefree;
use crate::error::{Error, Result};
use crate::numberfield::families::{CubicSpec, FieldDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    QuadraticScan,
    CompositumPairs,
    CyclicCubic,
    Relative,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadratic-scan" | "quadratic" => Ok(Suite::QuadraticScan),
            "compositum-pairs" | "compositum" => Ok(Suite::CompositumPairs),
            "cyclic-cubic" => Ok(Suite::CyclicCubic),
            "relative" => Ok(Suite::Relative),
            "all" => Ok(Suite::All),
            _ => Err(Error::Parse(format!(
                "unknown suite `{s}` (quadratic-scan, compositum-pairs, cyclic-cubic, relative, all)"
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::QuadraticScan => "quadratic-scan",
            Suite::CompositumPairs => "compositum-pairs",
            Suite::CyclicCubic => "cyclic-cubic",
            Suite::Relative => "relative",
            Suite::All => "all",
        })
    }
}

fn quad(d: i64) -> FieldDescriptor {
    FieldDescriptor::Quad(d)
}

fn cubic(c: u32) -> FieldDescriptor {
    FieldDescriptor::CCubic(CubicSpec::Conductor(c))
}

/// What a suite run covers.
#[derive(Clone, Debug)]
pub struct Scope {
    pub suite: Suite,
    /// Quadratic scan over squarefree d with dmin ≤ |d| ≤ dmax, both signs.
    pub dmin: i64,
    pub dmax: i64,
    /// |d| bound for the Ostrowski check inside the quadratic scan.
    pub quad_ostrowski_max: i64,
    pub pairs: Vec<(FieldDescriptor, FieldDescriptor)>,
    pub cubic_conductors: Vec<u32>,
    /// (K, K') meaning L = K·K' over K.
    pub relative: Vec<(FieldDescriptor, FieldDescriptor)>,
    /// Galois fields checked directly with the order formula (non-cyclic ones report
    /// the inferred |H¹|).
    pub fields: Vec<FieldDescriptor>,
    pub checks: Option<Vec<CheckId>>,
    /// Add this amount to the Hilbert prediction at the given d.
    pub fault: Option<(i64, u64)>,
}

impl Scope {
    pub fn new(suite: Suite) -> Self {
        let mut s = Self::empty(suite);
        let all = suite == Suite::All;
        if all || suite == Suite::QuadraticScan {
            s.dmin = 1;
            s.dmax = 2000;
            s.quad_ostrowski_max = 15;
        }
        if all || suite == Suite::CompositumPairs {
            s.pairs = default_pairs();
        }
        if all || suite == Suite::CyclicCubic {
            s.cubic_conductors = vec![7, 9, 13, 19, 31, 37, 43, 61, 63, 67, 73, 79, 97];
        }
        if all || suite == Suite::Relative {
            s.relative = vec![
                (quad(5), quad(-1)),
                (quad(-1), quad(5)),
                (quad(-5), quad(-1)),
                (quad(-1), quad(-5)),
                (quad(2), quad(-1)),
                (quad(-3), quad(13)),
                (quad(-1), cubic(9)),
                (quad(-1), cubic(7)),
            ];
            s.fields = vec![
                FieldDescriptor::Biquad(5, -1),
                FieldDescriptor::Biquad(2, 3),
                FieldDescriptor::Biquad(-1, 2),
                FieldDescriptor::Biquad(-3, 5),
            ];
        }
        s
    }

    pub fn empty(suite: Suite) -> Self {
        Self {
            suite,
            dmin: 1,
            dmax: 0,
            quad_ostrowski_max: 0,
            pairs: Vec::new(),
            cubic_conductors: Vec::new(),
            relative: Vec::new(),
            fields: Vec::new(),
            checks: None,
            fault: None,
        }
    }

    fn wants(&self, id: CheckId) -> bool {
        self.checks.as_ref().is_none_or(|c| c.contains(&id))
    }

    /// Squarefree d ≠ 0, 1 with dmin ≤ |d| ≤ dmax, ordered by |d| then sign.
    pub fn quadratic_ds(&self) -> Vec<i64> {
        let mut out = Vec::new();
        for a in self.dmin.max(1)..=self.dmax {
            for d in [-a, a] {
                if d != 1 && is_squarefree(d) {
                    out.push(d);
                }
            }
        }
        out
    }
}

/// Quadratic pairs with d ≡ 1 mod 4 on one side, plus composita with cyclic cubics.
pub fn default_pairs() -> Vec<(FieldDescriptor, FieldDescriptor)> {
    let mut v: Vec<(FieldDescriptor, FieldDescriptor)> = [
        (5, -1),
        (13, -3),
        (5, -3),
        (5, 2),
        (5, -2),
        (-3, -1),
        (-3, 2),
        (13, -1),
        (17, -1),
        (-7, -1),
        (-7, 5),
        (-15, -1),
        (5, 10),
        (2, 3),
        (-5, -1),
    ]
    .iter()
    .map(|&(a, b)| (quad(a), quad(b)))
    .collect();
    v.extend([
        (quad(-1), cubic(9)),
        (quad(7), cubic(7)),
        (quad(-5), cubic(9)),
        (quad(-3), cubic(7)),
        (quad(-1), cubic(63)),
        (quad(-5), cubic(63)),
    ]);
    v
}

#[derive(Clone, Debug)]
enum Job {
    Hilbert(i64, u64),
    QuadOrder(i64),
    Ostrowski(FieldDescriptor),
    OrderFormula(FieldDescriptor),
    Abhyankar(FieldDescriptor, FieldDescriptor, u64),
    LemmaSubgroup(FieldDescriptor, FieldDescriptor, u64),
    LemmaIntersection(FieldDescriptor, FieldDescriptor, u64),
    Amalgam(FieldDescriptor, FieldDescriptor),
    TameSum(FieldDescriptor, FieldDescriptor),
    DirectSum(FieldDescriptor, FieldDescriptor),
    Embedding(FieldDescriptor, Option<FieldDescriptor>),
    RelOrder(FieldDescriptor, FieldDescriptor),
    RelContainment(FieldDescriptor, FieldDescriptor),
    NormExtension(FieldDescriptor, FieldDescriptor),
}

impl Job {
    fn id(&self) -> CheckId {
        match self {
            Job::Hilbert(..) => CheckId::Hilbert,
            Job::QuadOrder(_) | Job::OrderFormula(_) | Job::RelOrder(..) => CheckId::OrderFormula,
            Job::Ostrowski(_) => CheckId::Ostrowski,
            Job::Abhyankar(..) => CheckId::Abhyankar,
            Job::LemmaSubgroup(..) => CheckId::LemmaSubgroup,
            Job::LemmaIntersection(..) => CheckId::LemmaIntersection,
            Job::Amalgam(..) => CheckId::Amalgam,
            Job::TameSum(..) => CheckId::TameSum,
            Job::DirectSum(..) => CheckId::DirectSum,
            Job::Embedding(..) => CheckId::Embedding,
            Job::RelContainment(..) => CheckId::RelativeContainment,
            Job::NormExtension(..) => CheckId::NormExtension,
        }
    }

    fn run(&self, cache: &FieldCache) -> CheckResult {
        let bound = cache.budget.ostrowski_bound();
        match self {
            Job::Hilbert(d, fault) => check_hilbert_with(*d, *fault),
            Job::QuadOrder(d) => check_order_formula_quadratic(*d),
            Job::Ostrowski(k) => check_ostrowski(cache, k, bound),
            Job::OrderFormula(k) => check_order_formula(cache, k),
            Job::Abhyankar(a, b, p) => check_abhyankar(cache, a, b, *p),
            Job::LemmaSubgroup(a, b, p) => check_lemma_subgroup(cache, a, b, *p),
            Job::LemmaIntersection(a, b, p) => check_lemma_intersection(cache, a, b, *p),
            Job::Amalgam(a, b) => check_amalgam(cache, a, b),
            Job::TameSum(a, b) => check_tame_sum(cache, a, b),
            Job::DirectSum(a, b) => check_direct_sum(cache, a, b),
            Job::Embedding(a, b) => check_embedding(cache, a, b.as_ref()),
            Job::RelOrder(a, b) => check_relative_order_formula(cache, a, b),
            Job::RelContainment(a, b) => check_relative_containment(cache, a, b),
            Job::NormExtension(a, b) => check_norm_extension(cache, a, b),
        }
    }
}

/// Primes ramified in either field of a pair; empty if a field cannot be built.
fn pair_primes(cache: &FieldCache, a: &FieldDescriptor, b: &FieldDescriptor) -> Vec<u64> {
    let mut ps = Vec::new();
    for d in [a, b] {
        if let Ok(k) = cache.field(d) {
            ps.extend(k.ramified_primes().unwrap_or_default());
        }
    }
    ps.sort_unstable();
    ps.dedup();
    ps
}

/// Jobs grouped so that each group shares its expensive fields; groups run in parallel.
fn plan(scope: &Scope, cache: &FieldCache) -> Vec<Vec<Job>> {
    let mut groups: Vec<Vec<Job>> = Vec::new();
    for d in scope.quadratic_ds() {
        let fault = scope.fault.filter(|f| f.0 == d).map_or(0, |f| f.1);
        let mut g = vec![Job::Hilbert(d, fault), Job::QuadOrder(d)];
        if d.abs() <= scope.quad_ostrowski_max {
            g.push(Job::Ostrowski(quad(d)));
        }
        groups.push(g);
    }
    for &c in &scope.cubic_conductors {
        groups.push(vec![Job::OrderFormula(cubic(c)), Job::Ostrowski(cubic(c))]);
    }
    for k in &scope.fields {
        groups.push(vec![Job::OrderFormula(k.clone()), Job::Ostrowski(k.clone())]);
    }
    for (a, b) in &scope.pairs {
        let mut g = Vec::new();
        for p in pair_primes(cache, a, b) {
            g.push(Job::Abhyankar(a.clone(), b.clone(), p));
            g.push(Job::LemmaSubgroup(a.clone(), b.clone(), p));
            g.push(Job::LemmaIntersection(a.clone(), b.clone(), p));
        }
        g.push(Job::Amalgam(a.clone(), b.clone()));
        g.push(Job::TameSum(a.clone(), b.clone()));
        g.push(Job::DirectSum(a.clone(), b.clone()));
        g.push(Job::Embedding(a.clone(), Some(b.clone())));
        groups.push(g);
    }
    for (a, b) in &scope.relative {
        groups.push(vec![
            Job::RelOrder(a.clone(), b.clone()),
            Job::RelContainment(a.clone(), b.clone()),
            Job::NormExtension(a.clone(), b.clone()),
        ]);
    }
    for g in &mut groups {
        g.retain(|j| scope.wants(j.id()));
    }
    groups.retain(|g| !g.is_empty());
    groups
}

/// Run every check in scope. Results come back in plan order regardless of
/// scheduling.
pub fn run_suite(scope: &Scope, cache: &FieldCache) -> Vec<CheckResult> {
    let groups = plan(scope, cache);
    groups
        .par_iter()
        .map(|g| g.iter().map(|j| j.run(cache)).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

pub fn summarize(results: &[CheckResult]) -> SuiteSummary {
    let mut s = SuiteSummary::default();
    for r in results {
        if r.verdict.is_pass() {
            s.pass += 1;
        } else if r.verdict.is_fail() {
            s.fail += 1;
        } else {
            s.skipped += 1;
        }
    }
    s
}
