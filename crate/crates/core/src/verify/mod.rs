//! Named executable checks. Each returns a verdict (pass, fail, or skipped with a
//! machine-readable reason) together with a witness record.

mod cache;
mod checks;
mod suite;

pub use cache::{FieldCache, Pair};
pub use checks::*;
pub use suite::{run_suite, summarize, Scope, Suite, SuiteSummary};

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::numberfield::classgroup::ClassGroupBudget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckId {
    Hilbert,
    Ostrowski,
    Abhyankar,
    LemmaSubgroup,
    LemmaIntersection,
    Amalgam,
    TameSum,
    DirectSum,
    Embedding,
    OrderFormula,
    RelativeContainment,
    NormExtension,
}

impl CheckId {
    pub const ALL: [CheckId; 12] = [
        CheckId::Hilbert,
        CheckId::Ostrowski,
        CheckId::Abhyankar,
        CheckId::LemmaSubgroup,
        CheckId::LemmaIntersection,
        CheckId::Amalgam,
        CheckId::TameSum,
        CheckId::DirectSum,
        CheckId::Embedding,
        CheckId::OrderFormula,
        CheckId::RelativeContainment,
        CheckId::NormExtension,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckId::Hilbert => "hilbert",
            CheckId::Ostrowski => "ostrowski",
            CheckId::Abhyankar => "abhyankar",
            CheckId::LemmaSubgroup => "lemma-subgroup",
            CheckId::LemmaIntersection => "lemma-intersection",
            CheckId::Amalgam => "amalgam",
            CheckId::TameSum => "tame-sum",
            CheckId::DirectSum => "direct-sum",
            CheckId::Embedding => "embedding",
            CheckId::OrderFormula => "order-formula",
            CheckId::RelativeContainment => "relative-containment",
            CheckId::NormExtension => "norm-extension",
        }
    }

    /// Checks that take a pair of fields.
    pub fn is_pair_check(&self) -> bool {
        matches!(
            self,
            CheckId::Abhyankar
                | CheckId::LemmaSubgroup
                | CheckId::LemmaIntersection
                | CheckId::Amalgam
                | CheckId::TameSum
                | CheckId::DirectSum
                | CheckId::Embedding
        )
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown check `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    HypothesisUnmet,
    Resource,
    Unsupported,
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SkipReason::HypothesisUnmet => "hypothesis_unmet",
            SkipReason::Resource => "resource",
            SkipReason::Unsupported => "unsupported",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped { reason: SkipReason, detail: String },
}

impl Verdict {
    pub fn skip(reason: SkipReason, detail: impl Into<String>) -> Self {
        Verdict::Skipped { reason, detail: detail.into() }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail)
    }

    pub fn is_skip(&self) -> bool {
        matches!(self, Verdict::Skipped { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("pass"),
            Verdict::Fail => f.write_str("FAIL"),
            Verdict::Skipped { reason, .. } => write!(f, "skipped({reason})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: CheckId,
    pub instance: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    pub witness: Value,
    pub runtime_ms: u64,
}

/// Resource presets for class-group dependent checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    Small,
    #[default]
    Default,
    Large,
}

impl Budget {
    pub fn class_group(&self) -> ClassGroupBudget {
        match self {
            Budget::Small => ClassGroupBudget::small(),
            Budget::Default => ClassGroupBudget::default(),
            Budget::Large => ClassGroupBudget::large(),
        }
    }

    /// Prime bound for the unramified-generator and principality checks.
    pub fn ostrowski_bound(&self) -> u64 {
        match self {
            Budget::Small => 30,
            Budget::Default | Budget::Large => 100,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Budget::Small => "small",
            Budget::Default => "default",
            Budget::Large => "large",
        }
    }
}

impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Budget::Small),
            "default" => Ok(Budget::Default),
            "large" => Ok(Budget::Large),
            _ => Err(Error::Parse(format!("unknown budget `{s}` (small, default, large)"))),
        }
    }
}

/// Run a check body, timing it and turning errors into verdicts: resource and
/// unsupported errors become skips, anything else is a failure with the message
/// as witness.
pub(crate) fn timed(id: CheckId, instance: impl Into<String>, body: impl FnOnce() -> Result<(Verdict, Value)>) -> CheckResult {
    let start = Instant::now();
    let (verdict, witness) = match body() {
        Ok(v) => v,
        Err(Error::Resource(why)) => (Verdict::skip(SkipReason::Resource, why), Value::Null),
        Err(Error::Unsupported(why)) => (Verdict::skip(SkipReason::Unsupported, why), Value::Null),
        Err(e) => (Verdict::Fail, serde_json::json!({ "error": e.to_string() })),
    };
    CheckResult { check_id: id, instance: instance.into(), verdict, witness, runtime_ms: start.elapsed().as_millis() as u64 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::families::FieldDescriptor;

    fn fd(s: &str) -> FieldDescriptor {
        s.parse().unwrap()
    }

    fn reason(r: &CheckResult) -> Option<SkipReason> {
        match &r.verdict {
            Verdict::Skipped { reason, .. } => Some(*reason),
            _ => None,
        }
    }

    #[test]
    fn hilbert_examples() {
        for d in [-21, 3, -1, 10, -5] {
            assert!(check_hilbert(d).verdict.is_pass(), "d = {d}");
            assert!(check_order_formula_quadratic(d).verdict.is_pass(), "d = {d}");
        }
        assert!(check_hilbert_with(-21, 1).verdict.is_fail());
    }

    #[test]
    fn ostrowski_examples() {
        let c = FieldCache::new(0, Budget::Default);
        assert!(check_ostrowski(&c, &fd("quad:-5"), 50).verdict.is_pass());
        assert!(check_ostrowski(&c, &fd("biquad:5,-1"), 30).verdict.is_pass());
        let r = check_ostrowski(&c, &fd("poly:-2,0,0,1"), 30);
        assert_eq!(reason(&r), Some(SkipReason::Unsupported));
    }

    #[test]
    fn abhyankar_examples() {
        let c = FieldCache::new(0, Budget::Default);
        let r = check_abhyankar(&c, &fd("quad:2"), &fd("quad:3"), 3);
        assert!(r.verdict.is_pass());
        assert_eq!(r.witness["lcm"], 2);
        let r = check_abhyankar(&c, &fd("quad:2"), &fd("quad:3"), 2);
        assert_eq!(reason(&r), Some(SkipReason::HypothesisUnmet));
        let r = check_abhyankar(&c, &fd("quad:7"), &fd("ccubic:cond7"), 7);
        assert!(r.verdict.is_pass());
        assert_eq!(r.witness["e_L"][0], 6);
    }

    #[test]
    fn lemma_examples() {
        let c = FieldCache::new(0, Budget::Default);
        let r = check_lemma_subgroup(&c, &fd("quad:7"), &fd("ccubic:cond7"), 7);
        assert!(r.verdict.is_pass(), "{}", r.witness);
        assert_eq!(r.witness["exponents"], serde_json::json!([3, 2]));
        assert_eq!(r.witness["bezout"], serde_json::json!([1, -1]));
        let r = check_lemma_intersection(&c, &fd("quad:5"), &fd("quad:10"), 5);
        assert!(r.verdict.is_pass());
        assert_eq!(r.witness["equality"], false);
        let r = check_lemma_intersection(&c, &fd("quad:7"), &fd("ccubic:cond7"), 7);
        assert!(r.verdict.is_pass());
        assert_eq!(r.witness["equality"], true);
        // unramified everywhere
        assert!(check_lemma_subgroup(&c, &fd("quad:7"), &fd("ccubic:cond7"), 11).verdict.is_pass());
    }

    #[test]
    fn amalgam_and_sums() {
        let c = FieldCache::new(0, Budget::Default);
        assert!(check_amalgam(&c, &fd("quad:-1"), &fd("ccubic:cond9")).verdict.is_pass());
        assert_eq!(reason(&check_amalgam(&c, &fd("quad:2"), &fd("quad:3"))), Some(SkipReason::HypothesisUnmet));
        assert_eq!(reason(&check_amalgam(&c, &fd("quad:5"), &fd("quad:5"))), Some(SkipReason::HypothesisUnmet));
        assert!(check_tame_sum(&c, &fd("quad:5"), &fd("quad:-1")).verdict.is_pass());
        assert!(check_tame_sum(&c, &fd("quad:13"), &fd("quad:-3")).verdict.is_pass());
        assert_eq!(reason(&check_tame_sum(&c, &fd("quad:2"), &fd("quad:3"))), Some(SkipReason::HypothesisUnmet));
        let r = check_direct_sum(&c, &fd("quad:-1"), &fd("ccubic:cond9"));
        assert!(r.verdict.is_pass());
        assert_eq!(r.witness["po_l"], serde_json::json!([]));
        assert_eq!(reason(&check_direct_sum(&c, &fd("quad:5"), &fd("quad:5"))), Some(SkipReason::HypothesisUnmet));
    }

    #[test]
    fn direct_sum_of_orders_two_and_three() {
        let c = FieldCache::new(0, Budget::Large);
        let r = check_direct_sum(&c, &fd("quad:-5"), &fd("ccubic:cond63"));
        assert!(r.verdict.is_pass(), "{}", r.witness);
        assert_eq!(r.witness["po_l"], serde_json::json!(["6"]));
        // the default budget refuses this Minkowski bound
        let small = FieldCache::new(0, Budget::Default);
        let r = check_direct_sum(&small, &fd("quad:-5"), &fd("ccubic:cond63"));
        assert_eq!(reason(&r), Some(SkipReason::Resource));
    }

    #[test]
    fn embedding_examples() {
        let c = FieldCache::new(0, Budget::Default);
        let r = check_embedding(&c, &fd("quad:-5"), Some(&fd("ccubic:cond9")));
        assert!(r.verdict.is_pass());
        assert_eq!(r.witness["image"], serde_json::json!(["2"]));
        assert!(check_embedding(&c, &fd("quad:-5"), None).verdict.is_pass());
        let r = check_embedding(&c, &fd("quad:5"), Some(&fd("quad:-1")));
        assert_eq!(reason(&r), Some(SkipReason::HypothesisUnmet));
    }

    #[test]
    fn order_formula_examples() {
        let c = FieldCache::new(0, Budget::Default);
        assert!(check_order_formula(&c, &fd("quad:-5")).verdict.is_pass());
        let r = check_order_formula(&c, &fd("ccubic:cond63"));
        assert!(r.verdict.is_pass());
        assert_eq!(r.witness["polya_order"], 3);
        assert_eq!(r.witness["h1"], 3);
        let r = check_order_formula(&c, &fd("biquad:5,-1"));
        assert_eq!(reason(&r), Some(SkipReason::HypothesisUnmet));
        assert_eq!(r.witness["inferred_h1"], "4");
        let r = check_relative_order_formula(&c, &fd("quad:5"), &fd("quad:-1"));
        assert!(r.verdict.is_pass(), "{}", r.witness);
    }

    #[test]
    fn relative_examples() {
        let c = FieldCache::new(0, Budget::Default);
        let r = check_relative_containment(&c, &fd("quad:5"), &fd("quad:-1"));
        assert!(r.verdict.is_pass());
        assert_eq!(r.witness["galois_polya_extension"], true);
        assert!(check_norm_extension(&c, &fd("quad:-5"), &fd("quad:-1")).verdict.is_pass());
    }

    #[test]
    fn suite_plumbing() {
        let c = FieldCache::new(0, Budget::Small);
        assert!(run_suite(&Scope::empty(Suite::All), &c).is_empty());
        let mut s = Scope::empty(Suite::QuadraticScan);
        s.dmin = 2;
        s.dmax = 50;
        let a = run_suite(&s, &c);
        let b = run_suite(&s, &c);
        assert_eq!(summarize(&a).fail, 0);
        let strip = |v: &[CheckResult]| v.iter().map(|r| (r.check_id, r.instance.clone(), r.verdict.clone(), r.witness.clone())).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
        s.fault = Some((-21, 1));
        assert_eq!(summarize(&run_suite(&s, &c)).fail, 1);
        assert!("quadratic".parse::<Suite>().is_ok());
        assert!("nope".parse::<Suite>().is_err());
        for id in CheckId::ALL {
            assert_eq!(id.as_str().parse::<CheckId>().unwrap(), id);
        }
    }
}
