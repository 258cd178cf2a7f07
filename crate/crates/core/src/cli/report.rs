//! The `field report` document and the cache record derived from it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::Value;

use super::cache::{now_stamp, CacheRecord, RamifiedEntry, SCHEMA_VERSION};
use super::table::{Format, Table};
use crate::abelian::{format_invariants, AbelianGroup, GroupElement};
use crate::error::Result;
use crate::numberfield::families::FieldDescriptor;
use crate::numberfield::poly;
use crate::polya::{polya_group, PolyaGroupResult};
use crate::verify::{check_hilbert, check_order_formula, check_order_formula_quadratic};
use crate::verify::{CheckResult, FieldCache};

#[derive(Clone, Debug)]
pub struct RamifiedRow {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    pub g: usize,
    /// Class of Π_{p*} in Smith coordinates, with its order.
    pub pi_class: Option<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct FieldReport {
    pub descriptor: String,
    pub polynomial: String,
    pub degree: usize,
    pub disc: BigInt,
    pub signature: (usize, usize),
    pub galois: Option<String>,
    pub class_invariants: Vec<BigInt>,
    pub certified: bool,
    pub unit_rank: usize,
    pub torsion: u64,
    pub unit_norms: Vec<i8>,
    pub regulator: f64,
    pub polya: Option<PolyaGroupResult>,
    pub ramified: Vec<RamifiedRow>,
    pub checks: Vec<CheckResult>,
    pub notes: Vec<String>,
}

fn class_string(g: &AbelianGroup, x: &GroupElement) -> Result<(String, String)> {
    let coords = g.smith_coords(x)?;
    let shown: Vec<String> = coords.iter().zip(g.moduli()).filter(|(_, m)| !m.is_one()).map(|(c, _)| c.to_string()).collect();
    Ok((format!("({})", shown.join(", ")), g.element_order(x)?.to_string()))
}

impl FieldReport {
    pub fn build(cache: &FieldCache, desc: &FieldDescriptor) -> Result<Self> {
        let data = cache.data(desc)?;
        let k = &data.field;
        let units = data.units()?;
        let galois = k.galois_label();
        let polya = match galois {
            Some(_) => Some(polya_group(&data, cache.budget.ostrowski_bound().min(50))?),
            None => None,
        };
        let mut ramified = Vec::new();
        for p in k.ramified_primes()? {
            let above = k.factor_prime(p)?;
            let pi_class = match &polya {
                Some(po) => {
                    let x = po.generators.iter().find(|(q, _)| *q == p).map(|(_, x)| x.clone());
                    match x {
                        Some(x) => Some(class_string(data.group(), &x)?),
                        None => None,
                    }
                }
                None => None,
            };
            ramified.push(RamifiedRow { p, e: above[0].e, f: above[0].f, g: above.len(), pi_class });
        }
        let mut checks = Vec::new();
        if let Some(d) = desc.quadratic_d() {
            checks.push(check_hilbert(d));
            checks.push(check_order_formula_quadratic(d));
        } else if galois.is_some() {
            checks.push(check_order_formula(cache, desc));
        }
        let mut notes = Vec::new();
        if ramified.len() == 1 {
            notes.push(format!("only one ramified prime ({})", ramified[0].p));
        }
        if galois.is_none() {
            notes.push("not Galois over Q: the Polya group is not computed".into());
        }
        if !data.is_certified() {
            notes.push("class group stabilized but not certified".into());
        }
        Ok(Self {
            descriptor: desc.to_string(),
            polynomial: poly::render(k.poly()),
            degree: k.degree(),
            disc: k.disc().clone(),
            signature: k.signature(),
            galois,
            class_invariants: data.group().invariants(),
            certified: data.is_certified(),
            unit_rank: units.rank,
            torsion: units.torsion_order,
            unit_norms: units.unit_norms(k),
            regulator: units.regulator,
            polya,
            ramified,
            checks,
            notes,
        })
    }

    pub fn has_failure(&self) -> bool {
        self.checks.iter().any(|c| c.verdict.is_fail())
    }

    pub fn polya_string(&self) -> String {
        match &self.polya {
            Some(po) => format!("{} (order {})", format_invariants(&po.group.invariants()), po.order()),
            None => "n/a".into(),
        }
    }

    fn summary(&self) -> Vec<(String, String)> {
        let cert = if self.certified { "certified" } else { "not certified" };
        let norms: Vec<String> = self.unit_norms.iter().map(|n| format!("{n:+}")).collect();
        vec![
            ("field".into(), self.descriptor.clone()),
            ("polynomial".into(), self.polynomial.clone()),
            ("degree".into(), self.degree.to_string()),
            ("discriminant".into(), self.disc.to_string()),
            ("signature".into(), format!("({}, {})", self.signature.0, self.signature.1)),
            ("galois group".into(), self.galois.clone().unwrap_or_else(|| "not Galois".into())),
            ("class group".into(), format!("{} ({cert})", format_invariants(&self.class_invariants))),
            (
                "units".into(),
                if self.unit_rank == 0 {
                    format!("rank 0, torsion {}", self.torsion)
                } else {
                    format!(
                        "rank {}, torsion {}, fundamental unit norms [{}], regulator {:.6}",
                        self.unit_rank,
                        self.torsion,
                        norms.join(", "),
                        self.regulator
                    )
                },
            ),
            ("polya group".into(), self.polya_string()),
        ]
    }

    fn ramified_table(&self) -> Table {
        let mut t = Table::new(&["p", "e", "f", "g", "class of Pi_p", "order"]);
        for r in &self.ramified {
            let (c, o) = r.pi_class.clone().unwrap_or_else(|| ("-".into(), "-".into()));
            t.push(vec![r.p.to_string(), r.e.to_string(), r.f.to_string(), r.g.to_string(), c, o]);
        }
        t
    }

    fn checks_table(&self) -> Table {
        let mut t = Table::new(&["check", "verdict", "detail"]);
        for c in &self.checks {
            t.push(vec![c.check_id.to_string(), c.verdict.to_string(), check_detail(c)]);
        }
        t
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Md => {
                let mut out = format!("# {}\n\n", self.descriptor);
                let mut t = Table::new(&["property", "value"]);
                for (k, v) in self.summary() {
                    t.push(vec![k, v]);
                }
                out += &t.render(format);
                out += "\n## Ramified primes\n\n";
                out += &self.ramified_table().render(format);
                out += "\n## Predictions\n\n";
                out += &self.checks_table().render(format);
                if !self.notes.is_empty() {
                    out += "\n## Notes\n\n";
                    for n in &self.notes {
                        out += &format!("- {n}\n");
                    }
                }
                out
            }
            Format::Csv | Format::Jsonl => {
                let mut t = Table::new(&["section", "key", "value"]);
                for (k, v) in self.summary() {
                    t.push(vec!["field".into(), k, v]);
                }
                for r in &self.ramified {
                    let (c, o) = r.pi_class.clone().unwrap_or_else(|| ("-".into(), "-".into()));
                    t.push(vec![
                        "ramified".into(),
                        r.p.to_string(),
                        format!("e={} f={} g={} class={c} order={o}", r.e, r.f, r.g),
                    ]);
                }
                for c in &self.checks {
                    t.push(vec!["check".into(), c.check_id.to_string(), format!("{}: {}", c.verdict, check_detail(c))]);
                }
                for n in &self.notes {
                    t.push(vec!["note".into(), String::new(), n.clone()]);
                }
                t.render(format)
            }
        }
    }

    pub fn to_record(&self, seed: u64, budget: &str) -> CacheRecord {
        let mut predictions = BTreeMap::new();
        for c in &self.checks {
            if let Some(v) = predicted_value(c) {
                predictions.insert(c.check_id.to_string(), v);
            }
        }
        let unit_norm = (self.signature.0 > 0 && self.unit_rank > 0).then(|| {
            if self.unit_norms.contains(&-1) { "-1" } else { "1" }.to_string()
        });
        CacheRecord {
            schema_version: SCHEMA_VERSION.into(),
            field_descriptor: self.descriptor.clone(),
            disc: self.disc.to_string(),
            signature: vec![self.signature.0.to_string(), self.signature.1.to_string()],
            class_invariants: self.class_invariants.iter().map(|d| d.to_string()).collect(),
            polya_invariants: self
                .polya
                .as_ref()
                .map(|p| p.group.invariants().iter().map(|d| d.to_string()).collect())
                .unwrap_or_default(),
            ramified: self
                .ramified
                .iter()
                .map(|r| RamifiedEntry { p: r.p.to_string(), e: r.e.to_string(), f: r.f.to_string() })
                .collect(),
            unit_norm,
            predictions,
            computed_at: now_stamp(),
            seed: seed.to_string(),
            budgets: budget.to_string(),
            certified: self.certified,
        }
    }
}

/// The predicted Pólya group order carried by a check witness, if any.
fn predicted_value(c: &CheckResult) -> Option<String> {
    let w = &c.witness;
    let num = |k: &str| w.get(k).and_then(Value::as_u64);
    if let Some(p) = num("predicted").or_else(|| num("predicted_cyclic")) {
        return Some(p.to_string());
    }
    match (num("ramification_product"), num("h1")) {
        (Some(prod), Some(h1)) if h1 > 0 && prod % h1 == 0 => Some((prod / h1).to_string()),
        _ => None,
    }
}

fn check_detail(c: &CheckResult) -> String {
    let w = &c.witness;
    let computed = w.get("computed").or_else(|| w.get("polya_order")).and_then(Value::as_u64);
    let mut parts = Vec::new();
    if let Some(p) = predicted_value(c) {
        parts.push(format!("predicted |Po| = {p}"));
    }
    if let Some(x) = computed {
        parts.push(format!("computed |Po| = {x}"));
    }
    if let Some(h1) = w.get("h1").and_then(Value::as_u64) {
        parts.push(format!("|H1| = {h1}"));
    }
    if let Some(e) = w.get("error").and_then(Value::as_str) {
        parts.push(e.to_string());
    }
    if let crate::verify::Verdict::Skipped { detail, .. } = &c.verdict {
        parts.push(detail.clone());
    }
    parts.join(", ")
}

/// The record a quadratic scan stores for Q(√d), computed along the form path.
pub fn quadratic_record(d: i64, seed: u64, budget: &str) -> Result<CacheRecord> {
    use crate::polya::h1_order_quadratic;
    use crate::quadratic::{hilbert_predicted_order, polya_group_quad, QuadraticField};
    let k = QuadraticField::new(d)?;
    let po = polya_group_quad(&k)?;
    let pred = hilbert_predicted_order(&k)?;
    let ramified = k.ramified_primes();
    let h1 = h1_order_quadratic(d)?;
    let prod = 1u64 << ramified.len();
    let mut predictions = BTreeMap::new();
    predictions.insert("hilbert".to_string(), pred.order.to_string());
    if prod.is_multiple_of(h1) {
        predictions.insert("order-formula".to_string(), (prod / h1).to_string());
    }
    let disc = k.disc();
    Ok(CacheRecord {
        schema_version: SCHEMA_VERSION.into(),
        field_descriptor: FieldDescriptor::Quad(d).to_string(),
        disc: disc.to_string(),
        signature: if k.is_real() { vec!["2".into(), "0".into()] } else { vec!["0".into(), "1".into()] },
        class_invariants: po.class_group.group.invariants().iter().map(|x| x.to_string()).collect(),
        polya_invariants: po.presentation().invariants().iter().map(|x| x.to_string()).collect(),
        ramified: ramified
            .iter()
            .map(|p| RamifiedEntry { p: p.to_string(), e: "2".into(), f: "1".into() })
            .collect(),
        unit_norm: k.is_real().then(|| pred.unit_norm.to_string()),
        predictions,
        computed_at: now_stamp(),
        seed: seed.to_string(),
        budgets: budget.to_string(),
        certified: true,
    })
}

/// Product of the invariant factors stored in a record.
pub fn order_of(invariants: &[String]) -> Option<BigInt> {
    invariants.iter().try_fold(BigInt::one(), |acc, s| {
        let x: BigInt = s.parse().ok()?;
        x.is_positive().then(|| acc * x)
    })
}
