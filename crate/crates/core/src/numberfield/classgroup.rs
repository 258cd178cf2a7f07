//! Class groups by relation collection over a factor base, with a discrete-log map on ideals.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::{Elt, NumberField};
use super::ideal::Ideal;
use super::lattice::{fincke_pohst, gram_of};
use super::prime::PrimeIdeal;
use super::principal::Principality;
use super::units::{combine, UnitGroup};
use crate::abelian::normal_form::{IncrementalHnf, IntMatrix};
use crate::abelian::{AbelianGroup, GroupElement};
use crate::arith::primes_up_to;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassGroupBudget {
    /// Largest norm of a factor-base prime.
    pub fb_bound: u64,
    /// Relation attempts before giving up.
    pub max_attempts: usize,
    /// Consecutive relations that must leave the lattice unchanged once it has full rank.
    pub stable_after: usize,
    /// Fields with a larger Minkowski bound are refused.
    pub max_minkowski: f64,
}

impl ClassGroupBudget {
    pub fn small() -> Self {
        Self { fb_bound: 60, max_attempts: 20_000, stable_after: 30, max_minkowski: 2_000.0 }
    }
    pub fn large() -> Self {
        Self { fb_bound: 400, max_attempts: 400_000, stable_after: 80, max_minkowski: 100_000.0 }
    }
}

impl Default for ClassGroupBudget {
    fn default() -> Self {
        Self { fb_bound: 150, max_attempts: 100_000, stable_after: 50, max_minkowski: 10_000.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certification {
    /// No prime has norm below the Minkowski bound.
    MinkowskiTrivial,
    /// The relation lattice stopped changing.
    Stabilized { extra_relations: usize },
    /// Stabilized, and every class of prime order was shown non-principal, so no
    /// relation is missing.
    Verified { extra_relations: usize, tested: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertifyOutcome {
    Verified,
    /// A principality test was inconclusive.
    Undecided(String),
    TooManyClasses(usize),
}

/// Largest number of prime-order classes [`ClassGroup::certify`] will test.
pub const MAX_CERTIFY_TESTS: usize = 400;

#[derive(Debug)]
pub struct ClassGroup {
    pub group: AbelianGroup,
    pub factor_base: Vec<PrimeIdeal>,
    pub minkowski_bound: f64,
    pub seed: u64,
    pub relations_tried: usize,
    pub certification: Certification,
    fb_index: HashMap<IntMatrix, usize>,
    fb_by_p: BTreeMap<u64, Vec<usize>>,
    cache: Mutex<HashMap<IntMatrix, GroupElement>>,
}

impl Clone for ClassGroup {
    fn clone(&self) -> Self {
        Self {
            group: self.group.clone(),
            factor_base: self.factor_base.clone(),
            minkowski_bound: self.minkowski_bound,
            seed: self.seed,
            relations_tried: self.relations_tried,
            certification: self.certification.clone(),
            fb_index: self.fb_index.clone(),
            fb_by_p: self.fb_by_p.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

struct FactorBase<'a> {
    primes: &'a [PrimeIdeal],
    by_p: &'a BTreeMap<u64, Vec<usize>>,
}

impl FactorBase<'_> {
    /// Valuation vector of α if (α) factors over the base, with `skip` (a prime outside the
    /// base) allowed to divide α exactly `skip_exp` times.
    fn smooth(&self, k: &NumberField, alpha: &Elt, skip: Option<(&PrimeIdeal, i64)>) -> Option<Vec<i64>> {
        let mut nm = k.norm(alpha).abs();
        if nm.is_zero() {
            return None;
        }
        let mut vp: BTreeMap<u64, u32> = BTreeMap::new();
        if let Some((pr, e)) = skip {
            let skip_norm = num_traits::pow(pr.norm(), e as usize);
            if !(&nm % &skip_norm).is_zero() {
                return None;
            }
            nm /= skip_norm;
        }
        for &p in self.by_p.keys() {
            let pb = BigInt::from(p);
            let mut c = 0;
            while (&nm % &pb).is_zero() {
                nm /= &pb;
                c += 1;
            }
            if c > 0 {
                vp.insert(p, c);
            }
        }
        if !nm.is_one() {
            return None;
        }
        if let Some((pr, e)) = skip {
            if k.valuation(pr, alpha) != e {
                return None;
            }
        }
        let mut out = vec![0i64; self.primes.len()];
        for (p, c) in vp {
            let mut acc = 0u32;
            for &i in &self.by_p[&p] {
                let v = k.valuation(&self.primes[i], alpha);
                out[i] = v;
                acc += v as u32 * self.primes[i].f;
            }
            let expected = c;
            if acc != expected {
                return None;
            }
        }
        Some(out)
    }
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

impl NumberField {
    /// A small integral ideal in the class of `a`.
    pub fn reduce_ideal(&self, a: &Ideal) -> Result<Ideal> {
        let inv = self.small_cofactor(a)?;
        self.small_cofactor(&inv)
    }

    /// (α)/a for an element α of a of small norm; lies in the inverse class.
    fn small_cofactor(&self, a: &Ideal) -> Result<Ideal> {
        if a.is_unit_ideal() {
            return Ok(a.clone());
        }
        let alpha = self
            .lll_reduce(&a.hnf)
            .into_iter()
            .min_by_key(|v| self.norm(v).abs())
            .ok_or_else(|| Error::InvalidInput("empty ideal basis".into()))?;
        self.ideal_div(&self.principal_ideal(&alpha)?, a)
    }

    /// All prime ideals of norm ≤ bound, ordered by norm then canonical order.
    pub fn primes_of_norm_up_to(&self, bound: u64) -> Result<Vec<PrimeIdeal>> {
        let mut out = Vec::new();
        for p in primes_up_to(bound) {
            for pr in self.factor_prime(p)? {
                if pr.norm_u64().is_some_and(|nm| nm <= bound) {
                    out.push(pr);
                }
            }
        }
        out.sort_by_key(|pr| pr.norm_u64().unwrap_or(u64::MAX));
        Ok(out)
    }

    pub fn class_group(&self, seed: u64) -> Result<ClassGroup> {
        self.class_group_with(seed, &ClassGroupBudget::default())
    }

    pub fn class_group_with(&self, seed: u64, budget: &ClassGroupBudget) -> Result<ClassGroup> {
        let mink = self.minkowski_bound();
        if mink > budget.max_minkowski {
            return Err(Error::Resource(format!(
                "Minkowski bound {mink:.1} exceeds the budget limit {}",
                budget.max_minkowski
            )));
        }
        let mbound = mink.floor() as u64;
        let small = self.primes_of_norm_up_to(mbound)?;
        if small.is_empty() {
            return Ok(ClassGroup::assemble(
                AbelianGroup::trivial(),
                Vec::new(),
                mink,
                seed,
                0,
                Certification::MinkowskiTrivial,
            ));
        }
        let min_norm = small[0].norm_u64().unwrap();
        let b1 = budget.fb_bound.min(mbound).max(min_norm);
        let fb: Vec<PrimeIdeal> = small.iter().filter(|p| p.norm_u64().unwrap() <= b1).cloned().collect();
        let outside: Vec<PrimeIdeal> = small.iter().filter(|p| p.norm_u64().unwrap() > b1).cloned().collect();
        let mut by_p: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (i, pr) in fb.iter().enumerate() {
            by_p.entry(pr.p).or_default().push(i);
        }
        let base = FactorBase { primes: &fb, by_p: &by_p };
        let m = fb.len();
        let mut lattice = IncrementalHnf::new(m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut stable = 0usize;
        let mut tried = 0usize;
        let needed = budget.stable_after.max(2 * m);

        // relations from the smallest elements of O_K
        let n = self.degree();
        let ob: Vec<Elt> = (0..n).map(|i| self.basis_element(i)).collect();
        let reduced_o = self.lll_reduce(&ob);
        let g = gram_of(&reduced_o, self.gram());
        let smallest = g.iter().enumerate().map(|(i, r)| r[i]).fold(f64::INFINITY, f64::min);
        let mut initial = Vec::new();
        fincke_pohst(&g, smallest * 6.0 + n as f64, 200_000, &mut |x, _| {
            initial.push(combine(&reduced_o, x));
            initial.len() < 3 * m + 50
        });
        for alpha in &initial {
            tried += 1;
            if let Some(v) = base.smooth(self, alpha, None) {
                lattice.insert(&to_big(&v));
            }
        }

        let mut attempt = 0usize;
        while attempt < budget.max_attempts {
            attempt += 1;
            let mut exps = vec![0u32; m];
            exps[attempt % m] += 1;
            for _ in 0..rng.gen_range(0..3) {
                exps[rng.gen_range(0..m)] += 1;
            }
            let ideal = exps.iter().enumerate().filter(|(_, &e)| e > 0).fold(self.unit_ideal(), |acc, (i, &e)| {
                self.ideal_mul(&acc, &self.ideal_pow(&fb[i].ideal, e as u64))
            });
            let reduced = self.lll_reduce(&ideal.hnf);
            for _ in 0..4 {
                // occasional wide draws reach generators stretched by large units
                let r = if rng.gen_bool(0.25) { 8 } else { 2 };
                let coeffs: Vec<i64> = (0..n).map(|_| rng.gen_range(-r..=r)).collect();
                if coeffs.iter().all(|&c| c == 0) {
                    continue;
                }
                let alpha = combine(&reduced, &coeffs);
                tried += 1;
                let Some(v) = base.smooth(self, &alpha, None) else { continue };
                let grew = lattice.insert(&to_big(&v));
                if lattice.is_full_rank() {
                    if grew {
                        stable = 0;
                    } else {
                        stable += 1;
                    }
                }
            }
            if lattice.is_full_rank() && stable >= needed {
                break;
            }
        }
        if !(lattice.is_full_rank() && stable >= needed) {
            return Err(Error::Resource(format!(
                "class group relations did not stabilize within {} attempts (rank {}/{m})",
                budget.max_attempts,
                lattice.rank()
            )));
        }
        let group = AbelianGroup::new(m, lattice.basis())?;
        let cg = ClassGroup::assemble(group, fb, mink, seed, tried, Certification::Stabilized { extra_relations: stable });
        // every prime up to the Minkowski bound must be expressible over the factor base
        for pr in &outside {
            cg.dlog_prime(self, pr)?;
        }
        Ok(cg)
    }

    /// Class group by exhaustive principality tests on all ideals built from primes of norm
    /// below the Minkowski bound. Aborts on any inconclusive test.
    pub fn brute_force_class_group(&self, units: &UnitGroup) -> Result<(AbelianGroup, Vec<PrimeIdeal>)> {
        let mbound = self.minkowski_bound().floor() as u64;
        let primes = self.primes_of_norm_up_to(mbound)?;
        if primes.is_empty() {
            return Ok((AbelianGroup::trivial(), primes));
        }
        let decide = |a: &Ideal| -> Result<bool> {
            match self.is_principal(a, Some(units)) {
                Principality::Principal(_) => Ok(true),
                Principality::NotPrincipal => Ok(false),
                Principality::Unknown(why) => Err(Error::Resource(format!("oracle aborted: {why}"))),
            }
        };
        let mut orders = Vec::new();
        for pr in &primes {
            let mut cur = pr.ideal.clone();
            let mut k = 1u64;
            while !decide(&cur)? {
                k += 1;
                if k > 64 {
                    return Err(Error::Resource("prime class order exceeds 64".into()));
                }
                cur = self.ideal_mul(&cur, &pr.ideal);
            }
            orders.push(k);
        }
        let boxsize: u64 = orders.iter().product();
        if boxsize > 20_000 {
            return Err(Error::Resource(format!("oracle box of size {boxsize} is too large")));
        }
        let m = primes.len();
        let mut rel: Vec<Vec<BigInt>> = (0..m)
            .map(|i| (0..m).map(|j| if i == j { BigInt::from(orders[i]) } else { BigInt::zero() }).collect())
            .collect();
        let mut v = vec![0u64; m];
        loop {
            let mut i = 0;
            while i < m {
                v[i] += 1;
                if v[i] < orders[i] {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
            if v.iter().filter(|&&x| x > 0).count() < 2 {
                continue;
            }
            let ideal = v.iter().enumerate().fold(self.unit_ideal(), |acc, (j, &e)| {
                self.ideal_mul(&acc, &self.ideal_pow(&primes[j].ideal, e))
            });
            if decide(&ideal)? {
                rel.push(v.iter().map(|&x| BigInt::from(x)).collect());
            }
        }
        Ok((AbelianGroup::new(m, rel)?, primes))
    }
}

impl ClassGroup {
    fn assemble(
        group: AbelianGroup,
        factor_base: Vec<PrimeIdeal>,
        minkowski_bound: f64,
        seed: u64,
        relations_tried: usize,
        certification: Certification,
    ) -> Self {
        let fb_index = factor_base.iter().enumerate().map(|(i, p)| (p.ideal.hnf.clone(), i)).collect();
        let mut fb_by_p: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (i, pr) in factor_base.iter().enumerate() {
            fb_by_p.entry(pr.p).or_default().push(i);
        }
        Self {
            group,
            factor_base,
            minkowski_bound,
            seed,
            relations_tried,
            certification,
            fb_index,
            fb_by_p,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn order(&self) -> u64 {
        self.group.order_u64().unwrap_or(0)
    }

    pub fn is_verified(&self) -> bool {
        matches!(self.certification, Certification::MinkowskiTrivial | Certification::Verified { .. })
    }

    /// Classes of prime order, one per cyclic subgroup, in generator coordinates.
    pub fn prime_order_classes(&self) -> Vec<GroupElement> {
        let moduli = self.group.moduli();
        let mut qs: Vec<u64> = moduli
            .iter()
            .filter_map(|d| d.to_u64())
            .filter(|&d| d > 1)
            .flat_map(crate::arith::prime_factors_u64)
            .collect();
        qs.sort_unstable();
        qs.dedup();
        let mut out = Vec::new();
        for q in qs {
            let qb = BigInt::from(q);
            let idx: Vec<usize> = (0..moduli.len()).filter(|&i| !moduli[i].is_zero() && (&moduli[i] % &qb).is_zero()).collect();
            let r = idx.len() as u32;
            // vectors over F_q whose first nonzero entry is 1
            let total = q.pow(r);
            for code in 1..total {
                let mut digits = Vec::with_capacity(idx.len());
                let mut c = code;
                for _ in 0..r {
                    digits.push(c % q);
                    c /= q;
                }
                if digits.iter().find(|&&d| d != 0) != Some(&1) {
                    continue;
                }
                let mut y = vec![BigInt::zero(); moduli.len()];
                for (&i, &dg) in idx.iter().zip(&digits) {
                    y[i] = BigInt::from(dg) * (&moduli[i] / &qb);
                }
                out.push(self.group.from_smith(&y));
                if out.len() > MAX_CERTIFY_TESTS {
                    return out;
                }
            }
        }
        out
    }

    /// Rule out missing relations by showing that every class of prime order is
    /// non-principal. The test uses a small integral ideal in the same class. A
    /// principal one exposes a relation the search missed: it is added and the test
    /// starts over on the smaller group.
    pub fn certify(&mut self, k: &NumberField, units: &UnitGroup) -> Result<CertifyOutcome> {
        let mut extra = match self.certification {
            Certification::MinkowskiTrivial | Certification::Verified { .. } => return Ok(CertifyOutcome::Verified),
            Certification::Stabilized { extra_relations } => extra_relations,
        };
        'restart: loop {
            let classes = self.prime_order_classes();
            if classes.len() > MAX_CERTIFY_TESTS {
                return Ok(CertifyOutcome::TooManyClasses(classes.len()));
            }
            let exponent = self.group.invariants().into_iter().max().unwrap_or_else(BigInt::one);
            for x in &classes {
                // exponent·e_i is already a relation, so reducing mod it keeps the class
                let reduced: Vec<BigInt> = x.coords.iter().map(|c| c.mod_floor(&exponent)).collect();
                let mut b = k.unit_ideal();
                for (pr, e) in self.factor_base.iter().zip(&reduced) {
                    for _ in 0..e.to_u64().unwrap_or(0) {
                        b = k.reduce_ideal(&k.ideal_mul(&b, &pr.ideal))?;
                    }
                }
                match k.is_principal(&b, Some(units)) {
                    Principality::NotPrincipal => {}
                    Principality::Principal(_) => {
                        let mut rel = self.group.relations().clone();
                        rel.push(reduced);
                        let before = self.group.order();
                        self.group = AbelianGroup::new(self.factor_base.len(), rel)?;
                        if self.group.order() >= before {
                            return Err(Error::Inconsistent("a principal class did not shrink the class group".into()));
                        }
                        self.cache.lock().unwrap().clear();
                        extra += 1;
                        continue 'restart;
                    }
                    Principality::Unknown(why) => {
                        return Ok(CertifyOutcome::Undecided(format!("norm {}: {why}", b.norm_int())))
                    }
                }
            }
            self.certification = Certification::Verified { extra_relations: extra, tested: classes.len() };
            return Ok(CertifyOutcome::Verified);
        }
    }

    pub fn invariants(&self) -> Vec<u64> {
        self.group.invariants_u64()
    }

    /// Class of a prime ideal.
    pub fn dlog_prime(&self, k: &NumberField, pr: &PrimeIdeal) -> Result<GroupElement> {
        let m = self.factor_base.len();
        if let Some(&i) = self.fb_index.get(&pr.ideal.hnf) {
            return Ok(GroupElement::unit(m, i));
        }
        if m == 0 {
            return Ok(GroupElement::zero(0));
        }
        if let Some(x) = self.cache.lock().unwrap().get(&pr.ideal.hnf) {
            return Ok(x.clone());
        }
        let base = FactorBase { primes: &self.factor_base, by_p: &self.fb_by_p };
        let reduced = k.lll_reduce(&pr.ideal.hnf);
        for v in &reduced {
            if let Some(x) = base.smooth(k, v, Some((pr, 1))) {
                return Ok(self.remember(pr, x));
            }
        }
        let g = gram_of(&reduced, k.gram());
        let smallest = g.iter().enumerate().map(|(i, r)| r[i]).fold(f64::INFINITY, f64::min);
        let mut radius = smallest * 2.0;
        for _ in 0..12 {
            let mut hit = None;
            fincke_pohst(&g, radius, 2_000_000, &mut |x, _| {
                let alpha = combine(&reduced, x);
                if let Some(v) = base.smooth(k, &alpha, Some((pr, 1))) {
                    hit = Some(v);
                    return false;
                }
                true
            });
            if let Some(v) = hit {
                return Ok(self.remember(pr, v));
            }
            radius *= 2.0;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ pr.p);
        for _ in 0..200_000 {
            let coeffs: Vec<i64> = (0..k.degree()).map(|_| rng.gen_range(-6..=6)).collect();
            let alpha = combine(&reduced, &coeffs);
            if k.is_zero(&alpha) {
                continue;
            }
            if let Some(v) = base.smooth(k, &alpha, Some((pr, 1))) {
                return Ok(self.remember(pr, v));
            }
        }
        Err(Error::Resource(format!("no smooth element found for a prime of norm {}", pr.norm())))
    }

    fn remember(&self, pr: &PrimeIdeal, v: Vec<i64>) -> GroupElement {
        // (α) = P·J  ⇒  [P] = −[J]
        let x = GroupElement::new(v.iter().map(|&c| BigInt::from(-c)).collect());
        let x = self.group.normalize(&x).unwrap_or(x);
        self.cache.lock().unwrap().insert(pr.ideal.hnf.clone(), x.clone());
        x
    }

    /// Class of an integral ideal.
    pub fn dlog_ideal(&self, k: &NumberField, a: &Ideal) -> Result<GroupElement> {
        let mut acc = self.group.identity();
        for (pr, e) in k.factor_ideal(a)? {
            let x = self.dlog_prime(k, &pr)?;
            acc = acc.add(&x.scale(&BigInt::from(e)));
        }
        self.group.normalize(&acc)
    }

    /// Class of a product ∏ P_i^{e_i} with signed exponents.
    pub fn dlog_factored(&self, k: &NumberField, fac: &[(PrimeIdeal, i64)]) -> Result<GroupElement> {
        let mut acc = self.group.identity();
        for (pr, e) in fac {
            let x = self.dlog_prime(k, pr)?;
            acc = acc.add(&x.scale(&BigInt::from(*e)));
        }
        self.group.normalize(&acc)
    }

    pub fn is_trivial_class(&self, x: &GroupElement) -> bool {
        self.group.is_identity(x).unwrap_or(false)
    }

    pub fn factor_base_norms(&self) -> Vec<u64> {
        self.factor_base.iter().map(|p| p.norm().to_u64().unwrap_or(0)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::poly::zpoly;

    #[test]
    fn certification_recovers_missed_relation() {
        // 2 = -N(6 + √38): the prime above 2 is principal, h = 1
        let k = NumberField::from_poly(zpoly(&[-38, 0, 1])).unwrap();
        let mut cg = k.class_group(0).unwrap();
        assert_eq!(cg.certify(&k, &k.unit_group().unwrap()).unwrap(), CertifyOutcome::Verified);
        assert!(cg.invariants().is_empty());
        let p2 = &k.factor_prime(2).unwrap()[0];
        assert!(cg.group.is_identity(&cg.dlog_prime(&k, p2).unwrap()).unwrap());
    }

    #[test]
    fn small_class_groups() {
        let k = NumberField::from_poly(zpoly(&[5, 0, 1])).unwrap();
        let cg = k.class_group(0).unwrap();
        assert_eq!(cg.invariants(), vec![2]);
        let k = NumberField::from_poly(zpoly(&[1, 0, 1])).unwrap();
        let cg = k.class_group(0).unwrap();
        assert_eq!(cg.certification, Certification::MinkowskiTrivial);
        assert_eq!(cg.order(), 1);
        let k = NumberField::from_poly(zpoly(&[21, 0, 1])).unwrap();
        assert_eq!(k.class_group(0).unwrap().invariants(), vec![2, 2]);
    }

    #[test]
    fn oracle_agrees() {
        for (f, inv) in [(vec![5, 0, 1], vec![2u64]), (vec![-10, 0, 1], vec![2]), (vec![1, 0, 1], vec![])] {
            let k = NumberField::from_poly(zpoly(&f)).unwrap();
            let u = k.unit_group().unwrap();
            let (g, _) = k.brute_force_class_group(&u).unwrap();
            assert_eq!(g.invariants_u64(), inv);
            assert_eq!(k.class_group(0).unwrap().invariants(), inv);
        }
    }

    #[test]
    fn conductor_63_cubic() {
        let mut k = NumberField::from_poly(zpoly(&[-35, -21, 0, 1])).unwrap();
        k.find_automorphisms();
        assert_eq!(k.disc(), &BigInt::from(3969));
        let cg = k.class_group(0).unwrap();
        assert_eq!(cg.order() % 3, 0);
    }
}
