//! Π_q ideals, Pólya groups, relative Pólya groups, the maps ε and ν, and closed-form
//! order predictions.

mod relative;

pub use relative::{RelPrime, RelativeExtension};

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::abelian::{AbelianGroup, GroupElement, Subgroup};
use crate::arith::{prime_power_base, primes_up_to};
use crate::error::{Error, Result};
use crate::numberfield::classgroup::{ClassGroup, ClassGroupBudget};
use crate::numberfield::embedding::Embedding;
use crate::numberfield::units::UnitGroup;
use crate::numberfield::{Ideal, NumberField, PrimeIdeal};

/// A field together with its class group and (lazily) its unit group.
#[derive(Debug)]
pub struct FieldData {
    pub field: NumberField,
    pub class_group: ClassGroup,
    units: OnceLock<std::result::Result<UnitGroup, Error>>,
}

impl FieldData {
    /// Computes the class group and, when the unit group is available, certifies it.
    pub fn new(field: NumberField, seed: u64, budget: &ClassGroupBudget) -> Result<Self> {
        let mut class_group = field.class_group_with(seed, budget)?;
        let units = OnceLock::new();
        if !class_group.is_verified() {
            let u = field.unit_group();
            if let Ok(u) = &u {
                class_group.certify(&field, u)?;
            }
            let _ = units.set(u);
        }
        Ok(Self { field, class_group, units })
    }

    pub fn is_certified(&self) -> bool {
        self.class_group.is_verified()
    }

    pub fn units(&self) -> Result<&UnitGroup> {
        self.units.get_or_init(|| self.field.unit_group()).as_ref().map_err(|e| e.clone())
    }

    pub fn class_number(&self) -> u64 {
        self.class_group.order()
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.class_group.group
    }

    pub fn dlog(&self, a: &Ideal) -> Result<GroupElement> {
        self.class_group.dlog_ideal(&self.field, a)
    }

    pub fn dlog_prime(&self, p: &PrimeIdeal) -> Result<GroupElement> {
        self.class_group.dlog_prime(&self.field, p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiIdeal {
    pub q: u64,
    pub ideal: Ideal,
    pub constituents: Vec<PrimeIdeal>,
}

impl PiIdeal {
    pub fn is_unit_ideal(&self) -> bool {
        self.constituents.is_empty()
    }
}

/// Π_q(K): product of the primes of norm exactly q.
pub fn pi_q(k: &NumberField, q: u64) -> Result<PiIdeal> {
    let (p, f) = prime_power_base(q).ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
    let constituents: Vec<PrimeIdeal> = k.factor_prime(p)?.into_iter().filter(|pr| pr.f == f).collect();
    let ideal = constituents.iter().fold(k.unit_ideal(), |acc, pr| k.ideal_mul(&acc, &pr.ideal));
    Ok(PiIdeal { q, ideal, constituents })
}

/// Π_{p*}(K) for Galois K: product of all primes above p.
pub fn pi_star(k: &NumberField, p: u64) -> Result<PiIdeal> {
    require_galois(k)?;
    let primes = k.factor_prime(p)?;
    let f = primes[0].f;
    let q = p.checked_pow(f).ok_or_else(|| Error::Resource("residue field too large".into()))?;
    let ideal = primes.iter().fold(k.unit_ideal(), |acc, pr| k.ideal_mul(&acc, &pr.ideal));
    Ok(PiIdeal { q, ideal, constituents: primes })
}

pub fn require_galois(k: &NumberField) -> Result<()> {
    if k.is_galois() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("field {} is not Galois over Q", label(k))))
    }
}

pub fn label(k: &NumberField) -> String {
    if k.descriptor().is_empty() {
        format!("Q[x]/({})", crate::numberfield::poly::render(k.poly()))
    } else {
        k.descriptor().to_string()
    }
}

/// Class of a Π ideal, from the classes of its constituent primes.
pub fn pi_class(data: &FieldData, pi: &PiIdeal) -> Result<GroupElement> {
    let mut acc = data.group().identity();
    for pr in &pi.constituents {
        acc = acc.add(&data.dlog_prime(pr)?);
    }
    data.group().normalize(&acc)
}

#[derive(Clone, Debug)]
pub struct PolyaGroupResult {
    pub group: AbelianGroup,
    pub subgroup: Subgroup,
    /// (p, class of Π_{p*}) for each ramified p.
    pub generators: Vec<(u64, GroupElement)>,
    pub ramified_only: bool,
    /// Unramified p ≤ bound whose Π class was tested, and whether adding them left the
    /// subgroup unchanged.
    pub unramified_checked: Vec<u64>,
    pub unramified_consistent: bool,
}

impl PolyaGroupResult {
    pub fn order(&self) -> u64 {
        self.subgroup.order_u64()
    }

    pub fn invariants(&self) -> Vec<u64> {
        self.group.invariants_u64()
    }
}

/// Po(K) for Galois K, generated by the ramified Π_{p*}; the unramified ones up to
/// `unramified_bound` are added as a check.
pub fn polya_group(data: &FieldData, unramified_bound: u64) -> Result<PolyaGroupResult> {
    let k = &data.field;
    require_galois(k)?;
    let mut generators = Vec::new();
    for p in k.ramified_primes()? {
        let pi = pi_star(k, p)?;
        generators.push((p, pi_class(data, &pi)?));
    }
    let elems: Vec<GroupElement> = generators.iter().map(|(_, g)| g.clone()).collect();
    let subgroup = data.group().subgroup(&elems)?;
    let ramified = k.ramified_primes()?;
    let mut checked = Vec::new();
    let mut all = elems.clone();
    for p in primes_up_to(unramified_bound) {
        if ramified.contains(&p) {
            continue;
        }
        let pi = pi_star(k, p)?;
        all.push(pi_class(data, &pi)?);
        checked.push(p);
    }
    let with_unramified = data.group().subgroup(&all)?;
    Ok(PolyaGroupResult {
        group: subgroup.presentation(),
        unramified_consistent: with_unramified == subgroup,
        subgroup,
        generators,
        ramified_only: true,
        unramified_checked: checked,
    })
}

/// Order of H¹(G, O_L^×) for L cyclic over Q: (Z^× : N O_L^×) · m / e_∞.
pub fn h1_order_cyclic_over_q(data: &FieldData) -> Result<u64> {
    let k = &data.field;
    require_cyclic(k)?;
    let m = k.degree() as u64;
    let index = unit_norm_index_over_q(data)?;
    let e_inf = if k.signature().0 == 0 && m > 1 { 2 } else { 1 };
    Ok(index * m / e_inf)
}

/// The same order for Q(√d), from the norm of the continued-fraction unit.
pub fn h1_order_quadratic(d: i64) -> Result<u64> {
    let k = crate::quadratic::QuadraticField::new(d)?;
    let index = if k.unit_norm()? == -1 { 1 } else { 2 };
    let e_inf = if k.is_real() { 1 } else { 2 };
    Ok(index * 2 / e_inf)
}

pub fn require_cyclic(k: &NumberField) -> Result<()> {
    match k.galois_label() {
        Some(l) if l.starts_with('C') => Ok(()),
        _ => Err(Error::Unsupported(format!("{} is not cyclic over Q", label(k)))),
    }
}

/// (Z^× : N(O_L^×)): 1 if some unit has norm −1, else 2.
pub fn unit_norm_index_over_q(data: &FieldData) -> Result<u64> {
    let k = &data.field;
    if k.degree() % 2 == 1 {
        return Ok(1);
    }
    let u = data.units()?;
    Ok(if u.has_norm_minus_one(k) { 1 } else { 2 })
}

/// Closed-form |Po(L/K)| for cyclic L/K:
/// h_K/[L:K] · ∏ e_𝔭 · ∏_{∞} e / (O_K^× : N O_L^×).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Prediction {
    Value(u64),
    Unavailable(String),
}

pub fn predicted_order_cyclic(ext: &RelativeExtension, k: &FieldData, l: &FieldData) -> Result<Prediction> {
    if !ext.is_cyclic(&l.field) {
        return Err(Error::Unsupported("extension is not cyclic".into()));
    }
    let index = match ext.unit_norm_index(k, l) {
        Ok(i) => i,
        Err(Error::Resource(why)) | Err(Error::Unsupported(why)) => return Ok(Prediction::Unavailable(why)),
        Err(e) => return Err(e),
    };
    let e_fin: u64 = ext.ramified.iter().map(|r| r.e as u64).product();
    let e_inf: u64 = 1u64 << ext.infinite_ramification;
    let num = BigInt::from(k.class_number()) * e_fin * e_inf;
    let den = BigInt::from(ext.degree as u64 * index);
    let r = BigRational::new(num, den);
    if !r.is_integer() || r.is_zero() {
        return Err(Error::Inconsistent(format!("cyclic order formula gives non-integral {r}")));
    }
    Ok(Prediction::Value(r.to_integer().to_u64().unwrap()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCyclicPrediction {
    /// s counts ramified finite primes and ramified infinite places.
    pub s_with_infinite: u32,
    pub order_with_infinite: Option<u64>,
    /// s counts ramified finite primes only.
    pub s_finite: u32,
    pub order_finite_only: Option<u64>,
    pub unit_norm_index: u64,
}

/// h_K p^{s−1} / (O_K^× : N O_L^×) for [L:K] = p prime, under both counters for s.
pub fn predicted_order_prime_cyclic(ext: &RelativeExtension, k: &FieldData, l: &FieldData) -> Result<PrimeCyclicPrediction> {
    let p = ext.degree as u64;
    if !crate::arith::is_prime(p) {
        return Err(Error::InvalidInput(format!("degree {p} is not prime")));
    }
    let _ = l;
    let index = ext.unit_norm_index(k, l)?;
    let s_fin = ext.ramified.len() as u32;
    let s_inf = s_fin + ext.infinite_ramification as u32;
    let eval = |s: u32| -> Option<u64> {
        if s == 0 {
            return None;
        }
        let v = k.class_number() * p.pow(s - 1);
        v.is_multiple_of(index).then_some(v / index)
    };
    Ok(PrimeCyclicPrediction {
        s_with_infinite: s_inf,
        order_with_infinite: eval(s_inf),
        s_finite: s_fin,
        order_finite_only: eval(s_fin),
        unit_norm_index: index,
    })
}

/// ε_K^L as a matrix on the factor-base generators of Cl(K).
#[derive(Clone, Debug)]
pub struct ClassMap {
    pub images: Vec<GroupElement>,
}

impl ClassMap {
    pub fn apply(&self, target: &AbelianGroup, x: &GroupElement) -> Result<GroupElement> {
        let mut acc = target.identity();
        for (c, img) in x.coords.iter().zip(&self.images) {
            if !c.is_zero() {
                acc = acc.add(&img.scale(c));
            }
        }
        target.normalize(&acc)
    }

    pub fn image(&self, target: &AbelianGroup, source: &Subgroup, source_group: &AbelianGroup) -> Result<Subgroup> {
        let gens = subgroup_generators(source_group, source);
        let imgs: Result<Vec<GroupElement>> = gens.iter().map(|g| self.apply(target, g)).collect();
        target.subgroup(&imgs?)
    }

    /// Check that every relation of the source maps to the identity.
    fn check_well_defined(&self, source: &AbelianGroup, target: &AbelianGroup) -> Result<()> {
        for rel in source.relations() {
            let x = GroupElement::new(rel.clone());
            if !target.is_identity(&self.apply(target, &x)?)? {
                return Err(Error::Inconsistent("class map does not respect the relations of the source".into()));
            }
        }
        Ok(())
    }
}

/// Generators of a subgroup as elements of the ambient group.
pub fn subgroup_generators(g: &AbelianGroup, h: &Subgroup) -> Vec<GroupElement> {
    h.lattice().iter().map(|row| g.from_smith(row)).collect()
}

/// ε: Cl(K) → Cl(L) induced by extension of ideals.
pub fn eps_map(emb: &Embedding, k: &FieldData, l: &FieldData) -> Result<ClassMap> {
    let mut images = Vec::with_capacity(k.class_group.factor_base.len());
    for pr in &k.class_group.factor_base {
        let mut acc = l.group().identity();
        for (big, e, _) in emb.primes_above(&k.field, &l.field, pr)? {
            acc = acc.add(&l.dlog_prime(&big)?.scale(&BigInt::from(e)));
        }
        images.push(l.group().normalize(&acc)?);
    }
    let m = ClassMap { images };
    m.check_well_defined(k.group(), l.group())?;
    Ok(m)
}

/// ν: Cl(L) → Cl(K) induced by the relative norm.
pub fn nu_map(emb: &Embedding, k: &FieldData, l: &FieldData) -> Result<ClassMap> {
    let mut images = Vec::with_capacity(l.class_group.factor_base.len());
    for big in &l.class_group.factor_base {
        let small = emb.contract_prime(&k.field, big)?;
        let f = big.f / small.f;
        images.push(k.group().normalize(&k.dlog_prime(&small)?.scale(&BigInt::from(f)))?);
    }
    let m = ClassMap { images };
    m.check_well_defined(l.group(), k.group())?;
    Ok(m)
}

/// Po(L/K): generated by ε(Cl(K)) and the classes of Π_𝔭(L/K) for ramified 𝔭.
pub fn relative_polya_group(ext: &RelativeExtension, k: &FieldData, l: &FieldData) -> Result<PolyaGroupResult> {
    if !ext.galois {
        return Err(Error::Unsupported("relative Pólya group needs a Galois extension".into()));
    }
    let eps = eps_map(&ext.emb, k, l)?;
    let mut elems: Vec<GroupElement> = eps.images.clone();
    let mut generators = Vec::new();
    for rp in &ext.ramified {
        let mut acc = l.group().identity();
        for big in &rp.above {
            acc = acc.add(&l.dlog_prime(big)?);
        }
        let c = l.group().normalize(&acc)?;
        generators.push((rp.prime.p, c.clone()));
        elems.push(c);
    }
    let subgroup = l.group().subgroup(&elems)?;
    Ok(PolyaGroupResult {
        group: subgroup.presentation(),
        subgroup,
        generators,
        ramified_only: false,
        unramified_checked: Vec::new(),
        unramified_consistent: true,
    })
}

/// Π_𝔭(L/K) as an ideal of L.
pub fn relative_pi(ext: &RelativeExtension, l: &NumberField, p: &PrimeIdeal, k: &NumberField) -> Result<Ideal> {
    if !ext.galois {
        return Err(Error::Unsupported("relative Π needs a Galois extension".into()));
    }
    let above = ext.emb.primes_above(k, l, p)?;
    Ok(above.iter().fold(l.unit_ideal(), |acc, (big, _, _)| l.ideal_mul(&acc, &big.ideal)))
}

/// Po(L/K) = ε(Cl(K)) as subgroups of Cl(L).
pub fn is_galois_polya_extension(ext: &RelativeExtension, k: &FieldData, l: &FieldData) -> Result<bool> {
    let rel = relative_polya_group(ext, k, l)?;
    let eps = eps_map(&ext.emb, k, l)?;
    let img = l.group().subgroup(&eps.images)?;
    Ok(rel.subgroup == img)
}

/// ∏_p e_p over the ramified rational primes of a Galois field.
pub fn ramification_product(k: &NumberField) -> Result<u64> {
    let mut prod = 1u64;
    for p in k.ramified_primes()? {
        prod *= k.factor_prime(p)?[0].e as u64;
    }
    Ok(prod)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::families::{compositum, cyclic_cubic, quadratic_field, FieldDescriptor};
    use crate::numberfield::poly::zpoly;

    fn data(k: NumberField) -> FieldData {
        FieldData::new(k, 1, &ClassGroupBudget::default()).unwrap()
    }

    fn build(s: &str) -> FieldData {
        data(s.parse::<FieldDescriptor>().unwrap().build().unwrap())
    }

    #[test]
    fn pi_q_of_gaussian_two() {
        let k = quadratic_field(-1).unwrap();
        let pi = pi_q(&k, 2).unwrap();
        assert_eq!(pi.constituents.len(), 1);
        assert_eq!(pi.ideal.norm_int(), BigInt::from(2));
        assert!(pi_q(&k, 4).unwrap().is_unit_ideal());
        assert!(pi_q(&k, 6).is_err());
    }

    #[test]
    fn pi_star_power_is_p() {
        let k = cyclic_cubic(zpoly(&[-35, -21, 0, 1])).unwrap();
        for p in [3u64, 7] {
            let pi = pi_star(&k, p).unwrap();
            let e = pi.constituents[0].e;
            let pe = k.ideal_pow(&pi.ideal, e as u64);
            assert!(k.ideal_eq(&pe, &k.int_ideal(&BigInt::from(p))));
        }
    }

    #[test]
    fn polya_minus_five() {
        let d = build("quad:-5");
        let po = polya_group(&d, 30).unwrap();
        assert_eq!(po.order(), 2);
        assert!(po.unramified_consistent);
        assert_eq!(h1_order_cyclic_over_q(&d).unwrap(), 2);
        assert_eq!(h1_order_quadratic(-5).unwrap(), 2);
        assert_eq!(h1_order_quadratic(2).unwrap(), 2);
        assert_eq!(h1_order_quadratic(3).unwrap(), 4);
    }

    #[test]
    fn eps_then_nu_is_power() {
        let k = build("quad:-5");
        let c = compositum(&k.field, &quadratic_field(-1).unwrap()).unwrap();
        let l = data(c.field);
        let eps = eps_map(&c.emb1, &k, &l).unwrap();
        let nu = nu_map(&c.emb1, &k, &l).unwrap();
        for i in 0..k.group().num_generators() {
            let x = k.group().generator(i);
            let back = nu.apply(k.group(), &eps.apply(l.group(), &x).unwrap()).unwrap();
            assert!(k.group().elements_equal(&back, &x.scale(&BigInt::from(2))).unwrap());
        }
    }

    #[test]
    fn polya_conductor_63_cubic() {
        let d = build("ccubic:cond63");
        let po = polya_group(&d, 20).unwrap();
        assert_eq!(po.order(), 3);
        assert_eq!(h1_order_cyclic_over_q(&d).unwrap(), 3);
        assert_eq!(ramification_product(&d.field).unwrap(), 9);
    }

    #[test]
    fn non_galois_refused() {
        let k = NumberField::from_poly(zpoly(&[-2, 0, 0, 1])).unwrap();
        assert!(matches!(pi_star(&k, 3), Err(Error::Unsupported(_))));
        assert_eq!(pi_q(&k, 3).unwrap().constituents.len(), 1);
    }

    #[test]
    fn relative_over_real_quadratic() {
        let k = data(quadratic_field(5).unwrap());
        let c = compositum(&quadratic_field(5).unwrap(), &quadratic_field(-1).unwrap()).unwrap();
        let ext = RelativeExtension::new(&k.field, &c.field, c.emb1.clone()).unwrap();
        assert!(ext.galois && ext.is_cyclic(&c.field));
        assert_eq!(ext.infinite_ramification, 2);
        let l = data(c.field);
        let rel = relative_polya_group(&ext, &k, &l).unwrap();
        assert_eq!(rel.order(), 1);
        let pred = predicted_order_cyclic(&ext, &k, &l).unwrap();
        assert_eq!(pred, Prediction::Value(1));
        let eps = eps_map(&ext.emb, &k, &l).unwrap();
        let nu = nu_map(&ext.emb, &k, &l).unwrap();
        assert_eq!(eps.images.len(), k.class_group.factor_base.len());
        assert_eq!(nu.images.len(), l.class_group.factor_base.len());
    }

    #[test]
    fn sextic_polya_orders() {
        for (desc, po_order) in [("ccubic:cond9", 1u64), ("ccubic:cond63", 3)] {
            let k2 = desc.parse::<FieldDescriptor>().unwrap().build().unwrap();
            let d = data(compositum(&quadratic_field(-1).unwrap(), &k2).unwrap().field);
            let po = polya_group(&d, 0).unwrap();
            assert_eq!(po.order(), po_order, "{desc}");
            let h1 = h1_order_cyclic_over_q(&d).unwrap();
            assert_eq!(h1 * po.order(), ramification_product(&d.field).unwrap(), "{desc}");
        }
    }
}
