//! Finitely generated abelian groups given by generators and relations.
//!
//! A group is `Z^m / R` where the rows of `R` are relations over the `m`
//! generators. Elements are coordinate vectors over the generators; all
//! structural questions are answered in the Smith coordinates `x -> x * V`
//! where `U * R * V` is diagonal.

pub mod normal_form;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use normal_form::{hnf, snf, vec_mul, IntMatrix};

pub use normal_form::{hnf_mod, IncrementalHnf, Snf};

/// An element of an [`AbelianGroup`], as exponents over its generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    pub coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Self { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        Self { coords: coords.iter().map(|&c| BigInt::from(c)).collect() }
    }

    pub fn zero(n: usize) -> Self {
        Self { coords: vec![BigInt::zero(); n] }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = Self::zero(n);
        e.coords[i] = BigInt::one();
        e
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { coords: self.coords.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self { coords: self.coords.iter().map(|a| a * k).collect() }
    }
}

/// A finitely generated abelian group presentation, canonicalized by its Smith form.
#[derive(Clone, Debug)]
pub struct AbelianGroup {
    num_generators: usize,
    relations: IntMatrix,
    /// Smith diagonal padded to `num_generators` entries (0 = free coordinate).
    moduli: Vec<BigInt>,
    snf: Snf,
}

impl AbelianGroup {
    pub fn new(num_generators: usize, relations: IntMatrix) -> Result<Self> {
        for r in &relations {
            if r.len() != num_generators {
                return Err(Error::Dimension { expected: num_generators, got: r.len() });
            }
        }
        let s = snf(&relations, num_generators);
        let mut moduli = s.diag.clone();
        moduli.resize(num_generators, BigInt::zero());
        Ok(Self { num_generators, relations, moduli, snf: s })
    }

    pub fn from_i64(num_generators: usize, relations: &[Vec<i64>]) -> Result<Self> {
        Self::new(num_generators, normal_form::to_big_matrix(relations))
    }

    /// `Z/d_1 x ... x Z/d_k` given directly by its invariants.
    pub fn cyclic_product(invariants: &[u64]) -> Self {
        let n = invariants.len();
        let rel = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::from(invariants[i]) } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        Self::new(n, rel).expect("square relation matrix")
    }

    pub fn trivial() -> Self {
        Self::new(0, Vec::new()).unwrap()
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// Smith diagonal padded to one entry per generator (1 = trivial, 0 = free).
    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    /// Invariant factors with 1-entries dropped; `0` stands for a free `Z` factor.
    pub fn invariants(&self) -> Vec<BigInt> {
        self.moduli.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn invariants_u64(&self) -> Vec<u64> {
        self.invariants().iter().map(|d| d.to_u64().unwrap_or(u64::MAX)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.moduli.iter().all(|d| !d.is_zero())
    }

    pub fn order(&self) -> Option<BigInt> {
        if self.is_finite() {
            Some(self.moduli.iter().product())
        } else {
            None
        }
    }

    pub fn order_u64(&self) -> Result<u64> {
        self.order()
            .ok_or_else(|| Error::Unsupported("infinite group has no order".into()))?
            .to_u64()
            .ok_or_else(|| Error::Unsupported("group order exceeds u64".into()))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::zero(self.num_generators)
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        GroupElement::unit(self.num_generators, i)
    }

    fn check(&self, x: &GroupElement) -> Result<()> {
        if x.coords.len() != self.num_generators {
            return Err(Error::Dimension { expected: self.num_generators, got: x.coords.len() });
        }
        Ok(())
    }

    /// Smith coordinates of `x`, reduced modulo the invariant factors.
    pub fn smith_coords(&self, x: &GroupElement) -> Result<Vec<BigInt>> {
        self.check(x)?;
        let y = vec_mul(&x.coords, &self.snf.v, self.num_generators);
        Ok(y.into_iter()
            .zip(&self.moduli)
            .map(|(c, d)| if d.is_zero() { c } else { c.mod_floor(d) })
            .collect())
    }

    /// Canonical representative in generator coordinates.
    pub fn normalize(&self, x: &GroupElement) -> Result<GroupElement> {
        let y = self.smith_coords(x)?;
        Ok(GroupElement::new(vec_mul(&y, &self.snf.v_inv, self.num_generators)))
    }

    pub fn is_identity(&self, x: &GroupElement) -> Result<bool> {
        Ok(self.smith_coords(x)?.iter().all(|c| c.is_zero()))
    }

    pub fn elements_equal(&self, a: &GroupElement, b: &GroupElement) -> Result<bool> {
        self.is_identity(&a.add(&b.neg()))
    }

    /// Least n >= 1 with n*x = 0.
    pub fn element_order(&self, x: &GroupElement) -> Result<BigInt> {
        let y = self.smith_coords(x)?;
        let mut ord = BigInt::one();
        for (c, d) in y.iter().zip(&self.moduli) {
            if c.is_zero() {
                continue;
            }
            if d.is_zero() {
                return Err(Error::Unsupported("element of infinite order".into()));
            }
            ord = ord.lcm(&(d / c.gcd(d)));
        }
        Ok(ord)
    }

    fn require_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::Unsupported("operation requires a finite group".into()))
        }
    }

    /// The subgroup generated by `elems`.
    pub fn subgroup(&self, elems: &[GroupElement]) -> Result<Subgroup> {
        self.require_finite()?;
        let mut rows = Vec::with_capacity(elems.len() + self.num_generators);
        for e in elems {
            rows.push(self.smith_coords(e)?);
        }
        Ok(Subgroup::from_rows(self.moduli.clone(), rows))
    }

    pub fn whole(&self) -> Result<Subgroup> {
        let gens: Vec<_> = (0..self.num_generators).map(|i| self.generator(i)).collect();
        self.subgroup(&gens)
    }

    /// Elements killed by `n`.
    pub fn torsion_part(&self, n: i64) -> Result<Subgroup> {
        if n <= 0 {
            return Err(Error::InvalidInput(format!("torsion exponent must be positive, got {n}")));
        }
        self.require_finite()?;
        let n = BigInt::from(n);
        let m = self.num_generators;
        let rows = (0..m)
            .map(|i| {
                let d = &self.moduli[i];
                let mut v = vec![BigInt::zero(); m];
                v[i] = d / d.gcd(&n);
                v
            })
            .collect();
        Ok(Subgroup::from_rows(self.moduli.clone(), rows))
    }

    /// Converts Smith coordinates back to generator coordinates.
    pub fn from_smith(&self, y: &[BigInt]) -> GroupElement {
        GroupElement::new(vec_mul(y, &self.snf.v_inv, self.num_generators))
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_invariants(&self.invariants()))
    }
}

/// Renders invariants as `Z/2 x Z/4`; the trivial group renders as `1`.
pub fn format_invariants(inv: &[BigInt]) -> String {
    if inv.is_empty() {
        return "1".to_string();
    }
    inv.iter()
        .map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") })
        .collect::<Vec<_>>()
        .join(" x ")
}

/// A subgroup of a finite group, stored as the canonical HNF of its preimage
/// lattice in Smith coordinates (always containing the relation lattice).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    moduli: Vec<BigInt>,
    lattice: IntMatrix,
}

impl Subgroup {
    fn from_rows(moduli: Vec<BigInt>, mut rows: Vec<Vec<BigInt>>) -> Self {
        let m = moduli.len();
        for (i, d) in moduli.iter().enumerate() {
            let mut v = vec![BigInt::zero(); m];
            v[i] = d.clone();
            rows.push(v);
        }
        let lattice = hnf(&rows, m);
        Self { moduli, lattice }
    }

    pub fn lattice(&self) -> &IntMatrix {
        &self.lattice
    }

    pub fn order(&self) -> BigInt {
        let full: BigInt = self.moduli.iter().product();
        let det: BigInt = self.lattice.iter().enumerate().map(|(i, r)| r[i].clone()).product();
        full / det
    }

    pub fn order_u64(&self) -> u64 {
        self.order().to_u64().unwrap_or(u64::MAX)
    }

    pub fn is_trivial(&self) -> bool {
        self.order().is_one()
    }

    /// Invariant factors of the subgroup as an abstract group.
    pub fn invariants(&self) -> Vec<BigInt> {
        self.presentation().invariants()
    }

    /// Presentation with one generator per lattice basis row.
    pub fn presentation(&self) -> AbelianGroup {
        let m = self.moduli.len();
        // relations: coordinates of the rows d_i e_i in the lattice basis
        let rel: IntMatrix = (0..m)
            .map(|i| {
                let mut target = vec![BigInt::zero(); m];
                target[i] = self.moduli[i].clone();
                solve_upper(&self.lattice, &target)
            })
            .collect();
        AbelianGroup::new(m, rel).expect("square")
    }

    pub fn contains_smith(&self, y: &[BigInt]) -> bool {
        solve_upper_checked(&self.lattice, y).is_some()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.lattice.iter().all(|r| other.contains_smith(r))
    }

    pub fn sum(&self, other: &Subgroup) -> Subgroup {
        let rows: Vec<_> = self.lattice.iter().chain(other.lattice.iter()).cloned().collect();
        Subgroup::from_rows(self.moduli.clone(), rows)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let m = self.moduli.len();
        let mut rows = Vec::new();
        for r in &self.lattice {
            let mut v = r.clone();
            v.extend(r.iter().cloned());
            rows.push(v);
        }
        for r in &other.lattice {
            let mut v = r.clone();
            v.extend(std::iter::repeat_n(BigInt::zero(), m));
            rows.push(v);
        }
        let h = hnf(&rows, 2 * m);
        let inter: Vec<Vec<BigInt>> = h
            .into_iter()
            .filter(|r| r[..m].iter().all(|x| x.is_zero()))
            .map(|r| r[m..].to_vec())
            .collect();
        Subgroup::from_rows(self.moduli.clone(), inter)
    }
}

/// Solve `x * upper = target` exactly for an upper-triangular full-rank HNF.
fn solve_upper(upper: &IntMatrix, target: &[BigInt]) -> Vec<BigInt> {
    solve_upper_checked(upper, target).expect("target lies in lattice")
}

fn solve_upper_checked(upper: &IntMatrix, target: &[BigInt]) -> Option<Vec<BigInt>> {
    let m = target.len();
    let mut rest = target.to_vec();
    let mut x = vec![BigInt::zero(); upper.len()];
    for (i, row) in upper.iter().enumerate() {
        let piv_col = row.iter().position(|v| !v.is_zero())?;
        for c in 0..piv_col {
            if !rest[c].is_zero() {
                return None;
            }
        }
        let (q, r) = rest[piv_col].div_rem(&row[piv_col]);
        if !r.is_zero() {
            return None;
        }
        for c in piv_col..m {
            rest[c] -= &q * &row[c];
        }
        x[i] = q;
    }
    if rest.iter().any(|v| !v.is_zero()) {
        return None;
    }
    Some(x)
}

/// The subgroup generated by `elems`, as a presentation of its own.
pub fn subgroup_generated(g: &AbelianGroup, elems: &[GroupElement]) -> Result<AbelianGroup> {
    Ok(g.subgroup(elems)?.presentation())
}

/// Witness for an internal direct-sum test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectSumWitness {
    pub is_direct: bool,
    pub spans_group: bool,
    pub h1: Vec<BigInt>,
    pub h2: Vec<BigInt>,
    pub intersection: Vec<BigInt>,
    pub sum: Vec<BigInt>,
}

pub fn is_internal_direct_sum(g: &AbelianGroup, h1: &Subgroup, h2: &Subgroup) -> Result<DirectSumWitness> {
    let inter = h1.intersection(h2);
    let sum = h1.sum(h2);
    let is_direct = inter.is_trivial() && h1.order() * h2.order() == sum.order();
    let spans_group = sum == g.whole()?;
    Ok(DirectSumWitness {
        is_direct,
        spans_group,
        h1: h1.invariants(),
        h2: h2.invariants(),
        intersection: inter.invariants(),
        sum: sum.invariants(),
    })
}

/// External direct sum of two groups.
pub fn direct_sum(a: &AbelianGroup, b: &AbelianGroup) -> AbelianGroup {
    let m = a.num_generators + b.num_generators;
    let mut rel = Vec::new();
    for r in &a.relations {
        let mut v = r.clone();
        v.resize(m, BigInt::zero());
        rel.push(v);
    }
    for r in &b.relations {
        let mut v = vec![BigInt::zero(); a.num_generators];
        v.extend(r.iter().cloned());
        rel.push(v);
    }
    AbelianGroup::new(m, rel).expect("dimensions agree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(g: &AbelianGroup) -> Vec<u64> {
        g.invariants_u64()
    }

    #[test]
    fn invariants_drop_ones() {
        assert_eq!(inv(&AbelianGroup::from_i64(2, &[vec![2, 0], vec![0, 4]]).unwrap()), vec![2, 4]);
        assert_eq!(inv(&AbelianGroup::from_i64(2, &[vec![2, 0], vec![0, 3]]).unwrap()), vec![6]);
        assert_eq!(AbelianGroup::new(0, vec![]).unwrap().to_string(), "1");
    }

    #[test]
    fn free_group_from_empty_relations() {
        let g = AbelianGroup::new(2, vec![]).unwrap();
        assert!(!g.is_finite());
        assert_eq!(g.to_string(), "Z x Z");
    }

    #[test]
    fn subgroups_and_orders() {
        let v4 = AbelianGroup::cyclic_product(&[2, 2]);
        let h = subgroup_generated(&v4, &[GroupElement::from_i64(&[1, 0])]).unwrap();
        assert_eq!(inv(&h), vec![2]);

        let z6 = AbelianGroup::cyclic_product(&[6]);
        let h = subgroup_generated(&z6, &[GroupElement::from_i64(&[2])]).unwrap();
        assert_eq!(inv(&h), vec![3]);
        assert_eq!(z6.element_order(&z6.identity()).unwrap(), BigInt::from(1));
        assert_eq!(z6.element_order(&GroupElement::from_i64(&[1])).unwrap(), BigInt::from(6));
    }

    #[test]
    fn dimension_error() {
        let z6 = AbelianGroup::cyclic_product(&[6]);
        assert!(matches!(z6.subgroup(&[GroupElement::from_i64(&[1, 2])]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn direct_sums() {
        let g = AbelianGroup::cyclic_product(&[2, 3]);
        let h1 = g.subgroup(&[GroupElement::from_i64(&[1, 0])]).unwrap();
        let h2 = g.subgroup(&[GroupElement::from_i64(&[0, 1])]).unwrap();
        let w = is_internal_direct_sum(&g, &h1, &h2).unwrap();
        assert!(w.is_direct && w.spans_group);

        let z4 = AbelianGroup::cyclic_product(&[4]);
        let h = z4.subgroup(&[GroupElement::from_i64(&[2])]).unwrap();
        let w = is_internal_direct_sum(&z4, &h, &h).unwrap();
        assert!(!w.is_direct);
    }

    #[test]
    fn torsion() {
        let z6 = AbelianGroup::cyclic_product(&[6]);
        assert!(z6.torsion_part(1).unwrap().is_trivial());
        assert_eq!(z6.torsion_part(2).unwrap().invariants(), vec![BigInt::from(2)]);
        let g = AbelianGroup::cyclic_product(&[2, 4]);
        assert_eq!(g.torsion_part(2).unwrap().invariants(), vec![BigInt::from(2), BigInt::from(2)]);
        assert!(g.torsion_part(0).is_err());
    }

    #[test]
    fn distinct_isomorphic_subgroups_are_distinguished() {
        let v4 = AbelianGroup::cyclic_product(&[2, 2]);
        let a = v4.subgroup(&[GroupElement::from_i64(&[1, 0])]).unwrap();
        let b = v4.subgroup(&[GroupElement::from_i64(&[0, 1])]).unwrap();
        assert_eq!(a.invariants(), b.invariants());
        assert_ne!(a, b);
        assert!(a.intersection(&b).is_trivial());
    }
}
