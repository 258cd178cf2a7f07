use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use super::FieldData;
use crate::abelian::normal_form::IntMatrix;
use crate::abelian::AbelianGroup;
use crate::error::{Error, Result};
use crate::numberfield::embedding::Embedding;
use crate::numberfield::field::Elt;
use crate::numberfield::linalg::{qz, solve_left_rect};
use crate::numberfield::units::UnitGroup;
use crate::numberfield::{NumberField, PrimeIdeal};

/// A prime of K ramified in L.
#[derive(Clone, Debug)]
pub struct RelPrime {
    pub prime: PrimeIdeal,
    pub e: u32,
    pub f: u32,
    pub above: Vec<PrimeIdeal>,
}

/// L/K given by an embedding K → L.
#[derive(Clone, Debug)]
pub struct RelativeExtension {
    pub emb: Embedding,
    pub degree: usize,
    pub galois: bool,
    /// Automorphisms of L fixing K.
    pub rel_automorphisms: Vec<IntMatrix>,
    pub ramified: Vec<RelPrime>,
    /// Real places of K that become complex in L.
    pub infinite_ramification: usize,
}

impl RelativeExtension {
    pub fn new(k: &NumberField, l: &NumberField, emb: Embedding) -> Result<Self> {
        if emb.source_degree != k.degree() || emb.target_degree != l.degree() {
            return Err(Error::Dimension { expected: k.degree(), got: emb.source_degree });
        }
        let degree = emb.relative_degree();
        let rel_automorphisms: Vec<IntMatrix> =
            l.automorphisms().iter().filter(|m| emb.fixed_by(l, m)).cloned().collect();
        let galois = rel_automorphisms.len() == degree;
        let mut ramified = Vec::new();
        for p in l.ramified_primes()? {
            for pr in k.factor_prime(p)? {
                let above = emb.primes_above(k, l, &pr)?;
                let e = above.iter().map(|a| a.1).max().unwrap_or(1);
                if e > 1 {
                    let f = above[0].2;
                    ramified.push(RelPrime { prime: pr, e, f, above: above.into_iter().map(|a| a.0).collect() });
                }
            }
        }
        let infinite_ramification = count_complexified(k, l, &emb);
        Ok(Self { emb, degree, galois, rel_automorphisms, ramified, infinite_ramification })
    }

    pub fn over_q(l: &NumberField) -> Result<Self> {
        Self::new(&NumberField::rationals(), l, Embedding::from_rationals(l))
    }

    pub fn is_cyclic(&self, l: &NumberField) -> bool {
        self.galois && self.rel_automorphisms.iter().any(|m| l.automorphism_order(m) == self.degree)
    }

    /// N_{L/K}(a) for Galois L/K, as an element of K.
    pub fn element_norm(&self, k: &NumberField, l: &NumberField, a: &[BigInt]) -> Result<Elt> {
        if !self.galois {
            return Err(Error::Unsupported("element norm needs a Galois extension".into()));
        }
        let mut acc = l.one();
        for m in &self.rel_automorphisms {
            acc = l.mul(&acc, &l.apply_automorphism(m, a));
        }
        self.pull_back(k, &acc)
    }

    /// Preimage in K of an element of L lying in the image of K.
    pub fn pull_back(&self, k: &NumberField, a: &[BigInt]) -> Result<Elt> {
        let m: Vec<Vec<BigRational>> = self.emb.matrix.iter().map(|r| r.iter().map(qz).collect()).collect();
        let b: Vec<BigRational> = a.iter().map(qz).collect();
        let x = solve_left_rect(&m, &b).ok_or_else(|| Error::Inconsistent("element does not lie in the subfield".into()))?;
        let _ = k;
        x.into_iter()
            .map(|c| if c.is_integer() { Ok(c.to_integer()) } else { Err(Error::Inconsistent("non-integral preimage".into())) })
            .collect()
    }

    /// (O_K^× : N_{L/K} O_L^×).
    pub fn unit_norm_index(&self, k: &FieldData, l: &FieldData) -> Result<u64> {
        let ul = l.units()?;
        let mut gens: Vec<Elt> = vec![ul.torsion_generator.clone()];
        gens.extend(ul.fundamental_units.iter().cloned());
        if k.field.degree() == 1 {
            let neg = gens.iter().any(|u| l.field.norm(u).is_negative());
            let odd = self.degree % 2 == 1;
            return Ok(if neg || odd { 1 } else { 2 });
        }
        let uk = k.units()?;
        let r = uk.rank;
        let w = uk.torsion_order as i64;
        let mut rel: Vec<Vec<i64>> = vec![std::iter::once(w).chain(std::iter::repeat_n(0, r)).collect()];
        for u in &gens {
            let nu = self.element_norm(&k.field, &l.field, u)?;
            rel.push(unit_coordinates(&k.field, uk, &nu)?);
        }
        let g = AbelianGroup::from_i64(1 + r, &rel)?;
        g.order_u64()
    }
}

/// Exponents (t, c_1, ..., c_r) with u = ζ^t ∏ ε_i^{c_i}.
pub fn unit_coordinates(k: &NumberField, units: &UnitGroup, u: &[BigInt]) -> Result<Vec<i64>> {
    if !k.is_unit(u) {
        return Err(Error::InvalidInput("element is not a unit".into()));
    }
    let r = units.rank;
    let mut coords = vec![0i64; r + 1];
    let mut rest = u.to_vec();
    if r > 0 {
        let logs: Vec<Vec<f64>> = units.fundamental_units.iter().map(|e| k.unit_log(e)).collect();
        let target = k.unit_log(u);
        let c = solve_real(&logs, &target).ok_or_else(|| Error::Inconsistent("singular unit log matrix".into()))?;
        for (i, ci) in c.iter().enumerate() {
            let e = ci.round();
            if (ci - e).abs() > 1e-3 {
                return Err(Error::Inconsistent("unit is not in the span of the fundamental units".into()));
            }
            let e = e as i64;
            coords[i + 1] = e;
            let base = if e >= 0 { units.fundamental_units[i].clone() } else { k.unit_inverse(&units.fundamental_units[i]) };
            let pw = k.pow(&base, e.unsigned_abs());
            rest = k.mul(&rest, &k.unit_inverse(&pw));
        }
    }
    let mut z = k.one();
    for t in 0..units.torsion_order {
        if z == rest {
            coords[0] = t as i64;
            return Ok(coords);
        }
        z = k.mul(&z, &units.torsion_generator);
    }
    Err(Error::Inconsistent("unit quotient is not a root of unity".into()))
}

/// Solve x · rows = target for square real `rows`.
fn solve_real(rows: &[Vec<f64>], target: &[f64]) -> Option<Vec<f64>> {
    let n = rows.len();
    // transpose so that A x = target
    let mut a: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| rows[i][j]).chain([target[j]]).collect()).collect();
    for c in 0..n {
        let piv = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs()))?;
        if a[piv][c].abs() < 1e-12 {
            return None;
        }
        a.swap(c, piv);
        for rr in 0..n {
            if rr != c {
                let f = a[rr][c] / a[c][c];
                for cc in c..=n {
                    a[rr][cc] -= f * a[c][cc];
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

fn count_complexified(k: &NumberField, l: &NumberField, emb: &Embedding) -> usize {
    let (r1k, _) = k.signature();
    if r1k == 0 {
        return 0;
    }
    let (r1l, _) = l.signature();
    let ksig = k.embed(&k.theta());
    let lsig = l.embed(&emb.apply(&k.theta()));
    let mut hit = vec![false; r1k];
    for z in lsig.iter().take(r1l) {
        let nearest = (0..r1k).min_by(|&a, &b| (ksig[a] - z).norm().total_cmp(&(ksig[b] - z).norm())).unwrap();
        hit[nearest] = true;
    }
    hit.iter().filter(|h| !**h).count()
}
