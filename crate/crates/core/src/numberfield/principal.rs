//! Principal ideal testing by enumeration in the ideal lattice.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::field::{Elt, NumberField};
use super::ideal::Ideal;
use super::lattice::{fincke_pohst, gram_of, Enumeration};
use super::units::{combine, UnitGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Principality {
    Principal(Elt),
    NotPrincipal,
    Unknown(String),
}

impl Principality {
    pub fn is_principal(&self) -> Option<bool> {
        match self {
            Principality::Principal(_) => Some(true),
            Principality::NotPrincipal => Some(false),
            Principality::Unknown(_) => None,
        }
    }

    pub fn generator(&self) -> Option<&Elt> {
        match self {
            Principality::Principal(g) => Some(g),
            _ => None,
        }
    }
}

pub const DEFAULT_PRINCIPAL_NODES: usize = 2_000_000;

impl NumberField {
    /// T2 radius that must contain a generator of I if I is principal: after multiplying a
    /// generator by units its log vector lies within half a fundamental domain of the diagonal.
    pub fn generator_search_radius(&self, norm: f64, units: &UnitGroup) -> f64 {
        let n = self.degree() as f64;
        let places = self.num_places();
        let logs: Vec<Vec<f64>> = units.fundamental_units.iter().map(|u| self.log_embedding(u)).collect();
        let base = norm.powf(2.0 / n);
        let total: f64 = (0..places)
            .map(|i| {
                let c: f64 = 0.5 * logs.iter().map(|l| l[i].abs()).sum::<f64>();
                self.place_weight(i) * base * (2.0 * c).exp()
            })
            .sum();
        total * (1.0 + 1e-7) + 1e-6
    }

    /// Decide whether an integral ideal is principal. With `units = None` only a fast search
    /// is done, so a negative answer is reported as unknown unless the unit rank is 0.
    pub fn is_principal(&self, a: &Ideal, units: Option<&UnitGroup>) -> Principality {
        self.is_principal_with(a, units, DEFAULT_PRINCIPAL_NODES)
    }

    pub fn is_principal_with(&self, a: &Ideal, units: Option<&UnitGroup>, max_nodes: usize) -> Principality {
        if !a.is_integral() {
            return Principality::Unknown("fractional ideal".into());
        }
        let nm = a.norm_int();
        if a.is_unit_ideal() {
            return Principality::Principal(self.one());
        }
        let reduced = self.lll_reduce(&a.hnf);
        let check = |v: &Elt| -> bool { self.norm(v).abs() == nm };
        for v in &reduced {
            if check(v) {
                return Principality::Principal(v.clone());
            }
        }
        let g = gram_of(&reduced, self.gram());
        let n = self.degree();
        let nm_f = nm.to_f64().unwrap_or(f64::INFINITY);
        let floor_t2 = n as f64 * nm_f.powf(2.0 / n as f64) * (1.0 - 1e-9);
        let owned_units;
        let units = match units {
            Some(u) => Some(u),
            None if self.unit_rank() == 0 => {
                owned_units = self.unit_group().ok();
                owned_units.as_ref()
            }
            None => None,
        };
        let radius = match units {
            Some(u) => self.generator_search_radius(nm_f, u),
            None => floor_t2 * 4.0,
        };
        let mut found = None;
        let status = fincke_pohst(&g, radius, max_nodes, &mut |x, t2| {
            if t2 < floor_t2 {
                return true;
            }
            let v = combine(&reduced, x);
            if check(&v) {
                found = Some(v);
                return false;
            }
            true
        });
        match (found, status, units) {
            (Some(v), _, _) => Principality::Principal(v),
            (None, Enumeration::Complete, Some(_)) => Principality::NotPrincipal,
            (None, Enumeration::Complete, None) => Principality::Unknown("no unit data for an exhaustive bound".into()),
            (None, _, _) => Principality::Unknown(format!("enumeration budget of {max_nodes} nodes exhausted")),
        }
    }
}

/// Whether `g` generates `a` exactly.
pub fn verify_generator(k: &NumberField, a: &Ideal, g: &[BigInt]) -> bool {
    a.contains(g) && k.norm(g).abs() == a.norm_int()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::poly::zpoly;

    #[test]
    fn gaussian_and_minus_five() {
        let k = NumberField::from_poly(zpoly(&[1, 0, 1])).unwrap();
        let pr = &k.factor_prime(2).unwrap()[0];
        let g = k.is_principal(&pr.ideal, None);
        let gen = g.generator().unwrap();
        assert_eq!(k.principal_ideal(gen).unwrap(), pr.ideal);

        let k = NumberField::from_poly(zpoly(&[5, 0, 1])).unwrap();
        let pr = &k.factor_prime(2).unwrap()[0];
        assert_eq!(k.is_principal(&pr.ideal, None), Principality::NotPrincipal);
        let sq = k.ideal_mul(&pr.ideal, &pr.ideal);
        assert!(k.is_principal(&sq, None).is_principal().unwrap());
    }

    #[test]
    fn real_quadratic_needs_units() {
        // Q(√10): the prime above 2 is not principal (x² − 10y² = ±2 has no solution)
        let k = NumberField::from_poly(zpoly(&[-10, 0, 1])).unwrap();
        let u = k.unit_group().unwrap();
        let pr = &k.factor_prime(2).unwrap()[0];
        assert_eq!(k.is_principal(&pr.ideal, Some(&u)), Principality::NotPrincipal);
        assert!(matches!(k.is_principal(&pr.ideal, None), Principality::Unknown(_)));
        let three = &k.factor_prime(3).unwrap()[0];
        let prod = k.ideal_mul(&pr.ideal, &three.ideal);
        // 2·3 = 6 = N(4 + √10): principal
        assert!(k.is_principal(&prod, Some(&u)).is_principal().unwrap());
    }
}
