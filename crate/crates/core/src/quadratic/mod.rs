//! Quadratic fields through binary quadratic forms: discriminants,
//! ramification, narrow and wide class groups, fundamental units and the
//! Pólya group generated by the ramified primes.

pub mod forms;
pub mod units;

use serde::{Deserialize, Serialize};

use crate::abelian::{AbelianGroup, GroupElement, Subgroup};
use crate::arith::{factor_u64, is_squarefree};
use crate::error::{Error, Result};

pub use forms::{prime_form, BinaryForm, FormClassGroup};
pub use units::{fundamental_unit, FundamentalUnitData};

/// Largest |D| accepted by the form-based engine.
pub const MAX_ABS_DISC: u64 = 10_000_000;

/// `n` divided by its largest square factor.
pub fn squarefree_kernel(n: i64) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidInput("squarefree kernel of 0".into()));
    }
    let core: i64 = factor_u64(n.unsigned_abs())
        .into_iter()
        .filter(|&(_, e)| e % 2 == 1)
        .map(|(p, _)| p as i64)
        .product();
    Ok(n.signum() * core)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticField {
    pub d: i64,
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d) {
            return Err(Error::InvalidInput(format!("d = {d} must be squarefree and not 0 or 1")));
        }
        let f = Self { d };
        if f.disc().unsigned_abs() > MAX_ABS_DISC {
            return Err(Error::Unsupported(format!("|D| = {} exceeds {MAX_ABS_DISC}", f.disc().abs())));
        }
        Ok(f)
    }

    pub fn disc(&self) -> i64 {
        if self.d.rem_euclid(4) == 1 {
            self.d
        } else {
            4 * self.d
        }
    }

    pub fn is_real(&self) -> bool {
        self.d > 0
    }

    pub fn ramified_primes(&self) -> Vec<u64> {
        factor_u64(self.disc().unsigned_abs()).into_iter().map(|(p, _)| p).collect()
    }

    /// Norm of the fundamental unit; +1 for imaginary fields (all unit norms are 1).
    pub fn unit_norm(&self) -> Result<i8> {
        if self.is_real() {
            Ok(fundamental_unit(self.d)?.norm)
        } else {
            Ok(1)
        }
    }
}

/// Wide class group `Cl(K)` as a quotient of the narrow form class group.
#[derive(Clone, Debug)]
pub struct WideClassGroup {
    pub field: QuadraticField,
    pub narrow: FormClassGroup,
    /// Narrow generators with the extra relation killing the class of a
    /// principal ideal of negative norm (real fields only).
    pub group: AbelianGroup,
    /// Class of `(-1, b0, c)` in the narrow group; `None` for imaginary fields.
    pub negative_principal: Option<GroupElement>,
}

impl WideClassGroup {
    /// Coordinates of the prime ideal above `p` matched with the smallest root
    /// `b` of `b^2 = D mod 4p`; `None` when `p` is inert.
    pub fn prime_class(&self, p: u64) -> Option<GroupElement> {
        prime_form(self.narrow.disc, p as i64).map(|f| self.narrow.dlog(&f))
    }

    pub fn form_class(&self, f: &BinaryForm) -> GroupElement {
        self.narrow.dlog(f)
    }

    pub fn narrow_order(&self) -> usize {
        self.narrow.class_number()
    }

    /// True when the narrow class of `(-1, b0, c)` is principal, i.e. N(eps) = -1.
    pub fn narrow_equals_wide(&self) -> bool {
        match &self.negative_principal {
            None => true,
            Some(x) => self.narrow.group.is_identity(x).unwrap(),
        }
    }
}

pub fn narrow_class_group(disc: i64) -> Result<FormClassGroup> {
    if disc.unsigned_abs() > MAX_ABS_DISC {
        return Err(Error::Unsupported(format!("|D| = {} exceeds {MAX_ABS_DISC}", disc.abs())));
    }
    FormClassGroup::new(disc)
}

pub fn wide_class_group(k: &QuadraticField) -> Result<WideClassGroup> {
    let narrow = narrow_class_group(k.disc())?;
    let mut rel = narrow.group.relations().clone();
    let negative_principal = if k.is_real() {
        let b0 = k.disc().rem_euclid(2);
        let f = BinaryForm::from_ab(-1, b0, k.disc());
        let x = narrow.dlog(&f);
        rel.push(x.coords.clone());
        Some(x)
    } else {
        None
    };
    let group = AbelianGroup::new(narrow.group.num_generators(), rel)?;
    Ok(WideClassGroup { field: *k, narrow, group, negative_principal })
}

/// Pólya group of a quadratic field with its generating ramified classes.
#[derive(Clone, Debug)]
pub struct QuadPolya {
    pub field: QuadraticField,
    pub class_group: WideClassGroup,
    pub subgroup: Subgroup,
    /// (p, class of the prime above p) for every ramified p.
    pub generators: Vec<(u64, GroupElement)>,
}

impl QuadPolya {
    pub fn order(&self) -> u64 {
        self.subgroup.order_u64()
    }

    pub fn presentation(&self) -> AbelianGroup {
        self.subgroup.presentation()
    }
}

pub fn polya_group_quad(k: &QuadraticField) -> Result<QuadPolya> {
    let cl = wide_class_group(k)?;
    let generators: Vec<(u64, GroupElement)> = k
        .ramified_primes()
        .into_iter()
        .map(|p| {
            let c = cl.prime_class(p).expect("ramified primes have a prime form");
            (p, c)
        })
        .collect();
    let elems: Vec<GroupElement> = generators.iter().map(|(_, c)| c.clone()).collect();
    let subgroup = cl.group.subgroup(&elems)?;
    Ok(QuadPolya { field: *k, class_group: cl, subgroup, generators })
}

/// Order predicted by the ambiguous-class count: `2^(s-2)` for real fields whose
/// units all have norm +1 (clamped at 1 when s = 1), `2^(s-1)` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertPrediction {
    pub order: u64,
    pub ramified_count: usize,
    pub unit_norm: i8,
    pub clamped: bool,
}

pub fn hilbert_predicted_order(k: &QuadraticField) -> Result<HilbertPrediction> {
    let s = k.ramified_primes().len();
    let unit_norm = k.unit_norm()?;
    let (order, clamped) = if k.is_real() && unit_norm == 1 {
        if s < 2 {
            (1, true)
        } else {
            (1u64 << (s - 2), false)
        }
    } else {
        (1u64 << (s - 1), false)
    };
    Ok(HilbertPrediction { order, ramified_count: s, unit_norm, clamped })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel() {
        assert_eq!(squarefree_kernel(12).unwrap(), 3);
        assert_eq!(squarefree_kernel(-20).unwrap(), -5);
        assert_eq!(squarefree_kernel(1).unwrap(), 1);
        assert!(squarefree_kernel(0).is_err());
    }

    #[test]
    fn ramification() {
        assert_eq!(QuadraticField::new(-5).unwrap().ramified_primes(), vec![2, 5]);
        assert_eq!(QuadraticField::new(-1).unwrap().ramified_primes(), vec![2]);
        assert_eq!(QuadraticField::new(-21).unwrap().ramified_primes(), vec![2, 3, 7]);
        assert!(QuadraticField::new(12).is_err());
    }

    #[test]
    fn wide_groups() {
        let inv = |d| wide_class_group(&QuadraticField::new(d).unwrap()).unwrap().group.invariants_u64();
        assert_eq!(inv(10), vec![2]);
        assert_eq!(inv(3), Vec::<u64>::new());
        assert_eq!(inv(-5), vec![2]);
    }

    #[test]
    fn polya_orders() {
        let ord = |d| polya_group_quad(&QuadraticField::new(d).unwrap()).unwrap().presentation().invariants_u64();
        assert_eq!(ord(-5), vec![2]);
        assert_eq!(ord(-1), Vec::<u64>::new());
        assert_eq!(ord(-21), vec![2, 2]);
    }

    #[test]
    fn hilbert_examples() {
        let h = |d| hilbert_predicted_order(&QuadraticField::new(d).unwrap()).unwrap().order;
        assert_eq!(h(-5), 2);
        assert_eq!(h(3), 1);
        assert_eq!(h(10), 2);
    }
}
