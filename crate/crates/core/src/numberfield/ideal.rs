//! Ideals as Hermite normal forms over the integral basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::field::{Elt, NumberField};
use crate::abelian::normal_form::{hnf, hnf_mod, IntMatrix};
use crate::error::{Error, Result};

/// A fractional ideal `hnf / denom` (rows = Z-basis over the integral basis).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ideal {
    pub hnf: IntMatrix,
    pub denom: BigInt,
}

impl Ideal {
    pub fn is_integral(&self) -> bool {
        self.denom.is_one()
    }

    /// Norm of an integral ideal (product of the HNF diagonal).
    pub fn norm_int(&self) -> BigInt {
        self.hnf.iter().enumerate().map(|(i, r)| r[i].clone()).product()
    }

    pub fn norm(&self) -> BigRational {
        let n = self.hnf.len() as u32;
        BigRational::new(self.norm_int(), num_traits::pow(self.denom.clone(), n as usize))
    }

    /// Whether the integer vector lies in the lattice of an integral ideal.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut r = v.to_vec();
        for (i, row) in self.hnf.iter().enumerate() {
            if r[i].is_zero() {
                continue;
            }
            let (q, rem) = r[i].div_rem(&row[i]);
            if !rem.is_zero() {
                return false;
            }
            for (x, y) in r.iter_mut().zip(row.iter()) {
                *x -= &q * y;
            }
        }
        r.iter().all(|x| x.is_zero())
    }

    /// Rows of the Z-basis as elements.
    pub fn basis(&self) -> &IntMatrix {
        &self.hnf
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.denom.is_one() && self.norm_int().is_one()
    }

    fn normalize(hnf_rows: IntMatrix, denom: BigInt) -> Self {
        let mut g = denom.clone();
        for r in &hnf_rows {
            for x in r {
                g = g.gcd(x);
            }
        }
        if g.is_one() || g.is_zero() {
            return Self { hnf: hnf_rows, denom };
        }
        let n = hnf_rows.len();
        let rows: IntMatrix = hnf_rows.iter().map(|r| r.iter().map(|x| x / &g).collect()).collect();
        Self { hnf: hnf(&rows, n), denom: denom / g }
    }
}

impl NumberField {
    pub fn unit_ideal(&self) -> Ideal {
        Ideal { hnf: self.identity_matrix(), denom: BigInt::one() }
    }

    /// `m O_K` for an integer m ≠ 0.
    pub fn int_ideal(&self, m: &BigInt) -> Ideal {
        let rows: IntMatrix = (0..self.degree()).map(|i| self.scale(&self.basis_element(i), &m.abs())).collect();
        Ideal { hnf: rows, denom: BigInt::one() }
    }

    pub fn principal_ideal(&self, a: &[BigInt]) -> Result<Ideal> {
        let nm = self.norm(a).abs();
        if nm.is_zero() {
            return Err(Error::InvalidInput("zero element generates no fractional ideal".into()));
        }
        Ok(Ideal { hnf: hnf_mod(&self.mult_matrix(a), self.degree(), &nm), denom: BigInt::one() })
    }

    /// Ideal generated by integral elements, given a nonzero integer `m` known to lie in it.
    pub fn ideal_from_gens(&self, gens: &[Elt], m: &BigInt) -> Ideal {
        let n = self.degree();
        let mut rows = Vec::with_capacity(gens.len() * n);
        for g in gens {
            rows.extend(self.mult_matrix(g));
        }
        Ideal { hnf: hnf_mod(&rows, n, &m.abs()), denom: BigInt::one() }
    }

    /// Ideal generated by integral elements (must be nonzero ideal).
    pub fn ideal_from_gens_free(&self, gens: &[Elt]) -> Result<Ideal> {
        let n = self.degree();
        let mut rows = Vec::new();
        for g in gens {
            rows.extend(self.mult_matrix(g));
        }
        let h = hnf(&rows, n);
        if h.len() != n {
            return Err(Error::InvalidInput("generators span the zero ideal".into()));
        }
        Ok(Ideal { hnf: h, denom: BigInt::one() })
    }

    pub fn ideal_mul(&self, a: &Ideal, b: &Ideal) -> Ideal {
        let n = self.degree();
        let m = a.norm_int() * b.norm_int();
        let mut rows = Vec::with_capacity(n * n);
        for x in &a.hnf {
            for y in &b.hnf {
                rows.push(self.mul(x, y));
            }
        }
        Ideal::normalize(hnf_mod(&rows, n, &m), &a.denom * &b.denom)
    }

    pub fn ideal_pow(&self, a: &Ideal, mut e: u64) -> Ideal {
        let mut base = a.clone();
        let mut acc = self.unit_ideal();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.ideal_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.ideal_mul(&base, &base);
            }
        }
        acc
    }

    pub fn ideal_add(&self, a: &Ideal, b: &Ideal) -> Ideal {
        assert!(a.is_integral() && b.is_integral(), "sum of fractional ideals");
        let n = self.degree();
        let m = a.norm_int().gcd(&b.norm_int());
        let rows: IntMatrix = a.hnf.iter().chain(b.hnf.iter()).cloned().collect();
        Ideal { hnf: hnf_mod(&rows, n, &m), denom: BigInt::one() }
    }

    pub fn ideal_norm(&self, a: &Ideal) -> BigRational {
        a.norm()
    }

    pub fn ideal_eq(&self, a: &Ideal, b: &Ideal) -> bool {
        a == b
    }

    /// `a | b` for integral ideals, i.e. `b ⊆ a`.
    pub fn ideal_divides(&self, a: &Ideal, b: &Ideal) -> bool {
        b.hnf.iter().all(|r| a.contains(r))
    }

    /// Exact quotient `b / a` for integral ideals with `a | b`, computed as the ideal quotient
    /// `{x ∈ O : x a ⊆ b}`.
    pub fn ideal_div(&self, b: &Ideal, a: &Ideal) -> Result<Ideal> {
        if !self.ideal_divides(a, b) {
            return Err(Error::InvalidInput("ideal does not divide".into()));
        }
        // {x ∈ O : x·a ⊆ b} contains N(b); solve over Z/N(b)
        let n = self.degree();
        let m = b.norm_int();
        let mut gens: Vec<Vec<BigInt>> = Vec::new();
        let bq: Vec<Vec<BigRational>> = b.hnf.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        let big_cols = n * n;
        // b-coordinates of x·α_k have denominators dividing m; x qualifies iff m times them
        // vanish modulo m.
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + big_cols);
        for i in 0..n {
            let e = self.basis_element(i);
            let mut row = e.clone();
            for alpha in &a.hnf {
                let prod: Vec<BigRational> = self.mul(&e, alpha).iter().map(|x| BigRational::from_integer(x.clone())).collect();
                let coords = super::linalg::solve_left(&bq, &prod).expect("ideal lattice is nonsingular");
                for c in coords {
                    row.push((c * BigRational::from_integer(m.clone())).to_integer().mod_floor(&m));
                }
            }
            rows.push(row);
        }
        for j in 0..big_cols {
            let mut row = vec![BigInt::zero(); n + big_cols];
            row[n + j] = m.clone();
            rows.push(row);
        }
        // x in L iff the tail vanishes: HNF with tail columns first
        let reordered: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r[n..].iter().chain(r[..n].iter()).cloned().collect()).collect();
        let h = hnf(&reordered, n + big_cols);
        for r in &h {
            if r[..big_cols].iter().all(|x| x.is_zero()) {
                gens.push(r[big_cols..].to_vec());
            }
        }
        let q = self.ideal_from_gens(&gens, &m);
        Ok(q)
    }

    /// Image of an ideal under an automorphism matrix.
    pub fn ideal_apply(&self, m: &IntMatrix, a: &Ideal) -> Ideal {
        let n = self.degree();
        let rows: IntMatrix = a.hnf.iter().map(|r| self.apply_automorphism(m, r)).collect();
        Ideal { hnf: hnf(&rows, n), denom: a.denom.clone() }
    }

    /// Whether an integral element lies in an integral ideal.
    pub fn ideal_contains(&self, a: &Ideal, x: &[BigInt]) -> bool {
        a.contains(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::poly::zpoly;

    #[test]
    fn gaussian_ramified_prime() {
        let k = NumberField::from_poly(zpoly(&[1, 0, 1])).unwrap();
        let one_plus_i = k.add(&k.one(), &k.theta());
        let p = k.principal_ideal(&one_plus_i).unwrap();
        assert_eq!(p.norm_int(), BigInt::from(2));
        assert_eq!(k.ideal_mul(&p, &p), k.int_ideal(&BigInt::from(2)));
        assert_eq!(k.ideal_mul(&p, &k.unit_ideal()), p);
        assert!(k.ideal_divides(&p, &k.int_ideal(&BigInt::from(2))));
        let q = k.ideal_div(&k.int_ideal(&BigInt::from(2)), &p).unwrap();
        assert_eq!(q, p);
    }

    #[test]
    fn ideal_of_sqrt_minus_five() {
        let k = NumberField::from_poly(zpoly(&[5, 0, 1])).unwrap();
        let a = k.ideal_from_gens(&[k.from_int(&BigInt::from(2)), k.add(&k.one(), &k.theta())], &BigInt::from(2));
        assert_eq!(a.norm_int(), BigInt::from(2));
        assert_eq!(k.ideal_mul(&a, &a), k.int_ideal(&BigInt::from(2)));
    }
}
