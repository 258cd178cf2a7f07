//! Embeddings K → L: extension of ideals, contraction of primes, relative norms.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::{Elt, NumberField};
use super::ideal::Ideal;
use super::prime::PrimeIdeal;
use crate::abelian::normal_form::{vec_mul, IntMatrix};
use crate::error::{Error, Result};

/// A field homomorphism given by the images of K's integral basis in L.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub matrix: IntMatrix,
    pub source_degree: usize,
    pub target_degree: usize,
}

impl Embedding {
    /// Build from the image of K's generator θ (in L coordinates); verified to be a ring
    /// homomorphism on the integral basis.
    pub fn from_theta_image(k: &NumberField, l: &NumberField, img: &[BigInt]) -> Result<Self> {
        if !l.is_zero(&l.eval_poly(k.poly(), img)) {
            return Err(Error::InvalidInput("image of the generator is not a root of its polynomial".into()));
        }
        if !l.degree().is_multiple_of(k.degree()) {
            return Err(Error::InvalidInput("degree of K does not divide degree of L".into()));
        }
        let n = k.degree();
        let mut powers = vec![l.one()];
        for _ in 1..n {
            let next = l.mul(powers.last().unwrap(), img);
            powers.push(next);
        }
        let mut rows = Vec::with_capacity(n);
        for row in k.basis() {
            let d = super::linalg::common_denominator(row);
            let mut acc = l.zero();
            for (c, pw) in row.iter().zip(&powers) {
                let ci = (c * super::linalg::qz(&d)).to_integer();
                acc = l.add(&acc, &l.scale(pw, &ci));
            }
            let mut out = Vec::with_capacity(l.degree());
            for x in acc {
                if !(&x % &d).is_zero() {
                    return Err(Error::Inconsistent("embedding does not map O_K into O_L".into()));
                }
                out.push(x / &d);
            }
            rows.push(out);
        }
        let e = Self { matrix: rows, source_degree: n, target_degree: l.degree() };
        // ring homomorphism check on the basis
        for i in 0..n {
            for j in 0..n {
                let lhs = l.mul(&e.matrix[i], &e.matrix[j]);
                let rhs = e.apply(&k.table()[i][j]);
                if lhs != rhs {
                    return Err(Error::Inconsistent("embedding is not multiplicative".into()));
                }
            }
        }
        Ok(e)
    }

    /// Q → L.
    pub fn from_rationals(l: &NumberField) -> Self {
        Self { matrix: vec![l.one()], source_degree: 1, target_degree: l.degree() }
    }

    pub fn relative_degree(&self) -> usize {
        self.target_degree / self.source_degree
    }

    pub fn apply(&self, a: &[BigInt]) -> Elt {
        vec_mul(a, &self.matrix, self.target_degree)
    }

    /// I O_L.
    pub fn extend_ideal(&self, l: &NumberField, a: &Ideal) -> Ideal {
        let gens: Vec<Elt> = a.hnf.iter().map(|r| self.apply(r)).collect();
        let m = a.norm_int();
        let mut id = l.ideal_from_gens(&gens, &m);
        id.denom = a.denom.clone();
        id
    }

    /// The prime of K below a prime P of L.
    pub fn contract_prime(&self, k: &NumberField, big: &PrimeIdeal) -> Result<PrimeIdeal> {
        for pr in k.factor_prime(big.p)? {
            if pr.ideal.hnf.iter().all(|r| big.ideal.contains(&self.apply(r))) {
                return Ok(pr);
            }
        }
        Err(Error::Inconsistent("no prime of K lies below the given prime of L".into()))
    }

    /// Primes of L above 𝔭 with their ramification and residue degrees relative to K.
    pub fn primes_above(&self, k: &NumberField, l: &NumberField, pr: &PrimeIdeal) -> Result<Vec<(PrimeIdeal, u32, u32)>> {
        let mut out = Vec::new();
        for big in l.factor_prime(pr.p)? {
            if pr.ideal.hnf.iter().all(|r| big.ideal.contains(&self.apply(r))) {
                let e = big.e / pr.e;
                let f = big.f / pr.f;
                out.push((big, e, f));
            }
        }
        let _ = k;
        let total: u32 = out.iter().map(|(_, e, f)| e * f).sum();
        if total as usize != self.relative_degree() {
            return Err(Error::Inconsistent(format!("relative e*f sum {total} differs from the degree")));
        }
        Ok(out)
    }

    /// N_{L/K}(J) for an integral ideal J of L.
    pub fn relative_norm(&self, k: &NumberField, l: &NumberField, j: &Ideal) -> Result<Ideal> {
        let mut acc = k.unit_ideal();
        for (big, v) in l.factor_ideal(j)? {
            let small = self.contract_prime(k, &big)?;
            let f = big.f / small.f;
            acc = k.ideal_mul(&acc, &k.ideal_pow(&small.ideal, (f * v) as u64));
        }
        Ok(acc)
    }

    /// Whether an automorphism matrix of L fixes the image of K.
    pub fn fixed_by(&self, l: &NumberField, m: &IntMatrix) -> bool {
        self.matrix.iter().all(|r| l.apply_automorphism(m, r) == *r)
    }
}

impl NumberField {
    /// The field Q, as a degree-one field.
    pub fn rationals() -> Self {
        let mut q = NumberField::with_basis(vec![BigInt::zero(), BigInt::one()], vec![vec![super::linalg::q(1)]])
            .expect("Q is a field");
        q.set_descriptor("poly:0,1");
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::poly::zpoly;

    #[test]
    fn rationals_into_gaussian() {
        let q = NumberField::rationals();
        assert_eq!(q.degree(), 1);
        assert_eq!(q.class_group(0).unwrap().order(), 1);
        let l = NumberField::from_poly(zpoly(&[1, 0, 1])).unwrap();
        let e = Embedding::from_rationals(&l);
        let two = q.factor_prime(2).unwrap().remove(0);
        let ext = e.extend_ideal(&l, &two.ideal);
        assert_eq!(ext, l.int_ideal(&BigInt::from(2)));
        let p = l.factor_prime(2).unwrap().remove(0);
        assert_eq!(e.relative_norm(&q, &l, &p.ideal).unwrap(), q.int_ideal(&BigInt::from(2)));
    }
}
