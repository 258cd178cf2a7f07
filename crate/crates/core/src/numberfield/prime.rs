//! Prime ideals: splitting of pO_K via the algebra O_K/pO_K, valuations, factorization.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::algebra::{primitive_idempotents, FpAlgebra};
use super::field::{Elt, NumberField};
use super::ideal::Ideal;
use crate::abelian::normal_form::hnf_mod;
use crate::arith::{factor_bigint, is_prime};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeIdeal {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    pub ideal: Ideal,
    /// β with βP ⊆ pO and β ∉ pO.
    anti: Elt,
}

impl PrimeIdeal {
    pub fn norm(&self) -> BigInt {
        num_traits::pow(BigInt::from(self.p), self.f as usize)
    }

    pub fn norm_u64(&self) -> Option<u64> {
        self.norm().to_u64()
    }
}

impl NumberField {
    /// Factor pO_K = ∏ P_i^{e_i}; primes ordered by (f, e, HNF).
    pub fn factor_prime(&self, p: u64) -> Result<Vec<PrimeIdeal>> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        let n = self.degree();
        let alg = FpAlgebra::from_integer_table(self.table(), p);
        let fp = alg.fp.clone();
        let mut one = vec![0u64; n];
        one[0] = 1;
        let mut rad = alg.radical(&one);
        let pivots = fp.rref(&mut rad);
        let comp: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
        let m = comp.len();
        let project = |x: &[u64]| -> Vec<u64> {
            let mut x = x.to_vec();
            for (row, &c) in rad.iter().zip(pivots.iter()) {
                let f = x[c];
                if f != 0 {
                    for (xi, ri) in x.iter_mut().zip(row.iter()) {
                        *xi = fp.sub(*xi, fp.mul(f, *ri));
                    }
                }
            }
            comp.iter().map(|&i| x[i]).collect()
        };
        let section = |y: &[u64]| -> Vec<u64> {
            let mut x = vec![0u64; n];
            for (&i, &v) in comp.iter().zip(y.iter()) {
                x[i] = v;
            }
            x
        };
        let btable: Vec<Vec<Vec<u64>>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        let mut a = vec![0u64; m];
                        a[i] = 1;
                        let mut b = vec![0u64; m];
                        b[j] = 1;
                        project(&alg.mul(&section(&a), &section(&b)))
                    })
                    .collect()
            })
            .collect();
        let balg = FpAlgebra { fp: fp.clone(), n: m, table: btable };
        let bone = project(&one);
        let idems = primitive_idempotents(&balg, &bone);
        let pb = BigInt::from(p);
        let mut primes = Vec::with_capacity(idems.len());
        for eps in &idems {
            let rows: Vec<Vec<u64>> = (0..n)
                .map(|k| {
                    let mut e = vec![0u64; n];
                    e[k] = 1;
                    balg.mul(&project(&e), eps)
                })
                .collect();
            let ker = fp.left_kernel(&rows, m);
            let f = (n - ker.len()) as u32;
            let gens: Vec<Vec<BigInt>> = ker.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let hnf_rows = hnf_mod(&gens, n, &pb);
            let ideal = Ideal { hnf: hnf_rows, denom: BigInt::one() };
            let anti = self.anti_uniformizer(&ideal, p)?;
            let mut pr = PrimeIdeal { p, e: 0, f, ideal, anti };
            pr.e = self.valuation(&pr, &self.from_int(&pb)) as u32;
            primes.push(pr);
        }
        primes.sort_by(|a, b| (a.f, a.e, &a.ideal.hnf).cmp(&(b.f, b.e, &b.ideal.hnf)));
        let total: u32 = primes.iter().map(|q| q.e * q.f).sum();
        if total as usize != n {
            return Err(Error::Inconsistent(format!("sum of e*f above {p} is {total}, degree {n}")));
        }
        Ok(primes)
    }

    fn anti_uniformizer(&self, pr: &Ideal, p: u64) -> Result<Elt> {
        let n = self.degree();
        let alg = FpAlgebra::from_integer_table(self.table(), p);
        let fp = &alg.fp;
        let gens: Vec<Vec<u64>> = pr.hnf.iter().map(|r| r.iter().map(|x| fp.reduce(x)).collect()).collect();
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|j| {
                let mut e = vec![0u64; n];
                e[j] = 1;
                gens.iter().flat_map(|g| alg.mul(&e, g)).collect()
            })
            .collect();
        let ker = fp.left_kernel(&rows, n * gens.len());
        let v = ker.into_iter().next().ok_or_else(|| Error::Inconsistent("no anti-uniformizer".into()))?;
        Ok(v.into_iter().map(BigInt::from).collect())
    }

    /// v_P(a) for a nonzero integral element.
    pub fn valuation(&self, pr: &PrimeIdeal, a: &[BigInt]) -> i64 {
        assert!(!self.is_zero(a), "valuation of zero");
        let pb = BigInt::from(pr.p);
        let mut a = a.to_vec();
        let mut v = 0;
        loop {
            let b = self.mul(&a, &pr.anti);
            if b.iter().all(|x| x.is_multiple_of(&pb)) {
                a = b.into_iter().map(|x| x / &pb).collect();
                v += 1;
            } else {
                return v;
            }
        }
    }

    /// v_P of a fractional ideal.
    pub fn ideal_valuation(&self, pr: &PrimeIdeal, a: &Ideal) -> i64 {
        let v = a.hnf.iter().filter(|r| !self.is_zero(r)).map(|r| self.valuation(pr, r)).min().unwrap_or(0);
        let mut d = a.denom.clone();
        let pb = BigInt::from(pr.p);
        let mut vd = 0;
        while d.is_multiple_of(&pb) {
            d /= &pb;
            vd += 1;
        }
        v - vd * pr.e as i64
    }

    /// Factor an integral ideal into prime ideals.
    pub fn factor_ideal(&self, a: &Ideal) -> Result<Vec<(PrimeIdeal, u32)>> {
        if !a.is_integral() {
            return Err(Error::InvalidInput("factor_ideal expects an integral ideal".into()));
        }
        let nm = a.norm_int();
        let fac = factor_bigint(&nm).ok_or_else(|| Error::Resource(format!("cannot factor ideal norm {nm}")))?;
        let mut out = Vec::new();
        for (p, _) in fac {
            for pr in self.factor_prime(p)? {
                let v = self.ideal_valuation(&pr, a);
                if v > 0 {
                    out.push((pr, v as u32));
                }
            }
        }
        let check: BigInt = out.iter().map(|(pr, v)| num_traits::pow(pr.norm(), *v as usize)).product();
        if check != nm {
            return Err(Error::Inconsistent("prime factorization does not account for the norm".into()));
        }
        Ok(out)
    }

    /// Product of prime powers.
    pub fn ideal_from_factorization(&self, fac: &[(PrimeIdeal, u32)]) -> Ideal {
        fac.iter().fold(self.unit_ideal(), |acc, (pr, v)| self.ideal_mul(&acc, &self.ideal_pow(&pr.ideal, *v as u64)))
    }

    /// Valuations of a nonzero integral element at all primes dividing its norm, keyed by
    /// rational prime. `None` if the norm cannot be factored.
    pub fn element_factorization(&self, a: &[BigInt]) -> Option<BTreeMap<u64, Vec<(PrimeIdeal, u32)>>> {
        let nm = self.norm(a).abs();
        let fac = factor_bigint(&nm)?;
        let mut out = BTreeMap::new();
        for (p, _) in fac {
            let prs = self.factor_prime(p).ok()?;
            let list: Vec<(PrimeIdeal, u32)> = prs
                .into_iter()
                .filter_map(|pr| {
                    let v = self.valuation(&pr, a);
                    (v > 0).then_some((pr, v as u32))
                })
                .collect();
            out.insert(p, list);
        }
        Some(out)
    }

    /// Rational primes ramified in K.
    pub fn ramified_primes(&self) -> Result<Vec<u64>> {
        let fac = factor_bigint(&self.disc().abs())
            .ok_or_else(|| Error::Resource(format!("cannot factor discriminant {}", self.disc())))?;
        Ok(fac.into_iter().map(|(p, _)| p).collect())
    }
}

/// Sign helper used in reports.
pub fn sign_of(x: &BigInt) -> i8 {
    if x.is_negative() {
        -1
    } else if x.is_zero() {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::poly::zpoly;

    fn check_reconstruction(k: &NumberField, p: u64) -> Vec<PrimeIdeal> {
        let prs = k.factor_prime(p).unwrap();
        let fac: Vec<(PrimeIdeal, u32)> = prs.iter().map(|q| (q.clone(), q.e)).collect();
        assert_eq!(k.ideal_from_factorization(&fac), k.int_ideal(&BigInt::from(p)));
        for q in &prs {
            assert_eq!(q.ideal.norm_int(), q.norm());
        }
        prs
    }

    #[test]
    fn gaussian_primes() {
        let k = NumberField::from_poly(zpoly(&[1, 0, 1])).unwrap();
        let two = check_reconstruction(&k, 2);
        assert_eq!((two.len(), two[0].e, two[0].f), (1, 2, 1));
        assert_eq!(check_reconstruction(&k, 3).len(), 1);
        let five = check_reconstruction(&k, 5);
        assert_eq!(five.len(), 2);
    }

    #[test]
    fn cubic_and_biquadratic() {
        let k = NumberField::from_poly(zpoly(&[-1, -3, 0, 1])).unwrap();
        let three = check_reconstruction(&k, 3);
        assert_eq!((three.len(), three[0].e, three[0].f), (1, 3, 1));
        let k = NumberField::from_poly(zpoly(&[36, 0, -8, 0, 1])).unwrap();
        let five = check_reconstruction(&k, 5);
        assert_eq!(five.len(), 2);
        assert!(five.iter().all(|q| q.e == 2 && q.f == 1));
        let two = check_reconstruction(&k, 2);
        assert_eq!(two.iter().map(|q| q.e * q.f).sum::<u32>(), 4);
        for p in [3u64, 7, 11, 13, 29] {
            check_reconstruction(&k, p);
        }
    }

    #[test]
    fn element_valuations() {
        let k = NumberField::from_poly(zpoly(&[5, 0, 1])).unwrap();
        let a = k.add(&k.one(), &k.theta()); // norm 6
        let fac = k.element_factorization(&a).unwrap();
        assert_eq!(fac.len(), 2);
        let id = k.principal_ideal(&a).unwrap();
        let f = k.factor_ideal(&id).unwrap();
        assert_eq!(k.ideal_from_factorization(&f), id);
    }
}
