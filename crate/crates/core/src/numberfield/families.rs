//! Field families, composita, and the canonical text descriptors
//! `quad:<d>`, `biquad:<m>,<n>`, `ccubic:<poly|cond9|cond63|cond<p>>`
//! (p a prime ≡ 1 mod 3), `poly:<c0,...,cn>`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::embedding::Embedding;
use super::field::{normalize_basis, round2, Elt, NumberField};
use super::linalg::{self, inverse, q, qz, QMatrix};
use super::poly::{self, zpoly, ZPoly};
use crate::arith::{factor_bigint, is_squarefree};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CubicSpec {
    Conductor(u32),
    Poly(ZPoly),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Quad(i64),
    Biquad(i64, i64),
    CCubic(CubicSpec),
    Poly(ZPoly),
}

pub fn cubic_of_conductor(c: u32) -> Option<ZPoly> {
    match c {
        9 => Some(zpoly(&[-1, -3, 0, 1])),
        63 => Some(zpoly(&[-35, -21, 0, 1])),
        p if p % 3 == 1 && crate::arith::is_prime(p as u64) => Some(gauss_period_cubic(p as i64)),
        _ => None,
    }
}

/// Minimal polynomial of the cubic Gauss period for a prime p ≡ 1 mod 3:
/// x³ + x² − (p−1)/3·x − (p(a+3)−1)/27 where 4p = a² + 27b², a ≡ 1 mod 3.
fn gauss_period_cubic(p: i64) -> ZPoly {
    let mut b = 1;
    loop {
        let r = 4 * p - 27 * b * b;
        assert!(r >= 0, "4p = a² + 27b² has a solution for p ≡ 1 mod 3");
        let a = (r as f64).sqrt().round() as i64;
        if a * a == r {
            let a = if a.rem_euclid(3) == 1 { a } else { -a };
            return zpoly(&[-(p * (a + 3) - 1) / 27, -(p - 1) / 3, 1, 1]);
        }
        b += 1;
    }
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.trim().split_once(':').ok_or_else(|| Error::Parse(format!("missing family prefix in `{s}`")))?;
        let int = |t: &str| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad integer `{t}` in `{s}`")));
        match kind {
            "quad" => Ok(FieldDescriptor::Quad(int(rest)?)),
            "biquad" => {
                let (a, b) = rest.split_once(',').ok_or_else(|| Error::Parse(format!("biquad needs m,n: `{s}`")))?;
                Ok(FieldDescriptor::Biquad(int(a)?, int(b)?))
            }
            "ccubic" => {
                if let Some(c) = rest.strip_prefix("cond") {
                    let c: u32 = c.parse().map_err(|_| Error::Parse(format!("bad conductor in `{s}`")))?;
                    if cubic_of_conductor(c).is_none() {
                        return Err(Error::Parse(format!("no built-in cyclic cubic of conductor {c}")));
                    }
                    Ok(FieldDescriptor::CCubic(CubicSpec::Conductor(c)))
                } else {
                    let p = poly::parse(rest)?;
                    Ok(FieldDescriptor::CCubic(CubicSpec::Poly(p)))
                }
            }
            "poly" => {
                let coeffs: Result<Vec<BigInt>> = rest
                    .split(',')
                    .map(|t| t.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("bad coefficient `{t}`"))))
                    .collect();
                Ok(FieldDescriptor::Poly(poly::trim(coeffs?)))
            }
            other => Err(Error::Parse(format!("unknown field family `{other}`"))),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Quad(d) => write!(f, "quad:{d}"),
            FieldDescriptor::Biquad(m, n) => write!(f, "biquad:{m},{n}"),
            FieldDescriptor::CCubic(CubicSpec::Conductor(c)) => write!(f, "ccubic:cond{c}"),
            FieldDescriptor::CCubic(CubicSpec::Poly(p)) => write!(f, "ccubic:{}", poly::render(p).replace(' ', "")),
            FieldDescriptor::Poly(p) => {
                let parts: Vec<String> = p.iter().map(|c| c.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}

impl FieldDescriptor {
    pub fn build(&self) -> Result<NumberField> {
        let mut k = match self {
            FieldDescriptor::Quad(d) => quadratic_field(*d)?,
            FieldDescriptor::Biquad(m, n) => biquadratic_field(*m, *n)?,
            FieldDescriptor::CCubic(spec) => {
                let p = match spec {
                    CubicSpec::Conductor(c) => cubic_of_conductor(*c).expect("validated at parse time"),
                    CubicSpec::Poly(p) => p.clone(),
                };
                cyclic_cubic(p)?
            }
            FieldDescriptor::Poly(p) => {
                let mut k = NumberField::from_poly(p.clone())?;
                k.find_automorphisms();
                k
            }
        };
        k.set_descriptor(self.to_string());
        Ok(k)
    }

    /// The quadratic d, if this is a quadratic family member.
    pub fn quadratic_d(&self) -> Option<i64> {
        match self {
            FieldDescriptor::Quad(d) => Some(*d),
            _ => None,
        }
    }
}

/// Q(√d) with the standard basis {1, ω}, ω = √d or (1+√d)/2.
pub fn quadratic_field(d: i64) -> Result<NumberField> {
    if d == 0 || d == 1 || !is_squarefree(d) {
        return Err(Error::InvalidInput(format!("d = {d} must be squarefree and not 0 or 1")));
    }
    let f = if d.rem_euclid(4) == 1 { zpoly(&[-(d - 1) / 4, -1, 1]) } else { zpoly(&[-d, 0, 1]) };
    let mut k = NumberField::with_basis(f, vec![vec![q(1), q(0)], vec![q(0), q(1)]])?;
    k.find_automorphisms();
    k.set_descriptor(format!("quad:{d}"));
    Ok(k)
}

pub fn cyclic_cubic(f: ZPoly) -> Result<NumberField> {
    if poly::degree(&f) != 3 {
        return Err(Error::InvalidInput("cyclic cubic needs a cubic polynomial".into()));
    }
    let mut k = NumberField::from_poly(f)?;
    k.find_automorphisms();
    if !k.is_galois() {
        return Err(Error::InvalidInput("cubic field is not Galois (discriminant is not a square)".into()));
    }
    Ok(k)
}

pub fn biquadratic_field(m: i64, n: i64) -> Result<NumberField> {
    let k1 = quadratic_field(m)?;
    let k2 = quadratic_field(n)?;
    let c = compositum(&k1, &k2)?;
    if c.field.degree() != 4 {
        return Err(Error::InvalidInput(format!("Q(√{m}) and Q(√{n}) coincide")));
    }
    Ok(c.field)
}

/// L = K1·K2 with the two embeddings.
#[derive(Clone, Debug)]
pub struct Compositum {
    pub field: NumberField,
    pub emb1: Embedding,
    pub emb2: Embedding,
    /// ρ = θ1 + c·θ2 generates L.
    pub shift: i64,
}

/// Elements of K1 ⊗ K2 over the power bases: `c[i][j]` is the coefficient of θ1^i θ2^j.
struct Tensor<'a> {
    f1: &'a [BigInt],
    f2: &'a [BigInt],
    n1: usize,
    n2: usize,
}

impl Tensor<'_> {
    fn mul(&self, a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
        let (n1, n2) = (self.n1, self.n2);
        let mut prod = vec![vec![BigRational::zero(); 2 * n2 - 1]; 2 * n1 - 1];
        for i in 0..n1 {
            for j in 0..n2 {
                if a[i][j].is_zero() {
                    continue;
                }
                for k in 0..n1 {
                    for l in 0..n2 {
                        if !b[k][l].is_zero() {
                            prod[i + k][j + l] += &a[i][j] * &b[k][l];
                        }
                    }
                }
            }
        }
        // reduce in the second variable, then the first
        for row in prod.iter_mut() {
            for t in (n2..row.len()).rev() {
                let c = std::mem::take(&mut row[t]);
                if c.is_zero() {
                    continue;
                }
                for s in 0..n2 {
                    row[t - n2 + s] -= &c * qz(&self.f2[s]);
                }
            }
            row.truncate(n2);
        }
        for t in (n1..prod.len()).rev() {
            let c = std::mem::take(&mut prod[t]);
            for s in 0..n1 {
                for j in 0..n2 {
                    if !c[j].is_zero() {
                        let v = &c[j] * qz(&self.f1[s]);
                        prod[t - n1 + s][j] -= v;
                    }
                }
            }
        }
        prod.truncate(n1);
        prod
    }

    fn flatten(&self, a: &[Vec<BigRational>]) -> Vec<BigRational> {
        a.iter().flat_map(|r| r.iter().cloned()).collect()
    }

    fn zero(&self) -> Vec<Vec<BigRational>> {
        vec![vec![BigRational::zero(); self.n2]; self.n1]
    }
}

/// Compositum of two linearly disjoint fields.
pub fn compositum(k1: &NumberField, k2: &NumberField) -> Result<Compositum> {
    let (n1, n2) = (k1.degree(), k2.degree());
    let big_n = n1 * n2;
    let t = Tensor { f1: k1.poly(), f2: k2.poly(), n1, n2 };
    for shift in [1i64, -1, 2, -2, 3, -3, 5] {
        let mut rho = t.zero();
        if n1 > 1 {
            rho[1][0] = q(1);
        } else {
            rho[0][0] = -qz(&k1.poly()[0]);
        }
        if n2 > 1 {
            rho[0][1] = q(shift);
        } else {
            rho[0][0] += q(shift) * -qz(&k2.poly()[0]);
        }
        let mut powers = vec![{
            let mut one = t.zero();
            one[0][0] = q(1);
            one
        }];
        for _ in 0..big_n {
            let next = t.mul(powers.last().unwrap(), &rho);
            powers.push(next);
        }
        let pmat: QMatrix = powers[..big_n].iter().map(|p| t.flatten(p)).collect();
        let Some(pinv) = inverse(&pmat) else { continue };
        let to_rho = |a: &[Vec<BigRational>]| -> Vec<BigRational> {
            let v = t.flatten(a);
            let mut out = vec![BigRational::zero(); big_n];
            for (x, row) in v.iter().zip(&pinv) {
                if x.is_zero() {
                    continue;
                }
                for (o, y) in out.iter_mut().zip(row) {
                    *o += x * y;
                }
            }
            out
        };
        let top = to_rho(&powers[big_n]);
        let mut g: ZPoly = Vec::with_capacity(big_n + 1);
        for c in &top {
            if !c.is_integer() {
                return Err(Error::Inconsistent("compositum generator is not integral".into()));
            }
            g.push(-c.to_integer());
        }
        g.push(BigInt::one());
        if !poly::is_irreducible(&g)? {
            return Err(Error::Unsupported("fields are not linearly disjoint; only composita over Q are supported".into()));
        }
        // product order, enlarged at primes dividing both discriminants
        let mut rows: QMatrix = Vec::with_capacity(big_n);
        for b1 in k1.basis() {
            for b2 in k2.basis() {
                let mut a = t.zero();
                for (i, x) in b1.iter().enumerate() {
                    for (j, y) in b2.iter().enumerate() {
                        a[i][j] = x * y;
                    }
                }
                rows.push(to_rho(&a));
            }
        }
        let g1 = k1.disc().clone();
        let g2 = k2.disc().clone();
        let common = num_integer::Integer::gcd(&g1, &g2);
        let primes: Vec<u64> = if common.is_one() {
            Vec::new()
        } else {
            factor_bigint(&common)
                .ok_or_else(|| Error::Unsupported("cannot factor discriminant gcd".into()))?
                .into_iter()
                .map(|(p, _)| p)
                .collect()
        };
        let basis = round2(&g, normalize_basis(&rows), &primes)?;
        let mut l = NumberField::with_basis(g, basis)?;
        let theta_img = |which: usize| -> Result<Elt> {
            let mut a = t.zero();
            match which {
                1 if n1 > 1 => a[1][0] = q(1),
                1 => a[0][0] = -qz(&k1.poly()[0]),
                _ if n2 > 1 => a[0][1] = q(1),
                _ => a[0][0] = -qz(&k2.poly()[0]),
            }
            let coords = l.from_power_basis(&to_rho(&a));
            linalg::to_integers(&coords).ok_or_else(|| Error::Inconsistent("generator image not integral".into()))
        };
        let emb1 = Embedding::from_theta_image(k1, &l, &theta_img(1)?)?;
        let emb2 = Embedding::from_theta_image(k2, &l, &theta_img(2)?)?;
        // automorphisms from pairs of component automorphisms
        let th1 = k1.theta();
        let th2 = k2.theta();
        let mut images = Vec::new();
        for a1 in k1.automorphisms() {
            for a2 in k2.automorphisms() {
                let i1 = emb1.apply(&k1.apply_automorphism(a1, &th1));
                let i2 = emb2.apply(&k2.apply_automorphism(a2, &th2));
                images.push(l.add(&i1, &l.scale(&i2, &BigInt::from(shift))));
            }
        }
        l.set_automorphisms_from_images(&images[1..])?;
        let hints: Vec<Elt> = [(k1, &emb1), (k2, &emb2)]
            .iter()
            .filter_map(|(k, e)| k.unit_group().ok().map(|u| u.fundamental_units.iter().map(|x| e.apply(x)).collect::<Vec<_>>()))
            .flatten()
            .collect();
        l.add_unit_hints(hints);
        let d1 = k1.descriptor();
        let d2 = k2.descriptor();
        if !d1.is_empty() && !d2.is_empty() {
            l.set_descriptor(format!("{d1} * {d2}"));
        }
        return Ok(Compositum { field: l, emb1, emb2, shift });
    }
    Err(Error::Unsupported("no primitive element θ1 + cθ2 found for the compositum".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_round_trip() {
        for s in ["quad:-5", "biquad:5,-1", "ccubic:cond9", "ccubic:x^3-3x-1", "poly:1,0,1"] {
            let d: FieldDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
            assert_eq!(d.to_string().parse::<FieldDescriptor>().unwrap(), d);
        }
        assert!("cubic:3".parse::<FieldDescriptor>().is_err());
        assert!("ccubic:cond11".parse::<FieldDescriptor>().is_err());
    }

    #[test]
    fn biquadratic_fields() {
        let k = biquadratic_field(5, -1).unwrap();
        assert_eq!(k.disc(), &BigInt::from(400));
        assert_eq!(k.galois_label().unwrap(), "V4");
        let k = biquadratic_field(2, 3).unwrap();
        // disc = 8 · 12 · 24
        assert_eq!(k.disc(), &BigInt::from(2304));
        assert!(biquadratic_field(2, 8).is_err());
    }

    #[test]
    fn sextic_composita() {
        let i = quadratic_field(-1).unwrap();
        let c9 = FieldDescriptor::CCubic(CubicSpec::Conductor(9)).build().unwrap();
        let l = compositum(&i, &c9).unwrap();
        assert_eq!(l.field.disc(), &BigInt::from(-419904));
        assert_eq!(l.field.galois_label().unwrap(), "C6");
        let r7 = quadratic_field(7).unwrap();
        let c7 = FieldDescriptor::CCubic(CubicSpec::Conductor(7)).build().unwrap();
        let l = compositum(&r7, &c7).unwrap();
        assert_eq!(l.field.disc(), &BigInt::from(1075648));
        let sevens = l.field.factor_prime(7).unwrap();
        assert_eq!(sevens[0].e, 6);
    }
}
