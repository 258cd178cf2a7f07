//! Number fields given by a monic polynomial and an integral basis.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::algebra::FpAlgebra;
use super::lattice::{gram_of, lll, Gram};
use super::linalg::{self, common_denominator, inverse, q, qdet, qz, to_f64, Fp, QMatrix};
use super::poly::{self, ZPoly};
use crate::abelian::normal_form::{determinant, hnf, IntMatrix};
use crate::arith::factor_bigint;
use crate::error::{Error, Result};

pub type Elt = Vec<BigInt>;

pub const MAX_DEGREE: usize = 8;

#[derive(Clone, Debug)]
pub struct NumberField {
    poly: ZPoly,
    n: usize,
    basis: QMatrix,
    basis_inv: QMatrix,
    table: Vec<Vec<Elt>>,
    disc: BigInt,
    r1: usize,
    r2: usize,
    roots: Vec<Complex64>,
    emb: Vec<Vec<Complex64>>,
    gram: Gram,
    automorphisms: Vec<IntMatrix>,
    unit_hints: Vec<Elt>,
    descriptor: String,
}

/// Structure constants of the order spanned by `basis` (rows over the power basis).
fn order_table(f: &[BigInt], basis: &QMatrix, basis_inv: &QMatrix) -> Result<Vec<Vec<Elt>>> {
    let n = basis.len();
    let mut table = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in i..n {
            let prod = poly::qmul_mod(&basis[i], &basis[j], f);
            let coords = mat_vec(&prod, basis_inv);
            let ints = linalg::to_integers(&coords)
                .ok_or_else(|| Error::InvalidInput("basis does not span a ring".into()))?;
            table[i][j] = ints.clone();
            table[j][i] = ints;
        }
    }
    Ok(table)
}

fn mat_vec(v: &[BigRational], m: &QMatrix) -> Vec<BigRational> {
    let n = m[0].len();
    let mut out = vec![BigRational::zero(); n];
    for (x, row) in v.iter().zip(m) {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out.iter_mut().zip(row) {
            *o += x * y;
        }
    }
    out
}

/// Bring a basis (rows over the power basis) to lower-triangular Hermite form, so that
/// `ω_k` has degree exactly k and `ω_0 = 1` for an order.
pub fn normalize_basis(rows: &QMatrix) -> QMatrix {
    let n = rows[0].len();
    let d = rows.iter().fold(BigInt::one(), |acc, r| num_integer::lcm(acc, common_denominator(r)));
    let ints: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().rev().map(|x| (x * qz(&d)).to_integer()).collect())
        .collect();
    let h = hnf(&ints, n);
    let mut out: QMatrix = h
        .iter()
        .map(|r| r.iter().rev().map(|x| BigRational::new(x.clone(), d.clone())).collect())
        .collect();
    out.reverse();
    out
}

fn trace_vector(table: &[Vec<Elt>]) -> Vec<BigInt> {
    let n = table.len();
    (0..n).map(|k| (0..n).map(|i| table[k][i][i].clone()).sum()).collect()
}

fn trace_form_det(table: &[Vec<Elt>]) -> BigInt {
    let n = table.len();
    let t = trace_vector(table);
    let m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| table[i][j].iter().zip(t.iter()).map(|(a, b)| a * b).sum()).collect())
        .collect();
    determinant(&m)
}

/// One Round 2 step at p: returns an enlarged basis, or `None` if the order is p-maximal.
fn enlarge_at(basis: &QMatrix, table: &[Vec<Elt>], p: u64) -> Option<QMatrix> {
    let n = basis.len();
    let alg = FpAlgebra::from_integer_table(table, p);
    let mut one = vec![0u64; n];
    one[0] = 1;
    let rad = alg.radical(&one);
    let pb = BigInt::from(p);
    let mut gens: Vec<Vec<BigInt>> = rad.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = pb.clone();
        gens.push(e);
    }
    let ip = hnf(&gens, n);
    let ipq: QMatrix = ip.iter().map(|r| r.iter().map(qz).collect()).collect();
    let ip_inv = inverse(&ipq)?;
    let fp = Fp::new(p);
    // row i: coordinates of e_i * β_k in the β basis, for all k, mod p
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row = Vec::with_capacity(n * n);
            for beta in ip.iter() {
                let mut prod = vec![BigInt::zero(); n];
                for (j, bj) in beta.iter().enumerate() {
                    if bj.is_zero() {
                        continue;
                    }
                    for (o, t) in prod.iter_mut().zip(table[i][j].iter()) {
                        *o += bj * t;
                    }
                }
                let pq: Vec<BigRational> = prod.iter().map(qz).collect();
                let c = mat_vec(&pq, &ip_inv);
                row.extend(c.iter().map(|x| fp.reduce(&x.to_integer())));
            }
            row
        })
        .collect();
    let ker = fp.left_kernel(&rows, n * n);
    if ker.is_empty() {
        return None;
    }
    let mut ugens: Vec<Vec<BigInt>> = ker.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    for i in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[i] = pb.clone();
        ugens.push(e);
    }
    let u = hnf(&ugens, n);
    let new_rows: QMatrix = u
        .iter()
        .map(|r| {
            let v: Vec<BigRational> = r.iter().map(|x| BigRational::new(x.clone(), pb.clone())).collect();
            mat_vec(&v, basis)
        })
        .collect();
    Some(normalize_basis(&new_rows))
}

/// Maximal order by Round 2 starting from `basis`, enlarging at the given primes.
pub fn round2(f: &[BigInt], basis: QMatrix, primes: &[u64]) -> Result<QMatrix> {
    let mut basis = normalize_basis(&basis);
    for &p in primes {
        loop {
            let inv = inverse(&basis).ok_or_else(|| Error::InvalidInput("singular basis".into()))?;
            let table = order_table(f, &basis, &inv)?;
            match enlarge_at(&basis, &table, p) {
                Some(b) => basis = b,
                None => break,
            }
        }
    }
    Ok(basis)
}

fn power_basis(n: usize) -> QMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { q(1) } else { q(0) }).collect()).collect()
}

impl NumberField {
    /// Field with the maximal order computed by Round 2 from `Z[θ]`.
    pub fn from_poly(f: ZPoly) -> Result<Self> {
        let f = poly::trim(f);
        let n = poly::degree(&f);
        check_poly(&f)?;
        let d = poly::discriminant(&f);
        let fac = factor_bigint(&d)
            .ok_or_else(|| Error::Unsupported(format!("cannot factor polynomial discriminant {d}")))?;
        let primes: Vec<u64> = fac.iter().filter(|(_, e)| *e >= 2).map(|(p, _)| *p).collect();
        let basis = round2(&f, power_basis(n), &primes)?;
        Self::with_basis(f, basis)
    }

    /// Field from an explicit basis that must be the maximal order; checked for ring closure
    /// and discriminant consistency, and maximality at every prime whose square divides the
    /// discriminant.
    pub fn with_basis(f: ZPoly, basis: QMatrix) -> Result<Self> {
        let f = poly::trim(f);
        check_poly(&f)?;
        let n = poly::degree(&f);
        if basis.len() != n || basis.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension { expected: n, got: basis.len() });
        }
        let basis = normalize_basis(&basis);
        if basis[0][0] != q(1) || basis[0][1..].iter().any(|x| !x.is_zero()) {
            return Err(Error::InvalidInput("basis lattice does not contain 1 as a primitive vector".into()));
        }
        let basis_inv = inverse(&basis).ok_or_else(|| Error::InvalidInput("singular basis".into()))?;
        let table = order_table(&f, &basis, &basis_inv)?;
        let disc = trace_form_det(&table);
        let det_b = qdet(&basis);
        let pd = poly::discriminant(&f);
        if qz(&pd) * &det_b * &det_b != qz(&disc) {
            return Err(Error::Inconsistent("basis discriminant does not match polynomial discriminant".into()));
        }
        if let Some(fac) = factor_bigint(&disc) {
            for (p, e) in fac {
                if e >= 2 && enlarge_at(&basis, &table, p).is_some() {
                    return Err(Error::InvalidInput(format!("basis is not maximal at {p}")));
                }
            }
        }
        let (roots, r1, r2) = poly::ordered_roots(&f);
        let expected_sign = if r2 % 2 == 0 { 1 } else { -1 };
        if (disc.is_positive() as i32 * 2 - 1) != expected_sign {
            return Err(Error::Inconsistent("signature disagrees with discriminant sign".into()));
        }
        let emb: Vec<Vec<Complex64>> = roots
            .iter()
            .map(|&z| {
                basis
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .map(|(j, c)| z.powu(j as u32) * linalg::q_to_f64(c))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let gram: Gram = (0..n)
            .map(|i| (0..n).map(|j| emb.iter().map(|e| (e[i] * e[j].conj()).re).sum()).collect())
            .collect();
        let mut k = Self {
            poly: f,
            n,
            basis,
            basis_inv,
            table,
            disc,
            r1,
            r2,
            roots,
            emb,
            gram,
            automorphisms: Vec::new(),
            unit_hints: Vec::new(),
            descriptor: String::new(),
        };
        k.automorphisms = vec![k.identity_matrix()];
        Ok(k)
    }

    pub fn degree(&self) -> usize {
        self.n
    }
    pub fn poly(&self) -> &ZPoly {
        &self.poly
    }
    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }
    pub fn disc(&self) -> &BigInt {
        &self.disc
    }
    pub fn signature(&self) -> (usize, usize) {
        (self.r1, self.r2)
    }
    pub fn is_totally_real(&self) -> bool {
        self.r2 == 0
    }
    pub fn table(&self) -> &[Vec<Elt>] {
        &self.table
    }
    pub fn gram(&self) -> &Gram {
        &self.gram
    }
    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }
    pub fn set_descriptor(&mut self, d: impl Into<String>) {
        self.descriptor = d.into();
    }
    pub fn unit_hints(&self) -> &[Elt] {
        &self.unit_hints
    }
    pub fn add_unit_hints(&mut self, hints: impl IntoIterator<Item = Elt>) {
        self.unit_hints.extend(hints);
    }
    pub fn num_places(&self) -> usize {
        self.r1 + self.r2
    }

    pub fn one(&self) -> Elt {
        let mut e = vec![BigInt::zero(); self.n];
        e[0] = BigInt::one();
        e
    }

    pub fn zero(&self) -> Elt {
        vec![BigInt::zero(); self.n]
    }

    pub fn from_int(&self, x: &BigInt) -> Elt {
        let mut e = self.zero();
        e[0] = x.clone();
        e
    }

    pub fn basis_element(&self, i: usize) -> Elt {
        let mut e = self.zero();
        e[i] = BigInt::one();
        e
    }

    pub fn is_zero(&self, a: &[BigInt]) -> bool {
        a.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Elt {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Elt {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn scale(&self, a: &[BigInt], c: &BigInt) -> Elt {
        a.iter().map(|x| x * c).collect()
    }

    pub fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Elt {
        let mut out = vec![BigInt::zero(); self.n];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let c = x * y;
                for (o, t) in out.iter_mut().zip(self.table[i][j].iter()) {
                    if !t.is_zero() {
                        *o += &c * t;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[BigInt], mut e: u64) -> Elt {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Matrix of multiplication by `a`: row i = coordinates of `a ω_i`.
    pub fn mult_matrix(&self, a: &[BigInt]) -> IntMatrix {
        (0..self.n).map(|i| self.mul(a, &self.basis_element(i))).collect()
    }

    pub fn norm(&self, a: &[BigInt]) -> BigInt {
        determinant(&self.mult_matrix(a))
    }

    pub fn trace(&self, a: &[BigInt]) -> BigInt {
        let t = trace_vector(&self.table);
        a.iter().zip(t.iter()).map(|(x, y)| x * y).sum()
    }

    /// `a / b` if it is an algebraic integer.
    pub fn div_exact(&self, a: &[BigInt], b: &[BigInt]) -> Option<Elt> {
        let q = self.div_q(a, b)?;
        linalg::to_integers(&q)
    }

    /// `a / b` in rational coordinates.
    pub fn div_q(&self, a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigRational>> {
        if self.is_zero(b) {
            return None;
        }
        let m: QMatrix = self.mult_matrix(b).iter().map(|r| r.iter().map(qz).collect()).collect();
        let target: Vec<BigRational> = a.iter().map(qz).collect();
        linalg::solve_left(&m, &target)
    }

    /// Multiply rational-coordinate elements.
    pub fn mul_q(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let da = common_denominator(a);
        let db = common_denominator(b);
        let ai: Elt = a.iter().map(|x| (x * qz(&da)).to_integer()).collect();
        let bi: Elt = b.iter().map(|x| (x * qz(&db)).to_integer()).collect();
        let den = da * db;
        self.mul(&ai, &bi).into_iter().map(|x| BigRational::new(x, den.clone())).collect()
    }

    /// Coordinates (over the integral basis) of a power-basis vector.
    pub fn from_power_basis(&self, v: &[BigRational]) -> Vec<BigRational> {
        mat_vec(v, &self.basis_inv)
    }

    pub fn to_power_basis(&self, a: &[BigRational]) -> Vec<BigRational> {
        mat_vec(a, &self.basis)
    }

    /// The generator θ in integral-basis coordinates.
    pub fn theta(&self) -> Elt {
        let mut v = vec![q(0); self.n];
        if self.n > 1 {
            v[1] = q(1);
        } else {
            v[0] = -qz(&self.poly[0]);
        }
        linalg::to_integers(&self.from_power_basis(&v)).expect("theta is integral")
    }

    /// Evaluate an integer polynomial at an element.
    pub fn eval_poly(&self, p: &[BigInt], a: &[BigInt]) -> Elt {
        p.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, a), &self.from_int(c)))
    }

    /// All n complex embeddings (real ones first, then conjugate pairs).
    pub fn embed(&self, a: &[BigInt]) -> Vec<Complex64> {
        self.emb
            .iter()
            .map(|e| {
                a.iter()
                    .zip(e.iter())
                    .filter(|(x, _)| !x.is_zero())
                    .map(|(x, z)| z * to_f64(x))
                    .sum()
            })
            .collect()
    }

    pub fn embed_q(&self, a: &[BigRational]) -> Vec<Complex64> {
        self.emb
            .iter()
            .map(|e| a.iter().zip(e.iter()).map(|(x, z)| z * linalg::q_to_f64(x)).sum())
            .collect()
    }

    /// Logarithmic embedding at the r1 + r2 places (without the factor 2 for complex places).
    pub fn log_embedding(&self, a: &[BigInt]) -> Vec<f64> {
        self.embed(a).iter().take(self.num_places()).map(|z| z.norm().ln()).collect()
    }

    pub fn place_weight(&self, i: usize) -> f64 {
        if i < self.r1 {
            1.0
        } else {
            2.0
        }
    }

    pub fn t2(&self, a: &[BigInt]) -> f64 {
        self.embed(a).iter().map(|z| z.norm_sqr()).sum()
    }

    /// Minkowski bound (n!/n^n)(4/π)^{r2} √|disc|.
    pub fn minkowski_bound(&self) -> f64 {
        let n = self.n as f64;
        let fact: f64 = (1..=self.n).map(|i| i as f64).product();
        fact / n.powi(self.n as i32) * (4.0 / std::f64::consts::PI).powi(self.r2 as i32) * to_f64(&self.disc.abs()).sqrt()
    }

    pub fn identity_matrix(&self) -> IntMatrix {
        (0..self.n).map(|i| self.basis_element(i)).collect()
    }

    /// Automorphisms of K (identity first), as matrices acting on coordinate rows.
    pub fn automorphisms(&self) -> &[IntMatrix] {
        &self.automorphisms
    }

    pub fn is_galois(&self) -> bool {
        self.automorphisms.len() == self.n
    }

    pub fn apply_automorphism(&self, m: &IntMatrix, a: &[BigInt]) -> Elt {
        crate::abelian::normal_form::vec_mul(a, m, self.n)
    }

    /// Matrix of the endomorphism sending θ to `img` (which must be a root of the polynomial).
    pub fn automorphism_from_image(&self, img: &[BigInt]) -> Result<IntMatrix> {
        if !self.is_zero(&self.eval_poly(&self.poly, img)) {
            return Err(Error::InvalidInput("image is not a root of the defining polynomial".into()));
        }
        let n = self.n;
        let mut powers = vec![self.one()];
        for _ in 1..n {
            let next = self.mul(powers.last().unwrap(), img);
            powers.push(next);
        }
        let mut rows = Vec::with_capacity(n);
        for row in &self.basis {
            let d = common_denominator(row);
            let mut acc = self.zero();
            for (c, pw) in row.iter().zip(powers.iter()) {
                let ci = (c * qz(&d)).to_integer();
                acc = self.add(&acc, &self.scale(pw, &ci));
            }
            let mut out = Vec::with_capacity(n);
            for x in acc {
                let (qq, r) = x.div_rem(&d);
                if !r.is_zero() {
                    return Err(Error::Inconsistent("automorphism does not preserve the maximal order".into()));
                }
                out.push(qq);
            }
            rows.push(out);
        }
        Ok(rows)
    }

    /// Install automorphisms given by the images of θ; verified exactly.
    pub fn set_automorphisms_from_images(&mut self, images: &[Elt]) -> Result<()> {
        let mut mats: Vec<IntMatrix> = vec![self.identity_matrix()];
        for img in images {
            let m = self.automorphism_from_image(img)?;
            if !mats.contains(&m) {
                mats.push(m);
            }
        }
        self.automorphisms = mats;
        Ok(())
    }

    /// Search for all automorphisms: for each root z, an integral y with σ_0(y) = z is
    /// found by lattice reduction and checked exactly.
    pub fn find_automorphisms(&mut self) {
        let n = self.n;
        let theta = self.theta();
        let mut images: Vec<Elt> = vec![theta.clone()];
        if n == 2 {
            let tr = self.trace(&theta);
            images.push(self.sub(&self.from_int(&tr), &theta));
        } else {
            for k in 1..n {
                let target = self.roots[k];
                if let Some(y) = self.preimage_of_root(target) {
                    if !images.contains(&y) {
                        images.push(y);
                    }
                }
            }
        }
        let found: Vec<Elt> = images.into_iter().skip(1).collect();
        let _ = self.set_automorphisms_from_images(&found);
    }

    fn preimage_of_root(&self, target: Complex64) -> Option<Elt> {
        let n = self.n;
        let e0 = &self.emb[0];
        for &c in &[1e6f64, 1e9, 1e12] {
            // vectors: e_i (i < n) with extra coordinates c·σ_0(ω_i); e_n with -c·target
            let coords: Vec<(f64, f64)> = (0..=n)
                .map(|i| if i < n { (c * e0[i].re, c * e0[i].im) } else { (-c * target.re, -c * target.im) })
                .collect();
            let g: Gram = (0..=n)
                .map(|i| {
                    (0..=n)
                        .map(|j| f64::from(u8::from(i == j)) + coords[i].0 * coords[j].0 + coords[i].1 * coords[j].1)
                        .collect()
                })
                .collect();
            let (u, _) = lll(&g);
            for row in &u {
                let last = &row[n];
                if last.abs() != BigInt::one() {
                    continue;
                }
                let y: Elt = row[..n].iter().map(|x| if last.is_positive() { x.clone() } else { -x }).collect();
                if self.is_zero(&self.eval_poly(&self.poly, &y)) {
                    return Some(y);
                }
            }
        }
        None
    }

    /// Group label for a Galois field: cyclic `C<n>`, `V4`, `S3`, or `order <n>`.
    pub fn galois_label(&self) -> Option<String> {
        if !self.is_galois() {
            return None;
        }
        let n = self.n;
        let orders: Vec<usize> = self.automorphisms.iter().map(|m| self.automorphism_order(m)).collect();
        let cyclic = orders.contains(&n);
        let abelian = self.automorphisms.iter().all(|a| {
            self.automorphisms.iter().all(|b| {
                let ab = crate::abelian::normal_form::mat_mul(a, b, n, n);
                let ba = crate::abelian::normal_form::mat_mul(b, a, n, n);
                ab == ba
            })
        });
        Some(match (n, cyclic, abelian) {
            (_, true, _) => format!("C{n}"),
            (4, false, _) => "V4".to_string(),
            (6, false, false) => "S3".to_string(),
            _ => format!("order {n}"),
        })
    }

    pub fn automorphism_order(&self, m: &IntMatrix) -> usize {
        let id = self.identity_matrix();
        let mut cur = m.clone();
        let mut k = 1;
        while cur != id && k <= self.n {
            cur = crate::abelian::normal_form::mat_mul(&cur, m, self.n, self.n);
            k += 1;
        }
        k
    }

    /// LLL-reduce a lattice of integral elements under T2; returns reduced rows.
    pub fn lll_reduce(&self, rows: &[Elt]) -> Vec<Elt> {
        let g = gram_of(rows, &self.gram);
        let (u, _) = lll(&g);
        super::lattice::transform(&u, rows)
    }

    /// Is `a` a unit (norm ±1)?
    pub fn is_unit(&self, a: &[BigInt]) -> bool {
        self.norm(a).abs().is_one()
    }

    pub fn to_f64_vec(a: &[BigInt]) -> Vec<f64> {
        a.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

fn check_poly(f: &[BigInt]) -> Result<()> {
    let n = poly::degree(f);
    if n == 0 || !poly::is_monic(&f[..=n]) {
        return Err(Error::InvalidInput("defining polynomial must be monic of positive degree".into()));
    }
    if n > MAX_DEGREE {
        return Err(Error::Unsupported(format!("degree {n} exceeds {MAX_DEGREE}")));
    }
    if !poly::is_irreducible(f)? {
        return Err(Error::InvalidInput(format!("{} is reducible", poly::render(f))));
    }
    Ok(())
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly && self.basis == other.basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::poly::zpoly;

    #[test]
    fn gaussian_integers() {
        let k = NumberField::from_poly(zpoly(&[1, 0, 1])).unwrap();
        assert_eq!(k.disc(), &BigInt::from(-4));
        assert_eq!(k.signature(), (0, 1));
        let i = k.theta();
        assert_eq!(k.mul(&i, &i), k.from_int(&BigInt::from(-1)));
        assert!((k.minkowski_bound() - 4.0 / std::f64::consts::PI / 2.0 * 2.0).abs() < 1e-9);
    }

    #[test]
    fn round2_finds_half_integers() {
        // x^2 - 5: maximal order Z[(1+√5)/2]
        let k = NumberField::from_poly(zpoly(&[-5, 0, 1])).unwrap();
        assert_eq!(k.disc(), &BigInt::from(5));
        // x^2 - 12 has the maximal order of Q(√3)
        let k = NumberField::from_poly(zpoly(&[-12, 0, 1])).unwrap();
        assert_eq!(k.disc(), &BigInt::from(12));
    }

    #[test]
    fn cyclic_cubic_automorphisms() {
        let mut k = NumberField::from_poly(zpoly(&[-1, -3, 0, 1])).unwrap();
        assert_eq!(k.disc(), &BigInt::from(81));
        k.find_automorphisms();
        assert!(k.is_galois());
        assert_eq!(k.galois_label().unwrap(), "C3");
        // θ ↦ 2 − θ² is one of them (θ² − 2 is not a root of this polynomial)
        let t = k.theta();
        let img = k.sub(&k.from_int(&BigInt::from(2)), &k.mul(&t, &t));
        let bad = k.sub(&k.mul(&t, &t), &k.from_int(&BigInt::from(2)));
        assert!(k.automorphism_from_image(&bad).is_err());
        let m = k.automorphism_from_image(&img).unwrap();
        assert!(k.automorphisms().contains(&m));
    }

    #[test]
    fn biquadratic_by_round2() {
        // Q(√5, i): θ = √5 + i has minimal polynomial x^4 - 8x^2 + 36
        let mut k = NumberField::from_poly(zpoly(&[36, 0, -8, 0, 1])).unwrap();
        assert_eq!(k.disc(), &BigInt::from(400));
        k.find_automorphisms();
        assert_eq!(k.galois_label().unwrap(), "V4");
    }

    #[test]
    fn rejects_reducible() {
        assert!(NumberField::from_poly(zpoly(&[-4, 0, 1])).is_err());
    }
}
