//! Finite-dimensional commutative algebras over F_p given by structure constants; used for
//! radicals (Round 2) and for splitting O/pO into local components.

use num_bigint::BigInt;

use super::linalg::Fp;

#[derive(Clone, Debug)]
pub struct FpAlgebra {
    pub fp: Fp,
    pub n: usize,
    /// `table[i][j]` = coordinates of `e_i e_j`.
    pub table: Vec<Vec<Vec<u64>>>,
}

impl FpAlgebra {
    pub fn from_integer_table(table: &[Vec<Vec<BigInt>>], p: u64) -> Self {
        let fp = Fp::new(p);
        let t = table
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(|x| fp.reduce(x)).collect()).collect())
            .collect();
        Self { fp, n: table.len(), table: t }
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.fp.p;
        let mut out = vec![0u64; self.n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let c = self.fp.mul(x, y);
                for (o, &t) in out.iter_mut().zip(self.table[i][j].iter()) {
                    if t != 0 {
                        *o = (*o + self.fp.mul(c, t)) % p;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[u64], mut e: u64, one: &[u64]) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = one.to_vec();
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

    /// Matrix of the Frobenius `x ↦ x^p` (rows = images of basis vectors).
    pub fn frobenius(&self, one: &[u64]) -> Vec<Vec<u64>> {
        (0..self.n)
            .map(|i| {
                let mut e = vec![0u64; self.n];
                e[i] = 1;
                self.pow(&e, self.fp.p, one)
            })
            .collect()
    }

    /// Basis of the nilradical: kernel of `x ↦ x^{p^j}` with `p^j ≥ n`.
    pub fn radical(&self, one: &[u64]) -> Vec<Vec<u64>> {
        let f = self.frobenius(one);
        let mut m = f.clone();
        let mut pj = self.fp.p;
        while (pj as usize) < self.n {
            m = self.fp.mat_mul(&m, &f);
            pj = pj.saturating_mul(self.fp.p);
        }
        self.fp.left_kernel(&m, self.n)
    }
}

/// Split a reduced algebra into its field components. Input: the algebra (semisimple) and
/// its identity. Returns primitive idempotents.
pub fn primitive_idempotents(alg: &FpAlgebra, one: &[u64]) -> Vec<Vec<u64>> {
    let frob = alg.frobenius(one);
    let mut out = Vec::new();
    split(alg, &frob, one.to_vec(), &mut out);
    out
}

fn split(alg: &FpAlgebra, frob: &[Vec<u64>], e: Vec<u64>, out: &mut Vec<Vec<u64>>) {
    let fp = &alg.fp;
    let n = alg.n;
    // basis of the component eA
    let mut comp: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut b = vec![0u64; n];
            b[i] = 1;
            alg.mul(&e, &b)
        })
        .collect();
    fp.rref(&mut comp);
    // Frobenius-fixed elements of eA: y·C with (y·C)·(F - I) = 0
    let img: Vec<Vec<u64>> = comp
        .iter()
        .map(|c| {
            let fc = fp.vec_mat(c, frob);
            fc.iter().zip(c.iter()).map(|(&a, &b)| fp.sub(a, b)).collect()
        })
        .collect();
    let fixed: Vec<Vec<u64>> = fp.left_kernel(&img, n).into_iter().map(|y| fp.vec_mat(&y, &comp)).collect();
    if fixed.len() <= 1 {
        out.push(e);
        return;
    }
    // pick a fixed element not in F_p·e
    let alpha = fixed
        .iter()
        .find(|x| {
            let m = vec![(*x).clone(), e.clone()];
            fp.rank(&m) == 2
        })
        .cloned()
        .expect("fixed algebra of dimension > 1 has a non-scalar element");
    // minimal polynomial of alpha in eA: find first dependency among e, α, α², ...
    let mut powers = vec![e.clone()];
    let min_poly: Vec<u64> = loop {
        let next = alg.mul(powers.last().unwrap(), &alpha);
        // solve next = Σ c_i powers_i
        let rows: Vec<Vec<u64>> = powers.iter().chain(std::iter::once(&next)).cloned().collect();
        let ker = fp.left_kernel(&rows, n);
        if let Some(v) = ker.into_iter().find(|v| *v.last().unwrap() != 0) {
            let inv = fp.inv(*v.last().unwrap());
            break v.iter().map(|&c| fp.mul(c, inv)).collect();
        }
        powers.push(next);
    };
    // roots in F_p (α^p = α so the minimal polynomial splits with distinct roots)
    let roots = split_roots(fp, &min_poly);
    for (i, &lam) in roots.iter().enumerate() {
        let mut idem = e.clone();
        for (j, &mu) in roots.iter().enumerate() {
            if i == j {
                continue;
            }
            let num: Vec<u64> = alpha.iter().zip(e.iter()).map(|(&a, &b)| fp.sub(a, fp.mul(mu, b))).collect();
            let c = fp.inv(fp.sub(lam, mu));
            let scaled: Vec<u64> = num.iter().map(|&x| fp.mul(x, c)).collect();
            idem = alg.mul(&idem, &scaled);
        }
        split(alg, frob, idem, out);
    }
}

fn ptrim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    a
}

fn prem(fp: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = fp.inv(b[db]);
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let c = fp.mul(*r.last().unwrap(), inv);
        let shift = r.len() - 1 - db;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = fp.sub(r[shift + i], fp.mul(c, bi));
        }
        r.pop();
        if r.is_empty() {
            r.push(0);
        }
    }
    ptrim(r)
}

fn pdiv(fp: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = fp.inv(b[db]);
    let mut q = vec![0u64; a.len().saturating_sub(db).max(1)];
    while r.len() > db {
        let c = fp.mul(*r.last().unwrap(), inv);
        let shift = r.len() - 1 - db;
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = fp.sub(r[shift + i], fp.mul(c, bi));
        }
        r.pop();
    }
    ptrim(q)
}

fn pmulmod(fp: &Fp, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = fp.add(out[i + j], fp.mul(x, y));
        }
    }
    prem(fp, &ptrim(out), m)
}

fn pgcd(fp: &Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut a, mut b) = (ptrim(a.to_vec()), ptrim(b.to_vec()));
    while !(b.len() == 1 && b[0] == 0) {
        let r = prem(fp, &a, &b);
        a = b;
        b = r;
    }
    let inv = fp.inv(*a.last().unwrap());
    a.iter().map(|&x| fp.mul(x, inv)).collect()
}

/// Roots of a monic polynomial over F_p that splits into distinct linear factors.
pub fn split_roots(fp: &Fp, f: &[u64]) -> Vec<u64> {
    let f = ptrim(f.to_vec());
    let d = f.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    if d == 1 {
        return vec![fp.sub(0, fp.mul(f[0], fp.inv(f[1])))];
    }
    if fp.p <= 1000 {
        let eval = |x: u64| f.iter().rev().fold(0u64, |acc, &c| fp.add(fp.mul(acc, x), c));
        return (0..fp.p).filter(|&x| eval(x) == 0).collect();
    }
    for a in 1..fp.p {
        // gcd(f, (x + a)^((p-1)/2) - 1)
        let mut acc = vec![1u64];
        let mut base = vec![a % fp.p, 1];
        let mut e = (fp.p - 1) / 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = pmulmod(fp, &acc, &base, &f);
            }
            base = pmulmod(fp, &base, &base, &f);
            e >>= 1;
        }
        acc[0] = fp.sub(acc[0], 1);
        let g = pgcd(fp, &f, &ptrim(acc));
        let dg = g.len() - 1;
        if dg > 0 && dg < d {
            let h = pdiv(fp, &f, &g);
            let mut r = split_roots(fp, &g);
            r.extend(split_roots(fp, &h));
            r.sort_unstable();
            return r;
        }
    }
    Vec::new()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_mod_large_prime() {
        let fp = Fp::new(10007);
        // (x-3)(x-5)(x-10000)
        let r = [3u64, 5, 10000];
        let mut f = vec![1u64];
        for &x in &r {
            let mut g = vec![0u64; f.len() + 1];
            for (i, &c) in f.iter().enumerate() {
                g[i + 1] = fp.add(g[i + 1], c);
                g[i] = fp.sub(g[i], fp.mul(c, x));
            }
            f = g;
        }
        assert_eq!(split_roots(&fp, &f), vec![3, 5, 10000]);
    }
}
