//! Exact rational linear algebra and linear algebra over prime fields.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{mul_mod, pow_mod};

pub type QMatrix = Vec<Vec<BigRational>>;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qz(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Solve `x * a = b` for a square invertible rational matrix `a` (row convention).
pub fn solve_left(a: &QMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    // transpose: a^T x^T = b^T
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| a[j][i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    gauss_solve(&mut m, n)
}

/// Solve `x * a = b` for a `k × n` matrix `a` of rank k; `None` if inconsistent.
pub fn solve_left_rect(a: &QMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let k = a.len();
    let n = b.len();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..k).map(|j| a[j][i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut r = 0;
    for col in 0..k {
        let piv = (r..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(r, piv);
        let inv = m[r][col].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = m[r].clone();
        for i in 0..n {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for (x, y) in m[i].iter_mut().zip(prow.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
        r += 1;
    }
    if m[k..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some(m[..k].iter().map(|row| row[k].clone()).collect())
}

fn gauss_solve(m: &mut [Vec<BigRational>], n: usize) -> Option<Vec<BigRational>> {
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = m[col].clone();
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for (x, y) in m[r].iter_mut().zip(prow.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(m.iter().map(|row| row[n].clone()).collect())
}

pub fn inverse(a: &QMatrix) -> Option<QMatrix> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        let prow = m[col].clone();
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for (x, y) in m[r].iter_mut().zip(prow.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn qdet(a: &QMatrix) -> BigRational {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        det = &det * &m[col][col];
        let inv = m[col][col].recip();
        for r in (col + 1)..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            let prow = m[col].clone();
            for (x, y) in m[r].iter_mut().zip(prow.iter()) {
                *x = &*x - &f * y;
            }
        }
    }
    det
}

pub fn common_denominator(v: &[BigRational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()))
}

pub fn to_integers(v: &[BigRational]) -> Option<Vec<BigInt>> {
    v.iter().map(|x| if x.is_integer() { Some(x.to_integer()) } else { None }).collect()
}

pub fn to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or_else(|| if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

pub fn q_to_f64(x: &BigRational) -> f64 {
    to_f64(x.numer()) / to_f64(x.denom())
}

/// Dense matrices over F_p, p < 2^32.
#[derive(Clone, Debug)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        Self { p }
    }

    pub fn reduce(&self, x: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = ((x % &m) + &m) % &m;
        r.to_u64().unwrap()
    }

    pub fn inv(&self, a: u64) -> u64 {
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&self, m: &mut Vec<Vec<u64>>) -> Vec<usize> {
        let rows = m.len();
        if rows == 0 {
            return Vec::new();
        }
        let cols = m[0].len();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
            m.swap(r, piv);
            let inv = self.inv(m[r][c]);
            for x in m[r].iter_mut() {
                *x = self.mul(*x, inv);
            }
            let prow = m[r].clone();
            for i in 0..rows {
                if i != r && m[i][c] != 0 {
                    let f = m[i][c];
                    for (x, y) in m[i].iter_mut().zip(prow.iter()) {
                        *x = self.sub(*x, self.mul(f, *y));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.truncate(r);
        pivots
    }

    /// Basis of `{x : x * m = 0}` for the row-vector map given by `m` (rows = images).
    pub fn left_kernel(&self, m: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
        let nrows = m.len();
        // solve m^T x = 0
        let mut t: Vec<Vec<u64>> = (0..ncols).map(|j| (0..nrows).map(|i| m[i][j]).collect()).collect();
        let pivots = if ncols == 0 { Vec::new() } else { self.rref(&mut t) };
        let free: Vec<usize> = (0..nrows).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![0u64; nrows];
                x[fc] = 1;
                for (row, &pc) in t.iter().zip(pivots.iter()) {
                    x[pc] = self.sub(0, row[fc]);
                }
                x
            })
            .collect()
    }

    /// Row-vector times matrix.
    pub fn vec_mat(&self, v: &[u64], m: &[Vec<u64>]) -> Vec<u64> {
        let cols = if m.is_empty() { 0 } else { m[0].len() };
        let mut out = vec![0u64; cols];
        for (i, &x) in v.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for j in 0..cols {
                out[j] = self.add(out[j], self.mul(x, m[i][j]));
            }
        }
        out
    }

    pub fn mat_mul(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        a.iter().map(|row| self.vec_mat(row, b)).collect()
    }

    pub fn rank(&self, m: &[Vec<u64>]) -> usize {
        let mut t = m.to_vec();
        self.rref(&mut t).len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_solve_and_inverse() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve_left(&a, &[q(5), q(10)]).unwrap();
        // x * a = (5, 10)
        assert_eq!(&x[0] * q(2) + &x[1] * q(1), q(5));
        assert_eq!(&x[0] * q(1) + &x[1] * q(3), q(10));
        let inv = inverse(&a).unwrap();
        assert_eq!(qdet(&a), q(5));
        assert_eq!(&inv[0][0] * q(5), q(3));
    }

    #[test]
    fn fp_kernel() {
        let f = Fp::new(5);
        // rows are images: e0 -> (1,2), e1 -> (2,4): kernel spanned by (3,1)... 2*e0 - e1
        let m = vec![vec![1, 2], vec![2, 4]];
        let k = f.left_kernel(&m, 2);
        assert_eq!(k.len(), 1);
        assert_eq!(f.vec_mat(&k[0], &m), vec![0, 0]);
    }
}
