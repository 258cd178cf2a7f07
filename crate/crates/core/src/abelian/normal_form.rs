//! Hermite and Smith normal forms of integer matrices (row convention).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::xgcd;

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn to_big_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix, inner: usize, cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            s += &row[k] * &b[k][j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mul(v: &[BigInt], m: &IntMatrix, cols: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); cols];
    for (k, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for j in 0..cols {
            if !m[k][j].is_zero() {
                out[j] += x * &m[k][j];
            }
        }
    }
    out
}

fn axpy(target: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

/// Combine two rows so that the pivot column of `a` becomes gcd and `b`'s becomes zero.
fn gcd_combine(a: &mut Vec<BigInt>, b: &mut Vec<BigInt>, col: usize) {
    let (g, x, y) = xgcd(&a[col], &b[col]);
    let ua = &a[col] / &g;
    let ub = &b[col] / &g;
    let new_a: Vec<BigInt> = a.iter().zip(b.iter()).map(|(p, q)| &x * p + &y * q).collect();
    let new_b: Vec<BigInt> = a.iter().zip(b.iter()).map(|(p, q)| &ub * p - &ua * q).collect();
    *a = new_a;
    *b = new_b;
}

/// Row-style Hermite normal form: echelon rows with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hnf(rows: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    hnf_inner(rows, ncols, None)
}

/// HNF of a lattice known to contain `modulus * Z^ncols`; intermediate entries stay bounded.
pub fn hnf_mod(rows: &[Vec<BigInt>], ncols: usize, modulus: &BigInt) -> IntMatrix {
    let modulus = modulus.abs();
    assert!(!modulus.is_zero());
    let mut all: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.mod_floor(&modulus)).collect())
        .collect();
    for i in 0..ncols {
        let mut e = vec![BigInt::zero(); ncols];
        e[i] = modulus.clone();
        all.push(e);
    }
    hnf_inner(&all, ncols, Some(&modulus))
}

fn hnf_inner(rows: &[Vec<BigInt>], ncols: usize, modulus: Option<&BigInt>) -> IntMatrix {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut k = 0;
    for col in 0..ncols {
        if k >= a.len() {
            break;
        }
        // bring a nonzero entry to row k
        let Some(first) = (k..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(k, first);
        for i in (k + 1)..a.len() {
            if a[i][col].is_zero() {
                continue;
            }
            let (left, right) = a.split_at_mut(i);
            gcd_combine(&mut left[k], &mut right[0], col);
            if let Some(m) = modulus {
                for x in right[0].iter_mut().skip(col + 1) {
                    *x = x.mod_floor(m);
                }
            }
        }
        if a[k][col].is_negative() {
            for x in a[k].iter_mut() {
                *x = -&*x;
            }
        }
        if let Some(m) = modulus {
            // the pivot row may be reduced too, as long as the pivot itself stays
            for x in a[k].iter_mut().skip(col + 1) {
                *x = x.mod_floor(m);
            }
        }
        let pivot = a[k][col].clone();
        let pivot_row = a[k].clone();
        for i in 0..k {
            let q = a[i][col].div_floor(&pivot);
            axpy(&mut a[i], &q, &pivot_row);
        }
        k += 1;
        a.retain(|r| r.iter().any(|x| !x.is_zero()));
        if k > a.len() {
            k = a.len();
        }
    }
    a.truncate(k);
    a
}

/// Incremental HNF of a full-width lattice: rows indexed by pivot column.
#[derive(Clone, Debug)]
pub struct IncrementalHnf {
    ncols: usize,
    rows: Vec<Option<Vec<BigInt>>>,
}

impl IncrementalHnf {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, rows: vec![None; ncols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ncols
    }

    /// Product of the pivots when full rank, i.e. the index of the lattice.
    pub fn determinant(&self) -> Option<BigInt> {
        if !self.is_full_rank() {
            return None;
        }
        Some(self.rows.iter().map(|r| r.as_ref().unwrap()[self.pivot_of(r)].clone()).product())
    }

    fn pivot_of(&self, r: &Option<Vec<BigInt>>) -> usize {
        r.as_ref().unwrap().iter().position(|x| !x.is_zero()).unwrap()
    }

    /// Inserts a vector; returns true when the lattice grew.
    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        let det = self.determinant();
        let mut v: Vec<BigInt> = v.to_vec();
        if let Some(d) = &det {
            for x in v.iter_mut() {
                *x = x.mod_floor(d);
            }
        }
        for col in 0..self.ncols {
            if v[col].is_zero() {
                continue;
            }
            match self.rows[col].take() {
                None => {
                    if v[col].is_negative() {
                        v.iter_mut().for_each(|x| *x = -&*x);
                    }
                    self.rows[col] = Some(v);
                    self.reduce();
                    return true;
                }
                Some(mut b) => {
                    let before = b[col].clone();
                    if (&v[col] % &b[col]).is_zero() {
                        let q = &v[col] / &b[col];
                        axpy(&mut v, &q, &b);
                    } else {
                        gcd_combine(&mut b, &mut v, col);
                        if b[col].is_negative() {
                            b.iter_mut().for_each(|x| *x = -&*x);
                        }
                    }
                    let grew = b[col] != before;
                    self.rows[col] = Some(b);
                    if let Some(d) = &det {
                        for x in v.iter_mut() {
                            *x = x.mod_floor(d);
                        }
                    }
                    if grew {
                        // continue inserting the remainder, then report growth
                        self.insert(&v);
                        self.reduce();
                        return true;
                    }
                }
            }
        }
        false
    }

    fn reduce(&mut self) {
        for col in (0..self.ncols).rev() {
            let Some(pr) = self.rows[col].clone() else { continue };
            let pivot = pr[col].clone();
            for i in 0..col {
                if let Some(r) = self.rows[i].as_mut() {
                    let q = r[col].div_floor(&pivot);
                    axpy(r, &q, &pr);
                }
            }
        }
    }

    pub fn basis(&self) -> IntMatrix {
        self.rows.iter().flatten().cloned().collect()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        let mut v = v.to_vec();
        for col in 0..self.ncols {
            if v[col].is_zero() {
                continue;
            }
            match &self.rows[col] {
                None => return false,
                Some(b) => {
                    if !(&v[col] % &b[col]).is_zero() {
                        return false;
                    }
                    let q = &v[col] / &b[col];
                    axpy(&mut v, &q, b);
                }
            }
        }
        true
    }
}

/// Smith normal form with transforms: `u * a * v = diag`, `v_inv = v^{-1}`.
#[derive(Clone, Debug)]
pub struct Snf {
    /// Diagonal entries, length min(rows, cols), nonnegative, each dividing the next
    /// (zeros at the end).
    pub diag: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

pub fn snf(a: &[Vec<BigInt>], ncols: usize) -> Snf {
    let nrows = a.len();
    let mut m: IntMatrix = a.to_vec();
    let mut u = identity(nrows);
    let mut v = identity(ncols);
    let mut v_inv = identity(ncols);

    let swap_cols = |m: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, i: usize, j: usize| {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        v_inv.swap(i, j);
    };
    // column j -= q * column i
    let col_op = |m: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, j: usize, i: usize, q: &BigInt| {
        if q.is_zero() {
            return;
        }
        for row in m.iter_mut() {
            let t = &row[i] * q;
            row[j] -= t;
        }
        for row in v.iter_mut() {
            let t = &row[i] * q;
            row[j] -= t;
        }
        // inverse: row i += q * row j
        let rj = v_inv[j].clone();
        for (x, y) in v_inv[i].iter_mut().zip(rj.iter()) {
            *x += q * y;
        }
    };

    let steps = nrows.min(ncols);
    let mut t = 0;
    while t < steps {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !m[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        u.swap(t, bi);
        swap_cols(&mut m, &mut v, &mut v_inv, t, bj);

        loop {
            let mut dirty = false;
            for i in (t + 1)..nrows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                let (top, rest) = m.split_at_mut(i);
                axpy(&mut rest[0], &q, &top[t]);
                let (ut, ur) = u.split_at_mut(i);
                axpy(&mut ur[0], &q, &ut[t]);
                if !m[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in (t + 1)..ncols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                col_op(&mut m, &mut v, &mut v_inv, j, t, &q);
                if !m[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest nonzero entry of row t / column t to the pivot
                let mut best = (t, t);
                for i in t..nrows {
                    if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..ncols {
                    if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    m.swap(t, best.0);
                    u.swap(t, best.0);
                } else if best.1 != t {
                    swap_cols(&mut m, &mut v, &mut v_inv, t, best.1);
                }
                continue;
            }
            // divisibility condition on the remaining block
            let mut offender = None;
            'scan: for i in (t + 1)..nrows {
                for j in (t + 1)..ncols {
                    if !(&m[i][j] % &m[t][t]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    // row t += row i
                    let ri = m[i].clone();
                    for (x, y) in m[t].iter_mut().zip(ri.iter()) {
                        *x += y;
                    }
                    let ui = u[i].clone();
                    for (x, y) in u[t].iter_mut().zip(ui.iter()) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if m[t][t].is_negative() {
            for x in m[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
        t += 1;
    }
    let diag = (0..steps).map(|i| m[i][i].clone()).collect();
    Snf { diag, u, v, v_inv }
}

/// Determinant of a square integer matrix (Bareiss fraction-free elimination).
pub fn determinant(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: IntMatrix = a.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(p) = ((k + 1)..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let val = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = val;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> IntMatrix {
        to_big_matrix(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn check_snf(a: &IntMatrix, ncols: usize) -> Snf {
        let s = snf(a, ncols);
        let prod = mat_mul(&mat_mul(&s.u, a, a.len(), ncols), &s.v, ncols, ncols);
        for (i, row) in prod.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i == j && i < s.diag.len() {
                    assert_eq!(*x, s.diag[i]);
                } else {
                    assert!(x.is_zero(), "off-diagonal entry {x} at ({i},{j})");
                }
            }
        }
        assert_eq!(mat_mul(&s.v, &s.v_inv, ncols, ncols), identity(ncols));
        for w in s.diag.windows(2) {
            if !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
        s
    }

    #[test]
    fn snf_of_coprime_diagonal() {
        let s = check_snf(&big(&[&[2, 0], &[0, 3]]), 2);
        assert_eq!(s.diag, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn snf_dense() {
        let a = big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = check_snf(&a, 3);
        assert_eq!(s.diag, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn hnf_basic() {
        let h = hnf(&big(&[&[2, 4], &[3, 5]]), 2);
        assert_eq!(h, big(&[&[1, 1], &[0, 2]]));
        let hm = hnf_mod(&big(&[&[2, 4], &[3, 5]]), 2, &BigInt::from(2));
        assert_eq!(hm, h);
    }

    #[test]
    fn incremental_matches_batch() {
        let rows = big(&[&[4, 6, 2], &[0, 3, 9], &[2, 2, 2], &[5, 1, 7]]);
        let mut inc = IncrementalHnf::new(3);
        for r in &rows {
            inc.insert(r);
        }
        assert_eq!(inc.basis(), hnf(&rows, 3));
        assert!(inc.contains(&rows[3]));
    }

    #[test]
    fn bareiss_determinant() {
        assert_eq!(determinant(&big(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(determinant(&big(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
    }
}
