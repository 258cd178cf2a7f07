//! LLL reduction against a floating Gram matrix and Fincke-Pohst enumeration.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::abelian::normal_form::IntMatrix;

pub type Gram = Vec<Vec<f64>>;

/// Gram matrix of integer row vectors `b` under the quadratic form `g` on coordinates.
pub fn gram_of(b: &[Vec<BigInt>], g: &Gram) -> Gram {
    let n = b.len();
    let bf: Vec<Vec<f64>> = b.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::MAX)).collect()).collect();
    let m = g.len();
    let gb: Vec<Vec<f64>> = bf
        .iter()
        .map(|r| (0..m).map(|j| (0..m).map(|k| r[k] * g[k][j]).sum()).collect())
        .collect();
    (0..n).map(|i| (0..n).map(|j| (0..m).map(|k| gb[i][k] * bf[j][k]).sum()).collect()).collect()
}

fn gso(g: &Gram) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = g.len();
    let mut mu = vec![vec![0.0; n]; n];
    let mut bstar = vec![0.0; n];
    for i in 0..n {
        for j in 0..i {
            let mut s = g[i][j];
            for l in 0..j {
                s -= mu[j][l] * mu[i][l] * bstar[l];
            }
            mu[i][j] = if bstar[j] != 0.0 { s / bstar[j] } else { 0.0 };
        }
        let mut s = g[i][i];
        for l in 0..i {
            s -= mu[i][l] * mu[i][l] * bstar[l];
        }
        bstar[i] = s;
    }
    (mu, bstar)
}

/// LLL-reduce the lattice with Gram matrix `g` (δ = 0.99). Returns the unimodular transform `U`
/// (new basis = U · old basis) and the new Gram matrix.
pub fn lll(g: &Gram) -> (IntMatrix, Gram) {
    let n = g.len();
    let mut g = g.clone();
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut k = 1;
    let mut iterations = 0usize;
    while k < n && iterations < 100_000 {
        iterations += 1;
        for j in (0..k).rev() {
            let (mu, _) = gso(&g);
            let q = mu[k][j].round();
            if q != 0.0 {
                // b_k -= q b_j
                for l in 0..n {
                    g[k][l] -= q * g[j][l];
                }
                g[k][k] -= q * g[k][j];
                for l in 0..n {
                    g[l][k] = g[k][l];
                }
                let qi = q as i64;
                let uj = u[j].clone();
                for (x, y) in u[k].iter_mut().zip(uj) {
                    *x -= qi * y;
                }
            }
        }
        let (mu, bstar) = gso(&g);
        if bstar[k] < (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bstar[k - 1] {
            g.swap(k, k - 1);
            for row in g.iter_mut() {
                row.swap(k, k - 1);
            }
            u.swap(k, k - 1);
            k = (k - 1).max(1);
        } else {
            k += 1;
        }
    }
    let um: IntMatrix = u.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    (um, g)
}

/// Apply a transform to integer rows.
pub fn transform(u: &IntMatrix, rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let m = rows.first().map_or(0, |r| r.len());
    u.iter()
        .map(|ur| {
            let mut out = vec![BigInt::zero(); m];
            for (c, row) in ur.iter().zip(rows) {
                if c.is_zero() {
                    continue;
                }
                for (o, x) in out.iter_mut().zip(row) {
                    *o += c * x;
                }
            }
            out
        })
        .collect()
}

/// Outcome of an enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enumeration {
    Complete,
    Stopped,
    BudgetExceeded,
}

/// Enumerate nonzero integer vectors `x` (one of each ± pair) with `xᵀ g x ≤ bound`. The callback
/// returns `false` to stop early. `max_nodes` bounds the search tree.
pub fn fincke_pohst(g: &Gram, bound: f64, max_nodes: usize, f: &mut dyn FnMut(&[i64], f64) -> bool) -> Enumeration {
    let n = g.len();
    // Q(x) = Σ q_ii (x_i + Σ_{j>i} q_ij x_j)^2
    let mut q = g.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for k in (i + 1)..n {
            for l in k..n {
                q[k][l] -= q[k][i] * q[i][l];
            }
        }
    }
    if (0..n).any(|i| q[i][i] <= 0.0 || !q[i][i].is_finite()) {
        return Enumeration::BudgetExceeded;
    }
    let mut x = vec![0i64; n];
    let mut nodes = 0usize;
    let mut state = Enumeration::Complete;
    rec(n, &q, bound, 0.0, &mut x, &mut nodes, max_nodes, &mut state, f);
    state
}

#[allow(clippy::too_many_arguments)]
fn rec(
    i: usize,
    q: &Gram,
    bound: f64,
    partial: f64,
    x: &mut Vec<i64>,
    nodes: &mut usize,
    max_nodes: usize,
    state: &mut Enumeration,
    f: &mut dyn FnMut(&[i64], f64) -> bool,
) {
    if *state != Enumeration::Complete {
        return;
    }
    if i == 0 {
        // sign normalization: last nonzero coordinate positive
        match x.iter().rev().find(|&&v| v != 0) {
            Some(&v) if v > 0
                && !f(x, partial) => {
                    *state = Enumeration::Stopped;
                }
            _ => {}
        }
        return;
    }
    let i = i - 1;
    let n = x.len();
    let c: f64 = -((i + 1)..n).map(|j| q[i][j] * x[j] as f64).sum::<f64>();
    let rem = bound - partial;
    if rem < 0.0 {
        return;
    }
    let r = (rem / q[i][i]).sqrt() * (1.0 + 1e-9) + 1e-9;
    let lo = (c - r).ceil() as i64;
    let hi = (c + r).floor() as i64;
    // if every higher coordinate is zero, only nonnegative x_i are needed
    let top_zero = x[(i + 1)..].iter().all(|&v| v == 0);
    let lo = if top_zero { lo.max(0) } else { lo };
    for v in lo..=hi {
        *nodes += 1;
        if *nodes > max_nodes {
            *state = Enumeration::BudgetExceeded;
            return;
        }
        x[i] = v;
        let d = v as f64 - c;
        rec(i, q, bound, partial + q[i][i] * d * d, x, nodes, max_nodes, state, f);
        if *state != Enumeration::Complete {
            x[i] = 0;
            return;
        }
    }
    x[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_z2_points() {
        let g = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let mut count = 0;
        let st = fincke_pohst(&g, 2.0, 10_000, &mut |_, _| {
            count += 1;
            true
        });
        assert_eq!(st, Enumeration::Complete);
        // (1,0),(0,1),(1,1),(-1,1) up to sign
        assert_eq!(count, 4);
    }

    #[test]
    fn lll_reduces_skewed_basis() {
        // basis (1,0),(100,1) in the standard form
        let b = vec![vec![BigInt::from(1), BigInt::from(0)], vec![BigInt::from(100), BigInt::from(1)]];
        let id = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let (u, g) = lll(&gram_of(&b, &id));
        let nb = transform(&u, &b);
        assert!(g[1][1] <= 1.0 + 1e-9);
        assert_eq!(nb[1].iter().map(|x| x.to_i64().unwrap().abs()).sum::<i64>(), 1);
    }
}
