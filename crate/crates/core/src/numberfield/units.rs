//! Unit groups: torsion, fundamental units by bounded search, regulators.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::field::{Elt, NumberField};
use super::lattice::{fincke_pohst, gram_of, lll, transform, Enumeration};
use super::linalg;
use crate::abelian::normal_form::IntMatrix;
use crate::error::{Error, Result};
use crate::quadratic::{squarefree_kernel, units::fundamental_unit};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnitGroup {
    pub rank: usize,
    pub torsion_order: u64,
    pub torsion_generator: Elt,
    pub fundamental_units: Vec<Elt>,
    pub regulator: f64,
    /// Error bound on the regulator from floating-point evaluation.
    pub regulator_error: f64,
    /// T2 radius of the search that produced the candidates (0 when a closed form was used).
    pub search_radius: f64,
    pub method: String,
}

impl UnitGroup {
    /// Norms of the fundamental units.
    pub fn unit_norms(&self, k: &NumberField) -> Vec<i8> {
        self.fundamental_units.iter().map(|u| if k.norm(u).is_negative() { -1 } else { 1 }).collect()
    }

    /// Whether some unit has norm −1.
    pub fn has_norm_minus_one(&self, k: &NumberField) -> bool {
        k.norm(&self.torsion_generator).is_negative() || self.unit_norms(k).contains(&-1)
    }
}

/// Budget for the unit search.
#[derive(Clone, Copy, Debug)]
pub struct UnitBudget {
    pub max_nodes: usize,
    pub max_radius_doublings: u32,
}

impl Default for UnitBudget {
    fn default() -> Self {
        Self { max_nodes: 400_000, max_radius_doublings: 6 }
    }
}

impl NumberField {
    pub fn unit_rank(&self) -> usize {
        self.num_places() - 1
    }

    /// Roots of unity: elements with T2 = n.
    pub fn torsion(&self) -> (u64, Elt) {
        let n = self.degree();
        let basis: Vec<Elt> = (0..n).map(|i| self.basis_element(i)).collect();
        let reduced = self.lll_reduce(&basis);
        let g = gram_of(&reduced, self.gram());
        let mut roots: Vec<Elt> = Vec::new();
        fincke_pohst(&g, n as f64 + 1e-6, 1_000_000, &mut |x, _| {
            let v = combine(&reduced, x);
            if self.embed(&v).iter().all(|z| (z.norm() - 1.0).abs() < 1e-8) {
                roots.push(v);
            }
            true
        });
        let w = 2 * roots.len() as u64;
        let one = self.one();
        let gen = roots
            .iter()
            .flat_map(|r| [r.clone(), r.iter().map(|x| -x).collect::<Elt>()])
            .find(|r| {
                self.pow(r, w) == one && crate::arith::prime_factors_u64(w).iter().all(|&q| self.pow(r, w / q) != one)
            })
            .unwrap_or_else(|| self.scale(&one, &BigInt::from(-1)));
        (w.max(2), gen)
    }

    pub fn unit_group(&self) -> Result<UnitGroup> {
        self.unit_group_with(UnitBudget::default())
    }

    pub fn unit_group_with(&self, budget: UnitBudget) -> Result<UnitGroup> {
        let (w, zeta) = self.torsion();
        let r = self.unit_rank();
        if r == 0 {
            return Ok(UnitGroup {
                rank: 0,
                torsion_order: w,
                torsion_generator: zeta,
                fundamental_units: Vec::new(),
                regulator: 1.0,
                regulator_error: 0.0,
                search_radius: 0.0,
                method: "rank 0".into(),
            });
        }
        if self.degree() == 2 {
            return self.real_quadratic_units(w, zeta);
        }
        let mut candidates: Vec<Elt> = self.unit_hints().to_vec();
        let mut radius = 2.0 * self.degree() as f64;
        let mut best: Option<Vec<Elt>> = None;
        for _ in 0..=budget.max_radius_doublings {
            let (units, complete) = self.search_units(radius, budget.max_nodes);
            candidates.extend(units);
            // Galois conjugates of candidates are units too
            let conj: Vec<Elt> = self
                .automorphisms()
                .iter()
                .skip(1)
                .flat_map(|m| candidates.iter().map(move |u| self.apply_automorphism(m, u)))
                .collect();
            candidates.extend(conj);
            candidates.sort();
            candidates.dedup();
            if let Some(basis) = self.reduce_unit_basis(&candidates) {
                best = Some(basis);
                if !complete || radius > 64.0 * self.degree() as f64 {
                    break;
                }
                // once a full-rank basis exists, one more radius step confirms stability
                let before = self.regulator_of(best.as_ref().unwrap());
                let (more, _) = self.search_units(radius * 2.0, budget.max_nodes);
                let mut all = candidates.clone();
                all.extend(more);
                if let Some(b2) = self.reduce_unit_basis(&all) {
                    let after = self.regulator_of(&b2);
                    best = Some(b2);
                    if (after - before).abs() < 1e-6 * before {
                        radius *= 2.0;
                        break;
                    }
                    candidates = all;
                }
            }
            if !complete {
                break;
            }
            radius *= 2.0;
        }
        let basis = best.ok_or_else(|| {
            Error::Resource(format!("unit search up to T2 radius {radius:.1} did not reach rank {r}"))
        })?;
        let reg = self.regulator_of(&basis);
        Ok(UnitGroup {
            rank: r,
            torsion_order: w,
            torsion_generator: zeta,
            regulator: reg,
            regulator_error: reg * 1e-9,
            fundamental_units: basis,
            search_radius: radius,
            method: "lattice search".into(),
        })
    }

    fn real_quadratic_units(&self, w: u64, zeta: Elt) -> Result<UnitGroup> {
        // θ = (−b ± √disc(f))/2 with disc(f) = d k²
        let f = self.poly();
        let b = &f[1];
        let c = &f[0];
        let pd: BigInt = b * b - BigInt::from(4) * c;
        let pd_i64: i64 = i64::try_from(&pd).map_err(|_| Error::Unsupported("discriminant too large".into()))?;
        let d = squarefree_kernel(pd_i64)?;
        let k2 = pd_i64 / d;
        let k = (k2 as f64).sqrt().round() as i64;
        let fu = fundamental_unit(d)?;
        // √d = (2θ + b)/k in power-basis coordinates
        let sqrt_d = [BigRational::new(b.clone(), BigInt::from(k)), BigRational::new(BigInt::from(2), BigInt::from(k))];
        let den = BigInt::from(fu.denom);
        let pw = vec![
            BigRational::new(fu.x.clone(), den.clone()) + BigRational::new(fu.y.clone(), den.clone()) * &sqrt_d[0],
            BigRational::new(fu.y.clone(), den.clone()) * &sqrt_d[1],
        ];
        let coords = self.from_power_basis(&pw);
        let eps = linalg::to_integers(&coords).ok_or_else(|| Error::Inconsistent("fundamental unit not integral".into()))?;
        if !self.is_unit(&eps) {
            return Err(Error::Inconsistent("continued-fraction unit has norm other than ±1".into()));
        }
        let reg = self.regulator_of(std::slice::from_ref(&eps));
        Ok(UnitGroup {
            rank: 1,
            torsion_order: w,
            torsion_generator: zeta,
            fundamental_units: vec![eps],
            regulator: reg,
            regulator_error: reg * 1e-12,
            search_radius: 0.0,
            method: "continued fraction".into(),
        })
    }

    /// Units of T2 ≤ radius, plus quotients of elements generating the same principal ideal.
    fn search_units(&self, radius: f64, max_nodes: usize) -> (Vec<Elt>, bool) {
        let n = self.degree();
        let basis: Vec<Elt> = (0..n).map(|i| self.basis_element(i)).collect();
        let reduced = self.lll_reduce(&basis);
        let g = gram_of(&reduced, self.gram());
        let mut units = Vec::new();
        let mut by_ideal: HashMap<IntMatrix, Elt> = HashMap::new();
        let status = fincke_pohst(&g, radius, max_nodes, &mut |x, _| {
            let v = combine(&reduced, x);
            let nm = self.norm(&v).abs();
            if nm.is_one() {
                units.push(v);
            } else if nm < BigInt::from(1_000_000) {
                if let Ok(id) = self.principal_ideal(&v) {
                    match by_ideal.get(&id.hnf) {
                        Some(other) => {
                            if let Some(u) = self.div_exact(&v, other) {
                                units.push(u);
                            }
                        }
                        None => {
                            by_ideal.insert(id.hnf, v);
                        }
                    }
                }
            }
            units.len() < 4000
        });
        (units, status == Enumeration::Complete)
    }

    /// Log vector at the first r places, weighted by local degree.
    pub fn unit_log(&self, u: &[BigInt]) -> Vec<f64> {
        let r = self.unit_rank();
        self.log_embedding(u).iter().enumerate().take(r).map(|(i, l)| self.place_weight(i) * l).collect()
    }

    pub fn regulator_of(&self, units: &[Elt]) -> f64 {
        let m: Vec<Vec<f64>> = units.iter().map(|u| self.unit_log(u)).collect();
        det_f64(&m).abs()
    }

    pub fn unit_inverse(&self, u: &[BigInt]) -> Elt {
        self.div_exact(&self.one(), u).expect("units are invertible")
    }

    /// Generalized Euclid on the log lattice: returns a basis of the group generated by the
    /// candidates modulo torsion, or `None` if they do not reach full rank.
    fn reduce_unit_basis(&self, candidates: &[Elt]) -> Option<Vec<Elt>> {
        let r = self.unit_rank();
        let mut basis: Vec<Elt> = Vec::new();
        let nontorsion: Vec<&Elt> =
            candidates.iter().filter(|u| self.unit_log(u).iter().any(|x| x.abs() > 1e-6)).collect();
        // independent starting set, greedily preferring small log size
        let mut sorted = nontorsion.clone();
        sorted.sort_by(|a, b| {
            let la: f64 = self.unit_log(a).iter().map(|x| x * x).sum();
            let lb: f64 = self.unit_log(b).iter().map(|x| x * x).sum();
            la.partial_cmp(&lb).unwrap()
        });
        for u in &sorted {
            if basis.len() == r {
                break;
            }
            let mut trial = basis.clone();
            trial.push((*u).clone());
            if gram_rank(&trial.iter().map(|x| self.unit_log(x)).collect::<Vec<_>>()) == trial.len() {
                basis = trial;
            }
        }
        if basis.len() < r {
            return None;
        }
        let mut changed = true;
        let mut rounds = 0;
        while changed && rounds < 200 {
            changed = false;
            rounds += 1;
            for u in &nontorsion {
                let m: Vec<Vec<f64>> = basis.iter().map(|b| self.unit_log(b)).collect();
                let t = solve_f64(&m, &self.unit_log(u))?;
                if t.iter().all(|x| (x - x.round()).abs() < 1e-6) {
                    continue;
                }
                // u' = u · ∏ ε_j^{-round(t_j)}
                let mut v = (*u).clone();
                for (j, tj) in t.iter().enumerate() {
                    let k = tj.round() as i64;
                    if k == 0 {
                        continue;
                    }
                    let base = if k > 0 { self.unit_inverse(&basis[j]) } else { basis[j].clone() };
                    v = self.mul(&v, &self.pow(&base, k.unsigned_abs()));
                }
                let frac: Vec<f64> = t.iter().map(|x| x - x.round()).collect();
                let (j, _) = frac
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
                    .unwrap();
                basis[j] = v;
                changed = true;
            }
        }
        // LLL on the log lattice for small representatives
        Some(self.lll_units(basis))
    }

    fn lll_units(&self, basis: Vec<Elt>) -> Vec<Elt> {
        let logs: Vec<Vec<f64>> = basis.iter().map(|b| self.unit_log(b)).collect();
        let r = logs.len();
        let g: Vec<Vec<f64>> =
            (0..r).map(|i| (0..r).map(|j| logs[i].iter().zip(&logs[j]).map(|(a, b)| a * b).sum()).collect()).collect();
        let (u, _) = lll(&g);
        u.iter()
            .map(|row| {
                let mut acc = self.one();
                for (c, b) in row.iter().zip(basis.iter()) {
                    if c.is_zero() {
                        continue;
                    }
                    let e = c.magnitude().clone();
                    let e: u64 = e.try_into().unwrap_or(0);
                    let base = if c.is_negative() { self.unit_inverse(b) } else { b.clone() };
                    acc = self.mul(&acc, &self.pow(&base, e));
                }
                acc
            })
            .collect()
    }
}

pub fn combine(basis: &[Elt], x: &[i64]) -> Elt {
    let n = basis[0].len();
    let mut v = vec![BigInt::zero(); n];
    for (c, b) in x.iter().zip(basis) {
        if *c == 0 {
            continue;
        }
        let cb = BigInt::from(*c);
        for (o, y) in v.iter_mut().zip(b) {
            *o += &cb * y;
        }
    }
    v
}

pub fn combine_big(basis: &[Elt], x: &[BigInt]) -> Elt {
    transform(&vec![x.to_vec()], basis).pop().unwrap()
}

pub fn det_f64(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return 1.0;
    }
    let mut a = m.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap()).unwrap();
        if a[piv][c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        det *= a[c][c];
        for i in (c + 1)..n {
            let f = a[i][c] / a[c][c];
            for j in c..n {
                a[i][j] -= f * a[c][j];
            }
        }
    }
    det
}

fn gram_rank(rows: &[Vec<f64>]) -> usize {
    let mut a = rows.to_vec();
    let mut rank = 0;
    let cols = a.first().map_or(0, |r| r.len());
    for c in 0..cols {
        if rank == a.len() {
            break;
        }
        let piv = (rank..a.len()).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap()).unwrap();
        if a[piv][c].abs() < 1e-7 {
            continue;
        }
        a.swap(piv, rank);
        for i in (rank + 1)..a.len() {
            let f = a[i][c] / a[rank][c];
            for j in c..cols {
                a[i][j] -= f * a[rank][j];
            }
        }
        rank += 1;
    }
    rank
}

/// Solve `t · m = v` for square `m`.
fn solve_f64(m: &[Vec<f64>], v: &[f64]) -> Option<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| {
        let mut row: Vec<f64> = (0..n).map(|j| m[j][i]).collect();
        row.push(v[i]);
        row
    }).collect();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().partial_cmp(&a[j][c].abs()).unwrap())?;
        if a[piv][c].abs() < 1e-12 {
            return None;
        }
        a.swap(piv, c);
        for i in 0..n {
            if i != c {
                let f = a[i][c] / a[c][c];
                for j in c..=n {
                    a[i][j] -= f * a[c][j];
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::poly::zpoly;

    #[test]
    fn gaussian_units() {
        let k = NumberField::from_poly(zpoly(&[1, 0, 1])).unwrap();
        let u = k.unit_group().unwrap();
        assert_eq!((u.rank, u.torsion_order), (0, 4));
    }

    #[test]
    fn sqrt2_unit_matches_continued_fraction() {
        let k = NumberField::from_poly(zpoly(&[-2, 0, 1])).unwrap();
        let u = k.unit_group().unwrap();
        assert_eq!(u.rank, 1);
        assert!((u.regulator - (1.0 + 2f64.sqrt()).ln()).abs() < 1e-9);
        assert_eq!(u.torsion_order, 2);
        // lattice search agrees with the continued-fraction unit
        let (found, _) = k.search_units(20.0, 100_000);
        let basis = k.reduce_unit_basis(&found).unwrap();
        assert!((k.regulator_of(&basis) - u.regulator).abs() < 1e-9);
    }

    #[test]
    fn cyclic_cubic_regulator() {
        let mut k = NumberField::from_poly(zpoly(&[-1, -3, 0, 1])).unwrap();
        k.find_automorphisms();
        let u = k.unit_group().unwrap();
        assert_eq!(u.rank, 2);
        assert!((u.regulator - 0.849).abs() < 1e-3, "regulator {}", u.regulator);
        for e in &u.fundamental_units {
            assert!(k.is_unit(e));
        }
    }
}
