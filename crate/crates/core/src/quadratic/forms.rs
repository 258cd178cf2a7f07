//! Binary quadratic forms of fundamental discriminant and their narrow class groups.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::abelian::{AbelianGroup, GroupElement};
use crate::arith::{isqrt_u64, primes_up_to};
use crate::error::{Error, Result};

/// The form `a x^2 + b xy + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

pub fn is_discriminant(d: i64) -> bool {
    d.rem_euclid(4) <= 1 && !is_square(d)
}

fn is_square(d: i64) -> bool {
    d >= 0 && {
        let r = isqrt_u64(d as u64) as i64;
        r * r == d
    }
}

impl BinaryForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    /// Form with leading coefficient `a` and middle coefficient `b`; `c` is forced by `disc`.
    pub fn from_ab(a: i64, b: i64, disc: i64) -> Self {
        let num = b as i128 * b as i128 - disc as i128;
        debug_assert_eq!(num % (4 * a as i128), 0);
        Self { a, b, c: (num / (4 * a as i128)) as i64 }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn principal(disc: i64) -> Self {
        let b = disc.rem_euclid(2);
        Self::from_ab(1, b, disc)
    }

    pub fn evaluate(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    /// Dirichlet composition (Shanks' formula), unreduced.
    pub fn compose_raw(&self, other: &Self) -> Self {
        let disc = self.discriminant() as i128;
        let (a1, b1) = (self.a as i128, self.b as i128);
        let (a2, b2) = (other.a as i128, other.b as i128);
        let s = (b1 + b2) / 2;
        let g1 = a1.extended_gcd(&a2);
        let g = g1.gcd.extended_gcd(&s);
        let e = g.gcd.abs();
        let sign = g.gcd.signum();
        // u*a1 + v*a2 + w*s = e
        let u = g1.x * g.x * sign;
        let v = g1.y * g.x * sign;
        let w = g.y * sign;
        let big_a = a1 * a2 / (e * e);
        let num = u * a1 * b2 + v * a2 * b1 + w * ((b1 * b2 + disc) / 2);
        let mut b = num / e;
        let m = 2 * big_a.abs();
        b = b.rem_euclid(m);
        if b > big_a.abs() {
            b -= m;
        }
        let c = (b * b - disc) / (4 * big_a);
        Self { a: big_a as i64, b: b as i64, c: c as i64 }
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.a, b: -self.b, c: self.c }
    }

    /// Reduction of a positive definite form.
    pub fn reduce_definite(&self) -> Self {
        let (mut a, mut b, mut c) = (self.a as i128, self.b as i128, self.c as i128);
        let disc = b * b - 4 * a * c;
        debug_assert!(disc < 0 && a > 0);
        loop {
            // b into (-a, a]
            let m = 2 * a;
            let mut nb = b.rem_euclid(m);
            if nb > a {
                nb -= m;
            }
            if nb != b {
                b = nb;
                c = (b * b - disc) / (4 * a);
            }
            if a > c {
                std::mem::swap(&mut a, &mut c);
                b = -b;
                continue;
            }
            break;
        }
        if (a == c || a == b.abs()) && b < 0 {
            b = -b;
        }
        Self { a: a as i64, b: b as i64, c: c as i64 }
    }

    pub fn is_reduced_indefinite(&self) -> bool {
        let disc = self.discriminant();
        let r = isqrt_u64(disc as u64) as i64;
        let a2 = 2 * self.a.abs();
        self.b > 0 && self.b <= r && r - self.b < a2 && a2 <= r + self.b
    }

    /// One step of the indefinite reduction operator.
    pub fn rho(&self) -> Self {
        let disc = self.discriminant() as i128;
        let r = isqrt_u64(disc as u64) as i128;
        let c = self.c as i128;
        let cabs = c.abs();
        let m = 2 * cabs;
        let b = -(self.b as i128);
        let nb = if cabs > r {
            let mut x = b.rem_euclid(m);
            if x > cabs {
                x -= m;
            }
            x
        } else {
            r - (r - b).rem_euclid(m)
        };
        let na = (nb * nb - disc) / (4 * c);
        Self { a: self.c, b: nb as i64, c: na as i64 }
    }

    pub fn reduce_indefinite(&self) -> Self {
        let mut f = *self;
        let mut guard = 0;
        while !f.is_reduced_indefinite() {
            f = f.rho();
            guard += 1;
            assert!(guard < 10_000, "indefinite reduction did not terminate for {self}");
        }
        f
    }

    pub fn reduce(&self) -> Self {
        if self.discriminant() < 0 {
            self.reduce_definite()
        } else {
            self.reduce_indefinite()
        }
    }
}

/// Form of the ideal `pZ + ((-b + sqrt D)/2)Z` for the smallest admissible `b`
/// in `[0, 2p)`; `None` when `p` is inert.
pub fn prime_form(disc: i64, p: i64) -> Option<BinaryForm> {
    let m = 4 * p as i128;
    (0..2 * p).find_map(|b| {
        let bb = b as i128;
        if (bb * bb - disc as i128).rem_euclid(m) == 0 {
            Some(BinaryForm::from_ab(p, b, disc))
        } else {
            None
        }
    })
}

fn reduced_definite_forms(disc: i64) -> Vec<BinaryForm> {
    let n = -disc;
    let amax = isqrt_u64((n / 3) as u64) as i64 + 1;
    let mut out = Vec::new();
    for a in 1..=amax {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            out.push(BinaryForm { a, b, c });
        }
    }
    out
}

fn reduced_indefinite_forms(disc: i64) -> Vec<BinaryForm> {
    let r = isqrt_u64(disc as u64) as i64;
    let mut out = Vec::new();
    for b in 1..=r {
        if (b - disc).rem_euclid(2) != 0 {
            continue;
        }
        let n = (disc - b * b) / 4;
        if n <= 0 {
            continue;
        }
        // reduced forms satisfy 2|a| <= r + b
        for a in 1..=n.min(r) {
            if n % a != 0 {
                continue;
            }
            for sa in [a, -a] {
                let f = BinaryForm { a: sa, b, c: -n / sa };
                if f.is_reduced_indefinite() {
                    out.push(f);
                }
            }
        }
    }
    out
}

/// The narrow class group of a fundamental discriminant, with a full
/// discrete-log table over reduced forms.
#[derive(Clone, Debug)]
pub struct FormClassGroup {
    pub disc: i64,
    /// Canonical representative of each class.
    pub classes: Vec<BinaryForm>,
    /// Every reduced form mapped to its class index.
    index: HashMap<BinaryForm, usize>,
    pub generators: Vec<BinaryForm>,
    pub group: AbelianGroup,
    coords: Vec<GroupElement>,
}

impl FormClassGroup {
    pub fn new(disc: i64) -> Result<Self> {
        if !is_discriminant(disc) {
            return Err(Error::InvalidInput(format!("{disc} is not a nonsquare discriminant (0 or 1 mod 4)")));
        }
        let (classes, index) = if disc < 0 {
            let forms = reduced_definite_forms(disc);
            let index = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
            (forms, index)
        } else {
            let forms = reduced_indefinite_forms(disc);
            let mut index: HashMap<BinaryForm, usize> = HashMap::new();
            let mut classes = Vec::new();
            for f in forms {
                if index.contains_key(&f) {
                    continue;
                }
                let mut cycle = vec![f];
                let mut g = f.rho();
                while g != f {
                    cycle.push(g);
                    g = g.rho();
                }
                let id = classes.len();
                classes.push(*cycle.iter().min().unwrap());
                for g in cycle {
                    index.insert(g, id);
                }
            }
            (classes, index)
        };
        let mut fg = Self {
            disc,
            classes,
            index,
            generators: Vec::new(),
            group: AbelianGroup::trivial(),
            coords: Vec::new(),
        };
        fg.build_group();
        Ok(fg)
    }

    pub fn class_number(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, f: &BinaryForm) -> usize {
        let r = f.reduce();
        *self
            .index
            .get(&r)
            .unwrap_or_else(|| panic!("reduced form {r} missing from class table of {}", self.disc))
    }

    fn compose_class(&self, x: usize, y: usize) -> usize {
        self.class_of(&self.classes[x].compose_raw(&self.classes[y]))
    }

    fn build_group(&mut self) {
        let h = self.classes.len();
        let principal = self.class_of(&BinaryForm::principal(self.disc));
        let mut known: HashMap<usize, Vec<i64>> = HashMap::new();
        known.insert(principal, Vec::new());
        let mut gens: Vec<BinaryForm> = Vec::new();
        let mut relations: Vec<Vec<i64>> = Vec::new();

        let bound = (self.disc.unsigned_abs() as f64).sqrt() as u64 + 2;
        let mut candidates: Vec<BinaryForm> = primes_up_to(bound.max(3))
            .into_iter()
            .filter_map(|p| prime_form(self.disc, p as i64))
            .collect();
        candidates.extend(self.classes.iter().copied());

        for cand in candidates {
            if known.len() == h {
                break;
            }
            let g = self.class_of(&cand);
            if known.contains_key(&g) {
                continue;
            }
            let j = gens.len();
            let mut k = 1;
            let mut x = g;
            while !known.contains_key(&x) {
                x = self.compose_class(x, g);
                k += 1;
            }
            let mut rel = known[&x].iter().map(|c| -c).collect::<Vec<_>>();
            rel.resize(j + 1, 0);
            rel[j] += k;
            relations.push(rel);
            gens.push(self.classes[g]);
            let old: Vec<(usize, Vec<i64>)> = known.iter().map(|(a, b)| (*a, b.clone())).collect();
            let mut power = g;
            for i in 1..k {
                for (cls, c) in &old {
                    let mut nc = c.clone();
                    nc.resize(j + 1, 0);
                    nc[j] = i;
                    known.insert(self.compose_class(*cls, power), nc);
                }
                power = self.compose_class(power, g);
            }
        }
        assert_eq!(known.len(), h, "class group generation incomplete for {}", self.disc);
        let n = gens.len();
        let rel: Vec<Vec<i64>> = relations
            .into_iter()
            .map(|mut r| {
                r.resize(n, 0);
                r
            })
            .collect();
        self.group = AbelianGroup::from_i64(n, &rel).expect("square relations");
        self.coords = (0..h)
            .map(|i| {
                let mut c = known[&i].clone();
                c.resize(n, 0);
                GroupElement::from_i64(&c)
            })
            .collect();
        self.generators = gens;
    }

    /// Coordinates of the class of `f` over [`Self::generators`].
    pub fn dlog(&self, f: &BinaryForm) -> GroupElement {
        self.coords[self.class_of(f)].clone()
    }

    pub fn dlog_class(&self, idx: usize) -> GroupElement {
        self.coords[idx].clone()
    }

    pub fn form_of_prime(&self, p: i64) -> Option<BinaryForm> {
        prime_form(self.disc, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_forms_of_minus_20() {
        let g = FormClassGroup::new(-20).unwrap();
        let mut cls = g.classes.clone();
        cls.sort();
        assert_eq!(cls, vec![BinaryForm::new(1, 0, 5), BinaryForm::new(2, 2, 3)]);
        assert_eq!(g.group.invariants_u64(), vec![2]);
    }

    #[test]
    fn class_groups_small() {
        assert_eq!(FormClassGroup::new(-4).unwrap().group.invariants_u64(), Vec::<u64>::new());
        assert_eq!(FormClassGroup::new(-84).unwrap().group.invariants_u64(), vec![2, 2]);
        assert_eq!(FormClassGroup::new(-23).unwrap().group.invariants_u64(), vec![3]);
        // h+(12) = 2, h+(40) = 2
        assert_eq!(FormClassGroup::new(12).unwrap().class_number(), 2);
        assert_eq!(FormClassGroup::new(40).unwrap().class_number(), 2);
        assert_eq!(FormClassGroup::new(5).unwrap().class_number(), 1);
    }

    #[test]
    fn bad_discriminant() {
        assert!(FormClassGroup::new(-6).is_err());
        assert!(FormClassGroup::new(9).is_err());
    }

    #[test]
    fn composition_is_group_law() {
        let g = FormClassGroup::new(-56).unwrap();
        let e = BinaryForm::principal(-56);
        for f in &g.classes {
            assert_eq!(g.class_of(&f.compose_raw(&e)), g.class_of(f));
            assert_eq!(g.class_of(&f.compose_raw(&f.inverse())), g.class_of(&e));
        }
    }
}
