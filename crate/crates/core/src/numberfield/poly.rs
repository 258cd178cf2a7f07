//! Integer polynomials (coefficients in ascending degree order), complex roots, factorization.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linalg::to_f64;
use crate::abelian::normal_form::determinant;
use crate::error::{Error, Result};

pub type ZPoly = Vec<BigInt>;
pub type QPoly = Vec<BigRational>;

pub fn zpoly(c: &[i64]) -> ZPoly {
    trim(c.iter().map(|&x| BigInt::from(x)).collect())
}

pub fn trim<T: Zero>(mut p: Vec<T>) -> Vec<T> {
    while p.len() > 1 && p.last().is_some_and(|x| x.is_zero()) {
        p.pop();
    }
    p
}

pub fn degree<T: Zero>(p: &[T]) -> usize {
    p.iter().rposition(|x| !x.is_zero()).unwrap_or(0)
}

pub fn is_monic(p: &[BigInt]) -> bool {
    p.last().is_some_and(|x| x.is_one())
}

pub fn derivative(p: &[BigInt]) -> ZPoly {
    if p.len() <= 1 {
        return vec![BigInt::zero()];
    }
    p.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

pub fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Exact division of integer polynomials; `None` if `b` does not divide `a` over Z.
pub fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let db = degree(b);
    let lead = &b[db];
    let mut r: Vec<BigInt> = a.to_vec();
    let da = degree(a);
    if da < db {
        return if r.iter().all(|x| x.is_zero()) { Some(vec![BigInt::zero()]) } else { None };
    }
    let mut qt = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let c = &r[k + db];
        let (qq, rem) = c.div_rem(lead);
        if !rem.is_zero() {
            return None;
        }
        for j in 0..=db {
            r[k + j] -= &qq * &b[j];
        }
        qt[k] = qq;
    }
    if r.iter().all(|x| x.is_zero()) {
        Some(trim(qt))
    } else {
        None
    }
}

pub fn eval_big(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

pub fn eval_c(p: &[BigInt], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + to_f64(c))
}

fn eval_cf(p: &[f64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Resultant by the Sylvester determinant.
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let m = degree(a);
    let n = degree(b);
    let size = m + n;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for j in 0..=m {
            rows[i][i + j] = a[m - j].clone();
        }
    }
    for i in 0..m {
        for j in 0..=n {
            rows[n + i][i + j] = b[n - j].clone();
        }
    }
    determinant(&rows)
}

/// Discriminant of a monic polynomial.
pub fn discriminant(f: &[BigInt]) -> BigInt {
    let n = degree(f);
    let r = resultant(f, &derivative(f));
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

/// Complex roots by the Aberth iteration followed by Newton polishing.
pub fn complex_roots(f: &[BigInt]) -> Vec<Complex64> {
    let n = degree(f);
    let lead = to_f64(&f[n]);
    let c: Vec<f64> = f[..=n].iter().map(|x| to_f64(x) / lead).collect();
    let dc: Vec<f64> = c.iter().enumerate().skip(1).map(|(i, &x)| x * i as f64).collect();
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius * 0.5, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let pz = eval_cf(&c, z[k]);
            let dz = eval_cf(&dc, z[k]);
            if pz.norm() == 0.0 {
                continue;
            }
            let w = pz / dz;
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = w / (Complex64::new(1.0, 0.0) - w * s);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-16 {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let step = eval_cf(&c, *zk) / eval_cf(&dc, *zk);
            if step.is_finite() {
                *zk -= step;
            }
        }
    }
    z
}

/// Roots ordered as: real roots ascending, then one root of each complex pair (positive
/// imaginary part) ascending by real part, then their conjugates in the same order.
pub fn ordered_roots(f: &[BigInt]) -> (Vec<Complex64>, usize, usize) {
    let roots = complex_roots(f);
    let tol = |z: &Complex64| 1e-7 * (1.0 + z.norm());
    let mut real: Vec<f64> = roots.iter().filter(|z| z.im.abs() < tol(z)).map(|z| z.re).collect();
    let mut upper: Vec<Complex64> = roots.iter().filter(|z| z.im >= tol(z)).cloned().collect();
    real.sort_by(|a, b| a.partial_cmp(b).unwrap());
    upper.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    let r1 = real.len();
    let r2 = upper.len();
    let mut out: Vec<Complex64> = real.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    out.extend(upper.iter().cloned());
    out.extend(upper.iter().map(|z| z.conj()));
    (out, r1, r2)
}

fn round_poly(c: &[Complex64]) -> Option<ZPoly> {
    let mut out = Vec::with_capacity(c.len());
    for z in c {
        if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) || (z.re - z.re.round()).abs() > 1e-6 * (1.0 + z.re.abs()).sqrt() {
            return None;
        }
        out.push(BigInt::from(z.re.round() as i128));
    }
    Some(out)
}

pub fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, &x) in c.iter().enumerate() {
            next[i + 1] += x;
            next[i] -= x * r;
        }
        c = next;
    }
    c
}

/// Factor a monic integer polynomial over Q (degree ≤ 12). Factors are monic, with multiplicity
/// folded into repetition.
pub fn factor_monic(f: &[BigInt]) -> Result<Vec<ZPoly>> {
    let n = degree(f);
    if !is_monic(&f[..=n]) {
        return Err(Error::InvalidInput("polynomial must be monic".into()));
    }
    if n > 12 {
        return Err(Error::Unsupported(format!("factorization of degree {n}")));
    }
    if n <= 1 {
        return Ok(vec![f[..=n].to_vec()]);
    }
    let roots = complex_roots(f);
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut rest = f[..=n].to_vec();
    let mut factors = Vec::new();
    'outer: for size in 1..=n / 2 {
        loop {
            if remaining.len() < 2 * size {
                break 'outer;
            }
            let mut found = None;
            for_each_subset(remaining.len(), size, &mut |idx: &[usize]| {
                if found.is_some() {
                    return;
                }
                let sub: Vec<Complex64> = idx.iter().map(|&i| roots[remaining[i]]).collect();
                if let Some(g) = round_poly(&poly_from_roots(&sub)) {
                    if let Some(q) = zdiv_exact(&rest, &g) {
                        found = Some((idx.to_vec(), g, q));
                    }
                }
            });
            match found {
                Some((idx, g, q)) => {
                    factors.push(g);
                    rest = q;
                    let used: Vec<usize> = idx.iter().map(|&i| remaining[i]).collect();
                    remaining.retain(|r| !used.contains(r));
                }
                None => break,
            }
        }
    }
    if degree(&rest) > 0 {
        factors.push(rest);
    }
    Ok(factors)
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

pub fn is_irreducible(f: &[BigInt]) -> Result<bool> {
    Ok(factor_monic(f)?.len() == 1)
}

/// `a * b mod f` for rational polynomials, `f` monic integral of degree n; inputs of length n.
pub fn qmul_mod(a: &[BigRational], b: &[BigRational], f: &[BigInt]) -> QPoly {
    let n = degree(f);
    let mut prod = vec![BigRational::zero(); 2 * n - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    for k in (n..prod.len()).rev() {
        let c = std::mem::take(&mut prod[k]);
        if c.is_zero() {
            continue;
        }
        for j in 0..n {
            let t = &c * BigRational::from_integer(f[j].clone());
            prod[k - n + j] -= t;
        }
    }
    prod.truncate(n);
    prod
}

/// Render with `x` as variable, highest degree first.
pub fn render(p: &[BigInt]) -> String {
    let d = degree(p);
    let mut s = String::new();
    for k in (0..=d).rev() {
        let c = &p[k];
        if c.is_zero() && d > 0 {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{k}"),
        };
        if k == 0 || !a.is_one() {
            s.push_str(&a.to_string());
        }
        s.push_str(&mono);
    }
    s
}

/// Parse `x^3 - 3x - 1` style input (also accepts `*` and no spaces).
pub fn parse(s: &str) -> Result<ZPoly> {
    let t: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    if t.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut terms = Vec::new();
    let mut cur = String::new();
    for (i, ch) in t.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
            terms.push(std::mem::take(&mut cur));
        }
        cur.push(ch);
    }
    terms.push(cur);
    for term in terms {
        let (sign, body) = match term.strip_prefix('-') {
            Some(b) => (-1, b),
            None => (1, term.strip_prefix('+').unwrap_or(&term)),
        };
        let bad = || Error::Parse(format!("bad polynomial term `{term}`"));
        let (coef, exp) = match body.find('x') {
            None => (body.parse::<BigInt>().map_err(|_| bad())?, 0usize),
            Some(pos) => {
                let c = if pos == 0 { BigInt::one() } else { body[..pos].parse::<BigInt>().map_err(|_| bad())? };
                let rest = &body[pos + 1..];
                let e = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
                };
                (c, e)
            }
        };
        if exp > 64 {
            return Err(bad());
        }
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, BigInt::zero());
        }
        coeffs[exp] += coef * sign;
    }
    Ok(trim(coeffs))
}

pub fn to_i64_vec(p: &[BigInt]) -> Option<Vec<i64>> {
    p.iter().map(|c| c.to_i64()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_and_roots() {
        assert_eq!(discriminant(&zpoly(&[-1, -3, 0, 1])), BigInt::from(81));
        assert_eq!(discriminant(&zpoly(&[1, 0, 1])), BigInt::from(-4));
        assert_eq!(discriminant(&zpoly(&[-1, -2, 1, 1])), BigInt::from(49));
        let (r, r1, r2) = ordered_roots(&zpoly(&[1, 0, 1]));
        assert_eq!((r1, r2), (0, 1));
        assert!((r[0].im - 1.0).abs() < 1e-12);
    }

    #[test]
    fn factoring() {
        // (x^2+1)(x^2-2)
        let f = zpoly(&[-2, 0, -1, 0, 1]);
        let fs = factor_monic(&f).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(is_irreducible(&zpoly(&[-1, -3, 0, 1])).unwrap());
        assert!(!is_irreducible(&zpoly(&[-1, 0, 1])).unwrap());
    }

    #[test]
    fn parse_render_round_trip() {
        let p = parse("x^3 - 3x - 1").unwrap();
        assert_eq!(p, zpoly(&[-1, -3, 0, 1]));
        assert_eq!(render(&p), "x^3 - 3x - 1");
        assert_eq!(parse(&render(&zpoly(&[5, 0, -2, 1]))).unwrap(), zpoly(&[5, 0, -2, 1]));
    }
}
