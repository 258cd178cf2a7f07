//! Fundamental units of real quadratic fields from continued fractions.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::isqrt_u64;
use crate::error::{Error, Result};

/// The fundamental unit `(x + y sqrt d) / denom` with `denom` 1 or 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalUnitData {
    pub d: i64,
    pub x: BigInt,
    pub y: BigInt,
    /// 2 when `d = 1 mod 4` (units of the maximal order may be half-integral), else 1.
    pub denom: u8,
    pub norm: i8,
    /// Period length of the continued fraction used.
    pub period: usize,
}

impl FundamentalUnitData {
    /// `x^2 - d y^2`, which must equal `norm * denom^2`.
    pub fn norm_form_value(&self) -> BigInt {
        &self.x * &self.x - BigInt::from(self.d) * &self.y * &self.y
    }

    pub fn approx(&self) -> f64 {
        let x: f64 = self.x.to_string().parse().unwrap_or(f64::INFINITY);
        let y: f64 = self.y.to_string().parse().unwrap_or(f64::INFINITY);
        (x + y * (self.d as f64).sqrt()) / self.denom as f64
    }

    /// Natural log of the unit, accurate even when it overflows f64.
    pub fn log(&self) -> f64 {
        let bits = self.x.bits();
        if bits < 900 {
            return self.approx().ln();
        }
        // log(2x / denom) since x ~ y sqrt d
        let shift = bits - 60;
        let top: f64 = (&self.x >> shift).to_string().parse().unwrap();
        top.ln() + shift as f64 * std::f64::consts::LN_2 + (2.0 / self.denom as f64).ln()
    }
}

/// Fundamental unit of the maximal order of `Q(sqrt d)`, `d > 1` squarefree.
///
/// Expands the reduced surd `w = (P0 + sqrt d)/Q0` (`Q0 = 2` for `d = 1 mod 4`)
/// over one period `l`; the unit is `q_{l-1} w + q_{l-2}` with norm `(-1)^l`.
pub fn fundamental_unit(d: i64) -> Result<FundamentalUnitData> {
    if d <= 1 {
        return Err(Error::InvalidInput(format!("fundamental unit needs d > 1, got {d}")));
    }
    let r = isqrt_u64(d as u64) as i64;
    if r * r == d {
        return Err(Error::InvalidInput(format!("{d} is a square")));
    }
    let half = d.rem_euclid(4) == 1;
    let (p0, q0) = if half {
        // largest odd b < sqrt d
        let b = if r % 2 == 1 { r } else { r - 1 };
        (b, 2)
    } else {
        (r, 1)
    };
    let (mut p, mut q) = (p0, q0);
    let (mut qa, mut qb) = (BigInt::zero(), BigInt::one()); // q_{k-1}, q_{k-2}
    let mut period = 0;
    loop {
        let a = (p + r) / q;
        let qn = BigInt::from(a) * &qa + &qb;
        qb = std::mem::replace(&mut qa, qn);
        period += 1;
        let np = a * q - p;
        let nq = (d - np * np) / q;
        p = np;
        q = nq;
        if p == p0 && q == q0 {
            break;
        }
    }
    // unit = qa * w + qb, with w = (p0 + sqrt d)/q0
    let (x, y, denom) = if half {
        (&qa * p0 + 2 * &qb, qa.clone(), 2u8)
    } else {
        (&qa * p0 + &qb, qa.clone(), 1u8)
    };
    let norm: i8 = if period % 2 == 0 { 1 } else { -1 };
    let data = FundamentalUnitData { d, x, y, denom, norm, period };
    let expected = BigInt::from(norm) * BigInt::from(denom as i64 * denom as i64);
    if data.norm_form_value() != expected {
        return Err(Error::Inconsistent(format!(
            "continued fraction unit for d={d} has norm form {} != {expected}",
            data.norm_form_value()
        )));
    }
    debug_assert!(data.x.is_positive());
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_units() {
        let u = fundamental_unit(2).unwrap();
        assert_eq!((u.x.clone(), u.y.clone(), u.denom, u.norm), (BigInt::from(1), BigInt::from(1), 1, -1));
        let u = fundamental_unit(3).unwrap();
        assert_eq!((u.x.clone(), u.y.clone(), u.norm), (BigInt::from(2), BigInt::from(1), 1));
        let u = fundamental_unit(10).unwrap();
        assert_eq!((u.x.clone(), u.y.clone(), u.norm), (BigInt::from(3), BigInt::from(1), -1));
        // (1 + sqrt 5)/2
        let u = fundamental_unit(5).unwrap();
        assert_eq!((u.x.clone(), u.y.clone(), u.denom, u.norm), (BigInt::from(1), BigInt::from(1), 2, -1));
        // (3 + sqrt 13)/2
        let u = fundamental_unit(13).unwrap();
        assert_eq!((u.x.clone(), u.y.clone(), u.norm), (BigInt::from(3), BigInt::from(1), -1));
        // 8 + 3 sqrt 7
        let u = fundamental_unit(7).unwrap();
        assert_eq!((u.x.clone(), u.y.clone(), u.norm), (BigInt::from(8), BigInt::from(3), 1));
    }

    #[test]
    fn rejects_small_d() {
        assert!(fundamental_unit(1).is_err());
        assert!(fundamental_unit(-5).is_err());
    }

    #[test]
    fn large_unit_d94() {
        // 2143295 + 221064 sqrt 94
        let u = fundamental_unit(94).unwrap();
        assert_eq!(u.x, BigInt::from(2_143_295));
        assert_eq!(u.y, BigInt::from(221_064));
    }
}
