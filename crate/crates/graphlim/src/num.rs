//! Scalar abstraction and exact-rational helpers.
//!
//! Core numeric routines are generic over [`Scalar`] so the same code runs
//! on exact rationals (the trusted path) and on `f64` (the certificate
//! search). The crate-root alias [`crate::Rat`] picks the exact
//! instantiation.

use num_bigint::BigInt;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Rat;

/// Field-like scalar: enough structure for densities, subset transforms and
/// symmetric elimination. Implemented by `BigRational` and `f64`.
pub trait Scalar: Num + Signed + Clone + PartialOrd + std::fmt::Debug {}

impl<T: Num + Signed + Clone + PartialOrd + std::fmt::Debug> Scalar for T {}

/// Parse `"p/q"` or `"p"` into an exact rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str_radix(num, 10)
        .map_err(|_| Error::InvalidInput(format!("bad rational numerator in {s:?}")))?;
    let d = BigInt::from_str_radix(den, 10)
        .map_err(|_| Error::InvalidInput(format!("bad rational denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Format a rational as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Float view of an exact rational.
pub fn rat_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn rat_of(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// by continued-fraction convergents. Values below `zero_eps` in magnitude
/// collapse to zero.
pub fn rationalize(x: f64, max_den: u64, zero_eps: f64) -> Rat {
    if !x.is_finite() || x.abs() < zero_eps {
        return Rat::zero();
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    // convergents p/q of the continued fraction of v
    let (mut p0, mut q0, mut p1, mut q1) = (1u128, 0u128, v.floor() as u128, 1u128);
    v -= v.floor();
    while v > 1e-15 && q1 <= max_den as u128 {
        v = 1.0 / v;
        let a = v.floor();
        if a > 1e18 {
            break;
        }
        v -= a;
        let a = a as u128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den as u128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    let r = Rat::new(BigInt::from(p1), BigInt::from(q1));
    if neg {
        -r
    } else {
        r
    }
}

/// In-place Möbius transform over the subset lattice, superset convention:
/// `xs[m] <- sum over s ⊇ m of (-1)^|s\m| xs[s]`. Length must be a power of
/// two; bit `e` of an index marks membership of element `e`.
pub fn superset_mobius_in_place<S: Scalar>(xs: &mut [S]) {
    let n = xs.len();
    assert!(n.is_power_of_two());
    let mut e = 1;
    while e < n {
        for m in 0..n {
            if m & e == 0 {
                let hi = xs[m | e].clone();
                xs[m] = xs[m].clone() - hi;
            }
        }
        e <<= 1;
    }
}

/// Inverse of [`superset_mobius_in_place`]: `xs[m] <- sum over s ⊇ m of xs[s]`.
pub fn superset_zeta_in_place<S: Scalar>(xs: &mut [S]) {
    let n = xs.len();
    assert!(n.is_power_of_two());
    let mut e = 1;
    while e < n {
        for m in 0..n {
            if m & e == 0 {
                let hi = xs[m | e].clone();
                xs[m] = xs[m].clone() + hi;
            }
        }
        e <<= 1;
    }
}
