//! Arithmetic in a prime field `Z/pZ` with `p < 2^63`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Default prime `2^62 - 57`.
pub const DEFAULT_PRIME: u64 = (1u64 << 62) - 57;
/// A second prime used for cross-checks, `2^61 - 1`.
pub const SECOND_PRIME: u64 = (1u64 << 61) - 1;

#[inline]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn neg(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

/// Modular inverse by the extended Euclidean algorithm; `None` for 0.
pub fn inv(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p as i128) as u64)
}

pub fn from_i64(v: i64, p: u64) -> u64 {
    (v as i128).rem_euclid(p as i128) as u64
}

pub fn from_bigint(v: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    v.mod_floor(&m).to_u64().expect("reduced residue fits")
}

pub fn from_biguint(v: &BigUint, p: u64) -> u64 {
    (v % p).to_u64().expect("reduced residue fits")
}

/// Reduces a rational; `None` if the denominator vanishes mod `p`.
pub fn from_rational(v: &BigRational, p: u64) -> Option<u64> {
    let n = from_bigint(v.numer(), p);
    let d = inv(from_bigint(v.denom(), p), p)?;
    Some(mul(n, d, p))
}

/// Symmetric lift of a residue to `(-p/2, p/2]`.
pub fn symmetric(v: u64, p: u64) -> i128 {
    if v > p / 2 {
        v as i128 - p as i128
    } else {
        v as i128
    }
}

/// Rational reconstruction: finds `a/b` with `|a|, |b| <= sqrt(m/2)` and
/// `a = b*v mod m`.
pub fn rational_reconstruction(v: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), v.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::from(1));
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1) = (r1, r2);
        (t0, t1) = (t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if (&r1 - &t1 * v).mod_floor(m) != BigInt::zero() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Miller-Rabin with a deterministic base set valid for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(sp) {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}
