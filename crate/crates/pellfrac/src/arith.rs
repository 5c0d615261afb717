//! Small integer helpers: square detection, modular arithmetic, primality,
//! and logarithms of big integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    n.isqrt()
}

/// True when `n` is a perfect square.
pub fn is_square(n: u64) -> bool {
    let s = n.isqrt();
    s * s == n
}

/// True when the nonnegative big integer `n` is a perfect square.
pub fn is_square_big(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.sqrt();
    &s * &s == *n
}

/// Euclidean remainder in [0, m).
pub fn mod_euclid(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a % m;
    if r.is_negative() {
        r + m.abs()
    } else {
        r
    }
}

/// Multiplicative inverse of `a` modulo `m`, when it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd != 1u32.into() {
        return None;
    }
    Some(mod_euclid(&e.x, m))
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    // This base set decides primality for all n < 2^64.
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Natural logarithm of a positive big integer, accurate to f64 precision.
pub fn ln_big(n: &BigInt) -> f64 {
    assert!(n.is_positive(), "ln of nonpositive integer");
    if let Some(v) = n.to_u64() {
        return (v as f64).ln();
    }
    let bits = n.bits();
    let shift = bits - 63;
    let top = (n >> shift).to_u64().expect("63-bit window");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of (a + b*sqrt(d))/den for nonnegative a, b (not both zero).
pub fn ln_quad(a: &BigInt, b: &BigInt, d: u64, den: u64) -> f64 {
    assert!(!a.is_negative() && !b.is_negative());
    let part = |x: &BigInt, add: f64| {
        if x.is_zero() {
            f64::NEG_INFINITY
        } else {
            ln_big(x) + add
        }
    };
    let la = part(a, 0.0);
    let lb = part(b, 0.5 * (d as f64).ln());
    let (hi, lo) = if la >= lb { (la, lb) } else { (lb, la) };
    // ln(e^hi + e^lo), stable for widely separated magnitudes.
    let sum = if lo == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    };
    sum - (den as f64).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::One;

    #[test]
    fn square_detection() {
        assert!(is_square(0));
        assert!(is_square(1));
        assert!(is_square(4));
        assert!(is_square(9_999_802_000_980_100)); // 99999010^2
        assert!(!is_square(2));
        assert!(!is_square(99));
    }

    #[test]
    fn primality_small_and_large() {
        let primes = [2u64, 3, 5, 13, 29, 101, 1_000_003, 4_294_967_311];
        for p in primes {
            assert!(is_prime(p), "{p} is prime");
        }
        let composites = [1u64, 9, 15, 1_000_001, 4_294_967_297];
        for c in composites {
            assert!(!is_prime(c), "{c} is composite");
        }
    }

    #[test]
    fn inverse_mod() {
        let inv = mod_inverse(&BigInt::from(2), &BigInt::from(5)).unwrap();
        assert_eq!(inv, BigInt::from(3));
        assert!(mod_inverse(&BigInt::from(2), &BigInt::from(4)).is_none());
    }

    #[test]
    fn big_log_accuracy() {
        let n = BigInt::one() << 200;
        let expect = 200.0 * std::f64::consts::LN_2;
        assert!((ln_big(&n) - expect).abs() < 1e-9 * expect);
        // (3 + 2*sqrt(2)) = (1 + sqrt(2))^2
        let v = ln_quad(&BigInt::from(3), &BigInt::from(2), 2, 1);
        assert!((v - 2.0 * (1.0 + 2f64.sqrt()).ln()).abs() < 1e-12);
    }
}
