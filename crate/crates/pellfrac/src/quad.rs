//! Quadratic integers a + b*omega_d and exact values a + b*sqrt(d) with
//! rational coefficients. All comparisons against sqrt(d) are decided by
//! integer squaring; no floating point.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::is_square;
use crate::error::{Error, Result};

/// Which order of Q(sqrt(d)) the expansion lives in.
///
/// `Sqrt` expands omega = sqrt(d) (discriminant 4d); `Half` expands
/// omega = (1 + sqrt(d))/2 and requires d = 1 (mod 4) (discriminant d).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Sqrt,
    Half,
}

impl Ring {
    pub fn from_index(i: u8) -> Option<Ring> {
        match i {
            0 => Some(Ring::Sqrt),
            1 => Some(Ring::Half),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Ring::Sqrt => 0,
            Ring::Half => 1,
        }
    }

    /// Discriminant of the order: 4d for Z[sqrt(d)], d for Z[omega_d].
    pub fn discriminant(self, d: u64) -> u64 {
        match self {
            Ring::Sqrt => 4 * d,
            Ring::Half => d,
        }
    }

    /// Validates that (d, ring) describes a genuine quadratic irrational
    /// within the range the surd state machine supports.
    pub fn check(self, d: u64) -> Result<()> {
        if is_square(d) {
            return Err(Error::SquareInput(d));
        }
        if self == Ring::Half && d % 4 != 1 {
            return Err(Error::RingMismatch(d));
        }
        if d >= 1 << 62 {
            return Err(Error::InputTooLarge(d));
        }
        Ok(())
    }
}

/// The sign s in the congruence x^2 = s (mod y). It equals the norm
/// N(p - q omega_d) of the approximations attached to the key (y, x).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NormSign {
    Minus,
    Plus,
}

impl NormSign {
    pub fn value(self) -> i8 {
        match self {
            NormSign::Minus => -1,
            NormSign::Plus => 1,
        }
    }

    pub fn from_value(v: i8) -> Option<NormSign> {
        match v {
            -1 => Some(NormSign::Minus),
            1 => Some(NormSign::Plus),
            _ => None,
        }
    }
}

impl fmt::Display for NormSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSign::Minus => write!(f, "-1"),
            NormSign::Plus => write!(f, "+1"),
        }
    }
}

/// Element a + b*omega_d of the order Z[omega_d].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticInteger {
    pub a: BigInt,
    pub b: BigInt,
    pub d: u64,
    pub ring: Ring,
}

impl QuadraticInteger {
    pub fn new(a: BigInt, b: BigInt, d: u64, ring: Ring) -> Self {
        QuadraticInteger { a, b, d, ring }
    }

    /// Exact norm: a^2 - b^2 d for ring 0, a^2 + ab + b^2 (1-d)/4 for ring 1.
    pub fn norm(&self) -> BigInt {
        match self.ring {
            Ring::Sqrt => &self.a * &self.a - &self.b * &self.b * BigInt::from(self.d),
            Ring::Half => {
                let quarter = (BigInt::one() - BigInt::from(self.d)) / BigInt::from(4);
                &self.a * &self.a + &self.a * &self.b + &self.b * &self.b * quarter
            }
        }
    }

    /// Conjugate: omega -> -sqrt(d) or 1 - omega.
    pub fn conjugate(&self) -> QuadraticInteger {
        match self.ring {
            Ring::Sqrt => QuadraticInteger::new(self.a.clone(), -&self.b, self.d, self.ring),
            Ring::Half => QuadraticInteger::new(&self.a + &self.b, -&self.b, self.d, self.ring),
        }
    }

    /// Product in the same order.
    pub fn mul(&self, rhs: &QuadraticInteger) -> QuadraticInteger {
        assert_eq!(self.d, rhs.d);
        assert_eq!(self.ring, rhs.ring);
        match self.ring {
            // (a + b s)(a' + b' s) with s^2 = d
            Ring::Sqrt => QuadraticInteger::new(
                &self.a * &rhs.a + &self.b * &rhs.b * BigInt::from(self.d),
                &self.a * &rhs.b + &self.b * &rhs.a,
                self.d,
                self.ring,
            ),
            // omega^2 = omega + (d-1)/4
            Ring::Half => {
                let k = (BigInt::from(self.d) - BigInt::one()) / BigInt::from(4);
                let bb = &self.b * &rhs.b;
                QuadraticInteger::new(
                    &self.a * &rhs.a + &bb * &k,
                    &self.a * &rhs.b + &self.b * &rhs.a + bb,
                    self.d,
                    self.ring,
                )
            }
        }
    }

    /// The pair (A, B) with value = (A + B*sqrt(d)) / 2.
    pub fn to_sqrt_pair(&self) -> (BigInt, BigInt) {
        match self.ring {
            Ring::Sqrt => (&self.a * 2, &self.b * 2),
            Ring::Half => (&self.a * 2 + &self.b, self.b.clone()),
        }
    }

    /// Sign of the real embedding (sqrt(d) > 0).
    pub fn sign(&self) -> Ordering {
        let (a, b) = self.to_sqrt_pair();
        QuadValue::new(
            BigRational::from(a),
            BigRational::from(b),
            self.d,
        )
        .sign()
    }

    /// True when the element exceeds 1 under the real embedding.
    pub fn exceeds_one(&self) -> bool {
        let (a, b) = self.to_sqrt_pair();
        let v = QuadValue::new(
            BigRational::from(a - BigInt::from(2)),
            BigRational::from(b),
            self.d,
        );
        v.sign() == Ordering::Greater
    }
}

impl fmt::Display for QuadraticInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ring {
            Ring::Sqrt => write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d),
            Ring::Half => write!(f, "{} + {}*(1+sqrt({}))/2", self.a, self.b, self.d),
        }
    }
}

/// Exact element a + b*sqrt(d) of Q(sqrt(d)) with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadValue {
    pub a: BigRational,
    pub b: BigRational,
    pub d: u64,
}

impl QuadValue {
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Self {
        QuadValue { a, b, d }
    }

    pub fn from_rational(a: BigRational, d: u64) -> Self {
        QuadValue::new(a, BigRational::zero(), d)
    }

    pub fn zero(d: u64) -> Self {
        QuadValue::new(BigRational::zero(), BigRational::zero(), d)
    }

    pub fn add(&self, rhs: &QuadValue) -> QuadValue {
        assert_eq!(self.d, rhs.d);
        QuadValue::new(&self.a + &rhs.a, &self.b + &rhs.b, self.d)
    }

    pub fn sub(&self, rhs: &QuadValue) -> QuadValue {
        assert_eq!(self.d, rhs.d);
        QuadValue::new(&self.a - &rhs.a, &self.b - &rhs.b, self.d)
    }

    pub fn neg(&self) -> QuadValue {
        QuadValue::new(-self.a.clone(), -self.b.clone(), self.d)
    }

    /// Exact sign of a + b*sqrt(d), decided by squaring.
    pub fn sign(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            // Opposite signs: compare a^2 with b^2 d; the larger magnitude wins.
            _ => {
                let lhs = &self.a * &self.a;
                let rhs = &self.b * &self.b * BigRational::from(BigInt::from(self.d));
                match lhs.cmp(&rhs) {
                    Ordering::Equal => Ordering::Equal, // impossible for non-square d unless b = 0
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> QuadValue {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn cmp_value(&self, rhs: &QuadValue) -> Ordering {
        self.sub(rhs).sign()
    }

    /// Approximate numeric value, for display only.
    pub fn to_f64(&self) -> f64 {
        let r = |x: &BigRational| num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN);
        r(&self.a) + r(&self.b) * (self.d as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn norms_by_ring() {
        let x = QuadraticInteger::new(BigInt::from(5), BigInt::from(2), 6, Ring::Sqrt);
        assert_eq!(x.norm(), BigInt::from(1));
        let w = QuadraticInteger::new(BigInt::from(0), BigInt::from(1), 5, Ring::Half);
        assert_eq!(w.norm(), BigInt::from(-1));
        let y = QuadraticInteger::new(BigInt::from(1), BigInt::from(1), 13, Ring::Half);
        assert_eq!(y.norm(), BigInt::from(-1));
    }

    #[test]
    fn norm_is_multiplicative() {
        let x = QuadraticInteger::new(BigInt::from(3), BigInt::from(1), 13, Ring::Half);
        let y = QuadraticInteger::new(BigInt::from(-2), BigInt::from(5), 13, Ring::Half);
        assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn conjugate_norm() {
        let x = QuadraticInteger::new(BigInt::from(7), BigInt::from(-3), 19, Ring::Sqrt);
        assert_eq!(x.conjugate().norm(), x.norm());
        assert_eq!(x.mul(&x.conjugate()).a, x.norm());
    }

    #[test]
    fn exact_sign_near_tie() {
        // 577/408 is slightly above sqrt(2): 577^2 = 332929, 2*408^2 = 332928.
        let v = QuadValue::new(rat(577, 408), rat(-1, 1), 2);
        assert_eq!(v.sign(), Ordering::Greater);
        let w = QuadValue::new(rat(-577, 408), rat(1, 1), 2);
        assert_eq!(w.sign(), Ordering::Less);
    }

    #[test]
    fn embedding_comparisons() {
        // 1 + sqrt(2) > 1, golden ratio > 1, but conjugates are small.
        let u = QuadraticInteger::new(BigInt::from(1), BigInt::from(1), 2, Ring::Sqrt);
        assert!(u.exceeds_one());
        assert!(!u.conjugate().exceeds_one());
        let g = QuadraticInteger::new(BigInt::from(0), BigInt::from(1), 5, Ring::Half);
        assert!(g.exceeds_one());
    }
}
