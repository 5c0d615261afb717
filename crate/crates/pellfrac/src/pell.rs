//! Fundamental units of Z[omega_d], solutions of X^2 - D Y^2 = 4, and the
//! Ankeny-Artin-Chowla residue check.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use crate::arith::{is_prime, ln_quad};
use crate::cf::{convergents, expand_omega};
use crate::error::{Error, Result};
use crate::quad::{QuadraticInteger, Ring};

/// The fundamental unit epsilon_d > 1 of Z[omega_d].
#[derive(Debug, Clone)]
pub struct FundamentalUnit {
    pub unit: QuadraticInteger,
    /// N(epsilon_d), either +1 or -1.
    pub norm: i8,
    /// Period length l(omega_d).
    pub period: usize,
}

impl FundamentalUnit {
    /// The pair (X, Y) with epsilon_d = (X + Y sqrt(D)) / 2.
    pub fn xy(&self) -> (BigInt, BigInt) {
        match self.unit.ring {
            // (X + Y sqrt(4d))/2 = X/2 + Y sqrt(d)
            Ring::Sqrt => (&self.unit.a * 2, self.unit.b.clone()),
            // (X + Y sqrt(d))/2 with X = 2a + b
            Ring::Half => (&self.unit.a * 2 + &self.unit.b, self.unit.b.clone()),
        }
    }
}

/// Builds epsilon_d from the (l-1)-th convergent of omega_d.
pub fn fundamental_unit(d: u64, ring: Ring) -> Result<FundamentalUnit> {
    let exp = expand_omega(d, ring)?;
    let l = exp.period_len();
    let c = convergents(&exp, l).pop().expect("l >= 1 convergents");
    let unit = match ring {
        Ring::Sqrt => QuadraticInteger::new(c.p.clone(), c.q.clone(), d, ring),
        Ring::Half => QuadraticInteger::new(&c.p - &c.q, c.q.clone(), d, ring),
    };
    let norm = unit.norm();
    assert!(norm.abs().to_u64() == Some(1), "xi_(l-1) is a unit");
    debug_assert!(unit.exceeds_one());
    Ok(FundamentalUnit {
        unit,
        norm: norm.to_i8().expect("norm is +-1"),
        period: l,
    })
}

/// A positive solution of X^2 - D Y^2 = 4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution {
    pub x: BigInt,
    pub y: BigInt,
    pub disc: u64,
}

impl PellSolution {
    pub fn verify(&self) -> bool {
        &self.x * &self.x - BigInt::from(self.disc) * &self.y * &self.y == BigInt::from(4)
    }
}

/// First `count` positive solutions of X^2 - D Y^2 = 4, generated as powers
/// of the norm-positive fundamental solution (epsilon_d, or its square when
/// N(epsilon_d) = -1).
pub fn pell4_solutions(d: u64, ring: Ring, count: usize) -> Result<Vec<PellSolution>> {
    let fu = fundamental_unit(d, ring)?;
    let generator = if fu.norm == 1 {
        fu.unit.clone()
    } else {
        fu.unit.mul(&fu.unit)
    };
    let disc = ring.discriminant(d);
    let mut power = generator.clone();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let (x, y) = FundamentalUnit { unit: power.clone(), norm: 1, period: fu.period }.xy();
        let sol = PellSolution { x, y, disc };
        assert!(sol.verify(), "power of the unit solves the equation exactly");
        out.push(sol);
        power = power.mul(&generator);
    }
    Ok(out)
}

/// Result of the Ankeny-Artin-Chowla check for a prime p = 1 (mod 4).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AacCheck {
    pub p: u64,
    /// u mod p, where epsilon_p = (t + u sqrt(p)) / 2.
    pub u_mod_p: u64,
    /// The conjectured u != 0 (mod p).
    pub holds: bool,
}

/// Writes epsilon_p = (t + u sqrt(p))/2 and reports u mod p.
pub fn aac_check(p: u64) -> Result<AacCheck> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(Error::WrongResidue(p));
    }
    let fu = fundamental_unit(p, Ring::Half)?;
    let (_, u) = fu.xy();
    let u_mod_p = (u % BigInt::from(p)).to_u64().expect("reduced residue");
    Ok(AacCheck { p, u_mod_p, holds: u_mod_p != 0 })
}

/// log(epsilon_d) and the period length, for the growth sandwich
/// l << log(epsilon_d) << l * omega_d.
#[derive(Debug, Clone)]
pub struct UnitSizeStats {
    pub log_unit: f64,
    pub period: usize,
}

/// Approximates log(epsilon_d) from the exact integer pair; the relative
/// error is limited by f64 arithmetic (well below 1e-12).
pub fn unit_size_stats(d: u64, ring: Ring) -> Result<UnitSizeStats> {
    let fu = fundamental_unit(d, ring)?;
    let (x, y) = fu.xy();
    Ok(UnitSizeStats {
        log_unit: ln_quad(&x, &y, ring.discriminant(d), 2),
        period: fu.period,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_square;
    use num_traits::One;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn fundamental_unit_examples() {
        let fu = fundamental_unit(2, Ring::Sqrt).unwrap();
        assert_eq!((fu.unit.a.clone(), fu.unit.b.clone()), (big(1), big(1)));
        assert_eq!(fu.norm, -1);
        assert_eq!(fu.period, 1);

        let fu = fundamental_unit(5, Ring::Half).unwrap();
        assert_eq!((fu.unit.a.clone(), fu.unit.b.clone()), (big(0), big(1)));
        assert_eq!(fu.norm, -1);

        let fu = fundamental_unit(6, Ring::Sqrt).unwrap();
        assert_eq!((fu.unit.a.clone(), fu.unit.b.clone()), (big(5), big(2)));
        assert_eq!(fu.norm, 1);

        let fu = fundamental_unit(13, Ring::Half).unwrap();
        assert_eq!((fu.unit.a.clone(), fu.unit.b.clone()), (big(1), big(1)));
        assert_eq!(fu.norm, -1);
        let (x, y) = fu.xy();
        assert_eq!((x, y), (big(3), big(1)));
    }

    #[test]
    fn pell4_examples() {
        let sols = pell4_solutions(6, Ring::Sqrt, 2).unwrap();
        assert_eq!((sols[0].x.clone(), sols[0].y.clone()), (big(10), big(2)));
        assert_eq!((sols[1].x.clone(), sols[1].y.clone()), (big(98), big(20)));
        assert_eq!(sols[0].disc, 24);

        let sols = pell4_solutions(2, Ring::Sqrt, 1).unwrap();
        assert_eq!((sols[0].x.clone(), sols[0].y.clone()), (big(6), big(2)));
        assert_eq!(sols[0].disc, 8);

        let sols = pell4_solutions(5, Ring::Half, 1).unwrap();
        assert_eq!((sols[0].x.clone(), sols[0].y.clone()), (big(3), big(1)));
        assert_eq!(sols[0].disc, 5);
    }

    #[test]
    fn pell4_solutions_verify_exactly() {
        for d in [2u64, 3, 5, 13, 61, 109] {
            let ring = if d % 4 == 1 { Ring::Half } else { Ring::Sqrt };
            for sol in pell4_solutions(d, ring, 4).unwrap() {
                assert!(sol.verify(), "d = {d}");
            }
        }
    }

    #[test]
    fn aac_examples() {
        for p in [5u64, 13, 29] {
            let r = aac_check(p).unwrap();
            assert_eq!(r.u_mod_p, 1, "p = {p}");
            assert!(r.holds);
        }
        assert_eq!(aac_check(15), Err(Error::NotPrime(15)));
        assert_eq!(aac_check(7), Err(Error::WrongResidue(7)));
    }

    #[test]
    fn aac_for_primes_below_10000() {
        for p in (5u64..10_000).step_by(4) {
            if !is_prime(p) {
                continue;
            }
            assert!(aac_check(p).unwrap().holds, "p = {p}");
        }
    }

    #[test]
    fn unit_size_examples() {
        let s = unit_size_stats(2, Ring::Sqrt).unwrap();
        assert!((s.log_unit - (1.0 + 2f64.sqrt()).ln()).abs() < 1e-12);
        assert_eq!(s.period, 1);

        let s = unit_size_stats(6, Ring::Sqrt).unwrap();
        assert!((s.log_unit - (5.0 + 2.0 * 6f64.sqrt()).ln()).abs() < 1e-12);
        assert_eq!(s.period, 2);

        let s = unit_size_stats(5, Ring::Half).unwrap();
        assert!((s.log_unit - ((1.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-12);
    }

    /// Brute-force solution scan: every (X, Y) with X^2 - D Y^2 = 4 up to
    /// the third generated solution appears in the generated list, in order.
    #[test]
    fn pell4_powers_exhaust_small_solutions() {
        for d in [2u64, 3, 5, 6, 13, 21] {
            let ring = if d % 4 == 1 { Ring::Half } else { Ring::Sqrt };
            let disc = ring.discriminant(d);
            let sols = pell4_solutions(d, ring, 3).unwrap();
            let x_cap = sols[2].x.to_u64().expect("small in this range");
            let mut scanned = Vec::new();
            // X^2 = D Y^2 + 4 >= D + 4, so X >= 3.
            for x in 3..=x_cap {
                let num = x as u128 * x as u128 - 4;
                if num % disc as u128 != 0 {
                    continue;
                }
                let yy = num / disc as u128;
                let y = (yy as f64).sqrt() as u128;
                for y in [y.saturating_sub(1), y, y + 1] {
                    if y > 0 && y * y == yy {
                        scanned.push((BigInt::from(x), BigInt::from(y)));
                    }
                }
            }
            let listed: Vec<(BigInt, BigInt)> =
                sols.iter().map(|s| (s.x.clone(), s.y.clone())).collect();
            assert_eq!(scanned, listed, "d = {d}");
        }
    }

    #[test]
    fn norm_sign_matches_period_parity() {
        for d in 2u64..2000 {
            if is_square(d) {
                continue;
            }
            for ring in [Ring::Sqrt, Ring::Half] {
                if ring == Ring::Half && d % 4 != 1 {
                    continue;
                }
                let fu = fundamental_unit(d, ring).unwrap();
                let expect = if fu.period % 2 == 0 { 1 } else { -1 };
                assert_eq!(fu.norm, expect, "d = {d} ring {ring:?}");
            }
        }
    }

    /// Effective form of l << log(epsilon_d) << l * omega_d:
    /// l <= log(eps)/log(phi) + 1 and log(eps) <= l * log(2 omega_d + 1).
    #[test]
    fn unit_size_sandwich() {
        let phi_log = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        for d in 2u64..=2000 {
            if is_square(d) {
                continue;
            }
            for ring in [Ring::Sqrt, Ring::Half] {
                if ring == Ring::Half && d % 4 != 1 {
                    continue;
                }
                let s = unit_size_stats(d, ring).unwrap();
                let l = s.period as f64;
                assert!(
                    l <= s.log_unit / phi_log + 1.0 + 1e-9,
                    "d = {d} {ring:?}: l = {l}, log eps = {}",
                    s.log_unit
                );
                let omega = match ring {
                    Ring::Sqrt => (d as f64).sqrt(),
                    Ring::Half => (1.0 + (d as f64).sqrt()) / 2.0,
                };
                assert!(
                    s.log_unit <= l * (2.0 * omega + 1.0).ln() + 1e-9,
                    "d = {d} {ring:?}"
                );
            }
        }
    }

    #[test]
    fn unit_exceeds_one_and_norm_unit() {
        for d in [19u64, 31, 46, 94, 211, 331, 421] {
            let fu = fundamental_unit(d, Ring::Sqrt).unwrap();
            assert!(fu.unit.exceeds_one());
            assert!(fu.unit.norm().abs().is_one());
        }
    }
}
