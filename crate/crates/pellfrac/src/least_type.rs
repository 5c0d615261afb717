//! Reduced families D-bar(y, x) with the period-deficient least element
//! removed, the induced partition of non-squares, and the least-type
//! classification of square-free d.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::arith::{is_square, mod_euclid};
use crate::cf::expand_omega;
use crate::error::{Error, Result};
use crate::inverse::{InverseKey, Progression};
use crate::quad::{NormSign, Ring};
use crate::symmetry::{continuant, SymmetricSeq};

/// A reduced family: the quadratic progression of a key with its least
/// element discarded when that element's period falls short of n+1.
#[derive(Debug, Clone)]
pub struct FamilyRecord {
    pub key: InverseKey,
    pub palindrome: SymmetricSeq,
    pub progression: Progression,
    /// The removed least element, present when its period was below n+1.
    pub discarded_least: Option<BigInt>,
    /// Period of the discarded element, recorded for diagnostics.
    pub discarded_period: Option<usize>,
    min_element: BigInt,
}

impl FamilyRecord {
    /// Smallest element of the reduced family.
    pub fn min_element(&self) -> &BigInt {
        &self.min_element
    }

    /// First `count` retained elements, strictly increasing.
    pub fn elements(&self, count: usize) -> Vec<BigInt> {
        let with_lead = self.progression.elements(count + 1).pairs;
        let skip = usize::from(self.discarded_least.is_some());
        with_lead.into_iter().skip(skip).take(count).map(|(_, d)| d).collect()
    }

    /// Retained elements up to `bound`.
    pub fn elements_up_to(&self, bound: &BigInt) -> Vec<BigInt> {
        let skip = usize::from(self.discarded_least.is_some());
        self.progression
            .elements_up_to(bound)
            .pairs
            .into_iter()
            .skip(skip)
            .map(|(_, d)| d)
            .collect()
    }
}

/// Builds the reduced family of a key, resolving the palindrome from the key.
pub fn reduced_family(key: &InverseKey) -> Result<FamilyRecord> {
    let palindrome = key.palindrome()?;
    reduced_family_with_palindrome(key.clone(), palindrome)
}

/// Core construction when the palindrome is already known (classification
/// reads it off the expansion instead of re-deriving it from x/y).
pub fn reduced_family_with_palindrome(
    key: InverseKey,
    palindrome: SymmetricSeq,
) -> Result<FamilyRecord> {
    let progression = Progression::new(key.clone());
    let needed_period = palindrome.len() + 1;

    // First two valid elements decide the discard and the minimum.
    let lead = progression.elements(2).pairs;
    let first = &lead[0].1;
    let (discarded_least, discarded_period) = match first.to_u64() {
        Some(d1) => {
            let l = expand_omega(d1, key.ring)?.period_len();
            debug_assert!(
                needed_period.is_multiple_of(l),
                "member period divides the palindrome period"
            );
            if l < needed_period {
                (Some(first.clone()), Some(l))
            } else {
                (None, None)
            }
        }
        // Beyond u64, decide the period of the written expansion
        // [a0; pal, 2 a0 - ring] as a cyclic-word property instead of
        // expanding: the minimal period is the least divisor p of n+1
        // under which the word is shift-invariant. The one family whose
        // progression parameter is not floor(omega) has y = 1 and stays
        // far below this branch.
        None => {
            debug_assert!(palindrome.terms() != [1]);
            let last: BigInt = &lead[0].0 * 2 - BigInt::from(key.ring.index());
            let word: Vec<BigInt> = palindrome
                .terms()
                .iter()
                .map(|&a| BigInt::from(a))
                .chain(std::iter::once(last))
                .collect();
            match minimal_cyclic_period(&word) {
                p if p < needed_period => (Some(first.clone()), Some(p)),
                _ => (None, None),
            }
        }
    };
    let min_element = if discarded_least.is_some() {
        lead[1].1.clone()
    } else {
        lead[0].1.clone()
    };
    Ok(FamilyRecord {
        key,
        palindrome,
        progression,
        discarded_least,
        discarded_period,
        min_element,
    })
}

/// Least divisor p of the word length such that the word equals itself
/// shifted cyclically by p.
fn minimal_cyclic_period(word: &[BigInt]) -> usize {
    let n = word.len();
    for p in 1..n {
        if n.is_multiple_of(p) && (0..n).all(|i| word[i] == word[(i + p) % n]) {
            return p;
        }
    }
    n
}

/// Where a non-square d sits inside its unique reduced family.
#[derive(Debug, Clone)]
pub struct Classification {
    pub d: u64,
    pub ring: Ring,
    pub key: InverseKey,
    pub palindrome: SymmetricSeq,
    pub is_least: bool,
}

/// Expands omega_d, reads the key (q_{l-1}, r_{l-1}) off the interior
/// palindrome, and decides whether d is the least element of the reduced
/// family of that key.
pub fn classify(d: u64, ring: Ring) -> Result<Classification> {
    let exp = expand_omega(d, ring)?;
    let palindrome =
        SymmetricSeq::new(exp.palindrome().to_vec()).expect("interior block is a palindrome");
    let m = continuant(palindrome.terms()).expect("palindrome terms are positive");
    let y = m.q_n;
    let x = mod_euclid(&m.r_n, &y);
    let sign = if exp.period_len() % 2 == 0 {
        NormSign::Plus
    } else {
        NormSign::Minus
    };
    let key = InverseKey::new(y, x, sign, ring).expect("expansion key is admissible");
    let family = reduced_family_with_palindrome(key.clone(), palindrome.clone())?;

    // Forward-inverse consistency: d is the member of its family at the
    // progression parameter floor(p_{l-1}/q_{l-1}). That floor exceeds
    // floor(omega_d) by one exactly when the palindrome is [1], whose
    // rational [0,1] = 1/1 reduces to the key (1, 0).
    let a0_param = BigInt::from(exp.a0) + u64::from(palindrome.terms() == [1]);
    debug_assert_eq!(
        mod_euclid(
            &(&a0_param - &family.progression.frak_a),
            &family.progression.y_tilde
        ),
        BigInt::from(0u32)
    );
    debug_assert_eq!(family.progression.d_at(&a0_param), BigInt::from(d));

    let is_least = *family.min_element() == BigInt::from(d);
    Ok(Classification { d, ring, key, palindrome, is_least })
}

/// Least-type test for a square-free d > 1: ring 0 for d = 2, 3 (mod 4) and
/// ring 1 for d = 1 (mod 4).
pub fn is_least_type_field(d: u64) -> Result<bool> {
    if is_square(d) {
        return Err(Error::SquareInput(d));
    }
    let mut p = 2u64;
    while p * p <= d {
        if d.is_multiple_of(p * p) {
            return Err(Error::NotSquareFree(d));
        }
        p += 1;
    }
    let ring = if d % 4 == 1 { Ring::Half } else { Ring::Sqrt };
    Ok(classify(d, ring)?.is_least)
}

/// The size mechanism behind epsilon_d << d for non-least d: the floor a0
/// exceeds the common difference, hence d > y-tilde squared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonLeastBound {
    pub d: u64,
    pub a0: u64,
    pub y_tilde: BigInt,
    /// a0 > y-tilde
    pub a0_exceeds: bool,
    /// d > y-tilde^2
    pub d_exceeds_square: bool,
    pub passed: bool,
}

/// Verifies a0 > y-tilde and d > y-tilde^2 for a non-least d.
pub fn non_least_unit_bound(d: u64, ring: Ring) -> Result<NonLeastBound> {
    let c = classify(d, ring)?;
    if c.is_least {
        return Err(Error::IsLeast(d));
    }
    let a0 = expand_omega(d, ring)?.a0;
    let y_tilde = c.key.y_tilde();
    let a0_exceeds = BigInt::from(a0) > y_tilde;
    let d_exceeds_square = BigInt::from(d) > &y_tilde * &y_tilde;
    Ok(NonLeastBound {
        d,
        a0,
        y_tilde,
        a0_exceeds,
        d_exceeds_square,
        passed: a0_exceeds && d_exceeds_square,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn key(y: i64, x: i64, sign: NormSign, ring: Ring) -> InverseKey {
        InverseKey::new(big(y), big(x), sign, ring).unwrap()
    }

    #[test]
    fn reduced_family_examples() {
        let f = reduced_family(&key(2, 1, NormSign::Plus, Ring::Sqrt)).unwrap();
        assert_eq!(f.discarded_least, Some(big(2)));
        assert_eq!(f.discarded_period, Some(1));
        assert_eq!(f.elements(3), vec![big(6), big(12), big(20)]);

        let f = reduced_family(&key(5, 2, NormSign::Minus, Ring::Sqrt)).unwrap();
        assert_eq!(f.discarded_least, Some(big(2)));
        assert_eq!(f.elements(2), vec![big(41), big(130)]);

        let f = reduced_family(&key(1, 0, NormSign::Minus, Ring::Sqrt)).unwrap();
        assert_eq!(f.discarded_least, None);
        assert_eq!(f.elements(4), vec![big(2), big(5), big(10), big(17)]);

        let f = reduced_family(&key(2, 1, NormSign::Minus, Ring::Half)).unwrap();
        assert_eq!(f.discarded_least, Some(big(5)));
        assert_eq!(f.elements(2), vec![big(17), big(37)]);
    }

    #[test]
    fn classify_examples() {
        let c = classify(41, Ring::Sqrt).unwrap();
        assert_eq!((c.key.y.clone(), c.key.x.clone()), (big(5), big(2)));
        assert_eq!(c.palindrome.terms(), &[2, 2]);
        assert!(c.is_least);

        let c = classify(130, Ring::Sqrt).unwrap();
        assert_eq!((c.key.y.clone(), c.key.x.clone()), (big(5), big(2)));
        assert!(!c.is_least);

        let c = classify(13, Ring::Half).unwrap();
        assert_eq!((c.key.y.clone(), c.key.x.clone()), (big(1), big(0)));
        assert!(c.palindrome.is_empty());
        assert!(!c.is_least); // 5 is the retained least of that family

        let c = classify(6, Ring::Sqrt).unwrap();
        assert_eq!((c.key.y.clone(), c.key.x.clone()), (big(2), big(1)));
        assert!(c.is_least); // 2 was discarded from the (2,1) family
    }

    #[test]
    fn least_type_examples() {
        assert!(is_least_type_field(6).unwrap());
        assert!(!is_least_type_field(13).unwrap());
        assert!(is_least_type_field(41).unwrap());
        assert_eq!(is_least_type_field(12), Err(Error::NotSquareFree(12)));
        assert_eq!(is_least_type_field(16), Err(Error::SquareInput(16)));
    }

    #[test]
    fn non_least_bound_examples() {
        let b = non_least_unit_bound(130, Ring::Sqrt).unwrap();
        assert_eq!(b.a0, 11);
        assert_eq!(b.y_tilde, big(5));
        assert!(b.passed);

        let b = non_least_unit_bound(12, Ring::Sqrt).unwrap();
        assert_eq!(b.a0, 3);
        assert_eq!(b.y_tilde, big(1));
        assert!(b.passed);

        assert_eq!(
            non_least_unit_bound(41, Ring::Sqrt),
            Err(Error::IsLeast(41))
        );
    }

    /// Keys whose first element exceeds u64 take the cyclic-word route for
    /// the discard decision. The key (10^12, 1, +, 0) scales up (4, 1):
    /// its written word is (y, 2 y-tilde) = (y, y), so the first element is
    /// deficient with period 1, exactly like d = 5 under (4, 1).
    #[test]
    fn astronomic_keys_use_word_period() {
        // Small analogue first: (4, 1) discards 5 because sqrt(5) = [2; (4)].
        let small = reduced_family(&key(4, 1, NormSign::Plus, Ring::Sqrt)).unwrap();
        assert_eq!(small.discarded_least, Some(big(5)));
        assert_eq!(small.discarded_period, Some(1));

        let y: BigInt = BigInt::from(1_000_000_000_000u64);
        let k = InverseKey::new(y.clone(), BigInt::from(1), NormSign::Plus, Ring::Sqrt).unwrap();
        let f = reduced_family(&k).unwrap();
        let y_tilde = &y / 2;
        // e1 = ((y-tilde y + 1)^2 - 1)/y^2, beyond u64.
        let e1: BigInt = ((&y_tilde * &y + 1u32) * (&y_tilde * &y + 1u32) - 1u32) / (&y * &y);
        assert!(e1.to_u64().is_none());
        assert_eq!(f.discarded_least, Some(e1));
        assert_eq!(f.discarded_period, Some(1));
        let e2: BigInt = ((&y_tilde * 2 * &y + 1u32) * (&y_tilde * 2 * &y + 1u32) - 1u32) / (&y * &y);
        assert_eq!(f.min_element(), &e2);

        // An odd-y sibling whose word (y, 2y) has full period: retained.
        let y: BigInt = BigInt::from(1_000_000_000_001u64);
        let k = InverseKey::new(y.clone(), BigInt::from(1), NormSign::Plus, Ring::Sqrt).unwrap();
        let f = reduced_family(&k).unwrap();
        assert_eq!(f.discarded_least, None);
        let e1: BigInt = ((&y * &y + 1u32) * (&y * &y + 1u32) - 1u32) / (&y * &y);
        assert_eq!(f.min_element(), &e1);
    }

    /// Every non-square d belongs to its own reduced family, and family
    /// regeneration locates it (forward-inverse consistency).
    #[test]
    fn partition_small_range() {
        for d in 2u64..=3000 {
            if is_square(d) {
                continue;
            }
            let c = classify(d, Ring::Sqrt).unwrap();
            let f = reduced_family(&c.key).unwrap();
            assert_ne!(f.discarded_least, Some(big(d as i64)), "d = {d} discarded");
            assert!(c.is_least == (f.min_element() == &BigInt::from(d)));
            if d % 4 == 1 {
                let c = classify(d, Ring::Half).unwrap();
                let f = reduced_family(&c.key).unwrap();
                assert_ne!(f.discarded_least, Some(big(d as i64)));
            }
        }
    }

    /// Retained elements have period exactly n+1; successive a0 differ by
    /// y-tilde; elements strictly increase.
    #[test]
    fn retained_periods_and_monotonicity() {
        for y in 1i64..=18 {
            for x in 0..y.max(1) {
                let Ok(progs) = crate::inverse::progressions_for_key(&big(y), &big(x)) else {
                    continue;
                };
                for p in progs {
                    let f = reduced_family(&p.key).unwrap();
                    let n = f.palindrome.len();
                    let elems = f.elements(5);
                    let mut prev: Option<BigInt> = None;
                    for d in &elems {
                        if let Some(prev) = &prev {
                            assert!(d > prev);
                        }
                        let du = d.to_u64().expect("small in this range");
                        assert_eq!(
                            expand_omega(du, f.key.ring).unwrap().period_len(),
                            n + 1,
                            "key {} d = {du}",
                            f.key
                        );
                        prev = Some(d.clone());
                    }
                    let pairs = f.progression.elements(5).pairs;
                    for w in pairs.windows(2) {
                        assert_eq!(&w[1].0 - &w[0].0, f.progression.y_tilde);
                    }
                }
            }
        }
    }
}
