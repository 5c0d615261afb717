//! Symmetric (palindromic) partial-quotient sequences, their continuant
//! matrices, and the correspondence with rationals x/y satisfying
//! x^2 = +-1 (mod y).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::mod_euclid;
use crate::cf::rational_two_expansions;
use crate::error::{Error, Result};
use crate::quad::NormSign;

/// Length parity of a palindrome; even length pairs with sign -1, odd with +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A palindromic sequence of positive partial quotients (possibly empty).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymmetricSeq(Vec<u64>);

impl SymmetricSeq {
    pub fn new(terms: Vec<u64>) -> Result<SymmetricSeq> {
        if terms.contains(&0) {
            return Err(Error::NonpositiveTerm);
        }
        if !terms.iter().eq(terms.iter().rev()) {
            return Err(Error::NotPalindrome);
        }
        Ok(SymmetricSeq(terms))
    }

    pub fn empty() -> SymmetricSeq {
        SymmetricSeq(Vec::new())
    }

    pub fn terms(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parity(&self) -> Parity {
        Parity::of(self.len())
    }
}

impl fmt::Display for SymmetricSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]", terms.join(","))
    }
}

/// The matrix M_n = prod [[a_i, 1], [1, 0]] = [[q_n, q_{n-1}], [r_n, r_{n-1}]].
///
/// q_n is the denominator of [0, a_1, ..., a_n] and r_n its numerator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuantMatrix {
    pub q_n: BigInt,
    pub q_prev: BigInt,
    pub r_n: BigInt,
    pub r_prev: BigInt,
}

impl ContinuantMatrix {
    pub fn identity() -> ContinuantMatrix {
        ContinuantMatrix {
            q_n: BigInt::one(),
            q_prev: BigInt::zero(),
            r_n: BigInt::zero(),
            r_prev: BigInt::one(),
        }
    }

    pub fn det(&self) -> BigInt {
        &self.q_n * &self.r_prev - &self.q_prev * &self.r_n
    }

    /// For symmetric input the matrix is symmetric: q_{n-1} = r_n.
    pub fn is_symmetric(&self) -> bool {
        self.q_prev == self.r_n
    }
}

/// Ordered continuant product over the sequence. Empty input gives the
/// identity (the n = 0 seeds q_0 = 1, q_{-1} = 0, r_0 = 0, r_{-1} = 1).
pub fn continuant(seq: &[u64]) -> Result<ContinuantMatrix> {
    let mut m = ContinuantMatrix::identity();
    for &a in seq {
        if a == 0 {
            return Err(Error::NonpositiveTerm);
        }
        let a = BigInt::from(a);
        let q_n = &a * &m.q_n + &m.q_prev;
        let r_n = &a * &m.r_n + &m.r_prev;
        m.q_prev = std::mem::replace(&mut m.q_n, q_n);
        m.r_prev = std::mem::replace(&mut m.r_n, r_n);
    }
    Ok(m)
}

/// One palindromic representation of x/y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricVariant {
    pub seq: SymmetricSeq,
    pub parity: Parity,
    pub sign: NormSign,
}

/// The palindromic expansions of x/y, one per sign s with x^2 = s (mod y).
///
/// Even-length palindromes pair with s = -1, odd with s = +1; the variant of
/// each admissible sign is the expansion of x/y (among its two forms) whose
/// tail has the matching parity. For y = 1 both signs hold trivially and the
/// pair is the empty palindrome (sign -1) and [1] (sign +1, from 1 = [0,1]).
pub fn symmetric_form(x: &BigInt, y: &BigInt) -> Result<Vec<SymmetricVariant>> {
    if !y.is_positive() || x.is_negative() || x > y {
        return Err(Error::NotCoprime);
    }
    if x.gcd(y) != BigInt::one() {
        return Err(Error::NotCoprime);
    }
    if y.is_one() {
        return Ok(vec![
            SymmetricVariant {
                seq: SymmetricSeq::empty(),
                parity: Parity::Even,
                sign: NormSign::Minus,
            },
            SymmetricVariant {
                seq: SymmetricSeq::new(vec![1])?,
                parity: Parity::Odd,
                sign: NormSign::Plus,
            },
        ]);
    }

    let two = rational_two_expansions(x, y)?;
    debug_assert_eq!(two.long[0], 0, "x/y < 1 here");
    let long_tail = &two.long[1..];
    let short_tail = &two.short[1..];

    let mut variants = Vec::new();
    for sign in [NormSign::Minus, NormSign::Plus] {
        let residue = x * x - BigInt::from(sign.value());
        if !mod_euclid(&residue, y).is_zero() {
            continue;
        }
        let want = match sign {
            NormSign::Minus => Parity::Even,
            NormSign::Plus => Parity::Odd,
        };
        let tail = if Parity::of(long_tail.len()) == want {
            long_tail
        } else {
            short_tail
        };
        debug_assert_eq!(Parity::of(tail.len()), want);
        let seq = SymmetricSeq::new(tail.to_vec()).inspect_err(|_| {
            debug_assert!(false, "congruence holds but tail {tail:?} is not a palindrome");
        })?;
        variants.push(SymmetricVariant { seq, parity: want, sign });
    }
    if variants.is_empty() {
        return Err(Error::NotRepresentable { y: y.clone(), x: x.clone() });
    }
    Ok(variants)
}

/// The rational (x, y) = (r_n, q_n) represented by a palindrome; the empty
/// sequence gives (0, 1).
pub fn rational_from_symmetric(seq: &[u64]) -> Result<(BigInt, BigInt)> {
    if !seq.iter().eq(seq.iter().rev()) {
        return Err(Error::NotPalindrome);
    }
    let m = continuant(seq)?;
    debug_assert!(m.r_n.gcd(&m.q_n).is_one());
    Ok((m.r_n, m.q_n))
}

/// t = (x^2 - sign)/y together with its parity. For the palindrome attached
/// to (y, x, sign) one has t = q_{n-1} r_{n-1} (mod 2).
pub fn parity_of_t(x: &BigInt, y: &BigInt, sign: NormSign) -> Result<(BigInt, Parity)> {
    let num = x * x - BigInt::from(sign.value());
    let (t, rem) = num.div_rem(y);
    if !rem.is_zero() {
        return Err(Error::NotInteger {
            y: y.clone(),
            x: x.clone(),
            sign: sign.value(),
        });
    }
    let parity = if t.is_even() { Parity::Even } else { Parity::Odd };
    Ok((t, parity))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn continuant_examples() {
        let m = continuant(&[2]).unwrap();
        assert_eq!(
            (m.q_n, m.q_prev, m.r_n, m.r_prev),
            (big(2), big(1), big(1), big(0))
        );
        let m = continuant(&[2, 2]).unwrap();
        assert_eq!(
            (m.q_n, m.q_prev, m.r_n, m.r_prev),
            (big(5), big(2), big(2), big(1))
        );
        let m = continuant(&[]).unwrap();
        assert_eq!(m, ContinuantMatrix::identity());
        assert_eq!(continuant(&[1, 0]), Err(Error::NonpositiveTerm));
    }

    #[test]
    fn symmetric_form_examples() {
        let v = symmetric_form(&big(2), &big(5)).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].seq.terms(), &[2, 2]);
        assert_eq!(v[0].parity, Parity::Even);
        assert_eq!(v[0].sign, NormSign::Minus);

        let v = symmetric_form(&big(2), &big(3)).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].seq.terms(), &[1, 1, 1]);
        assert_eq!(v[0].sign, NormSign::Plus);

        let v = symmetric_form(&big(1), &big(2)).unwrap();
        assert_eq!(v.len(), 2);
        let minus = v.iter().find(|w| w.sign == NormSign::Minus).unwrap();
        let plus = v.iter().find(|w| w.sign == NormSign::Plus).unwrap();
        assert_eq!(minus.seq.terms(), &[1, 1]);
        assert_eq!(plus.seq.terms(), &[2]);

        assert!(matches!(
            symmetric_form(&big(2), &big(7)),
            Err(Error::NotRepresentable { .. })
        ));
        assert_eq!(symmetric_form(&big(2), &big(4)), Err(Error::NotCoprime));
    }

    #[test]
    fn unit_edge_case() {
        for x in [0i64, 1] {
            let v = symmetric_form(&big(x), &big(1)).unwrap();
            assert_eq!(v.len(), 2);
            assert_eq!(v[0].seq.terms(), &[] as &[u64]);
            assert_eq!(v[0].sign, NormSign::Minus);
            assert_eq!(v[1].seq.terms(), &[1]);
            assert_eq!(v[1].sign, NormSign::Plus);
        }
    }

    #[test]
    fn rational_from_symmetric_examples() {
        assert_eq!(rational_from_symmetric(&[2, 2]).unwrap(), (big(2), big(5)));
        assert_eq!(rational_from_symmetric(&[1, 1]).unwrap(), (big(1), big(2)));
        assert_eq!(rational_from_symmetric(&[]).unwrap(), (big(0), big(1)));
        assert_eq!(rational_from_symmetric(&[1, 2]), Err(Error::NotPalindrome));
    }

    #[test]
    fn round_trip_small() {
        for y in 2i64..=80 {
            for x in 1..y {
                if num_integer::gcd(x, y) != 1 {
                    continue;
                }
                let Ok(variants) = symmetric_form(&big(x), &big(y)) else {
                    continue;
                };
                for v in variants {
                    let (rx, ry) = rational_from_symmetric(v.seq.terms()).unwrap();
                    assert_eq!((rx, ry), (big(x), big(y)), "palindrome {}", v.seq);
                }
            }
        }
    }

    /// Brute-force check of the equivalence: x^2 = -+1 (mod y) holds exactly
    /// when one of the two expansions of x/y has a palindromic tail of the
    /// matching parity.
    #[test]
    fn congruence_iff_palindrome() {
        for y in 2i64..=60 {
            for x in 1..y {
                if num_integer::gcd(x, y) != 1 {
                    continue;
                }
                let two = rational_two_expansions(&big(x), &big(y)).unwrap();
                let mut found = [false, false]; // [even, odd] palindromic tail
                for tail in [&two.long[1..], &two.short[1..]] {
                    if tail.iter().eq(tail.iter().rev()) {
                        found[tail.len() % 2] = true;
                    }
                }
                let minus = (x * x + 1) % y == 0;
                let plus = (x * x - 1) % y == 0;
                assert_eq!(found[0], minus, "x/y = {x}/{y} even tail");
                assert_eq!(found[1], plus, "x/y = {x}/{y} odd tail");
            }
        }
    }

    #[test]
    fn parity_of_t_examples() {
        let (t, p) = parity_of_t(&big(1), &big(2), NormSign::Plus).unwrap();
        assert_eq!((t, p), (big(0), Parity::Even));
        let (t, p) = parity_of_t(&big(1), &big(2), NormSign::Minus).unwrap();
        assert_eq!((t, p), (big(1), Parity::Odd));
        let (t, p) = parity_of_t(&big(5), &big(12), NormSign::Plus).unwrap();
        assert_eq!((t, p), (big(2), Parity::Even));
        assert!(matches!(
            parity_of_t(&big(2), &big(7), NormSign::Plus),
            Err(Error::NotInteger { .. })
        ));
    }

    #[test]
    fn t_parity_matches_continuant() {
        for y in (2i64..=80).step_by(2) {
            for x in 1..y {
                if num_integer::gcd(x, y) != 1 {
                    continue;
                }
                let Ok(variants) = symmetric_form(&big(x), &big(y)) else {
                    continue;
                };
                for v in variants {
                    let (t, _) = parity_of_t(&big(x), &big(y), v.sign).unwrap();
                    let m = continuant(v.seq.terms()).unwrap();
                    let qr = &m.q_prev * &m.r_prev;
                    assert_eq!(t.is_even(), qr.is_even(), "x/y = {x}/{y}");
                }
            }
        }
    }

    proptest! {
        /// det M_n = (-1)^n, and palindromes give symmetric matrices with
        /// q_n r_{n-1} - q_{n-1}^2 = (-1)^n.
        #[test]
        fn continuant_properties(half in prop::collection::vec(1u64..6, 0..5), mid in prop::option::of(1u64..6)) {
            let mut seq = half.clone();
            if let Some(m) = mid {
                seq.push(m);
            }
            seq.extend(half.iter().rev());
            let m = continuant(&seq).unwrap();
            let sign = if seq.len() % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(m.det(), BigInt::from(sign));
            prop_assert!(m.is_symmetric());
            prop_assert_eq!(&m.q_n * &m.r_prev - &m.q_prev * &m.q_prev, BigInt::from(sign));
        }
    }
}
