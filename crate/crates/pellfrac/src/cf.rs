//! Periodic continued-fraction expansion of omega_d, convergents, the
//! conjugate integers xi_n with their norms nu_n, and finite expansions of
//! rationals. Everything is exact integer/rational arithmetic.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::quad::{QuadValue, QuadraticInteger, Ring};
use crate::surd::{QuadraticSurd, SurdExpansion};

/// Periodic expansion omega_d = [a0; (a_1, ..., a_l) repeating].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub ring: Ring,
    pub d: u64,
    pub a0: u64,
    pub period: Vec<u64>,
}

impl Expansion {
    /// Minimal period length l(omega_d).
    pub fn period_len(&self) -> usize {
        self.period.len()
    }

    /// The interior block a_1 ... a_{l-1}, which is a palindrome.
    pub fn palindrome(&self) -> &[u64] {
        &self.period[..self.period.len() - 1]
    }

    /// Partial quotient a_n for any n >= 0.
    pub fn partial_quotient(&self, n: usize) -> u64 {
        if n == 0 {
            self.a0
        } else {
            self.period[(n - 1) % self.period.len()]
        }
    }

    /// Last period term: 2 a0 for ring 0, 2 a0 - 1 for ring 1.
    pub fn last_term(&self) -> u64 {
        *self.period.last().expect("period is nonempty")
    }
}

impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.period.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}; ({})]", self.a0, terms.join(","))
    }
}

/// Expands omega_d and detects the minimal period.
///
/// The recurrence runs on `QuadraticSurd` states; each state after a0 is
/// recorded in a hash set and the period closes at the first repetition.
/// The tail quotients of omega_d are reduced, so the expansion is purely
/// periodic from index 1 and the first repeated state is the initial one.
pub fn expand_omega(d: u64, ring: Ring) -> Result<Expansion> {
    ring.check(d)?;
    let mut it = SurdExpansion::new(d, ring);
    let (a0, _) = it.next().expect("infinite expansion");
    let first = it.state();
    let mut seen: HashSet<QuadraticSurd> = HashSet::new();
    seen.insert(first);
    let mut period = Vec::new();
    loop {
        let (a, _) = it.next().expect("infinite expansion");
        period.push(a);
        let state = it.state();
        if !seen.insert(state) {
            debug_assert_eq!(state, first, "tail of omega_d is purely periodic");
            break;
        }
    }
    Ok(Expansion { ring, d, a0, period })
}

/// Convergent p_n / q_n, indices following the seed convention
/// (q_-2, p_-2) = (1, 0), (q_-1, p_-1) = (0, 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub n: i64,
    pub p: BigInt,
    pub q: BigInt,
}

/// The two seed convergents at n = -2 and n = -1.
pub fn convergent_seeds() -> (Convergent, Convergent) {
    (
        Convergent { n: -2, p: BigInt::zero(), q: BigInt::one() },
        Convergent { n: -1, p: BigInt::one(), q: BigInt::zero() },
    )
}

/// Iterator producing convergents of a partial quotient stream from n = 0.
pub struct ConvergentIter<I> {
    quotients: I,
    n: i64,
    p_prev: BigInt,
    p_prev2: BigInt,
    q_prev: BigInt,
    q_prev2: BigInt,
}

impl<I: Iterator<Item = u64>> ConvergentIter<I> {
    pub fn new(quotients: I) -> Self {
        let (s2, s1) = convergent_seeds();
        ConvergentIter {
            quotients,
            n: 0,
            p_prev: s1.p,
            p_prev2: s2.p,
            q_prev: s1.q,
            q_prev2: s2.q,
        }
    }
}

impl<I: Iterator<Item = u64>> Iterator for ConvergentIter<I> {
    type Item = Convergent;

    fn next(&mut self) -> Option<Convergent> {
        let a = BigInt::from(self.quotients.next()?);
        let p = &a * &self.p_prev + &self.p_prev2;
        let q = &a * &self.q_prev + &self.q_prev2;
        self.p_prev2 = std::mem::replace(&mut self.p_prev, p.clone());
        self.q_prev2 = std::mem::replace(&mut self.q_prev, q.clone());
        let c = Convergent { n: self.n, p, q };
        self.n += 1;
        Some(c)
    }
}

/// First `count` convergents of the expansion, starting at n = 0.
pub fn convergents(exp: &Expansion, count: usize) -> Vec<Convergent> {
    let quotients = (0..count).map(|n| exp.partial_quotient(n));
    ConvergentIter::new(quotients).collect()
}

/// xi_n = conjugate of (p_n - q_n omega_d) and nu_n = |N(xi_n)|.
pub fn xi_nu(d: u64, ring: Ring, n: usize) -> Result<(QuadraticInteger, BigInt)> {
    let exp = expand_omega(d, ring)?;
    let c = convergents(&exp, n + 1).pop().expect("count >= 1");
    let xi = match ring {
        Ring::Sqrt => QuadraticInteger::new(c.p.clone(), c.q.clone(), d, ring),
        Ring::Half => QuadraticInteger::new(&c.p - &c.q, c.q.clone(), d, ring),
    };
    let norm = xi.norm();
    let nu = norm.abs();
    // nu_n = (-1)^(n+1) N(xi_n)
    debug_assert_eq!(if n.is_multiple_of(2) { -norm.clone() } else { norm }, nu);
    assert!(nu >= BigInt::one(), "norm of nonzero quadratic integer");
    Ok((xi, nu))
}

/// Outcome of the exact quotient-norm bound check at index n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientBoundCheck {
    /// delta_n = alpha_{n+1} - sqrt(D)/nu_n + q_{n-1}/q_n, exact.
    pub delta: QuadValue,
    /// The bound 4 / (q_n^2 sqrt(D)), exact.
    pub bound: QuadValue,
    /// |delta_n| < 4 / (q_n^2 sqrt(D))
    pub delta_within_bound: bool,
    /// alpha_{n+1} < sqrt(D) / nu_n
    pub alpha_below_ratio: bool,
    pub passed: bool,
}

/// Checks |delta_n| < 4/(q_n^2 sqrt(D)) and alpha_{n+1} < sqrt(D)/nu_n
/// exactly, where alpha_{n+1} = sqrt(D)/nu_n - q_{n-1}/q_n + delta_n.
///
/// Discriminants D <= 16 are exempt (their expansions are checked against a
/// table instead) and reported as `SmallDiscriminant`.
pub fn verify_quotient_bound(d: u64, ring: Ring, n: usize) -> Result<QuotientBoundCheck> {
    ring.check(d)?;
    let disc = ring.discriminant(d);
    if disc <= 16 {
        return Err(Error::SmallDiscriminant(disc));
    }
    // sqrt(D) = c * sqrt(d)
    let c = match ring {
        Ring::Sqrt => 2u32,
        Ring::Half => 1u32,
    };

    let mut it = SurdExpansion::new(d, ring);
    for _ in 0..=n {
        it.next();
    }
    let alpha = it.state(); // total quotient alpha_{n+1}

    let exp = expand_omega(d, ring)?;
    let mut conv = convergents(&exp, n + 1);
    let cn = conv.pop().expect("n-th convergent");
    let q_prev = conv
        .pop()
        .map(|c| c.q)
        .unwrap_or_else(BigInt::zero); // q_{-1} = 0
    let (_, nu) = xi_nu(d, ring, n)?;

    let rat = |n: BigInt, d: BigInt| BigRational::new(n, d);

    // delta = (P/Q + q_{n-1}/q_n) + (1/Q - c/nu) sqrt(d)
    let delta = QuadValue::new(
        rat(BigInt::from(alpha.p), BigInt::from(alpha.q)) + rat(q_prev, cn.q.clone()),
        rat(BigInt::one(), BigInt::from(alpha.q)) - rat(BigInt::from(c), nu.clone()),
        d,
    );
    // 4/(q_n^2 sqrt(D)) = (4 / (q_n^2 c d)) sqrt(d)
    let bound = QuadValue::new(
        BigRational::zero(),
        rat(BigInt::from(4u32), &cn.q * &cn.q * BigInt::from(c) * BigInt::from(d)),
        d,
    );
    let delta_within_bound = bound.sub(&delta.abs()).sign() == std::cmp::Ordering::Greater;

    // sqrt(D)/nu - alpha > 0
    let gap = QuadValue::new(
        -rat(BigInt::from(alpha.p), BigInt::from(alpha.q)),
        rat(BigInt::from(c), nu) - rat(BigInt::one(), BigInt::from(alpha.q)),
        d,
    );
    let alpha_below_ratio = gap.sign() == std::cmp::Ordering::Greater;

    Ok(QuotientBoundCheck {
        delta,
        bound,
        delta_within_bound,
        alpha_below_ratio,
        passed: delta_within_bound && alpha_below_ratio,
    })
}

/// The two finite expansions of a positive rational: the long one ends in 1,
/// the short one ends in a term greater than 1; their lengths differ by one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoExpansions {
    pub long: Vec<u64>,
    pub short: Vec<u64>,
    /// Set for p/q = 1, whose expansions [1] and [0,1] do not fit the
    /// long/short pattern.
    pub unit: bool,
}

/// Both simple continued fraction expansions of p/q > 0 with gcd(p, q) = 1.
pub fn rational_two_expansions(p: &BigInt, q: &BigInt) -> Result<TwoExpansions> {
    if !p.is_positive() || !q.is_positive() {
        return Err(Error::NonpositiveTerm);
    }
    if p.gcd(q) != BigInt::one() {
        return Err(Error::NotCoprime);
    }
    if p == q {
        return Ok(TwoExpansions { long: vec![0, 1], short: vec![1], unit: true });
    }

    let mut terms: Vec<u64> = Vec::new();
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        let (quot, rem) = a.div_rem(&b);
        terms.push(quot.to_u64().ok_or(Error::TermOverflow)?);
        a = b;
        b = rem;
    }
    // Euclid yields the short form: last term > 1 unless single-term.
    let mut long = terms.clone();
    let last = long.last_mut().expect("nonempty expansion");
    debug_assert!(terms.len() == 1 || *last >= 2);
    *last -= 1;
    long.push(1);
    if long[long.len() - 2] == 0 {
        // Single-term integer [n]: long form is [n-1, 1].
        debug_assert_eq!(long.len(), 3);
        long.remove(1);
    }
    Ok(TwoExpansions { long, short: terms, unit: false })
}

/// Value of a finite continued fraction as a rational in lowest terms.
/// The leading term may be 0; all later terms must be positive.
pub fn cf_to_rational(seq: &[u64]) -> Result<(BigInt, BigInt)> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    if seq[1..].contains(&0) {
        return Err(Error::NonpositiveTerm);
    }
    let last = ConvergentIter::new(seq.iter().copied())
        .last()
        .expect("nonempty sequence");
    debug_assert!(last.p.gcd(&last.q).is_one());
    Ok((last.p, last.q))
}
