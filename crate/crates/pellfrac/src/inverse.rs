//! The inverse problem: which d make a given rational p/q an exceptionally
//! good approximation of omega_d. Attached intervals around p/q, the
//! four-case congruence criterion for an interval to contain an integer, the
//! induced quadratic progressions of d per key (y, x, sign, ring), and the
//! symmetric-sequence parameterization, with mutual cross-checks.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_square_big, mod_euclid, mod_inverse};
use crate::cf::{rational_two_expansions, ConvergentIter};
use crate::error::{Error, Result};
use crate::quad::{NormSign, Ring};
use crate::symmetry::{continuant, symmetric_form, SymmetricSeq};

/// Side of the attached interval relative to its center point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// Below the center; a hit there has norm +1.
    Lower,
    /// Above the center; a hit there has norm -1.
    Upper,
}

impl Side {
    pub fn symbol(self) -> char {
        match self {
            Side::Lower => '-',
            Side::Upper => '+',
        }
    }
}

/// Family identifier (y, x, sign, ring) with x^2 = sign (mod y).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InverseKey {
    pub y: BigInt,
    pub x: BigInt,
    pub sign: NormSign,
    pub ring: Ring,
}

impl InverseKey {
    /// Validates and normalizes a key. x is reduced mod y (so (1, 1) becomes
    /// (1, 0)); the congruence x^2 = sign (mod y) must hold, and for even y
    /// the ring must match the parity of t = (x^2 - sign)/y.
    pub fn new(y: BigInt, x: BigInt, sign: NormSign, ring: Ring) -> Result<InverseKey> {
        if !y.is_positive() {
            return Err(Error::NotCoprime);
        }
        let x = mod_euclid(&x, &y);
        if x.gcd(&y) != BigInt::one() {
            return Err(Error::NotCoprime);
        }
        let residue = &x * &x - BigInt::from(sign.value());
        if !mod_euclid(&residue, &y).is_zero() {
            return Err(Error::NotRepresentable { y, x });
        }
        if y.is_even() {
            let t = &residue / &y;
            let want = if t.is_even() { Ring::Sqrt } else { Ring::Half };
            if ring != want {
                return Err(Error::RingInfeasible { y, x, sign: sign.value() });
            }
        }
        Ok(InverseKey { y, x, sign, ring })
    }

    /// Case number (1)-(4): ring 0 takes cases 1 (sign -1) and 2 (sign +1),
    /// ring 1 takes cases 3 and 4.
    pub fn case_id(&self) -> u8 {
        match (self.ring, self.sign) {
            (Ring::Sqrt, NormSign::Minus) => 1,
            (Ring::Sqrt, NormSign::Plus) => 2,
            (Ring::Half, NormSign::Minus) => 3,
            (Ring::Half, NormSign::Plus) => 4,
        }
    }

    /// Common difference of the a0 progression: y/2 for even y, else y.
    pub fn y_tilde(&self) -> BigInt {
        if self.y.is_even() {
            &self.y / 2
        } else {
            self.y.clone()
        }
    }

    /// The palindrome attached to this key: the expansion of x/y whose tail
    /// length matches the sign (even for -1, odd for +1).
    pub fn palindrome(&self) -> Result<SymmetricSeq> {
        let variants = symmetric_form(&self.x, &self.y)?;
        variants
            .into_iter()
            .find(|v| v.sign == self.sign)
            .map(|v| v.seq)
            .ok_or_else(|| Error::NotRepresentable { y: self.y.clone(), x: self.x.clone() })
    }
}

impl fmt::Display for InverseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(y={}, x={}, sign={}, ring={})",
            self.y,
            self.x,
            self.sign,
            self.ring.index()
        )
    }
}

/// Arithmetic progression of a0 (hence quadratic progression of d) for a key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Progression {
    pub key: InverseKey,
    /// Least admissible a0 >= 1.
    pub frak_a: BigInt,
    /// Common difference of the a0 progression.
    pub y_tilde: BigInt,
    pub case_id: u8,
}

impl Progression {
    pub fn new(key: InverseKey) -> Progression {
        let y = &key.y;
        let x = &key.x;
        let xx = x * x;
        // (1 - sign * x^2)/y is integral by the key congruence.
        let w = (BigInt::one() - BigInt::from(key.sign.value()) * &xx) / y;
        let mut c = mod_euclid(&(x * &w), y);
        if key.ring == Ring::Half {
            c = mod_euclid(&(c + BigInt::one()), y);
        }
        let y_tilde = key.y_tilde();
        // Solve 2 a0 = c (mod y).
        let class = if y.is_odd() {
            let inv2 = mod_inverse(&BigInt::from(2), y).expect("2 invertible mod odd y");
            mod_euclid(&(inv2 * &c), y)
        } else {
            debug_assert!(c.is_even(), "even-y feasibility forces an even target");
            mod_euclid(&(&c / 2), &y_tilde)
        };
        let frak_a = if class.is_zero() { y_tilde.clone() } else { class };
        let case_id = key.case_id();
        Progression { key, frak_a, y_tilde, case_id }
    }

    /// a0 of the k-th progression member.
    pub fn a0_at(&self, k: u64) -> BigInt {
        &self.frak_a + &self.y_tilde * BigInt::from(k)
    }

    /// d for a given a0 in the progression, as an exact rational asserted
    /// integral: ((a0 y + x)^2 - sign)/y^2 for ring 0 and
    /// (((2 a0 - 1) y + 2x)^2 - 4 sign)/y^2 for ring 1.
    pub fn d_at(&self, a0: &BigInt) -> BigInt {
        let y = &self.key.y;
        let s = BigInt::from(self.key.sign.value());
        let num = match self.key.ring {
            Ring::Sqrt => {
                let p = a0 * y + &self.key.x;
                &p * &p - s
            }
            Ring::Half => {
                let m = (a0 * 2 - BigInt::one()) * y + &self.key.x * 2;
                &m * &m - s * 4
            }
        };
        let (d, rem) = num.div_rem(&(y * y));
        assert!(rem.is_zero(), "progression element is integral");
        if self.key.ring == Ring::Half {
            debug_assert_eq!(mod_euclid(&d, &BigInt::from(4)), BigInt::one());
        }
        // The defining norm identity N(a0 y + x - y omega_d) = sign holds by
        // construction; keep the exact check on in debug builds.
        debug_assert!(self.norm_identity_holds(a0, &d));
        d
    }

    fn norm_identity_holds(&self, a0: &BigInt, d: &BigInt) -> bool {
        let y = &self.key.y;
        let p = a0 * y + &self.key.x;
        let norm = match self.key.ring {
            Ring::Sqrt => &p * &p - y * y * d,
            Ring::Half => &p * &p - &p * y + y * y * (BigInt::one() - d) / 4,
        };
        norm == BigInt::from(self.key.sign.value())
    }

    /// First `count` valid (a0, d) pairs; entries with d <= 0 or d square are
    /// diverted to `skipped`.
    pub fn elements(&self, count: usize) -> ProgressionElements {
        let mut out = ProgressionElements::default();
        let mut k = 0u64;
        while out.pairs.len() < count {
            let a0 = self.a0_at(k);
            let d = self.d_at(&a0);
            if d.is_positive() && !is_square_big(&d) {
                out.pairs.push((a0, d));
            } else {
                out.skipped.push((a0, d));
                assert!(out.skipped.len() <= 4, "degenerate entries occur only at the start");
            }
            k += 1;
        }
        out
    }

    /// All valid (a0, d) pairs with d <= bound.
    pub fn elements_up_to(&self, bound: &BigInt) -> ProgressionElements {
        let mut out = ProgressionElements::default();
        let mut k = 0u64;
        loop {
            let a0 = self.a0_at(k);
            let d = self.d_at(&a0);
            if d > *bound {
                break;
            }
            if d.is_positive() && !is_square_big(&d) {
                out.pairs.push((a0, d));
            } else {
                out.skipped.push((a0, d));
            }
            k += 1;
        }
        out
    }
}

/// Valid progression members plus the flagged degenerate entries.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProgressionElements {
    pub pairs: Vec<(BigInt, BigInt)>,
    pub skipped: Vec<(BigInt, BigInt)>,
}

/// All progressions admissible for the pair (y, x): one per sign with
/// x^2 = sign (mod y), with both rings for odd y and the parity-selected
/// ring for even y. Ordered by case number.
pub fn progressions_for_key(y: &BigInt, x: &BigInt) -> Result<Vec<Progression>> {
    if !y.is_positive() {
        return Err(Error::NotCoprime);
    }
    let x = mod_euclid(x, y);
    if x.gcd(y) != BigInt::one() {
        return Err(Error::NotCoprime);
    }
    let mut out = Vec::new();
    for ring in [Ring::Sqrt, Ring::Half] {
        for sign in [NormSign::Minus, NormSign::Plus] {
            match InverseKey::new(y.clone(), x.clone(), sign, ring) {
                Ok(key) => out.push(Progression::new(key)),
                Err(Error::NotRepresentable { .. }) | Err(Error::RingInfeasible { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    if out.is_empty() {
        return Err(Error::NotRepresentable { y: y.clone(), x });
    }
    out.sort_by_key(|p| p.case_id);
    Ok(out)
}

/// First `count` valid elements of a progression (free-function form).
pub fn progression_elements(prog: &Progression, count: usize) -> ProgressionElements {
    prog.elements(count)
}

/// One side of the interval attached to p/q, with exact rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttachedInterval {
    pub ring: Ring,
    pub side: Side,
    pub lo: BigRational,
    pub hi: BigRational,
}

impl AttachedInterval {
    pub fn length(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Integers strictly inside (ring 0) or integers = 1 mod 4 strictly
    /// inside (ring 1). Exhaustive-scan oracle used by tests and reports.
    pub fn integers_inside(&self) -> Vec<BigInt> {
        let mut n: BigInt = self.lo.floor().to_integer() + 1;
        let mut out = Vec::new();
        while BigRational::from(n.clone()) < self.hi {
            if BigRational::from(n.clone()) > self.lo
                && (self.ring == Ring::Sqrt || mod_euclid(&n, &BigInt::from(4)).is_one())
            {
                out.push(n.clone());
            }
            n += 1;
        }
        out
    }
}

fn check_interval_inputs(p: &BigInt, q: &BigInt) -> Result<()> {
    if !p.is_positive() || !q.is_positive() {
        return Err(Error::NonpositiveTerm);
    }
    if p.gcd(q) != BigInt::one() {
        return Err(Error::NotCoprime);
    }
    if p < &(q * 4) {
        return Err(Error::BelowThreshold { p: p.clone(), q: q.clone() });
    }
    Ok(())
}

/// The attached intervals I^{ring,-} and I^{ring,+} of p/q >= 4.
///
/// Writes p/q = [a_0, ..., a_m, 1] and evaluates
/// A = [a_0, ..., a_m + 1, (4/3) a_0 - q_{m-1}/q] and
/// B = [a_0, ..., a_m, 1, (4/3) a_0 - q_m/q] exactly; the interval is the
/// pair (A^2, B^2) split at (p/q)^2 for ring 0, and the same with
/// x -> (2x - 1)^2 for ring 1. Orientation follows the parity of m.
pub fn attached_intervals(
    p: &BigInt,
    q: &BigInt,
    ring: Ring,
) -> Result<(AttachedInterval, AttachedInterval)> {
    check_interval_inputs(p, q)?;
    let two = rational_two_expansions(p, q)?;
    debug_assert!(!two.unit, "p/q >= 4 is never 1");
    let a_seq = &two.long[..two.long.len() - 1];
    let m = a_seq.len() - 1;
    let a0 = BigInt::from(a_seq[0]);

    // Convergents p_{m-1}/q_{m-1} and p_m/q_m of the long form.
    let mut conv = ConvergentIter::new(a_seq.iter().copied()).collect::<Vec<_>>();
    let cm = conv.pop().expect("m-th convergent");
    let (pm1, qm1) = conv
        .pop()
        .map(|c| (c.p, c.q))
        .unwrap_or_else(|| (BigInt::one(), BigInt::zero())); // seeds at m = 0

    let rat = |n: BigInt, d: BigInt| BigRational::new(n, d);
    let lambda_a = rat(&a0 * 4, BigInt::from(3)) - rat(qm1.clone(), q.clone());
    let lambda_b = rat(&a0 * 4, BigInt::from(3)) - rat(cm.q.clone(), q.clone());

    let eval = |lambda: &BigRational, prev_p: &BigInt, prev_q: &BigInt| {
        (lambda * rat(p.clone(), BigInt::one()) + rat(prev_p.clone(), BigInt::one()))
            / (lambda * rat(q.clone(), BigInt::one()) + rat(prev_q.clone(), BigInt::one()))
    };
    let a_val = eval(&lambda_a, &pm1, &qm1);
    let b_val = eval(&lambda_b, &cm.p, &cm.q);

    // m even: B < p/q < A; m odd: A < p/q < B.
    let (left, right) = if m % 2 == 0 { (&b_val, &a_val) } else { (&a_val, &b_val) };
    debug_assert!(left < right);

    let center = rat(p.clone(), q.clone());
    debug_assert!(*left < center && center < *right);
    let square = |v: &BigRational| match ring {
        Ring::Sqrt => v * v,
        Ring::Half => {
            let w = v * BigInt::from(2) - BigRational::one();
            &w * &w
        }
    };
    Ok((
        AttachedInterval { ring, side: Side::Lower, lo: square(left), hi: square(&center) },
        AttachedInterval { ring, side: Side::Upper, lo: square(&center), hi: square(right) },
    ))
}

/// The integer found in one side of an attached interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalHit {
    pub d: BigInt,
    /// N(p - q omega_d), -1 on the upper side and +1 on the lower side.
    pub norm: i8,
}

/// Decides by the case congruences whether the given side of the attached
/// interval contains an integer (= 1 mod 4 for ring 1), and returns it with
/// the verified norm.
pub fn integer_in_interval(
    p: &BigInt,
    q: &BigInt,
    ring: Ring,
    side: Side,
) -> Result<Option<IntervalHit>> {
    check_interval_inputs(p, q)?;
    let k = mod_euclid(p, q);
    let a0 = (p - &k) / q;
    let sign = match side {
        Side::Upper => NormSign::Minus,
        Side::Lower => NormSign::Plus,
    };

    // k^2 = sign (mod q)
    let residue = &k * &k - BigInt::from(sign.value());
    if !mod_euclid(&residue, q).is_zero() {
        return Ok(None);
    }
    // 2 a0 = k (1 - sign k^2)/q (+ 1 for ring 1)  (mod q)
    let w = (BigInt::one() - BigInt::from(sign.value()) * &k * &k) / q;
    let mut target = &k * &w;
    if ring == Ring::Half {
        target += 1;
    }
    if !mod_euclid(&(&a0 * 2 - target), q).is_zero() {
        return Ok(None);
    }

    let qq = q * q;
    let (num, offset) = match ring {
        Ring::Sqrt => (p * p - BigInt::from(sign.value()), BigInt::zero()),
        Ring::Half => ((p * p - p * q - BigInt::from(sign.value())) * 4, BigInt::one()),
    };
    let (d, rem) = num.div_rem(&qq);
    assert!(rem.is_zero(), "the case congruences force divisibility");
    let d = d + offset;
    debug_assert!(d.is_positive() && !is_square_big(&d));
    Ok(Some(IntervalHit { d, norm: sign.value() }))
}

/// The quadratic polynomial f(T) = q_n^2 T^2 + A T + B attached to a
/// palindrome, with its feasible rings and element generators: d = f(T)/4
/// over q_n T + (-1)^n q_{n-1} r_{n-1} > 0, f(T) = 0 (mod 4) for ring 0, and
/// d = f(T) over q_n T + 1 + (-1)^n q_{n-1} r_{n-1} > 0, f(T) = 1 (mod 4)
/// for ring 1.
#[derive(Debug, Clone)]
pub struct HalterKochFamily {
    pub seq: SymmetricSeq,
    /// Leading coefficient q_n^2.
    pub lead: BigInt,
    pub a_coeff: BigInt,
    pub b_coeff: BigInt,
    pub ring0: Option<HkGenerator>,
    pub ring1: Option<HkGenerator>,
}

/// Arithmetic progression of admissible T values for one ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HkGenerator {
    pub ring: Ring,
    pub t_start: BigInt,
    pub t_step: u64,
}

impl HalterKochFamily {
    pub fn f(&self, t: &BigInt) -> BigInt {
        &self.lead * t * t + &self.a_coeff * t + &self.b_coeff
    }

    pub fn generator(&self, ring: Ring) -> Option<&HkGenerator> {
        match ring {
            Ring::Sqrt => self.ring0.as_ref(),
            Ring::Half => self.ring1.as_ref(),
        }
    }

    fn d_of_t(&self, g: &HkGenerator, t: &BigInt) -> BigInt {
        let ft = self.f(t);
        match g.ring {
            Ring::Sqrt => {
                let (d, rem) = ft.div_rem(&BigInt::from(4));
                assert!(rem.is_zero(), "f(T) = 0 mod 4 on the ring-0 class");
                d
            }
            Ring::Half => {
                debug_assert_eq!(mod_euclid(&ft, &BigInt::from(4)), BigInt::one());
                ft
            }
        }
    }

    /// All valid elements d <= bound for the ring, increasing; degenerate
    /// values (d <= 0 or square) are skipped.
    pub fn elements_up_to(&self, ring: Ring, bound: &BigInt) -> Option<Vec<BigInt>> {
        let g = self.generator(ring)?;
        let mut out = Vec::new();
        let mut t = g.t_start.clone();
        loop {
            let d = self.d_of_t(g, &t);
            if d > *bound {
                break;
            }
            if d.is_positive() && !is_square_big(&d) {
                out.push(d);
            }
            t += g.t_step;
        }
        Some(out)
    }

    /// First `count` valid elements for the ring.
    pub fn elements(&self, ring: Ring, count: usize) -> Option<Vec<BigInt>> {
        let g = self.generator(ring)?;
        let mut out = Vec::new();
        let mut t = g.t_start.clone();
        while out.len() < count {
            let d = self.d_of_t(g, &t);
            if d.is_positive() && !is_square_big(&d) {
                out.push(d);
            }
            t += g.t_step;
        }
        Some(out)
    }
}

/// Builds the polynomial family of a palindrome (Friesen / Halter-Koch form).
pub fn halter_koch_progression(seq: &[u64]) -> Result<HalterKochFamily> {
    let seq = SymmetricSeq::new(seq.to_vec())?;
    let m = continuant(seq.terms())?;
    let n = seq.len();
    let sgn = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let qn = &m.q_n;
    let qp = &m.q_prev;
    let rp = &m.r_prev;
    let qr = qp * rp;

    let lead = qn * qn;
    let a_coeff = qp * 4 + &sgn * qn * &qr * 2;
    let b_coeff = &qr * &qr + &sgn * rp * rp * 4;

    // Lowest T with q_n T + shift > 0 is floor(-shift/q_n) + 1.
    let t_floor = |shift: &BigInt| {
        let (mut quot, rem) = (-shift).div_rem(qn);
        if rem.is_positive() {
            quot += 1; // ceiling of -shift/q_n
        }
        if (&quot * qn + shift).is_positive() {
            quot
        } else {
            quot + 1
        }
    };
    // Advance t to the parity class, when one is required.
    let align = |mut t: BigInt, parity: Option<u8>| match parity {
        None => (t, 1u64),
        Some(want) => {
            if mod_euclid(&t, &BigInt::from(2)) != BigInt::from(want) {
                t += 1;
            }
            (t, 2u64)
        }
    };

    // Ring 0: q_n odd forces T even; q_n even needs q_{n-1} r_{n-1} even.
    let ring0 = if qn.is_odd() {
        let (t_start, t_step) = align(t_floor(&(&sgn * &qr)), Some(0));
        Some(HkGenerator { ring: Ring::Sqrt, t_start, t_step })
    } else if qr.is_even() {
        let (t_start, t_step) = align(t_floor(&(&sgn * &qr)), None);
        Some(HkGenerator { ring: Ring::Sqrt, t_start, t_step })
    } else {
        None
    };
    // Ring 1: q_n odd forces T odd; q_n even needs q_{n-1} r_{n-1} odd.
    let shift1 = &sgn * &qr + BigInt::one();
    let ring1 = if qn.is_odd() {
        let (t_start, t_step) = align(t_floor(&shift1), Some(1));
        Some(HkGenerator { ring: Ring::Half, t_start, t_step })
    } else if qr.is_odd() {
        let (t_start, t_step) = align(t_floor(&shift1), None);
        Some(HkGenerator { ring: Ring::Half, t_start, t_step })
    } else {
        None
    };

    Ok(HalterKochFamily { seq, lead, a_coeff, b_coeff, ring0, ring1 })
}

/// Comparison of one (sign, ring) case between the two parameterizations.
#[derive(Debug, Clone)]
pub struct CaseCheck {
    pub case_id: u8,
    pub sign: NormSign,
    pub ring: Ring,
    pub progression: Vec<BigInt>,
    pub halter_koch: Vec<BigInt>,
    pub equal: bool,
}

/// Report of the set equality check between the congruence progressions of a
/// key and the polynomial families of its palindromes.
#[derive(Debug, Clone)]
pub struct CrossCheckReport {
    pub y: BigInt,
    pub x: BigInt,
    pub bound: BigInt,
    pub cases: Vec<CaseCheck>,
    /// The (sign, ring) cases admitted by the two routes coincide.
    pub coverage_equal: bool,
    pub all_equal: bool,
}

/// Asserts set equality, up to `bound`, of the elements generated by
/// `progressions_for_key` and by `halter_koch_progression` applied to the
/// palindromes of x/y, ring by ring.
pub fn cross_check_parameterizations(
    y: &BigInt,
    x: &BigInt,
    bound: &BigInt,
) -> Result<CrossCheckReport> {
    let progressions = progressions_for_key(y, x)?;
    let variants = symmetric_form(&mod_euclid(x, y), y)?;

    let mut hk_cases: Vec<(NormSign, Ring, Vec<BigInt>)> = Vec::new();
    for v in &variants {
        let fam = halter_koch_progression(v.seq.terms())?;
        for ring in [Ring::Sqrt, Ring::Half] {
            if let Some(elems) = fam.elements_up_to(ring, bound) {
                hk_cases.push((v.sign, ring, elems));
            }
        }
    }

    let mut cases = Vec::new();
    let mut coverage_equal = hk_cases.len() == progressions.len();
    for prog in &progressions {
        let elems: Vec<BigInt> = prog
            .elements_up_to(bound)
            .pairs
            .into_iter()
            .map(|(_, d)| d)
            .collect();
        let hk = hk_cases
            .iter()
            .find(|(s, r, _)| *s == prog.key.sign && *r == prog.key.ring);
        let (hk_elems, equal) = match hk {
            Some((_, _, list)) => (list.clone(), *list == elems),
            None => {
                coverage_equal = false;
                (Vec::new(), false)
            }
        };
        cases.push(CaseCheck {
            case_id: prog.case_id,
            sign: prog.key.sign,
            ring: prog.key.ring,
            progression: elems,
            halter_koch: hk_elems,
            equal,
        });
    }
    let all_equal = coverage_equal && cases.iter().all(|c| c.equal);
    Ok(CrossCheckReport {
        y: y.clone(),
        x: x.clone(),
        bound: bound.clone(),
        cases,
        coverage_equal,
        all_equal,
    })
}
