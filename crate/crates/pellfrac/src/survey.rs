//! Sieves and density experiments: square-free counts (total and per residue
//! class), least-type densities via family enumeration, predecessor
//! densities, and partial-sum diagnostics for the dominance of least
//! elements. Counting is exact; floating point appears only in reported
//! ratios and power sums.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::arith::{is_square, isqrt};
use crate::error::{Error, Result};
use crate::inverse::{InverseKey, Progression};
use crate::quad::{NormSign, Ring};
use crate::surd::SurdExpansion;

/// Square-free flags for 1..=limit.
#[derive(Debug, Clone)]
pub struct SieveTable {
    pub limit: u64,
    flags: Vec<bool>,
}

impl SieveTable {
    pub fn is_squarefree(&self, n: u64) -> bool {
        debug_assert!(n >= 1 && n <= self.limit);
        self.flags[n as usize]
    }

    /// Number of square-free integers in 1..=limit.
    pub fn count(&self) -> u64 {
        self.flags.iter().filter(|&&b| b).count() as u64
    }

    /// Number of square-free n <= limit with n = c (mod k); no coprimality
    /// requirement here.
    pub fn count_in_class(&self, c: u64, k: u64) -> u64 {
        (1..=self.limit)
            .filter(|&n| n % k == c % k && self.flags[n as usize])
            .count() as u64
    }
}

/// Exact sieve marking every multiple of a square p^2 <= limit.
pub fn squarefree_sieve(limit: u64) -> SieveTable {
    let mut flags = vec![true; limit as usize + 1];
    if !flags.is_empty() {
        flags[0] = false;
    }
    let mut p = 2u64;
    while p * p <= limit {
        let sq = (p * p) as usize;
        let mut m = sq;
        while m <= limit as usize {
            flags[m] = false;
            m += sq;
        }
        p += 1;
    }
    SieveTable { limit, flags }
}

/// Exact count of square-free n <= limit with n = c (mod k), gcd(c, k) = 1.
pub fn squarefree_in_class(limit: u64, c: u64, k: u64) -> Result<u64> {
    if k == 0 || num_integer::gcd(c, k) != 1 {
        return Err(Error::NotCoprimeClass { c, k });
    }
    Ok(squarefree_sieve(limit).count_in_class(c, k))
}

/// Marks every non-least d <= limit for the given ring: the retained
/// elements beyond the minimum of each reduced family with
/// y-tilde <= sqrt(limit).
pub fn non_least_marks(limit: u64, ring: Ring) -> Vec<bool> {
    let mut marks = vec![false; limit as usize + 1];
    let root = isqrt(limit);
    let bound = BigInt::from(limit);
    for y in 1..=(2 * root + 2) {
        let y_tilde = if y % 2 == 0 { y / 2 } else { y };
        if y_tilde > root {
            continue; // second element of every family would exceed the limit
        }
        for x in 0..y.max(1) {
            for sign in [NormSign::Minus, NormSign::Plus] {
                let target = match sign {
                    NormSign::Plus => 1 % y,
                    NormSign::Minus => (y - 1) % y,
                };
                if (x * x) % y != target {
                    continue;
                }
                let Ok(key) = InverseKey::new(
                    BigInt::from(y),
                    BigInt::from(x),
                    sign,
                    ring,
                ) else {
                    continue;
                };
                mark_family(key, limit, &bound, &mut marks);
            }
        }
    }
    marks
}

fn mark_family(key: InverseKey, limit: u64, bound: &BigInt, marks: &mut [bool]) {
    let palindrome = key.palindrome().expect("admissible key has a palindrome");
    let needed_period = palindrome.len() + 1;
    let prog = Progression::new(key.clone());
    let elems = prog.elements_up_to(bound).pairs;
    if elems.len() < 2 {
        return; // nothing beyond a potential minimum within the limit
    }
    let first = elems[0].1.to_u64().expect("bounded by the limit");
    let discarded = crate::cf::expand_omega(first, key.ring)
        .expect("family elements are non-square")
        .period_len()
        < needed_period;
    let skip = if discarded { 2 } else { 1 };
    for (_, d) in elems.into_iter().skip(skip) {
        let d = d.to_u64().expect("bounded by the limit");
        debug_assert!(d <= limit);
        marks[d as usize] = true;
    }
}

/// Counts of the least-type survey over square-free d <= limit.
///
/// `squarefree_total` and the residue-class counts include d = 1;
/// the least counts range over square-free d > 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub limit: u64,
    pub total_nonsquares: u64,
    pub squarefree_total: u64,
    /// Square-free counts in classes 1, 2, 3 mod 4.
    pub squarefree_mod4: [u64; 3],
    /// Square-free d that are the least of their ring-0 family.
    pub squarefree_least0: u64,
    /// Square-free d = 1 (mod 4) that are the least of their ring-1 family.
    pub squarefree_least1: u64,
    /// Square-free d > 1 with the ring matched to d mod 4 and d least.
    pub least_type_fields: u64,
    /// Square-free d > 1 that are not of the least type.
    pub non_least_type: u64,
}

impl DensityReport {
    /// |S(N) and least-to-0| / |S(N)|
    pub fn ratio_least0(&self) -> (u64, u64) {
        (self.squarefree_least0, self.squarefree_total)
    }

    /// |S(N) and least-to-1| / S(N; 1, 4)
    pub fn ratio_least1(&self) -> (u64, u64) {
        (self.squarefree_least1, self.squarefree_mod4[0])
    }
}

/// Runs the least-type survey by enumerating families (keys with
/// y-tilde <= sqrt(N)) rather than classifying each d; the per-d
/// classification path serves as the oracle in tests.
pub fn least_type_density(limit: u64) -> DensityReport {
    let sieve = squarefree_sieve(limit);
    let marks0 = non_least_marks(limit, Ring::Sqrt);
    let marks1 = non_least_marks(limit, Ring::Half);

    let mut report = DensityReport {
        limit,
        total_nonsquares: 0,
        squarefree_total: if limit >= 1 { 1 } else { 0 }, // d = 1
        squarefree_mod4: if limit >= 1 { [1, 0, 0] } else { [0, 0, 0] },
        squarefree_least0: 0,
        squarefree_least1: 0,
        least_type_fields: 0,
        non_least_type: 0,
    };
    for d in 2..=limit {
        if is_square(d) {
            continue;
        }
        report.total_nonsquares += 1;
        if !sieve.is_squarefree(d) {
            continue;
        }
        report.squarefree_total += 1;
        let class = (d % 4) as usize;
        debug_assert_ne!(class, 0);
        report.squarefree_mod4[class - 1] += 1;
        let least0 = !marks0[d as usize];
        if least0 {
            report.squarefree_least0 += 1;
        }
        let least_type = if d % 4 == 1 {
            let least1 = !marks1[d as usize];
            if least1 {
                report.squarefree_least1 += 1;
            }
            least1
        } else {
            least0
        };
        if least_type {
            report.least_type_fields += 1;
        } else {
            report.non_least_type += 1;
        }
    }
    report
}

/// Empirical count of d whose omega_d expansion starts with the prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredecessorDensity {
    pub prefix: Vec<u64>,
    pub limit: u64,
    pub ring: Ring,
    /// Non-square d <= limit (= 1 mod 4 for ring 1) matching the prefix.
    pub count: u64,
    /// 1 / (q_m (q_m + q_{m-1})) as an exact fraction.
    pub expected_num: BigInt,
    pub expected_den: BigInt,
}

impl PredecessorDensity {
    /// count/N for ring 0, 4 count/N for ring 1.
    pub fn empirical_ratio(&self) -> f64 {
        let scale = match self.ring {
            Ring::Sqrt => 1.0,
            Ring::Half => 4.0,
        };
        scale * self.count as f64 / self.limit as f64
    }

    pub fn expected_ratio(&self) -> f64 {
        self.expected_num.to_f64().unwrap() / self.expected_den.to_f64().unwrap()
    }
}

fn omega_prefix_matches(d: u64, ring: Ring, prefix: &[u64]) -> bool {
    let mut it = SurdExpansion::new(d, ring);
    it.next(); // a0 is free
    prefix.iter().all(|&want| it.next().is_some_and(|(a, _)| a == want))
}

/// Counts non-square d <= limit (ring 0), or d = 1 (mod 4) for ring 1, whose
/// expansion begins [a0, a_1, ..., a_m, *], split across `jobs` workers.
pub fn predecessor_density(
    prefix: &[u64],
    limit: u64,
    ring: Ring,
    jobs: usize,
) -> PredecessorDensity {
    assert!(!prefix.is_empty() && prefix.iter().all(|&a| a > 0));
    let m = crate::symmetry::continuant(prefix).expect("positive prefix terms");
    let expected_den = &m.q_n * (&m.q_n + &m.q_prev);

    let matches = |d: u64| -> bool {
        if is_square(d) {
            return false;
        }
        if ring == Ring::Half && d % 4 != 1 {
            return false;
        }
        omega_prefix_matches(d, ring, prefix)
    };

    let jobs = jobs.clamp(1, 64).min(limit.max(1) as usize);
    let count = if jobs == 1 {
        (2..=limit).filter(|&d| matches(d)).count() as u64
    } else {
        // Fixed chunking keeps the count independent of scheduling.
        let chunk = limit.div_ceil(jobs as u64).max(1);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs as u64)
                .map(|j| {
                    let lo = (2 + j * chunk).min(limit + 1);
                    let hi = (1 + (j + 1) * chunk).min(limit);
                    let matches = &matches;
                    scope.spawn(move || {
                        if lo > hi {
                            0u64
                        } else {
                            (lo..=hi).filter(|&d| matches(d)).count() as u64
                        }
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker")).sum()
        })
    };

    PredecessorDensity {
        prefix: prefix.to_vec(),
        limit,
        ring,
        count,
        expected_num: BigInt::from(1u32),
        expected_den,
    }
}

/// Partial sums of d^(-s) over least-to-0 d and over all non-squares d <= N.
#[derive(Debug, Clone)]
pub struct ZetaDiagnostic {
    pub s: f64,
    pub limit: u64,
    pub sum_least: f64,
    pub sum_nonsquare: f64,
    /// sum_nonsquare - sum_least: the mass of non-least d up to the limit.
    pub difference: f64,
    /// difference / sum_nonsquare: the fraction of the partial non-square
    /// mass missed by the least elements; shrinks as the limit grows.
    pub relative_difference: f64,
}

/// Computes both partial sums at exponent s > 1 with ascending, deterministic
/// summation order.
pub fn zeta_partial_diagnostic(s: f64, limit: u64) -> ZetaDiagnostic {
    assert!(s > 1.0, "the diagnostic needs s > 1");
    let marks0 = non_least_marks(limit, Ring::Sqrt);
    let mut sum_least = 0.0f64;
    let mut sum_nonsquare = 0.0f64;
    for d in 2..=limit {
        if is_square(d) {
            continue;
        }
        let term = (d as f64).powf(-s);
        sum_nonsquare += term;
        if !marks0[d as usize] {
            sum_least += term;
        }
    }
    let difference = sum_nonsquare - sum_least;
    ZetaDiagnostic {
        s,
        limit,
        sum_least,
        sum_nonsquare,
        difference,
        relative_difference: difference / sum_nonsquare,
    }
}

/// Oracle route for the survey: marks non-least d <= limit by classifying
/// each d individually.
pub fn non_least_marks_by_classify(limit: u64, ring: Ring) -> Vec<bool> {
    let mut marks = vec![false; limit as usize + 1];
    for d in 2..=limit {
        if is_square(d) || (ring == Ring::Half && d % 4 != 1) {
            continue;
        }
        let c = crate::least_type::classify(d, ring).expect("valid input");
        marks[d as usize] = !c.is_least;
    }
    marks
}
