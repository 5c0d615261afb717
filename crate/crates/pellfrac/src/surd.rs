//! Quadratic surd states (P + sqrt(d))/Q driving the periodic expansion.

use crate::arith::isqrt;
use crate::quad::Ring;

/// State (P + sqrt(d))/Q of the expansion recurrence, with Q | d - P^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    pub p: i64,
    pub q: i64,
    pub d: u64,
}

impl QuadraticSurd {
    /// Initial state of omega_d: sqrt(d) = (0 + sqrt(d))/1 or (1 + sqrt(d))/2.
    ///
    /// Callers must have validated (d, ring) via `Ring::check`.
    pub fn omega(d: u64, ring: Ring) -> QuadraticSurd {
        match ring {
            Ring::Sqrt => QuadraticSurd { p: 0, q: 1, d },
            Ring::Half => QuadraticSurd { p: 1, q: 2, d },
        }
    }

    /// The invariant Q | d - P^2 maintained by the recurrence.
    pub fn invariant_holds(&self) -> bool {
        self.q != 0 && (self.d as i64 - self.p * self.p) % self.q == 0
    }

    /// Floor of the surd. Valid for the Q > 0 states produced by the
    /// expansion of omega_d.
    pub fn floor(&self, sqrt_d: u64) -> u64 {
        debug_assert!(self.q > 0);
        let num = self.p + sqrt_d as i64;
        debug_assert!(num >= 0);
        (num / self.q) as u64
    }

    /// One step of the expansion: returns the partial quotient a and the next
    /// total quotient 1/(self - a).
    pub fn step(&self, sqrt_d: u64) -> (u64, QuadraticSurd) {
        let a = self.floor(sqrt_d);
        let p_next = a as i64 * self.q - self.p;
        let q_next = (self.d as i64 - p_next * p_next) / self.q;
        let next = QuadraticSurd {
            p: p_next,
            q: q_next,
            d: self.d,
        };
        debug_assert!(next.invariant_holds());
        (a, next)
    }
}

/// Iterator over the partial quotients of omega_d, yielding surd states.
#[derive(Debug, Clone)]
pub struct SurdExpansion {
    state: QuadraticSurd,
    sqrt_d: u64,
}

impl SurdExpansion {
    pub fn new(d: u64, ring: Ring) -> SurdExpansion {
        SurdExpansion {
            state: QuadraticSurd::omega(d, ring),
            sqrt_d: isqrt(d),
        }
    }

    /// State of the current total quotient (before the next partial quotient
    /// is emitted).
    pub fn state(&self) -> QuadraticSurd {
        self.state
    }
}

impl Iterator for SurdExpansion {
    type Item = (u64, QuadraticSurd);

    fn next(&mut self) -> Option<(u64, QuadraticSurd)> {
        let (a, next) = self.state.step(self.sqrt_d);
        let emitted = self.state;
        self.state = next;
        Some((a, emitted))
    }
}
