//! Error type shared by every module of the crate.

use num_bigint::BigInt;

/// Errors raised by the exact-arithmetic operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// The input must be a non-square integer greater than 1.
    #[error("square input: {0} is a perfect square")]
    SquareInput(u64),

    /// Ring 1 (half-integers) requires d = 1 (mod 4).
    #[error("ring mismatch: d = {0} is not congruent to 1 mod 4")]
    RingMismatch(u64),

    /// The expansion state machine works on d below 2^62.
    #[error("input too large: d = {0} exceeds the supported range")]
    InputTooLarge(u64),

    /// The partial-sum diagnostic needs an exponent greater than 1.
    #[error("the diagnostic exponent must exceed 1")]
    ExponentTooSmall,

    /// The quotient-norm bound is only asserted for discriminants D > 16;
    /// the four smaller ones are covered by their tabulated expansions.
    #[error("small discriminant: D = {0} <= 16 is exempt from the bound")]
    SmallDiscriminant(u64),

    /// A rational equal to 1 has the two expansions [1] and [0,1] only.
    #[error("unit input: 1 has no canonical short/long expansion pair")]
    UnitInput,

    /// Continued fraction sequences must be nonempty.
    #[error("empty continued fraction sequence")]
    EmptySequence,

    /// Partial quotients after the first must be positive.
    #[error("nonpositive term in continued fraction sequence")]
    NonpositiveTerm,

    /// A partial quotient did not fit the machine-word term representation.
    #[error("partial quotient exceeds the supported 64-bit term range")]
    TermOverflow,

    /// The sequence is not equal to its reverse.
    #[error("sequence is not a palindrome")]
    NotPalindrome,

    /// Numerator and denominator must be coprime.
    #[error("inputs are not coprime")]
    NotCoprime,

    /// x^2 is not congruent to +1 or -1 modulo y.
    #[error("no symmetric representation: {x}^2 is not +-1 mod {y}")]
    NotRepresentable { y: BigInt, x: BigInt },

    /// y does not divide x^2 - sign.
    #[error("not an integer: {y} does not divide {x}^2 - ({sign})")]
    NotInteger { y: BigInt, x: BigInt, sign: i8 },

    /// Attached intervals are defined for p/q >= 4.
    #[error("below threshold: p/q = {p}/{q} < 4")]
    BelowThreshold { p: BigInt, q: BigInt },

    /// The requested ring is not admissible for this key.
    #[error("ring infeasible for key (y = {y}, x = {x}, sign = {sign})")]
    RingInfeasible { y: BigInt, x: BigInt, sign: i8 },

    /// The Ankeny-Artin-Chowla check needs a prime input.
    #[error("not a prime: {0}")]
    NotPrime(u64),

    /// The Ankeny-Artin-Chowla check needs p = 1 (mod 4).
    #[error("wrong residue: {0} is not 1 mod 4")]
    WrongResidue(u64),

    /// The non-least unit bound applies only to non-least elements.
    #[error("d = {0} is the least element of its family")]
    IsLeast(u64),

    /// Field classification requires a square-free d.
    #[error("not square-free: {0}")]
    NotSquareFree(u64),

    /// Square-free counts in a residue class require gcd(c, k) = 1.
    #[error("residue class {c} mod {k} is not reduced")]
    NotCoprimeClass { c: u64, k: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
