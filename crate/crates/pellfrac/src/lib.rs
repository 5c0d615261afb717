//! Exact arithmetic for real quadratic irrationals: periodic continued
//! fractions of sqrt(d) and (1+sqrt(d))/2, fundamental units and Pell
//! equations, the inverse problem (which d produce a given partial-quotient
//! pattern), least-element classification of the resulting quadratic
//! progressions, and sieve-based density surveys.
//!
//! No floating point is used anywhere a decision is made; comparisons against
//! sqrt(d) are resolved by integer squaring, and logarithms appear only in
//! reporting helpers.

pub mod arith;
pub mod cf;
pub mod error;
pub mod inverse;
pub mod least_type;
pub mod pell;
pub mod quad;
pub mod surd;
pub mod survey;
pub mod symmetry;

pub use cf::{
    cf_to_rational, convergent_seeds, convergents, expand_omega, rational_two_expansions,
    verify_quotient_bound, xi_nu, Convergent, Expansion, QuotientBoundCheck, TwoExpansions,
};
pub use error::{Error, Result};
pub use inverse::{
    attached_intervals, cross_check_parameterizations, halter_koch_progression,
    integer_in_interval, progression_elements, progressions_for_key, AttachedInterval,
    CrossCheckReport, HalterKochFamily, IntervalHit, InverseKey, Progression,
    ProgressionElements, Side,
};
pub use least_type::{
    classify, is_least_type_field, non_least_unit_bound, reduced_family, Classification,
    FamilyRecord, NonLeastBound,
};
pub use pell::{
    aac_check, fundamental_unit, pell4_solutions, unit_size_stats, AacCheck, FundamentalUnit,
    PellSolution, UnitSizeStats,
};
pub use quad::{NormSign, QuadValue, QuadraticInteger, Ring};
pub use surd::QuadraticSurd;
pub use survey::{
    least_type_density, predecessor_density, squarefree_in_class, squarefree_sieve,
    zeta_partial_diagnostic, DensityReport, PredecessorDensity, SieveTable, ZetaDiagnostic,
};
pub use symmetry::{
    continuant, parity_of_t, rational_from_symmetric, symmetric_form, ContinuantMatrix, Parity,
    SymmetricSeq, SymmetricVariant,
};
