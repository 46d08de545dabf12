//! Exact enumeration, classification, counting and verification of
//! small-step lattice walk models confined to the positive octant.

pub mod census;
pub mod classify;
pub mod counting;
pub mod group;
pub mod guess;
pub mod hadamard;
pub mod modp;
pub mod stepset;
pub mod symbolic;
pub mod verify;

pub use census::{appendix_polynomials, burnside_census, CensusPolynomial, CensusPredicate};
pub use stepset::{
    canonical_code, dimension, enumerate_models, enumerate_quadrant_models, lemma1d_check,
    parse_model, project_to_quadrant, projected_quadrant_models, unused_steps, Axis,
    DimensionAnalysis, ModelFilter, QuadrantModel, QuadrantStep, Step, StepSet,
};
pub use group::{
    check_extraction, explore_group, orbit_sum, ElementVerdict, ExtractionReport, FiniteGroup,
    GroupElement, GroupError, GroupResult, GroupSetup,
};
pub use group::GroupReport;
pub use counting::{
    count_coloured, count_mixed, count_octant, count_quadrant, octant_series, reflection_combine,
    CountError, CountTable, Mode, SeriesExport,
};
pub use hadamard::{detect_hadamard, hadamard_assemble, HadamardDecomposition, HadamardKind};
pub use verify::{
    verify_algebraic_results, verify_closed_form, verify_extraction, verify_functional_equation,
    Status, VerificationReport, VerifyError,
};
pub use guess::{guess_precursive, verify_candidate, GuessError, RecurrenceCandidate};
pub use classify::{
    classify_model, scope_models, ClassificationRecord, ClassifyOptions, ModelRef, Scope, ScopeTable, Summary,
};
pub use symbolic::{LaurentPoly, RatFunc, TruncatedSeries};
