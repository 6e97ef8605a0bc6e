//! Combinatorics on words around Shirshov's theorem.
//!
//! * [`word`]: alphabets, words, deg-lex order, occurrence scans.
//! * [`witness`]: p-power and (strong) q-decomposition witnesses.
//! * [`avoid`]: backtracking search for witness-free words.
//! * [`morphic`]: substitution fixed points, subword complexity, recurrence.
//! * [`construct`]: the windowed strong-decomposition construction and its certificate.
//! * [`identity`]: standard polynomials over exact rational matrices, quaternions.

pub mod avoid;
pub mod construct;
pub mod error;
pub mod identity;
pub mod morphic;
pub mod witness;
pub mod word;

pub use avoid::{longest_witness_free, verify_frontier, BoundClaim, BoundReport, SearchBudget};
pub use construct::{
    construct, estimate_l, required_length, select_markers, verify_certificate, InequalityRecord,
    StrongDecompCertificate, Violation,
};
pub use error::{Error, Result};
pub use identity::{
    amitsur_levitzski_check, quaternion_min_poly, spanning_constant, standard_polynomial, ExactMatrix,
    IdentityReport, Quaternion,
};
pub use morphic::{
    complexity, eventually_periodic_check, recurrence, ComplexityProfile, ComplexityValue, Generator,
    MorphicGenerator, RecurrenceProfile,
};
pub use witness::{
    analyze, check_decomposition, find_decomposable_subword, find_power, find_power_naive, verify_witness,
    AnalysisReport, AnalyzeOptions, DecompBudget, DecompSearch, DecompWitness, Mode, Outcome, PowerWitness,
    SearchStats, Witness,
};
pub use word::{deglex_cmp, Alphabet, Position, Word};
