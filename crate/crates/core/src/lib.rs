//! Exact computation with finitely generated subsemigroups of the direct
//! products `N x N`, `N^k` and `N x S` for a finite semigroup `S`.
//!
//! * [`semigroup`]: finite semigroups by Cayley table, Green's relations and
//!   the union-of-groups / relative-identity predicates.
//! * [`separating`]: strongly 3-separating integer sets and their greedy
//!   extension.
//! * [`graded`]: graded truncated closures, layer sequences and generator
//!   extraction for subsemigroups of the products.
//! * [`witness`]: the concrete families whose members are pairwise
//!   non-isomorphic.
//! * [`oracle`]: brute-force relation enumeration, isomorphism
//!   semi-decision and small-semigroup census used to cross-check the rest.
//! * [`suites`]: named verification batteries run by the CLI.

pub mod graded;
pub mod oracle;
pub mod semigroup;
pub mod separating;
pub mod suites;
pub mod witness;

pub use graded::{
    Ambient, Fiber, GeneratedSub, GradedElement, GradedError, LayerSequence, NumericalForm,
    Truncation,
};
pub use oracle::{
    IsoVerdict, MapViolation, NonIsoWitness, OracleError, Preservation, RelationGroup,
    RelationTable,
};
pub use semigroup::{FiniteSemigroup, GreenStructure, PowerProfile, SemigroupError};
pub use separating::{SeparatingError, SeparatingSet, Verdict};
pub use witness::{
    Expression, FamilyMember, Freeness, GeneratorMap, PairCertificate, RelationWitness,
    TripleCriterion, WitnessError,
};
