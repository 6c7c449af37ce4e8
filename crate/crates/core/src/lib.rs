//! Local rationalizability of choice functions over small finite universes.
//!
//! Feasible sets are bitmasks over at most 16 alternatives. A
//! [`ChoiceTable`] stores one choice per feasible set; the [`axioms`],
//! [`rationalization`] and [`majority`] modules decide consistency
//! conditions, classify rationalizing families and evaluate majoritarian
//! rules. [`harness`] sweeps whole populations of tables against a catalog of
//! claims and reports replayable counterexamples.

pub mod axioms;
pub mod choice;
pub mod harness;
pub mod majority;
pub mod populations;
pub mod rationalization;
pub mod relation;
pub mod universe;

pub use axioms::{check_axiom, AxiomId, Verdict, Witness};
pub use choice::{ChoiceError, ChoiceTable, RelationFamily};
pub use majority::{
    evaluate_rule, rule_table, MajorityError, MarginMatrix, Profile, RuleId, TieBreakOrder,
};
pub use rationalization::{
    gamma_hull, local_rat_class, standard_rat_class, validate_family, RatClass, RatError,
};
pub use relation::{Relation, RelationClass, RelationError};
pub use universe::{FSet, SharedUniverse, Universe, UniverseError, MAX_ALTERNATIVES};
