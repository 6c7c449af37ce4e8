//! Local and standard rationalizability, the gamma-hull and the gamma-cores.
//!
//! A family `(R^A)_A` locally rationalizes a choice function `C` when for
//! every feasible `A`:
//!
//! 1. `R^A` is complete and acyclic on `A`,
//! 2. `C(A) = max_{R^A} A`,
//! 3. `R^B ⊆ R^A` whenever `B ⊆ A`.
//!
//! Classification is computed twice, once from the expansion axioms and
//! once from the local revealed preference family, and the two answers must
//! agree.

mod cores;
mod hull;

pub use cores::{
    gamma_core, gamma_core_family, strict_gamma_core, weak_gamma_core, CoreVariant, PathReading,
};
pub use hull::{gamma_hull, hull_by_intersection, hull_oracle};

use std::fmt;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::axioms::{check_axiom, AxiomId, Verdict};
use crate::choice::{ChoiceTable, RelationFamily};
use crate::relation::{Relation, RelationClass};
use crate::universe::{FSet, Universe};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatError {
    #[error("choice table and relation family are over different universes")]
    UniverseMismatch,
    #[error("axiom route and witness route disagree: {0}")]
    InternalMismatch(String),
    #[error("constructed family is not a local rationalization: {0:?}")]
    InvalidFamily(FamilyViolation),
    #[error("precondition failed: {0}")]
    PreconditionFailed(&'static str),
    #[error("n = {0} is out of range for this computation")]
    OutOfRange(usize),
}

/// Which local rationalizability condition a family breaks, and where.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyViolation {
    /// (i): `R^A` leaves `x`, `y` unrelated.
    Incomplete { set: FSet, x: usize, y: usize },
    /// (i): the strict part of `R^A` has a cycle.
    Cyclic { set: FSet },
    /// (ii): `max_{R^A} A ≠ C(A)`.
    ChoiceMismatch {
        set: FSet,
        chosen: FSet,
        maximal: FSet,
    },
    /// (iii): `x R^B y` but not `x R^A y` for `B ⊆ A`.
    NotMonotone {
        subset: FSet,
        set: FSet,
        x: usize,
        y: usize,
    },
}

impl FamilyViolation {
    pub fn display<'a>(&'a self, u: &'a Universe) -> impl fmt::Display + 'a {
        ViolationDisplay(self, u)
    }
}

struct ViolationDisplay<'a>(&'a FamilyViolation, &'a Universe);

impl fmt::Display for ViolationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = self.1;
        match *self.0 {
            FamilyViolation::Incomplete { set, x, y } => write!(
                f,
                "(i) incomplete on A={}: {} ? {}",
                u.format_set(set),
                u.label(x),
                u.label(y)
            ),
            FamilyViolation::Cyclic { set } => {
                write!(f, "(i) strict cycle on A={}", u.format_set(set))
            }
            FamilyViolation::ChoiceMismatch {
                set,
                chosen,
                maximal,
            } => write!(
                f,
                "(ii) A={} chosen {} maximal {}",
                u.format_set(set),
                u.format_set(chosen),
                u.format_set(maximal)
            ),
            FamilyViolation::NotMonotone { subset, set, x, y } => write!(
                f,
                "(iii) B={} A={}: {} R^B {} but not R^A",
                u.format_set(subset),
                u.format_set(set),
                u.label(x),
                u.label(y)
            ),
        }
    }
}

/// Checks whether `fam` locally rationalizes `c`.
///
/// Sets are visited in ascending mask order; within a set, (i) then (ii)
/// then (iii) over its subsets. (iii) is evaluated together with its
/// strict-part form `P^A ∩ (B × B) ⊆ P^B`, which must agree with it on
/// complete families.
pub fn validate_family(
    c: &ChoiceTable,
    fam: &RelationFamily,
) -> Result<Verdict<FamilyViolation>, RatError> {
    if !(**c.universe() == **fam.universe()) {
        return Err(RatError::UniverseMismatch);
    }
    let mut first: Option<FamilyViolation> = None;
    let mut all_complete = true;
    let mut mismatch = None;
    let strict: Vec<Relation> = std::iter::once(Relation::empty(FSet::EMPTY))
        .chain(fam.iter().map(|(_, r)| r.strict_part()))
        .collect();
    for (a, r) in fam.iter() {
        if let Some((x, y)) = r.incompleteness_witness() {
            all_complete = false;
            first.get_or_insert(FamilyViolation::Incomplete { set: a, x, y });
        } else if !r.is_acyclic() {
            first.get_or_insert(FamilyViolation::Cyclic { set: a });
        }
        let maximal = r.maximal_in(a);
        if maximal != c.get(a) {
            first.get_or_insert(FamilyViolation::ChoiceMismatch {
                set: a,
                chosen: c.get(a),
                maximal,
            });
        }
        let strict_a = &strict[a.index()];
        for b in a.subsets() {
            let rb = fam.get(b);
            let outside = rb.first_pair_outside(r);
            let weak_ok = outside.is_none();
            let strict_ok = b.iter().all(|x| {
                strict_a
                    .row(x)
                    .intersection(b)
                    .is_subset(strict[b.index()].row(x))
            });
            if weak_ok != strict_ok && mismatch.is_none() {
                mismatch = Some((a, b));
            }
            if let Some((x, y)) = outside {
                first.get_or_insert(FamilyViolation::NotMonotone {
                    subset: b,
                    set: a,
                    x,
                    y,
                });
            }
        }
        if first.is_some() && !all_complete {
            break;
        }
    }
    if all_complete {
        if let Some((a, b)) = mismatch {
            return Err(RatError::InternalMismatch(format!(
                "inclusion and strict-part inclusion disagree for B={b:?} ⊆ A={a:?}"
            )));
        }
    }
    Ok(first.map_or(Verdict::Holds, Verdict::Fails))
}

/// Strength of (local) rationalizability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RatClass {
    None,
    Acyclic,
    QuasiTransitive,
    PipTransitive,
    Transitive,
}

impl RatClass {
    pub fn name(self) -> &'static str {
        match self {
            RatClass::None => "none",
            RatClass::Acyclic => "acyclic",
            RatClass::QuasiTransitive => "quasi_transitive",
            RatClass::PipTransitive => "pip_transitive",
            RatClass::Transitive => "transitive",
        }
    }

    /// Strongest level a single complete relation reaches.
    pub fn of_relation(class: &RelationClass) -> RatClass {
        if class.transitive {
            RatClass::Transitive
        } else if class.pip_transitive {
            RatClass::PipTransitive
        } else if class.quasi_transitive {
            RatClass::QuasiTransitive
        } else if class.acyclic {
            RatClass::Acyclic
        } else {
            RatClass::None
        }
    }
}

impl fmt::Display for RatClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Local rationalizability class from the expansion axioms alone.
pub fn local_class_by_axioms(c: &ChoiceTable) -> RatClass {
    let holds = |id| check_axiom(c, id).holds();
    if !holds(AxiomId::Gamma) {
        RatClass::None
    } else if holds(AxiomId::BetaPlus) {
        RatClass::Transitive
    } else if holds(AxiomId::GammaPlus) {
        RatClass::PipTransitive
    } else if holds(AxiomId::EpsilonPlus) {
        RatClass::QuasiTransitive
    } else {
        RatClass::Acyclic
    }
}

/// Local rationalizability class read off the local revealed preference
/// family: `None` unless it rationalizes `c`, otherwise the weakest member.
pub fn local_class_by_family(c: &ChoiceTable) -> Result<RatClass, RatError> {
    let fam = c.local_revealed_preference();
    if !validate_family(c, &fam)?.holds() {
        return Ok(RatClass::None);
    }
    let mut level = RatClass::Transitive;
    for (_, r) in fam.iter() {
        let class = r
            .classify()
            .map_err(|e| RatError::InternalMismatch(e.to_string()))?;
        level = level.min(RatClass::of_relation(&class));
    }
    Ok(level)
}

/// Strongest local rationalizability class of `c`, by both routes.
pub fn local_rat_class(c: &ChoiceTable) -> Result<RatClass, RatError> {
    let by_axioms = local_class_by_axioms(c);
    let by_family = local_class_by_family(c)?;
    if by_axioms != by_family {
        return Err(RatError::InternalMismatch(format!(
            "local class: axioms say {by_axioms}, revealed preference family says {by_family}"
        )));
    }
    Ok(by_axioms)
}

/// Standard rationalizability class from α, γ and the expansion axioms.
pub fn standard_class_by_axioms(c: &ChoiceTable) -> RatClass {
    let holds = |id| check_axiom(c, id).holds();
    if !holds(AxiomId::Alpha) || !holds(AxiomId::Gamma) {
        RatClass::None
    } else if holds(AxiomId::BetaPlus) {
        RatClass::Transitive
    } else if holds(AxiomId::W4) {
        RatClass::PipTransitive
    } else if holds(AxiomId::EpsilonPlus) {
        RatClass::QuasiTransitive
    } else {
        RatClass::Acyclic
    }
}

/// Whether `R_C` rationalizes `c`, and its class if so.
pub fn standard_class_by_revealed_preference(c: &ChoiceTable) -> Result<RatClass, RatError> {
    let r = c.revealed_preference();
    let rationalizes = c
        .universe()
        .feasible_sets()
        .all(|a| r.maximal_in(a) == c.get(a));
    if !rationalizes {
        return Ok(RatClass::None);
    }
    let class = r
        .classify()
        .map_err(|e| RatError::InternalMismatch(e.to_string()))?;
    Ok(RatClass::of_relation(&class))
}

/// Strongest (global) rationalizability class of `c`, by both routes.
pub fn standard_rat_class(c: &ChoiceTable) -> Result<RatClass, RatError> {
    let by_axioms = standard_class_by_axioms(c);
    let by_relation = standard_class_by_revealed_preference(c)?;
    if by_axioms != by_relation {
        return Err(RatError::InternalMismatch(format!(
            "standard class: axioms say {by_axioms}, revealed preference says {by_relation}"
        )));
    }
    Ok(by_axioms)
}

/// A rationalizing family that is not coarser than local revealed
/// preference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeCounterexample {
    pub family: RelationFamily,
    pub set: FSet,
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub verdict: Verdict<ProbeCounterexample>,
    /// Perturbed families that passed validation.
    pub accepted: usize,
    /// Perturbed families that were discarded.
    pub rejected: usize,
}

/// Samples rationalizing families near the local revealed preference family
/// and checks that each one contains it.
///
/// Each trial applies a few random single-pair edits to the revealed
/// preference family, closing them under monotonicity: adding `x R^A y` adds
/// it to every superset of `A`, removing it removes it from every subset of
/// `A` containing `x` and `y`. Candidates failing [`validate_family`] are
/// discarded and another trial is drawn.
pub fn finest_family_probe(
    c: &ChoiceTable,
    trials: usize,
    seed: u64,
) -> Result<ProbeReport, RatError> {
    if !check_axiom(c, AxiomId::Gamma).holds() {
        return Err(RatError::PreconditionFailed(
            "choice function violates gamma",
        ));
    }
    let lrp = c.local_revealed_preference();
    let u = c.universe().clone();
    let big: Vec<FSet> = u.feasible_sets().filter(|a| a.len() >= 2).collect();
    let mut report = ProbeReport {
        verdict: Verdict::Holds,
        accepted: 0,
        rejected: 0,
    };
    if big.is_empty() {
        report.accepted = trials;
        return Ok(report);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_attempts = trials.saturating_mul(50).max(1);
    let mut attempts = 0;
    while report.accepted < trials && attempts < max_attempts {
        attempts += 1;
        let mut fam = lrp.clone();
        for _ in 0..rng.random_range(1..=3) {
            let a = *big.choose(&mut rng).expect("nonempty");
            let members: Vec<usize> = a.iter().collect();
            let x = *members.choose(&mut rng).expect("nonempty");
            let y = *members.choose(&mut rng).expect("nonempty");
            if x == y {
                continue;
            }
            let pair = FSet::pair(x, y);
            if fam.get(a).weak(x, y) {
                for b in a.subsets().filter(|b| pair.is_subset(*b)) {
                    let r = fam.get(b).without_pair(x, y);
                    fam.set(r).expect("carrier unchanged");
                }
            } else {
                for b in u.feasible_sets().filter(|b| a.is_subset(*b)) {
                    let r = fam.get(b).with_pair(x, y);
                    fam.set(r).expect("carrier unchanged");
                }
            }
        }
        if !validate_family(c, &fam)?.holds() {
            report.rejected += 1;
            continue;
        }
        report.accepted += 1;
        if let Some(set) = u
            .feasible_sets()
            .find(|&a| !lrp.get(a).is_subrelation_of(fam.get(a)))
        {
            let (x, y) = lrp
                .get(set)
                .first_pair_outside(fam.get(set))
                .expect("not a subrelation");
            report.verdict = Verdict::Fails(ProbeCounterexample {
                family: fam,
                set,
                x,
                y,
            });
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::choice::{example_table, table_from_labels};
    use crate::universe::Universe;

    fn gamma_violator() -> ChoiceTable {
        let u = Arc::new(Universe::new(["x", "y", "z"]).unwrap());
        table_from_labels(
            &u,
            &[
                (&["x", "y"], &["x"]),
                (&["x", "z"], &["x"]),
                (&["y", "z"], &["y"]),
                (&["x", "y", "z"], &["y"]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn example_is_locally_rationalized_by_lrp() {
        let t = example_table();
        let fam = t.local_revealed_preference();
        assert_eq!(validate_family(&t, &fam), Ok(Verdict::Holds));
    }

    #[test]
    fn flipped_pair_breaks_choice_condition() {
        let t = example_table();
        let mut fam = t.local_revealed_preference();
        let xy = FSet::pair(0, 1);
        fam.set(Relation::linear_order(&[1, 0])).unwrap();
        assert_eq!(
            validate_family(&t, &fam),
            Ok(Verdict::Fails(FamilyViolation::ChoiceMismatch {
                set: xy,
                chosen: FSet::singleton(0),
                maximal: FSet::singleton(1),
            }))
        );
    }

    #[test]
    fn total_indifference_family_only_fits_coarsest() {
        let t = example_table();
        let u = t.universe().clone();
        let fam = RelationFamily::from_fn(u.clone(), Relation::total_indifference).unwrap();
        let v = validate_family(&t, &fam).unwrap();
        assert!(matches!(
            v,
            Verdict::Fails(FamilyViolation::ChoiceMismatch { .. })
        ));
        let coarse = ChoiceTable::coarsest(u);
        assert!(validate_family(&coarse, &fam).unwrap().holds());
    }

    #[test]
    fn incomplete_and_non_monotone_families_detected() {
        let t = example_table();
        let mut fam = t.local_revealed_preference();
        // Drop y R z from R^{x,y,z} while R^{y,z} keeps it; y and z become
        // unrelated there.
        let full = fam.get(FSet::full(3)).without_pair(1, 2);
        fam.set(full).unwrap();
        let v = validate_family(&t, &fam).unwrap();
        assert!(matches!(
            v.witness(),
            Some(FamilyViolation::Incomplete { .. })
        ));

        // Pairs all indifferent, C({x,y,z}) = {x,y}; R^{x,y,z} = {x P z, x I y,
        // y I z} fits every choice but drops z R x from R^{x,z}.
        let u = t.universe().clone();
        let c = table_from_labels(&u, &[(&["x", "y", "z"], &["x", "y"])]).unwrap();
        let mut fam = RelationFamily::from_fn(u, Relation::total_indifference).unwrap();
        fam.set(Relation::total_indifference(FSet::full(3)).without_pair(2, 0))
            .unwrap();
        assert_eq!(
            validate_family(&c, &fam),
            Ok(Verdict::Fails(FamilyViolation::NotMonotone {
                subset: FSet::pair(0, 2),
                set: FSet::full(3),
                x: 2,
                y: 0,
            }))
        );
    }

    #[test]
    fn classes_of_example() {
        let t = example_table();
        assert_eq!(local_rat_class(&t), Ok(RatClass::Transitive));
        assert_eq!(standard_rat_class(&t), Ok(RatClass::None));
        let coarse = ChoiceTable::coarsest(t.universe().clone());
        assert_eq!(local_rat_class(&coarse), Ok(RatClass::Transitive));
        assert_eq!(local_rat_class(&gamma_violator()), Ok(RatClass::None));
    }

    #[test]
    fn standard_classes_of_rationalized_tables() {
        let u = Arc::new(Universe::new(["x", "y", "z"]).unwrap());
        let lin =
            ChoiceTable::rationalized_by(u.clone(), &Relation::linear_order(&[2, 0, 1])).unwrap();
        assert_eq!(standard_rat_class(&lin), Ok(RatClass::Transitive));
        // x P y, y I z, x I z
        let qt = Relation::from_fn(u.full(), |a, b| !(a == 1 && b == 0));
        let t = ChoiceTable::rationalized_by(u, &qt).unwrap();
        // With three alternatives quasi-transitivity already gives PIP.
        assert_eq!(standard_rat_class(&t), Ok(RatClass::PipTransitive));
        assert_eq!(local_rat_class(&t), Ok(RatClass::PipTransitive));
    }

    #[test]
    fn probe_on_example() {
        let t = example_table();
        let report = finest_family_probe(&t, 100, 7).unwrap();
        assert!(report.verdict.holds());
        assert!(report.accepted > 0);
        assert_eq!(
            finest_family_probe(&gamma_violator(), 10, 1).map(|r| r.verdict),
            Err(RatError::PreconditionFailed(
                "choice function violates gamma"
            ))
        );
    }
}
