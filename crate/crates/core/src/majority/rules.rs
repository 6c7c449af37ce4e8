use std::fmt;
use std::str::FromStr;

use super::{MajorityError, MarginMatrix, Profile, TieBreakOrder};
use crate::choice::ChoiceTable;
use crate::relation::{closure, maximin_path_strengths, Relation, RelationError, Strength};
use crate::universe::FSet;

/// Social choice functions.
///
/// The first seven are majoritarian: each is `A ↦ max_{R^A} A` for a family
/// of relations built from the weak majority relation. The last four read
/// the ballot profile directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    TopCycle,
    UcGillies,
    UcBordes,
    UcMcKelvey,
    UcDeep,
    SplitCycle,
    TwoStage,
    Copeland,
    Borda,
    Omninomination,
    Pareto,
}

impl RuleId {
    pub const ALL: [RuleId; 11] = [
        RuleId::TopCycle,
        RuleId::UcGillies,
        RuleId::UcBordes,
        RuleId::UcMcKelvey,
        RuleId::UcDeep,
        RuleId::SplitCycle,
        RuleId::TwoStage,
        RuleId::Copeland,
        RuleId::Borda,
        RuleId::Omninomination,
        RuleId::Pareto,
    ];

    pub const UNCOVERED: [RuleId; 4] = [
        RuleId::UcGillies,
        RuleId::UcBordes,
        RuleId::UcMcKelvey,
        RuleId::UcDeep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::TopCycle => "topcycle",
            RuleId::UcGillies => "uc-gillies",
            RuleId::UcBordes => "uc-bordes",
            RuleId::UcMcKelvey => "uc-mckelvey",
            RuleId::UcDeep => "uc-deep",
            RuleId::SplitCycle => "splitcycle",
            RuleId::TwoStage => "tsmc",
            RuleId::Copeland => "copeland",
            RuleId::Borda => "borda",
            RuleId::Omninomination => "omni",
            RuleId::Pareto => "pareto",
        }
    }

    pub fn needs_profile(self) -> bool {
        matches!(
            self,
            RuleId::Copeland | RuleId::Borda | RuleId::Omninomination | RuleId::Pareto
        )
    }

    pub fn needs_tiebreak(self) -> bool {
        self == RuleId::TwoStage
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

/// Which witness clause widens the majority relation in a covering relation.
#[derive(Clone, Copy)]
enum Cover {
    /// `x R̄ z P̄ y`
    Gillies,
    /// `x P̄ z R̄ y`
    Bordes,
    McKelvey,
    /// `x R̄ z R̄ y`
    Deep,
}

fn covering(base: &Relation, a: FSet, kind: Cover) -> Relation {
    Relation::from_fn(a, |x, y| {
        base.weak(x, y)
            || a.iter().any(|z| {
                let gillies = base.weak(x, z) && base.strict(z, y);
                let bordes = base.strict(x, z) && base.weak(z, y);
                match kind {
                    Cover::Gillies => gillies,
                    Cover::Bordes => bordes,
                    Cover::McKelvey => gillies || bordes,
                    Cover::Deep => base.weak(x, z) && base.weak(z, y),
                }
            })
    })
}

fn check_set(m: &MarginMatrix, a: FSet) -> Result<(), MajorityError> {
    let full = m.universe().full();
    if a.is_empty() || !a.is_subset(full) {
        return Err(RelationError::CarrierMismatch {
            carrier: full,
            got: a,
        }
        .into());
    }
    Ok(())
}

/// The locally rationalizing relation `R^A` of a majoritarian rule.
///
/// Each relation is built from its weak-relation definition; strict parts
/// are derived as `R` minus its converse.
pub fn rule_relation(
    rule: RuleId,
    m: &MarginMatrix,
    a: FSet,
    tie: Option<&TieBreakOrder>,
) -> Result<Relation, MajorityError> {
    check_set(m, a)?;
    let base = m.majority_base();
    let rel = match rule {
        RuleId::TopCycle => {
            let local = base.restrict_unchecked(a);
            Relation::from_rows(a, &closure(local.raw_rows(), a))
        }
        RuleId::UcGillies => covering(&base, a, Cover::Gillies),
        RuleId::UcBordes => covering(&base, a, Cover::Bordes),
        RuleId::UcMcKelvey => covering(&base, a, Cover::McKelvey),
        RuleId::UcDeep => covering(&base, a, Cover::Deep),
        RuleId::SplitCycle => {
            let strengths = maximin_path_strengths(m, a)?;
            Relation::from_fn(a, |x, y| {
                m.get(x, y) >= 0 || strengths.get(x, y) >= Strength::Finite(m.get(y, x))
            })
        }
        RuleId::TwoStage => {
            let tie = tie.ok_or(MajorityError::MissingTieBreak(rule))?;
            if tie.len() != m.len() {
                return Err(MajorityError::InvalidTieBreak);
            }
            Relation::from_fn(a, |x, y| {
                base.weak(x, y)
                    || (tie.prefers(x, y)
                        && a.iter().any(|z| base.strict(z, y) && tie.prefers(z, y)))
            })
        }
        _ => return Err(MajorityError::NotMajoritarian(rule)),
    };
    Ok(rel)
}

/// Winners of `rule` in the feasible set `a`.
pub fn evaluate_rule(
    rule: RuleId,
    m: &MarginMatrix,
    a: FSet,
    tie: Option<&TieBreakOrder>,
    profile: Option<&Profile>,
) -> Result<FSet, MajorityError> {
    check_set(m, a)?;
    let winners = if rule.needs_profile() {
        let p = profile.ok_or(MajorityError::MissingProfile(rule))?;
        if p.universe() != m.universe() {
            return Err(MajorityError::UniverseMismatch);
        }
        profile_rule(rule, m, p, a)
    } else {
        rule_relation(rule, m, a, tie)?.maximal_in(a)
    };
    if winners.is_empty() {
        return Err(MajorityError::EmptyWinnerSet(rule, a));
    }
    Ok(winners)
}

fn argmax(a: FSet, score: impl Fn(usize) -> i64) -> FSet {
    let best = a.iter().map(&score).max().unwrap_or(0);
    a.iter().filter(|&x| score(x) == best).collect()
}

fn profile_rule(rule: RuleId, m: &MarginMatrix, p: &Profile, a: FSet) -> FSet {
    match rule {
        RuleId::Copeland => argmax(a, |x| {
            a.iter()
                .map(|y| i64::from(m.get(x, y) > 0) - i64::from(m.get(y, x) > 0))
                .sum()
        }),
        RuleId::Borda => argmax(a, |x| {
            p.ballots()
                .iter()
                .map(|b| {
                    let below = a.iter().filter(|&y| b.prefers(x, y)).count() as i64;
                    i64::from(b.count()) * below
                })
                .sum()
        }),
        RuleId::Omninomination => p.ballots().iter().filter_map(|b| b.top_in(a)).collect(),
        RuleId::Pareto => a
            .iter()
            .filter(|&x| {
                !a.iter()
                    .any(|y| y != x && p.ballots().iter().all(|b| b.prefers(y, x)))
            })
            .collect(),
        _ => unreachable!("majoritarian rules are evaluated through their relations"),
    }
}

/// `rule` evaluated on every feasible set.
///
/// For the majoritarian rules the resulting pairwise choices are checked
/// against majority rule.
pub fn rule_table(
    rule: RuleId,
    m: &MarginMatrix,
    tie: Option<&TieBreakOrder>,
    profile: Option<&Profile>,
) -> Result<ChoiceTable, MajorityError> {
    let u = m.universe().clone();
    let mut choice = vec![FSet::EMPTY; 1 << u.len()];
    for a in u.feasible_sets() {
        choice[a.index()] = evaluate_rule(rule, m, a, tie, profile)?;
    }
    let table = ChoiceTable::from_raw(u, choice);
    if !rule.needs_profile() && table.base_relation() != m.majority_base() {
        return Err(MajorityError::BaseMismatch(rule));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::universe::{SharedUniverse, Universe};

    fn abc() -> SharedUniverse {
        Arc::new(Universe::new(["a", "b", "c"]).unwrap())
    }

    fn cycle() -> MarginMatrix {
        MarginMatrix::from_edges(abc(), [(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap()
    }

    fn set(ix: &[usize]) -> FSet {
        FSet::from_indices(ix.iter().copied())
    }

    #[test]
    fn split_cycle_example() {
        let m = MarginMatrix::from_edges(abc(), [(0, 1, 1), (1, 2, 3), (2, 0, 5)]).unwrap();
        assert_eq!(
            evaluate_rule(RuleId::SplitCycle, &m, FSet::full(3), None, None),
            Ok(set(&[1]))
        );
    }

    #[test]
    fn two_stage_example() {
        let tie = TieBreakOrder::identity(3);
        assert_eq!(
            evaluate_rule(RuleId::TwoStage, &cycle(), FSet::full(3), Some(&tie), None),
            Ok(set(&[0]))
        );
        assert_eq!(
            evaluate_rule(RuleId::TwoStage, &cycle(), FSet::full(3), None, None),
            Err(MajorityError::MissingTieBreak(RuleId::TwoStage))
        );
    }

    #[test]
    fn top_cycle_examples() {
        assert_eq!(
            evaluate_rule(RuleId::TopCycle, &cycle(), FSet::full(3), None, None),
            Ok(FSet::full(3))
        );
        let m = MarginMatrix::from_edges(abc(), [(1, 0, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        assert_eq!(
            evaluate_rule(RuleId::TopCycle, &m, FSet::full(3), None, None),
            Ok(set(&[1]))
        );
    }

    #[test]
    fn gillies_versus_mckelvey() {
        // a P̄ b, b P̄ c, a I c
        let m = MarginMatrix::from_edges(abc(), [(0, 1, 1), (1, 2, 1)]).unwrap();
        let full = FSet::full(3);
        assert_eq!(
            evaluate_rule(RuleId::UcGillies, &m, full, None, None),
            Ok(set(&[0, 2]))
        );
        assert_eq!(
            evaluate_rule(RuleId::UcMcKelvey, &m, full, None, None),
            Ok(full)
        );
        let g = rule_relation(RuleId::UcGillies, &m, full, None).unwrap();
        assert!(g.weak(2, 1));
        let mk = rule_relation(RuleId::UcMcKelvey, &m, full, None).unwrap();
        assert!(mk.weak(1, 0));
    }

    #[test]
    fn pairs_follow_majority() {
        let tie = TieBreakOrder::identity(3);
        let win = MarginMatrix::from_edges(abc(), [(0, 1, 2)]).unwrap();
        let p = Profile::new(abc(), [(1, vec![0, 1, 2])]).unwrap();
        for rule in RuleId::ALL {
            if rule.needs_profile() {
                continue;
            }
            let got = evaluate_rule(rule, &win, set(&[0, 1]), Some(&tie), None).unwrap();
            assert_eq!(got, set(&[0]), "{rule}");
            // a and c are tied: both survive, tie-break or not.
            let got = evaluate_rule(rule, &win, set(&[0, 2]), Some(&tie), None).unwrap();
            assert_eq!(got, set(&[0, 2]), "{rule}");
        }
        let m = p.margins();
        for rule in [
            RuleId::Copeland,
            RuleId::Borda,
            RuleId::Omninomination,
            RuleId::Pareto,
        ] {
            assert_eq!(
                evaluate_rule(rule, &m, set(&[0, 1]), None, Some(&p)),
                Ok(set(&[0]))
            );
            assert_eq!(
                evaluate_rule(rule, &m, set(&[0, 1]), None, None),
                Err(MajorityError::MissingProfile(rule))
            );
        }
    }

    #[test]
    fn profile_rules_on_small_profile() {
        // a>b>c, b>a>c
        let p = Profile::new(abc(), [(1, vec![0, 1, 2]), (1, vec![1, 0, 2])]).unwrap();
        let m = p.margins();
        let full = FSet::full(3);
        let eval = |r| evaluate_rule(r, &m, full, None, Some(&p)).unwrap();
        assert_eq!(eval(RuleId::Omninomination), set(&[0, 1]));
        assert_eq!(eval(RuleId::Pareto), set(&[0, 1]));
        assert_eq!(eval(RuleId::Borda), set(&[0, 1]));
        assert_eq!(eval(RuleId::Copeland), set(&[0, 1]));
    }

    #[test]
    fn tables_are_based_on_majority() {
        let tie = TieBreakOrder::identity(3);
        for rule in RuleId::ALL.into_iter().filter(|r| !r.needs_profile()) {
            let t = rule_table(rule, &cycle(), Some(&tie), None).unwrap();
            assert_eq!(t.base_relation(), cycle().majority_base());
        }
    }

    #[test]
    fn rejects_foreign_sets() {
        assert!(matches!(
            evaluate_rule(RuleId::TopCycle, &cycle(), FSet::singleton(5), None, None),
            Err(MajorityError::Relation(
                RelationError::CarrierMismatch { .. }
            ))
        ));
        assert!(rule_relation(RuleId::Borda, &cycle(), FSet::full(3), None).is_err());
    }

    #[test]
    fn names_round_trip() {
        for r in RuleId::ALL {
            assert_eq!(r.name().parse(), Ok(r));
        }
    }
}
