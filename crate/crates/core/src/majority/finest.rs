use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::axioms::{check_axiom, AxiomId, Verdict};
use crate::choice::ChoiceTable;
use crate::populations::{sample_rng, TableSpace};
use crate::rationalization::{local_rat_class, RatClass};
use crate::relation::Relation;
use crate::universe::{FSet, Universe};

use super::{rule_table, MajorityError, MarginMatrix, RuleId};

/// A "finest choice function" claim: the rule is the finest choice function
/// with the given base relation that satisfies the filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FinestProp {
    /// Gillies uncovered set; quasi-transitive local rationalizability and
    /// weak idempotency.
    Gillies,
    /// Top cycle; transitive local rationalizability.
    TopCycle,
    /// Bordes uncovered set; quasi-transitive local rationalizability and (∗).
    Bordes,
    /// McKelvey uncovered set; quasi-transitive local rationalizability,
    /// weak idempotency and (∗).
    McKelvey,
    /// Deep uncovered set; quasi-transitive local rationalizability and the
    /// strengthened (∗).
    Deep,
}

impl FinestProp {
    pub const ALL: [FinestProp; 5] = [
        FinestProp::Gillies,
        FinestProp::TopCycle,
        FinestProp::Bordes,
        FinestProp::McKelvey,
        FinestProp::Deep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FinestProp::Gillies => "prop1",
            FinestProp::TopCycle => "prop2",
            FinestProp::Bordes => "bordes",
            FinestProp::McKelvey => "mckelvey",
            FinestProp::Deep => "deep",
        }
    }

    pub fn rule(self) -> RuleId {
        match self {
            FinestProp::Gillies => RuleId::UcGillies,
            FinestProp::TopCycle => RuleId::TopCycle,
            FinestProp::Bordes => RuleId::UcBordes,
            FinestProp::McKelvey => RuleId::UcMcKelvey,
            FinestProp::Deep => RuleId::UcDeep,
        }
    }

    fn required_class(self) -> RatClass {
        match self {
            FinestProp::TopCycle => RatClass::Transitive,
            _ => RatClass::QuasiTransitive,
        }
    }

    fn extra_axioms(self) -> &'static [AxiomId] {
        match self {
            FinestProp::Gillies => &[AxiomId::WeakIdempotency],
            FinestProp::TopCycle => &[],
            FinestProp::Bordes => &[AxiomId::Star],
            FinestProp::McKelvey => &[AxiomId::WeakIdempotency, AxiomId::Star],
            FinestProp::Deep => &[AxiomId::StarStrong],
        }
    }

    /// Whether `c` passes the rule's axiom filter.
    pub fn admits(self, c: &ChoiceTable) -> Result<bool, MajorityError> {
        if !self
            .extra_axioms()
            .iter()
            .all(|&id| check_axiom(c, id).holds())
        {
            return Ok(false);
        }
        let class = local_rat_class(c).map_err(|e| MajorityError::Internal(e.to_string()))?;
        Ok(class >= self.required_class())
    }
}

impl fmt::Display for FinestProp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FinestProp {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FinestProp::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown finest-rule check `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FinestMode {
    /// Every completion of the base relation (`n ≤ 4`).
    Exhaustive,
    /// `budget` seeded uniform completions.
    Sample,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FinestViolation {
    /// The rule's own table fails the filter.
    RuleNotAdmitted { rule_table: ChoiceTable },
    /// A table passing the filter is not coarser than the rule.
    NotRefinement {
        rule_table: ChoiceTable,
        table: ChoiceTable,
        set: FSet,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinestReport {
    pub checked: u64,
    pub admitted: u64,
    pub verdict: Verdict<FinestViolation>,
}

/// Checks one finest-choice claim over completions of `base`.
///
/// The rule is evaluated on unit margins realizing `base`. Completions fix
/// every pairwise choice to `base` and let larger sets range freely. The
/// reported violation is the one with the smallest completion index.
pub fn finest_check(
    prop: FinestProp,
    base: &Relation,
    mode: FinestMode,
    budget: u64,
    seed: u64,
) -> Result<FinestReport, MajorityError> {
    let n = base.carrier().len();
    if base.carrier() != FSet::full(n) || n == 0 {
        return Err(MajorityError::OutOfRange(n));
    }
    if mode == FinestMode::Exhaustive && n > 4 {
        return Err(MajorityError::OutOfRange(n));
    }
    let universe = Arc::new(Universe::alphabetic(n).map_err(|_| MajorityError::OutOfRange(n))?);
    let margins = MarginMatrix::from_base(universe.clone(), base)?;
    let rule = rule_table(prop.rule(), &margins, None, None)?;
    if !prop.admits(&rule)? {
        return Ok(FinestReport {
            checked: 0,
            admitted: 0,
            verdict: Verdict::Fails(FinestViolation::RuleNotAdmitted { rule_table: rule }),
        });
    }
    let space = TableSpace::pinned(universe, base)?;
    let (count, table_at): (u64, Box<dyn Fn(u64) -> ChoiceTable + Sync>) = match mode {
        FinestMode::Exhaustive => (space.len() as u64, Box::new(|i| space.get(u128::from(i)))),
        FinestMode::Sample => (budget, Box::new(|i| space.sample(&mut sample_rng(seed, i)))),
    };

    let outcome = (0..count)
        .into_par_iter()
        .map(|i| -> Result<(u64, Option<u64>), MajorityError> {
            let t = table_at(i);
            if !prop.admits(&t)? {
                return Ok((0, None));
            }
            let bad = rule.refinement_witness(&t)?.is_some();
            Ok((1, bad.then_some(i)))
        })
        .try_reduce(
            || (0, None),
            |a, b| {
                let first = match (a.1, b.1) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                Ok((a.0 + b.0, first))
            },
        )?;

    let verdict = match outcome.1 {
        None => Verdict::Holds,
        Some(i) => {
            let table = table_at(i);
            let set = rule
                .refinement_witness(&table)?
                .expect("recorded as violation");
            Verdict::Fails(FinestViolation::NotRefinement {
                rule_table: rule,
                table,
                set,
            })
        }
    };
    Ok(FinestReport {
        checked: count,
        admitted: outcome.0,
        verdict,
    })
}
