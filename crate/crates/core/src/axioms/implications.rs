use std::sync::Arc;

use crate::choice::ChoiceTable;
use crate::populations::{all_complete_relations, sample_rng, TableSpace};
use crate::universe::Universe;

use super::{check_axiom, AxiomError, AxiomId};

/// Seeded samples added to the `n = 4` population.
const SAMPLES_N4: u64 = 20_000;
const SAMPLE_SEED: u64 = 0x5eed;

/// `premise ⇒ conclusion` (both conjunctions) over a population.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationCheck {
    pub premise: &'static [AxiomId],
    pub conclusion: &'static [AxiomId],
    pub checked: u64,
    pub counterexample: Option<ChoiceTable>,
}

/// A table satisfying `premise` but not `conclusion`, if one was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConverseWitness {
    pub premise: &'static [AxiomId],
    pub conclusion: &'static [AxiomId],
    pub table: Option<ChoiceTable>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImplicationReport {
    pub n: usize,
    pub population: String,
    pub forward: Vec<ImplicationCheck>,
    pub converses: Vec<ConverseWitness>,
}

impl ImplicationReport {
    pub fn forward_holds(&self) -> bool {
        self.forward.iter().all(|c| c.counterexample.is_none())
    }

    pub fn all_converses_witnessed(&self) -> bool {
        self.converses.iter().all(|c| c.table.is_some())
    }
}

const FORWARD: [(&[AxiomId], &[AxiomId]); 3] = [
    (&[AxiomId::BetaPlus], &[AxiomId::GammaPlus]),
    (&[AxiomId::GammaPlus], &[AxiomId::Gamma]),
    (&[AxiomId::GammaPlus], &[AxiomId::EpsilonPlus]),
];

const CONVERSES: [(&[AxiomId], &[AxiomId]); 4] = [
    (&[AxiomId::Gamma], &[AxiomId::EpsilonPlus]),
    (&[AxiomId::EpsilonPlus], &[AxiomId::Gamma]),
    (
        &[AxiomId::Gamma, AxiomId::EpsilonPlus],
        &[AxiomId::GammaPlus],
    ),
    (&[AxiomId::GammaPlus], &[AxiomId::BetaPlus]),
];

fn all_hold(c: &ChoiceTable, ids: &[AxiomId]) -> bool {
    ids.iter().all(|&id| check_axiom(c, id).holds())
}

/// Checks the forward implications between the expansion axioms and looks
/// for a table refuting each converse.
///
/// For `n ≤ 3` every table is visited. For `n = 4` the population is every
/// table rationalized by an acyclic complete relation followed by seeded
/// uniform samples.
pub fn implication_witnesses(n: usize) -> Result<ImplicationReport, AxiomError> {
    if !(2..=4).contains(&n) {
        return Err(AxiomError::OutOfRange(n));
    }
    let universe = Arc::new(Universe::alphabetic(n).expect("n in range"));
    let space = TableSpace::all(universe.clone());
    let (population, tables): (String, Box<dyn Iterator<Item = ChoiceTable>>) = if n <= 3 {
        (
            format!("all {} tables", space.len()),
            Box::new(space.iter()),
        )
    } else {
        let rationalized: Vec<ChoiceTable> = all_complete_relations(n)
            .filter_map(|r| ChoiceTable::rationalized_by(universe.clone(), &r).ok())
            .collect();
        let sampled = (0..SAMPLES_N4).map(move |i| space.sample(&mut sample_rng(SAMPLE_SEED, i)));
        (
            format!(
                "{} rationalizable tables + {SAMPLES_N4} seeded samples",
                rationalized.len()
            ),
            Box::new(rationalized.into_iter().chain(sampled)),
        )
    };

    let mut forward: Vec<ImplicationCheck> = FORWARD
        .iter()
        .map(|&(premise, conclusion)| ImplicationCheck {
            premise,
            conclusion,
            checked: 0,
            counterexample: None,
        })
        .collect();
    let mut converses: Vec<ConverseWitness> = CONVERSES
        .iter()
        .map(|&(premise, conclusion)| ConverseWitness {
            premise,
            conclusion,
            table: None,
        })
        .collect();

    for t in tables {
        for check in &mut forward {
            check.checked += 1;
            if check.counterexample.is_none()
                && all_hold(&t, check.premise)
                && !all_hold(&t, check.conclusion)
            {
                check.counterexample = Some(t.clone());
            }
        }
        for w in &mut converses {
            if w.table.is_none() && all_hold(&t, w.premise) && !all_hold(&t, w.conclusion) {
                w.table = Some(t.clone());
            }
        }
    }

    Ok(ImplicationReport {
        n,
        population,
        forward,
        converses,
    })
}
