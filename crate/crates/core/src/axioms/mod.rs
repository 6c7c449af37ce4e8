//! Consistency conditions on choice functions.
//!
//! Every check quantifies over feasible sets in ascending mask order and
//! reports the first violation it meets, so witnesses are reproducible.

mod implications;

pub use implications::{
    implication_witnesses, ConverseWitness, ImplicationCheck, ImplicationReport,
};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::choice::ChoiceTable;
use crate::universe::{FSet, Universe};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("n = {0} is out of range (expected 2..=4)")]
    OutOfRange(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    /// `B ⊆ A` implies `C(A) ∩ B ⊆ C(B)`.
    Alpha,
    /// `C(A) ∩ C(B) ⊆ C(A ∪ B)`.
    Gamma,
    /// `C(A) ⊆ B ⊆ A` implies `C(B) ⊆ C(A)`.
    EpsilonPlus,
    /// `B ⊆ A` and `C(A) ∩ B ≠ ∅` imply `C(B) ⊆ C(A)`.
    BetaPlus,
    /// `C(A) ⊆ C(A ∪ B)` or `C(B) ⊆ C(A ∪ B)`.
    GammaPlus,
    /// Gamma-plus restricted to disjoint `A`, `B`.
    W4,
    /// `C(C(A)) = C(A)` whenever `|C(A)| = 2`.
    WeakIdempotency,
    /// For `|A| = 3`: `y ∈ C(A)` and `x P̄_C y` imply `x ∈ C(A)`.
    Star,
    /// For `|A| = 3`: `y ∈ C(A)` and `x R̄_C y` imply `x ∈ C(A)`.
    StarStrong,
}

impl AxiomId {
    pub const ALL: [AxiomId; 9] = [
        AxiomId::Alpha,
        AxiomId::Gamma,
        AxiomId::EpsilonPlus,
        AxiomId::BetaPlus,
        AxiomId::GammaPlus,
        AxiomId::W4,
        AxiomId::WeakIdempotency,
        AxiomId::Star,
        AxiomId::StarStrong,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::Alpha => "alpha",
            AxiomId::Gamma => "gamma",
            AxiomId::EpsilonPlus => "epsilon_plus",
            AxiomId::BetaPlus => "beta_plus",
            AxiomId::GammaPlus => "gamma_plus",
            AxiomId::W4 => "w4",
            AxiomId::WeakIdempotency => "weak_idempotency",
            AxiomId::Star => "star",
            AxiomId::StarStrong => "star_strong",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        AxiomId::ALL
            .into_iter()
            .find(|a| a.name() == s || a.name().replace('_', "-") == s)
            .ok_or_else(|| format!("unknown axiom `{s}`"))
    }
}

/// Outcome of a universally quantified check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<W = Witness> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }

    fn from_option(w: Option<W>) -> Self {
        w.map_or(Verdict::Holds, Verdict::Fails)
    }
}

/// Sets and (optionally) the alternative exhibiting a violation.
///
/// For `star`/`star_strong`, `b` is the pair `{x, y}` and `element` is the
/// missing `x`. For `weak_idempotency`, `b = C(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub a: FSet,
    pub b: FSet,
    pub element: Option<usize>,
}

impl Witness {
    pub fn display<'a>(&'a self, universe: &'a Universe) -> impl fmt::Display + 'a {
        WitnessDisplay(self, universe)
    }
}

struct WitnessDisplay<'a>(&'a Witness, &'a Universe);

impl fmt::Display for WitnessDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (w, u) = (self.0, self.1);
        write!(f, "A={} B={}", u.format_set(w.a), u.format_set(w.b))?;
        if let Some(e) = w.element {
            write!(f, " {}", u.label(e))?;
        }
        Ok(())
    }
}

/// Decides `id` on `c`. Base-relation conditions use `R̄_C` of `c` itself.
pub fn check_axiom(c: &ChoiceTable, id: AxiomId) -> Verdict {
    let w = match id {
        AxiomId::Alpha => alpha(c),
        AxiomId::Gamma => gamma(c),
        AxiomId::EpsilonPlus => epsilon_plus(c),
        AxiomId::BetaPlus => beta_plus(c),
        AxiomId::GammaPlus => gamma_plus(c, false),
        AxiomId::W4 => gamma_plus(c, true),
        AxiomId::WeakIdempotency => weak_idempotency(c),
        AxiomId::Star => star(c, true),
        AxiomId::StarStrong => star(c, false),
    };
    Verdict::from_option(w)
}

/// Whether a witness really violates its axiom on `c`.
pub fn replay(c: &ChoiceTable, id: AxiomId, w: &Witness) -> bool {
    let (a, b) = (w.a, w.b);
    let ca = c.get(a);
    let el = |set: FSet| w.element.is_some_and(|e| set.contains(e));
    match id {
        AxiomId::Alpha => b.is_subset(a) && el(ca.intersection(b).difference(c.get(b))),
        AxiomId::Gamma => el(ca.intersection(c.get(b)).difference(c.get(a.union(b)))),
        AxiomId::EpsilonPlus => ca.is_subset(b) && b.is_subset(a) && el(c.get(b).difference(ca)),
        AxiomId::BetaPlus => {
            b.is_subset(a) && !ca.intersection(b).is_empty() && el(c.get(b).difference(ca))
        }
        AxiomId::GammaPlus | AxiomId::W4 => {
            let cu = c.get(a.union(b));
            (id == AxiomId::GammaPlus || a.is_disjoint(b))
                && !ca.is_subset(cu)
                && !c.get(b).is_subset(cu)
        }
        AxiomId::WeakIdempotency => ca.len() == 2 && b == ca && c.get(ca) != ca,
        AxiomId::Star | AxiomId::StarStrong => {
            let Some(x) = w.element else { return false };
            let Some(y) = b.without(x).first() else {
                return false;
            };
            let pair = c.get(FSet::pair(x, y));
            let base_ok = if id == AxiomId::Star {
                pair == FSet::singleton(x)
            } else {
                pair.contains(x)
            };
            a.len() == 3
                && b.len() == 2
                && b.is_subset(a)
                && ca.contains(y)
                && !ca.contains(x)
                && base_ok
        }
    }
}

fn witness(a: FSet, b: FSet, bad: FSet) -> Option<Witness> {
    bad.first().map(|e| Witness {
        a,
        b,
        element: Some(e),
    })
}

fn alpha(c: &ChoiceTable) -> Option<Witness> {
    c.universe().feasible_sets().find_map(|a| {
        let ca = c.get(a);
        a.subsets()
            .find_map(|b| witness(a, b, ca.intersection(b).difference(c.get(b))))
    })
}

fn gamma(c: &ChoiceTable) -> Option<Witness> {
    let sets = c.universe().feasible_sets();
    sets.clone().find_map(|a| {
        let ca = c.get(a);
        sets.clone().find_map(|b| {
            witness(
                a,
                b,
                ca.intersection(c.get(b)).difference(c.get(a.union(b))),
            )
        })
    })
}

fn epsilon_plus(c: &ChoiceTable) -> Option<Witness> {
    c.universe().feasible_sets().find_map(|a| {
        let ca = c.get(a);
        a.subsets()
            .filter(|b| ca.is_subset(*b))
            .find_map(|b| witness(a, b, c.get(b).difference(ca)))
    })
}

fn beta_plus(c: &ChoiceTable) -> Option<Witness> {
    c.universe().feasible_sets().find_map(|a| {
        let ca = c.get(a);
        a.subsets()
            .filter(|b| !ca.is_disjoint(*b))
            .find_map(|b| witness(a, b, c.get(b).difference(ca)))
    })
}

fn gamma_plus(c: &ChoiceTable, disjoint_only: bool) -> Option<Witness> {
    let sets = c.universe().feasible_sets();
    sets.clone().find_map(|a| {
        let ca = c.get(a);
        sets.clone()
            .filter(|b| !disjoint_only || a.is_disjoint(*b))
            .find(|&b| {
                let cu = c.get(a.union(b));
                !ca.is_subset(cu) && !c.get(b).is_subset(cu)
            })
            .map(|b| Witness {
                a,
                b,
                element: None,
            })
    })
}

fn weak_idempotency(c: &ChoiceTable) -> Option<Witness> {
    c.universe().feasible_sets().find_map(|a| {
        let ca = c.get(a);
        (ca.len() == 2 && c.get(ca) != ca).then_some(Witness {
            a,
            b: ca,
            element: None,
        })
    })
}

/// `strict`: condition (∗) with `x P̄_C y`; otherwise its strengthening with
/// `x R̄_C y`.
fn star(c: &ChoiceTable, strict: bool) -> Option<Witness> {
    let base = c.base_relation();
    c.universe()
        .feasible_sets()
        .filter(|a| a.len() == 3)
        .find_map(|a| {
            let ca = c.get(a);
            a.iter().find_map(|x| {
                if ca.contains(x) {
                    return None;
                }
                ca.iter()
                    .find(|&y| {
                        if strict {
                            base.strict(x, y)
                        } else {
                            base.weak(x, y)
                        }
                    })
                    .map(|y| Witness {
                        a,
                        b: FSet::pair(x, y),
                        element: Some(x),
                    })
            })
        })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::choice::example_table;

    #[test]
    fn example_table_verdicts() {
        let t = example_table();
        let alpha = check_axiom(&t, AxiomId::Alpha);
        assert_eq!(
            alpha,
            Verdict::Fails(Witness {
                a: FSet::full(3),
                b: FSet::pair(0, 1),
                element: Some(1),
            })
        );
        assert!(replay(&t, AxiomId::Alpha, alpha.witness().unwrap()));
        assert!(check_axiom(&t, AxiomId::Gamma).holds());
        assert!(check_axiom(&t, AxiomId::BetaPlus).holds());
        assert!(check_axiom(&t, AxiomId::EpsilonPlus).holds());
        assert!(check_axiom(&t, AxiomId::GammaPlus).holds());
    }

    #[test]
    fn coarsest_satisfies_everything() {
        let t = ChoiceTable::coarsest(Arc::new(Universe::alphabetic(4).unwrap()));
        for id in AxiomId::ALL {
            assert!(check_axiom(&t, id).holds(), "{id}");
        }
    }

    #[test]
    fn gamma_violation_witness() {
        // C({x,y})={x}, C({x,z})={x}, C({y,z})={y}, C({x,y,z})={y}
        let u = Arc::new(Universe::new(["x", "y", "z"]).unwrap());
        let t = crate::choice::table_from_labels(
            &u,
            &[
                (&["x", "y"], &["x"]),
                (&["x", "z"], &["x"]),
                (&["y", "z"], &["y"]),
                (&["x", "y", "z"], &["y"]),
            ],
        )
        .unwrap();
        let v = check_axiom(&t, AxiomId::Gamma);
        let w = *v.witness().unwrap();
        assert_eq!(
            (w.a, w.b, w.element),
            (FSet::pair(0, 1), FSet::pair(0, 2), Some(0))
        );
        assert!(replay(&t, AxiomId::Gamma, &w));
    }

    #[test]
    fn star_and_idempotency() {
        // Pairs: x beats y, y beats z, z beats x; C({x,y,z}) = {x}.
        let u = Arc::new(Universe::new(["x", "y", "z"]).unwrap());
        let t = crate::choice::table_from_labels(
            &u,
            &[
                (&["x", "y"], &["x"]),
                (&["y", "z"], &["y"]),
                (&["x", "z"], &["z"]),
                (&["x", "y", "z"], &["x"]),
            ],
        )
        .unwrap();
        let v = check_axiom(&t, AxiomId::Star);
        let w = *v.witness().unwrap();
        assert_eq!(w.element, Some(2));
        assert!(replay(&t, AxiomId::Star, &w));
        assert!(!check_axiom(&t, AxiomId::StarStrong).holds());
        assert!(check_axiom(&t, AxiomId::WeakIdempotency).holds());

        let t2 = crate::choice::table_from_labels(
            &u,
            &[
                (&["x", "y"], &["x"]),
                (&["y", "z"], &["y"]),
                (&["x", "z"], &["z"]),
                (&["x", "y", "z"], &["x", "y"]),
            ],
        )
        .unwrap();
        let v = check_axiom(&t2, AxiomId::WeakIdempotency);
        assert!(replay(&t2, AxiomId::WeakIdempotency, v.witness().unwrap()));
    }

    #[test]
    fn parses_names() {
        assert_eq!("gamma_plus".parse(), Ok(AxiomId::GammaPlus));
        assert_eq!("beta-plus".parse(), Ok(AxiomId::BetaPlus));
        assert!("beta".parse::<AxiomId>().is_err());
    }
}
