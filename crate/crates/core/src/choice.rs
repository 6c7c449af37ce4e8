//! Choice functions as fully materialized tables, and the preference
//! relations they reveal.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::relation::Relation;
use crate::universe::{FSet, SharedUniverse, Universe};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChoiceError {
    #[error("choice tables are defined over different universes")]
    UniverseMismatch,
    #[error("empty choice from {0:?}")]
    EmptyChoice(FSet),
    #[error("choice from {0:?} is not a subset of it")]
    ChoiceNotSubset(FSet),
    #[error("intersection of choices from {0:?} is empty")]
    EmptyIntersection(FSet),
    #[error("expected {expected} table slots, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("at least one choice table is required")]
    NoTables,
    #[error("family member for {0:?} has the wrong carrier")]
    WrongCarrier(FSet),
}

/// A choice function: every feasible set mapped to a nonempty subset.
///
/// Slot `A.index()` holds `C(A)`; slot 0 is unused.
#[derive(Clone, PartialEq, Eq)]
pub struct ChoiceTable {
    universe: SharedUniverse,
    choice: Vec<FSet>,
}

impl ChoiceTable {
    /// Validates and wraps a slot vector of length `2^n`.
    pub fn new(universe: SharedUniverse, mut choice: Vec<FSet>) -> Result<Self, ChoiceError> {
        let expected = 1usize << universe.len();
        if choice.len() != expected {
            return Err(ChoiceError::WrongLength {
                expected,
                got: choice.len(),
            });
        }
        choice[0] = FSet::EMPTY;
        for a in universe.feasible_sets() {
            let c = choice[a.index()];
            if c.is_empty() {
                return Err(ChoiceError::EmptyChoice(a));
            }
            if !c.is_subset(a) {
                return Err(ChoiceError::ChoiceNotSubset(a));
            }
        }
        Ok(ChoiceTable { universe, choice })
    }

    pub fn from_fn(
        universe: SharedUniverse,
        mut f: impl FnMut(FSet) -> FSet,
    ) -> Result<Self, ChoiceError> {
        let mut choice = vec![FSet::EMPTY; 1 << universe.len()];
        for a in universe.feasible_sets() {
            choice[a.index()] = f(a);
        }
        ChoiceTable::new(universe, choice)
    }

    pub(crate) fn from_raw(universe: SharedUniverse, choice: Vec<FSet>) -> Self {
        debug_assert!(ChoiceTable::new(universe.clone(), choice.clone()).is_ok());
        ChoiceTable { universe, choice }
    }

    /// `C(A) = A` everywhere.
    pub fn coarsest(universe: SharedUniverse) -> Self {
        let choice = (0..1u32 << universe.len()).map(FSet::from_mask).collect();
        ChoiceTable { universe, choice }
    }

    /// `A ↦ max_R A` for a relation on the whole universe.
    pub fn rationalized_by(universe: SharedUniverse, r: &Relation) -> Result<Self, ChoiceError> {
        if r.carrier() != universe.full() {
            return Err(ChoiceError::UniverseMismatch);
        }
        ChoiceTable::from_fn(universe, |a| r.maximal_in(a))
    }

    pub fn universe(&self) -> &SharedUniverse {
        &self.universe
    }

    pub fn n(&self) -> usize {
        self.universe.len()
    }

    /// `C(A)`.
    pub fn get(&self, a: FSet) -> FSet {
        self.choice[a.index()]
    }

    pub(crate) fn slots_mut(&mut self) -> &mut [FSet] {
        &mut self.choice
    }

    /// `(A, C(A))` in ascending mask order.
    pub fn iter(&self) -> impl Iterator<Item = (FSet, FSet)> + '_ {
        self.universe.feasible_sets().map(|a| (a, self.get(a)))
    }

    pub fn same_universe(&self, other: &ChoiceTable) -> bool {
        Arc::ptr_eq(&self.universe, &other.universe) || self.universe == other.universe
    }

    /// Base relation: `x R̄ y` iff `x ∈ C({x, y})`.
    pub fn base_relation(&self) -> Relation {
        Relation::from_fn(self.universe.full(), |x, y| {
            self.get(FSet::pair(x, y)).contains(x)
        })
    }

    /// Revealed preference: `x R_C y` iff `x ∈ C(A)` for some `A ∋ y`.
    pub fn revealed_preference(&self) -> Relation {
        let mut rows = vec![0u32; self.n()];
        for (a, c) in self.iter() {
            for x in c {
                rows[x] |= a.mask();
            }
        }
        Relation::from_rows(self.universe.full(), &rows)
    }

    /// Local revealed preference family: `x R^A_C y` iff some `B ⊆ A`
    /// has `y ∈ B` and `x ∈ C(B)`.
    ///
    /// Witness rows `C(B) × B` are pushed upward through the subset lattice
    /// with an OR-zeta transform, `O(2^n · n^2)` word operations.
    pub fn local_revealed_preference(&self) -> RelationFamily {
        let n = self.n();
        let size = 1usize << n;
        let mut rows = vec![0u32; size * n];
        for (a, c) in self.iter() {
            for x in c {
                rows[a.index() * n + x] = a.mask();
            }
        }
        for bit in 0..n {
            for mask in 0..size {
                if mask >> bit & 1 == 1 {
                    let lower = mask ^ (1 << bit);
                    for x in 0..n {
                        rows[mask * n + x] |= rows[lower * n + x];
                    }
                }
            }
        }
        let members = (0..size)
            .map(|mask| {
                Relation::from_rows(
                    FSet::from_mask(mask as u32),
                    &rows[mask * n..(mask + 1) * n],
                )
            })
            .collect();
        RelationFamily {
            universe: self.universe.clone(),
            members,
        }
    }

    /// First feasible set where `C(A) ⊄ other(A)`.
    pub fn refinement_witness(&self, other: &ChoiceTable) -> Result<Option<FSet>, ChoiceError> {
        if !self.same_universe(other) {
            return Err(ChoiceError::UniverseMismatch);
        }
        Ok(self
            .universe
            .feasible_sets()
            .find(|&a| !self.get(a).is_subset(other.get(a))))
    }

    /// `C(A) ⊆ other(A)` for every feasible `A`.
    pub fn is_refinement_of(&self, other: &ChoiceTable) -> Result<bool, ChoiceError> {
        Ok(self.refinement_witness(other)?.is_none())
    }

    /// Pointwise intersection.
    pub fn intersect(tables: &[ChoiceTable]) -> Result<ChoiceTable, ChoiceError> {
        let (first, rest) = tables.split_first().ok_or(ChoiceError::NoTables)?;
        if rest.iter().any(|t| !t.same_universe(first)) {
            return Err(ChoiceError::UniverseMismatch);
        }
        let mut out = first.clone();
        for a in first.universe.feasible_sets() {
            let c = rest
                .iter()
                .fold(first.get(a), |acc, t| acc.intersection(t.get(a)));
            if c.is_empty() {
                return Err(ChoiceError::EmptyIntersection(a));
            }
            out.choice[a.index()] = c;
        }
        Ok(out)
    }

    pub fn display(&self) -> impl fmt::Display + '_ {
        TableDisplay(self)
    }
}

impl fmt::Debug for ChoiceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (a, c) in self.iter() {
            if a.len() > 1 {
                m.entry(&a, &c);
            }
        }
        m.finish()
    }
}

/// `{x,y}: {x}` lines for non-singleton sets.
struct TableDisplay<'a>(&'a ChoiceTable);

impl fmt::Display for TableDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u = &self.0.universe;
        for (a, c) in self.0.iter().filter(|(a, _)| a.len() > 1) {
            writeln!(f, "{} -> {}", u.format_set(a), u.format_set(c))?;
        }
        Ok(())
    }
}

/// One relation per feasible set, `R^A` with carrier `A`.
///
/// Construction only checks carriers; the local rationalizability
/// conditions (completeness, acyclicity, monotonicity) are checked by
/// [`crate::rationalization::validate_family`].
#[derive(Clone, PartialEq, Eq)]
pub struct RelationFamily {
    universe: SharedUniverse,
    members: Vec<Relation>,
}

impl RelationFamily {
    pub fn from_fn(
        universe: SharedUniverse,
        mut f: impl FnMut(FSet) -> Relation,
    ) -> Result<Self, ChoiceError> {
        let mut members = vec![Relation::empty(FSet::EMPTY)];
        for a in universe.feasible_sets() {
            let r = f(a);
            if r.carrier() != a {
                return Err(ChoiceError::WrongCarrier(a));
            }
            members.push(r);
        }
        Ok(RelationFamily { universe, members })
    }

    pub fn universe(&self) -> &SharedUniverse {
        &self.universe
    }

    /// `R^A`.
    pub fn get(&self, a: FSet) -> &Relation {
        &self.members[a.index()]
    }

    /// Replaces one member, keeping the carrier check.
    pub fn set(&mut self, r: Relation) -> Result<(), ChoiceError> {
        let a = r.carrier();
        if a.is_empty() || !a.is_subset(self.universe.full()) {
            return Err(ChoiceError::WrongCarrier(a));
        }
        self.members[a.index()] = r;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (FSet, &Relation)> + '_ {
        self.universe.feasible_sets().map(|a| (a, self.get(a)))
    }

    /// `R^A ⊆ other^A` for every `A`.
    pub fn is_finer_than(&self, other: &RelationFamily) -> bool {
        self.iter().all(|(a, r)| r.is_subrelation_of(other.get(a)))
    }

    /// `A ↦ max_{R^A} A`, `None` if some maximum is empty.
    pub fn maximal_table(&self) -> Option<ChoiceTable> {
        let mut choice = vec![FSet::EMPTY; 1 << self.universe.len()];
        for (a, r) in self.iter() {
            let m = r.maximal_in(a);
            if m.is_empty() {
                return None;
            }
            choice[a.index()] = m;
        }
        Some(ChoiceTable::from_raw(self.universe.clone(), choice))
    }
}

impl fmt::Debug for RelationFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter()).finish()
    }
}

/// Builds a table from `(set, choice)` label lists; singletons default to
/// themselves. Mostly for tests and examples.
pub fn table_from_labels(
    universe: &SharedUniverse,
    rows: &[(&[&str], &[&str])],
) -> Result<ChoiceTable, Box<dyn std::error::Error + Send + Sync>> {
    let mut choice: Vec<FSet> = (0..1u32 << universe.len()).map(FSet::from_mask).collect();
    for (a, c) in rows {
        let a = universe.set_of(a.iter())?;
        choice[a.index()] = universe.set_of(c.iter())?;
    }
    Ok(ChoiceTable::new(universe.clone(), choice)?)
}

/// The three-alternative example table: `C({x,y,z}) = {x,y}`, `C({x,y}) = {x}`,
/// `C({y,z}) = {y}`, `C({x,z}) = {x}`.
pub fn example_table() -> ChoiceTable {
    let u = Arc::new(Universe::new(["x", "y", "z"]).expect("valid labels"));
    table_from_labels(
        &u,
        &[
            (&["x", "y", "z"], &["x", "y"]),
            (&["x", "y"], &["x"]),
            (&["y", "z"], &["y"]),
            (&["x", "z"], &["x"]),
        ],
    )
    .expect("valid table")
}

#[cfg(test)]
mod tests {
    use super::*;

    const X: usize = 0;
    const Y: usize = 1;
    const Z: usize = 2;

    fn xyz() -> SharedUniverse {
        Arc::new(Universe::new(["x", "y", "z"]).unwrap())
    }

    #[test]
    fn rejects_invalid_tables() {
        let u = xyz();
        let mut slots: Vec<FSet> = (0..8).map(FSet::from_mask).collect();
        slots[3] = FSet::EMPTY;
        assert_eq!(
            ChoiceTable::new(u.clone(), slots.clone()),
            Err(ChoiceError::EmptyChoice(FSet::from_mask(3)))
        );
        slots[3] = FSet::from_mask(4);
        assert_eq!(
            ChoiceTable::new(u.clone(), slots),
            Err(ChoiceError::ChoiceNotSubset(FSet::from_mask(3)))
        );
        assert!(matches!(
            ChoiceTable::new(u, vec![FSet::EMPTY; 3]),
            Err(ChoiceError::WrongLength { .. })
        ));
    }

    #[test]
    fn base_relation_of_example() {
        let b = example_table().base_relation();
        assert!(b.strict(X, Y) && b.strict(Y, Z) && b.strict(X, Z));
        assert!(b.is_complete());
    }

    #[test]
    fn base_relation_trivial_cases() {
        let u = xyz();
        assert_eq!(
            ChoiceTable::coarsest(u.clone()).base_relation(),
            Relation::total_indifference(u.full())
        );
        let one = Arc::new(Universe::new(["a"]).unwrap());
        let b = ChoiceTable::coarsest(one).base_relation();
        assert!(b.weak(0, 0) && b.pair_count() == 1);
    }

    #[test]
    fn revealed_preference_of_example() {
        let t = example_table();
        let r = t.revealed_preference();
        assert!(r.weak(Y, X));
        assert!(r.indifferent(X, Y));
        let u = xyz();
        assert_eq!(
            ChoiceTable::coarsest(u.clone()).revealed_preference(),
            Relation::total_indifference(u.full())
        );
    }

    #[test]
    fn revealed_preference_of_dictatorial_table() {
        // w = z always wins when present; otherwise x beats y.
        let u = xyz();
        let t = ChoiceTable::from_fn(u, |a| {
            if a.contains(Z) {
                FSet::singleton(Z)
            } else {
                FSet::singleton(a.first().unwrap())
            }
        })
        .unwrap();
        let r = t.revealed_preference();
        assert!(r.strict(Z, X) && r.strict(Z, Y));
        assert!(r.strict(X, Y));
    }

    #[test]
    fn lrp_of_example() {
        let fam = example_table().local_revealed_preference();
        let xy = FSet::pair(X, Y);
        assert!(fam.get(xy).strict(X, Y));
        assert!(fam.get(FSet::full(3)).indifferent(Y, X));
        let coarse = ChoiceTable::coarsest(xyz()).local_revealed_preference();
        for (a, r) in coarse.iter() {
            assert_eq!(*r, Relation::total_indifference(a));
        }
    }

    #[test]
    fn refinement_cases() {
        let t = example_table();
        assert_eq!(t.is_refinement_of(&t), Ok(true));
        let coarse = ChoiceTable::coarsest(t.universe().clone());
        let single = ChoiceTable::from_fn(t.universe().clone(), |a| {
            FSet::singleton(a.first().unwrap())
        })
        .unwrap();
        assert_eq!(single.is_refinement_of(&coarse), Ok(true));
        let mut flipped = t.clone();
        flipped.slots_mut()[FSet::pair(X, Y).index()] = FSet::singleton(Y);
        assert_eq!(t.refinement_witness(&flipped), Ok(Some(FSet::pair(X, Y))));
        let other = Arc::new(Universe::new(["p", "q", "r"]).unwrap());
        assert_eq!(
            t.is_refinement_of(&ChoiceTable::coarsest(other)),
            Err(ChoiceError::UniverseMismatch)
        );
    }

    #[test]
    fn intersection_cases() {
        let t = example_table();
        let coarse = ChoiceTable::coarsest(t.universe().clone());
        assert_eq!(ChoiceTable::intersect(&[t.clone(), coarse]), Ok(t.clone()));
        assert_eq!(ChoiceTable::intersect(std::slice::from_ref(&t)), Ok(t));
        let u = Arc::new(Universe::alphabetic(2).unwrap());
        let first =
            ChoiceTable::from_fn(u.clone(), |a| FSet::singleton(a.first().unwrap())).unwrap();
        let last = ChoiceTable::from_fn(u, |a| FSet::singleton(a.iter().last().unwrap())).unwrap();
        assert_eq!(
            ChoiceTable::intersect(&[first, last]),
            Err(ChoiceError::EmptyIntersection(FSet::from_mask(3)))
        );
        assert_eq!(ChoiceTable::intersect(&[]), Err(ChoiceError::NoTables));
    }
}
