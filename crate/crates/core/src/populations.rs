//! Enumerators and seeded samplers for choice tables, relations and profiles.
//!
//! Every sample is drawn from its own ChaCha stream keyed by `(seed, index)`,
//! so results do not depend on how work is split across threads.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::choice::ChoiceTable;
use crate::majority::{MajorityError, MarginMatrix, Profile};
use crate::relation::{Relation, RelationError};
use crate::universe::{FSet, SharedUniverse};

/// Generator for sample `index` under `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// An indexable set of choice tables: some slots fixed, the rest ranging
/// over every nonempty subset.
#[derive(Debug, Clone)]
pub struct TableSpace {
    template: Vec<FSet>,
    universe: SharedUniverse,
    free: Vec<FSet>,
    len: u128,
}

impl TableSpace {
    /// Every choice function on the universe.
    pub fn all(universe: SharedUniverse) -> Self {
        let template = (0..1u32 << universe.len()).map(FSet::from_mask).collect();
        let free = universe.feasible_sets().filter(|a| a.len() >= 2).collect();
        TableSpace::build(universe, template, free)
    }

    /// Choice functions whose pairwise choices follow `base`; sets of size
    /// three or more are free.
    pub fn pinned(universe: SharedUniverse, base: &Relation) -> Result<Self, RelationError> {
        if base.carrier() != universe.full() {
            return Err(RelationError::CarrierMismatch {
                carrier: universe.full(),
                got: base.carrier(),
            });
        }
        if let Some((x, y)) = base.incompleteness_witness() {
            return Err(RelationError::IncompleteRelation(x, y));
        }
        let mut template: Vec<FSet> = (0..1u32 << universe.len()).map(FSet::from_mask).collect();
        for a in universe.feasible_sets().filter(|a| a.len() == 2) {
            template[a.index()] = base.maximal_in(a);
        }
        let free = universe.feasible_sets().filter(|a| a.len() >= 3).collect();
        Ok(TableSpace::build(universe, template, free))
    }

    fn build(universe: SharedUniverse, template: Vec<FSet>, free: Vec<FSet>) -> Self {
        let len = free
            .iter()
            .try_fold(1u128, |acc, a| acc.checked_mul(radix(*a)))
            .unwrap_or(u128::MAX);
        TableSpace {
            template,
            universe,
            free,
            len,
        }
    }

    pub fn universe(&self) -> &SharedUniverse {
        &self.universe
    }

    /// Number of tables; saturates at `u128::MAX`.
    pub fn len(&self) -> u128 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Table number `index`, mixed-radix over the free sets in ascending
    /// mask order (the smallest set varies fastest).
    pub fn get(&self, mut index: u128) -> ChoiceTable {
        let mut choice = self.template.clone();
        for &a in &self.free {
            let r = radix(a);
            choice[a.index()] = a.deposit((index % r) as u32 + 1);
            index /= r;
        }
        ChoiceTable::from_raw(self.universe.clone(), choice)
    }

    pub fn iter(&self) -> impl Iterator<Item = ChoiceTable> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    /// Uniform draw from the space.
    pub fn sample(&self, rng: &mut impl Rng) -> ChoiceTable {
        let mut choice = self.template.clone();
        for &a in &self.free {
            choice[a.index()] = a.deposit(rng.random_range(1..1u32 << a.len()));
        }
        ChoiceTable::from_raw(self.universe.clone(), choice)
    }
}

fn radix(a: FSet) -> u128 {
    (1u128 << a.len()) - 1
}

/// Number of complete relations on `n` alternatives: `3^(n choose 2)`.
pub fn complete_relation_count(n: usize) -> u64 {
    3u64.pow((n * n.saturating_sub(1) / 2) as u32)
}

/// Complete relation number `code`: each unordered pair `x < y`, in
/// lexicographic order, takes digit 0 (`x P y`), 1 (`y P x`) or 2 (`x I y`).
pub fn complete_relation_at(n: usize, mut code: u64) -> Relation {
    let mut r = Relation::empty(FSet::full(n));
    for x in 0..n {
        r = r.with_pair(x, x);
    }
    for x in 0..n {
        for y in x + 1..n {
            r = match code % 3 {
                0 => r.with_pair(x, y),
                1 => r.with_pair(y, x),
                _ => r.with_pair(x, y).with_pair(y, x),
            };
            code /= 3;
        }
    }
    r
}

/// Every complete relation on `n` alternatives.
pub fn all_complete_relations(n: usize) -> impl Iterator<Item = Relation> {
    (0..complete_relation_count(n)).map(move |c| complete_relation_at(n, c))
}

pub fn random_complete_relation(n: usize, rng: &mut impl Rng) -> Relation {
    complete_relation_at(n, rng.random_range(0..complete_relation_count(n)))
}

/// Random linear-order profile with `voters` single-voter ballots.
pub fn random_profile(
    universe: SharedUniverse,
    voters: u32,
    rng: &mut impl Rng,
) -> Result<Profile, MajorityError> {
    let n = universe.len();
    let ballots: Vec<(u32, Vec<usize>)> = (0..voters)
        .map(|_| {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            (1, order)
        })
        .collect();
    Profile::new(universe, ballots)
}

/// Margins of a random profile with an odd number of voters (at most 9),
/// so no pair is tied.
pub fn random_odd_margins(
    universe: SharedUniverse,
    rng: &mut impl Rng,
) -> Result<MarginMatrix, MajorityError> {
    let voters = 2 * rng.random_range(0..5u32) + 1;
    Ok(random_profile(universe, voters, rng)?.margins())
}

/// Random skew-symmetric margins with entries in `-max_abs..=max_abs`;
/// ties occur.
pub fn random_margins(
    universe: SharedUniverse,
    max_abs: i64,
    rng: &mut impl Rng,
) -> Result<MarginMatrix, MajorityError> {
    let n = universe.len();
    let mut m = vec![0i64; n * n];
    for x in 0..n {
        for y in x + 1..n {
            let v = rng.random_range(-max_abs..=max_abs);
            m[x * n + y] = v;
            m[y * n + x] = -v;
        }
    }
    MarginMatrix::new(universe, m)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;
    use std::sync::Arc;

    use super::*;
    use crate::universe::Universe;

    #[test]
    fn table_counts() {
        let u3 = Arc::new(Universe::alphabetic(3).unwrap());
        let u4 = Arc::new(Universe::alphabetic(4).unwrap());
        assert_eq!(TableSpace::all(u3.clone()).len(), 189);
        assert_eq!(TableSpace::all(u4.clone()).len(), 729 * 2401 * 15);
        let base = complete_relation_at(4, 0);
        assert_eq!(TableSpace::pinned(u4, &base).unwrap().len(), 2401 * 15);
        let base3 = complete_relation_at(3, 5);
        assert_eq!(TableSpace::pinned(u3, &base3).unwrap().len(), 7);
    }

    #[test]
    fn tables_are_distinct() {
        let u = Arc::new(Universe::alphabetic(3).unwrap());
        let space = TableSpace::all(u);
        let seen: HashSet<Vec<FSet>> = space
            .iter()
            .map(|t| t.iter().map(|(_, c)| c).collect())
            .collect();
        assert_eq!(seen.len(), 189);
    }

    #[test]
    fn pinned_tables_follow_base() {
        let u = Arc::new(Universe::alphabetic(3).unwrap());
        for base in all_complete_relations(3) {
            for t in TableSpace::pinned(u.clone(), &base).unwrap().iter() {
                assert_eq!(t.base_relation(), base);
            }
        }
    }

    #[test]
    fn relation_enumeration() {
        assert_eq!(complete_relation_count(3), 27);
        assert_eq!(complete_relation_count(4), 729);
        let all: HashSet<Relation> = all_complete_relations(3).collect();
        assert_eq!(all.len(), 27);
        assert!(all.iter().all(Relation::is_complete));
    }

    #[test]
    fn sampling_is_reproducible() {
        let u = Arc::new(Universe::alphabetic(4).unwrap());
        let space = TableSpace::all(u.clone());
        let a = space.sample(&mut sample_rng(11, 3));
        let b = space.sample(&mut sample_rng(11, 3));
        let c = space.sample(&mut sample_rng(11, 4));
        assert_eq!(a, b);
        assert_ne!(a, c);
        let m = random_odd_margins(u.clone(), &mut sample_rng(5, 0)).unwrap();
        assert!(!m.has_ties());
        let z = random_margins(u, 3, &mut sample_rng(5, 0)).unwrap();
        assert_eq!(z.get(0, 1), -z.get(1, 0));
    }
}
