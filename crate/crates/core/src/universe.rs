//! Alternatives, universes and feasible sets.
//!
//! Alternatives are addressed by index internally and by label at every
//! external interface. Sets of alternatives are bitmasks over the universe.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported universe. Every subset-indexed table has `2^n` slots.
pub const MAX_ALTERNATIVES: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniverseError {
    #[error("a universe needs at least one alternative")]
    Empty,
    #[error("universe has {0} alternatives, at most {MAX_ALTERNATIVES} are supported")]
    TooLarge(usize),
    #[error("duplicate alternative label `{0}`")]
    DuplicateLabel(String),
    #[error("alternative labels must be non-blank")]
    EmptyLabel,
    #[error("unknown alternative `{0}`")]
    UnknownAlternative(String),
    #[error("a feasible set must be nonempty")]
    EmptySet,
}

/// A finite, labeled universe of alternatives.
#[derive(Debug, Clone)]
pub struct Universe {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl PartialEq for Universe {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for Universe {}

impl Universe {
    /// Builds a universe whose index order is the input order.
    pub fn new<I, S>(labels: I) -> Result<Self, UniverseError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(UniverseError::Empty);
        }
        if labels.len() > MAX_ALTERNATIVES {
            return Err(UniverseError::TooLarge(labels.len()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.trim().is_empty() {
                return Err(UniverseError::EmptyLabel);
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(UniverseError::DuplicateLabel(label.clone()));
            }
        }
        Ok(Universe { labels, index })
    }

    /// Universe with labels `a`, `b`, `c`, ... (at most 16).
    pub fn alphabetic(n: usize) -> Result<Self, UniverseError> {
        if n > MAX_ALTERNATIVES {
            return Err(UniverseError::TooLarge(n));
        }
        Universe::new((0..n).map(|i| char::from(b'a' + i as u8).to_string()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn alternative(&self, label: &str) -> Result<usize, UniverseError> {
        self.index_of(label)
            .ok_or_else(|| UniverseError::UnknownAlternative(label.to_string()))
    }

    /// The universe itself as a feasible set.
    pub fn full(&self) -> FSet {
        FSet::full(self.len())
    }

    /// Number of feasible sets, `2^n - 1`.
    pub fn feasible_count(&self) -> usize {
        (1usize << self.len()) - 1
    }

    /// All feasible sets in ascending mask order.
    pub fn feasible_sets(&self) -> impl Iterator<Item = FSet> + Clone {
        (1..=self.full().mask()).map(FSet)
    }

    /// Resolves a list of labels to a set. Duplicates are tolerated.
    pub fn set_of<I, S>(&self, labels: I) -> Result<FSet, UniverseError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = FSet::EMPTY;
        for label in labels {
            set = set.with(self.alternative(label.as_ref())?);
        }
        Ok(set)
    }

    /// Parses `a,b,c` (commas and/or whitespace) into a nonempty set.
    pub fn parse_set(&self, text: &str) -> Result<FSet, UniverseError> {
        let set = self.set_of(
            text.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty()),
        )?;
        if set.is_empty() {
            return Err(UniverseError::EmptySet);
        }
        Ok(set)
    }

    /// Member labels in lexicographic order.
    pub fn sorted_labels(&self, set: FSet) -> Vec<&str> {
        let mut out: Vec<&str> = set.iter().map(|i| self.label(i)).collect();
        out.sort_unstable();
        out
    }

    /// `{x,y,z}` with labels sorted.
    pub fn format_set(&self, set: FSet) -> String {
        format!("{{{}}}", self.sorted_labels(set).join(","))
    }

    /// Space-separated sorted labels.
    pub fn format_members(&self, set: FSet) -> String {
        self.sorted_labels(set).join(" ")
    }
}

/// Shared handle; tables and relations families keep one of these.
pub type SharedUniverse = Arc<Universe>;

/// A set of alternatives as a bitmask over a universe.
///
/// Feasible sets are the nonempty ones. The empty set is representable because
/// some computations (maximal elements of a cyclic relation, intersections)
/// legitimately produce it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FSet(u32);

impl FSet {
    pub const EMPTY: FSet = FSet(0);

    pub const fn from_mask(mask: u32) -> FSet {
        FSet(mask)
    }

    pub const fn singleton(i: usize) -> FSet {
        FSet(1 << i)
    }

    pub const fn pair(i: usize, j: usize) -> FSet {
        FSet((1 << i) | (1 << j))
    }

    /// `{0, .., n-1}`.
    pub const fn full(n: usize) -> FSet {
        FSet(((1u64 << n) - 1) as u32)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> FSet {
        indices.into_iter().fold(FSet::EMPTY, FSet::with)
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    /// Table slot for this set.
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[must_use]
    pub const fn with(self, i: usize) -> FSet {
        FSet(self.0 | 1 << i)
    }

    #[must_use]
    pub const fn without(self, i: usize) -> FSet {
        FSet(self.0 & !(1 << i))
    }

    pub const fn union(self, other: FSet) -> FSet {
        FSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: FSet) -> FSet {
        FSet(self.0 & other.0)
    }

    pub const fn difference(self, other: FSet) -> FSet {
        FSet(self.0 & !other.0)
    }

    pub const fn is_subset(self, other: FSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub const fn is_disjoint(self, other: FSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member index.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Member indices in ascending order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    /// Every nonempty subset, in ascending mask order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            universe: self.0,
            next: Some(self.0.wrapping_neg() & self.0),
        }
    }

    /// The `k`-th member-relative subset: bit `j` of `code` selects the
    /// `j`-th smallest member. Used to draw uniform subsets of a set.
    pub fn deposit(self, code: u32) -> FSet {
        let mut out = 0;
        for (j, i) in self.iter().enumerate() {
            if code >> j & 1 == 1 {
                out |= 1 << i;
            }
        }
        FSet(out)
    }
}

impl fmt::Debug for FSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl IntoIterator for FSet {
    type Item = usize;
    type IntoIter = Members;

    fn into_iter(self) -> Members {
        self.iter()
    }
}

impl FromIterator<usize> for FSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        FSet::from_indices(iter)
    }
}

#[derive(Clone, Debug)]
pub struct Members(u32);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

/// Ascending enumeration of nonempty submasks via `s' = (s - a) & a`.
#[derive(Clone, Debug)]
pub struct Subsets {
    universe: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = FSet;

    fn next(&mut self) -> Option<FSet> {
        let cur = self.next?;
        if cur == 0 {
            self.next = None;
            return None;
        }
        self.next = if cur == self.universe {
            None
        } else {
            Some(cur.wrapping_sub(self.universe) & self.universe)
        };
        Some(FSet(cur))
    }
}
