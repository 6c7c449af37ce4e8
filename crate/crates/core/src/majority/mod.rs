//! Ballot profiles, majority margins and the majoritarian choice functions
//! built on them.

mod finest;
mod rules;

pub use finest::{finest_check, FinestMode, FinestProp, FinestReport, FinestViolation};
pub use rules::{evaluate_rule, rule_relation, rule_table, RuleId};

use thiserror::Error;

use crate::choice::ChoiceError;
use crate::relation::{Relation, RelationError};
use crate::universe::{FSet, SharedUniverse};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MajorityError {
    #[error("margin matrix has nonzero diagonal at {0}")]
    NonzeroDiagonal(usize),
    #[error("margins are not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("contradictory margins given for ({0}, {1})")]
    ContradictoryEdge(usize, usize),
    #[error("expected {expected} matrix entries, got {got}")]
    WrongSize { expected: usize, got: usize },
    #[error("ballot {0} is not a ranking of every alternative exactly once")]
    IncompleteBallot(usize),
    #[error("ballot {0} has a zero count")]
    ZeroCount(usize),
    #[error("a profile needs at least one voter")]
    EmptyProfile,
    #[error("tie-breaking order is not a permutation of the universe")]
    InvalidTieBreak,
    #[error("rule `{0}` needs a tie-breaking order")]
    MissingTieBreak(RuleId),
    #[error("rule `{0}` needs a ballot profile")]
    MissingProfile(RuleId),
    #[error("rule `{0}` is profile-based and has no majority relation")]
    NotMajoritarian(RuleId),
    #[error("inputs are defined over different universes")]
    UniverseMismatch,
    #[error("rule `{0}` chose nothing from {1:?}")]
    EmptyWinnerSet(RuleId, FSet),
    #[error("pairwise choices of rule `{0}` disagree with majority rule")]
    BaseMismatch(RuleId),
    #[error("n = {0} is out of range for this check")]
    OutOfRange(usize),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Choice(#[from] ChoiceError),
}

/// Antisymmetric majority margins: `m[x][y]` is the number of voters
/// preferring `x` to `y` minus those preferring `y` to `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginMatrix {
    universe: SharedUniverse,
    m: Vec<i64>,
}

impl MarginMatrix {
    /// Row-major `n × n` values.
    pub fn new(universe: SharedUniverse, m: Vec<i64>) -> Result<Self, MajorityError> {
        let n = universe.len();
        if m.len() != n * n {
            return Err(MajorityError::WrongSize {
                expected: n * n,
                got: m.len(),
            });
        }
        for x in 0..n {
            if m[x * n + x] != 0 {
                return Err(MajorityError::NonzeroDiagonal(x));
            }
            for y in x + 1..n {
                if m[x * n + y] != -m[y * n + x] {
                    return Err(MajorityError::NotAntisymmetric(x, y));
                }
            }
        }
        Ok(MarginMatrix { universe, m })
    }

    /// From `(x, y, margin)` triples; the reverse entry is implied and
    /// unlisted pairs are 0. Repeating a pair with a different value is an
    /// error.
    pub fn from_edges(
        universe: SharedUniverse,
        edges: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self, MajorityError> {
        let n = universe.len();
        let mut m = vec![0i64; n * n];
        let mut set = vec![false; n * n];
        for (x, y, v) in edges {
            if x == y {
                if v != 0 {
                    return Err(MajorityError::NonzeroDiagonal(x));
                }
                continue;
            }
            if set[x * n + y] && m[x * n + y] != v {
                return Err(MajorityError::ContradictoryEdge(x, y));
            }
            m[x * n + y] = v;
            m[y * n + x] = -v;
            set[x * n + y] = true;
            set[y * n + x] = true;
        }
        MarginMatrix::new(universe, m)
    }

    /// Unit margins encoding a complete relation: `1` for strict pairs,
    /// `0` for indifference. Majoritarian rules only look at the sign, so
    /// this turns any complete base relation into a rule input.
    pub fn from_base(universe: SharedUniverse, base: &Relation) -> Result<Self, MajorityError> {
        if base.carrier() != universe.full() {
            return Err(MajorityError::UniverseMismatch);
        }
        if let Some((x, y)) = base.incompleteness_witness() {
            return Err(RelationError::IncompleteRelation(x, y).into());
        }
        let n = universe.len();
        let mut m = vec![0i64; n * n];
        for x in 0..n {
            for y in 0..n {
                m[x * n + y] = i64::from(base.strict(x, y)) - i64::from(base.strict(y, x));
            }
        }
        MarginMatrix::new(universe, m)
    }

    pub fn universe(&self) -> &SharedUniverse {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.universe.len()
    }

    pub fn is_empty(&self) -> bool {
        self.universe.is_empty()
    }

    pub fn get(&self, x: usize, y: usize) -> i64 {
        self.m[x * self.len() + y]
    }

    /// Weak majority relation `x R̄ y` iff `m[x][y] ≥ 0`.
    pub fn majority_base(&self) -> Relation {
        Relation::from_fn(self.universe.full(), |x, y| self.get(x, y) >= 0)
    }

    /// Some off-diagonal margin is zero.
    pub fn has_ties(&self) -> bool {
        let n = self.len();
        (0..n).any(|x| (0..n).any(|y| x != y && self.get(x, y) == 0))
    }
}

/// A strict ranking with a multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ballot {
    count: u32,
    order: Vec<usize>,
    position: Vec<usize>,
}

impl Ballot {
    pub fn count(&self) -> u32 {
        self.count
    }

    /// Best first.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn prefers(&self, x: usize, y: usize) -> bool {
        self.position[x] < self.position[y]
    }

    /// Highest-ranked member of `a`.
    pub fn top_in(&self, a: FSet) -> Option<usize> {
        self.order.iter().copied().find(|&x| a.contains(x))
    }
}

/// Voters' strict rankings over the whole universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    universe: SharedUniverse,
    ballots: Vec<Ballot>,
}

impl Profile {
    pub fn new(
        universe: SharedUniverse,
        ballots: impl IntoIterator<Item = (u32, Vec<usize>)>,
    ) -> Result<Self, MajorityError> {
        let n = universe.len();
        let mut out = Vec::new();
        for (i, (count, order)) in ballots.into_iter().enumerate() {
            if count == 0 {
                return Err(MajorityError::ZeroCount(i));
            }
            let mut position = vec![usize::MAX; n];
            for (rank, &x) in order.iter().enumerate() {
                if x >= n || position[x] != usize::MAX {
                    return Err(MajorityError::IncompleteBallot(i));
                }
                position[x] = rank;
            }
            if order.len() != n {
                return Err(MajorityError::IncompleteBallot(i));
            }
            out.push(Ballot {
                count,
                order,
                position,
            });
        }
        if out.is_empty() {
            return Err(MajorityError::EmptyProfile);
        }
        Ok(Profile {
            universe,
            ballots: out,
        })
    }

    pub fn universe(&self) -> &SharedUniverse {
        &self.universe
    }

    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    pub fn voters(&self) -> u64 {
        self.ballots.iter().map(|b| u64::from(b.count)).sum()
    }

    /// Pairwise majority margins.
    pub fn margins(&self) -> MarginMatrix {
        let n = self.universe.len();
        let mut m = vec![0i64; n * n];
        for b in &self.ballots {
            for (i, &x) in b.order.iter().enumerate() {
                for &y in &b.order[i + 1..] {
                    m[x * n + y] += i64::from(b.count);
                    m[y * n + x] -= i64::from(b.count);
                }
            }
        }
        MarginMatrix {
            universe: self.universe.clone(),
            m,
        }
    }
}

/// A fixed strict order over the universe, best first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieBreakOrder {
    order: Vec<usize>,
    position: Vec<usize>,
}

impl TieBreakOrder {
    pub fn new(n: usize, order: Vec<usize>) -> Result<Self, MajorityError> {
        let mut position = vec![usize::MAX; n];
        for (rank, &x) in order.iter().enumerate() {
            if x >= n || position[x] != usize::MAX {
                return Err(MajorityError::InvalidTieBreak);
            }
            position[x] = rank;
        }
        if order.len() != n {
            return Err(MajorityError::InvalidTieBreak);
        }
        Ok(TieBreakOrder { order, position })
    }

    /// Index order `0 > 1 > ... > n-1`.
    pub fn identity(n: usize) -> Self {
        TieBreakOrder::new(n, (0..n).collect()).expect("identity is a permutation")
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `x > y`.
    pub fn prefers(&self, x: usize, y: usize) -> bool {
        self.position[x] < self.position[y]
    }
}
