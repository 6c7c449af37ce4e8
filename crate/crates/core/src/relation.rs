//! Binary relations on feasible sets.
//!
//! A [`Relation`] stores its weak part `x R y` as one bitmask row per
//! alternative. Strict part `P` and symmetric part `I` are always derived:
//! `x P y` iff `x R y` and not `y R x`.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::majority::MarginMatrix;
use crate::universe::{FSet, Universe, MAX_ALTERNATIVES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RelationError {
    #[error("relation is not complete: neither {0} R {1} nor {1} R {0}")]
    IncompleteRelation(usize, usize),
    #[error("set {got:?} is not contained in carrier {carrier:?}")]
    CarrierMismatch { carrier: FSet, got: FSet },
}

type Rows = [u32; MAX_ALTERNATIVES];

/// A binary relation on a carrier set.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Relation {
    carrier: FSet,
    rows: Rows,
}

/// Transitivity profile of a complete relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RelationClass {
    pub complete: bool,
    pub acyclic: bool,
    pub quasi_transitive: bool,
    pub pip_transitive: bool,
    pub transitive: bool,
}

impl Relation {
    /// The relation with no pairs.
    pub fn empty(carrier: FSet) -> Relation {
        Relation {
            carrier,
            rows: [0; MAX_ALTERNATIVES],
        }
    }

    /// Every pair related both ways.
    pub fn total_indifference(carrier: FSet) -> Relation {
        Relation::from_fn(carrier, |_, _| true)
    }

    pub fn from_fn(carrier: FSet, mut related: impl FnMut(usize, usize) -> bool) -> Relation {
        let mut rel = Relation::empty(carrier);
        for x in carrier {
            for y in carrier {
                if related(x, y) {
                    rel.rows[x] |= 1 << y;
                }
            }
        }
        rel
    }

    /// Builds from rows; bits outside the carrier are dropped.
    pub fn from_rows(carrier: FSet, rows: &[u32]) -> Relation {
        let mut rel = Relation::empty(carrier);
        for x in carrier {
            rel.rows[x] = rows.get(x).copied().unwrap_or(0) & carrier.mask();
        }
        rel
    }

    /// Linear order in which `order[0]` is best. The carrier is the set of
    /// listed alternatives.
    pub fn linear_order(order: &[usize]) -> Relation {
        let carrier = FSet::from_indices(order.iter().copied());
        let mut rel = Relation::empty(carrier);
        for (i, &x) in order.iter().enumerate() {
            for &y in &order[i..] {
                rel.rows[x] |= 1 << y;
            }
        }
        rel
    }

    pub fn carrier(&self) -> FSet {
        self.carrier
    }

    /// `{y : x R y}`.
    pub fn row(&self, x: usize) -> FSet {
        FSet::from_mask(self.rows[x])
    }

    pub(crate) fn raw_rows(&self) -> &Rows {
        &self.rows
    }

    pub fn weak(&self, x: usize, y: usize) -> bool {
        self.rows[x] >> y & 1 == 1
    }

    pub fn strict(&self, x: usize, y: usize) -> bool {
        self.weak(x, y) && !self.weak(y, x)
    }

    pub fn indifferent(&self, x: usize, y: usize) -> bool {
        self.weak(x, y) && self.weak(y, x)
    }

    #[must_use]
    pub fn with_pair(mut self, x: usize, y: usize) -> Relation {
        debug_assert!(self.carrier.contains(x) && self.carrier.contains(y));
        self.rows[x] |= 1 << y;
        self
    }

    #[must_use]
    pub fn without_pair(mut self, x: usize, y: usize) -> Relation {
        self.rows[x] &= !(1 << y);
        self
    }

    /// Number of related ordered pairs.
    pub fn pair_count(&self) -> usize {
        self.carrier
            .iter()
            .map(|x| self.rows[x].count_ones() as usize)
            .sum()
    }

    /// `{(y, x) : x R y}` on the same carrier.
    pub fn converse(&self) -> Relation {
        let mut conv = Relation::empty(self.carrier);
        for x in self.carrier {
            for y in self.row(x) {
                conv.rows[y] |= 1 << x;
            }
        }
        conv
    }

    /// Strict rows: `{y : x P y}` for each `x`.
    fn strict_rows(&self) -> Rows {
        let conv = self.converse();
        let mut out = [0; MAX_ALTERNATIVES];
        for x in self.carrier {
            out[x] = self.rows[x] & !conv.rows[x];
        }
        out
    }

    /// The strict part `P` as a relation (not complete in general).
    pub fn strict_part(&self) -> Relation {
        Relation {
            carrier: self.carrier,
            rows: self.strict_rows(),
        }
    }

    /// `R ∩ (A × A)`.
    pub fn restrict(&self, a: FSet) -> Result<Relation, RelationError> {
        self.check_within(a)?;
        Ok(self.restrict_unchecked(a))
    }

    pub(crate) fn restrict_unchecked(&self, a: FSet) -> Relation {
        let mut out = Relation::empty(a);
        for x in a {
            out.rows[x] = self.rows[x] & a.mask();
        }
        out
    }

    /// Pairwise inclusion `self ⊆ other`, ignoring carriers.
    pub fn is_subrelation_of(&self, other: &Relation) -> bool {
        self.carrier
            .iter()
            .all(|x| self.rows[x] & !other.rows[x] == 0)
    }

    /// First `(x, y)` in index order violating inclusion in `other`.
    pub fn first_pair_outside(&self, other: &Relation) -> Option<(usize, usize)> {
        self.carrier.iter().find_map(|x| {
            FSet::from_mask(self.rows[x] & !other.rows[x])
                .first()
                .map(|y| (x, y))
        })
    }

    fn check_within(&self, a: FSet) -> Result<(), RelationError> {
        if a.is_subset(self.carrier) {
            Ok(())
        } else {
            Err(RelationError::CarrierMismatch {
                carrier: self.carrier,
                got: a,
            })
        }
    }

    /// First unrelated pair in index order, counting `x = y`.
    pub fn incompleteness_witness(&self) -> Option<(usize, usize)> {
        let conv = self.converse();
        self.carrier.iter().find_map(|x| {
            FSet::from_mask(self.carrier.mask() & !(self.rows[x] | conv.rows[x]))
                .first()
                .map(|y| (x, y))
        })
    }

    fn require_complete(&self) -> Result<(), RelationError> {
        match self.incompleteness_witness() {
            Some((x, y)) => Err(RelationError::IncompleteRelation(x, y)),
            None => Ok(()),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.incompleteness_witness().is_none()
    }

    /// No directed cycle in the strict part.
    pub fn is_acyclic(&self) -> bool {
        let strict = self.strict_rows();
        // Peel off alternatives without strict predecessors in what remains.
        let mut remaining = self.carrier.mask();
        while remaining != 0 {
            let mut dominated = 0;
            for x in FSet::from_mask(remaining) {
                dominated |= strict[x];
            }
            let free = remaining & !dominated;
            if free == 0 {
                return false;
            }
            remaining &= !free;
        }
        true
    }

    pub fn is_transitive(&self) -> bool {
        self.carrier.iter().all(|x| {
            self.row(x)
                .iter()
                .all(|y| self.rows[y] & !self.rows[x] == 0)
        })
    }

    pub fn is_quasi_transitive(&self) -> bool {
        let strict = self.strict_rows();
        self.carrier.iter().all(|x| {
            FSet::from_mask(strict[x])
                .iter()
                .all(|y| strict[y] & !strict[x] == 0)
        })
    }

    /// `x P y`, `y I z`, `z P w` implies `x P w`, for not necessarily
    /// distinct alternatives.
    pub fn is_pip_transitive(&self) -> bool {
        let strict = self.strict_rows();
        let conv = self.converse();
        self.carrier.iter().all(|x| {
            FSet::from_mask(strict[x]).iter().all(|y| {
                let indiff = self.rows[y] & conv.rows[y];
                FSet::from_mask(indiff)
                    .iter()
                    .all(|z| strict[z] & !strict[x] == 0)
            })
        })
    }

    /// Evaluates every transitivity notion. Requires completeness.
    pub fn classify(&self) -> Result<RelationClass, RelationError> {
        self.require_complete()?;
        let class = RelationClass {
            complete: true,
            acyclic: self.is_acyclic(),
            quasi_transitive: self.is_quasi_transitive(),
            pip_transitive: self.is_pip_transitive(),
            transitive: self.is_transitive(),
        };
        assert!(
            class.chain_is_consistent(),
            "transitivity hierarchy violated: {class:?}"
        );
        Ok(class)
    }

    /// `{x ∈ A : y P x for no y ∈ A}` without carrier validation.
    pub(crate) fn maximal_in(&self, a: FSet) -> FSet {
        let mut out = FSet::EMPTY;
        for x in a {
            let dominated = a.iter().any(|y| self.weak(y, x) && !self.weak(x, y));
            if !dominated {
                out = out.with(x);
            }
        }
        out
    }

    /// Maximal elements of `a`. Empty iff the strict part has a cycle in `a`.
    pub fn max_elements(&self, a: FSet) -> Result<FSet, RelationError> {
        self.check_within(a)?;
        Ok(self.maximal_in(a))
    }

    /// Reachability closure of the weak relation.
    pub fn transitive_closure(&self) -> Result<Relation, RelationError> {
        self.require_complete()?;
        Ok(Relation {
            carrier: self.carrier,
            rows: closure(&self.rows, self.carrier),
        })
    }

    /// Strongly connected components of `R|a`, dominant component first.
    pub fn condensation_order(&self, a: FSet) -> Result<Vec<FSet>, RelationError> {
        self.check_within(a)?;
        Ok(condense(&self.rows, a))
    }

    pub fn fmt_with<'a>(&'a self, universe: &'a Universe) -> RelationDisplay<'a> {
        RelationDisplay {
            relation: self,
            universe,
        }
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pairs = f.debug_list();
        for x in self.carrier {
            for y in self.row(x) {
                pairs.entry(&(x, y));
            }
        }
        pairs.finish()
    }
}

/// Lists strict pairs as `x > y` and indifferences as `x ~ y`.
pub struct RelationDisplay<'a> {
    relation: &'a Relation,
    universe: &'a Universe,
}

impl fmt::Display for RelationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.relation;
        let mut members: Vec<usize> = r.carrier.iter().collect();
        members.sort_by_key(|&i| self.universe.label(i));
        let mut out = String::new();
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                let (lx, ly) = (self.universe.label(x), self.universe.label(y));
                match (r.weak(x, y), r.weak(y, x)) {
                    (true, true) => writeln!(out, "{lx} ~ {ly}")?,
                    (true, false) => writeln!(out, "{lx} > {ly}")?,
                    (false, true) => writeln!(out, "{ly} > {lx}")?,
                    (false, false) => writeln!(out, "{lx} ? {ly}")?,
                }
            }
        }
        f.write_str(&out)
    }
}

impl RelationClass {
    /// transitive ⇒ PIP ⇒ quasi-transitive ⇒ acyclic.
    pub fn chain_is_consistent(&self) -> bool {
        (!self.transitive || self.pip_transitive)
            && (!self.pip_transitive || self.quasi_transitive)
            && (!self.quasi_transitive || self.acyclic)
    }
}

pub(crate) fn closure(rows: &Rows, carrier: FSet) -> Rows {
    let mut reach = [0u32; MAX_ALTERNATIVES];
    for x in carrier {
        reach[x] = (rows[x] & carrier.mask()) | 1 << x;
    }
    for k in carrier {
        for x in carrier {
            if reach[x] >> k & 1 == 1 {
                reach[x] |= reach[k];
            }
        }
    }
    reach
}

/// Components of the digraph `rows` restricted to `a`, ordered so that every
/// component comes before the components it reaches.
pub(crate) fn condense(rows: &Rows, a: FSet) -> Vec<FSet> {
    let reach = closure(rows, a);
    let mut seen = FSet::EMPTY;
    let mut comps = Vec::new();
    for x in a {
        if seen.contains(x) {
            continue;
        }
        let comp: FSet = FSet::from_mask(reach[x])
            .iter()
            .filter(|&y| reach[y] >> x & 1 == 1)
            .collect();
        seen = seen.union(comp);
        comps.push((reach[x].count_ones(), comp));
    }
    comps.sort_by(|l, r| r.0.cmp(&l.0).then(l.1.first().cmp(&r.1.first())));
    comps.into_iter().map(|(_, c)| c).collect()
}

/// If some walk inside `d` visits every member of `d` using edges of
/// `rows`, returns the components containing its possible start and end
/// points (first and last component of a chain condensation).
pub(crate) fn covering_walk_ends(rows: &Rows, d: FSet) -> Option<(FSet, FSet)> {
    let comps = condense(rows, d);
    for pair in comps.windows(2) {
        let linked = pair[0].iter().any(|x| rows[x] & pair[1].mask() != 0);
        if !linked {
            return None;
        }
    }
    Some((comps[0], *comps.last()?))
}

/// Width of the widest path, with `NoPath < Finite(_) < Unbounded`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strength {
    NoPath,
    Finite(i64),
    Unbounded,
}

/// Maximin path strengths within a feasible set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathStrengths {
    set: FSet,
    n: usize,
    table: Vec<Strength>,
}

impl PathStrengths {
    pub fn set(&self) -> FSet {
        self.set
    }

    /// Strength of the widest weak path from `s` to `t`.
    pub fn get(&self, s: usize, t: usize) -> Strength {
        self.table[s * self.n + t]
    }
}

/// Widest weak-path strengths inside `a`.
///
/// An edge `s → t` exists when `m[s][t] ≥ 0`; a path's strength is its
/// smallest margin. Self-strength is `Unbounded`; unreachable pairs are
/// `NoPath`.
pub fn maximin_path_strengths(m: &MarginMatrix, a: FSet) -> Result<PathStrengths, RelationError> {
    let n = m.len();
    let carrier = FSet::full(n);
    if !a.is_subset(carrier) {
        return Err(RelationError::CarrierMismatch { carrier, got: a });
    }
    let mut table = vec![Strength::NoPath; n * n];
    for s in a {
        for t in a {
            table[s * n + t] = if s == t {
                Strength::Unbounded
            } else if m.get(s, t) >= 0 {
                Strength::Finite(m.get(s, t))
            } else {
                Strength::NoPath
            };
        }
    }
    for k in a {
        for s in a {
            let via = table[s * n + k];
            if via == Strength::NoPath {
                continue;
            }
            for t in a {
                let cand = via.min(table[k * n + t]);
                if cand > table[s * n + t] {
                    table[s * n + t] = cand;
                }
            }
        }
    }
    Ok(PathStrengths { set: a, n, table })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ix: &[usize]) -> FSet {
        FSet::from_indices(ix.iter().copied())
    }

    /// `x P y P z P x` plus reflexive loops.
    fn three_cycle() -> Relation {
        Relation::from_fn(FSet::full(3), |x, y| x == y || (x + 1) % 3 == y)
    }

    /// Complete relation on `{0,1,2}` from the strict pairs; every other
    /// pair is indifferent.
    fn from_strict(pairs: &[(usize, usize)]) -> Relation {
        Relation::from_fn(FSet::full(3), |x, y| !pairs.contains(&(y, x)))
    }

    #[test]
    fn classify_linear_order() {
        let c = Relation::linear_order(&[0, 1, 2]).classify().unwrap();
        assert!(c.complete && c.acyclic && c.quasi_transitive && c.pip_transitive && c.transitive);
    }

    #[test]
    fn classify_three_cycle() {
        let c = three_cycle().classify().unwrap();
        assert!(c.complete);
        assert!(!c.acyclic && !c.quasi_transitive && !c.transitive);
    }

    #[test]
    fn classify_quasi_not_transitive() {
        // x P y, y I z, x I z
        let r = from_strict(&[(0, 1)]);
        let c = r.classify().unwrap();
        assert!(c.acyclic && c.quasi_transitive);
        assert!(!c.transitive);
        // y R z, z R x but not y R x
        assert!(r.weak(1, 2) && r.weak(2, 0) && !r.weak(1, 0));
    }

    #[test]
    fn classify_reports_incompleteness() {
        let r = Relation::linear_order(&[0, 1]).without_pair(1, 1);
        assert_eq!(r.classify(), Err(RelationError::IncompleteRelation(1, 1)));
        let r = Relation::linear_order(&[0, 1]).without_pair(0, 1);
        assert_eq!(r.classify(), Err(RelationError::IncompleteRelation(0, 1)));
    }

    #[test]
    fn max_elements_cases() {
        let full = FSet::full(3);
        assert_eq!(
            Relation::linear_order(&[0, 1, 2]).max_elements(full),
            Ok(set(&[0]))
        );
        assert_eq!(
            Relation::total_indifference(full).max_elements(full),
            Ok(full)
        );
        assert_eq!(three_cycle().max_elements(full), Ok(FSet::EMPTY));
        assert!(matches!(
            Relation::linear_order(&[0, 1]).max_elements(set(&[2])),
            Err(RelationError::CarrierMismatch { .. })
        ));
    }

    #[test]
    fn closure_cases() {
        let tc = three_cycle().transitive_closure().unwrap();
        assert_eq!(tc, Relation::total_indifference(FSet::full(3)));
        let lin = Relation::linear_order(&[2, 0, 1]);
        assert_eq!(lin.transitive_closure().unwrap(), lin);
        let two = Relation::linear_order(&[0, 1]);
        assert_eq!(two.transitive_closure().unwrap(), two);
    }

    #[test]
    fn condensation_cases() {
        let full = FSet::full(3);
        assert_eq!(three_cycle().condensation_order(full).unwrap(), vec![full]);
        assert_eq!(
            Relation::linear_order(&[0, 1, 2])
                .condensation_order(full)
                .unwrap(),
            vec![set(&[0]), set(&[1]), set(&[2])]
        );
        assert_eq!(
            three_cycle().condensation_order(set(&[0, 1])).unwrap(),
            vec![set(&[0]), set(&[1])]
        );
    }

    #[test]
    fn pip_example_from_hierarchy() {
        // w P x... build a quasi-transitive relation that is not PIP:
        // a P b, b I c, c P d, a I d, everything else indifferent.
        let r = Relation::from_fn(FSet::full(4), |x, y| !matches!((y, x), (0, 1) | (2, 3)));
        let c = r.classify().unwrap();
        assert!(c.quasi_transitive);
        assert!(!c.pip_transitive);
    }

    /// All complete relations on `{0, .., k-1}`: each unordered pair is one of
    /// `x P y`, `y P x`, `x I y`.
    pub(crate) fn all_complete(k: usize) -> Vec<Relation> {
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|x| (x + 1..k).map(move |y| (x, y)))
            .collect();
        let total = 3usize.pow(pairs.len() as u32);
        (0..total)
            .map(|mut code| {
                let mut r = Relation::empty(FSet::full(k));
                for x in 0..k {
                    r = r.with_pair(x, x);
                }
                for &(x, y) in &pairs {
                    match code % 3 {
                        0 => r = r.with_pair(x, y),
                        1 => r = r.with_pair(y, x),
                        _ => r = r.with_pair(x, y).with_pair(y, x),
                    }
                    code /= 3;
                }
                r
            })
            .collect()
    }

    /// Acyclicity straight from the chain condition: `x1 P .. P xk` implies
    /// `x1 R xk`, checked over simple chains by DFS.
    fn acyclic_by_chains(r: &Relation) -> bool {
        fn walk(r: &Relation, start: usize, cur: usize, visited: FSet) -> bool {
            r.weak(start, cur)
                && r.carrier()
                    .iter()
                    .filter(|&n| r.strict(cur, n) && !visited.contains(n))
                    .all(|n| walk(r, start, n, visited.with(n)))
        }
        r.carrier()
            .iter()
            .all(|s| walk(r, s, s, FSet::singleton(s)))
    }

    #[test]
    fn hierarchy_holds_on_all_small_relations() {
        for k in 1..=4 {
            let rels = all_complete(k);
            assert_eq!(rels.len(), 3usize.pow((k * (k - 1) / 2) as u32));
            for r in rels {
                let c = r.classify().unwrap();
                assert!(c.chain_is_consistent());
                assert_eq!(c.acyclic, acyclic_by_chains(&r), "{r:?}");
            }
        }
    }

    #[test]
    fn max_nonempty_everywhere_iff_acyclic() {
        for k in 1..=3 {
            for r in all_complete(k) {
                let all_nonempty = FSet::full(k)
                    .subsets()
                    .all(|a| !r.max_elements(a).unwrap().is_empty());
                assert_eq!(all_nonempty, r.is_acyclic(), "{r:?}");
            }
        }
    }

    #[test]
    fn closure_is_transitive_superset() {
        for r in all_complete(4) {
            let tc = r.transitive_closure().unwrap();
            assert!(tc.classify().unwrap().transitive);
            assert!(r.is_subrelation_of(&tc));
        }
    }

    fn margins(n: usize, edges: &[(usize, usize, i64)]) -> MarginMatrix {
        let u = std::sync::Arc::new(Universe::alphabetic(n).unwrap());
        MarginMatrix::from_edges(u, edges.iter().copied()).unwrap()
    }

    #[test]
    fn widest_path_examples() {
        let m = margins(3, &[(0, 1, 1), (1, 2, 3), (2, 0, 5)]);
        let s = maximin_path_strengths(&m, FSet::full(3)).unwrap();
        assert_eq!(s.get(1, 0), Strength::Finite(3));
        assert_eq!(s.get(1, 1), Strength::Unbounded);
        let m = margins(2, &[(0, 1, 2)]);
        let s = maximin_path_strengths(&m, FSet::full(2)).unwrap();
        assert_eq!(s.get(0, 1), Strength::Finite(2));
        assert_eq!(s.get(1, 0), Strength::NoPath);
        assert!(maximin_path_strengths(&m, set(&[2])).is_err());
    }

    /// Brute force over simple paths.
    fn widest_by_enumeration(m: &MarginMatrix, a: FSet, s: usize, t: usize) -> Strength {
        fn go(
            m: &MarginMatrix,
            a: FSet,
            cur: usize,
            t: usize,
            used: FSet,
            width: Strength,
        ) -> Strength {
            if cur == t {
                return width;
            }
            let mut best = Strength::NoPath;
            for nxt in a.difference(used) {
                if m.get(cur, nxt) >= 0 {
                    let w = width.min(Strength::Finite(m.get(cur, nxt)));
                    best = best.max(go(m, a, nxt, t, used.with(nxt), w));
                }
            }
            best
        }
        go(m, a, s, t, FSet::singleton(s), Strength::Unbounded)
    }

    proptest::proptest! {
        #[test]
        fn widest_path_matches_enumeration(
            vals in proptest::collection::vec(-4i64..=4, 10),
            amask in 1u32..32,
        ) {
            let mut edges = Vec::new();
            let mut k = 0;
            for x in 0..5 {
                for y in x + 1..5 {
                    edges.push((x, y, vals[k]));
                    k += 1;
                }
            }
            let m = margins(5, &edges);
            let a = FSet::from_mask(amask);
            let s = maximin_path_strengths(&m, a).unwrap();
            for x in a {
                for y in a {
                    proptest::prop_assert_eq!(s.get(x, y), widest_by_enumeration(&m, a, x, y));
                    if x != y && m.get(x, y) >= 0 {
                        proptest::prop_assert!(s.get(x, y) >= Strength::Finite(m.get(x, y)));
                    }
                }
            }
            let bigger = maximin_path_strengths(&m, FSet::full(5)).unwrap();
            for x in a {
                for y in a {
                    proptest::prop_assert!(bigger.get(x, y) >= s.get(x, y));
                }
            }
        }
    }
}
