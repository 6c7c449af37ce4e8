use crate::axioms::{check_axiom, AxiomId};
use crate::choice::ChoiceTable;
use crate::populations::TableSpace;
use crate::universe::FSet;

use super::RatError;

/// Finest γ-satisfying choice function containing `c`:
/// `A ↦ max_{R^A_C} A`.
pub fn gamma_hull(c: &ChoiceTable) -> ChoiceTable {
    c.local_revealed_preference()
        .maximal_table()
        .expect("local revealed preference is acyclic")
}

/// The γ-hull computed by repeatedly adding `C(A) ∩ C(B)` to `C(A ∪ B)`
/// until nothing changes.
pub fn hull_oracle(c: &ChoiceTable) -> ChoiceTable {
    let mut t = c.clone();
    let sets: Vec<FSet> = c.universe().feasible_sets().collect();
    let slots = t.slots_mut();
    loop {
        let mut changed = false;
        for &a in &sets {
            for &b in &sets {
                let u = a.union(b).index();
                let add = slots[a.index()].intersection(slots[b.index()]);
                if !add.is_subset(slots[u]) {
                    slots[u] = slots[u].union(add);
                    changed = true;
                }
            }
        }
        if !changed {
            return t;
        }
    }
}

/// The γ-hull as the intersection of every γ-satisfying coarsening of `c`.
/// Enumerates all choice functions, so only `n ≤ 3` is accepted.
pub fn hull_by_intersection(c: &ChoiceTable) -> Result<ChoiceTable, RatError> {
    let n = c.n();
    if n > 3 {
        return Err(RatError::OutOfRange(n));
    }
    let space = TableSpace::all(c.universe().clone());
    let coarsenings: Vec<ChoiceTable> = space
        .iter()
        .filter(|t| {
            c.is_refinement_of(t).unwrap_or(false) && check_axiom(t, AxiomId::Gamma).holds()
        })
        .collect();
    Ok(ChoiceTable::intersect(&coarsenings).expect("the coarsest table always qualifies"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::choice::example_table;
    use crate::populations::TableSpace;
    use crate::universe::Universe;
    use std::sync::Arc;

    #[test]
    fn hull_of_gamma_table_is_itself() {
        let t = example_table();
        assert_eq!(gamma_hull(&t), t);
        assert_eq!(hull_oracle(&t), t);
    }

    #[test]
    fn three_routes_agree_on_all_tables() {
        let u = Arc::new(Universe::alphabetic(3).unwrap());
        for t in TableSpace::all(u).iter() {
            let h = gamma_hull(&t);
            assert_eq!(h, hull_oracle(&t), "{t:?}");
            assert_eq!(h, hull_by_intersection(&t).unwrap(), "{t:?}");
            assert!(check_axiom(&h, AxiomId::Gamma).holds());
            assert!(t.is_refinement_of(&h).unwrap());
        }
    }

    #[test]
    fn intersection_route_limited() {
        let u = Arc::new(Universe::alphabetic(4).unwrap());
        let t = ChoiceTable::coarsest(u);
        assert_eq!(hull_by_intersection(&t), Err(RatError::OutOfRange(4)));
    }
}
