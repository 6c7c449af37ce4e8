use crate::choice::{ChoiceTable, RelationFamily};
use crate::relation::{covering_walk_ends, Relation};
use crate::universe::{FSet, MAX_ALTERNATIVES};

use super::{validate_family, FamilyViolation, RatError};

/// Which base edges a witnessing path may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoreVariant {
    /// Paths along the base relation `R̄_C`.
    Weak,
    /// Paths along its strict part `P̄_C`.
    Strict,
}

/// How "a path through `D` from `x` to `y`" is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PathReading {
    /// A simple path visiting every member of `D` exactly once.
    #[default]
    Simple,
    /// A walk inside `D` visiting every member at least once.
    Walk,
}

/// Core family: `x R^A y` iff `x R̄ y` or some `D ⊆ A` has a path from
/// `x ∈ C(D)` to `y` through all of `D`.
pub fn gamma_core_family(
    c: &ChoiceTable,
    variant: CoreVariant,
    reading: PathReading,
) -> RelationFamily {
    let n = c.n();
    let size = 1usize << n;
    let base = c.base_relation();
    let step_rel = match variant {
        CoreVariant::Weak => base,
        CoreVariant::Strict => base.strict_part(),
    };
    let mut step = [0u32; MAX_ALTERNATIVES];
    for (x, row) in step.iter_mut().enumerate().take(n) {
        *row = step_rel.row(x).mask() & !(1 << x);
    }

    // wit[D * n + x]: endpoints y witnessed from x by a path through D.
    let mut wit = vec![0u32; size * n];
    match reading {
        PathReading::Simple => {
            // ends[D * n + x]: ends of simple paths from x with vertex set D.
            let mut ends = vec![0u32; size * n];
            for x in 0..n {
                ends[(1 << x) * n + x] = 1 << x;
            }
            for d in 1..size {
                for x in FSet::from_mask(d as u32) {
                    let e = ends[d * n + x];
                    for y in FSet::from_mask(e) {
                        for z in FSet::from_mask(step[y] & !(d as u32)) {
                            ends[(d | 1 << z) * n + x] |= 1 << z;
                        }
                    }
                }
            }
            for d in c.universe().feasible_sets() {
                for x in c.get(d) {
                    wit[d.index() * n + x] = ends[d.index() * n + x];
                }
            }
        }
        PathReading::Walk => {
            for d in c.universe().feasible_sets() {
                if let Some((first, last)) = covering_walk_ends(&step, d) {
                    for x in c.get(d).intersection(first) {
                        wit[d.index() * n + x] = last.mask();
                    }
                }
            }
        }
    }

    for bit in 0..n {
        for mask in 0..size {
            if mask >> bit & 1 == 1 {
                let lower = mask ^ (1 << bit);
                for x in 0..n {
                    wit[mask * n + x] |= wit[lower * n + x];
                }
            }
        }
    }

    RelationFamily::from_fn(c.universe().clone(), |a| {
        let restricted = base.restrict_unchecked(a);
        Relation::from_fn(a, |x, y| {
            restricted.weak(x, y) || wit[a.index() * n + x] >> y & 1 == 1
        })
    })
    .expect("carriers match")
}

/// Choice function generated by the core family, checked to be locally
/// rationalized by it.
pub fn gamma_core(
    c: &ChoiceTable,
    variant: CoreVariant,
    reading: PathReading,
) -> Result<(ChoiceTable, RelationFamily), RatError> {
    let fam = gamma_core_family(c, variant, reading);
    let Some(table) = fam.maximal_table() else {
        let set = fam
            .iter()
            .find(|(a, r)| r.maximal_in(*a).is_empty())
            .map(|(a, _)| a)
            .expect("some maximum is empty");
        return Err(RatError::InvalidFamily(FamilyViolation::Cyclic { set }));
    };
    if let Some(v) = validate_family(&table, &fam)?.witness() {
        return Err(RatError::InvalidFamily(*v));
    }
    Ok((table, fam))
}

/// Weak γ-core under the simple-path reading.
pub fn weak_gamma_core(c: &ChoiceTable) -> Result<ChoiceTable, RatError> {
    gamma_core(c, CoreVariant::Weak, PathReading::Simple).map(|(t, _)| t)
}

/// Strict γ-core under the simple-path reading.
pub fn strict_gamma_core(c: &ChoiceTable) -> Result<ChoiceTable, RatError> {
    gamma_core(c, CoreVariant::Strict, PathReading::Simple).map(|(t, _)| t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::{check_axiom, AxiomId};
    use crate::choice::example_table;
    use crate::rationalization::gamma_hull;

    #[test]
    fn example_cores() {
        let t = example_table();
        // Base relation x > y > z, x > z: transitive and strict.
        let weak = weak_gamma_core(&t).unwrap();
        let strict = strict_gamma_core(&t).unwrap();
        assert_eq!(weak.get(FSet::full(3)), FSet::singleton(0));
        assert_eq!(strict, weak);
        assert!(weak.is_refinement_of(&gamma_hull(&t)).unwrap());
    }

    #[test]
    fn cycle_core_keeps_chosen_start() {
        let u = std::sync::Arc::new(crate::universe::Universe::alphabetic(3).unwrap());
        // a > b > c > a on pairs, C({a,b,c}) = {a}.
        let t = crate::choice::table_from_labels(
            &u,
            &[
                (&["a", "b"], &["a"]),
                (&["b", "c"], &["b"]),
                (&["a", "c"], &["c"]),
                (&["a", "b", "c"], &["a"]),
            ],
        )
        .unwrap();
        for variant in [CoreVariant::Weak, CoreVariant::Strict] {
            for reading in [PathReading::Simple, PathReading::Walk] {
                let (core, _) = gamma_core(&t, variant, reading).unwrap();
                assert_eq!(core.get(u.full()), FSet::singleton(0));
                assert!(check_axiom(&core, AxiomId::Gamma).holds());
            }
        }
    }
}
