use super::instance::{Instance, Status};
use super::rules::{Decision, Focus, Rule};
use crate::analysis::{subcase_vector, Kind, Subcase, WeightSet};
use crate::error::{Error, Result};

/// `|V'_n| + α|O_n| + β|V'_d| + δc`.
pub fn measure(inst: &Instance<'_>, w: &WeightSet) -> f64 {
    inst.count(Status::UndecidedUndominated) as f64
        + w.alpha * inst.count(Status::OutUndominated) as f64
        + w.beta * inst.count(Status::UndecidedDominated) as f64
        + w.delta * inst.component_count() as f64
}

/// Slack allowed when comparing measure decreases.
const EPS: f64 = 1e-9;

fn kind(inst: &Instance<'_>, v: usize) -> Kind {
    if inst.status(v).is_dominated() {
        Kind::Dominated
    } else {
        Kind::Undominated
    }
}

fn undominated_outside(inst: &Instance<'_>, v: usize, skip: &[usize]) -> usize {
    inst.undecided_neighbors(v)
        .into_iter()
        .filter(|w| !skip.contains(w) && inst.status(*w) == Status::UndecidedUndominated)
        .count()
}

fn subcase(inst: &Instance<'_>, rule: Rule, focus: &Focus) -> Result<Subcase> {
    let missing = || Error::Internal(format!("{rule} decision lacks a role vertex"));
    let first = focus.first.ok_or_else(missing);
    let second = focus.second.ok_or_else(missing);
    Ok(match rule {
        Rule::B5 | Rule::B6 => Subcase::Pair(kind(inst, first?), kind(inst, second?)),
        Rule::B7 => Subcase::Count(undominated_outside(inst, first?, &[focus.pivot]).min(2)),
        Rule::B8 | Rule::B9 => Subcase::Witness(kind(inst, focus.extra.ok_or_else(missing)?)),
        Rule::B10 => {
            let (v1, v2) = (first?, second?);
            let n1 = undominated_outside(inst, v1, &[focus.pivot, v2]);
            let n2 = undominated_outside(inst, v2, &[focus.pivot, v1]);
            Subcase::Counts(n1.min(2), n2.min(2))
        }
        _ => Subcase::Single,
    })
}

/// The decreases a step is claimed to achieve, in child order. Reductions
/// claim a single decrease of zero.
pub fn claimed_vector(inst: &Instance<'_>, decision: &Decision, w: &WeightSet) -> Result<Vec<f64>> {
    match decision {
        Decision::Reduce { .. } => Ok(vec![0.0]),
        Decision::Branch { rule, focus, .. } => {
            let sub = subcase(inst, *rule, focus)?;
            subcase_vector(*rule, sub, w)
                .ok_or_else(|| Error::Internal(format!("no vector for {rule} {sub:?}")))
        }
        Decision::Leaf | Decision::Prune(_) => Ok(Vec::new()),
    }
}

/// Whether every child is at least the claimed amount below the parent.
pub fn check_branch_decrease(
    parent: &Instance<'_>,
    decision: &Decision,
    children: &[Instance<'_>],
    w: &WeightSet,
) -> Result<bool> {
    let claimed = claimed_vector(parent, decision, w)?;
    if claimed.len() != children.len() {
        return Err(Error::Internal(format!(
            "{} children but a vector of length {}",
            children.len(),
            claimed.len()
        )));
    }
    let before = measure(parent, w);
    Ok(children
        .iter()
        .zip(&claimed)
        .all(|(child, r)| before - measure(child, w) >= r - EPS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{expand, initial_branches, next_step, Branch};
    use crate::graph::{cycle, Graph};

    #[test]
    fn measure_values() {
        let g = cycle(4);
        let w = WeightSet::GENERAL;
        let fresh = Instance::fresh(&g);
        assert!((measure(&fresh, &w) - 4.0).abs() < 1e-12);

        let root = initial_branches(&g).unwrap().1.remove(0);
        assert!((measure(&root, &w) - 3.112326).abs() < 1e-9);

        let mut leaf = Instance::fresh(&g);
        leaf.apply(&Branch::new().take(0).take(1).skip(2).skip(3));
        assert!((measure(&leaf, &w) - w.delta).abs() < 1e-12);
    }

    #[test]
    fn b5_on_cycle_meets_its_claim() {
        let g = cycle(4);
        let root = initial_branches(&g).unwrap().1.remove(0);
        let d = next_step(&root);
        let kids = expand(&root, &d);
        for w in [WeightSet::TWO_DEGENERATE, WeightSet::GENERAL] {
            assert!(check_branch_decrease(&root, &d, &kids, &w).unwrap());
        }
    }

    #[test]
    fn b1_and_reductions() {
        // 0 in S dominates 1; 2 is excluded and undominated
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (1, 3)]).unwrap();
        let mut inst = Instance::fresh(&g);
        inst.apply(&Branch::new().take(0).skip(2));
        let d = next_step(&inst);
        assert_eq!(d.rule(), Some(Rule::B1));
        let w = WeightSet::GENERAL;
        assert_eq!(
            claimed_vector(&inst, &d, &w).unwrap(),
            vec![w.beta, w.beta + w.alpha]
        );
        assert!(check_branch_decrease(&inst, &d, &expand(&inst, &d), &w).unwrap());
    }

    #[test]
    fn child_count_mismatch_is_an_error() {
        let g = cycle(4);
        let root = initial_branches(&g).unwrap().1.remove(0);
        let d = next_step(&root);
        assert!(check_branch_decrease(&root, &d, &[], &WeightSet::GENERAL).is_err());
    }
}
