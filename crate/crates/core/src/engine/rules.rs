//! The ordered reduction and branching rules.
//!
//! Guards are evaluated in a fixed priority order and the first one that
//! fires decides the step. Within a rule the lowest eligible vertex id wins.
//! Later guards rely on earlier ones having been exhausted only for their
//! running-time bounds, never for correctness: every branching rule is a
//! complete case split on its own.

use std::fmt;

use serde::Serialize;

use super::instance::{Branch, Instance, Status};
use crate::graph::VertexSet;

use Status::{OutUndominated as On, UndecidedDominated as Vd, UndecidedUndominated as Vn};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Rule {
    /// Dominated undecided vertex with an undominated excluded neighbor.
    B1,
    /// Dominated undecided vertex touching two solution components.
    B2,
    /// Excluded undominated vertex two steps away from a dominated one.
    B3,
    /// Adjacent dominated vertices hanging off different components.
    B4,
    /// Edge between dominated vertices of the same component is dropped.
    R1,
    /// Isolated working vertex.
    R2,
    /// Edge between undominated excluded vertices is dropped.
    R3,
    /// Undominated vertex with no undecided neighbor.
    R4,
    /// Undominated vertex with a single possible dominator.
    R5,
    B5,
    B6,
    B7,
    B8,
    B9,
    B10,
    /// Catch-all binary branch on a dominated vertex.
    B12,
}

impl Rule {
    pub const ALL: [Rule; 16] = [
        Rule::B1,
        Rule::B2,
        Rule::B3,
        Rule::B4,
        Rule::R1,
        Rule::R2,
        Rule::R3,
        Rule::R4,
        Rule::R5,
        Rule::B5,
        Rule::B6,
        Rule::B7,
        Rule::B8,
        Rule::B9,
        Rule::B10,
        Rule::B12,
    ];

    pub fn index(self) -> usize {
        Rule::ALL.iter().position(|&r| r == self).expect("listed")
    }

    pub fn label(self) -> &'static str {
        match self {
            Rule::B1 => "B1",
            Rule::B2 => "B2",
            Rule::B3 => "B3",
            Rule::B4 => "B4",
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
            Rule::R5 => "R5",
            Rule::B5 => "B5",
            Rule::B6 => "B6",
            Rule::B7 => "B7",
            Rule::B8 => "B8",
            Rule::B9 => "B9",
            Rule::B10 => "B10",
            Rule::B12 => "B12",
        }
    }

    pub fn is_reduction(self) -> bool {
        matches!(self, Rule::R1 | Rule::R2 | Rule::R3 | Rule::R4 | Rule::R5)
    }

    /// Rules that handle dominated vertices of arbitrary degree and the
    /// reductions; after they are exhausted the structural invariant holds.
    pub fn in_first_set(self) -> bool {
        matches!(
            self,
            Rule::B1
                | Rule::B2
                | Rule::B3
                | Rule::B4
                | Rule::R1
                | Rule::R2
                | Rule::R3
                | Rule::R4
                | Rule::R5
        )
    }

    /// Rules on a low-degree dominated vertex, plus the catch-all.
    pub fn in_third_set(self) -> bool {
        matches!(self, Rule::B7 | Rule::B8 | Rule::B9 | Rule::B10 | Rule::B12)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// Drop a working-graph edge.
    DeleteEdge(usize, usize),
    /// Exclude a dominated vertex.
    Discard(usize),
    /// Force a vertex into the solution.
    Take(usize),
}

/// Vertices playing the named roles of a branching rule: `pivot` is the
/// vertex branched on, `first`/`second` its relevant neighbors, `extra` the
/// additional witness (the vertex `z` or `y`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Focus {
    pub pivot: usize,
    pub first: Option<usize>,
    pub second: Option<usize>,
    pub extra: Option<usize>,
}

impl Focus {
    fn on(pivot: usize) -> Self {
        Self {
            pivot,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PruneReason {
    /// A reduction rule showed the branch holds no solution.
    Rule(Rule),
    /// Every vertex of a recorded commitment was excluded.
    Commitment,
    /// Undominated vertices remain but nothing adjacent to the solution is
    /// left to decide.
    Stuck,
    /// A vertex the caller requires in every solution was excluded.
    Required,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Reduce {
        rule: Rule,
        reduction: Reduction,
    },
    Branch {
        rule: Rule,
        focus: Focus,
        branches: Vec<Branch>,
    },
    Leaf,
    Prune(PruneReason),
}

impl Decision {
    pub fn rule(&self) -> Option<Rule> {
        match self {
            Decision::Reduce { rule, .. } | Decision::Branch { rule, .. } => Some(*rule),
            Decision::Prune(PruneReason::Rule(rule)) => Some(*rule),
            _ => None,
        }
    }
}

fn branch_on(rule: Rule, focus: Focus, branches: Vec<Branch>) -> Decision {
    debug_assert!(branches.len() >= 2);
    Decision::Branch {
        rule,
        focus,
        branches,
    }
}

/// Picks the next step for `inst`: the first rule whose guard holds, a leaf
/// when nothing is left to decide, or a prune.
pub fn next_step(inst: &Instance<'_>) -> Decision {
    if inst
        .commitments()
        .iter()
        .any(|c| c.iter().all(|v| inst.status(v).is_out()))
    {
        return Decision::Prune(PruneReason::Commitment);
    }

    let n = inst.graph().order();
    let st = |v: usize| inst.status(v);
    let with = |s: Status| (0..n).filter(move |&v| st(v) == s);
    let undecided = |s: Status| s.is_undecided();

    // B1
    for x in with(Vd) {
        if inst
            .working_neighbors_where(x, |s| s == On)
            .next()
            .is_some()
        {
            return branch_on(
                Rule::B1,
                Focus::on(x),
                vec![Branch::new().skip(x), Branch::new().take(x)],
            );
        }
    }

    // B2
    for x in with(Vd) {
        if inst.adjacent_components(x).len() >= 2 {
            return branch_on(
                Rule::B2,
                Focus::on(x),
                vec![Branch::new().skip(x), Branch::new().take(x)],
            );
        }
    }

    // B3
    for x in with(Vd) {
        for y in inst.working_neighbors_where(x, |s| s == Vn) {
            if let Some(z) = inst.working_neighbors_where(y, |s| s == On).next() {
                let focus = Focus {
                    pivot: x,
                    first: Some(y),
                    extra: Some(z),
                    ..Focus::default()
                };
                return branch_on(
                    Rule::B3,
                    focus,
                    vec![
                        Branch::new().skip(x),
                        Branch::new().take(x).skip(y),
                        Branch::new().take(x).take(y),
                    ],
                );
            }
        }
    }

    // B4 and R1 both look at edges between dominated undecided vertices.
    let mut same_component_edge = None;
    for x in with(Vd) {
        let cx = inst.adjacent_components(x);
        for y in inst.working_neighbors_where(x, |s| s == Vd) {
            if inst.adjacent_components(y) != cx {
                let focus = Focus {
                    pivot: x,
                    first: Some(y),
                    ..Focus::default()
                };
                return branch_on(
                    Rule::B4,
                    focus,
                    vec![
                        Branch::new().skip(x),
                        Branch::new().take(x).skip(y),
                        Branch::new().take(x).take(y),
                    ],
                );
            }
            if same_component_edge.is_none() {
                same_component_edge = Some((x, y));
            }
        }
    }

    // R1
    if let Some((x, y)) = same_component_edge {
        return Decision::Reduce {
            rule: Rule::R1,
            reduction: Reduction::DeleteEdge(x, y),
        };
    }

    // R2
    for x in (0..n).filter(|&v| st(v).is_active()) {
        if inst.working_neighbors(x).is_empty() {
            return if st(x) == Vd {
                Decision::Reduce {
                    rule: Rule::R2,
                    reduction: Reduction::Discard(x),
                }
            } else {
                Decision::Prune(PruneReason::Rule(Rule::R2))
            };
        }
    }

    // R3
    for x in with(On) {
        if let Some(y) = inst.working_neighbors_where(x, |s| s == On).next() {
            return Decision::Reduce {
                rule: Rule::R3,
                reduction: Reduction::DeleteEdge(x, y),
            };
        }
    }

    // R4
    for x in with(Vn) {
        if inst.working_neighbors_where(x, undecided).next().is_none() {
            return Decision::Prune(PruneReason::Rule(Rule::R4));
        }
    }

    // R5
    for x in (0..n).filter(|&v| st(v) == Vn || st(v) == On) {
        let nbrs = inst.undecided_neighbors(x);
        if let [y] = nbrs[..] {
            return Decision::Reduce {
                rule: Rule::R5,
                reduction: Reduction::Take(y),
            };
        }
    }

    // B5
    for u in with(Vn) {
        let nbrs = inst.undecided_neighbors(u);
        let no_on = inst
            .working_neighbors_where(u, |s| s == On)
            .next()
            .is_none();
        if let ([v1, v2], true) = (&nbrs[..], no_on) {
            let (v1, v2) = (*v1, *v2);
            return branch_on(
                Rule::B5,
                pair_focus(u, v1, v2),
                vec![
                    Branch::new().skip(u).take(v1),
                    Branch::new().skip(u).skip(v1).take(v2),
                    Branch::new().take(u).take(v1),
                    Branch::new().take(u).skip(v1).take(v2),
                ],
            );
        }
    }

    // B6
    for u in with(On) {
        if let [v1, v2] = inst.undecided_neighbors(u)[..] {
            return branch_on(
                Rule::B6,
                pair_focus(u, v1, v2),
                vec![Branch::new().take(v1), Branch::new().skip(v1).take(v2)],
            );
        }
    }

    // B7
    for u in with(Vd) {
        let undominated: Vec<usize> = inst.working_neighbors_where(u, |s| s == Vn).collect();
        if let [v] = undominated[..] {
            if inst
                .working_neighbors_where(v, |s| s == On)
                .next()
                .is_none()
            {
                let others: Vec<usize> = inst
                    .undecided_neighbors(v)
                    .into_iter()
                    .filter(|&w| w != u)
                    .collect();
                let focus = Focus {
                    pivot: u,
                    first: Some(v),
                    ..Focus::default()
                };
                return branch_on(
                    Rule::B7,
                    focus,
                    vec![
                        Branch::new().skip(u),
                        Branch::new().take(u).skip(v).skip_all(others),
                        Branch::new().take(u).take(v),
                    ],
                );
            }
        }
    }

    // B8
    for u in with(Vd) {
        let nbrs = inst.undecided_neighbors(u);
        if nbrs.len() != 2
            || inst
                .working_neighbors_where(u, |s| s == On)
                .next()
                .is_some()
        {
            continue;
        }
        let (v1, v2) = (nbrs[0], nbrs[1]);
        let second = inst.undecided_neighbors(v2);
        let common = inst
            .undecided_neighbors(v1)
            .into_iter()
            .find(|&y| y != u && second.contains(&y));
        if let Some(y) = common {
            let focus = Focus {
                extra: Some(y),
                ..pair_focus(u, v1, v2)
            };
            return branch_on(
                Rule::B8,
                focus,
                vec![
                    Branch::new().skip(u),
                    Branch::new().take(u).take(v1),
                    Branch::new().take(u).skip(v1).take(v2),
                    Branch::new().take(u).skip(v1).skip(v2).skip(y),
                ],
            );
        }
    }

    // B9 and B10 share their guard on u.
    let mut wide = None;
    for u in with(Vd) {
        let Some((a, b)) = two_undominated_neighbors(inst, u) else {
            continue;
        };
        let outside = |v: usize, other: usize| -> Vec<usize> {
            inst.undecided_neighbors(v)
                .into_iter()
                .filter(|&w| w != u && w != other)
                .collect()
        };
        let (out_a, out_b) = (outside(a, b), outside(b, a));
        for (v1, v2, out1, out2) in [(a, b, &out_a, &out_b), (b, a, &out_b, &out_a)] {
            if let [y] = out1[..] {
                let focus = Focus {
                    extra: Some(y),
                    ..pair_focus(u, v1, v2)
                };
                let beyond: Vec<usize> = out2.iter().copied().filter(|&w| w != y).collect();
                return branch_on(
                    Rule::B9,
                    focus,
                    vec![
                        Branch::new().skip(u),
                        Branch::new().take(u).take(v1),
                        Branch::new().take(u).skip(v1).take(v2),
                        Branch::new().take(u).skip(v1).skip(v2).skip(y),
                        Branch::new()
                            .take(u)
                            .skip(v1)
                            .skip(v2)
                            .take(y)
                            .skip_all(beyond),
                    ],
                );
            }
        }
        if wide.is_none() && out_a.len() >= 2 && out_b.len() >= 2 {
            wide = Some((u, a, b, out_a, out_b));
        }
    }

    // B10
    if let Some((u, v1, v2, out1, out2)) = wide {
        let committed: VertexSet = out1.iter().copied().collect();
        return branch_on(
            Rule::B10,
            pair_focus(u, v1, v2),
            vec![
                Branch::new().skip(u),
                Branch::new().take(u).take(v1),
                Branch::new().take(u).skip(v1).take(v2),
                Branch::new().take(u).skip(v1).skip(v2).skip_all(out1),
                Branch::new()
                    .take(u)
                    .skip(v1)
                    .skip(v2)
                    .skip_all(out2)
                    .commit(committed),
            ],
        );
    }

    if (0..n).all(|v| !st(v).is_active()) {
        return Decision::Leaf;
    }

    // B12
    if let Some(x) = with(Vd).next() {
        return branch_on(
            Rule::B12,
            Focus::on(x),
            vec![Branch::new().skip(x), Branch::new().take(x)],
        );
    }

    Decision::Prune(PruneReason::Stuck)
}

fn pair_focus(pivot: usize, first: usize, second: usize) -> Focus {
    Focus {
        pivot,
        first: Some(first),
        second: Some(second),
        extra: None,
    }
}

/// For the shared B9/B10 guard: `u` has exactly two undominated undecided
/// working neighbors and nothing else that is active.
fn two_undominated_neighbors(inst: &Instance<'_>, u: usize) -> Option<(usize, usize)> {
    let mut undominated = Vec::with_capacity(2);
    for &w in inst.working_neighbors(u) {
        match inst.status(w) {
            Vn => undominated.push(w),
            Vd | On => return None,
            _ => {}
        }
    }
    match undominated[..] {
        [a, b] => Some((a, b)),
        _ => None,
    }
}
