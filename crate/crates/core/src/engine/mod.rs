//! Branch-and-reduce enumeration of minimal connected dominating sets.

mod instance;
mod measure;
mod rules;

use std::ops::ControlFlow;

use serde::Serialize;

pub use instance::{Branch, Instance, Status, Target};
pub use measure::{check_branch_decrease, claimed_vector, measure};
pub use rules::{next_step, Decision, Focus, PruneReason, Reduction, Rule};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Counters collected during a search.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    /// Search-tree nodes visited, root instances included.
    pub nodes: u64,
    pub rule_counts: [u64; 16],
    pub prunes: u64,
    pub leaves: u64,
}

impl Stats {
    pub fn rule_count(&self, rule: Rule) -> u64 {
        self.rule_counts[rule.index()]
    }

    /// Rule labels with their application counts, in priority order.
    pub fn per_rule(&self) -> Vec<(Rule, u64)> {
        Rule::ALL.iter().map(|&r| (r, self.rule_count(r))).collect()
    }

    pub fn merge(&mut self, other: &Stats) {
        self.nodes += other.nodes;
        self.prunes += other.prunes;
        self.leaves += other.leaves;
        for (a, b) in self.rule_counts.iter_mut().zip(other.rule_counts) {
            *a += b;
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct EnumOptions {
    /// Only solutions containing all of these vertices are reported.
    pub required: VertexSet,
    /// Give up with [`Error::BudgetExceeded`] after this many nodes.
    pub node_budget: Option<u64>,
}

/// Observer for every reduction and branching step. Returning an error
/// aborts the search.
pub trait StepHook {
    fn on_step(
        &mut self,
        parent: &Instance<'_>,
        decision: &Decision,
        children: &[Instance<'_>],
    ) -> Result<()>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub count: u64,
    pub stats: Stats,
    /// The sink asked to stop before the search finished.
    pub stopped: bool,
}

/// Singleton solutions (universal vertices) and the root instances, one per
/// vertex `i` with `0..i` excluded and `i` in the solution.
pub fn initial_branches(g: &Graph) -> Result<(Vec<VertexSet>, Vec<Instance<'_>>)> {
    if g.order() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected_graph() {
        return Err(Error::Disconnected);
    }
    let singles = (0..g.order())
        .filter(|&v| g.is_universal(v))
        .map(VertexSet::singleton)
        .collect();
    let roots = (0..g.order())
        .filter(|&i| !g.is_universal(i))
        .map(|i| {
            let mut inst = Instance::fresh(g);
            inst.apply(&Branch::new().take(i).skip_all(0..i));
            inst
        })
        .collect();
    Ok((singles, roots))
}

/// Children of `inst` under `decision`.
pub fn expand<'g>(inst: &Instance<'g>, decision: &Decision) -> Vec<Instance<'g>> {
    match decision {
        Decision::Reduce { reduction, .. } => {
            let mut child = inst.clone();
            reduce(&mut child, reduction);
            vec![child]
        }
        Decision::Branch { branches, .. } => branches.iter().map(|b| inst.child(b)).collect(),
        Decision::Leaf | Decision::Prune(_) => Vec::new(),
    }
}

fn reduce(inst: &mut Instance<'_>, reduction: &Reduction) {
    match *reduction {
        Reduction::DeleteEdge(u, v) => inst.delete_working_edge(u, v),
        Reduction::Discard(v) => inst.exclude(v),
        Reduction::Take(v) => inst.add_to_solution(v),
    }
}

/// The solution at a leaf, if it passes certification.
pub fn leaf_emit(inst: &Instance<'_>) -> Option<VertexSet> {
    let s = inst.solution();
    let g = inst.graph();
    let ok = s.len() >= 2
        && g.is_connected(&s).unwrap_or(false)
        && g.is_minimal_cds(&s).unwrap_or(false)
        && inst.commitments().iter().all(|c| c.intersects(&s));
    ok.then_some(s)
}

/// Enumerates every minimal CDS of `g` into `sink` and returns the count.
pub fn enumerate(g: &Graph, mut sink: impl FnMut(&VertexSet)) -> Result<u64> {
    let outcome = enumerate_with(g, &EnumOptions::default(), None, |s| {
        sink(s);
        ControlFlow::Continue(())
    })?;
    Ok(outcome.count)
}

/// All minimal CDS of `g` in canonical order.
pub fn enumerate_all(g: &Graph) -> Result<Vec<VertexSet>> {
    let mut out = Vec::new();
    enumerate(g, |s| out.push(s.clone()))?;
    out.sort();
    Ok(out)
}

/// The full driver: options, an optional step hook, and a sink that may
/// stop the search early.
pub fn enumerate_with(
    g: &Graph,
    options: &EnumOptions,
    mut hook: Option<&mut dyn StepHook>,
    mut sink: impl FnMut(&VertexSet) -> ControlFlow<()>,
) -> Result<Outcome> {
    options.required.check_range(g.order())?;
    let (singles, roots) = initial_branches(g)?;
    let mut search = Search {
        options,
        stats: Stats::default(),
        count: 0,
    };
    for s in singles {
        if options.required.is_subset(&s) {
            search.count += 1;
            if sink(&s).is_break() {
                return Ok(search.finish(true));
            }
        }
    }
    for root in roots {
        if search.run(root, &mut hook, &mut sink)?.is_break() {
            return Ok(search.finish(true));
        }
    }
    Ok(search.finish(false))
}

struct Search<'o> {
    options: &'o EnumOptions,
    stats: Stats,
    count: u64,
}

impl Search<'_> {
    fn finish(self, stopped: bool) -> Outcome {
        Outcome {
            count: self.count,
            stats: self.stats,
            stopped,
        }
    }

    fn run<'g>(
        &mut self,
        root: Instance<'g>,
        hook: &mut Option<&mut dyn StepHook>,
        sink: &mut impl FnMut(&VertexSet) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        let mut stack = vec![root];
        while let Some(mut inst) = stack.pop() {
            loop {
                self.stats.nodes += 1;
                if let Some(budget) = self.options.node_budget {
                    if self.stats.nodes > budget {
                        return Err(Error::BudgetExceeded { budget });
                    }
                }
                let decision = if self
                    .options
                    .required
                    .iter()
                    .any(|v| inst.status(v).is_out())
                {
                    Decision::Prune(PruneReason::Required)
                } else {
                    next_step(&inst)
                };
                if let Some(rule) = decision.rule() {
                    self.stats.rule_counts[rule.index()] += 1;
                }
                match decision {
                    Decision::Leaf => {
                        self.stats.leaves += 1;
                        if let Some(s) = leaf_emit(&inst) {
                            self.count += 1;
                            if sink(&s).is_break() {
                                return Ok(ControlFlow::Break(()));
                            }
                        }
                        break;
                    }
                    Decision::Prune(_) => {
                        self.stats.prunes += 1;
                        break;
                    }
                    Decision::Reduce { ref reduction, .. } => {
                        if let Some(h) = hook.as_deref_mut() {
                            let children = expand(&inst, &decision);
                            h.on_step(&inst, &decision, &children)?;
                        }
                        reduce(&mut inst, reduction);
                    }
                    Decision::Branch { .. } => {
                        let children = expand(&inst, &decision);
                        if let Some(h) = hook.as_deref_mut() {
                            h.on_step(&inst, &decision, &children)?;
                        }
                        stack.extend(children.into_iter().rev());
                        break;
                    }
                }
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Parallel enumeration over the root instances. Returns the solutions in
/// canonical order together with merged counters.
#[cfg(feature = "parallel")]
pub fn enumerate_parallel(g: &Graph, options: &EnumOptions) -> Result<(Vec<VertexSet>, Stats)> {
    use rayon::prelude::*;

    options.required.check_range(g.order())?;
    let (singles, roots) = initial_branches(g)?;
    let parts: Vec<(Vec<VertexSet>, Stats)> = roots
        .into_par_iter()
        .map(|root| {
            let mut search = Search {
                options,
                stats: Stats::default(),
                count: 0,
            };
            let mut found = Vec::new();
            let _ = search.run(root, &mut None, &mut |s: &VertexSet| {
                found.push(s.clone());
                ControlFlow::Continue(())
            })?;
            Ok((found, search.stats))
        })
        .collect::<Result<_>>()?;
    let mut all: Vec<VertexSet> = singles
        .into_iter()
        .filter(|s| options.required.is_subset(s))
        .collect();
    let mut stats = Stats::default();
    for (found, part) in parts {
        all.extend(found);
        stats.merge(&part);
    }
    all.sort();
    Ok((all, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path, star};

    fn vs(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    fn root_with(g: &Graph, s: usize) -> Instance<'_> {
        initial_branches(g)
            .unwrap()
            .1
            .into_iter()
            .find(|i| i.solution() == VertexSet::singleton(s))
            .unwrap()
    }

    #[test]
    fn initial_branches_star() {
        let g = star(3);
        let (singles, roots) = initial_branches(&g).unwrap();
        assert_eq!(singles, vec![vs(&[0])]);
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().all(|r| r.solution() != vs(&[0])));
    }

    #[test]
    fn initial_branches_cycle_and_path() {
        let c4 = cycle(4);
        let (singles, roots) = initial_branches(&c4).unwrap();
        assert!(singles.is_empty());
        assert_eq!(roots.len(), 4);

        let g = path(3);
        let (singles, roots) = initial_branches(&g).unwrap();
        assert_eq!(singles, vec![vs(&[1])]);
        let sols: Vec<_> = roots.iter().map(Instance::solution).collect();
        assert_eq!(sols, vec![vs(&[0]), vs(&[2])]);
        // vertex 0 is excluded in the second root and dominated by nothing
        assert_eq!(roots[1].status(0), Status::OutUndominated);
    }

    #[test]
    fn disconnected_rejected() {
        let g = Graph::new(2, [] as [(usize, usize); 0]).unwrap();
        assert_eq!(initial_branches(&g).unwrap_err(), Error::Disconnected);
        assert!(enumerate_all(&g).is_err());
    }

    #[test]
    fn path_root_takes_forced_vertex() {
        let g = path(3);
        let inst = root_with(&g, 0);
        assert_eq!(inst.status(1), Status::UndecidedDominated);
        assert_eq!(inst.status(2), Status::UndecidedUndominated);
        let d = next_step(&inst);
        assert_eq!(
            d,
            Decision::Reduce {
                rule: Rule::R5,
                reduction: Reduction::Take(1)
            }
        );
    }

    #[test]
    fn two_components_trigger_b2() {
        let g = path(3);
        let mut inst = Instance::fresh(&g);
        inst.apply(&Branch::new().take(0).take(2));
        assert_eq!(inst.component_count(), 2);
        let d = next_step(&inst);
        assert_eq!(d.rule(), Some(Rule::B2));
        let kids = expand(&inst, &d);
        assert_eq!(kids.len(), 2);
        assert_eq!(kids[0].status(1), Status::OutDominated);
        assert_eq!(kids[0].component_count(), 2);
        assert_eq!(kids[1].status(1), Status::InSolution);
        assert_eq!(kids[1].component_count(), 1);
    }

    #[test]
    fn cycle_root_branches_with_b5() {
        let g = cycle(4);
        let inst = root_with(&g, 0);
        assert_eq!(inst.with_status(Status::UndecidedDominated), vs(&[1, 3]));
        let d = next_step(&inst);
        let Decision::Branch { rule, focus, .. } = &d else {
            panic!("expected a branch, got {d:?}");
        };
        assert_eq!(*rule, Rule::B5);
        assert_eq!(
            (focus.pivot, focus.first, focus.second),
            (2, Some(1), Some(3))
        );

        use Status::*;
        let kids = expand(&inst, &d);
        let got: Vec<Vec<Status>> = kids
            .iter()
            .map(|k| vec![k.status(2), k.status(1), k.status(3)])
            .collect();
        assert_eq!(
            got,
            vec![
                vec![OutDominated, InSolution, UndecidedDominated],
                vec![OutDominated, OutDominated, InSolution],
                vec![InSolution, InSolution, UndecidedDominated],
                vec![InSolution, OutDominated, InSolution],
            ]
        );
    }

    #[test]
    fn r3_fires_on_isolated_pair() {
        // S = {0}; 2 and 3 are undominated, excluded and adjacent
        let g = Graph::new(5, [(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]).unwrap();
        let mut inst = Instance::fresh(&g);
        inst.apply(&Branch::new().take(0).skip(2).skip(3));
        // 1 and 4 are V'd with On neighbors: B1 fires first
        assert_eq!(next_step(&inst).rule(), Some(Rule::B1));
        // without a solution vertex nothing is dominated and R3 comes first
        let mut inner = Instance::fresh(&g);
        inner.apply(&Branch::new().skip(2).skip(3));
        let d = next_step(&inner);
        assert_eq!(
            d,
            Decision::Reduce {
                rule: Rule::R3,
                reduction: Reduction::DeleteEdge(2, 3)
            }
        );
        let child = expand(&inner, &d).pop().unwrap();
        assert!(!child.has_working_edge(2, 3));
        assert_eq!(child.statuses(), inner.statuses());
    }

    #[test]
    fn leaf_certification() {
        let g = cycle(4);
        let mut inst = Instance::fresh(&g);
        inst.apply(&Branch::new().take(0).take(1).skip(2).skip(3));
        assert_eq!(next_step(&inst), Decision::Leaf);
        assert_eq!(leaf_emit(&inst), Some(vs(&[0, 1])));

        let mut split = Instance::fresh(&g);
        split.apply(&Branch::new().take(0).take(2).skip(1).skip(3));
        assert_eq!(leaf_emit(&split), None);

        let mut committed = Instance::fresh(&g);
        committed.apply(
            &Branch::new()
                .take(0)
                .take(1)
                .skip(2)
                .skip(3)
                .commit(vs(&[2, 3])),
        );
        assert_eq!(leaf_emit(&committed), None);
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_all(&path(3)).unwrap(), vec![vs(&[1])]);
        assert_eq!(
            enumerate_all(&cycle(4)).unwrap(),
            vec![vs(&[0, 1]), vs(&[0, 3]), vs(&[1, 2]), vs(&[2, 3])]
        );
        assert_eq!(enumerate_all(&complete(4)).unwrap().len(), 4);
        assert_eq!(
            enumerate_all(&Graph::new(1, [] as [(usize, usize); 0]).unwrap()).unwrap(),
            vec![vs(&[0])]
        );
    }

    #[test]
    fn required_vertices_filter_and_budget() {
        let g = cycle(5);
        let opts = EnumOptions {
            required: vs(&[0]),
            node_budget: None,
        };
        let mut got = Vec::new();
        enumerate_with(&g, &opts, None, |s| {
            got.push(s.clone());
            ControlFlow::Continue(())
        })
        .unwrap();
        got.sort();
        assert_eq!(got, vec![vs(&[0, 1, 2]), vs(&[0, 1, 4]), vs(&[0, 3, 4])]);

        let tight = EnumOptions {
            required: VertexSet::default(),
            node_budget: Some(2),
        };
        let err = enumerate_with(&g, &tight, None, |_| ControlFlow::Continue(())).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { budget: 2 });
    }

    #[test]
    fn sink_can_stop_early() {
        let out = enumerate_with(&cycle(6), &EnumOptions::default(), None, |_| {
            ControlFlow::Break(())
        })
        .unwrap();
        assert!(out.stopped);
        assert_eq!(out.count, 1);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let g = cycle(7);
        let (par, stats) = enumerate_parallel(&g, &EnumOptions::default()).unwrap();
        assert_eq!(par, enumerate_all(&g).unwrap());
        assert!(stats.nodes > 0);
    }
}
