//! Runtime checks of the search: state invariants, the structural facts the
//! rule order guarantees, and the claimed measure decreases.

use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{optimize_weights, summarize, Mode, WeightSet};
use crate::catalog::connected_graphs;
use crate::engine::{
    check_branch_decrease, enumerate_all, enumerate_with, Decision, EnumOptions, Instance, Rule,
    Status, StepHook,
};
use crate::error::Result;
use crate::generators::{
    gen_base_gt, gen_gtk, gen_hs_split, gen_random_degenerate, gen_sat_gadget, gt_count,
    random_permutation, Formula,
};
use crate::graph::{Graph, VertexSet};
use crate::oracle::{enumerate_bruteforce, extension_exists, minimal_hitting_sets, DEFAULT_CAP};

/// Collects every violated property it observes instead of aborting.
#[derive(Clone, Debug, Default)]
pub struct InvariantHook {
    pub weights: Vec<WeightSet>,
    /// Flag any use of the catch-all rule.
    pub forbid_catch_all: bool,
    pub steps: u64,
    pub violations: Vec<String>,
}

/// Keep reports readable when something goes systematically wrong.
const MAX_VIOLATIONS: usize = 50;

impl InvariantHook {
    pub fn new(weights: &[WeightSet], forbid_catch_all: bool) -> Self {
        Self {
            weights: weights.to_vec(),
            forbid_catch_all,
            ..Self::default()
        }
    }

    fn report(&mut self, message: String) {
        if self.violations.len() < MAX_VIOLATIONS {
            self.violations.push(message);
        }
    }
}

impl StepHook for InvariantHook {
    fn on_step(
        &mut self,
        parent: &Instance<'_>,
        decision: &Decision,
        children: &[Instance<'_>],
    ) -> Result<()> {
        self.steps += 1;
        let rule = decision.rule();
        let label = rule.map_or("-", Rule::label);
        if let Err(e) = parent.check_invariants() {
            self.report(format!("{label}: parent state: {e}"));
        }
        for (i, child) in children.iter().enumerate() {
            if let Err(e) = child.check_invariants() {
                self.report(format!("{label}: child {i}: {e}"));
            }
            if let Some(v) =
                (0..parent.graph().order()).find(|&v| !allowed(parent.status(v), child.status(v)))
            {
                self.report(format!(
                    "{label}: child {i} moves {v} from {} to {}",
                    parent.status(v).tag(),
                    child.status(v).tag()
                ));
            }
        }
        let Some(rule) = rule else {
            return Ok(());
        };
        if !rule.in_first_set() {
            if let Err(e) = structural(parent) {
                self.report(format!("{rule} fired but {e}"));
            }
        }
        if rule.in_third_set() {
            if let Some(v) = low_degree(parent) {
                self.report(format!("{rule} fired with {v} of working degree below 3"));
            }
        }
        if self.forbid_catch_all && rule == Rule::B12 {
            self.report("B12 fired".into());
        }
        for w in self.weights.clone() {
            match check_branch_decrease(parent, decision, children, &w) {
                Ok(true) => {}
                Ok(false) => self.report(format!("{rule} misses its claimed decrease at {w}")),
                Err(e) => self.report(format!("{rule}: {e}")),
            }
        }
        Ok(())
    }
}

fn allowed(from: Status, to: Status) -> bool {
    use Status::*;
    match from {
        UndecidedUndominated => true,
        UndecidedDominated => matches!(to, UndecidedDominated | OutDominated | InSolution),
        OutUndominated => matches!(to, OutUndominated | OutDominated),
        OutDominated | InSolution => to == from,
    }
}

/// Once the first rule set is exhausted: dominated undecided vertices are
/// independent, undominated excluded vertices are independent, and each
/// dominated undecided vertex sees exactly one solution component.
pub fn structural(inst: &Instance<'_>) -> std::result::Result<(), String> {
    let n = inst.graph().order();
    for v in 0..n {
        let s = inst.status(v);
        if s == Status::UndecidedDominated || s == Status::OutUndominated {
            if let Some(w) = inst.working_neighbors_where(v, |t| t == s).next() {
                return Err(format!("{v} and {w} are adjacent and both {}", s.tag()));
            }
        }
        if s == Status::UndecidedDominated && inst.adjacent_components(v).len() != 1 {
            return Err(format!(
                "{v} sees {} components",
                inst.adjacent_components(v).len()
            ));
        }
    }
    Ok(())
}

/// A vertex of `V'_n ∪ O_n` with fewer than three working neighbors.
pub fn low_degree(inst: &Instance<'_>) -> Option<usize> {
    (0..inst.graph().order()).find(|&v| {
        let s = inst.status(v);
        (s == Status::UndecidedUndominated || s == Status::OutUndominated)
            && inst.working_neighbors(v).len() < 3
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Outcome = std::result::Result<String, String>;
type Named = (&'static str, fn() -> Outcome);

/// A scaled-down run of the acceptance checks, a few seconds in release
/// builds.
pub fn fast_suite() -> Vec<Check> {
    let checks: [Named; 7] = [
        ("oracle equivalence", oracle_equivalence),
        ("lower-bound counts", lower_bound_counts),
        ("degeneracy and size of generated graphs", generated_sizes),
        ("SAT reduction", sat_reduction),
        ("split graphs and hitting sets", split_graphs),
        ("branching vectors and weights", analysis),
        ("engine invariants and measure decrease", invariants),
    ];
    checks
        .into_iter()
        .map(|(name, run)| {
            let (passed, detail) = match run() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            Check {
                name,
                passed,
                detail,
            }
        })
        .collect()
}

fn text<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn random_corpus(count: u64) -> Vec<Graph> {
    (0..count)
        .filter_map(|i| {
            let n = 8 + (i % 5) as usize;
            let d = 1 + (i / 5 % 4) as usize;
            gen_random_degenerate(n, d, i)
                .and_then(|g| g.permuted(&random_permutation(n, !i)))
                .ok()
        })
        .collect()
}

fn oracle_equivalence() -> Outcome {
    let mut graphs = Vec::new();
    for n in 1..=6 {
        graphs.extend(connected_graphs(n).map_err(text)?);
    }
    graphs.extend(random_corpus(100));
    for g in &graphs {
        let mut got = Vec::new();
        enumerate_with(g, &EnumOptions::default(), None, |s| {
            got.push(s.clone());
            ControlFlow::Continue(())
        })
        .map_err(text)?;
        got.sort();
        if got != enumerate_bruteforce(g, DEFAULT_CAP).map_err(text)? {
            return Err(format!("mismatch on {:?}", g.edges().collect::<Vec<_>>()));
        }
    }
    Ok(format!("{} graphs", graphs.len()))
}

fn lower_bound_counts() -> Outcome {
    for t in 2..=4u64 {
        let g = gen_base_gt(t as usize, true).map_err(text)?;
        let x: VertexSet = (0..t as usize).collect();
        let meeting = enumerate_all(&g)
            .map_err(text)?
            .iter()
            .filter(|s| s.intersects(&x))
            .count() as u64;
        if meeting != gt_count(t) {
            return Err(format!(
                "G_{t}: {meeting} solutions meet X, expected {}",
                gt_count(t)
            ));
        }
    }
    for t in 2..=4u64 {
        let (g, _) = gen_gtk(t as usize, 2).map_err(text)?;
        let count = enumerate_all(&g).map_err(text)?.len() as u64;
        if count != gt_count(t).pow(2) {
            return Err(format!(
                "G_{t}^2: {count} solutions, expected {}",
                gt_count(t).pow(2)
            ));
        }
    }
    Ok("t = 2, 3, 4".into())
}

fn generated_sizes() -> Outcome {
    for seed in 0..50 {
        let nvars = 1 + seed as usize % 6;
        let m = seed as usize % 8;
        let f = Formula::random(nvars, m, seed).map_err(text)?;
        let (g, _) = gen_sat_gadget(&f).map_err(text)?;
        if g.order() != 5 * nvars + 3 * m + 1 || g.degeneracy().degeneracy > 2 {
            return Err(format!("gadget for {f:?}"));
        }
    }
    for t in 2..=5 {
        for k in 1..=3 {
            let (g, _) = gen_gtk(t, k).map_err(text)?;
            if g.degeneracy().degeneracy > t || !g.is_bipartite() {
                return Err(format!("G_{t}^{k}"));
            }
        }
    }
    Ok("50 gadgets, 12 composed graphs".into())
}

fn sat_reduction() -> Outcome {
    for seed in 0..20 {
        let f =
            Formula::random(1 + seed as usize % 4, 1 + seed as usize % 6, seed).map_err(text)?;
        let (g, u) = gen_sat_gadget(&f).map_err(text)?;
        let extends = extension_exists(&g, &u, 10_000_000)
            .map_err(text)?
            .is_some();
        if extends != f.is_satisfiable() {
            return Err(format!("{f:?}: extension {extends}"));
        }
    }
    Ok("20 formulas".into())
}

fn split_graphs() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let ground = rng.random_range(1..=6);
        let m = rng.random_range(1..=5);
        let sets: Vec<VertexSet> = (0..m)
            .map(|_| {
                let mask = rng.random_range(1u32..1 << ground);
                (0..ground).filter(|&x| mask >> x & 1 == 1).collect()
            })
            .collect();
        let none = VertexSet::new();
        let (g, _) = gen_hs_split(ground, &sets, &none).map_err(text)?;
        let mut want = minimal_hitting_sets(ground, &sets, &none)
            .map_err(text)?
            .sets;
        // a lone set covering everything is a universal vertex
        if m == 1 && sets[0].len() == ground {
            want.push(VertexSet::singleton(ground));
        }
        if enumerate_all(&g).map_err(text)? != want {
            return Err(format!("ground {ground}, sets {sets:?}"));
        }
    }
    Ok("30 set systems".into())
}

fn analysis() -> Outcome {
    let two = summarize(Mode::TwoDegenerate, &WeightSet::TWO_DEGENERATE);
    let general = summarize(Mode::General, &WeightSet::GENERAL);
    if !two.all_pass || two.max >= 1.9767 || !general.all_pass || general.max >= 1.9896 {
        return Err(format!("maxima {} and {}", two.max, general.max));
    }
    let opt = optimize_weights(Mode::TwoDegenerate);
    if opt.value > 1.9767 + 1e-3 {
        return Err(format!("optimizer reached {}", opt.value));
    }
    Ok(format!("maxima {:.6} and {:.6}", two.max, general.max))
}

fn invariants() -> Outcome {
    let weights = [WeightSet::TWO_DEGENERATE, WeightSet::GENERAL];
    let mut steps = 0;
    for g in random_corpus(100) {
        let mut hook = InvariantHook::new(&weights, g.degeneracy().degeneracy <= 2);
        enumerate_with(&g, &EnumOptions::default(), Some(&mut hook), |_| {
            ControlFlow::Continue(())
        })
        .map_err(text)?;
        if let Some(v) = hook.violations.first() {
            return Err(v.clone());
        }
        steps += hook.steps;
    }
    Ok(format!("{steps} steps"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, path};

    #[test]
    fn hook_is_silent_on_small_graphs() {
        for g in [cycle(6), path(6), gen_gtk(2, 2).unwrap().0] {
            let mut hook = InvariantHook::new(&[WeightSet::GENERAL], false);
            enumerate_with(&g, &EnumOptions::default(), Some(&mut hook), |_| {
                ControlFlow::Continue(())
            })
            .unwrap();
            assert!(hook.steps > 0);
            assert!(hook.violations.is_empty(), "{:?}", hook.violations);
        }
    }

    #[test]
    fn status_moves() {
        use Status::*;
        assert!(allowed(UndecidedDominated, InSolution));
        assert!(allowed(OutUndominated, OutDominated));
        assert!(!allowed(OutUndominated, InSolution));
        assert!(!allowed(InSolution, OutDominated));
        assert!(!allowed(UndecidedDominated, UndecidedUndominated));
    }

    #[test]
    fn fast_suite_passes() {
        let checks = fast_suite();
        assert_eq!(checks.len(), 7);
        for c in checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
