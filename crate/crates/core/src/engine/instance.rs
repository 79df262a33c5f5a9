use crate::graph::{Graph, VertexSet};

/// Where a vertex currently stands in the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    /// Undecided, no neighbor in the partial solution yet.
    UndecidedUndominated,
    UndecidedDominated,
    /// Decided out of the solution, still needs a dominator.
    OutUndominated,
    OutDominated,
    InSolution,
}

impl Status {
    pub fn is_undecided(self) -> bool {
        matches!(
            self,
            Status::UndecidedUndominated | Status::UndecidedDominated
        )
    }

    pub fn is_out(self) -> bool {
        matches!(self, Status::OutUndominated | Status::OutDominated)
    }

    /// Member of `V' ∪ O_n`, the vertex set of the working graph.
    pub fn is_active(self) -> bool {
        matches!(
            self,
            Status::UndecidedUndominated | Status::UndecidedDominated | Status::OutUndominated
        )
    }

    pub fn is_dominated(self) -> bool {
        matches!(
            self,
            Status::UndecidedDominated | Status::OutDominated | Status::InSolution
        )
    }

    /// Short tag used in diagnostics and tests.
    pub fn tag(self) -> &'static str {
        match self {
            Status::UndecidedUndominated => "V'n",
            Status::UndecidedDominated => "V'd",
            Status::OutUndominated => "On",
            Status::OutDominated => "Od",
            Status::InSolution => "S",
        }
    }
}

/// Destination of a vertex in one branch. `Out` resolves to dominated or
/// undominated after the branch's solution additions are applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Solution,
    Out,
}

/// One child of a branching step.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Branch {
    pub moves: Vec<(usize, Target)>,
    /// At least one of these vertices must end in the solution.
    pub commitment: Option<VertexSet>,
}

impl Branch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn take(mut self, v: usize) -> Self {
        self.moves.push((v, Target::Solution));
        self
    }

    pub fn skip(mut self, v: usize) -> Self {
        self.moves.push((v, Target::Out));
        self
    }

    pub fn skip_all(mut self, vs: impl IntoIterator<Item = usize>) -> Self {
        self.moves.extend(vs.into_iter().map(|v| (v, Target::Out)));
        self
    }

    pub fn commit(mut self, set: VertexSet) -> Self {
        self.commitment = Some(set);
        self
    }
}

/// One node of the search tree.
#[derive(Clone, Debug)]
pub struct Instance<'g> {
    graph: &'g Graph,
    status: Vec<Status>,
    /// Adjacency of the working graph, a partial graph of `G[V' ∪ O_n]`.
    working: Vec<Vec<usize>>,
    /// Component label for solution vertices, `usize::MAX` otherwise.
    component: Vec<usize>,
    components: usize,
    commitments: Vec<VertexSet>,
}

const NO_COMPONENT: usize = usize::MAX;

impl<'g> Instance<'g> {
    /// The state before any decision: every vertex undecided and undominated.
    pub fn fresh(graph: &'g Graph) -> Self {
        let n = graph.order();
        Self {
            graph,
            status: vec![Status::UndecidedUndominated; n],
            working: (0..n).map(|v| graph.neighbors(v).to_vec()).collect(),
            component: vec![NO_COMPONENT; n],
            components: 0,
            commitments: Vec::new(),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn status(&self, v: usize) -> Status {
        self.status[v]
    }

    pub fn statuses(&self) -> &[Status] {
        &self.status
    }

    /// Neighbors of `v` in the working graph.
    pub fn working_neighbors(&self, v: usize) -> &[usize] {
        &self.working[v]
    }

    pub fn working_edge_count(&self) -> usize {
        self.working.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_working_edge(&self, u: usize, v: usize) -> bool {
        self.working[u].binary_search(&v).is_ok()
    }

    /// Number of connected components of `G[S]`.
    pub fn component_count(&self) -> usize {
        self.components
    }

    /// Component label of a solution vertex.
    pub fn component_of(&self, v: usize) -> Option<usize> {
        (self.component[v] != NO_COMPONENT).then_some(self.component[v])
    }

    pub fn commitments(&self) -> &[VertexSet] {
        &self.commitments
    }

    pub fn solution(&self) -> VertexSet {
        self.with_status(Status::InSolution)
    }

    pub fn with_status(&self, status: Status) -> VertexSet {
        (0..self.status.len())
            .filter(|&v| self.status[v] == status)
            .collect()
    }

    pub fn count(&self, status: Status) -> usize {
        self.status.iter().filter(|&&s| s == status).count()
    }

    /// Distinct solution components adjacent to `v` in the input graph.
    pub fn adjacent_components(&self, v: usize) -> Vec<usize> {
        let mut labels: Vec<usize> = self
            .graph
            .neighbors(v)
            .iter()
            .filter_map(|&w| self.component_of(w))
            .collect();
        labels.sort_unstable();
        labels.dedup();
        labels
    }

    /// Working-graph neighbors of `v` whose status satisfies `pred`.
    pub fn working_neighbors_where<'a>(
        &'a self,
        v: usize,
        pred: impl Fn(Status) -> bool + 'a,
    ) -> impl Iterator<Item = usize> + 'a {
        self.working[v]
            .iter()
            .copied()
            .filter(move |&w| pred(self.status[w]))
    }

    /// `N_{V'}(v)` in the working graph.
    pub fn undecided_neighbors(&self, v: usize) -> Vec<usize> {
        self.working_neighbors_where(v, Status::is_undecided)
            .collect()
    }

    pub fn delete_working_edge(&mut self, u: usize, v: usize) {
        if let Ok(i) = self.working[u].binary_search(&v) {
            self.working[u].remove(i);
        }
        if let Ok(i) = self.working[v].binary_search(&u) {
            self.working[v].remove(i);
        }
    }

    fn detach(&mut self, v: usize) {
        for w in std::mem::take(&mut self.working[v]) {
            if let Ok(i) = self.working[w].binary_search(&v) {
                self.working[w].remove(i);
            }
        }
    }

    /// Moves an undecided vertex into the solution, updating domination of
    /// its neighbors and merging solution components.
    pub fn add_to_solution(&mut self, v: usize) {
        debug_assert!(self.status[v].is_undecided(), "{v} is {:?}", self.status[v]);
        self.status[v] = Status::InSolution;
        self.detach(v);

        let graph = self.graph;
        let mut merged = Vec::new();
        for &w in graph.neighbors(v) {
            match self.status[w] {
                Status::UndecidedUndominated => self.status[w] = Status::UndecidedDominated,
                Status::OutUndominated => {
                    self.status[w] = Status::OutDominated;
                    self.detach(w);
                }
                Status::InSolution => merged.push(self.component[w]),
                _ => {}
            }
        }
        merged.sort_unstable();
        merged.dedup();
        match merged.first() {
            None => {
                self.component[v] = v;
                self.components += 1;
            }
            Some(&keep) => {
                self.component[v] = keep;
                for c in self.component.iter_mut() {
                    if *c != NO_COMPONENT && merged[1..].contains(c) {
                        *c = keep;
                    }
                }
                self.components -= merged.len() - 1;
            }
        }
    }

    /// Moves an undecided vertex out of the solution.
    pub fn exclude(&mut self, v: usize) {
        debug_assert!(self.status[v].is_undecided(), "{v} is {:?}", self.status[v]);
        if self.status[v] == Status::UndecidedDominated {
            self.status[v] = Status::OutDominated;
            self.detach(v);
        } else {
            self.status[v] = Status::OutUndominated;
        }
    }

    /// Applies a branch: solution additions first, then exclusions, so that
    /// excluded vertices land in the right domination class.
    pub fn apply(&mut self, branch: &Branch) {
        for &(v, target) in &branch.moves {
            if target == Target::Solution {
                self.add_to_solution(v);
            }
        }
        for &(v, target) in &branch.moves {
            if target == Target::Out {
                self.exclude(v);
            }
        }
        if let Some(c) = &branch.commitment {
            self.commitments.push(c.clone());
        }
    }

    pub fn child(&self, branch: &Branch) -> Self {
        let mut next = self.clone();
        next.apply(branch);
        next
    }

    /// Checks the structural invariants every reachable instance satisfies.
    pub fn check_invariants(&self) -> Result<(), String> {
        let g = self.graph;
        for v in 0..g.order() {
            let has_solution_neighbor = g
                .neighbors(v)
                .iter()
                .any(|&w| self.status[w] == Status::InSolution);
            let st = self.status[v];
            if st != Status::InSolution && st.is_dominated() != has_solution_neighbor {
                return Err(format!(
                    "vertex {v} has status {} but solution-neighbor={has_solution_neighbor}",
                    st.tag()
                ));
            }
            for &w in &self.working[v] {
                if !g.has_edge(v, w) {
                    return Err(format!("working edge {v}-{w} not in input graph"));
                }
                if !st.is_active() || !self.status[w].is_active() {
                    return Err(format!("working edge {v}-{w} touches a decided vertex"));
                }
                if self.working[w].binary_search(&v).is_err() {
                    return Err(format!("working edge {v}-{w} is not symmetric"));
                }
            }
        }
        let s = self.solution();
        let expected = g.components_within(&s).len();
        if expected != self.components {
            return Err(format!(
                "component count {} but G[S] has {expected}",
                self.components
            ));
        }
        for part in g.components_within(&s) {
            let label = self.component[part.as_slice()[0]];
            if part.iter().any(|v| self.component[v] != label) {
                return Err(format!("component labels disagree inside {part}"));
            }
        }
        Ok(())
    }
}
