//! Simple undirected graphs over dense vertex ids, plus the domination,
//! connectivity and minimality predicates the rest of the crate is judged by.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn singleton(v: usize) -> Self {
        Self(vec![v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    /// Copy of the set with `v` removed.
    pub fn without(&self, v: usize) -> Self {
        Self(self.0.iter().copied().filter(|&w| w != v).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.iter().any(|v| other.contains(v))
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Rejects ids outside `0..order`.
    pub fn check_range(&self, order: usize) -> Result<()> {
        match self.max() {
            Some(v) if v >= order => Err(Error::VertexOutOfRange { vertex: v, order }),
            _ => Ok(()),
        }
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut members: Vec<usize> = iter.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Self(members)
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(members: Vec<usize>) -> Self {
        members.into_iter().collect()
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(members: [usize; N]) -> Self {
        members.into_iter().collect()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// A vertex ordering together with the largest number of later neighbors
/// any vertex has in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationOrdering {
    pub order: Vec<usize>,
    pub degeneracy: usize,
}

impl EliminationOrdering {
    /// Checks that `order` is a permutation of the graph's vertices and that
    /// every vertex has at most `degeneracy` neighbors placed after it.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let n = g.order();
        if self.order.len() != n {
            return false;
        }
        let mut position = vec![usize::MAX; n];
        for (i, &v) in self.order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return false;
            }
            position[v] = i;
        }
        self.order.iter().enumerate().all(|(i, &v)| {
            g.neighbors(v).iter().filter(|&&w| position[w] > i).count() <= self.degeneracy
        })
    }
}

/// Immutable simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
    connected: bool,
}

impl Graph {
    /// Builds a graph from an edge list. Repeated edges collapse to one;
    /// self-loops and out-of-range ids are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        order: n,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        let connected = n > 0 && component_size(&adjacency, 0, |_| true) == n;
        Ok(Self {
            adjacency,
            edge_count,
            connected,
        })
    }

    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted open neighborhood of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn is_connected_graph(&self) -> bool {
        self.connected
    }

    /// `N[v] = V`.
    pub fn is_universal(&self, v: usize) -> bool {
        self.degree(v) + 1 == self.order()
    }

    /// Same graph with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.order() {
            return Err(Error::InvalidParameter(format!(
                "permutation has length {} but graph has order {}",
                perm.len(),
                self.order()
            )));
        }
        Graph::new(self.order(), self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Supergraph on the same vertices with `extra` edges added.
    pub fn with_edges(&self, extra: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Graph::new(self.order(), self.edges().chain(extra))
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.order() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                order: self.order(),
            })
        }
    }

    /// `N(v) ∩ s`, sorted.
    pub fn neighbors_within(&self, v: usize, s: &VertexSet) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(VertexSet(
            self.neighbors(v)
                .iter()
                .copied()
                .filter(|&w| s.contains(w))
                .collect(),
        ))
    }

    /// Minimum-degree greedy elimination; ties go to the lowest id. The
    /// largest degree seen at removal time is the exact degeneracy.
    pub fn degeneracy(&self) -> EliminationOrdering {
        let n = self.order();
        let mut degree: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (degree[v], v)).collect();
        let mut removed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut degeneracy = 0;
        while let Some((d, v)) = queue.pop_first() {
            degeneracy = degeneracy.max(d);
            removed[v] = true;
            order.push(v);
            for &w in self.neighbors(v) {
                if !removed[w] {
                    queue.remove(&(degree[w], w));
                    degree[w] -= 1;
                    queue.insert((degree[w], w));
                }
            }
        }
        EliminationOrdering { order, degeneracy }
    }

    /// Whether `G[s]` is connected.
    pub fn is_connected(&self, s: &VertexSet) -> Result<bool> {
        let first = s.as_slice().first().copied().ok_or(Error::EmptySet)?;
        s.check_range(self.order())?;
        Ok(component_size(&self.adjacency, first, |w| s.contains(w)) == s.len())
    }

    /// `N[s] = V`.
    pub fn dominates(&self, s: &VertexSet) -> Result<bool> {
        s.check_range(self.order())?;
        let mut covered = vec![false; self.order()];
        for v in s.iter() {
            covered[v] = true;
            for &w in self.neighbors(v) {
                covered[w] = true;
            }
        }
        Ok(covered.into_iter().all(|c| c))
    }

    fn require_connected(&self) -> Result<()> {
        if self.connected {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    /// Connected dominating set test. The graph itself must be connected.
    pub fn is_cds(&self, s: &VertexSet) -> Result<bool> {
        self.require_connected()?;
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(self.dominates(s)? && self.is_connected(s)?)
    }

    /// Inclusion-minimal CDS test.
    ///
    /// If some proper subset were a CDS, a spanning tree of it extends to a
    /// spanning tree of `G[s]` whose extra leaves can be dropped one at a
    /// time, so checking single removals suffices.
    pub fn is_minimal_cds(&self, s: &VertexSet) -> Result<bool> {
        if !self.is_cds(s)? {
            return Ok(false);
        }
        for v in s.iter() {
            let rest = s.without(v);
            if !rest.is_empty() && self.is_cds(&rest)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Connected components of the induced subgraph `G[s]`, each sorted,
    /// ordered by smallest member.
    pub fn components_within(&self, s: &VertexSet) -> Vec<VertexSet> {
        let mut seen = vec![false; self.order()];
        let mut out = Vec::new();
        for start in s.iter() {
            if seen[start] {
                continue;
            }
            let mut members = Vec::new();
            let mut queue = VecDeque::from([start]);
            seen[start] = true;
            while let Some(v) = queue.pop_front() {
                members.push(v);
                for &w in self.neighbors(v) {
                    if !seen[w] && s.contains(w) {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            out.push(members.into_iter().collect());
        }
        out
    }

    /// Two-coloring test.
    pub fn is_bipartite(&self) -> bool {
        let n = self.order();
        let mut color = vec![u8::MAX; n];
        for start in 0..n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in self.neighbors(v) {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        queue.push_back(w);
                    } else if color[w] == color[v] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

fn component_size(adjacency: &[Vec<usize>], start: usize, inside: impl Fn(usize) -> bool) -> usize {
    let mut seen = vec![false; adjacency.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 0;
    while let Some(v) = stack.pop() {
        count += 1;
        for &w in &adjacency[v] {
            if !seen[w] && inside(w) {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    count
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
}

/// Cycle `0 - 1 - ... - (n-1) - 0`, `n >= 3`.
pub fn cycle(n: usize) -> Graph {
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid clique")
}

/// Star with center 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("valid star")
}
