//! Lower-bound graph families, hardness gadgets and random degenerate graphs.
//!
//! Vertex layouts:
//!
//! * `G_t`: `X = 0..t`, `Y = t..2t`, apex `z = 2t`.
//! * `G_t^k`: copy `j` of `G_t` (with `X` independent) occupies
//!   `j(2t+1)..(j+1)(2t+1)`; the hub is `k(2t+1)`.
//! * SAT gadget: `s = 0`; variable `i` (0-based) uses `1+5i..1+5i+5` for
//!   `w, v, v̄, y, ȳ`; clause `j` uses `1+5n+3j..` for `a, b, c`.
//! * Split graph: elements `0..ground` form a clique, set `j` is vertex
//!   `ground + j`.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// `G_t`: `x_i ~ y_j` for `i ≠ j`, the apex sees all of `Y`, and `X` is a
/// clique when `clique_x` is set.
pub fn gen_base_gt(t: usize, clique_x: bool) -> Result<Graph> {
    if t < 2 {
        return Err(Error::InvalidParameter(format!(
            "t must be at least 2, got {t}"
        )));
    }
    Graph::new(2 * t + 1, gt_edges(t, clique_x, 0))
}

fn gt_edges(t: usize, clique_x: bool, offset: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..t {
        for j in 0..t {
            if i != j {
                edges.push((offset + i, offset + t + j));
            }
        }
        edges.push((offset + 2 * t, offset + t + i));
        if clique_x {
            edges.extend((i + 1..t).map(|j| (offset + i, offset + j)));
        }
    }
    edges
}

/// `k` copies of `G_t` without the clique on `X`, joined through a hub
/// adjacent to every `X` vertex. Returns the graph and the hub.
pub fn gen_gtk(t: usize, k: usize) -> Result<(Graph, usize)> {
    if t < 2 {
        return Err(Error::InvalidParameter(format!(
            "t must be at least 2, got {t}"
        )));
    }
    if k < 1 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let block = 2 * t + 1;
    let hub = k * block;
    let mut edges = Vec::new();
    for j in 0..k {
        edges.extend(gt_edges(t, false, j * block));
        edges.extend((0..t).map(|i| (hub, j * block + i)));
    }
    Ok((Graph::new(hub + 1, edges)?, hub))
}

/// Number of minimal CDS of `G_t` (with `X` a clique) meeting `X`, and the
/// base of the count for `G_t^k`.
pub fn gt_count(t: u64) -> u64 {
    (t * t * t + t * t) / 2 - t
}

/// A CNF formula with exactly three literal slots per clause. Literals are
/// nonzero; `±i` stands for variable `i` (1-based) or its negation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Formula {
    pub nvars: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl Formula {
    pub fn new(nvars: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        for (j, c) in clauses.iter().enumerate() {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > nvars {
                    return Err(Error::InvalidParameter(format!(
                        "clause {j} has literal {l} outside 1..={nvars}"
                    )));
                }
            }
        }
        Ok(Self { nvars, clauses })
    }

    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    /// Satisfiability by trying every assignment.
    pub fn is_satisfiable(&self) -> bool {
        (0..1u64 << self.nvars).any(|bits| {
            let a: Vec<bool> = (0..self.nvars).map(|i| bits >> i & 1 == 1).collect();
            self.is_satisfied_by(&a)
        })
    }

    /// A random formula with `m` clauses, literals drawn uniformly.
    pub fn random(nvars: usize, m: usize, seed: u64) -> Result<Self> {
        use rand::Rng;
        if nvars == 0 {
            return Err(Error::InvalidParameter("a formula needs a variable".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let clauses = (0..m)
            .map(|_| {
                [(); 3].map(|_| {
                    let v = rng.random_range(1..=nvars as i32);
                    if rng.random_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
            })
            .collect();
        Self::new(nvars, clauses)
    }
}

/// Ids of the parts of the SAT gadget.
pub mod sat_layout {
    pub const S: usize = 0;

    pub fn w(i: usize) -> usize {
        1 + 5 * i
    }
    pub fn v(i: usize) -> usize {
        2 + 5 * i
    }
    pub fn v_bar(i: usize) -> usize {
        3 + 5 * i
    }
    pub fn y(i: usize) -> usize {
        4 + 5 * i
    }
    pub fn y_bar(i: usize) -> usize {
        5 + 5 * i
    }
    pub fn a(nvars: usize, j: usize) -> usize {
        1 + 5 * nvars + 3 * j
    }
    pub fn b(nvars: usize, j: usize) -> usize {
        2 + 5 * nvars + 3 * j
    }
    pub fn c(nvars: usize, j: usize) -> usize {
        3 + 5 * nvars + 3 * j
    }
}

/// The gadget graph whose minimal CDS extending `U = {w_i}` correspond to
/// satisfying assignments. Returns the graph and `U`.
pub fn gen_sat_gadget(f: &Formula) -> Result<(Graph, VertexSet)> {
    use sat_layout::*;
    let n = f.nvars;
    let literal = |l: i32| {
        let i = l.unsigned_abs() as usize - 1;
        if l > 0 {
            v(i)
        } else {
            v_bar(i)
        }
    };
    let mut edges = Vec::new();
    for i in 0..n {
        edges.extend([
            (v(i), S),
            (v_bar(i), S),
            (v(i), v_bar(i)),
            (v(i), y(i)),
            (v_bar(i), y_bar(i)),
            (w(i), y(i)),
            (w(i), y_bar(i)),
        ]);
    }
    for (j, c3) in f.clauses.iter().enumerate() {
        edges.push((b(n, j), a(n, j)));
        edges.push((a(n, j), c(n, j)));
        edges.push((b(n, j), literal(c3[0])));
        if c3[1] != c3[0] {
            edges.push((b(n, j), literal(c3[1])));
        }
        edges.push((a(n, j), literal(c3[2])));
    }
    let order = 1 + 5 * n + 3 * f.clauses.len();
    let u = (0..n).map(w).collect();
    Ok((Graph::new(order, edges)?, u))
}

/// The split graph of a set system: a clique on the elements and one vertex
/// per set adjacent to its members. `u` is passed through.
pub fn gen_hs_split(
    ground: usize,
    sets: &[VertexSet],
    u: &VertexSet,
) -> Result<(Graph, VertexSet)> {
    u.check_range(ground)?;
    let mut edges = Vec::new();
    for i in 0..ground {
        edges.extend((i + 1..ground).map(|j| (i, j)));
    }
    for (j, s) in sets.iter().enumerate() {
        if s.is_empty() {
            return Err(Error::EmptyHyperedge(j));
        }
        s.check_range(ground)?;
        edges.extend(s.iter().map(|x| (x, ground + j)));
    }
    Ok((Graph::new(ground + sets.len(), edges)?, u.clone()))
}

/// A connected graph of degeneracy at most `d`: vertex `i` picks
/// `min(d, i)` distinct earlier neighbors.
pub fn gen_random_degenerate(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 1 and d >= 1, got n={n} d={d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 1..n {
        for p in sample(&mut rng, i, d.min(i)) {
            edges.push((p, i));
        }
    }
    Graph::new(n, edges)
}

/// A uniformly random relabeling of `0..n`.
pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut rng);
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{enumerate_bruteforce, minimal_hitting_sets, DEFAULT_CAP};
    use proptest::prelude::*;

    fn vs(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn base_graph_shapes() {
        let g4 = gen_base_gt(4, true).unwrap();
        assert_eq!((g4.order(), g4.edge_count()), (9, 22));
        let g3 = gen_base_gt(3, false).unwrap();
        assert!(g3.is_bipartite());
        assert!(gen_base_gt(1, true).is_err());
    }

    #[test]
    fn base_graph_count_small() {
        let g = gen_base_gt(2, true).unwrap();
        let x = vs(&[0, 1]);
        let hits = enumerate_bruteforce(&g, DEFAULT_CAP)
            .unwrap()
            .into_iter()
            .filter(|s| s.intersects(&x))
            .count();
        assert_eq!(hits as u64, gt_count(2));
        assert_eq!(gt_count(2), 4);
    }

    #[test]
    fn composed_graph_shapes() {
        let (g, hub) = gen_gtk(3, 3).unwrap();
        assert_eq!((g.order(), hub), (22, 21));
        assert_eq!(g.degree(hub), 9);
        assert!(g.is_bipartite());
        assert!(g.degeneracy().degeneracy <= 3);
        let (g, _) = gen_gtk(4, 2).unwrap();
        assert_eq!(g.order(), 19);
        assert!(gen_gtk(3, 0).is_err());
    }

    #[test]
    fn gadget_sizes() {
        let f = Formula::new(3, vec![[1, 2, 3]]).unwrap();
        let (g, u) = gen_sat_gadget(&f).unwrap();
        assert_eq!((g.order(), g.edge_count()), (19, 26));
        assert_eq!(u, vs(&[1, 6, 11]));
        assert!(g.degeneracy().degeneracy <= 2);
        assert!(g.is_connected_graph());
        assert!(Formula::new(2, vec![[1, 3, 2]]).is_err());
        assert!(Formula::new(2, vec![[1, 0, 2]]).is_err());
    }

    #[test]
    fn satisfiability() {
        assert!(Formula::new(3, vec![[1, 2, 3]]).unwrap().is_satisfiable());
        let all_patterns = vec![[1, 2, 1], [1, -2, 1], [-1, 2, -1], [-1, -2, -1]];
        assert!(!Formula::new(2, all_patterns).unwrap().is_satisfiable());
    }

    #[test]
    fn split_graph_of_the_small_system() {
        let family = [vs(&[0, 1, 2]), vs(&[0, 1]), vs(&[1, 2]), vs(&[2])];
        let (g, u) = gen_hs_split(3, &family, &VertexSet::new()).unwrap();
        assert_eq!((g.order(), g.edge_count()), (7, 11));
        assert!(u.is_empty());
        let hs = minimal_hitting_sets(3, &family, &VertexSet::new()).unwrap();
        assert_eq!(enumerate_bruteforce(&g, DEFAULT_CAP).unwrap(), hs.sets);

        let (g, _) = gen_hs_split(2, &[vs(&[0]), vs(&[1])], &VertexSet::new()).unwrap();
        assert_eq!(
            enumerate_bruteforce(&g, DEFAULT_CAP).unwrap(),
            vec![vs(&[0, 1])]
        );
        assert_eq!(
            gen_hs_split(2, &[VertexSet::new()], &VertexSet::new()).unwrap_err(),
            Error::EmptyHyperedge(0)
        );
    }

    #[test]
    fn single_set_covering_everything_adds_its_own_vertex() {
        // the set vertex sees every element, so it dominates on its own
        let (g, _) = gen_hs_split(3, &[vs(&[0, 1, 2])], &VertexSet::new()).unwrap();
        let sols = enumerate_bruteforce(&g, DEFAULT_CAP).unwrap();
        assert_eq!(sols, vec![vs(&[0]), vs(&[1]), vs(&[2]), vs(&[3])]);
    }

    #[test]
    fn random_trees() {
        let g = gen_random_degenerate(40, 1, 5).unwrap();
        assert_eq!(g.edge_count(), 39);
        assert!(g.is_connected_graph());
        assert!(gen_random_degenerate(0, 1, 0).is_err());
        assert!(gen_random_degenerate(3, 0, 0).is_err());
    }

    proptest! {
        #[test]
        fn random_graphs_are_degenerate_and_reproducible(n in 1usize..60, d in 1usize..5, seed: u64) {
            let g = gen_random_degenerate(n, d, seed).unwrap();
            prop_assert!(g.is_connected_graph());
            prop_assert!(g.degeneracy().degeneracy <= d);
            prop_assert_eq!(g, gen_random_degenerate(n, d, seed).unwrap());
        }

        #[test]
        fn gadget_counts_match(nvars in 1usize..6, m in 0usize..8, seed: u64) {
            let mut f = Formula::random(nvars, m, seed).unwrap();
            // distinct first two slots give the full edge count
            for c in &mut f.clauses {
                if c[1] == c[0] {
                    c[1] = -c[0];
                }
            }
            let (g, u) = gen_sat_gadget(&f).unwrap();
            prop_assert_eq!(g.order(), 5 * nvars + 3 * m + 1);
            prop_assert_eq!(g.edge_count(), 7 * nvars + 5 * m);
            prop_assert_eq!(u.len(), nvars);
            prop_assert!(g.degeneracy().degeneracy <= 2);
        }
    }
}
