//! All connected graphs of a small order, one per isomorphism class.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest order [`connected_graphs`] will build.
pub const MAX_ORDER: usize = 8;

/// One representative of every isomorphism class of connected graphs on
/// `n` vertices, ordered by canonical code.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > MAX_ORDER {
        return Err(Error::CapExceeded {
            size: n,
            cap: MAX_ORDER,
        });
    }
    // every connected graph has a vertex whose removal leaves it connected,
    // so growing connected graphs one vertex at a time reaches them all
    let mut level: BTreeSet<u64> = BTreeSet::from([0]);
    for k in 2..=n {
        let mut next = BTreeSet::new();
        for &code in &level {
            let adj = decode(k - 1, code);
            for attach in 1u16..1 << (k - 1) {
                let mut grown = adj.clone();
                grown.push(attach);
                for (v, row) in grown.iter_mut().enumerate().take(k - 1) {
                    if attach >> v & 1 == 1 {
                        *row |= 1 << (k - 1);
                    }
                }
                next.insert(canonical_code(&grown));
            }
        }
        level = next;
    }
    level.into_iter().map(|code| to_graph(n, code)).collect()
}

fn pair_index(i: usize, j: usize) -> usize {
    // position of (i, j), i < j, in the order (0,1), (0,2), (1,2), (0,3), ...
    j * (j - 1) / 2 + i
}

fn decode(n: usize, code: u64) -> Vec<u16> {
    let mut adj = vec![0u16; n];
    for j in 1..n {
        for i in 0..j {
            if code >> pair_index(i, j) & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

fn to_graph(n: usize, code: u64) -> Result<Graph> {
    let adj = decode(n, code);
    let mut edges = Vec::new();
    for (i, row) in adj.iter().enumerate() {
        edges.extend((i + 1..n).filter(|&j| row >> j & 1 == 1).map(|j| (i, j)));
    }
    Graph::new(n, edges)
}

/// Smallest code over relabelings that list vertices by ascending degree.
fn canonical_code(adj: &[u16]) -> u64 {
    let n = adj.len();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| adj[v].count_ones());
    let class: Vec<u32> = by_degree.iter().map(|&v| adj[v].count_ones()).collect();
    let mut best = u64::MAX;
    let mut order = Vec::with_capacity(n);
    let mut used = 0u16;
    search(adj, &by_degree, &class, &mut order, &mut used, &mut best);
    best
}

fn search(
    adj: &[u16],
    by_degree: &[usize],
    class: &[u32],
    order: &mut Vec<usize>,
    used: &mut u16,
    best: &mut u64,
) {
    let p = order.len();
    if p == adj.len() {
        let mut code = 0u64;
        for j in 1..p {
            for i in 0..j {
                if adj[order[i]] >> order[j] & 1 == 1 {
                    code |= 1 << pair_index(i, j);
                }
            }
        }
        *best = (*best).min(code);
        return;
    }
    for (idx, &v) in by_degree.iter().enumerate() {
        if class[idx] == class[p] && *used >> v & 1 == 0 {
            *used |= 1 << v;
            order.push(v);
            search(adj, by_degree, class, order, used, best);
            order.pop();
            *used &= !(1 << v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (1..=7)
            .map(|n| connected_graphs(n).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112, 853]);
    }

    #[test]
    fn representatives_are_connected() {
        for g in connected_graphs(5).unwrap() {
            assert!(g.is_connected_graph());
            assert_eq!(g.order(), 5);
        }
    }

    #[test]
    fn relabeling_does_not_change_the_code() {
        let g = connected_graphs(6).unwrap().swap_remove(40);
        let adj: Vec<u16> = (0..6)
            .map(|v| g.neighbors(v).iter().fold(0, |m, &w| m | 1 << w))
            .collect();
        let p = g.permuted(&[3, 5, 0, 1, 4, 2]).unwrap();
        let padj: Vec<u16> = (0..6)
            .map(|v| p.neighbors(v).iter().fold(0, |m, &w| m | 1 << w))
            .collect();
        assert_eq!(canonical_code(&adj), canonical_code(&padj));
    }

    #[test]
    fn limits() {
        assert!(connected_graphs(0).is_err());
        assert!(connected_graphs(9).is_err());
    }
}
