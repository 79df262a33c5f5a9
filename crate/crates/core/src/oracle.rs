//! Exhaustive reference implementations used to cross-check the enumerator.

use std::ops::ControlFlow;

use crate::engine::{enumerate_with, EnumOptions};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Default largest order accepted by [`enumerate_bruteforce`].
pub const DEFAULT_CAP: usize = 24;

/// Largest ground set accepted by [`minimal_hitting_sets`].
pub const HITTING_CAP: usize = 20;

/// Closed and open neighborhoods as bit masks.
struct Masks {
    open: Vec<u64>,
    closed: Vec<u64>,
    full: u64,
}

impl Masks {
    fn new(g: &Graph) -> Self {
        let n = g.order();
        let open: Vec<u64> = (0..n)
            .map(|v| g.neighbors(v).iter().fold(0, |m, &w| m | 1 << w))
            .collect();
        let closed = open.iter().enumerate().map(|(v, m)| m | 1 << v).collect();
        let full = if n == 64 { u64::MAX } else { (1 << n) - 1 };
        Self { open, closed, full }
    }

    fn is_cds(&self, s: u64) -> bool {
        if s == 0 {
            return false;
        }
        let dominated = bits(s).fold(0, |m, v| m | self.closed[v]);
        if dominated != self.full {
            return false;
        }
        let mut reached = s & s.wrapping_neg();
        let mut frontier = reached;
        while frontier != 0 {
            let next = bits(frontier).fold(0, |m, v| m | self.open[v]) & s & !reached;
            reached |= next;
            frontier = next;
        }
        reached == s
    }

    fn is_minimal_cds(&self, s: u64) -> bool {
        self.is_cds(s) && bits(s).all(|v| !self.is_cds(s & !(1 << v)))
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

fn to_set(m: u64) -> VertexSet {
    bits(m).collect()
}

fn to_mask(s: &VertexSet) -> u64 {
    s.iter().fold(0, |m, v| m | 1 << v)
}

/// Every minimal CDS of `g` by checking all `2^n` subsets, in canonical order.
pub fn enumerate_bruteforce(g: &Graph, cap: usize) -> Result<Vec<VertexSet>> {
    let n = g.order();
    if n > cap.min(63) {
        return Err(Error::CapExceeded { size: n, cap });
    }
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected_graph() {
        return Err(Error::Disconnected);
    }
    let masks = Masks::new(g);
    let mut out: Vec<VertexSet> = (1..=masks.full)
        .filter(|&s| masks.is_minimal_cds(s))
        .map(to_set)
        .collect();
    out.sort();
    Ok(out)
}

/// A minimal CDS containing `u`, if one exists. Small instances enumerate
/// the supersets of `u` directly; larger ones run the enumerator restricted
/// to solutions containing `u`. Either way at most `budget` candidates or
/// search nodes are examined before giving up with
/// [`Error::BudgetExceeded`].
pub fn extension_exists(g: &Graph, u: &VertexSet, budget: u64) -> Result<Option<VertexSet>> {
    u.check_range(g.order())?;
    if g.order() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected_graph() {
        return Err(Error::Disconnected);
    }
    let free = g.order() - u.len();
    if g.order() <= 63 && free < 63 && (1u64 << free) <= budget {
        return Ok(extension_by_supersets(g, u));
    }
    extension_by_search(g, u, budget)
}

fn extension_by_search(g: &Graph, u: &VertexSet, budget: u64) -> Result<Option<VertexSet>> {
    let options = EnumOptions {
        required: u.clone(),
        node_budget: Some(budget),
    };
    let mut witness = None;
    enumerate_with(g, &options, None, |s| {
        witness = Some(s.clone());
        ControlFlow::Break(())
    })?;
    Ok(witness)
}

fn extension_by_supersets(g: &Graph, u: &VertexSet) -> Option<VertexSet> {
    let masks = Masks::new(g);
    let base = to_mask(u);
    let rest: Vec<usize> = bits(masks.full & !base).collect();
    (0..1u64 << rest.len())
        .map(|pick| bits(pick).fold(base, |m, i| m | 1 << rest[i]))
        .find(|&s| masks.is_minimal_cds(s))
        .map(to_set)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingSets {
    /// Inclusion-minimal hitting sets containing the requested elements.
    pub sets: Vec<VertexSet>,
    pub exists: bool,
}

/// All inclusion-minimal hitting sets of `sets` over `0..ground` that
/// contain `u`.
pub fn minimal_hitting_sets(
    ground: usize,
    sets: &[VertexSet],
    u: &VertexSet,
) -> Result<HittingSets> {
    if ground > HITTING_CAP {
        return Err(Error::CapExceeded {
            size: ground,
            cap: HITTING_CAP,
        });
    }
    u.check_range(ground)?;
    for (j, s) in sets.iter().enumerate() {
        if s.is_empty() {
            return Err(Error::EmptyHyperedge(j));
        }
        s.check_range(ground)?;
    }
    let edges: Vec<u64> = sets.iter().map(to_mask).collect();
    let hits = |h: u64| edges.iter().all(|&e| e & h != 0);
    let want = to_mask(u);
    let found: Vec<VertexSet> = (0..1u64 << ground)
        .filter(|&h| h & want == want && hits(h) && bits(h).all(|v| !hits(h & !(1 << v))))
        .map(to_set)
        .collect();
    let mut found = found;
    found.sort();
    Ok(HittingSets {
        exists: !found.is_empty(),
        sets: found,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, path};
    use proptest::prelude::*;

    fn vs(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn small_graphs() {
        assert_eq!(
            enumerate_bruteforce(&path(3), DEFAULT_CAP).unwrap(),
            vec![vs(&[1])]
        );
        let c5 = enumerate_bruteforce(&cycle(5), DEFAULT_CAP).unwrap();
        assert_eq!(
            c5,
            vec![
                vs(&[0, 1, 2]),
                vs(&[0, 1, 4]),
                vs(&[0, 3, 4]),
                vs(&[1, 2, 3]),
                vs(&[2, 3, 4])
            ]
        );
    }

    #[test]
    fn refuses_large_or_disconnected() {
        assert_eq!(
            enumerate_bruteforce(&path(25), DEFAULT_CAP).unwrap_err(),
            Error::CapExceeded { size: 25, cap: 24 }
        );
        let g = Graph::new(3, [(0, 1)]).unwrap();
        assert_eq!(
            enumerate_bruteforce(&g, DEFAULT_CAP).unwrap_err(),
            Error::Disconnected
        );
    }

    #[test]
    fn extensions() {
        let p3 = path(3);
        assert_eq!(
            extension_exists(&p3, &vs(&[1]), 1 << 20).unwrap(),
            Some(vs(&[1]))
        );
        assert_eq!(extension_exists(&p3, &vs(&[0]), 1 << 20).unwrap(), None);
        assert_eq!(
            extension_exists(&cycle(4), &vs(&[0, 2]), 1 << 20).unwrap(),
            None
        );
        // the enumerator route gives the same answers
        assert_eq!(
            extension_by_search(&p3, &vs(&[1]), u64::MAX).unwrap(),
            Some(vs(&[1]))
        );
        assert_eq!(extension_by_search(&p3, &vs(&[0]), u64::MAX).unwrap(), None);
        assert_eq!(
            extension_by_search(&cycle(4), &vs(&[0, 2]), u64::MAX).unwrap(),
            None
        );
        assert!(extension_exists(&cycle(5), &VertexSet::new(), 16)
            .unwrap()
            .is_some());
    }

    #[test]
    fn extension_budget_is_reported() {
        let g = cycle(30);
        let err = extension_exists(&g, &vs(&[0, 15]), 3).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { budget: 3 });
    }

    #[test]
    fn hitting_sets() {
        let forced = minimal_hitting_sets(2, &[vs(&[0]), vs(&[1])], &VertexSet::new()).unwrap();
        assert_eq!(forced.sets, vec![vs(&[0, 1])]);
        let either = minimal_hitting_sets(2, &[vs(&[0, 1])], &VertexSet::new()).unwrap();
        assert_eq!(either.sets, vec![vs(&[0]), vs(&[1])]);
        // three elements, four sets, one of them the singleton {2}
        let family = [vs(&[0, 1, 2]), vs(&[0, 1]), vs(&[1, 2]), vs(&[2])];
        let all = minimal_hitting_sets(3, &family, &VertexSet::new()).unwrap();
        assert!(all.exists);
        assert!(all.sets.iter().all(|h| h.contains(2)));
        assert_eq!(all.sets, vec![vs(&[0, 2]), vs(&[1, 2])]);
        let none = minimal_hitting_sets(3, &family, &vs(&[0, 1])).unwrap();
        assert!(!none.exists);
        assert_eq!(
            minimal_hitting_sets(2, &[vs(&[0]), VertexSet::new()], &VertexSet::new()).unwrap_err(),
            Error::EmptyHyperedge(1)
        );
    }

    fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (2..=max_n).prop_flat_map(|n| {
            let parents = (1..n).map(|i| 0..i).collect::<Vec<_>>();
            let extra = prop::collection::vec((0..n, 0..n), 0..2 * n);
            (Just(n), parents, extra).prop_map(|(n, parents, extra)| {
                let tree = parents.into_iter().enumerate().map(|(i, p)| (i + 1, p));
                let extra = extra.into_iter().filter(|(a, b)| a != b);
                Graph::new(n, tree.chain(extra)).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn solutions_are_incomparable(g in connected_graph(9)) {
            let sols = enumerate_bruteforce(&g, DEFAULT_CAP).unwrap();
            for a in &sols {
                for b in &sols {
                    prop_assert!(a == b || !a.is_subset(b));
                }
            }
        }

        #[test]
        fn empty_set_always_extends(g in connected_graph(9)) {
            prop_assert!(extension_exists(&g, &VertexSet::new(), 1 << 12).unwrap().is_some());
        }

        #[test]
        fn both_extension_routes_agree(g in connected_graph(9), pick in prop::collection::vec(0usize..9, 0..3)) {
            let u: VertexSet = pick.into_iter().filter(|&v| v < g.order()).collect();
            let direct = extension_by_supersets(&g, &u);
            let searched = extension_by_search(&g, &u, u64::MAX).unwrap();
            prop_assert_eq!(direct.is_some(), searched.is_some());
            if let Some(w) = &searched {
                prop_assert!(u.is_subset(w) && g.is_minimal_cds(w).unwrap());
            }
            let full = enumerate_bruteforce(&g, DEFAULT_CAP).unwrap();
            prop_assert_eq!(direct.is_some(), full.iter().any(|s| u.is_subset(s)));
        }
    }
}
