use std::collections::HashMap;
use std::rc::Rc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{JoinTree, DEFAULT_MEMO_LIMIT};
use crate::error::{check_limit, LabError, Result};
use crate::pathgraph::PathGraph;

pub const DEFAULT_EDGE_LIMIT: usize = 5;
pub const DEFAULT_TREE_LIMIT: u128 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthKind {
    Left,
    Sem,
}

/// Collapses every node one of whose children already carries the node's
/// whole graph; the result is strict with the same root graph.
pub fn strictify(t: &JoinTree) -> JoinTree {
    match t.children() {
        None => t.clone(),
        Some((l, r)) => {
            if l.graph() == t.graph() {
                strictify(l)
            } else if r.graph() == t.graph() {
                strictify(r)
            } else {
                JoinTree::join(&strictify(l), &strictify(r))
            }
        }
    }
}

pub fn is_strict(t: &JoinTree) -> bool {
    match t.children() {
        None => true,
        Some((l, r)) => {
            l.graph() != t.graph() && r.graph() != t.graph() && is_strict(l) && is_strict(r)
        }
    }
}

struct Enumerator {
    edges: Vec<i64>,
    trees: HashMap<(u32, Option<usize>), Rc<Vec<JoinTree>>>,
    counts: HashMap<(u32, Option<usize>), u128>,
}

impl Enumerator {
    fn new(g: &PathGraph) -> Self {
        Enumerator {
            edges: g.edges().collect(),
            trees: HashMap::new(),
            counts: HashMap::new(),
        }
    }

    fn graph(&self, mask: u32) -> PathGraph {
        PathGraph::from_edges(
            self.edges
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e),
        )
    }

    /// Calls `f(m1, m2)` for every pair of proper submasks covering `mask`.
    fn splits(mask: u32, mut f: impl FnMut(u32, u32)) {
        let mut m1 = (mask - 1) & mask;
        while m1 != 0 {
            let rest = mask ^ m1;
            let mut s = m1;
            loop {
                if s != m1 {
                    f(m1, rest | s);
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & m1;
            }
            m1 = (m1 - 1) & mask;
        }
    }

    /// Strict trees on `mask` with left depth at most `d` (`None`: unbounded).
    fn count(&mut self, mask: u32, d: Option<usize>) -> u128 {
        if mask.count_ones() <= 1 {
            return 1;
        }
        if d == Some(0) {
            return 0;
        }
        if let Some(&c) = self.counts.get(&(mask, d)) {
            return c;
        }
        let mut pairs = Vec::new();
        Self::splits(mask, |a, b| pairs.push((a, b)));
        let dl = d.map(|x| x - 1);
        let c = pairs
            .into_iter()
            .map(|(a, b)| self.count(a, dl) * self.count(b, d))
            .sum();
        self.counts.insert((mask, d), c);
        c
    }

    fn trees(&mut self, mask: u32, d: Option<usize>) -> Rc<Vec<JoinTree>> {
        if let Some(v) = self.trees.get(&(mask, d)) {
            return v.clone();
        }
        let out = if mask.count_ones() <= 1 {
            vec![JoinTree::leaf(self.graph(mask)).expect("at most one edge")]
        } else if d == Some(0) {
            Vec::new()
        } else {
            let mut pairs = Vec::new();
            Self::splits(mask, |a, b| pairs.push((a, b)));
            let dl = d.map(|x| x - 1);
            let mut out = Vec::new();
            for (a, b) in pairs {
                let ls = self.trees(a, dl);
                let rs = self.trees(b, d);
                for l in ls.iter() {
                    for r in rs.iter() {
                        out.push(JoinTree::join(l, r));
                    }
                }
            }
            out
        };
        let out = Rc::new(out);
        self.trees.insert((mask, d), out.clone());
        out
    }
}

/// Number of strict `G`-join trees with left depth at most `d`
/// (`None`: all strict trees).
pub fn count_strict(g: &PathGraph, d: Option<usize>) -> Result<u128> {
    check_limit("edges", g.norm() as u64, 30)?;
    let mut en = Enumerator::new(g);
    let full = (1u32 << en.edges.len()) - 1;
    Ok(en.count(full, d))
}

/// All strict `G`-join trees whose chosen depth measure is at most `d`.
pub fn enumerate_strict(
    g: &PathGraph,
    kind: DepthKind,
    d: usize,
    edge_limit: usize,
) -> Result<Vec<JoinTree>> {
    check_limit("edges", g.norm() as u64, edge_limit as u64)?;
    let mut en = Enumerator::new(g);
    let full = (1u32 << en.edges.len()) - 1;
    let bound = match kind {
        DepthKind::Left => Some(d),
        DepthKind::Sem => None,
    };
    let n = en.count(full, bound);
    if n > DEFAULT_TREE_LIMIT {
        return Err(LabError::ResourceLimit {
            what: "strict trees",
            got: n.min(u64::MAX as u128) as u64,
            limit: DEFAULT_TREE_LIMIT as u64,
        });
    }
    let all = en.trees(full, bound);
    match kind {
        DepthKind::Left => Ok(all.to_vec()),
        DepthKind::Sem => {
            let mut out = Vec::new();
            for t in all.iter() {
                if t.sem_depth(DEFAULT_MEMO_LIMIT)? <= d {
                    out.push(t.clone());
                }
            }
            Ok(out)
        }
    }
}

/// A random strict `G`-join tree: each split assigns every edge to the
/// left child, the right child or both, uniformly, rejecting non-proper splits.
pub fn random_strict<R: Rng>(g: &PathGraph, rng: &mut R) -> JoinTree {
    if g.norm() <= 1 {
        return JoinTree::leaf(g.clone()).expect("at most one edge");
    }
    let edges: Vec<i64> = g.edges().collect();
    loop {
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for &e in &edges {
            match rng.gen_range(0..3) {
                0 => a.push(e),
                1 => b.push(e),
                _ => {
                    a.push(e);
                    b.push(e);
                }
            }
        }
        if a.len() < edges.len() && b.len() < edges.len() {
            let l = random_strict(&PathGraph::from_edges(a), rng);
            let r = random_strict(&PathGraph::from_edges(b), rng);
            return JoinTree::join(&l, &r);
        }
    }
}

/// A random (not necessarily strict) tree with `leaves` leaves, each labeled
/// by an edge of `Path_k` or, with probability `p_empty`, left empty.
pub fn random_tree<R: Rng>(leaves: usize, k: i64, p_empty: f64, rng: &mut R) -> JoinTree {
    if leaves <= 1 {
        return if rng.gen_bool(p_empty) {
            JoinTree::empty_leaf()
        } else {
            JoinTree::edge(rng.gen_range(1..=k))
        };
    }
    let split = rng.gen_range(1..leaves);
    JoinTree::join(
        &random_tree(split, k, p_empty, rng),
        &random_tree(leaves - split, k, p_empty, rng),
    )
}
