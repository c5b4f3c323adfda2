//! Finite subgraphs of the two-way infinite path.
//!
//! A graph is a set of edges `{i-1, i}` (edge `E_i`) with no isolated
//! vertices, stored as maximal vertex intervals `[s, t]`.  Two intervals that
//! share a vertex are merged; intervals separated by a missing edge stay
//! apart, so `[0,1] ∪ [2,3]` has two components.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{LabError, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct PathGraph {
    intervals: Vec<(i64, i64)>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    intervals: Vec<(i64, i64)>,
}

impl TryFrom<RawGraph> for PathGraph {
    type Error = LabError;
    fn try_from(raw: RawGraph) -> Result<Self> {
        PathGraph::from_canonical(raw.intervals)
    }
}

impl From<PathGraph> for RawGraph {
    fn from(g: PathGraph) -> Self {
        RawGraph {
            intervals: g.intervals,
        }
    }
}

/// Measures `(‖G‖, Δ(G), λ(G))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Measures {
    pub norm: i64,
    pub delta: i64,
    pub lambda: i64,
}

/// Vector measures of a graph sequence, optionally conditioned on a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct VecMeasures {
    pub vec_delta: i64,
    pub vec_lambda: i64,
    pub vec_lambda_delta: i64,
}

impl PathGraph {
    pub fn empty() -> Self {
        PathGraph::default()
    }

    /// `Path_{s,t}`.
    pub fn path(s: i64, t: i64) -> Result<Self> {
        if s >= t {
            return Err(LabError::InvalidInterval(s, t));
        }
        Ok(PathGraph {
            intervals: vec![(s, t)],
        })
    }

    /// `Path_k` on vertices `0..=k`; empty for `k = 0`.
    pub fn path_k(k: i64) -> Self {
        if k <= 0 {
            PathGraph::empty()
        } else {
            PathGraph {
                intervals: vec![(0, k)],
            }
        }
    }

    /// The single edge `E_i = {i-1, i}`.
    pub fn edge(i: i64) -> Self {
        PathGraph {
            intervals: vec![(i - 1, i)],
        }
    }

    /// Builds a graph from arbitrary intervals, merging as needed.
    pub fn from_intervals<I: IntoIterator<Item = (i64, i64)>>(it: I) -> Result<Self> {
        let mut v: Vec<(i64, i64)> = Vec::new();
        for (s, t) in it {
            if s >= t {
                return Err(LabError::InvalidInterval(s, t));
            }
            v.push((s, t));
        }
        Ok(Self::normalize(v))
    }

    /// Accepts only an already-canonical interval list.
    pub fn from_canonical(v: Vec<(i64, i64)>) -> Result<Self> {
        for (i, &(s, t)) in v.iter().enumerate() {
            if s >= t {
                return Err(LabError::InvalidInterval(s, t));
            }
            if i > 0 && v[i - 1].1 >= s {
                return Err(LabError::NonCanonical(format!(
                    "interval {:?} touches or precedes {:?}",
                    (s, t),
                    v[i - 1]
                )));
            }
        }
        Ok(PathGraph { intervals: v })
    }

    /// Builds a graph from edge indices (`i` means `E_i`).
    pub fn from_edges<I: IntoIterator<Item = i64>>(edges: I) -> Self {
        Self::normalize(edges.into_iter().map(|i| (i - 1, i)).collect())
    }

    fn normalize(mut v: Vec<(i64, i64)>) -> Self {
        v.sort_unstable();
        let mut out: Vec<(i64, i64)> = Vec::with_capacity(v.len());
        for (s, t) in v {
            match out.last_mut() {
                Some(last) if s <= last.1 => last.1 = last.1.max(t),
                _ => out.push((s, t)),
            }
        }
        PathGraph { intervals: out }
    }

    pub fn intervals(&self) -> &[(i64, i64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// `‖G‖`: number of edges.
    pub fn norm(&self) -> i64 {
        self.intervals.iter().map(|&(s, t)| t - s).sum()
    }

    /// `Δ(G)`: number of components.
    pub fn delta(&self) -> i64 {
        self.intervals.len() as i64
    }

    /// `λ(G)`: length of the longest component.
    pub fn lambda(&self) -> i64 {
        self.intervals
            .iter()
            .map(|&(s, t)| t - s)
            .max()
            .unwrap_or(0)
    }

    pub fn measures(&self) -> Measures {
        Measures {
            norm: self.norm(),
            delta: self.delta(),
            lambda: self.lambda(),
        }
    }

    pub fn vertex_count(&self) -> i64 {
        self.intervals.iter().map(|&(s, t)| t - s + 1).sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = i64> + '_ {
        self.intervals.iter().flat_map(|&(s, t)| s..=t)
    }

    /// Edge indices, ascending.
    pub fn edges(&self) -> impl Iterator<Item = i64> + '_ {
        self.intervals.iter().flat_map(|&(s, t)| (s + 1)..=t)
    }

    pub fn has_edge(&self, i: i64) -> bool {
        self.intervals.iter().any(|&(s, t)| s < i && i <= t)
    }

    pub fn has_vertex(&self, v: i64) -> bool {
        self.intervals.iter().any(|&(s, t)| s <= v && v <= t)
    }

    /// The components, each as its own graph.
    pub fn components(&self) -> impl Iterator<Item = PathGraph> + '_ {
        self.intervals.iter().map(|&iv| PathGraph {
            intervals: vec![iv],
        })
    }

    pub fn union(&self, other: &PathGraph) -> PathGraph {
        if other.is_empty() {
            return self.clone();
        }
        if self.is_empty() {
            return other.clone();
        }
        let mut v = self.intervals.clone();
        v.extend_from_slice(&other.intervals);
        Self::normalize(v)
    }

    pub fn union_all<'a, I: IntoIterator<Item = &'a PathGraph>>(it: I) -> PathGraph {
        let v: Vec<(i64, i64)> = it
            .into_iter()
            .flat_map(|g| g.intervals.iter().copied())
            .collect();
        Self::normalize(v)
    }

    /// True if some vertex lies in both graphs.
    pub fn shares_vertex(&self, other: &PathGraph) -> bool {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i].1 < b[j].0 {
                i += 1;
            } else if b[j].1 < a[i].0 {
                j += 1;
            } else {
                return true;
            }
        }
        false
    }

    /// `G ⊖ F`: the components of `G` sharing no vertex with `F`.
    pub fn ominus(&self, f: &PathGraph) -> PathGraph {
        if f.is_empty() {
            return self.clone();
        }
        let b = &f.intervals;
        let mut j = 0;
        let mut out = Vec::new();
        for &(s, t) in &self.intervals {
            while j < b.len() && b[j].1 < s {
                j += 1;
            }
            let touches = j < b.len() && b[j].0 <= t;
            if !touches {
                out.push((s, t));
            }
        }
        PathGraph { intervals: out }
    }

    /// Edge-set difference `E(P) \ E(Q)`.
    pub fn edge_difference(&self, q: &PathGraph) -> PathGraph {
        let mut out = Vec::new();
        for &(s, t) in &self.intervals {
            let mut cur = s;
            for &(a, b) in &q.intervals {
                if b <= cur || a >= t {
                    continue;
                }
                if a > cur {
                    out.push((cur, a));
                }
                cur = cur.max(b);
                if cur >= t {
                    break;
                }
            }
            if cur < t {
                out.push((cur, t));
            }
        }
        PathGraph { intervals: out }
    }

    /// Edge-set intersection.
    pub fn intersection(&self, q: &PathGraph) -> PathGraph {
        let mut out = Vec::new();
        for &(s, t) in &self.intervals {
            for &(a, b) in &q.intervals {
                let (lo, hi) = (s.max(a), t.min(b));
                if lo < hi {
                    out.push((lo, hi));
                }
            }
        }
        Self::normalize(out)
    }

    /// Edge-set containment `self ⊆ other`.
    pub fn is_subgraph_of(&self, other: &PathGraph) -> bool {
        self.intervals
            .iter()
            .all(|&(s, t)| other.intervals.iter().any(|&(a, b)| a <= s && t <= b))
    }

    /// `Nbd_t(G)`: every interval widened by `t` on each side.
    pub fn nbd(&self, t: i64) -> PathGraph {
        assert!(t >= 0, "neighbourhood radius must be nonnegative");
        Self::normalize(
            self.intervals
                .iter()
                .map(|&(s, e)| (s - t, e + t))
                .collect(),
        )
    }

    /// Shifts every vertex by `d`.
    pub fn shifted(&self, d: i64) -> PathGraph {
        PathGraph {
            intervals: self
                .intervals
                .iter()
                .map(|&(s, t)| (s + d, t + d))
                .collect(),
        }
    }

    /// Reflection `x ↦ k - x`.
    pub fn mirrored(&self, k: i64) -> PathGraph {
        Self::normalize(
            self.intervals
                .iter()
                .map(|&(s, t)| (k - t, k - s))
                .collect(),
        )
    }
}

impl fmt::Debug for PathGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for PathGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|(s, t)| format!("[{s},{t}]"))
            .collect();
        write!(f, "{}", parts.join("∪"))
    }
}

/// Per-position increments `G_j ⊖ (F ∪ G_1 ∪ … ∪ G_{j-1})`.
pub fn residuals(seq: &[PathGraph], f: &PathGraph) -> Vec<PathGraph> {
    let mut acc = f.clone();
    let mut out = Vec::with_capacity(seq.len());
    for g in seq {
        out.push(g.ominus(&acc));
        acc = acc.union(g);
    }
    out
}

pub fn vec_measures(seq: &[PathGraph], f: &PathGraph) -> VecMeasures {
    let mut m = VecMeasures::default();
    for r in residuals(seq, f) {
        let (d, l) = (r.delta(), r.lambda());
        m.vec_delta += d;
        m.vec_lambda += l;
        m.vec_lambda_delta += l * d;
    }
    m
}

pub fn vec_delta(seq: &[PathGraph], f: &PathGraph) -> i64 {
    residuals(seq, f).iter().map(PathGraph::delta).sum()
}

/// Reorders `seq` by a 1-based permutation: position `j` receives `seq[perm[j]-1]`.
pub fn permuted(seq: &[PathGraph], perm: &[usize]) -> Vec<PathGraph> {
    perm.iter().map(|&p| seq[p - 1].clone()).collect()
}

/// The `k` of a sequence whose union is exactly `Path_k`.
pub fn covered_k(seq: &[PathGraph]) -> Result<i64> {
    let u = PathGraph::union_all(seq);
    match u.intervals() {
        [(0, k)] => Ok(*k),
        _ => {
            let k = u.intervals().last().map(|iv| iv.1).unwrap_or(0);
            Err(LabError::InvalidCovering { k })
        }
    }
}

/// Surviving components of the sequence with their midpoints, sorted.
pub fn gap_midpoints(seq: &[PathGraph]) -> Vec<Ratio<i64>> {
    let mut mids: Vec<Ratio<i64>> = residuals(seq, &PathGraph::empty())
        .iter()
        .flat_map(|r| r.intervals().to_vec())
        .map(|(s, t)| Ratio::new(s + t, 2))
        .collect();
    mids.sort();
    mids
}

/// `gap`: the largest distance from a point of `[0, k]` to the nearest
/// midpoint of a surviving component.
pub fn gap(seq: &[PathGraph]) -> Result<Ratio<i64>> {
    let k = covered_k(seq)?;
    let mids = gap_midpoints(seq);
    let first = mids[0];
    let last = *mids.last().unwrap();
    let mut best = first.max(Ratio::from_integer(k) - last);
    for w in mids.windows(2) {
        best = best.max((w[1] - w[0]) / 2);
    }
    Ok(best)
}
