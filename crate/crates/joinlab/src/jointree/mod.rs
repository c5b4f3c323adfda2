//! Join trees over subgraphs of the path, their depth measures, branch
//! coverings and the Ψ-size oracle.

pub(crate) mod checks;
mod strict;

pub use checks::{
    build_tight, check_psi_recurrences, check_sem_recurrences, check_sq_recurrences,
    maximally_overlapping, verify_tradeoff, RecurrenceReport, TightKind, TradeoffKind,
    TradeoffReport,
};
pub use strict::{
    count_strict, enumerate_strict, is_strict, random_strict, random_tree, strictify, DepthKind,
    DEFAULT_EDGE_LIMIT, DEFAULT_TREE_LIMIT,
};

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{check_limit, LabError, Result};
use crate::pathgraph::PathGraph;

pub const DEFAULT_DP_LIMIT: usize = 22;
pub const DEFAULT_MEMO_LIMIT: usize = 1 << 16;

#[derive(Clone)]
pub struct JoinTree(Arc<Inner>);

#[derive(PartialEq, Eq, Hash)]
enum Inner {
    Leaf(PathGraph),
    Node {
        left: JoinTree,
        right: JoinTree,
        graph: PathGraph,
    },
}

impl PartialEq for JoinTree {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for JoinTree {}

impl std::hash::Hash for JoinTree {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Depths {
    /// Standard depth: longest root-to-leaf branch.
    pub sq_standard: usize,
    /// Maximum number of left descents on a branch.
    pub left_depth: usize,
    pub sem_depth: usize,
}

impl JoinTree {
    pub fn leaf(label: PathGraph) -> Result<Self> {
        if label.norm() > 1 {
            return Err(LabError::InvalidInput(format!(
                "leaf label {label} has more than one edge"
            )));
        }
        Ok(JoinTree(Arc::new(Inner::Leaf(label))))
    }

    pub fn edge(i: i64) -> Self {
        JoinTree(Arc::new(Inner::Leaf(PathGraph::edge(i))))
    }

    pub fn empty_leaf() -> Self {
        JoinTree(Arc::new(Inner::Leaf(PathGraph::empty())))
    }

    /// `T_1 ⊔ T_2`.
    pub fn join(left: &JoinTree, right: &JoinTree) -> Self {
        let graph = left.graph().union(right.graph());
        JoinTree(Arc::new(Inner::Node {
            left: left.clone(),
            right: right.clone(),
            graph,
        }))
    }

    /// `[[T_1, …, T_m]] = T_1 ⊔ [[T_2, …, T_m]]`.
    pub fn sq(parts: &[JoinTree]) -> Result<Self> {
        let (last, init) = parts
            .split_last()
            .ok_or_else(|| LabError::Arity("sq needs m ≥ 1".into()))?;
        Ok(init
            .iter()
            .rev()
            .fold(last.clone(), |acc, t| JoinTree::join(t, &acc)))
    }

    /// `⟨⟨T_1, …, T_m⟩⟩ = ⟨⟨T_1..T_{m-1}⟩⟩ ⊔ ⟨⟨T_1..T_{m-2}, T_m⟩⟩`.
    pub fn sem(parts: &[JoinTree]) -> Result<Self> {
        if parts.is_empty() {
            return Err(LabError::Arity("sem needs m ≥ 1".into()));
        }
        let idx: Vec<usize> = (0..parts.len()).collect();
        let mut memo = HashMap::new();
        Ok(sem_rec(parts, &idx, &mut memo))
    }

    pub fn graph(&self) -> &PathGraph {
        match &*self.0 {
            Inner::Leaf(g) => g,
            Inner::Node { graph, .. } => graph,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(&*self.0, Inner::Leaf(_))
    }

    pub fn children(&self) -> Option<(&JoinTree, &JoinTree)> {
        match &*self.0 {
            Inner::Leaf(_) => None,
            Inner::Node { left, right, .. } => Some((left, right)),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self.children() {
            None => 1,
            Some((l, r)) => l.leaf_count() + r.leaf_count(),
        }
    }

    /// Leaf labels from left to right.
    pub fn leaves(&self) -> Vec<PathGraph> {
        let mut out = Vec::new();
        self.walk_leaves(&mut |g| out.push(g.clone()));
        out
    }

    fn walk_leaves(&self, f: &mut impl FnMut(&PathGraph)) {
        match &*self.0 {
            Inner::Leaf(g) => f(g),
            Inner::Node { left, right, .. } => {
                left.walk_leaves(f);
                right.walk_leaves(f);
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self.children() {
            None => 0,
            Some((l, r)) => 1 + l.depth().max(r.depth()),
        }
    }

    pub fn left_depth(&self) -> usize {
        match self.children() {
            None => 0,
            Some((l, r)) => (1 + l.left_depth()).max(r.left_depth()),
        }
    }

    pub fn sem_depth(&self, memo_limit: usize) -> Result<usize> {
        let mut sd = SemDepth::new(memo_limit);
        let id = sd.intern(self)?;
        sd.depth(id)
    }

    pub fn depths(&self, memo_limit: usize) -> Result<Depths> {
        Ok(Depths {
            sq_standard: self.depth(),
            left_depth: self.left_depth(),
            sem_depth: self.sem_depth(memo_limit)?,
        })
    }

    /// Every list `[T_1, …, T_m]` with `m ≥ 2` and `⟨⟨T_1, …, T_m⟩⟩ = T`.
    pub fn sem_decompositions(&self, memo_limit: usize) -> Result<Vec<Vec<JoinTree>>> {
        let mut sd = SemDepth::new(memo_limit);
        let id = sd.intern(self)?;
        let reps = sd.reps(id)?;
        Ok(reps
            .iter()
            .filter(|r| r.len() >= 2)
            .map(|r| r.iter().map(|&p| sd.trees[p].clone()).collect())
            .collect())
    }

    /// The parts of the right spine: `T = [[T_1, …, T_m]]` with `T_m` a leaf.
    pub fn right_spine(&self) -> Vec<JoinTree> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        while let Some((l, r)) = cur.children() {
            out.push(l.clone());
            let next = r.clone();
            cur = next;
        }
        out.push(cur);
        out
    }

    /// Swaps the children of the node reached by `path` (false = left).
    pub fn rotated(&self, path: &[bool]) -> JoinTree {
        match (self.children(), path.split_first()) {
            (None, _) => self.clone(),
            (Some((l, r)), None) => JoinTree::join(r, l),
            (Some((l, r)), Some((&go_right, rest))) => {
                if go_right {
                    JoinTree::join(l, &r.rotated(rest))
                } else {
                    JoinTree::join(&l.rotated(rest), r)
                }
            }
        }
    }

    /// `T ⊖ F`: leaves whose edge is not in `graph(T) ⊖ F` become empty.
    pub fn ominus(&self, f: &PathGraph) -> JoinTree {
        let keep = self.graph().ominus(f);
        self.restrict_to(&keep)
    }

    /// Relabels to empty every leaf whose edge lies outside `keep`.
    pub fn restrict_to(&self, keep: &PathGraph) -> JoinTree {
        match &*self.0 {
            Inner::Leaf(g) => {
                if g.is_subgraph_of(keep) {
                    self.clone()
                } else {
                    JoinTree::empty_leaf()
                }
            }
            Inner::Node { left, right, .. } => {
                JoinTree::join(&left.restrict_to(keep), &right.restrict_to(keep))
            }
        }
    }

    /// One covering per leaf (left to right): the sibling labels along the
    /// branch plus the leaf label, as a set.
    pub fn branch_coverings(&self) -> Vec<BTreeSet<PathGraph>> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.coverings_rec(&mut stack, &mut out);
        out
    }

    fn coverings_rec<'a>(
        &'a self,
        stack: &mut Vec<&'a PathGraph>,
        out: &mut Vec<BTreeSet<PathGraph>>,
    ) {
        match &*self.0 {
            Inner::Leaf(g) => {
                let mut set: BTreeSet<PathGraph> = stack.iter().map(|g| (*g).clone()).collect();
                set.insert(g.clone());
                out.push(set);
            }
            Inner::Node { left, right, .. } => {
                stack.push(right.graph());
                left.coverings_rec(stack, out);
                stack.pop();
                stack.push(left.graph());
                right.coverings_rec(stack, out);
                stack.pop();
            }
        }
    }

    /// `Ψ(T)`.
    pub fn psi(&self) -> Result<i64> {
        self.psi_with_limit(DEFAULT_DP_LIMIT)
    }

    pub fn psi_with_limit(&self, dp_limit: usize) -> Result<i64> {
        let mut seen: HashMap<Vec<PathGraph>, ()> = HashMap::new();
        let mut best = 0;
        let mut stack = Vec::new();
        let mut err = None;
        self.psi_rec(&mut stack, &mut |cov| {
            let mut v: Vec<PathGraph> = cov.into_iter().filter(|g| !g.is_empty()).collect();
            v.sort();
            v.dedup();
            if seen.insert(v.clone(), ()).is_none() && err.is_none() {
                match max_vec_delta_over_orderings(&v, dp_limit) {
                    Ok(x) => best = best.max(x),
                    Err(e) => err = Some(e),
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(best),
        }
    }

    fn psi_rec<'a>(&'a self, stack: &mut Vec<&'a PathGraph>, f: &mut impl FnMut(Vec<PathGraph>)) {
        match &*self.0 {
            Inner::Leaf(g) => {
                let mut v: Vec<PathGraph> = stack.iter().map(|g| (*g).clone()).collect();
                v.push(g.clone());
                f(v);
            }
            Inner::Node { left, right, .. } => {
                stack.push(right.graph());
                left.psi_rec(stack, f);
                stack.pop();
                stack.push(left.graph());
                right.psi_rec(stack, f);
                stack.pop();
            }
        }
    }

    /// Checks the labeling invariants (leaves carry at most one edge and
    /// each node carries the union of its children).
    pub fn is_well_formed(&self) -> bool {
        match &*self.0 {
            Inner::Leaf(g) => g.norm() <= 1,
            Inner::Node { left, right, graph } => {
                *graph == left.graph().union(right.graph())
                    && left.is_well_formed()
                    && right.is_well_formed()
            }
        }
    }

    fn ptr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }
}

fn sem_rec(
    parts: &[JoinTree],
    idx: &[usize],
    memo: &mut HashMap<Vec<usize>, JoinTree>,
) -> JoinTree {
    if idx.len() == 1 {
        return parts[idx[0]].clone();
    }
    if let Some(t) = memo.get(idx) {
        return t.clone();
    }
    let m = idx.len();
    let a = sem_rec(parts, &idx[..m - 1], memo);
    let mut bidx = idx[..m - 2].to_vec();
    bidx.push(idx[m - 1]);
    let b = sem_rec(parts, &bidx, memo);
    let t = JoinTree::join(&a, &b);
    memo.insert(idx.to_vec(), t.clone());
    t
}

/// Max of `vec_delta(C_π(1), …, C_π(m))` over all orderings, by dynamic
/// programming over subsets: the increment of `C` after the set `S` is
/// `Δ(C ⊖ ∪S)`, which depends on `S` only.
pub fn max_vec_delta_over_orderings(cov: &[PathGraph], limit: usize) -> Result<i64> {
    let mut v: Vec<&PathGraph> = cov.iter().filter(|g| !g.is_empty()).collect();
    v.sort();
    v.dedup();
    let n = v.len();
    check_limit("covering size", n as u64, limit as u64)?;
    if n == 0 {
        return Ok(0);
    }
    // comps[i]: one touch mask per component of C_i
    let comps: Vec<Vec<u32>> = v
        .iter()
        .enumerate()
        .map(|(i, g)| {
            g.components()
                .map(|c| {
                    let mut mask = 0u32;
                    for (j, h) in v.iter().enumerate() {
                        if j != i && c.shares_vertex(h) {
                            mask |= 1 << j;
                        }
                    }
                    mask
                })
                .collect()
        })
        .collect();
    let total: usize = comps.iter().map(Vec::len).sum();
    Ok(if total < u8::MAX as usize {
        subset_dp::<u8>(&comps)
    } else {
        subset_dp::<u16>(&comps)
    })
}

/// Forward DP over subsets; `dp[S]` holds one more than the best `vec_delta`
/// of an ordering of `S` (0 = not reached). An unplaced `i` whose gain can no
/// longer change and whose placement kills no live component of another
/// unplaced graph can be moved to the front of any completion without
/// changing its value, so such an `i` is placed alone and most states are
/// never reached.
fn subset_dp<T>(comps: &[Vec<u32>]) -> i64
where
    T: Copy + Default + Ord + From<u8> + std::ops::Add<Output = T> + Into<i64>,
{
    let n = comps.len();
    let full = (1u32 << n) - 1;
    // killers[i]: (j, touch mask) for every component of C_j touched by C_i
    let mut killers: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for (j, cs) in comps.iter().enumerate() {
        for &t in cs {
            let mut bits = t;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                killers[i].push((1 << j, t));
            }
        }
    }
    let inc = |i: usize, s: u32| comps[i].iter().filter(|&&t| t & s == 0).count() as u8;
    let forced = |i: usize, s: u32, rest: u32| {
        comps[i].iter().all(|&t| t & s != 0 || t & rest == 0)
            && killers[i].iter().all(|&(j, t)| j & rest == 0 || t & s != 0)
    };
    let one = T::from(1);
    let mut dp = vec![T::default(); 1 << n];
    dp[0] = one;
    for mask in 0..full {
        let base = dp[mask as usize];
        if base == T::default() {
            continue;
        }
        let free = !mask & full;
        let mut push = |i: usize| {
            let next = (mask | 1 << i) as usize;
            dp[next] = dp[next].max(base + T::from(inc(i, mask)));
        };
        let mut bits = free;
        let mut chosen = None;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if forced(i, mask, free & !(1 << i)) {
                chosen = Some(i);
                break;
            }
        }
        match chosen {
            Some(i) => push(i),
            None => {
                let mut bits = free;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    push(i);
                }
            }
        }
    }
    dp[full as usize].into() - 1
}

/// Structural interning used to recognise `⟨⟨·⟩⟩` decompositions.
struct SemDepth {
    limit: usize,
    by_ptr: HashMap<usize, usize>,
    by_key: HashMap<Key, usize>,
    keys: Vec<Key>,
    trees: Vec<JoinTree>,
    reps: HashMap<usize, Arc<Vec<Vec<usize>>>>,
    depth: HashMap<usize, usize>,
    entries: usize,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Key {
    Leaf(PathGraph),
    Node(usize, usize),
}

impl SemDepth {
    fn new(limit: usize) -> Self {
        SemDepth {
            limit,
            by_ptr: HashMap::new(),
            by_key: HashMap::new(),
            keys: Vec::new(),
            trees: Vec::new(),
            reps: HashMap::new(),
            depth: HashMap::new(),
            entries: 0,
        }
    }

    fn bump(&mut self, n: usize) -> Result<()> {
        self.entries += n;
        check_limit(
            "sem-depth memo entries",
            self.entries as u64,
            self.limit as u64,
        )
    }

    fn intern(&mut self, t: &JoinTree) -> Result<usize> {
        if let Some(&id) = self.by_ptr.get(&t.ptr()) {
            return Ok(id);
        }
        let key = match &*t.0 {
            Inner::Leaf(g) => Key::Leaf(g.clone()),
            Inner::Node { left, right, .. } => {
                let l = self.intern(left)?;
                let r = self.intern(right)?;
                Key::Node(l, r)
            }
        };
        let id = match self.by_key.get(&key) {
            Some(&id) => id,
            None => {
                self.bump(1)?;
                let id = self.keys.len();
                self.keys.push(key.clone());
                self.trees.push(t.clone());
                self.by_key.insert(key, id);
                id
            }
        };
        self.by_ptr.insert(t.ptr(), id);
        Ok(id)
    }

    /// All lists `[T_1, …, T_m]` (`m ≥ 1`) with `⟨⟨T_1..T_m⟩⟩ = id`.
    fn reps(&mut self, id: usize) -> Result<Arc<Vec<Vec<usize>>>> {
        if let Some(r) = self.reps.get(&id) {
            return Ok(r.clone());
        }
        let mut out = vec![vec![id]];
        if let Key::Node(l, r) = self.keys[id].clone() {
            let ra = self.reps(l)?;
            let rb = self.reps(r)?;
            for a in ra.iter() {
                let n = a.len();
                for b in rb
                    .iter()
                    .filter(|b| b.len() == n && b[..n - 1] == a[..n - 1])
                {
                    let mut list = a.clone();
                    list.push(b[n - 1]);
                    out.push(list);
                }
            }
        }
        self.bump(out.len())?;
        let out = Arc::new(out);
        self.reps.insert(id, out.clone());
        Ok(out)
    }

    fn depth(&mut self, id: usize) -> Result<usize> {
        if let Some(&d) = self.depth.get(&id) {
            return Ok(d);
        }
        let d = match self.keys[id] {
            Key::Leaf(_) => 0,
            Key::Node(..) => {
                let reps = self.reps(id)?;
                let mut best = usize::MAX;
                for rep in reps.iter().filter(|r| r.len() >= 2) {
                    let mut worst = 0;
                    for &p in rep {
                        worst = worst.max(self.depth(p)?);
                        if worst + 1 >= best {
                            break;
                        }
                    }
                    best = best.min(worst + 1);
                }
                best
            }
        };
        self.depth.insert(id, d);
        Ok(d)
    }
}

impl fmt::Display for JoinTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Inner::Leaf(g) => write!(f, "{g}"),
            Inner::Node { left, right, .. } => write!(f, "({left} ⊔ {right})"),
        }
    }
}

impl fmt::Debug for JoinTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum RawTree {
    Leaf(PathGraph),
    Node(Box<(RawTree, RawTree)>),
}

impl JoinTree {
    fn to_raw(&self) -> RawTree {
        match &*self.0 {
            Inner::Leaf(g) => RawTree::Leaf(g.clone()),
            Inner::Node { left, right, .. } => {
                RawTree::Node(Box::new((left.to_raw(), right.to_raw())))
            }
        }
    }

    fn from_raw(raw: RawTree) -> Result<Self> {
        match raw {
            RawTree::Leaf(g) => JoinTree::leaf(g),
            RawTree::Node(b) => {
                let (l, r) = *b;
                Ok(JoinTree::join(
                    &JoinTree::from_raw(l)?,
                    &JoinTree::from_raw(r)?,
                ))
            }
        }
    }
}

impl Serialize for JoinTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_raw().serialize(s)
    }
}

impl<'de> Deserialize<'de> for JoinTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawTree::deserialize(d)?;
        JoinTree::from_raw(raw).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: i64) -> JoinTree {
        JoinTree::edge(i)
    }

    fn edges(k: i64) -> Vec<PathGraph> {
        (1..=k).map(PathGraph::edge).collect()
    }

    #[test]
    fn sq_and_sem_shapes() {
        let leaves: Vec<JoinTree> = (1..=5).map(e).collect();
        assert_eq!(
            JoinTree::sq(&leaves[..2]).unwrap(),
            JoinTree::sem(&leaves[..2]).unwrap()
        );
        assert_eq!(
            JoinTree::sq(&leaves[..2]).unwrap(),
            JoinTree::join(&e(1), &e(2))
        );
        assert_eq!(JoinTree::sem(&leaves).unwrap().leaf_count(), 16);
        assert_eq!(JoinTree::sq(&leaves).unwrap().leaf_count(), 5);
        assert!(JoinTree::sq(&[]).is_err());
        assert!(JoinTree::sem(&[]).is_err());
        assert!(JoinTree::sem(&leaves).unwrap().is_well_formed());
    }

    #[test]
    fn depth_examples() {
        assert_eq!(
            e(1).depths(DEFAULT_MEMO_LIMIT).unwrap(),
            Depths {
                sq_standard: 0,
                left_depth: 0,
                sem_depth: 0
            }
        );
        let leaves: Vec<JoinTree> = (1..=6).map(e).collect();
        let s = JoinTree::sem(&leaves).unwrap();
        assert_eq!(s.sem_depth(DEFAULT_MEMO_LIMIT).unwrap(), 1);
        let q = JoinTree::sq(&leaves).unwrap();
        assert_eq!(q.left_depth(), 1);
        assert_eq!(q.depth(), 5);
        // (a ⊔ b) ⊔ (c ⊔ d) with distinct leaves is not a single ⟨⟨·⟩⟩
        let t = JoinTree::join(&JoinTree::join(&e(1), &e(2)), &JoinTree::join(&e(3), &e(4)));
        assert_eq!(t.sem_depth(DEFAULT_MEMO_LIMIT).unwrap(), 2);
        // but (a ⊔ b) ⊔ (a ⊔ c) is ⟨⟨a, b, c⟩⟩
        let t = JoinTree::join(&JoinTree::join(&e(1), &e(2)), &JoinTree::join(&e(1), &e(3)));
        assert_eq!(t.sem_depth(DEFAULT_MEMO_LIMIT).unwrap(), 1);
    }

    #[test]
    fn nested_sem_depth() {
        let a = JoinTree::sem(&[e(1), e(2), e(3)]).unwrap();
        let b = JoinTree::sem(&[e(4), e(5), e(6)]).unwrap();
        let c = JoinTree::sem(&[e(7), e(8), e(9)]).unwrap();
        let t = JoinTree::sem(&[a.clone(), b.clone(), c.clone()]).unwrap();
        assert_eq!(t.sem_depth(DEFAULT_MEMO_LIMIT).unwrap(), 2);
        assert!(t.sem_depth(4).is_err());
    }

    #[test]
    fn coverings() {
        assert_eq!(
            e(1).branch_coverings(),
            vec![[PathGraph::edge(1)].into_iter().collect()]
        );
        let t = JoinTree::join(&e(1), &e(2));
        let c = t.branch_coverings();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|s| s.len() == 2));
        // rightmost branch of [[T_1..T_m]]
        let parts = vec![
            JoinTree::join(&e(1), &e(2)),
            e(3),
            JoinTree::join(&e(4), &e(5)),
            e(6),
        ];
        let q = JoinTree::sq(&parts).unwrap();
        let last = q.branch_coverings().pop().unwrap();
        let expect: BTreeSet<PathGraph> = [
            PathGraph::from_edges([1, 2]),
            PathGraph::edge(3),
            PathGraph::from_edges([4, 5]),
            PathGraph::edge(6),
        ]
        .into_iter()
        .collect();
        assert_eq!(last, expect);
    }

    #[test]
    fn ordering_optimum() {
        assert_eq!(max_vec_delta_over_orderings(&edges(25), 25).unwrap(), 13);
        for k in 2..=12 {
            assert_eq!(
                max_vec_delta_over_orderings(&edges(k), 22).unwrap(),
                (k + 1) / 2
            );
        }
        let g = PathGraph::from_edges([1, 3, 7]);
        assert_eq!(max_vec_delta_over_orderings(&[g], 22).unwrap(), 3);
        assert!(max_vec_delta_over_orderings(&edges(23), 22).is_err());
    }

    #[test]
    fn ordering_dp_matches_permutations() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=7);
            let k = rng.gen_range(3..=14);
            let cov: Vec<PathGraph> = (0..n)
                .map(|_| {
                    let c = rng.gen_range(1..4);
                    let len = rng.gen_range(1..=3);
                    PathGraph::from_edges((0..c).flat_map(|_| {
                        let s = rng.gen_range(1..=k);
                        s..s + len
                    }))
                })
                .collect();
            let mut uniq = cov.clone();
            uniq.sort();
            uniq.dedup();
            let mut best = 0;
            permutations(uniq.len(), &mut |p| {
                let seq: Vec<PathGraph> = p.iter().map(|&i| uniq[i].clone()).collect();
                best = best.max(crate::pathgraph::vec_delta(&seq, &PathGraph::empty()));
            });
            assert_eq!(max_vec_delta_over_orderings(&cov, 22).unwrap(), best);
        }
    }

    fn permutations(n: usize, f: &mut impl FnMut(&[usize])) {
        fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, f: &mut impl FnMut(&[usize])) {
            if cur.len() == used.len() {
                f(cur);
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    cur.push(i);
                    rec(cur, used, f);
                    cur.pop();
                    used[i] = false;
                }
            }
        }
        rec(&mut Vec::new(), &mut vec![false; n], f);
    }

    #[test]
    fn psi_basics() {
        assert_eq!(e(4).psi().unwrap(), 1);
        assert_eq!(JoinTree::empty_leaf().psi().unwrap(), 0);
        let leaves: Vec<JoinTree> = (1..=9).map(e).collect();
        assert_eq!(JoinTree::sq(&leaves).unwrap().psi().unwrap(), 5);
    }

    #[test]
    fn psi_invariant_under_rotation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let t = random_strict(&PathGraph::path_k(rng.gen_range(1..=6)), &mut rng);
            let d = t.depth();
            let path: Vec<bool> = (0..rng.gen_range(0..=d)).map(|_| rng.gen()).collect();
            assert_eq!(t.psi().unwrap(), t.rotated(&path).psi().unwrap());
        }
    }

    #[test]
    fn restriction() {
        let t = JoinTree::sq(&[e(1), e(2), e(4), e(5)]).unwrap();
        let r = t.ominus(&PathGraph::edge(3));
        assert!(r.graph().is_empty());
        let r = t.ominus(&PathGraph::edge(7));
        assert_eq!(r, t);
        let r = t.ominus(&PathGraph::edge(6));
        assert_eq!(r.graph(), &PathGraph::from_edges([1, 2]));
        assert!(r.is_well_formed());
    }

    #[test]
    fn serde_round_trip() {
        let t = JoinTree::join(&e(1), &JoinTree::join(&e(2), &JoinTree::empty_leaf()));
        let s = serde_json::to_string(&t).unwrap();
        assert_eq!(
            s,
            r#"{"node":[{"leaf":{"intervals":[[0,1]]}},{"node":[{"leaf":{"intervals":[[1,2]]}},{"leaf":{"intervals":[]}}]}]}"#
        );
        assert_eq!(serde_json::from_str::<JoinTree>(&s).unwrap(), t);
        assert!(serde_json::from_str::<JoinTree>(r#"{"leaf":{"intervals":[[0,2]]}}"#).is_err());
    }
}
