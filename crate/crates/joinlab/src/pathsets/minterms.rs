//! Subgraphs of the `n`-blow-up of `Path_k`, sections `G^{(α)}`, minterm
//! relations `M_G(f)` / `N_G(f)`, the restricted subsets `M_G^{(T)}(f)` and the
//! decomposition cost that bounds pathset complexity from above.

use std::collections::HashMap;

use num_bigint::BigUint;
use serde::Serialize;

use super::{assignments, chi_lower, join, pathset_violation, ChiLower, PathsetParams, Relation};
use crate::error::{check_limit, LabError, Result};
use crate::formulas::{DeMorgan, MatrixTuple, Var};
use crate::jointree::{enumerate_strict, is_strict, DepthKind, JoinTree, DEFAULT_EDGE_LIMIT};
use crate::pathgraph::PathGraph;

/// Ceiling on `n^{|V(G)|}·2^{‖G‖}` evaluations per minterm scan.
pub const DEFAULT_EVAL_BUDGET: u64 = 50_000_000;

/// A subgraph of `Path_k^{↑n}` (`n ≤ 64`): edge `{(i−1)^{(a)}, i^{(b)}}` is
/// the entry `M^{(i)}_{a,b}`. Rows are bitsets indexed by `(i, a)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlowupGraph {
    n: usize,
    k: usize,
    rows: Vec<u64>,
}

impl BlowupGraph {
    pub fn empty(n: usize, k: usize) -> Result<Self> {
        if !(1..=64).contains(&n) {
            return Err(LabError::InvalidParameter(format!(
                "blow-up width n = {n} must be in 1..=64"
            )));
        }
        Ok(BlowupGraph {
            n,
            k,
            rows: vec![0; n * k],
        })
    }

    pub fn from_matrices(m: &MatrixTuple) -> Self {
        let mut g = BlowupGraph::empty(m.n, m.k()).expect("n ≤ 8");
        for i in 1..=m.k() {
            for a in 1..=m.n {
                for b in 1..=m.n {
                    if m.get(i, a, b) {
                        g.insert(i, a, b);
                    }
                }
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Bitset of `b` with `M^{(i)}_{a,b} = 1` (bit `b−1`).
    pub fn row(&self, i: usize, a: usize) -> u64 {
        self.rows[(i - 1) * self.n + (a - 1)]
    }

    pub fn has(&self, i: usize, a: usize, b: usize) -> bool {
        self.row(i, a) >> (b - 1) & 1 == 1
    }

    pub fn insert(&mut self, i: usize, a: usize, b: usize) {
        self.rows[(i - 1) * self.n + (a - 1)] |= 1 << (b - 1);
    }

    pub fn union(&self, other: &BlowupGraph) -> BlowupGraph {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(x, y)| x | y)
            .collect();
        BlowupGraph { rows, ..*self }
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    /// `(i, a, b)` triples in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.k {
            for a in 1..=self.n {
                let r = self.row(i, a);
                out.extend(
                    (1..=self.n)
                        .filter(|b| r >> (b - 1) & 1 == 1)
                        .map(|b| (i, a, b)),
                );
            }
        }
        out
    }

    /// Value of a matrix variable; edge variables read as 0.
    pub fn var(&self, v: Var) -> bool {
        match v {
            Var::Matrix(i, a, b) => i <= self.k && a <= self.n && b <= self.n && self.has(i, a, b),
            Var::Edge(_) => false,
        }
    }
}

/// Blow-up edges `(i, α_{i−1}, α_i)` of a section, one per edge of `G`.
fn section_edges(g: &PathGraph, alpha: &[u32]) -> Vec<(usize, usize, usize)> {
    let verts: Vec<i64> = g.vertices().collect();
    let at = |v: i64| alpha[verts.binary_search(&v).unwrap()] as usize;
    g.edges().map(|i| (i as usize, at(i - 1), at(i))).collect()
}

fn check_graph(g: &PathGraph, k: usize) -> Result<()> {
    if g.intervals().iter().any(|&(s, t)| s < 0 || t > k as i64) {
        return Err(LabError::InvalidInput(format!(
            "{g} is not a subgraph of Path_{k}"
        )));
    }
    Ok(())
}

/// The section `G^{(α)}` of `Path_k^{↑n}`; `alpha` lists the values of the
/// vertices of `G` in increasing order.
pub fn section(g: &PathGraph, alpha: &[u32], n: usize, k: usize) -> Result<BlowupGraph> {
    check_graph(g, k)?;
    if alpha.len() != g.vertex_count() as usize || alpha.iter().any(|&x| x == 0 || x as usize > n) {
        return Err(LabError::InvalidInput(format!(
            "{alpha:?} is not an assignment V({g}) → [{n}]"
        )));
    }
    let mut out = BlowupGraph::empty(n, k)?;
    for (i, a, b) in section_edges(g, alpha) {
        out.insert(i, a, b);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MintermMode {
    /// `G^{(α)}` is a minterm.
    M,
    /// The subfunction on the edges of `G^{(α)}` depends on all of them.
    N,
}

/// `M_G(f)` or `N_G(f)` for a function on subgraphs of `Path_k^{↑n}`.
pub fn minterms(
    f: &dyn Fn(&BlowupGraph) -> bool,
    g: &PathGraph,
    mode: MintermMode,
    n: u32,
    k: u32,
    budget: u64,
) -> Result<Relation> {
    let (nu, ku) = (n as usize, k as usize);
    check_graph(g, ku)?;
    let width = g.vertex_count() as usize;
    let m = g.norm() as usize;
    let evals = (n as u64)
        .saturating_pow(width as u32)
        .saturating_mul(1u64.checked_shl(m as u32).unwrap_or(u64::MAX));
    check_limit("minterm evaluations", evals, budget)?;
    let base = BlowupGraph::empty(nu, ku)?;
    let full = (1usize << m) - 1;
    let mut table = vec![false; 1 << m];
    let mut tuples = Vec::new();
    for alpha in assignments(n, width) {
        let edges = section_edges(g, &alpha);
        for (mask, slot) in table.iter_mut().enumerate() {
            let mut x = base.clone();
            for (j, &(i, a, b)) in edges.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    x.insert(i, a, b);
                }
            }
            *slot = f(&x);
        }
        let keep = match mode {
            MintermMode::M => table[full] && table[..full].iter().all(|v| !v),
            MintermMode::N => {
                (0..m).all(|j| (0..=full).any(|mask| table[mask] != table[mask ^ (1 << j)]))
            }
        };
        if keep {
            tuples.push(alpha);
        }
    }
    Relation::new(g.clone(), n, tuples)
}

/// `(M^{(1)} ⋯ M^{(k)})_{a0,ak}` on a blow-up subgraph.
pub fn bmm_evaluator(a0: usize, ak: usize) -> impl Fn(&BlowupGraph) -> bool {
    move |x: &BlowupGraph| {
        let mut reach = 1u64 << (a0 - 1);
        for i in 1..=x.k() {
            let mut next = 0;
            for a in 1..=x.n() {
                if reach >> (a - 1) & 1 == 1 {
                    next |= x.row(i, a);
                }
            }
            reach = next;
        }
        reach >> (ak - 1) & 1 == 1
    }
}

pub fn formula_evaluator(f: &DeMorgan) -> impl Fn(&BlowupGraph) -> bool + '_ {
    move |x: &BlowupGraph| f.eval_with(&|v| x.var(v))
}

/// Minterm relations of every subformula of a DeMorgan formula, memoized,
/// and the restricted subsets `M_G^{(T)}` built from them.
pub struct MintermCache<'f> {
    n: u32,
    k: u32,
    budget: u64,
    nodes: Vec<&'f DeMorgan>,
    /// `(is_and, left, right)` for gates.
    gates: Vec<Option<(bool, usize, usize)>>,
    plain: HashMap<(usize, PathGraph), Relation>,
    restricted: HashMap<(usize, JoinTree), Relation>,
}

impl<'f> MintermCache<'f> {
    pub fn new(f: &'f DeMorgan, n: u32, k: u32) -> Result<Self> {
        BlowupGraph::empty(n as usize, k as usize)?;
        let mut cache = MintermCache {
            n,
            k,
            budget: DEFAULT_EVAL_BUDGET,
            nodes: Vec::new(),
            gates: Vec::new(),
            plain: HashMap::new(),
            restricted: HashMap::new(),
        };
        cache.add(f);
        Ok(cache)
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn add(&mut self, f: &'f DeMorgan) -> usize {
        let id = self.nodes.len();
        self.nodes.push(f);
        self.gates.push(None);
        if let Some((is_and, l, r)) = f.parts() {
            let (li, ri) = (self.add(l), self.add(r));
            self.gates[id] = Some((is_and, li, ri));
        }
        id
    }

    /// Subformula nodes in pre-order; node 0 is the whole formula.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, id: usize) -> &'f DeMorgan {
        self.nodes[id]
    }

    /// `M_G` of subformula `id`.
    pub fn minterms_of(&mut self, id: usize, g: &PathGraph) -> Result<Relation> {
        if let Some(r) = self.plain.get(&(id, g.clone())) {
            return Ok(r.clone());
        }
        let node = self.nodes[id];
        let r = minterms(
            &formula_evaluator(node),
            g,
            MintermMode::M,
            self.n,
            self.k,
            self.budget,
        )?;
        self.plain.insert((id, g.clone()), r.clone());
        Ok(r)
    }

    /// `M_G^{(T)}` of subformula `id`, where `G` is the root graph of `T`.
    pub fn restricted_of(&mut self, id: usize, t: &JoinTree) -> Result<Relation> {
        if let Some(r) = self.restricted.get(&(id, t.clone())) {
            return Ok(r.clone());
        }
        let g = t.graph().clone();
        let r = if g.norm() <= 1 {
            self.minterms_of(id, &g)?
        } else {
            match self.gates[id] {
                None => Relation::empty(g.clone(), self.n),
                Some((is_and, l, r)) => {
                    let mut base = self
                        .restricted_of(l, t)?
                        .union(&self.restricted_of(r, t)?)?;
                    if is_and {
                        let (t1, t2) = t.children().expect("strict trees on ≥ 2 edges are joins");
                        let j = join(&self.restricted_of(l, t1)?, &self.restricted_of(r, t2)?)?;
                        base = base.union(&j)?;
                    }
                    self.minterms_of(id, &g)?.intersection(&base)?
                }
            }
        };
        self.restricted.insert((id, t.clone()), r.clone());
        Ok(r)
    }

    /// A subformula and graph `G ⊆ Path_k` whose minterm relation is not a
    /// `G`-pathset, if any.
    pub fn pathset_violation(
        &mut self,
        params: &PathsetParams,
    ) -> Result<Option<(String, PathGraph)>> {
        let k = self.k;
        for id in 0..self.nodes.len() {
            for mask in 0u32..1 << k {
                let g = PathGraph::from_edges(
                    (0..k).filter(|i| mask >> i & 1 == 1).map(|i| i as i64 + 1),
                );
                let rel = self.minterms_of(id, &g)?;
                if pathset_violation(&rel, params)?.is_some() {
                    return Ok(Some((self.nodes[id].to_string(), g)));
                }
            }
        }
        Ok(None)
    }
}

fn require_strict(t: &JoinTree) -> Result<()> {
    if !is_strict(t) {
        return Err(LabError::InvalidInput(format!(
            "join tree {t} is not strict"
        )));
    }
    Ok(())
}

/// `M_G^{(T)}(f)` for a strict `G`-join tree `T`.
pub fn restricted_minterms(f: &DeMorgan, t: &JoinTree, n: u32, k: u32) -> Result<Relation> {
    require_strict(t)?;
    MintermCache::new(f, n, k)?.restricted_of(0, t)
}

/// Checks, for every subformula, that its `G`-minterm relation is a pathset
/// for every `G ⊆ Path_k`; returns the first offending subformula.
pub fn subformula_pathset_violation(
    f: &DeMorgan,
    params: &PathsetParams,
) -> Result<Option<(String, PathGraph)>> {
    MintermCache::new(f, params.n, params.k)?.pathset_violation(params)
}

fn binom(n: u64, r: u64) -> u128 {
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub graph: PathGraph,
    pub tree: String,
    pub size: usize,
    pub and_depth: usize,
    /// `|M_G^{(T)}(f)|`.
    pub relation_size: usize,
    /// Cost of the decomposition read off the formula.
    pub cost: u128,
    /// `binom(D + ‖G‖ − 1, ‖G‖ − 1)·size(f)`.
    pub upper_bound: u128,
    /// `(D + 1)^{‖G‖}·size(f)`.
    pub relaxed_upper_bound: u128,
    /// `ñ^{Ψ(T)}·μ(M_G^{(T)}(f))`, present when `G = Path_k`.
    pub lower: Option<ChiLower>,
}

impl DecompositionReport {
    pub fn upper_holds(&self) -> bool {
        self.cost <= self.upper_bound && self.upper_bound <= self.relaxed_upper_bound
    }

    pub fn lower_holds(&self) -> bool {
        self.lower.as_ref().is_none_or(|l| l.is_at_most(self.cost))
    }
}

struct CostWalk<'c, 'f> {
    cache: &'c mut MintermCache<'f>,
    memo: HashMap<(usize, JoinTree), u128>,
}

impl CostWalk<'_, '_> {
    /// An upper bound on `χ_T(M_G^{(T)}(f_id))`: each disjunction adds the
    /// costs of its children, each conjunction additionally pays for the
    /// join of its children's restricted sets on the two subtrees.
    fn cost(&mut self, id: usize, t: &JoinTree) -> Result<u128> {
        if let Some(&c) = self.memo.get(&(id, t.clone())) {
            return Ok(c);
        }
        let c = if self.cache.restricted_of(id, t)?.is_empty() {
            0
        } else if t.graph().norm() <= 1 {
            1
        } else {
            match self.cache.gates[id] {
                None => 0,
                Some((is_and, l, r)) => {
                    let mut c = self.cost(l, t)? + self.cost(r, t)?;
                    if is_and {
                        let (t1, t2) = t.children().expect("strict trees on ≥ 2 edges are joins");
                        c += self.cost(l, t1)?.max(self.cost(r, t2)?);
                    }
                    c
                }
            }
        };
        self.memo.insert((id, t.clone()), c);
        Ok(c)
    }
}

/// The decomposition cost of `M_G^{(T)}(f)` read off the formula, with its
/// upper bound in terms of size and ∧-depth and, for `G = Path_k`, the
/// lower bound `ñ^{Ψ(T)}·μ`. Requires every subformula's minterm relations
/// to be pathsets.
pub fn chi_decomposition_cost(
    f: &DeMorgan,
    t: &JoinTree,
    params: &PathsetParams,
) -> Result<DecompositionReport> {
    require_strict(t)?;
    let g = t.graph().clone();
    if g.is_empty() {
        return Err(LabError::InvalidInput("the tree's graph is empty".into()));
    }
    let mut cache = MintermCache::new(f, params.n, params.k)?;
    if let Some((sub, h)) = cache.pathset_violation(params)? {
        return Err(LabError::Domain(format!(
            "M_{h} of subformula {sub} is not a pathset"
        )));
    }
    let rel = cache.restricted_of(0, t)?;
    let cost = CostWalk {
        cache: &mut cache,
        memo: HashMap::new(),
    }
    .cost(0, t)?;
    let stats = f.stats();
    let (d, l) = (stats.and_depth as u64, g.norm() as u64);
    let size = stats.size as u128;
    let lower = if g == PathGraph::path_k(params.k as i64) {
        Some(chi_lower(t, &rel, params)?)
    } else {
        None
    };
    Ok(DecompositionReport {
        tree: t.to_string(),
        size: stats.size,
        and_depth: stats.and_depth,
        relation_size: rel.len(),
        cost,
        upper_bound: binom(d + l - 1, l - 1) * size,
        relaxed_upper_bound: ((d + 1) as u128).pow(l as u32) * size,
        lower,
        graph: g,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Join0Report {
    pub or_holds: bool,
    /// `M_G(f₁∧f₂) ⊆ ⋃_{G₁∪G₂=G} M_{G₁}(f₁) ⋈ M_{G₂}(f₂)`.
    pub and_inner_holds: bool,
    /// The middle union lies in `M_G(f₁) ∪ M_G(f₂) ∪ ⋃_{G₁,G₂⊊G} ⋯`.
    pub and_outer_holds: bool,
}

impl Join0Report {
    pub fn holds(&self) -> bool {
        self.or_holds && self.and_inner_holds && self.and_outer_holds
    }
}

fn subgraphs(g: &PathGraph) -> Vec<PathGraph> {
    let edges: Vec<i64> = g.edges().collect();
    (0u32..1 << edges.len())
        .map(|mask| {
            PathGraph::from_edges(
                edges
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e),
            )
        })
        .collect()
}

/// The minterm containments for `f₁ ∨ f₂` and `f₁ ∧ f₂` on one graph `G`.
pub fn join0_check(
    f1: &dyn Fn(&BlowupGraph) -> bool,
    f2: &dyn Fn(&BlowupGraph) -> bool,
    g: &PathGraph,
    n: u32,
    k: u32,
) -> Result<Join0Report> {
    let budget = DEFAULT_EVAL_BUDGET;
    let mode = MintermMode::M;
    let m1 = minterms(f1, g, mode, n, k, budget)?;
    let m2 = minterms(f2, g, mode, n, k, budget)?;
    let either = m1.union(&m2)?;
    let or = minterms(&|x: &BlowupGraph| f1(x) || f2(x), g, mode, n, k, budget)?;
    let and = minterms(&|x: &BlowupGraph| f1(x) && f2(x), g, mode, n, k, budget)?;

    let subs = subgraphs(g);
    let mut rel1 = HashMap::new();
    let mut rel2 = HashMap::new();
    for h in &subs {
        rel1.insert(h.clone(), minterms(f1, h, mode, n, k, budget)?);
        rel2.insert(h.clone(), minterms(f2, h, mode, n, k, budget)?);
    }
    let mut inner = Relation::empty(g.clone(), n);
    let mut outer = either.clone();
    for g1 in &subs {
        for g2 in &subs {
            if g1.union(g2) != *g {
                continue;
            }
            let j = join(&rel1[g1], &rel2[g2])?;
            inner = inner.union(&j)?;
            if g1 != g && g2 != g {
                outer = outer.union(&j)?;
            }
        }
    }
    Ok(Join0Report {
        or_holds: or.is_subset(&either)?,
        and_inner_holds: and.is_subset(&inner)?,
        and_outer_holds: inner.is_subset(&outer)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoveringReport {
    pub graph: PathGraph,
    pub trees: usize,
    pub and_left_depth: usize,
    /// `|M_G(f)|`.
    pub minterms: usize,
    /// The union of `M_G^{(T)}(f)` over strict trees equals `M_G(f)`.
    pub union_holds: bool,
    /// Trees of left depth above the formula's ∧-left-depth got empty sets.
    pub depth_holds: bool,
    /// Largest `|M_G^{(T)}(f)|` over trees of left depth ≤ ∧-left-depth.
    pub best: usize,
    /// `best · 2^{‖G‖^{d+1}} ≥ |M_G(f)|`.
    pub pigeonhole_holds: bool,
}

impl CoveringReport {
    pub fn holds(&self) -> bool {
        self.union_holds && self.depth_holds && self.pigeonhole_holds
    }
}

/// Covers `M_G(f)` by the sets `M_G^{(T)}(f)` over all strict `G`-join trees.
pub fn covering_check(f: &DeMorgan, g: &PathGraph, n: u32, k: u32) -> Result<CoveringReport> {
    if g.is_empty() {
        return Err(LabError::InvalidInput(
            "covering needs a nonempty graph".into(),
        ));
    }
    let trees = enumerate_strict(g, DepthKind::Left, g.norm() as usize, DEFAULT_EDGE_LIMIT)?;
    let d = f.stats().and_left_depth;
    let mut cache = MintermCache::new(f, n, k)?;
    let all = cache.minterms_of(0, g)?;
    let mut union = Relation::empty(g.clone(), n);
    let (mut depth_holds, mut best) = (true, 0);
    for t in &trees {
        let r = cache.restricted_of(0, t)?;
        if t.left_depth() > d {
            depth_holds &= r.is_empty();
        } else {
            best = best.max(r.len());
        }
        union = union.union(&r)?;
    }
    let norm = g.norm() as u32;
    let pigeonhole =
        BigUint::from(best) << (norm.pow(d as u32 + 1) as usize) >= BigUint::from(all.len());
    Ok(CoveringReport {
        graph: g.clone(),
        trees: trees.len(),
        and_left_depth: d,
        minterms: all.len(),
        union_holds: union == all,
        depth_holds,
        best,
        pigeonhole_holds: pigeonhole,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{build_matrix_formula, right_deep, Formula, FormulaKind, Literal};
    use crate::pathsets::density;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn path_alphas(n: u32, k: u32) -> Vec<Vec<u32>> {
        assignments(n, k as usize + 1)
            .filter(|a| a[0] == 1 && a[k as usize] == 1)
            .collect()
    }

    fn sub_pmm(kind: FormulaKind, n: usize, k: usize) -> DeMorgan {
        right_deep(&build_matrix_formula(kind, n, k, 1, 1, 1).unwrap())
    }

    #[test]
    fn section_examples() {
        let s = section(&PathGraph::edge(1), &[1, 1], 2, 1).unwrap();
        assert_eq!(s.edges(), vec![(1, 1, 1)]);
        let s = section(&PathGraph::path_k(2), &[1, 2, 1], 2, 2).unwrap();
        assert_eq!(s.edges(), vec![(1, 1, 2), (2, 2, 1)]);
        let g = PathGraph::from_edges([1, 3, 4]);
        for alpha in assignments(3, g.vertex_count() as usize) {
            assert_eq!(section(&g, &alpha, 3, 4).unwrap().edge_count(), 3);
        }
        assert!(section(&g, &[1, 2], 3, 4).is_err());
        assert!(section(&PathGraph::edge(5), &[1, 1], 3, 4).is_err());
    }

    #[test]
    fn bmm_minterms_are_closed_walks_through_one() {
        for (n, k) in [(2, 1), (2, 3), (3, 2), (4, 2), (2, 4)] {
            let m = minterms(
                &bmm_evaluator(1, 1),
                &PathGraph::path_k(k as i64),
                MintermMode::M,
                n,
                k,
                DEFAULT_EVAL_BUDGET,
            )
            .unwrap();
            assert_eq!(m.tuples().cloned().collect::<Vec<_>>(), path_alphas(n, k));
        }
    }

    #[test]
    fn constant_and_parity_examples() {
        let g = PathGraph::path_k(2);
        let one = minterms(&|_: &BlowupGraph| true, &g, MintermMode::M, 2, 2, 1000).unwrap();
        assert!(one.is_empty());
        let parity = |x: &BlowupGraph| x.edge_count() % 2 == 1;
        let all = minterms(&parity, &g, MintermMode::N, 2, 2, 1000).unwrap();
        assert_eq!(all.len(), 8);
        assert!(minterms(&parity, &g, MintermMode::N, 4, 2, 10).is_err());
    }

    #[test]
    fn correct_sub_pmm_formulas_have_the_expected_path_minterms() {
        for (n, k) in [(2, 2), (2, 3), (3, 2), (2, 4), (3, 3)] {
            for kind in [FormulaKind::D, FormulaKind::C] {
                let f = sub_pmm(kind, n, k);
                let m = minterms(
                    &formula_evaluator(&f),
                    &PathGraph::path_k(k as i64),
                    MintermMode::M,
                    n as u32,
                    k as u32,
                    DEFAULT_EVAL_BUDGET,
                )
                .unwrap();
                assert_eq!(
                    m.tuples().cloned().collect::<Vec<_>>(),
                    path_alphas(n as u32, k as u32),
                    "{kind:?} {n} {k}"
                );
                let mu = density(&m, None);
                assert_eq!(mu, num_rational::BigRational::new(1.into(), (n * n).into()));
            }
        }
    }

    fn random_monotone(rng: &mut ChaCha8Rng, n: usize, k: usize, depth: usize) -> DeMorgan {
        if depth == 0 || rng.gen_bool(0.25) {
            let v = Var::Matrix(
                rng.gen_range(1..=k),
                rng.gen_range(1..=n),
                rng.gen_range(1..=n),
            );
            return DeMorgan::Lit(Literal::pos(v));
        }
        let (l, r) = (
            random_monotone(rng, n, k, depth - 1),
            random_monotone(rng, n, k, depth - 1),
        );
        if rng.gen_bool(0.5) {
            DeMorgan::and(l, r)
        } else {
            DeMorgan::or(l, r)
        }
    }

    #[test]
    fn m_is_inside_n_for_monotone_functions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let f = random_monotone(&mut rng, 2, 3, 5);
            for g in subgraphs(&PathGraph::path_k(3)) {
                let ev = formula_evaluator(&f);
                let m = minterms(&ev, &g, MintermMode::M, 2, 3, 1 << 20).unwrap();
                let nn = minterms(&ev, &g, MintermMode::N, 2, 3, 1 << 20).unwrap();
                assert!(m.is_subset(&nn).unwrap());
            }
        }
    }

    #[test]
    fn join0_containments() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..40 {
            let f1 = random_monotone(&mut rng, 2, 3, 4);
            let f2 = random_monotone(&mut rng, 2, 3, 4);
            for g in subgraphs(&PathGraph::path_k(3)) {
                let r = join0_check(&formula_evaluator(&f1), &formula_evaluator(&f2), &g, 2, 3)
                    .unwrap();
                assert!(r.holds(), "{f1} / {f2} on {g}: {r:?}");
            }
        }
    }

    #[test]
    fn restricted_minterms_small_graph_is_plain() {
        let f = sub_pmm(FormulaKind::D, 2, 3);
        let mut cache = MintermCache::new(&f, 2, 3).unwrap();
        for e in 1..=3 {
            let t = JoinTree::edge(e);
            assert_eq!(
                cache.restricted_of(0, &t).unwrap(),
                cache.minterms_of(0, t.graph()).unwrap()
            );
        }
    }

    #[test]
    fn pure_disjunction_has_empty_restricted_sets() {
        let f = right_deep(&Formula::or((1..=3).map(|i| Formula::m(i, 1, 1)).collect()));
        assert_eq!(f.stats().and_left_depth, 0);
        let g = PathGraph::path_k(2);
        for t in enumerate_strict(&g, DepthKind::Left, 2, 5).unwrap() {
            assert!(restricted_minterms(&f, &t, 2, 3).unwrap().is_empty());
        }
        assert!(restricted_minterms(
            &f,
            &JoinTree::join(&JoinTree::edge(1), &JoinTree::edge(1)),
            2,
            3
        )
        .is_err());
    }

    #[test]
    fn covering_of_right_deep_dnf() {
        let f = sub_pmm(FormulaKind::D, 2, 3);
        let r = covering_check(&f, &PathGraph::path_k(3), 2, 3).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.minterms, 4);
        let g = PathGraph::from_edges([1, 3]);
        assert!(covering_check(&f, &g, 2, 3).unwrap().holds());
    }

    #[test]
    fn covering_on_random_formulas() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let f = random_monotone(&mut rng, 2, 3, 5);
            for g in subgraphs(&PathGraph::path_k(3))
                .into_iter()
                .filter(|g| !g.is_empty())
            {
                let r = covering_check(&f, &g, 2, 3).unwrap();
                assert!(r.holds(), "{f} on {g}: {r:?}");
            }
        }
    }

    #[test]
    fn decomposition_cost_base_cases() {
        let params = PathsetParams::new(2, 3).unwrap();
        let lit = DeMorgan::Lit(Literal::pos(Var::Matrix(2, 1, 2)));
        let r = chi_decomposition_cost(&lit, &JoinTree::edge(2), &params).unwrap();
        assert_eq!((r.cost, r.size, r.relation_size), (1, 1, 1));
        let r =
            chi_decomposition_cost(&DeMorgan::Const(true), &JoinTree::edge(2), &params).unwrap();
        assert_eq!(r.cost, 0);
        // A literal on another layer has no E_2-minterms.
        let other = DeMorgan::Lit(Literal::pos(Var::Matrix(1, 1, 2)));
        assert_eq!(
            chi_decomposition_cost(&other, &JoinTree::edge(2), &params)
                .unwrap()
                .cost,
            0
        );
    }

    #[test]
    fn decomposition_cost_sandwich_on_dnf() {
        let params = PathsetParams::new(2, 3).unwrap();
        let f = sub_pmm(FormulaKind::D, 2, 3);
        assert_eq!(subformula_pathset_violation(&f, &params).unwrap(), None);
        let trees = enumerate_strict(&PathGraph::path_k(3), DepthKind::Left, 3, 5).unwrap();
        let mut positive = 0;
        for t in &trees {
            let r = chi_decomposition_cost(&f, t, &params).unwrap();
            assert!(r.upper_holds() && r.lower_holds(), "{r:?}");
            positive += (r.cost > 0) as usize;
        }
        assert!(positive > 0);
    }

    #[test]
    fn decomposition_cost_sandwich_after_restriction() {
        let params = PathsetParams::new(2, 3).unwrap();
        let f = sub_pmm(FormulaKind::D, 2, 3);
        let trees = enumerate_strict(&PathGraph::path_k(3), DepthKind::Left, 3, 5).unwrap();
        let mut pipelines = 0;
        for seed in 0..40 {
            let xi = crate::pathsets::sample_xi(2, 3, seed)
                .unwrap()
                .xi_graph()
                .unwrap();
            let g = crate::pathsets::restrict_formula(&f, &xi);
            if subformula_pathset_violation(&g, &params).unwrap().is_some() {
                assert!(chi_decomposition_cost(&g, &trees[0], &params).is_err());
                continue;
            }
            pipelines += 1;
            for t in &trees {
                let r = chi_decomposition_cost(&g, t, &params).unwrap();
                assert!(r.upper_holds() && r.lower_holds(), "seed {seed}: {r:?}");
            }
        }
        assert!(pipelines >= 5, "{pipelines}");
    }

    #[test]
    fn decomposition_cost_rejects_non_pathsets() {
        // ⋀_i ⋁_{a,b} M^{(i)}_{a,b}: every Path_k-assignment is a minterm.
        let cnf = Formula::and(
            (1..=2)
                .map(|i| {
                    Formula::or(
                        (1..=2)
                            .flat_map(|a| (1..=2).map(move |b| Formula::m(i, a, b)))
                            .collect(),
                    )
                })
                .collect(),
        );
        let f = right_deep(&cnf);
        let params = PathsetParams::new(2, 2).unwrap();
        let t = JoinTree::join(&JoinTree::edge(1), &JoinTree::edge(2));
        assert!(matches!(
            chi_decomposition_cost(&f, &t, &params),
            Err(LabError::Domain(_))
        ));
    }
}
