//! Relations over `[n]^{V(G)}`, joins, exact densities, the pathset
//! predicate, minterm relations of functions on the blow-up of the path and
//! random-restriction experiments.
//!
//! `ñ = n^{(k−1)/k}` never appears as a float in a predicate: every
//! comparison against a power of `ñ` is raised to the `k`-th power and done
//! in big integers.

mod minterms;
mod restriction;

pub use minterms::{
    bmm_evaluator, chi_decomposition_cost, covering_check, formula_evaluator, join0_check,
    minterms, restricted_minterms, section, subformula_pathset_violation, BlowupGraph,
    CoveringReport, DecompositionReport, Join0Report, MintermCache, MintermMode,
    DEFAULT_EVAL_BUDGET,
};
pub use restriction::{
    eps1_sample, montecarlo_eps1, montecarlo_mpath2, mpath2_trial, restrict_formula, sample_xi,
    Eps1Report, Eps1Row, MonteCarloReport, RestrictionSample,
};

use std::collections::{BTreeSet, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{check_limit, LabError, Result};
use crate::jointree::checks::for_each_perm;
use crate::jointree::JoinTree;
use crate::pathgraph::{vec_delta, PathGraph};

/// Largest `k` for which the pathset predicate enumerates all `F ⊆ Path_k`.
pub const MAX_PATHSET_K: u32 = 10;
/// Largest number of tuples a relation may be expanded to.
pub const MAX_RELATION_TUPLES: u64 = 10_000_000;

/// A `G`-relation: a set of assignments `V(G) → [n]`. Each tuple lists the
/// values of the vertices of `G` in increasing vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRelation", into = "RawRelation")]
pub struct Relation {
    graph: PathGraph,
    n: u32,
    tuples: BTreeSet<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct RawRelation {
    graph: PathGraph,
    n: u32,
    tuples: Vec<Vec<u32>>,
}

impl TryFrom<RawRelation> for Relation {
    type Error = LabError;
    fn try_from(raw: RawRelation) -> Result<Self> {
        Relation::new(raw.graph, raw.n, raw.tuples)
    }
}

impl From<Relation> for RawRelation {
    fn from(r: Relation) -> Self {
        RawRelation {
            graph: r.graph,
            n: r.n,
            tuples: r.tuples.into_iter().collect(),
        }
    }
}

impl Relation {
    pub fn new<I: IntoIterator<Item = Vec<u32>>>(
        graph: PathGraph,
        n: u32,
        tuples: I,
    ) -> Result<Self> {
        if n == 0 {
            return Err(LabError::InvalidParameter("n must be positive".into()));
        }
        let width = graph.vertex_count() as usize;
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != width {
                return Err(LabError::InvalidInput(format!(
                    "tuple {t:?} has {} entries, graph {graph} has {width} vertices",
                    t.len()
                )));
            }
            if t.iter().any(|&x| x == 0 || x > n) {
                return Err(LabError::InvalidInput(format!(
                    "tuple {t:?} has a value outside [1, {n}]"
                )));
            }
            set.insert(t);
        }
        Ok(Relation {
            graph,
            n,
            tuples: set,
        })
    }

    pub fn empty(graph: PathGraph, n: u32) -> Self {
        Relation {
            graph,
            n,
            tuples: BTreeSet::new(),
        }
    }

    /// `[n]^{V(G)}`.
    pub fn full(graph: PathGraph, n: u32) -> Result<Self> {
        let width = graph.vertex_count() as u32;
        check_limit(
            "relation tuples",
            (n as u64).saturating_pow(width),
            MAX_RELATION_TUPLES,
        )?;
        Ok(Relation {
            graph,
            n,
            tuples: assignments(n, width as usize).collect(),
        })
    }

    pub fn graph(&self) -> &PathGraph {
        &self.graph
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.tuples.iter()
    }

    pub fn contains(&self, t: &[u32]) -> bool {
        self.tuples.contains(t)
    }

    /// Vertices of the graph in tuple order.
    pub fn vertices(&self) -> Vec<i64> {
        self.graph.vertices().collect()
    }

    fn same_space(&self, other: &Relation) -> Result<()> {
        if self.graph != other.graph || self.n != other.n {
            return Err(LabError::InvalidInput(format!(
                "relations live on different spaces: ({}, n={}) vs ({}, n={})",
                self.graph, self.n, other.graph, other.n
            )));
        }
        Ok(())
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.same_space(other)?;
        Ok(Relation {
            tuples: self.tuples.union(&other.tuples).cloned().collect(),
            ..self.clone()
        })
    }

    pub fn intersection(&self, other: &Relation) -> Result<Relation> {
        self.same_space(other)?;
        Ok(Relation {
            tuples: self.tuples.intersection(&other.tuples).cloned().collect(),
            ..self.clone()
        })
    }

    pub fn is_subset(&self, other: &Relation) -> Result<bool> {
        self.same_space(other)?;
        Ok(self.tuples.is_subset(&other.tuples))
    }

    /// Positions (in tuple order) of the vertices of `G` that lie in `V(F)`.
    fn positions_in(&self, f: &PathGraph) -> Vec<usize> {
        self.graph
            .vertices()
            .enumerate()
            .filter(|(_, v)| f.has_vertex(*v))
            .map(|(i, _)| i)
            .collect()
    }

    /// `max_β |{α ∈ A : α_I = β_I}|` with `I = V(F) ∩ V(G)`, and `|V(G) ∖ V(F)|`.
    fn conditional_count(&self, f: &PathGraph) -> (usize, u32) {
        let pos = self.positions_in(f);
        let free = self.graph.vertex_count() as u32 - pos.len() as u32;
        let mut counts: HashMap<Vec<u32>, usize> = HashMap::new();
        for t in &self.tuples {
            *counts
                .entry(pos.iter().map(|&i| t[i]).collect())
                .or_default() += 1;
        }
        (counts.values().copied().max().unwrap_or(0), free)
    }
}

/// All of `[n]^width` in lexicographic order, values 1-based.
pub(crate) fn assignments(n: u32, width: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (n as u64).pow(width as u32);
    (0..total).map(move |mut code| {
        let mut t = vec![0; width];
        for slot in t.iter_mut().rev() {
            *slot = (code % n as u64) as u32 + 1;
            code /= n as u64;
        }
        t
    })
}

/// `A ⋈ B`: assignments on `V(G) ∪ V(H)` whose restrictions lie in `A` and `B`.
pub fn join(a: &Relation, b: &Relation) -> Result<Relation> {
    if a.n != b.n {
        return Err(LabError::InvalidInput(format!(
            "cannot join relations with n = {} and n = {}",
            a.n, b.n
        )));
    }
    let graph = a.graph.union(&b.graph);
    let (va, vb) = (a.vertices(), b.vertices());
    let shared: Vec<i64> = va
        .iter()
        .copied()
        .filter(|v| b.graph.has_vertex(*v))
        .collect();
    let key_a: Vec<usize> = shared
        .iter()
        .map(|v| va.binary_search(v).unwrap())
        .collect();
    let key_b: Vec<usize> = shared
        .iter()
        .map(|v| vb.binary_search(v).unwrap())
        .collect();
    // Each output coordinate is read from A when possible, else from B.
    let source: Vec<(bool, usize)> = graph
        .vertices()
        .map(|v| match va.binary_search(&v) {
            Ok(i) => (true, i),
            Err(_) => (false, vb.binary_search(&v).unwrap()),
        })
        .collect();
    let mut buckets: HashMap<Vec<u32>, Vec<&Vec<u32>>> = HashMap::new();
    for t in &b.tuples {
        buckets
            .entry(key_b.iter().map(|&i| t[i]).collect())
            .or_default()
            .push(t);
    }
    let mut tuples = BTreeSet::new();
    for s in &a.tuples {
        let key: Vec<u32> = key_a.iter().map(|&i| s[i]).collect();
        for t in buckets.get(&key).into_iter().flatten() {
            tuples.insert(
                source
                    .iter()
                    .map(|&(from_a, i)| if from_a { s[i] } else { t[i] })
                    .collect(),
            );
        }
    }
    Ok(Relation {
        graph,
        n: a.n,
        tuples,
    })
}

/// `A_1 ⋈ ⋯ ⋈ A_m`.
pub fn join_all(rels: &[Relation]) -> Result<Relation> {
    let (first, rest) = rels
        .split_first()
        .ok_or_else(|| LabError::Arity("join of zero relations".into()))?;
    rest.iter().try_fold(first.clone(), |acc, r| join(&acc, r))
}

/// `μ(A | F)`; `μ(A)` when `f` is `None`.
pub fn density(a: &Relation, f: Option<&PathGraph>) -> BigRational {
    let empty = PathGraph::empty();
    let (count, free) = a.conditional_count(f.unwrap_or(&empty));
    BigRational::new(BigInt::from(count), BigInt::from(a.n).pow(free))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathsetParams {
    pub n: u32,
    pub k: u32,
}

impl PathsetParams {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(LabError::InvalidParameter(format!(
                "need n, k ≥ 1, got n = {n}, k = {k}"
            )));
        }
        Ok(PathsetParams { n, k })
    }

    /// Exponent `e` with `ñ = n^e`.
    pub fn ntilde_exponent(&self) -> Ratio<i64> {
        Ratio::new(self.k as i64 - 1, self.k as i64)
    }

    fn check(&self, a: &Relation) -> Result<()> {
        if a.n != self.n {
            return Err(LabError::InvalidInput(format!(
                "relation has n = {}, parameters n = {}",
                a.n, self.n
            )));
        }
        let k = self.k as i64;
        if a.graph.intervals().iter().any(|&(s, t)| s < 0 || t > k) {
            return Err(LabError::InvalidInput(format!(
                "{} is not a subgraph of Path_{k}",
                a.graph
            )));
        }
        Ok(())
    }

    /// `n^{(k−1)·e}` as a big integer: `ñ^{e}` raised to the `k`-th power.
    fn ntilde_pow_k(&self, e: u32) -> BigUint {
        BigUint::from(self.n).pow((self.k - 1) * e)
    }
}

/// Some `F ⊆ Path_k` with `μ(A | F) > ñ^{−Δ(G ⊖ F)}`, if one exists.
pub fn pathset_violation(a: &Relation, params: &PathsetParams) -> Result<Option<PathGraph>> {
    params.check(a)?;
    check_limit("k", params.k as u64, MAX_PATHSET_K as u64)?;
    let k = params.k;
    for mask in 0u32..1 << k {
        let f = PathGraph::from_edges((0..k).filter(|i| mask >> i & 1 == 1).map(|i| i as i64 + 1));
        let (count, free) = a.conditional_count(&f);
        let delta = a.graph.ominus(&f).delta() as u32;
        // count^k · n^{(k−1)Δ} ≤ n^{k·free}
        let lhs = BigUint::from(count).pow(k) * params.ntilde_pow_k(delta);
        let rhs = BigUint::from(params.n).pow(k * free);
        if lhs > rhs {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

pub fn is_pathset(a: &Relation, params: &PathsetParams) -> Result<bool> {
    Ok(pathset_violation(a, params)?.is_none())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ChainRuleReport {
    pub checked: usize,
    pub violations: Vec<String>,
}

impl ChainRuleReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations.push(what());
        }
    }
}

pub const MAX_CHAIN_RELATIONS: usize = 6;

/// Checks the density chain rules on a family of relations:
/// `μ(A ⋈ B | F) ≤ μ(A | F)·μ(B | F ∪ G)` for every ordered pair, the
/// m-ary bound `μ(⋈ A_j) ≤ ∏ μ(A_{π(j)} | G_{π(1)} ∪ ⋯ ∪ G_{π(j−1)})` for
/// every permutation `π` and, when every relation is a pathset, the bound
/// `μ(⋈ A_j) ≤ ñ^{−vecΔ(G_{π(1)},…,G_{π(m)})}`.
pub fn chain_rule_check(
    rels: &[Relation],
    f: &PathGraph,
    params: &PathsetParams,
) -> Result<ChainRuleReport> {
    check_limit("relations", rels.len() as u64, MAX_CHAIN_RELATIONS as u64)?;
    for r in rels {
        params.check(r)?;
    }
    let mut report = ChainRuleReport::default();
    for (i, a) in rels.iter().enumerate() {
        for (j, b) in rels.iter().enumerate() {
            if i == j {
                continue;
            }
            let lhs = density(&join(a, b)?, Some(f));
            let rhs = density(a, Some(f)) * density(b, Some(&f.union(a.graph())));
            report.check(lhs <= rhs, || {
                format!("pair ({i}, {j}) given {f}: {lhs} > {rhs}")
            });
        }
    }
    if rels.is_empty() {
        return Ok(report);
    }
    let joined = density(&join_all(rels)?, None);
    let all_pathsets = rels
        .iter()
        .map(|r| is_pathset(r, params))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|b| b);
    let mut failure: Option<String> = None;
    let mut checked = 0;
    for_each_perm(rels.len(), &mut |perm| {
        checked += 1;
        let mut prefix = PathGraph::empty();
        let mut product = BigRational::one();
        for &p in perm {
            product *= density(&rels[p], Some(&prefix));
            prefix = prefix.union(rels[p].graph());
        }
        if joined > product && failure.is_none() {
            failure = Some(format!("permutation {perm:?}: {joined} > {product}"));
        }
        if all_pathsets {
            checked += 1;
            let graphs: Vec<PathGraph> = perm.iter().map(|&p| rels[p].graph().clone()).collect();
            let vd = vec_delta(&graphs, &PathGraph::empty()) as u32;
            // μ^k · n^{(k−1)·vecΔ} ≤ 1
            let lhs = joined.numer().pow(params.k) * BigInt::from(params.ntilde_pow_k(vd));
            if lhs > joined.denom().pow(params.k) && failure.is_none() {
                failure = Some(format!(
                    "pathset join bound, permutation {perm:?}: μ = {joined}, vecΔ = {vd}"
                ));
            }
        }
    });
    report.checked += checked;
    report.violations.extend(failure);
    Ok(report)
}

pub(crate) fn serialize_ratio<S: Serializer>(
    r: &BigRational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// `ñ^{Ψ(T)}·μ(A)`, kept as the exact pair `(Ψ, μ)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiLower {
    pub psi: i64,
    pub n: u32,
    pub k: u32,
    #[serde(serialize_with = "serialize_ratio")]
    pub density: BigRational,
    /// Float rendering, for display only.
    pub approx: f64,
}

impl ChiLower {
    fn new(psi: i64, params: &PathsetParams, density: BigRational) -> Self {
        let e = params.ntilde_exponent();
        let approx = (params.n as f64).powf(psi as f64 * *e.numer() as f64 / *e.denom() as f64)
            * density.to_f64().unwrap_or(f64::NAN);
        ChiLower {
            psi,
            n: params.n,
            k: params.k,
            density,
            approx,
        }
    }

    /// Exponent of `n` in `ñ^{Ψ}`.
    pub fn n_exponent(&self) -> Ratio<i64> {
        Ratio::new((self.k as i64 - 1) * self.psi, self.k as i64)
    }

    /// Exactly decides `ñ^{Ψ}·μ ≤ cost`, i.e. `n^{(k−1)Ψ}·μ^k ≤ cost^k`.
    pub fn is_at_most(&self, cost: u128) -> bool {
        if self.density.is_zero() {
            return true;
        }
        let k = self.k;
        // Ψ ≥ 0 for every join tree.
        let lhs = BigInt::from(self.n).pow((k - 1) * self.psi as u32) * self.density.numer().pow(k);
        lhs <= BigInt::from(cost).pow(k) * self.density.denom().pow(k)
    }
}

/// The pathset-complexity lower bound `χ_T(A) ≥ ñ^{Ψ(T)}·μ(A)`.
pub fn chi_lower(t: &JoinTree, a: &Relation, params: &PathsetParams) -> Result<ChiLower> {
    if t.graph() != a.graph() {
        return Err(LabError::InvalidInput(format!(
            "tree graph {} differs from relation graph {}",
            t.graph(),
            a.graph()
        )));
    }
    if let Some(f) = pathset_violation(a, params)? {
        return Err(LabError::Domain(format!(
            "relation is not a pathset (density too large given {f})"
        )));
    }
    Ok(ChiLower::new(t.psi()?, params, density(a, None)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jointree::maximally_overlapping;
    use num_traits::Pow;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rel(graph: PathGraph, n: u32, tuples: &[&[u32]]) -> Relation {
        Relation::new(graph, n, tuples.iter().map(|t| t.to_vec())).unwrap()
    }

    fn random_graph(rng: &mut ChaCha8Rng, k: i64) -> PathGraph {
        PathGraph::from_edges((1..=k).filter(|_| rng.gen_bool(0.5)))
    }

    fn random_relation(rng: &mut ChaCha8Rng, g: PathGraph, n: u32, p: f64) -> Relation {
        let width = g.vertex_count() as usize;
        let tuples: Vec<Vec<u32>> = assignments(n, width).filter(|_| rng.gen_bool(p)).collect();
        Relation::new(g, n, tuples).unwrap()
    }

    /// Keeps a random subset of tuples until the relation is a pathset.
    fn random_pathset(rng: &mut ChaCha8Rng, g: PathGraph, params: &PathsetParams) -> Relation {
        let mut r = random_relation(rng, g, params.n, 0.3);
        while !is_pathset(&r, params).unwrap() {
            let keep: Vec<Vec<u32>> = r.tuples().filter(|_| rng.gen_bool(0.7)).cloned().collect();
            r = Relation::new(r.graph().clone(), r.n(), keep).unwrap();
        }
        r
    }

    /// Join by brute force over `[n]^{V(G ∪ H)}`.
    fn join_oracle(a: &Relation, b: &Relation) -> Relation {
        let g = a.graph().union(b.graph());
        let verts: Vec<i64> = g.vertices().collect();
        let project = |t: &[u32], vs: &[i64]| -> Vec<u32> {
            vs.iter()
                .map(|v| t[verts.iter().position(|w| w == v).unwrap()])
                .collect()
        };
        let (va, vb) = (a.vertices(), b.vertices());
        let tuples = assignments(a.n(), verts.len())
            .filter(|t| a.contains(&project(t, &va)) && b.contains(&project(t, &vb)))
            .collect::<Vec<_>>();
        Relation::new(g, a.n(), tuples).unwrap()
    }

    #[test]
    fn join_examples() {
        let a = rel(PathGraph::edge(1), 3, &[&[1, 2]]);
        let b = rel(PathGraph::edge(2), 3, &[&[2, 3], &[1, 1]]);
        let j = join(&a, &b).unwrap();
        assert_eq!(j.tuples().cloned().collect::<Vec<_>>(), vec![vec![1, 2, 3]]);
        assert_eq!(j.graph(), &PathGraph::path(0, 2).unwrap());

        let c = rel(PathGraph::edge(4), 3, &[&[1, 1], &[2, 3]]);
        assert_eq!(join(&b, &c).unwrap().len(), b.len() * c.len());
        let d = rel(PathGraph::edge(2), 3, &[&[2, 3], &[3, 3]]);
        assert_eq!(join(&b, &d).unwrap(), b.intersection(&d).unwrap());
        assert!(join(&a, &Relation::empty(PathGraph::edge(1), 2)).is_err());
    }

    #[test]
    fn join_matches_bruteforce_and_is_commutative() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let n = rng.gen_range(1..=3);
            let gs: Vec<PathGraph> = (0..3).map(|_| random_graph(&mut rng, 4)).collect();
            let [a, b, c] = [0, 1, 2].map(|i| random_relation(&mut rng, gs[i].clone(), n, 0.4));
            let ab = join(&a, &b).unwrap();
            assert_eq!(ab, join_oracle(&a, &b));
            assert_eq!(ab, join(&b, &a).unwrap());
            assert_eq!(
                join(&ab, &c).unwrap(),
                join(&a, &join(&b, &c).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn density_examples() {
        let g = PathGraph::path(0, 2).unwrap();
        assert_eq!(
            density(&Relation::full(g.clone(), 3).unwrap(), None),
            BigRational::one()
        );
        let empty = Relation::empty(g.clone(), 3);
        assert!(density(&empty, None).is_zero());
        assert!(density(&empty, Some(&PathGraph::edge(1))).is_zero());
        // Two tuples agreeing on vertex 0: μ = 2/27, μ(·|E_1) = 1/3, μ(·|{vertex 0 only}) via E_0 = 2/9.
        let a = rel(g, 3, &[&[1, 1, 1], &[1, 2, 2]]);
        assert_eq!(density(&a, None), BigRational::new(2.into(), 27.into()));
        assert_eq!(
            density(&a, Some(&PathGraph::edge(1))),
            BigRational::new(1.into(), 3.into())
        );
        assert_eq!(
            density(&a, Some(&PathGraph::edge(0))),
            BigRational::new(2.into(), 9.into())
        );
    }

    #[test]
    fn conditioning_never_lowers_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let g = random_graph(&mut rng, 4);
            let a = random_relation(&mut rng, g, 3, 0.3);
            let f = random_graph(&mut rng, 4);
            let mu = density(&a, None);
            assert_eq!(mu, density(&a, Some(&PathGraph::empty())));
            assert!(mu <= density(&a, Some(&f)));
            assert!(density(&a, Some(&f)) <= BigRational::one());
        }
    }

    #[test]
    fn serde_round_trip() {
        let a = rel(PathGraph::path(0, 2).unwrap(), 3, &[&[1, 2, 3], &[3, 2, 1]]);
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<Relation>(&text).unwrap(), a);
        let bad = r#"{"graph": {"intervals": [[0,1]]}, "n": 2, "tuples": [[1,3]]}"#;
        assert!(serde_json::from_str::<Relation>(bad).is_err());
    }

    /// `μ(A|F)^k · n^{(k−1)Δ(G⊖F)} ≤ 1` with exact rational powers.
    fn pathset_oracle(a: &Relation, p: &PathsetParams) -> bool {
        (0u32..1 << p.k).all(|mask| {
            let f = PathGraph::from_edges((1..=p.k as i64).filter(|i| mask >> (i - 1) & 1 == 1));
            let mu = density(a, Some(&f));
            let d = a.graph().ominus(&f).delta() as i32;
            let bound = BigRational::from_integer(BigInt::from(p.n)).pow(-(p.k as i32 - 1) * d);
            mu.pow(p.k as i32) <= bound
        })
    }

    #[test]
    fn pathset_examples() {
        let p = PathsetParams::new(3, 3).unwrap();
        assert!(is_pathset(&Relation::empty(PathGraph::path_k(3), 3), &p).unwrap());
        assert!(!is_pathset(&Relation::full(PathGraph::edge(2), 3).unwrap(), &p).unwrap());
        let single = rel(PathGraph::path_k(3), 3, &[&[1, 2, 3, 1]]);
        assert_eq!(
            is_pathset(&single, &p).unwrap(),
            pathset_oracle(&single, &p)
        );
        assert!(is_pathset(&single, &p).unwrap());
        assert!(is_pathset(&single, &PathsetParams::new(4, 3).unwrap()).is_err());
        assert!(is_pathset(&rel(PathGraph::edge(5), 3, &[]), &p).is_err());
    }

    #[test]
    fn pathset_predicate_matches_rational_powers() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (mut yes, mut no) = (0, 0);
        for _ in 0..200 {
            let k = rng.gen_range(1..=4);
            let p = PathsetParams::new(rng.gen_range(2..=4), k).unwrap();
            let g = random_graph(&mut rng, k as i64);
            let q = rng.gen_range(0.0..1.0);
            let a = random_relation(&mut rng, g, p.n, q);
            let got = is_pathset(&a, &p).unwrap();
            assert_eq!(got, pathset_oracle(&a, &p), "{a:?}");
            if got {
                yes += 1
            } else {
                no += 1
            }
        }
        assert!(yes > 20 && no > 20, "{yes} / {no}");
    }

    #[test]
    fn chain_rules_on_random_families() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..300 {
            let k = rng.gen_range(1..=4);
            let p = PathsetParams::new(rng.gen_range(2..=3), k).unwrap();
            let m = rng.gen_range(1..=3);
            let rels: Vec<Relation> = (0..m)
                .map(|_| {
                    let g = random_graph(&mut rng, k as i64);
                    if rng.gen_bool(0.5) {
                        random_pathset(&mut rng, g, &p)
                    } else {
                        random_relation(&mut rng, g, p.n, 0.5)
                    }
                })
                .collect();
            let f = random_graph(&mut rng, k as i64);
            let report = chain_rule_check(&rels, &f, &p).unwrap();
            assert!(report.holds(), "{:?}", report.violations);
        }
    }

    #[test]
    fn chain_rule_equality_cases() {
        let p = PathsetParams::new(3, 4).unwrap();
        let a = rel(PathGraph::edge(1), 3, &[&[1, 2], &[2, 2]]);
        let b = rel(PathGraph::edge(4), 3, &[&[3, 3]]);
        assert_eq!(
            density(&join(&a, &b).unwrap(), None),
            density(&a, None) * density(&b, None)
        );
        let e = Relation::empty(PathGraph::edge(2), 3);
        assert!(density(&join(&a, &e).unwrap(), None).is_zero());
        assert!(chain_rule_check(&[a, b, e], &PathGraph::empty(), &p)
            .unwrap()
            .holds());
    }

    #[test]
    fn chi_lower_examples() {
        let p = PathsetParams::new(3, 5).unwrap();
        let t = maximally_overlapping(5).unwrap();
        let empty = Relation::empty(PathGraph::path_k(5), 3);
        let lo = chi_lower(&t, &empty, &p).unwrap();
        assert!(lo.density.is_zero() && lo.is_at_most(0));

        let single = rel(PathGraph::path_k(5), 3, &[&[1, 1, 1, 1, 1, 1]]);
        let lo = chi_lower(&t, &single, &p).unwrap();
        assert_eq!(lo.psi, 1);
        assert_eq!(lo.n_exponent(), Ratio::new(4, 5));
        assert_eq!(lo.density, BigRational::new(1.into(), 729.into()));
        assert!((lo.approx - 3f64.powf(0.8) / 729.0).abs() < 1e-12);
        assert!(lo.is_at_most(1));

        let tight = crate::jointree::build_tight(crate::jointree::TightKind::I, 4, 2).unwrap();
        let single4 = rel(PathGraph::path_k(4), 2, &[&[1, 2, 1, 2, 1]]);
        let p4 = PathsetParams::new(2, 4).unwrap();
        let lo = chi_lower(&tight, &single4, &p4).unwrap();
        assert_eq!(lo.psi, tight.psi().unwrap());
        // 2^{3Ψ/4}/32 ≤ c  ⇔  2^{3Ψ} ≤ 32^4 c^4
        assert!(!lo.is_at_most(0));
        assert!(lo.is_at_most(1));

        let full = Relation::full(PathGraph::path_k(5), 3).unwrap();
        assert!(matches!(chi_lower(&t, &full, &p), Err(LabError::Domain(_))));
    }

    #[test]
    fn chi_lower_comparison_is_exact() {
        // n = 8, k = 3: ñ = 4 exactly, so ñ^Ψ μ is an integer multiple check.
        let lo = ChiLower::new(
            2,
            &PathsetParams::new(8, 3).unwrap(),
            BigRational::new(1.into(), 4.into()),
        );
        assert!(lo.is_at_most(4));
        assert!(!lo.is_at_most(3));
    }
}
