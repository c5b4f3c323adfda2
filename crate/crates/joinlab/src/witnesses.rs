//! Constructive orderings behind the lower bounds on vector measures, each
//! returned with the value it achieves and the bound it guarantees.
//!
//! Every construction computes its achieved value directly and asserts it
//! against the guarantee, so a failed assertion means a bug here rather than
//! in the caller's input.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::greedylab::greedy_order_indices;
use crate::pathgraph::{covered_k, gap, permuted, residuals, vec_delta, vec_measures, PathGraph};
use crate::shiftperm::{Objective, ShiftPermutation};

const TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessOrdering {
    /// 1-based: position `j` holds graph `perm[j-1]`.
    Permutation(Vec<usize>),
    Shift(ShiftPermutation),
}

impl WitnessOrdering {
    pub fn apply(&self, seq: &[PathGraph]) -> Vec<PathGraph> {
        match self {
            WitnessOrdering::Permutation(p) => permuted(seq, p),
            WitnessOrdering::Shift(s) => s.reorder(seq),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessResult {
    pub ordering: WitnessOrdering,
    pub achieved: i64,
    pub guaranteed: f64,
}

impl WitnessResult {
    pub fn holds(&self) -> bool {
        self.achieved as f64 + TOL >= self.guaranteed
    }

    fn asserted(self, what: &str) -> Self {
        assert!(
            self.holds(),
            "{what}: achieved {} < guaranteed {}",
            self.achieved,
            self.guaranteed
        );
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrongShiftResult {
    pub witness: WitnessResult,
    /// Smallest `vec_delta` over all induced orders `σ̃_j`.
    pub min_induced_vec_delta: i64,
    pub induced_bound: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrongMode {
    Premain,
    Gap,
}

fn slack(rhs: f64) -> f64 {
    TOL * rhs.abs().max(1.0)
}

/// Both sides of `max_j((d−1)x_j^{1/(d−1)} + Σ_{i≤j} y_i) ≥ d·(Σ x_j y_j / e)^{1/d}`.
pub fn numerical_sides(xs: &[f64], ys: &[f64], d: f64) -> Result<(f64, f64)> {
    if xs.len() != ys.len() {
        return Err(LabError::InvalidInput("xs and ys differ in length".into()));
    }
    if !(d > 1.0) || !d.is_finite() {
        return Err(LabError::Domain(format!("d = {d} must exceed 1")));
    }
    if xs.iter().chain(ys).any(|v| !(*v >= 0.0) || !v.is_finite()) {
        return Err(LabError::Domain(
            "entries must be finite and non-negative".into(),
        ));
    }
    let mut prefix = 0.0;
    let mut lhs: f64 = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        prefix += y;
        lhs = lhs.max((d - 1.0) * x.powf(1.0 / (d - 1.0)) + prefix);
    }
    let dot: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let rhs = d * (dot / std::f64::consts::E).powf(1.0 / d);
    Ok((lhs, rhs))
}

/// Checks the weighted AM–GM style inequality above; for a single pair it
/// also checks the sharper `(d−1)x^{1/(d−1)} + y ≥ d(xy)^{1/d}`.
pub fn check_numerical(xs: &[f64], ys: &[f64], d: f64) -> Result<bool> {
    let (lhs, rhs) = numerical_sides(xs, ys, d)?;
    let mut ok = lhs >= rhs - slack(rhs);
    if xs.len() == 1 {
        let (x, y) = (xs[0], ys[0]);
        let l = (d - 1.0) * x.powf(1.0 / (d - 1.0)) + y;
        let r = d * (x * y).powf(1.0 / d);
        ok &= l >= r - slack(r);
    }
    Ok(ok)
}

fn vec_value(seq: &[PathGraph], objective: Objective) -> i64 {
    objective.eval(seq, &PathGraph::empty())
}

/// The Δ-greedy ordering of a covering of `Path_k` by single-edge graphs
/// (`λ = 1` throughout); `vec_delta ≥ k/6`.
pub fn construct_premain_i(cov: &[PathGraph]) -> Result<WitnessResult> {
    let k = covered_k(cov)?;
    if cov.iter().any(|g| g.lambda() != 1) {
        return Err(LabError::InvalidInput("every graph must have λ = 1".into()));
    }
    let order = greedy_order_indices(cov, &PathGraph::empty());
    let perm: Vec<usize> = order.iter().map(|i| i + 1).collect();
    let achieved = vec_delta(&permuted(cov, &perm), &PathGraph::empty());
    Ok(WitnessResult {
        ordering: WitnessOrdering::Permutation(perm),
        achieved,
        guaranteed: k as f64 / 6.0,
    }
    .asserted("premain I"))
}

/// Right end of the component of `u` containing edge `[a, a+1]`, or `a`.
fn reach_right(u: &PathGraph, a: i64) -> i64 {
    u.intervals()
        .iter()
        .find(|&&(s, t)| s <= a && a < t)
        .map_or(a, |&(_, t)| t)
}

/// Left end of the component of `u` containing edge `[b−1, b]`, or `b`.
fn reach_left(u: &PathGraph, b: i64) -> i64 {
    u.intervals()
        .iter()
        .find(|&&(s, t)| s < b && b <= t)
        .map_or(b, |&(s, _)| s)
}

/// A chain `i_1 < … < i_p` (0-based) whose blocks each open with a fresh
/// component of length `lengths[h]`.
#[derive(Clone, Debug)]
struct Chain {
    chosen: Vec<usize>,
    lengths: Vec<i64>,
}

/// Follows the front `f_j` of the prefix unions growing rightwards from `a`
/// (capped at `b`), records the component that pushes the front at each step,
/// extracts a minimal interval cover of `[a, b]` from those components and
/// keeps its odd- or even-indexed members, whichever are longer in total.
fn front_chain(seq: &[PathGraph], a: i64, b: i64) -> Option<Chain> {
    if a >= b {
        return None;
    }
    let mut u = PathGraph::empty();
    let mut front = a;
    let mut pushes: Vec<(usize, i64, i64)> = Vec::new();
    for (j, g) in seq.iter().enumerate() {
        u = u.union(g);
        let next = reach_right(&u, a).min(b);
        if next > front {
            let &(s, t) = g
                .intervals()
                .iter()
                .find(|&&(s, t)| s <= front && front < t)?;
            pushes.push((j, s, t));
            front = next;
        }
        if front == b {
            break;
        }
    }
    if front < b {
        return None;
    }
    let mut cover: Vec<(usize, i64, i64)> = Vec::new();
    let mut cur = a;
    while cur < b {
        let &best = pushes
            .iter()
            .filter(|&&(_, s, t)| s <= cur && cur < t)
            .max_by(|x, y| x.2.cmp(&y.2).then(y.0.cmp(&x.0)))?;
        cover.push(best);
        cur = best.2;
    }
    cover.sort_unstable();
    let class = |parity: usize| -> Vec<(usize, i64, i64)> {
        cover
            .iter()
            .enumerate()
            .filter(|(h, _)| h % 2 == parity)
            .map(|(_, &c)| c)
            .collect()
    };
    let (odd, even) = (class(0), class(1));
    let total = |c: &[(usize, i64, i64)]| c.iter().map(|&(_, s, t)| t - s).sum::<i64>();
    let pick = if total(&odd) >= total(&even) {
        odd
    } else {
        even
    };
    Some(Chain {
        chosen: pick.iter().map(|c| c.0).collect(),
        lengths: pick.iter().map(|&(_, s, t)| t - s).collect(),
    })
}

/// `σ_I` with `I = {i_1, …, i_p} ∪ {l > i_p}`.
fn chain_shift(m: usize, chain: &Chain) -> ShiftPermutation {
    let last = *chain.chosen.last().expect("non-empty chain") + 1;
    let mut set: Vec<usize> = chain.chosen.iter().map(|i| i + 1).collect();
    set.extend(last + 1..=m);
    ShiftPermutation::from_set(m, &set).expect("valid chain")
}

fn mirror_all(seq: &[PathGraph], k: i64) -> Vec<PathGraph> {
    seq.iter().map(|g| g.mirrored(k)).collect()
}

fn shift_witness(
    seq: &[PathGraph],
    sigma: ShiftPermutation,
    objective: Objective,
    guaranteed: f64,
) -> WitnessResult {
    let achieved = vec_value(&sigma.reorder(seq), objective);
    WitnessResult {
        ordering: WitnessOrdering::Shift(sigma),
        achieved,
        guaranteed,
    }
}

fn premain_ii_chain(seq: &[PathGraph]) -> Result<(i64, Chain)> {
    let k = covered_k(seq)?;
    if vec_delta(seq, &PathGraph::empty()) != 1 {
        return Err(LabError::InvalidInput("vec_delta must be 1".into()));
    }
    let first = seq
        .iter()
        .find(|g| !g.is_empty())
        .expect("covering is non-empty");
    let s1 = first.intervals()[0].0;
    let chain = if 2 * s1 > k {
        front_chain(&mirror_all(seq, k), k - s1, k)
    } else {
        front_chain(seq, s1, k)
    };
    Ok((
        k,
        chain.expect("the prefix unions of a vec_delta = 1 covering grow contiguously"),
    ))
}

/// A shift permutation with `vec_lambda ≥ k/4` for a covering with
/// `vec_delta = 1`.
pub fn construct_premain_ii(seq: &[PathGraph]) -> Result<WitnessResult> {
    let (k, chain) = premain_ii_chain(seq)?;
    let sigma = chain_shift(seq.len(), &chain);
    Ok(shift_witness(seq, sigma, Objective::VecLambda, k as f64 / 4.0).asserted("premain II"))
}

/// The level construction: at level `i` repeatedly add the graph whose fresh
/// part has `λ ≥ 2^{r−i}` and maximal `Δ`; unused graphs go last.
/// `vec_lambda_delta ≥ k/30`.
pub fn construct_main_i(cov: &[PathGraph]) -> Result<WitnessResult> {
    let k = covered_k(cov)?;
    let r = 64 - (k as u64).leading_zeros();
    let mut used = vec![false; cov.len()];
    let mut order = Vec::with_capacity(cov.len());
    let mut acc = PathGraph::empty();
    for i in 1..=r {
        let threshold = 1i64 << (r - i);
        loop {
            let mut best: Option<(usize, i64)> = None;
            for (idx, g) in cov.iter().enumerate() {
                let fresh = g.ominus(&acc);
                if fresh.lambda() >= threshold && best.is_none_or(|(_, d)| fresh.delta() > d) {
                    best = Some((idx, fresh.delta()));
                }
            }
            let Some((idx, _)) = best else { break };
            used[idx] = true;
            order.push(idx);
            acc = acc.union(&cov[idx]);
        }
    }
    order.extend((0..cov.len()).filter(|&i| !used[i]));
    let perm: Vec<usize> = order.iter().map(|i| i + 1).collect();
    let achieved = vec_value(&permuted(cov, &perm), Objective::VecLambdaDelta);
    Ok(WitnessResult {
        ordering: WitnessOrdering::Permutation(perm),
        achieved,
        guaranteed: k as f64 / 30.0,
    }
    .asserted("main I"))
}

/// Surviving components `(s_i, t_i)` in left-to-right order.
fn surviving(seq: &[PathGraph]) -> Vec<(i64, i64)> {
    let mut v: Vec<(i64, i64)> = residuals(seq, &PathGraph::empty())
        .iter()
        .flat_map(|r| r.intervals().to_vec())
        .collect();
    v.sort_unstable();
    v
}

/// The chain of the gap construction: grow from a surviving component into
/// the stretch beyond it that is at least `g` away from every midpoint.
/// Cases are tried in order (left end, right end, interior gap) and the
/// first whose condition holds is used.
fn gap_chain(seq: &[PathGraph], k: i64, g: Ratio<i64>) -> Option<Chain> {
    let comps = surviving(seq);
    let mid2 = |(s, t): (i64, i64)| s + t;
    let two_g = g * 2;
    let (s1, _) = comps[0];
    let (_, tc) = *comps.last().unwrap();
    if Ratio::from_integer(mid2(comps[0])) >= two_g {
        return front_chain(&mirror_all(seq, k), k - s1, k);
    }
    if Ratio::from_integer(2 * k - mid2(*comps.last().unwrap())) >= two_g {
        return front_chain(seq, tc, k);
    }
    let i = comps
        .windows(2)
        .position(|w| Ratio::from_integer(mid2(w[1]) - mid2(w[0])) >= two_g * 2)?;
    let (ti, si1) = (comps[i].1, comps[i + 1].0);
    let x = PathGraph::path(ti, si1).ok()?;
    let mut u = PathGraph::empty();
    let mut l = None;
    for (j, gr) in seq.iter().enumerate() {
        u = u.union(gr);
        if x.is_subgraph_of(&u) {
            l = Some(j);
            break;
        }
    }
    let before = PathGraph::union_all(&seq[..l?]);
    let a = reach_right(&before, ti).min(si1);
    let b = reach_left(&before, si1).max(ti);
    if a - ti >= si1 - b {
        front_chain(seq, ti, a)
    } else {
        front_chain(&mirror_all(seq, k), k - si1, k - b)
    }
}

/// Splits a chain into a prefix and a suffix each of total length at least
/// `(Σ − ℓ)/2`, and returns the `σ_{I_b}` that keeps only that part's blocks,
/// choosing the part whose retained fresh `Δ` is at least half of `vec_delta`.
fn split_chain(seq: &[PathGraph], chain: &Chain, ell: i64) -> ShiftPermutation {
    let m = seq.len();
    let total: i64 = chain.lengths.iter().sum();
    let mut q = 0;
    let mut acc = 0;
    while q < chain.lengths.len() {
        acc += chain.lengths[q];
        q += 1;
        if 2 * acc >= total - ell {
            break;
        }
    }
    let incs: Vec<i64> = residuals(seq, &PathGraph::empty())
        .iter()
        .map(PathGraph::delta)
        .collect();
    let vd: i64 = incs.iter().sum();
    let index_set = |range: std::ops::Range<usize>| -> Vec<usize> {
        let mut keep = vec![true; m + 1];
        for h in range {
            let prev = if h == 0 { 0 } else { chain.chosen[h - 1] + 1 };
            let cur = chain.chosen[h] + 1;
            for x in prev + 1..cur {
                keep[x] = false;
            }
        }
        (1..=m).filter(|&x| keep[x]).collect()
    };
    let first = index_set(0..q);
    let kept: i64 = first.iter().map(|&x| incs[x - 1]).sum();
    let set = if 2 * kept >= vd {
        first
    } else {
        index_set(q..chain.chosen.len())
    };
    ShiftPermutation::from_set(m, &set).expect("contains m")
}

fn min_induced_vec_delta(seq: &[PathGraph], sigma: &ShiftPermutation) -> i64 {
    (1..=seq.len())
        .map(|j| vec_value(&sigma.induced(j).reorder(seq), Objective::VecDelta))
        .min()
        .unwrap_or(0)
}

/// A shift permutation with a `vec_lambda` bound whose every induced order
/// `σ̃_j` also keeps a `vec_delta` bound: `k/8 − ℓ/2` and `vec_delta/2` in
/// premain mode (requires `vec_delta = 1`), `(g − 3ℓ)/4` and `k/(4g)` in gap mode.
pub fn construct_strong_shift(seq: &[PathGraph], mode: StrongMode) -> Result<StrongShiftResult> {
    let k = covered_k(seq)?;
    let m = seq.len();
    let ell = seq.iter().map(PathGraph::lambda).max().unwrap_or(0);
    let vd = vec_delta(seq, &PathGraph::empty());
    let (chain, lambda_bound, induced_bound) = match mode {
        StrongMode::Premain => {
            let (_, chain) = premain_ii_chain(seq)?;
            (
                Some(chain),
                k as f64 / 8.0 - ell as f64 / 2.0,
                vd as f64 / 2.0,
            )
        }
        StrongMode::Gap => {
            let g = gap(seq)?;
            let gf = *g.numer() as f64 / *g.denom() as f64;
            (
                gap_chain(seq, k, g),
                (gf - 3.0 * ell as f64) / 4.0,
                k as f64 / (4.0 * gf),
            )
        }
    };
    let sigma = match chain {
        Some(c) => split_chain(seq, &c, ell),
        None => {
            assert!(
                lambda_bound <= 0.0,
                "strong shift: no chain although the bound is positive"
            );
            ShiftPermutation::identity(m)
        }
    };
    let witness = shift_witness(seq, sigma.clone(), Objective::VecLambda, lambda_bound)
        .asserted("strong shift");
    let min_induced = min_induced_vec_delta(seq, &sigma);
    assert!(
        min_induced as f64 + slack(induced_bound) >= induced_bound,
        "strong shift: induced vec_delta {min_induced} < {induced_bound}"
    );
    Ok(StrongShiftResult {
        witness,
        min_induced_vec_delta: min_induced,
        induced_bound,
    })
}

/// The best of the identity, the shift that moves the longest graph first,
/// the gap construction and the strong gap construction, by
/// `vec_lambda_delta`; guarantees `√(k/8)`.
pub fn construct_main_ii(seq: &[PathGraph]) -> Result<WitnessResult> {
    let k = covered_k(seq)?;
    let m = seq.len();
    let guaranteed = (k as f64 / 8.0).sqrt();
    let mut candidates = vec![ShiftPermutation::identity(m)];
    let (jmax, _) = seq
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.lambda().cmp(&b.1.lambda()).then(b.0.cmp(&a.0)))
        .unwrap();
    candidates.push(ShiftPermutation::from_set(
        m,
        &(jmax + 1..=m).collect::<Vec<_>>(),
    )?);
    let g = gap(seq)?;
    if let Some(chain) = gap_chain(seq, k, g) {
        candidates.push(chain_shift(m, &chain));
        let ell = seq.iter().map(PathGraph::lambda).max().unwrap_or(0);
        candidates.push(split_chain(seq, &chain, ell));
    }
    let best = candidates
        .into_iter()
        .map(|s| shift_witness(seq, s, Objective::VecLambdaDelta, guaranteed))
        .fold(None, |best: Option<WitnessResult>, w| match best {
            Some(b) if b.achieved >= w.achieved => Some(b),
            _ => Some(w),
        })
        .expect("at least one candidate");
    Ok(best.asserted("main II"))
}

/// Checks the elementary identities and inequalities of conditional
/// `vec_delta`, returning the names of those that fail. `f0 ⊆ f` is required
/// for monotonicity and ignored otherwise; `split` cuts `seq` for the chain rule.
pub fn delta_property_violations(
    seq: &[PathGraph],
    f0: &PathGraph,
    f: &PathGraph,
    split: usize,
) -> Vec<&'static str> {
    let mut bad = Vec::new();
    let cond = vec_delta(seq, f);
    if f0.is_subgraph_of(f) && cond > vec_delta(seq, f0) {
        bad.push("monotone");
    }
    let mut with_f = vec![f.clone()];
    with_f.extend_from_slice(seq);
    if cond != vec_delta(&with_f, &PathGraph::empty()) - f.delta() {
        bad.push("prepend");
    }
    let union = PathGraph::union_all(seq);
    let cut: Vec<PathGraph> = seq.iter().map(|g| g.ominus(f)).collect();
    if union.ominus(f).delta() > cond || cond > vec_delta(&cut, &PathGraph::empty()) {
        bad.push("sandwich");
    }
    let split = split.min(seq.len());
    let (head, tail) = seq.split_at(split);
    let mid = PathGraph::union_all(head).union(f);
    if cond != vec_delta(head, f) + vec_delta(tail, &mid) {
        bad.push("chain");
    }
    let mut prefixes = Vec::with_capacity(seq.len());
    let mut acc = PathGraph::empty();
    for g in seq {
        acc = acc.union(g);
        prefixes.push(acc.clone());
    }
    if vec_delta(seq, &PathGraph::empty()) != vec_delta(&prefixes, &PathGraph::empty()) {
        bad.push("prefix unions");
    }
    bad
}

/// `vec_delta` over every induced order `σ̃_j` is at least the fresh `Δ`
/// retained at the positions of `I`. Returns the first failing `j`.
pub fn induced_order_violation(seq: &[PathGraph], sigma: &ShiftPermutation) -> Option<usize> {
    let incs: Vec<i64> = residuals(seq, &PathGraph::empty())
        .iter()
        .map(PathGraph::delta)
        .collect();
    let kept: i64 = sigma.index_set().iter().map(|&i| incs[i - 1]).sum();
    (1..=seq.len()).find(|&j| vec_value(&sigma.induced(j).reorder(seq), Objective::VecDelta) < kept)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapBounds {
    pub gap: Ratio<i64>,
    /// `vec_delta ≥ k/(2g)`.
    pub whole: bool,
    /// `vec_delta(·|F) ≥ (k − λ(F)Δ(F))/(2g) − 2Δ(F)`.
    pub conditioned: bool,
    /// The same with `− Δ(F)` in place of `− 2Δ(F)`.
    pub conditioned_sharp: bool,
    /// `vec_delta(G_j, rest) ≥ (k − λ(G_j)Δ(G_j))/(4g)` for every `j`.
    pub moved_first: bool,
}

impl GapBounds {
    pub fn holds(&self) -> bool {
        self.whole && self.conditioned && self.moved_first
    }
}

/// Evaluates the `gap` lower bounds on `vec_delta` exactly.
pub fn check_gap_bounds(seq: &[PathGraph], f: &PathGraph) -> Result<GapBounds> {
    let k = covered_k(seq)?;
    let g = gap(seq)?;
    let r = Ratio::from_integer;
    let vd = vec_delta(seq, &PathGraph::empty());
    let whole = r(vd) >= r(k) / (g * 2);
    let cond = r(vec_delta(seq, f));
    let base = r(k - f.lambda() * f.delta()) / (g * 2);
    let conditioned = cond >= base - r(2 * f.delta());
    let conditioned_sharp = cond >= base - r(f.delta());
    let moved_first = (0..seq.len()).all(|j| {
        let mut order = vec![seq[j].clone()];
        order.extend(
            seq.iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, x)| x.clone()),
        );
        r(vec_delta(&order, &PathGraph::empty()))
            >= r(k - seq[j].lambda() * seq[j].delta()) / (g * 4)
    });
    Ok(GapBounds {
        gap: g,
        whole,
        conditioned,
        conditioned_sharp,
        moved_first,
    })
}

/// Every unrestricted ordering value is bounded by this optimum; used to
/// sanity-check constructions on small inputs (`m ≤ 8`).
pub fn best_permutation_value(seq: &[PathGraph], objective: Objective) -> Result<i64> {
    crate::error::check_limit("graphs", seq.len() as u64, 8)?;
    let m = seq.len();
    let mut best = 0;
    let mut perm: Vec<usize> = (1..=m).collect();
    permute(&mut perm, 0, &mut |p| {
        best = best.max(vec_value(&permuted(seq, p), objective))
    });
    Ok(best)
}

fn permute(v: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == v.len() {
        f(v);
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        permute(v, i + 1, f);
        v.swap(i, j);
    }
}

pub fn measures_of(seq: &[PathGraph]) -> crate::pathgraph::VecMeasures {
    vec_measures(seq, &PathGraph::empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shiftperm::best_shift;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn edges(k: i64) -> Vec<PathGraph> {
        (1..=k).map(PathGraph::edge).collect()
    }

    /// Random intervals plus whatever single edges are needed to cover `Path_k`.
    fn random_covering(rng: &mut ChaCha8Rng, k: i64, max_len: i64) -> Vec<PathGraph> {
        let mut seq = Vec::new();
        for _ in 0..rng.gen_range(1..=k as usize) {
            let s = rng.gen_range(0..k);
            let t = (s + rng.gen_range(1..=max_len)).min(k);
            let mut g = PathGraph::path(s, t).unwrap();
            if rng.gen_bool(0.3) {
                let s2 = rng.gen_range(0..k);
                g = g.union(&PathGraph::path(s2, (s2 + 1).min(k)).unwrap());
            }
            seq.push(g);
        }
        let u = PathGraph::union_all(&seq);
        for e in 1..=k {
            if !u.has_edge(e) {
                seq.push(PathGraph::edge(e));
            }
        }
        seq.shuffle(rng);
        seq
    }

    /// A covering with `vec_delta = 1`: every graph touches the prefix union.
    fn random_connected(rng: &mut ChaCha8Rng, k: i64) -> Vec<PathGraph> {
        let s = rng.gen_range(0..k);
        let mut lo = s;
        let mut hi = s + 1;
        let mut seq = vec![PathGraph::path(lo, hi).unwrap()];
        while lo > 0 || hi < k {
            let a = rng.gen_range((lo - 3).max(0)..=hi.min(k - 1));
            let b = rng.gen_range((a + 1).max(lo)..=(hi + 3).min(k));
            let mut g = PathGraph::path(a, b).unwrap();
            if rng.gen_bool(0.3) {
                let (x, y) = (rng.gen_range(lo..hi), rng.gen_range(lo..hi));
                g = g.union(&PathGraph::path(x.min(y), x.max(y) + 1).unwrap());
            }
            lo = lo.min(a);
            hi = hi.max(b);
            seq.push(g);
        }
        seq
    }

    #[test]
    fn numerical_examples() {
        assert!(check_numerical(&[0.0; 4], &[0.0; 4], 2.5).unwrap());
        assert!(check_numerical(&[1.0], &[1.0], 2.0).unwrap());
        assert!(check_numerical(&[-1.0], &[1.0], 2.0).is_err());
        assert!(check_numerical(&[1.0], &[1.0], 1.0).is_err());
        assert!(check_numerical(&[1.0], &[1.0, 2.0], 2.0).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20_000 {
            let m = rng.gen_range(1..=10);
            let d = rng.gen_range(1.0001..=6.0);
            let xs: Vec<f64> = (0..m)
                .map(|_| rng.gen_range(0.0..100.0f64).powi(2))
                .collect();
            let ys: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..20.0)).collect();
            assert!(check_numerical(&xs, &ys, d).unwrap(), "{xs:?} {ys:?} {d}");
        }
    }

    #[test]
    fn premain_i_examples() {
        let w = construct_premain_i(&edges(12)).unwrap();
        assert_eq!(w.achieved, 6);
        assert_eq!(construct_premain_i(&edges(1)).unwrap().achieved, 1);
        assert!(construct_premain_i(&[PathGraph::path(0, 2).unwrap()]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..300 {
            let k = rng.gen_range(1..=30);
            let mut cov: Vec<PathGraph> = (0..rng.gen_range(1..=k))
                .map(|_| {
                    PathGraph::from_edges(
                        (0..rng.gen_range(1..4)).map(|_| 1 + 2 * rng.gen_range(0..(k + 1) / 2)),
                    )
                })
                .filter(|g| g.lambda() == 1)
                .collect();
            let u = PathGraph::union_all(&cov);
            cov.extend((1..=k).filter(|&e| !u.has_edge(e)).map(PathGraph::edge));
            cov.shuffle(&mut rng);
            assert!(construct_premain_i(&cov).unwrap().holds());
        }
    }

    #[test]
    fn premain_ii_examples() {
        let std = edges(25);
        let w = construct_premain_ii(&std).unwrap();
        assert!(w.achieved as f64 >= 25.0 / 4.0 && w.achieved <= 13);
        let rev: Vec<PathGraph> = edges(25).into_iter().rev().collect();
        let w = construct_premain_ii(&rev).unwrap();
        assert!(w.achieved <= best_shift(&rev, Objective::VecLambda).unwrap().1);
        let nested: Vec<PathGraph> = (1..=20).map(|t| PathGraph::path(0, t).unwrap()).collect();
        assert!(construct_premain_ii(&nested).unwrap().achieved >= 5);
        assert!(construct_premain_ii(&[
            PathGraph::edge(1),
            PathGraph::edge(3),
            PathGraph::edge(2)
        ])
        .is_err());
    }

    #[test]
    fn premain_ii_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..500 {
            let k = rng.gen_range(1..=30);
            let seq = random_connected(&mut rng, k);
            assert_eq!(vec_delta(&seq, &PathGraph::empty()), 1, "{seq:?}");
            let w = construct_premain_ii(&seq).unwrap();
            assert!(w.achieved <= best_shift(&seq, Objective::VecLambda).unwrap().1);
            let s = construct_strong_shift(&seq, StrongMode::Premain).unwrap();
            assert!(s.witness.holds());
        }
    }

    #[test]
    fn main_i_examples() {
        assert_eq!(
            construct_main_i(&[PathGraph::path_k(7)]).unwrap().achieved,
            7
        );
        assert!(construct_main_i(&edges(16)).unwrap().holds());
        let mut two: Vec<PathGraph> = vec![
            PathGraph::path(0, 8).unwrap(),
            PathGraph::path(8, 16).unwrap(),
        ];
        two.extend(edges(16));
        assert!(construct_main_i(&two).unwrap().achieved >= 1);
        assert!(construct_main_i(&[PathGraph::edge(2)]).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..500 {
            let k = rng.gen_range(1..=30);
            let cov = random_covering(&mut rng, k, 8);
            let w = construct_main_i(&cov).unwrap();
            if cov.len() <= 6 {
                assert!(
                    w.achieved <= best_permutation_value(&cov, Objective::VecLambdaDelta).unwrap()
                );
            }
        }
    }

    #[test]
    fn main_ii_and_gap_strong() {
        assert_eq!(
            construct_main_ii(&[PathGraph::path_k(9)]).unwrap().achieved,
            9
        );
        let std = edges(25);
        let w = construct_main_ii(&std).unwrap();
        assert!(w.achieved <= best_shift(&std, Objective::VecLambdaDelta).unwrap().1);
        let stride: Vec<PathGraph> = (0..5)
            .flat_map(|r| (0..5).map(move |c| PathGraph::edge(5 * c + r + 1)))
            .collect();
        let w = construct_main_ii(&stride).unwrap();
        assert!(w.achieved <= best_shift(&stride, Objective::VecLambdaDelta).unwrap().1);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let k = rng.gen_range(1..=30);
            let seq = random_covering(&mut rng, k, 6);
            let w = construct_main_ii(&seq).unwrap();
            assert!(w.achieved <= best_shift(&seq, Objective::VecLambdaDelta).unwrap().1);
            construct_strong_shift(&seq, StrongMode::Gap).unwrap();
        }
    }

    #[test]
    fn delta_properties_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..1000 {
            let k = rng.gen_range(2..=20);
            let seq = random_covering(&mut rng, k, 5);
            let f = PathGraph::from_edges((0..rng.gen_range(0..5)).map(|_| rng.gen_range(1..=k)));
            let f0 = PathGraph::from_edges(f.edges().filter(|_| rng.gen_bool(0.5)));
            let split = rng.gen_range(0..=seq.len());
            assert!(delta_property_violations(&seq, &f0, &f, split).is_empty());
            let b = check_gap_bounds(&seq, &f).unwrap();
            assert!(b.holds(), "{seq:?} {f:?} {b:?}");
            let set: Vec<usize> = (1..=seq.len())
                .filter(|&i| i == seq.len() || rng.gen_bool(0.4))
                .collect();
            let sigma = ShiftPermutation::from_set(seq.len(), &set).unwrap();
            assert_eq!(induced_order_violation(&seq, &sigma), None);
        }
    }

    #[test]
    fn serializes() {
        let w = construct_premain_ii(&edges(5)).unwrap();
        let json = serde_json::to_string(&w).unwrap();
        let back: WitnessResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
        assert_eq!(w.ordering.apply(&edges(5)).len(), 5);
    }
}
