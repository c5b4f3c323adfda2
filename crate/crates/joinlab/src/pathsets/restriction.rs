//! The random restriction `Ξ` (sub-permutation matrices induced by sparse
//! Bernoulli matrices), restricted minterm densities, and the random join
//! trees whose strictification is studied at tiny `k`.

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::minterms::{minterms, BlowupGraph, MintermMode};
use crate::error::{check_limit, LabError, Result};
use crate::formulas::{DeMorgan, Var};
use crate::jointree::JoinTree;
use crate::pathgraph::PathGraph;

/// `ζ^{(1..k)}` and the induced `ξ^{(1..k)}`; each matrix is the list of its
/// 1-entries `(a, b)`, 1-based, in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictionSample {
    pub n: usize,
    pub seed: Option<u64>,
    pub zeta: Vec<Vec<(usize, usize)>>,
    pub xi: Vec<Vec<(usize, usize)>>,
}

impl RestrictionSample {
    /// Derives `ξ` from given `ζ`: an entry survives iff it is the only 1
    /// in its row and in its column.
    pub fn from_zeta(n: usize, zeta: Vec<Vec<(usize, usize)>>) -> Result<Self> {
        let mut xi = Vec::with_capacity(zeta.len());
        for m in &zeta {
            if m.iter().any(|&(a, b)| a == 0 || b == 0 || a > n || b > n) {
                return Err(LabError::InvalidInput(format!("ζ entry outside [1, {n}]²")));
            }
            let (mut rows, mut cols) = (vec![0usize; n + 1], vec![0usize; n + 1]);
            for &(a, b) in m {
                rows[a] += 1;
                cols[b] += 1;
            }
            let mut kept: Vec<(usize, usize)> = m
                .iter()
                .copied()
                .filter(|&(a, b)| rows[a] == 1 && cols[b] == 1)
                .collect();
            kept.sort_unstable();
            kept.dedup();
            xi.push(kept);
        }
        Ok(RestrictionSample {
            n,
            seed: None,
            zeta,
            xi,
        })
    }

    pub fn k(&self) -> usize {
        self.zeta.len()
    }

    /// `Ξ` as a subgraph of the blow-up.
    pub fn xi_graph(&self) -> Result<BlowupGraph> {
        let mut g = BlowupGraph::empty(self.n, self.k())?;
        for (i, m) in self.xi.iter().enumerate() {
            for &(a, b) in m {
                g.insert(i + 1, a, b);
            }
        }
        Ok(g)
    }

    /// Every `ξ^{(i)}` has at most one 1 per row and per column.
    pub fn xi_is_sub_permutation(&self) -> bool {
        self.xi.iter().all(|m| {
            let (mut rows, mut cols) = (vec![false; self.n + 1], vec![false; self.n + 1]);
            m.iter().all(|&(a, b)| {
                !std::mem::replace(&mut rows[a], true) && !std::mem::replace(&mut cols[b], true)
            })
        })
    }
}

/// Samples `ζ` with i.i.d. `Bernoulli(n^{−1−1/(2k)})` entries and derives `ξ`.
pub fn sample_xi(n: usize, k: usize, seed: u64) -> Result<RestrictionSample> {
    if n < 2 || k == 0 {
        return Err(LabError::InvalidParameter(format!(
            "need n ≥ 2 and k ≥ 1, got n = {n}, k = {k}"
        )));
    }
    let p = (n as f64).powf(-1.0 - 1.0 / (2.0 * k as f64));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zeta = (0..k)
        .map(|_| {
            let mut m = Vec::new();
            for a in 1..=n {
                for b in 1..=n {
                    if rng.gen_bool(p) {
                        m.push((a, b));
                    }
                }
            }
            m
        })
        .collect();
    let mut s = RestrictionSample::from_zeta(n, zeta)?;
    s.seed = Some(seed);
    Ok(s)
}

/// `f^{∪Ξ}`: positive literals on edges of `Ξ` become 1, negative ones 0.
pub fn restrict_formula(f: &DeMorgan, xi: &BlowupGraph) -> DeMorgan {
    match f {
        DeMorgan::Lit(l) if matches!(l.var, Var::Matrix(..)) && xi.var(l.var) => {
            DeMorgan::Const(l.positive)
        }
        DeMorgan::Const(_) | DeMorgan::Lit(_) => f.clone(),
        DeMorgan::And(l, r) => DeMorgan::and(restrict_formula(l, xi), restrict_formula(r, xi)),
        DeMorgan::Or(l, r) => DeMorgan::or(restrict_formula(l, xi), restrict_formula(r, xi)),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MonteCarloReport {
    pub trials: usize,
    pub successes: usize,
    pub frequency: f64,
    /// `(trial seed, |M_{Path_k}(f^{∪Ξ})|, density)` per trial.
    pub rows: Vec<(u64, usize, f64)>,
}

/// `|M_{Path_k}(f^{∪Ξ})|` for one restriction, and whether its density
/// reaches `1/(2n²)`.
pub fn mpath2_trial(
    f: &dyn Fn(&BlowupGraph) -> bool,
    sample: &RestrictionSample,
    budget: u64,
) -> Result<(usize, bool)> {
    let (n, k) = (sample.n, sample.k());
    let xi = sample.xi_graph()?;
    let restricted = |x: &BlowupGraph| f(&x.union(&xi));
    let m = minterms(
        &restricted,
        &PathGraph::path_k(k as i64),
        MintermMode::M,
        n as u32,
        k as u32,
        budget,
    )?;
    // |M| / n^{k+1} ≥ 1/(2n²)  ⇔  2·|M| ≥ n^{k−1}
    let ok = 2 * m.len() as u128 >= (n as u128).pow(k as u32 - 1);
    Ok((m.len(), ok))
}

/// Frequency over `trials` restrictions (trial `i` uses seed `seed + i`) of
/// `μ(M_{Path_k}(f^{∪Ξ})) ≥ 1/(2n²)`.
pub fn montecarlo_mpath2(
    f: &dyn Fn(&BlowupGraph) -> bool,
    n: usize,
    k: usize,
    trials: usize,
    seed: u64,
    budget: u64,
) -> Result<MonteCarloReport> {
    let mut rows = Vec::with_capacity(trials);
    let mut successes = 0;
    let cells = (n as f64).powi(k as i32 + 1);
    for i in 0..trials as u64 {
        let s = seed.wrapping_add(i);
        let (count, ok) = mpath2_trial(f, &sample_xi(n, k, s)?, budget)?;
        successes += ok as usize;
        rows.push((s, count, count as f64 / cells));
    }
    Ok(MonteCarloReport {
        trials,
        successes,
        frequency: successes as f64 / trials.max(1) as f64,
        rows,
    })
}

pub const MAX_EPS1_K: usize = 4;
pub const MAX_EPS1_T: usize = 14;

/// `strict(T_t)` for a complete binary join tree of depth `t` whose `2^t`
/// leaves are labeled `E_i` with probability `p_i`, strictified bottom-up.
pub fn eps1_sample<R: Rng>(t: usize, labels: &WeightedIndex<f64>, rng: &mut R) -> JoinTree {
    if t == 0 {
        return JoinTree::edge(labels.sample(rng) as i64 + 1);
    }
    let l = eps1_sample(t - 1, labels, rng);
    let r = eps1_sample(t - 1, labels, rng);
    let g = l.graph().union(r.graph());
    if *l.graph() == g {
        l
    } else if *r.graph() == g {
        r
    } else {
        JoinTree::join(&l, &r)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Eps1Row {
    pub t: usize,
    pub trials: usize,
    pub hits: usize,
    pub frequency: f64,
    pub std_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Eps1Report {
    pub k: usize,
    pub p: Vec<f64>,
    pub rows: Vec<Eps1Row>,
}

impl Eps1Report {
    pub fn row(&self, t: usize) -> Option<&Eps1Row> {
        self.rows.iter().find(|r| r.t == t)
    }
}

/// Frequency of `strict(T_t) = ⟨⟨E_1, …, E_k⟩⟩` for each `t`; trial `i`
/// uses seed `seed + i` on ChaCha stream `t`, so different depths are
/// sampled independently.
pub fn montecarlo_eps1(
    k: usize,
    ts: &[usize],
    p: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Eps1Report> {
    if k == 0 {
        return Err(LabError::InvalidParameter("k must be positive".into()));
    }
    check_limit("k", k as u64, MAX_EPS1_K as u64)?;
    if let Some(&t) = ts.iter().max() {
        check_limit("t", t as u64, MAX_EPS1_T as u64)?;
    }
    if p.len() != k || p.iter().any(|&x| !(x > 0.0)) || (p.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(LabError::InvalidParameter(format!(
            "{p:?} is not a positive distribution on {k} edges"
        )));
    }
    let labels =
        WeightedIndex::new(p.to_vec()).map_err(|e| LabError::InvalidParameter(e.to_string()))?;
    let target = JoinTree::sem(&(1..=k as i64).map(JoinTree::edge).collect::<Vec<_>>())?;
    let rows = ts
        .iter()
        .map(|&t| {
            let hits = (0..trials as u64)
                .filter(|&i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i));
                    rng.set_stream(t as u64);
                    eps1_sample(t, &labels, &mut rng) == target
                })
                .count();
            let q = hits as f64 / trials.max(1) as f64;
            Eps1Row {
                t,
                trials,
                hits,
                frequency: q,
                std_error: (q * (1.0 - q) / trials.max(1) as f64).sqrt(),
            }
        })
        .collect();
    Ok(Eps1Report {
        k,
        p: p.to_vec(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::{build_matrix_formula, right_deep, FormulaKind, MatrixTuple};
    use crate::pathsets::{bmm_evaluator, formula_evaluator, DEFAULT_EVAL_BUDGET};

    #[test]
    fn sampled_xi_is_a_sub_permutation() {
        for seed in 0..2000 {
            let s = sample_xi(20, 3, seed).unwrap();
            assert!(s.xi_is_sub_permutation());
            for (z, x) in s.zeta.iter().zip(&s.xi) {
                assert!(x.iter().all(|e| z.contains(e)));
            }
        }
        assert_eq!(sample_xi(20, 3, 9).unwrap(), sample_xi(20, 3, 9).unwrap());
        assert!(sample_xi(1, 3, 0).is_err());
    }

    #[test]
    fn xi_rule_examples() {
        let s = RestrictionSample::from_zeta(3, vec![vec![], vec![]]).unwrap();
        assert!(s.xi.iter().all(Vec::is_empty));
        // Column 2 holds two ones: both are dropped, (3,3) survives.
        let s = RestrictionSample::from_zeta(3, vec![vec![(1, 2), (2, 2), (3, 3)]]).unwrap();
        assert_eq!(s.xi, vec![vec![(3, 3)]]);
        // A row with two ones.
        let s = RestrictionSample::from_zeta(3, vec![vec![(1, 1), (1, 3), (2, 2)]]).unwrap();
        assert_eq!(s.xi, vec![vec![(2, 2)]]);
    }

    #[test]
    fn density_parameter_matches_the_empirical_rate() {
        let (n, k) = (40, 2);
        let p = (n as f64).powf(-1.25);
        let ones: usize = (0..400)
            .map(|s| {
                sample_xi(n, k, s)
                    .unwrap()
                    .zeta
                    .iter()
                    .map(Vec::len)
                    .sum::<usize>()
            })
            .sum();
        let expected = p * (n * n * k * 400) as f64;
        assert!(
            (ones as f64 - expected).abs() < 4.0 * expected.sqrt(),
            "{ones} vs {expected}"
        );
    }

    #[test]
    fn restricted_formula_computes_the_restricted_function() {
        let f = right_deep(&build_matrix_formula(FormulaKind::D, 3, 2, 1, 1, 1).unwrap());
        let s = RestrictionSample::from_zeta(3, vec![vec![(1, 2)], vec![(3, 1), (2, 2)]]).unwrap();
        let xi = s.xi_graph().unwrap();
        let g = restrict_formula(&f, &xi);
        for input in
            MatrixTuple::enumerate(3, 2, crate::formulas::InputClass::SubPermutation).unwrap()
        {
            let x = BlowupGraph::from_matrices(&input);
            assert_eq!(
                formula_evaluator(&g)(&x),
                formula_evaluator(&f)(&x.union(&xi))
            );
        }
    }

    #[test]
    fn empty_restriction_keeps_density_one_over_n_squared() {
        let (n, k) = (5, 2);
        let s = RestrictionSample::from_zeta(n, vec![vec![]; k]).unwrap();
        let (count, ok) = mpath2_trial(&bmm_evaluator(1, 1), &s, DEFAULT_EVAL_BUDGET).unwrap();
        assert_eq!(count, n.pow(k as u32 - 1));
        assert!(ok);
    }

    #[test]
    fn restriction_experiment_small_n_runs() {
        let r = montecarlo_mpath2(&bmm_evaluator(1, 1), 4, 2, 30, 1, DEFAULT_EVAL_BUDGET).unwrap();
        assert_eq!(r.rows.len(), 30);
        assert!((0.0..=1.0).contains(&r.frequency));
    }

    #[test]
    fn eps1_k1_always_hits() {
        let r = montecarlo_eps1(1, &[1, 3, 6], &[1.0], 50, 0).unwrap();
        assert!(r.rows.iter().all(|row| row.hits == 50));
    }

    #[test]
    fn eps1_k2_floor() {
        let r = montecarlo_eps1(2, &[2, 4, 6], &[0.5, 0.5], 2000, 3).unwrap();
        for row in &r.rows {
            assert!(row.frequency > 0.2, "{row:?}");
        }
        let skew = montecarlo_eps1(2, &[9], &[0.99, 0.01], 2000, 4).unwrap();
        assert!(skew.rows[0].hits > 0);
        assert!(montecarlo_eps1(2, &[2], &[0.7, 0.7], 10, 0).is_err());
        assert!(montecarlo_eps1(5, &[2], &[0.2; 5], 10, 0).is_err());
    }
}
