use std::collections::HashMap;
use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use super::{JoinTree, DEFAULT_MEMO_LIMIT};
use crate::error::{check_limit, LabError, Result};
use crate::pathgraph::{vec_delta, PathGraph};
use crate::shiftperm::{enumerate_all, DEFAULT_ENUM_LIMIT};

/// Largest `m` for which the sq recurrence is checked over all of `Perm([j])`.
pub const DEFAULT_PERM_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TightKind {
    I,
    II,
}

pub type TradeoffKind = TightKind;

pub(crate) fn int_root(k: i64, r: u32) -> Option<i64> {
    if r == 0 {
        return (k == 1).then_some(1);
    }
    let guess = (k as f64).powf(1.0 / r as f64).round() as i64;
    (guess.max(1) - 1..=guess + 1).find(|&l| l >= 1 && l.checked_pow(r) == Some(k))
}

/// The `Path_k`-join trees witnessing tightness of the two tradeoffs:
/// kind I is `[[T_1..T_ℓ]]` over `ℓ = k^{1/d}` consecutive pieces; kind II
/// is `⟨⟨·⟩⟩` over `ℓ²` pieces (`ℓ = k^{1/2d}`) taken column by column.
pub fn build_tight(kind: TightKind, k: i64, d: u32) -> Result<JoinTree> {
    if k < 1 {
        return Err(LabError::InvalidParameter(format!(
            "k = {k} must be positive"
        )));
    }
    let exp = match kind {
        TightKind::I => d,
        TightKind::II => 2 * d,
    };
    if int_root(k, exp).is_none() {
        return Err(LabError::InvalidParameter(format!(
            "k = {k} is not a perfect {exp}-th power"
        )));
    }
    Ok(tight_rec(kind, 0, k, d))
}

fn tight_rec(kind: TightKind, offset: i64, k: i64, d: u32) -> JoinTree {
    if k == 1 {
        return JoinTree::edge(offset + 1);
    }
    match kind {
        TightKind::I => {
            let l = int_root(k, d).expect("checked");
            let len = k / l;
            let parts: Vec<JoinTree> = (0..l)
                .map(|i| tight_rec(kind, offset + i * len, len, d - 1))
                .collect();
            JoinTree::sq(&parts).expect("nonempty")
        }
        TightKind::II => {
            let l = int_root(k, 2 * d).expect("checked");
            let len = k / (l * l);
            let mut parts = Vec::new();
            for j in 0..l {
                for i in 0..l {
                    parts.push(tight_rec(kind, offset + (i * l + j) * len, len, d - 1));
                }
            }
            JoinTree::sem(&parts).expect("nonempty")
        }
    }
}

/// `T_{1,k}` with `T_{s,t} = T_{s,t-1} ⊔ T_{s+1,t}` and single-edge leaves;
/// every branch covering is a chain of overlapping intervals, so `Ψ = 1`.
pub fn maximally_overlapping(k: i64) -> Result<JoinTree> {
    if k < 1 {
        return Err(LabError::InvalidParameter(format!(
            "k = {k} must be positive"
        )));
    }
    let mut row: Vec<JoinTree> = (1..=k).map(JoinTree::edge).collect();
    while row.len() > 1 {
        row = row
            .windows(2)
            .map(|w| JoinTree::join(&w[0], &w[1]))
            .collect();
    }
    Ok(row.pop().expect("k ≥ 1"))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffReport {
    pub holds: bool,
    pub lhs: i64,
    pub rhs: f64,
    pub depth: usize,
}

/// Checks `Ψ(T) ≥ d·λ(P)^{1/d}/(30e) + Δ(P) − d` (kind I, `d` = left depth)
/// or `Ψ(T) ≥ d·λ(P)^{1/2d}/√(32e) + Δ(P) − d` (kind II, `d` = sem depth),
/// where `P` is the root graph. For `d = 0` the right side is `Δ(P)`.
pub fn verify_tradeoff(t: &JoinTree, kind: TradeoffKind) -> Result<TradeoffReport> {
    let p = t.graph();
    let lhs = t.psi()?;
    let (depth, c, exp) = match kind {
        TightKind::I => (t.left_depth(), 1.0 / (30.0 * E), 1.0),
        TightKind::II => (
            t.sem_depth(DEFAULT_MEMO_LIMIT)?,
            1.0 / (32.0 * E).sqrt(),
            2.0,
        ),
    };
    let delta = p.delta() as f64;
    let rhs = if depth == 0 {
        delta
    } else {
        let d = depth as f64;
        c * d * (p.lambda() as f64).powf(1.0 / (exp * d)) + delta - d
    };
    Ok(TradeoffReport {
        holds: lhs as f64 >= rhs - 1e-9,
        lhs,
        rhs,
        depth,
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RecurrenceReport {
    pub psi: i64,
    pub checked: usize,
    pub violations: Vec<String>,
}

impl RecurrenceReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, lhs: i64, rhs: i64, what: impl FnOnce() -> String) {
        self.checked += 1;
        if lhs < rhs {
            self.violations.push(format!("{}: {lhs} < {rhs}", what()));
        }
    }

    fn merge(&mut self, other: RecurrenceReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }
}

pub(crate) fn for_each_perm(n: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], f: &mut impl FnMut(&[usize])) {
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

/// `Ψ(T_j ⊖ F)` memoized on `(j, F)`.
struct RestrictedPsi<'a> {
    parts: &'a [JoinTree],
    memo: HashMap<(usize, PathGraph), i64>,
}

impl RestrictedPsi<'_> {
    fn get(&mut self, j: usize, f: &PathGraph) -> Result<i64> {
        if let Some(&v) = self.memo.get(&(j, f.clone())) {
            return Ok(v);
        }
        let v = self.parts[j].ominus(f).psi()?;
        self.memo.insert((j, f.clone()), v);
        Ok(v)
    }
}

/// For `T = [[T_1..T_m]]`, every `j` and `τ ∈ Perm([j])` with `j* = τ^{-1}(j)`
/// and `F = G_τ(1) ∪ … ∪ G_τ(j*-1)`:
/// `Ψ(T) ≥ Ψ(T_j ⊖ F) − Δ(G_j ⊖ F) + vecΔ(G_τ(1), …, G_τ(j))`.
pub fn check_sq_recurrences(parts: &[JoinTree]) -> Result<RecurrenceReport> {
    let m = parts.len();
    check_limit("sq arity", m as u64, DEFAULT_PERM_LIMIT as u64)?;
    let t = JoinTree::sq(parts)?;
    let graphs: Vec<PathGraph> = parts.iter().map(|p| p.graph().clone()).collect();
    let mut rep = RecurrenceReport {
        psi: t.psi()?,
        ..Default::default()
    };
    let mut rp = RestrictedPsi {
        parts,
        memo: HashMap::new(),
    };
    let mut err = None;
    for j in 0..m {
        for_each_perm(j + 1, &mut |tau| {
            if err.is_some() {
                return;
            }
            let star = tau.iter().position(|&x| x == j).expect("τ permutes [j]");
            let f = PathGraph::union_all(tau[..star].iter().map(|&i| &graphs[i]));
            let seq: Vec<PathGraph> = tau.iter().map(|&i| graphs[i].clone()).collect();
            match rp.get(j, &f) {
                Ok(sub) => {
                    let rhs =
                        sub - graphs[j].ominus(&f).delta() + vec_delta(&seq, &PathGraph::empty());
                    rep.check(rep.psi, rhs, || {
                        format!("sq j={} τ={:?}", j + 1, one_based(tau))
                    });
                }
                Err(e) => err = Some(e),
            }
        });
    }
    match err {
        Some(e) => Err(e),
        None => Ok(rep),
    }
}

fn one_based(p: &[usize]) -> Vec<usize> {
    p.iter().map(|x| x + 1).collect()
}

/// For `T = ⟨⟨T_1..T_m⟩⟩`, every shift permutation `σ` and `h`:
/// (i) `Ψ(T) ≥ Ψ(T_σ(1)) + vecΔ(G_σ(2..m) | G_σ(1))`,
/// (ii) `Ψ(T) ≥ Ψ(T_σ(h)) + vecΔ(G_σ(h+1..m) | G_σ(1..h))`,
/// (iii) `Ψ(T) ≥ Ψ(T_j ⊖ F_j) − Δ(G_j ⊖ F_j) + vecΔ(G_σ̃_j(1..m))` with
/// `j = σ(h)`, `F_j = G_σ(1..h-1)`; and for every `j`,
/// `Ψ(T) ≥ Ψ(T_j) + vecΔ(G_1..G_m | G_j)`.
pub fn check_sem_recurrences(parts: &[JoinTree]) -> Result<RecurrenceReport> {
    let m = parts.len();
    let t = JoinTree::sem(parts)?;
    let graphs: Vec<PathGraph> = parts.iter().map(|p| p.graph().clone()).collect();
    let empty = PathGraph::empty();
    let mut rep = RecurrenceReport {
        psi: t.psi()?,
        ..Default::default()
    };
    let psi = rep.psi;
    let mut rp = RestrictedPsi {
        parts,
        memo: HashMap::new(),
    };
    let part_psi: Vec<i64> = (0..m).map(|j| rp.get(j, &empty)).collect::<Result<_>>()?;
    for sigma in enumerate_all(m, DEFAULT_ENUM_LIMIT)? {
        let seq = sigma.reorder(&graphs);
        let first = sigma.apply(1) - 1;
        rep.check(psi, part_psi[first] + vec_delta(&seq[1..], &seq[0]), || {
            format!("sem (i) σ={:?}", sigma.perm())
        });
        for h in 1..=m {
            let j = sigma.apply(h) - 1;
            let prefix = PathGraph::union_all(&seq[..h]);
            rep.check(psi, part_psi[j] + vec_delta(&seq[h..], &prefix), || {
                format!("sem (ii) σ={:?} h={h}", sigma.perm())
            });
            let f = PathGraph::union_all(&seq[..h - 1]);
            let tilde = sigma.induced(j + 1).reorder(&graphs);
            let rhs = rp.get(j, &f)? - graphs[j].ominus(&f).delta() + vec_delta(&tilde, &empty);
            rep.check(psi, rhs, || format!("sem (iii) σ={:?} h={h}", sigma.perm()));
        }
    }
    for j in 0..m {
        rep.check(psi, part_psi[j] + vec_delta(&graphs, &graphs[j]), || {
            format!("sem part bound j={}", j + 1)
        });
    }
    Ok(rep)
}

/// Runs the sq checks on the right spine of `T` and the sem checks on every
/// `⟨⟨·⟩⟩` decomposition of `T`.
pub fn check_psi_recurrences(t: &JoinTree) -> Result<RecurrenceReport> {
    let mut rep = RecurrenceReport {
        psi: t.psi()?,
        ..Default::default()
    };
    let spine = t.right_spine();
    if spine.len() >= 2 {
        rep.merge(check_sq_recurrences(&spine)?);
    }
    for parts in t.sem_decompositions(DEFAULT_MEMO_LIMIT)? {
        rep.merge(check_sem_recurrences(&parts)?);
    }
    Ok(rep)
}
