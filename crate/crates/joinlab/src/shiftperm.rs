//! Shift permutations `σ_I` (permutations of `[m]` with `σ(j) ≥ j − 1`).
//!
//! All indices are 1-based.  `σ_I` splits `[m]` into blocks
//! `(i_{h-1}, i_h]` and rotates each block right by one, so the block's last
//! element comes first.

use serde::{Deserialize, Serialize};

use crate::error::{check_limit, LabError, Result};
use crate::pathgraph::{residuals, PathGraph};

pub const DEFAULT_ENUM_LIMIT: usize = 25;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShiftPermutation {
    m: usize,
    index_set: Vec<usize>,
    perm: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawShift {
    m: usize,
    #[serde(rename = "I")]
    index_set: Vec<usize>,
}

impl Serialize for ShiftPermutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawShift {
            m: self.m,
            index_set: self.index_set.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ShiftPermutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawShift::deserialize(d)?;
        ShiftPermutation::from_set(raw.m, &raw.index_set).map_err(serde::de::Error::custom)
    }
}

impl ShiftPermutation {
    pub fn from_set(m: usize, set: &[usize]) -> Result<Self> {
        let mut index_set = set.to_vec();
        index_set.sort_unstable();
        index_set.dedup();
        if m == 0 {
            return Err(LabError::InvalidIndexSet {
                m,
                reason: "m must be positive".into(),
            });
        }
        if index_set.last() != Some(&m) {
            return Err(LabError::InvalidIndexSet {
                m,
                reason: "I must contain m".into(),
            });
        }
        if index_set[0] == 0 {
            return Err(LabError::InvalidIndexSet {
                m,
                reason: "indices are 1-based".into(),
            });
        }
        let mut perm = vec![0; m];
        let mut prev = 0;
        for &i in &index_set {
            perm[prev] = i;
            for j in prev + 2..=i {
                perm[j - 1] = j - 1;
            }
            prev = i;
        }
        Ok(ShiftPermutation { m, index_set, perm })
    }

    pub fn identity(m: usize) -> Self {
        Self::from_set(m, &(1..=m).collect::<Vec<_>>()).expect("identity")
    }

    /// Recovers the index set of a permutation given as its images `σ(1..m)`.
    pub fn from_perm(perm: &[usize]) -> Result<Self> {
        let set = to_set(perm)?;
        Self::from_set(perm.len(), &set)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn index_set(&self) -> &[usize] {
        &self.index_set
    }

    /// Images `σ(1), …, σ(m)`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply(&self, j: usize) -> usize {
        self.perm[j - 1]
    }

    /// Reorders a sequence: position `j` receives `seq[σ(j)]`.
    pub fn reorder<T: Clone>(&self, seq: &[T]) -> Vec<T> {
        self.perm.iter().map(|&p| seq[p - 1].clone()).collect()
    }

    /// The induced permutation `σ̃_j`.
    pub fn induced(&self, j: usize) -> ShiftPermutation {
        assert!((1..=self.m).contains(&j), "index out of range");
        let upto = match self.index_set.binary_search(&j) {
            Ok(h) => {
                if h == 0 {
                    0
                } else {
                    self.index_set[h - 1]
                }
            }
            Err(_) => j - 1,
        };
        let mut set = self.index_set.clone();
        set.extend(1..=upto);
        Self::from_set(self.m, &set).expect("superset of a valid index set")
    }
}

/// `{j : {σ(1..j)} = [j]}` after validating bijectivity and the shift property.
pub fn to_set(perm: &[usize]) -> Result<Vec<usize>> {
    let m = perm.len();
    let mut seen = vec![false; m + 1];
    for (idx, &p) in perm.iter().enumerate() {
        if p == 0 || p > m || seen[p] {
            return Err(LabError::InvalidShift(format!(
                "{perm:?} is not a permutation of [{m}]"
            )));
        }
        seen[p] = true;
        if p + 1 < idx + 1 {
            return Err(LabError::InvalidShift(format!(
                "σ({}) = {} < {}",
                idx + 1,
                p,
                idx
            )));
        }
    }
    let mut out = Vec::new();
    let mut mx = 0;
    for (idx, &p) in perm.iter().enumerate() {
        mx = mx.max(p);
        if mx == idx + 1 {
            out.push(idx + 1);
        }
    }
    Ok(out)
}

/// All `2^{m-1}` shift permutations, by increasing `|I|` then lexicographically.
pub fn enumerate_all(m: usize, limit: usize) -> Result<impl Iterator<Item = ShiftPermutation>> {
    if m == 0 {
        return Err(LabError::InvalidParameter("m must be positive".into()));
    }
    check_limit("m", m as u64, limit as u64)?;
    Ok((0..m).flat_map(move |size| {
        Combinations::new(m - 1, size).map(move |mut c| {
            c.push(m);
            ShiftPermutation::from_set(m, &c).expect("valid index set")
        })
    }))
}

/// Lexicographic `r`-subsets of `[n]`.
struct Combinations {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, r: usize) -> Self {
        let cur = if r <= n {
            Some((1..=r).collect())
        } else {
            None
        };
        Combinations { n, cur }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let r = out.len();
        let mut c = out.clone();
        let mut i = r;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if c[i] < self.n - (r - 1 - i) {
                c[i] += 1;
                for j in i + 1..r {
                    c[j] = c[j - 1] + 1;
                }
                self.cur = Some(c);
                break;
            }
        }
        Some(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    VecDelta,
    VecLambda,
    VecLambdaDelta,
}

impl Objective {
    pub fn of_residual(self, r: &PathGraph) -> i64 {
        match self {
            Objective::VecDelta => r.delta(),
            Objective::VecLambda => r.lambda(),
            Objective::VecLambdaDelta => r.lambda() * r.delta(),
        }
    }

    pub fn eval(self, seq: &[PathGraph], f: &PathGraph) -> i64 {
        residuals(seq, f).iter().map(|r| self.of_residual(r)).sum()
    }
}

/// The best shift permutation for `objective`, ties broken by the smallest
/// `|I|` and then the lexicographically smallest `I`.
///
/// The prefix union after each block of `σ_I` is `G_1 ∪ … ∪ G_{i_h}`
/// whatever the earlier blocks were, so the objective is a sum of independent
/// block values and a longest-path recursion over block boundaries finds the
/// optimum in `O(m^3)` graph operations.
pub fn best_shift(seq: &[PathGraph], objective: Objective) -> Result<(ShiftPermutation, i64)> {
    let m = seq.len();
    if m == 0 {
        return Err(LabError::InvalidParameter("empty sequence".into()));
    }
    let mut prefix = vec![PathGraph::empty()];
    for g in seq {
        let next = prefix.last().unwrap().union(g);
        prefix.push(next);
    }
    // block(a, b): value of (G_b, G_{a+1}, …, G_{b-1}) given G_1 ∪ … ∪ G_a
    let block = |a: usize, b: usize| -> i64 {
        let mut acc = prefix[a].clone();
        let mut total = objective.of_residual(&seq[b - 1].ominus(&acc));
        acc = acc.union(&seq[b - 1]);
        for g in &seq[a..b - 1] {
            total += objective.of_residual(&g.ominus(&acc));
            acc = acc.union(g);
        }
        total
    };
    // best[a] = (value, -blocks) from boundary a to m
    let mut best: Vec<(i64, i64)> = vec![(i64::MIN, 0); m + 1];
    best[m] = (0, 0);
    let mut vals = vec![vec![0i64; m + 1]; m + 1];
    for a in (0..m).rev() {
        for b in a + 1..=m {
            let v = block(a, b);
            vals[a][b] = v;
            let cand = (v + best[b].0, best[b].1 - 1);
            if cand > best[a] {
                best[a] = cand;
            }
        }
    }
    let mut set = Vec::new();
    let mut a = 0;
    while a < m {
        let b = (a + 1..=m)
            .find(|&b| (vals[a][b] + best[b].0, best[b].1 - 1) == best[a])
            .expect("optimal continuation exists");
        set.push(b);
        a = b;
    }
    Ok((ShiftPermutation::from_set(m, &set)?, best[0].0))
}

/// Exhaustive version of [`best_shift`] over [`enumerate_all`].
pub fn best_shift_bruteforce(
    seq: &[PathGraph],
    objective: Objective,
    limit: usize,
) -> Result<(ShiftPermutation, i64)> {
    let mut best: Option<(ShiftPermutation, i64)> = None;
    for s in enumerate_all(seq.len(), limit)? {
        let v = objective.eval(&s.reorder(seq), &PathGraph::empty());
        if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
            best = Some((s, v));
        }
    }
    Ok(best.expect("at least one permutation"))
}
