//! Binary (DeMorgan) formulas: conversions from AC⁰ formulas, truth tables
//! over edge variables, strictification, support trees and `⟨⟨·⟩⟩`-depth.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Formula, Literal, Shape, Var};
use crate::error::{check_limit, LabError, Result};
use crate::jointree::{strictify, JoinTree};
use crate::pathgraph::PathGraph;

pub const MAX_TRUTH_VARS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeMorgan {
    Const(bool),
    Lit(Literal),
    And(Box<DeMorgan>, Box<DeMorgan>),
    Or(Box<DeMorgan>, Box<DeMorgan>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeMorganStats {
    pub size: usize,
    pub depth: usize,
    pub and_depth: usize,
    pub left_depth: usize,
    pub and_left_depth: usize,
}

impl DeMorgan {
    pub fn x(i: usize) -> Self {
        DeMorgan::Lit(Literal::pos(Var::Edge(i)))
    }

    pub fn not_x(i: usize) -> Self {
        DeMorgan::Lit(Literal::neg(Var::Edge(i)))
    }

    pub fn and(l: DeMorgan, r: DeMorgan) -> Self {
        DeMorgan::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: DeMorgan, r: DeMorgan) -> Self {
        DeMorgan::Or(Box::new(l), Box::new(r))
    }

    fn gate(is_and: bool, l: DeMorgan, r: DeMorgan) -> Self {
        if is_and {
            Self::and(l, r)
        } else {
            Self::or(l, r)
        }
    }

    /// `(is_and, left, right)` for gates.
    pub fn parts(&self) -> Option<(bool, &DeMorgan, &DeMorgan)> {
        match self {
            DeMorgan::And(l, r) => Some((true, l, r)),
            DeMorgan::Or(l, r) => Some((false, l, r)),
            _ => None,
        }
    }

    pub fn stats(&self) -> DeMorganStats {
        match self.parts() {
            None => DeMorganStats {
                size: matches!(self, DeMorgan::Lit(_)) as usize,
                ..Default::default()
            },
            Some((is_and, l, r)) => {
                let (a, b) = (l.stats(), r.stats());
                let and = is_and as usize;
                DeMorganStats {
                    size: a.size + b.size,
                    depth: 1 + a.depth.max(b.depth),
                    and_depth: and + a.and_depth.max(b.and_depth),
                    left_depth: (a.left_depth + 1).max(b.left_depth),
                    and_left_depth: (a.and_left_depth + and).max(b.and_left_depth),
                }
            }
        }
    }

    pub fn eval_with(&self, x: &impl Fn(Var) -> bool) -> bool {
        match self {
            DeMorgan::Const(c) => *c,
            DeMorgan::Lit(l) => l.eval(x),
            DeMorgan::And(l, r) => l.eval_with(x) && r.eval_with(x),
            DeMorgan::Or(l, r) => l.eval_with(x) || r.eval_with(x),
        }
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            DeMorgan::Const(c) => Formula::Const(*c),
            DeMorgan::Lit(l) => Formula::Lit(*l),
            DeMorgan::And(l, r) => Formula::And(vec![l.to_formula(), r.to_formula()]),
            DeMorgan::Or(l, r) => Formula::Or(vec![l.to_formula(), r.to_formula()]),
        }
    }

    /// Accepts a formula whose gates all have exactly two children.
    pub fn from_formula(f: &Formula) -> Result<Self> {
        match f {
            Formula::Const(c) => Ok(DeMorgan::Const(*c)),
            Formula::Lit(l) => Ok(DeMorgan::Lit(*l)),
            Formula::And(cs) | Formula::Or(cs) => match cs.as_slice() {
                [l, r] => Ok(Self::gate(
                    matches!(f, Formula::And(_)),
                    Self::from_formula(l)?,
                    Self::from_formula(r)?,
                )),
                _ => Err(LabError::Arity(format!(
                    "DeMorgan gates take 2 inputs, got {}",
                    cs.len()
                ))),
            },
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_formula(&Formula::parse(text)?)
    }

    pub fn check_shape(&self, shape: Shape) -> Result<()> {
        self.to_formula().check_shape(shape)
    }

    /// `g↾H`: literals on edges outside `H` become the constant that
    /// falsifies a positive (resp. satisfies a negative) literal.
    pub fn restrict(&self, h: &PathGraph) -> DeMorgan {
        restrict(self, h)
    }
}

impl fmt::Display for DeMorgan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

fn identity(is_and: bool) -> DeMorgan {
    DeMorgan::Const(is_and)
}

fn right_fold(is_and: bool, mut items: Vec<DeMorgan>) -> DeMorgan {
    let Some(mut acc) = items.pop() else {
        return identity(is_and);
    };
    while let Some(x) = items.pop() {
        acc = DeMorgan::gate(is_and, x, acc);
    }
    acc
}

/// A balanced tree of binary gates over `items`, the left half taking the
/// extra item when the count is odd.
fn balanced_fold(is_and: bool, mut items: Vec<DeMorgan>) -> DeMorgan {
    match items.len() {
        0 => identity(is_and),
        1 => items.pop().unwrap(),
        m => {
            let right = items.split_off(m.div_ceil(2));
            DeMorgan::gate(
                is_and,
                balanced_fold(is_and, items),
                balanced_fold(is_and, right),
            )
        }
    }
}

fn convert(f: &Formula, fold: fn(bool, Vec<DeMorgan>) -> DeMorgan) -> DeMorgan {
    match f {
        Formula::Const(c) => DeMorgan::Const(*c),
        Formula::Lit(l) => DeMorgan::Lit(*l),
        Formula::And(cs) => fold(true, cs.iter().map(|c| convert(c, fold)).collect()),
        Formula::Or(cs) => fold(false, cs.iter().map(|c| convert(c, fold)).collect()),
    }
}

/// Each `m`-ary gate becomes a right-deep chain of `m−1` binary gates.
pub fn right_deep(f: &Formula) -> DeMorgan {
    convert(f, right_fold)
}

/// Each `m`-ary gate becomes a balanced tree of `m−1` binary gates.
pub fn balanced(f: &Formula) -> DeMorgan {
    convert(f, balanced_fold)
}

/// A sample of the randomized balanced conversion: every `m`-ary gate is
/// replaced by a balanced tree over `t·m` children drawn uniformly with
/// replacement from independent samples of its children.
pub fn randomized_conversion<R: Rng>(f: &Formula, t: usize, rng: &mut R) -> DeMorgan {
    assert!(t >= 1, "t must be positive");
    match f {
        Formula::Const(c) => DeMorgan::Const(*c),
        Formula::Lit(l) => DeMorgan::Lit(*l),
        Formula::And(cs) | Formula::Or(cs) => {
            let is_and = matches!(f, Formula::And(_));
            if cs.is_empty() {
                return identity(is_and);
            }
            let samples: Vec<DeMorgan> = cs
                .iter()
                .map(|c| randomized_conversion(c, t, rng))
                .collect();
            let picks = (0..t * cs.len())
                .map(|_| samples[rng.gen_range(0..cs.len())].clone())
                .collect();
            balanced_fold(is_and, picks)
        }
    }
}

/// The truth table of a `k`-variable function: bit `x` is the value on the
/// input with `X_i = bit i−1 of x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthTable {
    k: usize,
    words: Vec<u64>,
}

const VAR_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

impl TruthTable {
    fn valid(k: usize) -> u64 {
        if k >= 6 {
            u64::MAX
        } else {
            (1u64 << (1 << k)) - 1
        }
    }

    fn constant(k: usize, v: bool) -> Self {
        let w = if v { Self::valid(k) } else { 0 };
        TruthTable {
            k,
            words: vec![w; 1 << k.saturating_sub(6)],
        }
    }

    fn var(k: usize, i: usize) -> Self {
        let words = (0..1usize << k.saturating_sub(6))
            .map(|w| {
                if i <= 6 {
                    VAR_PATTERNS[i - 1] & Self::valid(k)
                } else if w >> (i - 7) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                }
            })
            .collect();
        TruthTable { k, words }
    }

    fn not(&self) -> Self {
        let v = Self::valid(self.k);
        TruthTable {
            k: self.k,
            words: self.words.iter().map(|w| !w & v).collect(),
        }
    }

    fn zip(&self, o: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        TruthTable {
            k: self.k,
            words: self
                .words
                .iter()
                .zip(&o.words)
                .map(|(a, b)| f(*a, *b))
                .collect(),
        }
    }

    pub fn get(&self, x: u64) -> bool {
        self.words[(x >> 6) as usize] >> (x & 63) & 1 == 1
    }

    pub fn is_constant(&self) -> bool {
        self.words.iter().all(|&w| w == 0) || *self == Self::constant(self.k, true)
    }

    /// Whether the function changes when `X_i` is flipped somewhere.
    pub fn depends_on(&self, i: usize) -> bool {
        if i <= 6 {
            let s = 1u32 << (i - 1);
            let low = !VAR_PATTERNS[i - 1];
            self.words
                .iter()
                .any(|&w| ((w >> s) ^ w) & low & Self::valid(self.k) != 0)
        } else {
            let bit = 1usize << (i - 7);
            (0..self.words.len()).any(|w| self.words[w] != self.words[w ^ bit])
        }
    }
}

/// The truth table of an edge-variable formula.
pub fn truth_table(g: &DeMorgan, k: usize) -> Result<TruthTable> {
    check_limit("truth-table variables", k as u64, MAX_TRUTH_VARS as u64)?;
    g.check_shape(Shape::Edges { k })?;
    Ok(table(g, k))
}

fn table(g: &DeMorgan, k: usize) -> TruthTable {
    match g {
        DeMorgan::Const(c) => TruthTable::constant(k, *c),
        DeMorgan::Lit(l) => match l.var {
            Var::Edge(i) if l.positive => TruthTable::var(k, i),
            Var::Edge(i) => TruthTable::var(k, i).not(),
            Var::Matrix(..) => unreachable!("shape checked"),
        },
        DeMorgan::And(l, r) => table(l, k).zip(&table(r, k), |a, b| a & b),
        DeMorgan::Or(l, r) => table(l, k).zip(&table(r, k), |a, b| a | b),
    }
}

fn strict_rec(g: &DeMorgan, k: usize) -> (DeMorgan, TruthTable) {
    match g.parts() {
        None => (g.clone(), table(g, k)),
        Some((is_and, l, r)) => {
            let (sl, tl) = strict_rec(l, k);
            let (sr, tr) = strict_rec(r, k);
            let t = if is_and {
                tl.zip(&tr, |a, b| a & b)
            } else {
                tl.zip(&tr, |a, b| a | b)
            };
            if tl == t {
                (sl, t)
            } else if tr == t {
                (sr, t)
            } else {
                (DeMorgan::gate(is_and, sl, sr), t)
            }
        }
    }
}

/// The equivalent strict formula: a gate one of whose inputs is equivalent
/// to the gate is replaced by that input (the left one first).
pub fn strictify_demorgan(g: &DeMorgan, k: usize) -> Result<DeMorgan> {
    truth_table(g, k)?;
    Ok(strict_rec(g, k).0)
}

pub fn is_strict_demorgan(g: &DeMorgan, k: usize) -> Result<bool> {
    Ok(strictify_demorgan(g, k)? == *g)
}

/// The coordinates the computed function depends on, as edges of `Path_k`.
pub fn support(g: &DeMorgan, k: usize) -> Result<PathGraph> {
    let t = truth_table(g, k)?;
    Ok(PathGraph::from_edges(
        (1..=k).filter(|&i| t.depends_on(i)).map(|i| i as i64),
    ))
}

pub fn restrict(g: &DeMorgan, h: &PathGraph) -> DeMorgan {
    match g {
        DeMorgan::Const(_) => g.clone(),
        DeMorgan::Lit(l) => match l.var {
            Var::Edge(i) if !h.has_edge(i as i64) => DeMorgan::Const(!l.positive),
            _ => g.clone(),
        },
        DeMorgan::And(l, r) => DeMorgan::and(restrict(l, h), restrict(r, h)),
        DeMorgan::Or(l, r) => DeMorgan::or(restrict(l, h), restrict(r, h)),
    }
}

fn stree_rec(g: &DeMorgan, k: usize) -> JoinTree {
    match g {
        DeMorgan::Const(_) => JoinTree::empty_leaf(),
        DeMorgan::Lit(l) => match l.var {
            Var::Edge(i) => JoinTree::edge(i as i64),
            Var::Matrix(..) => unreachable!("shape checked"),
        },
        DeMorgan::And(l, r) | DeMorgan::Or(l, r) => {
            let t = table(g, k);
            let supp =
                PathGraph::from_edges((1..=k).filter(|&i| t.depends_on(i)).map(|i| i as i64));
            JoinTree::join(
                &stree_rec(&restrict(l, &supp), k),
                &stree_rec(&restrict(r, &supp), k),
            )
        }
    }
}

/// The support tree `S(g)`: children are restricted to the support of the
/// gate before recursing, so the root graph is exactly the support.
pub fn support_tree(g: &DeMorgan, k: usize) -> Result<JoinTree> {
    truth_table(g, k)?;
    Ok(stree_rec(g, k))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportTools {
    pub supp: PathGraph,
    pub stree: JoinTree,
    pub strict_stree: JoinTree,
}

pub fn support_tools(g: &DeMorgan, k: usize) -> Result<SupportTools> {
    let supp = support(g, k)?;
    let stree = support_tree(g, k)?;
    let strict_stree = strictify(&stree);
    Ok(SupportTools {
        supp,
        stree,
        strict_stree,
    })
}

/// `⟨⟨g_1..g_m⟩⟩ = ⟨⟨g_1..g_{m−1}⟩⟩ ∘ ⟨⟨g_1..g_{m−2}, g_m⟩⟩` for the gate `∘`.
pub fn sem_demorgan(parts: &[DeMorgan], is_and: bool) -> Result<DeMorgan> {
    if parts.is_empty() {
        return Err(LabError::InvalidParameter(
            "⟨⟨⟩⟩ needs at least one part".into(),
        ));
    }
    check_limit("parts", parts.len() as u64, 20)?;
    Ok(sem_rec(parts, is_and))
}

fn sem_rec(parts: &[DeMorgan], is_and: bool) -> DeMorgan {
    let m = parts.len();
    if m == 1 {
        return parts[0].clone();
    }
    let left = sem_rec(&parts[..m - 1], is_and);
    let mut alt = parts[..m - 2].to_vec();
    alt.push(parts[m - 1].clone());
    DeMorgan::gate(is_and, left, sem_rec(&alt, is_and))
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Key {
    Leaf(DeMorgan),
    Gate(bool, usize, usize),
}

struct Node {
    op: Option<bool>,
    decomps: Vec<Vec<usize>>,
    depth: usize,
}

/// Structural interning; every node keeps its decompositions as
/// `⟨⟨parts⟩⟩` under its own gate type.
struct SemInterner {
    ids: HashMap<Key, usize>,
    nodes: Vec<Node>,
    stored: usize,
    limit: usize,
}

impl SemInterner {
    fn decomps_under(&self, id: usize, op: bool) -> Vec<Vec<usize>> {
        if self.nodes[id].op == Some(op) {
            self.nodes[id].decomps.clone()
        } else {
            vec![vec![id]]
        }
    }

    fn intern(&mut self, g: &DeMorgan) -> Result<usize> {
        let key = match g.parts() {
            None => Key::Leaf(g.clone()),
            Some((op, l, r)) => {
                let (a, b) = (self.intern(l)?, self.intern(r)?);
                Key::Gate(op, a, b)
            }
        };
        if let Some(&id) = self.ids.get(&key) {
            return Ok(id);
        }
        let id = self.nodes.len();
        let node = match key {
            Key::Leaf(_) => Node {
                op: None,
                decomps: vec![vec![id]],
                depth: 0,
            },
            Key::Gate(op, a, b) => {
                let mut decomps = vec![vec![id]];
                let (da, db) = (self.decomps_under(a, op), self.decomps_under(b, op));
                for x in &da {
                    for y in db
                        .iter()
                        .filter(|y| y.len() == x.len() && y[..y.len() - 1] == x[..x.len() - 1])
                    {
                        let mut d = x.clone();
                        d.push(*y.last().unwrap());
                        decomps.push(d);
                    }
                }
                let depth = 1 + decomps
                    .iter()
                    .filter(|d| d.len() >= 2)
                    .map(|d| d.iter().map(|&p| self.nodes[p].depth).max().unwrap())
                    .min()
                    .expect("[left, right] is always a decomposition");
                self.stored += decomps.iter().map(Vec::len).sum::<usize>();
                check_limit(
                    "sem-depth memo entries",
                    self.stored as u64,
                    self.limit as u64,
                )?;
                Node {
                    op: Some(op),
                    decomps,
                    depth,
                }
            }
        };
        self.nodes.push(node);
        self.ids.insert(key, id);
        Ok(id)
    }
}

/// The least nesting depth of `⟨⟨·⟩⟩_∧ / ⟨⟨·⟩⟩_∨` that builds `g` from constants and literals.
pub fn sem_depth_demorgan(g: &DeMorgan, memo_limit: usize) -> Result<usize> {
    let mut it = SemInterner {
        ids: HashMap::new(),
        nodes: Vec::new(),
        stored: 0,
        limit: memo_limit,
    };
    let id = it.intern(g)?;
    Ok(it.nodes[id].depth)
}

/// The number of distinct strict `k`-variable formulas of `⟨⟨·⟩⟩`-depth at
/// most `d`, by growing `⟨⟨g_1..g_m⟩⟩` one part at a time from formulas of
/// depth at most `d−1` (every prefix of a strict one is strict).
pub fn count_strict_demorgan(k: usize, d: usize, limit: usize) -> Result<u128> {
    if k > 3 || d > 2 {
        return Err(LabError::InvalidParameter(
            "only k ≤ 3 and d ≤ 2 are supported".into(),
        ));
    }
    let mut level: Vec<DeMorgan> = vec![DeMorgan::Const(false), DeMorgan::Const(true)];
    for i in 1..=k {
        level.push(DeMorgan::x(i));
        level.push(DeMorgan::not_x(i));
    }
    for _ in 0..d {
        let mut found: HashSet<DeMorgan> = level.iter().cloned().collect();
        for op in [true, false] {
            for g in &level {
                grow(&level, vec![g.clone()], op, k, &mut found, limit)?;
            }
        }
        level = found.into_iter().collect();
    }
    Ok(level.len() as u128)
}

fn grow(
    base: &[DeMorgan],
    seq: Vec<DeMorgan>,
    op: bool,
    k: usize,
    found: &mut HashSet<DeMorgan>,
    limit: usize,
) -> Result<()> {
    for g in base {
        let mut next = seq.clone();
        next.push(g.clone());
        let f = sem_rec(&next, op);
        if strict_rec(&f, k).0 == f {
            found.insert(f);
            check_limit("strict formulas", found.len() as u64, limit as u64)?;
            grow(base, next, op, k, found, limit)?;
        }
    }
    Ok(())
}
