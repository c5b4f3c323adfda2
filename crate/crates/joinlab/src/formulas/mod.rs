//! Unbounded fan-in (AC⁰) formulas over matrix-entry variables `M^{(i)}_{a,b}`
//! or edge variables `X_1..X_k`, the divide-and-conquer SUB-PMM formulas,
//! brute-force matrix-product oracles and a text format.

mod demorgan;

pub use demorgan::{
    balanced, count_strict_demorgan, is_strict_demorgan, randomized_conversion, restrict,
    right_deep, sem_demorgan, sem_depth_demorgan, strictify_demorgan, support, support_tools,
    support_tree, truth_table, DeMorgan, DeMorganStats, SupportTools, TruthTable, MAX_TRUTH_VARS,
};

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_limit, LabError, Result};
use crate::jointree::checks::int_root;

pub const EXHAUSTIVE_LIMIT: u64 = 10_000_000;

/// `Matrix(i, a, b)` is `M^{(i)}_{a,b}`; `Edge(i)` is `X_i`. All 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Var {
    Matrix(usize, usize, usize),
    Edge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Literal {
    pub var: Var,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: Var) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: Var) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    pub fn eval(&self, x: &impl Fn(Var) -> bool) -> bool {
        x(self.var) == self.positive
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    Const(bool),
    Lit(Literal),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaStats {
    pub size: usize,
    pub depth: usize,
    pub and_depth: usize,
    pub fan_in: usize,
    pub and_fan_in: usize,
    pub or_fan_in: usize,
    pub monotone: bool,
}

/// The variable space a formula is evaluated on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Matrices { n: usize, k: usize },
    Edges { k: usize },
}

impl Formula {
    pub fn lit(var: Var) -> Self {
        Formula::Lit(Literal::pos(var))
    }

    pub fn m(i: usize, a: usize, b: usize) -> Self {
        Formula::lit(Var::Matrix(i, a, b))
    }

    pub fn x(i: usize) -> Self {
        Formula::lit(Var::Edge(i))
    }

    /// `⋀ children`, absorbing children that are themselves `⋀` gates.
    pub fn and(children: Vec<Formula>) -> Self {
        let mut out = Vec::with_capacity(children.len());
        for c in children {
            match c {
                Formula::And(cs) => out.extend(cs),
                c => out.push(c),
            }
        }
        Formula::And(out)
    }

    /// `⋁ children`, absorbing children that are themselves `⋁` gates.
    pub fn or(children: Vec<Formula>) -> Self {
        let mut out = Vec::with_capacity(children.len());
        for c in children {
            match c {
                Formula::Or(cs) => out.extend(cs),
                c => out.push(c),
            }
        }
        Formula::Or(out)
    }

    pub fn eval_with(&self, x: &impl Fn(Var) -> bool) -> bool {
        match self {
            Formula::Const(c) => *c,
            Formula::Lit(l) => l.eval(x),
            Formula::And(cs) => cs.iter().all(|c| c.eval_with(x)),
            Formula::Or(cs) => cs.iter().any(|c| c.eval_with(x)),
        }
    }

    pub fn eval_matrices(&self, input: &MatrixTuple) -> Result<bool> {
        self.check_shape(Shape::Matrices {
            n: input.n,
            k: input.k(),
        })?;
        Ok(self.eval_with(&|v| input.var(v)))
    }

    /// Evaluates on `X_i = bit i−1 of mask`.
    pub fn eval_edges(&self, k: usize, mask: u64) -> Result<bool> {
        self.check_shape(Shape::Edges { k })?;
        Ok(self.eval_with(&|v| edge_bit(v, mask)))
    }

    pub fn literals(&self) -> Vec<Literal> {
        let mut out = Vec::new();
        self.visit_literals(&mut |l| out.push(*l));
        out
    }

    fn visit_literals(&self, f: &mut impl FnMut(&Literal)) {
        match self {
            Formula::Const(_) => {}
            Formula::Lit(l) => f(l),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| c.visit_literals(f)),
        }
    }

    pub fn check_shape(&self, shape: Shape) -> Result<()> {
        let mut bad = None;
        self.visit_literals(&mut |l| {
            if bad.is_none() && !var_fits(l.var, shape) {
                bad = Some(l.var);
            }
        });
        match bad {
            None => Ok(()),
            Some(v) => Err(LabError::Arity(format!(
                "variable {v:?} does not fit {shape:?}"
            ))),
        }
    }

    pub fn stats(&self) -> FormulaStats {
        match self {
            Formula::Const(_) => FormulaStats {
                monotone: true,
                ..Default::default()
            },
            Formula::Lit(l) => FormulaStats {
                size: 1,
                monotone: l.positive,
                ..Default::default()
            },
            Formula::And(cs) | Formula::Or(cs) => {
                let is_and = matches!(self, Formula::And(_));
                let mut s = FormulaStats {
                    monotone: true,
                    fan_in: cs.len(),
                    ..Default::default()
                };
                if is_and {
                    s.and_fan_in = cs.len();
                } else {
                    s.or_fan_in = cs.len();
                }
                for c in cs.iter().map(Formula::stats) {
                    s.size += c.size;
                    s.depth = s.depth.max(c.depth);
                    s.and_depth = s.and_depth.max(c.and_depth);
                    s.fan_in = s.fan_in.max(c.fan_in);
                    s.and_fan_in = s.and_fan_in.max(c.and_fan_in);
                    s.or_fan_in = s.or_fan_in.max(c.or_fan_in);
                    s.monotone &= c.monotone;
                }
                s.depth += 1;
                s.and_depth += is_and as usize;
                s
            }
        }
    }

    pub fn to_sexpr(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("formulas serialize")
    }

    /// Parses either the S-expression or the JSON form.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim_start();
        if t.starts_with('{') {
            serde_json::from_str(t).map_err(|e| LabError::Parse(e.to_string()))
        } else {
            let v = lexpr::from_str(t).map_err(|e| LabError::Parse(e.to_string()))?;
            from_sexpr(&v)
        }
    }
}

fn var_fits(v: Var, shape: Shape) -> bool {
    match (v, shape) {
        (Var::Matrix(i, a, b), Shape::Matrices { n, k }) => {
            (1..=k).contains(&i) && (1..=n).contains(&a) && (1..=n).contains(&b)
        }
        (Var::Edge(i), Shape::Edges { k }) => (1..=k).contains(&i),
        _ => false,
    }
}

pub(crate) fn edge_bit(v: Var, mask: u64) -> bool {
    match v {
        Var::Edge(i) => mask >> (i - 1) & 1 == 1,
        Var::Matrix(..) => unreachable!("shape checked"),
    }
}

fn write_lit(f: &mut fmt::Formatter<'_>, l: &Literal) -> fmt::Result {
    let body = match l.var {
        Var::Matrix(i, a, b) => format!("(lit {i} {a} {b})"),
        Var::Edge(i) => format!("(lit {i})"),
    };
    if l.positive {
        write!(f, "{body}")
    } else {
        write!(f, "(not {body})")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(c) => write!(f, "{}", *c as u8),
            Formula::Lit(l) => write_lit(f, l),
            Formula::And(cs) | Formula::Or(cs) => {
                write!(
                    f,
                    "({}",
                    if matches!(self, Formula::And(_)) {
                        "and"
                    } else {
                        "or"
                    }
                )?;
                for c in cs {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn parse_err(msg: impl Into<String>) -> LabError {
    LabError::Parse(msg.into())
}

fn literal_from(items: &[lexpr::Value]) -> Result<Var> {
    let nums: Vec<usize> = items
        .iter()
        .map(|v| {
            v.as_u64()
                .filter(|&x| x >= 1)
                .map(|x| x as usize)
                .ok_or_else(|| parse_err(format!("bad index {v}")))
        })
        .collect::<Result<_>>()?;
    match nums.as_slice() {
        [i] => Ok(Var::Edge(*i)),
        [i, a, b] => Ok(Var::Matrix(*i, *a, *b)),
        _ => Err(parse_err("lit takes 1 or 3 indices")),
    }
}

fn from_sexpr(v: &lexpr::Value) -> Result<Formula> {
    if let Some(n) = v.as_u64() {
        return match n {
            0 => Ok(Formula::Const(false)),
            1 => Ok(Formula::Const(true)),
            _ => Err(parse_err(format!("bad constant {n}"))),
        };
    }
    let items = v
        .to_vec()
        .ok_or_else(|| parse_err(format!("expected a list, got {v}")))?;
    let (head, rest) = items.split_first().ok_or_else(|| parse_err("empty list"))?;
    match head.as_symbol() {
        Some("lit") => Ok(Formula::lit(literal_from(rest)?)),
        Some("not") => match rest {
            [inner] => match from_sexpr(inner)? {
                Formula::Lit(l) => Ok(Formula::Lit(Literal {
                    var: l.var,
                    positive: !l.positive,
                })),
                _ => Err(parse_err("not applies to literals only")),
            },
            _ => Err(parse_err("not takes one argument")),
        },
        Some("and") => Ok(Formula::And(
            rest.iter().map(from_sexpr).collect::<Result<_>>()?,
        )),
        Some("or") => Ok(Formula::Or(
            rest.iter().map(from_sexpr).collect::<Result<_>>()?,
        )),
        _ => Err(parse_err(format!("unknown head {head}"))),
    }
}

/// `k` Boolean `n×n` matrices, `n ≤ 8`, each packed row-major into a `u64`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatrixTuple {
    pub n: usize,
    pub mats: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputClass {
    Arbitrary,
    /// At most one 1 per row.
    RowConstrained,
    /// At most one 1 per row and per column.
    SubPermutation,
}

impl MatrixTuple {
    pub fn zeros(n: usize, k: usize) -> Self {
        assert!((1..=8).contains(&n), "n must be in 1..=8");
        MatrixTuple {
            n,
            mats: vec![0; k],
        }
    }

    pub fn identity(n: usize, k: usize) -> Self {
        let mut t = Self::zeros(n, k);
        for i in 1..=k {
            for a in 1..=n {
                t.set(i, a, a, true);
            }
        }
        t
    }

    pub fn k(&self) -> usize {
        self.mats.len()
    }

    fn bit(&self, a: usize, b: usize) -> u32 {
        ((a - 1) * self.n + (b - 1)) as u32
    }

    pub fn get(&self, i: usize, a: usize, b: usize) -> bool {
        self.mats[i - 1] >> self.bit(a, b) & 1 == 1
    }

    pub fn set(&mut self, i: usize, a: usize, b: usize, v: bool) {
        let bit = 1u64 << self.bit(a, b);
        if v {
            self.mats[i - 1] |= bit;
        } else {
            self.mats[i - 1] &= !bit;
        }
    }

    pub fn var(&self, v: Var) -> bool {
        match v {
            Var::Matrix(i, a, b) => self.get(i, a, b),
            Var::Edge(_) => unreachable!("shape checked"),
        }
    }

    fn row(&self, i: usize, a: usize) -> u64 {
        self.mats[i - 1] >> ((a - 1) * self.n) & ((1u64 << self.n) - 1)
    }

    pub fn is_row_constrained(&self) -> bool {
        (1..=self.k()).all(|i| (1..=self.n).all(|a| self.row(i, a).count_ones() <= 1))
    }

    pub fn is_sub_permutation(&self) -> bool {
        self.is_row_constrained()
            && (1..=self.k()).all(|i| {
                (1..=self.n).all(|b| (1..=self.n).filter(|&a| self.get(i, a, b)).count() <= 1)
            })
    }

    pub fn in_class(&self, class: InputClass) -> bool {
        match class {
            InputClass::Arbitrary => true,
            InputClass::RowConstrained => self.is_row_constrained(),
            InputClass::SubPermutation => self.is_sub_permutation(),
        }
    }

    /// Every single `n×n` matrix of the class.
    pub fn class_matrices(n: usize, class: InputClass) -> Result<Vec<u64>> {
        check_limit("matrix entries", (n * n) as u64, 20)?;
        let one = MatrixTuple { n, mats: vec![0] };
        Ok((0..1u64 << (n * n))
            .filter(|&m| {
                MatrixTuple {
                    mats: vec![m],
                    ..one.clone()
                }
                .in_class(class)
            })
            .collect())
    }

    /// Every tuple of `k` matrices from the class.
    pub fn enumerate(
        n: usize,
        k: usize,
        class: InputClass,
    ) -> Result<impl Iterator<Item = MatrixTuple>> {
        let single = Self::class_matrices(n, class)?;
        let total = (single.len() as u64)
            .checked_pow(k as u32)
            .unwrap_or(u64::MAX);
        check_limit("input tuples", total, EXHAUSTIVE_LIMIT)?;
        Ok((0..total).map(move |mut code| {
            let mut mats = Vec::with_capacity(k);
            for _ in 0..k {
                mats.push(single[(code % single.len() as u64) as usize]);
                code /= single.len() as u64;
            }
            MatrixTuple { n, mats }
        }))
    }

    pub fn random<R: Rng>(n: usize, k: usize, class: InputClass, rng: &mut R) -> Self {
        let mut t = Self::zeros(n, k);
        for i in 1..=k {
            match class {
                InputClass::Arbitrary => t.mats[i - 1] = rng.gen::<u64>() & mask_bits(n * n),
                InputClass::RowConstrained => {
                    for a in 1..=n {
                        let b = rng.gen_range(0..=n);
                        if b > 0 {
                            t.set(i, a, b, true);
                        }
                    }
                }
                InputClass::SubPermutation => {
                    let mut cols: Vec<usize> = (1..=n).collect();
                    for j in (1..n).rev() {
                        cols.swap(j, rng.gen_range(0..=j));
                    }
                    for (a, &b) in cols.iter().enumerate() {
                        if rng.gen_bool(0.75) {
                            t.set(i, a + 1, b, true);
                        }
                    }
                }
            }
        }
        t
    }
}

fn mask_bits(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// `(M^{(1)} ⋯ M^{(k)})_{a0,ak}` over the Boolean semiring.
pub fn oracle_bmm_entry(input: &MatrixTuple, a0: usize, ak: usize) -> bool {
    let mut reach = 1u64 << (a0 - 1);
    for i in 1..=input.k() {
        let mut next = 0;
        for a in 1..=input.n {
            if reach >> (a - 1) & 1 == 1 {
                next |= input.row(i, a);
            }
        }
        reach = next;
    }
    reach >> (ak - 1) & 1 == 1
}

pub fn oracle_bmm(input: &MatrixTuple) -> bool {
    oracle_bmm_entry(input, 1, 1)
}

pub fn oracle_subpmm(input: &MatrixTuple) -> Result<bool> {
    if !input.is_sub_permutation() {
        return Err(LabError::Domain(
            "input is not a tuple of sub-permutation matrices".into(),
        ));
    }
    Ok(oracle_bmm(input))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaKind {
    D,
    C,
    #[serde(rename = "sigma_i")]
    SigmaI,
    #[serde(rename = "sigma_ii")]
    SigmaII,
    #[serde(rename = "pi_ii")]
    PiII,
}

impl std::str::FromStr for FormulaKind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "d" => Ok(FormulaKind::D),
            "c" => Ok(FormulaKind::C),
            "sigmai" | "sigma_i" | "sigma1" => Ok(FormulaKind::SigmaI),
            "sigmaii" | "sigma_ii" | "sigma2" => Ok(FormulaKind::SigmaII),
            "piii" | "pi_ii" | "pi2" => Ok(FormulaKind::PiII),
            _ => Err(LabError::InvalidParameter(format!(
                "unknown formula kind {s}"
            ))),
        }
    }
}

/// All tuples in `[n]^len`, lexicographic.
fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// A product of `blocks` consecutive factors; `block(j, x, y)` is a formula
/// for entry `(x, y)` of factor `j` (1-based).
struct Product<'a> {
    n: usize,
    blocks: usize,
    block: &'a dyn Fn(usize, usize, usize) -> Formula,
}

impl Product<'_> {
    /// `⋁_{a_1..a_{ℓ−1}} ⋀_j block_j(a_{j−1}, a_j)`: exact for any matrices.
    fn disjunctive(&self, a0: usize, al: usize) -> Formula {
        let l = self.blocks;
        Formula::or(
            tuples(self.n, l - 1)
                .into_iter()
                .map(|mid| {
                    let idx = |j: usize| {
                        if j == 0 {
                            a0
                        } else if j == l {
                            al
                        } else {
                            mid[j - 1]
                        }
                    };
                    Formula::and(
                        (1..=l)
                            .map(|j| (self.block)(j, idx(j - 1), idx(j)))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    /// `⋀_{a_1..a_{ℓ−1}} (⋁_{j<ℓ} ⋁_{b≠a_j} block_j(a_{j−1}, b) ∨ block_ℓ(a_{ℓ−1}, a_ℓ))`:
    /// exact when every factor has at most one 1 per row.
    fn conjunctive(&self, a0: usize, al: usize) -> Formula {
        let l = self.blocks;
        Formula::and(
            tuples(self.n, l - 1)
                .into_iter()
                .map(|mid| {
                    let idx = |j: usize| {
                        if j == 0 {
                            a0
                        } else if j == l {
                            al
                        } else {
                            mid[j - 1]
                        }
                    };
                    let mut clause = Vec::new();
                    for j in 1..l {
                        for b in (1..=self.n).filter(|&b| b != idx(j)) {
                            clause.push((self.block)(j, idx(j - 1), b));
                        }
                    }
                    clause.push((self.block)(l, idx(l - 1), idx(l)));
                    Formula::or(clause)
                })
                .collect(),
        )
    }
}

#[derive(Clone, Copy)]
enum Shape2 {
    Disjunctive,
    Conjunctive,
}

/// Matrices `off+1 ..= off+len` split into `ℓ` blocks at each of `d` levels.
fn build_rec(
    n: usize,
    off: usize,
    len: usize,
    l: usize,
    d: u32,
    top: Shape2,
    alternate: bool,
    a0: usize,
    al: usize,
) -> Formula {
    let sub = len / l;
    let block = move |j: usize, x: usize, y: usize| -> Formula {
        let start = off + (j - 1) * sub;
        if d == 1 {
            Formula::m(start + 1, x, y)
        } else {
            let inner = match (alternate, top) {
                (false, s) => s,
                (true, Shape2::Disjunctive) => Shape2::Conjunctive,
                (true, Shape2::Conjunctive) => Shape2::Disjunctive,
            };
            build_rec(n, start, sub, l, d - 1, inner, alternate, x, y)
        }
    };
    let p = Product {
        n,
        blocks: l,
        block: &block,
    };
    match top {
        Shape2::Disjunctive => p.disjunctive(a0, al),
        Shape2::Conjunctive => p.conjunctive(a0, al),
    }
}

/// The monotone formulas for `(M^{(1)} ⋯ M^{(k)})_{a0,ak}`:
/// `D`/`C` are the DNF/CNF at `d = 1`; `SigmaI` nests `D`-shaped products
/// over `k^{1/d}` blocks `d` times (depth `2d`, ∧-fan-in `k^{1/d}`);
/// `SigmaII`/`PiII` alternate the `D` and `C` shapes (depth `d+1`), correct
/// on sub-permutation inputs.
pub fn build_matrix_formula(
    kind: FormulaKind,
    n: usize,
    k: usize,
    d: u32,
    a0: usize,
    ak: usize,
) -> Result<Formula> {
    if n == 0 || k == 0 || d == 0 {
        return Err(LabError::InvalidParameter(
            "n, k and d must be positive".into(),
        ));
    }
    if !(1..=n).contains(&a0) || !(1..=n).contains(&ak) {
        return Err(LabError::InvalidParameter(
            "endpoints must lie in [n]".into(),
        ));
    }
    if matches!(kind, FormulaKind::D | FormulaKind::C) && d != 1 {
        return Err(LabError::InvalidParameter(
            "D and C are depth-2 formulas (d = 1)".into(),
        ));
    }
    let l = int_root(k as i64, d)
        .ok_or_else(|| LabError::InvalidParameter(format!("{k}^(1/{d}) is not an integer")))?
        as usize;
    let size_bound = (k as f64) * (n as f64).powi((d as usize * l) as i32);
    check_limit(
        "formula size bound",
        size_bound.min(u64::MAX as f64) as u64,
        50_000_000,
    )?;
    Ok(match kind {
        FormulaKind::D | FormulaKind::SigmaI => {
            build_rec(n, 0, k, l, d, Shape2::Disjunctive, false, a0, ak)
        }
        FormulaKind::SigmaII => build_rec(n, 0, k, l, d, Shape2::Disjunctive, true, a0, ak),
        FormulaKind::C | FormulaKind::PiII => {
            build_rec(n, 0, k, l, d, Shape2::Conjunctive, true, a0, ak)
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectnessReport {
    pub checked: u64,
    pub mismatches: u64,
    pub counterexample: Option<MatrixTuple>,
}

impl CorrectnessReport {
    pub fn ok(&self) -> bool {
        self.mismatches == 0
    }
}

/// Compares `phi` against the Boolean product's `(1,1)` entry on every
/// (or a sample of) `k`-tuple of `n×n` matrices from `class`.
pub fn check_formula_correct(
    phi: &Formula,
    n: usize,
    k: usize,
    class: InputClass,
    mode: CheckMode,
) -> Result<CorrectnessReport> {
    phi.check_shape(Shape::Matrices { n, k })?;
    let mut report = CorrectnessReport {
        checked: 0,
        mismatches: 0,
        counterexample: None,
    };
    let mut check = |t: MatrixTuple| {
        report.checked += 1;
        if phi.eval_with(&|v| t.var(v)) != oracle_bmm(&t) {
            report.mismatches += 1;
            if report.counterexample.is_none() {
                report.counterexample = Some(t);
            }
        }
    };
    match mode {
        CheckMode::Exhaustive => MatrixTuple::enumerate(n, k, class)?.for_each(&mut check),
        CheckMode::Sample { count, seed } => {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..count {
                check(MatrixTuple::random(n, k, class, &mut rng));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Independent oracle: depth-first search for a path `1 → 1` in the
    /// layered graph with an arc `(i−1, a) → (i, b)` per one-entry.
    fn layered_path(t: &MatrixTuple) -> bool {
        fn go(t: &MatrixTuple, layer: usize, a: usize) -> bool {
            if layer == t.k() {
                return a == 1;
            }
            (1..=t.n).any(|b| t.get(layer + 1, a, b) && go(t, layer + 1, b))
        }
        go(t, 0, 1)
    }

    #[test]
    fn d_and_c_shapes() {
        for n in 1..=4 {
            let d = build_matrix_formula(FormulaKind::D, n, 5, 1, 1, 1).unwrap();
            let s = d.stats();
            assert_eq!(s.size, 5 * n.pow(4));
            assert_eq!((s.depth, s.and_fan_in, s.or_fan_in), (2, 5, n.pow(4)));
            assert!(s.monotone);
            let c = build_matrix_formula(FormulaKind::C, n, 5, 1, 1, 1).unwrap();
            assert!(matches!(c, Formula::And(_)));
            assert_eq!(c.stats().depth, 2);
            assert!(c.stats().size <= 5 * n.pow(5));
        }
        let t = MatrixTuple::identity(3, 5);
        let d = build_matrix_formula(FormulaKind::D, 3, 5, 1, 1, 1).unwrap();
        assert!(d.eval_matrices(&t).unwrap());
        assert!(!d.eval_matrices(&MatrixTuple::zeros(3, 5)).unwrap());
        assert!(d.eval_matrices(&MatrixTuple::zeros(3, 4)).is_err());
    }

    #[test]
    fn sigma_i_example_bounds() {
        for n in 1..=2 {
            let f = build_matrix_formula(FormulaKind::SigmaI, n, 25, 2, 1, 1).unwrap();
            let s = f.stats();
            assert_eq!(s.and_fan_in, 5);
            assert_eq!(s.depth, 4);
            assert!(s.size <= 25 * n.pow(10));
        }
        assert!(build_matrix_formula(FormulaKind::SigmaII, 2, 25, 3, 1, 1).is_err());
        assert!(build_matrix_formula(FormulaKind::D, 2, 4, 2, 1, 1).is_err());
    }

    #[test]
    fn depths_of_alternating_kinds() {
        for d in 1..=3u32 {
            let k = 2usize.pow(d);
            let s = build_matrix_formula(FormulaKind::SigmaII, 2, k, d, 1, 1).unwrap();
            let p = build_matrix_formula(FormulaKind::PiII, 2, k, d, 1, 1).unwrap();
            assert_eq!(s.stats().depth, d as usize + 1);
            assert_eq!(p.stats().depth, d as usize + 1);
            assert!(matches!(s, Formula::Or(_)) && matches!(p, Formula::And(_)));
        }
    }

    #[test]
    fn oracles() {
        let id = MatrixTuple::identity(3, 4);
        assert!(oracle_bmm(&id) && oracle_subpmm(&id).unwrap());
        let mut z = id.clone();
        z.mats[2] = 0;
        assert!(!oracle_subpmm(&z).unwrap());
        let mut bad = MatrixTuple::zeros(2, 1);
        bad.set(1, 1, 1, true);
        bad.set(1, 1, 2, true);
        assert!(oracle_subpmm(&bad).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let t = MatrixTuple::random(4, 6, InputClass::SubPermutation, &mut rng);
            assert!(t.is_sub_permutation());
            assert_eq!(oracle_subpmm(&t).unwrap(), layered_path(&t));
            let a = MatrixTuple::random(4, 6, InputClass::Arbitrary, &mut rng);
            assert_eq!(oracle_bmm(&a), layered_path(&a));
        }
    }

    #[test]
    fn class_sizes() {
        assert_eq!(
            MatrixTuple::class_matrices(2, InputClass::SubPermutation)
                .unwrap()
                .len(),
            7
        );
        assert_eq!(
            MatrixTuple::class_matrices(2, InputClass::RowConstrained)
                .unwrap()
                .len(),
            9
        );
        assert_eq!(
            MatrixTuple::class_matrices(3, InputClass::SubPermutation)
                .unwrap()
                .len(),
            34
        );
        assert_eq!(
            MatrixTuple::class_matrices(2, InputClass::Arbitrary)
                .unwrap()
                .len(),
            16
        );
    }

    #[test]
    fn small_exhaustive_correctness() {
        let c = build_matrix_formula(FormulaKind::C, 2, 3, 1, 1, 1).unwrap();
        let r = check_formula_correct(&c, 2, 3, InputClass::SubPermutation, CheckMode::Exhaustive)
            .unwrap();
        assert!(r.ok());
        assert_eq!(r.checked, 343);
        // an empty row lets every clause be satisfied by its last literal
        let r = check_formula_correct(&c, 2, 3, InputClass::RowConstrained, CheckMode::Exhaustive)
            .unwrap();
        assert_eq!(r.checked, 729);
        let bad = r.counterexample.unwrap();
        assert!(!oracle_bmm(&bad) && (1..=3).any(|i| (1..=2).any(|a| bad.row(i, a) == 0)));
        let d = build_matrix_formula(FormulaKind::D, 2, 3, 1, 1, 1).unwrap();
        assert!(
            check_formula_correct(&d, 2, 3, InputClass::Arbitrary, CheckMode::Exhaustive)
                .unwrap()
                .ok()
        );
        for kind in [FormulaKind::SigmaI, FormulaKind::SigmaII, FormulaKind::PiII] {
            let f = build_matrix_formula(kind, 2, 4, 2, 1, 1).unwrap();
            let r =
                check_formula_correct(&f, 2, 4, InputClass::SubPermutation, CheckMode::Exhaustive)
                    .unwrap();
            assert!(r.ok(), "{kind:?}");
            let r = check_formula_correct(
                &f,
                2,
                3,
                InputClass::SubPermutation,
                CheckMode::Sample { count: 10, seed: 2 },
            );
            assert!(r.is_err());
        }
    }

    #[test]
    fn general_endpoints() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for kind in [FormulaKind::SigmaI, FormulaKind::SigmaII, FormulaKind::PiII] {
            for (a0, ak) in [(1, 2), (3, 1), (2, 2)] {
                let f = build_matrix_formula(kind, 3, 9, 2, a0, ak).unwrap();
                for _ in 0..300 {
                    let t = MatrixTuple::random(3, 9, InputClass::SubPermutation, &mut rng);
                    assert_eq!(f.eval_matrices(&t).unwrap(), oracle_bmm_entry(&t, a0, ak));
                }
            }
        }
    }

    #[test]
    fn text_round_trips() {
        let f = Formula::And(vec![
            Formula::Or(vec![Formula::m(1, 2, 3), Formula::Const(false)]),
            Formula::Lit(Literal::neg(Var::Matrix(2, 1, 1))),
        ]);
        let s = f.to_sexpr();
        assert_eq!(s, "(and (or (lit 1 2 3) 0) (not (lit 2 1 1)))");
        assert_eq!(Formula::parse(&s).unwrap(), f);
        assert_eq!(Formula::parse(&f.to_json()).unwrap(), f);
        let g = Formula::parse("(or (lit 1) (not (lit 2)) 1)").unwrap();
        assert!(g.eval_edges(2, 0b10).unwrap());
        assert!(Formula::parse("(xor (lit 1))").is_err());
        assert!(Formula::parse("(lit 0)").is_err());
        assert!(Formula::parse("(not (and))").is_err());
    }
}
