//! Invariant suites and Monte Carlo experiments shared by the command-line
//! front end and the acceptance tests. Every report is a deterministic
//! function of the arguments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{LabError, Result};
use crate::formulas::{
    balanced, build_matrix_formula, check_formula_correct, count_strict_demorgan,
    randomized_conversion, right_deep, CheckMode, DeMorgan, Formula, FormulaKind, InputClass,
    MatrixTuple,
};
use crate::greedylab::{lp_certificate, verify_certificate, verify_lp_certificates};
use crate::instances::{
    random_connected, random_covering, random_edge_covering, random_edge_formula, random_monotone,
    random_pathset, random_relation, random_subgraph,
};
use crate::jointree::{
    check_psi_recurrences, check_sem_recurrences, check_sq_recurrences, count_strict,
    enumerate_strict, maximally_overlapping, random_strict, verify_tradeoff, DepthKind, JoinTree,
    TradeoffKind,
};
use crate::pathgraph::PathGraph;
use crate::pathsets::{
    bmm_evaluator, chain_rule_check, chi_decomposition_cost, covering_check, density,
    formula_evaluator, join0_check, minterms, montecarlo_eps1, montecarlo_mpath2, restrict_formula,
    sample_xi, subformula_pathset_violation, MintermMode, PathsetParams, Relation,
    DEFAULT_EVAL_BUDGET,
};
use crate::shiftperm::ShiftPermutation;
use crate::witnesses::{
    check_gap_bounds, check_numerical, construct_main_i, construct_main_ii, construct_premain_i,
    construct_premain_ii, construct_strong_shift, delta_property_violations,
    induced_order_violation, StrongMode,
};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checked: u64,
    pub failures: u64,
    /// The first failing instance.
    pub counterexample: Option<Value>,
    pub details: Map<String, Value>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.into(),
            checked: 0,
            failures: 0,
            counterexample: None,
            details: Map::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Counts one check; `witness` is serialized only for the first failure.
    pub fn check<T: Serialize>(&mut self, ok: bool, witness: impl FnOnce() -> T) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(serde_json::to_value(witness()).unwrap_or(Value::Null));
            }
        }
    }

    pub fn note(&mut self, key: &str, value: impl Serialize) {
        self.details.insert(
            key.into(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
    }

    /// Folds a sub-suite in, recording its counts under its name.
    pub fn absorb(&mut self, sub: SuiteReport) {
        self.checked += sub.checked;
        self.failures += sub.failures;
        if self.counterexample.is_none() {
            self.counterexample = sub
                .counterexample
                .map(|c| json!({ "group": sub.suite, "instance": c }));
        }
        let mut entry = Map::new();
        entry.insert("checked".into(), sub.checked.into());
        entry.insert("failures".into(), sub.failures.into());
        entry.extend(sub.details);
        self.details.insert(sub.suite, Value::Object(entry));
    }
}

fn graphs_json(seq: &[PathGraph]) -> Value {
    serde_json::to_value(seq).unwrap_or(Value::Null)
}

fn sub_pmm(kind: FormulaKind, n: usize, k: usize, d: u32) -> Result<DeMorgan> {
    Ok(right_deep(&build_matrix_formula(kind, n, k, d, 1, 1)?))
}

fn ceil_log2(m: usize) -> usize {
    (usize::BITS - (m.max(1) - 1).leading_zeros()) as usize
}

/// The identities of conditional `vec_delta`, the induced-order bound, the
/// `gap` bounds and the numerical inequalities, each on `instances`
/// random inputs.
pub fn delta_props(instances: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut identities = SuiteReport::new("vec-delta identities");
    let mut induced = SuiteReport::new("induced orders");
    let mut gaps = SuiteReport::new("gap bounds");
    let mut numeric = SuiteReport::new("numerical inequalities");
    for _ in 0..instances {
        let k = rng.gen_range(2..=20);
        let seq = random_covering(&mut rng, k, 5);
        let f = PathGraph::from_edges((0..rng.gen_range(0..5)).map(|_| rng.gen_range(1..=k)));
        let f0 = PathGraph::from_edges(f.edges().filter(|_| rng.gen_bool(0.5)));
        let split = rng.gen_range(0..=seq.len());
        let bad = delta_property_violations(&seq, &f0, &f, split);
        identities.check(bad.is_empty(), || json!({ "seq": graphs_json(&seq), "f0": f0, "f": f, "split": split, "violated": bad }));

        let bounds = check_gap_bounds(&seq, &f)?;
        gaps.check(
            bounds.holds(),
            || json!({ "seq": graphs_json(&seq), "f": f, "bounds": bounds }),
        );

        let m = seq.len();
        let set: Vec<usize> = (1..=m).filter(|&i| i == m || rng.gen_bool(0.4)).collect();
        let sigma = ShiftPermutation::from_set(m, &set)?;
        let v = induced_order_violation(&seq, &sigma);
        induced.check(
            v.is_none(),
            || json!({ "seq": graphs_json(&seq), "sigma": sigma, "j": v }),
        );

        let len = rng.gen_range(1..=10);
        let d = rng.gen_range(1.0001..=6.0);
        let xs: Vec<f64> = (0..len)
            .map(|_| rng.gen_range(0.0..100.0f64).powi(2))
            .collect();
        let ys: Vec<f64> = (0..len).map(|_| rng.gen_range(0.0..20.0)).collect();
        let ok = check_numerical(&xs, &ys, d)?;
        numeric.check(ok, || json!({ "xs": xs, "ys": ys, "d": d }));
    }
    let mut report = SuiteReport::new("delta-props");
    for sub in [identities, induced, gaps, numeric] {
        report.absorb(sub);
    }
    Ok(report)
}

/// The Ψ recurrences for `[[·]]` and `⟨⟨·⟩⟩` on random part lists, and
/// the combined check on random strict trees.
pub fn psi_recurrences(instances: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sq = SuiteReport::new("sq recurrences");
    let mut sem = SuiteReport::new("sem recurrences");
    let mut trees = SuiteReport::new("tree recurrences");
    for _ in 0..instances {
        let m = rng.gen_range(2..=4);
        let parts: Vec<JoinTree> = (0..m)
            .map(|_| {
                let s = rng.gen_range(0..6);
                let len = rng.gen_range(1..=3);
                random_strict(&PathGraph::path(s, s + len).expect("len ≥ 1"), &mut rng)
            })
            .collect();
        let r = check_sq_recurrences(&parts)?;
        sq.check(
            r.holds(),
            || json!({ "parts": parts, "violations": r.violations }),
        );
        let r = check_sem_recurrences(&parts)?;
        sem.check(
            r.holds(),
            || json!({ "parts": parts, "violations": r.violations }),
        );
        let g = random_subgraph(&mut rng, 6, 0.7);
        let t = random_strict(&g, &mut rng);
        let r = check_psi_recurrences(&t)?;
        trees.check(
            r.holds(),
            || json!({ "tree": t, "violations": r.violations }),
        );
    }
    let mut report = SuiteReport::new("psi-recurrences");
    for sub in [sq, sem, trees] {
        report.absorb(sub);
    }
    Ok(report)
}

/// The LP certificates for each `t`, and rejection of every unit
/// perturbation of a certificate entry.
pub fn lp(ts: &[usize]) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("lp");
    let mut per_t = Vec::new();
    for &t in ts {
        let r = verify_lp_certificates(t)?;
        report.check(r.ok(), || &r);
        let c = lp_certificate(t)?;
        let y = c.y();
        per_t.push(json!({
            "t": t,
            "gamma": r.gamma,
            "objective": if r.primal_ok { "0" } else { "unverified" },
            "columns": r.columns,
            "y_1": y[1].to_string(),
            "y_t": y[t].to_string(),
        }));
        let mut perturbations = 0;
        for (a, _) in c.w.clone() {
            for delta in [-1, 1] {
                let mut bad = c.clone();
                bad.set_w(
                    a.clone(),
                    c.w(&a) + num_rational::BigRational::from_integer(delta.into()),
                );
                let caught = !verify_certificate(&bad)?.ok();
                perturbations += 1;
                report.check(caught, || json!({ "t": t, "w": a, "delta": delta }));
            }
        }
        for r in 0..y.len() {
            for delta in [-1, 1] {
                let mut bad = c.clone();
                bad.set_y(
                    r,
                    &y[r] + num_rational::BigRational::from_integer(delta.into()),
                );
                let caught = !verify_certificate(&bad)?.ok();
                perturbations += 1;
                report.check(caught, || json!({ "t": t, "y": r, "delta": delta }));
            }
        }
        report.note(&format!("perturbations t={t}"), perturbations);
    }
    report.note("certificates", per_t);
    Ok(report)
}

/// Tradeoff inequality `kind` on every strict `Path_k`-join tree for
/// `k ≤ enumerate_k` and on `random` random strict trees with `k ≤ max_k`;
/// the maximally-overlapping trees have `Ψ = 1`.
pub fn tradeoff(
    kind: TradeoffKind,
    enumerate_k: i64,
    random: usize,
    max_k: i64,
    seed: u64,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new(match kind {
        TradeoffKind::I => "tradeoff-I",
        TradeoffKind::II => "tradeoff-II",
    });
    let mut exhaustive = 0;
    for k in 1..=enumerate_k {
        let g = PathGraph::path_k(k);
        let edge_limit = (k as usize).max(crate::jointree::DEFAULT_EDGE_LIMIT);
        for t in enumerate_strict(&g, DepthKind::Left, k as usize, edge_limit)? {
            let r = verify_tradeoff(&t, kind)?;
            exhaustive += 1;
            report.check(r.holds, || json!({ "tree": t, "report": r }));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let k = rng.gen_range(1..=max_k.max(1));
        let t = random_strict(&PathGraph::path_k(k), &mut rng);
        let r = verify_tradeoff(&t, kind)?;
        report.check(r.holds, || json!({ "tree": t, "report": r }));
    }
    for k in 1..=max_k.max(enumerate_k) {
        let psi = maximally_overlapping(k)?.psi()?;
        report.check(
            psi == 1,
            || json!({ "maximally_overlapping": k, "psi": psi }),
        );
    }
    report.note("exhaustive trees", exhaustive);
    report.note("random trees", random);
    Ok(report)
}

/// The conditional chain rules on random families of relations (`n ≤ 4`,
/// `k ≤ 4`, up to three relations, half of them pathsets).
pub fn chain_rules(instances: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport::new("chain-rules");
    let mut inner = 0;
    for _ in 0..instances {
        let k = rng.gen_range(1..=4u32);
        let p = PathsetParams::new(rng.gen_range(2..=4), k)?;
        let m = rng.gen_range(1..=3);
        let mut rels: Vec<Relation> = Vec::with_capacity(m);
        for _ in 0..m {
            let g = random_subgraph(&mut rng, k as i64, 0.5);
            rels.push(if rng.gen_bool(0.5) {
                random_pathset(&mut rng, g, &p)?
            } else {
                random_relation(&mut rng, g, p.n, 0.5)?
            });
        }
        let f = random_subgraph(&mut rng, k as i64, 0.5);
        let r = chain_rule_check(&rels, &f, &p)?;
        inner += r.checked;
        report.check(r.holds(), || json!({ "relations": rels, "f": f, "params": [p.n, p.k], "violations": r.violations }));
    }
    report.note("inequalities", inner);
    Ok(report)
}

/// Structural bounds of a SUB-PMM formula: monotone, size at most
/// `k·n^{d·k^{1/d}}`, and `∧`-fan-in `k^{1/d}` for `SigmaI`.
fn structure_ok(kind: FormulaKind, f: &Formula, n: usize, k: usize, d: u32) -> (bool, Value) {
    let s = f.stats();
    let l = (k as f64).powf(1.0 / d as f64).round() as usize;
    let bound = (k as u128) * (n as u128).pow(d * l as u32);
    let mut ok = s.monotone && (s.size as u128) <= bound;
    if kind == FormulaKind::SigmaI && l >= 2 {
        ok &= s.and_fan_in == l;
    }
    (
        ok,
        json!({ "kind": kind, "n": n, "k": k, "d": d, "stats": s, "size_bound": bound.to_string() }),
    )
}

fn default_class(kind: FormulaKind) -> InputClass {
    match kind {
        FormulaKind::D => InputClass::Arbitrary,
        _ => InputClass::SubPermutation,
    }
}

/// Correctness of one SUB-PMM formula against the matrix-product oracle
/// (`D` over arbitrary inputs, the others over sub-permutation inputs unless
/// `class` says otherwise), plus its structural bounds.
pub fn formulas(
    kind: FormulaKind,
    n: usize,
    k: usize,
    d: u32,
    class: Option<InputClass>,
    mode: CheckMode,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("formulas");
    let f = build_matrix_formula(kind, n, k, d, 1, 1)?;
    let (ok, info) = structure_ok(kind, &f, n, k, d);
    report.check(ok, || info.clone());
    let class = class.unwrap_or(default_class(kind));
    let r = check_formula_correct(&f, n, k, class, mode)?;
    report.check(
        r.ok(),
        || json!({ "kind": kind, "counterexample": r.counterexample, "mismatches": r.mismatches }),
    );
    report.note("class", class);
    report.note("inputs", r.checked);
    report.note("mismatches", r.mismatches);
    report.note("formula", info);
    Ok(report)
}

/// Structural bounds of every SUB-PMM construction with `n ≤ max_n`,
/// `d ≤ max_d` and `k = ℓ^d ≤ max_k`; builds beyond the size ceiling are
/// skipped and counted.
pub fn formula_bounds(max_n: usize, max_k: usize, max_d: u32) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("formula-bounds");
    let mut skipped = Vec::new();
    for n in 1..=max_n {
        for d in 1..=max_d {
            for l in 1usize.. {
                let k = l.pow(d);
                if k > max_k {
                    break;
                }
                let kinds: &[FormulaKind] = if d == 1 {
                    &[
                        FormulaKind::D,
                        FormulaKind::C,
                        FormulaKind::SigmaI,
                        FormulaKind::SigmaII,
                        FormulaKind::PiII,
                    ]
                } else {
                    &[FormulaKind::SigmaI, FormulaKind::SigmaII, FormulaKind::PiII]
                };
                for &kind in kinds {
                    match build_matrix_formula(kind, n, k, d, 1, 1) {
                        Ok(f) => {
                            let (ok, info) = structure_ok(kind, &f, n, k, d);
                            report.check(ok, || info);
                        }
                        Err(LabError::ResourceLimit { .. }) => skipped.push(json!([kind, n, k, d])),
                        Err(e) => return Err(e),
                    }
                }
            }
        }
    }
    report.note("skipped (size ceiling)", skipped);
    Ok(report)
}

/// The deterministic conversions preserve function and size and meet their
/// depth bounds on random edge-variable formulas (exhaustive over
/// `≤ 8` variables, and over the 16 variables of `SigmaI(2,4,2)`); every
/// randomized sample of the SUB-PMM formulas meets the depth and size bounds.
pub fn conversions(instances: usize, samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut det = SuiteReport::new("deterministic conversions");
    for _ in 0..instances {
        let k = rng.gen_range(1..=8);
        let f = random_edge_formula(&mut rng, k, 4);
        let s = f.stats();
        let rd = right_deep(&f);
        let bal = balanced(&f);
        let same = (0..1u64 << k).all(|mask| {
            let want = f.eval_with(&|v| crate::formulas::edge_bit(v, mask));
            rd.eval_with(&|v| crate::formulas::edge_bit(v, mask)) == want
                && bal.eval_with(&|v| crate::formulas::edge_bit(v, mask)) == want
        });
        let (rs, bs) = (rd.stats(), bal.stats());
        let ok = same
            && rs.size == s.size
            && bs.size == s.size
            && bs.depth <= s.depth * ceil_log2(s.fan_in.max(1))
            && rs.and_left_depth <= s.and_depth;
        det.check(ok, || json!({ "formula": f.to_sexpr(), "source": s, "right_deep": rs, "balanced": bs, "equivalent": same }));
    }
    let f = build_matrix_formula(FormulaKind::SigmaI, 2, 4, 2, 1, 1)?;
    let (rd, bal) = (right_deep(&f), balanced(&f));
    let mismatch = (0..1u64 << 16).find(|&code| {
        let t = MatrixTuple {
            n: 2,
            mats: (0..4).map(|i| code >> (4 * i) & 15).collect(),
        };
        let want = f.eval_with(&|v| t.var(v));
        rd.eval_with(&|v| t.var(v)) != want || bal.eval_with(&|v| t.var(v)) != want
    });
    det.check(
        mismatch.is_none(),
        || json!({ "formula": "SigmaI(2,4,2)", "input_code": mismatch }),
    );

    let mut randomized = SuiteReport::new("randomized samples");
    let sources = [
        (FormulaKind::D, 2, 3, 1),
        (FormulaKind::C, 2, 3, 1),
        (FormulaKind::SigmaI, 2, 4, 2),
        (FormulaKind::SigmaII, 2, 4, 2),
        (FormulaKind::PiII, 2, 4, 2),
    ];
    for (kind, n, k, d) in sources {
        let f = build_matrix_formula(kind, n, k, d, 1, 1)?;
        let s = f.stats();
        for t in 1..=3usize {
            for i in 0..samples as u64 {
                let g = randomized_conversion(
                    &f,
                    t,
                    &mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(i)),
                );
                let gs = g.stats();
                let depth_bound = s.depth * ceil_log2(t * s.size);
                let size_bound = (t as u128).pow(s.depth as u32) * s.size as u128;
                randomized.check(gs.depth <= depth_bound && gs.size as u128 <= size_bound, || {
                    json!({ "kind": kind, "t": t, "seed": seed.wrapping_add(i), "sample": gs, "depth_bound": depth_bound, "size_bound": size_bound.to_string() })
                });
            }
        }
    }
    let mut report = SuiteReport::new("conversions");
    report.absorb(det);
    report.absorb(randomized);
    Ok(report)
}

/// `⌈(log₂ s)²⌉`.
pub fn auto_t(size: usize) -> usize {
    let l = (size.max(2) as f64).log2();
    (l * l).ceil() as usize
}

/// Agreement of randomized-conversion samples with the source formula on
/// fixed sub-permutation inputs: sample `i` uses seed `seed + i`; the inputs
/// are drawn from `seed` and always include the identity and the zero tuple.
/// Passes when every input agrees in at least `threshold` of the samples.
#[allow(clippy::too_many_arguments)]
pub fn randomized_conversion_experiment(
    kind: FormulaKind,
    n: usize,
    k: usize,
    d: u32,
    t: Option<usize>,
    seeds: usize,
    inputs: usize,
    seed: u64,
    threshold: f64,
) -> Result<SuiteReport> {
    let f = build_matrix_formula(kind, n, k, d, 1, 1)?;
    let s = f.stats();
    let t = t.unwrap_or_else(|| auto_t(s.size));
    let size_bound = (t as u128).pow(s.depth as u32) * s.size as u128;
    crate::error::check_limit(
        "sample size",
        size_bound.min(u64::MAX as u128) as u64,
        10_000_000,
    )?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fixed = vec![MatrixTuple::identity(n, k), MatrixTuple::zeros(n, k)];
    while fixed.len() < inputs.max(2) {
        fixed.push(MatrixTuple::random(
            n,
            k,
            InputClass::SubPermutation,
            &mut rng,
        ));
    }
    let want: Vec<bool> = fixed.iter().map(|x| f.eval_with(&|v| x.var(v))).collect();
    let mut agree = vec![0usize; fixed.len()];
    let mut report = SuiteReport::new("randomized-conversion");
    let depth_bound = s.depth * ceil_log2(t * s.size);
    for i in 0..seeds as u64 {
        let g = randomized_conversion(&f, t, &mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(i)));
        let gs = g.stats();
        report.check(
            gs.depth <= depth_bound && gs.size as u128 <= size_bound,
            || json!({ "seed": seed.wrapping_add(i), "sample": gs }),
        );
        for (j, x) in fixed.iter().enumerate() {
            agree[j] += (g.eval_with(&|v| x.var(v)) == want[j]) as usize;
        }
    }
    let rates: Vec<f64> = agree
        .iter()
        .map(|&a| a as f64 / seeds.max(1) as f64)
        .collect();
    let min_rate = rates.iter().cloned().fold(1.0, f64::min);
    let overall = agree.iter().sum::<usize>() as f64 / (seeds.max(1) * fixed.len()) as f64;
    let worst = rates.iter().position(|&r| r == min_rate).unwrap_or(0);
    report.check(
        min_rate >= threshold,
        || json!({ "input": fixed[worst], "rate": min_rate }),
    );
    report.note(
        "formula",
        json!({ "kind": kind, "n": n, "k": k, "d": d, "stats": s }),
    );
    report.note("t", t);
    report.note("seeds", seeds);
    report.note("inputs", fixed.len());
    report.note("positive inputs", want.iter().filter(|&&w| w).count());
    report.note("min_agreement", min_rate);
    report.note("agreement", overall);
    report.note("threshold", threshold);
    Ok(report)
}

fn path_alphas(n: u32, k: u32) -> Vec<Vec<u32>> {
    crate::pathsets::assignments(n, k as usize + 1)
        .filter(|a| a[0] == 1 && a[k as usize] == 1)
        .collect()
}

fn all_subgraphs(k: i64) -> Vec<PathGraph> {
    (0u32..1 << k)
        .map(|m| PathGraph::from_edges((1..=k).filter(|i| m >> (i - 1) & 1 == 1)))
        .collect()
}

/// The `Path_k`-minterms of every SUB-PMM formula with `n ≤ max_n`,
/// `k ≤ max_k` are the assignments with both endpoints at 1 (density
/// `n^{−2}`); the join containments on all `G ⊆ Path_3` at `n = 2`; the
/// covering identity at `n = 2`, `k = 3` over all strict trees.
pub fn minterm_suite(max_n: u32, max_k: u32, random: usize, seed: u64) -> Result<SuiteReport> {
    let mut bridge = SuiteReport::new("path minterms");
    for n in 2..=max_n {
        for k in 1..=max_k {
            let mut kinds = vec![(FormulaKind::D, 1), (FormulaKind::C, 1)];
            if k == 4 {
                kinds.extend([
                    (FormulaKind::SigmaI, 2),
                    (FormulaKind::SigmaII, 2),
                    (FormulaKind::PiII, 2),
                ]);
            }
            for (kind, d) in kinds {
                let f = sub_pmm(kind, n as usize, k as usize, d)?;
                let m = minterms(
                    &formula_evaluator(&f),
                    &PathGraph::path_k(k as i64),
                    MintermMode::M,
                    n,
                    k,
                    DEFAULT_EVAL_BUDGET,
                )?;
                let expected = path_alphas(n, k);
                let got: Vec<Vec<u32>> = m.tuples().cloned().collect();
                let mu = density(&m, None);
                let ok = got == expected
                    && mu == num_rational::BigRational::new(1.into(), (n * n).into());
                bridge.check(ok, || json!({ "kind": kind, "n": n, "k": k, "d": d, "minterms": got.len(), "density": mu.to_string() }));
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut formulas: Vec<DeMorgan> = vec![
        sub_pmm(FormulaKind::D, 2, 3, 1)?,
        sub_pmm(FormulaKind::C, 2, 3, 1)?,
    ];
    formulas.push(balanced(&build_matrix_formula(
        FormulaKind::D,
        2,
        3,
        1,
        1,
        1,
    )?));
    formulas.extend((0..random).map(|_| random_monotone(&mut rng, 2, 3, 5)));

    let mut joins = SuiteReport::new("join containments");
    let graphs = all_subgraphs(3);
    for w in formulas.windows(2) {
        for g in &graphs {
            let r = join0_check(
                &formula_evaluator(&w[0]),
                &formula_evaluator(&w[1]),
                g,
                2,
                3,
            )?;
            joins.check(r.holds(), || json!({ "f1": w[0].to_string(), "f2": w[1].to_string(), "graph": g, "report": r }));
        }
    }
    if let Some((l, r)) = formulas[0].parts().map(|(_, l, r)| (l.clone(), r.clone())) {
        for g in &graphs {
            let rep = join0_check(&formula_evaluator(&l), &formula_evaluator(&r), g, 2, 3)?;
            joins.check(
                rep.holds(),
                || json!({ "f1": l.to_string(), "f2": r.to_string(), "graph": g, "report": rep }),
            );
        }
    }

    let mut covering = SuiteReport::new("covering");
    let mut trees = 0;
    for f in &formulas {
        for g in graphs.iter().filter(|g| !g.is_empty()) {
            let r = covering_check(f, g, 2, 3)?;
            trees += r.trees;
            covering.check(
                r.holds(),
                || json!({ "formula": f.to_string(), "report": r }),
            );
        }
    }
    covering.note("trees", trees);

    let mut report = SuiteReport::new("minterms");
    for sub in [bridge, joins, covering] {
        report.absorb(sub);
    }
    Ok(report)
}

/// Toy pipelines at `n = 2`, `k = 3`: the DNF in both conversions, each
/// unrestricted and after `restrictions` random restrictions. Pipelines
/// whose subformula relations are all pathsets are checked on every strict
/// `Path_3`-join tree against `cost ≤ (D+1)^{‖G‖}·size` and
/// `cost ≥ ñ^{Ψ(T)}·μ`; the others are counted as skipped.
pub fn chi_bounds(restrictions: usize, seed: u64) -> Result<SuiteReport> {
    let params = PathsetParams::new(2, 3)?;
    let d = build_matrix_formula(FormulaKind::D, 2, 3, 1, 1, 1)?;
    let bases = [right_deep(&d), balanced(&d)];
    let trees = enumerate_strict(&PathGraph::path_k(3), DepthKind::Left, 3, 5)?;
    let mut report = SuiteReport::new("chi-bounds");
    let (mut pipelines, mut skipped, mut positive) = (0, 0, 0);
    for base in &bases {
        let mut variants = vec![base.clone()];
        for i in 0..restrictions as u64 {
            let xi = sample_xi(2, 3, seed.wrapping_add(i))?.xi_graph()?;
            variants.push(restrict_formula(base, &xi));
        }
        for f in variants {
            if subformula_pathset_violation(&f, &params)?.is_some() {
                skipped += 1;
                continue;
            }
            pipelines += 1;
            for t in &trees {
                let r = chi_decomposition_cost(&f, t, &params)?;
                positive += (r.cost > 0) as usize;
                let ok = r.cost <= r.relaxed_upper_bound && r.upper_holds() && r.lower_holds();
                report.check(ok, || json!({ "formula": f.to_string(), "report": r }));
            }
        }
    }
    report.check(pipelines > 0, || {
        "no pipeline had pathset subformula relations"
    });
    report.note("pipelines", pipelines);
    report.note("skipped (non-pathset)", skipped);
    report.note("trees", trees.len());
    report.note("positive costs", positive);
    Ok(report)
}

/// Strict-tree enumeration against the independent count and the
/// `2^{‖G‖^{d+1}}` bound (left depth, `‖G‖ ≤ max_edges`, `d ≤ max_d`; sem
/// depth for `‖G‖ ≤ 4`), and the strict DeMorgan counts against
/// `2^{2^{(d+1)(k+1)}}`.
pub fn strict_counts(max_edges: i64, max_d: usize) -> Result<SuiteReport> {
    fn at_most_pow2(count: u128, e: u64) -> bool {
        e >= 127 || count <= 1u128 << e
    }
    let mut report = SuiteReport::new("strict-counts");
    let mut rows = Vec::new();
    for m in 1..=max_edges {
        let g = PathGraph::path_k(m);
        for d in 0..=max_d {
            let trees = enumerate_strict(&g, DepthKind::Left, d, max_edges as usize)?;
            let count = count_strict(&g, Some(d))?;
            let e = (m as u64).saturating_pow(d as u32 + 1);
            report.check(trees.len() as u128 == count && at_most_pow2(count, e), || json!({ "edges": m, "d": d, "enumerated": trees.len(), "count": count.to_string() }));
            let mut row = json!({ "edges": m, "d": d, "left": count.to_string() });
            if m <= 4 {
                let sem = enumerate_strict(&g, DepthKind::Sem, d, 4)?.len();
                report.check(
                    at_most_pow2(sem as u128, e),
                    || json!({ "edges": m, "d": d, "sem": sem }),
                );
                row["sem"] = sem.into();
            }
            rows.push(row);
        }
    }
    let mut dm = Vec::new();
    for (k, d) in [(1usize, 0usize), (1, 1), (2, 0), (2, 1), (3, 0)] {
        let c = count_strict_demorgan(k, d, 2_000_000)?;
        let e = 1u64 << ((d + 1) * (k + 1));
        report.check(
            at_most_pow2(c, e),
            || json!({ "k": k, "d": d, "count": c.to_string() }),
        );
        dm.push(json!({ "k": k, "d": d, "count": c.to_string() }));
    }
    report.note("trees", rows);
    report.note("demorgan", dm);
    Ok(report)
}

/// Every witness construction on random coverings with `k ≤ max_k`:
/// achieved value at least the guarantee, and the strong-shift induced
/// orders keep their `vec_delta` bound.
pub fn witnesses(instances: usize, max_k: i64, seed: u64) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut groups: Vec<SuiteReport> = [
        "premain-I",
        "premain-II",
        "main-I",
        "main-II",
        "strong shift (premain)",
        "strong shift (gap)",
    ]
    .iter()
    .map(|n| SuiteReport::new(n))
    .collect();
    for _ in 0..instances {
        let k = rng.gen_range(1..=max_k);
        let cov = random_edge_covering(&mut rng, k);
        let w = construct_premain_i(&cov)?;
        groups[0].check(
            w.holds(),
            || json!({ "seq": graphs_json(&cov), "witness": w }),
        );

        let seq = random_connected(&mut rng, k);
        let w = construct_premain_ii(&seq)?;
        groups[1].check(
            w.holds(),
            || json!({ "seq": graphs_json(&seq), "witness": w }),
        );
        let s = construct_strong_shift(&seq, StrongMode::Premain)?;
        groups[4].check(
            s.witness.holds() && s.min_induced_vec_delta as f64 + 1e-9 >= s.induced_bound,
            || json!({ "seq": graphs_json(&seq), "result": s }),
        );

        let cov = random_covering(&mut rng, k, 8);
        let w = construct_main_i(&cov)?;
        groups[2].check(
            w.holds(),
            || json!({ "seq": graphs_json(&cov), "witness": w }),
        );

        let seq = random_covering(&mut rng, k, 6);
        let w = construct_main_ii(&seq)?;
        groups[3].check(
            w.holds(),
            || json!({ "seq": graphs_json(&seq), "witness": w }),
        );
        let s = construct_strong_shift(&seq, StrongMode::Gap)?;
        groups[5].check(
            s.witness.holds() && s.min_induced_vec_delta as f64 + 1e-9 >= s.induced_bound,
            || json!({ "seq": graphs_json(&seq), "result": s }),
        );
    }
    let mut report = SuiteReport::new("witnesses");
    for g in groups {
        report.absorb(g);
    }
    Ok(report)
}

/// `samples` restrictions at `(n, k)` with seeds `seed + i`; every `ξ` must
/// be a tuple of sub-permutation matrices.
pub fn xi_samples(n: usize, k: usize, samples: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("xi samples");
    let mut ones = 0usize;
    for i in 0..samples as u64 {
        let s = sample_xi(n, k, seed.wrapping_add(i))?;
        ones += s.xi.iter().map(Vec::len).sum::<usize>();
        report.check(s.xi_is_sub_permutation(), || &s);
    }
    report.note("mean ones per sample", ones as f64 / samples.max(1) as f64);
    Ok(report)
}

/// The restriction experiment on the Boolean product's `(1,1)` entry:
/// frequency of `μ(M_{Path_k}(f^{∪Ξ})) ≥ 1/(2n²)`; passes when the
/// frequency reaches `threshold`.
pub fn restriction_experiment(
    n: usize,
    k: usize,
    trials: usize,
    seed: u64,
    threshold: f64,
    budget: u64,
) -> Result<(SuiteReport, Vec<(u64, usize, f64)>)> {
    let mc = montecarlo_mpath2(&bmm_evaluator(1, 1), n, k, trials, seed, budget)?;
    let mut report = SuiteReport::new("restriction");
    report.check(
        mc.frequency >= threshold,
        || json!({ "frequency": mc.frequency, "threshold": threshold }),
    );
    report.note("n", n);
    report.note("k", k);
    report.note("trials", mc.trials);
    report.note("successes", mc.successes);
    report.note("frequency", mc.frequency);
    report.note("threshold", threshold);
    Ok((report, mc.rows))
}

/// The `ε₁` experiment with uniform labels; passes when every frequency is
/// positive and the frequency at the last `t` lies within `sigmas` standard
/// errors (of the difference) of the frequency at `reference_t`.
pub fn eps1_experiment(
    k: usize,
    ts: &[usize],
    reference_t: usize,
    trials: usize,
    seed: u64,
    sigmas: f64,
) -> Result<(SuiteReport, crate::pathsets::Eps1Report)> {
    let p = vec![1.0 / k.max(1) as f64; k];
    let rep = montecarlo_eps1(k, ts, &p, trials, seed)?;
    let mut report = SuiteReport::new("eps1");
    for row in &rep.rows {
        report.check(row.frequency > 0.0, || row);
    }
    let reference = rep.row(reference_t).or(rep.rows.first());
    if let (Some(a), Some(b)) = (reference, rep.rows.last()) {
        let se = (a.std_error.powi(2) + b.std_error.powi(2)).sqrt();
        let diff = (b.frequency - a.frequency).abs();
        report.check(
            diff <= sigmas * se,
            || json!({ "reference": a, "last": b, "sigmas": sigmas }),
        );
        report.note("reference_t", a.t);
        report.note("difference", diff);
        report.note("difference_se", se);
    }
    report.note(
        "floor",
        rep.rows.iter().map(|r| r.frequency).fold(1.0, f64::min),
    );
    report.note("k", k);
    report.note("trials", trials);
    Ok((report, rep))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_record_first_failure() {
        let mut r = SuiteReport::new("x");
        r.check(true, || 0);
        r.check(false, || 1);
        r.check(false, || 2);
        assert_eq!((r.checked, r.failures), (3, 2));
        assert_eq!(r.counterexample, Some(json!(1)));
        let mut outer = SuiteReport::new("outer");
        outer.absorb(r);
        assert!(!outer.passed());
        assert_eq!(outer.details["x"]["failures"], json!(2));
    }

    #[test]
    fn small_suites_pass() {
        assert!(delta_props(30, 1).unwrap().passed());
        assert!(psi_recurrences(5, 1).unwrap().passed());
        assert!(lp(&[1, 2]).unwrap().passed());
        assert!(tradeoff(TradeoffKind::I, 3, 20, 5, 1).unwrap().passed());
        assert!(chain_rules(20, 1).unwrap().passed());
        assert!(witnesses(20, 12, 1).unwrap().passed());
        assert!(xi_samples(5, 3, 50, 1).unwrap().passed());
    }

    #[test]
    fn suites_are_deterministic() {
        let a = serde_json::to_string(&delta_props(20, 3).unwrap()).unwrap();
        let b = serde_json::to_string(&delta_props(20, 3).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn auto_t_examples() {
        assert_eq!(auto_t(4), 4);
        assert_eq!(auto_t(12), 13);
        assert_eq!(auto_t(1), 1);
    }

    #[test]
    fn formula_suite_reports_inputs() {
        let r = formulas(FormulaKind::C, 2, 3, 1, None, CheckMode::Exhaustive).unwrap();
        assert!(r.passed());
        assert_eq!(r.details["inputs"], json!(343));
        let r = formulas(
            FormulaKind::C,
            2,
            3,
            1,
            Some(InputClass::RowConstrained),
            CheckMode::Exhaustive,
        )
        .unwrap();
        assert!(!r.passed() && r.counterexample.is_some());
    }
}
