//! Batch front end: `measure`, `verify` and `experiment` subcommands with
//! JSON, CSV or plain-text reports. Reports depend only on the arguments.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use joinlab::formulas::{CheckMode, FormulaKind, InputClass};
use joinlab::greedylab::{check_greedy_ratio, greedy_order, is_vec_delta_greedy};
use joinlab::jointree::{TradeoffKind, DEFAULT_DP_LIMIT, DEFAULT_MEMO_LIMIT};
use joinlab::pathgraph::{gap, vec_measures};
use joinlab::pathsets::DEFAULT_EVAL_BUDGET;
use joinlab::shiftperm::{best_shift, Objective};
use joinlab::suites::{self, SuiteReport};
use joinlab::{JoinTree, LabError, PathGraph};

#[derive(Parser, Debug)]
#[command(
    name = "joinlab",
    version,
    about = "Join trees, shift permutations, pathsets and SUB-PMM formulas"
)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Base seed; trial `i` of a Monte Carlo run uses `seed + i`.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    #[command(flatten)]
    limits: Limits,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Limits {
    /// Largest branch covering handed to the Ψ subset DP.
    #[arg(long = "limit-psi-dp", default_value_t = DEFAULT_DP_LIMIT, global = true)]
    psi_dp: usize,
    /// Memo entries for sem-depth recognition.
    #[arg(long = "limit-memo", default_value_t = DEFAULT_MEMO_LIMIT, global = true)]
    memo: usize,
    /// Formula evaluations per minterm relation.
    #[arg(long = "limit-evals", default_value_t = DEFAULT_EVAL_BUDGET, global = true)]
    evals: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Measure a sequence of path graphs or a join tree.
    Measure {
        #[arg(value_enum)]
        what: Measure,
        /// JSON array of graphs (`{"intervals": [[s,t],...]}` or bare interval lists).
        #[arg(long)]
        seq: Option<PathBuf>,
        /// JSON join tree (`{"leaf": graph}` / `{"node": [l, r]}`).
        #[arg(long)]
        tree: Option<PathBuf>,
        /// Ordering of the sequence for the vec measures.
        #[arg(long, value_enum, default_value_t = Order::Standard)]
        order: Order,
        /// Objective for `best-shift`.
        #[arg(long, value_enum, default_value_t = ObjectiveArg::Vecdelta)]
        objective: ObjectiveArg,
    },
    /// Run an invariant suite; exit 1 with the first counterexample on failure.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Run a Monte Carlo experiment.
    Experiment {
        #[command(subcommand)]
        experiment: Experiment,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Measure {
    Vecdelta,
    Veclambda,
    Veclambdadelta,
    Psi,
    Gap,
    Depths,
    BestShift,
    Greedy,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Order {
    Standard,
    /// Odd positions first, then even positions.
    OddEven,
    /// The best shift permutation for the measure.
    Best,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ObjectiveArg {
    Vecdelta,
    Veclambda,
    Veclambdadelta,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Vecdelta => Objective::VecDelta,
            ObjectiveArg::Veclambda => Objective::VecLambda,
            ObjectiveArg::Veclambdadelta => Objective::VecLambdaDelta,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ClassArg {
    Arbitrary,
    RowConstrained,
    SubPermutation,
}

impl From<ClassArg> for InputClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::Arbitrary => InputClass::Arbitrary,
            ClassArg::RowConstrained => InputClass::RowConstrained,
            ClassArg::SubPermutation => InputClass::SubPermutation,
        }
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct TradeoffArgs {
    /// Check every strict `Path_k` tree for `k` up to this.
    #[arg(long, default_value_t = 4)]
    enumerate_k: i64,
    /// Number of random strict trees.
    #[arg(long, default_value_t = 1000)]
    random: usize,
    /// Largest `k` of the random trees.
    #[arg(long, default_value_t = 8)]
    max_k: i64,
}

#[derive(Subcommand, Debug)]
enum Suite {
    /// Conditional vec-delta identities, induced orders, gap bounds, numerical inequalities.
    DeltaProps {
        #[arg(long, default_value_t = 500)]
        instances: usize,
    },
    /// LP certificates of the greedy ratio and rejection of perturbed certificates.
    Lp {
        /// A value, a range `a..b` (inclusive) or a comma list.
        #[arg(long, default_value = "1..6")]
        t: String,
    },
    /// Left-depth tradeoff inequality.
    #[command(name = "tradeoff-I", alias = "tradeoff-i")]
    TradeoffI(TradeoffArgs),
    /// Sem-depth tradeoff inequality.
    #[command(name = "tradeoff-II", alias = "tradeoff-ii")]
    TradeoffII(TradeoffArgs),
    /// Ψ recurrences for `[[·]]`, `⟨⟨·⟩⟩` and whole trees.
    PsiRecurrences {
        #[arg(long, default_value_t = 500)]
        instances: usize,
    },
    /// Conditional chain rules for relation densities.
    ChainRules {
        #[arg(long, default_value_t = 1000)]
        instances: usize,
    },
    /// One SUB-PMM formula against the matrix-product oracle.
    Formulas {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        d: u32,
        /// D, C, SigmaI, SigmaII or PiII.
        #[arg(long, default_value = "D")]
        kind: String,
        /// Input class (default: arbitrary for D, sub-permutation otherwise).
        #[arg(long, value_enum)]
        class: Option<ClassArg>,
        /// Check every input of the class instead of a sample.
        #[arg(long)]
        exhaustive: bool,
        /// Sample size when not exhaustive.
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Size and fan-in bounds of every SUB-PMM construction up to the given parameters.
    FormulaBounds {
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[arg(long, default_value_t = 27)]
        max_k: usize,
        #[arg(long, default_value_t = 3)]
        max_d: u32,
    },
    /// Path minterms of SUB-PMM formulas, join containments, covering identity.
    Minterms {
        #[arg(long, default_value_t = 4)]
        max_n: u32,
        #[arg(long, default_value_t = 4)]
        max_k: u32,
        /// Random monotone formulas added to the join and covering checks.
        #[arg(long, default_value_t = 20)]
        random: usize,
    },
    /// Strict-tree and strict-formula counts against their bounds.
    StrictCounts {
        #[arg(long, default_value_t = 4)]
        max_edges: i64,
        #[arg(long, default_value_t = 3)]
        max_d: usize,
    },
    /// Witness constructions against their guarantees.
    Witnesses {
        #[arg(long, default_value_t = 500)]
        instances: usize,
        #[arg(long, default_value_t = 30)]
        max_k: i64,
    },
    /// DeMorgan conversions: function, size and depth contracts.
    Conversions {
        #[arg(long, default_value_t = 300)]
        instances: usize,
        /// Randomized samples per formula and `t`.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Decomposition cost between its upper bound and the Ψ lower bound.
    ChiBounds {
        /// Random restrictions per base formula.
        #[arg(long, default_value_t = 40)]
        restrictions: usize,
    },
    /// Sampled restrictions are sub-permutation matrices.
    Xi {
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Experiment {
    /// Density of the path minterms of the Boolean product after a random restriction.
    Restriction {
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// Exit 1 when the frequency is below this.
        #[arg(long, default_value_t = 0.0)]
        expect: f64,
    },
    /// Frequency of `strict(T_t) = ⟨⟨E_1..E_k⟩⟩` for random complete trees.
    Eps1 {
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Inclusive range `a..b`, a value or a comma list.
        #[arg(long, default_value = "2..10")]
        t_range: String,
        #[arg(long, default_value_t = 5000)]
        trials: usize,
        /// The last frequency is compared with the one at this `t`.
        #[arg(long, default_value_t = 4)]
        reference_t: usize,
        /// Allowed difference in standard errors.
        #[arg(long, default_value_t = 3.0)]
        sigmas: f64,
    },
    /// Agreement of randomized DeMorgan conversions with the source formula.
    RandomizedConversion {
        #[arg(long, default_value = "D")]
        kind: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        d: u32,
        /// `auto` for ⌈(log₂ size)²⌉, or a positive integer.
        #[arg(long, default_value = "auto")]
        t: String,
        #[arg(long, default_value_t = 1000)]
        seeds: usize,
        /// Fixed sub-permutation inputs.
        #[arg(long, default_value_t = 32)]
        inputs: usize,
        #[arg(long, default_value_t = 0.99)]
        threshold: f64,
    },
}

/// Failures that are not check failures.
enum Failure {
    Input(String),
    Limit(String),
}

impl From<LabError> for Failure {
    fn from(e: LabError) -> Self {
        match e {
            LabError::ResourceLimit { .. } => Failure::Limit(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

struct Output {
    summary: Value,
    rows: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
    passed: bool,
}

impl Output {
    fn value(summary: Value) -> Self {
        Output {
            summary,
            rows: None,
            passed: true,
        }
    }

    fn suite(report: SuiteReport) -> Self {
        let passed = report.passed();
        let mut summary = serde_json::to_value(&report).unwrap_or(Value::Null);
        summary["passed"] = passed.into();
        Output {
            summary,
            rows: None,
            passed,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum GraphInput {
    Graph(PathGraph),
    Intervals(Vec<(i64, i64)>),
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_seq(path: Option<&PathBuf>) -> Result<Vec<PathGraph>, Failure> {
    let path = path.ok_or_else(|| Failure::Input("--seq is required".into()))?;
    let items: Vec<GraphInput> = serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    items
        .into_iter()
        .map(|g| match g {
            GraphInput::Graph(g) => Ok(g),
            GraphInput::Intervals(iv) => PathGraph::from_intervals(iv).map_err(Failure::from),
        })
        .collect()
}

fn read_tree(path: Option<&PathBuf>) -> Result<JoinTree, Failure> {
    let path = path.ok_or_else(|| Failure::Input("--tree is required".into()))?;
    serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// `"3"`, `"1..6"` (inclusive) or `"2,4,10"`.
fn parse_list(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || {
        Failure::Input(format!(
            "cannot parse {s:?} as a value, a range a..b or a list"
        ))
    };
    if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b
            .trim_start_matches('=')
            .trim()
            .parse()
            .map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| bad()))
        .collect()
}

fn odd_even(m: usize) -> Vec<usize> {
    (1..=m).step_by(2).chain((2..=m).step_by(2)).collect()
}

fn measure(
    what: Measure,
    seq: Option<&PathBuf>,
    tree: Option<&PathBuf>,
    order: Order,
    objective: ObjectiveArg,
    limits: Limits,
) -> Result<Output, Failure> {
    let vec_measure = |obj: Objective| -> Result<Output, Failure> {
        let seq = read_seq(seq)?;
        let (positions, value, shift) = match order {
            Order::Standard => (
                (1..=seq.len()).collect::<Vec<_>>(),
                obj.eval(&seq, &PathGraph::empty()),
                None,
            ),
            Order::OddEven => {
                let p = odd_even(seq.len());
                let v = obj.eval(&joinlab::pathgraph::permuted(&seq, &p), &PathGraph::empty());
                (p, v, None)
            }
            Order::Best => {
                let (sigma, v) = best_shift(&seq, obj)?;
                (sigma.perm().to_vec(), v, Some(sigma))
            }
        };
        Ok(Output::value(json!({
            "measure": obj,
            "value": value,
            "graphs": seq.len(),
            "order": positions,
            "shift": shift,
        })))
    };
    match what {
        Measure::Vecdelta => vec_measure(Objective::VecDelta),
        Measure::Veclambda => vec_measure(Objective::VecLambda),
        Measure::Veclambdadelta => vec_measure(Objective::VecLambdaDelta),
        Measure::BestShift => {
            let seq = read_seq(seq)?;
            let obj = Objective::from(objective);
            let (sigma, v) = best_shift(&seq, obj)?;
            Ok(Output::value(
                json!({ "measure": obj, "value": v, "shift": sigma, "order": sigma.perm() }),
            ))
        }
        Measure::Gap => {
            let seq = read_seq(seq)?;
            let g = gap(&seq)?;
            Ok(Output::value(
                json!({ "gap": g.to_string(), "approx": *g.numer() as f64 / *g.denom() as f64 }),
            ))
        }
        Measure::Greedy => {
            let seq = read_seq(seq)?;
            let empty = PathGraph::empty();
            let order = greedy_order(&seq, &empty);
            let ratio = check_greedy_ratio(&order, &empty)?;
            Ok(Output::value(json!({
                "input_is_greedy": is_vec_delta_greedy(&seq, &empty),
                "input": vec_measures(&seq, &empty),
                "greedy_order": order,
                "greedy": vec_measures(&order, &empty),
                "ratio": ratio,
            })))
        }
        Measure::Psi | Measure::Depths => {
            let t = read_tree(tree)?;
            let psi = t.psi_with_limit(limits.psi_dp)?;
            let mut out = json!({
                "tree": t.to_string(),
                "graph": t.graph(),
                "leaves": t.leaf_count(),
                "psi": psi,
            });
            if matches!(what, Measure::Depths) {
                out["depths"] = serde_json::to_value(t.depths(limits.memo)?).unwrap_or(Value::Null);
            }
            Ok(Output::value(out))
        }
    }
}

fn verify(suite: Suite, seed: u64) -> Result<Output, Failure> {
    let report = match suite {
        Suite::DeltaProps { instances } => suites::delta_props(instances, seed)?,
        Suite::Lp { t } => suites::lp(&parse_list(&t)?)?,
        Suite::TradeoffI(a) => {
            suites::tradeoff(TradeoffKind::I, a.enumerate_k, a.random, a.max_k, seed)?
        }
        Suite::TradeoffII(a) => {
            suites::tradeoff(TradeoffKind::II, a.enumerate_k, a.random, a.max_k, seed)?
        }
        Suite::PsiRecurrences { instances } => suites::psi_recurrences(instances, seed)?,
        Suite::ChainRules { instances } => suites::chain_rules(instances, seed)?,
        Suite::Formulas {
            n,
            k,
            d,
            kind,
            class,
            exhaustive,
            samples,
        } => {
            let kind: FormulaKind = kind.parse()?;
            let mode = if exhaustive {
                CheckMode::Exhaustive
            } else {
                CheckMode::Sample {
                    count: samples,
                    seed,
                }
            };
            suites::formulas(kind, n, k, d, class.map(InputClass::from), mode)?
        }
        Suite::FormulaBounds {
            max_n,
            max_k,
            max_d,
        } => suites::formula_bounds(max_n, max_k, max_d)?,
        Suite::Minterms {
            max_n,
            max_k,
            random,
        } => suites::minterm_suite(max_n, max_k, random, seed)?,
        Suite::StrictCounts { max_edges, max_d } => suites::strict_counts(max_edges, max_d)?,
        Suite::Witnesses { instances, max_k } => suites::witnesses(instances, max_k, seed)?,
        Suite::Conversions { instances, samples } => suites::conversions(instances, samples, seed)?,
        Suite::ChiBounds { restrictions } => suites::chi_bounds(restrictions, seed)?,
        Suite::Xi { n, k, samples } => suites::xi_samples(n, k, samples, seed)?,
    };
    Ok(Output::suite(report))
}

fn experiment(e: Experiment, seed: u64, limits: Limits) -> Result<Output, Failure> {
    match e {
        Experiment::Restriction {
            n,
            k,
            trials,
            expect,
        } => {
            let (report, rows) =
                suites::restriction_experiment(n, k, trials, seed, expect, limits.evals)?;
            let mut out = Output::suite(report);
            out.rows = Some((
                vec!["seed", "minterms", "density"],
                rows.iter()
                    .map(|(s, c, d)| vec![s.to_string(), c.to_string(), d.to_string()])
                    .collect(),
            ));
            Ok(out)
        }
        Experiment::Eps1 {
            k,
            t_range,
            trials,
            reference_t,
            sigmas,
        } => {
            let ts = parse_list(&t_range)?;
            let (report, rep) = suites::eps1_experiment(k, &ts, reference_t, trials, seed, sigmas)?;
            let mut out = Output::suite(report);
            out.summary["rows"] = serde_json::to_value(&rep.rows).unwrap_or(Value::Null);
            out.rows = Some((
                vec!["t", "trials", "hits", "frequency", "std_error"],
                rep.rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.t.to_string(),
                            r.trials.to_string(),
                            r.hits.to_string(),
                            r.frequency.to_string(),
                            r.std_error.to_string(),
                        ]
                    })
                    .collect(),
            ));
            Ok(out)
        }
        Experiment::RandomizedConversion {
            kind,
            n,
            k,
            d,
            t,
            seeds,
            inputs,
            threshold,
        } => {
            let kind: FormulaKind = kind.parse()?;
            let t = match t.as_str() {
                "auto" => None,
                s => Some(s.parse::<usize>().ok().filter(|&t| t >= 1).ok_or_else(|| {
                    Failure::Input(format!("--t must be auto or a positive integer, got {s}"))
                })?),
            };
            Ok(Output::suite(suites::randomized_conversion_experiment(
                kind, n, k, d, t, seeds, inputs, seed, threshold,
            )?))
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(m) if !m.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        pretty(x, indent + 1, out);
                    }
                    Value::Array(a) if a.iter().any(|e| e.is_object()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for e in a {
                            out.push_str(&format!("{pad}  -\n"));
                            pretty(e, indent + 2, out);
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, rows);
            }
        }
        other => rows.push((prefix.to_string(), scalar(other))),
    }
}

fn emit(out: &Output, format: Format) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Input(e.to_string());
    match format {
        Format::Json => {
            let mut summary = out.summary.clone();
            if let (Some((header, rows)), Value::Object(map)) = (&out.rows, &mut summary) {
                if !map.contains_key("rows") {
                    let objs: Vec<Value> = rows
                        .iter()
                        .map(|r| {
                            Value::Object(
                                header
                                    .iter()
                                    .zip(r)
                                    .map(|(h, c)| (h.to_string(), Value::String(c.clone())))
                                    .collect::<Map<_, _>>(),
                            )
                        })
                        .collect();
                    map.insert("rows".into(), Value::Array(objs));
                }
            }
            let text = serde_json::to_string_pretty(&summary)
                .map_err(|e| Failure::Input(e.to_string()))?;
            write_stdout(format!("{text}\n").as_bytes()).map_err(io)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let csv_err = |e: csv::Error| Failure::Input(e.to_string());
            match &out.rows {
                Some((header, rows)) => {
                    w.write_record(header).map_err(csv_err)?;
                    for r in rows {
                        w.write_record(r).map_err(csv_err)?;
                    }
                    eprintln!("{}", out.summary);
                }
                None => {
                    let mut rows = Vec::new();
                    flatten("", &out.summary, &mut rows);
                    w.write_record(["key", "value"]).map_err(csv_err)?;
                    for (k, v) in rows {
                        w.write_record([k, v]).map_err(csv_err)?;
                    }
                }
            }
            let bytes = w.into_inner().map_err(|e| Failure::Input(e.to_string()))?;
            write_stdout(&bytes).map_err(io)?;
        }
        Format::Pretty => {
            let mut text = String::new();
            pretty(&out.summary, 0, &mut text);
            if let Some((header, rows)) = &out.rows {
                text.push_str(&header.join("\t"));
                text.push('\n');
                for r in rows {
                    text.push_str(&r.join("\t"));
                    text.push('\n');
                }
            }
            write_stdout(text.as_bytes()).map_err(io)?;
        }
    }
    Ok(())
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn write_stdout(bytes: &[u8]) -> std::io::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(bytes).and_then(|_| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r,
    }
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::Measure {
            what,
            seq,
            tree,
            order,
            objective,
        } => measure(
            what,
            seq.as_ref(),
            tree.as_ref(),
            order,
            objective,
            cli.limits,
        ),
        Command::Verify { suite } => verify(suite, cli.seed),
        Command::Experiment { experiment: e } => experiment(e, cli.seed, cli.limits),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let result = run(cli).and_then(|out| emit(&out, format).map(|_| out.passed));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Limit(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
