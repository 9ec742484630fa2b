//! The `semireal` command line.
//!
//! Every command prints one artifact on stdout. JSON output always carries a
//! `schema` field naming the shipped schema it follows; rationals are
//! `"num/den"` strings. Exit status is 0 on success, 1 on a domain error and
//! 2 on a usage error.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus;
use crate::covers;
use crate::error::{Error, Result};
use crate::games::{self, IndexSet, Strategy};
use crate::machine::{self, Machine, BUILTIN_NAMES};
use crate::rational::Q;
use crate::real::{self, Fuel, Kind, Verdict};
use crate::reduce::{self, RaceOutcome, ReductionWitness};
use crate::transforms;

pub const SCHEMA_VERSION: &str = "v1";

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Parser)]
#[command(
    name = "semireal",
    version,
    about = "Exact-arithmetic experiments with lower semicomputable reals",
    long_about = "Exact-arithmetic experiments with lower semicomputable reals.\n\n\
        Inputs named by --real, --cover, --weights, --double and --machine are file paths \
        or bundled names: series halves, thirds, omega_default, slow_third, quarter, near_half; \
        covers around_half, around_third, around_quarter, dense; weights dense; double series \
        sample, rows; machines default, gamma, selftimed, plus `random` (a self-timing machine \
        drawn from --seed)."
)]
pub struct Cli {
    /// Fuel: term queries per stream, or stages, depending on the command.
    #[arg(long, global = true, env = "SEMIREAL_FUEL_DEFAULT", default_value_t = 1000)]
    pub fuel: u64,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the fuel-N prefix of a real's approximation sequence.
    Eval {
        #[arg(long)]
        real: String,
    },
    /// Reduction of alpha to c * beta found by the shifting race; reports witness checks and holes.
    Reduce(PairArgs),
    /// The shifting race of alpha's increments against beta: shifted intervals and holes.
    Race(PairArgs),
    /// Transfer a cover of beta to a cover of alpha along the race witness.
    CoverTransform {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        cover: String,
    },
    /// Measure of a union of dense intervals against 4/c, with the even/odd selection.
    UnionBound {
        /// Intervals, in cover-file format.
        #[arg(long)]
        intervals: String,
        #[arg(long)]
        weights: String,
        #[arg(long)]
        c: Q,
    },
    /// Play the prediction game on a real with a cover-driven or sum strategy.
    Game {
        #[arg(long, value_enum)]
        strategy: StrategyKind,
        #[arg(long)]
        real: String,
        #[arg(long)]
        cover: String,
        /// Second summand for the sum strategy.
        #[arg(long)]
        real_b: Option<String>,
        /// Cover of the second summand for the sum strategy.
        #[arg(long)]
        cover_b: Option<String>,
        #[arg(long)]
        epsilon: Q,
    },
    /// Painters started at the approximations spend epsilon times the machine's a-priori weights.
    Paint {
        #[arg(long)]
        real: String,
        #[arg(long, default_value = "default")]
        machine: String,
        #[arg(long)]
        epsilon: Q,
        /// Paint twice the handed-out amount.
        #[arg(long)]
        doubling: bool,
    },
    /// Paint the term-intervals of an index set and check its weight stays below epsilon.
    Wset {
        #[arg(long)]
        real: String,
        /// Comma-separated indices.
        #[arg(long, conflicts_with = "from", required_unless_present = "from")]
        indices: Option<String>,
        /// Every index from this one on.
        #[arg(long)]
        from: Option<usize>,
        #[arg(long)]
        epsilon: Q,
        #[arg(long, default_value_t = 64)]
        horizon: usize,
    },
    /// Finite prefix-free machine quantities.
    Machine {
        #[command(subcommand)]
        query: MachineQuery,
    },
    /// Threshold table of per-step row increments, as CSV.
    SolovayFn {
        /// Double-series file: `i j increment` per enumeration step.
        #[arg(long)]
        rows: String,
    },
    /// Term-by-term ratios of a series to a machine's a-priori weights.
    SolovayRatio {
        #[arg(long)]
        real: String,
        #[arg(long, default_value = "default")]
        machine: String,
        #[arg(long, default_value_t = 32)]
        terms: usize,
    },
    /// Row sums of a double series.
    Regroup {
        #[arg(long)]
        double: String,
    },
    /// Allocation of a-priori row weights along a double series, capped at c times each cell.
    Mtilde {
        #[arg(long)]
        double: String,
        #[arg(long, default_value = "default")]
        machine: String,
        #[arg(long)]
        c: Q,
    },
    /// Common refinement of two series with the same sum.
    Mesh {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        sum: Q,
        #[arg(long, default_value_t = 256)]
        max_terms: usize,
    },
    /// Semimeasure on term indices whose term-intervals fall inside a cover, scaled by 2^n.
    Covermeasure {
        #[arg(long)]
        real: String,
        #[arg(long)]
        cover: String,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 32)]
        terms: usize,
    },
    /// Exploratory: the gap between the two busy-beaver variants on every bundled machine.
    GapExperiment,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub beta: String,
    #[arg(long, default_value = "1")]
    pub c: Q,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyKind {
    FromCover,
    Sum,
}

#[derive(Debug, Subcommand)]
pub enum MachineQuery {
    /// Entry count, Kraft sum, halting sum, longest time.
    Stats(MachineArg),
    /// Halting-probability lower bound at the given fuel.
    Omega(MachineArg),
    /// Shortest program length for an output within the fuel.
    Kp {
        #[command(flatten)]
        machine: MachineArg,
        #[arg(long)]
        n: u64,
    },
    /// Largest output with a program of length at most m.
    Bp {
        #[command(flatten)]
        machine: MachineArg,
        #[arg(long)]
        m: usize,
    },
    /// Least N whose a-priori tail beyond N is below 2^-m.
    Bpprime {
        #[command(flatten)]
        machine: MachineArg,
        #[arg(long)]
        m: usize,
    },
    /// Longest running time among programs of length at most m.
    T {
        #[command(flatten)]
        machine: MachineArg,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Debug, Args)]
pub struct MachineArg {
    #[arg(long, default_value = "default")]
    pub machine: String,
}

/// What a command produced, in every format it supports.
struct Output {
    name: &'static str,
    json: Value,
    plain: Option<String>,
    csv: Option<String>,
    default: Format,
}

impl Output {
    fn json(name: &'static str, v: impl Serialize) -> Result<Self> {
        Ok(Output {
            name,
            json: to_value(v)?,
            plain: None,
            csv: None,
            default: Format::Json,
        })
    }

    fn plain(mut self, text: String) -> Self {
        self.plain = Some(text);
        self
    }

    fn csv(mut self, text: String) -> Self {
        self.csv = Some(text);
        self
    }

    fn default_to(mut self, f: Format) -> Self {
        self.default = f;
        self
    }

    fn render(self, format: Option<Format>) -> std::result::Result<String, String> {
        match format.unwrap_or(self.default) {
            Format::Json => {
                let mut obj = match self.json {
                    Value::Object(m) => m,
                    other => {
                        let mut m = serde_json::Map::new();
                        m.insert("value".into(), other);
                        m
                    }
                };
                obj.insert("schema".into(), Value::String(schema_id(self.name)));
                let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json values serialize");
                s.push('\n');
                Ok(s)
            }
            Format::Plain => self.plain.ok_or_else(|| format!("--format plain is not supported by {}", self.name)),
            Format::Csv => self.csv.ok_or_else(|| format!("--format csv is not supported by {}", self.name)),
        }
    }
}

/// The `schema` field value for a command, e.g. `semireal/eval/v1`.
pub fn schema_id(name: &str) -> String {
    format!("semireal/{name}/{SCHEMA_VERSION}")
}

/// Names of all emitted schemas; each has a file `schemas/<name>.schema.json`.
pub const SCHEMA_NAMES: &[&str] = &[
    "eval",
    "reduce",
    "race",
    "cover-transform",
    "union-bound",
    "game",
    "paint",
    "wset",
    "machine-stats",
    "machine-omega",
    "machine-kp",
    "machine-bp",
    "machine-bpprime",
    "machine-t",
    "solovay-fn",
    "solovay-ratio",
    "regroup",
    "mtilde",
    "mesh",
    "covermeasure",
    "gap-experiment",
];

fn to_value(v: impl Serialize) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Runs one command line; returns exit status, stdout and stderr.
pub fn run<S: AsRef<str>>(args: &[S]) -> (i32, String, String) {
    let cli = match Cli::try_parse_from(args.iter().map(|s| s.as_ref())) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.exit_code() {
                0 => (0, text, String::new()),
                _ => (2, String::new(), text),
            };
        }
    };
    match dispatch(&cli) {
        Ok(out) => match out.render(cli.format) {
            Ok(text) => (0, text, String::new()),
            Err(usage) => (2, String::new(), format!("error: {usage}\n")),
        },
        Err(e) => (1, String::new(), format!("error: {e}\n")),
    }
}

fn load_machine(spec: &str, seed: u64) -> Result<Machine> {
    if spec == "random" {
        return Ok(Machine::self_timing(seed, 40, 9));
    }
    Machine::resolve(spec)
}

/// The race of `alpha` against `c * beta`; when every interval was exited,
/// the holes so far give a witness for `alpha ⪯ alpha + holes`.
fn race_witness(p: &PairArgs, fuel: Fuel) -> Result<(RaceOutcome, Option<ReductionWitness>)> {
    let alpha = corpus::series(&p.alpha)?;
    let beta = real::scale(&corpus::series(&p.beta)?, &p.c)?;
    let outcome = reduce::race(&alpha, &beta, fuel)?;
    let w = match &outcome {
        RaceOutcome::ReducingSoFar { holes, .. } => Some(reduce::witness_from_sum(&alpha, holes)),
        RaceOutcome::CoverProduced { .. } => None,
    };
    Ok((outcome, w))
}

fn terms_text(terms: &[Q]) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        writeln!(out, "{i} {t}").unwrap();
    }
    out
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let fuel = Fuel(cli.fuel);
    match &cli.command {
        Command::Eval { real } => {
            let r = corpus::series(real)?;
            let prefix = r.to_sequence().prefix(cli.fuel as usize)?;
            let text = terms_text(&prefix);
            let csv = format!("index,value\n{}", text.replace(' ', ","));
            Ok(Output::json("eval", json!({ "kind": r.kind().to_string(), "fuel": cli.fuel, "prefix": prefix }))?
                .plain(text)
                .csv(csv)
                .default_to(Format::Plain))
        }
        Command::Reduce(p) => {
            let (outcome, w) = race_witness(p, fuel)?;
            let (status, checks, holes) = match (&outcome, &w) {
                (RaceOutcome::ReducingSoFar { holes_prefix, .. }, Some(w)) => {
                    ("reducing", w.check_known(20, fuel)?, holes_prefix.clone())
                }
                _ => ("cover_produced", Vec::new(), Vec::new()),
            };
            Output::json(
                "reduce",
                json!({
                    "status": status,
                    "constant": p.c,
                    "witness_checks": checks,
                    "all_checks_hold": checks.iter().all(|c| c.holds()),
                    "holes_prefix": holes,
                }),
            )
        }
        Command::Race(p) => {
            let (outcome, _) = race_witness(p, fuel)?;
            Output::json("race", &outcome)
        }
        Command::CoverTransform { pair, cover } => {
            let input = corpus::cover(cover)?;
            let (_, w) = race_witness(pair, fuel)?;
            let w = w.ok_or_else(|| Error::InvalidInput("the race produced a cover; no reduction to transfer along".into()))?;
            let out = covers::transform_cover(&input, &w, w.target(), fuel)?;
            let alpha = corpus::series(&pair.alpha)?;
            let contains = covers::contains(&out, &alpha, fuel)?;
            Ok(Output::json(
                "cover-transform",
                json!({
                    "input_length": covers::total_length(&input, Fuel(u64::MAX))?,
                    "output_length": covers::total_length(&out, Fuel(u64::MAX))?,
                    "contains_alpha": contains,
                    "cover": out,
                }),
            )?
            .plain(out.to_text()))
        }
        Command::UnionBound { intervals, weights, c } => {
            let items = corpus::cover(intervals)?;
            let w = corpus::weights(weights)?;
            let ub = covers::union_bound(items.items(), &w, c)?;
            Output::json(
                "union-bound",
                json!({
                    "bound": ub.bound,
                    "union_measure": ub.union_measure,
                    "holds": ub.holds(),
                    "removed": ub.removed,
                    "even_odd_partition": {
                        "even": ub.even,
                        "odd": ub.odd,
                        "even_length": ub.even_length,
                        "odd_length": ub.odd_length,
                    },
                }),
            )
        }
        Command::Game {
            strategy,
            real,
            cover,
            real_b,
            cover_b,
            epsilon,
        } => {
            let a = corpus::series(real)?;
            let cov_a = corpus::cover(cover)?;
            match strategy {
                StrategyKind::FromCover => {
                    let mut s = games::strategy_from_cover(&cov_a);
                    let trace = games::play(&mut s as &mut dyn Strategy, &a, epsilon, fuel)?;
                    Output::json("game", json!({ "strategy": "from-cover", "trace": trace, "ledger": null }))
                }
                StrategyKind::Sum => {
                    let (Some(rb), Some(cb)) = (real_b, cover_b) else {
                        return Err(Error::InvalidInput("the sum strategy needs --real-b and --cover-b".into()));
                    };
                    let b = corpus::series(rb)?;
                    let cov_b = corpus::cover(cb)?;
                    let mut s = games::sum_strategy(&cov_a, &cov_b, &a, &b);
                    let played = s.played_on();
                    let trace = games::play(&mut s, &played, epsilon, fuel)?;
                    let ledger = games::sum_ledger(&trace, &a, &b, &cov_a, &cov_b)?;
                    Output::json("game", json!({ "strategy": "sum", "trace": trace, "ledger": ledger }))
                }
            }
        }
        Command::Paint {
            real,
            machine,
            epsilon,
            doubling,
        } => {
            let a = corpus::series(real)?;
            let m = load_machine(machine, cli.seed)?;
            let h = m.apriori().scaled(epsilon)?;
            let res = games::painter(&a, &h, cli.fuel, *doubling)?;
            let text = res.cover.to_text();
            Ok(Output::json("paint", &res)?.plain(text).default_to(Format::Plain))
        }
        Command::Wset {
            real,
            indices,
            from,
            epsilon,
            horizon,
        } => {
            let d = corpus::series(real)?;
            let set = match (indices, from) {
                (_, Some(n)) => IndexSet::From(*n),
                (Some(list), None) => IndexSet::Finite(parse_indices(list)?),
                (None, None) => unreachable!("clap requires one of --indices and --from"),
            };
            let res = games::wset_check(&d, &set, epsilon, *horizon)?;
            let limit = d.known_sup().cloned();
            let covers_limit = limit.as_ref().map(|l| res.segments.iter().any(|s| s.contains(l)));
            Ok(Output::json(
                "wset",
                json!({ "set": set, "paint": res, "limit": limit, "covers_limit": covers_limit }),
            )?
            .plain(res.cover.to_text()))
        }
        Command::Machine { query } => machine_query(query, fuel, cli.seed),
        Command::SolovayFn { rows } => {
            let rows = corpus::double(rows)?.dense_rows();
            let table = machine::build_solovay_table(&rows)?;
            table.check()?;
            let csv = table.to_csv();
            Ok(Output::json("solovay-fn", &table)?.csv(csv).default_to(Format::Csv))
        }
        Command::SolovayRatio { real, machine, terms } => {
            let r = corpus::series(real)?;
            let m = load_machine(machine, cli.seed)?;
            let trace = machine::solovay_ratio(&r, &m, *terms, fuel)?;
            let mut csv = String::from("index,r,m,ratio,unsupported\n");
            for e in &trace {
                let ratio = e.ratio.as_ref().map(Q::to_string).unwrap_or_default();
                writeln!(csv, "{},{},{},{},{}", e.index, e.r, e.m, ratio, e.unsupported).unwrap();
            }
            Ok(Output::json("solovay-ratio", json!({ "entries": trace }))?.csv(csv))
        }
        Command::Regroup { double } => {
            let d = corpus::double(double)?;
            let rows = transforms::regroup(&d)?.prefix(d.rows().max(1))?;
            Ok(Output::json("regroup", json!({ "row_sums": rows, "total": d.total() }))?.plain(terms_text(&rows)))
        }
        Command::Mtilde { double, machine, c } => {
            let d = corpus::double(double)?;
            let m = load_machine(machine, cli.seed)?.apriori();
            let alloc = transforms::allocate_mtilde(&d, &m, c)?;
            let fuel = fuel.min(Fuel(u64::MAX / 2));
            alloc.check(fuel)?;
            let cells: Vec<Value> = alloc
                .table(fuel)?
                .into_iter()
                .map(|((i, j), v)| json!({ "i": i, "j": j, "a": d.term(i, j), "value": v }))
                .collect();
            Output::json("mtilde", json!({ "c": c, "cells": cells }))
        }
        Command::Mesh { a, b, sum, max_terms } => {
            let as_series = |spec: &str| -> Result<_> {
                let r = corpus::series(spec)?;
                Ok(match r.kind() {
                    Kind::Series => r,
                    _ => real::series_from_seq(&r),
                })
            };
            let mesh = transforms::mesh_refine_series(&as_series(a)?, &as_series(b)?, sum, *max_terms)?;
            Output::json("mesh", &mesh)
        }
        Command::Covermeasure { real, cover, n, terms } => {
            let r = corpus::series(real)?;
            let cov = corpus::cover(cover)?;
            let mn = transforms::cover_to_semimeasure(&r, &cov, *n, *terms)?;
            let weights = mn.snapshot(fuel)?;
            let total: Q = weights.values().sum();
            Output::json(
                "covermeasure",
                json!({ "n": n, "weights": weights, "total": total, "declared_total": mn.declared_total() }),
            )
        }
        Command::GapExperiment => {
            let mut rows = Vec::new();
            let mut named: Vec<(String, Machine)> = BUILTIN_NAMES
                .iter()
                .map(|n| (n.to_string(), Machine::builtin(n).expect("builtin")))
                .collect();
            named.push((format!("random:{}", cli.seed), load_machine("random", cli.seed)?));
            for (name, m) in &named {
                for k in 0..=m.max_program_len() + 1 {
                    let (bp, bpp) = (m.bp(k), m.bp_prime(k));
                    rows.push(json!({ "machine": name, "m": k, "bp": bp, "bp_prime": bpp, "gap": bpp as i128 - bp as i128 }));
                }
            }
            let mut csv = String::from("machine,m,bp,bp_prime,gap\n");
            for r in &rows {
                writeln!(csv, "{},{},{},{},{}", r["machine"].as_str().unwrap(), r["m"], r["bp"], r["bp_prime"], r["gap"]).unwrap();
            }
            Ok(Output::json("gap-experiment", json!({ "rows": rows }))?.csv(csv))
        }
    }
}

fn machine_query(q: &MachineQuery, fuel: Fuel, seed: u64) -> Result<Output> {
    match q {
        MachineQuery::Stats(a) => {
            let m = load_machine(&a.machine, seed)?;
            Output::json("machine-stats", m.stats())
        }
        MachineQuery::Omega(a) => {
            let m = load_machine(&a.machine, seed)?;
            let omega = m.omega(fuel);
            let text = format!("{omega}\n");
            Ok(Output::json(
                "machine-omega",
                json!({ "fuel": fuel.0, "omega": omega, "kraft_sum": m.kraft_sum() }),
            )?
            .plain(text))
        }
        MachineQuery::Kp { machine, n } => {
            let m = load_machine(&machine.machine, seed)?;
            let kp: Verdict<usize> = m.kp(*n, fuel);
            Output::json("machine-kp", json!({ "n": n, "fuel": fuel.0, "kp": kp }))
        }
        MachineQuery::Bp { machine, m } => {
            let mach = load_machine(&machine.machine, seed)?;
            Ok(Output::json("machine-bp", json!({ "m": m, "bp": mach.bp(*m) }))?.plain(format!("{}\n", mach.bp(*m))))
        }
        MachineQuery::Bpprime { machine, m } => {
            let mach = load_machine(&machine.machine, seed)?;
            let v = mach.bp_prime(*m);
            Ok(Output::json("machine-bpprime", json!({ "m": m, "bp_prime": v }))?.plain(format!("{v}\n")))
        }
        MachineQuery::T { machine, m } => {
            let mach = load_machine(&machine.machine, seed)?;
            let v = mach.busy_time(*m);
            Ok(Output::json("machine-t", json!({ "m": m, "t": v }))?.plain(format!("{v}\n")))
        }
    }
}

fn parse_indices(list: &str) -> Result<BTreeSet<usize>> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad index {s:?}")))
        })
        .collect()
}
