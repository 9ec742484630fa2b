//! Finite prefix-free machines and the quantities they induce: a-priori
//! probability, prefix complexity bounds, halting probability, busy-beaver
//! style functions, convergence moduli, and the threshold table builder.
//!
//! A finite table is computable all the way down, so every quantity here is
//! exact at full fuel. The halting probability of such a machine is rational
//! and therefore not random; randomness-flavored claims are checked only as
//! finite-fuel properties.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::real::{Fuel, LscReal, Verdict};
use crate::semimeasure::Semimeasure;

/// One halting program.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub program: String,
    pub output: u64,
    pub time: u64,
}

impl Entry {
    pub fn new(program: &str, output: u64, time: u64) -> Self {
        Entry {
            program: program.to_string(),
            output,
            time,
        }
    }

    /// `2^-|p|`.
    pub fn weight(&self) -> Q {
        Q::pow2(-(self.program.len() as i64))
    }
}

/// A validated prefix-free table, kept in (time, program) enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Machine {
    entries: Vec<Entry>,
}

const BUILTIN_DEFAULT: &str = include_str!("../data/machines/default.machine");
const BUILTIN_GAMMA: &str = include_str!("../data/machines/gamma.machine");
const BUILTIN_SELFTIMED: &str = include_str!("../data/machines/selftimed.machine");

/// Names accepted by [`Machine::builtin`].
pub const BUILTIN_NAMES: [&str; 3] = ["default", "gamma", "selftimed"];

impl Machine {
    pub fn new(mut entries: Vec<Entry>) -> Result<Self> {
        for e in &entries {
            if e.program.chars().any(|c| c != '0' && c != '1') {
                return Err(Error::InvalidInput(format!("program {:?} is not a bitstring", e.program)));
            }
            if e.time == 0 {
                return Err(Error::InvalidInput(format!("program {:?} has time 0", e.program)));
            }
        }
        let mut programs: Vec<&str> = entries.iter().map(|e| e.program.as_str()).collect();
        programs.sort_unstable();
        // In sorted order any prefix pair is adjacent to some witness pair.
        for w in programs.windows(2) {
            if w[1].starts_with(w[0]) {
                return Err(Error::PrefixFreeViolation {
                    first: w[0].to_string(),
                    second: w[1].to_string(),
                });
            }
        }
        let kraft: Q = entries.iter().map(Entry::weight).sum();
        if kraft > Q::one() {
            return Err(Error::KraftViolation(kraft));
        }
        entries.sort_by(|a, b| (a.time, &a.program).cmp(&(b.time, &b.program)));
        Ok(Machine { entries })
    }

    /// Parses lines `program:<bits> output:<int> time:<int>`; `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| Error::Parse {
                line: lineno + 1,
                message: m,
            };
            let (mut program, mut output, mut time) = (None, None, None);
            for field in line.split_whitespace() {
                let (key, value) = field
                    .split_once(':')
                    .ok_or_else(|| err(format!("expected key:value, got {field:?}")))?;
                match key {
                    "program" => program = Some(value.to_string()),
                    "output" => output = Some(value.parse::<u64>().map_err(|e| err(e.to_string()))?),
                    "time" => time = Some(value.parse::<u64>().map_err(|e| err(e.to_string()))?),
                    other => return Err(err(format!("unknown key {other:?}"))),
                }
            }
            match (program, output, time) {
                (Some(p), Some(o), Some(t)) => entries.push(Entry {
                    program: p,
                    output: o,
                    time: t,
                }),
                _ => return Err(err("need program, output and time".into())),
            }
        }
        Machine::new(entries)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Machine::parse(&std::fs::read_to_string(path)?)
    }

    /// One of [`BUILTIN_NAMES`].
    pub fn builtin(name: &str) -> Option<Self> {
        let text = match name {
            "default" => BUILTIN_DEFAULT,
            "gamma" => BUILTIN_GAMMA,
            "selftimed" => BUILTIN_SELFTIMED,
            _ => return None,
        };
        Some(Machine::parse(text).expect("bundled machine is valid"))
    }

    /// A builtin name or a file path.
    pub fn resolve(spec: &str) -> Result<Self> {
        match Machine::builtin(spec) {
            Some(m) => Ok(m),
            None => Machine::load(spec),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            writeln!(out, "program:{} output:{} time:{}", e.program, e.output, e.time).unwrap();
        }
        out
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn kraft_sum(&self) -> Q {
        self.entries.iter().map(Entry::weight).sum()
    }

    /// Fuel at which every entry has halted.
    pub fn full_fuel(&self) -> Fuel {
        Fuel(self.entries.iter().map(|e| e.time).max().unwrap_or(0))
    }

    pub fn max_program_len(&self) -> usize {
        self.entries.iter().map(|e| e.program.len()).max().unwrap_or(0)
    }

    fn halted(&self, fuel: Fuel) -> impl Iterator<Item = &Entry> {
        self.entries.iter().take_while(move |e| e.time <= fuel.0)
    }

    /// `m(i) = sum of 2^-|p|` over programs with output `i` halting within the fuel.
    pub fn apriori(&self) -> Semimeasure {
        let entries = self.entries.clone();
        let idx = self.entries.clone();
        Semimeasure::new(
            move |i, fuel| {
                Ok(entries
                    .iter()
                    .take_while(|e| e.time <= fuel.0)
                    .filter(|e| e.output == i)
                    .map(Entry::weight)
                    .sum())
            },
            move |fuel| {
                idx.iter()
                    .take_while(|e| e.time <= fuel.0)
                    .map(|e| e.output)
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect()
            },
            self.kraft_sum(),
        )
    }

    /// Snapshot of `m` at `fuel`.
    pub fn apriori_at(&self, fuel: Fuel) -> BTreeMap<u64, Q> {
        let mut out: BTreeMap<u64, Q> = BTreeMap::new();
        for e in self.halted(fuel) {
            *out.entry(e.output).or_default() += e.weight();
        }
        out
    }

    /// Length of the shortest program for `i` halting within the fuel.
    pub fn kp(&self, i: u64, fuel: Fuel) -> Verdict<usize> {
        match self.halted(fuel).filter(|e| e.output == i).map(|e| e.program.len()).min() {
            Some(k) => Verdict::Confirmed(k),
            None => Verdict::Pending,
        }
    }

    /// Halting probability lower bound at `fuel`.
    pub fn omega(&self, fuel: Fuel) -> Q {
        self.halted(fuel).map(Entry::weight).sum()
    }

    /// The halting probability as a real, one fuel step per approximation.
    pub fn omega_real(&self) -> LscReal {
        let me = self.clone();
        let full = self.kraft_sum();
        LscReal::sequence(move |n| me.omega(Fuel(n as u64))).with_known_sup(full)
    }

    /// Largest `n` with `kp(n) <= m`, or 0 if there is none.
    pub fn bp(&self, m: usize) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.program.len() <= m)
            .map(|e| e.output)
            .max()
            .unwrap_or(0)
    }

    /// Least `N` with `sum_{n > N} m(n) < 2^-m`.
    pub fn bp_prime(&self, m: usize) -> u64 {
        let weights = self.apriori_at(self.full_fuel());
        let bound = Q::pow2(-(m as i64));
        // The tail only changes just past an output, so the answer is 0 or an output.
        let mut tail: Q = weights.values().sum();
        if tail < bound {
            return 0;
        }
        for (&n, w) in &weights {
            tail -= w;
            if tail < bound {
                return n;
            }
        }
        unreachable!("the tail past the largest output is empty")
    }

    /// Longest running time among programs of length at most `m`, or 0.
    pub fn busy_time(&self, m: usize) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.program.len() <= m)
            .map(|e| e.time)
            .max()
            .unwrap_or(0)
    }

    pub fn stats(&self) -> MachineStats {
        let full = self.full_fuel();
        MachineStats {
            entries: self.entries.len(),
            distinct_outputs: self.apriori_at(full).len(),
            kraft_sum: self.kraft_sum(),
            omega: self.omega(full),
            max_time: full.0,
            max_program_len: self.max_program_len(),
        }
    }

    /// `program = gamma(i + 1)` for `i < count`, output `i`. Times are a
    /// fixed scramble so that enumeration order differs from output order.
    pub fn elias_gamma(count: u64) -> Self {
        let entries = (0..count)
            .map(|i| {
                let n = i + 1;
                let bits = format!("{n:b}");
                let program = format!("{}{}", "0".repeat(bits.len() - 1), bits);
                Entry {
                    program,
                    output: i,
                    time: (i * 37) % 101 + 1,
                }
            })
            .collect();
        Machine::new(entries).expect("gamma codes are prefix-free")
    }

    /// A random prefix-free machine whose outputs equal their running times.
    ///
    /// Grows a random binary code tree by `splits` leaf splits (no leaf longer
    /// than `max_len`), keeps a random non-empty subset of leaves as halting
    /// programs, draws times first and then sets each output to its time.
    pub fn self_timing(seed: u64, splits: usize, max_len: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut leaves = vec![String::new()];
        for _ in 0..splits {
            let open: Vec<usize> = (0..leaves.len()).filter(|&k| leaves[k].len() < max_len).collect();
            if open.is_empty() {
                break;
            }
            let k = open[rng.gen_range(0..open.len())];
            let leaf = leaves.swap_remove(k);
            leaves.push(format!("{leaf}0"));
            leaves.push(format!("{leaf}1"));
        }
        leaves.sort();
        let mut entries = Vec::new();
        for leaf in leaves {
            if leaf.is_empty() || rng.gen_bool(0.3) {
                continue;
            }
            let time = rng.gen_range(1..=1000);
            entries.push(Entry {
                program: leaf,
                output: time,
                time,
            });
        }
        if entries.is_empty() {
            entries.push(Entry::new("0", 1, 1));
        }
        Machine::new(entries).expect("code tree leaves are prefix-free")
    }

    /// Largest `kp(T(m)) - m` over lengths `m` with `T(m) > 0`: the constant
    /// in `kp(T(m)) <= m + c` measured on this machine.
    pub fn busy_time_constant(&self) -> Option<i64> {
        let full = self.full_fuel();
        (0..=self.max_program_len())
            .filter_map(|m| {
                let t = self.busy_time(m);
                if t == 0 {
                    return None;
                }
                let k = self.kp(t, full).confirmed()?;
                Some(k as i64 - m as i64)
            })
            .max()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MachineStats {
    pub entries: usize,
    pub distinct_outputs: usize,
    pub kraft_sum: Q,
    pub omega: Q,
    pub max_time: u64,
    pub max_program_len: usize,
}

/// Least `N` such that `|limit - a_n| < eps` for every queried `n > N`.
///
/// The approximations are checked up to index `horizon`; since they only
/// increase, one index inside the window certifies every later one.
pub fn modulus(a: &LscReal, eps: &Q, known_limit: &Q, horizon: usize) -> Result<Verdict<usize>> {
    if !eps.is_positive() {
        return Err(Error::InvalidInput("eps must be positive".into()));
    }
    let seq = a.to_sequence();
    for n in 0..horizon {
        let v = seq.term(n)?;
        if &v > known_limit {
            return Err(Error::LimitInconsistent { index: n });
        }
        if &(known_limit - &v) < eps {
            // a_n is inside the window, so every later index is too.
            return Ok(Verdict::Confirmed(n.saturating_sub(1)));
        }
    }
    Ok(Verdict::Pending)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioEntry {
    pub index: u64,
    pub r: Q,
    pub m: Q,
    /// `r_i / m(i)` when `m(i) > 0` at the given fuel.
    pub ratio: Option<Q>,
    /// `m(i) = 0` even at full fuel.
    pub unsupported: bool,
}

/// `r_i / m(i)` for the first `terms` indices.
pub fn solovay_ratio(r: &LscReal, machine: &Machine, terms: usize, fuel: Fuel) -> Result<Vec<RatioEntry>> {
    let m = machine.apriori();
    let full = machine.full_fuel();
    let mut out = Vec::with_capacity(terms);
    for i in 0..terms {
        let ri = r.term(i)?;
        if i > 0 && ri.is_negative() {
            return Err(Error::NegativeTerm { index: i });
        }
        let mi = m.weight(i as u64, fuel)?;
        let ratio = if mi.is_positive() { Some(&ri / &mi) } else { None };
        let unsupported = m.weight(i as u64, full)?.is_zero();
        out.push(RatioEntry {
            index: i as u64,
            r: ri,
            m: mi,
            ratio,
            unsupported,
        });
    }
    Ok(out)
}

/// The threshold table built from per-step row increments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolovayTable {
    /// `cells[i][j]` is the increment of row `i` at its `j`-th enumeration step.
    pub cells: Vec<Vec<Q>>,
    /// `a[i][j]`, same shape as `cells`.
    pub a: Vec<Vec<Q>>,
    /// Exponents `k` of the thresholds `2^-k` written in each row, in order.
    pub crossed: Vec<Vec<u32>>,
}

impl SolovayTable {
    pub fn row_mass(&self, i: usize) -> Q {
        self.cells[i].iter().sum()
    }

    pub fn row_a(&self, i: usize) -> Q {
        self.a[i].iter().sum()
    }

    /// `sum a <= 2 sum m` per row and some `a_ij >= (row mass)/2`.
    pub fn check(&self) -> Result<()> {
        for i in 0..self.cells.len() {
            let mass = self.row_mass(i);
            if self.row_a(i) > &mass * Q::int(2) {
                return Err(Error::InvalidInput(format!("row {i}: a-sum exceeds twice the mass")));
            }
            let best = self.a[i].iter().max().cloned().unwrap_or_default();
            if best * Q::int(2) < mass {
                return Err(Error::InvalidInput(format!("row {i}: no a-value reaches half the mass")));
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,m,a\n");
        for (i, row) in self.cells.iter().enumerate() {
            for (j, m) in row.iter().enumerate() {
                writeln!(out, "{i},{j},{m},{}", self.a[i][j]).unwrap();
            }
        }
        out
    }
}

/// Writes into the current column the largest threshold `2^-k` below the
/// running row sum whenever it beats every threshold already written in that
/// row; every other column gets 0.
pub fn build_solovay_table(rows: &[Vec<Q>]) -> Result<SolovayTable> {
    let mut total = Q::zero();
    let mut a = Vec::with_capacity(rows.len());
    let mut crossed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let mut running = Q::zero();
        let mut best: Option<u32> = None;
        let mut a_row = Vec::with_capacity(row.len());
        let mut c_row = Vec::new();
        for (j, m) in row.iter().enumerate() {
            if m.is_negative() {
                return Err(Error::NegativeTerm { index: j });
            }
            running += m;
            match running.dyadic_floor_exponent() {
                Some(k) if best.map_or(true, |b| k < b) => {
                    best = Some(k);
                    c_row.push(k);
                    a_row.push(Q::pow2(-(k as i64)));
                }
                _ => a_row.push(Q::zero()),
            }
        }
        if running > Q::one() {
            return Err(Error::InvalidInput(format!("row {i} has mass above 1")));
        }
        total += running;
        a.push(a_row);
        crossed.push(c_row);
    }
    if total > Q::one() {
        return Err(Error::InvalidInput(format!("total mass {total} exceeds 1")));
    }
    Ok(SolovayTable {
        cells: rows.to_vec(),
        a,
        crossed,
    })
}

/// Parses `i j num/den` lines into dense rows (missing cells are 0).
pub fn parse_rows(text: &str) -> Result<Vec<Vec<Q>>> {
    let d = crate::transforms::DoubleSeries::parse(text)?;
    Ok(d.dense_rows())
}
