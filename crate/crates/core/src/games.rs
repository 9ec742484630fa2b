//! The prediction game on an increasing rational sequence.
//!
//! An observer watches `a_0, a_1, ...` and may bet that the sequence never
//! climbs more than `delta` above the current value. A bet is violated as
//! soon as some later term exceeds `base + delta`; only then may a new bet be
//! placed. The observer wins if some bet stands forever while the deltas sum
//! below `epsilon`. Winning strategies and small covers of the limit are two
//! views of the same object.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::covers::{self, Cover, Interval, Openness};
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::real::{self, Fuel, Kind, LscReal};
use crate::semimeasure::Semimeasure;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictionStatus {
    Active,
    Violated,
    /// Still unviolated when the fuel ran out.
    Standing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub base_index: usize,
    pub base_value: Q,
    pub delta: Q,
    pub status: PredictionStatus,
    /// First index whose term exceeded `base_value + delta`.
    pub violated_at: Option<usize>,
}

impl Prediction {
    pub fn ceiling(&self) -> Q {
        &self.base_value + &self.delta
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameTrace {
    pub predictions: Vec<Prediction>,
    pub epsilon: Q,
    pub delta_total: Q,
    /// Terms observed.
    pub steps: usize,
    /// The last prediction is standing and the deltas sum below epsilon.
    pub win_so_far: bool,
}

/// A deterministic observer. It is only asked when no prediction is active.
pub trait Strategy {
    /// `Some(delta)` places a bet at the current index.
    fn next_prediction(&mut self, index: usize, value: &Q, history: &[Prediction]) -> Result<Option<Q>>;
}

impl<F> Strategy for F
where
    F: FnMut(usize, &Q, &[Prediction]) -> Result<Option<Q>>,
{
    fn next_prediction(&mut self, index: usize, value: &Q, history: &[Prediction]) -> Result<Option<Q>> {
        self(index, value, history)
    }
}

/// Runs the game for `fuel` terms.
pub fn play(s: &mut dyn Strategy, a: &LscReal, epsilon: &Q, fuel: Fuel) -> Result<GameTrace> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let seq = a.to_sequence();
    let mut preds: Vec<Prediction> = Vec::new();
    let mut active: Option<usize> = None;
    let mut delta_total = Q::zero();
    let steps = fuel.0 as usize;
    for i in 0..steps {
        let v = seq.term(i)?;
        if let Some(k) = active {
            if v > preds[k].ceiling() {
                preds[k].status = PredictionStatus::Violated;
                preds[k].violated_at = Some(i);
                active = None;
            }
        }
        if active.is_none() {
            if let Some(delta) = s.next_prediction(i, &v, &preds)? {
                if delta.is_negative() {
                    return Err(Error::InvalidInput(format!("negative delta {delta}")));
                }
                if delta_total >= *epsilon {
                    return Err(Error::StrategyOverspent {
                        index: i,
                        delta_total,
                        epsilon: epsilon.clone(),
                    });
                }
                delta_total += &delta;
                preds.push(Prediction {
                    base_index: i,
                    base_value: v,
                    delta,
                    status: PredictionStatus::Active,
                    violated_at: None,
                });
                active = Some(preds.len() - 1);
            }
        }
    }
    if let Some(k) = active {
        preds[k].status = PredictionStatus::Standing;
    }
    let win_so_far = active.is_some() && &delta_total < epsilon;
    Ok(GameTrace {
        predictions: preds,
        epsilon: epsilon.clone(),
        delta_total,
        steps,
        win_so_far,
    })
}

/// Bets the full extent of contiguous coverage right of the current term.
/// Item `k` of the cover is visible from index `k` on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverStrategy {
    pub cover: Cover,
}

pub fn strategy_from_cover(c: &Cover) -> CoverStrategy {
    CoverStrategy { cover: c.clone() }
}

impl Strategy for CoverStrategy {
    fn next_prediction(&mut self, index: usize, value: &Q, _: &[Prediction]) -> Result<Option<Q>> {
        let seen = self.cover.revealed(Fuel(index as u64 + 1));
        Ok(match covers::reach(seen, value, true) {
            Some((r, _)) if &r > value => Some(r - value),
            _ => None,
        })
    }
}

/// The prediction intervals `[base, base + delta]` of a run as a cover with
/// budget `epsilon`.
pub fn cover_from_strategy(s: &mut dyn Strategy, a: &LscReal, epsilon: &Q, fuel: Fuel) -> Result<Cover> {
    let trace = match play(s, a, epsilon, fuel) {
        Err(Error::StrategyOverspent {
            index,
            delta_total,
            epsilon,
        }) => {
            return Err(Error::LengthBudgetExceeded {
                index,
                total: delta_total,
                budget: epsilon,
            })
        }
        other => other?,
    };
    Ok(cover_of_trace(&trace))
}

pub fn cover_of_trace(trace: &GameTrace) -> Cover {
    let items = trace
        .predictions
        .iter()
        .map(|p| Interval::closed(p.base_value.clone(), p.ceiling()).expect("delta >= 0"))
        .collect();
    Cover::new(items, trace.epsilon.clone())
}

/// Serializable part of a [`SumStrategy`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumCheckpoint {
    pub cov_a: Cover,
    pub cov_b: Cover,
}

/// Plays on `a + b` given covers of both limits: once `a_i` and `b_i` are
/// covered with contiguous extents `h` and `k`, bets `2 * min(h, k)`.
#[derive(Clone, Debug)]
pub struct SumStrategy {
    state: SumCheckpoint,
    a: LscReal,
    b: LscReal,
}

pub fn sum_strategy(cov_a: &Cover, cov_b: &Cover, a: &LscReal, b: &LscReal) -> SumStrategy {
    SumStrategy::resume(
        SumCheckpoint {
            cov_a: cov_a.clone(),
            cov_b: cov_b.clone(),
        },
        a,
        b,
    )
}

impl SumStrategy {
    pub fn resume(state: SumCheckpoint, a: &LscReal, b: &LscReal) -> Self {
        SumStrategy {
            state,
            a: a.to_sequence(),
            b: b.to_sequence(),
        }
    }

    pub fn checkpoint(&self) -> SumCheckpoint {
        self.state.clone()
    }

    /// The sequence the game is played on.
    pub fn played_on(&self) -> LscReal {
        real::sum(&self.a, &self.b)
    }

    fn extents(&self, index: usize) -> Result<Option<(Q, Q)>> {
        let fuel = Fuel(index as u64 + 1);
        let (ai, bi) = (self.a.term(index)?, self.b.term(index)?);
        let h = covers::reach(self.state.cov_a.revealed(fuel), &ai, true).map(|(r, _)| r - &ai);
        let k = covers::reach(self.state.cov_b.revealed(fuel), &bi, true).map(|(r, _)| r - &bi);
        Ok(h.zip(k))
    }
}

impl Strategy for SumStrategy {
    fn next_prediction(&mut self, index: usize, _: &Q, _: &[Prediction]) -> Result<Option<Q>> {
        Ok(match self.extents(index)? {
            Some((h, k)) => {
                let m = if h < k { h } else { k };
                m.is_positive().then(|| m * Q::int(2))
            }
            None => None,
        })
    }
}

/// One violated prediction charged against the coverage of the two covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Charge {
    pub prediction: usize,
    pub delta: Q,
    /// Drop of the coverage potential between issue and violation.
    pub drop: Q,
}

/// Checks that every violated prediction of a sum-strategy run burned at
/// least `delta/2` of the coverage right of the current approximations, and
/// that all deltas together stay within `2 * (len a + len b)`.
pub fn sum_ledger(trace: &GameTrace, a: &LscReal, b: &LscReal, cov_a: &Cover, cov_b: &Cover) -> Result<Vec<Charge>> {
    let (sa, sb) = (a.to_sequence(), b.to_sequence());
    let potential = |t: usize| -> Result<Q> {
        Ok(covers::measure_right_of(cov_a.items(), Some(&sa.term(t)?))
            + covers::measure_right_of(cov_b.items(), Some(&sb.term(t)?)))
    };
    let mut out = Vec::new();
    for (k, p) in trace.predictions.iter().enumerate() {
        let Some(j) = p.violated_at else { continue };
        let drop = potential(p.base_index)? - potential(j)?;
        let half_delta = &p.delta / Q::int(2);
        if drop < half_delta {
            return Err(Error::LedgerViolated {
                prediction: k,
                drop,
                half_delta,
            });
        }
        out.push(Charge {
            prediction: k,
            delta: p.delta.clone(),
            drop,
        });
    }
    let cap = (covers::total_length(cov_a, Fuel(u64::MAX))? + covers::total_length(cov_b, Fuel(u64::MAX))?) * Q::int(2);
    if trace.delta_total > cap {
        return Err(Error::LedgerViolated {
            prediction: trace.predictions.len(),
            drop: cap,
            half_delta: trace.delta_total.clone(),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PaintResult {
    /// Painted pieces in the order they were laid down.
    pub cover: Cover,
    /// Merged painted segments `[l, r)`.
    pub segments: Vec<Interval>,
    /// Paint handed to painters (after doubling).
    pub consumed: Q,
    pub painted: Q,
}

/// Painter `i` starts at `a_i` and, at each stage, paints its new paint
/// `h_i(stage) - h_i(stage - 1)` (twice that with `doubling`) rightwards,
/// skipping anything already painted.
///
/// Painters act in ascending index order within a stage. Paint is never
/// wasted: the painted measure always equals the paint consumed.
pub fn painter(a: &LscReal, h: &Semimeasure, stages: u64, doubling: bool) -> Result<PaintResult> {
    let seq = a.to_sequence();
    let factor = if doubling { Q::int(2) } else { Q::one() };
    let mut painted: BTreeMap<Q, Q> = BTreeMap::new();
    let mut frontier: BTreeMap<u64, Q> = BTreeMap::new();
    let mut pieces: Vec<Interval> = Vec::new();
    let mut consumed = Q::zero();
    for s in 0..stages {
        let mut ix = h.indices(Fuel(s));
        ix.sort_unstable();
        ix.dedup();
        for i in ix {
            let now = h.weight(i, Fuel(s))?;
            let before = if s == 0 { Q::zero() } else { h.weight(i, Fuel(s - 1))? };
            let inc = now - before;
            if inc.is_negative() {
                return Err(Error::NegativePaint {
                    painter: i as usize,
                    stage: s,
                });
            }
            if inc.is_zero() {
                continue;
            }
            let inc = inc * &factor;
            consumed += &inc;
            let start = match frontier.get(&i) {
                Some(p) => p.clone(),
                None => seq.term(i as usize)?,
            };
            let end = paint_from(&mut painted, &mut pieces, start, inc);
            frontier.insert(i, end);
        }
    }
    let segments: Vec<Interval> = painted
        .iter()
        .map(|(l, r)| Interval::new(l.clone(), r.clone(), Openness::LeftClosed).expect("l < r"))
        .collect();
    let total = segments.iter().map(Interval::length).sum();
    Ok(PaintResult {
        cover: Cover::new(pieces, h.declared_total() * &factor),
        segments,
        consumed,
        painted: total,
    })
}

/// Paints `amount` starting at `pos`, skipping painted segments; returns the
/// position where this painter stopped.
fn paint_from(painted: &mut BTreeMap<Q, Q>, pieces: &mut Vec<Interval>, mut pos: Q, mut amount: Q) -> Q {
    while amount.is_positive() {
        // Jump over a segment containing pos.
        if let Some((_, r)) = painted.range(..=pos.clone()).next_back() {
            if r > &pos {
                pos = r.clone();
                continue;
            }
        }
        let next_start = painted.range(pos.clone()..).next().map(|(l, _)| l.clone());
        let take = match &next_start {
            Some(l) if &(l - &pos) < &amount => l - &pos,
            _ => amount.clone(),
        };
        let end = &pos + &take;
        pieces.push(Interval::new(pos.clone(), end.clone(), Openness::LeftClosed).expect("take > 0"));
        insert_segment(painted, pos, end.clone());
        amount -= &take;
        pos = end;
    }
    pos
}

fn insert_segment(painted: &mut BTreeMap<Q, Q>, mut l: Q, mut r: Q) {
    if let Some((pl, pr)) = painted.range(..=l.clone()).next_back().map(|(a, b)| (a.clone(), b.clone())) {
        if pr >= l {
            painted.remove(&pl);
            l = pl;
            if pr > r {
                r = pr;
            }
        }
    }
    if let Some(nr) = painted.get(&r).cloned() {
        painted.remove(&r);
        r = nr;
    }
    painted.insert(l, r);
}

/// An enumerable index set at desk scale.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexSet {
    Finite(BTreeSet<usize>),
    /// Every index `>= n`.
    From(usize),
}

impl IndexSet {
    pub fn contains(&self, i: usize) -> bool {
        match self {
            IndexSet::Finite(s) => s.contains(&i),
            IndexSet::From(n) => i >= *n,
        }
    }
}

/// Paints the term-intervals of the indices in `w` (up to `horizon`) with
/// doubling, starting painter `i` at `d_0 + ... + d_{i-1}`.
///
/// The selected weight, including the exact tail when `w` is co-finite and
/// the series has a known sum, must stay below `epsilon`; the resulting cover
/// has length below `2 * epsilon`.
pub fn wset_check(d: &LscReal, w: &IndexSet, epsilon: &Q, horizon: usize) -> Result<PaintResult> {
    if !epsilon.is_positive() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }
    let seq = real::seq_from_series(d)?;
    let mut weights = BTreeMap::new();
    let mut head = Q::zero();
    for i in 0..horizon {
        let di = d.term(i)?;
        if w.contains(i) {
            if di.is_negative() {
                return Err(Error::NegativeTerm { index: i });
            }
            weights.insert(i as u64, di.clone());
        } else {
            head += di;
        }
    }
    let selected: Q = match (w, d.known_sup()) {
        (IndexSet::From(_), Some(total)) => total - &head,
        _ => weights.values().sum(),
    };
    if &selected >= epsilon {
        return Err(Error::WeightOverflow {
            sum: selected,
            epsilon: epsilon.clone(),
        });
    }
    let starts = LscReal::from_fallible(Kind::Sequence, move |i| {
        if i == 0 {
            Ok(Q::zero())
        } else {
            seq.term(i - 1)
        }
    });
    let h = Semimeasure::from_weights(weights, epsilon.clone())?;
    painter(&starts, &h, 1, true)
}

/// Indices `i < fuel` whose closed term-interval
/// `[d_0 + ... + d_{i-1}, d_0 + ... + d_i]` lies inside one revealed item.
pub fn wset_from_cover(d: &LscReal, c: &Cover, fuel: Fuel) -> Result<BTreeSet<usize>> {
    let seq = real::seq_from_series(d)?;
    let items = c.revealed(fuel);
    let mut out = BTreeSet::new();
    let mut left = Q::zero();
    for i in 0..fuel.0 as usize {
        let right = seq.term(i)?;
        let span = Interval::closed(left.clone(), right.clone())?;
        if items.iter().any(|it| it.contains(&span.left) && it.contains(&span.right)) {
            out.insert(i);
        }
        left = right;
    }
    Ok(out)
}

/// Heights from a family of cover strategies with levels `k = 0, 1, ...`:
/// level `k` plays with `epsilon = 2^-k` and its bet placed at index `i`
/// is recorded at index `i + k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolovayFamily {
    pub heights: Vec<Q>,
    /// Per level, the shifted index of the standing bet, if any.
    pub hits: Vec<Option<usize>>,
}

pub fn solovay_family(a: &LscReal, level_covers: &[Cover], fuel: Fuel) -> Result<SolovayFamily> {
    let n = fuel.0 as usize + level_covers.len();
    let mut heights = vec![Q::zero(); n];
    let mut hits = Vec::with_capacity(level_covers.len());
    for (k, c) in level_covers.iter().enumerate() {
        let eps = Q::pow2(-(k as i64));
        let trace = play(&mut strategy_from_cover(c), a, &eps, fuel)?;
        for p in &trace.predictions {
            heights[p.base_index + k] += &p.delta;
        }
        hits.push(
            trace
                .predictions
                .last()
                .filter(|p| p.status == PredictionStatus::Standing)
                .map(|p| p.base_index + k),
        );
    }
    Ok(SolovayFamily { heights, hits })
}
