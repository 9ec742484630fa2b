//! Reductions between lower semicomputable reals.
//!
//! `alpha ⪯₁ beta` holds when `beta - alpha` is lower semicomputable. The
//! constructive evidence is a [`ReductionWitness`]: a reduction function
//! `phi` that, given a rational `r` below the target, returns a rational
//! `phi(r)` below `alpha` that is at least as close to `alpha` as `r` is to
//! the target.

use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::covers::{Cover, Interval, Openness};
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::real::{self, Budget, Fuel, Kind, LscReal, Verdict};
use crate::semimeasure::Semimeasure;

type PhiFn = dyn Fn(&Q, Fuel) -> Result<Verdict<Q>> + Send + Sync;

/// Evidence for `alpha ⪯₁ constant * beta`.
///
/// `target` presents `constant * beta` and `rho` presents `target - alpha`.
#[derive(Clone)]
pub struct ReductionWitness {
    phi: Arc<PhiFn>,
    alpha: LscReal,
    rho: LscReal,
    target: LscReal,
    constant: Q,
}

impl fmt::Debug for ReductionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReductionWitness")
            .field("constant", &self.constant)
            .finish_non_exhaustive()
    }
}

/// One exact check of the witness inequalities at a query point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub r: Q,
    pub phi: Verdict<Q>,
    /// `phi(r) < alpha`.
    pub below_alpha: bool,
    /// `alpha - phi(r) <= target - r`.
    pub gap_ok: bool,
}

impl WitnessCheck {
    pub fn holds(&self) -> bool {
        self.phi.is_confirmed() && self.below_alpha && self.gap_ok
    }
}

impl ReductionWitness {
    /// `phi(s)` is `a_n` for the first stage `n` with `a_n + r_n > s`, where
    /// the stages are read from `alpha` and `rho` round-robin.
    fn from_parts(alpha: LscReal, rho: LscReal, target: LscReal, constant: Q) -> Self {
        let (sa, sr) = (alpha.to_sequence(), rho.to_sequence());
        // Stage totals a_n + r_n are non-decreasing, so the first stage above
        // `s` is found by bisection over the ones already read. Stage n costs
        // one query to each stream, charged as if scanned from 0.
        let stages: Arc<Mutex<Vec<Q>>> = Arc::new(Mutex::new(Vec::new()));
        let phi = move |s: &Q, fuel: Fuel| -> Result<Verdict<Q>> {
            let affordable = usize::try_from(fuel.0 / 2).unwrap_or(usize::MAX);
            let mut t = stages.lock().unwrap();
            let mut n = t.partition_point(|x| x <= s);
            while n == t.len() {
                if t.len() >= affordable {
                    return Ok(Verdict::Pending);
                }
                let j = t.len();
                t.push(sa.term(j)? + sr.term(j)?);
                n = if &t[j] > s { j } else { t.len() };
            }
            if n >= affordable {
                return Ok(Verdict::Pending);
            }
            Ok(Verdict::Confirmed(sa.term(n)?))
        };
        ReductionWitness {
            phi: Arc::new(phi),
            alpha,
            rho,
            target,
            constant,
        }
    }

    pub fn phi(&self, r: &Q, fuel: Fuel) -> Result<Verdict<Q>> {
        (self.phi)(r, fuel)
    }

    pub fn alpha(&self) -> &LscReal {
        &self.alpha
    }

    pub fn rho(&self) -> &LscReal {
        &self.rho
    }

    /// Presentation of `constant * beta`.
    pub fn target(&self) -> &LscReal {
        &self.target
    }

    pub fn constant(&self) -> &Q {
        &self.constant
    }

    /// Witness for `alpha ⪯₁ c * beta` given by the two compositions.
    ///
    /// `self` witnesses `alpha ⪯₁ c1 * beta`, `next` witnesses
    /// `beta ⪯₁ c2 * gamma`; the result has constant `c1 * c2`.
    pub fn compose(&self, next: &ReductionWitness) -> Result<ReductionWitness> {
        let c1 = self.constant.clone();
        let outer = self.clone();
        let inner = next.clone();
        let phi = move |r: &Q, fuel: Fuel| -> Result<Verdict<Q>> {
            match inner.phi(&(r / &c1), fuel)? {
                Verdict::Confirmed(b) => outer.phi(&(&c1 * b), fuel),
                Verdict::Pending => Ok(Verdict::Pending),
            }
        };
        let rho = real::sum(&real::scale(&next.rho, &self.constant)?, &self.rho);
        Ok(ReductionWitness {
            phi: Arc::new(phi),
            alpha: self.alpha.clone(),
            rho,
            target: real::scale(&next.target, &self.constant)?,
            constant: &self.constant * &next.constant,
        })
    }

    /// Checks both inequalities at `r` against exact limits.
    pub fn check_exact(&self, r: &Q, fuel: Fuel, alpha_limit: &Q, target_limit: &Q) -> Result<WitnessCheck> {
        let phi = self.phi(r, fuel)?;
        let (below_alpha, gap_ok) = match &phi {
            Verdict::Confirmed(p) => (p < alpha_limit, alpha_limit - p <= target_limit - r),
            Verdict::Pending => (false, false),
        };
        Ok(WitnessCheck {
            r: r.clone(),
            phi,
            below_alpha,
            gap_ok,
        })
    }

    /// Checks the witness at the first `points` target approximations that
    /// lie strictly below the target limit, using the `known_sup` of the
    /// alpha and target presentations as exact limits.
    pub fn check_known(&self, points: usize, fuel: Fuel) -> Result<Vec<WitnessCheck>> {
        let (Some(al), Some(tl)) = (self.alpha.known_sup(), self.target.known_sup()) else {
            return Err(Error::InvalidInput("exact checks need known limits".into()));
        };
        let seq = self.target.to_sequence();
        let mut out = Vec::new();
        let mut n = 0;
        // Eventually constant targets run out of points strictly below.
        while out.len() < points && n < points * 8 {
            let r = seq.term(n)?;
            if &r < tl {
                out.push(self.check_exact(&r, fuel, al, tl)?);
            }
            n += 1;
        }
        Ok(out)
    }
}

/// Witness for `alpha ⪯₁ alpha + rho` with constant 1.
pub fn witness_from_sum(alpha: &LscReal, rho: &LscReal) -> ReductionWitness {
    let target = real::sum(alpha, rho);
    ReductionWitness::from_parts(alpha.clone(), rho.clone(), target, Q::one())
}

/// Witness for `alpha ⪯₁ c * beta` where `rho` presents `c * beta - alpha`.
///
/// The target stream is `a_n + r_n`; `beta` only contributes its known
/// limit, if any, for checks.
pub fn witness_scaled(alpha: &LscReal, rho: &LscReal, beta: &LscReal, c: &Q) -> Result<ReductionWitness> {
    if !c.is_positive() {
        return Err(Error::NonPositiveScale(c.clone()));
    }
    let mut target = real::sum(alpha, rho).without_known_sup();
    if let Some(b) = beta.known_sup() {
        target = target.with_known_sup(b * c);
    }
    Ok(ReductionWitness::from_parts(alpha.clone(), rho.clone(), target, c.clone()))
}

/// Presentation of `beta - alpha` as the running maximum of
/// `b_n - phi(b_n)`, where `beta` presents the witness target.
///
/// Indices whose `phi` query is still pending are skipped; if nothing is
/// confirmed up to an index the term is an error.
pub fn diff_to_lsc(w: &ReductionWitness, beta: &LscReal, fuel_per_query: Fuel) -> LscReal {
    let seq = beta.to_sequence();
    let alpha_sup = w.alpha.known_sup().cloned();
    let w = w.clone();
    let cache: Arc<Mutex<Vec<Option<Q>>>> = Arc::new(Mutex::new(Vec::new()));
    let out = LscReal::from_fallible(Kind::Sequence, move |i| {
        let mut c = cache.lock().unwrap();
        while c.len() <= i {
            let n = c.len();
            let b = seq.term(n)?;
            let cand = match w.phi(&b, fuel_per_query)? {
                Verdict::Confirmed(p) => Some(b - p),
                Verdict::Pending => None,
            };
            let prev = c.last().cloned().flatten();
            c.push(match (prev, cand) {
                (Some(p), Some(x)) => Some(if x > p { x } else { p }),
                (p, x) => p.or(x),
            });
        }
        c[i].clone().ok_or_else(|| Error::Pending(format!("no confirmed difference up to index {i}")))
    });
    match (beta.known_sup(), alpha_sup) {
        (Some(b), Some(a)) => out.with_known_sup(b - &a),
        _ => out,
    }
}

/// Witness for `sum u ⪯₁ sum v` when `u_i <= v_i` for every `i > 0`.
///
/// The difference series is `(v_0 - u_0, v_1 - u_1, ...)`; a domination
/// failure surfaces lazily when the offending term is queried.
pub fn dominated_witness(u: &LscReal, v: &LscReal) -> Result<ReductionWitness> {
    if u.kind() != Kind::Series || v.kind() != Kind::Series {
        return Err(Error::InvalidInput("dominated_witness takes two series".into()));
    }
    let (uu, vv) = (u.clone(), v.clone());
    let mut rho = LscReal::from_fallible(Kind::Series, move |i| {
        let (a, b) = (uu.term(i)?, vv.term(i)?);
        if i > 0 && a > b {
            return Err(Error::DominationViolated { index: i });
        }
        Ok(b - a)
    });
    if let (Some(a), Some(b)) = (u.known_sup(), v.known_sup()) {
        rho = rho.with_known_sup(b - a);
    }
    let alpha = u.clone();
    let mut target = real::sum(&alpha, &rho).without_known_sup();
    if let Some(b) = v.known_sup() {
        target = target.with_known_sup(b.clone());
    }
    Ok(ReductionWitness::from_parts(alpha, rho, target, Q::one()))
}

/// Which rule produced a term of the split series.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitCase {
    /// The new estimate fell below the old one: `u_i = 0`.
    Below,
    /// `A <= A' <= A + v_i`: `u_i = A' - A`.
    Between,
    /// The new estimate jumped past `A + v_i`: `u_i = v_i`.
    Above,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitTrace {
    /// `u_0, u_1, ...`.
    pub terms: Vec<Q>,
    /// `cases[i]` is the rule that produced `u_i`.
    pub cases: Vec<SplitCase>,
    /// Counts of (below, between, above).
    pub counts: [usize; 3],
    /// Final partial sums `A` of `u` and `B` of `v`.
    pub a: Q,
    pub b: Q,
}

impl SplitTrace {
    pub fn as_series(&self) -> Result<LscReal> {
        LscReal::finite(Kind::Series, self.terms.clone())
    }
}

/// Splits `v` into `u` with `0 <= u_i <= v_i` and `sum u = alpha`, following
/// a witness for `alpha ⪯₁ sum v` with constant 1.
///
/// With `limits = Some((alpha, beta))` the invariant `A <= alpha` and
/// `alpha - A <= beta - B` is asserted after every step.
pub fn split_along(
    v: &LscReal,
    w: &ReductionWitness,
    steps: usize,
    fuel: Fuel,
    limits: Option<(&Q, &Q)>,
) -> Result<SplitTrace> {
    if v.kind() != Kind::Series {
        return Err(Error::InvalidInput("split_along needs a series".into()));
    }
    if w.constant() != &Q::one() {
        return Err(Error::InvalidInput("split_along needs a witness with constant 1".into()));
    }
    let query = |b: &Q| -> Result<Q> {
        w.phi(b, fuel)?
            .confirmed()
            .ok_or_else(|| Error::Pending(format!("phi({b})")))
    };
    let check = |step: usize, a: &Q, b: &Q| -> Result<()> {
        if let Some((al, be)) = limits {
            if a > al {
                return Err(Error::InvariantBroken {
                    step,
                    detail: format!("A = {a} exceeds alpha"),
                });
            }
            if al - a > be - b {
                return Err(Error::InvariantBroken {
                    step,
                    detail: format!("alpha - A exceeds beta - B at A = {a}, B = {b}"),
                });
            }
        }
        Ok(())
    };
    let mut trace = SplitTrace {
        terms: Vec::with_capacity(steps),
        cases: Vec::new(),
        counts: [0; 3],
        a: Q::zero(),
        b: Q::zero(),
    };
    let (mut a, mut b) = (Q::zero(), Q::zero());
    for i in 0..steps {
        let vi = v.term(i)?;
        if vi.is_negative() {
            return Err(Error::NegativeTerm { index: i });
        }
        b += &vi;
        let next = query(&b)?;
        let (case, ui) = if next < a {
            (SplitCase::Below, Q::zero())
        } else if next <= &a + &vi {
            (SplitCase::Between, &next - &a)
        } else {
            (SplitCase::Above, vi.clone())
        };
        a += &ui;
        trace.counts[case as usize] += 1;
        trace.cases.push(case);
        trace.terms.push(ui);
        check(i, &a, &b)?;
    }
    trace.a = a;
    trace.b = b;
    Ok(trace)
}

/// One closed interval placed during the race.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftedInterval {
    /// Which increment `a_{k+1} - a_k` this interval carries.
    pub k: usize,
    pub left: Q,
    pub right: Q,
    /// Index of the first `b` strictly right of the interval, once seen.
    pub exit_index: Option<usize>,
    /// Gap between the right end and that `b`.
    pub hole: Option<Q>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RaceOutcome {
    /// Some shifted interval can never be exited because the beta limit is
    /// at most its right end.
    CoverProduced { cover: Cover, log: Vec<ShiftedInterval> },
    /// Every interval so far was exited; `holes` is `(b_0 - a_0, hole_0, ...)`.
    ReducingSoFar {
        #[serde(skip)]
        holes: LscReal,
        holes_prefix: Vec<Q>,
        log: Vec<ShiftedInterval>,
        fuel_exhausted: bool,
    },
}

impl RaceOutcome {
    pub fn log(&self) -> &[ShiftedInterval] {
        match self {
            RaceOutcome::CoverProduced { log, .. } | RaceOutcome::ReducingSoFar { log, .. } => log,
        }
    }

    pub fn is_cover(&self) -> bool {
        matches!(self, RaceOutcome::CoverProduced { .. })
    }
}

/// Shifts each increment `[a_k, a_{k+1}]` of alpha to start at the current
/// beta approximation and waits for beta to move past it.
///
/// One fuel step is one term query of either stream. The observer is
/// declared winning only when `known_sup` of beta proves that beta can never
/// leave the current interval.
pub fn race(alpha: &LscReal, beta: &LscReal, fuel: Fuel) -> Result<RaceOutcome> {
    let (sa, sb) = (alpha.to_sequence(), beta.to_sequence());
    let mut budget = Budget::new(fuel);
    let mut log: Vec<ShiftedInterval> = Vec::new();
    let mut holes: Vec<Q> = Vec::new();
    let reducing = |holes: Vec<Q>, log: Vec<ShiftedInterval>, exhausted: bool| -> Result<RaceOutcome> {
        let terms = if holes.is_empty() { vec![Q::zero()] } else { holes };
        Ok(RaceOutcome::ReducingSoFar {
            holes: LscReal::finite(Kind::Series, terms.clone())?,
            holes_prefix: terms,
            log,
            fuel_exhausted: exhausted,
        })
    };
    if !budget.spend() {
        return reducing(holes, log, true);
    }
    let mut a_prev = sa.term(0)?;
    if !budget.spend() {
        return reducing(holes, log, true);
    }
    let mut anchor = sb.term(0)?;
    let mut b_idx = 0;
    holes.push(&anchor - &a_prev);
    for k in 0.. {
        if !budget.spend() {
            return reducing(holes, log, true);
        }
        let a_next = sa.term(k + 1)?;
        if a_next == a_prev {
            // Nothing to place; keep holes aligned with alpha's indices.
            holes.push(Q::zero());
            continue;
        }
        let right = &anchor + (&a_next - &a_prev);
        a_prev = a_next;
        log.push(ShiftedInterval {
            k,
            left: anchor.clone(),
            right: right.clone(),
            exit_index: None,
            hole: None,
        });
        if beta.known_sup().is_some_and(|s| s <= &right) {
            let cover = race_cover(&log);
            return Ok(RaceOutcome::CoverProduced { cover, log });
        }
        loop {
            if !budget.spend() {
                return reducing(holes, log, true);
            }
            b_idx += 1;
            let b = sb.term(b_idx)?;
            if b > right {
                let hole = &b - &right;
                let last = log.last_mut().unwrap();
                last.exit_index = Some(b_idx);
                last.hole = Some(hole.clone());
                holes.push(hole);
                anchor = b;
                break;
            }
        }
    }
    unreachable!()
}

/// The race intervals as open intervals, each enlarged by `2^-(k+10)` on
/// both sides.
pub fn race_cover(log: &[ShiftedInterval]) -> Cover {
    let items: Vec<Interval> = log
        .iter()
        .map(|s| {
            let pad = Q::pow2(-(s.k as i64 + 10));
            Interval::new(&s.left - &pad, &s.right + &pad, Openness::Open).expect("left <= right")
        })
        .collect();
    let budget = items.iter().map(Interval::length).sum();
    Cover::new(items, budget)
}

/// `sum_i w_i alpha_i` with the parts kept for on-demand witnesses.
#[derive(Clone, Debug)]
pub struct WeightedSum {
    pub total: LscReal,
    parts: Vec<(LscReal, Q)>,
}

impl WeightedSum {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Witness for `alpha_i ⪯₁ (1/w_i) * total`.
    pub fn witness(&self, i: usize) -> Result<ReductionWitness> {
        let (alpha, w) = self
            .parts
            .get(i)
            .ok_or_else(|| Error::InvalidInput(format!("no part {i}")))?;
        let others: Vec<LscReal> = self
            .parts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, (r, wj))| real::scale(r, &(wj / w)))
            .collect::<Result<_>>()?;
        let rho = if others.is_empty() {
            LscReal::constant(Q::zero())
        } else {
            real::sum_all(&others)
        };
        witness_scaled(alpha, &rho, &self.total, &w.recip())
    }
}

/// The weighted sum of reals in `[0, 1]` with positive weights summing to at
/// most 1.
pub fn weighted_complete(reals: &[LscReal], weights: &[Q]) -> Result<WeightedSum> {
    if reals.len() != weights.len() || reals.is_empty() {
        return Err(Error::InvalidWeights("need one weight per real".into()));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
        return Err(Error::InvalidWeights(format!("weight {w} is not positive")));
    }
    let total_w: Q = weights.iter().sum();
    if total_w > Q::one() {
        return Err(Error::InvalidWeights(format!("weights sum to {total_w} > 1")));
    }
    for (i, r) in reals.iter().enumerate() {
        let in_range = match r.known_sup() {
            Some(s) => s <= &Q::one() && !r.to_sequence().term(0)?.is_negative(),
            None => false,
        };
        if !in_range {
            return Err(Error::RealOutOfRange { index: i });
        }
    }
    let scaled: Vec<LscReal> = reals
        .iter()
        .zip(weights)
        .map(|(r, w)| real::scale(r, w))
        .collect::<Result<_>>()?;
    Ok(WeightedSum {
        total: real::sum_all(&scaled),
        parts: reals.iter().cloned().zip(weights.iter().cloned()).collect(),
    })
}

/// Given a witness for `sum m ⪯₁ c * alpha`, rebuilds `m` into a semimeasure
/// summing to `alpha`: divide by `c` and add `tau = alpha - (sum m)/c` at
/// index 0.
///
/// `w.alpha()` must present `sum m` and `w.target()` must present `c * alpha`.
/// At fuel `f`, `tau` is the `f`-th term of the difference presentation,
/// clamped at 0 and taken as 0 while still pending.
pub fn omega_with_sum(m: &Semimeasure, alpha: &LscReal, w: &ReductionWitness, fuel_per_query: Fuel) -> Result<Semimeasure> {
    let c = w.constant().clone();
    let diff = diff_to_lsc(w, w.target(), fuel_per_query);
    let inner = m.clone();
    let idx = m.clone();
    let cinv = c.recip();
    let declared = alpha.known_sup().cloned().unwrap_or_else(Q::one);
    Ok(Semimeasure::new(
        move |i, fuel| {
            let base = inner.weight(i, fuel)? * &cinv;
            if i != 0 {
                return Ok(base);
            }
            let tau = match diff.term(fuel.0 as usize) {
                Ok(t) => t,
                Err(Error::Pending(_)) => Q::zero(),
                Err(e) => return Err(e),
            };
            let tau = if tau.is_negative() { Q::zero() } else { tau * &cinv };
            Ok(base + tau)
        },
        move |fuel| {
            let mut ix = idx.indices(fuel);
            if !ix.contains(&0) {
                ix.insert(0, 0);
            }
            ix
        },
        declared,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn geo(start: Q, limit: Q) -> LscReal {
        LscReal::geometric(start, limit, q(1, 2)).unwrap()
    }

    #[test]
    fn phi_example() {
        let alpha = geo(Q::zero(), q(1, 2));
        let rho = geo(Q::zero(), q(1, 4));
        let w = witness_from_sum(&alpha, &rho);
        let s = q(5, 8);
        // Oracle: a_n + r_n = 3/4 - 3/4 * 2^-n; first n with that > 5/8 is n = 3.
        let oracle = (0..)
            .map(|n| (q(1, 2) - q(1, 2) * Q::pow2(-n), q(3, 4) - q(3, 4) * Q::pow2(-n)))
            .find(|(_, t)| t > &s)
            .unwrap()
            .0;
        let got = w.phi(&s, Fuel(100)).unwrap().confirmed().unwrap();
        assert_eq!(got, oracle);
        assert_eq!(got, q(7, 16));
        assert!(q(1, 2) - &got <= q(3, 4) - &s);
    }

    #[test]
    fn phi_fuel_boundary() {
        let alpha = geo(Q::zero(), q(1, 2));
        let rho = geo(Q::zero(), q(1, 4));
        let w = witness_from_sum(&alpha, &rho);
        // Stage 3 completes after 8 queries.
        assert_eq!(w.phi(&q(5, 8), Fuel(7)).unwrap(), Verdict::Pending);
        assert!(w.phi(&q(5, 8), Fuel(8)).unwrap().is_confirmed());
    }

    #[test]
    fn phi_identity_and_low_query() {
        let alpha = geo(Q::zero(), q(1, 2));
        let w = witness_from_sum(&alpha, &LscReal::constant(Q::zero()));
        assert_eq!(w.phi(&q(1, 3), Fuel(100)).unwrap(), Verdict::Confirmed(q(3, 8)));
        assert_eq!(w.phi(&q(-1, 1), Fuel(100)).unwrap(), Verdict::Confirmed(Q::zero()));
        // s at the limit never confirms.
        assert_eq!(w.phi(&q(1, 2), Fuel(200)).unwrap(), Verdict::Pending);
    }

    #[test]
    fn diff_recovers_rho() {
        let alpha = geo(Q::zero(), q(1, 4));
        let rho = geo(Q::zero(), q(1, 2));
        let w = witness_from_sum(&alpha, &rho);
        let d = diff_to_lsc(&w, w.target(), Fuel(400));
        let v = d.term(49).unwrap();
        assert!(v <= q(1, 2));
        assert!(q(1, 2) - &v < Q::pow2(-20));
        let p = d.prefix(50).unwrap();
        assert!(p.windows(2).all(|x| x[0] <= x[1]));
    }

    #[test]
    fn diff_identity_is_zero_limit() {
        let alpha = geo(Q::zero(), q(1, 2));
        let w = witness_from_sum(&alpha, &LscReal::constant(Q::zero()));
        let d = diff_to_lsc(&w, w.target(), Fuel(400));
        let v = d.term(60).unwrap();
        assert!(v <= Q::zero() && v > -Q::pow2(-40));
    }

    #[test]
    fn dominated_examples() {
        let v = LscReal::series(|i| if i == 0 { Q::zero() } else { Q::pow2(-(i as i64)) })
            .with_known_sup(Q::one());
        let u = LscReal::series(|i| if i == 0 { Q::zero() } else { Q::pow2(-(i as i64) - 1) })
            .with_known_sup(q(1, 2));
        let w = dominated_witness(&u, &v).unwrap();
        let checks = w.check_known(30, Fuel(1000)).unwrap();
        assert_eq!(checks.len(), 30);
        assert!(checks.iter().all(WitnessCheck::holds));

        let same = dominated_witness(&v, &v).unwrap();
        assert!(same.check_known(10, Fuel(1000)).unwrap().iter().all(WitnessCheck::holds));

        let bad_u = LscReal::finite(Kind::Series, vec![Q::zero(), q(1, 2)]).unwrap();
        let bad_v = LscReal::finite(Kind::Series, vec![Q::zero(), q(1, 4)]).unwrap();
        let w = dominated_witness(&bad_u, &bad_v).unwrap();
        assert_eq!(w.rho().term(1), Err(Error::DominationViolated { index: 1 }));
    }

    fn halves() -> LscReal {
        LscReal::series(|i| if i == 0 { Q::zero() } else { Q::pow2(-(i as i64)) }).with_known_sup(Q::one())
    }

    #[test]
    fn split_identity() {
        let v = halves();
        let w = dominated_witness(&v, &v).unwrap();
        let t = split_along(&v, &w, 30, Fuel(10_000), Some((&Q::one(), &Q::one()))).unwrap();
        for i in 0..30 {
            assert_eq!(t.terms[i], v.term(i).unwrap());
        }
        assert!(t.cases.iter().all(|c| *c == SplitCase::Above));
    }

    #[test]
    fn split_half() {
        let v = halves();
        let half = LscReal::series(|i| if i == 0 { Q::zero() } else { Q::pow2(-(i as i64) - 1) });
        let w = dominated_witness(&half, &v).unwrap();
        let t = split_along(&v, &w, 30, Fuel(10_000), Some((&q(1, 2), &Q::one()))).unwrap();
        let total: Q = t.terms.iter().sum();
        assert!(total < q(1, 2) && q(1, 2) - &total < Q::pow2(-25));
        for i in 0..30 {
            assert!(!t.terms[i].is_negative() && t.terms[i] <= v.term(i).unwrap());
        }
        assert_eq!(t.counts.iter().sum::<usize>(), 30);
        assert_eq!(t.cases.len(), 30);
    }

    #[test]
    fn split_rejects_bad_witness() {
        // Claims alpha = 1 while v sums to 1/2.
        let v = LscReal::series(|i| if i == 0 { Q::zero() } else { Q::pow2(-(i as i64) - 1) });
        let w = witness_from_sum(&v, &LscReal::constant(Q::zero()));
        let err = split_along(&v, &w, 10, Fuel(10_000), Some((&Q::one(), &q(1, 2))));
        assert!(matches!(err, Err(Error::InvariantBroken { .. })));
    }

    #[test]
    fn race_doubled_keeps_reducing() {
        let alpha = geo(Q::zero(), q(1, 2)).without_known_sup();
        let beta = real::scale(&alpha, &Q::int(2)).unwrap();
        for fuel in [10, 50, 200] {
            match race(&alpha, &beta, Fuel(fuel)).unwrap() {
                RaceOutcome::ReducingSoFar { holes_prefix, log, .. } => {
                    let exited = log.iter().filter(|s| s.hole.is_some()).count();
                    let total: Q = holes_prefix.iter().sum();
                    // Holes equal the alpha increments, so their sum is a_{exited}.
                    assert_eq!(total, q(1, 2) - q(1, 2) * Q::pow2(-(exited as i64)));
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn race_cover_contains_beta() {
        let alpha = geo(Q::zero(), Q::one());
        let beta = LscReal::finite(Kind::Sequence, vec![Q::zero(), q(1, 4), q(1, 2)]).unwrap();
        let out = race(&alpha, &beta, Fuel(100)).unwrap();
        let RaceOutcome::CoverProduced { cover, log } = out else {
            panic!("expected a cover")
        };
        assert!(cover.items().iter().any(|i| i.contains(&q(1, 2))));
        let shifted: Q = log.iter().map(|s| &s.right - &s.left).sum();
        let a_last = alpha.term(log.len()).unwrap();
        assert!(shifted <= a_last - alpha.term(0).unwrap());
    }

    #[test]
    fn race_never_flips_back() {
        let alpha = geo(Q::zero(), Q::one());
        let beta = LscReal::finite(Kind::Sequence, vec![Q::zero(), q(1, 8), q(1, 4), q(3, 8)]).unwrap();
        let mut seen_cover = false;
        for fuel in 0..60 {
            let c = race(&alpha, &beta, Fuel(fuel)).unwrap().is_cover();
            assert!(!(seen_cover && !c));
            seen_cover |= c;
        }
        assert!(seen_cover);
    }

    #[test]
    fn weighted_examples() {
        let single = weighted_complete(&[geo(Q::zero(), q(1, 2))], &[Q::one()]).unwrap();
        assert_eq!(single.total.prefix(10).unwrap(), geo(Q::zero(), q(1, 2)).prefix(10).unwrap());

        let a = LscReal::constant(q(1, 2));
        let b = LscReal::constant(q(1, 4));
        let ws = weighted_complete(&[a, b], &[q(1, 2), q(1, 4)]).unwrap();
        // Oracle: 1/2 * 1/2 + 1/4 * 1/4.
        assert_eq!(ws.total.term(5).unwrap(), q(5, 16));

        let geo_pair = weighted_complete(&[geo(Q::zero(), q(1, 2)), geo(q(1, 8), q(3, 4))], &[q(1, 2), q(1, 4)]).unwrap();
        let w = geo_pair.witness(0).unwrap();
        assert_eq!(w.constant(), &Q::int(2));
        let checks = w.check_known(20, Fuel(1000)).unwrap();
        assert_eq!(checks.len(), 20);
        assert!(checks.iter().all(WitnessCheck::holds));

        assert!(matches!(
            weighted_complete(&[LscReal::constant(q(1, 2))], &[Q::zero()]),
            Err(Error::InvalidWeights(_))
        ));
        assert!(matches!(
            weighted_complete(&[LscReal::constant(q(3, 2))], &[q(1, 2)]),
            Err(Error::RealOutOfRange { index: 0 })
        ));
    }

    #[test]
    fn compose_transitive() {
        let a = geo(Q::zero(), q(1, 4));
        let b = geo(Q::zero(), q(1, 2));
        let w1 = witness_from_sum(&a, &geo(Q::zero(), q(1, 4)));
        let w2 = witness_from_sum(&b, &geo(Q::zero(), q(1, 4)));
        let w = w1.compose(&w2).unwrap();
        assert_eq!(w.constant(), &Q::one());
        let checks = w.check_known(20, Fuel(2000)).unwrap();
        assert!(checks.iter().all(WitnessCheck::holds), "{checks:?}");
    }

    #[test]
    fn omega_with_sum_tracks_alpha() {
        let mach = crate::machine::Machine::builtin("default").unwrap();
        let m = mach.apriori();
        let omega = mach.kraft_sum();
        let sm = m.total_real().with_known_sup(omega.clone());
        // alpha = omega + 1/256 = 1, with a strictly increasing difference.
        let rho = geo(Q::zero(), q(1, 256));
        let alpha = real::sum(&sm, &rho);
        let w = witness_scaled(&sm, &rho, &alpha, &Q::one()).unwrap();
        let mp = omega_with_sum(&m, &alpha, &w, Fuel(400)).unwrap();
        assert_eq!(mp.declared_total(), &Q::one());
        let full = mach.full_fuel().0;
        for f in 0..full + 40 {
            assert!(mp.check_total(Fuel(f)).is_ok());
        }
        for k in [10, 20, 30] {
            let t = mp.total(Fuel(full + k + 2)).unwrap();
            assert!(Q::one() - t < Q::pow2(-(k as i64)));
        }
        for i in mach.apriori_at(mach.full_fuel()).keys().filter(|&&i| i != 0) {
            assert_eq!(mp.weight(*i, Fuel(full)).unwrap(), m.weight(*i, Fuel(full)).unwrap());
        }
    }

    #[test]
    fn omega_with_sum_identity() {
        let mach = crate::machine::Machine::builtin("default").unwrap();
        let m = mach.apriori();
        let sm = m.total_real();
        let w = witness_from_sum(&sm, &LscReal::constant(Q::zero()));
        let mp = omega_with_sum(&m, &sm, &w, Fuel(200)).unwrap();
        let full = mach.full_fuel();
        for i in 0..20 {
            let base = m.weight(i, full).unwrap();
            assert!(mp.weight(i, full).unwrap() >= base);
        }
    }

    proptest! {
        #[test]
        fn witness_sound_on_random_pairs(an in 0i64..50, rn in 0i64..50, den in 1i64..60) {
            let a_lim = q(an, den);
            let r_lim = q(rn, den);
            let alpha = geo(Q::zero(), a_lim.clone());
            let rho = LscReal::geometric(Q::zero(), r_lim.clone(), q(1, 3)).unwrap();
            let w = witness_from_sum(&alpha, &rho);
            for c in w.check_known(10, Fuel(2000)).unwrap() {
                prop_assert!(c.holds() || a_lim.is_zero());
            }
        }
    }
}
