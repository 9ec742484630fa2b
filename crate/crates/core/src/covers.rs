//! Rational interval covers: length accounting, containment, the transfer
//! of covers along a reduction, the even/odd union bound for dense
//! intervals, and the complexity-radius neighborhoods of a machine's outputs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::Machine;
use crate::rational::Q;
use crate::real::{Fuel, LscReal, Verdict};
use crate::reduce::ReductionWitness;

/// Which endpoints belong to an interval.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Openness {
    /// `(l, r)`
    Open,
    /// `[l, r]`
    Closed,
    /// `[l, r)`, the shape of painted segments.
    LeftClosed,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub left: Q,
    pub right: Q,
    pub openness: Openness,
}

impl Interval {
    pub fn new(left: Q, right: Q, openness: Openness) -> Result<Self> {
        if left > right {
            return Err(Error::InvalidInput(format!("interval ({left}, {right}) has left > right")));
        }
        Ok(Interval { left, right, openness })
    }

    pub fn open(left: Q, right: Q) -> Result<Self> {
        Self::new(left, right, Openness::Open)
    }

    pub fn closed(left: Q, right: Q) -> Result<Self> {
        Self::new(left, right, Openness::Closed)
    }

    pub fn left_included(&self) -> bool {
        matches!(self.openness, Openness::Closed | Openness::LeftClosed)
    }

    pub fn right_included(&self) -> bool {
        self.openness == Openness::Closed
    }

    pub fn length(&self) -> Q {
        &self.right - &self.left
    }

    pub fn is_empty(&self) -> bool {
        self.left == self.right && self.openness != Openness::Closed
    }

    pub fn contains(&self, x: &Q) -> bool {
        let above = if self.left_included() { &self.left <= x } else { &self.left < x };
        let below = if self.right_included() { x <= &self.right } else { x < &self.right };
        above && below
    }

    /// Whether the two point sets intersect.
    pub fn overlaps(&self, other: &Interval) -> bool {
        if self.is_empty() || other.is_empty() {
            return false;
        }
        let (a, b) = if self.left <= other.left { (self, other) } else { (other, self) };
        if a.right > b.left {
            return true;
        }
        a.right == b.left && a.right_included() && b.left_included()
    }

    fn token(&self) -> &'static str {
        match self.openness {
            Openness::Open => "open",
            Openness::Closed => "closed",
            Openness::LeftClosed => "half-open",
        }
    }
}

/// A finite prefix of an interval enumeration with a declared length budget.
/// Item `k` is revealed at fuel `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    items: Vec<Interval>,
    length_budget: Q,
}

impl Cover {
    pub fn new(items: Vec<Interval>, length_budget: Q) -> Self {
        Cover { items, length_budget }
    }

    pub fn empty(length_budget: Q) -> Self {
        Cover::new(Vec::new(), length_budget)
    }

    pub fn items(&self) -> &[Interval] {
        &self.items
    }

    pub fn length_budget(&self) -> &Q {
        &self.length_budget
    }

    /// Items revealed within `fuel`.
    pub fn revealed(&self, fuel: Fuel) -> &[Interval] {
        &self.items[..(fuel.0 as usize).min(self.items.len())]
    }

    pub fn push(&mut self, item: Interval) {
        self.items.push(item);
    }

    /// Lines `l r open|closed|half-open`, plus an optional `budget q` line.
    /// Without one the budget is the total length of the items.
    pub fn parse(text: &str) -> Result<Self> {
        let mut items = Vec::new();
        let mut budget = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| Error::Parse {
                line: lineno + 1,
                message: m,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<Q>().map_err(|e| err(e.to_string()));
            match fields.as_slice() {
                ["budget", b] => budget = Some(num(b)?),
                [l, r, kind] => {
                    let openness = match *kind {
                        "open" => Openness::Open,
                        "closed" => Openness::Closed,
                        "half-open" => Openness::LeftClosed,
                        other => return Err(err(format!("unknown openness {other:?}"))),
                    };
                    items.push(Interval::new(num(l)?, num(r)?, openness).map_err(|e| err(e.to_string()))?);
                }
                _ => return Err(err("expected `l r open|closed|half-open`".into())),
            }
        }
        let budget = budget.unwrap_or_else(|| items.iter().map(Interval::length).sum());
        Ok(Cover::new(items, budget))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Cover::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("budget {}\n", self.length_budget);
        for i in &self.items {
            writeln!(out, "{} {} {}", i.left, i.right, i.token()).unwrap();
        }
        out
    }
}

/// Sum of item lengths revealed within `fuel` (not the union measure).
pub fn total_length(c: &Cover, fuel: Fuel) -> Result<Q> {
    let mut total = Q::zero();
    for (index, item) in c.revealed(fuel).iter().enumerate() {
        total += item.length();
        if total > c.length_budget {
            return Err(Error::LengthBudgetExceeded {
                index,
                total,
                budget: c.length_budget.clone(),
            });
        }
    }
    Ok(total)
}

/// Measure of the union of `items`.
pub fn union_measure(items: &[Interval]) -> Q {
    measure_right_of(items, None)
}

/// Measure of the union of `items` intersected with `(x, inf)`, or of the
/// whole union for `None`.
pub fn measure_right_of(items: &[Interval], x: Option<&Q>) -> Q {
    let mut spans: Vec<(Q, Q)> = items
        .iter()
        .filter_map(|i| {
            let l = match x {
                Some(x) if x > &i.left => x.clone(),
                _ => i.left.clone(),
            };
            (l < i.right).then(|| (l, i.right.clone()))
        })
        .collect();
    spans.sort();
    let mut total = Q::zero();
    let mut cur: Option<(Q, Q)> = None;
    for (l, r) in spans {
        cur = match cur {
            Some((cl, cr)) if l <= cr => Some((cl, if r > cr { r } else { cr })),
            Some((cl, cr)) => {
                total += cr - cl;
                Some((l, r))
            }
            None => Some((l, r)),
        };
    }
    if let Some((cl, cr)) = cur {
        total += cr - cl;
    }
    total
}

/// How far contiguous coverage extends right of `x`.
///
/// With `include_x` the point `x` itself must be covered (else `None`);
/// without it only points just right of `x` matter. Returns `(R, closed)`:
/// `[x, R)` (or `(x, R)`) lies inside the union, and `closed` says whether
/// `R` itself is covered too. Abutting open intervals leave their shared
/// endpoint uncovered, which stops the sweep there.
pub fn reach(items: &[Interval], x: &Q, include_x: bool) -> Option<(Q, bool)> {
    let mut frontier = x.clone();
    if include_x {
        if !items.iter().any(|i| i.contains(x)) {
            return None;
        }
    } else {
        // Points just right of x: intervals with left <= x < right.
        let best = items
            .iter()
            .filter(|i| &i.left <= x && x < &i.right)
            .map(|i| i.right.clone())
            .max();
        match best {
            None => return Some((x.clone(), items.iter().any(|i| i.contains(x)))),
            Some(r) => frontier = r,
        }
    }
    loop {
        // The frontier must itself be covered; then extend through intervals
        // holding it or starting at it.
        if !items.iter().any(|i| i.contains(&frontier)) {
            return Some((frontier, false));
        }
        let r = items
            .iter()
            .filter(|i| i.contains(&frontier) || (i.left == frontier && i.right > frontier))
            .map(|i| i.right.clone())
            .max()
            .unwrap();
        if r == frontier {
            return Some((frontier, true));
        }
        frontier = r;
    }
}

/// Whether `target` is a subset of the union of `items`.
pub fn is_covered_by(target: &Interval, items: &[Interval]) -> bool {
    if target.is_empty() {
        return true;
    }
    let start = reach(items, &target.left, target.left_included());
    match start {
        None => false,
        Some((r, inc)) => r > target.right || (r == target.right && (inc || !target.right_included())),
    }
}

/// Confirmed with the item index when an approximation lies inside an item
/// whose right end provably bounds the limit through `known_sup`.
pub fn contains(c: &Cover, a: &LscReal, fuel: Fuel) -> Result<Verdict<usize>> {
    let Some(sup) = a.known_sup() else {
        return Ok(Verdict::Pending);
    };
    if fuel.0 == 0 {
        return Ok(Verdict::Pending);
    }
    let approx = a.to_sequence().term(fuel.0 as usize - 1)?;
    for (k, item) in c.revealed(fuel).iter().enumerate() {
        let above = if item.left_included() { item.left <= approx } else { item.left < approx };
        let bounded = if item.right_included() { sup <= &item.right } else { sup < &item.right };
        if above && bounded && &approx <= sup {
            return Ok(Verdict::Confirmed(k));
        }
    }
    Ok(Verdict::Pending)
}

/// Transfers a cover of `beta` to a cover of `alpha` along `w`.
///
/// At stage `t` the approximation `b_t` is read and item `t` is revealed.
/// Intervals entirely left of `b_t` are dropped, intervals right of it wait
/// in a queue keyed by left endpoint, and an interval containing `b_t` is
/// re-emitted with the same length and openness starting at `phi(b_t)`.
pub fn transform_cover(cover: &Cover, w: &ReductionWitness, b: &LscReal, fuel: Fuel) -> Result<Cover> {
    let seq = b.to_sequence();
    let mut out = Cover::empty(cover.length_budget.clone());
    let mut waiting: BTreeMap<(Q, usize), Interval> = BTreeMap::new();
    for t in 0..fuel.0 as usize {
        let bt = seq.term(t)?;
        if let Some(item) = cover.items.get(t) {
            waiting.insert((item.left.clone(), t), item.clone());
        }
        let due: Vec<(Q, usize)> = waiting.range(..=(bt.clone(), usize::MAX)).map(|(k, _)| k.clone()).collect();
        for key in due {
            let item = &waiting[&key];
            if item.contains(&bt) {
                if let Verdict::Confirmed(aj) = w.phi(&bt, fuel)? {
                    let len = item.length();
                    let moved = Interval::new(aj.clone(), aj + len, item.openness)?;
                    out.push(moved);
                    waiting.remove(&key);
                }
            } else if bt >= item.right {
                // Entirely left of the approximation: beta cannot be inside.
                waiting.remove(&key);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnionBound {
    /// `4/c`.
    pub bound: Q,
    pub union_measure: Q,
    /// Non-redundant intervals sorted by left endpoint.
    pub selected: Vec<Interval>,
    pub removed: Vec<Interval>,
    pub even: Vec<Interval>,
    pub odd: Vec<Interval>,
    pub even_length: Q,
    pub odd_length: Q,
}

impl UnionBound {
    pub fn holds(&self) -> bool {
        self.union_measure <= self.bound
    }
}

/// Certifies `measure(union) <= 4/c` for intervals each carrying more than
/// `c/2` times its length in point weight.
pub fn union_bound(intervals: &[Interval], weights: &BTreeMap<Q, Q>, c: &Q) -> Result<UnionBound> {
    if !c.is_positive() {
        return Err(Error::NonPositiveScale(c.clone()));
    }
    if let Some((p, w)) = weights.iter().find(|(_, w)| w.is_negative()) {
        return Err(Error::InvalidWeights(format!("weight {w} at {p} is negative")));
    }
    let total: Q = weights.values().sum();
    if total > Q::one() {
        return Err(Error::InvalidWeights(format!("weights sum to {total} > 1")));
    }
    let half_c = c / Q::int(2);
    for i in intervals {
        let inner: Q = weights
            .range(i.left.clone()..=i.right.clone())
            .filter(|(p, _)| i.contains(p))
            .map(|(_, w)| w.clone())
            .sum();
        if inner <= &half_c * i.length() {
            return Err(Error::DensityViolated {
                left: i.left.clone(),
                right: i.right.clone(),
            });
        }
    }
    let mut kept: Vec<Interval> = intervals.iter().filter(|i| !i.is_empty()).cloned().collect();
    let mut removed: Vec<Interval> = intervals.iter().filter(|i| i.is_empty()).cloned().collect();
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > intervals.len() + 2 {
            return Err(Error::RedundancyLoopGuard);
        }
        let victim = (0..kept.len()).find(|&k| {
            let others: Vec<Interval> = kept
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, x)| x.clone())
                .collect();
            is_covered_by(&kept[k], &others)
        });
        match victim {
            Some(k) => removed.push(kept.remove(k)),
            None => break,
        }
    }
    kept.sort_by(|a, b| (&a.left, &a.right).cmp(&(&b.left, &b.right)));
    for k in 1..kept.len() {
        if kept[k].right < kept[k - 1].right {
            return Err(Error::InvalidInput("selected right endpoints are not sorted".into()));
        }
    }
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for (k, i) in kept.iter().enumerate() {
        if k + 2 < kept.len() && i.right > kept[k + 2].left {
            return Err(Error::InvalidInput("selected intervals overlap two apart".into()));
        }
        if k % 2 == 0 { even.push(i.clone()) } else { odd.push(i.clone()) }
    }
    for group in [&even, &odd] {
        for w in group.windows(2) {
            if w[0].overlaps(&w[1]) {
                return Err(Error::InvalidInput("parity class is not disjoint".into()));
            }
        }
    }
    let even_length = even.iter().map(Interval::length).sum();
    let odd_length = odd.iter().map(Interval::length).sum();
    Ok(UnionBound {
        bound: Q::int(4) / c,
        union_measure: union_measure(&kept),
        selected: kept,
        removed,
        even,
        odd,
        even_length,
        odd_length,
    })
}

/// Parses `point weight` lines.
pub fn parse_weights(text: &str) -> Result<BTreeMap<Q, Q>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| Error::Parse {
            line: lineno + 1,
            message: m,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [p, w] = fields.as_slice() else {
            return Err(err("expected `point weight`".into()));
        };
        let p: Q = p.parse().map_err(|e: Error| err(e.to_string()))?;
        let w: Q = w.parse().map_err(|e: Error| err(e.to_string()))?;
        *out.entry(p).or_insert_with(Q::zero) += w;
    }
    Ok(out)
}

/// The `n`-th rational of the Calkin-Wilf enumeration: `fusc(n)/fusc(n+1)`.
/// Every non-negative rational appears exactly once.
pub fn decode_rational(n: u64) -> Q {
    Q::new(fusc(n) as i64, fusc(n + 1) as i64)
}

fn fusc(mut n: u64) -> u64 {
    let (mut a, mut b) = (1u64, 0u64);
    while n > 0 {
        if n & 1 == 1 {
            b += a;
        } else {
            a += b;
        }
        n >>= 1;
    }
    b
}

/// Neighborhoods `(r - 2^-(k+c), r + 2^-(k+c))` of every rational `r` output
/// by the machine, where `k` is the current length bound for `r`.
///
/// Outputs are decoded with [`decode_rational`]. Walking the entries in
/// enumeration order, an interval is emitted whenever the bound improves;
/// earlier wider intervals stay in the enumeration.
pub fn u_c_cover(machine: &Machine, c: u32, fuel: Fuel) -> Cover {
    let mut best: BTreeMap<u64, usize> = BTreeMap::new();
    let mut items = Vec::new();
    for e in machine.entries().iter().take_while(|e| e.time <= fuel.0) {
        let k = e.program.len();
        if best.get(&e.output).is_some_and(|&b| b <= k) {
            continue;
        }
        best.insert(e.output, k);
        let r = decode_rational(e.output);
        let rad = Q::pow2(-(k as i64 + c as i64));
        items.push(Interval::open(&r - &rad, &r + &rad).expect("radius is positive"));
    }
    Cover::new(items, Q::pow2(1 - c as i64))
}

/// Distinct rationals a cover's items are centered on (for open symmetric items).
pub fn centers(c: &Cover) -> BTreeSet<Q> {
    c.items
        .iter()
        .map(|i| (&i.left + &i.right) / Q::int(2))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::Entry;
    use crate::rational::q;
    use crate::reduce::witness_from_sum;
    use proptest::prelude::*;

    fn open(l: Q, r: Q) -> Interval {
        Interval::open(l, r).unwrap()
    }

    fn closed(l: Q, r: Q) -> Interval {
        Interval::closed(l, r).unwrap()
    }

    #[test]
    fn total_length_examples() {
        assert_eq!(total_length(&Cover::empty(Q::one()), Fuel(10)).unwrap(), Q::zero());
        let c = Cover::new(vec![open(Q::zero(), q(1, 4)), open(q(1, 2), q(5, 8))], Q::one());
        assert_eq!(total_length(&c, Fuel(10)).unwrap(), q(3, 8));
        let tight = Cover::new(c.items().to_vec(), q(1, 4));
        assert_eq!(total_length(&tight, Fuel(1)).unwrap(), q(1, 4));
        assert!(matches!(
            total_length(&tight, Fuel(2)),
            Err(Error::LengthBudgetExceeded { index: 1, .. })
        ));
    }

    #[test]
    fn contains_examples() {
        let a = LscReal::geometric(Q::zero(), q(1, 2), q(1, 2)).unwrap();
        let wide = Cover::new(vec![open(Q::zero(), Q::one())], Q::one());
        assert_eq!(contains(&wide, &a, Fuel(5)).unwrap(), Verdict::Confirmed(0));
        let narrow = Cover::new(vec![open(Q::zero(), q(1, 4))], Q::one());
        for f in 0..40 {
            assert_eq!(contains(&narrow, &a, Fuel(f)).unwrap(), Verdict::Pending);
        }
        assert_eq!(contains(&wide, &a.without_known_sup(), Fuel(5)).unwrap(), Verdict::Pending);
    }

    #[test]
    fn reach_examples() {
        let items = vec![open(Q::zero(), q(1, 2)), open(q(1, 2), q(3, 4))];
        assert_eq!(reach(&items, &q(1, 4), true), Some((q(1, 2), false)));
        assert_eq!(reach(&items, &q(1, 2), true), None);
        let items = vec![open(Q::zero(), q(1, 2)), closed(q(1, 2), q(3, 4)), open(q(3, 4), Q::one())];
        assert_eq!(reach(&items, &q(1, 4), true), Some((Q::one(), false)));
        assert!(is_covered_by(&closed(q(1, 8), q(7, 8)), &items));
        assert!(!is_covered_by(&closed(q(1, 8), Q::one()), &items));
        assert!(is_covered_by(&open(Q::zero(), Q::one()), &items));
    }

    #[test]
    fn measure_examples() {
        let items = vec![open(Q::zero(), q(1, 2)), closed(q(1, 4), q(3, 4)), open(Q::one(), q(3, 2))];
        assert_eq!(union_measure(&items), Q::one() + q(1, 4));
        assert_eq!(measure_right_of(&items, Some(&q(1, 2))), q(1, 4) + q(1, 2));
    }

    #[test]
    fn parse_round_trip() {
        let c = Cover::parse("# c\n0/1 1/4 open\n1/2 5/8 closed\n1 2 half-open\n").unwrap();
        assert_eq!(c.length_budget(), &(q(3, 8) + Q::one()));
        assert_eq!(Cover::parse(&c.to_text()).unwrap(), c);
        assert!(Cover::parse("1 0 open").is_err());
        assert!(Cover::parse("0 1 ajar").is_err());
    }

    #[test]
    fn transform_identity() {
        let a = LscReal::geometric(Q::zero(), q(1, 2), q(1, 2)).unwrap();
        let w = witness_from_sum(&a, &LscReal::constant(Q::zero()));
        let input = Cover::new(
            vec![open(q(-1, 2), q(-1, 4)), open(q(7, 16), q(9, 16)), closed(q(3, 4), Q::one())],
            Q::one(),
        );
        let out = transform_cover(&input, &w, w.target(), Fuel(40)).unwrap();
        assert_eq!(out.items().len(), 1);
        assert_eq!(out.items()[0].length(), q(1, 8));
        assert!(total_length(&out, Fuel(100)).unwrap() <= total_length(&input, Fuel(100)).unwrap());
        let ok = (1..60).any(|f| contains(&out, &a, Fuel(f)).unwrap().is_confirmed());
        assert!(ok);
    }

    #[test]
    fn union_bound_examples() {
        let single = [open(Q::zero(), q(1, 8))];
        // Inner weight 1/10 against (c/2) * 1/8 = 1/10 sits on the strict boundary.
        let w = BTreeMap::from([(q(1, 16), q(1, 10))]);
        assert!(matches!(union_bound(&single, &w, &q(8, 5)), Err(Error::DensityViolated { .. })));
        let w = BTreeMap::from([(q(1, 16), q(1, 9))]);
        let ub = union_bound(&single, &w, &q(8, 5)).unwrap();
        assert_eq!(ub.bound, q(5, 2));
        assert_eq!(ub.union_measure, q(1, 8));

        let two = [open(Q::zero(), q(1, 8)), open(q(1, 2), q(5, 8))];
        let w = BTreeMap::from([(q(1, 16), q(1, 4)), (q(9, 16), q(1, 4))]);
        let ub = union_bound(&two, &w, &Q::int(2)).unwrap();
        assert!(ub.holds());
        assert_eq!((ub.even.len(), ub.odd.len()), (1, 1));

        let three = [open(Q::zero(), q(1, 2)), open(q(1, 8), q(3, 8)), open(q(1, 4), q(3, 4))];
        let w = BTreeMap::from([(q(5, 16), q(1, 2))]);
        let ub = union_bound(&three, &w, &Q::one()).unwrap();
        assert_eq!(ub.removed, vec![open(q(1, 8), q(3, 8))]);
        for (k, i) in ub.selected.iter().enumerate() {
            let others: Vec<Interval> = ub
                .selected
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, x)| x.clone())
                .collect();
            assert!(!is_covered_by(i, &others));
        }
    }

    #[test]
    fn calkin_wilf_prefix() {
        let got: Vec<Q> = (0..8).map(decode_rational).collect();
        let want = vec![Q::zero(), Q::one(), q(1, 2), Q::int(2), q(1, 3), q(3, 2), q(2, 3), Q::int(3)];
        assert_eq!(got, want);
        let distinct: BTreeSet<Q> = (0..2000).map(decode_rational).collect();
        assert_eq!(distinct.len(), 2000);
    }

    #[test]
    fn u_c_examples() {
        let mach = Machine::new(vec![Entry::new("0", 2, 5), Entry::new("10", 2, 1), Entry::new("110", 5, 2)]).unwrap();
        let c = u_c_cover(&mach, 3, mach.full_fuel());
        // Output 2 first appears with length 2, then improves to length 1.
        assert_eq!(c.items().len(), 3);
        assert_eq!(c.items()[0], open(q(1, 2) - q(1, 32), q(1, 2) + q(1, 32)));
        assert_eq!(c.items()[2], open(q(1, 2) - q(1, 16), q(1, 2) + q(1, 16)));
        assert!(total_length(&c, Fuel(10)).unwrap() <= Q::pow2(-2));

        let def = Machine::builtin("default").unwrap();
        let full = def.full_fuel();
        let cover = u_c_cover(&def, 4, full);
        for i in cover.items() {
            let center = (&i.left + &i.right) / Q::int(2);
            let out = def.entries().iter().find(|e| decode_rational(e.output) == center).unwrap().output;
            let k = def.kp(out, full).confirmed().unwrap();
            assert!(i.length() >= Q::pow2(-(k as i64 + 4)) * Q::int(2));
        }
        let prev = u_c_cover(&def, 4, Fuel(5));
        assert_eq!(&cover.items()[..prev.items().len()], prev.items());
    }

    proptest! {
        #[test]
        fn measure_matches_grid_count(raw in proptest::collection::vec((0i64..32, 0i64..8), 0..8)) {
            // Items on a grid of 1/32; count covered cells directly.
            let items: Vec<Interval> = raw.iter().map(|&(l, w)| open(q(l, 32), q(l + w, 32))).collect();
            let mut cells = BTreeSet::new();
            for &(l, w) in &raw {
                for k in l..l + w {
                    cells.insert(k);
                }
            }
            prop_assert_eq!(union_measure(&items), q(cells.len() as i64, 32));
        }
    }
}
