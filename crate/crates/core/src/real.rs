//! Lower semicomputable reals as budget-indexed rational streams.
//!
//! A real is presented in one of three equivalent ways: an increasing
//! sequence of approximations, a series whose terms past index 0 are
//! non-negative, or an enumeration of rationals below the limit. All three
//! share one representation, a pure term function `usize -> Q`, plus the
//! [`Kind`] tag saying how to read it. [`LscReal::to_sequence`] converts any
//! of them to the sequence view, memoizing the running scan so that walking
//! a prefix costs linear work.
//!
//! Sequences are only required to be non-decreasing internally. Computable
//! reals naturally show up as streams whose increments eventually vanish;
//! [`LscReal::strict_prefix`] recovers the strictly increasing presentation
//! together with the index remapping.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Q;

/// Enumeration budget. Every budgeted operation is a deterministic function
/// of its input and the fuel; raising the fuel never retracts output.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Fuel(pub u64);

impl Fuel {
    pub fn steps(self) -> u64 {
        self.0
    }
}

/// Counts down fuel as term queries are made.
#[derive(Debug, Clone)]
pub struct Budget {
    left: u64,
    used: u64,
}

impl Budget {
    pub fn new(fuel: Fuel) -> Self {
        Budget {
            left: fuel.0,
            used: 0,
        }
    }

    /// Takes one step; `false` once the budget is gone.
    pub fn spend(&mut self) -> bool {
        if self.left == 0 {
            return false;
        }
        self.left -= 1;
        self.used += 1;
        true
    }

    pub fn exhausted(&self) -> bool {
        self.left == 0
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

/// Outcome of a semi-decidable query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "snake_case")]
pub enum Verdict<T> {
    Confirmed(T),
    Pending,
}

impl<T> Verdict<T> {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, Verdict::Confirmed(_))
    }

    pub fn confirmed(self) -> Option<T> {
        match self {
            Verdict::Confirmed(t) => Some(t),
            Verdict::Pending => None,
        }
    }

    pub fn as_ref(&self) -> Verdict<&T> {
        match self {
            Verdict::Confirmed(t) => Verdict::Confirmed(t),
            Verdict::Pending => Verdict::Pending,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Verdict<U> {
        match self {
            Verdict::Confirmed(t) => Verdict::Confirmed(f(t)),
            Verdict::Pending => Verdict::Pending,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// `term(i)` is the approximation `a_i`.
    Sequence,
    /// `term(i)` is `d_i`; the real is `d_0 + d_1 + ...`.
    Series,
    /// `term(i)` is the `i`-th rational enumerated below the real.
    LeftCut,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Sequence => "sequence",
            Kind::Series => "series",
            Kind::LeftCut => "leftcut",
        })
    }
}

type TermFn = dyn Fn(usize) -> Result<Q> + Send + Sync;

/// A lower semicomputable real given by a deterministic term function.
#[derive(Clone)]
pub struct LscReal {
    kind: Kind,
    source: Arc<TermFn>,
    known_sup: Option<Q>,
}

impl fmt::Debug for LscReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LscReal")
            .field("kind", &self.kind)
            .field("known_sup", &self.known_sup)
            .finish_non_exhaustive()
    }
}

impl LscReal {
    pub fn from_fallible<F>(kind: Kind, f: F) -> Self
    where
        F: Fn(usize) -> Result<Q> + Send + Sync + 'static,
    {
        LscReal {
            kind,
            source: Arc::new(f),
            known_sup: None,
        }
    }

    pub fn sequence<F>(f: F) -> Self
    where
        F: Fn(usize) -> Q + Send + Sync + 'static,
    {
        Self::from_fallible(Kind::Sequence, move |i| Ok(f(i)))
    }

    pub fn series<F>(f: F) -> Self
    where
        F: Fn(usize) -> Q + Send + Sync + 'static,
    {
        Self::from_fallible(Kind::Series, move |i| Ok(f(i)))
    }

    pub fn leftcut<F>(f: F) -> Self
    where
        F: Fn(usize) -> Q + Send + Sync + 'static,
    {
        Self::from_fallible(Kind::LeftCut, move |i| Ok(f(i)))
    }

    /// A finite literal. Past the listed terms a sequence or left cut repeats
    /// its last value and a series continues with zeros, so the limit is
    /// exact and recorded as `known_sup`.
    pub fn finite(kind: Kind, terms: Vec<Q>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput("a real needs at least one term".into()));
        }
        let limit = match kind {
            Kind::Sequence => terms.last().cloned().unwrap(),
            Kind::Series => terms.iter().sum(),
            Kind::LeftCut => terms.iter().max().cloned().unwrap(),
        };
        let terms = Arc::new(terms);
        let n = terms.len();
        let real = Self::from_fallible(kind, move |i| {
            Ok(match (i < n, kind) {
                (true, _) => terms[i].clone(),
                (false, Kind::Series) => Q::zero(),
                (false, _) => terms[n - 1].clone(),
            })
        });
        // Validate the listed part now so a bad literal fails at load time.
        real.prefix(n)?;
        Ok(real.with_known_sup(limit))
    }

    /// The constant sequence `q, q, q, ...` (a computable real).
    pub fn constant(value: Q) -> Self {
        let v = value.clone();
        Self::sequence(move |_| v.clone()).with_known_sup(value)
    }

    /// `a_i = limit - (limit - start) * ratio^i`: strictly increasing towards
    /// `limit` when `start < limit` and `0 < ratio < 1`. The workhorse
    /// computable test real.
    pub fn geometric(start: Q, limit: Q, ratio: Q) -> Result<Self> {
        if start > limit || !ratio.is_positive() || ratio >= Q::one() {
            return Err(Error::InvalidInput(
                "geometric real needs start <= limit and 0 < ratio < 1".into(),
            ));
        }
        let gap = &limit - &start;
        let lim = limit.clone();
        let cache: Arc<Mutex<Vec<Q>>> = Arc::new(Mutex::new(vec![Q::one()]));
        Ok(Self::sequence(move |i| {
            let mut powers = cache.lock().unwrap();
            while powers.len() <= i {
                let next = powers.last().unwrap() * &ratio;
                powers.push(next);
            }
            &lim - &gap * &powers[i]
        })
        .with_known_sup(limit))
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn known_sup(&self) -> Option<&Q> {
        self.known_sup.as_ref()
    }

    pub fn with_known_sup(mut self, sup: Q) -> Self {
        self.known_sup = Some(sup);
        self
    }

    pub fn without_known_sup(mut self) -> Self {
        self.known_sup = None;
        self
    }

    /// The raw `i`-th term, read according to [`LscReal::kind`].
    pub fn term(&self, i: usize) -> Result<Q> {
        (self.source)(i)
    }

    /// Sequence view with validation and a memoized running scan.
    ///
    /// Series terms past index 0 must be non-negative, sequences must not
    /// decrease; violations surface as errors at the offending index.
    pub fn to_sequence(&self) -> LscReal {
        let step: fn(usize, &Q, Q) -> Result<Q> = match self.kind {
            Kind::Sequence => |i, prev, t| {
                if &t < prev {
                    Err(Error::NotIncreasing { index: i })
                } else {
                    Ok(t)
                }
            },
            Kind::Series => |i, prev, t| {
                if t.is_negative() {
                    Err(Error::NegativeTerm { index: i })
                } else {
                    Ok(prev + t)
                }
            },
            Kind::LeftCut => |_, prev, t| Ok(if &t > prev { t } else { prev.clone() }),
        };
        let inner = self.source.clone();
        let cache: Arc<Mutex<Vec<Q>>> = Arc::new(Mutex::new(Vec::new()));
        LscReal {
            kind: Kind::Sequence,
            source: Arc::new(move |i| {
                let mut c = cache.lock().unwrap();
                while c.len() <= i {
                    let j = c.len();
                    let t = inner(j)?;
                    let v = match c.last() {
                        None => t,
                        Some(prev) => step(j, prev, t)?,
                    };
                    c.push(v);
                }
                Ok(c[i].clone())
            }),
            known_sup: self.known_sup.clone(),
        }
    }

    /// The first `n` approximations `a_0..a_{n-1}`.
    pub fn prefix(&self, n: usize) -> Result<Vec<Q>> {
        let seq = self.to_sequence();
        (0..n).map(|i| seq.term(i)).collect()
    }

    /// Strictly increasing presentation of the first `n` approximations,
    /// skipping repeats and recording where each kept value came from.
    pub fn strict_prefix(&self, n: usize) -> Result<StrictPrefix> {
        let mut out = StrictPrefix::default();
        for (i, v) in self.prefix(n)?.into_iter().enumerate() {
            if out.values.last().map_or(true, |last| &v > last) {
                out.values.push(v);
                out.indices.push(i);
            }
        }
        Ok(out)
    }
}

/// A finite strictly increasing prefix with its index remapping.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StrictPrefix {
    pub values: Vec<Q>,
    /// `indices[k]` is the source index of `values[k]`.
    pub indices: Vec<usize>,
}

/// Partial sums of a series: `a_i = d_0 + ... + d_i`.
pub fn seq_from_series(s: &LscReal) -> Result<LscReal> {
    if s.kind() != Kind::Series {
        return Err(Error::InvalidInput(format!("expected a series, got a {}", s.kind())));
    }
    Ok(s.to_sequence())
}

/// Differences of a sequence: `d_0 = a_0`, `d_i = a_i - a_{i-1}`.
///
/// A decreasing step is rejected at its index; a zero step yields a zero term.
pub fn series_from_seq(a: &LscReal) -> LscReal {
    let seq = a.to_sequence();
    let out = LscReal::from_fallible(Kind::Series, move |i| {
        let cur = seq.term(i)?;
        if i == 0 {
            Ok(cur)
        } else {
            Ok(cur - seq.term(i - 1)?)
        }
    });
    match a.known_sup() {
        Some(s) => out.with_known_sup(s.clone()),
        None => out,
    }
}

/// Running maximum of an arbitrary rational stream.
///
/// If every term is below some limit and the stream converges to it, the
/// hull is an increasing presentation of that limit.
pub fn monotone_hull<F>(x: F) -> LscReal
where
    F: Fn(usize) -> Result<Q> + Send + Sync + 'static,
{
    LscReal::from_fallible(Kind::LeftCut, x).to_sequence()
}

/// Rationals certified below the limit within `fuel`.
///
/// Dovetails the pairs `(i, k)` in Cantor order and emits `a_i - 2^-k`, one
/// term query per fuel step.
pub fn leftcut(a: &LscReal, fuel: Fuel) -> Result<BTreeSet<Q>> {
    let seq = a.to_sequence();
    let mut out = BTreeSet::new();
    for n in 0..fuel.0 {
        let (i, k) = crate::pairing::cantor_unpair(n);
        out.insert(seq.term(i as usize)? - Q::pow2(-(k as i64)));
    }
    Ok(out)
}

/// Termwise sum of the sequence views.
pub fn sum(a: &LscReal, b: &LscReal) -> LscReal {
    let (sa, sb) = (a.to_sequence(), b.to_sequence());
    let out = LscReal::from_fallible(Kind::Sequence, move |i| Ok(sa.term(i)? + sb.term(i)?));
    match (a.known_sup(), b.known_sup()) {
        (Some(x), Some(y)) => out.with_known_sup(x + y),
        _ => out,
    }
}

/// Termwise sum of many reals.
pub fn sum_all(reals: &[LscReal]) -> LscReal {
    let seqs: Vec<LscReal> = reals.iter().map(LscReal::to_sequence).collect();
    let sup: Option<Q> = reals
        .iter()
        .map(|r| r.known_sup().cloned())
        .collect::<Option<Vec<Q>>>()
        .map(|v| v.into_iter().sum());
    let out = LscReal::from_fallible(Kind::Sequence, move |i| {
        seqs.iter().map(|s| s.term(i)).sum::<Result<Q>>()
    });
    match sup {
        Some(s) => out.with_known_sup(s),
        None => out,
    }
}

/// `c * a` for positive rational `c`.
pub fn scale(a: &LscReal, c: &Q) -> Result<LscReal> {
    if !c.is_positive() {
        return Err(Error::NonPositiveScale(c.clone()));
    }
    let seq = a.to_sequence();
    let factor = c.clone();
    let out = LscReal::from_fallible(Kind::Sequence, move |i| Ok(seq.term(i)? * &factor));
    Ok(match a.known_sup() {
        Some(s) => out.with_known_sup(s * c),
        None => out,
    })
}

/// Parses the literal format: a `kind sequence|series` header, then
/// `i num/den` lines with consecutive indices from 0. `#` starts a comment.
pub fn parse_real(text: &str) -> Result<LscReal> {
    let mut kind = None;
    let mut terms = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| Error::Parse {
            line: lineno + 1,
            message: m,
        };
        let mut parts = line.split_whitespace();
        let head = parts.next().unwrap();
        if kind.is_none() {
            if head != "kind" {
                return Err(err("expected `kind sequence|series` header".into()));
            }
            kind = Some(match parts.next() {
                Some("sequence") => Kind::Sequence,
                Some("series") => Kind::Series,
                other => return Err(err(format!("unknown kind {other:?}"))),
            });
            continue;
        }
        let index: usize = head.parse().map_err(|_| err(format!("bad index {head:?}")))?;
        if index != terms.len() {
            return Err(err(format!("expected index {}, found {index}", terms.len())));
        }
        let value = parts
            .next()
            .ok_or_else(|| err("missing value".into()))?
            .parse::<Q>()
            .map_err(|e| err(e.to_string()))?;
        if parts.next().is_some() {
            return Err(err("trailing fields".into()));
        }
        terms.push(value);
    }
    let kind = kind.ok_or_else(|| Error::Parse {
        line: 0,
        message: "empty real literal".into(),
    })?;
    LscReal::finite(kind, terms)
}

/// Renders the literal format for the first `n` raw terms.
pub fn write_real(real: &LscReal, n: usize) -> Result<String> {
    let mut out = format!("kind {}\n", real.kind());
    for i in 0..n {
        out.push_str(&format!("{i} {}\n", real.term(i)?));
    }
    Ok(out)
}
