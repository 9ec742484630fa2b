//! Series surgery: row regrouping of double series, capped allocation of a
//! semimeasure along a double series, common refinement of two series with
//! the same sum, splitting into a non-increasing series, and the conversion
//! of a cover into a semimeasure on term indices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;

use crate::covers::{self, Cover, Interval};
use crate::error::{Error, Result};
use crate::pairing::{cantor_pair, cantor_unpair};
use crate::rational::Q;
use crate::real::{self, Fuel, Kind, LscReal};
use crate::semimeasure::Semimeasure;

/// Non-negative terms `a_ij`, each row with finitely many non-zero entries.
/// Only non-zero cells are stored, so the row supports are exact.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DoubleSeries {
    cells: BTreeMap<(usize, usize), Q>,
}

impl DoubleSeries {
    pub fn new(cells: BTreeMap<(usize, usize), Q>) -> Result<Self> {
        let mut out = BTreeMap::new();
        for ((i, j), v) in cells {
            if v.is_negative() {
                return Err(Error::NegativeTerm { index: j });
            }
            if !v.is_zero() {
                out.insert((i, j), v);
            }
        }
        Ok(DoubleSeries { cells: out })
    }

    /// Reads `f(i, j)` on each row's declared support and probes the columns
    /// `0..probe` outside it: a non-zero probe contradicts the support.
    pub fn from_fn<F>(support: &[BTreeSet<usize>], probe: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Q,
    {
        let mut cells = BTreeMap::new();
        for (i, cols) in support.iter().enumerate() {
            for j in 0..probe {
                if !cols.contains(&j) && !f(i, j).is_zero() {
                    return Err(Error::RowNotFinite { row: i });
                }
            }
            for &j in cols {
                cells.insert((i, j), f(i, j));
            }
        }
        DoubleSeries::new(cells)
    }

    /// Lines `i j num/den`; repeated cells add up.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cells: BTreeMap<(usize, usize), Q> = BTreeMap::new();
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
            let [i, j, v] = fields.as_slice() else {
                return Err(err("expected `i j num/den`".into()));
            };
            let i: usize = i.parse().map_err(|_| err(format!("bad row {i:?}")))?;
            let j: usize = j.parse().map_err(|_| err(format!("bad column {j:?}")))?;
            let v: Q = v.parse().map_err(|e: Error| err(e.to_string()))?;
            if v.is_negative() {
                return Err(err(format!("negative term {v}")));
            }
            *cells.entry((i, j)).or_default() += v;
        }
        DoubleSeries::new(cells)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for ((i, j), v) in &self.cells {
            writeln!(out, "{i} {j} {v}").unwrap();
        }
        out
    }

    pub fn cells(&self) -> &BTreeMap<(usize, usize), Q> {
        &self.cells
    }

    pub fn term(&self, i: usize, j: usize) -> Q {
        self.cells.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// One past the largest row index with a non-zero term.
    pub fn rows(&self) -> usize {
        self.cells.keys().map(|&(i, _)| i + 1).max().unwrap_or(0)
    }

    pub fn row_support(&self, i: usize) -> BTreeSet<usize> {
        self.cells
            .range((i, 0)..=(i, usize::MAX))
            .map(|(&(_, j), _)| j)
            .collect()
    }

    pub fn row_sum(&self, i: usize) -> Q {
        self.cells.range((i, 0)..=(i, usize::MAX)).map(|(_, v)| v).sum()
    }

    pub fn total(&self) -> Q {
        self.cells.values().sum()
    }

    /// Rows as dense vectors up to each row's last non-zero column.
    pub fn dense_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows())
            .map(|i| {
                let width = self.row_support(i).last().map_or(0, |j| j + 1);
                (0..width).map(|j| self.term(i, j)).collect()
            })
            .collect()
    }
}

/// Row sums `A_i = sum_j a_ij` as a series.
pub fn regroup(d: &DoubleSeries) -> Result<LscReal> {
    let rows: Vec<Q> = (0..d.rows().max(1)).map(|i| d.row_sum(i)).collect();
    LscReal::finite(Kind::Series, rows)
}

/// Allocation of the row masses `m_i` along the cells of a double series,
/// capped at `c * a_ij`, filling each row's cells in column order.
#[derive(Clone, Debug)]
pub struct Allocation {
    d: Arc<DoubleSeries>,
    m: Semimeasure,
    c: Q,
}

impl Allocation {
    pub fn c(&self) -> &Q {
        &self.c
    }

    /// `clamp(m_i - c * sum_{j' < j} a_ij', 0, c * a_ij)`: the greedy fill in
    /// closed form, non-decreasing in the fuel because `m_i` is.
    pub fn value(&self, i: usize, j: usize, fuel: Fuel) -> Result<Q> {
        let cap = &self.c * self.d.term(i, j);
        if cap.is_zero() {
            return Ok(Q::zero());
        }
        let before: Q = self.d.cells.range((i, 0)..(i, j)).map(|(_, v)| v).sum();
        let left = self.m.weight(i as u64, fuel)? - &self.c * before;
        Ok(if left.is_negative() {
            Q::zero()
        } else if left > cap {
            cap
        } else {
            left
        })
    }

    pub fn table(&self, fuel: Fuel) -> Result<BTreeMap<(usize, usize), Q>> {
        self.d
            .cells
            .keys()
            .map(|&(i, j)| Ok(((i, j), self.value(i, j, fuel)?)))
            .collect()
    }

    /// Asserts both caps at `fuel`.
    pub fn check(&self, fuel: Fuel) -> Result<()> {
        let table = self.table(fuel)?;
        let mut rows: BTreeMap<usize, Q> = BTreeMap::new();
        for (&(i, j), v) in &table {
            if v > &(&self.c * self.d.term(i, j)) {
                return Err(Error::InvalidInput(format!("cell ({i}, {j}) exceeds c * a")));
            }
            *rows.entry(i).or_default() += v;
        }
        for (i, total) in rows {
            if total > self.m.weight(i as u64, fuel)? {
                return Err(Error::InvalidInput(format!("row {i} exceeds m_i")));
            }
        }
        Ok(())
    }
}

pub fn allocate_mtilde(d: &DoubleSeries, m: &Semimeasure, c: &Q) -> Result<Allocation> {
    if !c.is_positive() {
        return Err(Error::NonPositiveScale(c.clone()));
    }
    Ok(Allocation {
        d: Arc::new(d.clone()),
        m: m.clone(),
        c: c.clone(),
    })
}

/// `sum_{n=1..levels} 2^-n * allocation(c = 2^{2n})`, indexed by the Cantor
/// number of `(i, j)`.
pub fn combine_allocations(d: &DoubleSeries, m: &Semimeasure, levels: u32) -> Result<Semimeasure> {
    if levels == 0 {
        return Err(Error::InvalidInput("need at least one level".into()));
    }
    let allocs: Vec<(Q, Allocation)> = (1..=levels as i64)
        .map(|n| Ok((Q::pow2(-n), allocate_mtilde(d, m, &Q::pow2(2 * n))?)))
        .collect::<Result<_>>()?;
    let declared = m.declared_total() * (Q::one() - Q::pow2(-(levels as i64)));
    let keys: Vec<u64> = d.cells.keys().map(|&(i, j)| cantor_pair(i as u64, j as u64)).collect();
    Ok(Semimeasure::new(
        move |p, fuel| {
            let (i, j) = cantor_unpair(p);
            allocs
                .iter()
                .map(|(w, a)| Ok(w * a.value(i as usize, j as usize, fuel)?))
                .sum()
        },
        move |_| keys.clone(),
        declared,
    ))
}

/// The common refinement of two finite series with the same sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mesh {
    /// Lengths between consecutive merged breakpoints.
    pub c: Vec<Q>,
    /// `a_groups[i]` pieces of `c`, taken in order, make up `a_i`.
    pub a_groups: Vec<usize>,
    pub b_groups: Vec<usize>,
}

impl Mesh {
    /// Sums consecutive groups of `c`.
    pub fn regroup(&self, groups: &[usize]) -> Vec<Q> {
        let mut out = Vec::with_capacity(groups.len());
        let mut k = 0;
        for &g in groups {
            out.push(self.c[k..k + g].iter().sum());
            k += g;
        }
        out
    }
}

pub fn mesh_refine(a: &[Q], b: &[Q], common_sum: &Q) -> Result<Mesh> {
    let ends = |s: &[Q], name: &str| -> Result<Vec<Q>> {
        let mut acc = Q::zero();
        let mut out = Vec::with_capacity(s.len());
        for (i, t) in s.iter().enumerate() {
            if t.is_negative() {
                return Err(Error::NegativeTerm { index: i });
            }
            acc += t;
            out.push(acc.clone());
        }
        if &acc != common_sum {
            return Err(Error::SumMismatch(format!("{name} sums to {acc}, expected {common_sum}")));
        }
        Ok(out)
    };
    let (ea, eb) = (ends(a, "a")?, ends(b, "b")?);
    let points: BTreeSet<Q> = ea.iter().chain(eb.iter()).filter(|p| p.is_positive()).cloned().collect();
    let mut c = Vec::with_capacity(points.len());
    let mut prev = Q::zero();
    for p in &points {
        c.push(p - &prev);
        prev = p.clone();
    }
    let groups = |e: &[Q]| -> Vec<usize> {
        let mut out = Vec::with_capacity(e.len());
        let mut before = 0;
        for end in e {
            let upto = points.range(..=end.clone()).count();
            out.push(upto - before);
            before = upto;
        }
        out
    };
    Ok(Mesh {
        a_groups: groups(&ea),
        b_groups: groups(&eb),
        c,
    })
}

/// Reads each series until its partial sum reaches `common_sum` exactly
/// (within `max_terms`), then refines.
pub fn mesh_refine_series(a: &LscReal, b: &LscReal, common_sum: &Q, max_terms: usize) -> Result<Mesh> {
    let take = |s: &LscReal, name: &str| -> Result<Vec<Q>> {
        let seq = real::seq_from_series(s)?;
        for n in 0..max_terms {
            let v = seq.term(n)?;
            if &v == common_sum {
                return (0..=n).map(|i| s.term(i)).collect();
            }
            if &v > common_sum {
                break;
            }
        }
        Err(Error::SumMismatch(format!("{name} does not reach {common_sum} within {max_terms} terms")))
    };
    mesh_refine(&take(a, "a")?, &take(b, "b")?, common_sum)
}

/// Splits terms into a non-increasing series: a term larger than the last
/// emitted piece becomes copies of that piece plus a smaller remainder.
/// Zero terms produce no pieces. Returns the pieces and the group sizes.
pub fn split_non_increasing(terms: &[Q], max_pieces: usize) -> Result<(Vec<Q>, Vec<usize>)> {
    let mut pieces: Vec<Q> = Vec::new();
    let mut groups = Vec::with_capacity(terms.len());
    for (i, t) in terms.iter().enumerate() {
        if t.is_negative() {
            return Err(Error::NegativeTerm { index: i });
        }
        if t.is_zero() {
            groups.push(0);
            continue;
        }
        let before = pieces.len();
        match pieces.last().cloned() {
            Some(cap) if t > &cap => {
                let whole = (t / &cap).floor();
                let count: usize = whole
                    .try_into()
                    .ok()
                    .filter(|&k: &usize| k <= max_pieces)
                    .ok_or_else(|| Error::InvalidInput(format!("term {i} needs too many pieces")))?;
                for _ in 0..count {
                    pieces.push(cap.clone());
                }
                let rest = t - &cap * Q::int(count as i64);
                if rest.is_positive() {
                    pieces.push(rest);
                }
            }
            _ => pieces.push(t.clone()),
        }
        if pieces.len() > max_pieces {
            return Err(Error::InvalidInput("too many pieces".into()));
        }
        groups.push(pieces.len() - before);
    }
    Ok((pieces, groups))
}

/// `M^n(i) = 2^n r_i` for each `i < terms` whose closed term-interval
/// `[r_0 + ... + r_{i-1}, r_0 + ... + r_i]` lies inside one revealed item;
/// 0 otherwise. The cover budget must be at most `2^-2n`. A sequence is
/// read through its differences.
pub fn cover_to_semimeasure(r: &LscReal, cov: &Cover, n: u32, terms: usize) -> Result<Semimeasure> {
    let cap = Q::pow2(-2 * n as i64);
    if cov.length_budget() > &cap {
        return Err(Error::InvalidInput(format!(
            "cover budget {} exceeds 2^-{}",
            cov.length_budget(),
            2 * n
        )));
    }
    covers::total_length(cov, Fuel(u64::MAX))?;
    let r = match r.kind() {
        Kind::Series => r.clone(),
        _ => real::series_from_seq(r),
    };
    let mut spans = Vec::with_capacity(terms);
    let mut left = Q::zero();
    for i in 0..terms {
        let ri = r.term(i)?;
        if ri.is_negative() {
            return Err(Error::NegativeTerm { index: i });
        }
        let right = &left + &ri;
        spans.push((Interval::closed(left.clone(), right.clone())?, ri));
        left = right;
    }
    let scale = Q::pow2(n as i64);
    let cov = cov.clone();
    let spans = Arc::new(spans);
    let idx: Vec<u64> = (0..terms as u64).collect();
    Ok(Semimeasure::new(
        move |i, fuel| {
            let Some((span, ri)) = spans.get(i as usize) else {
                return Ok(Q::zero());
            };
            let inside = cov
                .revealed(fuel)
                .iter()
                .any(|it| it.contains(&span.left) && it.contains(&span.right));
            Ok(if inside { &scale * ri } else { Q::zero() })
        },
        move |_| idx.clone(),
        Q::pow2(-(n as i64)),
    ))
}
