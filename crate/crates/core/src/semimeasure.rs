//! Lower semicomputable semimeasures on the naturals, finitely supported at
//! every fuel level.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rational::Q;
use crate::real::{Fuel, Kind, LscReal};

type WeightFn = dyn Fn(u64, Fuel) -> Result<Q> + Send + Sync;
type IndexFn = dyn Fn(Fuel) -> Vec<u64> + Send + Sync;

/// `weight(i, fuel)` is non-decreasing in `fuel`; `indices(fuel)` lists every
/// `i` that may carry weight at that fuel.
#[derive(Clone)]
pub struct Semimeasure {
    weight: Arc<WeightFn>,
    indices: Arc<IndexFn>,
    declared_total: Q,
}

impl fmt::Debug for Semimeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Semimeasure")
            .field("declared_total", &self.declared_total)
            .finish_non_exhaustive()
    }
}

impl Semimeasure {
    pub fn new<W, I>(weight: W, indices: I, declared_total: Q) -> Self
    where
        W: Fn(u64, Fuel) -> Result<Q> + Send + Sync + 'static,
        I: Fn(Fuel) -> Vec<u64> + Send + Sync + 'static,
    {
        Semimeasure {
            weight: Arc::new(weight),
            indices: Arc::new(indices),
            declared_total,
        }
    }

    /// Staged table: at fuel `f`, index `i` weighs `stages[i][min(f, len-1)]`.
    pub fn from_stages(stages: BTreeMap<u64, Vec<Q>>, declared_total: Q) -> Result<Self> {
        for (&i, row) in &stages {
            if row.is_empty() {
                return Err(Error::InvalidInput(format!("index {i} has no stages")));
            }
            if row[0].is_negative() {
                return Err(Error::NegativeTerm { index: i as usize });
            }
            if let Some(k) = row.windows(2).position(|w| w[1] < w[0]) {
                return Err(Error::NotIncreasing { index: k + 1 });
            }
        }
        let stages = Arc::new(stages);
        let keys: Vec<u64> = stages.keys().copied().collect();
        Ok(Semimeasure::new(
            move |i, fuel| {
                Ok(match stages.get(&i) {
                    Some(row) => row[(fuel.0 as usize).min(row.len() - 1)].clone(),
                    None => Q::zero(),
                })
            },
            move |_| keys.clone(),
            declared_total,
        ))
    }

    /// Fixed weights, the same at every fuel.
    pub fn from_weights(weights: BTreeMap<u64, Q>, declared_total: Q) -> Result<Self> {
        Self::from_stages(
            weights.into_iter().map(|(i, w)| (i, vec![w])).collect(),
            declared_total,
        )
    }

    pub fn weight(&self, i: u64, fuel: Fuel) -> Result<Q> {
        (self.weight)(i, fuel)
    }

    pub fn indices(&self, fuel: Fuel) -> Vec<u64> {
        (self.indices)(fuel)
    }

    pub fn declared_total(&self) -> &Q {
        &self.declared_total
    }

    pub fn total(&self, fuel: Fuel) -> Result<Q> {
        self.indices(fuel).into_iter().map(|i| self.weight(i, fuel)).sum()
    }

    /// Errors if the estimate at `fuel` exceeds the declared total.
    pub fn check_total(&self, fuel: Fuel) -> Result<Q> {
        let t = self.total(fuel)?;
        if t > self.declared_total {
            return Err(Error::InvalidInput(format!(
                "semimeasure total {t} exceeds declared {}",
                self.declared_total
            )));
        }
        Ok(t)
    }

    /// The total mass as a real: the `n`-th approximation is the total at fuel `n`.
    pub fn total_real(&self) -> LscReal {
        let me = self.clone();
        LscReal::from_fallible(Kind::Sequence, move |n| me.total(Fuel(n as u64)))
    }

    /// Every weight multiplied by a positive rational.
    pub fn scaled(&self, c: &Q) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::NonPositiveScale(c.clone()));
        }
        let inner = self.clone();
        let factor = c.clone();
        let idx = self.clone();
        Ok(Semimeasure::new(
            move |i, f| Ok(inner.weight(i, f)? * &factor),
            move |f| idx.indices(f),
            &self.declared_total * c,
        ))
    }

    /// Snapshot of the non-zero weights at `fuel`.
    pub fn snapshot(&self, fuel: Fuel) -> Result<BTreeMap<u64, Q>> {
        let mut out = BTreeMap::new();
        for i in self.indices(fuel) {
            let w = self.weight(i, fuel)?;
            if !w.is_zero() {
                out.insert(i, w);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn staged_weights_grow_and_saturate() {
        let m = Semimeasure::from_stages(
            BTreeMap::from([(0, vec![q(1, 8), q(1, 4)]), (3, vec![Q::zero(), q(1, 2)])]),
            Q::one(),
        )
        .unwrap();
        assert_eq!(m.total(Fuel(0)).unwrap(), q(1, 8));
        assert_eq!(m.total(Fuel(1)).unwrap(), q(3, 4));
        assert_eq!(m.total(Fuel(99)).unwrap(), q(3, 4));
        assert_eq!(m.weight(7, Fuel(5)).unwrap(), Q::zero());
        let total = m.total_real();
        assert_eq!(total.prefix(3).unwrap(), vec![q(1, 8), q(3, 4), q(3, 4)]);
    }

    #[test]
    fn decreasing_stage_rejected() {
        let err = Semimeasure::from_stages(BTreeMap::from([(0, vec![q(1, 2), q(1, 4)])]), Q::one());
        assert!(err.is_err());
    }

    #[test]
    fn total_check() {
        let m = Semimeasure::from_weights(BTreeMap::from([(1, q(3, 4))]), q(1, 2)).unwrap();
        assert!(m.check_total(Fuel(0)).is_err());
        let s = m.scaled(&q(1, 2)).unwrap();
        assert_eq!(s.declared_total(), &q(1, 4));
        assert!(s.check_total(Fuel(0)).is_err());
        let ok = Semimeasure::from_weights(BTreeMap::from([(1, q(3, 4))]), Q::one()).unwrap();
        assert_eq!(ok.scaled(&q(1, 2)).unwrap().check_total(Fuel(0)).unwrap(), q(3, 8));
    }
}
