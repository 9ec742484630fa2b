//! Bundled inputs: series literals, covers, point weights and double series.
//! Command-line flags accept either a path or one of these names.

use std::path::Path;

use crate::covers::{self, Cover};
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::real::{self, LscReal};
use crate::transforms::DoubleSeries;
use std::collections::BTreeMap;

pub const SERIES: &[(&str, &str)] = &[
    ("halves", include_str!("../data/series/halves.series")),
    ("thirds", include_str!("../data/series/thirds.series")),
    ("omega_default", include_str!("../data/series/omega_default.series")),
    ("slow_third", include_str!("../data/series/slow_third.series")),
    ("quarter", include_str!("../data/series/quarter.series")),
    ("near_half", include_str!("../data/series/near_half.series")),
];

pub const COVERS: &[(&str, &str)] = &[
    ("around_half", include_str!("../data/covers/around_half.cover")),
    ("around_third", include_str!("../data/covers/around_third.cover")),
    ("around_quarter", include_str!("../data/covers/around_quarter.cover")),
    ("dense", include_str!("../data/covers/dense.cover")),
];

pub const WEIGHTS: &[(&str, &str)] = &[("dense", include_str!("../data/covers/dense.weights"))];

pub const DOUBLE: &[(&str, &str)] = &[
    ("sample", include_str!("../data/double/sample.double")),
    ("rows", include_str!("../data/double/rows.double")),
];

fn lookup(table: &[(&str, &'static str)], spec: &str) -> Result<String> {
    if let Some((_, text)) = table.iter().find(|(n, _)| *n == spec) {
        return Ok((*text).to_string());
    }
    if Path::new(spec).exists() {
        return Ok(std::fs::read_to_string(spec)?);
    }
    let names: Vec<&str> = table.iter().map(|(n, _)| *n).collect();
    Err(Error::Io(format!("{spec}: no such file or bundled name ({})", names.join(", "))))
}

pub fn series(spec: &str) -> Result<LscReal> {
    real::parse_real(&lookup(SERIES, spec)?)
}

pub fn cover(spec: &str) -> Result<Cover> {
    Cover::parse(&lookup(COVERS, spec)?)
}

pub fn weights(spec: &str) -> Result<BTreeMap<Q, Q>> {
    covers::parse_weights(&lookup(WEIGHTS, spec)?)
}

pub fn double(spec: &str) -> Result<DoubleSeries> {
    DoubleSeries::parse(&lookup(DOUBLE, spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundle_parses() {
        for (n, _) in SERIES {
            let s = series(n).unwrap();
            assert!(s.known_sup().is_some(), "{n}");
        }
        for (n, _) in COVERS {
            cover(n).unwrap();
        }
        for (n, _) in WEIGHTS {
            weights(n).unwrap();
        }
        for (n, _) in DOUBLE {
            double(n).unwrap();
        }
        assert!(series("no-such-thing").is_err());
    }
}
