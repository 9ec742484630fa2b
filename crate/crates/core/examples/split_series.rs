//! Splitting a series along a reduction so the pieces sum to the smaller real.

use semireal::reduce::{split_along, witness_from_sum};
use semireal::{corpus, Fuel, Result};

fn main() -> Result<()> {
    let alpha = corpus::series("quarter")?;
    let rho = corpus::series("quarter")?;
    let w = witness_from_sum(&alpha, &rho);
    let v = semireal::real::series_from_seq(&w.target().to_sequence());

    let trace = split_along(&v, &w, 20, Fuel(400), None)?;
    println!("below/between/above = {:?}", trace.counts);
    println!("A = {}  B = {}", trace.a, trace.b);
    for (i, (u, c)) in trace.terms.iter().zip(&trace.cases).take(8).enumerate() {
        println!("u_{i} = {u:<12} {c:?}");
    }
    Ok(())
}
