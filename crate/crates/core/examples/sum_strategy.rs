//! Combining strategies for two reals into one for their sum.

use semireal::games::{play, sum_ledger, sum_strategy};
use semireal::{corpus, q, Fuel, Result};

fn main() -> Result<()> {
    let (a, b) = (corpus::series("quarter")?, corpus::series("near_half")?);
    let (ca, cb) = (corpus::cover("around_quarter")?, corpus::cover("around_half")?);
    let mut s = sum_strategy(&ca, &cb, &a, &b);
    let played = s.played_on();
    let trace = play(&mut s, &played, &q(1, 1), Fuel(40))?;
    println!("predictions {} delta total {}", trace.predictions.len(), trace.delta_total);
    for c in sum_ledger(&trace, &a, &b, &ca, &cb)? {
        println!("{c:?}");
    }
    Ok(())
}
