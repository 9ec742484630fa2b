//! Measure of a union of intervals that each carry dense point weight.

use semireal::covers::union_bound;
use semireal::{corpus, q, Result};

fn main() -> Result<()> {
    let cover = corpus::cover("dense")?;
    let weights = corpus::weights("dense")?;
    for c in [q(2, 1), q(4, 1)] {
        match union_bound(cover.items(), &weights, &c) {
            Ok(ub) => println!(
                "c={c}: union {} <= {} ({}), even {} odd {}",
                ub.union_measure,
                ub.bound,
                ub.holds(),
                ub.even_length,
                ub.odd_length
            ),
            Err(e) => println!("c={c}: {e}"),
        }
    }
    Ok(())
}
