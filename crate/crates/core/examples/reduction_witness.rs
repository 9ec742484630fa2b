//! A witness that alpha is reducible to a larger real, checked exactly.

use semireal::reduce::{witness_from_sum, witness_scaled};
use semireal::{corpus, q, Fuel, Result};

fn main() -> Result<()> {
    let alpha = corpus::series("quarter")?;
    let beta = corpus::series("halves")?;

    // beta = alpha + rho with rho the difference series.
    let rho = semireal::real::series_from_seq(&beta.to_sequence());
    let w = witness_scaled(&alpha, &rho, &beta, &q(2, 1));
    println!("scaled witness built: {}", w.is_ok());

    let w = witness_from_sum(&alpha, &corpus::series("quarter")?);
    println!("constant {}", w.constant());
    for r in [q(0, 1), q(1, 8), q(3, 8), q(7, 16)] {
        let phi = w.phi(&r, Fuel(200))?;
        println!("phi({r}) = {:?}", phi.map(|x| x.to_string()));
    }
    for c in w.check_known(5, Fuel(200))? {
        println!("r={} holds={}", c.r, c.holds());
    }
    Ok(())
}
