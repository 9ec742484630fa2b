//! Building lower semicomputable reals and reading their approximations.

use semireal::real::{self, leftcut, sum};
use semireal::{corpus, q, Fuel, LscReal, Result};

fn main() -> Result<()> {
    // 1/2 + 1/4 + ... as a series with a known limit.
    let halves = LscReal::geometric(q(0, 1), q(1, 1), q(1, 2))?;
    println!("halves   {:?}", fmt(&halves.prefix(6)?));

    let thirds = corpus::series("thirds")?;
    println!("thirds   {:?}", fmt(&thirds.to_sequence().prefix(6)?));

    let both = sum(&halves, &thirds);
    println!("sum      {:?} sup {:?}", fmt(&both.prefix(4)?), both.known_sup().map(|s| s.to_string()));

    // Rationals below the limit that show up within ten steps.
    let cut = leftcut(&thirds, Fuel(10))?;
    println!("leftcut  {} rationals, max {}", cut.len(), cut.iter().max().unwrap());

    print!("{}", real::write_real(&thirds, 4)?);
    Ok(())
}

fn fmt(xs: &[semireal::Q]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}
