//! Pulling a cover of beta back to a cover of alpha through a witness.

use semireal::covers::{contains, total_length, transform_cover};
use semireal::reduce::witness_from_sum;
use semireal::{corpus, Fuel, Result};

fn main() -> Result<()> {
    let alpha = corpus::series("quarter")?;
    let rho = corpus::series("quarter")?;
    let w = witness_from_sum(&alpha, &rho);
    let beta = w.target().clone();
    let cover = corpus::cover("around_half")?;

    println!("beta covered: {:?}", contains(&cover, &beta, Fuel(100))?);
    let pulled = transform_cover(&cover, &w, &beta, Fuel(200))?;
    println!("alpha covered: {:?}", contains(&pulled, &alpha, Fuel(100))?);
    println!(
        "lengths {} -> {}",
        total_length(&cover, Fuel(100))?,
        total_length(&pulled, Fuel(100))?
    );
    Ok(())
}
