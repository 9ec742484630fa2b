//! Painters started at the approximations, fed by a-priori weights.

use semireal::games::{painter, wset_check, IndexSet};
use semireal::machine::Machine;
use semireal::{corpus, q, Result};

fn main() -> Result<()> {
    let a = corpus::series("omega_default")?;
    let m = Machine::builtin("default").expect("builtin machine");
    let h = m.apriori().scaled(&q(1, 4))?;
    for doubling in [false, true] {
        let res = painter(&a, &h, 25, doubling)?;
        println!("doubling={doubling} consumed {} painted {} segments {}", res.consumed, res.painted, res.segments.len());
    }

    let d = corpus::series("halves")?;
    let res = wset_check(&d, &IndexSet::Finite([4, 5, 6].into()), &q(1, 4), 12)?;
    println!("index set {{4,5,6}} paints {}", res.painted);
    Ok(())
}
