//! Double series, allocations, mesh refinement and cover measures.

use semireal::machine::Machine;
use semireal::transforms::{allocate_mtilde, cover_to_semimeasure, mesh_refine, regroup};
use semireal::{corpus, q, Fuel, Result};

fn main() -> Result<()> {
    let d = corpus::double("sample")?;
    let rows = regroup(&d)?.prefix(d.rows())?;
    println!("row sums {:?} total {}", rows.iter().map(|x| x.to_string()).collect::<Vec<_>>(), d.total());

    let m = Machine::builtin("default").expect("builtin machine").apriori();
    let alloc = allocate_mtilde(&d, &m, &q(2, 1))?;
    alloc.check(Fuel(1000))?;
    for ((i, j), v) in alloc.table(Fuel(1000))? {
        println!("cell ({i},{j}) -> {v}");
    }

    let mesh = mesh_refine(&[q(1, 2), q(1, 4)], &[q(1, 8), q(5, 8)], &q(3, 4))?;
    println!("mesh {:?}", mesh.c.iter().map(|x| x.to_string()).collect::<Vec<_>>());

    let r = corpus::series("near_half")?;
    let mn = cover_to_semimeasure(&r, &corpus::cover("around_half")?, 1, 12)?;
    println!("cover measure total {}", mn.total(Fuel(1000))?);
    Ok(())
}
