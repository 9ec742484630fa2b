//! Threshold tables from row increments and ratios against a-priori weights.

use semireal::machine::{build_solovay_table, solovay_ratio, Machine};
use semireal::{corpus, Result};

fn main() -> Result<()> {
    let rows = corpus::double("rows")?.dense_rows();
    let table = build_solovay_table(&rows)?;
    table.check()?;
    print!("{}", table.to_csv());

    let r = corpus::series("thirds")?;
    let m = Machine::builtin("default").expect("builtin machine");
    for e in solovay_ratio(&r, &m, 6, m.full_fuel())? {
        println!("{} r={} m={} ratio={:?}", e.index, e.r, e.m, e.ratio.map(|x| x.to_string()));
    }
    Ok(())
}
