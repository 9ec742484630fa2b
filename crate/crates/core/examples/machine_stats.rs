//! Prefix-free machines: halting probability, complexity and busy functions.

use semireal::machine::Machine;
use semireal::{Fuel, Result};

fn main() -> Result<()> {
    let m = Machine::builtin("default").expect("builtin machine");
    let s = m.stats();
    println!("entries {} kraft {} omega {}", s.entries, s.kraft_sum, s.omega);
    for fuel in [1, 3, 10] {
        println!("omega at fuel {fuel}: {}", m.omega(Fuel(fuel)));
    }
    for i in [0, 1, 5] {
        println!("KP({i}) = {:?}", m.kp(i, m.full_fuel()));
    }
    for k in 0..=m.max_program_len() {
        println!("m={k} bp={} bp'={} t={}", m.bp(k), m.bp_prime(k), m.busy_time(k));
    }
    let st = Machine::self_timing(7, 40, 9);
    println!("self-timing constant {:?}", st.busy_time_constant());
    Ok(())
}
