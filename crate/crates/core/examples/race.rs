//! Racing alpha's increments against beta: either a reduction or a cover.

use semireal::reduce::{race, RaceOutcome};
use semireal::{corpus, Fuel, Result};

fn main() -> Result<()> {
    for (a, b) in [("halves", "quarter"), ("quarter", "halves")] {
        let alpha = corpus::series(a)?;
        let beta = corpus::series(b)?;
        match race(&alpha, &beta, Fuel(40))? {
            RaceOutcome::CoverProduced { cover, log } => {
                println!("{a} vs {b}: cover of {} intervals after {} moves", cover.items().len(), log.len());
                print!("{}", cover.to_text());
            }
            RaceOutcome::ReducingSoFar { holes_prefix, .. } => {
                let h: Vec<String> = holes_prefix.iter().take(6).map(|x| x.to_string()).collect();
                println!("{a} vs {b}: reducing so far, holes {h:?}");
            }
        }
    }
    Ok(())
}
