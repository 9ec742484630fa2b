//! Playing the prediction game with a cover strategy and a hand-written one.

use semireal::games::{cover_of_trace, play, strategy_from_cover, Prediction, Strategy};
use semireal::{corpus, q, Fuel, Q, Result};

fn main() -> Result<()> {
    let a = corpus::series("slow_third")?;
    let cover = corpus::cover("around_third")?;
    let mut s = strategy_from_cover(&cover);
    let trace = play(&mut s as &mut dyn Strategy, &a, &q(1, 8), Fuel(40))?;
    println!("cover strategy: {} predictions, win so far {}", trace.predictions.len(), trace.win_so_far);

    // Bet 1/16 once and never again.
    let mut once = |_: usize, _: &Q, h: &[Prediction]| -> Result<Option<Q>> { Ok(h.is_empty().then(|| q(1, 16))) };
    let trace = play(&mut once, &a, &q(1, 8), Fuel(40))?;
    for p in &trace.predictions {
        println!("bet at {} ceiling {} {:?}", p.base_index, p.ceiling(), p.status);
    }
    print!("{}", cover_of_trace(&trace).to_text());
    Ok(())
}
