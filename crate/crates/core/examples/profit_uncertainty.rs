//! Profit series along a chaotic diagonal orbit: how far the realized
//! worst-case profit falls from what firms expected.

use robust_duopoly::model::UncertaintySet;
use robust_duopoly::profit::profit_series;

fn main() -> robust_duopoly::Result<()> {
    let u = UncertaintySet::unit(0.6, 0.15, 0.5, 0.0)?;
    let s = profit_series(&u, 0.5, 200, 1_000)?;

    let below = (0..s.len()).filter(|&i| s.guaranteed_achievable[i] < s.max_guaranteed_expected[i]).count();
    println!("achievable below expected at {below} of {} steps", s.len());

    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "t", "gap", "achieved", "expected", "best");
    for i in 0..10 {
        println!(
            "{:>6} {:>10.5} {:>10.5} {:>10.5} {:>10.5}",
            s.t[i], s.naivety_gap[i], s.guaranteed_achievable[i], s.max_guaranteed_expected[i], s.best_possible_expected[i]
        );
    }
    Ok(())
}
