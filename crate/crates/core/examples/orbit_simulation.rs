//! Iterates the one-dimensional best reply and the two-firm adjustment and
//! estimates the Lyapunov exponent.

use robust_duopoly::dynamics1d::{iterate_f, lyapunov};
use robust_duopoly::dynamics2d::iterate_t;
use robust_duopoly::model::{BestReplyMap, UncertaintySet};

fn main() -> robust_duopoly::Result<()> {
    // the chaotic parameter set used for the profit series
    let m = BestReplyMap::new(UncertaintySet::unit(0.6, 0.15, 0.5, 0.0)?)?;

    let xs = iterate_f(&m, 0.5, 10, 1_000)?;
    println!("x(t): {xs:.4?}");

    let orbit = iterate_t(&m, (0.5, 1.2), 6, 0)?;
    for (t, (x, y)) in orbit.iter().enumerate() {
        println!("t = {}: ({x:.6}, {y:.6})", t + 1);
    }

    println!("lyapunov exponent {:.4}", lyapunov(&m, 0.5, 100_000)?);
    Ok(())
}
