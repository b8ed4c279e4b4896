//! Builds the worst-case best reply for a parameter set and prints its
//! kinks, fixed point, regime, two-cycles and chaotic bands.
//!
//! ```bash
//! cargo run --example analyze_map -- 0.3 0.1 0.25 0.0
//! ```

use robust_duopoly::dynamics1d::{chaotic_intervals, classify_regime, find_two_cycles, fixed_points, TwoCycle};
use robust_duopoly::model::{BestReplyMap, UncertaintySet};

fn main() -> robust_duopoly::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let [b_hi, b_lo, g_hi, g_lo] = match args.as_slice() {
        [a, b, c, d] => [*a, *b, *c, *d],
        _ => [0.3, 0.1, 0.25, 0.0],
    };
    let m = BestReplyMap::new(UncertaintySet::unit(b_hi, b_lo, g_hi, g_lo)?)?;

    println!("r = {}, x_l = {}, x_u = {}, x_m = {}", m.r(), m.x_l(), m.x_u(), m.x_m());
    let fp = fixed_points(&m);
    println!("fixed point {:?} ({}, eigenvalue {})", fp.kind, fp.stability.as_str(), fp.eigenvalue);

    let regime = classify_regime(&m);
    println!("regime {}", regime.tag());
    for c in find_two_cycles(&m) {
        match c {
            TwoCycle::Isolated(c) => println!("2-cycle {:?}, eigenvalue {}", c.points, c.eigenvalue),
            TwoCycle::Continuum { lo, hi, .. } => println!("segment of 2-cycles [{lo}, {hi}]"),
        }
    }
    if regime.is_chaotic() {
        let bands = chaotic_intervals(&m)?;
        for (i, (lo, hi)) in bands.intervals.iter().enumerate() {
            println!("I{} = [{lo}, {hi}]", i + 1);
        }
    }
    Ok(())
}
