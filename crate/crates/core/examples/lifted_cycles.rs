//! Cycles of the two-firm map built from cycles of the best reply.

use robust_duopoly::dynamics1d::Cycle;
use robust_duopoly::dynamics2d::{lift_cycles, lift_map_cycles, map_cycles};
use robust_duopoly::model::{BestReplyMap, UncertaintySet};

fn main() -> robust_duopoly::Result<()> {
    let m = BestReplyMap::new(UncertaintySet::unit(0.3, 0.1, 0.25, 0.0)?)?;
    for c in lift_map_cycles(&m, &map_cycles(&m))? {
        println!("{:?} period {} {}: {:?}", c.origin, c.period, c.stability.as_str(), c.points);
    }

    // a synthetic 3-cycle: one cycle on the diagonal and one 6-cycle off it
    let three = Cycle::new(vec![1.0, 2.0, 3.0], 1.8)?;
    for c in lift_cycles(&[three])? {
        println!("{:?} period {}", c.origin, c.period);
    }
    Ok(())
}
