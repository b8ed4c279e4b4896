//! Long-run outputs as `b_lo` sweeps [0, 0.4], written as CSV.
//!
//! ```bash
//! cargo run --release --example bifurcation_diagram > bifurcation.csv
//! ```

use robust_duopoly::model::UncertaintySet;
use robust_duopoly::output::bifurcation_table;
use robust_duopoly::sweep::{bifurcation_1d, BifurcationSpec, SweepParam};

fn main() -> robust_duopoly::Result<()> {
    let base = UncertaintySet::unit(0.6, 0.2, 0.5, 0.0)?;
    let spec = BifurcationSpec::new(SweepParam::BLo, 0.0, 0.4, 401);
    let data = bifurcation_1d(&base, &spec)?;

    for (i, v) in data.values.iter().enumerate().step_by(40) {
        eprintln!("b_lo = {v:.3}: {} distinct values", data.distinct(i, 1e-8).unwrap_or(0));
    }
    bifurcation_table(&data).write(std::io::stdout().lock())
}
