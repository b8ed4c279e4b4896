//! Regimes over the (g_hi, b_hi) plane for two values of b_lo, with the
//! chaotic share of the window. Writes `regime_map_<b_lo>.ppm`.

use std::path::PathBuf;

use robust_duopoly::output::regime_image;
use robust_duopoly::sweep::regime_map;

fn main() -> robust_duopoly::Result<()> {
    let dir = PathBuf::from(std::env::var_os("DUOPOLY_OUT_DIR").unwrap_or_else(|| ".".into()));
    for b_lo in [0.1, 0.15] {
        let grid = regime_map(b_lo, 0.0, (0.0, 1.0), (0.0, 1.0), 400, 400)?;
        println!("b_lo = {b_lo}: chaotic area {:.4}", grid.chaotic_area());
        regime_image(&grid).write_file(&dir.join(format!("regime_map_{b_lo}.ppm")))?;
    }
    Ok(())
}
