//! Basins of the coexisting chaotic attractors for two parameter sets.
//! Writes `basins_2.ppm` and `basins_4.ppm`.

use std::path::PathBuf;

use robust_duopoly::basins::{check_symmetry, compute_basins, GridSpec};
use robust_duopoly::model::{BestReplyMap, UncertaintySet};
use robust_duopoly::output::basin_image;

fn main() -> robust_duopoly::Result<()> {
    let dir = PathBuf::from(std::env::var_os("DUOPOLY_OUT_DIR").unwrap_or_else(|| ".".into()));
    let sets = [("2", (0.3, 0.1, 0.25, 0.0)), ("4", (0.29, 0.11, 0.235, 0.01))];
    for (name, (b_hi, b_lo, g_hi, g_lo)) in sets {
        let m = BestReplyMap::new(UncertaintySet::unit(b_hi, b_lo, g_hi, g_lo)?)?;
        let grid = compute_basins(&m, &GridSpec::square(&m, 300))?;

        println!("{} attractors", grid.catalog.len());
        for a in &grid.catalog.attractors {
            let cells: Vec<String> = a.rectangles.iter().map(|r| format!("I{}xI{}", r.i + 1, r.j + 1)).collect();
            println!("  #{} mirror #{}: {}", a.id, a.mirror, cells.join(" -> "));
        }
        for (label, n) in grid.counts() {
            println!("  {label:?}: {n} cells");
        }
        println!("  mirror-consistent pairs {:.4}", check_symmetry(&grid)?.fraction());
        basin_image(&grid).write_file(&dir.join(format!("basins_{name}.ppm")))?;
    }
    Ok(())
}
