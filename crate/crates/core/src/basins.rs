//! Basins of attraction of `T` on a rectangular grid of initial conditions.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::dynamics2d::{attractor_catalog, classify_initial_condition, AttractorCatalog, OrbitLabel};
use crate::error::{Error, Result};
use crate::model::BestReplyMap;

pub const DEFAULT_BURN: usize = 2_000;
pub const DEFAULT_TAIL: usize = 500;
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub burn: usize,
    pub tail: usize,
    pub tol: f64,
}

impl GridSpec {
    /// `n x n` cells over `[0, 1.05 x_m]^2` with the default classification
    /// parameters.
    pub fn square(m: &BestReplyMap, n: usize) -> Self {
        let hi = 1.05 * m.x_m();
        GridSpec {
            x_range: (0.0, hi),
            y_range: (0.0, hi),
            nx: n,
            ny: n,
            burn: DEFAULT_BURN,
            tail: DEFAULT_TAIL,
            tol: DEFAULT_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::InvalidGrid(format!("{}x{} cells", self.nx, self.ny)));
        }
        for (name, (lo, hi)) in [("x", self.x_range), ("y", self.y_range)] {
            if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi < lo {
                return Err(Error::InvalidGrid(format!("{name} range [{lo}, {hi}]")));
            }
        }
        if self.tail == 0 {
            return Err(Error::InvalidGrid("tail length 0".into()));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::InvalidGrid(format!("tolerance {}", self.tol)));
        }
        Ok(())
    }

    /// Center of cell `(ix, iy)`; `iy = 0` is the lowest row.
    pub fn cell_center(&self, ix: usize, iy: usize) -> (f64, f64) {
        let c = |(lo, hi): (f64, f64), n: usize, i: usize| lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
        (c(self.x_range, self.nx, ix), c(self.y_range, self.ny, iy))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinGrid {
    pub spec: GridSpec,
    /// Row-major, row 0 at the lowest `y`.
    pub labels: Vec<OrbitLabel>,
    pub catalog: AttractorCatalog,
}

impl BasinGrid {
    pub fn label(&self, ix: usize, iy: usize) -> OrbitLabel {
        self.labels[iy * self.spec.nx + ix]
    }

    pub fn counts(&self) -> BTreeMap<OrbitLabel, usize> {
        let mut out = BTreeMap::new();
        for &l in &self.labels {
            *out.entry(l).or_insert(0) += 1;
        }
        out
    }

    pub fn fraction(&self, label: OrbitLabel) -> f64 {
        self.labels.iter().filter(|&&l| l == label).count() as f64 / self.labels.len() as f64
    }

    /// Attractors whose basin has at least one cell.
    pub fn present(&self) -> Vec<usize> {
        self.counts().keys().filter_map(|l| l.id()).collect()
    }
}

/// Classifies the orbit of every cell center. Rows are processed in
/// parallel; the result does not depend on the number of workers.
pub fn compute_basins(m: &BestReplyMap, spec: &GridSpec) -> Result<BasinGrid> {
    spec.validate()?;
    let catalog = attractor_catalog(m)?;
    let mut labels = vec![OrbitLabel::Unresolved; spec.nx * spec.ny];
    labels.par_chunks_mut(spec.nx).enumerate().for_each(|(iy, row)| {
        for (ix, cell) in row.iter_mut().enumerate() {
            let p = spec.cell_center(ix, iy);
            *cell = classify_initial_condition(m, &catalog, p, spec.burn, spec.tail, spec.tol);
        }
    });
    Ok(BasinGrid { spec: spec.clone(), labels, catalog })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    /// Unordered off-diagonal pairs `(i, j)`, `i < j`.
    pub pairs: usize,
    pub consistent: usize,
    /// Cells `(ix, iy)` whose mirror cell carries the wrong label.
    pub violations: Vec<(usize, usize)>,
    pub diagonal_cells: usize,
    /// Diagonal cells labelled with the attractor crossing the diagonal.
    pub diagonal_on_attractor: usize,
}

impl SymmetryReport {
    pub fn fraction(&self) -> f64 {
        if self.pairs == 0 {
            1.0
        } else {
            self.consistent as f64 / self.pairs as f64
        }
    }
}

/// Checks that cell `(i, j)` carries the mirror image of the label of
/// cell `(j, i)`.
pub fn check_symmetry(g: &BasinGrid) -> Result<SymmetryReport> {
    let s = &g.spec;
    if s.nx != s.ny || s.x_range != s.y_range {
        return Err(Error::NotSquareGrid);
    }
    let mirror = |l: OrbitLabel| match l {
        OrbitLabel::Attractor(id) => OrbitLabel::Attractor(g.catalog.mirror_of(id)),
        OrbitLabel::Unresolved => OrbitLabel::Unresolved,
    };
    let diag = g.catalog.diagonal_attractor().map(OrbitLabel::Attractor);
    let n = s.nx;
    let mut report = SymmetryReport {
        pairs: 0,
        consistent: 0,
        violations: Vec::new(),
        diagonal_cells: n,
        diagonal_on_attractor: 0,
    };
    for i in 0..n {
        if Some(g.label(i, i)) == diag {
            report.diagonal_on_attractor += 1;
        }
        for j in i + 1..n {
            report.pairs += 1;
            if g.label(j, i) == mirror(g.label(i, j)) {
                report.consistent += 1;
            } else {
                report.violations.push((i, j));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::UncertaintySet;

    fn map(b_hi: f64, b_lo: f64, g_hi: f64, g_lo: f64) -> BestReplyMap {
        BestReplyMap::new(UncertaintySet::unit(b_hi, b_lo, g_hi, g_lo).unwrap()).unwrap()
    }

    #[test]
    fn single_interval_attracts_everything() {
        let m = map(0.33, 0.1, 0.3, 0.0);
        let mut spec = GridSpec::square(&m, 200);
        spec.x_range = (0.0, m.x_m());
        spec.y_range = (0.0, m.x_m());
        let g = compute_basins(&m, &spec).unwrap();
        assert!(g.fraction(OrbitLabel::Attractor(0)) >= 0.99);
    }

    #[test]
    fn one_cell() {
        let m = map(0.3, 0.1, 0.25, 0.0);
        let g = compute_basins(&m, &GridSpec::square(&m, 1)).unwrap();
        assert_eq!(g.labels.len(), 1);
        assert_eq!(check_symmetry(&g).unwrap().fraction(), 1.0);
    }

    #[test]
    fn band_pair_has_three_symmetric_basins() {
        let m = map(0.3, 0.1, 0.25, 0.0);
        let g = compute_basins(&m, &GridSpec::square(&m, 120)).unwrap();
        assert_eq!(g.present(), vec![0, 1, 2]);
        assert!(g.fraction(OrbitLabel::Unresolved) < 0.01);
        let r = check_symmetry(&g).unwrap();
        assert!(r.fraction() >= 0.995, "{}", r.fraction());
        assert_eq!(r.diagonal_on_attractor, r.diagonal_cells);
    }

    #[test]
    fn grid_errors() {
        let m = map(0.3, 0.1, 0.25, 0.0);
        let mut spec = GridSpec::square(&m, 0);
        assert!(matches!(compute_basins(&m, &spec), Err(Error::InvalidGrid(_))));
        spec.nx = 4;
        spec.ny = 3;
        let g = compute_basins(&m, &spec).unwrap();
        assert!(matches!(check_symmetry(&g), Err(Error::NotSquareGrid)));
        let segment = map(0.4, 0.1, 0.3, 0.0);
        assert!(compute_basins(&segment, &GridSpec::square(&segment, 4)).is_ok());
    }
}
