//! CSV tables and binary PPM images.
//!
//! CSV files have a header row, `,` separators, `\n` line endings and
//! floats printed as `{:.16e}` (17 significant digits, which round-trip
//! exactly). Images are binary PPM (`P6`), 8-bit RGB, with the top row at
//! the largest `y`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::basins::BasinGrid;
use crate::dynamics2d::{Cycle2D, CycleOrigin, OrbitLabel, Point};
use crate::error::Result;
use crate::profit::ProfitSeries;
use crate::sweep::{BifurcationData, RegimeGrid, RegimeTag};

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        self.write(BufWriter::new(File::create(path)?))
    }
}

pub fn orbit1d_table(xs: &[f64], t0: usize) -> Table {
    let mut t = Table::new(["t", "x"]);
    for (i, &x) in xs.iter().enumerate() {
        t.push(vec![(t0 + i).to_string(), fmt_float(x)]);
    }
    t
}

pub fn orbit2d_table(ps: &[Point], t0: usize) -> Table {
    let mut t = Table::new(["t", "x", "y"]);
    for (i, &(x, y)) in ps.iter().enumerate() {
        t.push(vec![(t0 + i).to_string(), fmt_float(x), fmt_float(y)]);
    }
    t
}

/// One row per cycle point.
pub fn cycles_table(cycles: &[Cycle2D]) -> Table {
    let mut t = Table::new(["cycle", "origin", "period", "index", "x", "y", "eig1", "eig2", "stability"]);
    for (c, cycle) in cycles.iter().enumerate() {
        let origin = match cycle.origin {
            CycleOrigin::Diagonal { cycle } => format!("diagonal:{cycle}"),
            CycleOrigin::Singly { cycle } => format!("singly:{cycle}"),
            CycleOrigin::Doubly { first, second } => format!("doubly:{first}+{second}"),
        };
        for (i, &(x, y)) in cycle.points.iter().enumerate() {
            t.push(vec![
                c.to_string(),
                origin.clone(),
                cycle.period.to_string(),
                i.to_string(),
                fmt_float(x),
                fmt_float(y),
                fmt_float(cycle.eigenvalues.0),
                fmt_float(cycle.eigenvalues.1),
                cycle.stability.as_str().to_string(),
            ]);
        }
    }
    t
}

/// `param,value,sample`; skipped columns are omitted.
pub fn bifurcation_table(d: &BifurcationData) -> Table {
    let mut t = Table::new([d.param.as_str(), "x"]);
    for (v, col) in d.values.iter().zip(&d.columns) {
        for &x in col.iter().flatten() {
            t.push(vec![fmt_float(*v), fmt_float(x)]);
        }
    }
    t
}

pub fn basin_table(g: &BasinGrid) -> Table {
    let mut t = Table::new(["ix", "iy", "x", "y", "label"]);
    for iy in 0..g.spec.ny {
        for ix in 0..g.spec.nx {
            let (x, y) = g.spec.cell_center(ix, iy);
            let label = match g.label(ix, iy) {
                OrbitLabel::Attractor(id) => id.to_string(),
                OrbitLabel::Unresolved => "unresolved".into(),
            };
            t.push(vec![ix.to_string(), iy.to_string(), fmt_float(x), fmt_float(y), label]);
        }
    }
    t
}

pub fn regime_table(g: &RegimeGrid) -> Table {
    let mut t = Table::new(["ix", "iy", "g_hi", "b_hi", "regime"]);
    for iy in 0..g.ny {
        for ix in 0..g.nx {
            let (x, y) = g.cell_center(ix, iy);
            t.push(vec![ix.to_string(), iy.to_string(), fmt_float(x), fmt_float(y), g.tag(ix, iy).as_str().into()]);
        }
    }
    t
}

/// Both boundary curves as `curve,g_hi,b_hi` rows.
pub fn regime_curves_table(g: &RegimeGrid) -> Table {
    let mut t = Table::new(["curve", "g_hi", "b_hi"]);
    for (name, pts) in [("r_one", &g.r_one), ("flip", &g.flip_line)] {
        for &(x, y) in pts {
            t.push(vec![name.into(), fmt_float(x), fmt_float(y)]);
        }
    }
    t
}

pub fn profit_table(s: &ProfitSeries) -> Table {
    let mut t = Table::new([
        "t",
        "expected",
        "realized",
        "naivety_gap",
        "guaranteed_achievable",
        "max_guaranteed_expected",
        "best_possible_expected",
    ]);
    for i in 0..s.len() {
        t.push(vec![
            s.t[i].to_string(),
            fmt_float(s.expected[i]),
            fmt_float(s.realized[i]),
            fmt_float(s.naivety_gap[i]),
            fmt_float(s.guaranteed_achievable[i]),
            fmt_float(s.max_guaranteed_expected[i]),
            fmt_float(s.best_possible_expected[i]),
        ]);
    }
    t
}

pub type Rgb = [u8; 3];

/// Basin colors by attractor id, cycling for ids past the end.
pub const ATTRACTOR_PALETTE: [Rgb; 8] = [
    [220, 50, 47],
    [133, 153, 0],
    [38, 139, 210],
    [128, 128, 128],
    [181, 137, 0],
    [211, 54, 130],
    [42, 161, 152],
    [108, 113, 196],
];
pub const UNRESOLVED_COLOR: Rgb = [255, 255, 255];

pub fn attractor_color(label: OrbitLabel) -> Rgb {
    match label {
        OrbitLabel::Attractor(id) => ATTRACTOR_PALETTE[id % ATTRACTOR_PALETTE.len()],
        OrbitLabel::Unresolved => UNRESOLVED_COLOR,
    }
}

pub fn regime_color(tag: RegimeTag) -> Rgb {
    match tag {
        RegimeTag::OutOfDomain => [64, 64, 64],
        RegimeTag::StableLeft => [255, 215, 0],
        RegimeTag::FixedSegment => [0, 0, 255],
        RegimeTag::StableRight => [255, 140, 0],
        RegimeTag::TwoCycleSegment => [220, 20, 60],
        RegimeTag::Chaotic => [255, 255, 255],
        RegimeTag::Degenerate => [0, 0, 0],
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    /// Row-major, top row first.
    pub pixels: Vec<Rgb>,
}

impl Image {
    /// Builds an image from a grid whose row 0 is the lowest `y`.
    pub fn from_grid(width: usize, height: usize, color: impl Fn(usize, usize) -> Rgb) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for row in (0..height).rev() {
            for col in 0..width {
                pixels.push(color(col, row));
            }
        }
        Image { width, height, pixels }
    }

    pub fn write_ppm<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "P6\n{} {}\n255\n", self.width, self.height)?;
        let bytes: Vec<u8> = self.pixels.iter().flatten().copied().collect();
        w.write_all(&bytes)?;
        w.flush()?;
        Ok(())
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        self.write_ppm(BufWriter::new(File::create(path)?))
    }
}

pub fn basin_image(g: &BasinGrid) -> Image {
    Image::from_grid(g.spec.nx, g.spec.ny, |ix, iy| attractor_color(g.label(ix, iy)))
}

pub fn regime_image(g: &RegimeGrid) -> Image {
    Image::from_grid(g.nx, g.ny, |ix, iy| regime_color(g.tag(ix, iy)))
}
