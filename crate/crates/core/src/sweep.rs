//! Parameter sweeps: one-parameter bifurcation diagrams of `f` and the
//! regime map over the `(g_hi, b_hi)` plane.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dynamics1d::{analytic_regime, fixed_points, AnalyticRegime};
use crate::error::{Error, Result};
use crate::model::{BestReplyMap, UncertaintySet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    BHi,
    BLo,
    GHi,
    GLo,
}

impl SweepParam {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParam::BHi => "b_hi",
            SweepParam::BLo => "b_lo",
            SweepParam::GHi => "g_hi",
            SweepParam::GLo => "g_lo",
        }
    }

    fn set(&self, base: &UncertaintySet, v: f64) -> Result<UncertaintySet> {
        let (mut b_hi, mut b_lo, mut g_hi, mut g_lo) = (base.b_hi(), base.b_lo(), base.g_hi(), base.g_lo());
        match self {
            SweepParam::BHi => b_hi = v,
            SweepParam::BLo => b_lo = v,
            SweepParam::GHi => g_hi = v,
            SweepParam::GLo => g_lo = v,
        }
        UncertaintySet::new(b_hi, b_lo, g_hi, g_lo, base.a())
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "b_hi" => Ok(SweepParam::BHi),
            "b_lo" => Ok(SweepParam::BLo),
            "g_hi" => Ok(SweepParam::GHi),
            "g_lo" => Ok(SweepParam::GLo),
            other => Err(Error::InvalidConfig(format!("unknown sweep parameter `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationSpec {
    pub param: SweepParam,
    pub lo: f64,
    pub hi: f64,
    /// Number of sweep values, endpoints included.
    pub steps: usize,
    pub x0: f64,
    pub burn: usize,
    pub samples: usize,
    /// Start each column from the last state of the previous one. Forces
    /// sequential evaluation.
    pub continuation: bool,
}

impl BifurcationSpec {
    pub fn new(param: SweepParam, lo: f64, hi: f64, steps: usize) -> Self {
        BifurcationSpec { param, lo, hi, steps, x0: 0.5, burn: 1_000, samples: 200, continuation: true }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        (0..self.steps)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.steps == 0 || self.samples == 0 {
            return Err(Error::InvalidParameters("sweep needs at least one step and one sample".into()));
        }
        if !self.lo.is_finite() || !self.hi.is_finite() || (self.steps > 1 && self.hi <= self.lo) {
            return Err(Error::InvalidParameters(format!("sweep range [{}, {}]", self.lo, self.hi)));
        }
        if !self.x0.is_finite() || self.x0 < 0.0 {
            return Err(Error::NegativeInput(self.x0));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationData {
    pub param: SweepParam,
    pub values: Vec<f64>,
    /// `None` where the swept set is not a valid uncertainty set.
    pub columns: Vec<Option<Vec<f64>>>,
    pub samples: usize,
}

impl BifurcationData {
    /// Number of values in column `i` separated by more than `tol`.
    pub fn distinct(&self, i: usize, tol: f64) -> Option<usize> {
        let col = self.columns[i].as_ref()?;
        let mut v = col.clone();
        v.sort_by(f64::total_cmp);
        Some(1 + v.windows(2).filter(|w| w[1] - w[0] > tol).count())
    }

    pub fn skipped(&self) -> usize {
        self.columns.iter().filter(|c| c.is_none()).count()
    }
}

/// Long-run samples of `f` along a sweep of one parameter of `base`.
pub fn bifurcation_1d(base: &UncertaintySet, spec: &BifurcationSpec) -> Result<BifurcationData> {
    spec.validate()?;
    let values = spec.values();
    let maps: Vec<Option<BestReplyMap>> = values
        .iter()
        .map(|&v| spec.param.set(base, v).and_then(BestReplyMap::new).ok())
        .collect();
    if maps.iter().all(Option::is_none) {
        return Err(Error::EmptySweep);
    }
    let run = |m: &BestReplyMap, x0: f64| {
        let mut x = m.iterate(x0, spec.burn);
        (0..spec.samples)
            .map(|_| {
                x = m.apply(x);
                x
            })
            .collect::<Vec<f64>>()
    };
    let columns = if spec.continuation {
        let mut x0 = spec.x0;
        maps.iter()
            .map(|m| {
                m.as_ref().map(|m| {
                    let col = run(m, x0);
                    x0 = col[col.len() - 1];
                    col
                })
            })
            .collect()
    } else {
        maps.par_iter().map(|m| m.as_ref().map(|m| run(m, spec.x0))).collect()
    };
    Ok(BifurcationData { param: spec.param, values, columns, samples: spec.samples })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegimeTag {
    /// `b_hi < g_hi` or `b_hi < b_lo`.
    OutOfDomain,
    StableLeft,
    FixedSegment,
    StableRight,
    TwoCycleSegment,
    Chaotic,
    /// `b_hi = b_lo`, where `r` is undefined.
    Degenerate,
}

impl RegimeTag {
    pub const ALL: [RegimeTag; 7] = [
        RegimeTag::OutOfDomain,
        RegimeTag::StableLeft,
        RegimeTag::FixedSegment,
        RegimeTag::StableRight,
        RegimeTag::TwoCycleSegment,
        RegimeTag::Chaotic,
        RegimeTag::Degenerate,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeTag::OutOfDomain => "out",
            RegimeTag::StableLeft => "I",
            RegimeTag::FixedSegment => "II",
            RegimeTag::StableRight => "IIIa",
            RegimeTag::TwoCycleSegment => "IIIb",
            RegimeTag::Chaotic => "chaotic",
            RegimeTag::Degenerate => "degenerate",
        }
    }
}

/// Regime of the cell `(g_hi, b_hi)` at fixed `b_lo`, `g_lo`.
pub fn classify_cell(b_hi: f64, b_lo: f64, g_hi: f64, g_lo: f64) -> RegimeTag {
    if b_hi < g_hi || b_hi < b_lo {
        return RegimeTag::OutOfDomain;
    }
    if b_hi == b_lo {
        return RegimeTag::Degenerate;
    }
    match analytic_regime(b_hi, b_lo, g_hi, g_lo) {
        AnalyticRegime::StableLeft => RegimeTag::StableLeft,
        AnalyticRegime::FixedSegment => RegimeTag::FixedSegment,
        AnalyticRegime::StableRight => RegimeTag::StableRight,
        AnalyticRegime::TwoCycleSegment => RegimeTag::TwoCycleSegment,
        AnalyticRegime::Chaotic => RegimeTag::Chaotic,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeGrid {
    pub b_lo: f64,
    pub g_lo: f64,
    pub g_range: (f64, f64),
    pub b_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    /// Row-major, `x` along `g_hi`, row 0 at the lowest `b_hi`.
    pub tags: Vec<RegimeTag>,
    /// The curve `r = 1`, i.e. `b_hi = b_lo + g_hi - g_lo`, inside the window.
    pub r_one: Vec<(f64, f64)>,
    /// The line `g_hi = 2 b_lo` inside the window and the domain.
    pub flip_line: Vec<(f64, f64)>,
}

impl RegimeGrid {
    /// `(g_hi, b_hi)` at the center of cell `(ix, iy)`.
    pub fn cell_center(&self, ix: usize, iy: usize) -> (f64, f64) {
        let c = |(lo, hi): (f64, f64), n: usize, i: usize| lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
        (c(self.g_range, self.nx, ix), c(self.b_range, self.ny, iy))
    }

    pub fn tag(&self, ix: usize, iy: usize) -> RegimeTag {
        self.tags[iy * self.nx + ix]
    }

    /// Share of all cells tagged chaotic.
    pub fn chaotic_fraction(&self) -> f64 {
        self.tags.iter().filter(|&&t| t == RegimeTag::Chaotic).count() as f64 / self.tags.len() as f64
    }

    /// Chaotic share scaled by the window area.
    pub fn chaotic_area(&self) -> f64 {
        let w = (self.g_range.1 - self.g_range.0) * (self.b_range.1 - self.b_range.0);
        self.chaotic_fraction() * w
    }

    /// Pairs of horizontally or vertically adjacent in-domain cells with a
    /// chaotic cell on exactly one side.
    pub fn chaotic_boundary_pairs(&self) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                for (jx, jy) in [(ix + 1, iy), (ix, iy + 1)] {
                    if jx >= self.nx || jy >= self.ny {
                        continue;
                    }
                    let (a, b) = (self.tag(ix, iy), self.tag(jx, jy));
                    if a == RegimeTag::OutOfDomain || b == RegimeTag::OutOfDomain {
                        continue;
                    }
                    if (a == RegimeTag::Chaotic) != (b == RegimeTag::Chaotic) {
                        out.push(((ix, iy), (jx, jy)));
                    }
                }
            }
        }
        out
    }
}

/// Analytic regime of every cell of an `nx x ny` grid over
/// `g_range x b_range`, plus the boundary curves.
pub fn regime_map(
    b_lo: f64,
    g_lo: f64,
    g_range: (f64, f64),
    b_range: (f64, f64),
    nx: usize,
    ny: usize,
) -> Result<RegimeGrid> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidGrid(format!("{nx}x{ny} cells")));
    }
    for (lo, hi) in [g_range, b_range] {
        if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi <= lo {
            return Err(Error::InvalidGrid(format!("range [{lo}, {hi}]")));
        }
    }
    if !(b_lo >= g_lo && g_lo >= 0.0) || !b_lo.is_finite() {
        return Err(Error::OrderingViolation(format!("b_lo = {b_lo}, g_lo = {g_lo}")));
    }
    let mut grid = RegimeGrid {
        b_lo,
        g_lo,
        g_range,
        b_range,
        nx,
        ny,
        tags: Vec::with_capacity(nx * ny),
        r_one: Vec::new(),
        flip_line: Vec::new(),
    };
    for iy in 0..ny {
        for ix in 0..nx {
            let (g_hi, b_hi) = grid.cell_center(ix, iy);
            grid.tags.push(classify_cell(b_hi, b_lo, g_hi, g_lo));
        }
    }
    let inside = |(lo, hi): (f64, f64), v: f64| v >= lo && v <= hi;
    for i in 0..=nx {
        let g = g_range.0 + (g_range.1 - g_range.0) * i as f64 / nx as f64;
        let b = b_lo + g - g_lo;
        if inside(b_range, b) {
            grid.r_one.push((g, b));
        }
    }
    let g_flip = 2.0 * b_lo;
    if inside(g_range, g_flip) {
        for i in 0..=ny {
            let b = b_range.0 + (b_range.1 - b_range.0) * i as f64 / ny as f64;
            if b >= g_flip {
                grid.flip_line.push((g_flip, b));
            }
        }
    }
    Ok(grid)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checked: usize,
    pub agreed: usize,
    /// `(g_hi, b_hi, tag)` of cells where simulation disagreed.
    pub mismatches: Vec<(f64, f64, RegimeTag)>,
}

/// Simulates `f` at up to `n` random cells with a stable or chaotic tag and
/// checks the long-run behaviour: a single value for stable cells, a spread
/// orbit for chaotic ones. Cells whose parameters are not a valid
/// uncertainty set are skipped.
pub fn verify_regime_map(grid: &RegimeGrid, n: usize, seed: u64) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerifyReport { checked: 0, agreed: 0, mismatches: Vec::new() };
    let mut attempts = 0;
    while report.checked < n && attempts < 100 * n.max(1) {
        attempts += 1;
        let ix = rng.random_range(0..grid.nx);
        let iy = rng.random_range(0..grid.ny);
        let tag = grid.tag(ix, iy);
        if !matches!(tag, RegimeTag::StableLeft | RegimeTag::StableRight | RegimeTag::Chaotic) {
            continue;
        }
        let (g_hi, b_hi) = grid.cell_center(ix, iy);
        let Ok(m) = UncertaintySet::unit(b_hi, grid.b_lo, g_hi, grid.g_lo).and_then(BestReplyMap::new) else {
            continue;
        };
        report.checked += 1;
        let mut x = m.iterate(0.5 * m.x_m(), 20_000);
        let (mut lo, mut hi) = (x, x);
        for _ in 0..2_000 {
            x = m.apply(x);
            lo = lo.min(x);
            hi = hi.max(x);
        }
        let ok = match tag {
            RegimeTag::Chaotic => hi - lo > 1e-6,
            _ => {
                let xs = fixed_points(&m).point().unwrap_or(f64::NAN);
                (hi - xs).abs() < 1e-8 && (lo - xs).abs() < 1e-8
            }
        };
        if ok {
            report.agreed += 1;
        } else {
            report.mismatches.push((g_hi, b_hi, tag));
        }
    }
    report
}
