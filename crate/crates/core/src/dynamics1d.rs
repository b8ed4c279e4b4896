//! Dynamics of the best reply `f` on the diagonal.
//!
//! Everything here works on a [`BestReplyMap`]: fixed points and their
//! stability, the six dynamical regimes, two-cycles, the critical orbit
//! of the kink `x_u`, the cyclic chaotic bands and Lyapunov exponents.

use crate::error::{Error, Result};
use crate::model::{BestReplyMap, Branch};

/// Tolerance deciding the measure-zero boundaries `r = 1` and `g_hi = 2 b_lo`.
pub const TOL_R: f64 = 1e-10;
/// Default transient discarded before sampling an orbit.
pub const DEFAULT_BURN: usize = 10_000;
/// Default number of recorded iterates.
pub const DEFAULT_SAMPLES: usize = 10_000;
/// Orbit length used to count chaotic bands.
pub const BAND_SAMPLES: usize = 1_000_000;
/// Relative gap (to the absorbing interval width) that separates two bands.
pub const BAND_GAP: f64 = 1e-4;
/// Allowed distance between a band edge and its critical-orbit iterate.
pub const BAND_MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stability {
    Attracting,
    Marginal,
    Repelling,
}

impl Stability {
    /// Tag from a cycle multiplier; `|m| = 1` within [`TOL_R`] is marginal.
    pub fn from_multiplier(m: f64) -> Self {
        let mag = m.abs();
        if (mag - 1.0).abs() <= TOL_R {
            Stability::Marginal
        } else if mag < 1.0 {
            Stability::Attracting
        } else {
            Stability::Repelling
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Stability::Attracting => "attracting",
            Stability::Marginal => "marginal",
            Stability::Repelling => "repelling",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedPointKind {
    /// `x*_l = a / (g_lo + 2 b_hi)` on the left branch (`r < 1`).
    UniqueLeft(f64),
    /// `x*_r = a / (g_hi + 2 b_lo)` on the right branch (`r > 1`).
    UniqueRight(f64),
    /// `[x_l, x_u]` is filled with fixed points (`r = 1`).
    Segment(f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointReport {
    pub kind: FixedPointKind,
    pub stability: Stability,
    /// Slope of the branch carrying the fixed point(s).
    pub eigenvalue: f64,
}

impl FixedPointReport {
    /// The isolated fixed point, if there is one.
    pub fn point(&self) -> Option<f64> {
        match self.kind {
            FixedPointKind::UniqueLeft(x) | FixedPointKind::UniqueRight(x) => Some(x),
            FixedPointKind::Segment(..) => None,
        }
    }
}

pub fn fixed_points(m: &BestReplyMap) -> FixedPointReport {
    let u = m.owner();
    let r = m.r();
    if (r - 1.0).abs() <= TOL_R {
        return FixedPointReport {
            kind: FixedPointKind::Segment(m.x_l(), m.x_u()),
            stability: Stability::Marginal,
            eigenvalue: 1.0,
        };
    }
    let (kind, branch) = if r < 1.0 {
        (FixedPointKind::UniqueLeft(u.a() / (u.g_lo() + 2.0 * u.b_hi())), Branch::Left)
    } else {
        (FixedPointKind::UniqueRight(u.a() / (u.g_hi() + 2.0 * u.b_lo())), Branch::Right)
    };
    let eigenvalue = m.line(branch).map_or(0.0, |l| l.slope);
    FixedPointReport { kind, stability: Stability::from_multiplier(eigenvalue), eigenvalue }
}

/// The six dynamical regimes of the best reply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `r < 1`: the left fixed point attracts every orbit.
    StableLeft,
    /// `r = 1`: a segment of marginal fixed points.
    FixedSegment,
    /// `r > 1`, `g_hi < 2 b_lo`: the right fixed point attracts every orbit.
    StableRight,
    /// `r > 1`, `g_hi = 2 b_lo`: a segment of marginal two-cycles.
    TwoCycleSegment,
    /// `r > 1`, `g_hi > 2 b_lo`, past the homoclinic bifurcation: `2^k`
    /// cyclic chaotic bands. `k` is `None` when band detection failed.
    CyclicChaos { k: Option<u32> },
    /// `r > 1`, `g_hi > 2 b_lo`, before the homoclinic bifurcation: a single
    /// chaotic interval `[f^2(x_u), f(x_u)]`.
    SingleChaoticInterval,
}

impl Regime {
    /// Short case label: `I`, `II`, `IIIa`, `IIIb`, `IIIc`, `IIId`.
    pub fn tag(&self) -> &'static str {
        match self {
            Regime::StableLeft => "I",
            Regime::FixedSegment => "II",
            Regime::StableRight => "IIIa",
            Regime::TwoCycleSegment => "IIIb",
            Regime::CyclicChaos { .. } => "IIIc",
            Regime::SingleChaoticInterval => "IIId",
        }
    }

    /// Exponent `k` of the `2^k` chaotic pieces, for the chaotic regimes.
    pub fn pieces_exponent(&self) -> Option<u32> {
        match self {
            Regime::CyclicChaos { k } => *k,
            Regime::SingleChaoticInterval => Some(0),
            _ => None,
        }
    }

    pub fn is_chaotic(&self) -> bool {
        matches!(self, Regime::CyclicChaos { .. } | Regime::SingleChaoticInterval)
    }
}

/// Regime decided by closed-form comparisons only; the two chaotic cases are
/// merged. Cheap enough to call per cell of a parameter grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnalyticRegime {
    StableLeft,
    FixedSegment,
    StableRight,
    TwoCycleSegment,
    Chaotic,
}

pub fn classify_analytic(m: &BestReplyMap) -> AnalyticRegime {
    let u = m.owner();
    analytic_regime(u.b_hi(), u.b_lo(), u.g_hi(), u.g_lo())
}

/// [`classify_analytic`] on raw parameters, without the ordering checks of
/// an uncertainty set. Requires `b_hi > b_lo`.
pub fn analytic_regime(b_hi: f64, b_lo: f64, g_hi: f64, g_lo: f64) -> AnalyticRegime {
    let r = (g_hi - g_lo) / (b_hi - b_lo);
    if r < 1.0 - TOL_R {
        return AnalyticRegime::StableLeft;
    }
    if r <= 1.0 + TOL_R {
        return AnalyticRegime::FixedSegment;
    }
    let flip = g_hi - 2.0 * b_lo;
    if flip < -TOL_R {
        AnalyticRegime::StableRight
    } else if flip <= TOL_R {
        AnalyticRegime::TwoCycleSegment
    } else {
        AnalyticRegime::Chaotic
    }
}

/// `f_m(f_r(f_m(x_u)))`, compared with `x*_r` to locate the homoclinic
/// bifurcation.
pub fn homoclinic_value(m: &BestReplyMap) -> Option<f64> {
    let right = m.line(Branch::Right)?;
    let mid = m.line(Branch::Middle)?;
    Some(mid.at(right.at(mid.at(m.x_u()))))
}

pub fn classify_regime(m: &BestReplyMap) -> Regime {
    match classify_analytic(m) {
        AnalyticRegime::StableLeft => Regime::StableLeft,
        AnalyticRegime::FixedSegment => Regime::FixedSegment,
        AnalyticRegime::StableRight => Regime::StableRight,
        AnalyticRegime::TwoCycleSegment => Regime::TwoCycleSegment,
        AnalyticRegime::Chaotic => {
            if single_interval_by_homoclinic_test(m) {
                return Regime::SingleChaoticInterval;
            }
            match detect_bands(m) {
                Ok(bands) if bands.k == 0 => Regime::SingleChaoticInterval,
                Ok(bands) => Regime::CyclicChaos { k: Some(bands.k) },
                Err(_) => Regime::CyclicChaos { k: None },
            }
        }
    }
}

/// Before the first homoclinic bifurcation, with the absorbing interval
/// `[f^2(x_u), f(x_u)]` clear of `x_l`.
fn single_interval_by_homoclinic_test(m: &BestReplyMap) -> bool {
    let x_star = fixed_points(m).point();
    let c = critical_orbit(m, 2);
    match (homoclinic_value(m), x_star) {
        (Some(h), Some(x_star)) => c[1] > m.x_l() && c[0] < m.x_m() && h < x_star,
        _ => false,
    }
}

/// A periodic orbit of `f`; `points[i+1] = f(points[i])` cyclically.
#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    pub period: usize,
    pub points: Vec<f64>,
    /// Product of branch slopes along the cycle.
    pub eigenvalue: f64,
}

impl Cycle {
    /// Builds a cycle from its ordered points. Points must be finite,
    /// non-negative and pairwise distinct (first period).
    pub fn new(points: Vec<f64>, eigenvalue: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::NotACycle("no points".into()));
        }
        if points.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::NotACycle("points must be finite and non-negative".into()));
        }
        for (i, a) in points.iter().enumerate() {
            if points[i + 1..].iter().any(|b| a == b) {
                return Err(Error::NotACycle(format!("repeated point {a}")));
            }
        }
        Ok(Self { period: points.len(), points, eigenvalue })
    }

    /// Follows `f` from `x0` for `period` steps and checks that the orbit
    /// closes (relative tolerance `1e-9`). The eigenvalue is the product of
    /// the slopes met on the way.
    pub fn from_map(m: &BestReplyMap, x0: f64, period: usize) -> Result<Self> {
        if period == 0 {
            return Err(Error::NotACycle("period must be positive".into()));
        }
        let mut points = Vec::with_capacity(period);
        let mut eigenvalue = 1.0;
        let mut x = x0;
        for _ in 0..period {
            points.push(x);
            eigenvalue *= m.slope_at(x);
            x = m.apply(x);
        }
        if (x - x0).abs() > 1e-9 * (1.0 + x0.abs()) {
            return Err(Error::NotACycle(format!("f^{period}({x0}) = {x}")));
        }
        Self::new(points, eigenvalue)
    }

    pub fn stability(&self) -> Stability {
        Stability::from_multiplier(self.eigenvalue)
    }

    /// Checks `f(points[i]) = points[i+1]` within `tol` (relative).
    pub fn is_closed_under(&self, m: &BestReplyMap, tol: f64) -> bool {
        (0..self.period).all(|i| {
            let next = self.points[(i + 1) % self.period];
            (m.apply(self.points[i]) - next).abs() <= tol * (1.0 + next.abs())
        })
    }
}

/// A two-cycle of `f`, either isolated or part of the marginal continuum
/// found exactly at the degenerate flip bifurcation.
#[derive(Debug, Clone, PartialEq)]
pub enum TwoCycle {
    Isolated(Cycle),
    /// Every point of `[lo, hi]` other than the fixed point has period two.
    Continuum { lo: f64, hi: f64, eigenvalue: f64 },
}

/// Every two-cycle of `f`, found by solving the affine system for each
/// ordered pair of branches and keeping solutions that lie in the right
/// domains and are not fixed points.
pub fn find_two_cycles(m: &BestReplyMap) -> Vec<TwoCycle> {
    let mut out = Vec::new();
    let degenerate_flip = classify_analytic(m) == AnalyticRegime::TwoCycleSegment;
    if degenerate_flip {
        out.push(TwoCycle::Continuum { lo: m.x_u(), hi: m.apply(m.x_u()), eigenvalue: 1.0 });
    }
    let in_domain = |branch: Branch, x: f64| {
        let (lo, hi) = m.domain(branch);
        let slack = 1e-12 * (1.0 + x.abs());
        x >= lo - slack && x <= hi + slack
    };
    let mut found: Vec<Cycle> = Vec::new();
    for a in Branch::ALL {
        for b in Branch::ALL {
            if degenerate_flip && a == Branch::Right && b == Branch::Right {
                continue;
            }
            let (Some(fa), Some(fb)) = (m.line(a), m.line(b)) else { continue };
            let denom = 1.0 - fa.slope * fb.slope;
            if denom.abs() <= 1e-12 {
                continue;
            }
            // x2 = fa(x1), x1 = fb(x2)
            let x1 = (fb.intercept + fb.slope * fa.intercept) / denom;
            let x2 = fa.at(x1);
            if !(x1.is_finite() && x2.is_finite()) || !in_domain(a, x1) || !in_domain(b, x2) {
                continue;
            }
            if (x1 - x2).abs() <= 1e-12 * (1.0 + x1.abs()) {
                continue;
            }
            let tol = 1e-9;
            if (m.apply(x1) - x2).abs() > tol * (1.0 + x2) || (m.apply(x2) - x1).abs() > tol * (1.0 + x1) {
                continue;
            }
            let (lo, hi) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
            if degenerate_flip {
                let (clo, chi) = (m.x_u(), m.apply(m.x_u()));
                let slack = 1e-10 * (1.0 + chi);
                if lo >= clo - slack && hi <= chi + slack {
                    continue;
                }
            }
            if found.iter().any(|c| (c.points[0] - lo).abs() <= 1e-10 * (1.0 + lo)) {
                continue;
            }
            let eigenvalue = fa.slope * fb.slope;
            if let Ok(c) = Cycle::new(vec![lo, hi], eigenvalue) {
                found.push(c);
            }
        }
    }
    out.extend(found.into_iter().map(TwoCycle::Isolated));
    out
}

/// `[c_1, ..., c_depth]` with `c_1 = f(x_u)` and `c_{j+1} = f(c_j)`.
pub fn critical_orbit(m: &BestReplyMap, depth: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(depth);
    let mut c = m.x_u();
    for _ in 0..depth {
        c = m.apply(c);
        out.push(c);
    }
    out
}

/// `2^k` cyclic chaotic bands `I_1, ..., I_{2^k}` with `f(I_i) = I_{i+1}`
/// and `f(I_{2^k}) ⊆ I_1`. `I_1` holds the critical value `c_1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChaoticIntervals {
    pub k: u32,
    pub intervals: Vec<(f64, f64)>,
    /// `c_1, ..., c_{2^(k+1)}`; band `i` is spanned by `c_i` and `c_{i+2^k}`.
    pub critical_orbit: Vec<f64>,
}

impl ChaoticIntervals {
    pub fn pieces(&self) -> usize {
        self.intervals.len()
    }

    /// Index of the band containing `x` (inflated by `tol`).
    pub fn index_of(&self, x: f64, tol: f64) -> Option<usize> {
        self.intervals.iter().position(|&(lo, hi)| x >= lo - tol && x <= hi + tol)
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        self.index_of(x, tol).is_some()
    }

    /// Smallest interval holding every band.
    pub fn hull(&self) -> (f64, f64) {
        let lo = self.intervals.iter().map(|b| b.0).fold(f64::INFINITY, f64::min);
        let hi = self.intervals.iter().map(|b| b.1).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

/// Chaotic bands of `f`. The single-interval case is closed form; otherwise
/// the number of bands is counted on a long critical orbit and the band
/// edges are taken from the critical-orbit iterates they match.
pub fn chaotic_intervals(m: &BestReplyMap) -> Result<ChaoticIntervals> {
    match classify_analytic(m) {
        AnalyticRegime::Chaotic => {}
        AnalyticRegime::StableLeft => return Err(Error::NotChaoticRegime("I")),
        AnalyticRegime::FixedSegment => return Err(Error::NotChaoticRegime("II")),
        AnalyticRegime::StableRight => return Err(Error::NotChaoticRegime("IIIa")),
        AnalyticRegime::TwoCycleSegment => return Err(Error::NotChaoticRegime("IIIb")),
    }
    if single_interval_by_homoclinic_test(m) {
        return bands_from_critical_orbit(m, 1);
    }
    detect_bands(m)
}

fn detect_bands(m: &BestReplyMap) -> Result<ChaoticIntervals> {
    let c = critical_orbit(m, 2);
    let width = c[0] - c[1];
    if width.is_nan() || width <= 0.0 {
        return Err(Error::BandBoundaryMismatch("empty absorbing interval".into()));
    }
    let mut samples = critical_orbit(m, BAND_SAMPLES);
    samples.sort_by(f64::total_cmp);
    let gap = BAND_GAP * width;
    let mut clusters: Vec<(f64, f64)> = vec![(samples[0], samples[0])];
    for &x in &samples[1..] {
        let last = clusters.last_mut().expect("non-empty");
        if x - last.1 > gap {
            clusters.push((x, x));
        } else {
            last.1 = x;
        }
    }
    let n = clusters.len();
    if !n.is_power_of_two() {
        return Err(Error::PieceCountNotPowerOfTwo(n));
    }
    let bands = bands_from_critical_orbit(m, n)?;
    let mut edges: Vec<f64> = clusters.iter().flat_map(|&(lo, hi)| [lo, hi]).collect();
    let mut iterates = bands.critical_orbit.clone();
    edges.sort_by(f64::total_cmp);
    iterates.sort_by(f64::total_cmp);
    for (e, c) in edges.iter().zip(&iterates) {
        if (e - c).abs() > BAND_MATCH_TOL {
            return Err(Error::BandBoundaryMismatch(format!(
                "cluster edge {e} has no critical iterate within {BAND_MATCH_TOL} (nearest {c})"
            )));
        }
    }
    for &(lo, hi) in &bands.intervals {
        let matched = clusters
            .iter()
            .any(|&(clo, chi)| (clo - lo).abs() <= BAND_MATCH_TOL && (chi - hi).abs() <= BAND_MATCH_TOL);
        if !matched {
            return Err(Error::BandBoundaryMismatch(format!("band [{lo}, {hi}] matches no cluster")));
        }
    }
    Ok(bands)
}

/// Bands `hull(c_i, c_{i+n})`, `i = 1..n`, checked for disjointness and
/// for the cyclic image property.
fn bands_from_critical_orbit(m: &BestReplyMap, n: usize) -> Result<ChaoticIntervals> {
    let c = critical_orbit(m, 2 * n);
    let intervals: Vec<(f64, f64)> = (0..n).map(|i| (c[i].min(c[i + n]), c[i].max(c[i + n]))).collect();
    let mut sorted = intervals.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    if sorted.windows(2).any(|w| w[0].1 >= w[1].0) && n > 1 {
        return Err(Error::BandBoundaryMismatch("bands overlap".into()));
    }
    let scale = 1.0 + c[0].abs();
    for i in 0..n {
        let (lo, hi) = m.image_of_interval(intervals[i].0, intervals[i].1);
        let (nlo, nhi) = intervals[(i + 1) % n];
        let ok = if i + 1 < n {
            (lo - nlo).abs() <= 1e-10 * scale && (hi - nhi).abs() <= 1e-10 * scale
        } else {
            lo >= nlo - 1e-10 * scale && hi <= nhi + 1e-10 * scale
        };
        if !ok {
            return Err(Error::BandBoundaryMismatch(format!(
                "f(I_{}) = [{lo}, {hi}] does not map onto I_{} = [{nlo}, {nhi}]",
                i + 1,
                (i + 1) % n + 1
            )));
        }
    }
    Ok(ChaoticIntervals { k: n.trailing_zeros(), intervals, critical_orbit: c })
}

/// The `n` iterates following a transient of `burn` steps from `x0`.
pub fn iterate_f(m: &BestReplyMap, x0: f64, n: usize, burn: usize) -> Result<Vec<f64>> {
    if !x0.is_finite() || x0 < 0.0 {
        return Err(Error::NegativeInput(x0));
    }
    let mut x = m.iterate(x0, burn);
    Ok((0..n)
        .map(|_| {
            x = m.apply(x);
            x
        })
        .collect())
}

/// Lyapunov exponent over `n` iterates after [`DEFAULT_BURN`] transient steps.
pub fn lyapunov(m: &BestReplyMap, x0: f64, n: usize) -> Result<f64> {
    lyapunov_with_burn(m, x0, n, DEFAULT_BURN)
}

/// Mean of `ln|f'|` along the orbit. Iterates sitting exactly on a kink or
/// in the zero branch are skipped. A visit to a flat branch (the left
/// branch when `g_lo = 0`) yields `-inf`.
pub fn lyapunov_with_burn(m: &BestReplyMap, x0: f64, n: usize, burn: usize) -> Result<f64> {
    const MIN_ITERATES: usize = 1000;
    if n < MIN_ITERATES {
        return Err(Error::InsufficientIterations { min: MIN_ITERATES, got: n });
    }
    if !x0.is_finite() || x0 < 0.0 {
        return Err(Error::NegativeInput(x0));
    }
    let mut x = m.iterate(x0, burn);
    let mut sum = 0.0;
    let mut counted = 0usize;
    for _ in 0..n {
        if !m.is_kink(x) && m.branch_at(x) != Branch::Zero {
            let s = m.slope_at(x).abs();
            if s == 0.0 {
                return Ok(f64::NEG_INFINITY);
            }
            sum += s.ln();
            counted += 1;
        }
        x = m.apply(x);
    }
    if counted == 0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(sum / counted as f64)
}
