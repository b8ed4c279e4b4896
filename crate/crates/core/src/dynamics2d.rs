//! The Cournot adjustment `T(x, y) = (f(y), f(x))`.
//!
//! `T` commutes with the swap `S(x, y) = (y, x)`, keeps the diagonal
//! invariant and its square `T^2 = (f^2(x), f^2(y))` has separate
//! variables, so periodic orbits and chaotic sets of `T` are Cartesian
//! products of those of `f`.

use std::collections::HashMap;

use crate::dynamics1d::{
    chaotic_intervals, classify_regime, fixed_points, ChaoticIntervals, Cycle, Regime, TOL_R,
};
use crate::error::{Error, Result};
use crate::model::BestReplyMap;

pub type Point = (f64, f64);

/// Default inflation of attractor regions when labelling orbits.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-6;
/// Share of tail points that must fall in one attractor.
pub const TAIL_SHARE: f64 = 0.99;

#[inline]
pub fn step_t(m: &BestReplyMap, (x, y): Point) -> Point {
    (m.apply(y), m.apply(x))
}

/// The `n` points after `burn` transient steps from `p0`.
pub fn iterate_t(m: &BestReplyMap, p0: Point, n: usize, burn: usize) -> Result<Vec<Point>> {
    for v in [p0.0, p0.1] {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::NegativeInput(v));
        }
    }
    let mut p = p0;
    for _ in 0..burn {
        p = step_t(m, p);
    }
    Ok((0..n)
        .map(|_| {
            p = step_t(m, p);
            p
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CycleOrigin {
    /// Image of an `f`-cycle on the diagonal.
    Diagonal { cycle: usize },
    /// Off the diagonal, built from a single `f`-cycle.
    Singly { cycle: usize },
    /// Built from two distinct `f`-cycles.
    Doubly { first: usize, second: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stability2D {
    StableNode,
    Saddle,
    UnstableNode,
    Marginal,
}

impl Stability2D {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stability2D::StableNode => "stable-node",
            Stability2D::Saddle => "saddle",
            Stability2D::UnstableNode => "unstable-node",
            Stability2D::Marginal => "marginal",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cycle2D {
    pub period: usize,
    pub points: Vec<Point>,
    pub origin: CycleOrigin,
    pub eigenvalues: (f64, f64),
    pub stability: Stability2D,
}

/// Stability of a lifted cycle from the multipliers of its generating
/// `f`-cycles: `mu = None` for singly generated cycles (eigenvalues
/// `(lambda, lambda)`), `Some(mu)` for doubly generated ones.
pub fn cycle_stability_2d(lambda: f64, mu: Option<f64>) -> (Stability2D, (f64, f64)) {
    let mu = mu.unwrap_or(lambda);
    #[derive(PartialEq)]
    enum Side {
        In,
        On,
        Out,
    }
    let side = |v: f64| {
        let mag = v.abs();
        if (mag - 1.0).abs() <= TOL_R {
            Side::On
        } else if mag < 1.0 {
            Side::In
        } else {
            Side::Out
        }
    };
    let tag = match (side(lambda), side(mu)) {
        (Side::In, Side::In) => Stability2D::StableNode,
        (Side::Out, Side::Out) => Stability2D::UnstableNode,
        (Side::In, Side::Out) | (Side::Out, Side::In) => Stability2D::Saddle,
        _ => Stability2D::Marginal,
    };
    (tag, (lambda, mu))
}

/// Periods and counts of the cycles of `T` generated by one `f`-cycle of
/// period `n`: `(diagonal period, [(period, count) off the diagonal])`.
pub fn singly_generated_law(n: usize) -> (usize, Vec<(usize, usize)>) {
    if n % 2 == 1 {
        (n, if n > 1 { vec![(2 * n, (n - 1) / 2)] } else { vec![] })
    } else if (n / 2).is_multiple_of(2) {
        (n, vec![(n, n - 1)])
    } else {
        (n, vec![(n / 2, 2), (n, n - 2)].into_iter().filter(|&(_, c)| c > 0).collect())
    }
}

/// `(period, count)` of the cycles of `T` generated by two distinct
/// `f`-cycles of periods `n` and `m`.
pub fn doubly_generated_law(n: usize, m: usize) -> (usize, usize) {
    let l = lcm(n, m);
    if n % 2 == 1 && m % 2 == 1 {
        (2 * l, n * m / l)
    } else {
        (l, 2 * n * m / l)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Lifts `f`-cycles to cycles of `T`: for each cycle its diagonal copy and
/// the singly generated cycles, for each unordered pair the doubly
/// generated ones. Orbits are traced by iterating `T` on the product of the
/// periodic points (with `f` acting as the cyclic successor) and checked
/// against the cycle-count laws.
pub fn lift_cycles(cycles: &[Cycle]) -> Result<Vec<Cycle2D>> {
    let mut owner: HashMap<u64, (usize, usize)> = HashMap::new();
    for (c, cycle) in cycles.iter().enumerate() {
        let checked = Cycle::new(cycle.points.clone(), cycle.eigenvalue)?;
        if checked.period != cycle.period {
            return Err(Error::NotACycle(format!("cycle {c}: period {} != point count", cycle.period)));
        }
        for (p, x) in cycle.points.iter().enumerate() {
            if owner.insert(x.to_bits(), (c, p)).is_some() {
                return Err(Error::NotACycle(format!("point {x} belongs to two cycles")));
            }
        }
    }

    type Idx = (usize, usize);
    let succ = |(c, p): Idx| (c, (p + 1) % cycles[c].period);
    let step = |(a, b): (Idx, Idx)| (succ(b), succ(a));
    let coords = |(a, b): (Idx, Idx)| (cycles[a.0].points[a.1], cycles[b.0].points[b.1]);

    let trace = |start: (Idx, Idx), seen: &mut std::collections::HashSet<(Idx, Idx)>| {
        let mut orbit = vec![start];
        seen.insert(start);
        let mut cur = step(start);
        while cur != start {
            seen.insert(cur);
            orbit.push(cur);
            cur = step(cur);
        }
        orbit
    };

    let mut out = Vec::new();
    for (c, cycle) in cycles.iter().enumerate() {
        let n = cycle.period;
        let (diag_period, external_law) = singly_generated_law(n);
        let mut seen = std::collections::HashSet::new();
        let mut periods: HashMap<usize, usize> = HashMap::new();

        let diag = trace(((c, 0), (c, 0)), &mut seen);
        assert_eq!(diag.len(), diag_period, "diagonal lift of an {n}-cycle");
        let (stability, eigenvalues) = cycle_stability_2d(cycle.eigenvalue, None);
        out.push(Cycle2D {
            period: diag.len(),
            points: diag.iter().copied().map(coords).collect(),
            origin: CycleOrigin::Diagonal { cycle: c },
            eigenvalues,
            stability,
        });
        // the diagonal copies of the other points were visited by `trace`
        for p in 0..n {
            for q in 0..n {
                let start = ((c, p), (c, q));
                if p == q || seen.contains(&start) {
                    continue;
                }
                let orbit = trace(start, &mut seen);
                *periods.entry(orbit.len()).or_default() += 1;
                out.push(Cycle2D {
                    period: orbit.len(),
                    points: orbit.into_iter().map(coords).collect(),
                    origin: CycleOrigin::Singly { cycle: c },
                    eigenvalues,
                    stability,
                });
            }
        }
        let expected: HashMap<usize, usize> = external_law.into_iter().collect();
        assert_eq!(periods, expected, "singly generated lift of an {n}-cycle");
    }

    for a in 0..cycles.len() {
        for b in a + 1..cycles.len() {
            let (law_period, law_count) = doubly_generated_law(cycles[a].period, cycles[b].period);
            let (stability, eigenvalues) = cycle_stability_2d(cycles[a].eigenvalue, Some(cycles[b].eigenvalue));
            let mut seen = std::collections::HashSet::new();
            let mut count = 0;
            for (first, second) in [(a, b), (b, a)] {
                for p in 0..cycles[first].period {
                    for q in 0..cycles[second].period {
                        let start = ((first, p), (second, q));
                        if seen.contains(&start) {
                            continue;
                        }
                        let orbit = trace(start, &mut seen);
                        assert_eq!(orbit.len(), law_period, "doubly generated lift");
                        count += 1;
                        out.push(Cycle2D {
                            period: orbit.len(),
                            points: orbit.into_iter().map(coords).collect(),
                            origin: CycleOrigin::Doubly { first: a, second: b },
                            eigenvalues,
                            stability,
                        });
                    }
                }
            }
            assert_eq!(count, law_count, "doubly generated cycle count");
        }
    }
    Ok(out)
}

/// [`lift_cycles`] for cycles of an actual best reply: inputs must close
/// under `f`, and every lifted cycle is re-checked by iterating `T`.
pub fn lift_map_cycles(m: &BestReplyMap, cycles: &[Cycle]) -> Result<Vec<Cycle2D>> {
    for (i, c) in cycles.iter().enumerate() {
        if !c.is_closed_under(m, 1e-9) {
            return Err(Error::NotACycle(format!("cycle {i} is not closed under f")));
        }
    }
    let lifted = lift_cycles(cycles)?;
    for c in &lifted {
        for (i, &p) in c.points.iter().enumerate() {
            let (x, y) = step_t(m, p);
            let (nx, ny) = c.points[(i + 1) % c.period];
            if (x - nx).abs() > 1e-12 * (1.0 + nx) || (y - ny).abs() > 1e-12 * (1.0 + ny) {
                return Err(Error::NotACycle(format!("lifted cycle breaks at ({}, {})", p.0, p.1)));
            }
        }
    }
    Ok(lifted)
}

/// The isolated fixed point and two-cycles of `f`, as [`Cycle`]s.
pub fn map_cycles(m: &BestReplyMap) -> Vec<Cycle> {
    let mut out = Vec::new();
    let fp = fixed_points(m);
    if let Some(x) = fp.point() {
        if let Ok(c) = Cycle::new(vec![x], fp.eigenvalue) {
            out.push(c);
        }
    }
    for tc in crate::dynamics1d::find_two_cycles(m) {
        if let crate::dynamics1d::TwoCycle::Isolated(c) = tc {
            out.push(c);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttractorKind {
    Point,
    ChaoticRectangles,
    /// Segment or square of marginal periodic points; invariant but not
    /// attracting.
    InvariantContinuum,
}

impl AttractorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            AttractorKind::Point => "point",
            AttractorKind::ChaoticRectangles => "chaotic-rectangles",
            AttractorKind::InvariantContinuum => "invariant-continuum",
        }
    }
}

/// `I_i x I_j`, with band indices (0-based) and bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangle {
    pub i: usize,
    pub j: usize,
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Rectangle {
    pub fn contains(&self, (x, y): Point, tol: f64) -> bool {
        x >= self.x.0 - tol && x <= self.x.1 + tol && y >= self.y.0 - tol && y <= self.y.1 + tol
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Attractor {
    pub id: usize,
    pub kind: AttractorKind,
    /// In the cyclic order visited by `T`.
    pub rectangles: Vec<Rectangle>,
    pub on_diagonal: bool,
    pub attracting: bool,
    /// Id of the mirror image under `(x, y) -> (y, x)`.
    pub mirror: usize,
}

impl Attractor {
    pub fn period(&self) -> usize {
        self.rectangles.len()
    }
}

/// Invariant sets of `T` for one best reply.
#[derive(Debug, Clone, PartialEq)]
pub struct AttractorCatalog {
    pub regime: Regime,
    pub attractors: Vec<Attractor>,
    pub bands: Option<ChaoticIntervals>,
    /// `band_owner[i * n + j]` is the attractor holding `I_i x I_j`.
    band_owner: Vec<usize>,
}

impl AttractorCatalog {
    pub fn len(&self) -> usize {
        self.attractors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attractors.is_empty()
    }

    pub fn mirror_of(&self, id: usize) -> usize {
        self.attractors[id].mirror
    }

    /// Id of the attractor whose (inflated) region contains `p`.
    pub fn locate(&self, p: Point, tol: f64) -> Option<usize> {
        if let Some(bands) = &self.bands {
            let n = bands.pieces();
            let i = bands.index_of(p.0, tol)?;
            let j = bands.index_of(p.1, tol)?;
            return Some(self.band_owner[i * n + j]);
        }
        self.attractors
            .iter()
            .find(|a| a.rectangles.iter().any(|r| r.contains(p, tol)))
            .map(|a| a.id)
    }

    /// Id of the attractor containing the diagonal.
    pub fn diagonal_attractor(&self) -> Option<usize> {
        self.attractors.iter().find(|a| a.on_diagonal).map(|a| a.id)
    }
}

/// Attractors of `T` derived from the regime of `f`: a fixed point in
/// regimes I and IIIa, products of chaotic bands in the chaotic regimes
/// (grouped by the band-index dynamics `(i, j) -> (j + 1, i + 1)`), and
/// non-attracting squares of periodic points in regimes II and IIIb.
pub fn attractor_catalog(m: &BestReplyMap) -> Result<AttractorCatalog> {
    let regime = classify_regime(m);
    let square = |lo: f64, hi: f64| Rectangle { i: 0, j: 0, x: (lo, hi), y: (lo, hi) };
    let single = |kind, rect, attracting| Attractor {
        id: 0,
        kind,
        rectangles: vec![rect],
        on_diagonal: true,
        attracting,
        mirror: 0,
    };
    let attractors = match regime {
        Regime::StableLeft | Regime::StableRight => {
            let x = fixed_points(m).point().ok_or(Error::NotClassified)?;
            vec![single(AttractorKind::Point, square(x, x), true)]
        }
        Regime::FixedSegment => {
            vec![single(AttractorKind::InvariantContinuum, square(m.x_l(), m.x_u()), false)]
        }
        Regime::TwoCycleSegment => {
            vec![single(AttractorKind::InvariantContinuum, square(m.x_u(), m.apply(m.x_u())), false)]
        }
        Regime::CyclicChaos { k: None } => return Err(Error::NotClassified),
        Regime::CyclicChaos { .. } | Regime::SingleChaoticInterval => {
            let bands = chaotic_intervals(m)?;
            let (attractors, band_owner) = band_product_attractors(&bands);
            return Ok(AttractorCatalog { regime, attractors, bands: Some(bands), band_owner });
        }
    };
    Ok(AttractorCatalog { regime, attractors, bands: None, band_owner: Vec::new() })
}

/// Partitions the `n x n` band products into orbits of the index map
/// `(i, j) -> (j + 1, i + 1) mod n`.
fn band_product_attractors(bands: &ChaoticIntervals) -> (Vec<Attractor>, Vec<usize>) {
    let n = bands.pieces();
    let mut owner = vec![usize::MAX; n * n];
    let mut attractors: Vec<Attractor> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if owner[i * n + j] != usize::MAX {
                continue;
            }
            let id = attractors.len();
            let mut rectangles = Vec::new();
            let (mut a, mut b) = (i, j);
            loop {
                owner[a * n + b] = id;
                rectangles.push(Rectangle { i: a, j: b, x: bands.intervals[a], y: bands.intervals[b] });
                (a, b) = ((b + 1) % n, (a + 1) % n);
                if (a, b) == (i, j) {
                    break;
                }
            }
            let on_diagonal = rectangles.iter().any(|r| r.i == r.j);
            attractors.push(Attractor {
                id,
                kind: AttractorKind::ChaoticRectangles,
                rectangles,
                on_diagonal,
                attracting: true,
                mirror: usize::MAX,
            });
        }
    }
    for a in attractors.iter_mut() {
        let r = a.rectangles[0];
        a.mirror = owner[r.j * n + r.i];
    }
    (attractors, owner)
}

/// Label of a post-transient orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitLabel {
    Attractor(usize),
    Unresolved,
}

impl OrbitLabel {
    pub fn id(&self) -> Option<usize> {
        match self {
            OrbitLabel::Attractor(id) => Some(*id),
            OrbitLabel::Unresolved => None,
        }
    }
}

/// The catalog entry holding at least 99% of the tail points, or
/// `Unresolved`.
pub fn classify_orbit(tail: &[Point], catalog: &AttractorCatalog, tol: f64) -> OrbitLabel {
    let mut counts = vec![0usize; catalog.len()];
    for &p in tail {
        if let Some(id) = catalog.locate(p, tol) {
            counts[id] += 1;
        }
    }
    majority(&counts, tail.len())
}

fn majority(counts: &[usize], total: usize) -> OrbitLabel {
    if total == 0 {
        return OrbitLabel::Unresolved;
    }
    counts
        .iter()
        .enumerate()
        .find(|(_, &c)| c as f64 >= TAIL_SHARE * total as f64)
        .map_or(OrbitLabel::Unresolved, |(id, _)| OrbitLabel::Attractor(id))
}

/// Iterates `T` from `p0` and classifies the tail without storing it.
pub fn classify_initial_condition(
    m: &BestReplyMap,
    catalog: &AttractorCatalog,
    p0: Point,
    burn: usize,
    tail: usize,
    tol: f64,
) -> OrbitLabel {
    let mut p = p0;
    for _ in 0..burn {
        p = step_t(m, p);
    }
    let mut counts = vec![0usize; catalog.len()];
    for _ in 0..tail {
        p = step_t(m, p);
        if let Some(id) = catalog.locate(p, tol) {
            counts[id] += 1;
        }
    }
    majority(&counts, tail)
}
