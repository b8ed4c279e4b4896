//! Game parameters, the worst-case best reply and payoff evaluation.
//!
//! Demand is linear and clamped at zero, `P(x, y) = max(a - b x - g y, 0)`,
//! and a firm's profit is `P(x, y) x` (production costs are zero). Firms are
//! unsure about `(b, g)` and guard against the two realizations
//! `(b_hi, g_lo)` and `(b_lo, g_hi)`; the resulting best reply is a
//! continuous piecewise-linear map with three kinks.

use crate::error::{Error, Result};

/// The two worst-case realizations of the demand parameters, plus the
/// choke price.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintySet {
    b_hi: f64,
    b_lo: f64,
    g_hi: f64,
    g_lo: f64,
    a: f64,
}

impl UncertaintySet {
    /// Validates `b_hi >= g_hi >= b_lo >= g_lo >= 0`, `b_hi > 0` and `a > 0`.
    /// A singleton (`b_hi = b_lo`, `g_hi = g_lo`) only needs `b >= g >= 0`.
    pub fn new(b_hi: f64, b_lo: f64, g_hi: f64, g_lo: f64, a: f64) -> Result<Self> {
        for (name, value) in [
            ("b_hi", b_hi),
            ("b_lo", b_lo),
            ("g_hi", g_hi),
            ("g_lo", g_lo),
            ("a", a),
        ] {
            if !value.is_finite() {
                return Err(Error::NonFiniteParameter { name, value });
            }
        }
        if a <= 0.0 {
            return Err(Error::NonPositiveChoke(a));
        }
        // a singleton is the complete-information game, which only needs b >= g >= 0
        let singleton = b_hi == b_lo && g_hi == g_lo;
        let chain: &[(&str, f64)] = if singleton {
            &[("b", b_hi), ("g", g_hi), ("0", 0.0)]
        } else {
            &[("b_hi", b_hi), ("g_hi", g_hi), ("b_lo", b_lo), ("g_lo", g_lo), ("0", 0.0)]
        };
        for pair in chain.windows(2) {
            let ((upper_name, upper), (lower_name, lower)) = (pair[0], pair[1]);
            if upper < lower {
                return Err(Error::OrderingViolation(format!(
                    "{upper_name} = {upper} < {lower_name} = {lower}"
                )));
            }
        }
        if b_hi <= 0.0 {
            return Err(Error::OrderingViolation("b_hi must be positive".into()));
        }
        Ok(Self { b_hi, b_lo, g_hi, g_lo, a })
    }

    /// Set with the choke price fixed to 1.
    pub fn unit(b_hi: f64, b_lo: f64, g_hi: f64, g_lo: f64) -> Result<Self> {
        Self::new(b_hi, b_lo, g_hi, g_lo, 1.0)
    }

    pub fn b_hi(&self) -> f64 {
        self.b_hi
    }
    pub fn b_lo(&self) -> f64 {
        self.b_lo
    }
    pub fn g_hi(&self) -> f64 {
        self.g_hi
    }
    pub fn g_lo(&self) -> f64 {
        self.g_lo
    }
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Complete information: both realizations coincide.
    pub fn is_singleton(&self) -> bool {
        self.b_hi == self.b_lo && self.g_hi == self.g_lo
    }

    /// The realizations `(b, g)` that make up the set, duopoly-like first.
    pub fn realizations(&self) -> [(f64, f64); 2] {
        [(self.b_hi, self.g_lo), (self.b_lo, self.g_hi)]
    }

    /// Same set with the choke price replaced.
    pub fn with_choke(&self, a: f64) -> Result<Self> {
        Self::new(self.b_hi, self.b_lo, self.g_hi, self.g_lo, a)
    }
}

/// An affine branch `intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub intercept: f64,
    pub slope: f64,
}

impl Line {
    pub fn at(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Which piece of the best reply is active at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Left,
    Middle,
    Right,
    Zero,
}

impl Branch {
    pub const ALL: [Branch; 4] = [Branch::Left, Branch::Middle, Branch::Right, Branch::Zero];
}

/// The worst-case best reply `f` built from an [`UncertaintySet`].
///
/// `f = f_l` on `[0, x_l]`, `f_m(x) = r x` on `[x_l, x_u]`, `f_r` on
/// `[x_u, x_m]` and zero beyond `x_m`. Kinks are computed once here.
#[derive(Debug, Clone, PartialEq)]
pub struct BestReplyMap {
    owner: UncertaintySet,
    r: f64,
    x_l: f64,
    x_u: f64,
    x_m: f64,
    left: Line,
    middle: Line,
    /// `None` when `b_lo = 0`: the right piece shrinks to the single point
    /// `x_u = x_m` and the map jumps to zero there.
    right: Option<Line>,
}

impl BestReplyMap {
    pub fn new(owner: UncertaintySet) -> Result<Self> {
        if owner.is_singleton() {
            return Err(Error::SingletonSet);
        }
        let UncertaintySet { b_hi, b_lo, g_hi, g_lo, a } = owner;
        if g_hi == 0.0 {
            return Err(Error::DegenerateMap("g_hi = 0 leaves x_m undefined"));
        }
        if b_hi == b_lo {
            return Err(Error::DegenerateMap("b_hi = b_lo makes the middle slope infinite"));
        }
        let r = (g_hi - g_lo) / (b_hi - b_lo);
        let x_l = a / (g_lo + 2.0 * b_hi * r);
        let x_u = a / (g_hi + 2.0 * b_lo * r);
        let x_m = a / g_hi;
        let left = Line { intercept: a / (2.0 * b_hi), slope: -g_lo / (2.0 * b_hi) };
        let middle = Line { intercept: 0.0, slope: r };
        let right = (b_lo > 0.0).then(|| Line { intercept: a / (2.0 * b_lo), slope: -g_hi / (2.0 * b_lo) });
        Ok(Self { owner, r, x_l, x_u, x_m, left, middle, right })
    }

    pub fn owner(&self) -> &UncertaintySet {
        &self.owner
    }
    /// Slope of the middle branch.
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn x_l(&self) -> f64 {
        self.x_l
    }
    pub fn x_u(&self) -> f64 {
        self.x_u
    }
    pub fn x_m(&self) -> f64 {
        self.x_m
    }

    /// Coefficients of a branch; `None` only for the collapsed right branch.
    pub fn line(&self, branch: Branch) -> Option<Line> {
        match branch {
            Branch::Left => Some(self.left),
            Branch::Middle => Some(self.middle),
            Branch::Right => self.right,
            Branch::Zero => Some(Line { intercept: 0.0, slope: 0.0 }),
        }
    }

    /// Domain `[lo, hi]` of a branch (`hi` is infinite for the zero branch).
    pub fn domain(&self, branch: Branch) -> (f64, f64) {
        match branch {
            Branch::Left => (0.0, self.x_l),
            Branch::Middle => (self.x_l, self.x_u),
            Branch::Right => (self.x_u, self.x_m),
            Branch::Zero => (self.x_m, f64::INFINITY),
        }
    }

    /// Active branch at `x >= 0`. Ties at `x_l` and `x_u` go to the branch
    /// on the left; `x_m` itself belongs to the zero branch.
    pub fn branch_at(&self, x: f64) -> Branch {
        if x >= self.x_m {
            Branch::Zero
        } else if x <= self.x_l {
            Branch::Left
        } else if x <= self.x_u {
            Branch::Middle
        } else {
            Branch::Right
        }
    }

    /// `f(x)` without input validation; `x` must be non-negative.
    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        debug_assert!(x >= 0.0, "negative quantity {x}");
        if x >= self.x_m {
            0.0
        } else if x <= self.x_l {
            self.left.at(x)
        } else if x <= self.x_u {
            self.middle.at(x)
        } else {
            // right is Some here: b_lo = 0 forces x_u = x_m
            self.right.map_or(0.0, |l| l.at(x).max(0.0))
        }
    }

    /// `f(x)`, rejecting negative or non-finite input.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::NegativeInput(x));
        }
        Ok(self.apply(x))
    }

    /// Slope of the active branch at `x` (kinks resolved as in [`branch_at`]).
    ///
    /// [`branch_at`]: Self::branch_at
    pub fn slope_at(&self, x: f64) -> f64 {
        match self.branch_at(x) {
            Branch::Left => self.left.slope,
            Branch::Middle => self.middle.slope,
            Branch::Right => self.right.map_or(0.0, |l| l.slope),
            Branch::Zero => 0.0,
        }
    }

    /// Whether `x` sits exactly on one of the three kinks.
    pub fn is_kink(&self, x: f64) -> bool {
        x == self.x_l || x == self.x_u || x == self.x_m
    }

    /// `f^n(x)`.
    pub fn iterate(&self, mut x: f64, n: usize) -> f64 {
        for _ in 0..n {
            x = self.apply(x);
        }
        x
    }

    /// Exact image `f([lo, hi])` of an interval, using its endpoints and any
    /// kink inside it.
    pub fn image_of_interval(&self, lo: f64, hi: f64) -> (f64, f64) {
        let mut min = self.apply(lo).min(self.apply(hi));
        let mut max = self.apply(lo).max(self.apply(hi));
        for k in [self.x_l, self.x_u, self.x_m] {
            if k > lo && k < hi {
                let v = self.apply(k);
                min = min.min(v);
                max = max.max(v);
            }
        }
        (min, max)
    }
}

/// Convenience wrapper around [`BestReplyMap::new`].
pub fn build_best_reply(set: UncertaintySet) -> Result<BestReplyMap> {
    BestReplyMap::new(set)
}

/// Best reply under complete information, `(1 - g x) / (2 b)` clamped at 0.
/// Its unique fixed point is the Cournot-Nash output `1 / (2 b + g)`.
pub fn complete_info_reply(b: f64, gamma: f64, x: f64) -> Result<f64> {
    if !b.is_finite() || b <= 0.0 || gamma.is_nan() || gamma < 0.0 || gamma > b {
        return Err(Error::InvalidParameters(format!(
            "complete-information reply needs b > 0 and 0 <= gamma <= b (b = {b}, gamma = {gamma})"
        )));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::NegativeInput(x));
    }
    if gamma > 0.0 && x >= 1.0 / gamma {
        return Ok(0.0);
    }
    Ok(((1.0 - gamma * x) / (2.0 * b)).max(0.0))
}

/// Cournot-Nash output of the complete-information game.
pub fn cournot_nash(b: f64, gamma: f64) -> f64 {
    1.0 / (2.0 * b + gamma)
}

/// `max(a - b x - gamma y, 0)`.
pub fn inverse_demand(x: f64, y: f64, b: f64, gamma: f64, a: f64) -> f64 {
    (a - b * x - gamma * y).max(0.0)
}

/// Profit of the firm producing `x` when its rival produces `y`. The rival's
/// profit is `payoff(y, x, ..)`.
pub fn payoff(x: f64, y: f64, b: f64, gamma: f64, a: f64) -> f64 {
    inverse_demand(x, y, b, gamma, a) * x
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PayoffMode {
    Worst,
    Best,
}

/// Minimum (worst case) or maximum (best case) of [`payoff`] over the two
/// realizations in `set`.
pub fn extremal_payoff(set: &UncertaintySet, x: f64, y: f64, mode: PayoffMode) -> f64 {
    let [(b1, g1), (b2, g2)] = set.realizations();
    let p1 = payoff(x, y, b1, g1, set.a());
    let p2 = payoff(x, y, b2, g2, set.a());
    match mode {
        PayoffMode::Worst => p1.min(p2),
        PayoffMode::Best => p1.max(p2),
    }
}
