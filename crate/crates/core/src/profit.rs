//! Profit uncertainty along diagonal orbits under constant expectations.
//!
//! With both firms at `x(t)`, a firm expecting `x_e(t) = x(t - 1)` plays
//! `f(x_e(t)) = x(t)` and faces the realized competitor output `x(t)`.

use crate::error::{Error, Result};
use crate::model::{extremal_payoff, BestReplyMap, PayoffMode, UncertaintySet};

pub const DEFAULT_BURN: usize = 1_000;
pub const DEFAULT_STEPS: usize = 200;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProfitSeries {
    pub t: Vec<usize>,
    pub expected: Vec<f64>,
    pub realized: Vec<f64>,
    /// `f(x_e(t)) - f(x(t))`.
    pub naivety_gap: Vec<f64>,
    /// Worst-case payoff of `f(x_e(t))` against `x(t)`.
    pub guaranteed_achievable: Vec<f64>,
    /// Worst-case payoff of `f(x_e(t))` against `x_e(t)`.
    pub max_guaranteed_expected: Vec<f64>,
    /// Best-case payoff of `f(x_e(t))` against `x_e(t)`.
    pub best_possible_expected: Vec<f64>,
}

impl ProfitSeries {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

/// Runs `x(t + 1) = f(x(t))` from `x0` and records `n` steps after `burn`.
/// Time is counted from `x0` at `t = 0`, so the first record is at
/// `t = burn + 1` (its expectation needs one previous output).
pub fn profit_series(u: &UncertaintySet, x0: f64, n: usize, burn: usize) -> Result<ProfitSeries> {
    if !x0.is_finite() || x0 < 0.0 {
        return Err(Error::NegativeInput(x0));
    }
    let m = BestReplyMap::new(*u)?;
    let mut prev = m.iterate(x0, burn);
    let mut s = ProfitSeries::default();
    for step in 0..n {
        let x = m.apply(prev);
        let reply = x;
        s.t.push(burn + 1 + step);
        s.expected.push(prev);
        s.realized.push(x);
        s.naivety_gap.push(reply - m.apply(x));
        s.guaranteed_achievable.push(extremal_payoff(u, reply, x, PayoffMode::Worst));
        s.max_guaranteed_expected.push(extremal_payoff(u, reply, prev, PayoffMode::Worst));
        s.best_possible_expected.push(extremal_payoff(u, reply, prev, PayoffMode::Best));
        prev = x;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_point_has_no_gap() {
        let u = UncertaintySet::unit(0.6, 0.2, 0.3, 0.0).unwrap();
        let s = profit_series(&u, 0.7, 50, 1_000).unwrap();
        assert!(s.naivety_gap.iter().all(|&g| g == 0.0));
        assert_eq!(s.guaranteed_achievable, s.max_guaranteed_expected);
    }

    #[test]
    fn gap_is_output_change() {
        let u = UncertaintySet::unit(0.6, 0.15, 0.5, 0.0).unwrap();
        let s = profit_series(&u, 0.7, 200, 1_000).unwrap();
        assert_eq!(s.len(), 200);
        for t in 0..s.len() - 1 {
            assert!((s.naivety_gap[t] - (s.realized[t] - s.realized[t + 1])).abs() < 1e-12);
            assert_eq!(s.expected[t + 1], s.realized[t]);
            assert!(s.max_guaranteed_expected[t] <= s.best_possible_expected[t]);
        }
        assert!(profit_series(&u, -1.0, 10, 0).is_err());
    }
}
