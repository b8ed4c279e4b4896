//! Worst-case best-reply dynamics of a symmetric Cournot duopoly.
//!
//! Firms that are unsure about the slope of demand and about product
//! substitutability maximize their worst-case profit over two parameter
//! realizations. Their best reply is a piecewise-linear, non-monotone map
//! `f`, and the Cournot adjustment `T(x, y) = (f(y), f(x))` inherits its
//! dynamics: stable equilibria, border-collision and degenerate flip
//! bifurcations, and cyclic chaotic attractors with disconnected basins.
//!
//! Modules follow the analysis pipeline:
//!
//! - [`model`]: uncertainty set, best reply, prices and payoffs
//! - [`dynamics1d`]: fixed points, regimes, two-cycles, chaotic bands, Lyapunov exponents
//! - [`dynamics2d`]: the map `T`, lifted cycles, attractor catalog, orbit classification
//! - [`basins`]: basins of attraction on a grid of initial conditions
//! - [`sweep`]: bifurcation diagrams and regime maps
//! - [`profit`]: profit-uncertainty time series
//! - [`output`]: CSV and PPM writers
//! - [`cli`]: configuration and command dispatch behind the `duopoly` binary

pub mod dynamics1d;
pub mod basins;
pub mod cli;
pub mod dynamics2d;
pub mod error;
pub mod model;
pub mod output;
pub mod profit;
pub mod sweep;

pub use error::{Error, Result};
