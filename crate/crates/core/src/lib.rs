//! Stochastic-logic fuzzy controller.
//!
//! Membership functions are discrete probability mass functions over integer
//! code universes. The [`fuzzy`] module is the exact reference engine
//! (product inference, rule union, centre-of-gravity defuzzification).
//! [`rng`] models the shift-register generator and the adder chains that
//! synthesize triangular densities, [`sim`] runs the controller datapath
//! clock by clock, and [`analysis`] checks the stochastic estimate against
//! the exact engine.

pub mod analysis;
pub mod error;
pub mod fuzzy;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
