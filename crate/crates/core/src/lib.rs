//! Proper continued fractions.
//!
//! An expansion `x = a_1/(b_1 + a_2/(b_2 + ...))` is *proper* when every
//! digit satisfies `b_i >= a_i >= 1`. Any choice of positive numerators
//! gives exactly one such expansion of a given `x`, so a real number has
//! uncountably many of them. This crate computes them exactly, classifies
//! which integer pairs can occur as convergents, and simulates the joint
//! map on the unit square that generates all of them at once.

pub mod candidates;
pub mod error;
pub mod exactreal;
pub mod expansion;
pub mod gauss2d;
pub mod numerators;
pub mod parse;
pub mod report;

pub use error::{Error, ParseError, Result};
pub use exactreal::ExactReal;
pub use expansion::{ConvergentSeq, PartialQuotient, PcfExpansion};
