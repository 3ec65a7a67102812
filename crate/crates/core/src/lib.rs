//! Inequality and concentration statistics for heavy-tailed data.
//!
//! The crate centers on two normalized dispersion measures of a sample:
//! the Gini index (half the mean absolute difference over the mean) and
//! the variance normalized by the second moment, `I = var(X)/mean(X²)`,
//! together with the web of quantities they convert into (Herfindahl,
//! CV², generalized entropy, Rényi entropy). Around that core sit seeded
//! samplers with closed-form index values for the reference families, a
//! subgroup decomposition of E₂, CSV/JSON ingestion and reporting, and a
//! Monte Carlo lab that measures how the two estimators behave under
//! heavy tails (stability, convergence rates, the one-big-jump effect).
//!
//! All operations are pure functions of their inputs; samplers take a
//! seed and return a value, so everything here is safe to call from
//! multiple threads and every result is reproducible.

pub mod decomposition;
pub mod distributions;
pub mod error;
pub mod indices;
pub mod io;
pub mod lab;
pub mod numeric;
pub mod report;
pub mod sample;
pub mod seeding;
pub mod sensitivity;

pub use error::{Error, Result};
pub use sample::Sample;
