//! Numerical checks on a ruled surface: immersion, singular set,
//! injectivity of the rulings, properness and the contact-plane
//! half-space property.

pub mod halfspace;
pub mod immersion;
pub mod properness;
mod report;
mod roots;
pub mod rulings;
pub mod singular;

pub use report::{analyze, AnalysisOptions, AnalysisReport};
