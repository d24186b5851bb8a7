//! Ruled p-minimal surfaces in the first Heisenberg group.
//!
//! A surface is described by four profile functions θ, α, β, γ of the
//! ruling parameter `t`; every ruling `s ↦ X(s, t)` is a Legendrian
//! straight line. The crate evaluates such surfaces, decides immersion,
//! singular points, injectivity and properness, classifies helicoid-type
//! families into their canonical graph forms, and verifies p-minimality
//! independently through the contact form and the graph equation.

pub mod analyzer;
pub mod classifier;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod mesh;
pub mod profile;
pub mod surface;
pub mod tolerances;
pub mod verifier;

pub use error::{Error, Result};
