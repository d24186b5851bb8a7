//! Independent checks that a surface is p-minimal: the Legendrian
//! identity along rulings, the divergence-form equation on graph
//! patches, and end-to-end checks on the bundled example surfaces.

pub mod golden;
pub mod legendrian;
pub mod pde;

pub use golden::{golden_examples, GoldenProfiles, GoldenReport};
pub use legendrian::{legendrian_residual, legendrian_residual_with};
pub use pde::{pde_residual, ClosedForm, GraphPatch, HeightField, HeightSample, ImplicitTiltedGraph, ResidualReport, VerticalGraph};
