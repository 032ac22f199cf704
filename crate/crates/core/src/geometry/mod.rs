//! Numerical differential geometry on a single coordinate chart.

pub mod chart;
pub mod connection;
pub mod domega;
pub mod field;
pub mod grid;
pub mod rummler;

pub use chart::ChartField;
pub use connection::{
    christoffel, orthogonal_j_from_frame, AlmostComplex, ConstantJ, FrameJ, Scheme,
};
pub use domega::{convergence_study, verify_domega, verify_domega_points, DomegaOptions, LhsRoute};
pub use field::{Domain, ExprField, Field, FieldRegistry, FnField};
pub use grid::GridField;
pub use rummler::{rummler_check, RummlerOptions, RummlerReport};
