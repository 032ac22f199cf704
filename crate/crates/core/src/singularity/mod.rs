//! Hopf degrees of polynomial foliation singularities and singularity plans.

pub mod algebra;
pub mod coeff;
pub mod models;
pub mod multiplicity;
pub mod oracle;
pub mod poly;
