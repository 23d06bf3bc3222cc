//! Exact and numerical tools for quantum cohomology of hyperplane sections of
//! manifolds with small dual.

pub mod betti;
pub mod catalog;
pub mod exact_rings;
pub mod graded_qh;
pub mod linalg;
pub mod report;
pub mod smalldual;
pub mod subcrit;
