//! Singular surfaces with bounded integral curvature.
//!
//! Polyhedral cone surfaces glued from Euclidean triangles, their curvature
//! measures and intrinsic distances; singular conformal metrics on planar
//! charts; metrics `e^{2u} h` built from Green potentials on the round sphere
//! and the flat torus; and the convergence experiments that tie them together.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conformal;
pub mod convergence;
pub mod curvature;
pub mod geodesics;
pub mod graph;
pub mod mesh;
pub mod potential;
pub mod quadrature;
pub mod sampling;
