//! Solver and verifier for discrete Dirichlet boundary value problems of
//! order 2n posed in variational form.

pub mod difference;
pub mod energy;
pub mod expr;
pub mod format;
pub mod hypothesis;
pub mod sequence_space;
pub mod solvers;
