//! DC optimal power flow, its dual prices, and the equivalent DC circuit in
//! which locational marginal prices are node voltages.
//!
//! The pipeline is
//! [`network`] → [`dcopf::solve_opf`] → [`circuit::build_circuit`] →
//! [`circuit::solve_circuit`] / [`analysis`].
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix the common double-precision case.

pub mod analysis;
pub mod circuit;
pub mod dcopf;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod lp;
pub mod network;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Network64 = network::Network<f64>;
pub type Network32 = network::Network<f32>;
pub type LpProblem64 = lp::LpProblem<f64>;
pub type LpSolution64 = lp::LpSolution<f64>;





pub type DcopfSolution64 = dcopf::DcopfSolution<f64>;
pub type DcopfSolution32 = dcopf::DcopfSolution<f32>;
pub type EquivalentCircuit64 = circuit::EquivalentCircuit<f64>;
pub type EquivalentCircuit32 = circuit::EquivalentCircuit<f32>;
pub type CircuitSolution64 = circuit::CircuitSolution<f64>;
pub type LimitedInfo64 = analysis::LimitedInfo<f64>;
