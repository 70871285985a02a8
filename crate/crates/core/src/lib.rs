//! Simulation and numerical verification toolkit for time-changed fractional
//! Ornstein-Uhlenbeck processes.
//!
//! The crate provides:
//! - shared numerical kernels (`numerics`): quadrature, special functions,
//!   one-sided stable laws, numerical Laplace inversion, seeded RNG streams;
//! - Bernstein functions / subordinator Laplace exponents (`bernstein`);
//! - subordinator path simulation and inverse-subordinator densities
//!   (`subordinator`);
//! - fractional Brownian motion and the fractional Ornstein-Uhlenbeck process
//!   with exact variance, covariance, density and moment evaluators (`fou`);
//! - the time-changed process, its subordinated density and moments (`tcfou`);
//! - convergence diagnostics: sup-norm tracks, Kolmogorov-Smirnov tests,
//!   Skorohod J1 distances, Holder seminorms (`convergence`);
//! - the nonlocal Fokker-Planck operator toolkit and mild-solution residual
//!   checks (`fpe`).

pub mod bernstein;
pub mod convergence;
pub mod error;
pub mod fou;
pub mod fpe;
pub mod numerics;
pub mod report;
pub mod subordinator;
pub mod tcfou;

pub use error::{Error, Result};
pub use numerics::{Grid, RngStream};
