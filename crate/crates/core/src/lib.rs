//! Isoenergetic cycle with a quantum Rabi working substance.
//!
//! The working substance is the two lowest levels of
//!
//! ```text
//! H = (Ω/2) σz + ω a†a + g σx (a† + a)        (ħ = 1)
//! ```
//!
//! Note the `Ω/2` prefactor on the two-level term: it makes the bare (g = 0)
//! splitting equal to `Ω`, so the truncated diagonalization and the
//! closed-form polaron levels
//!
//! ```text
//! E0 = -g²/ω - (Ω/2) exp(-2g²/ω²)
//! E1 = -g²/ω + (Ω/2) exp(-2g²/ω²)
//! ```
//!
//! coincide in the decoupled limit.
//!
//! The crate is `no_std` (with `alloc`) when the default `std` feature is
//! disabled. Everything here is a pure function of its inputs, so callers can
//! evaluate parameter points concurrently.
//!
//! Layout:
//! - [`params`]: model parameters, knobs, truncation policy.
//! - [`tridiag`]: symmetric tridiagonal eigensolver (Sturm bisection plus
//!   inverse iteration).
//! - [`spectrum`]: parity-sector Hamiltonian, exact and approximate levels,
//!   Hellmann–Feynman derivatives.
//! - [`roots`], [`quadrature`]: bracketing bisection and adaptive
//!   Gauss–Kronrod integration.
//! - [`substance`]: levels as functions of the varied parameter.
//! - [`cycle`]: isoenergetic conditions, energy exchange, work, efficiency.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod cycle;
pub mod error;
pub mod params;
pub mod quadrature;
pub mod roots;
pub mod spectrum;
pub mod substance;
pub mod tridiag;

pub use cycle::{
    adiabatic_work, energy_exchange_closed_form, energy_exchange_quadrature, occupation_profile,
    range_probe, run_cycle, solve_compression, solve_expansion, CycleError, CycleFlags,
    CycleResult, CycleSpec, Direction, ExchangePair, OccupationProfile, OperatingRange, Stage,
};
pub use error::{Error, Result};
pub use params::{
    EnergyUnit, Knob, Method, ModelParams, TruncationPolicy, DEGENERACY_THRESHOLD,
};
pub use spectrum::{
    approx_levels, build_hamiltonian, eigen_system, exact_levels, level_derivative, level_gap,
    EigenSystem, Eigenstate, Level, LevelPair, Parity, ParitySector, SectorPair,
};
pub use substance::{LevelSlopes, Splitting, WorkingSubstance};
