//! Model parameters and numerical policy.

use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Gap (declared energy units) below which the two lowest levels are treated
/// as degenerate. Derivatives, isoenergetic conditions and energy-exchange
/// integrals refuse such points.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// The model parameter varied along a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Knob {
    /// Coupling strength `g`.
    Coupling,
    /// Resonator frequency `ω`.
    Resonator,
    /// Two-level-system frequency `Ω`.
    Tls,
}

impl Knob {
    pub const ALL: [Knob; 3] = [Knob::Coupling, Knob::Resonator, Knob::Tls];

    pub fn label(self) -> &'static str {
        match self {
            Knob::Coupling => "g",
            Knob::Resonator => "omega",
            Knob::Tls => "bigomega",
        }
    }

    /// Energy unit in which results for this knob are quoted.
    pub fn unit(self) -> EnergyUnit {
        match self {
            Knob::Coupling | Knob::Resonator => EnergyUnit::Tls,
            Knob::Tls => EnergyUnit::Resonator,
        }
    }

    /// Whether the first isoenergetic stroke moves the parameter upwards.
    ///
    /// `g` and `Ω` increase (the first excited level falls with both in the
    /// operating window), `ω` decreases.
    pub fn expansion_increases(self) -> bool {
        match self {
            Knob::Coupling | Knob::Tls => true,
            Knob::Resonator => false,
        }
    }

    /// Whether the return stroke (ground level rising to meet the conserved
    /// energy) moves the parameter upwards.
    pub fn compression_increases(self) -> bool {
        matches!(self, Knob::Resonator)
    }

    /// Whether zero is an admissible value.
    pub fn zero_allowed(self) -> bool {
        !matches!(self, Knob::Resonator)
    }

    /// Whether the adiabatic ratio `ξ3/ξ2` must exceed one for this knob.
    pub fn alpha_above_one(self) -> bool {
        matches!(self, Knob::Coupling)
    }

    /// Checks the adiabatic-ratio direction rule.
    pub fn check_alpha(self, alpha: f64) -> Result<()> {
        let ok = if self.alpha_above_one() {
            alpha.is_finite() && alpha >= 1.0
        } else {
            alpha.is_finite() && alpha > 0.0 && alpha <= 1.0
        };
        if ok {
            Ok(())
        } else if self.alpha_above_one() {
            Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "the coupling must increase across the adiabatic stroke (alpha >= 1)",
            })
        } else {
            Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "the frequency must decrease across the adiabatic stroke (0 < alpha <= 1)",
            })
        }
    }
}

impl fmt::Display for Knob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Knob {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "g" | "coupling" => Ok(Knob::Coupling),
            "omega" | "w" | "resonator" => Ok(Knob::Resonator),
            "bigomega" | "Omega" | "tls" => Ok(Knob::Tls),
            _ => Err(Error::InvalidSpec("unknown knob (expected g, omega or bigomega)")),
        }
    }
}

/// Declared base unit of energies (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EnergyUnit {
    /// Energies in units of the two-level frequency `Ω` (g- and ω-studies).
    #[default]
    Tls,
    /// Energies in units of the resonator frequency `ω` (Ω-studies).
    Resonator,
}

/// How the two lowest levels are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// Truncated-basis diagonalization with adaptive cutoff.
    ExactNumeric,
    /// Closed-form polaron levels.
    Approximate,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::ExactNumeric => "exact",
            Method::Approximate => "approx",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact-numeric" | "numeric" => Ok(Method::ExactNumeric),
            "approx" | "approximate" => Ok(Method::Approximate),
            _ => Err(Error::InvalidSpec("unknown method (expected exact or approx)")),
        }
    }
}

/// One Rabi Hamiltonian: `(g, ω, Ω)` with a declared energy unit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub g: f64,
    pub omega: f64,
    pub big_omega: f64,
    pub unit: EnergyUnit,
}

impl ModelParams {
    pub fn new(g: f64, omega: f64, big_omega: f64) -> Result<Self> {
        let p = ModelParams {
            g,
            omega,
            big_omega,
            unit: EnergyUnit::default(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_unit(mut self, unit: EnergyUnit) -> Self {
        self.unit = unit;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g.is_finite() && self.g >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "g",
                value: self.g,
                reason: "must be finite and non-negative",
            });
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::InvalidParameter {
                name: "omega",
                value: self.omega,
                reason: "must be finite and positive",
            });
        }
        if !(self.big_omega.is_finite() && self.big_omega >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "bigomega",
                value: self.big_omega,
                reason: "must be finite and non-negative",
            });
        }
        Ok(())
    }

    pub fn get(&self, knob: Knob) -> f64 {
        match knob {
            Knob::Coupling => self.g,
            Knob::Resonator => self.omega,
            Knob::Tls => self.big_omega,
        }
    }

    /// Copy with one parameter replaced (not validated).
    pub fn with(&self, knob: Knob, value: f64) -> Self {
        let mut p = *self;
        match knob {
            Knob::Coupling => p.g = value,
            Knob::Resonator => p.omega = value,
            Knob::Tls => p.big_omega = value,
        }
        p
    }
}

/// Adaptive boson-cutoff policy for the truncated diagonalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Initial cutoff (highest Fock number kept).
    pub n_max: usize,
    pub growth_step: usize,
    /// Absolute tolerance on each returned eigenvalue.
    pub tol: f64,
    pub hard_cap: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            n_max: 40,
            growth_step: 20,
            tol: 1e-10,
            hard_cap: 400,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.n_max < 1 {
            return Err(Error::InvalidPolicy("n_max must be at least 1"));
        }
        if self.growth_step < 1 {
            return Err(Error::InvalidPolicy("growth_step must be at least 1"));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidPolicy("tol must be positive"));
        }
        if self.hard_cap < self.n_max {
            return Err(Error::InvalidPolicy("hard_cap must be >= n_max"));
        }
        Ok(())
    }
}
