//! The two working levels as functions of the varied parameter.

use crate::error::Result;
use crate::params::{Knob, Method, ModelParams, TruncationPolicy};
use crate::spectrum::{self, Level, LevelPair};

/// `dE0/dξ` and `dE1/dξ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSlopes {
    pub d0: f64,
    pub d1: f64,
}

impl LevelSlopes {
    pub fn get(&self, level: Level) -> f64 {
        match level {
            Level::Ground => self.d0,
            Level::Excited => self.d1,
        }
    }
}

/// The working pair written as mean `M = (E0 + E1)/2` and splitting
/// `Δ = E1 - E0`, with slopes.
///
/// For the polaron levels `Δ` and `Δ'` come from their closed forms, which
/// keeps them accurate where `E0` and `E1` agree to many digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Splitting {
    pub mean: f64,
    pub gap: f64,
    pub d_mean: f64,
    pub d_gap: f64,
}

/// Rabi levels along one knob with the other two parameters held fixed.
///
/// Exact levels must converge under the policy; a non-converged cutoff is an
/// error here rather than a flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkingSubstance {
    pub knob: Knob,
    pub fixed: ModelParams,
    pub method: Method,
    pub policy: TruncationPolicy,
}

impl WorkingSubstance {
    pub fn new(knob: Knob, fixed: ModelParams, method: Method, policy: TruncationPolicy) -> Self {
        WorkingSubstance { knob, fixed, method, policy }
    }

    pub fn params_at(&self, xi: f64) -> Result<ModelParams> {
        let p = self.fixed.with(self.knob, xi);
        p.validate()?;
        Ok(p)
    }

    pub fn levels(&self, xi: f64) -> Result<LevelPair> {
        let p = self.params_at(xi)?;
        match self.method {
            Method::Approximate => spectrum::approx_levels(&p),
            Method::ExactNumeric => Ok(spectrum::converge(&p, &self.policy, false)?
                .require(&self.policy)?
                .pair),
        }
    }

    pub fn level(&self, xi: f64, level: Level) -> Result<f64> {
        self.levels(xi).map(|l| l.get(level))
    }

    /// Levels and their slopes from a single solve (Hellmann–Feynman for the
    /// exact method).
    pub fn levels_and_slopes(&self, xi: f64) -> Result<(LevelPair, LevelSlopes)> {
        let p = self.params_at(xi)?;
        match self.method {
            Method::Approximate => {
                let pair = spectrum::approx_levels(&p)?;
                let slopes = LevelSlopes {
                    d0: spectrum::approx_slope(&p, self.knob, Level::Ground),
                    d1: spectrum::approx_slope(&p, self.knob, Level::Excited),
                };
                Ok((pair, slopes))
            }
            Method::ExactNumeric => {
                let c = spectrum::converge(&p, &self.policy, true)?.require(&self.policy)?;
                let [s0, s1] = c.states.as_ref().expect("states requested");
                let slopes = LevelSlopes {
                    d0: s0.expectation_derivative(self.knob),
                    d1: s1.expectation_derivative(self.knob),
                };
                Ok((c.pair, slopes))
            }
        }
    }

    pub fn splitting(&self, xi: f64) -> Result<Splitting> {
        match self.method {
            Method::Approximate => {
                let p = self.params_at(xi)?;
                let (g, w, big) = (p.g, p.omega, p.big_omega);
                let x = libm::exp(-2.0 * g * g / (w * w));
                let b = 0.5 * big * x;
                let (d_mean, d_b) = match self.knob {
                    Knob::Coupling => (-2.0 * g / w, -4.0 * g / (w * w) * b),
                    Knob::Resonator => (g * g / (w * w), 4.0 * g * g / (w * w * w) * b),
                    Knob::Tls => (0.0, 0.5 * x),
                };
                Ok(Splitting { mean: -g * g / w, gap: 2.0 * b, d_mean, d_gap: 2.0 * d_b })
            }
            Method::ExactNumeric => {
                let (l, d) = self.levels_and_slopes(xi)?;
                Ok(Splitting {
                    mean: 0.5 * (l.e0 + l.e1),
                    gap: l.e1 - l.e0,
                    d_mean: 0.5 * (d.d0 + d.d1),
                    d_gap: d.d1 - d.d0,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substance_tracks_the_knob() {
        let fixed = ModelParams::new(0.0, 1.0, 1.0).unwrap();
        let s = WorkingSubstance::new(Knob::Coupling, fixed, Method::Approximate, TruncationPolicy::default());
        let l = s.levels(1.0).unwrap();
        assert!((l.e0 - (-1.0 - 0.5 * libm::exp(-2.0))).abs() < 1e-15);
        assert!(s.levels(-1.0).is_err());
        let r = WorkingSubstance { knob: Knob::Resonator, ..s };
        assert!(r.levels(0.0).is_err());
    }

    #[test]
    fn splitting_agrees_with_levels() {
        let fixed = ModelParams::new(0.9, 1.1, 0.8).unwrap();
        for method in [Method::Approximate, Method::ExactNumeric] {
            for knob in Knob::ALL {
                let s = WorkingSubstance::new(knob, fixed, method, TruncationPolicy::default());
                let x = fixed.get(knob);
                let (l, d) = s.levels_and_slopes(x).unwrap();
                let sp = s.splitting(x).unwrap();
                assert!((sp.gap - (l.e1 - l.e0)).abs() < 1e-13);
                assert!((sp.mean - 0.5 * (l.e0 + l.e1)).abs() < 1e-13);
                assert!((sp.d_gap - (d.d1 - d.d0)).abs() < 1e-12);
                assert!((sp.d_mean - 0.5 * (d.d0 + d.d1)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_slopes_match_spectrum_derivative() {
        let fixed = ModelParams::new(0.7, 1.0, 1.0).unwrap();
        let policy = TruncationPolicy::default();
        for knob in Knob::ALL {
            let s = WorkingSubstance::new(knob, fixed, Method::ExactNumeric, policy);
            let (_, slopes) = s.levels_and_slopes(fixed.get(knob)).unwrap();
            for level in [Level::Ground, Level::Excited] {
                let d = spectrum::level_derivative(&fixed, knob, level, Method::ExactNumeric, &policy).unwrap();
                assert_eq!(slopes.get(level), d);
            }
        }
    }
}
