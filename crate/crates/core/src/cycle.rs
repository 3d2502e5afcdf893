//! The four-stroke isoenergetic cycle.
//!
//! ```text
//! 1 → 2   isoenergetic expansion    E0(ξ1) = E1(ξ2), ground → excited
//! 2 → 3   adiabatic                 ξ3 = α ξ2, stays excited
//! 3 → 4   isoenergetic compression  E1(ξ3) = E0(ξ4), excited → ground
//! 4 → 1   adiabatic                 stays ground
//! ```
//!
//! Along an isoenergetic stroke that starts in the pure state `a` at `ξk` the
//! occupation follows `p0 = (E1 - e)/(E1 - E0)` with `e = E_a(ξk)`, and the
//! energy taken from the bath is
//!
//! ```text
//! Q = ∫ (E0 dp0 + E1 dp1)
//!   = -E_a(ξk) ln[Δ(ξl)/Δ(ξk)] + ∫_{ξk}^{ξl} (E0 E1' - E1 E0')/(E1 - E0) dξ
//! ```
//!
//! with `Δ = E1 - E0`. Positive `Q` means energy enters the working
//! substance. The cycle reports `q_in = Q(1→2)`, `q_out = -Q(3→4)`,
//! `w_total = q_in - q_out` and `η = 1 - q_out/q_in`.
//!
//! Search directions: `E1` falls with `g` and with `Ω` (above `Ω ≈ ω/2`)
//! and rises with `ω`, so the expansion increases `g` and `Ω` and decreases
//! `ω`. The compression follows the rise of `E0`: down in `g` and `Ω`, up
//! in `ω`.

use core::fmt;

use crate::error::{Error, Result};
use crate::params::{Knob, Method, ModelParams, TruncationPolicy, DEGENERACY_THRESHOLD};
use crate::quadrature::{self, QuadratureConfig};
use crate::roots::{self, Bracketing, Side};
use crate::spectrum::Level;
use crate::substance::{Splitting, WorkingSubstance};

/// Quadrature nodes closer than this to a degeneracy are refused.
pub const REFUSAL_GAP: f64 = 10.0 * DEGENERACY_THRESHOLD;

/// Corner gap below which a cycle is flagged as near-degenerate.
pub const NEAR_DEGENERATE_GAP: f64 = 1e-6;

/// Default operating window for the two-level frequency, in units of `ω`.
pub const TLS_WINDOW: (f64, f64) = (0.5, 6.0);

/// Everything needed to run one cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSpec {
    pub varied: Knob,
    pub xi1: f64,
    /// `ξ3/ξ2`.
    pub alpha: f64,
    /// Held parameters; the varied component is ignored.
    pub fixed: ModelParams,
    pub method: Method,
    pub policy: TruncationPolicy,
}

impl CycleSpec {
    /// Spec with the default truncation policy. The energy unit follows the
    /// varied knob.
    pub fn new(varied: Knob, xi1: f64, alpha: f64, fixed: ModelParams, method: Method) -> Self {
        CycleSpec {
            varied,
            xi1,
            alpha,
            fixed: fixed.with_unit(varied.unit()),
            method,
            policy: TruncationPolicy::default(),
        }
    }

    pub fn with_policy(mut self, policy: TruncationPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.fixed.with(self.varied, self.xi1).validate()?;
        self.policy.validate()?;
        self.varied.check_alpha(self.alpha)?;
        if self.method == Method::Approximate && self.varied == Knob::Tls {
            return Err(Error::InvalidSpec(
                "the two-level frequency cycle is evaluated with exact levels only",
            ));
        }
        Ok(())
    }

    pub fn substance(&self) -> WorkingSubstance {
        WorkingSubstance::new(self.varied, self.fixed, self.method, self.policy)
    }

    /// Whether the closed-form exchange applies.
    pub fn has_closed_form(&self) -> bool {
        self.method == Method::Approximate && self.varied != Knob::Tls
    }
}

/// Isoenergetic stroke type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Starts in the ground state, ends in the excited state.
    Expansion,
    /// Starts in the excited state, ends in the ground state.
    Compression,
}

impl Direction {
    /// Level occupied at the start of the stroke.
    pub fn start_level(self) -> Level {
        match self {
            Direction::Expansion => Level::Ground,
            Direction::Compression => Level::Excited,
        }
    }
}

/// Cycle stage, used to label failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Spec,
    Expansion,
    Compression,
    Adiabat,
    ExchangeIn,
    ExchangeOut,
}

impl Stage {
    pub fn label(self) -> &'static str {
        match self {
            Stage::Spec => "spec",
            Stage::Expansion => "expansion",
            Stage::Compression => "compression",
            Stage::Adiabat => "adiabat",
            Stage::ExchangeIn => "exchange-in",
            Stage::ExchangeOut => "exchange-out",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A cycle failure with the stage that raised it.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{stage} stage: {source}")]
pub struct CycleError {
    pub stage: Stage,
    pub source: Error,
}

impl CycleError {
    pub fn at(stage: Stage) -> impl FnOnce(Error) -> CycleError {
        move |source| CycleError { stage, source }
    }
}

/// `q_in = Q(1→2)` and `q_out = -Q(3→4)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangePair {
    pub q_in: f64,
    pub q_out: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CycleFlags {
    /// `ξ3 > 2Ω` on a coupling cycle.
    pub dsc_threshold: bool,
    /// Some corner has a gap below [`NEAR_DEGENERATE_GAP`].
    pub near_degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleResult {
    pub spec: CycleSpec,
    /// `ξ1..ξ4`.
    pub xi: [f64; 4],
    pub q_in: f64,
    pub q_out: f64,
    pub w_total: f64,
    pub eta: f64,
    /// `(W 2→3, W 4→1)`.
    pub w_adiabatic: (f64, f64),
    pub flags: CycleFlags,
    pub closed_form: Option<ExchangePair>,
    pub quadrature: Option<ExchangePair>,
}

fn bracketing(knob: Knob) -> Bracketing {
    Bracketing {
        zero_allowed: knob.zero_allowed(),
        ..Bracketing::default()
    }
}

/// Finds `ξ` on `side` of `start` with `E_level(ξ) = target`, refusing to
/// search through a degeneracy.
fn solve_condition(
    s: &WorkingSubstance,
    start: f64,
    side: Side,
    level: Level,
    target: f64,
) -> Result<f64> {
    let f = |x: f64| -> Result<f64> {
        let l = s.levels(x)?;
        if l.e1 - l.e0 <= DEGENERACY_THRESHOLD {
            return Err(Error::Range {
                from: start,
                reason: "search entered a degenerate region before a root",
            });
        }
        Ok(l.get(level) - target)
    };
    let cfg = bracketing(s.knob);
    let bracket = roots::bracket_geometric(f, start, side, &cfg).map_err(|e| match e {
        Error::InvalidParameter { .. } => Error::Range {
            from: start,
            reason: "search left the parameter domain",
        },
        other => other,
    })?;
    roots::bisect(f, bracket)
}

fn check_gap(s: &WorkingSubstance, xi: f64) -> Result<(f64, f64)> {
    let l = s.levels(xi)?;
    let gap = l.e1 - l.e0;
    if gap <= DEGENERACY_THRESHOLD {
        return Err(Error::Degenerate { at: xi, gap });
    }
    Ok((l.e0, l.e1))
}

/// `ξ2` with `E1(ξ2) = E0(ξ1)`.
pub fn solve_expansion(spec: &CycleSpec) -> Result<f64> {
    spec.validate()?;
    let s = spec.substance();
    let (e0, _) = check_gap(&s, spec.xi1)?;
    let side = if spec.varied.expansion_increases() { Side::Up } else { Side::Down };
    solve_condition(&s, spec.xi1, side, Level::Excited, e0)
}

/// `ξ4` with `E0(ξ4) = E1(ξ3)`.
pub fn solve_compression(spec: &CycleSpec, xi3: f64) -> Result<f64> {
    spec.validate()?;
    let s = spec.substance();
    let (_, e1) = check_gap(&s, xi3)?;
    let side = if spec.varied.compression_increases() { Side::Up } else { Side::Down };
    solve_condition(&s, xi3, side, Level::Ground, e1)
}

/// Ground/excited occupation along an isoenergetic stroke.
#[derive(Debug, Clone, PartialEq)]
pub struct OccupationProfile {
    pub xi_samples: alloc::vec::Vec<f64>,
    pub p0: alloc::vec::Vec<f64>,
    pub e_const: f64,
}

impl OccupationProfile {
    pub fn p1(&self) -> alloc::vec::Vec<f64> {
        self.p0.iter().map(|p| 1.0 - p).collect()
    }
}

/// Samples `p0` on a uniform grid of `n_samples` points from `xi_k` to
/// `xi_l`.
pub fn occupation_profile(
    spec: &CycleSpec,
    xi_k: f64,
    xi_l: f64,
    direction: Direction,
    n_samples: usize,
) -> Result<OccupationProfile> {
    spec.validate()?;
    if n_samples < 2 {
        return Err(Error::InvalidSpec("an occupation profile needs at least two samples"));
    }
    let s = spec.substance();
    let e_const = s.level(xi_k, direction.start_level())?;
    let last = (n_samples - 1) as f64;
    let mut xi_samples = alloc::vec::Vec::with_capacity(n_samples);
    let mut p0 = alloc::vec::Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let x = if i + 1 == n_samples {
            xi_l
        } else {
            xi_k + (xi_l - xi_k) * (i as f64 / last)
        };
        let l = s.levels(x)?;
        let gap = l.e1 - l.e0;
        if gap <= REFUSAL_GAP {
            return Err(Error::Singular { at: x, gap });
        }
        xi_samples.push(x);
        p0.push(((l.e1 - e_const) / gap).clamp(0.0, 1.0));
    }
    Ok(OccupationProfile { xi_samples, p0, e_const })
}

/// Signed energy exchange of the stroke `xi_k → xi_l` by adaptive
/// quadrature.
pub fn energy_exchange_quadrature(
    spec: &CycleSpec,
    xi_k: f64,
    xi_l: f64,
    direction: Direction,
) -> Result<f64> {
    spec.validate()?;
    if xi_k == xi_l {
        return Ok(0.0);
    }
    let s = spec.substance();
    let split_at = |x: f64| -> Result<Splitting> {
        let sp = s.splitting(x)?;
        if sp.gap <= REFUSAL_GAP {
            return Err(Error::Singular { at: x, gap: sp.gap });
        }
        Ok(sp)
    };
    let gap_k = split_at(xi_k)?.gap;
    let gap_l = split_at(xi_l)?.gap;
    let e = s.level(xi_k, direction.start_level())?;
    // (E0 E1' - E1 E0')/(E1 - E0) = M Δ'/Δ - M'
    let integrand = |x: f64| -> Result<f64> {
        let sp = split_at(x)?;
        Ok(sp.mean * sp.d_gap / sp.gap - sp.d_mean)
    };
    let integral = quadrature::integrate(integrand, xi_k, xi_l, &QuadratureConfig::default())?;
    Ok(-e * libm::log(gap_l / gap_k) + integral.value)
}

/// Signed energy exchange from the polaron-level closed forms (coupling and
/// resonator cycles only).
pub fn energy_exchange_closed_form(
    spec: &CycleSpec,
    xi_k: f64,
    xi_l: f64,
    direction: Direction,
) -> Result<f64> {
    spec.validate()?;
    if !spec.has_closed_form() {
        return Err(Error::Unsupported(
            "closed forms exist for approximate coupling and resonator cycles only",
        ));
    }
    let s = spec.substance();
    let e = s.level(xi_k, direction.start_level())?;
    s.params_at(xi_l)?;
    let p = spec.fixed;
    Ok(match spec.varied {
        Knob::Coupling => {
            let w = p.omega;
            let d2 = xi_l * xi_l - xi_k * xi_k;
            let d4 = xi_l * xi_l * xi_l * xi_l - xi_k * xi_k * xi_k * xi_k;
            2.0 / (w * w) * d2 * e + (w * w * d2 + d4) / (w * w * w)
        }
        Knob::Resonator => {
            let g2 = p.g * p.g;
            let inv = |x: f64, k: i32| libm::pow(x, -k as f64);
            2.0 * g2 * (inv(xi_l, 2) - inv(xi_k, 2)) * e
                + 4.0 / 3.0 * g2 * g2 * (inv(xi_l, 3) - inv(xi_k, 3))
                + g2 * (inv(xi_l, 1) - inv(xi_k, 1))
        }
        Knob::Tls => unreachable!("rejected above"),
    })
}

/// `E_level(ξj) - E_level(ξi)`: work on an adiabat entered in the pure state
/// `level`.
pub fn adiabatic_work(spec: &CycleSpec, level: Level, xi_i: f64, xi_j: f64) -> Result<f64> {
    if xi_i == xi_j {
        return Ok(0.0);
    }
    let s = spec.substance();
    Ok(s.level(xi_j, level)? - s.level(xi_i, level)?)
}

/// Runs the four strokes and assembles work and efficiency.
///
/// The closed form is the primary exchange when it applies; the quadrature
/// is kept alongside it when it succeeds.
pub fn run_cycle(spec: &CycleSpec) -> core::result::Result<CycleResult, CycleError> {
    spec.validate().map_err(CycleError::at(Stage::Spec))?;
    let xi1 = spec.xi1;
    let xi2 = solve_expansion(spec).map_err(CycleError::at(Stage::Expansion))?;
    let xi3 = spec.alpha * xi2;
    let xi4 = solve_compression(spec, xi3).map_err(CycleError::at(Stage::Compression))?;

    let w23 = adiabatic_work(spec, Level::Excited, xi2, xi3).map_err(CycleError::at(Stage::Adiabat))?;
    let w41 = adiabatic_work(spec, Level::Ground, xi4, xi1).map_err(CycleError::at(Stage::Adiabat))?;

    let quad = || -> core::result::Result<ExchangePair, CycleError> {
        let q12 = energy_exchange_quadrature(spec, xi1, xi2, Direction::Expansion)
            .map_err(CycleError::at(Stage::ExchangeIn))?;
        let q34 = energy_exchange_quadrature(spec, xi3, xi4, Direction::Compression)
            .map_err(CycleError::at(Stage::ExchangeOut))?;
        Ok(ExchangePair { q_in: q12, q_out: -q34 })
    };
    let (closed_form, quadrature) = if spec.has_closed_form() {
        let q12 = energy_exchange_closed_form(spec, xi1, xi2, Direction::Expansion)
            .map_err(CycleError::at(Stage::ExchangeIn))?;
        let q34 = energy_exchange_closed_form(spec, xi3, xi4, Direction::Compression)
            .map_err(CycleError::at(Stage::ExchangeOut))?;
        (Some(ExchangePair { q_in: q12, q_out: -q34 }), quad().ok())
    } else {
        (None, Some(quad()?))
    };
    let primary = closed_form.or(quadrature).expect("one exchange route is always present");

    let s = spec.substance();
    let mut min_gap = f64::INFINITY;
    for x in [xi1, xi2, xi3, xi4] {
        let l = s.levels(x).map_err(CycleError::at(Stage::Adiabat))?;
        min_gap = min_gap.min(l.e1 - l.e0);
    }
    let flags = CycleFlags {
        dsc_threshold: spec.varied == Knob::Coupling && xi3 > 2.0 * spec.fixed.big_omega,
        near_degenerate: min_gap < NEAR_DEGENERATE_GAP,
    };
    let ExchangePair { q_in, q_out } = primary;
    let eta = if q_in > 0.0 { 1.0 - q_out / q_in } else { 0.0 };
    Ok(CycleResult {
        spec: *spec,
        xi: [xi1, xi2, xi3, xi4],
        q_in,
        q_out,
        w_total: q_in - q_out,
        eta,
        w_adiabatic: (w23, w41),
        flags,
        closed_form,
        quadrature,
    })
}

/// Admissible interval for `ξ1`; `upper` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingRange {
    pub lower: f64,
    pub upper: f64,
}

impl OperatingRange {
    pub fn is_empty(&self) -> bool {
        self.lower.partial_cmp(&self.upper) != Some(core::cmp::Ordering::Less)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x < self.upper
    }

    pub fn width(&self) -> f64 {
        (self.upper - self.lower).max(0.0)
    }
}

/// Interval of `ξ1` on which the start is non-degenerate and the expansion
/// condition has a root.
///
/// For the coupling the lower end is zero and the upper end is located by
/// bisection; for the resonator frequency the upper end is unbounded and the
/// lower end is located. The two-level frequency returns the fixed window
/// `(0.5, 6)·ω`.
pub fn range_probe(
    varied: Knob,
    fixed: &ModelParams,
    method: Method,
    policy: &TruncationPolicy,
) -> OperatingRange {
    if varied == Knob::Tls {
        return OperatingRange {
            lower: TLS_WINDOW.0 * fixed.omega,
            upper: TLS_WINDOW.1 * fixed.omega,
        };
    }
    let admissible = |x: f64| {
        let spec = CycleSpec::new(varied, x, 1.0, *fixed, method).with_policy(*policy);
        solve_expansion(&spec).is_ok()
    };
    let scale = fixed.g.max(fixed.omega).max(fixed.big_omega).max(f64::MIN_POSITIVE);
    let empty = |x: f64| OperatingRange { lower: x, upper: x };
    match varied {
        Knob::Coupling => {
            if !admissible(0.0) {
                return empty(0.0);
            }
            let mut good = 0.0;
            let mut bad = 0.5 * scale;
            let mut steps = 0;
            while admissible(bad) {
                good = bad;
                bad *= 1.5;
                steps += 1;
                if steps > 60 {
                    return OperatingRange { lower: 0.0, upper: f64::INFINITY };
                }
            }
            OperatingRange { lower: 0.0, upper: refine(&admissible, good, bad) }
        }
        Knob::Resonator => {
            let mut good = 4.0 * scale;
            if !admissible(good) {
                return empty(good);
            }
            let mut bad = good / 1.5;
            let mut steps = 0;
            while admissible(bad) {
                good = bad;
                bad /= 1.5;
                steps += 1;
                if steps > 200 {
                    return OperatingRange { lower: 0.0, upper: f64::INFINITY };
                }
            }
            OperatingRange { lower: refine(&admissible, good, bad), upper: f64::INFINITY }
        }
        Knob::Tls => unreachable!("handled above"),
    }
}

/// Bisects between an admissible and an inadmissible point; returns the
/// admissible end.
fn refine(admissible: &impl Fn(f64) -> bool, mut good: f64, mut bad: f64) -> f64 {
    for _ in 0..60 {
        let mid = 0.5 * (good + bad);
        if mid == good || mid == bad || (good - bad).abs() <= 1e-12 * good.abs().max(bad.abs()) {
            break;
        }
        if admissible(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}
