//! Rabi spectrum: parity-sector Hamiltonian, converged exact levels,
//! polaron levels, and level derivatives.
//!
//! Parity `Π = σz (-1)^{a†a}` commutes with `H`, and each sector is a chain
//! in which the coupling flips the two-level state while moving one photon:
//!
//! ```text
//! Π = +1:  |e,0⟩, |g,1⟩, |e,2⟩, |g,3⟩, ...
//! Π = -1:  |g,0⟩, |e,1⟩, |g,2⟩, |e,3⟩, ...
//! ```
//!
//! so a cutoff `n_max` gives two symmetric tridiagonal blocks of dimension
//! `n_max + 1` with diagonal `ωk ± Ω/2` and off-diagonal `g √(k+1)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::params::{Knob, Method, ModelParams, TruncationPolicy, DEGENERACY_THRESHOLD};
use crate::tridiag::SymTridiagonal;

/// Parity eigenvalue of a sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn value(self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    /// `σz` eigenvalue of the chain element carrying `k` photons.
    pub fn tls_sign(self, k: usize) -> f64 {
        let even_k = k.is_multiple_of(2);
        match (self, even_k) {
            (Parity::Even, true) | (Parity::Odd, false) => 1.0,
            _ => -1.0,
        }
    }
}

/// Which of the two working levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    Ground,
    Excited,
}

impl Level {
    pub fn index(self) -> usize {
        match self {
            Level::Ground => 0,
            Level::Excited => 1,
        }
    }

    pub fn from_index(i: usize) -> Option<Level> {
        match i {
            0 => Some(Level::Ground),
            1 => Some(Level::Excited),
            _ => None,
        }
    }

    pub fn other(self) -> Level {
        match self {
            Level::Ground => Level::Excited,
            Level::Excited => Level::Ground,
        }
    }
}

/// One parity block of the truncated Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct ParitySector {
    pub parity: Parity,
    /// Diagonal, indexed by photon number.
    pub diag: Vec<f64>,
    /// `off[k]` couples photon numbers `k` and `k + 1`.
    pub off: Vec<f64>,
}

impl ParitySector {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn matrix(&self) -> SymTridiagonal<'_> {
        SymTridiagonal::new(&self.diag, &self.off)
    }

    /// Dense row-major copy of the block.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim();
        let mut m = alloc::vec![0.0; n * n];
        for i in 0..n {
            m[i * n + i] = self.diag[i];
            if i + 1 < n {
                m[i * n + i + 1] = self.off[i];
                m[(i + 1) * n + i] = self.off[i];
            }
        }
        m
    }
}

/// Both parity blocks at a common cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorPair {
    pub n_max: usize,
    pub even: ParitySector,
    pub odd: ParitySector,
}

impl SectorPair {
    pub fn sector(&self, parity: Parity) -> &ParitySector {
        match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }
}

fn checked_dim(n_max: usize) -> Result<usize> {
    let limit = isize::MAX as usize / core::mem::size_of::<f64>();
    n_max
        .checked_add(1)
        .filter(|d| d.checked_mul(2).is_some_and(|full| full <= limit))
        .ok_or(Error::Sizing(n_max))
}

/// Truncated Hamiltonian split into its two parity blocks (photon numbers
/// `0..=n_max` in each).
pub fn build_hamiltonian(params: &ModelParams, n_max: usize) -> Result<SectorPair> {
    params.validate()?;
    if n_max < 1 {
        return Err(Error::InvalidPolicy("n_max must be at least 1"));
    }
    let dim = checked_dim(n_max)?;
    let block = |parity: Parity| {
        let diag = (0..dim)
            .map(|k| params.omega * k as f64 + 0.5 * params.big_omega * parity.tls_sign(k))
            .collect();
        let off = (1..dim).map(|k| params.g * libm::sqrt(k as f64)).collect();
        ParitySector { parity, diag, off }
    };
    Ok(SectorPair {
        n_max,
        even: block(Parity::Even),
        odd: block(Parity::Odd),
    })
}

/// The two lowest levels with provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelPair {
    pub e0: f64,
    pub e1: f64,
    pub method: Method,
    /// Boson cutoff used (0 for closed-form levels).
    pub n_used: usize,
    pub converged: bool,
}

impl LevelPair {
    pub fn get(&self, level: Level) -> f64 {
        match level {
            Level::Ground => self.e0,
            Level::Excited => self.e1,
        }
    }
}

/// `e1 - e0`, never negative.
pub fn level_gap(pair: &LevelPair) -> f64 {
    (pair.e1 - pair.e0).max(0.0)
}

/// An eigenvector stored in its parity block.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenstate {
    pub energy: f64,
    pub parity: Parity,
    /// Amplitudes indexed by photon number within the block.
    pub amplitudes: Vec<f64>,
}

impl Eigenstate {
    /// Amplitudes in the product basis `TLS ⊗ Fock`, index `2n + t` with
    /// `t = 0` for the upper two-level state and `t = 1` for the lower.
    pub fn product_basis(&self) -> Vec<f64> {
        let mut v = alloc::vec![0.0; 2 * self.amplitudes.len()];
        for (k, &a) in self.amplitudes.iter().enumerate() {
            let t = if self.parity.tls_sign(k) > 0.0 { 0 } else { 1 };
            v[2 * k + t] = a;
        }
        v
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.amplitudes.iter().map(|a| a * a).sum())
    }

    /// `⟨Π⟩` evaluated in the product basis.
    pub fn parity_expectation(&self) -> f64 {
        self.product_basis()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let n = i / 2;
                let sz = if i % 2 == 0 { 1.0 } else { -1.0 };
                let boson = if n % 2 == 0 { 1.0 } else { -1.0 };
                c * c * sz * boson
            })
            .sum()
    }

    /// `⟨∂H/∂ξ⟩` (Hellmann–Feynman).
    pub fn expectation_derivative(&self, knob: Knob) -> f64 {
        let v = &self.amplitudes;
        match knob {
            Knob::Coupling => {
                2.0 * v
                    .windows(2)
                    .enumerate()
                    .map(|(k, w)| w[0] * w[1] * libm::sqrt((k + 1) as f64))
                    .sum::<f64>()
            }
            Knob::Resonator => v.iter().enumerate().map(|(k, a)| k as f64 * a * a).sum(),
            Knob::Tls => v
                .iter()
                .enumerate()
                .map(|(k, a)| 0.5 * self.parity.tls_sign(k) * a * a)
                .sum(),
        }
    }
}

/// Lowest levels of the truncated Hamiltonian at one cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub params: ModelParams,
    pub n_max: usize,
    /// Ascending.
    pub energies: Vec<f64>,
    pub states: Vec<Eigenstate>,
    pub parity_labels: Vec<i8>,
}

/// `(energy, parity, index within block)` for the `count` lowest levels of
/// the direct sum, ascending. Ties keep the even block first.
fn lowest_across(sectors: &SectorPair, count: usize) -> Vec<(f64, Parity, usize)> {
    let per_block = count.min(sectors.n_max + 1);
    let mut all: Vec<(f64, Parity, usize)> = Vec::with_capacity(2 * per_block);
    for parity in [Parity::Even, Parity::Odd] {
        let m = sectors.sector(parity).matrix();
        for k in 0..per_block {
            all.push((m.eigenvalue(k), parity, k));
        }
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    all.truncate(count);
    all
}

/// Two lowest levels with only the eigenvalues that are actually needed.
fn lowest_two(sectors: &SectorPair) -> [(f64, Parity, usize); 2] {
    let even = sectors.even.matrix();
    let odd = sectors.odd.matrix();
    let (e_even, e_odd) = (even.eigenvalue(0), odd.eigenvalue(0));
    let (low, low_m, high_p, high_e) = if e_even <= e_odd {
        ((e_even, Parity::Even), even, Parity::Odd, e_odd)
    } else {
        ((e_odd, Parity::Odd), odd, Parity::Even, e_even)
    };
    // Does the ground block hold a second level below the other block's
    // lowest?
    if low_m.dim() > 1 && low_m.count_below(high_e) >= 2 {
        let second = low_m.eigenvalue(1);
        if second < high_e {
            return [(low.0, low.1, 0), (second, low.1, 1)];
        }
    }
    [(low.0, low.1, 0), (high_e, high_p, 0)]
}

fn state_for(sectors: &SectorPair, energy: f64, parity: Parity) -> Eigenstate {
    Eigenstate {
        energy,
        parity,
        amplitudes: sectors.sector(parity).matrix().eigenvector(energy),
    }
}

/// The `k` lowest eigenpairs at a fixed cutoff.
pub fn eigen_system(params: &ModelParams, n_max: usize, k: usize) -> Result<EigenSystem> {
    let sectors = build_hamiltonian(params, n_max)?;
    let levels = lowest_across(&sectors, k);
    let states: Vec<Eigenstate> = levels
        .iter()
        .map(|&(e, p, _)| state_for(&sectors, e, p))
        .collect();
    Ok(EigenSystem {
        params: *params,
        n_max,
        energies: levels.iter().map(|l| l.0).collect(),
        parity_labels: levels.iter().map(|l| l.1.value()).collect(),
        states,
    })
}

/// Result of the adaptive-cutoff loop.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Converged {
    pub pair: LevelPair,
    pub last_change: f64,
    pub states: Option<[Eigenstate; 2]>,
}

impl Converged {
    pub fn require(self, policy: &TruncationPolicy) -> Result<Self> {
        if self.pair.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                hard_cap: policy.hard_cap,
                last_change: self.last_change,
            })
        }
    }
}

pub(crate) fn converge(
    params: &ModelParams,
    policy: &TruncationPolicy,
    with_states: bool,
) -> Result<Converged> {
    params.validate()?;
    policy.validate()?;
    let mut n = policy.n_max;
    let mut sectors = build_hamiltonian(params, n)?;
    let mut levels = lowest_two(&sectors);
    loop {
        let next = n.saturating_add(policy.growth_step).min(policy.hard_cap);
        if next == n {
            return Ok(finish(&sectors, levels, n, false, f64::INFINITY, with_states));
        }
        let next_sectors = build_hamiltonian(params, next)?;
        let next_levels = lowest_two(&next_sectors);
        let change = (next_levels[0].0 - levels[0].0)
            .abs()
            .max((next_levels[1].0 - levels[1].0).abs());
        if change < policy.tol {
            return Ok(finish(&next_sectors, next_levels, next, true, change, with_states));
        }
        if next == policy.hard_cap {
            return Ok(finish(&next_sectors, next_levels, next, false, change, with_states));
        }
        n = next;
        sectors = next_sectors;
        levels = next_levels;
    }
}

fn finish(
    sectors: &SectorPair,
    levels: [(f64, Parity, usize); 2],
    n_used: usize,
    converged: bool,
    last_change: f64,
    with_states: bool,
) -> Converged {
    let states = with_states.then(|| {
        [
            state_for(sectors, levels[0].0, levels[0].1),
            state_for(sectors, levels[1].0, levels[1].1),
        ]
    });
    Converged {
        pair: LevelPair {
            e0: levels[0].0,
            e1: levels[1].0,
            method: Method::ExactNumeric,
            n_used,
            converged,
        },
        last_change,
        states,
    }
}

/// Two lowest levels by truncated diagonalization with an adaptive cutoff.
///
/// The cutoff grows by `growth_step` until neither level moves by more than
/// `tol`; the energies at the larger cutoff are returned. Reaching
/// `hard_cap` first yields `converged = false`.
pub fn exact_levels(params: &ModelParams, policy: &TruncationPolicy) -> Result<LevelPair> {
    converge(params, policy, false).map(|c| c.pair)
}

/// Closed-form polaron levels.
pub fn approx_levels(params: &ModelParams) -> Result<LevelPair> {
    params.validate()?;
    let (e0, e1) = approx_raw(params);
    Ok(LevelPair {
        e0,
        e1,
        method: Method::Approximate,
        n_used: 0,
        converged: true,
    })
}

pub(crate) fn approx_raw(p: &ModelParams) -> (f64, f64) {
    let shift = -p.g * p.g / p.omega;
    let half = 0.5 * p.big_omega * libm::exp(-2.0 * p.g * p.g / (p.omega * p.omega));
    (shift - half, shift + half)
}

pub(crate) fn approx_slope(p: &ModelParams, knob: Knob, level: Level) -> f64 {
    let (g, w, big) = (p.g, p.omega, p.big_omega);
    let x = libm::exp(-2.0 * g * g / (w * w));
    // +1 for the excited level, -1 for the ground level.
    let s = match level {
        Level::Ground => -1.0,
        Level::Excited => 1.0,
    };
    match knob {
        Knob::Coupling => -2.0 * g / w - s * 2.0 * big * g * x / (w * w),
        Knob::Resonator => g * g / (w * w) + s * 2.0 * big * g * g * x / (w * w * w),
        Knob::Tls => s * 0.5 * x,
    }
}

/// `dE_level/dξ`: analytic for the polaron levels, Hellmann–Feynman for the
/// exact levels.
///
/// At an exact-method degeneracy the value is returned only when both
/// partner states give the same slope; otherwise the derivative is
/// undefined.
pub fn level_derivative(
    params: &ModelParams,
    knob: Knob,
    level: Level,
    method: Method,
    policy: &TruncationPolicy,
) -> Result<f64> {
    match method {
        Method::Approximate => {
            params.validate()?;
            Ok(approx_slope(params, knob, level))
        }
        Method::ExactNumeric => {
            let c = converge(params, policy, true)?.require(policy)?;
            let states = c.states.as_ref().expect("states requested");
            let slopes = (
                states[0].expectation_derivative(knob),
                states[1].expectation_derivative(knob),
            );
            let gap = level_gap(&c.pair);
            if gap > DEGENERACY_THRESHOLD {
                return Ok(match level {
                    Level::Ground => slopes.0,
                    Level::Excited => slopes.1,
                });
            }
            if (slopes.0 - slopes.1).abs() <= DEGENERACY_THRESHOLD {
                Ok(0.5 * (slopes.0 + slopes.1))
            } else {
                Err(Error::DerivativeUndefined { gap, slopes })
            }
        }
    }
}
