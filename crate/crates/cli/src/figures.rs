//! Preset datasets for the standard figure set.
//!
//! Point counts and endpoints are reconstructions over the plotted ranges:
//! the coupling figures use `g1 ∈ [0.05, 1.45]`, the resonator figures a
//! grid uniform in `1/ω1 ∈ [0.05, 1.95]`, the two-level-frequency figures a
//! grid uniform in `1/Ω1 ∈ [0.2, 1.95]` (inside the `0.5 < Ω1 < 6` window).

use std::fmt;
use std::str::FromStr;

use isocycle_core::{approx_levels, exact_levels, Knob, Method, ModelParams, TruncationPolicy};

use crate::config::{Grid, MethodSet, OutputFormat, SweepConfig};
use crate::sweep::run_sweep;
use crate::table::{SpectrumRow, SpectrumTable, SweepTable, TableError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    Fig1,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
    Fig10,
}

impl FigureId {
    pub const ALL: [FigureId; 9] = [
        FigureId::Fig1,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig9,
        FigureId::Fig10,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig9 => "fig9",
            FigureId::Fig10 => "fig10",
        }
    }

    /// Sweep preset behind a cycle figure; `None` for the spectrum figure.
    pub fn sweep_config(self) -> Option<SweepConfig> {
        let unit = ModelParams::new(1.0, 1.0, 1.0).expect("valid");
        let (varied, grid, alphas, methods) = match self {
            FigureId::Fig1 => return None,
            FigureId::Fig3 | FigureId::Fig4 | FigureId::Fig5 => (
                Knob::Coupling,
                Grid::linear(0.05, 1.45, 50),
                vec![1.2, 1.4, 1.6, 1.8, 2.0],
                MethodSet::Both,
            ),
            FigureId::Fig6 | FigureId::Fig7 | FigureId::Fig8 => (
                Knob::Resonator,
                Grid::reciprocal(0.05, 1.95, 39),
                vec![0.75, 0.8, 0.85, 0.9, 0.95],
                MethodSet::Both,
            ),
            FigureId::Fig9 | FigureId::Fig10 => (
                Knob::Tls,
                Grid::reciprocal(0.2, 1.95, 36),
                vec![0.75, 0.8, 0.85, 0.9, 0.95],
                MethodSet::Exact,
            ),
        };
        Some(SweepConfig {
            varied,
            grid,
            alphas,
            fixed: unit.with_unit(varied.unit()),
            methods,
            policy: TruncationPolicy::default(),
            output: None,
            format: OutputFormat::Csv,
        })
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| format!("unknown figure `{s}` (expected fig1 or fig3..fig10)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FigureData {
    Spectrum(SpectrumTable),
    Cycle(SweepTable),
}

impl FigureData {
    pub fn to_csv(&self) -> Result<String, TableError> {
        match self {
            FigureData::Spectrum(t) => t.to_csv(),
            FigureData::Cycle(t) => t.to_csv(),
        }
    }

    pub fn to_json(&self) -> Result<String, TableError> {
        match self {
            FigureData::Spectrum(t) => t.to_json(),
            FigureData::Cycle(t) => t.to_json(),
        }
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

/// Two lowest levels vs `g` (`ω = Ω = 1`), vs `ω` (`g = Ω = 1`) and vs `Ω`
/// (`g = ω = 1`), exact and approximate.
pub fn spectrum_table() -> SpectrumTable {
    let policy = TruncationPolicy::default();
    let unit = ModelParams::new(1.0, 1.0, 1.0).expect("valid");
    let blocks = [
        ("a", Knob::Coupling, linspace(0.0, 3.0, 61)),
        ("b", Knob::Resonator, linspace(0.2, 3.0, 57)),
        ("c", Knob::Tls, linspace(0.0, 6.0, 61)),
    ];
    let mut rows = Vec::new();
    for (block, knob, xs) in blocks {
        for method in [Method::ExactNumeric, Method::Approximate] {
            for &x in &xs {
                let p = unit.with(knob, x).with_unit(knob.unit());
                let pair = match method {
                    Method::ExactNumeric => exact_levels(&p, &policy),
                    Method::Approximate => approx_levels(&p),
                }
                .expect("preset parameters are valid");
                rows.push(SpectrumRow::new(block, knob, x, &pair));
            }
        }
    }
    SpectrumTable { rows }
}

pub fn figure_dataset(id: FigureId) -> FigureData {
    match id.sweep_config() {
        None => FigureData::Spectrum(spectrum_table()),
        Some(c) => FigureData::Cycle(run_sweep(&c)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_parse() {
        for id in FigureId::ALL {
            assert_eq!(id.name().parse::<FigureId>().unwrap(), id);
        }
        assert!("fig2".parse::<FigureId>().is_err());
    }

    #[test]
    fn presets_validate() {
        for id in FigureId::ALL {
            if let Some(c) = id.sweep_config() {
                c.validate().unwrap();
            }
        }
        let tls = FigureId::Fig9.sweep_config().unwrap();
        assert_eq!(tls.methods, MethodSet::Exact);
        let pts = tls.grid.points();
        assert!(pts.iter().all(|&x| x > 0.5 && x < 6.0));
    }

    #[test]
    fn spectrum_has_three_blocks_and_both_methods() {
        let t = spectrum_table();
        for block in ["a", "b", "c"] {
            let rows: Vec<_> = t.rows.iter().filter(|r| r.block == block).collect();
            assert!(rows.iter().any(|r| r.method == "exact"));
            assert!(rows.iter().any(|r| r.method == "approx"));
        }
        assert!(t.rows.iter().all(|r| r.converged && r.e0 <= r.e1));
    }
}
