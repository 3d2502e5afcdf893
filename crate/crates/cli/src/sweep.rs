//! Parallel evaluation of `(ξ1, α, method)` grids.

use isocycle_core::{run_cycle, CycleSpec, Knob, Method, ModelParams, TruncationPolicy};
use rayon::prelude::*;

use crate::config::SweepConfig;
use crate::table::{SweepRow, SweepTable};

/// One cycle to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub varied: Knob,
    pub method: Method,
    pub xi1: f64,
    pub alpha: f64,
    pub fixed: ModelParams,
    pub policy: TruncationPolicy,
}

impl SweepPoint {
    pub fn spec(&self) -> CycleSpec {
        CycleSpec::new(self.varied, self.xi1, self.alpha, self.fixed, self.method).with_policy(self.policy)
    }

    pub fn evaluate(&self) -> SweepRow {
        SweepRow::from_outcome(self.varied, self.method, self.xi1, self.alpha, &run_cycle(&self.spec()))
    }
}

/// All grid points of a configuration, in nested (method, alpha, ξ1) order.
pub fn sweep_points(config: &SweepConfig) -> Vec<SweepPoint> {
    let xs = config.grid.points();
    let mut out = Vec::with_capacity(xs.len() * config.alphas.len() * 2);
    for method in config.methods.methods() {
        for &alpha in &config.alphas {
            for &xi1 in &xs {
                out.push(SweepPoint {
                    varied: config.varied,
                    method,
                    xi1,
                    alpha,
                    fixed: config.fixed,
                    policy: config.policy,
                });
            }
        }
    }
    out
}

/// Evaluates points in parallel and returns the sorted table. The result
/// does not depend on the order of `points`.
pub fn evaluate_points(points: &[SweepPoint]) -> SweepTable {
    let rows = points.par_iter().map(SweepPoint::evaluate).collect();
    let mut table = SweepTable { rows };
    table.sort();
    table
}

pub fn run_sweep(config: &SweepConfig) -> SweepTable {
    evaluate_points(&sweep_points(config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn row_count_is_grid_times_alphas_times_methods() {
        let c = parse_config("varied = g\nxi1_grid = 0.2, 0.8, 2\nalphas = 1.2, 1.5, 2\nmethod = approx\n").unwrap();
        let t = run_sweep(&c);
        assert_eq!(t.rows.len(), 2 * 3);
        assert!(t.rows.iter().all(|r| r.is_ok()));
        let both = SweepConfig { methods: crate::config::MethodSet::Both, ..c };
        assert_eq!(run_sweep(&both).rows.len(), 2 * 3 * 2);
    }

    #[test]
    fn failures_become_error_rows() {
        let c = parse_config("varied = g\nxi1_grid = 1.0, 3.5, 2\nalphas = 2\nmethod = exact\n").unwrap();
        let t = run_sweep(&c);
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[1].status, "error:expansion:degenerate");
        assert!(t.rows[1].w_total.is_none());
    }

    #[test]
    fn order_of_evaluation_does_not_matter() {
        let c = parse_config("varied = omega\nxi1_grid = 0.1, 1.5, 6\nxi1_spacing = reciprocal\nalphas = 0.8, 0.95\nmethod = approx\n").unwrap();
        let points = sweep_points(&c);
        let mut reversed = points.clone();
        reversed.reverse();
        let mut shuffled = points.clone();
        shuffled.rotate_left(5);
        shuffled.swap(0, 7);
        let a = evaluate_points(&points).to_csv().unwrap();
        assert_eq!(a, evaluate_points(&reversed).to_csv().unwrap());
        assert_eq!(a, evaluate_points(&shuffled).to_csv().unwrap());
    }
}
