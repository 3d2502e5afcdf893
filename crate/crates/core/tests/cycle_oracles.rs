use isocycle_core::{
    adiabatic_work, approx_levels, energy_exchange_closed_form, energy_exchange_quadrature,
    occupation_profile, range_probe, run_cycle, solve_compression, solve_expansion, CycleSpec,
    Direction, Error, Knob, Level, Method, ModelParams, Stage, TruncationPolicy,
};
use proptest::prelude::*;

fn unit() -> ModelParams {
    ModelParams::new(1.0, 1.0, 1.0).unwrap()
}

fn spec(knob: Knob, xi1: f64, alpha: f64, method: Method) -> CycleSpec {
    CycleSpec::new(knob, xi1, alpha, unit(), method)
}

/// Plain bisection on a closed interval, for oracles only.
fn oracle_root(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) < 0.0, "oracle bracket");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn polaron(g: f64) -> (f64, f64) {
    let l = approx_levels(&ModelParams::new(g, 1.0, 1.0).unwrap()).unwrap();
    (l.e0, l.e1)
}

#[test]
fn expansion_from_the_decoupled_point() {
    // x = g2²:  -x + e^{-2x}/2 = -1/2.
    let x = oracle_root(|x| -x + 0.5 * (-2.0 * x).exp() + 0.5, 0.1, 2.0);
    let xi2 = solve_expansion(&spec(Knob::Coupling, 0.0, 2.0, Method::Approximate)).unwrap();
    assert!((xi2 - x.sqrt()).abs() < 1e-6, "{xi2} vs {}", x.sqrt());
    assert!((xi2 - 0.800).abs() < 1e-3);
    let tiny = solve_expansion(&spec(Knob::Coupling, 1e-4, 2.0, Method::Approximate)).unwrap();
    assert!((tiny - xi2).abs() < 1e-6);
}

#[test]
fn compression_matches_polaron_oracle() {
    let s = spec(Knob::Coupling, 0.5, 1.2, Method::Approximate);
    let e0_1 = polaron(0.5).0;
    let xi2_oracle = oracle_root(|g| polaron(g).1 - e0_1, 0.5, 3.0);
    let xi2 = solve_expansion(&s).unwrap();
    assert!((xi2 - xi2_oracle).abs() < 1e-9);
    let xi3 = 1.2 * xi2;
    let e1_3 = polaron(xi3).1;
    let xi4_oracle = oracle_root(|g| polaron(g).0 - e1_3, 0.0, xi3);
    let xi4 = solve_compression(&s, xi3).unwrap();
    assert!((xi4 - xi4_oracle).abs() < 1e-9);
    assert!(xi4 < xi3);
}

#[test]
fn isoenergetic_conditions_hold_to_root_tolerance() {
    for method in [Method::Approximate, Method::ExactNumeric] {
        let s = spec(Knob::Coupling, 0.7, 1.5, method);
        let sub = s.substance();
        let xi2 = solve_expansion(&s).unwrap();
        assert!((sub.level(xi2, Level::Excited).unwrap() - sub.level(0.7, Level::Ground).unwrap()).abs() < 1e-10);
        let xi4 = solve_compression(&s, 1.5 * xi2).unwrap();
        assert!((sub.level(xi4, Level::Ground).unwrap() - sub.level(1.5 * xi2, Level::Excited).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn unit_ratio_closes_on_itself() {
    let cases = [
        (Knob::Coupling, vec![0.05, 0.3, 0.7, 1.1, 1.4]),
        (Knob::Resonator, vec![0.6, 1.0, 2.0, 5.0, 15.0]),
        (Knob::Tls, vec![0.6, 1.0, 2.0, 4.0, 5.5]),
    ];
    for (knob, xs) in cases {
        for method in [Method::ExactNumeric, Method::Approximate] {
            if knob == Knob::Tls && method == Method::Approximate {
                continue;
            }
            for &x in &xs {
                let s = spec(knob, x, 1.0, method);
                let xi2 = solve_expansion(&s).unwrap();
                let xi4 = solve_compression(&s, xi2).unwrap();
                assert!((xi4 - x).abs() < 1e-9, "{knob} {method} {x}: {xi4}");
                let r = run_cycle(&s).unwrap();
                assert!(r.w_total.abs() < 1e-9 && r.eta.abs() < 1e-8, "{knob} {method} {x}: {r:?}");
            }
        }
    }
}

#[test]
fn closed_form_equals_quadrature() {
    for (knob, xs, alphas) in [
        (Knob::Coupling, [0.05, 0.5, 1.0, 1.3], [1.2, 2.0]),
        (Knob::Resonator, [1.0 / 0.35, 1.0 / 0.1, 1.0 / 0.6, 1.0 / 1.5], [0.75, 0.95]),
    ] {
        for x in xs {
            for alpha in alphas {
                let r = run_cycle(&spec(knob, x, alpha, Method::Approximate)).unwrap();
                let c = r.closed_form.unwrap();
                let q = r.quadrature.unwrap();
                assert!((c.q_in - q.q_in).abs() < 1e-9, "{knob} {x} {alpha}: {c:?} {q:?}");
                assert!((c.q_out - q.q_out).abs() < 1e-9, "{knob} {x} {alpha}: {c:?} {q:?}");
            }
        }
    }
}

/// `∫ (E0 dp0 + E1 dp1)` by trapezoid sums on the sampled profile, refined
/// once by Richardson extrapolation.
fn delta_q_oracle(s: &CycleSpec, xk: f64, xl: f64, dir: Direction) -> f64 {
    let sub = s.substance();
    let trapezoid = |n: usize| {
        let prof = occupation_profile(s, xk, xl, dir, n).unwrap();
        let diff: Vec<f64> = prof
            .xi_samples
            .iter()
            .map(|&x| {
                let l = sub.levels(x).unwrap();
                l.e0 - l.e1
            })
            .collect();
        (1..n)
            .map(|i| 0.5 * (diff[i] + diff[i - 1]) * (prof.p0[i] - prof.p0[i - 1]))
            .sum::<f64>()
    };
    let coarse = trapezoid(801);
    let fine = trapezoid(1601);
    (4.0 * fine - coarse) / 3.0
}

#[test]
fn quadrature_matches_occupation_integral() {
    for (knob, x, alpha, method) in [
        (Knob::Coupling, 0.5, 2.0, Method::Approximate),
        (Knob::Coupling, 0.9, 1.4, Method::ExactNumeric),
        (Knob::Resonator, 1.0 / 0.35, 0.75, Method::Approximate),
        (Knob::Tls, 1.0, 0.85, Method::ExactNumeric),
    ] {
        let s = spec(knob, x, alpha, method);
        let r = run_cycle(&s).unwrap();
        let [x1, x2, x3, x4] = r.xi;
        let q12 = energy_exchange_quadrature(&s, x1, x2, Direction::Expansion).unwrap();
        let q34 = energy_exchange_quadrature(&s, x3, x4, Direction::Compression).unwrap();
        assert!((q12 - delta_q_oracle(&s, x1, x2, Direction::Expansion)).abs() < 1e-6);
        assert!((q34 - delta_q_oracle(&s, x3, x4, Direction::Compression)).abs() < 1e-6);
        // The two isoenergetic strokes carry the whole work.
        assert!((q12 + q34 - r.w_total).abs() < 1e-6);
    }
}

#[test]
fn occupation_profile_conserves_energy() {
    let s = spec(Knob::Coupling, 0.5, 2.0, Method::Approximate);
    let xi2 = solve_expansion(&s).unwrap();
    let prof = occupation_profile(&s, 0.5, xi2, Direction::Expansion, 41).unwrap();
    assert!((prof.p0[0] - 1.0).abs() < 1e-9 && prof.p0[40].abs() < 1e-9);
    assert!(prof.p0[20] > 0.0 && prof.p0[20] < 1.0);
    let sub = s.substance();
    for (x, (p0, p1)) in prof.xi_samples.iter().zip(prof.p0.iter().zip(prof.p1())) {
        let l = sub.levels(*x).unwrap();
        assert!((p0 * l.e0 + p1 * l.e1 - prof.e_const).abs() < 1e-9);
        assert!((0.0..=1.0).contains(p0));
    }
    let back = occupation_profile(&s, xi2, 0.5, Direction::Compression, 11).unwrap();
    assert!(back.p0[0].abs() < 1e-9 && (back.p0[10] - 1.0).abs() < 1e-9);
}

#[test]
fn adiabats_cancel_and_have_the_expected_sign() {
    let s = spec(Knob::Coupling, 0.5, 1.6, Method::Approximate);
    let r = run_cycle(&s).unwrap();
    let [x1, x2, x3, x4] = r.xi;
    let w23 = adiabatic_work(&s, Level::Excited, x2, x3).unwrap();
    assert!(w23 < 0.0);
    assert_eq!(r.w_adiabatic.0, w23);
    assert!((w23 + adiabatic_work(&s, Level::Ground, x4, x1).unwrap()).abs() < 1e-9);
}

#[test]
fn exact_cycles_for_every_knob() {
    for (knob, x, alpha) in [(Knob::Coupling, 0.6, 2.0), (Knob::Resonator, 1.0 / 0.4, 0.8), (Knob::Tls, 2.0, 0.8)] {
        let r = run_cycle(&spec(knob, x, alpha, Method::ExactNumeric)).unwrap();
        assert!(r.closed_form.is_none() && r.quadrature.is_some());
        assert!(r.q_in > 0.0 && r.q_out > 0.0 && r.w_total > 0.0, "{knob}: {r:?}");
        assert!((0.0..1.0).contains(&r.eta));
        assert!((r.w_adiabatic.0 + r.w_adiabatic.1).abs() < 1e-9);
    }
}

#[test]
fn dsc_flag_marks_large_final_coupling() {
    let low = run_cycle(&spec(Knob::Coupling, 0.3, 1.2, Method::Approximate)).unwrap();
    assert!(!low.flags.dsc_threshold);
    let high = run_cycle(&spec(Knob::Coupling, 1.0, 2.0, Method::Approximate)).unwrap();
    assert!(high.xi[2] > 2.0 && high.flags.dsc_threshold);
}

#[test]
fn failures_name_their_stage() {
    let bad = run_cycle(&spec(Knob::Coupling, 0.5, 0.5, Method::Approximate)).unwrap_err();
    assert_eq!(bad.stage, Stage::Spec);
    let deep = run_cycle(&spec(Knob::Coupling, 3.5, 2.0, Method::ExactNumeric)).unwrap_err();
    assert_eq!(deep.stage, Stage::Expansion);
    assert!(matches!(deep.source, Error::Degenerate { .. }));
}

#[test]
fn operating_ranges() {
    let policy = TruncationPolicy::default();
    let g = range_probe(Knob::Coupling, &unit(), Method::ExactNumeric, &policy);
    assert_eq!(g.lower, 0.0);
    assert!(g.upper > 1.5 && g.upper < 3.5, "{g:?}");
    let s = |x| spec(Knob::Coupling, x, 1.0, Method::ExactNumeric);
    assert!(solve_expansion(&s(g.upper * 0.999)).is_ok());
    assert!(solve_expansion(&s(g.upper * 1.001)).is_err());

    let w = range_probe(Knob::Resonator, &unit(), Method::ExactNumeric, &policy);
    assert!(w.upper.is_infinite());
    assert!(w.lower > 0.2 && w.lower < 0.6, "{w:?}");
    let s = |x| spec(Knob::Resonator, x, 1.0, Method::ExactNumeric);
    assert!(solve_expansion(&s(w.lower * 1.001)).is_ok());
    let below = solve_expansion(&s(w.lower * 0.999)).unwrap_err();
    assert!(matches!(below, Error::Range { .. } | Error::Degenerate { .. }), "{below:?}");

    let flat = ModelParams::new(1.0, 1.0, 0.0).unwrap();
    assert!(range_probe(Knob::Coupling, &flat, Method::Approximate, &policy).is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coupling_cycle_invariants(x in 0.05f64..1.3, alpha in 1.0f64..2.0) {
        let r = run_cycle(&spec(Knob::Coupling, x, alpha, Method::Approximate)).unwrap();
        prop_assert!((r.w_total - (r.q_in - r.q_out)).abs() <= 1e-12 * r.q_in.abs().max(1.0));
        prop_assert!((r.w_adiabatic.0 + r.w_adiabatic.1).abs() < 1e-9);
        prop_assert!(r.eta >= -1e-12 && r.eta < 1.0);
        prop_assert!(r.xi[1] > r.xi[0] && r.xi[3] <= r.xi[2]);
    }

    #[test]
    fn resonator_cycle_invariants(inv in 0.05f64..1.5, alpha in 0.75f64..1.0) {
        let r = run_cycle(&spec(Knob::Resonator, 1.0 / inv, alpha, Method::Approximate)).unwrap();
        prop_assert!((r.w_adiabatic.0 + r.w_adiabatic.1).abs() < 1e-9);
        prop_assert!(r.eta >= -1e-12 && r.eta < 1.0);
        prop_assert!(r.xi[1] < r.xi[0] && r.xi[3] >= r.xi[2]);
        let c = r.closed_form.unwrap();
        let q = r.quadrature.unwrap();
        prop_assert!((c.q_in - q.q_in).abs() < 1e-9 && (c.q_out - q.q_out).abs() < 1e-9);
    }

    #[test]
    fn closed_form_vanishes_on_empty_strokes(x in 0.05f64..2.0) {
        let s = spec(Knob::Coupling, x, 1.5, Method::Approximate);
        prop_assert_eq!(energy_exchange_closed_form(&s, x, x, Direction::Compression).unwrap(), 0.0);
    }
}
