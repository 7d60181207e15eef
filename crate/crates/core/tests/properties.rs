//! Randomized invariants over fixed-seed parameter draws.

use std::f64::consts::PI;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use su11_core::analysis::{numeric_sensitivity, Observable};
use su11_core::closed_form::{homodyne_noise, homodyne_sensitivity, lossy_homodyne_sensitivity};
use su11_core::gaussian::{
    apply_loss, displacement_op, interferometer_op, phase_shift_op, prepare_input,
    run_interferometer, single_mode_squeezer_op, two_mode_squeezer_op, EngineOptions,
    SqueezerConvention,
};
use su11_core::{derived_angles, transfer_coefficients, Config, Input, Mode, Stage};

const DRAWS: usize = 128;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-PI..PI)
}

fn general_config(rng: &mut ChaCha8Rng) -> Config {
    Config::new(
        Stage::new(rng.gen_range(0.0..2.0), angle(rng)).unwrap(),
        Stage::new(rng.gen_range(0.0..2.0), angle(rng)).unwrap(),
        angle(rng),
    )
    .unwrap()
}

fn balanced_point(rng: &mut ChaCha8Rng) -> (Config, Input) {
    let cfg = Config::balanced(rng.gen_range(0.1..1.5), angle(rng), angle(rng)).unwrap();
    let input = Input::new(
        rng.gen_range(0.5..20.0),
        angle(rng),
        rng.gen_range(0.0..2.0),
        angle(rng),
    )
    .unwrap();
    (cfg, input)
}

/// Draws a balanced point whose homodyne slope is far from a blind point.
fn sighted_point(rng: &mut ChaCha8Rng) -> (Config, Input) {
    loop {
        let (cfg, input) = balanced_point(rng);
        let tc = transfer_coefficients(&cfg);
        if derived_angles(&cfg, &input, &tc).phi_big.cos().abs() > 0.05 {
            return (cfg, input);
        }
    }
}

#[test]
fn interferometer_maps_are_symplectic() {
    let mut rng = rng(11);
    for _ in 0..DRAWS {
        let cfg = general_config(&mut rng);
        for conv in [SqueezerConvention::Minus, SqueezerConvention::Plus] {
            let op = interferometer_op(&cfg, conv);
            assert!(
                op.symplectic_error() <= 1e-10,
                "{cfg:?}: {}",
                op.symplectic_error()
            );
        }
        let s = single_mode_squeezer_op(rng.gen_range(0.0..2.0), angle(&mut rng), Mode::A);
        assert!(s.symplectic_error() <= 1e-10);
    }
}

#[test]
fn transfer_coefficients_are_unimodular() {
    let mut rng = rng(12);
    for _ in 0..DRAWS {
        let cfg = general_config(&mut rng);
        let tc = transfer_coefficients(&cfg);
        assert!((tc.unitarity() - 1.0).abs() <= 1e-12, "{cfg:?}");
    }
}

#[test]
fn states_stay_physical_after_every_channel() {
    let mut rng = rng(13);
    for _ in 0..DRAWS {
        let input = Input::new(
            rng.gen_range(0.0..10.0),
            angle(&mut rng),
            rng.gen_range(0.0..2.0),
            angle(&mut rng),
        )
        .unwrap();
        let mut state = prepare_input(&input);
        assert!(state.is_physical());
        state = state.apply(&two_mode_squeezer_op(
            rng.gen_range(0.0..2.0),
            angle(&mut rng),
            SqueezerConvention::Minus,
        ));
        assert!(state.is_physical());
        state = apply_loss(&state, rng.gen_range(0.0..0.99), Mode::A).unwrap();
        assert!(state.is_physical());
        state = apply_loss(&state, rng.gen_range(0.0..0.99), Mode::B).unwrap();
        assert!(state.is_physical());
        state = state.apply(&phase_shift_op(angle(&mut rng), Mode::B));
        assert!(state.is_physical());
        state = state.apply(&displacement_op(
            Complex::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)),
            Mode::A,
        ));
        assert!(state.is_physical());
        state = state.apply(&two_mode_squeezer_op(
            rng.gen_range(0.0..2.0),
            angle(&mut rng),
            SqueezerConvention::Minus,
        ));
        assert!(state.is_physical());
        state = apply_loss(&state, rng.gen_range(0.0..0.99), Mode::A).unwrap();
        assert!(
            state.is_physical(),
            "min eigenvalue {}",
            state.uncertainty_min_eigenvalue()
        );
    }
}

#[test]
fn sequential_losses_compose() {
    let mut rng = rng(14);
    for _ in 0..DRAWS {
        let (cfg, input) = balanced_point(&mut rng);
        let state = run_interferometer(&cfg, &input).unwrap();
        let (l1, l2) = (rng.gen_range(0.0..0.95), rng.gen_range(0.0..0.95));
        let mode = if rng.gen_bool(0.5) { Mode::A } else { Mode::B };
        let twice = apply_loss(&apply_loss(&state, l1, mode).unwrap(), l2, mode).unwrap();
        let once = apply_loss(&state, 1.0 - (1.0 - l1) * (1.0 - l2), mode).unwrap();
        let scale = 1.0
            + state
                .cov
                .0
                .iter()
                .flatten()
                .fold(0.0_f64, |m, x| m.max(x.abs()));
        assert!(twice.cov.max_abs_diff(&once.cov) <= 1e-12 * scale);
        for (a, b) in twice.mean.iter().zip(once.mean) {
            assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }
}

#[test]
fn analytic_slope_matches_finite_difference() {
    let mut rng = rng(15);
    for _ in 0..DRAWS {
        let (cfg, input) = sighted_point(&mut rng);
        let closed = homodyne_sensitivity(&cfg, &input).unwrap();
        let numeric = numeric_sensitivity(
            &cfg,
            &input,
            Observable::Quadrature,
            &EngineOptions::default(),
        )
        .unwrap();
        let rel = (closed.slope - numeric.slope).abs() / closed.slope;
        assert!(rel <= 1e-7, "{cfg:?} {input:?}: {rel:e}");
    }
}

#[test]
fn quadrature_noise_matches_engine() {
    let mut rng = rng(16);
    for _ in 0..DRAWS {
        let (cfg, input) = balanced_point(&mut rng);
        let closed = homodyne_noise(&cfg, &input).unwrap();
        let (_, var) = run_interferometer(&cfg, &input)
            .unwrap()
            .quadrature_stats(Mode::A, 0.0);
        assert!((closed - var).abs() <= 1e-9 * var, "{closed} vs {var}");
    }
}

#[test]
fn sensitivity_is_two_pi_periodic() {
    let mut rng = rng(17);
    for _ in 0..DRAWS {
        let (cfg, input) = sighted_point(&mut rng);
        let a = homodyne_sensitivity(&cfg, &input).unwrap().delta_phi;
        let shifted = cfg.with_phi(cfg.phi + 2.0 * PI);
        let b = homodyne_sensitivity(&shifted, &input).unwrap().delta_phi;
        assert!((a - b).abs() <= 1e-9 * a);
    }
}

#[test]
fn lossy_sensitivity_grows_with_each_loss() {
    let mut rng = rng(18);
    for _ in 0..DRAWS {
        let (cfg, input) = sighted_point(&mut rng);
        let (la, lb) = {
            let x: f64 = rng.gen_range(0.0..0.9);
            let y: f64 = rng.gen_range(0.0..0.9);
            (x.min(y), x.max(y) + 1e-3)
        };
        let fixed = rng.gen_range(0.0..0.5);
        let at = |l1, l2| {
            lossy_homodyne_sensitivity(&cfg, &input, l1, l2)
                .unwrap()
                .delta_phi
        };
        assert!(at(lb, fixed) > at(la, fixed));
        assert!(at(fixed, lb) > at(fixed, la));
        assert!(at(la, 0.0) >= at(0.0, 0.0));
    }
}

#[test]
fn internal_loss_costs_at_least_external() {
    let mut rng = rng(19);
    for _ in 0..DRAWS {
        let (cfg, input) = sighted_point(&mut rng);
        let l = rng.gen_range(1e-3..0.9);
        let internal = lossy_homodyne_sensitivity(&cfg, &input, l, 0.0)
            .unwrap()
            .delta_phi;
        let external = lossy_homodyne_sensitivity(&cfg, &input, 0.0, l)
            .unwrap()
            .delta_phi;
        assert!(internal >= external);
    }
}

#[test]
fn report_satisfies_error_propagation() {
    let mut rng = rng(20);
    for _ in 0..DRAWS {
        let (cfg, input) = sighted_point(&mut rng);
        let (l1, l2) = (rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5));
        for rep in [
            homodyne_sensitivity(&cfg, &input).unwrap(),
            lossy_homodyne_sensitivity(&cfg, &input, l1, l2).unwrap(),
        ] {
            let lhs = (rep.delta_phi * rep.slope).powi(2);
            assert!((lhs - rep.noise).abs() <= 1e-10 * rep.noise);
            assert!(rep.hl <= rep.sql);
        }
    }
}

#[test]
fn lossy_closed_form_matches_engine() {
    let mut rng = rng(21);
    for _ in 0..DRAWS {
        let (cfg, input) = sighted_point(&mut rng);
        let (l1, l2) = (rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5));
        let closed = lossy_homodyne_sensitivity(&cfg, &input, l1, l2).unwrap();
        let lossy = cfg.with_losses(l1, l2).unwrap();
        let engine = numeric_sensitivity(
            &lossy,
            &input,
            Observable::Quadrature,
            &EngineOptions::default(),
        )
        .unwrap();
        let rel = (closed.delta_phi - engine.delta_phi).abs() / closed.delta_phi;
        assert!(rel <= 1e-6, "{rel:e}");
        assert!((closed.noise - engine.noise).abs() <= 1e-9 * closed.noise);
    }
}
