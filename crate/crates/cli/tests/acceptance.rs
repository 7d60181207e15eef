//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use su11_core::analysis::{
    build_figure, default_beta_interval, find_optimal_beta, nonmonotonicity_report,
    numeric_sensitivity, FigureId, FigureOptions, Observable,
};
use su11_core::closed_form::{
    heisenberg_limit, homodyne_noise, homodyne_sensitivity, optimal_beta,
    optimal_point_sensitivity, total_photons,
};
use su11_core::fock;
use su11_core::gaussian::{
    self, apply_loss, displacement_op, interferometer_op, phase_shift_op,
    photon_number_variance_closed_form, prepare_input, single_mode_squeezer_op,
    state_after_first_stage, two_mode_squeezer_op, EngineOptions, SqueezerConvention,
};
use su11_core::{derived_angles, transfer_coefficients, Config, Input, Mode, Stage};

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-8)
}

const G_GRID: [f64; 4] = [0.25, 0.5, 1.0, 1.5];
const R_GRID: [f64; 4] = [0.0, 1.0, 2.0, 3.0];
const B_GRID: [f64; 4] = [1.0, 5.0, 10.0, 20.0];

fn grid() -> impl Iterator<Item = (f64, f64, f64)> {
    G_GRID.into_iter().flat_map(|g| {
        R_GRID
            .into_iter()
            .flat_map(move |r| B_GRID.into_iter().map(move |b| (g, r, b)))
    })
}

fn optimal_point(g: f64, r: f64, beta: f64) -> (Config, Input) {
    (
        Config::balanced(g, 0.0, 0.0).unwrap(),
        Input::new(beta, FRAC_PI_2, r, 0.0).unwrap(),
    )
}

fn c1_optimal_point_formula() -> Verdict {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for (g, r, b) in grid() {
        let (cfg, input) = optimal_point(g, r, b);
        let engine = numeric_sensitivity(
            &cfg,
            &input,
            Observable::Quadrature,
            &EngineOptions::default(),
        )
        .map(|s| s.delta_phi)
        .unwrap_or(f64::NAN);
        let closed = optimal_point_sensitivity(g, r, b).unwrap();
        let d = rel(engine, closed);
        worst = if d.is_nan() {
            f64::INFINITY
        } else {
            worst.max(d)
        };
    }
    let elapsed = start.elapsed();
    verdict(
        worst <= 1e-6 && elapsed < Duration::from_secs(5),
        format!(
            "64 points, max rel dev {worst:.2e} (tol 1e-6), {:.2} s (limit 5 s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn c2_squeezed_noise() -> Verdict {
    let mut worst = 0.0_f64;
    let mut theta_max = 0.0_f64;
    for k in 0..=6 {
        let r = 0.5 * k as f64;
        let cfg = Config::balanced(0.7, 0.0, 0.0).unwrap();
        let input = Input::new(3.0, FRAC_PI_2, r, 0.0).unwrap();
        let theta = derived_angles(&cfg, &input, &transfer_coefficients(&cfg)).theta_big;
        theta_max = theta_max.max(theta.abs());
        let noise = homodyne_noise(&cfg, &input).unwrap();
        worst = worst.max((noise - (-2.0 * r).exp() / 2.0).abs());
    }
    verdict(
        worst <= 1e-12 && theta_max <= 1e-15,
        format!(
            "r = 0..3 step 0.5, |Theta| <= {theta_max:.1e}, max abs dev {worst:.2e} (tol 1e-12)"
        ),
    )
}

fn c3_three_way_oracles() -> Verdict {
    let start = Instant::now();
    let input = Input::new(0.6, FRAC_PI_2, 0.3, 0.0).unwrap();
    let (cutoff, tail) = (30, 1e-10);
    let mut worst = 0.0_f64;
    let mut failures = Vec::new();
    let mut check = |name: String, a: f64, b: f64| {
        let d = rel(a, b);
        if !(d <= 1e-6) {
            failures.push(format!("{name}: {a} vs {b}"));
        }
        worst = worst.max(if d.is_nan() { f64::INFINITY } else { d });
    };
    let b2 = 0.36;
    let n_in = b2 + 0.3f64.sinh().powi(2);
    for phi in [0.0, 0.1, 0.2] {
        let cfg = Config::balanced(0.25, 0.0, phi).unwrap();
        let fock_at = |p: f64| {
            fock::run_interferometer(&cfg.with_phi(p), &input, cutoff, tail)
                .and_then(|s| s.observables())
                .expect("fock evolution")
        };
        let f = fock_at(phi);
        let state = gaussian::run_interferometer(&cfg, &input).unwrap();
        let (mx, vx) = state.quadrature_stats(Mode::A, 0.0);
        let st = state.photon_stats();

        let tc = transfer_coefficients(&cfg);
        // a2 = U a0 - V b0^dag with <a0> = 0
        let closed_mean = -2f64.sqrt() * (tc.v * input.beta().conj()).re;
        let closed_var = homodyne_noise(&cfg, &input).unwrap();
        let closed_n = n_in + 2.0 * tc.v.norm_sqr() * (n_in + 1.0);
        let closed_var_n = photon_number_variance_closed_form(&state);
        let closed_dphi = homodyne_sensitivity(&cfg, &input).unwrap().delta_phi;

        for (name, fv, ev, cv) in [
            ("<X>", f.mean_x_a, mx, closed_mean),
            ("Var X", f.var_x_a, vx, closed_var),
            ("<N>", f.n_total(), st.n_total, closed_n),
            ("Var N", f.var_n_total, st.var_n_total, closed_var_n),
        ] {
            check(format!("phi={phi} {name} fock/engine"), fv, ev);
            check(format!("phi={phi} {name} engine/closed"), ev, cv);
        }
        let h = 1e-5;
        let d = |p: f64| fock_at(p).mean_x_a;
        let coarse = (d(phi + h) - d(phi - h)) / (2.0 * h);
        let fine = (d(phi + h / 2.0) - d(phi - h / 2.0)) / h;
        let slope = (4.0 * fine - coarse) / 3.0;
        let fock_dphi = f.var_x_a.sqrt() / slope.abs();
        let engine_dphi = numeric_sensitivity(
            &cfg,
            &input,
            Observable::Quadrature,
            &EngineOptions::default(),
        )
        .unwrap()
        .delta_phi;
        check(
            format!("phi={phi} dphi fock/closed"),
            fock_dphi,
            closed_dphi,
        );
        check(
            format!("phi={phi} dphi engine/closed"),
            engine_dphi,
            closed_dphi,
        );
    }
    let elapsed = start.elapsed();
    let mut detail = format!(
        "beta=0.6 r=0.3 g=0.25 cutoff 30, max rel dev {worst:.2e} (tol 1e-6), {:.2} s (limit 60 s)",
        elapsed.as_secs_f64()
    );
    if !failures.is_empty() {
        detail.push_str(&format!("; failing: {}", failures.join(", ")));
    }
    verdict(
        failures.is_empty() && elapsed < Duration::from_secs(60),
        detail,
    )
}

fn c4_heisenberg_reductions() -> Verdict {
    let mut exact = true;
    for r in R_GRID {
        for b in B_GRID {
            exact &= heisenberg_limit(0.0, r, b).unwrap() == 1.0 / (b * b + r.sinh().powi(2));
        }
    }
    let mut worst = 0.0_f64;
    for (g, r, b) in grid() {
        let (cfg, input) = optimal_point(g, r, b);
        let n = state_after_first_stage(&cfg, &input, SqueezerConvention::Minus)
            .photon_stats()
            .n_total;
        worst = worst.max(rel(n, total_photons(g, r, b)));
    }
    verdict(
        exact && worst <= 1e-10,
        format!("g=0 exact: {exact}; engine N_tot max rel dev {worst:.2e} (tol 1e-10)"),
    )
}

fn c5_squeezing_not_monotone() -> Verdict {
    let rep = nonmonotonicity_report(20.0, 1.0, &[2.0, 4.0, 6.0]).unwrap();
    let r = |i: usize| rep.ratios[i].1;
    verdict(
        r(1) < r(0) && r(1) < r(2),
        format!(
            "ratio(r=2) {:.4}, ratio(r=4) {:.4}, ratio(r=6) {:.4}",
            r(0),
            r(1),
            r(2)
        ),
    )
}

fn c6_optimal_beta() -> Verdict {
    let start = Instant::now();
    let (g, r) = (2.0_f64, 3.0);
    let found = default_beta_interval(g, r).and_then(|iv| find_optimal_beta(g, r, iv));
    let elapsed = start.elapsed();
    let approx = optimal_beta(g, r).unwrap();
    match found {
        Ok(opt) => {
            let offset = (opt.beta_star - approx).abs() / approx;
            verdict(
                offset <= 0.15 && (0.9..=1.1).contains(&opt.ratio_at_min) && elapsed < Duration::from_secs(1),
                format!(
                    "beta* {:.4} vs e^r tanh(2g)/2 = {approx:.4} (offset {:.2}%, tol 15%), ratio {:.4} in [0.9, 1.1], {:.3} s (limit 1 s)",
                    opt.beta_star,
                    100.0 * offset,
                    opt.ratio_at_min,
                    elapsed.as_secs_f64()
                ),
            )
        }
        Err(e) => verdict(false, format!("search failed: {e}")),
    }
}

fn c7_loss_ordering() -> Verdict {
    let t = build_figure(FigureId::Fig4, &FigureOptions::defaults(FigureId::Fig4)).unwrap();
    let cols = ["dphi_lossless", "dphi_L1only", "dphi_L2only"].map(|c| t.column(c).unwrap());
    let mut compared = 0;
    let mut violations = 0;
    for i in 0..t.rows.len() {
        if !t.rows[i].flags.is_empty() {
            continue;
        }
        if let (Some(none), Some(internal), Some(external)) = (cols[0][i], cols[1][i], cols[2][i]) {
            compared += 1;
            if !(internal > external && external > none) {
                violations += 1;
            }
        }
    }
    verdict(
        violations == 0 && compared > 0 && t.rows.len() == 101,
        format!(
            "{compared} of {} grid points compared, {violations} violations",
            t.rows.len()
        ),
    )
}

fn c8_detection_comparison() -> Verdict {
    let t = build_figure(FigureId::Fig5, &FigureOptions::defaults(FigureId::Fig5)).unwrap();
    let phi = t.column("phi").unwrap();
    let min = |name: &str| {
        t.column(name)
            .unwrap()
            .into_iter()
            .zip(&phi)
            .filter(|(_, p)| p.is_some_and(|p| p != 0.0))
            .filter_map(|(v, _)| v)
            .fold(f64::INFINITY, f64::min)
    };
    let homodyne = t
        .column("dphi_homodyne")
        .unwrap()
        .into_iter()
        .flatten()
        .fold(f64::INFINITY, f64::min);
    let intensity = min("dphi_intensity");
    let engine = min("dphi_intensity_engine");
    verdict(
        homodyne < intensity && homodyne < engine,
        format!("min homodyne {homodyne:.4e}; min intensity {intensity:.4e} (closed form), {engine:.4e} (engine)"),
    )
}

fn c9_property_suites() -> Verdict {
    const DRAWS: usize = 128;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let angle = |rng: &mut ChaCha8Rng| rng.gen_range(-PI..PI);
    let mut symplectic = 0.0_f64;
    let mut unitarity = 0.0_f64;
    let mut unphysical = 0;
    let mut compose = 0.0_f64;
    let mut slope = 0.0_f64;

    for _ in 0..DRAWS {
        let cfg = Config::new(
            Stage::new(rng.gen_range(0.0..2.0), angle(&mut rng)).unwrap(),
            Stage::new(rng.gen_range(0.0..2.0), angle(&mut rng)).unwrap(),
            angle(&mut rng),
        )
        .unwrap();
        symplectic =
            symplectic.max(interferometer_op(&cfg, SqueezerConvention::Minus).symplectic_error());
        symplectic = symplectic.max(
            single_mode_squeezer_op(rng.gen_range(0.0..2.0), angle(&mut rng), Mode::A)
                .symplectic_error(),
        );
        unitarity = unitarity.max((transfer_coefficients(&cfg).unitarity() - 1.0).abs());
    }

    for _ in 0..DRAWS {
        let input = Input::new(
            rng.gen_range(0.0..10.0),
            angle(&mut rng),
            rng.gen_range(0.0..2.0),
            angle(&mut rng),
        )
        .unwrap();
        let mut s = prepare_input(&input);
        let mut ok = s.is_physical();
        s = s.apply(&two_mode_squeezer_op(
            rng.gen_range(0.0..2.0),
            angle(&mut rng),
            SqueezerConvention::Minus,
        ));
        ok &= s.is_physical();
        for mode in [Mode::A, Mode::B] {
            s = apply_loss(&s, rng.gen_range(0.0..0.99), mode).unwrap();
            ok &= s.is_physical();
        }
        s = s.apply(&phase_shift_op(angle(&mut rng), Mode::B));
        ok &= s.is_physical();
        s = s.apply(&displacement_op(
            Complex::new(rng.gen_range(-3.0..3.0), 0.0),
            Mode::A,
        ));
        ok &= s.is_physical();
        s = s.apply(&two_mode_squeezer_op(
            rng.gen_range(0.0..2.0),
            angle(&mut rng),
            SqueezerConvention::Minus,
        ));
        ok &= s.is_physical();
        s = apply_loss(&s, rng.gen_range(0.0..0.99), Mode::A).unwrap();
        ok &= s.is_physical();
        if !ok {
            unphysical += 1;
        }

        let (l1, l2): (f64, f64) = (rng.gen_range(0.0..0.95), rng.gen_range(0.0..0.95));
        let twice = apply_loss(&apply_loss(&s, l1, Mode::A).unwrap(), l2, Mode::A).unwrap();
        let once = apply_loss(&s, 1.0 - (1.0 - l1) * (1.0 - l2), Mode::A).unwrap();
        let scale = 1.0
            + s.cov
                .0
                .iter()
                .flatten()
                .fold(0.0_f64, |m, x| m.max(x.abs()));
        compose = compose.max(twice.cov.max_abs_diff(&once.cov) / scale);
    }

    let mut drawn = 0;
    while drawn < DRAWS {
        let cfg =
            Config::balanced(rng.gen_range(0.1..1.5), angle(&mut rng), angle(&mut rng)).unwrap();
        let input = Input::new(
            rng.gen_range(0.5..20.0),
            angle(&mut rng),
            rng.gen_range(0.0..2.0),
            angle(&mut rng),
        )
        .unwrap();
        let tc = transfer_coefficients(&cfg);
        if derived_angles(&cfg, &input, &tc).phi_big.cos().abs() < 0.05 {
            continue;
        }
        drawn += 1;
        let analytic = homodyne_sensitivity(&cfg, &input).unwrap().slope;
        let numeric = numeric_sensitivity(
            &cfg,
            &input,
            Observable::Quadrature,
            &EngineOptions::default(),
        )
        .unwrap()
        .slope;
        slope = slope.max(rel(analytic, numeric));
    }

    verdict(
        symplectic <= 1e-10 && unitarity <= 1e-12 && unphysical == 0 && compose <= 1e-12 && slope <= 1e-7,
        format!(
            "{DRAWS} draws each, seed 2024: symplectic {symplectic:.1e} (tol 1e-10), |U|^2-|V|^2-1 {unitarity:.1e} (tol 1e-12), \
             unphysical {unphysical}, loss composition {compose:.1e} (tol 1e-12), slope rel {slope:.1e} (tol 1e-7)"
        ),
    )
}

fn c10_determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("first.csv"), dir.path().join("second.csv")];
    for p in &paths {
        let status = Command::new(env!("CARGO_BIN_EXE_su11"))
            .args(["figure", "--id", "5", "--out"])
            .arg(p)
            .status()
            .unwrap();
        if !status.success() {
            return verdict(false, format!("figure --id 5 exited with {status}"));
        }
    }
    let (a, b) = (fs::read(&paths[0]).unwrap(), fs::read(&paths[1]).unwrap());
    verdict(
        a == b && !a.is_empty(),
        format!(
            "two runs of `figure --id 5`, {} bytes, identical: {}",
            a.len(),
            a == b
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        (
            "optimal-point formula vs Gaussian engine",
            c1_optimal_point_formula,
        ),
        ("squeezed-noise special case", c2_squeezed_noise),
        ("three-way oracle equivalence", c3_three_way_oracles),
        ("Heisenberg-limit reductions", c4_heisenberg_reductions),
        (
            "non-monotone ratio in r (fig. 3a)",
            c5_squeezing_not_monotone,
        ),
        ("optimal coherent amplitude (fig. 3b)", c6_optimal_beta),
        ("loss ordering (fig. 4)", c7_loss_ordering),
        (
            "homodyne beats intensity detection (fig. 5)",
            c8_detection_comparison,
        ),
        ("randomized property suites", c9_property_suites),
        ("byte-identical figure output", c10_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        if !v.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {}",
            i + 1,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
