//! Three-way consistency suite: truncated Fock space vs Gaussian engine vs
//! closed forms, on a small-photon-number operating point.

use crate::analysis::{
    intensity_deviation, numeric_sensitivity, richardson_central, Observable, Parameters, FD_STEP,
};
use crate::closed_form::{homodyne_noise, homodyne_sensitivity, total_photons};
use crate::error::Result;
use crate::fock::{self, FockObservables};
use crate::gaussian::{self, state_after_first_stage, EngineOptions, Mode};
use crate::interferometer::{InputState, InterferometerConfig};
use crate::scalar::relative_deviation;

/// Values closer to zero than this are compared absolutely.
pub const DEVIATION_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationSettings {
    pub params: Parameters<f64>,
    pub phis: Vec<f64>,
    pub cutoff: usize,
    pub tolerance: f64,
    pub tail_tolerance: f64,
}

impl Default for ValidationSettings {
    fn default() -> Self {
        Self {
            params: Parameters::balanced(0.25, 0.3, 0.6),
            phis: vec![0.0, 0.1, 0.2],
            cutoff: 30,
            tolerance: 1e-6,
            tail_tolerance: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: Option<f64>,
    pub reference: Option<f64>,
    /// Relative deviation, `None` when either side failed.
    pub deviation: Option<f64>,
    pub error: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    /// Informational comparisons that do not gate the result.
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn max_deviation(&self) -> Option<f64> {
        self.checks
            .iter()
            .filter_map(|c| c.deviation)
            .reduce(f64::max)
    }
}

struct Recorder<'a> {
    report: &'a mut ValidationReport,
    tolerance: f64,
}

impl Recorder<'_> {
    fn compare(&mut self, name: String, value: Result<f64>, reference: Result<f64>) {
        let check = match (value, reference) {
            (Ok(v), Ok(r)) => {
                let dev = relative_deviation(v, r, DEVIATION_FLOOR);
                Check {
                    name,
                    value: Some(v),
                    reference: Some(r),
                    deviation: Some(dev),
                    error: None,
                    passed: dev <= self.tolerance,
                }
            }
            (v, r) => Check {
                name,
                value: v.as_ref().ok().copied(),
                reference: r.as_ref().ok().copied(),
                deviation: None,
                error: Some(
                    [v.err(), r.err()]
                        .into_iter()
                        .flatten()
                        .map(|e| e.to_string())
                        .collect::<Vec<_>>()
                        .join("; "),
                ),
                passed: false,
            },
        };
        self.report.checks.push(check);
    }
}

fn fock_at(
    config: &InterferometerConfig<f64>,
    input: &InputState<f64>,
    phi: f64,
    s: &ValidationSettings,
) -> Result<FockObservables<f64>> {
    fock::run_interferometer(&config.with_phi(phi), input, s.cutoff, s.tail_tolerance)?
        .observables()
}

/// Error-propagation sensitivity through the Fock simulator.
fn fock_sensitivity(
    config: &InterferometerConfig<f64>,
    input: &InputState<f64>,
    s: &ValidationSettings,
    observable: Observable,
) -> Result<f64> {
    let obs = fock_at(config, input, config.phi, s)?;
    let pick = |o: &FockObservables<f64>| match observable {
        Observable::Quadrature => (o.mean_x_a, o.var_x_a),
        Observable::PhotonNumber => (o.n_total(), o.var_n_total),
    };
    let (_, var) = pick(&obs);
    let slope = richardson_central(
        |phi| Ok(pick(&fock_at(config, input, phi, s)?).0),
        config.phi,
        FD_STEP,
    )?;
    Ok(var.sqrt() / slope.abs())
}

pub fn run_validation(settings: &ValidationSettings) -> ValidationReport {
    let mut report = ValidationReport::default();
    let (base, input) = match (settings.params.config(), settings.params.input()) {
        (Ok(c), Ok(i)) => (c, i),
        (c, i) => {
            let err = [c.err(), i.err()]
                .into_iter()
                .flatten()
                .next()
                .map(|e| e.to_string());
            report.checks.push(Check {
                name: "parameters".into(),
                value: None,
                reference: None,
                deviation: None,
                error: err,
                passed: false,
            });
            return report;
        }
    };
    let mut notes = Vec::new();
    let mut rec = Recorder {
        report: &mut report,
        tolerance: settings.tolerance,
    };

    let opts = EngineOptions::default();
    let engine_ntot = state_after_first_stage(&base, &input, opts.convention)
        .photon_stats()
        .n_total;
    rec.compare(
        "n_tot closed vs engine".into(),
        Ok(total_photons(
            base.stage1.gain,
            input.squeeze_r,
            input.beta_mag,
        )),
        Ok(engine_ntot),
    );
    let fock_ntot = fock::run_first_stage(&base, &input, settings.cutoff, settings.tail_tolerance)
        .and_then(|s| s.observables())
        .map(|o| o.n_total());
    rec.compare("n_tot fock vs engine".into(), fock_ntot, Ok(engine_ntot));

    for &phi in &settings.phis {
        let config = base.with_phi(phi);
        let tag = format!("phi={phi}");
        let engine_state = gaussian::run_interferometer(&config, &input);
        let fock_obs = fock_at(&base, &input, phi, settings);
        let eng = |f: fn(&gaussian::GaussianState<f64>) -> f64| {
            engine_state.as_ref().map(f).map_err(Clone::clone)
        };
        let fck =
            |f: fn(&FockObservables<f64>) -> f64| fock_obs.as_ref().map(f).map_err(Clone::clone);

        rec.compare(
            format!("{tag} <X> fock vs engine"),
            fck(|o| o.mean_x_a),
            eng(|s| s.quadrature_stats(Mode::A, 0.0).0),
        );
        rec.compare(
            format!("{tag} Var(X) fock vs engine"),
            fck(|o| o.var_x_a),
            eng(|s| s.quadrature_stats(Mode::A, 0.0).1),
        );
        rec.compare(
            format!("{tag} <n_a> fock vs engine"),
            fck(|o| o.n_a),
            eng(|s| s.photon_stats().n_a),
        );
        rec.compare(
            format!("{tag} <n_b> fock vs engine"),
            fck(|o| o.n_b),
            eng(|s| s.photon_stats().n_b),
        );
        rec.compare(
            format!("{tag} <N> fock vs engine"),
            fck(|o| o.n_total()),
            eng(|s| s.photon_stats().n_total),
        );
        rec.compare(
            format!("{tag} Var(N) fock vs engine"),
            fck(|o| o.var_n_total),
            eng(|s| s.photon_stats().var_n_total),
        );
        rec.compare(
            format!("{tag} Var(X) closed vs engine"),
            homodyne_noise(&config, &input),
            eng(|s| s.quadrature_stats(Mode::A, 0.0).1),
        );

        let engine_dphi = numeric_sensitivity(&config, &input, Observable::Quadrature, &opts)
            .map(|r| r.delta_phi);
        let closed_dphi = homodyne_sensitivity(&config, &input).map(|r| r.delta_phi);
        rec.compare(
            format!("{tag} dphi closed vs engine"),
            closed_dphi.clone(),
            engine_dphi.clone(),
        );
        rec.compare(
            format!("{tag} dphi fock vs closed"),
            fock_sensitivity(&config, &input, settings, Observable::Quadrature),
            closed_dphi,
        );

        if phi.sin().abs() >= crate::closed_form::BLIND_THRESHOLD {
            let engine_n = numeric_sensitivity(&config, &input, Observable::PhotonNumber, &opts)
                .map(|r| r.delta_phi);
            rec.compare(
                format!("{tag} dphi_N fock vs engine"),
                fock_sensitivity(&config, &input, settings, Observable::PhotonNumber),
                engine_n,
            );
            match intensity_deviation(&config, &input) {
                Ok(d) => notes.push(format!(
                    "{tag} dphi_N closed form {:.6e} vs engine {:.6e}: relative deviation {:.3e}",
                    d.closed_form, d.engine, d.relative
                )),
                Err(e) => notes.push(format!("{tag} dphi_N closed form unavailable: {e}")),
            }
        }
    }
    report.notes = notes;
    report
}
