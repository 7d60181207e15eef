use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::numeric::{numeric_sensitivity, Observable};
use super::table::Table;
use crate::closed_form::{
    intensity_sensitivity, lossy_homodyne_sensitivity, sql_limit, total_photons, SensitivityReport,
};
use crate::error::{Error, Result};
use crate::gaussian::{state_after_first_stage, EngineOptions};
use crate::interferometer::{FwmStage, InputState, InterferometerConfig};
use crate::scalar::{relative_deviation, Real};

/// Agreement required between the two backends before a row is flagged.
pub const BACKEND_TOLERANCE: f64 = 1e-6;

/// Flat parameter assignment covering both stages, the input state and the
/// losses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parameters<T> {
    pub g1: T,
    pub g2: T,
    pub theta1: T,
    pub theta2: T,
    pub phi: T,
    pub beta_mag: T,
    pub beta_phase: T,
    pub r: T,
    pub eta: T,
    pub l1: T,
    pub l2: T,
}

impl<T: Real> Parameters<T> {
    /// Balanced interferometer with `theta1 = 0`, `theta_beta = pi/2`, so the
    /// optimal phase point sits at `phi = 0`.
    pub fn balanced(g: T, r: T, beta_mag: T) -> Self {
        Self {
            g1: g,
            g2: g,
            theta1: T::zero(),
            theta2: T::PI(),
            phi: T::zero(),
            beta_mag,
            beta_phase: T::FRAC_PI_2(),
            r,
            eta: T::zero(),
            l1: T::zero(),
            l2: T::zero(),
        }
    }

    pub fn config(&self) -> Result<InterferometerConfig<T>> {
        InterferometerConfig::new(
            FwmStage::new(self.g1, self.theta1)?,
            FwmStage::new(self.g2, self.theta2)?,
            self.phi,
        )?
        .with_losses(self.l1, self.l2)
    }

    pub fn input(&self) -> Result<InputState<T>> {
        InputState::new(self.beta_mag, self.beta_phase, self.r, self.eta)
    }

    pub fn set(&mut self, variable: SweepVariable, value: T) {
        match variable {
            SweepVariable::Phi => self.phi = value,
            SweepVariable::G => {
                self.g1 = value;
                self.g2 = value;
            }
            SweepVariable::R => self.r = value,
            SweepVariable::Beta => self.beta_mag = value,
            SweepVariable::L1 => self.l1 = value,
            SweepVariable::L2 => self.l2 = value,
        }
    }

    /// `(name, value)` pairs in a fixed order, for file headers.
    pub fn entries(&self) -> [(&'static str, T); 11] {
        [
            ("g1", self.g1),
            ("g2", self.g2),
            ("theta1", self.theta1),
            ("theta2", self.theta2),
            ("phi", self.phi),
            ("beta", self.beta_mag),
            ("theta_beta", self.beta_phase),
            ("r", self.r),
            ("eta", self.eta),
            ("l1", self.l1),
            ("l2", self.l2),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepVariable {
    Phi,
    G,
    R,
    Beta,
    L1,
    L2,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Phi => "phi",
            SweepVariable::G => "g",
            SweepVariable::R => "r",
            SweepVariable::Beta => "beta",
            SweepVariable::L1 => "l1",
            SweepVariable::L2 => "l2",
        }
    }

    pub fn is_angle(self) -> bool {
        self == SweepVariable::Phi
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "phi" => SweepVariable::Phi,
            "g" => SweepVariable::G,
            "r" => SweepVariable::R,
            "beta" => SweepVariable::Beta,
            "l1" => SweepVariable::L1,
            "l2" => SweepVariable::L2,
            other => return Err(Error::InvalidSweep(format!("unknown variable {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SweepBackend {
    #[default]
    ClosedForm,
    GaussianEngine,
    Both,
}

impl FromStr for SweepBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "closed_form" | "closed" => SweepBackend::ClosedForm,
            "gaussian_engine" | "engine" => SweepBackend::GaussianEngine,
            "both" => SweepBackend::Both,
            other => return Err(Error::InvalidSweep(format!("unknown backend {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowFlag {
    BlindPhase,
    ZeroSlope,
    IntensityBlind,
    IntensityLossless,
    Unbalanced,
    NoPhotons,
    BackendMismatch,
    EngineError,
    Invalid,
}

impl RowFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            RowFlag::BlindPhase => "blind_phase",
            RowFlag::ZeroSlope => "zero_slope",
            RowFlag::IntensityBlind => "intensity_blind",
            RowFlag::IntensityLossless => "intensity_lossless_only",
            RowFlag::Unbalanced => "unbalanced",
            RowFlag::NoPhotons => "no_photons",
            RowFlag::BackendMismatch => "backend_mismatch",
            RowFlag::EngineError => "engine_error",
            RowFlag::Invalid => "invalid",
        }
    }

    pub fn from_error(err: &Error) -> Self {
        match err {
            Error::BlindPhasePoint(_) | Error::VanishingSlope(_) => RowFlag::BlindPhase,
            Error::ZeroSignalSlope(_) => RowFlag::ZeroSlope,
            Error::IntensityBlind(_) => RowFlag::IntensityBlind,
            Error::Unbalanced => RowFlag::Unbalanced,
            Error::NoPhotons => RowFlag::NoPhotons,
            _ => RowFlag::Invalid,
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for SweepBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepBackend::ClosedForm => "closed_form",
            SweepBackend::GaussianEngine => "gaussian_engine",
            SweepBackend::Both => "both",
        })
    }
}

impl fmt::Display for RowFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec<T> {
    pub variable: SweepVariable,
    pub start: T,
    pub stop: T,
    pub points: usize,
    pub fixed: Parameters<T>,
    pub backend: SweepBackend,
    pub include_intensity: bool,
}

impl<T: Real> SweepSpec<T> {
    pub fn new(
        variable: SweepVariable,
        start: T,
        stop: T,
        points: usize,
        fixed: Parameters<T>,
    ) -> Self {
        Self {
            variable,
            start,
            stop,
            points,
            fixed,
            backend: SweepBackend::ClosedForm,
            include_intensity: true,
        }
    }

    pub fn with_backend(mut self, backend: SweepBackend) -> Self {
        self.backend = backend;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start < self.stop) {
            return Err(Error::InvalidSweep(format!(
                "start {} must be below stop {}",
                self.start, self.stop
            )));
        }
        if self.points < 2 {
            return Err(Error::InvalidSweep(format!(
                "points = {} (need >= 2)",
                self.points
            )));
        }
        for value in [self.start, self.stop] {
            let mut p = self.fixed;
            p.set(self.variable, value);
            p.config()?;
            p.input()?;
        }
        Ok(())
    }

    pub fn value_at(&self, index: usize) -> T {
        let frac = T::lit(index as f64) / T::lit((self.points - 1) as f64);
        if index + 1 == self.points {
            self.stop
        } else {
            self.start + (self.stop - self.start) * frac
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<T> {
    pub value: T,
    /// Closed form for `ClosedForm`/`Both`, engine for `GaussianEngine`.
    pub delta_phi_homodyne: Option<T>,
    /// Engine value alongside the closed form when the backend is `Both`.
    pub delta_phi_engine: Option<T>,
    pub delta_phi_intensity: Option<T>,
    pub delta_phi_hl: Option<T>,
    pub delta_phi_sql: Option<T>,
    pub ratio_to_hl: Option<T>,
    pub noise: Option<T>,
    pub slope: Option<T>,
    pub flags: Vec<RowFlag>,
}

fn n_total_for<T: Real>(config: &InterferometerConfig<T>, input: &InputState<T>) -> T {
    if config.is_balanced() {
        total_photons(config.stage1.gain, input.squeeze_r, input.beta_mag)
    } else {
        state_after_first_stage(config, input, Default::default())
            .photon_stats()
            .n_total
    }
}

fn evaluate_row<T: Real>(spec: &SweepSpec<T>, value: T) -> SweepRow<T> {
    let mut params = spec.fixed;
    params.set(spec.variable, value);
    let mut row = SweepRow {
        value,
        delta_phi_homodyne: None,
        delta_phi_engine: None,
        delta_phi_intensity: None,
        delta_phi_hl: None,
        delta_phi_sql: None,
        ratio_to_hl: None,
        noise: None,
        slope: None,
        flags: Vec::new(),
    };
    let (config, input) = match (params.config(), params.input()) {
        (Ok(c), Ok(i)) => (c, i),
        _ => {
            row.flags.push(RowFlag::Invalid);
            return row;
        }
    };
    let flag = |row: &mut SweepRow<T>, f: RowFlag| {
        if !row.flags.contains(&f) {
            row.flags.push(f);
        }
    };

    let engine = || {
        numeric_sensitivity(
            &config,
            &input,
            Observable::Quadrature,
            &EngineOptions::default(),
        )
    };
    let closed = || lossy_homodyne_sensitivity(&config, &input, params.l1, params.l2);
    let (primary, secondary): (
        Result<SensitivityReport<T>>,
        Option<Result<SensitivityReport<T>>>,
    ) = match spec.backend {
        SweepBackend::ClosedForm => (closed(), None),
        SweepBackend::GaussianEngine => (engine(), None),
        SweepBackend::Both => (closed(), Some(engine())),
    };
    match &primary {
        Ok(rep) => {
            row.delta_phi_homodyne = Some(rep.delta_phi);
            row.noise = Some(rep.noise);
            row.slope = Some(rep.slope);
        }
        Err(e) => flag(&mut row, RowFlag::from_error(e)),
    }
    if let Some(sec) = secondary {
        match (&primary, sec) {
            (Ok(a), Ok(b)) => {
                row.delta_phi_engine = Some(b.delta_phi);
                let dev = relative_deviation(a.delta_phi, b.delta_phi, T::min_positive_value());
                if dev > T::lit(BACKEND_TOLERANCE) {
                    flag(&mut row, RowFlag::BackendMismatch);
                }
            }
            (_, Ok(b)) => row.delta_phi_engine = Some(b.delta_phi),
            (_, Err(e)) => flag(&mut row, RowFlag::from_error(&e)),
        }
    }

    if spec.include_intensity {
        let lossless = params.l1 == T::zero() && params.l2 == T::zero();
        let intensity = match spec.backend {
            SweepBackend::GaussianEngine => Some(numeric_sensitivity(
                &config,
                &input,
                Observable::PhotonNumber,
                &EngineOptions::default(),
            )),
            _ if lossless => Some(intensity_sensitivity(&config, &input)),
            _ => {
                flag(&mut row, RowFlag::IntensityLossless);
                None
            }
        };
        match intensity {
            Some(Ok(rep)) => row.delta_phi_intensity = Some(rep.delta_phi),
            Some(Err(e)) => {
                let f = match RowFlag::from_error(&e) {
                    RowFlag::BlindPhase => RowFlag::IntensityBlind,
                    other => other,
                };
                flag(&mut row, f);
            }
            None => {}
        }
    }

    let n_total = n_total_for(&config, &input);
    if n_total > T::zero() {
        let hl = n_total.recip();
        row.delta_phi_hl = Some(hl);
        row.delta_phi_sql = sql_limit(n_total).ok();
        row.ratio_to_hl = row.delta_phi_homodyne.map(|d| d / hl);
    } else {
        flag(&mut row, RowFlag::NoPhotons);
    }
    row
}

/// Evaluates `spec` on its uniform grid. Rows are computed in parallel and
/// returned in grid order; flagged rows are kept.
pub fn sweep<T: Real>(spec: &SweepSpec<T>) -> Result<Vec<SweepRow<T>>> {
    spec.validate()?;
    Ok((0..spec.points)
        .into_par_iter()
        .map(|i| evaluate_row(spec, spec.value_at(i)))
        .collect())
}

/// Lays out sweep rows as a CSV table: the swept variable, the homodyne
/// sensitivity (plus the engine value for [`SweepBackend::Both`]), the
/// intensity sensitivity when requested, references and the error budget.
pub fn sweep_table(spec: &SweepSpec<f64>, rows: &[SweepRow<f64>]) -> Table {
    let both = spec.backend == SweepBackend::Both;
    let mut columns = vec![
        spec.variable.name().to_string(),
        "dphi_homodyne".to_string(),
    ];
    if both {
        columns.push("dphi_engine".into());
    }
    if spec.include_intensity {
        columns.push("dphi_intensity".into());
    }
    columns.extend(["dphi_hl", "dphi_sql", "ratio_to_hl", "noise", "slope"].map(String::from));
    let mut table = Table::new(columns);
    table.comment(format!("sweep {} backend {}", spec.variable, spec.backend));
    for (name, value) in spec.fixed.entries() {
        if name != spec.variable.name()
            && !(spec.variable == SweepVariable::G && (name == "g1" || name == "g2"))
        {
            table.parameter(name, value);
        }
    }
    table.parameter("start", spec.start);
    table.parameter("stop", spec.stop);
    table.comment(format!("points = {}", spec.points));
    for row in rows {
        let mut values = vec![Some(row.value), row.delta_phi_homodyne];
        if both {
            values.push(row.delta_phi_engine);
        }
        if spec.include_intensity {
            values.push(row.delta_phi_intensity);
        }
        values.extend([
            row.delta_phi_hl,
            row.delta_phi_sql,
            row.ratio_to_hl,
            row.noise,
            row.slope,
        ]);
        table.push(values, row.flags.iter().map(|f| f.to_string()).collect());
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::homodyne_sensitivity;

    #[test]
    fn two_point_sweep_matches_direct_calls() {
        let fixed = Parameters::balanced(1.0, 2.0, 10.0);
        let spec = SweepSpec::new(SweepVariable::Phi, -0.3, 0.3, 2, fixed);
        let rows = sweep(&spec).unwrap();
        assert_eq!(rows.len(), 2);
        for row in &rows {
            let mut p = fixed;
            p.phi = row.value;
            let direct = homodyne_sensitivity(&p.config().unwrap(), &p.input().unwrap()).unwrap();
            assert_eq!(row.delta_phi_homodyne, Some(direct.delta_phi));
            assert_eq!(row.delta_phi_hl, Some(direct.hl));
        }
        assert_eq!(rows[0].value, -0.3);
        assert_eq!(rows[1].value, 0.3);
    }

    #[test]
    fn invalid_specs() {
        let fixed = Parameters::balanced(1.0, 2.0, 10.0);
        assert!(sweep(&SweepSpec::new(SweepVariable::Phi, 0.3, 0.3, 5, fixed)).is_err());
        assert!(sweep(&SweepSpec::new(SweepVariable::Phi, 0.0, 0.3, 1, fixed)).is_err());
        assert!(sweep(&SweepSpec::new(SweepVariable::L1, 0.0, 1.0, 5, fixed)).is_err());
        assert!(sweep(&SweepSpec::new(SweepVariable::R, -1.0, 1.0, 5, fixed)).is_err());
    }

    #[test]
    fn blind_points_are_flagged_not_dropped() {
        let fixed = Parameters::balanced(0.5, 0.5, 2.0);
        // Phi = -phi here, so cos Phi vanishes at phi = pi/2.
        let spec = SweepSpec::new(SweepVariable::Phi, 0.0, std::f64::consts::PI, 3, fixed);
        let rows = sweep(&spec).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows[1].flags.contains(&RowFlag::BlindPhase));
        assert_eq!(rows[1].delta_phi_homodyne, None);
        assert!(rows[0].flags.contains(&RowFlag::IntensityBlind));
        assert!(rows[0].delta_phi_homodyne.is_some());
    }

    #[test]
    fn both_backends_agree() {
        let fixed = Parameters::balanced(0.7, 1.2, 3.0);
        let spec = SweepSpec::new(SweepVariable::Phi, -0.5, 0.5, 11, fixed)
            .with_backend(SweepBackend::Both);
        for row in sweep(&spec).unwrap() {
            assert!(!row.flags.contains(&RowFlag::BackendMismatch), "{row:?}");
            assert!(row.delta_phi_engine.is_some());
        }
    }

    #[test]
    fn gain_sweep_with_zero_gain_flags_zero_slope() {
        let fixed = Parameters::balanced(1.0, 1.0, 5.0);
        let spec = SweepSpec::new(SweepVariable::G, 0.0, 1.0, 3, fixed);
        let rows = sweep(&spec).unwrap();
        assert!(rows[0].flags.contains(&RowFlag::ZeroSlope));
        assert!(rows[2].delta_phi_homodyne.is_some());
    }

    #[test]
    fn parse_names() {
        assert_eq!("L2".parse::<SweepVariable>().unwrap(), SweepVariable::L2);
        assert!("theta".parse::<SweepVariable>().is_err());
        assert_eq!(
            "gaussian-engine".parse::<SweepBackend>().unwrap(),
            SweepBackend::GaussianEngine
        );
    }
}
