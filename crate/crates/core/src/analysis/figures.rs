//! Datasets behind the sensitivity-versus-gain, loss and detection-scheme
//! comparison plots.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::numeric::{numeric_sensitivity, Observable};
use super::sweep::{Parameters, RowFlag};
use super::table::Table;
use crate::closed_form::{homodyne_sensitivity, intensity_sensitivity, lossy_homodyne_sensitivity};
use crate::error::{Error, Result};
use crate::gaussian::EngineOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    /// Sensitivity vs gain for several squeeze strengths, `|beta| = 20`.
    Fig3a,
    /// Sensitivity vs gain for several coherent amplitudes, `r = 3`.
    Fig3b,
    /// Sensitivity vs phase with internal or external loss.
    Fig4,
    /// Homodyne vs intensity detection vs phase.
    Fig5,
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "3a" => FigureId::Fig3a,
            "3b" => FigureId::Fig3b,
            "4" => FigureId::Fig4,
            "5" => FigureId::Fig5,
            other => return Err(Error::InvalidSweep(format!("unknown figure id {other:?}"))),
        })
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FigureId::Fig3a => "3a",
            FigureId::Fig3b => "3b",
            FigureId::Fig4 => "4",
            FigureId::Fig5 => "5",
        })
    }
}

/// Figure inputs. [`FigureOptions::defaults`] holds the published parameters;
/// every field can be overridden.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureOptions {
    pub params: Parameters<f64>,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    /// Squeeze strengths (3a) or coherent amplitudes (3b); unused otherwise.
    pub series: Vec<f64>,
    /// Loss value for the single-loss curves of figure 4.
    pub loss: f64,
}

impl FigureOptions {
    pub fn defaults(id: FigureId) -> Self {
        match id {
            FigureId::Fig3a => Self {
                params: Parameters::balanced(1.0, 1.0, 20.0),
                start: 0.1,
                stop: 3.0,
                points: 59,
                series: vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
                loss: 0.0,
            },
            FigureId::Fig3b => Self {
                params: Parameters::balanced(1.0, 3.0, 10.0),
                start: 0.1,
                stop: 3.0,
                points: 59,
                series: vec![1.0, 5.0, 10.0, 20.0, 40.0],
                loss: 0.0,
            },
            FigureId::Fig4 => Self {
                params: Parameters::balanced(0.5, 2.0, 10.0),
                start: -0.6,
                stop: 0.6,
                points: 101,
                series: Vec::new(),
                loss: 0.2,
            },
            FigureId::Fig5 => Self {
                params: Parameters::balanced(1.0, 2.0, 10.0),
                start: -0.6,
                stop: 0.6,
                points: 121,
                series: Vec::new(),
                loss: 0.0,
            },
        }
    }

    fn grid(&self) -> Result<Vec<f64>> {
        if !(self.start < self.stop) || self.points < 2 {
            return Err(Error::InvalidSweep(format!(
                "grid [{}, {}] with {} points",
                self.start, self.stop, self.points
            )));
        }
        let n = self.points - 1;
        Ok((0..=n)
            .map(|i| {
                if i == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / n as f64)
                }
            })
            .collect())
    }
}

/// Compact label for a series value: `2` rather than `2.0`, `2.5` kept.
pub fn series_label(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

fn header(table: &mut Table, id: FigureId, opts: &FigureOptions) {
    table.comment(format!("figure {id}"));
    for (name, value) in opts.params.entries() {
        table.parameter(name, value);
    }
    table.parameter("grid_start", opts.start);
    table.parameter("grid_stop", opts.stop);
    table.comment(format!("grid_points = {}", opts.points));
    if !opts.series.is_empty() {
        let s: Vec<String> = opts.series.iter().map(|x| series_label(*x)).collect();
        table.comment(format!("series = {}", s.join(";")));
    }
    if id == FigureId::Fig4 {
        table.parameter("loss", opts.loss);
    }
    table.comment("dphi in radians; hl = 1/N_tot; sql = 1/sqrt(N_tot); ratio = dphi/hl");
}

fn push_flag(flags: &mut Vec<String>, f: RowFlag) {
    let s = f.as_str().to_string();
    if !flags.contains(&s) {
        flags.push(s);
    }
}

#[derive(Clone, Copy)]
enum SeriesKind {
    Squeeze,
    Amplitude,
}

fn gain_figure(id: FigureId, opts: &FigureOptions, kind: SeriesKind) -> Result<Table> {
    if opts.series.is_empty() {
        return Err(Error::InvalidSweep("empty series".into()));
    }
    let prefix = match kind {
        SeriesKind::Squeeze => "r",
        SeriesKind::Amplitude => "b",
    };
    let mut columns = vec!["g".to_string()];
    for s in &opts.series {
        let l = series_label(*s);
        for q in ["dphi", "hl", "sql", "ratio"] {
            columns.push(format!("{q}_{prefix}{l}"));
        }
    }
    let mut table = Table::new(columns);
    header(&mut table, id, opts);
    let grid = opts.grid()?;
    let rows: Vec<(Vec<Option<f64>>, Vec<String>)> = grid
        .par_iter()
        .map(|&g| {
            let mut values = vec![Some(g)];
            let mut flags = Vec::new();
            for &s in &opts.series {
                let mut p = opts.params;
                p.g1 = g;
                p.g2 = g;
                match kind {
                    SeriesKind::Squeeze => p.r = s,
                    SeriesKind::Amplitude => p.beta_mag = s,
                }
                let rep = p
                    .config()
                    .and_then(|c| p.input().and_then(|i| homodyne_sensitivity(&c, &i)));
                match rep {
                    Ok(rep) => values.extend([
                        Some(rep.delta_phi),
                        Some(rep.hl),
                        Some(rep.sql),
                        Some(rep.ratio_to_hl()),
                    ]),
                    Err(e) => {
                        values.extend([None; 4]);
                        push_flag(&mut flags, RowFlag::from_error(&e));
                    }
                }
            }
            (values, flags)
        })
        .collect();
    for (v, f) in rows {
        table.push(v, f);
    }
    Ok(table)
}

fn loss_figure(opts: &FigureOptions) -> Result<Table> {
    let columns = ["phi", "dphi_lossless", "dphi_L1only", "dphi_L2only"];
    let mut table = Table::new(columns.iter().map(|s| s.to_string()).collect());
    header(&mut table, FigureId::Fig4, opts);
    let grid = opts.grid()?;
    let loss = opts.loss;
    let rows: Vec<(Vec<Option<f64>>, Vec<String>)> = grid
        .par_iter()
        .map(|&phi| {
            let mut p = opts.params;
            p.phi = phi;
            let mut values = vec![Some(phi)];
            let mut flags = Vec::new();
            for (l1, l2) in [(0.0, 0.0), (loss, 0.0), (0.0, loss)] {
                let rep = p.config().and_then(|c| {
                    p.input()
                        .and_then(|i| lossy_homodyne_sensitivity(&c, &i, l1, l2))
                });
                match rep {
                    Ok(rep) => values.push(Some(rep.delta_phi)),
                    Err(e) => {
                        values.push(None);
                        push_flag(&mut flags, RowFlag::from_error(&e));
                    }
                }
            }
            (values, flags)
        })
        .collect();
    for (v, f) in rows {
        table.push(v, f);
    }
    Ok(table)
}

fn record(values: &mut Vec<Option<f64>>, flags: &mut Vec<String>, r: Result<f64>, blind: RowFlag) {
    match r {
        Ok(v) => values.push(Some(v)),
        Err(e) => {
            values.push(None);
            let f = match RowFlag::from_error(&e) {
                RowFlag::BlindPhase => blind,
                other => other,
            };
            push_flag(flags, f);
        }
    }
}

fn detection_figure(opts: &FigureOptions) -> Result<Table> {
    let columns = [
        "phi",
        "dphi_homodyne",
        "dphi_intensity",
        "dphi_intensity_engine",
    ];
    let mut table = Table::new(columns.iter().map(|s| s.to_string()).collect());
    header(&mut table, FigureId::Fig5, opts);
    table.comment(
        "dphi_intensity: closed form; dphi_intensity_engine: Gaussian-engine error propagation",
    );
    let grid = opts.grid()?;
    let rows: Vec<(Vec<Option<f64>>, Vec<String>)> = grid
        .par_iter()
        .map(|&phi| {
            let mut p = opts.params;
            p.phi = phi;
            let mut values = vec![Some(phi)];
            let mut flags = Vec::new();
            let (config, input) = match (p.config(), p.input()) {
                (Ok(c), Ok(i)) => (c, i),
                _ => {
                    values.extend([None; 3]);
                    push_flag(&mut flags, RowFlag::Invalid);
                    return (values, flags);
                }
            };
            let homodyne =
                lossy_homodyne_sensitivity(&config, &input, p.l1, p.l2).map(|r| r.delta_phi);
            record(&mut values, &mut flags, homodyne, RowFlag::BlindPhase);
            if p.l1 == 0.0 && p.l2 == 0.0 {
                let closed = intensity_sensitivity(&config, &input).map(|r| r.delta_phi);
                record(&mut values, &mut flags, closed, RowFlag::IntensityBlind);
            } else {
                values.push(None);
                push_flag(&mut flags, RowFlag::IntensityLossless);
            }
            let engine = if config.phi.sin().abs() < crate::closed_form::BLIND_THRESHOLD {
                Err(Error::IntensityBlind(config.phi.sin().abs()))
            } else {
                numeric_sensitivity(
                    &config,
                    &input,
                    Observable::PhotonNumber,
                    &EngineOptions::default(),
                )
                .map(|r| r.delta_phi)
            };
            record(&mut values, &mut flags, engine, RowFlag::IntensityBlind);
            (values, flags)
        })
        .collect();
    for (v, f) in rows {
        table.push(v, f);
    }
    Ok(table)
}

pub fn build_figure(id: FigureId, opts: &FigureOptions) -> Result<Table> {
    match id {
        FigureId::Fig3a => gain_figure(id, opts, SeriesKind::Squeeze),
        FigureId::Fig3b => gain_figure(id, opts, SeriesKind::Amplitude),
        FigureId::Fig4 => loss_figure(opts),
        FigureId::Fig5 => detection_figure(opts),
    }
}
