use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use su11_core::analysis::table::format_value;
use su11_core::analysis::{
    build_figure, default_beta_interval, find_optimal_beta, numeric_sensitivity, sweep,
    sweep_table, FigureOptions, Observable, SweepBackend, SweepSpec, Table,
};
use su11_core::closed_form::{
    intensity_sensitivity, lossy_homodyne_sensitivity, optimal_beta, sql_limit, total_photons,
};
use su11_core::gaussian::{run_interferometer, state_after_first_stage, EngineOptions};
use su11_core::scalar::relative_deviation;
use su11_core::validation::{run_validation, ValidationSettings};
use su11_core::{Config, Error, Input, Mode, Params, Report};

use crate::params::default_params;
use crate::{FigureArgs, OptimumArgs, PointArgs, SweepArgs, ValidateArgs};

fn write_table(table: &Table, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            table.write_csv(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write_csv(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

/// How a single evaluation ended, for `point`.
enum Outcome {
    Value(Report),
    /// Blind point or detection scheme not applicable; the label is printed.
    Label(&'static str),
}

/// Blind-point conditions become labels; anything else is a hard error.
fn classify(result: su11_core::Result<Report>) -> Result<Outcome> {
    match result {
        Ok(r) => Ok(Outcome::Value(r)),
        Err(Error::BlindPhasePoint(_) | Error::VanishingSlope(_)) => {
            Ok(Outcome::Label("blind_phase"))
        }
        Err(Error::IntensityBlind(_)) => Ok(Outcome::Label("intensity_blind")),
        Err(Error::Unbalanced) => {
            bail!(
                "{}; use --backend gaussian-engine for unbalanced settings",
                Error::Unbalanced
            )
        }
        Err(e) => Err(e.into()),
    }
}

fn classify_intensity(result: su11_core::Result<Report>) -> Result<Outcome> {
    match result {
        Err(Error::VanishingSlope(_)) => Ok(Outcome::Label("intensity_blind")),
        other => classify(other),
    }
}

fn engine(config: &Config, input: &Input, observable: Observable) -> su11_core::Result<Report> {
    numeric_sensitivity(config, input, observable, &EngineOptions::default())
}

fn closed_homodyne(config: &Config, input: &Input, p: &Params) -> su11_core::Result<Report> {
    lossy_homodyne_sensitivity(config, input, p.l1, p.l2)
}

fn closed_intensity(config: &Config, input: &Input, p: &Params) -> Result<Outcome> {
    if p.l1 != 0.0 || p.l2 != 0.0 {
        return Ok(Outcome::Label("intensity_lossless_only"));
    }
    classify(intensity_sensitivity(config, input))
}

fn print_kv(out: &mut impl Write, key: &str, value: f64) -> io::Result<()> {
    writeln!(out, "{key}={}", format_value(value))
}

fn print_outcome(out: &mut impl Write, key: &str, o: &Outcome) -> io::Result<()> {
    match o {
        Outcome::Value(r) => print_kv(out, key, r.delta_phi),
        Outcome::Label(l) => writeln!(out, "{key}={l}"),
    }
}

pub fn point(args: &PointArgs) -> Result<ExitCode> {
    let p = args.params.resolve(default_params())?;
    let (config, input) = (p.config()?, p.input()?);
    let backend = SweepBackend::from(args.backend);
    let (homodyne, intensity) = match backend {
        SweepBackend::GaussianEngine => (
            classify(engine(&config, &input, Observable::Quadrature))?,
            classify_intensity(engine(&config, &input, Observable::PhotonNumber))?,
        ),
        _ => (
            classify(closed_homodyne(&config, &input, &p))?,
            closed_intensity(&config, &input, &p)?,
        ),
    };

    let n_total = if config.is_balanced() {
        total_photons(p.g1, p.r, p.beta_mag)
    } else {
        state_after_first_stage(&config, &input, Default::default())
            .photon_stats()
            .n_total
    };
    if !(n_total > 0.0) {
        bail!(Error::NoPhotons);
    }

    let stdout = io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "backend={backend}")?;
    print_outcome(&mut out, "delta_phi_homodyne", &homodyne)?;
    print_outcome(&mut out, "delta_phi_intensity", &intensity)?;
    if backend == SweepBackend::Both {
        let eh = classify(engine(&config, &input, Observable::Quadrature))?;
        print_outcome(&mut out, "delta_phi_homodyne_engine", &eh)?;
        let ei = classify_intensity(engine(&config, &input, Observable::PhotonNumber))?;
        print_outcome(&mut out, "delta_phi_intensity_engine", &ei)?;
        for (key, a, b) in [
            ("homodyne_deviation", &homodyne, &eh),
            ("intensity_deviation", &intensity, &ei),
        ] {
            if let (Outcome::Value(a), Outcome::Value(b)) = (a, b) {
                print_kv(
                    &mut out,
                    key,
                    relative_deviation(a.delta_phi, b.delta_phi, f64::MIN_POSITIVE),
                )?;
            }
        }
    }
    let hl = n_total.recip();
    print_kv(&mut out, "delta_phi_hl", hl)?;
    print_kv(&mut out, "delta_phi_sql", sql_limit(n_total)?)?;
    match &homodyne {
        Outcome::Value(r) => {
            print_kv(&mut out, "ratio_to_hl", r.delta_phi / hl)?;
            print_kv(&mut out, "noise", r.noise)?;
            print_kv(&mut out, "slope", r.slope)?;
        }
        Outcome::Label(l) => {
            writeln!(out, "ratio_to_hl={l}")?;
            let (_, var) = run_interferometer(&config, &input)?.quadrature_stats(Mode::A, 0.0);
            print_kv(&mut out, "noise", var)?;
            print_kv(&mut out, "slope", 0.0)?;
        }
    }
    print_kv(&mut out, "n_total", n_total)?;
    Ok(ExitCode::SUCCESS)
}

pub fn run_sweep(args: &SweepArgs) -> Result<ExitCode> {
    let fixed = args.params.resolve(default_params())?;
    let deg = args.params.degrees()?;
    let convert = |x: f64| {
        if deg && args.var.is_angle() {
            x.to_radians()
        } else {
            x
        }
    };
    let mut spec = SweepSpec::new(
        args.var,
        convert(args.start),
        convert(args.stop),
        args.points,
        fixed,
    )
    .with_backend(args.backend.into());
    spec.include_intensity = !args.no_intensity;
    let rows = sweep(&spec)?;
    write_table(&sweep_table(&spec, &rows), args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn figure(args: &FigureArgs) -> Result<ExitCode> {
    let mut opts = FigureOptions::defaults(args.id);
    opts.params = args.params.resolve(opts.params)?;
    let phase_grid = matches!(
        args.id,
        su11_core::analysis::FigureId::Fig4 | su11_core::analysis::FigureId::Fig5
    );
    let convert = |x: f64| -> Result<f64> {
        Ok(if phase_grid && args.params.degrees()? {
            x.to_radians()
        } else {
            x
        })
    };
    if let Some(s) = args.start {
        opts.start = convert(s)?;
    }
    if let Some(s) = args.stop {
        opts.stop = convert(s)?;
    }
    if let Some(n) = args.points {
        opts.points = n;
    }
    if let Some(series) = &args.series {
        opts.series = series.clone();
    }
    if let Some(l) = args.loss {
        opts.loss = l;
    }
    let table = build_figure(args.id, &opts)?;
    write_table(&table, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn optimum(args: &OptimumArgs) -> Result<ExitCode> {
    let eq12 = optimal_beta(args.g, args.r)?;
    let interval = match (args.lo, args.hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        (None, None) => default_beta_interval(args.g, args.r)?,
        _ => bail!("--lo and --hi must be given together"),
    };
    let opt = find_optimal_beta(args.g, args.r, interval)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    print_kv(&mut out, "g", args.g)?;
    print_kv(&mut out, "r", args.r)?;
    print_kv(&mut out, "eq12_beta", eq12)?;
    print_kv(&mut out, "beta_star", opt.beta_star)?;
    print_kv(&mut out, "ratio_at_min", opt.ratio_at_min)?;
    print_kv(&mut out, "relative_offset", (opt.beta_star - eq12) / eq12)?;
    Ok(ExitCode::SUCCESS)
}

pub fn validate(args: &ValidateArgs) -> Result<ExitCode> {
    if !(args.tolerance > 0.0) || !(args.tail_tolerance > 0.0) {
        bail!("tolerances must be positive");
    }
    let settings = ValidationSettings {
        cutoff: args.cutoff as usize,
        tolerance: args.tolerance,
        tail_tolerance: args.tail_tolerance,
        ..Default::default()
    };
    let report = run_validation(&settings);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    writeln!(
        out,
        "# cutoff = {}, tolerance = {:e}, tail_tolerance = {:e}",
        settings.cutoff, settings.tolerance, settings.tail_tolerance
    )?;
    for c in &report.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        match (&c.error, c.deviation) {
            (Some(e), _) => writeln!(out, "{status} {}: {e}", c.name)?,
            (None, Some(d)) => writeln!(
                out,
                "{status} {}: value {} reference {} deviation {:.3e}",
                c.name,
                format_value(c.value.unwrap_or(f64::NAN)),
                format_value(c.reference.unwrap_or(f64::NAN)),
                d
            )?,
            (None, None) => writeln!(out, "{status} {}", c.name)?,
        }
    }
    for note in &report.notes {
        writeln!(out, "note: {note}")?;
    }
    match report.max_deviation() {
        Some(d) => writeln!(out, "max_deviation={d:.3e}")?,
        None => writeln!(out, "max_deviation=none")?,
    }
    let passed = report.passed();
    writeln!(out, "result={}", if passed { "pass" } else { "fail" })?;
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}
