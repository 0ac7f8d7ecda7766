use crate::config::{config_err, fmt_num, RunConfig};
use crate::table::{header, meta_object, read_series, Cell, FitReport, Table};
use anyhow::Result;
use cmera_core::analysis::{self, fit_central_charge, fit_log_slope, fit_power, short_entropy};
use cmera_core::correlators::sample_smooth;
use cmera_core::gaussian_entropy::{convergence_sweep, entropy_profile};
use cmera_core::polar2d::disc_entropy;
use cmera_core::profiles::SpectralProfile;
use cmera_core::{Channel, Dimension, ShortDistanceConstants, State, Statistics, Theory};

/// Characteristic function of all three states on a geometric k grid.
pub fn profile(cfg: &RunConfig) -> Result<Table> {
    let ks = cfg.grid()?;
    let name = match cfg.theory.theory.statistics() {
        Statistics::Boson => "alpha",
        Statistics::Fermion => "theta",
    };
    let states = [State::Target, State::Product, State::Cmera];
    let profiles: Vec<SpectralProfile> = states
        .iter()
        .map(|&s| cfg.theory.with_state(s).profile())
        .collect::<cmera_core::Result<_>>()?;
    let mut t = Table::new("profile", &["k", "target", "product", "cmera"], cfg.echo());
    t.meta("function", name);
    for k in ks {
        let mut row = vec![Cell::Num(k)];
        for p in &profiles {
            row.push(Cell::Num(match p {
                SpectralProfile::Boson(b) => b.alpha(k),
                SpectralProfile::Fermion(f) => f.theta(k),
            }));
        }
        t.push(row);
    }
    Ok(t)
}

fn channels(cfg: &RunConfig) -> Vec<Channel> {
    if let Some(c) = cfg.channel {
        return vec![c];
    }
    match cfg.theory.theory.statistics() {
        Statistics::Boson => vec![Channel::PhiPhi, Channel::PiPi],
        Statistics::Fermion => vec![Channel::P11, Channel::P12, Channel::P22],
    }
}

/// Long format: one row per (separation, channel).
pub fn correlator(cfg: &RunConfig) -> Result<Table> {
    let xs = cfg.grid()?;
    let p = cfg.theory.profile()?;
    let mut t = Table::new("correlator", &["separation", "channel", "delta_coeff", "smooth"], cfg.echo());
    let chans = channels(cfg);
    let values: Vec<Vec<f64>> = chans
        .iter()
        .map(|&c| sample_smooth(&cfg.theory, c, &xs))
        .collect::<cmera_core::Result<_>>()?;
    for (i, &x) in xs.iter().enumerate() {
        for (c, v) in chans.iter().zip(&values) {
            t.push(vec![Cell::Num(x), c.name().into(), Cell::Num(p.delta_coeff(*c)?), Cell::Num(v[i])]);
        }
    }
    Ok(t)
}

pub fn entropy(cfg: &RunConfig) -> Result<Table> {
    let xs = cfg.grid()?;
    if cfg.blocks {
        let l_max = cfg.l_max.unwrap_or(cmera_core::polar2d::DEFAULT_L_MAX);
        let mut t = Table::new("entropy", &["x", "block_index", "S_block", "cumulative_S"], cfg.echo());
        t.meta("spacing", fmt_num(cfg.spacing));
        for &x in &xs {
            let d = disc_entropy(x, cfg.spacing, l_max, &cfg.theory)?;
            for (idx, s, acc) in d.cumulative() {
                t.push(vec![Cell::Num(x), Cell::Num(idx), Cell::Num(s), Cell::Num(acc)]);
            }
        }
        return Ok(t);
    }
    let prof = entropy_profile(&xs, cfg.spacing, &cfg.theory, cfg.l_max)?;
    let mut t = Table::new("entropy", &["x", "S", "a", "epsilon", "l_max", "discarded_fraction"], cfg.echo());
    for p in &prof.points {
        t.push(vec![
            Cell::Num(p.x),
            Cell::Num(p.s),
            Cell::Num(p.a),
            Cell::Num(prof.epsilon),
            Cell::Int(prof.l_max.map_or(-1, i64::from)),
            Cell::Num(p.discarded_fraction),
        ]);
    }
    if let Some(w) = cfg.window {
        let c = fit_central_charge(&prof.series(), w)?;
        t.meta("central_charge", fmt_num(c.exponent_or_slope));
        t.meta("central_charge_stderr", fmt_num(c.stderr));
    }
    Ok(t)
}

pub fn convergence(cfg: &RunConfig) -> Result<Table> {
    let sweep = convergence_sweep(cfg.x0, &cfg.spacings, &cfg.theory, cfg.l_max)?;
    let mut t = Table::new("convergence", &["a", "S", "diff"], cfg.echo());
    t.meta("x0", fmt_num(sweep.x0));
    t.meta("a_ref", fmt_num(sweep.a_ref));
    if let Some(f) = sweep.slope {
        t.meta("slope", fmt_num(f.exponent_or_slope));
        t.meta("slope_stderr", fmt_num(f.stderr));
    }
    for p in &sweep.points {
        t.push(vec![Cell::Num(p.a), Cell::Num(p.s), Cell::Num(p.diff)]);
    }
    Ok(t)
}

/// Short-distance entropy estimate; 1D fermions also get the small-x expansion.
pub fn estimate(cfg: &RunConfig) -> Result<Table> {
    let xs = cfg.grid()?;
    let th = cfg.theory.theory;
    let c = ShortDistanceConstants::measure(&cfg.theory)?;
    let lam = cfg.theory.lambda;
    let expansion = th == Theory::Fermion1d;
    let cols: &[&str] = if expansion { &["x", "S_estimate", "S_expansion"] } else { &["x", "S_estimate"] };
    let mut t = Table::new("estimate", cols, cfg.echo());
    t.meta("A", fmt_num(c.a));
    t.meta("B", fmt_num(c.b));
    for x in xs {
        let mut row = vec![Cell::Num(x), Cell::Num(short_entropy(th, x, c, lam)?)];
        if expansion {
            row.push(Cell::Num(analysis::fermion1d_short_entropy_expansion(x, c, lam)));
        }
        t.push(row);
    }
    if th.dimension() == Dimension::Two {
        t.meta("region", "disc");
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitKind {
    /// log-log slope
    Power,
    /// slope of y against ln x
    Log,
    /// 3 x the log slope
    CentralCharge,
}

pub fn fit(cfg: &RunConfig, input: &str, xcol: &str, ycol: &str, kind: FitKind) -> Result<FitReport> {
    let Some(window) = cfg.window else {
        return config_err("fit needs --window lo,hi");
    };
    let series = read_series(input, xcol, ycol)?;
    let f = match kind {
        FitKind::Power => {
            // decaying correlators are often negative; fit the magnitude
            let abs: Vec<(f64, f64)> = series.iter().map(|&(x, y)| (x, y.abs())).collect();
            fit_power(&abs, window)?
        }
        FitKind::Log => fit_log_slope(&series, window)?,
        FitKind::CentralCharge => fit_central_charge(&series, window)?,
    };
    let mut meta = header("fit");
    meta.push(("kind".into(), format!("{kind:?}")));
    meta.push(("columns".into(), format!("{xcol},{ycol}")));
    Ok(FitReport {
        meta: meta_object(&meta),
        exponent: f.exponent_or_slope,
        stderr: f.stderr,
        window: f.window,
        n_points: f.n_points,
        residual_norm: f.residual_norm,
    })
}
