//! Position-space two-point functions, each split into a contact term
//! (coefficient of delta(x - y)) and a smooth part.

use crate::error::{Error, Result};
use crate::profiles::{Channel, State};
use crate::theory::{IrScheme, Theory, TheoryConfig};
use crate::transforms::{regulated_transform, transform, Kernel};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// How the smooth value multiplies into the full correlator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Real,
    /// Value times i.
    Imaginary,
    /// Real amplitude times e^{i phi_{x-y}} (2D fermion cross channel).
    Azimuthal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorValue {
    pub channel: Channel,
    pub delta_coeff: f64,
    pub smooth: f64,
    pub phase: Phase,
}

fn kernel_for(theory: Theory, channel: Channel) -> Option<Kernel> {
    match (theory, channel) {
        (_, Channel::PhiPi) => None,
        (Theory::Boson1d, _) | (Theory::Fermion1d, Channel::P11 | Channel::P22) => Some(Kernel::Cos),
        (Theory::Fermion1d, _) => Some(Kernel::Sin),
        (Theory::Boson2d, _) | (Theory::Fermion2d, Channel::P11 | Channel::P22) => Some(Kernel::J0),
        (Theory::Fermion2d, _) => Some(Kernel::Phase),
    }
}

fn phase_for(theory: Theory, channel: Channel) -> Phase {
    match (theory, channel) {
        (_, Channel::PhiPi) | (Theory::Fermion1d, Channel::P12) => Phase::Imaginary,
        (Theory::Fermion2d, Channel::P12) => Phase::Azimuthal,
        _ => Phase::Real,
    }
}

/// Smooth part of a channel at separation x >= 0. The 1D fermion cross
/// channel is the coefficient s(x) of <psi1^dag(x) psi2(0)> = i s(x); the 2D one
/// is the amplitude g(r) of g(r) e^{i phi}.
pub fn smooth_part(cfg: &TheoryConfig, channel: Channel, x: f64) -> Result<f64> {
    let profile = cfg.profile()?;
    profile.symbol(channel, 1.0)?;
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "smooth_part",
            value: x,
            requirement: "finite separation >= 0",
        });
    }
    if channel == Channel::P22 {
        return smooth_part(cfg, Channel::P11, x).map(|v| -v);
    }
    let Some(kernel) = kernel_for(cfg.theory, channel) else {
        return Ok(0.0);
    };
    if matches!(kernel, Kernel::Sin | Kernel::Phase) && x == 0.0 {
        return Ok(0.0);
    }
    let mut spec = cfg.quad_spec(x);
    if cfg.theory == Theory::Boson1d && (channel == Channel::PhiPhi || cfg.ir_scheme == IrScheme::AllChannels) {
        spec = spec.with_ir_kmin(cfg.ir_kmin());
    }
    let h = |k: f64| profile.subtracted(channel, k).unwrap_or(0.0);
    let est = match cfg.state {
        State::Product => return Ok(0.0),
        State::Target => {
            if x == 0.0 {
                return Err(Error::Domain {
                    function: "smooth_part (target state)",
                    value: x,
                    requirement: "x > 0",
                });
            }
            regulated_transform(kernel, h, x, &spec)?
        }
        State::Cmera => transform(kernel, h, x, &spec)?,
    };
    Ok(est.value)
}

/// Slope g(r)/r of the 2D fermion cross-channel amplitude, with its r -> 0 limit.
pub fn phase_amplitude_over_r(cfg: &TheoryConfig, r: f64) -> Result<f64> {
    if cfg.theory != Theory::Fermion2d {
        return Err(Error::UnknownChannel {
            channel: "p12 amplitude / r",
            theory: cfg.theory.name(),
        });
    }
    if r > 0.0 {
        return smooth_part(cfg, Channel::P12, r).map(|g| g / r);
    }
    let profile = cfg.profile()?;
    if cfg.state != State::Cmera {
        return Ok(0.0);
    }
    let spec = cfg.quad_spec(0.0);
    crate::transforms::radial_phase_slope_at_origin(|k| profile.subtracted(Channel::P12, k).unwrap_or(0.0), &spec)
}

fn value(cfg: &TheoryConfig, expect: Theory, channel: Channel, x: f64) -> Result<CorrelatorValue> {
    if cfg.theory != expect {
        return Err(Error::Config(format!("configuration is for {}, not {}", cfg.theory, expect)));
    }
    if !(x > 0.0) {
        return Err(Error::Domain {
            function: "correlator",
            value: x,
            requirement: "x > 0",
        });
    }
    let profile = cfg.profile()?;
    Ok(CorrelatorValue {
        channel,
        delta_coeff: profile.delta_coeff(channel)?,
        smooth: smooth_part(cfg, channel, x)?,
        phase: phase_for(cfg.theory, channel),
    })
}

pub fn boson1d(channel: Channel, x: f64, cfg: &TheoryConfig) -> Result<CorrelatorValue> {
    cfg.validate()?;
    value(cfg, Theory::Boson1d, channel, x)
}

pub fn boson2d(channel: Channel, r: f64, cfg: &TheoryConfig) -> Result<CorrelatorValue> {
    value(cfg, Theory::Boson2d, channel, r)
}

pub fn fermion1d(channel: Channel, x: f64, cfg: &TheoryConfig) -> Result<CorrelatorValue> {
    value(cfg, Theory::Fermion1d, channel, x)
}

pub fn fermion2d(channel: Channel, r: f64, cfg: &TheoryConfig) -> Result<CorrelatorValue> {
    value(cfg, Theory::Fermion2d, channel, r)
}

/// Correlator of any theory.
pub fn correlator(cfg: &TheoryConfig, channel: Channel, x: f64) -> Result<CorrelatorValue> {
    match cfg.theory {
        Theory::Boson1d => boson1d(channel, x, cfg),
        Theory::Boson2d => boson2d(channel, x, cfg),
        Theory::Fermion1d => fermion1d(channel, x, cfg),
        Theory::Fermion2d => fermion2d(channel, x, cfg),
    }
}

/// Smooth parts at many separations, evaluated in parallel (order preserved).
pub fn sample_smooth(cfg: &TheoryConfig, channel: Channel, xs: &[f64]) -> Result<Vec<f64>> {
    xs.par_iter().map(|&x| smooth_part(cfg, channel, x)).collect()
}

/// The same channel for the target state, computed through the same pipeline.
pub fn cft_reference(cfg: &TheoryConfig, channel: Channel, x: f64) -> Result<f64> {
    smooth_part(&cfg.with_state(State::Target), channel, x)
}
