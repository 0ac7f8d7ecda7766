//! Characteristic functions of the three Gaussian states: alpha(k) for the
//! boson, theta(k) for the Dirac fermion.

use crate::error::{Error, Result};
use crate::specfun::{ei, erfc, gamma_half, upper_gamma_half, EULER_GAMMA};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Statistics {
    Boson,
    Fermion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum State {
    /// CFT ground state.
    Target,
    /// Unentangled reference state.
    Product,
    Cmera,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dimension {
    One,
    Two,
}

/// Two-point channels. Boson: PhiPhi, PiPi, PhiPi. Fermion: P11 = <psi1^dag psi1>,
/// P12 = <psi1^dag psi2>, P22 = <psi2^dag psi2>.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Channel {
    PhiPhi,
    PiPi,
    PhiPi,
    P11,
    P12,
    P22,
}

impl Channel {
    pub fn name(self) -> &'static str {
        match self {
            Channel::PhiPhi => "phiphi",
            Channel::PiPi => "pipi",
            Channel::PhiPi => "phipi",
            Channel::P11 => "p11",
            Channel::P12 => "p12",
            Channel::P22 => "p22",
        }
    }

    pub fn statistics(self) -> Statistics {
        match self {
            Channel::PhiPhi | Channel::PiPi | Channel::PhiPi => Statistics::Boson,
            _ => Statistics::Fermion,
        }
    }

    pub fn parse(s: &str) -> Option<Channel> {
        Some(match s.to_ascii_lowercase().as_str() {
            "phiphi" => Channel::PhiPhi,
            "pipi" => Channel::PiPi,
            "phipi" => Channel::PhiPi,
            "p11" => Channel::P11,
            "p12" => Channel::P12,
            "p22" => Channel::P22,
            _ => return None,
        })
    }
}

/// Default sigma, which makes the infrared slope of the cMERA alpha equal to one.
pub fn default_sigma() -> f64 {
    EULER_GAMMA.exp()
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BosonProfile {
    pub state: State,
    pub lambda: f64,
    pub sigma: f64,
}

impl BosonProfile {
    pub fn new(state: State, lambda: f64, sigma: f64) -> Result<Self> {
        check_positive("lambda", lambda)?;
        check_positive("sigma", sigma)?;
        Ok(Self { state, lambda, sigma })
    }

    pub fn alpha(&self, k: f64) -> f64 {
        let k = k.abs();
        match self.state {
            State::Target => k,
            State::Product => self.lambda,
            State::Cmera => {
                if k == 0.0 {
                    return 0.0;
                }
                let y = -k * k / (self.sigma * self.lambda * self.lambda);
                // y < 0 always here, so ei cannot fail
                self.lambda * (0.5 * ei(y).unwrap_or(0.0)).exp()
            }
        }
    }

    /// Slope of alpha at the origin: sqrt(e^gamma / sigma) for the cMERA.
    pub fn ir_slope(&self) -> f64 {
        match self.state {
            State::Target => 1.0,
            State::Product => 0.0,
            State::Cmera => (EULER_GAMMA.exp() / self.sigma).sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FermionProfile {
    pub state: State,
    pub lambda: f64,
    /// Cutoff index j of the Gaussian cutoff family.
    pub j: u32,
}

impl FermionProfile {
    pub fn new(state: State, lambda: f64, j: u32) -> Result<Self> {
        check_positive("lambda", lambda)?;
        if j > 40 {
            return Err(Error::Config(format!("cutoff index j = {j} is out of range (max 40)")));
        }
        Ok(Self { state, lambda, j })
    }

    /// Normalisation C_j = (pi/2)/Gamma(j + 1/2), fixed by theta(0) = pi/4.
    pub fn c_j(j: u32) -> f64 {
        std::f64::consts::FRAC_PI_2 / gamma_half(j)
    }

    pub fn theta(&self, k: f64) -> f64 {
        match self.state {
            State::Target => FRAC_PI_4,
            State::Product => 0.0,
            State::Cmera => {
                let q = k.abs() / self.lambda;
                if self.j == 0 {
                    FRAC_PI_4 * erfc(q)
                } else {
                    let g = upper_gamma_half(self.j, q * q).unwrap_or(0.0);
                    0.5 * Self::c_j(self.j) * g
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpectralProfile {
    Boson(BosonProfile),
    Fermion(FermionProfile),
}

/// Regularity class of a channel function at k = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OriginKind {
    /// ~ |k|^{2n-1}
    PowerOdd(u32),
    /// ~ |k|^{2n} e^{i phi_k}
    PowerEvenPhase(u32),
    /// 1D: the n-th derivative jumps at 0.
    KinkOrder(u32),
    Constant,
    Smooth,
}

impl OriginKind {
    /// Power p of the leading non-analytic term |k|^p.
    pub fn leading_power(self) -> Option<i32> {
        match self {
            OriginKind::PowerOdd(n) => Some(2 * n as i32 - 1),
            OriginKind::PowerEvenPhase(n) => Some(2 * n as i32),
            OriginKind::KinkOrder(n) => Some(n as i32),
            OriginKind::Constant | OriginKind::Smooth => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OriginBehavior {
    pub kind: OriginKind,
    /// Coefficient c of the leading non-analytic term c |k|^p (0 when none).
    pub coefficient: f64,
}

impl SpectralProfile {
    pub fn statistics(&self) -> Statistics {
        match self {
            SpectralProfile::Boson(_) => Statistics::Boson,
            SpectralProfile::Fermion(_) => Statistics::Fermion,
        }
    }

    pub fn state(&self) -> State {
        match self {
            SpectralProfile::Boson(b) => b.state,
            SpectralProfile::Fermion(f) => f.state,
        }
    }

    pub fn lambda(&self) -> f64 {
        match self {
            SpectralProfile::Boson(b) => b.lambda,
            SpectralProfile::Fermion(f) => f.lambda,
        }
    }

    fn check_channel(&self, channel: Channel) -> Result<()> {
        if channel.statistics() == self.statistics() {
            Ok(())
        } else {
            Err(Error::UnknownChannel {
                channel: channel.name(),
                theory: match self.statistics() {
                    Statistics::Boson => "boson",
                    Statistics::Fermion => "fermion",
                },
            })
        }
    }

    /// Momentum-space channel function on k >= 0: 1/(2 alpha), alpha/2 and the
    /// constant 1/2 for the boson; sin^2 theta, (1/2) sin 2 theta and
    /// cos^2 theta for the fermion. The fermion cross channel is odd in k.
    pub fn symbol(&self, channel: Channel, k: f64) -> Result<f64> {
        self.check_channel(channel)?;
        Ok(match (self, channel) {
            (SpectralProfile::Boson(b), Channel::PhiPhi) => 0.5 / b.alpha(k),
            (SpectralProfile::Boson(b), Channel::PiPi) => 0.5 * b.alpha(k),
            (SpectralProfile::Boson(_), _) => 0.5,
            (SpectralProfile::Fermion(f), Channel::P11) => f.theta(k).sin().powi(2),
            (SpectralProfile::Fermion(f), Channel::P12) => 0.5 * (2.0 * f.theta(k)).sin(),
            (SpectralProfile::Fermion(f), _) => f.theta(k).cos().powi(2),
        })
    }

    /// Coefficient of the contact term delta(x - y) carried by a channel:
    /// 1/(2 Lambda), Lambda/2 and 1/2 (imaginary) for the boson, 0, 0, 1 for
    /// the fermion.
    pub fn delta_coeff(&self, channel: Channel) -> Result<f64> {
        self.check_channel(channel)?;
        let l = self.lambda();
        Ok(match channel {
            Channel::PhiPhi => 0.5 / l,
            Channel::PiPi => 0.5 * l,
            Channel::PhiPi => 0.5,
            Channel::P11 | Channel::P12 => 0.0,
            Channel::P22 => 1.0,
        })
    }

    /// Channel function with its contact part removed. For the fermion P22
    /// this is cos^2 theta - 1 = -sin^2 theta.
    pub fn subtracted(&self, channel: Channel, k: f64) -> Result<f64> {
        let s = self.symbol(channel, k)?;
        let d = self.delta_coeff(channel)?;
        Ok(match channel {
            Channel::PhiPi => 0.0,
            _ => s - d,
        })
    }

    /// Analytic classification of the channel function at the origin.
    pub fn origin_behavior(&self, channel: Channel, dim: Dimension) -> Result<OriginBehavior> {
        self.check_channel(channel)?;
        let none = OriginBehavior {
            kind: OriginKind::Constant,
            coefficient: 0.0,
        };
        if self.state() == State::Product || channel == Channel::PhiPi {
            return Ok(none);
        }
        let b = match self {
            SpectralProfile::Boson(b) => {
                let s = b.ir_slope();
                match (channel, dim) {
                    (Channel::PhiPhi, _) => OriginBehavior {
                        kind: OriginKind::PowerOdd(0),
                        coefficient: 0.5 / s,
                    },
                    (_, Dimension::One) => OriginBehavior {
                        kind: OriginKind::KinkOrder(1),
                        coefficient: 0.5 * s,
                    },
                    (_, Dimension::Two) => OriginBehavior {
                        kind: OriginKind::PowerOdd(1),
                        coefficient: 0.5 * s,
                    },
                }
            }
            SpectralProfile::Fermion(f) => match channel {
                Channel::P12 => OriginBehavior {
                    kind: match dim {
                        Dimension::One => OriginKind::KinkOrder(0),
                        Dimension::Two => OriginKind::PowerEvenPhase(0),
                    },
                    coefficient: 0.5,
                },
                _ if f.state == State::Target => none,
                _ => {
                    // theta ~ pi/4 - (pi/4) |k/Lambda|^{2j+1} / Gamma(j + 3/2)
                    let c = FRAC_PI_4 / (gamma_half(f.j + 1) * f.lambda.powi(2 * f.j as i32 + 1));
                    let coefficient = if channel == Channel::P11 { -c } else { c };
                    OriginBehavior {
                        kind: match dim {
                            Dimension::One => OriginKind::KinkOrder(2 * f.j + 1),
                            Dimension::Two => OriginKind::PowerOdd(f.j + 1),
                        },
                        coefficient,
                    }
                }
            },
        };
        Ok(b)
    }

    /// Local log-slope of |h(k) - h(0)| between k and 2k, i.e. the measured
    /// power of the leading non-analytic term. None when h is constant. The
    /// odd cross channel jumps at 0, so its value is used unshifted.
    pub fn measured_origin_power(&self, channel: Channel, k: f64) -> Result<Option<f64>> {
        let h0 = self.symbol(channel, 0.0)?;
        let shift = if h0.is_finite() && channel != Channel::P12 { h0 } else { 0.0 };
        let d1 = (self.symbol(channel, k)? - shift).abs();
        let d2 = (self.symbol(channel, 2.0 * k)? - shift).abs();
        if d1 == 0.0 || d2 == 0.0 {
            return Ok(None);
        }
        Ok(Some((d2 / d1).ln() / std::f64::consts::LN_2))
    }
}
