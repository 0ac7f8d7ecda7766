use crate::error::{Error, Result};
use crate::profiles::{default_sigma, BosonProfile, Dimension, FermionProfile, SpectralProfile, State, Statistics};
use crate::transforms::QuadratureSpec;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theory {
    Boson1d,
    Boson2d,
    Fermion1d,
    Fermion2d,
}

impl Theory {
    pub const ALL: [Theory; 4] = [Theory::Boson1d, Theory::Boson2d, Theory::Fermion1d, Theory::Fermion2d];

    pub fn statistics(self) -> Statistics {
        match self {
            Theory::Boson1d | Theory::Boson2d => Statistics::Boson,
            _ => Statistics::Fermion,
        }
    }

    pub fn dimension(self) -> Dimension {
        match self {
            Theory::Boson1d | Theory::Fermion1d => Dimension::One,
            _ => Dimension::Two,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Theory::Boson1d => "boson1d",
            Theory::Boson2d => "boson2d",
            Theory::Fermion1d => "fermion1d",
            Theory::Fermion2d => "fermion2d",
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theory {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Theory::ALL
            .into_iter()
            .find(|t| t.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown theory '{s}' (expected boson1d, boson2d, fermion1d or fermion2d)")))
    }
}

impl FromStr for State {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "target" | "cft" => Ok(State::Target),
            "product" => Ok(State::Product),
            "cmera" => Ok(State::Cmera),
            _ => Err(Error::Config(format!("unknown state '{s}' (expected target, product or cmera)"))),
        }
    }
}

/// How the infrared regulator of the 1+1 boson enters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IrScheme {
    /// Momenta |k| < eps Lambda are excluded only from the channel whose
    /// function diverges at k = 0 (phi-phi). The pi-pi function is integrable
    /// and is transformed over the whole line.
    SingularChannels,
    /// Momenta |k| < eps Lambda are excluded from the subtracted function of
    /// every boson channel.
    AllChannels,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoryConfig {
    pub theory: Theory,
    pub state: State,
    pub lambda: f64,
    /// Boson only.
    pub sigma: f64,
    /// Fermion cutoff index.
    pub j: u32,
    /// Infrared regulator fraction, 1+1 boson only.
    pub epsilon: f64,
    pub ir_scheme: IrScheme,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl TheoryConfig {
    pub fn new(theory: Theory) -> Self {
        Self {
            theory,
            state: State::Cmera,
            lambda: 1.0,
            sigma: default_sigma(),
            j: 0,
            epsilon: if theory == Theory::Boson1d { 1e-6 } else { 0.0 },
            ir_scheme: IrScheme::SingularChannels,
            abs_tol: 1e-14,
            rel_tol: 1e-10,
        }
    }

    pub fn with_state(mut self, state: State) -> Self {
        self.state = state;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_j(mut self, j: u32) -> Self {
        self.j = j;
        self
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_ir_scheme(mut self, scheme: IrScheme) -> Self {
        self.ir_scheme = scheme;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.profile()?;
        if self.theory == Theory::Boson1d {
            if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
                return Err(Error::Config(format!(
                    "boson1d needs an infrared regulator 0 < epsilon < 1, got {}",
                    self.epsilon
                )));
            }
        } else if self.epsilon != 0.0 {
            return Err(Error::Config(format!("epsilon applies to boson1d only (theory {})", self.theory)));
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Config("quadrature tolerances must be positive".into()));
        }
        Ok(())
    }

    pub fn profile(&self) -> Result<SpectralProfile> {
        Ok(match self.theory.statistics() {
            Statistics::Boson => SpectralProfile::Boson(BosonProfile::new(self.state, self.lambda, self.sigma)?),
            Statistics::Fermion => SpectralProfile::Fermion(FermionProfile::new(self.state, self.lambda, self.j)?),
        })
    }

    /// Quadrature settings at separation x, without infrared cut.
    pub fn quad_spec(&self, x: f64) -> QuadratureSpec {
        QuadratureSpec::for_separation(self.lambda, x).with_tolerances(self.abs_tol, self.rel_tol)
    }

    /// Infrared cut eps Lambda (0 outside the 1+1 boson).
    pub fn ir_kmin(&self) -> f64 {
        if self.theory == Theory::Boson1d {
            self.epsilon * self.lambda
        } else {
            0.0
        }
    }
}
