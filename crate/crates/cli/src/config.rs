//! Run configuration: defaults, an optional `key = value` file, then flags.

use anyhow::{bail, Context, Result};
use cmera_core::{Channel, Dimension, State, Theory, TheoryConfig};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

/// Input problems, reported with exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

pub fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(ConfigError(msg.into()).into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Output {
    Csv,
    Json,
}

/// Raw settings as strings, keyed by flag name without dashes. Later sources
/// overwrite earlier ones.
#[derive(Debug, Default, Clone)]
pub struct Settings(pub BTreeMap<String, String>);

pub const KEYS: &[&str] = &[
    "theory", "state", "lambda", "sigma", "j", "epsilon", "spacing", "spacings", "lmax", "xmin", "xmax", "points", "x0",
    "window", "output", "channel", "blocks", "input", "kind", "xcol", "ycol",
];

impl Settings {
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KEYS.contains(&key) {
            return config_err(format!("unknown setting '{key}'"));
        }
        self.0.insert(key.to_string(), value.into());
        Ok(())
    }

    pub fn parse_file_text(&mut self, text: &str) -> Result<()> {
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return config_err(format!("config line {}: expected key = value", no + 1));
            };
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        self.parse_file_text(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| ConfigError(format!("cannot parse {key} = '{v}'")).into()),
        }
    }
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| ConfigError(format!("cannot parse {key} = '{v}'")).into()))
        .collect()
}

/// Fully resolved configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub theory: TheoryConfig,
    pub spacing: f64,
    pub spacings: Vec<f64>,
    pub l_max: Option<u32>,
    pub xmin: f64,
    pub xmax: f64,
    pub points: usize,
    pub x0: f64,
    pub window: Option<(f64, f64)>,
    pub output: Output,
    pub channel: Option<Channel>,
    pub blocks: bool,
}

impl RunConfig {
    pub fn resolve(s: &Settings) -> Result<Self> {
        let theory: Theory = match s.get("theory") {
            Some(t) => t.parse().map_err(|e: cmera_core::Error| ConfigError(e.to_string()))?,
            None => Theory::Boson1d,
        };
        let mut tc = TheoryConfig::new(theory);
        if let Some(st) = s.get("state") {
            tc = tc.with_state(st.parse::<State>().map_err(|e| ConfigError(e.to_string()))?);
        }
        if let Some(v) = s.parsed("lambda")? {
            tc = tc.with_lambda(v);
        }
        if let Some(v) = s.parsed("sigma")? {
            if theory.statistics() != cmera_core::Statistics::Boson {
                return config_err("sigma applies to boson theories only");
            }
            tc = tc.with_sigma(v);
        }
        if let Some(v) = s.parsed("j")? {
            if theory.statistics() != cmera_core::Statistics::Fermion {
                return config_err("j applies to fermion theories only");
            }
            tc = tc.with_j(v);
        }
        if let Some(v) = s.parsed::<f64>("epsilon")? {
            if theory != Theory::Boson1d {
                return config_err(format!("epsilon applies to boson1d only (theory {theory})"));
            }
            tc = tc.with_epsilon(v);
        }
        tc.validate().map_err(|e| ConfigError(e.to_string()))?;

        let l_max = s.parsed::<u32>("lmax")?;
        if l_max.is_some() && theory.dimension() == Dimension::One {
            return config_err(format!("lmax applies to 2D theories only (theory {theory})"));
        }
        let l_max = match theory.dimension() {
            Dimension::Two => Some(l_max.unwrap_or(cmera_core::polar2d::DEFAULT_L_MAX)),
            Dimension::One => None,
        };
        let lam = tc.lambda;
        let spacing = s.parsed("spacing")?.unwrap_or(0.01 / lam);
        let spacings = match s.get("spacings") {
            Some(v) => parse_list("spacings", v)?,
            None => [0.01, 0.02, 0.04, 0.08, 0.16].iter().map(|a| a / lam).collect(),
        };
        let window = match s.get("window") {
            Some(v) => match parse_list("window", v)?.as_slice() {
                &[lo, hi] if lo > 0.0 && lo < hi => Some((lo, hi)),
                _ => return config_err(format!("window must be 'lo,hi' with 0 < lo < hi, got '{v}'")),
            },
            None => None,
        };
        let output = match s.get("output").unwrap_or("csv") {
            "csv" => Output::Csv,
            "json" => Output::Json,
            o => return config_err(format!("unknown output '{o}' (expected csv or json)")),
        };
        let channel = match s.get("channel") {
            Some(c) => {
                let ch = Channel::parse(c).ok_or_else(|| ConfigError(format!("unknown channel '{c}'")))?;
                if ch.statistics() != theory.statistics() {
                    return config_err(format!("channel {c} does not belong to {theory}"));
                }
                Some(ch)
            }
            None => None,
        };
        let blocks = match s.get("blocks") {
            None | Some("false") => false,
            Some("true") => {
                if theory.dimension() == Dimension::One {
                    return config_err("per-block output needs a 2D theory");
                }
                true
            }
            Some(v) => return config_err(format!("blocks must be true or false, got '{v}'")),
        };
        let cfg = RunConfig {
            theory: tc,
            spacing,
            spacings,
            l_max,
            xmin: s.parsed("xmin")?.unwrap_or(1.0 / lam),
            xmax: s.parsed("xmax")?.unwrap_or(10.0 / lam),
            points: s.parsed("points")?.unwrap_or(11),
            x0: s.parsed("x0")?.unwrap_or(1.28 / lam),
            window,
            output,
            channel,
            blocks,
        };
        if !(cfg.spacing > 0.0) || cfg.spacings.iter().any(|a| !(*a > 0.0)) {
            bail!(ConfigError("spacings must be positive".into()));
        }
        Ok(cfg)
    }

    /// Geometric grid from xmin to xmax.
    pub fn grid(&self) -> Result<Vec<f64>> {
        let (lo, hi, n) = (self.xmin, self.xmax, self.points);
        if !(lo > 0.0 && hi > lo && n >= 2) {
            return config_err(format!("empty range: need 0 < xmin < xmax and points >= 2, got [{lo}, {hi}] with {n}"));
        }
        Ok((0..n)
            .map(|i| if i + 1 == n { hi } else { lo * (hi / lo).powf(i as f64 / (n - 1) as f64) })
            .collect())
    }

    /// Resolved settings echoed into output headers, in fixed order.
    pub fn echo(&self) -> Vec<(String, String)> {
        let t = &self.theory;
        let mut v = vec![
            ("theory".to_string(), t.theory.to_string()),
            ("state".into(), format!("{:?}", t.state).to_lowercase()),
            ("lambda".into(), fmt_num(t.lambda)),
        ];
        match t.theory.statistics() {
            cmera_core::Statistics::Boson => v.push(("sigma".into(), fmt_num(t.sigma))),
            cmera_core::Statistics::Fermion => v.push(("j".into(), t.j.to_string())),
        }
        if t.theory == Theory::Boson1d {
            v.push(("epsilon".into(), fmt_num(t.epsilon)));
            v.push(("ir_scheme".into(), format!("{:?}", t.ir_scheme)));
        }
        if let Some(l) = self.l_max {
            v.push(("lmax".into(), l.to_string()));
        }
        v.push(("abs_tol".into(), fmt_num(t.abs_tol)));
        v.push(("rel_tol".into(), fmt_num(t.rel_tol)));
        v.push(("tol_eig".into(), fmt_num(cmera_core::gaussian_entropy::DEFAULT_TOL_EIG)));
        v
    }
}

/// Fixed float format used in every output: 12 significant digits, scientific.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}
