//! Decay-exponent prediction from origin regularity, short-distance entropy
//! estimates and least-squares fitting utilities.

use crate::correlators::{phase_amplitude_over_r, smooth_part};
use crate::error::{Error, Result};
use crate::gaussian_entropy::{binary_entropy, thermal_mode_entropy};
use crate::profiles::{Channel, Dimension, OriginKind, SpectralProfile};
use crate::theory::{Theory, TheoryConfig};
use crate::transforms::transform;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const MIN_FIT_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Fitted exponent, slope or central charge.
    pub exponent_or_slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub window: (f64, f64),
    pub residual_norm: f64,
    pub n_points: usize,
}

fn select(series: &[(f64, f64)], window: (f64, f64)) -> Result<Vec<(f64, f64)>> {
    select_min(series, window, MIN_FIT_POINTS)
}

fn select_min(series: &[(f64, f64)], window: (f64, f64), min_points: usize) -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = window;
    let min = series.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let max = series.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let slack = 1e-9;
    if !(lo <= hi) || series.is_empty() || lo < min * (1.0 - slack) || hi > max * (1.0 + slack) {
        return Err(Error::WindowOutsideRange { lo, hi, min, max });
    }
    let pts: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .filter(|&(x, _)| x >= lo * (1.0 - slack) && x <= hi * (1.0 + slack))
        .collect();
    if pts.len() < min_points {
        return Err(Error::InsufficientPoints {
            needed: min_points,
            found: pts.len(),
        });
    }
    Ok(pts)
}

/// Ordinary least squares of v on u: (slope, intercept, stderr of slope, residual 2-norm).
fn ols(u: &[f64], v: &[f64]) -> (f64, f64, f64, f64) {
    let n = u.len() as f64;
    let mu = u.iter().sum::<f64>() / n;
    let mv = v.iter().sum::<f64>() / n;
    let sxx: f64 = u.iter().map(|x| (x - mu).powi(2)).sum();
    let sxy: f64 = u.iter().zip(v).map(|(x, y)| (x - mu) * (y - mv)).sum();
    let slope = sxy / sxx;
    let intercept = mv - slope * mu;
    let ssr: f64 = u.iter().zip(v).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = if u.len() > 2 { (ssr / (n - 2.0) / sxx).sqrt() } else { 0.0 };
    (slope, intercept, stderr, ssr.sqrt())
}

fn finish(window: (f64, f64), n: usize, (s, i, e, r): (f64, f64, f64, f64)) -> FitResult {
    FitResult {
        exponent_or_slope: s,
        intercept: i,
        stderr: e,
        window,
        residual_norm: r,
        n_points: n,
    }
}

/// Slope of ln y against ln x.
pub fn fit_power(series: &[(f64, f64)], window: (f64, f64)) -> Result<FitResult> {
    fit_power_with_min(series, window, MIN_FIT_POINTS)
}

/// `fit_power` with a custom minimum point count (at least 2).
pub fn fit_power_with_min(series: &[(f64, f64)], window: (f64, f64), min_points: usize) -> Result<FitResult> {
    let pts = select_min(series, window, min_points.max(2))?;
    if let Some(&(x, y)) = pts.iter().find(|p| !(p.1 > 0.0)) {
        return Err(Error::NonPositive { x, y });
    }
    let u: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let v: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    Ok(finish(window, pts.len(), ols(&u, &v)))
}

/// Slope of y against ln x.
pub fn fit_log_slope(series: &[(f64, f64)], window: (f64, f64)) -> Result<FitResult> {
    let pts = select(series, window)?;
    let u: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let v: Vec<f64> = pts.iter().map(|p| p.1).collect();
    Ok(finish(window, pts.len(), ols(&u, &v)))
}

/// c = 3 x slope of S against ln x (S in nats).
pub fn fit_central_charge(series: &[(f64, f64)], window: (f64, f64)) -> Result<FitResult> {
    let mut f = fit_log_slope(series, window)?;
    f.exponent_or_slope *= 3.0;
    f.stderr *= 3.0;
    Ok(f)
}

/// Least-squares coefficients c_i of y = sum_i c_i x^{-p_i} over the window.
pub fn fit_inverse_powers(series: &[(f64, f64)], window: (f64, f64), powers: &[f64]) -> Result<Vec<f64>> {
    let pts = select(series, window)?;
    let m = powers.len();
    if m == 0 || pts.len() < m {
        return Err(Error::InsufficientPoints {
            needed: m.max(1),
            found: pts.len(),
        });
    }
    // rows weighted by 1/|y| so every point counts with its relative error
    let rows: Vec<(Vec<f64>, f64)> = pts
        .iter()
        .map(|&(x, y)| {
            let w = if y != 0.0 { 1.0 / y.abs() } else { 1.0 };
            (powers.iter().map(|p| w * x.powf(-p)).collect(), w * y)
        })
        .collect();
    // column scaling then normal equations
    let scale: Vec<f64> = (0..m)
        .map(|c| rows.iter().map(|r| r.0[c] * r.0[c]).sum::<f64>().sqrt())
        .collect();
    let mut ata = vec![vec![0.0; m + 1]; m];
    for (row, rhs) in &rows {
        for i in 0..m {
            for k in 0..m {
                ata[i][k] += row[i] / scale[i] * row[k] / scale[k];
            }
            ata[i][m] += row[i] / scale[i] * rhs;
        }
    }
    // Gaussian elimination with partial pivoting
    for col in 0..m {
        let piv = (col..m).max_by(|&a, &b| ata[a][col].abs().total_cmp(&ata[b][col].abs())).unwrap();
        ata.swap(col, piv);
        for r in col + 1..m {
            let f = ata[r][col] / ata[col][col];
            for c in col..=m {
                ata[r][c] -= f * ata[col][c];
            }
        }
    }
    let mut sol = vec![0.0; m];
    for i in (0..m).rev() {
        let mut s = ata[i][m];
        for k in i + 1..m {
            s -= ata[i][k] * sol[k];
        }
        sol[i] = s / ata[i][i];
    }
    Ok(sol.iter().zip(&scale).map(|(s, c)| s / c).collect())
}

/// Long-distance decay exponent of the position-space correlator implied by
/// the channel's regularity class at k = 0.
pub fn predict_exponent(profile: &SpectralProfile, channel: Channel, dim: Dimension) -> Result<f64> {
    let ob = profile.origin_behavior(channel, dim)?;
    let n = |k: u32| k as f64;
    match (dim, ob.kind) {
        (Dimension::One, OriginKind::KinkOrder(k)) => Ok(n(k) + 1.0),
        (Dimension::One, OriginKind::PowerOdd(0)) => Err(Error::Unclassifiable(
            "|k|^{-1} in one dimension transforms to a logarithm".into(),
        )),
        (Dimension::One, OriginKind::PowerOdd(k)) => Ok(2.0 * n(k)),
        (Dimension::Two, OriginKind::PowerOdd(k)) => Ok(2.0 * n(k) + 1.0),
        (Dimension::Two, OriginKind::PowerEvenPhase(k)) => Ok(2.0 * n(k) + 2.0),
        (_, kind) => Err(Error::Unclassifiable(format!("{kind:?} in {dim:?}"))),
    }
}

/// Zero-separation constants of the smooth parts, dimensionless:
/// boson1d A = f(0), B = g(0)/Lambda^2; boson2d A = f(0)/Lambda, B = g(0)/Lambda^3;
/// fermion1d A = P11(0)/Lambda, B = s'(0)/Lambda^2; fermion2d A = P11(0)/Lambda^2,
/// B = g'(0)/Lambda^3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShortDistanceConstants {
    pub a: f64,
    pub b: f64,
}

impl ShortDistanceConstants {
    pub fn measure(cfg: &TheoryConfig) -> Result<Self> {
        let l = cfg.lambda;
        Ok(match cfg.theory {
            Theory::Boson1d => Self {
                a: smooth_part(cfg, Channel::PhiPhi, 0.0)?,
                b: smooth_part(cfg, Channel::PiPi, 0.0)? / (l * l),
            },
            Theory::Boson2d => Self {
                a: smooth_part(cfg, Channel::PhiPhi, 0.0)? / l,
                b: smooth_part(cfg, Channel::PiPi, 0.0)? / l.powi(3),
            },
            Theory::Fermion1d => {
                let p = cfg.profile()?;
                // s'(0) = (1/pi) int k (1/2) sin 2 theta dk
                let slope = transform(
                    crate::transforms::Kernel::Cos,
                    |k| k * p.subtracted(Channel::P12, k).unwrap_or(0.0),
                    0.0,
                    &cfg.quad_spec(0.0),
                )?
                .value;
                Self {
                    a: smooth_part(cfg, Channel::P11, 0.0)? / l,
                    b: slope / (l * l),
                }
            }
            Theory::Fermion2d => Self {
                a: smooth_part(cfg, Channel::P11, 0.0)? / (l * l),
                b: phase_amplitude_over_r(cfg, 0.0)? / l.powi(3),
            },
        })
    }
}

/// Leading short-distance entanglement entropy (nats) of an interval or disc
/// of size x, where all smooth correlators are replaced by their values at
/// zero separation. Boson: thermal entropy of the single excited mode;
/// fermion: twice the binary entropy.
pub fn short_entropy(theory: Theory, x: f64, consts: ShortDistanceConstants, lambda: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain {
            function: "short_entropy",
            value: x,
            requirement: "x >= 0",
        });
    }
    let lx = lambda * x;
    let ShortDistanceConstants { a, b } = consts;
    match theory {
        Theory::Boson1d | Theory::Boson2d => {
            let lam = if theory == Theory::Boson1d {
                (1.0 + 2.0 * a * lx) * (1.0 + 2.0 * b * lx) / 4.0
            } else {
                (1.0 + 2.0 * PI * a * lx * lx) * (1.0 + 2.0 * PI * b * lx * lx) / 4.0
            };
            if !(lam >= 0.25) {
                return Err(Error::Domain {
                    function: "short_entropy (boson symplectic eigenvalue)",
                    value: lam,
                    requirement: "lambda >= 1/4",
                });
            }
            Ok(thermal_mode_entropy(lam))
        }
        Theory::Fermion1d | Theory::Fermion2d => {
            let lam = if theory == Theory::Fermion1d { a * lx } else { PI * a * lx * lx };
            if lam == 0.0 {
                return Ok(0.0);
            }
            if !(lam > 0.0 && lam < 1.0) {
                return Err(Error::Domain {
                    function: "short_entropy (fermion eigenvalue)",
                    value: lam,
                    requirement: "0 < lambda < 1",
                });
            }
            Ok(2.0 * binary_entropy(lam))
        }
    }
}

/// Small-eigenvalue expansion of the fermion 1D estimate, 2 A Lambda x (1 - ln(A Lambda x)).
pub fn fermion1d_short_entropy_expansion(x: f64, consts: ShortDistanceConstants, lambda: f64) -> f64 {
    let l = consts.a * lambda * x;
    if l <= 0.0 {
        0.0
    } else {
        2.0 * l * (1.0 - l.ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{BosonProfile, FermionProfile, State};

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
    }

    #[test]
    fn exact_power_law() {
        let s: Vec<(f64, f64)> = grid(1.0, 100.0, 20).into_iter().map(|x| (x, 7.0 * x.powi(-2))).collect();
        let f = fit_power(&s, (1.0, 100.0)).unwrap();
        assert!((f.exponent_or_slope + 2.0).abs() < 1e-12);
        assert!(f.residual_norm < 1e-12);
        assert!((f.intercept - 7f64.ln()).abs() < 1e-12);
        assert_eq!(f.n_points, 20);
    }

    #[test]
    fn perturbed_power_law() {
        let s: Vec<(f64, f64)> = grid(1.0, 1000.0, 60)
            .into_iter()
            .map(|x| (x, x.powi(-2) * (1.0 + 0.01 * x.ln().sin())))
            .collect();
        let f = fit_power(&s, (1.0, 1000.0)).unwrap();
        assert!((f.exponent_or_slope + 2.0).abs() < 0.01);
    }

    #[test]
    fn central_charge_synthetic() {
        let s: Vec<(f64, f64)> = grid(1.0, 10.0, 12).into_iter().map(|x| (x, x.ln() / 3.0 + 5.0)).collect();
        let f = fit_central_charge(&s, (1.0, 10.0)).unwrap();
        assert!((f.exponent_or_slope - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_errors() {
        let s: Vec<(f64, f64)> = grid(1.0, 10.0, 12).into_iter().map(|x| (x, x)).collect();
        assert!(matches!(fit_power(&s, (2.0, 2.5)), Err(Error::InsufficientPoints { .. })));
        assert!(matches!(fit_power(&s, (0.5, 10.0)), Err(Error::WindowOutsideRange { .. })));
        let mut bad = s.clone();
        bad[5].1 = -1.0;
        assert!(matches!(fit_power(&bad, (1.0, 10.0)), Err(Error::NonPositive { .. })));
    }

    #[test]
    fn inverse_power_coefficients() {
        let s: Vec<(f64, f64)> = grid(5.0, 30.0, 30)
            .into_iter()
            .map(|x| (x, 0.3 * x.powi(-4) - 2.0 * x.powi(-6)))
            .collect();
        let c = fit_inverse_powers(&s, (5.0, 30.0), &[4.0, 6.0]).unwrap();
        assert!((c[0] - 0.3).abs() < 1e-10 && (c[1] + 2.0).abs() < 1e-8);
    }

    #[test]
    fn predictions() {
        let b = SpectralProfile::Boson(BosonProfile::new(State::Cmera, 1.0, crate::profiles::default_sigma()).unwrap());
        assert_eq!(predict_exponent(&b, Channel::PiPi, Dimension::One).unwrap(), 2.0);
        assert_eq!(predict_exponent(&b, Channel::PhiPhi, Dimension::Two).unwrap(), 1.0);
        assert_eq!(predict_exponent(&b, Channel::PiPi, Dimension::Two).unwrap(), 3.0);
        assert!(predict_exponent(&b, Channel::PhiPhi, Dimension::One).is_err());
        for j in 0..4 {
            let f = SpectralProfile::Fermion(FermionProfile::new(State::Cmera, 1.0, j).unwrap());
            assert_eq!(predict_exponent(&f, Channel::P11, Dimension::One).unwrap(), 2.0 * j as f64 + 2.0);
            assert_eq!(predict_exponent(&f, Channel::P11, Dimension::Two).unwrap(), 2.0 * j as f64 + 3.0);
            assert_eq!(predict_exponent(&f, Channel::P12, Dimension::Two).unwrap(), 2.0);
            assert_eq!(predict_exponent(&f, Channel::P12, Dimension::One).unwrap(), 1.0);
        }
        let p = SpectralProfile::Fermion(FermionProfile::new(State::Product, 1.0, 0).unwrap());
        assert!(predict_exponent(&p, Channel::P11, Dimension::One).is_err());
    }

    #[test]
    fn short_entropy_limits() {
        let c = ShortDistanceConstants { a: 0.3, b: -0.1 };
        for t in Theory::ALL {
            assert_eq!(short_entropy(t, 0.0, c, 1.0).unwrap(), 0.0);
            let mut prev = 0.0;
            for i in 1..=30 {
                let s = short_entropy(t, 0.01 * i as f64, c, 1.0).unwrap();
                assert!(s > prev, "{t} not increasing");
                prev = s;
            }
        }
        assert!(short_entropy(Theory::Fermion1d, 10.0, c, 1.0).is_err());
        assert!(short_entropy(Theory::Boson1d, 1.0, ShortDistanceConstants { a: -1.0, b: 0.0 }, 1.0).is_err());
    }

    #[test]
    fn expansion_tracks_exact_fermion_estimate() {
        let c = ShortDistanceConstants { a: 0.06, b: 0.0 };
        let x = 0.05;
        let exact = short_entropy(Theory::Fermion1d, x, c, 1.0).unwrap();
        let approx = fermion1d_short_entropy_expansion(x, c, 1.0);
        assert!((approx / exact - 1.0).abs() < 0.01);
    }

    #[test]
    fn measured_constants() {
        let c = ShortDistanceConstants::measure(&TheoryConfig::new(Theory::Boson1d)).unwrap();
        assert!((c.a - 2.078_32).abs() < 1e-4 && (c.b + 0.103_39).abs() < 1e-4, "{c:?}");
        let c = ShortDistanceConstants::measure(&TheoryConfig::new(Theory::Fermion1d)).unwrap();
        assert!((c.a - 0.057_827).abs() < 1e-5, "{c:?}");
    }
}
