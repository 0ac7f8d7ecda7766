//! Sampled correlation matrices, their symplectic / single-particle spectra,
//! and entanglement entropies (nats).

use crate::analysis::{fit_power_with_min, FitResult};
use crate::correlators::sample_smooth;
use crate::error::{Error, Result};
use crate::polar2d::{self, PolarTables, RadialNodes};
use crate::profiles::{Channel, Statistics};
use crate::theory::{Theory, TheoryConfig};
use faer::{Mat, Side};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

/// Relative eigenvalue tolerance for discard decisions.
pub const DEFAULT_TOL_EIG: f64 = 1e-9;
/// Largest matrix dimension a sampler will build.
pub const MAX_MATRIX_DIM: usize = 6000;

/// Half-integer stored as twice its value (always odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfInteger {
    pub twice: i32,
}

impl HalfInteger {
    pub fn new(twice: i32) -> Self {
        assert!(twice % 2 != 0, "half-integer needs an odd numerator");
        Self { twice }
    }

    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BlockLabel {
    /// Boson angular momentum l.
    Orbital(i32),
    /// Fermion total angular momentum j.
    Total(HalfInteger),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridInfo {
    pub a: f64,
    pub n: usize,
    pub block: Option<BlockLabel>,
}

#[derive(Debug, Clone)]
pub enum CorrelationBlocks {
    BosonPair {
        phi_phi: Mat<f64>,
        pi_pi: Mat<f64>,
        grid: GridInfo,
    },
    /// Real symmetric 2N x 2N matrix over (component, site).
    FermionReal { c: Mat<f64>, grid: GridInfo },
    /// Hermitian 2N x 2N matrix over (component, site).
    FermionComplex { c: Mat<Complex64>, grid: GridInfo },
}

impl CorrelationBlocks {
    pub fn grid(&self) -> GridInfo {
        match self {
            CorrelationBlocks::BosonPair { grid, .. }
            | CorrelationBlocks::FermionReal { grid, .. }
            | CorrelationBlocks::FermionComplex { grid, .. } => *grid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyResult {
    /// Entropy in nats.
    pub s: f64,
    pub spectrum: Vec<f64>,
    pub discarded: usize,
    pub discarded_fraction: f64,
    /// The Cholesky route failed and a general eigensolver was used.
    pub fallback_eigensolver: bool,
}

impl EntropyResult {
    pub fn s_bits(&self) -> f64 {
        self.s / LN_2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpectrum {
    pub values: Vec<f64>,
    pub fallback: bool,
}

fn check_square(name: &str, m: usize, n: usize) -> Result<()> {
    if m == n && m > 0 {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be square and non-empty, got {m}x{n}")))
    }
}

/// Eigenvalues of K = C_phiphi C_pipi. Route: C_phiphi = L L^T, then the
/// symmetric matrix L^T C_pipi L (similar to K). If C_phiphi is not
/// numerically positive definite the general eigensolver is used instead and
/// the result is flagged.
pub fn symplectic_spectrum(phi_phi: &Mat<f64>, pi_pi: &Mat<f64>) -> Result<SymplecticSpectrum> {
    check_square("C_phiphi", phi_phi.nrows(), phi_phi.ncols())?;
    check_square("C_pipi", pi_pi.nrows(), pi_pi.ncols())?;
    if phi_phi.nrows() != pi_pi.nrows() {
        return Err(Error::Config("C_phiphi and C_pipi differ in size".into()));
    }
    match phi_phi.llt(Side::Lower) {
        Ok(llt) => {
            let l = llt.L();
            let m: Mat<f64> = l.transpose() * pi_pi * l;
            let sym = Mat::from_fn(m.nrows(), m.ncols(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
            let values = sym
                .self_adjoint_eigenvalues(Side::Lower)
                .map_err(|e| Error::Eigen(format!("{e:?}")))?;
            Ok(SymplecticSpectrum { values, fallback: false })
        }
        Err(_) => Ok(SymplecticSpectrum {
            values: general_product_eigenvalues(phi_phi, pi_pi)?,
            fallback: true,
        }),
    }
}

/// Real parts of the eigenvalues of C_phiphi C_pipi from the general
/// (nonsymmetric) eigensolver, sorted ascending.
pub fn general_product_eigenvalues(phi_phi: &Mat<f64>, pi_pi: &Mat<f64>) -> Result<Vec<f64>> {
    let k: Mat<f64> = phi_phi * pi_pi;
    let ev = k.eigenvalues().map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let scale = ev.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    if let Some(z) = ev.iter().find(|z| z.im.abs() > 1e-8 * scale) {
        return Err(Error::Eigen(format!("complex symplectic eigenvalue {z}")));
    }
    let mut v: Vec<f64> = ev.iter().map(|z| z.re).collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Entropy of one bosonic mode with symplectic eigenvalue lambda >= 1/4:
/// -zeta ln zeta / (1 - zeta) - ln(1 - zeta), zeta = (2 sqrt(lambda) - 1)/(2 sqrt(lambda) + 1).
pub fn thermal_mode_entropy(lambda: f64) -> f64 {
    let nu = lambda.max(0.25).sqrt();
    let zeta = (2.0 * nu - 1.0) / (2.0 * nu + 1.0);
    if zeta <= 0.0 {
        return 0.0;
    }
    -zeta * zeta.ln() / (1.0 - zeta) - (-zeta).ln_1p()
}

/// -p ln p - (1 - p) ln(1 - p).
pub fn binary_entropy(p: f64) -> f64 {
    let h = |q: f64| if q <= 0.0 { 0.0 } else { -q * q.ln() };
    h(p) + h(1.0 - p)
}

/// Entropy from a symplectic spectrum; `tol_rel` scales with the largest
/// eigenvalue. Modes below 1/4 - tol are discarded and counted.
pub fn boson_entropy(lambdas: &[f64], tol_rel: f64) -> EntropyResult {
    let norm = lambdas.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = tol_rel * norm;
    let mut s = 0.0;
    let mut discarded = 0;
    for &l in lambdas {
        if l < 0.25 - tol {
            discarded += 1;
        } else if l > 0.25 + tol {
            s += thermal_mode_entropy(l);
        }
    }
    EntropyResult {
        s,
        spectrum: lambdas.to_vec(),
        discarded,
        discarded_fraction: if lambdas.is_empty() { 0.0 } else { discarded as f64 / lambdas.len() as f64 },
        fallback_eigensolver: false,
    }
}

/// Entropy from single-particle occupation numbers; values within `tol` of
/// [0, 1] are clamped, values further out are discarded and counted.
pub fn fermion_entropy_from_eigenvalues(eigs: &[f64], tol: f64) -> EntropyResult {
    let mut s = 0.0;
    let mut discarded = 0;
    for &v in eigs {
        if v < -tol || v > 1.0 + tol {
            discarded += 1;
        } else {
            s += binary_entropy(v.clamp(0.0, 1.0));
        }
    }
    EntropyResult {
        s,
        spectrum: eigs.to_vec(),
        discarded,
        discarded_fraction: if eigs.is_empty() { 0.0 } else { discarded as f64 / eigs.len() as f64 },
        fallback_eigensolver: false,
    }
}

/// Entropy of any correlation block.
pub fn block_entropy(blocks: &CorrelationBlocks, tol_rel: f64) -> Result<EntropyResult> {
    match blocks {
        CorrelationBlocks::BosonPair { phi_phi, pi_pi, .. } => {
            let sp = symplectic_spectrum(phi_phi, pi_pi)?;
            let mut r = boson_entropy(&sp.values, tol_rel);
            r.fallback_eigensolver = sp.fallback;
            Ok(r)
        }
        CorrelationBlocks::FermionReal { c, .. } => {
            check_square("C", c.nrows(), c.ncols())?;
            let e = c.self_adjoint_eigenvalues(Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
            Ok(fermion_entropy_from_eigenvalues(&e, tol_rel))
        }
        CorrelationBlocks::FermionComplex { c, .. } => {
            check_square("C", c.nrows(), c.ncols())?;
            let e = c.self_adjoint_eigenvalues(Side::Lower).map_err(|e| Error::Eigen(format!("{e:?}")))?;
            Ok(fermion_entropy_from_eigenvalues(&e, tol_rel))
        }
    }
}

/// Smooth parts at separations m a, m = 0..=n, for a 1D theory.
#[derive(Debug, Clone)]
pub struct LatticeTables {
    pub a: f64,
    pub lambda: f64,
    pub statistics: Statistics,
    /// f (phi-phi) or P11 smooth part.
    pub diag_channel: Vec<f64>,
    /// g (pi-pi) or the cross-channel coefficient s.
    pub second_channel: Vec<f64>,
}

impl LatticeTables {
    pub fn build(cfg: &TheoryConfig, a: f64, n: usize) -> Result<Self> {
        if cfg.theory.dimension() != crate::profiles::Dimension::One {
            return Err(Error::Config(format!("lattice tables are for 1D theories, not {}", cfg.theory)));
        }
        let xs: Vec<f64> = (0..=n).map(|m| m as f64 * a).collect();
        let (c1, c2) = match cfg.theory.statistics() {
            Statistics::Boson => (Channel::PhiPhi, Channel::PiPi),
            Statistics::Fermion => (Channel::P11, Channel::P12),
        };
        Ok(Self {
            a,
            lambda: cfg.lambda,
            statistics: cfg.theory.statistics(),
            diag_channel: sample_smooth(cfg, c1, &xs)?,
            second_channel: sample_smooth(cfg, c2, &xs)?,
        })
    }

    pub fn max_sites(&self) -> usize {
        self.diag_channel.len()
    }

    /// Blocks for an interval of `n` sites.
    pub fn blocks(&self, n: usize) -> Result<CorrelationBlocks> {
        if n < 2 {
            return Err(Error::Config(format!("an interval needs at least 2 sites, got {n}")));
        }
        if n > self.max_sites() {
            return Err(Error::Config(format!("table covers {} sites, {n} requested", self.max_sites())));
        }
        let (a, l) = (self.a, self.lambda);
        let grid = GridInfo { a, n, block: None };
        let d = |i: usize, j: usize| i.abs_diff(j);
        Ok(match self.statistics {
            Statistics::Boson => {
                let f = &self.diag_channel;
                let g = &self.second_channel;
                let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
                CorrelationBlocks::BosonPair {
                    phi_phi: Mat::from_fn(n, n, |i, j| delta(i, j) / (2.0 * l * a) + f[d(i, j)]),
                    pi_pi: Mat::from_fn(n, n, |i, j| delta(i, j) * l * a / 2.0 + a * a * g[d(i, j)]),
                    grid,
                }
            }
            Statistics::Fermion => {
                let p = &self.diag_channel;
                let s = &self.second_channel;
                // psi2 -> i psi2 makes the cross block a s(x_i - x_j), real and odd
                let odd = |i: usize, j: usize| if i >= j { s[i - j] } else { -s[j - i] };
                let c = Mat::from_fn(2 * n, 2 * n, |r, q| {
                    let (bi, i) = (r / n, r % n);
                    let (bj, j) = (q / n, q % n);
                    match (bi, bj) {
                        (0, 0) => a * p[d(i, j)],
                        (1, 1) => (if i == j { 1.0 } else { 0.0 }) - a * p[d(i, j)],
                        (0, 1) => a * odd(i, j),
                        _ => a * odd(j, i),
                    }
                });
                CorrelationBlocks::FermionReal { c, grid }
            }
        })
    }
}

fn sites_for(x: f64, a: f64, statistics: Statistics) -> Result<usize> {
    if !(a > 0.0) || !(x > 0.0) {
        return Err(Error::Config(format!("need x > 0 and a > 0, got x = {x}, a = {a}")));
    }
    let n = (x / a).round() as usize;
    let max = match statistics {
        Statistics::Boson => MAX_MATRIX_DIM,
        Statistics::Fermion => MAX_MATRIX_DIM / 2,
    };
    if n > max {
        return Err(Error::TooManySites {
            n,
            max,
            suggested_a: x / max as f64,
        });
    }
    if n < 2 {
        return Err(Error::Config(format!("x / a = {} gives fewer than 2 sites", x / a)));
    }
    Ok(n)
}

/// (C_phiphi)_ij = delta_ij/(2 Lambda a) + f(|i-j| a), (C_pipi)_ij = Lambda a delta_ij/2 + a^2 g(|i-j| a).
pub fn sample_interval_boson(x: f64, a: f64, cfg: &TheoryConfig) -> Result<CorrelationBlocks> {
    if cfg.theory != Theory::Boson1d {
        return Err(Error::Config(format!("sample_interval_boson needs boson1d, got {}", cfg.theory)));
    }
    let n = sites_for(x, a, Statistics::Boson)?;
    LatticeTables::build(cfg, a, n)?.blocks(n)
}

/// C = [[a P11, a s], [a s^T, 1 - a P11]] over (component, site).
pub fn sample_interval_fermion(x: f64, a: f64, cfg: &TheoryConfig) -> Result<CorrelationBlocks> {
    if cfg.theory != Theory::Fermion1d {
        return Err(Error::Config(format!("sample_interval_fermion needs fermion1d, got {}", cfg.theory)));
    }
    let n = sites_for(x, a, Statistics::Fermion)?;
    LatticeTables::build(cfg, a, n)?.blocks(n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyPoint {
    pub x: f64,
    /// Nats.
    pub s: f64,
    pub a: f64,
    pub n_sites: usize,
    pub discarded_fraction: f64,
    pub fallback_eigensolver: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyProfile {
    pub theory: Theory,
    pub epsilon: f64,
    pub l_max: Option<u32>,
    pub points: Vec<EntropyPoint>,
}

impl EntropyProfile {
    pub fn series(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| (p.x, p.s)).collect()
    }

    /// S(x) non-decreasing up to `tol`.
    pub fn is_monotone(&self, tol: f64) -> bool {
        self.points.windows(2).all(|w| w[1].s >= w[0].s - tol)
    }

    /// Join a fine-spacing profile with a coarse one covering larger x. At
    /// every x present in both, entropies must agree within `overlap_tol`;
    /// the fine value is kept there.
    pub fn stitch(fine: &EntropyProfile, coarse: &EntropyProfile, overlap_tol: f64) -> Result<EntropyProfile> {
        let same = |u: f64, v: f64| (u - v).abs() <= 1e-9 * u.abs().max(v.abs());
        let mut points = fine.points.clone();
        for c in &coarse.points {
            if let Some(f) = fine.points.iter().find(|f| same(f.x, c.x)) {
                if (f.s - c.s).abs() > overlap_tol {
                    return Err(Error::StitchMismatch {
                        x: c.x,
                        s_fine: f.s,
                        s_coarse: c.s,
                    });
                }
            } else {
                points.push(c.clone());
            }
        }
        points.sort_by(|p, q| p.x.total_cmp(&q.x));
        Ok(EntropyProfile {
            theory: fine.theory,
            epsilon: fine.epsilon,
            l_max: fine.l_max,
            points,
        })
    }
}

/// Entropy S(x) for each region size x at spacing a. 1D: intervals; 2D:
/// discs with angular-momentum blocks |l| <= l_max (boson) or
/// |j| <= l_max + 1/2 (fermion), default 3.
pub fn entropy_profile(xs: &[f64], a: f64, cfg: &TheoryConfig, l_max: Option<u32>) -> Result<EntropyProfile> {
    cfg.validate()?;
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    if xs.is_empty() || !(a > 0.0) || a > min / 2.0 {
        return Err(Error::Config(format!("spacing a = {a} must satisfy 0 < a <= min(x)/2 = {}", min / 2.0)));
    }
    if l_max.is_some() && cfg.theory.dimension() == crate::profiles::Dimension::One {
        return Err(Error::Config(format!("l_max applies to 2D theories only (theory {})", cfg.theory)));
    }
    let stat = cfg.theory.statistics();
    let sites: Vec<usize> = xs.iter().map(|&x| sites_for(x, a, stat)).collect::<Result<_>>()?;
    let points: Vec<EntropyPoint> = match cfg.theory.dimension() {
        crate::profiles::Dimension::One => {
            let n_max = *sites.iter().max().unwrap();
            let tables = LatticeTables::build(cfg, a, n_max)?;
            xs.par_iter()
                .zip(sites.par_iter())
                .map(|(&x, &n)| {
                    let r = block_entropy(&tables.blocks(n)?, DEFAULT_TOL_EIG)?;
                    Ok(EntropyPoint {
                        x,
                        s: r.s,
                        a,
                        n_sites: n,
                        discarded_fraction: r.discarded_fraction,
                        fallback_eigensolver: r.fallback_eigensolver,
                    })
                })
                .collect::<Result<_>>()?
        }
        crate::profiles::Dimension::Two => {
            let x_max = xs.iter().copied().fold(0.0, f64::max);
            let tables = PolarTables::build(cfg, x_max)?;
            let lm = l_max.unwrap_or(polar2d::DEFAULT_L_MAX);
            xs.iter()
                .zip(&sites)
                .map(|(&x, &n)| {
                    let d = polar2d::disc_entropy_with_tables(n, a, lm, cfg, &tables, RadialNodes::Midpoint)?;
                    Ok(EntropyPoint {
                        x,
                        s: d.total.s,
                        a,
                        n_sites: n,
                        discarded_fraction: d.total.discarded_fraction,
                        fallback_eigensolver: d.total.fallback_eigensolver,
                    })
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(EntropyProfile {
        theory: cfg.theory,
        epsilon: cfg.epsilon,
        l_max: if cfg.theory.dimension() == crate::profiles::Dimension::Two {
            Some(l_max.unwrap_or(polar2d::DEFAULT_L_MAX))
        } else {
            None
        },
        points,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    pub a: f64,
    pub s: f64,
    /// |S(x0, a) - S(x0, a_ref)|
    pub diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSweep {
    pub x0: f64,
    pub a_ref: f64,
    pub points: Vec<ConvergencePoint>,
    /// Log-log slope of diff against a over the non-reference spacings.
    pub slope: Option<FitResult>,
}

/// Entropy at fixed x0 for each spacing, compared with the finest spacing.
pub fn convergence_sweep(x0: f64, spacings: &[f64], cfg: &TheoryConfig, l_max: Option<u32>) -> Result<ConvergenceSweep> {
    if spacings.is_empty() {
        return Err(Error::Config("no spacings given".into()));
    }
    let a_ref = spacings.iter().copied().fold(f64::INFINITY, f64::min);
    let s: Vec<f64> = spacings
        .iter()
        .map(|&a| entropy_profile(&[x0], a, cfg, l_max).map(|p| p.points[0].s))
        .collect::<Result<_>>()?;
    let s_ref = s[spacings.iter().position(|&a| a == a_ref).unwrap()];
    let points: Vec<ConvergencePoint> = spacings
        .iter()
        .zip(&s)
        .map(|(&a, &s)| ConvergencePoint { a, s, diff: (s - s_ref).abs() })
        .collect();
    let series: Vec<(f64, f64)> = points.iter().filter(|p| p.a != a_ref).map(|p| (p.a, p.diff)).collect();
    let slope = if series.len() >= 2 {
        let lo = series.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = series.iter().map(|p| p.0).fold(0.0, f64::max);
        fit_power_with_min(&series, (lo, hi), 2).ok()
    } else {
        None
    };
    Ok(ConvergenceSweep { x0, a_ref, points, slope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::State;

    // -sum p_n ln p_n with p_n = (1 - zeta) zeta^n, n <= 200
    fn thermal_sum_oracle(zeta: f64) -> f64 {
        let mut s = 0.0;
        for n in 0..=200 {
            let p = (1.0 - zeta) * zeta.powi(n);
            if p > 0.0 {
                s -= p * p.ln();
            }
        }
        s
    }

    #[test]
    fn thermal_entropy_matches_sum_oracle() {
        assert_eq!(thermal_mode_entropy(0.25), 0.0);
        let s = thermal_mode_entropy(9.0 / 4.0);
        assert!((s - 2.0 * LN_2).abs() < 1e-12);
        assert!((s - thermal_sum_oracle(0.5)).abs() < 1e-10);
        assert!((thermal_mode_entropy(1.0) - thermal_sum_oracle(1.0 / 3.0)).abs() < 1e-10);
    }

    #[test]
    fn binary_entropy_values() {
        assert!((binary_entropy(0.5) - LN_2).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        let r = fermion_entropy_from_eigenvalues(&[0.0, 1.0, -1e-12, 1.0 + 1e-12], 1e-9);
        assert_eq!((r.s, r.discarded), (0.0, 0));
        let r = fermion_entropy_from_eigenvalues(&[-0.1, 0.5], 1e-9);
        assert_eq!(r.discarded, 1);
        assert!((r.discarded_fraction - 0.5).abs() < 1e-15);
    }

    #[test]
    fn boson_discard_rule() {
        let r = boson_entropy(&[0.2, 0.25, 0.25 + 1e-12, 2.25], 1e-9);
        assert_eq!(r.discarded, 1);
        assert!((r.s - 2.0 * LN_2).abs() < 1e-12);
    }

    #[test]
    fn one_mode() {
        let c = Mat::from_fn(1, 1, |_, _| 3.0);
        let p = Mat::from_fn(1, 1, |_, _| 0.5);
        let sp = symplectic_spectrum(&c, &p).unwrap();
        assert!((sp.values[0] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn cholesky_route_matches_general_eigensolver() {
        let la = 0.1;
        let c = Mat::from_fn(2, 2, |i, j| if i == j { 2.0 } else { 1.0 } / (2.0 * la));
        let p = Mat::from_fn(2, 2, |i, j| if i == j { 1.0 } else { -0.3 } * la / 2.0);
        let a = symplectic_spectrum(&c, &p).unwrap();
        assert!(!a.fallback);
        let b = general_product_eigenvalues(&c, &p).unwrap();
        for (u, v) in a.values.iter().zip(&b) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn non_spd_falls_back() {
        let c = Mat::from_fn(2, 2, |i, j| if i == j { 1.0 } else { 2.0 });
        let p = Mat::<f64>::identity(2, 2);
        let sp = symplectic_spectrum(&c, &p).unwrap();
        assert!(sp.fallback);
        assert!((sp.values[0] + 1.0).abs() < 1e-12 && (sp.values[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn product_state_blocks() {
        let b = TheoryConfig::new(Theory::Boson1d).with_state(State::Product);
        match sample_interval_boson(0.5, 0.1, &b).unwrap() {
            CorrelationBlocks::BosonPair { phi_phi, pi_pi, .. } => {
                for i in 0..5 {
                    for j in 0..5 {
                        let e = if i == j { 1.0 } else { 0.0 };
                        assert_eq!(phi_phi[(i, j)], e / 0.2);
                        assert_eq!(pi_pi[(i, j)], e * 0.05);
                    }
                }
                let sp = symplectic_spectrum(&phi_phi, &pi_pi).unwrap();
                assert!(sp.values.iter().all(|&l| (l - 0.25).abs() < 1e-15));
            }
            _ => panic!(),
        }
        let f = TheoryConfig::new(Theory::Fermion1d).with_state(State::Product);
        let blocks = sample_interval_fermion(0.5, 0.1, &f).unwrap();
        match &blocks {
            CorrelationBlocks::FermionReal { c, .. } => {
                for i in 0..10 {
                    for j in 0..10 {
                        let e = if i == j && i >= 5 { 1.0 } else { 0.0 };
                        assert_eq!(c[(i, j)], e);
                    }
                }
            }
            _ => panic!(),
        }
        assert_eq!(block_entropy(&blocks, DEFAULT_TOL_EIG).unwrap().s, 0.0);
    }

    #[test]
    fn two_site_entries() {
        let cfg = TheoryConfig::new(Theory::Boson1d);
        let a = 0.05;
        let f = crate::correlators::smooth_part(&cfg, Channel::PhiPhi, a).unwrap();
        let g = crate::correlators::smooth_part(&cfg, Channel::PiPi, a).unwrap();
        match sample_interval_boson(2.0 * a, a, &cfg).unwrap() {
            CorrelationBlocks::BosonPair { phi_phi, pi_pi, grid } => {
                assert_eq!(grid.n, 2);
                assert_eq!(phi_phi[(0, 1)], f);
                assert!((pi_pi[(0, 1)] - g * a * a).abs() < 1e-18);
                assert_eq!(phi_phi[(0, 1)], phi_phi[(1, 0)]);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn fermion_block_is_symmetric_with_expected_diagonal() {
        let cfg = TheoryConfig::new(Theory::Fermion1d);
        let a = 0.05;
        let blocks = sample_interval_fermion(0.4, a, &cfg).unwrap();
        let p0 = crate::correlators::smooth_part(&cfg, Channel::P11, 0.0).unwrap();
        if let CorrelationBlocks::FermionReal { c, .. } = blocks {
            let n = c.nrows();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(c[(i, j)], c[(j, i)]);
                }
            }
            assert!((c[(0, 0)] - a * p0).abs() < 1e-15);
        }
    }

    #[test]
    fn sampler_rejects_huge_grids() {
        let cfg = TheoryConfig::new(Theory::Fermion1d);
        assert!(matches!(sample_interval_fermion(100.0, 1e-3, &cfg), Err(Error::TooManySites { .. })));
        assert!(sample_interval_fermion(0.1, 0.1, &cfg).is_err());
    }

    #[test]
    fn product_entropy_is_zero_everywhere() {
        for t in Theory::ALL {
            let cfg = TheoryConfig::new(t).with_state(State::Product);
            let l_max = (t.dimension() == crate::profiles::Dimension::Two).then_some(1);
            let p = entropy_profile(&[0.3, 0.6], 0.1, &cfg, l_max).unwrap();
            assert!(p.points.iter().all(|q| q.s == 0.0), "{t}");
        }
    }

    #[test]
    fn identical_spacings_give_zero_difference() {
        let cfg = TheoryConfig::new(Theory::Fermion1d);
        let sw = convergence_sweep(0.4, &[0.05, 0.05], &cfg, None).unwrap();
        assert!(sw.points.iter().all(|p| p.diff == 0.0));
    }

    #[test]
    fn small_interval_entropy_vanishes() {
        let cfg = TheoryConfig::new(Theory::Boson1d);
        let p = entropy_profile(&[0.002, 0.01, 0.05], 0.001, &cfg, None).unwrap();
        assert!(p.points[0].s < p.points[1].s && p.points[1].s < p.points[2].s);
        eprintln!("{:?}", p.series());
        assert!(p.is_monotone(1e-12));
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let cfg = TheoryConfig::new(Theory::Fermion1d);
        let xs = [0.3, 0.5, 0.8];
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| entropy_profile(&xs, 0.05, &cfg, None).unwrap())
        };
        assert_eq!(run(1), run(3));
    }
}
