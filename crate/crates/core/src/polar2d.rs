//! Angular-momentum blocks of disc correlation matrices in 2+1 dimensions.
//!
//! Boson modes phi_l, pi_l (l integer) and fermion modes psi_{1,j}, psi_{2,j}
//! (j half-integer) only couple within one block, so the disc entropy is a sum
//! over blocks. Radial entries are sqrt(r r') times an angular integral over
//! the relative angle, done with the periodic trapezoid rule.

use crate::error::{Error, Result};
use crate::gaussian_entropy::{block_entropy, BlockLabel, CorrelationBlocks, EntropyResult, GridInfo, HalfInteger, DEFAULT_TOL_EIG};
use crate::profiles::{Channel, Dimension, Statistics};
use crate::theory::TheoryConfig;
use crate::transforms::RadialTable;
use faer::Mat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DEFAULT_L_MAX: u32 = 3;
/// Table spacing in units of 1/Lambda.
pub const TABLE_SPACING: f64 = 0.005;
const MIN_ANGLES: usize = 64;
const MAX_ANGLES: usize = 1 << 16;
const ANGULAR_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RadialNodes {
    /// r_i = (i - 1/2) a: each node is the centre of its shell.
    Midpoint,
    /// r_i = i a.
    Endpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarGrid {
    pub a: f64,
    pub n: usize,
    pub nodes: RadialNodes,
}

impl PolarGrid {
    pub fn new(a: f64, n: usize, nodes: RadialNodes) -> Result<Self> {
        if !(a > 0.0) || n == 0 {
            return Err(Error::Config(format!("polar grid needs a > 0 and n >= 1, got a = {a}, n = {n}")));
        }
        Ok(Self { a, n, nodes })
    }

    pub fn radius(&self, i: usize) -> f64 {
        match self.nodes {
            RadialNodes::Midpoint => (i as f64 + 0.5) * self.a,
            RadialNodes::Endpoint => (i as f64 + 1.0) * self.a,
        }
    }

    /// Disc radius N a.
    pub fn disc_radius(&self) -> f64 {
        self.n as f64 * self.a
    }
}

/// Smooth parts tabulated against distance. Boson: f (phi-phi) and g
/// (pi-pi). Fermion: F (P11) and G(d)/d, the cross-channel amplitude over
/// distance, which is even in d and so splines cleanly.
#[derive(Debug, Clone)]
pub struct PolarTables {
    pub statistics: Statistics,
    pub lambda: f64,
    pub first: RadialTable,
    pub second: RadialTable,
}

impl PolarTables {
    /// Tables covering distances up to 2 x_max.
    pub fn build(cfg: &TheoryConfig, x_max: f64) -> Result<Self> {
        if cfg.theory.dimension() != Dimension::Two {
            return Err(Error::Config(format!("polar tables are for 2D theories, not {}", cfg.theory)));
        }
        let h = TABLE_SPACING / cfg.lambda;
        let d_max = 2.0 * x_max + 4.0 * h;
        let statistics = cfg.theory.statistics();
        let (first, second) = match statistics {
            Statistics::Boson => (
                RadialTable::build(|d| crate::correlators::smooth_part(cfg, Channel::PhiPhi, d), d_max, h)?,
                RadialTable::build(|d| crate::correlators::smooth_part(cfg, Channel::PiPi, d), d_max, h)?,
            ),
            Statistics::Fermion => (
                RadialTable::build(|d| crate::correlators::smooth_part(cfg, Channel::P11, d), d_max, h)?,
                RadialTable::build(|d| crate::correlators::phase_amplitude_over_r(cfg, d), d_max, h)?,
            ),
        };
        Ok(Self {
            statistics,
            lambda: cfg.lambda,
            first,
            second,
        })
    }

    pub fn d_max(&self) -> f64 {
        self.first.d_max().min(self.second.d_max())
    }
}

#[derive(Debug, Clone, Copy)]
enum Source {
    First,
    /// Fermion cross channel with the azimuthal phase.
    Phase,
    Second,
}

#[derive(Debug, Clone, Copy)]
struct Term {
    source: Source,
    order: f64,
}

/// sqrt(r r') * int_0^{2 pi} dz h(d) cos(m z) for each term, d^2 = r^2 + r'^2 - 2 r r' cos z.
/// Phase terms integrate G(d) cos(beta(z) - m z) with beta the azimuth of
/// (r - r' cos z, r' sin z); the sine part vanishes because beta is odd in z.
fn angular_integrals(r: f64, rp: f64, terms: &[Term], tables: &PolarTables) -> Result<Vec<f64>> {
    let max_order = terms.iter().map(|t| t.order.abs()).fold(0.0, f64::max);
    let mut m = MIN_ANGLES.max((8.0 * max_order) as usize + 8).next_power_of_two();
    let integrand = |z: f64, out: &mut [f64], abs: &mut [f64]| {
        let d = (r * r + rp * rp - 2.0 * r * rp * z.cos()).max(0.0).sqrt();
        let h1 = tables.first.eval(d);
        let h2 = tables.second.eval(d);
        for (k, t) in terms.iter().enumerate() {
            let v = match t.source {
                Source::First => h1 * (t.order * z).cos(),
                Source::Second => h2 * (t.order * z).cos(),
                Source::Phase => {
                    let beta = (rp * z.sin()).atan2(r - rp * z.cos());
                    h2 * d * (beta - t.order * z).cos()
                }
            };
            out[k] += v;
            abs[k] += v.abs();
        }
    };
    let nt = terms.len();
    let mut sums = vec![0.0; nt];
    let mut abs = vec![0.0; nt];
    for k in 0..m {
        integrand(2.0 * PI * k as f64 / m as f64, &mut sums, &mut abs);
    }
    loop {
        let mut new = vec![0.0; nt];
        let mut new_abs = vec![0.0; nt];
        for k in 0..m {
            integrand(2.0 * PI * (k as f64 + 0.5) / m as f64, &mut new, &mut new_abs);
        }
        let coarse: Vec<f64> = sums.iter().map(|s| s * 2.0 * PI / m as f64).collect();
        for k in 0..nt {
            sums[k] += new[k];
            abs[k] += new_abs[k];
        }
        m *= 2;
        let fine: Vec<f64> = sums.iter().map(|s| s * 2.0 * PI / m as f64).collect();
        let scale = abs.iter().fold(0.0f64, |a, b| a.max(*b)) * 2.0 * PI / m as f64;
        let change = coarse.iter().zip(&fine).map(|(c, f)| (c - f).abs()).fold(0.0, f64::max);
        if change <= ANGULAR_REL_TOL * scale || scale == 0.0 {
            let w = (r * rp).sqrt();
            return Ok(fine.into_iter().map(|v| w * v).collect());
        }
        if m >= MAX_ANGLES {
            return Err(Error::NotConverged {
                what: "angular quadrature",
                estimate: fine[0],
                error: change,
                tolerance: ANGULAR_REL_TOL * scale,
            });
        }
    }
}

fn check_tables(grid: &PolarGrid, tables: &PolarTables, statistics: Statistics) -> Result<()> {
    if tables.statistics != statistics {
        return Err(Error::Config("polar tables built for the other statistics".into()));
    }
    let need = 2.0 * grid.radius(grid.n - 1);
    if need > tables.d_max() {
        return Err(Error::Config(format!(
            "tables cover distances up to {}, the grid needs {need}",
            tables.d_max()
        )));
    }
    Ok(())
}

/// Integrals for all pairs, returned as one N x N matrix per term. Symmetric
/// terms are computed once per unordered pair; phase terms per ordered pair.
fn pair_matrices(grid: &PolarGrid, terms: &[Term], tables: &PolarTables) -> Result<Vec<Mat<f64>>> {
    let n = grid.n;
    let phase: Vec<bool> = terms.iter().map(|t| matches!(t.source, Source::Phase)).collect();
    let rows: Vec<Vec<(usize, Vec<f64>, Vec<f64>)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i..n)
                .map(|j| {
                    let (ri, rj) = (grid.radius(i), grid.radius(j));
                    let upper = angular_integrals(ri, rj, terms, tables)?;
                    let lower = if i != j && phase.iter().any(|&p| p) {
                        angular_integrals(rj, ri, terms, tables)?
                    } else {
                        upper.clone()
                    };
                    Ok((j, upper, lower))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<Mat<f64>> = terms.iter().map(|_| Mat::zeros(n, n)).collect();
    for (i, row) in rows.into_iter().enumerate() {
        for (j, upper, lower) in row {
            for (k, m) in out.iter_mut().enumerate() {
                m[(i, j)] = upper[k];
                m[(j, i)] = if phase[k] { lower[k] } else { upper[k] };
            }
        }
    }
    Ok(out)
}

fn boson_from(l: i32, grid: &PolarGrid, lambda: f64, f: &Mat<f64>, g: &Mat<f64>) -> CorrelationBlocks {
    let (n, a) = (grid.n, grid.a);
    let delta = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    CorrelationBlocks::BosonPair {
        phi_phi: Mat::from_fn(n, n, |i, j| delta(i, j) / (2.0 * lambda * a) + f[(i, j)]),
        pi_pi: Mat::from_fn(n, n, |i, j| delta(i, j) * lambda * a / 2.0 + a * a * g[(i, j)]),
        grid: GridInfo {
            a,
            n,
            block: Some(BlockLabel::Orbital(l)),
        },
    }
}

fn fermion_from(j: HalfInteger, grid: &PolarGrid, p_up: &Mat<f64>, p_down: &Mat<f64>, cross: &Mat<f64>) -> CorrelationBlocks {
    let (n, a) = (grid.n, grid.a);
    let c = Mat::from_fn(2 * n, 2 * n, |r, q| {
        let (bi, i) = (r / n, r % n);
        let (bj, k) = (q / n, q % n);
        match (bi, bj) {
            (0, 0) => a * p_up[(i, k)],
            (1, 1) => (if i == k { 1.0 } else { 0.0 }) - a * p_down[(i, k)],
            (0, 1) => a * cross[(i, k)],
            _ => a * cross[(k, i)],
        }
    });
    CorrelationBlocks::FermionReal {
        c,
        grid: GridInfo {
            a,
            n,
            block: Some(BlockLabel::Total(j)),
        },
    }
}

/// Block of the phi_l / pi_l modes:
/// C_phiphi = delta/(2 Lambda a) + sqrt(r r') int f cos(l z),
/// C_pipi = Lambda a delta/2 + a^2 sqrt(r r') int g cos(l z).
pub fn boson_block(l: i32, grid: &PolarGrid, tables: &PolarTables) -> Result<CorrelationBlocks> {
    check_tables(grid, tables, Statistics::Boson)?;
    let order = l as f64;
    let terms = [
        Term { source: Source::First, order },
        Term { source: Source::Second, order },
    ];
    let m = pair_matrices(grid, &terms, tables)?;
    Ok(boson_from(l, grid, tables.lambda, &m[0], &m[1]))
}

/// Block of psi_{1,j} (orbital j + 1/2) and psi_{2,j} (orbital j - 1/2) as a
/// 2N x 2N matrix over (component, site). The cross entries are real, so the
/// block is real symmetric.
pub fn fermion_block(j: HalfInteger, grid: &PolarGrid, tables: &PolarTables) -> Result<CorrelationBlocks> {
    check_tables(grid, tables, Statistics::Fermion)?;
    let m = pair_matrices(grid, &fermion_terms(j), tables)?;
    Ok(fermion_from(j, grid, &m[0], &m[1], &m[2]))
}

fn fermion_terms(j: HalfInteger) -> [Term; 3] {
    let v = j.value();
    [
        Term { source: Source::First, order: v + 0.5 },
        Term { source: Source::First, order: v - 0.5 },
        Term { source: Source::Phase, order: v - 0.5 },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockEntropy {
    pub label: BlockLabel,
    pub result: EntropyResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscEntropy {
    pub x: f64,
    pub a: f64,
    pub l_max: u32,
    /// Ordered by block index.
    pub blocks: Vec<BlockEntropy>,
    /// Sum over blocks; the spectrum is the concatenation.
    pub total: EntropyResult,
}

impl DiscEntropy {
    /// (block index, S_block, cumulative S) rows in block order.
    pub fn cumulative(&self) -> Vec<(f64, f64, f64)> {
        let mut acc = 0.0;
        self.blocks
            .iter()
            .map(|b| {
                acc += b.result.s;
                let idx = match b.label {
                    BlockLabel::Orbital(l) => l as f64,
                    BlockLabel::Total(j) => j.value(),
                };
                (idx, b.result.s, acc)
            })
            .collect()
    }
}

/// Blocks included for a truncation: |l| <= l_max (bosons) or
/// |j| <= l_max + 1/2 (fermions).
pub fn block_labels(statistics: Statistics, l_max: u32) -> Vec<BlockLabel> {
    let l = l_max as i32;
    match statistics {
        Statistics::Boson => (-l..=l).map(BlockLabel::Orbital).collect(),
        Statistics::Fermion => (-l - 1..=l).map(|k| BlockLabel::Total(HalfInteger::new(2 * k + 1))).collect(),
    }
}

/// Disc entropy of radius x at spacing a, summed over the blocks of `l_max`.
pub fn disc_entropy(x: f64, a: f64, l_max: u32, cfg: &TheoryConfig) -> Result<DiscEntropy> {
    cfg.validate()?;
    let n = (x / a).round() as usize;
    let tables = PolarTables::build(cfg, n as f64 * a)?;
    disc_entropy_with_tables(n, a, l_max, cfg, &tables, RadialNodes::Midpoint)
}

pub fn disc_entropy_with_tables(
    n: usize,
    a: f64,
    l_max: u32,
    cfg: &TheoryConfig,
    tables: &PolarTables,
    nodes: RadialNodes,
) -> Result<DiscEntropy> {
    let grid = PolarGrid::new(a, n, nodes)?;
    let statistics = cfg.theory.statistics();
    check_tables(&grid, tables, statistics)?;
    let labels = block_labels(statistics, l_max);
    // one pass over the radial pairs produces every block's integrals
    let (terms, per): (Vec<Term>, usize) = match statistics {
        Statistics::Boson => (
            (0..=l_max as i32)
                .flat_map(|l| {
                    let order = l as f64;
                    [Term { source: Source::First, order }, Term { source: Source::Second, order }]
                })
                .collect(),
            2,
        ),
        Statistics::Fermion => (
            labels
                .iter()
                .flat_map(|b| match b {
                    BlockLabel::Total(j) => fermion_terms(*j),
                    BlockLabel::Orbital(_) => unreachable!(),
                })
                .collect(),
            3,
        ),
    };
    let mats = pair_matrices(&grid, &terms, tables)?;
    let results: Vec<EntropyResult> = match statistics {
        // blocks l and -l are identical
        Statistics::Boson => {
            let by_l: Vec<EntropyResult> = (0..=l_max as usize)
                .into_par_iter()
                .map(|l| {
                    let b = boson_from(l as i32, &grid, tables.lambda, &mats[per * l], &mats[per * l + 1]);
                    block_entropy(&b, DEFAULT_TOL_EIG)
                })
                .collect::<Result<_>>()?;
            labels
                .iter()
                .map(|b| match b {
                    BlockLabel::Orbital(l) => by_l[l.unsigned_abs() as usize].clone(),
                    BlockLabel::Total(_) => unreachable!(),
                })
                .collect()
        }
        Statistics::Fermion => labels
            .par_iter()
            .enumerate()
            .map(|(k, b)| {
                let BlockLabel::Total(j) = *b else { unreachable!() };
                let blk = fermion_from(j, &grid, &mats[per * k], &mats[per * k + 1], &mats[per * k + 2]);
                block_entropy(&blk, DEFAULT_TOL_EIG)
            })
            .collect::<Result<_>>()?,
    };
    let blocks: Vec<BlockEntropy> = labels
        .into_iter()
        .zip(results)
        .map(|(label, result)| BlockEntropy { label, result })
        .collect();
    let mut spectrum = Vec::new();
    let mut s = 0.0;
    let mut discarded = 0;
    let mut fallback = false;
    for b in &blocks {
        s += b.result.s;
        discarded += b.result.discarded;
        fallback |= b.result.fallback_eigensolver;
        spectrum.extend_from_slice(&b.result.spectrum);
    }
    let total = EntropyResult {
        s,
        discarded,
        discarded_fraction: discarded as f64 / spectrum.len().max(1) as f64,
        spectrum,
        fallback_eigensolver: fallback,
    };
    Ok(DiscEntropy {
        x: grid.disc_radius(),
        a,
        l_max,
        blocks,
        total,
    })
}
