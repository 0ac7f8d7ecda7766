//! Position-space transforms of momentum-space channel functions: half-line
//! cosine/sine transforms, the radial J0 transform and the 2D phase-kernel
//! transform, plus an e^{-eta k} regulated variant for non-decaying inputs.

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Estimate, Tolerance};
use crate::specfun::{bessel_j0, bessel_j1, bessel_zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PanelStrategy {
    /// Panels between consecutive zeros of the kernel.
    OscillationZeros,
    /// `count` equal panels on [ir_kmin, k_max].
    FixedPanels { count: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub panel_strategy: PanelStrategy,
    /// Upper integration limit (momentum units).
    pub k_max: f64,
    /// Lower integration limit (momentum units).
    pub ir_kmin: f64,
    /// Momentum scale of the integrand; no panel is wider than this.
    pub scale: f64,
    pub max_bisections: usize,
}

impl QuadratureSpec {
    /// Defaults for a channel function varying on the scale `lambda`,
    /// transformed at separation `x`: k_max = max(40 lambda, 50/x).
    pub fn for_separation(lambda: f64, x: f64) -> Self {
        let k_max = if x > 0.0 { (40.0 * lambda).max(50.0 / x) } else { 40.0 * lambda };
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            panel_strategy: PanelStrategy::OscillationZeros,
            k_max,
            ir_kmin: 0.0,
            scale: lambda,
            max_bisections: 200_000,
        }
    }

    pub fn with_ir_kmin(mut self, kmin: f64) -> Self {
        self.ir_kmin = kmin;
        self
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_k_max(mut self, k_max: f64) -> Self {
        self.k_max = k_max;
        self
    }

    fn tolerance(&self) -> Tolerance {
        Tolerance {
            abs: self.abs_tol,
            rel: self.rel_tol,
            max_bisections: self.max_bisections,
        }
    }
}

/// Integral kernels together with their normalisation:
/// Cos: (1/pi) int h cos(kx); Sin: (1/pi) int h sin(kx);
/// J0: (1/2pi) int k h J0(kr); Phase: (1/2pi) int k h J1(kr).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kernel {
    Cos,
    Sin,
    J0,
    Phase,
}

impl Kernel {
    fn eval(self, k: f64, x: f64) -> f64 {
        match self {
            Kernel::Cos => (k * x).cos(),
            Kernel::Sin => (k * x).sin(),
            Kernel::J0 => k * bessel_j0(k * x),
            Kernel::Phase => k * bessel_j1(k * x),
        }
    }

    fn prefactor(self) -> f64 {
        match self {
            Kernel::Cos | Kernel::Sin => 1.0 / PI,
            Kernel::J0 | Kernel::Phase => 0.5 / PI,
        }
    }

    /// m-th positive zero (m >= 1) of the oscillating factor at unit x.
    fn zero(self, m: usize) -> f64 {
        match self {
            Kernel::Cos => (m as f64 - 0.5) * PI,
            Kernel::Sin => m as f64 * PI,
            Kernel::J0 | Kernel::Phase => {
                let order = if self == Kernel::J0 { 0 } else { 1 };
                if m <= 30 {
                    bessel_zero(order, m)
                } else {
                    // McMahon: beta - (mu - 1)/(8 beta), ample for panel edges
                    let nu = order as f64;
                    let beta = (m as f64 + nu / 2.0 - 0.25) * PI;
                    beta - (4.0 * nu * nu - 1.0) / (8.0 * beta)
                }
            }
        }
    }
}

fn panel_breaks(kernel: Kernel, x: f64, lo: f64, hi: f64, spec: &QuadratureSpec) -> Vec<f64> {
    let mut coarse = vec![lo];
    match spec.panel_strategy {
        PanelStrategy::FixedPanels { count } => {
            let n = count.max(1);
            for i in 1..n {
                coarse.push(lo + (hi - lo) * i as f64 / n as f64);
            }
        }
        PanelStrategy::OscillationZeros => {
            if x > 0.0 {
                let mut m = 1;
                loop {
                    let z = kernel.zero(m) / x;
                    if z >= hi {
                        break;
                    }
                    if z > lo {
                        coarse.push(z);
                    }
                    m += 1;
                }
            }
        }
    }
    coarse.push(hi);
    // cap the panel width at the integrand scale
    let mut breaks = Vec::with_capacity(coarse.len());
    breaks.push(lo);
    for w in coarse.windows(2) {
        let pieces = ((w[1] - w[0]) / spec.scale).ceil().max(1.0) as usize;
        for i in 1..=pieces {
            breaks.push(w[0] + (w[1] - w[0]) * i as f64 / pieces as f64);
        }
    }
    *breaks.last_mut().unwrap() = hi;
    breaks
}

/// Generic transform (kernel normalisation included) over [ir_kmin, k_max].
pub fn transform(kernel: Kernel, h: impl Fn(f64) -> f64, x: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain {
            function: "transform",
            value: x,
            requirement: "finite separation >= 0",
        });
    }
    let lo = spec.ir_kmin.max(0.0);
    let hi = spec.k_max;
    if hi <= lo {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let integrand = |k: f64| h(k) * kernel.eval(k, x);
    let tol = spec.tolerance();
    let breaks = panel_breaks(kernel, x, lo, hi, spec);

    // A first panel spanning many decades above a positive lower limit is
    // integrated in t = ln k, which flattens 1/k-type infrared behaviour.
    let (log_part, start) = if lo > 0.0 && breaks[1] / lo > 4.0 {
        let (t0, t1) = (lo.ln(), breaks[1].ln());
        let n = (t1 - t0).ceil() as usize;
        let tb: Vec<f64> = (0..=n).map(|i| t0 + (t1 - t0) * i as f64 / n as f64).collect();
        let e = integrate(
            |t| {
                let k = t.exp();
                integrand(k) * k
            },
            &tb,
            tol,
        )?;
        (e, 1)
    } else {
        (Estimate { value: 0.0, error: 0.0 }, 0)
    };
    let main = integrate(integrand, &breaks[start..], tol)?;
    let c = kernel.prefactor();
    Ok(Estimate {
        value: c * (log_part.value + main.value),
        error: c * (log_part.error + main.error),
    })
}

/// (1/pi) int_{ir_kmin}^{k_max} h(k) cos(kx) dk for an even channel function.
pub fn cos_transform(h: impl Fn(f64) -> f64, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    transform(Kernel::Cos, h, x.abs(), spec).map(|e| e.value)
}

/// (1/pi) int h(k) sin(kx) dk for an odd channel function given on k >= 0.
pub fn sin_transform(h: impl Fn(f64) -> f64, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    let v = transform(Kernel::Sin, h, x.abs(), spec)?.value;
    Ok(if x < 0.0 { -v } else { v })
}

/// (1/2pi) int k h(k) J0(kr) dk.
pub fn radial_j0_transform(h: impl Fn(f64) -> f64, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    transform(Kernel::J0, h, r, spec).map(|e| e.value)
}

/// (1/2pi) int k h(k) J1(kr) dk. With h = (1/2) sin 2theta this is the
/// amplitude g(r) of <psi1^dag(x) psi2(y)> = g(|x-y|) e^{i phi_{x-y}}, using
/// int_0^{2pi} e^{-i(phi + z cos phi)} dphi = -2 pi i J1(z).
pub fn radial_phase_transform(h: impl Fn(f64) -> f64, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    transform(Kernel::Phase, h, r, spec).map(|e| e.value)
}

/// lim_{r -> 0} of the phase transform divided by r: (1/4pi) int k^2 h(k) dk.
pub fn radial_phase_slope_at_origin(h: impl Fn(f64) -> f64, spec: &QuadratureSpec) -> Result<f64> {
    transform(Kernel::Cos, |k| 0.25 * k * k * h(k), 0.0, spec).map(|e| e.value)
}

/// Transform of a non-decaying channel function, defined as the eta -> 0
/// limit of the transform of h(k) e^{-eta k}. The limit is taken by
/// polynomial (Neville) extrapolation over eta = eta0 / 2^i.
pub fn regulated_transform(kernel: Kernel, h: impl Fn(f64) -> f64, x: f64, spec: &QuadratureSpec) -> Result<Estimate> {
    const LEVELS: usize = 7;
    if !(x > 0.0) {
        return Err(Error::Domain {
            function: "regulated_transform",
            value: x,
            requirement: "x > 0",
        });
    }
    let eta0 = 0.25 * x;
    let mut etas = Vec::with_capacity(LEVELS);
    let mut vals = Vec::with_capacity(LEVELS);
    let mut qerr: f64 = 0.0;
    for i in 0..LEVELS {
        let eta = eta0 / 2f64.powi(i as i32);
        let mut s = *spec;
        s.k_max = spec.k_max.max(45.0 / eta);
        s.scale = spec.scale.min(1.0 / eta).min(1.0 / x);
        let e = transform(kernel, |k| h(k) * (-eta * k).exp(), x, &s)?;
        etas.push(eta);
        vals.push(e.value);
        qerr = qerr.max(e.error);
    }
    // Neville tableau at eta = 0
    let mut p = vals.clone();
    let mut prev_best = p[LEVELS - 1];
    let mut best = prev_best;
    for m in 1..LEVELS {
        for i in 0..LEVELS - m {
            p[i] = (etas[i + m] * p[i] - etas[i] * p[i + 1]) / (etas[i + m] - etas[i]);
        }
        prev_best = best;
        best = p[LEVELS - m - 1];
    }
    Ok(Estimate {
        value: best,
        error: (best - prev_best).abs() + qerr,
    })
}

/// Cubic spline on a uniform grid d_i = i h, i = 0..n, with zero slope at
/// d = 0 (the tabulated functions are even in d).
#[derive(Debug, Clone)]
pub struct RadialTable {
    h: f64,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl RadialTable {
    /// Tabulate `f` on [0, d_max] with spacing at most `h`. Nodes are
    /// evaluated in parallel; the table is identical for any thread count.
    pub fn build(f: impl Fn(f64) -> Result<f64> + Sync, d_max: f64, h: f64) -> Result<Self> {
        let n = ((d_max / h).ceil() as usize).max(4);
        let h = d_max / n as f64;
        let y: Vec<f64> = (0..=n)
            .into_par_iter()
            .map(|i| f(i as f64 * h))
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self::from_values(h, y))
    }

    pub fn from_values(h: f64, y: Vec<f64>) -> Self {
        let n = y.len() - 1;
        // end slope from a one-sided fourth-order difference
        let dn = (25.0 * y[n] - 48.0 * y[n - 1] + 36.0 * y[n - 2] - 16.0 * y[n - 3] + 3.0 * y[n - 4]) / (12.0 * h);
        // clamped spline: solve for second derivatives m
        let mut a = vec![0.0; n + 1];
        let mut b = vec![0.0; n + 1];
        let mut c = vec![0.0; n + 1];
        let mut r = vec![0.0; n + 1];
        b[0] = 2.0;
        c[0] = 1.0;
        r[0] = 6.0 / h * ((y[1] - y[0]) / h);
        for i in 1..n {
            a[i] = 1.0;
            b[i] = 4.0;
            c[i] = 1.0;
            r[i] = 6.0 / (h * h) * (y[i + 1] - 2.0 * y[i] + y[i - 1]);
        }
        a[n] = 1.0;
        b[n] = 2.0;
        r[n] = 6.0 / h * (dn - (y[n] - y[n - 1]) / h);
        // Thomas algorithm
        for i in 1..=n {
            let w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            r[i] -= w * r[i - 1];
        }
        let mut m = vec![0.0; n + 1];
        m[n] = r[n] / b[n];
        for i in (0..n).rev() {
            m[i] = (r[i] - c[i] * m[i + 1]) / b[i];
        }
        Self { h, y, m }
    }

    pub fn d_max(&self) -> f64 {
        self.h * (self.y.len() - 1) as f64
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn node_values(&self) -> &[f64] {
        &self.y
    }

    pub fn eval(&self, d: f64) -> f64 {
        let d = d.abs();
        let n = self.y.len() - 1;
        let s = d / self.h;
        let i = (s.floor() as usize).min(n - 1);
        let t = s - i as f64;
        let u = 1.0 - t;
        let h2 = self.h * self.h / 6.0;
        u * self.y[i] + t * self.y[i + 1] + h2 * ((u * u * u - u) * self.m[i] + (t * t * t - t) * self.m[i + 1])
    }
}
