//! Special functions: exponential integral, error function, upper incomplete
//! gamma at half-integer order, Bessel J0 and J1 (plus their zeros).

use crate::error::{Error, Result};
use std::f64::consts::{FRAC_2_SQRT_PI, PI, SQRT_2};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
pub const SQRT_PI: f64 = 1.772_453_850_905_516;

const EPS: f64 = f64::EPSILON;
const TINY: f64 = 1e-300;

/// Ei(x) for x < 0, i.e. -E1(-x).
pub fn ei(x: f64) -> Result<f64> {
    if x.is_nan() || x >= 0.0 {
        return Err(Error::Domain {
            function: "ei",
            value: x,
            requirement: "x < 0",
        });
    }
    if x == f64::NEG_INFINITY {
        return Ok(-0.0);
    }
    Ok(-e1(-x))
}

/// E1(y) for y > 0.
fn e1(y: f64) -> f64 {
    if y <= 2.0 {
        // -gamma - ln y - sum (-y)^n / (n n!)
        let mut term = 1.0;
        let mut sum = 0.0;
        for n in 1..200 {
            let nf = n as f64;
            term *= -y / nf;
            let add = term / nf;
            sum += add;
            if add.abs() < EPS * sum.abs().max(1e-300) * 0.1 {
                break;
            }
        }
        -EULER_GAMMA - y.ln() - sum
    } else {
        // Modified Lentz on e^{-y} / (y + 1 - 1/(y + 3 - 4/(y + 5 - ...)))
        let mut b = y + 1.0;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < EPS {
                break;
            }
        }
        h * (-y).exp()
    }
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return x;
    }
    let ax = x.abs();
    let v = if ax < 3.0 {
        erf_series(ax)
    } else {
        1.0 - erfc_cf(ax)
    };
    v.copysign(x)
}

/// Complementary error function, accurate in relative terms for large x.
pub fn erfc(x: f64) -> f64 {
    if x < 3.0 {
        1.0 - erf(x)
    } else {
        erfc_cf(x)
    }
}

// erf(x) = (2/sqrt(pi)) e^{-x^2} sum 2^n x^{2n+1} / (2n+1)!!, all terms positive.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..300 {
        term *= 2.0 * x2 / (2 * n + 1) as f64;
        sum += term;
        if term < EPS * sum * 0.1 {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-x2).exp() * sum
}

// erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x > 0.
fn erfc_cf(x: f64) -> f64 {
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..2000 {
        let an = n as f64 * 0.5;
        d = x + an * d;
        d = if d == 0.0 { 1.0 / TINY } else { 1.0 / d };
        c = x + an / c;
        if c == 0.0 {
            c = TINY;
        }
        let del = c * d;
        f *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    (-x * x).exp() / (SQRT_PI * f)
}

/// Gamma(j + 1/2).
pub fn gamma_half(j: u32) -> f64 {
    let mut g = SQRT_PI;
    for i in 0..j {
        g *= i as f64 + 0.5;
    }
    g
}

/// Upper incomplete gamma Gamma(j + 1/2, x) by upward recurrence from
/// Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x)).
pub fn upper_gamma_half(j: u32, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::Domain {
            function: "upper_gamma_half",
            value: x,
            requirement: "x >= 0",
        });
    }
    let mut g = SQRT_PI * erfc(x.sqrt());
    if j == 0 {
        return Ok(g);
    }
    let ex = (-x).exp();
    let mut xa = x.sqrt(); // x^{a} with a = 1/2
    for i in 0..j {
        let a = i as f64 + 0.5;
        g = a * g + xa * ex;
        xa *= x;
    }
    Ok(g)
}

const HANKEL_SWITCH: f64 = 25.0;

/// Bessel J0 for x >= 0 (negative arguments use evenness).
pub fn bessel_j0(x: f64) -> f64 {
    bessel_j01(x).0
}

/// Bessel J1 (odd in x).
pub fn bessel_j1(x: f64) -> f64 {
    let (_, j1) = bessel_j01(x.abs());
    if x < 0.0 {
        -j1
    } else {
        j1
    }
}

/// (J0(x), J1(x)) for x >= 0.
pub fn bessel_j01(x: f64) -> (f64, f64) {
    let x = x.abs();
    if x == 0.0 {
        (1.0, 0.0)
    } else if x < HANKEL_SWITCH {
        bessel_miller(x)
    } else {
        bessel_hankel(x)
    }
}

// Backward recurrence J_{n-1} = (2n/x) J_n - J_{n+1}, normalised with
// 1 = J0 + 2 sum J_{2k}.
fn bessel_miller(x: f64) -> (f64, f64) {
    let m = 2 * ((x as usize + 40) / 2);
    let mut jp1 = 0.0;
    let mut j = 1e-300;
    let mut norm = 0.0;
    let mut j0 = 0.0;
    let mut j1 = 0.0;
    for n in (1..=m).rev() {
        let jm1 = 2.0 * n as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        // j now holds J_{n-1}
        let k = n - 1;
        if k > 0 && k % 2 == 0 {
            norm += 2.0 * j;
        }
        if k == 1 {
            j1 = j;
        }
        if k == 0 {
            j0 = j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
            j1 *= 1e-250;
        }
    }
    norm += j0;
    (j0 / norm, j1 / norm)
}

// Hankel asymptotic expansion; cos/sin of x - pi/4 and x - 3pi/4 are formed
// from cos x and sin x to avoid rounding a shifted argument.
fn bessel_hankel(x: f64) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    let amp = (2.0 / (PI * x)).sqrt();
    let (p0, q0) = hankel_pq(0.0, x);
    let (p1, q1) = hankel_pq(4.0, x);
    let c0 = (c + s) / SQRT_2;
    let s0 = (s - c) / SQRT_2;
    let c1 = (s - c) / SQRT_2;
    let s1 = -(s + c) / SQRT_2;
    (amp * (p0 * c0 - q0 * s0), amp * (p1 * c1 - q1 * s1))
}

fn hankel_pq(mu: f64, x: f64) -> (f64, f64) {
    let z = 8.0 * x;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * z);
        if term.abs() > prev {
            break;
        }
        prev = term.abs();
        // a_k / x^k carries sign (-1)^{floor(k/2)} into P (even k) or Q (odd k)
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term.abs() < EPS * 1e-2 {
            break;
        }
    }
    (p, q)
}

/// s-th positive zero (s >= 1) of J0 (`order = 0`) or J1 (`order = 1`).
pub fn bessel_zero(order: u8, s: usize) -> f64 {
    assert!(order <= 1 && s >= 1);
    let nu = order as f64;
    let mu = 4.0 * nu * nu;
    let beta = (s as f64 + nu / 2.0 - 0.25) * PI;
    let b8 = 8.0 * beta;
    let mut z = beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3));
    for _ in 0..4 {
        let (j0, j1) = bessel_j01(z);
        let step = if order == 0 {
            // J0' = -J1
            j0 / -j1
        } else {
            // J1' = J0 - J1/z
            j1 / (j0 - j1 / z)
        };
        z -= step;
        if step.abs() < 1e-15 * z {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: Ei(x) = gamma + ln|x| + sum x^n/(n n!), summed in
    // plain f64 (accurate for |x| <= 5).
    fn ei_series_oracle(x: f64) -> f64 {
        let mut sum = 0.0;
        let mut xn_over_nfact = 1.0;
        for n in 1..200 {
            xn_over_nfact *= x / n as f64;
            sum += xn_over_nfact / n as f64;
        }
        EULER_GAMMA + x.abs().ln() + sum
    }

    // Alternating Taylor series of erf.
    fn erf_taylor_oracle(x: f64) -> f64 {
        let mut sum = 0.0;
        let mut p = x;
        for n in 0..200 {
            sum += p / (2 * n + 1) as f64;
            p *= -x * x / (n + 1) as f64;
        }
        FRAC_2_SQRT_PI * sum
    }

    fn j0_series_oracle(x: f64) -> f64 {
        let mut sum = 0.0;
        let mut t = 1.0;
        for k in 0..100 {
            sum += t;
            let kk = (k + 1) as f64;
            t *= -(x * x / 4.0) / (kk * kk);
        }
        sum
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn ei_matches_series_oracle() {
        let oracle = ei_series_oracle(-1.0);
        assert!((oracle - (-0.219_383_934_395_520_27)).abs() < 1e-15);
        assert!((ei(-1.0).unwrap() - oracle).abs() < 1e-13);
        let x = -(-EULER_GAMMA).exp();
        assert!((ei(x).unwrap() - ei_series_oracle(x)).abs() < 1e-13);
        assert!((ei(-0.5615).unwrap() - ei_series_oracle(-0.5615)).abs() < 1e-13);
        // around the series / continued-fraction switch
        for &x in &[-1.9, -1.999, -2.0, -2.001, -2.1, -3.0, -5.0] {
            assert!((ei(x).unwrap() - ei_series_oracle(x)).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn ei_frozen_values() {
        // 30-digit reference values
        let table = [
            (-1e-10, -22.448_635_265_138_924),
            (-0.01, -4.037_929_576_538_114),
            (-10.0, -4.156_968_929_685_324e-6),
            (-30.0, -3.021_552_010_688_812_5e-15),
            (-50.0, -3.783_264_029_550_459e-24),
        ];
        for (x, v) in table {
            let got = ei(x).unwrap();
            assert!((got - v).abs() < 1e-12 && ((got - v) / v).abs() < 1e-12, "x = {x}");
        }
        assert!(ei(-50.0).unwrap().abs() < 1e-20);
        assert!(ei(-1e4).unwrap() <= 0.0);
        assert_eq!(ei(f64::NEG_INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn ei_rejects_nonnegative() {
        assert!(ei(0.0).is_err());
        assert!(ei(1.0).is_err());
        assert!(ei(f64::NAN).is_err());
    }

    #[test]
    fn erf_matches_taylor_oracle() {
        let o = erf_taylor_oracle(1.0);
        assert!((o - 0.842_700_792_949_714_9).abs() < 1e-15);
        assert!((erf(1.0) - o).abs() < 1e-14);
        assert_eq!(erf(0.0), 0.0);
        for &x in &[0.3, 1.7] {
            assert_eq!(erf(-x), -erf(x));
        }
        // the alternating oracle loses digits beyond x ~ 1.5
        for &x in &[0.05, 0.5, 1.0, 1.5] {
            assert!((erf(x) - erf_taylor_oracle(x)).abs() < 1e-14, "x = {x}");
        }
        // 30-digit reference values around the series / continued-fraction switch
        let table = [
            (2.9, 0.999_958_902_121_900_5),
            (3.0, 0.999_977_909_503_001_4),
            (3.1, 0.999_988_351_342_632_8),
            (4.5, 0.999_999_999_803_384),
        ];
        for (x, v) in table {
            assert!((erf(x) - v).abs() < 1e-15, "x = {x}");
        }
    }

    #[test]
    fn erfc_tail_relative_accuracy() {
        let table = [
            (3.1, 1.164_865_736_719_958_9e-5),
            (4.5, 1.966_160_441_542_887_5e-10),
            (6.0, 2.151_973_671_249_891_3e-17),
        ];
        for (x, v) in table {
            assert!(((erfc(x) - v) / v).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn upper_gamma_identities() {
        assert!((upper_gamma_half(0, 0.0).unwrap() - SQRT_PI).abs() < 1e-15);
        for &x in &[0.25f64, 4.0] {
            let v = SQRT_PI * (1.0 - erf(x.sqrt()));
            assert!((upper_gamma_half(0, x).unwrap() - v).abs() < 1e-14);
        }
        for j in 0..6 {
            assert!((upper_gamma_half(j, 0.0).unwrap() / gamma_half(j) - 1.0).abs() < 1e-14);
        }
        assert!(upper_gamma_half(1, -1.0).is_err());
    }

    #[test]
    fn upper_gamma_matches_quadrature_oracle() {
        // integral of t^{3/2} e^{-t} over [1.5, 60]; tail beyond is < 1e-20
        let q = simpson(|t| t.powf(1.5) * (-t).exp(), 1.5, 60.0, 20_000);
        assert!((upper_gamma_half(2, 1.5).unwrap() - q).abs() < 1e-11);
        assert!((q - 0.930_519_442_786_792_4).abs() < 1e-11);
    }

    #[test]
    fn upper_gamma_recurrence() {
        for j in 0..4u32 {
            for &x in &[0.0, 0.1, 1.0, 10.0] {
                let a = j as f64 + 0.5;
                let lhs = upper_gamma_half(j + 1, x).unwrap();
                let rhs = a * upper_gamma_half(j, x).unwrap() + x.powf(a) * (-x).exp();
                assert!(((lhs - rhs) / lhs).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn bessel_j0_values() {
        assert_eq!(bessel_j0(0.0), 1.0);
        assert!((bessel_j0(10.0) - (-0.245_935_764_451_348_34)).abs() < 1e-14);
        assert!((bessel_j0(10.0) - j0_series_oracle(10.0)).abs() < 1e-12);
        for &x in &[0.5, 1.0, 3.0, 7.0] {
            assert!((bessel_j0(x) - j0_series_oracle(x)).abs() < 1e-14, "x = {x}");
        }
        let table = [
            (24.9, 0.083_245_968_353_015_49, -0.134_855_699_531_408_87),
            (25.0, 0.096_266_783_275_958_12, -0.125_350_249_580_289_9),
            (25.1, 0.108_275_671_499_949_45, -0.114_634_784_134_422_57),
            (100.0, 0.019_985_850_304_223_122, -0.077_145_352_014_112_16),
            (1000.0, 0.024_786_686_152_420_175, 0.004_728_311_907_089_524),
            (1e4, -0.007_096_160_353_388_801, 0.003_647_450_755_529_580_4),
        ];
        for (x, v0, v1) in table {
            let (j0, j1) = bessel_j01(x);
            assert!((j0 - v0).abs() < 1e-13, "J0({x})");
            assert!((j1 - v1).abs() < 1e-13, "J1({x})");
        }
        assert!((bessel_j1(1.0) - 0.440_050_585_744_933_5).abs() < 1e-14);
        assert!((bessel_j1(-1.0) + 0.440_050_585_744_933_5).abs() < 1e-14);
    }

    #[test]
    fn bessel_first_zero_by_bisection() {
        let (mut lo, mut hi) = (2.0, 3.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if j0_series_oracle(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - 2.404_825_557_695_773).abs() < 1e-12);
        assert!((bessel_zero(0, 1) - lo).abs() < 1e-12);
        assert!((bessel_zero(0, 10) - 30.634_606_468_431_975).abs() < 1e-11);
        assert!((bessel_zero(1, 1) - 3.831_705_970_207_512_3).abs() < 1e-11);
        assert!((bessel_zero(1, 10) - 32.189_679_910_974_404).abs() < 1e-11);
    }

    #[test]
    fn bessel_ode_residual() {
        let h = 1e-3;
        for &x in &[0.5, 3.0, 20.0, 30.0] {
            let f = bessel_j0;
            let d2 = (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h);
            let d1 = (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
            assert!((d2 + d1 / x + f(x)).abs() < 1e-8, "x = {x}");
            assert!((d1 + bessel_j1(x)).abs() < 1e-10);
        }
    }
}
