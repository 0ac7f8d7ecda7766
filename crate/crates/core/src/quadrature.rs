//! Globally adaptive 21-point Gauss-Kronrod quadrature over a list of panels.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_287_336_180,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// 10-point Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    /// Cap on the number of bisections beyond the initial panels.
    pub max_bisections: usize,
}

impl Tolerance {
    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    /// Rounding floor of the error estimate; bisecting below it is pointless.
    floor: f64,
}

impl Segment {
    fn refinable(&self) -> bool {
        self.error > self.floor * 1.01 && (self.b - self.a) > 1e-13 * self.a.abs().max(self.b.abs())
    }
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod21(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK[10];
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for i in 0..10 {
        let dx = h * XGK[i];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv1[i] = f1;
        fv2[i] = f2;
        resk += WGK[i] * (f1 + f2);
        resabs += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            resg += WG[i / 2] * (f1 + f2);
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for i in 0..10 {
        resasc += WGK[i] * ((fv1[i] - mean).abs() + (fv2[i] - mean).abs());
    }
    let habs = h.abs();
    let value = resk * h;
    resabs *= habs;
    resasc *= habs;
    let mut error = ((resk - resg) * h).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(floor);
    }
    Segment {
        a,
        b,
        value,
        error,
        floor,
    }
}

/// Integrate `f` over [breaks[0], breaks[last]] with the given panel
/// boundaries, bisecting the worst segment until the summed error estimate
/// meets the tolerance.
pub fn integrate(f: impl Fn(f64) -> f64, breaks: &[f64], tol: Tolerance) -> Result<Estimate> {
    if breaks.len() < 2 {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let mut heap: BinaryHeap<Segment> = BinaryHeap::with_capacity(breaks.len());
    let mut total = 0.0;
    let mut err = 0.0;
    let mut refinable = 0usize;
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let s = kronrod21(&f, w[0], w[1]);
        total += s.value;
        err += s.error;
        refinable += s.refinable() as usize;
        heap.push(s);
    }
    // segments at their rounding floor are parked here
    let mut done: Vec<Segment> = Vec::new();
    let mut bisections = 0;
    while err > tol.target(total) && refinable > 0 {
        let Some(worst) = heap.pop() else { break };
        if !worst.refinable() {
            done.push(worst);
            continue;
        }
        if bisections >= tol.max_bisections {
            heap.push(worst);
            let value = sum_segments(heap.iter().chain(done.iter()));
            return Err(Error::NotConverged {
                what: "quadrature",
                estimate: value,
                error: err,
                tolerance: tol.target(value),
            });
        }
        refinable -= 1;
        bisections += 1;
        let m = 0.5 * (worst.a + worst.b);
        let l = kronrod21(&f, worst.a, m);
        let r = kronrod21(&f, m, worst.b);
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        refinable += l.refinable() as usize + r.refinable() as usize;
        heap.push(l);
        heap.push(r);
    }
    let all: Vec<Segment> = heap.into_iter().chain(done).collect();
    let value = sum_segments(all.iter());
    let error = all.iter().map(|s| s.error).sum();
    Ok(Estimate { value, error })
}

// Order-independent of the heap layout: sum by left endpoint.
fn sum_segments<'a>(segs: impl Iterator<Item = &'a Segment>) -> f64 {
    let mut v: Vec<&Segment> = segs.collect();
    v.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut s = 0.0;
    let mut c = 0.0;
    for seg in v {
        // Neumaier summation
        let t = s + seg.value;
        if s.abs() >= seg.value.abs() {
            c += (s - t) + seg.value;
        } else {
            c += (seg.value - t) + s;
        }
        s = t;
    }
    s + c
}
