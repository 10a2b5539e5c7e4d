//! Globally adaptive 7/15-point Gauss-Kronrod quadrature.
//!
//! Panels are bisected worst-error-first until the summed error estimate is
//! below `max(abs_tol, rel_tol * |I|)`. A panel is never split more than
//! `max_subdivisions` times. The error estimate of a panel uses the usual
//! QUADPACK rescaling of `|K15 - G7|`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::domain::NumericConfig;

/// Hard cap on live panels, independent of the depth limit.
const MAX_PANELS: usize = 20_000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Values that can be integrated: real or complex.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate<T> {
    pub value: T,
    pub abs_error: f64,
    /// Integral of the magnitude, accumulated from the same nodes.
    pub abs_value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    abs_value: f64,
    error: f64,
    depth: u32,
}

impl<T> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T> Eq for Panel<T> {}

impl<T> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod<T: QuadValue, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64, depth: u32) -> Panel<T> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.magnitude() * WGK[7];
    let mut samples = [(T::zero(), T::zero()); 7];

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        samples[j] = (f1, f2);
        kronrod = kronrod + (f1 + f2) * WGK[j];
        abs_sum += (f1.magnitude() + f2.magnitude()) * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + (f1 + f2) * WG[j / 2];
        }
    }

    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).magnitude() * WGK[7];
    for j in 0..7 {
        let (f1, f2) = samples[j];
        asc += ((f1 - mean).magnitude() + (f2 - mean).magnitude()) * WGK[j];
    }

    let scale = half.abs();
    let res_abs = abs_sum * scale;
    let res_asc = asc * scale;
    let mut err = ((kronrod - gauss) * half).magnitude();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !err.is_finite() {
        err = f64::INFINITY;
    }

    Panel {
        a,
        b,
        value: kronrod * half,
        abs_value: res_abs,
        error: err,
        depth,
    }
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<T, F>(f: F, a: f64, b: f64, cfg: &NumericConfig) -> QuadEstimate<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    integrate_breakpoints(f, &[a, b], cfg)
}

/// Integrate `f` over `[points[0], points[last]]`, starting from one panel per
/// consecutive pair of (ascending) breakpoints.
pub fn integrate_breakpoints<T, F>(mut f: F, points: &[f64], cfg: &NumericConfig) -> QuadEstimate<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    let mut heap: BinaryHeap<Panel<T>> = BinaryHeap::new();
    let mut done: Vec<Panel<T>> = Vec::new();
    let mut evaluations = 0usize;

    let mut total = T::zero();
    let mut total_err = 0.0;
    for w in points.windows(2) {
        if !(w[1] > w[0]) {
            continue;
        }
        let panel = gauss_kronrod(&mut f, w[0], w[1], 0);
        evaluations += 15;
        total = total + panel.value;
        total_err += panel.error;
        heap.push(panel);
    }

    let mut converged = true;
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total.magnitude());
        if total_err <= target {
            break;
        }
        let Some(worst) = heap.pop() else {
            converged = false;
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= cfg.max_subdivisions || !(mid > worst.a && mid < worst.b) {
            done.push(worst);
            continue;
        }
        if heap.len() + done.len() >= MAX_PANELS {
            heap.push(worst);
            converged = false;
            break;
        }
        let left = gauss_kronrod(&mut f, worst.a, mid, worst.depth + 1);
        let right = gauss_kronrod(&mut f, mid, worst.b, worst.depth + 1);
        evaluations += 30;
        total = total - worst.value + left.value + right.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum in a fixed order so the result does not depend on heap history.
    let mut panels: Vec<Panel<T>> = done;
    panels.extend(heap);
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut value = T::zero();
    let mut abs_error = 0.0;
    let mut abs_value = 0.0;
    for p in &panels {
        value = value + p.value;
        abs_error += p.error;
        abs_value += p.abs_value;
    }
    if !(abs_error <= cfg.abs_tol.max(cfg.rel_tol * value.magnitude())) {
        converged = false;
    }

    QuadEstimate {
        value,
        abs_error,
        abs_value,
        evaluations,
        converged,
    }
}
