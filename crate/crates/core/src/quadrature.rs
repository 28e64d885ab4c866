//! Adaptive 7/15-point Gauss-Kronrod quadrature over a fixed panel
//! partition, for vector-valued integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss weights for the odd-indexed Kronrod nodes (and the centre).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 60;
const MAX_SPLITS: usize = 20_000;

#[derive(Debug, Clone, Copy)]
struct Panel<const N: usize> {
    lo: f64,
    hi: f64,
    value: [f64; N],
    err: f64,
    depth: u32,
}

/// One Kronrod rule on `[a, b]`: the estimate and a QUADPACK-style error
/// bound (max over components).
fn gk15<const N: usize, F>(f: &F, a: f64, b: f64) -> ([f64; N], f64)
where
    F: Fn(f64) -> [f64; N],
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = [0.0; N];
    let mut gauss = [0.0; N];
    let mut abs_k = [0.0; N];
    let mut samples = [[0.0; N]; 15];
    samples[14] = fc;
    for c in 0..N {
        kronrod[c] = WGK[7] * fc[c];
        gauss[c] = WG[3] * fc[c];
        abs_k[c] = WGK[7] * fc[c].abs();
    }
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        samples[2 * j] = f1;
        samples[2 * j + 1] = f2;
        for c in 0..N {
            kronrod[c] += WGK[j] * (f1[c] + f2[c]);
            abs_k[c] += WGK[j] * (f1[c].abs() + f2[c].abs());
            if j % 2 == 1 {
                gauss[c] += WG[j / 2] * (f1[c] + f2[c]);
            }
        }
    }

    let mut value = [0.0; N];
    let mut err: f64 = 0.0;
    for c in 0..N {
        let mean = 0.5 * kronrod[c];
        let mut asc = WGK[7] * (fc[c] - mean).abs();
        for j in 0..7 {
            asc += WGK[j] * ((samples[2 * j][c] - mean).abs() + (samples[2 * j + 1][c] - mean).abs());
        }
        let res_asc = asc * half.abs();
        let res_abs = abs_k[c] * half.abs();
        value[c] = kronrod[c] * half;
        let mut e = ((kronrod[c] - gauss[c]) * half).abs();
        if res_asc != 0.0 && e != 0.0 {
            e = res_asc * (200.0 * e / res_asc).powf(1.5).min(1.0);
        }
        if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            e = e.max(50.0 * f64::EPSILON * res_abs);
        }
        err = err.max(e);
    }
    (value, err)
}

struct ByError<const N: usize>(Panel<N>);

impl<const N: usize> PartialEq for ByError<N> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<const N: usize> Eq for ByError<N> {}

impl<const N: usize> PartialOrd for ByError<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const N: usize> Ord for ByError<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.err.total_cmp(&other.0.err)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<const N: usize> {
    pub value: [f64; N],
    pub err: f64,
    pub evals: usize,
}

/// Integrate `f` over `[a, b]` split into panels no wider than
/// `max_panel`, refining the worst panel by bisection until the summed error
/// estimate is below `tol · max(1, |I|)` (with `|I|` the largest component
/// magnitude).
pub fn integrate<const N: usize, F>(
    f: F,
    a: f64,
    b: f64,
    max_panel: f64,
    tol: f64,
) -> Result<QuadResult<N>>
where
    F: Fn(f64) -> [f64; N],
{
    let span = b - a;
    if span <= 0.0 {
        return Ok(QuadResult {
            value: [0.0; N],
            err: 0.0,
            evals: 0,
        });
    }
    let count = (span / max_panel).ceil().max(1.0) as usize;
    let width = span / count as f64;
    let mut evals = 0;

    let panels: Vec<Panel<N>> = (0..count)
        .map(|k| {
            let lo = a + k as f64 * width;
            let hi = if k + 1 == count { b } else { lo + width };
            let (value, err) = gk15(&f, lo, hi);
            evals += 15;
            Panel {
                lo,
                hi,
                value,
                err,
                depth: 0,
            }
        })
        .collect();

    let magnitude = |panels: &[Panel<N>]| {
        let mut total = [0.0; N];
        for p in panels {
            for c in 0..N {
                total[c] += p.value[c];
            }
        }
        total.iter().fold(1.0_f64, |m, v| m.max(v.abs()))
    };
    let target = tol * magnitude(&panels);

    // Global refinement: always bisect the panel with the largest error.
    let mut heap: BinaryHeap<ByError<N>> = panels.into_iter().map(ByError).collect();
    let mut total_err: f64 = heap.iter().map(|p| p.0.err).sum();
    let mut splits = 0;
    while total_err > target {
        let Some(ByError(p)) = heap.pop() else { break };
        if p.depth >= MAX_DEPTH || splits >= MAX_SPLITS {
            return Err(Error::Quadrature {
                tol: target,
                lo: p.lo,
                hi: p.hi,
                err: p.err,
            });
        }
        splits += 1;
        total_err -= p.err;
        let mid = 0.5 * (p.lo + p.hi);
        for (lo, hi) in [(p.lo, mid), (mid, p.hi)] {
            let (value, err) = gk15(&f, lo, hi);
            evals += 15;
            total_err += err;
            heap.push(ByError(Panel {
                lo,
                hi,
                value,
                err,
                depth: p.depth + 1,
            }));
        }
    }

    let mut done: Vec<Panel<N>> = heap.into_iter().map(|p| p.0).collect();
    done.sort_by(|x, y| x.lo.total_cmp(&y.lo));
    let mut value = [0.0; N];
    let mut err = 0.0;
    for p in &done {
        for c in 0..N {
            value[c] += p.value[c];
        }
        err += p.err;
    }
    Ok(QuadResult { value, err, evals })
}
