//! Adaptive Gauss–Kronrod (7/15) quadrature of vector-valued integrands
//! along polygonal paths in the complex plane.
//!
//! All segments of a path share one global error budget: the segment with
//! the largest error estimate is bisected until the summed estimate of every
//! component is within tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use thiserror::Error;

use crate::expr::EvalError;

/// Default subdivision budget.
pub const MAX_SEGMENTS: usize = 1 << 14;

// Kronrod abscissae (positive half, descending), Kronrod weights and the
// embedded 7-point Gauss weights (QUADPACK qk15).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// How a segment's length enters the integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    /// Complex line element `dζ`.
    Complex,
    /// Arc length `|dζ|`.
    ArcLength,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("tolerance {tol:e} not reached within {segments} segments (estimated error {achieved:e})")]
    Budget {
        tol: f64,
        segments: usize,
        achieved: f64,
    },
    #[error("integrand is singular on the path: {0}")]
    Singular(#[from] EvalError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integral {
    pub value: Vec<Complex64>,
    /// Per-component error estimate.
    pub error: Vec<f64>,
    pub segments: usize,
}

struct Piece {
    a: Complex64,
    b: Complex64,
    /// Position along the original path, used to sum in path order.
    order: (usize, u64, u32),
    value: Vec<Complex64>,
    error: Vec<f64>,
    worst: f64,
}

struct Ranked(usize, f64, (usize, u64, u32));

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Ranked {}
impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.1
            .total_cmp(&other.1)
            .then_with(|| other.2.cmp(&self.2))
    }
}

/// One 15-point Kronrod rule on `[a, b]` with the embedded Gauss estimate.
fn kronrod_segment<F>(
    f: &F,
    a: Complex64,
    b: Complex64,
    measure: Measure,
    dim: usize,
) -> Result<(Vec<Complex64>, Vec<f64>), EvalError>
where
    F: Fn(Complex64) -> Result<Vec<Complex64>, EvalError>,
{
    let center = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    let scale = match measure {
        Measure::Complex => half,
        Measure::ArcLength => Complex64::new(half.norm(), 0.0),
    };
    let mut kron = vec![Complex64::new(0.0, 0.0); dim];
    let mut gauss = vec![Complex64::new(0.0, 0.0); dim];
    let fc = f(center)?;
    for j in 0..dim {
        kron[j] += fc[j] * WGK[7];
        gauss[j] += fc[j] * WG[3];
    }
    for k in 0..7 {
        let dx = half * XGK[k];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        for j in 0..dim {
            let s = f1[j] + f2[j];
            kron[j] += s * WGK[k];
            if k % 2 == 1 {
                gauss[j] += s * WG[k / 2];
            }
        }
    }
    let err = kron
        .iter()
        .zip(&gauss)
        .map(|(k, g)| ((k - g) * scale).norm())
        .collect();
    Ok((kron.into_iter().map(|k| k * scale).collect(), err))
}

/// Non-adaptive 15-point Kronrod value on one segment. Used for very short
/// segments (finite-difference stencils) where the rule is exact to
/// rounding for analytic integrands.
pub fn kronrod15<F>(f: F, a: Complex64, b: Complex64, dim: usize) -> Result<Vec<Complex64>, EvalError>
where
    F: Fn(Complex64) -> Result<Vec<Complex64>, EvalError>,
{
    kronrod_segment(&f, a, b, Measure::Complex, dim).map(|(v, _)| v)
}

/// Integrates `f` over the polyline `vertices` (consecutive pairs are
/// segments) to absolute per-component tolerance `tol`.
pub fn integrate_polyline<F>(
    f: F,
    vertices: &[Complex64],
    dim: usize,
    measure: Measure,
    tol: f64,
    max_segments: usize,
) -> Result<Integral, QuadratureError>
where
    F: Fn(Complex64) -> Result<Vec<Complex64>, EvalError>,
{
    let zero = || vec![Complex64::new(0.0, 0.0); dim];
    let mut pieces: Vec<Piece> = Vec::new();
    for (idx, w) in vertices.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        if a == b {
            continue;
        }
        let (value, error) = kronrod_segment(&f, a, b, measure, dim)?;
        let worst = error.iter().cloned().fold(0.0, f64::max);
        pieces.push(Piece {
            a,
            b,
            order: (idx, 0, 0),
            value,
            error,
            worst,
        });
    }
    if pieces.is_empty() {
        return Ok(Integral {
            value: zero(),
            error: vec![0.0; dim],
            segments: 0,
        });
    }
    let mut heap: BinaryHeap<Ranked> = pieces
        .iter()
        .enumerate()
        .map(|(i, p)| Ranked(i, p.worst, p.order))
        .collect();
    let mut total_err = vec![0.0; dim];
    for p in &pieces {
        for (t, e) in total_err.iter_mut().zip(&p.error) {
            *t += e;
        }
    }
    let max_of = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max);
    while max_of(&total_err) > tol {
        if pieces.len() >= max_segments {
            return Err(QuadratureError::Budget {
                tol,
                segments: pieces.len(),
                achieved: max_of(&total_err),
            });
        }
        let Some(Ranked(i, _, _)) = heap.pop() else { break };
        let (a, b, order) = (pieces[i].a, pieces[i].b, pieces[i].order);
        let mid = (a + b) * 0.5;
        if mid == a || mid == b {
            // cannot subdivide further in floating point
            return Err(QuadratureError::Budget {
                tol,
                segments: pieces.len(),
                achieved: max_of(&total_err),
            });
        }
        let (lv, le) = kronrod_segment(&f, a, mid, measure, dim)?;
        let (rv, re) = kronrod_segment(&f, mid, b, measure, dim)?;
        for j in 0..dim {
            total_err[j] += le[j] + re[j] - pieces[i].error[j];
        }
        // the path position of a child: depth-first binary address
        let depth = order.2 + 1;
        let left_order = (order.0, order.1 << 1, depth);
        let right_order = (order.0, (order.1 << 1) | 1, depth);
        let lw = max_of(&le);
        let rw = max_of(&re);
        pieces[i] = Piece {
            a,
            b: mid,
            order: left_order,
            value: lv,
            error: le,
            worst: lw,
        };
        pieces.push(Piece {
            a: mid,
            b,
            order: right_order,
            value: rv,
            error: re,
            worst: rw,
        });
        heap.push(Ranked(i, lw, left_order));
        heap.push(Ranked(pieces.len() - 1, rw, right_order));
    }
    // deterministic summation in path order
    let mut idx: Vec<usize> = (0..pieces.len()).collect();
    idx.sort_by(|&x, &y| path_position(pieces[x].order).total_cmp(&path_position(pieces[y].order)));
    let mut value = zero();
    let mut error = vec![0.0; dim];
    for &i in &idx {
        for j in 0..dim {
            value[j] += pieces[i].value[j];
            error[j] += pieces[i].error[j];
        }
    }
    Ok(Integral {
        value,
        error,
        segments: pieces.len(),
    })
}

fn path_position(order: (usize, u64, u32)) -> f64 {
    let (seg, addr, depth) = order;
    seg as f64 + (addr as f64 + 0.5) / 2f64.powi(depth as i32)
}
