//! Differential-geometric diagnostics of surfaces built from Weierstrass
//! data: finite-difference jets, minimality residuals, Gauss maps, metric
//! and curvature, total curvature and path length.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::domain::{CircledDomain, Outer, PathPolyline};
use crate::expr::EvalError;
use crate::quadrature::{self, Measure, QuadratureError, MAX_SEGMENTS};
use crate::weierstrass::{NullData, Surface, WeierstrassError};

/// Default finite-difference step relative to the local length scale.
pub const FD_STEP: f64 = 1e-4;
/// Step used by curvature cross-checks.
pub const ORACLE_STEP: f64 = 1e-3;
/// Conformality residual above which the mean curvature formula is refused.
pub const CONFORMALITY_LIMIT: f64 = 1e-3;
/// Largest Gaussian curvature still treated as nonpositive.
pub const CURVATURE_SLACK: f64 = 1e-8;
/// Default cells per direction for total curvature.
pub const DEFAULT_RESOLUTION: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("finite-difference stencil of step {h:e} at {z} leaves the domain")]
    StencilOutside { z: Complex64, h: f64 },
    #[error("differential has rank zero at {0} (branch point suspect)")]
    RankZero(Complex64),
    #[error("jet is not conformal (residual {0:e}); mean curvature formula does not apply")]
    NotConformal(f64),
    #[error("Weierstrass data vanishes at {0}")]
    ZeroData(Complex64),
    #[error("operation needs dimension 3, data has {0}")]
    Dimension(usize),
    #[error("Gaussian curvature {0:e} is positive; data is not minimal")]
    PositiveCurvature(f64),
    #[error("total curvature refinement does not converge: levels {levels:?}")]
    Divergent { levels: [f64; 3] },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Surface(#[from] WeierstrassError),
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            ExtendedComplex::Finite(c) => Some(c),
            ExtendedComplex::Infinity => None,
        }
    }
}

/// Position, first and second partials at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    pub z: Complex64,
    pub x: Vec<f64>,
    pub xu: Vec<f64>,
    pub xv: Vec<f64>,
    pub xuu: Vec<f64>,
    pub xuv: Vec<f64>,
    pub xvv: Vec<f64>,
    pub h: f64,
}

const STENCIL: [(f64, f64); 8] = [
    (1.0, 0.0),
    (-1.0, 0.0),
    (0.0, 1.0),
    (0.0, -1.0),
    (1.0, 1.0),
    (1.0, -1.0),
    (-1.0, 1.0),
    (-1.0, -1.0),
];

impl Jet2 {
    /// Central differences from displacements `d[k] = X(z + h·STENCIL[k]) − X(z)`.
    fn from_displacements(z: Complex64, x: Vec<f64>, d: &[Vec<f64>], h: f64) -> Jet2 {
        let n = x.len();
        let h2 = h * h;
        let comp = |f: &dyn Fn(usize) -> f64| (0..n).map(f).collect::<Vec<f64>>();
        Jet2 {
            z,
            xu: comp(&|j| (d[0][j] - d[1][j]) / (2.0 * h)),
            xv: comp(&|j| (d[2][j] - d[3][j]) / (2.0 * h)),
            xuu: comp(&|j| (d[0][j] + d[1][j]) / h2),
            xvv: comp(&|j| (d[2][j] + d[3][j]) / h2),
            xuv: comp(&|j| (d[4][j] - d[5][j] - d[6][j] + d[7][j]) / (4.0 * h2)),
            x,
            h,
        }
    }

    /// Jet of an explicit map `(u, v) -> X` at `(u, v)`.
    pub fn from_map(map: impl Fn(f64, f64) -> Vec<f64>, u: f64, v: f64, h: f64) -> Jet2 {
        let x = map(u, v);
        let d: Vec<Vec<f64>> = STENCIL
            .iter()
            .map(|(a, b)| {
                let y = map(u + a * h, v + b * h);
                y.iter().zip(&x).map(|(p, q)| p - q).collect()
            })
            .collect();
        Jet2::from_displacements(Complex64::new(u, v), x, &d, h)
    }

    pub fn dimension(&self) -> usize {
        self.x.len()
    }

    pub fn laplacian(&self) -> Vec<f64> {
        self.xuu.iter().zip(&self.xvv).map(|(a, b)| a + b).collect()
    }

    /// `|X_u|² + |X_v|²`.
    pub fn gradient_norm_sqr(&self) -> f64 {
        dot(&self.xu, &self.xu) + dot(&self.xv, &self.xv)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Default step at `z`: `FD_STEP` times the local length scale.
pub fn default_step(domain: &CircledDomain, z: Complex64) -> f64 {
    FD_STEP * domain.local_scale(z)
}

/// Whether the 9-point stencil of step `h` (and the straight segments from
/// `z` to each stencil point) stays in the domain.
pub fn stencil_fits(domain: &CircledDomain, z: Complex64, h: f64) -> bool {
    domain.contains(z)
        && STENCIL
            .iter()
            .all(|(a, b)| domain.contains_segment(z, z + Complex64::new(a * h, b * h)))
}

/// The default step at `z`, halved until the stencil fits (points close to
/// the boundary); `None` when `z` is outside or no step down to 2⁻⁴⁰ of the
/// default fits.
pub fn fitting_step(domain: &CircledDomain, z: Complex64) -> Option<f64> {
    let mut h = default_step(domain, z);
    for _ in 0..=40 {
        if stencil_fits(domain, z, h) {
            return Some(h);
        }
        h *= 0.5;
    }
    None
}

/// Finite-difference jet of the surface at `z`. Stencil values are
/// `X(z) + Re ∫_z^{z+δ} f dζ` over the short straight segments, so the
/// differences carry no error from the long path integral.
pub fn jet(surface: &Surface, z: Complex64, h: f64) -> Result<Jet2, GeometryError> {
    if !stencil_fits(surface.domain(), z, h) {
        return Err(GeometryError::StencilOutside { z, h });
    }
    let x = surface.evaluate(z)?;
    let d = STENCIL
        .iter()
        .map(|(a, b)| {
            let w = surface.data().segment_integral(z, z + Complex64::new(a * h, b * h))?;
            Ok(w.iter().map(|c| c.re).collect())
        })
        .collect::<Result<Vec<Vec<f64>>, EvalError>>()?;
    Ok(Jet2::from_displacements(z, x, &d, h))
}

/// `max(| |X_u| − |X_v| | / min(|X_u|, |X_v|), |X_u·X_v| / (|X_u||X_v|))`.
pub fn conformality_residual(j: &Jet2) -> Result<f64, GeometryError> {
    let (a, b) = (norm(&j.xu), norm(&j.xv));
    if a == 0.0 && b == 0.0 {
        return Err(GeometryError::RankZero(j.z));
    }
    let lo = a.min(b);
    if lo == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(((a - b).abs() / lo).max(dot(&j.xu, &j.xv).abs() / (a * b)))
}

/// `|ΔX|`.
pub fn harmonicity_residual(j: &Jet2) -> f64 {
    norm(&j.laplacian())
}

/// `(ΔX·X_u, ΔX·X_v) / (|∇X| |ΔX|)`, zero when `ΔX = 0`.
pub fn laplacian_orthogonality(j: &Jet2) -> (f64, f64) {
    let lap = j.laplacian();
    let den = j.gradient_norm_sqr().sqrt() * norm(&lap);
    if den == 0.0 {
        return (0.0, 0.0);
    }
    (dot(&lap, &j.xu) / den, dot(&lap, &j.xv) / den)
}

/// As [`laplacian_orthogonality`], but a Laplacian whose mean curvature
/// magnitude `2|ΔX|/|∇X|²` is at most `floor` counts as zero. On minimal
/// surfaces the finite-difference Laplacian is pure truncation error with
/// no meaningful direction.
pub fn laplacian_orthogonality_resolved(j: &Jet2, floor: f64) -> (f64, f64) {
    let g = j.gradient_norm_sqr();
    if g == 0.0 || 2.0 * harmonicity_residual(j) / g <= floor {
        return (0.0, 0.0);
    }
    laplacian_orthogonality(j)
}

/// `𝐇 = 2ΔX / |∇X|²` for a conformal jet.
pub fn mean_curvature_vector(j: &Jet2) -> Result<Vec<f64>, GeometryError> {
    let r = conformality_residual(j)?;
    if r > CONFORMALITY_LIMIT {
        return Err(GeometryError::NotConformal(r));
    }
    let g = j.gradient_norm_sqr();
    Ok(j.laplacian().iter().map(|l| 2.0 * l / g).collect())
}

/// `X_u × X_v / |X_u × X_v|`.
pub fn unit_normal(j: &Jet2) -> Result<[f64; 3], GeometryError> {
    if j.dimension() != 3 {
        return Err(GeometryError::Dimension(j.dimension()));
    }
    let (a, b) = (&j.xu, &j.xv);
    let n = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let len = norm(&n);
    if len == 0.0 {
        return Err(GeometryError::RankZero(j.z));
    }
    Ok([n[0] / len, n[1] / len, n[2] / len])
}

/// Inverse stereographic projection from (0, 0, 1):
/// `N = (2 Re 𝔤, 2 Im 𝔤, |𝔤|² − 1) / (|𝔤|² + 1)`.
pub fn stereographic(g: ExtendedComplex) -> [f64; 3] {
    match g {
        ExtendedComplex::Infinity => [0.0, 0.0, 1.0],
        ExtendedComplex::Finite(g) if g.norm() <= 1.0 => {
            let s = g.norm_sqr();
            [2.0 * g.re / (s + 1.0), 2.0 * g.im / (s + 1.0), (s - 1.0) / (s + 1.0)]
        }
        ExtendedComplex::Finite(g) => {
            // in terms of w = 1/𝔤 to stay accurate near the north pole
            let w = 1.0 / g;
            let s = w.norm_sqr();
            [2.0 * w.re / (1.0 + s), -2.0 * w.im / (1.0 + s), (1.0 - s) / (1.0 + s)]
        }
    }
}

/// Stereographic projection `𝔤 = (N₁ + iN₂)/(1 − N₃)` of a unit vector.
pub fn inverse_stereographic(n: [f64; 3]) -> ExtendedComplex {
    if n[2] <= 0.0 {
        return ExtendedComplex::Finite(Complex64::new(n[0], n[1]) / (1.0 - n[2]));
    }
    // equal on the sphere, and free of cancellation near the north pole
    let den = Complex64::new(n[0], -n[1]);
    if den == Complex64::new(0.0, 0.0) {
        return ExtendedComplex::Infinity;
    }
    ExtendedComplex::Finite((1.0 + n[2]) / den)
}

fn evaluate_nonzero(data: &NullData, z: Complex64) -> Result<Vec<Complex64>, GeometryError> {
    let f = data.evaluate(z)?;
    if f.iter().all(|c| *c == Complex64::new(0.0, 0.0)) {
        return Err(GeometryError::ZeroData(z));
    }
    Ok(f)
}

/// Complex Gauss map `f₃ / (f₁ − i f₂)`.
pub fn gauss_map(data: &NullData, z: Complex64) -> Result<ExtendedComplex, GeometryError> {
    if data.dimension() != 3 {
        return Err(GeometryError::Dimension(data.dimension()));
    }
    let f = evaluate_nonzero(data, z)?;
    let den = f[0] - Complex64::i() * f[1];
    if den == Complex64::new(0.0, 0.0) {
        return Ok(ExtendedComplex::Infinity);
    }
    Ok(ExtendedComplex::Finite(f[2] / den))
}

/// Projective point `[f₁ : … : fₙ]`, scaled to unit length with its largest
/// coordinate real and positive.
pub fn generalized_gauss_map(data: &NullData, z: Complex64) -> Result<Vec<Complex64>, GeometryError> {
    Ok(projective_normalize(&evaluate_nonzero(data, z)?))
}

pub fn projective_normalize(v: &[Complex64]) -> Vec<Complex64> {
    let len = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let pivot = v
        .iter()
        .copied()
        .fold(Complex64::new(0.0, 0.0), |best, c| if c.norm() > best.norm() { c } else { best });
    if len == 0.0 {
        return v.to_vec();
    }
    let phase = pivot.conj() / pivot.norm();
    v.iter().map(|c| c * phase / len).collect()
}

/// Rational parameterization `t ↦ [1 − t² : i(1 + t²) : 2t]` of the
/// projectivized null quadric in ℂℙ².
pub fn tau(t: ExtendedComplex) -> [Complex64; 3] {
    match t {
        ExtendedComplex::Infinity => [Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        ExtendedComplex::Finite(t) => [1.0 - t * t, Complex64::i() * (1.0 + t * t), 2.0 * t],
    }
}

/// Conformal factor `λ = ½ Σ |f_j|²` of the metric `λ |dz|²`.
pub fn metric_coefficient(data: &NullData, z: Complex64) -> Result<f64, GeometryError> {
    let f = evaluate_nonzero(data, z)?;
    Ok(0.5 * f.iter().map(|c| c.norm_sqr()).sum::<f64>())
}

/// `K·λ`, the curvature density with respect to `du dv`. In dimension 3 this
/// is `−4|𝔤′|²/(1 + |𝔤|²)²` written through `a = f₃`, `b = f₁ − i f₂`;
/// otherwise the general null-curve formula
/// `−2(|f|²|f′|² − |⟨f′, f⟩|²)/|f|⁴`.
pub fn curvature_density(data: &NullData, z: Complex64) -> Result<f64, GeometryError> {
    let f = evaluate_nonzero(data, z)?;
    let df = data.evaluate_derivative(z)?;
    if f.len() == 3 {
        let i = Complex64::i();
        let (a, b) = (f[2], f[0] - i * f[1]);
        let (da, db) = (df[2], df[0] - i * df[1]);
        let s = a.norm_sqr() + b.norm_sqr();
        return Ok(-4.0 * (da * b - a * db).norm_sqr() / (s * s));
    }
    let ff: f64 = f.iter().map(|c| c.norm_sqr()).sum();
    let dd: f64 = df.iter().map(|c| c.norm_sqr()).sum();
    let cross: Complex64 = df.iter().zip(&f).map(|(d, c)| d * c.conj()).sum();
    Ok(-2.0 * (ff * dd - cross.norm_sqr()).max(0.0) / (ff * ff))
}

pub fn gauss_curvature(data: &NullData, z: Complex64) -> Result<f64, GeometryError> {
    Ok(curvature_density(data, z)? / metric_coefficient(data, z)?)
}

/// `(√(−K), −√(−K))` for minimal data in ℝ³.
pub fn principal_curvatures(data: &NullData, z: Complex64) -> Result<(f64, f64), GeometryError> {
    if data.dimension() != 3 {
        return Err(GeometryError::Dimension(data.dimension()));
    }
    let k = gauss_curvature(data, z)?;
    if k > CURVATURE_SLACK {
        return Err(GeometryError::PositiveCurvature(k));
    }
    let r = (-k).max(0.0).sqrt();
    Ok((r, -r))
}

/// Everything the sweep reports at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureSample {
    pub z: Complex64,
    pub lambda: f64,
    pub k: f64,
    /// Principal curvatures (dimension 3 only).
    pub kappa: Option<(f64, f64)>,
    pub mean_curvature: Vec<f64>,
    /// Complex Gauss map (dimension 3 only).
    pub gauss: Option<ExtendedComplex>,
    pub generalized: Vec<Complex64>,
}

pub fn curvature_sample(surface: &Surface, z: Complex64) -> Result<CurvatureSample, GeometryError> {
    let data = surface.data();
    let h = fitting_step(surface.domain(), z).ok_or(GeometryError::StencilOutside {
        z,
        h: default_step(surface.domain(), z),
    })?;
    let j = jet(surface, z, h)?;
    let three = data.dimension() == 3;
    Ok(CurvatureSample {
        z,
        lambda: metric_coefficient(data, z)?,
        k: gauss_curvature(data, z)?,
        kappa: if three { Some(principal_curvatures(data, z)?) } else { None },
        mean_curvature: mean_curvature_vector(&j)?,
        gauss: if three { Some(gauss_map(data, z)?) } else { None },
        generalized: generalized_gauss_map(data, z)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// `(log r, θ)` cells on a concentric annulus.
    LogPolar,
    /// `(r, θ)` cells on a disc.
    Polar,
    /// Cartesian cells on the bounding box, masked by the domain.
    Cartesian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TotalCurvature {
    /// Extrapolated value of `∫ K dA`.
    pub value: f64,
    pub error: f64,
    /// Midpoint sums at resolutions n/2, n and 2n.
    pub levels: [f64; 3],
    pub resolution: usize,
    pub scheme: Scheme,
}

/// Region of integration: the closed holes are removed, punctures by their
/// margin disc.
fn in_region(domain: &CircledDomain, z: Complex64) -> bool {
    if domain.outer_clearance(z) <= 0.0 {
        return false;
    }
    domain.holes().iter().all(|h| {
        let r = if h.is_puncture() { domain.margin() } else { h.radius };
        (z - h.center).norm() > r
    })
}

fn midpoint_sum(data: &NullData, domain: &CircledDomain, scheme: Scheme, n: usize) -> Result<f64, GeometryError> {
    let rows: Vec<Result<f64, GeometryError>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = 0.0;
            for k in 0..n {
                let (z, weight) = match cell(domain, scheme, n, i, k) {
                    Some(c) => c,
                    None => continue,
                };
                row += curvature_density(data, z)? * weight;
            }
            Ok(row)
        })
        .collect();
    let mut total = 0.0;
    for r in rows {
        total += r?;
    }
    Ok(total)
}

/// Midpoint of cell `(i, k)` and its Jacobian-weighted area.
fn cell(domain: &CircledDomain, scheme: Scheme, n: usize, i: usize, k: usize) -> Option<(Complex64, f64)> {
    use std::f64::consts::PI;
    let t = (i as f64 + 0.5) / n as f64;
    let a = 2.0 * PI * (k as f64 + 0.5) / n as f64;
    let dtheta = 2.0 * PI / n as f64;
    match (scheme, domain.outer()) {
        (Scheme::LogPolar, Outer::Disc { center, radius }) => {
            let h = domain.concentric_hole().expect("concentric annulus");
            let inner = if h.is_puncture() { domain.margin() } else { h.radius };
            let (s0, s1) = (inner.ln(), radius.ln());
            let r = (s0 + t * (s1 - s0)).exp();
            Some((center + Complex64::from_polar(r, a), r * r * (s1 - s0) / n as f64 * dtheta))
        }
        (Scheme::Polar, Outer::Disc { center, radius }) => {
            let r = t * radius;
            Some((center + Complex64::from_polar(r, a), r * radius / n as f64 * dtheta))
        }
        _ => {
            let (min, max) = domain.bounding_box();
            let (dx, dy) = ((max.re - min.re) / n as f64, (max.im - min.im) / n as f64);
            let z = Complex64::new(min.re + (k as f64 + 0.5) * dx, min.im + (i as f64 + 0.5) * dy);
            in_region(domain, z).then_some((z, dx * dy))
        }
    }
}

pub fn scheme_for(domain: &CircledDomain) -> Scheme {
    match domain.outer() {
        Outer::Disc { .. } if domain.holes().is_empty() => Scheme::Polar,
        Outer::Disc { .. } if domain.concentric_hole().is_some() => Scheme::LogPolar,
        _ => Scheme::Cartesian,
    }
}

/// `∫ K dA = ∫ K·λ du dv` by midpoint sums at resolutions `n/2, n, 2n` with
/// one Richardson step. Masked Cartesian grids (holes not aligned with the
/// cells) are not smooth in the resolution, so the finest sum is returned
/// there.
pub fn total_curvature(data: &NullData, domain: &CircledDomain, resolution: usize) -> Result<TotalCurvature, GeometryError> {
    let scheme = scheme_for(domain);
    let n = resolution.max(4) & !1;
    let levels = [
        midpoint_sum(data, domain, scheme, n / 2)?,
        midpoint_sum(data, domain, scheme, n)?,
        midpoint_sum(data, domain, scheme, 2 * n)?,
    ];
    let (d1, d2) = ((levels[1] - levels[0]).abs(), (levels[2] - levels[1]).abs());
    let noise = 1e-9 * levels[2].abs().max(1.0);
    if !levels.iter().all(|v| v.is_finite()) || (d2 > d1 && d2 > noise) {
        return Err(GeometryError::Divergent { levels });
    }
    let smooth = scheme != Scheme::Cartesian || domain.holes().is_empty();
    let (value, error) = if smooth {
        (levels[2] + (levels[2] - levels[1]) / 3.0, d2 / 3.0)
    } else {
        (levels[2], d2)
    };
    Ok(TotalCurvature {
        value,
        error,
        levels,
        resolution: n,
        scheme,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathLength {
    pub length: f64,
    pub error: f64,
    /// True when part of the path leaves the circled domain; the data is
    /// still integrated wherever it evaluates.
    pub outside_domain: bool,
}

/// Length `∫ √λ |dζ|` of the image of a parameter path.
pub fn path_length(data: &NullData, domain: &CircledDomain, path: &PathPolyline, tol: f64) -> Result<PathLength, GeometryError> {
    let r = quadrature::integrate_polyline(
        |z| {
            let f = data.evaluate(z)?;
            let lambda = 0.5 * f.iter().map(|c| c.norm_sqr()).sum::<f64>();
            Ok(vec![Complex64::new(lambda.sqrt(), 0.0)])
        },
        &path.vertices,
        1,
        Measure::ArcLength,
        tol,
        MAX_SEGMENTS,
    )?;
    Ok(PathLength {
        length: r.value[0].re,
        error: r.error[0],
        outside_domain: !domain.contains_path(path),
    })
}
