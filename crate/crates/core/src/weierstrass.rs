//! Weierstrass data, periods and the integrated immersion.
//!
//! Convention: the stored components are `f = 2∂X/∂z`, so the surface is
//! `X(z) = c + Re ∫_{z0}^{z} f dζ` and the null curve is `Z = c + ∫ f dζ`.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::domain::{CircledDomain, Cycle, DomainError, PathPolyline};
use crate::expr::{EvalError, Expression, ParseError};
use crate::quadrature::{self, Measure, QuadratureError, MAX_SEGMENTS};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_SAMPLES: usize = 4096;
/// Periods below `PERIOD_FACTOR * tol` count as vanishing.
pub const PERIOD_FACTOR: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    User,
    Gdh,
    Catalog,
}

/// Which pole `g` projects from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pole {
    /// Projection from (0, 0, 1): the Gauss map equals `g`.
    #[default]
    North,
    /// Projection from (0, 0, -1): the Gauss map equals `1/g`.
    South,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeierstrassError {
    #[error("Weierstrass data needs at least 3 components, got {0}")]
    Dimension(usize),
    #[error("offset has {found} components, data has {expected}")]
    OffsetDimension { expected: usize, found: usize },
    #[error("basepoint {0} is not in the domain")]
    Basepoint(Complex64),
    #[error("real period on cycle {cycle} does not vanish (max |Re| = {magnitude:e})")]
    RealPeriod { cycle: usize, magnitude: f64 },
    #[error("complex period on cycle {cycle} does not vanish (max modulus {magnitude:e})")]
    ComplexPeriod { cycle: usize, magnitude: f64 },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Holomorphic data `f = (f_1, …, f_n)` with symbolic derivatives.
#[derive(Debug, Clone)]
pub struct NullData {
    components: Vec<Expression>,
    derivatives: Vec<Expression>,
    provenance: Provenance,
}

impl NullData {
    pub fn new(components: Vec<Expression>, provenance: Provenance) -> Result<NullData, WeierstrassError> {
        if components.len() < 3 {
            return Err(WeierstrassError::Dimension(components.len()));
        }
        let derivatives = components.iter().map(Expression::differentiate).collect();
        Ok(NullData {
            components,
            derivatives,
            provenance,
        })
    }

    /// Parses component sources.
    pub fn parse<S: AsRef<str>>(sources: &[S], provenance: Provenance) -> Result<NullData, WeierstrassError> {
        let comps = sources
            .iter()
            .map(|s| Expression::parse(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        NullData::new(comps, provenance)
    }

    /// Three-dimensional data from a Gauss map `g` and height differential
    /// `dh`: `f = (½(1/g − g), (i/2)(1/g + g), 1)·dh` for the north pole
    /// convention (with `g` replaced by `1/g` for the south pole).
    pub fn from_gdh(g: &Expression, dh: &Expression, pole: Pole) -> NullData {
        let half = Complex64::new(0.5, 0.0);
        let half_i = Complex64::new(0.0, 0.5);
        let (a, b) = match pole {
            Pole::North => (g.recip(), g.clone()),
            Pole::South => (g.clone(), g.recip()),
        };
        let f1 = a.sub(&b).scale(half).mul(dh);
        let f2 = a.add(&b).scale(half_i).mul(dh);
        let f3 = dh.clone();
        NullData::new(vec![f1, f2, f3], Provenance::Gdh).expect("three components")
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Expression] {
        &self.components
    }

    pub fn derivatives(&self) -> &[Expression] {
        &self.derivatives
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> NullData {
        self.provenance = provenance;
        self
    }

    /// Every component multiplied by `factor`.
    pub fn scaled(&self, factor: Complex64) -> NullData {
        NullData::new(self.components.iter().map(|e| e.scale(factor)).collect(), self.provenance)
            .expect("same dimension")
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Vec<Complex64>, EvalError> {
        self.components.iter().map(|e| e.evaluate(z)).collect()
    }

    pub fn evaluate_derivative(&self, z: Complex64) -> Result<Vec<Complex64>, EvalError> {
        self.derivatives.iter().map(|e| e.evaluate(z)).collect()
    }

    /// Relative nullity defect `|Σ f_j²| / Σ |f_j|²`.
    pub fn nullity_residual(&self, z: Complex64) -> Result<f64, EvalError> {
        Ok(nullity_of(&self.evaluate(z)?))
    }

    /// `∫ f dζ` along a straight segment with one 15-point Kronrod rule.
    /// Accurate to rounding only for segments short against the distance to
    /// the nearest singularity.
    pub fn segment_integral(&self, a: Complex64, b: Complex64) -> Result<Vec<Complex64>, EvalError> {
        quadrature::kronrod15(|z| self.evaluate(z), a, b, self.dimension())
    }
}

/// Relative nullity defect of a vector; infinite at the origin.
pub fn nullity_of(f: &[Complex64]) -> f64 {
    let sq: Complex64 = f.iter().map(|c| c * c).sum();
    let norm: f64 = f.iter().map(|c| c.norm_sqr()).sum();
    if norm == 0.0 {
        f64::INFINITY
    } else {
        sq.norm() / norm
    }
}

/// Two-sheeted parameterization `(z² − w², i(z² + w²), 2zw)` of the null
/// quadric in ℂ³.
pub fn spinor(z: Complex64, w: Complex64) -> [Complex64; 3] {
    let (z2, w2) = (z * z, w * w);
    [z2 - w2, Complex64::i() * (z2 + w2), 2.0 * z * w]
}

pub fn integrate_path(data: &NullData, path: &PathPolyline, tol: f64) -> Result<Vec<Complex64>, QuadratureError> {
    integrate_vertices(data, &path.vertices, tol)
}

fn integrate_vertices(data: &NullData, vertices: &[Complex64], tol: f64) -> Result<Vec<Complex64>, QuadratureError> {
    quadrature::integrate_polyline(|z| data.evaluate(z), vertices, data.dimension(), Measure::Complex, tol, MAX_SEGMENTS)
        .map(|r| r.value)
}

/// `∮ f dz` over a closed cycle.
pub fn period(data: &NullData, cycle: &Cycle, tol: f64) -> Result<Vec<Complex64>, QuadratureError> {
    integrate_vertices(data, &cycle.vertices, tol)
}

pub fn real_period(data: &NullData, cycle: &Cycle, tol: f64) -> Result<Vec<f64>, QuadratureError> {
    Ok(period(data, cycle, tol)?.iter().map(|c| c.re).collect())
}

pub fn flux(data: &NullData, cycle: &Cycle, tol: f64) -> Result<Vec<f64>, QuadratureError> {
    Ok(period(data, cycle, tol)?.iter().map(|c| c.im).collect())
}

/// Data together with where and how to integrate it.
#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub name: String,
    pub data: NullData,
    pub domain: CircledDomain,
    pub basepoint: Complex64,
    pub offset: Vec<f64>,
}

impl SurfaceSpec {
    pub fn new(
        name: impl Into<String>,
        data: NullData,
        domain: CircledDomain,
        basepoint: Complex64,
        offset: Vec<f64>,
    ) -> Result<SurfaceSpec, WeierstrassError> {
        if offset.len() != data.dimension() {
            return Err(WeierstrassError::OffsetDimension {
                expected: data.dimension(),
                found: offset.len(),
            });
        }
        if !domain.contains(basepoint) {
            return Err(WeierstrassError::Basepoint(basepoint));
        }
        Ok(SurfaceSpec {
            name: name.into(),
            data,
            domain,
            basepoint,
            offset,
        })
    }

    pub fn dimension(&self) -> usize {
        self.data.dimension()
    }
}

/// Period of one homology basis cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclePeriod {
    pub cycle: usize,
    pub hole: Option<usize>,
    pub period: Vec<Complex64>,
}

impl CyclePeriod {
    pub fn real(&self) -> Vec<f64> {
        self.period.iter().map(|c| c.re).collect()
    }

    pub fn flux(&self) -> Vec<f64> {
        self.period.iter().map(|c| c.im).collect()
    }

    fn max_real(&self) -> f64 {
        self.period.iter().map(|c| c.re.abs()).fold(0.0, f64::max)
    }

    fn max_modulus(&self) -> f64 {
        self.period.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceReport {
    pub samples: usize,
    pub tol: f64,
    /// Max relative nullity defect over the samples.
    pub nullity_residual: f64,
    /// Max relative Cauchy–Riemann defect over samples and components.
    pub holomorphy_residual: f64,
    /// Min of `Σ|f_j|²` over the samples; zero means `f` vanishes.
    pub min_norm: f64,
    pub periods: Vec<CyclePeriod>,
    /// Points where the data could not be evaluated, with the reason.
    pub failures: Vec<(Complex64, String)>,
    pub nullity_ok: bool,
    pub nonvanishing: bool,
    pub real_periods_vanish: bool,
    pub all_periods_vanish: bool,
}

impl SurfaceReport {
    /// Whether the data defines a conformal minimal immersion.
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty() && self.nullity_ok && self.nonvanishing && self.real_periods_vanish
    }
}

/// Cauchy–Riemann defect `|f_y − i f_x| / (|f_x| + |f_y| + |f|/ℓ)` by
/// central differences with step `1e-4·ℓ`, maximized over components.
fn holomorphy_defect(data: &NullData, z: Complex64, scale: f64) -> Result<f64, EvalError> {
    let h = 1e-4 * scale;
    let hx = Complex64::new(h, 0.0);
    let hy = Complex64::new(0.0, h);
    let f = data.evaluate(z)?;
    let (xp, xm) = (data.evaluate(z + hx)?, data.evaluate(z - hx)?);
    let (yp, ym) = (data.evaluate(z + hy)?, data.evaluate(z - hy)?);
    let mut worst: f64 = 0.0;
    for j in 0..f.len() {
        let fx = (xp[j] - xm[j]) / (2.0 * h);
        let fy = (yp[j] - ym[j]) / (2.0 * h);
        let den = fx.norm() + fy.norm() + f[j].norm() / scale;
        if den > 0.0 {
            worst = worst.max((fy - Complex64::i() * fx).norm() / den);
        }
    }
    Ok(worst)
}

struct SampleCheck {
    nullity: f64,
    holomorphy: f64,
    norm: f64,
}

/// Residual checks on `samples` quasi-random domain points plus the periods
/// of every homology basis cycle.
pub fn validate(spec: &SurfaceSpec, samples: usize, seed: u64, tol: f64) -> SurfaceReport {
    let points = spec.domain.sample_points(samples, seed, |_| true);
    let checks: Vec<Result<SampleCheck, EvalError>> = points
        .par_iter()
        .map(|&z| {
            let f = spec.data.evaluate(z)?;
            let holomorphy = holomorphy_defect(&spec.data, z, spec.domain.local_scale(z))?;
            Ok(SampleCheck {
                nullity: nullity_of(&f),
                holomorphy,
                norm: f.iter().map(|c| c.norm_sqr()).sum(),
            })
        })
        .collect();
    let mut failures = Vec::new();
    let (mut nullity, mut holomorphy, mut min_norm) = (0.0f64, 0.0f64, f64::INFINITY);
    for (z, c) in points.iter().zip(checks) {
        match c {
            Ok(c) => {
                nullity = nullity.max(c.nullity);
                holomorphy = holomorphy.max(c.holomorphy);
                min_norm = min_norm.min(c.norm);
            }
            Err(e) => failures.push((*z, e.to_string())),
        }
    }
    if points.is_empty() {
        min_norm = 0.0;
    }

    let (periods, mut period_failures) = basis_periods(spec, tol);
    failures.append(&mut period_failures);
    let threshold = PERIOD_FACTOR * tol;
    let complete = periods.len() == spec.domain.holes().len();
    let real_periods_vanish = complete && periods.iter().all(|p| p.max_real() <= threshold);
    let all_periods_vanish = complete && periods.iter().all(|p| p.max_modulus() <= threshold);
    SurfaceReport {
        samples: points.len(),
        tol,
        nullity_residual: nullity,
        holomorphy_residual: holomorphy,
        min_norm,
        periods,
        failures,
        nullity_ok: nullity <= tol,
        nonvanishing: min_norm > 0.0,
        real_periods_vanish,
        all_periods_vanish,
    }
}

fn basis_periods(spec: &SurfaceSpec, tol: f64) -> (Vec<CyclePeriod>, Vec<(Complex64, String)>) {
    let basis = match spec.domain.homology_basis() {
        Ok(b) => b,
        Err(e) => return (Vec::new(), vec![(spec.basepoint, e.to_string())]),
    };
    let results: Vec<_> = basis.par_iter().map(|c| period(&spec.data, c, tol)).collect();
    let mut periods = Vec::new();
    let mut failures = Vec::new();
    for (k, (cycle, r)) in basis.iter().zip(results).enumerate() {
        match r {
            Ok(p) => periods.push(CyclePeriod {
                cycle: k,
                hole: cycle.hole,
                period: p,
            }),
            Err(e) => failures.push((cycle.vertices[0], format!("cycle {k}: {e}"))),
        }
    }
    (periods, failures)
}

/// A spec whose basis periods have been computed once.
#[derive(Debug, Clone)]
pub struct Surface {
    spec: SurfaceSpec,
    tol: f64,
    periods: Vec<CyclePeriod>,
}

impl Surface {
    /// Computes the basis periods and rejects data whose real periods do not
    /// vanish (the integral would not be single valued).
    pub fn new(spec: SurfaceSpec, tol: f64) -> Result<Surface, WeierstrassError> {
        let basis = spec.domain.homology_basis()?;
        let mut periods = Vec::with_capacity(basis.len());
        for (k, cycle) in basis.iter().enumerate() {
            let p = CyclePeriod {
                cycle: k,
                hole: cycle.hole,
                period: period(&spec.data, cycle, tol)?,
            };
            let magnitude = p.max_real();
            if magnitude > PERIOD_FACTOR * tol {
                return Err(WeierstrassError::RealPeriod { cycle: k, magnitude });
            }
            periods.push(p);
        }
        Ok(Surface { spec, tol, periods })
    }

    pub fn spec(&self) -> &SurfaceSpec {
        &self.spec
    }

    pub fn data(&self) -> &NullData {
        &self.spec.data
    }

    pub fn domain(&self) -> &CircledDomain {
        &self.spec.domain
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension()
    }

    pub fn periods(&self) -> &[CyclePeriod] {
        &self.periods
    }

    /// `∫_{z0}^{z} f dζ` along the canonical route.
    pub fn primitive(&self, z: Complex64) -> Result<Vec<Complex64>, WeierstrassError> {
        let path = self.spec.domain.connect(self.spec.basepoint, z)?;
        self.primitive_along(&path)
    }

    /// `∫ f dζ` along a caller-chosen route starting at the basepoint.
    pub fn primitive_along(&self, path: &PathPolyline) -> Result<Vec<Complex64>, WeierstrassError> {
        Ok(integrate_path(&self.spec.data, path, self.tol)?)
    }

    /// `X(z) = c + Re ∫_{z0}^{z} f dζ`.
    pub fn evaluate(&self, z: Complex64) -> Result<Vec<f64>, WeierstrassError> {
        let p = self.primitive(z)?;
        Ok(self.spec.offset.iter().zip(&p).map(|(c, v)| c + v.re).collect())
    }

    /// `Z(z) = c + ∫_{z0}^{z} f dζ`, defined only when every complex period
    /// vanishes.
    pub fn evaluate_null_curve(&self, z: Complex64) -> Result<Vec<Complex64>, WeierstrassError> {
        for p in &self.periods {
            let magnitude = p.max_modulus();
            if magnitude > PERIOD_FACTOR * self.tol {
                return Err(WeierstrassError::ComplexPeriod { cycle: p.cycle, magnitude });
            }
        }
        let p = self.primitive(z)?;
        Ok(self.spec.offset.iter().zip(&p).map(|(c, v)| c + v).collect())
    }
}

pub fn evaluate_surface(spec: &SurfaceSpec, z: Complex64, tol: f64) -> Result<Vec<f64>, WeierstrassError> {
    Surface::new(spec.clone(), tol)?.evaluate(z)
}

pub fn evaluate_null_curve(spec: &SurfaceSpec, z: Complex64, tol: f64) -> Result<Vec<Complex64>, WeierstrassError> {
    Surface::new(spec.clone(), tol)?.evaluate_null_curve(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::CYCLE_VERTICES;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn data(src: &[&str]) -> NullData {
        NullData::parse(src, Provenance::User).unwrap()
    }

    fn catenoid_ew() -> NullData {
        NullData::from_gdh(&Expression::parse("z").unwrap(), &Expression::parse("-2/z").unwrap(), Pole::North)
    }

    fn catenoid_ew_spec() -> SurfaceSpec {
        let domain = CircledDomain::annulus(c(0.0, 0.0), 0.01, 100.0, 1e-4).unwrap();
        SurfaceSpec::new("catenoid-ew", catenoid_ew(), domain, c(1.0, 0.0), vec![1.0, 0.0, 0.0]).unwrap()
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn dimension_below_three_is_rejected() {
        let comps = vec![Expression::parse("1").unwrap(), Expression::parse("i").unwrap()];
        assert_eq!(NullData::new(comps, Provenance::User).unwrap_err(), WeierstrassError::Dimension(2));
    }

    #[test]
    fn from_gdh_catenoid_components() {
        let f = catenoid_ew().evaluate(c(1.0, 0.0)).unwrap();
        assert!(close(&f, &[c(0.0, 0.0), c(0.0, -2.0), c(-2.0, 0.0)], 1e-15));
        // f = (−(1/z − z)/z, −i(1/z + z)/z, −2/z)
        let z = c(0.3, -1.7);
        let f = catenoid_ew().evaluate(z).unwrap();
        let want = [-(1.0 / z - z) / z, -Complex64::i() * (1.0 / z + z) / z, -2.0 / z];
        assert!(close(&f, &want, 1e-14));
        assert_eq!(catenoid_ew().provenance(), Provenance::Gdh);
    }

    #[test]
    fn from_gdh_south_pole_inverts_gauss_map() {
        let g = Expression::parse("z").unwrap();
        let dh = Expression::parse("1").unwrap();
        let z = c(0.4, 0.9);
        for (pole, want) in [(Pole::North, z), (Pole::South, 1.0 / z)] {
            let f = NullData::from_gdh(&g, &dh, pole).evaluate(z).unwrap();
            let gauss = f[2] / (f[0] - Complex64::i() * f[1]);
            assert!((gauss - want).norm() < 1e-14);
            assert!(nullity_of(&f) < 1e-15);
        }
    }

    #[test]
    fn from_gdh_nullity_on_samples() {
        let cases = [("z", "-2/z"), ("exp(i*z)", "1"), ("z", "z"), ("sin(z) + 2", "z^2 + 1")];
        for (g, dh) in cases {
            let d = NullData::from_gdh(&Expression::parse(g).unwrap(), &Expression::parse(dh).unwrap(), Pole::North);
            for k in 0..200 {
                let (s, t) = crate::sampling::halton2(k);
                let z = c(2.0 * s - 1.0, 2.0 * t - 1.0) * 1.5 + c(0.01, 0.0);
                if let Ok(r) = d.nullity_residual(z) {
                    assert!(r <= 1e-13, "{g}, {dh} at {z}: {r}");
                }
            }
        }
    }

    #[test]
    fn spinor_examples() {
        assert_eq!(spinor(c(1.0, 0.0), c(0.0, 0.0)), [c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]);
        assert_eq!(spinor(c(1.0, 0.0), c(1.0, 0.0)), [c(0.0, 0.0), c(0.0, 2.0), c(2.0, 0.0)]);
        assert_eq!(spinor(c(0.0, 0.0), c(0.0, 0.0)), [c(0.0, 0.0); 3]);
    }

    #[test]
    fn nullity_of_constant_non_null_datum() {
        // (1, i, 0.1): |1 − 1 + 0.01| / (1 + 1 + 0.01)
        let d = data(&["1", "i", "0.1"]);
        let r = d.nullity_residual(c(0.0, 0.0)).unwrap();
        assert!((r - 0.01 / 2.01).abs() < 1e-15);
        assert_eq!(nullity_of(&[c(0.0, 0.0); 3]), f64::INFINITY);
    }

    #[test]
    fn integrate_constant_on_segment() {
        let d = data(&["1", "0", "0"]);
        let v = integrate_path(&d, &PathPolyline::segment(c(0.0, 0.0), c(1.0, 0.0)), 1e-10).unwrap();
        assert!(close(&v, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], 1e-15));
        let v = integrate_path(&d, &PathPolyline::segment(c(0.5, 0.5), c(0.5, 0.5)), 1e-10).unwrap();
        assert_eq!(v, vec![c(0.0, 0.0); 3]);
    }

    #[test]
    fn upper_half_circle_of_reciprocal() {
        // oracle: the arc integral ∫_0^π (−2/e^{iθ}) i e^{iθ} dθ = −2πi,
        // cross-checked by a composite midpoint rule on the polygon at 10x
        // resolution
        let n = 64;
        let verts: Vec<Complex64> = (0..=n).map(|k| Complex64::from_polar(1.0, PI * k as f64 / n as f64)).collect();
        let d = data(&["0", "0", "-2/z"]);
        let v = integrate_path(&d, &PathPolyline::new(verts.clone()), 1e-12).unwrap();
        assert!((v[2] - c(0.0, -2.0 * PI)).norm() < 1e-11);

        let mut midpoint = c(0.0, 0.0);
        let m = 640;
        for w in verts.windows(2) {
            for j in 0..m {
                let a = w[0] + (w[1] - w[0]) * (j as f64 / m as f64);
                let b = w[0] + (w[1] - w[0]) * ((j + 1) as f64 / m as f64);
                midpoint += -2.0 / ((a + b) * 0.5) * (b - a);
            }
        }
        assert!((v[2] - midpoint).norm() < 1e-6);
    }

    #[test]
    fn catenoid_period_and_flux() {
        let cycle = Cycle::circle(c(0.0, 0.0), 1.0, CYCLE_VERTICES, 1);
        let p = period(&catenoid_ew(), &cycle, 1e-10).unwrap();
        assert!(close(&p, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, -4.0 * PI)], 1e-9));
        let twice = Cycle::circle(c(0.0, 0.0), 1.0, CYCLE_VERTICES, 2);
        let p2 = period(&catenoid_ew(), &twice, 1e-10).unwrap();
        assert!((p2[2] - c(0.0, -8.0 * PI)).norm() < 1e-9);
        let r = real_period(&catenoid_ew(), &cycle, 1e-10).unwrap();
        assert!(r.iter().all(|x| x.abs() <= 1e-9));
        let fl = flux(&catenoid_ew(), &cycle, 1e-10).unwrap();
        assert!((fl[2] + 4.0 * PI).abs() < 1e-9 && fl[0].abs() < 1e-9 && fl[1].abs() < 1e-9);
    }

    #[test]
    fn polynomial_data_has_zero_periods() {
        let d = data(&["1 - z^2", "i*(1 + z^2)", "2*z"]);
        let cycle = Cycle::circle(c(0.2, -0.1), 0.7, CYCLE_VERTICES, 1);
        let p = period(&d, &cycle, 1e-10).unwrap();
        assert!(p.iter().all(|x| x.norm() < 1e-12));
    }

    #[test]
    fn flux_is_additive_over_concatenation() {
        // two holes: residues of 1/(z-1) and 3/(z+1)
        let d = data(&["1/(z - 1)", "3/(z + 1)", "1/(z - 1) + 3/(z + 1)"]);
        let domain = CircledDomain::new(
            crate::domain::Outer::Disc { center: c(0.0, 0.0), radius: 4.0 },
            vec![crate::domain::Hole { center: c(1.0, 0.0), radius: 0.3 }, crate::domain::Hole { center: c(-1.0, 0.0), radius: 0.3 }],
            0.01,
        )
        .unwrap();
        let basis = domain.homology_basis().unwrap();
        let bridge = domain.connect(basis[0].vertices[0], basis[1].vertices[0]).unwrap();
        let sum = basis[0].concat(&basis[1], &bridge);
        let f0 = flux(&d, &basis[0], 1e-10).unwrap();
        let f1 = flux(&d, &basis[1], 1e-10).unwrap();
        let fs = flux(&d, &sum, 1e-10).unwrap();
        for j in 0..3 {
            assert!((fs[j] - f0[j] - f1[j]).abs() < 1e-9);
        }
        assert!((fs[2] - 8.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn catenoid_surface_points() {
        let s = Surface::new(catenoid_ew_spec(), 1e-10).unwrap();
        let x = s.evaluate(c(1.0, 0.0)).unwrap();
        assert_eq!(x, vec![1.0, 0.0, 0.0]);
        // on the unit circle: X = (2 cos u − 1, 2 sin u, 0)
        for u in [0.3, 1.5, 2.9, -2.0] {
            let x = s.evaluate(Complex64::from_polar(1.0, u)).unwrap();
            let want = [2.0 * u.cos() - 1.0, 2.0 * u.sin(), 0.0];
            for j in 0..3 {
                assert!((x[j] - want[j]).abs() < 1e-9, "u={u}: {x:?}");
            }
        }
    }

    #[test]
    fn catenoid_routes_agree() {
        let s = Surface::new(catenoid_ew_spec(), 1e-10).unwrap();
        let z = c(-2.0, 0.0);
        let upper = PathPolyline::new(vec![c(1.0, 0.0), c(1.0, 2.0), c(-2.0, 2.0), z]);
        let lower = PathPolyline::new(vec![c(1.0, 0.0), c(1.0, -2.0), c(-2.0, -2.0), z]);
        let a = s.primitive_along(&upper).unwrap();
        let b = s.primitive_along(&lower).unwrap();
        for j in 0..3 {
            assert!((a[j].re - b[j].re).abs() <= 2e-10);
        }
    }

    #[test]
    fn helicatenoid_null_curve() {
        let d = data(&["-sin(z)", "cos(z)", "-i"]);
        let domain = CircledDomain::disc(c(0.0, 0.0), 2.0).unwrap();
        let spec = SurfaceSpec::new("helicatenoid", d, domain, c(0.0, 0.0), vec![1.0, 0.0, 0.0]).unwrap();
        let s = Surface::new(spec, 1e-10).unwrap();
        let z0 = s.evaluate_null_curve(c(0.0, 0.0)).unwrap();
        assert!(close(&z0, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], 0.0));
        let z = s.evaluate_null_curve(c(PI / 2.0, 0.0)).unwrap();
        assert!(close(&z, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, -PI / 2.0)], 1e-12));
        let x = s.evaluate(c(PI / 2.0, 0.0)).unwrap();
        assert!((x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn catenoid_null_curve_is_rejected() {
        match evaluate_null_curve(&catenoid_ew_spec(), c(2.0, 0.0), 1e-10) {
            Err(WeierstrassError::ComplexPeriod { cycle: 0, magnitude }) => {
                assert!((magnitude - 4.0 * PI).abs() < 1e-8)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nonvanishing_real_period_is_rejected() {
        // f1 = 1/z has real period 0 but f = (i/z, …) has real period −2π
        let d = data(&["i/z", "1/z", "0"]);
        let domain = CircledDomain::annulus(c(0.0, 0.0), 0.5, 2.0, 0.01).unwrap();
        let spec = SurfaceSpec::new("bad", d, domain, c(1.0, 0.0), vec![0.0; 3]).unwrap();
        assert!(matches!(Surface::new(spec, 1e-10), Err(WeierstrassError::RealPeriod { cycle: 0, .. })));
    }

    #[test]
    fn spec_checks_basepoint_and_offset() {
        let domain = CircledDomain::disc(c(0.0, 0.0), 1.0).unwrap();
        let d = data(&["1", "i", "0"]);
        assert!(matches!(
            SurfaceSpec::new("x", d.clone(), domain.clone(), c(2.0, 0.0), vec![0.0; 3]),
            Err(WeierstrassError::Basepoint(_))
        ));
        assert!(matches!(
            SurfaceSpec::new("x", d, domain, c(0.0, 0.0), vec![0.0; 2]),
            Err(WeierstrassError::OffsetDimension { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn validate_catenoid() {
        let r = validate(&catenoid_ew_spec(), 512, 0, 1e-10);
        assert_eq!(r.samples, 512);
        assert!(r.failures.is_empty());
        assert!(r.nullity_residual <= 1e-12);
        assert!(r.holomorphy_residual <= 1e-6, "{}", r.holomorphy_residual);
        assert!(r.real_periods_vanish);
        assert!(!r.all_periods_vanish);
        assert!(r.is_valid());
        assert_eq!(r.periods.len(), 1);
        assert!((r.periods[0].flux()[2] + 4.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn validate_helicoid_disc() {
        let d = NullData::from_gdh(&Expression::parse("exp(i*z)").unwrap(), &Expression::parse("1").unwrap(), Pole::North);
        let spec = SurfaceSpec::new("helicoid", d, CircledDomain::disc(c(0.0, 0.0), 2.0).unwrap(), c(0.0, 0.0), vec![0.0; 3]).unwrap();
        let r = validate(&spec, 256, 0, 1e-10);
        assert!(r.periods.is_empty());
        assert!(r.real_periods_vanish && r.all_periods_vanish && r.nullity_ok && r.nonvanishing);
    }

    #[test]
    fn validate_flags_non_null_data() {
        let spec = SurfaceSpec::new("x", data(&["1", "i", "0.1"]), CircledDomain::disc(c(0.0, 0.0), 1.0).unwrap(), c(0.0, 0.0), vec![0.0; 3])
            .unwrap();
        let r = validate(&spec, 64, 0, 1e-10);
        assert!(!r.nullity_ok);
        assert!(!r.is_valid());
    }

    #[test]
    fn validate_reports_branch_cut_as_holomorphy_defect() {
        // sqrt jumps across the negative real axis
        let spec = SurfaceSpec::new(
            "x",
            data(&["sqrt(z)", "i*sqrt(z)", "0"]),
            CircledDomain::rectangle(c(-1.0, -1.0), c(1.0, 1.0)).unwrap(),
            c(0.5, 0.0),
            vec![0.0; 3],
        )
        .unwrap();
        let r = validate(&spec, 4096, 0, 1e-10);
        assert!(r.holomorphy_residual > 0.1);
    }

    #[test]
    fn validate_is_deterministic() {
        let a = validate(&catenoid_ew_spec(), 128, 3, 1e-10);
        let b = validate(&catenoid_ew_spec(), 128, 3, 1e-10);
        assert_eq!(a, b);
    }
}
