//! Conjugate and associated minimal surfaces `X^t = Re(e^{it} Z)`.

use num_complex::Complex64;

use crate::weierstrass::{period, NullData, SurfaceSpec, WeierstrassError, PERIOD_FACTOR};

/// Data of the conjugate surface `Y = Im Z`: `2∂Y/∂z = −i f`.
pub fn conjugate(data: &NullData) -> NullData {
    data.scaled(Complex64::new(0.0, -1.0))
}

/// Data of `X^t = Re(e^{it} Z)`: `e^{it} f`.
pub fn associate(data: &NullData, t: f64) -> NullData {
    if t == 0.0 {
        return data.clone();
    }
    data.scaled(Complex64::from_polar(1.0, t))
}

/// Whether `t` is a multiple of π, where only real periods matter.
fn real_multiple_of_pi(t: f64) -> bool {
    t.sin().abs() <= 1e-12
}

/// Complex periods must vanish for the transformed surface to be single
/// valued unless `t ≡ 0 (mod π)`.
fn check_periods(spec: &SurfaceSpec, t: f64, tol: f64) -> Result<(), WeierstrassError> {
    if real_multiple_of_pi(t) {
        return Ok(());
    }
    for (k, cycle) in spec.domain.homology_basis()?.iter().enumerate() {
        let p = period(&spec.data, cycle, tol)?;
        let magnitude = p.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if magnitude > PERIOD_FACTOR * tol {
            return Err(WeierstrassError::ComplexPeriod { cycle: k, magnitude });
        }
    }
    Ok(())
}

/// Associated member at phase `t`. The offset becomes `cos t·c`, so the
/// result equals `Re(e^{it} Z)` for the null curve with `Z(z0) = c`.
pub fn associate_spec(spec: &SurfaceSpec, t: f64, tol: f64) -> Result<SurfaceSpec, WeierstrassError> {
    check_periods(spec, t, tol)?;
    SurfaceSpec::new(
        format!("{}@t={}", spec.name, t),
        associate(&spec.data, t),
        spec.domain.clone(),
        spec.basepoint,
        spec.offset.iter().map(|c| c * t.cos()).collect(),
    )
}

/// Conjugate surface `Im Z` (offset zero, since `Z(z0) = c` is real).
pub fn conjugate_spec(spec: &SurfaceSpec, tol: f64) -> Result<SurfaceSpec, WeierstrassError> {
    check_periods(spec, std::f64::consts::FRAC_PI_2, tol)?;
    SurfaceSpec::new(
        format!("{}-conjugate", spec.name),
        conjugate(&spec.data),
        spec.domain.clone(),
        spec.basepoint,
        vec![0.0; spec.dimension()],
    )
}

/// `cos t·(cos x cosh y, sin x cosh y, y) + sin t·(sin x sinh y, −cos x sinh y, x)`.
pub fn helicatenoid_closed_form(t: f64, z: Complex64) -> [f64; 3] {
    let (x, y) = (z.re, z.im);
    let (ct, st) = (t.cos(), t.sin());
    [
        ct * x.cos() * y.cosh() + st * x.sin() * y.sinh(),
        ct * x.sin() * y.cosh() - st * x.cos() * y.sinh(),
        ct * y + st * x,
    ]
}
