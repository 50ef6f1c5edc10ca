//! Finite-difference shape operator of closed-form surfaces.

#![allow(dead_code)]

use minsurf_core::Complex64;

pub type Map = fn(f64, f64) -> [f64; 3];

/// `(cos u cosh v, sin u cosh v, v)` with `z = e^{−v+iu}`, written in `x + iy = z`.
pub fn catenoid(x: f64, y: f64) -> [f64; 3] {
    let z = Complex64::new(x, y);
    let (u, v) = (z.arg(), -z.norm().ln());
    [u.cos() * v.cosh(), u.sin() * v.cosh(), v]
}

/// Helicoid of `g = e^{iz}`, `dh = dz`, based at the origin.
pub fn helicoid(x: f64, y: f64) -> [f64; 3] {
    [x.sin() * y.sinh(), -x.cos() * y.sinh(), x]
}

/// Enneper's surface of `g = z`, `dh = z dz`, based at the origin.
pub fn enneper(x: f64, y: f64) -> [f64; 3] {
    [
        0.5 * (x - x.powi(3) / 3.0 + x * y * y),
        -0.5 * (y - y.powi(3) / 3.0 + x * x * y),
        0.5 * (x * x - y * y),
    ]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub normal: [f64; 3],
    /// Conformal factor `E = G` when the parameterization is conformal.
    pub first: [f64; 3],
    pub second: [f64; 3],
    pub k: f64,
    pub h: f64,
    /// Principal curvatures, larger first.
    pub kappa: (f64, f64),
}

/// First and second fundamental forms by central differences of step `h`.
pub fn shape(map: Map, x: f64, y: f64, h: f64) -> Shape {
    let p = map(x, y);
    let xp = map(x + h, y);
    let xm = map(x - h, y);
    let yp = map(x, y + h);
    let ym = map(x, y - h);
    let xu = scale(sub(xp, xm), 0.5 / h);
    let xv = scale(sub(yp, ym), 0.5 / h);
    let xuu = scale(sub(add(xp, xm), scale(p, 2.0)), 1.0 / (h * h));
    let xvv = scale(sub(add(yp, ym), scale(p, 2.0)), 1.0 / (h * h));
    let xuv = scale(
        sub(sub(map(x + h, y + h), map(x + h, y - h)), sub(map(x - h, y + h), map(x - h, y - h))),
        0.25 / (h * h),
    );
    let n = cross(xu, xv);
    let len = dot(n, n).sqrt();
    let normal = scale(n, 1.0 / len);
    let (e, f, g) = (dot(xu, xu), dot(xu, xv), dot(xv, xv));
    let (l, m, nn) = (dot(xuu, normal), dot(xuv, normal), dot(xvv, normal));
    let det = e * g - f * f;
    let k = (l * nn - m * m) / det;
    let hm = (e * nn - 2.0 * f * m + g * l) / (2.0 * det);
    let disc = (hm * hm - k).max(0.0).sqrt();
    Shape { normal, first: [e, f, g], second: [l, m, nn], k, h: hm, kappa: (hm + disc, hm - disc) }
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}
