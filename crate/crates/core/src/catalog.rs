//! Built-in surfaces, each a [`SpecFile`] with its domain attached.

use crate::specfile::{DomainSource, PoleName, SpecError, SpecFile, WeierstrassSource};
use crate::weierstrass::{Provenance, SurfaceSpec};

pub const NAMES: [&str; 6] = ["catenoid", "catenoid-ew", "helicoid", "helicatenoid", "plane", "enneper"];

fn gdh(g: &str, dh: &str) -> WeierstrassSource {
    WeierstrassSource::Gdh { g: g.into(), dh: dh.into(), pole: PoleName::North }
}

fn full(f: &[&str]) -> WeierstrassSource {
    WeierstrassSource::Full { f: f.iter().map(|s| s.to_string()).collect() }
}

fn annulus(inner_radius: f64, outer_radius: f64, margin: f64) -> DomainSource {
    DomainSource::Annulus { center: [0.0, 0.0], inner_radius, outer_radius, margin }
}

fn disc(radius: f64) -> DomainSource {
    DomainSource::Disc { center: [0.0, 0.0], radius, holes: vec![], punctures: vec![], margin: 0.0 }
}

fn entry(name: &str, weierstrass: WeierstrassSource, domain: DomainSource, basepoint: [f64; 2], offset: [f64; 3]) -> SpecFile {
    SpecFile {
        name: name.into(),
        dimension: 3,
        weierstrass,
        domain,
        basepoint,
        offset: offset.to_vec(),
        tolerances: None,
    }
}

/// The spec file of a built-in surface.
///
/// * `catenoid`: `(cos u cosh v, sin u cosh v, v)` in the coordinate
///   `z = e^{−v+iu}`, i.e. `g = z`, `dh = −dz/z`.
/// * `catenoid-ew`: `g = z`, `dh = −2 dz/z`, twice the size of `catenoid`.
/// * `helicoid`: `g = e^{iz}`, `dh = dz`.
/// * `helicatenoid`: `f = (−sin z, cos z, −i)`, the catenoid `(cos x cosh y, sin x cosh y, y)`.
/// * `plane`: `f = (1, i, 0)`.
/// * `enneper`: `g = z`, `dh = z dz`.
pub fn spec_file(name: &str) -> Option<SpecFile> {
    let file = match name {
        "catenoid" => entry(name, gdh("z", "-1/z"), annulus(0.1, 10.0, 1e-3), [1.0, 0.0], [1.0, 0.0, 0.0]),
        "catenoid-ew" => entry(name, gdh("z", "-2/z"), annulus(0.01, 100.0, 1e-4), [1.0, 0.0], [1.0, 0.0, 0.0]),
        "helicoid" => entry(name, gdh("exp(i*z)", "1"), disc(2.0), [0.0, 0.0], [0.0; 3]),
        "helicatenoid" => entry(name, full(&["-sin(z)", "cos(z)", "-i"]), disc(2.0), [0.0, 0.0], [1.0, 0.0, 0.0]),
        "plane" => entry(name, full(&["1", "i", "0"]), disc(1.0), [0.0, 0.0], [0.0; 3]),
        "enneper" => entry(name, gdh("z", "z"), disc(1.0), [0.0, 0.0], [0.0; 3]),
        _ => return None,
    };
    Some(file)
}

pub fn spec_files() -> Vec<SpecFile> {
    NAMES.iter().filter_map(|n| spec_file(n)).collect()
}

/// A built-in surface, built with catalog provenance.
pub fn surface_spec(name: &str) -> Option<Result<SurfaceSpec, SpecError>> {
    spec_file(name).map(|f| f.build(Provenance::Catalog))
}

/// Every built-in surface.
pub fn all() -> Vec<SurfaceSpec> {
    spec_files()
        .iter()
        .map(|f| f.build(Provenance::Catalog).expect("catalog entries are valid"))
        .collect()
}
