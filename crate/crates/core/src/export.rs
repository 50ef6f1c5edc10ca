//! Deterministic text output: 17-significant-digit floats, JSON reports,
//! OBJ meshes and CSV tables.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Map, Number, Value};

use crate::geometry::{self, CurvatureSample, ExtendedComplex, GeometryError};
use crate::weierstrass::{Surface, SurfaceReport};

/// `x` in scientific notation with 17 significant digits; `NaN`, `inf` and
/// `-inf` for non-finite values.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

/// JSON number with 17 significant digits, `null` when not finite.
pub fn number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&format_float(x)).expect("valid JSON number"))
}

/// `[re, im]`.
pub fn complex(c: Complex64) -> Value {
    json!([number(c.re), number(c.im)])
}

pub fn numbers(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|x| number(*x)).collect())
}

pub fn complexes(cs: &[Complex64]) -> Value {
    Value::Array(cs.iter().map(|c| complex(*c)).collect())
}

pub fn extended(g: ExtendedComplex) -> Value {
    match g {
        ExtendedComplex::Finite(c) => complex(c),
        ExtendedComplex::Infinity => Value::String("infinity".into()),
    }
}

/// Serde adapters writing floats with [`number`]. Reading accepts plain
/// numbers and the map form arbitrary-precision numbers take inside
/// buffered (internally tagged) content; non-finite values are rejected.
pub mod float17 {
    use std::fmt;

    use serde::de::{self, MapAccess, Visitor};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    struct Flex(f64);

    impl<'de> Deserialize<'de> for Flex {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Flex, D::Error> {
            d.deserialize_any(FlexVisitor)
        }
    }

    struct FlexVisitor;

    impl<'de> Visitor<'de> for FlexVisitor {
        type Value = Flex;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a finite number")
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> Result<Flex, E> {
            if v.is_finite() {
                Ok(Flex(v))
            } else {
                Err(E::custom("number out of range"))
            }
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Flex, E> {
            Ok(Flex(v as f64))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Flex, E> {
            Ok(Flex(v as f64))
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Flex, E> {
            let x: f64 = v.parse().map_err(|_| E::custom("invalid number"))?;
            self.visit_f64(x)
        }

        fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Flex, A::Error> {
            let Some((_, text)) = map.next_entry::<String, String>()? else {
                return Err(de::Error::custom("expected a number"));
            };
            if map.next_key::<String>()?.is_some() {
                return Err(de::Error::custom("expected a number"));
            }
            self.visit_str(&text)
        }
    }

    pub mod scalar {
        use super::*;
        pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
            crate::export::number(*x).serialize(s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
            Ok(Flex::deserialize(d)?.0)
        }
    }

    pub mod pair {
        use super::*;
        pub fn serialize<S: Serializer>(x: &[f64; 2], s: S) -> Result<S::Ok, S::Error> {
            crate::export::numbers(x).serialize(s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[f64; 2], D::Error> {
            let [a, b] = <[Flex; 2]>::deserialize(d)?;
            Ok([a.0, b.0])
        }
    }

    pub mod pairs {
        use super::*;
        pub fn serialize<S: Serializer>(x: &[[f64; 2]], s: S) -> Result<S::Ok, S::Error> {
            serde_json::Value::Array(x.iter().map(|p| crate::export::numbers(p)).collect()).serialize(s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<[f64; 2]>, D::Error> {
            Ok(Vec::<[Flex; 2]>::deserialize(d)?.into_iter().map(|[a, b]| [a.0, b.0]).collect())
        }
    }

    pub mod list {
        use super::*;
        pub fn serialize<S: Serializer>(x: &[f64], s: S) -> Result<S::Ok, S::Error> {
            crate::export::numbers(x).serialize(s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
            Ok(Vec::<Flex>::deserialize(d)?.into_iter().map(|x| x.0).collect())
        }
    }

    pub mod optional {
        use super::*;
        pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(v) => crate::export::number(*v).serialize(s),
                None => s.serialize_none(),
            }
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
            Ok(Option::<Flex>::deserialize(d)?.map(|x| x.0))
        }
    }
}

/// JSON form of a validation report. Periods are lists of `[re, im]`.
pub fn report_json(name: &str, report: &SurfaceReport) -> Value {
    let periods: Vec<Value> = report
        .periods
        .iter()
        .map(|p| {
            let mut m = Map::new();
            m.insert("cycle".into(), json!(p.cycle));
            m.insert("hole".into(), json!(p.hole));
            m.insert("period".into(), complexes(&p.period));
            m.insert("real_period".into(), numbers(&p.real()));
            m.insert("flux".into(), numbers(&p.flux()));
            Value::Object(m)
        })
        .collect();
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|(z, msg)| json!({ "z": complex(*z), "error": msg }))
        .collect();
    let mut m = Map::new();
    m.insert("name".into(), json!(name));
    m.insert("valid".into(), json!(report.is_valid()));
    m.insert("samples".into(), json!(report.samples));
    m.insert("tol".into(), number(report.tol));
    m.insert("nullity_residual".into(), number(report.nullity_residual));
    m.insert("holomorphy_residual".into(), number(report.holomorphy_residual));
    m.insert("min_norm".into(), number(report.min_norm));
    m.insert("nullity_ok".into(), json!(report.nullity_ok));
    m.insert("nonvanishing".into(), json!(report.nonvanishing));
    m.insert("real_periods_vanish".into(), json!(report.real_periods_vanish));
    m.insert("all_periods_vanish".into(), json!(report.all_periods_vanish));
    m.insert("periods".into(), Value::Array(periods));
    m.insert("failures".into(), Value::Array(failures));
    Value::Object(m)
}

pub fn curvature_json(s: &CurvatureSample) -> Value {
    let mut m = Map::new();
    m.insert("z".into(), complex(s.z));
    m.insert("lambda".into(), number(s.lambda));
    m.insert("K".into(), number(s.k));
    m.insert(
        "principal_curvatures".into(),
        s.kappa.map(|(a, b)| numbers(&[a, b])).unwrap_or(Value::Null),
    );
    m.insert("mean_curvature".into(), numbers(&s.mean_curvature));
    m.insert("gauss_map".into(), s.gauss.map(extended).unwrap_or(Value::Null));
    m.insert("generalized_gauss_map".into(), complexes(&s.generalized));
    Value::Object(m)
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value serializes");
    s.push('\n');
    s
}

/// Triangle mesh over the domain's parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// Zero-based vertex indices.
    pub faces: Vec<[usize; 3]>,
    /// Parameter point of each vertex.
    pub params: Vec<Complex64>,
}

/// Samples the surface on an `nu × nv` grid and splits every complete grid
/// cell into two triangles. Grid points outside the domain, or where the
/// surface cannot be evaluated, are dropped along with their faces.
/// `axes` selects the coordinates written as x, y, z.
pub fn mesh(surface: &Surface, nu: usize, nv: usize, axes: [usize; 3]) -> Mesh {
    let grid = surface.domain().parameter_grid(nu, nv);
    let values: Vec<Option<Vec<f64>>> = grid
        .par_iter()
        .map(|p| p.and_then(|z| surface.evaluate(z).ok()))
        .collect();
    let mut index = vec![usize::MAX; grid.len()];
    let mut vertices = Vec::new();
    let mut params = Vec::new();
    for (k, v) in values.iter().enumerate() {
        if let (Some(x), Some(z)) = (v, grid[k]) {
            index[k] = vertices.len();
            vertices.push([x[axes[0]], x[axes[1]], x[axes[2]]]);
            params.push(z);
        }
    }
    let mut faces = Vec::new();
    for j in 0..nv.saturating_sub(1) {
        for i in 0..nu.saturating_sub(1) {
            let a = index[j * nu + i];
            let b = index[j * nu + i + 1];
            let c = index[(j + 1) * nu + i + 1];
            let d = index[(j + 1) * nu + i];
            if [a, b, c, d].contains(&usize::MAX) {
                continue;
            }
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    Mesh {
        vertices,
        faces,
        params,
    }
}

/// OBJ text: a `# minsurf <version>` header, `v` lines, then 1-based `f`
/// lines.
pub fn write_obj(mesh: &Mesh, version: &str) -> String {
    let mut out = format!("# minsurf {version}\n");
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", format_float(v[0]), format_float(v[1]), format_float(v[2]));
    }
    for f in &mesh.faces {
        let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    out
}

/// Per-vertex `K` and `λ` for a mesh, one row per vertex.
pub fn write_vertex_scalars(surface: &Surface, mesh: &Mesh) -> String {
    let rows: Vec<String> = mesh
        .params
        .par_iter()
        .enumerate()
        .map(|(k, z)| {
            let kk = geometry::gauss_curvature(surface.data(), *z).unwrap_or(f64::NAN);
            let l = geometry::metric_coefficient(surface.data(), *z).unwrap_or(f64::NAN);
            format!("{},{},{}\n", k + 1, format_float(kk), format_float(l))
        })
        .collect();
    let mut out = String::from("vertex,K,lambda\n");
    out.extend(rows);
    out
}

pub const SWEEP_HEADER: &str = "re_z,im_z,lambda,K,kappa1,kappa2,H_norm,re_g,im_g";

/// One curvature sample per parameter grid point, in grid order.
pub fn sweep(surface: &Surface, nu: usize, nv: usize) -> Vec<Result<CurvatureSample, GeometryError>> {
    let grid: Vec<Complex64> = surface.domain().parameter_grid(nu, nv).into_iter().flatten().collect();
    grid.par_iter().map(|z| geometry::curvature_sample(surface, *z)).collect()
}

pub fn write_sweep(samples: &[Result<CurvatureSample, GeometryError>]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for s in samples.iter().flatten() {
        let (k1, k2) = s.kappa.unwrap_or((f64::NAN, f64::NAN));
        let h = s.mean_curvature.iter().map(|x| x * x).sum::<f64>().sqrt();
        let g = match s.gauss {
            Some(ExtendedComplex::Finite(c)) => c,
            Some(ExtendedComplex::Infinity) => Complex64::new(f64::INFINITY, f64::INFINITY),
            None => Complex64::new(f64::NAN, f64::NAN),
        };
        let fields = [s.z.re, s.z.im, s.lambda, s.k, k1, k2, h, g.re, g.im];
        let row: Vec<String> = fields.iter().map(|x| format_float(*x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
