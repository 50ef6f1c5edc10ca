//! JSON surface specifications.
//!
//! ```json
//! {
//!   "name": "catenoid-ew",
//!   "dimension": 3,
//!   "weierstrass": { "type": "gdh", "g": "z", "dh": "-2/z" },
//!   "domain": { "type": "annulus", "center": [0, 0], "inner_radius": 0.01,
//!               "outer_radius": 100, "margin": 1e-4 },
//!   "basepoint": [1, 0],
//!   "offset": [1, 0, 0]
//! }
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{CircledDomain, DomainError, Hole, Outer};
use crate::export::float17;
use crate::expr::{Expression, ParseError};
use crate::weierstrass::{NullData, Pole, Provenance, SurfaceSpec, WeierstrassError, DEFAULT_SAMPLES, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("invalid spec JSON: {0}")]
    Json(String),
    #[error("dimension {dimension} does not match {what} ({found})")]
    Dimension {
        dimension: usize,
        what: &'static str,
        found: usize,
    },
    #[error("field `{0}` must be finite")]
    NonFinite(&'static str),
    #[error("expression {index}: {error}")]
    Expression { index: usize, error: ParseError },
    #[error("invalid domain: {0}")]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Surface(#[from] WeierstrassError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PoleName {
    #[default]
    North,
    South,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum WeierstrassSource {
    Full {
        f: Vec<String>,
    },
    Gdh {
        g: String,
        dh: String,
        #[serde(default, skip_serializing_if = "is_north")]
        pole: PoleName,
    },
}

fn is_north(p: &PoleName) -> bool {
    *p == PoleName::North
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoleSource {
    #[serde(with = "float17::pair")]
    pub center: [f64; 2],
    #[serde(with = "float17::scalar")]
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum OuterSource {
    Disc {
        #[serde(with = "float17::pair")]
        center: [f64; 2],
        #[serde(with = "float17::scalar")]
        radius: f64,
    },
    Rectangle {
        #[serde(with = "float17::pair")]
        min: [f64; 2],
        #[serde(with = "float17::pair")]
        max: [f64; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum DomainSource {
    Disc {
        #[serde(with = "float17::pair")]
        center: [f64; 2],
        #[serde(with = "float17::scalar")]
        radius: f64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        holes: Vec<HoleSource>,
        #[serde(default, skip_serializing_if = "Vec::is_empty", with = "float17::pairs")]
        punctures: Vec<[f64; 2]>,
        #[serde(default, with = "float17::scalar")]
        margin: f64,
    },
    Rectangle {
        #[serde(with = "float17::pair")]
        min: [f64; 2],
        #[serde(with = "float17::pair")]
        max: [f64; 2],
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        holes: Vec<HoleSource>,
        #[serde(default, skip_serializing_if = "Vec::is_empty", with = "float17::pairs")]
        punctures: Vec<[f64; 2]>,
        #[serde(default, with = "float17::scalar")]
        margin: f64,
    },
    Annulus {
        #[serde(with = "float17::pair")]
        center: [f64; 2],
        #[serde(with = "float17::scalar")]
        inner_radius: f64,
        #[serde(with = "float17::scalar")]
        outer_radius: f64,
        #[serde(default, with = "float17::scalar")]
        margin: f64,
    },
    Circled {
        outer: OuterSource,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        holes: Vec<HoleSource>,
        #[serde(default, skip_serializing_if = "Vec::is_empty", with = "float17::pairs")]
        punctures: Vec<[f64; 2]>,
        #[serde(default, with = "float17::scalar")]
        margin: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none", with = "float17::optional")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub name: String,
    pub dimension: usize,
    pub weierstrass: WeierstrassSource,
    pub domain: DomainSource,
    #[serde(with = "float17::pair")]
    pub basepoint: [f64; 2],
    #[serde(with = "float17::list")]
    pub offset: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

fn point(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn finite(field: &'static str, values: &[f64]) -> Result<(), SpecError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(SpecError::NonFinite(field))
    }
}

fn holes_of(holes: &[HoleSource], punctures: &[[f64; 2]]) -> Result<Vec<Hole>, SpecError> {
    let mut out = Vec::with_capacity(holes.len() + punctures.len());
    for h in holes {
        finite("holes", &[h.center[0], h.center[1], h.radius])?;
        out.push(Hole {
            center: point(h.center),
            radius: h.radius,
        });
    }
    for p in punctures {
        finite("punctures", p)?;
        out.push(Hole::puncture(point(*p)));
    }
    Ok(out)
}

fn outer_of(o: &OuterSource) -> Result<Outer, SpecError> {
    Ok(match *o {
        OuterSource::Disc { center, radius } => {
            finite("domain", &[center[0], center[1], radius])?;
            Outer::Disc {
                center: point(center),
                radius,
            }
        }
        OuterSource::Rectangle { min, max } => {
            finite("domain", &[min[0], min[1], max[0], max[1]])?;
            Outer::Rectangle {
                min: point(min),
                max: point(max),
            }
        }
    })
}

impl DomainSource {
    pub fn build(&self) -> Result<CircledDomain, SpecError> {
        let (outer, holes, margin) = match self {
            DomainSource::Disc {
                center,
                radius,
                holes,
                punctures,
                margin,
            } => (outer_of(&OuterSource::Disc { center: *center, radius: *radius })?, holes_of(holes, punctures)?, *margin),
            DomainSource::Rectangle {
                min,
                max,
                holes,
                punctures,
                margin,
            } => (outer_of(&OuterSource::Rectangle { min: *min, max: *max })?, holes_of(holes, punctures)?, *margin),
            DomainSource::Annulus {
                center,
                inner_radius,
                outer_radius,
                margin,
            } => {
                finite("domain", &[*inner_radius])?;
                let hole = HoleSource {
                    center: *center,
                    radius: *inner_radius,
                };
                (outer_of(&OuterSource::Disc { center: *center, radius: *outer_radius })?, holes_of(&[hole], &[])?, *margin)
            }
            DomainSource::Circled {
                outer,
                holes,
                punctures,
                margin,
            } => (outer_of(outer)?, holes_of(holes, punctures)?, *margin),
        };
        finite("margin", &[margin])?;
        Ok(CircledDomain::new(outer, holes, margin)?)
    }
}

impl WeierstrassSource {
    pub fn build(&self, provenance: Provenance) -> Result<NullData, SpecError> {
        let parse = |index: usize, s: &str| Expression::parse(s).map_err(|error| SpecError::Expression { index, error });
        match self {
            WeierstrassSource::Full { f } => {
                let comps = f.iter().enumerate().map(|(k, s)| parse(k, s)).collect::<Result<Vec<_>, _>>()?;
                Ok(NullData::new(comps, provenance)?)
            }
            WeierstrassSource::Gdh { g, dh, pole } => {
                let pole = match pole {
                    PoleName::North => Pole::North,
                    PoleName::South => Pole::South,
                };
                let data = NullData::from_gdh(&parse(0, g)?, &parse(1, dh)?, pole);
                Ok(data.with_provenance(provenance))
            }
        }
    }

    fn components(&self) -> usize {
        match self {
            WeierstrassSource::Full { f } => f.len(),
            WeierstrassSource::Gdh { .. } => 3,
        }
    }
}

impl SpecFile {
    pub fn from_json(text: &str) -> Result<SpecFile, SpecError> {
        let spec: SpecFile = serde_json::from_str(text).map_err(|e| SpecError::Json(e.to_string()))?;
        spec.check()?;
        Ok(spec)
    }

    /// Pretty JSON with 17 significant digits per float.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    fn check(&self) -> Result<(), SpecError> {
        let found = self.weierstrass.components();
        if found != self.dimension {
            return Err(SpecError::Dimension {
                dimension: self.dimension,
                what: "the number of Weierstrass components",
                found,
            });
        }
        if self.offset.len() != self.dimension {
            return Err(SpecError::Dimension {
                dimension: self.dimension,
                what: "the offset length",
                found: self.offset.len(),
            });
        }
        finite("basepoint", &self.basepoint)?;
        finite("offset", &self.offset)?;
        if let Some(t) = self.tolerances.as_ref().and_then(|t| t.tol) {
            if !(t.is_finite() && t > 0.0) {
                return Err(SpecError::NonFinite("tolerances.tol"));
            }
        }
        Ok(())
    }

    pub fn tol(&self) -> f64 {
        self.tolerances.as_ref().and_then(|t| t.tol).unwrap_or(DEFAULT_TOL)
    }

    pub fn samples(&self) -> usize {
        self.tolerances.as_ref().and_then(|t| t.samples).unwrap_or(DEFAULT_SAMPLES)
    }

    pub fn build(&self, provenance: Provenance) -> Result<SurfaceSpec, SpecError> {
        self.check()?;
        let data = self.weierstrass.build(provenance)?;
        let domain = self.domain.build()?;
        Ok(SurfaceSpec::new(self.name.clone(), data, domain, point(self.basepoint), self.offset.clone())?)
    }

    /// This file with its data, name and offset replaced by those of
    /// `spec` (domain and basepoint are kept). Components are written in
    /// full, fully parenthesized form.
    pub fn with_surface(&self, spec: &SurfaceSpec) -> SpecFile {
        SpecFile {
            name: spec.name.clone(),
            dimension: spec.dimension(),
            weierstrass: WeierstrassSource::Full {
                f: spec.data.components().iter().map(|e| e.to_string()).collect(),
            },
            domain: self.domain.clone(),
            basepoint: self.basepoint,
            offset: spec.offset.clone(),
            tolerances: self.tolerances.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CATENOID_EW: &str = r#"{
        "name": "catenoid-ew",
        "dimension": 3,
        "weierstrass": {"type": "gdh", "g": "z", "dh": "-2/z"},
        "domain": {"type": "annulus", "center": [0, 0], "inner_radius": 0.01, "outer_radius": 100, "margin": 1e-4},
        "basepoint": [1, 0],
        "offset": [1, 0, 0]
    }"#;

    #[test]
    fn parses_and_builds() {
        let f = SpecFile::from_json(CATENOID_EW).unwrap();
        assert_eq!(f.tol(), DEFAULT_TOL);
        let s = f.build(Provenance::User).unwrap();
        assert_eq!(s.domain.holes().len(), 1);
        assert_eq!(s.basepoint, Complex64::new(1.0, 0.0));
        assert_eq!(s.data.provenance(), Provenance::User);
    }

    #[test]
    fn round_trips_through_json() {
        let f = SpecFile::from_json(CATENOID_EW).unwrap();
        let text = f.to_json();
        assert!(text.contains("1.0000000000000000e-4"), "{text}");
        assert_eq!(SpecFile::from_json(&text).unwrap(), f);
        assert_eq!(SpecFile::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn every_domain_shape() {
        let shapes = [
            r#"{"type": "disc", "center": [0, 0], "radius": 2}"#,
            r#"{"type": "rectangle", "min": [-1, -1], "max": [1, 1], "punctures": [[0.5, 0.5]], "margin": 0.01}"#,
            r#"{"type": "circled", "outer": {"type": "disc", "center": [0, 0], "radius": 3},
                "holes": [{"center": [1, 0], "radius": 0.2}, {"center": [-1, 0], "radius": 0.2}], "margin": 0.01}"#,
        ];
        for d in shapes {
            let text = CATENOID_EW.replace(
                r#"{"type": "annulus", "center": [0, 0], "inner_radius": 0.01, "outer_radius": 100, "margin": 1e-4}"#,
                d,
            );
            let text = text.replace(r#""basepoint": [1, 0]"#, r#""basepoint": [0, 0.5]"#);
            let f = SpecFile::from_json(&text).unwrap();
            f.build(Provenance::User).unwrap();
        }
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(SpecFile::from_json("{"), Err(SpecError::Json(_))));
        let extra = CATENOID_EW.replace(r#""dimension": 3,"#, r#""dimension": 3, "colour": "red","#);
        assert!(matches!(SpecFile::from_json(&extra), Err(SpecError::Json(_))));
        let dim = CATENOID_EW.replace(r#""dimension": 3"#, r#""dimension": 4"#);
        assert!(matches!(SpecFile::from_json(&dim), Err(SpecError::Dimension { .. })));
        let kind = CATENOID_EW.replace(r#""type": "gdh""#, r#""type": "spinor""#);
        assert!(matches!(SpecFile::from_json(&kind), Err(SpecError::Json(_))));
    }

    #[test]
    fn build_errors() {
        let bad = CATENOID_EW.replace(r#""dh": "-2/z""#, r#""dh": "-2/""#);
        let f = SpecFile::from_json(&bad).unwrap();
        assert!(matches!(f.build(Provenance::User), Err(SpecError::Expression { index: 1, .. })));
        let outside = CATENOID_EW.replace(r#""basepoint": [1, 0]"#, r#""basepoint": [0, 0]"#);
        let f = SpecFile::from_json(&outside).unwrap();
        assert!(matches!(f.build(Provenance::User), Err(SpecError::Surface(WeierstrassError::Basepoint(_)))));
        let inverted = CATENOID_EW.replace(r#""inner_radius": 0.01"#, r#""inner_radius": 200"#);
        let f = SpecFile::from_json(&inverted).unwrap();
        assert!(matches!(f.build(Provenance::User), Err(SpecError::Domain(_))));
    }

    #[test]
    fn rewritten_components_evaluate_identically() {
        let f = SpecFile::from_json(CATENOID_EW).unwrap();
        let s = f.build(Provenance::User).unwrap();
        let g = f.with_surface(&s);
        let t = g.build(Provenance::User).unwrap();
        for z in [Complex64::new(0.3, 0.7), Complex64::new(-5.0, 2.0)] {
            assert_eq!(s.data.evaluate(z).unwrap(), t.data.evaluate(z).unwrap());
        }
    }
}
