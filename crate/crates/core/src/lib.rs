//! Enneper–Weierstrass data, periods, curvature diagnostics, associated
//! families and discrete Dirichlet minimization for minimal surfaces.

pub mod catalog;
pub mod domain;
pub mod export;
pub mod expr;
pub mod family;
pub mod geometry;
pub mod quadrature;
pub mod sampling;
pub mod specfile;
pub mod variational;
pub mod weierstrass;

pub use num_complex::Complex64;

pub use domain::{CircledDomain, Cycle, DomainError, Hole, Outer, PathPolyline};
pub use expr::{EvalError, Expression, ParseError};
pub use family::{associate, associate_spec, conjugate, conjugate_spec};
pub use geometry::{CurvatureSample, ExtendedComplex, GeometryError, Scheme, TotalCurvature};
pub use specfile::{SpecError, SpecFile};
pub use variational::{GridImmersion, Solver, VariationField, VariationalError};
pub use weierstrass::{NullData, Pole, Provenance, Surface, SurfaceReport, SurfaceSpec, WeierstrassError};
