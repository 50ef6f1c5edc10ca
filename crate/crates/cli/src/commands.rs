use std::fmt::Write as _;
use std::path::Path;

use minsurf_core::catalog;
use minsurf_core::domain::PathPolyline;
use minsurf_core::export::{self, complex, complexes, extended, format_float, number, numbers, to_pretty};
use minsurf_core::family::{associate_spec, conjugate_spec};
use minsurf_core::geometry::{self, DEFAULT_RESOLUTION};
use minsurf_core::quadrature::QuadratureError;
use minsurf_core::specfile::{DomainSource, OuterSource, WeierstrassSource};
use minsurf_core::variational::{self, DEFAULT_SOLVER_TOL};
use minsurf_core::weierstrass::{period, validate};
use minsurf_core::{
    Complex64, DomainError, GeometryError, GridImmersion, Provenance, Solver, SpecError, SpecFile, Surface,
    SurfaceSpec, VariationalError, WeierstrassError,
};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::{Cli, Command, Global, SolverArg};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 3,
            CliError::Numeric(_) => 2,
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<WeierstrassError> for CliError {
    fn from(e: WeierstrassError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<QuadratureError> for CliError {
    fn from(e: QuadratureError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<VariationalError> for CliError {
    fn from(e: VariationalError) -> Self {
        match e {
            VariationalError::NonConvergence { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub struct Output {
    pub stdout: String,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Output {
        Output { stdout, code: 0 }
    }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    if let Some(t) = g.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Input(format!("--tol must be positive, got {t}")));
        }
    }
    match &cli.command {
        Command::Catalog { emit_spec } => cmd_catalog(g, emit_spec.as_deref()),
        Command::Validate { spec, samples } => cmd_validate(g, &spec.spec, *samples),
        Command::Periods { spec } => cmd_periods(g, &spec.spec, false),
        Command::Flux { spec } => cmd_periods(g, &spec.spec, true),
        Command::Eval { spec, z } => cmd_eval(g, &spec.spec, z),
        Command::Mesh { spec, nu, nv, output, axes, scalars, t } => {
            cmd_mesh(g, &spec.spec, (*nu, *nv), output.as_deref(), axes, scalars.as_deref(), *t)
        }
        Command::Sweep { spec, grid, output } => cmd_sweep(g, &spec.spec, grid, output.as_deref()),
        Command::Gauss { spec, z } => cmd_gauss(g, &spec.spec, z),
        Command::Curvature { spec, z } => cmd_curvature(g, &spec.spec, z),
        Command::Totalcurvature { spec, resolution } => cmd_total_curvature(g, &spec.spec, *resolution),
        Command::Length { spec, ray, angle, path } => cmd_length(g, &spec.spec, ray.as_deref(), *angle, path.as_deref()),
        Command::Associate { spec, t, output } => cmd_family(g, &spec.spec, Some(*t), output.as_deref()),
        Command::Conjugate { spec, output } => cmd_family(g, &spec.spec, None, output.as_deref()),
        Command::Minimize { boundary, grid, solver, max_iter, hu, hv, output } => {
            cmd_minimize(g, boundary, grid, *solver, *max_iter, (*hu, *hv), output.as_deref())
        }
    }
}

struct Loaded {
    file: SpecFile,
    spec: SurfaceSpec,
    tol: f64,
}

/// A spec file path, or a catalog name when no such file exists.
fn load(g: &Global, arg: &str) -> Result<Loaded> {
    let path = Path::new(arg);
    let (file, provenance) = if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
        (SpecFile::from_json(&text)?, Provenance::User)
    } else if let Some(file) = catalog::spec_file(arg) {
        (file, Provenance::Catalog)
    } else {
        return Err(CliError::Input(format!(
            "`{arg}` is neither a spec file nor a catalog entry ({})",
            catalog::NAMES.join(", ")
        )));
    };
    let spec = file.build(provenance)?;
    let tol = g.tol.unwrap_or_else(|| file.tol());
    Ok(Loaded { file, spec, tol })
}

fn surface(l: &Loaded) -> Result<Surface> {
    Ok(Surface::new(l.spec.clone(), l.tol)?)
}

/// Refuses specs that fail validation unless `--force` is given.
fn require_valid(g: &Global, l: &Loaded) -> Result<()> {
    if g.force {
        return Ok(());
    }
    let report = validate(&l.spec, l.file.samples(), g.seed, l.tol);
    if report.is_valid() {
        Ok(())
    } else {
        Err(CliError::Numeric(format!(
            "`{}` fails validation (run `validate` for details, or pass --force)",
            l.spec.name
        )))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<Option<String>> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            Ok(None)
        }
        None => Ok(Some(text.to_string())),
    }
}

fn parse_point(s: &str) -> Result<Complex64> {
    let bad = || CliError::Input(format!("expected a point `re,im`, got `{s}`"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

fn parse_points(zs: &[String]) -> Result<Vec<Complex64>> {
    zs.iter().map(|s| parse_point(s)).collect()
}

/// `AxB` with both factors at least `min`.
fn parse_shape(s: &str, min: usize) -> Result<(usize, usize)> {
    let bad = || CliError::Input(format!("expected a grid shape like `64x64` (each at least {min}), got `{s}`"));
    let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a < min || b < min {
        return Err(bad());
    }
    Ok((a, b))
}

fn fmt_vec(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format_float(*x)).collect();
    format!("({})", parts.join(", "))
}

fn fmt_complex(c: Complex64) -> String {
    format!("{} {} {}i", format_float(c.re), if c.im < 0.0 { '-' } else { '+' }, format_float(c.im.abs()))
}

fn fmt_complexes(cs: &[Complex64]) -> String {
    let parts: Vec<String> = cs.iter().map(|c| fmt_complex(*c)).collect();
    format!("({})", parts.join(", "))
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn describe_weierstrass(w: &WeierstrassSource) -> String {
    match w {
        WeierstrassSource::Full { f } => format!("f = ({})", f.join(", ")),
        WeierstrassSource::Gdh { g, dh, .. } => format!("g = {g}, dh = ({dh}) dz"),
    }
}

fn describe_domain(d: &DomainSource) -> String {
    let extras = |holes: usize, punctures: usize| {
        let mut s = String::new();
        if holes > 0 {
            let _ = write!(s, " minus {holes} hole(s)");
        }
        if punctures > 0 {
            let _ = write!(s, " minus {punctures} puncture(s)");
        }
        s
    };
    match d {
        DomainSource::Disc { center, radius, holes, punctures, .. } => {
            format!("disc |z - ({}, {})| < {radius}{}", center[0], center[1], extras(holes.len(), punctures.len()))
        }
        DomainSource::Rectangle { min, max, holes, punctures, .. } => format!(
            "rectangle [{}, {}] x [{}, {}]{}",
            min[0],
            max[0],
            min[1],
            max[1],
            extras(holes.len(), punctures.len())
        ),
        DomainSource::Annulus { center, inner_radius, outer_radius, margin } => format!(
            "annulus {inner_radius} < |z - ({}, {})| < {outer_radius}, margin {margin}",
            center[0], center[1]
        ),
        DomainSource::Circled { outer, holes, punctures, .. } => {
            let o = match outer {
                OuterSource::Disc { center, radius } => format!("disc |z - ({}, {})| < {radius}", center[0], center[1]),
                OuterSource::Rectangle { min, max } => {
                    format!("rectangle [{}, {}] x [{}, {}]", min[0], max[0], min[1], max[1])
                }
            };
            format!("{o}{}", extras(holes.len(), punctures.len()))
        }
    }
}

fn cmd_catalog(g: &Global, emit: Option<&str>) -> Result<Output> {
    if let Some(name) = emit {
        let file = catalog::spec_file(name).ok_or_else(|| {
            CliError::Input(format!("no catalog entry `{name}` ({})", catalog::NAMES.join(", ")))
        })?;
        return Ok(Output::ok(file.to_json() + "\n"));
    }
    let files = catalog::spec_files();
    if g.json {
        let list: Vec<Value> = files.iter().map(|f| serde_json::to_value(f).expect("spec serializes")).collect();
        return Ok(Output::ok(to_pretty(&Value::Array(list))));
    }
    let mut out = String::new();
    for f in &files {
        let _ = writeln!(out, "{:<14} n={}  {}", f.name, f.dimension, describe_weierstrass(&f.weierstrass));
        let _ = writeln!(out, "{:<14} domain: {}", "", describe_domain(&f.domain));
    }
    Ok(Output::ok(out))
}

fn cmd_validate(g: &Global, arg: &str, samples: Option<usize>) -> Result<Output> {
    let l = load(g, arg)?;
    let samples = samples.unwrap_or_else(|| l.file.samples());
    let report = validate(&l.spec, samples, g.seed, l.tol);
    let code = if report.is_valid() { 0 } else { 2 };
    if g.json {
        return Ok(Output { stdout: to_pretty(&export::report_json(&l.spec.name, &report)), code });
    }
    let mut out = String::new();
    let _ = writeln!(out, "surface            {}", l.spec.name);
    let _ = writeln!(out, "samples            {}  (tol {})", report.samples, format_float(report.tol));
    let _ = writeln!(out, "nullity residual   {}  {}", format_float(report.nullity_residual), pass(report.nullity_ok));
    let _ = writeln!(out, "holomorphy defect  {}", format_float(report.holomorphy_residual));
    let _ = writeln!(out, "min |f|^2          {}  {}", format_float(report.min_norm), pass(report.nonvanishing));
    if report.periods.is_empty() {
        let _ = writeln!(out, "periods            simply connected: no cycles");
    } else {
        let _ = writeln!(out, "real periods       {}", pass(report.real_periods_vanish));
        for p in &report.periods {
            let _ = writeln!(out, "  cycle {}  real period {}", p.cycle, fmt_vec(&p.real()));
            let _ = writeln!(out, "  cycle {}  flux        {}", p.cycle, fmt_vec(&p.flux()));
        }
    }
    for (z, msg) in &report.failures {
        let _ = writeln!(out, "evaluation failed at {}: {msg}", fmt_complex(*z));
    }
    let _ = writeln!(out, "result             {}", if report.is_valid() { "PASS" } else { "FAIL" });
    Ok(Output { stdout: out, code })
}

fn cmd_periods(g: &Global, arg: &str, flux_only: bool) -> Result<Output> {
    let l = load(g, arg)?;
    let basis = l.spec.domain.homology_basis()?;
    let holes = l.spec.domain.holes();
    let mut rows = Vec::new();
    for (k, cycle) in basis.iter().enumerate() {
        let p = period(&l.spec.data, cycle, l.tol)?;
        rows.push((k, holes[k].center, p));
    }
    if g.json {
        let cycles: Vec<Value> = rows
            .iter()
            .map(|(k, center, p)| {
                let mut m = Map::new();
                m.insert("cycle".into(), json!(k));
                m.insert("hole_center".into(), complex(*center));
                if flux_only {
                    m.insert("flux".into(), numbers(&p.iter().map(|c| c.im).collect::<Vec<_>>()));
                } else {
                    m.insert("period".into(), complexes(p));
                }
                Value::Object(m)
            })
            .collect();
        return Ok(Output::ok(to_pretty(&json!({ "name": l.spec.name, "cycles": cycles }))));
    }
    if rows.is_empty() {
        return Ok(Output::ok("simply connected: no cycles\n".into()));
    }
    let mut out = String::new();
    for (k, center, p) in &rows {
        let _ = write!(out, "cycle {k} around {}: ", fmt_complex(*center));
        if flux_only {
            let _ = writeln!(out, "{}", fmt_vec(&p.iter().map(|c| c.im).collect::<Vec<_>>()));
        } else {
            let _ = writeln!(out, "{}", fmt_complexes(p));
        }
    }
    Ok(Output::ok(out))
}

fn cmd_eval(g: &Global, arg: &str, zs: &[String]) -> Result<Output> {
    let points = parse_points(zs)?;
    let l = load(g, arg)?;
    let s = surface(&l)?;
    let mut out = String::new();
    let mut list = Vec::new();
    for z in points {
        let x = s.evaluate(z)?;
        // Z is multivalued when a flux is nonzero; X is still well defined.
        let w = match s.evaluate_null_curve(z) {
            Ok(w) => Some(w),
            Err(WeierstrassError::ComplexPeriod { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        if g.json {
            let zj = w.as_ref().map_or(Value::Null, |w| complexes(w));
            list.push(json!({ "z": complex(z), "X": numbers(&x), "Z": zj }));
        } else {
            let _ = writeln!(out, "z = {}", fmt_complex(z));
            let _ = writeln!(out, "  X = {}", fmt_vec(&x));
            match &w {
                Some(w) => {
                    let _ = writeln!(out, "  Z = {}", fmt_complexes(w));
                }
                None => {
                    let _ = writeln!(out, "  Z = multivalued (nonzero flux)");
                }
            }
        }
    }
    if g.json {
        out = to_pretty(&Value::Array(list));
    }
    Ok(Output::ok(out))
}

fn parse_axes(s: &str, n: usize) -> Result<[usize; 3]> {
    let bad = || CliError::Input(format!("--axes expects three indices in 1..={n}, got `{s}`"));
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    match parts.as_slice() {
        [a, b, c] if [a, b, c].iter().all(|&&k| (1..=n).contains(&k)) => Ok([a - 1, b - 1, c - 1]),
        _ => Err(bad()),
    }
}

fn cmd_mesh(
    g: &Global,
    arg: &str,
    (nu, nv): (usize, usize),
    output: Option<&Path>,
    axes: &str,
    scalars: Option<&Path>,
    t: Option<f64>,
) -> Result<Output> {
    if nu < 2 || nv < 2 {
        return Err(CliError::Input(format!("--nu and --nv must be at least 2, got {nu} and {nv}")));
    }
    let mut l = load(g, arg)?;
    let axes = parse_axes(axes, l.spec.dimension())?;
    require_valid(g, &l)?;
    if let Some(t) = t {
        if !t.is_finite() {
            return Err(CliError::Input("--t must be finite".into()));
        }
        l.spec = associate_spec(&l.spec, t, l.tol)?;
    }
    let s = surface(&l)?;
    let mesh = export::mesh(&s, nu, nv, axes);
    let obj = export::write_obj(&mesh, VERSION);
    if let Some(p) = scalars {
        write_output(Some(p), &export::write_vertex_scalars(&s, &mesh))?;
    }
    match write_output(output, &obj)? {
        Some(text) => Ok(Output::ok(text)),
        None => {
            let text = if g.json {
                to_pretty(&json!({ "vertices": mesh.vertices.len(), "triangles": mesh.faces.len() }))
            } else {
                format!("{} vertices, {} triangles\n", mesh.vertices.len(), mesh.faces.len())
            };
            Ok(Output::ok(text))
        }
    }
}

fn cmd_sweep(g: &Global, arg: &str, grid: &str, output: Option<&Path>) -> Result<Output> {
    let (nu, nv) = parse_shape(grid, 1)?;
    let l = load(g, arg)?;
    require_valid(g, &l)?;
    let s = surface(&l)?;
    let rows = export::sweep(&s, nu, nv);
    let skipped = rows.iter().filter(|r| r.is_err()).count();
    if skipped > 0 {
        eprintln!("warning: {skipped} grid point(s) skipped (stencil outside the domain or evaluation failed)");
    }
    let csv = export::write_sweep(&rows);
    match write_output(output, &csv)? {
        Some(text) => Ok(Output::ok(text)),
        None => Ok(Output::ok(format!("{} rows\n", rows.len() - skipped))),
    }
}

fn cmd_gauss(g: &Global, arg: &str, zs: &[String]) -> Result<Output> {
    let points = parse_points(zs)?;
    let l = load(g, arg)?;
    let data = &l.spec.data;
    let three = data.dimension() == 3;
    let mut out = String::new();
    let mut list = Vec::new();
    for z in points {
        let gen = geometry::projective_normalize(&geometry::generalized_gauss_map(data, z)?);
        let gm = if three { Some(geometry::gauss_map(data, z)?) } else { None };
        let normal = gm.map(geometry::stereographic);
        if g.json {
            list.push(json!({
                "z": complex(z),
                "gauss_map": gm.map(extended).unwrap_or(Value::Null),
                "normal": normal.map(|n| numbers(&n)).unwrap_or(Value::Null),
                "generalized_gauss_map": complexes(&gen),
            }));
            continue;
        }
        let _ = writeln!(out, "z = {}", fmt_complex(z));
        if let (Some(gm), Some(n)) = (gm, normal) {
            let shown = match gm.finite() {
                Some(c) => fmt_complex(c),
                None => "infinity".into(),
            };
            let _ = writeln!(out, "  gauss map   {shown}");
            let _ = writeln!(out, "  normal      {}", fmt_vec(&n));
        }
        let _ = writeln!(out, "  generalized {}", fmt_complexes(&gen));
    }
    if g.json {
        out = to_pretty(&Value::Array(list));
    }
    Ok(Output::ok(out))
}

fn cmd_curvature(g: &Global, arg: &str, zs: &[String]) -> Result<Output> {
    let points = parse_points(zs)?;
    let l = load(g, arg)?;
    let s = surface(&l)?;
    let mut out = String::new();
    let mut list = Vec::new();
    for z in points {
        let c = geometry::curvature_sample(&s, z)?;
        if g.json {
            list.push(export::curvature_json(&c));
            continue;
        }
        let h = c.mean_curvature.iter().map(|x| x * x).sum::<f64>().sqrt();
        let _ = writeln!(out, "z = {}", fmt_complex(z));
        let _ = writeln!(out, "  lambda  {}", format_float(c.lambda));
        let _ = writeln!(out, "  K       {}", format_float(c.k));
        if let Some((k1, k2)) = c.kappa {
            let _ = writeln!(out, "  kappa   {}", fmt_vec(&[k1, k2]));
        }
        let _ = writeln!(out, "  |H|     {}", format_float(h));
    }
    if g.json {
        out = to_pretty(&Value::Array(list));
    }
    Ok(Output::ok(out))
}

fn cmd_total_curvature(g: &Global, arg: &str, resolution: Option<usize>) -> Result<Output> {
    let l = load(g, arg)?;
    let r = geometry::total_curvature(&l.spec.data, &l.spec.domain, resolution.unwrap_or(DEFAULT_RESOLUTION))?;
    let scheme = format!("{:?}", r.scheme).to_lowercase();
    if g.json {
        let v = json!({
            "name": l.spec.name,
            "value": number(r.value),
            "error": number(r.error),
            "levels": numbers(&r.levels),
            "resolution": r.resolution,
            "scheme": scheme,
        });
        return Ok(Output::ok(to_pretty(&v)));
    }
    Ok(Output::ok(format!(
        "total curvature {} +/- {}  ({scheme}, resolution {})\n",
        format_float(r.value),
        format_float(r.error),
        r.resolution
    )))
}

fn read_path(p: &Path) -> Result<PathPolyline> {
    let text = std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
    let list = match &value {
        Value::Object(m) => m.get("vertices").cloned().unwrap_or(Value::Null),
        v => v.clone(),
    };
    let bad = || CliError::Input(format!("{}: expected [[re, im], ...] with at least two points", p.display()));
    let pairs: Vec<[f64; 2]> = serde_json::from_value::<Vec<Vec<Value>>>(list)
        .map_err(|_| bad())?
        .into_iter()
        .map(|pair| match pair.as_slice() {
            [a, b] => match (as_f64(a), as_f64(b)) {
                (Some(x), Some(y)) if x.is_finite() && y.is_finite() => Ok([x, y]),
                _ => Err(bad()),
            },
            _ => Err(bad()),
        })
        .collect::<Result<_>>()?;
    if pairs.len() < 2 {
        return Err(bad());
    }
    Ok(PathPolyline::new(pairs.iter().map(|p| Complex64::new(p[0], p[1])).collect()))
}

fn as_f64(v: &Value) -> Option<f64> {
    v.as_f64().or_else(|| v.as_number().and_then(|n| n.to_string().parse().ok()))
}

fn cmd_length(g: &Global, arg: &str, ray: Option<&str>, angle: f64, path: Option<&Path>) -> Result<Output> {
    let polyline = match (ray, path) {
        (Some(r), _) => {
            let bad = || CliError::Input(format!("--ray expects `a:b` with finite radii, got `{r}`"));
            let (a, b) = r.split_once(':').ok_or_else(bad)?;
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            if !(a.is_finite() && b.is_finite() && angle.is_finite()) || a == b {
                return Err(bad());
            }
            PathPolyline::segment(Complex64::from_polar(a, angle), Complex64::from_polar(b, angle))
        }
        (None, Some(p)) => read_path(p)?,
        (None, None) => return Err(CliError::Input("give --ray or --path".into())),
    };
    let l = load(g, arg)?;
    let r = geometry::path_length(&l.spec.data, &l.spec.domain, &polyline, l.tol)?;
    if r.outside_domain {
        eprintln!("warning: the path leaves the domain of `{}`", l.spec.name);
    }
    if g.json {
        let v = json!({
            "name": l.spec.name,
            "length": number(r.length),
            "error": number(r.error),
            "outside_domain": r.outside_domain,
        });
        return Ok(Output::ok(to_pretty(&v)));
    }
    Ok(Output::ok(format!("length {} +/- {}\n", format_float(r.length), format_float(r.error))))
}

fn cmd_family(g: &Global, arg: &str, t: Option<f64>, output: Option<&Path>) -> Result<Output> {
    let l = load(g, arg)?;
    let spec = match t {
        Some(t) if !t.is_finite() => return Err(CliError::Input("--t must be finite".into())),
        Some(t) => associate_spec(&l.spec, t, l.tol)?,
        None => conjugate_spec(&l.spec, l.tol)?,
    };
    let text = l.file.with_surface(&spec).to_json() + "\n";
    match write_output(output, &text)? {
        Some(text) => Ok(Output::ok(text)),
        None => Ok(Output::ok(format!("wrote `{}`\n", spec.name))),
    }
}

fn cmd_minimize(
    g: &Global,
    boundary: &Path,
    grid: &str,
    solver: SolverArg,
    max_iter: Option<usize>,
    (hu, hv): (Option<f64>, Option<f64>),
    output: Option<&Path>,
) -> Result<Output> {
    let (m, n) = parse_shape(grid, 3)?;
    let text = std::fs::read_to_string(boundary).map_err(|e| CliError::Input(format!("{}: {e}", boundary.display())))?;
    let hu = hu.unwrap_or(1.0 / (m - 1) as f64);
    let hv = hv.unwrap_or(1.0 / (n - 1) as f64);
    let start = GridImmersion::from_csv(&text, m, n, hu, hv)?;
    let solver = match solver {
        SolverArg::Cg => Solver::ConjugateGradient,
        SolverArg::Jacobi => Solver::Jacobi,
        SolverArg::GaussSeidel => Solver::GaussSeidel,
    };
    let tol = g.tol.unwrap_or(DEFAULT_SOLVER_TOL);
    let max_iter = max_iter.unwrap_or_else(|| variational::default_max_iterations(m, n));
    let r = variational::minimize_dirichlet(&start, solver, tol, max_iter)?;
    let (area, energy) = (variational::area(&r.grid), variational::dirichlet(&r.grid));
    let center = r.grid.node(m / 2, n / 2).to_vec();
    let csv = r.grid.to_csv();
    let summary = if g.json {
        to_pretty(&json!({
            "iterations": r.iterations,
            "residual": number(r.residual),
            "dirichlet": number(energy),
            "area": number(area),
            "center": numbers(&center),
        }))
    } else {
        format!(
            "iterations {}\nresidual   {}\ndirichlet  {}\narea       {}\ncenter     {}\n",
            r.iterations,
            format_float(r.residual),
            format_float(energy),
            format_float(area),
            fmt_vec(&center)
        )
    };
    match write_output(output, &csv)? {
        Some(text) => {
            eprint!("{summary}");
            Ok(Output::ok(text))
        }
        None => Ok(Output::ok(summary)),
    }
}
