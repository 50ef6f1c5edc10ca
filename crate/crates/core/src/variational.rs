//! Area and Dirichlet energy of grid immersions, the first variation, and a
//! fixed-boundary Dirichlet minimizer.
//!
//! Nodes are `(i, j)` with `i < m` along `u` and `j < n` along `v`. The
//! energy of a cell is the trapezoid average of the squared difference
//! quotients on its four edges; its exact gradient at a free node is
//! `−hu·hv·ΔX` with the 5-point Laplacian `Δ`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::export::format_float;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VariationalError {
    #[error("grid must have at least 3×3 nodes, got {m}×{n}")]
    Shape { m: usize, n: usize },
    #[error("grid spacings must be positive and finite, got ({hu}, {hv})")]
    Spacing { hu: f64, hv: f64 },
    #[error("expected {expected} values, found {found}")]
    Length { expected: usize, found: usize },
    #[error("dimension must be at least 1")]
    Dimension,
    #[error("non-finite value at node ({i}, {j})")]
    NonFinite { i: usize, j: usize },
    #[error("boundary node ({i}, {j}) is not fixed")]
    OpenBoundary { i: usize, j: usize },
    #[error("variation is nonzero at fixed node ({i}, {j})")]
    FixedVariation { i: usize, j: usize },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("grid CSV line {line}: {message}")]
    Csv { line: usize, message: String },
}

/// Samples `X ∈ ℝⁿ` on an `m × n` grid with spacings `hu`, `hv`. Fixed nodes
/// always include the outer ring.
#[derive(Debug, Clone, PartialEq)]
pub struct GridImmersion {
    m: usize,
    n: usize,
    hu: f64,
    hv: f64,
    dim: usize,
    values: Vec<f64>,
    fixed: Vec<bool>,
}

impl GridImmersion {
    /// `values` holds `dim` numbers per node, nodes ordered with `i` fastest.
    /// `fixed` defaults to the outer ring.
    pub fn new(
        m: usize,
        n: usize,
        hu: f64,
        hv: f64,
        dim: usize,
        values: Vec<f64>,
        fixed: Option<Vec<bool>>,
    ) -> Result<GridImmersion, VariationalError> {
        if m < 3 || n < 3 {
            return Err(VariationalError::Shape { m, n });
        }
        if !(hu > 0.0 && hv > 0.0 && hu.is_finite() && hv.is_finite()) {
            return Err(VariationalError::Spacing { hu, hv });
        }
        if dim == 0 {
            return Err(VariationalError::Dimension);
        }
        if values.len() != m * n * dim {
            return Err(VariationalError::Length { expected: m * n * dim, found: values.len() });
        }
        if let Some(k) = values.iter().position(|x| !x.is_finite()) {
            let node = k / dim;
            return Err(VariationalError::NonFinite { i: node % m, j: node / m });
        }
        let fixed = fixed.unwrap_or_else(|| (0..m * n).map(|k| is_ring(m, n, k % m, k / m)).collect());
        if fixed.len() != m * n {
            return Err(VariationalError::Length { expected: m * n, found: fixed.len() });
        }
        for (k, &f) in fixed.iter().enumerate() {
            let (i, j) = (k % m, k / m);
            if is_ring(m, n, i, j) && !f {
                return Err(VariationalError::OpenBoundary { i, j });
            }
        }
        Ok(GridImmersion { m, n, hu, hv, dim, values, fixed })
    }

    /// Samples `x(u, v)` at `u = u0 + i·hu`, `v = v0 + j·hv` spanning
    /// `[u0, u1] × [v0, v1]`.
    pub fn sample(
        m: usize,
        n: usize,
        (u0, u1): (f64, f64),
        (v0, v1): (f64, f64),
        x: impl Fn(f64, f64) -> Vec<f64>,
    ) -> Result<GridImmersion, VariationalError> {
        if m < 3 || n < 3 {
            return Err(VariationalError::Shape { m, n });
        }
        let hu = (u1 - u0) / (m - 1) as f64;
        let hv = (v1 - v0) / (n - 1) as f64;
        let mut values = Vec::new();
        let mut dim = 0;
        for j in 0..n {
            for i in 0..m {
                let p = x(u0 + i as f64 * hu, v0 + j as f64 * hv);
                dim = p.len();
                values.extend(p);
            }
        }
        GridImmersion::new(m, n, hu, hv, dim, values, None)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn spacing(&self) -> (f64, f64) {
        (self.hu, self.hv)
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_fixed(&self, i: usize, j: usize) -> bool {
        self.fixed[j * self.m + i]
    }

    pub fn fixed_mask(&self) -> &[bool] {
        &self.fixed
    }

    pub fn node(&self, i: usize, j: usize) -> &[f64] {
        let k = (j * self.m + i) * self.dim;
        &self.values[k..k + self.dim]
    }

    fn with_values(&self, values: Vec<f64>) -> GridImmersion {
        GridImmersion { values, ..self.clone() }
    }

    /// `X + t·G`.
    pub fn perturbed(&self, g: &VariationField, t: f64) -> GridImmersion {
        self.with_values(self.values.iter().zip(&g.values).map(|(x, d)| x + t * d).collect())
    }

    /// 5-point Laplacian at an interior node.
    pub fn laplacian(&self, i: usize, j: usize) -> Vec<f64> {
        let (hu2, hv2) = (self.hu * self.hu, self.hv * self.hv);
        let c = self.node(i, j);
        let (l, r) = (self.node(i - 1, j), self.node(i + 1, j));
        let (d, u) = (self.node(i, j - 1), self.node(i, j + 1));
        (0..self.dim)
            .map(|k| (l[k] + r[k] - 2.0 * c[k]) / hu2 + (d[k] + u[k] - 2.0 * c[k]) / hv2)
            .collect()
    }

    /// `max |∂D/∂X|` over free nodes, i.e. `hu·hv·max|ΔX|`.
    pub fn residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 1..self.n - 1 {
            for i in 1..self.m - 1 {
                if !self.is_fixed(i, j) {
                    for x in self.laplacian(i, j) {
                        worst = worst.max(x.abs());
                    }
                }
            }
        }
        worst * self.hu * self.hv
    }

    /// CSV with header `i,j,x1,…,xn`, one row per node.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j");
        for k in 1..=self.dim {
            let _ = write!(out, ",x{k}");
        }
        out.push('\n');
        for j in 0..self.n {
            for i in 0..self.m {
                let _ = write!(out, "{i},{j}");
                for x in self.node(i, j) {
                    let _ = write!(out, ",{}", format_float(*x));
                }
                out.push('\n');
            }
        }
        out
    }

    /// Reads rows `i,j,x1,…,xn` onto an `m × n` grid. Listed nodes become
    /// fixed; the rest are free and start at the mean of the listed values.
    /// A header line is optional.
    pub fn from_csv(text: &str, m: usize, n: usize, hu: f64, hv: f64) -> Result<GridImmersion, VariationalError> {
        if m < 3 || n < 3 {
            return Err(VariationalError::Shape { m, n });
        }
        let mut rows: Vec<(usize, usize, Vec<f64>)> = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let csv_err = |message: String| VariationalError::Csv { line: line_no + 1, message };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() < 3 {
                return Err(csv_err("expected i,j and at least one coordinate".into()));
            }
            if line_no == 0 && fields[0].parse::<usize>().is_err() {
                continue;
            }
            let i: usize = fields[0].parse().map_err(|_| csv_err(format!("bad index `{}`", fields[0])))?;
            let j: usize = fields[1].parse().map_err(|_| csv_err(format!("bad index `{}`", fields[1])))?;
            if i >= m || j >= n {
                return Err(csv_err(format!("node ({i}, {j}) outside {m}×{n} grid")));
            }
            let x = fields[2..]
                .iter()
                .map(|s| s.parse::<f64>().ok().filter(|x| x.is_finite()))
                .collect::<Option<Vec<f64>>>()
                .ok_or_else(|| csv_err("coordinates must be finite numbers".into()))?;
            if let Some((_, _, first)) = rows.first() {
                if first.len() != x.len() {
                    return Err(csv_err(format!("expected {} coordinates, found {}", first.len(), x.len())));
                }
            }
            rows.push((i, j, x));
        }
        let dim = rows.first().map(|r| r.2.len()).ok_or(VariationalError::Csv {
            line: 0,
            message: "no grid rows".into(),
        })?;
        let mut mean = vec![0.0; dim];
        for (_, _, x) in &rows {
            for k in 0..dim {
                mean[k] += x[k] / rows.len() as f64;
            }
        }
        let mut values: Vec<f64> = (0..m * n).flat_map(|_| mean.iter().copied()).collect();
        let mut fixed = vec![false; m * n];
        for (i, j, x) in rows {
            let k = j * m + i;
            fixed[k] = true;
            values[k * dim..(k + 1) * dim].copy_from_slice(&x);
        }
        GridImmersion::new(m, n, hu, hv, dim, values, Some(fixed))
    }
}

fn is_ring(m: usize, n: usize, i: usize, j: usize) -> bool {
    i == 0 || j == 0 || i == m - 1 || j == n - 1
}

/// A variation `G`, zero on the fixed nodes of its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VariationField {
    values: Vec<f64>,
}

impl VariationField {
    pub fn new(grid: &GridImmersion, values: Vec<f64>) -> Result<VariationField, VariationalError> {
        let expected = grid.values.len();
        if values.len() != expected {
            return Err(VariationalError::Length { expected, found: values.len() });
        }
        for (k, fixed) in grid.fixed.iter().enumerate() {
            let g = &values[k * grid.dim..(k + 1) * grid.dim];
            if *fixed && g.iter().any(|x| *x != 0.0) {
                return Err(VariationalError::FixedVariation { i: k % grid.m, j: k / grid.m });
            }
        }
        Ok(VariationField { values })
    }

    pub fn zero(grid: &GridImmersion) -> VariationField {
        VariationField { values: vec![0.0; grid.values.len()] }
    }

    /// `g(i, j)` on free nodes, zero on fixed ones.
    pub fn from_fn(grid: &GridImmersion, mut g: impl FnMut(usize, usize) -> Vec<f64>) -> VariationField {
        let mut values = vec![0.0; grid.values.len()];
        for j in 0..grid.n {
            for i in 0..grid.m {
                if !grid.is_fixed(i, j) {
                    let k = (j * grid.m + i) * grid.dim;
                    values[k..k + grid.dim].copy_from_slice(&g(i, j)[..grid.dim]);
                }
            }
        }
        VariationField { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

fn diff_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Midpoint-rule area: per cell, `√(|X_u|²|X_v|² − (X_u·X_v)²)·hu·hv` with
/// partials averaged over the cell's parallel edges.
pub fn area(x: &GridImmersion) -> f64 {
    let (hu, hv, dim) = (x.hu, x.hv, x.dim);
    let mut total = 0.0;
    let mut xu = vec![0.0; dim];
    let mut xv = vec![0.0; dim];
    for j in 0..x.n - 1 {
        for i in 0..x.m - 1 {
            let (a, b) = (x.node(i, j), x.node(i + 1, j));
            let (c, d) = (x.node(i, j + 1), x.node(i + 1, j + 1));
            for k in 0..dim {
                xu[k] = (b[k] - a[k] + d[k] - c[k]) / (2.0 * hu);
                xv[k] = (c[k] - a[k] + d[k] - b[k]) / (2.0 * hv);
            }
            let uu: f64 = xu.iter().map(|t| t * t).sum();
            let vv: f64 = xv.iter().map(|t| t * t).sum();
            let uv: f64 = xu.iter().zip(&xv).map(|(p, q)| p * q).sum();
            total += (uu * vv - uv * uv).max(0.0).sqrt();
        }
    }
    total * hu * hv
}

/// `½ Σ (|X_u|² + |X_v|²)·hu·hv`, each squared partial the mean over the
/// cell's two parallel edges.
pub fn dirichlet(x: &GridImmersion) -> f64 {
    let (hu, hv) = (x.hu, x.hv);
    let mut su = 0.0;
    let mut sv = 0.0;
    for j in 0..x.n {
        for i in 0..x.m {
            let w_row = if j == 0 || j == x.n - 1 { 0.5 } else { 1.0 };
            let w_col = if i == 0 || i == x.m - 1 { 0.5 } else { 1.0 };
            if i + 1 < x.m {
                su += w_row * diff_sq(x.node(i + 1, j), x.node(i, j));
            }
            if j + 1 < x.n {
                sv += w_col * diff_sq(x.node(i, j + 1), x.node(i, j));
            }
        }
    }
    0.5 * (su * hv / hu + sv * hu / hv)
}

/// `d/dt D(X + tG)` at `t = 0`, i.e. `−hu·hv Σ ΔX·G` over free nodes.
pub fn first_variation(x: &GridImmersion, g: &VariationField) -> f64 {
    let mut total = 0.0;
    for j in 1..x.n - 1 {
        for i in 1..x.m - 1 {
            if x.is_fixed(i, j) {
                continue;
            }
            let k = (j * x.m + i) * x.dim;
            total += x.laplacian(i, j).iter().zip(&g.values[k..k + x.dim]).map(|(a, b)| a * b).sum::<f64>();
        }
    }
    -x.hu * x.hv * total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Solver {
    #[default]
    ConjugateGradient,
    /// Jacobi with damping `2/3`.
    Jacobi,
    /// Red-black Gauss–Seidel.
    GaussSeidel,
}

pub const DEFAULT_SOLVER_TOL: f64 = 1e-10;

/// `10·m·n`.
pub fn default_max_iterations(m: usize, n: usize) -> usize {
    10 * m * n
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimized {
    pub grid: GridImmersion,
    pub iterations: usize,
    /// Final [`GridImmersion::residual`].
    pub residual: f64,
    /// Dirichlet energy of the start and after each iteration.
    pub energies: Vec<f64>,
}

/// Discrete harmonic extension of the fixed values of `start`; its free
/// values are the initial guess. Iterates until the residual is at most
/// `tol`.
pub fn minimize_dirichlet(
    start: &GridImmersion,
    solver: Solver,
    tol: f64,
    max_iterations: usize,
) -> Result<Minimized, VariationalError> {
    let mut x = start.clone();
    let mut energies = vec![dirichlet(&x)];
    let mut residual = x.residual();
    let mut iterations = 0;
    let mut cg = Cg::new(&x);
    while residual > tol {
        if iterations == max_iterations {
            return Err(VariationalError::NonConvergence { iterations, residual });
        }
        match solver {
            Solver::ConjugateGradient => cg.step(&mut x),
            Solver::Jacobi => jacobi_step(&mut x, 2.0 / 3.0),
            Solver::GaussSeidel => {
                gauss_seidel_sweep(&mut x, 0);
                gauss_seidel_sweep(&mut x, 1);
            }
        }
        iterations += 1;
        energies.push(dirichlet(&x));
        residual = x.residual();
    }
    Ok(Minimized { grid: x, iterations, residual, energies })
}

/// Weights of the 5-point system `A X = b`, `A = ∂²D`.
fn weights(x: &GridImmersion) -> (f64, f64, f64) {
    let wu = x.hv / x.hu;
    let wv = x.hu / x.hv;
    (wu, wv, 2.0 * (wu + wv))
}

/// `∂D/∂X` at free nodes, zero elsewhere.
fn gradient(x: &GridImmersion, out: &mut [f64]) {
    let (wu, wv, diag) = weights(x);
    out.fill(0.0);
    for j in 1..x.n - 1 {
        for i in 1..x.m - 1 {
            if x.is_fixed(i, j) {
                continue;
            }
            let k = (j * x.m + i) * x.dim;
            let (c, l, r, d, u) = (x.node(i, j), x.node(i - 1, j), x.node(i + 1, j), x.node(i, j - 1), x.node(i, j + 1));
            for q in 0..x.dim {
                out[k + q] = diag * c[q] - wu * (l[q] + r[q]) - wv * (d[q] + u[q]);
            }
        }
    }
}

/// `A p` for `p` vanishing on fixed nodes.
fn apply(x: &GridImmersion, p: &[f64], out: &mut [f64]) {
    let (wu, wv, diag) = weights(x);
    let (m, dim) = (x.m, x.dim);
    out.fill(0.0);
    for j in 1..x.n - 1 {
        for i in 1..m - 1 {
            if x.is_fixed(i, j) {
                continue;
            }
            let k = (j * m + i) * dim;
            for q in 0..dim {
                out[k + q] = diag * p[k + q]
                    - wu * (p[k - dim + q] + p[k + dim + q])
                    - wv * (p[k - m * dim + q] + p[k + m * dim + q]);
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct Cg {
    r: Vec<f64>,
    p: Vec<f64>,
    ap: Vec<f64>,
    rr: f64,
}

impl Cg {
    fn new(x: &GridImmersion) -> Cg {
        let mut r = vec![0.0; x.values.len()];
        gradient(x, &mut r);
        r.iter_mut().for_each(|t| *t = -*t);
        let rr = dot(&r, &r);
        Cg { p: r.clone(), ap: vec![0.0; r.len()], r, rr }
    }

    fn step(&mut self, x: &mut GridImmersion) {
        apply(x, &self.p, &mut self.ap);
        let pap = dot(&self.p, &self.ap);
        if pap <= 0.0 {
            return;
        }
        let alpha = self.rr / pap;
        for (v, p) in x.values.iter_mut().zip(&self.p) {
            *v += alpha * p;
        }
        for (r, ap) in self.r.iter_mut().zip(&self.ap) {
            *r -= alpha * ap;
        }
        let rr = dot(&self.r, &self.r);
        let beta = rr / self.rr;
        self.rr = rr;
        for (p, r) in self.p.iter_mut().zip(&self.r) {
            *p = r + beta * *p;
        }
    }
}

fn jacobi_step(x: &mut GridImmersion, omega: f64) {
    let (_, _, diag) = weights(x);
    let mut g = vec![0.0; x.values.len()];
    gradient(x, &mut g);
    for (v, gk) in x.values.iter_mut().zip(&g) {
        *v -= omega * gk / diag;
    }
}

/// Exact minimization over the free nodes with `(i + j) % 2 == color`.
/// Nodes of one color do not neighbour each other, so order is irrelevant.
fn gauss_seidel_sweep(x: &mut GridImmersion, color: usize) {
    let (wu, wv, diag) = weights(x);
    let (m, dim) = (x.m, x.dim);
    for j in 1..x.n - 1 {
        for i in 1..m - 1 {
            if (i + j) % 2 != color || x.is_fixed(i, j) {
                continue;
            }
            let k = (j * m + i) * dim;
            for q in 0..dim {
                let v = &x.values;
                let s = wu * (v[k - dim + q] + v[k + dim + q]) + wv * (v[k - m * dim + q] + v[k + m * dim + q]);
                x.values[k + q] = s / diag;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn plane(m: usize) -> GridImmersion {
        GridImmersion::sample(m, m, (0.0, 1.0), (0.0, 1.0), |u, v| vec![u, v, 0.0]).unwrap()
    }

    fn catenoid(u: f64, v: f64) -> Vec<f64> {
        vec![u.cos() * v.cosh(), u.sin() * v.cosh(), v]
    }

    #[test]
    fn invariants_are_checked() {
        assert_eq!(
            GridImmersion::new(2, 5, 1.0, 1.0, 1, vec![0.0; 10], None),
            Err(VariationalError::Shape { m: 2, n: 5 })
        );
        assert!(matches!(
            GridImmersion::new(3, 3, 0.0, 1.0, 1, vec![0.0; 9], None),
            Err(VariationalError::Spacing { .. })
        ));
        assert!(matches!(
            GridImmersion::new(3, 3, 1.0, 1.0, 1, vec![0.0; 8], None),
            Err(VariationalError::Length { .. })
        ));
        let mut open = vec![true; 9];
        open[1] = false;
        assert_eq!(
            GridImmersion::new(3, 3, 1.0, 1.0, 1, vec![0.0; 9], Some(open)),
            Err(VariationalError::OpenBoundary { i: 1, j: 0 })
        );
        let g = plane(4);
        let bad = vec![1.0; g.values().len()];
        assert!(matches!(VariationField::new(&g, bad), Err(VariationalError::FixedVariation { i: 0, j: 0 })));
    }

    #[test]
    fn flat_patch() {
        let g = plane(65);
        assert!((area(&g) - 1.0).abs() < 1e-12);
        assert!((dirichlet(&g) - 1.0).abs() < 1e-12);
        let s = GridImmersion::sample(9, 9, (0.0, 1.0), (0.0, 1.0), |u, v| vec![2.0 * u, v, 0.0]).unwrap();
        assert!((dirichlet(&s) - 2.5).abs() < 1e-12);
        assert!((area(&s) - 2.0).abs() < 1e-12);
        let c = GridImmersion::sample(5, 7, (0.0, 1.0), (0.0, 1.0), |_, _| vec![3.0, -1.0]).unwrap();
        assert_eq!(area(&c), 0.0);
        assert_eq!(dirichlet(&c), 0.0);
    }

    #[test]
    fn catenoid_patch_area() {
        let g = GridImmersion::sample(129, 129, (0.0, FRAC_PI_2), (0.0, 1.0), catenoid).unwrap();
        let exact = FRAC_PI_2 * (0.5 + 2f64.sinh() / 4.0);
        assert!((area(&g) - exact).abs() < 5e-3 * exact);
        let (hu, hv) = g.spacing();
        let h2 = hu.max(hv).powi(2);
        let (a, d) = (area(&g), dirichlet(&g));
        assert!(a <= d);
        assert!((d - a) / a <= 10.0 * h2, "gap {}", (d - a) / a);
    }

    #[test]
    fn first_variation_is_the_energy_derivative() {
        let x = GridImmersion::sample(17, 13, (0.0, 1.0), (0.0, 2.0), |u, v| vec![u * v, (u + v).sin(), u * u]).unwrap();
        let g = VariationField::from_fn(&x, |i, j| vec![(i as f64).sin(), (j as f64 * 0.7).cos(), 0.1 * (i + j) as f64]);
        let t = 1e-6;
        let fd = (dirichlet(&x.perturbed(&g, t)) - dirichlet(&x.perturbed(&g, -t))) / (2.0 * t);
        let fv = first_variation(&x, &g);
        assert!((fd - fv).abs() <= 1e-6 * fv.abs(), "{fd} vs {fv}");
        assert_eq!(first_variation(&x, &VariationField::zero(&x)), 0.0);
    }

    #[test]
    fn harmonic_grid_is_stationary() {
        // u² − v² and uv are discrete-harmonic for the 5-point stencil.
        let x = GridImmersion::sample(11, 11, (-1.0, 1.0), (-1.0, 1.0), |u, v| vec![u * u - v * v, u * v, 2.0 * u - v]).unwrap();
        let g = VariationField::from_fn(&x, |i, j| vec![i as f64, j as f64, 1.0]);
        assert!(first_variation(&x, &g).abs() < 1e-10);
    }

    fn circle_boundary(m: usize) -> GridImmersion {
        GridImmersion::sample(m, m, (-1.0, 1.0), (-1.0, 1.0), |u, v| {
            if u.abs() == 1.0 || v.abs() == 1.0 {
                let t = v.atan2(u);
                vec![t.cos(), t.sin(), 0.0]
            } else {
                vec![0.3, -0.2, 0.5]
            }
        })
        .unwrap()
    }

    #[test]
    fn every_solver_reaches_the_same_extension() {
        let start = circle_boundary(17);
        let mut results = Vec::new();
        for solver in [Solver::ConjugateGradient, Solver::Jacobi, Solver::GaussSeidel] {
            let r = minimize_dirichlet(&start, solver, 1e-12, default_max_iterations(17, 17)).unwrap();
            assert!(r.residual <= 1e-12);
            for w in r.energies.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-14), "{solver:?} energy increased");
            }
            let c = r.grid.node(8, 8);
            assert!(c.iter().all(|x| x.abs() < 1e-9), "{solver:?}: {c:?}");
            results.push(r.grid);
        }
        for g in &results[1..] {
            for (a, b) in g.values().iter().zip(results[0].values()) {
                assert!((a - b).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn constant_boundary_gives_constant_field() {
        let start = GridImmersion::sample(9, 6, (0.0, 1.0), (0.0, 1.0), |u, v| {
            if u == 0.0 || v == 0.0 || u == 1.0 || v == 1.0 { vec![2.0, -1.0] } else { vec![u, v] }
        })
        .unwrap();
        let r = minimize_dirichlet(&start, Solver::default(), 1e-12, 1000).unwrap();
        for j in 0..6 {
            for i in 0..9 {
                let x = r.grid.node(i, j);
                assert!((x[0] - 2.0).abs() < 1e-10 && (x[1] + 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn catenoid_recovery_is_second_order() {
        let error = |m: usize| {
            let exact = GridImmersion::sample(m, m, (0.0, FRAC_PI_2), (0.0, 1.0), catenoid).unwrap();
            let start = GridImmersion::sample(m, m, (0.0, FRAC_PI_2), (0.0, 1.0), |u, v| {
                let (ue, ve) = (u == 0.0 || (u - FRAC_PI_2).abs() < 1e-12, v == 0.0 || (v - 1.0).abs() < 1e-12);
                if ue || ve { catenoid(u, v) } else { vec![0.0; 3] }
            })
            .unwrap();
            let r = minimize_dirichlet(&start, Solver::ConjugateGradient, 1e-13, default_max_iterations(m, m)).unwrap();
            r.grid.values().iter().zip(exact.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
        };
        let (e1, e2) = (error(9), error(17));
        let ratio = e1 / e2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn nonconvergence_reports_residual() {
        let start = circle_boundary(17);
        match minimize_dirichlet(&start, Solver::Jacobi, 1e-12, 3) {
            Err(VariationalError::NonConvergence { iterations: 3, residual }) => assert!(residual > 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_round_trip() {
        let g = GridImmersion::sample(4, 3, (0.0, PI), (0.0, 1.0), catenoid).unwrap();
        let (hu, hv) = g.spacing();
        let text = g.to_csv();
        assert!(text.starts_with("i,j,x1,x2,x3\n0,0,"));
        let back = GridImmersion::from_csv(&text, 4, 3, hu, hv).unwrap();
        assert_eq!(back.values(), g.values());
        assert!(back.fixed_mask().iter().all(|f| *f));
    }

    #[test]
    fn csv_boundary_only() {
        let mut text = String::new();
        for j in 0..5 {
            for i in 0..5 {
                if i == 0 || j == 0 || i == 4 || j == 4 {
                    text += &format!("{i},{j},{}\n", i + j);
                }
            }
        }
        let g = GridImmersion::from_csv(&text, 5, 5, 0.25, 0.25).unwrap();
        assert!(!g.is_fixed(2, 2));
        assert_eq!(g.node(4, 4), &[8.0]);
        let missing: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
        assert!(matches!(GridImmersion::from_csv(&missing, 5, 5, 0.25, 0.25), Err(VariationalError::OpenBoundary { .. })));
        assert!(matches!(GridImmersion::from_csv("0,0,nan\n", 3, 3, 1.0, 1.0), Err(VariationalError::Csv { line: 1, .. })));
        assert!(matches!(GridImmersion::from_csv("7,0,1\n", 3, 3, 1.0, 1.0), Err(VariationalError::Csv { .. })));
    }

    proptest! {
        #[test]
        fn area_never_exceeds_dirichlet(
            m in 3usize..8,
            n in 3usize..8,
            dim in 1usize..5,
            hu in 0.05f64..2.0,
            hv in 0.05f64..2.0,
            seed in proptest::collection::vec(-10.0f64..10.0, 7 * 7 * 4),
        ) {
            let values: Vec<f64> = seed.iter().cycle().take(m * n * dim).copied().collect();
            let x = GridImmersion::new(m, n, hu, hv, dim, values, None).unwrap();
            prop_assert!(area(&x) <= dirichlet(&x) * (1.0 + 1e-12));
        }
    }
}
