//! Planar circled domains: an outer disc or rectangle minus closed round
//! holes and punctures.
//!
//! A domain owns a canonical homology basis (one counterclockwise 64-gon per
//! hole) and routes polygonal integration paths between interior points.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

/// Vertex count of every basis cycle and of the routing rings.
pub const CYCLE_VERTICES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outer {
    Disc { center: Complex64, radius: f64 },
    Rectangle { min: Complex64, max: Complex64 },
}

/// A closed disc removed from the domain. Radius 0 encodes a puncture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hole {
    pub center: Complex64,
    pub radius: f64,
}

impl Hole {
    pub fn puncture(center: Complex64) -> Hole {
        Hole {
            center,
            radius: 0.0,
        }
    }

    pub fn is_puncture(&self) -> bool {
        self.radius == 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("invalid outer boundary: {0}")]
    InvalidOuter(String),
    #[error("hole {index} is invalid: {reason}")]
    InvalidHole { index: usize, reason: String },
    #[error("holes {a} and {b} overlap")]
    Overlap { a: usize, b: usize },
    #[error("margin {margin} must be non-negative and below half the minimal boundary gap {gap}")]
    Margin { margin: f64, gap: f64 },
    #[error("hole {0} cannot be encircled inside the margins")]
    Unencirclable(usize),
    #[error("point {0} is not in the domain")]
    NotInDomain(Complex64),
    #[error("no path from {from} to {to} clears the margins")]
    Unreachable { from: Complex64, to: Complex64 },
}

/// Closed counterclockwise polyline (first vertex repeated at the end).
#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    pub vertices: Vec<Complex64>,
    /// Hole this cycle was built around, if it is a basis cycle.
    pub hole: Option<usize>,
}

impl Cycle {
    pub fn new(vertices: Vec<Complex64>) -> Cycle {
        Cycle {
            vertices,
            hole: None,
        }
    }

    /// Regular polygon around `center`, counterclockwise, `turns` times.
    pub fn circle(center: Complex64, radius: f64, vertices: usize, turns: usize) -> Cycle {
        let total = vertices * turns;
        let mut pts: Vec<Complex64> = (0..total)
            .map(|k| center + Complex64::from_polar(radius, 2.0 * PI * k as f64 / vertices as f64))
            .collect();
        pts.push(pts[0]);
        Cycle::new(pts)
    }

    /// Winding number of the closed polyline around `p` (exact crossing rule).
    pub fn winding_number(&self, p: Complex64) -> i32 {
        winding_number(&self.vertices, p)
    }

    /// This cycle followed by `other`, joined through a connecting segment
    /// traversed once in each direction. Homologous to the sum of the two.
    pub fn concat(&self, other: &Cycle, bridge: &PathPolyline) -> Cycle {
        let mut v = self.vertices.clone();
        v.extend(bridge.vertices.iter().skip(1));
        v.extend(other.vertices.iter().skip(1));
        v.extend(bridge.vertices.iter().rev().skip(1));
        Cycle::new(v)
    }

    pub fn segments(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Open polyline.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPolyline {
    pub vertices: Vec<Complex64>,
}

impl PathPolyline {
    pub fn new(vertices: Vec<Complex64>) -> PathPolyline {
        PathPolyline { vertices }
    }

    pub fn segment(a: Complex64, b: Complex64) -> PathPolyline {
        PathPolyline::new(vec![a, b])
    }

    pub fn segments(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| (b - a).norm()).sum()
    }

    pub fn start(&self) -> Complex64 {
        self.vertices[0]
    }

    pub fn end(&self) -> Complex64 {
        *self.vertices.last().expect("non-empty path")
    }
}

fn is_left(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    (b.re - a.re) * (p.im - a.im) - (p.re - a.re) * (b.im - a.im)
}

/// Winding number of a closed polyline around `p`.
pub fn winding_number(vertices: &[Complex64], p: Complex64) -> i32 {
    let mut wn = 0;
    for w in vertices.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.im <= p.im {
            if b.im > p.im && is_left(a, b, p) > 0.0 {
                wn += 1;
            }
        } else if b.im <= p.im && is_left(a, b, p) < 0.0 {
            wn -= 1;
        }
    }
    wn
}

/// Distance from `p` to the segment `[a, b]`.
pub fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (a + d * t - p).norm()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircledDomain {
    outer: Outer,
    holes: Vec<Hole>,
    margin: f64,
}

impl CircledDomain {
    pub fn new(outer: Outer, holes: Vec<Hole>, margin: f64) -> Result<CircledDomain, DomainError> {
        match outer {
            Outer::Disc { center, radius } => {
                if !(radius.is_finite() && radius > 0.0 && center.re.is_finite() && center.im.is_finite()) {
                    return Err(DomainError::InvalidOuter(format!("disc radius {radius}")));
                }
            }
            Outer::Rectangle { min, max } => {
                if !(min.re.is_finite() && min.im.is_finite() && max.re.is_finite() && max.im.is_finite())
                    || min.re == max.re
                    || min.im == max.im
                {
                    return Err(DomainError::InvalidOuter("degenerate rectangle".into()));
                }
            }
        }
        let outer = match outer {
            Outer::Rectangle { min, max } => Outer::Rectangle {
                min: Complex64::new(min.re.min(max.re), min.im.min(max.im)),
                max: Complex64::new(min.re.max(max.re), min.im.max(max.im)),
            },
            o => o,
        };
        let domain = CircledDomain {
            outer,
            holes,
            margin,
        };
        for (k, h) in domain.holes.iter().enumerate() {
            if !(h.radius.is_finite() && h.radius >= 0.0 && h.center.re.is_finite() && h.center.im.is_finite()) {
                return Err(DomainError::InvalidHole {
                    index: k,
                    reason: format!("radius {}", h.radius),
                });
            }
            if domain.outer_clearance(h.center) <= h.radius {
                return Err(DomainError::InvalidHole {
                    index: k,
                    reason: "not strictly inside the outer boundary".into(),
                });
            }
        }
        for a in 0..domain.holes.len() {
            for b in a + 1..domain.holes.len() {
                let (ha, hb) = (domain.holes[a], domain.holes[b]);
                if (ha.center - hb.center).norm() <= ha.radius + hb.radius {
                    return Err(DomainError::Overlap { a, b });
                }
            }
        }
        let gap = domain.min_gap();
        if !(margin.is_finite() && margin >= 0.0 && margin < 0.5 * gap) {
            return Err(DomainError::Margin { margin, gap });
        }
        Ok(domain)
    }

    pub fn disc(center: Complex64, radius: f64) -> Result<CircledDomain, DomainError> {
        CircledDomain::new(Outer::Disc { center, radius }, Vec::new(), 0.0)
    }

    pub fn annulus(center: Complex64, inner: f64, outer: f64, margin: f64) -> Result<CircledDomain, DomainError> {
        CircledDomain::new(
            Outer::Disc {
                center,
                radius: outer,
            },
            vec![Hole {
                center,
                radius: inner,
            }],
            margin,
        )
    }

    pub fn rectangle(min: Complex64, max: Complex64) -> Result<CircledDomain, DomainError> {
        CircledDomain::new(Outer::Rectangle { min, max }, Vec::new(), 0.0)
    }

    pub fn with_margin(mut self, margin: f64) -> Result<CircledDomain, DomainError> {
        self.margin = margin;
        CircledDomain::new(self.outer, self.holes, self.margin)
    }

    pub fn outer(&self) -> Outer {
        self.outer
    }

    pub fn holes(&self) -> &[Hole] {
        &self.holes
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn is_simply_connected(&self) -> bool {
        self.holes.is_empty()
    }

    /// `Some(hole)` when the domain is a disc minus one concentric hole or
    /// puncture.
    pub fn concentric_hole(&self) -> Option<Hole> {
        match (self.outer, self.holes.as_slice()) {
            (Outer::Disc { center, radius }, [h]) if (h.center - center).norm() <= 1e-15 * radius => Some(*h),
            _ => None,
        }
    }

    pub fn diameter(&self) -> f64 {
        match self.outer {
            Outer::Disc { radius, .. } => 2.0 * radius,
            Outer::Rectangle { min, max } => (max - min).norm(),
        }
    }

    pub fn bounding_box(&self) -> (Complex64, Complex64) {
        match self.outer {
            Outer::Disc { center, radius } => (
                center - Complex64::new(radius, radius),
                center + Complex64::new(radius, radius),
            ),
            Outer::Rectangle { min, max } => (min, max),
        }
    }

    /// Signed distance from `z` to the outer boundary, positive inside.
    pub fn outer_clearance(&self, z: Complex64) -> f64 {
        match self.outer {
            Outer::Disc { center, radius } => radius - (z - center).norm(),
            Outer::Rectangle { min, max } => (z.re - min.re)
                .min(max.re - z.re)
                .min(z.im - min.im)
                .min(max.im - z.im),
        }
    }

    /// Smallest distance between two boundary components (the inradius of
    /// the outer boundary when there are no holes).
    fn min_gap(&self) -> f64 {
        let inradius = match self.outer {
            Outer::Disc { radius, .. } => radius,
            Outer::Rectangle { min, max } => 0.5 * (max.re - min.re).min(max.im - min.im),
        };
        (0..self.holes.len()).map(|k| self.hole_gap(k)).fold(inradius, f64::min)
    }

    /// Distance from hole `k`'s boundary to the nearest other boundary
    /// component.
    fn hole_gap(&self, k: usize) -> f64 {
        let h = self.holes[k];
        let mut gap = self.outer_clearance(h.center) - h.radius;
        for (j, o) in self.holes.iter().enumerate() {
            if j != k {
                gap = gap.min((h.center - o.center).norm() - h.radius - o.radius);
            }
        }
        gap
    }

    /// Length scale for finite differences at `z`: the diameter, capped by
    /// the distance to the nearest hole or puncture center.
    pub fn local_scale(&self, z: Complex64) -> f64 {
        self.holes
            .iter()
            .map(|h| (z - h.center).norm())
            .fold(self.diameter(), f64::min)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return false;
        }
        let c = self.outer_clearance(z);
        if !(c > 0.0 && c >= self.margin) {
            return false;
        }
        self.holes.iter().all(|h| {
            let d = (z - h.center).norm() - h.radius;
            d > 0.0 && d >= self.margin
        })
    }

    /// Whether the closed segment `[a, b]` lies in the domain with the margin
    /// respected at every point.
    pub fn contains_segment(&self, a: Complex64, b: Complex64) -> bool {
        // the margin-shrunk outer region is convex
        if !(self.contains(a) && self.contains(b)) {
            return false;
        }
        self.holes.iter().all(|h| {
            let d = segment_distance(a, b, h.center) - h.radius;
            d > 0.0 && d >= self.margin
        })
    }

    pub fn contains_path(&self, path: &PathPolyline) -> bool {
        match path.vertices.as_slice() {
            [] => false,
            [p] => self.contains(*p),
            _ => path.segments().all(|(a, b)| self.contains_segment(a, b)),
        }
    }

    /// Radius of the canonical ring around hole `k`.
    fn ring_radius(&self, k: usize) -> f64 {
        let h = self.holes[k];
        let clearance = 0.5 * self.hole_gap(k);
        h.radius + self.margin + 0.5 * clearance
    }

    fn ring(&self, k: usize) -> Vec<Complex64> {
        let h = self.holes[k];
        let r = self.ring_radius(k);
        (0..CYCLE_VERTICES)
            .map(|m| h.center + Complex64::from_polar(r, 2.0 * PI * m as f64 / CYCLE_VERTICES as f64))
            .collect()
    }

    /// One counterclockwise 64-gon per hole (punctures included), in hole
    /// order, each winding once around its own hole and around no other.
    pub fn homology_basis(&self) -> Result<Vec<Cycle>, DomainError> {
        (0..self.holes.len())
            .map(|k| {
                let mut vertices = self.ring(k);
                vertices.push(vertices[0]);
                let ok = vertices.windows(2).all(|w| self.contains_segment(w[0], w[1]));
                if !ok {
                    return Err(DomainError::Unencirclable(k));
                }
                Ok(Cycle {
                    vertices,
                    hole: Some(k),
                })
            })
            .collect()
    }

    /// Deterministic polygonal route from `z0` to `z1` inside the domain:
    /// the straight segment when it clears every hole, otherwise the shortest
    /// path in the visibility graph over the hole rings.
    pub fn connect(&self, z0: Complex64, z1: Complex64) -> Result<PathPolyline, DomainError> {
        for z in [z0, z1] {
            if !self.contains(z) {
                return Err(DomainError::NotInDomain(z));
            }
        }
        if self.contains_segment(z0, z1) {
            return Ok(PathPolyline::segment(z0, z1));
        }
        let mut nodes = vec![z0, z1];
        for k in 0..self.holes.len() {
            nodes.extend(self.ring(k).into_iter().filter(|p| self.contains(*p)));
        }
        shortest_visible_path(&nodes, |a, b| self.contains_segment(a, b))
            .map(PathPolyline::new)
            .ok_or(DomainError::Unreachable { from: z0, to: z1 })
    }

    /// Quasi-random interior points (Halton bases 2 and 3, starting at index
    /// `seed + 1`), mapped log-polar for concentric annuli, area-uniform for
    /// discs, affinely for rectangles, and by bounding-box rejection
    /// otherwise. Points failing `accept` are skipped.
    pub fn sample_points(&self, count: usize, seed: u64, accept: impl Fn(Complex64) -> bool) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(count);
        let mut index = seed + 1;
        let limit = index + 1000 * count as u64 + 1000;
        while out.len() < count && index < limit {
            let s = crate::sampling::radical_inverse(index, 2);
            let t = crate::sampling::radical_inverse(index, 3);
            index += 1;
            let z = self.map_unit_square(s, t);
            if self.contains(z) && accept(z) {
                out.push(z);
            }
        }
        out
    }

    fn map_unit_square(&self, s: f64, t: f64) -> Complex64 {
        if let (Some(h), Outer::Disc { center, radius }) = (self.concentric_hole(), self.outer) {
            let lo = (h.radius + self.margin).max(1e-300 + self.margin);
            let hi = radius - self.margin;
            let r = lo * (hi / lo).powf(s);
            return center + Complex64::from_polar(r, 2.0 * PI * t);
        }
        let (min, max) = match self.outer {
            Outer::Disc { center, radius } if self.holes.is_empty() => {
                return center + Complex64::from_polar(radius * s.sqrt(), 2.0 * PI * t);
            }
            _ => self.bounding_box(),
        };
        Complex64::new(min.re + s * (max.re - min.re), min.im + t * (max.im - min.im))
    }

    /// Parameter grid for meshes and sweeps: `nu * nv` points in row-major
    /// order (`v` outer). Log-polar for concentric annuli, an elliptical
    /// square-to-disc map for discs, Cartesian otherwise; `None` marks grid
    /// points outside the domain.
    pub fn parameter_grid(&self, nu: usize, nv: usize) -> Vec<Option<Complex64>> {
        let frac = |i: usize, n: usize| if n <= 1 { 0.5 } else { i as f64 / (n - 1) as f64 };
        let inset = 1e-9;
        let mut out = Vec::with_capacity(nu * nv);
        for j in 0..nv {
            for i in 0..nu {
                let (s, t) = (frac(i, nu), frac(j, nv));
                let z = if let (Some(h), Outer::Disc { center, radius }) = (self.concentric_hole(), self.outer) {
                    let lo = h.radius + self.margin;
                    let hi = radius - self.margin;
                    let (lo, hi) = (lo + inset * (hi - lo), hi - inset * (hi - lo));
                    let r = if lo > 0.0 { lo * (hi / lo).powf(s) } else { lo + s * (hi - lo) };
                    center + Complex64::from_polar(r, 2.0 * PI * t)
                } else {
                    match self.outer {
                        Outer::Disc { center, radius } if self.holes.is_empty() => {
                            let x = 2.0 * s - 1.0;
                            let y = 2.0 * t - 1.0;
                            let rr = (radius - self.margin) * (1.0 - inset);
                            center
                                + Complex64::new(
                                    x * (1.0 - 0.5 * y * y).sqrt(),
                                    y * (1.0 - 0.5 * x * x).sqrt(),
                                ) * rr
                        }
                        _ => {
                            let (min, max) = self.bounding_box();
                            let m = self.margin + inset * self.diameter();
                            Complex64::new(
                                min.re + m + s * (max.re - min.re - 2.0 * m),
                                min.im + m + t * (max.im - min.im - 2.0 * m),
                            )
                        }
                    }
                };
                out.push(self.contains(z).then_some(z));
            }
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    dist: f64,
    node: usize,
    key: (f64, f64),
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on (distance, lexicographic vertex)
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.key.0.total_cmp(&self.key.0))
            .then_with(|| other.key.1.total_cmp(&self.key.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn lex_less(a: Complex64, b: Complex64) -> bool {
    a.re < b.re || (a.re == b.re && a.im < b.im)
}

/// Dijkstra from `nodes[0]` to `nodes[1]` over the visibility graph.
fn shortest_visible_path(
    nodes: &[Complex64],
    visible: impl Fn(Complex64, Complex64) -> bool,
) -> Option<Vec<Complex64>> {
    let n = nodes.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev: Vec<Option<usize>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[0] = 0.0;
    heap.push(Entry {
        dist: 0.0,
        node: 0,
        key: (nodes[0].re, nodes[0].im),
    });
    while let Some(Entry { node: u, .. }) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        if u == 1 {
            break;
        }
        for v in 0..n {
            if done[v] || !visible(nodes[u], nodes[v]) {
                continue;
            }
            let alt = dist[u] + (nodes[v] - nodes[u]).norm();
            let better = alt < dist[v]
                || (alt == dist[v] && prev[v].is_some_and(|p| lex_less(nodes[u], nodes[p])));
            if better {
                dist[v] = alt;
                prev[v] = Some(u);
                heap.push(Entry {
                    dist: alt,
                    node: v,
                    key: (nodes[v].re, nodes[v].im),
                });
            }
        }
    }
    if !done[1] {
        return None;
    }
    let mut path = vec![nodes[1]];
    let mut cur = 1;
    while let Some(p) = prev[cur] {
        path.push(nodes[p]);
        cur = p;
    }
    path.reverse();
    Some(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn annulus() -> CircledDomain {
        CircledDomain::annulus(c(0.0, 0.0), 0.5, 2.0, 0.0).unwrap()
    }

    fn two_punctures() -> CircledDomain {
        CircledDomain::new(
            Outer::Disc {
                center: c(0.0, 0.0),
                radius: 2.0,
            },
            vec![Hole::puncture(c(-0.7, 0.0)), Hole::puncture(c(0.7, 0.3))],
            0.01,
        )
        .unwrap()
    }

    #[test]
    fn contains_examples() {
        let d = annulus();
        assert!(d.contains(c(1.0, 0.0)));
        assert!(!d.contains(c(0.1, 0.0)));
        assert!(!d.contains(c(3.0, 0.0)));
        assert!(!d.contains(c(0.5, 0.0)));
        assert!(!d.contains(c(2.0, 0.0)));
    }

    #[test]
    fn margin_shrinks_the_domain() {
        let d = CircledDomain::annulus(c(0.0, 0.0), 0.5, 2.0, 0.1).unwrap();
        assert!(!d.contains(c(0.55, 0.0)));
        assert!(d.contains(c(0.61, 0.0)));
        assert!(!d.contains(c(1.95, 0.0)));
    }

    #[test]
    fn rejects_invalid_domains() {
        let outer = Outer::Disc {
            center: c(0.0, 0.0),
            radius: 1.0,
        };
        assert!(matches!(
            CircledDomain::new(outer, vec![Hole { center: c(0.9, 0.0), radius: 0.2 }], 0.0),
            Err(DomainError::InvalidHole { index: 0, .. })
        ));
        assert!(matches!(
            CircledDomain::new(
                outer,
                vec![
                    Hole { center: c(0.2, 0.0), radius: 0.2 },
                    Hole { center: c(-0.1, 0.0), radius: 0.2 }
                ],
                0.0
            ),
            Err(DomainError::Overlap { a: 0, b: 1 })
        ));
        assert!(matches!(
            CircledDomain::annulus(c(0.0, 0.0), 0.5, 2.0, 0.8),
            Err(DomainError::Margin { .. })
        ));
        assert!(CircledDomain::disc(c(0.0, 0.0), -1.0).is_err());
        assert!(CircledDomain::annulus(c(0.0, 0.0), 0.5, 2.0, -0.1).is_err());
    }

    #[test]
    fn homology_basis_examples() {
        assert!(CircledDomain::disc(c(0.0, 0.0), 1.0).unwrap().homology_basis().unwrap().is_empty());
        let basis = annulus().homology_basis().unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].vertices.len(), CYCLE_VERTICES + 1);
        assert_eq!(basis[0].winding_number(c(0.0, 0.0)), 1);
        let basis = two_punctures().homology_basis().unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0].hole, Some(0));
        assert_eq!(basis[1].hole, Some(1));
    }

    #[test]
    fn basis_winding_numbers() {
        let d = CircledDomain::new(
            Outer::Rectangle {
                min: c(-3.0, -2.0),
                max: c(3.0, 2.0),
            },
            vec![
                Hole { center: c(-1.5, 0.0), radius: 0.5 },
                Hole { center: c(1.0, 0.5), radius: 0.3 },
                Hole::puncture(c(1.0, -1.0)),
            ],
            0.05,
        )
        .unwrap();
        let basis = d.homology_basis().unwrap();
        assert_eq!(basis.len(), d.holes().len());
        for (k, cycle) in basis.iter().enumerate() {
            for (j, h) in d.holes().iter().enumerate() {
                let expect = i32::from(j == k);
                assert_eq!(cycle.winding_number(h.center), expect, "cycle {k} hole {j}");
            }
            assert!(cycle.segments().all(|(a, b)| d.contains_segment(a, b)));
        }
    }

    #[test]
    fn connect_examples() {
        let d = annulus();
        let p = d.connect(c(1.0, 0.0), c(1.9, 0.0)).unwrap();
        assert_eq!(p.vertices, vec![c(1.0, 0.0), c(1.9, 0.0)]);

        let p = d.connect(c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
        assert!(p.vertices.len() > 2);
        for (a, b) in p.segments() {
            for k in 0..=1000 {
                let t = k as f64 / 1000.0;
                assert!(d.contains(a + (b - a) * t));
            }
        }
        assert_eq!(p.start(), c(1.0, 0.0));
        assert_eq!(p.end(), c(-1.0, 0.0));
        // deterministic
        assert_eq!(p, d.connect(c(1.0, 0.0), c(-1.0, 0.0)).unwrap());

        let disc = CircledDomain::disc(c(0.0, 0.0), 1.0).unwrap();
        let p = disc.connect(c(-0.9, 0.1), c(0.5, -0.7)).unwrap();
        assert_eq!(p.vertices.len(), 2);
    }

    #[test]
    fn connect_rejects_outside_points() {
        let d = annulus();
        assert!(matches!(d.connect(c(0.0, 0.0), c(1.0, 0.0)), Err(DomainError::NotInDomain(_))));
    }

    #[test]
    fn connect_around_several_holes() {
        let d = two_punctures();
        let p = d.connect(c(-1.5, 0.0), c(1.5, 0.3)).unwrap();
        assert!(d.contains_path(&p));
        let p = d.connect(c(-1.2, 0.0), c(-0.2, 0.0)).unwrap();
        assert!(d.contains_path(&p));
        assert!(p.vertices.len() > 2);
    }

    #[test]
    fn samples_stay_inside() {
        for d in [annulus(), two_punctures(), CircledDomain::disc(c(1.0, 1.0), 0.5).unwrap()] {
            let pts = d.sample_points(500, 0, |_| true);
            assert_eq!(pts.len(), 500);
            assert!(pts.iter().all(|z| d.contains(*z)));
        }
    }

    #[test]
    fn parameter_grid_covers_annulus_without_holes() {
        let d = CircledDomain::annulus(c(0.0, 0.0), 0.01, 100.0, 1e-4).unwrap();
        let g = d.parameter_grid(64, 64);
        assert_eq!(g.len(), 4096);
        assert!(g.iter().all(|z| z.is_some()));
        let disc = CircledDomain::disc(c(0.0, 0.0), 2.0).unwrap();
        assert!(disc.parameter_grid(16, 16).iter().all(|z| z.is_some()));
    }

    proptest! {
        #[test]
        fn connect_paths_clear_margins(a in 0.0..std::f64::consts::TAU, b in 0.0..std::f64::consts::TAU, ra in 0.6f64..1.9, rb in 0.6f64..1.9) {
            let d = CircledDomain::annulus(c(0.0, 0.0), 0.5, 2.0, 0.05).unwrap();
            let z0 = Complex64::from_polar(ra, a);
            let z1 = Complex64::from_polar(rb, b);
            prop_assume!(d.contains(z0) && d.contains(z1));
            let p = d.connect(z0, z1).unwrap();
            prop_assert!(d.contains_path(&p));
            prop_assert_eq!(p.start(), z0);
            prop_assert_eq!(p.end(), z1);
        }
    }
}
