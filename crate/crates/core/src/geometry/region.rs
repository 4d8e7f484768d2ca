use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Slack used for membership tests, in bits.
pub const CONTAINMENT_SLACK: f64 = 1e-9;

/// Points closer than this are merged before hulling.
const MERGE_EPS: f64 = 1e-12;

/// Box used to detect unbounded half-plane intersections.
const FAR: f64 = 1e9;

/// `a·R₁ + b·R₂ <= c`, normalized so that `max(|a|, |b|) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct HalfPlane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl From<[f64; 3]> for HalfPlane {
    fn from([a, b, c]: [f64; 3]) -> Self {
        HalfPlane { a, b, c }
    }
}

impl From<HalfPlane> for [f64; 3] {
    fn from(h: HalfPlane) -> Self {
        [h.a, h.b, h.c]
    }
}

impl HalfPlane {
    /// Builds a normalized half-plane. Returns `None` for a zero normal.
    pub fn new(a: f64, b: f64, c: f64) -> Option<Self> {
        let m = a.abs().max(b.abs());
        if m == 0.0 || !m.is_finite() {
            return None;
        }
        Some(HalfPlane {
            a: a / m,
            b: b / m,
            c: c / m,
        })
    }

    /// Signed violation `a·x + b·y - c`; positive means outside.
    #[inline]
    pub fn excess(&self, p: Point) -> f64 {
        self.a * p[0] + self.b * p[1] - self.c
    }

    #[inline]
    pub fn contains(&self, p: Point, slack: f64) -> bool {
        self.excess(p) <= slack
    }

    fn intersect(&self, other: &HalfPlane) -> Option<Point> {
        let det = self.a * other.b - self.b * other.a;
        if det.abs() < 1e-14 {
            return None;
        }
        let x = (self.c * other.b - self.b * other.c) / det;
        let y = (self.a * other.c - self.c * other.a) / det;
        Some([x, y])
    }
}

/// A bounded convex rate region in the nonnegative quadrant, stored both as
/// its counterclockwise vertex list (starting at the origin when the region
/// is nonempty) and as the half-planes of its edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    halfplanes: Vec<HalfPlane>,
    vertices: Vec<Point>,
}

#[inline]
fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Andrew's monotone chain; counterclockwise, collinear points dropped.
pub(crate) fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.retain(|p| p[0].is_finite() && p[1].is_finite());
    // Snap nearly equal abscissae so ties sort by ordinate; otherwise
    // round-off can interleave two vertical stacks and break the chain.
    pts.sort_by(|p, q| p[0].total_cmp(&q[0]));
    let mut anchor = f64::NEG_INFINITY;
    for p in &mut pts {
        if p[0] - anchor <= MERGE_EPS {
            p[0] = anchor;
        } else {
            anchor = p[0];
        }
    }
    pts.sort_by(|p, q| p[0].total_cmp(&q[0]).then(p[1].total_cmp(&q[1])));
    pts.dedup_by(|q, p| dist(*p, *q) <= MERGE_EPS);
    if pts.len() <= 2 {
        return pts;
    }
    let turn = |o: Point, a: Point, b: Point| {
        let scale = dist(o, a) * dist(o, b);
        cross(o, a, b) > 1e-13 * scale
    };
    let mut lower: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && !turn(lower[lower.len() - 2], lower[lower.len() - 1], p) {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && !turn(upper[upper.len() - 2], upper[upper.len() - 1], p) {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

impl RateRegion {
    pub fn empty() -> Self {
        RateRegion {
            halfplanes: Vec::new(),
            vertices: Vec::new(),
        }
    }

    /// Builds the region from an already convex counterclockwise vertex
    /// list; rotates it to start at the vertex nearest the origin.
    fn from_hull(mut hull: Vec<Point>) -> Self {
        if hull.is_empty() {
            return Self::empty();
        }
        let start = hull
            .iter()
            .enumerate()
            .min_by(|(_, p), (_, q)| (p[0] + p[1]).total_cmp(&(q[0] + q[1])))
            .map(|(i, _)| i)
            .unwrap_or(0);
        hull.rotate_left(start);
        let n = hull.len();
        let mut halfplanes = Vec::with_capacity(n);
        if n >= 3 {
            for i in 0..n {
                let p = hull[i];
                let q = hull[(i + 1) % n];
                let (nx, ny) = (q[1] - p[1], p[0] - q[0]);
                if let Some(h) = HalfPlane::new(nx, ny, nx * p[0] + ny * p[1]) {
                    halfplanes.push(h);
                }
            }
        }
        RateRegion {
            halfplanes,
            vertices: hull,
        }
    }

    /// Smallest down-closed convex set containing `points` and the origin:
    /// the hull of the points, their projections on both axes and `(0,0)`.
    /// Every rate region is down-closed, so this is the hull of a union of
    /// regions when fed their vertices.
    pub fn downward_hull<I: IntoIterator<Item = Point>>(points: I) -> Self {
        let mut pts = vec![[0.0, 0.0]];
        for p in points {
            let p = [p[0].max(0.0), p[1].max(0.0)];
            pts.push(p);
            pts.push([p[0], 0.0]);
            pts.push([0.0, p[1]]);
        }
        Self::from_hull(convex_hull(pts))
    }

    /// Intersection of the half-planes with the nonnegative quadrant.
    /// Returns an empty region when infeasible and an error when unbounded.
    pub fn from_halfplanes(hs: &[HalfPlane]) -> Result<Self> {
        let mut all: Vec<HalfPlane> = hs.to_vec();
        all.push(HalfPlane { a: -1.0, b: 0.0, c: 0.0 });
        all.push(HalfPlane { a: 0.0, b: -1.0, c: 0.0 });
        all.push(HalfPlane { a: 1.0, b: 0.0, c: FAR });
        all.push(HalfPlane { a: 0.0, b: 1.0, c: FAR });
        let mut pts = Vec::new();
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                if let Some(p) = all[i].intersect(&all[j]) {
                    let scale = 1.0 + p[0].abs().max(p[1].abs());
                    if all.iter().all(|h| h.contains(p, 1e-10 * scale)) {
                        pts.push(p);
                    }
                }
            }
        }
        if pts.iter().any(|p| p[0] >= FAR * 0.5 || p[1] >= FAR * 0.5) {
            return Err(Error::UnboundedProjection);
        }
        Ok(Self::from_hull(convex_hull(pts)))
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn halfplanes(&self) -> &[HalfPlane] {
        &self.halfplanes
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_point(&self, p: Point, slack: f64) -> bool {
        match self.vertices.len() {
            0 => false,
            1 => dist(self.vertices[0], p) <= slack,
            2 => segment_distance(p, self.vertices[0], self.vertices[1]) <= slack,
            _ => self.halfplanes.iter().all(|h| h.contains(p, slack)),
        }
    }

    /// True when every vertex of `other` lies in `self` (up to `slack`).
    pub fn contains_region(&self, other: &RateRegion, slack: f64) -> bool {
        other.vertices.iter().all(|&v| self.contains_point(v, slack))
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        let mut s = 0.0;
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            s += p[0] * q[1] - q[0] * p[1];
        }
        0.5 * s
    }

    /// Support function `max a·R₁ + b·R₂` over the region.
    pub fn support(&self, a: f64, b: f64) -> f64 {
        self.vertices
            .iter()
            .map(|v| a * v[0] + b * v[1])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_r1(&self) -> f64 {
        self.support(1.0, 0.0)
    }

    pub fn max_r2(&self) -> f64 {
        self.support(0.0, 1.0)
    }

    pub fn max_sum_rate(&self) -> f64 {
        self.support(1.0, 1.0)
    }

    /// Largest `R₂` with `(r1, R₂)` in the region; `None` outside the
    /// region's `R₁` range.
    pub fn max_r2_at(&self, r1: f64) -> Option<f64> {
        let n = self.vertices.len();
        if n == 0 {
            return None;
        }
        let tol = 1e-12 * (1.0 + r1.abs());
        let mut best: Option<f64> = None;
        let mut consider = |y: f64| best = Some(best.map_or(y, |b: f64| b.max(y)));
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let (lo, hi) = if p[0] <= q[0] { (p, q) } else { (q, p) };
            if r1 < lo[0] - tol || r1 > hi[0] + tol {
                continue;
            }
            if hi[0] - lo[0] <= tol {
                consider(lo[1].max(hi[1]));
            } else {
                let t = ((r1 - lo[0]) / (hi[0] - lo[0])).clamp(0.0, 1.0);
                consider(lo[1] + t * (hi[1] - lo[1]));
            }
        }
        if n == 1 && (self.vertices[0][0] - r1).abs() <= tol {
            consider(self.vertices[0][1]);
        }
        best
    }

    /// Euclidean distance from `p` to the region (zero inside).
    pub fn distance_to(&self, p: Point) -> f64 {
        let n = self.vertices.len();
        match n {
            0 => f64::INFINITY,
            1 => dist(p, self.vertices[0]),
            _ => {
                if n >= 3 && self.halfplanes.iter().all(|h| h.contains(p, 0.0)) {
                    return 0.0;
                }
                (0..n)
                    .map(|i| segment_distance(p, self.vertices[i], self.vertices[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }

    /// Hausdorff distance between two convex regions. For convex sets the
    /// directed distance is attained at a vertex.
    pub fn hausdorff(&self, other: &RateRegion) -> f64 {
        let directed = |a: &RateRegion, b: &RateRegion| {
            a.vertices
                .iter()
                .map(|&v| b.distance_to(v))
                .fold(0.0, f64::max)
        };
        directed(self, other).max(directed(other, self))
    }
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    if len2 == 0.0 {
        return dist(p, a);
    }
    let t = (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0);
    dist(p, [a[0] + t * d[0], a[1] + t * d[1]])
}

/// Convex hull of the union of the given regions.
pub fn union_over_sweep(regions: &[RateRegion]) -> Result<RateRegion> {
    if regions.is_empty() {
        return Err(Error::domain("union over an empty list of regions"));
    }
    Ok(RateRegion::downward_hull(
        regions.iter().flat_map(|r| r.vertices.iter().copied()),
    ))
}

/// Exact area of the (generally nonconvex) union of down-closed convex
/// regions, by integrating the upper envelope of their boundaries.
pub fn union_area(regions: &[RateRegion]) -> f64 {
    let regions: Vec<&RateRegion> = regions.iter().filter(|r| r.area() > 0.0).collect();
    let mut xs: Vec<f64> = regions
        .iter()
        .flat_map(|r| r.vertices.iter().map(|v| v[0]))
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|b, a| (*b - *a).abs() <= 1e-14);
    let extents: Vec<f64> = regions.iter().map(|r| r.max_r1()).collect();

    let mut area = 0.0;
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let width = x1 - x0;
        if width <= 0.0 {
            continue;
        }
        // Each active region is linear on (x0, x1): y = y0 + slope·t, t in [0, 1].
        let mut lines: Vec<(f64, f64)> = Vec::new();
        for (r, &ext) in regions.iter().zip(&extents) {
            if ext < x1 - 1e-14 {
                continue;
            }
            if let (Some(y0), Some(y1)) = (r.max_r2_at(x0), r.max_r2_at(x1)) {
                lines.push((y1 - y0, y0));
            }
        }
        area += width * upper_envelope_integral(&mut lines);
    }
    area
}

/// `∫₀¹ max_i (m_i·t + c_i) dt` for a set of lines `(m, c)`.
fn upper_envelope_integral(lines: &mut [(f64, f64)]) -> f64 {
    if lines.is_empty() {
        return 0.0;
    }
    lines.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    // Keep the highest intercept per slope.
    let mut uniq: Vec<(f64, f64)> = Vec::with_capacity(lines.len());
    for &l in lines.iter() {
        if let Some(last) = uniq.last_mut() {
            if last.0 == l.0 {
                *last = l;
                continue;
            }
        }
        uniq.push(l);
    }
    let cross_t = |a: (f64, f64), b: (f64, f64)| (a.1 - b.1) / (b.0 - a.0);
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(uniq.len());
    for l in uniq {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            if cross_t(a, l) <= cross_t(a, b) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(l);
    }
    // Envelope is hull[0] up to the first crossing, then hull[1], ...
    let mut total = 0.0;
    let mut t_prev = 0.0;
    for i in 0..hull.len() {
        let t_next = if i + 1 < hull.len() {
            cross_t(hull[i], hull[i + 1]).clamp(0.0, 1.0)
        } else {
            1.0
        };
        if t_next > t_prev {
            let (m, c) = hull[i];
            total += (t_next - t_prev) * (c + 0.5 * m * (t_prev + t_next));
            t_prev = t_next;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(side: f64) -> RateRegion {
        RateRegion::downward_hull([[side, side]])
    }

    #[test]
    fn downward_hull_of_single_point_is_rectangle() {
        let r = RateRegion::downward_hull([[2.0, 1.0]]);
        assert_eq!(r.vertices(), &[[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]]);
        assert_eq!(r.halfplanes().len(), 4);
        assert!((r.area() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn halfplane_enumeration_and_unbounded() {
        let hs = [
            HalfPlane::new(1.0, 0.0, 1.0).unwrap(),
            HalfPlane::new(0.0, 1.0, 1.0).unwrap(),
            HalfPlane::new(1.0, 1.0, 1.5).unwrap(),
        ];
        let r = RateRegion::from_halfplanes(&hs).unwrap();
        assert_eq!(r.vertices().len(), 5);
        assert!((r.area() - (1.0 - 0.125)).abs() < 1e-12);
        assert_eq!(
            RateRegion::from_halfplanes(&hs[..1]),
            Err(Error::UnboundedProjection)
        );
        let infeasible = [HalfPlane::new(-1.0, -1.0, -3.0).unwrap(), hs[0], hs[1]];
        assert!(RateRegion::from_halfplanes(&infeasible).unwrap().is_empty());
    }

    #[test]
    fn containment_support_and_hausdorff() {
        let a = square(1.0);
        let b = square(2.0);
        assert!(b.contains_region(&a, 0.0));
        assert!(!a.contains_region(&b, 1e-9));
        assert_eq!(b.max_sum_rate(), 4.0);
        assert!((a.hausdorff(&b) - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(a.hausdorff(&a), 0.0);
        assert_eq!(a.max_r2_at(0.5), Some(1.0));
        assert_eq!(a.max_r2_at(1.5), None);
    }

    #[test]
    fn union_of_one_region_is_itself() {
        let r = RateRegion::downward_hull([[1.0, 2.0], [2.0, 1.0]]);
        let u = union_over_sweep(std::slice::from_ref(&r)).unwrap();
        assert_eq!(u, r);
        assert!(union_over_sweep(&[]).is_err());
    }

    #[test]
    fn union_area_of_two_rectangles() {
        let a = RateRegion::downward_hull([[2.0, 1.0]]);
        let b = RateRegion::downward_hull([[1.0, 2.0]]);
        // L-shaped union: 2 + 2 - 1.
        assert!((union_area(&[a.clone(), b.clone()]) - 3.0).abs() < 1e-12);
        let hull = union_over_sweep(&[a, b]).unwrap();
        assert!((hull.area() - 3.5).abs() < 1e-12);
    }

    #[test]
    fn union_area_with_crossing_edges() {
        // Two triangles x + 2y <= 2 and 2x + y <= 2 cross at (2/3, 2/3).
        let a = RateRegion::downward_hull([[2.0, 0.0], [0.0, 1.0]]);
        let b = RateRegion::downward_hull([[1.0, 0.0], [0.0, 2.0]]);
        let exact = 1.0 + 1.0 - (2.0 / 3.0);
        assert!((union_area(&[a, b]) - exact).abs() < 1e-12);
    }
}
