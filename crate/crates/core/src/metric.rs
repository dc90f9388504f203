//! Planar points, sampled compact sets, regions and the distances between them.

use std::collections::{HashMap, HashSet};
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homeo::{Homeo, PlanarMap};
use crate::par::{self, Exec};
use crate::starlike::StarlikeSet;

/// A point (or vector) of the plane. Serialized as `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2 { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    #[inline]
    pub fn polar(r: f64, theta: f64) -> Self {
        Point2::new(r * theta.cos(), r * theta.sin())
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    #[inline]
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Angle in `[0, 2π)`.
    #[inline]
    pub fn angle(self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            a + std::f64::consts::TAU
        } else {
            a
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Bitwise identity, the equality used for "fixed pointwise".
    #[inline]
    pub fn same_bits(self, other: Point2) -> bool {
        self.x.to_bits() == other.x.to_bits() && self.y.to_bits() == other.y.to_bits()
    }

    pub(crate) fn bits(self) -> (u64, u64) {
        (self.x.to_bits(), self.y.to_bits())
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

/// Axis-aligned bounding box. The empty box has `min > max`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BBox {
    pub min: Point2,
    pub max: Point2,
}

impl BBox {
    pub const EMPTY: BBox = BBox {
        min: Point2::new(f64::INFINITY, f64::INFINITY),
        max: Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    };

    pub fn around(center: Point2, radius: f64) -> BBox {
        BBox {
            min: Point2::new(center.x - radius, center.y - radius),
            max: Point2::new(center.x + radius, center.y + radius),
        }
    }

    pub fn of_points<'a>(points: impl IntoIterator<Item = &'a Point2>) -> BBox {
        points.into_iter().fold(BBox::EMPTY, |b, p| b.including(*p))
    }

    pub fn is_empty(&self) -> bool {
        self.min.x > self.max.x || self.min.y > self.max.y
    }

    pub fn including(self, p: Point2) -> BBox {
        BBox {
            min: Point2::new(self.min.x.min(p.x), self.min.y.min(p.y)),
            max: Point2::new(self.max.x.max(p.x), self.max.y.max(p.y)),
        }
    }

    pub fn union(self, o: BBox) -> BBox {
        if self.is_empty() {
            return o;
        }
        if o.is_empty() {
            return self;
        }
        self.including(o.min).including(o.max)
    }

    pub fn intersect(self, o: BBox) -> BBox {
        BBox {
            min: Point2::new(self.min.x.max(o.min.x), self.min.y.max(o.min.y)),
            max: Point2::new(self.max.x.min(o.max.x), self.max.y.min(o.max.y)),
        }
    }

    pub fn expand(self, r: f64) -> BBox {
        if self.is_empty() {
            return self;
        }
        BBox {
            min: Point2::new(self.min.x - r, self.min.y - r),
            max: Point2::new(self.max.x + r, self.max.y + r),
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn corners(&self) -> [Point2; 4] {
        [
            self.min,
            Point2::new(self.max.x, self.min.y),
            self.max,
            Point2::new(self.min.x, self.max.y),
        ]
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

/// A finite sample of a compact set with a guaranteed density: every point of
/// the underlying set lies within `mesh` of some sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompactSample {
    points: Vec<Point2>,
    mesh: f64,
}

impl CompactSample {
    /// Validates finiteness and positivity and drops duplicates (up to 1e-12),
    /// keeping first occurrences in order.
    pub fn new(points: Vec<Point2>, mesh: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        if !(mesh > 0.0) || !mesh.is_finite() {
            return Err(Error::Invalid(format!("mesh must be positive, got {mesh}")));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::Invalid(format!("non-finite sample point {p:?}")));
        }
        let mut seen = HashSet::with_capacity(points.len());
        let points: Vec<Point2> = points
            .into_iter()
            .filter(|p| seen.insert(((p.x * 1e12).round() as i64, (p.y * 1e12).round() as i64)))
            .collect();
        Ok(CompactSample { points, mesh })
    }

    pub fn singleton(p: Point2) -> Self {
        CompactSample { points: vec![p], mesh: f64::MIN_POSITIVE }
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn bbox(&self) -> BBox {
        BBox::of_points(&self.points)
    }

    /// Image under `f`; the mesh is scaled by `stretch` (an upper bound on the
    /// local expansion of `f`, at least 1 is enforced).
    pub fn mapped(&self, f: impl Fn(Point2) -> Point2, stretch: f64) -> CompactSample {
        CompactSample {
            points: self.points.iter().map(|p| f(*p)).collect(),
            mesh: self.mesh * stretch.max(1.0),
        }
    }
}

/// A union of equal-radius closed discs with a bucket index, used for
/// sampled neighbourhoods.
#[derive(Clone, Debug)]
pub struct DiscUnion {
    radius: f64,
    centers: Vec<Point2>,
    index: SpatialIndex,
}

impl DiscUnion {
    pub fn new(centers: Vec<Point2>, radius: f64) -> Self {
        let index = SpatialIndex::new(&centers, radius.max(1e-9));
        DiscUnion { radius, centers, index }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn centers(&self) -> &[Point2] {
        &self.centers
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.index.any_within(&self.centers, p, self.radius)
    }
}

impl PartialEq for DiscUnion {
    fn eq(&self, o: &Self) -> bool {
        self.radius == o.radius && self.centers == o.centers
    }
}

/// A membership predicate on the plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Region {
    /// The whole plane.
    Plane,
    /// Closed disc.
    Disc { center: Point2, radius: f64 },
    /// Closed starlike body.
    Starlike(StarlikeSet),
    Union { parts: Vec<Region> },
    Intersection { parts: Vec<Region> },
    /// `{ p : map(p) ∈ region }`, i.e. the preimage of `region` under `map`.
    Pullback { region: Box<Region>, map: Box<Homeo> },
    #[serde(skip)]
    Discs(DiscUnion),
}

impl Region {
    pub fn disc(center: Point2, radius: f64) -> Region {
        Region::Disc { center, radius }
    }

    pub fn empty() -> Region {
        Region::Union { parts: Vec::new() }
    }

    pub fn pullback(region: Region, map: Homeo) -> Region {
        if matches!(map, Homeo::Identity) {
            return region;
        }
        Region::Pullback { region: Box::new(region), map: Box::new(map) }
    }

    pub fn contains(&self, p: Point2) -> bool {
        match self {
            Region::Plane => true,
            Region::Disc { center, radius } => p.dist(*center) <= *radius,
            Region::Starlike(s) => s.contains(p),
            Region::Union { parts } => parts.iter().any(|r| r.contains(p)),
            Region::Intersection { parts } => parts.iter().all(|r| r.contains(p)),
            Region::Pullback { region, map } => region.contains(map.apply(p)),
            Region::Discs(d) => d.contains(p),
        }
    }

    /// Bounding box, `None` when unbounded.
    pub fn bbox(&self) -> Option<BBox> {
        match self {
            Region::Plane => None,
            Region::Disc { center, radius } => Some(BBox::around(*center, *radius)),
            Region::Starlike(s) => Some(BBox::around(s.origin, s.radius.max_radius())),
            Region::Union { parts } => parts
                .iter()
                .try_fold(BBox::EMPTY, |acc, r| r.bbox().map(|b| acc.union(b))),
            Region::Intersection { parts } => {
                let mut acc: Option<BBox> = None;
                for b in parts.iter().filter_map(|r| r.bbox()) {
                    acc = Some(acc.map_or(b, |a| a.intersect(b)));
                }
                acc
            }
            Region::Pullback { region, map } => map.preimage_bbox(region.bbox()?),
            Region::Discs(d) => Some(BBox::of_points(&d.centers).expand(d.radius)),
        }
    }

    /// Points known to lie in the region (used to seed nets of thin regions).
    pub fn anchors(&self) -> Vec<Point2> {
        match self {
            Region::Plane => Vec::new(),
            Region::Disc { center, .. } => vec![*center],
            Region::Starlike(s) => vec![s.origin],
            Region::Union { parts } => parts.iter().flat_map(|r| r.anchors()).collect(),
            Region::Intersection { parts } => parts
                .iter()
                .flat_map(|r| r.anchors())
                .filter(|p| self.contains(*p))
                .collect(),
            Region::Pullback { region, map } => region
                .anchors()
                .into_iter()
                .map(|p| map.apply_inverse(p))
                .filter(|p| self.contains(*p))
                .collect(),
            Region::Discs(d) => d.centers.clone(),
        }
    }

    /// Closed boundary polylines for drawing. Unions draw every part.
    pub fn outlines(&self, per_circle: usize) -> Vec<Vec<Point2>> {
        match self {
            Region::Plane | Region::Discs(_) => Vec::new(),
            Region::Disc { center, radius } => {
                let n = per_circle.max(8);
                vec![(0..n)
                    .map(|k| *center + Point2::polar(*radius, std::f64::consts::TAU * k as f64 / n as f64))
                    .collect()]
            }
            Region::Starlike(s) => vec![s.boundary(per_circle)],
            Region::Union { parts } => parts.iter().flat_map(|r| r.outlines(per_circle)).collect(),
            Region::Intersection { parts } => {
                parts.first().map(|r| r.outlines(per_circle)).unwrap_or_default()
            }
            Region::Pullback { region, map } => region
                .outlines(per_circle)
                .into_iter()
                .map(|line| line.into_iter().map(|p| map.apply_inverse(p)).collect())
                .collect(),
        }
    }
}

/// Uniform bucket grid over a point set.
#[derive(Clone, Debug)]
pub struct SpatialIndex {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<u32>>,
    bbox: BBox,
}

impl SpatialIndex {
    pub fn new(points: &[Point2], cell: f64) -> Self {
        assert!(cell > 0.0, "cell size must be positive");
        let mut buckets: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            buckets.entry(Self::key_for(cell, *p)).or_default().push(i as u32);
        }
        SpatialIndex { cell, buckets, bbox: BBox::of_points(points) }
    }

    fn key_for(cell: f64, p: Point2) -> (i64, i64) {
        ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64)
    }

    /// Calls `f(i)` for every indexed point within `r` of `p`.
    pub fn for_each_within(&self, points: &[Point2], p: Point2, r: f64, mut f: impl FnMut(usize)) {
        let (kx, ky) = Self::key_for(self.cell, p);
        let span = (r / self.cell).ceil() as i64;
        for dx in -span..=span {
            for dy in -span..=span {
                if let Some(bucket) = self.buckets.get(&(kx + dx, ky + dy)) {
                    for &i in bucket {
                        if points[i as usize].dist(p) <= r {
                            f(i as usize);
                        }
                    }
                }
            }
        }
    }

    pub fn any_within(&self, points: &[Point2], p: Point2, r: f64) -> bool {
        let (kx, ky) = Self::key_for(self.cell, p);
        let span = (r / self.cell).ceil() as i64;
        for dx in -span..=span {
            for dy in -span..=span {
                if let Some(bucket) = self.buckets.get(&(kx + dx, ky + dy)) {
                    if bucket.iter().any(|&i| points[i as usize].dist(p) <= r) {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Nearest indexed point and its distance; `None` for an empty index.
    pub fn nearest(&self, points: &[Point2], p: Point2) -> Option<(usize, f64)> {
        if self.buckets.is_empty() {
            return None;
        }
        let (kx, ky) = Self::key_for(self.cell, p);
        let far = self.bbox.expand(self.cell);
        let max_ring = {
            let dx = (p.x - far.min.x).abs().max((p.x - far.max.x).abs());
            let dy = (p.y - far.min.y).abs().max((p.y - far.max.y).abs());
            (dx.max(dy) / self.cell).ceil() as i64 + 1
        };
        // Past this many rings a linear scan is cheaper.
        let ring_budget = (self.buckets.len() as f64).sqrt() as i64 + 2;
        let mut best: Option<(usize, f64)> = None;
        for ring in 0..=max_ring {
            if let Some((_, d)) = best {
                if (ring - 1) as f64 * self.cell > d {
                    return best;
                }
            }
            if ring > ring_budget {
                return Self::scan(points, p);
            }
            let mut visit = |cx: i64, cy: i64| {
                if let Some(bucket) = self.buckets.get(&(cx, cy)) {
                    for &i in bucket {
                        let d = points[i as usize].dist(p);
                        if best.is_none_or(|(bi, bd)| d < bd || (d == bd && (i as usize) < bi)) {
                            best = Some((i as usize, d));
                        }
                    }
                }
            };
            if ring == 0 {
                visit(kx, ky);
                continue;
            }
            for d in -ring..=ring {
                visit(kx + d, ky - ring);
                visit(kx + d, ky + ring);
            }
            for d in -ring + 1..ring {
                visit(kx - ring, ky + d);
                visit(kx + ring, ky + d);
            }
        }
        best
    }

    fn scan(points: &[Point2], p: Point2) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, q) in points.iter().enumerate() {
            let d = q.dist(p);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        best
    }
}

/// Convex hull (Andrew's monotone chain), counter-clockwise, no collinear points.
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| a.same_bits(*b));
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: Point2, a: Point2, b: Point2| (a - o).cross(b - o);
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Maximum pairwise distance of a point list. The maximum is attained on the
/// convex hull, so only hull vertices are compared.
pub fn diameter_of(points: &[Point2]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    let hull = convex_hull(points);
    let mut best = 0.0f64;
    for i in 0..hull.len() {
        for j in i + 1..hull.len() {
            best = best.max(hull[i].dist(hull[j]));
        }
    }
    Ok(best)
}

pub fn diameter(s: &CompactSample) -> Result<f64> {
    diameter_of(s.points())
}

/// Symmetric Hausdorff distance between two samples.
pub fn hausdorff(s: &CompactSample, t: &CompactSample) -> Result<f64> {
    hausdorff_with(Exec::default(), s, t)
}

pub fn hausdorff_with(exec: Exec, s: &CompactSample, t: &CompactSample) -> Result<f64> {
    if s.is_empty() || t.is_empty() {
        return Err(Error::EmptySet);
    }
    let directed = |a: &CompactSample, b: &CompactSample| {
        let cell = index_cell(b);
        let index = SpatialIndex::new(b.points(), cell);
        par::max_f64(exec, a.points(), |p| {
            index.nearest(b.points(), *p).map(|(_, d)| d).unwrap_or(f64::INFINITY)
        })
    };
    Ok(directed(s, t).max(directed(t, s)))
}

fn index_cell(s: &CompactSample) -> f64 {
    let b = s.bbox();
    let extent = b.width().max(b.height());
    let guess = extent / (s.len() as f64).sqrt().max(1.0);
    guess.max(extent * 1e-6).max(1e-12)
}

/// A sample of a bounded region with density `mesh`.
///
/// The plane is cut into lattice cells of side `mesh/√2` anchored at the
/// origin; each cell that meets the region contributes one sample found
/// among its probes (anchors first, then a 5×5 probe pattern). Every region
/// point is then within one cell diagonal, `mesh`, of a sample.
pub fn epsilon_net(region: &Region, mesh: f64) -> Result<CompactSample> {
    epsilon_net_with(Exec::default(), region, mesh)
}

pub fn epsilon_net_with(exec: Exec, region: &Region, mesh: f64) -> Result<CompactSample> {
    if !(mesh > 0.0) || !mesh.is_finite() {
        return Err(Error::Invalid(format!("mesh must be positive, got {mesh}")));
    }
    let bbox = region.bbox().ok_or(Error::Unbounded)?;
    if bbox.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let cell = mesh / std::f64::consts::SQRT_2;
    let ix0 = (bbox.min.x / cell).floor() as i64;
    let ix1 = (bbox.max.x / cell).floor() as i64;
    let iy0 = (bbox.min.y / cell).floor() as i64;
    let iy1 = (bbox.max.y / cell).floor() as i64;
    let cells = (ix1 - ix0 + 1) as f64 * (iy1 - iy0 + 1) as f64;
    if cells > 5e7 {
        return Err(Error::Invalid(format!("net too large: {cells} cells at mesh {mesh}")));
    }

    let mut anchors: HashMap<(i64, i64), Vec<Point2>> = HashMap::new();
    for a in region.anchors() {
        if a.is_finite() {
            let key = ((a.x / cell).floor() as i64, (a.y / cell).floor() as i64);
            anchors.entry(key).or_default().push(a);
        }
    }

    const PROBES: [f64; 5] = [0.5, 0.0, 1.0, 0.25, 0.75];
    let rows: Vec<i64> = (iy0..=iy1).collect();
    let per_row = par::map(exec, &rows, |&iy| {
        let mut out = Vec::new();
        for ix in ix0..=ix1 {
            let base = Point2::new(ix as f64 * cell, iy as f64 * cell);
            let hit = anchors
                .get(&(ix, iy))
                .and_then(|a| a.iter().copied().find(|p| region.contains(*p)))
                .or_else(|| {
                    PROBES.iter().find_map(|&fy| {
                        PROBES.iter().find_map(|&fx| {
                            let p = Point2::new(base.x + fx * cell, base.y + fy * cell);
                            region.contains(p).then_some(p)
                        })
                    })
                });
            if let Some(p) = hit {
                out.push(p);
            }
        }
        out
    });
    let points: Vec<Point2> = per_row.into_iter().flatten().collect();
    if points.is_empty() {
        return Err(Error::EmptyRegion);
    }
    CompactSample::new(points, mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{SQRT_2, TAU};

    fn circle(r: f64, n: usize) -> CompactSample {
        let pts = (0..n).map(|k| Point2::polar(r, TAU * k as f64 / n as f64)).collect();
        CompactSample::new(pts, r * TAU / n as f64).unwrap()
    }

    #[test]
    fn diameter_examples() {
        let c = circle(1.0, 64);
        assert!((diameter(&c).unwrap() - 2.0).abs() <= 2.0 * c.mesh());
        let single = CompactSample::singleton(Point2::new(3.0, 1.0));
        assert_eq!(diameter(&single).unwrap(), 0.0);
        let square = CompactSample::new(
            vec![Point2::new(0., 0.), Point2::new(1., 0.), Point2::new(1., 1.), Point2::new(0., 1.)],
            1.0,
        )
        .unwrap();
        assert!((diameter(&square).unwrap() - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn empty_inputs_are_errors() {
        assert!(matches!(CompactSample::new(vec![], 0.1), Err(Error::EmptySet)));
        assert!(matches!(diameter_of(&[]), Err(Error::EmptySet)));
    }

    #[test]
    fn hausdorff_examples() {
        let c = circle(1.0, 64);
        assert_eq!(hausdorff(&c, &c).unwrap(), 0.0);
        let a = CompactSample::singleton(Point2::new(0., 0.));
        let b = CompactSample::singleton(Point2::new(3., 4.));
        assert_eq!(hausdorff(&a, &b).unwrap(), 5.0);
    }

    #[test]
    fn net_of_degenerate_and_bad_regions() {
        let pt = epsilon_net(&Region::disc(Point2::new(0.3, 0.2), 0.0), 0.1).unwrap();
        assert_eq!(pt.points(), &[Point2::new(0.3, 0.2)]);
        assert!(matches!(epsilon_net(&Region::empty(), 0.1), Err(Error::EmptyRegion)));
        assert!(matches!(epsilon_net(&Region::Plane, 0.1), Err(Error::Unbounded)));
    }

    #[test]
    fn nearest_matches_brute_force() {
        let pts: Vec<Point2> = (0..200)
            .map(|k| Point2::new((k as f64 * 0.37).sin() * 2.0, (k as f64 * 0.73).cos()))
            .collect();
        let index = SpatialIndex::new(&pts, 0.05);
        for q in [Point2::new(0.1, 0.2), Point2::new(-3.0, 5.0), Point2::new(1.9, -0.9)] {
            let (_, d) = index.nearest(&pts, q).unwrap();
            let brute = pts.iter().map(|p| p.dist(q)).fold(f64::INFINITY, f64::min);
            assert_eq!(d, brute);
        }
    }

    #[test]
    fn hull_diameter_matches_pairwise() {
        let pts: Vec<Point2> =
            (0..300).map(|k| Point2::new((k as f64 * 1.3).sin(), (k as f64 * 2.9).cos() * 0.5)).collect();
        let mut brute = 0.0f64;
        for a in &pts {
            for b in &pts {
                brute = brute.max(a.dist(*b));
            }
        }
        assert_eq!(diameter_of(&pts).unwrap(), brute);
    }
}
