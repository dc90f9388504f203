//! Decompositions of a sampled scene, saturation, nullity, the contracted
//! quotient graph and the shrinking-criterion checker.

use std::cell::RefCell;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invariant, Error, Result};
use crate::homeo::PlanarMap;
use crate::metric::{diameter_of, epsilon_net_with, BBox, CompactSample, Point2, Region, SpatialIndex};
use crate::par::{self, Exec};
use crate::starlike::{Member, NullCollection};

/// The ambient compact space, sampled.
#[derive(Clone, Debug)]
pub struct Scene {
    pub domain: Region,
    pub mesh: f64,
    pub sample: CompactSample,
}

impl Scene {
    pub fn new(domain: Region, mesh: f64) -> Result<Self> {
        Scene::new_with(Exec::default(), domain, mesh)
    }

    pub fn new_with(exec: Exec, domain: Region, mesh: f64) -> Result<Self> {
        let sample = epsilon_net_with(exec, &domain, mesh)?;
        Ok(Scene { domain, mesh, sample })
    }

    /// A scene with a caller-supplied sample (e.g. a one-dimensional strip).
    pub fn with_sample(domain: Region, sample: CompactSample) -> Self {
        Scene { domain, mesh: sample.mesh(), sample }
    }
}

/// One non-degenerate element: an exact body plus a sample of it.
#[derive(Clone, Debug)]
pub struct Element {
    pub id: u32,
    pub body: Region,
    pub sample: CompactSample,
    bbox: BBox,
}

impl Element {
    pub fn new(id: u32, body: Region, sample: CompactSample) -> Self {
        let bbox = body
            .bbox()
            .unwrap_or_else(|| sample.bbox().expand(sample.mesh()))
            .union(sample.bbox());
        Element { id, body, sample, bbox }
    }

    /// Element whose body is the sample itself (no exact predicate available).
    pub fn from_sample(id: u32, sample: CompactSample) -> Self {
        let body = Region::Discs(crate::metric::DiscUnion::new(sample.points().to_vec(), 0.0));
        Element::new(id, body, sample)
    }

    #[inline]
    pub fn contains(&self, p: Point2) -> bool {
        self.bbox.contains(p) && self.body.contains(p)
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    pub fn diameter(&self) -> f64 {
        diameter_of(self.sample.points()).unwrap_or(0.0)
    }
}

/// The non-singleton elements together with the open set containing them.
#[derive(Clone, Debug)]
pub struct Decomposition {
    elements: Vec<Element>,
    pub u: Region,
}

impl Decomposition {
    pub fn new(elements: Vec<Element>, u: Region) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in &elements {
            if !seen.insert(e.id) {
                return Err(invariant(vec![e.id], "duplicate element id"));
            }
            if let Some(p) = e.sample.points().iter().find(|p| !u.contains(**p)) {
                return Err(invariant(
                    vec![e.id],
                    format!("element leaves the open set U at ({}, {})", p.x, p.y),
                ));
            }
        }
        for a in &elements {
            for b in &elements {
                if a.id != b.id
                    && !a.bbox.intersect(b.bbox).is_empty()
                    && a.sample.points().iter().any(|p| b.contains(*p))
                {
                    return Err(invariant(vec![a.id, b.id], "elements intersect"));
                }
            }
        }
        Ok(Decomposition { elements, u })
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn element(&self, id: u32) -> Option<&Element> {
        self.elements.iter().find(|e| e.id == id)
    }

    pub fn null_collection(&self) -> NullCollection {
        NullCollection::new(
            self.elements.iter().map(|e| Member { id: e.id, sample: e.sample.clone() }).collect(),
        )
        .expect("decomposition elements are disjoint")
    }

    pub fn check_scene(&self, scene: &Scene) -> Result<()> {
        for e in &self.elements {
            if e.sample.points().iter().any(|p| !scene.domain.contains(*p)) {
                return Err(invariant(vec![e.id], "element leaves the domain"));
            }
        }
        Ok(())
    }

    /// The element containing `p`, if any.
    pub fn owner(&self, p: Point2) -> Option<&Element> {
        self.elements.iter().find(|e| e.contains(p))
    }

    pub fn project(&self, domain: &Region, p: Point2) -> Result<QuotientPoint> {
        if !domain.contains(p) {
            return Err(Error::OutsideDomain(p.x, p.y));
        }
        Ok(self.owner(p).map_or(QuotientPoint::Point(p), |e| QuotientPoint::Element(e.id)))
    }

    /// `S` together with every element it meets.
    pub fn saturate(&self, s: &[Point2]) -> Vec<Point2> {
        let mut out = s.to_vec();
        let mut have: HashSet<(u64, u64)> = s.iter().map(|p| p.bits()).collect();
        for e in &self.elements {
            if s.iter().any(|p| e.contains(*p)) {
                for p in e.sample.points() {
                    if have.insert(p.bits()) {
                        out.push(*p);
                    }
                }
            }
        }
        out
    }

    /// `S` minus every element not wholly inside `S`.
    pub fn largest_saturated(&self, s: &[Point2]) -> Vec<Point2> {
        let have: HashSet<(u64, u64)> = s.iter().map(|p| p.bits()).collect();
        let dropped: Vec<&Element> = self
            .elements
            .iter()
            .filter(|e| !e.sample.points().iter().all(|p| have.contains(&p.bits())))
            .collect();
        let dropped_pts: HashSet<(u64, u64)> =
            dropped.iter().flat_map(|e| e.sample.points().iter().map(|p| p.bits())).collect();
        s.iter()
            .copied()
            .filter(|p| !dropped_pts.contains(&p.bits()) && !dropped.iter().any(|e| e.contains(*p)))
            .collect()
    }

    pub fn is_saturated(&self, s: &[Point2]) -> bool {
        let have: HashSet<(u64, u64)> = s.iter().map(|p| p.bits()).collect();
        self.elements.iter().all(|e| {
            let meets = s.iter().any(|p| e.contains(*p));
            !meets || e.sample.points().iter().all(|p| have.contains(&p.bits()))
        })
    }
}

/// A point of the quotient: a collapsed element or an ordinary point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuotientPoint {
    Element(u32),
    Point(Point2),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NullReport {
    pub thresholds: Vec<f64>,
    pub counts: Vec<usize>,
    pub verdict: bool,
}

/// Count-versus-threshold table certifying a finite collection as null.
pub fn is_null(c: &NullCollection, thresholds: &[f64]) -> Result<NullReport> {
    if thresholds.iter().any(|t| !(*t > 0.0)) || thresholds.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::Invalid("thresholds must be positive and descending".into()));
    }
    let diams: Vec<f64> =
        c.members().iter().map(|m| diameter_of(m.sample.points()).unwrap_or(0.0)).collect();
    let counts = thresholds.iter().map(|t| diams.iter().filter(|d| **d > *t).count()).collect();
    Ok(NullReport { thresholds: thresholds.to_vec(), counts, verdict: true })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UscReport {
    pub null: NullReport,
    pub compact: bool,
    pub pass: bool,
}

/// Upper semi-continuity via the sufficient condition "null with compact elements".
pub fn check_usc(d: &Decomposition) -> UscReport {
    let c = d.null_collection();
    let max = c
        .members()
        .iter()
        .map(|m| diameter_of(m.sample.points()).unwrap_or(0.0))
        .fold(0.0, f64::max);
    let thresholds: Vec<f64> =
        (0..8).map(|k| (max.max(f64::MIN_POSITIVE)) * 0.5f64.powi(k)).collect();
    let null = is_null(&c, &thresholds).expect("descending thresholds");
    let compact = d.elements().iter().all(|e| e.sample.points().iter().all(|p| p.is_finite()));
    UscReport { pass: null.verdict && compact, null, compact }
}

const WEIGHT_QUANTUM: f64 = 4294967296.0; // 2^32

/// Edge weights are rounded to multiples of 2^-32 so path sums are exact
/// and independent of summation order.
#[inline]
pub fn quantize(w: f64) -> f64 {
    (w * WEIGHT_QUANTUM).round() / WEIGHT_QUANTUM
}

/// Mesh-neighbour graph with every element contracted to one vertex.
///
/// Vertices `0..m` are the contracted elements, in decomposition order; the
/// remaining vertices are sample points outside every element.
#[derive(Clone, Debug)]
pub struct QuotientGraph {
    domain: Region,
    mesh: f64,
    elements: Vec<(u32, BBox, Region)>,
    points: Vec<Point2>,
    node_of: Vec<u32>,
    node_point: Vec<u32>,
    index: SpatialIndex,
    offsets: Vec<u32>,
    targets: Vec<u32>,
    weights: Vec<f64>,
}

struct Workspace {
    dist: Vec<f64>,
    touched: Vec<u32>,
    heap: BinaryHeap<Reverse<(u64, u32)>>,
}

thread_local! {
    static WORKSPACE: RefCell<Workspace> =
        const { RefCell::new(Workspace { dist: Vec::new(), touched: Vec::new(), heap: BinaryHeap::new() }) };
}

impl QuotientGraph {
    pub fn new(scene: &Scene, d: &Decomposition) -> Self {
        let m = d.elements.len();
        let mut points: Vec<Point2> = Vec::new();
        let mut node_of: Vec<u32> = Vec::new();
        let mut node_point: Vec<u32> = vec![u32::MAX; m];
        for p in scene.sample.points() {
            points.push(*p);
            match d.elements.iter().position(|e| e.contains(*p)) {
                Some(k) => node_of.push(k as u32),
                None => {
                    node_of.push(node_point.len() as u32);
                    node_point.push((points.len() - 1) as u32);
                }
            }
        }
        for (k, e) in d.elements.iter().enumerate() {
            node_point[k] = points.len() as u32;
            for p in e.sample.points() {
                points.push(*p);
                node_of.push(k as u32);
            }
        }
        let n = node_point.len();
        let reach = scene.mesh * 1.01;
        let index = SpatialIndex::new(&points, reach);

        let mut edges: Vec<(u32, u32, f64)> = Vec::new();
        for (i, p) in points.iter().enumerate() {
            index.for_each_within(&points, *p, reach, |j| {
                let (a, b) = (node_of[i], node_of[j]);
                if a != b {
                    edges.push((a, b, quantize(p.dist(points[j]))));
                }
            });
        }
        edges.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)).then(x.2.total_cmp(&y.2)));
        edges.dedup_by(|later, earlier| later.0 == earlier.0 && later.1 == earlier.1);

        let mut offsets = vec![0u32; n + 1];
        for e in &edges {
            offsets[e.0 as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = edges.iter().map(|e| e.1).collect();
        let weights = edges.iter().map(|e| e.2).collect();

        QuotientGraph {
            domain: scene.domain.clone(),
            mesh: scene.mesh,
            elements: d.elements.iter().map(|e| (e.id, e.bbox, e.body.clone())).collect(),
            points,
            node_of,
            node_point,
            index,
            offsets,
            targets,
            weights,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_point.len()
    }

    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn mesh(&self) -> f64 {
        self.mesh
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn node_of_point(&self, i: usize) -> usize {
        self.node_of[i] as usize
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            let (lo, hi) = (self.offsets[u] as usize, self.offsets[u + 1] as usize);
            (lo..hi).map(move |k| (u, self.targets[k] as usize, self.weights[k]))
        })
    }

    pub fn element_node(&self, id: u32) -> Option<usize> {
        self.elements.iter().position(|e| e.0 == id)
    }

    /// Writes one `u v w` line per directed edge.
    pub fn export_edges(&self, mut out: impl Write) -> std::io::Result<()> {
        for (u, v, w) in self.edges() {
            writeln!(out, "{u} {v} {w:.17e}")?;
        }
        Ok(())
    }

    fn element_at(&self, p: Point2) -> Option<usize> {
        self.elements.iter().position(|(_, b, body)| b.contains(p) && body.contains(p))
    }

    pub fn project(&self, p: Point2) -> Result<QuotientPoint> {
        if !self.domain.contains(p) {
            return Err(Error::OutsideDomain(p.x, p.y));
        }
        Ok(self
            .element_at(p)
            .map_or(QuotientPoint::Point(p), |k| QuotientPoint::Element(self.elements[k].0)))
    }

    /// Graph vertex representing `q`, and the offset from `q` to it.
    pub fn attach(&self, q: QuotientPoint) -> Option<(usize, f64)> {
        match q {
            QuotientPoint::Element(id) => self.element_node(id).map(|k| (k, 0.0)),
            QuotientPoint::Point(p) => {
                if let Some(k) = self.element_at(p) {
                    return Some((k, 0.0));
                }
                let (i, d) = self.index.nearest(&self.points, p)?;
                Some((self.node_of[i] as usize, d))
            }
        }
    }

    /// Quotient pseudodistance, `+∞` when disconnected.
    pub fn distance(&self, a: QuotientPoint, b: QuotientPoint) -> f64 {
        if let (QuotientPoint::Element(x), QuotientPoint::Element(y)) = (a, b) {
            if x == y {
                return 0.0;
            }
        }
        let (Some((na, oa)), Some((nb, ob))) = (self.attach(a), self.attach(b)) else {
            return f64::INFINITY;
        };
        oa + self.node_distance(na, nb, f64::INFINITY, false) + ob
    }

    /// Shortest path between vertices, `+∞` beyond `cutoff`. With
    /// `free_only`, contracted vertices may not be used.
    pub fn node_distance(&self, src: usize, dst: usize, cutoff: f64, free_only: bool) -> f64 {
        if src == dst {
            return 0.0;
        }
        let m = self.elements.len();
        let mut found = f64::INFINITY;
        self.dijkstra(src, cutoff, |u, d| {
            if u == dst {
                found = d;
                return Step::Stop;
            }
            if free_only && u < m && u != src {
                return Step::Skip;
            }
            Step::Expand
        });
        found
    }

    /// Distances from `src` to every vertex (`+∞` if unreachable).
    pub fn node_distances(&self, src: usize) -> Vec<f64> {
        let mut out = vec![f64::INFINITY; self.node_count()];
        self.dijkstra(src, f64::INFINITY, |u, d| {
            out[u] = d;
            Step::Expand
        });
        out
    }

    /// Distances from `src` to vertices closer than `cutoff`.
    pub fn ball(&self, src: usize, cutoff: f64) -> HashMap<u32, f64> {
        let mut out = HashMap::new();
        self.dijkstra(src, cutoff, |u, d| {
            out.insert(u as u32, d);
            Step::Expand
        });
        out
    }

    /// Indices into [`points`](Self::points) within quotient distance `r` of vertex `node`.
    pub fn points_within(&self, node: usize, r: f64) -> Vec<usize> {
        let ball = self.ball(node, r);
        (0..self.points.len()).filter(|i| ball.contains_key(&self.node_of[*i])).collect()
    }

    fn dijkstra(&self, src: usize, cutoff: f64, mut visit: impl FnMut(usize, f64) -> Step) {
        WORKSPACE.with(|ws| {
            let mut ws = ws.borrow_mut();
            let Workspace { dist, touched, heap } = &mut *ws;
            if dist.len() < self.node_count() {
                dist.resize(self.node_count(), f64::INFINITY);
            }
            dist[src] = 0.0;
            touched.push(src as u32);
            heap.push(Reverse((0f64.to_bits(), src as u32)));
            while let Some(Reverse((bits, u))) = heap.pop() {
                let du = f64::from_bits(bits);
                let u = u as usize;
                if du > dist[u] {
                    continue;
                }
                match visit(u, du) {
                    Step::Stop => break,
                    Step::Skip => continue,
                    Step::Expand => {}
                }
                let (lo, hi) = (self.offsets[u] as usize, self.offsets[u + 1] as usize);
                for k in lo..hi {
                    let v = self.targets[k] as usize;
                    let nd = du + self.weights[k];
                    if nd < dist[v] && nd < cutoff {
                        if dist[v] == f64::INFINITY {
                            touched.push(v as u32);
                        }
                        dist[v] = nd;
                        heap.push(Reverse((nd.to_bits(), v as u32)));
                    }
                }
            }
            for t in touched.drain(..) {
                dist[t as usize] = f64::INFINITY;
            }
            heap.clear();
        });
    }
}

enum Step {
    Expand,
    Skip,
    Stop,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementDiameters {
    pub id: u32,
    pub before: f64,
    pub after: f64,
}

/// Both halves of the shrinking criterion, evaluated on samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BingReport {
    pub epsilon: f64,
    /// `max_x d(π x, π H x)` over every graph sample point.
    pub condition_i: f64,
    /// `max_Δ diam H(Δ)`.
    pub condition_ii: f64,
    pub elements: Vec<ElementDiameters>,
    pub pass_i: bool,
    pub pass_ii: bool,
    pub pass: bool,
}

pub fn bing_check<H: PlanarMap + ?Sized>(
    scene: &Scene,
    d: &Decomposition,
    h: &H,
    eps: f64,
) -> BingReport {
    let graph = QuotientGraph::new(scene, d);
    bing_check_with_graph(Exec::default(), &graph, d, h, eps)
}

pub fn bing_check_with_graph<H: PlanarMap + ?Sized>(
    exec: Exec,
    graph: &QuotientGraph,
    d: &Decomposition,
    h: &H,
    eps: f64,
) -> BingReport {
    let condition_i = sup_displacement(exec, graph, |p| h.apply(p), 4.0 * eps);
    let elements: Vec<ElementDiameters> = par::map(exec, d.elements(), |e| {
        let img: Vec<Point2> = e.sample.points().iter().map(|p| h.apply(*p)).collect();
        ElementDiameters { id: e.id, before: e.diameter(), after: diameter_of(&img).unwrap_or(0.0) }
    });
    let condition_ii = elements.iter().map(|e| e.after).fold(0.0, f64::max);
    let pass_i = condition_i < eps;
    let pass_ii = condition_ii < eps;
    BingReport { epsilon: eps, condition_i, condition_ii, elements, pass_i, pass_ii, pass: pass_i && pass_ii }
}

/// `max_x d(π x, π f(x))` over the graph's sample points; values at or
/// beyond `cutoff` are reported as `+∞`.
///
/// Every path between `x` and `y` either avoids all contracted vertices or
/// passes through some element vertex `k`, so
/// `d(x, y) = min(d_free(x, y), min_k F_k(x) + F_k(y))` with `F_k` the
/// distance field of element `k`. The fields give upper bounds, so the
/// candidates are visited in decreasing bound order and the scan stops as
/// soon as no remaining bound can beat the running maximum.
pub fn sup_displacement(
    exec: Exec,
    graph: &QuotientGraph,
    f: impl Fn(Point2) -> Point2 + Sync,
    cutoff: f64,
) -> f64 {
    let idx: Vec<usize> = (0..graph.points.len()).collect();
    let moved: Vec<(usize, usize, f64, f64)> = par::map(exec, &idx, |&i| {
        let x = graph.points[i];
        let y = f(x);
        if y.same_bits(x) {
            return None;
        }
        let (ny, oy) = graph.attach(QuotientPoint::Point(y))?;
        Some((graph.node_of[i] as usize, ny, oy, x.dist(y)))
    })
    .into_iter()
    .flatten()
    .filter(|(nx, ny, oy, _)| !(nx == ny && *oy == 0.0))
    .collect();
    if moved.is_empty() {
        return 0.0;
    }

    let fields: Vec<HashMap<u32, f64>> =
        par::map(exec, &(0..graph.element_count()).collect::<Vec<_>>(), |&k| graph.ball(k, cutoff));
    let bound = |node: usize, other: usize| -> f64 {
        fields
            .iter()
            .filter_map(|fk| Some(fk.get(&(node as u32))? + fk.get(&(other as u32))?))
            .fold(f64::INFINITY, f64::min)
    };
    let m = graph.element_count();

    let mut cands: Vec<(f64, usize, usize, f64, f64)> = par::map(exec, &moved, |&(nx, ny, oy, euclid)| {
        (bound(nx, ny) + oy, nx, ny, oy, euclid)
    });
    cands.sort_by(|a, b| b.0.total_cmp(&a.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    let mut best = 0.0f64;
    for chunk in cands.chunks(512) {
        if chunk[0].0 <= best {
            break;
        }
        let vals = par::map(exec, chunk, |&(ub, nx, ny, oy, euclid)| {
            if ub <= best {
                return ub;
            }
            if nx < m || ny < m {
                return ub;
            }
            // Graph paths are never shorter than the straight segment.
            if euclid >= ub {
                return ub;
            }
            let limit = (ub - oy).min(cutoff);
            let free = graph.node_distance(nx, ny, limit, true);
            (free + oy).min(ub)
        });
        best = vals.into_iter().fold(best, f64::max);
    }
    if best >= cutoff {
        f64::INFINITY
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homeo::{Affine2, Homeo};

    fn segment_scene(mesh: f64) -> (Scene, Decomposition) {
        let n = (3.0 / mesh).round() as usize;
        let pts: Vec<Point2> = (0..=n).map(|k| Point2::new(k as f64 * mesh, 0.0)).collect();
        let domain = Region::Union {
            parts: pts.iter().map(|p| Region::disc(*p, mesh * 0.01)).collect(),
        };
        let scene = Scene::with_sample(domain, CompactSample::new(pts.clone(), mesh).unwrap());
        let inner: Vec<Point2> =
            pts.iter().copied().filter(|p| p.x >= 1.0 - 1e-12 && p.x <= 2.0 + 1e-12).collect();
        let e = Element::from_sample(1, CompactSample::new(inner, mesh).unwrap());
        let d = Decomposition::new(vec![e], Region::Plane).unwrap();
        (scene, d)
    }

    #[test]
    fn segment_distance() {
        let mesh = 0.05;
        let (scene, d) = segment_scene(mesh);
        let g = QuotientGraph::new(&scene, &d);
        let a = g.project(Point2::new(0.0, 0.0)).unwrap();
        let b = g.project(Point2::new(3.0, 0.0)).unwrap();
        let dist = g.distance(a, b);
        assert!((dist - 2.0).abs() <= 2.0 * mesh, "d = {dist}");
        assert_eq!(g.distance(a, a), 0.0);
    }

    #[test]
    fn projection_examples() {
        let (scene, d) = segment_scene(0.1);
        let g = QuotientGraph::new(&scene, &d);
        let inner = d.elements()[0].sample.points();
        assert_eq!(g.project(inner[3]).unwrap(), QuotientPoint::Element(1));
        assert_eq!(g.project(inner[1]).unwrap(), g.project(inner[8]).unwrap());
        assert_eq!(
            g.project(Point2::new(0.5, 0.0)).unwrap(),
            QuotientPoint::Point(Point2::new(0.5, 0.0))
        );
        assert!(matches!(g.project(Point2::new(0.5, 1.0)), Err(Error::OutsideDomain(..))));
    }

    #[test]
    fn saturation_examples() {
        let (_, d) = segment_scene(0.1);
        let outside = vec![Point2::new(0.2, 0.0)];
        assert_eq!(d.saturate(&outside), outside);
        let inner = vec![Point2::new(1.5, 0.0)];
        let sat = d.saturate(&inner);
        assert_eq!(sat.len(), d.elements()[0].sample.len());
        assert!(d.is_saturated(&sat));

        let half: Vec<Point2> = d.elements()[0].sample.points().iter().copied().filter(|p| p.x < 1.5).collect();
        let mut s = half.clone();
        s.push(Point2::new(0.2, 0.0));
        assert_eq!(d.largest_saturated(&s), vec![Point2::new(0.2, 0.0)]);
    }

    #[test]
    fn null_table() {
        let discs: Vec<Member> = (1..=3)
            .map(|k| Member {
                id: k,
                sample: crate::metric::epsilon_net(&Region::disc(Point2::new(3.0 * k as f64, 0.0), 1.0), 0.1)
                    .unwrap(),
            })
            .collect();
        let c = NullCollection::new(discs).unwrap();
        assert_eq!(is_null(&c, &[0.5]).unwrap().counts, vec![3]);
        assert_eq!(is_null(&NullCollection::empty(), &[1.0, 0.5]).unwrap().counts, vec![0, 0]);
        assert!(is_null(&c, &[0.5, 1.0]).is_err());
    }

    #[test]
    fn identity_displacement_is_zero() {
        let scene = Scene::new(Region::disc(Point2::ORIGIN, 1.0), 0.1).unwrap();
        let body = Region::disc(Point2::ORIGIN, 0.3);
        let e = Element::new(1, body.clone(), crate::metric::epsilon_net(&body, 0.05).unwrap());
        let d = Decomposition::new(vec![e], Region::disc(Point2::ORIGIN, 0.6)).unwrap();
        let r = bing_check(&scene, &d, &Homeo::Identity, 1.0);
        assert_eq!(r.condition_i, 0.0);
        assert!(r.pass);
        let r = bing_check(&scene, &d, &Homeo::Identity, 0.5);
        assert!(!r.pass_ii);
    }

    #[test]
    fn displacement_matches_pairwise_distances() {
        let scene = Scene::new(Region::disc(Point2::ORIGIN, 1.0), 0.1).unwrap();
        let body = Region::disc(Point2::new(0.2, 0.0), 0.25);
        let e = Element::new(1, body.clone(), crate::metric::epsilon_net(&body, 0.05).unwrap());
        let d = Decomposition::new(vec![e], Region::disc(Point2::ORIGIN, 0.6)).unwrap();
        let g = QuotientGraph::new(&scene, &d);
        let h = Affine2::scale_about(0.9, Point2::ORIGIN);
        let fast = sup_displacement(Exec::default(), &g, |p| h.apply(p), f64::INFINITY);
        let slow = g
            .points()
            .iter()
            .map(|p| {
                let a = QuotientPoint::Point(*p);
                let b = QuotientPoint::Point(h.apply(*p));
                if g.attach(b).is_none() { 0.0 } else { g.distance(a, b) }
            })
            .fold(0.0, f64::max);
        assert_eq!(fast, slow);
    }
}
