//! Chart-conjugated shrinks, the big-element iteration, and the induction on
//! filtration length.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::decomposition::{bing_check_with_graph, BingReport, Decomposition, Element, QuotientGraph, Scene};
use crate::error::{invariant, Error, Result};
use crate::homeo::{check_homeo_with, Homeo, HomeoChain, PlanarMap};
use crate::metric::{diameter_of, epsilon_net_with, CompactSample, DiscUnion, Point2, Region, SpatialIndex};
use crate::par::{self, Exec};
use crate::starlike::{radial_squeeze_report, Member, NullCollection, RadiusFunction, StarlikeSet};

/// A homeomorphism `f: N(E) → D²` with its closed domain `N(E)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chart {
    pub map: Homeo,
    pub domain: Region,
}

impl Chart {
    pub fn identity() -> Self {
        Chart { map: Homeo::Identity, domain: Region::Plane }
    }

    pub fn new(map: Homeo, domain: Region) -> Self {
        Chart { map, domain }
    }

    /// Chart inverse-composition error over a sample.
    pub fn roundtrip_error(&self, sample: &CompactSample) -> f64 {
        sample
            .points()
            .iter()
            .map(|p| self.map.apply_inverse(self.map.apply(*p)).dist(*p))
            .fold(0.0, f64::max)
    }
}

/// A compact set carried onto a starlike set by a chart.
#[derive(Clone, Debug)]
pub struct StarlikeEquivalentSet {
    pub id: u32,
    pub carrier: CompactSample,
    /// Exact membership predicate for the carrier.
    pub body: Region,
    pub chart: Chart,
    pub image: StarlikeSet,
}

impl StarlikeEquivalentSet {
    /// `chart⁻¹(image)`, sampled at `mesh`.
    pub fn from_chart(id: u32, chart: Chart, image: StarlikeSet, mesh: f64) -> Result<Self> {
        let body = Region::Intersection {
            parts: vec![Region::pullback(image.body(), chart.map.clone()), chart.domain.clone()],
        };
        let carrier = epsilon_net_with(Exec::default(), &body, mesh)?;
        Ok(StarlikeEquivalentSet { id, carrier, body, chart, image })
    }

    /// The scene-space origin `chart⁻¹(O)`.
    pub fn origin(&self) -> Point2 {
        self.chart.map.apply_inverse(self.image.origin)
    }

    pub fn diameter(&self) -> f64 {
        diameter_of(self.carrier.points()).unwrap_or(0.0)
    }
}

/// One stage of a filtration: a chart that makes `E_i` starlike once
/// `E_{i+1}` lies within `activation_radius` of the stage origin.
#[derive(Clone, Debug, PartialEq)]
pub struct StageChart {
    pub chart: Chart,
    pub image: StarlikeSet,
    pub activation_radius: f64,
}

impl StageChart {
    pub fn origin(&self) -> Point2 {
        self.chart.map.apply_inverse(self.image.origin)
    }
}

/// A filtration `{e} = E_{N+1} ⊂ E_N ⊂ … ⊂ E_0`.
#[derive(Clone, Debug)]
pub struct RecursiveSet {
    pub id: u32,
    pub point: Point2,
    /// `E_0, …, E_{N+1}`; the last entry is the singleton `{e}`.
    pub stages: Vec<CompactSample>,
    /// Exact bodies of `E_0, …, E_N`.
    pub bodies: Vec<Region>,
    pub charts: Vec<StageChart>,
}

impl RecursiveSet {
    pub fn new(id: u32, point: Point2, stages: Vec<CompactSample>, bodies: Vec<Region>, charts: Vec<StageChart>) -> Result<Self> {
        let s = RecursiveSet { id, point, stages, bodies, charts };
        s.validate(1e-9)?;
        Ok(s)
    }

    /// A starlike-equivalent set seen as a filtration of length zero.
    pub fn from_se(se: &StarlikeEquivalentSet) -> Result<Self> {
        let e = se.origin();
        RecursiveSet::new(
            se.id,
            e,
            vec![se.carrier.clone(), CompactSample::singleton(e)],
            vec![se.body.clone()],
            vec![StageChart { chart: se.chart.clone(), image: se.image.clone(), activation_radius: f64::INFINITY }],
        )
    }

    pub fn filtration_length(&self) -> usize {
        self.charts.len() - 1
    }

    /// Repeats the singleton stage until the filtration has length `n`.
    pub fn padded(mut self, n: usize) -> Self {
        while self.filtration_length() < n {
            let e = self.point;
            let singleton = Region::Disc { center: e, radius: 0.0 };
            let chart = StageChart {
                chart: Chart::identity(),
                image: StarlikeSet::disc(e, 0.0, RadiusFunction::MIN_NODES).expect("valid disc"),
                activation_radius: f64::INFINITY,
            };
            self.stages.push(CompactSample::singleton(e));
            self.bodies.push(singleton);
            self.charts.push(chart);
        }
        self
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let n = self.charts.len();
        if n == 0 || self.bodies.len() != n || self.stages.len() != n + 1 {
            return Err(invariant(vec![self.id], "filtration stages, bodies and charts disagree in length"));
        }
        let last = &self.stages[n];
        if last.len() != 1 || last.points()[0].dist(self.point) > tol {
            return Err(invariant(vec![self.id], "last filtration stage is not the singleton {e}"));
        }
        for i in 0..n {
            let (outer, inner) = (&self.stages[i], &self.stages[i + 1]);
            let index = SpatialIndex::new(outer.points(), outer.mesh().max(1e-9));
            let reach = outer.mesh() + tol;
            if let Some(p) = inner
                .points()
                .iter()
                .find(|p| !self.bodies[i].contains(**p) && !index.any_within(outer.points(), **p, reach))
            {
                return Err(invariant(
                    vec![self.id],
                    format!("stage {} leaves stage {i} at ({}, {})", i + 1, p.x, p.y),
                ));
            }
            if outer.len() > 1 {
                let inner_index = SpatialIndex::new(inner.points(), inner.mesh().max(1e-9));
                let strict =
                    outer.points().iter().any(|p| !inner_index.any_within(inner.points(), *p, tol));
                if !strict {
                    return Err(invariant(vec![self.id], format!("stage {} equals stage {i}", i + 1)));
                }
            }
            let c = &self.charts[i];
            if !c.activation_radius.is_nan() && c.activation_radius.is_finite() {
                let o = c.origin();
                let ring = (0..16).map(|k| o + Point2::polar(c.activation_radius, TAU * k as f64 / 16.0));
                if !c.chart.domain.contains(o) || ring.clone().any(|p| !c.chart.domain.contains(p)) {
                    return Err(invariant(vec![self.id], format!("activation ball of stage {i} leaves its chart domain")));
                }
            }
        }
        Ok(())
    }

    /// Stage `i` seen as a starlike-equivalent set (valid once activated).
    pub fn stage_se(&self, i: usize) -> StarlikeEquivalentSet {
        StarlikeEquivalentSet {
            id: self.id,
            carrier: self.stages[i].clone(),
            body: self.bodies[i].clone(),
            chart: self.charts[i].chart.clone(),
            image: self.charts[i].image.clone(),
        }
    }
}

/// Elements of one common filtration length inside an open set `U`.
#[derive(Clone, Debug)]
pub struct RseDecomposition {
    pub elements: Vec<RecursiveSet>,
    pub u: Region,
}

impl RseDecomposition {
    /// Pads every element to the longest filtration and checks disjointness.
    pub fn new(elements: Vec<RecursiveSet>, u: Region) -> Result<Self> {
        let n = elements.iter().map(|e| e.filtration_length()).max().unwrap_or(0);
        let elements: Vec<RecursiveSet> = elements.into_iter().map(|e| e.padded(n)).collect();
        let d = RseDecomposition { elements, u };
        d.decomposition()?;
        Ok(d)
    }

    pub fn filtration_length(&self) -> usize {
        self.elements.iter().map(|e| e.filtration_length()).max().unwrap_or(0)
    }

    /// The decomposition by the outermost stages.
    pub fn decomposition(&self) -> Result<Decomposition> {
        self.stage_decomposition(0)
    }

    pub fn stage_decomposition(&self, i: usize) -> Result<Decomposition> {
        Decomposition::new(
            self.elements
                .iter()
                .map(|e| Element::new(e.id, e.bodies[i].clone(), e.stages[i].clone()))
                .collect(),
            self.u.clone(),
        )
    }
}

/// One elementary shrink inside a composed chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub element: u32,
    /// Filtration stage the shrink acted on.
    pub stage: usize,
    pub epsilon: f64,
    pub diameter_before: f64,
    pub diameter_after: f64,
    pub stages: usize,
    pub maps: usize,
}

/// A composed shrink with the owner of every map in the chain.
#[derive(Clone, Debug, Default)]
pub struct Shrink {
    pub chain: HomeoChain,
    pub owners: Vec<u32>,
    pub log: Vec<StepRecord>,
}

impl Shrink {
    pub fn identity() -> Self {
        Shrink::default()
    }

    /// `other ∘ self`.
    pub fn then(mut self, other: Shrink) -> Shrink {
        self.chain.maps.extend(other.chain.maps);
        self.owners.extend(other.owners);
        self.log.extend(other.log);
        self
    }

    pub fn elementary_shrinks(&self) -> usize {
        self.log.len()
    }

    /// The maps not owned by `id`, in order.
    pub fn without(&self, id: u32) -> HomeoChain {
        HomeoChain::new(
            self.chain
                .maps
                .iter()
                .zip(&self.owners)
                .filter(|(_, o)| **o != id)
                .map(|(m, _)| m.clone())
                .collect(),
        )
    }
}

/// Knobs for the induction.
#[derive(Clone, Copy, Debug, Default)]
pub struct ShrinkOptions {
    pub exec: Exec,
    /// Negative control: skip the inner-stage shrink entirely.
    pub skip_inner: bool,
}


/// Per-ray collar for `image` whose chart preimage stays inside `allowed`.
///
/// Each node ray is marched outward in steps of `step`; the collar is set
/// halfway to the first failure, then a dense shell sample is verified and
/// the margin halved until it passes.
pub fn fit_collar(
    exec: Exec,
    id: u32,
    image: &StarlikeSet,
    chart: &Homeo,
    allowed: &Region,
    step: f64,
) -> Result<RadiusFunction> {
    let rho = &image.radius;
    let m = rho.len();
    let bound = 2.0 * rho.max_radius() + 1.0;
    let inside = |p: Point2| allowed.contains(chart.apply_inverse(p));
    let nodes: Vec<usize> = (0..m).collect();
    let reach: Vec<f64> = par::map(exec, &nodes, |&k| {
        let theta = rho.node_angle(k);
        let r = rho.node(k);
        let dir = Point2::polar(1.0, theta);
        let mut good = 0.0;
        let mut t = step;
        while t <= bound {
            if !inside(image.origin + dir * (r + t)) {
                break;
            }
            good = t;
            t += step;
        }
        good
    });
    if reach.iter().any(|r| *r <= 0.0) {
        return Err(Error::ChartMargin(id));
    }
    let mut w: Vec<f64> = (0..m).map(|k| rho.node(k) + 0.5 * reach[k]).collect();
    for _ in 0..24 {
        let collar = RadiusFunction::new(w.clone())?;
        if shell_inside(exec, image, &collar, step, &inside) {
            return Ok(collar);
        }
        for (k, wk) in w.iter_mut().enumerate() {
            *wk = rho.node(k) + 0.5 * (*wk - rho.node(k));
        }
    }
    Err(Error::ChartMargin(id))
}

fn shell_inside(
    exec: Exec,
    image: &StarlikeSet,
    collar: &RadiusFunction,
    step: f64,
    inside: &(impl Fn(Point2) -> bool + Sync),
) -> bool {
    let n = ((TAU * collar.max_radius() / step).ceil() as usize).max(collar.len());
    let n = n.div_ceil(collar.len()) * collar.len();
    let rays: Vec<usize> = (0..n).collect();
    par::map(exec, &rays, |&k| {
        let theta = TAU * k as f64 / n as f64;
        let (r, w) = (image.radius.eval(theta), collar.eval(theta));
        let dir = Point2::polar(1.0, theta);
        let count = ((w - r) / step).ceil().max(1.0) as usize;
        (0..=count).all(|j| inside(image.origin + dir * (r + (w - r) * j as f64 / count as f64)))
    })
    .into_iter()
    .all(|ok| ok)
}

/// Largest ratio `|f(a) − f(b)| / |a − b|` over small probe steps around the points.
pub fn lipschitz_estimate(exec: Exec, f: impl Fn(Point2) -> Point2 + Sync, points: &[Point2], h: f64) -> f64 {
    let dirs = [Point2::new(1.0, 0.0), Point2::new(0.0, 1.0), Point2::polar(1.0, TAU / 8.0), Point2::polar(1.0, 3.0 * TAU / 8.0)];
    par::max_f64(exec, points, |p| {
        let fp = f(*p);
        dirs.iter().map(|d| f(*p + *d * h).dist(fp) / h).fold(0.0, f64::max)
    })
}

/// Data behind one starlike-equivalent shrink.
#[derive(Clone, Debug)]
pub struct SeShrink {
    pub chain: HomeoChain,
    pub collar: RadiusFunction,
    pub image_epsilon: f64,
    pub stages: usize,
    pub diameter_after: f64,
}

/// Shrinks a starlike-equivalent set below `eps` by a squeeze conjugated
/// through its chart, supported in `u`, keeping every obstacle small or fixed.
pub fn shrink_se(scene: &Scene, e: &StarlikeEquivalentSet, u: &Region, t: &NullCollection, eps: f64) -> Result<HomeoChain> {
    Ok(shrink_se_report(Exec::default(), scene, e, u, t, eps)?.chain)
}

pub fn shrink_se_report(
    exec: Exec,
    scene: &Scene,
    e: &StarlikeEquivalentSet,
    u: &Region,
    t: &NullCollection,
    eps: f64,
) -> Result<SeShrink> {
    let allowed = Region::Intersection { parts: vec![u.clone(), e.chart.domain.clone()] };
    let f = &e.chart.map;
    let identity = f.is_identity();

    let probe = e.image.boundary_sample(scene.mesh / 2.0)?;
    let (lip_f, lip_inv) = match f {
        _ if identity => (1.0, 1.0),
        Homeo::Affine(a) => (a.stretch(), a.inverse().stretch()),
        _ => {
            let scene_pts: Vec<Point2> = probe.points().iter().map(|p| f.apply_inverse(*p)).collect();
            let h = scene.mesh / 8.0;
            (
                1.1 * lipschitz_estimate(exec, |p| f.apply(p), &scene_pts, h),
                1.1 * lipschitz_estimate(exec, |p| f.apply_inverse(p), probe.points(), h / 2.0),
            )
        }
    };

    let step = scene.mesh / (4.0 * lip_inv.max(1e-12));
    let collar = fit_collar(exec, e.id, &e.image, f, &allowed, step)?;

    let collar_box = StarlikeSet { origin: e.image.origin, radius: collar.clone() }.body();
    let support_box = Region::pullback(collar_box, f.clone()).bbox().map(|b| b.expand(scene.mesh));
    let relevant: Vec<&Member> = t
        .members()
        .iter()
        .filter(|m| m.id != e.id && support_box.is_none_or(|b| !b.intersect(m.sample.bbox()).is_empty()))
        .collect();
    let image_obstacles = NullCollection::new(
        relevant
            .iter()
            .map(|m| Member { id: m.id, sample: m.sample.mapped(|p| f.apply(p), lip_f) })
            .collect(),
    )?;

    let mut image_eps = eps / lip_inv;
    for _ in 0..8 {
        let squeeze = radial_squeeze_report(exec, &e.image, &collar, &image_obstacles, image_eps)?;
        let chain = if identity || squeeze.chain.is_empty() {
            squeeze.chain.clone()
        } else {
            HomeoChain::new(vec![Homeo::Conjugate { chart: Box::new(f.clone()), inner: squeeze.chain.clone() }])
        };
        let after: Vec<Point2> = e.carrier.points().iter().map(|p| chain.apply(*p)).collect();
        let diameter_after = diameter_of(&after)?;
        let obstacles_ok = relevant.iter().all(|m| {
            let img: Vec<Point2> = m.sample.points().iter().map(|p| chain.apply(*p)).collect();
            img.iter().zip(m.sample.points()).all(|(a, b)| a.same_bits(*b)) || diameter_of(&img).unwrap_or(0.0) < eps
        });
        if diameter_after < eps && obstacles_ok {
            return Ok(SeShrink { chain, collar, image_epsilon: image_eps, stages: squeeze.stage_count, diameter_after });
        }
        image_eps /= 2.0;
    }
    Err(Error::StageBudget(crate::starlike::MAX_STAGES))
}

/// Shrinks every element of diameter at least `eps`, one at a time in
/// decreasing diameter order, each inside its own quotient ball of radius
/// `eps / 3`.
pub fn shrink_null_se(scene: &Scene, elements: &[StarlikeEquivalentSet], u: &Region, eps: f64) -> Result<Shrink> {
    shrink_null_se_with(Exec::default(), scene, elements, u, eps, 0)
}

pub fn shrink_null_se_with(
    exec: Exec,
    scene: &Scene,
    elements: &[StarlikeEquivalentSet],
    u: &Region,
    eps: f64,
    stage: usize,
) -> Result<Shrink> {
    let decomposition = Decomposition::new(
        elements.iter().map(|e| Element::new(e.id, e.body.clone(), e.carrier.clone())).collect(),
        u.clone(),
    )?;
    let diameters: Vec<f64> = elements.iter().map(|e| e.diameter()).collect();
    let mut big: Vec<usize> = (0..elements.len()).filter(|&i| diameters[i] >= eps).collect();
    big.sort_by(|&a, &b| diameters[b].total_cmp(&diameters[a]).then(elements[a].id.cmp(&elements[b].id)));
    if big.is_empty() {
        return Ok(Shrink::identity());
    }

    let graph = QuotientGraph::new(scene, &decomposition);
    let r_w = scene.mesh;
    let mut current: Vec<CompactSample> = elements.iter().map(|e| e.carrier.clone()).collect();
    let mut used: Vec<Point2> = Vec::new();
    let mut out = Shrink::identity();

    for (pos, &i) in big.iter().enumerate() {
        let e = &elements[i];
        let node = graph.element_node(e.id).expect("element in graph");
        let pending: Vec<Point2> = big[pos + 1..]
            .iter()
            .flat_map(|&j| current[j].points().iter().copied())
            .collect();
        let pending_index = SpatialIndex::new(&pending, r_w);
        let used_index = SpatialIndex::new(&used, r_w);
        let ball: Vec<Point2> = graph
            .points_within(node, eps / 3.0)
            .into_iter()
            .map(|k| graph.points()[k])
            .filter(|p| {
                u.contains(*p)
                    && !used_index.any_within(&used, *p, 2.0 * r_w)
                    && !pending_index.any_within(&pending, *p, 3.0 * r_w)
            })
            .collect();
        let w_points = decomposition.largest_saturated(&ball);
        let covered = {
            let idx = SpatialIndex::new(&w_points, r_w);
            e.carrier.points().iter().all(|p| idx.any_within(&w_points, *p, 0.0))
        };
        if !covered {
            return Err(Error::PackingFailed(e.id));
        }
        let w_region = Region::Intersection {
            parts: vec![u.clone(), Region::Discs(DiscUnion::new(w_points.clone(), r_w))],
        };

        let obstacles = NullCollection::new(
            (0..elements.len())
                .filter(|&j| j != i)
                .map(|j| Member { id: elements[j].id, sample: current[j].clone() })
                .collect(),
        )?;
        let report = shrink_se_report(exec, scene, e, &w_region, &obstacles, eps)?;
        for (j, sample) in current.iter_mut().enumerate() {
            if j != i {
                *sample = remap(exec, sample, &report.chain);
            }
        }
        current[i] = remap(exec, &current[i], &report.chain);
        out.log.push(StepRecord {
            element: e.id,
            stage,
            epsilon: eps,
            diameter_before: diameters[i],
            diameter_after: report.diameter_after,
            stages: report.stages,
            maps: report.chain.len(),
        });
        out.owners.extend(std::iter::repeat_n(e.id, report.chain.len()));
        out.chain.maps.extend(report.chain.maps);
        used.extend(w_points);
    }
    Ok(out)
}

/// Pushes a sample through a chain, re-estimating its mesh.
fn remap(exec: Exec, s: &CompactSample, chain: &HomeoChain) -> CompactSample {
    let pts = s.points();
    let moved = par::map(exec, pts, |p| chain.apply(*p));
    if moved.iter().zip(pts).all(|(a, b)| a.same_bits(*b)) {
        return s.clone();
    }
    if pts.len() < 2 {
        return s.mapped(|p| chain.apply(p), 1.0);
    }
    let reach = s.mesh() * 1.01;
    let index = SpatialIndex::new(pts, reach);
    let idx: Vec<usize> = (0..pts.len()).collect();
    let stretch = par::max_f64(exec, &idx, |&i| {
        let mut best = 0.0f64;
        index.for_each_within(pts, pts[i], reach, |j| {
            if j != i {
                best = best.max(moved[i].dist(moved[j]) / pts[i].dist(pts[j]));
            }
        });
        best
    });
    s.mapped(|p| chain.apply(p), stretch.max(1.0))
}

/// Shrinks a recursively starlike-equivalent decomposition below `eps`.
pub fn shrink_recursive(scene: &Scene, d: &RseDecomposition, eps: f64) -> Result<Shrink> {
    shrink_recursive_with(scene, d, eps, ShrinkOptions::default())
}

pub fn shrink_recursive_with(scene: &Scene, d: &RseDecomposition, eps: f64, opts: ShrinkOptions) -> Result<Shrink> {
    let work = d.elements.iter().any(|e| !(diameter_of(e.stages[0].points()).unwrap_or(0.0) < eps));
    if work && !(eps >= scene.mesh) {
        return Err(Error::Invalid(format!("epsilon {eps} is below the scene mesh {}", scene.mesh)));
    }
    shrink_level(scene, d, 0, eps, opts)
}

fn shrink_level(scene: &Scene, d: &RseDecomposition, level: usize, eps: f64, opts: ShrinkOptions) -> Result<Shrink> {
    let n = d.filtration_length();
    if level == n {
        let ses: Vec<StarlikeEquivalentSet> = d.elements.iter().map(|e| e.stage_se(level)).collect();
        return shrink_null_se_with(opts.exec, scene, &ses, &d.u, eps, level);
    }
    let eta0 = d
        .elements
        .iter()
        .map(|e| e.charts[level].activation_radius)
        .filter(|r| *r > 0.0)
        .fold(f64::INFINITY, f64::min);
    let mut eta = (eps / 2.0).min(eta0);
    let mut failed = d.elements.first().map_or(0, |e| e.id);
    for _ in 0..=8 {
        let inner = if opts.skip_inner {
            Shrink::identity()
        } else {
            shrink_level(scene, d, level + 1, eta, opts)?
        };
        match activate(opts.exec, d, level, &inner) {
            Ok(ses) => {
                let outer = shrink_null_se_with(opts.exec, scene, &ses, &d.u, eps, level)?;
                return Ok(inner.then(outer));
            }
            Err(id) => {
                failed = id;
                if opts.skip_inner {
                    break;
                }
                eta /= 2.0;
            }
        }
    }
    Err(Error::ActivationFailed(failed))
}

/// Stage-`level` sets after the inner shrink `g`, or the id of an element
/// whose chart does not activate.
fn activate(exec: Exec, d: &RseDecomposition, level: usize, g: &Shrink) -> std::result::Result<Vec<StarlikeEquivalentSet>, u32> {
    let g_inv = g.chain.inverse().to_homeo();
    let mut out = Vec::with_capacity(d.elements.len());
    for e in &d.elements {
        let sc = &e.charts[level];
        let other_inv = g.without(e.id).inverse();
        let chart_map = Homeo::compose(other_inv.maps.iter().cloned().chain([sc.chart.map.clone()]));
        let chart = Chart {
            map: chart_map,
            domain: Region::pullback(sc.chart.domain.clone(), other_inv.to_homeo()),
        };
        let carrier = remap(exec, &e.stages[level], &g.chain);
        let inner: Vec<Point2> = par::map(exec, e.stages[level + 1].points(), |p| g.chain.apply(*p));
        let origin = chart.map.apply_inverse(sc.image.origin);
        let radius = sc.activation_radius + 1e-9;
        let activated = inner.iter().all(|p| p.dist(origin) <= radius);
        let inside = par::map(exec, carrier.points(), |p| sc.image.contains_within(chart.map.apply(*p), 1e-9))
            .into_iter()
            .all(|ok| ok);
        if !(activated && inside) {
            return Err(e.id);
        }
        out.push(StarlikeEquivalentSet {
            id: e.id,
            carrier,
            body: Region::pullback(e.bodies[level].clone(), g_inv.clone()),
            chart,
            image: sc.image.clone(),
        });
    }
    Ok(out)
}

/// Pushes a filtration through `g`, certifying injectivity near `E_0`.
pub fn transport_filtration(e: &RecursiveSet, g: &HomeoChain) -> Result<RecursiveSet> {
    transport_filtration_with(Exec::default(), e, g)
}

pub fn transport_filtration_with(exec: Exec, e: &RecursiveSet, g: &HomeoChain) -> Result<RecursiveSet> {
    if g.maps.iter().all(|m| m.is_identity()) {
        return Ok(e.clone());
    }
    let base = &e.stages[0];
    let r = 2.0 * base.mesh();
    let dilated = epsilon_net_with(exec, &Region::Discs(DiscUnion::new(base.points().to_vec(), r)), base.mesh())?;
    let cert = check_homeo_with(exec, g, &dilated, 1e-9);
    if !cert.pass {
        return Err(Error::Injectivity(format!(
            "inverse error {:.3e}, {} collisions, {} orientation failures",
            cert.inverse_error, cert.collisions, cert.jacobian_failures
        )));
    }
    let g_inv = g.inverse().to_homeo();
    let stages = e.stages.iter().map(|s| remap(exec, s, g)).collect();
    let bodies = e.bodies.iter().map(|b| Region::pullback(b.clone(), g_inv.clone())).collect();
    let charts = e
        .charts
        .iter()
        .map(|c| StageChart {
            chart: Chart {
                map: Homeo::compose([g_inv.clone(), c.chart.map.clone()]),
                domain: Region::pullback(c.chart.domain.clone(), g_inv.clone()),
            },
            image: c.image.clone(),
            activation_radius: c.activation_radius,
        })
        .collect();
    let out = RecursiveSet { id: e.id, point: g.apply(e.point), stages, bodies, charts };
    out.validate(1e-9)?;
    for (i, c) in out.charts.iter().enumerate() {
        let cert = check_homeo_with(exec, &c.chart.map, &out.stages[i], 1e-9);
        if cert.inverse_error >= 1e-9 || cert.collisions > 0 {
            return Err(invariant(vec![e.id], format!("transported chart of stage {i} failed certification")));
        }
    }
    Ok(out)
}

/// Shrinks at `ε_n = 2^-n` for `n = 1..=n_max` and certifies each result.
pub fn approximating_sequence(scene: &Scene, d: &RseDecomposition, n_max: usize) -> Result<Vec<(Shrink, BingReport)>> {
    approximating_sequence_with(scene, d, n_max, ShrinkOptions::default())
}

pub fn approximating_sequence_with(
    scene: &Scene,
    d: &RseDecomposition,
    n_max: usize,
    opts: ShrinkOptions,
) -> Result<Vec<(Shrink, BingReport)>> {
    if !(1..=8).contains(&n_max) {
        return Err(Error::Invalid(format!("n_max must lie in 1..=8, got {n_max}")));
    }
    let decomposition = d.decomposition()?;
    let graph = QuotientGraph::new(scene, &decomposition);
    (1..=n_max)
        .map(|n| {
            let eps = 0.5f64.powi(n as i32);
            let s = shrink_recursive_with(scene, d, eps, opts)?;
            let report = bing_check_with_graph(opts.exec, &graph, &decomposition, &s.chain, eps);
            Ok((s, report))
        })
        .collect()
}
