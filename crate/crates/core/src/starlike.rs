//! Starlike sets and the staged radial squeeze.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homeo::{Homeo, HomeoChain, PlanarMap, RadialStage};
use crate::metric::{diameter_of, CompactSample, Point2, Region, SpatialIndex};
use crate::par::{self, Exec};

/// Piecewise-linear radius function on `M ≥ 8` uniformly spaced angles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct RadiusFunction {
    radii: Vec<f64>,
}

impl TryFrom<Vec<f64>> for RadiusFunction {
    type Error = Error;

    fn try_from(radii: Vec<f64>) -> Result<Self> {
        RadiusFunction::new(radii)
    }
}

impl From<RadiusFunction> for Vec<f64> {
    fn from(r: RadiusFunction) -> Vec<f64> {
        r.radii
    }
}

impl RadiusFunction {
    pub const MIN_NODES: usize = 8;

    pub fn new(radii: Vec<f64>) -> Result<Self> {
        if radii.len() < Self::MIN_NODES {
            return Err(Error::Invalid(format!(
                "radius function needs at least {} nodes, got {}",
                Self::MIN_NODES,
                radii.len()
            )));
        }
        if let Some(r) = radii.iter().find(|r| !r.is_finite() || **r < 0.0) {
            return Err(Error::Invalid(format!("radius {r} is negative or not finite")));
        }
        Ok(RadiusFunction { radii })
    }

    pub fn constant(m: usize, r: f64) -> Result<Self> {
        RadiusFunction::new(vec![r; m])
    }

    /// Samples `f` at the node angles.
    pub fn from_fn(m: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        RadiusFunction::new((0..m).map(|k| f(TAU * k as f64 / m as f64)).collect())
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn node(&self, k: usize) -> f64 {
        self.radii[k % self.radii.len()]
    }

    pub fn node_angle(&self, k: usize) -> f64 {
        TAU * k as f64 / self.radii.len() as f64
    }

    #[inline]
    pub fn eval(&self, theta: f64) -> f64 {
        let m = self.radii.len();
        let u = theta.rem_euclid(TAU) / TAU * m as f64;
        let k = (u.floor() as usize).min(m - 1);
        let f = u - k as f64;
        let r0 = self.radii[k];
        let r1 = self.radii[(k + 1) % m];
        r0 + (r1 - r0) * f
    }

    pub fn max_radius(&self) -> f64 {
        self.radii.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_radius(&self) -> f64 {
        self.radii.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Minimum over the closed angular interval `[a, b]` (with `a ≤ b`, taken modulo 2π).
    pub fn min_over(&self, a: f64, b: f64) -> f64 {
        let m = self.radii.len() as f64;
        let mut best = self.eval(a).min(self.eval(b));
        let first = (a / TAU * m).ceil() as i64;
        let last = (b / TAU * m).floor() as i64;
        for k in first..=last {
            best = best.min(self.radii[k.rem_euclid(m as i64) as usize]);
        }
        best
    }

    /// `self + tau · (other − self)` node by node.
    pub fn lerp(&self, other: &RadiusFunction, tau: f64) -> RadiusFunction {
        self.zip_with(other, |a, b| a + tau * (b - a))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> RadiusFunction {
        RadiusFunction { radii: self.radii.iter().map(|r| f(*r)).collect() }
    }

    pub fn zip_with(&self, other: &RadiusFunction, f: impl Fn(f64, f64) -> f64) -> RadiusFunction {
        assert_eq!(self.len(), other.len(), "radius functions on different grids");
        RadiusFunction { radii: self.radii.iter().zip(&other.radii).map(|(a, b)| f(*a, *b)).collect() }
    }

    /// The same function resampled on an `m`-node grid so that the result
    /// never exceeds `self`.
    pub fn lower_envelope(&self, m: usize) -> RadiusFunction {
        if m == self.len() {
            return self.clone();
        }
        let step = TAU / m as f64;
        let radii = (0..m)
            .map(|k| {
                let t = step * k as f64;
                self.min_over(t - step, t + step)
            })
            .collect();
        RadiusFunction { radii }
    }
}

/// `{ origin + t·ξ : 0 ≤ t ≤ ρ(ξ) }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarlikeSet {
    pub origin: Point2,
    #[serde(rename = "radii")]
    pub radius: RadiusFunction,
}

impl StarlikeSet {
    pub fn new(origin: Point2, radius: RadiusFunction) -> Result<Self> {
        if !origin.is_finite() {
            return Err(Error::Invalid("starlike origin is not finite".into()));
        }
        Ok(StarlikeSet { origin, radius })
    }

    pub fn disc(center: Point2, r: f64, m: usize) -> Result<Self> {
        StarlikeSet::new(center, RadiusFunction::constant(m, r)?)
    }

    #[inline]
    pub fn contains(&self, p: Point2) -> bool {
        let v = p - self.origin;
        let t = v.norm();
        t == 0.0 || t <= self.radius.eval(v.angle())
    }

    pub fn contains_within(&self, p: Point2, tol: f64) -> bool {
        let v = p - self.origin;
        let t = v.norm();
        t <= tol || t <= self.radius.eval(v.angle()) + tol
    }

    /// Closed boundary polyline through every node angle, with at least `n` points.
    pub fn boundary(&self, n: usize) -> Vec<Point2> {
        let m = self.radius.len();
        let per = n.div_ceil(m).max(1);
        let total = per * m;
        (0..total)
            .map(|k| {
                let theta = TAU * k as f64 / total as f64;
                self.origin + Point2::polar(self.radius.eval(theta), theta)
            })
            .collect()
    }

    /// Boundary points no farther than `spacing` apart, plus the origin.
    pub fn boundary_sample(&self, spacing: f64) -> Result<CompactSample> {
        let r = self.radius.max_radius();
        let n = ((TAU * 2.0 * r / spacing).ceil() as usize).clamp(self.radius.len(), 4_000_000);
        let mut pts = self.boundary(n);
        // Spokes where the radius changes fast.
        let total = pts.len();
        let dtheta = TAU / total as f64;
        for k in 0..total {
            let gap = pts[k].dist(pts[(k + 1) % total]);
            if gap > spacing {
                let extra = ((gap / spacing).ceil() as usize).min(100_000);
                for j in 1..extra {
                    let theta = dtheta * (k as f64 + j as f64 / extra as f64);
                    pts.push(self.origin + Point2::polar(self.radius.eval(theta), theta));
                }
            }
        }
        pts.push(self.origin);
        CompactSample::new(pts, spacing)
    }

    pub fn body(&self) -> Region {
        Region::Starlike(self.clone())
    }
}

/// One tagged element of a null collection.
#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub id: u32,
    pub sample: CompactSample,
}

/// Finitely many pairwise disjoint sampled compacta.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NullCollection {
    members: Vec<Member>,
}

impl NullCollection {
    pub fn new(members: Vec<Member>) -> Result<Self> {
        let mut pts = Vec::new();
        let mut owner = Vec::new();
        for (i, m) in members.iter().enumerate() {
            pts.extend_from_slice(m.sample.points());
            owner.extend(std::iter::repeat_n(i, m.sample.len()));
        }
        if !pts.is_empty() {
            let cell = members.iter().map(|m| m.sample.mesh()).fold(f64::INFINITY, f64::min);
            let index = SpatialIndex::new(&pts, cell.max(1e-9));
            for (i, p) in pts.iter().enumerate() {
                let mut clash = None;
                index.for_each_within(&pts, *p, 0.0, |j| {
                    if owner[j] != owner[i] {
                        clash = Some(j);
                    }
                });
                if let Some(j) = clash {
                    return Err(crate::error::invariant(
                        vec![members[owner[i]].id, members[owner[j]].id],
                        "null collection members intersect",
                    ));
                }
            }
        }
        Ok(NullCollection { members })
    }

    pub fn empty() -> Self {
        NullCollection::default()
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The same collection pushed through `f`.
    pub fn mapped(&self, f: impl Fn(Point2) -> Point2 + Sync, stretch: f64) -> NullCollection {
        NullCollection {
            members: self
                .members
                .iter()
                .map(|m| Member { id: m.id, sample: m.sample.mapped(&f, stretch) })
                .collect(),
        }
    }
}

/// How one obstacle fared under a squeeze.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstacleOutcome {
    pub id: u32,
    pub fixed: bool,
    pub image_diameter: f64,
}

impl ObstacleOutcome {
    pub fn ok(&self, eps: f64) -> bool {
        self.fixed || self.image_diameter < eps
    }
}

/// A squeeze together with the data it was certified against.
#[derive(Clone, Debug)]
pub struct Squeeze {
    pub chain: HomeoChain,
    pub stage_count: usize,
    pub working_collar: RadiusFunction,
    pub obstacles: Vec<ObstacleOutcome>,
    pub image_diameter: f64,
}

pub const MAX_STAGES: usize = 32;

/// Staged radial squeeze of `e` inside `collar`, see [`radial_squeeze_report`].
pub fn radial_squeeze(
    e: &StarlikeSet,
    collar: &RadiusFunction,
    obstacles: &NullCollection,
    eps: f64,
) -> Result<HomeoChain> {
    Ok(radial_squeeze_report(Exec::default(), e, collar, obstacles, eps)?.chain)
}

/// A chain of radial stages about `e.origin` that is the identity outside
/// the collar body, shrinks `e` to diameter at most `eps / 4`, and leaves
/// every obstacle either fixed pointwise or of diameter below `eps`.
pub fn radial_squeeze_report(
    exec: Exec,
    e: &StarlikeSet,
    collar: &RadiusFunction,
    obstacles: &NullCollection,
    eps: f64,
) -> Result<Squeeze> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Invalid(format!("epsilon must be positive, got {eps}")));
    }
    let rho = &e.radius;
    let m = rho.len();
    let big_r = rho.max_radius();
    let mesh_b = eps / 16.0;
    let boundary = e.boundary_sample(mesh_b)?;
    let boundary_index = SpatialIndex::new(boundary.points(), mesh_b);

    let step = TAU / m as f64;
    let w: Vec<f64> = if collar.len() == m {
        collar.radii().to_vec()
    } else {
        (0..m).map(|k| collar.min_over(step * k as f64 - step, step * k as f64 + step)).collect()
    };
    if let Some(k) = (0..m).find(|&k| w[k] <= rho.node(k)) {
        return Err(Error::CollarTooTight(format!(
            "collar {} does not exceed radius {} at node {k}",
            w[k],
            rho.node(k)
        )));
    }

    for member in obstacles.members() {
        if member.sample.points().iter().any(|p| e.contains(*p)) {
            return Err(Error::ObstacleMeetsSet(member.id));
        }
    }

    let identity = |w: Vec<f64>| -> Result<Squeeze> {
        let obstacles = obstacles
            .members()
            .iter()
            .map(|mb| ObstacleOutcome {
                id: mb.id,
                fixed: true,
                image_diameter: diameter_of(mb.sample.points()).unwrap_or(0.0),
            })
            .collect();
        Ok(Squeeze {
            chain: HomeoChain::identity(),
            stage_count: 0,
            working_collar: RadiusFunction::new(w)?,
            obstacles,
            image_diameter: diameter_of(boundary.points())?,
        })
    };
    if 2.0 * big_r < eps || diameter_of(boundary.points())? + 2.0 * mesh_b < eps {
        return identity(w);
    }

    let collar_now = RadiusFunction::new(w.clone())?;
    let in_collar =
        |p: Point2, c: &RadiusFunction| -> bool { StarlikeSet { origin: e.origin, radius: c.clone() }.contains(p) };

    // Obstacles that must be kept out of the support entirely.
    let mut avoid: Vec<usize> = obstacles
        .members()
        .iter()
        .enumerate()
        .filter(|(_, mb)| {
            diameter_of(mb.sample.points()).unwrap_or(0.0) >= eps
                && mb.sample.points().iter().any(|p| in_collar(*p, &collar_now))
        })
        .map(|(i, _)| i)
        .collect();

    let lambda = eps / (8.0 * big_r);
    let k0 = ((1.0 / lambda).log2().ceil() as usize).max(1);

    loop {
        let mut wk = w.clone();
        for &i in &avoid {
            let mb = &obstacles.members()[i];
            let d = mb
                .sample
                .points()
                .iter()
                .map(|p| boundary_index.nearest(boundary.points(), *p).map_or(f64::INFINITY, |(_, d)| d))
                .fold(f64::INFINITY, f64::min)
                - mesh_b / 2.0
                - mb.sample.mesh();
            if d <= 0.0 {
                return Err(Error::BigObstacle(mb.id));
            }
            for (k, wv) in wk.iter_mut().enumerate() {
                *wv = wv.min(rho.node(k) + 0.5 * d);
            }
        }
        let working = RadiusFunction::new(wk)?;

        let mut k = k0;
        let mut failing: Vec<usize> = Vec::new();
        while k <= MAX_STAGES {
            let chain = build_stages(e, &working, lambda, k)?;
            let outcomes: Vec<ObstacleOutcome> = par::map(exec, obstacles.members(), |mb| {
                let img: Vec<Point2> = mb.sample.points().iter().map(|p| chain.apply(*p)).collect();
                let fixed = img.iter().zip(mb.sample.points()).all(|(a, b)| a.same_bits(*b));
                ObstacleOutcome { id: mb.id, fixed, image_diameter: diameter_of(&img).unwrap_or(0.0) }
            });
            let image: Vec<Point2> = boundary.points().iter().map(|p| chain.apply(*p)).collect();
            let image_diameter = diameter_of(&image)?;
            failing = outcomes
                .iter()
                .enumerate()
                .filter(|(_, o)| !o.ok(eps))
                .map(|(i, _)| i)
                .collect();
            if failing.is_empty() && image_diameter < eps {
                return Ok(Squeeze {
                    chain,
                    stage_count: k,
                    working_collar: working,
                    obstacles: outcomes,
                    image_diameter,
                });
            }
            k *= 2;
        }
        // Small obstacles that the staging keeps stretching are avoided like big ones.
        let fresh: Vec<usize> = failing.into_iter().filter(|i| !avoid.contains(i)).collect();
        if fresh.is_empty() {
            return Err(Error::StageBudget(MAX_STAGES));
        }
        avoid.extend(fresh);
    }
}

fn build_stages(e: &StarlikeSet, working: &RadiusFunction, lambda: f64, k: usize) -> Result<HomeoChain> {
    let rho = &e.radius;
    let mu = lambda.powf(1.0 / k as f64);
    let gap = working.zip_with(rho, |w, r| w - r);
    let mut maps = Vec::with_capacity(k);
    for i in 1..=k {
        let shrink = mu.powi(i as i32 - 1);
        let s = gap.map(|g| g * 0.5f64.powi(i as i32));
        let inner = rho.zip_with(&s, |r, s| shrink * r + s);
        let outer = rho.zip_with(&s, |r, s| shrink * r + 2.0 * s);
        let target = inner.map(|a| mu * a);
        maps.push(Homeo::Radial(RadialStage::new(e.origin, inner, target, outer)?));
    }
    Ok(HomeoChain::new(maps))
}
