//! A closed catalog of planar homeomorphisms with hand-written inverses.
//!
//! Every map declares a support outside of which it returns its argument
//! unchanged, bit for bit. Chains compose left to right.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{BBox, CompactSample, Point2, Region, SpatialIndex};
use crate::par::{self, Exec};
use crate::starlike::{RadiusFunction, StarlikeSet};

/// Anything that can be evaluated forwards and backwards on the plane.
pub trait PlanarMap: Sync {
    fn apply(&self, p: Point2) -> Point2;
    fn apply_inverse(&self, p: Point2) -> Point2;
    /// `false` guarantees `apply(p) == p` bitwise (and likewise for the inverse).
    fn moves(&self, p: Point2) -> bool;
}

/// `p ↦ (a·x + c·y + e, b·x + d·y + f)` with coefficients `[a, b, c, d, e, f]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Affine2 {
    pub coeffs: [f64; 6],
}

impl Affine2 {
    pub const IDENTITY: Affine2 = Affine2 { coeffs: [1.0, 0.0, 0.0, 1.0, 0.0, 0.0] };

    pub fn new(coeffs: [f64; 6]) -> Result<Self> {
        let a = Affine2 { coeffs };
        if !coeffs.iter().all(|c| c.is_finite()) || a.det() == 0.0 {
            return Err(Error::Invalid(format!("affine map {coeffs:?} is not invertible")));
        }
        Ok(a)
    }

    pub fn scale_about(s: f64, center: Point2) -> Self {
        Affine2 { coeffs: [s, 0.0, 0.0, s, center.x * (1.0 - s), center.y * (1.0 - s)] }
    }

    pub fn translate(v: Point2) -> Self {
        Affine2 { coeffs: [1.0, 0.0, 0.0, 1.0, v.x, v.y] }
    }

    pub fn det(&self) -> f64 {
        let [a, b, c, d, _, _] = self.coeffs;
        a * d - b * c
    }

    #[inline]
    pub fn apply(&self, p: Point2) -> Point2 {
        let [a, b, c, d, e, f] = self.coeffs;
        Point2::new(a * p.x + c * p.y + e, b * p.x + d * p.y + f)
    }

    pub fn inverse(&self) -> Affine2 {
        let [a, b, c, d, e, f] = self.coeffs;
        let det = self.det();
        let (ia, ib, ic, id) = (d / det, -b / det, -c / det, a / det);
        Affine2 { coeffs: [ia, ib, ic, id, -(ia * e + ic * f), -(ib * e + id * f)] }
    }

    /// Operator norm of the linear part.
    pub fn stretch(&self) -> f64 {
        let [a, b, c, d, _, _] = self.coeffs;
        let s = a * a + b * b + c * c + d * d;
        let det = a * d - b * c;
        ((s + (s * s - 4.0 * det * det).max(0.0).sqrt()) / 2.0).sqrt()
    }

    fn lerp_from_identity(&self, tau: f64) -> Affine2 {
        let mut coeffs = Affine2::IDENTITY.coeffs;
        for (c, t) in coeffs.iter_mut().zip(self.coeffs) {
            *c += tau * (t - *c);
        }
        Affine2 { coeffs }
    }
}

/// One radial stage about `origin`: along every ray, the segment
/// `[0, inner]` is scaled onto `[0, target]`, `[inner, outer]` is mapped
/// affinely onto `[target, outer]`, and everything at `t ≥ outer` is fixed.
/// The three radius functions share one angular grid, so the knots are
/// piecewise linear in angle and the inverse is the same stage with
/// `inner` and `target` swapped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialStage {
    pub origin: Point2,
    pub inner: RadiusFunction,
    pub target: RadiusFunction,
    pub outer: RadiusFunction,
}

impl RadialStage {
    pub fn new(
        origin: Point2,
        inner: RadiusFunction,
        target: RadiusFunction,
        outer: RadiusFunction,
    ) -> Result<Self> {
        let m = inner.len();
        if target.len() != m || outer.len() != m {
            return Err(Error::Invalid("radial stage knots must share one angular grid".into()));
        }
        for k in 0..m {
            let (a, c, b) = (inner.node(k), target.node(k), outer.node(k));
            let ok = b > a && b > c && a >= 0.0 && c >= 0.0 && ((a == 0.0) == (c == 0.0));
            if !ok {
                return Err(Error::Invalid(format!(
                    "radial stage knot {k} is not monotone: inner {a}, target {c}, outer {b}"
                )));
            }
        }
        Ok(RadialStage { origin, inner, target, outer })
    }

    pub fn inverse(&self) -> RadialStage {
        RadialStage {
            origin: self.origin,
            inner: self.target.clone(),
            target: self.inner.clone(),
            outer: self.outer.clone(),
        }
    }

    /// The stage with its per-ray displacement scaled by `tau ∈ [0, 1]`.
    pub fn at_time(&self, tau: f64) -> RadialStage {
        let target = self.inner.lerp(&self.target, tau);
        RadialStage { target, ..self.clone() }
    }

    /// Radial profile along direction `theta`.
    pub fn radial_map(&self, theta: f64, t: f64) -> f64 {
        let b = self.outer.eval(theta);
        if t >= b {
            return t;
        }
        let a = self.inner.eval(theta);
        let c = self.target.eval(theta);
        if t <= a {
            t * c / a
        } else {
            c + (t - a) * (b - c) / (b - a)
        }
    }

    #[inline]
    fn eval(&self, p: Point2) -> Point2 {
        let v = p - self.origin;
        let t = v.norm();
        if t == 0.0 {
            return p;
        }
        let theta = v.angle();
        let b = self.outer.eval(theta);
        if t >= b {
            return p;
        }
        let a = self.inner.eval(theta);
        let c = self.target.eval(theta);
        let s = if t <= a { t * c / a } else { c + (t - a) * (b - c) / (b - a) };
        self.origin + v * (s / t)
    }

    #[inline]
    fn moves(&self, p: Point2) -> bool {
        let v = p - self.origin;
        let t = v.norm();
        t != 0.0 && t < self.outer.eval(v.angle())
    }

    pub fn support(&self) -> StarlikeSet {
        StarlikeSet { origin: self.origin, radius: self.outer.clone() }
    }
}

/// An ordered composition `h_k ∘ … ∘ h_1`, stored as `[h_1, …, h_k]`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HomeoChain {
    pub maps: Vec<Homeo>,
}

/// The homeomorphism catalog.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Homeo {
    Identity,
    Affine(Affine2),
    Radial(RadialStage),
    /// `chart⁻¹ ∘ inner ∘ chart`.
    Conjugate { chart: Box<Homeo>, inner: HomeoChain },
    Chain(HomeoChain),
}

impl Homeo {
    pub fn affine(a: Affine2) -> Homeo {
        Homeo::Affine(a)
    }

    /// Composition applying `maps` left to right, with identities dropped.
    pub fn compose(maps: impl IntoIterator<Item = Homeo>) -> Homeo {
        let mut flat: Vec<Homeo> = Vec::new();
        for h in maps {
            match h {
                Homeo::Identity => {}
                Homeo::Chain(c) => flat.extend(c.maps.into_iter().filter(|m| *m != Homeo::Identity)),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Homeo::Identity,
            1 => flat.pop().unwrap(),
            _ => Homeo::Chain(HomeoChain { maps: flat }),
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Homeo::Identity => true,
            Homeo::Chain(c) => c.maps.iter().all(|m| m.is_identity()),
            _ => false,
        }
    }

    pub fn inverse(&self) -> Homeo {
        match self {
            Homeo::Identity => Homeo::Identity,
            Homeo::Affine(a) => Homeo::Affine(a.inverse()),
            Homeo::Radial(r) => Homeo::Radial(r.inverse()),
            Homeo::Conjugate { chart, inner } => {
                Homeo::Conjugate { chart: chart.clone(), inner: inner.inverse() }
            }
            Homeo::Chain(c) => Homeo::Chain(c.inverse()),
        }
    }

    /// The region outside which the map is the identity.
    pub fn support(&self) -> Region {
        match self {
            Homeo::Identity => Region::empty(),
            Homeo::Affine(a) if *a == Affine2::IDENTITY => Region::empty(),
            Homeo::Affine(_) => Region::Plane,
            Homeo::Radial(r) => Region::Starlike(r.support()),
            Homeo::Conjugate { chart, inner } => {
                Region::pullback(inner.support(), (**chart).clone())
            }
            Homeo::Chain(c) => c.support(),
        }
    }

    /// Bounding box of the preimage of a box, `None` if unbounded.
    pub fn preimage_bbox(&self, b: BBox) -> Option<BBox> {
        if b.is_empty() {
            return Some(b);
        }
        match self {
            Homeo::Identity => Some(b),
            Homeo::Affine(a) => {
                let inv = a.inverse();
                Some(BBox::of_points(&b.corners().map(|p| inv.apply(p))))
            }
            // Maps supported in a set S send S onto itself, so the preimage of
            // a box lies in the box together with S.
            Homeo::Radial(r) => Some(b.union(BBox::around(r.origin, r.outer.max_radius()))),
            Homeo::Conjugate { .. } => Some(b.union(self.support().bbox()?)),
            Homeo::Chain(c) => c.maps.iter().rev().try_fold(b, |acc, h| h.preimage_bbox(acc)),
        }
    }

    /// The same map with its displacement scaled by `tau`; used for frames.
    pub fn at_time(&self, tau: f64) -> Homeo {
        match self {
            Homeo::Identity => Homeo::Identity,
            Homeo::Affine(a) => Homeo::Affine(a.lerp_from_identity(tau)),
            Homeo::Radial(r) => Homeo::Radial(r.at_time(tau)),
            Homeo::Conjugate { chart, inner } => Homeo::Conjugate {
                chart: chart.clone(),
                inner: HomeoChain { maps: inner.maps.iter().map(|m| m.at_time(tau)).collect() },
            },
            Homeo::Chain(c) => {
                Homeo::Chain(HomeoChain { maps: c.maps.iter().map(|m| m.at_time(tau)).collect() })
            }
        }
    }

    fn push_atoms(&self, out: &mut Vec<Homeo>) {
        match self {
            Homeo::Identity => {}
            Homeo::Chain(c) => c.maps.iter().for_each(|m| m.push_atoms(out)),
            Homeo::Conjugate { chart, inner } => {
                let mut inner_atoms = Vec::new();
                inner.maps.iter().for_each(|m| m.push_atoms(&mut inner_atoms));
                out.extend(inner_atoms.into_iter().map(|a| Homeo::Conjugate {
                    chart: chart.clone(),
                    inner: HomeoChain { maps: vec![a] },
                }));
            }
            other => out.push(other.clone()),
        }
    }
}

impl PlanarMap for Homeo {
    fn apply(&self, p: Point2) -> Point2 {
        match self {
            Homeo::Identity => p,
            Homeo::Affine(a) => a.apply(p),
            Homeo::Radial(r) => r.eval(p),
            Homeo::Conjugate { chart, inner } => {
                let q = chart.apply(p);
                if !inner.moves(q) {
                    return p;
                }
                chart.apply_inverse(inner.apply(q))
            }
            Homeo::Chain(c) => c.apply(p),
        }
    }

    fn apply_inverse(&self, p: Point2) -> Point2 {
        match self {
            Homeo::Identity => p,
            Homeo::Affine(a) => a.inverse().apply(p),
            Homeo::Radial(r) => r.inverse().eval(p),
            Homeo::Conjugate { chart, inner } => {
                let q = chart.apply(p);
                if !inner.moves(q) {
                    return p;
                }
                chart.apply_inverse(inner.apply_inverse(q))
            }
            Homeo::Chain(c) => c.apply_inverse(p),
        }
    }

    fn moves(&self, p: Point2) -> bool {
        match self {
            Homeo::Identity => false,
            Homeo::Affine(a) => *a != Affine2::IDENTITY,
            Homeo::Radial(r) => r.moves(p),
            Homeo::Conjugate { chart, inner } => inner.moves(chart.apply(p)),
            Homeo::Chain(c) => c.moves(p),
        }
    }
}

impl HomeoChain {
    pub fn identity() -> Self {
        HomeoChain::default()
    }

    pub fn new(maps: Vec<Homeo>) -> Self {
        HomeoChain { maps }
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn push(&mut self, h: Homeo) {
        self.maps.push(h);
    }

    /// `other ∘ self`.
    pub fn then(mut self, other: HomeoChain) -> HomeoChain {
        self.maps.extend(other.maps);
        self
    }

    pub fn inverse(&self) -> HomeoChain {
        HomeoChain { maps: self.maps.iter().rev().map(|m| m.inverse()).collect() }
    }

    pub fn support(&self) -> Region {
        Region::Union { parts: self.maps.iter().map(|m| m.support()).collect() }
    }

    pub fn to_homeo(&self) -> Homeo {
        Homeo::compose(self.maps.iter().cloned())
    }

    /// Flattened elementary maps: nested chains are spliced and conjugates
    /// are distributed over their inner chains.
    pub fn atoms(&self) -> Vec<Homeo> {
        let mut out = Vec::new();
        self.maps.iter().for_each(|m| m.push_atoms(&mut out));
        out
    }

    /// The chain run up to `fraction ∈ [0, 1]` of its elementary maps, the
    /// current one partially applied by displacement scaling.
    pub fn partial(&self, fraction: f64) -> HomeoChain {
        let atoms = self.atoms();
        let total = fraction.clamp(0.0, 1.0) * atoms.len() as f64;
        let whole = (total.floor() as usize).min(atoms.len());
        let mut maps: Vec<Homeo> = atoms[..whole].to_vec();
        let rest = total - whole as f64;
        if whole < atoms.len() && rest > 0.0 {
            maps.push(atoms[whole].at_time(rest));
        }
        HomeoChain { maps }
    }
}

impl PlanarMap for HomeoChain {
    fn apply(&self, p: Point2) -> Point2 {
        self.maps.iter().fold(p, |q, h| h.apply(q))
    }

    fn apply_inverse(&self, p: Point2) -> Point2 {
        self.maps.iter().rev().fold(p, |q, h| h.apply_inverse(q))
    }

    fn moves(&self, p: Point2) -> bool {
        self.maps.iter().any(|h| h.moves(p))
    }
}

/// `sup_x d(f(x), g(x))` over the sample.
pub fn uniform_distance<T, F, G, D>(samples: &[Point2], f: F, g: G, metric: D) -> f64
where
    T: Send,
    F: Fn(Point2) -> T + Sync + Send,
    G: Fn(Point2) -> T + Sync + Send,
    D: Fn(&T, &T) -> f64 + Sync + Send,
{
    uniform_distance_with(Exec::default(), samples, f, g, metric)
}

pub fn uniform_distance_with<T, F, G, D>(exec: Exec, samples: &[Point2], f: F, g: G, metric: D) -> f64
where
    T: Send,
    F: Fn(Point2) -> T + Sync + Send,
    G: Fn(Point2) -> T + Sync + Send,
    D: Fn(&T, &T) -> f64 + Sync + Send,
{
    par::max_f64(exec, samples, |x| metric(&f(*x), &g(*x)))
}

/// Numerical certificate that a map is a homeomorphism on a sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomeoReport {
    pub samples: usize,
    pub tolerance: f64,
    /// `max |h⁻¹(h(p)) − p|` and `max |h(h⁻¹(p)) − p|`.
    pub inverse_error: f64,
    /// Smallest `|h(p) − h(q)| / |p − q|` over mesh-neighbour pairs.
    pub min_separation_ratio: f64,
    /// Distinct samples whose images coincide within 1e-12.
    pub collisions: usize,
    /// Samples outside the declared support that moved.
    pub support_violations: usize,
    /// Samples with a non-positive finite-difference Jacobian.
    pub jacobian_failures: usize,
    pub pass: bool,
}

impl HomeoReport {
    pub fn recompute_pass(&self) -> bool {
        self.inverse_error < self.tolerance
            && self.collisions == 0
            && self.support_violations == 0
            && self.jacobian_failures == 0
            && self.min_separation_ratio > 0.0
    }
}

pub fn check_homeo<H: PlanarMap + ?Sized>(h: &H, sample: &CompactSample, tol: f64) -> HomeoReport {
    check_homeo_with(Exec::default(), h, sample, tol)
}

pub fn check_homeo_with<H: PlanarMap + ?Sized>(
    exec: Exec,
    h: &H,
    sample: &CompactSample,
    tol: f64,
) -> HomeoReport {
    let pts = sample.points();
    let images: Vec<Point2> = par::map(exec, pts, |p| h.apply(*p));

    let inverse_error = par::max_f64(exec, pts, |p| {
        let back = h.apply_inverse(h.apply(*p));
        let fwd = h.apply(h.apply_inverse(*p));
        back.dist(*p).max(fwd.dist(*p))
    });

    let support_violations = par::map(exec, pts, |p| {
        let moved = !h.moves(*p) && (!h.apply(*p).same_bits(*p) || !h.apply_inverse(*p).same_bits(*p));
        moved as usize
    })
    .into_iter()
    .sum();

    let jacobian_failures = par::map(exec, pts, |p| {
        let step = 1e-7 * (1.0 + p.norm());
        let dx = h.apply(*p + Point2::new(step, 0.0)) - h.apply(*p - Point2::new(step, 0.0));
        let dy = h.apply(*p + Point2::new(0.0, step)) - h.apply(*p - Point2::new(0.0, step));
        (dx.cross(dy) <= 0.0) as usize
    })
    .into_iter()
    .sum();

    let min_separation_ratio = {
        let radius = sample.mesh() * 1.01;
        let index = SpatialIndex::new(pts, radius);
        let idx: Vec<usize> = (0..pts.len()).collect();
        par::map(exec, &idx, |&i| {
            let mut best = f64::INFINITY;
            index.for_each_within(pts, pts[i], radius, |j| {
                if j > i {
                    best = best.min(images[i].dist(images[j]) / pts[i].dist(pts[j]));
                }
            });
            best
        })
        .into_iter()
        .fold(f64::INFINITY, f64::min)
    };

    let collisions = count_collisions(&images, 1e-12);

    let mut report = HomeoReport {
        samples: pts.len(),
        tolerance: tol,
        inverse_error,
        min_separation_ratio,
        collisions,
        support_violations,
        jacobian_failures,
        pass: false,
    };
    report.pass = report.recompute_pass();
    report
}

fn count_collisions(images: &[Point2], tol: f64) -> usize {
    let mut order: Vec<usize> = (0..images.len()).collect();
    order.sort_by(|&a, &b| images[a].x.total_cmp(&images[b].x));
    let mut count = 0;
    for (k, &i) in order.iter().enumerate() {
        for &j in &order[k + 1..] {
            if images[j].x - images[i].x > tol {
                break;
            }
            if (images[j].y - images[i].y).abs() <= tol {
                count += 1;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::epsilon_net;

    fn scale_half() -> Homeo {
        Homeo::Affine(Affine2::scale_about(0.5, Point2::ORIGIN))
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(Homeo::Identity.apply(Point2::new(1., 2.)), Point2::new(1., 2.));
        assert_eq!(scale_half().apply(Point2::new(2., 0.)), Point2::new(1., 0.));
        let chain = HomeoChain::new(vec![
            scale_half(),
            Homeo::Affine(Affine2::translate(Point2::new(1.0, 0.0))),
        ]);
        assert_eq!(chain.apply(Point2::new(2., 0.)), Point2::new(2., 0.));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Homeo::Identity.inverse(), Homeo::Identity);
        match scale_half().inverse() {
            Homeo::Affine(a) => assert_eq!(a.coeffs, [2.0, 0.0, 0.0, 2.0, 0.0, 0.0]),
            other => panic!("unexpected inverse {other:?}"),
        }
    }

    #[test]
    fn uniform_distance_examples() {
        let pts = [Point2::new(0.1, 0.2), Point2::new(-0.4, 0.9)];
        let eu = |a: &Point2, b: &Point2| a.dist(*b);
        assert_eq!(uniform_distance(&pts, |p| p, |p| p, eu), 0.0);
        let tr = Affine2::translate(Point2::new(0.3, 0.0));
        let d = uniform_distance(&pts, |p| p, |p| tr.apply(p), eu);
        assert!((d - 0.3).abs() < 1e-15);
    }

    #[test]
    fn check_homeo_controls() {
        let sample = epsilon_net(&Region::disc(Point2::ORIGIN, 1.0), 0.1).unwrap();
        let id = check_homeo(&Homeo::Identity, &sample, 1e-9);
        assert!(id.pass);
        assert_eq!(id.inverse_error, 0.0);
        assert!(check_homeo(&scale_half(), &sample, 1e-9).pass);

        // Negative control: forward scale ½ paired with inverse scale 3.
        struct Mismatched;
        impl PlanarMap for Mismatched {
            fn apply(&self, p: Point2) -> Point2 {
                p * 0.5
            }
            fn apply_inverse(&self, p: Point2) -> Point2 {
                p * 3.0
            }
            fn moves(&self, _: Point2) -> bool {
                true
            }
        }
        let bad = check_homeo(&Mismatched, &sample, 1e-9);
        assert!(bad.inverse_error > 1e-9);
        assert!(!bad.pass);
    }

    #[test]
    fn collision_counter_sees_merged_images() {
        let imgs = [Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 0.0)];
        assert_eq!(count_collisions(&imgs, 1e-12), 1);
    }

    #[test]
    fn non_invertible_affine_rejected() {
        assert!(Affine2::new([1.0, 2.0, 2.0, 4.0, 0.0, 0.0]).is_err());
    }
}
