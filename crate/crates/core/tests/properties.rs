use std::collections::HashSet;
use std::f64::consts::TAU;

use proptest::prelude::*;

use shrinklab::decomposition::{bing_check, Decomposition, Element, QuotientGraph, QuotientPoint, Scene};
use shrinklab::homeo::{Affine2, Homeo, HomeoChain, PlanarMap, RadialStage};
use shrinklab::metric::{diameter_of, epsilon_net, hausdorff, CompactSample};
use shrinklab::scene::{parse_scene, run_shrink, serialize_scene, ElementSpec, SceneFile};
use shrinklab::starlike::{radial_squeeze, NullCollection, RadiusFunction, StarlikeSet};
use shrinklab::{Point2, Region};

fn point(r: f64) -> impl Strategy<Value = Point2> {
    (-r..r, -r..r).prop_map(|(x, y)| Point2::new(x, y))
}

fn points(r: f64, n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Point2>> {
    prop::collection::vec(point(r), n)
}

fn radii(lo: f64, hi: f64) -> impl Strategy<Value = RadiusFunction> {
    prop::collection::vec(lo..hi, 8..24).prop_map(|v| RadiusFunction::new(v).unwrap())
}

fn affine() -> impl Strategy<Value = Affine2> {
    (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("well conditioned", |(a, b, c, d, _, _)| (a * d - b * c).abs() > 0.2)
        .prop_map(|(a, b, c, d, e, f)| Affine2::new([a, b, c, d, e, f]).unwrap())
}

fn radial() -> impl Strategy<Value = RadialStage> {
    (point(0.5), 8usize..20).prop_flat_map(|(o, m)| {
        let knot = (0.05..0.5f64, 0.02..0.5f64, 0.05..0.5f64);
        prop::collection::vec(knot, m).prop_map(move |ks| {
            let inner = RadiusFunction::new(ks.iter().map(|k| k.0).collect()).unwrap();
            let target = RadiusFunction::new(ks.iter().map(|k| k.1).collect()).unwrap();
            let outer = RadiusFunction::new(ks.iter().map(|k| k.0.max(k.1) + k.2).collect()).unwrap();
            RadialStage::new(o, inner, target, outer).unwrap()
        })
    })
}

fn homeo() -> impl Strategy<Value = Homeo> {
    prop_oneof![
        affine().prop_map(Homeo::Affine),
        radial().prop_map(Homeo::Radial),
        (affine(), radial()).prop_map(|(a, r)| Homeo::Conjugate {
            chart: Box::new(Homeo::Affine(a)),
            inner: HomeoChain::new(vec![Homeo::Radial(r)]),
        }),
    ]
}

fn chain() -> impl Strategy<Value = HomeoChain> {
    prop::collection::vec(homeo(), 1..5).prop_map(HomeoChain::new)
}

fn brute_diameter(pts: &[Point2]) -> f64 {
    pts.iter().flat_map(|p| pts.iter().map(move |q| p.dist(*q))).fold(0.0, f64::max)
}

fn brute_hausdorff(a: &[Point2], b: &[Point2]) -> f64 {
    let one = |x: &[Point2], y: &[Point2]| {
        x.iter().map(|p| y.iter().map(|q| p.dist(*q)).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

fn sample(pts: Vec<Point2>) -> CompactSample {
    CompactSample::new(pts, 0.01).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn diameter_permutation_invariant_and_monotone(pts in points(2.0, 1..40), extra in points(3.0, 0..10), seed in any::<u64>()) {
        let d = diameter_of(&pts).unwrap();
        prop_assert!((d - brute_diameter(&pts)).abs() <= 1e-12);
        let mut shuffled = pts.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            shuffled.swap(i, (seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64) % (i as u64 + 1)) as usize);
        }
        prop_assert_eq!(diameter_of(&shuffled).unwrap(), d);
        let mut sup = pts.clone();
        sup.extend(extra);
        prop_assert!(diameter_of(&sup).unwrap() >= d);
    }

    #[test]
    fn hausdorff_is_symmetric_and_triangular(a in points(1.0, 1..20), b in points(1.0, 1..20), c in points(1.0, 1..20)) {
        let (sa, sb, sc) = (sample(a.clone()), sample(b.clone()), sample(c));
        let ab = hausdorff(&sa, &sb).unwrap();
        prop_assert_eq!(ab, hausdorff(&sb, &sa).unwrap());
        prop_assert!((ab - brute_hausdorff(&a, &b)).abs() <= 1e-12);
        let ac = hausdorff(&sa, &sc).unwrap();
        let cb = hausdorff(&sc, &sb).unwrap();
        prop_assert!(ab <= ac + cb + 1e-12);
    }

    #[test]
    fn epsilon_net_covers_a_finer_grid(center in point(0.5), rho in radii(0.1, 0.6), mesh in 0.03..0.15f64) {
        let set = StarlikeSet::new(center, rho).unwrap();
        let region = Region::Starlike(set);
        let net = epsilon_net(&region, mesh).unwrap();
        let b = region.bbox().unwrap();
        let step = mesh / 10.0;
        let nx = (b.width() / step).ceil() as usize + 1;
        let ny = (b.height() / step).ceil() as usize + 1;
        for i in 0..nx {
            for j in 0..ny {
                let p = Point2::new(b.min.x + i as f64 * step, b.min.y + j as f64 * step);
                if region.contains(p) {
                    let near = net.points().iter().any(|q| q.dist(p) <= mesh);
                    prop_assert!(near, "({}, {}) not covered", p.x, p.y);
                }
            }
        }
    }

    #[test]
    fn catalog_maps_invert(h in chain(), probes in points(1.5, 200..400)) {
        let inv = h.inverse();
        for p in probes {
            prop_assert!(inv.apply(h.apply(p)).dist(p) < 1e-9);
            prop_assert!(h.apply(inv.apply(p)).dist(p) < 1e-9);
            prop_assert!(h.apply_inverse(p).dist(inv.apply(p)) < 1e-12);
        }
    }

    #[test]
    fn points_outside_support_are_fixed(h in chain(), probes in points(2.0, 200..400)) {
        let support = h.support();
        for p in probes {
            if !support.contains(p) {
                prop_assert!(h.apply(p).same_bits(p));
            }
        }
    }

    #[test]
    fn chain_evaluation_is_associative(h in chain(), split in 0usize..5, probes in points(1.5, 50..100)) {
        let k = split.min(h.len());
        let first = HomeoChain::new(h.maps[..k].to_vec());
        let second = HomeoChain::new(h.maps[k..].to_vec());
        for p in probes {
            let direct = h.apply(p);
            let staged = second.apply(first.apply(p));
            prop_assert!(direct.dist(staged) <= 1e-12);
            let manual = h.maps.iter().fold(p, |q, m| m.apply(q));
            prop_assert!(direct.dist(manual) <= 1e-12);
        }
    }

    #[test]
    fn squeeze_preserves_rays_and_order(rho in radii(0.2, 0.6), gap in 0.1..0.4f64, eps in 0.05..0.3f64, angles in prop::collection::vec(0.0..TAU, 8..16)) {
        let e = StarlikeSet::new(Point2::new(0.1, -0.2), rho).unwrap();
        let collar = e.radius.map(|r| r + gap);
        let h = radial_squeeze(&e, &collar, &NullCollection::empty(), eps).unwrap();
        let o = e.origin;
        for theta in angles {
            let reach = collar.eval(theta);
            let mut last = vec![-1.0; h.maps.len() + 1];
            for i in 1..=64 {
                let p = o + Point2::polar(reach * i as f64 / 64.0, theta);
                let q = h.apply(p);
                prop_assert!((q - o).cross(p - o).abs() <= 1e-12);
                let mut x = p;
                let mut radii = vec![(x - o).norm()];
                for m in &h.maps {
                    x = m.apply(x);
                    radii.push((x - o).norm());
                }
                for (r, l) in radii.iter().zip(&last) {
                    prop_assert!(*r > *l);
                }
                last = radii;
            }
        }
    }
}

fn small_decomposition(centers: &[(Point2, f64)], mesh: f64) -> Option<(Scene, Decomposition)> {
    let scene = Scene::new(Region::disc(Point2::ORIGIN, 0.6), mesh).ok()?;
    let mut elements = Vec::new();
    for (i, (c, r)) in centers.iter().enumerate() {
        let body = Region::disc(*c, *r);
        elements.push(Element::new(i as u32 + 1, body.clone(), epsilon_net(&body, mesh).ok()?));
    }
    let d = Decomposition::new(elements, Region::disc(Point2::ORIGIN, 0.55)).ok()?;
    Some((scene, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quotient_distance_is_a_pseudometric(
        centers in prop::collection::vec((point(0.3), 0.02..0.12f64), 0..3),
        picks in prop::collection::vec(any::<prop::sample::Index>(), 12),
    ) {
        let Some((scene, d)) = small_decomposition(&centers, 0.08) else { return Ok(()) };
        let g = QuotientGraph::new(&scene, &d);
        let qs: Vec<QuotientPoint> = picks.iter().map(|i| g.project(g.points()[i.index(g.points().len())]).unwrap()).collect();
        for a in &qs {
            for b in &qs {
                let ab = g.distance(*a, *b);
                prop_assert_eq!(ab, g.distance(*b, *a));
                prop_assert_eq!(ab == 0.0, a == b);
                for c in &qs {
                    prop_assert!(g.distance(*a, *c) <= ab + g.distance(*b, *c));
                }
            }
        }
        if d.elements().is_empty() {
            for a in &qs {
                for b in &qs {
                    if let (QuotientPoint::Point(p), QuotientPoint::Point(q)) = (a, b) {
                        prop_assert!(g.distance(*a, *b) >= p.dist(*q) - 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn identity_displaces_nothing(centers in prop::collection::vec((point(0.3), 0.02..0.12f64), 1..3), eps in 0.05..0.5f64) {
        let Some((scene, d)) = small_decomposition(&centers, 0.08) else { return Ok(()) };
        let report = bing_check(&scene, &d, &HomeoChain::identity(), eps);
        prop_assert_eq!(report.condition_i, 0.0);
        let big = d.elements().iter().any(|e| brute_diameter(e.sample.points()) >= eps);
        prop_assert_eq!(report.pass_ii, !big);
    }

    #[test]
    fn saturation_operators(mask in any::<u16>()) {
        let a: Vec<Point2> = (0..3).map(|k| Point2::new(k as f64, 0.0)).collect();
        let b: Vec<Point2> = (0..2).map(|k| Point2::new(k as f64, 1.0)).collect();
        let free: Vec<Point2> = (0..4).map(|k| Point2::new(k as f64, 2.0)).collect();
        let d = Decomposition::new(
            vec![
                Element::from_sample(1, CompactSample::new(a.clone(), 1.0).unwrap()),
                Element::from_sample(2, CompactSample::new(b.clone(), 1.0).unwrap()),
            ],
            Region::Plane,
        )
        .unwrap();
        let pool: Vec<Point2> = a.iter().chain(&b).chain(&free).copied().collect();
        let s: Vec<Point2> = pool.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p).collect();
        let sat = d.saturate(&s);
        prop_assert!(d.is_saturated(&sat));
        let again: HashSet<_> = d.saturate(&sat).iter().map(|p| (p.x.to_bits(), p.y.to_bits())).collect();
        let once: HashSet<_> = sat.iter().map(|p| (p.x.to_bits(), p.y.to_bits())).collect();
        prop_assert_eq!(again, once);

        let big = d.largest_saturated(&s);
        prop_assert!(d.is_saturated(&big));
        let key = |p: &Point2| (p.x.to_bits(), p.y.to_bits());
        let big_set: HashSet<_> = big.iter().map(key).collect();
        let s_set: HashSet<_> = s.iter().map(key).collect();
        prop_assert!(big_set.is_subset(&s_set));
        for sub in 0u32..(1 << s.len()) {
            let t: Vec<Point2> = s.iter().enumerate().filter(|(i, _)| sub >> i & 1 == 1).map(|(_, p)| *p).collect();
            if d.is_saturated(&t) {
                prop_assert!(t.iter().all(|p| big_set.contains(&key(p))));
            }
        }
    }

    #[test]
    fn scene_files_round_trip(origin in point(0.3), rho in radii(0.05, 0.3), mesh in 0.02..0.1f64) {
        let file = SceneFile {
            name: Some("random".into()),
            mesh,
            domain: Region::disc(Point2::ORIGIN, 1.0),
            u: Region::disc(Point2::ORIGIN, 0.9),
            elements: vec![ElementSpec::Starlike { id: 7, origin, radii: rho }],
        };
        let text = serialize_scene(&file).unwrap();
        let back = parse_scene(&text).unwrap();
        prop_assert_eq!(&back.file, &file);
        prop_assert_eq!(serialize_scene(&back.file).unwrap(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn report_flags_are_recomputable(r in 0.05..0.3f64, eps in 0.05..0.4f64) {
        let text = format!(
            "mesh = 0.04\ndomain = {{ kind = \"disc\", center = [0.0, 0.0], radius = 1.0 }}\n\
             u = {{ kind = \"disc\", center = [0.0, 0.0], radius = 0.8 }}\n\
             [[elements]]\nkind = \"starlike\"\nid = 1\norigin = [0.0, 0.0]\nradii = [{r}, {r}, {r}, {r}, {r}, {r}, {r}, {r}]\n"
        );
        let loaded = parse_scene(&text).unwrap();
        let report = run_shrink(&loaded, eps, 0).unwrap().report;
        prop_assert_eq!(
            report.recomputed(),
            [report.pass_i, report.pass_ii, report.pass_support, report.pass_homeo, report.pass]
        );
        prop_assert_eq!(report.pass_i, report.condition_i < eps);
        prop_assert_eq!(report.pass_ii, report.condition_ii < eps);
        prop_assert_eq!(report.pass_homeo, report.inverse_error < 1e-9 && report.collisions == 0);
        prop_assert!(report.pass);
    }
}
