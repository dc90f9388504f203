//! Regenerates the scene files under `scenes/`.
//!
//! ```text
//! cargo run --example make_scenes -- crates/core/scenes
//! ```

use std::f64::consts::{PI, TAU};
use std::path::PathBuf;

use shrinklab::homeo::{Affine2, Homeo};
use shrinklab::scene::{parse_scene, serialize_scene, ElementSpec, SceneFile, StageSpec};
use shrinklab::starlike::{RadiusFunction, StarlikeSet};
use shrinklab::{Point2, Region};

fn round(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

fn radii(m: usize, f: impl Fn(f64) -> f64) -> RadiusFunction {
    RadiusFunction::from_fn(m, |t| round(f(t))).unwrap()
}

fn star(origin: Point2, r: RadiusFunction) -> StarlikeSet {
    StarlikeSet::new(origin, r).unwrap()
}

fn disc_element(id: u32, center: Point2, r: f64) -> ElementSpec {
    ElementSpec::Starlike { id, origin: center, radii: RadiusFunction::constant(32, r).unwrap() }
}

fn disc(x: f64, y: f64, r: f64) -> Region {
    Region::disc(Point2::new(x, y), r)
}

/// Radius of the circle `|p - c| = r` seen from `o` (inside it) along angle `t`.
fn circle_from(o: Point2, c: Point2, r: f64, t: f64) -> f64 {
    let (dx, dy) = (o.x - c.x, o.y - c.y);
    let b = dx * t.cos() + dy * t.sin();
    let q = dx * dx + dy * dy - r * r;
    -b + (b * b - q).sqrt()
}

/// Horizontal bar of half-length `l` and half-height `h`.
fn bar(m: usize, l: f64, h: f64) -> RadiusFunction {
    radii(m, |t| {
        let s = t.sin().abs();
        if s < 1e-12 { l } else { l.min(h / s) }
    })
}

/// Radius `r` on the angular windows (degrees) and `base` elsewhere.
fn wedges(m: usize, windows: &[(f64, f64)], r: f64, base: f64) -> RadiusFunction {
    radii(m, |t| {
        let deg = t.to_degrees();
        if windows.iter().any(|(a, b)| deg >= a - 1e-9 && deg <= b + 1e-9) { r } else { base }
    })
}

fn squeeze_scene(name: &str, origin: Point2, e: RadiusFunction, collar: RadiusFunction, domain: f64) -> SceneFile {
    SceneFile {
        name: Some(name.into()),
        mesh: 0.02,
        domain: disc(0.0, 0.0, domain),
        u: Region::Starlike(star(origin, collar)),
        elements: vec![ElementSpec::Starlike { id: 1, origin, radii: e }],
    }
}

fn null_family() -> SceneFile {
    let o = Point2::ORIGIN;
    let e = radii(16, |t| 0.4 + 0.05 * (3.0 * t).cos());
    let mut f = squeeze_scene("null_family", o, e, RadiusFunction::constant(16, 1.25).unwrap(), 1.5);
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut placed: Vec<(Point2, f64)> = Vec::new();
    let mut k = 0;
    while placed.len() < 50 {
        let r = (0.07 * 0.93f64.powi(placed.len() as i32)).max(0.004);
        let t = k as f64 * golden;
        let dist = 0.55 + 0.55 * ((k as f64 * 0.37) % 1.0);
        let c = Point2::new(round(dist * t.cos()), round(dist * t.sin()));
        k += 1;
        if c.norm() + r > 1.15 || c.norm() - r < 0.6 {
            continue;
        }
        if placed.iter().any(|(p, s)| p.dist(c) < r + s + 0.04) {
            continue;
        }
        placed.push((c, r));
    }
    for (i, (c, r)) in placed.into_iter().enumerate() {
        f.elements.push(disc_element(i as u32 + 2, c, round(r)));
    }
    f
}

fn five_element() -> SceneFile {
    let b_center = Point2::new(0.6, 0.5);
    SceneFile {
        name: Some("five_element".into()),
        mesh: 0.01,
        domain: disc(0.0, 0.0, 1.5),
        u: disc(0.0, 0.0, 1.3),
        elements: vec![
            disc_element(1, Point2::new(-0.7, 0.3), 0.4),
            ElementSpec::StarlikeEquivalent {
                id: 2,
                chart: Homeo::Affine(Affine2::new([1.0, 0.0, 0.0, 2.0, 0.0, -b_center.y]).unwrap()),
                chart_domain: Region::disc(b_center, 0.4),
                image: StarlikeSet::disc(b_center, 0.25, 32).unwrap(),
            },
            disc_element(3, Point2::new(0.4, -0.6), 0.15),
            disc_element(4, Point2::new(-0.3, -0.5), 0.025),
            disc_element(5, Point2::new(0.0, -0.2), 0.01),
        ],
    }
}

fn single_disc() -> SceneFile {
    SceneFile {
        name: Some("single_disc".into()),
        mesh: 0.01,
        domain: disc(0.0, 0.0, 1.2),
        u: disc(0.0, 0.0, 0.8),
        elements: vec![disc_element(1, Point2::ORIGIN, 0.5)],
    }
}

fn two_lobe() -> SceneFile {
    let e = Point2::new(-0.1, 0.0);
    let m = 64;
    let inner = star(e, bar(m, 0.3, 0.03));
    let lobes = star(e, wedges(m, &[(50.0, 80.0), (230.0, 260.0)], 0.25, 0.01));
    SceneFile {
        name: Some("two_lobe".into()),
        mesh: 0.003,
        domain: disc(0.0, 0.0, 0.65),
        u: disc(0.0, 0.0, 0.6),
        elements: vec![
            ElementSpec::Recursive {
                id: 1,
                point: e,
                stages: vec![
                    StageSpec {
                        body: Region::Union { parts: vec![Region::Starlike(inner.clone()), Region::Starlike(lobes.clone())] },
                        chart: Homeo::Identity,
                        chart_domain: Region::Plane,
                        image: lobes,
                        activation_radius: Some(0.06),
                    },
                    StageSpec {
                        body: Region::Starlike(inner.clone()),
                        chart: Homeo::Identity,
                        chart_domain: Region::Plane,
                        image: inner,
                        activation_radius: None,
                    },
                ],
            },
            disc_element(2, Point2::new(0.3, -0.25), 0.07),
            disc_element(3, Point2::new(-0.35, 0.3), 0.01),
        ],
    }
}

fn three_stage() -> SceneFile {
    let e = Point2::ORIGIN;
    let m = 64;
    let core = star(e, bar(m, 0.1, 0.02));
    let s1 = star(e, wedges(m, &[(60.0, 90.0), (240.0, 270.0)], 0.18, 0.006));
    let s0 = star(e, wedges(m, &[(120.0, 150.0), (300.0, 330.0)], 0.28, 0.01));
    let e1 = Region::Union { parts: vec![Region::Starlike(core.clone()), Region::Starlike(s1.clone())] };
    let e0 = Region::Union { parts: vec![e1.clone(), Region::Starlike(s0.clone())] };
    let stage = |body: Region, image: StarlikeSet, act: Option<f64>| StageSpec {
        body,
        chart: Homeo::Identity,
        chart_domain: Region::Plane,
        image,
        activation_radius: act,
    };
    SceneFile {
        name: Some("three_stage".into()),
        mesh: 0.002,
        domain: disc(0.0, 0.0, 0.45),
        u: disc(0.0, 0.0, 0.4),
        elements: vec![
            ElementSpec::Recursive {
                id: 1,
                point: e,
                stages: vec![
                    stage(e0, s0, Some(0.06)),
                    stage(e1, s1, Some(0.04)),
                    stage(Region::Starlike(core.clone()), core, None),
                ],
            },
            disc_element(2, Point2::new(0.22, 0.18), 0.06),
        ],
    }
}

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "scenes".into()));
    std::fs::create_dir_all(&dir).unwrap();
    let spike = |t: f64| {
        let k = (t / (TAU / 8.0)).round() as usize;
        if k.is_multiple_of(2) { 1.0 } else { 0.2 }
    };
    let pl = |t: f64| {
        let k = (t / (TAU / 10.0)).round() as usize;
        if k.is_multiple_of(2) { 0.7 } else { 0.3 }
    };
    let eo = Point2::new(0.3, 0.1);
    let scenes = vec![
        squeeze_scene("squeeze_disc", Point2::ORIGIN, RadiusFunction::constant(32, 0.5).unwrap(), RadiusFunction::constant(32, 0.8).unwrap(), 1.2),
        squeeze_scene("squeeze_spike4", Point2::ORIGIN, radii(8, spike), radii(8, |t| spike(t) + 0.3), 1.6),
        squeeze_scene("squeeze_pl_star", Point2::ORIGIN, radii(10, pl), radii(10, |t| pl(t) + 0.25), 1.2),
        squeeze_scene(
            "squeeze_eccentric",
            eo,
            radii(64, |t| circle_from(eo, Point2::ORIGIN, 0.5, t)),
            radii(64, |t| circle_from(eo, Point2::ORIGIN, 0.75, t)),
            1.2,
        ),
        null_family(),
        single_disc(),
        five_element(),
        two_lobe(),
        three_stage(),
    ];
    for s in scenes {
        let text = serialize_scene(&s).unwrap();
        parse_scene(&text).unwrap_or_else(|e| panic!("{}: {e}", s.name.as_deref().unwrap_or("?")));
        let path = dir.join(format!("{}.toml", s.name.as_deref().unwrap()));
        std::fs::write(&path, text).unwrap();
        println!("wrote {}", path.display());
    }
}
