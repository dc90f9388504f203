use shrinklab::homeo::{check_homeo, HomeoChain, PlanarMap};
use shrinklab::metric::BBox;
use shrinklab::render::{frame_svg, polygon_bboxes, Viewport};
use shrinklab::scene::{parse_scene, run_shrink, ElementSpec, LoadedScene};
use shrinklab::shrink::{approximating_sequence, shrink_null_se, shrink_recursive};
use shrinklab::{Error, Point2};

fn load(name: &str) -> LoadedScene {
    let path = format!("{}/scenes/{name}.toml", env!("CARGO_MANIFEST_DIR"));
    parse_scene(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn certified(loaded: &LoadedScene, h: &HomeoChain) {
    let r = check_homeo(h, &loaded.scene.sample, 1e-9);
    assert!(r.inverse_error < 1e-9 && r.collisions == 0, "{r:?}");
}

/// Canvas boxes of each element group in a frame, keyed by id.
fn element_boxes(svg: &str) -> Vec<(u32, BBox)> {
    let mut out = Vec::new();
    for chunk in svg.split("<g id=\"element-").skip(1) {
        let (id, rest) = chunk.split_once('"').unwrap();
        let body = rest.split("</g>").next().unwrap();
        let boxes = polygon_bboxes(body);
        if let Some(b) = boxes.into_iter().reduce(BBox::union) {
            out.push((id.parse().unwrap(), b));
        }
    }
    out
}

#[test]
fn single_disc_loads_and_shrinks() {
    let loaded = load("single_disc");
    assert_eq!(loaded.file.elements.len(), 1);
    assert!(matches!(loaded.file.elements[0], ElementSpec::Starlike { .. }));
    let out = run_shrink(&loaded, 0.1, 0).unwrap();
    assert!(out.report.pass, "{}", out.report.to_toml());
    assert!(out.frames.is_empty());
    certified(&loaded, &out.shrink.chain);
}

#[test]
fn five_element_counts_and_diameters() {
    let loaded = load("five_element");
    let out = run_shrink(&loaded, 0.2, 2).unwrap();
    let r = &out.report;
    assert_eq!(r.elementary_shrinks, 3);
    assert!(r.elements.iter().all(|e| e.after < 0.2));
    let mut shrunk: Vec<u32> = out.shrink.log.iter().map(|s| s.element).collect();
    shrunk.sort();
    assert_eq!(shrunk, vec![1, 2, 3]);
    assert!(out.shrink.log.iter().all(|s| s.diameter_before >= s.epsilon));
    certified(&loaded, &out.shrink.chain);

    let view = Viewport::new(&loaded.scene.domain);
    let mesh = loaded.file.mesh;
    for (id, b) in element_boxes(&out.frames[1]) {
        let after = r.elements.iter().find(|e| e.id == id).unwrap().after;
        let diag = b.width().hypot(b.height()) / view.scale();
        assert!(diag <= after + 2.0 * mesh + 0.002, "element {id}: {diag} vs {after}");
    }
}

#[test]
fn flat_recursion_matches_null_shrink() {
    let loaded = load("five_element");
    let d = &loaded.decomposition;
    assert_eq!(d.filtration_length(), 0);
    let a = shrink_recursive(&loaded.scene, d, 0.2).unwrap();
    let ses: Vec<_> = d.elements.iter().map(|e| e.stage_se(0)).collect();
    let b = shrink_null_se(&loaded.scene, &ses, &d.u, 0.2).unwrap();
    assert_eq!(a.chain.len(), b.chain.len());
    for p in loaded.scene.sample.points() {
        assert!(a.chain.apply(*p).same_bits(b.chain.apply(*p)));
    }
}

#[test]
fn two_lobe_frames_fit_epsilon_boxes() {
    let loaded = load("two_lobe");
    let eps = 0.1;
    let out = run_shrink(&loaded, eps, 12).unwrap();
    assert!(out.report.pass, "{}", out.report.to_toml());
    assert_eq!(out.frames.len(), 12);
    certified(&loaded, &out.shrink.chain);

    let logged: usize = out.shrink.log.iter().map(|s| s.maps).sum();
    assert_eq!(out.report.chain_length, logged);
    let mut pairs: Vec<(usize, u32)> = out.shrink.log.iter().map(|s| (s.stage, s.element)).collect();
    pairs.sort();
    assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 1)]);

    let view = Viewport::new(&loaded.scene.domain);
    let boxes = element_boxes(out.frames.last().unwrap());
    assert_eq!(boxes.len(), 3);
    for (id, b) in boxes {
        let (w, h) = (b.width() / view.scale(), b.height() / view.scale());
        assert!(w < eps && h < eps, "element {id}: {w} x {h}");
    }
    assert_ne!(out.frames[0], out.frames[11]);
}

#[test]
fn large_epsilon_frames_are_identical() {
    let loaded = load("single_disc");
    let out = run_shrink(&loaded, 2.0, 3).unwrap();
    assert!(out.report.pass);
    assert!(out.shrink.chain.is_empty());
    assert!(out.frames.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn identity_frame_draws_input_geometry() {
    let loaded = load("five_element");
    let out = run_shrink(&loaded, 0.2, 0).unwrap();
    let start = frame_svg(&loaded, &out.shrink.chain.partial(0.0));
    assert_eq!(start, frame_svg(&loaded, &HomeoChain::identity()));
    let view = Viewport::new(&loaded.scene.domain);
    for (id, b) in element_boxes(&start) {
        let diag = b.width().hypot(b.height()) / view.scale();
        let before = out.report.elements.iter().find(|e| e.id == id).unwrap().before;
        let slack = 2.0 * loaded.file.mesh;
        assert!(diag >= before - slack && diag <= std::f64::consts::SQRT_2 * before + slack, "element {id}");
    }
}

#[test]
fn empty_scene_draws_canvas_and_outlines_only() {
    let text = "mesh = 0.1\ndomain = { kind = \"disc\", center = [0.0, 0.0], radius = 1.0 }\n\
                u = { kind = \"disc\", center = [0.0, 0.0], radius = 0.5 }\n";
    let loaded = parse_scene(text).unwrap();
    let svg = frame_svg(&loaded, &HomeoChain::identity());
    assert!(!svg.contains("<g id="));
    assert_eq!(polygon_bboxes(&svg).len(), 2);
    assert!(svg.starts_with("<svg"));
}

#[test]
fn trivial_sequences_are_identities() {
    let text = "mesh = 0.05\ndomain = { kind = \"disc\", center = [0.0, 0.0], radius = 1.0 }\n\
                u = { kind = \"disc\", center = [0.0, 0.0], radius = 0.8 }\n\
                [[elements]]\nkind = \"starlike\"\nid = 1\norigin = [0.2, 0.0]\nradii = [0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1]\n\
                [[elements]]\nkind = \"starlike\"\nid = 2\norigin = [-0.3, 0.1]\nradii = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]\n";
    let loaded = parse_scene(text).unwrap();
    let runs = approximating_sequence(&loaded.scene, &loaded.decomposition, 1).unwrap();
    assert_eq!(runs.len(), 1);
    assert!(runs[0].0.chain.is_empty());
    assert_eq!(runs[0].1.condition_i, 0.0);

    let singletons = text.replace("0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1", "0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0");
    let loaded = parse_scene(&singletons).unwrap();
    let runs = approximating_sequence(&loaded.scene, &loaded.decomposition, 6).unwrap();
    assert!(runs.iter().all(|(s, b)| s.chain.is_empty() && b.pass));
    assert!(matches!(approximating_sequence(&loaded.scene, &loaded.decomposition, 9), Err(Error::Invalid(_))));
}

#[test]
fn activation_ball_outside_chart_domain_is_rejected() {
    let text = r#"
mesh = 0.02
domain = { kind = "disc", center = [0.0, 0.0], radius = 1.0 }
u = { kind = "disc", center = [0.0, 0.0], radius = 0.9 }

[[elements]]
kind = "recursive"
id = 4
point = [0.0, 0.0]

[[elements.stages]]
body = { kind = "disc", center = [0.0, 0.0], radius = 0.2 }
chart_domain = { kind = "disc", center = [0.0, 0.0], radius = 0.3 }
image = { origin = [0.0, 0.0], radii = [0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2] }
activation_radius = 0.5

[[elements.stages]]
body = { kind = "disc", center = [0.0, 0.0], radius = 0.1 }
image = { origin = [0.0, 0.0], radii = [0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1] }
"#;
    match parse_scene(text) {
        Err(Error::Invariant { ids, .. }) => assert_eq!(ids, vec![4]),
        other => panic!("expected an invariant error, got {other:?}"),
    }
    let ok = text.replace("activation_radius = 0.5", "activation_radius = 0.15");
    parse_scene(&ok).unwrap();
}

#[test]
fn far_points_are_untouched_by_recursive_shrink() {
    let loaded = load("three_stage");
    let s = shrink_recursive(&loaded.scene, &loaded.decomposition, 0.2).unwrap();
    certified(&loaded, &s.chain);
    for p in loaded.scene.sample.points() {
        if !loaded.decomposition.u.contains(*p) {
            assert!(s.chain.apply(*p).same_bits(*p));
        }
    }
    let far = Point2::new(0.44, 0.0);
    assert!(s.chain.apply(far).same_bits(far));
}
