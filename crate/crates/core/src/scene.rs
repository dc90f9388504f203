//! Scene files, the end-to-end shrink driver and its report.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::decomposition::{bing_check_with_graph, ElementDiameters, QuotientGraph, Scene};
use crate::error::{invariant, Error, Result};
use crate::homeo::{check_homeo_with, Homeo, HomeoChain, PlanarMap};
use crate::metric::{epsilon_net_with, Point2, Region};
use crate::par::{self, Exec};
use crate::render;
use crate::shrink::{
    approximating_sequence_with, shrink_recursive_with, Chart, RecursiveSet, RseDecomposition, Shrink, ShrinkOptions, StageChart,
    StarlikeEquivalentSet, StepRecord,
};
use crate::starlike::{RadiusFunction, StarlikeSet};

/// The on-disk scene description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub mesh: f64,
    pub domain: Region,
    pub u: Region,
    #[serde(default)]
    pub elements: Vec<ElementSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ElementSpec {
    Starlike {
        id: u32,
        origin: Point2,
        radii: RadiusFunction,
    },
    StarlikeEquivalent {
        id: u32,
        chart: Homeo,
        #[serde(default = "plane")]
        chart_domain: Region,
        image: StarlikeSet,
    },
    Recursive {
        id: u32,
        point: Point2,
        stages: Vec<StageSpec>,
    },
}

impl ElementSpec {
    pub fn id(&self) -> u32 {
        match self {
            ElementSpec::Starlike { id, .. }
            | ElementSpec::StarlikeEquivalent { id, .. }
            | ElementSpec::Recursive { id, .. } => *id,
        }
    }
}

/// Stage `E_i` of a filtration with the chart that makes it starlike.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageSpec {
    pub body: Region,
    #[serde(default = "identity", skip_serializing_if = "is_identity")]
    pub chart: Homeo,
    #[serde(default = "plane", skip_serializing_if = "is_plane")]
    pub chart_domain: Region,
    pub image: StarlikeSet,
    /// Omitted means unbounded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub activation_radius: Option<f64>,
}

fn plane() -> Region {
    Region::Plane
}

fn identity() -> Homeo {
    Homeo::Identity
}

fn is_identity(h: &Homeo) -> bool {
    *h == Homeo::Identity
}

fn is_plane(r: &Region) -> bool {
    *r == Region::Plane
}

/// A parsed and validated scene.
#[derive(Clone, Debug)]
pub struct LoadedScene {
    pub file: SceneFile,
    pub scene: Scene,
    pub decomposition: RseDecomposition,
}

impl LoadedScene {
    pub fn name(&self) -> &str {
        self.file.name.as_deref().unwrap_or("scene")
    }
}

pub fn parse_scene(text: &str) -> Result<LoadedScene> {
    parse_scene_with(Exec::default(), text)
}

pub fn parse_scene_with(exec: Exec, text: &str) -> Result<LoadedScene> {
    let file: SceneFile = toml::from_str(text).map_err(|e| {
        let line = e.span().map_or(0, |s| text[..s.start.min(text.len())].matches('\n').count() + 1);
        Error::Syntax { line, message: e.message().to_string() }
    })?;
    load_scene_file(exec, file)
}

pub fn load_scene_file(exec: Exec, file: SceneFile) -> Result<LoadedScene> {
    if !(file.mesh > 0.0 && file.mesh.is_finite()) {
        return Err(Error::Invalid(format!("mesh must be positive, got {}", file.mesh)));
    }
    let scene = Scene::new_with(exec, file.domain.clone(), file.mesh)?;
    let elements = file
        .elements
        .iter()
        .map(|el| build_element(exec, el, file.mesh))
        .collect::<Result<Vec<_>>>()?;
    let decomposition = RseDecomposition::new(elements, file.u.clone())?;
    decomposition.decomposition()?.check_scene(&scene)?;
    Ok(LoadedScene { file, scene, decomposition })
}

fn build_element(exec: Exec, el: &ElementSpec, mesh: f64) -> Result<RecursiveSet> {
    let tag = |e: Error, id: u32| match e {
        Error::Invariant { .. } => e,
        other => invariant(vec![id], other.to_string()),
    };
    match el {
        ElementSpec::Starlike { id, origin, radii } => {
            let image = StarlikeSet::new(*origin, radii.clone()).map_err(|e| tag(e, *id))?;
            let se = StarlikeEquivalentSet::from_chart(*id, Chart::identity(), image, mesh).map_err(|e| tag(e, *id))?;
            RecursiveSet::from_se(&se)
        }
        ElementSpec::StarlikeEquivalent { id, chart, chart_domain, image } => {
            let chart = Chart::new(chart.clone(), chart_domain.clone());
            let se = StarlikeEquivalentSet::from_chart(*id, chart, image.clone(), mesh).map_err(|e| tag(e, *id))?;
            RecursiveSet::from_se(&se)
        }
        ElementSpec::Recursive { id, point, stages } => {
            if stages.is_empty() {
                return Err(invariant(vec![*id], "a recursive element needs at least one stage"));
            }
            let mut samples = Vec::with_capacity(stages.len() + 1);
            let mut bodies = Vec::with_capacity(stages.len());
            let mut charts = Vec::with_capacity(stages.len());
            for s in stages {
                samples.push(epsilon_net_with(exec, &s.body, mesh).map_err(|e| tag(e, *id))?);
                bodies.push(s.body.clone());
                charts.push(StageChart {
                    chart: Chart::new(s.chart.clone(), s.chart_domain.clone()),
                    image: s.image.clone(),
                    activation_radius: s.activation_radius.unwrap_or(f64::INFINITY),
                });
            }
            samples.push(crate::metric::CompactSample::singleton(*point));
            RecursiveSet::new(*id, *point, samples, bodies, charts)
        }
    }
}

pub fn serialize_scene(file: &SceneFile) -> Result<String> {
    toml::to_string(file).map_err(|e| Error::Invalid(e.to_string()))
}

/// Certification of one shrink run. Field order is the serialization order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShrinkReport {
    pub scene: String,
    pub epsilon: f64,
    pub filtration_length: usize,
    pub chain_length: usize,
    pub elementary_shrinks: usize,
    pub condition_i: f64,
    pub condition_ii: f64,
    /// Probe points outside `U` that the chain moved.
    pub support_violations: usize,
    pub inverse_error: f64,
    pub collisions: usize,
    pub pass_i: bool,
    pub pass_ii: bool,
    pub pass_support: bool,
    pub pass_homeo: bool,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
    pub elements: Vec<ElementDiameters>,
    pub steps: Vec<StepRecord>,
}

pub const INVERSE_TOLERANCE: f64 = 1e-9;

impl ShrinkReport {
    /// Pass flags as pure functions of the recorded numbers.
    pub fn recomputed(&self) -> [bool; 5] {
        let pass_i = self.condition_i < self.epsilon;
        let pass_ii = self.condition_ii < self.epsilon;
        let pass_support = self.support_violations == 0;
        let pass_homeo = self.inverse_error < INVERSE_TOLERANCE && self.collisions == 0;
        [pass_i, pass_ii, pass_support, pass_homeo, pass_i && pass_ii && pass_support && pass_homeo]
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("report serializes")
    }
}

/// Points of a `n × n` grid over the domain's bounding box.
pub fn probe_grid(domain: &Region, n: usize) -> Vec<Point2> {
    let Some(b) = domain.bbox() else { return Vec::new() };
    let step = |lo: f64, hi: f64, k: usize| lo + (hi - lo) * k as f64 / (n.max(2) - 1) as f64;
    (0..n)
        .flat_map(|i| (0..n).map(move |j| Point2::new(step(b.min.x, b.max.x, i), step(b.min.y, b.max.y, j))))
        .collect()
}

/// Probe points outside `u` moved by `h`.
pub fn support_violations(exec: Exec, h: &impl PlanarMap, u: &Region, probes: &[Point2]) -> usize {
    par::map(exec, probes, |p| (!u.contains(*p) && !h.apply(*p).same_bits(*p)) as usize)
        .into_iter()
        .sum()
}

/// Everything produced by one shrink run.
#[derive(Clone, Debug)]
pub struct ShrinkOutcome {
    pub report: ShrinkReport,
    pub shrink: Shrink,
    pub frames: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub shrink: ShrinkOptions,
    pub frames: usize,
    pub timing: bool,
}

pub fn run_shrink(loaded: &LoadedScene, eps: f64, frames: usize) -> Result<ShrinkOutcome> {
    run_shrink_with(loaded, eps, RunOptions { frames, ..RunOptions::default() })
}

pub fn run_shrink_with(loaded: &LoadedScene, eps: f64, opts: RunOptions) -> Result<ShrinkOutcome> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Invalid(format!("epsilon must be positive, got {eps}")));
    }
    let start = Instant::now();
    let exec = opts.shrink.exec;
    let shrink = shrink_recursive_with(&loaded.scene, &loaded.decomposition, eps, opts.shrink)?;
    let report = certify(exec, loaded, &shrink, eps);
    let wall = start.elapsed().as_millis() as u64;
    let frames = (0..opts.frames)
        .map(|f| {
            let tau = if opts.frames == 1 { 1.0 } else { f as f64 / (opts.frames - 1) as f64 };
            render::frame_svg(loaded, &shrink.chain.partial(tau))
        })
        .collect();
    let report = ShrinkReport { wall_time_ms: opts.timing.then_some(wall), ..report };
    Ok(ShrinkOutcome { report, shrink, frames })
}

/// Certifies a composed shrink against the scene's outermost decomposition.
pub fn certify(exec: Exec, loaded: &LoadedScene, shrink: &Shrink, eps: f64) -> ShrinkReport {
    let d = loaded.decomposition.decomposition().expect("validated at load");
    let graph = QuotientGraph::new(&loaded.scene, &d);
    certify_with_graph(exec, loaded, &graph, shrink, eps)
}

pub fn certify_with_graph(
    exec: Exec,
    loaded: &LoadedScene,
    graph: &QuotientGraph,
    shrink: &Shrink,
    eps: f64,
) -> ShrinkReport {
    let d = loaded.decomposition.decomposition().expect("validated at load");
    let chain: &HomeoChain = &shrink.chain;
    let bing = bing_check_with_graph(exec, graph, &d, chain, eps);
    let mut probes = probe_grid(&loaded.scene.domain, 200);
    probes.extend_from_slice(loaded.scene.sample.points());
    let violations = support_violations(exec, chain, &loaded.decomposition.u, &probes);
    let homeo = check_homeo_with(exec, chain, &loaded.scene.sample, INVERSE_TOLERANCE);
    let mut report = ShrinkReport {
        scene: loaded.name().to_string(),
        epsilon: eps,
        filtration_length: loaded.decomposition.filtration_length(),
        chain_length: chain.len(),
        elementary_shrinks: shrink.elementary_shrinks(),
        condition_i: bing.condition_i,
        condition_ii: bing.condition_ii,
        support_violations: violations,
        inverse_error: homeo.inverse_error,
        collisions: homeo.collisions,
        pass_i: false,
        pass_ii: false,
        pass_support: false,
        pass_homeo: false,
        pass: false,
        wall_time_ms: None,
        elements: bing.elements,
        steps: shrink.log.clone(),
    };
    [report.pass_i, report.pass_ii, report.pass_support, report.pass_homeo, report.pass] = report.recomputed();
    report
}

/// One rung of the approximating sequence at `ε_n = 2^-n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceEntry {
    pub n: usize,
    pub epsilon: f64,
    pub chain_length: usize,
    pub condition_i: f64,
    pub condition_ii: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub scene: String,
    pub non_increasing: bool,
    pub pass: bool,
    pub entries: Vec<SequenceEntry>,
}

impl SequenceReport {
    /// Serialized under a `[sequence]` table so it can follow a shrink report.
    pub fn to_toml(&self) -> String {
        #[derive(Serialize)]
        struct Wrapped<'a> {
            sequence: &'a SequenceReport,
        }
        toml::to_string_pretty(&Wrapped { sequence: self }).expect("sequence reports serialize")
    }
}

pub fn run_sequence(loaded: &LoadedScene, n_max: usize, opts: ShrinkOptions) -> Result<SequenceReport> {
    let runs = approximating_sequence_with(&loaded.scene, &loaded.decomposition, n_max, opts)?;
    let entries: Vec<SequenceEntry> = runs
        .iter()
        .enumerate()
        .map(|(k, (s, b))| SequenceEntry {
            n: k + 1,
            epsilon: b.epsilon,
            chain_length: s.chain.len(),
            condition_i: b.condition_i,
            condition_ii: b.condition_ii,
            pass: b.pass,
        })
        .collect();
    let non_increasing = entries.windows(2).all(|w| w[1].condition_i <= w[0].condition_i);
    Ok(SequenceReport {
        scene: loaded.name().to_string(),
        non_increasing,
        pass: entries.iter().all(|e| e.pass),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DISC: &str = r#"
name = "tiny"
mesh = 0.05
domain = { kind = "disc", center = [0.0, 0.0], radius = 1.0 }
u = { kind = "disc", center = [0.0, 0.0], radius = 0.8 }

[[elements]]
kind = "starlike"
id = 1
origin = [0.0, 0.0]
radii = [0.4, 0.4, 0.4, 0.4, 0.4, 0.4, 0.4, 0.4]
"#;

    #[test]
    fn parses_and_round_trips() {
        let loaded = parse_scene(DISC).unwrap();
        assert_eq!(loaded.decomposition.elements.len(), 1);
        let text = serialize_scene(&loaded.file).unwrap();
        let again = parse_scene(&text).unwrap();
        assert_eq!(again.file, loaded.file);
    }

    #[test]
    fn syntax_errors_carry_lines() {
        let bad = DISC.replace("radius = 0.8", "radius = ");
        match parse_scene(&bad) {
            Err(Error::Syntax { line, .. }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn overlapping_elements_name_both_ids() {
        let two = format!(
            "{DISC}\n[[elements]]\nkind = \"starlike\"\nid = 2\norigin = [0.1, 0.0]\nradii = [0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2]\n"
        );
        match parse_scene(&two) {
            Err(Error::Invariant { ids, .. }) => {
                assert!(ids.contains(&1) && ids.contains(&2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn large_epsilon_passes_with_identity() {
        let loaded = parse_scene(DISC).unwrap();
        let out = run_shrink(&loaded, 2.0, 3).unwrap();
        assert!(out.report.pass);
        assert_eq!(out.report.chain_length, 0);
        assert_eq!(out.frames[0], out.frames[2]);
        assert_eq!(out.report.recomputed()[4], out.report.pass);
    }
}
