//! The five subcommands. Each takes a parsed input and returns a [`Report`].

use std::collections::BTreeMap;

use horoscope::cayley::{extract_homomorphism, orbit_analysis, HomomorphismWitness, OrbitResult};
use horoscope::graph::{
    enumerate_horofunction_restrictions, layer_decomposition, reroot_ray_extending, window_floor, GeodesicRay,
    HorofunctionSet,
};
use horoscope::npartite::{monotone_cover, verify_cover, CoverResult, DepthCheck, LayeredGraph};
use horoscope::spec::{parse_element, BuiltGraph};
use horoscope::{Error, Limits, RootedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::report::Report;
use crate::Failure;

/// A sphere size must recur this often before the growth looks linear.
pub const RECURRENCE: usize = 5;
/// Slack factor on the fitted linear bound |B_R| ≤ c·R.
pub const FIT_TOLERANCE: f64 = 2.0;
/// Cover verification depths, used when every layer has at most
/// [`VERIFY_MAX_LAYER`] vertices.
pub const VERIFY_DEPTHS: [usize; 3] = [10, 20, 40];
pub const VERIFY_MAX_LAYER: usize = 6;
/// Extra canonical steps a ray may take while rerooting.
pub const REROOT_EXTENSION: usize = 64;

#[derive(Debug, Clone)]
pub struct Config {
    pub radius: u64,
    /// Sphere depth N₁; `None` means 4r at each radius r.
    pub depth: Option<u64>,
    pub window: u64,
    /// Ball radius R; `None` means r / 2.
    pub ball: Option<u64>,
    pub seed: u64,
    pub limits: Limits,
}

impl Config {
    fn depth_at(&self, r: u64) -> u64 {
        self.depth.unwrap_or(4 * r)
    }

    fn ball_radius(&self) -> u64 {
        self.ball.unwrap_or(self.radius / 2)
    }
}

fn cell(v: &impl Serialize) -> String {
    match serde_json::to_value(v).expect("vertices serialize") {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

fn not_for(command: &str, g: &BuiltGraph) -> Failure {
    let kind = match g {
        BuiltGraph::Cayley(_) => "cayley",
        BuiltGraph::Explicit(_) => "explicit",
        BuiltGraph::Layered(_) => "layered",
    };
    Failure::Precondition(format!("{command} does not accept a {kind} input"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantSize {
    pub k: usize,
    pub radii: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Growth {
    pub radius: u64,
    /// |S_r| for r = 0..=R.
    pub sphere_sizes: Vec<usize>,
    pub ball_size: usize,
    /// Least sphere size recurring at least `recurrence` times in 1..=R.
    pub constant_size: Option<ConstantSize>,
    pub recurrence: usize,
    /// c = |B_{r0}| / r0 with r0 = max(1, R / 4).
    pub fit_radius: u64,
    pub fit_slope: f64,
    pub fit_tolerance: f64,
    /// "linear-candidate" or "not-linear".
    pub verdict: &'static str,
}

impl Growth {
    pub fn is_linear(&self) -> bool {
        self.verdict == "linear-candidate"
    }
}

pub fn growth_of<G: RootedGraph + ?Sized>(g: &G, radius: u64, limits: &Limits) -> Result<Growth, Error> {
    let layers = layer_decomposition(g, radius, limits)?;
    let sizes = layers.sphere_sizes();
    let mut census: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for r in 1..=radius {
        census.entry(sizes[r as usize]).or_default().push(r);
    }
    let constant_size = census
        .into_iter()
        .find(|(k, radii)| *k > 0 && radii.len() >= RECURRENCE)
        .map(|(k, radii)| ConstantSize { k, radii });
    let fit_radius = (radius / 4).max(1);
    let fit_slope = layers.ball_size(fit_radius.min(radius)) as f64 / fit_radius as f64;
    let ball_size = layers.ball_size(radius);
    let linear = constant_size.is_some() && ball_size as f64 <= FIT_TOLERANCE * fit_slope * radius as f64;
    Ok(Growth {
        radius,
        sphere_sizes: sizes,
        ball_size,
        constant_size,
        recurrence: RECURRENCE,
        fit_radius,
        fit_slope,
        fit_tolerance: FIT_TOLERANCE,
        verdict: if linear { "linear-candidate" } else { "not-linear" },
    })
}

pub fn growth(g: &BuiltGraph, cfg: &Config) -> Result<Report, Failure> {
    let report = match g {
        BuiltGraph::Cayley(g) => growth_of(g, cfg.radius, &cfg.limits)?,
        BuiltGraph::Explicit(g) => growth_of(g, cfg.radius, &cfg.limits)?,
        BuiltGraph::Layered(_) => return Err(not_for("growth", g)),
    };
    let mut ball = 0;
    let rows = report
        .sphere_sizes
        .iter()
        .enumerate()
        .map(|(r, &s)| {
            ball += s;
            vec![r.to_string(), s.to_string(), ball.to_string()]
        })
        .collect();
    Ok(Report::new("growth", &report).table(vec!["radius", "sphere", "ball"], rows))
}

#[derive(Debug, Clone, Serialize)]
pub struct HoroRadius<V: Serialize + Ord + Clone> {
    pub radius: u64,
    pub depth: u64,
    pub window_floor: u64,
    pub count: usize,
    pub restrictions: HorofunctionSet<V>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Horo<V: Serialize + Ord + Clone> {
    pub radii: Vec<HoroRadius<V>>,
    /// Radii from here to the last one share a single count.
    pub trailing_from: u64,
    pub stabilized: bool,
}

fn horo_of<G>(g: &G, cfg: &Config) -> Result<Horo<G::Vertex>, Error>
where
    G: RootedGraph + ?Sized,
    G::Vertex: Serialize,
{
    let mut radii = Vec::new();
    for r in 1..=cfg.radius {
        let depth = cfg.depth_at(r);
        let set = enumerate_horofunction_restrictions(g, r, depth, cfg.window, &cfg.limits)?;
        radii.push(HoroRadius {
            radius: r,
            depth,
            window_floor: window_floor(r, depth, cfg.window),
            count: set.len(),
            restrictions: set,
        });
    }
    let trailing_from = cfg.radius - cfg.radius / 2;
    let tail: Vec<usize> = radii
        .iter()
        .filter(|h| h.radius >= trailing_from)
        .map(|h| h.count)
        .collect();
    let stabilized = tail.windows(2).all(|w| w[0] == w[1]);
    Ok(Horo {
        radii,
        trailing_from,
        stabilized,
    })
}

fn horo_report<V: Serialize + Ord + Clone>(h: Horo<V>) -> Report {
    let rows = h
        .radii
        .iter()
        .map(|x| vec![x.radius.to_string(), x.depth.to_string(), x.count.to_string()])
        .collect();
    Report::new("horo", &h).table(vec!["radius", "depth", "count"], rows)
}

pub fn horo(g: &BuiltGraph, cfg: &Config) -> Result<Report, Failure> {
    match g {
        BuiltGraph::Cayley(g) => Ok(horo_report(horo_of(g, cfg)?)),
        BuiltGraph::Explicit(g) => Ok(horo_report(horo_of(g, cfg)?)),
        BuiltGraph::Layered(_) => Err(not_for("horo", g)),
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verification {
    Checked { depths: Vec<DepthCheck> },
    Skipped { notice: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct Cover {
    pub cover: CoverResult,
    pub verification: Verification,
}

fn verification(g: &LayeredGraph, cover: &CoverResult, cfg: &Config) -> Verification {
    let widest = g.described_sizes().all().copied().max().unwrap_or(0);
    if widest > VERIFY_MAX_LAYER {
        return Verification::Skipped {
            notice: format!("layers of {widest} vertices exceed the verification limit of {VERIFY_MAX_LAYER}"),
        };
    }
    let depths: Vec<usize> = VERIFY_DEPTHS
        .iter()
        .copied()
        .filter(|&d| g.contains_layer(d - 1))
        .collect();
    if depths.is_empty() {
        return Verification::Skipped {
            notice: format!("the truncation has fewer than {} layers", VERIFY_DEPTHS[0]),
        };
    }
    Verification::Checked {
        depths: verify_cover(g, &cover.paths, &depths, cfg.limits.exec),
    }
}

pub fn cover(g: &BuiltGraph, cfg: &Config) -> Result<Report, Failure> {
    let BuiltGraph::Layered(g) = g else {
        return Err(not_for("cover", g));
    };
    let cover = monotone_cover(g)?;
    let verification = verification(g, &cover, cfg);
    let rows = cover
        .named
        .iter()
        .enumerate()
        .map(|(i, p)| {
            vec![
                i.to_string(),
                p.start.to_string(),
                p.prefix.join(" "),
                p.cycle.join(" "),
            ]
        })
        .collect();
    Ok(Report::new("cover", &Cover { cover, verification }).table(vec!["path", "start", "prefix", "cycle"], rows))
}

#[derive(Debug, Clone, Serialize)]
pub struct Orbit {
    pub growth_verdict: &'static str,
    pub warnings: Vec<String>,
    pub horofunctions: usize,
    pub orbit: OrbitResult,
    pub witness: HomomorphismWitness,
}

pub fn orbit(g: &BuiltGraph, cfg: &Config) -> Result<Report, Failure> {
    let BuiltGraph::Cayley(g) = g else {
        return Err(not_for("orbit", g));
    };
    let ball = cfg.ball_radius();
    if ball == 0 || ball >= cfg.radius {
        return Err(Failure::Usage(format!(
            "--ball must lie in 1..{} for --radius {}",
            cfg.radius, cfg.radius
        )));
    }
    let growth = growth_of(g, cfg.radius, &cfg.limits)?;
    let mut warnings = Vec::new();
    if !growth.is_linear() {
        warnings.push(format!("growth verdict up to radius {} is not-linear", cfg.radius));
    }
    let horos = enumerate_horofunction_restrictions(g, cfg.radius, cfg.depth_at(cfg.radius), cfg.window, &cfg.limits)?;
    let orbit = orbit_analysis(g, &horos, ball, &cfg.limits)?;
    let witness = extract_homomorphism(&orbit, g, &cfg.limits)?;
    let rows = witness
        .sampled_values
        .iter()
        .map(|(h, v)| vec![h.to_string(), v.to_string()])
        .collect();
    let report = Orbit {
        growth_verdict: growth.verdict,
        warnings,
        horofunctions: horos.len(),
        orbit,
        witness,
    };
    Ok(Report::new("orbit", &report).table(vec!["element", "value"], rows))
}

#[derive(Debug, Clone, Serialize)]
pub struct Reroot<V> {
    /// "input" or "seeded".
    pub source: &'static str,
    pub ray: GeodesicRay<V>,
    /// From this index on the ray (extended canonically if its prefix was
    /// too short) continues a geodesic from the basepoint.
    pub settled_index: usize,
    pub rerooted: GeodesicRay<V>,
}

fn reroot_of<G>(g: &G, given: Option<Vec<G::Vertex>>, cfg: &Config) -> Result<Reroot<G::Vertex>, Failure>
where
    G: RootedGraph + ?Sized,
    G::Vertex: Serialize,
{
    let (source, ray) = match given {
        Some(vertices) if vertices.is_empty() => return Err(Failure::Malformed("ray: no vertices".into())),
        Some(vertices) => ("input", GeodesicRay::new(vertices)),
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let ball = layer_decomposition(g, cfg.ball_radius(), &cfg.limits)?.ball(cfg.ball_radius());
            let mut ray = GeodesicRay::new(vec![ball[rng.gen_range(0..ball.len())].clone()]);
            let len = cfg.depth_at(cfg.radius) as usize;
            ray.extend_with(g, len, &cfg.limits, |c| rng.gen_range(0..c.len()))?;
            ("seeded", ray)
        }
    };
    let (settled_index, rerooted) = reroot_ray_extending(g, &ray, REROOT_EXTENSION, &cfg.limits)?;
    Ok(Reroot {
        source,
        ray,
        settled_index,
        rerooted,
    })
}

fn reroot_report<V: Serialize + Clone + Ord + std::hash::Hash + std::fmt::Debug + Send + Sync>(r: Reroot<V>) -> Report {
    let rows = r
        .rerooted
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| vec![i.to_string(), cell(v)])
        .collect();
    Report::new("reroot", &r).table(vec!["position", "vertex"], rows)
}

pub fn reroot(g: &BuiltGraph, ray: Option<&Value>, cfg: &Config) -> Result<Report, Failure> {
    let tokens = match ray {
        None => None,
        Some(Value::Array(items)) => Some(items.as_slice()),
        Some(_) => return Err(Failure::Malformed("ray: expected an array of vertices".into())),
    };
    match g {
        BuiltGraph::Cayley(g) => {
            let given = tokens
                .map(|items| {
                    items
                        .iter()
                        .enumerate()
                        .map(|(i, v)| {
                            parse_element(g.family(), v).map_err(|_| {
                                Failure::Malformed(format!("ray[{i}]: {v} is not an element of {}", g.family().name()))
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .transpose()?;
            Ok(reroot_report(reroot_of(g, given, cfg)?))
        }
        BuiltGraph::Explicit(g) => {
            let given = tokens
                .map(|items| {
                    items
                        .iter()
                        .map(|v| {
                            v.as_str()
                                .map(str::to_string)
                                .ok_or_else(|| Failure::Malformed(format!("ray: {v} is not a vertex name")))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .transpose()?;
            Ok(reroot_report(reroot_of(g, given, cfg)?))
        }
        BuiltGraph::Layered(_) => Err(not_for("reroot", g)),
    }
}
