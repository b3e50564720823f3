//! Locally finite rooted graphs explored through a neighbour oracle.
//!
//! Everything here is driven by breadth-first search with an explicit
//! vertex cap: an exploration that would touch more than
//! [`Limits::vertex_cap`] vertices fails with [`Error::BudgetExhausted`]
//! instead of silently truncating.

mod busemann;
mod explicit;
mod ray;

pub use busemann::{
    busemann, busemann_on_ball, enumerate_horofunction_restrictions, horofunction_approx, window_floor, BusemannTable,
    HorofunctionApprox, HorofunctionSet, StabilizationStatus, ValueMap,
};
pub use explicit::{ExplicitGraph, HalfLine};
pub use ray::{geodesic_segment, reroot_ray, reroot_ray_extending, GeodesicRay};

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::par::Execution;

/// Default vertex-exploration cap.
pub const DEFAULT_VERTEX_CAP: usize = 1_000_000;

/// A locally finite graph with a distinguished basepoint.
///
/// Neighbour lists must be finite, symmetric and returned in canonical
/// (sorted) order; the same query must always produce the same list.
pub trait RootedGraph: Sync {
    type Vertex: Clone + Ord + Hash + Debug + Send + Sync;

    fn basepoint(&self) -> Self::Vertex;

    fn neighbors(&self, v: &Self::Vertex) -> Vec<Self::Vertex>;

    fn degree_bound(&self) -> Option<usize> {
        None
    }

    /// Exact graph distance when the graph knows it in closed form.
    ///
    /// Implementations must agree with breadth-first search; returning
    /// `None` makes every caller fall back to BFS.
    fn closed_form_distance(&self, _x: &Self::Vertex, _y: &Self::Vertex) -> Option<u64> {
        None
    }
}

/// Exploration budget and execution strategy shared by all operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub vertex_cap: usize,
    pub exec: Execution,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            vertex_cap: DEFAULT_VERTEX_CAP,
            exec: Execution::default(),
        }
    }
}

impl Limits {
    pub fn with_cap(vertex_cap: usize) -> Self {
        Limits {
            vertex_cap,
            ..Limits::default()
        }
    }

    pub fn sequential(self) -> Self {
        Limits {
            exec: Execution::Sequential,
            ..self
        }
    }
}

/// Distances from a fixed source, computed lazily.
///
/// Uses the graph's closed form when it has one; otherwise grows a BFS
/// one sphere at a time until the queried vertex is settled.
pub struct Distances<'g, G: RootedGraph + ?Sized> {
    graph: &'g G,
    source: G::Vertex,
    cap: usize,
    closed_form: bool,
    dist: HashMap<G::Vertex, u64>,
    frontier: Vec<G::Vertex>,
    radius: u64,
}

impl<'g, G: RootedGraph + ?Sized> Distances<'g, G> {
    pub fn new(graph: &'g G, source: G::Vertex, limits: &Limits) -> Self {
        let closed_form = graph.closed_form_distance(&source, &source).is_some();
        let mut dist = HashMap::new();
        let mut frontier = Vec::new();
        if !closed_form {
            dist.insert(source.clone(), 0);
            frontier.push(source.clone());
        }
        Distances {
            graph,
            source,
            cap: limits.vertex_cap,
            closed_form,
            dist,
            frontier,
            radius: 0,
        }
    }

    pub fn source(&self) -> &G::Vertex {
        &self.source
    }

    pub fn get(&mut self, v: &G::Vertex) -> Result<u64> {
        if self.closed_form {
            if let Some(d) = self.graph.closed_form_distance(&self.source, v) {
                return Ok(d);
            }
        }
        loop {
            if let Some(&d) = self.dist.get(v) {
                return Ok(d);
            }
            if self.frontier.is_empty() {
                return Err(Error::Unreachable {
                    from: format!("{:?}", self.source),
                    to: format!("{:?}", v),
                });
            }
            self.grow()?;
        }
    }

    fn grow(&mut self) -> Result<()> {
        let next_radius = self.radius + 1;
        let mut next = Vec::new();
        for x in std::mem::take(&mut self.frontier) {
            for y in self.graph.neighbors(&x) {
                if !self.dist.contains_key(&y) {
                    if self.dist.len() >= self.cap {
                        return Err(Error::BudgetExhausted { cap: self.cap });
                    }
                    self.dist.insert(y.clone(), next_radius);
                    next.push(y);
                }
            }
        }
        self.radius = next_radius;
        self.frontier = next;
        Ok(())
    }
}

/// Graph distance d(x, y).
pub fn distance<G: RootedGraph + ?Sized>(g: &G, x: &G::Vertex, y: &G::Vertex, limits: &Limits) -> Result<u64> {
    Distances::new(g, x.clone(), limits).get(y)
}

/// Sphere layers S_0, ..., S_R around the basepoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerDecomposition<V> {
    pub radius: u64,
    /// `layers[r]` is the sphere of radius `r`, sorted.
    pub layers: Vec<Vec<V>>,
}

impl<V: Clone + Ord> LayerDecomposition<V> {
    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    pub fn sphere(&self, r: u64) -> &[V] {
        &self.layers[r as usize]
    }

    /// The ball B_r in canonical order.
    pub fn ball(&self, r: u64) -> Vec<V> {
        let mut ball: Vec<V> = self.layers[..=(r as usize)].iter().flatten().cloned().collect();
        ball.sort();
        ball
    }

    /// Ball vertices paired with their distance to the basepoint, sorted by vertex.
    pub fn ball_with_radii(&self, r: u64) -> Vec<(V, u64)> {
        let mut ball: Vec<(V, u64)> = self.layers[..=(r as usize)]
            .iter()
            .enumerate()
            .flat_map(|(d, layer)| layer.iter().map(move |v| (v.clone(), d as u64)))
            .collect();
        ball.sort();
        ball
    }

    pub fn ball_size(&self, r: u64) -> usize {
        self.layers[..=(r as usize)].iter().map(Vec::len).sum()
    }
}

/// BFS layers around `source` out to `radius`.
pub fn layers_from<G: RootedGraph + ?Sized>(
    g: &G,
    source: &G::Vertex,
    radius: u64,
    limits: &Limits,
) -> Result<LayerDecomposition<G::Vertex>> {
    let mut seen = std::collections::HashSet::new();
    seen.insert(source.clone());
    let mut layers = vec![vec![source.clone()]];
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in layers.last().unwrap() {
            for y in g.neighbors(x) {
                if seen.insert(y.clone()) {
                    if seen.len() > limits.vertex_cap {
                        return Err(Error::BudgetExhausted { cap: limits.vertex_cap });
                    }
                    next.push(y);
                }
            }
        }
        next.sort();
        layers.push(next);
    }
    Ok(LayerDecomposition { radius, layers })
}

/// Sphere layers around the basepoint out to radius `radius`.
pub fn layer_decomposition<G: RootedGraph + ?Sized>(
    g: &G,
    radius: u64,
    limits: &Limits,
) -> Result<LayerDecomposition<G::Vertex>> {
    layers_from(g, &g.basepoint(), radius, limits)
}

/// Checks neighbour symmetry on every vertex of B_r; returns the first
/// offending pair.
pub fn check_symmetry<G: RootedGraph + ?Sized>(
    g: &G,
    radius: u64,
    limits: &Limits,
) -> Result<Option<(G::Vertex, G::Vertex)>> {
    let layers = layer_decomposition(g, radius, limits)?;
    for x in layers.layers.iter().flatten() {
        for y in g.neighbors(x) {
            if !g.neighbors(&y).contains(x) {
                return Ok(Some((x.clone(), y)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// ℤ with generators ±1 and no closed form, so BFS is exercised.
    struct Line;

    impl RootedGraph for Line {
        type Vertex = i64;
        fn basepoint(&self) -> i64 {
            0
        }
        fn neighbors(&self, v: &i64) -> Vec<i64> {
            vec![v - 1, v + 1]
        }
    }

    #[test]
    fn line_distances() {
        let l = Limits::default();
        assert_eq!(distance(&Line, &3, &-2, &l).unwrap(), 5);
        assert_eq!(distance(&Line, &7, &7, &l).unwrap(), 0);
    }

    #[test]
    fn line_sphere_sizes() {
        let d = layer_decomposition(&Line, 5, &Limits::default()).unwrap();
        assert_eq!(d.sphere_sizes(), vec![1, 2, 2, 2, 2, 2]);
        assert_eq!(d.ball(2), vec![-2, -1, 0, 1, 2]);
        assert_eq!(d.ball_size(5), 11);
    }

    #[test]
    fn budget_is_enforced() {
        let err = distance(&Line, &0, &1000, &Limits::with_cap(50)).unwrap_err();
        assert_eq!(err, Error::BudgetExhausted { cap: 50 });
        assert!(layer_decomposition(&Line, 100, &Limits::with_cap(50)).is_err());
    }

    #[test]
    fn symmetric() {
        assert_eq!(check_symmetry(&Line, 4, &Limits::default()).unwrap(), None);
    }
}
