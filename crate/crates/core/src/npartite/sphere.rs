use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{geodesic_segment, layer_decomposition, Distances, GeodesicRay, Limits, RootedGraph};

use super::layered::{LayeredGraph, MonotonePath};
use super::relation::{Relation, MAX_LAYER};

/// Recurrences required before a sphere size counts as the limiting one.
pub const DEFAULT_RECURRENCE: usize = 5;

/// The layered graph on spheres S_{m_0}, S_{m_1}, ... of equal size k, with
/// x ∈ S_{m_n} joined to x′ ∈ S_{m_{n+1}} when d(x, x′) = m_{n+1} − m_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SphereQuotient<V> {
    pub radii: Vec<u64>,
    /// Sorted sphere vertices; layer n of `graph` names them in this order.
    pub spheres: Vec<Vec<V>>,
    pub graph: LayeredGraph,
}

impl<V: Ord> SphereQuotient<V> {
    pub fn k(&self) -> usize {
        self.spheres.first().map_or(0, Vec::len)
    }

    pub fn index_of(&self, layer: usize, v: &V) -> Option<usize> {
        self.spheres[layer].binary_search(v).ok()
    }
}

fn vertex_name<V: Serialize>(v: &V) -> String {
    serde_json::to_string(v).expect("vertex tokens serialize")
}

/// Builds the sphere quotient on the given strictly increasing radii.
pub fn sphere_quotient<G>(g: &G, radii: &[u64], limits: &Limits) -> Result<SphereQuotient<G::Vertex>>
where
    G: RootedGraph + ?Sized,
    G::Vertex: Serialize,
{
    if radii.is_empty() || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "radii must be nonempty and strictly increasing".into(),
        ));
    }
    let layers = layer_decomposition(g, *radii.last().unwrap(), limits)?;
    let spheres: Vec<Vec<G::Vertex>> = radii.iter().map(|&r| layers.sphere(r).to_vec()).collect();
    for (n, s) in spheres.iter().enumerate() {
        if s.is_empty() {
            return Err(Error::EmptySphere { radius: radii[n] });
        }
        if s.len() > MAX_LAYER {
            return Err(Error::LayerTooLarge(s.len()));
        }
        if s.len() != spheres[0].len() {
            return Err(Error::UnequalLayers {
                layer: n - 1,
                left: spheres[n - 1].len(),
                right: s.len(),
            });
        }
    }
    let mut transitions = Vec::with_capacity(radii.len() - 1);
    for n in 0..radii.len() - 1 {
        let gap = radii[n + 1] - radii[n];
        let next = &spheres[n + 1];
        let rows = limits.exec.try_map(&spheres[n], |x| -> Result<u64> {
            let mut from_x = Distances::new(g, x.clone(), limits);
            let mut row = 0u64;
            for (j, y) in next.iter().enumerate() {
                if from_x.get(y)? == gap {
                    row |= 1u64 << j;
                }
            }
            Ok(row)
        })?;
        transitions.push(Relation::new(rows, next.len()));
    }
    let names = spheres.iter().map(|s| s.iter().map(vertex_name).collect()).collect();
    Ok(SphereQuotient {
        radii: radii.to_vec(),
        graph: LayeredGraph::truncation(names, transitions)?,
        spheres,
    })
}

/// Locates the radii itself: k is the least sphere size occurring at least
/// `recurrence` times among radii 1..=bound, and the layers are all spheres
/// of that size.
pub fn sphere_quotient_auto<G>(
    g: &G,
    bound: u64,
    recurrence: usize,
    limits: &Limits,
) -> Result<SphereQuotient<G::Vertex>>
where
    G: RootedGraph + ?Sized,
    G::Vertex: Serialize,
{
    let sizes = layer_decomposition(g, bound, limits)?.sphere_sizes();
    let mut census: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for r in 1..=bound {
        census.entry(sizes[r as usize]).or_default().push(r);
    }
    let radii = census
        .into_iter()
        .find(|(size, rs)| *size > 0 && rs.len() >= recurrence)
        .map(|(_, rs)| rs)
        .ok_or(Error::NoConstantSubsequence {
            radius: bound,
            threshold: recurrence,
        })?;
    sphere_quotient(g, &radii, limits)
}

/// The monotone path through the ray's intersections with the chosen spheres.
pub fn ray_to_monotone<V: Clone + Ord + std::hash::Hash + std::fmt::Debug + Send + Sync>(
    q: &SphereQuotient<V>,
    ray: &GeodesicRay<V>,
) -> Result<MonotonePath> {
    let needed = *q.radii.last().unwrap();
    if (ray.len() as u64) < needed {
        return Err(Error::RayTooShort {
            length: ray.len(),
            needed,
        });
    }
    let entries = q
        .radii
        .iter()
        .enumerate()
        .map(|(n, &r)| {
            q.index_of(n, &ray.vertices()[r as usize])
                .ok_or(Error::NotGeodesic { position: r as usize })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MonotonePath::finite(0, entries))
}

/// A geodesic from the basepoint through the vertices of a monotone path of
/// the quotient, joining consecutive vertices by canonical geodesics.
pub fn lift_to_ray<G>(
    g: &G,
    q: &SphereQuotient<G::Vertex>,
    path: &MonotonePath,
    limits: &Limits,
) -> Result<GeodesicRay<G::Vertex>>
where
    G: RootedGraph + ?Sized,
{
    let end = path
        .end()
        .ok_or_else(|| Error::InvalidParameter("sphere quotients are finite; path must be finite".into()))?;
    let mut vertices = vec![g.basepoint()];
    for layer in path.start..end {
        let target = q.spheres[layer][path.at(layer).unwrap()].clone();
        let seg = geodesic_segment(g, vertices.last().unwrap(), &target, limits)?;
        vertices.extend(seg.into_iter().skip(1));
    }
    let ray = GeodesicRay::new(vertices);
    ray.validate(g, limits)?;
    Ok(ray)
}
