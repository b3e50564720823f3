use serde::Serialize;

use crate::error::{Error, Result};

use super::{Distances, Limits, RootedGraph};

/// A finite geodesic prefix (x_0, x_1, ..., x_L) of a ray.
///
/// Infinite rays are represented by a prefix plus an extension policy;
/// [`GeodesicRay::extend_canonical`] picks, among neighbours that increase
/// the distance from x_0, the least one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GeodesicRay<V> {
    vertices: Vec<V>,
}

impl<V: Clone + Ord + std::hash::Hash + std::fmt::Debug + Send + Sync> GeodesicRay<V> {
    /// Wraps a vertex sequence without checking it; see [`GeodesicRay::validate`].
    pub fn new(vertices: Vec<V>) -> Self {
        assert!(!vertices.is_empty(), "a ray has at least one vertex");
        GeodesicRay { vertices }
    }

    /// The canonical ray from the basepoint, `len` steps long.
    pub fn canonical<G: RootedGraph<Vertex = V> + ?Sized>(g: &G, len: usize, limits: &Limits) -> Result<Self> {
        let mut ray = GeodesicRay::new(vec![g.basepoint()]);
        ray.extend_canonical(g, len, limits)?;
        Ok(ray)
    }

    pub fn vertices(&self) -> &[V] {
        &self.vertices
    }

    /// Number of steps L.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> &V {
        &self.vertices[0]
    }

    pub fn last(&self) -> &V {
        self.vertices.last().unwrap()
    }

    pub fn starts_at_basepoint<G: RootedGraph<Vertex = V> + ?Sized>(&self, g: &G) -> bool {
        self.vertices[0] == g.basepoint()
    }

    /// Checks adjacency of consecutive vertices and d(x_0, x_n) = n.
    pub fn validate<G: RootedGraph<Vertex = V> + ?Sized>(&self, g: &G, limits: &Limits) -> Result<()> {
        let mut dist = Distances::new(g, self.vertices[0].clone(), limits);
        for (n, pair) in self.vertices.windows(2).enumerate() {
            if !g.neighbors(&pair[0]).contains(&pair[1]) {
                return Err(Error::NotGeodesic { position: n + 1 });
            }
            if dist.get(&pair[1])? != (n + 1) as u64 {
                return Err(Error::NotGeodesic { position: n + 1 });
            }
        }
        Ok(())
    }

    /// Extends the prefix to `len` steps. `choose` picks an index into the
    /// candidate list (neighbours of the last vertex one step further from
    /// x_0, in canonical order).
    pub fn extend_with<G, F>(&mut self, g: &G, len: usize, limits: &Limits, mut choose: F) -> Result<()>
    where
        G: RootedGraph<Vertex = V> + ?Sized,
        F: FnMut(&[V]) -> usize,
    {
        if self.len() >= len {
            return Ok(());
        }
        let mut dist = Distances::new(g, self.vertices[0].clone(), limits);
        while self.len() < len {
            let target = (self.len() + 1) as u64;
            let mut candidates = Vec::new();
            for w in g.neighbors(self.last()) {
                if dist.get(&w)? == target {
                    candidates.push(w);
                }
            }
            if candidates.is_empty() {
                return Err(Error::RayNotExtendable { length: self.len() });
            }
            let pick = choose(&candidates).min(candidates.len() - 1);
            self.vertices.push(candidates.swap_remove(pick));
        }
        Ok(())
    }

    pub fn extend_canonical<G: RootedGraph<Vertex = V> + ?Sized>(
        &mut self,
        g: &G,
        len: usize,
        limits: &Limits,
    ) -> Result<()> {
        self.extend_with(g, len, limits, |_| 0)
    }
}

/// The canonical (lexicographically least) geodesic from `a` to `b`.
pub fn geodesic_segment<G: RootedGraph + ?Sized>(
    g: &G,
    a: &G::Vertex,
    b: &G::Vertex,
    limits: &Limits,
) -> Result<Vec<G::Vertex>> {
    let mut to_b = Distances::new(g, b.clone(), limits);
    let mut remaining = to_b.get(a)?;
    let mut path = vec![a.clone()];
    while remaining > 0 {
        let here = path.last().unwrap().clone();
        let mut next = None;
        for w in g.neighbors(&here) {
            if to_b.get(&w)? + 1 == remaining {
                next = Some(w);
                break;
            }
        }
        path.push(next.expect("a neighbour one step closer always exists"));
        remaining -= 1;
    }
    Ok(path)
}

/// Moves a geodesic prefix to the basepoint.
///
/// The sequence d(x_n, o) - d(x_n, x_0) is non-increasing; once it is
/// constant from index N on, (x_N, x_{N+1}, ...) continues a geodesic from
/// o. Returns N and the ray made of the canonical geodesic o -> x_N
/// followed by the tail of the input.
pub fn reroot_ray<G: RootedGraph + ?Sized>(
    g: &G,
    ray: &GeodesicRay<G::Vertex>,
    limits: &Limits,
) -> Result<(usize, GeodesicRay<G::Vertex>)> {
    ray.validate(g, limits)?;
    let o = g.basepoint();
    if *ray.start() == o {
        return Ok((0, ray.clone()));
    }
    let mut from_o = Distances::new(g, o.clone(), limits);
    let excess = ray
        .vertices()
        .iter()
        .enumerate()
        .map(|(n, x)| Ok(from_o.get(x)? as i64 - n as i64))
        .collect::<Result<Vec<i64>>>()?;
    let last = *excess.last().unwrap();
    let settled = excess.iter().rev().take_while(|&&s| s == last).count();
    let n = excess.len() - settled;
    if settled < 2 {
        return Err(Error::PrefixTooShort { length: ray.len() });
    }
    let mut vertices = geodesic_segment(g, &o, &ray.vertices()[n], limits)?;
    vertices.extend_from_slice(&ray.vertices()[n + 1..]);
    Ok((n, GeodesicRay::new(vertices)))
}

/// [`reroot_ray`], extending the input with the canonical policy (up to
/// `max_extra` further steps) whenever the prefix is too short.
pub fn reroot_ray_extending<G: RootedGraph + ?Sized>(
    g: &G,
    ray: &GeodesicRay<G::Vertex>,
    max_extra: usize,
    limits: &Limits,
) -> Result<(usize, GeodesicRay<G::Vertex>)> {
    let mut ray = ray.clone();
    let target = ray.len() + max_extra;
    loop {
        match reroot_ray(g, &ray, limits) {
            Err(Error::PrefixTooShort { .. }) if ray.len() < target => {
                let next = ray.len() + 1;
                ray.extend_canonical(g, next, limits)?;
            }
            other => return other,
        }
    }
}
