use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

use super::{layer_decomposition, Distances, GeodesicRay, Limits, RootedGraph};

/// An integer-valued function on a finite vertex set, stored sorted by vertex.
///
/// Serializes as a sorted array of `[vertex, value]` pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ValueMap<V> {
    entries: Vec<(V, i64)>,
}

impl<V: Ord + Clone> ValueMap<V> {
    /// Builds a map from arbitrary-order pairs.
    pub fn new(mut entries: Vec<(V, i64)>) -> Self {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        entries.dedup_by(|a, b| a.0 == b.0);
        ValueMap { entries }
    }

    /// Pairs `domain` (already sorted) with `values`.
    pub fn from_sorted(domain: &[V], values: &[i64]) -> Self {
        debug_assert!(domain.windows(2).all(|w| w[0] < w[1]));
        ValueMap {
            entries: domain.iter().cloned().zip(values.iter().copied()).collect(),
        }
    }

    /// Wraps pairs whose keys are already strictly increasing.
    pub(crate) fn from_sorted_entries(entries: Vec<(V, i64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        ValueMap { entries }
    }

    pub fn entries(&self) -> &[(V, i64)] {
        &self.entries
    }

    pub fn get(&self, v: &V) -> Option<i64> {
        self.entries
            .binary_search_by(|(k, _)| k.cmp(v))
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// Like [`ValueMap::get`], searching outward from `*hint` and leaving
    /// it at the probe position; cheap when successive keys are close.
    pub fn get_near(&self, v: &V, hint: &mut usize) -> Option<i64> {
        let n = self.entries.len();
        if n == 0 {
            return None;
        }
        let at = (*hint).min(n - 1);
        let (mut lo, mut hi) = match self.entries[at].0.cmp(v) {
            Ordering::Equal => return Some(self.entries[at].1),
            Ordering::Less => {
                let mut step = 1;
                let mut lo = at + 1;
                while lo + step <= n && self.entries[lo + step - 1].0 < *v {
                    lo += step;
                    step *= 2;
                }
                (lo, (lo + step).min(n))
            }
            Ordering::Greater => {
                let mut step = 1;
                let mut hi = at;
                while hi >= step && self.entries[hi - step].0 > *v {
                    hi -= step;
                    step *= 2;
                }
                (hi.saturating_sub(step), hi)
            }
        };
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            match self.entries[mid].0.cmp(v) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => {
                    *hint = mid;
                    return Some(self.entries[mid].1);
                }
            }
        }
        *hint = lo;
        None
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&V, i64)> {
        self.entries.iter().map(|(v, x)| (v, *x))
    }

    pub fn domain(&self) -> impl Iterator<Item = &V> {
        self.entries.iter().map(|(v, _)| v)
    }

    pub fn values(&self) -> Vec<i64> {
        self.entries.iter().map(|(_, x)| *x).collect()
    }

    pub fn restrict<F: FnMut(&V) -> bool>(&self, mut keep: F) -> Self {
        ValueMap {
            entries: self.entries.iter().filter(|(v, _)| keep(v)).cloned().collect(),
        }
    }

    /// True when values differ by at most one across every edge inside the domain.
    pub fn is_lipschitz<G: RootedGraph<Vertex = V> + ?Sized>(&self, g: &G) -> bool {
        self.entries.iter().all(|(v, x)| {
            g.neighbors(v)
                .iter()
                .filter_map(|w| self.get(w))
                .all(|y| (x - y).abs() <= 1)
        })
    }
}

/// b_z(y) = d(z, y) - d(z, o) on the ball B_r.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BusemannTable<V> {
    pub source: V,
    pub radius: u64,
    pub values: ValueMap<V>,
}

fn busemann_on<G: RootedGraph + ?Sized>(g: &G, z: &G::Vertex, ball: &[G::Vertex], limits: &Limits) -> Result<Vec<i64>> {
    let mut from_z = Distances::new(g, z.clone(), limits);
    let offset = from_z.get(&g.basepoint())? as i64;
    ball.iter().map(|y| Ok(from_z.get(y)? as i64 - offset)).collect()
}

/// The Busemann function of `z` on a sorted vertex list, typically a ball
/// shared across many sources.
pub fn busemann_on_ball<G: RootedGraph + ?Sized>(
    g: &G,
    z: &G::Vertex,
    ball: &[G::Vertex],
    limits: &Limits,
) -> Result<ValueMap<G::Vertex>> {
    Ok(ValueMap::from_sorted(ball, &busemann_on(g, z, ball, limits)?))
}

/// The Busemann function of `z` restricted to B_r.
pub fn busemann<G: RootedGraph + ?Sized>(
    g: &G,
    z: &G::Vertex,
    radius: u64,
    limits: &Limits,
) -> Result<BusemannTable<G::Vertex>> {
    let ball = layer_decomposition(g, radius, limits)?.ball(radius);
    let values = busemann_on(g, z, &ball, limits)?;
    Ok(BusemannTable {
        source: z.clone(),
        radius,
        values: ValueMap::from_sorted(&ball, &values),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilizationStatus {
    /// Every value sits at its lower bound -d(o, y); no further decrease is possible.
    Stabilized,
    /// Values were constant over the window but no certificate exists.
    Heuristic,
}

/// A horofunction f_ω restricted to B_r, read off from Busemann tables along
/// a ray from the basepoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HorofunctionApprox<V> {
    pub ray: GeodesicRay<V>,
    pub radius: u64,
    pub values: ValueMap<V>,
    /// n*: every value is constant on [n*, n* + window].
    pub stabilization_depth: usize,
    pub window: usize,
    pub status: StabilizationStatus,
    /// Number of ball vertices whose value reached its lower bound.
    pub certified: usize,
}

/// Approximates f_ω(y) = lim b_{z_n}(y) on B_r.
///
/// For a ray from o, n ↦ b_{z_n}(y) is a non-increasing integer sequence
/// bounded below by -d(o, y). The ray is extended canonically until every
/// value has been constant for `window` further steps, up to `max_depth`.
pub fn horofunction_approx<G: RootedGraph + ?Sized>(
    g: &G,
    ray: &GeodesicRay<G::Vertex>,
    radius: u64,
    window: usize,
    max_depth: usize,
    limits: &Limits,
) -> Result<HorofunctionApprox<G::Vertex>> {
    if !ray.starts_at_basepoint(g) {
        return Err(Error::InvalidParameter(
            "ray must start at the basepoint; reroot it first".into(),
        ));
    }
    ray.validate(g, limits)?;
    let layers = layer_decomposition(g, radius, limits)?;
    let ball_radii = layers.ball_with_radii(radius);
    let ball: Vec<G::Vertex> = ball_radii.iter().map(|(v, _)| v.clone()).collect();

    let mut ray = ray.clone();
    let mut current: Vec<i64> = ball_radii.iter().map(|(_, d)| *d as i64).collect();
    let mut last_change = vec![0usize; ball.len()];
    let mut n = 0usize;
    let batch = window.max(1);
    loop {
        let settled_at = last_change.iter().copied().max().unwrap_or(0);
        if n >= settled_at + window {
            break;
        }
        if n >= max_depth {
            return Err(Error::NotStabilized { depth: max_depth });
        }
        let hi = (n + batch).min(max_depth);
        ray.extend_canonical(g, hi, limits)?;
        let indices: Vec<usize> = (n + 1..=hi).collect();
        let tables = limits.exec.try_map(&indices, |&i| {
            let z = &ray.vertices()[i];
            let mut from_z = Distances::new(g, z.clone(), limits);
            ball.iter()
                .map(|y| Ok(from_z.get(y)? as i64 - i as i64))
                .collect::<Result<Vec<i64>>>()
        })?;
        for (i, table) in indices.iter().zip(tables) {
            for (j, value) in table.into_iter().enumerate() {
                if value != current[j] {
                    debug_assert!(value < current[j], "Busemann sequence increased");
                    current[j] = value;
                    last_change[j] = *i;
                }
            }
        }
        n = hi;
    }

    let certified = current
        .iter()
        .zip(&ball_radii)
        .filter(|(v, (_, d))| **v == -(*d as i64))
        .count();
    let status = if certified == ball.len() {
        StabilizationStatus::Stabilized
    } else {
        StabilizationStatus::Heuristic
    };
    Ok(HorofunctionApprox {
        ray,
        radius,
        values: ValueMap::from_sorted(&ball, &current),
        stabilization_depth: last_change.into_iter().max().unwrap_or(0),
        window,
        status,
        certified,
    })
}

/// Distinct Busemann restrictions to B_r that occur at every sphere depth
/// of a trailing window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HorofunctionSet<V> {
    pub radius: u64,
    /// Sphere depths intersected, inclusive.
    pub depths: (u64, u64),
    /// B_r in canonical order; every map below is indexed like this.
    pub ball: Vec<V>,
    /// Value vectors, sorted and distinct.
    pub maps: Vec<Vec<i64>>,
}

impl<V: Ord + Clone> HorofunctionSet<V> {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn value_maps(&self) -> Vec<ValueMap<V>> {
        self.maps.iter().map(|m| ValueMap::from_sorted(&self.ball, m)).collect()
    }

    /// Restrictions of the members to a sub-ball, deduplicated.
    pub fn restricted_to(&self, keep: impl Fn(&V) -> bool) -> BTreeSet<Vec<i64>> {
        let idx: Vec<usize> = (0..self.ball.len()).filter(|&i| keep(&self.ball[i])).collect();
        self.maps.iter().map(|m| idx.iter().map(|&i| m[i]).collect()).collect()
    }
}

impl<V: Serialize + Ord + Clone> Serialize for HorofunctionSet<V> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("HorofunctionSet", 4)?;
        st.serialize_field("radius", &self.radius)?;
        st.serialize_field("depths", &[self.depths.0, self.depths.1])?;
        st.serialize_field("count", &self.maps.len())?;
        st.serialize_field("maps", &self.value_maps())?;
        st.end()
    }
}

/// Lowest sphere depth actually used for a given `(radius, depth, window)`.
///
/// Depths at or below 2r are excluded: a source that close still sees the
/// ball from the inside and produces transient tables.
pub fn window_floor(radius: u64, depth: u64, window: u64) -> u64 {
    depth.saturating_sub(window).max(2 * radius + 1)
}

/// Distinct restrictions to B_r of b_z over z ∈ S_N, kept iff they occur
/// for every N in the window `[max(depth - window, 2r + 1), depth]`.
pub fn enumerate_horofunction_restrictions<G: RootedGraph + ?Sized>(
    g: &G,
    radius: u64,
    depth: u64,
    window: u64,
    limits: &Limits,
) -> Result<HorofunctionSet<G::Vertex>> {
    if radius == 0 {
        return Err(Error::InvalidParameter("radius must be at least 1".into()));
    }
    let lo = window_floor(radius, depth, window);
    if lo > depth {
        return Err(Error::InvalidParameter(format!(
            "depth {depth} must exceed 2 * radius = {}",
            2 * radius
        )));
    }
    let layers = layer_decomposition(g, depth, limits)?;
    let ball = layers.ball(radius);
    let mut common: Option<BTreeSet<Vec<i64>>> = None;
    for n in lo..=depth {
        let sphere = layers.sphere(n);
        if sphere.is_empty() {
            return Err(Error::EmptySphere { radius: n });
        }
        let tables = limits.exec.try_map(sphere, |z| busemann_on(g, z, &ball, limits))?;
        let tables: BTreeSet<Vec<i64>> = tables.into_iter().collect();
        common = Some(match common {
            None => tables,
            Some(prev) => prev.intersection(&tables).cloned().collect(),
        });
    }
    Ok(HorofunctionSet {
        radius,
        depths: (lo, depth),
        ball,
        maps: common.unwrap_or_default().into_iter().collect(),
    })
}
