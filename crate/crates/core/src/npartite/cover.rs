use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

use super::layered::{monotone_reachability, LayerSelection, LayeredGraph, MonotonePath, PathDescription, Seq};
use super::matching::partition_by_matchings;
use super::prune::{prune_to_spanning, Pruned};
use super::relation::{bits, mask_of, Relation};

const MAX_RECURSION: usize = 64;

/// Base layer n, witness layers m_1 < m_2 < ..., a set U ⊆ Γ_n and sets
/// V_{m_j} = N(U) ⊆ Γ_{m_j} with |V_{m_j}| < |U| for every j.
///
/// `v[j]` belongs to `m.get(j)`; for periodic witnesses it repeats with the
/// period of `m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HallFailureWitness {
    pub n: usize,
    pub m: LayerSelection,
    pub u: Vec<usize>,
    pub v: Vec<Vec<usize>>,
    pub sizes: (usize, usize),
    pub u_names: Vec<String>,
    pub v_names: Vec<Vec<String>>,
}

impl HallFailureWitness {
    pub fn v_at(&self, j: usize) -> &[usize] {
        let pl = self.m.prefix.len();
        if j < pl {
            &self.v[j]
        } else {
            &self.v[pl + (j - pl) % self.m.period.len()]
        }
    }
}

/// How a cover was produced, one node per recursion step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "node", rename_all = "kebab-case")]
pub enum CoverTrace {
    /// Nothing survives pruning; the paths are single vertices.
    Vacuous { k: usize },
    /// Perfect matchings exist between consecutive layers of Γ_N.
    Matching {
        k: usize,
        pruned_k: usize,
        equal_layers: LayerSelection,
        selection: LayerSelection,
    },
    /// Hall's condition fails from some base layer on; the cover is the
    /// union of covers of Γ_A (the V sets) and Γ_B (their complements).
    Split {
        k: usize,
        pruned_k: usize,
        equal_layers: LayerSelection,
        witness: HallFailureWitness,
        v: usize,
        w: usize,
        alpha: Box<CoverTrace>,
        beta: Box<CoverTrace>,
    },
}

impl CoverTrace {
    pub fn k(&self) -> usize {
        match self {
            CoverTrace::Vacuous { k } | CoverTrace::Matching { k, .. } | CoverTrace::Split { k, .. } => *k,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            CoverTrace::Split { alpha, beta, .. } => 1 + alpha.depth().max(beta.depth()),
            _ => 1,
        }
    }

    /// Every split node as (pruned_k, v, w, alpha k, beta k).
    pub fn splits(&self) -> Vec<(usize, usize, usize, usize, usize)> {
        let mut out = Vec::new();
        self.collect_splits(&mut out);
        out
    }

    fn collect_splits(&self, out: &mut Vec<(usize, usize, usize, usize, usize)>) {
        if let CoverTrace::Split {
            pruned_k,
            v,
            w,
            alpha,
            beta,
            ..
        } = self
        {
            out.push((*pruned_k, *v, *w, alpha.k(), beta.k()));
            alpha.collect_splits(out);
            beta.collect_splits(out);
        }
    }
}

/// k monotone paths such that every infinite monotone path meets one of
/// them infinitely often.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverResult {
    pub k: usize,
    pub paths: Vec<MonotonePath>,
    pub named: Vec<PathDescription>,
    pub trace: CoverTrace,
    /// Truncations only approximate "infinite" by "reaches the last layer".
    pub approximate: bool,
}

fn equal_sizes(g: &LayeredGraph) -> Result<usize> {
    let sizes = g.described_sizes();
    let k = g.size(0);
    for (l, &s) in sizes.all().enumerate() {
        if s != k {
            return Err(Error::UnequalLayers {
                layer: l,
                left: k,
                right: s,
            });
        }
    }
    Ok(k)
}

enum StrideSearch {
    Found(LayerSelection),
    /// Truncations: the greedy chain of matchings stops at this layer.
    StuckAt(usize),
    NotFound,
}

fn search_stride(g: &LayeredGraph) -> Result<StrideSearch> {
    equal_sizes(g)?;
    if let Some(n) = g.layer_count() {
        let mut chain = vec![0];
        let mut at = 0;
        while at + 1 < n {
            let mut r = Relation::identity(g.size(at));
            let mut next = None;
            for m in at + 1..n {
                r = r.then(g.transition(m - 1));
                if r.has_perfect_matching() {
                    next = Some(m);
                    break;
                }
            }
            match next {
                Some(m) => {
                    chain.push(m);
                    at = m;
                }
                None => return Ok(StrideSearch::StuckAt(at)),
            }
        }
        return Ok(StrideSearch::Found(LayerSelection::finite(chain)));
    }
    let p = g.prefix_len();
    let b = g.period_len();
    if (0..p + b).all(|l| g.transition(l).has_perfect_matching()) {
        return Ok(StrideSearch::Found(LayerSelection::arithmetic(g, 0, 1)));
    }
    let mut best: Option<(usize, usize)> = None;
    for s in p..p + b {
        let t = g.reach(s, s + b);
        let mut power = t.clone();
        let mut seen = Vec::new();
        for q in 1.. {
            if best.is_some_and(|(bq, _)| q >= bq) {
                break;
            }
            if power.has_perfect_matching() {
                best = Some((q, s));
                break;
            }
            if seen.contains(&power) {
                break;
            }
            seen.push(power.clone());
            power = power.then(&t);
        }
    }
    Ok(match best {
        Some((q, s)) => StrideSearch::Found(LayerSelection::arithmetic(g, s, q * b)),
        None => StrideSearch::NotFound,
    })
}

/// A layer sequence along which all consecutive reachability relations
/// contain perfect matchings, if one exists.
///
/// Stride 1 is tried first; otherwise the least q, then the least start s
/// in the periodic region, with layers s, s + qB, s + 2qB, ... For
/// truncations the sequence is built greedily from layer 0.
pub fn find_matching_stride(g: &LayeredGraph) -> Result<Option<LayerSelection>> {
    Ok(match search_stride(g)? {
        StrideSearch::Found(sel) => Some(sel),
        _ => None,
    })
}

fn class_of(r: &Relation) -> (Vec<usize>, usize, u64) {
    let u = r.least_violator().expect("no perfect matching, so a violator exists");
    let v = r.image(u);
    (bits(u).collect(), v.count_ones() as usize, v)
}

fn witness(
    g: &LayeredGraph,
    n: usize,
    steps: &[(usize, Relation)],
    m_of: impl Fn(Vec<usize>) -> LayerSelection,
) -> HallFailureWitness {
    let classes: Vec<_> = steps.iter().map(|(_, r)| class_of(r)).collect();
    let chosen = if g.is_periodic() {
        classes.iter().map(|(u, s, _)| (u.clone(), *s)).min().unwrap()
    } else {
        let (u, s, _) = classes.last().unwrap();
        (u.clone(), *s)
    };
    let mut layers = Vec::new();
    let mut v = Vec::new();
    for ((m, _), (u, s, vm)) in steps.iter().zip(&classes) {
        if (u, s) == (&chosen.0, &chosen.1) {
            layers.push(*m);
            v.push(bits(*vm).collect::<Vec<_>>());
        }
    }
    let u_names = chosen.0.iter().map(|&i| g.name(n, i).to_string()).collect();
    let v_names = layers
        .iter()
        .zip(&v)
        .map(|(&m, set)| set.iter().map(|&i| g.name(m, i).to_string()).collect())
        .collect();
    HallFailureWitness {
        n,
        m: m_of(layers),
        sizes: (chosen.0.len(), chosen.1),
        u: chosen.0,
        v,
        u_names,
        v_names,
    }
}

/// For the least base layer n at which n → m has no perfect matching for
/// every m > n, the Hall failure witness; `None` when matchings exist along
/// some stride. Requires equal layer sizes (apply pruning and
/// normalization first).
///
/// On periodic graphs "every m > n" is decided by running the states
/// (phase of m, reachability n → m) into their cycle. U is the
/// lexicographically least violator at each m and the witness keeps the
/// least (U, |V|) class that recurs in the cycle.
pub fn find_hall_failure(g: &LayeredGraph) -> Result<Option<HallFailureWitness>> {
    match search_stride(g)? {
        StrideSearch::Found(_) => Ok(None),
        StrideSearch::StuckAt(n) => {
            let last = g.layer_count().unwrap();
            let mut steps = Vec::new();
            let mut r = Relation::identity(g.size(n));
            for m in n + 1..last {
                r = r.then(g.transition(m - 1));
                steps.push((m, r.clone()));
            }
            Ok(Some(witness(g, n, &steps, LayerSelection::finite)))
        }
        StrideSearch::NotFound => {
            for n in 0..g.prefix_len() + g.period_len() {
                let mut steps: Vec<(usize, Relation)> = Vec::new();
                let mut seen: HashMap<(usize, Relation), usize> = HashMap::new();
                let mut r = Relation::identity(g.size(n));
                let mut m = n;
                let cycle_start = loop {
                    r = r.then(g.transition(m));
                    m += 1;
                    if r.has_perfect_matching() {
                        break None;
                    }
                    if m >= g.prefix_len() {
                        if let Some(&i) = seen.get(&(g.canonical_layer(m), r.clone())) {
                            break Some(i);
                        }
                        seen.insert((g.canonical_layer(m), r.clone()), steps.len());
                    }
                    steps.push((m, r.clone()));
                };
                if let Some(i) = cycle_start {
                    let stride = m - steps[i].0;
                    let w = witness(g, n, &steps[i..], |period| LayerSelection {
                        prefix: vec![],
                        period,
                        stride,
                    });
                    return Ok(Some(w));
                }
            }
            unreachable!("some phase of the period has no matching stride")
        }
    }
}

fn segment(h: &LayeredGraph, a: usize, x: usize, b: usize, y: usize) -> Vec<usize> {
    let mut targets = vec![0u64; b - a + 1];
    targets[b - a] = 1u64 << y;
    for l in (a..b).rev() {
        targets[l - a] = h.transition(l).preimage(targets[l + 1 - a]);
    }
    debug_assert!(targets[0] >> x & 1 == 1);
    let mut out = vec![x];
    for l in a..b - 1 {
        let here = *out.last().unwrap();
        let options = h.transition(l).row(here) & targets[l + 1 - a];
        out.push(options.trailing_zeros() as usize);
    }
    out
}

/// Expands a path of Γ_sel(h) into a path of h through canonically least
/// monotone segments.
pub fn lift_path(h: &LayeredGraph, sel: &LayerSelection, path: &MonotonePath) -> MonotonePath {
    let at = |j: usize| sel.get(j).unwrap();
    let expand = |j: usize| segment(h, at(j), path.at(j).unwrap(), at(j + 1), path.at(j + 1).unwrap());
    let a = path.prefix.len();
    let start = path.start;
    if !path.is_infinite() {
        let mut out: Vec<usize> = (start..start + a - 1).flat_map(expand).collect();
        out.push(*path.prefix.last().unwrap());
        return MonotonePath::finite(at(start), out);
    }
    MonotonePath {
        start: at(start),
        prefix: (start..start + a).flat_map(expand).collect(),
        cycle: (start + a..start + a + path.cycle.len()).flat_map(expand).collect(),
    }
}

/// Re-indexes a path of an induced subgraph into its parent.
fn unmap(keep: &Seq<Vec<usize>>, path: &MonotonePath) -> MonotonePath {
    let mut l = path.start;
    let mut step = |v: &usize| {
        let r = keep.get(l).unwrap()[*v];
        l += 1;
        r
    };
    let prefix = path.prefix.iter().map(&mut step).collect();
    let cycle = path.cycle.iter().map(&mut step).collect();
    MonotonePath {
        start: path.start,
        prefix,
        cycle,
    }
}

fn pad(mut paths: Vec<MonotonePath>, k: usize) -> Vec<MonotonePath> {
    let first = paths[0].clone();
    paths.resize(k, first);
    paths
}

fn cover_rec(g: &LayeredGraph, depth: usize) -> Result<(Vec<MonotonePath>, CoverTrace)> {
    if depth > MAX_RECURSION {
        return Err(Error::RecursionDepth(depth));
    }
    let k = g.k();
    let pruned = match prune_to_spanning(g) {
        Ok(p) => p,
        Err(Error::EmptyGraph) => {
            let paths = (0..k).map(|i| MonotonePath::finite(0, vec![i % g.size(0)])).collect();
            return Ok((paths, CoverTrace::Vacuous { k }));
        }
        Err(e) => return Err(e),
    };
    let equal = pruned.equal_layers.clone();
    let g2 = monotone_reachability(&pruned.graph, &equal)?;
    let pruned_k = pruned.liminf;
    let (paths2, trace): (Vec<MonotonePath>, CoverTrace) = match search_stride(&g2)? {
        StrideSearch::Found(sel) => {
            let g3 = monotone_reachability(&g2, &sel)?;
            let paths: Vec<_> = partition_by_matchings(&g3)?
                .iter()
                .map(|p| lift_path(&g2, &sel, p))
                .collect();
            let trace = CoverTrace::Matching {
                k,
                pruned_k,
                equal_layers: equal.clone(),
                selection: sel,
            };
            (paths, trace)
        }
        _ => {
            let w = find_hall_failure(&g2)?.expect("no matching stride");
            let g3 = monotone_reachability(&g2, &w.m)?;
            let pl = w.m.prefix.len();
            let split = |inside: bool| {
                let pick = |j: usize| -> Vec<usize> {
                    let v = mask_of(w.v_at(j));
                    (0..pruned_k).filter(|i| (v >> i & 1 == 1) == inside).collect()
                };
                Seq {
                    prefix: (0..pl).map(pick).collect(),
                    period: (pl..pl + w.m.period.len()).map(pick).collect(),
                }
            };
            let (keep_a, keep_b) = (split(true), split(false));
            let (pa, ta) = cover_rec(&g3.induced(&keep_a), depth + 1)?;
            let (pb, tb) = cover_rec(&g3.induced(&keep_b), depth + 1)?;
            let paths = pa
                .iter()
                .map(|p| unmap(&keep_a, p))
                .chain(pb.iter().map(|p| unmap(&keep_b, p)))
                .map(|p| lift_path(&g2, &w.m, &p))
                .collect();
            let trace = CoverTrace::Split {
                k,
                pruned_k,
                equal_layers: equal.clone(),
                v: w.sizes.1,
                w: pruned_k - w.sizes.1,
                witness: w,
                alpha: Box::new(ta),
                beta: Box::new(tb),
            };
            (paths, trace)
        }
    };
    let paths = paths2
        .iter()
        .map(|p| unmap(&pruned.keep, &lift_path(&pruned.graph, &equal, p)))
        .collect();
    Ok((pad(paths, k), trace))
}

fn alive_mask(pruned: &Pruned, l: usize) -> u64 {
    mask_of(pruned.alive(l))
}

/// Extends a finite path forward through surviving vertices, always taking
/// the least one, until it spans a truncation or closes a cycle.
fn complete_forward(g: &LayeredGraph, pruned: &Pruned, path: MonotonePath) -> MonotonePath {
    if path.is_infinite() {
        return path;
    }
    let start = path.start;
    let mut entries = path.prefix;
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    loop {
        let l = start + entries.len() - 1;
        let v = *entries.last().unwrap();
        if !g.contains_layer(l + 1) {
            return MonotonePath::finite(start, entries);
        }
        if g.is_periodic() && l >= g.prefix_len() {
            if let Some(&i) = seen.get(&(g.canonical_layer(l), v)) {
                entries.pop();
                let cycle = entries.split_off(i);
                return MonotonePath {
                    start,
                    prefix: entries,
                    cycle,
                };
            }
            seen.insert((g.canonical_layer(l), v), entries.len() - 1);
        }
        let options = g.transition(l).row(v) & alive_mask(pruned, l + 1);
        debug_assert!(options != 0, "surviving vertices have surviving successors");
        entries.push(options.trailing_zeros() as usize);
    }
}

/// Prepends least predecessors until layer 0 or a vertex without one.
fn extend_backward(g: &LayeredGraph, mut path: MonotonePath) -> MonotonePath {
    while path.start > 0 {
        let v = path.at(path.start).unwrap();
        let pred = g.transition(path.start - 1).preimage(1u64 << v);
        if pred == 0 {
            break;
        }
        path.prefix.insert(0, pred.trailing_zeros() as usize);
        path.start -= 1;
    }
    path
}

/// The monotone path cover: prune, then either follow matchings along a
/// stride or split at a Hall failure and recurse on both parts.
///
/// Paths are expressed in `g`, extended backward to layer 0 where possible
/// and forward through surviving vertices, so on periodic graphs every path
/// is infinite.
pub fn monotone_cover(g: &LayeredGraph) -> Result<CoverResult> {
    let pruned = prune_to_spanning(g)?;
    let (paths, trace) = cover_rec(g, 0)?;
    let paths: Vec<MonotonePath> = paths
        .into_iter()
        .map(|p| extend_backward(g, complete_forward(g, &pruned, p)).normalized(g))
        .collect();
    debug_assert!(paths.iter().all(|p| p.is_valid_in(g)));
    let named = paths.iter().map(|p| p.describe(g)).collect();
    Ok(CoverResult {
        k: g.k(),
        paths,
        named,
        trace,
        approximate: !g.is_periodic(),
    })
}
