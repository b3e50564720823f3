use serde::Serialize;

use crate::par::Execution;

use super::layered::{LayeredGraph, MonotonePath};
use super::relation::bits;

/// Result of checking a cover against every monotone path spanning layers
/// `0 .. depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DepthCheck {
    pub depth: usize,
    /// min over spanning paths p of max_j |p ∩ γ_j|; `None` when no path spans.
    pub minimum: Option<usize>,
    /// Saturating count; serialized as a decimal string since it can exceed
    /// what JSON numbers carry exactly.
    #[serde(serialize_with = "decimal")]
    pub spanning_paths: u128,
}

fn decimal<S: serde::Serializer>(n: &u128, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(n)
}

type Counts = Vec<u16>;

fn dominates(a: &Counts, b: &Counts) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Minimal elements under the componentwise order. A vector can only be
/// dominated by one with a strictly smaller sum, so after sorting by sum
/// each candidate is compared against a prefix.
fn pareto(v: Vec<Counts>) -> Vec<Counts> {
    let mut keyed: Vec<(u32, Counts)> = v
        .into_iter()
        .map(|c| (c.iter().map(|&x| u32::from(x)).sum(), c))
        .collect();
    keyed.sort_unstable();
    keyed.dedup();
    let mut out: Vec<(u32, Counts)> = Vec::new();
    for (sum, c) in keyed {
        let smaller = out.partition_point(|(s, _)| *s < sum);
        if !out[..smaller].iter().any(|(_, o)| dominates(o, &c)) {
            out.push((sum, c));
        }
    }
    out.into_iter().map(|(_, c)| c).collect()
}

fn hits(paths: &[MonotonePath], layer: usize, v: usize) -> impl Iterator<Item = u16> + '_ {
    paths.iter().map(move |p| u16::from(p.at(layer) == Some(v)))
}

fn step(c: &Counts, paths: &[MonotonePath], layer: usize, v: usize) -> Counts {
    c.iter().zip(hits(paths, layer, v)).map(|(a, b)| a + b).collect()
}

/// Largest intersection of one spanning path, chosen greedily layer by
/// layer; an upper bound for [`intersection_minimum`].
fn greedy_bound(g: &LayeredGraph, paths: &[MonotonePath], depth: usize) -> Option<u16> {
    let key = |c: &Counts| (c.iter().max().copied(), c.iter().sum::<u16>());
    let mut best: Vec<Option<Counts>> = (0..g.size(0)).map(|v| Some(hits(paths, 0, v).collect())).collect();
    for l in 1..depth {
        let t = g.transition(l - 1);
        let mut next: Vec<Option<Counts>> = vec![None; g.size(l)];
        for (u, c) in best.iter().enumerate() {
            let Some(c) = c else { continue };
            for v in bits(t.row(u)) {
                let cand = step(c, paths, l, v);
                if next[v].as_ref().is_none_or(|o| key(&cand) < key(o)) {
                    next[v] = Some(cand);
                }
            }
        }
        best = next;
    }
    best.iter()
        .flatten()
        .map(|c| c.iter().max().copied().unwrap_or(0))
        .min()
}

/// Exact min over spanning paths of the largest intersection with a path
/// of `paths`, by dynamic programming over Pareto-minimal count vectors.
/// Vectors with an entry above a known feasible value cannot improve on
/// it and are dropped.
pub fn intersection_minimum(g: &LayeredGraph, paths: &[MonotonePath], depth: usize) -> DepthCheck {
    assert!(depth >= 1 && g.contains_layer(depth - 1));
    let bound = greedy_bound(g, paths, depth).unwrap_or(0);
    let mut fronts: Vec<Vec<Counts>> = (0..g.size(0)).map(|v| vec![hits(paths, 0, v).collect()]).collect();
    let mut counts: Vec<u128> = vec![1; g.size(0)];
    for l in 1..depth {
        let t = g.transition(l - 1);
        let mut next: Vec<Vec<Counts>> = vec![Vec::new(); g.size(l)];
        let mut next_counts = vec![0u128; g.size(l)];
        for (u, front) in fronts.iter().enumerate() {
            for v in bits(t.row(u)) {
                next_counts[v] = next_counts[v].saturating_add(counts[u]);
                next[v].extend(
                    front
                        .iter()
                        .map(|c| step(c, paths, l, v))
                        .filter(|c: &Counts| c.iter().all(|&x| x <= bound)),
                );
            }
        }
        fronts = next.into_iter().map(pareto).collect();
        counts = next_counts;
    }
    let minimum = fronts
        .iter()
        .flatten()
        .map(|c| *c.iter().max().unwrap_or(&0) as usize)
        .min();
    DepthCheck {
        depth,
        minimum,
        spanning_paths: counts.iter().fold(0u128, |a, &c| a.saturating_add(c)),
    }
}

/// Every monotone path through layers `0 .. depth`, by depth-first search.
pub fn spanning_paths(g: &LayeredGraph, depth: usize) -> Vec<Vec<usize>> {
    fn go(g: &LayeredGraph, depth: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if path.len() == depth {
            out.push(path.clone());
            return;
        }
        let l = path.len() - 1;
        for v in bits(g.transition(l).row(*path.last().unwrap())) {
            path.push(v);
            go(g, depth, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    for v in 0..g.size(0) {
        go(g, depth, &mut vec![v], &mut out);
    }
    out
}

/// [`intersection_minimum`] at each depth.
pub fn verify_cover(g: &LayeredGraph, paths: &[MonotonePath], depths: &[usize], exec: Execution) -> Vec<DepthCheck> {
    exec.map(depths, |&d| intersection_minimum(g, paths, d))
}
