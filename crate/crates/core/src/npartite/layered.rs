use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::relation::{Relation, MAX_LAYER};

/// An eventually periodic sequence: `prefix` followed by `period` repeated
/// forever, or just `prefix` when `period` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Seq<T> {
    pub prefix: Vec<T>,
    pub period: Vec<T>,
}

impl<T> Seq<T> {
    pub fn get(&self, i: usize) -> Option<&T> {
        if i < self.prefix.len() {
            Some(&self.prefix[i])
        } else if self.period.is_empty() {
            None
        } else {
            Some(&self.period[(i - self.prefix.len()) % self.period.len()])
        }
    }

    pub fn map<U>(&self, mut f: impl FnMut(usize, &T) -> U) -> Seq<U> {
        let p = self.prefix.len();
        Seq {
            prefix: self.prefix.iter().enumerate().map(|(i, x)| f(i, x)).collect(),
            period: self.period.iter().enumerate().map(|(i, x)| f(p + i, x)).collect(),
        }
    }

    pub fn all(&self) -> impl Iterator<Item = &T> {
        self.prefix.iter().chain(&self.period)
    }
}

/// An ℕ-partite graph whose edges join consecutive layers only.
///
/// Two descriptions are supported:
/// * truncation: finitely many layers;
/// * eventually periodic: a prefix of P layers followed by a block of B
///   layers repeated forever. Layer P + qB + i is a copy of block layer i.
///
/// `transitions[L]` relates layer L to layer L + 1 and follows the same
/// prefix/period indexing as the layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredGraph {
    names: Seq<Vec<String>>,
    transitions: Seq<Relation>,
}

impl LayeredGraph {
    /// Builds a truncated graph from per-layer names and transitions.
    pub fn truncation(names: Vec<Vec<String>>, transitions: Vec<Relation>) -> Result<Self> {
        if names.is_empty() || transitions.len() + 1 != names.len() {
            return Err(Error::MalformedSpec {
                location: "layers".into(),
                message: "a truncation needs L layers and L - 1 transitions".into(),
            });
        }
        Self::checked(
            Seq {
                prefix: names,
                period: vec![],
            },
            Seq {
                prefix: transitions,
                period: vec![],
            },
        )
    }

    /// Builds an eventually periodic graph. `prefix_transitions[P - 1]` is
    /// the seam into the first period layer; `period_transitions[B - 1]` is
    /// the wrap into the next copy of the block.
    pub fn periodic(
        prefix_names: Vec<Vec<String>>,
        prefix_transitions: Vec<Relation>,
        period_names: Vec<Vec<String>>,
        period_transitions: Vec<Relation>,
    ) -> Result<Self> {
        if period_names.is_empty()
            || period_names.len() != period_transitions.len()
            || prefix_names.len() != prefix_transitions.len()
        {
            return Err(Error::MalformedSpec {
                location: "period".into(),
                message: "periodic graphs need one transition per layer".into(),
            });
        }
        Self::checked(
            Seq {
                prefix: prefix_names,
                period: period_names,
            },
            Seq {
                prefix: prefix_transitions,
                period: period_transitions,
            },
        )
    }

    fn checked(names: Seq<Vec<String>>, transitions: Seq<Relation>) -> Result<Self> {
        let g = LayeredGraph { names, transitions };
        for (l, layer) in g.names.all().enumerate() {
            if layer.len() > MAX_LAYER {
                return Err(Error::LayerTooLarge(layer.len()));
            }
            let mut sorted = layer.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != layer.len() {
                return Err(Error::MalformedSpec {
                    location: format!("layer {l}"),
                    message: "duplicate vertex name".into(),
                });
            }
        }
        let count = g.names.prefix.len() + g.names.period.len();
        let transitions = g.transitions.prefix.len() + g.transitions.period.len();
        for l in 0..transitions.min(count) {
            let t = g.transition(l);
            if t.row_count() != g.size(l) || t.col_count() != g.size(l + 1) {
                return Err(Error::MalformedSpec {
                    location: format!("transition {l}"),
                    message: "relation shape does not match layer sizes".into(),
                });
            }
        }
        Ok(g)
    }

    pub fn is_periodic(&self) -> bool {
        !self.names.period.is_empty()
    }

    /// P: number of prefix layers (for truncations, the number of layers).
    pub fn prefix_len(&self) -> usize {
        self.names.prefix.len()
    }

    /// B: number of layers in the repeating block (0 for truncations).
    pub fn period_len(&self) -> usize {
        self.names.period.len()
    }

    /// Number of layers of a truncation; `None` when infinite.
    pub fn layer_count(&self) -> Option<usize> {
        (!self.is_periodic()).then(|| self.names.prefix.len())
    }

    pub fn contains_layer(&self, l: usize) -> bool {
        self.layer_count().is_none_or(|n| l < n)
    }

    pub fn size(&self, l: usize) -> usize {
        self.names.get(l).map_or(0, Vec::len)
    }

    pub fn names(&self, l: usize) -> &[String] {
        self.names.get(l).expect("layer in range")
    }

    pub fn name(&self, l: usize, i: usize) -> &str {
        &self.names(l)[i]
    }

    pub fn transition(&self, l: usize) -> &Relation {
        self.transitions.get(l).expect("transition in range")
    }

    /// k: the largest layer size.
    pub fn k(&self) -> usize {
        self.names.all().map(Vec::len).max().unwrap_or(0)
    }

    /// Layer sizes of the description (prefix, then one block).
    pub fn described_sizes(&self) -> Seq<usize> {
        self.names.map(|_, n| n.len())
    }

    /// Layers a periodic graph repeats with; identical structure at l and
    /// `canonical_layer(l)`.
    pub fn canonical_layer(&self, l: usize) -> usize {
        let p = self.prefix_len();
        if !self.is_periodic() || l < p {
            l
        } else {
            p + (l - p) % self.period_len()
        }
    }

    /// Monotone-path reachability from layer `from` to layer `to` (≥ from).
    pub fn reach(&self, from: usize, to: usize) -> Relation {
        assert!(from <= to && self.contains_layer(to));
        let mut r = Relation::identity(self.size(from));
        for l in from..to {
            r = r.then(self.transition(l));
        }
        r
    }

    /// The subgraph induced on `keep`, which must have the same
    /// prefix/period shape as the layers.
    pub fn induced(&self, keep: &Seq<Vec<usize>>) -> LayeredGraph {
        assert_eq!(keep.prefix.len(), self.names.prefix.len());
        assert_eq!(keep.period.len(), self.names.period.len());
        let names = keep.map(|l, idx| idx.iter().map(|&i| self.name(l, i).to_string()).collect());
        let transitions = self.transitions.map(|l, t| {
            let next = keep.get(l + 1).map(Vec::as_slice).unwrap_or(&[]);
            t.restrict(&keep.get(l).unwrap()[..], next)
        });
        LayeredGraph { names, transitions }
    }

    /// Raw per-layer structure, for building derived graphs.
    pub(crate) fn from_parts(names: Seq<Vec<String>>, transitions: Seq<Relation>) -> Self {
        LayeredGraph { names, transitions }
    }
}

/// An eventually periodic strictly increasing sequence of layer indices.
///
/// Entry j is `prefix[j]` for j below the prefix length, and otherwise
/// `period[t] + q * stride` where `j - prefix.len() = q * period.len() + t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LayerSelection {
    pub prefix: Vec<usize>,
    pub period: Vec<usize>,
    pub stride: usize,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl LayerSelection {
    pub fn finite(layers: Vec<usize>) -> Self {
        LayerSelection {
            prefix: layers,
            period: vec![],
            stride: 0,
        }
    }

    /// start, start + step, start + 2 step, ... within `g`.
    pub fn arithmetic(g: &LayeredGraph, start: usize, step: usize) -> Self {
        assert!(step > 0);
        match g.layer_count() {
            Some(n) => LayerSelection::finite((start..n).step_by(step).collect()),
            None => {
                let b = g.period_len();
                let stride = step / gcd(step, b) * b;
                let p = g.prefix_len();
                let prefix: Vec<usize> = (start..p.max(start)).step_by(step).collect();
                let first = start + prefix.len() * step;
                LayerSelection {
                    prefix,
                    period: (0..stride / step).map(|t| first + t * step).collect(),
                    stride,
                }
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    pub fn len(&self) -> Option<usize> {
        self.is_finite().then(|| self.prefix.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn get(&self, j: usize) -> Option<usize> {
        if j < self.prefix.len() {
            Some(self.prefix[j])
        } else if self.period.is_empty() {
            None
        } else {
            let t = j - self.prefix.len();
            let c = self.period.len();
            Some(self.period[t % c] + (t / c) * self.stride)
        }
    }

    /// Checks monotonicity and compatibility with the period of `g`.
    pub fn validate(&self, g: &LayeredGraph) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(format!("layer selection {self:?}: {m}")));
        let mut probe: Vec<usize> = self.prefix.clone();
        if !self.period.is_empty() {
            probe.extend(self.period.iter());
            probe.push(self.period[0] + self.stride);
        }
        if probe.windows(2).any(|w| w[0] >= w[1]) {
            return bad("not strictly increasing");
        }
        match g.layer_count() {
            Some(n) => {
                if !self.period.is_empty() {
                    return bad("truncated graphs need a finite selection");
                }
                if self.prefix.last().is_some_and(|&l| l >= n) {
                    return bad("beyond the truncation");
                }
            }
            None => {
                if self.period.is_empty() {
                    return Ok(());
                }
                if self.period[0] < g.prefix_len() || self.stride % g.period_len() != 0 {
                    return bad("period must sit in the periodic region with a compatible stride");
                }
            }
        }
        Ok(())
    }

    /// Composition: layers of `self` picked by `inner` (indices into self).
    pub fn compose(&self, inner: &LayerSelection) -> LayerSelection {
        let map = |j: usize| self.get(j).expect("selection index in range");
        if inner.period.is_empty() {
            return LayerSelection::finite(inner.prefix.iter().map(|&j| map(j)).collect());
        }
        let c = self.period.len();
        let q = inner.stride / c;
        LayerSelection {
            prefix: inner.prefix.iter().map(|&j| map(j)).collect(),
            period: inner.period.iter().map(|&j| map(j)).collect(),
            stride: q * self.stride,
        }
    }
}

/// Γ_N: layers `sel` of `g`, joined when a monotone path connects them in `g`.
pub fn monotone_reachability(g: &LayeredGraph, sel: &LayerSelection) -> Result<LayeredGraph> {
    sel.validate(g)?;
    if sel.is_empty() {
        return Err(Error::InvalidParameter("empty layer selection".into()));
    }
    let names = |l: usize| g.names(l).to_vec();
    if sel.is_finite() {
        let layers = &sel.prefix;
        return Ok(LayeredGraph::from_parts(
            Seq {
                prefix: layers.iter().map(|&l| names(l)).collect(),
                period: vec![],
            },
            Seq {
                prefix: layers.windows(2).map(|w| g.reach(w[0], w[1])).collect(),
                period: vec![],
            },
        ));
    }
    let pl = sel.prefix.len();
    let c = sel.period.len();
    let at = |j: usize| sel.get(j).unwrap();
    Ok(LayeredGraph::from_parts(
        Seq {
            prefix: (0..pl).map(|j| names(at(j))).collect(),
            period: (pl..pl + c).map(|j| names(at(j))).collect(),
        },
        Seq {
            prefix: (0..pl).map(|j| g.reach(at(j), at(j + 1))).collect(),
            period: (pl..pl + c).map(|j| g.reach(at(j), at(j + 1))).collect(),
        },
    ))
}

/// A monotone path: one vertex index per consecutive layer from `start`.
///
/// Entries cover layers `start .. start + prefix.len()`, then `cycle`
/// repeats forever. Infinite paths on periodic graphs begin their cycle in
/// the periodic region and have a cycle length divisible by the period.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MonotonePath {
    pub start: usize,
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl MonotonePath {
    pub fn finite(start: usize, entries: Vec<usize>) -> Self {
        MonotonePath {
            start,
            prefix: entries,
            cycle: vec![],
        }
    }

    pub fn is_infinite(&self) -> bool {
        !self.cycle.is_empty()
    }

    /// One past the last layer of a finite path.
    pub fn end(&self) -> Option<usize> {
        (!self.is_infinite()).then(|| self.start + self.prefix.len())
    }

    pub fn at(&self, layer: usize) -> Option<usize> {
        let i = layer.checked_sub(self.start)?;
        if i < self.prefix.len() {
            Some(self.prefix[i])
        } else if self.cycle.is_empty() {
            None
        } else {
            Some(self.cycle[(i - self.prefix.len()) % self.cycle.len()])
        }
    }

    /// Entries for layers `start ..= last` that the path covers.
    pub fn entries_until(&self, last: usize) -> Vec<(usize, usize)> {
        (self.start..=last).map_while(|l| self.at(l).map(|v| (l, v))).collect()
    }

    /// Checks adjacency (including one wrap of the cycle) and the
    /// periodic-alignment invariant.
    pub fn is_valid_in(&self, g: &LayeredGraph) -> bool {
        if self.prefix.is_empty() && self.cycle.is_empty() {
            return false;
        }
        if self.is_infinite() {
            if !g.is_periodic()
                || self.start + self.prefix.len() < g.prefix_len()
                || self.cycle.len() % g.period_len() != 0
            {
                return false;
            }
        } else if !g.contains_layer(self.end().unwrap() - 1) {
            return false;
        }
        let horizon = self.start + self.prefix.len() + self.cycle.len();
        let entries = self.entries_until(horizon);
        entries.iter().all(|&(l, v)| v < g.size(l))
            && entries
                .windows(2)
                .all(|w| g.transition(w[0].0).contains(w[0].1, w[1].1))
    }

    /// The same path with the shortest cycle and prefix the period allows.
    pub fn normalized(&self, g: &LayeredGraph) -> MonotonePath {
        let mut p = self.clone();
        if !p.is_infinite() {
            return p;
        }
        let b = g.period_len();
        let len = p.cycle.len();
        if let Some(d) = (b..len)
            .step_by(b)
            .find(|d| len % d == 0 && (0..len).all(|i| p.cycle[i] == p.cycle[i % d]))
        {
            p.cycle.truncate(d);
        }
        while p.start + p.prefix.len() > g.prefix_len() && p.prefix.last() == p.cycle.last() {
            p.prefix.pop();
            p.cycle.rotate_right(1);
        }
        p
    }

    pub fn describe(&self, g: &LayeredGraph) -> PathDescription {
        let mut l = self.start;
        let mut name = |v: &usize| {
            let n = g.name(l, *v).to_string();
            l += 1;
            n
        };
        let prefix = self.prefix.iter().map(&mut name).collect();
        let cycle = self.cycle.iter().map(&mut name).collect();
        PathDescription {
            start: self.start,
            prefix,
            cycle,
        }
    }
}

/// A [`MonotonePath`] with vertex names in place of indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDescription {
    pub start: usize,
    pub prefix: Vec<String>,
    pub cycle: Vec<String>,
}

/// A block of layers with edges between consecutive ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationSpec {
    pub layers: Vec<Vec<String>>,
    /// `[[j, name], [j + 1, name]]`, layer indices relative to the block.
    #[serde(default)]
    pub edges: Vec<((usize, String), (usize, String))>,
}

/// JSON description of a layered graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum LayeredSpec {
    Truncation(TruncationSpec),
    Periodic {
        #[serde(default = "empty_block")]
        prefix: TruncationSpec,
        period: TruncationSpec,
        /// Edges from the last prefix layer to the first period layer.
        #[serde(default)]
        seam: Vec<(String, String)>,
        /// Edges from the last period layer to the first layer of the next copy.
        #[serde(default)]
        wrap: Vec<(String, String)>,
    },
}

fn empty_block() -> TruncationSpec {
    TruncationSpec {
        layers: vec![],
        edges: vec![],
    }
}

struct Indexer<'a> {
    block: &'a str,
    layers: &'a [Vec<String>],
    index: Vec<BTreeMap<&'a str, usize>>,
}

impl<'a> Indexer<'a> {
    fn new(block: &'a str, layers: &'a [Vec<String>]) -> Self {
        Indexer {
            block,
            layers,
            index: layers
                .iter()
                .map(|l| l.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect())
                .collect(),
        }
    }

    fn lookup(&self, layer: usize, name: &str, at: &str) -> Result<usize> {
        self.index
            .get(layer)
            .and_then(|m| m.get(name).copied())
            .ok_or_else(|| Error::MalformedSpec {
                location: format!("{}.{}", self.block, at),
                message: format!("no vertex {name:?} in layer {layer}"),
            })
    }

    fn transitions(&self, edges: &[((usize, String), (usize, String))]) -> Result<Vec<Relation>> {
        let n = self.layers.len();
        let mut pairs = vec![Vec::new(); n.saturating_sub(1)];
        for (e, ((la, a), (lb, b))) in edges.iter().enumerate() {
            let ((la, a), (lb, b)) = if la <= lb {
                ((la, a), (lb, b))
            } else {
                ((lb, b), (la, a))
            };
            if *lb != la + 1 {
                return Err(Error::NonConsecutiveEdge {
                    from: (*la, a.clone()),
                    to: (*lb, b.clone()),
                });
            }
            let at = format!("edges[{e}]");
            let i = self.lookup(*la, a, &at)?;
            let j = self.lookup(*lb, b, &at)?;
            pairs[*la].push((i, j));
        }
        Ok(pairs
            .into_iter()
            .enumerate()
            .map(|(l, p)| Relation::from_pairs(self.layers[l].len(), self.layers[l + 1].len(), p))
            .collect())
    }

    fn bridge(&self, to: &Indexer, edges: &[(String, String)], what: &str) -> Result<Relation> {
        let from_layer = self.layers.len() - 1;
        let mut pairs = Vec::new();
        for (e, (a, b)) in edges.iter().enumerate() {
            let at = format!("{what}[{e}]");
            pairs.push((self.lookup(from_layer, a, &at)?, to.lookup(0, b, &at)?));
        }
        Ok(Relation::from_pairs(
            self.layers[from_layer].len(),
            to.layers[0].len(),
            pairs,
        ))
    }
}

impl LayeredSpec {
    pub fn build(&self) -> Result<LayeredGraph> {
        match self {
            LayeredSpec::Truncation(t) => {
                let ix = Indexer::new("layers", &t.layers);
                LayeredGraph::truncation(t.layers.clone(), ix.transitions(&t.edges)?)
            }
            LayeredSpec::Periodic {
                prefix,
                period,
                seam,
                wrap,
            } => {
                if period.layers.is_empty() {
                    return Err(Error::MalformedSpec {
                        location: "period.layers".into(),
                        message: "the period needs at least one layer".into(),
                    });
                }
                let pre = Indexer::new("prefix", &prefix.layers);
                let per = Indexer::new("period", &period.layers);
                let mut prefix_t = pre.transitions(&prefix.edges)?;
                if !prefix.layers.is_empty() {
                    prefix_t.push(pre.bridge(&per, seam, "seam")?);
                } else if !seam.is_empty() {
                    return Err(Error::MalformedSpec {
                        location: "seam".into(),
                        message: "seam edges need a nonempty prefix".into(),
                    });
                }
                let mut period_t = per.transitions(&period.edges)?;
                period_t.push(per.bridge(&per, wrap, "wrap")?);
                LayeredGraph::periodic(prefix.layers.clone(), prefix_t, period.layers.clone(), period_t)
            }
        }
    }

    /// Inverse of [`LayeredSpec::build`].
    pub fn from_graph(g: &LayeredGraph) -> LayeredSpec {
        let block = |names: &[Vec<String>], offset: usize| {
            let mut edges = Vec::new();
            for l in 0..names.len().saturating_sub(1) {
                for (i, j) in g.transition(offset + l).pairs() {
                    edges.push(((l, names[l][i].clone()), (l + 1, names[l + 1][j].clone())));
                }
            }
            TruncationSpec {
                layers: names.to_vec(),
                edges,
            }
        };
        let named = |from: usize, to_first: bool| {
            g.transition(from)
                .pairs()
                .map(|(i, j)| {
                    let target = if to_first {
                        g.name(from + 1, j)
                    } else {
                        g.name(from + 1, j)
                    };
                    (g.name(from, i).to_string(), target.to_string())
                })
                .collect::<Vec<_>>()
        };
        match g.layer_count() {
            Some(_) => LayeredSpec::Truncation(block(&g.names.prefix, 0)),
            None => {
                let p = g.prefix_len();
                let b = g.period_len();
                LayeredSpec::Periodic {
                    prefix: block(&g.names.prefix, 0),
                    period: block(&g.names.period, p),
                    seam: if p > 0 { named(p - 1, true) } else { vec![] },
                    wrap: named(p + b - 1, true),
                }
            }
        }
    }
}
