use serde::Serialize;

use crate::error::{Error, Result};

use super::layered::{LayerSelection, LayeredGraph, Seq};
use super::relation::{bits, full};

/// The subgraph of vertices lying on an infinite monotone path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pruned {
    pub graph: LayeredGraph,
    /// Surviving vertex indices of the input, per described layer.
    pub keep: Seq<Vec<usize>>,
    /// Layers whose surviving size equals the limit inferior of the sizes.
    pub equal_layers: LayerSelection,
    pub liminf: usize,
    /// Set for truncations, where "infinite" means "reaches the last layer".
    pub approximate: bool,
}

#[derive(Serialize)]
struct Summary<'a> {
    liminf: usize,
    approximate: bool,
    equal_layers: &'a LayerSelection,
}

impl Pruned {
    pub fn alive(&self, layer: usize) -> &[usize] {
        self.keep.get(layer).map_or(&[], Vec::as_slice)
    }

    pub fn summary(&self) -> serde_json::Value {
        serde_json::to_value(Summary {
            liminf: self.liminf,
            approximate: self.approximate,
            equal_layers: &self.equal_layers,
        })
        .expect("serializable")
    }
}

/// Deletes every vertex that does not lie on an infinite monotone path.
///
/// On periodic graphs the surviving set of the block is the greatest set in
/// which every vertex has a surviving successor; prefix layers keep the
/// vertices with a successor in the next surviving layer.
pub fn prune_to_spanning(g: &LayeredGraph) -> Result<Pruned> {
    let p = g.prefix_len();
    let alive = if g.is_periodic() {
        let b = g.period_len();
        let mut block: Vec<u64> = (0..b).map(|i| full(g.size(p + i))).collect();
        loop {
            let mut changed = false;
            for i in (0..b).rev() {
                let next = block[(i + 1) % b];
                let kept = block[i] & g.transition(p + i).preimage(next);
                changed |= kept != block[i];
                block[i] = kept;
            }
            if !changed {
                break;
            }
        }
        if block.iter().all(|&m| m == 0) {
            return Err(Error::EmptyGraph);
        }
        let mut prefix = vec![0u64; p];
        for l in (0..p).rev() {
            let next = if l + 1 == p { block[0] } else { prefix[l + 1] };
            prefix[l] = g.transition(l).preimage(next);
        }
        Seq { prefix, period: block }
    } else {
        let mut prefix = vec![0u64; p];
        prefix[p - 1] = full(g.size(p - 1));
        for l in (0..p - 1).rev() {
            prefix[l] = g.transition(l).preimage(prefix[l + 1]);
        }
        if prefix.iter().all(|&m| m == 0) {
            return Err(Error::EmptyGraph);
        }
        Seq { prefix, period: vec![] }
    };
    let keep = alive.map(|_, &m| bits(m).collect::<Vec<_>>());
    let graph = g.induced(&keep);
    let (liminf, equal_layers) = if g.is_periodic() {
        let sizes: Vec<usize> = keep.period.iter().map(Vec::len).collect();
        let liminf = *sizes.iter().min().unwrap();
        let period = (0..sizes.len())
            .filter(|&i| sizes[i] == liminf)
            .map(|i| p + i)
            .collect();
        (
            liminf,
            LayerSelection {
                prefix: vec![],
                period,
                stride: g.period_len(),
            },
        )
    } else {
        let liminf = keep.prefix.iter().map(Vec::len).filter(|&s| s > 0).min().unwrap();
        let layers = (0..p).filter(|&l| keep.prefix[l].len() == liminf).collect();
        (liminf, LayerSelection::finite(layers))
    };
    Ok(Pruned {
        graph,
        keep,
        equal_layers,
        liminf,
        approximate: !g.is_periodic(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::npartite::LayeredSpec;

    fn build(json: &str) -> LayeredGraph {
        serde_json::from_str::<LayeredSpec>(json).unwrap().build().unwrap()
    }

    #[test]
    fn isolated_vertex_removed() {
        let g = build(
            r#"{"mode":"truncation","layers":[["a"],["a"],["a"],["a","x"],["a"]],
                "edges":[[[0,"a"],[1,"a"]],[[1,"a"],[2,"a"]],[[2,"a"],[3,"a"]],[[3,"a"],[4,"a"]]]}"#,
        );
        let pr = prune_to_spanning(&g).unwrap();
        assert_eq!(pr.alive(3), &[0]);
        assert!(pr.approximate);
        assert_eq!(pr.graph.k(), 1);
        assert_eq!(pr.equal_layers, LayerSelection::finite(vec![0, 1, 2, 3, 4]));
    }

    #[test]
    fn two_spines_unchanged() {
        let g = build(r#"{"mode":"periodic","period":{"layers":[["a","b"]]},"wrap":[["a","a"],["b","b"]]}"#);
        let pr = prune_to_spanning(&g).unwrap();
        assert_eq!(pr.graph, g);
        assert!(!pr.approximate);
    }

    #[test]
    fn hall_fixture_keeps_b() {
        let g = build(r#"{"mode":"periodic","period":{"layers":[["a","b"]]},"wrap":[["a","a"],["b","a"]]}"#);
        let pr = prune_to_spanning(&g).unwrap();
        assert_eq!(pr.alive(5), &[0, 1]);
        assert_eq!(pr.liminf, 2);
    }

    #[test]
    fn dead_end_branches() {
        // b feeds c, which has no successor; only the a-spine survives.
        let g = build(
            r#"{"mode":"periodic","prefix":{"layers":[["s"]]},
                "period":{"layers":[["a","b"],["a","c"]],"edges":[[[0,"a"],[1,"a"]],[[0,"b"],[1,"c"]]]},
                "seam":[["s","b"]],"wrap":[["a","a"],["a","b"]]}"#,
        );
        let pr = prune_to_spanning(&g).unwrap();
        assert_eq!(pr.alive(1), &[0]);
        assert_eq!(pr.alive(2), &[0]);
        assert_eq!(pr.alive(0), &[] as &[usize]);
        assert_eq!(pr.liminf, 1);
        assert_eq!(pr.equal_layers.period, vec![1, 2]);
    }

    #[test]
    fn nothing_survives() {
        let g = build(r#"{"mode":"periodic","period":{"layers":[["a"]]}}"#);
        assert!(matches!(prune_to_spanning(&g), Err(Error::EmptyGraph)));
    }
}
