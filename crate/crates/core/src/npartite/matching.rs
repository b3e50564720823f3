use crate::error::{Error, Result};

use super::layered::{LayeredGraph, MonotonePath};
use super::relation::MatchOutcome;

/// A perfect matching between layers `j` and `j + 1`, or a Hall violator.
pub fn layer_matching(g: &LayeredGraph, j: usize) -> Result<MatchOutcome> {
    if !g.contains_layer(j + 1) {
        return Err(Error::InvalidParameter(format!("layer {} does not exist", j + 1)));
    }
    let (left, right) = (g.size(j), g.size(j + 1));
    if left != right {
        return Err(Error::UnequalLayers { layer: j, left, right });
    }
    Ok(g.transition(j).perfect_matching())
}

/// Partitions every vertex into k vertex-disjoint monotone paths by
/// following perfect matchings between consecutive layers.
///
/// On periodic graphs the paths start at layer 0; each follows a cycle of
/// the block permutation once it enters the periodic region.
pub fn partition_by_matchings(g: &LayeredGraph) -> Result<Vec<MonotonePath>> {
    let described = g.prefix_len() + g.period_len();
    let transitions = if g.is_periodic() { described } else { described - 1 };
    let mut matchings = Vec::with_capacity(transitions);
    for j in 0..transitions {
        match layer_matching(g, j)? {
            MatchOutcome::Perfect(m) => matchings.push(m),
            MatchOutcome::Violator(v) => {
                return Err(Error::NoMatching {
                    layer: j,
                    violator: v.set,
                    neighbourhood: v.neighbourhood,
                })
            }
        }
    }
    let k = g.size(0);
    let p = g.prefix_len();
    if !g.is_periodic() {
        return Ok((0..k)
            .map(|i| {
                let mut entries = vec![i];
                for m in &matchings {
                    entries.push(m[*entries.last().unwrap()]);
                }
                MonotonePath::finite(0, entries)
            })
            .collect());
    }
    let b = g.period_len();
    let block = |x: usize| (0..b).fold(x, |v, i| matchings[p + i][v]);
    Ok((0..k)
        .map(|i| {
            let mut prefix = vec![i];
            for m in &matchings[..p] {
                prefix.push(m[*prefix.last().unwrap()]);
            }
            let entry = prefix.pop().unwrap();
            let mut cycle = Vec::new();
            let mut x = entry;
            loop {
                for step in 0..b {
                    cycle.push(x);
                    x = matchings[p + step][x];
                }
                if x == entry {
                    break;
                }
            }
            debug_assert_eq!(block(entry), cycle[b % cycle.len()]);
            MonotonePath {
                start: 0,
                prefix,
                cycle,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::npartite::{HallViolator, LayeredSpec};

    fn build(json: &str) -> LayeredGraph {
        serde_json::from_str::<LayeredSpec>(json).unwrap().build().unwrap()
    }

    #[test]
    fn violator_from_funnel() {
        let g = build(
            r#"{"mode":"truncation","layers":[["u1","u2"],["v1","v2"]],
                "edges":[[[0,"u1"],[1,"v1"]],[[0,"u2"],[1,"v1"]]]}"#,
        );
        assert_eq!(
            layer_matching(&g, 0).unwrap(),
            MatchOutcome::Violator(HallViolator {
                set: vec![0, 1],
                neighbourhood: vec![0]
            })
        );
        assert!(matches!(
            partition_by_matchings(&g),
            Err(Error::NoMatching { layer: 0, .. })
        ));
    }

    #[test]
    fn unequal_layers_rejected() {
        let g = build(r#"{"mode":"truncation","layers":[["a"],["b","c"]],"edges":[[[0,"a"],[1,"b"]]]}"#);
        assert!(matches!(layer_matching(&g, 0), Err(Error::UnequalLayers { .. })));
    }

    #[test]
    fn spines_and_half_line() {
        let g = build(r#"{"mode":"periodic","period":{"layers":[["a","b"]]},"wrap":[["a","a"],["b","b"]]}"#);
        let paths = partition_by_matchings(&g).unwrap();
        assert_eq!(paths.len(), 2);
        assert_eq!(paths[0].cycle, vec![0]);
        assert_eq!(paths[1].cycle, vec![1]);
        let h = build(r#"{"mode":"periodic","period":{"layers":[["a"]]},"wrap":[["a","a"]]}"#);
        assert_eq!(partition_by_matchings(&h).unwrap().len(), 1);
    }

    #[test]
    fn swap_at_seam() {
        let g = build(
            r#"{"mode":"periodic","prefix":{"layers":[["a","b"]]},"period":{"layers":[["a","b"]]},
                "seam":[["a","b"],["b","a"]],"wrap":[["a","a"],["b","b"]]}"#,
        );
        let paths = partition_by_matchings(&g).unwrap();
        let d: Vec<_> = paths.iter().map(|p| p.describe(&g)).collect();
        assert_eq!(
            (d[0].prefix.as_slice(), d[0].cycle.as_slice()),
            (&["a".to_string()][..], &["b".to_string()][..])
        );
        assert_eq!(
            (d[1].prefix.as_slice(), d[1].cycle.as_slice()),
            (&["b".to_string()][..], &["a".to_string()][..])
        );
        assert!(paths.iter().all(|p| p.is_valid_in(&g)));
    }

    #[test]
    fn rotation_gives_long_cycle() {
        let g =
            build(r#"{"mode":"periodic","period":{"layers":[["a","b","c"]]},"wrap":[["a","b"],["b","c"],["c","a"]]}"#);
        let paths = partition_by_matchings(&g).unwrap();
        assert_eq!(paths[0].cycle, vec![0, 1, 2]);
        for l in 0..9 {
            let mut at: Vec<_> = paths.iter().map(|p| p.at(l).unwrap()).collect();
            at.sort();
            assert_eq!(at, vec![0, 1, 2]);
        }
    }
}
