#![allow(dead_code)]

use horoscope::npartite::{LayeredGraph, LayeredSpec, Relation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn build(json: &str) -> LayeredGraph {
    serde_json::from_str::<LayeredSpec>(json)
        .expect("fixture parses")
        .build()
        .expect("fixture builds")
}

pub const HALF_LINE: &str = r#"{"mode":"periodic","period":{"layers":[["a"]]},"wrap":[["a","a"]]}"#;

pub const TWO_SPINES: &str = r#"{"mode":"periodic","period":{"layers":[["a","b"]]},"wrap":[["a","a"],["b","b"]]}"#;

pub const CROSSINGS: &str =
    r#"{"mode":"periodic","period":{"layers":[["a","b"]]},"wrap":[["a","a"],["b","b"],["a","b"]]}"#;

pub const HALL_FAILURE: &str = r#"{"mode":"periodic","period":{"layers":[["a","b"]]},"wrap":[["a","a"],["b","a"]]}"#;

pub const COLLAPSE_3: &str = r#"{"mode":"periodic","period":{"layers":[["a","b","c"]]},
    "wrap":[["a","a"],["b","a"],["c","c"]]}"#;

pub const SWAP_SEAM: &str = r#"{"mode":"periodic","prefix":{"layers":[["a","b"]]},
    "period":{"layers":[["a","b"]]},"seam":[["a","b"],["b","a"]],"wrap":[["a","a"],["b","b"]]}"#;

pub const ROTATION_3: &str = r#"{"mode":"periodic","period":{"layers":[["a","b","c"]]},
    "wrap":[["a","b"],["b","c"],["c","a"]]}"#;

/// Alternating funnel: the block is matched internally but the wrap squeezes.
pub const ALTERNATING: &str = r#"{"mode":"periodic",
    "period":{"layers":[["a","b"],["c","d"]],"edges":[[[0,"a"],[1,"c"]],[[0,"b"],[1,"d"]],[[0,"b"],[1,"c"]]]},
    "wrap":[["c","a"],["d","a"],["d","b"]]}"#;

/// Two funnels side by side with a bridge between them, k = 4, period 2.
pub const DOUBLE_FUNNEL: &str = r#"{"mode":"periodic",
    "prefix":{"layers":[["s"]]},
    "period":{"layers":[["a","b","c","d"],["a","b","c","d"]],
      "edges":[[[0,"a"],[1,"a"]],[[0,"b"],[1,"a"]],[[0,"c"],[1,"c"]],[[0,"d"],[1,"c"]],[[0,"b"],[1,"b"]]]},
    "seam":[["s","a"],["s","b"],["s","c"],["s","d"]],
    "wrap":[["a","a"],["a","b"],["b","b"],["c","c"],["c","d"],["d","d"]]}"#;

/// Period 3 with a dead branch and a narrow layer.
pub const NARROW_WAIST: &str = r#"{"mode":"periodic",
    "period":{"layers":[["a","b","x"],["m"],["a","b"]],
      "edges":[[[0,"a"],[1,"m"]],[[0,"b"],[1,"m"]],[[1,"m"],[2,"a"]],[[1,"m"],[2,"b"]]]},
    "wrap":[["a","a"],["b","b"],["b","x"]]}"#;

/// Period 4, k = 4, spines that braid every other layer.
pub const BRAID_4: &str = r#"{"mode":"periodic",
    "period":{"layers":[["p","q","r","s"],["p","q","r","s"],["p","q","r","s"],["p","q","r","s"]],
      "edges":[[[0,"p"],[1,"q"]],[[0,"q"],[1,"p"]],[[0,"r"],[1,"r"]],[[0,"s"],[1,"s"]],
               [[1,"p"],[2,"p"]],[[1,"q"],[2,"q"]],[[1,"r"],[2,"s"]],[[1,"s"],[2,"r"]],
               [[2,"p"],[3,"p"]],[[2,"q"],[3,"q"]],[[2,"r"],[3,"r"]],[[2,"s"],[3,"s"]],[[2,"q"],[3,"r"]]]},
    "wrap":[["p","p"],["q","q"],["r","r"],["s","s"]]}"#;

pub fn named_fixtures() -> Vec<(&'static str, LayeredGraph)> {
    [
        ("half-line", HALF_LINE),
        ("two-spines", TWO_SPINES),
        ("crossings", CROSSINGS),
        ("hall-failure", HALL_FAILURE),
        ("collapse-3", COLLAPSE_3),
        ("swap-seam", SWAP_SEAM),
        ("rotation-3", ROTATION_3),
        ("alternating", ALTERNATING),
        ("double-funnel", DOUBLE_FUNNEL),
        ("narrow-waist", NARROW_WAIST),
        ("braid-4", BRAID_4),
    ]
    .into_iter()
    .map(|(n, j)| (n, build(j)))
    .collect()
}

/// A random eventually periodic graph with k ≤ 4 and period ≤ 4 in which
/// some vertex of layer 0 lies on an infinite path.
pub fn random_layered(rng: &mut ChaCha8Rng) -> LayeredGraph {
    loop {
        let k = rng.gen_range(1..=4usize);
        let b = rng.gen_range(1..=4usize);
        let p = rng.gen_range(0..=2usize);
        let sizes: Vec<usize> = (0..p + b).map(|_| rng.gen_range(1..=k)).collect();
        let names: Vec<Vec<String>> = sizes
            .iter()
            .enumerate()
            .map(|(l, &n)| (0..n).map(|i| format!("v{l}.{i}")).collect())
            .collect();
        let mut rels = Vec::new();
        for l in 0..p + b {
            let next = if l + 1 < p + b { sizes[l + 1] } else { sizes[p] };
            let rows = (0..sizes[l])
                .map(|_| {
                    let mut row = 0u64;
                    for j in 0..next {
                        if rng.gen_bool(0.45) {
                            row |= 1 << j;
                        }
                    }
                    row
                })
                .collect();
            rels.push(Relation::new(rows, next));
        }
        let period_names = names[p..].to_vec();
        let period_rels = rels.split_off(p);
        let g = LayeredGraph::periodic(names[..p].to_vec(), rels, period_names, period_rels).unwrap();
        if let Ok(pruned) = horoscope::npartite::prune_to_spanning(&g) {
            if !pruned.alive(0).is_empty() {
                return g;
            }
        }
    }
}

pub fn random_fixtures(seed: u64, count: usize) -> Vec<LayeredGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_layered(&mut rng)).collect()
}
