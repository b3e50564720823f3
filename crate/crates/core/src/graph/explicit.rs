use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

use super::RootedGraph;

/// A finite graph given by explicit vertex and edge lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitGraph {
    basepoint: String,
    adjacency: BTreeMap<String, Vec<String>>,
}

impl ExplicitGraph {
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)], basepoint: &str) -> Result<Self> {
        let mut adjacency: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for v in vertices {
            if adjacency.insert(v.as_ref().to_string(), BTreeSet::new()).is_some() {
                return Err(Error::MalformedSpec {
                    location: "vertices".into(),
                    message: format!("duplicate vertex {:?}", v.as_ref()),
                });
            }
        }
        for (i, (u, v)) in edges.iter().enumerate() {
            let (u, v) = (u.as_ref(), v.as_ref());
            for end in [u, v] {
                if !adjacency.contains_key(end) {
                    return Err(Error::MalformedSpec {
                        location: format!("edges[{i}]"),
                        message: format!("unknown vertex {end:?}"),
                    });
                }
            }
            if u == v {
                return Err(Error::MalformedSpec {
                    location: format!("edges[{i}]"),
                    message: "loops are not allowed".into(),
                });
            }
            adjacency.get_mut(u).unwrap().insert(v.to_string());
            adjacency.get_mut(v).unwrap().insert(u.to_string());
        }
        if !adjacency.contains_key(basepoint) {
            return Err(Error::MalformedSpec {
                location: "basepoint".into(),
                message: format!("unknown vertex {basepoint:?}"),
            });
        }
        Ok(ExplicitGraph {
            basepoint: basepoint.to_string(),
            adjacency: adjacency
                .into_iter()
                .map(|(k, v)| (k, v.into_iter().collect()))
                .collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }
}

impl RootedGraph for ExplicitGraph {
    type Vertex = String;

    fn basepoint(&self) -> String {
        self.basepoint.clone()
    }

    fn neighbors(&self, v: &String) -> Vec<String> {
        self.adjacency.get(v).cloned().unwrap_or_default()
    }

    fn degree_bound(&self) -> Option<usize> {
        self.adjacency.values().map(Vec::len).max()
    }
}

/// The half-line ℕ rooted at 0.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HalfLine;

impl RootedGraph for HalfLine {
    type Vertex = u64;

    fn basepoint(&self) -> u64 {
        0
    }

    fn neighbors(&self, v: &u64) -> Vec<u64> {
        if *v == 0 {
            vec![1]
        } else {
            vec![v - 1, v + 1]
        }
    }

    fn degree_bound(&self) -> Option<usize> {
        Some(2)
    }

    fn closed_form_distance(&self, x: &u64, y: &u64) -> Option<u64> {
        Some(x.abs_diff(*y))
    }
}
