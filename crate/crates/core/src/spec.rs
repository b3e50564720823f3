//! JSON input formats, discriminated by `"kind"`.
//!
//! ```json
//! {"kind":"cayley","family":"integers-times-cyclic","m":2,"generators":[[1,0],[0,1]]}
//! {"kind":"explicit","vertices":["o","x"],"edges":[["o","x"]],"basepoint":"o"}
//! {"kind":"layered","mode":"periodic","period":{"layers":[["a","b"]]},"wrap":[["a","a"],["b","a"]]}
//! ```
//!
//! Group element tokens: integers are numbers, ℤ×ℤ_m and ℤ² elements are
//! pairs `[a, b]`, dihedral elements are `[n, f]` for x ↦ (−1)^f x + n, and
//! free-group words are strings over `a, A, b, B`. Omitting `generators`
//! selects the standard generating set.

use serde::Deserialize;
use serde_json::Value;

use crate::cayley::{parse_word, CayleyGraph, Family, GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::graph::ExplicitGraph;
use crate::npartite::{LayeredGraph, LayeredSpec};

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum Raw {
    Cayley {
        family: String,
        m: Option<u32>,
        generators: Option<Vec<Value>>,
    },
    Explicit {
        vertices: Vec<String>,
        #[serde(default)]
        edges: Vec<(String, String)>,
        basepoint: String,
    },
    Layered(LayeredSpec),
}

/// A parsed input file.
#[derive(Debug, Clone)]
pub enum GraphSpec {
    Cayley(GroupSpec),
    Explicit(ExplicitGraph),
    Layered(LayeredSpec),
}

/// A built input, ready for the library operations.
#[derive(Debug, Clone)]
pub enum BuiltGraph {
    Cayley(CayleyGraph),
    Explicit(ExplicitGraph),
    Layered(LayeredGraph),
}

fn malformed(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::MalformedSpec {
        location: location.into(),
        message: message.into(),
    }
}

fn family(name: &str, m: Option<u32>) -> Result<Family> {
    Ok(match name {
        "integers" => Family::Integers,
        "integers-times-cyclic" => {
            Family::IntegersTimesCyclic(m.ok_or_else(|| malformed("m", "integers-times-cyclic needs m"))?)
        }
        "infinite-dihedral" => Family::InfiniteDihedral,
        "integer-lattice-2d" => Family::IntegerLattice2d,
        "free" => Family::Free,
        other => return Err(malformed("family", format!("unknown family {other:?}"))),
    })
}

fn pair(v: &Value) -> Option<(i64, i64)> {
    match v.as_array()?.as_slice() {
        [a, b] => Some((a.as_i64()?, b.as_i64()?)),
        _ => None,
    }
}

/// Reads a group element token in the normal form of `family`.
pub fn parse_element(family: Family, v: &Value) -> Result<GroupElement> {
    let bad = || malformed("generators", format!("{v} is not an element of {}", family.name()));
    let x = match family {
        Family::Integers => GroupElement::Int(v.as_i64().ok_or_else(bad)?),
        Family::IntegersTimesCyclic(m) => {
            let (a, r) = pair(v).ok_or_else(bad)?;
            GroupElement::IntMod(a, r.rem_euclid(i64::from(m.max(1))) as u32)
        }
        Family::InfiniteDihedral => match pair(v).ok_or_else(bad)? {
            (n, 0) => GroupElement::Dihedral(n, false),
            (n, 1) => GroupElement::Dihedral(n, true),
            _ => return Err(bad()),
        },
        Family::IntegerLattice2d => {
            let (a, b) = pair(v).ok_or_else(bad)?;
            GroupElement::Lattice(a, b)
        }
        Family::Free => GroupElement::Word(parse_word(v.as_str().ok_or_else(bad)?).ok_or_else(bad)?),
    };
    Ok(x)
}

impl GraphSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Raw = serde_json::from_str(text)
            .map_err(|e| malformed(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        Ok(match raw {
            Raw::Cayley {
                family: name,
                m,
                generators,
            } => {
                let family = family(&name, m)?;
                match generators {
                    None => GraphSpec::Cayley(GroupSpec::standard(family)),
                    Some(gens) => GraphSpec::Cayley(GroupSpec {
                        family,
                        generators: gens.iter().map(|g| parse_element(family, g)).collect::<Result<_>>()?,
                    }),
                }
            }
            Raw::Explicit {
                vertices,
                edges,
                basepoint,
            } => GraphSpec::Explicit(ExplicitGraph::new(&vertices, &edges, &basepoint)?),
            Raw::Layered(spec) => GraphSpec::Layered(spec),
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GraphSpec::Cayley(_) => "cayley",
            GraphSpec::Explicit(_) => "explicit",
            GraphSpec::Layered(_) => "layered",
        }
    }

    pub fn build(&self) -> Result<BuiltGraph> {
        Ok(match self {
            GraphSpec::Cayley(spec) => BuiltGraph::Cayley(CayleyGraph::new(spec)?),
            GraphSpec::Explicit(g) => BuiltGraph::Explicit(g.clone()),
            GraphSpec::Layered(spec) => BuiltGraph::Layered(spec.build()?),
        })
    }
}
