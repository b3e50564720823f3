//! Built-in finitely generated groups and their Cayley graphs.
//!
//! Normal forms:
//!
//! | family                 | element              | JSON token       |
//! |------------------------|----------------------|------------------|
//! | `integers`             | n                    | `n`              |
//! | `integers-times-cyclic`| (n, r mod m)         | `[n, r]`         |
//! | `infinite-dihedral`    | (n, f): x ↦ (-1)^f x + n | `[n, f]`     |
//! | `integer-lattice-2d`   | (x, y)               | `[x, y]`         |
//! | `free`                 | reduced word in a, b | `"aB"` (A = a⁻¹) |
//!
//! Edges join x to x·s for every generator s, so the graph is invariant
//! under left multiplication.

mod action;

pub use action::{act, extract_homomorphism, orbit_analysis, HomomorphismWitness, OrbitResult};

use std::fmt;

use serde::{Serialize, Serializer};
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::graph::{Distances, Limits, RootedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Integers,
    IntegersTimesCyclic(u32),
    InfiniteDihedral,
    IntegerLattice2d,
    /// Free group of rank 2.
    Free,
}

/// Letters of the free group: B = 0, A = 1, a = 2, b = 3, so the inverse of
/// l is 3 - l and numeric order is the alphabetical order B < A < a < b.
pub type Letter = i8;

const fn inverse_letter(l: Letter) -> Letter {
    3 - l
}

/// Reduced words; short words are stored inline.
pub type Letters = SmallVec<[Letter; 16]>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElement {
    Int(i64),
    IntMod(i64, u32),
    Dihedral(i64, bool),
    Lattice(i64, i64),
    Word(Letters),
}

fn letter_char(l: Letter) -> char {
    match l {
        0 => 'B',
        1 => 'A',
        2 => 'a',
        3 => 'b',
        _ => '?',
    }
}

pub fn parse_word(s: &str) -> Option<Letters> {
    let mut word = Letters::new();
    for c in s.chars() {
        let l = match c {
            'B' => 0,
            'A' => 1,
            'a' => 2,
            'b' => 3,
            _ => return None,
        };
        if word.last() == Some(&inverse_letter(l)) {
            word.pop();
        } else {
            word.push(l);
        }
    }
    Some(word)
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Int(n) => write!(f, "{n}"),
            GroupElement::IntMod(n, r) => write!(f, "({n},{r})"),
            GroupElement::Dihedral(n, flip) => write!(f, "({n},{})", u8::from(*flip)),
            GroupElement::Lattice(x, y) => write!(f, "({x},{y})"),
            GroupElement::Word(w) if w.is_empty() => write!(f, "e"),
            GroupElement::Word(w) => {
                for &l in w {
                    write!(f, "{}", letter_char(l))?;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GroupElement::Int(n) => s.serialize_i64(*n),
            GroupElement::IntMod(n, r) => (n, r).serialize(s),
            GroupElement::Dihedral(n, flip) => (n, u8::from(*flip)).serialize(s),
            GroupElement::Lattice(x, y) => (x, y).serialize(s),
            GroupElement::Word(w) => s.serialize_str(&w.iter().map(|&l| letter_char(l)).collect::<String>()),
        }
    }
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Integers => "integers",
            Family::IntegersTimesCyclic(_) => "integers-times-cyclic",
            Family::InfiniteDihedral => "infinite-dihedral",
            Family::IntegerLattice2d => "integer-lattice-2d",
            Family::Free => "free",
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            Family::Integers => GroupElement::Int(0),
            Family::IntegersTimesCyclic(_) => GroupElement::IntMod(0, 0),
            Family::InfiniteDihedral => GroupElement::Dihedral(0, false),
            Family::IntegerLattice2d => GroupElement::Lattice(0, 0),
            Family::Free => GroupElement::Word(Letters::new()),
        }
    }

    /// True if `x` is a valid normal form of this family.
    pub fn contains(&self, x: &GroupElement) -> bool {
        match (self, x) {
            (Family::Integers, GroupElement::Int(_)) => true,
            (Family::IntegersTimesCyclic(m), GroupElement::IntMod(_, r)) => r < m,
            (Family::InfiniteDihedral, GroupElement::Dihedral(..)) => true,
            (Family::IntegerLattice2d, GroupElement::Lattice(..)) => true,
            (Family::Free, GroupElement::Word(w)) => {
                w.iter().all(|l| (0..=3).contains(l)) && w.windows(2).all(|p| p[0] != inverse_letter(p[1]))
            }
            _ => false,
        }
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        use GroupElement::*;
        match (self, a, b) {
            (Family::Integers, Int(x), Int(y)) => Int(x + y),
            (Family::IntegersTimesCyclic(m), IntMod(x, r), IntMod(y, s)) => IntMod(x + y, (r + s) % m),
            (Family::InfiniteDihedral, Dihedral(x, f), Dihedral(y, g)) => {
                let y = if *f { -y } else { *y };
                Dihedral(x + y, f ^ g)
            }
            (Family::IntegerLattice2d, Lattice(a1, a2), Lattice(b1, b2)) => Lattice(a1 + b1, a2 + b2),
            (Family::Free, Word(u), Word(v)) => {
                let mut w = u.clone();
                for &l in v {
                    if w.last() == Some(&inverse_letter(l)) {
                        w.pop();
                    } else {
                        w.push(l);
                    }
                }
                Word(w)
            }
            _ => panic!("{a} or {b} is not an element of {}", self.name()),
        }
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        use GroupElement::*;
        match (self, a) {
            (Family::Integers, Int(x)) => Int(-x),
            (Family::IntegersTimesCyclic(m), IntMod(x, r)) => IntMod(-x, (m - r) % m),
            (Family::InfiniteDihedral, Dihedral(x, false)) => Dihedral(-x, false),
            (Family::InfiniteDihedral, Dihedral(x, true)) => Dihedral(*x, true),
            (Family::IntegerLattice2d, Lattice(x, y)) => Lattice(-x, -y),
            (Family::Free, Word(w)) => Word(w.iter().rev().map(|&l| inverse_letter(l)).collect()),
            _ => panic!("{a} is not an element of {}", self.name()),
        }
    }

    /// The usual symmetric generating set.
    pub fn standard_generators(&self) -> Vec<GroupElement> {
        use GroupElement::*;
        let mut gens = match self {
            Family::Integers => vec![Int(1), Int(-1)],
            Family::IntegersTimesCyclic(m) => {
                vec![IntMod(1, 0), IntMod(-1, 0), IntMod(0, 1 % m), IntMod(0, (m - 1) % m)]
            }
            Family::InfiniteDihedral => vec![Dihedral(0, true), Dihedral(1, true)],
            Family::IntegerLattice2d => {
                vec![Lattice(1, 0), Lattice(-1, 0), Lattice(0, 1), Lattice(0, -1)]
            }
            Family::Free => vec![
                Word(smallvec![2]),
                Word(smallvec![1]),
                Word(smallvec![3]),
                Word(smallvec![0]),
            ],
        };
        gens.sort();
        gens.dedup();
        gens
    }

    /// Word length with respect to the standard generators.
    fn standard_length(&self, x: &GroupElement) -> u64 {
        use GroupElement::*;
        match (self, x) {
            (Family::Integers, Int(n)) => n.unsigned_abs(),
            (Family::IntegersTimesCyclic(m), IntMod(n, r)) => n.unsigned_abs() + u64::from((*r).min(m - r)),
            // The Cayley graph is a line: ..., ts, t, e, s, st, ...
            (Family::InfiniteDihedral, Dihedral(n, false)) => 2 * n.unsigned_abs(),
            (Family::InfiniteDihedral, Dihedral(n, true)) => {
                if *n <= 0 {
                    2 * n.unsigned_abs() + 1
                } else {
                    2 * n.unsigned_abs() - 1
                }
            }
            (Family::IntegerLattice2d, Lattice(a, b)) => a.unsigned_abs() + b.unsigned_abs(),
            (Family::Free, Word(w)) => w.len() as u64,
            _ => panic!("{x} is not an element of {}", self.name()),
        }
    }

    /// Elements that any generating set must reach.
    fn generation_targets(&self) -> Vec<GroupElement> {
        use GroupElement::*;
        match self {
            Family::Integers => vec![Int(1)],
            Family::IntegersTimesCyclic(m) => vec![IntMod(1, 0), IntMod(0, 1 % m)],
            Family::InfiniteDihedral => vec![Dihedral(1, false), Dihedral(0, true)],
            Family::IntegerLattice2d => vec![Lattice(1, 0), Lattice(0, 1)],
            Family::Free => vec![Word(smallvec![2]), Word(smallvec![3])],
        }
    }
}

/// A family together with a generating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub family: Family,
    pub generators: Vec<GroupElement>,
}

impl GroupSpec {
    pub fn standard(family: Family) -> Self {
        GroupSpec {
            family,
            generators: family.standard_generators(),
        }
    }
}

/// Radius within which generation is checked.
const GENERATION_RADIUS: u64 = 64;

/// The Cayley graph of a [`GroupSpec`], rooted at the identity.
#[derive(Debug, Clone)]
pub struct CayleyGraph {
    family: Family,
    generators: Vec<GroupElement>,
    standard: bool,
}

impl CayleyGraph {
    pub fn standard(family: Family) -> Self {
        Self::new(&GroupSpec::standard(family)).expect("standard generators generate")
    }

    /// Builds the graph; the generator list is closed under inversion and
    /// deduplicated.
    pub fn new(spec: &GroupSpec) -> Result<Self> {
        let family = spec.family;
        if let Family::IntegersTimesCyclic(m) = family {
            if m < 2 {
                return Err(Error::InvalidParameter(format!(
                    "cyclic factor must have order at least 2, got {m}"
                )));
            }
        }
        let identity = family.identity();
        let mut generators = Vec::new();
        for s in &spec.generators {
            if !family.contains(s) {
                return Err(Error::MalformedSpec {
                    location: "generators".into(),
                    message: format!("{s} is not a normal form of {}", family.name()),
                });
            }
            if *s == identity {
                return Err(Error::MalformedSpec {
                    location: "generators".into(),
                    message: "the identity is not a generator".into(),
                });
            }
            if family == Family::Free && !matches!(s, GroupElement::Word(w) if w.len() == 1) {
                return Err(Error::MalformedSpec {
                    location: "generators".into(),
                    message: "free-group generators must be single letters".into(),
                });
            }
            generators.push(s.clone());
            generators.push(family.inv(s));
        }
        generators.sort();
        generators.dedup();
        let standard = generators == family.standard_generators();
        let graph = CayleyGraph {
            family,
            generators,
            standard,
        };
        graph.check_generation()?;
        Ok(graph)
    }

    fn check_generation(&self) -> Result<()> {
        if self.standard {
            return Ok(());
        }
        let limits = Limits::with_cap(200_000);
        let mut from_e = Distances::new(self, self.family.identity(), &limits);
        for target in self.family.generation_targets() {
            match from_e.get(&target) {
                Ok(d) if d <= GENERATION_RADIUS => {}
                _ => return Err(Error::GeneratorsDoNotGenerate(target.to_string())),
            }
        }
        Ok(())
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.family.mul(a, b)
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        self.family.inv(a)
    }

    pub fn identity(&self) -> GroupElement {
        self.family.identity()
    }
}

impl RootedGraph for CayleyGraph {
    type Vertex = GroupElement;

    fn basepoint(&self) -> GroupElement {
        self.family.identity()
    }

    fn neighbors(&self, v: &GroupElement) -> Vec<GroupElement> {
        let mut out: Vec<GroupElement> = self.generators.iter().map(|s| self.family.mul(v, s)).collect();
        out.sort();
        out.dedup();
        out
    }

    fn degree_bound(&self) -> Option<usize> {
        Some(self.generators.len())
    }

    fn closed_form_distance(&self, x: &GroupElement, y: &GroupElement) -> Option<u64> {
        if !self.standard {
            return None;
        }
        if let (GroupElement::Word(u), GroupElement::Word(v)) = (x, y) {
            // Reduced words in a tree: strip the common prefix.
            let common = u.iter().zip(v).take_while(|(a, b)| a == b).count();
            return Some((u.len() + v.len() - 2 * common) as u64);
        }
        let diff = self.family.mul(&self.family.inv(x), y);
        Some(self.family.standard_length(&diff))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::layer_decomposition;
    use GroupElement::*;

    /// Same group and generators but without the closed-form metric.
    struct Bfs<'a>(&'a CayleyGraph);

    impl RootedGraph for Bfs<'_> {
        type Vertex = GroupElement;
        fn basepoint(&self) -> GroupElement {
            self.0.basepoint()
        }
        fn neighbors(&self, v: &GroupElement) -> Vec<GroupElement> {
            self.0.neighbors(v)
        }
    }

    fn families() -> Vec<Family> {
        vec![
            Family::Integers,
            Family::IntegersTimesCyclic(2),
            Family::IntegersTimesCyclic(3),
            Family::InfiniteDihedral,
            Family::IntegerLattice2d,
            Family::Free,
        ]
    }

    #[test]
    fn closed_form_lengths_match_bfs() {
        let limits = Limits::default();
        for family in families() {
            let g = CayleyGraph::standard(family);
            let layers = layer_decomposition(&Bfs(&g), 5, &limits).unwrap();
            let ball = layers.ball(2);
            for (r, sphere) in layers.layers.iter().enumerate() {
                for x in sphere {
                    assert_eq!(
                        g.closed_form_distance(&g.identity(), x),
                        Some(r as u64),
                        "{family:?} {x}"
                    );
                }
            }
            for x in &ball {
                for y in &ball {
                    let bfs = crate::graph::distance(&Bfs(&g), x, y, &limits).unwrap();
                    assert_eq!(g.closed_form_distance(x, y), Some(bfs));
                }
            }
        }
    }

    #[test]
    fn sphere_sizes() {
        let l = Limits::default();
        let sizes = |f: Family, r| {
            layer_decomposition(&CayleyGraph::standard(f), r, &l)
                .unwrap()
                .sphere_sizes()
        };
        assert_eq!(sizes(Family::Integers, 5), vec![1, 2, 2, 2, 2, 2]);
        assert_eq!(sizes(Family::IntegerLattice2d, 3), vec![1, 4, 8, 12]);
        assert_eq!(sizes(Family::Free, 3), vec![1, 4, 12, 36]);
        assert_eq!(sizes(Family::InfiniteDihedral, 4), vec![1, 2, 2, 2, 2]);
        assert_eq!(sizes(Family::IntegersTimesCyclic(2), 4), vec![1, 3, 4, 4, 4]);
    }

    #[test]
    fn integer_neighbors() {
        let g = CayleyGraph::standard(Family::Integers);
        assert_eq!(g.neighbors(&Int(0)), vec![Int(-1), Int(1)]);
    }

    #[test]
    fn group_axioms_spot_check() {
        for family in families() {
            let g = CayleyGraph::standard(family);
            let ball = layer_decomposition(&g, 2, &Limits::default()).unwrap().ball(2);
            for a in &ball {
                assert_eq!(g.mul(a, &g.inv(a)), g.identity());
                assert_eq!(g.mul(&g.identity(), a), *a);
                for b in &ball {
                    for c in ball.iter().take(5) {
                        assert_eq!(g.mul(&g.mul(a, b), c), g.mul(a, &g.mul(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn generators_are_symmetrized() {
        let spec = GroupSpec {
            family: Family::IntegersTimesCyclic(2),
            generators: vec![IntMod(1, 0), IntMod(0, 1)],
        };
        let g = CayleyGraph::new(&spec).unwrap();
        assert_eq!(g.generators(), &[IntMod(-1, 0), IntMod(0, 1), IntMod(1, 0)]);
        assert!(g.closed_form_distance(&g.identity(), &IntMod(3, 1)).is_some());
    }

    #[test]
    fn nonstandard_generators() {
        let spec = GroupSpec {
            family: Family::Integers,
            generators: vec![Int(2), Int(3)],
        };
        let g = CayleyGraph::new(&spec).unwrap();
        assert_eq!(g.closed_form_distance(&Int(0), &Int(1)), None);
        assert_eq!(
            crate::graph::distance(&g, &Int(0), &Int(1), &Limits::default()).unwrap(),
            2
        );

        let bad = GroupSpec {
            family: Family::Integers,
            generators: vec![Int(2)],
        };
        assert!(matches!(CayleyGraph::new(&bad), Err(Error::GeneratorsDoNotGenerate(_))));
        let bad = GroupSpec {
            family: Family::IntegerLattice2d,
            generators: vec![Lattice(1, 0), Lattice(1, 1)],
        };
        assert!(CayleyGraph::new(&bad).is_ok());
        let bad = GroupSpec {
            family: Family::IntegerLattice2d,
            generators: vec![Lattice(1, 0), Lattice(0, 2)],
        };
        assert!(CayleyGraph::new(&bad).is_err());
    }

    #[test]
    fn tokens() {
        assert_eq!(serde_json::to_string(&Int(-3)).unwrap(), "-3");
        assert_eq!(serde_json::to_string(&Dihedral(2, true)).unwrap(), "[2,1]");
        assert_eq!(serde_json::to_string(&Word(smallvec![2, 0])).unwrap(), "\"aB\"");
        assert_eq!(parse_word("aAbB"), Some(smallvec![]));
        assert_eq!(parse_word("abA"), Some(smallvec![2, 3, 1]));
    }
}
