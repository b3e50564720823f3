//! Boolean relations between two finite layers, stored as row bitmasks.

use serde::Serialize;

/// Maximum layer size; vertex sets are `u64` bitmasks.
pub const MAX_LAYER: usize = 64;

/// Vertex subsets up to this size are searched exhaustively for the
/// lexicographically least Hall violator.
const EXHAUSTIVE_VIOLATOR_LIMIT: usize = 20;

pub(crate) fn bits(set: u64) -> impl Iterator<Item = usize> {
    let mut s = set;
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let i = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(i)
        }
    })
}

pub(crate) fn mask_of(indices: &[usize]) -> u64 {
    indices.iter().fold(0, |m, &i| m | (1u64 << i))
}

pub(crate) fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A relation from a layer of `rows.len()` vertices to a layer of `cols` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    rows: Vec<u64>,
    cols: usize,
}

impl Relation {
    pub fn new(rows: Vec<u64>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r & !full(cols) == 0));
        Relation { rows, cols }
    }

    pub fn empty(rows: usize, cols: usize) -> Self {
        Relation {
            rows: vec![0; rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        Relation {
            rows: (0..n).map(|i| 1u64 << i).collect(),
            cols: n,
        }
    }

    pub fn from_pairs(rows: usize, cols: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Relation::empty(rows, cols);
        for (i, j) in pairs {
            r.rows[i] |= 1u64 << j;
        }
        r
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, &r)| bits(r).map(move |j| (i, j)))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Relation) -> Relation {
        debug_assert_eq!(self.cols, next.rows.len());
        Relation {
            rows: self.rows.iter().map(|&r| next.image(r)).collect(),
            cols: next.cols,
        }
    }

    pub fn image(&self, set: u64) -> u64 {
        bits(set).fold(0, |acc, i| acc | self.rows[i])
    }

    pub fn preimage(&self, set: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, &r)| r & set != 0)
            .fold(0, |acc, (i, _)| acc | 1u64 << i)
    }

    /// Sub-relation on the given row and column index lists, re-indexed.
    pub fn restrict(&self, rows: &[usize], cols: &[usize]) -> Relation {
        Relation {
            rows: rows
                .iter()
                .map(|&i| {
                    cols.iter()
                        .enumerate()
                        .filter(|(_, &j)| self.contains(i, j))
                        .fold(0, |acc, (jj, _)| acc | 1u64 << jj)
                })
                .collect(),
            cols: cols.len(),
        }
    }

    /// Maximum matching by augmenting paths; `result[i]` is the partner of row i.
    pub fn maximum_matching(&self) -> Vec<Option<usize>> {
        let mut col_owner: Vec<Option<usize>> = vec![None; self.cols];
        for i in 0..self.rows.len() {
            let mut visited = 0u64;
            self.augment(i, &mut visited, &mut col_owner);
        }
        let mut row_partner = vec![None; self.rows.len()];
        for (j, owner) in col_owner.iter().enumerate() {
            if let Some(i) = owner {
                row_partner[*i] = Some(j);
            }
        }
        row_partner
    }

    fn augment(&self, i: usize, visited: &mut u64, col_owner: &mut [Option<usize>]) -> bool {
        for j in bits(self.rows[i]) {
            if *visited >> j & 1 == 1 {
                continue;
            }
            *visited |= 1u64 << j;
            if col_owner[j].is_none_or(|owner| self.augment(owner, visited, col_owner)) {
                col_owner[j] = Some(i);
                return true;
            }
        }
        false
    }

    /// A perfect matching, or a Hall violator when none exists.
    ///
    /// The violator is the set of rows reachable by alternating paths from
    /// the unmatched rows of a maximum matching.
    pub fn perfect_matching(&self) -> MatchOutcome {
        let partner = self.maximum_matching();
        if self.rows.len() == self.cols && partner.iter().all(Option::is_some) {
            return MatchOutcome::Perfect(partner.into_iter().map(Option::unwrap).collect());
        }
        let mut col_owner = vec![None; self.cols];
        for (i, p) in partner.iter().enumerate() {
            if let Some(j) = p {
                col_owner[*j] = Some(i);
            }
        }
        let mut rows: u64 = partner
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_none())
            .fold(0, |acc, (i, _)| acc | 1u64 << i);
        let mut cols = 0u64;
        let mut frontier = rows;
        while frontier != 0 {
            let reached = self.image(frontier) & !cols;
            cols |= reached;
            frontier = bits(reached)
                .filter_map(|j| col_owner[j])
                .fold(0, |acc, i| acc | 1u64 << i)
                & !rows;
            rows |= frontier;
        }
        MatchOutcome::Violator(HallViolator {
            set: bits(rows).collect(),
            neighbourhood: bits(cols).collect(),
        })
    }

    pub fn has_perfect_matching(&self) -> bool {
        matches!(self.perfect_matching(), MatchOutcome::Perfect(_))
    }

    /// The lexicographically least row set U (as a sorted index list) with
    /// |N(U)| < |U|, if any.
    pub fn least_violator(&self) -> Option<u64> {
        let n = self.rows.len();
        if n > EXHAUSTIVE_VIOLATOR_LIMIT {
            return match self.perfect_matching() {
                MatchOutcome::Perfect(_) => None,
                MatchOutcome::Violator(v) => Some(mask_of(&v.set)),
            };
        }
        // Depth-first over sorted index lists visits subsets in lexicographic order.
        fn search(rel: &Relation, set: u64, image: u64, size: u32, from: usize) -> Option<u64> {
            for i in from..rel.rows.len() {
                let s = set | 1u64 << i;
                let img = image | rel.rows[i];
                if img.count_ones() < size + 1 {
                    return Some(s);
                }
                if let Some(found) = search(rel, s, img, size + 1, i + 1) {
                    return Some(found);
                }
            }
            None
        }
        search(self, 0, 0, 0, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HallViolator {
    pub set: Vec<usize>,
    pub neighbourhood: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchOutcome {
    /// `partner[i]` is the column matched to row i.
    Perfect(Vec<usize>),
    Violator(HallViolator),
}
