//! Brute-force isomorphism test for graded posets: invariant rejection,
//! colour refinement on the Hasse diagram, then individualise-and-refine
//! backtracking.

use std::collections::HashMap;

use thiserror::Error;

use super::Poset;

pub const DEFAULT_MAX_ELEMENTS: usize = 5000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("poset with {size} elements exceeds the limit of {limit}")]
    TooLarge { size: u64, limit: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct IsoOracle {
    pub max_elements: usize,
}

impl Default for IsoOracle {
    fn default() -> Self {
        Self { max_elements: DEFAULT_MAX_ELEMENTS }
    }
}

pub fn are_isomorphic(p: &Poset, q: &Poset) -> Result<bool, OracleError> {
    IsoOracle::default().are_isomorphic(p, q)
}

impl IsoOracle {
    pub fn new(max_elements: usize) -> Self {
        Self { max_elements }
    }

    pub fn are_isomorphic(&self, p: &Poset, q: &Poset) -> Result<bool, OracleError> {
        Ok(self.find_isomorphism(p, q)?.is_some())
    }

    /// An order isomorphism `p -> q` as a vector of images, if one exists.
    pub fn find_isomorphism(&self, p: &Poset, q: &Poset) -> Result<Option<Vec<usize>>, OracleError> {
        for size in [p.len(), q.len()] {
            if size > self.max_elements {
                return Err(OracleError::TooLarge { size: size as u64, limit: self.max_elements });
            }
        }
        if p.len() != q.len() || p.cover_count() != q.cover_count() || p.rank_sizes() != q.rank_sizes() {
            return Ok(None);
        }
        if degree_profile(p) != degree_profile(q) {
            return Ok(None);
        }
        let joint = Joint::new(p, q);
        let mut ids: HashMap<(u32, usize, usize), u32> = HashMap::new();
        let colors: Vec<u32> = (0..joint.len())
            .map(|v| {
                let fresh = ids.len() as u32;
                *ids.entry((joint.rank[v], joint.up[v].len(), joint.down[v].len())).or_insert(fresh)
            })
            .collect();
        let Some(colors) = joint.refine(colors) else {
            return Ok(None);
        };
        Ok(joint.search(colors))
    }
}

/// Sorted (rank, up-degree, down-degree) triples.
fn degree_profile(p: &Poset) -> Vec<(u32, usize, usize)> {
    let mut out: Vec<_> = (0..p.len())
        .map(|x| (p.rank(x), p.upper_covers(x).len(), p.lower_covers(x).len()))
        .collect();
    out.sort_unstable();
    out
}

/// Disjoint union of the two Hasse diagrams so colours are shared.
struct Joint {
    n: usize,
    rank: Vec<u32>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
}

impl Joint {
    fn new(p: &Poset, q: &Poset) -> Self {
        let n = p.len();
        let mut rank = Vec::with_capacity(2 * n);
        let mut up = Vec::with_capacity(2 * n);
        let mut down = Vec::with_capacity(2 * n);
        for (poset, offset) in [(p, 0), (q, n)] {
            for x in 0..n {
                rank.push(poset.rank(x));
                up.push(poset.upper_covers(x).iter().map(|&y| y + offset).collect());
                down.push(poset.lower_covers(x).iter().map(|&y| y + offset).collect());
            }
        }
        Self { n, rank, up, down }
    }

    fn len(&self) -> usize {
        2 * self.n
    }

    /// Both halves carry the same multiset of colours.
    fn balanced(&self, colors: &[u32]) -> bool {
        let mut hist: HashMap<u32, i64> = HashMap::new();
        for (v, &c) in colors.iter().enumerate() {
            *hist.entry(c).or_default() += if v < self.n { 1 } else { -1 };
        }
        hist.values().all(|&d| d == 0)
    }

    /// Colour refinement to the coarsest stable colouring, or `None` as soon
    /// as the two halves disagree.
    fn refine(&self, mut colors: Vec<u32>) -> Option<Vec<u32>> {
        if !self.balanced(&colors) {
            return None;
        }
        let mut classes = count_classes(&colors);
        loop {
            let mut ids: HashMap<(u32, Vec<u32>, Vec<u32>), u32> = HashMap::new();
            let mut next = Vec::with_capacity(colors.len());
            for v in 0..self.len() {
                let mut up: Vec<u32> = self.up[v].iter().map(|&w| colors[w]).collect();
                let mut down: Vec<u32> = self.down[v].iter().map(|&w| colors[w]).collect();
                up.sort_unstable();
                down.sort_unstable();
                let fresh = ids.len() as u32;
                next.push(*ids.entry((colors[v], up, down)).or_insert(fresh));
            }
            if !self.balanced(&next) {
                return None;
            }
            let refined = ids.len();
            colors = next;
            if refined == classes {
                return Some(colors);
            }
            classes = refined;
        }
    }

    fn search(&self, colors: Vec<u32>) -> Option<Vec<usize>> {
        // Smallest non-singleton class, by its members on the p side.
        let mut members: HashMap<u32, (Vec<usize>, Vec<usize>)> = HashMap::new();
        for (v, &c) in colors.iter().enumerate() {
            let entry = members.entry(c).or_default();
            if v < self.n {
                entry.0.push(v);
            } else {
                entry.1.push(v - self.n);
            }
        }
        let target = members
            .values()
            .filter(|(ps, _)| ps.len() > 1)
            .min_by_key(|(ps, _)| (ps.len(), ps[0]));
        let Some((ps, qs)) = target else {
            let mut map = vec![0; self.n];
            for (ps, qs) in members.values() {
                map[ps[0]] = qs[0];
            }
            return self.is_isomorphism(&map).then_some(map);
        };
        let v = ps[0];
        let fresh = colors.iter().copied().max().unwrap_or(0) + 1;
        for &w in qs {
            let mut trial = colors.clone();
            trial[v] = fresh;
            trial[w + self.n] = fresh;
            if let Some(refined) = self.refine(trial) {
                if let Some(map) = self.search(refined) {
                    return Some(map);
                }
            }
        }
        None
    }

    fn is_isomorphism(&self, map: &[usize]) -> bool {
        let mut hit = vec![false; self.n];
        for &w in map {
            if std::mem::replace(&mut hit[w], true) {
                return false;
            }
        }
        (0..self.n).all(|x| {
            let mut image: Vec<usize> = self.up[x].iter().map(|&y| map[y] + self.n).collect();
            image.sort_unstable();
            image == self.up[map[x] + self.n]
        })
    }
}

fn count_classes(colors: &[u32]) -> usize {
    let mut seen: Vec<u32> = colors.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}
