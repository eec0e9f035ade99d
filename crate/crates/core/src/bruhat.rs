//! Permutations in one-line notation, 312 avoidance, and lower intervals
//! of the Bruhat order.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::board::Partition;
use crate::placement::{complete_to_permutation, count_inversions, dominated, max_placement, parse_bracketed, write_bracketed};
use crate::poset::{OracleError, Poset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermutationError {
    #[error("{0:?} is not a permutation of 1..=n")]
    NotAPermutation(Vec<u32>),
    #[error("permutation contains the pattern 312")]
    Contains312,
    #[error("cannot parse permutation {0:?}")]
    Parse(String),
    #[error(transparent)]
    TooLarge(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(images: Vec<u32>) -> Result<Self, PermutationError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v as usize > n || std::mem::replace(&mut seen[v as usize], true) {
                return Err(PermutationError::NotAPermutation(images));
            }
        }
        Ok(Self(images))
    }

    pub fn identity(n: usize) -> Self {
        Self((1..=n as u32).collect())
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inversions(&self) -> usize {
        count_inversions(&self.0)
    }

    /// Bruhat order via sorted-prefix dominance.
    pub fn bruhat_leq(&self, other: &Permutation) -> bool {
        self.len() == other.len() && dominated(&self.0, &other.0)
    }

    /// Elements directly below in Bruhat order: `w` with the values at
    /// positions `i < j` exchanged, where `w(i) > w(j)` and no position in
    /// between holds a value strictly between them.
    pub fn lower_covers(&self) -> Vec<Permutation> {
        let w = &self.0;
        let mut out = Vec::new();
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] && !w[i + 1..j].iter().any(|&v| v > w[j] && v < w[i]) {
                    let mut v = w.clone();
                    v.swap(i, j);
                    out.push(Permutation(v));
                }
            }
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bracketed(f, &self.0)
    }
}

impl FromStr for Permutation {
    type Err = PermutationError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let images = parse_bracketed(text).ok_or_else(|| PermutationError::Parse(text.to_string()))?;
        Permutation::new(images)
    }
}

/// The completed permutation of the maximal placement.
pub fn top_permutation(board: &Partition) -> Permutation {
    Permutation(complete_to_permutation(&max_placement(board), board).images().to_vec())
}

/// No `i < j < k` with `w_j < w_k < w_i`.
pub fn avoids_312(w: &Permutation) -> bool {
    let w = &w.0;
    let mut prefix_max = 0;
    for j in 0..w.len() {
        // The best candidate for the "3" is the largest earlier value.
        if prefix_max > w[j] && w[j + 1..].iter().any(|&v| v > w[j] && v < prefix_max) {
            return false;
        }
        prefix_max = prefix_max.max(w[j]);
    }
    true
}

/// The board whose top permutation is `w`: row `i` has
/// `max(i, w_1, ..., w_i)` boxes.
pub fn board_from_312(w: &Permutation) -> Result<Partition, PermutationError> {
    if !avoids_312(w) {
        return Err(PermutationError::Contains312);
    }
    let mut prefix_max = 0;
    let parts = w
        .0
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            prefix_max = prefix_max.max(v);
            prefix_max.max(i as u32 + 1)
        })
        .collect();
    Ok(Partition::new(parts).expect("prefix maxima form a staircase-containing board"))
}

/// All permutations below `w`, discovered by descending through covers;
/// each discovered element is checked against `w` by dominance.
pub fn lower_bruhat_interval(w: &Permutation, max_elements: usize) -> Result<Poset, PermutationError> {
    let mut index: HashMap<Permutation, usize> = HashMap::from([(w.clone(), 0)]);
    let mut elements = vec![w.clone()];
    let mut covers = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for v in elements[i].lower_covers() {
            debug_assert!(v.bruhat_leq(w));
            let j = match index.get(&v) {
                Some(&j) => j,
                None => {
                    if elements.len() >= max_elements {
                        return Err(OracleError::TooLarge { size: elements.len() as u64 + 1, limit: max_elements }.into());
                    }
                    let j = elements.len();
                    index.insert(v.clone(), j);
                    elements.push(v);
                    queue.push_back(j);
                    j
                }
            };
            covers.push((j, i));
        }
    }
    let labels = elements.iter().map(ToString::to_string).collect();
    Ok(Poset::from_covers(labels, &covers).expect("Bruhat intervals are bounded and graded"))
}
