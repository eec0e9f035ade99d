//! Bounded graded posets stored as Hasse diagrams, together with the rook
//! poset construction, coatom structure and an isomorphism oracle.

mod board;
mod io;
mod iso;
mod structure;

pub use board::{build_poset, build_poset_bounded, is_below_coatom, poincare_polynomial, BoardPoset, PoincarePolynomial};
pub use io::{JsonPoset, JsonError};
pub use iso::{are_isomorphic, IsoOracle, OracleError, DEFAULT_MAX_ELEMENTS};
pub use structure::{CoatomView, EntanglementGraph};

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("poset has no elements")]
    Empty,
    #[error("cover refers to element {0}, which does not exist")]
    UnknownElement(usize),
    #[error("element {0} covers itself")]
    SelfCover(usize),
    #[error("cover {0} -> {1} is listed twice")]
    DuplicateCover(usize, usize),
    #[error("cover relation has a cycle")]
    Cycle,
    #[error("poset has {minima} minimal and {maxima} maximal elements; expected one of each")]
    NotBounded { minima: usize, maxima: usize },
    #[error("element {0} is reached by chains of different lengths")]
    NotGraded(usize),
    #[error("declared rank of element {element} is {declared}, computed {computed}")]
    RankMismatch { element: usize, declared: u32, computed: u32 },
}

/// A finite poset with a unique minimum and maximum where every cover
/// raises the rank by one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    rank: Vec<u32>,
    bottom: usize,
    top: usize,
}

impl Poset {
    /// Builds a poset from its Hasse diagram; `covers` holds
    /// `(lower, upper)` pairs of element indices.
    pub fn from_covers(labels: Vec<String>, covers: &[(usize, usize)]) -> Result<Self, PosetError> {
        let n = labels.len();
        if n == 0 {
            return Err(PosetError::Empty);
        }
        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        for &(a, b) in covers {
            if a >= n {
                return Err(PosetError::UnknownElement(a));
            }
            if b >= n {
                return Err(PosetError::UnknownElement(b));
            }
            if a == b {
                return Err(PosetError::SelfCover(a));
            }
            upper[a].push(b);
            lower[b].push(a);
        }
        for (b, list) in lower.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(PosetError::DuplicateCover(w[0], b));
            }
        }
        for list in &mut upper {
            list.sort_unstable();
        }

        let minima: Vec<usize> = (0..n).filter(|&x| lower[x].is_empty()).collect();
        let maxima: Vec<usize> = (0..n).filter(|&x| upper[x].is_empty()).collect();
        if minima.is_empty() || maxima.is_empty() {
            return Err(PosetError::Cycle);
        }
        if minima.len() != 1 || maxima.len() != 1 {
            return Err(PosetError::NotBounded { minima: minima.len(), maxima: maxima.len() });
        }
        let bottom = minima[0];
        let top = maxima[0];

        // Kahn's algorithm from the bottom assigns ranks and detects cycles.
        let mut rank = vec![u32::MAX; n];
        let mut pending: Vec<usize> = lower.iter().map(Vec::len).collect();
        let mut queue = VecDeque::from([bottom]);
        rank[bottom] = 0;
        let mut seen = 0;
        while let Some(x) = queue.pop_front() {
            seen += 1;
            for &y in &upper[x] {
                if rank[y] == u32::MAX {
                    rank[y] = rank[x] + 1;
                } else if rank[y] != rank[x] + 1 {
                    return Err(PosetError::NotGraded(y));
                }
                pending[y] -= 1;
                if pending[y] == 0 {
                    queue.push_back(y);
                }
            }
        }
        if seen != n {
            return Err(PosetError::Cycle);
        }
        Ok(Self { labels, lower, upper, rank, bottom, top })
    }

    /// Like [`Poset::from_covers`], additionally checking declared ranks.
    /// Declared ranks are compared after shifting the minimum to rank 0.
    pub fn from_covers_with_ranks(
        labels: Vec<String>,
        covers: &[(usize, usize)],
        ranks: &[u32],
    ) -> Result<Self, PosetError> {
        let poset = Self::from_covers(labels, covers)?;
        let offset = ranks[poset.bottom];
        for (element, (&declared, &computed)) in ranks.iter().zip(&poset.rank).enumerate() {
            if declared < offset || declared - offset != computed {
                return Err(PosetError::RankMismatch { element, declared, computed });
            }
        }
        Ok(poset)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn rank(&self, x: usize) -> u32 {
        self.rank[x]
    }

    pub fn ranks(&self) -> &[u32] {
        &self.rank
    }

    /// Rank of the maximum.
    pub fn height(&self) -> u32 {
        self.rank[self.top]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Elements covered by `x`.
    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    /// Elements covering `x`.
    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn cover_count(&self) -> usize {
        self.lower.iter().map(Vec::len).sum()
    }

    /// All `(lower, upper)` cover pairs, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .lower
            .iter()
            .enumerate()
            .flat_map(|(b, list)| list.iter().map(move |&a| (a, b)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Number of elements of each rank.
    pub fn rank_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.height() as usize + 1];
        for &r in &self.rank {
            sizes[r as usize] += 1;
        }
        sizes
    }

    /// Element indices sorted by rank.
    pub fn by_rank(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| self.rank[x]);
        order
    }

    /// `down[x]` is the set of elements `<= x`.
    pub fn down_sets(&self) -> Vec<FixedBitSet> {
        let n = self.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for x in self.by_rank() {
            let mut set = FixedBitSet::with_capacity(n);
            set.insert(x);
            for &y in &self.lower[x] {
                set.union_with(&down[y]);
            }
            down[x] = set;
        }
        down
    }

    /// The subposet on `members`, which must be convex so that its Hasse
    /// diagram is the restriction of this one. Returns the subposet and the
    /// original index of each of its elements.
    pub fn induced(&self, members: &[usize]) -> Result<(Poset, Vec<usize>), PosetError> {
        let mut index = vec![usize::MAX; self.len()];
        let mut kept = members.to_vec();
        kept.sort_unstable();
        kept.dedup();
        for (i, &x) in kept.iter().enumerate() {
            index[x] = i;
        }
        let mut covers = Vec::new();
        for (i, &x) in kept.iter().enumerate() {
            for &y in &self.lower[x] {
                if index[y] != usize::MAX {
                    covers.push((index[y], i));
                }
            }
        }
        let labels = kept.iter().map(|&x| self.labels[x].clone()).collect();
        Ok((Poset::from_covers(labels, &covers)?, kept))
    }

    /// Direct product with componentwise order.
    pub fn product(&self, other: &Poset) -> Poset {
        let m = other.len();
        let id = |a: usize, b: usize| a * m + b;
        let mut labels = Vec::with_capacity(self.len() * m);
        let mut covers = Vec::new();
        for a in 0..self.len() {
            for b in 0..m {
                labels.push(format!("({},{})", self.labels[a], other.labels[b]));
                for &a2 in &self.upper[a] {
                    covers.push((id(a, b), id(a2, b)));
                }
                for &b2 in &other.upper[b] {
                    covers.push((id(a, b), id(a, b2)));
                }
            }
        }
        Poset::from_covers(labels, &covers).expect("products of bounded graded posets are bounded and graded")
    }

    /// Chain with `len` elements.
    pub fn chain(len: usize) -> Poset {
        let labels = (0..len).map(|i| i.to_string()).collect();
        let covers: Vec<_> = (1..len).map(|i| (i - 1, i)).collect();
        Poset::from_covers(labels, &covers).expect("chains are bounded and graded")
    }

    /// Graphviz rendering: one node per element annotated with its rank,
    /// one edge per cover drawn from lower to upper.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph poset {\n  rankdir=BT;\n");
        for x in 0..self.len() {
            out.push_str(&format!(
                "  n{x} [label=\"{}\\nrank {}\", rank={}];\n",
                escape_dot(&self.labels[x]),
                self.rank[x],
                self.rank[x]
            ));
        }
        for (a, b) in self.covers() {
            out.push_str(&format!("  n{a} -> n{b};\n"));
        }
        out.push_str("}\n");
        out
    }
}

pub(crate) fn escape_dot(text: &str) -> String {
    text.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("e{i}")).collect()
    }

    #[test]
    fn diamond_is_graded() {
        let p = Poset::from_covers(labels(4), &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(p.rank_sizes(), vec![1, 2, 1]);
        assert_eq!(p.bottom(), 0);
        assert_eq!(p.top(), 3);
        assert_eq!(p.cover_count(), 4);
        let down = p.down_sets();
        assert!(down[3].contains(0) && down[3].contains(1) && !down[1].contains(2));
    }

    #[test]
    fn structural_errors() {
        assert_eq!(Poset::from_covers(vec![], &[]), Err(PosetError::Empty));
        assert_eq!(
            Poset::from_covers(labels(3), &[(1, 0), (2, 0)]),
            Err(PosetError::NotBounded { minima: 2, maxima: 1 })
        );
        assert_eq!(
            Poset::from_covers(labels(3), &[(0, 1), (1, 2), (0, 2)]),
            Err(PosetError::NotGraded(2))
        );
        assert_eq!(Poset::from_covers(labels(2), &[(0, 5)]), Err(PosetError::UnknownElement(5)));
        assert_eq!(Poset::from_covers(labels(2), &[(0, 0)]), Err(PosetError::SelfCover(0)));
        assert_eq!(
            Poset::from_covers(labels(2), &[(0, 1), (0, 1)]),
            Err(PosetError::DuplicateCover(0, 1))
        );
        assert!(Poset::from_covers(labels(4), &[(0, 1), (1, 2), (2, 1), (2, 3)]).is_err());
    }

    #[test]
    fn declared_ranks_are_checked() {
        let covers = [(0, 1), (1, 2)];
        assert!(Poset::from_covers_with_ranks(labels(3), &covers, &[0, 1, 2]).is_ok());
        assert!(Poset::from_covers_with_ranks(labels(3), &covers, &[5, 6, 7]).is_ok());
        assert_eq!(
            Poset::from_covers_with_ranks(labels(3), &covers, &[0, 2, 2]),
            Err(PosetError::RankMismatch { element: 1, declared: 2, computed: 1 })
        );
    }

    #[test]
    fn product_of_chains() {
        let p = Poset::chain(2).product(&Poset::chain(3));
        assert_eq!(p.len(), 6);
        assert_eq!(p.rank_sizes(), vec![1, 2, 2, 1]);
        assert_eq!(p.cover_count(), 7);
    }

    #[test]
    fn induced_interval() {
        let p = Poset::chain(2).product(&Poset::chain(2)).product(&Poset::chain(2));
        let down = p.down_sets();
        let top = p.top();
        let coatom = p.lower_covers(top)[0];
        let members: Vec<usize> = down[coatom].ones().collect();
        let (sub, map) = p.induced(&members).unwrap();
        assert_eq!(sub.len(), 4);
        assert_eq!(sub.rank_sizes(), vec![1, 2, 1]);
        assert_eq!(map.len(), 4);
    }
}
