//! Exhaustive families of small boards.

use std::collections::BTreeMap;

use crate::board::{GjwSequence, Partition};
use crate::poset::PoincarePolynomial;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    pub max_rows: usize,
    pub max_poset_size: u64,
}

/// Every staircase-containing board with between 1 and `max_rows` rows
/// whose rook poset has at most `max_poset_size` elements, ordered by row
/// count and then by GJW sequence.
pub fn boards(spec: CorpusSpec) -> Vec<Partition> {
    fn extend(prefix: &mut Vec<u32>, size: u64, spec: CorpusSpec, out: &mut Vec<Partition>) {
        if !prefix.is_empty() {
            out.push(GjwSequence::new(prefix.clone()).expect("generated within the rules").partition());
        }
        if prefix.len() == spec.max_rows {
            return;
        }
        let low = prefix.last().map_or(0, |&a| a.saturating_sub(1));
        let mut a = low;
        while size * (a as u64 + 1) <= spec.max_poset_size {
            prefix.push(a);
            extend(prefix, size * (a as u64 + 1), spec, out);
            prefix.pop();
            a += 1;
        }
    }
    let mut out = Vec::new();
    if spec.max_poset_size >= 1 {
        extend(&mut Vec::new(), 1, spec, &mut out);
    }
    out.sort_by_key(|p| (p.rows(), p.gjw().entries().to_vec()));
    out
}

/// Unordered index pairs `i < j` of boards with equal rank-size vectors.
pub fn equal_rank_pairs(boards: &[Partition]) -> Vec<(usize, usize)> {
    let mut groups: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
    for (i, b) in boards.iter().enumerate() {
        let poly = PoincarePolynomial::from_gjw_values(b.gjw().entries().iter().copied());
        groups.entry(poly.coefficients().to_vec()).or_default().push(i);
    }
    let mut out = Vec::new();
    for members in groups.values() {
        for (k, &i) in members.iter().enumerate() {
            for &j in &members[k + 1..] {
                out.push((i, j));
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(max_rows: usize, max_poset_size: u64) -> CorpusSpec {
        CorpusSpec { max_rows, max_poset_size }
    }

    #[test]
    fn one_row_boards() {
        let b = boards(spec(1, 4));
        let parts: Vec<Vec<u32>> = b.iter().map(|p| p.parts().to_vec()).collect();
        assert_eq!(parts, vec![vec![1], vec![2], vec![3], vec![4]]);
    }

    #[test]
    fn two_row_boards_by_hand() {
        // GJW pairs (a, b) with b >= a - 1 and (a+1)(b+1) <= 4.
        let b = boards(spec(2, 4));
        let two: Vec<Vec<u32>> = b.iter().filter(|p| p.rows() == 2).map(|p| p.gjw().entries().to_vec()).collect();
        assert_eq!(two, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn sizes_respect_the_bound() {
        for p in boards(spec(4, 30)) {
            assert!(p.placement_count() <= 30);
            assert!(p.rows() <= 4);
        }
    }

    #[test]
    fn pairs_share_rank_sizes_and_are_listed_once() {
        let b = boards(spec(3, 12));
        let pairs = equal_rank_pairs(&b);
        for &(i, j) in &pairs {
            assert!(i < j);
            let mut x = b[i].gjw().entries().to_vec();
            let mut y = b[j].gjw().entries().to_vec();
            x.retain(|&a| a > 0);
            y.retain(|&a| a > 0);
            x.sort_unstable();
            y.sort_unstable();
            assert_eq!(x, y);
        }
        let mut dedup = pairs.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), pairs.len());
        // (2,1) and (1,2) share rank sizes.
        let find = |g: &[u32]| b.iter().position(|p| p.gjw().entries() == g).unwrap();
        assert!(pairs.contains(&(find(&[1, 2]), find(&[2, 1]))));
    }
}
