use std::collections::HashMap;
use std::fmt;

use super::iso::OracleError;
use super::Poset;
use crate::board::Partition;
use crate::placement::{self, dominated, enumerate_placements, max_placement, RookPlacement};

/// The rook poset of a board, keeping the placement behind every element.
#[derive(Debug, Clone)]
pub struct BoardPoset {
    board: Partition,
    placements: Vec<RookPlacement>,
    index: HashMap<RookPlacement, usize>,
    poset: Poset,
}

pub fn build_poset(board: &Partition) -> BoardPoset {
    let placements = enumerate_placements(board);
    let index: HashMap<RookPlacement, usize> =
        placements.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let mut covers = Vec::new();
    for (i, x) in placements.iter().enumerate() {
        for y in placement::covers_down(x) {
            covers.push((index[&y], i));
        }
    }
    let labels = placements.iter().map(ToString::to_string).collect();
    let poset = Poset::from_covers(labels, &covers).expect("rook posets are bounded and graded");
    BoardPoset { board: board.clone(), placements, index, poset }
}

/// [`build_poset`] refusing boards with more than `max_elements` placements.
pub fn build_poset_bounded(board: &Partition, max_elements: usize) -> Result<BoardPoset, OracleError> {
    let size = board.placement_count();
    if size > max_elements as u64 {
        return Err(OracleError::TooLarge { size, limit: max_elements });
    }
    Ok(build_poset(board))
}

impl BoardPoset {
    pub fn board(&self) -> &Partition {
        &self.board
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn into_poset(self) -> Poset {
        self.poset
    }

    pub fn placements(&self) -> &[RookPlacement] {
        &self.placements
    }

    pub fn placement(&self, x: usize) -> &RookPlacement {
        &self.placements[x]
    }

    pub fn index_of(&self, x: &RookPlacement) -> Option<usize> {
        self.index.get(x).copied()
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    /// Coatoms labelled by the row whose move produces them from the
    /// maximum, sorted by row.
    pub fn coatom_rows(&self) -> Vec<(usize, usize)> {
        let top = max_placement(&self.board);
        let mut out: Vec<(usize, usize)> = placement::moves(&top)
            .into_iter()
            .map(|m| (m.row, self.index[&m.result]))
            .collect();
        out.sort_unstable();
        out
    }

    /// The coatom produced by the move on `row`, if that row has one.
    pub fn coatom_of_row(&self, row: usize) -> Option<usize> {
        self.coatom_rows().into_iter().find(|&(r, _)| r == row).map(|(_, c)| c)
    }

    /// The poset with placement labels replaced by bare indices, as seen by
    /// code that must not look at rook positions.
    pub fn to_abstract(&self) -> Poset {
        let labels = (0..self.poset.len()).map(|i| format!("v{i}")).collect();
        Poset::from_covers(labels, &self.poset.covers()).expect("same structure")
    }
}

/// Decides `x <= c` for a coatom `c` produced by the move on `row`, looking
/// only at the first `row` rooks.
pub fn is_below_coatom(x: &RookPlacement, coatom: &RookPlacement, row: usize) -> bool {
    dominated(&x.columns()[..row], &coatom.columns()[..row])
}

/// Rank-size vector, read as the coefficients of a polynomial in `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PoincarePolynomial {
    coefficients: Vec<u64>,
}

impl PoincarePolynomial {
    pub fn new(coefficients: Vec<u64>) -> Self {
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    pub fn total(&self) -> u64 {
        self.coefficients.iter().sum()
    }

    /// The q-integer `1 + q + ... + q^(m-1)`.
    pub fn q_integer(m: usize) -> Self {
        Self { coefficients: vec![1; m.max(1)] }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![0u64; self.coefficients.len() + other.coefficients.len() - 1];
        for (i, &a) in self.coefficients.iter().enumerate() {
            for (j, &b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coefficients: out }
    }

    /// `∏ [a_i + 1]_q` over a sequence of GJW values.
    pub fn from_gjw_values(values: impl IntoIterator<Item = u32>) -> Self {
        values
            .into_iter()
            .fold(Self::q_integer(1), |acc, a| acc.mul(&Self::q_integer(a as usize + 1)))
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coefficients.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("q")?,
                (1, c) => write!(f, "{c}q")?,
                (k, 1) => write!(f, "q^{k}")?,
                (k, c) => write!(f, "{c}q^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

pub fn poincare_polynomial(poset: &Poset) -> PoincarePolynomial {
    PoincarePolynomial::new(poset.rank_sizes().into_iter().map(|c| c as u64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::placement::{bruhat_leq, rank};

    fn part(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn small_boards() {
        let p = build_poset(&part(&[2, 2]));
        assert_eq!(p.len(), 2);
        assert_eq!(p.poset().cover_count(), 1);
        let p = build_poset(&part(&[1, 2, 3]));
        assert_eq!(p.len(), 1);
        let p = build_poset(&part(&[2, 4]));
        assert_eq!(p.len(), 6);
        assert_eq!(p.poset().rank_sizes(), vec![1, 2, 2, 1]);
        assert_eq!(p.poset().cover_count(), 7);
    }

    #[test]
    fn ranks_agree_with_inversions() {
        let p = build_poset(&part(&[3, 3, 5, 6, 6]));
        for (i, x) in p.placements().iter().enumerate() {
            assert_eq!(p.poset().rank(i), rank(x));
        }
        assert_eq!(p.poset().height(), 8);
    }

    #[test]
    fn poincare_examples() {
        let two_four = poincare_polynomial(build_poset(&part(&[2, 4])).poset());
        assert_eq!(two_four.coefficients(), &[1, 2, 2, 1]);
        assert_eq!(two_four.to_string(), "1 + 2q + 2q^2 + q^3");
        assert_eq!(two_four, PoincarePolynomial::q_integer(2).mul(&PoincarePolynomial::q_integer(3)));
        assert_eq!(poincare_polynomial(build_poset(&part(&[1, 2, 3])).poset()).coefficients(), &[1]);
        let big = poincare_polynomial(build_poset(&part(&[3, 3, 5, 6, 6])).poset());
        assert_eq!(big.total(), 108);
        assert_eq!(big.degree(), 8);
        assert_eq!(big, PoincarePolynomial::from_gjw_values([2, 1, 2, 2, 1]));
    }

    #[test]
    fn coatoms_by_row() {
        let p = build_poset(&part(&[3, 3, 5, 6, 6]));
        let rows: Vec<usize> = p.coatom_rows().iter().map(|&(r, _)| r).collect();
        assert_eq!(rows, vec![1, 2, 3, 4, 5]);
        assert_eq!(build_poset(&part(&[2, 2])).coatom_rows().len(), 1);
        assert!(build_poset(&part(&[1, 2, 3])).coatom_rows().is_empty());
    }

    #[test]
    fn coatom_shortcut_agrees_with_dominance() {
        let p = build_poset(&part(&[3, 3, 5, 6, 6]));
        let top = max_placement(p.board());
        for (row, c) in p.coatom_rows() {
            let coatom = p.placement(c);
            assert!(is_below_coatom(coatom, coatom, row));
            assert!(!is_below_coatom(&top, coatom, row));
            for x in p.placements() {
                assert_eq!(is_below_coatom(x, coatom, row), bruhat_leq(x, coatom).unwrap());
            }
        }
    }

    #[test]
    fn bounded_build_refuses_large_boards() {
        assert!(build_poset_bounded(&part(&[3, 3, 5, 6, 6]), 100).is_err());
        assert!(build_poset_bounded(&part(&[3, 3, 5, 6, 6]), 108).is_ok());
    }
}
