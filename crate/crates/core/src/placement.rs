//! Maximal rook placements, their Bruhat comparison and grading, the two
//! covering moves, and the explicit isomorphisms between rook posets of
//! related boards.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::board::{parse_list, BoardError, Partition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlacementError {
    #[error("placement has {got} rooks but the board has {rows} rows")]
    WrongLength { got: usize, rows: usize },
    #[error("rook in row {row} sits in column {column}, outside the board")]
    OffBoard { row: usize, column: u32 },
    #[error("two rooks share column {column}")]
    Attacking { column: u32 },
    #[error(transparent)]
    Board(#[from] BoardError),
    #[error("cannot parse placement {0:?}")]
    Parse(String),
}

/// Rook columns listed bottom-up: `columns()[i]` is the (1-based) column of
/// the rook in row `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RookPlacement {
    columns: Vec<u32>,
}

impl RookPlacement {
    pub fn on_board(columns: Vec<u32>, board: &Partition) -> Result<Self, PlacementError> {
        if columns.len() != board.rows() {
            return Err(PlacementError::WrongLength { got: columns.len(), rows: board.rows() });
        }
        let mut seen = vec![false; board.width() as usize + 1];
        for (i, &column) in columns.iter().enumerate() {
            if column == 0 || column > board.row_len(i + 1) {
                return Err(PlacementError::OffBoard { row: i + 1, column });
            }
            if std::mem::replace(&mut seen[column as usize], true) {
                return Err(PlacementError::Attacking { column });
            }
        }
        Ok(Self { columns })
    }

    #[cfg(test)]
    pub(crate) fn from_columns_unchecked(columns: Vec<u32>) -> Self {
        Self { columns }
    }

    pub fn columns(&self) -> &[u32] {
        &self.columns
    }

    pub fn rows(&self) -> usize {
        self.columns.len()
    }

    /// Column of the rook in row `row` (1-based).
    pub fn column(&self, row: usize) -> u32 {
        self.columns[row - 1]
    }
}

impl fmt::Display for RookPlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bracketed(f, &self.columns)
    }
}

impl FromStr for RookPlacement {
    type Err = PlacementError;

    /// Parses the bracketed form `[3,2,5,6,4]` without checking it against
    /// any board.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let columns = parse_bracketed(text).ok_or_else(|| PlacementError::Parse(text.to_string()))?;
        Ok(Self { columns })
    }
}

pub(crate) fn parse_bracketed(text: &str) -> Option<Vec<u32>> {
    let inner = text.trim().strip_prefix('[')?.strip_suffix(']')?;
    parse_list(inner).ok()
}

pub(crate) fn write_bracketed(f: &mut fmt::Formatter<'_>, values: &[u32]) -> fmt::Result {
    f.write_str("[")?;
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    f.write_str("]")
}

/// All maximal non-attacking placements, in lexicographic order of columns.
pub fn enumerate_placements(board: &Partition) -> Vec<RookPlacement> {
    fn extend(board: &Partition, used: &mut [bool], prefix: &mut Vec<u32>, out: &mut Vec<RookPlacement>) {
        let row = prefix.len() + 1;
        if row > board.rows() {
            out.push(RookPlacement { columns: prefix.clone() });
            return;
        }
        for column in 1..=board.row_len(row) {
            if used[column as usize] {
                continue;
            }
            used[column as usize] = true;
            prefix.push(column);
            extend(board, used, prefix, out);
            prefix.pop();
            used[column as usize] = false;
        }
    }

    let mut out = Vec::with_capacity(board.placement_count().min(1 << 20) as usize);
    let mut used = vec![false; board.width() as usize + 1];
    extend(board, &mut used, &mut Vec::with_capacity(board.rows()), &mut out);
    out
}

/// Each rook as far right as it will go, filling rows bottom-up.
pub fn max_placement(board: &Partition) -> RookPlacement {
    let mut used = vec![false; board.width() as usize + 1];
    let columns = (1..=board.rows())
        .map(|row| {
            let column = (1..=board.row_len(row))
                .rev()
                .find(|&c| !used[c as usize])
                .expect("staircase-containing boards always have a free column");
            used[column as usize] = true;
            column
        })
        .collect();
    RookPlacement { columns }
}

/// The diagonal placement.
pub fn min_placement(board: &Partition) -> RookPlacement {
    RookPlacement { columns: (1..=board.rows() as u32).collect() }
}

/// Sorted-prefix dominance: for every `j` the first `j` entries of `lower`,
/// sorted, are entrywise at most those of `upper`.
pub fn dominated(lower: &[u32], upper: &[u32]) -> bool {
    debug_assert_eq!(lower.len(), upper.len());
    let mut a: Vec<u32> = Vec::with_capacity(lower.len());
    let mut b: Vec<u32> = Vec::with_capacity(upper.len());
    for (&x, &y) in lower.iter().zip(upper) {
        let pos = a.partition_point(|&v| v < x);
        a.insert(pos, x);
        let pos = b.partition_point(|&v| v < y);
        b.insert(pos, y);
        if a.iter().zip(&b).any(|(u, v)| u > v) {
            return false;
        }
    }
    true
}

/// Bruhat comparison `x <= y` of two placements on the same board.
pub fn bruhat_leq(x: &RookPlacement, y: &RookPlacement) -> Result<bool, PlacementError> {
    if x.rows() != y.rows() {
        return Err(PlacementError::WrongLength { got: x.rows(), rows: y.rows() });
    }
    Ok(dominated(&x.columns, &y.columns))
}

/// The permutation of `1..=λ_n` obtained by sending each remaining position
/// to the smallest unused column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompletedPermutation {
    images: Vec<u32>,
}

impl CompletedPermutation {
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn inversions(&self) -> usize {
        count_inversions(&self.images)
    }
}

pub fn complete_to_permutation(x: &RookPlacement, board: &Partition) -> CompletedPermutation {
    let width = board.width() as usize;
    let mut used = vec![false; width + 1];
    for &c in &x.columns {
        used[c as usize] = true;
    }
    let mut images = x.columns.clone();
    images.extend((1..=width as u32).filter(|&c| !used[c as usize]));
    CompletedPermutation { images }
}

pub(crate) fn count_inversions(values: &[u32]) -> usize {
    let mut count = 0;
    for (i, &a) in values.iter().enumerate() {
        count += values[i + 1..].iter().filter(|&&b| b < a).count();
    }
    count
}

/// Inversions of the completed permutation. The appended values are
/// increasing, so only inversions among the rooks and between a rook and a
/// smaller unused column contribute.
pub fn rank(x: &RookPlacement) -> u32 {
    let cols = &x.columns;
    let mut total = 0usize;
    for (i, &c) in cols.iter().enumerate() {
        let smaller_used = cols.iter().filter(|&&d| d < c).count();
        let later_smaller = cols[i + 1..].iter().filter(|&&d| d < c).count();
        total += later_smaller + (c as usize - 1 - smaller_used);
    }
    total as u32
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    /// Exchanged columns with the rook in `partner` (a higher row).
    Switch { partner: usize },
    /// Slid left into an empty column.
    Push { to: u32 },
}

/// A covering move on the rook in `row`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub row: usize,
    pub kind: MoveKind,
    pub result: RookPlacement,
}

pub fn switch_moves(x: &RookPlacement) -> Vec<RookPlacement> {
    moves(x).into_iter().filter(|m| matches!(m.kind, MoveKind::Switch { .. })).map(|m| m.result).collect()
}

pub fn push_moves(x: &RookPlacement) -> Vec<RookPlacement> {
    moves(x).into_iter().filter(|m| matches!(m.kind, MoveKind::Push { .. })).map(|m| m.result).collect()
}

/// Every switch and push move, grouped by the lower row they act on.
pub fn moves(x: &RookPlacement) -> Vec<Move> {
    let cols = &x.columns;
    let n = cols.len();
    let width = cols.iter().copied().max().unwrap_or(0) as usize;
    // owner[c] = row (1-based) holding column c, 0 if empty.
    let mut owner = vec![0usize; width + 1];
    for (i, &c) in cols.iter().enumerate() {
        owner[c as usize] = i + 1;
    }

    let mut out = Vec::new();
    for i in 0..n {
        let high = cols[i];
        // Switch with a higher row whose rook is to the left, when the
        // rectangle between them holds no other rook.
        for k in i + 1..n {
            let low = cols[k];
            if low >= high {
                continue;
            }
            if cols[i + 1..k].iter().any(|&c| c > low && c < high) {
                continue;
            }
            let mut result = cols.clone();
            result.swap(i, k);
            out.push(Move {
                row: i + 1,
                kind: MoveKind::Switch { partner: k + 1 },
                result: RookPlacement { columns: result },
            });
        }
        // Push into the nearest empty column on the left, provided every
        // column in between is held by a lower row.
        if let Some(target) = (1..high).rev().find(|&c| owner[c as usize] == 0) {
            let clear = (target + 1..high).all(|c| {
                let r = owner[c as usize];
                r != 0 && r < i + 1
            });
            if clear {
                let mut result = cols.clone();
                result[i] = target;
                out.push(Move {
                    row: i + 1,
                    kind: MoveKind::Push { to: target },
                    result: RookPlacement { columns: result },
                });
            }
        }
    }
    out
}

/// The placements covered by `x`.
pub fn covers_down(x: &RookPlacement) -> Vec<RookPlacement> {
    moves(x).into_iter().map(|m| m.result).collect()
}

/// Image of `x` under the isomorphism between the rook posets of a board
/// with `λ_n = n + 1` and its conjugate.
pub fn conjugate_placement(x: &RookPlacement, board: &Partition) -> Result<RookPlacement, PlacementError> {
    if !board.is_conjugable() {
        return Err(BoardError::ConjugationUndefined.into());
    }
    let n = board.rows();
    let side = n as u32 + 1;
    let mut used = vec![false; side as usize + 1];
    for &c in &x.columns {
        used[c as usize] = true;
    }
    let missing = (1..=side).find(|&c| !used[c as usize]).expect("n rooks in n+1 columns");
    let mut extended = x.columns.clone();
    extended.push(missing);

    // Rook (r, c) goes to (n+2-c, n+2-r); the rook landing in the added top
    // row is the one in column 1.
    let mut columns = vec![0u32; n];
    for (r0, &c) in extended.iter().enumerate() {
        let r = r0 as u32 + 1;
        let new_row = side + 1 - c;
        if new_row as usize <= n {
            columns[new_row as usize - 1] = side + 1 - r;
        }
    }
    let conj = board.conjugate()?;
    RookPlacement::on_board(columns, &conj)
}

/// Image of `x` under the isomorphism that inserts an empty-GJW row directly
/// above `row`, a row whose GJW value is 1.
///
/// Rooks at or below `row` stay put. The new row takes the one column of
/// `1..=row+1` left free by them; rooks above shift one column right,
/// except the rook that held that free column, which moves to `row + 2`.
pub fn insert_zero_map(x: &RookPlacement, board: &Partition, row: usize) -> Result<RookPlacement, PlacementError> {
    let target = board.gjw().insert_zero_at(row)?.partition();
    let split = row as u32;
    let mut used = vec![false; split as usize + 2];
    for &c in &x.columns[..row] {
        used[c as usize] = true;
    }
    let missing = (1..=split + 1).find(|&c| !used[c as usize]).expect("row rooks fit in row+1 columns");

    let mut columns = Vec::with_capacity(x.rows() + 1);
    columns.extend_from_slice(&x.columns[..row]);
    columns.push(missing);
    columns.extend(x.columns[row..].iter().map(|&c| if c == missing { split + 2 } else { c + 1 }));
    RookPlacement::on_board(columns, &target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn pl(columns: &[u32]) -> RookPlacement {
        RookPlacement::from_columns_unchecked(columns.to_vec())
    }

    fn sorted(mut v: Vec<RookPlacement>) -> Vec<RookPlacement> {
        v.sort();
        v
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_placements(&part(&[1, 2, 3])), vec![pl(&[1, 2, 3])]);
        let two_four = enumerate_placements(&part(&[2, 4]));
        assert_eq!(two_four.len(), 6);
        assert_eq!(
            two_four,
            vec![pl(&[1, 2]), pl(&[1, 3]), pl(&[1, 4]), pl(&[2, 1]), pl(&[2, 3]), pl(&[2, 4])]
        );
        assert_eq!(enumerate_placements(&part(&[3, 3, 5, 6, 6])).len(), 108);
        assert_eq!(enumerate_placements(&part(&[])), vec![pl(&[])]);
    }

    #[test]
    fn extreme_placements() {
        assert_eq!(max_placement(&part(&[3, 3, 5, 6, 6])), pl(&[3, 2, 5, 6, 4]));
        assert_eq!(max_placement(&part(&[1, 2, 3])), pl(&[1, 2, 3]));
        assert_eq!(max_placement(&part(&[2, 4])), pl(&[2, 4]));
        assert_eq!(min_placement(&part(&[3, 3, 5, 6, 6])), pl(&[1, 2, 3, 4, 5]));
        assert_eq!(min_placement(&part(&[2, 2])), pl(&[1, 2]));
        assert_eq!(min_placement(&part(&[2, 4])), pl(&[1, 2]));
    }

    #[test]
    fn bruhat_examples() {
        assert!(bruhat_leq(&pl(&[2, 1, 5, 3, 4]), &pl(&[3, 1, 5, 2, 6])).unwrap());
        assert!(!bruhat_leq(&pl(&[3, 1, 5, 2, 6]), &pl(&[2, 1, 5, 3, 4])).unwrap());
        let x = pl(&[3, 2, 5, 6, 4]);
        assert!(bruhat_leq(&x, &x).unwrap());
        assert!(!bruhat_leq(&pl(&[1, 4]), &pl(&[2, 3])).unwrap());
        assert!(!bruhat_leq(&pl(&[2, 3]), &pl(&[1, 4])).unwrap());
        assert!(bruhat_leq(&pl(&[1]), &pl(&[1, 2])).is_err());
    }

    #[test]
    fn completion_and_rank() {
        let board = part(&[3, 3, 5, 6, 6]);
        let top = max_placement(&board);
        assert_eq!(complete_to_permutation(&top, &board).images(), &[3, 2, 5, 6, 4, 1]);
        assert_eq!(complete_to_permutation(&pl(&[1, 2]), &part(&[2, 2])).images(), &[1, 2]);
        assert_eq!(complete_to_permutation(&pl(&[2, 4]), &part(&[2, 4])).images(), &[2, 4, 1, 3]);
        assert_eq!(rank(&min_placement(&board)), 0);
        assert_eq!(rank(&top), 8);
        assert_eq!(rank(&pl(&[2, 4])), 3);
    }

    #[test]
    fn rank_shortcut_matches_completion() {
        let board = part(&[3, 3, 5, 6, 6]);
        for x in enumerate_placements(&board) {
            assert_eq!(rank(&x) as usize, complete_to_permutation(&x, &board).inversions(), "{x}");
        }
    }

    #[test]
    fn move_examples() {
        assert_eq!(switch_moves(&pl(&[2, 1])), vec![pl(&[1, 2])]);
        assert!(switch_moves(&pl(&[1, 2, 3])).is_empty());
        assert!(switch_moves(&pl(&[3, 2, 5, 6, 4])).contains(&pl(&[2, 3, 5, 6, 4])));

        assert_eq!(sorted(push_moves(&pl(&[2, 4]))), vec![pl(&[1, 4]), pl(&[2, 3])]);
        assert!(push_moves(&pl(&[1, 2])).is_empty());
        assert_eq!(push_moves(&pl(&[1, 4])), vec![pl(&[1, 3])]);

        assert_eq!(covers_down(&pl(&[2, 1])), vec![pl(&[1, 2])]);
        assert!(covers_down(&pl(&[1, 2, 3, 4, 5])).is_empty());
        assert_eq!(covers_down(&pl(&[3, 2, 5, 6, 4])).len(), 5);
    }

    #[test]
    fn one_move_per_row_of_the_maximum() {
        let top = max_placement(&part(&[3, 3, 5, 6, 6]));
        let mut rows: Vec<usize> = moves(&top).iter().map(|m| m.row).collect();
        rows.sort();
        assert_eq!(rows, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn covers_drop_rank_by_one() {
        let board = part(&[3, 3, 5, 6, 6]);
        for x in enumerate_placements(&board) {
            for y in covers_down(&x) {
                assert_eq!(rank(&y) + 1, rank(&x));
                assert!(bruhat_leq(&y, &x).unwrap());
                RookPlacement::on_board(y.columns().to_vec(), &board).unwrap();
            }
        }
    }

    #[test]
    fn conjugation_map_basics() {
        let board = part(&[2, 3, 5, 6, 6]);
        let conj = board.conjugate().unwrap();
        assert_eq!(
            conjugate_placement(&max_placement(&board), &board).unwrap(),
            max_placement(&conj)
        );
        for x in enumerate_placements(&board) {
            let y = conjugate_placement(&x, &board).unwrap();
            assert_eq!(conjugate_placement(&y, &conj).unwrap(), x);
        }
        assert!(conjugate_placement(&pl(&[2, 4]), &part(&[2, 4])).is_err());
    }

    #[test]
    fn insertion_map_lands_on_augmented_board() {
        let board = part(&[3, 3, 5, 6, 6]);
        let target = board.gjw().insert_zero_at(2).unwrap().partition();
        assert_eq!(target.gjw().entries(), &[2, 1, 0, 2, 2, 1]);
        let mut images: Vec<_> = enumerate_placements(&board)
            .iter()
            .map(|x| insert_zero_map(x, &board, 2).unwrap())
            .collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), enumerate_placements(&target).len());
        assert!(insert_zero_map(&max_placement(&board), &board, 1).is_err());
    }

    #[test]
    fn validation() {
        let board = part(&[2, 4]);
        assert!(RookPlacement::on_board(vec![2, 4], &board).is_ok());
        assert_eq!(
            RookPlacement::on_board(vec![3, 1], &board),
            Err(PlacementError::OffBoard { row: 1, column: 3 })
        );
        assert_eq!(
            RookPlacement::on_board(vec![2, 2], &board),
            Err(PlacementError::Attacking { column: 2 })
        );
        assert!(RookPlacement::on_board(vec![1], &board).is_err());
        assert_eq!("[3,2,5,6,4]".parse::<RookPlacement>().unwrap(), pl(&[3, 2, 5, 6, 4]));
        assert!("3,2".parse::<RookPlacement>().is_err());
    }
}
