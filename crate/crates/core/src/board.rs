//! Ferrers boards, their GJW sequences, conjugation and the block normal
//! form that classifies rook posets up to isomorphism.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoardError {
    #[error("row {row} has no boxes")]
    EmptyRow { row: usize },
    #[error("parts must be weakly increasing (row {row} is shorter than row {prev})", prev = .row - 1)]
    NotIncreasing { row: usize },
    #[error("row {row} has {len} boxes, fewer than its index (board does not contain the staircase)")]
    BelowStaircase { row: usize, len: u32 },
    #[error("GJW entry at row {row} drops by more than one")]
    SteepDescent { row: usize },
    #[error("conjugation needs the top row to have n+1 boxes")]
    ConjugationUndefined,
    #[error("block entries must be positive")]
    ZeroInBlock,
    #[error("a block may only contain a 1 as its last entry")]
    InteriorOne,
    #[error("block does not end in 1")]
    NotOneEnding,
    #[error("row {row} does not carry GJW value 1")]
    NotAOneRow { row: usize },
    #[error("cannot parse board {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// A staircase-containing partition, parts listed bottom-up in weakly
/// increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, BoardError> {
        for (i, &len) in parts.iter().enumerate() {
            let row = i + 1;
            if len == 0 {
                return Err(BoardError::EmptyRow { row });
            }
            if i > 0 && len < parts[i - 1] {
                return Err(BoardError::NotIncreasing { row });
            }
            if (len as usize) < row {
                return Err(BoardError::BelowStaircase { row, len });
            }
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Length of the top row, or 0 for the empty board.
    pub fn width(&self) -> u32 {
        self.parts.last().copied().unwrap_or(0)
    }

    /// Length of row `row` (1-based).
    pub fn row_len(&self, row: usize) -> u32 {
        self.parts[row - 1]
    }

    pub fn gjw(&self) -> GjwSequence {
        GjwSequence {
            entries: self
                .parts
                .iter()
                .enumerate()
                .map(|(i, &len)| len - (i as u32 + 1))
                .collect(),
        }
    }

    /// Number of maximal rook placements, the product of `a_i + 1` over the
    /// GJW entries. Saturates instead of overflowing.
    pub fn placement_count(&self) -> u64 {
        self.gjw()
            .entries()
            .iter()
            .fold(1u64, |acc, &a| acc.saturating_mul(a as u64 + 1))
    }

    /// Whether the board has exactly `n + 1` boxes in its top row.
    pub fn is_conjugable(&self) -> bool {
        !self.parts.is_empty() && self.width() as usize == self.rows() + 1
    }

    /// Reflects the board (augmented by a full top row) across the
    /// upper-left to lower-right diagonal and drops the augmented row.
    pub fn conjugate(&self) -> Result<Partition, BoardError> {
        if !self.is_conjugable() {
            return Err(BoardError::ConjugationUndefined);
        }
        let n = self.rows();
        let side = n as u32 + 1;
        let mut augmented = self.parts.clone();
        augmented.push(side);
        // Box (r, c) maps to (n+2-c, n+2-r); row r' of the image has one box
        // for every original row whose length reaches n+2-r'.
        let parts = (1..=n as u32)
            .map(|r| augmented.iter().filter(|&&len| len >= side + 1 - r).count() as u32)
            .collect();
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.parts, ",")
    }
}

/// The sequence `λ_i - i` of a staircase-containing board.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GjwSequence {
    entries: Vec<u32>,
}

impl GjwSequence {
    pub fn new(entries: Vec<u32>) -> Result<Self, BoardError> {
        for i in 1..entries.len() {
            if entries[i] + 1 < entries[i - 1] {
                return Err(BoardError::SteepDescent { row: i + 1 });
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn partition(&self) -> Partition {
        let parts = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, &a)| a + i as u32 + 1)
            .collect();
        Partition::new(parts).expect("valid GJW sequences give valid boards")
    }

    /// Splits after every 1 and drops zeros. Every block but possibly the
    /// last ends in 1.
    pub fn blocks(&self) -> Vec<Block> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        for &a in &self.entries {
            if a == 0 {
                continue;
            }
            current.push(a);
            if a == 1 {
                out.push(Block(std::mem::take(&mut current)));
            }
        }
        if !current.is_empty() {
            out.push(Block(current));
        }
        out
    }

    pub fn normal_form(&self) -> NormalForm {
        NormalForm::from_blocks(self.blocks())
    }

    /// Inserts a 0 after every 1 that is not already followed by a 0.
    pub fn insert_zero_after_ones(&self) -> GjwSequence {
        let mut entries = Vec::with_capacity(self.entries.len() * 2);
        for (i, &a) in self.entries.iter().enumerate() {
            entries.push(a);
            if a == 1 && self.entries.get(i + 1) != Some(&0) {
                entries.push(0);
            }
        }
        GjwSequence { entries }
    }

    /// Inserts a single 0 directly after row `row` (1-based), which must
    /// carry the value 1.
    pub fn insert_zero_at(&self, row: usize) -> Result<GjwSequence, BoardError> {
        if row == 0 || self.entries.get(row - 1) != Some(&1) {
            return Err(BoardError::NotAOneRow { row });
        }
        let mut entries = self.entries.clone();
        entries.insert(row, 0);
        Ok(GjwSequence { entries })
    }
}

impl fmt::Display for GjwSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("g:")?;
        write_joined(f, &self.entries, ",")
    }
}

/// A contiguous run of nonzero GJW entries produced by [`GjwSequence::blocks`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block(Vec<u32>);

impl Block {
    pub fn new(entries: Vec<u32>) -> Result<Self, BoardError> {
        if entries.is_empty() || entries.contains(&0) {
            return Err(BoardError::ZeroInBlock);
        }
        if entries[..entries.len() - 1].contains(&1) {
            return Err(BoardError::InteriorOne);
        }
        GjwSequence::new(entries.clone())?;
        Ok(Self(entries))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn ends_in_one(&self) -> bool {
        self.0.last() == Some(&1)
    }

    /// The block of the conjugate board.
    pub fn conjugate(&self) -> Result<Block, BoardError> {
        if !self.ends_in_one() {
            return Err(BoardError::NotOneEnding);
        }
        let board = GjwSequence { entries: self.0.clone() }.partition();
        let conj = board.conjugate()?.gjw();
        Ok(Block(conj.entries))
    }

    /// The lexicographically smaller of the block and its conjugate; blocks
    /// not ending in 1 are their own representative.
    pub fn canonical(&self) -> Block {
        match self.conjugate() {
            Ok(conj) if conj < *self => conj,
            _ => self.clone(),
        }
    }
}

impl fmt::Display for Block {
    /// Single-digit entries are written as a bare digit string ("22321");
    /// otherwise entries are comma separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.0.iter().all(|&a| a < 10) { "" } else { "," };
        write_joined(f, &self.0, sep)
    }
}

/// The complete isomorphism invariant of a rook poset: the sorted multiset
/// of canonical 1-ending blocks plus the verbatim final block, if any.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct NormalForm {
    one_blocks: Vec<Block>,
    tail: Option<Block>,
}

impl NormalForm {
    /// Canonicalizes a sequence of blocks; only the last may fail to end
    /// in 1.
    pub fn from_blocks(blocks: Vec<Block>) -> Self {
        let mut one_blocks = Vec::with_capacity(blocks.len());
        let mut tail = None;
        for block in blocks {
            if block.ends_in_one() {
                one_blocks.push(block.canonical());
            } else {
                debug_assert!(tail.is_none(), "two blocks not ending in 1");
                tail = Some(block);
            }
        }
        one_blocks.sort();
        Self { one_blocks, tail }
    }

    pub fn one_blocks(&self) -> &[Block] {
        &self.one_blocks
    }

    pub fn tail(&self) -> Option<&Block> {
        self.tail.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.one_blocks.is_empty() && self.tail.is_none()
    }

    /// All GJW values, one per coatom.
    pub fn entries(&self) -> impl Iterator<Item = u32> + '_ {
        self.one_blocks
            .iter()
            .chain(self.tail.iter())
            .flat_map(|b| b.entries().iter().copied())
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("blocks:")?;
        for (i, block) in self.one_blocks.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { " | " })?;
            write!(f, "{block}")?;
        }
        match &self.tail {
            Some(tail) => write!(f, " ; tail: {tail}"),
            None => f.write_str(" ; tail: -"),
        }
    }
}

/// Whether two boards have isomorphic rook posets.
pub fn equivalent(p: &Partition, q: &Partition) -> bool {
    p.gjw().normal_form() == q.gjw().normal_form()
}

fn write_joined(f: &mut fmt::Formatter<'_>, values: &[u32], sep: &str) -> fmt::Result {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

pub(crate) fn parse_list(text: &str) -> Result<Vec<u32>, String> {
    let body = text.trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|item| {
            let item = item.trim();
            item.parse::<u32>()
                .map_err(|_| format!("{item:?} is not a nonnegative integer"))
        })
        .collect()
}

/// Parses either a partition ("3,3,5,6,6") or a GJW sequence ("g:2,1,2,2,1").
impl FromStr for Partition {
    type Err = BoardError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let parse_err = |reason: String| BoardError::Parse { text: text.to_string(), reason };
        let trimmed = text.trim();
        if let Some(rest) = trimmed.strip_prefix("g:") {
            let entries = parse_list(rest).map_err(parse_err)?;
            Ok(GjwSequence::new(entries)?.partition())
        } else {
            let parts = parse_list(trimmed).map_err(parse_err)?;
            Partition::new(parts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn gjw(entries: &[u32]) -> GjwSequence {
        GjwSequence::new(entries.to_vec()).unwrap()
    }

    fn block(entries: &[u32]) -> Block {
        Block::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn gjw_examples() {
        assert_eq!(part(&[3, 3, 5, 6, 6]).gjw().entries(), &[2, 1, 2, 2, 1]);
        assert_eq!(part(&[1, 2, 3]).gjw().entries(), &[0, 0, 0]);
        assert_eq!(part(&[2, 3, 5, 6, 6]).gjw().entries(), &[1, 1, 2, 2, 1]);
    }

    #[test]
    fn partition_from_gjw_examples() {
        assert_eq!(gjw(&[2, 1, 2, 2, 1]).partition(), part(&[3, 3, 5, 6, 6]));
        assert_eq!(gjw(&[]).partition(), part(&[]));
        assert_eq!(gjw(&[1, 0]).partition(), part(&[2, 2]));
    }

    #[test]
    fn invalid_boards_are_rejected() {
        assert_eq!(Partition::new(vec![2, 1]), Err(BoardError::NotIncreasing { row: 2 }));
        assert_eq!(
            Partition::new(vec![1, 1]),
            Err(BoardError::BelowStaircase { row: 2, len: 1 })
        );
        assert_eq!(Partition::new(vec![0, 2]), Err(BoardError::EmptyRow { row: 1 }));
        assert_eq!(GjwSequence::new(vec![2, 0]), Err(BoardError::SteepDescent { row: 2 }));
        assert!("3,-1".parse::<Partition>().is_err());
        assert!("g:1,x".parse::<Partition>().is_err());
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(part(&[2, 3, 5, 6, 6]).conjugate().unwrap(), part(&[3, 4, 4, 5, 6]));
        assert_eq!(part(&[3, 3]).conjugate().unwrap(), part(&[3, 3]));
        assert_eq!(part(&[3, 3, 5, 6, 6]).conjugate().unwrap().conjugate().unwrap(), part(&[3, 3, 5, 6, 6]));
        assert_eq!(part(&[2, 4]).conjugate(), Err(BoardError::ConjugationUndefined));
        assert_eq!(part(&[]).conjugate(), Err(BoardError::ConjugationUndefined));
    }

    #[test]
    fn block_examples() {
        let blocks = gjw(&[2, 2, 3, 2, 1, 0, 1, 0, 0, 3, 2]).blocks();
        assert_eq!(blocks, vec![block(&[2, 2, 3, 2, 1]), block(&[1]), block(&[3, 2])]);
        assert_eq!(gjw(&[2, 1, 2, 2, 1]).blocks(), vec![block(&[2, 1]), block(&[2, 2, 1])]);
        assert!(gjw(&[0, 0, 0]).blocks().is_empty());
    }

    #[test]
    fn conjugate_block_examples() {
        assert_eq!(block(&[2, 2, 3, 2, 1]).conjugate().unwrap(), block(&[3, 2, 2, 2, 1]));
        assert_eq!(block(&[2, 1]).conjugate().unwrap(), block(&[2, 1]));
        assert_eq!(Block::new(vec![2, 1, 1]), Err(BoardError::InteriorOne));
        assert_eq!(block(&[3, 2]).conjugate(), Err(BoardError::NotOneEnding));
    }

    #[test]
    fn conjugate_of_board_with_interior_one() {
        // (3,3,4) has GJW 211, which is not a single block but still has a
        // conjugate board.
        let conj = gjw(&[2, 1, 1]).partition().conjugate().unwrap();
        assert_eq!(conj.gjw().entries(), &[1, 2, 1]);
    }

    #[test]
    fn normal_form_examples() {
        let nf = gjw(&[2, 2, 3, 2, 1, 0, 1, 0, 0, 3, 2]).normal_form();
        assert_eq!(nf.one_blocks(), &[block(&[1]), block(&[2, 2, 3, 2, 1])]);
        assert_eq!(nf.tail(), Some(&block(&[3, 2])));
        assert_eq!(gjw(&[1, 3, 2, 2, 2, 1, 3, 2]).normal_form(), nf);
        assert!(gjw(&[0]).normal_form().is_empty());
    }

    #[test]
    fn normal_form_text() {
        assert_eq!(
            gjw(&[2, 2, 3, 2, 1, 0, 1, 0, 0, 3, 2]).normal_form().to_string(),
            "blocks: 1 | 22321 ; tail: 32"
        );
        assert_eq!(part(&[1, 2, 3]).gjw().normal_form().to_string(), "blocks: ; tail: -");
        assert_eq!(part(&[3, 3, 5, 6, 6]).gjw().normal_form().to_string(), "blocks: 21 | 221 ; tail: -");
        assert_eq!(gjw(&[12, 11]).normal_form().to_string(), "blocks: ; tail: 12,11");
    }

    #[test]
    fn equivalence_examples() {
        let a = gjw(&[2, 2, 3, 2, 1, 0, 1, 0, 0, 3, 2]).partition();
        let b = gjw(&[1, 3, 2, 2, 2, 1, 3, 2]).partition();
        assert!(equivalent(&a, &b));
        assert!(equivalent(&a, &a));
        assert!(!equivalent(&part(&[2, 2]), &part(&[2, 3])));
    }

    #[test]
    fn insert_zero_examples() {
        assert_eq!(gjw(&[2, 1, 2, 2, 1]).insert_zero_after_ones(), gjw(&[2, 1, 0, 2, 2, 1, 0]));
        assert_eq!(gjw(&[0, 0]).insert_zero_after_ones(), gjw(&[0, 0]));
        assert_eq!(gjw(&[1, 0]).insert_zero_after_ones(), gjw(&[1, 0]));
        assert_eq!(gjw(&[2, 1, 2, 2, 1]).insert_zero_at(2).unwrap(), gjw(&[2, 1, 0, 2, 2, 1]));
        assert_eq!(gjw(&[2, 1]).insert_zero_at(1), Err(BoardError::NotAOneRow { row: 1 }));
    }

    #[test]
    fn parse_board_text() {
        assert_eq!("3,3,5,6,6".parse::<Partition>().unwrap(), part(&[3, 3, 5, 6, 6]));
        assert_eq!("g:2,1,2,2,1".parse::<Partition>().unwrap(), part(&[3, 3, 5, 6, 6]));
        assert_eq!("".parse::<Partition>().unwrap(), part(&[]));
        assert_eq!(" 2, 4 ".parse::<Partition>().unwrap(), part(&[2, 4]));
    }
}
