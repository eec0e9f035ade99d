//! Invariant suites run over a corpus of boards.

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::board::{equivalent, GjwSequence, Partition};
use crate::bruhat::{avoids_312, board_from_312, lower_bruhat_interval, top_permutation};
use crate::corpus::{boards, equal_rank_pairs, CorpusSpec};
use crate::placement::{bruhat_leq, conjugate_placement, insert_zero_map, moves, MoveKind, RookPlacement};
use crate::poset::{
    build_poset, is_below_coatom, poincare_polynomial, BoardPoset, CoatomView, IsoOracle, PoincarePolynomial,
};
use crate::reconstruct::{reconstruct_with, ReconstructOptions};

const EXAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    /// The first few failure messages.
    pub examples: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {} checked, {} failed", self.name, self.checked, self.failed)?;
        for e in &self.examples {
            write!(f, "\n  {e}")?;
        }
        Ok(())
    }
}

/// All boards of a corpus with their rook posets.
pub struct Corpus {
    pub spec: CorpusSpec,
    pub boards: Vec<Partition>,
    pub posets: Vec<BoardPoset>,
    pub oracle: IsoOracle,
}

impl Corpus {
    pub fn build(spec: CorpusSpec, oracle: IsoOracle) -> Self {
        let boards = boards(spec);
        let posets = boards.par_iter().map(build_poset).collect();
        Self { spec, boards, posets, oracle }
    }

    pub fn len(&self) -> usize {
        self.boards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boards.is_empty()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        equal_rank_pairs(&self.boards)
    }

    fn index_of(&self, board: &Partition) -> Option<usize> {
        self.boards.iter().position(|b| b == board)
    }
}

/// Runs `check` on every item in parallel; each returns the number of
/// individual checks it made, or a failure message.
fn suite<T: Sync>(name: &'static str, items: &[T], check: impl Fn(&T) -> Result<usize, String> + Sync + Send) -> SuiteReport {
    let results: Vec<Result<usize, String>> = items.par_iter().map(check).collect();
    let mut report = SuiteReport { name, checked: 0, failed: 0, examples: Vec::new() };
    for r in results {
        match r {
            Ok(n) => report.checked += n,
            Err(e) => {
                report.checked += 1;
                report.failed += 1;
                if report.examples.len() < EXAMPLES {
                    report.examples.push(e);
                }
            }
        }
    }
    report
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

/// Oracle isomorphism agrees with normal-form equivalence on every pair of
/// boards with equal rank sizes, and every board is isomorphic to itself.
pub fn theorem_suite(corpus: &Corpus) -> SuiteReport {
    let mut pairs = corpus.pairs();
    pairs.extend((0..corpus.len()).map(|i| (i, i)));
    suite("theorem", &pairs, |&(i, j)| {
        let (p, q) = (&corpus.boards[i], &corpus.boards[j]);
        let iso = corpus
            .oracle
            .are_isomorphic(corpus.posets[i].poset(), corpus.posets[j].poset())
            .map_err(|e| format!("{p} vs {q}: {e}"))?;
        ensure(iso == equivalent(p, q), || format!("{p} vs {q}: oracle says {iso}"))?;
        Ok(1)
    })
}

/// Reconstruction from the unlabelled poset recovers the normal form.
pub fn reconstruction_suite(corpus: &Corpus) -> SuiteReport {
    let options = ReconstructOptions { max_elements: corpus.oracle.max_elements, ..Default::default() };
    let indices: Vec<usize> = (0..corpus.len()).collect();
    suite("reconstruction", &indices, |&i| {
        let board = &corpus.boards[i];
        let r = reconstruct_with(&corpus.posets[i].to_abstract(), &options).map_err(|e| format!("{board}: {e}"))?;
        let expected = board.gjw().normal_form();
        ensure(r.normal_form == expected, || format!("{board}: got {}, expected {expected}", r.normal_form))?;
        Ok(1)
    })
}

pub fn counting_suite(corpus: &Corpus) -> SuiteReport {
    let indices: Vec<usize> = (0..corpus.len()).collect();
    suite("counting", &indices, |&i| {
        let board = &corpus.boards[i];
        let product: u64 = board.gjw().entries().iter().map(|&a| a as u64 + 1).product();
        let count = corpus.posets[i].len() as u64;
        ensure(count == product, || format!("{board}: {count} placements, product {product}"))?;
        Ok(1)
    })
}

pub fn poincare_suite(corpus: &Corpus) -> SuiteReport {
    let indices: Vec<usize> = (0..corpus.len()).collect();
    suite("poincare", &indices, |&i| {
        let board = &corpus.boards[i];
        let measured = poincare_polynomial(corpus.posets[i].poset());
        let expected = PoincarePolynomial::from_gjw_values(board.gjw().entries().iter().copied());
        ensure(measured == expected, || format!("{board}: {measured} vs {expected}"))?;
        Ok(1)
    })
}

/// Coatom bijection, chain lengths of `X_i`, the entanglement forest and
/// its agreement with switch partners, covers as the transitive reduction
/// of dominance, and the coatom membership shortcut.
pub fn structure_suite(corpus: &Corpus) -> SuiteReport {
    let indices: Vec<usize> = (0..corpus.len()).collect();
    suite("structure", &indices, |&i| structure_checks(&corpus.boards[i], &corpus.posets[i]))
}

fn structure_checks(board: &Partition, bp: &BoardPoset) -> Result<usize, String> {
    let gjw = board.gjw();
    let a = gjw.entries();
    let poset = bp.poset();
    let view = CoatomView::new(poset);
    let rows = bp.coatom_rows();
    let mut checks = 0;

    let nonzero: Vec<usize> = (1..=a.len()).filter(|&r| a[r - 1] > 0).collect();
    let coatom_rows: Vec<usize> = rows.iter().map(|&(r, _)| r).collect();
    ensure(coatom_rows == nonzero, || format!("{board}: coatom rows {coatom_rows:?}, nonzero rows {nonzero:?}"))?;
    ensure(view.coatoms().len() == rows.len(), || format!("{board}: coatom count"))?;
    checks += 2;

    let top = crate::placement::max_placement(board);
    let top_moves = moves(&top);
    for &(row, c) in &rows {
        let chain = view.generated(&[c]);
        let mut ranks: Vec<u32> = chain.iter().map(|&x| poset.rank(x)).collect();
        ranks.sort_unstable();
        ranks.dedup();
        ensure(ranks.len() == chain.len(), || format!("{board}: X_{row} is not a chain"))?;
        let is_switch = top_moves.iter().any(|m| m.row == row && matches!(m.kind, MoveKind::Switch { .. }));
        let expected = if is_switch { 1 } else { a[row - 1] as usize };
        ensure(chain.len() - 1 == expected, || format!("{board}: X_{row} has {} edges, expected {expected}", chain.len() - 1))?;
        // Push exactly when no later GJW value is smaller.
        let later_smaller = a[row..].iter().any(|&b| b < a[row - 1]);
        ensure(is_switch == later_smaller, || format!("{board}: row {row} move kind"))?;
        checks += 3;
    }

    let graph = view.entanglement_graph();
    ensure(graph.is_forest(), || format!("{board}: entanglement graph is not a forest"))?;
    let row_of = |c: usize| rows.iter().find(|&&(_, e)| e == c).map(|&(r, _)| r).expect("coatom");
    let measured: BTreeSet<(usize, usize)> = graph
        .edges
        .iter()
        .map(|&(x, y)| {
            let (r, s) = (row_of(x), row_of(y));
            (r.min(s), r.max(s))
        })
        .collect();
    let partners: BTreeSet<(usize, usize)> = nonzero
        .iter()
        .filter_map(|&r| {
            let k = (r + 1..=a.len()).find(|&k| a[k - 1] < a[r - 1])?;
            (a[k - 1] > 0).then_some((r, k))
        })
        .collect();
    ensure(measured == partners, || format!("{board}: entanglement {measured:?} vs partners {partners:?}"))?;
    checks += 2;

    let reduction = transitive_reduction(bp.placements());
    let covers: BTreeSet<(usize, usize)> = poset.covers().into_iter().collect();
    ensure(covers == reduction, || format!("{board}: covers differ from the transitive reduction"))?;
    checks += 1;

    for &(row, c) in &rows {
        let coatom = bp.placement(c);
        for x in bp.placements() {
            let full = bruhat_leq(x, coatom).map_err(|e| e.to_string())?;
            ensure(is_below_coatom(x, coatom, row) == full, || format!("{board}: shortcut fails for {x} under row {row}"))?;
            checks += 1;
        }
    }
    Ok(checks)
}

/// Covering pairs of the dominance order, computed from the relation
/// alone.
fn transitive_reduction(placements: &[RookPlacement]) -> BTreeSet<(usize, usize)> {
    let n = placements.len();
    let below: Vec<FixedBitSet> = placements
        .iter()
        .map(|y| {
            let mut set = FixedBitSet::with_capacity(n);
            for (x, p) in placements.iter().enumerate() {
                if p != y && bruhat_leq(p, y).expect("same board") {
                    set.insert(x);
                }
            }
            set
        })
        .collect();
    let mut out = BTreeSet::new();
    for y in 0..n {
        let mut indirect = FixedBitSet::with_capacity(n);
        for z in below[y].ones() {
            indirect.union_with(&below[z]);
        }
        for x in below[y].difference(&indirect) {
            out.insert((x, y));
        }
    }
    out
}

/// Conjugation and zero insertion are order isomorphisms, and a board
/// with an interior GJW zero has the product of its two sides as poset.
pub fn maps_suite(corpus: &Corpus) -> SuiteReport {
    let indices: Vec<usize> = (0..corpus.len()).collect();
    suite("maps", &indices, |&i| {
        let board = &corpus.boards[i];
        let bp = &corpus.posets[i];
        let mut checks = 0;
        if board.is_conjugable() {
            let conj = board.conjugate().map_err(|e| e.to_string())?;
            let target = match corpus.index_of(&conj) {
                Some(j) => corpus.posets[j].clone(),
                None => build_poset(&conj),
            };
            let image = |x: &RookPlacement| conjugate_placement(x, board).map_err(|e| format!("{board}: {e}"));
            check_map(bp, &target, image).map_err(|e| format!("{board} conjugation: {e}"))?;
            // Conjugating twice needs the conjugate to be conjugable again,
            // which fails when the bottom row has one box.
            for x in bp.placements().iter().filter(|_| conj.is_conjugable()) {
                let back = conjugate_placement(&conjugate_placement(x, board).map_err(|e| e.to_string())?, &conj)
                    .map_err(|e| e.to_string())?;
                ensure(&back == x, || format!("{board}: conjugation is not an involution at {x}"))?;
            }
            checks += 2;
        }
        let gjw = board.gjw();
        let a = gjw.entries();
        for row in (1..=a.len()).filter(|&r| a[r - 1] == 1) {
            let target = build_poset(&gjw.insert_zero_at(row).map_err(|e| e.to_string())?.partition());
            check_map(bp, &target, |x| insert_zero_map(x, board, row).map_err(|e| e.to_string()))
                .map_err(|e| format!("{board} zero after row {row}: {e}"))?;
            checks += 1;
        }
        for k in (1..a.len().saturating_sub(1)).filter(|&k| a[k] == 0) {
            let left = GjwSequence::new(a[..k].to_vec()).map_err(|e| e.to_string())?.partition();
            let right = GjwSequence::new(a[k + 1..].to_vec()).map_err(|e| e.to_string())?.partition();
            let product = build_poset(&left).poset().product(build_poset(&right).poset());
            let iso = corpus.oracle.are_isomorphic(bp.poset(), &product).map_err(|e| e.to_string())?;
            ensure(iso, || format!("{board}: not the product of {left} and {right}"))?;
            checks += 1;
        }
        Ok(checks)
    })
}

/// `f` is a bijection from `source` onto `target` carrying covers to
/// covers, confirmed independently by the oracle.
fn check_map(
    source: &BoardPoset,
    target: &BoardPoset,
    f: impl Fn(&RookPlacement) -> Result<RookPlacement, String>,
) -> Result<(), String> {
    let image: Vec<usize> = source
        .placements()
        .iter()
        .map(|x| {
            let y = f(x)?;
            target.index_of(&y).ok_or_else(|| format!("{x} maps to {y}, not on the target board"))
        })
        .collect::<Result<_, _>>()?;
    ensure(image.iter().collect::<BTreeSet<_>>().len() == target.len() && image.len() == target.len(), || {
        "not a bijection".to_string()
    })?;
    ensure(source.poset().cover_count() == target.poset().cover_count(), || "cover counts differ".to_string())?;
    for (a, b) in source.poset().covers() {
        ensure(target.poset().lower_covers(image[b]).contains(&image[a]), || {
            format!("cover {} < {} is not preserved", source.placement(a), source.placement(b))
        })?;
    }
    let iso = IsoOracle::default().are_isomorphic(source.poset(), target.poset()).map_err(|e| e.to_string())?;
    ensure(iso, || "oracle disagrees".to_string())
}

/// When the last GJW value is at most 1: the top permutation avoids 312,
/// its prefix-maximum board is the board plus the row forced by
/// completion, and its lower Bruhat interval is the rook poset.
pub fn bruhat_suite(corpus: &Corpus) -> SuiteReport {
    let indices: Vec<usize> = (0..corpus.len()).filter(|&i| last_gjw_at_most_one(&corpus.boards[i])).collect();
    suite("bruhat", &indices, |&i| {
        let board = &corpus.boards[i];
        let w = top_permutation(board);
        ensure(avoids_312(&w), || format!("{board}: top permutation {w} contains 312"))?;
        let back = board_from_312(&w).map_err(|e| format!("{board}: {e}"))?;
        let (head, forced) = back.parts().split_at(board.rows());
        ensure(head == board.parts() && forced.iter().all(|&r| r == board.width()), || {
            format!("{board}: prefix maxima of {w} give {back}")
        })?;
        let interval = lower_bruhat_interval(&w, corpus.oracle.max_elements).map_err(|e| e.to_string())?;
        let iso = corpus.oracle.are_isomorphic(&interval, corpus.posets[i].poset()).map_err(|e| e.to_string())?;
        ensure(iso, || format!("{board}: interval below {w} differs from the rook poset"))?;
        Ok(3)
    })
}

/// 312 avoidance of the top permutation on every board, whatever its last
/// GJW value. Completion leaves the unused columns in increasing order, so
/// this fails as soon as the last GJW value exceeds 1; for the board (3)
/// the top permutation is [3,1,2].
pub fn bruhat_all_boards_suite(corpus: &Corpus) -> SuiteReport {
    suite("bruhat, all boards", &corpus.boards, |board| {
        let w = top_permutation(board);
        ensure(avoids_312(&w), || format!("{board}: top permutation {w} contains 312"))?;
        Ok(1)
    })
}

fn last_gjw_at_most_one(board: &Partition) -> bool {
    board.gjw().entries().last().is_some_and(|&a| a <= 1)
}

pub fn run_all(corpus: &Corpus) -> Vec<SuiteReport> {
    vec![
        theorem_suite(corpus),
        reconstruction_suite(corpus),
        counting_suite(corpus),
        poincare_suite(corpus),
        structure_suite(corpus),
        maps_suite(corpus),
        bruhat_suite(corpus),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_corpus_passes_everything() {
        let corpus = Corpus::build(CorpusSpec { max_rows: 3, max_poset_size: 24 }, IsoOracle::default());
        for report in run_all(&corpus) {
            assert!(report.passed(), "{report}");
            assert!(report.checked > 0);
        }
    }

    #[test]
    fn wide_boards_have_312_tops() {
        let corpus = Corpus::build(CorpusSpec { max_rows: 2, max_poset_size: 6 }, IsoOracle::default());
        let report = bruhat_all_boards_suite(&corpus);
        assert!(!report.passed());
        assert!(report.examples.iter().any(|e| e.starts_with("3: top permutation [3,1,2]")));
    }

    #[test]
    fn failures_are_reported() {
        let items = [1, 2, 3];
        let report = suite("demo", &items, |&x| if x == 2 { Err("two".to_string()) } else { Ok(x) });
        assert_eq!((report.checked, report.failed), (5, 1));
        assert_eq!(report.examples, vec!["two".to_string()]);
        assert!(report.to_string().starts_with("FAIL demo"));
    }

    #[test]
    fn reduction_of_a_small_board() {
        let bp = build_poset(&Partition::new(vec![2, 4]).unwrap());
        assert_eq!(transitive_reduction(bp.placements()).len(), 7);
    }
}
