use proptest::prelude::*;

use rookposet::*;

/// Valid GJW sequences with entries at most 5.
fn gjw_strategy(max_len: usize) -> impl Strategy<Value = GjwSequence> {
    prop::collection::vec(0u32..6, 0..=max_len).prop_map(|steps| {
        let mut entries: Vec<u32> = Vec::with_capacity(steps.len());
        for s in steps {
            let a = match entries.last() {
                None => s.min(5),
                Some(&prev) => (prev + s).saturating_sub(1).min(5),
            };
            entries.push(a);
        }
        GjwSequence::new(entries).unwrap()
    })
}

fn small_board(max_len: usize, max_size: u64) -> impl Strategy<Value = Partition> {
    gjw_strategy(max_len).prop_map(|g| g.partition()).prop_filter("poset too large", move |p| p.placement_count() <= max_size)
}

/// Shuffles the 1-ending blocks, optionally conjugates each, and keeps the
/// final block last.
fn rearranged(g: &GjwSequence, order: &[usize], flips: &[bool]) -> GjwSequence {
    let blocks = g.blocks();
    let (ones, tail): (Vec<Block>, Vec<Block>) = blocks.into_iter().partition(Block::ends_in_one);
    let mut idx: Vec<usize> = (0..ones.len()).collect();
    idx.sort_by_key(|&i| order.get(i).copied().unwrap_or(0));
    let mut entries = Vec::new();
    for (k, &i) in idx.iter().enumerate() {
        let b = if flips.get(k).copied().unwrap_or(false) { ones[i].conjugate().unwrap() } else { ones[i].clone() };
        entries.extend_from_slice(b.entries());
    }
    for b in tail {
        entries.extend_from_slice(b.entries());
    }
    GjwSequence::new(entries).unwrap()
}

proptest! {
    #[test]
    fn gjw_and_partition_are_inverse(g in gjw_strategy(10)) {
        let p = g.partition();
        prop_assert_eq!(p.gjw(), g);
        let text = p.to_string();
        if !p.is_empty() {
            prop_assert_eq!(text.parse::<Partition>().unwrap(), p);
        }
    }

    #[test]
    fn conjugation_is_an_involution(g in gjw_strategy(10)) {
        let p = g.partition();
        if let Ok(c) = p.conjugate() {
            prop_assert_eq!(c.placement_count(), p.placement_count());
            if c.is_conjugable() {
                prop_assert_eq!(c.conjugate().unwrap(), p);
            }
        }
    }

    #[test]
    fn blocks_reassemble(g in gjw_strategy(12)) {
        let blocks = g.blocks();
        let joined: Vec<u32> = blocks.iter().flat_map(|b| b.entries().to_vec()).collect();
        let nonzero: Vec<u32> = g.entries().iter().copied().filter(|&a| a > 0).collect();
        prop_assert_eq!(joined, nonzero);
        let open = blocks.iter().filter(|b| !b.ends_in_one()).count();
        prop_assert!(open <= 1);
        if open == 1 {
            prop_assert!(!blocks.last().unwrap().ends_in_one());
        }
    }

    #[test]
    fn equivalence_is_an_equivalence(a in gjw_strategy(6), b in gjw_strategy(6), c in gjw_strategy(6)) {
        let (p, q, r) = (a.partition(), b.partition(), c.partition());
        prop_assert!(equivalent(&p, &p));
        prop_assert_eq!(equivalent(&p, &q), equivalent(&q, &p));
        if equivalent(&p, &q) && equivalent(&q, &r) {
            prop_assert!(equivalent(&p, &r));
        }
    }

    #[test]
    fn rearranging_blocks_preserves_the_normal_form(
        g in gjw_strategy(12),
        order in prop::collection::vec(0usize..100, 12),
        flips in prop::collection::vec(any::<bool>(), 12),
    ) {
        let h = rearranged(&g, &order, &flips);
        prop_assert_eq!(h.normal_form(), g.normal_form());
    }

    #[test]
    fn conjugate_of_one_ending_board_is_equivalent(g in gjw_strategy(10)) {
        let p = g.partition();
        if g.entries().last() == Some(&1) {
            if let Ok(c) = p.conjugate() {
                prop_assert!(equivalent(&p, &c));
            }
        }
    }

    #[test]
    fn permutations_and_boards(images in Just((1..=7u32).collect::<Vec<_>>()).prop_shuffle()) {
        let w = Permutation::new(images).unwrap();
        match board_from_312(&w) {
            Ok(board) => {
                prop_assert!(avoids_312(&w));
                prop_assert_eq!(top_permutation(&board), w);
            }
            Err(_) => prop_assert!(!avoids_312(&w)),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rearranged_boards_have_isomorphic_posets(
        g in gjw_strategy(8).prop_filter("poset too large", |g| g.partition().placement_count() <= 200),
        order in prop::collection::vec(0usize..100, 8),
        flips in prop::collection::vec(any::<bool>(), 8),
    ) {
        let h = rearranged(&g, &order, &flips);
        let (p, q) = (build_poset(&g.partition()), build_poset(&h.partition()));
        prop_assert!(are_isomorphic(p.poset(), q.poset()).unwrap());
    }

    #[test]
    fn reconstruction_recovers_the_normal_form(p in small_board(9, 600)) {
        let poset = build_poset(&p).to_abstract();
        prop_assert_eq!(reconstruct(&poset).unwrap(), p.gjw().normal_form());
    }

    #[test]
    fn top_permutations_of_one_ending_boards(p in small_board(7, 600)) {
        prop_assume!(p.gjw().entries().last().is_some_and(|&a| a <= 1));
        let w = top_permutation(&p);
        prop_assert!(avoids_312(&w));
        let interval = lower_bruhat_interval(&w, 5000).unwrap();
        prop_assert_eq!(interval.rank_sizes(), build_poset(&p).poset().rank_sizes());
    }
}
