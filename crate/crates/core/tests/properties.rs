use posheap_core::gen::random_ecp_instance;
use posheap_core::inference::{enum_p2, enum_p3, enum_p4, infer_p1};
use posheap_core::invariants::{
    alphabet_equivariance, demotion_invariance, heap_definition, suffix_link_descent, trace_cycle_spells_text,
};
use posheap_core::pht::{parse_pht, write_pht};
use posheap_core::{Alphabet, Flags, HeapSketch, PositionHeap};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Valid texts over `abcd`: a body avoiding the final letter.
fn text(max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    (0usize..4, proptest::collection::vec(0usize..3, 0..max_len)).prop_map(|(last, body)| {
        let letters = b"abcd";
        let others: Vec<u8> = letters.iter().copied().filter(|&c| c != letters[last]).collect();
        let mut t: Vec<u8> = body.into_iter().map(|i| others[i]).collect();
        t.push(letters[last]);
        t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn heaps_follow_the_definition(t in text(40)) {
        prop_assert!(heap_definition(&t).is_ok(), "{:?}", heap_definition(&t));
        let (h, l) = PositionHeap::from_text(&t).unwrap();
        prop_assert!(suffix_link_descent(&h, &l).is_ok(), "{:?}", suffix_link_descent(&h, &l));
    }

    #[test]
    fn trace_cycles_spell_their_text(t in text(40)) {
        let r = trace_cycle_spells_text(&t);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn renaming_letters_renames_labels(t in text(40), perm in Just(b"abcd".to_vec()).prop_shuffle()) {
        let mut rename = [0u8; 256];
        for (i, &c) in b"abcd".iter().enumerate() {
            rename[c as usize] = perm[i];
        }
        prop_assert!(alphabet_equivariance(&t, &rename).is_ok());
    }

    #[test]
    fn numbered_labeled_round_trip(t in text(64)) {
        let (h, l) = PositionHeap::from_text(&t).unwrap();
        let s = HeapSketch::from_heap(&h, &l, Flags { numbered: true, labeled: true, links: false });
        let out = infer_p1(&s).unwrap();
        prop_assert_eq!(out.text(), Some(&t[..]));
    }

    #[test]
    fn texts_are_among_their_answers(t in text(9)) {
        let (h, l) = PositionHeap::from_text(&t).unwrap();
        let a = Alphabet::new(b"abcd").unwrap();
        let numbered = HeapSketch::from_heap(&h, &l, Flags { numbered: true, ..Flags::default() });
        prop_assert!(enum_p2(&numbered, &a).unwrap().any(|x| x == t));
        let labeled = HeapSketch::from_heap(&h, &l, Flags { labeled: true, ..Flags::default() });
        prop_assert!(enum_p3(&labeled).unwrap().any(|x| x == t));
        let linked = HeapSketch::from_heap(&h, &l, Flags { links: true, ..Flags::default() });
        prop_assert!(enum_p4(&linked, &a).unwrap().any(|x| x == t));
    }

    #[test]
    fn pht_round_trip(t in text(30), bits in 0u8..8) {
        let (h, l) = PositionHeap::from_text(&t).unwrap();
        let keep = Flags { numbered: bits & 1 != 0, labeled: bits & 2 != 0, links: bits & 4 != 0 };
        let s = HeapSketch::from_heap(&h, &l, keep);
        prop_assert_eq!(parse_pht(&write_pht(&s).unwrap()).unwrap(), s);
    }

    #[test]
    fn lone_priorities_do_not_matter(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (g, f, r) = random_ecp_instance(&mut rng, 5, 8, seed % 5 == 0);
        let res = demotion_invariance(&g, &f, r, 10_000);
        prop_assert!(res.is_ok(), "{:?}", res);
    }
}
