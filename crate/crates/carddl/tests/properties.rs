mod common;

use carddl::query::{is_splitting, splittings};
use carddl::semantics::eval;
use carddl::syntax::{parse_concept, parse_query};
use carddl::transforms::{fb_bisimilar, girth, short_cycle, unravel};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn concept_render_parses_back(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let text = format!("{} or not {}", common::shallow_concept(&mut r, &common::NAMES, &common::ROLES),
            common::shallow_concept(&mut r, &common::NAMES, &common::ROLES));
        let c = parse_concept(&text).unwrap();
        let back = parse_concept(&c.to_string()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn query_render_parses_back(seed in any::<u64>()) {
        let q = common::query(&mut common::rng(seed), 5, &["x", "y", "z", "u"]);
        let back = parse_query(&q.to_string()).unwrap();
        prop_assert_eq!(back, q);
    }

    #[test]
    fn bounded_cycle_search_agrees_with_girth(seed in any::<u64>(), len in 1usize..6) {
        let i = common::interp(&mut common::rng(seed), 6, 0.2);
        let expected = girth(&i).filter(|g| *g <= len);
        prop_assert_eq!(short_cycle(&i, len), expected);
    }

    #[test]
    fn rendered_concepts_keep_their_extension(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let i = common::interp(&mut r, 5, 0.3);
        let c = parse_concept(&common::shallow_concept(&mut r, &common::NAMES, &common::ROLES)).unwrap();
        let back = parse_concept(&c.to_string()).unwrap();
        prop_assert_eq!(eval(&i, &c).unwrap(), eval(&i, &back).unwrap());
    }

    #[test]
    fn every_enumerated_splitting_is_valid(seed in any::<u64>()) {
        let q = common::query(&mut common::rng(seed), 4, &["x", "y", "z"]);
        let inds = vec!["a".to_string(), "b".to_string()];
        let all = splittings(&q, &inds, 100_000).unwrap();
        for sp in &all {
            prop_assert!(is_splitting(&q, sp), "{:?}", sp);
        }
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), all.len());
        // Mapping every variable to an individual is always a splitting.
        prop_assert!(all.iter().any(|sp| sp.nu.len() == q.vars().len()));
    }

    #[test]
    fn unraveling_is_bisimilar_below_the_cut(seed in any::<u64>()) {
        let i = common::interp(&mut common::rng(seed), 4, 0.25);
        let (u, seqs) = unravel(&i, 3, 100_000).unwrap();
        for (w, s) in seqs.iter().enumerate().filter(|(_, s)| s.0.len() < 3) {
            prop_assert!(fb_bisimilar(&u, w, &i, s.last()));
        }
    }
}
