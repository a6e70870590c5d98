use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sysf_core::classify::{
    ends_with, godel_translate, leaf_count, lg, mk_list, mk_product, mk_sum, polarity,
};
use sysf_core::gen::TypeGen;
use sysf_core::Type;

fn forall_positive(a: &Type) -> bool {
    polarity(a).forall_positive
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn encodings_keep_positivity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = TypeGen::default();
        let a = g.proper(&mut rng, 8);
        let b = g.proper(&mut rng, 8);
        if forall_positive(&a) && forall_positive(&b) {
            prop_assert!(forall_positive(&mk_product(&a, &b)), "{} /\\ {}", a, b);
            prop_assert!(forall_positive(&mk_sum(&a, &b)), "{} \\/ {}", a, b);
            prop_assert!(forall_positive(&mk_list(&a)), "List {}", a);
        }
    }

    #[test]
    fn ends_with_is_stable_under_prefixes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = TypeGen::default().with_atom_o();
        let a = g.proper(&mut rng, 8);
        let b = g.proper(&mut rng, 5);
        for k in ["X", "O"] {
            if ends_with(&a, k) {
                prop_assert!(ends_with(&Type::arrow(b.clone(), a.clone()), k));
                if a.has_free("Y") {
                    prop_assert!(ends_with(&Type::forall("Y", a.clone()), k));
                }
            }
        }
        prop_assert!(!ends_with(&Type::forall("X", Type::var("X")), "X"));
    }

    #[test]
    fn godel_length_law(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = TypeGen::default().with_atom_o();
        let a = g.proper(&mut rng, 12);
        let star = godel_translate(&a).unwrap();
        prop_assert_eq!(lg(&star), lg(&a) + leaf_count(&a));
    }

    #[test]
    fn lg_counts_arrows(seed in any::<u64>(), n in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = TypeGen::default();
        let args: Vec<Type> = (0..n).map(|_| g.proper(&mut rng, 4)).collect();
        let tail = g.proper(&mut rng, 4);
        let total = lg(&tail) + args.iter().map(lg).sum::<usize>() + n;
        prop_assert_eq!(lg(&Type::arrows(args, tail)), total);
    }

    /// Built from `K` by `n` steps `B → ·` (with quantifiers in between),
    /// a type ends with `K` and has at least `n` arrows.
    #[test]
    fn generated_endings(seed in any::<u64>(), n in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = TypeGen::default();
        let mut t = Type::var("X");
        for _ in 0..n {
            t = Type::arrow(g.proper(&mut rng, 4), t);
            if rng.gen_bool(0.3) && t.has_free("Y") {
                t = Type::forall("Y", t);
            }
        }
        prop_assert!(ends_with(&t, "X"));
        prop_assert!(lg(&t) >= n);
    }
}
