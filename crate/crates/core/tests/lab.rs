use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sysf_core::classify::{bool_type, id_type, mk_list, mk_product, mk_sum, nat_type};
use sysf_core::gen::{normal_terms_up_to, TypeGen};
use sysf_core::lab::{
    alpha_classes, enumerate_f0, probe_output, probe_output_with_witnesses, ProbeVerdict,
    SearchBudget,
};
use sysf_core::typing::{check_derivation_f, check_f0};
use sysf_core::witness::d_output_witness;
use sysf_core::{Context, Term, Type, ATOM_O, DEFAULT_ALPHA};

fn alpha_ctx() -> Context {
    Context::new().with(DEFAULT_ALPHA, Type::atom(ATOM_O)).unwrap()
}

/// Brute force over all normal terms against the goal-directed search,
/// both cut at `size` nodes.
fn agree(ctx: &Context, goal: &Type, size: usize) {
    let free: Vec<String> = ctx.names().map(String::from).collect();
    let brute: Vec<Term> = normal_terms_up_to(size, &free)
        .into_iter()
        .filter(|t| check_f0(ctx, t, goal).unwrap())
        .collect();
    let budget = SearchBudget::new(size + 3, 1_000_000).unwrap();
    let found = enumerate_f0(ctx, goal, budget);
    assert!(found.complete);
    let small: Vec<&Term> = found.terms.iter().filter(|t| t.size() <= size).collect();
    assert_eq!(alpha_classes(&brute), alpha_classes(small), "{goal}");
}

#[test]
fn search_matches_brute_force() {
    let empty = Context::new();
    agree(&empty, &id_type(), 7);
    agree(&empty, &bool_type(), 7);
    agree(&alpha_ctx(), &Type::atom(ATOM_O), 7);
    agree(&empty, &nat_type(), 7);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn search_matches_brute_force_on_random_goals(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = TypeGen { free: vec![], ..TypeGen::default() }.with_atom_o();
        let goal = g.proper(&mut rng, 7);
        agree(&alpha_ctx(), &goal, 5);
    }
}

#[test]
fn encodings_of_inputs_have_no_alpha_inhabitants() {
    let b = bool_type();
    for s in [mk_product(&b, &b), mk_sum(&b, &b), mk_list(&b)] {
        let v = probe_output(&s, SearchBudget::depth(7)).unwrap();
        assert!(!v.is_counterexample(), "{s}");
    }
}

#[test]
fn counterexamples_carry_valid_evidence() {
    let o = Type::atom(ATOM_O);
    for s in [o.clone(), Type::arrow(bool_type(), o.clone())] {
        let ProbeVerdict::Counterexample { term, evidence } =
            probe_output(&s, SearchBudget::depth(4)).unwrap()
        else {
            panic!("{s} should have an alpha inhabitant");
        };
        assert_eq!(check_derivation_f(&evidence), Ok(()));
        assert!(term.has_free(DEFAULT_ALPHA));
    }
    let v = probe_output_with_witnesses(
        &sysf_core::classify::d_type(),
        SearchBudget::depth(4),
        DEFAULT_ALPHA,
        &[d_output_witness()],
    )
    .unwrap();
    assert!(v.is_counterexample());
}

/// An α-inhabitant of `F` gives one of `E → F` by a dummy abstraction.
#[test]
fn counterexamples_lift_through_arrows() {
    let o = Type::atom(ATOM_O);
    for f in [o.clone(), Type::arrow(o.clone(), o.clone())] {
        let ProbeVerdict::Counterexample { term, .. } =
            probe_output(&f, SearchBudget::depth(4)).unwrap()
        else {
            panic!("{f} should have an alpha inhabitant");
        };
        for e in [id_type(), bool_type(), nat_type()] {
            let lifted = Term::abs("z", term.clone());
            let ty = Type::arrow(e.clone(), f.clone());
            assert_eq!(check_f0(&alpha_ctx(), &lifted, &ty), Ok(true), "{lifted} : {ty}");
            assert!(probe_output(&ty, SearchBudget::depth(5)).unwrap().is_counterexample());
        }
    }
}
