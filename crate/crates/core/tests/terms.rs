use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sysf_core::classify::is_proper;
use sysf_core::gen::{normal_term, TypeGen};
use sysf_core::reduce::{
    contract_at, is_normal, leftmost_redex, normal_form, normalize, weak_head_reduce,
    DEFAULT_NORMALIZE_FUEL, DEFAULT_WHNF_FUEL,
};
use sysf_core::{parse_term, parse_type, Status, Strategy, Term};

fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// A term that may contain redexes: normal pieces glued by applications and
/// abstractions.
fn any_term(rng: &mut ChaCha8Rng, size: usize, free: &[String]) -> Term {
    if size <= 3 || rng.gen_bool(0.4) {
        return normal_term(rng, size.max(1), free);
    }
    let left = rng.gen_range(1..size - 1);
    let f = any_term(rng, left, free);
    let f = if rng.gen_bool(0.5) {
        Term::abs("x", f)
    } else {
        f
    };
    Term::app(f, any_term(rng, size - 1 - left, free))
}

proptest! {
    #[test]
    fn printed_terms_parse_back(seed in any::<u64>(), size in 1usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = any_term(&mut rng, size, &names(&["a", "b", "x"]));
        let back = parse_term(&t.to_string()).unwrap();
        prop_assert!(back.alpha_eq(&t), "{} vs {}", t, back);
    }

    #[test]
    fn printed_types_parse_back(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = TypeGen::default().proper(&mut rng, 14);
        let back = parse_type(&a.to_string()).unwrap();
        prop_assert!(back.alpha_eq(&a));
    }

    #[test]
    fn free_variables_of_substitution(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let free = names(&["x", "y", "a"]);
        let t = any_term(&mut rng, 12, &free);
        let u = any_term(&mut rng, 6, &names(&["y", "b"]));
        let got = t.subst("x", &u).free_vars();
        let expected: BTreeSet<String> = if t.has_free("x") {
            let mut s = t.free_vars();
            s.remove("x");
            s.extend(u.free_vars());
            s
        } else {
            t.free_vars()
        };
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn type_substitution_keeps_properness(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = TypeGen::default();
        let a = g.proper(&mut rng, 12);
        let b = g.proper(&mut rng, 6);
        prop_assert!(is_proper(&a.subst("X", &b)));
    }

    #[test]
    fn reduction_is_deterministic(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = any_term(&mut rng, 16, &names(&["a", "b"]));
        prop_assert_eq!(normalize(&t, 200), normalize(&t, 200));
        prop_assert_eq!(weak_head_reduce(&t, 200), weak_head_reduce(&t, 200));
    }

    #[test]
    fn normal_terms_take_no_steps(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = normal_term(&mut rng, 20, &names(&["a"]));
        let tr = normalize(&t, 0);
        prop_assert_eq!(tr.status, Status::Normalized);
        prop_assert!(tr.steps.is_empty());
    }

    #[test]
    fn weak_head_steps_are_leftmost_steps(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = any_term(&mut rng, 16, &names(&["a", "b"]));
        let tr = weak_head_reduce(&t, 50);
        let mut cur = t.clone();
        for step in &tr.steps {
            prop_assert_eq!(step.strategy, Strategy::WeakHead);
            prop_assert_eq!(leftmost_redex(&cur), Some(step.path.clone()));
            cur = contract_at(&cur, &step.path).unwrap();
            prop_assert!(cur.alpha_eq(&step.result));
        }
        prop_assert!(tr.replays());
    }

    #[test]
    fn traces_replay(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = any_term(&mut rng, 16, &names(&["a"]));
        let tr = normalize(&t, 100);
        prop_assert!(tr.replays());
        if tr.status == Status::Normalized {
            prop_assert!(is_normal(tr.final_term()));
        }
    }

    /// Substituting `λx₁...λxₙ.α` for a free variable of a normal term
    /// leaves α free in the normal form.
    #[test]
    fn alpha_survives_constant_substitution(seed in any::<u64>(), n in 0usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = normal_term(&mut rng, 18, &names(&["x", "a"]));
        prop_assume!(t.has_free("x"));
        let k = constant(n);
        let v = normal_form(&t.subst("x", &k), DEFAULT_NORMALIZE_FUEL).unwrap();
        prop_assert!(v.has_free("alpha"), "{} gave {}", t, v);
    }

    /// A closed normal form after simultaneous constant substitution means
    /// none of the substituted variables occurred.
    #[test]
    fn closed_result_means_unused_variables(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let xs = names(&["x1", "x2", "x3"]);
        let t = normal_term(&mut rng, 14, &xs);
        let pairs: Vec<(String, Term)> = xs
            .iter()
            .map(|x| (x.clone(), constant(rng.gen_range(0..=3))))
            .collect();
        let v = normal_form(&t.subst_many(&pairs), DEFAULT_NORMALIZE_FUEL).unwrap();
        if v.is_closed() {
            prop_assert!(xs.iter().all(|x| !t.has_free(x)));
        } else {
            prop_assert!(xs.iter().any(|x| t.has_free(x)));
        }
    }
}

fn constant(n: usize) -> Term {
    let binders: Vec<String> = (1..=n).map(|i| format!("y{i}")).collect();
    Term::abs_many(binders, Term::var("alpha"))
}

#[test]
fn omega_runs_out_of_fuel() {
    let omega = parse_term("(\\x. x x) (\\x. x x)").unwrap();
    assert_eq!(normalize(&omega, DEFAULT_NORMALIZE_FUEL).status, Status::FuelExhausted);
    assert_eq!(weak_head_reduce(&omega, DEFAULT_WHNF_FUEL).status, Status::FuelExhausted);
    assert_eq!(normalize(&omega, DEFAULT_NORMALIZE_FUEL).steps.len(), DEFAULT_NORMALIZE_FUEL);
}

#[test]
fn weak_head_stops_under_lambda() {
    let t = parse_term("(\\x. \\y. (\\z. z) x) a").unwrap();
    let tr = weak_head_reduce(&t, 10);
    assert_eq!(tr.status, Status::WhnfReached);
    assert!(tr.final_term().alpha_eq(&parse_term("\\y. (\\z. z) a").unwrap()));
}
