//! Randomized invariants over the zoo forms.

use std::sync::Arc;

use clusterform::fincat::CatView;
use clusterform::formcore::{dual_form, find_isomorphism, validate_form, Form, FormDoc};
use clusterform::orean::check_orean;
use clusterform::zoo::zoo_form;
use proptest::prelude::*;
use proptest::sample::select;

const SMALL: [&str; 5] = ["subsets", "equivrel", "exaq", "quotients", "two-chain-123"];

fn form(name: &str) -> Form {
    zoo_form(name, 2).unwrap()
}

/// Flips one relation entry chosen by three raw indices.
fn perturb(f: &Form, m: usize, b: usize, a: usize) -> Form {
    let c = f.base();
    let m = m % c.n_morphisms();
    let (rows, cols) = (f.fiber_size(c.cod(m)), f.fiber_size(c.dom(m)));
    let (b, a) = (b % rows, a % cols);
    f.with_entry(m, b, a, !f.ge(m, b, a))
}

/// Relabels clusters by rotating each fiber by `shift`.
fn rotate(f: &Form, shift: usize) -> Form {
    let c = f.base();
    let perm = |x: usize, a: usize| (a + shift) % f.fiber_size(x);
    let names = (0..f.n_objects())
        .map(|x| {
            let k = f.fiber_size(x);
            let mut row = vec![String::new(); k];
            for a in 0..k {
                row[perm(x, a)] = f.cluster_name(x, a).to_string();
            }
            row
        })
        .collect();
    let inv =
        |x: usize, a: usize| (a + f.fiber_size(x) - shift % f.fiber_size(x)) % f.fiber_size(x);
    Form::from_fn(Arc::new(c.clone()), "rotated", names, |m, b, a| {
        f.ge(m, inv(c.cod(m), b), inv(c.dom(m), a))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dual_is_an_involution(name in select(&SMALL[..]), m in 0usize..64, b in 0usize..16, a in 0usize..16) {
        let f = perturb(&form(name), m, b, a);
        let back = dual_form(&dual_form(&f)).with_label(f.label());
        prop_assert_eq!(back, f);
    }

    #[test]
    fn validity_is_self_dual(name in select(&SMALL[..]), m in 0usize..64, b in 0usize..16, a in 0usize..16) {
        let f = perturb(&form(name), m, b, a);
        prop_assert_eq!(validate_form(&f).all_pass(), validate_form(&dual_form(&f)).all_pass());
    }

    #[test]
    fn orean_verdict_is_self_dual(name in select(&SMALL[..]), m in 0usize..64, b in 0usize..16, a in 0usize..16) {
        let f = perturb(&form(name), m, b, a);
        prop_assert_eq!(check_orean(&f).1.is_some(), check_orean(&dual_form(&f)).1.is_some());
    }

    #[test]
    fn documents_round_trip(name in select(&SMALL[..]), m in 0usize..64, b in 0usize..16, a in 0usize..16) {
        let f = perturb(&form(name), m, b, a);
        let text = serde_json::to_string(&f.to_doc()).unwrap();
        let doc: FormDoc = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(Form::from_doc(&doc).unwrap(), f);
    }

    #[test]
    fn relabellings_are_isomorphic_both_ways(name in select(&SMALL[..]), shift in 1usize..5) {
        let f = form(name);
        let g = rotate(&f, shift);
        prop_assert!(validate_form(&g).all_pass());
        prop_assert!(find_isomorphism(&f, &g).found().is_some());
        prop_assert!(find_isomorphism(&g, &f).found().is_some());
    }
}
