//! Cross-module flows: bicategories to forms, forms to decompositions.

use clusterform::bicat::{
    check_axioms, dual_subquotients_form, left_exact_bicat_check, optimality_check,
    synthesize_ejd_form, synthesize_emd_form, two_chain_example, zoo_bicategory, Axiom, Bicategory,
    BicategoryDoc, Side,
};
use clusterform::decomp::{exact_join_check, exact_meet_check, find_exact_decomposition};
use clusterform::factor::{check_orean_factorization, construct_join_noetherian};
use clusterform::formcore::{dual_form, find_isomorphism};
use clusterform::orean::orean;
use clusterform::zoo::{
    equivrel_form, exaq_form, finset_skeleton, groups_category, pointed_finset_skeleton,
    quotients_form, subgroup_form, subsets_form,
};

#[test]
fn both_synthesis_routes_agree_on_sets() {
    let z = finset_skeleton(3);
    let (fs, fe) = (
        orean(&subsets_form(&z)).unwrap(),
        orean(&equivrel_form(&z)).unwrap(),
    );
    let fac = check_orean_factorization(&fs, &fe).unwrap().1.unwrap();
    let from_pair = construct_join_noetherian(&fac).unwrap().form;
    let b = zoo_bicategory("sets", 3).unwrap();
    let from_bicat = synthesize_ejd_form(&b).unwrap().form;
    assert!(find_isomorphism(&from_pair, &from_bicat).found().is_some());
}

#[test]
fn sets_fail_the_direct_battery() {
    let b = zoo_bicategory("sets", 2).unwrap();
    assert!(synthesize_emd_form(&b).is_err());
    assert!(!check_axioms(&b, &Axiom::BATTERY, Side::Direct).all_pass());
}

#[test]
fn pairs_form_decomposes_by_joins_only() {
    let of = orean(&exaq_form(&finset_skeleton(3))).unwrap();
    assert!(exact_join_check(&of).1.is_some());
    assert!(exact_meet_check(&of).1.is_none());
    let (_, found) = find_exact_decomposition(&of);
    assert!(found.unwrap().exact);
}

#[test]
fn dual_of_the_pairs_form_decomposes_by_meets() {
    let of = orean(&dual_form(&exaq_form(&finset_skeleton(2)))).unwrap();
    assert!(exact_meet_check(&of).1.is_some());
}

#[test]
fn pointed_quotients_come_from_the_dual_side() {
    let b = zoo_bicategory("pointed-sets", 3).unwrap();
    assert!(left_exact_bicat_check(&b.opposite()).all_pass());
    let s = synthesize_ejd_form(&b).unwrap();
    let q = quotients_form(&pointed_finset_skeleton(3));
    assert!(find_isomorphism(&s.form, &q).found().is_some());
}

#[test]
fn groups_synthesize_subgroups() {
    let b = zoo_bicategory("groups", 4).unwrap();
    let s = synthesize_emd_form(&b).unwrap();
    assert!(
        find_isomorphism(&s.form, &subgroup_form(&groups_category(4)))
            .found()
            .is_some()
    );
}

#[test]
fn two_chain_structures_reproduce_their_forms() {
    for (b, form) in two_chain_example() {
        assert!(synthesize_emd_form(&b).is_err());
        let s = synthesize_ejd_form(&b).unwrap();
        assert!(
            find_isomorphism(&s.form, &form).found().is_some(),
            "{}",
            form.label()
        );
    }
}

#[test]
fn synthesized_form_sits_inside_dual_subquotients() {
    let b = zoo_bicategory("sets", 2).unwrap();
    let s = synthesize_ejd_form(&b).unwrap();
    let target = dual_subquotients_form(&b).unwrap();
    assert!(optimality_check(&s.form, &target).passed());
}

#[test]
fn bicategory_documents_survive_json() {
    let b = zoo_bicategory("two-chain-132", 0).unwrap();
    let text = serde_json::to_string(&b.to_doc()).unwrap();
    let doc: BicategoryDoc = serde_json::from_str(&text).unwrap();
    let back = Bicategory::from_doc(&doc).unwrap();
    assert_eq!(back.e, b.e);
    assert_eq!(back.m, b.m);
}
