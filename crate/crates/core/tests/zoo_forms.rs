use clusterform::formcore::{find_isomorphism, validate_form, Form};
use clusterform::orean::{check_noetherian, check_orean, classify, special_predicates, OreanForm};
use clusterform::report::Status;
use clusterform::subobjects::{e_quotients_form, epis, m_subobjects_form, monos};
use clusterform::zoo::*;

fn orean_of(form: &Form) -> OreanForm {
    let (r, of) = check_orean(form);
    assert!(r.all_pass(), "{}", r.to_pretty());
    of.unwrap()
}

fn noetherian_verdicts(form: &Form) -> Vec<(String, Status)> {
    let n = check_noetherian(&orean_of(form));
    n.items.iter().map(|i| (i.name.clone(), i.status)).collect()
}

fn status(v: &[(String, Status)], name: &str) -> Status {
    v.iter().find(|(n, _)| n == name).map(|(_, s)| *s).unwrap()
}

#[test]
fn every_catalog_form_is_a_valid_cluster_system() {
    for (name, form) in zoo_catalog() {
        let r = validate_form(&form);
        assert!(r.all_pass(), "{name}: {}", r.to_pretty());
    }
}

#[test]
fn subsets_relations_and_pairs_over_three() {
    let z = finset_skeleton(3);
    let s = noetherian_verdicts(&subsets_form(&z));
    let e = noetherian_verdicts(&equivrel_form(&z));
    let q = noetherian_verdicts(&exaq_form(&z));
    assert_eq!(status(&s, "N1-join"), Status::Fail);
    assert_eq!(status(&s, "N1-meet"), Status::Pass);
    assert_eq!(status(&s, "N2"), Status::Fail);
    assert_eq!(status(&e, "N1-join"), Status::Pass);
    assert_eq!(status(&e, "N2"), Status::Fail);
    assert!(q.iter().all(|(_, st)| *st == Status::Pass), "{q:?}");
}

#[test]
fn named_forms_match_their_subobject_constructions() {
    // At size 1 the map ∅ → 1 is epi inside the truncated category, so
    // quotients only match partitions from size 2 on.
    for n in 2..=3 {
        let z = finset_skeleton(n);
        let subs = m_subobjects_form(&z.cat, &monos(&z.cat)).unwrap();
        let quots = e_quotients_form(&z.cat, &epis(&z.cat)).unwrap();
        assert!(
            find_isomorphism(&subsets_form(&z), &subs).found().is_some(),
            "subsets at {n}"
        );
        assert!(
            find_isomorphism(&equivrel_form(&z), &quots)
                .found()
                .is_some(),
            "relations at {n}"
        );
    }
}

#[test]
fn pairs_fibers_count_subset_partition_pairs() {
    assert_eq!(exaq_form(&finset_skeleton(3)).fiber_sizes(), [1, 2, 5, 15]);
    assert_eq!(
        equivrel_form(&finset_skeleton(3)).fiber_sizes(),
        [1, 1, 2, 5]
    );
}

#[test]
fn palettes_are_antinormal_not_conormal() {
    let z = finset_skeleton(2);
    let of = orean_of(&palettes_form(&z));
    let (flags, _) = special_predicates(&of, &classify(&of));
    assert!(flags.antinormal && !flags.conormal_form);
}

#[test]
fn subgroups_of_small_groups_are_noetherian() {
    let v = noetherian_verdicts(&subgroup_form(&groups_category(4)));
    assert!(
        v.iter()
            .all(|(_, st)| matches!(st, Status::Pass | Status::Skipped)),
        "{v:?}"
    );
}

#[test]
fn unknown_names_are_rejected() {
    assert!(zoo_form("matroids", 3).is_none());
    assert!(ZOO_FORM_NAMES.iter().all(|n| zoo_form(n, 1).is_some()));
}
