//! Forms generated by classes of morphisms: `M`-subobjects, `E`-quotients and
//! `(E, M)`-subquotients. Clusters are equivalence classes under mutual
//! factorization, each named after its least representative.

use std::sync::Arc;

use crate::fincat::{
    all_flags, extensions_in, inverse, lifts_in, CatView, FinCategory, MorId, ObjId,
};
use crate::formcore::{Form, FormError};

/// Members of `M` must be monos, include every iso, and stay in `M` after
/// precomposing with an iso. `mono = false` checks the dual conditions for `E`.
pub fn check_class(c: &FinCategory, class: &[bool], mono: bool) -> Result<(), FormError> {
    let what = if mono { "M" } else { "E" };
    if class.len() != c.n_morphisms() {
        return Err(FormError::ClassPrecondition(format!(
            "{what} must flag every morphism"
        )));
    }
    let flags = all_flags(c);
    let isos: Vec<MorId> = (0..c.n_morphisms())
        .filter(|&f| inverse(c, f).is_some())
        .collect();
    for f in (0..c.n_morphisms()).filter(|&f| class[f]) {
        let ok = if mono { flags[f].mono } else { flags[f].epi };
        if !ok {
            return Err(FormError::ClassPrecondition(format!(
                "{} is in {what} but is not {}",
                c.morphism_name(f),
                if mono {
                    "a monomorphism"
                } else {
                    "an epimorphism"
                }
            )));
        }
        for &u in &isos {
            let g = match mono {
                true if c.cod(u) == c.dom(f) => c.comp(f, u),
                false if c.dom(u) == c.cod(f) => c.comp(u, f),
                _ => continue,
            };
            if !class[g] {
                return Err(FormError::ClassPrecondition(format!(
                    "{what} is not closed under composing {} with the isomorphism {}",
                    c.morphism_name(f),
                    c.morphism_name(u)
                )));
            }
        }
    }
    if let Some(&u) = isos.iter().find(|&&u| !class[u]) {
        return Err(FormError::ClassPrecondition(format!(
            "the isomorphism {} is missing from {what}",
            c.morphism_name(u)
        )));
    }
    Ok(())
}

/// Groups `members[x]` (already in representative order) into classes of
/// mutual `ge` over identities, then builds the form.
fn class_form<T: Copy>(
    c: &Arc<FinCategory>,
    label: &str,
    members: Vec<Vec<T>>,
    name: impl Fn(T) -> String,
    ge: impl Fn(MorId, T, T) -> bool,
) -> Form {
    let reps: Vec<Vec<T>> = members
        .iter()
        .enumerate()
        .map(|(x, row)| {
            let id = c.id(x);
            let mut reps: Vec<T> = Vec::new();
            for &p in row {
                if !reps.iter().any(|&q| ge(id, p, q) && ge(id, q, p)) {
                    reps.push(p);
                }
            }
            reps
        })
        .collect();
    let names = reps
        .iter()
        .map(|row| row.iter().map(|&p| name(p)).collect())
        .collect();
    let cat = c.clone();
    Form::from_fn(c.clone(), label, names, |f, b, a| {
        ge(f, reps[cat.cod(f)][b], reps[cat.dom(f)][a])
    })
}

/// Clusters over `X` are `M`-morphisms into `X` up to isomorphism;
/// `[n] ≥_f [m]` iff `f∘m` factors through `n`.
pub fn m_subobjects_form(c: &Arc<FinCategory>, m_class: &[bool]) -> Result<Form, FormError> {
    check_class(c, m_class, true)?;
    let members: Vec<Vec<MorId>> = (0..c.n_objects())
        .map(|x| c.morphisms_into(x).filter(|&m| m_class[m]).collect())
        .collect();
    let cc = c.clone();
    Ok(class_form(
        c,
        "M-subobjects",
        members,
        |m| c.morphism_name(m).to_string(),
        move |f, n, m| !lifts_in(&*cc, n, cc.comp(f, m)).is_empty(),
    ))
}

/// Clusters over `X` are `E`-morphisms out of `X` up to isomorphism;
/// `[e'] ≥_f [e]` iff `e'∘f` factors through `e`.
pub fn e_quotients_form(c: &Arc<FinCategory>, e_class: &[bool]) -> Result<Form, FormError> {
    check_class(c, e_class, false)?;
    let members: Vec<Vec<MorId>> = (0..c.n_objects())
        .map(|x| c.morphisms_from(x).filter(|&e| e_class[e]).collect())
        .collect();
    let cc = c.clone();
    Ok(class_form(
        c,
        "E-quotients",
        members,
        |e| c.morphism_name(e).to_string(),
        move |f, e2, e| !extensions_in(&*cc, e, cc.comp(e2, f)).is_empty(),
    ))
}

/// A span `X ← D → Q` with the left leg in `M` and the right leg in `E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub e: MorId,
    pub m: MorId,
}

/// All spans over `x`, ordered by `(e, m)`.
pub fn spans_over(c: &FinCategory, e_class: &[bool], m_class: &[bool], x: ObjId) -> Vec<Span> {
    let mut out: Vec<Span> = c
        .morphisms_into(x)
        .filter(|&m| m_class[m])
        .flat_map(|m| {
            c.morphisms_from(c.dom(m))
                .filter(|&e| e_class[e])
                .map(move |e| Span { e, m })
        })
        .collect();
    out.sort();
    out
}

/// `[e',m'] ≥_f [e,m]` iff some `u`, `s` give `m'∘u = f∘m` and `e'∘u = s∘e`.
pub fn span_ge(c: &FinCategory, f: MorId, hi: Span, lo: Span) -> bool {
    lifts_in(c, hi.m, c.comp(f, lo.m))
        .into_iter()
        .any(|u| !extensions_in(c, lo.e, c.comp(hi.e, u)).is_empty())
}

/// The `(E, M)`-subquotient form, with its clusters' least spans.
pub fn subquotients_with_spans(
    c: &Arc<FinCategory>,
    e_class: &[bool],
    m_class: &[bool],
) -> Result<(Form, Vec<Vec<Span>>), FormError> {
    check_class(c, m_class, true)?;
    check_class(c, e_class, false)?;
    let members: Vec<Vec<Span>> = (0..c.n_objects())
        .map(|x| spans_over(c, e_class, m_class, x))
        .collect();
    let cc = c.clone();
    let form = class_form(
        c,
        "subquotients",
        members,
        |s| format!("[{},{}]", c.morphism_name(s.e), c.morphism_name(s.m)),
        move |f, hi, lo| span_ge(&cc, f, hi, lo),
    );
    let spans = (0..c.n_objects())
        .map(|x| {
            let all = spans_over(c, e_class, m_class, x);
            let id = c.id(x);
            let mut reps: Vec<Span> = Vec::new();
            for p in all {
                if !reps
                    .iter()
                    .any(|&q| span_ge(c, id, p, q) && span_ge(c, id, q, p))
                {
                    reps.push(p);
                }
            }
            reps
        })
        .collect();
    Ok((form, spans))
}

pub fn subquotients_form(
    c: &Arc<FinCategory>,
    e_class: &[bool],
    m_class: &[bool],
) -> Result<Form, FormError> {
    subquotients_with_spans(c, e_class, m_class).map(|(f, _)| f)
}

/// Membership vectors for monos, epis and identities.
pub fn monos(c: &FinCategory) -> Vec<bool> {
    all_flags(c).iter().map(|f| f.mono).collect()
}

pub fn epis(c: &FinCategory) -> Vec<bool> {
    all_flags(c).iter().map(|f| f.epi).collect()
}

/// Identities together with all isomorphisms, the smallest admissible class.
pub fn isos(c: &FinCategory) -> Vec<bool> {
    (0..c.n_morphisms())
        .map(|f| inverse(c, f).is_some())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formcore::{find_isomorphism, validate_form};
    use crate::zoo::{chain_category, equivrel_form, finset_skeleton, subsets_form};

    #[test]
    fn monos_give_subsets() {
        let z = finset_skeleton(2);
        let f = m_subobjects_form(&z.cat, &monos(&z.cat)).unwrap();
        assert!(validate_form(&f).all_pass());
        assert!(find_isomorphism(&f, &subsets_form(&z)).found().is_some());
    }

    #[test]
    fn epis_give_equivalence_relations() {
        let z = finset_skeleton(3);
        let f = e_quotients_form(&z.cat, &epis(&z.cat)).unwrap();
        assert_eq!(f.fiber_sizes(), vec![1, 1, 2, 5]);
        assert!(find_isomorphism(&f, &equivrel_form(&z)).found().is_some());
    }

    #[test]
    fn trivial_legs_collapse_subquotients() {
        let z = finset_skeleton(2);
        let (m, e, i) = (monos(&z.cat), epis(&z.cat), isos(&z.cat));
        let sub = subquotients_form(&z.cat, &i, &m).unwrap();
        assert!(
            find_isomorphism(&sub, &m_subobjects_form(&z.cat, &m).unwrap())
                .found()
                .is_some()
        );
        let quo = subquotients_form(&z.cat, &e, &i).unwrap();
        assert!(
            find_isomorphism(&quo, &e_quotients_form(&z.cat, &e).unwrap())
                .found()
                .is_some()
        );
    }

    #[test]
    fn class_preconditions_are_enforced() {
        let z = finset_skeleton(2);
        let all = vec![true; z.cat.n_morphisms()];
        assert!(matches!(
            m_subobjects_form(&z.cat, &all),
            Err(FormError::ClassPrecondition(_))
        ));
        let mut m = monos(&z.cat);
        m[z.cat.id(1)] = false;
        assert!(m_subobjects_form(&z.cat, &m).is_err());
    }

    #[test]
    fn chain_subobjects_are_initial_segments() {
        let c = Arc::new(chain_category(3));
        let f = m_subobjects_form(&c, &vec![true; c.n_morphisms()]).unwrap();
        assert_eq!(f.fiber_sizes(), vec![1, 2, 3]);
    }
}
