//! Finite posets and bounded lattices, the fibers of an orean form.

use serde::{Deserialize, Serialize};

use crate::report::{CheckItem, CheckReport, Status, Tally, Witness};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinPoset {
    n: usize,
    leq: Vec<bool>,
}

impl FinPoset {
    /// `leq` is row-major: `leq[a * n + b]` means `a ≤ b`.
    pub fn new(n: usize, leq: Vec<bool>) -> Self {
        assert_eq!(leq.len(), n * n, "leq matrix must be n × n");
        FinPoset { n, leq }
    }

    pub fn from_fn(n: usize, mut le: impl FnMut(usize, usize) -> bool) -> Self {
        let mut leq = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                leq.push(le(a, b));
            }
        }
        FinPoset { n, leq }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    /// Reflexivity, antisymmetry, transitivity, one item each.
    pub fn check_poset(&self) -> CheckReport {
        let n = self.n;
        let mut report = CheckReport::new("poset");
        let mut refl = Tally::new("reflexive");
        for a in 0..n {
            refl.check(self.leq(a, a), || Witness::new(format!("{a} ≰ {a}")));
        }
        report.push(refl.finish());
        let mut anti = Tally::new("antisymmetric");
        for a in 0..n {
            for b in a + 1..n {
                anti.check(!(self.leq(a, b) && self.leq(b, a)), || {
                    Witness::new(format!("{a} ≤ {b} ≤ {a} with {a} ≠ {b}"))
                });
            }
        }
        report.push(anti.finish());
        let mut trans = Tally::new("transitive");
        for a in 0..n {
            for b in 0..n {
                if !self.leq(a, b) {
                    continue;
                }
                for c in 0..n {
                    if self.leq(b, c) {
                        trans.check(self.leq(a, c), || {
                            Witness::new(format!("{a} ≤ {b} ≤ {c} but {a} ≰ {c}"))
                        });
                    }
                }
            }
        }
        report.push(trans.finish());
        report
    }

    pub fn dual(&self) -> FinPoset {
        FinPoset::from_fn(self.n, |a, b| self.leq(b, a))
    }
}

/// Result of asking for the least or greatest member of a subset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extremum {
    Exists(usize),
    /// The subset has several minimal (maximal) members and no minimum (maximum).
    OnlyExtremal(Vec<usize>),
    Empty,
}

impl Extremum {
    pub fn ok(&self) -> Option<usize> {
        match self {
            Extremum::Exists(x) => Some(*x),
            _ => None,
        }
    }
}

pub fn least_of(p: &FinPoset, subset: &[usize]) -> Extremum {
    extremum(subset, |a, b| p.leq(a, b))
}

pub fn greatest_of(p: &FinPoset, subset: &[usize]) -> Extremum {
    extremum(subset, |a, b| p.leq(b, a))
}

fn extremum(subset: &[usize], below: impl Fn(usize, usize) -> bool) -> Extremum {
    if subset.is_empty() {
        return Extremum::Empty;
    }
    if let Some(&m) = subset
        .iter()
        .find(|&&m| subset.iter().all(|&s| below(m, s)))
    {
        return Extremum::Exists(m);
    }
    let minimal = subset
        .iter()
        .copied()
        .filter(|&m| subset.iter().all(|&s| s == m || !below(s, m)))
        .collect();
    Extremum::OnlyExtremal(minimal)
}

/// Total tables of a bounded lattice on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeTables {
    pub n: usize,
    pub top: usize,
    pub bottom: usize,
    pub meet: Vec<usize>,
    pub join: Vec<usize>,
}

impl LatticeTables {
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b]
    }

    pub fn dual(&self) -> LatticeTables {
        LatticeTables {
            n: self.n,
            top: self.bottom,
            bottom: self.top,
            meet: self.join.clone(),
            join: self.meet.clone(),
        }
    }
}

/// Checks that `p` is a poset and a bounded lattice; on success returns the
/// tables. Poset-law failures are reported under `poset.*`, lattice failures
/// under `top`, `bottom`, `meets`, `joins`.
pub fn check_bounded_lattice(p: &FinPoset) -> (CheckReport, Option<LatticeTables>) {
    let mut report = CheckReport::new("bounded lattice");
    let poset = p.check_poset();
    let poset_ok = poset.all_pass();
    report.absorb("poset", poset);
    if !poset_ok {
        for name in ["top", "bottom", "meets", "joins"] {
            report.push(CheckItem::with_status(name, Status::Skipped, "not a poset"));
        }
        return (report, None);
    }
    let n = p.len();
    let all: Vec<usize> = (0..n).collect();
    let top = greatest_of(p, &all);
    let bottom = least_of(p, &all);
    report.push(CheckItem::from_bool(
        "top",
        top.ok().is_some(),
        format!("no greatest element: {top:?}"),
    ));
    report.push(CheckItem::from_bool(
        "bottom",
        bottom.ok().is_some(),
        format!("no least element: {bottom:?}"),
    ));

    let mut meet = vec![0; n * n];
    let mut join = vec![0; n * n];
    let mut meets = Tally::new("meets");
    let mut joins = Tally::new("joins");
    for a in 0..n {
        for b in 0..n {
            let lower: Vec<usize> = all
                .iter()
                .copied()
                .filter(|&x| p.leq(x, a) && p.leq(x, b))
                .collect();
            let upper: Vec<usize> = all
                .iter()
                .copied()
                .filter(|&x| p.leq(a, x) && p.leq(b, x))
                .collect();
            let m = greatest_of(p, &lower);
            let j = least_of(p, &upper);
            meets.check(m.ok().is_some(), || {
                Witness::new(format!("{a} ∧ {b} does not exist"))
            });
            joins.check(j.ok().is_some(), || {
                Witness::new(format!("{a} ∨ {b} does not exist"))
            });
            meet[a * n + b] = m.ok().unwrap_or(usize::MAX);
            join[a * n + b] = j.ok().unwrap_or(usize::MAX);
        }
    }
    report.push(meets.finish());
    report.push(joins.finish());
    let tables = match (report.all_pass(), top.ok(), bottom.ok()) {
        (true, Some(top), Some(bottom)) => Some(LatticeTables {
            n,
            top,
            bottom,
            meet,
            join,
        }),
        _ => None,
    };
    (report, tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn powerset(k: usize) -> FinPoset {
        FinPoset::from_fn(1 << k, |a, b| a & !b == 0)
    }

    #[test]
    fn singleton_is_a_lattice() {
        let (r, t) = check_bounded_lattice(&FinPoset::from_fn(1, |_, _| true));
        assert!(r.all_pass());
        let t = t.unwrap();
        assert_eq!(t.top, t.bottom);
    }

    #[test]
    fn antichain_has_no_top() {
        let (r, t) = check_bounded_lattice(&FinPoset::from_fn(2, |a, b| a == b));
        assert_eq!(r.status_of("top"), Some(Status::Fail));
        assert!(t.is_none());
    }

    #[test]
    fn powerset_meets_are_intersections() {
        let (r, t) = check_bounded_lattice(&powerset(2));
        assert!(r.all_pass());
        let t = t.unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(t.meet(a, b), a & b);
                assert_eq!(t.join(a, b), a | b);
            }
        }
        assert_eq!((t.top, t.bottom), (3, 0));
    }

    #[test]
    fn poset_failure_is_separate() {
        let (r, _) = check_bounded_lattice(&FinPoset::from_fn(2, |_, _| true));
        assert_eq!(r.status_of("poset.antisymmetric"), Some(Status::Fail));
        assert_eq!(r.status_of("meets"), Some(Status::Skipped));
    }

    #[test]
    fn least_distinguishes_minimal_from_minimum() {
        let p = powerset(2);
        assert_eq!(least_of(&p, &[1, 3]), Extremum::Exists(1));
        assert_eq!(least_of(&p, &[1, 2]), Extremum::OnlyExtremal(vec![1, 2]));
        assert_eq!(least_of(&p, &[]), Extremum::Empty);
        assert_eq!(greatest_of(&p, &[0, 1, 2, 3]), Extremum::Exists(3));
    }

    /// Divisibility on the divisors of `n` is a lattice (gcd / lcm).
    fn divisors(n: usize) -> Vec<usize> {
        (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
    }

    proptest! {
        #[test]
        fn lattice_tables_satisfy_the_laws(n in 1usize..=60) {
            let ds = divisors(n);
            let p = FinPoset::from_fn(ds.len(), |a, b| ds[b].is_multiple_of(ds[a]));
            let (r, t) = check_bounded_lattice(&p);
            prop_assert!(r.all_pass());
            let t = t.unwrap();
            let k = ds.len();
            for a in 0..k {
                for b in 0..k {
                    prop_assert_eq!(t.meet(a, b), t.meet(b, a));
                    prop_assert_eq!(t.join(a, b), t.join(b, a));
                    prop_assert_eq!(t.meet(a, t.join(a, b)), a);
                    prop_assert_eq!(t.join(a, t.meet(a, b)), a);
                    for c in 0..k {
                        prop_assert_eq!(t.meet(a, t.meet(b, c)), t.meet(t.meet(a, b), c));
                        prop_assert_eq!(t.join(a, t.join(b, c)), t.join(t.join(a, b), c));
                    }
                }
            }
        }

        #[test]
        fn least_of_is_below_and_inside(mask in 0usize..256, k in 1usize..=3) {
            let p = powerset(k);
            let subset: Vec<usize> = (0..1 << k).filter(|i| mask >> i & 1 == 1).collect();
            if let Extremum::Exists(m) = least_of(&p, &subset) {
                prop_assert!(subset.contains(&m));
                for &s in &subset {
                    prop_assert!(p.leq(m, s));
                }
            }
        }
    }
}
