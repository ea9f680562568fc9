//! Check reports: a verdict per named axiom plus a handful of witnesses.
//!
//! Every checker in the crate returns a [`CheckReport`]. Items are kept in
//! insertion order so that serialized reports are byte-stable across runs.

use serde::{Deserialize, Serialize};

/// Schema tag written into every serialized report.
pub const REPORT_SCHEMA: &str = "report/1";

/// Witnesses kept per item; further failures are only counted.
pub const MAX_WITNESSES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// The input could not be checked at all (malformed tables, shape errors).
    Error,
    /// A search ran out of nodes before reaching a verdict.
    BudgetExhausted,
    /// A precondition for the item did not hold, so it was not evaluated.
    Skipped,
}

impl Status {
    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

/// A concrete instance violating (or, for existence claims, realising) a law.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub detail: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub objects: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<usize>,
    /// `(object, cluster)` pairs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clusters: Vec<(usize, usize)>,
}

impl Witness {
    pub fn new(detail: impl Into<String>) -> Self {
        Witness {
            detail: detail.into(),
            objects: Vec::new(),
            morphisms: Vec::new(),
            clusters: Vec::new(),
        }
    }

    pub fn objects(mut self, objs: &[usize]) -> Self {
        self.objects.extend_from_slice(objs);
        self
    }

    pub fn morphisms(mut self, mors: &[usize]) -> Self {
        self.morphisms.extend_from_slice(mors);
        self
    }

    pub fn clusters(mut self, cls: &[(usize, usize)]) -> Self {
        self.clusters.extend_from_slice(cls);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckItem {
    pub name: String,
    pub status: Status,
    /// Number of law instances examined.
    pub instances: u64,
    /// Number of failing instances (may exceed the number of witnesses).
    pub failures: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckItem {
    pub fn pass(name: impl Into<String>, instances: u64) -> Self {
        CheckItem {
            name: name.into(),
            status: Status::Pass,
            instances,
            failures: 0,
            witnesses: Vec::new(),
            note: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: Witness) -> Self {
        CheckItem {
            name: name.into(),
            status: Status::Fail,
            instances: 1,
            failures: 1,
            witnesses: vec![witness],
            note: None,
        }
    }

    pub fn with_status(name: impl Into<String>, status: Status, note: impl Into<String>) -> Self {
        CheckItem {
            name: name.into(),
            status,
            instances: 0,
            failures: 0,
            witnesses: Vec::new(),
            note: Some(note.into()),
        }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        if ok {
            CheckItem::pass(name, 1)
        } else {
            CheckItem::fail(name, Witness::new(detail))
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status.is_pass()
    }
}

/// Accumulates instances of one law and produces a [`CheckItem`].
#[derive(Debug)]
pub struct Tally {
    item: CheckItem,
}

impl Tally {
    pub fn new(name: impl Into<String>) -> Self {
        Tally {
            item: CheckItem::pass(name, 0),
        }
    }

    /// Records one instance; the witness closure runs only on failure.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> Witness) -> bool {
        self.item.instances += 1;
        if !ok {
            self.item.failures += 1;
            self.item.status = Status::Fail;
            if self.item.witnesses.len() < MAX_WITNESSES {
                self.item.witnesses.push(witness());
            }
        }
        ok
    }

    pub fn failed(&self) -> bool {
        self.item.failures > 0
    }

    pub fn finish(self) -> CheckItem {
        self.item
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub schema: String,
    pub subject: String,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new(subject: impl Into<String>) -> Self {
        CheckReport {
            schema: REPORT_SCHEMA.to_string(),
            subject: subject.into(),
            items: Vec::new(),
        }
    }

    pub fn push(&mut self, item: CheckItem) {
        self.items.push(item);
    }

    /// Appends every item of `other`, prefixing names with `prefix.`.
    pub fn absorb(&mut self, prefix: &str, other: CheckReport) {
        for mut item in other.items {
            if !prefix.is_empty() {
                item.name = format!("{prefix}.{}", item.name);
            }
            self.items.push(item);
        }
    }

    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn status_of(&self, name: &str) -> Option<Status> {
        self.item(name).map(|i| i.status)
    }

    /// True iff the named item exists and passed.
    pub fn passed(&self, name: &str) -> bool {
        self.status_of(name) == Some(Status::Pass)
    }

    /// Overall verdict. Errors dominate budget exhaustion, which dominates
    /// failures; skipped items do not affect the verdict.
    pub fn verdict(&self) -> Status {
        let has = |s: Status| self.items.iter().any(|i| i.status == s);
        if has(Status::Error) {
            Status::Error
        } else if has(Status::BudgetExhausted) {
            Status::BudgetExhausted
        } else if has(Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        }
    }

    pub fn all_pass(&self) -> bool {
        self.verdict() == Status::Pass
    }

    pub fn failing(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| i.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// One line per item, aligned, for terminal output.
    pub fn to_pretty(&self) -> String {
        let width = self.items.iter().map(|i| i.name.len()).max().unwrap_or(0);
        let mut out = format!("{} [{:?}]\n", self.subject, self.verdict());
        for item in &self.items {
            out.push_str(&format!(
                "  {:<width$}  {:<16} {:>8} checked",
                item.name,
                format!("{:?}", item.status),
                item.instances,
            ));
            if item.failures > 0 {
                out.push_str(&format!(", {} failing", item.failures));
            }
            out.push('\n');
            if let Some(note) = &item.note {
                out.push_str(&format!("      note: {note}\n"));
            }
            for w in &item.witnesses {
                out.push_str(&format!("      witness: {}\n", w.detail));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_counts_and_caps_witnesses() {
        let mut t = Tally::new("law");
        for i in 0..10 {
            t.check(i % 2 == 0, || Witness::new(format!("odd {i}")));
        }
        let item = t.finish();
        assert_eq!(item.instances, 10);
        assert_eq!(item.failures, 5);
        assert_eq!(item.witnesses.len(), MAX_WITNESSES);
        assert_eq!(item.status, Status::Fail);
    }

    #[test]
    fn verdict_precedence() {
        let mut r = CheckReport::new("x");
        r.push(CheckItem::pass("a", 1));
        r.push(CheckItem::with_status("b", Status::Skipped, "n/a"));
        assert_eq!(r.verdict(), Status::Pass);
        r.push(CheckItem::fail("c", Witness::new("w")));
        assert_eq!(r.verdict(), Status::Fail);
        r.push(CheckItem::with_status(
            "d",
            Status::BudgetExhausted,
            "out of nodes",
        ));
        assert_eq!(r.verdict(), Status::BudgetExhausted);
        r.push(CheckItem::with_status("e", Status::Error, "bad"));
        assert_eq!(r.verdict(), Status::Error);
    }

    #[test]
    fn json_round_trip() {
        let mut r = CheckReport::new("subject");
        r.push(CheckItem::fail(
            "F2",
            Witness::new("w").morphisms(&[1, 2]).clusters(&[(0, 1)]),
        ));
        let back: CheckReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.schema, REPORT_SCHEMA);
    }
}
