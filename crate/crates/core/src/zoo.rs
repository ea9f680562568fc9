//! Deterministic generators for the finite examples: skeleta of finite sets,
//! pointed finite sets, groups of order at most six, chains, and the forms
//! of subsets, equivalence relations, palettes, subgroups and their kin.
//!
//! Cluster names carry the payload (a subset, a partition, a palette, ...),
//! so witnesses printed from these forms are readable without a decoder.

use std::collections::HashMap;
use std::sync::Arc;

use crate::fincat::{CatView, FinCategory, MorId, ObjId};
use crate::formcore::{Form, Operator};
pub use crate::subobjects::{e_quotients_form, m_subobjects_form, subquotients_form};

/// Skeleta above this size are accepted but get slow; callers may warn.
pub const ADVISORY_MAX_SIZE: usize = 4;

/// A category of finite structures whose morphisms are actual functions.
#[derive(Debug, Clone)]
pub struct ZooCategory {
    pub cat: Arc<FinCategory>,
    pub carriers: Vec<usize>,
    pub maps: Vec<Vec<u8>>,
    /// Multiplication tables, for the groups category only.
    pub groups: Option<Vec<GroupTable>>,
}

impl ZooCategory {
    pub fn apply(&self, f: MorId, x: usize) -> usize {
        self.maps[f][x] as usize
    }

    /// Image of a subset (bitmask) under `f`.
    pub fn image_mask(&self, f: MorId, mask: u32) -> u32 {
        (0..self.carriers[self.cat.dom(f)])
            .filter(|&x| mask >> x & 1 == 1)
            .fold(0, |acc, x| acc | 1 << self.apply(f, x))
    }

    /// The morphism with this underlying function, if any.
    pub fn find(&self, dom: ObjId, cod: ObjId, map: &[u8]) -> Option<MorId> {
        self.cat
            .hom(dom, cod)
            .iter()
            .copied()
            .find(|&f| self.maps[f] == map)
    }
}

/// Builds the category whose morphisms are the admissible functions between
/// carriers. Identities come first, then morphisms by (domain, codomain,
/// function) in lexicographic order.
fn concrete(
    names: Vec<String>,
    carriers: Vec<usize>,
    admissible: impl Fn(ObjId, ObjId, &[u8]) -> bool,
) -> (FinCategory, Vec<Vec<u8>>) {
    let k = names.len();
    let mut morphisms = Vec::new();
    let mut maps: Vec<Vec<u8>> = Vec::new();
    let label = |a: ObjId, b: ObjId, m: &[u8]| {
        let digits: String = m.iter().map(|d| char::from(b'0' + d)).collect();
        format!("{}->{}:{digits}", names[a], names[b])
    };
    for x in 0..k {
        let id: Vec<u8> = (0..carriers[x] as u8).collect();
        morphisms.push((label(x, x, &id), x, x));
        maps.push(id);
    }
    for a in 0..k {
        for b in 0..k {
            for m in all_functions(carriers[a], carriers[b]) {
                let is_id = a == b && m.iter().enumerate().all(|(i, &v)| i == v as usize);
                if !is_id && admissible(a, b, &m) {
                    morphisms.push((label(a, b, &m), a, b));
                    maps.push(m);
                }
            }
        }
    }
    let index: HashMap<(ObjId, ObjId, Vec<u8>), MorId> = morphisms
        .iter()
        .zip(&maps)
        .enumerate()
        .map(|(i, ((_, a, b), m))| ((*a, *b, m.clone()), i))
        .collect();
    let ends: Vec<(ObjId, ObjId)> = morphisms.iter().map(|(_, a, b)| (*a, *b)).collect();
    let cat = FinCategory::from_tables(names.clone(), morphisms, (0..k).collect(), |g, f| {
        let composite: Vec<u8> = maps[f].iter().map(|&v| maps[g][v as usize]).collect();
        index[&(ends[f].0, ends[g].1, composite)]
    });
    (cat, maps)
}

/// All functions `0..a → 0..b` in lexicographic order.
fn all_functions(a: usize, b: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if b == 0 {
        if a == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0u8; a];
    loop {
        out.push(cur.clone());
        let mut i = a;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if (cur[i] as usize) + 1 < b {
                cur[i] += 1;
                for c in &mut cur[i + 1..] {
                    *c = 0;
                }
                break;
            }
        }
    }
}

/// Sets of sizes `0..=n` with all functions.
pub fn finset_skeleton(n: usize) -> ZooCategory {
    let carriers: Vec<usize> = (0..=n).collect();
    let names = carriers.iter().map(|k| format!("S{k}")).collect();
    let (cat, maps) = concrete(names, carriers.clone(), |_, _, _| true);
    ZooCategory {
        cat: Arc::new(cat),
        carriers,
        maps,
        groups: None,
    }
}

/// Pointed sets of sizes `1..=n`, base point 0, base-point preserving maps.
pub fn pointed_finset_skeleton(n: usize) -> ZooCategory {
    let carriers: Vec<usize> = (1..=n).collect();
    let names = carriers.iter().map(|k| format!("P{k}")).collect();
    let (cat, maps) = concrete(names, carriers.clone(), |_, _, m| {
        m.first().is_none_or(|&v| v == 0)
    });
    ZooCategory {
        cat: Arc::new(cat),
        carriers,
        maps,
        groups: None,
    }
}

/// Multiplication table of a finite group on `0..n`, identity 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    pub name: String,
    pub order: usize,
    pub mul: Vec<u8>,
}

impl GroupTable {
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    fn cyclic(n: usize) -> GroupTable {
        GroupTable {
            name: if n == 1 { "1".into() } else { format!("Z{n}") },
            order: n,
            mul: (0..n * n).map(|i| ((i / n + i % n) % n) as u8).collect(),
        }
    }

    fn klein() -> GroupTable {
        GroupTable {
            name: "V4".into(),
            order: 4,
            mul: (0..16).map(|i| ((i / 4) ^ (i % 4)) as u8).collect(),
        }
    }

    /// Permutations of three points in lexicographic order, composed as maps.
    fn symmetric3() -> GroupTable {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap() as u8;
        let mul = (0..36)
            .map(|i| {
                let (a, b) = (perms[i / 6], perms[i % 6]);
                index([a[b[0]], a[b[1]], a[b[2]]])
            })
            .collect();
        GroupTable {
            name: "S3".into(),
            order: 6,
            mul,
        }
    }

    fn inv(&self, a: usize) -> usize {
        (0..self.order).find(|&b| self.op(a, b) == 0).unwrap()
    }

    /// Normal subgroups as bitmasks, ascending.
    pub fn normal_subgroups(&self) -> Vec<u32> {
        self.subgroups()
            .into_iter()
            .filter(|&h| {
                (0..self.order).all(|g| {
                    (0..self.order).all(|x| {
                        h >> x & 1 == 0 || h >> self.op(self.op(g, x), self.inv(g)) & 1 == 1
                    })
                })
            })
            .collect()
    }

    /// Subgroups as bitmasks, ascending.
    pub fn subgroups(&self) -> Vec<u32> {
        (0..1u32 << self.order)
            .filter(|&m| {
                m & 1 == 1
                    && (0..self.order).all(|a| {
                        m >> a & 1 == 0
                            || (0..self.order)
                                .all(|b| m >> b & 1 == 0 || m >> self.op(a, b) & 1 == 1)
                    })
            })
            .collect()
    }
}

/// One group per isomorphism class up to `max_order` (at most 6), with every
/// homomorphism. Order 6 brings the first non-abelian group, `S3`.
pub fn groups_category(max_order: usize) -> ZooCategory {
    let max_order = max_order.min(6);
    let mut groups: Vec<GroupTable> = (1..=max_order.min(4)).map(GroupTable::cyclic).collect();
    if max_order >= 4 {
        groups.push(GroupTable::klein());
    }
    if max_order >= 5 {
        groups.push(GroupTable::cyclic(5));
    }
    if max_order >= 6 {
        groups.push(GroupTable::cyclic(6));
        groups.push(GroupTable::symmetric3());
    }
    let names = groups.iter().map(|g| g.name.clone()).collect();
    let carriers: Vec<usize> = groups.iter().map(|g| g.order).collect();
    let (cat, maps) = concrete(names, carriers.clone(), |a, b, m| {
        let (ga, gb) = (&groups[a], &groups[b]);
        (0..ga.order).all(|x| {
            (0..ga.order).all(|y| m[ga.op(x, y)] as usize == gb.op(m[x] as usize, m[y] as usize))
        })
    });
    ZooCategory {
        cat: Arc::new(cat),
        carriers,
        maps,
        groups: Some(groups),
    }
}

/// The poset `0 < 1 < … < k-1` as a category. Identities first, then `i->j`
/// for `i < j` in lexicographic order.
pub fn chain_category(k: usize) -> FinCategory {
    let names: Vec<String> = (0..k).map(|i| i.to_string()).collect();
    let mut morphisms: Vec<(String, ObjId, ObjId)> =
        (0..k).map(|i| (format!("1_{i}"), i, i)).collect();
    for i in 0..k {
        for j in i + 1..k {
            morphisms.push((format!("{i}->{j}"), i, j));
        }
    }
    let ends: Vec<(ObjId, ObjId)> = morphisms.iter().map(|(_, a, b)| (*a, *b)).collect();
    let find = |a: ObjId, b: ObjId| ends.iter().position(|&e| e == (a, b)).unwrap();
    FinCategory::from_tables(names, morphisms, (0..k).collect(), |g, f| {
        find(ends[f].0, ends[g].1)
    })
}

/// Renders a subset bitmask as `{0,2}`.
pub fn subset_name(mask: u32, n: usize) -> String {
    let items: Vec<String> = (0..n)
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| i.to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

/// Set partitions of `0..n` as restricted growth strings, lexicographic.
pub fn partitions(n: usize) -> Vec<Vec<u8>> {
    fn grow(cur: &mut Vec<u8>, n: usize, out: &mut Vec<Vec<u8>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        let next = cur.iter().max().map_or(0, |m| m + 1);
        for b in 0..=next {
            cur.push(b);
            grow(cur, n, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), n, &mut out);
    out
}

/// Blocks of a partition as bitmasks, in order of first element.
pub fn blocks(p: &[u8]) -> Vec<u32> {
    let k = p.iter().max().map_or(0, |m| *m as usize + 1);
    let mut out = vec![0u32; k];
    for (i, &b) in p.iter().enumerate() {
        out[b as usize] |= 1 << i;
    }
    out
}

pub fn partition_name(p: &[u8]) -> String {
    if p.is_empty() {
        return "{}".into();
    }
    blocks(p).iter().map(|&b| subset_name(b, p.len())).collect()
}

/// Canonical restricted growth string of a labelling.
fn normalize(labels: &[usize]) -> Vec<u8> {
    let mut seen: Vec<usize> = Vec::new();
    labels
        .iter()
        .map(|l| match seen.iter().position(|s| s == l) {
            Some(i) => i as u8,
            None => {
                seen.push(*l);
                (seen.len() - 1) as u8
            }
        })
        .collect()
}

/// Nonempty antichains of subsets of `0..n`, each sorted, ordered by their
/// encoding as a set of subsets.
pub fn palettes(n: usize) -> Vec<Vec<u32>> {
    let subsets = 1usize << n;
    let mut out = Vec::new();
    for code in 1u64..1 << subsets {
        let members: Vec<u32> = (0..subsets as u32)
            .filter(|&s| code >> s & 1 == 1)
            .collect();
        let antichain = members
            .iter()
            .all(|&a| members.iter().all(|&b| a == b || a & !b != 0));
        if antichain {
            out.push(members);
        }
    }
    out
}

/// Maximal members of a family of subsets, sorted.
pub fn maximal(family: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = family
        .iter()
        .copied()
        .filter(|&a| !family.iter().any(|&b| b != a && a & !b == 0))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn palette_name(p: &[u32], n: usize) -> String {
    let parts: Vec<String> = p.iter().map(|&a| subset_name(a, n)).collect();
    format!("{{{}}}", parts.join(","))
}

fn subset_family_form(
    z: &ZooCategory,
    label: &str,
    family: impl Fn(ObjId) -> Vec<u32>,
) -> (Form, Vec<Vec<u32>>) {
    let fam: Vec<Vec<u32>> = (0..z.carriers.len()).map(family).collect();
    let names = fam
        .iter()
        .enumerate()
        .map(|(x, v)| v.iter().map(|&m| subset_name(m, z.carriers[x])).collect())
        .collect();
    let c = &z.cat;
    let form = Form::from_fn(c.clone(), label, names, |f, b, a| {
        let img = z.image_mask(f, fam[c.dom(f)][a]);
        img & !fam[c.cod(f)][b] == 0
    });
    (form, fam)
}

/// Subsets, ordered by bitmask; `B ≥_f A` iff `f(A) ⊆ B`.
pub fn subsets_form(z: &ZooCategory) -> Form {
    subset_family_form(z, "subsets", |x| (0..1u32 << z.carriers[x]).collect()).0
}

pub fn subsets_payload(z: &ZooCategory) -> Vec<Vec<u32>> {
    (0..z.carriers.len())
        .map(|x| (0..1u32 << z.carriers[x]).collect())
        .collect()
}

/// Subgroups of each group; relation as for subsets.
pub fn subgroup_form(z: &ZooCategory) -> Form {
    let groups = z
        .groups
        .as_ref()
        .expect("subgroups need the groups category");
    subset_family_form(z, "subgroups", |x| groups[x].subgroups()).0
}

/// Normal subgroups, the kernels of homomorphisms; relation as for subsets.
pub fn normal_subgroup_form(z: &ZooCategory) -> Form {
    let groups = z
        .groups
        .as_ref()
        .expect("normal subgroups need the groups category");
    subset_family_form(z, "normal subgroups", |x| groups[x].normal_subgroups()).0
}

pub fn equivrel_payload(z: &ZooCategory) -> Vec<Vec<Vec<u8>>> {
    z.carriers.iter().map(|&n| partitions(n)).collect()
}

fn respects(z: &ZooCategory, f: MorId, r: &[u8], s: &[u8]) -> bool {
    let n = r.len();
    (0..n).all(|x| (x + 1..n).all(|y| r[x] != r[y] || s[z.apply(f, x)] == s[z.apply(f, y)]))
}

/// Equivalence relations as partitions; `S ≥_f R` iff `xRy ⇒ f(x) S f(y)`.
pub fn equivrel_form(z: &ZooCategory) -> Form {
    equivrel_labelled(z, "equivalence relations")
}

/// The equivalence-relation form over pointed sets, where it is the form of
/// quotients.
pub fn quotients_form(z: &ZooCategory) -> Form {
    equivrel_labelled(z, "quotients")
}

fn equivrel_labelled(z: &ZooCategory, label: &str) -> Form {
    let parts = equivrel_payload(z);
    let names = parts
        .iter()
        .map(|v| v.iter().map(|p| partition_name(p)).collect())
        .collect();
    let c = &z.cat;
    Form::from_fn(c.clone(), label, names, |f, s, r| {
        respects(z, f, &parts[c.dom(f)][r], &parts[c.cod(f)][s])
    })
}

/// Pairs `(A, R)` with `A` empty or one `R`-class; for each partition the
/// empty set comes first, then the classes by first element.
pub fn exaq_payload(z: &ZooCategory) -> Vec<Vec<(u32, Vec<u8>)>> {
    z.carriers
        .iter()
        .map(|&n| {
            let mut v = Vec::new();
            for p in partitions(n) {
                v.push((0, p.clone()));
                for b in blocks(&p) {
                    v.push((b, p.clone()));
                }
            }
            v
        })
        .collect()
}

/// `(B,S) ≥_f (A,R)` iff `f(A) ⊆ B` and `xRy ⇒ f(x) S f(y)`.
pub fn exaq_form(z: &ZooCategory) -> Form {
    let pay = exaq_payload(z);
    let names = pay
        .iter()
        .enumerate()
        .map(|(x, v)| {
            v.iter()
                .map(|(a, p)| format!("({}|{})", subset_name(*a, z.carriers[x]), partition_name(p)))
                .collect()
        })
        .collect();
    let c = &z.cat;
    Form::from_fn(c.clone(), "subsets-with-relations", names, |f, t, s| {
        let (a, r) = &pay[c.dom(f)][s];
        let (b, q) = &pay[c.cod(f)][t];
        z.image_mask(f, *a) & !b == 0 && respects(z, f, r, q)
    })
}

pub fn palettes_payload(z: &ZooCategory) -> Vec<Vec<Vec<u32>>> {
    z.carriers.iter().map(|&n| palettes(n)).collect()
}

/// `Q ≥_f P` iff every block of `P` maps into some block of `Q`.
pub fn palettes_form(z: &ZooCategory) -> Form {
    let pay = palettes_payload(z);
    let names = pay
        .iter()
        .enumerate()
        .map(|(x, v)| v.iter().map(|p| palette_name(p, z.carriers[x])).collect())
        .collect();
    let c = &z.cat;
    Form::from_fn(c.clone(), "palettes", names, |f, q, p| {
        let (pp, qq) = (&pay[c.dom(f)][p], &pay[c.cod(f)][q]);
        pp.iter().all(|&a| {
            let img = z.image_mask(f, a);
            qq.iter().any(|&b| img & !b == 0)
        })
    })
}

fn index_of<T: PartialEq>(v: &[T], item: &T) -> usize {
    v.iter()
        .position(|x| x == item)
        .expect("payload is enumerated")
}

/// `S ↦` the relation whose only non-singleton class is `S`.
pub fn subset_to_relation(z: &ZooCategory) -> Operator {
    let (subs, parts) = (subsets_payload(z), equivrel_payload(z));
    Operator {
        assign: (0..z.carriers.len())
            .map(|x| {
                let n = z.carriers[x];
                subs[x]
                    .iter()
                    .map(|&s| {
                        let labels: Vec<usize> = (0..n)
                            .map(|i| if s >> i & 1 == 1 { n } else { i })
                            .collect();
                        index_of(&parts[x], &normalize(&labels))
                    })
                    .collect()
            })
            .collect(),
    }
}

/// Every relation to the empty subset.
pub fn relation_to_empty(z: &ZooCategory) -> Operator {
    Operator {
        assign: equivrel_payload(z)
            .iter()
            .map(|v| vec![0; v.len()])
            .collect(),
    }
}

/// Union of the blocks of a palette.
pub fn palette_union(z: &ZooCategory) -> Operator {
    palette_to_subset(z, |p| p.iter().fold(0, |a, b| a | b))
}

/// Intersection of the blocks of a palette. Not monotone, so not an
/// operator: `{{0}} ≤ {{0},{1}}` while `{0} ⊄ ∅`.
pub fn palette_intersection(z: &ZooCategory) -> Operator {
    palette_to_subset(z, |p| p.iter().fold(u32::MAX, |a, b| a & b))
}

fn palette_to_subset(z: &ZooCategory, f: impl Fn(&[u32]) -> u32) -> Operator {
    let pay = palettes_payload(z);
    Operator {
        assign: pay
            .iter()
            .enumerate()
            .map(|(x, v)| {
                let full = (1u32 << z.carriers[x]) - 1;
                v.iter().map(|p| (f(p) & full) as usize).collect()
            })
            .collect(),
    }
}

/// `A ↦ {A}`.
pub fn subset_to_palette(z: &ZooCategory) -> Operator {
    let pay = palettes_payload(z);
    Operator {
        assign: (0..z.carriers.len())
            .map(|x| {
                (0..1u32 << z.carriers[x])
                    .map(|a| index_of(&pay[x], &vec![a]))
                    .collect()
            })
            .collect(),
    }
}

/// Merges blocks that are linked by overlaps and keeps the unions.
pub fn palette_merge(z: &ZooCategory) -> Operator {
    let pay = palettes_payload(z);
    Operator {
        assign: pay
            .iter()
            .map(|v| {
                v.iter()
                    .map(|p| {
                        let mut merged: Vec<u32> = p.clone();
                        loop {
                            let mut changed = false;
                            'outer: for i in 0..merged.len() {
                                for j in i + 1..merged.len() {
                                    if merged[i] & merged[j] != 0 {
                                        let u = merged[i] | merged[j];
                                        merged.remove(j);
                                        merged[i] = u;
                                        changed = true;
                                        break 'outer;
                                    }
                                }
                            }
                            if !changed {
                                break;
                            }
                        }
                        index_of(v, &maximal(&merged))
                    })
                    .collect()
            })
            .collect(),
    }
}

/// The two forms over the 2-chain `0 → 1 → 2`: fibers (1,2,3) and (1,3,2),
/// each given by its direct-image maps.
pub fn two_chain_forms() -> [Form; 2] {
    let base = Arc::new(chain_category(3));
    let first = chain_form(
        &base,
        "2-chain (1,2,3)",
        [vec!["⊤0=⊥0"], vec!["⊥1", "⊤1"], vec!["⊥2", "•2", "⊤2"]],
        // direct images: 0→1, 0→2, 1→2
        [vec![0], vec![0], vec![0, 1]],
    );
    let second = chain_form(
        &base,
        "2-chain (1,3,2)",
        [vec!["⊤0=⊥0"], vec!["⊥1", "•1", "⊤1"], vec!["⊥2", "⊤2"]],
        [vec![0], vec![0], vec![0, 0, 1]],
    );
    [first, second]
}

/// Chain fibers (clusters ascending) with `B ≥_h A` iff `B ≥ h·A`.
fn chain_form(
    base: &Arc<FinCategory>,
    label: &str,
    names: [Vec<&str>; 3],
    images: [Vec<usize>; 3],
) -> Form {
    let clusters = names
        .iter()
        .map(|v| v.iter().map(|s| s.to_string()).collect())
        .collect();
    let c = base.clone();
    Form::from_fn(base.clone(), label, clusters, |f, b, a| {
        let (x, y) = (c.dom(f), c.cod(f));
        let img = if x == y {
            a
        } else {
            match (x, y) {
                (0, 1) => images[0][a],
                (0, 2) => images[1][a],
                _ => images[2][a],
            }
        };
        b >= img
    })
}

/// The two factorization systems on the 2-chain as `(E, M)` membership.
/// First: `E` identities, `M` everything. Second: `E = {ids, 1->2}`,
/// `M = {ids, 0->1, 0->2}`.
pub fn two_chain_classes(c: &FinCategory) -> [(Vec<bool>, Vec<bool>); 2] {
    let n = c.n_morphisms();
    let ids: Vec<bool> = (0..n).map(|f| c.is_identity(f)).collect();
    let first = (ids.clone(), vec![true; n]);
    let g = (0..n).find(|&f| c.morphism_name(f) == "1->2").unwrap();
    let e2: Vec<bool> = (0..n).map(|f| ids[f] || f == g).collect();
    let m2: Vec<bool> = (0..n).map(|f| ids[f] || f != g).collect();
    [first, (e2, m2)]
}

/// Names accepted by [`zoo_form`].
pub const ZOO_FORM_NAMES: [&str; 9] = [
    "subsets",
    "equivrel",
    "exaq",
    "palettes",
    "quotients",
    "subgroups",
    "normal-subgroups",
    "two-chain-123",
    "two-chain-132",
];

/// A named zoo form at size `n`: set size for the set-based forms, maximal
/// group order for the group forms; ignored by the 2-chain forms.
pub fn zoo_form(name: &str, n: usize) -> Option<Form> {
    let form = match name {
        "subsets" => subsets_form(&finset_skeleton(n)),
        "equivrel" => equivrel_form(&finset_skeleton(n)),
        "exaq" => exaq_form(&finset_skeleton(n)),
        "palettes" => palettes_form(&finset_skeleton(n)),
        "quotients" => quotients_form(&pointed_finset_skeleton(n)),
        "subgroups" => subgroup_form(&groups_category(n)),
        "normal-subgroups" => normal_subgroup_form(&groups_category(n)),
        "two-chain-123" => two_chain_forms().into_iter().next()?,
        "two-chain-132" => two_chain_forms().into_iter().nth(1)?,
        _ => return None,
    };
    Some(form)
}

/// Every zoo form at its default desk-scale size.
pub fn zoo_catalog() -> Vec<(&'static str, Form)> {
    let size = |name: &str| match name {
        "palettes" => 2,
        "subgroups" | "normal-subgroups" => 4,
        _ => 3,
    };
    ZOO_FORM_NAMES
        .iter()
        .map(|&name| {
            (
                name,
                zoo_form(name, size(name)).expect("catalog names are known"),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formcore::{validate_form, validate_operator};

    #[test]
    fn finset_hom_counts() {
        let z = finset_skeleton(3);
        assert_eq!(z.cat.n_morphisms(), 60);
        assert_eq!(z.cat.hom(2, 3).len(), 9);
        assert!(z.cat.validate().all_pass());
    }

    #[test]
    fn pointed_hom_counts() {
        let z = pointed_finset_skeleton(3);
        assert_eq!(z.cat.hom(1, 1).len(), 2);
        assert!(z.cat.validate().all_pass());
    }

    #[test]
    fn groups_up_to_four() {
        let z = groups_category(4);
        let names: Vec<&str> = (0..5).map(|x| z.cat.object_name(x)).collect();
        assert_eq!(names, ["1", "Z2", "Z3", "Z4", "V4"]);
        assert_eq!(z.cat.hom(3, 1).len(), 2);
        assert!(z.cat.validate().all_pass());
        assert_eq!(subgroup_form(&z).fiber_size(4), 5);
    }

    #[test]
    fn symmetric_group_has_a_non_normal_subgroup() {
        let z = groups_category(6);
        let s3 = z.cat.object_by_name("S3").unwrap();
        let g = &z.groups.as_ref().unwrap()[s3];
        assert_eq!(g.subgroups().len(), 6);
        assert_eq!(g.normal_subgroups().len(), 3);
        // S3 → Z2 (sign) and S3 → S3 automorphisms, inner and otherwise.
        let z2 = z.cat.object_by_name("Z2").unwrap();
        assert_eq!(z.cat.hom(s3, z2).len(), 2);
        assert!(z.cat.validate().all_pass());
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        let counts: Vec<usize> = (0..5).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 15]);
    }

    #[test]
    fn exaq_fiber_sizes() {
        let f = exaq_form(&finset_skeleton(3));
        assert_eq!(f.fiber_sizes(), [1, 2, 5, 15]);
    }

    /// Antichains by a different route: downward from maximal families.
    fn antichain_count(n: usize) -> usize {
        let subsets = 1u32 << n;
        let mut set = std::collections::BTreeSet::new();
        for code in 1u64..1 << subsets {
            let fam: Vec<u32> = (0..subsets).filter(|&s| code >> s & 1 == 1).collect();
            set.insert(maximal(&fam));
        }
        set.len()
    }

    #[test]
    fn palette_counts_match_an_independent_enumeration() {
        for n in 0..=3 {
            assert_eq!(palettes(n).len(), antichain_count(n));
        }
        assert_eq!(palettes(2).len(), 5);
    }

    #[test]
    fn zoo_forms_are_valid() {
        let z = finset_skeleton(2);
        for f in [
            subsets_form(&z),
            equivrel_form(&z),
            exaq_form(&z),
            palettes_form(&z),
        ] {
            assert!(validate_form(&f).all_pass(), "{}", f.label());
        }
        for f in two_chain_forms() {
            assert!(validate_form(&f).all_pass(), "{}", f.label());
        }
    }

    #[test]
    fn palette_operators() {
        let z = finset_skeleton(2);
        let (pal, sub) = (palettes_form(&z), subsets_form(&z));
        let gamma = validate_operator(&pal, &sub, &palette_union(&z)).unwrap();
        assert!(gamma.valid && !gamma.injective);
        let lambda = validate_operator(&pal, &sub, &palette_intersection(&z)).unwrap();
        // {{0}} ≤ {{0},{1}} along the identity, yet {0} ⊄ ∅.
        assert!(!lambda.valid);
        let tau = validate_operator(&sub, &pal, &subset_to_palette(&z)).unwrap();
        assert!(tau.full && tau.injective);
        // Every palette of a 2-set is separated; overlaps need three points.
        let z3 = finset_skeleton(3);
        let pal3 = palettes_form(&z3);
        let omega = validate_operator(&pal3, &pal3, &palette_merge(&z3)).unwrap();
        assert!(omega.valid && omega.idempotent == Some(true) && !omega.injective);
    }
}
