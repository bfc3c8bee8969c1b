//! Finite subgroups and finite element sets: closure, set products,
//! normality, finite quotients.
//!
//! Sets are insertion-ordered, so every enumeration here is deterministic.
//! [`set_product`] splits its left operand across rayon workers and merges
//! the partial results in chunk order, which reproduces the sequential
//! row-major result exactly.

use std::hash::BuildHasherDefault;
use std::sync::Arc;

use indexmap::{IndexMap, IndexSet};
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHasher};

use crate::element::GroupElement;
use crate::error::{Error, Result};
use crate::family::GroupFamily;
use crate::table::BaseGroupTable;

pub const DEFAULT_CLOSURE_BUDGET: usize = 10_000_000;
pub const DEFAULT_PRODUCT_BUDGET: usize = 10_000_000;

type FxBuild = BuildHasherDefault<FxHasher>;
pub(crate) type FxIndexSet<T> = IndexSet<T, FxBuild>;
type FxIndexMap<K, V> = IndexMap<K, V, FxBuild>;

/// A deduplicated, insertion-ordered set of elements.
#[derive(Clone, Debug, Default)]
pub struct ElementSet {
    elements: FxIndexSet<GroupElement>,
}

impl ElementSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(x: GroupElement) -> Self {
        let mut s = Self::new();
        s.insert(x);
        s
    }

    pub fn insert(&mut self, x: GroupElement) -> bool {
        self.elements.insert(x)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.elements.contains(x)
    }

    pub fn index_of(&self, x: &GroupElement) -> Option<usize> {
        self.elements.get_index_of(x)
    }

    pub fn get(&self, i: usize) -> Option<&GroupElement> {
        self.elements.get_index(i)
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &GroupElement> + '_ {
        self.elements.iter()
    }

    pub fn as_slice(&self) -> &indexmap::set::Slice<GroupElement> {
        self.elements.as_slice()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.len() <= other.len() && self.iter().all(|x| other.contains(x))
    }

    /// Elements in canonical encoding order.
    pub fn sorted(&self) -> Vec<GroupElement> {
        let mut v: Vec<_> = self.iter().cloned().collect();
        v.sort();
        v
    }
}

impl PartialEq for ElementSet {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.is_subset(other)
    }
}

impl Eq for ElementSet {}

impl FromIterator<GroupElement> for ElementSet {
    fn from_iter<I: IntoIterator<Item = GroupElement>>(iter: I) -> Self {
        ElementSet { elements: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = &'a GroupElement;
    type IntoIter = indexmap::set::Iter<'a, GroupElement>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}

/// An explicitly enumerated finite subgroup.
#[derive(Clone, Debug)]
pub struct FiniteSubgroup {
    elements: ElementSet,
    generators: Vec<GroupElement>,
    family: GroupFamily,
}

impl PartialEq for FiniteSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.elements == other.elements
    }
}

impl FiniteSubgroup {
    /// The subgroup generated by `gens`, by breadth-first saturation of the
    /// frontier under right multiplication by generators and their inverses.
    pub fn closure(family: &GroupFamily, gens: &[GroupElement], budget: usize) -> Result<Self> {
        let mut steps: FxIndexSet<GroupElement> = FxIndexSet::default();
        for g in gens {
            family.validate(g)?;
            if !family.is_identity(g) {
                steps.insert(g.clone());
                steps.insert(family.inverse(g)?);
            }
        }
        let mut elements = ElementSet::singleton(family.identity());
        let mut frontier = vec![family.identity()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in &frontier {
                for g in &steps {
                    let y = family.mul(x, g)?;
                    if !elements.contains(&y) {
                        elements.insert(y.clone());
                        next.push(y);
                        if elements.len() > budget {
                            return Err(Error::ClosureBudgetExceeded { budget });
                        }
                    }
                }
            }
            frontier = next;
        }
        Ok(FiniteSubgroup { elements, generators: gens.to_vec(), family: family.clone() })
    }

    pub fn trivial(family: &GroupFamily) -> Self {
        FiniteSubgroup {
            elements: ElementSet::singleton(family.identity()),
            generators: Vec::new(),
            family: family.clone(),
        }
    }

    /// The whole table group, as a subgroup of `Finite(table)`.
    pub fn whole_table(table: &Arc<BaseGroupTable>) -> Self {
        let family = GroupFamily::Finite(table.clone());
        let elements = (0..table.order() as u16).map(GroupElement::Base).collect();
        let generators = table.generators().into_iter().map(GroupElement::Base).collect();
        FiniteSubgroup { elements, generators, family }
    }

    /// Wraps a set already known to be a subgroup (checked in debug builds).
    pub(crate) fn from_closed_set(family: &GroupFamily, elements: ElementSet) -> Self {
        debug_assert!(is_subgroup(family, &elements).unwrap_or(false));
        let generators = elements.iter().filter(|x| !family.is_identity(x)).cloned().collect();
        FiniteSubgroup { elements, generators, family: family.clone() }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.elements.contains(x)
    }

    pub fn elements(&self) -> &ElementSet {
        &self.elements
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn family(&self) -> &GroupFamily {
        &self.family
    }

    pub fn is_subgroup_of(&self, other: &FiniteSubgroup) -> bool {
        self.elements.is_subset(&other.elements)
    }
}

/// `{ab : a in A, b in B}`, together with, for every product, the pair of
/// indices `(i, j)` of its first occurrence in row-major order.
pub fn set_product_traced(
    family: &GroupFamily,
    a: &ElementSet,
    b: &ElementSet,
    budget: usize,
) -> Result<(ElementSet, Vec<(u32, u32)>)> {
    let threads = rayon::current_num_threads().max(1);
    let chunk = (a.len() / (threads * 4)).max(64);
    let left: Vec<&GroupElement> = a.iter().collect();
    let right: Vec<&GroupElement> = b.iter().collect();
    let partials: Vec<Result<FxIndexMap<GroupElement, (u32, u32)>>> = left
        .par_chunks(chunk)
        .enumerate()
        .map(|(c, xs)| {
            let mut local: FxIndexMap<GroupElement, (u32, u32)> = FxIndexMap::default();
            for (di, x) in xs.iter().enumerate() {
                let i = (c * chunk + di) as u32;
                for (j, y) in right.iter().enumerate() {
                    local.entry(family.mul(x, y)?).or_insert((i, j as u32));
                }
                if local.len() > budget {
                    return Err(Error::ProductBudgetExceeded { budget });
                }
            }
            Ok(local)
        })
        .collect();
    let mut merged: FxIndexMap<GroupElement, (u32, u32)> = FxIndexMap::default();
    for part in partials {
        for (x, ij) in part? {
            merged.entry(x).or_insert(ij);
        }
        if merged.len() > budget {
            return Err(Error::ProductBudgetExceeded { budget });
        }
    }
    let trace = merged.values().copied().collect();
    let elements = merged.into_keys().collect();
    Ok((elements, trace))
}

pub fn set_product(
    family: &GroupFamily,
    a: &ElementSet,
    b: &ElementSet,
    budget: usize,
) -> Result<ElementSet> {
    set_product_traced(family, a, b, budget).map(|(s, _)| s)
}

/// Exact check: contains the identity, closed under products and inverses.
pub fn is_subgroup(family: &GroupFamily, s: &ElementSet) -> Result<bool> {
    if !s.contains(&family.identity()) {
        return Ok(false);
    }
    for x in s {
        if !s.contains(&family.inverse(x)?) {
            return Ok(false);
        }
        for y in s {
            if !s.contains(&family.mul(x, y)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `h` is normal in `k`, by a full conjugation sweep.
pub fn is_normal_in(h: &FiniteSubgroup, k: &FiniteSubgroup) -> Result<bool> {
    if !h.is_subgroup_of(k) {
        return Err(Error::NotContained);
    }
    let fam = k.family();
    for g in k.elements() {
        let gi = fam.inverse(g)?;
        for x in h.elements() {
            if !h.contains(&fam.mul(&gi, &fam.mul(x, g)?)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Cayley table of a finite quotient `K/N` with its coset bookkeeping.
#[derive(Clone, Debug)]
pub struct QuotientTable {
    pub table: BaseGroupTable,
    /// Minimal (canonical encoding order) representative of each coset;
    /// coset `i` of the table is `reps[i] N`. The identity coset is 0.
    pub reps: Vec<GroupElement>,
    coset_of: FxHashMap<GroupElement, u16>,
}

impl QuotientTable {
    /// Index of the coset of `x`, or `None` if `x` is outside `K`.
    pub fn project(&self, x: &GroupElement) -> Option<u16> {
        self.coset_of.get(x).copied()
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }
}

pub fn quotient_table(k: &FiniteSubgroup, n: &FiniteSubgroup) -> Result<QuotientTable> {
    if !is_normal_in(n, k)? {
        return Err(Error::NotNormal);
    }
    assert_eq!(k.order() % n.order(), 0, "Lagrange: |N| must divide |K|");
    let fam = k.family();
    let mut temp: FxHashMap<GroupElement, usize> = FxHashMap::default();
    let mut cosets: Vec<GroupElement> = Vec::new();
    for x in k.elements() {
        if temp.contains_key(x) {
            continue;
        }
        let id = cosets.len();
        let mut rep = x.clone();
        for m in n.elements() {
            let y = fam.mul(x, m)?;
            if y < rep {
                rep = y.clone();
            }
            temp.insert(y, id);
        }
        cosets.push(rep);
    }
    let count = cosets.len();
    if count > crate::table::MAX_TABLE_ORDER {
        return Err(Error::InvalidTable(format!("quotient of order {count} is too large")));
    }
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by(|&i, &j| cosets[i].cmp(&cosets[j]));
    let mut rank = vec![0u16; count];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r as u16;
    }
    let reps: Vec<GroupElement> = order.iter().map(|&i| cosets[i].clone()).collect();
    let coset_of: FxHashMap<GroupElement, u16> =
        temp.into_iter().map(|(x, id)| (x, rank[id])).collect();
    let mut rows = vec![vec![0usize; count]; count];
    for (i, ri) in reps.iter().enumerate() {
        for (j, rj) in reps.iter().enumerate() {
            rows[i][j] = coset_of[&fam.mul(ri, rj)?] as usize;
        }
    }
    let table = BaseGroupTable::from_rows(&rows)?;
    Ok(QuotientTable { table, reps, coset_of })
}

/// The table of a finite subgroup itself (its quotient by the trivial
/// subgroup), with `reps[i]` the ambient element behind table index `i`.
pub fn subgroup_table(k: &FiniteSubgroup) -> Result<QuotientTable> {
    quotient_table(k, &FiniteSubgroup::trivial(k.family()))
}
