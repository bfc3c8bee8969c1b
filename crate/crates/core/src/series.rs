//! Central and derived series of finite subgroups.

use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::element::GroupElement;
use crate::error::Result;
use crate::fingen::{quotient_table, ElementSet, FiniteSubgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    LowerCentral,
    UpperCentral,
    Derived,
}

impl SeriesKind {
    pub fn name(self) -> &'static str {
        match self {
            SeriesKind::LowerCentral => "lower_central",
            SeriesKind::UpperCentral => "upper_central",
            SeriesKind::Derived => "derived",
        }
    }
}

/// Nilpotency class / derived length, or the failure to reach the end.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesClass {
    Length(u32),
    NotNilpotent,
    NotSolvable,
}

impl SeriesClass {
    pub fn value(self) -> Option<u32> {
        match self {
            SeriesClass::Length(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for SeriesClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesClass::Length(n) => write!(f, "{n}"),
            SeriesClass::NotNilpotent => f.write_str("not nilpotent"),
            SeriesClass::NotSolvable => f.write_str("not solvable"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SeriesReport {
    pub kind: SeriesKind,
    pub terms: Vec<FiniteSubgroup>,
    pub class: SeriesClass,
}

impl SeriesReport {
    pub fn orders(&self) -> Vec<usize> {
        self.terms.iter().map(FiniteSubgroup::order).collect()
    }
}

/// `{"kind":..., "orders":[...], "class":...}`; `class` is an integer or
/// the string `"not nilpotent"` / `"not solvable"`.
impl Serialize for SeriesReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("kind", self.kind.name())?;
        m.serialize_entry("orders", &self.orders())?;
        match self.class {
            SeriesClass::Length(n) => m.serialize_entry("class", &n)?,
            other => m.serialize_entry("class", &other.to_string())?,
        }
        m.end()
    }
}

/// Elements of `k` commuting with all of `k`. Commuting with a generating
/// set is enough.
pub fn center(k: &FiniteSubgroup) -> Result<FiniteSubgroup> {
    let fam = k.family();
    let mut z = ElementSet::new();
    for x in k.elements() {
        let mut central = true;
        for g in k.generators() {
            if fam.mul(x, g)? != fam.mul(g, x)? {
                central = false;
                break;
            }
        }
        if central {
            z.insert(x.clone());
        }
    }
    Ok(FiniteSubgroup::from_closed_set(fam, z))
}

/// `[A, B]`: the subgroup generated by all `a^-1 b^-1 a b`.
pub fn commutator_subgroup(
    a: &FiniteSubgroup,
    b: &FiniteSubgroup,
    budget: usize,
) -> Result<FiniteSubgroup> {
    let fam = a.family();
    let mut comms = ElementSet::new();
    for x in a.elements() {
        for y in b.elements() {
            let c = fam.commutator(x, y)?;
            if !fam.is_identity(&c) {
                comms.insert(c);
            }
        }
    }
    let gens: Vec<GroupElement> = comms.sorted();
    FiniteSubgroup::closure(fam, &gens, budget)
}

/// `gamma_1 = K`, `gamma_{i+1} = [gamma_i, K]`, until two consecutive terms
/// agree. The class is the number of nontrivial terms.
pub fn lower_central_series(k: &FiniteSubgroup, budget: usize) -> Result<SeriesReport> {
    let mut terms = vec![k.clone()];
    loop {
        let last = terms.last().unwrap();
        if last.is_trivial() {
            break;
        }
        let next = commutator_subgroup(last, k, budget)?;
        if next == *last {
            return Ok(SeriesReport {
                kind: SeriesKind::LowerCentral,
                terms,
                class: SeriesClass::NotNilpotent,
            });
        }
        terms.push(next);
    }
    let class = SeriesClass::Length(terms.len() as u32 - 1);
    Ok(SeriesReport { kind: SeriesKind::LowerCentral, terms, class })
}

/// `G^(0) = K`, `G^(i+1) = [G^(i), G^(i)]`.
pub fn derived_series(k: &FiniteSubgroup, budget: usize) -> Result<SeriesReport> {
    let mut terms = vec![k.clone()];
    loop {
        let last = terms.last().unwrap();
        if last.is_trivial() {
            break;
        }
        let next = commutator_subgroup(last, last, budget)?;
        if next == *last {
            return Ok(SeriesReport {
                kind: SeriesKind::Derived,
                terms,
                class: SeriesClass::NotSolvable,
            });
        }
        terms.push(next);
    }
    let class = SeriesClass::Length(terms.len() as u32 - 1);
    Ok(SeriesReport { kind: SeriesKind::Derived, terms, class })
}

/// `Z_0 = 1`, `Z_{i+1}` = preimage of the center of the finite quotient
/// `K / Z_i`.
pub fn upper_central_series(k: &FiniteSubgroup, _budget: usize) -> Result<SeriesReport> {
    let fam = k.family();
    let mut terms = vec![FiniteSubgroup::trivial(fam)];
    loop {
        let last = terms.last().unwrap();
        if last.order() == k.order() {
            break;
        }
        let q = quotient_table(k, last)?;
        let q_whole = FiniteSubgroup::whole_table(&Arc::new(q.table.clone()));
        let q_center = center(&q_whole)?;
        let mut pulled = ElementSet::new();
        for x in k.elements() {
            let c = q.project(x).expect("x lies in K");
            if q_center.contains(&GroupElement::Base(c)) {
                pulled.insert(x.clone());
            }
        }
        if pulled.len() == last.order() {
            return Ok(SeriesReport {
                kind: SeriesKind::UpperCentral,
                terms,
                class: SeriesClass::NotNilpotent,
            });
        }
        terms.push(FiniteSubgroup::from_closed_set(fam, pulled));
    }
    let class = SeriesClass::Length(terms.len() as u32 - 1);
    Ok(SeriesReport { kind: SeriesKind::UpperCentral, terms, class })
}

/// `K[n]`: the subgroup generated by `{x in K : x^n = 1}`.
pub fn n_torsion_subgroup(k: &FiniteSubgroup, n: u64, budget: usize) -> Result<FiniteSubgroup> {
    let fam = k.family();
    let mut gens = Vec::new();
    for x in k.elements() {
        if !fam.is_identity(x) && fam.is_identity(&fam.pow(x, n)?) {
            gens.push(x.clone());
        }
    }
    FiniteSubgroup::closure(fam, &gens, budget)
}
