//! Shortcuts for abelian families.
//!
//! In an abelian group every `phi^i(K)` is a subgroup and a product of
//! subgroups is the subgroup they generate, so `T_n(phi, K)` is
//! `<K, phi(K), ..., phi^{n-1}(K)>`. On `DirectSum(Z_p)` its order is
//! `p^rank`, computed by elimination over `F_p` without enumerating it.

use std::collections::BTreeMap;

use crate::element::{GroupElement, SupportMap};
use crate::endo::Endo;
use crate::entropy::{TrajectoryStatus, TrajectoryTable};
use crate::error::{Error, Result};
use crate::family::{is_prime, GroupFamily};
use crate::fingen::FiniteSubgroup;
use crate::table::BaseGroupTable;

/// `Some(p)` when the family is `DirectSum(Z_p)` with `p` prime, in the
/// standard labelling of `Z_p`.
pub fn prime_cyclic_base(family: &GroupFamily) -> Option<u32> {
    let GroupFamily::DirectSum(t) = family else { return None };
    let p = t.order();
    (is_prime(p as u32) && **t == BaseGroupTable::cyclic(p).ok()?).then_some(p as u32)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse
    let (mut base, mut e, mut acc) = (a as u64 % p as u64, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Row echelon basis of a subspace of `F_p^(Z)`, keyed by leading index.
#[derive(Clone, Debug)]
pub struct FpBasis {
    p: u32,
    rows: BTreeMap<i32, SupportMap>,
}

impl FpBasis {
    pub fn new(p: u32) -> Self {
        FpBasis { p, rows: BTreeMap::new() }
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &SupportMap) -> bool {
        let p = self.p;
        let mut v = v.clone();
        while let Some(&(lead, c)) = v.entries().first() {
            match self.rows.get(&lead) {
                Some(row) => {
                    // row is normalized to leading coefficient 1
                    v = v.zip_with(row, |x, y| (x + (p - c) * y % p) % p);
                }
                None => {
                    let scale = inv_mod(c, p);
                    self.rows.insert(lead, v.map_values(|x| (x as u64 * scale as u64 % p as u64) as u32));
                    return true;
                }
            }
        }
        false
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// `p^rank`, or `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        (self.p as u64).checked_pow(self.rank() as u32)
    }

    pub fn basis(&self) -> impl Iterator<Item = &SupportMap> {
        self.rows.values()
    }
}

/// A minimal generating set with the same span, on `DirectSum(Z_p)`;
/// other families get `gens` back unchanged.
pub fn reduce_generators(family: &GroupFamily, gens: &[GroupElement]) -> Vec<GroupElement> {
    let Some(p) = prime_cyclic_base(family) else { return gens.to_vec() };
    let mut basis = FpBasis::new(p);
    gens.iter()
        .filter(|g| match g {
            GroupElement::DirectSum(v) => basis.insert(v),
            _ => true,
        })
        .cloned()
        .collect()
}

/// `|T_n(phi, K)|` for `n = 1..=n_max` on an abelian family. Ranks on
/// `DirectSum(Z_p)`; closures (bounded by `budget`) otherwise.
pub fn abelian_trajectory(
    phi: &Endo,
    k: &FiniteSubgroup,
    n_max: usize,
    budget: usize,
) -> Result<TrajectoryTable> {
    let fam = phi.family();
    if !fam.is_abelian() {
        return Err(Error::Scenario(format!("{fam:?} is not abelian")));
    }
    let mut layer: Vec<GroupElement> = if k.generators().is_empty() && !k.is_trivial() {
        k.elements().iter().cloned().collect()
    } else {
        k.generators().to_vec()
    };
    let mut sizes = Vec::with_capacity(n_max);
    let mut status = TrajectoryStatus::Complete;
    let mut basis = prime_cyclic_base(fam).map(FpBasis::new);
    let mut gens: Vec<GroupElement> = Vec::new();
    for n in 1..=n_max {
        if n > 1 {
            layer = layer.iter().map(|g| phi.apply(g)).collect::<Result<_>>()?;
        }
        let size = match &mut basis {
            Some(b) => {
                for g in &layer {
                    if let GroupElement::DirectSum(v) = g {
                        b.insert(v);
                    }
                }
                b.order()
            }
            None => {
                gens.extend(layer.iter().cloned());
                match FiniteSubgroup::closure(fam, &gens, budget) {
                    Ok(h) => Some(h.order() as u64),
                    Err(e) if e.is_budget() => None,
                    Err(e) => return Err(e),
                }
            }
        };
        match size {
            Some(s) => sizes.push(s),
            None => {
                status = TrajectoryStatus::Truncated;
                break;
            }
        }
    }
    Ok(TrajectoryTable { sizes, n_max, status })
}
