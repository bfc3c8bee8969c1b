//! JSON element literals.
//!
//! ```json
//! {"family":"finite","index":3}
//! {"family":"direct_sum","support":{"0":1,"3":2}}
//! {"family":"poly_heis","a":{"0":1},"b":{},"c":{}}
//! {"family":"finitary_ut","entries":[[1,2,1]]}
//! ```
//!
//! Emission is canonical: support keys in increasing numeric order, matrix
//! entries in row-major order, no zero values. Parsing accepts keys in any
//! order and drops zero values; range checks against a concrete family are
//! done by [`parse_in`].

use std::collections::BTreeMap;

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::element::{GroupElement, SupportMap, UtMatrix};
use crate::error::{Error, Result};
use crate::family::GroupFamily;

struct Support<'a>(&'a SupportMap);

impl Serialize for Support<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for &(i, v) in self.0.entries() {
            m.serialize_entry(&i.to_string(), &v)?;
        }
        m.end()
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GroupElement::Base(i) => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("family", "finite")?;
                m.serialize_entry("index", i)?;
                m.end()
            }
            GroupElement::DirectSum(sup) => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("family", "direct_sum")?;
                m.serialize_entry("support", &Support(sup))?;
                m.end()
            }
            GroupElement::PolyHeis(a, b, c) => {
                let mut m = s.serialize_map(Some(4))?;
                m.serialize_entry("family", "poly_heis")?;
                m.serialize_entry("a", &Support(a))?;
                m.serialize_entry("b", &Support(b))?;
                m.serialize_entry("c", &Support(c))?;
                m.end()
            }
            GroupElement::FinitaryUt(mat) => {
                let entries: Vec<[u32; 3]> =
                    mat.entries().iter().map(|&((i, j), v)| [i, j, v]).collect();
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("family", "finitary_ut")?;
                m.serialize_entry("entries", &entries)?;
                m.end()
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
enum RawLiteral {
    Finite { index: u16 },
    DirectSum { support: BTreeMap<String, u32> },
    PolyHeis {
        #[serde(default)]
        a: BTreeMap<String, u32>,
        #[serde(default)]
        b: BTreeMap<String, u32>,
        #[serde(default)]
        c: BTreeMap<String, u32>,
    },
    FinitaryUt { entries: Vec<[u32; 3]> },
}

fn support_from_keys<E: serde::de::Error>(
    m: BTreeMap<String, u32>,
) -> std::result::Result<SupportMap, E> {
    let mut pairs = Vec::with_capacity(m.len());
    for (k, v) in m {
        let i: i32 = k.parse().map_err(|_| E::custom(format!("bad index key {k:?}")))?;
        pairs.push((i, v));
    }
    Ok(SupportMap::from_pairs(pairs))
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(match RawLiteral::deserialize(d)? {
            RawLiteral::Finite { index } => GroupElement::Base(index),
            RawLiteral::DirectSum { support } => {
                GroupElement::DirectSum(support_from_keys(support)?)
            }
            RawLiteral::PolyHeis { a, b, c } => GroupElement::PolyHeis(
                support_from_keys(a)?,
                support_from_keys(b)?,
                support_from_keys(c)?,
            ),
            RawLiteral::FinitaryUt { entries } => GroupElement::FinitaryUt(
                UtMatrix::from_entries(entries.into_iter().map(|[i, j, v]| (i, j, v)))
                    .ok_or_else(|| D::Error::custom("entries must satisfy 1 <= row < col"))?,
            ),
        })
    }
}

/// Parses a literal and checks it against `family`.
pub fn parse_in(family: &GroupFamily, value: &serde_json::Value) -> Result<GroupElement> {
    let x = GroupElement::deserialize(value).map_err(|e| Error::InvalidElement(e.to_string()))?;
    family.validate(&x)?;
    Ok(x)
}

/// Canonical literal text for `x`.
pub fn to_literal(x: &GroupElement) -> String {
    serde_json::to_string(x).expect("element literals always serialize")
}
