//! Finitely described endomorphisms.
//!
//! An [`EndoSpec`] is the declarative description found in scenario files;
//! an [`Endo`] is a spec bound to a family and checked to be a
//! homomorphism: exhaustively on finite tables, by fixed-seed sampling on
//! the infinite families.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::element::GroupElement;
use crate::error::{Error, Result};
use crate::family::GroupFamily;
use crate::fingen::{ElementSet, FiniteSubgroup};

/// Number of sampled pairs in homomorphism and compatibility checks.
pub const SAMPLE_PAIRS: usize = 1000;
/// Seed of the sampled checks run at construction.
pub const SAMPLE_SEED: u64 = 0x5E_ED0F_E4D0;

/// ```json
/// {"endo":"identity"}
/// {"endo":"shift","k":1}
/// {"endo":"diagonal","map":[0,1,0,1,0,1,0,1]}
/// {"endo":"t_scale"}
/// {"endo":"inner","g":{"family":"finite","index":3}}
/// {"endo":"compose","list":[{"endo":"shift","k":1},{"endo":"t_scale"}]}
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "endo", rename_all = "snake_case", deny_unknown_fields)]
pub enum EndoSpec {
    Identity,
    /// Index translation: `DirectSum` supports move by `k`; on
    /// `PolyHeisenberg`, `(a,b,c) -> (t^k a, t^k b, t^2k c)`; on
    /// `FinitaryUt` entry `(i,j)` moves to `(i+k, j+k)` (`k >= 0`).
    Shift { k: i32 },
    /// An endomorphism of the base table, applied coordinatewise on
    /// `DirectSum` and directly on `Finite`.
    Diagonal { map: Vec<u16> },
    /// `(a,b,c) -> (t a, t b, t^2 c)` on `PolyHeisenberg`.
    TScale,
    /// `x -> g^-1 x g`.
    Inner { g: GroupElement },
    /// `list[0] o list[1] o ... `: the last map is applied first.
    Compose { list: Vec<EndoSpec> },
}

#[derive(Clone, Debug)]
enum Compiled {
    Identity,
    Shift(i32),
    Diagonal(Vec<u16>),
    Inner { g: GroupElement, g_inv: GroupElement },
    Compose(Vec<Compiled>),
}

/// A verified endomorphism of a concrete family.
#[derive(Clone, Debug)]
pub struct Endo {
    spec: EndoSpec,
    family: GroupFamily,
    compiled: Compiled,
}

fn compile(spec: &EndoSpec, family: &GroupFamily) -> Result<Compiled> {
    let unsupported = |what: &str| Err(Error::UnsupportedEndo(format!("{what} on {family:?}")));
    Ok(match spec {
        EndoSpec::Identity => Compiled::Identity,
        EndoSpec::Shift { k } => match family {
            GroupFamily::Finite(_) => return unsupported("shift"),
            GroupFamily::FinitaryUt { .. } if *k < 0 => {
                return unsupported("negative shift");
            }
            _ => Compiled::Shift(*k),
        },
        EndoSpec::TScale => match family {
            GroupFamily::PolyHeisenberg { .. } => Compiled::Shift(1),
            _ => return unsupported("t_scale"),
        },
        EndoSpec::Diagonal { map } => match family {
            GroupFamily::Finite(t) | GroupFamily::DirectSum(t) => {
                t.check_homomorphism(map)?;
                Compiled::Diagonal(map.clone())
            }
            _ => return unsupported("diagonal"),
        },
        EndoSpec::Inner { g } => {
            family.validate(g)?;
            Compiled::Inner { g: g.clone(), g_inv: family.inverse(g)? }
        }
        EndoSpec::Compose { list } => {
            Compiled::Compose(list.iter().map(|s| compile(s, family)).collect::<Result<_>>()?)
        }
    })
}

fn apply_compiled(c: &Compiled, family: &GroupFamily, x: &GroupElement) -> Result<GroupElement> {
    use GroupElement as E;
    Ok(match c {
        Compiled::Identity => x.clone(),
        Compiled::Shift(k) => match x {
            E::DirectSum(s) => E::DirectSum(s.shift(*k)),
            E::PolyHeis(a, b, cc) => E::PolyHeis(a.shift(*k), b.shift(*k), cc.shift(2 * *k)),
            E::FinitaryUt(m) => E::FinitaryUt(m.shift(*k as u32)),
            E::Base(_) => unreachable!("shift is rejected on finite families"),
        },
        Compiled::Diagonal(map) => match x {
            E::Base(i) => E::Base(map[*i as usize]),
            E::DirectSum(s) => E::DirectSum(s.map_values(|v| map[v as usize] as u32)),
            _ => unreachable!("diagonal only compiles on table families"),
        },
        Compiled::Inner { g, g_inv } => family.mul(g_inv, &family.mul(x, g)?)?,
        Compiled::Compose(list) => {
            let mut y = x.clone();
            for f in list.iter().rev() {
                y = apply_compiled(f, family, &y)?;
            }
            y
        }
    })
}

impl Endo {
    /// Binds `spec` to `family` and verifies the homomorphism property.
    pub fn new(spec: EndoSpec, family: &GroupFamily) -> Result<Self> {
        let compiled = compile(&spec, family)?;
        let endo = Endo { spec, family: family.clone(), compiled };
        endo.verify_sampled(SAMPLE_SEED)?;
        Ok(endo)
    }

    pub fn identity(family: &GroupFamily) -> Self {
        Endo { spec: EndoSpec::Identity, family: family.clone(), compiled: Compiled::Identity }
    }

    pub fn spec(&self) -> &EndoSpec {
        &self.spec
    }

    pub fn family(&self) -> &GroupFamily {
        &self.family
    }

    /// Homomorphism check: exhaustive on finite tables, otherwise on
    /// `SAMPLE_PAIRS` random pairs drawn from `seed`.
    pub fn verify_sampled(&self, seed: u64) -> Result<()> {
        let fam = &self.family;
        let check = |x: &GroupElement, y: &GroupElement| -> Result<()> {
            let lhs = self.apply(&fam.mul(x, y)?)?;
            let rhs = fam.mul(&self.apply(x)?, &self.apply(y)?)?;
            if lhs != rhs {
                return Err(Error::NotHomomorphism(format!("{:?} fails on sampled pair", self.spec)));
            }
            Ok(())
        };
        match fam {
            GroupFamily::Finite(t) => {
                let n = t.order() as u16;
                for a in 0..n {
                    for b in 0..n {
                        check(&GroupElement::Base(a), &GroupElement::Base(b))?;
                    }
                }
            }
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..SAMPLE_PAIRS {
                    let x = fam.random_element(&mut rng);
                    let y = fam.random_element(&mut rng);
                    check(&x, &y)?;
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        if x.tag() != self.family.tag() {
            return Err(Error::FamilyMismatch {
                left: self.family.tag().into(),
                right: x.tag().into(),
            });
        }
        apply_compiled(&self.compiled, &self.family, x)
    }

    /// Image of a set, deduplicated, in the order of first appearance.
    pub fn apply_set(&self, a: &ElementSet) -> Result<ElementSet> {
        let images: Vec<GroupElement> =
            a.iter().collect::<Vec<_>>().par_iter().map(|x| self.apply(x)).collect::<Result<_>>()?;
        Ok(images.into_iter().collect())
    }

    /// `phi(H) <= H`, by an exact sweep.
    pub fn is_invariant(&self, h: &FiniteSubgroup) -> Result<bool> {
        for x in h.elements() {
            if !h.contains(&self.apply(x)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `self o self o ... ` (`k` times).
    pub fn power(&self, k: usize) -> Result<Endo> {
        Endo::new(EndoSpec::Compose { list: vec![self.spec.clone(); k] }, &self.family)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::{SupportMap, UtMatrix};
    use crate::table::BaseGroupTable;

    fn poly(exps: &[i32]) -> SupportMap {
        SupportMap::from_pairs(exps.iter().map(|&e| (e, 1)))
    }

    #[test]
    fn identity_and_shift_on_direct_sum() {
        let fam = GroupFamily::direct_sum(BaseGroupTable::cyclic(2).unwrap());
        let x = GroupElement::DirectSum(SupportMap::single(0, 1));
        assert_eq!(Endo::identity(&fam).apply(&x).unwrap(), x);
        let s = Endo::new(EndoSpec::Shift { k: 1 }, &fam).unwrap();
        assert_eq!(s.apply(&x).unwrap(), GroupElement::DirectSum(SupportMap::single(1, 1)));

        let h = FiniteSubgroup::closure(&fam, &[x], 10).unwrap();
        let img = s.apply_set(h.elements()).unwrap();
        assert_eq!(img.len(), 2);
        assert!(img.contains(&GroupElement::DirectSum(SupportMap::single(1, 1))));
        assert!(!s.is_invariant(&h).unwrap());
        assert!(Endo::identity(&fam).is_invariant(&h).unwrap());
    }

    #[test]
    fn t_scale_examples() {
        let fam = GroupFamily::poly_heisenberg(2).unwrap();
        let phi = Endo::new(EndoSpec::TScale, &fam).unwrap();
        let x = GroupElement::PolyHeis(poly(&[0]), poly(&[0]), poly(&[]));
        assert_eq!(
            phi.apply(&x).unwrap(),
            GroupElement::PolyHeis(poly(&[1]), poly(&[1]), poly(&[]))
        );
        let f = FiniteSubgroup::closure(
            &fam,
            &[
                GroupElement::PolyHeis(poly(&[0]), poly(&[]), poly(&[])),
                GroupElement::PolyHeis(poly(&[]), poly(&[0]), poly(&[])),
            ],
            100,
        )
        .unwrap();
        assert_eq!(phi.apply_set(f.elements()).unwrap().len(), f.order());

        // the finite piece {(0,0,c) : deg c <= 2} is not invariant
        let piece = FiniteSubgroup::closure(
            &fam,
            &(0..=2)
                .map(|e| GroupElement::PolyHeis(poly(&[]), poly(&[]), poly(&[e])))
                .collect::<Vec<_>>(),
            100,
        )
        .unwrap();
        assert_eq!(piece.order(), 8);
        assert!(!phi.is_invariant(&piece).unwrap());
    }

    #[test]
    fn unsupported_combinations() {
        let fin = GroupFamily::finite(BaseGroupTable::cyclic(3).unwrap());
        assert!(matches!(
            Endo::new(EndoSpec::Shift { k: 1 }, &fin),
            Err(Error::UnsupportedEndo(_))
        ));
        assert!(Endo::new(EndoSpec::TScale, &fin).is_err());
        let ut = GroupFamily::finitary_ut(2).unwrap();
        assert!(Endo::new(EndoSpec::Shift { k: -1 }, &ut).is_err());
        assert!(Endo::new(EndoSpec::Diagonal { map: vec![0, 1] }, &ut).is_err());
        assert!(matches!(
            Endo::new(EndoSpec::Diagonal { map: vec![0, 2, 2] }, &fin),
            Err(Error::NotHomomorphism(_))
        ));
    }

    #[test]
    fn compose_applies_last_first() {
        let fam = GroupFamily::direct_sum(BaseGroupTable::cyclic(4).unwrap());
        let double = EndoSpec::Diagonal { map: vec![0, 2, 0, 2] };
        let shift = EndoSpec::Shift { k: 3 };
        let both =
            Endo::new(EndoSpec::Compose { list: vec![shift.clone(), double.clone()] }, &fam)
                .unwrap();
        let f = Endo::new(shift, &fam).unwrap();
        let g = Endo::new(double, &fam).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let x = fam.random_element(&mut rng);
            assert_eq!(both.apply(&x).unwrap(), f.apply(&g.apply(&x).unwrap()).unwrap());
        }
    }

    #[test]
    fn inner_preserves_element_order() {
        let fam = GroupFamily::finitary_ut(2).unwrap();
        let g = GroupElement::FinitaryUt(
            UtMatrix::from_entries([(1, 2, 1), (2, 4, 1), (3, 4, 1)]).unwrap(),
        );
        let phi = Endo::new(EndoSpec::Inner { g }, &fam).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..300 {
            let x = fam.random_element(&mut rng);
            let y = phi.apply(&x).unwrap();
            assert_eq!(
                fam.element_order(&x, 1000).unwrap(),
                fam.element_order(&y, 1000).unwrap()
            );
        }
    }

    #[test]
    fn spec_json_shapes() {
        let spec: EndoSpec = serde_json::from_str(
            r#"{"endo":"compose","list":[{"endo":"shift","k":1},{"endo":"t_scale"},
                {"endo":"inner","g":{"family":"finite","index":3}},{"endo":"identity"}]}"#,
        )
        .unwrap();
        let EndoSpec::Compose { list } = &spec else { panic!() };
        assert_eq!(list.len(), 4);
        assert_eq!(list[1], EndoSpec::TScale);
        let back: EndoSpec = serde_json::from_str(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
        assert!(serde_json::from_str::<EndoSpec>(r#"{"endo":"shift","k":1,"x":2}"#).is_err());
    }
}
