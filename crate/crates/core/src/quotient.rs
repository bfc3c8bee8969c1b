//! Invariant subgroups that may be infinite, and explicit models of the
//! corresponding quotients.
//!
//! A [`SubgroupDescriptor`] is a membership predicate together with an
//! embedding of a concrete family onto the subgroup. Restricting an
//! endomorphism produces an [`Endo`] on that embedded family. A
//! [`QuotientModel`] is a hand-coded surjection onto a concrete family
//! with a canonical set-theoretic section; only the built-in shapes below
//! are supported, anything else is refused with
//! [`Error::UnsupportedQuotient`].

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::element::{GroupElement, SupportMap};
use crate::endo::{Endo, EndoSpec, SAMPLE_PAIRS, SAMPLE_SEED};
use crate::error::{Error, Result};
use crate::family::GroupFamily;
use crate::fingen::{is_normal_in, quotient_table, subgroup_table, FiniteSubgroup, QuotientTable};
use crate::series;
use crate::table::BaseGroupTable;

#[derive(Clone, Debug)]
enum Shape {
    Trivial,
    /// `DirectSum(S)` inside `DirectSum(B)` for a subgroup `S <= B`.
    Coordinatewise { base: FiniteSubgroup, sub: Arc<QuotientTable> },
    /// `{(0, 0, c)}` inside `PolyHeisenberg(p)`.
    HeisenbergCenter { p: u32 },
    /// A subgroup `N` of `Finite(B)`.
    Finite { sub: FiniteSubgroup, table: Arc<QuotientTable> },
}

/// A subgroup of an ambient family, possibly infinite.
#[derive(Clone, Debug)]
pub struct SubgroupDescriptor {
    ambient: GroupFamily,
    shape: Shape,
    embedded: GroupFamily,
}

fn base_index(x: &GroupElement) -> u16 {
    match x {
        GroupElement::Base(i) => *i,
        other => unreachable!("table subgroup holds {other:?}"),
    }
}

impl SubgroupDescriptor {
    pub fn trivial(ambient: &GroupFamily) -> Self {
        SubgroupDescriptor {
            ambient: ambient.clone(),
            shape: Shape::Trivial,
            embedded: GroupFamily::finite(BaseGroupTable::trivial()),
        }
    }

    /// `DirectSum(S)` for a subgroup `S` of the base table, given as a
    /// subgroup of `Finite(B)`.
    pub fn coordinatewise(ambient: &GroupFamily, base: FiniteSubgroup) -> Result<Self> {
        let GroupFamily::DirectSum(t) = ambient else {
            return Err(Error::Scenario("coordinatewise subgroups need a direct sum".into()));
        };
        if base.family() != &GroupFamily::Finite(t.clone()) {
            return Err(Error::Scenario("base subgroup lives in a different table".into()));
        }
        let sub = subgroup_table(&base)?;
        let embedded = GroupFamily::direct_sum(sub.table.clone());
        Ok(SubgroupDescriptor {
            ambient: ambient.clone(),
            shape: Shape::Coordinatewise { base, sub: Arc::new(sub) },
            embedded,
        })
    }

    pub fn heisenberg_center(ambient: &GroupFamily) -> Result<Self> {
        let GroupFamily::PolyHeisenberg { p } = ambient else {
            return Err(Error::Scenario("heisenberg center needs a PolyHeisenberg family".into()));
        };
        Ok(SubgroupDescriptor {
            ambient: ambient.clone(),
            shape: Shape::HeisenbergCenter { p: *p },
            embedded: GroupFamily::direct_sum(BaseGroupTable::cyclic(*p as usize)?),
        })
    }

    pub fn finite(ambient: &GroupFamily, sub: FiniteSubgroup) -> Result<Self> {
        if !matches!(ambient, GroupFamily::Finite(_)) || sub.family() != ambient {
            return Err(Error::Scenario("finite descriptors need a Finite family".into()));
        }
        let table = subgroup_table(&sub)?;
        let embedded = GroupFamily::finite(table.table.clone());
        Ok(SubgroupDescriptor {
            ambient: ambient.clone(),
            shape: Shape::Finite { sub, table: Arc::new(table) },
            embedded,
        })
    }

    /// The center of the ambient family, where it has a finite description.
    pub fn center(ambient: &GroupFamily) -> Result<Self> {
        match ambient {
            GroupFamily::PolyHeisenberg { .. } => Self::heisenberg_center(ambient),
            GroupFamily::DirectSum(t) => {
                Self::coordinatewise(ambient, series::center(&FiniteSubgroup::whole_table(t))?)
            }
            GroupFamily::Finite(t) => {
                Self::finite(ambient, series::center(&FiniteSubgroup::whole_table(t))?)
            }
            // every nonidentity I + M fails to commute with I + E_{j,j+1}
            // for j the last column of M
            GroupFamily::FinitaryUt { .. } => Ok(Self::trivial(ambient)),
        }
    }

    /// Lifts a table-level subgroup construction to the ambient family:
    /// coordinatewise on a direct sum, as is on a finite table.
    pub fn from_base_subgroup(ambient: &GroupFamily, base: FiniteSubgroup) -> Result<Self> {
        match ambient {
            GroupFamily::DirectSum(_) => Self::coordinatewise(ambient, base),
            GroupFamily::Finite(_) => Self::finite(ambient, base),
            _ => Err(Error::Scenario(format!("no table-level subgroups in {ambient:?}"))),
        }
    }

    pub fn ambient(&self) -> &GroupFamily {
        &self.ambient
    }

    /// The family the subgroup is isomorphic to.
    pub fn embedded_family(&self) -> &GroupFamily {
        &self.embedded
    }

    pub fn name(&self) -> String {
        match &self.shape {
            Shape::Trivial => "trivial".into(),
            Shape::Coordinatewise { base, .. } => format!("coordinatewise(order {})", base.order()),
            Shape::HeisenbergCenter { .. } => "heisenberg_center".into(),
            Shape::Finite { sub, .. } => format!("finite(order {})", sub.order()),
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        match (&self.shape, x) {
            (Shape::Trivial, _) => self.ambient.is_identity(x),
            (Shape::Coordinatewise { base, .. }, GroupElement::DirectSum(s)) => s
                .entries()
                .iter()
                .all(|&(_, v)| base.contains(&GroupElement::Base(v as u16))),
            (Shape::HeisenbergCenter { .. }, GroupElement::PolyHeis(a, b, _)) => {
                a.is_empty() && b.is_empty()
            }
            (Shape::Finite { sub, .. }, _) => sub.contains(x),
            _ => false,
        }
    }

    /// Embedded element to ambient element.
    pub fn embed(&self, y: &GroupElement) -> Result<GroupElement> {
        self.embedded.validate(y)?;
        Ok(match (&self.shape, y) {
            (Shape::Trivial, _) => self.ambient.identity(),
            (Shape::Coordinatewise { sub, .. }, GroupElement::DirectSum(s)) => {
                GroupElement::DirectSum(s.map_values(|v| base_index(&sub.reps[v as usize]) as u32))
            }
            (Shape::HeisenbergCenter { .. }, GroupElement::DirectSum(s)) => {
                GroupElement::PolyHeis(SupportMap::new(), SupportMap::new(), s.clone())
            }
            (Shape::Finite { table, .. }, GroupElement::Base(i)) => table.reps[*i as usize].clone(),
            _ => unreachable!("validated against the embedded family"),
        })
    }

    /// Ambient element of the subgroup to embedded element.
    pub fn pull(&self, x: &GroupElement) -> Result<GroupElement> {
        if !self.contains(x) {
            return Err(Error::NotContained);
        }
        Ok(match (&self.shape, x) {
            (Shape::Trivial, _) => self.embedded.identity(),
            (Shape::Coordinatewise { sub, .. }, GroupElement::DirectSum(s)) => {
                GroupElement::DirectSum(s.map_values(|v| {
                    sub.project(&GroupElement::Base(v as u16)).expect("member of S") as u32
                }))
            }
            (Shape::HeisenbergCenter { .. }, GroupElement::PolyHeis(_, _, c)) => {
                GroupElement::DirectSum(c.clone())
            }
            (Shape::Finite { table, .. }, _) => {
                GroupElement::Base(table.project(x).expect("member of N"))
            }
            _ => unreachable!("contains() accepted the element"),
        })
    }

    /// Exact where the shape allows it, otherwise sampled.
    pub fn is_normal(&self) -> Result<bool> {
        match &self.shape {
            Shape::Trivial | Shape::HeisenbergCenter { .. } => Ok(true),
            Shape::Coordinatewise { base, .. } => {
                let t = self.ambient.table().expect("direct sum");
                is_normal_in(base, &FiniteSubgroup::whole_table(t))
            }
            Shape::Finite { sub, .. } => {
                let t = self.ambient.table().expect("finite");
                is_normal_in(sub, &FiniteSubgroup::whole_table(t))
            }
        }
    }

    /// Exact centrality check, confirmed by sampled commutation.
    pub fn is_central(&self) -> Result<bool> {
        let exact = match &self.shape {
            Shape::Trivial | Shape::HeisenbergCenter { .. } => true,
            Shape::Coordinatewise { base, .. } | Shape::Finite { sub: base, .. } => {
                let t = self.ambient.table().expect("table family");
                let z = series::center(&FiniteSubgroup::whole_table(t))?;
                base.is_subgroup_of(&z)
            }
        };
        if exact {
            let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ 0xC);
            for _ in 0..SAMPLE_PAIRS {
                let n = self.embed(&self.embedded.random_element(&mut rng))?;
                let x = self.ambient.random_element(&mut rng);
                if self.ambient.mul(&n, &x)? != self.ambient.mul(&x, &n)? {
                    return Err(Error::NotCentral(format!("{} fails on a sample", self.name())));
                }
            }
        }
        Ok(exact)
    }

    /// The restriction of `phi` as an endomorphism of the embedded family.
    /// Fails with [`Error::NotInvariant`] when `phi` does not preserve the
    /// subgroup; compatibility `embed o psi = phi o embed` is sampled.
    pub fn restrict(&self, phi: &Endo) -> Result<Endo> {
        if phi.family() != &self.ambient {
            return Err(Error::FamilyMismatch {
                left: self.ambient.tag().into(),
                right: phi.family().tag().into(),
            });
        }
        let spec = match &self.shape {
            Shape::Trivial => EndoSpec::Identity,
            Shape::Finite { table, .. } => {
                let mut map = Vec::with_capacity(table.order());
                for rep in &table.reps {
                    let img = phi.apply(rep)?;
                    map.push(table.project(&img).ok_or_else(|| {
                        Error::NotInvariant(format!("{} leaves the subgroup", self.name()))
                    })?);
                }
                EndoSpec::Diagonal { map }
            }
            _ => self.restrict_spec(phi.spec())?,
        };
        let psi = Endo::new(spec, &self.embedded)?;
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ 0xE);
        for _ in 0..SAMPLE_PAIRS {
            let y = self.embedded.random_element(&mut rng);
            let lhs = self.embed(&psi.apply(&y)?)?;
            let rhs = phi.apply(&self.embed(&y)?)?;
            if lhs != rhs {
                if !self.contains(&rhs) {
                    return Err(Error::NotInvariant(format!("{} leaves the subgroup", self.name())));
                }
                return Err(Error::NotCompatible(format!("restriction to {}", self.name())));
            }
        }
        Ok(psi)
    }

    fn restrict_spec(&self, spec: &EndoSpec) -> Result<EndoSpec> {
        let not_inv = || Error::NotInvariant(format!("{} under {spec:?}", self.name()));
        Ok(match (&self.shape, spec) {
            (_, EndoSpec::Identity) => EndoSpec::Identity,
            (_, EndoSpec::Compose { list }) => EndoSpec::Compose {
                list: list.iter().map(|s| self.restrict_spec(s)).collect::<Result<_>>()?,
            },
            (Shape::Coordinatewise { .. }, EndoSpec::Shift { k }) => EndoSpec::Shift { k: *k },
            (Shape::Coordinatewise { sub, .. }, EndoSpec::Diagonal { map }) => {
                let mut out = Vec::with_capacity(sub.order());
                for rep in &sub.reps {
                    let img = GroupElement::Base(map[base_index(rep) as usize]);
                    out.push(sub.project(&img).ok_or_else(not_inv)?);
                }
                EndoSpec::Diagonal { map: out }
            }
            (Shape::Coordinatewise { .. }, EndoSpec::Inner { .. }) => {
                if self.is_central()? {
                    EndoSpec::Identity
                } else {
                    return Err(Error::UnsupportedEndo(
                        "coordinatewise restriction of a non-central conjugation".into(),
                    ));
                }
            }
            (Shape::HeisenbergCenter { .. }, EndoSpec::Shift { k }) => EndoSpec::Shift { k: 2 * k },
            (Shape::HeisenbergCenter { .. }, EndoSpec::TScale) => EndoSpec::Shift { k: 2 },
            (Shape::HeisenbergCenter { .. }, EndoSpec::Inner { .. }) => EndoSpec::Identity,
            _ => {
                return Err(Error::UnsupportedEndo(format!(
                    "restriction of {spec:?} to {}",
                    self.name()
                )))
            }
        })
    }

    /// The built-in model of `ambient / self`.
    pub fn quotient_model(&self) -> Result<QuotientModel> {
        if !self.is_normal()? {
            return Err(Error::NotNormal);
        }
        let (kind, target) = match &self.shape {
            Shape::Trivial => (ModelKind::Identity, self.ambient.clone()),
            Shape::Coordinatewise { base, .. } => {
                let t = self.ambient.table().expect("direct sum");
                let q = quotient_table(&FiniteSubgroup::whole_table(t), base)?;
                let target = GroupFamily::direct_sum(q.table.clone());
                (ModelKind::Coordinatewise(Arc::new(q)), target)
            }
            Shape::HeisenbergCenter { p } => {
                let zp = BaseGroupTable::cyclic(*p as usize)?;
                let pairs = BaseGroupTable::direct_product(&zp, &zp).map_err(|_| {
                    Error::UnsupportedQuotient(format!("Z_{p} x Z_{p} exceeds the table cap"))
                })?;
                (ModelKind::HeisenbergCenter { p: *p }, GroupFamily::direct_sum(pairs))
            }
            Shape::Finite { sub, .. } => {
                let t = self.ambient.table().expect("finite");
                let q = quotient_table(&FiniteSubgroup::whole_table(t), sub)?;
                let target = GroupFamily::finite(q.table.clone());
                (ModelKind::Finite(Arc::new(q)), target)
            }
        };
        Ok(QuotientModel { source: self.ambient.clone(), target, kind })
    }
}

#[derive(Clone, Debug)]
enum ModelKind {
    Identity,
    /// `DirectSum(B) / DirectSum(S) = DirectSum(B/S)`.
    Coordinatewise(Arc<QuotientTable>),
    /// `PolyHeisenberg(p) / center = DirectSum(Z_p x Z_p)`, `(a, b, c) -> (a, b)`,
    /// coordinate `i` carrying `a_i + p * b_i`.
    HeisenbergCenter { p: u32 },
    /// `Finite(B) / N = Finite(B/N)`.
    Finite(Arc<QuotientTable>),
}

/// An explicit model `pi: G -> G/H` with a canonical section.
#[derive(Clone, Debug)]
pub struct QuotientModel {
    source: GroupFamily,
    target: GroupFamily,
    kind: ModelKind,
}

impl QuotientModel {
    pub fn source(&self) -> &GroupFamily {
        &self.source
    }

    pub fn target(&self) -> &GroupFamily {
        &self.target
    }

    /// True when the section is itself a homomorphism, so every correction
    /// `s(x) s(y) s(xy)^{-1}` is trivial.
    pub fn section_is_homomorphism(&self) -> bool {
        matches!(self.kind, ModelKind::Identity)
    }

    pub fn project(&self, x: &GroupElement) -> Result<GroupElement> {
        self.source.validate(x)?;
        Ok(match (&self.kind, x) {
            (ModelKind::Identity, _) => x.clone(),
            (ModelKind::Coordinatewise(q), GroupElement::DirectSum(s)) => GroupElement::DirectSum(
                s.map_values(|v| q.project(&GroupElement::Base(v as u16)).expect("in B") as u32),
            ),
            (ModelKind::HeisenbergCenter { p }, GroupElement::PolyHeis(a, b, _)) => {
                let pairs = a.zip_with(b, |x, y| x + p * y);
                GroupElement::DirectSum(pairs)
            }
            (ModelKind::Finite(q), _) => GroupElement::Base(q.project(x).expect("in B")),
            _ => unreachable!("validated against the source family"),
        })
    }

    /// Canonical lift: same support as the image, each coordinate lifted to
    /// its minimal coset representative (`c = 0` in the Heisenberg case).
    /// Sends the identity to the identity.
    pub fn section(&self, y: &GroupElement) -> Result<GroupElement> {
        self.target.validate(y)?;
        Ok(match (&self.kind, y) {
            (ModelKind::Identity, _) => y.clone(),
            (ModelKind::Coordinatewise(q), GroupElement::DirectSum(s)) => {
                GroupElement::DirectSum(s.map_values(|c| base_index(&q.reps[c as usize]) as u32))
            }
            (ModelKind::HeisenbergCenter { p }, GroupElement::DirectSum(s)) => {
                let a = s.map_values(|v| v % p);
                let b = s.map_values(|v| v / p);
                GroupElement::PolyHeis(a, b, SupportMap::new())
            }
            (ModelKind::Finite(q), GroupElement::Base(c)) => q.reps[*c as usize].clone(),
            _ => unreachable!("validated against the target family"),
        })
    }

    /// The map induced by `phi` on the quotient. Requires `phi` to preserve
    /// the kernel; `psi o pi = pi o phi` is verified (exactly on tables,
    /// sampled otherwise).
    pub fn induced(&self, phi: &Endo) -> Result<Endo> {
        if phi.family() != &self.source {
            return Err(Error::FamilyMismatch {
                left: self.source.tag().into(),
                right: phi.family().tag().into(),
            });
        }
        let spec = match &self.kind {
            ModelKind::Identity => phi.spec().clone(),
            ModelKind::Finite(q) => {
                let t = self.source.table().expect("finite");
                let mut map = vec![u16::MAX; q.order()];
                for x in 0..t.order() as u16 {
                    let x = GroupElement::Base(x);
                    let c = q.project(&x).unwrap() as usize;
                    let img = q.project(&phi.apply(&x)?).unwrap();
                    if map[c] == u16::MAX {
                        map[c] = img;
                    } else if map[c] != img {
                        return Err(Error::NotCompatible("kernel is not preserved".into()));
                    }
                }
                EndoSpec::Diagonal { map }
            }
            _ => self.induced_spec(phi.spec())?,
        };
        let psi = Endo::new(spec, &self.target)?;
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ 0x1D);
        for _ in 0..SAMPLE_PAIRS {
            let x = self.source.random_element(&mut rng);
            if psi.apply(&self.project(&x)?)? != self.project(&phi.apply(&x)?)? {
                return Err(Error::NotCompatible(format!("{:?} on a sample", phi.spec())));
            }
        }
        Ok(psi)
    }

    fn induced_spec(&self, spec: &EndoSpec) -> Result<EndoSpec> {
        Ok(match (&self.kind, spec) {
            (_, EndoSpec::Identity) => EndoSpec::Identity,
            (_, EndoSpec::Compose { list }) => EndoSpec::Compose {
                list: list.iter().map(|s| self.induced_spec(s)).collect::<Result<_>>()?,
            },
            (_, EndoSpec::Inner { g }) => EndoSpec::Inner { g: self.project(g)? },
            (ModelKind::Coordinatewise(_), EndoSpec::Shift { k }) => EndoSpec::Shift { k: *k },
            (ModelKind::Coordinatewise(q), EndoSpec::Diagonal { map }) => {
                let t = self.source.table().expect("direct sum");
                let mut out = vec![u16::MAX; q.order()];
                for x in 0..t.order() as u16 {
                    let c = q.project(&GroupElement::Base(x)).unwrap() as usize;
                    let img = q.project(&GroupElement::Base(map[x as usize])).unwrap();
                    if out[c] == u16::MAX {
                        out[c] = img;
                    } else if out[c] != img {
                        return Err(Error::NotCompatible("diagonal map moves the kernel".into()));
                    }
                }
                EndoSpec::Diagonal { map: out }
            }
            (ModelKind::HeisenbergCenter { .. }, EndoSpec::Shift { k }) => EndoSpec::Shift { k: *k },
            (ModelKind::HeisenbergCenter { .. }, EndoSpec::TScale) => EndoSpec::Shift { k: 1 },
            _ => {
                return Err(Error::UnsupportedQuotient(format!("induced map of {spec:?}")));
            }
        })
    }

    /// Sampled checks: `pi` is a homomorphism, kills exactly the kernel,
    /// and the section is a right inverse sending 1 to 1.
    pub fn verify(&self, kernel: &SubgroupDescriptor, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let src = &self.source;
        for _ in 0..SAMPLE_PAIRS {
            let x = src.random_element(&mut rng);
            let y = src.random_element(&mut rng);
            let lhs = self.project(&src.mul(&x, &y)?)?;
            let rhs = self.target.mul(&self.project(&x)?, &self.project(&y)?)?;
            if lhs != rhs {
                return Err(Error::NotHomomorphism("projection".into()));
            }
            if self.target.is_identity(&self.project(&x)?) != kernel.contains(&x) {
                return Err(Error::NotCompatible("projection kernel".into()));
            }
            let n = kernel.embed(&kernel.embedded_family().random_element(&mut rng))?;
            if !self.target.is_identity(&self.project(&n)?) {
                return Err(Error::NotCompatible("projection kernel".into()));
            }
            let q = self.target.random_element(&mut rng);
            if self.project(&self.section(&q)?)? != q {
                return Err(Error::NotCompatible("section".into()));
            }
        }
        if !src.is_identity(&self.section(&self.target.identity())?) {
            return Err(Error::NotCompatible("section must fix the identity".into()));
        }
        Ok(())
    }
}
