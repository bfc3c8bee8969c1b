//! The four locally finite group families and their arithmetic.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::element::{poly, GroupElement, SupportMap, UtMatrix};
use crate::error::{Error, Result};
use crate::table::BaseGroupTable;

pub const DEFAULT_ORDER_CAP: u64 = 1_000_000;

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// An ambient locally finite group.
///
/// * `Finite(B)`: the table group itself.
/// * `DirectSum(B)`: finitely supported maps `Z -> B`, pointwise product.
/// * `PolyHeisenberg { p }`: triples of Laurent polynomials over `F_p` with
///   `(a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b')`, i.e. 3x3 upper
///   unitriangular matrices over `F_p[t, 1/t]`. Nilpotent of class 2.
/// * `FinitaryUt { p }`: `I + M` with `M` strictly upper triangular over
///   `F_p`, indexed by positive integers, finitely many nonzero entries.
#[derive(Clone, PartialEq, Eq)]
pub enum GroupFamily {
    Finite(Arc<BaseGroupTable>),
    DirectSum(Arc<BaseGroupTable>),
    PolyHeisenberg { p: u32 },
    FinitaryUt { p: u32 },
}

impl fmt::Debug for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupFamily::Finite(t) => write!(f, "Finite(order {})", t.order()),
            GroupFamily::DirectSum(t) => write!(f, "DirectSum(order {})", t.order()),
            GroupFamily::PolyHeisenberg { p } => write!(f, "PolyHeisenberg({p})"),
            GroupFamily::FinitaryUt { p } => write!(f, "FinitaryUt({p})"),
        }
    }
}

impl GroupFamily {
    pub fn finite(table: BaseGroupTable) -> Self {
        GroupFamily::Finite(Arc::new(table))
    }

    pub fn direct_sum(table: BaseGroupTable) -> Self {
        GroupFamily::DirectSum(Arc::new(table))
    }

    pub fn poly_heisenberg(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(GroupFamily::PolyHeisenberg { p })
    }

    pub fn finitary_ut(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(GroupFamily::FinitaryUt { p })
    }

    pub fn tag(&self) -> &'static str {
        match self {
            GroupFamily::Finite(_) => "finite",
            GroupFamily::DirectSum(_) => "direct_sum",
            GroupFamily::PolyHeisenberg { .. } => "poly_heis",
            GroupFamily::FinitaryUt { .. } => "finitary_ut",
        }
    }

    /// The base table of `Finite` and `DirectSum` families.
    pub fn table(&self) -> Option<&Arc<BaseGroupTable>> {
        match self {
            GroupFamily::Finite(t) | GroupFamily::DirectSum(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            GroupFamily::Finite(t) | GroupFamily::DirectSum(t) => t.is_abelian(),
            _ => false,
        }
    }

    /// Nilpotency class of the base table (for `Finite`/`DirectSum`; a
    /// direct sum has the class of its base), or the known class of the
    /// Heisenberg family. `None` when not nilpotent or unbounded.
    pub fn nilpotency_class(&self) -> Option<u32> {
        match self {
            GroupFamily::Finite(t) | GroupFamily::DirectSum(t) => {
                let whole = crate::fingen::FiniteSubgroup::whole_table(t);
                crate::series::lower_central_series(&whole, usize::MAX)
                    .ok()
                    .and_then(|r| r.class.value())
            }
            GroupFamily::PolyHeisenberg { .. } => Some(2),
            GroupFamily::FinitaryUt { .. } => None,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            GroupFamily::Finite(_) => GroupElement::Base(0),
            GroupFamily::DirectSum(_) => GroupElement::DirectSum(SupportMap::new()),
            GroupFamily::PolyHeisenberg { .. } => {
                GroupElement::PolyHeis(SupportMap::new(), SupportMap::new(), SupportMap::new())
            }
            GroupFamily::FinitaryUt { .. } => GroupElement::FinitaryUt(UtMatrix::new()),
        }
    }

    pub fn is_identity(&self, x: &GroupElement) -> bool {
        match x {
            GroupElement::Base(i) => *i == 0,
            GroupElement::DirectSum(s) => s.is_empty(),
            GroupElement::PolyHeis(a, b, c) => a.is_empty() && b.is_empty() && c.is_empty(),
            GroupElement::FinitaryUt(m) => m.is_empty(),
        }
    }

    fn mismatch(&self, x: &GroupElement) -> Error {
        Error::FamilyMismatch { left: self.tag().into(), right: x.tag().into() }
    }

    /// Checks that `x` is a canonical element of this family.
    pub fn validate(&self, x: &GroupElement) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidElement(msg));
        match (self, x) {
            (GroupFamily::Finite(t), GroupElement::Base(i)) => {
                if (*i as usize) < t.order() {
                    Ok(())
                } else {
                    bad(format!("index {i} out of range for order {}", t.order()))
                }
            }
            (GroupFamily::DirectSum(t), GroupElement::DirectSum(s)) => {
                if !s.is_canonical() {
                    return bad("support map not canonical".into());
                }
                match s.entries().iter().find(|&&(_, v)| v as usize >= t.order()) {
                    Some(&(i, v)) => bad(format!("value {v} at {i} out of range")),
                    None => Ok(()),
                }
            }
            (GroupFamily::PolyHeisenberg { p }, GroupElement::PolyHeis(a, b, c)) => {
                for m in [a, b, c] {
                    if !m.is_canonical() || m.entries().iter().any(|&(_, v)| v >= *p) {
                        return bad(format!("polynomial not canonical mod {p}"));
                    }
                }
                Ok(())
            }
            (GroupFamily::FinitaryUt { p }, GroupElement::FinitaryUt(m)) => {
                if !m.is_canonical() || m.entries().iter().any(|&(_, v)| v >= *p) {
                    return bad(format!("matrix not canonical mod {p}"));
                }
                Ok(())
            }
            _ => Err(self.mismatch(x)),
        }
    }

    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        use GroupElement as E;
        Ok(match (self, x, y) {
            (GroupFamily::Finite(t), E::Base(a), E::Base(b)) => E::Base(t.mul(*a, *b)),
            (GroupFamily::DirectSum(t), E::DirectSum(a), E::DirectSum(b)) => {
                E::DirectSum(a.zip_with(b, |u, v| t.mul(u as u16, v as u16) as u32))
            }
            (GroupFamily::PolyHeisenberg { p }, E::PolyHeis(a, b, c), E::PolyHeis(a2, b2, c2)) => {
                let cross = poly::mul(a, b2, *p);
                let c_new = poly::add(&poly::add(c, c2, *p), &cross, *p);
                E::PolyHeis(poly::add(a, a2, *p), poly::add(b, b2, *p), c_new)
            }
            (GroupFamily::FinitaryUt { p }, E::FinitaryUt(m), E::FinitaryUt(m2)) => {
                let prod = m.matmul(m2, *p);
                E::FinitaryUt(m.add(m2, *p).add(&prod, *p))
            }
            _ => {
                let culprit = if x.tag() != self.tag() { x } else { y };
                return Err(self.mismatch(culprit));
            }
        })
    }

    pub fn inverse(&self, x: &GroupElement) -> Result<GroupElement> {
        use GroupElement as E;
        Ok(match (self, x) {
            (GroupFamily::Finite(t), E::Base(a)) => E::Base(t.inv(*a)),
            (GroupFamily::DirectSum(t), E::DirectSum(a)) => {
                E::DirectSum(a.map_values(|v| t.inv(v as u16) as u32))
            }
            (GroupFamily::PolyHeisenberg { p }, E::PolyHeis(a, b, c)) => {
                // (a,b,c)^-1 = (-a, -b, ab - c)
                let c_new = poly::sub(&poly::mul(a, b, *p), c, *p);
                E::PolyHeis(poly::neg(a, *p), poly::neg(b, *p), c_new)
            }
            (GroupFamily::FinitaryUt { p }, E::FinitaryUt(m)) => {
                // (I + M)^-1 = I - M + M^2 - ... ; M is nilpotent
                let minus = m.neg(*p);
                let mut acc = UtMatrix::new();
                let mut term = minus.clone();
                while !term.is_empty() {
                    acc = acc.add(&term, *p);
                    term = term.matmul(&minus, *p);
                }
                E::FinitaryUt(acc)
            }
            _ => return Err(self.mismatch(x)),
        })
    }

    pub fn pow(&self, x: &GroupElement, mut k: u64) -> Result<GroupElement> {
        let mut base = x.clone();
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    /// `x^-1 y^-1 x y`.
    pub fn commutator(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        let xy = self.mul(x, y)?;
        let yx = self.mul(y, x)?;
        self.mul(&self.inverse(&yx)?, &xy)
    }

    /// `g^-1 x g`.
    pub fn conjugate(&self, x: &GroupElement, g: &GroupElement) -> Result<GroupElement> {
        self.mul(&self.inverse(g)?, &self.mul(x, g)?)
    }

    /// Least `k >= 1` with `x^k = 1`, failing beyond `cap`.
    pub fn element_order(&self, x: &GroupElement, cap: u64) -> Result<u64> {
        let mut y = x.clone();
        let mut k = 1;
        while !self.is_identity(&y) {
            if k >= cap {
                return Err(Error::OrderBudgetExceeded { cap });
            }
            y = self.mul(&y, x)?;
            k += 1;
        }
        Ok(k)
    }

    /// A random element with support in a small window around the origin.
    /// Only used for sampled verification, so the distribution is ad hoc.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> GroupElement {
        const SPREAD: i32 = 4;
        let sparse = |rng: &mut R, modulus: u32| {
            let n = rng.random_range(0..=4);
            SupportMap::from_pairs(
                (0..n).map(|_| (rng.random_range(-SPREAD..=SPREAD), rng.random_range(0..modulus))),
            )
        };
        match self {
            GroupFamily::Finite(t) => GroupElement::Base(rng.random_range(0..t.order()) as u16),
            GroupFamily::DirectSum(t) => GroupElement::DirectSum(sparse(rng, t.order() as u32)),
            GroupFamily::PolyHeisenberg { p } => {
                GroupElement::PolyHeis(sparse(rng, *p), sparse(rng, *p), sparse(rng, *p))
            }
            GroupFamily::FinitaryUt { p } => {
                let n = rng.random_range(0..=5);
                let entries: Vec<_> = (0..n)
                    .map(|_| {
                        let i = rng.random_range(1..6u32);
                        let j = rng.random_range(i + 1..=7u32);
                        (i, j, rng.random_range(0..*p))
                    })
                    .collect();
                GroupElement::FinitaryUt(UtMatrix::from_entries(entries).expect("upper entries"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ut3_ds() -> GroupFamily {
        GroupFamily::direct_sum(BaseGroupTable::unitriangular(2, 3).unwrap())
    }

    fn families() -> Vec<GroupFamily> {
        vec![
            GroupFamily::finite(BaseGroupTable::symmetric3()),
            ut3_ds(),
            GroupFamily::poly_heisenberg(2).unwrap(),
            GroupFamily::poly_heisenberg(3).unwrap(),
            GroupFamily::finitary_ut(2).unwrap(),
            GroupFamily::finitary_ut(3).unwrap(),
        ]
    }

    #[test]
    fn identity_is_neutral_and_inverse_cancels() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for fam in families() {
            let e = fam.identity();
            for _ in 0..500 {
                let x = fam.random_element(&mut rng);
                fam.validate(&x).unwrap();
                assert_eq!(fam.mul(&e, &x).unwrap(), x);
                assert_eq!(fam.mul(&x, &e).unwrap(), x);
                let xi = fam.inverse(&x).unwrap();
                assert!(fam.is_identity(&fam.mul(&x, &xi).unwrap()));
                assert!(fam.is_identity(&fam.mul(&xi, &x).unwrap()));
            }
        }
    }

    #[test]
    fn associativity_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xA55);
        for fam in families() {
            for _ in 0..10_000 {
                let (x, y, z) = (
                    fam.random_element(&mut rng),
                    fam.random_element(&mut rng),
                    fam.random_element(&mut rng),
                );
                let lhs = fam.mul(&fam.mul(&x, &y).unwrap(), &z).unwrap();
                let rhs = fam.mul(&x, &fam.mul(&y, &z).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "{fam:?}");
                fam.validate(&lhs).unwrap();
            }
        }
    }

    #[test]
    fn every_sampled_element_is_torsion() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for fam in families() {
            for _ in 0..300 {
                let x = fam.random_element(&mut rng);
                let k = fam.element_order(&x, DEFAULT_ORDER_CAP).unwrap();
                assert!(fam.is_identity(&fam.pow(&x, k).unwrap()));
            }
        }
    }

    #[test]
    fn direct_sum_examples() {
        let fam = GroupFamily::direct_sum(BaseGroupTable::cyclic(2).unwrap());
        let x = GroupElement::DirectSum(SupportMap::single(0, 1));
        assert!(fam.is_identity(&fam.mul(&x, &x).unwrap()));
        assert_eq!(fam.element_order(&x, 10).unwrap(), 2);
        assert_eq!(fam.element_order(&fam.identity(), 10).unwrap(), 1);

        let z3 = GroupFamily::direct_sum(BaseGroupTable::cyclic(3).unwrap());
        let y = GroupElement::DirectSum(SupportMap::single(0, 1));
        assert_eq!(z3.inverse(&y).unwrap(), GroupElement::DirectSum(SupportMap::single(0, 2)));
    }

    #[test]
    fn finitary_ut_order_four_element() {
        let fam = GroupFamily::finitary_ut(2).unwrap();
        let x = GroupElement::FinitaryUt(UtMatrix::from_entries([(1, 2, 1), (2, 3, 1)]).unwrap());
        assert_eq!(fam.element_order(&x, 100).unwrap(), 4);
        assert!(matches!(
            fam.element_order(&x, 3),
            Err(Error::OrderBudgetExceeded { cap: 3 })
        ));
    }

    #[test]
    fn heisenberg_center_commutes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let fam = GroupFamily::poly_heisenberg(3).unwrap();
        for _ in 0..1000 {
            let x = fam.random_element(&mut rng);
            let c = match fam.random_element(&mut rng) {
                GroupElement::PolyHeis(_, _, c) => c,
                _ => unreachable!(),
            };
            let z = GroupElement::PolyHeis(SupportMap::new(), SupportMap::new(), c);
            assert_eq!(fam.mul(&x, &z).unwrap(), fam.mul(&z, &x).unwrap());
        }
    }

    #[test]
    fn family_mismatch_is_reported() {
        let fam = ut3_ds();
        let bad = GroupElement::Base(1);
        assert!(matches!(
            fam.mul(&fam.identity(), &bad),
            Err(Error::FamilyMismatch { .. })
        ));
        assert!(matches!(fam.mul(&bad, &fam.identity()), Err(Error::FamilyMismatch { .. })));
        assert!(matches!(fam.inverse(&bad), Err(Error::FamilyMismatch { .. })));
    }

    #[test]
    fn primes_only() {
        assert!(GroupFamily::poly_heisenberg(4).is_err());
        assert!(GroupFamily::finitary_ut(1).is_err());
        assert!(is_prime(2) && is_prime(13) && !is_prime(9));
    }
}
