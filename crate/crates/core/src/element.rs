//! Canonical element encodings.
//!
//! Every sparse payload is kept sorted by index with no identity (zero)
//! values, so derived `Eq`/`Hash`/`Ord` are structural. The derived `Ord`
//! is the "canonical encoding order" used to pick minimal coset
//! representatives and minimal lifts; the identity of every family is its
//! minimum.

/// Finitely supported map `i32 -> u32` with nonzero values, sorted by index.
///
/// Used both for direct-sum supports (values are base-table indices) and
/// for Laurent polynomials over `F_p` (values are coefficients).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportMap(Vec<(i32, u32)>);

impl SupportMap {
    pub fn new() -> Self {
        SupportMap(Vec::new())
    }

    /// Builds a canonical map from arbitrary pairs: later duplicates win and
    /// zero values are dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i32, u32)>) -> Self {
        let mut v: Vec<(i32, u32)> = pairs.into_iter().collect();
        v.sort_by_key(|&(i, _)| i);
        let mut out: Vec<(i32, u32)> = Vec::with_capacity(v.len());
        for (i, x) in v {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 = x,
                _ => out.push((i, x)),
            }
        }
        out.retain(|&(_, x)| x != 0);
        SupportMap(out)
    }

    /// Wraps an already sorted, zero-free vector.
    pub(crate) fn from_sorted_unchecked(v: Vec<(i32, u32)>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(v.iter().all(|&(_, x)| x != 0));
        SupportMap(v)
    }

    pub fn single(i: i32, x: u32) -> Self {
        Self::from_pairs([(i, x)])
    }

    pub fn entries(&self) -> &[(i32, u32)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: i32) -> u32 {
        self.0
            .binary_search_by_key(&i, |&(j, _)| j)
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn is_canonical(&self) -> bool {
        self.0.windows(2).all(|w| w[0].0 < w[1].0) && self.0.iter().all(|&(_, x)| x != 0)
    }

    /// Pointwise combination over the union of supports; `f(0, 0)` must be 0.
    pub fn zip_with(&self, other: &Self, mut f: impl FnMut(u32, u32) -> u32) -> Self {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (idx, x, y) = if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                i += 1;
                (a[i - 1].0, a[i - 1].1, 0)
            } else if i == a.len() || b[j].0 < a[i].0 {
                j += 1;
                (b[j - 1].0, 0, b[j - 1].1)
            } else {
                i += 1;
                j += 1;
                (a[i - 1].0, a[i - 1].1, b[j - 1].1)
            };
            let z = f(x, y);
            if z != 0 {
                out.push((idx, z));
            }
        }
        SupportMap(out)
    }

    pub fn map_values(&self, mut f: impl FnMut(u32) -> u32) -> Self {
        SupportMap(
            self.0
                .iter()
                .filter_map(|&(i, x)| {
                    let y = f(x);
                    (y != 0).then_some((i, y))
                })
                .collect(),
        )
    }

    pub fn shift(&self, k: i32) -> Self {
        SupportMap(self.0.iter().map(|&(i, x)| (i + k, x)).collect())
    }
}

/// Laurent polynomial arithmetic over `F_p` on [`SupportMap`]s.
pub(crate) mod poly {
    use super::SupportMap;

    pub fn add(a: &SupportMap, b: &SupportMap, p: u32) -> SupportMap {
        a.zip_with(b, |x, y| ((x as u64 + y as u64) % p as u64) as u32)
    }

    pub fn sub(a: &SupportMap, b: &SupportMap, p: u32) -> SupportMap {
        a.zip_with(b, |x, y| ((x as u64 + (p - y) as u64) % p as u64) as u32)
    }

    pub fn neg(a: &SupportMap, p: u32) -> SupportMap {
        a.map_values(|x| (p - x) % p)
    }

    /// Convolution product.
    pub fn mul(a: &SupportMap, b: &SupportMap, p: u32) -> SupportMap {
        if a.is_empty() || b.is_empty() {
            return SupportMap::new();
        }
        let mut terms: Vec<(i32, u64)> = Vec::with_capacity(a.len() * b.len());
        for &(i, x) in a.entries() {
            for &(j, y) in b.entries() {
                terms.push((i + j, x as u64 * y as u64));
            }
        }
        terms.sort_unstable_by_key(|&(e, _)| e);
        let mut out: Vec<(i32, u32)> = Vec::with_capacity(terms.len());
        let mut k = 0;
        while k < terms.len() {
            let e = terms[k].0;
            let mut s = 0u64;
            while k < terms.len() && terms[k].0 == e {
                s = (s + terms[k].1) % p as u64;
                k += 1;
            }
            if s != 0 {
                out.push((e, s as u32));
            }
        }
        SupportMap::from_sorted_unchecked(out)
    }
}

/// Strictly upper triangular part `M` of a finitary unitriangular matrix
/// `I + M`, as sorted `((row, col), value)` entries with `1 <= row < col`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UtMatrix(Vec<((u32, u32), u32)>);

impl UtMatrix {
    pub fn new() -> Self {
        UtMatrix(Vec::new())
    }

    /// Canonicalizes arbitrary entries. Returns `None` if any entry is not
    /// strictly upper triangular with positive indices.
    pub fn from_entries(entries: impl IntoIterator<Item = (u32, u32, u32)>) -> Option<Self> {
        let mut v = Vec::new();
        for (i, j, x) in entries {
            if i == 0 || i >= j {
                return None;
            }
            v.push(((i, j), x));
        }
        v.sort_by_key(|&(ij, _)| ij);
        let mut out: Vec<((u32, u32), u32)> = Vec::with_capacity(v.len());
        for (ij, x) in v {
            match out.last_mut() {
                Some(last) if last.0 == ij => last.1 = x,
                _ => out.push((ij, x)),
            }
        }
        out.retain(|&(_, x)| x != 0);
        Some(UtMatrix(out))
    }

    pub fn entries(&self) -> &[((u32, u32), u32)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: u32, j: u32) -> u32 {
        self.0
            .binary_search_by_key(&(i, j), |&(ij, _)| ij)
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn is_canonical(&self) -> bool {
        self.0.windows(2).all(|w| w[0].0 < w[1].0)
            && self.0.iter().all(|&((i, j), x)| x != 0 && i >= 1 && i < j)
    }

    /// Largest row or column index in the support (0 when empty).
    pub fn span(&self) -> u32 {
        self.0.iter().map(|&((_, j), _)| j).max().unwrap_or(0)
    }

    fn collect(mut terms: Vec<((u32, u32), u64)>, p: u32) -> Self {
        terms.sort_unstable_by_key(|&(ij, _)| ij);
        let mut out = Vec::with_capacity(terms.len());
        let mut k = 0;
        while k < terms.len() {
            let ij = terms[k].0;
            let mut s = 0u64;
            while k < terms.len() && terms[k].0 == ij {
                s = (s + terms[k].1) % p as u64;
                k += 1;
            }
            if s != 0 {
                out.push((ij, s as u32));
            }
        }
        UtMatrix(out)
    }

    pub(crate) fn add(&self, other: &Self, p: u32) -> Self {
        let terms = self
            .0
            .iter()
            .chain(other.0.iter())
            .map(|&(ij, x)| (ij, x as u64))
            .collect();
        Self::collect(terms, p)
    }

    pub(crate) fn neg(&self, p: u32) -> Self {
        UtMatrix(self.0.iter().map(|&(ij, x)| (ij, p - x)).collect())
    }

    /// Plain matrix product of strictly upper parts.
    pub(crate) fn matmul(&self, other: &Self, p: u32) -> Self {
        let mut terms = Vec::new();
        for &((i, k), x) in &self.0 {
            let start = other.0.partition_point(|&((r, _), _)| r < k);
            for &((r, j), y) in &other.0[start..] {
                if r != k {
                    break;
                }
                terms.push(((i, j), x as u64 * y as u64));
            }
        }
        Self::collect(terms, p)
    }

    pub(crate) fn shift(&self, k: u32) -> Self {
        UtMatrix(self.0.iter().map(|&((i, j), x)| ((i + k, j + k), x)).collect())
    }
}

/// An element of one of the four group families. See
/// [`GroupFamily`](crate::family::GroupFamily) for the arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    /// Index into a finite table.
    Base(u16),
    /// Finitely supported map from the integers into a finite table.
    DirectSum(SupportMap),
    /// `(a, b, c)` with Laurent polynomials over `F_p`.
    PolyHeis(SupportMap, SupportMap, SupportMap),
    /// `I + M` for a finitary strictly upper triangular `M`.
    FinitaryUt(UtMatrix),
}

impl GroupElement {
    pub fn tag(&self) -> &'static str {
        match self {
            GroupElement::Base(_) => "finite",
            GroupElement::DirectSum(_) => "direct_sum",
            GroupElement::PolyHeis(..) => "poly_heis",
            GroupElement::FinitaryUt(_) => "finitary_ut",
        }
    }
}
