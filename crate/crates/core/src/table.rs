//! Finite groups given by a Cayley table.
//!
//! Element `0` is always the identity. Tables are capped at order
//! [`MAX_TABLE_ORDER`] so that the full associativity sweep in
//! [`BaseGroupTable::from_rows`] stays cheap.

use crate::error::{Error, Result};

pub const MAX_TABLE_ORDER: usize = 256;

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseGroupTable {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
}

impl BaseGroupTable {
    /// Builds a table from rows `rows[a][b] = a*b`, checking every group axiom.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let order = rows.len();
        if order == 0 || order > MAX_TABLE_ORDER {
            return Err(Error::InvalidTable(format!(
                "order {order} outside 1..={MAX_TABLE_ORDER}"
            )));
        }
        let mut mul = Vec::with_capacity(order * order);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidTable(format!("row {a} has length {}", row.len())));
            }
            for &c in row {
                if c >= order {
                    return Err(Error::InvalidTable(format!("entry {c} out of range in row {a}")));
                }
                mul.push(c as u16);
            }
        }
        Self::from_flat(order, mul)
    }

    fn from_flat(order: usize, mul: Vec<u16>) -> Result<Self> {
        let at = |a: usize, b: usize| mul[a * order + b] as usize;
        for a in 0..order {
            if at(0, a) != a || at(a, 0) != a {
                return Err(Error::InvalidTable(format!("0 is not a two-sided identity at {a}")));
            }
        }
        let mut inv = vec![0u16; order];
        for a in 0..order {
            let b = (0..order)
                .find(|&b| at(a, b) == 0)
                .ok_or_else(|| Error::InvalidTable(format!("{a} has no right inverse")))?;
            if at(b, a) != 0 {
                return Err(Error::InvalidTable(format!("inverse of {a} is one-sided")));
            }
            inv[a] = b as u16;
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::InvalidTable(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(BaseGroupTable { order, mul, inv })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.mul
            .chunks(self.order)
            .map(|r| r.iter().map(|&x| x as usize).collect())
            .collect()
    }

    pub fn element_order(&self, a: u16) -> u64 {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> u64 {
        (0..self.order as u16).fold(1, |acc, a| lcm(acc, self.element_order(a)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order as u16).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// A small generating set, chosen greedily in index order.
    pub fn generators(&self) -> Vec<u16> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order];
        span[0] = true;
        for a in 1..self.order as u16 {
            if span[a as usize] {
                continue;
            }
            gens.push(a);
            span = self.span(&gens);
        }
        gens
    }

    /// Membership mask of the subgroup generated by `gens`.
    pub fn span(&self, gens: &[u16]) -> Vec<bool> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut stack = vec![0u16];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        seen
    }

    /// Checks that `map` (indexed by element) is an endomorphism of the table.
    pub fn check_homomorphism(&self, map: &[u16]) -> Result<()> {
        if map.len() != self.order {
            return Err(Error::NotHomomorphism(format!(
                "map has length {}, table has order {}",
                map.len(),
                self.order
            )));
        }
        if let Some(&bad) = map.iter().find(|&&x| x as usize >= self.order) {
            return Err(Error::NotHomomorphism(format!("image {bad} out of range")));
        }
        for a in 0..self.order as u16 {
            for b in 0..self.order as u16 {
                let lhs = map[self.mul(a, b) as usize];
                let rhs = self.mul(map[a as usize], map[b as usize]);
                if lhs != rhs {
                    return Err(Error::NotHomomorphism(format!("fails on ({a}, {b})")));
                }
            }
        }
        Ok(())
    }

    pub fn trivial() -> Self {
        BaseGroupTable { order: 1, mul: vec![0], inv: vec![0] }
    }

    /// Cyclic group `Z_n`, element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_TABLE_ORDER {
            return Err(Error::InvalidTable(format!("cyclic order {n}")));
        }
        let mul = (0..n).flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u16)).collect();
        Self::from_flat(n, mul)
    }

    /// Direct product; the pair `(i, j)` gets index `i + a.order() * j`.
    pub fn direct_product(a: &Self, b: &Self) -> Result<Self> {
        let order = a.order * b.order;
        if order > MAX_TABLE_ORDER {
            return Err(Error::InvalidTable(format!("product order {order} too large")));
        }
        let split = |x: usize| ((x % a.order) as u16, (x / a.order) as u16);
        let mut mul = Vec::with_capacity(order * order);
        for x in 0..order {
            let (x1, x2) = split(x);
            for y in 0..order {
                let (y1, y2) = split(y);
                let z = a.mul(x1, y1) as usize + a.order * b.mul(x2, y2) as usize;
                mul.push(z as u16);
            }
        }
        Self::from_flat(order, mul)
    }

    /// Symmetric group on three points. Permutations are listed in
    /// lexicographic order of their image words; the product `s*t` applies
    /// `s` first, then `t`.
    pub fn symmetric3() -> Self {
        let perms: [[usize; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let mut mul = Vec::with_capacity(36);
        for s in &perms {
            for t in &perms {
                let st = [t[s[0]], t[s[1]], t[s[2]]];
                mul.push(index(st) as u16);
            }
        }
        Self::from_flat(6, mul).expect("S3 table is a group")
    }

    /// Upper unitriangular `dim x dim` matrices over `F_p`.
    ///
    /// The strictly upper positions `(i, j)`, `i < j`, are taken in row-major
    /// order; an element's index is the base-`p` number whose `k`-th digit is
    /// the entry at the `k`-th position. For `p = 2` the bit of `(1,2)` is 1,
    /// of `(1,3)` is 2 and of `(2,3)` is 4 in the 3x3 case.
    pub fn unitriangular(p: u32, dim: usize) -> Result<Self> {
        if !crate::family::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let positions: Vec<(usize, usize)> =
            (0..dim).flat_map(|i| (i + 1..dim).map(move |j| (i, j))).collect();
        let order = (p as usize)
            .checked_pow(positions.len() as u32)
            .filter(|&o| o <= MAX_TABLE_ORDER)
            .ok_or_else(|| Error::InvalidTable(format!("UT_{dim}(F_{p}) is too large")))?;
        let p = p as usize;
        let decode = |mut x: usize| {
            let mut m = vec![vec![0usize; dim]; dim];
            for &(i, j) in &positions {
                m[i][j] = x % p;
                x /= p;
            }
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = 1;
            }
            m
        };
        let encode = |m: &[Vec<usize>]| {
            positions.iter().rev().fold(0usize, |acc, &(i, j)| acc * p + m[i][j])
        };
        let mats: Vec<_> = (0..order).map(decode).collect();
        let mut mul = Vec::with_capacity(order * order);
        for a in &mats {
            for b in &mats {
                let mut c = vec![vec![0usize; dim]; dim];
                for i in 0..dim {
                    for j in i..dim {
                        c[i][j] = (i..=j).map(|k| a[i][k] * b[k][j]).sum::<usize>() % p;
                    }
                }
                mul.push(encode(&c) as u16);
            }
        }
        Self::from_flat(order, mul)
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}
