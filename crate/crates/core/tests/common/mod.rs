//! Series oracle shared by the oracle tests and the acceptance target:
//! groups given by their own multiplication, swept element by element.

use std::collections::BTreeSet;
use std::sync::Arc;

use entrolab::series::{
    center, derived_series, lower_central_series, n_torsion_subgroup, upper_central_series,
};
use entrolab::{BaseGroupTable, FiniteSubgroup, GroupElement};

const BUDGET: usize = 10_000_000;

/// A finite group given by its own multiplication, for series sweeps.
pub struct Brute {
    n: usize,
    mul: Vec<Vec<usize>>,
}

impl Brute {
    fn new(n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        Brute { n, mul: (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect() }
    }

    fn id(&self) -> usize {
        (0..self.n).find(|&e| (0..self.n).all(|x| self.mul[e][x] == x)).unwrap()
    }

    fn inv(&self, a: usize) -> usize {
        let e = self.id();
        (0..self.n).find(|&b| self.mul[a][b] == e).unwrap()
    }

    fn span(&self, gens: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut s = BTreeSet::from([self.id()]);
        let gens: Vec<usize> = gens.into_iter().collect();
        loop {
            let next: BTreeSet<usize> =
                s.iter().flat_map(|&x| gens.iter().map(move |&g| (x, g))).map(|(x, g)| self.mul[x][g]).collect();
            let before = s.len();
            s.extend(next);
            if s.len() == before {
                return s;
            }
        }
    }

    fn comm(&self, a: usize, b: usize) -> usize {
        let ab = self.mul[a][b];
        let ba = self.mul[b][a];
        self.mul[self.inv(ba)][ab]
    }

    fn bracket(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> BTreeSet<usize> {
        self.span(a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).map(|(x, y)| self.comm(x, y)))
    }

    fn all(&self) -> BTreeSet<usize> {
        (0..self.n).collect()
    }

    fn lower(&self) -> Vec<BTreeSet<usize>> {
        let mut v = vec![self.all()];
        loop {
            let next = self.bracket(v.last().unwrap(), &self.all());
            if &next == v.last().unwrap() {
                return v;
            }
            v.push(next);
        }
    }

    fn derived(&self) -> Vec<BTreeSet<usize>> {
        let mut v = vec![self.all()];
        loop {
            let last = v.last().unwrap();
            let next = self.bracket(last, last);
            if &next == last {
                return v;
            }
            v.push(next);
        }
    }

    fn upper(&self) -> Vec<BTreeSet<usize>> {
        let mut v = vec![BTreeSet::from([self.id()])];
        loop {
            let z = v.last().unwrap();
            let next: BTreeSet<usize> =
                (0..self.n).filter(|&x| (0..self.n).all(|g| z.contains(&self.comm(x, g)))).collect();
            if &next == z {
                return v;
            }
            v.push(next);
        }
    }

    fn torsion(&self, k: u64) -> BTreeSet<usize> {
        let e = self.id();
        self.span((0..self.n).filter(|&x| {
            let mut y = e;
            for _ in 0..k {
                y = self.mul[y][x];
            }
            y == e
        }))
    }
}

fn as_indices(h: &FiniteSubgroup) -> BTreeSet<usize> {
    h.elements()
        .iter()
        .map(|x| match x {
            GroupElement::Base(i) => *i as usize,
            other => panic!("unexpected element {other:?}"),
        })
        .collect()
}

pub fn compare(name: &str, table: BaseGroupTable, oracle: Brute, exponent: u64) -> (Vec<usize>, Vec<usize>) {
    let t = Arc::new(table);
    let g = FiniteSubgroup::whole_table(&t);
    let sets = |r: entrolab::series::SeriesReport| r.terms.iter().map(as_indices).collect::<Vec<_>>();
    let lower = sets(lower_central_series(&g, BUDGET).unwrap());
    let upper = sets(upper_central_series(&g, BUDGET).unwrap());
    let derived = sets(derived_series(&g, BUDGET).unwrap());
    let (ol, ou, od) = (oracle.lower(), oracle.upper(), oracle.derived());
    // the library may stop at the trivial group; the oracle stops at a repeat
    let trim = |lib: &[BTreeSet<usize>], or: &[BTreeSet<usize>]| {
        assert_eq!(&lib[..or.len().min(lib.len())], &or[..or.len().min(lib.len())], "{name}");
        assert_eq!(lib.last(), or.last(), "{name}");
    };
    trim(&lower, &ol);
    trim(&upper, &ou);
    trim(&derived, &od);
    assert_eq!(as_indices(&center(&g).unwrap()), ou[1.min(ou.len() - 1)], "{name} center");
    for k in 1..=exponent {
        assert_eq!(as_indices(&n_torsion_subgroup(&g, k, BUDGET).unwrap()), oracle.torsion(k), "{name} G[{k}]");
    }
    (lower.iter().map(BTreeSet::len).collect(), upper.iter().map(BTreeSet::len).collect())
}

/// UT_d(F_2) as bit matrices; index digit k is the k-th strictly upper
/// position in row-major order.
pub fn ut_oracle(d: usize) -> Brute {
    let pos: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
    let decode = |x: usize| {
        let mut m = vec![vec![0u8; d]; d];
        for (k, &(i, j)) in pos.iter().enumerate() {
            m[i][j] = (x >> k & 1) as u8;
        }
        (0..d).for_each(|i| m[i][i] = 1);
        m
    };
    let encode = |m: &[Vec<u8>]| pos.iter().enumerate().map(|(k, &(i, j))| (m[i][j] as usize) << k).sum();
    Brute::new(1 << pos.len(), |a, b| {
        let (a, b) = (decode(a), decode(b));
        let c: Vec<Vec<u8>> =
            (0..d).map(|i| (0..d).map(|j| (0..d).map(|k| a[i][k] & b[k][j]).fold(0, |s, v| s ^ v)).collect()).collect();
        encode(&c)
    })
}

/// S_3 with permutations in lexicographic order, `s*t` applying `s` first.
pub fn s3_oracle() -> Brute {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    Brute::new(6, |a, b| {
        let (s, t) = (perms[a], perms[b]);
        let st = [t[s[0]], t[s[1]], t[s[2]]];
        perms.iter().position(|&q| q == st).unwrap()
    })
}

/// Z_2 x Z_4 with `(i, j)` at index `i + 2j`.
pub fn z2_z4_oracle() -> Brute {
    Brute::new(8, |a, b| (a % 2 + b % 2) % 2 + 2 * ((a / 2 + b / 2) % 4))
}

pub fn z2_z4_table() -> BaseGroupTable {
    BaseGroupTable::direct_product(&BaseGroupTable::cyclic(2).unwrap(), &BaseGroupTable::cyclic(4).unwrap()).unwrap()
}
