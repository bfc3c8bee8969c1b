//! Brute-force oracles built from scratch, without the library's group
//! arithmetic, compared against the library on small instances.

mod common;

use std::collections::HashSet;

use entrolab::endo::{Endo, EndoSpec};
use entrolab::entropy::{h_estimate, support_ball, trajectory, DEFAULT_WINDOW};
use common::{compare, s3_oracle, ut_oracle, z2_z4_oracle, z2_z4_table};
use entrolab::{BaseGroupTable, FiniteSubgroup, GroupElement, GroupFamily};

const BUDGET: usize = 10_000_000;

/// Closure of `gens` under `mul`, then sizes of `F phi(F) ... phi^{n-1}(F)`.
fn oracle_sizes<T, M, P>(gens: &[T], id: T, mul: M, phi: P, n_max: usize) -> Vec<u64>
where
    T: Copy + Eq + std::hash::Hash,
    M: Fn(T, T) -> T,
    P: Fn(T) -> T,
{
    let mut f: HashSet<T> = HashSet::from([id]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for &g in gens {
            let y = mul(x, g);
            if f.insert(y) {
                frontier.push(y);
            }
        }
    }
    let mut layer: Vec<T> = f.iter().copied().collect();
    let mut t: HashSet<T> = f.clone();
    let mut sizes = vec![t.len() as u64];
    for _ in 1..n_max {
        layer = layer.iter().map(|&x| phi(x)).collect();
        t = t.iter().flat_map(|&a| layer.iter().map(move |&b| (a, b))).map(|(a, b)| mul(a, b)).collect();
        sizes.push(t.len() as u64);
    }
    sizes
}

fn stabilized(sizes: &[u64]) -> u64 {
    let r: Vec<u64> = sizes.windows(2).map(|w| w[1] / w[0]).collect();
    let last = *r.last().unwrap();
    assert!(r[r.len() - DEFAULT_WINDOW..].iter().all(|&x| x == last));
    assert!(sizes.windows(2).all(|w| w[1] % w[0] == 0));
    last
}

// Heisenberg over F_2[t] as upper triangular 3x3 matrices [[1,a,c],[0,1,b],[0,0,1]],
// polynomials as bit masks (bit i = coefficient of t^i).
type Heis = (u64, u64, u64);

fn clmul(a: u64, b: u64) -> u64 {
    (0..64).filter(|i| b >> i & 1 == 1).fold(0, |acc, i| acc ^ (a << i))
}

fn heis_mul(x: Heis, y: Heis) -> Heis {
    (x.0 ^ y.0, x.1 ^ y.1, x.2 ^ y.2 ^ clmul(x.0, y.1))
}

fn heis_tscale(x: Heis) -> Heis {
    (x.0 << 1, x.1 << 1, x.2 << 2)
}

fn heis_family() -> (GroupFamily, Endo) {
    let fam = GroupFamily::poly_heisenberg(2).unwrap();
    let phi = Endo::new(EndoSpec::TScale, &fam).unwrap();
    (fam, phi)
}

#[test]
fn heisenberg_matrix_oracle_radius_zero() {
    let gens = [(1, 0, 0), (0, 1, 0)];
    let expect = oracle_sizes(&gens, (0, 0, 0), heis_mul, heis_tscale, 5);
    assert_eq!(expect, [8, 64, 512, 4096, 32768]);
    let (fam, phi) = heis_family();
    let f = support_ball(&fam, 0, BUDGET).unwrap();
    assert_eq!(trajectory(&phi, &f, 5, BUDGET).unwrap().sizes, expect);
}

#[test]
fn heisenberg_matrix_oracle_radius_one() {
    let gens = [(1, 0, 0), (2, 0, 0), (0, 1, 0), (0, 2, 0)];
    let expect = oracle_sizes(&gens, (0, 0, 0), heis_mul, heis_tscale, 4);
    assert_eq!(expect[0], 128);
    assert_eq!(stabilized(&expect), 16);
    let (fam, phi) = heis_family();
    let f = support_ball(&fam, 1, BUDGET).unwrap();
    assert_eq!(trajectory(&phi, &f, 4, BUDGET).unwrap().sizes, expect);
}

#[test]
fn heisenberg_center_and_quotient_alphas() {
    // center side: c-coordinates reached from radius 1, i.e. <1, t, t^2>
    let gens = [(0, 0, 1), (0, 0, 2), (0, 0, 4)];
    let h = oracle_sizes(&gens, (0, 0, 0), heis_mul, heis_tscale, 5);
    assert_eq!(stabilized(&h), 4);
    // quotient (a, b) with the abelian law
    let q_mul = |x: (u64, u64), y: (u64, u64)| (x.0 ^ y.0, x.1 ^ y.1);
    let q_phi = |x: (u64, u64)| (x.0 << 1, x.1 << 1);
    let q = oracle_sizes(&[(1, 0), (2, 0), (0, 1), (0, 2)], (0, 0), q_mul, q_phi, 5);
    assert_eq!(stabilized(&q), 4);
}

// DirectSum(UT_3(F_2)): 3 bits per coordinate, (x12, x13, x23) at bits (0, 1, 2).
fn ut3_sum_mul(x: u64, y: u64) -> u64 {
    let mut z = 0;
    for k in 0..21 {
        let (a, b) = (x >> (3 * k) & 7, y >> (3 * k) & 7);
        let (a12, a13, a23) = (a & 1, a >> 1 & 1, a >> 2 & 1);
        let (b12, b13, b23) = (b & 1, b >> 1 & 1, b >> 2 & 1);
        let c = (a12 ^ b12) | (a13 ^ b13 ^ (a12 & b23)) << 1 | (a23 ^ b23) << 2;
        z |= c << (3 * k);
    }
    z
}

fn ut3_shift(x: u64) -> u64 {
    x << 3
}

#[test]
fn ut3_sum_shift_oracle() {
    let fam = GroupFamily::direct_sum(BaseGroupTable::unitriangular(2, 3).unwrap());
    let phi = Endo::new(EndoSpec::Shift { k: 1 }, &fam).unwrap();

    let r0 = oracle_sizes(&[1, 4], 0, ut3_sum_mul, ut3_shift, 5);
    assert_eq!(r0, [8, 64, 512, 4096, 32768]);
    let f0 = support_ball(&fam, 0, BUDGET).unwrap();
    assert_eq!(trajectory(&phi, &f0, 5, BUDGET).unwrap().sizes, r0);

    let r1 = oracle_sizes(&[1, 4, 8, 32], 0, ut3_sum_mul, ut3_shift, 5);
    assert_eq!(stabilized(&r1), 8);
    let f1 = support_ball(&fam, 1, BUDGET).unwrap();
    assert_eq!(trajectory(&phi, &f1, 5, BUDGET).unwrap().sizes, r1);

    // coordinatewise center: only x13 bits; quotient: (x12, x23) abelian
    let z = oracle_sizes(&[2, 16], 0, ut3_sum_mul, ut3_shift, 5);
    assert_eq!(stabilized(&z), 2);
    let q = oracle_sizes(&[1, 4, 8, 32], 0, |a, b| a ^ b, ut3_shift, 5);
    assert_eq!(stabilized(&q), 4);
}

#[test]
fn ut3_compose_projection_oracle() {
    // keep only x12 on every coordinate, then shift
    let proj = |x: u64| x & 0o111_111_111_111_111_111_111;
    let phi = |x: u64| ut3_shift(proj(x));
    let sizes = oracle_sizes(&[1, 4], 0, ut3_sum_mul, phi, 6);
    assert_eq!(sizes, [8, 16, 32, 64, 128, 256]);
    let fam = GroupFamily::direct_sum(BaseGroupTable::unitriangular(2, 3).unwrap());
    let spec = EndoSpec::Compose {
        list: vec![EndoSpec::Shift { k: 1 }, EndoSpec::Diagonal { map: vec![0, 1, 0, 1, 0, 1, 0, 1] }],
    };
    let lib = Endo::new(spec, &fam).unwrap();
    let f = support_ball(&fam, 0, BUDGET).unwrap();
    assert_eq!(trajectory(&lib, &f, 6, BUDGET).unwrap().sizes, sizes);
}

#[test]
fn finitary_shift_oracle() {
    // I + M for 12x12 strictly upper M over F_2, rows packed as bit masks
    const D: usize = 12;
    type M = [u16; D];
    let mul = |a: M, b: M| {
        let mut c = [0u16; D];
        for i in 0..D {
            // row_i(I + A)(I + B) = e_i + a_i + b_i + a_i B
            let mut r = a[i] ^ b[i];
            for k in 0..D {
                if a[i] >> k & 1 == 1 {
                    r ^= b[k];
                }
            }
            c[i] = r;
        }
        c
    };
    let shift = |a: M| {
        let mut c = [0u16; D];
        for i in 0..D - 1 {
            c[i + 1] = a[i] << 1;
        }
        c
    };
    let e = |i: usize, j: usize| {
        let mut m = [0u16; D];
        m[i] = 1 << j;
        m
    };
    let sizes = oracle_sizes(&[e(0, 1), e(1, 2)], [0; D], mul, shift, 6);
    assert_eq!(sizes, [8, 32, 128, 512, 2048, 8192]);
    let fam = GroupFamily::finitary_ut(2).unwrap();
    let phi = Endo::new(EndoSpec::Shift { k: 1 }, &fam).unwrap();
    let f = support_ball(&fam, 2, BUDGET).unwrap();
    assert_eq!(trajectory(&phi, &f, 6, BUDGET).unwrap().sizes, sizes);
}

#[test]
fn inner_automorphism_goldens() {
    // conjugation by the 4x4 Jordan block on UT_4(F_2), F = <I + E12>
    let est = |fam: &GroupFamily, g: GroupElement, f: &FiniteSubgroup, n: usize| {
        let phi = Endo::new(EndoSpec::Inner { g }, fam).unwrap();
        h_estimate(&trajectory(&phi, f, n, BUDGET).unwrap(), DEFAULT_WINDOW).unwrap()
    };
    let table = BaseGroupTable::unitriangular(2, 4).unwrap();
    let fam = GroupFamily::finite(table);
    // bits of (1,2), (2,3), (3,4) are 1, 8, 32
    let f = FiniteSubgroup::closure(&fam, &[GroupElement::Base(1)], BUDGET).unwrap();
    let e = est(&fam, GroupElement::Base(41), &f, 8);
    assert_eq!(e.sizes, [2, 4, 8, 8, 8, 8, 8, 8]);
    assert_eq!(e.stabilized_ratio, Some(1));

    let fam = GroupFamily::finitary_ut(2).unwrap();
    let g = GroupElement::FinitaryUt(
        entrolab::UtMatrix::from_entries([(1, 2, 1), (2, 3, 1), (3, 4, 1)]).unwrap(),
    );
    let f = support_ball(&fam, 2, BUDGET).unwrap();
    let e = est(&fam, g, &f, 6);
    assert_eq!(e.sizes, [8, 32, 32, 32, 32, 32]);
    assert_eq!(e.stabilized_ratio, Some(1));
}

#[test]
fn series_ut3() {
    let (l, u) = compare("ut3", BaseGroupTable::unitriangular(2, 3).unwrap(), ut_oracle(3), 4);
    assert_eq!(l, [8, 2, 1]);
    assert_eq!(u, [1, 2, 8]);
}

#[test]
fn series_ut4() {
    let (l, u) = compare("ut4", BaseGroupTable::unitriangular(2, 4).unwrap(), ut_oracle(4), 4);
    assert_eq!(l, [64, 8, 2, 1]);
    assert_eq!(u, [1, 2, 8, 64]);
}

#[test]
fn series_s3() {
    let (l, u) = compare("s3", BaseGroupTable::symmetric3(), s3_oracle(), 6);
    assert_eq!(l, [6, 3]);
    assert_eq!(u, [1]);
}

#[test]
fn series_z2_z4() {
    let (l, u) = compare("z2xz4", z2_z4_table(), z2_z4_oracle(), 4);
    assert_eq!(l, [8, 1]);
    assert_eq!(u, [1, 8]);
}
