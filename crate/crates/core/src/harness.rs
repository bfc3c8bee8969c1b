//! Checks of the Addition Theorem and its supporting counting statements.
//!
//! [`check_at`] compares stabilized ratios `alpha_G = alpha_H * alpha_Q`
//! exactly. [`check_dagger`] builds the correction subgroup `K_n` for a
//! central kernel and verifies
//! `|T_n(phi, F)| <= |T_n(phi_bar, Q)| * |T_n(phi|_N, K_n)|`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::abelian::{abelian_trajectory, reduce_generators};
use crate::element::GroupElement;
use crate::endo::Endo;
use crate::entropy::{
    fekete_violations, h_estimate, h_ladder, trajectory, traced_trajectory, EntropyEstimate,
    LadderReport, LadderSpec, TrajectoryTable,
};
use crate::error::{Error, Result};
use crate::fingen::{ElementSet, FiniteSubgroup, FxIndexSet};
use crate::quotient::{QuotientModel, SubgroupDescriptor};

#[derive(Clone, Copy, Debug, Default)]
pub struct Limits {
    pub n_max: usize,
    pub window: usize,
    pub product_budget: usize,
    pub closure_budget: usize,
    /// Seed for the sampled homomorphism and quotient checks.
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// All three ratios stabilized and `alpha_G = alpha_H * alpha_Q`.
    ExactEquality,
    /// Some ratio did not stabilize, but the log-intervals are compatible.
    BoundsConsistent,
    /// All three ratios stabilized and the identity fails.
    Violation,
    /// A budget ran out, or missing ratios with incompatible intervals.
    Inconclusive,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Alphas {
    pub g: Option<u64>,
    pub h: Option<u64>,
    pub q: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AtTables {
    pub g: LadderReport,
    pub h: LadderReport,
    pub q: LadderReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct AtReport {
    pub scenario: String,
    pub subgroup: String,
    pub alphas: Alphas,
    pub verdict: Verdict,
    /// Why the verdict is inconclusive, when it is.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tables: Option<AtTables>,
}

pub struct AtScenario<'a> {
    pub name: &'a str,
    pub phi: &'a Endo,
    pub subgroup: &'a SubgroupDescriptor,
    pub g_ladder: &'a LadderSpec,
    pub h_ladder: &'a LadderSpec,
    pub q_ladder: &'a LadderSpec,
    pub limits: Limits,
}

fn verdict_from(tables: &AtTables) -> (Alphas, Verdict) {
    let alphas = Alphas { g: tables.g.alpha(), h: tables.h.alpha(), q: tables.q.alpha() };
    let verdict = match (alphas.g, alphas.h, alphas.q) {
        (Some(g), Some(h), Some(q)) => {
            if g as u128 == h as u128 * q as u128 {
                Verdict::ExactEquality
            } else {
                Verdict::Violation
            }
        }
        _ if tables.g.truncated || tables.h.truncated || tables.q.truncated => {
            Verdict::Inconclusive
        }
        _ => {
            let (g_lo, g_hi) = tables.g.bounds();
            let (h_lo, h_hi) = tables.h.bounds();
            let (q_lo, q_hi) = tables.q.bounds();
            const EPS: f64 = 1e-9;
            if g_lo <= h_hi + q_hi + EPS && h_lo + q_lo <= g_hi + EPS {
                Verdict::BoundsConsistent
            } else {
                Verdict::Inconclusive
            }
        }
    };
    (alphas, verdict)
}

/// Estimates `h` on `G`, on `H` (through the restriction) and on `G/H`
/// (through the quotient model) and compares the stabilized ratios.
/// Structural failures (non-invariant `H`, missing quotient model) are
/// errors; budget exhaustion yields [`Verdict::Inconclusive`].
pub fn check_at(s: &AtScenario<'_>) -> Result<AtReport> {
    let psi = s.subgroup.restrict(s.phi)?;
    let model = s.subgroup.quotient_model()?;
    s.phi.verify_sampled(s.limits.seed)?;
    model.verify(s.subgroup, s.limits.seed)?;
    let phi_bar = model.induced(s.phi)?;
    let lim = s.limits;
    let run = |phi: &Endo, spec: &LadderSpec| -> Result<LadderReport> {
        let ladder = spec.build(phi.family(), lim.closure_budget)?;
        h_ladder(phi, &ladder, lim.n_max, lim.window, lim.product_budget)
    };
    let results = [(s.phi, s.g_ladder), (&psi, s.h_ladder), (&phi_bar, s.q_ladder)]
        .par_iter()
        .map(|(phi, spec)| run(phi, spec))
        .collect::<Vec<_>>();
    let mut it = results.into_iter();
    let (g, h, q) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
    let base = AtReport {
        scenario: s.name.to_string(),
        subgroup: s.subgroup.name(),
        alphas: Alphas::default(),
        verdict: Verdict::Inconclusive,
        note: None,
        tables: None,
    };
    match (g, h, q) {
        (Ok(g), Ok(h), Ok(q)) => {
            let tables = AtTables { g, h, q };
            let (alphas, verdict) = verdict_from(&tables);
            Ok(AtReport { alphas, verdict, tables: Some(tables), ..base })
        }
        (g, h, q) => {
            let err = [g.err(), h.err(), q.err()].into_iter().flatten().next().unwrap();
            if err.is_budget() || matches!(err, Error::TableTooShort { .. }) {
                Ok(AtReport { note: Some(err.to_string()), ..base })
            } else {
                Err(err)
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DaggerStep {
    pub n: usize,
    /// `|L_n|`, the subgroup of `G/N` generated by `Q, ..., phi_bar^{n-1}(Q)`.
    pub l_order: usize,
    pub c_size: usize,
    pub u_size: usize,
    pub k_order: usize,
    pub t_g: u64,
    pub t_q: u64,
    pub t_k: u64,
    /// `|T_n(phi_bar, Q)| * |T_n(phi|_N, K_n)| - |T_n(phi, F)|`.
    pub slack: i128,
    /// Largest fiber `|T_n(phi, F) ∩ pi^{-1}(y)|`.
    pub max_fiber: u64,
    pub holds: bool,
    /// Every `t` satisfies `t s(pi(t))^{-1} in K_n`; only when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_in_k: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DaggerCertificate {
    pub scenario: String,
    pub kernel: String,
    pub f_order: usize,
    pub f_cap_n_order: usize,
    pub q_order: usize,
    pub steps: Vec<DaggerStep>,
    pub holds: bool,
    /// The trajectory of `F` hit the product budget before `n_max`.
    pub truncated: bool,
}

/// Correction values `s(x) s(y) s(xy)^{-1}` for the pairs of `l` not
/// already inside `prev`. The section does not depend on `n`, so the
/// pairs inside `prev` contribute exactly the previous `C_{n-1}`.
fn corrections(
    model: &QuotientModel,
    kernel: &SubgroupDescriptor,
    l: &FiniteSubgroup,
    prev: Option<&FiniteSubgroup>,
    lifts: &[GroupElement],
    lift_invs: &[GroupElement],
) -> Result<Vec<GroupElement>> {
    let src = model.source();
    let tgt = model.target();
    let elems: Vec<&GroupElement> = l.elements().iter().collect();
    let old: Vec<bool> = elems.iter().map(|x| prev.is_some_and(|p| p.contains(x))).collect();
    let parts: Vec<Result<ElementSet>> = (0..elems.len())
        .into_par_iter()
        .map(|i| {
            let mut out = ElementSet::new();
            for j in 0..elems.len() {
                if old[i] && old[j] {
                    continue;
                }
                let xy = tgt.mul(elems[i], elems[j])?;
                let k = l.elements().index_of(&xy).expect("L_n is closed");
                let c = src.mul(&src.mul(&lifts[i], &lifts[j])?, &lift_invs[k])?;
                if !kernel.contains(&c) {
                    return Err(Error::NotCompatible("correction outside the kernel".into()));
                }
                out.insert(kernel.pull(&c)?);
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for p in parts {
        all.extend(p?.iter().cloned());
    }
    Ok(all)
}

/// Builds the certificate for `n = 1..=n_max`. `N` must be central and
/// `phi`-invariant. Factorizations of trajectory elements are the first
/// occurrences in the row-major product enumeration; the section is the
/// model's canonical lift.
pub fn check_dagger(
    name: &str,
    phi: &Endo,
    kernel: &SubgroupDescriptor,
    f: &FiniteSubgroup,
    limits: Limits,
    verify_eta: bool,
) -> Result<DaggerCertificate> {
    if !kernel.is_central()? {
        return Err(Error::NotCentral(kernel.name()));
    }
    let psi = kernel.restrict(phi)?;
    let model = kernel.quotient_model()?;
    phi.verify_sampled(limits.seed)?;
    model.verify(kernel, limits.seed)?;
    let phi_bar = model.induced(phi)?;
    let tgt = model.target().clone();
    let emb = kernel.embedded_family().clone();
    let lim = limits;

    let traced = traced_trajectory(phi, f, lim.n_max, lim.product_budget)?;
    let reached = traced.table.sizes.len();
    let q_gens: Vec<GroupElement> =
        f.elements().iter().map(|x| model.project(x)).collect::<Result<_>>()?;
    let q = FiniteSubgroup::closure(&tgt, &q_gens, lim.closure_budget)?;
    let t_q_table = if tgt.is_abelian() {
        abelian_trajectory(&phi_bar, &q, reached, lim.closure_budget)?
    } else {
        trajectory(&phi_bar, &q, reached, lim.product_budget)?
    };
    let f_cap_n: Vec<GroupElement> = f
        .elements()
        .iter()
        .filter(|x| kernel.contains(x))
        .map(|x| kernel.pull(x))
        .collect::<Result<_>>()?;

    let mut l_gens: Vec<GroupElement> = Vec::new();
    let mut l_prev: Option<FiniteSubgroup> = None;
    let mut c_set = ElementSet::new();
    let mut steps = Vec::new();
    for n in 1..=reached {
        for x in traced.images[n - 1].iter() {
            l_gens.push(model.project(x)?);
        }
        let l = FiniteSubgroup::closure(&tgt, &l_gens, lim.closure_budget)?;
        let mut lifts = Vec::with_capacity(l.order());
        let mut lift_invs = Vec::with_capacity(l.order());
        for y in l.elements() {
            let s = model.section(y)?;
            lift_invs.push(model.source().inverse(&s)?);
            lifts.push(s);
        }
        if model.section_is_homomorphism() {
            c_set.insert(emb.identity());
        } else {
            for c in corrections(&model, kernel, &l, l_prev.as_ref(), &lifts, &lift_invs)? {
                c_set.insert(c);
            }
        }

        let t_set = &traced.sets[n - 1];
        let mut used: FxIndexSet<(usize, GroupElement)> = FxIndexSet::default();
        for idx in 0..t_set.len() {
            for (i, a) in traced.factors(n, idx).into_iter().enumerate() {
                used.insert((i, a.clone()));
            }
        }
        let mut u_set = ElementSet::new();
        for (_, a) in &used {
            let k = l.elements().index_of(&model.project(a)?).expect("pi(a) in L_n");
            let u = model.source().mul(a, &lift_invs[k])?;
            if !kernel.contains(&u) {
                return Err(Error::NotCompatible("lift error outside the kernel".into()));
            }
            u_set.insert(kernel.pull(&u)?);
        }

        let mut k_gens: Vec<GroupElement> = f_cap_n.clone();
        k_gens.extend(c_set.iter().cloned());
        k_gens.extend(u_set.iter().cloned());
        let k_gens = reduce_generators(&emb, &k_gens);
        let k = FiniteSubgroup::closure(&emb, &k_gens, lim.closure_budget)?;
        // K_n sits in an abelian kernel in every bundled model; the product
        // path stays for the rest
        let t_k_table = if emb.is_abelian() {
            abelian_trajectory(&psi, &k, n, lim.closure_budget)?
        } else {
            trajectory(&psi, &k, n, lim.product_budget)?
        };
        if t_k_table.sizes.len() < n {
            return Err(Error::ProductBudgetExceeded { budget: lim.product_budget });
        }
        let t_k = t_k_table.sizes[n - 1];
        let t_g = traced.table.sizes[n - 1];
        let t_q = *t_q_table.sizes.get(n - 1).ok_or(Error::ProductBudgetExceeded {
            budget: lim.product_budget,
        })?;

        let mut fibers: rustc_hash::FxHashMap<GroupElement, u64> = Default::default();
        for t in t_set.iter() {
            *fibers.entry(model.project(t)?).or_default() += 1;
        }
        let max_fiber = fibers.values().copied().max().unwrap_or(0);

        let eta_in_k = if verify_eta {
            let mut ok = true;
            for t in t_set.iter() {
                let y = model.project(t)?;
                let k_idx = l.elements().index_of(&y).expect("pi(T_n) in L_n");
                let eta = model.source().mul(t, &lift_invs[k_idx])?;
                if !kernel.contains(&eta) || !k.contains(&kernel.pull(&eta)?) {
                    ok = false;
                    break;
                }
            }
            Some(ok)
        } else {
            None
        };

        let bound = t_q as i128 * t_k as i128;
        steps.push(DaggerStep {
            n,
            l_order: l.order(),
            c_size: c_set.len(),
            u_size: u_set.len(),
            k_order: k.order(),
            t_g,
            t_q,
            t_k,
            slack: bound - t_g as i128,
            max_fiber,
            holds: t_g as i128 <= bound && max_fiber as i128 <= t_k as i128,
            eta_in_k,
        });
        l_prev = Some(l);
    }
    Ok(DaggerCertificate {
        scenario: name.to_string(),
        kernel: kernel.name(),
        f_order: f.order(),
        f_cap_n_order: f_cap_n.len(),
        q_order: q.order(),
        holds: steps.iter().all(|s| s.holds && s.eta_in_k != Some(false)),
        steps,
        truncated: traced.table.is_truncated(),
    })
}

/// `|T_{n+m}| <= |T_n| |T_m|` for every computed pair.
pub fn check_fekete(table: &TrajectoryTable) -> bool {
    fekete_violations(&table.sizes).is_empty()
}

/// The stabilized ratio is a positive integer, re-checked on the exact
/// sizes over the window.
pub fn check_dichotomy(est: &EntropyEstimate) -> Result<bool> {
    let alpha = est.stabilized_ratio.ok_or(Error::NotStabilized)?;
    let s = &est.sizes;
    let tail = &s[s.len() - est.window - 1..];
    Ok(alpha >= 1 && tail.windows(2).all(|w| w[1] as u128 == alpha as u128 * w[0] as u128))
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainTerm {
    pub name: String,
    pub alpha: Option<u64>,
    pub lower_bound: f64,
    pub ladder: LadderReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub scenario: String,
    pub terms: Vec<ChainTerm>,
    /// Term estimates never decrease along the chain.
    pub monotone: bool,
    pub sup_alpha: Option<u64>,
    pub full_alpha: Option<u64>,
    /// `sup_alpha == full_alpha`, when both are known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_matches_full: Option<bool>,
}

/// Estimates `h(phi|_{H_i})` along an ascending chain of invariant
/// subgroups, each through its own ladder, and compares the sup with the
/// estimate on the whole group.
pub fn check_chain_sup(
    name: &str,
    phi: &Endo,
    chain: &[SubgroupDescriptor],
    term_ladder: &LadderSpec,
    full_ladder: &LadderSpec,
    limits: Limits,
) -> Result<ChainReport> {
    let lim = limits;
    let mut terms = Vec::with_capacity(chain.len());
    for h in chain {
        let psi = h.restrict(phi)?;
        let ladder = term_ladder.build(psi.family(), lim.closure_budget)?;
        let report = h_ladder(&psi, &ladder, lim.n_max, lim.window, lim.product_budget)?;
        terms.push(ChainTerm {
            name: h.name(),
            alpha: report.alpha(),
            lower_bound: report.sup_lower_bound,
            ladder: report,
        });
    }
    let ladder = full_ladder.build(phi.family(), lim.closure_budget)?;
    let full = h_ladder(phi, &ladder, lim.n_max, lim.window, lim.product_budget)?;
    let monotone = terms.windows(2).all(|w| {
        let lower_ok = w[0].lower_bound <= w[1].lower_bound;
        match (w[0].alpha, w[1].alpha) {
            (Some(a), Some(b)) => a <= b && lower_ok,
            _ => lower_ok,
        }
    });
    let sup_alpha = if terms.iter().all(|t| t.alpha.is_some()) {
        terms.iter().filter_map(|t| t.alpha).max()
    } else {
        None
    };
    let full_alpha = full.alpha();
    let sup_matches_full = match (sup_alpha, full_alpha) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    Ok(ChainReport { scenario: name.to_string(), terms, monotone, sup_alpha, full_alpha, sup_matches_full })
}

/// Convenience: the estimate for a single subgroup.
pub fn estimate(phi: &Endo, f: &FiniteSubgroup, limits: Limits) -> Result<EntropyEstimate> {
    h_estimate(&trajectory(phi, f, limits.n_max, limits.product_budget)?, limits.window)
}
