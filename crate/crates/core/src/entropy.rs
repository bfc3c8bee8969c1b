//! Trajectories `T_n(phi, F) = F phi(F) ... phi^{n-1}(F)`, the estimator for
//! `H(phi, F)`, and ladder approximations of `h(phi)`.
//!
//! All sizes are exact integers. The estimator reports `log alpha` when the
//! ratio `|T_{n+1}| / |T_n|` is the same integer `alpha` over a trailing
//! window, and otherwise the pair (last increment, Fekete prefix bound).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::element::{GroupElement, SupportMap, UtMatrix};
use crate::endo::Endo;
use crate::error::{Error, Result};
use crate::family::GroupFamily;
use crate::fingen::{set_product_traced, ElementSet, FiniteSubgroup};

pub const DEFAULT_WINDOW: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryStatus {
    Complete,
    /// A product exceeded the budget; `sizes` stops before that step.
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrajectoryTable {
    /// `|T_1| .. |T_k|` with `k <= n_max`.
    pub sizes: Vec<u64>,
    pub n_max: usize,
    pub status: TrajectoryStatus,
}

impl TrajectoryTable {
    pub fn from_sizes(sizes: Vec<u64>) -> Self {
        let n_max = sizes.len();
        TrajectoryTable { sizes, n_max, status: TrajectoryStatus::Complete }
    }

    pub fn is_truncated(&self) -> bool {
        self.status == TrajectoryStatus::Truncated
    }
}

/// A trajectory that keeps every `T_n` and, for each element, the pair of
/// indices its first occurrence came from. This fixes one factorization
/// `t = a_0 a_1 ... a_{n-1}`, `a_i in phi^i(F)`, per element.
#[derive(Clone, Debug)]
pub struct TracedTrajectory {
    /// `sets[k] = T_{k+1}`.
    pub sets: Vec<ElementSet>,
    /// `images[i] = phi^i(F)`.
    pub images: Vec<ElementSet>,
    /// `traces[k][x]` = `(i, j)` with `sets[k+1][x] = sets[k][i] * images[k+1][j]`.
    traces: Vec<Vec<(u32, u32)>>,
    pub table: TrajectoryTable,
}

impl TracedTrajectory {
    /// Factors `a_0, ..., a_{n-1}` of the element at position `idx` of `T_n`.
    pub fn factors(&self, n: usize, idx: usize) -> Vec<&GroupElement> {
        let mut out = Vec::with_capacity(n);
        let mut idx = idx;
        for k in (1..n).rev() {
            let (i, j) = self.traces[k - 1][idx];
            out.push(self.images[k].get(j as usize).expect("traced index"));
            idx = i as usize;
        }
        out.push(self.images[0].get(idx).expect("traced index"));
        out.reverse();
        out
    }
}

fn run(
    phi: &Endo,
    f: &FiniteSubgroup,
    n_max: usize,
    budget: usize,
    keep: bool,
) -> Result<TracedTrajectory> {
    if n_max == 0 {
        return Err(Error::Scenario("n_max must be positive".into()));
    }
    let fam = phi.family();
    if f.family() != fam {
        return Err(Error::FamilyMismatch { left: fam.tag().into(), right: f.family().tag().into() });
    }
    let mut images = vec![f.elements().clone()];
    let mut current = f.elements().clone();
    let mut sizes = vec![current.len() as u64];
    let mut sets = Vec::new();
    let mut traces = Vec::new();
    let mut status = TrajectoryStatus::Complete;
    for _ in 1..n_max {
        let img = phi.apply_set(images.last().unwrap())?;
        match set_product_traced(fam, &current, &img, budget) {
            Ok((next, trace)) => {
                sizes.push(next.len() as u64);
                let prev = std::mem::replace(&mut current, next);
                if keep {
                    sets.push(prev);
                    traces.push(trace);
                }
                images.push(img);
            }
            Err(Error::ProductBudgetExceeded { .. }) => {
                status = TrajectoryStatus::Truncated;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if keep {
        sets.push(current);
    }
    Ok(TracedTrajectory { sets, images, traces, table: TrajectoryTable { sizes, n_max, status } })
}

/// `|T_1(phi, F)|, ..., |T_{n_max}(phi, F)|`. Stops early, flagged as
/// truncated, when a product would exceed `budget` elements.
pub fn trajectory(
    phi: &Endo,
    f: &FiniteSubgroup,
    n_max: usize,
    budget: usize,
) -> Result<TrajectoryTable> {
    run(phi, f, n_max, budget, false).map(|t| t.table)
}

pub fn traced_trajectory(
    phi: &Endo,
    f: &FiniteSubgroup,
    n_max: usize,
    budget: usize,
) -> Result<TracedTrajectory> {
    run(phi, f, n_max, budget, true)
}

/// Pairs `(n, m)` (1-based) with `|T_{n+m}| > |T_n| * |T_m|`.
pub fn fekete_violations(sizes: &[u64]) -> Vec<(usize, usize)> {
    let mut bad = Vec::new();
    for n in 1..sizes.len() {
        for m in 1..=sizes.len() - n {
            if sizes[n + m - 1] as u128 > sizes[n - 1] as u128 * sizes[m - 1] as u128 {
                bad.push((n, m));
            }
        }
    }
    bad
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HReport {
    Exact { alpha: u64, log_alpha: f64 },
    Interval { last_increment: f64, prefix_inf: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyEstimate {
    pub sizes: Vec<u64>,
    pub window: usize,
    /// `min_n log|T_n| / n`, an upper bound on `H`.
    pub prefix_inf: f64,
    /// `log(|T_{n+1}| / |T_n|)`.
    pub increments: Vec<f64>,
    /// `|T_{n+1}| / |T_n|` when it is an integer.
    pub ratios: Vec<Option<u64>>,
    pub stabilized_ratio: Option<u64>,
    /// First `n` from which `|T_{m+1}| = alpha |T_m|` for all computed `m >= n`.
    pub stabilized_at: Option<usize>,
    pub report: HReport,
    pub truncated: bool,
}

impl EntropyEstimate {
    /// Lower end of the plausible range for `H`: `log alpha` when exact,
    /// otherwise `min(last increment, prefix_inf)`.
    pub fn lower(&self) -> f64 {
        match self.report {
            HReport::Exact { log_alpha, .. } => log_alpha,
            HReport::Interval { last_increment, prefix_inf } => last_increment.min(prefix_inf),
        }
    }

    /// Upper end: `log alpha` when exact, otherwise the Fekete bound.
    pub fn upper(&self) -> f64 {
        match self.report {
            HReport::Exact { log_alpha, .. } => log_alpha,
            HReport::Interval { prefix_inf, .. } => prefix_inf,
        }
    }
}

pub fn h_estimate(table: &TrajectoryTable, window: usize) -> Result<EntropyEstimate> {
    let sizes = &table.sizes;
    if window == 0 || sizes.len() < window + 1 {
        return Err(Error::TableTooShort { len: sizes.len(), needed: window.max(1) + 1 });
    }
    let prefix_inf = sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| (s as f64).ln() / (i + 1) as f64)
        .fold(f64::INFINITY, f64::min);
    let increments: Vec<f64> =
        sizes.windows(2).map(|w| (w[1] as f64 / w[0] as f64).ln()).collect();
    let ratios: Vec<Option<u64>> =
        sizes.windows(2).map(|w| (w[1] % w[0] == 0).then(|| w[1] / w[0])).collect();
    let tail = &ratios[ratios.len() - window..];
    let stabilized_ratio = match tail[0] {
        Some(a) if tail.iter().all(|&r| r == Some(a)) => Some(a),
        _ => None,
    };
    let stabilized_at = stabilized_ratio.map(|a| {
        let run = ratios.iter().rev().take_while(|&&r| r == Some(a)).count();
        ratios.len() - run + 1
    });
    let report = match stabilized_ratio {
        Some(alpha) => HReport::Exact { alpha, log_alpha: (alpha as f64).ln() },
        None => HReport::Interval { last_increment: *increments.last().unwrap(), prefix_inf },
    };
    Ok(EntropyEstimate {
        sizes: sizes.clone(),
        window,
        prefix_inf,
        increments,
        ratios,
        stabilized_ratio,
        stabilized_at,
        report,
        truncated: table.is_truncated(),
    })
}

/// How to build an ascending family of finite subgroups.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LadderSpec {
    /// Subgroups generated by the "unit" elements supported near the origin;
    /// see [`support_ball`].
    SupportBalls { radii: Vec<u32> },
    /// One generator list per rung.
    Explicit { rungs: Vec<Vec<GroupElement>> },
}

impl LadderSpec {
    pub fn build(&self, family: &GroupFamily, budget: usize) -> Result<Vec<FiniteSubgroup>> {
        match self {
            LadderSpec::SupportBalls { radii } => {
                radii.iter().map(|&r| support_ball(family, r, budget)).collect()
            }
            LadderSpec::Explicit { rungs } => rungs
                .iter()
                .map(|gens| {
                    for g in gens {
                        family.validate(g)?;
                    }
                    FiniteSubgroup::closure(family, gens, budget)
                })
                .collect(),
        }
    }
}

/// The radius-`r` rung of the standard ladder of each family:
/// - `DirectSum(B)`: elements supported on coordinates `0..=r`;
/// - `PolyHeisenberg(p)`: generated by `(t^i, 0, 0)` and `(0, t^i, 0)`, `0 <= i <= r`;
/// - `FinitaryUt(p)`: generated by `I + E_{i,i+1}`, `1 <= i <= r`, i.e. `UT_{r+1}(p)`;
/// - `Finite(B)`: all of `B`.
pub fn support_ball(family: &GroupFamily, r: u32, budget: usize) -> Result<FiniteSubgroup> {
    let gens: Vec<GroupElement> = match family {
        GroupFamily::Finite(t) => return Ok(FiniteSubgroup::whole_table(t)),
        GroupFamily::DirectSum(t) => {
            let base = t.generators();
            (0..=r as i32)
                .flat_map(|i| {
                    base.iter().map(move |&g| GroupElement::DirectSum(SupportMap::single(i, g as u32)))
                })
                .collect()
        }
        GroupFamily::PolyHeisenberg { .. } => (0..=r as i32)
            .flat_map(|i| {
                let m = SupportMap::single(i, 1);
                [
                    GroupElement::PolyHeis(m.clone(), SupportMap::new(), SupportMap::new()),
                    GroupElement::PolyHeis(SupportMap::new(), m, SupportMap::new()),
                ]
            })
            .collect(),
        GroupFamily::FinitaryUt { .. } => (1..=r)
            .map(|i| {
                GroupElement::FinitaryUt(UtMatrix::from_entries([(i, i + 1, 1)]).expect("upper"))
            })
            .collect(),
    };
    FiniteSubgroup::closure(family, &gens, budget)
}

#[derive(Clone, Debug, Serialize)]
pub struct Rung {
    pub order: usize,
    pub estimate: EntropyEstimate,
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderReport {
    pub rungs: Vec<Rung>,
    /// Largest stabilized ratio over the rungs; a lower bound on `exp h(phi)`.
    pub sup_alpha: Option<u64>,
    /// `log` of `sup_alpha` (0 when nothing stabilized).
    pub sup_lower_bound: f64,
    /// Every rung stabilized, so `sup_alpha` summarizes the whole ladder.
    pub all_stabilized: bool,
    /// Rung sizes are pointwise nondecreasing and stabilized ratios nondecreasing.
    pub monotone: bool,
    pub truncated: bool,
}

impl LadderReport {
    /// The ladder's `alpha` for exact comparisons: present only when every
    /// rung stabilized.
    pub fn alpha(&self) -> Option<u64> {
        self.all_stabilized.then_some(self.sup_alpha).flatten()
    }

    /// Interval for `h` backed by this ladder: the sup of the rungs' lower
    /// ends and the sup of their upper ends.
    pub fn bounds(&self) -> (f64, f64) {
        let lo = self.rungs.iter().map(|r| r.estimate.lower()).fold(0.0, f64::max);
        let hi = self.rungs.iter().map(|r| r.estimate.upper()).fold(0.0, f64::max);
        (lo, hi)
    }
}

/// Estimates `H(phi, F)` for each rung in parallel; results keep rung order.
pub fn h_ladder(
    phi: &Endo,
    ladder: &[FiniteSubgroup],
    n_max: usize,
    window: usize,
    budget: usize,
) -> Result<LadderReport> {
    let rungs: Vec<Rung> = ladder
        .par_iter()
        .map(|f| {
            let table = trajectory(phi, f, n_max, budget)?;
            Ok(Rung { order: f.order(), estimate: h_estimate(&table, window)? })
        })
        .collect::<Result<_>>()?;
    let sup_alpha = rungs.iter().filter_map(|r| r.estimate.stabilized_ratio).max();
    let all_stabilized = rungs.iter().all(|r| r.estimate.stabilized_ratio.is_some());
    let monotone = rungs.windows(2).all(|w| {
        let (a, b) = (&w[0].estimate, &w[1].estimate);
        let pointwise = a.sizes.iter().zip(&b.sizes).all(|(x, y)| x <= y);
        let ratios = match (a.stabilized_ratio, b.stabilized_ratio) {
            (Some(x), Some(y)) => x <= y,
            _ => true,
        };
        pointwise && ratios
    });
    let truncated = rungs.iter().any(|r| r.estimate.truncated);
    Ok(LadderReport {
        sup_lower_bound: sup_alpha.map_or(0.0, |a| (a as f64).ln()),
        rungs,
        sup_alpha,
        all_stabilized,
        monotone,
        truncated,
    })
}
