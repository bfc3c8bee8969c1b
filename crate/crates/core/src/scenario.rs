//! Declarative scenario files and the checks they drive.
//!
//! A scenario fixes a family, an endomorphism, an optional invariant
//! subgroup and ladders, plus the list of checks to run and the values
//! they are expected to produce. Unknown fields are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::element::GroupElement;
use crate::endo::{Endo, EndoSpec, SAMPLE_SEED};
use crate::entropy::{
    h_estimate, h_ladder, support_ball, trajectory, EntropyEstimate, LadderReport, LadderSpec,
    TrajectoryTable, DEFAULT_WINDOW,
};
use crate::error::{Error, Result};
use crate::family::GroupFamily;
use crate::fingen::{FiniteSubgroup, DEFAULT_CLOSURE_BUDGET, DEFAULT_PRODUCT_BUDGET};
use crate::harness::{
    check_at, check_chain_sup, check_dagger, check_dichotomy, check_fekete, AtReport,
    AtScenario, ChainReport, DaggerCertificate, Limits, Verdict,
};
use crate::quotient::SubgroupDescriptor;
use crate::series::{self, SeriesReport};
use crate::table::BaseGroupTable;

pub const SCHEMA_VERSION: u32 = 1;

/// A finite table, by name or inline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "base", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseSpec {
    ZN { n: usize },
    Ut3F2,
    Ut4F2,
    S3,
    Ut { p: u32, dim: usize },
    Product { factors: Vec<BaseSpec> },
    Table { rows: Vec<Vec<usize>> },
}

impl BaseSpec {
    pub fn build(&self) -> Result<BaseGroupTable> {
        match self {
            BaseSpec::ZN { n } => BaseGroupTable::cyclic(*n),
            BaseSpec::Ut3F2 => BaseGroupTable::unitriangular(2, 3),
            BaseSpec::Ut4F2 => BaseGroupTable::unitriangular(2, 4),
            BaseSpec::S3 => Ok(BaseGroupTable::symmetric3()),
            BaseSpec::Ut { p, dim } => BaseGroupTable::unitriangular(*p, *dim),
            BaseSpec::Product { factors } => {
                let mut acc = BaseGroupTable::trivial();
                for f in factors {
                    acc = BaseGroupTable::direct_product(&acc, &f.build()?)?;
                }
                Ok(acc)
            }
            BaseSpec::Table { rows } => BaseGroupTable::from_rows(rows),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Finite { base: BaseSpec },
    DirectSum { base: BaseSpec },
    PolyHeisenberg { p: u32 },
    FinitaryUt { p: u32 },
}

impl FamilySpec {
    pub fn build(&self) -> Result<GroupFamily> {
        match self {
            FamilySpec::Finite { base } => Ok(GroupFamily::finite(base.build()?)),
            FamilySpec::DirectSum { base } => Ok(GroupFamily::direct_sum(base.build()?)),
            FamilySpec::PolyHeisenberg { p } => GroupFamily::poly_heisenberg(*p),
            FamilySpec::FinitaryUt { p } => GroupFamily::finitary_ut(*p),
        }
    }
}

/// An invariant subgroup. The table-level kinds are computed in the base
/// table and taken coordinatewise on a direct sum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SubgroupSpec {
    Trivial,
    Whole,
    Center,
    /// `Z_i`, with `Z_0 = 1`.
    UpperCentral { i: usize },
    /// `gamma_i`, with `gamma_1` the whole table.
    LowerCentral { i: usize },
    /// `B^(i)`, with `B^(0)` the whole table.
    Derived { i: usize },
    /// `B[n]`, generated by the elements of order dividing `n`.
    NTorsion { n: u64 },
    /// Generated by the listed base-table indices.
    Generated { gens: Vec<u16> },
}

/// A finite subgroup of the family itself.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FiniteSpec {
    SupportBall { radius: u32 },
    Generated { gens: Vec<Value> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChainSpec {
    /// `B[1!] <= B[2!] <= ... <= B[up_to!]`, coordinatewise.
    NTorsionFactorial { up_to: u64 },
    /// `Z_0 <= Z_1 <= ...` of the base table.
    UpperCentral,
    Explicit { terms: Vec<SubgroupSpec> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Entropy,
    Ladder,
    Series,
    At,
    Dagger,
    Chain,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Entropy => "entropy",
            Check::Ladder => "ladder",
            Check::Series => "series",
            Check::At => "at",
            Check::Dagger => "dagger",
            Check::Chain => "chain",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaTriple {
    pub g: u64,
    pub h: u64,
    pub q: u64,
}

/// Values the checks must reproduce. Every field is optional.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Expect {
    /// Leading trajectory sizes for `f`.
    pub sizes: Option<Vec<u64>>,
    /// Stabilized ratio for `f`.
    pub alpha: Option<u64>,
    /// Ladder `alpha` (every rung stabilized).
    pub ladder_alpha: Option<u64>,
    pub at: Option<AlphaTriple>,
    pub verdict: Option<Verdict>,
    pub chain_alphas: Option<Vec<u64>>,
    /// Series kind name to term orders.
    pub series: Option<BTreeMap<String, Vec<usize>>>,
    /// Trajectory sizes eventually constant.
    pub eventually_constant: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub family: FamilySpec,
    #[serde(default = "identity_spec")]
    pub endo: EndoSpec,
    #[serde(default)]
    pub subgroup: Option<SubgroupSpec>,
    /// Finite subgroup for `entropy` and `dagger`; defaults to the radius-0 ball.
    #[serde(default)]
    pub f: Option<FiniteSpec>,
    #[serde(default)]
    pub ladder: Option<LadderSpec>,
    #[serde(default)]
    pub h_ladder: Option<LadderSpec>,
    #[serde(default)]
    pub q_ladder: Option<LadderSpec>,
    #[serde(default)]
    pub chain: Option<ChainSpec>,
    pub n_max: usize,
    #[serde(default)]
    pub window: Option<usize>,
    #[serde(default)]
    pub dagger_n_max: Option<usize>,
    #[serde(default)]
    pub product_budget: Option<usize>,
    #[serde(default)]
    pub closure_budget: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Also check `t s(pi(t))^{-1} in K_n` in dagger certificates.
    #[serde(default)]
    pub verify_eta: bool,
    #[serde(default)]
    pub checks: Vec<Check>,
    #[serde(default)]
    pub expect: Expect,
    #[serde(default)]
    pub out: Option<String>,
}

fn identity_spec() -> EndoSpec {
    EndoSpec::Identity
}

/// Command-line overrides of the scenario's limits.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub n_max: Option<usize>,
    pub window: Option<usize>,
    pub product_budget: Option<usize>,
    pub closure_budget: Option<usize>,
    pub seed: Option<u64>,
}

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../scenarios/", $name, ".json")))),*]
    };
}

/// The scenario suite shipped with the crate, by name.
pub const BUNDLED: &[(&str, &str)] = bundled![
    "dagger_heis_center_f",
    "dagger_trivial_kernel",
    "finitary_ut_shift",
    "gn_chain_z6",
    "heis_tscale",
    "inner_finitary_ut",
    "inner_ut4_table",
    "series_s3",
    "series_ut3",
    "series_ut4",
    "series_z2xz4",
    "shift_z2",
    "ut3_compose_projection",
    "ut3_shift_center",
    "z4_abelian_at",
    "zn_chain_ut4_inner",
];

/// A parsed and validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub family: GroupFamily,
    pub phi: Endo,
}

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScenarioFile =
            serde_json::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        Self::from_file(file)
    }

    /// Reads a scenario from disk; a bare bundled name is accepted too.
    pub fn load(path: &str) -> Result<Self> {
        if Path::new(path).exists() {
            return Self::from_json(&std::fs::read_to_string(path)?);
        }
        let stem = path.trim_end_matches(".json");
        let stem = stem.rsplit('/').next().unwrap_or(stem);
        match BUNDLED.iter().find(|(n, _)| *n == stem) {
            Some((_, text)) => Self::from_json(text),
            None => Err(Error::Io(format!("{path}: no such file or bundled scenario"))),
        }
    }

    pub fn bundled() -> Result<Vec<Self>> {
        BUNDLED.iter().map(|(_, t)| Self::from_json(t)).collect()
    }

    pub fn from_file(file: ScenarioFile) -> Result<Self> {
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Scenario(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        if file.n_max == 0 {
            return Err(Error::Scenario("n_max must be positive".into()));
        }
        let family = file.family.build()?;
        let phi = Endo::new(file.endo.clone(), &family)?;
        let s = Scenario { file, family, phi };
        // parse every literal up front
        s.f(DEFAULT_CLOSURE_BUDGET)?;
        if let Some(LadderSpec::Explicit { rungs }) = &s.file.ladder {
            for g in rungs.iter().flatten() {
                s.family.validate(g)?;
            }
        }
        Ok(s)
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn limits(&self, o: &Overrides) -> Limits {
        let f = &self.file;
        Limits {
            n_max: o.n_max.unwrap_or(f.n_max),
            window: o.window.or(f.window).unwrap_or(DEFAULT_WINDOW),
            product_budget: o.product_budget.or(f.product_budget).unwrap_or(DEFAULT_PRODUCT_BUDGET),
            closure_budget: o.closure_budget.or(f.closure_budget).unwrap_or(DEFAULT_CLOSURE_BUDGET),
            seed: o.seed.or(f.seed).unwrap_or(SAMPLE_SEED),
        }
    }

    pub fn f(&self, budget: usize) -> Result<FiniteSubgroup> {
        match &self.file.f {
            None => support_ball(&self.family, 0, budget),
            Some(FiniteSpec::SupportBall { radius }) => support_ball(&self.family, *radius, budget),
            Some(FiniteSpec::Generated { gens }) => {
                let gens: Vec<GroupElement> = gens
                    .iter()
                    .map(|v| crate::literal::parse_in(&self.family, v))
                    .collect::<Result<_>>()?;
                FiniteSubgroup::closure(&self.family, &gens, budget)
            }
        }
    }

    fn ladder(&self) -> LadderSpec {
        self.file.ladder.clone().unwrap_or(LadderSpec::SupportBalls { radii: vec![0] })
    }

    fn base_whole(&self) -> Result<FiniteSubgroup> {
        match self.family.table() {
            Some(t) => Ok(FiniteSubgroup::whole_table(t)),
            None => Err(Error::Scenario(format!("{:?} has no base table", self.family))),
        }
    }

    fn base_subgroup(&self, spec: &SubgroupSpec, budget: usize) -> Result<FiniteSubgroup> {
        let whole = self.base_whole()?;
        let pick = |r: SeriesReport, i: usize| r.terms[i.min(r.terms.len() - 1)].clone();
        Ok(match spec {
            SubgroupSpec::Trivial => FiniteSubgroup::trivial(whole.family()),
            SubgroupSpec::Whole => whole,
            SubgroupSpec::Center => series::center(&whole)?,
            SubgroupSpec::UpperCentral { i } => pick(series::upper_central_series(&whole, budget)?, *i),
            SubgroupSpec::LowerCentral { i } => {
                pick(series::lower_central_series(&whole, budget)?, i.saturating_sub(1))
            }
            SubgroupSpec::Derived { i } => pick(series::derived_series(&whole, budget)?, *i),
            SubgroupSpec::NTorsion { n } => series::n_torsion_subgroup(&whole, *n, budget)?,
            SubgroupSpec::Generated { gens } => {
                let t = self.family.table().unwrap();
                let gens: Vec<GroupElement> = gens
                    .iter()
                    .map(|&g| {
                        if (g as usize) < t.order() {
                            Ok(GroupElement::Base(g))
                        } else {
                            Err(Error::InvalidElement(format!("base index {g} out of range")))
                        }
                    })
                    .collect::<Result<_>>()?;
                FiniteSubgroup::closure(whole.family(), &gens, budget)?
            }
        })
    }

    pub fn descriptor(&self, spec: &SubgroupSpec, budget: usize) -> Result<SubgroupDescriptor> {
        match (spec, &self.family) {
            (SubgroupSpec::Trivial, _) => Ok(SubgroupDescriptor::trivial(&self.family)),
            (SubgroupSpec::Center, _) => SubgroupDescriptor::center(&self.family),
            (_, GroupFamily::DirectSum(_) | GroupFamily::Finite(_)) => {
                let base = self.base_subgroup(spec, budget)?;
                SubgroupDescriptor::from_base_subgroup(&self.family, base)
            }
            _ => Err(Error::Scenario(format!("subgroup {spec:?} needs a table family"))),
        }
    }

    pub fn subgroup(&self, budget: usize) -> Result<SubgroupDescriptor> {
        let spec = self
            .file
            .subgroup
            .as_ref()
            .ok_or_else(|| Error::Scenario("scenario declares no subgroup".into()))?;
        self.descriptor(spec, budget)
    }

    pub fn chain(&self, budget: usize) -> Result<Vec<SubgroupDescriptor>> {
        let spec = self
            .file
            .chain
            .as_ref()
            .ok_or_else(|| Error::Scenario("scenario declares no chain".into()))?;
        match spec {
            ChainSpec::NTorsionFactorial { up_to } => (1..=*up_to)
                .map(|n| self.descriptor(&SubgroupSpec::NTorsion { n: factorial(n) }, budget))
                .collect(),
            ChainSpec::UpperCentral => {
                let len = series::upper_central_series(&self.base_whole()?, budget)?.terms.len();
                (0..len)
                    .map(|i| self.descriptor(&SubgroupSpec::UpperCentral { i }, budget))
                    .collect()
            }
            ChainSpec::Explicit { terms } => {
                terms.iter().map(|t| self.descriptor(t, budget)).collect()
            }
        }
    }

    /// Trajectory sizes for `f`.
    pub fn trajectory(&self, lim: &Limits) -> Result<TrajectoryTable> {
        let f = self.f(lim.closure_budget)?;
        trajectory(&self.phi, &f, lim.n_max, lim.product_budget)
    }

    /// Trajectory and estimate for `f`.
    pub fn entropy(&self, lim: &Limits) -> Result<(TrajectoryTable, EntropyEstimate)> {
        let table = self.trajectory(lim)?;
        let est = h_estimate(&table, lim.window)?;
        Ok((table, est))
    }

    pub fn ladder_report(&self, lim: &Limits) -> Result<LadderReport> {
        let rungs = self.ladder().build(&self.family, lim.closure_budget)?;
        h_ladder(&self.phi, &rungs, lim.n_max, lim.window, lim.product_budget)
    }

    /// Lower central, upper central and derived series of the base table.
    pub fn series(&self, lim: &Limits) -> Result<Vec<SeriesReport>> {
        let whole = self.base_whole()?;
        Ok(vec![
            series::lower_central_series(&whole, lim.closure_budget)?,
            series::upper_central_series(&whole, lim.closure_budget)?,
            series::derived_series(&whole, lim.closure_budget)?,
        ])
    }

    pub fn at(&self, lim: &Limits) -> Result<AtReport> {
        let h = self.subgroup(lim.closure_budget)?;
        let g_ladder = self.ladder();
        let h_ladder = self.file.h_ladder.clone().unwrap_or_else(|| g_ladder.clone());
        let q_ladder = self.file.q_ladder.clone().unwrap_or_else(|| g_ladder.clone());
        check_at(&AtScenario {
            name: self.name(),
            phi: &self.phi,
            subgroup: &h,
            g_ladder: &g_ladder,
            h_ladder: &h_ladder,
            q_ladder: &q_ladder,
            limits: *lim,
        })
    }

    pub fn dagger(&self, lim: &Limits) -> Result<DaggerCertificate> {
        let n = self.subgroup(lim.closure_budget)?;
        let f = self.f(lim.closure_budget)?;
        let lim = Limits { n_max: self.file.dagger_n_max.unwrap_or(lim.n_max), ..*lim };
        check_dagger(self.name(), &self.phi, &n, &f, lim, self.file.verify_eta)
    }

    pub fn chain_report(&self, lim: &Limits) -> Result<ChainReport> {
        let chain = self.chain(lim.closure_budget)?;
        let ladder = self.ladder();
        check_chain_sup(self.name(), &self.phi, &chain, &ladder, &ladder, *lim)
    }

    /// Runs one check and compares it with the expectations.
    pub fn run_check(&self, check: Check, lim: &Limits) -> CheckOutcome {
        match self.try_check(check, lim) {
            Ok(outcome) => outcome,
            Err(e) => CheckOutcome {
                check,
                status: if e.is_budget() { Status::Inconclusive } else { Status::Fail },
                failures: vec![e.to_string()],
                report: Value::Null,
            },
        }
    }

    fn try_check(&self, check: Check, lim: &Limits) -> Result<CheckOutcome> {
        let ex = &self.file.expect;
        let mut failures = Vec::new();
        let mut status = Status::Pass;
        let report = match check {
            Check::Entropy => {
                let (table, est) = self.entropy(lim)?;
                if let Some(sizes) = &ex.sizes {
                    let got = &table.sizes[..sizes.len().min(table.sizes.len())];
                    expect_eq(&mut failures, "sizes", format!("{got:?}"), format!("{sizes:?}"));
                }
                if let Some(a) = ex.alpha {
                    expect_eq(&mut failures, "alpha", format!("{:?}", est.stabilized_ratio), format!("{:?}", Some(a)));
                }
                if ex.eventually_constant == Some(true) {
                    expect_eq(&mut failures, "eventually constant", format!("{:?}", est.stabilized_ratio), "Some(1)".into());
                }
                audit_estimate(&est, &mut failures);
                if table.is_truncated() && est.stabilized_ratio.is_none() {
                    status = Status::Inconclusive;
                }
                serde_json::json!({ "table": table, "estimate": est })
            }
            Check::Ladder => {
                let r = self.ladder_report(lim)?;
                if let Some(a) = ex.ladder_alpha {
                    expect_eq(&mut failures, "ladder alpha", format!("{:?}", r.alpha()), format!("{:?}", Some(a)));
                }
                if !r.monotone {
                    failures.push("ladder is not monotone".into());
                }
                for rung in &r.rungs {
                    audit_estimate(&rung.estimate, &mut failures);
                }
                if r.truncated && !r.all_stabilized {
                    status = Status::Inconclusive;
                }
                serde_json::to_value(&r)?
            }
            Check::Series => {
                let reports = self.series(lim)?;
                if let Some(want) = &ex.series {
                    for (kind, orders) in want {
                        match reports.iter().find(|r| r.kind.name() == kind) {
                            Some(r) => {
                                expect_eq(&mut failures, kind, format!("{:?}", r.orders()), format!("{orders:?}"))
                            }
                            None => failures.push(format!("unknown series kind {kind}")),
                        }
                    }
                }
                serde_json::to_value(&reports)?
            }
            Check::At => {
                let r = self.at(lim)?;
                if let Some(want) = &ex.at {
                    let got = (r.alphas.g, r.alphas.h, r.alphas.q);
                    let want = (Some(want.g), Some(want.h), Some(want.q));
                    expect_eq(&mut failures, "alphas", format!("{got:?}"), format!("{want:?}"));
                }
                if let Some(v) = ex.verdict {
                    expect_eq(&mut failures, "verdict", format!("{:?}", r.verdict), format!("{v:?}"));
                }
                match r.verdict {
                    Verdict::Violation => failures.push("addition identity violated".into()),
                    Verdict::Inconclusive => status = Status::Inconclusive,
                    _ => {}
                }
                if let Some(t) = &r.tables {
                    for rung in t.g.rungs.iter().chain(&t.h.rungs).chain(&t.q.rungs) {
                        audit_estimate(&rung.estimate, &mut failures);
                    }
                }
                serde_json::to_value(&r)?
            }
            Check::Dagger => {
                let c = self.dagger(lim)?;
                if !c.holds {
                    failures.push("counting inequality fails".into());
                }
                let sizes: Vec<u64> = c.steps.iter().map(|s| s.t_g).collect();
                if !check_fekete(&TrajectoryTable::from_sizes(sizes)) {
                    failures.push("subadditivity fails on |T_n(phi, F)|".into());
                }
                if c.truncated {
                    status = Status::Inconclusive;
                }
                serde_json::to_value(&c)?
            }
            Check::Chain => {
                let r = self.chain_report(lim)?;
                if let Some(want) = &ex.chain_alphas {
                    let got: Vec<Option<u64>> = r.terms.iter().map(|t| t.alpha).collect();
                    let want: Vec<Option<u64>> = want.iter().map(|&a| Some(a)).collect();
                    expect_eq(&mut failures, "chain alphas", format!("{got:?}"), format!("{want:?}"));
                }
                if !r.monotone {
                    failures.push("chain estimates decrease".into());
                }
                if r.sup_matches_full == Some(false) {
                    failures.push("chain sup differs from the full estimate".into());
                }
                for t in &r.terms {
                    for rung in &t.ladder.rungs {
                        audit_estimate(&rung.estimate, &mut failures);
                    }
                }
                serde_json::to_value(&r)?
            }
        };
        if !failures.is_empty() {
            status = Status::Fail;
        }
        Ok(CheckOutcome { check, status, failures, report })
    }

    /// Every declared check, in declaration order.
    pub fn run_all(&self, o: &Overrides) -> ScenarioOutcome {
        let lim = self.limits(o);
        let checks: Vec<CheckOutcome> =
            self.file.checks.iter().map(|&c| self.run_check(c, &lim)).collect();
        let status = checks.iter().map(|c| c.status).max().unwrap_or(Status::Pass);
        ScenarioOutcome { scenario: self.name().to_string(), status, checks }
    }
}

fn expect_eq(failures: &mut Vec<String>, what: &str, got: String, want: String) {
    if got != want {
        failures.push(format!("{what}: expected {want}, got {got}"));
    }
}

/// Subadditivity and, when stabilized, integrality of the ratio.
fn audit_estimate(est: &EntropyEstimate, failures: &mut Vec<String>) {
    if !check_fekete(&TrajectoryTable::from_sizes(est.sizes.clone())) {
        failures.push(format!("subadditivity fails on {:?}", est.sizes));
    }
    if est.stabilized_ratio.is_some() && !check_dichotomy(est).unwrap_or(false) {
        failures.push(format!("non-integral stabilized ratio on {:?}", est.sizes));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub check: Check,
    pub status: Status,
    pub failures: Vec<String>,
    pub report: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioOutcome {
    pub scenario: String,
    pub status: Status,
    pub checks: Vec<CheckOutcome>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub schema_version: u32,
    pub status: Status,
    pub scenarios: Vec<ScenarioOutcome>,
}

/// Runs the bundled suite. Scenarios are processed in parallel and
/// reported in name order.
pub fn selftest(o: &Overrides) -> Result<SelftestReport> {
    use rayon::prelude::*;
    let suite = Scenario::bundled()?;
    let mut scenarios: Vec<ScenarioOutcome> = suite.par_iter().map(|s| s.run_all(o)).collect();
    scenarios.sort_by(|a, b| a.scenario.cmp(&b.scenario));
    let status = scenarios.iter().map(|s| s.status).max().unwrap_or(Status::Pass);
    Ok(SelftestReport { schema_version: SCHEMA_VERSION, status, scenarios })
}
