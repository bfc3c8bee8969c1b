//! One PASS/FAIL line per acceptance criterion. Exits nonzero if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use entrolab::cli::run_with;
use entrolab::harness::Verdict;
use entrolab::scenario::{Overrides, Scenario};
use entrolab::BaseGroupTable;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn FnOnce() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn load(name: &str) -> Scenario {
    Scenario::load(name).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:.2?}, limit {limit:?}"))?;
    Ok(format!("{t:.2?}"))
}

fn selftest_bytes() -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(["entrolab", "selftest"], &mut out, &mut err);
    (code, out)
}

/// Every JSON object in `v`, depth first.
fn objects(v: &Value) -> Vec<&serde_json::Map<String, Value>> {
    let mut acc = Vec::new();
    let mut stack = vec![v];
    while let Some(v) = stack.pop() {
        match v {
            Value::Object(m) => {
                acc.push(m);
                stack.extend(m.values());
            }
            Value::Array(a) => stack.extend(a.iter()),
            _ => {}
        }
    }
    acc
}

fn sizes_of(m: &serde_json::Map<String, Value>) -> Option<Vec<u64>> {
    m.get("sizes")?.as_array()?.iter().map(Value::as_u64).collect()
}

fn c1() -> Outcome {
    let start = Instant::now();
    let s = load("shift_z2");
    let lim = s.limits(&Overrides { n_max: Some(12), ..Default::default() });
    let (table, est) = s.entropy(&lim).map_err(|e| e.to_string())?;
    let expect: Vec<u64> = (1..=12).map(|n| 1u64 << n).collect();
    ensure(table.sizes == expect, format!("sizes {:?}", table.sizes))?;
    ensure(est.stabilized_ratio == Some(2), format!("alpha {:?}", est.stabilized_ratio))?;
    let report = serde_json::to_value(&est.report).unwrap();
    ensure(report["kind"] == "exact" && report["alpha"] == 2, format!("report {report}"))?;
    Ok(format!("sizes 2^n to n=12, alpha 2, {}", within(start, Duration::from_secs(5))?))
}

fn at_case(name: &str, triple: Value, limit: Duration) -> Result<(entrolab::harness::AtReport, String), String> {
    let start = Instant::now();
    let s = load(name);
    let lim = s.limits(&Overrides { product_budget: Some(10_000_000), ..Default::default() });
    let r = s.at(&lim).map_err(|e| e.to_string())?;
    let alphas = serde_json::to_value(&r.alphas).unwrap();
    ensure(alphas == triple, format!("alphas {alphas}"))?;
    ensure(r.verdict == Verdict::ExactEquality, format!("verdict {:?}", r.verdict))?;
    let t = within(start, limit)?;
    Ok((r, format!("{alphas}, n_max {}, {t}", lim.n_max)))
}

fn c2() -> Outcome {
    at_case("ut3_shift_center", json!({"g": 8, "h": 2, "q": 4}), Duration::from_secs(60)).map(|r| r.1)
}

fn c3() -> Outcome {
    let (r, msg) = at_case("heis_tscale", json!({"g": 16, "h": 4, "q": 4}), Duration::from_secs(120))?;
    let tables = r.tables.ok_or("no tables")?;
    for (side, t) in [("g", &tables.g), ("h", &tables.h), ("q", &tables.q)] {
        let top = t.rungs.last().ok_or("empty ladder")?;
        ensure(top.estimate.stabilized_ratio.is_some(), format!("{side} not stabilized"))?;
        ensure(top.estimate.sizes.len() <= 5, format!("{side} used n = {}", top.estimate.sizes.len()))?;
    }
    Ok(msg)
}

fn c4() -> Outcome {
    let mut lines = Vec::new();
    for name in ["ut3_shift_center", "heis_tscale", "dagger_trivial_kernel", "dagger_heis_center_f"] {
        let s = load(name);
        let c = s.dagger(&s.limits(&Overrides::default())).map_err(|e| format!("{name}: {e}"))?;
        let ns: Vec<usize> = c.steps.iter().map(|st| st.n).collect();
        ensure(ns.len() >= 6 && ns[..6] == [1, 2, 3, 4, 5, 6], format!("{name}: steps {ns:?}"))?;
        for st in &c.steps {
            ensure(st.holds && st.slack >= 0, format!("{name}: n={} slack {}", st.n, st.slack))?;
            ensure(st.t_g as i128 <= st.t_q as i128 * st.t_k as i128, format!("{name}: n={}", st.n))?;
        }
        ensure(c.holds && !c.truncated, format!("{name}: holds {} truncated {}", c.holds, c.truncated))?;
        let slack: Vec<i128> = c.steps.iter().map(|s| s.slack).collect();
        lines.push(format!("{name} slack {slack:?}"));
    }
    Ok(lines.join("; "))
}

fn c5(report: &Value) -> Outcome {
    let mut tables = 0;
    for m in objects(report) {
        if let Some(sizes) = sizes_of(m) {
            tables += 1;
            let v = entrolab::entropy::fekete_violations(&sizes);
            ensure(v.is_empty(), format!("violations {v:?} in {sizes:?}"))?;
        }
        if let Some(steps) = m.get("steps").and_then(Value::as_array) {
            let t_g: Vec<u64> = steps.iter().filter_map(|s| s["t_g"].as_u64()).collect();
            tables += 1;
            ensure(entrolab::entropy::fekete_violations(&t_g).is_empty(), format!("dagger {t_g:?}"))?;
        }
    }
    ensure(tables > 0, "no tables found")?;
    Ok(format!("{tables} tables, zero violations"))
}

fn c6() -> Outcome {
    let mut parts = Vec::new();
    for name in ["inner_ut4_table", "inner_finitary_ut"] {
        let s = load(name);
        let (table, est) = s.entropy(&s.limits(&Overrides::default())).map_err(|e| e.to_string())?;
        let tail = &table.sizes[table.sizes.len() - 3..];
        ensure(tail.iter().all(|&x| x == tail[0]), format!("{name}: {:?}", table.sizes))?;
        ensure(est.stabilized_ratio == Some(1), format!("{name}: alpha {:?}", est.stabilized_ratio))?;
        parts.push(format!("{name} {:?}", table.sizes));
    }
    Ok(parts.join("; "))
}

fn c7(report: &Value) -> Outcome {
    let mut n = 0;
    for m in objects(report) {
        let Some(alpha) = m.get("stabilized_ratio").filter(|a| !a.is_null()) else { continue };
        let alpha = alpha.as_u64().filter(|&a| a >= 1).ok_or(format!("alpha {alpha}"))?;
        let sizes = sizes_of(m).ok_or("stabilized estimate without sizes")?;
        let window = m["window"].as_u64().unwrap_or(3) as usize;
        ensure(sizes.len() > window, format!("{sizes:?} shorter than the window"))?;
        for w in sizes[sizes.len() - window - 1..].windows(2) {
            ensure(w[1] == alpha * w[0], format!("{sizes:?} vs alpha {alpha}"))?;
        }
        if m["report"]["kind"] == "exact" {
            ensure(m["report"]["alpha"] == alpha, "report alpha differs")?;
        }
        n += 1;
    }
    ensure(n > 0, "no stabilized estimates")?;
    Ok(format!("{n} stabilized estimates, all exact positive integers"))
}

fn c8() -> Outcome {
    use common::*;
    let ut = |d| BaseGroupTable::unitriangular(2, d).unwrap();
    compare("ut3", ut(3), ut_oracle(3), 4);
    let (_, upper) = compare("ut4", ut(4), ut_oracle(4), 4);
    ensure(upper == [1, 2, 8, 64], format!("ut4 upper {upper:?}"))?;
    compare("z2xz4", z2_z4_table(), z2_z4_oracle(), 4);
    compare("s3", BaseGroupTable::symmetric3(), s3_oracle(), 6);
    Ok("UT_3, UT_4, Z_2 x Z_4, S_3 match; UT_4 upper central (1, 2, 8, 64)".into())
}

fn c9(report: &Value) -> Outcome {
    let mut n = 0;
    for m in objects(report) {
        if let Some(mono) = m.get("monotone") {
            ensure(mono == true, "a ladder is not monotone")?;
            n += 1;
        }
    }
    let s = load("gn_chain_z6");
    let c = s.chain_report(&s.limits(&Overrides::default())).map_err(|e| e.to_string())?;
    let alphas: Vec<Option<u64>> = c.terms.iter().map(|t| t.alpha).collect();
    ensure(alphas.windows(2).all(|w| w[0] <= w[1]) && alphas[0].is_some(), format!("chain {alphas:?}"))?;
    ensure(c.sup_matches_full == Some(true), format!("sup {:?} full {:?}", c.sup_alpha, c.full_alpha))?;
    Ok(format!("{n} monotone reports; G[n!] chain alphas {alphas:?}, sup = full = {:?}", c.full_alpha))
}

fn c10(first: &[u8]) -> Outcome {
    let (code, second) = selftest_bytes();
    ensure(code == 0, format!("second run exit {code}"))?;
    ensure(first == second, "reports differ")?;
    Ok(format!("{} bytes identical", first.len()))
}

fn main() {
    let (code, first) = selftest_bytes();
    let report: Value = serde_json::from_slice(&first).unwrap_or(Value::Null);
    if code != 0 {
        println!("selftest exited {code}");
    }
    let criteria: Vec<Criterion> = vec![
        ("abelian shift baseline", Box::new(c1)),
        ("nilpotent AT instance, DirectSum(UT_3(F_2))", Box::new(c2)),
        ("class-2 AT instance, PolyHeisenberg(2)", Box::new(c3)),
        ("counting certificates", Box::new(c4)),
        ("Fekete sweep", Box::new(|| c5(&report))),
        ("inner automorphisms have zero entropy", Box::new(c6)),
        ("integer growth ratios", Box::new(|| c7(&report))),
        ("series oracle equivalence", Box::new(c8)),
        ("directed-union monotonicity", Box::new(|| c9(&report))),
        ("selftest determinism", Box::new(|| c10(&first))),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 || code != 0 {
        std::process::exit(1);
    }
}
