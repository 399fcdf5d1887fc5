//! Acceptance suite. Every criterion drives the `loopconf` binary, parses its
//! JSON report and prints one PASS/FAIL line (plus one line per failed
//! sub-check). All comparisons are exact.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use loopconf_core::central_ext::unit_family;
use loopconf_core::conformal_core::TableAlgebra;
use loopconf_core::conformal_modules::ModuleParams;
use loopconf_core::exactalg::{int, parse_rat, rat, Poly};
use loopconf_core::module_ext::{cocycle_basis_cm, cocycle_basis_mc, ExtCocycleCm, ExtCocycleMc, ExtParams};
use loopconf_core::{GeneratorId, IndexRange, LambdaElement, Rat};

fn run(args: &[&str], dir: &Path) -> (i32, Value) {
    let out = dir.join("report.json");
    let status = Command::new(env!("CARGO_BIN_EXE_loopconf"))
        .args(args)
        .arg("--out")
        .arg(&out)
        .status()
        .expect("spawn loopconf");
    let code = status.code().expect("exit code");
    let text = std::fs::read_to_string(&out).unwrap_or_else(|_| panic!("no report for {args:?}"));
    std::fs::remove_file(&out).ok();
    (code, serde_json::from_str(&text).expect("report is JSON"))
}

/// Writes directly to stdout so the lines survive output capture.
fn say(line: &str) {
    let mut o = std::io::stdout().lock();
    writeln!(o, "{line}").ok();
    o.flush().ok();
}

struct Criterion {
    number: u32,
    name: &'static str,
    budget: Duration,
    start: Instant,
    failures: Vec<String>,
    checks: usize,
}

impl Criterion {
    fn new(number: u32, name: &'static str, budget_secs: u64) -> Self {
        Criterion {
            number,
            name,
            budget: Duration::from_secs(budget_secs),
            start: Instant::now(),
            failures: Vec::new(),
            checks: 0,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(mut self) {
        let elapsed = self.start.elapsed();
        if elapsed > self.budget {
            self.failures
                .push(format!("took {:.2} s, budget {} s", elapsed.as_secs_f64(), self.budget.as_secs()));
        }
        let verdict = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        say(&format!(
            "{verdict} criterion {} ({}): {} checks, {} failed, {:.2} s",
            self.number,
            self.name,
            self.checks,
            self.failures.len(),
            elapsed.as_secs_f64()
        ));
        for f in &self.failures {
            say(&format!("    FAIL criterion {}: {f}", self.number));
        }
        assert!(self.failures.is_empty(), "criterion {} failed: {:#?}", self.number, self.failures);
    }
}

fn passes(v: &Value) -> bool {
    v["violations"].as_array().is_some_and(|a| a.is_empty())
}

fn degrees(v: &Value) -> BTreeSet<u64> {
    v.as_array().map(|a| a.iter().filter_map(|x| x.as_u64()).collect()).unwrap_or_default()
}

fn set(xs: &[u64]) -> BTreeSet<u64> {
    xs.iter().copied().collect()
}

#[test]
fn criterion_1_axioms() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = Criterion::new(1, "axioms", 5);
    for b in ["-1", "0", "1/2", "1", "2", "5/7"] {
        let (code, rep) = run(&["verify-algebra", "--b", b, "--window", "4"], dir.path());
        c.check(code == 0, || format!("b={b}: exit {code}"));
        for axiom in ["skew", "jacobi", "graded"] {
            let r = &rep["result"][axiom];
            c.check(passes(r), || format!("b={b}: {axiom} has violations"));
            c.check(r["checked"].as_u64().unwrap_or(0) > 0, || format!("b={b}: {axiom} checked nothing"));
        }
    }
    // [L_i λ L_j] = (∂+3λ)L_{i+j}
    let mut t = TableAlgebra::from_clw(&int(0), 4);
    for i in -4..=4i64 {
        for j in -4..=4i64 {
            if (i + j).abs() <= 4 {
                let p = &Poly::d() + &Poly::lambda().scale(&int(3));
                t.set_bracket(GeneratorId::l(i), GeneratorId::l(j), LambdaElement::single(GeneratorId::l(i + j), p));
            }
        }
    }
    let path = dir.path().join("mutant.json");
    std::fs::write(&path, serde_json::to_string(&t.to_file()).unwrap()).unwrap();
    let (code, rep) = run(&["verify-algebra", "--window", "4", "--input", path.to_str().unwrap()], dir.path());
    c.check(code == 1, || format!("mutant: exit {code}, expected 1"));
    c.check(!passes(&rep["result"]["skew"]), || "mutant: skew passed".into());
    c.finish();
}

#[test]
fn criterion_2_formal_distributions() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = Criterion::new(2, "formal distributions", 10);
    for (a, b) in [(2i64, 1i64), (0, 0), (-1, 1)] {
        let x0 = a - b + 1;
        for x in [x0 - 2, x0 - 1, x0, x0 + 1] {
            let (sa, sb, sx) = (a.to_string(), b.to_string(), x.to_string());
            let mut args = vec![
                "verify-distribution", "--a", &sa, "--b", &sb, "--x", &sx, "--modes", "4", "--window", "3",
            ];
            if x != x0 {
                args.extend(["--checks", "closure"]);
            }
            let (code, rep) = run(&args, dir.path());
            let r = &rep["result"];
            if x == x0 {
                c.check(code == 0, || format!("(a,b,x)=({a},{b},{x}): exit {code}"));
                c.check(passes(&r["closure"]), || format!("(a,b)=({a},{b}): closure fails at x={x}"));
                c.check(passes(&r["fourier"]), || format!("(a,b)=({a},{b}): λ-bracket mismatch"));
                c.check(passes(&r["mode_commutation"]), || format!("(a,b)=({a},{b}): commutator formula fails"));
                c.check(passes(&r["mode_algebra"]), || format!("(a,b)=({a},{b}): mode algebra fails"));
                c.check(r["closing_weight"] == Value::from(x0.to_string()), || "closing weight".into());
            } else {
                c.check(code == 1, || format!("(a,b,x)=({a},{b},{x}): exit {code}, expected 1"));
                c.check(!passes(&r["closure"]), || format!("(a,b)=({a},{b}): closure passes at x={x}"));
            }
        }
    }
    c.finish();
}

#[test]
fn criterion_3_derivations() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = Criterion::new(3, "derivations", 20);
    for b in ["0", "1", "2", "-1", "5/7"] {
        let args = [
            "derivations", "--b", b, "--window", "4", "--interior", "2", "--pdeg", "3", "--ldeg", "3",
        ];
        let (code, rep) = run(&args, dir.path());
        c.check(code == 0, || format!("b={b}: exit {code}"));
        let want = u64::from(b == "0");
        let entries = rep["result"].as_array().cloned().unwrap_or_default();
        c.check(entries.len() == 3, || format!("b={b}: {} degrees", entries.len()));
        for e in &entries {
            let deg = &e["report"]["degree"];
            let q = e["report"]["quotient_dim"].as_u64();
            c.check(q == Some(want), || format!("b={b} degree {deg}: quotient {q:?}, expected {want}"));
            c.check(e["report"]["inner_contained"] == true, || format!("b={b} degree {deg}: inner not contained"));
            if want == 1 {
                let d = &e["d_family"];
                c.check(d["is_derivation"] == true && d["is_inner"] == false, || {
                    format!("b=0 degree {deg}: d-family member is_derivation={} is_inner={}", d["is_derivation"], d["is_inner"])
                });
            }
        }
    }
    c.finish();
}

#[test]
fn criterion_4_rank_one_modules() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = Criterion::new(4, "rank-one modules", 5);
    // (b, Δ, α, c, d)
    let samples = [
        ("0", "1", "0", "1", "2"),
        ("0", "0", "3", "2", "0"),
        ("0", "0", "-1", "1", "1"),
        ("1", "2", "1/2", "3", "0"),
        ("-1", "0", "-2", "1/2", "0"),
        ("5/7", "3", "1", "-1", "0"),
    ];
    for (b, dl, al, cc, d) in samples {
        let args = [
            "rank1", "--b", b, "--delta", dl, "--alpha", al, "--c", cc, "--d", d, "--window", "3",
        ];
        let (code, rep) = run(&args, dir.path());
        let tag = format!("(b,Δ,α,c,d)=({b},{dl},{al},{cc},{d})");
        let r = &rep["result"];
        c.check(code == 0, || format!("{tag}: exit {code}"));
        c.check(passes(&r["standard_action"]), || format!("{tag}: standard action fails"));
        let want_g = u64::from(b == "0");
        let sols = r["solutions"].as_array().cloned().unwrap_or_default();
        c.check(sols.iter().any(|s| s["geometric"] == true), || format!("{tag}: no geometric f"));
        for s in sols.iter().filter(|s| s["geometric"] == true) {
            let g = s["g_dimension"].as_u64();
            c.check(g == Some(want_g), || format!("{tag}: g dimension {g:?}, expected {want_g}"));
        }
        let found: Vec<Rat> = r["submodules"]["values"]
            .as_array()
            .map(|a| a.iter().map(|v| parse_rat(v.as_str().unwrap()).unwrap()).collect())
            .unwrap_or_default();
        let expect: Vec<Rat> = if dl == "0" && d == "0" {
            vec![parse_rat(al).unwrap()]
        } else {
            Vec::new()
        };
        c.check(found == expect, || format!("{tag}: submodule values {found:?}, expected {expect:?}"));
    }
    c.finish();
}

#[test]
fn criterion_5_central_extensions() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = Criterion::new(5, "central extensions", 30);
    let fam = dir.path().join("family.json");
    std::fs::write(&fam, serde_json::to_string(&unit_family(&IndexRange::symmetric(6))).unwrap()).unwrap();
    for b in ["-1", "0", "1/2", "1", "2", "3"] {
        let args = [
            "central", "--b", b, "--window", "3", "--interior", "1", "--ldeg", "5", "--input", fam.to_str().unwrap(),
        ];
        let (_, rep) = run(&args, dir.path());
        let r = &rep["result"];
        let types = r["solution"]["pair_types"].as_array().cloned().unwrap_or_default();
        let by = |name: &str| types.iter().find(|t| t["pair"] == name).cloned().unwrap_or(Value::Null);
        let (ll, li, ii) = (by("LL"), by("LI"), by("II"));
        let li_want = match b {
            "1" => set(&[0, 1]),
            "0" => set(&[1, 2]),
            "-1" => set(&[1, 3]),
            _ => set(&[1]),
        };
        let ii_want = match b {
            "1/2" => set(&[0]),
            "0" => set(&[1]),
            _ => set(&[]),
        };
        c.check(ll["interior_dim"] == 6, || format!("b={b}: (L,L) interior dimension {}", ll["interior_dim"]));
        for (name, t, want) in [("(L,L)", &ll, set(&[1, 3])), ("(L,I)", &li, li_want), ("(I,I)", &ii, ii_want)] {
            let per_m = t["support_by_sum"].as_object().cloned().unwrap_or_default();
            c.check(per_m.len() == 3, || format!("b={b}: {name} has {} interior sums", per_m.len()));
            for (m, s) in &per_m {
                let got = degrees(s);
                c.check(got == want, || format!("b={b}: {name} λ-support at i+j={m} is {got:?}, expected {want:?}"));
            }
        }
        let fc = &r["family_check"]["report"];
        c.check(passes(fc), || {
            let first = fc["violations"][0]["axiom"].clone();
            let n = fc["violations"].as_array().map_or(0, |a| a.len());
            format!("b={b}: classified family is not a cocycle ({n} violations, first {first})")
        });
    }
    c.finish();
}

fn ext_args(dir: &str, b: &str, dl: &str, al: &str, be: &str, cc: &str, d: &str) -> Vec<String> {
    [
        "ext", "--dir", dir, "--b", b, "--delta", dl, "--alpha", al, "--beta", be, "--c", cc, "--d", d, "--window",
        "4", "--interior", "2",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

#[test]
fn criterion_6_extensions_mc() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = Criterion::new(6, "extensions M -> C", 30);
    // (b, Δ, α, β, c, d, dim)
    let cases = [
        ("0", "1", "0", "0", "1", "0", 2),
        ("0", "1", "3", "-3", "2", "0", 2),
        ("0", "-1", "0", "0", "1", "0", 1),
        ("0", "2", "1", "-1", "1/2", "0", 1),
        ("0", "1", "1", "2", "1", "0", 0),
        ("2", "2", "1", "0", "1", "0", 0),
        ("0", "1", "0", "0", "1", "1", 0),
        ("0", "2", "0", "0", "1", "3", 0),
        ("2", "2", "0", "0", "1", "0", 2),
        ("1", "1", "0", "0", "1", "0", 2),
        ("-1", "-1", "0", "0", "1", "0", 2),
        ("3", "3", "0", "0", "1", "0", 1),
    ];
    for (b, dl, al, be, cc, d, want) in cases {
        let mut args = ext_args("mc", b, dl, al, be, cc, d);
        args.extend(["--ldeg".into(), "4".into()]);
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, rep) = run(&args, dir.path());
        let r = &rep["result"];
        let tag = format!("(b,Δ,α,β,c,d)=({b},{dl},{al},{be},{cc},{d})");
        c.check(r["dim_ext"] == want, || format!("{tag}: dim_ext {}, expected {want}", r["dim_ext"]));
        c.check(code == 0, || format!("{tag}: exit {code}"));
        c.check(r["degree_stable"] == true, || format!("{tag}: dim_ext changes with ldeg"));
    }
    // theorem/lemma disagreement: b ≠ 0, Δ ∈ {−1, 1, 2}, Δ ≠ b
    for (b, dl) in [("3", "1"), ("2", "-1"), ("5", "2"), ("-1", "1"), ("1", "2")] {
        let mut args = ext_args("mc", b, dl, "0", "0", "1", "0");
        args.extend(["--ldeg".into(), "4".into()]);
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, rep) = run(&args, dir.path());
        let notes = rep["result"]["discrepancy_notes"].as_array().map_or(0, |a| a.len());
        c.check(notes > 0, || format!("(b,Δ)=({b},{dl}): no discrepancy note"));
        c.check(code == 1, || format!("(b,Δ)=({b},{dl}): exit {code}, expected 1 for a discrepancy"));
    }
    c.finish();
}

#[test]
fn criterion_7_extensions_cm() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = Criterion::new(7, "extensions C -> M", 20);
    let cases = [
        ("1", "1", "0", "0", "1", "0", 1),
        ("1", "1", "2", "-2", "3", "0", 1),
        ("0", "1", "0", "0", "1", "0", 1),
        ("0", "1", "0", "0", "1", "1", 0),
        ("1", "2", "0", "0", "1", "0", 0),
        ("0", "3", "0", "0", "1", "0", 0),
        ("1", "1", "1", "0", "1", "0", 0),
    ];
    for (b, dl, al, be, cc, d, want) in cases {
        let args = ext_args("cm", b, dl, al, be, cc, d);
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, rep) = run(&args, dir.path());
        let r = &rep["result"];
        let tag = format!("(b,Δ,α,β,c,d)=({b},{dl},{al},{be},{cc},{d})");
        c.check(r["dim_ext"] == want, || format!("{tag}: dim_ext {}, expected {want}", r["dim_ext"]));
        c.check(r["l_vanishes"] == true, || format!("{tag}: some class needs l ≠ 0"));
        c.check(code == 0, || format!("{tag}: exit {code}"));
    }
    c.finish();
}

fn random_poly(rng: &mut ChaCha8Rng, pdeg: u32, ldeg: u32) -> Poly {
    let mut p = Poly::zero();
    for _ in 0..rng.gen_range(1..=2) {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let k = rat(sign * rng.gen_range(1..=5i64), rng.gen_range(1..=3));
        p = &p + &Poly::term(k, rng.gen_range(0..=pdeg), rng.gen_range(0..=ldeg), 0);
    }
    p
}

fn combine<T: Clone>(rng: &mut ChaCha8Rng, basis: &[T], add: impl Fn(&T, &T, &Rat) -> T, zero: T) -> T {
    basis.iter().fold(zero, |acc, v| add(&acc, v, &int(rng.gen_range(-3..=3))))
}

#[test]
fn criterion_8_oracle_equivalence() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = Criterion::new(8, "oracle equivalence", 10);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let w = 2;
    let prm = |b: Rat, dl: i64, al: i64, be: i64, cc: Rat, d: i64| {
        ExtParams::new(b, ModuleParams::new(int(dl), int(al), cc, int(d)), int(be))
    };

    // M -> C
    let mc_sets = [prm(int(0), 1, 0, 0, int(1), 0), prm(int(2), 2, 1, -1, rat(1, 2), 3)];
    for p in &mc_sets {
        let basis = cocycle_basis_mc(p, w, 4);
        let mut list = Vec::new();
        for k in 0..25 {
            let mut cx = combine(
                &mut rng,
                &basis,
                |a: &ExtCocycleMc, v, s| ExtCocycleMc {
                    f: a.f.keys().chain(v.f.keys()).map(|i| (*i, &a.f.get(i).cloned().unwrap_or_default() + &v.f[i].scale(s))).collect(),
                    g: a.g.keys().chain(v.g.keys()).map(|i| (*i, &a.g.get(i).cloned().unwrap_or_default() + &v.g[i].scale(s))).collect(),
                },
                ExtCocycleMc {
                    f: (-w..=w).map(|i| (i, Poly::zero())).collect(),
                    g: (-w..=w).map(|i| (i, Poly::zero())).collect(),
                },
            );
            if k % 2 == 1 {
                let i = rng.gen_range(-w..=w);
                let extra = random_poly(&mut rng, 0, 4);
                let slot = if rng.gen_bool(0.5) { &mut cx.f } else { &mut cx.g };
                let e = slot.get_mut(&i).unwrap();
                *e = &*e + &extra;
            }
            list.push(cx);
        }
        check_batch(&mut c, dir.path(), "mc", p, &list);
    }

    // C -> M
    let cm_sets = [prm(int(1), 1, 2, -2, int(3), 0), prm(int(0), 1, 0, 0, int(2), 0)];
    for p in &cm_sets {
        let basis = cocycle_basis_cm(p, w, 2, 2);
        let mut list = Vec::new();
        for k in 0..25 {
            let mut cx = combine(
                &mut rng,
                &basis,
                |a: &ExtCocycleCm, v, s| ExtCocycleCm {
                    rho: &a.rho + &v.rho.scale(s),
                    h: a.h.keys().chain(v.h.keys()).map(|i| (*i, &a.h.get(i).cloned().unwrap_or_default() + &v.h[i].scale(s))).collect(),
                    l: a.l.keys().chain(v.l.keys()).map(|i| (*i, &a.l.get(i).cloned().unwrap_or_default() + &v.l[i].scale(s))).collect(),
                },
                ExtCocycleCm {
                    rho: Poly::zero(),
                    h: (-w..=w).map(|i| (i, Poly::zero())).collect(),
                    l: (-w..=w).map(|i| (i, Poly::zero())).collect(),
                },
            );
            if k % 2 == 1 {
                let i = rng.gen_range(-w..=w);
                let extra = random_poly(&mut rng, 2, 2);
                match rng.gen_range(0..3) {
                    0 => cx.rho = &cx.rho + &Poly::term(int(1), rng.gen_range(0..=2), 0, 0),
                    1 => *cx.h.get_mut(&i).unwrap() = &cx.h[&i] + &extra,
                    _ => *cx.l.get_mut(&i).unwrap() = &cx.l[&i] + &extra,
                }
            }
            list.push(cx);
        }
        check_batch(&mut c, dir.path(), "cm", p, &list);
    }
    c.finish();
}

fn check_batch<T: serde::Serialize>(c: &mut Criterion, dir: &Path, d: &str, p: &ExtParams, list: &[T]) {
    let path = dir.join(format!("cocycles-{d}.json"));
    std::fs::write(&path, serde_json::to_string(list).unwrap()).unwrap();
    let s = |r: &Rat| loopconf_core::exactalg::format_rat(r);
    let (b, dl, al, be, cc, dd) = (s(&p.b), s(&p.module.delta), s(&p.module.alpha), s(&p.beta), s(&p.module.c), s(&p.module.d));
    let args = [
        "ext", "--dir", d, "--b", &b, "--delta", &dl, "--alpha", &al, "--beta", &be, "--c", &cc, "--d", &dd, "--window",
        "2", "--interior", "2", "--input", path.to_str().unwrap(),
    ];
    let (_, rep) = run(&args, dir);
    let verdicts = rep["result"].as_array().cloned().unwrap_or_default();
    c.check(verdicts.len() == list.len(), || format!("{d}: {} verdicts for {} cocycles", verdicts.len(), list.len()));
    for (k, v) in verdicts.iter().enumerate() {
        c.check(v["agree"] == true, || format!("{d} sample {k}: direct={} generic={}", v["direct"], v["generic"]));
        if k % 2 == 0 {
            c.check(v["direct"] == true, || format!("{d} sample {k}: solved cocycle rejected"));
        }
    }
    let rejected = verdicts.iter().filter(|v| v["direct"] == false).count();
    c.check(rejected > 0, || format!("{d}: no perturbed sample was rejected"));
}
