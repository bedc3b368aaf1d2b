//! Acceptance criteria AC1-AC9, one line of output per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the PASS/FAIL lines are
//! always printed; exits non-zero if any criterion fails.

use std::collections::HashMap;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode, Output};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use affkl::coxeter::{AffineSystem, Ball, Involution, InvolutionId};
use affkl::hecke::{KlOracle, KlTable};
use affkl::io::{cache_load, cache_save, CacheLoad};
use affkl::rep::DualRootSystem;
use affkl::satake::{VerificationRecord, Workspace};
use affkl::twisted::{MElement, TwistedModule};
use affkl::LaurentPoly;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type Shared = Mutex<HashMap<(String, u32), Arc<Workspace>>>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn check<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn system(name: &str) -> Arc<AffineSystem> {
    Arc::new(AffineSystem::from_name(name).expect("supported system"))
}

/// Filled star workspaces shared between criteria.
fn workspace(name: &str, max_len: u32) -> Result<Arc<Workspace>, String> {
    static CACHE: OnceLock<Shared> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(ws) = cache.lock().unwrap().get(&(name.to_string(), max_len)) {
        return Ok(ws.clone());
    }
    let ws = check(Workspace::new(system(name), InvolutionId::Star, max_len))?;
    check(ws.fill())?;
    let ws = Arc::new(ws);
    cache.lock().unwrap().insert((name.to_string(), max_len), ws.clone());
    Ok(ws)
}

fn failures(records: &[VerificationRecord]) -> Result<(), String> {
    match records.iter().find(|r| !r.pass) {
        None => Ok(()),
        Some(r) => Err(format!(
            "{} {} {}: lambda={:?} mu={:?} y={:?} w={:?}: {} != {}",
            r.system, r.check, r.identity, r.lambda, r.mu, r.y, r.w, r.lhs, r.rhs
        )),
    }
}

fn poly(coeffs: &[i64]) -> LaurentPoly {
    LaurentPoly::from_coeffs(0, coeffs.iter().copied())
}

/// Dominant `mu` below `lambda` in the root order.
fn below<'a>(lambdas: &'a [Vec<i64>], lambda: &'a [i64]) -> impl Iterator<Item = &'a Vec<i64>> {
    lambdas
        .iter()
        .filter(move |mu| lambda.iter().zip(mu.iter()).all(|(l, m)| l >= m))
}

fn ac1() -> Outcome {
    let start = Instant::now();
    // <2rho, n alpha> = 2n <= 12 and l(d_{n alpha}) = 2n + 1
    let ws = workspace("A1", 13)?;
    let lambdas = ws.dominant_range(Some(6));
    ensure!(lambdas.len() == 7, "expected n = 0..6, got {lambdas:?}");

    let ball = ws.ball();
    let mut kl_count = 0;
    for w in 0..ball.len() as u32 {
        for (y, p) in ws.kl().row(w).iter() {
            ensure!(p.is_one(), "P({}, {}) = {p}", ball.word(*y), ball.word(w));
            kl_count += 1;
        }
    }
    let oracles = check(ws.verify_oracles())?;
    failures(&oracles)?;

    let dual = DualRootSystem::new(ws.system().clone());
    let mut main = 0;
    for lambda in &lambdas {
        for mu in below(&lambdas, lambda) {
            let (y, w) = (check(ws.d_index(mu))?, check(ws.d_index(lambda))?);
            ensure!(ball.bruhat_leq(y, w), "d_{mu:?} is not below d_{lambda:?}");
            failures(&[check(ws.verify_main(mu, lambda))?])?;
            main += 1;
        }
        failures(&[check(ws.verify_z(lambda))?])?;
        let n = lambda[0] as usize;
        let tz = check(ws.tilde_z(lambda))?.as_poly().unwrap();
        ensure!(tz == poly(&vec![1; 2 * n + 1]), "tilde Z({n}) = {tz}");
        ensure!(check(dual.signature(lambda))? == 1, "signature of {lambda:?}");
        let tzs = check(ws.tilde_z_sigma(lambda))?.as_poly().unwrap();
        ensure!(
            tzs.eval_unit(1) == 1.into(),
            "tilde Z^sigma({n})(1) = {}",
            tzs.eval_unit(1)
        );
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:.2?}");
    Ok(format!(
        "{kl_count} KL polynomials all 1, {} oracle records, {main} main pairs, {} coweights",
        oracles.len(),
        lambdas.len()
    ))
}

const AC2_SYSTEMS: [(&str, u32, u64); 3] = [("A2", 14, 300), ("C2", 14, 300), ("G2", 12, 900)];

fn ac2() -> Outcome {
    let mut summary = Vec::new();
    for (name, len, budget) in AC2_SYSTEMS {
        let start = Instant::now();
        let ws = workspace(name, len)?;
        let lambdas = ws.dominant_range(None);
        let mut records = Vec::new();
        for lambda in &lambdas {
            for mu in below(&lambdas, lambda) {
                let (y, w) = (check(ws.d_index(mu))?, check(ws.d_index(lambda))?);
                ensure!(ws.ball().bruhat_leq(y, w), "{name}: d_{mu:?} is not below d_{lambda:?}");
                records.push(check(ws.verify_main(mu, lambda))?);
            }
            records.push(check(ws.verify_z(lambda))?);
            records.extend(check(ws.verify_coset(lambda))?.records);
        }
        failures(&records)?;
        let elapsed = start.elapsed();
        ensure!(elapsed < Duration::from_secs(budget), "{name} took {elapsed:.2?}");
        summary.push(format!(
            "{name}: {} coweights, {} records, {elapsed:.1?}",
            lambdas.len(),
            records.len()
        ));
    }
    Ok(summary.join("; "))
}

fn ac3() -> Outcome {
    let mut total = 0;
    for (name, len, _) in AC2_SYSTEMS {
        let ws = workspace(name, len)?;
        let dual = DualRootSystem::new(ws.system().clone());
        for lambda in ws.dominant_range(None) {
            let records = check(ws.verify_weight_bridge(&lambda, &dual))?;
            failures(&records)?;
            total += records.len();
        }
    }

    let a2 = workspace("A2", 14)?;
    let dual = DualRootSystem::new(a2.system().clone());
    let theta = [1, 1];
    ensure!(check(dual.freudenthal(&theta))?.mult(&[0, 0]) == 2, "PGL3 adjoint m(0)");
    ensure!(check(dual.weyl_dim(&theta))? == 8, "PGL3 adjoint dimension");
    let tz = check(a2.tilde_z(&theta))?.as_poly().unwrap();
    ensure!(tz == poly(&[1, 2, 2, 2, 1]), "PGL3 adjoint tilde Z = {tz}");
    let tzs = check(a2.tilde_z_sigma(&theta))?.as_poly().unwrap();
    ensure!(tzs.eval_unit(1) == 0.into(), "PGL3 adjoint tilde Z^sigma = {tzs}");

    let a1 = workspace("A1", 13)?;
    let tz = check(a1.tilde_z(&[1]))?.as_poly().unwrap();
    ensure!(tz == poly(&[1, 1, 1]), "PGL2 adjoint tilde Z = {tz}");
    let dual1 = DualRootSystem::new(a1.system().clone());
    ensure!(check(dual1.signature(&[1]))? == 1, "PGL2 adjoint signature");
    Ok(format!("{total} bridge records, spot values match"))
}

fn ac4() -> Outcome {
    let mut total = 0;
    for (name, len) in [("A1", 13), ("A2", 14), ("C2", 14), ("G2", 12)] {
        let ws = workspace(name, len)?;
        let records = check(ws.verify_parabolic_lemmas())?;
        failures(&records)?;
        let n = ws.system().num_generators();
        let subsets = records
            .iter()
            .filter(|r| r.identity == "fixed-points-of-longest-conjugation")
            .count();
        ensure!(subsets == (1 << n) - 1, "{name}: {subsets} proper parabolics checked");
        for identity in [
            "longest-eigenspace-equals-odd-exponents",
            "degree-product-equals-order",
            "exponent-sum-equals-reflections",
        ] {
            let k = records.iter().filter(|r| r.identity == identity).count();
            ensure!(k == subsets, "{name}: {identity} checked {k} times");
        }
        total += records.len();
    }
    Ok(format!("{total} records over every proper parabolic"))
}

fn ac5() -> Outcome {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for (name, len) in [("A1", 13), ("A2", 14), ("C2", 14), ("G2", 12)] {
        let ws = workspace(name, len)?;
        let parity = check(ws.verify_phi_parity())?;
        failures(&parity)?;
        ensure!(
            parity.len() == ws.module().members().len(),
            "{name}: parity not checked everywhere"
        );
        *counts.entry("parity").or_default() += parity.len();
        for lambda in ws.dominant_range(None) {
            let report = check(ws.verify_coset(&lambda))?;
            for identity in ["phi-of-longest-element", "phi-of-minimal-element", "phi-additivity"] {
                let mine: Vec<_> = report
                    .records
                    .iter()
                    .filter(|r| r.identity == identity)
                    .cloned()
                    .collect();
                ensure!(!mine.is_empty(), "{name} {lambda:?}: no {identity} record");
                failures(&mine)?;
                *counts.entry(identity).or_default() += mine.len();
            }
        }
    }
    Ok(format!(
        "parity on {} twisted involutions, phi(d) {} cosets, phi(b) {} cosets, additivity {} elements",
        counts["parity"], counts["phi-of-longest-element"], counts["phi-of-minimal-element"], counts["phi-additivity"]
    ))
}

fn module_integrity(name: &str, len: u32) -> Result<usize, String> {
    let sys = system(name);
    // two extra layers so T_s applied twice stays inside the enumeration
    let ball = Arc::new(Ball::new(sys.clone(), len + 2));
    let module = check(TwistedModule::new(ball.clone(), Involution::star(&sys), len + 2))?;
    let mut checked = 0;
    for &w in module.members() {
        let l = ball.length(w);
        if l > len {
            continue;
        }
        let bar = check(module.bar_basis(w))?;
        let diag = &bar.coeff(w) * &LaurentPoly::monomial(1, i64::from(l));
        ensure!(
            diag.is_one(),
            "{name}: normalized diagonal of bar(a_{}) is {diag}",
            ball.word(w)
        );
        for (y, c) in bar.terms() {
            ensure!(
                y == w || (ball.length(y) < l && ball.bruhat_leq(y, w)),
                "{name}: bar(a_{}) has a term at {}",
                ball.word(w),
                ball.word(y)
            );
            ensure!(c.terms().all(|(_, k)| *k != 0.into()), "{name}: malformed coefficient");
        }
        let mut twice = check(module.bar(&bar))?;
        twice.add_scaled(&MElement::basis(w), &-LaurentPoly::one());
        ensure!(twice.is_zero(), "{name}: bar is not an involution at {}", ball.word(w));
        for s in 0..sys.num_generators() {
            let defect = check(module.quadratic_defect(s, w))?;
            ensure!(defect.is_zero(), "{name}: (T_{s}+1)(T_{s}-q^2) a_{} != 0", ball.word(w));
        }
        checked += 1;
    }
    Ok(checked)
}

fn ac6() -> Outcome {
    let a1 = module_integrity("A1", 12)?;
    let a2 = module_integrity("A2", 10)?;
    Ok(format!("A1: {a1} basis vectors to length 12, A2: {a2} to length 10"))
}

fn diamond(name: &str, len: u32) -> Result<(usize, usize), String> {
    let ws = check(Workspace::new(system(name), InvolutionId::Diamond(1), len))?;
    check(ws.fill())?;
    let records = check(ws.verify_diamond())?;
    failures(&records)?;
    let cosets = records
        .iter()
        .filter(|r| r.identity == "coset-stable-under-twisted-inverse")
        .count();
    let members = records
        .iter()
        .filter(|r| r.identity == "longest-is-twisted-involution")
        .count();
    let pairs = records
        .iter()
        .filter(|r| r.identity == "sigma-equals-kl-at-minus-q")
        .count();
    ensure!(
        cosets > 1 && members == cosets,
        "{name}: {cosets} cosets, {members} membership records"
    );
    ensure!(pairs >= cosets, "{name}: only {pairs} extreme pairs");
    Ok((cosets, pairs))
}

fn ac7() -> Outcome {
    let (c2, p2) = diamond("A2", 12)?;
    let (c1, p1) = diamond("A1", 12)?;
    Ok(format!("A2: {c2} cosets, {p2} pairs; A1: {c1} cosets, {p1} pairs"))
}

fn ac8() -> Outcome {
    let ball = Arc::new(Ball::new(system("A2"), 10));
    let primary = KlTable::new(ball.clone());
    let oracle = KlOracle::new(ball.clone());
    let mut pairs = 0;
    for w in 0..ball.len() as u32 {
        let other = check(oracle.kl_row(w))?;
        for y in 0..ball.len() as u32 {
            if ball.bruhat_leq(y, w) {
                let a = check(primary.kl_poly(y, w))?;
                let b = other.get(&y).cloned().unwrap_or_default();
                ensure!(a == b, "P({}, {}): {a} vs {b}", ball.word(y), ball.word(w));
                pairs += 1;
            } else {
                ensure!(primary.kl_poly(y, w).is_err(), "primary has a value off the interval");
                ensure!(
                    other.get(&y).is_none_or(|p| p.is_zero()),
                    "oracle has a value at {} outside [e, {}]",
                    ball.word(y),
                    ball.word(w)
                );
            }
        }
    }
    Ok(format!("{pairs} comparable pairs agree over {} elements", ball.len()))
}

fn affkl(args: &[&str], envs: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_affkl"));
    cmd.args(args).env_remove("AFFKL_CACHE").env("RUST_LOG", "error");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn ac9() -> Outcome {
    let dir = check(tempfile::tempdir())?;

    // in-process round trip on a full AC2 workspace
    let ws = workspace("A2", 14)?;
    let path = dir.path().join("a2.jsonl");
    check(cache_save(&path, &ws))?;
    let fresh = check(Workspace::new(system("A2"), InvolutionId::Star, 14))?;
    let loaded = check(cache_load(&path, &fresh))?;
    ensure!(matches!(loaded, CacheLoad::Loaded { .. }), "cache load gave {loaded:?}");
    let rows = |w: &Workspace| (w.kl().cached_rows(), w.module().cached_rows());
    ensure!(rows(&ws) == rows(&fresh), "tables differ after the round trip");
    let again = dir.path().join("a2-again.jsonl");
    check(cache_save(&again, &fresh))?;
    ensure!(
        check(std::fs::read(&path))? == check(std::fs::read(&again))?,
        "re-saved cache is not byte-identical"
    );

    // the same through the binary: cold, warm and with different pool sizes
    let base = ["verify", "--type", "A", "--rank", "2", "--max-len", "14"];
    let cache = dir.path().join("cli.jsonl");
    let with = |extra: &[&'static str]| -> Vec<&'static str> { [&base[..], extra].concat() };
    let cold = affkl(&with(&["--jobs", "1"]), &[("AFFKL_CACHE", &cache)]);
    ensure!(cold.status.code() == Some(0), "cold run exited {:?}", cold.status);
    let warm = affkl(&with(&["--jobs", "4"]), &[("AFFKL_CACHE", &cache)]);
    ensure!(warm.status.code() == Some(0), "warm run exited {:?}", warm.status);
    ensure!(cold.stdout == warm.stdout, "cache warm start changed the output");
    let plain = affkl(&with(&["--jobs", "4", "--format", "csv"]), &[]);
    let single = affkl(&with(&["--jobs", "1", "--format", "csv"]), &[]);
    ensure!(
        plain.stdout == single.stdout && !plain.stdout.is_empty(),
        "--jobs changes the CSV output"
    );

    let expect = |args: &[&str], code: i32| -> Result<(), String> {
        let out = affkl(args, &[]);
        ensure!(
            out.status.code() == Some(code),
            "{args:?} exited {:?}, expected {code}",
            out.status
        );
        Ok(())
    };
    expect(
        &[
            "verify",
            "--type",
            "A",
            "--rank",
            "1",
            "--max-len",
            "12",
            "--max-height",
            "6",
            "--checks",
            "main,z",
        ],
        0,
    )?;
    expect(
        &["verify", "--type", "C", "--rank", "2", "--involution", "diamond:1"],
        2,
    )?;
    expect(
        &[
            "verify",
            "--type",
            "A",
            "--rank",
            "2",
            "--involution",
            "diamond:1",
            "--checks",
            "main",
        ],
        2,
    )?;
    expect(&["verify", "--type", "Q", "--rank", "2"], 2)?;
    expect(&["verify", "--type", "A", "--rank", "2", "--max-len", "0"], 2)?;
    expect(&["verify", "--rank", "2"], 2)?;
    expect(
        &[
            "table",
            "z",
            "--type",
            "A",
            "--rank",
            "2",
            "--max-len",
            "6",
            "--lambda",
            "5,5",
        ],
        1,
    )?;
    Ok("cache lossless and byte-stable, --jobs 1/4 identical, exit codes 0/1/2".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1", ac1),
        ("AC2", ac2),
        ("AC3", ac3),
        ("AC4", ac4),
        ("AC5", ac5),
        ("AC6", ac6),
        ("AC7", ac7),
        ("AC8", ac8),
        ("AC9", ac9),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("{name} PASS ({secs:.2}s) {detail}"),
            Err(why) => {
                failed += 1;
                println!("{name} FAIL ({secs:.2}s) {why}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
