//! End-to-end acceptance run. Each criterion prints one PASS/FAIL line with
//! its runtime against the budget; the test fails if any criterion fails.
//!
//! Run with `cargo test -p weilkit --release --test acceptance -- --nocapture`.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weilkit::cahiers::{eval_j, DObject};
use weilkit::harness::{self, Config, ASSOC_ALGEBRAS};
use weilkit::report::CheckReport;
use weilkit::poly::{Monomial, Polynomial};
use weilkit::prolong::{parse_expr, taylor_lift, FragmentSpace, SmoothMap};
use weilkit::weil::{tensor, WeilAlgebra, WeilElement};
use weilkit::{Tolerance, Q};

type Outcome = Result<String, String>;

fn config(suite: &str, cases: usize) -> Config {
    Config { suites: vec![suite.to_string()], cases, seed: 2024, ..Config::default() }
}

fn all_checks(suite: &str, cases: usize) -> Result<Vec<CheckReport>, String> {
    let cfg = config(suite, cases);
    let checks = harness::checks(&cfg, suite).map_err(|e| e.to_string())?;
    Ok(checks.iter().map(|c| c.run(cfg.seed)).collect())
}

fn no_failures(reports: &[CheckReport]) -> Result<usize, String> {
    for r in reports {
        if let Some(w) = r.witnesses.first() {
            return Err(format!("{}: {} (case seed {})", r.name, w.message, w.case_seed));
        }
    }
    Ok(reports.iter().map(|r| r.cases - r.skipped).sum())
}

// ---------------------------------------------------------------------------
// Truncated Taylor arithmetic, written out here so derivative values do not
// come from the library under test.

const ORDER: usize = 4;

#[derive(Clone, Copy, Debug)]
struct T([f64; ORDER + 1]);

impl T {
    fn var(a: f64) -> T {
        let mut c = [0.0; ORDER + 1];
        c[0] = a;
        c[1] = 1.0;
        T(c)
    }
    fn c(v: f64) -> T {
        let mut c = [0.0; ORDER + 1];
        c[0] = v;
        T(c)
    }
    fn add(self, o: T) -> T {
        T(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }
    fn sub(self, o: T) -> T {
        T(std::array::from_fn(|k| self.0[k] - o.0[k]))
    }
    fn mul(self, o: T) -> T {
        T(std::array::from_fn(|k| (0..=k).map(|j| self.0[j] * o.0[k - j]).sum()))
    }
    fn sc(self, s: f64) -> T {
        T(self.0.map(|x| x * s))
    }
    fn div(self, o: T) -> T {
        let mut q = [0.0; ORDER + 1];
        for k in 0..=ORDER {
            let s: f64 = (1..=k).map(|j| o.0[j] * q[k - j]).sum();
            q[k] = (self.0[k] - s) / o.0[0];
        }
        T(q)
    }
    fn powi(self, n: i32) -> T {
        let mut r = T::c(1.0);
        for _ in 0..n.unsigned_abs() {
            r = r.mul(self);
        }
        if n < 0 {
            T::c(1.0).div(r)
        } else {
            r
        }
    }
    fn exp(self) -> T {
        let mut e = [0.0; ORDER + 1];
        e[0] = self.0[0].exp();
        for k in 1..=ORDER {
            e[k] = (1..=k).map(|j| j as f64 * self.0[j] * e[k - j]).sum::<f64>() / k as f64;
        }
        T(e)
    }
    fn ln(self) -> T {
        let mut l = [0.0; ORDER + 1];
        l[0] = self.0[0].ln();
        for k in 1..=ORDER {
            let s: f64 = (1..k).map(|j| j as f64 * l[j] * self.0[k - j]).sum::<f64>() / k as f64;
            l[k] = (self.0[k] - s) / self.0[0];
        }
        T(l)
    }
    fn sin_cos(self) -> (T, T) {
        let (mut s, mut c) = ([0.0; ORDER + 1], [0.0; ORDER + 1]);
        s[0] = self.0[0].sin();
        c[0] = self.0[0].cos();
        for k in 1..=ORDER {
            let kf = k as f64;
            s[k] = (1..=k).map(|j| j as f64 * self.0[j] * c[k - j]).sum::<f64>() / kf;
            c[k] = -(1..=k).map(|j| j as f64 * self.0[j] * s[k - j]).sum::<f64>() / kf;
        }
        (T(s), T(c))
    }
    fn sin(self) -> T {
        self.sin_cos().0
    }
    fn cos(self) -> T {
        self.sin_cos().1
    }
    /// Real power of a positive series.
    fn powf(self, p: f64) -> T {
        let mut r = [0.0; ORDER + 1];
        r[0] = self.0[0].powf(p);
        for k in 1..=ORDER {
            let s: f64 = (1..=k).map(|j| ((p + 1.0) * j as f64 - k as f64) * self.0[j] * r[k - j]).sum();
            r[k] = s / (k as f64 * self.0[0]);
        }
        T(r)
    }
    fn sqrt(self) -> T {
        self.powf(0.5)
    }
}

type Oracle = fn(T) -> T;

fn oracles() -> Vec<(&'static str, Oracle)> {
    vec![
        ("t", |t| t),
        ("t^2", |t| t.mul(t)),
        ("3*t^3 - 2*t + 7", |t| t.powi(3).sc(3.0).sub(t.sc(2.0)).add(T::c(7.0))),
        ("t^5 - t^4 + t^2/2", |t| t.powi(5).sub(t.powi(4)).add(t.powi(2).sc(0.5))),
        ("(t + 1)^6", |t| t.add(T::c(1.0)).powi(6)),
        ("t^(-1)", |t| t.powi(-1)),
        ("1/(1 + t^2)", |t| T::c(1.0).div(T::c(1.0).add(t.mul(t)))),
        ("(t - 1)/(t + 2)", |t| t.sub(T::c(1.0)).div(t.add(T::c(2.0)))),
        ("t^3/(t^2 + 4)", |t| t.powi(3).div(t.powi(2).add(T::c(4.0)))),
        ("(2*t + 1)^(-2)", |t| t.sc(2.0).add(T::c(1.0)).powi(-2)),
        ("sin(t)", |t| t.sin()),
        ("cos(t)", |t| t.cos()),
        ("exp(t)", |t| t.exp()),
        ("log(t)", |t| t.ln()),
        ("sqrt(t)", |t| t.sqrt()),
        ("sin(t^2)", |t| t.mul(t).sin()),
        ("cos(3*t + 1)", |t| t.sc(3.0).add(T::c(1.0)).cos()),
        ("exp(sin(t))", |t| t.sin().exp()),
        ("log(1 + t^2)", |t| T::c(1.0).add(t.mul(t)).ln()),
        ("sqrt(1 + t^2)", |t| T::c(1.0).add(t.mul(t)).sqrt()),
        ("sin(t)*cos(t)", |t| t.sin().mul(t.cos())),
        ("t*exp(-t)", |t| t.mul(t.sc(-1.0).exp())),
        ("exp(t)/(1 + exp(t))", |t| t.exp().div(T::c(1.0).add(t.exp()))),
        ("log(sqrt(t) + 1)", |t| t.sqrt().add(T::c(1.0)).ln()),
        ("sin(exp(t))", |t| t.exp().sin()),
        ("exp(-t^2/2)", |t| t.mul(t).sc(-0.5).exp()),
        ("t^2*log(t)", |t| t.mul(t).mul(t.ln())),
        ("sqrt(exp(t) + t^2)", |t| t.exp().add(t.mul(t)).sqrt()),
        ("cos(t)^3 - sin(t)^2", |t| t.cos().powi(3).sub(t.sin().powi(2))),
        ("sin(t)/(2 + cos(t))", |t| t.sin().div(T::c(2.0).add(t.cos()))),
        ("log(cos(t) + 2)", |t| t.cos().add(T::c(2.0)).ln()),
        ("exp(t)*sin(2*t) + t", |t| t.exp().mul(t.sc(2.0).sin()).add(t)),
        ("1/sqrt(1 + t)", |t| T::c(1.0).div(T::c(1.0).add(t).sqrt())),
        ("(sin(t) + 2)^(-1)", |t| t.sin().add(T::c(2.0)).powi(-1)),
    ]
}

fn lift_jet(src: &str, order: u32, a: f64) -> Result<Vec<f64>, String> {
    let e = parse_expr(src).map_err(|e| e.to_string())?;
    let w = WeilAlgebra::jet(order);
    let mut coords = vec![0.0; order as usize + 1];
    coords[0] = a;
    coords[1] = 1.0;
    let p = WeilElement::from_coords(&w, coords).map_err(|e| e.to_string())?;
    let f = SmoothMap::scalar(1, e).map_err(|e| e.to_string())?;
    Ok(taylor_lift(&f, &w, &[p]).map_err(|e| e.to_string())?.remove(0).coords().to_vec())
}

fn derivatives() -> Outcome {
    let symbolic = Tolerance { rel: 1e-12, abs: 1e-12 };
    let finite = Tolerance { rel: 1e-6, abs: 1e-9 };
    let jets = Tolerance { rel: 1e-9, abs: 1e-12 };
    let h = 1e-5;
    let table = oracles();
    if table.len() < 30 {
        return Err(format!("only {} expressions", table.len()));
    }
    let points: HashMap<&str, &[f64]> = harness::DERIVATIVE_CORPUS.iter().map(|(s, p)| (*s, *p)).collect();
    let mut evaluated = 0;
    for (src, oracle) in &table {
        let pts = points.get(src).ok_or_else(|| format!("`{src}` missing from the corpus"))?;
        for &a in pts.iter() {
            let want = oracle(T::var(a)).0;
            let dual = lift_jet(src, 1, a)?;
            let bad = |what: &str, got: f64, w: f64| format!("{src} at {a}: {what} {got} vs {w}");
            if !symbolic.close(dual[0], want[0]) || !symbolic.close(dual[1], want[1]) {
                return Err(bad("dual lift", dual[1], want[1]));
            }
            // central difference of the lifted value part
            let fd = (lift_jet(src, 1, a + h)?[0] - lift_jet(src, 1, a - h)?[0]) / (2.0 * h);
            if !finite.close(dual[1], fd) {
                return Err(bad("finite difference", fd, dual[1]));
            }
            let jet = lift_jet(src, ORDER as u32, a)?;
            for k in 0..=ORDER {
                if !jets.close(jet[k], want[k]) {
                    return Err(bad(&format!("jet coefficient {k}"), jet[k], want[k]));
                }
            }
            evaluated += 1;
        }
    }
    let suite = no_failures(&all_checks("derivatives", 200)?)?;
    Ok(format!("{} expressions, {evaluated} base points, {suite} suite cases", table.len()))
}

// ---------------------------------------------------------------------------
// Ring laws against a table product computed from standard monomials.

fn mono(e: &[u32]) -> Polynomial {
    Polynomial::from_terms(e.len(), vec![(Monomial::new(e.to_vec()), Q::from_integer(1.into()))])
}

fn monomial_algebra(names: &[&str], gens: &[&[u32]], k: u32) -> Arc<WeilAlgebra> {
    WeilAlgebra::new(names.iter().map(|s| s.to_string()).collect(), gens.iter().map(|g| mono(g)).collect(), k)
        .expect("valid monomial algebra")
}

/// Standard monomials: degree below `k`, divisible by no generator.
fn standard_monomials(n: usize, gens: &[&[u32]], k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut e = vec![0u32; n];
    loop {
        let deg: u32 = e.iter().sum();
        let divisible = gens.iter().any(|g| g.iter().zip(&e).all(|(gi, ei)| ei >= gi));
        if deg < k && !divisible {
            out.push(e.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            e[i] += 1;
            if e[i] < k {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

struct Table {
    algebra: Arc<WeilAlgebra>,
    /// Library basis index of each standard monomial.
    index: HashMap<Vec<u32>, usize>,
}

impl Table {
    fn new(names: &[&str], gens: &[&[u32]], k: u32) -> Result<Table, String> {
        let algebra = monomial_algebra(names, gens, k);
        let std = standard_monomials(names.len(), gens, k);
        if std.len() != algebra.dimension() {
            return Err(format!("{names:?}: dimension {} but {} standard monomials", algebra.dimension(), std.len()));
        }
        let mut index = HashMap::new();
        for m in std {
            let i = algebra
                .index_of(&Monomial::new(m.clone()))
                .ok_or_else(|| format!("{m:?} is not a library basis monomial"))?;
            index.insert(m, i);
        }
        Ok(Table { algebra, index })
    }

    fn product(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::from_integer(0.into()); a.len()];
        for (ma, &ia) in &self.index {
            for (mb, &ib) in &self.index {
                let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                if let Some(&i) = self.index.get(&m) {
                    out[i] += &a[ia] * &b[ib];
                }
            }
        }
        out
    }
}

fn random_coords(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    (0..n).map(|_| Q::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=6).into())).collect()
}

fn ring_laws() -> Outcome {
    let tables = vec![
        Table::new(&[], &[], 1)?,
        Table::new(&["x"], &[&[2]], 2)?,
        Table::new(&["t"], &[&[3]], 3)?,
        Table::new(&["t"], &[&[4]], 4)?,
        Table::new(&["t"], &[&[6]], 6)?,
        Table::new(&["x", "y"], &[], 2)?,
        Table::new(&["x", "y"], &[&[2, 0], &[0, 3]], 5)?,
        Table::new(&["x", "y"], &[&[3, 0], &[1, 1]], 4)?,
        Table::new(&["x", "y"], &[&[1, 2], &[3, 0], &[0, 4]], 6)?,
        Table::new(&["x", "y", "z"], &[&[2, 0, 0], &[0, 2, 0], &[0, 0, 2]], 4)?,
        Table::new(&["x", "y", "z"], &[], 3)?,
    ];
    let triples = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for t in &tables {
        let w = &t.algebra;
        for _ in 0..triples {
            let [a, b, c] = [0, 1, 2].map(|_| random_coords(&mut rng, w.dimension()));
            let el = |v: &Vec<Q>| WeilElement::from_coords(w, v.clone()).unwrap();
            let (ea, eb, ec) = (el(&a), el(&b), el(&c));
            let ab = ea.mul(&eb).map_err(|e| e.to_string())?;
            if ab.coords() != t.product(&a, &b).as_slice() {
                return Err(format!("product disagrees with the table in {:?}", w.names()));
            }
            let lhs = ab.mul(&ec).unwrap();
            let rhs = ea.mul(&eb.mul(&ec).unwrap()).unwrap();
            let dist = ea.mul(&eb.add(&ec).unwrap()).unwrap() == ab.add(&ea.mul(&ec).unwrap()).unwrap();
            if lhs != rhs || !dist || ab != eb.mul(&ea).unwrap() {
                return Err(format!("ring law fails in {:?}", w.names()));
            }
        }
    }
    let suite = no_failures(&all_checks("ring_laws", 200)?)?;
    Ok(format!("{} algebras x {triples} triples against tables, {suite} suite cases", tables.len()))
}

// ---------------------------------------------------------------------------

fn associativity() -> Outcome {
    let reports = all_checks("assoc", 200)?;
    let mut pairs = 0;
    for a in ASSOC_ALGEBRAS {
        for b in ASSOC_ALGEBRAS {
            let prefix = format!("assoc/{a}*{b}/");
            let lift = reports
                .iter()
                .find(|r| r.name == format!("{prefix}lift"))
                .ok_or_else(|| format!("no lift check for {a}*{b}"))?;
            if lift.cases < 20 {
                return Err(format!("{a}*{b}: only {} expressions lifted", lift.cases));
            }
            // independent: (s + x + y)^2 = s^2 + 2s(x + y) + x^2 + y^2 + 2xy
            let (wa, wb) = (WeilAlgebra::preset(a).unwrap(), WeilAlgebra::preset(b).unwrap());
            let t = tensor(&wa, &wb).algebra;
            if t.dimension() != wa.dimension() * wb.dimension() {
                return Err(format!("{a}*{b}: tensor dimension {}", t.dimension()));
            }
            let (x, y) = (WeilElement::<Q>::variable(&t, 0), WeilElement::variable(&t, wa.nvars()));
            let s = WeilElement::constant(&t, Q::new(3.into(), 2.into()));
            let p = s.add(&x).unwrap().add(&y).unwrap();
            let f = SmoothMap::scalar(1, parse_expr("t^2").unwrap()).unwrap();
            let got = taylor_lift(&f, &t, &[p]).unwrap().remove(0);
            let two = Q::from_integer(2.into());
            let sq = |e: &WeilElement<Q>| e.mul(e).unwrap();
            let want = [sq(&s), x.add(&y).unwrap().scale(&(&two * &s.coords()[0])), sq(&x), sq(&y), x.mul(&y).unwrap().scale(&two)]
                .iter()
                .fold(WeilElement::zero(&t), |acc, e| acc.add(e).unwrap());
            if got != want {
                return Err(format!("{a}*{b}: lift of t^2 is {got}"));
            }
            pairs += 1;
        }
    }
    let cases = no_failures(&reports)?;
    Ok(format!("{pairs} ordered pairs, {cases} cases"))
}

fn at_least(suite: &str, min: usize) -> Outcome {
    let reports = all_checks(suite, 200)?;
    let cases = no_failures(&reports)?;
    for r in &reports {
        if r.cases > 1 && r.cases - r.skipped < min {
            return Err(format!("{}: only {} conclusive instances", r.name, r.cases - r.skipped));
        }
    }
    Ok(format!("{} checks, {cases} instances", reports.len()))
}

fn products() -> Outcome {
    at_least("products", 200)
}

fn bifunctor() -> Outcome {
    at_least("bifunctor", 200)
}

fn fragments() -> Outcome {
    let reports = all_checks("fragments", 200)?;
    let curry = reports.iter().filter(|r| r.name.starts_with("fragments/currying/")).count();
    let prods = reports.iter().filter(|r| r.name.starts_with("fragments/products/")).count();
    if curry == 0 || prods == 0 {
        return Err(format!("{curry} currying and {prods} product checks"));
    }
    let cases = no_failures(&reports)?;
    // eval_j dimension against a direct count
    let mut sizes = 0;
    for name in ["real", "dual", "jet2", "d2"] {
        let w = WeilAlgebra::preset(name).unwrap();
        for n in 0..=2usize {
            for p in 1..=2usize {
                for d in 0..=3u32 {
                    let j = eval_j(&FragmentSpace::Euclidean(p), &DObject::new(n, &w), d).map_err(|e| e.to_string())?;
                    let count = (0..(d + 1).pow(n as u32))
                        .filter(|i| (0..n).map(|v| i / (d + 1).pow(v as u32) % (d + 1)).sum::<u32>() <= d)
                        .count();
                    if j.dimension() != p * count * w.dimension() {
                        return Err(format!("eval_j dimension {} for {name}, n={n}, p={p}, d={d}", j.dimension()));
                    }
                    sizes += 1;
                }
            }
        }
    }
    Ok(format!("{curry} currying grids, {prods} product grids, {cases} cases, {sizes} carrier sizes"))
}

fn probe() -> Outcome {
    let cfg = config("conjecture_probe", 200);
    let report = harness::run_one(&cfg, "conjecture_probe").map_err(|e| e.to_string())?;
    if report.cases < 100 {
        return Err(format!("only {} probe cases", report.cases));
    }
    match report.outcome.as_deref() {
        Some("evidence-for") => Ok(format!(
            "evidence-for over {} cases ({} inconclusive at the degree bound)",
            report.cases, report.skipped
        )),
        Some("counterexample") => {
            let w = &report.witnesses[0];
            let again = harness::replay(&cfg, &w.check, w.case_seed).map_err(|e| e.to_string())?;
            if again.failures == 1 && again.witnesses[0].message == w.message {
                Ok(format!("counterexample, replays from case seed {}", w.case_seed))
            } else {
                Err("counterexample does not replay".into())
            }
        }
        other => Err(format!("unexpected outcome {other:?}")),
    }
}

fn determinism() -> Outcome {
    let cfg = Config { cases: 40, seed: 77, ..Config::default() };
    let a = harness::run_suite(&cfg).map_err(|e| e.to_string())?.to_json();
    let b = harness::run_suite(&cfg).map_err(|e| e.to_string())?.to_json();
    if a != b {
        return Err("reports differ".into());
    }
    let other = harness::run_suite(&Config { seed: 78, ..cfg }).map_err(|e| e.to_string())?.to_json();
    if other == a {
        return Err("a different seed gives the same report".into());
    }
    Ok(format!("{} byte report reproduced", a.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("derivatives", derivatives, 5),
        ("ring_laws", ring_laws, 10),
        ("associativity", associativity, 10),
        ("products", products, 10),
        ("bifunctor", bifunctor, 10),
        ("fragments", fragments, 30),
        ("conjecture_probe", probe, 30),
        ("determinism", determinism, 60),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*budget);
        let (status, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget}s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        println!("{status} {} {name} ({:.2}s / {budget}s): {detail}", i + 1, took.as_secs_f64());
        if status == "FAIL" {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
