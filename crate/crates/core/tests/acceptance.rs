//! Acceptance suites. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use banach::bohr::{folner_bohr_check, spectral_hints, BohrSpec};
use banach::density::{banach_density_est, best_shift, exact_density};
use banach::folner::{bound_as_int, greedy_disjoint_shifts, verify_cc_cover};
use banach::jin::{jin_experiment, JinOptions};
use banach::lattice::{banach_density_est_d, diff_set_d, pws_certificate_d, GridBox, LatticeSet};
use banach::real::{Real, Q};
use banach::setmodel::{materialize, parse, ExactSet, SetSpec, Window};
use banach::structure::{min_gap_bound, pws_certificate};

/// A certificate plus the `check` arguments that identify its inputs.
struct Emitted {
    label: String,
    json: String,
    args: Vec<String>,
}

impl Emitted {
    fn new(label: impl Into<String>, json: String, args: &[&str]) -> Self {
        Emitted { label: label.into(), json, args: args.iter().map(|s| s.to_string()).collect() }
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn win(lo: i64, hi: i64) -> Window {
    Window::new(lo, hi).unwrap()
}

fn residues(rng: &mut ChaCha8Rng, p: i64) -> Vec<i64> {
    let k = rng.gen_range(1..=p.min(6));
    (0..k).map(|_| rng.gen_range(0..p)).collect()
}

fn divisor(rng: &mut ChaCha8Rng, p: i64) -> i64 {
    let ds: Vec<i64> = (1..=p).filter(|d| p % d == 0).collect();
    ds[rng.gen_range(0..ds.len())]
}

/// Periodic-class specs whose period divides some `P ≤ max_period`.
fn periodic_class(rng: &mut ChaCha8Rng, max_period: i64) -> SetSpec {
    let p = rng.gen_range(1..=max_period);
    let base = |rng: &mut ChaCha8Rng, q: i64| SetSpec::periodic(q, residues(rng, q)).unwrap();
    match rng.gen_range(0..10) {
        0..=4 => base(rng, p),
        5 | 6 => {
            let (d1, d2) = (divisor(rng, p), divisor(rng, p));
            SetSpec::union(base(rng, d1), base(rng, d2))
        }
        7 => {
            let mut r1 = residues(rng, p);
            let mut r2 = residues(rng, p);
            r1.push(r2[0]);
            r2.push(r1[0]);
            SetSpec::intersect(SetSpec::periodic(p, r1).unwrap(), SetSpec::periodic(p, r2).unwrap())
        }
        8 => SetSpec::shift(base(rng, p), rng.gen_range(-100..=100)),
        _ => SetSpec::ap(rng.gen_range(-50..=50), p).unwrap(),
    }
}

fn period(spec: &SetSpec) -> i64 {
    ExactSet::of(spec).expect("periodic class").period()
}

fn folner_bound(emitted: &mut Vec<Emitted>, specs: &[SetSpec]) -> Outcome {
    let mut failures = Vec::new();
    for c in specs {
        let p = period(c);
        let report = greedy_disjoint_shifts(c, win(0, p - 1)).unwrap();
        let d = exact_density(c).unwrap();
        let bound = (Q::from_integer(1) / d).floor().to_integer() as usize;
        let cover = verify_cc_cover(c, &report.shifts, win(-10 * p, 10 * p)).unwrap();
        if report.m > bound || bound_as_int(&report) != Some(bound) || !cover || !report.cover_verified {
            failures.push(c.to_string());
        }
        let spec = c.to_string();
        emitted.push(Emitted::new(format!("folner {spec}"), serde_json::to_string(&report).unwrap(), &["--spec", &spec]));
    }
    Outcome { pass: failures.is_empty(), detail: format!("{} specs, {} failures {:?}", specs.len(), failures.len(), failures) }
}

fn cc_syndetic(emitted: &mut Vec<Emitted>, specs: &[SetSpec]) -> Outcome {
    let mut failures = Vec::new();
    for c in specs {
        let p = period(c);
        let cc = SetSpec::diff(c.clone(), c.clone());
        let m = materialize(&cc, win(-5 * p, 5 * p)).unwrap();
        let k = min_gap_bound(&m).unwrap();
        if k > p as u64 {
            failures.push(c.to_string());
        }
        // Syndetic on the window, so the whole window is one covered interval.
        let cert = pws_certificate(&m, k, m.window().len()).unwrap().expect("full-window certificate");
        let spec = cc.to_string();
        emitted.push(Emitted::new(format!("cc {spec}"), serde_json::to_string(&cert).unwrap(), &["--spec", &spec]));
    }
    Outcome { pass: failures.is_empty(), detail: format!("{} specs, {} failures {:?}", specs.len(), failures.len(), failures) }
}

fn shift_lemma(rng: &mut ChaCha8Rng) -> Outcome {
    let mut failures = Vec::new();
    for _ in 0..100 {
        let pa = rng.gen_range(1..=20);
        let pb = rng.gen_range(1..=20);
        let a = SetSpec::periodic(pa, residues(rng, pa)).unwrap();
        let b = SetSpec::periodic(pb, residues(rng, pb)).unwrap();
        let l = num_integer::lcm(pa, pb);
        let w = best_shift(&a, &b, win(0, l - 1), win(0, 100 * l - 1)).unwrap();
        let target = exact_density(&a).unwrap() * exact_density(&b).unwrap();
        if w.value < target {
            failures.push(format!("{a} / {b}"));
        }
    }
    Outcome { pass: failures.is_empty(), detail: format!("100 pairs, {} failures {:?}", failures.len(), failures) }
}

fn bohr_text(freqs: &[Real], eps: Real, shift: i64) -> String {
    BohrSpec::new(freqs.to_vec(), eps, shift).map(SetSpec::Bohr).unwrap().to_string()
}

fn jin_pairs(rng: &mut ChaCha8Rng) -> Vec<(String, String)> {
    let irrational = [
        std::f64::consts::SQRT_2 - 1.0,
        (5f64.sqrt() - 1.0) / 2.0,
        std::f64::consts::PI - 3.0,
        std::f64::consts::E - 2.0,
        3f64.sqrt() - 1.0,
    ];
    let mut pairs = Vec::new();
    for i in 0..50 {
        let eps = |rng: &mut ChaCha8Rng| -> Real {
            if rng.gen_bool(0.5) {
                Real::ratio(rng.gen_range(5..=20), 100)
            } else {
                Real::Float(rng.gen_range(0.05..=0.2))
            }
        };
        let freq = |rng: &mut ChaCha8Rng| -> Real {
            if rng.gen_bool(0.5) {
                let q = rng.gen_range(2..=12);
                Real::ratio(rng.gen_range(1..q), q)
            } else {
                Real::Float(irrational[rng.gen_range(0..irrational.len())])
            }
        };
        let pair = match i % 3 {
            0 => {
                let pa = rng.gen_range(1..=30);
                let pb = rng.gen_range(1..=30);
                (
                    SetSpec::periodic(pa, residues(rng, pa)).unwrap().to_string(),
                    SetSpec::periodic(pb, residues(rng, pb)).unwrap().to_string(),
                )
            }
            1 => {
                let fa = freq(rng);
                let ea = eps(rng);
                let fb = freq(rng);
                let eb = eps(rng);
                (bohr_text(&[fa], ea, rng.gen_range(-50..=50)), bohr_text(&[fb], eb, 0))
            }
            _ => {
                let a = if rng.gen_bool(0.5) {
                    let f = freq(rng);
                    let e = eps(rng);
                    bohr_text(&[f], e, 0)
                } else {
                    let p = rng.gen_range(1..=30);
                    SetSpec::periodic(p, residues(rng, p)).unwrap().to_string()
                };
                let s = rng.gen_range(-1000..=1000);
                let b = format!("shift({a};{s})");
                (a, b)
            }
        };
        pairs.push(pair);
    }
    pairs
}

fn jin_suite(emitted: &mut Vec<Emitted>, pairs: &[(String, String)]) -> Outcome {
    let window = win(0, 99_999);
    let mut failures = Vec::new();
    let mut worst_k = 0;
    let mut probes = 0;
    for (i, (a, b)) in pairs.iter().enumerate() {
        let sa = parse(a).unwrap();
        let sb = parse(b).unwrap();
        let opts = JinOptions { probes: 8, seed: 1000 + i as u64, shift_radius: None };
        let report = jin_experiment(&sa, &sb, window, 20, 1000, &opts).unwrap();
        probes += report.probes.len();
        match &report.certificate {
            Some(c) if report.probes_succeeded() => worst_k = worst_k.max(c.k),
            _ => failures.push(format!("{a} / {b}")),
        }
        if report.certificate.is_some() {
            emitted.push(Emitted::new(
                format!("jin {a} / {b}"),
                serde_json::to_string(&report).unwrap(),
                &["--specA", a, "--specB", b],
            ));
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!("{} pairs, {probes} probes, max k {worst_k}, {} failures {:?}", pairs.len(), failures.len(), failures),
    }
}

/// `‖r·p/q‖ < a/b` in integers: `min(rp mod q, q − rp mod q) · b < a · q`.
fn rational_member(r: i64, freqs: &[(i64, i64)], eps: (i64, i64)) -> bool {
    freqs.iter().all(|&(p, q)| {
        let m = (r * p).rem_euclid(q);
        m.min(q - m) * eps.1 < eps.0 * q
    })
}

fn rational_collapse(rng: &mut ChaCha8Rng) -> Outcome {
    let window = win(-10_000, 10_000);
    let mut failures = Vec::new();
    for _ in 0..50 {
        let n = rng.gen_range(1..=3);
        let freqs: Vec<(i64, i64)> = (0..n)
            .map(|_| {
                let q = rng.gen_range(1..=30);
                (rng.gen_range(0..q), q)
            })
            .collect();
        let eps = (rng.gen_range(1..=50), 100);
        let shift = rng.gen_range(-40..=40);
        let spec = BohrSpec::new(
            freqs.iter().map(|&(p, q)| Real::ratio(p, q)).collect(),
            Real::ratio(eps.0, eps.1),
            shift,
        )
        .unwrap();
        let l = freqs.iter().fold(1, |acc, &(_, q)| num_integer::lcm(acc, q));
        let rs: Vec<i64> = (0..l).filter(|&r| rational_member(r, &freqs, eps)).map(|r| r + shift).collect();
        let periodic = materialize(&SetSpec::periodic(l, rs).unwrap(), window).unwrap();
        let bohr = materialize(&SetSpec::Bohr(spec.clone()), window).unwrap();
        if periodic != bohr {
            failures.push(SetSpec::Bohr(spec).to_string());
        }
    }
    Outcome { pass: failures.is_empty(), detail: format!("50 specs, {} mismatches {:?}", failures.len(), failures) }
}

fn folner_bohr() -> Outcome {
    let alphas = [
        Real::Float(std::f64::consts::SQRT_2 - 1.0),
        Real::Float((5f64.sqrt() - 1.0) / 2.0),
        Real::ratio(1, 3),
    ];
    let window = win(-100_000, 100_000);
    let mut failures = Vec::new();
    for alpha in alphas {
        for (eps, inner) in [(0.05, 0.045), (0.1, 0.09)] {
            let c = SetSpec::Bohr(BohrSpec::zero(vec![alpha], Real::Float(eps)).unwrap());
            let u = BohrSpec::zero(vec![alpha], Real::Float(inner)).unwrap();
            let out = folner_bohr_check(&c, &u, window, Q::zero()).unwrap();
            if !out.pass || !out.exceptional_density.is_zero() {
                failures.push(format!("{c}: {}", out.exceptional_density));
            }
        }
    }
    Outcome { pass: failures.is_empty(), detail: format!("6 cases, {} failures {:?}", failures.len(), failures) }
}

fn spectral() -> Outcome {
    let s = materialize(&parse("bohr(1/4;0.13)").unwrap(), win(0, 4095)).unwrap();
    let hints = spectral_hints(&s, 4096, 2).unwrap();
    let freqs: Vec<Q> = hints.iter().map(|h| h.frequency).collect();
    let pass = freqs == vec![Q::new(1, 4), Q::new(3, 4)] && (hints[0].magnitude - hints[1].magnitude).abs() <= 1e-9;
    let detail = hints
        .iter()
        .map(|h| format!("{} {:.12}", h.frequency, h.magnitude))
        .collect::<Vec<_>>()
        .join(", ");
    Outcome { pass, detail }
}

fn estimator_error(rng: &mut ChaCha8Rng) -> Outcome {
    let mut failures = Vec::new();
    for _ in 0..100 {
        let p = rng.gen_range(1..=50);
        let spec = SetSpec::periodic(p, residues(rng, p)).unwrap();
        let d = exact_density(&spec).unwrap();
        let m = materialize(&spec, win(-3 * p, 20 * p)).unwrap();
        for l in [p, 2 * p, 5 * p, 7 * p + 3] {
            let est = banach_density_est(&m, l as usize).unwrap().value;
            let err = if est > d { est - d } else { d - est };
            if err > Q::new(p, l) {
                failures.push(format!("{spec} L={l}"));
            }
        }
    }
    Outcome { pass: failures.is_empty(), detail: format!("100 specs x 4 lengths, {} failures {:?}", failures.len(), failures) }
}

fn random_real(rng: &mut ChaCha8Rng, max: f64, allow_zero: bool) -> Real {
    loop {
        let r = if rng.gen_bool(0.5) {
            let q = rng.gen_range(1..=1000);
            Real::ratio(rng.gen_range(0..=q), q)
        } else {
            Real::Float(rng.gen_range(0.0..=max))
        };
        let x = r.to_f64();
        if x <= max && (allow_zero || x > 0.0) {
            return r;
        }
    }
}

fn random_ast(rng: &mut ChaCha8Rng, depth: u32) -> SetSpec {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        match rng.gen_range(0..5) {
            0 => {
                let p = rng.gen_range(1..=60);
                SetSpec::periodic(p, (0..rng.gen_range(1..5)).map(|_| rng.gen_range(-100..100))).unwrap()
            }
            1 => SetSpec::ap(rng.gen_range(-1000..1000), rng.gen_range(1..100)).unwrap(),
            2 => {
                let freqs: Vec<Real> = (0..rng.gen_range(1..4))
                    .map(|_| loop {
                        let f = random_real(rng, 1.0, true);
                        if f.to_f64() < 1.0 {
                            break f;
                        }
                    })
                    .collect();
                let eps = random_real(rng, 0.5, false);
                SetSpec::Bohr(BohrSpec::new(freqs, eps, rng.gen_range(-500..500)).unwrap())
            }
            3 => SetSpec::random(random_real(rng, 1.0, true), rng.gen()).unwrap(),
            _ => SetSpec::explicit((0..rng.gen_range(1..6)).map(|_| rng.gen_range(-10_000..10_000))).unwrap(),
        }
    } else {
        let a = random_ast(rng, depth - 1);
        match rng.gen_range(0..4) {
            0 => SetSpec::union(a, random_ast(rng, depth - 1)),
            1 => SetSpec::intersect(a, random_ast(rng, depth - 1)),
            2 => SetSpec::shift(a, rng.gen_range(-1_000_000..1_000_000)),
            _ => SetSpec::diff(a, random_ast(rng, depth - 1)),
        }
    }
}

fn round_trip(rng: &mut ChaCha8Rng) -> Outcome {
    let mut failures = Vec::new();
    for _ in 0..1000 {
        let s = random_ast(rng, 4);
        let text = s.to_string();
        match parse(&text) {
            Ok(t) if t == s => {}
            _ => failures.push(text),
        }
    }
    Outcome { pass: failures.is_empty(), detail: format!("1000 ASTs, {} failures {:?}", failures.len(), failures) }
}

fn product(specs: &[&str], bbox: &str) -> LatticeSet {
    let specs: Vec<SetSpec> = specs.iter().map(|s| parse(s).unwrap()).collect();
    LatticeSet::product(&specs, bbox.parse().unwrap()).unwrap()
}

fn lattice_suite(emitted: &mut Vec<Emitted>, rng: &mut ChaCha8Rng) -> Outcome {
    let mut failures: Vec<String> = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };

    let s = product(&["periodic(2;0)", "periodic(1;0)"], "0:9,0:9");
    check(banach_density_est_d(&s, 2).unwrap().value == Q::new(1, 2), "(2Z)xZ density");
    let full = LatticeSet::from_fn("0:9,0:9".parse().unwrap(), |_| true);
    check(banach_density_est_d(&full, 5).unwrap().value == Q::from_integer(1), "full density");
    let s = product(&["periodic(2;0)", "periodic(3;0)"], "0:29,0:29");
    check(banach_density_est_d(&s, 6).unwrap().value == Q::new(1, 6), "(2Z)x(3Z) density");

    let o = LatticeSet::from_points("0:0,0:0".parse().unwrap(), [&[0, 0][..]]).unwrap();
    check(diff_set_d(&o, &o).unwrap().members().collect::<Vec<_>>() == vec![vec![0, 0]], "origin diff");
    let l = product(&["periodic(2;0)", "periodic(3;0)"], "0:11,0:11");
    let d = diff_set_d(&l, &l).unwrap();
    check(
        d.bbox().points().all(|p| d.contains(&p).unwrap() == (p[0] % 2 == 0 && p[1] % 3 == 0)),
        "lattice diff closure",
    );
    let b = LatticeSet::from_points("1:1,2:2".parse().unwrap(), [&[1, 2][..]]).unwrap();
    check(diff_set_d(&o, &b).unwrap().members().collect::<Vec<_>>() == vec![vec![-1, -2]], "point diff");

    let c = pws_certificate_d(&full, 3, 10).unwrap();
    check(c.as_ref().is_some_and(|c| c.k == 0 && c.intervals == vec![full.bbox().clone()]), "full box certificate");
    let s = product(&["periodic(2;0)", "periodic(2;0)"], "0:99,0:99");
    match pws_certificate_d(&s, 1, 50).unwrap() {
        Some(c) if c.k == 1 => emitted.push(Emitted::new(
            "lattice (2Z)^2",
            serde_json::to_string(&c).unwrap(),
            &["--spec", "periodic(2;0)", "--spec", "periodic(2;0)"],
        )),
        _ => check(false, "(2Z)^2 certificate"),
    }
    let squares = LatticeSet::from_fn("0:10000,0:10".parse().unwrap(), |p| {
        p[1] == 0 && ((p[0] as f64).sqrt().round() as i64).pow(2) == p[0]
    });
    check(pws_certificate_d(&squares, 3, 10).unwrap().is_none(), "squares NotFound");

    // Z^2 Jin pairs: periodic products with density >= 1/9 on a 300x300 box.
    let bbox: GridBox = "0:299,0:299".parse().unwrap();
    let mut worst = 0;
    for _ in 0..6 {
        let axis = |rng: &mut ChaCha8Rng| -> String {
            let p = rng.gen_range(1..=3);
            SetSpec::periodic(p, [rng.gen_range(0..p)]).unwrap().to_string()
        };
        let a = [axis(rng), axis(rng)];
        let b = [axis(rng), axis(rng)];
        let sa = product(&[&a[0], &a[1]], "0:299,0:299");
        let sb = product(&[&b[0], &b[1]], "0:299,0:299");
        let d = diff_set_d(&sa, &sb).unwrap();
        match pws_certificate_d(&d, 3, 100).unwrap() {
            Some(c) => {
                worst = worst.max(c.k);
                let bx = bbox.to_string();
                emitted.push(Emitted::new(
                    format!("lattice jin {a:?} / {b:?}"),
                    serde_json::to_string(&c).unwrap(),
                    &["--specA", &a[0], "--specA", &a[1], "--specB", &b[0], "--specB", &b[1], "--box", &bx],
                ));
            }
            None => check(false, &format!("Z^2 jin {a:?} / {b:?}")),
        }
    }
    Outcome { pass: failures.is_empty(), detail: format!("examples + 6 Z^2 Jin pairs (L_min 100, max k {worst}), failures {failures:?}") }
}

fn revalidate(emitted: &[Emitted], dir: &Path) -> Outcome {
    let bin = env!("CARGO_BIN_EXE_banach");
    let mut failures = Vec::new();
    for (i, e) in emitted.iter().enumerate() {
        let path = dir.join(format!("cert{i}.json"));
        std::fs::write(&path, &e.json).unwrap();
        let out = Command::new(bin).arg("check").arg("--cert").arg(&path).args(&e.args).output().unwrap();
        let stdout = String::from_utf8_lossy(&out.stdout);
        if !out.status.success() || stdout.trim() != r#"{"valid":true}"# {
            failures.push(format!("{}: {} {}", e.label, stdout.trim(), String::from_utf8_lossy(&out.stderr).trim()));
        }
    }
    Outcome { pass: failures.is_empty(), detail: format!("{} certificates, {} rejected {:?}", emitted.len(), failures.len(), failures) }
}

fn report(id: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed <= l);
    let pass = out.pass && in_time;
    let timing = match limit {
        Some(l) => format!("{:.2}s (limit {}s)", elapsed.as_secs_f64(), l.as_secs()),
        None => format!("{:.2}s", elapsed.as_secs_f64()),
    };
    println!("[{}] {id:>2} {name}: {}; {timing}", if pass { "PASS" } else { "FAIL" }, out.detail);
    pass
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_611);
    let specs: Vec<SetSpec> = (0..200).map(|_| periodic_class(&mut rng, 50)).collect();
    let pairs = jin_pairs(&mut rng);
    let mut emitted = Vec::new();
    let secs = |s| Some(Duration::from_secs(s));

    let results = [
        report(1, "folner bound and C-C cover", secs(10), || folner_bound(&mut emitted, &specs)),
        report(2, "C-C syndetic with gap <= lcm", None, || cc_syndetic(&mut emitted, &specs)),
        report(3, "finite shift lemma", secs(30), || shift_lemma(&mut rng)),
        report(4, "jin desk-scale suite", secs(60), || jin_suite(&mut emitted, &pairs)),
        report(5, "rational bohr collapse", None, || rational_collapse(&mut rng)),
        report(6, "folner-bohr verification", None, folner_bohr),
        report(7, "spectral recovery", None, spectral),
        report(8, "estimator error <= p/L", None, || estimator_error(&mut rng)),
        report(9, "DSL round trip", None, || round_trip(&mut rng)),
        report(10, "lattice suite", None, || lattice_suite(&mut emitted, &mut rng)),
    ];
    let dir = tempfile::tempdir().unwrap();
    let last = report(11, "certificate re-validation via `check`", None, || revalidate(&emitted, dir.path()));

    let failed = results.iter().chain([&last]).filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
