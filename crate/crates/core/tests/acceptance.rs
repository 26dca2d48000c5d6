use std::process::ExitCode;
use std::time::{Duration, Instant};

use serde_json::Value;
use squarecat_core::suite::{run_suite, Report, SuiteConfig, Verdict, SUITES};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn suite(name: &str) -> Report {
    run_suite(name, &SuiteConfig::default()).expect("suite runs")
}

fn ints(v: &Value) -> Vec<u64> {
    v.as_array().expect("array").iter().map(|x| x.as_u64().expect("integer")).collect()
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `|hom([m], [n])|`: choose which `k` outputs are variables and which `k`
/// inputs they read, in order; the rest are constants.
fn closed_form(m: u64, n: u64) -> u64 {
    (0..=m.min(n)).map(|k| binom(n, k) * binom(m, k) * (1 << (n - k))).sum()
}

fn criterion_1() -> Outcome {
    let r = suite("cube-axioms");
    let mut counts_ok = true;
    let mut seen = 0;
    for c in r.checks_named("hom-count") {
        let e = &c.evidence;
        let (m, n) = (e["m"].as_u64().unwrap(), e["n"].as_u64().unwrap());
        if m <= 4 && n <= 4 {
            seen += 1;
            let want = closed_form(m, n);
            counts_ok &= e["enumerated"] == want && e["brute_force"] == want && c.verdict == Verdict::Pass;
        }
    }
    let laws = ["units", "associativity", "interchange"].iter().all(|l| r.all_pass(l));
    let exhaustive = r.checks_named("associativity").all(|c| c.evidence["dims"] == 2);
    outcome(
        counts_ok && seen == 25 && laws && exhaustive,
        format!("{seen}/25 hom-set sizes vs closed form and brute force; associativity/interchange at dims <= 2"),
    )
}

fn sphere(n: usize) -> Vec<u64> {
    let mut h = vec![0; n];
    h[0] += 1;
    h[n - 1] += 1;
    h
}

fn criterion_2() -> Outcome {
    let r = suite("cset-homology");
    let tensor = r.all_pass("tensor-iso");
    let mut spheres = 0;
    for c in r.checks_named("boundary") {
        let n = ints(&c.evidence["homology"]).len();
        spheres += usize::from(ints(&c.evidence["homology"]) == sphere(n) && (1..=4).contains(&n));
    }
    let mut boxes = 0;
    for c in r.checks_named("open-box") {
        let h = ints(&c.evidence["homology"]);
        boxes += usize::from(h[0] == 1 && h[1..].iter().all(|&x| x == 0));
    }
    let random: Vec<_> = r.checks_named("triangulation").collect();
    let random_ok = random.len() == 10 && random.iter().all(|c| c.evidence["cubical"] == c.evidence["triangulated"]);
    // open boxes: n = 1..4, k < n, two signs
    let pass = tensor && spheres == 4 && boxes == 20 && r.checks_named("open-box").count() == 20 && random_ok;
    outcome(
        pass,
        format!("tensor iso {tensor}; spheres {spheres}/4; open boxes {boxes}/20; random triangulations {}/10", random.len()),
    )
}

fn criterion_3() -> Outcome {
    let r = suite("thomason");
    let thomason = r.checks_named("hocolim-vs-grothendieck").count();
    let transpose = r.checks_named("grothendieck-vs-transpose").count();
    let cubical = r.checks_named("cubical-corollary").count();
    let degrees = r
        .checks_named("hocolim-vs-grothendieck")
        .all(|c| ints(&c.evidence["hocolim"]).len() == 4);
    let pass = r.verdict == Verdict::Pass && thomason == 3 && transpose == 3 && cubical == 2 && degrees;
    outcome(
        pass,
        format!("{thomason} Thomason + {transpose} transpose comparisons in degrees <= 3; {cubical} cubical diagrams"),
    )
}

fn criterion_4() -> Outcome {
    let r = suite("square-homotopical");
    let objects = r.checks_named("invariants").count();
    let invariants = r.all_pass("invariants") && r.checks_named("invariants").all(|c| c.evidence["dims"] == 2);
    let mutants = r.checks_named("mutant-detected").count();
    let detected = r.all_pass("mutant-detected");
    outcome(
        objects == 3 && invariants && mutants == 2 && detected,
        format!("invariants on {objects} complexes at dims <= 2; {mutants} mutants detected: {detected}"),
    )
}

fn criterion_5() -> Outcome {
    let r = suite("conditions-agree");
    let entries = r.checks_named("three-way-agreement").count();
    let agree = r.all_pass("three-way-agreement")
        && r.checks_named("three-way-agreement").all(|c| {
            let e = &c.evidence;
            e["corners"] == true && e["pushout_products"] == true && e["generating"] == true && e["cap"] == 3
        });
    // acyclic legs must be checked against the boundary battery as well
    let h = suite("square-homotopical");
    let mut transfer = true;
    let mut acyclic = 0;
    for c in h.checks_named("corner-fibration") {
        let (cof, fib) = c.instance.split_once(" ⧄ ").expect("pair");
        let has_acyclic_leg = cof.starts_with("0->") || fib.ends_with("->0");
        let b = &c.evidence["boundaries"];
        if has_acyclic_leg {
            acyclic += 1;
            transfer &= *b == true;
        } else {
            transfer &= b.is_null();
        }
        transfer &= c.verdict == Verdict::Pass;
    }
    outcome(
        entries == 64 && agree && transfer && h.all_pass("unit-clauses"),
        format!("{entries} pairs (n <= 3, cap 3) agree and pass; {acyclic} acyclic-leg corners pass the boundary battery"),
    )
}

fn criterion_6() -> Outcome {
    let r = suite("coherence");
    let n = r.checks_named("coherent-cylinder").count();
    outcome(
        n == 8 && r.all_pass("coherent-cylinder"),
        format!("{n} generating cofibrations, n <= 3, satisfy both conditions"),
    )
}

fn criterion_7() -> Outcome {
    let pi0 = suite("mapspace-pi0");
    let pairs: Vec<_> = pi0.checks_named("pi0-vs-homotopy-classes").collect();
    let small = pairs.iter().all(|c| {
        ints(&c.evidence["x"]).iter().chain(ints(&c.evidence["y"]).iter()).all(|&d| d <= 4)
    });
    let pi0_ok = pairs.len() == 5 && pairs.iter().all(|c| c.evidence["pi0_dim"] == c.evidence["oracle_dim"]);
    let h = suite("mapspace-homology");
    let hs: Vec<_> = h.checks_named("mapping-space-homology").collect();
    let h_ok = hs.len() == 5
        && hs.iter().all(|c| {
            let (a, b) = (ints(&c.evidence["mapping"]), ints(&c.evidence["internal_hom"]));
            c.evidence["cap"] == 4 && a.len() >= 3 && a[..3] == b[..3]
        });
    outcome(
        small && pi0_ok && h_ok && pi0.config.p == 2,
        format!("|π0| vs homotopy classes on {} pairs over F_2; H_0..H_2 at cube cap 4 on {}", pairs.len(), hs.len()),
    )
}

fn criterion_8() -> Outcome {
    let r = suite("mapspace-pi0");
    let assoc: Vec<_> = r.checks_named("compose-associativity").collect();
    let units = r.checks_named("compose-units").count();
    let bounded = assoc
        .iter()
        .all(|c| ints(&c.evidence["levels"]).iter().sum::<u64>() <= 3);
    outcome(
        assoc.len() == 20 && units == 20 && bounded && r.all_pass("compose-associativity") && r.all_pass("compose-units"),
        format!("{} random cell triples, total dimension <= 3: associativity and units exact", assoc.len()),
    )
}

fn criterion_9() -> Outcome {
    let r = suite("barcobar-counit");
    let counits: Vec<_> = r.checks_named("counit-quasi-iso").collect();
    let window = counits.iter().all(|c| {
        let safe = ints(&c.evidence["safe"]);
        c.evidence["policy"]["weight_cap"] == 6 && (0..=4).all(|n| safe.contains(&n))
    });
    let c0 = suite("c0-replacement");
    let c0s: Vec<_> = c0.checks_named("c0-quasi-iso").collect();
    let c0_window = c0s.iter().all(|c| (0..=3).all(|n| ints(&c.evidence["safe"]).contains(&n)));
    let pass = counits.len() == 3
        && window
        && r.all_pass("counit-quasi-iso")
        && r.checks_named("convolution-path").count() == 3
        && r.all_pass("convolution-path")
        && c0s.len() == 3
        && c0_window
        && c0.all_pass("c0-quasi-iso");
    outcome(
        pass,
        format!("counit on {} algebras in degrees 0..4 at weight cap 6; C_0 on {}; convolution paths", counits.len(), c0s.len()),
    )
}

fn criterion_10() -> Outcome {
    let cfg = SuiteConfig {
        seed: 17,
        ..SuiteConfig::default()
    };
    let mut identical = 0;
    for name in SUITES {
        let a = run_suite(name, &cfg).expect("suite runs");
        let b = run_suite(name, &cfg).expect("suite runs");
        identical += usize::from(a.to_json() == b.to_json() && a.hash == a.content_hash());
    }
    outcome(identical == SUITES.len(), format!("{identical}/{} suites byte-identical on rerun", SUITES.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 10] = [
        ("box-category calculus", 1, criterion_1),
        ("cubical combinatorics", 10, criterion_2),
        ("Thomason/Grothendieck", 30, criterion_3),
        ("square-structure coherence", 5, criterion_4),
        ("homotopical conditions agree", 60, criterion_5),
        ("coherent cylinder", 10, criterion_6),
        ("mapping spaces vs derived hom", 120, criterion_7),
        ("enriched-category axioms", 10, criterion_8),
        ("bar-cobar", 60, criterion_9),
        ("determinism", 300, criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let elapsed = t.elapsed();
        let in_time = elapsed < Duration::from_secs(*budget);
        let pass = o.pass && in_time;
        failed += usize::from(!pass);
        println!(
            "{} criterion {:>2} {name}: {} [{:.2}s / {budget}s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            elapsed.as_secs_f64(),
        );
    }
    println!("acceptance: {}/10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
