//! Named verification suites and their deterministic JSON reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::barcobar::{c0_replacement_check, convolution_path, counit_check, random_algebra, DGAlgebra, Orientation, TruncationPolicy};
use crate::cat::{
    elements_of_diagram, grothendieck, grothendieck_t, hocolim_cset, hocolim_sset, nerve, nerve_diagram, random_cat_diagram,
    CSetDiagram, CatDiagram, FiniteCategory,
};
use crate::chain::{random_complex, ChainComplex};
use crate::cset::{boundary, day_tensor, find_isomorphism, normalized_chains, open_box, random_cubical_set, representable, triangulate, CubicalMap, CubicalSet};
use crate::cube::{enumerate_hom, hom_count, CubeMor};
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::square::{
    chain_square, check_invariants, coherent_cylinder_check, compose_cells, conditions_agree, homotopy_classes_oracle,
    mapping_space, mapping_space_homology_compare, pi0, standard_cofibrations, standard_fibrations, standard_monos, unit_cell,
    verify_homotopical, ChainSquare, MapCell, MappingSpace, Mutation, SquareStructure,
};

pub use crate::error::SCHEMA_TAG as SCHEMA;

pub const SUITES: [&str; 10] = [
    "cube-axioms",
    "cset-homology",
    "thomason",
    "square-homotopical",
    "conditions-agree",
    "coherence",
    "mapspace-pi0",
    "mapspace-homology",
    "barcobar-counit",
    "c0-replacement",
];

/// Caps, policy and seed shared by every suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub p: u32,
    /// Cube dimension cap.
    pub max_dim: usize,
    pub weight_cap: usize,
    pub lo: i64,
    pub hi: i64,
    pub seed: u64,
    /// Keep only the first `k` battery instances.
    pub battery: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let policy = TruncationPolicy::default();
        Self {
            p: 2,
            max_dim: 3,
            weight_cap: policy.weight_cap,
            lo: policy.lo,
            hi: policy.hi,
            seed: 0,
            battery: None,
        }
    }
}

impl SuiteConfig {
    pub fn field(&self) -> Result<Fp> {
        Fp::new(self.p)
    }

    pub fn policy(&self) -> TruncationPolicy {
        TruncationPolicy::new(self.weight_cap, self.lo, self.hi)
    }

    fn limit<T>(&self, mut v: Vec<T>) -> Vec<T> {
        if let Some(k) = self.battery {
            v.truncate(k);
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Vacuous,
}

impl Verdict {
    fn of(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub instance: String,
    pub verdict: Verdict,
    pub evidence: Value,
}

impl Check {
    pub fn new(name: &str, instance: impl Into<String>, pass: bool, evidence: Value) -> Self {
        Self {
            name: name.into(),
            instance: instance.into(),
            verdict: Verdict::of(pass),
            evidence,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub suite: String,
    pub config: SuiteConfig,
    pub instances: Vec<String>,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    /// sha256 of the canonical JSON of every other field.
    pub hash: String,
}

impl Report {
    pub fn new(suite: &str, config: &SuiteConfig, instances: Vec<String>, checks: Vec<Check>) -> Self {
        let verdict = if checks.iter().any(|c| c.verdict == Verdict::Fail) {
            Verdict::Fail
        } else if checks.iter().any(|c| c.verdict == Verdict::Pass) {
            Verdict::Pass
        } else {
            Verdict::Vacuous
        };
        let mut r = Report {
            schema: SCHEMA.into(),
            suite: suite.into(),
            config: config.clone(),
            instances,
            checks,
            verdict,
            hash: String::new(),
        };
        r.hash = r.content_hash();
        r
    }

    /// Hash over the key-sorted JSON of the report without its hash field.
    pub fn content_hash(&self) -> String {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        v.as_object_mut().expect("object").remove("hash");
        hex::encode(Sha256::digest(v.to_string().as_bytes()))
    }

    pub fn to_json(&self) -> String {
        // round-trip through Value to sort every key
        let v = serde_json::to_value(self).expect("reports serialize");
        serde_json::to_string_pretty(&v).expect("values serialize")
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn checks_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.name == name)
    }

    /// Whether every check of the given name passed, with at least one present.
    pub fn all_pass(&self, name: &str) -> bool {
        let mut it = self.checks_named(name).peekable();
        it.peek().is_some() && it.all(|c| c.verdict == Verdict::Pass)
    }
}

pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<Report> {
    let (instances, checks) = match name {
        "cube-axioms" => cube_axioms(config)?,
        "cset-homology" => cset_homology(config)?,
        "thomason" => thomason(config)?,
        "square-homotopical" | "conditions-agree" | "coherence" => {
            return run_square_suite(name, &chain_square(config.field()?), config);
        }
        "mapspace-pi0" => mapspace_pi0(config)?,
        "mapspace-homology" => mapspace_homology(config)?,
        "barcobar-counit" => barcobar_counit(config)?,
        "c0-replacement" => c0_replacement(config)?,
        _ => return Err(Error::UnknownSuite(name.into())),
    };
    Ok(Report::new(name, config, instances, checks))
}

/// The square-structure suites run against a given structure, e.g. a
/// deliberately broken one.
pub fn run_square_suite(name: &str, q: &ChainSquare, config: &SuiteConfig) -> Result<Report> {
    if q.field() != config.field()? {
        return Err(Error::FieldMismatch(q.field().p(), config.p));
    }
    let (instances, checks) = match name {
        "square-homotopical" => square_homotopical(q, config)?,
        "conditions-agree" => agreement(q, config)?,
        "coherence" => coherence(q, config)?,
        _ => return Err(Error::UnknownSuite(name.into())),
    };
    Ok(Report::new(name, config, instances, checks))
}

type Outcome = (Vec<String>, Vec<Check>);

/// Counts `[m] -> [n]` from truth tables: every output coordinate is a
/// constant or a coordinate projection, projections strictly increasing.
fn brute_hom_count(m: usize, n: usize) -> u64 {
    let verts: Vec<Vec<u8>> = (0..1u32 << m)
        .map(|b| (0..m).map(|i| ((b >> (m - 1 - i)) & 1) as u8).collect())
        .collect();
    let mut tables = vec![vec![0u8; verts.len()], vec![1u8; verts.len()]];
    for j in 0..m {
        tables.push(verts.iter().map(|x| x[j]).collect());
    }
    let projection = |t: &[u8]| tables[2..].iter().position(|p| p.as_slice() == t);
    let mut count = 0;
    let mut idx = vec![0usize; n];
    loop {
        let proj: Vec<usize> = idx.iter().filter_map(|&i| projection(&tables[i])).collect();
        if proj.windows(2).all(|w| w[0] < w[1]) {
            count += 1;
        }
        let mut k = 0;
        while k < n {
            idx[k] += 1;
            if idx[k] < tables.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == n {
            return count;
        }
    }
}

fn cube_axioms(cfg: &SuiteConfig) -> Result<Outcome> {
    let top = cfg.max_dim + 1;
    let small = cfg.max_dim.min(2);
    let mut battery: Vec<String> = Vec::new();
    for m in 0..=top {
        for n in 0..=top {
            battery.push(format!("hom({m},{n})"));
        }
    }
    battery.extend(["units", "associativity", "interchange"].map(String::from));
    let battery = cfg.limit(battery);
    let mut checks = Vec::new();
    for inst in &battery {
        let check = match inst.as_str() {
            "units" => {
                let mut n_checked = 0;
                let mut ok = true;
                for m in 0..=cfg.max_dim {
                    for n in 0..=cfg.max_dim {
                        for f in enumerate_hom(m, n) {
                            ok &= CubeMor::identity(n).after(&f) == f && f.after(&CubeMor::identity(m)) == f;
                            n_checked += 1;
                        }
                    }
                }
                Check::new("units", inst.clone(), ok, json!({"dims": cfg.max_dim, "morphisms": n_checked}))
            }
            "associativity" => {
                let mut n_checked = 0u64;
                let mut ok = true;
                let homs = |a, b| enumerate_hom(a, b);
                for a in 0..=small {
                    for b in 0..=small {
                        for c in 0..=small {
                            for d in 0..=small {
                                let (hab, hbc, hcd) = (homs(a, b), homs(b, c), homs(c, d));
                                for f in &hab {
                                    for g in &hbc {
                                        let gf = g.after(f);
                                        for h in &hcd {
                                            ok &= h.after(g).after(f) == h.after(&gf);
                                            n_checked += 1;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                Check::new("associativity", inst.clone(), ok, json!({"dims": small, "triples": n_checked}))
            }
            "interchange" => {
                // (a∘b) ⊗ (c∘d) = (a⊗c) ∘ (b⊗d) whenever every tensored cube has dim <= small
                let mut n_checked = 0u64;
                let mut ok = true;
                for a0 in 0..=small {
                    for c0 in 0..=small - a0 {
                        for a1 in 0..=small {
                            for c1 in 0..=small - a1 {
                                for a2 in 0..=small {
                                    for c2 in 0..=small - a2 {
                                        for b in enumerate_hom(a0, a1) {
                                            for a in enumerate_hom(a1, a2) {
                                                for d in enumerate_hom(c0, c1) {
                                                    for c in enumerate_hom(c1, c2) {
                                                        ok &= a.after(&b).tensor(&c.after(&d)) == a.tensor(&c).after(&b.tensor(&d));
                                                        n_checked += 1;
                                                    }
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                Check::new("interchange", inst.clone(), ok, json!({"dims": small, "quadruples": n_checked}))
            }
            _ => {
                let (m, n) = parse_pair(inst);
                let enumerated = enumerate_hom(m, n).len() as u64;
                let brute = brute_hom_count(m, n);
                let formula = hom_count(m, n);
                Check::new(
                    "hom-count",
                    inst.clone(),
                    enumerated == brute && brute == formula,
                    json!({"m": m, "n": n, "enumerated": enumerated, "brute_force": brute, "formula": formula}),
                )
            }
        };
        checks.push(check);
    }
    Ok((battery, checks))
}

fn parse_pair(s: &str) -> (usize, usize) {
    let inner = &s[s.find('(').expect("pair") + 1..s.len() - 1];
    let (a, b) = inner.split_once(',').expect("pair");
    (a.parse().expect("number"), b.parse().expect("number"))
}

fn sphere_pattern(n: usize) -> Vec<usize> {
    // ∂□[n] ≃ S^{n-1}, degrees 0..n-1
    let mut h = vec![0; n];
    if n == 1 {
        h[0] = 2;
    } else {
        h[0] = 1;
        h[n - 1] = 1;
    }
    h
}

enum CsetInstance {
    Tensor,
    Boundary(usize),
    OpenBox(usize, usize, u8),
    Random(usize, CubicalSet),
}

fn cset_homology(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg.field()?;
    let top = cfg.max_dim + 1;
    let mut battery = vec![CsetInstance::Tensor];
    for n in 1..=top {
        battery.push(CsetInstance::Boundary(n));
    }
    for n in 1..=top {
        for k in 0..n {
            for e in 0..2 {
                battery.push(CsetInstance::OpenBox(n, k, e));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for i in 0..10 {
        battery.push(CsetInstance::Random(i, random_cubical_set(&mut rng, 12)));
    }
    let battery = cfg.limit(battery);
    let mut names = Vec::new();
    let mut checks = Vec::new();
    for inst in &battery {
        let check = match inst {
            CsetInstance::Tensor => {
                let name = "box[1]⊗box[1] ≅ box[2]".to_string();
                let iso = find_isomorphism(&day_tensor(&representable(1), &representable(1)), &representable(2), 1_000_000)?;
                let ok = iso.as_ref().is_some_and(|m| m.validate().is_ok());
                Check::new("tensor-iso", name, ok, json!({"found": iso.is_some()}))
            }
            CsetInstance::Boundary(n) => {
                let h = normalized_chains(&boundary(*n).0, f).homology_in(0, *n as i64 - 1);
                let want = sphere_pattern(*n);
                Check::new("boundary", format!("boundary({n})"), h == want, json!({"homology": h, "expected": want}))
            }
            CsetInstance::OpenBox(n, k, e) => {
                let h = normalized_chains(&open_box(*n, *k, *e)?.0, f).homology_in(0, *n as i64);
                let mut want = vec![0; n + 1];
                want[0] = 1;
                Check::new("open-box", format!("open_box({n},{k},{e})"), h == want, json!({"homology": h, "expected": want}))
            }
            CsetInstance::Random(i, x) => {
                let cap = x.max_dim() + 1;
                let cubical = normalized_chains(x, f).homology_in(0, cap as i64 - 1);
                let simplicial = triangulate(x, cap)?.set.homology(f);
                Check::new(
                    "triangulation",
                    format!("random[{i}]"),
                    cubical == simplicial,
                    json!({"cells": x.counts(), "cap": cap, "cubical": cubical, "triangulated": simplicial}),
                )
            }
        };
        names.push(check.instance.clone());
        checks.push(check);
    }
    Ok((names, checks))
}

/// Two diagrams of cubical sets: `* <- ∂□[1] -> *` and `∂□[2] -> □[2]`.
fn cubical_diagrams() -> Vec<(String, CSetDiagram)> {
    let span = FiniteCategory::span();
    let apex = (0..span.num_objects())
        .find(|&a| span.outs(a).len() == 3)
        .expect("a span has an apex");
    let values: Vec<CubicalSet> = (0..span.num_objects())
        .map(|a| if a == apex { boundary(1).0 } else { representable(0) })
        .collect();
    let maps = (0..span.num_morphisms())
        .map(|m| {
            let x = &values[span.src(m)];
            if span.is_identity(m) {
                CubicalMap::identity(x)
            } else {
                CubicalMap::to_point(x)
            }
        })
        .collect();
    let suspension = CSetDiagram {
        shape: span,
        values,
        maps,
    };
    let arrow = FiniteCategory::ordinal(1);
    let (b, inc) = boundary(2);
    let values = vec![b, representable(2)];
    let maps = (0..arrow.num_morphisms())
        .map(|m| {
            if arrow.is_identity(m) {
                CubicalMap::identity(&values[arrow.src(m)])
            } else {
                inc.clone()
            }
        })
        .collect();
    let filled = CSetDiagram {
        shape: arrow,
        values,
        maps,
    };
    vec![("suspension".into(), suspension), ("filled-square".into(), filled)]
}

fn thomason(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg.field()?;
    let cap = cfg.max_dim + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut battery: Vec<(String, Result<CatDiagram, CSetDiagram>)> =
        (0..3).map(|i| (format!("random[{i}]"), Ok(random_cat_diagram(&mut rng)))).collect();
    battery.extend(cubical_diagrams().into_iter().map(|(n, d)| (n, Err(d))));
    let battery = cfg.limit(battery);
    // cubical variant: cubical sets of dimension <= 2 at element cap 2
    let cube_cap = cap.min(3);
    let mut checks = Vec::new();
    for (name, d) in &battery {
        match d {
            Ok(d) => {
                let hocolim = hocolim_sset(&nerve_diagram(d, cap)?, cap)?.set.homology(f);
                let groth = nerve(&grothendieck(d).category, cap)?.set.homology(f);
                let transposed = nerve(&grothendieck_t(d).category, cap)?.set.homology(f);
                let evidence = json!({"cap": cap, "hocolim": hocolim, "grothendieck": groth, "transposed": transposed});
                checks.push(Check::new("hocolim-vs-grothendieck", name.clone(), hocolim == groth, evidence.clone()));
                checks.push(Check::new("grothendieck-vs-transpose", name.clone(), groth == transposed, evidence));
            }
            Err(d) => {
                d.validate()?;
                let hocolim = hocolim_cset(d, cube_cap)?.set.homology(f);
                let els = grothendieck_t(&elements_of_diagram(&d.shape, &d.values, &d.maps, 2));
                let transposed = nerve(&els.category, cube_cap)?.set.homology(f);
                checks.push(Check::new(
                    "cubical-corollary",
                    name.clone(),
                    hocolim == transposed,
                    json!({"cap": cube_cap, "element_cap": 2, "hocolim": hocolim, "elements": transposed}),
                ));
            }
        }
    }
    let names = battery.into_iter().map(|(n, _)| n).collect();
    Ok((names, checks))
}

fn test_objects(f: Fp) -> Vec<(String, ChainComplex)> {
    vec![
        ("unit".into(), ChainComplex::unit(f)),
        ("S1".into(), ChainComplex::sphere(f, 1)),
        ("D2".into(), ChainComplex::disk(f, 2)),
    ]
}

fn square_homotopical(q: &ChainSquare, cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg.field()?;
    let small = cfg.max_dim.min(2);
    let mut battery: Vec<String> = test_objects(f).into_iter().map(|(n, _)| format!("invariants:{n}")).collect();
    battery.extend(["mutant:alpha-swap", "mutant:beta-zero", "homotopical"].map(String::from));
    let battery = cfg.limit(battery);
    let objects = test_objects(f);
    let mut checks = Vec::new();
    for inst in &battery {
        match inst.split_once(':') {
            Some(("invariants", obj)) => {
                let x = &objects.iter().find(|(n, _)| n == obj).expect("known object").1;
                let r = check_invariants(q, x, small);
                let tally: serde_json::Map<String, Value> = r
                    .tally()
                    .into_iter()
                    .map(|(k, (p, t))| (k, json!({"passed": p, "total": t})))
                    .collect();
                checks.push(Check::new("invariants", inst.clone(), r.pass(), json!({"dims": small, "tally": tally})));
            }
            Some(("mutant", which)) => {
                let m = if which == "alpha-swap" { Mutation::AlphaSwap } else { Mutation::BetaZero };
                let mutant = chain_square(f).mutated(m);
                let mut failing = Vec::new();
                for (name, x) in &objects {
                    let r = check_invariants(&mutant, x, small);
                    let mut axioms: Vec<String> = r.failures().map(|c| c.axiom.clone()).collect();
                    axioms.sort();
                    axioms.dedup();
                    failing.push(json!({"object": name, "failing_axioms": axioms}));
                }
                let detected = failing.iter().all(|v| !v["failing_axioms"].as_array().expect("array").is_empty());
                checks.push(Check::new("mutant-detected", inst.clone(), detected, json!({"dims": small, "objects": failing})));
            }
            _ => {
                let (cofs, fibs) = (standard_cofibrations(f, cfg.max_dim), standard_fibrations(f, cfg.max_dim));
                let r = verify_homotopical(q, &cofs, &fibs, cfg.max_dim)?;
                for c in &r.corners {
                    checks.push(Check::new(
                        "corner-fibration",
                        format!("{} ⧄ {}", c.cofibration, c.fibration),
                        c.pass(),
                        json!({
                            "cap": r.cap,
                            "open_boxes": c.open_boxes.pass,
                            "boundaries": c.boundaries.as_ref().map(|b| b.pass),
                        }),
                    ));
                }
                let beta: serde_json::Map<String, Value> =
                    r.units.beta_quasi_iso.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
                checks.push(Check::new(
                    "unit-clauses",
                    "beta & Q_0(0)",
                    r.units.pass(),
                    json!({"beta_quasi_iso": beta, "empty_cofibrant": r.units.empty_cofibrant}),
                ));
            }
        }
    }
    Ok((battery, checks))
}

fn agreement(q: &ChainSquare, cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg.field()?;
    let pairs: Vec<(usize, usize)> = {
        let (nc, nf) = (2 * (cfg.max_dim + 1), 2 * (cfg.max_dim + 1));
        cfg.limit((0..nc).flat_map(|i| (0..nf).map(move |j| (i, j))).collect())
    };
    let cofs_all = standard_cofibrations(f, cfg.max_dim);
    let fibs_all = standard_fibrations(f, cfg.max_dim);
    let monos = standard_monos(cfg.max_dim, true);
    let mut names = Vec::new();
    let mut checks = Vec::new();
    // conditions_agree runs each cofibration against a fibration battery
    for (i, c) in cofs_all.iter().enumerate() {
        let fibs: Vec<_> = pairs.iter().filter(|p| p.0 == i).map(|p| fibs_all[p.1].clone()).collect();
        if fibs.is_empty() {
            continue;
        }
        let r = conditions_agree(q, std::slice::from_ref(c), &fibs, &monos, cfg.max_dim)?;
        for e in &r.entries {
            let name = format!("{} ⧄ {}", e.cofibration, e.fibration);
            names.push(name.clone());
            checks.push(Check::new(
                "three-way-agreement",
                name,
                e.agree() && e.corners,
                json!({
                    "cap": r.cap,
                    "corners": e.corners,
                    "pushout_products": e.products,
                    "generating": e.generating,
                    "agree": e.agree(),
                }),
            ));
        }
    }
    Ok((names, checks))
}

fn coherence(q: &ChainSquare, cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg.field()?;
    let battery = cfg.limit(standard_cofibrations(f, cfg.max_dim));
    let r = coherent_cylinder_check(q, &battery)?;
    let names = battery.iter().map(|a| a.name.clone()).collect();
    let checks = r
        .entries
        .iter()
        .map(|e| {
            Check::new(
                "coherent-cylinder",
                e.cofibration.clone(),
                e.pass(),
                json!({"ends": e.ends, "cofaces": e.cofaces}),
            )
        })
        .collect();
    Ok((names, checks))
}

/// Seeded pairs `X` in degrees `[0, 1]`, `Y` in `[0, 2]`, every dim `<= 4`.
pub fn random_pairs(f: Fp, seed: u64, count: usize) -> Vec<(ChainComplex, ChainComplex)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let x = random_complex(&mut rng, f, 0, 1, 4);
            let y = random_complex(&mut rng, f, 0, 2, 4);
            (x, y)
        })
        .collect()
}

fn dims(c: &ChainComplex) -> Vec<usize> {
    match c.support() {
        Some((lo, hi)) => (lo..=hi).map(|n| c.dim(n)).collect(),
        None => vec![],
    }
}

fn random_cell<R: Rng>(rng: &mut R, m: &MappingSpace, level: usize) -> MapCell {
    let mut c = MapCell::zero(m, level);
    for v in c.coords.iter_mut() {
        *v = rng.gen_range(0..m.field().p());
    }
    c
}

fn mapspace_pi0(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg.field()?;
    let q = chain_square(f);
    let cap = cfg.max_dim;
    let mut battery: Vec<String> = (0..5).map(|i| format!("pair[{i}]")).collect();
    battery.extend((0..20).map(|i| format!("triple[{i}]")));
    let battery = cfg.limit(battery);
    let pairs = random_pairs(f, cfg.seed, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let mut checks = Vec::new();
    for inst in &battery {
        let i: usize = inst[inst.find('[').expect("index") + 1..inst.len() - 1].parse().expect("index");
        if inst.starts_with("pair") {
            let (x, y) = &pairs[i];
            let m = mapping_space(&q, x, y, cap)?;
            let p = pi0(&m)?;
            let oracle = homotopy_classes_oracle(x, y);
            checks.push(Check::new(
                "pi0-vs-homotopy-classes",
                inst.clone(),
                p.dim() == oracle.dim(),
                json!({"cap": cap, "x": dims(x), "y": dims(y), "pi0_dim": p.dim(), "oracle_dim": oracle.dim(),
                       "pi0_size": p.cardinality().map(|c| c.to_string())}),
            ));
        } else {
            checks.extend(composition_triple(&q, &mut rng, f, inst)?);
        }
    }
    Ok((battery, checks))
}

/// Associativity and both unit laws for one random triple of cells with
/// total dimension `<= 3`.
fn composition_triple<R: Rng>(q: &ChainSquare, rng: &mut R, f: Fp, inst: &str) -> Result<Vec<Check>> {
    const CAP: usize = 3;
    let objs: Vec<ChainComplex> = (0..4).map(|_| random_complex(rng, f, 0, 1, 2)).collect();
    let (x, y, z, w) = (&objs[0], &objs[1], &objs[2], &objs[3]);
    let space = |a: &ChainComplex, b: &ChainComplex| mapping_space(q, a, b, CAP);
    let (mzw, myz, mxy) = (space(z, w)?, space(y, z)?, space(x, y)?);
    let (myw, mxz, mxw) = (space(y, w)?, space(x, z)?, space(x, w)?);
    let (mww, mxx) = (space(w, w)?, space(x, x)?);
    let total = rng.gen_range(0..=CAP);
    let a = rng.gen_range(0..=total);
    let b = rng.gen_range(0..=total - a);
    let c = total - a - b;
    let (h, g, k) = (random_cell(rng, &mzw, a), random_cell(rng, &myz, b), random_cell(rng, &mxy, c));
    let left = compose_cells(q, &myw, &compose_cells(q, &mzw, &h, &myz, &g, &myw)?, &mxy, &k, &mxw)?;
    let right = compose_cells(q, &mzw, &h, &mxz, &compose_cells(q, &myz, &g, &mxy, &k, &mxz)?, &mxw)?;
    let (uw, ux) = (unit_cell(q, &mww)?, unit_cell(q, &mxx)?);
    let left_unit = compose_cells(q, &mww, &uw, &mxw, &right, &mxw)? == right;
    let right_unit = compose_cells(q, &mxw, &right, &mxx, &ux, &mxw)? == right;
    let ev = json!({"cap": CAP, "levels": [a, b, c]});
    Ok(vec![
        Check::new("compose-associativity", inst, left == right, ev.clone()),
        Check::new("compose-units", inst, left_unit && right_unit, ev),
    ])
}

fn mapspace_homology(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg.field()?;
    let q = chain_square(f);
    let cap = cfg.max_dim + 1;
    let pairs = cfg.limit(random_pairs(f, cfg.seed, 5));
    let mut names = Vec::new();
    let mut checks = Vec::new();
    for (i, (x, y)) in pairs.iter().enumerate() {
        let name = format!("pair[{i}]");
        let c = mapping_space_homology_compare(&q, x, y, cap)?;
        checks.push(Check::new(
            "mapping-space-homology",
            name.clone(),
            c.pass(),
            json!({"cap": cap, "degrees": [0, cap - 1], "mapping": c.mapping, "internal_hom": c.derived}),
        ));
        names.push(name);
    }
    Ok((names, checks))
}

/// `F`, `F[x]/x²` with `|x| = 0`, `Λ(y)` with `|y| = 1`, then seeded random
/// algebras.
pub fn algebra_battery(f: Fp, seed: u64, random: usize) -> Result<Vec<(String, DGAlgebra)>> {
    let mut out = vec![
        ("F".to_string(), DGAlgebra::ground(f)),
        ("F[x]/x^2 |x|=0".to_string(), DGAlgebra::truncated_polynomial(f, 0, 2)?),
        ("Λ(y) |y|=1".to_string(), DGAlgebra::exterior(f, 1)?),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..random {
        out.push((format!("random[{i}]"), random_algebra(&mut rng, f)));
    }
    Ok(out)
}

fn barcobar_counit(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg.field()?;
    let policy = cfg.policy();
    let battery = cfg.limit(algebra_battery(f, cfg.seed, 0)?);
    let mut checks = Vec::new();
    for (name, a) in &battery {
        let r = counit_check(a, &policy)?;
        checks.push(Check::new("counit-quasi-iso", name.clone(), r.pass(), serde_json::to_value(&r).expect("report")));
        let p = convolution_path(a, Orientation::Standard)?;
        checks.push(Check::new(
            "convolution-path",
            name.clone(),
            p.pass(),
            json!({
                "first_quasi_iso": p.first_quasi_iso,
                "second_surjective": p.second_surjective,
                "composite_is_diagonal": p.composite_is_diagonal,
            }),
        ));
    }
    Ok((battery.into_iter().map(|(n, _)| n).collect(), checks))
}

fn c0_replacement(cfg: &SuiteConfig) -> Result<Outcome> {
    let f = cfg.field()?;
    let policy = cfg.policy();
    let battery = cfg.limit(algebra_battery(f, cfg.seed, 0)?);
    let mut checks = Vec::new();
    for (name, a) in &battery {
        let r = c0_replacement_check(a, &policy)?;
        checks.push(Check::new("c0-quasi-iso", name.clone(), r.pass(), serde_json::to_value(&r).expect("report")));
    }
    Ok((battery.into_iter().map(|(n, _)| n).collect(), checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_matches_small_counts() {
        assert_eq!(brute_hom_count(0, 1), 2);
        assert_eq!(brute_hom_count(1, 1), 3);
        assert_eq!(brute_hom_count(1, 2), 8);
        assert_eq!(brute_hom_count(2, 1), 4);
    }

    #[test]
    fn unknown_suites_are_rejected() {
        assert!(matches!(run_suite("nope", &SuiteConfig::default()), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn empty_battery_is_vacuous() {
        let cfg = SuiteConfig {
            battery: Some(0),
            ..SuiteConfig::default()
        };
        for name in SUITES {
            let r = run_suite(name, &cfg).unwrap();
            assert_eq!(r.verdict, Verdict::Vacuous, "{name}");
            assert!(r.checks.is_empty());
        }
    }

    #[test]
    fn hash_covers_content() {
        let cfg = SuiteConfig {
            max_dim: 1,
            ..SuiteConfig::default()
        };
        let r = run_suite("cube-axioms", &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.hash, r.content_hash());
        let mut tampered = r.clone();
        tampered.checks[0].verdict = Verdict::Fail;
        assert_ne!(tampered.content_hash(), r.hash);
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
