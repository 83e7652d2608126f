//! Reproduction criteria, one PASS/FAIL line each. Exits nonzero if any
//! criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::HashMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use heller::adjoint::DEFAULT_MAX_EPS_DIM;
use heller::algebra::builtin_algebra;
use heller::catalog::{catalog_quotient, Catalog};
use heller::krull_schmidt::{decompose, identify};
use heller::linalg::FpMatrix;
use heller::module::{direct_sum, hom_space, is_isomorphic, random_module, seeded_rng, Module, ModuleMap};
use heller::projectives::{cover_rigidity_check, omega_map, syzygy, SyzygyPresentation};
use heller::reproduce::{verify_paper, PaperRun, RunOptions};
use heller::stable::{is_coretraction, is_stable_mono, is_stably_isomorphic, stable_hom};
use rand::Rng;

const OPTS: RunOptions = RunOptions { max_eps_dim: DEFAULT_MAX_EPS_DIM, seed: 0 };

#[derive(Default)]
struct Runs(HashMap<(&'static str, u32), Arc<PaperRun>>);

impl Runs {
    fn get(&mut self, name: &'static str, p: u32) -> Arc<PaperRun> {
        self.0
            .entry((name, p))
            .or_insert_with(|| Arc::new(verify_paper(name, p, OPTS).unwrap_or_else(|e| panic!("{name} p={p}: {e}"))))
            .clone()
    }
}

/// Collects failed named checks over a set of runs.
fn require(runs: &mut Runs, cases: &[(&'static str, u32)], names: &[&str], problems: &mut Vec<String>) {
    for &(alg, p) in cases {
        let run = runs.get(alg, p);
        for name in names {
            match run.checks.iter().find(|c| c.name == *name) {
                None => problems.push(format!("{alg} p={p}: check {name} missing")),
                Some(c) if !c.passed => problems.push(format!("{alg} p={p}: {name}: {}", c.diff.join("; "))),
                Some(_) => {}
            }
        }
    }
}

fn catalog_validity(runs: &mut Runs) -> Vec<String> {
    let mut problems = Vec::new();
    let cases = [("A", 2), ("A", 3), ("A", 5)];
    require(runs, &cases, &["catalog.indecomposable", "catalog.pairwise_distinct", "catalog.expected_labels"], &mut problems);
    for (_, p) in cases {
        let cat = catalog_quotient("A", p).unwrap();
        let n = cat.len();
        if n != 25 {
            problems.push(format!("A p={p}: {n} objects"));
        }
        for i in 0..n {
            for j in i + 1..n {
                if is_stably_isomorphic(&cat.entries[i].module, &cat.entries[j].module).unwrap() {
                    problems.push(format!("p={p}: {} and {} stably isomorphic", cat.entries[i].label, cat.entries[j].label));
                }
            }
        }
    }
    problems
}

fn left_adjoint_a(runs: &mut Runs) -> Vec<String> {
    let mut problems = Vec::new();
    let names = ["left_adjoint.found", "left_adjoint.s_table", "left_adjoint.omega_s_table"];
    require(runs, &[("A", 2), ("A", 3), ("A", 5)], &names, &mut problems);
    problems
}

fn left_adjoint_b(runs: &mut Runs) -> Vec<String> {
    let mut problems = Vec::new();
    let names = ["left_adjoint.found", "left_adjoint.s_table", "left_adjoint.omega_s_table", "catalog.expected_labels"];
    require(runs, &[("B", 2), ("B", 3)], &names, &mut problems);
    problems
}

const QUOTIENTS: [&str; 8] = ["C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8"];

fn left_adjoint_quotients(runs: &mut Runs) -> Vec<String> {
    let mut problems = Vec::new();
    let cases: Vec<(&'static str, u32)> = QUOTIENTS.iter().flat_map(|&c| [(c, 2), (c, 3)]).collect();
    require(runs, &cases, &["left_adjoint.found"], &mut problems);
    problems
}

fn right_adjoint_obstruction(runs: &mut Runs) -> Vec<String> {
    let mut problems = Vec::new();
    let names = ["right_adjoint.h", "right_adjoint.h_prime", "right_adjoint.infeasible", "right_adjoint.column3_argument"];
    require(runs, &[("C3", 3)], &names, &mut problems);
    problems
}

fn idempotency(runs: &mut Runs) -> Vec<String> {
    let mut problems = Vec::new();
    let mut cases: Vec<(&'static str, u32)> = vec![("A", 2), ("A", 3), ("B", 2), ("B", 3)];
    cases.extend(QUOTIENTS.iter().filter(|&&c| c != "C5").flat_map(|&c| [(c, 2), (c, 3)]));
    require(runs, &cases, &["idempotency.all_objects"], &mut problems);
    require(runs, &[("C5", 2), ("C5", 3)], &["idempotency.c5_display"], &mut problems);
    problems
}

fn random_hom(m: &Arc<Module>, n: &Arc<Module>, rng: &mut impl Rng) -> ModuleMap {
    ModuleMap::new(m.clone(), n.clone(), hom_space(m, n).random_element(rng)).unwrap()
}

/// Stable monomorphisms between catalog objects: filtered random maps plus
/// split inclusions twisted by automorphisms.
fn sampled_stable_monos(cat: &Catalog, seed: u64) -> Vec<ModuleMap> {
    let alg = &cat.algebra;
    let xs = cat.modules();
    let n = xs.len();
    let mut rng = seeded_rng(&[seed, 0x6d6f_6e6f]);
    let mut out = Vec::new();
    for t in 0..1000 {
        let x = xs[rng.gen_range(0..n)].clone();
        let y = if t % 2 == 0 {
            xs[rng.gen_range(0..n)].clone()
        } else {
            direct_sum(alg, &[xs[rng.gen_range(0..n)].clone(), xs[rng.gen_range(0..n)].clone()]).module
        };
        let f = random_hom(&x, &y, &mut rng);
        if is_stable_mono(&f, &xs).unwrap() {
            out.push(f);
        }
    }
    for _ in 0..80 {
        let x = xs[rng.gen_range(0..n)].clone();
        let sum = direct_sum(alg, &[x.clone(), xs[rng.gen_range(0..n)].clone()]);
        let twist = common::random_automorphism(&sum.module, &mut rng);
        let f = sum.injections[0].then(&twist);
        assert!(is_stable_mono(&f, &xs).unwrap(), "split inclusion is not a stable monomorphism");
        out.push(f);
    }
    out
}

fn monos_to_coretractions() -> Vec<String> {
    let mut problems = Vec::new();
    for name in ["A", "B"] {
        let cat = catalog_quotient(name, 2).unwrap();
        let monos = sampled_stable_monos(&cat, 1);
        if monos.len() < 100 {
            problems.push(format!("{name}: only {} stable monomorphisms sampled", monos.len()));
        }
        for f in &monos {
            let (ps, pt) = (syzygy(&f.source).unwrap(), syzygy(&f.target).unwrap());
            let of = omega_map(f, &ps, &pt).unwrap();
            match is_coretraction(&of).unwrap() {
                None => problems.push(format!("{name}: Ωf has no stable retraction (source dim {})", f.source.dim())),
                Some(r) => {
                    let back = of.then(&r).matrix.sub(&FpMatrix::identity(2, ps.omega.dim()));
                    if !stable_hom(&ps.omega, &ps.omega).unwrap().factors_through_projective(&back) {
                        problems.push(format!("{name}: retraction witness does not verify"));
                    }
                }
            }
        }
        for e in cat.entries.iter().chain(&cat.projectives) {
            let report = cover_rigidity_check(&syzygy(&e.module).unwrap(), 0, 0).unwrap();
            if !report.exhaustive || !report.passed() {
                problems.push(format!("{name} {}: cover rigidity {report:?}", e.label));
            }
        }
    }
    problems
}

fn epsilon_fixtures(runs: &mut Runs) -> Vec<String> {
    let mut problems = Vec::new();
    require(runs, &[("A", 2), ("A", 3), ("B", 2), ("B", 3)], &["epsilon.fixtures"], &mut problems);
    problems
}

fn foundations() -> Vec<String> {
    let mut problems = Vec::new();
    let mut sampled = 0;
    let mut sweep: Vec<(&str, u64)> = vec![("A", 200), ("B", 200)];
    sweep.extend(QUOTIENTS.iter().map(|&c| (c, 40)));
    for (name, count) in sweep {
        let cat = catalog_quotient(name, 2).unwrap();
        let all = cat.with_projectives();
        for seed in 0..count {
            let m = random_module(&cat.algebra, seed, 12).unwrap();
            sampled += 1;
            let d = decompose(&m).unwrap();
            let rebuilt = direct_sum(&cat.algebra, &d.expanded()).module;
            if !d.witness.is_iso() || is_isomorphic(&rebuilt, &m).is_none() {
                problems.push(format!("{name} seed {seed}: decomposition does not reassemble"));
            }
            if let Err(e) = identify(&m, &all) {
                problems.push(format!("{name} seed {seed}: {e}"));
            }
            if seed < 30 {
                let minimal = syzygy(&m).unwrap();
                let padded = SyzygyPresentation::padded(&m, &[0, 1], seed).unwrap();
                if !is_stably_isomorphic(&minimal.omega, &padded.omega).unwrap() {
                    problems.push(format!("{name} seed {seed}: Ω depends on the presentation"));
                }
                let n = random_module(&cat.algebra, seed + 1000, 8).unwrap();
                let sum = direct_sum(&cat.algebra, &[m.clone(), n.clone()]).module;
                let split = direct_sum(&cat.algebra, &[minimal.omega.clone(), syzygy(&n).unwrap().omega]).module;
                if is_isomorphic(&syzygy(&sum).unwrap().omega, &split).is_none() {
                    problems.push(format!("{name} seed {seed}: Ω not additive"));
                }
                let st = stable_hom(&m, &n).unwrap();
                if hom_space(&m, &n).dim() != st.dim() + st.proj_dim() {
                    problems.push(format!("{name} seed {seed}: Hom dimension identity fails"));
                }
            }
        }
    }
    if sampled < 200 {
        problems.push(format!("only {sampled} random modules"));
    }
    for name in ["A", "B"] {
        let alg = builtin_algebra(name, 2).unwrap();
        for seed in 0..40 {
            let m = random_module(&alg, seed, 8).unwrap();
            let fast = decompose(&m).unwrap().expanded();
            if common::iso_class_profile(&fast) != common::iso_class_profile(&common::brute_summands(&m)) {
                problems.push(format!("{name} seed {seed}: decomposition differs from exhaustive search"));
            }
        }
    }
    problems
}

fn unit_descriptions(runs: &mut Runs) -> Vec<String> {
    let mut problems = Vec::new();
    require(runs, &[("A", 2), ("B", 2)], &["unit.description"], &mut problems);
    problems
}

fn main() -> ExitCode {
    let mut runs = Runs::default();
    type Criterion<'a> = (&'a str, Box<dyn FnOnce(&mut Runs) -> Vec<String>>);
    let criteria: Vec<Criterion> = vec![
        ("catalog validity over A", Box::new(catalog_validity)),
        ("left adjoint for A", Box::new(left_adjoint_a)),
        ("left adjoint for B", Box::new(left_adjoint_b)),
        ("left adjoints for C1..C8", Box::new(left_adjoint_quotients)),
        ("right-adjoint obstruction over C3", Box::new(right_adjoint_obstruction)),
        ("idempotency of ΩS", Box::new(idempotency)),
        ("Ω sends stable monos to coretractions", Box::new(|_| monos_to_coretractions())),
        ("ε fixtures", Box::new(epsilon_fixtures)),
        ("foundational properties", Box::new(|_| foundations())),
        ("unit descriptions", Box::new(unit_descriptions)),
    ];
    let mut failed = 0;
    for (k, (title, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let problems = run(&mut runs);
        let secs = start.elapsed().as_secs_f64();
        if problems.is_empty() {
            println!("criterion {}: PASS  {title} ({secs:.1}s)", k + 1);
        } else {
            failed += 1;
            println!("criterion {}: FAIL  {title} ({secs:.1}s)", k + 1);
            for p in &problems {
                println!("    {p}");
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
