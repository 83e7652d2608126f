//! Full reproduction runs over a built-in algebra and the reports they
//! produce.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::adjoint::{
    compare_unit_descriptions, find_left_adjoint, omega_s_idempotency, right_adjoint_obstruction,
    verify_paper_epsilons, AdjointCertificate, Context, EpsilonCheck, IdempotencyRow, IndexOutcome,
    LeftAdjointSearch, RightAdjointReport, UnitCheck, UnitRecipe,
};
use crate::catalog::{catalog_for, data_checksums, fixtures, has_fixtures, Catalog};
use crate::error::{Error, Result};
use crate::krull_schmidt::{decompose, identify};
use crate::module::{is_isomorphic, Module};
use crate::projectives::{cover_rigidity_check, is_projective};

pub const TOOL_NAME: &str = "heller";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Budget of sampled endomorphisms per object when the rigidity check is
/// not exhaustive.
pub const RIGIDITY_BUDGET: u64 = 2000;

/// Wrapper shared by every report the tool writes.
#[derive(Clone, Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub data_checksums: BTreeMap<String, String>,
    pub result: T,
}

pub fn envelope<T: Serialize>(command: &str, config: Value, result: T) -> Envelope<T> {
    Envelope {
        schema_version: REPORT_SCHEMA_VERSION,
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        command: command.to_string(),
        config,
        data_checksums: data_checksums(),
        result,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Differences between expected and computed values, one per line.
    pub diff: Vec<String>,
}

impl Check {
    fn new(name: &str, diff: Vec<String>) -> Check {
        Check { name: name.to_string(), passed: diff.is_empty(), diff }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CatalogRow {
    pub label: String,
    pub dim: usize,
    pub dimension_vector: Vec<usize>,
    pub projective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsilonJson {
    pub source_dim: usize,
    pub target_dim: usize,
    pub matrix: Vec<Vec<u32>>,
    /// Coordinates of `[ε]` in the stable Hom basis.
    pub stable_coordinates: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateRow {
    pub label: String,
    pub s: String,
    pub s_vector: Vec<usize>,
    pub omega_s: String,
    pub omega_s_vector: Vec<usize>,
    pub eps_stable_dim: usize,
    pub epsilon: EpsilonJson,
    /// Composition with ε bijective at each catalog object, in catalog order.
    pub verification: Vec<bool>,
    pub verifying_s_vectors: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FailureRow {
    pub label: String,
    pub tried: Vec<crate::adjoint::CandidateFailure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateJson {
    pub algebra: String,
    pub prime: u32,
    pub labels: Vec<String>,
    pub h: Vec<Vec<usize>>,
    pub n_left: Vec<Vec<usize>>,
    pub found: bool,
    pub entries: Vec<CertificateRow>,
    pub failures: Vec<FailureRow>,
}

pub fn certificate_json(ctx: &Context, search: &LeftAdjointSearch) -> CertificateJson {
    let cat = &ctx.catalog;
    let mut entries = Vec::new();
    let mut failures = Vec::new();
    for o in &search.outcomes {
        match o {
            IndexOutcome::Found(e) => entries.push(CertificateRow {
                label: e.label.clone(),
                s: cat.render(&e.s_vector),
                s_vector: e.s_vector.clone(),
                omega_s: cat.render(&e.omega_s),
                omega_s_vector: e.omega_s.clone(),
                eps_stable_dim: e.eps_dim,
                epsilon: EpsilonJson {
                    source_dim: e.epsilon.source.dim(),
                    target_dim: e.epsilon.target.dim(),
                    matrix: e.epsilon.matrix.to_rows(),
                    stable_coordinates: e.epsilon_coords.clone(),
                },
                verification: e.bijective.clone(),
                verifying_s_vectors: e.verifying_s_vectors.clone(),
            }),
            IndexOutcome::Failed { label, tried } => {
                failures.push(FailureRow { label: label.clone(), tried: tried.clone() })
            }
        }
    }
    CertificateJson {
        algebra: algebra_name(cat),
        prime: ctx.p(),
        labels: cat.labels(),
        h: search.h.entries.clone(),
        n_left: search.n_left.entries.clone(),
        found: failures.is_empty(),
        entries,
        failures,
    }
}

fn algebra_name(cat: &Catalog) -> String {
    cat.algebra.name().unwrap_or("custom").to_string()
}

#[derive(Clone, Debug, Serialize)]
pub struct PaperRun {
    pub algebra: String,
    pub prime: u32,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Short human-readable findings.
    pub summary: Vec<String>,
    pub catalog: Vec<CatalogRow>,
    pub left_adjoint: CertificateJson,
    pub idempotency: Vec<IdempotencyRow>,
    pub epsilon_checks: Vec<EpsilonCheck>,
    pub unit_checks: Vec<UnitCheck>,
    pub right_adjoint: RightAdjointReport,
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub max_eps_dim: usize,
    pub seed: u64,
}

fn catalog_rows(cat: &Catalog) -> Vec<CatalogRow> {
    let row = |label: &str, m: &Arc<Module>, projective| CatalogRow {
        label: label.to_string(),
        dim: m.dim(),
        dimension_vector: m.dimension_vector(),
        projective,
    };
    cat.entries
        .iter()
        .map(|e| row(&e.label, &e.module, false))
        .chain(cat.projectives.iter().map(|e| row(&e.label, &e.module, true)))
        .collect()
}

fn check_catalog(cat: &Catalog) -> Result<Vec<Check>> {
    let mut indec = Vec::new();
    let items: Vec<(&str, &Arc<Module>, bool)> = cat
        .entries
        .iter()
        .map(|e| (e.label.as_str(), &e.module, false))
        .chain(cat.projectives.iter().map(|e| (e.label.as_str(), &e.module, true)))
        .collect();
    let results: Vec<(usize, bool)> = items
        .par_iter()
        .map(|(_, m, _)| Ok((decompose(m)?.count(), is_projective(m))))
        .collect::<Result<_>>()?;
    for ((label, _, want_proj), (count, proj)) in items.iter().zip(results) {
        if count != 1 {
            indec.push(format!("{label}: {count} summands"));
        }
        if proj != *want_proj {
            indec.push(format!("{label}: projective = {proj}, expected {want_proj}"));
        }
    }
    let n = cat.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let distinct: Vec<String> = pairs
        .par_iter()
        .filter(|(i, j)| is_isomorphic(&cat.entries[*i].module, &cat.entries[*j].module).is_some())
        .map(|(i, j)| format!("{} ≅ {}", cat.entries[*i].label, cat.entries[*j].label))
        .collect();
    Ok(vec![Check::new("catalog.indecomposable", indec), Check::new("catalog.pairwise_distinct", distinct)])
}

fn expected_catalog(name: &str, cat: &Catalog) -> Option<Check> {
    let (labels, projs): (Vec<String>, Vec<&str>) = match name {
        "A" => ((1..=25).map(|i| format!("X{i}")).collect(), vec!["P1", "P2"]),
        "B" => ((1..=25).filter(|&i| i != 4).map(|i| format!("X{i}")).collect(), vec!["X4", "P2"]),
        "C3" => (fixtures("C3").ok()?.labels, vec!["X2", "X11"]),
        _ => return None,
    };
    let mut diff = Vec::new();
    if cat.labels() != labels {
        diff.push(format!("labels: expected {labels:?}, computed {:?}", cat.labels()));
    }
    let got: Vec<&str> = cat.projectives.iter().map(|e| e.label.as_str()).collect();
    if got != projs {
        diff.push(format!("projectives: expected {projs:?}, computed {got:?}"));
    }
    Some(Check::new("catalog.expected_labels", diff))
}

fn check_omega_closure(ctx: &Context) -> Check {
    let all = ctx.catalog.with_projectives();
    let diff = ctx
        .pres
        .par_iter()
        .zip(&ctx.catalog.entries)
        .filter_map(|(pres, e)| identify(&pres.omega, &all).err().map(|err| format!("Ω{}: {err}", e.label)))
        .collect();
    Check::new("omega.closure", diff)
}

fn check_rigidity(ctx: &Context, seed: u64) -> Result<Check> {
    let reports: Vec<_> = ctx
        .pres
        .par_iter()
        .map(|pres| cover_rigidity_check(pres, RIGIDITY_BUDGET, seed))
        .collect::<Result<_>>()?;
    let diff = reports
        .iter()
        .zip(&ctx.catalog.entries)
        .filter(|(r, _)| !r.passed())
        .map(|(r, e)| format!("{}: {} non-invertible endomorphisms fix the cover", e.label, r.non_invertible))
        .collect();
    Ok(Check::new("projectives.cover_rigidity", diff))
}

fn table_check(name: &str, cat: &Catalog, expected: &BTreeMap<String, BTreeMap<String, usize>>, got: &[(String, Vec<usize>)]) -> Result<Check> {
    let mut diff = Vec::new();
    for (label, v) in got {
        match expected.get(label) {
            None => diff.push(format!("{label}: no expected value")),
            Some(e) => {
                let e = cat.counts_from_labels(e)?;
                if &e != v {
                    diff.push(format!("{label}: expected {}, computed {}", cat.render(&e), cat.render(v)));
                }
            }
        }
    }
    Ok(Check::new(name, diff))
}

/// The two displayed values of the C5 idempotency failure.
const C5_EXPECTED: [(&str, &[&str]); 2] = [("X10", &["X10", "X21"]), ("X21", &["X21"])];

fn idempotency_checks(name: &str, cat: &Catalog, rows: &[IdempotencyRow]) -> Vec<Check> {
    if name == "C5" {
        let diff = C5_EXPECTED
            .iter()
            .filter_map(|(label, want)| {
                let row = rows.iter().find(|r| r.label == *label)?;
                let want: BTreeMap<String, usize> = want.iter().map(|l| (l.to_string(), 1)).collect();
                let want = cat.counts_from_labels(&want).ok()?;
                (want != row.omega_s).then(|| {
                    format!("(ΩS){label}: expected {}, computed {}", cat.render(&want), cat.render(&row.omega_s))
                })
            })
            .collect();
        return vec![Check::new("idempotency.c5_display", diff)];
    }
    let diff = rows
        .iter()
        .filter(|r| !r.idempotent)
        .map(|r| format!("{}: (ΩS) = {}, (ΩS)² = {}", r.label, cat.render(&r.omega_s), cat.render(&r.omega_s_squared)))
        .collect();
    vec![Check::new("idempotency.all_objects", diff)]
}

fn right_adjoint_checks(report: &RightAdjointReport) -> Result<Vec<Check>> {
    let fx = fixtures("C3")?;
    let matrix_diff = |name: &str, want: &[Vec<usize>], got: &[Vec<usize>]| {
        let diff = if want == got {
            vec![]
        } else {
            want.iter()
                .zip(got)
                .enumerate()
                .filter(|(_, (w, g))| w != g)
                .map(|(i, (w, g))| format!("row {}: expected {w:?}, computed {g:?}", i + 1))
                .collect()
        };
        Check::new(name, diff)
    };
    let mut checks = vec![
        matrix_diff("right_adjoint.h", &fx.h, &report.h.entries),
        matrix_diff("right_adjoint.h_prime", &fx.h_prime, &report.h_prime.entries),
        Check::new(
            "right_adjoint.infeasible",
            if report.feasible() { vec!["H·U = H′ has a nonnegative solution".into()] } else { vec![] },
        ),
    ];
    let col3 = report.solution.infeasible.iter().find(|s| s.index == 2);
    let want = crate::nonneg::CoveringArgument { witness_row: 0, candidates: vec![0, 2, 4], blocking_rows: vec![1, 1, 1] };
    let diff = match col3.and_then(|s| s.argument.as_ref()) {
        Some(a) if *a == want => vec![],
        Some(a) => vec![format!("column 3 argument: {a:?}")],
        None => vec!["column 3 is feasible or has no covering argument".into()],
    };
    checks.push(Check::new("right_adjoint.column3_argument", diff));
    Ok(checks)
}

/// Runs every reproduction check available for a built-in algebra.
pub fn verify_paper(name: &str, p: u32, opts: RunOptions) -> Result<PaperRun> {
    let alg = crate::algebra::builtin_algebra(name, p)?;
    let catalog = catalog_for(&alg)?;
    let mut checks = check_catalog(&catalog)?;
    checks.extend(expected_catalog(name, &catalog));
    let ctx = Context::new(catalog)?;
    checks.push(check_omega_closure(&ctx));
    checks.push(check_rigidity(&ctx, opts.seed)?);

    let search = find_left_adjoint(&ctx, opts.max_eps_dim)?;
    let failed = search.failed_labels();
    checks.push(Check::new(
        "left_adjoint.found",
        failed.iter().map(|l| format!("{l}: no candidate admits a universal ε")).collect(),
    ));
    let cert_json = certificate_json(&ctx, &search);
    let cert: Option<AdjointCertificate> = search.certificate();
    let mut summary = Vec::new();
    let mut idempotency = Vec::new();
    let mut epsilon_checks = Vec::new();
    let mut unit_checks = Vec::new();
    if let Some(cert) = &cert {
        let multi: Vec<String> = cert
            .entries
            .iter()
            .filter(|e| e.verifying_s_vectors.len() > 1)
            .map(|e| e.label.clone())
            .collect();
        if !multi.is_empty() {
            summary.push(format!("several S-vectors verify at {}", multi.join(", ")));
        }
        idempotency = omega_s_idempotency(&ctx, cert);
        checks.extend(idempotency_checks(name, &ctx.catalog, &idempotency));
        for r in idempotency.iter().filter(|r| !r.idempotent) {
            summary.push(format!(
                "(ΩS){} = {} but (ΩS)²{} = {}: not idempotent",
                r.label,
                ctx.catalog.render(&r.omega_s),
                r.label,
                ctx.catalog.render(&r.omega_s_squared)
            ));
        }
        if has_fixtures(name) && (name == "A" || name == "B") {
            let fx = fixtures(name)?;
            let s_rows: Vec<(String, Vec<usize>)> = cert.entries.iter().map(|e| (e.label.clone(), e.s_vector.clone())).collect();
            let os_rows: Vec<(String, Vec<usize>)> = cert.entries.iter().map(|e| (e.label.clone(), e.omega_s.clone())).collect();
            checks.push(table_check("left_adjoint.s_table", &ctx.catalog, &fx.s, &s_rows)?);
            checks.push(table_check("left_adjoint.omega_s_table", &ctx.catalog, &fx.omega_s, &os_rows)?);
            epsilon_checks = verify_paper_epsilons(&ctx, cert, &fx);
            checks.push(Check::new(
                "epsilon.fixtures",
                epsilon_checks
                    .iter()
                    .filter(|c| !c.passed())
                    .map(|c| format!("ε for {}: {}", c.label, describe_epsilon_failure(c)))
                    .collect(),
            ));
            let recipe = if name == "A" { UnitRecipe::ImageFactorisation } else { UnitRecipe::ResidueComposite };
            unit_checks = compare_unit_descriptions(&ctx, cert, recipe);
            checks.push(Check::new(
                "unit.description",
                unit_checks
                    .iter()
                    .filter(|c| !c.agrees)
                    .map(|c| format!("{}: described unit differs{}", c.label, c.error.as_ref().map(|e| format!(" ({e})")).unwrap_or_default()))
                    .collect(),
            ));
        }
    }
    let right_adjoint = right_adjoint_obstruction(&ctx);
    if name == "C3" {
        checks.extend(right_adjoint_checks(&right_adjoint)?);
    }
    summary.push(format!(
        "right adjoint: {}",
        if right_adjoint.feasible() { "not excluded (H·U = H′ feasible)" } else { "INFEASIBLE" }
    ));
    let passed = checks.iter().all(|c| c.passed);
    Ok(PaperRun {
        algebra: name.to_string(),
        prime: p,
        passed,
        checks,
        summary,
        catalog: catalog_rows(&ctx.catalog),
        left_adjoint: cert_json,
        idempotency,
        epsilon_checks,
        unit_checks,
        right_adjoint,
    })
}

fn describe_epsilon_failure(c: &EpsilonCheck) -> String {
    if let Some(e) = &c.error {
        return e.clone();
    }
    if !c.valid_map {
        return "not a module map".into();
    }
    if !c.s_matches {
        return "expected S differs from the computed one".into();
    }
    if !c.universal {
        return "no isomorphism of targets makes it agree with the computed unit".into();
    }
    let bad: Vec<usize> = c.bijective.iter().enumerate().filter(|(_, b)| !**b).map(|(j, _)| j + 1).collect();
    format!("composition with ε not bijective at catalog positions {bad:?}")
}

/// Config echoed into reports.
pub fn config_json(algebra: &str, p: u32, opts: RunOptions, extra: Value) -> Value {
    let mut v = json!({
        "algebra": algebra,
        "prime": p,
        "seed": opts.seed,
        "max_eps_dim": opts.max_eps_dim,
    });
    if let (Value::Object(base), Value::Object(more)) = (&mut v, extra) {
        base.extend(more);
    }
    v
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}

/// Error for algebras without a catalog.
pub fn require_triangle(alg: &Arc<crate::algebra::BasedAlgebra>) -> Result<Arc<crate::algebra::BasedAlgebra>> {
    crate::algebra::recognize_triangle(alg)
        .ok_or_else(|| Error::InvalidAlgebra("this command needs a triangle algebra Λ(n,m,k) with a catalog".into()))
}
