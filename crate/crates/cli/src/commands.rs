use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use heller::adjoint::{
    find_left_adjoint, hom_dim_matrix, omega_s_idempotency, omega_twisted_matrix, right_adjoint_obstruction, Context,
    DimMatrix, Side,
};
use heller::algebra::{recognize_triangle, BasedAlgebra, BUILTIN_NAMES};
use heller::catalog::{catalog_for, Catalog};
use heller::input::{load_algebra, load_module, DEFAULT_PRIME};
use heller::krull_schmidt::{decompose_seeded, identify};
use heller::module::{random_module, Module};
use heller::projectives::syzygy;
use heller::reproduce::{certificate_json, config_json, envelope, sha256_hex, verify_paper, RunOptions};
use heller::stable::stable_hom;
use heller::{Error, Result};

use crate::output::{finish, matrix_rows, to_csv, Outcome, Rendered, Status};
use crate::{Cli, Command, Common, ModuleArgs, Twist};

struct Setup {
    alg: Arc<BasedAlgebra>,
    catalog: Option<Catalog>,
    inputs: BTreeMap<String, String>,
}

impl Setup {
    fn new(common: &Common) -> Result<Setup> {
        let alg = load_algebra(&common.algebra, common.prime)?;
        let alg = recognize_triangle(&alg).unwrap_or(alg);
        let catalog = match alg.triangle() {
            Some(t) if t.n <= 3 && t.m <= 3 => Some(catalog_for(&alg)?),
            _ => None,
        };
        let mut inputs = BTreeMap::new();
        note_input(&mut inputs, &common.algebra);
        Ok(Setup { alg, catalog, inputs })
    }

    fn catalog(&self) -> Result<&Catalog> {
        self.catalog
            .as_ref()
            .ok_or_else(|| Error::InvalidAlgebra("this command needs a triangle algebra Λ(n,m,k) with n, m ≤ 3".into()))
    }

    fn opts(common: &Common) -> RunOptions {
        RunOptions { max_eps_dim: common.max_eps_dim, seed: common.seed }
    }

    fn config(&self, common: &Common, extra: Value) -> Value {
        let mut extra = extra;
        if !self.inputs.is_empty() {
            extra["input_checksums"] = json!(self.inputs);
        }
        config_json(&common.algebra, self.alg.p(), Self::opts(common), extra)
    }
}

/// Records the checksum of an argument that names an existing file.
fn note_input(inputs: &mut BTreeMap<String, String>, spec: &str) {
    if BUILTIN_NAMES.contains(&spec) {
        return;
    }
    if let Ok(bytes) = std::fs::read(Path::new(spec)) {
        inputs.insert(spec.to_string(), sha256_hex(&bytes));
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let c = &cli.common;
    match &cli.command {
        Command::VerifyPaper => cmd_verify_paper(c),
        Command::Omega(m) => cmd_omega(c, m),
        Command::Sthom { matrix, twist, module } => cmd_sthom(c, *matrix, *twist, module),
        Command::Decompose(m) => cmd_decompose(c, m),
        Command::LeftAdjoint => cmd_left_adjoint(c),
        Command::RightAdjoint => cmd_right_adjoint(c),
    }
}

fn write_certificate(c: &Common, config: &Value, cert: &heller::reproduce::CertificateJson) -> Result<()> {
    if let Some(path) = &c.emit_certificate {
        let text = serde_json::to_string_pretty(&envelope("certificate", config.clone(), cert))?;
        std::fs::write(path, text + "\n")
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_verify_paper(c: &Common) -> Result<Outcome> {
    if !BUILTIN_NAMES.contains(&c.algebra.as_str()) {
        return Err(Error::UnknownAlgebra(format!(
            "{} (verify-paper runs on the built-in algebras {})",
            c.algebra,
            BUILTIN_NAMES.join(", ")
        )));
    }
    let p = c.prime.unwrap_or(DEFAULT_PRIME);
    let run = verify_paper(&c.algebra, p, Setup::opts(c))?;
    let config = config_json(&c.algebra, p, Setup::opts(c), json!({}));
    write_certificate(c, &config, &run.left_adjoint)?;

    let mut pretty = format!("verify-paper {} p={p}\n", run.algebra);
    let mut csv = vec![vec!["check".to_string(), "passed".into(), "diff".into()]];
    for ch in &run.checks {
        let _ = writeln!(pretty, "{} {}", if ch.passed { "PASS" } else { "FAIL" }, ch.name);
        for d in &ch.diff {
            let _ = writeln!(pretty, "    {d}");
        }
        csv.push(vec![ch.name.clone(), ch.passed.to_string(), ch.diff.join("; ")]);
    }
    for s in &run.summary {
        let _ = writeln!(pretty, "{s}");
    }
    let failed = run.checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(
        pretty,
        "{}",
        if failed == 0 {
            format!("all {} checks passed", run.checks.len())
        } else {
            format!("{failed} of {} checks failed", run.checks.len())
        }
    );
    let status = if run.passed { Status::Success } else { Status::Mismatch };
    let json = serde_json::to_value(envelope("verify-paper", config, &run))?;
    finish(c.format, Rendered { json, csv, pretty }, status)
}

/// The module named by `--module` or `--random`, with a display name.
fn module_arg(setup: &mut Setup, c: &Common, m: &ModuleArgs) -> Result<(Arc<Module>, String)> {
    if m.random {
        if m.max_dim == 0 {
            return Err(Error::InvalidModule("--max-dim must be at least 1".into()));
        }
        return Ok((random_module(&setup.alg, c.seed, m.max_dim)?, format!("random(seed {})", c.seed)));
    }
    let spec = m.module.as_deref().ok_or_else(|| Error::Parse("--module or --random is required".into()))?;
    note_input(&mut setup.inputs, spec);
    Ok((load_module(&setup.alg, setup.catalog.as_ref(), spec)?, spec.to_string()))
}

fn module_args_json(m: &ModuleArgs) -> Value {
    json!({ "module": m.module, "random": m.random, "max_dim": m.max_dim })
}

/// Identification over catalog plus projectives, as `(label, count)` pairs.
fn identify_over(setup: &Setup, m: &Arc<Module>) -> Result<Option<Vec<(String, usize)>>> {
    let Some(cat) = &setup.catalog else { return Ok(None) };
    let counts = identify(m, &cat.with_projectives())?;
    let labels = cat.entries.iter().chain(&cat.projectives).map(|e| e.label.clone());
    Ok(Some(labels.zip(counts).filter(|(_, k)| *k > 0).collect()))
}

fn render_sum(parts: &[(String, usize)]) -> String {
    let terms: Vec<String> = parts.iter().flat_map(|(l, k)| std::iter::repeat(l.clone()).take(*k)).collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn module_summary(m: &Arc<Module>) -> Value {
    json!({ "dim": m.dim(), "dimension_vector": m.dimension_vector() })
}

fn summands_json(m: &Arc<Module>, seed: u64) -> Result<(Value, Vec<Vec<usize>>)> {
    let d = decompose_seeded(m, seed)?;
    let dims: Vec<Vec<usize>> = d.expanded().iter().map(|s| s.dimension_vector()).collect();
    let json = d
        .expanded()
        .iter()
        .map(|s| json!({ "dim": s.dim(), "dimension_vector": s.dimension_vector(), "module": s.to_json() }))
        .collect();
    Ok((json, dims))
}

fn cmd_omega(c: &Common, args: &ModuleArgs) -> Result<Outcome> {
    let mut setup = Setup::new(c)?;
    let (m, name) = module_arg(&mut setup, c, args)?;
    let pres = syzygy(&m)?;
    let om = &pres.omega;
    let ident = identify_over(&setup, om)?;
    let (pretty, csv, summands) = match &ident {
        Some(parts) => {
            let mut csv = vec![vec!["label".to_string(), "count".into()]];
            csv.extend(parts.iter().map(|(l, k)| vec![l.clone(), k.to_string()]));
            (format!("Ω({name}) = {}\n", render_sum(parts)), csv, Value::Null)
        }
        None => {
            let (json, dims) = summands_json(om, c.seed)?;
            let mut csv = vec![vec!["summand".to_string(), "dimension_vector".into()]];
            csv.extend(dims.iter().enumerate().map(|(i, d)| vec![(i + 1).to_string(), format!("{d:?}")]));
            (format!("Ω({name}) has dimension {} with summands of dimension vectors {dims:?}\n", om.dim()), csv, json)
        }
    };
    let result = json!({
        "module": name,
        "source": module_summary(&m),
        "source_action": if args.random { json!(m.to_json()) } else { Value::Null },
        "projective_cover": module_summary(&pres.pmod),
        "omega": { "dim": om.dim(), "dimension_vector": om.dimension_vector(), "action": om.to_json() },
        "identification": ident.as_ref().map(|p| p.iter().cloned().collect::<BTreeMap<_, _>>()),
        "rendered": ident.as_ref().map(|p| render_sum(p)),
        "summands": summands,
    });
    let config = setup.config(c, module_args_json(args));
    let json = serde_json::to_value(envelope("omega", config, result))?;
    finish(c.format, Rendered { json, csv, pretty }, Status::Success)
}

fn cmd_decompose(c: &Common, args: &ModuleArgs) -> Result<Outcome> {
    let mut setup = Setup::new(c)?;
    let (m, name) = module_arg(&mut setup, c, args)?;
    let ident = identify_over(&setup, &m)?;
    let (summands, dims) = summands_json(&m, c.seed)?;
    let (pretty, csv) = match &ident {
        Some(parts) => {
            let mut csv = vec![vec!["label".to_string(), "count".into()]];
            csv.extend(parts.iter().map(|(l, k)| vec![l.clone(), k.to_string()]));
            (format!("{name} = {}\n", render_sum(parts)), csv)
        }
        None => {
            let mut csv = vec![vec!["summand".to_string(), "dimension_vector".into()]];
            csv.extend(dims.iter().enumerate().map(|(i, d)| vec![(i + 1).to_string(), format!("{d:?}")]));
            (format!("{name}: {} indecomposable summands, dimension vectors {dims:?}\n", dims.len()), csv)
        }
    };
    let result = json!({
        "module": name,
        "source": module_summary(&m),
        "source_action": if args.random { json!(m.to_json()) } else { Value::Null },
        "identification": ident.as_ref().map(|p| p.iter().cloned().collect::<BTreeMap<_, _>>()),
        "rendered": ident.as_ref().map(|p| render_sum(p)),
        "summands": if ident.is_some() { Value::Null } else { summands },
    });
    let config = setup.config(c, module_args_json(args));
    let json = serde_json::to_value(envelope("decompose", config, result))?;
    finish(c.format, Rendered { json, csv, pretty }, Status::Success)
}

fn matrix_text(dm: &DimMatrix) -> Result<String> {
    to_csv(&matrix_rows(&dm.labels, &dm.entries))
}

fn cmd_sthom(c: &Common, matrix: bool, twist: Option<Twist>, modules: &[String]) -> Result<Outcome> {
    let mut setup = Setup::new(c)?;
    if matrix {
        let ctx = Context::new(setup.catalog()?.clone())?;
        let (kind, dm) = match twist {
            None => ("H", hom_dim_matrix(&ctx)),
            Some(Twist::Left) => ("left", omega_twisted_matrix(&ctx, Side::Left)),
            Some(Twist::Right) => ("right", omega_twisted_matrix(&ctx, Side::Right)),
        };
        let text = matrix_text(&dm)?;
        let config = setup.config(c, json!({ "matrix": true, "twist": kind }));
        let json = serde_json::to_value(envelope("sthom", config, &dm))?;
        let csv = matrix_rows(&dm.labels, &dm.entries);
        return finish(c.format, Rendered { json, csv, pretty: text }, Status::Success);
    }
    let [a, b] = modules else {
        return Err(Error::Parse("sthom needs --matrix or exactly two --module values".into()));
    };
    for s in [a, b] {
        note_input(&mut setup.inputs, s);
    }
    let m = load_module(&setup.alg, setup.catalog.as_ref(), a)?;
    let n = load_module(&setup.alg, setup.catalog.as_ref(), b)?;
    let st = stable_hom(&m, &n)?;
    let (hd, sd, pd) = (st.hom.dim(), st.dim(), st.proj_dim());
    let pretty = format!("dim Hom({a}, {b}) = {hd}\ndim stHom({a}, {b}) = {sd}\nfactoring through projectives: {pd}\n");
    let csv = vec![
        vec!["source".to_string(), "target".into(), "hom_dim".into(), "stable_dim".into(), "projective_dim".into()],
        vec![a.clone(), b.clone(), hd.to_string(), sd.to_string(), pd.to_string()],
    ];
    let result = json!({
        "source": a,
        "target": b,
        "hom_dim": hd,
        "stable_dim": sd,
        "projective_dim": pd,
        "stable_basis": st.representatives().iter().map(|r| r.to_rows()).collect::<Vec<_>>(),
    });
    let config = setup.config(c, json!({ "module": modules }));
    let json = serde_json::to_value(envelope("sthom", config, result))?;
    finish(c.format, Rendered { json, csv, pretty }, Status::Success)
}

fn cmd_left_adjoint(c: &Common) -> Result<Outcome> {
    let setup = Setup::new(c)?;
    let ctx = Context::new(setup.catalog()?.clone())?;
    let search = find_left_adjoint(&ctx, c.max_eps_dim)?;
    let cert_json = certificate_json(&ctx, &search);
    let config = setup.config(c, json!({}));
    write_certificate(c, &config, &cert_json)?;
    let idem = search.certificate().map(|cert| omega_s_idempotency(&ctx, &cert)).unwrap_or_default();
    let cat = &ctx.catalog;
    let mut pretty = String::new();
    let mut csv = vec![vec!["label".to_string(), "S".into(), "OmegaS".into(), "OmegaS_squared".into(), "eps_stable_dim".into()]];
    for row in &cert_json.entries {
        let sq = idem.iter().find(|r| r.label == row.label).map(|r| cat.render(&r.omega_s_squared)).unwrap_or_default();
        let _ = writeln!(pretty, "{:<4} S = {:<16} ΩS = {:<16} (ΩS)² = {}", row.label, row.s, row.omega_s, sq);
        csv.push(vec![row.label.clone(), row.s.clone(), row.omega_s.clone(), sq, row.eps_stable_dim.to_string()]);
    }
    for f in &cert_json.failures {
        let _ = writeln!(pretty, "{:<4} no universal ε among {} candidates", f.label, f.tried.len());
        csv.push(vec![f.label.clone(), String::new(), String::new(), String::new(), String::new()]);
    }
    let _ = writeln!(
        pretty,
        "{}",
        if cert_json.found { "left adjoint: FOUND" } else { "left adjoint: NOT FOUND" }
    );
    let status = if cert_json.found { Status::Success } else { Status::Mismatch };
    let result = json!({ "certificate": cert_json, "idempotency": idem });
    let json = serde_json::to_value(envelope("left-adjoint", config, result))?;
    finish(c.format, Rendered { json, csv, pretty }, status)
}

fn cmd_right_adjoint(c: &Common) -> Result<Outcome> {
    let setup = Setup::new(c)?;
    let ctx = Context::new(setup.catalog()?.clone())?;
    let report = right_adjoint_obstruction(&ctx);
    let mut pretty = format!("H:\n{}H′:\n{}", matrix_text(&report.h)?, matrix_text(&report.h_prime)?);
    if report.feasible() {
        pretty.push_str("right adjoint: not excluded (H·U = H′ has a nonnegative solution; this is no proof of existence)\n");
    } else {
        pretty.push_str("right adjoint: INFEASIBLE\n");
        for line in &report.trace {
            let _ = writeln!(pretty, "  {line}");
        }
    }
    let mut csv = Vec::new();
    for (name, dm) in [("H", &report.h), ("H_prime", &report.h_prime)] {
        for mut row in matrix_rows(&dm.labels, &dm.entries) {
            row.insert(0, name.to_string());
            csv.push(row);
        }
    }
    let config = setup.config(c, json!({}));
    let json = serde_json::to_value(envelope("right-adjoint", config, &report))?;
    finish(c.format, Rendered { json, csv, pretty }, Status::Success)
}
