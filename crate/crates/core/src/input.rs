//! Resolving algebra and module arguments: built-in names, catalog labels
//! and JSON files.

use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use crate::algebra::{builtin_algebra, AlgebraJson, BasedAlgebra, BUILTIN_NAMES};
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::module::{module_from_pair, Module, ModuleActionJson, PairForm};

pub const DEFAULT_PRIME: u32 = 3;

/// `algebra` field of a module file: a built-in name or an inline algebra.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Name(String),
    Inline(AlgebraJson),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
enum ModuleBody {
    Pair(PairForm),
    Action(ModuleActionJson),
}

#[derive(Clone, Debug, Deserialize)]
struct ModuleFile {
    #[serde(default)]
    algebra: Option<AlgebraRef>,
    #[serde(flatten)]
    body: ModuleBody,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// A built-in algebra name or the path of an algebra JSON file. `prime`
/// defaults to 3 for built-ins and must agree with a file's `p` if given.
pub fn load_algebra(spec: &str, prime: Option<u32>) -> Result<Arc<BasedAlgebra>> {
    if BUILTIN_NAMES.contains(&spec) {
        return builtin_algebra(spec, prime.unwrap_or(DEFAULT_PRIME));
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Error::UnknownAlgebra(format!(
            "{spec} (expected one of {} or a JSON file)",
            BUILTIN_NAMES.join(", ")
        )));
    }
    let json: AlgebraJson = parse_json(&read(path)?, spec)?;
    if let Some(q) = prime {
        if q != json.p {
            return Err(Error::InvalidAlgebra(format!("--prime {q} disagrees with p = {} in {spec}", json.p)));
        }
    }
    BasedAlgebra::from_json(&json)
}

fn resolve_algebra_ref(r: &AlgebraRef, p: u32) -> Result<Arc<BasedAlgebra>> {
    match r {
        AlgebraRef::Name(n) => builtin_algebra(n, p),
        AlgebraRef::Inline(j) => BasedAlgebra::from_json(j),
    }
}

/// Parses a module file against `alg`. A file naming a different algebra
/// is rejected.
pub fn module_from_json_text(alg: &Arc<BasedAlgebra>, text: &str, origin: &str) -> Result<Arc<Module>> {
    let file: ModuleFile = parse_json(text, origin)?;
    if let Some(r) = &file.algebra {
        let declared = resolve_algebra_ref(r, alg.p())?;
        let same = declared.labels() == alg.labels()
            && (0..alg.dim()).all(|i| (0..alg.dim()).all(|j| declared.product(i, j) == alg.product(i, j)));
        if !same {
            return Err(Error::InvalidModule(format!("{origin} is a module over a different algebra")));
        }
    }
    match &file.body {
        ModuleBody::Pair(form) => module_from_pair(alg, form),
        ModuleBody::Action(a) => Module::from_json(alg, a),
    }
}

/// A catalog label (projectives included) or a module JSON path.
pub fn load_module(alg: &Arc<BasedAlgebra>, catalog: Option<&Catalog>, spec: &str) -> Result<Arc<Module>> {
    if let Some(cat) = catalog {
        if let Ok(e) = cat.get(spec) {
            return Ok(e.module.clone());
        }
    }
    let path = Path::new(spec);
    if path.exists() {
        return module_from_json_text(alg, &read(path)?, spec);
    }
    Err(Error::UnknownLabel(spec.to_string()))
}
