//! Indecomposable modules of `Λ(3,3,3)` and its quotients, plus the
//! expected tables shipped as JSON data files.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{builtin_algebra, BasedAlgebra};
use crate::error::{Error, Result};
use crate::module::{is_isomorphic, module_from_pair, Module, PairForm, Residue};
use crate::projectives::indecomposable_projectives;

pub const CATALOG_A_JSON: &str = include_str!("../data/catalog_a.json");
pub const FIXTURES_A_JSON: &str = include_str!("../data/fixtures_a.json");
pub const FIXTURES_B_JSON: &str = include_str!("../data/fixtures_b.json");
pub const FIXTURES_C3_JSON: &str = include_str!("../data/fixtures_c3.json");

/// `(file name, contents)` of every shipped data file.
pub fn data_files() -> [(&'static str, &'static str); 4] {
    [
        ("catalog_a.json", CATALOG_A_JSON),
        ("fixtures_a.json", FIXTURES_A_JSON),
        ("fixtures_b.json", FIXTURES_B_JSON),
        ("fixtures_c3.json", FIXTURES_C3_JSON),
    ]
}

/// SHA-256 of each data file, keyed by file name.
pub fn data_checksums() -> BTreeMap<String, String> {
    data_files()
        .iter()
        .map(|(name, text)| (name.to_string(), hex::encode(Sha256::digest(text.as_bytes()))))
        .collect()
}

#[derive(Clone, Debug, Deserialize)]
struct CatalogFile {
    entries: Vec<LabeledForm>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LabeledForm {
    pub label: String,
    #[serde(flatten)]
    pub form: PairForm,
}

/// All 27 pair forms over `Λ(3,3,3)`: `P1`, `P2`, then `X1`…`X25`.
pub fn pair_forms_a() -> Vec<LabeledForm> {
    let file: CatalogFile = serde_json::from_str(CATALOG_A_JSON).expect("shipped catalog parses");
    file.entries
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub label: String,
    pub form: PairForm,
    pub module: Arc<Module>,
}

/// Nonprojective indecomposables of an algebra plus its indecomposable
/// projectives, with labels from the `Λ(3,3,3)` list.
#[derive(Clone, Debug)]
pub struct Catalog {
    pub algebra: Arc<BasedAlgebra>,
    pub entries: Vec<CatalogEntry>,
    pub projectives: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn labels(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.label.clone()).collect()
    }

    pub fn modules(&self) -> Vec<Arc<Module>> {
        self.entries.iter().map(|e| e.module.clone()).collect()
    }

    /// Entries followed by projectives; used where projective summands may
    /// occur.
    pub fn with_projectives(&self) -> Vec<Arc<Module>> {
        self.entries.iter().chain(&self.projectives).map(|e| e.module.clone()).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.label == label)
    }

    pub fn get(&self, label: &str) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .chain(&self.projectives)
            .find(|e| e.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Renders a multiplicity vector as `X2 + X19`, or `0`.
    pub fn render(&self, counts: &[usize]) -> String {
        let parts: Vec<String> = counts
            .iter()
            .zip(&self.entries)
            .flat_map(|(&k, e)| std::iter::repeat(e.label.clone()).take(k))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn counts_from_labels(&self, labels: &BTreeMap<String, usize>) -> Result<Vec<usize>> {
        let mut out = vec![0; self.len()];
        for (l, &k) in labels {
            let i = self.index_of(l).ok_or_else(|| Error::UnknownLabel(l.clone()))?;
            out[i] += k;
        }
        Ok(out)
    }
}

/// Catalog of any triangle algebra `Λ(n,m,k)` with `n, m ≤ 3`: the
/// `Λ(3,3,3)` pair forms that define modules over it, minus its
/// indecomposable projectives.
pub fn catalog_for(alg: &Arc<BasedAlgebra>) -> Result<Catalog> {
    let t = alg
        .triangle()
        .ok_or_else(|| Error::InvalidAlgebra("catalogs exist only for triangle algebras".into()))?;
    if t.n > 3 || t.m > 3 {
        return Err(Error::InvalidAlgebra(format!(
            "no catalog for Λ({},{},{}); only quotients of Λ(3,3,3) are covered",
            t.n, t.m, t.k
        )));
    }
    let projs = indecomposable_projectives(alg);
    let mut entries = Vec::new();
    let mut proj_entries: Vec<Option<CatalogEntry>> = vec![None; projs.len()];
    for lf in pair_forms_a() {
        let Ok(module) = module_from_pair(alg, &lf.form) else { continue };
        let entry = CatalogEntry { label: lf.label.clone(), form: lf.form.clone(), module: module.clone() };
        match projs.iter().position(|pr| is_isomorphic(pr, &module).is_some()) {
            Some(i) => {
                if proj_entries[i].is_none() {
                    proj_entries[i] = Some(entry);
                }
            }
            None => entries.push(entry),
        }
    }
    let projectives = proj_entries
        .into_iter()
        .zip(projs)
        .enumerate()
        .map(|(i, (e, module))| {
            e.unwrap_or_else(|| CatalogEntry {
                label: format!("P[{}]", alg.labels()[alg.idempotents()[i]]),
                form: PairForm::new(vec![], vec![], vec![]),
                module,
            })
        })
        .collect();
    Ok(Catalog { algebra: alg.clone(), entries, projectives })
}

/// The 25 nonprojective indecomposables `X1`…`X25` over `A`, with `P1`, `P2`.
pub fn catalog_a(p: u32) -> Result<Catalog> {
    catalog_for(&builtin_algebra("A", p)?)
}

/// Catalog of a built-in quotient `B`, `C1`…`C8`.
pub fn catalog_quotient(name: &str, p: u32) -> Result<Catalog> {
    catalog_for(&builtin_algebra(name, p)?)
}

/// A morphism given by its e-part and f-part matrices into a pair-form
/// target.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EpsilonFixture {
    pub target: PairForm,
    pub e: Vec<Vec<Residue>>,
    pub f: Vec<Vec<Residue>>,
}

/// Expected tables for one algebra.
#[derive(Clone, Debug, Deserialize)]
pub struct Fixtures {
    pub algebra: String,
    pub labels: Vec<String>,
    #[serde(rename = "S", default)]
    pub s: BTreeMap<String, BTreeMap<String, usize>>,
    #[serde(rename = "omega_S", default)]
    pub omega_s: BTreeMap<String, BTreeMap<String, usize>>,
    #[serde(default)]
    pub epsilon: BTreeMap<String, EpsilonFixture>,
    #[serde(rename = "H", default)]
    pub h: Vec<Vec<usize>>,
    #[serde(rename = "H_prime", default)]
    pub h_prime: Vec<Vec<usize>>,
    #[serde(default)]
    pub prime: Option<u32>,
}

pub fn fixtures(name: &str) -> Result<Fixtures> {
    let text = match name {
        "A" => FIXTURES_A_JSON,
        "B" => FIXTURES_B_JSON,
        "C3" => FIXTURES_C3_JSON,
        other => return Err(Error::UnknownAlgebra(format!("no fixtures for `{other}`"))),
    };
    Ok(serde_json::from_str(text)?)
}

pub fn has_fixtures(name: &str) -> bool {
    matches!(name, "A" | "B" | "C3")
}
