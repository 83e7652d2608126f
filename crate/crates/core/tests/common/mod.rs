#![allow(dead_code)]

use std::sync::Arc;

use heller::linalg::FpMatrix;
use heller::module::{hom_space, Module, ModuleMap};
use rand::Rng;

/// All coefficient vectors of length `d` over F_p, in lexicographic order.
pub fn all_vectors(p: u32, d: usize) -> impl Iterator<Item = Vec<u32>> {
    let total = (p as u64).pow(d as u32);
    (0..total).map(move |mut code| {
        let mut v = vec![0; d];
        for x in v.iter_mut().rev() {
            *x = (code % p as u64) as u32;
            code /= p as u64;
        }
        v
    })
}

/// Invertible element of `Hom(m, n)` by enumeration.
pub fn brute_iso(m: &Arc<Module>, n: &Arc<Module>) -> Option<FpMatrix> {
    if m.dim() != n.dim() {
        return None;
    }
    let h = hom_space(m, n);
    all_vectors(m.p(), h.dim()).map(|c| h.combine(&c)).find(|f| f.is_invertible())
}

/// A nontrivial idempotent of `End(m)` by enumeration.
pub fn brute_idempotent(m: &Arc<Module>) -> Option<FpMatrix> {
    let h = hom_space(m, m);
    let id = FpMatrix::identity(m.p(), m.dim());
    all_vectors(m.p(), h.dim())
        .map(|c| h.combine(&c))
        .find(|e| !e.is_zero() && *e != id && e.mul(e) == *e)
}

/// Indecomposable summands by exhaustive idempotent search.
pub fn brute_summands(m: &Arc<Module>) -> Vec<Arc<Module>> {
    if m.dim() == 0 {
        return vec![];
    }
    match brute_idempotent(m) {
        None => vec![m.clone()],
        Some(e) => {
            let id = FpMatrix::identity(m.p(), m.dim());
            let rest = id.sub(&e);
            let mut out = brute_summands(&m.submodule(&e.row_basis()).unwrap());
            out.extend(brute_summands(&m.submodule(&rest.row_basis()).unwrap()));
            out
        }
    }
}

/// Groups modules into isomorphism classes and returns the sorted class sizes
/// keyed by dimension vector.
pub fn iso_class_profile(mods: &[Arc<Module>]) -> Vec<(Vec<usize>, usize)> {
    let mut reps: Vec<(Arc<Module>, usize)> = Vec::new();
    for m in mods {
        match reps.iter_mut().find(|(r, _)| brute_iso(r, m).is_some()) {
            Some(slot) => slot.1 += 1,
            None => reps.push((m.clone(), 1)),
        }
    }
    let mut out: Vec<(Vec<usize>, usize)> = reps.into_iter().map(|(r, k)| (r.dimension_vector(), k)).collect();
    out.sort();
    out
}

/// Random automorphism, found by sampling the endomorphism ring.
pub fn random_automorphism<R: Rng>(m: &Arc<Module>, rng: &mut R) -> ModuleMap {
    let end = hom_space(m, m);
    for _ in 0..200 {
        let f = end.random_element(rng);
        if f.is_invertible() {
            return ModuleMap::new(m.clone(), m.clone(), f).unwrap();
        }
    }
    m.identity()
}
