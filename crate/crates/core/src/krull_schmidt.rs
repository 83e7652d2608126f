//! Decomposition into indecomposable summands.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{poly, FpMatrix};
use crate::module::{direct_sum, hom_space, iso_between_indecomposables, seeded_rng, HomSpace, Module, ModuleMap};
use crate::projectives::is_projective;

/// Random endomorphisms tried before exhaustive enumeration.
pub const SPLIT_RANDOM_ATTEMPTS: usize = 64;

/// Exhaustive idempotent search is used while `p^dim End` stays below this.
pub const SPLIT_EXHAUSTIVE_LIMIT: u64 = 1 << 16;

#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub hom: HomSpace,
    /// `table[i][j]` holds the coordinates of `b_i·b_j`.
    pub table: Vec<Vec<Vec<u32>>>,
}

pub fn end_algebra(m: &Arc<Module>) -> EndAlgebra {
    let hom = hom_space(m, m);
    let basis: Vec<FpMatrix> = (0..hom.dim()).map(|i| hom.element(i)).collect();
    let table = basis
        .iter()
        .map(|a| basis.iter().map(|b| hom.coordinates(&a.mul(b))).collect())
        .collect();
    EndAlgebra { hom, table }
}

/// Evidence that `End(M)` is local: every basis element is `λ·id` plus a
/// nilpotent, and those nilpotent parts span a nilpotent ideal of
/// codimension one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalityCertificate {
    pub end_dim: usize,
    pub eigenvalues: Vec<u32>,
    pub nilpotency_index: usize,
}

#[derive(Clone, Debug)]
pub enum Splitting {
    /// `M = image ⊕ kernel` (row bases in M's coordinates).
    Split { image: FpMatrix, kernel: FpMatrix },
    Local(LocalityCertificate),
}

/// Fitting splitting along a factor of the characteristic polynomial.
fn split_by(phi: &FpMatrix) -> Option<(FpMatrix, FpMatrix)> {
    let p = phi.p();
    let n = phi.rows();
    let cp = phi.charpoly();
    let roots = poly::roots(&cp, p);
    let g = match roots.first() {
        Some(&(l, mult)) if mult < n => vec![(p - l) % p, 1],
        Some(_) => return None,
        None => {
            let groups = poly::distinct_degree(&poly::radical_part(&cp, p), p);
            if groups.len() < 2 {
                return None;
            }
            groups[0].1.clone()
        }
    };
    let psi = phi.eval_poly(&g).pow(n);
    let r = psi.rank();
    (r > 0 && r < n).then(|| (psi.row_basis(), psi.left_kernel()))
}

fn locality_certificate(m: &Module, end: &HomSpace) -> Option<LocalityCertificate> {
    let p = m.p();
    let n = m.dim();
    let id = FpMatrix::identity(p, n);
    let mut eigenvalues = Vec::new();
    let mut nil = Vec::new();
    for i in 0..end.dim() {
        let phi = end.element(i);
        let roots = poly::roots(&phi.charpoly(), p);
        match roots.as_slice() {
            [(l, mult)] if *mult == n => {
                eigenvalues.push(*l);
                nil.push(phi.sub(&id.scale(*l)).flatten());
            }
            _ => return None,
        }
    }
    let span = FpMatrix::vstack_all(p, n * n, &nil).row_basis();
    if span.rows() + 1 != end.dim() {
        return None;
    }
    let elems: Vec<FpMatrix> = (0..span.rows()).map(|r| span.row_matrix(r).reshape(n, n)).collect();
    // closure N·N ⊆ N, then powers of N until zero
    let mut power = elems.clone();
    let mut index = 1;
    while !power.is_empty() {
        if index > n {
            return None;
        }
        let products: Vec<FpMatrix> =
            power.iter().flat_map(|a| elems.iter().map(move |b| a.mul(b).flatten())).collect();
        let next = FpMatrix::vstack_all(p, n * n, &products).row_basis();
        if index == 1 && span.vstack(&next).rank() != span.rows() {
            return None;
        }
        power = (0..next.rows()).map(|r| next.row_matrix(r).reshape(n, n)).collect();
        index += 1;
    }
    Some(LocalityCertificate { end_dim: end.dim(), eigenvalues, nilpotency_index: index })
}

/// Either a splitting of `M` or a certificate that `End(M)` is local.
pub fn split_or_certify(m: &Arc<Module>, seed: u64) -> Result<Splitting> {
    let end = hom_space(m, m);
    let split = |phi: &FpMatrix| split_by(phi).map(|(image, kernel)| Splitting::Split { image, kernel });
    for i in 0..end.dim() {
        if let Some(s) = split(&end.element(i)) {
            return Ok(s);
        }
    }
    if let Some(cert) = locality_certificate(m, &end) {
        return Ok(Splitting::Local(cert));
    }
    let mut rng = seeded_rng(&[m.dim() as u64, seed]);
    for _ in 0..SPLIT_RANDOM_ATTEMPTS {
        if let Some(s) = split(&end.random_element(&mut rng)) {
            return Ok(s);
        }
    }
    let p = m.p() as u64;
    if (p as f64).powi(end.dim() as i32) <= SPLIT_EXHAUSTIVE_LIMIT as f64 {
        let total = p.pow(end.dim() as u32);
        for code in 0..total {
            let coeffs: Vec<u32> = (0..end.dim()).map(|i| ((code / p.pow(i as u32)) % p) as u32).collect();
            if let Some(s) = split(&end.combine(&coeffs)) {
                return Ok(s);
            }
        }
    }
    Err(Error::SearchLimit(format!(
        "no splitting and no locality certificate for a module of dimension {} (dim End = {})",
        m.dim(),
        end.dim()
    )))
}

/// A nontrivial idempotent of `End(M)`, or `None` when `End(M)` is local.
pub fn find_idempotent(m: &Arc<Module>, seed: u64) -> Result<Option<ModuleMap>> {
    Ok(match split_or_certify(m, seed)? {
        Splitting::Local(_) => None,
        Splitting::Split { image, kernel } => {
            let t = image.vstack(&kernel);
            let t_inv = t.inverse().ok_or_else(|| Error::Internal("Fitting pair is not a complement".into()))?;
            let mut d = FpMatrix::zeros(m.p(), m.dim(), m.dim());
            for i in 0..image.rows() {
                d.set(i, i, 1);
            }
            Some(ModuleMap::new_unchecked(m.clone(), m.clone(), t_inv.mul(&d).mul(&t)))
        }
    })
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub module: Arc<Module>,
    /// Pairwise non-isomorphic indecomposables with multiplicities.
    pub summands: Vec<(Arc<Module>, usize)>,
    pub certificates: Vec<LocalityCertificate>,
    /// Isomorphism from `⊕ summands` (each repeated by multiplicity, in
    /// order) onto `module`.
    pub witness: ModuleMap,
}

impl Decomposition {
    pub fn expanded(&self) -> Vec<Arc<Module>> {
        self.summands
            .iter()
            .flat_map(|(m, k)| std::iter::repeat(m.clone()).take(*k))
            .collect()
    }

    pub fn count(&self) -> usize {
        self.summands.iter().map(|(_, k)| k).sum()
    }
}

/// Leaves of the splitting tree with their inclusions into the root.
fn split_leaves(m: &Arc<Module>, seed: u64, out: &mut Vec<(Arc<Module>, FpMatrix, LocalityCertificate)>) -> Result<()> {
    if m.dim() == 0 {
        return Ok(());
    }
    match split_or_certify(m, seed)? {
        Splitting::Local(cert) => out.push((m.clone(), FpMatrix::identity(m.p(), m.dim()), cert)),
        Splitting::Split { image, kernel } => {
            for basis in [image, kernel] {
                let sub = m.submodule(&basis)?;
                let start = out.len();
                split_leaves(&sub, seed, out)?;
                for leaf in &mut out[start..] {
                    leaf.1 = leaf.1.mul(&basis);
                }
            }
        }
    }
    Ok(())
}

pub fn decompose(m: &Arc<Module>) -> Result<Decomposition> {
    decompose_seeded(m, 0)
}

pub fn decompose_seeded(m: &Arc<Module>, seed: u64) -> Result<Decomposition> {
    let alg = m.algebra();
    let p = m.p();
    let mut leaves = Vec::new();
    split_leaves(m, seed, &mut leaves)?;
    // group by isomorphism class: (representative, certificate, [(iso rep→leaf)·incl])
    let mut groups: Vec<(Arc<Module>, LocalityCertificate, Vec<FpMatrix>)> = Vec::new();
    for (leaf, incl, cert) in leaves {
        let found = groups
            .iter_mut()
            .find_map(|g| iso_between_indecomposables(&g.0, &leaf).map(|iso| (g, iso)));
        match found {
            Some((g, iso)) => g.2.push(iso.matrix.mul(&incl)),
            None => groups.push((leaf, cert, vec![incl])),
        }
    }
    groups.sort_by(|a, b| a.0.sort_key().cmp(&b.0.sort_key()));
    let mut rows = Vec::new();
    let mut summands = Vec::new();
    let mut certificates = Vec::new();
    for (rep, cert, incls) in groups {
        summands.push((rep, incls.len()));
        certificates.push(cert);
        rows.extend(incls);
    }
    let witness_matrix = FpMatrix::vstack_all(p, m.dim(), &rows);
    let expanded: Vec<Arc<Module>> = summands
        .iter()
        .flat_map(|(s, k)| std::iter::repeat(s.clone()).take(*k))
        .collect();
    let sum = direct_sum(alg, &expanded);
    let witness = ModuleMap::new_unchecked(sum.module, m.clone(), witness_matrix);
    if !witness.is_iso() {
        return Err(Error::Internal("decomposition witness is not invertible".into()));
    }
    Ok(Decomposition { module: m.clone(), summands, certificates, witness })
}

/// `M = core ⊕ projective`: the core with its inclusion and projection.
pub fn strip_projectives(m: &Arc<Module>) -> Result<(Arc<Module>, ModuleMap, ModuleMap)> {
    let d = decompose(m)?;
    let inv = d.witness.matrix.inverse().ok_or_else(|| Error::Internal("witness not invertible".into()))?;
    let mut keep_rows = Vec::new();
    let mut parts = Vec::new();
    let mut offset = 0;
    for s in d.expanded() {
        if !is_projective(&s) {
            keep_rows.extend(offset..offset + s.dim());
            parts.push(s.clone());
        }
        offset += s.dim();
    }
    let core = direct_sum(m.algebra(), &parts).module;
    let incl = d.witness.matrix.select_rows(&keep_rows);
    let proj = inv.select_cols(&keep_rows);
    Ok((
        core.clone(),
        ModuleMap::new_unchecked(core.clone(), m.clone(), incl),
        ModuleMap::new_unchecked(m.clone(), core, proj),
    ))
}

/// Conclusive isomorphism test by comparing decompositions.
pub fn iso_via_decomposition(m: &Arc<Module>, n: &Arc<Module>) -> Result<Option<ModuleMap>> {
    if m.dim() != n.dim() || m.dimension_vector() != n.dimension_vector() {
        return Ok(None);
    }
    let dm = decompose(m)?;
    let dn = decompose(n)?;
    let p = m.p();
    let src = dm.expanded();
    let dst = dn.expanded();
    if src.len() != dst.len() {
        return Ok(None);
    }
    // match each group of m with an unused group of n
    let offsets = |v: &[Arc<Module>]| {
        let mut acc = 0;
        v.iter()
            .map(|s| {
                let o = acc;
                acc += s.dim();
                o
            })
            .collect::<Vec<_>>()
    };
    let (so, to) = (offsets(&src), offsets(&dst));
    let mut used = vec![false; dst.len()];
    let mut g = FpMatrix::zeros(p, m.dim(), n.dim());
    for (i, s) in src.iter().enumerate() {
        let mut matched = false;
        for (j, t) in dst.iter().enumerate() {
            if used[j] {
                continue;
            }
            if let Some(iso) = iso_between_indecomposables(s, t) {
                g.set_block(so[i], to[j], &iso.matrix);
                used[j] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(None);
        }
    }
    let inv = dm.witness.matrix.inverse().ok_or_else(|| Error::Internal("witness not invertible".into()))?;
    let iso = inv.mul(&g).mul(&dn.witness.matrix);
    Ok(Some(ModuleMap::new_unchecked(m.clone(), n.clone(), iso)))
}

/// `M ≅ ⊕_k X_k^{counts[k]}` over a catalog.
#[derive(Clone, Debug)]
pub struct Identification {
    pub counts: Vec<usize>,
    /// Catalog index of each summand in `witness`'s source, ascending.
    pub order: Vec<usize>,
    /// Isomorphism `⊕_t X_{order[t]} → M`.
    pub witness: ModuleMap,
}

pub fn identify_detailed(m: &Arc<Module>, catalog: &[Arc<Module>]) -> Result<Identification> {
    let d = decompose(m)?;
    let p = m.p();
    let mut pieces: Vec<(usize, FpMatrix)> = Vec::new();
    let mut offset = 0;
    for s in d.expanded() {
        let k = catalog
            .iter()
            .position(|c| c.dimension_vector() == s.dimension_vector() && iso_between_indecomposables(c, &s).is_some())
            .ok_or_else(|| Error::UnknownSummand {
                dim: s.dim(),
                serialized: serde_json::to_string(&s.to_json()).unwrap_or_default(),
            })?;
        let iso = iso_between_indecomposables(&catalog[k], &s).expect("checked above");
        let rows = d.witness.matrix.block(offset, 0, s.dim(), m.dim());
        pieces.push((k, iso.matrix.mul(&rows)));
        offset += s.dim();
    }
    pieces.sort_by_key(|(k, _)| *k);
    let mut counts = vec![0; catalog.len()];
    for (k, _) in &pieces {
        counts[*k] += 1;
    }
    let order: Vec<usize> = pieces.iter().map(|(k, _)| *k).collect();
    let parts: Vec<Arc<Module>> = order.iter().map(|&k| catalog[k].clone()).collect();
    let rows: Vec<FpMatrix> = pieces.into_iter().map(|(_, r)| r).collect();
    let sum = direct_sum(m.algebra(), &parts);
    let witness = ModuleMap::new_unchecked(sum.module, m.clone(), FpMatrix::vstack_all(p, m.dim(), &rows));
    Ok(Identification { counts, order, witness })
}

/// Multiplicities of catalog entries in `M`.
pub fn identify(m: &Arc<Module>, catalog: &[Arc<Module>]) -> Result<Vec<usize>> {
    Ok(identify_detailed(m, catalog)?.counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{builtin_algebra, BasedAlgebra};
    use crate::module::{module_from_pair, PairForm};

    fn x(alg: &Arc<BasedAlgebra>, e: &[usize], f: &[usize], a: &[&[&str]]) -> Arc<Module> {
        module_from_pair(alg, &PairForm::parse(e, f, a).unwrap()).unwrap()
    }

    #[test]
    fn end_algebra_shapes() {
        let a = builtin_algebra("A", 3).unwrap();
        let x21 = x(&a, &[1], &[], &[]);
        let e = end_algebra(&x21);
        assert_eq!(e.hom.dim(), 1);
        let p1 = x(&a, &[3], &[3], &[&["1"]]);
        let e = end_algebra(&p1);
        assert_eq!(e.hom.dim(), 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(e.table[i][j], e.table[j][i]);
            }
        }
        let x1 = x(&a, &[1], &[1], &[&["1"]]);
        let twice = direct_sum(&a, &[x1.clone(), x1.clone()]).module;
        assert_eq!(end_algebra(&twice).hom.dim(), 4 * end_algebra(&x1).hom.dim());
    }

    #[test]
    fn idempotents() {
        let a = builtin_algebra("A", 2).unwrap();
        let x1 = x(&a, &[1], &[1], &[&["1"]]);
        let x2 = x(&a, &[2], &[2], &[&["1"]]);
        let p1 = x(&a, &[3], &[3], &[&["1"]]);
        assert!(find_idempotent(&x1, 0).unwrap().is_none());
        assert!(find_idempotent(&p1, 0).unwrap().is_none());
        let sum = direct_sum(&a, &[x1, x2]).module;
        let e = find_idempotent(&sum, 0).unwrap().unwrap();
        e.check().unwrap();
        assert_eq!(e.matrix.mul(&e.matrix), e.matrix);
        assert!(!e.matrix.is_zero() && !e.matrix.is_identity());
    }

    #[test]
    fn decompose_constructed_sum() {
        let a = builtin_algebra("A", 3).unwrap();
        let x1 = x(&a, &[1], &[1], &[&["1"]]);
        let p2 = x(&a, &[], &[3], &[]);
        let sum = direct_sum(&a, &[x1.clone(), p2.clone(), x1.clone()]).module;
        let d = decompose(&sum).unwrap();
        d.witness.check().unwrap();
        let cat = [x1, p2];
        assert_eq!(identify(&sum, &cat).unwrap(), vec![2, 1]);
        assert!(decompose(&Module::zero(&a)).unwrap().summands.is_empty());
        assert_eq!(identify(&Module::zero(&a), &cat).unwrap(), vec![0, 0]);
    }

    #[test]
    fn unknown_summand_is_reported() {
        let a = builtin_algebra("A", 3).unwrap();
        let x1 = x(&a, &[1], &[1], &[&["1"]]);
        let p1 = x(&a, &[3], &[3], &[&["1"]]);
        match identify(&p1, &[x1]) {
            Err(Error::UnknownSummand { dim, .. }) => assert_eq!(dim, 6),
            other => panic!("expected unknown summand, got {other:?}"),
        }
    }

    #[test]
    fn identify_witness_is_an_isomorphism() {
        let a = builtin_algebra("A", 3).unwrap();
        let x2 = x(&a, &[2], &[2], &[&["1"]]);
        let x19 = x(&a, &[1], &[3], &[&["pi^2"]]);
        let sum = direct_sum(&a, &[x19.clone(), x2.clone()]).module;
        let id = identify_detailed(&sum, &[x2, x19]).unwrap();
        assert_eq!(id.counts, vec![1, 1]);
        assert_eq!(id.order, vec![0, 1]);
        id.witness.check().unwrap();
        assert!(id.witness.is_iso());
    }

    #[test]
    fn strip_and_compare() {
        let a = builtin_algebra("A", 2).unwrap();
        let x5 = x(&a, &[2], &[3], &[&["pi"]]);
        let p1 = x(&a, &[3], &[3], &[&["1"]]);
        let sum = direct_sum(&a, &[p1, x5.clone()]).module;
        let (core, incl, proj) = strip_projectives(&sum).unwrap();
        assert_eq!(core.dim(), x5.dim());
        incl.check().unwrap();
        proj.check().unwrap();
        assert!(incl.then(&proj).matrix.is_identity());
        assert!(iso_via_decomposition(&core, &x5).unwrap().is_some());
    }
}
