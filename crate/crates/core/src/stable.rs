//! Hom spaces modulo maps that factor through projective modules.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::krull_schmidt::{iso_via_decomposition, strip_projectives};
use crate::linalg::FpMatrix;
use crate::module::{hom_space, HomSpace, Module, ModuleMap};
use crate::projectives::projective_cover;

/// `Hom(M, N)` together with the subspace of maps factoring through a
/// projective, and reduced coordinates on the quotient.
#[derive(Clone, Debug)]
pub struct StableHomSpace {
    pub hom: HomSpace,
    /// Projective-factoring maps in Hom coordinates, reduced echelon form.
    proj: FpMatrix,
    proj_pivots: Vec<usize>,
    free: Vec<usize>,
}

impl StableHomSpace {
    pub fn source(&self) -> &Arc<Module> {
        &self.hom.source
    }

    pub fn target(&self) -> &Arc<Module> {
        &self.hom.target
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn proj_dim(&self) -> usize {
        self.proj.rows()
    }

    pub fn p(&self) -> u32 {
        self.hom.p()
    }

    /// Basis of the projective-factoring subspace, as matrices.
    pub fn proj_basis(&self) -> Vec<FpMatrix> {
        (0..self.proj.rows()).map(|r| self.hom.combine(self.proj.row(r))).collect()
    }

    /// Stable coordinates of a morphism; zero iff it factors through a
    /// projective.
    pub fn reduce(&self, f: &FpMatrix) -> Vec<u32> {
        let p = self.p();
        let mut c = self.hom.coordinates(f);
        for (r, &pc) in self.proj_pivots.iter().enumerate() {
            let k = c[pc];
            if k != 0 {
                for (x, &y) in c.iter_mut().zip(self.proj.row(r)) {
                    *x = (*x + (p - k) * y % p) % p;
                }
            }
        }
        self.free.iter().map(|&i| c[i]).collect()
    }

    /// Representative of the i-th stable basis class.
    pub fn representative(&self, i: usize) -> FpMatrix {
        self.hom.element(self.free[i])
    }

    pub fn representatives(&self) -> Vec<FpMatrix> {
        (0..self.dim()).map(|i| self.representative(i)).collect()
    }

    /// Representative of the class with the given stable coordinates.
    pub fn combine(&self, coeffs: &[u32]) -> FpMatrix {
        let mut full = vec![0; self.hom.dim()];
        for (&i, &c) in self.free.iter().zip(coeffs) {
            full[i] = c;
        }
        self.hom.combine(&full)
    }

    pub fn factors_through_projective(&self, f: &FpMatrix) -> bool {
        self.reduce(f).iter().all(|&x| x == 0)
    }
}

/// Stable Hom from a precomputed projective cover `PN ↠ N`. Any map
/// through a projective factors through the cover, so the subspace is the
/// image of `Hom(M, PN)` under composition with the cover.
pub fn stable_hom_via_cover(m: &Arc<Module>, pn: &Arc<Module>, cover: &ModuleMap) -> StableHomSpace {
    let n = &cover.target;
    let hom = hom_space(m, n);
    let p = m.p();
    let to_cover = hom_space(m, pn);
    let rows: Vec<FpMatrix> = (0..to_cover.dim())
        .map(|i| {
            let f = to_cover.element(i).mul(&cover.matrix);
            FpMatrix::row_vector(p, hom.coordinates(&f))
        })
        .collect();
    let r = FpMatrix::vstack_all(p, hom.dim(), &rows).rref();
    let proj = r.matrix.block(0, 0, r.rank, hom.dim());
    let free = (0..hom.dim()).filter(|c| !r.pivots.contains(c)).collect();
    StableHomSpace { hom, proj, proj_pivots: r.pivots, free }
}

pub fn stable_hom(m: &Arc<Module>, n: &Arc<Module>) -> Result<StableHomSpace> {
    let (pn, cover) = projective_cover(n)?;
    Ok(stable_hom_via_cover(m, &pn, &cover))
}

/// Isomorphic after removing projective summands.
pub fn is_stably_isomorphic(m: &Arc<Module>, n: &Arc<Module>) -> Result<bool> {
    let (m0, _, _) = strip_projectives(m)?;
    let (n0, _, _) = strip_projectives(n)?;
    Ok(iso_via_decomposition(&m0, &n0)?.is_some())
}

/// `[f]` is a monomorphism in the stable category: `[g] ↦ [g·f]` is
/// injective on `stHom(T, X)` for every `T` in a complete list of
/// indecomposables.
pub fn is_stable_mono(f: &ModuleMap, catalog: &[Arc<Module>]) -> Result<bool> {
    if catalog.is_empty() {
        return Err(Error::InvalidModule("stable monomorphism test needs a nonempty catalog".into()));
    }
    let (px, cx) = projective_cover(&f.source)?;
    let (py, cy) = projective_cover(&f.target)?;
    for t in catalog {
        let sx = stable_hom_via_cover(t, &px, &cx);
        if sx.dim() == 0 {
            continue;
        }
        let sy = stable_hom_via_cover(t, &py, &cy);
        let rows: Vec<FpMatrix> = sx
            .representatives()
            .iter()
            .map(|g| FpMatrix::row_vector(f.source.p(), sy.reduce(&g.mul(&f.matrix))))
            .collect();
        if FpMatrix::vstack_all(f.source.p(), sy.dim(), &rows).rank() < sx.dim() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A stable retraction `r` with `[f·r] = [id]`, if one exists.
pub fn is_coretraction(f: &ModuleMap) -> Result<Option<ModuleMap>> {
    let x = &f.source;
    let y = &f.target;
    let p = x.p();
    let end = stable_hom(x, x)?;
    let back = hom_space(y, x);
    let rows: Vec<FpMatrix> = (0..back.dim())
        .map(|i| FpMatrix::row_vector(p, end.reduce(&f.matrix.mul(&back.element(i)))))
        .collect();
    let system = FpMatrix::vstack_all(p, end.dim(), &rows);
    let target = FpMatrix::row_vector(p, end.reduce(&FpMatrix::identity(p, x.dim())));
    Ok(system.solve_row(&target)?.map(|c| {
        let r = back.combine(c.row(0));
        ModuleMap::new_unchecked(y.clone(), x.clone(), r)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{builtin_algebra, BasedAlgebra};
    use crate::module::{direct_sum, module_from_pair, PairForm};
    use crate::projectives::syzygy;

    fn x(alg: &Arc<BasedAlgebra>, e: &[usize], f: &[usize], a: &[&[&str]]) -> Arc<Module> {
        module_from_pair(alg, &PairForm::parse(e, f, a).unwrap()).unwrap()
    }

    #[test]
    fn projective_target_is_stably_zero() {
        let a = builtin_algebra("A", 3).unwrap();
        let p1 = x(&a, &[3], &[3], &[&["1"]]);
        let x5 = x(&a, &[2], &[3], &[&["pi"]]);
        assert_eq!(stable_hom(&x5, &p1).unwrap().dim(), 0);
        assert_eq!(stable_hom(&p1, &p1).unwrap().dim(), 0);
        let s = stable_hom(&x5, &x5).unwrap();
        assert_eq!(s.dim() + s.proj_dim(), s.hom.dim());
        assert!(s.dim() >= 1);
    }

    #[test]
    fn stable_endomorphisms_over_c3() {
        let c3 = builtin_algebra("C3", 3).unwrap();
        let y1 = x(&c3, &[1], &[1], &[&["1"]]);
        let y4 = x(&c3, &[2], &[], &[]);
        assert_eq!(stable_hom(&y1, &y1).unwrap().dim(), 1);
        assert_eq!(stable_hom(&y4, &y4).unwrap().dim(), 2);
    }

    #[test]
    fn stable_isomorphism() {
        let a = builtin_algebra("A", 2).unwrap();
        let x1 = x(&a, &[1], &[1], &[&["1"]]);
        let x2 = x(&a, &[2], &[2], &[&["1"]]);
        let p1 = x(&a, &[3], &[3], &[&["1"]]);
        let padded = direct_sum(&a, &[x1.clone(), p1]).module;
        assert!(is_stably_isomorphic(&x1, &padded).unwrap());
        assert!(!is_stably_isomorphic(&x1, &x2).unwrap());
        let x5 = x(&a, &[2], &[3], &[&["pi"]]);
        let x19 = x(&a, &[1], &[3], &[&["pi^2"]]);
        assert!(is_stably_isomorphic(&syzygy(&x5).unwrap().omega, &x19).unwrap());
    }

    #[test]
    fn monos_and_coretractions() {
        let a = builtin_algebra("A", 2).unwrap();
        let x1 = x(&a, &[1], &[1], &[&["1"]]);
        let x2 = x(&a, &[2], &[2], &[&["1"]]);
        let cat = vec![x1.clone(), x2.clone()];
        assert!(is_stable_mono(&x1.identity(), &cat).unwrap());
        assert!(!is_stable_mono(&ModuleMap::zero(&x1, &x1), &cat).unwrap());
        assert!(is_stable_mono(&x1.identity(), &[]).is_err());
        let r = is_coretraction(&x2.identity()).unwrap().unwrap();
        let end = stable_hom(&x2, &x2).unwrap();
        assert_eq!(end.reduce(&r.matrix), end.reduce(&FpMatrix::identity(2, x2.dim())));
        assert!(is_coretraction(&ModuleMap::zero(&x1, &x1)).unwrap().is_none());
    }
}
