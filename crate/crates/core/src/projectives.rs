//! Projective covers and the syzygy operator.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::algebra::BasedAlgebra;
use crate::error::{Error, Result};
use crate::linalg::FpMatrix;
use crate::module::{direct_sum, hom_space, seeded_rng, Module, ModuleMap};

/// The right ideal `e_i·Λ` with the right regular action.
pub fn indecomposable_projective(alg: &Arc<BasedAlgebra>, i: usize) -> Arc<Module> {
    let basis = &alg.projective_bases()[i];
    let action = (0..alg.dim())
        .map(|b| {
            let img = basis.mul(alg.right_regular(b));
            basis
                .solve_row(&img)
                .expect("shapes agree")
                .expect("right ideals are closed under right multiplication")
        })
        .collect();
    Arc::new(Module::new_unchecked(alg.clone(), action).expect("right regular action"))
}

pub fn indecomposable_projectives(alg: &Arc<BasedAlgebra>) -> Vec<Arc<Module>> {
    (0..alg.idempotents().len()).map(|i| indecomposable_projective(alg, i)).collect()
}

/// Sends the generator `e_i` of `e_i·Λ` to `z ∈ M·e_i`.
fn map_from_generator(pi: &Module, m: &Module, idem: usize, z: &[u32]) -> FpMatrix {
    let alg = m.algebra();
    let p = m.p();
    let basis = &alg.projective_bases()[idem];
    let zrow = FpMatrix::row_vector(p, z.to_vec());
    let images: Vec<FpMatrix> = (0..alg.dim()).map(|b| zrow.mul(m.action(b))).collect();
    let mut out = FpMatrix::zeros(p, pi.dim(), m.dim());
    for r in 0..basis.rows() {
        let mut acc = FpMatrix::zeros(p, 1, m.dim());
        for (b, &c) in basis.row(r).iter().enumerate() {
            if c != 0 {
                acc = acc.add_scaled(c, &images[b]);
            }
        }
        out.set_block(r, 0, &acc);
    }
    out
}

/// `P ↠ X ↢ ΩX`: a projective presentation together with its kernel.
#[derive(Clone, Debug)]
pub struct SyzygyPresentation {
    pub base: Arc<Module>,
    pub pmod: Arc<Module>,
    pub cover: ModuleMap,
    pub omega: Arc<Module>,
    pub incl: ModuleMap,
    /// `(idempotent index, generator in base)` for each summand of `pmod`.
    generators: Vec<(usize, Vec<u32>)>,
}

/// Generators of `M` modulo `M·rad`, one idempotent block at a time.
fn top_generators(m: &Module) -> Vec<(usize, Vec<u32>)> {
    let rad = m.radical_subspace();
    let alg = m.algebra();
    let mut gens = Vec::new();
    for (i, block) in m.blocks().iter().enumerate() {
        let e = m.action(alg.idempotents()[i]);
        let mut span = rad.mul(e).row_basis();
        for r in 0..block.basis.rows() {
            let v = block.basis.row_matrix(r);
            let grown = span.vstack(&v);
            if grown.rank() > span.rows() {
                span = grown;
                gens.push((i, v.row(0).to_vec()));
            }
        }
    }
    gens
}

/// Minimal projective presentation built from a generating set.
fn presentation_from_generators(m: &Arc<Module>, gens: Vec<(usize, Vec<u32>)>) -> Result<SyzygyPresentation> {
    let alg = m.algebra();
    let p = m.p();
    let parts: Vec<Arc<Module>> = gens.iter().map(|(i, _)| indecomposable_projective(alg, *i)).collect();
    let sum = direct_sum(alg, &parts);
    let blocks: Vec<FpMatrix> = gens
        .iter()
        .zip(&parts)
        .map(|((i, z), pi)| map_from_generator(pi, m, *i, z))
        .collect();
    let cover_matrix = FpMatrix::vstack_all(p, m.dim(), &blocks);
    let cover = ModuleMap::new_unchecked(sum.module.clone(), m.clone(), cover_matrix);
    if cover.matrix.rank() != m.dim() {
        return Err(Error::Internal("projective cover is not surjective".into()));
    }
    let (omega, incl) = cover.kernel()?;
    Ok(SyzygyPresentation { base: m.clone(), pmod: sum.module, cover, omega, incl, generators: gens })
}

/// Projective cover `P ↠ M`; the kernel lies in `P·rad`.
pub fn projective_cover(m: &Arc<Module>) -> Result<(Arc<Module>, ModuleMap)> {
    let pres = presentation_from_generators(m, top_generators(m))?;
    Ok((pres.pmod, pres.cover))
}

/// `ΩM` via the projective cover.
pub fn syzygy(m: &Arc<Module>) -> Result<SyzygyPresentation> {
    presentation_from_generators(m, top_generators(m))
}

pub fn is_projective(m: &Arc<Module>) -> bool {
    let alg = m.algebra();
    let pdim: usize = top_generators(m).iter().map(|(i, _)| alg.projective_bases()[*i].rows()).sum();
    pdim == m.dim()
}

impl SyzygyPresentation {
    /// Presentation through a non-minimal cover `Q ⊕ P ↠ M`, where each `Q`
    /// summand maps by a seeded random element of `M·e_i`. The kernel is
    /// `ΩM` plus a projective summand.
    pub fn padded(m: &Arc<Module>, extra: &[usize], seed: u64) -> Result<SyzygyPresentation> {
        let mut gens = top_generators(m);
        let mut rng = seeded_rng(&[seed, m.dim() as u64]);
        for &i in extra {
            let block = &m.blocks()[i];
            let coeffs: Vec<u32> = (0..block.basis.rows()).map(|_| rng.gen_range(0..m.p())).collect();
            let z = FpMatrix::row_vector(m.p(), coeffs).mul(&block.basis);
            let z = if block.basis.rows() == 0 { vec![0; m.dim()] } else { z.row(0).to_vec() };
            gens.push((i, z));
        }
        presentation_from_generators(m, gens)
    }

    /// Direct sum of presentations, a presentation of the direct sum.
    pub fn direct_sum(alg: &Arc<BasedAlgebra>, parts: &[&SyzygyPresentation]) -> SyzygyPresentation {
        let base = direct_sum(alg, &parts.iter().map(|s| s.base.clone()).collect::<Vec<_>>());
        let pmod = direct_sum(alg, &parts.iter().map(|s| s.pmod.clone()).collect::<Vec<_>>());
        let omega = direct_sum(alg, &parts.iter().map(|s| s.omega.clone()).collect::<Vec<_>>());
        let cover = crate::module::direct_sum_of_maps(
            &pmod,
            &base,
            &parts.iter().map(|s| s.cover.matrix.clone()).collect::<Vec<_>>(),
        );
        let incl = crate::module::direct_sum_of_maps(
            &omega,
            &pmod,
            &parts.iter().map(|s| s.incl.matrix.clone()).collect::<Vec<_>>(),
        );
        let mut generators = Vec::new();
        for (s, inj) in parts.iter().zip(&base.injections) {
            for (i, z) in &s.generators {
                let v = FpMatrix::row_vector(alg.p(), z.clone()).mul(&inj.matrix);
                generators.push((*i, v.row(0).to_vec()));
            }
        }
        SyzygyPresentation {
            base: base.module,
            pmod: pmod.module,
            cover,
            omega: omega.module,
            incl,
            generators,
        }
    }

    pub fn generators(&self) -> &[(usize, Vec<u32>)] {
        &self.generators
    }

    /// Checks exactness and smallness of the presentation.
    pub fn check(&self) -> Result<()> {
        self.cover.check()?;
        self.incl.check()?;
        if !self.cover.is_surjective() {
            return Err(Error::Internal("cover not surjective".into()));
        }
        if !self.incl.is_injective() {
            return Err(Error::Internal("inclusion not injective".into()));
        }
        if !self.incl.matrix.mul(&self.cover.matrix).is_zero()
            || self.incl.matrix.rows() + self.base.dim() != self.pmod.dim()
        {
            return Err(Error::Internal("image of inclusion is not the kernel".into()));
        }
        Ok(())
    }

    /// `ker(cover) ⊆ P·rad`.
    pub fn is_small(&self) -> bool {
        let rad = self.pmod.radical_subspace();
        rad.vstack(&self.incl.matrix).rank() == rad.rows()
    }

    /// Lifts `f: base → other.base` to `ĥ: pmod → other.pmod` with
    /// `ĥ·p_N = p_M·f`.
    pub fn lift(&self, f: &ModuleMap, other: &SyzygyPresentation) -> Result<ModuleMap> {
        let alg = self.base.algebra();
        let p = self.base.p();
        let mut blocks = Vec::with_capacity(self.generators.len());
        let parts = parts_of(alg, &self.generators);
        for ((i, z), pi) in self.generators.iter().zip(&parts) {
            let w = FpMatrix::row_vector(p, z.clone()).mul(&f.matrix);
            let y = other
                .cover
                .matrix
                .solve_row(&w)?
                .ok_or_else(|| Error::Internal("cover is not surjective".into()))?;
            let y = y.mul(other.pmod.action(alg.idempotents()[*i]));
            blocks.push(map_from_generator(pi, &other.pmod, *i, y.row(0)));
        }
        let m = FpMatrix::vstack_all(p, other.pmod.dim(), &blocks);
        Ok(ModuleMap::new_unchecked(self.pmod.clone(), other.pmod.clone(), m))
    }
}

fn parts_of(alg: &Arc<BasedAlgebra>, gens: &[(usize, Vec<u32>)]) -> Vec<Arc<Module>> {
    gens.iter().map(|(i, _)| indecomposable_projective(alg, *i)).collect()
}

/// `Ωf: ΩM → ΩN`, the restriction of a lift of `f` to the kernels.
pub fn omega_map(f: &ModuleMap, pres_m: &SyzygyPresentation, pres_n: &SyzygyPresentation) -> Result<ModuleMap> {
    if pres_m.base.dim() != f.source.dim() || pres_n.base.dim() != f.target.dim() {
        return Err(Error::DimensionMismatch("presentations do not match the map".into()));
    }
    let h = pres_m.lift(f, pres_n)?;
    if h.matrix.mul(&pres_n.cover.matrix) != pres_m.cover.matrix.mul(&f.matrix) {
        return Err(Error::Internal("lift does not commute with the covers".into()));
    }
    let img = pres_m.incl.matrix.mul(&h.matrix);
    let fp = pres_n
        .incl
        .matrix
        .solve_row(&img)?
        .ok_or_else(|| Error::Internal("lift does not preserve kernels".into()))?;
    Ok(ModuleMap::new_unchecked(pres_m.omega.clone(), pres_n.omega.clone(), fp))
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidityReport {
    pub checked: u64,
    pub exhaustive: bool,
    pub non_invertible: u64,
}

impl RigidityReport {
    pub fn passed(&self) -> bool {
        self.non_invertible == 0
    }
}

/// Samples (or exhausts, when `p^dim ≤ 10⁴`) endomorphisms `s` of the
/// cover with `s·p_X = p_X` and checks each is invertible.
pub fn cover_rigidity_check(pres: &SyzygyPresentation, budget: u64, seed: u64) -> Result<RigidityReport> {
    let pm = &pres.pmod;
    if pm.dim() == 0 {
        return Ok(RigidityReport { checked: 0, exhaustive: true, non_invertible: 0 });
    }
    let p = pm.p();
    let end = hom_space(pm, pm);
    let cover = &pres.cover.matrix;
    let images: Vec<FpMatrix> = (0..end.dim()).map(|i| end.element(i).mul(cover).flatten()).collect();
    let system = FpMatrix::vstack_all(p, cover.rows() * cover.cols(), &images);
    let particular = system
        .solve_row(&cover.flatten())?
        .ok_or_else(|| Error::Internal("identity does not satisfy s·p = p".into()))?;
    let kernel = system.left_kernel();
    let base = end.combine(particular.row(0));
    let kmaps: Vec<FpMatrix> = (0..kernel.rows()).map(|r| end.combine(kernel.row(r))).collect();
    let mut report = RigidityReport { checked: 0, exhaustive: false, non_invertible: 0 };
    let mut visit = |coeffs: &[u32]| {
        let mut s = base.clone();
        for (c, k) in coeffs.iter().zip(&kmaps) {
            if *c != 0 {
                s = s.add_scaled(*c, k);
            }
        }
        report.checked += 1;
        if !s.is_invertible() {
            report.non_invertible += 1;
        }
    };
    let d = kmaps.len() as u32;
    if (p as f64).powi(d as i32) <= 1e4 {
        let total = (p as u64).pow(d);
        for code in 0..total {
            let coeffs: Vec<u32> = (0..d).map(|i| ((code / (p as u64).pow(i)) % p as u64) as u32).collect();
            visit(&coeffs);
        }
        report.exhaustive = true;
    } else {
        let mut rng = seeded_rng(&[seed, 0x51d]);
        for _ in 0..budget {
            let coeffs: Vec<u32> = (0..d).map(|_| rng.gen_range(0..p)).collect();
            visit(&coeffs);
        }
    }
    Ok(report)
}
