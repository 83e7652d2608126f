//! Right modules as matrix representations and their homomorphisms.
//!
//! A module over a based algebra stores one `dim × dim` action matrix per
//! algebra basis element; `x·b` is `x.mul(action(b))`. A morphism is a single
//! `dim(source) × dim(target)` matrix that intertwines the actions.

use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::BasedAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{reduce, FpMatrix};

/// Number of random Hom elements tried by [`is_isomorphic`] before falling
/// back to Krull–Schmidt comparison.
pub const ISO_RANDOM_ATTEMPTS: usize = 64;

/// Exhaustive isomorphism search is used while `p^dim Hom` stays below this.
pub const ISO_EXHAUSTIVE_LIMIT: u64 = 4096;

/// Basis of `M·e_i` together with the coordinate map onto it.
#[derive(Clone, Debug)]
pub(crate) struct IdempotentBlock {
    /// Rows span `M·e_i`.
    pub basis: FpMatrix,
    /// `action(e_i) = coords · basis`.
    pub coords: FpMatrix,
}

pub struct Module {
    algebra: Arc<BasedAlgebra>,
    dim: usize,
    action: Vec<FpMatrix>,
    blocks: OnceLock<Vec<IdempotentBlock>>,
}

impl std::fmt::Debug for Module {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Module")
            .field("algebra", &self.algebra.name())
            .field("dim", &self.dim)
            .field("dimension_vector", &self.dimension_vector())
            .finish()
    }
}

impl Clone for Module {
    fn clone(&self) -> Self {
        Module {
            algebra: self.algebra.clone(),
            dim: self.dim,
            action: self.action.clone(),
            blocks: self.blocks.clone(),
        }
    }
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.action == other.action && self.algebra.same_as(&other.algebra)
    }
}

impl Eq for Module {}

/// Flat JSON form: one action matrix (as rows) per algebra basis element.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleActionJson {
    pub dim: usize,
    pub action: Vec<Vec<Vec<u32>>>,
}

impl Module {
    /// Builds a module and checks that the action respects the algebra.
    pub fn new(algebra: Arc<BasedAlgebra>, action: Vec<FpMatrix>) -> Result<Arc<Module>> {
        let m = Self::new_unchecked(algebra, action)?;
        m.check()?;
        Ok(Arc::new(m))
    }

    pub(crate) fn new_unchecked(algebra: Arc<BasedAlgebra>, action: Vec<FpMatrix>) -> Result<Module> {
        if action.len() != algebra.dim() {
            return Err(Error::InvalidModule(format!(
                "{} action matrices for an algebra of dimension {}",
                action.len(),
                algebra.dim()
            )));
        }
        let dim = action.first().map_or(0, |a| a.rows());
        if action.iter().any(|a| a.shape() != (dim, dim) || a.p() != algebra.p()) {
            return Err(Error::InvalidModule("action matrices must be square of equal size".into()));
        }
        Ok(Module { algebra, dim, action, blocks: OnceLock::new() })
    }

    pub fn zero(algebra: &Arc<BasedAlgebra>) -> Arc<Module> {
        let action = (0..algebra.dim()).map(|_| FpMatrix::zeros(algebra.p(), 0, 0)).collect();
        Arc::new(Module { algebra: algebra.clone(), dim: 0, action, blocks: OnceLock::new() })
    }

    /// Verifies the module axioms against the structure constants.
    pub fn check(&self) -> Result<()> {
        let alg = &self.algebra;
        let p = alg.p();
        let d = self.dim;
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let lhs = self.action[i].mul(&self.action[j]);
                let mut rhs = FpMatrix::zeros(p, d, d);
                for (l, &c) in alg.product(i, j).iter().enumerate() {
                    if c != 0 {
                        rhs = rhs.add_scaled(c, &self.action[l]);
                    }
                }
                if lhs != rhs {
                    return Err(Error::InvalidModule(format!(
                        "action violates {}·{}",
                        alg.labels()[i],
                        alg.labels()[j]
                    )));
                }
            }
        }
        let mut sum = FpMatrix::zeros(p, d, d);
        for &e in alg.idempotents() {
            sum = sum.add(&self.action[e]);
        }
        if !sum.is_identity() {
            return Err(Error::InvalidModule("idempotents do not act as a partition of unity".into()));
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<BasedAlgebra> {
        &self.algebra
    }

    pub fn p(&self) -> u32 {
        self.algebra.p()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, b: usize) -> &FpMatrix {
        &self.action[b]
    }

    pub fn actions(&self) -> &[FpMatrix] {
        &self.action
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// `dim M·e_i` for each listed idempotent.
    pub fn dimension_vector(&self) -> Vec<usize> {
        self.blocks().iter().map(|b| b.basis.rows()).collect()
    }

    pub(crate) fn blocks(&self) -> &[IdempotentBlock] {
        self.blocks.get_or_init(|| {
            self.algebra
                .idempotents()
                .iter()
                .map(|&e| {
                    let act = &self.action[e];
                    let basis = act.row_basis();
                    let coords = basis
                        .solve_row(act)
                        .expect("shapes agree")
                        .expect("rows of an idempotent action lie in its row space");
                    IdempotentBlock { basis, coords }
                })
                .collect()
        })
    }

    pub fn identity(self: &Arc<Self>) -> ModuleMap {
        ModuleMap::new_unchecked(self.clone(), self.clone(), FpMatrix::identity(self.p(), self.dim))
    }

    /// The subspace `M·rad`.
    pub fn radical_subspace(&self) -> FpMatrix {
        let parts: Vec<FpMatrix> = self.algebra.radical().iter().map(|&r| self.action[r].clone()).collect();
        FpMatrix::vstack_all(self.p(), self.dim, &parts).row_basis()
    }

    /// Checks that the row space of `basis` is closed under the action.
    pub fn is_invariant(&self, basis: &FpMatrix) -> bool {
        let b = basis.row_basis();
        self.action.iter().all(|a| b.vstack(&b.mul(a)).rank() == b.rows())
    }

    /// The submodule spanned by the rows of `basis` (assumed linearly
    /// independent), with the action expressed in that basis.
    pub fn submodule(&self, basis: &FpMatrix) -> Result<Arc<Module>> {
        if basis.rank() != basis.rows() {
            return Err(Error::InvalidModule("submodule basis is not independent".into()));
        }
        let mut action = Vec::with_capacity(self.action.len());
        for a in &self.action {
            let img = basis.mul(a);
            let coords = basis
                .solve_row(&img)?
                .ok_or_else(|| Error::InvalidModule("subspace is not invariant".into()))?;
            action.push(coords);
        }
        let mut m = Module::new_unchecked(self.algebra.clone(), action)?;
        if basis.rows() == 0 {
            m = Module::new_unchecked(
                self.algebra.clone(),
                (0..self.algebra.dim()).map(|_| FpMatrix::zeros(self.p(), 0, 0)).collect(),
            )?;
        }
        Ok(Arc::new(m))
    }

    /// Quotient by the invariant subspace spanned by `sub`, with the quotient
    /// map `M → M/sub`.
    pub fn quotient(self: &Arc<Self>, sub: &FpMatrix) -> Result<(Arc<Module>, ModuleMap)> {
        let p = self.p();
        let w = sub.row_basis();
        let r = w.rref();
        // complement: standard basis vectors on the non-pivot columns
        let free: Vec<usize> = (0..self.dim).filter(|c| !r.pivots.contains(c)).collect();
        let mut comp = FpMatrix::zeros(p, free.len(), self.dim);
        for (i, &c) in free.iter().enumerate() {
            comp.set(i, c, 1);
        }
        let t = w.vstack(&comp);
        let t_inv = t.inverse().ok_or_else(|| Error::Internal("quotient basis not invertible".into()))?;
        let q = free.len();
        let proj = t_inv.block(0, w.rows(), self.dim, q);
        let mut action = Vec::with_capacity(self.action.len());
        for a in &self.action {
            let img = comp.mul(a).mul(&proj);
            action.push(img);
        }
        if !self.is_invariant(&w) {
            return Err(Error::InvalidModule("quotient by a non-invariant subspace".into()));
        }
        let qm = if q == 0 {
            Module::zero(&self.algebra)
        } else {
            Arc::new(Module::new_unchecked(self.algebra.clone(), action)?)
        };
        let map = ModuleMap::new_unchecked(self.clone(), qm.clone(), proj);
        Ok((qm, map))
    }

    pub fn to_json(&self) -> ModuleActionJson {
        ModuleActionJson {
            dim: self.dim,
            action: self
                .action
                .iter()
                .map(|a| (0..a.rows()).map(|r| a.row(r).to_vec()).collect())
                .collect(),
        }
    }

    pub fn from_json(algebra: &Arc<BasedAlgebra>, json: &ModuleActionJson) -> Result<Arc<Module>> {
        let p = algebra.p();
        let action = json
            .action
            .iter()
            .map(|rows| {
                let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
                FpMatrix::from_rows(p, json.dim, &rows)
            })
            .collect::<Result<Vec<_>>>()?;
        if json.dim == 0 {
            return Ok(Module::zero(algebra));
        }
        Module::new(algebra.clone(), action)
    }

    /// Stable byte key used for canonical ordering.
    pub fn sort_key(&self) -> (usize, Vec<usize>, Vec<u32>) {
        let bytes = self.action.iter().flat_map(|a| a.entries().iter().copied()).collect();
        (self.dim, self.dimension_vector(), bytes)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: Arc<Module>,
    pub target: Arc<Module>,
    pub matrix: FpMatrix,
}

impl ModuleMap {
    /// Builds a morphism, checking the intertwining identities.
    pub fn new(source: Arc<Module>, target: Arc<Module>, matrix: FpMatrix) -> Result<ModuleMap> {
        let map = ModuleMap::new_unchecked(source, target, matrix);
        map.check()?;
        Ok(map)
    }

    pub(crate) fn new_unchecked(source: Arc<Module>, target: Arc<Module>, matrix: FpMatrix) -> ModuleMap {
        ModuleMap { source, target, matrix }
    }

    pub fn check(&self) -> Result<()> {
        if !self.source.algebra().same_as(self.target.algebra()) {
            return Err(Error::InvalidMap("source and target live over different algebras".into()));
        }
        if self.matrix.shape() != (self.source.dim(), self.target.dim()) {
            return Err(Error::InvalidMap(format!(
                "matrix is {}x{}, expected {}x{}",
                self.matrix.rows(),
                self.matrix.cols(),
                self.source.dim(),
                self.target.dim()
            )));
        }
        for b in 0..self.source.algebra().dim() {
            let lhs = self.matrix.mul(self.target.action(b));
            let rhs = self.source.action(b).mul(&self.matrix);
            if lhs != rhs {
                return Err(Error::InvalidMap(format!(
                    "does not commute with {}",
                    self.source.algebra().labels()[b]
                )));
            }
        }
        Ok(())
    }

    pub fn zero(source: &Arc<Module>, target: &Arc<Module>) -> ModuleMap {
        ModuleMap::new_unchecked(
            source.clone(),
            target.clone(),
            FpMatrix::zeros(source.p(), source.dim(), target.dim()),
        )
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ModuleMap) -> ModuleMap {
        assert_eq!(self.target.dim(), next.source.dim(), "composing incompatible maps");
        ModuleMap::new_unchecked(self.source.clone(), next.target.clone(), self.matrix.mul(&next.matrix))
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        ModuleMap::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.add(&other.matrix))
    }

    pub fn scale(&self, c: u32) -> ModuleMap {
        ModuleMap::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.scale(c))
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.target.dim()
    }

    pub fn is_iso(&self) -> bool {
        self.source.dim() == self.target.dim() && self.matrix.is_invertible()
    }

    pub fn kernel(&self) -> Result<(Arc<Module>, ModuleMap)> {
        let k = self.matrix.left_kernel();
        let km = self.source.submodule(&k)?;
        Ok((km.clone(), ModuleMap::new_unchecked(km, self.source.clone(), k)))
    }

    pub fn cokernel(&self) -> Result<(Arc<Module>, ModuleMap)> {
        self.target.quotient(&self.matrix)
    }
}

/// An F_p-basis of `Hom(M, N)` in reduced echelon form over the flattened
/// matrix entries, so coordinates of a morphism are read off at the pivots.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: Arc<Module>,
    pub target: Arc<Module>,
    basis: FpMatrix,
    pivots: Vec<usize>,
}

impl HomSpace {
    fn from_spanning(source: Arc<Module>, target: Arc<Module>, rows: FpMatrix) -> HomSpace {
        let r = rows.rref();
        let basis = r.matrix.block(0, 0, r.rank, rows.cols());
        HomSpace { source, target, basis, pivots: r.pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn p(&self) -> u32 {
        self.source.p()
    }

    /// Basis element `i` as a matrix.
    pub fn element(&self, i: usize) -> FpMatrix {
        self.basis.row_matrix(i).reshape(self.source.dim(), self.target.dim())
    }

    pub fn map(&self, i: usize) -> ModuleMap {
        ModuleMap::new_unchecked(self.source.clone(), self.target.clone(), self.element(i))
    }

    pub fn maps(&self) -> Vec<ModuleMap> {
        (0..self.dim()).map(|i| self.map(i)).collect()
    }

    /// Flattened basis, one row per basis element.
    pub fn basis_rows(&self) -> &FpMatrix {
        &self.basis
    }

    /// Coordinates of a morphism known to lie in this space.
    pub fn coordinates(&self, f: &FpMatrix) -> Vec<u32> {
        debug_assert_eq!(f.shape(), (self.source.dim(), self.target.dim()));
        self.pivots.iter().map(|&c| f.entries()[c]).collect()
    }

    /// Coordinates, or `None` if `f` is not a morphism.
    pub fn try_coordinates(&self, f: &FpMatrix) -> Option<Vec<u32>> {
        let c = self.coordinates(f);
        (self.combine(&c) == *f).then_some(c)
    }

    pub fn combine(&self, coeffs: &[u32]) -> FpMatrix {
        let p = self.p();
        let mut acc = FpMatrix::zeros(p, 1, self.basis.cols());
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                acc = acc.add_scaled(c, &self.basis.row_matrix(i));
            }
        }
        acc.reshape(self.source.dim(), self.target.dim())
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> FpMatrix {
        let p = self.p();
        let coeffs: Vec<u32> = (0..self.dim()).map(|_| rng.gen_range(0..p)).collect();
        self.combine(&coeffs)
    }
}

fn outer(q: &[u32], c: &[u32], p: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(q.len() * c.len());
    for &a in q {
        out.extend(c.iter().map(|&b| a * b % p));
    }
    out
}

/// `Hom(M, N)`: block-diagonal with respect to the idempotents, then the
/// intertwining equations for the radical generators.
pub fn hom_space(m: &Arc<Module>, n: &Arc<Module>) -> HomSpace {
    assert!(m.algebra().same_as(n.algebra()), "Hom between modules over different algebras");
    let p = m.p();
    let (dm, dn) = (m.dim(), n.dim());
    if dm == 0 || dn == 0 {
        return HomSpace::from_spanning(m.clone(), n.clone(), FpMatrix::zeros(p, 0, dm * dn));
    }
    let alg = m.algebra();
    let gens = alg.radical_generators();
    let mut unknowns: Vec<Vec<u32>> = Vec::new();
    for (bm, bn) in m.blocks().iter().zip(n.blocks()) {
        let qt = bm.coords.transpose();
        for r in 0..bm.basis.rows() {
            for c in 0..bn.basis.rows() {
                unknowns.push(outer(qt.row(r), bn.basis.row(c), p));
            }
        }
    }
    let u = unknowns.len();
    if u == 0 {
        return HomSpace::from_spanning(m.clone(), n.clone(), FpMatrix::zeros(p, 0, dm * dn));
    }
    let phis = FpMatrix::from_raw(p, u, dm * dn, unknowns.concat());
    let mut residuals: Option<FpMatrix> = None;
    for &g in gens {
        let mut rows = Vec::with_capacity(u * dm * dn);
        for i in 0..u {
            let phi = phis.row_matrix(i).reshape(dm, dn);
            let res = phi.mul(n.action(g)).sub(&m.action(g).mul(&phi));
            rows.extend_from_slice(res.entries());
        }
        let block = FpMatrix::from_raw(p, u, dm * dn, rows);
        residuals = Some(match residuals {
            None => block,
            Some(acc) => acc.hstack(&block),
        });
    }
    let kernel = match residuals {
        Some(l) => l.left_kernel(),
        None => FpMatrix::identity(p, u),
    };
    HomSpace::from_spanning(m.clone(), n.clone(), kernel.mul(&phis))
}

/// `Hom(M, N)` solved against every algebra basis element with no block
/// structure assumed. Slower; used to cross-check [`hom_space`].
pub fn hom_space_full(m: &Arc<Module>, n: &Arc<Module>) -> HomSpace {
    let p = m.p();
    let (dm, dn) = (m.dim(), n.dim());
    let u = dm * dn;
    let alg = m.algebra();
    let mut residuals = FpMatrix::zeros(p, u, 0);
    for b in 0..alg.dim() {
        let mut rows = Vec::with_capacity(u * u);
        for i in 0..u {
            let mut phi = FpMatrix::zeros(p, dm, dn);
            phi.set(i / dn, i % dn, 1);
            let res = phi.mul(n.action(b)).sub(&m.action(b).mul(&phi));
            rows.extend_from_slice(res.entries());
        }
        residuals = residuals.hstack(&FpMatrix::from_raw(p, u, u, rows));
    }
    HomSpace::from_spanning(m.clone(), n.clone(), residuals.left_kernel())
}

pub fn hom_basis(m: &Arc<Module>, n: &Arc<Module>) -> Vec<ModuleMap> {
    hom_space(m, n).maps()
}

/// A finite direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Arc<Module>,
    pub injections: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
}

pub fn direct_sum(algebra: &Arc<BasedAlgebra>, parts: &[Arc<Module>]) -> DirectSum {
    let p = algebra.p();
    let total: usize = parts.iter().map(|m| m.dim()).sum();
    let module = if total == 0 {
        Module::zero(algebra)
    } else {
        let action = (0..algebra.dim())
            .map(|b| {
                let blocks: Vec<&FpMatrix> = parts.iter().map(|m| m.action(b)).collect();
                FpMatrix::block_diag(p, &blocks)
            })
            .collect();
        Arc::new(Module::new_unchecked(algebra.clone(), action).expect("block diagonal action"))
    };
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut offset = 0;
    for m in parts {
        let mut inj = FpMatrix::zeros(p, m.dim(), total);
        inj.set_block(0, offset, &FpMatrix::identity(p, m.dim()));
        projections.push(ModuleMap::new_unchecked(module.clone(), m.clone(), inj.transpose()));
        injections.push(ModuleMap::new_unchecked(m.clone(), module.clone(), inj));
        offset += m.dim();
    }
    DirectSum { module, injections, projections }
}

/// Direct sum of maps `⊕ f_t : ⊕ M_t → ⊕ N_t`.
pub fn direct_sum_of_maps(source: &DirectSum, target: &DirectSum, maps: &[FpMatrix]) -> ModuleMap {
    let p = source.module.p();
    let blocks: Vec<&FpMatrix> = maps.iter().collect();
    let m = if blocks.is_empty() {
        FpMatrix::zeros(p, 0, 0)
    } else {
        FpMatrix::block_diag(p, &blocks)
    };
    ModuleMap::new_unchecked(source.module.clone(), target.module.clone(), m)
}

pub fn seeded_rng(parts: &[u64]) -> ChaCha8Rng {
    let mut h: u64 = 0x9e37_79b9_7f4a_7c15;
    for &x in parts {
        h ^= x.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Attempts at a nonzero cokernel whose cover may exceed `max_dim` before
/// falling back to covers that fit.
const RANDOM_MODULE_ATTEMPTS: usize = 32;

/// Cokernel of a random map between random sums of indecomposable
/// projectives, of dimension at most `max_dim`; deterministic in `seed`.
pub fn random_module(algebra: &Arc<BasedAlgebra>, seed: u64, max_dim: usize) -> Result<Arc<Module>> {
    let mut rng = seeded_rng(&[seed, 0x7261_6e64]);
    let projs = crate::projectives::indecomposable_projectives(algebra);
    let largest = projs.iter().map(|q| q.dim()).max().unwrap_or(0);
    for _ in 0..RANDOM_MODULE_ATTEMPTS {
        let m = random_cokernel(algebra, &projs, &mut rng, max_dim + 2 * largest)?;
        if m.dim() > 0 && m.dim() <= max_dim {
            return Ok(m);
        }
    }
    random_cokernel(algebra, &projs, &mut rng, max_dim)
}

fn random_cokernel(
    algebra: &Arc<BasedAlgebra>,
    projs: &[Arc<Module>],
    rng: &mut ChaCha8Rng,
    room: usize,
) -> Result<Arc<Module>> {
    let mut target = Vec::new();
    let mut room = room;
    for _ in 0..rng.gen_range(1..=4) {
        let fits: Vec<&Arc<Module>> = projs.iter().filter(|q| q.dim() <= room).collect();
        if fits.is_empty() {
            break;
        }
        let q = fits[rng.gen_range(0..fits.len())];
        room -= q.dim();
        target.push(q.clone());
    }
    let source: Vec<Arc<Module>> =
        (0..rng.gen_range(1..=5)).map(|_| projs[rng.gen_range(0..projs.len())].clone()).collect();
    let tgt = direct_sum(algebra, &target);
    let src = direct_sum(algebra, &source);
    // Each block is zero or a multiple of one basis map, so special
    // presentations occur as often as generic ones.
    let p = algebra.p();
    let density = [0.3, 0.6, 1.0][rng.gen_range(0..3)];
    let mut f = FpMatrix::zeros(p, src.module.dim(), tgt.module.dim());
    for (ps, s_mod) in src.projections.iter().zip(&source) {
        for (it, t_mod) in tgt.injections.iter().zip(&target) {
            let block = hom_space(s_mod, t_mod);
            if block.dim() == 0 || !rng.gen_bool(density) {
                continue;
            }
            let g = block.element(rng.gen_range(0..block.dim())).scale(rng.gen_range(1..p));
            f = f.add(&ps.matrix.mul(&g).mul(&it.matrix));
        }
    }
    let (coker, _) = ModuleMap::new_unchecked(src.module, tgt.module, f).cokernel()?;
    Ok(coker)
}

/// For indecomposable `M` and `N`: `M ≅ N` iff some product `h·g` of basis
/// elements `h ∈ Hom(M,N)`, `g ∈ Hom(N,M)` is invertible, since these
/// products span an ideal of the local ring `End(M)`.
pub fn iso_between_indecomposables(m: &Arc<Module>, n: &Arc<Module>) -> Option<ModuleMap> {
    if m.dim() != n.dim() || m.dimension_vector() != n.dimension_vector() {
        return None;
    }
    if m.dim() == 0 {
        return Some(ModuleMap::zero(m, n));
    }
    let mn = hom_space(m, n);
    let nm = hom_space(n, m);
    for i in 0..mn.dim() {
        let h = mn.element(i);
        if h.is_invertible() {
            return Some(ModuleMap::new_unchecked(m.clone(), n.clone(), h));
        }
        for j in 0..nm.dim() {
            if h.mul(&nm.element(j)).is_invertible() {
                // h is a split mono between modules of equal dimension
                return Some(ModuleMap::new_unchecked(m.clone(), n.clone(), h));
            }
        }
    }
    None
}

/// Searches for an isomorphism `M → N`.
///
/// Invariant witnesses (dimension, dimension vector, `dim Hom`) rule out
/// most pairs; then basis elements and seeded random elements of `Hom(M,N)`
/// are tried, then exhaustive enumeration for small Hom spaces, and finally
/// a comparison of Krull–Schmidt decompositions, which is conclusive.
pub fn is_isomorphic(m: &Arc<Module>, n: &Arc<Module>) -> Option<ModuleMap> {
    assert!(m.algebra().same_as(n.algebra()));
    if m.dim() != n.dim() || m.dimension_vector() != n.dimension_vector() {
        return None;
    }
    if m.dim() == 0 {
        return Some(ModuleMap::zero(m, n));
    }
    let hom = hom_space(m, n);
    if hom.dim() == 0 || hom_space(n, m).dim() != hom.dim() || hom_space(m, m).dim() != hom.dim() {
        return None;
    }
    let found = |f: FpMatrix| f.is_invertible().then(|| ModuleMap::new_unchecked(m.clone(), n.clone(), f));
    for i in 0..hom.dim() {
        if let Some(iso) = found(hom.element(i)) {
            return Some(iso);
        }
    }
    let mut rng = seeded_rng(&[m.dim() as u64, hom.dim() as u64, 0x150]);
    for _ in 0..ISO_RANDOM_ATTEMPTS {
        if let Some(iso) = found(hom.random_element(&mut rng)) {
            return Some(iso);
        }
    }
    let p = m.p() as u64;
    if (p as f64).powi(hom.dim() as i32) <= ISO_EXHAUSTIVE_LIMIT as f64 {
        let total = p.pow(hom.dim() as u32);
        for code in 0..total {
            let coeffs: Vec<u32> = (0..hom.dim()).map(|i| ((code / p.pow(i as u32)) % p) as u32).collect();
            if let Some(iso) = found(hom.combine(&coeffs)) {
                return Some(iso);
            }
        }
        return None;
    }
    crate::krull_schmidt::iso_via_decomposition(m, n).expect("decomposition of a small module")
}

/// A truncated polynomial `c0 + c1·π + c2·π² + …` in `R/πⁿ`.
/// Serialized as a string such as `"1-2*pi^2"`; plain integers are also
/// accepted on input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residue(pub Vec<i64>);

impl std::fmt::Display for Residue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut out = String::new();
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
            let mag = c.unsigned_abs();
            let term = match (i, mag) {
                (0, m) => m.to_string(),
                (1, 1) => "pi".into(),
                (1, m) => format!("{m}*pi"),
                (e, 1) => format!("pi^{e}"),
                (e, m) => format!("{m}*pi^{e}"),
            };
            out.push_str(sign);
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl Serialize for Residue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Residue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(c) => Ok(Residue::constant(c)),
            Raw::Text(t) => Residue::parse(&t).map_err(serde::de::Error::custom),
        }
    }
}

impl Residue {
    pub fn constant(c: i64) -> Self {
        Residue(vec![c])
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Parses strings such as `"1"`, `"pi"`, `"-pi"`, `"2+pi^2"`, `"1-2*pi"`.
    pub fn parse(s: &str) -> Result<Residue> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty residue".into()));
        }
        let mut coeffs: Vec<i64> = Vec::new();
        let mut terms: Vec<(i64, String)> = Vec::new();
        let mut sign = 1i64;
        let mut cur = String::new();
        for (i, ch) in compact.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                terms.push((sign, std::mem::take(&mut cur)));
                sign = if ch == '-' { -1 } else { 1 };
            } else if ch == '-' && i == 0 {
                sign = -1;
            } else if ch == '+' && i == 0 {
            } else {
                cur.push(ch);
            }
        }
        terms.push((sign, cur));
        for (sign, term) in terms {
            if term.is_empty() {
                return Err(Error::Parse(format!("dangling sign in `{s}`")));
            }
            let (coef, power) = if let Some(idx) = term.find("pi") {
                let head = term[..idx].trim_end_matches('*');
                let coef = if head.is_empty() {
                    1
                } else {
                    head.parse::<i64>().map_err(|_| Error::Parse(format!("bad coefficient in `{s}`")))?
                };
                let tail = &term[idx + 2..];
                let power = if tail.is_empty() {
                    1
                } else if let Some(e) = tail.strip_prefix('^') {
                    e.parse::<usize>().map_err(|_| Error::Parse(format!("bad exponent in `{s}`")))?
                } else {
                    return Err(Error::Parse(format!("unexpected `{tail}` in `{s}`")));
                };
                (coef, power)
            } else {
                (term.parse::<i64>().map_err(|_| Error::Parse(format!("bad term `{term}` in `{s}`")))?, 0)
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, 0);
            }
            coeffs[power] += sign * coef;
        }
        Ok(Residue(coeffs))
    }
}

/// Pair-form description `(X --a--> Y)` of a module over `Λ(n, m, k)`:
/// `X = ⊕ R/π^λ_i`, `Y = ⊕ R/π^μ_j`, and `a[i][j]` the component of the
/// image of the i-th generator of X in the j-th summand of Y.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairForm {
    pub e_part: Vec<usize>,
    pub f_part: Vec<usize>,
    pub a: Vec<Vec<Residue>>,
}

impl PairForm {
    pub fn new(e_part: Vec<usize>, f_part: Vec<usize>, a: Vec<Vec<Residue>>) -> Self {
        PairForm { e_part, f_part, a }
    }

    /// Convenience constructor from residue strings.
    pub fn parse(e_part: &[usize], f_part: &[usize], a: &[&[&str]]) -> Result<Self> {
        let a = a
            .iter()
            .map(|row| row.iter().map(|s| Residue::parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(PairForm { e_part: e_part.to_vec(), f_part: f_part.to_vec(), a })
    }

    pub fn dim(&self) -> usize {
        self.e_part.iter().sum::<usize>() + self.f_part.iter().sum::<usize>()
    }
}

/// Offsets of the blocks `R/π^λ` in the flat basis `x, xπ, …, xπ^(λ-1)`.
pub(crate) fn block_offsets(parts: &[usize]) -> Vec<usize> {
    let mut acc = 0;
    parts
        .iter()
        .map(|&l| {
            let o = acc;
            acc += l;
            o
        })
        .collect()
}

/// Matrix (in the flat block bases) of the R-linear map `⊕ R/π^λ → ⊕ R/π^μ`
/// sending generator i to `Σ_j c_ij(π) y_j`.
pub(crate) fn r_linear_matrix(p: u32, src: &[usize], dst: &[usize], coeffs: &[Vec<Residue>]) -> Result<FpMatrix> {
    if (src.is_empty() || dst.is_empty()) && coeffs.iter().all(|r| r.is_empty()) {
        return Ok(FpMatrix::zeros(p, src.iter().sum(), dst.iter().sum()));
    }
    if coeffs.len() != src.len() || coeffs.iter().any(|r| r.len() != dst.len()) {
        return Err(Error::InvalidModule(format!(
            "map matrix must be {}x{} for blocks {:?} -> {:?}",
            src.len(),
            dst.len(),
            src,
            dst
        )));
    }
    let (so, dof) = (block_offsets(src), block_offsets(dst));
    let mut m = FpMatrix::zeros(p, src.iter().sum(), dst.iter().sum());
    for (i, &li) in src.iter().enumerate() {
        for (j, &mj) in dst.iter().enumerate() {
            let c = &coeffs[i][j];
            for s in 0..li {
                for (deg, &cv) in c.0.iter().enumerate() {
                    let t = s + deg;
                    if t < mj && cv != 0 {
                        let cur = m.get(so[i] + s, dof[j] + t);
                        m.set(so[i] + s, dof[j] + t, (cur + reduce(cv, p)) % p);
                    }
                }
            }
        }
    }
    Ok(m)
}

/// Shift matrix of π on `⊕ R/π^λ`.
pub(crate) fn pi_matrix(p: u32, parts: &[usize]) -> FpMatrix {
    let d: usize = parts.iter().sum();
    let mut m = FpMatrix::zeros(p, d, d);
    for (o, &l) in block_offsets(parts).iter().zip(parts) {
        for s in 0..l.saturating_sub(1) {
            m.set(o + s, o + s + 1, 1);
        }
    }
    m
}

/// Builds the module described by a pair form over a triangle algebra.
/// The basis lists the e-part blocks first, then the f-part blocks.
pub fn module_from_pair(alg: &Arc<BasedAlgebra>, form: &PairForm) -> Result<Arc<Module>> {
    let t = alg
        .triangle()
        .ok_or_else(|| Error::InvalidModule("pair form needs a triangle algebra".into()))?;
    let p = alg.p();
    if form.e_part.iter().any(|&l| l == 0 || l > t.n) || form.f_part.iter().any(|&l| l == 0 || l > t.m) {
        return Err(Error::InvalidModule(format!(
            "partitions {:?}, {:?} exceed the bounds ({}, {})",
            form.e_part, form.f_part, t.n, t.m
        )));
    }
    let de: usize = form.e_part.iter().sum();
    let df: usize = form.f_part.iter().sum();
    let d = de + df;
    let a_small = r_linear_matrix(p, &form.e_part, &form.f_part, &form.a)?;
    let u = pi_matrix(p, &form.e_part);
    let v = pi_matrix(p, &form.f_part);
    let mut action = vec![FpMatrix::zeros(p, d, d); alg.dim()];
    let mut u_pow = FpMatrix::identity(p, de);
    for s in 0..t.n {
        action[t.e_path(s).unwrap()].set_block(0, 0, &u_pow);
        if s < t.k {
            let mut m = FpMatrix::zeros(p, d, d);
            m.set_block(0, de, &u_pow.mul(&a_small));
            action[t.a_path(s).unwrap()] = m;
        }
        u_pow = u_pow.mul(&u);
    }
    let mut v_pow = FpMatrix::identity(p, df);
    for s in 0..t.m {
        action[t.f_path(s).unwrap()].set_block(de, de, &v_pow);
        v_pow = v_pow.mul(&v);
    }
    if d == 0 {
        return Ok(Module::zero(alg));
    }
    Module::new(alg.clone(), action).map_err(|_| {
        let a: Vec<Vec<String>> = form.a.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
        Error::InvalidModule(format!(
            "a = {a:?} is not a map from e_part {:?} to f_part {:?}",
            form.e_part, form.f_part
        ))
    })
}

/// A module map between two pair-form modules given by its e-part and
/// f-part R-linear matrices.
pub fn map_from_pair(
    source: &Arc<Module>,
    source_form: &PairForm,
    target: &Arc<Module>,
    target_form: &PairForm,
    e_map: &[Vec<Residue>],
    f_map: &[Vec<Residue>],
) -> Result<ModuleMap> {
    let p = source.p();
    let me = r_linear_matrix(p, &source_form.e_part, &target_form.e_part, e_map)?;
    let mf = r_linear_matrix(p, &source_form.f_part, &target_form.f_part, f_map)?;
    let m = FpMatrix::block_diag(p, &[&me, &mf]);
    ModuleMap::new(source.clone(), target.clone(), m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::builtin_algebra;

    fn pair(e: &[usize], f: &[usize], a: &[&[&str]]) -> PairForm {
        PairForm::parse(e, f, a).unwrap()
    }

    #[test]
    fn residue_parsing() {
        assert_eq!(Residue::parse("1").unwrap(), Residue(vec![1]));
        assert_eq!(Residue::parse("pi").unwrap(), Residue(vec![0, 1]));
        assert_eq!(Residue::parse("-pi").unwrap(), Residue(vec![0, -1]));
        assert_eq!(Residue::parse("2+3*pi^2").unwrap(), Residue(vec![2, 0, 3]));
        assert_eq!(Residue::parse("1 - 2*pi").unwrap(), Residue(vec![1, -2]));
        assert!(Residue::parse("pj").is_err());
        for text in ["0", "1", "-pi", "2+3*pi^2", "1-2*pi"] {
            let r = Residue::parse(text).unwrap();
            assert_eq!(Residue::parse(&r.to_string()).unwrap(), r);
        }
        let r: Residue = serde_json::from_str("\"pi^2\"").unwrap();
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"pi^2\"");
        let r: Residue = serde_json::from_str("-1").unwrap();
        assert_eq!(r, Residue(vec![-1]));
        assert!(Residue::parse("").is_err());
    }

    #[test]
    fn catalog_style_modules() {
        let a = builtin_algebra("A", 3).unwrap();
        let x1 = module_from_pair(&a, &pair(&[1], &[1], &[&["1"]])).unwrap();
        assert_eq!(x1.dim(), 2);
        let x15 = module_from_pair(&a, &pair(&[3], &[], &[&[]])).unwrap();
        assert_eq!(x15.dim(), 3);
        let x12 = module_from_pair(&a, &pair(&[1, 3], &[3], &[&["pi^2"], &["pi"]])).unwrap();
        assert_eq!(x12.dim(), 7);
        assert_eq!(x12.dimension_vector(), vec![4, 3]);
    }

    #[test]
    fn non_equivariant_pair_is_rejected() {
        let a = builtin_algebra("A", 3).unwrap();
        // R/π² → R/π³ by 1 is not well defined: π²x ↦ π²y ≠ 0
        assert!(module_from_pair(&a, &pair(&[2], &[3], &[&["1"]])).is_err());
        // partitions out of range
        assert!(module_from_pair(&a, &pair(&[4], &[], &[&[]])).is_err());
        // π^k a ≠ 0 over B = Λ(3,3,2): R/π³ → R/π³ by 1
        let b = builtin_algebra("B", 3).unwrap();
        assert!(module_from_pair(&b, &pair(&[3], &[3], &[&["1"]])).is_err());
    }

    #[test]
    fn hom_dimensions() {
        let a = builtin_algebra("A", 3).unwrap();
        let x1 = module_from_pair(&a, &pair(&[1], &[1], &[&["1"]])).unwrap();
        let p1 = module_from_pair(&a, &pair(&[3], &[3], &[&["1"]])).unwrap();
        let zero = Module::zero(&a);
        assert_eq!(hom_space(&x1, &zero).dim(), 0);
        assert_eq!(hom_space(&x1, &x1).dim(), 1);
        assert_eq!(hom_space(&p1, &p1).dim(), 3);
        for (m, n) in [(&x1, &p1), (&p1, &x1), (&x1, &x1)] {
            let fast = hom_space(m, n);
            let full = hom_space_full(m, n);
            assert_eq!(fast.basis_rows(), full.basis_rows());
        }
    }

    #[test]
    fn hom_brute_force_oracle_at_p2() {
        // enumerate all 2^(dm·dn) matrices for a tiny pair and count intertwiners
        let a = builtin_algebra("A", 2).unwrap();
        let x3 = module_from_pair(&a, &pair(&[2], &[1], &[&["1"]])).unwrap();
        let x6 = module_from_pair(&a, &pair(&[1], &[2], &[&["pi"]])).unwrap();
        let (dm, dn) = (x3.dim(), x6.dim());
        let mut count = 0u32;
        for code in 0u32..(1 << (dm * dn)) {
            let data = (0..dm * dn).map(|i| ((code >> i) & 1) as i64).collect();
            let f = FpMatrix::from_vec(2, dm, dn, data).unwrap();
            if ModuleMap::new(x3.clone(), x6.clone(), f).is_ok() {
                count += 1;
            }
        }
        assert_eq!(count, 1 << hom_space(&x3, &x6).dim());
    }

    #[test]
    fn direct_sum_structure() {
        let a = builtin_algebra("A", 3).unwrap();
        let x1 = module_from_pair(&a, &pair(&[1], &[1], &[&["1"]])).unwrap();
        let x2 = module_from_pair(&a, &pair(&[2], &[2], &[&["1"]])).unwrap();
        let empty = direct_sum(&a, &[]);
        assert_eq!(empty.module.dim(), 0);
        let single = direct_sum(&a, &[x1.clone()]);
        assert_eq!(*single.module, *x1);
        assert!(single.injections[0].matrix.is_identity());
        let s = direct_sum(&a, &[x1.clone(), x2.clone()]);
        assert_eq!(s.module.dim(), 6);
        s.module.check().unwrap();
        for (i, inj) in s.injections.iter().enumerate() {
            inj.check().unwrap();
            for (j, proj) in s.projections.iter().enumerate() {
                let c = inj.then(proj).matrix;
                assert_eq!(c.is_identity(), i == j);
                if i != j {
                    assert!(c.is_zero());
                }
            }
        }
        let total = s.projections[0].then(&s.injections[0]).add(&s.projections[1].then(&s.injections[1]));
        assert!(total.matrix.is_identity());
    }

    #[test]
    fn isomorphism_cases() {
        let a = builtin_algebra("A", 2).unwrap();
        let x1 = module_from_pair(&a, &pair(&[1], &[1], &[&["1"]])).unwrap();
        let x2 = module_from_pair(&a, &pair(&[2], &[2], &[&["1"]])).unwrap();
        let x3 = module_from_pair(&a, &pair(&[2], &[1], &[&["1"]])).unwrap();
        let x20 = module_from_pair(&a, &pair(&[3], &[1], &[&["1"]])).unwrap();
        assert!(is_isomorphic(&x1, &x1).unwrap().matrix.is_identity());
        assert!(is_isomorphic(&x1, &x2).is_none());
        assert!(is_isomorphic(&x3, &x20).is_none());
        // a twisted copy: conjugate the actions of X2 by an invertible matrix
        let t = FpMatrix::from_rows(2, 4, &[vec![1, 1, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 1], vec![0, 0, 0, 1]])
            .unwrap();
        let ti = t.inverse().unwrap();
        let twisted = Module::new(a.clone(), x2.actions().iter().map(|m| ti.mul(m).mul(&t)).collect()).unwrap();
        let iso = is_isomorphic(&x2, &twisted).unwrap();
        iso.check().unwrap();
        assert!(iso.is_iso());
    }

    #[test]
    fn quotient_and_submodule() {
        let a = builtin_algebra("A", 3).unwrap();
        let p1 = module_from_pair(&a, &pair(&[3], &[3], &[&["1"]])).unwrap();
        let rad = p1.radical_subspace();
        assert_eq!(rad.rows(), 5);
        let (top, q) = p1.quotient(&rad).unwrap();
        assert_eq!(top.dim(), 1);
        q.check().unwrap();
        let sub = p1.submodule(&rad).unwrap();
        sub.check().unwrap();
        assert_eq!(sub.dim(), 5);
    }

    #[test]
    fn random_modules_are_modules_and_seeded() {
        for name in ["A", "C5"] {
            let a = builtin_algebra(name, 2).unwrap();
            for seed in 0..12 {
                let m = random_module(&a, seed, 10).unwrap();
                m.check().unwrap();
                assert!(m.dim() <= 10);
                let again = random_module(&a, seed, 10).unwrap();
                assert_eq!(m.actions(), again.actions());
            }
        }
    }

    #[test]
    fn cokernel_of_zero_map_is_target() {
        let a = builtin_algebra("A", 3).unwrap();
        let p1 = module_from_pair(&a, &pair(&[3], &[3], &[&["1"]])).unwrap();
        let p2 = module_from_pair(&a, &pair(&[], &[3], &[])).unwrap();
        let zero = ModuleMap::new_unchecked(p1.clone(), p2.clone(), FpMatrix::zeros(3, p1.dim(), p2.dim()));
        let (c, _) = zero.cokernel().unwrap();
        assert!(is_isomorphic(&c, &p2).is_some());
    }
}
