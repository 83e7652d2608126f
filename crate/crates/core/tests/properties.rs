mod common;

use std::sync::Arc;

use heller::algebra::{builtin_algebra, BasedAlgebra};
use heller::krull_schmidt::{decompose, identify};
use heller::linalg::FpMatrix;
use heller::module::{direct_sum, hom_space, random_module, seeded_rng, Module, ModuleMap};
use heller::projectives::{indecomposable_projectives, omega_map, syzygy, SyzygyPresentation};
use heller::stable::{is_stably_isomorphic, stable_hom};
use proptest::prelude::*;

const ALGEBRAS: [(&str, u32); 5] = [("A", 2), ("A", 3), ("B", 2), ("C3", 3), ("C5", 2)];

fn algebra(k: usize) -> Arc<BasedAlgebra> {
    let (name, p) = ALGEBRAS[k % ALGEBRAS.len()];
    builtin_algebra(name, p).unwrap()
}

fn random_map(m: &Arc<Module>, n: &Arc<Module>, seed: u64) -> ModuleMap {
    let mut rng = seeded_rng(&[seed, m.dim() as u64, n.dim() as u64]);
    ModuleMap::new(m.clone(), n.clone(), hom_space(m, n).random_element(&mut rng)).unwrap()
}

/// Span of all composites `M → P_i → N` over indecomposable projectives.
fn factoring_dim_by_definition(m: &Arc<Module>, n: &Arc<Module>) -> usize {
    let p = m.p();
    let mut rows = Vec::new();
    for q in indecomposable_projectives(m.algebra()) {
        let into = hom_space(m, &q);
        let out = hom_space(&q, n);
        for i in 0..into.dim() {
            for j in 0..out.dim() {
                rows.push(into.element(i).mul(&out.element(j)).flatten());
            }
        }
    }
    FpMatrix::vstack_all(p, m.dim() * n.dim(), &rows).rank()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn omega_ignores_padding(k in 0usize..5, seed in any::<u64>(), extra in prop::collection::vec(0usize..2, 1..3)) {
        let alg = algebra(k);
        let m = random_module(&alg, seed, 9).unwrap();
        let minimal = syzygy(&m).unwrap();
        let padded = SyzygyPresentation::padded(&m, &extra, seed).unwrap();
        padded.check().unwrap();
        prop_assert!(minimal.is_small());
        prop_assert_eq!(padded.omega.dim(), minimal.omega.dim() + padded.pmod.dim() - minimal.pmod.dim());
        prop_assert!(is_stably_isomorphic(&minimal.omega, &padded.omega).unwrap());
    }

    #[test]
    fn omega_is_additive(k in 0usize..5, s1 in any::<u64>(), s2 in any::<u64>()) {
        let alg = algebra(k);
        let m = random_module(&alg, s1, 7).unwrap();
        let n = random_module(&alg, s2, 7).unwrap();
        let sum = direct_sum(&alg, &[m.clone(), n.clone()]).module;
        let lhs = syzygy(&sum).unwrap().omega;
        let rhs = direct_sum(&alg, &[syzygy(&m).unwrap().omega, syzygy(&n).unwrap().omega]).module;
        prop_assert!(heller::module::is_isomorphic(&lhs, &rhs).is_some());
    }

    #[test]
    fn hom_splits_into_stable_and_factoring(k in 0usize..5, s1 in any::<u64>(), s2 in any::<u64>()) {
        let alg = algebra(k);
        let m = random_module(&alg, s1, 8).unwrap();
        let n = random_module(&alg, s2, 8).unwrap();
        let st = stable_hom(&m, &n).unwrap();
        prop_assert_eq!(hom_space(&m, &n).dim(), st.dim() + st.proj_dim());
        prop_assert_eq!(st.proj_dim(), factoring_dim_by_definition(&m, &n));
    }

    #[test]
    fn stable_hom_is_additive(k in 0usize..5, s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let alg = algebra(k);
        let m1 = random_module(&alg, s1, 6).unwrap();
        let m2 = random_module(&alg, s2, 6).unwrap();
        let n = random_module(&alg, s3, 6).unwrap();
        let sum = direct_sum(&alg, &[m1.clone(), m2.clone()]).module;
        prop_assert_eq!(
            stable_hom(&sum, &n).unwrap().dim(),
            stable_hom(&m1, &n).unwrap().dim() + stable_hom(&m2, &n).unwrap().dim()
        );
    }

    #[test]
    fn reduce_ignores_projective_perturbation(k in 0usize..5, s1 in any::<u64>(), s2 in any::<u64>()) {
        let alg = algebra(k);
        let m = random_module(&alg, s1, 8).unwrap();
        let n = random_module(&alg, s2, 8).unwrap();
        let st = stable_hom(&m, &n).unwrap();
        let f = random_map(&m, &n, s1 ^ s2);
        let mut g = f.matrix.clone();
        for (i, b) in st.proj_basis().iter().enumerate() {
            g = g.add_scaled((i as u32 + 1) % m.p(), b);
        }
        prop_assert_eq!(st.reduce(&f.matrix), st.reduce(&g));
    }

    #[test]
    fn omega_is_functorial(k in 0usize..5, s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let alg = algebra(k);
        let (l, m, n) = (random_module(&alg, s1, 7).unwrap(), random_module(&alg, s2, 7).unwrap(), random_module(&alg, s3, 7).unwrap());
        let (pl, pm, pn) = (syzygy(&l).unwrap(), syzygy(&m).unwrap(), syzygy(&n).unwrap());
        let f = random_map(&l, &m, s1);
        let g = random_map(&m, &n, s2);
        let composite = omega_map(&f.then(&g), &pl, &pn).unwrap();
        let stepwise = omega_map(&f, &pl, &pm).unwrap().then(&omega_map(&g, &pm, &pn).unwrap());
        composite.check().unwrap();
        let st = stable_hom(&pl.omega, &pn.omega).unwrap();
        prop_assert!(st.factors_through_projective(&composite.matrix.sub(&stepwise.matrix)));
        let id = omega_map(&l.identity(), &pl, &pl).unwrap();
        let st_l = stable_hom(&pl.omega, &pl.omega).unwrap();
        prop_assert!(st_l.factors_through_projective(&id.matrix.sub(&FpMatrix::identity(l.p(), pl.omega.dim()))));
    }

    #[test]
    fn decompose_roundtrip(k in 0usize..5, seed in any::<u64>()) {
        let alg = algebra(k);
        let m = random_module(&alg, seed, 12).unwrap();
        let d = decompose(&m).unwrap();
        d.witness.check().unwrap();
        prop_assert!(d.witness.is_iso());
        prop_assert_eq!(d.expanded().iter().map(|s| s.dim()).sum::<usize>(), m.dim());
    }

    #[test]
    fn decompose_of_sum_is_union(k in 0usize..5, s1 in any::<u64>(), s2 in any::<u64>()) {
        let alg = algebra(k);
        let m = random_module(&alg, s1, 7).unwrap();
        let n = random_module(&alg, s2, 7).unwrap();
        let mut parts = decompose(&m).unwrap().expanded();
        parts.extend(decompose(&n).unwrap().expanded());
        let sum = direct_sum(&alg, &[m, n]).module;
        let whole = decompose(&sum).unwrap().expanded();
        prop_assert_eq!(common::iso_class_profile(&whole), common::iso_class_profile(&parts));
    }
}

#[test]
fn decompose_matches_brute_force_at_p2() {
    let mut checked = 0;
    for name in ["A", "B", "C5"] {
        let alg = builtin_algebra(name, 2).unwrap();
        for seed in 0..40 {
            let m = random_module(&alg, seed, 8).unwrap();
            let fast = decompose(&m).unwrap().expanded();
            let slow = common::brute_summands(&m);
            assert_eq!(
                common::iso_class_profile(&fast),
                common::iso_class_profile(&slow),
                "{name} seed {seed}"
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 120);
}

#[test]
fn random_modules_identify_over_catalog() {
    for (name, p) in [("A", 2), ("B", 3), ("C3", 3)] {
        let cat = heller::catalog::catalog_quotient(name, p).unwrap();
        let all = cat.with_projectives();
        for seed in 0..25 {
            let m = random_module(&cat.algebra, seed, 12).unwrap();
            let counts = identify(&m, &all).unwrap();
            let dim: usize = counts.iter().zip(&all).map(|(c, x)| c * x.dim()).sum();
            assert_eq!(dim, m.dim(), "{name} seed {seed}");
        }
    }
}
