//! Finite-dimensional basic split algebras given by structure constants.
//!
//! The built-in family is the triangle algebra
//! `Λ(n, m, k) = F_p⟨e -a-> f, u on e, v on f⟩ / (uⁿ, vᵐ, uᵏa, ua - av)`,
//! i.e. the path algebra of `e → f` over truncated polynomial rings with the
//! arrow killed by `πᵏ`. Every algebra used by the catalog is of this shape.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{check_prime, FpMatrix};

/// Exponent bounds of a triangle algebra `Λ(n, m, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TriangleParams {
    pub n: usize,
    pub m: usize,
    pub k: usize,
}

impl TriangleParams {
    /// Basis index of `πˢe`.
    pub fn e_path(&self, s: usize) -> Option<usize> {
        (s < self.n).then_some(s)
    }

    /// Basis index of `πᵗf`.
    pub fn f_path(&self, t: usize) -> Option<usize> {
        (t < self.m).then_some(self.n + t)
    }

    /// Basis index of `πʳa`.
    pub fn a_path(&self, r: usize) -> Option<usize> {
        (r < self.k).then_some(self.n + self.m + r)
    }

    pub fn dim(&self) -> usize {
        self.n + self.m + self.k
    }
}

pub struct BasedAlgebra {
    p: u32,
    dim: usize,
    labels: Vec<String>,
    /// `mul[(i * dim + j) * dim + l]` is the coefficient of `b_l` in `b_i · b_j`.
    mul: Vec<u32>,
    idempotents: Vec<usize>,
    radical: Vec<usize>,
    name: Option<String>,
    triangle: Option<TriangleParams>,
    right_regular: OnceLock<Vec<FpMatrix>>,
    rad_generators: OnceLock<Vec<usize>>,
    projective_bases: OnceLock<Vec<FpMatrix>>,
}

impl std::fmt::Debug for BasedAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BasedAlgebra")
            .field("name", &self.name)
            .field("p", &self.p)
            .field("dim", &self.dim)
            .field("labels", &self.labels)
            .finish()
    }
}

impl PartialEq for BasedAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.dim == other.dim
            && self.mul == other.mul
            && self.idempotents == other.idempotents
            && self.radical == other.radical
    }
}

impl Eq for BasedAlgebra {}

/// JSON form of an algebra. `mul[i][j]` is the coefficient row of `b_i · b_j`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub p: u32,
    pub dim: usize,
    pub basis: Vec<String>,
    pub idempotents: Vec<usize>,
    pub radical: Vec<usize>,
    pub mul: Vec<Vec<Vec<i64>>>,
}

/// Outcome of [`validate_algebra`]: one entry per failed check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn mentions(&self, check: &str) -> bool {
        self.failures.iter().any(|f| f.starts_with(check))
    }
}

impl BasedAlgebra {
    /// Assembles an algebra from raw parts without validation.
    pub fn from_parts_unchecked(
        p: u32,
        labels: Vec<String>,
        mul: Vec<u32>,
        idempotents: Vec<usize>,
        radical: Vec<usize>,
    ) -> Self {
        let dim = labels.len();
        BasedAlgebra {
            p,
            dim,
            labels,
            mul,
            idempotents,
            radical,
            name: None,
            triangle: None,
            right_regular: OnceLock::new(),
            rad_generators: OnceLock::new(),
            projective_bases: OnceLock::new(),
        }
    }

    /// Assembles and validates an algebra.
    pub fn from_parts(
        p: u32,
        labels: Vec<String>,
        mul: Vec<u32>,
        idempotents: Vec<usize>,
        radical: Vec<usize>,
    ) -> Result<Arc<Self>> {
        check_prime(p)?;
        let dim = labels.len();
        if mul.len() != dim * dim * dim {
            return Err(Error::InvalidAlgebra(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                mul.len()
            )));
        }
        let alg = Self::from_parts_unchecked(p, labels, mul, idempotents, radical);
        let report = validate_algebra(&alg);
        if !report.is_ok() {
            return Err(Error::InvalidAlgebra(report.failures.join("; ")));
        }
        Ok(Arc::new(alg))
    }

    pub fn from_json(json: &AlgebraJson) -> Result<Arc<Self>> {
        let p = check_prime(json.p)?;
        let dim = json.dim;
        if json.basis.len() != dim {
            return Err(Error::InvalidAlgebra(format!("{} basis labels for dim {dim}", json.basis.len())));
        }
        if json.mul.len() != dim || json.mul.iter().any(|r| r.len() != dim || r.iter().any(|c| c.len() != dim)) {
            return Err(Error::InvalidAlgebra(format!("`mul` must be a {dim}x{dim}x{dim} array")));
        }
        let mul = json
            .mul
            .iter()
            .flat_map(|r| r.iter().flat_map(|c| c.iter().map(|&x| crate::linalg::reduce(x, p))))
            .collect();
        Self::from_parts(p, json.basis.clone(), mul, json.idempotents.clone(), json.radical.clone())
    }

    pub fn to_json(&self) -> AlgebraJson {
        let d = self.dim;
        AlgebraJson {
            p: self.p,
            dim: d,
            basis: self.labels.clone(),
            idempotents: self.idempotents.clone(),
            radical: self.radical.clone(),
            mul: (0..d)
                .map(|i| (0..d).map(|j| self.product(i, j).iter().map(|&x| x as i64).collect()).collect())
                .collect(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    pub fn radical(&self) -> &[usize] {
        &self.radical
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn triangle(&self) -> Option<TriangleParams> {
        self.triangle
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Coefficient row of `b_i · b_j`.
    pub fn product(&self, i: usize, j: usize) -> &[u32] {
        let d = self.dim;
        &self.mul[(i * d + j) * d..(i * d + j + 1) * d]
    }

    /// Product of two algebra elements given as coefficient rows.
    pub fn multiply(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let p = self.p;
        let mut out = vec![0u32; self.dim];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let c = a * b % p;
                for (o, &s) in out.iter_mut().zip(self.product(i, j)) {
                    *o = (*o + c * s) % p;
                }
            }
        }
        out
    }

    pub fn unit_vector(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    /// Right multiplication by `b_j` on the algebra, row `i` = `b_i · b_j`.
    pub fn right_regular(&self, j: usize) -> &FpMatrix {
        &self.right_regular.get_or_init(|| {
            (0..self.dim)
                .map(|j| {
                    let mut m = FpMatrix::zeros(self.p, self.dim, self.dim);
                    for i in 0..self.dim {
                        for (l, &c) in self.product(i, j).iter().enumerate() {
                            m.set(i, l, c);
                        }
                    }
                    m
                })
                .collect()
        })[j]
    }

    /// Radical basis elements that generate the radical modulo its square.
    pub fn radical_generators(&self) -> &[usize] {
        self.rad_generators.get_or_init(|| {
            let p = self.p;
            let mut rows = Vec::new();
            for &i in &self.radical {
                for &j in &self.radical {
                    rows.push(self.product(i, j).to_vec());
                }
            }
            let mut span = FpMatrix::from_raw(p, rows.len(), self.dim, rows.concat()).row_basis();
            let mut gens = Vec::new();
            for &r in &self.radical {
                let v = FpMatrix::row_vector(p, self.unit_vector(r));
                let ext = span.vstack(&v);
                if ext.rank() > span.rows() {
                    span = ext.row_basis();
                    gens.push(r);
                }
            }
            gens
        })
    }

    /// For each listed idempotent `e_i`, a basis (rows, algebra coordinates) of `e_i·Λ`.
    pub fn projective_bases(&self) -> &[FpMatrix] {
        self.projective_bases.get_or_init(|| {
            self.idempotents
                .iter()
                .map(|&e| {
                    let rows: Vec<u32> = (0..self.dim).flat_map(|k| self.product(e, k).to_vec()).collect();
                    FpMatrix::from_raw(self.p, self.dim, self.dim, rows).row_basis()
                })
                .collect()
        })
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

/// Checks every structural invariant and names each failure.
pub fn validate_algebra(alg: &BasedAlgebra) -> ValidationReport {
    let mut failures = Vec::new();
    let p = alg.p;
    let d = alg.dim;
    if !crate::linalg::is_prime(p) {
        failures.push(format!("prime: {p} is not prime"));
        return ValidationReport { failures };
    }
    if alg.mul.len() != d * d * d || alg.mul.iter().any(|&c| c >= p) {
        failures.push("coefficients: structure constants malformed".into());
        return ValidationReport { failures };
    }
    if alg.idempotents.iter().chain(&alg.radical).any(|&i| i >= d) {
        failures.push("basis partition: index out of range".into());
        return ValidationReport { failures };
    }

    'assoc: for i in 0..d {
        for j in 0..d {
            let ij = alg.product(i, j).to_vec();
            for k in 0..d {
                let left = alg.multiply(&ij, &alg.unit_vector(k));
                let right = alg.multiply(&alg.unit_vector(i), alg.product(j, k));
                if left != right {
                    failures.push(format!(
                        "associativity: (b{i}·b{j})·b{k} != b{i}·(b{j}·b{k}) [{} {} {}]",
                        alg.labels[i], alg.labels[j], alg.labels[k]
                    ));
                    break 'assoc;
                }
            }
        }
    }

    let mut sum = vec![0u32; d];
    for &e in &alg.idempotents {
        sum[e] = (sum[e] + 1) % p;
    }
    for (a, &e) in alg.idempotents.iter().enumerate() {
        for (b, &f) in alg.idempotents.iter().enumerate() {
            let expect = if a == b { alg.unit_vector(e) } else { vec![0; d] };
            if alg.product(e, f) != expect.as_slice() {
                failures.push(format!("orthogonal idempotents: {}·{} wrong", alg.labels[e], alg.labels[f]));
            }
        }
    }
    for k in 0..d {
        let v = alg.unit_vector(k);
        if alg.multiply(&sum, &v) != v || alg.multiply(&v, &sum) != v {
            failures.push(format!("identity: idempotents do not sum to 1 (fails on {})", alg.labels[k]));
            break;
        }
    }

    let mut seen = vec![0usize; d];
    for &i in alg.idempotents.iter().chain(&alg.radical) {
        seen[i] += 1;
    }
    if seen.iter().any(|&c| c != 1) {
        failures.push("basis partition: idempotents and radical must partition the basis".into());
    }

    let in_radical = |v: &[u32]| v.iter().enumerate().all(|(l, &c)| c == 0 || alg.radical.contains(&l));
    'ideal: for &r in &alg.radical {
        for b in 0..d {
            if !in_radical(alg.product(r, b)) || !in_radical(alg.product(b, r)) {
                failures.push(format!(
                    "radical ideal closure: products of {} with {} leave the radical span",
                    alg.labels[r], alg.labels[b]
                ));
                break 'ideal;
            }
        }
    }

    // Powers of the radical must reach zero.
    let mut power: Vec<Vec<u32>> = alg.radical.iter().map(|&r| alg.unit_vector(r)).collect();
    let mut nilpotent = power.is_empty();
    for _ in 0..=d {
        let mut next = Vec::new();
        for x in &power {
            for &r in &alg.radical {
                next.extend(alg.multiply(x, &alg.unit_vector(r)));
            }
        }
        let rows = next.len() / d.max(1);
        let basis = FpMatrix::from_raw(p, rows, d, next).row_basis();
        if basis.rows() == 0 {
            nilpotent = true;
            break;
        }
        power = (0..basis.rows()).map(|i| basis.row(i).to_vec()).collect();
    }
    if !nilpotent {
        failures.push("radical nilpotency: some power of the radical is nonzero".into());
    }

    ValidationReport { failures }
}

/// The triangle algebra `Λ(n, m, k)` over F_p.
pub fn triangle_algebra(p: u32, n: usize, m: usize, k: usize) -> Result<Arc<BasedAlgebra>> {
    check_prime(p)?;
    if n == 0 || m == 0 || k == 0 || k > n.min(m) {
        return Err(Error::InvalidAlgebra(format!(
            "triangle algebra needs n, m ≥ 1 and 1 ≤ k ≤ min(n, m); got ({n}, {m}, {k})"
        )));
    }
    let params = TriangleParams { n, m, k };
    let d = params.dim();
    let mut labels = Vec::with_capacity(d);
    let pow_label = |s: usize, g: &str| match s {
        0 => g.to_string(),
        1 => format!("pi*{g}"),
        _ => format!("pi^{s}*{g}"),
    };
    labels.extend((0..n).map(|s| pow_label(s, "e")));
    labels.extend((0..m).map(|t| pow_label(t, "f")));
    labels.extend((0..k).map(|r| pow_label(r, "a")));

    let mut mul = vec![0u32; d * d * d];
    let mut set = |i: usize, j: usize, l: Option<usize>| {
        if let Some(l) = l {
            mul[(i * d + j) * d + l] = 1;
        }
    };
    for s in 0..n {
        for s2 in 0..n {
            set(s, s2, params.e_path(s + s2));
        }
        for r in 0..k {
            set(s, n + m + r, params.a_path(s + r));
        }
    }
    for t in 0..m {
        for t2 in 0..m {
            set(n + t, n + t2, params.f_path(t + t2));
        }
    }
    for r in 0..k {
        for t in 0..m {
            set(n + m + r, n + t, params.a_path(r + t));
        }
    }
    let radical = (0..d).filter(|&i| i != 0 && i != n).collect();
    let mut alg = BasedAlgebra::from_parts_unchecked(p, labels, mul, vec![0, n], radical);
    alg.triangle = Some(params);
    alg.name = Some(format!("Lambda({n},{m},{k})"));
    let report = validate_algebra(&alg);
    if !report.is_ok() {
        return Err(Error::Internal(format!("triangle algebra failed validation: {:?}", report.failures)));
    }
    Ok(Arc::new(alg))
}

/// Names of the built-in algebras, in catalog order.
pub const BUILTIN_NAMES: [&str; 10] = ["A", "B", "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8"];

/// Triangle parameters of a built-in algebra.
pub fn builtin_params(name: &str) -> Result<TriangleParams> {
    let (n, m, k) = match name {
        "A" => (3, 3, 3),
        "B" => (3, 3, 2),
        "C1" => (3, 2, 2),
        "C2" => (3, 1, 1),
        "C3" => (2, 2, 2),
        "C4" => (3, 3, 1),
        "C5" => (3, 2, 1),
        "C6" => (2, 3, 2),
        "C7" => (1, 3, 1),
        "C8" => (2, 3, 1),
        _ => return Err(Error::UnknownAlgebra(name.to_string())),
    };
    Ok(TriangleParams { n, m, k })
}

/// Labels (in `A`'s basis) of the generators of the ideal `I` with `name = A/I`.
pub fn builtin_ideal_generators(name: &str) -> Result<&'static [&'static str]> {
    Ok(match name {
        "A" => &[],
        "B" => &["pi^2*a"],
        "C1" => &["pi^2*f"],
        "C2" => &["pi*f"],
        "C3" => &["pi^2*e", "pi^2*f"],
        "C4" => &["pi*a"],
        "C5" => &["pi*a", "pi^2*f"],
        "C6" => &["pi^2*e"],
        "C7" => &["pi*e"],
        "C8" => &["pi^2*e", "pi*a"],
        _ => return Err(Error::UnknownAlgebra(name.to_string())),
    })
}

pub fn builtin_algebra(name: &str, p: u32) -> Result<Arc<BasedAlgebra>> {
    let TriangleParams { n, m, k } = builtin_params(name)?;
    let alg = triangle_algebra(p, n, m, k)?;
    let mut alg = Arc::try_unwrap(alg).map_err(|_| Error::Internal("fresh algebra shared".into()))?;
    alg.name = Some(name.to_string());
    Ok(Arc::new(alg))
}

/// Recognizes an algebra given by structure constants as some `Λ(n, m, k)`
/// (same basis labels, same products), so catalog-based tools apply to it.
pub fn recognize_triangle(alg: &Arc<BasedAlgebra>) -> Option<Arc<BasedAlgebra>> {
    if alg.triangle().is_some() {
        return Some(alg.clone());
    }
    let n = alg.labels().iter().filter(|l| l.ends_with('e')).count();
    let m = alg.labels().iter().filter(|l| l.ends_with('f')).count();
    let k = alg.labels().iter().filter(|l| l.ends_with('a')).count();
    let t = triangle_algebra(alg.p(), n, m, k).ok()?;
    (t.labels() == alg.labels() && t.mul == alg.mul && t.idempotents() == alg.idempotents()).then_some(t)
}

/// The residue map `A → Λ(n, m, k)` sending each path to itself or to zero,
/// as a `dim A × dim Λ` matrix.
pub fn residue_map_from_a(target: &BasedAlgebra) -> Result<FpMatrix> {
    let t = target
        .triangle()
        .ok_or_else(|| Error::InvalidAlgebra("residue map needs a triangle algebra".into()))?;
    let a = TriangleParams { n: 3, m: 3, k: 3 };
    let mut map = FpMatrix::zeros(target.p(), a.dim(), t.dim());
    for s in 0..3 {
        if let (Some(src), Some(dst)) = (a.e_path(s), t.e_path(s)) {
            map.set(src, dst, 1);
        }
        if let (Some(src), Some(dst)) = (a.f_path(s), t.f_path(s)) {
            map.set(src, dst, 1);
        }
        if let (Some(src), Some(dst)) = (a.a_path(s), t.a_path(s)) {
            map.set(src, dst, 1);
        }
    }
    Ok(map)
}

/// Two-sided ideal generated by the given elements (rows), as a row basis.
pub fn two_sided_ideal(alg: &BasedAlgebra, generators: &[Vec<u32>]) -> FpMatrix {
    let d = alg.dim();
    let mut rows = Vec::new();
    for g in generators {
        for i in 0..d {
            let left = alg.multiply(&alg.unit_vector(i), g);
            for j in 0..d {
                rows.extend(alg.multiply(&left, &alg.unit_vector(j)));
            }
        }
    }
    let n = rows.len() / d.max(1);
    FpMatrix::from_raw(alg.p(), n, d, rows).row_basis()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_a_has_nine_paths() {
        let a = triangle_algebra(3, 3, 3, 3).unwrap();
        assert_eq!(a.dim(), 9);
        assert_eq!(a.idempotents().len(), 2);
        assert_eq!(a.radical().len(), 7);
        assert!(validate_algebra(&a).is_ok());
    }

    #[test]
    fn path_enumeration_oracle_for_a() {
        // Enumerate composable words in u (loop at e), a (e → f), v (loop at f),
        // rewrite with av → ua, and drop words containing u³ or v³.
        use std::collections::BTreeSet;
        let mut normal_forms = BTreeSet::new();
        for len in 0..=6usize {
            for code in 0..3usize.pow(len as u32) {
                let word: Vec<char> = (0..len).map(|i| ['u', 'a', 'v'][(code / 3usize.pow(i as u32)) % 3]).collect();
                // composable: u* a? v*
                let us = word.iter().take_while(|&&c| c == 'u').count();
                let rest = &word[us..];
                let has_a = rest.first() == Some(&'a');
                let vs = &rest[has_a as usize..];
                if !vs.iter().all(|&c| c == 'v') || (!has_a && us > 0 && !vs.is_empty()) {
                    continue;
                }
                let (start, u_pow, v_pow) = if has_a {
                    ("a", us + vs.len(), 0)
                } else if vs.is_empty() {
                    ("e", us, 0)
                } else {
                    ("f", 0, vs.len())
                };
                if u_pow >= 3 || v_pow >= 3 {
                    continue;
                }
                normal_forms.insert((start, u_pow, v_pow));
            }
        }
        // the empty word stands for e; f is reached as v⁰ only through the f-idempotent
        normal_forms.insert(("f", 0, 0));
        assert_eq!(normal_forms.len(), 9);
        assert_eq!(normal_forms.len(), triangle_algebra(2, 3, 3, 3).unwrap().dim());
    }

    #[test]
    fn hereditary_a2() {
        let a = triangle_algebra(2, 1, 1, 1).unwrap();
        assert_eq!(a.dim(), 3);
        assert!(a.radical().len() == 1);
    }

    #[test]
    fn builtins_and_dims() {
        assert_eq!(builtin_algebra("C3", 3).unwrap().dim(), 6);
        assert_eq!(builtin_algebra("B", 3).unwrap().triangle().unwrap(), TriangleParams { n: 3, m: 3, k: 2 });
        assert_eq!(builtin_algebra("A", 5).unwrap().triangle().unwrap(), TriangleParams { n: 3, m: 3, k: 3 });
        assert_eq!(builtin_algebra("C7", 2).unwrap().dim(), 5);
        assert!(matches!(builtin_algebra("C9", 2), Err(Error::UnknownAlgebra(_))));
        assert!(triangle_algebra(3, 2, 2, 3).is_err());
        assert!(triangle_algebra(4, 2, 2, 1).is_err());
    }

    #[test]
    fn radical_generators_of_a() {
        let a = builtin_algebra("A", 2).unwrap();
        let gens: Vec<_> = a.radical_generators().iter().map(|&i| a.labels()[i].clone()).collect();
        assert_eq!(gens, vec!["pi*e", "pi*f", "a"]);
    }

    #[test]
    fn perturbed_structure_constant_breaks_associativity() {
        let a = builtin_algebra("A", 3).unwrap();
        let mut json = a.to_json();
        // πe·πe := πe instead of π²e
        json.mul[1][1] = vec![0, 1, 0, 0, 0, 0, 0, 0, 0];
        let alg = BasedAlgebra::from_parts_unchecked(
            3,
            json.basis.clone(),
            json.mul.iter().flatten().flatten().map(|&x| x as u32).collect(),
            json.idempotents.clone(),
            json.radical.clone(),
        );
        let report = validate_algebra(&alg);
        assert!(report.mentions("associativity"), "{report:?}");
        assert!(BasedAlgebra::from_json(&json).is_err());
    }

    #[test]
    fn missing_radical_element_breaks_closure() {
        let a = builtin_algebra("A", 3).unwrap();
        let mut json = a.to_json();
        json.radical.retain(|&r| r != 2); // drop π²e
        let alg = BasedAlgebra::from_parts_unchecked(
            3,
            json.basis.clone(),
            json.mul.iter().flatten().flatten().map(|&x| x as u32).collect(),
            json.idempotents.clone(),
            json.radical.clone(),
        );
        let report = validate_algebra(&alg);
        assert!(report.mentions("radical ideal closure"), "{report:?}");
    }

    #[test]
    fn json_roundtrip_small() {
        let a = triangle_algebra(2, 1, 1, 1).unwrap();
        let back = BasedAlgebra::from_json(&a.to_json()).unwrap();
        assert_eq!(*back, *a);
    }

    #[test]
    fn triangularity() {
        for name in BUILTIN_NAMES {
            let alg = builtin_algebra(name, 2).unwrap();
            let t = alg.triangle().unwrap();
            let (e, f) = (alg.unit_vector(0), alg.unit_vector(t.n));
            for i in 0..alg.dim() {
                let b = alg.unit_vector(i);
                let fbe = alg.multiply(&alg.multiply(&f, &b), &e);
                assert!(fbe.iter().all(|&c| c == 0));
                let ebf = alg.multiply(&alg.multiply(&e, &b), &f);
                let is_a_path = i >= t.n + t.m;
                assert_eq!(ebf.iter().any(|&c| c != 0), is_a_path);
            }
        }
    }

    #[test]
    fn radical_nilpotency_index() {
        for name in BUILTIN_NAMES {
            let alg = builtin_algebra(name, 3).unwrap();
            let t = alg.triangle().unwrap();
            let mut power: Vec<Vec<u32>> = alg.radical().iter().map(|&r| alg.unit_vector(r)).collect();
            for _ in 1..1 + t.n.max(t.m) {
                power = power
                    .iter()
                    .flat_map(|x| alg.radical().iter().map(|&r| alg.multiply(x, &alg.unit_vector(r))))
                    .collect();
            }
            assert!(power.iter().flatten().all(|&c| c == 0), "{name}");
        }
    }

    #[test]
    fn quotients_match_their_ideals() {
        let a = builtin_algebra("A", 3).unwrap();
        for name in BUILTIN_NAMES {
            let target = builtin_algebra(name, 3).unwrap();
            let map = residue_map_from_a(&target).unwrap();
            // multiplicative on basis pairs
            for i in 0..9 {
                for j in 0..9 {
                    let lhs = FpMatrix::row_vector(3, a.product(i, j).to_vec()).mul(&map);
                    let rhs = target.multiply(map.row(i), map.row(j));
                    assert_eq!(lhs.row(0), rhs.as_slice(), "{name}: {i},{j}");
                }
            }
            let gens: Vec<Vec<u32>> = builtin_ideal_generators(name)
                .unwrap()
                .iter()
                .map(|l| a.unit_vector(a.label_index(l).unwrap()))
                .collect();
            let ideal = two_sided_ideal(&a, &gens);
            let kernel = map.left_kernel();
            assert_eq!(ideal.rows(), kernel.rows(), "{name}");
            assert_eq!(ideal.vstack(&kernel).rank(), ideal.rows(), "{name}");
        }
    }
}
