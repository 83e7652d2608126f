//! Nonnegative integer solutions of `H·U = T` or `U·H = T`.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `H·U = T`, solved column by column.
    URight,
    /// `U·H = T`, solved row by row.
    ULeft,
}

/// Why a column (or row) has no solution: the target has a positive entry
/// at `witness_row`, every generator able to contribute there is listed in
/// `candidates`, and each candidate also contributes at a row where the
/// target is zero (`blocking_rows`, aligned with `candidates`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringArgument {
    pub witness_row: usize,
    pub candidates: Vec<usize>,
    pub blocking_rows: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfeasibleSlice {
    /// Column (for `URight`) or row (for `ULeft`), 0-based.
    pub index: usize,
    /// Number of branches explored before exhaustion.
    pub branches: u64,
    pub argument: Option<CoveringArgument>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonnegSolution {
    pub orientation: Orientation,
    /// All solutions for each column (resp. row) of `U`.
    pub slices: Vec<Vec<Vec<usize>>>,
    pub infeasible: Vec<InfeasibleSlice>,
}

impl NonnegSolution {
    pub fn is_feasible(&self) -> bool {
        self.infeasible.is_empty()
    }

    /// One solution matrix `U` built from the first solution of each slice.
    pub fn first_solution(&self) -> Option<Vec<Vec<usize>>> {
        if !self.is_feasible() {
            return None;
        }
        let n = self.slices.len();
        let firsts: Vec<&Vec<usize>> = self.slices.iter().map(|s| &s[0]).collect();
        let k = firsts.first().map_or(0, |v| v.len());
        Some(match self.orientation {
            Orientation::ULeft => firsts.into_iter().cloned().collect(),
            Orientation::URight => (0..k).map(|r| (0..n).map(|c| firsts[c][r]).collect()).collect(),
        })
    }

    /// Human readable account of the infeasible slices, 1-based.
    pub fn render_trace(&self) -> Vec<String> {
        let what = match self.orientation {
            Orientation::URight => "column",
            Orientation::ULeft => "row",
        };
        self.infeasible
            .iter()
            .map(|s| match &s.argument {
                Some(a) => format!(
                    "{what} {} infeasible: row {} is positive, so a coefficient at one of columns {:?} of H is needed; \
                     these force rows {:?} positive, where the target is 0",
                    s.index + 1,
                    a.witness_row + 1,
                    a.candidates.iter().map(|c| c + 1).collect::<Vec<_>>(),
                    a.blocking_rows.iter().map(|r| r + 1).collect::<Vec<_>>()
                ),
                None => format!("{what} {} infeasible after exhausting {} branches", s.index + 1, s.branches),
            })
            .collect()
    }
}

/// All `u ≥ 0` with `Σ_k m[r][k]·u[k] = t[r]` for every r, where
/// `u[k] ≤ t[k]` (valid because `m[k][k] ≥ 1`).
fn solve_vector(m: &[Vec<usize>], t: &[usize]) -> (Vec<Vec<usize>>, u64) {
    let n = t.len();
    let mut out = Vec::new();
    let mut u = vec![0usize; n];
    let mut acc = vec![0usize; m.len()];
    let mut branches = 0u64;
    fn go(
        k: usize,
        m: &[Vec<usize>],
        t: &[usize],
        u: &mut Vec<usize>,
        acc: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        branches: &mut u64,
    ) {
        *branches += 1;
        if k == u.len() {
            if acc.as_slice() == t {
                out.push(u.clone());
            }
            return;
        }
        let bound = t[k];
        for v in 0..=bound {
            if v > 0 {
                let mut over = false;
                for r in 0..m.len() {
                    acc[r] += m[r][k];
                    over |= acc[r] > t[r];
                }
                if over {
                    for r in 0..m.len() {
                        acc[r] -= m[r][k] * v;
                    }
                    u[k] = 0;
                    return;
                }
            }
            u[k] = v;
            go(k + 1, m, t, u, acc, out, branches);
        }
        for r in 0..m.len() {
            acc[r] -= m[r][k] * bound;
        }
        u[k] = 0;
    }
    go(0, m, t, &mut u, &mut acc, &mut out, &mut branches);
    (out, branches)
}

fn covering_argument(m: &[Vec<usize>], t: &[usize]) -> Option<CoveringArgument> {
    for (r, &tr) in t.iter().enumerate() {
        if tr == 0 {
            continue;
        }
        let candidates: Vec<usize> = (0..t.len()).filter(|&k| m[r][k] > 0).collect();
        let blocking: Vec<Option<usize>> =
            candidates.iter().map(|&k| (0..m.len()).find(|&b| t[b] == 0 && m[b][k] > 0)).collect();
        if blocking.iter().all(|b| b.is_some()) {
            return Some(CoveringArgument {
                witness_row: r,
                candidates,
                blocking_rows: blocking.into_iter().flatten().collect(),
            });
        }
    }
    None
}

/// Solves `H·U = T` or `U·H = T` over the nonnegative integers, returning
/// every solution of every slice. Requires a square `H` with positive
/// diagonal.
pub fn nonneg_solve(h: &[Vec<usize>], target: &[Vec<usize>], orientation: Orientation) -> NonnegSolution {
    let n = h.len();
    assert!(h.iter().all(|r| r.len() == n), "H must be square");
    assert!((0..n).all(|i| h[i][i] >= 1), "H needs a positive diagonal");
    // m·u = t with m = H (columns) or Hᵀ (rows)
    let m: Vec<Vec<usize>> = match orientation {
        Orientation::URight => h.to_vec(),
        Orientation::ULeft => (0..n).map(|r| (0..n).map(|c| h[c][r]).collect()).collect(),
    };
    let slices: Vec<Vec<usize>> = match orientation {
        Orientation::URight => {
            let cols = target.first().map_or(0, |r| r.len());
            (0..cols).map(|c| target.iter().map(|r| r[c]).collect()).collect()
        }
        Orientation::ULeft => target.to_vec(),
    };
    let mut solutions = Vec::new();
    let mut infeasible = Vec::new();
    for (idx, t) in slices.iter().enumerate() {
        let (sols, branches) = solve_vector(&m, t);
        if sols.is_empty() {
            infeasible.push(InfeasibleSlice { index: idx, branches, argument: covering_argument(&m, t) });
        }
        solutions.push(sols);
    }
    NonnegSolution { orientation, slices: solutions, infeasible }
}

/// Solutions of a single row `u·H = t`, sorted lexicographically.
pub fn left_row_solutions(h: &[Vec<usize>], t: &[usize]) -> Vec<Vec<usize>> {
    let sol = nonneg_solve(h, &[t.to_vec()], Orientation::ULeft);
    sol.slices.into_iter().next().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(h: &[Vec<usize>], t: &[usize]) -> Vec<Vec<usize>> {
        let n = t.len();
        let mut out = Vec::new();
        let total: usize = t.iter().map(|&b| b + 1).product();
        for code in 0..total {
            let mut c = code;
            let u: Vec<usize> = t
                .iter()
                .map(|&b| {
                    let v = c % (b + 1);
                    c /= b + 1;
                    v
                })
                .collect();
            if (0..n).all(|r| (0..n).map(|k| h[r][k] * u[k]).sum::<usize>() == t[r]) {
                out.push(u);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn identity_system() {
        let h = vec![vec![1, 0], vec![0, 1]];
        let t = vec![vec![2, 0], vec![1, 3]];
        let s = nonneg_solve(&h, &t, Orientation::URight);
        assert_eq!(s.first_solution().unwrap(), t);
        let s = nonneg_solve(&h, &t, Orientation::ULeft);
        assert_eq!(s.first_solution().unwrap(), t);
    }

    #[test]
    fn target_equal_to_h_admits_identity() {
        let h = vec![vec![1, 1, 0], vec![0, 2, 1], vec![1, 0, 1]];
        let s = nonneg_solve(&h, &h, Orientation::URight);
        for (c, sols) in s.slices.iter().enumerate() {
            let e: Vec<usize> = (0..3).map(|r| usize::from(r == c)).collect();
            assert!(sols.contains(&e));
        }
    }

    #[test]
    fn covering_argument_on_small_case() {
        let h = vec![vec![1, 0], vec![1, 1]];
        let t = vec![vec![1], vec![0]];
        let s = nonneg_solve(&h, &t, Orientation::URight);
        assert!(!s.is_feasible());
        let arg = s.infeasible[0].argument.clone().unwrap();
        assert_eq!(arg, CoveringArgument { witness_row: 0, candidates: vec![0], blocking_rows: vec![1] });
        assert!(s.render_trace()[0].starts_with("column 1 infeasible"));
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(
            offdiag in proptest::collection::vec(0usize..3, 6),
            diag in proptest::collection::vec(1usize..3, 3),
            t in proptest::collection::vec(0usize..5, 3),
        ) {
            let mut h = vec![vec![0; 3]; 3];
            let mut it = offdiag.into_iter();
            for r in 0..3 {
                for c in 0..3 {
                    h[r][c] = if r == c { diag[r] } else { it.next().unwrap() };
                }
            }
            let tm: Vec<Vec<usize>> = t.iter().map(|&x| vec![x]).collect();
            let mut got = nonneg_solve(&h, &tm, Orientation::URight).slices[0].clone();
            got.sort();
            prop_assert_eq!(got, brute(&h, &t));
            let ht: Vec<Vec<usize>> = (0..3).map(|r| (0..3).map(|c| h[c][r]).collect()).collect();
            let mut got = left_row_solutions(&h, &t);
            got.sort();
            prop_assert_eq!(got, brute(&ht, &t));
        }
    }
}
