//! Exact eigenvalue certificate for `Γ_{q,m}` and the bipartite mixing check.
//!
//! With `A` the adjacency matrix and `M` the all-ones matrix between the two
//! parts, the walk count identity
//! `A^3 = (q-1) q^{m-2} M + q^{m-1} A`
//! is checked entry by entry in integer arithmetic. Every eigenvector
//! orthogonal to the two degree eigenvectors is killed by `M`, so the identity
//! forces `λ^3 = q^{m-1} λ` and hence `λ_2 = q^{(m-1)/2}`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::polarity::{sorted_intersection_len, PolarityGraph};

/// Largest `n = q^2 + q^m` for the dense cube.
pub const DENSE_LIMIT: usize = 4000;

/// Largest `n` for the floating-point eigensolve cross-check.
pub const EIGEN_LIMIT: usize = 2000;

/// Dense integer view of `A` (X first, then Y).
#[derive(Debug, Clone)]
pub struct IntMatrixView {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrixView {
    pub fn adjacency(g: &PolarityGraph) -> Self {
        let (nx, n) = (g.x_count(), g.x_count() + g.y_count());
        let mut data = vec![0i64; n * n];
        for y in 0..g.y_count() {
            for &x in g.y_neighbors(y) {
                data[x as usize * n + nx + y] = 1;
                data[(nx + y) * n + x as usize] = 1;
            }
        }
        IntMatrixView { n, data }
    }

    /// `M(i, j) = 1` iff `i` and `j` lie in opposite parts.
    pub fn bipartite_ones(g: &PolarityGraph) -> Self {
        let (nx, n) = (g.x_count(), g.x_count() + g.y_count());
        let mut data = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = i64::from((i < nx) != (j < nx));
            }
        }
        IntMatrixView { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

/// Adjacency lists over the combined vertex set (X ids first).
fn combined_neighbors(g: &PolarityGraph) -> Vec<Vec<u32>> {
    let nx = g.x_count();
    let mut out = Vec::with_capacity(nx + g.y_count());
    for x in 0..nx {
        out.push(g.x_neighbors(x).iter().map(|&y| y + nx as u32).collect());
    }
    for y in 0..g.y_count() {
        out.push(g.y_neighbors(y).to_vec());
    }
    out
}

/// `A^3` computed as `A * (A * A)` with integer rows.
pub fn adjacency_cube(g: &PolarityGraph) -> Result<IntMatrixView> {
    let n = g.x_count() + g.y_count();
    if n > DENSE_LIMIT {
        return Err(Error::DenseGuard {
            n,
            limit: DENSE_LIMIT,
        });
    }
    let nb = combined_neighbors(g);
    let square: Vec<i64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            let mut row = vec![0i64; n];
            for &w in &nb[u] {
                for &z in &nb[w as usize] {
                    row[z as usize] += 1;
                }
            }
            row
        })
        .collect();
    let cube: Vec<i64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            let mut row = vec![0i64; n];
            for &w in &nb[u] {
                let src = &square[w as usize * n..(w as usize + 1) * n];
                for (r, s) in row.iter_mut().zip(src) {
                    *r += s;
                }
            }
            row
        })
        .collect();
    Ok(IntMatrixView { n, data: cube })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubeReport {
    pub q: u64,
    pub m: usize,
    pub mode: CubeMode,
    /// Entries compared against the right-hand side.
    pub entries_checked: u64,
    pub max_abs_deviation: i64,
    pub trace_a: Option<i64>,
    pub trace_a2: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubeMode {
    Exact,
    Sampled,
}

impl CubeReport {
    pub fn passed(&self) -> bool {
        let edges = 2 * (self.q as i64).pow(self.m as u32 + 1);
        self.max_abs_deviation == 0
            && self.trace_a.is_none_or(|t| t == 0)
            && self.trace_a2.is_none_or(|t| t == edges)
    }
}

fn cube_rhs(q: i64, m: u32, opposite: bool, adjacent: bool) -> i64 {
    let ones = if opposite { (q - 1) * q.pow(m - 2) } else { 0 };
    ones + if adjacent { q.pow(m - 1) } else { 0 }
}

/// Dense check of the cube identity; every entry must match exactly.
pub fn verify_cube_identity(g: &PolarityGraph) -> Result<CubeReport> {
    let cube = adjacency_cube(g)?;
    let a = IntMatrixView::adjacency(g);
    let (q, m, nx, n) = (g.q() as i64, g.m() as u32, g.x_count(), cube.dim());
    let max_abs_deviation = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let rhs = cube_rhs(q, m, (i < nx) != (j < nx), a.get(i, j) == 1);
                    (cube.get(i, j) - rhs).abs()
                })
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    let trace_a2: i64 = (0..n).map(|i| a.row(i).iter().sum::<i64>()).sum();
    Ok(CubeReport {
        q: g.q(),
        m: g.m(),
        mode: CubeMode::Exact,
        entries_checked: (n * n) as u64,
        max_abs_deviation,
        trace_a: Some(a.trace()),
        trace_a2: Some(trace_a2),
    })
}

/// Length-3 walks from `x` to `y`, counted through neighbour lists.
pub fn walk_count_xy(g: &PolarityGraph, x: usize, y: usize) -> i64 {
    // walks x -> y' -> x' -> y
    g.x_neighbors(x)
        .iter()
        .map(|&yp| sorted_intersection_len(g.y_neighbors(yp as usize), g.y_neighbors(y)) as i64)
        .sum()
}

/// Sampled variant: checks `A^3(x, y)` for `pairs` random `(x, y)`.
/// Same-part entries of `A^3` vanish because the graph is bipartite.
pub fn verify_walk_counts(g: &PolarityGraph, pairs: usize, seed: u64) -> CubeReport {
    let (q, m) = (g.q() as i64, g.m() as u32);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<(usize, usize)> = (0..pairs)
        .map(|_| (rng.gen_range(0..g.x_count()), rng.gen_range(0..g.y_count())))
        .collect();
    let max_abs_deviation = samples
        .par_iter()
        .map(|&(x, y)| (walk_count_xy(g, x, y) - cube_rhs(q, m, true, g.is_adjacent(x, y))).abs())
        .max()
        .unwrap_or(0);
    CubeReport {
        q: g.q(),
        m: g.m(),
        mode: CubeMode::Sampled,
        entries_checked: pairs as u64,
        max_abs_deviation,
        trace_a: None,
        trace_a2: None,
    }
}

/// Eigenvalues implied by a verified cube identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralCertificate {
    /// `sqrt(d1 d2) = q^{m/2}`.
    pub lambda1: f64,
    /// `q^{(m-1)/2}`.
    pub lambda2: f64,
}

pub fn second_eigenvalue(g: &PolarityGraph, report: &CubeReport) -> Result<SpectralCertificate> {
    if !report.passed() || report.q != g.q() || report.m != g.m() {
        return Err(Error::IdentityNotVerified);
    }
    let q = g.q() as f64;
    let d1 = q.powi(g.m() as i32 - 1);
    let d2 = q;
    Ok(SpectralCertificate {
        lambda1: (d1 * d2).sqrt(),
        lambda2: q.powf((g.m() as f64 - 1.0) / 2.0),
    })
}

/// All eigenvalues of `A` in decreasing order (floating-point oracle).
pub fn eigenvalues_dense(g: &PolarityGraph) -> Result<Vec<f64>> {
    let n = g.x_count() + g.y_count();
    if n > EIGEN_LIMIT {
        return Err(Error::DenseGuard {
            n,
            limit: EIGEN_LIMIT,
        });
    }
    let a = IntMatrixView::adjacency(g);
    let mat = DMatrix::from_fn(n, n, |i, j| a.get(i, j) as f64);
    let mut ev: Vec<f64> = mat.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingReport {
    pub s: usize,
    pub t: usize,
    pub edges: u64,
    /// `(d2 / |X|) |S| |T| = |S| |T| / q`.
    pub expected: f64,
    /// `λ_2 sqrt(|S| |T|)`.
    pub bound: f64,
    pub passed: bool,
}

/// Counts `e(S, T)` and tests `|e - |S||T|/q| <= q^{(m-1)/2} sqrt(|S||T|)`.
/// The comparison is done after squaring, in integers.
pub fn mixing_check(g: &PolarityGraph, s: &[usize], t: &[usize]) -> MixingReport {
    let mut in_s = vec![false; g.x_count()];
    for &x in s {
        in_s[x] = true;
    }
    let edges: u64 = t
        .iter()
        .map(|&y| g.y_neighbors(y).iter().filter(|&&x| in_s[x as usize]).count() as u64)
        .sum();
    let q = g.q() as i128;
    let st = (s.len() * t.len()) as i128;
    let lhs = q * edges as i128 - st;
    let passed = lhs * lhs <= q * q * q.pow(g.m() as u32 - 1) * st;
    let lambda2 = (g.q() as f64).powf((g.m() as f64 - 1.0) / 2.0);
    MixingReport {
        s: s.len(),
        t: t.len(),
        edges,
        expected: st as f64 / g.q() as f64,
        bound: lambda2 * (st as f64).sqrt(),
        passed,
    }
}

/// `count` seeded random pairs `S ⊆ X`, `T ⊆ Y` of random sizes, each
/// checked with [`mixing_check`].
pub fn mixing_trials(g: &PolarityGraph, count: usize, seed: u64) -> Vec<MixingReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let ps: f64 = rng.gen();
            let pt: f64 = rng.gen();
            let s: Vec<usize> = (0..g.x_count()).filter(|_| rng.gen_bool(ps)).collect();
            let t: Vec<usize> = (0..g.y_count()).filter(|_| rng.gen_bool(pt)).collect();
            mixing_check(g, &s, &t)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_identity_small() {
        for (q, m) in [(3, 2), (5, 2), (3, 3)] {
            let g = PolarityGraph::build(q, m).unwrap();
            let r = verify_cube_identity(&g).unwrap();
            assert_eq!(r.max_abs_deviation, 0);
            assert_eq!(r.trace_a, Some(0));
            assert_eq!(r.trace_a2, Some(2 * (q as i64).pow(m as u32 + 1)));
            assert!(r.passed());
        }
    }

    #[test]
    fn cube_entries_match_walk_cases() {
        let g = PolarityGraph::build(3, 2).unwrap();
        let cube = adjacency_cube(&g).unwrap();
        let nx = g.x_count();
        for x in 0..nx {
            for y in 0..g.y_count() {
                let expect = if g.is_adjacent(x, y) { 3 + 2 } else { 2 };
                assert_eq!(cube.get(x, nx + y), expect);
                assert_eq!(walk_count_xy(&g, x, y), expect);
            }
        }
    }

    #[test]
    fn sampled_mode_agrees() {
        let g = PolarityGraph::build(7, 3).unwrap();
        let r = verify_walk_counts(&g, 2000, 3);
        assert_eq!(r.max_abs_deviation, 0);
        assert!(r.passed());
    }

    #[test]
    fn corrupted_graph_breaks_identity() {
        let g = PolarityGraph::build(5, 2).unwrap();
        let bad = g.without_edge(g.y_neighbors(0)[0] as usize, 0);
        let r = verify_cube_identity(&bad).unwrap();
        assert!(r.max_abs_deviation > 0);
        assert_eq!(second_eigenvalue(&bad, &r), Err(Error::IdentityNotVerified));
    }

    #[test]
    fn dense_guard() {
        let g = PolarityGraph::build(17, 3).unwrap();
        assert!(matches!(
            verify_cube_identity(&g),
            Err(Error::DenseGuard { n: 5202, .. })
        ));
    }

    #[test]
    fn derived_eigenvalues() {
        let g = PolarityGraph::build(5, 2).unwrap();
        let cert = second_eigenvalue(&g, &verify_cube_identity(&g).unwrap()).unwrap();
        assert!((cert.lambda2 - 5f64.sqrt()).abs() < 1e-12);
        assert!((cert.lambda1 - 5.0).abs() < 1e-12);

        let g = PolarityGraph::build(3, 3).unwrap();
        let cert = second_eigenvalue(&g, &verify_cube_identity(&g).unwrap()).unwrap();
        assert!((cert.lambda2 - 3.0).abs() < 1e-12);
    }

    #[test]
    fn eigensolve_oracle() {
        let g = PolarityGraph::build(3, 2).unwrap();
        let ev = eigenvalues_dense(&g).unwrap();
        assert!((ev[0] - 3.0).abs() < 1e-8);
        assert!((ev[1] - 3f64.sqrt()).abs() < 1e-8);
        assert!((ev[ev.len() - 1] + 3.0).abs() < 1e-8);
    }

    #[test]
    fn mixing_edge_cases() {
        let g = PolarityGraph::build(5, 2).unwrap();
        let all_x: Vec<_> = (0..g.x_count()).collect();
        let all_y: Vec<_> = (0..g.y_count()).collect();
        let empty = mixing_check(&g, &[], &all_y);
        assert_eq!((empty.edges, empty.bound), (0, 0.0));
        assert!(empty.passed);
        let full = mixing_check(&g, &all_x, &all_y);
        assert_eq!(full.edges, 125);
        assert_eq!(full.expected, 125.0);
        assert!(full.passed);
    }

    #[test]
    fn mixing_detects_impossible_counts() {
        // a single y with all its q neighbours: e = q, expected = q/q = 1,
        // bound = sqrt(q) * sqrt(q) = q, so |q - 1| <= q holds
        let g = PolarityGraph::build(7, 2).unwrap();
        let s: Vec<usize> = g.y_neighbors(3).iter().map(|&x| x as usize).collect();
        assert!(mixing_check(&g, &s, &[3]).passed);
    }
}
