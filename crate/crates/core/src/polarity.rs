//! The bipartite incidence graph `Γ_{q,m}`.
//!
//! `X = F_q^2` and `Y = F_q^m`; `x = (x0, x1)` is adjacent to
//! `y = (y_0, ..., y_{m-1})` iff `x1 = sum_i y_i x0^i`. Vertex ids are fixed:
//! `x` has id `x0 * q + x1` and `y` has id `sum_i y_i q^i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{param, Error, Result};
use crate::ffield::{poly_eval_raw, PrimeModulus};

/// Largest number of incidences `q^{m+1}` we are willing to store.
pub const MAX_INCIDENCES: u64 = 1 << 25;

/// Exhaustive pair checks are used up to this many ordered pairs `q^{2m}`.
pub const EXHAUSTIVE_PAIR_LIMIT: u64 = 100_000_000;

/// Pairs drawn when the codegree check falls back to sampling.
pub const SAMPLED_PAIRS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarityGraph {
    q: PrimeModulus,
    m: usize,
    y_offsets: Vec<usize>,
    y_adj: Vec<u32>,
    x_offsets: Vec<usize>,
    x_adj: Vec<u32>,
}

fn checked_pow(q: u64, e: usize) -> Option<u64> {
    q.checked_pow(e as u32)
}

impl PolarityGraph {
    pub fn build(q: u64, m: usize) -> Result<Self> {
        let modulus = PrimeModulus::new(q)?;
        if !(2..=5).contains(&m) {
            return Err(param("m", m, "must satisfy 2 <= m <= 5"));
        }
        let incidences = checked_pow(q, m + 1).unwrap_or(u64::MAX);
        if incidences > MAX_INCIDENCES {
            return Err(Error::Budget(format!(
                "q^(m+1) = {q}^{} exceeds {MAX_INCIDENCES} incidences; lower q or m",
                m + 1
            )));
        }
        let qu = q as usize;
        let ny = qu.pow(m as u32);
        let nx = qu * qu;

        let mut y_adj = Vec::with_capacity(ny * qu);
        let mut coeffs = vec![0u64; m];
        for y in 0..ny {
            decode_into(y, q, &mut coeffs);
            for x0 in 0..q {
                let x1 = poly_eval_raw(modulus, &coeffs, x0);
                y_adj.push((x0 * q + x1) as u32);
            }
        }
        let y_offsets = (0..=ny).map(|i| i * qu).collect();
        let (x_offsets, x_adj) = invert(nx, ny, &y_adj, |y| (y * qu, (y + 1) * qu));

        Ok(PolarityGraph {
            q: modulus,
            m,
            y_offsets,
            y_adj,
            x_offsets,
            x_adj,
        })
    }

    pub fn q(&self) -> u64 {
        self.q.get()
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn x_count(&self) -> usize {
        self.x_offsets.len() - 1
    }

    pub fn y_count(&self) -> usize {
        self.y_offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.y_adj.len()
    }

    /// Sorted X-neighbours of `y`.
    #[inline]
    pub fn y_neighbors(&self, y: usize) -> &[u32] {
        &self.y_adj[self.y_offsets[y]..self.y_offsets[y + 1]]
    }

    /// Sorted ids of the `y` adjacent to `x`.
    #[inline]
    pub fn x_neighbors(&self, x: usize) -> &[u32] {
        &self.x_adj[self.x_offsets[x]..self.x_offsets[x + 1]]
    }

    pub fn x_coords(&self, x: usize) -> (u64, u64) {
        let q = self.q() as usize;
        ((x / q) as u64, (x % q) as u64)
    }

    pub fn y_coords(&self, y: usize) -> Vec<u64> {
        let mut c = vec![0; self.m];
        decode_into(y, self.q(), &mut c);
        c
    }

    pub fn y_id(&self, coeffs: &[u64]) -> usize {
        let q = self.q() as usize;
        coeffs.iter().rev().fold(0, |acc, &c| acc * q + c as usize)
    }

    pub fn x_id(&self, x0: u64, x1: u64) -> usize {
        (x0 * self.q() + x1) as usize
    }

    pub fn is_adjacent(&self, x: usize, y: usize) -> bool {
        self.y_neighbors(y).binary_search(&(x as u32)).is_ok()
    }

    pub fn codegree(&self, y1: usize, y2: usize) -> Result<usize> {
        let ny = self.y_count();
        for y in [y1, y2] {
            if y >= ny {
                return Err(Error::VertexOutOfRange { id: y, n: ny });
            }
        }
        if y1 == y2 {
            return Err(Error::SameVertex(y1));
        }
        Ok(sorted_intersection_len(self.y_neighbors(y1), self.y_neighbors(y2)))
    }

    /// A copy with the edge `xy` deleted; used for mutation tests.
    pub fn without_edge(&self, x: usize, y: usize) -> PolarityGraph {
        let ny = self.y_count();
        let mut y_offsets = Vec::with_capacity(ny + 1);
        let mut y_adj = Vec::with_capacity(self.y_adj.len());
        y_offsets.push(0);
        for yy in 0..ny {
            y_adj.extend(
                self.y_neighbors(yy)
                    .iter()
                    .copied()
                    .filter(|&xx| !(yy == y && xx as usize == x)),
            );
            y_offsets.push(y_adj.len());
        }
        let (x_offsets, x_adj) = invert(self.x_count(), ny, &y_adj, |yy| {
            (y_offsets[yy], y_offsets[yy + 1])
        });
        PolarityGraph {
            q: self.q,
            m: self.m,
            y_offsets,
            y_adj,
            x_offsets,
            x_adj,
        }
    }

    /// Checks properties (i)-(iii): `d(x) = q^{m-1}`, `d(y) = q` and
    /// `d(y1, y2) <= m - 1`. Pairs are exhausted when `exhaustive` is set and
    /// `q^{2m}` is small enough, otherwise [`SAMPLED_PAIRS`] random pairs are
    /// checked.
    pub fn verify_properties(&self, exhaustive: bool) -> GammaReport {
        let q = self.q() as usize;
        let dx = q.pow(self.m as u32 - 1);
        let mut properties = Vec::with_capacity(3);

        let bad_x = (0..self.x_count()).find(|&x| self.x_neighbors(x).len() != dx);
        properties.push(PropertyCheck {
            name: "(i) d(x) = q^(m-1)",
            passed: bad_x.is_none(),
            detail: match bad_x {
                None => format!("all {} x have degree {dx}", self.x_count()),
                Some(x) => format!("x={x} has degree {}", self.x_neighbors(x).len()),
            },
        });

        let bad_y = (0..self.y_count()).find(|&y| self.y_neighbors(y).len() != q);
        properties.push(PropertyCheck {
            name: "(ii) d(y) = q",
            passed: bad_y.is_none(),
            detail: match bad_y {
                None => format!("all {} y have degree {q}", self.y_count()),
                Some(y) => format!("y={y} has degree {}", self.y_neighbors(y).len()),
            },
        });

        let ny = self.y_count();
        let pairs_total = (ny as u64).saturating_mul(ny as u64);
        let exhaustive_mode = exhaustive && pairs_total <= EXHAUSTIVE_PAIR_LIMIT;
        let (max_codeg, checked, worst) = if exhaustive_mode {
            let (mx, worst) = (0..ny)
                .into_par_iter()
                .map(|a| {
                    let mut best = (0usize, (a, a));
                    for b in a + 1..ny {
                        let c = sorted_intersection_len(self.y_neighbors(a), self.y_neighbors(b));
                        if c > best.0 {
                            best = (c, (a, b));
                        }
                    }
                    best
                })
                .reduce(|| (0, (0, 0)), |l, r| if r.0 > l.0 { r } else { l });
            (mx, ny * (ny - 1) / 2, worst)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f9a);
            let mut best = (0usize, (0, 0));
            for _ in 0..SAMPLED_PAIRS {
                let a = rng.gen_range(0..ny);
                let mut b = rng.gen_range(0..ny - 1);
                if b >= a {
                    b += 1;
                }
                let c = sorted_intersection_len(self.y_neighbors(a), self.y_neighbors(b));
                if c > best.0 {
                    best = (c, (a, b));
                }
            }
            (best.0, SAMPLED_PAIRS, best.1)
        };
        properties.push(PropertyCheck {
            name: "(iii) d(y1,y2) <= m-1",
            passed: max_codeg < self.m,
            detail: format!(
                "max codegree {max_codeg} over {checked} {} pairs (attained at y={} and y={})",
                if exhaustive_mode { "distinct" } else { "sampled" },
                worst.0,
                worst.1
            ),
        });

        GammaReport {
            q: self.q(),
            m: self.m,
            properties,
        }
    }
}

fn decode_into(mut y: usize, q: u64, out: &mut [u64]) {
    for c in out.iter_mut() {
        *c = (y % q as usize) as u64;
        y /= q as usize;
    }
}

fn invert(
    nx: usize,
    ny: usize,
    y_adj: &[u32],
    range: impl Fn(usize) -> (usize, usize),
) -> (Vec<usize>, Vec<u32>) {
    let mut deg = vec![0usize; nx + 1];
    for &x in y_adj {
        deg[x as usize + 1] += 1;
    }
    for i in 0..nx {
        deg[i + 1] += deg[i];
    }
    let offsets = deg.clone();
    let mut fill = deg;
    let mut adj = vec![0u32; y_adj.len()];
    for y in 0..ny {
        let (lo, hi) = range(y);
        for &x in &y_adj[lo..hi] {
            adj[fill[x as usize]] = y as u32;
            fill[x as usize] += 1;
        }
    }
    (offsets, adj)
}

pub(crate) fn sorted_intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaReport {
    pub q: u64,
    pub m: usize,
    pub properties: Vec<PropertyCheck>,
}

impl GammaReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    pub fn lines(&self) -> Vec<String> {
        self.properties
            .iter()
            .map(|p| {
                format!(
                    "{} {}: {}",
                    if p.passed { "PASS" } else { "FAIL" },
                    p.name,
                    p.detail
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_degrees() {
        let g = PolarityGraph::build(5, 2).unwrap();
        assert_eq!((g.x_count(), g.y_count(), g.edge_count()), (25, 25, 125));
        assert!((0..25).all(|x| g.x_neighbors(x).len() == 5));
        assert!((0..25).all(|y| g.y_neighbors(y).len() == 5));

        let g = PolarityGraph::build(3, 3).unwrap();
        assert_eq!((g.x_count(), g.y_count()), (9, 27));
        assert!((0..9).all(|x| g.x_neighbors(x).len() == 9));
        assert!((0..27).all(|y| g.y_neighbors(y).len() == 3));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(PolarityGraph::build(2, 2), Err(Error::ModulusTooSmall(2)));
        assert_eq!(PolarityGraph::build(9, 2), Err(Error::NotPrime(9)));
        assert!(PolarityGraph::build(5, 1).is_err());
        assert!(PolarityGraph::build(5, 6).is_err());
        match PolarityGraph::build(31, 5) {
            Err(Error::Budget(msg)) => assert!(msg.contains("q^(m+1)")),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn codegree_examples() {
        let g = PolarityGraph::build(5, 2).unwrap();
        let y00 = g.y_id(&[0, 0]);
        let y01 = g.y_id(&[0, 1]);
        let y10 = g.y_id(&[1, 0]);
        // x1 = 0 and x1 = x0 meet only at (0, 0)
        assert_eq!(g.codegree(y00, y01).unwrap(), 1);
        let common: Vec<_> = g
            .y_neighbors(y00)
            .iter()
            .filter(|x| g.y_neighbors(y01).contains(x))
            .collect();
        assert_eq!(common, vec![&(g.x_id(0, 0) as u32)]);
        // x1 = 0 and x1 = 1 are parallel
        assert_eq!(g.codegree(y00, y10).unwrap(), 0);
        assert_eq!(g.codegree(y00, y00), Err(Error::SameVertex(y00)));
    }

    #[test]
    fn edge_rule_by_coordinates() {
        let g = PolarityGraph::build(7, 3).unwrap();
        for y in (0..g.y_count()).step_by(5) {
            let c = g.y_coords(y);
            assert_eq!(g.y_id(&c), y);
            for x in 0..g.x_count() {
                let (x0, x1) = g.x_coords(x);
                let rhs = (c[0] + c[1] * x0 + c[2] * x0 * x0) % 7;
                assert_eq!(g.is_adjacent(x, y), rhs == x1);
            }
        }
    }

    #[test]
    fn adjacency_views_agree() {
        for (q, m) in [(3, 2), (5, 3), (7, 2)] {
            let g = PolarityGraph::build(q, m).unwrap();
            let mut from_y: Vec<(u32, u32)> = (0..g.y_count())
                .flat_map(|y| g.y_neighbors(y).iter().map(move |&x| (x, y as u32)))
                .collect();
            let mut from_x: Vec<(u32, u32)> = (0..g.x_count())
                .flat_map(|x| g.x_neighbors(x).iter().map(move |&y| (x as u32, y)))
                .collect();
            from_y.sort_unstable();
            from_x.sort_unstable();
            assert_eq!(from_y, from_x);
            assert_eq!(g.edge_count() as u64, q.pow(m as u32 + 1));
            for x in 0..g.x_count() {
                assert!(g.x_neighbors(x).windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn line_codegrees_exhaustive() {
        for q in [3u64, 5, 7] {
            let g = PolarityGraph::build(q, 2).unwrap();
            for a in 0..g.y_count() {
                for b in a + 1..g.y_count() {
                    let (ca, cb) = (g.y_coords(a), g.y_coords(b));
                    let c = g.codegree(a, b).unwrap();
                    assert!(c <= 1);
                    if ca[1] == cb[1] {
                        assert_eq!(c, 0, "parallel lines share no point");
                    } else {
                        assert_eq!(c, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn verify_small_instances() {
        for (q, m) in [(7, 2), (3, 3)] {
            let r = PolarityGraph::build(q, m).unwrap().verify_properties(true);
            assert!(r.passed(), "{:?}", r.lines());
            assert_eq!(r.lines().len(), 3);
        }
    }

    #[test]
    fn sampled_codegree_check() {
        let g = PolarityGraph::build(13, 4).unwrap();
        let r = g.verify_properties(false);
        assert!(r.passed());
        assert!(r.properties[2].detail.contains("sampled"));
    }

    #[test]
    fn corrupted_graph_fails_degree_check() {
        let g = PolarityGraph::build(5, 2).unwrap();
        let y = 7;
        let x = g.y_neighbors(y)[2] as usize;
        let bad = g.without_edge(x, y);
        assert_eq!(bad.edge_count(), 124);
        let r = bad.verify_properties(true);
        assert!(!r.properties[1].passed);
        assert!(!r.properties[0].passed);
        assert!(!r.passed());
    }
}
