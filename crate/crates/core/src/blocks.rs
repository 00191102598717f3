//! The block hypergraphs `H_{q,k}` and `H*_{q,k}`.
//!
//! Blocks are the neighbourhoods `N(y)` in `Γ_{q,k-1}`: `q^{k-1}` sets of `q`
//! vertices of `X`, any two sharing at most `k-2` vertices. In pure mode every
//! `k`-subset of a block is an edge. After [`BlockHypergraph::randomize`] each
//! block carries its own `k`-colouring and only rainbow `k`-subsets remain.
//!
//! The vertex `x = (x0, x1)` sits at position `x0` of every block containing
//! it, so a colouring is stored as one `q`-long colour string per block.
//!
//! Colours are drawn from ChaCha8 seeded with the 64-bit run seed; block `y`
//! reads its colours from stream number `y`, so every block's colouring is
//! reproducible on its own and independent of generation order.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{param, Error, Result};
use crate::hypergraph::Hypergraph;
use crate::polarity::PolarityGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockHypergraph {
    k: usize,
    gamma: PolarityGraph,
    /// Colour (0-based) of position `x0` in block `y` at index `y * q + x0`.
    colors: Option<Vec<u8>>,
    seed: Option<u64>,
}

/// Per-block generator used by [`BlockHypergraph::randomize`].
pub fn block_rng(seed: u64, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    rng
}

impl BlockHypergraph {
    /// Pure `H_{q,k}`: union of `q^{k-1}` cliques on the blocks.
    pub fn build(q: u64, k: usize) -> Result<Self> {
        if !(3..=5).contains(&k) {
            return Err(param("k", k, "must satisfy 3 <= k <= 5"));
        }
        if q < k as u64 {
            return Err(param("q", q, format!("blocks of size q must fit a {k}-set")));
        }
        let gamma = PolarityGraph::build(q, k - 1)?;
        Ok(BlockHypergraph {
            k,
            gamma,
            colors: None,
            seed: None,
        })
    }

    /// `H*_{q,k}`: an independent uniform colour for every (block, vertex)
    /// incidence. Any existing colouring is replaced.
    pub fn randomize(&self, seed: u64) -> BlockHypergraph {
        let q = self.q() as usize;
        let mut colors = Vec::with_capacity(self.block_count() * q);
        for y in 0..self.block_count() {
            let mut rng = block_rng(seed, y);
            colors.extend((0..q).map(|_| rng.gen_range(0..self.k) as u8));
        }
        BlockHypergraph {
            k: self.k,
            gamma: self.gamma.clone(),
            colors: Some(colors),
            seed: Some(seed),
        }
    }

    /// Convenience for `build(q, k)?.randomize(seed)`.
    pub fn random(q: u64, k: usize, seed: u64) -> Result<Self> {
        Ok(Self::build(q, k)?.randomize(seed))
    }

    pub fn with_colors(&self, colors: Vec<u8>, seed: Option<u64>) -> Result<BlockHypergraph> {
        let expect = self.block_count() * self.q() as usize;
        if colors.len() != expect {
            return Err(Error::Precondition(format!(
                "expected {expect} colours, got {}",
                colors.len()
            )));
        }
        if colors.iter().any(|&c| c as usize >= self.k) {
            return Err(Error::Precondition(format!("colours must lie in 1..={}", self.k)));
        }
        Ok(BlockHypergraph {
            k: self.k,
            gamma: self.gamma.clone(),
            colors: Some(colors),
            seed,
        })
    }

    pub fn q(&self) -> u64 {
        self.gamma.q()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn is_colored(&self) -> bool {
        self.colors.is_some()
    }

    pub fn gamma(&self) -> &PolarityGraph {
        &self.gamma
    }

    pub fn vertex_count(&self) -> usize {
        self.gamma.x_count()
    }

    pub fn block_count(&self) -> usize {
        self.gamma.y_count()
    }

    /// Sorted vertices of block `y`.
    #[inline]
    pub fn block(&self, y: usize) -> &[u32] {
        self.gamma.y_neighbors(y)
    }

    /// Sorted ids of the blocks containing `x`.
    #[inline]
    pub fn incident_blocks(&self, x: usize) -> &[u32] {
        self.gamma.x_neighbors(x)
    }

    #[inline]
    fn position(&self, x: u32) -> usize {
        x as usize / self.q() as usize
    }

    /// 0-based colour of `x` in block `y`; `None` in pure mode.
    /// `x` must lie in block `y`.
    #[inline]
    pub fn color(&self, y: usize, x: u32) -> Option<u8> {
        self.colors
            .as_ref()
            .map(|c| c[y * self.q() as usize + self.position(x)])
    }

    pub fn colors(&self) -> Option<&[u8]> {
        self.colors.as_deref()
    }

    /// The colour classes `X_{y,1}, ..., X_{y,k}` of block `y`, each
    /// restricted by `keep`.
    pub fn classes(&self, y: usize, keep: impl Fn(u32) -> bool) -> Result<Vec<Vec<u32>>> {
        if !self.is_colored() {
            return Err(Error::Uncolored);
        }
        let mut classes = vec![Vec::new(); self.k];
        for &x in self.block(y) {
            if keep(x) {
                classes[self.color(y, x).unwrap() as usize].push(x);
            }
        }
        Ok(classes)
    }

    /// The block containing all of `set`, if any. For a set of at least
    /// `k - 1` vertices it is unique.
    pub fn common_block(&self, set: &[u32]) -> Option<usize> {
        let (first, rest) = set.split_first()?;
        self.incident_blocks(*first as usize)
            .iter()
            .copied()
            .find(|&y| rest.iter().all(|&x| self.gamma.is_adjacent(x as usize, y as usize)))
            .map(|y| y as usize)
    }

    /// Every block containing all of `set`.
    pub fn common_blocks(&self, set: &[u32]) -> Vec<usize> {
        match set.split_first() {
            None => (0..self.block_count()).collect(),
            Some((first, rest)) => self
                .incident_blocks(*first as usize)
                .iter()
                .copied()
                .filter(|&y| rest.iter().all(|&x| self.gamma.is_adjacent(x as usize, y as usize)))
                .map(|y| y as usize)
                .collect(),
        }
    }

    fn check_ids(&self, e: &[u32]) -> Result<()> {
        let n = self.vertex_count();
        match e.iter().find(|&&x| x as usize >= n) {
            Some(&x) => Err(Error::VertexOutOfRange { id: x as usize, n }),
            None => Ok(()),
        }
    }

    /// Edge membership: `e` lies in a block and, in `H*` mode, is rainbow
    /// there.
    pub fn is_edge(&self, e: &[u32]) -> Result<bool> {
        let mut s = e.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() != self.k || e.len() != self.k {
            return Err(Error::WrongSetSize {
                expected: self.k,
                got: s.len(),
            });
        }
        self.check_ids(&s)?;
        let Some(y) = self.common_block(&s) else {
            return Ok(false);
        };
        Ok(self.is_rainbow_in(y, &s))
    }

    /// True iff `set` (inside block `y`) has pairwise distinct colours there.
    /// Always true in pure mode.
    pub fn is_rainbow_in(&self, y: usize, set: &[u32]) -> bool {
        if !self.is_colored() {
            return true;
        }
        let mut seen = 0u32;
        for &x in set {
            let bit = 1 << self.color(y, x).unwrap();
            if seen & bit != 0 {
                return false;
            }
            seen |= bit;
        }
        true
    }

    /// Edges inside block `y`, restricted to vertices accepted by `keep`.
    pub fn block_edges(&self, y: usize, keep: &dyn Fn(u32) -> bool) -> Vec<Vec<u32>> {
        let trace: Vec<u32> = self.block(y).iter().copied().filter(|&x| keep(x)).collect();
        let mut out = Vec::new();
        if self.is_colored() {
            let classes = self.classes(y, keep).unwrap();
            if classes.iter().any(|c| c.is_empty()) {
                return out;
            }
            let mut cur = Vec::with_capacity(self.k);
            rainbow_product(&classes, 0, &mut cur, &mut out);
        } else {
            let mut cur = Vec::with_capacity(self.k);
            k_subsets(&trace, self.k, 0, &mut cur, &mut out);
        }
        out
    }

    /// Number of edges in block `y` among vertices accepted by `keep`:
    /// the product of the class sizes, or `C(s, k)` in pure mode.
    pub fn block_edge_count(&self, y: usize, keep: impl Fn(u32) -> bool) -> u64 {
        if self.is_colored() {
            let mut sizes = vec![0u64; self.k];
            for &x in self.block(y) {
                if keep(x) {
                    sizes[self.color(y, x).unwrap() as usize] += 1;
                }
            }
            sizes.iter().product()
        } else {
            let s = self.block(y).iter().filter(|&&x| keep(x)).count() as u64;
            binomial(s, self.k as u64)
        }
    }

    /// All edges, block by block; each edge appears once because a `k`-set
    /// lies in at most one block. `restrict` selects an induced vertex subset.
    pub fn enumerate_edges<'a>(
        &'a self,
        restrict: Option<&'a [bool]>,
    ) -> impl Iterator<Item = Vec<u32>> + 'a {
        (0..self.block_count()).flat_map(move |y| {
            let keep = move |x: u32| restrict.is_none_or(|r| r[x as usize]);
            self.block_edges(y, &keep)
        })
    }

    pub fn edge_count(&self) -> u64 {
        (0..self.block_count())
            .map(|y| self.block_edge_count(y, |_| true))
            .sum()
    }

    /// A set is independent iff in every block its trace misses some colour
    /// class (fewer than `k` vertices in pure mode).
    pub fn is_independent(&self, set: &[u32]) -> Result<bool> {
        self.check_ids(set)?;
        let mut member = vec![false; self.vertex_count()];
        for &x in set {
            member[x as usize] = true;
        }
        let mut touched: Vec<u32> = set
            .iter()
            .flat_map(|&x| self.incident_blocks(x as usize).iter().copied())
            .collect();
        touched.sort_unstable();
        touched.dedup();
        for y in touched {
            let y = y as usize;
            let independent = if self.is_colored() {
                let mut hit = 0u32;
                for &x in self.block(y) {
                    if member[x as usize] {
                        hit |= 1 << self.color(y, x).unwrap();
                    }
                }
                hit.count_ones() < self.k as u32
            } else {
                self.block(y).iter().filter(|&&x| member[x as usize]).count() < self.k
            };
            if !independent {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Explicit sub-hypergraph induced on `vertices`, relabelled to their
    /// positions in the slice.
    pub fn induced(&self, vertices: &[u32]) -> Result<Hypergraph> {
        self.check_ids(vertices)?;
        let mut keep = vec![false; self.vertex_count()];
        let mut local = vec![u32::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            keep[v as usize] = true;
            local[v as usize] = i as u32;
        }
        let edges = self
            .enumerate_edges(Some(&keep))
            .map(|e| e.iter().map(|&v| local[v as usize]).collect())
            .collect();
        Hypergraph::new(self.k, vertices.len(), edges)
    }

    /// The whole edge set as an explicit hypergraph.
    pub fn to_hypergraph(&self) -> Hypergraph {
        let all: Vec<u32> = (0..self.vertex_count() as u32).collect();
        self.induced(&all).expect("ids are in range")
    }

    /// Implicit form: header `q k seed` (`-` for pure mode or an unknown
    /// seed), then one line per block of 1-based colour digits by position.
    pub fn to_implicit_string(&self) -> String {
        let seed = self.seed.map_or("-".to_string(), |s| s.to_string());
        let mut out = format!("{} {} {}\n", self.q(), self.k, seed);
        if let Some(colors) = &self.colors {
            for row in colors.chunks(self.q() as usize) {
                for &c in row {
                    out.push(char::from(b'1' + c));
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn parse_implicit(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let bad = |msg: &str| Error::Parse {
            line: 1,
            msg: msg.to_string(),
        };
        if parts.len() != 3 {
            return Err(bad("header must be `q k seed`"));
        }
        let q: u64 = parts[0].parse().map_err(|_| bad("bad q"))?;
        let k: usize = parts[1].parse().map_err(|_| bad("bad k"))?;
        let seed = match parts[2] {
            "-" => None,
            s => Some(s.parse::<u64>().map_err(|_| bad("bad seed"))?),
        };
        let base = BlockHypergraph::build(q, k)?;
        let mut colors = Vec::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.len() != q as usize {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("expected {q} colour digits"),
                });
            }
            for ch in line.bytes() {
                if !(b'1'..b'1' + k as u8).contains(&ch) {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: format!("colour {:?} outside 1..={k}", ch as char),
                    });
                }
                colors.push(ch - b'1');
            }
        }
        if colors.is_empty() {
            return Ok(BlockHypergraph { seed, ..base });
        }
        base.with_colors(colors, seed)
    }

    /// Writes the explicit edge list of the sub-hypergraph induced on
    /// `restrict` (all vertices when `None`), keeping original ids.
    pub fn edge_file_string(&self, restrict: Option<&[bool]>) -> String {
        let mut edges: Vec<Vec<u32>> = self.enumerate_edges(restrict).collect();
        edges.sort_unstable();
        let mut s = format!("{} {} {}\n", self.k, self.vertex_count(), edges.len());
        for e in edges {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }
}

fn rainbow_product(classes: &[Vec<u32>], i: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if i == classes.len() {
        let mut e = cur.clone();
        e.sort_unstable();
        out.push(e);
        return;
    }
    for &x in &classes[i] {
        cur.push(x);
        rainbow_product(classes, i + 1, cur, out);
        cur.pop();
    }
}

pub(crate) fn k_subsets<T: Copy>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..items.len() {
        if items.len() - i < k - cur.len() {
            break;
        }
        cur.push(items[i]);
        k_subsets(items, k, i + 1, cur, out);
        cur.pop();
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn pure_h_counts() {
        let h = BlockHypergraph::build(5, 3).unwrap();
        assert_eq!(h.block_count(), 25);
        assert!((0..25).all(|y| h.block(y).len() == 5));
        assert!((0..25).all(|x| h.incident_blocks(x).len() == 5));
        let edges: Vec<_> = h.enumerate_edges(None).collect();
        assert_eq!(edges.len(), 250);
        let distinct: HashSet<_> = edges.iter().cloned().collect();
        assert_eq!(distinct.len(), 250);
        assert_eq!(h.edge_count(), 250);
    }

    #[test]
    fn block_intersections_q13() {
        let h = BlockHypergraph::build(13, 3).unwrap();
        assert_eq!(h.block_count(), 169);
        for a in 0..169 {
            for b in a + 1..169 {
                assert!(h.gamma().codegree(a, b).unwrap() <= 1);
            }
        }
    }

    #[test]
    fn parameter_guards() {
        assert!(BlockHypergraph::build(3, 5).is_err());
        assert!(BlockHypergraph::build(5, 2).is_err());
        assert!(BlockHypergraph::build(5, 6).is_err());
    }

    #[test]
    fn incidence_double_count() {
        for (q, k) in [(5, 3), (5, 4), (7, 3)] {
            let h = BlockHypergraph::build(q, k).unwrap();
            let from_blocks: usize = (0..h.block_count()).map(|y| h.block(y).len()).sum();
            let from_vertices: usize = (0..h.vertex_count()).map(|x| h.incident_blocks(x).len()).sum();
            assert_eq!(from_blocks as u64, q.pow(k as u32));
            assert_eq!(from_vertices, from_blocks);
            assert!((0..h.vertex_count()).all(|x| h.incident_blocks(x).len() as u64 == q.pow(k as u32 - 2)));
        }
    }

    #[test]
    fn randomize_is_deterministic() {
        let h = BlockHypergraph::build(7, 3).unwrap();
        let a = h.randomize(42);
        let b = h.randomize(42);
        assert_eq!(a.to_implicit_string(), b.to_implicit_string());
        assert_ne!(a.to_implicit_string(), h.randomize(43).to_implicit_string());
        // per-block streams do not depend on the other blocks
        let mut rng = block_rng(42, 17);
        let row: Vec<u8> = (0..7).map(|_| rng.gen_range(0..3usize) as u8).collect();
        assert_eq!(&a.colors().unwrap()[17 * 7..18 * 7], row.as_slice());
    }

    #[test]
    fn color_frequencies_are_uniform() {
        let h = BlockHypergraph::build(5, 3).unwrap();
        let seeds = 10_000u64;
        let mut counts = [0u64; 3];
        for s in 0..seeds {
            let c = h.randomize(s).color(4, h.block(4)[2]).unwrap();
            counts[c as usize] += 1;
        }
        let p = 1.0 / 3.0;
        let sigma = (seeds as f64 * p * (1.0 - p)).sqrt();
        for c in counts {
            assert!((c as f64 - seeds as f64 * p).abs() < 3.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn rainbow_count_of_one_block() {
        // C(5,3) * 3!/3^3 = 20/9 expected rainbow triples in a 5-vertex block
        let h = BlockHypergraph::build(5, 3).unwrap();
        let trials = 100_000u64;
        let mut total = 0u64;
        for s in 0..trials {
            total += h.randomize(s).block_edge_count(0, |_| true);
        }
        let mean = total as f64 / trials as f64;
        assert!((mean - 20.0 / 9.0).abs() < 0.03, "{mean}");
    }

    #[test]
    fn is_edge_agrees_with_enumeration() {
        let h = BlockHypergraph::random(5, 3, 9).unwrap();
        let edges: HashSet<Vec<u32>> = h.enumerate_edges(None).collect();
        let mut n = 0;
        for a in 0..25u32 {
            for b in a + 1..25 {
                for c in b + 1..25 {
                    assert_eq!(h.is_edge(&[a, b, c]).unwrap(), edges.contains(&vec![a, b, c]));
                    n += 1;
                }
            }
        }
        assert_eq!(n, 2300);
        let expected: u64 = (0..25).map(|y| h.block_edge_count(y, |_| true)).sum();
        assert_eq!(edges.len() as u64, expected);
    }

    #[test]
    fn is_edge_negative_cases() {
        let h = BlockHypergraph::random(7, 3, 1).unwrap();
        assert!(h.is_edge(&[0, 1]).is_err());
        assert!(h.is_edge(&[0, 1, 1]).is_err());
        assert!(h.is_edge(&[0, 1, 99]).is_err());
        // x0 = 0 for vertices 0 and 1, so no block contains both
        assert!(!h.is_edge(&[0, 1, 20]).unwrap());
        // a block triple with two equal colours
        for y in 0..h.block_count() {
            let b = h.block(y);
            let pair = (0..b.len())
                .flat_map(|i| (i + 1..b.len()).map(move |j| (i, j)))
                .find(|&(i, j)| h.color(y, b[i]) == h.color(y, b[j]));
            if let Some((i, j)) = pair {
                let third = (0..b.len()).find(|&l| l != i && l != j).unwrap();
                assert!(!h.is_edge(&[b[i], b[j], b[third]]).unwrap());
                return;
            }
        }
        panic!("no monochromatic pair found");
    }

    #[test]
    fn star_edges_are_subset_of_clique_edges() {
        let pure = BlockHypergraph::build(5, 3).unwrap();
        let star = pure.randomize(5);
        let all: HashSet<Vec<u32>> = pure.enumerate_edges(None).collect();
        assert!(star.enumerate_edges(None).all(|e| all.contains(&e)));
    }

    #[test]
    fn restricted_enumeration() {
        let h = BlockHypergraph::random(5, 3, 2).unwrap();
        let none = vec![false; 25];
        assert_eq!(h.enumerate_edges(Some(&none)).count(), 0);
        let mut some = vec![false; 25];
        for v in [0, 6, 12, 18, 24, 3, 9] {
            some[v] = true;
        }
        for e in h.enumerate_edges(Some(&some)) {
            assert!(e.iter().all(|&v| some[v as usize]));
            assert!(h.is_edge(&e).unwrap());
        }
    }

    #[test]
    fn independence_by_blocks_matches_edges() {
        let h = BlockHypergraph::random(5, 3, 11).unwrap();
        let explicit = h.to_hypergraph();
        let mut state = 1u64;
        for _ in 0..500 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let set: Vec<u32> = (0..25).filter(|i| (state >> (i + 20)) & 1 == 1).collect();
            assert_eq!(h.is_independent(&set).unwrap(), explicit.is_independent(&set));
        }
    }

    #[test]
    fn implicit_round_trip() {
        let h = BlockHypergraph::random(7, 3, 77).unwrap();
        let text = h.to_implicit_string();
        assert!(text.starts_with("7 3 77\n"));
        assert_eq!(BlockHypergraph::parse_implicit(&text).unwrap(), h);
        let pure = BlockHypergraph::build(5, 3).unwrap();
        assert_eq!(BlockHypergraph::parse_implicit(&pure.to_implicit_string()).unwrap(), pure);
        assert!(BlockHypergraph::parse_implicit("7 3 1\n1234\n").is_err());
    }

    #[test]
    fn edge_file_is_lexicographic() {
        let h = BlockHypergraph::random(5, 3, 3).unwrap();
        let text = h.edge_file_string(None);
        let parsed = Hypergraph::parse(&text).unwrap();
        assert_eq!(parsed.edge_count() as u64, h.edge_count());
        let lines: Vec<&str> = text.lines().skip(1).collect();
        let keys: Vec<Vec<u32>> = lines
            .iter()
            .map(|l| l.split(' ').map(|t| t.parse().unwrap()).collect())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(30, 15), 155_117_520);
    }
}
