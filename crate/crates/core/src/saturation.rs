//! Supersaturation diagnostics on a vertex set `S` of `H*`: typical blocks,
//! the rainbow sub-hypergraph on them, its codegrees, Azuma arithmetic and
//! the exact martingale of the edge count under colour exposure.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::blocks::{binomial, k_subsets, BlockHypergraph};
use crate::error::{Error, Result};
use crate::format_float;
use crate::hypergraph::Hypergraph;

fn check_set(h: &BlockHypergraph, s: &[u32]) -> Result<Vec<bool>> {
    if s.is_empty() {
        return Err(Error::Precondition("S must be nonempty".into()));
    }
    let n = h.vertex_count();
    let mut member = vec![false; n];
    for &x in s {
        if x as usize >= n {
            return Err(Error::VertexOutOfRange { id: x as usize, n });
        }
        member[x as usize] = true;
    }
    Ok(member)
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Parameter {
            name: "delta",
            value: delta.to_string(),
            reason: "must lie in (0, 1)".into(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TypicalBlocks {
    pub r: f64,
    pub delta: f64,
    pub blocks: Vec<usize>,
    /// `(1 - 2/(delta^2 r)) q^{k-1}`.
    pub lower_bound: f64,
    pub vacuous: bool,
}

impl TypicalBlocks {
    pub fn passed(&self) -> bool {
        self.blocks.len() as f64 >= self.lower_bound
    }
}

/// Blocks meeting `S` in between `(1-delta) r` and `(1+delta) r` vertices,
/// where `r = |S|/q`.
pub fn typical_blocks(h: &BlockHypergraph, s: &[u32], delta: f64) -> Result<TypicalBlocks> {
    check_delta(delta)?;
    let member = check_set(h, s)?;
    let size = member.iter().filter(|&&b| b).count();
    let q = h.q() as f64;
    let r = size as f64 / q;
    let blocks = (0..h.block_count())
        .filter(|&y| {
            let c = h.block(y).iter().filter(|&&x| member[x as usize]).count() as f64;
            (1.0 - delta) * r <= c && c <= (1.0 + delta) * r
        })
        .collect();
    let lower_bound = (1.0 - 2.0 / (delta * delta * r)) * h.block_count() as f64;
    Ok(TypicalBlocks {
        r,
        delta,
        blocks,
        lower_bound,
        vacuous: lower_bound <= 0.0,
    })
}

/// The rainbow `k`-sets of `H*[S]` inside typical blocks.
#[derive(Debug, Clone)]
pub struct SubHypergraph<'a> {
    host: &'a BlockHypergraph,
    member: Vec<bool>,
    size: usize,
    typical: TypicalBlocks,
}

/// Builds the sub-hypergraph; `|S| >= 4kq` is required unless `force`.
pub fn build_sub_h<'a>(h: &'a BlockHypergraph, s: &[u32], delta: f64, force: bool) -> Result<SubHypergraph<'a>> {
    if !h.is_colored() {
        return Err(Error::Uncolored);
    }
    let member = check_set(h, s)?;
    let size = member.iter().filter(|&&b| b).count();
    let need = 4 * h.k() * h.q() as usize;
    if size < need && !force {
        return Err(Error::Precondition(format!(
            "|S| = {size} < 4kq = {need}; the estimates hold only for every S with |S| >= 4kq (use force to explore)"
        )));
    }
    let typical = typical_blocks(h, s, delta)?;
    Ok(SubHypergraph {
        host: h,
        member,
        size,
        typical,
    })
}

impl SubHypergraph<'_> {
    pub fn host(&self) -> &BlockHypergraph {
        self.host
    }

    pub fn typical(&self) -> &TypicalBlocks {
        &self.typical
    }

    pub fn s_size(&self) -> usize {
        self.size
    }

    pub fn r(&self) -> f64 {
        self.typical.r
    }

    pub fn contains(&self, x: u32) -> bool {
        self.member[x as usize]
    }

    fn class_sizes(&self, y: usize) -> Vec<u64> {
        let mut sizes = vec![0u64; self.host.k()];
        for &x in self.host.block(y) {
            if self.member[x as usize] {
                sizes[self.host.color(y, x).unwrap() as usize] += 1;
            }
        }
        sizes
    }

    /// `|E(H)|` as a sum over typical blocks of class-size products.
    pub fn edge_count(&self) -> u64 {
        self.typical
            .blocks
            .iter()
            .map(|&y| self.class_sizes(y).iter().product::<u64>())
            .sum()
    }

    pub fn edges(&self) -> Vec<Vec<u32>> {
        let keep = |x: u32| self.member[x as usize];
        self.typical
            .blocks
            .iter()
            .flat_map(|&y| self.host.block_edges(y, &keep))
            .collect()
    }

    pub fn to_hypergraph(&self) -> Hypergraph {
        Hypergraph::new(self.host.k(), self.host.vertex_count(), self.edges()).expect("block edges are valid")
    }

    /// Maximum number of edges through a common `i`-set.
    pub fn delta_i(&self, i: usize) -> Result<u64> {
        let k = self.host.k();
        if !(1..=k).contains(&i) {
            return Err(Error::Parameter {
                name: "i",
                value: i.to_string(),
                reason: format!("must satisfy 1 <= i <= {k}"),
            });
        }
        if i >= k - 1 {
            // an (k-1)-set lies in at most one block: drop the i smallest classes
            return Ok(self
                .typical
                .blocks
                .par_iter()
                .map(|&y| {
                    let mut sizes = self.class_sizes(y);
                    if sizes.iter().any(|&c| c == 0) {
                        return 0;
                    }
                    sizes.sort_unstable();
                    sizes[i..].iter().product()
                })
                .max()
                .unwrap_or(0));
        }
        let mut through: HashMap<Vec<u32>, u64> = HashMap::new();
        for &y in &self.typical.blocks {
            let sizes = self.class_sizes(y);
            if sizes.iter().any(|&c| c == 0) {
                continue;
            }
            let trace: Vec<u32> = self.host.block(y).iter().copied().filter(|&x| self.member[x as usize]).collect();
            let mut subsets = Vec::new();
            k_subsets(&trace, i, 0, &mut Vec::new(), &mut subsets);
            for j in subsets {
                if !self.host.is_rainbow_in(y, &j) {
                    continue;
                }
                let used: u32 = j.iter().fold(0, |m, &x| m | 1 << self.host.color(y, x).unwrap());
                let ext: u64 = (0..k).filter(|c| used >> c & 1 == 0).map(|c| sizes[c]).product();
                *through.entry(j).or_default() += ext;
            }
        }
        Ok(through.into_values().max().unwrap_or(0))
    }

    pub fn report(&self) -> Result<SupersatReport> {
        let k = self.host.k();
        let q = self.host.q() as f64;
        let r = self.r();
        let edges = self.edge_count();
        let s = self.size as f64;
        let codegrees = (1..=k).map(|i| self.delta_i(i)).collect::<Result<Vec<_>>>()?;
        let kf = k as f64;
        let bounds = (1..=k).map(|i| codegree_bound(r, q, k, i)).collect();
        let lemma_rhs = (1..=k)
            .map(|i| {
                6.0 * (16.0 * kf).powi(2 * k as i32) * edges as f64 / s
                    * (q.powf(1.0 / (kf - 1.0)) / s).powi(i as i32 - 1)
            })
            .collect();
        Ok(SupersatReport {
            s_size: self.size,
            r,
            delta: self.typical.delta,
            y_delta_size: self.typical.blocks.len(),
            y_delta_bound: self.typical.lower_bound,
            y_delta_vacuous: self.typical.vacuous,
            edge_count: edges,
            codegrees,
            bounds,
            lemma_rhs,
            expectation_lower: expectation_lower_bound(r, q, k),
            azuma_tail: supersat_azuma(q, k, r).value,
        })
    }
}

/// `(2r)^{k-i} q^{k-1-i}`; for `i = k` the exponent of `q` is negative and
/// the bound that applies is `Delta_k <= 1`.
pub fn codegree_bound(r: f64, q: f64, k: usize, i: usize) -> f64 {
    if i >= k {
        return 1.0;
    }
    (2.0 * r).powi((k - i) as i32) * q.powi((k - 1 - i) as i32)
}

/// `r^k q^{k-1} / (3 (4k)^k)`.
pub fn expectation_lower_bound(r: f64, q: f64, k: usize) -> f64 {
    r.powi(k as i32) * q.powi(k as i32 - 1) / (3.0 * (4.0 * k as f64).powi(k as i32))
}

/// Codegrees of an explicit hypergraph.
pub fn delta_i_explicit(h: &Hypergraph, i: usize) -> Result<u64> {
    if !(1..=h.k()).contains(&i) {
        return Err(Error::Parameter {
            name: "i",
            value: i.to_string(),
            reason: format!("must satisfy 1 <= i <= {}", h.k()),
        });
    }
    let mut through: HashMap<Vec<u32>, u64> = HashMap::new();
    for e in h.edges() {
        let mut subsets = Vec::new();
        k_subsets(e, i, 0, &mut Vec::new(), &mut subsets);
        for j in subsets {
            *through.entry(j).or_default() += 1;
        }
    }
    Ok(through.into_values().max().unwrap_or(0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupersatReport {
    pub s_size: usize,
    pub r: f64,
    pub delta: f64,
    pub y_delta_size: usize,
    pub y_delta_bound: f64,
    pub y_delta_vacuous: bool,
    pub edge_count: u64,
    /// `Delta_1 .. Delta_k`.
    pub codegrees: Vec<u64>,
    pub bounds: Vec<f64>,
    pub lemma_rhs: Vec<f64>,
    pub expectation_lower: f64,
    pub azuma_tail: f64,
}

impl SupersatReport {
    pub fn violations(&self) -> Vec<usize> {
        (0..self.codegrees.len())
            .filter(|&i| self.codegrees[i] as f64 > self.bounds[i])
            .map(|i| i + 1)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.violations().is_empty()
            && self.y_delta_size as f64 >= self.y_delta_bound
            && self.codegrees.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("s_size={}", self.s_size),
            format!("r={}", format_float(self.r)),
            format!("delta={}", format_float(self.delta)),
            format!("y_delta_size={}", self.y_delta_size),
            format!("y_delta_bound={}", format_float(self.y_delta_bound)),
            format!("y_delta_vacuous={}", self.y_delta_vacuous),
            format!("edge_count={}", self.edge_count),
        ];
        for (i, ((d, b), l)) in self.codegrees.iter().zip(&self.bounds).zip(&self.lemma_rhs).enumerate() {
            out.push(format!(
                "delta_{}={} bound={} lemma_rhs={}",
                i + 1,
                d,
                format_float(*b),
                format_float(*l)
            ));
        }
        out.push(format!("expectation_lower={}", format_float(self.expectation_lower)));
        out.push(format!("azuma_tail={}", format_float(self.azuma_tail)));
        out.push(format!("passed={}", self.passed()));
        out
    }
}

/// `exp(-lambda^2 / (2 sum c_i^2))`.
pub fn azuma_tail(lambda: f64, step_bounds: &[f64]) -> Result<f64> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::Parameter {
            name: "lambda",
            value: lambda.to_string(),
            reason: "must be nonnegative".into(),
        });
    }
    if step_bounds.is_empty() || step_bounds.iter().any(|&c| c.is_nan() || c <= 0.0) {
        return Err(Error::Precondition("step bounds must be positive".into()));
    }
    let sum: f64 = step_bounds.iter().map(|c| c * c).sum();
    Ok((-lambda * lambda / (2.0 * sum)).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AzumaInstance {
    pub lambda: f64,
    pub step: f64,
    pub steps: f64,
    /// The tail at `lambda` with `steps` equal bounds `step`.
    pub value: f64,
    /// `exp(-r q^{k-1} / (27 (8k)^{2k}))`, the simplified value.
    pub closed_form: f64,
    /// `exp(-r q^{k-1} / (500 (8k)^{2k}))`.
    pub stated_bound: f64,
}

/// The tail with `lambda = r^k q^{k-1} / (6 (4k)^k)`, `c = (2r)^{k-1}` and
/// `3 r q^{k-1} / 2` steps. The sum of squares is taken in closed form.
pub fn supersat_azuma(q: f64, k: usize, r: f64) -> AzumaInstance {
    let kf = k as f64;
    let lambda = r.powi(k as i32) * q.powi(k as i32 - 1) / (6.0 * (4.0 * kf).powi(k as i32));
    let step = (2.0 * r).powi(k as i32 - 1);
    let steps = 1.5 * r * q.powi(k as i32 - 1);
    let value = (-lambda * lambda / (2.0 * steps * step * step)).exp();
    let x = r * q.powi(k as i32 - 1) / (8.0 * kf).powi(2 * k as i32);
    AzumaInstance {
        lambda,
        step,
        steps,
        value,
        closed_form: (-x / 27.0).exp(),
        stated_bound: (-x / 500.0).exp(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationReport {
    pub trials: usize,
    pub mean: f64,
    pub stderr: f64,
    /// `sum over typical blocks of C(s_y, k) k!/k^k`.
    pub exact: f64,
    /// `|Y| C(r/2, k) k!/k^k` with the real-argument binomial.
    pub chain_middle: f64,
    /// `r^k q^{k-1}/(3(4k)^k)`, meaningful when `r >= 4k`.
    pub chain_final: f64,
    pub chain_final_applies: bool,
}

impl ExpectationReport {
    pub fn lines(&self) -> Vec<String> {
        vec![
            format!("trials={}", self.trials),
            format!("mean={}", format_float(self.mean)),
            format!("stderr={}", format_float(self.stderr)),
            format!("exact_expectation={}", format_float(self.exact)),
            format!("chain_middle={}", format_float(self.chain_middle)),
            format!("chain_final={}", format_float(self.chain_final)),
            format!("chain_final_applies={}", self.chain_final_applies),
        ]
    }
}

fn rainbow_probability(k: usize) -> f64 {
    (1..=k).map(|i| i as f64 / k as f64).product()
}

fn real_binomial(x: f64, k: usize) -> f64 {
    (0..k).map(|i| (x - i as f64) / (i + 1) as f64).product()
}

/// Seed for trial `i` of a Monte Carlo run.
pub fn trial_seed(seed: u64, i: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i)
}

/// Monte Carlo over fresh colourings of the host's blocks. Typical blocks
/// depend only on `S`, so they are fixed across trials.
pub fn estimate_expectation(h: &BlockHypergraph, s: &[u32], delta: f64, trials: usize, seed: u64) -> Result<ExpectationReport> {
    if trials < 100 {
        return Err(Error::Parameter {
            name: "trials",
            value: trials.to_string(),
            reason: "at least 100 trials are required".into(),
        });
    }
    let member = check_set(h, s)?;
    let typical = typical_blocks(h, s, delta)?;
    let k = h.k();
    let pure = BlockHypergraph::build(h.q(), k)?;
    let samples: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let g = pure.randomize(trial_seed(seed, i));
            typical
                .blocks
                .iter()
                .map(|&y| g.block_edge_count(y, |x| member[x as usize]))
                .sum::<u64>() as f64
        })
        .collect();
    let n = trials as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|z| (z - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let p = rainbow_probability(k);
    let exact = typical
        .blocks
        .iter()
        .map(|&y| {
            let sy = h.block(y).iter().filter(|&&x| member[x as usize]).count() as u64;
            binomial(sy, k as u64) as f64 * p
        })
        .sum();
    let q = h.q() as f64;
    let r = typical.r;
    Ok(ExpectationReport {
        trials,
        mean,
        stderr: (var / n).sqrt(),
        exact,
        chain_middle: typical.blocks.len() as f64 * real_binomial(r / 2.0, k) * p,
        chain_final: expectation_lower_bound(r, q, k),
        chain_final_applies: r >= 4.0 * k as f64,
    })
}

/// `C(ceil(3r/2) - 1, k - 1)`.
pub fn step_cap(r: f64, k: usize) -> u64 {
    let top = (1.5 * r).ceil() as u64;
    binomial(top.saturating_sub(1), k as u64 - 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MartingaleTrace {
    /// Exposure order of `(block, vertex)` incidences.
    pub order: Vec<(usize, u32)>,
    /// Exact conditional expectations `Z_0 .. Z_t`.
    pub values: Vec<f64>,
    /// `(2r)^{k-1}`.
    pub step_bound: f64,
    pub step_cap: u64,
    pub max_step: f64,
}

impl MartingaleTrace {
    pub fn passed(&self) -> bool {
        self.max_step <= self.step_bound && self.max_step <= self.step_cap as f64 + 1e-9
    }
}

/// Conditional expectation of the rainbow count of one block given the
/// colours revealed so far: revealed class counts `n`, `u` hidden vertices.
fn block_conditional(n: &[u64], u: u64, k: usize) -> f64 {
    // e[j] = number of j-sets of revealed vertices with distinct colours
    let mut e = vec![0f64; k + 1];
    e[0] = 1.0;
    for &c in n {
        for j in (1..=k).rev() {
            e[j] += e[j - 1] * c as f64;
        }
    }
    (0..=k)
        .map(|j| {
            let rest = k - j;
            let p: f64 = (1..=rest).map(|i| i as f64 / k as f64).product();
            e[j] * binomial(u, rest as u64) as f64 * p
        })
        .sum()
}

/// Exposes the colours of the `S`-incidences of typical blocks one at a time
/// in block order and records the exact Doob martingale of `|E(H)|`.
pub fn martingale_trace(sub: &SubHypergraph<'_>) -> MartingaleTrace {
    let h = sub.host;
    let k = h.k();
    let mut order = Vec::new();
    let mut per_block = Vec::new();
    for &y in &sub.typical.blocks {
        let trace: Vec<u32> = h.block(y).iter().copied().filter(|&x| sub.contains(x)).collect();
        per_block.push((vec![0u64; k], trace.len() as u64));
        order.extend(trace.into_iter().map(|x| (y, x)));
    }
    let mut current: Vec<f64> = per_block.iter().map(|(n, u)| block_conditional(n, *u, k)).collect();
    let mut total: f64 = current.iter().sum();
    let mut values = vec![total];
    let mut bi = 0;
    let mut last_y = usize::MAX;
    for &(y, x) in &order {
        if y != last_y && last_y != usize::MAX {
            bi += 1;
        }
        last_y = y;
        let (n, u) = &mut per_block[bi];
        n[h.color(y, x).unwrap() as usize] += 1;
        *u -= 1;
        let next = block_conditional(n, *u, k);
        total += next - current[bi];
        current[bi] = next;
        values.push(total);
    }
    let max_step = values.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    let r = sub.r();
    MartingaleTrace {
        order,
        values,
        step_bound: (2.0 * r).powi(k as i32 - 1),
        step_cap: step_cap(r, k),
        max_step,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecolorReport {
    pub samples: usize,
    pub max_change: u64,
    pub cap: u64,
}

impl RecolorReport {
    pub fn passed(&self) -> bool {
        self.max_change <= self.cap
    }
}

/// Recolours sampled incidences of typical blocks to every other colour and
/// records the largest change of `|E(H)|`.
pub fn recolor_experiment(sub: &SubHypergraph<'_>, samples: usize, seed: u64) -> Result<RecolorReport> {
    let h = sub.host;
    let k = h.k();
    let incidences: Vec<(usize, u32)> = sub
        .typical
        .blocks
        .iter()
        .flat_map(|&y| h.block(y).iter().copied().filter(|&x| sub.contains(x)).map(move |x| (y, x)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen: Vec<&(usize, u32)> = if incidences.len() <= samples {
        incidences.iter().collect()
    } else {
        incidences.choose_multiple(&mut rng, samples).collect()
    };
    let colors = h.colors().ok_or(Error::Uncolored)?;
    let q = h.q() as usize;
    let mut max_change = 0;
    for &&(y, x) in &chosen {
        let pos = h.block(y).iter().position(|&v| v == x).unwrap();
        let before = h.block_edge_count(y, |v| sub.contains(v));
        for c in 0..k as u8 {
            if c == colors[y * q + pos] {
                continue;
            }
            let mut sizes = vec![0u64; k];
            for (i, &v) in h.block(y).iter().enumerate() {
                if sub.contains(v) {
                    let col = if i == pos { c } else { colors[y * q + i] };
                    sizes[col as usize] += 1;
                }
            }
            let after: u64 = sizes.iter().product();
            max_change = max_change.max(before.abs_diff(after));
        }
    }
    Ok(RecolorReport {
        samples: chosen.len(),
        max_change,
        cap: step_cap(sub.r(), k),
    })
}

/// A seeded uniform `size`-subset of the host's vertices, sorted.
pub fn sample_set(h: &BlockHypergraph, size: usize, seed: u64) -> Result<Vec<u32>> {
    if size > h.vertex_count() {
        return Err(Error::Precondition(format!(
            "cannot sample {size} of {} vertices",
            h.vertex_count()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s: Vec<u32> = (0..h.vertex_count() as u32).collect::<Vec<_>>().choose_multiple(&mut rng, size).copied().collect();
    s.sort_unstable();
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(h: &BlockHypergraph) -> Vec<u32> {
        (0..h.vertex_count() as u32).collect()
    }

    #[test]
    fn whole_set_is_typical() {
        let h = BlockHypergraph::random(7, 3, 1).unwrap();
        let t = typical_blocks(&h, &all(&h), 0.1).unwrap();
        assert_eq!(t.r, 7.0);
        assert_eq!(t.blocks.len(), 49);
        assert!(typical_blocks(&h, &[], 0.5).is_err());
        assert!(typical_blocks(&h, &[1], 1.5).is_err());
    }

    #[test]
    fn typical_count_at_q13() {
        let h = BlockHypergraph::random(13, 3, 0).unwrap();
        let s = sample_set(&h, 156, 9).unwrap();
        let t = typical_blocks(&h, &s, 0.5).unwrap();
        assert_eq!(t.r, 12.0);
        assert!((t.lower_bound - 169.0 / 3.0).abs() < 1e-12);
        // oracle: direct intersection counts via the polarity graph
        let g = h.gamma();
        let direct = (0..169)
            .filter(|&y| {
                let c = s.iter().filter(|&&x| g.is_adjacent(x as usize, y)).count();
                (6..=18).contains(&c)
            })
            .count();
        assert_eq!(t.blocks.len(), direct);
        assert!(t.passed());
    }

    #[test]
    fn vacuous_bound() {
        let h = BlockHypergraph::random(13, 3, 0).unwrap();
        let s = sample_set(&h, 26, 1).unwrap();
        let t = typical_blocks(&h, &s, 0.5).unwrap();
        assert!(t.vacuous && t.passed());
    }

    #[test]
    fn sub_h_counts_match_enumeration() {
        let h = BlockHypergraph::random(13, 3, 4).unwrap();
        let sub = build_sub_h(&h, &all(&h), 0.5, false).unwrap();
        assert_eq!(sub.typical().blocks.len(), 169);
        let keep = |_: u32| true;
        for y in (0..169).step_by(17) {
            let listed = h.block_edges(y, &keep).len() as u64;
            let c = h.classes(y, keep).unwrap();
            assert_eq!(listed, c.iter().map(|c| c.len() as u64).product::<u64>());
        }
        assert_eq!(sub.edge_count(), h.edge_count());
        assert!(build_sub_h(&h, &[0, 1, 2], 0.5, false).is_err());
        assert!(build_sub_h(&h, &[0, 1, 2], 0.5, true).is_ok());
    }

    #[test]
    fn codegrees_match_explicit() {
        for seed in 0..6 {
            for (q, k) in [(5, 3), (7, 3), (5, 4)] {
                let h = BlockHypergraph::random(q, k, seed).unwrap();
                let s = sample_set(&h, h.vertex_count() * 3 / 4, seed).unwrap();
                let sub = build_sub_h(&h, &s, 0.5, true).unwrap();
                let explicit = sub.to_hypergraph();
                assert_eq!(explicit.edge_count() as u64, sub.edge_count());
                for i in 1..=k {
                    assert_eq!(sub.delta_i(i).unwrap(), delta_i_explicit(&explicit, i).unwrap(), "q={q} k={k} i={i}");
                }
                let rep = sub.report().unwrap();
                assert!(rep.codegrees[k - 1] <= 1);
                assert!(rep.passed(), "{:?}", rep.lines());
            }
        }
    }

    #[test]
    fn explicit_codegree_examples() {
        let h = Hypergraph::new(3, 6, vec![vec![1, 2, 3], vec![1, 2, 4], vec![1, 2, 5]]).unwrap();
        assert_eq!(delta_i_explicit(&h, 2).unwrap(), 3);
        assert_eq!(delta_i_explicit(&h, 1).unwrap(), 3);
        assert_eq!(delta_i_explicit(&h, 3).unwrap(), 1);
        assert_eq!(delta_i_explicit(&Hypergraph::empty(3, 4), 1).unwrap(), 0);
        assert!(delta_i_explicit(&h, 4).is_err());
    }

    #[test]
    fn azuma_examples() {
        assert_eq!(azuma_tail(0.0, &[1.0]).unwrap(), 1.0);
        assert!((azuma_tail(2.0, &[1.0, 1.0]).unwrap() - (-1f64).exp()).abs() < 1e-15);
        assert!(azuma_tail(-1.0, &[1.0]).is_err());
        assert!(azuma_tail(1.0, &[0.0]).is_err());
        for (q, k, r) in [(13.0, 3, 12.0), (1e5, 3, 10.0), (1e3, 4, 4.0), (1e4, 5, 5.0)] {
            let a = supersat_azuma(q, k, r);
            assert!(((a.value - a.closed_form) / a.closed_form).abs() < 1e-12);
            assert!(a.value <= a.stated_bound * (1.0 + 1e-12));
            // the generic tail with explicit step list agrees
            if a.steps < 1e5 && a.steps.fract() == 0.0 {
                let steps = vec![a.step; a.steps as usize];
                let t = azuma_tail(a.lambda, &steps).unwrap();
                assert!(((t - a.value) / a.value).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn expectation_single_block() {
        let h = BlockHypergraph::build(7, 3).unwrap();
        let block: Vec<u32> = h.block(3).to_vec();
        let expected = binomial(7, 3) as f64 * 6.0 / 27.0;
        let samples: Vec<f64> = (0..2000)
            .map(|i| h.randomize(trial_seed(5, i)).block_edge_count(3, |_| true) as f64)
            .collect();
        let mean = samples.iter().sum::<f64>() / 2000.0;
        let sd = (samples.iter().map(|z| (z - mean).powi(2)).sum::<f64>() / 1999.0).sqrt();
        assert!((mean - expected).abs() < 3.0 * sd / 2000f64.sqrt());

        let all5 = BlockHypergraph::build(5, 3).unwrap();
        let rep = estimate_expectation(&all5, &all(&all5), 0.5, 1000, 5).unwrap();
        assert!((rep.exact - 25.0 * 10.0 * 6.0 / 27.0).abs() < 1e-9);
        assert!((rep.mean - rep.exact).abs() < 3.0 * rep.stderr);
        assert!(estimate_expectation(&h, &block, 0.5, 10, 5).is_err());
    }

    #[test]
    fn expectation_exceeds_chain() {
        let h = BlockHypergraph::build(13, 3).unwrap();
        let rep = estimate_expectation(&h, &all(&h), 0.5, 100, 1).unwrap();
        assert!(rep.chain_final_applies);
        assert!(rep.mean > rep.chain_final);
        assert!(rep.exact >= rep.chain_middle);
        assert!((rep.mean - rep.exact).abs() < 4.0 * rep.stderr);
    }

    #[test]
    fn tiny_set_has_no_edges() {
        let h = BlockHypergraph::random(13, 3, 2).unwrap();
        // two vertices cannot carry a 3-edge
        let sub = build_sub_h(&h, &[0, 1], 0.5, true).unwrap();
        assert_eq!(sub.edge_count(), 0);
        let rep = estimate_expectation(&BlockHypergraph::build(13, 3).unwrap(), &[0, 1], 0.5, 100, 0).unwrap();
        assert_eq!(rep.mean, 0.0);
    }

    #[test]
    fn martingale_ends_at_edge_count() {
        let h = BlockHypergraph::random(13, 3, 8).unwrap();
        let s = sample_set(&h, 156, 2).unwrap();
        let sub = build_sub_h(&h, &s, 0.5, false).unwrap();
        let tr = martingale_trace(&sub);
        let exact_start: f64 = sub
            .typical()
            .blocks
            .iter()
            .map(|&y| binomial(h.block(y).iter().filter(|&&x| sub.contains(x)).count() as u64, 3) as f64 * 6.0 / 27.0)
            .sum();
        assert!((tr.values[0] - exact_start).abs() < 1e-6);
        assert!((tr.values.last().unwrap() - sub.edge_count() as f64).abs() < 1e-6);
        assert!(tr.order.len() as f64 <= 1.5 * sub.r() * 169.0);
        assert!(tr.passed(), "{} {} {}", tr.max_step, tr.step_bound, tr.step_cap);
        let rc = recolor_experiment(&sub, 500, 1).unwrap();
        assert!(rc.passed() && rc.max_change > 0);
    }

    #[test]
    fn conditional_expectation_matches_enumeration() {
        // two revealed (colours 0 and 1), two hidden, k = 3
        let e = block_conditional(&[1, 1, 0], 2, 3);
        // triples: {a,b,h}: 2 * (1/3); {a,h,h'}: P(hidden pair = {1,2} colours) = 2/9, same for b
        let brute = 2.0 / 3.0 + 2.0 * (2.0 / 9.0);
        assert!((e - brute).abs() < 1e-12);
        assert!((block_conditional(&[0, 0, 0], 5, 3) - 10.0 * 6.0 / 27.0).abs() < 1e-12);
    }
}
