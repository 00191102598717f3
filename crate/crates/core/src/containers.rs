//! Hypergraph containers by the max-degree fingerprint ("scythe") procedure.
//!
//! One run of the procedure on a host set `C` and an independent set `I`
//! repeatedly queries the vertex of largest degree in the live constraint
//! sets (smallest sets first, ties to the smallest id). A vertex of `I` joins
//! the fingerprint `F` and every set through it shrinks; a set shrunk to a
//! single vertex forces that vertex out. Any other queried vertex is removed.
//! The run stops when no constraint set is left, or once `|F| >= ceil(B)` and
//! at least one vertex has been removed. The container is `F` plus the
//! vertices never removed. Answers are "is the queried vertex in `F`", so the
//! container is a function of the fingerprint alone.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::format_float;
use crate::hypergraph::Hypergraph;
use crate::saturation::delta_i_explicit;

const MAX_K: usize = 8;

/// Edge lists and incidences of an explicit hypergraph, shared by all runs.
#[derive(Debug, Clone)]
pub struct ContainerHost {
    k: usize,
    n: usize,
    edges: Vec<Vec<u32>>,
    incidence: Vec<Vec<u32>>,
}

impl ContainerHost {
    pub fn new(h: &Hypergraph) -> Result<Self> {
        if h.k() < 2 || h.k() > MAX_K {
            return Err(Error::Precondition(format!("uniformity must lie in 2..={MAX_K}")));
        }
        let mut incidence = vec![Vec::new(); h.vertex_count()];
        for (i, e) in h.edges().iter().enumerate() {
            for &v in e {
                incidence[v as usize].push(i as u32);
            }
        }
        Ok(ContainerHost {
            k: h.k(),
            n: h.vertex_count(),
            edges: h.edges().to_vec(),
            incidence,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// True iff some edge lies inside `within`.
    pub fn has_edge_within(&self, within: &[u32]) -> bool {
        let inside = mask_of(self.n, within);
        self.edges.iter().any(|e| e.iter().all(|&v| inside[v as usize]))
    }

    /// Independence of a vertex list.
    pub fn is_independent(&self, set: &[u32]) -> bool {
        let mut member = vec![false; self.n];
        for &v in set {
            member[v as usize] = true;
        }
        set.iter().all(|&v| {
            self.incidence[v as usize]
                .iter()
                .all(|&e| !self.edges[e as usize].iter().all(|&u| member[u as usize]))
        })
    }

    /// A maximal independent set by greedy insertion in a random order.
    pub fn random_maximal_independent(&self, rng: &mut ChaCha8Rng) -> Vec<u32> {
        let mut order: Vec<u32> = (0..self.n as u32).collect();
        order.shuffle(rng);
        let mut member = vec![false; self.n];
        for v in order {
            let blocked = self.incidence[v as usize].iter().any(|&e| {
                self.edges[e as usize]
                    .iter()
                    .all(|&u| u == v || member[u as usize])
            });
            if !blocked {
                member[v as usize] = true;
            }
        }
        (0..self.n as u32).filter(|&v| member[v as usize]).collect()
    }
}

#[derive(Clone)]
struct Scythe<'a> {
    host: &'a ContainerHost,
    avail: Vec<bool>,
    in_f: Vec<bool>,
    f: Vec<u32>,
    live: Vec<bool>,
    size: Vec<u8>,
    // deg[v][s]: live sets of current size s through v
    deg: Vec<[u32; MAX_K + 1]>,
    live_count: usize,
    removed: usize,
    threshold: usize,
}

impl<'a> Scythe<'a> {
    fn new(host: &'a ContainerHost, within: &[bool], threshold: usize) -> Self {
        let mut s = Scythe {
            host,
            avail: within.to_vec(),
            in_f: vec![false; host.n],
            f: Vec::new(),
            live: vec![false; host.edges.len()],
            size: vec![host.k as u8; host.edges.len()],
            deg: vec![[0; MAX_K + 1]; host.n],
            live_count: 0,
            removed: 0,
            threshold,
        };
        for (i, e) in host.edges.iter().enumerate() {
            if e.iter().all(|&v| within[v as usize]) {
                s.live[i] = true;
                s.live_count += 1;
                for &v in e {
                    s.deg[v as usize][host.k] += 1;
                }
            }
        }
        s
    }

    fn next_query(&self) -> Option<u32> {
        if self.live_count == 0 || (self.f.len() >= self.threshold && self.removed > 0) {
            return None;
        }
        let k = self.host.k;
        let mut best: Option<u32> = None;
        for v in 0..self.host.n {
            if !self.avail[v] {
                continue;
            }
            let d = &self.deg[v];
            if d[2..=k].iter().all(|&c| c == 0) {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => d[2..=k] > self.deg[b as usize][2..=k],
            };
            if better {
                best = Some(v as u32);
            }
        }
        best
    }

    fn current<'e>(&'e self, e: usize) -> impl Iterator<Item = u32> + 'e {
        self.host.edges[e].iter().copied().filter(move |&u| !self.in_f[u as usize])
    }

    fn kill(&mut self, e: usize) {
        self.live[e] = false;
        self.live_count -= 1;
        let s = self.size[e] as usize;
        let verts: Vec<u32> = self.current(e).collect();
        for u in verts {
            self.deg[u as usize][s] -= 1;
        }
    }

    fn remove(&mut self, v: u32) {
        if !self.avail[v as usize] {
            return;
        }
        self.avail[v as usize] = false;
        self.removed += 1;
        for i in 0..self.host.incidence[v as usize].len() {
            let e = self.host.incidence[v as usize][i] as usize;
            if self.live[e] {
                self.kill(e);
            }
        }
    }

    fn answer(&mut self, v: u32, yes: bool) {
        if !yes {
            self.remove(v);
            return;
        }
        let mut forced = Vec::new();
        for i in 0..self.host.incidence[v as usize].len() {
            let e = self.host.incidence[v as usize][i] as usize;
            if !self.live[e] {
                continue;
            }
            let s = self.size[e] as usize;
            let verts: Vec<u32> = self.current(e).collect();
            for &u in &verts {
                self.deg[u as usize][s] -= 1;
            }
            self.size[e] -= 1;
            if s - 1 == 1 {
                self.live[e] = false;
                self.live_count -= 1;
                forced.extend(verts.into_iter().filter(|&u| u != v));
            } else {
                for u in verts.into_iter().filter(|&u| u != v) {
                    self.deg[u as usize][s - 1] += 1;
                }
            }
        }
        self.in_f[v as usize] = true;
        self.avail[v as usize] = false;
        self.f.push(v);
        for u in forced {
            self.remove(u);
        }
    }

    fn run(&mut self, mut oracle: impl FnMut(u32) -> bool) {
        while let Some(v) = self.next_query() {
            let yes = oracle(v);
            self.answer(v, yes);
        }
    }

    fn container(&self) -> Vec<u32> {
        (0..self.host.n as u32)
            .filter(|&v| self.avail[v as usize] || self.in_f[v as usize])
            .collect()
    }

    fn fingerprint(&self) -> Vec<u32> {
        let mut f = self.f.clone();
        f.sort_unstable();
        f
    }
}

fn threshold(b: f64) -> Result<usize> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::Parameter {
            name: "B",
            value: b.to_string(),
            reason: "must be positive".into(),
        });
    }
    Ok(b.ceil() as usize)
}

fn mask_of(n: usize, set: &[u32]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in set {
        m[v as usize] = true;
    }
    m
}

/// Runs the procedure for one independent set inside `within`; returns the
/// fingerprint and the container.
pub fn container_for(host: &ContainerHost, within: &[u32], independent: &[u32], b: f64) -> Result<(Vec<u32>, Vec<u32>)> {
    let thr = threshold(b)?;
    let inside = mask_of(host.n, within);
    let member = mask_of(host.n, independent);
    if independent.iter().any(|&v| !inside[v as usize]) {
        return Err(Error::Precondition("independent set is not inside the host set".into()));
    }
    let mut s = Scythe::new(host, &inside, thr);
    s.run(|v| member[v as usize]);
    Ok((s.fingerprint(), s.container()))
}

/// Replays the procedure answering from the fingerprint only.
pub fn reconstruct(host: &ContainerHost, within: &[u32], fingerprint: &[u32], b: f64) -> Result<Vec<u32>> {
    let thr = threshold(b)?;
    let f = mask_of(host.n, fingerprint);
    let mut s = Scythe::new(host, &mask_of(host.n, within), thr);
    s.run(|v| f[v as usize]);
    Ok(s.container())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeCheck {
    pub i: usize,
    pub delta: u64,
    /// `(|E|/L) (B/|V|)^{i-1}`.
    pub allowed: f64,
}

impl DegreeCheck {
    pub fn holds(&self) -> bool {
        self.delta as f64 <= self.allowed
    }
}

/// Codegree condition of the one-step statement on the hypergraph induced
/// on `within`.
pub fn degree_condition(h: &Hypergraph, within: &[u32], b: f64, l: f64) -> Result<Vec<DegreeCheck>> {
    let sub = h.induced(within);
    let e = sub.edge_count() as f64;
    let n = within.len() as f64;
    (1..=h.k())
        .map(|i| {
            Ok(DegreeCheck {
                i,
                delta: delta_i_explicit(&sub, i)?,
                allowed: e / l * (b / n).powi(i as i32 - 1),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContainerFamily {
    pub host_size: usize,
    pub containers: Vec<Vec<u32>>,
    pub b: f64,
    pub l: f64,
    /// Smallest relative shrinkage `1 - |C'|/|C|` over all one-step calls.
    pub eps_hat: f64,
    pub depth: usize,
    pub level_counts: Vec<usize>,
    pub degree_checks: Vec<DegreeCheck>,
    /// No vertex was ever removed (edgeless host).
    pub degenerate: bool,
    pub nodes: u64,
}

impl ContainerFamily {
    pub fn max_size(&self) -> usize {
        self.containers.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn covers(&self, set: &[u32]) -> bool {
        self.containers.iter().any(|c| set.iter().all(|v| c.binary_search(v).is_ok()))
    }

    pub fn to_file_string(&self) -> String {
        let mut s = String::new();
        for c in &self.containers {
            let ids: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            s.push_str(&ids.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("host_size={}", self.host_size),
            format!("containers={}", self.containers.len()),
            format!("max_container={}", self.max_size()),
            format!("B={}", format_float(self.b)),
            format!("L={}", format_float(self.l)),
            format!("eps_hat={}", format_float(self.eps_hat)),
            format!("depth={}", self.depth),
            format!(
                "level_counts={}",
                self.level_counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
            ),
            format!("degenerate={}", self.degenerate),
        ];
        for d in &self.degree_checks {
            out.push(format!(
                "degree_{}={} allowed={} holds={}",
                d.i,
                d.delta,
                format_float(d.allowed),
                d.holds()
            ));
        }
        out
    }
}

/// All containers of one step on `within`, by exploring both answers at
/// every query. Fails when the tree exceeds `budget` nodes.
pub fn one_step_containers(h: &Hypergraph, within: &[u32], b: f64, l: f64, budget: u64) -> Result<ContainerFamily> {
    if within.is_empty() {
        return Err(Error::Precondition("container host must be nonempty".into()));
    }
    let host = ContainerHost::new(h)?;
    let degree_checks = degree_condition(h, within, b, l)?;
    let mut out = Vec::new();
    let mut nodes = 0;
    let root = Scythe::new(&host, &mask_of(host.n, within), threshold(b)?);
    explore(root, &mut out, &mut nodes, budget)?;
    out.sort_unstable();
    out.dedup();
    let largest = out.iter().map(Vec::len).max().unwrap_or(0);
    Ok(ContainerFamily {
        host_size: within.len(),
        eps_hat: 1.0 - largest as f64 / within.len() as f64,
        degenerate: largest == within.len(),
        level_counts: vec![1, out.len()],
        containers: out,
        b,
        l,
        depth: 1,
        degree_checks,
        nodes,
    })
}

fn explore(mut s: Scythe<'_>, out: &mut Vec<Vec<u32>>, nodes: &mut u64, budget: u64) -> Result<()> {
    loop {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::Budget(format!("container enumeration exceeded {budget} nodes")));
        }
        let Some(v) = s.next_query() else {
            out.push(s.container());
            return Ok(());
        };
        let mut yes = s.clone();
        yes.answer(v, true);
        explore(yes, out, nodes, budget)?;
        s.answer(v, false);
    }
}

/// `t_0 = n0` and `t_i = (1 - eps) t_{i-1}` down to the first `t_m <= cap`.
pub fn level_thresholds(n0: f64, cap: f64, eps: f64) -> Result<Vec<f64>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Parameter {
            name: "eps_hat",
            value: eps.to_string(),
            reason: "must lie in (0, 1)".into(),
        });
    }
    let mut t = vec![n0];
    while *t.last().unwrap() > cap {
        let next = t.last().unwrap() * (1.0 - eps);
        t.push(next);
    }
    Ok(t)
}

/// Refines one-step families until every container has at most `cap`
/// vertices or is itself independent. Explicit enumeration, for small hosts.
pub fn iterate_containers(h: &Hypergraph, b: f64, l: f64, cap: usize, budget: u64) -> Result<ContainerFamily> {
    let host: Vec<u32> = (0..h.vertex_count() as u32).collect();
    let mut level = vec![host];
    let mut counts = vec![1];
    let mut eps_hat = f64::INFINITY;
    let mut nodes = 0;
    let mut degree_checks = Vec::new();
    let mut depth = 0;
    let host = ContainerHost::new(h)?;
    while level.iter().any(|c| c.len() > cap && host.has_edge_within(c)) {
        let mut next = Vec::new();
        for c in level {
            // an independent container cannot shrink and needs no refinement
            if c.len() <= cap || !host.has_edge_within(&c) {
                next.push(c);
                continue;
            }
            let fam = one_step_containers(h, &c, b, l, budget.saturating_sub(nodes))?;
            nodes += fam.nodes;
            if depth == 0 {
                degree_checks = fam.degree_checks.clone();
            }
            if fam.max_size() >= c.len() {
                return Err(Error::NoShrink { size: c.len() });
            }
            eps_hat = eps_hat.min(fam.eps_hat);
            next.extend(fam.containers);
        }
        next.sort_unstable();
        next.dedup();
        counts.push(next.len());
        level = next;
        depth += 1;
    }
    Ok(ContainerFamily {
        host_size: h.vertex_count(),
        degenerate: depth == 0,
        containers: level,
        b,
        l,
        eps_hat: if eps_hat.is_finite() { eps_hat } else { 0.0 },
        depth,
        level_counts: counts,
        degree_checks,
        nodes,
    })
}

/// The per-level fingerprints leading from the whole vertex set to a
/// container of at most `cap` vertices that holds `independent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainerChain {
    pub fingerprints: Vec<Vec<u32>>,
    pub sizes: Vec<usize>,
    pub container: Vec<u32>,
}

pub fn container_chain(host: &ContainerHost, independent: &[u32], b: f64, cap: usize) -> Result<ContainerChain> {
    let mut within: Vec<u32> = (0..host.n as u32).collect();
    let mut fingerprints = Vec::new();
    let mut sizes = vec![within.len()];
    while within.len() > cap && host.has_edge_within(&within) {
        let (f, c) = container_for(host, &within, independent, b)?;
        if c.len() >= within.len() {
            return Err(Error::NoShrink { size: within.len() });
        }
        fingerprints.push(f);
        sizes.push(c.len());
        within = c;
    }
    Ok(ContainerChain {
        fingerprints,
        sizes,
        container: within,
    })
}

/// Rebuilds the final container of a chain from its fingerprints.
pub fn reconstruct_chain(host: &ContainerHost, fingerprints: &[Vec<u32>], b: f64) -> Result<Vec<u32>> {
    let mut within: Vec<u32> = (0..host.n as u32).collect();
    for f in fingerprints {
        within = reconstruct(host, &within, f, b)?;
    }
    Ok(within)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampledCoverage {
    pub samples: usize,
    pub covered: usize,
    pub reconstructed: usize,
    pub eps_hat: f64,
    pub max_depth: usize,
    pub max_fingerprint: Vec<usize>,
    pub max_container: usize,
    /// Chains ending in an independent container larger than the cap.
    pub independent_leaves: usize,
    /// Chain lengths that reached each level.
    pub level_counts: Vec<usize>,
    /// Distinct final containers, sorted.
    pub containers: Vec<Vec<u32>>,
}

impl SampledCoverage {
    pub fn passed(&self) -> bool {
        self.covered == self.samples && self.reconstructed == self.samples
    }

    pub fn lines(&self) -> Vec<String> {
        let join = |v: &[usize]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        vec![
            format!("samples={}", self.samples),
            format!("covered={}", self.covered),
            format!("reconstructed={}", self.reconstructed),
            format!("eps_hat={}", format_float(self.eps_hat)),
            format!("max_depth={}", self.max_depth),
            format!("max_fingerprint={}", join(&self.max_fingerprint)),
            format!("max_container={}", self.max_container),
            format!("independent_leaves={}", self.independent_leaves),
            format!("level_counts={}", join(&self.level_counts)),
            format!("distinct_containers={}", self.containers.len()),
        ]
    }
}

/// Container chains for `samples` random maximal independent sets, with
/// coverage and fingerprint-only reconstruction checked for each.
pub fn sampled_coverage(h: &Hypergraph, b: f64, cap: usize, samples: usize, seed: u64) -> Result<SampledCoverage> {
    let host = ContainerHost::new(h)?;
    let chains: Vec<Result<(Vec<u32>, ContainerChain, Vec<u32>)>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let set = host.random_maximal_independent(&mut rng);
            let chain = container_chain(&host, &set, b, cap)?;
            let rebuilt = reconstruct_chain(&host, &chain.fingerprints, b)?;
            Ok((set, chain, rebuilt))
        })
        .collect();
    let mut rep = SampledCoverage {
        samples,
        covered: 0,
        reconstructed: 0,
        eps_hat: f64::INFINITY,
        max_depth: 0,
        max_fingerprint: Vec::new(),
        max_container: 0,
        independent_leaves: 0,
        level_counts: Vec::new(),
        containers: Vec::new(),
    };
    for c in chains {
        let (set, chain, rebuilt) = c?;
        debug_assert!(host.is_independent(&set));
        if set.iter().all(|v| chain.container.binary_search(v).is_ok()) {
            rep.covered += 1;
        }
        if rebuilt == chain.container {
            rep.reconstructed += 1;
        }
        for w in chain.sizes.windows(2) {
            rep.eps_hat = rep.eps_hat.min(1.0 - w[1] as f64 / w[0] as f64);
        }
        let depth = chain.fingerprints.len();
        rep.max_depth = rep.max_depth.max(depth);
        if rep.max_fingerprint.len() < depth {
            rep.max_fingerprint.resize(depth, 0);
            rep.level_counts.resize(depth, 0);
        }
        for (i, f) in chain.fingerprints.iter().enumerate() {
            rep.max_fingerprint[i] = rep.max_fingerprint[i].max(f.len());
            rep.level_counts[i] += 1;
        }
        rep.max_container = rep.max_container.max(chain.container.len());
        if chain.container.len() > cap {
            rep.independent_leaves += 1;
        }
        rep.containers.push(chain.container);
    }
    rep.containers.sort_unstable();
    rep.containers.dedup();
    if !rep.eps_hat.is_finite() {
        rep.eps_hat = 0.0;
    }
    Ok(rep)
}

pub fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i + 1) as u128,
            None => return u128::MAX,
        };
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountBound {
    /// `sum over containers of C(|C|, t)`.
    pub sum: u128,
    /// `|family| * C(max |C|, t)`.
    pub coarse: u128,
}

pub fn count_bound(family: &ContainerFamily, t: usize) -> CountBound {
    let sum = family
        .containers
        .iter()
        .fold(0u128, |acc, c| acc.saturating_add(binomial_u128(c.len() as u64, t as u64)));
    let coarse = (family.containers.len() as u128).saturating_mul(binomial_u128(family.max_size() as u64, t as u64));
    CountBound { sum, coarse }
}

/// Natural log of the number of fingerprint sequences with the given
/// per-level host sizes and maximal fingerprint sizes, times `C(cap, t)`.
pub fn log_chain_bound(level_sizes: &[usize], max_fingerprint: &[usize], cap: usize, t: usize) -> f64 {
    let ln_binom = |n: usize, k: usize| -> f64 {
        (0..k.min(n)).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
    };
    let per_level: f64 = level_sizes
        .iter()
        .zip(max_fingerprint)
        .map(|(&n, &f)| {
            let terms: Vec<f64> = (0..=f.min(n)).map(|j| ln_binom(n, j)).collect();
            let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            m + terms.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
        })
        .sum();
    per_level + ln_binom(cap, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::BlockHypergraph;
    use crate::independence::count_independent_sets;
    use rand::Rng;

    fn independent_sets(h: &Hypergraph) -> Vec<Vec<u32>> {
        let n = h.vertex_count();
        let masks: Vec<u32> = h.edges().iter().map(|e| e.iter().fold(0, |m, &v| m | 1 << v)).collect();
        (0u32..1 << n)
            .filter(|s| masks.iter().all(|e| s & e != *e))
            .map(|s| (0..n as u32).filter(|v| s >> v & 1 == 1).collect())
            .collect()
    }

    fn cycle5() -> Hypergraph {
        Hypergraph::new(2, 5, (0..5).map(|i| vec![i, (i + 1) % 5]).collect()).unwrap()
    }

    #[test]
    fn edgeless_host_is_degenerate() {
        let h = Hypergraph::empty(3, 6);
        let fam = one_step_containers(&h, &(0..6).collect::<Vec<_>>(), 2.0, 2.0, 100).unwrap();
        assert_eq!(fam.containers, vec![(0..6).collect::<Vec<u32>>()]);
        assert!(fam.degenerate);
        assert!(one_step_containers(&h, &[], 2.0, 2.0, 100).is_err());
    }

    #[test]
    fn five_cycle() {
        let h = cycle5();
        let fam = one_step_containers(&h, &(0..5).collect::<Vec<_>>(), 2.0, 2.0, 10_000).unwrap();
        let sets = independent_sets(&h);
        assert_eq!(sets.len(), 11);
        assert!(sets.iter().all(|s| fam.covers(s)));
        assert!(fam.containers.iter().all(|c| c.len() < 5));
        assert!(fam.eps_hat > 0.0);
    }

    #[test]
    fn fingerprints_determine_containers() {
        let h = BlockHypergraph::random(7, 3, 3).unwrap().to_hypergraph();
        let host = ContainerHost::new(&h).unwrap();
        let all: Vec<u32> = (0..49).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let set = host.random_maximal_independent(&mut rng);
            assert!(host.is_independent(&set));
            let (f, c) = container_for(&host, &all, &set, 3.0).unwrap();
            assert!(f.iter().all(|v| set.contains(v)));
            assert!(set.iter().all(|v| c.contains(v)));
            assert_eq!(reconstruct(&host, &all, &f, 3.0).unwrap(), c);
            assert!(c.len() < 49);
        }
    }

    #[test]
    fn random_small_hypergraphs_are_covered() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..15 {
            let n = rng.gen_range(6..=12);
            let k = rng.gen_range(2..=3);
            let m = rng.gen_range(1..=2 * n);
            let edges = (0..m)
                .map(|_| {
                    let mut e: Vec<u32> = (0..n as u32).collect();
                    e.shuffle(&mut rng);
                    e.truncate(k);
                    e
                })
                .collect();
            let h = Hypergraph::new(k, n, edges).unwrap();
            let fam = iterate_containers(&h, 2.0, 2.0, n / 2, 1_000_000).unwrap();
            let sets = independent_sets(&h);
            assert!(sets.iter().all(|s| fam.covers(s)));
            for t in 0..=n {
                let exact = count_independent_sets(&h, t).unwrap() as u128;
                let bound = count_bound(&fam, t);
                assert!(bound.sum >= exact && bound.coarse >= bound.sum);
            }
        }
    }

    #[test]
    fn thresholds() {
        let t = level_thresholds(169.0, 156.0, 0.5).unwrap();
        assert_eq!(t, vec![169.0, 84.5]);
        let t = level_thresholds(289.0, 204.0, 0.1).unwrap();
        assert_eq!(t.len() - 1, 4);
        let bound = ((289.0f64 / 204.0).ln() / -(0.9f64).ln()).ceil() as usize;
        assert!(t.len() - 1 <= bound);
        assert!(t.windows(2).all(|w| w[1] < w[0]));
        assert!(level_thresholds(10.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn sampled_chains_on_small_host() {
        let h = BlockHypergraph::random(7, 3, 1).unwrap().to_hypergraph();
        let rep = sampled_coverage(&h, 7f64.sqrt(), 20, 300, 4).unwrap();
        assert!(rep.passed(), "{:?}", rep.lines());
        assert!(rep.eps_hat > 0.0);
        assert!(rep.max_container <= 20 || rep.independent_leaves > 0);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial_u128(289, 24), {
            let mut acc: u128 = 1;
            for i in 0..24u128 {
                acc = acc * (289 - i) / (i + 1);
            }
            acc
        });
        assert_eq!(binomial_u128(3, 5), 0);
        let lb = log_chain_bound(&[10], &[0], 10, 3);
        assert!((lb - 120f64.ln()).abs() < 1e-12);
    }
}
