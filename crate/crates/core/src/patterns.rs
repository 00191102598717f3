//! Forbidden `k`-graphs: slow orderings, `k`-partiteness and embedding search.

use std::collections::BTreeMap;
use std::fmt;

use crate::blocks::BlockHypergraph;
use crate::error::{Error, Result};
use crate::hypergraph::parse_edge_list;

/// Edge-count limit for the ordering search (memo table has `2^t` entries).
pub const MAX_ORDER_EDGES: usize = 20;
/// Vertex limit for the partition search.
pub const MAX_PARTITION_VERTICES: usize = 32;
/// Vertex limit for the brute-force canonical form.
pub const MAX_CANON_VERTICES: usize = 9;
/// Vertex limit for embedding search.
pub const MAX_EMBED_VERTICES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    k: usize,
    v: usize,
    edges: Vec<Vec<u8>>,
    name: Option<String>,
}

impl Pattern {
    /// Edges keep the given order; vertices within an edge are sorted.
    pub fn new(k: usize, v: usize, edges: Vec<Vec<u8>>, name: Option<&str>) -> Result<Self> {
        if k < 2 {
            return Err(Error::Pattern("uniformity must be at least 2".into()));
        }
        if v > 64 {
            return Err(Error::Pattern("at most 64 vertices".into()));
        }
        let mut seen = Vec::new();
        let mut covered = vec![false; v];
        let mut out = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) || e.len() != k {
                return Err(Error::Pattern(format!("edge {e:?} is not a {k}-set")));
            }
            if let Some(&x) = e.iter().find(|&&x| x as usize >= v) {
                return Err(Error::Pattern(format!("vertex {x} outside 0..{v}")));
            }
            if seen.contains(&e) {
                return Err(Error::Pattern(format!("duplicate edge {e:?}")));
            }
            for &x in &e {
                covered[x as usize] = true;
            }
            seen.push(e.clone());
            out.push(e);
        }
        if let Some(x) = covered.iter().position(|c| !c) {
            return Err(Error::Pattern(format!("vertex {x} lies in no edge")));
        }
        Ok(Pattern {
            k,
            v,
            edges: out,
            name: name.map(str::to_string),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.v
    }

    pub fn edges(&self) -> &[Vec<u8>] {
        &self.edges
    }

    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or("unnamed")
    }

    fn edge_mask(&self, i: usize) -> u64 {
        self.edges[i].iter().fold(0, |m, &x| m | 1 << x)
    }

    /// Pattern file: header `k v t`, then `t` edge lines of 0-based ids.
    pub fn parse(text: &str, name: Option<&str>) -> Result<Self> {
        let ([k, v, t], edges) = parse_edge_list(text)?;
        if edges.len() != t {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header announces {t} edges, found {}", edges.len()),
            });
        }
        let edges = edges
            .into_iter()
            .map(|e| e.into_iter().map(|x| x as u8).collect())
            .collect();
        Pattern::new(k, v, edges, name)
    }

    pub fn to_file_string(&self) -> String {
        let mut s = format!("{} {} {}\n", self.k, self.v, self.edges.len());
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(|x| x.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Lexicographically least sorted edge list over all vertex relabellings.
    pub fn canonical_form(&self) -> Result<Vec<Vec<u8>>> {
        if self.v > MAX_CANON_VERTICES {
            return Err(Error::Guard(format!(
                "canonical form needs v <= {MAX_CANON_VERTICES}, got {}",
                self.v
            )));
        }
        let mut perm: Vec<u8> = (0..self.v as u8).collect();
        let mut best: Option<Vec<Vec<u8>>> = None;
        loop {
            let mut relabelled: Vec<Vec<u8>> = self
                .edges
                .iter()
                .map(|e| {
                    let mut r: Vec<u8> = e.iter().map(|&x| perm[x as usize]).collect();
                    r.sort_unstable();
                    r
                })
                .collect();
            relabelled.sort_unstable();
            if best.as_ref().is_none_or(|b| relabelled < *b) {
                best = Some(relabelled);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Ok(best.unwrap_or_default())
    }

    pub fn is_isomorphic(&self, other: &Pattern) -> Result<bool> {
        if self.k != other.k || self.v != other.v || self.edges.len() != other.edges.len() {
            return Ok(false);
        }
        Ok(self.canonical_form()? == other.canonical_form()?)
    }

    /// An edge order in which every edge after the first adds at most one
    /// new vertex. Exhaustive search over used-edge sets, memoising dead ends.
    pub fn find_slow_ordering(&self) -> Result<Option<Vec<usize>>> {
        let t = self.edges.len();
        if t > MAX_ORDER_EDGES {
            return Err(Error::Guard(format!(
                "ordering search needs at most {MAX_ORDER_EDGES} edges, got {t}"
            )));
        }
        if t == 0 {
            return Ok(Some(Vec::new()));
        }
        let masks: Vec<u64> = (0..t).map(|i| self.edge_mask(i)).collect();
        let mut dead = vec![false; 1 << t];
        let mut order = Vec::with_capacity(t);
        for first in 0..t {
            order.push(first);
            if extend_order(&masks, 1 << first, masks[first], &mut order, &mut dead) {
                return Ok(Some(order));
            }
            order.pop();
        }
        Ok(None)
    }

    /// The lexicographically least colour word `V -> {0..k-1}` meeting every
    /// edge in all `k` colours, or `None` if the pattern is non-degenerate.
    pub fn degenerate_partition(&self) -> Result<Option<Vec<u8>>> {
        if self.v > MAX_PARTITION_VERTICES {
            return Err(Error::Guard(format!(
                "partition search needs v <= {MAX_PARTITION_VERTICES}, got {}",
                self.v
            )));
        }
        let mut by_last: Vec<Vec<usize>> = vec![Vec::new(); self.v];
        for (i, e) in self.edges.iter().enumerate() {
            by_last[*e.last().unwrap() as usize].push(i);
        }
        let mut colors = vec![u8::MAX; self.v];
        if self.assign(0, &mut colors, &by_last) {
            Ok(Some(colors))
        } else {
            Ok(None)
        }
    }

    // Colours vertices in id order; an edge is checked once its largest
    // vertex is coloured, and partially coloured edges must stay injective.
    fn assign(&self, x: usize, colors: &mut [u8], by_last: &[Vec<usize>]) -> bool {
        if x == self.v {
            return true;
        }
        for c in 0..self.k as u8 {
            colors[x] = c;
            let ok = self.edges.iter().all(|e| {
                if !e.contains(&(x as u8)) {
                    return true;
                }
                let mut seen = 0u32;
                for &u in e {
                    let cu = colors[u as usize];
                    if cu == u8::MAX {
                        continue;
                    }
                    if seen >> cu & 1 == 1 {
                        return false;
                    }
                    seen |= 1 << cu;
                }
                true
            }) && by_last[x].iter().all(|&i| {
                self.edges[i].iter().fold(0u32, |s, &u| s | 1 << colors[u as usize]).count_ones()
                    == self.k as u32
            });
            if ok && self.assign(x + 1, colors, by_last) {
                return true;
            }
        }
        colors[x] = u8::MAX;
        false
    }

    pub fn analyze(&self) -> Result<PatternAnalysis> {
        let slow_ordering = self.find_slow_ordering()?;
        let degenerate_partition = self.degenerate_partition()?;
        let analysis = PatternAnalysis {
            is_admissible: slow_ordering.is_some() && degenerate_partition.is_none(),
            slow_ordering,
            degenerate_partition,
        };
        analysis.validate(self)?;
        Ok(analysis)
    }

    /// New-vertex counts along an ordering (`None` for the first edge).
    pub fn new_vertex_counts(&self, order: &[usize]) -> Vec<Option<usize>> {
        let mut covered = 0u64;
        order
            .iter()
            .enumerate()
            .map(|(i, &e)| {
                let m = self.edge_mask(e);
                let fresh = (m & !covered).count_ones() as usize;
                covered |= m;
                (i > 0).then_some(fresh)
            })
            .collect()
    }
}

fn extend_order(masks: &[u64], used: u64, covered: u64, order: &mut Vec<usize>, dead: &mut [bool]) -> bool {
    if order.len() == masks.len() {
        return true;
    }
    if dead[used as usize] {
        return false;
    }
    for (i, &m) in masks.iter().enumerate() {
        if used >> i & 1 == 1 || (m & !covered).count_ones() > 1 {
            continue;
        }
        order.push(i);
        if extend_order(masks, used | 1 << i, covered | m, order, dead) {
            return true;
        }
        order.pop();
    }
    dead[used as usize] = true;
    false
}

fn next_permutation(p: &mut [u8]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternAnalysis {
    pub slow_ordering: Option<Vec<usize>>,
    pub degenerate_partition: Option<Vec<u8>>,
    /// Slowly growing and non-degenerate.
    pub is_admissible: bool,
}

impl PatternAnalysis {
    /// Re-checks the returned witnesses against their definitions.
    pub fn validate(&self, f: &Pattern) -> Result<()> {
        if let Some(order) = &self.slow_ordering {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != (0..f.edges.len()).collect::<Vec<_>>() {
                return Err(Error::Pattern("ordering is not a permutation of the edges".into()));
            }
            if f.new_vertex_counts(order).iter().flatten().any(|&c| c > 1) {
                return Err(Error::Pattern("ordering adds two vertices in one step".into()));
            }
        }
        if let Some(colors) = &self.degenerate_partition {
            for e in &f.edges {
                let hit = e.iter().fold(0u32, |s, &x| s | 1 << colors[x as usize]);
                if hit.count_ones() != f.k as u32 {
                    return Err(Error::Pattern(format!("edge {e:?} is not rainbow")));
                }
            }
        }
        if self.is_admissible != (self.slow_ordering.is_some() && self.degenerate_partition.is_none()) {
            return Err(Error::Pattern("admissibility flag inconsistent".into()));
        }
        Ok(())
    }

    pub fn lines(&self, f: &Pattern) -> Vec<String> {
        let order = match &self.slow_ordering {
            Some(o) => {
                let counts: Vec<String> = f
                    .new_vertex_counts(o)
                    .iter()
                    .map(|c| c.map_or("-".into(), |c| c.to_string()))
                    .collect();
                format!(
                    "slow_ordering={} new_vertices={}",
                    o.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","),
                    counts.join(",")
                )
            }
            None => "slow_ordering=none".into(),
        };
        let part = match &self.degenerate_partition {
            Some(c) => {
                let mut classes: BTreeMap<u8, Vec<String>> = BTreeMap::new();
                for (x, &col) in c.iter().enumerate() {
                    classes.entry(col).or_default().push(x.to_string());
                }
                let parts: Vec<String> = classes
                    .values()
                    .map(|vs| format!("{{{}}}", vs.join(",")))
                    .collect();
                format!("partition={}", parts.join(" "))
            }
            None => "partition=none".into(),
        };
        vec![
            format!("pattern={} k={} v={} t={}", f.name(), f.k, f.v, f.edges.len()),
            order,
            part,
            format!(
                "admissible={}",
                if self.is_admissible { "yes" } else { "no" }
            ),
        ]
    }
}

/// Named patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `F_{2k-1}`: `{v_1..v_{k-1}, w_i}` for `i < k` plus `{w_1..w_k}`.
    Fan,
    /// `T_k`: `F_{2k-1}` plus `{v_1..v_{k-1}, w_k}`.
    Tk,
    F5,
    Tp3,
    Lc3,
    K4Minus,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "fan" | "f2k-1" | "f_{2k-1}" => Family::Fan,
            "tk" | "t_k" => Family::Tk,
            "f5" => Family::F5,
            "tp3" => Family::Tp3,
            "lc3" => Family::Lc3,
            "k4minus" | "k4-" => Family::K4Minus,
            other => return Err(Error::Pattern(format!("unknown family {other:?}"))),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Fan => "F2k-1",
            Family::Tk => "Tk",
            Family::F5 => "F5",
            Family::Tp3 => "TP3",
            Family::Lc3 => "LC3",
            Family::K4Minus => "K4minus",
        })
    }
}

pub fn make_family(family: Family, k: usize) -> Result<Pattern> {
    let fixed = |edges: &[[u8; 3]], v: usize, name: &str| {
        if k != 3 {
            return Err(Error::Pattern(format!("{name} is 3-uniform, got k = {k}")));
        }
        Pattern::new(3, v, edges.iter().map(|e| e.to_vec()).collect(), Some(name))
    };
    match family {
        Family::F5 => fixed(&[[0, 1, 2], [0, 1, 3], [2, 3, 4]], 5, "F5"),
        Family::Tp3 => fixed(&[[0, 1, 2], [1, 2, 3], [2, 3, 4]], 5, "TP3"),
        Family::Lc3 => fixed(&[[0, 1, 2], [2, 3, 4], [4, 5, 0]], 6, "LC3"),
        Family::K4Minus => fixed(&[[0, 1, 2], [0, 1, 3], [0, 2, 3]], 4, "K4minus"),
        Family::Fan | Family::Tk => {
            if !(3..=30).contains(&k) {
                return Err(Error::Pattern(format!("parametric families need 3 <= k <= 30, got {k}")));
            }
            // v_1..v_{k-1} -> 0..k-2, w_1..w_k -> k-1..2k-2
            let core: Vec<u8> = (0..k as u8 - 1).collect();
            let w = |i: usize| (k - 2 + i) as u8;
            let mut edges: Vec<Vec<u8>> = (1..k)
                .map(|i| {
                    let mut e = core.clone();
                    e.push(w(i));
                    e
                })
                .collect();
            edges.push((1..=k).map(w).collect());
            let name = if family == Family::Fan {
                format!("F{}", 2 * k - 1)
            } else {
                let mut e = core.clone();
                e.push(w(k));
                edges.push(e);
                format!("T{k}")
            };
            Pattern::new(k, 2 * k - 1, edges, Some(&name))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbedOutcome {
    /// `map[i]` is the image of pattern vertex `i`.
    Found(Vec<u32>),
    None,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedResult {
    pub outcome: EmbedOutcome,
    pub nodes: u64,
}

/// Backtracking search for an injective map sending every edge of `f` to an
/// edge of `h`, restricted to `allowed` vertices when given. Vertices are
/// placed in slow-ordering order when one exists.
pub fn embed_search(f: &Pattern, h: &BlockHypergraph, allowed: Option<&[bool]>, budget: u64) -> Result<EmbedResult> {
    if f.v > MAX_EMBED_VERTICES {
        return Err(Error::Guard(format!(
            "embedding search needs v <= {MAX_EMBED_VERTICES}, got {}",
            f.v
        )));
    }
    if f.k != h.k() {
        return Err(Error::Pattern(format!("pattern is {}-uniform, host is {}-uniform", f.k, h.k())));
    }
    let order = vertex_order(f)?;
    let mut search = Embedder {
        f,
        h,
        allowed,
        order,
        map: vec![u32::MAX; f.v],
        used: vec![false; h.vertex_count()],
        nodes: 0,
        budget,
    };
    let outcome = match search.place(0) {
        Some(true) => EmbedOutcome::Found(search.map.clone()),
        Some(false) => EmbedOutcome::None,
        None => EmbedOutcome::BudgetExhausted,
    };
    if let EmbedOutcome::Found(map) = &outcome {
        for e in &f.edges {
            let img: Vec<u32> = e.iter().map(|&x| map[x as usize]).collect();
            debug_assert!(h.is_edge(&img)?);
        }
    }
    Ok(EmbedResult {
        outcome,
        nodes: search.nodes,
    })
}

fn vertex_order(f: &Pattern) -> Result<Vec<u8>> {
    let edge_order: Vec<usize> = match f.find_slow_ordering()? {
        Some(o) => o,
        None => {
            // greedy: next edge sharing the most vertices with those placed
            let mut done = vec![false; f.edges.len()];
            let mut covered = 0u64;
            let mut out = Vec::new();
            for _ in 0..f.edges.len() {
                let i = (0..f.edges.len())
                    .filter(|&i| !done[i])
                    .max_by_key(|&i| ((f.edge_mask(i) & covered).count_ones(), std::cmp::Reverse(i)))
                    .unwrap();
                done[i] = true;
                covered |= f.edge_mask(i);
                out.push(i);
            }
            out
        }
    };
    let mut order = Vec::with_capacity(f.v);
    for i in edge_order {
        for &x in &f.edges[i] {
            if !order.contains(&x) {
                order.push(x);
            }
        }
    }
    Ok(order)
}

struct Embedder<'a> {
    f: &'a Pattern,
    h: &'a BlockHypergraph,
    allowed: Option<&'a [bool]>,
    order: Vec<u8>,
    map: Vec<u32>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
}

impl Embedder<'_> {
    /// `Some(true)` found, `Some(false)` exhausted, `None` out of budget.
    fn place(&mut self, depth: usize) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let x = self.order[depth] as usize;
        for cand in self.candidates(x) {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            if self.used[cand as usize] || !self.allowed.is_none_or(|a| a[cand as usize]) {
                continue;
            }
            self.map[x] = cand;
            if self.consistent(x) {
                self.used[cand as usize] = true;
                let r = self.place(depth + 1);
                self.used[cand as usize] = false;
                if r != Some(false) {
                    return r;
                }
            }
            self.map[x] = u32::MAX;
        }
        Some(false)
    }

    /// Images of edge-mates of `x` already placed pin `x` to a common block.
    fn candidates(&self, x: usize) -> Vec<u32> {
        let placed: Vec<u32> = self
            .f
            .edges
            .iter()
            .filter(|e| e.contains(&(x as u8)))
            .flat_map(|e| e.iter().map(|&u| self.map[u as usize]))
            .filter(|&m| m != u32::MAX)
            .collect();
        match placed.first() {
            None => (0..self.h.vertex_count() as u32).collect(),
            Some(&anchor) => {
                let mut c: Vec<u32> = self
                    .h
                    .incident_blocks(anchor as usize)
                    .iter()
                    .flat_map(|&y| self.h.block(y as usize).iter().copied())
                    .collect();
                c.sort_unstable();
                c.dedup();
                c
            }
        }
    }

    /// Every edge through `x` must have its placed images inside one block
    /// with distinct colours; complete edges must be host edges.
    fn consistent(&self, x: usize) -> bool {
        self.f.edges.iter().filter(|e| e.contains(&(x as u8))).all(|e| {
            let img: Vec<u32> = e
                .iter()
                .map(|&u| self.map[u as usize])
                .filter(|&m| m != u32::MAX)
                .collect();
            if img.len() == 1 {
                return true;
            }
            if img.len() == e.len() {
                return self.h.is_edge(&img).unwrap_or(false);
            }
            self.h
                .common_blocks(&img)
                .into_iter()
                .any(|y| self.h.is_rainbow_in(y, &img))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(edges: &[&[u8]], v: usize) -> Pattern {
        Pattern::new(edges[0].len(), v, edges.iter().map(|e| e.to_vec()).collect(), None).unwrap()
    }

    fn brute_partition(f: &Pattern) -> Option<Vec<u8>> {
        let total = (f.k as u64).pow(f.v as u32);
        (0..total).find_map(|mut code| {
            // most significant digit = vertex 0, so the scan is lexicographic
            let mut colors = vec![0u8; f.v];
            for x in (0..f.v).rev() {
                colors[x] = (code % f.k as u64) as u8;
                code /= f.k as u64;
            }
            f.edges
                .iter()
                .all(|e| e.iter().fold(0u32, |s, &x| s | 1 << colors[x as usize]).count_ones() == f.k as u32)
                .then_some(colors)
        })
    }

    fn brute_ordering_exists(f: &Pattern) -> bool {
        let t = f.edges.len();
        let mut idx: Vec<u8> = (0..t as u8).collect();
        loop {
            let order: Vec<usize> = idx.iter().map(|&i| i as usize).collect();
            if f.new_vertex_counts(&order).iter().flatten().all(|&c| c <= 1) {
                return true;
            }
            if !next_permutation(&mut idx) {
                return false;
            }
        }
    }

    #[test]
    fn slow_orderings() {
        let f5 = make_family(Family::F5, 3).unwrap();
        let o = f5.find_slow_ordering().unwrap().unwrap();
        assert_eq!(o, vec![0, 1, 2]);
        assert_eq!(f5.new_vertex_counts(&o), vec![None, Some(1), Some(1)]);

        let lc3 = make_family(Family::Lc3, 3).unwrap();
        assert_eq!(lc3.find_slow_ordering().unwrap(), None);
        assert!(!brute_ordering_exists(&lc3));

        let k4 = make_family(Family::K4Minus, 3).unwrap();
        let o = k4.find_slow_ordering().unwrap().unwrap();
        assert_eq!(o, vec![0, 1, 2]);
        assert_eq!(k4.new_vertex_counts(&o), vec![None, Some(1), Some(0)]);
    }

    #[test]
    fn partitions_match_brute_force() {
        let tp3 = make_family(Family::Tp3, 3).unwrap();
        let part = tp3.degenerate_partition().unwrap().unwrap();
        // V1 = {1,4}, V2 = {2,5}, V3 = {3} in 1-based labels
        assert_eq!(part, vec![0, 1, 2, 0, 1]);
        assert_eq!(brute_partition(&tp3), Some(part));
        for fam in [Family::F5, Family::K4Minus, Family::Lc3, Family::Tp3] {
            let f = make_family(fam, 3).unwrap();
            assert_eq!(f.degenerate_partition().unwrap(), brute_partition(&f), "{fam}");
        }
        assert_eq!(make_family(Family::F5, 3).unwrap().degenerate_partition().unwrap(), None);
        assert_eq!(make_family(Family::K4Minus, 3).unwrap().degenerate_partition().unwrap(), None);
    }

    #[test]
    fn random_patterns_agree_with_brute_force() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut checked = 0;
        while checked < 200 {
            let v = 4 + (next() % 4) as usize;
            let t = 2 + (next() % 4) as usize;
            let mut edges: Vec<Vec<u8>> = Vec::new();
            for _ in 0..t {
                let mut e: Vec<u8> = Vec::new();
                while e.len() < 3 {
                    let x = (next() % v as u64) as u8;
                    if !e.contains(&x) {
                        e.push(x);
                    }
                }
                e.sort_unstable();
                if !edges.contains(&e) {
                    edges.push(e);
                }
            }
            let Ok(f) = Pattern::new(3, v, edges, None) else { continue };
            assert_eq!(f.degenerate_partition().unwrap(), brute_partition(&f));
            assert_eq!(f.find_slow_ordering().unwrap().is_some(), brute_ordering_exists(&f));
            f.analyze().unwrap();
            checked += 1;
        }
    }

    #[test]
    fn classification_table() {
        let table = [
            (Family::F5, true, false),
            (Family::K4Minus, true, false),
            (Family::Tp3, true, true),
            (Family::Lc3, false, true),
        ];
        for (fam, slow, degenerate) in table {
            let a = make_family(fam, 3).unwrap().analyze().unwrap();
            assert_eq!(a.slow_ordering.is_some(), slow, "{fam}");
            assert_eq!(a.degenerate_partition.is_some(), degenerate, "{fam}");
            assert_eq!(a.is_admissible, slow && !degenerate);
        }
    }

    #[test]
    fn parametric_families() {
        let fan3 = make_family(Family::Fan, 3).unwrap();
        assert!(fan3.is_isomorphic(&make_family(Family::F5, 3).unwrap()).unwrap());

        let t3 = make_family(Family::Tk, 3).unwrap();
        assert_eq!(t3.edges().len(), 4);
        assert_eq!(t3.edges()[3], vec![0, 1, 4]);
        let shuffled = p(&[&[2, 3, 4], &[0, 1, 4], &[0, 1, 2], &[0, 1, 3]], 5);
        assert!(t3.is_isomorphic(&shuffled).unwrap());

        let f7 = make_family(Family::Fan, 4).unwrap();
        assert_eq!((f7.vertex_count(), f7.edges().len()), (7, 4));
        let a = f7.analyze().unwrap();
        assert!(a.slow_ordering.is_some() && a.degenerate_partition.is_none());
        assert!(a.is_admissible);

        assert!(make_family(Family::Fan, 2).is_err());
        assert!(make_family(Family::F5, 4).is_err());
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn pattern_validation() {
        assert!(Pattern::new(3, 4, vec![vec![0, 1, 1]], None).is_err());
        assert!(Pattern::new(3, 4, vec![vec![0, 1, 2], vec![2, 1, 0], vec![1, 2, 3]], None).is_err());
        assert!(Pattern::new(3, 5, vec![vec![0, 1, 2]], None).is_err());
        let f = Pattern::parse("3 5 3\n0 1 2\n0 1 3\n2 3 4\n", Some("f5")).unwrap();
        assert_eq!(Pattern::parse(&f.to_file_string(), Some("f5")).unwrap(), f);
    }

    #[test]
    fn embedding_examples() {
        let f5 = make_family(Family::F5, 3).unwrap();
        let pure = BlockHypergraph::build(5, 3).unwrap();
        let r = embed_search(&f5, &pure, None, 1_000_000).unwrap();
        let EmbedOutcome::Found(map) = r.outcome else {
            panic!("F5 should embed in a clique")
        };
        let y = pure.common_block(&map).unwrap();
        assert!(map.iter().all(|x| pure.block(y).contains(x)));

        let star = pure.randomize(1);
        assert_eq!(embed_search(&f5, &star, None, 1_000_000).unwrap().outcome, EmbedOutcome::None);

        let tp3 = make_family(Family::Tp3, 3).unwrap();
        let found = (0..20).any(|s| {
            matches!(
                embed_search(&tp3, &pure.randomize(s), None, 1_000_000).unwrap().outcome,
                EmbedOutcome::Found(_)
            )
        });
        assert!(found);
    }

    #[test]
    fn embedding_budget_is_reported() {
        let f5 = make_family(Family::F5, 3).unwrap();
        let star = BlockHypergraph::random(7, 3, 2).unwrap();
        assert_eq!(embed_search(&f5, &star, None, 10).unwrap().outcome, EmbedOutcome::BudgetExhausted);
    }
}
