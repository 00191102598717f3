//! Exact and heuristic independence-number search.
//!
//! Every constraint of a [`SearchView`] is a list of disjoint vertex classes;
//! a set is independent iff, for every constraint, it misses at least one
//! class. An explicit edge is a constraint with singleton classes and a block
//! of `H*` is the constraint formed by its colour classes.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::blocks::{binomial, k_subsets, BlockHypergraph};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::mask::{Mask, MASK_BITS};

/// Largest block view accepted by the exact searches.
pub const BLOCK_VIEW_LIMIT: usize = 200;
/// Largest explicit hypergraph accepted by the exact searches.
pub const EXPLICIT_VIEW_LIMIT: usize = 40;
/// Largest `C(n, t)` enumerated by [`count_independent_sets`].
pub const COUNT_LIMIT: u64 = 100_000_000;
/// Greedy restarts run before any exact search.
pub const HEURISTIC_TRIALS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViewKind {
    Explicit,
    Blocks,
}

#[derive(Debug, Clone)]
struct Constraint {
    classes: Vec<Mask>,
}

#[derive(Debug, Clone)]
pub struct SearchView {
    kind: ViewKind,
    k: usize,
    vertices: Vec<u32>,
    constraints: Vec<Constraint>,
    // (constraint, class) pairs per local vertex
    incidence: Vec<Vec<(u32, u8)>>,
}

impl SearchView {
    pub fn from_hypergraph(h: &Hypergraph) -> Result<Self> {
        let n = h.vertex_count();
        if n > MASK_BITS {
            return Err(Error::Guard(format!("views hold at most {MASK_BITS} vertices, got {n}")));
        }
        let constraints = h
            .edges()
            .iter()
            .map(|e| Constraint {
                classes: e.iter().map(|&v| Mask::from_iter([v as usize])).collect(),
            })
            .collect();
        Ok(Self::assemble(ViewKind::Explicit, h.k(), (0..n as u32).collect(), constraints))
    }

    /// View of `h` induced on `vertices` (global ids). Uncoloured hosts are
    /// expanded into explicit `k`-subsets of each block trace.
    pub fn from_blocks(h: &BlockHypergraph, vertices: &[u32]) -> Result<Self> {
        let mut vs = vertices.to_vec();
        vs.sort_unstable();
        vs.dedup();
        if vs.len() > MASK_BITS {
            return Err(Error::Guard(format!("views hold at most {MASK_BITS} vertices, got {}", vs.len())));
        }
        if let Some(&v) = vs.iter().find(|&&v| v as usize >= h.vertex_count()) {
            return Err(Error::VertexOutOfRange {
                id: v as usize,
                n: h.vertex_count(),
            });
        }
        let mut local = vec![u32::MAX; h.vertex_count()];
        for (i, &v) in vs.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let k = h.k();
        let mut blocks: Vec<usize> = vs.iter().flat_map(|&v| h.incident_blocks(v as usize).iter().map(|&y| y as usize)).collect();
        blocks.sort_unstable();
        blocks.dedup();
        let mut constraints = Vec::new();
        for y in blocks {
            let trace: Vec<u32> = h.block(y).iter().copied().filter(|&x| local[x as usize] != u32::MAX).collect();
            if trace.len() < k {
                continue;
            }
            if h.is_colored() {
                let mut classes = vec![Mask::default(); k];
                for &x in &trace {
                    classes[h.color(y, x).unwrap() as usize].insert(local[x as usize] as usize);
                }
                if classes.iter().all(|c| !c.is_empty()) {
                    constraints.push(Constraint { classes });
                }
            } else {
                let mut subsets = Vec::new();
                k_subsets(&trace, k, 0, &mut Vec::new(), &mut subsets);
                constraints.extend(subsets.into_iter().map(|e| Constraint {
                    classes: e.iter().map(|&x| Mask::from_iter([local[x as usize] as usize])).collect(),
                }));
            }
        }
        let kind = if h.is_colored() { ViewKind::Blocks } else { ViewKind::Explicit };
        Ok(Self::assemble(kind, k, vs, constraints))
    }

    fn assemble(kind: ViewKind, k: usize, vertices: Vec<u32>, constraints: Vec<Constraint>) -> Self {
        let mut incidence = vec![Vec::new(); vertices.len()];
        for (j, c) in constraints.iter().enumerate() {
            for (ci, class) in c.classes.iter().enumerate() {
                for v in class.iter() {
                    incidence[v].push((j as u32, ci as u8));
                }
            }
        }
        SearchView {
            kind,
            k,
            vertices,
            constraints,
            incidence,
        }
    }

    pub fn kind(&self) -> ViewKind {
        self.kind
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Global ids in local order.
    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    /// Independence of a set of global ids, all of which must be in the view.
    pub fn is_independent(&self, set: &[u32]) -> Result<bool> {
        let mut m = Mask::default();
        for &v in set {
            let i = self
                .vertices
                .binary_search(&v)
                .map_err(|_| Error::Precondition(format!("vertex {v} is not in the view")))?;
            m.insert(i);
        }
        Ok(self.mask_independent(m))
    }

    fn mask_independent(&self, s: Mask) -> bool {
        self.constraints
            .iter()
            .all(|c| c.classes.iter().any(|class| !class.intersects(&s)))
    }

    fn globals(&self, m: Mask) -> Vec<u32> {
        m.iter().map(|i| self.vertices[i]).collect()
    }

    fn check_guard(&self) -> Result<()> {
        let limit = match self.kind {
            ViewKind::Explicit => EXPLICIT_VIEW_LIMIT,
            ViewKind::Blocks => BLOCK_VIEW_LIMIT,
        };
        if self.vertex_count() > limit {
            return Err(Error::Guard(format!(
                "exact search on {:?} views needs at most {limit} vertices, got {}",
                self.kind,
                self.vertex_count()
            )));
        }
        Ok(())
    }

    /// Seeded randomized greedy; returns the largest set found.
    pub fn greedy(&self, trials: usize, seed: u64) -> Vec<u32> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.vertex_count();
        let mut best = Mask::default();
        let mut order: Vec<usize> = (0..n).collect();
        // first pass: low degree first
        order.sort_by_key(|&v| (self.incidence[v].len(), v));
        for trial in 0..trials.max(1) {
            if trial > 0 {
                order.shuffle(&mut rng);
            }
            let mut hits: Vec<Vec<u16>> = self.constraints.iter().map(|c| vec![0; c.classes.len()]).collect();
            let mut unhit: Vec<usize> = self.constraints.iter().map(|c| c.classes.len()).collect();
            let mut s = Mask::default();
            for &v in &order {
                let blocked = self.incidence[v]
                    .iter()
                    .any(|&(j, c)| hits[j as usize][c as usize] == 0 && unhit[j as usize] == 1);
                if blocked {
                    continue;
                }
                s.insert(v);
                for &(j, c) in &self.incidence[v] {
                    let h = &mut hits[j as usize][c as usize];
                    if *h == 0 {
                        unhit[j as usize] -= 1;
                    }
                    *h += 1;
                }
            }
            if s.len() > best.len() {
                best = s;
            }
        }
        debug_assert!(self.mask_independent(best));
        self.globals(best)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaMode {
    Exact,
    LowerBound,
    UpperBoundVerified,
    BudgetExhausted,
}

impl AlphaMode {
    pub fn as_str(self) -> &'static str {
        match self {
            AlphaMode::Exact => "exact",
            AlphaMode::LowerBound => "lower-bound",
            AlphaMode::UpperBoundVerified => "upper-bound-verified",
            AlphaMode::BudgetExhausted => "budget-exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceResult {
    pub mode: AlphaMode,
    pub value: usize,
    pub witness: Option<Vec<u32>>,
    pub nodes_explored: u64,
}

impl IndependenceResult {
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("mode={}", self.mode.as_str()),
            format!("value={}", self.value),
            format!("nodes_explored={}", self.nodes_explored),
        ];
        if let Some(w) = &self.witness {
            let ids: Vec<String> = w.iter().map(|v| v.to_string()).collect();
            out.push(format!("witness={}", ids.join(",")));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FindOutcome {
    Found(Vec<u32>),
    None,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FindResult {
    pub outcome: FindOutcome,
    pub nodes_explored: u64,
}

/// Maximum independent set by branch and bound. When the budget runs out the
/// best set found so far is returned as a lower bound.
pub fn alpha_exact(view: &SearchView, budget: u64) -> Result<IndependenceResult> {
    view.check_guard()?;
    let start = view.greedy(HEURISTIC_TRIALS, 0);
    let mut search = Search::new(view, budget, Goal::Maximize);
    search.best = Mask::from_iter(start.iter().map(|v| view.vertices.binary_search(v).unwrap()));
    let done = search.run();
    let witness = view.globals(search.best);
    Ok(IndependenceResult {
        mode: if done { AlphaMode::Exact } else { AlphaMode::BudgetExhausted },
        value: witness.len(),
        witness: Some(witness),
        nodes_explored: search.nodes,
    })
}

/// An independent set of size exactly `t`, `None` when the exhaustive search
/// proves `t > alpha`.
pub fn find_independent(view: &SearchView, t: usize, budget: u64, seed: u64) -> Result<FindResult> {
    if t > view.vertex_count() {
        return Err(Error::Precondition(format!(
            "t = {t} exceeds the {} vertices of the view",
            view.vertex_count()
        )));
    }
    if t == 0 {
        return Ok(FindResult {
            outcome: FindOutcome::Found(Vec::new()),
            nodes_explored: 0,
        });
    }
    let quick = view.greedy(HEURISTIC_TRIALS, seed);
    if quick.len() >= t {
        return Ok(FindResult {
            outcome: FindOutcome::Found(quick[..t].to_vec()),
            nodes_explored: 0,
        });
    }
    view.check_guard()?;
    let mut search = Search::new(view, budget, Goal::Reach(t));
    let done = search.run();
    let outcome = if search.best.len() >= t {
        let mut w = view.globals(search.best);
        w.truncate(t);
        FindOutcome::Found(w)
    } else if done {
        FindOutcome::None
    } else {
        FindOutcome::BudgetExhausted
    };
    Ok(FindResult {
        outcome,
        nodes_explored: search.nodes,
    })
}

/// Number of independent `t`-sets by enumeration.
pub fn count_independent_sets(h: &Hypergraph, t: usize) -> Result<u64> {
    let n = h.vertex_count();
    let total = binomial(n as u64, t as u64);
    if total > COUNT_LIMIT {
        return Err(Error::Guard(format!(
            "C({n}, {t}) = {total} exceeds {COUNT_LIMIT}; use container-based bounds instead"
        )));
    }
    let mut by_max: Vec<Vec<&[u32]>> = vec![Vec::new(); n];
    for e in h.edges() {
        by_max[*e.last().unwrap() as usize].push(&e[..e.len() - 1]);
    }
    let mut member = vec![false; n];
    Ok(count_from(&by_max, &mut member, 0, t))
}

fn count_from(by_max: &[Vec<&[u32]>], member: &mut [bool], start: usize, left: usize) -> u64 {
    if left == 0 {
        return 1;
    }
    let n = member.len();
    let mut total = 0;
    for v in start..=n - left {
        if by_max[v].iter().any(|rest| rest.iter().all(|&u| member[u as usize])) {
            continue;
        }
        member[v] = true;
        total += count_from(by_max, member, v + 1, left - 1);
        member[v] = false;
    }
    total
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    Maximize,
    Reach(usize),
}

struct Search<'a> {
    view: &'a SearchView,
    budget: u64,
    goal: Goal,
    nodes: u64,
    best: Mask,
}

impl<'a> Search<'a> {
    fn new(view: &'a SearchView, budget: u64, goal: Goal) -> Self {
        Search {
            view,
            budget,
            goal,
            nodes: 0,
            best: Mask::default(),
        }
    }

    /// True when the tree was exhausted or the goal was reached.
    fn run(&mut self) -> bool {
        let all = Mask::full(self.view.vertex_count());
        self.node(Mask::default(), all).is_some()
    }

    fn target(&self) -> usize {
        match self.goal {
            Goal::Maximize => self.best.len() + 1,
            Goal::Reach(t) => t,
        }
    }

    fn reached(&self) -> bool {
        matches!(self.goal, Goal::Reach(t) if self.best.len() >= t)
    }

    /// `None` on budget exhaustion.
    fn node(&mut self, mut s: Mask, mut p: Mask) -> Option<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        // forced exclusions: a constraint with one un-hit class bars that class
        for c in &self.view.constraints {
            let mut open = None;
            let mut count = 0;
            for class in &c.classes {
                if !class.intersects(&s) {
                    count += 1;
                    open = Some(class);
                }
            }
            if count == 1 {
                p = p.minus(open.unwrap());
            }
        }
        let mut active: Vec<(usize, Mask)> = Vec::new();
        let mut touched = Mask::default();
        let mut degree = [0u16; MASK_BITS];
        for c in &self.view.constraints {
            let mut waste = usize::MAX;
            let mut open = Mask::default();
            for class in &c.classes {
                if class.intersects(&s) {
                    continue;
                }
                let avail = class.and(&p);
                waste = waste.min(avail.len());
                open = open.or(&avail);
            }
            if waste == 0 {
                continue;
            }
            for v in open.iter() {
                degree[v] += 1;
            }
            touched = touched.or(&open);
            active.push((waste, open));
        }
        // vertices in no live constraint can always be added
        let free = p.minus(&touched);
        s = s.or(&free);
        p = p.minus(&free);
        if s.len() > self.best.len() {
            self.best = s;
            if self.reached() {
                return Some(());
            }
        }
        if p.is_empty() {
            return Some(());
        }
        active.sort_by_key(|a| std::cmp::Reverse(a.0));
        let mut used = Mask::default();
        let mut waste = 0;
        for (w, open) in &active {
            if !open.intersects(&used) {
                waste += w;
                used = used.or(open);
            }
        }
        if s.len() + p.len() - waste < self.target() {
            return Some(());
        }
        let v = p.iter().max_by_key(|&v| (degree[v], std::cmp::Reverse(v))).unwrap();
        let mut with = s;
        with.insert(v);
        let mut rest = p;
        rest.remove(v);
        self.node(with, rest)?;
        if self.reached() {
            return Some(());
        }
        self.node(s, rest)
    }
}
