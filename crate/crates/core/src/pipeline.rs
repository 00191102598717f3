//! End-to-end witnesses: choose `q`, build `H*`, sample `W`, prune
//! independent `t`-sets, and emit a certificate that can be re-verified from
//! its seeds alone.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocks::BlockHypergraph;
use crate::error::{Error, Result};
use crate::format_float;
use crate::independence::{find_independent, FindOutcome, SearchView};
use crate::patterns::{embed_search, EmbedOutcome, Pattern, PatternAnalysis};

/// Primes are scanned up to this bound.
pub const PRIME_SCAN_CAP: u64 = 1 << 20;
/// Seed offset separating the verifier's searches from the run's.
const VERIFY_SEED: u64 = 0x7e57;

pub fn sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// `(ln q)^2 q^{1/(k-1)}`.
pub fn t_of(q: u64, k: usize) -> f64 {
    let qf = q as f64;
    qf.ln().powi(2) * qf.powf(1.0 / (k as f64 - 1.0))
}

/// `ceil((ln q)^2 q^{1/(k-1)})`.
pub fn target_t(q: u64, k: usize) -> usize {
    t_of(q, k).ceil() as usize
}

/// The smallest prime `q >= max(3, k)` with `t(q) <= n <= 2 t(q)`.
pub fn choose_q(n: u64, k: usize) -> Result<u64> {
    if k < 3 {
        return Err(Error::Parameter {
            name: "k",
            value: k.to_string(),
            reason: "must be at least 3".into(),
        });
    }
    let nf = n as f64;
    let primes: Vec<u64> = sieve(PRIME_SCAN_CAP).into_iter().filter(|&p| p >= 3 && p >= k as u64).collect();
    if let Some(&q) = primes.iter().find(|&&q| t_of(q, k) <= nf && nf <= 2.0 * t_of(q, k)) {
        return Ok(q);
    }
    let below = primes.iter().rev().find(|&&q| t_of(q, k) <= nf);
    let above = primes.iter().find(|&&q| t_of(q, k) > nf);
    let show = |q: Option<&u64>| match q {
        Some(&q) => format!("q = {q} (t = {:.4})", t_of(q, k)),
        None => "none".into(),
    };
    Err(Error::NoPrime(format!(
        "n = {n}, k = {k}; nearest candidates {} and {}",
        show(below),
        show(above)
    )))
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub n: Option<u64>,
    pub q: Option<u64>,
    pub k: usize,
    pub pattern: Pattern,
    pub c_hat: f64,
    pub construction_seed: u64,
    pub sampling_seed: u64,
    /// Node budget of each independent-set search.
    pub search_budget: u64,
    /// Node budget of the embedding search for inadmissible patterns.
    pub embed_budget: u64,
    pub allow_inadmissible: bool,
}

impl RunConfig {
    pub fn new(q: u64, k: usize, pattern: Pattern) -> Self {
        RunConfig {
            n: None,
            q: Some(q),
            k,
            pattern,
            c_hat: 4.0,
            construction_seed: 0,
            sampling_seed: 1,
            search_budget: 50_000_000,
            embed_budget: 20_000_000,
            allow_inadmissible: false,
        }
    }

    pub fn resolve_q(&self) -> Result<u64> {
        if !(self.c_hat > 0.0 && self.c_hat.is_finite()) {
            return Err(Error::Parameter {
                name: "c_hat",
                value: self.c_hat.to_string(),
                reason: "must be positive".into(),
            });
        }
        match (self.n, self.q) {
            (Some(n), None) => choose_q(n, self.k),
            (None, Some(q)) => Ok(q),
            _ => Err(Error::Precondition("give exactly one of n and q".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaStatus {
    /// An exhaustive search found no independent `t`-set in `W'`.
    Verified,
    /// The last search ran out of budget.
    Heuristic,
    Unknown,
}

impl AlphaStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            AlphaStatus::Verified => "verified",
            AlphaStatus::Heuristic => "heuristic",
            AlphaStatus::Unknown => "unknown",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "verified" => AlphaStatus::Verified,
            "heuristic" => AlphaStatus::Heuristic,
            "unknown" => AlphaStatus::Unknown,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Freeness {
    /// The pattern is slowly growing and non-degenerate.
    Structural,
    /// Embedding search on `H*[W']`.
    Searched(EmbedOutcome),
}

impl Freeness {
    fn encode(&self) -> String {
        match self {
            Freeness::Structural => "structural".into(),
            Freeness::Searched(EmbedOutcome::None) => "searched:none".into(),
            Freeness::Searched(EmbedOutcome::BudgetExhausted) => "searched:budget-exhausted".into(),
            Freeness::Searched(EmbedOutcome::Found(map)) => format!("searched:found:{}", join(map)),
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "structural" => Freeness::Structural,
            "searched:none" => Freeness::Searched(EmbedOutcome::None),
            "searched:budget-exhausted" => Freeness::Searched(EmbedOutcome::BudgetExhausted),
            other => Freeness::Searched(EmbedOutcome::Found(split_ids(other.strip_prefix("searched:found:")?).ok()?)),
        })
    }

    /// Freeness is established, not merely unrefuted.
    pub fn is_proof(&self) -> bool {
        matches!(self, Freeness::Structural | Freeness::Searched(EmbedOutcome::None))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deletion {
    pub set: Vec<u32>,
    pub deleted: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessCertificate {
    pub version: String,
    pub q: u64,
    pub k: usize,
    pub construction_seed: u64,
    pub sampling_seed: u64,
    pub c_hat: f64,
    pub t: usize,
    pub p: f64,
    pub pattern: Pattern,
    pub analysis: PatternAnalysis,
    pub w: Vec<u32>,
    pub deletions: Vec<Deletion>,
    pub w_prime: Vec<u32>,
    pub alpha_status: AlphaStatus,
    pub alpha_nodes: u64,
    pub freeness: Freeness,
    pub warnings: Vec<String>,
}

impl WitnessCertificate {
    /// Freeness is proved and no independent `t`-set survives.
    pub fn is_witness(&self) -> bool {
        self.alpha_status == AlphaStatus::Verified && self.freeness.is_proof()
    }
}

fn join(ids: &[u32]) -> String {
    ids.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn split_ids(s: &str) -> Result<Vec<u32>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.parse::<u32>().map_err(|e| Error::Parse {
                line: 0,
                msg: format!("bad vertex id {x:?}: {e}"),
            })
        })
        .collect()
}

/// Sampling probability `min(1, t / (c_hat q))`.
pub fn sampling_probability(t: usize, c_hat: f64, q: u64) -> f64 {
    (t as f64 / (c_hat * q as f64)).min(1.0)
}

/// Each vertex of `X` independently with probability `p`.
pub fn sample_w(n: usize, p: f64, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n as u32).filter(|_| rng.gen_bool(p)).collect()
}

pub fn run_witness(cfg: &RunConfig) -> Result<WitnessCertificate> {
    let q = cfg.resolve_q()?;
    let k = cfg.k;
    if cfg.pattern.k() != k {
        return Err(Error::Pattern(format!(
            "pattern is {}-uniform but k = {k}",
            cfg.pattern.k()
        )));
    }
    let analysis = cfg.pattern.analyze()?;
    if !analysis.is_admissible && !cfg.allow_inadmissible {
        return Err(Error::Precondition(format!(
            "pattern {} is not slowly growing and non-degenerate; pass allow_inadmissible to search for copies instead",
            cfg.pattern.name()
        )));
    }
    let h = BlockHypergraph::random(q, k, cfg.construction_seed)?;
    let t = target_t(q, k);
    let mut warnings = Vec::new();
    let raw_p = t as f64 / (cfg.c_hat * q as f64);
    if raw_p >= 1.0 {
        warnings.push(format!(
            "t/(c_hat q) = {} >= 1; q is too small for this c_hat and every vertex is kept",
            format_float(raw_p)
        ));
    }
    let p = sampling_probability(t, cfg.c_hat, q);
    let w = sample_w(h.vertex_count(), p, cfg.sampling_seed);

    let mut current = w.clone();
    let mut deletions = Vec::new();
    let mut alpha_nodes = 0;
    let alpha_status = loop {
        if current.len() < t {
            break AlphaStatus::Verified;
        }
        let view = SearchView::from_blocks(&h, &current)?;
        let r = match find_independent(&view, t, cfg.search_budget, deletions.len() as u64) {
            Ok(r) => r,
            Err(Error::Guard(msg)) => {
                warnings.push(format!("exact search skipped: {msg}"));
                break AlphaStatus::Unknown;
            }
            Err(e) => return Err(e),
        };
        alpha_nodes = r.nodes_explored;
        match r.outcome {
            FindOutcome::Found(set) => {
                debug_assert!(h.is_independent(&set)?);
                let deleted = set[0];
                current.retain(|&v| v != deleted);
                deletions.push(Deletion { set, deleted });
            }
            FindOutcome::None => break AlphaStatus::Verified,
            FindOutcome::BudgetExhausted => {
                warnings.push(format!(
                    "independent-set search exhausted {} nodes on |W'| = {}",
                    cfg.search_budget,
                    current.len()
                ));
                break AlphaStatus::Heuristic;
            }
        }
    };

    let freeness = if analysis.is_admissible {
        Freeness::Structural
    } else {
        let mut allowed = vec![false; h.vertex_count()];
        for &v in &current {
            allowed[v as usize] = true;
        }
        let r = embed_search(&cfg.pattern, &h, Some(&allowed), cfg.embed_budget)?;
        if let EmbedOutcome::Found(_) = r.outcome {
            warnings.push(format!("a copy of {} was found; this run is not a witness", cfg.pattern.name()));
        }
        Freeness::Searched(r.outcome)
    };

    Ok(WitnessCertificate {
        version: env!("CARGO_PKG_VERSION").to_string(),
        q,
        k,
        construction_seed: cfg.construction_seed,
        sampling_seed: cfg.sampling_seed,
        c_hat: cfg.c_hat,
        t,
        p,
        pattern: cfg.pattern.clone(),
        analysis,
        w,
        deletions,
        w_prime: current,
        alpha_status,
        alpha_nodes,
        freeness,
        warnings,
    })
}

impl WitnessCertificate {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let a = &self.analysis;
        let _ = writeln!(s, "[run]");
        let _ = writeln!(s, "version={}", self.version);
        let _ = writeln!(s, "q={}", self.q);
        let _ = writeln!(s, "k={}", self.k);
        let _ = writeln!(s, "construction_seed={}", self.construction_seed);
        let _ = writeln!(s, "sampling_seed={}", self.sampling_seed);
        let _ = writeln!(s, "c_hat={}", format_float(self.c_hat));
        let _ = writeln!(s, "t={}", self.t);
        let _ = writeln!(s, "t_rule=ceil(ln(q)^2*q^(1/(k-1)))");
        let _ = writeln!(s, "p={}", format_float(self.p));
        let _ = writeln!(s, "[pattern]");
        let _ = writeln!(s, "name={}", self.pattern.name());
        let _ = writeln!(s, "vertices={}", self.pattern.vertex_count());
        let edges: Vec<String> = self
            .pattern
            .edges()
            .iter()
            .map(|e| e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        let _ = writeln!(s, "edges={}", edges.join(";"));
        let order = a.slow_ordering.as_ref().map_or("none".into(), |o| {
            o.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        });
        let _ = writeln!(s, "slow_ordering={order}");
        let part = a.degenerate_partition.as_ref().map_or("none".into(), |c| {
            c.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        });
        let _ = writeln!(s, "partition={part}");
        let _ = writeln!(s, "admissible={}", a.is_admissible);
        let _ = writeln!(s, "[sample]");
        let _ = writeln!(s, "W={}", join(&self.w));
        let _ = writeln!(s, "[deletions]");
        for d in &self.deletions {
            let _ = writeln!(s, "deletion={}:{}", d.deleted, join(&d.set));
        }
        let _ = writeln!(s, "[result]");
        let _ = writeln!(s, "W_prime={}", join(&self.w_prime));
        let _ = writeln!(s, "alpha_status={}", self.alpha_status.as_str());
        let _ = writeln!(s, "alpha_nodes={}", self.alpha_nodes);
        let _ = writeln!(s, "freeness_status={}", self.freeness.encode());
        let _ = writeln!(
            s,
            "convention=pruning removes every independent t-set; the finite statement is reported as r(F, t+1) > |W'|"
        );
        for w in &self.warnings {
            let _ = writeln!(s, "warning={w}");
        }
        let _ = writeln!(s, "[end]");
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut section = String::new();
        let mut fields: Vec<(String, String, String, usize)> = Vec::new();
        let mut ended = false;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.to_string();
                ended |= name == "end";
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(Error::Parse {
                line: i + 1,
                msg: "expected key=value".into(),
            })?;
            fields.push((section.clone(), key.to_string(), value.to_string(), i + 1));
        }
        if !ended {
            return Err(Error::Parse {
                line: text.lines().count(),
                msg: "missing [end] marker".into(),
            });
        }
        let get = |sec: &str, key: &str| -> Result<&str> {
            fields
                .iter()
                .find(|f| f.0 == sec && f.1 == key)
                .map(|f| f.2.as_str())
                .ok_or(Error::Parse {
                    line: 0,
                    msg: format!("missing {sec}.{key}"),
                })
        };
        fn num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
            s.parse().map_err(|_| Error::Parse {
                line: 0,
                msg: format!("bad value for {what}: {s:?}"),
            })
        }
        let k: usize = num(get("run", "k")?, "k")?;
        let pattern_edges: Vec<Vec<u8>> = get("pattern", "edges")?
            .split(';')
            .map(|e| e.split(' ').map(|x| num::<u8>(x, "pattern edge")).collect())
            .collect::<Result<_>>()?;
        let pattern = Pattern::new(
            k,
            num(get("pattern", "vertices")?, "vertices")?,
            pattern_edges,
            Some(get("pattern", "name")?),
        )?;
        let slow_ordering = match get("pattern", "slow_ordering")? {
            "none" => None,
            s => Some(s.split(',').map(|x| num::<usize>(x, "slow_ordering")).collect::<Result<_>>()?),
        };
        let degenerate_partition = match get("pattern", "partition")? {
            "none" => None,
            s => Some(s.split(',').map(|x| num::<u8>(x, "partition")).collect::<Result<_>>()?),
        };
        let analysis = PatternAnalysis {
            slow_ordering,
            degenerate_partition,
            is_admissible: num(get("pattern", "admissible")?, "admissible")?,
        };
        let deletions = fields
            .iter()
            .filter(|f| f.0 == "deletions" && f.1 == "deletion")
            .map(|f| {
                let (d, set) = f.2.split_once(':').ok_or(Error::Parse {
                    line: f.3,
                    msg: "deletion must be vertex:set".into(),
                })?;
                Ok(Deletion {
                    deleted: num(d, "deleted vertex")?,
                    set: split_ids(set)?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(WitnessCertificate {
            version: get("run", "version")?.to_string(),
            q: num(get("run", "q")?, "q")?,
            k,
            construction_seed: num(get("run", "construction_seed")?, "construction_seed")?,
            sampling_seed: num(get("run", "sampling_seed")?, "sampling_seed")?,
            c_hat: num(get("run", "c_hat")?, "c_hat")?,
            t: num(get("run", "t")?, "t")?,
            p: num(get("run", "p")?, "p")?,
            pattern,
            analysis,
            w: split_ids(get("sample", "W")?)?,
            deletions,
            w_prime: split_ids(get("result", "W_prime")?)?,
            alpha_status: AlphaStatus::parse(get("result", "alpha_status")?).ok_or(Error::Parse {
                line: 0,
                msg: "bad alpha_status".into(),
            })?,
            alpha_nodes: num(get("result", "alpha_nodes")?, "alpha_nodes")?,
            freeness: Freeness::parse(get("result", "freeness_status")?).ok_or(Error::Parse {
                line: 0,
                msg: "bad freeness_status".into(),
            })?,
            warnings: fields
                .iter()
                .filter(|f| f.0 == "result" && f.1 == "warning")
                .map(|f| f.2.clone())
                .collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    /// The re-check of `alpha` ran out of budget.
    pub inconclusive: bool,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| format!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail))
            .collect()
    }
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        passed,
        detail: detail.into(),
    }
}

/// Rebuilds everything from the seeds and re-checks every claim of the
/// certificate with fresh searches. Checks stop at the first failure.
pub fn verify_certificate(cert: &WitnessCertificate, budget: u64, embed_budget: u64) -> Result<VerifyReport> {
    let mut rep = VerifyReport {
        checks: Vec::new(),
        inconclusive: false,
    };
    macro_rules! push {
        ($c:expr) => {{
            let c = $c;
            let ok = c.passed;
            rep.checks.push(c);
            if !ok {
                return Ok(rep);
            }
        }};
    }
    let h = BlockHypergraph::random(cert.q, cert.k, cert.construction_seed)?;
    let t = target_t(cert.q, cert.k);
    push!(check("parameters", t == cert.t, format!("t = {t}, recorded {}", cert.t)));
    let p = sampling_probability(t, cert.c_hat, cert.q);
    push!(check(
        "sampling_probability",
        p == cert.p,
        format!("p = {}, recorded {}", format_float(p), format_float(cert.p))
    ));
    let w = sample_w(h.vertex_count(), p, cert.sampling_seed);
    let diverge = w.iter().zip(&cert.w).position(|(a, b)| a != b);
    push!(check(
        "sample",
        w == cert.w,
        match diverge {
            _ if w == cert.w => format!("|W| = {}", w.len()),
            Some(i) => format!("W differs at position {i}"),
            None => format!("|W| = {}, recorded {}", w.len(), cert.w.len()),
        }
    ));

    let mut current = w;
    for (i, d) in cert.deletions.iter().enumerate() {
        let mut sorted = d.set.clone();
        sorted.sort_unstable();
        sorted.dedup();
        let inside = sorted.iter().all(|v| current.binary_search(v).is_ok());
        let ok = sorted.len() == t
            && sorted == d.set
            && inside
            && d.deleted == d.set[0]
            && h.is_independent(&d.set)?;
        push!(check(
            "deletion",
            ok,
            if ok {
                format!("record {i} valid")
            } else {
                format!("record {i} is not an independent {t}-set of the current set with its smallest vertex deleted")
            }
        ));
        current.retain(|&v| v != d.deleted);
    }
    push!(check(
        "final_set",
        current == cert.w_prime,
        if current == cert.w_prime {
            format!("|W'| = {}", current.len())
        } else {
            "replaying the deletions does not give W'".to_string()
        }
    ));

    let analysis = cert.pattern.analyze()?;
    push!(check(
        "pattern",
        analysis == cert.analysis,
        format!("admissible = {}", analysis.is_admissible)
    ));
    let freeness_ok = match &cert.freeness {
        Freeness::Structural => analysis.is_admissible,
        Freeness::Searched(_) => true,
    };
    push!(check("freeness_claim", freeness_ok, cert.freeness.encode()));
    let mut allowed = vec![false; h.vertex_count()];
    for &v in &current {
        allowed[v as usize] = true;
    }
    let embed = embed_search(&cert.pattern, &h, Some(&allowed), embed_budget)?;
    let embed_ok = match (&cert.freeness, &embed.outcome) {
        (Freeness::Searched(EmbedOutcome::Found(map)), _) => {
            let ok = map.iter().all(|&v| allowed[v as usize])
                && cert.pattern.edges().iter().all(|e| {
                    let img: Vec<u32> = e.iter().map(|&x| map[x as usize]).collect();
                    h.is_edge(&img).unwrap_or(false)
                });
            ok
        }
        (Freeness::Searched(EmbedOutcome::None), EmbedOutcome::None) => true,
        (Freeness::Searched(EmbedOutcome::None), _) => false,
        (_, EmbedOutcome::Found(_)) => false,
        _ => true,
    };
    push!(check(
        "embedding",
        embed_ok,
        format!("{:?} after {} nodes", embed.outcome, embed.nodes)
    ));

    if current.len() >= t {
        let view = SearchView::from_blocks(&h, &current)?;
        match cert.alpha_status {
            AlphaStatus::Verified => {
                let r = find_independent(&view, t, budget, VERIFY_SEED)?;
                let (ok, detail) = match r.outcome {
                    FindOutcome::None => (true, format!("no independent {t}-set ({} nodes)", r.nodes_explored)),
                    FindOutcome::Found(s) => (false, format!("independent {t}-set {}", join(&s))),
                    FindOutcome::BudgetExhausted => {
                        rep.inconclusive = true;
                        (false, format!("re-check exhausted {budget} nodes"))
                    }
                };
                push!(check("alpha", ok, detail));
            }
            AlphaStatus::Heuristic | AlphaStatus::Unknown => {
                let s = view.greedy(crate::independence::HEURISTIC_TRIALS, VERIFY_SEED);
                push!(check(
                    "alpha",
                    s.len() < t,
                    format!("{} claim; greedy found {} independent vertices", cert.alpha_status.as_str(), s.len())
                ));
            }
        }
    } else {
        push!(check("alpha", true, format!("|W'| < t = {t}")));
    }
    Ok(rep)
}

/// The finite statement implied by a verified witness.
pub fn r_lower_report(cert: &WitnessCertificate, verification: &VerifyReport) -> Result<Vec<String>> {
    if !verification.passed() {
        return Err(Error::Precondition("certificate did not verify".into()));
    }
    if !cert.is_witness() {
        return Err(Error::Precondition(format!(
            "witness invalid: alpha_status = {}, freeness_status = {}",
            cert.alpha_status.as_str(),
            cert.freeness.encode()
        )));
    }
    let n = cert.t as f64;
    let k = cert.k as i32;
    let shape = n.powi(k) / n.ln().powi(2 * k - 2);
    Ok(vec![
        format!("r({}, {}) > {}", cert.pattern.name(), cert.t + 1, cert.w_prime.len()),
        format!(
            "H*_{{{},{}}}[W'] has {} vertices, contains no {} and no independent {}-set",
            cert.q,
            cert.k,
            cert.w_prime.len(),
            cert.pattern.name(),
            cert.t
        ),
        format!(
            "asymptotic shape n^k/(ln n)^(2k-2) at n = {}: {} (asymptotic shape, constants not certified)",
            cert.t,
            format_float(shape)
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{make_family, Family};

    #[test]
    fn sieve_and_t() {
        assert_eq!(sieve(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!((t_of(13, 3) - 13f64.ln().powi(2) * 13f64.sqrt()).abs() < 1e-12);
        assert!((t_of(13, 3) - 23.7208).abs() < 1e-3);
        assert_eq!(target_t(13, 3), 24);
    }

    #[test]
    fn choose_q_examples() {
        // t(11) = 19.07 <= 30 <= 38.1 and 11 is the smallest such prime
        assert_eq!(choose_q(30, 3).unwrap(), 11);
        assert!(t_of(13, 3) <= 30.0 && 30.0 <= 2.0 * t_of(13, 3));
        // t(5) = 5.79 <= 10 <= 11.58
        assert_eq!(choose_q(10, 3).unwrap(), 5);
        assert!(matches!(choose_q(2, 3), Err(Error::NoPrime(_))));
        let mut last = 0;
        for n in 5..400 {
            if let Ok(q) = choose_q(n, 3) {
                assert!(q >= last);
                assert!(t_of(q, 3) <= n as f64 && n as f64 <= 2.0 * t_of(q, 3));
                last = q;
            }
        }
    }

    #[test]
    fn sample_mean_is_binomial() {
        let p = sampling_probability(24, 4.0, 13);
        let sizes: Vec<f64> = (0..200).map(|s| sample_w(169, p, s).len() as f64).collect();
        let mean = sizes.iter().sum::<f64>() / 200.0;
        let sd = (169.0 * p * (1.0 - p) / 200.0).sqrt();
        assert!((mean - 169.0 * p).abs() < 3.0 * sd);
        assert_eq!(sample_w(10, 1.0, 3).len(), 10);
    }

    fn small_run() -> WitnessCertificate {
        let mut cfg = RunConfig::new(7, 3, make_family(Family::F5, 3).unwrap());
        cfg.c_hat = 1.0;
        run_witness(&cfg).unwrap()
    }

    #[test]
    fn small_round_trip() {
        let cert = small_run();
        assert_eq!(cert.freeness, Freeness::Structural);
        let text = cert.to_text();
        let parsed = WitnessCertificate::parse(&text).unwrap();
        assert_eq!(parsed, cert);
        assert_eq!(parsed.to_text(), text);
        let rep = verify_certificate(&parsed, 10_000_000, 1_000_000).unwrap();
        assert!(rep.passed(), "{:?}", rep.lines());
        assert_eq!(small_run().to_text(), text);
    }

    #[test]
    fn small_mutations_are_detected() {
        let cert = small_run();
        assert!(!cert.deletions.is_empty());
        let mut moved = cert.clone();
        let x = (0..49).find(|v| !moved.w_prime.contains(v)).unwrap();
        moved.w_prime[0] = x;
        moved.w_prime.sort_unstable();
        assert!(!verify_certificate(&moved, 10_000_000, 1_000_000).unwrap().passed());

        let mut planted = cert.clone();
        let last = planted.deletions.pop().unwrap();
        planted.w_prime.push(last.deleted);
        planted.w_prime.sort_unstable();
        let rep = verify_certificate(&planted, 10_000_000, 1_000_000).unwrap();
        assert_eq!(rep.first_failure().unwrap().name, "alpha");

        let mut altered = cert.clone();
        let d = &mut altered.deletions[0];
        let outside = (0..49).find(|v| !d.set.contains(v) && cert.w.contains(v)).unwrap();
        d.set[1] = outside;
        d.set.sort_unstable();
        d.deleted = d.set[0];
        let rep = verify_certificate(&altered, 10_000_000, 1_000_000).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn report_guards() {
        let cert = small_run();
        let rep = verify_certificate(&cert, 10_000_000, 1_000_000).unwrap();
        let lines = r_lower_report(&cert, &rep).unwrap();
        assert_eq!(lines[0], format!("r(F5, {}) > {}", cert.t + 1, cert.w_prime.len()));
        let mut weak = cert.clone();
        weak.alpha_status = AlphaStatus::Unknown;
        assert!(r_lower_report(&weak, &rep).is_err());
    }

    #[test]
    fn inadmissible_patterns_are_searched() {
        let tp3 = make_family(Family::Tp3, 3).unwrap();
        let mut cfg = RunConfig::new(7, 3, tp3);
        cfg.c_hat = 1.0;
        assert!(run_witness(&cfg).is_err());
        cfg.allow_inadmissible = true;
        let cert = run_witness(&cfg).unwrap();
        assert!(matches!(cert.freeness, Freeness::Searched(_)));
        let rep = verify_certificate(&cert, 10_000_000, 1_000_000).unwrap();
        assert!(rep.passed(), "{:?}", rep.lines());
    }

    #[test]
    fn config_validation() {
        let f5 = make_family(Family::F5, 3).unwrap();
        let mut cfg = RunConfig::new(13, 3, f5);
        cfg.n = Some(30);
        assert!(run_witness(&cfg).is_err());
        cfg.q = None;
        assert_eq!(cfg.resolve_q().unwrap(), 11);
        cfg.c_hat = 0.0;
        assert!(cfg.resolve_q().is_err());
        assert!(WitnessCertificate::parse("[run]\nq=3\n").is_err());
    }
}
