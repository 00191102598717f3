use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hyperramsey::blocks::BlockHypergraph;
use hyperramsey::containers;
use hyperramsey::independence::{alpha_exact, find_independent, AlphaMode, FindOutcome, SearchView};
use hyperramsey::patterns::{make_family, Family, Pattern};
use hyperramsey::pipeline::{self, RunConfig, WitnessCertificate};
use hyperramsey::saturation;
use hyperramsey::spectral;
use hyperramsey::{format_float, Error, Hypergraph, PolarityGraph};

#[derive(Parser)]
#[command(name = "hyperramsey", version, about = "Finite-field block hypergraphs and Ramsey witnesses")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Implicit,
    Edges,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build H_{q,k} (no seed) or H*_{q,k} and write it out.
    Construct {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value = "implicit")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check degrees and codegrees of the polarity graph.
    VerifyGamma {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: usize,
        /// Sample pairs of Y instead of checking all of them.
        #[arg(long)]
        sampled: bool,
    },
    /// Cube identity, eigenvalues and mixing checks.
    Spectral {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        m: usize,
        /// Check this many random (x, y) walk counts instead of the dense cube.
        #[arg(long)]
        walk_samples: Option<usize>,
        /// Compare with a floating-point eigensolve.
        #[arg(long)]
        eigen: bool,
        /// Number of random (S, T) mixing checks.
        #[arg(long, default_value_t = 0)]
        mixing: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Slow ordering and k-partiteness of a pattern.
    AnalyzePattern {
        /// Named family: F5, TP3, LC3, K4minus, fan, tk.
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Pattern file with header `k v t`.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Independence number or a fixed-size independent set.
    Alpha {
        /// Explicit edge-list file.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated vertex ids of the induced view.
        #[arg(long)]
        vertices: Option<String>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Typical blocks, codegrees and expectation of the rainbow sub-hypergraph.
    Supersat {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Size of a seeded random S (default: all of X).
        #[arg(long)]
        sample_s: Option<usize>,
        /// File of vertex ids forming S.
        #[arg(long)]
        s_file: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        s_seed: u64,
        #[arg(long, default_value_t = 0.5)]
        delta: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Allow |S| < 4kq.
        #[arg(long)]
        force: bool,
    },
    /// Container families by the fingerprint procedure.
    Containers {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `auto` (measured) or a value in (0, 1).
        #[arg(long, default_value = "auto")]
        eps: String,
        /// Sampled maximal independent sets when the family is too large to list.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Final container size (default 4kq).
        #[arg(long)]
        cap: Option<usize>,
        /// Node budget for listing the family explicitly before sampling.
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        /// Write one container per line.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Sample, prune and certify a witness.
    Witness {
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value = "F5")]
        pattern: String,
        #[arg(long)]
        pattern_file: Option<PathBuf>,
        #[arg(long, default_value_t = 4.0)]
        c_hat: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        sampling_seed: u64,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 20_000_000)]
        embed_budget: u64,
        #[arg(long)]
        allow_inadmissible: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate from its seeds.
    Verify {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 20_000_000)]
        embed_budget: u64,
    },
    /// Finite Ramsey statement of a verified certificate.
    Report {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 20_000_000)]
        embed_budget: u64,
    },
}

const PASS: u8 = 0;
const FAIL: u8 = 1;
const USAGE: u8 = 2;
const BUDGET: u8 = 3;

type CmdResult = Result<u8, Error>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Budget(_) => BUDGET,
                _ => USAGE,
            })
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict(ok: bool) -> u8 {
    if ok {
        PASS
    } else {
        FAIL
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

fn parse_ids(s: &str) -> Result<Vec<u32>, Error> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|x| !x.is_empty())
        .map(|x| x.parse().map_err(|_| usage(format!("bad vertex id {x:?}"))))
        .collect()
}

fn load_pattern(name: &str, file: Option<&Path>, k: usize) -> Result<Pattern, Error> {
    match file {
        Some(p) => {
            let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("pattern");
            Pattern::parse(&fs::read_to_string(p)?, Some(stem))
        }
        None => make_family(name.parse::<Family>()?, k),
    }
}

fn run(cmd: Cmd) -> CmdResult {
    match cmd {
        Cmd::Construct { q, k, seed, format, out } => {
            let pure = BlockHypergraph::build(q, k)?;
            let h = match seed {
                Some(s) => pure.randomize(s),
                None => pure,
            };
            let text = match format {
                Format::Implicit => h.to_implicit_string(),
                Format::Edges => h.edge_file_string(None),
            };
            emit(out.as_deref(), &text)?;
            Ok(PASS)
        }
        Cmd::VerifyGamma { q, m, sampled } => {
            let g = PolarityGraph::build(q, m)?;
            let rep = g.verify_properties(!sampled);
            for l in rep.lines() {
                println!("{l}");
            }
            Ok(verdict(rep.passed()))
        }
        Cmd::Spectral { q, m, walk_samples, eigen, mixing, seed } => {
            let g = PolarityGraph::build(q, m)?;
            let rep = match walk_samples {
                Some(n) => spectral::verify_walk_counts(&g, n, seed),
                None => spectral::verify_cube_identity(&g)?,
            };
            println!("mode={:?}", rep.mode);
            println!("entries_checked={}", rep.entries_checked);
            println!("max_abs_deviation={}", rep.max_abs_deviation);
            let mut ok = rep.passed();
            if let Ok(cert) = spectral::second_eigenvalue(&g, &rep) {
                println!("lambda1={}", format_float(cert.lambda1));
                println!("lambda2={}", format_float(cert.lambda2));
                if eigen {
                    let ev = spectral::eigenvalues_dense(&g)?;
                    let diff = (ev[1] - cert.lambda2).abs();
                    println!("eigensolve_lambda2={}", format_float(ev[1]));
                    println!("eigensolve_difference={}", format_float(diff));
                    ok &= diff <= 1e-6;
                }
            }
            if mixing > 0 {
                let trials = spectral::mixing_trials(&g, mixing, seed);
                let bad = trials.iter().filter(|r| !r.passed).count();
                println!("mixing_trials={mixing}");
                println!("mixing_violations={bad}");
                ok &= bad == 0;
            }
            println!("passed={ok}");
            Ok(verdict(ok))
        }
        Cmd::AnalyzePattern { pattern, k, file } => {
            let name = pattern.as_deref().unwrap_or("F5");
            if pattern.is_none() && file.is_none() {
                return Err(usage("give --pattern or --file"));
            }
            let f = load_pattern(name, file.as_deref(), k)?;
            let a = f.analyze()?;
            for l in a.lines(&f) {
                println!("{l}");
            }
            Ok(PASS)
        }
        Cmd::Alpha { input, q, k, seed, vertices, t, budget } => {
            let (view, check): (SearchView, Box<dyn Fn(&[u32]) -> bool>) = match (input, q, k) {
                (Some(path), None, None) => {
                    let h = Hypergraph::parse(&fs::read_to_string(path)?)?;
                    let view = match &vertices {
                        Some(v) => SearchView::from_hypergraph(&h.induced(&parse_ids(v)?))?,
                        None => SearchView::from_hypergraph(&h)?,
                    };
                    (view, Box::new(move |s: &[u32]| h.is_independent(s)))
                }
                (None, Some(q), Some(k)) => {
                    let pure = BlockHypergraph::build(q, k)?;
                    let h = match seed {
                        Some(s) => pure.randomize(s),
                        None => pure,
                    };
                    let set = match &vertices {
                        Some(v) => parse_ids(v)?,
                        None => (0..h.vertex_count() as u32).collect(),
                    };
                    let view = SearchView::from_blocks(&h, &set)?;
                    (view, Box::new(move |s: &[u32]| h.is_independent(s).unwrap_or(false)))
                }
                _ => return Err(usage("give either --input or both --q and --k")),
            };
            println!("vertices={}", view.vertex_count());
            match t {
                Some(t) => {
                    let r = find_independent(&view, t, budget, 0)?;
                    println!("nodes_explored={}", r.nodes_explored);
                    match r.outcome {
                        FindOutcome::Found(s) => {
                            println!("outcome=found");
                            println!("set={}", s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
                            Ok(verdict(check(&s)))
                        }
                        FindOutcome::None => {
                            println!("outcome=none");
                            Ok(PASS)
                        }
                        FindOutcome::BudgetExhausted => {
                            println!("outcome=budget-exhausted");
                            Ok(BUDGET)
                        }
                    }
                }
                None => {
                    let r = alpha_exact(&view, budget)?;
                    for l in r.lines() {
                        println!("{l}");
                    }
                    if !r.witness.as_deref().is_none_or(|w| check(w)) {
                        return Ok(FAIL);
                    }
                    Ok(if r.mode == AlphaMode::BudgetExhausted { BUDGET } else { PASS })
                }
            }
        }
        Cmd::Supersat { q, k, seed, sample_s, s_file, s_seed, delta, trials, force } => {
            let h = BlockHypergraph::random(q, k, seed)?;
            let s = match (sample_s, s_file) {
                (Some(_), Some(_)) => return Err(usage("give at most one of --sample-s and --s-file")),
                (Some(n), None) => saturation::sample_set(&h, n, s_seed)?,
                (None, Some(p)) => parse_ids(&fs::read_to_string(p)?)?,
                (None, None) => (0..h.vertex_count() as u32).collect(),
            };
            let sub = saturation::build_sub_h(&h, &s, delta, force)?;
            let rep = sub.report()?;
            for l in rep.lines() {
                println!("{l}");
            }
            let pure = BlockHypergraph::build(q, k)?;
            let exp = saturation::estimate_expectation(&pure, &s, delta, trials, seed)?;
            for l in exp.lines() {
                println!("{l}");
            }
            let tr = saturation::martingale_trace(&sub);
            println!("martingale_steps={}", tr.order.len());
            println!("martingale_max_step={}", format_float(tr.max_step));
            println!("martingale_step_bound={}", format_float(tr.step_bound));
            println!("martingale_step_cap={}", tr.step_cap);
            let rc = saturation::recolor_experiment(&sub, 1000, seed)?;
            println!("recolor_samples={}", rc.samples);
            println!("recolor_max_change={}", rc.max_change);
            Ok(verdict(rep.passed() && tr.passed() && rc.passed()))
        }
        Cmd::Containers { q, k, seed, eps, samples, cap, budget, emit: out } => {
            let h = BlockHypergraph::random(q, k, seed)?;
            let explicit = h.to_hypergraph();
            let n = h.vertex_count();
            let cap = cap.unwrap_or(4 * k * q as usize);
            let b = (q as f64).powf(1.0 / (k as f64 - 1.0));
            let l = n as f64 / (6.0 * (16.0 * k as f64).powi(2 * k as i32));
            println!("B={}", format_float(b));
            println!("L={}", format_float(l));
            println!("cap={cap}");
            for d in containers::degree_condition(&explicit, &(0..n as u32).collect::<Vec<_>>(), b, l)? {
                println!("degree_{}={} allowed={} holds={}", d.i, d.delta, format_float(d.allowed), d.holds());
            }
            let (measured, depth, leaves, ok) = match containers::iterate_containers(&explicit, b, l, cap, budget) {
                Ok(fam) => {
                    println!("mode=explicit");
                    for line in fam.lines() {
                        println!("{line}");
                    }
                    if let Some(p) = &out {
                        fs::write(p, fam.to_file_string())?;
                    }
                    (fam.eps_hat, fam.depth, fam.containers.len(), true)
                }
                Err(Error::Budget(_)) => {
                    println!("mode=sampled");
                    let rep = containers::sampled_coverage(&explicit, b, cap, samples, seed)?;
                    for line in rep.lines() {
                        println!("{line}");
                    }
                    if let Some(p) = &out {
                        let text: String = rep
                            .containers
                            .iter()
                            .map(|c| c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ") + "\n")
                            .collect();
                        fs::write(p, text)?;
                    }
                    (rep.eps_hat, rep.max_depth, rep.samples, rep.passed())
                }
                Err(e) => return Err(e),
            };
            let eps_used = match eps.as_str() {
                "auto" => measured,
                v => v.parse::<f64>().map_err(|_| usage(format!("bad --eps {v:?}")))?,
            };
            if eps_used > 0.0 && eps_used < 1.0 {
                let th = containers::level_thresholds(n as f64, cap as f64, eps_used)?;
                let m = th.len() - 1;
                println!("eps_used={}", format_float(eps_used));
                println!(
                    "thresholds={}",
                    th.iter().map(|x| format_float(*x)).collect::<Vec<_>>().join(",")
                );
                println!("m={m}");
                let ln_shape = m as f64 * (q as f64).ln() * b / eps_used;
                println!("ln_count_shape={}", format_float(ln_shape));
                if m <= 1 {
                    println!("warning=iteration is degenerate (m <= 1); 4kq is close to q^2 at this q");
                }
            } else {
                println!("warning=no shrinkage measured; thresholds skipped");
            }
            println!("observed_depth={depth}");
            println!("observed_containers={leaves}");
            Ok(verdict(ok))
        }
        Cmd::Witness {
            q,
            n,
            k,
            pattern,
            pattern_file,
            c_hat,
            seed,
            sampling_seed,
            budget,
            embed_budget,
            allow_inadmissible,
            out,
        } => {
            let f = load_pattern(&pattern, pattern_file.as_deref(), k)?;
            let cfg = RunConfig {
                n,
                q,
                k,
                pattern: f,
                c_hat,
                construction_seed: seed,
                sampling_seed,
                search_budget: budget,
                embed_budget,
                allow_inadmissible,
            };
            let cert = pipeline::run_witness(&cfg)?;
            for w in &cert.warnings {
                eprintln!("warning: {w}");
            }
            emit(out.as_deref(), &cert.to_text())?;
            Ok(match cert.alpha_status {
                pipeline::AlphaStatus::Verified => verdict(cert.is_witness()),
                _ => BUDGET,
            })
        }
        Cmd::Verify { cert, budget, embed_budget } => {
            let c = WitnessCertificate::parse(&fs::read_to_string(cert)?)?;
            let rep = pipeline::verify_certificate(&c, budget, embed_budget)?;
            for l in rep.lines() {
                println!("{l}");
            }
            Ok(if rep.inconclusive { BUDGET } else { verdict(rep.passed()) })
        }
        Cmd::Report { cert, budget, embed_budget } => {
            let c = WitnessCertificate::parse(&fs::read_to_string(cert)?)?;
            let rep = pipeline::verify_certificate(&c, budget, embed_budget)?;
            if !rep.passed() {
                for l in rep.lines() {
                    println!("{l}");
                }
                return Ok(if rep.inconclusive { BUDGET } else { FAIL });
            }
            match pipeline::r_lower_report(&c, &rep) {
                Ok(lines) => {
                    for l in lines {
                        println!("{l}");
                    }
                    Ok(PASS)
                }
                Err(e) => {
                    println!("refused: {e}");
                    Ok(FAIL)
                }
            }
        }
    }
}
