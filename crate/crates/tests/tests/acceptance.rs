//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! The designed-vs-random error-rate comparison takes hours and only runs with
//! `--ignored` or `--include-ignored`:
//!
//! ```text
//! cargo test -p qcforge-cli --test acceptance -- --include-ignored
//! ```
//!
//! Numbers given as arguments select criteria, e.g. `-- 5 --include-ignored`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qcforge::graph::{example_graph, load_alist, peg_construct};
use qcforge::lifting::walk_shift;
use qcforge::sim::{monte_carlo, wilson_interval, SimConfig};
use qcforge::swap::{greedy_optimize, GreedyConfig};
use qcforge::walks::{ace_spectrum, ProblematicSearch};
use qcforge::{expand, seed, AceSpectrum, ShiftAssignment, TannerGraph, Walk};

/// Walk-search cap used for every greedy run below.
const WALK_BUDGET: u64 = 20_000_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return ExitCode::SUCCESS;
    }
    let long = args.iter().any(|a| a == "--ignored" || a == "--include-ignored");
    let only: Vec<u32> = args.iter().filter_map(|a| a.parse().ok()).collect();
    let wanted = |n: u32| only.is_empty() || only.contains(&n);

    let mut failed = 0;
    let mut report = |n: u32, name: &str, limit: Option<Duration>, f: &dyn Fn() -> Outcome| {
        if !wanted(n) {
            return;
        }
        let t = Instant::now();
        let mut o = f();
        let took = t.elapsed();
        if let Some(limit) = limit {
            if took > limit {
                o.pass = false;
                o.detail.push_str(&format!("; over the {}s budget", limit.as_secs()));
            }
        }
        if !o.pass {
            failed += 1;
        }
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n} ({name}): {status} [{:.1}s] {}", took.as_secs_f64(), o.detail);
    };

    report(1, "toy lift design", Some(Duration::from_secs(1)), &criterion_1);
    report(2, "lift structure", Some(Duration::from_secs(300)), &criterion_2);
    report(3, "swap soundness", None, &criterion_3);
    report(4, "greedy spectrum trend", Some(Duration::from_secs(1800)), &criterion_4);
    if long {
        report(5, "designed vs random FER", None, &criterion_5);
    } else if wanted(5) {
        println!("criterion 5 (designed vs random FER): SKIP opt-in, run with -- --include-ignored");
    }
    report(6, "decoder sanity", Some(Duration::from_secs(600)), &criterion_6);

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    }
}

fn criterion_1() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let base = dir.path().join("base.json");
    std::fs::write(&base, example_graph().to_json()).unwrap();
    let out = dir.path().join("out");
    let status = qcforge_cli::run([
        "qcforge", "design", "--base", base.to_str().unwrap(), "--N", "3", "--dmax", "3",
        "--target", "inf,inf,inf", "--seed", "0", "--out-dir", out.to_str().unwrap(),
    ]);
    if status != 0 {
        return outcome(false, format!("design exited with {status}"));
    }
    let lifted = load_alist(&std::fs::read_to_string(out.join("expanded.alist")).unwrap()).unwrap();
    let short = common::brute_cycles(&lifted, 6);
    let g = example_graph();
    let hand = ShiftAssignment::new(3, vec![1, 0, 0, 0, 1, 0, 0]).unwrap();
    let shifts: Vec<u64> = ["e2+ e4- e3+ e1-", "e5+ e7- e6+ e4-", "e2+ e6- e7+ e5- e3+ e1-"]
        .iter()
        .map(|w| walk_shift(&g, &Walk::parse(&g, w).unwrap(), &hand).unwrap())
        .collect();
    let pass = lifted.n_var() == 9 && short.is_empty() && shifts == [2, 1, 1];
    outcome(pass, format!("{} cycles of length <= 6 in the 9-bit lift; hand walk shifts {shifts:?}", short.len()))
}

fn criterion_2() -> Outcome {
    let cases = 256;
    for i in 0..cases {
        let mut r = common::rng(seed::derive(2, &[i]));
        let g = common::random_base(&mut r, 8, 8);
        let n = 2 + i % 5;
        let a = common::random_assignment(&mut r, &g, n);
        if let Err(msg) = common::lemma_checks(&g, &a, 12) {
            return outcome(false, format!("instance {i} (N = {n}): {msg}"));
        }
    }
    outcome(true, format!("{cases} random bases, N in 2..=6, cycles up to length 12"))
}

fn criterion_3() -> Outcome {
    let cases = 300;
    let mut ok = 0;
    for i in 0..cases {
        match common::swap_soundness(seed::derive(3, &[i])) {
            Ok(true) => ok += 1,
            Ok(false) => {}
            Err(msg) => return outcome(false, msg),
        }
    }
    outcome(ok >= 100, format!("{ok} of {cases} instances succeeded, all rechecked"))
}

fn greedy(base: &TannerGraph, n: u64, d_max: usize, s: u64) -> AceSpectrum {
    let mut cfg = GreedyConfig::new(n, d_max, 4, s);
    cfg.walks = ProblematicSearch {
        two_cycle_only: false,
        budget: Some(WALK_BUDGET),
    };
    greedy_optimize(base, &cfg).unwrap().achieved
}

/// Component-wise maximum of several spectra of equal depth.
fn envelope(runs: &[AceSpectrum]) -> AceSpectrum {
    let mut best = runs[0].clone();
    for r in &runs[1..] {
        for len in (2..=best.max_len()).step_by(2) {
            best.set_len(len, best.at_len(len).max(r.at_len(len)));
        }
    }
    best
}

/// `"N a->b: x -> y"` for each consecutive pair where the spectrum drops somewhere.
fn drops(rows: &[(u64, AceSpectrum)]) -> Vec<String> {
    rows.windows(2)
        .filter(|w| !w[1].1.dominates(&w[0].1))
        .map(|w| format!("N {}->{}: {} -> {}", w[0].0, w[1].0, w[0].1, w[1].1))
        .collect()
}

fn criterion_4() -> Outcome {
    let base = peg_construct(30, 15, &common::irregular_30_degrees(), 1).unwrap();
    let d_max = 5;
    let mut lex = Vec::new();
    let mut env = Vec::new();
    for n in [5u64, 10, 15, 20, 25, 30] {
        let runs: Vec<AceSpectrum> = (0..3).map(|s| greedy(&base, n, d_max, s)).collect();
        eprintln!("  N = {n:2}: {}", runs.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" | "));
        lex.push((n, runs.iter().max().unwrap().clone()));
        env.push((n, envelope(&runs)));
    }
    let eta4 = env.iter().filter(|(n, _)| *n >= 20).all(|(_, s)| s.at_len(4).is_inf());
    let show = |rows: &[(u64, AceSpectrum)]| rows.iter().map(|(n, s)| format!("{n}:{s}")).collect::<Vec<_>>().join(" ");
    let verdict = |d: &[String]| if d.is_empty() { "yes".to_string() } else { format!("no ({})", d.join(", ")) };
    let (env_drops, lex_drops) = (drops(&env), drops(&lex));
    let detail = format!(
        "base {}; eta4 inf for N >= 20: {}; component-wise best of 3 {} non-decreasing: {}; best single code {} non-decreasing: {}",
        ace_spectrum(&base, d_max).unwrap(),
        if eta4 { "yes" } else { "no" },
        show(&env),
        verdict(&env_drops),
        show(&lex),
        verdict(&lex_drops),
    );
    outcome(eta4 && env_drops.is_empty(), detail)
}

fn criterion_5() -> Outcome {
    let base = peg_construct(30, 15, &common::irregular_30_degrees(), 1).unwrap();
    let n = 33;
    let mut cfg = GreedyConfig::new(n, 5, 4, 0);
    cfg.walks = ProblematicSearch {
        two_cycle_only: false,
        budget: Some(WALK_BUDGET),
    };
    let design = greedy_optimize(&base, &cfg).unwrap();
    eprintln!("  designed spectrum {}", design.achieved);
    let designed = expand(&base, &ShiftAssignment::from_file(&design.shifts, &base).unwrap()).unwrap();
    let randoms: Vec<TannerGraph> = (0..5)
        .map(|i| {
            let a = common::random_assignment(&mut common::rng(500 + i), &base, n);
            expand(&base, &a).unwrap().expanded().clone()
        })
        .collect();
    let frame_cap: u64 = std::env::var("QCFORGE_LONG_MAX_FRAMES").ok().and_then(|v| v.parse().ok()).unwrap_or(200_000_000);
    let sim = |g: &TannerGraph, ebn0: f64, frames: u64, errors: u64, s: u64| {
        let cfg = SimConfig {
            ebn0_db: vec![ebn0],
            max_frames: frames,
            max_frame_errors: errors,
            max_iterations: 100,
            seed: s,
            ..SimConfig::default()
        };
        monte_carlo(g, &cfg).unwrap().points[0]
    };

    // lowest grid point where the median random-lift FER is in [1e-4, 1e-3]
    let mut chosen = None;
    for step in 0..=16 {
        let ebn0 = 1.0 + 0.25 * step as f64;
        let mut fers: Vec<f64> = randoms.iter().enumerate().map(|(i, g)| sim(g, ebn0, 400_000, 60, 50 + i as u64).fer()).collect();
        fers.sort_by(f64::total_cmp);
        eprintln!("  scan {ebn0:.2} dB: random median FER {:.2e}", fers[2]);
        if (1e-4..=1e-3).contains(&fers[2]) {
            chosen = Some(ebn0);
            break;
        }
        if fers[2] < 1e-4 {
            break;
        }
    }
    let Some(ebn0) = chosen else {
        return outcome(false, "no grid point puts the random-lift median FER in [1e-4, 1e-3]");
    };

    let d = sim(designed.expanded(), ebn0, frame_cap, 300, 7);
    let mut r: Vec<_> = randoms.iter().enumerate().map(|(i, g)| sim(g, ebn0, frame_cap, 300, 70 + i as u64)).collect();
    r.sort_by(|a, b| a.fer().total_cmp(&b.fer()));
    let median = r[2];
    let (_, d_hi) = wilson_interval(d.frame_errors, d.frames, 1.96);
    let (m_lo, _) = wilson_interval(median.frame_errors, median.frames, 1.96);
    let enough = d.frame_errors >= 300 && r.iter().all(|p| p.frame_errors >= 300);
    let detail = format!(
        "{ebn0:.2} dB: designed FER {:.3e} ({}/{}), random median {:.3e} ({}/{}), CI {d_hi:.3e} < {m_lo:.3e}",
        d.fer(),
        d.frame_errors,
        d.frames,
        median.fer(),
        median.frame_errors,
        median.frames
    );
    outcome(enough && d_hi < m_lo, detail)
}

fn criterion_6() -> Outcome {
    let corpus = common::decoder_corpus();
    let mut fers = Vec::new();
    for (i, (name, g)) in corpus.iter().enumerate() {
        let s = i as u64;
        if let Err(e) = common::check_early_exit(g, s) {
            return outcome(false, format!("{name}: {e}"));
        }
        if let Err(e) = common::check_symmetry(g, s, 500) {
            return outcome(false, format!("{name}: {e}"));
        }
        match common::check_fer_monotone(g, s, 20_000) {
            Ok(f) => fers.push(format!("{name} {}", f.iter().map(|x| format!("{x:.1e}")).collect::<Vec<_>>().join("/"))),
            Err(e) => return outcome(false, format!("{name}: {e}")),
        }
    }
    outcome(true, format!("early exit, codeword symmetry, FER over 0..4 dB: {}", fers.join("; ")))
}
