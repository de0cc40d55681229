//! `qcforge`: build base graphs, design ACE-constrained cyclic lifts, check
//! their spectra, export them and simulate them.
//!
//! The binary is a thin wrapper over [`run`], which other programs can call
//! with an argument vector.

mod manifest;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use manifest::Recorder;
use qcforge::graph::{load_alist, peg_construct, store_alist};
use qcforge::lifting::{export_qc_matrix, ShiftFile};
use qcforge::sim::{monte_carlo, SimConfig};
use qcforge::swap::{
    algorithm1, greedy_optimize, verify_target, Algorithm1Config, DesignReport, GreedyConfig, SelectionPolicy,
};
use qcforge::walks::{
    ace_spectrum_budgeted, enumerate_tbc_walks_with, find_problematic_walks_with, lifted_spectrum, walk_dump,
    ProblematicSearch, WalkSearch,
};
use qcforge::{expand, AceSpectrum, LiftedCode, ShiftAssignment, TannerGraph};

/// Exit status when a run completes but its result misses the requested target.
pub const EXIT_UNMET: u8 = 3;

#[derive(Parser)]
#[command(name = "qcforge", version, about = "ACE-constrained cyclic lifting of LDPC protographs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a base graph by progressive edge growth.
    Peg(PegArgs),
    /// Choose edge shifts for a base graph and verify the lifted spectrum.
    Design(DesignArgs),
    /// ACE spectrum of a graph, or of a lift when --shifts is given.
    Spectrum(SpectrumArgs),
    /// Check a lift against a target spectrum.
    Verify(VerifyArgs),
    /// Write the expanded parity-check matrix and the circulant shift table.
    Export(ExportArgs),
    /// Dump the TBC walks of a base graph as JSON lines.
    Walks(WalksArgs),
    /// BP decoding over BPSK/AWGN.
    Simulate(SimulateArgs),
}

#[derive(Args, Serialize)]
struct PegArgs {
    #[arg(long)]
    n_var: usize,
    #[arg(long)]
    n_chk: usize,
    /// Variable degrees, e.g. `2x14,3x9,5x4,15x3` or `2,2,3,3`.
    #[arg(long)]
    degrees: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    #[serde(skip)]
    out_dir: PathBuf,
}

#[derive(Args, Serialize)]
struct DesignArgs {
    /// Protograph JSON or alist file.
    #[arg(long)]
    #[serde(skip)]
    base: PathBuf,
    /// Lifting degree.
    #[arg(long = "N")]
    lift_degree: u64,
    #[arg(long)]
    dmax: usize,
    /// Fixed target such as `inf,inf,3`; without it the greedy optimizer runs.
    #[arg(long)]
    target: Option<String>,
    /// Fail (exit 3) unless the achieved spectrum is at least this.
    #[arg(long)]
    min: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Seeded runs of the swapping algorithm per target.
    #[arg(long, default_value_t = 4)]
    attempts: u32,
    /// Edge ranking; by default attempts alternate participation and least-participation.
    #[arg(long)]
    policy: Option<SelectionPolicy>,
    #[arg(long)]
    continue_on_failure: bool,
    /// Only consider walks made of at most two cycles.
    #[arg(long)]
    two_cycle_only: bool,
    /// Cap on walk-search steps per target; a target that exceeds it counts as infeasible. 0 disables.
    #[arg(long, default_value_t = 20_000_000)]
    walk_budget: u64,
    #[arg(long)]
    #[serde(skip)]
    out_dir: PathBuf,
}

#[derive(Args, Serialize)]
struct SpectrumArgs {
    #[arg(long)]
    #[serde(skip)]
    base: PathBuf,
    /// Shift file; the spectrum is then that of the lift.
    #[arg(long)]
    #[serde(skip)]
    shifts: Option<PathBuf>,
    #[arg(long)]
    dmax: usize,
    /// Exit 3 when the spectrum is below this.
    #[arg(long)]
    min: Option<String>,
    /// Cap on cycle-search steps. 0 disables.
    #[arg(long, default_value_t = 0)]
    budget: u64,
    #[arg(long)]
    #[serde(skip)]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    #[serde(skip)]
    base: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    shifts: PathBuf,
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = 0)]
    budget: u64,
}

#[derive(Args, Serialize)]
struct ExportArgs {
    #[arg(long)]
    #[serde(skip)]
    base: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    shifts: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    out_dir: PathBuf,
}

#[derive(Args, Serialize)]
struct WalksArgs {
    #[arg(long)]
    #[serde(skip)]
    base: PathBuf,
    #[arg(long)]
    max_len: usize,
    /// With --N, dump only the walks problematic for this target.
    #[arg(long, requires = "lift_degree")]
    target: Option<String>,
    #[arg(long = "N")]
    lift_degree: Option<u64>,
    #[arg(long, default_value_t = 0)]
    budget: u64,
}

#[derive(Args, Serialize)]
struct SimulateArgs {
    /// Expanded code as an alist file.
    #[arg(long, conflicts_with_all = ["base", "shifts"])]
    #[serde(skip)]
    code: Option<PathBuf>,
    #[arg(long, requires = "shifts")]
    #[serde(skip)]
    base: Option<PathBuf>,
    #[arg(long, requires = "base")]
    #[serde(skip)]
    shifts: Option<PathBuf>,
    /// Eb/N0 points in dB, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    ebn0: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Frame budget per point.
    #[arg(long, default_value_t = 10_000)]
    frames: u64,
    /// Stop a point after this many frame errors.
    #[arg(long, default_value_t = 100)]
    max_errors: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Variable positions that are not transmitted.
    #[arg(long, value_delimiter = ',')]
    punctured: Vec<usize>,
    /// Override the rate used for the noise variance.
    #[arg(long)]
    rate: Option<f64>,
    /// Worker threads (0 = all cores). Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    #[serde(skip)]
    workers: usize,
    #[arg(long)]
    #[serde(skip)]
    out_dir: PathBuf,
}

/// Design report as written to disk: the run itself plus the final check.
#[derive(Serialize)]
struct VerifiedReport<'a> {
    #[serde(flatten)]
    design: &'a DesignReport,
    verified: bool,
    counterexamples: Vec<String>,
}

/// Runs one command; `args[0]` is the program name. Returns the exit status.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code() as u8;
        }
    };
    let outcome = match cli.command {
        Command::Peg(a) => peg(a),
        Command::Design(a) => design(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Verify(a) => verify(a),
        Command::Export(a) => export(a),
        Command::Walks(a) => walks(a),
        Command::Simulate(a) => simulate(a),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => EXIT_UNMET,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

/// Seed from the command line, or a fresh one that is printed and recorded.
fn resolve_seed(seed: &mut Option<u64>) -> u64 {
    *seed.get_or_insert_with(|| {
        let nanos = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_nanos() as u64);
        let s = qcforge::seed::derive(nanos, &[std::process::id() as u64]);
        eprintln!("seed: {s}");
        s
    })
}

/// Protograph JSON when the text starts with `{`, alist otherwise.
fn parse_graph(text: &str, path: &Path) -> Result<TannerGraph> {
    let g = if text.trim_start().starts_with('{') {
        TannerGraph::from_json(text)
    } else {
        load_alist(text)
    };
    g.with_context(|| format!("cannot parse graph {}", path.display()))
}

fn load_graph(rec: &mut Recorder, path: &Path) -> Result<TannerGraph> {
    let text = rec.read(path)?;
    parse_graph(&text, path)
}

fn load_lift(rec: &mut Recorder, base: &Path, shifts: &Path) -> Result<LiftedCode> {
    let g = load_graph(rec, base)?;
    let text = rec.read(shifts)?;
    let file: ShiftFile = serde_json::from_str(&text).with_context(|| format!("cannot parse {}", shifts.display()))?;
    let a = ShiftAssignment::from_file(&file, &g)?;
    Ok(expand(&g, &a)?)
}

fn parse_spectrum(s: &str, what: &str) -> Result<AceSpectrum> {
    s.parse().with_context(|| format!("bad {what} `{s}`"))
}

fn budget(b: u64) -> Option<u64> {
    (b > 0).then_some(b)
}

fn parse_degrees(spec: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('x') {
            Some((d, count)) => {
                let d: usize = d.parse().with_context(|| format!("bad degree in `{part}`"))?;
                let count: usize = count.parse().with_context(|| format!("bad count in `{part}`"))?;
                out.extend(std::iter::repeat_n(d, count));
            }
            None => out.push(part.parse().with_context(|| format!("bad degree `{part}`"))?),
        }
    }
    Ok(out)
}

fn peg(mut a: PegArgs) -> Result<bool> {
    let seed = resolve_seed(&mut a.seed);
    let mut rec = Recorder::new("peg", &a)?;
    rec.seed(seed);
    let degrees = parse_degrees(&a.degrees)?;
    let g = peg_construct(a.n_var, a.n_chk, &degrees, seed)?;
    rec.write(&a.out_dir, "base.json", &(g.to_json() + "\n"))?;
    rec.write(&a.out_dir, "base.alist", &store_alist(&g)?)?;
    rec.finish(&a.out_dir)?;
    println!("{} variables, {} checks, {} edges", g.n_var(), g.n_chk(), g.n_edges());
    Ok(true)
}

fn design(mut a: DesignArgs) -> Result<bool> {
    let seed = resolve_seed(&mut a.seed);
    if a.dmax < 2 {
        bail!("--dmax must be at least 2");
    }
    let mut rec = Recorder::new("design", &a)?;
    rec.seed(seed);
    let g = load_graph(&mut rec, &a.base)?;
    let min = a.min.as_deref().map(|s| parse_spectrum(s, "--min")).transpose()?;
    let algorithm = Algorithm1Config {
        continue_on_failure: a.continue_on_failure,
        ..Algorithm1Config::default()
    };
    let walks = ProblematicSearch {
        two_cycle_only: a.two_cycle_only,
        budget: budget(a.walk_budget),
    };
    let mut cfg = GreedyConfig::new(a.lift_degree, a.dmax, a.attempts, seed);
    cfg.algorithm = algorithm;
    cfg.walks = walks;
    if let Some(p) = a.policy {
        cfg.policies = vec![p];
    }

    let report = match &a.target {
        Some(t) => {
            let target = parse_spectrum(t, "--target")?;
            if target.depth() != a.dmax {
                bail!("target has depth {} but --dmax is {}", target.depth(), a.dmax);
            }
            fixed_target(&g, &target, &cfg)?
        }
        None => greedy_optimize(&g, &cfg)?,
    };

    let lift = ShiftAssignment::from_file(&report.shifts, &g)?;
    let code = expand(&g, &lift)?;
    let check = verify_target(&code, &report.target, None)?;
    let counterexamples = check.counterexamples.iter().map(|c| c.walk().notation()).collect();
    let out = VerifiedReport {
        design: &report,
        verified: check.pass,
        counterexamples,
    };
    let dir = &a.out_dir;
    rec.write(dir, "shifts.json", &(serde_json::to_string_pretty(&report.shifts)? + "\n"))?;
    rec.write(dir, "report.json", &(serde_json::to_string_pretty(&out)? + "\n"))?;
    match store_alist(code.expanded()) {
        Ok(text) => {
            rec.write(dir, "expanded.alist", &text)?;
        }
        Err(e) => eprintln!("expanded.alist not written: {e}"),
    }
    if let Ok(qc) = export_qc_matrix(&code) {
        rec.write(dir, "qc.txt", &qc.to_text())?;
    }
    rec.finish(dir)?;

    println!("target   {}", report.target);
    println!("achieved {}", report.achieved);
    println!("verified {}", check.pass);
    let mut ok = report.success && check.pass;
    if !report.success {
        eprintln!("target not met");
    }
    if let Some(min) = min {
        if !report.achieved.dominates(&min) {
            eprintln!("achieved spectrum {} is below --min {min}", report.achieved);
            ok = false;
        }
    }
    Ok(ok)
}

/// First successful seeded run of the swapping algorithm for a fixed target,
/// or the last failed one.
fn fixed_target(g: &TannerGraph, target: &AceSpectrum, cfg: &GreedyConfig) -> Result<DesignReport> {
    let walks = find_problematic_walks_with(g, target, cfg.lift_degree, cfg.walks)?;
    let mut last = None;
    for attempt in 0..cfg.attempts {
        let run = Algorithm1Config {
            policy: cfg.policies[attempt as usize % cfg.policies.len()],
            ..cfg.algorithm.clone()
        };
        let s = qcforge::seed::derive(cfg.seed, &[attempt as u64]);
        let mut r = algorithm1(g, target, cfg.lift_degree, &walks, &run, s)?;
        r.seed = cfg.seed;
        if r.success {
            return Ok(r);
        }
        last = Some(r);
    }
    Ok(last.expect("at least one attempt"))
}

fn spectrum(a: SpectrumArgs) -> Result<bool> {
    let mut rec = Recorder::new("spectrum", &a)?;
    let s = match &a.shifts {
        Some(shifts) => {
            let code = load_lift(&mut rec, &a.base, shifts)?;
            lifted_spectrum(&code, a.dmax, budget(a.budget))?
        }
        None => {
            let g = load_graph(&mut rec, &a.base)?;
            ace_spectrum_budgeted(&g, a.dmax, budget(a.budget))?
        }
    };
    println!("{s}");
    if let Some(dir) = &a.out_dir {
        rec.write(dir, "spectrum.json", &(serde_json::to_string_pretty(&s)? + "\n"))?;
        rec.finish(dir)?;
    }
    if let Some(min) = &a.min {
        let min = parse_spectrum(min, "--min")?;
        if !s.dominates(&min) {
            eprintln!("spectrum {s} is below --min {min}");
            return Ok(false);
        }
    }
    Ok(true)
}

fn verify(a: VerifyArgs) -> Result<bool> {
    let mut rec = Recorder::new("verify", &a)?;
    let code = load_lift(&mut rec, &a.base, &a.shifts)?;
    let target = parse_spectrum(&a.target, "--target")?;
    let v = verify_target(&code, &target, budget(a.budget))?;
    if v.pass {
        println!("pass");
    } else {
        println!("fail");
        for c in &v.counterexamples {
            println!("  length {} ace {}: {}", c.len(), c.ace(), c.walk().notation());
        }
    }
    Ok(v.pass)
}

fn export(a: ExportArgs) -> Result<bool> {
    let mut rec = Recorder::new("export", &a)?;
    let code = load_lift(&mut rec, &a.base, &a.shifts)?;
    rec.write(&a.out_dir, "expanded.alist", &store_alist(code.expanded())?)?;
    match export_qc_matrix(&code) {
        Ok(qc) => {
            rec.write(&a.out_dir, "qc.txt", &qc.to_text())?;
        }
        Err(e) => eprintln!("qc.txt not written: {e}"),
    }
    rec.finish(&a.out_dir)?;
    Ok(true)
}

fn walks(a: WalksArgs) -> Result<bool> {
    let mut rec = Recorder::new("walks", &a)?;
    let g = load_graph(&mut rec, &a.base)?;
    match (&a.target, a.lift_degree) {
        (Some(t), Some(n)) => {
            let target = parse_spectrum(t, "--target")?;
            let opts = ProblematicSearch {
                two_cycle_only: false,
                budget: budget(a.budget),
            };
            let set = find_problematic_walks_with(&g, &target, n, opts)?;
            for r in set.records() {
                println!("{}", serde_json::to_string(&r)?);
            }
        }
        _ => {
            let search = WalkSearch::new(a.max_len).budget(budget(a.budget));
            print!("{}", walk_dump(enumerate_tbc_walks_with(&g, &search)?));
        }
    }
    Ok(true)
}

fn simulate(mut a: SimulateArgs) -> Result<bool> {
    let seed = resolve_seed(&mut a.seed);
    let mut rec = Recorder::new("simulate", &a)?;
    rec.seed(seed);
    let code = match (&a.code, &a.base, &a.shifts) {
        (Some(path), _, _) => load_graph(&mut rec, path)?,
        (None, Some(base), Some(shifts)) => load_lift(&mut rec, base, shifts)?.expanded().clone(),
        _ => bail!("give either --code or both --base and --shifts"),
    };
    let cfg = SimConfig {
        ebn0_db: a.ebn0.clone(),
        max_iterations: a.max_iter,
        max_frames: a.frames,
        max_frame_errors: a.max_errors,
        seed,
        punctured: a.punctured.clone(),
        rate: a.rate,
        workers: a.workers,
        ..SimConfig::default()
    };
    let res = monte_carlo(&code, &cfg)?;
    let csv = res.to_csv();
    print!("{csv}");
    rec.write(&a.out_dir, "results.csv", &csv)?;
    rec.write(&a.out_dir, "results.json", &(serde_json::to_string_pretty(&res)? + "\n"))?;
    rec.finish(&a.out_dir)?;
    Ok(true)
}
