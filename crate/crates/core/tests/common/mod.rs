//! Brute-force oracles and instance generators shared by the integration
//! suites and the acceptance harness. Nothing here calls the library's
//! searches; it only uses graph accessors and plain arithmetic.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use qcforge::graph::{Dir, Step};
use qcforge::lifting::{walk_order, walk_shift};
use qcforge::walks::enumerate_tbc_walks;
use qcforge::{expand, LiftedCode, ShiftAssignment, TannerGraph, Walk};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Steps as `(edge, variable-to-check?)`.
type Steps = [(usize, bool)];

/// A cycle found by exhaustive search: ordered steps from its root variable.
#[derive(Debug, Clone)]
pub struct OracleCycle {
    pub steps: Vec<(usize, bool)>,
    pub edges: Vec<usize>,
    pub vars: Vec<usize>,
    pub ace: u64,
}

impl OracleCycle {
    pub fn len(&self) -> usize {
        self.steps.len()
    }
}

/// Every cycle of length ≤ `max_len`, each once (keyed by its edge set).
pub fn brute_cycles(g: &TannerGraph, max_len: usize) -> Vec<OracleCycle> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for root in 0..g.n_var() {
        let mut st = Dfs {
            g,
            root,
            max_len,
            var_used: vec![false; g.n_var()],
            chk_used: vec![false; g.n_chk()],
            edge_used: vec![false; g.n_edges()],
            steps: Vec::new(),
        };
        st.var_used[root] = true;
        st.visit_var(root, &mut |steps| {
            let mut edges: Vec<usize> = steps.iter().map(|s| s.0).collect();
            edges.sort_unstable();
            if seen.insert(edges.clone()) {
                let mut vars: Vec<usize> = edges.iter().map(|&e| g.edge(e).var).collect();
                vars.sort_unstable();
                vars.dedup();
                let ace = vars.iter().map(|&v| g.var_degree(v) as u64 - 2).sum();
                out.push(OracleCycle {
                    steps: steps.to_vec(),
                    edges,
                    vars,
                    ace,
                });
            }
        });
    }
    out.sort_by(|a, b| (a.len(), &a.edges).cmp(&(b.len(), &b.edges)));
    out
}

struct Dfs<'a> {
    g: &'a TannerGraph,
    root: usize,
    max_len: usize,
    var_used: Vec<bool>,
    chk_used: Vec<bool>,
    edge_used: Vec<bool>,
    steps: Vec<(usize, bool)>,
}

impl Dfs<'_> {
    fn visit_var(&mut self, v: usize, found: &mut dyn FnMut(&Steps)) {
        if self.steps.len() + 2 > self.max_len {
            return;
        }
        for &e in self.g.var_edges(v) {
            if self.edge_used[e] {
                continue;
            }
            let c = self.g.edge(e).chk;
            if self.chk_used[c] {
                continue;
            }
            self.edge_used[e] = true;
            self.chk_used[c] = true;
            self.steps.push((e, true));
            self.visit_chk(c, found);
            self.steps.pop();
            self.chk_used[c] = false;
            self.edge_used[e] = false;
        }
    }

    fn visit_chk(&mut self, c: usize, found: &mut dyn FnMut(&Steps)) {
        for &e in self.g.chk_edges(c) {
            if self.edge_used[e] {
                continue;
            }
            let v = self.g.edge(e).var;
            if v == self.root {
                self.steps.push((e, false));
                found(&self.steps);
                self.steps.pop();
                continue;
            }
            // only cycles whose smallest variable is the root
            if v < self.root || self.var_used[v] {
                continue;
            }
            self.edge_used[e] = true;
            self.var_used[v] = true;
            self.steps.push((e, false));
            self.visit_var(v, found);
            self.steps.pop();
            self.var_used[v] = false;
            self.edge_used[e] = false;
        }
    }
}

/// All closed walks of length ≤ `max_len` from every variable node that are
/// backtrackless, tailless and not a repetition of a shorter walk.
pub fn brute_tbc_walks(g: &TannerGraph, max_len: usize) -> Vec<Vec<(usize, bool)>> {
    fn go(g: &TannerGraph, start: usize, at_var: Option<usize>, at_chk: Option<usize>, max_len: usize, path: &mut Vec<(usize, bool)>, out: &mut Vec<Vec<(usize, bool)>>) {
        if let Some(v) = at_var {
            if v == start && !path.is_empty() {
                let ok_tail = path.first().unwrap().0 != path.last().unwrap().0;
                if ok_tail && is_primitive(path) {
                    out.push(path.clone());
                }
            }
            if path.len() + 2 > max_len {
                return;
            }
            for &e in g.var_edges(v) {
                if path.last().is_some_and(|s| s.0 == e) {
                    continue;
                }
                path.push((e, true));
                go(g, start, None, Some(g.edge(e).chk), max_len, path, out);
                path.pop();
            }
        } else if let Some(c) = at_chk {
            for &e in g.chk_edges(c) {
                if path.last().is_some_and(|s| s.0 == e) {
                    continue;
                }
                path.push((e, false));
                go(g, start, Some(g.edge(e).var), None, max_len, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for v in 0..g.n_var() {
        go(g, v, Some(v), None, max_len, &mut Vec::new(), &mut out);
    }
    out
}

/// Smallest even period of a step sequence.
pub fn period(steps: &[(usize, bool)]) -> usize {
    let n = steps.len();
    (2..=n)
        .step_by(2)
        .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| steps[i] == steps[(i + p) % n]))
        .unwrap_or(n)
}

pub fn is_primitive(steps: &[(usize, bool)]) -> bool {
    period(steps) == steps.len()
}

pub fn to_walk(g: &TannerGraph, steps: &[(usize, bool)]) -> Walk {
    let steps = steps
        .iter()
        .map(|&(e, up)| Step {
            edge: e,
            dir: if up { Dir::Up } else { Dir::Down },
        })
        .collect();
    Walk::new(g, steps).expect("oracle walk is valid")
}

pub fn from_walk(w: &Walk) -> Vec<(usize, bool)> {
    w.steps().iter().map(|s| (s.edge, s.dir == Dir::Up)).collect()
}

/// Follows `steps` through the expanded graph from copy `start` of the walk's
/// first variable; returns the copy index reached.
pub fn trace_copy(code: &LiftedCode, steps: &[(usize, bool)], start: usize) -> usize {
    let g = code.expanded();
    let n = code.lift_degree() as usize;
    let base_var = code.base().edge(steps[0].0).var;
    let mut var = base_var * n + start;
    let mut chk = 0;
    for &(e, up) in steps {
        if up {
            let x = *g.var_edges(var).iter().find(|&&x| x / n == e).expect("copy of base edge at variable");
            chk = g.edge(x).chk;
        } else {
            let x = *g.chk_edges(chk).iter().find(|&&x| x / n == e).expect("copy of base edge at check");
            var = g.edge(x).var;
        }
    }
    assert_eq!(var / n, base_var, "walk must close at its start node");
    var % n
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Random base graph: `2..=max_var` variables of degree 2..=4, `2..=max_chk`
/// checks of degree at most 4, occasionally one doubled edge.
pub fn random_base(rng: &mut ChaCha8Rng, max_var: usize, max_chk: usize) -> TannerGraph {
    loop {
        let n_var = rng.random_range(2..=max_var);
        let n_chk = rng.random_range(2..=max_chk);
        let mut chk_deg = vec![0usize; n_chk];
        let mut edges = Vec::new();
        let mut ok = true;
        for v in 0..n_var {
            let d = rng.random_range(2..=4usize.min(n_chk));
            let mut free: Vec<usize> = (0..n_chk).filter(|&c| chk_deg[c] < 4).collect();
            if free.len() < d {
                ok = false;
                break;
            }
            free.shuffle(rng);
            for &c in &free[..d] {
                chk_deg[c] += 1;
                edges.push((v, c));
            }
        }
        if !ok {
            continue;
        }
        if rng.random_bool(0.15) {
            let (v, c) = edges[rng.random_range(0..edges.len())];
            let vdeg = edges.iter().filter(|e| e.0 == v).count();
            if vdeg < 4 && chk_deg[c] < 4 {
                edges.push((v, c));
            }
        }
        edges.shuffle(rng);
        return TannerGraph::new(n_var, n_chk, edges).expect("generated graph is valid");
    }
}

pub fn random_assignment(rng: &mut ChaCha8Rng, g: &TannerGraph, n: u64) -> ShiftAssignment {
    let shifts = (0..g.n_edges()).map(|_| rng.random_range(0..n)).collect();
    ShiftAssignment::new(n, shifts).expect("valid assignment")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Outcome of the four lemma checks on one instance; `Err` names the first mismatch.
pub fn lemma_checks(g: &TannerGraph, a: &ShiftAssignment, max_len: usize) -> Result<(), String> {
    let n = a.lift_degree();
    let code = expand(g, a).map_err(|e| e.to_string())?;

    // (a) walk shifts against copy tracing
    let base_cycles = brute_cycles(g, max_len);
    let mut walks: Vec<Vec<(usize, bool)>> = base_cycles.iter().map(|c| c.steps.clone()).collect();
    walks.extend(enumerate_tbc_walks(g, 8.min(max_len)).map_err(|e| e.to_string())?.iter().map(|w| from_walk(w.walk())));
    for steps in &walks {
        let d = walk_shift(g, &to_walk(g, steps), a).map_err(|e| e.to_string())?;
        for start in 0..n as usize {
            let end = trace_copy(&code, steps, start);
            if end as u64 != (start as u64 + d) % n {
                return Err(format!("shift {d} of {steps:?} but copy {start} reaches copy {end}"));
            }
        }
    }

    let lifted = brute_cycles(code.expanded(), max_len);
    let nn = n as usize;

    // (b) inverse image of each base cycle
    for c in &base_cycles {
        let d = walk_shift(g, &to_walk(g, &c.steps), a).unwrap();
        let k = n / gcd(n, d);
        let (count, length, ace) = (n / k, k * c.len() as u64, k * c.ace);
        let over: BTreeSet<usize> = c.edges.iter().copied().collect();
        let components = image_components(&code, &over);
        if components.len() as u64 != count || components.iter().any(|&(l, x)| l != length || x != ace) {
            return Err(format!("cycle {:?}: predicted {count}x(len {length}, ace {ace}), found {components:?}", c.edges));
        }
        if length as usize <= max_len {
            let hits: Vec<&OracleCycle> = lifted
                .iter()
                .filter(|x| x.edges.iter().map(|&e| e / nn).collect::<BTreeSet<_>>() == over)
                .collect();
            if hits.len() as u64 != count || hits.iter().any(|x| x.len() as u64 != length || x.ace != ace) {
                return Err(format!("cycle {:?}: enumeration disagrees with prediction", c.edges));
            }
        }
    }

    // (c) zero shifts give N disjoint copies
    let zero = expand(g, &ShiftAssignment::zeros(n, g.n_edges()).unwrap()).unwrap();
    let mut copies: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    for x in brute_cycles(zero.expanded(), max_len) {
        let copy_set: BTreeSet<usize> = x.vars.iter().map(|v| v % nn).collect();
        if copy_set.len() != 1 {
            return Err("a cycle of the zero lift mixes copies".into());
        }
        let base_edges: Vec<usize> = x.edges.iter().map(|e| e / nn).collect();
        *copies.entry((x.len(), base_edges)).or_default() += 1;
    }
    let expect: BTreeMap<(usize, Vec<usize>), usize> = base_cycles.iter().map(|c| ((c.len(), c.edges.clone()), nn)).collect();
    if copies != expect {
        return Err("zero lift is not N copies of the base cycles".into());
    }

    // (d) projections are repetitions of base TBC walks
    let tbc: HashSet<Walk> = enumerate_tbc_walks(g, max_len)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|w| w.walk().clone())
        .collect();
    for x in &lifted {
        let proj: Vec<(usize, bool)> = x.steps.iter().map(|&(e, up)| (e / nn, up)).collect();
        let m = proj.len();
        if (0..m).any(|i| proj[i].0 == proj[(i + 1) % m].0) {
            return Err(format!("projection of {:?} backtracks", x.edges));
        }
        let p = period(&proj);
        let k = (m / p) as u64;
        let root = to_walk(g, &proj[..p]);
        if !tbc.contains(&root.canonical()) {
            return Err(format!("projection root {} not among the TBC walks", root.notation()));
        }
        let d = walk_shift(g, &root, a).unwrap();
        if walk_order(d, n) != k {
            return Err(format!("projection repeats {k} times but its root has order {}", walk_order(d, n)));
        }
        if root.ace(g) * k != x.ace {
            return Err("projection ACE mismatch".into());
        }
    }
    Ok(())
}

/// Connected components of the lifted copies of `over`, as (edges, ACE) of
/// each component; `(0, 0)` marks a component that is not a cycle.
fn image_components(code: &LiftedCode, over: &BTreeSet<usize>) -> Vec<(u64, u64)> {
    let g = code.expanded();
    let n = code.lift_degree() as usize;
    let edges: Vec<usize> = (0..g.n_edges()).filter(|e| over.contains(&(e / n))).collect();
    // union-find over variables (0..nv) and checks (nv..)
    let nv = g.n_var();
    let mut parent: Vec<usize> = (0..nv + g.n_chk()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut deg = vec![0usize; nv + g.n_chk()];
    for &e in &edges {
        let ed = g.edge(e);
        let (a, b) = (ed.var, nv + ed.chk);
        deg[a] += 1;
        deg[b] += 1;
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let mut comps: BTreeMap<usize, (u64, u64, bool)> = BTreeMap::new();
    for &e in &edges {
        let r = find(&mut parent, g.edge(e).var);
        comps.entry(r).or_insert((0, 0, true)).0 += 1;
    }
    for (x, &dx) in deg.iter().enumerate() {
        if dx == 0 {
            continue;
        }
        let r = find(&mut parent, x);
        let c = comps.get_mut(&r).unwrap();
        if dx != 2 {
            c.2 = false;
        }
        if x < nv {
            c.1 += g.var_degree(x) as u64 - 2;
        }
    }
    comps
        .into_values()
        .map(|(l, a, cyc)| if cyc { (l, a) } else { (0, 0) })
        .collect()
}

/// A basis of the binary null space of the parity-check matrix of `g`
/// (parallel edges cancel in pairs).
pub fn codeword_basis(g: &TannerGraph) -> Vec<Vec<u8>> {
    let n = g.n_var();
    let mut rows: Vec<Vec<u8>> = (0..g.n_chk())
        .map(|c| {
            let mut r = vec![0u8; n];
            for &e in g.chk_edges(c) {
                r[g.edge(e).var] ^= 1;
            }
            r
        })
        .collect();
    // reduced row echelon form
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] == 1) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && rows[i][col] == 1 {
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u8; n];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = rows[i][f];
            }
            v
        })
        .collect()
}

/// Random combination of the basis vectors.
pub fn random_codeword(rng: &mut ChaCha8Rng, basis: &[Vec<u8>], n: usize) -> Vec<u8> {
    let mut c = vec![0u8; n];
    for b in basis {
        if rng.random_bool(0.5) {
            for (x, y) in c.iter_mut().zip(b) {
                *x ^= y;
            }
        }
    }
    c
}

/// Irregular profile for a 30-variable, 15-check base: 14 variables of
/// degree 2, 9 of degree 3, 4 of degree 5 and 3 of degree 15.
pub fn irregular_30_degrees() -> Vec<usize> {
    let mut d = vec![2; 14];
    d.extend([3; 9]);
    d.extend([5; 4]);
    d.extend([15; 3]);
    d
}

/// Random (base, N, target) instance for the swap algorithm.
pub fn swap_instance(seed: u64) -> (TannerGraph, u64, qcforge::AceSpectrum) {
    use qcforge::Ace;
    let mut r = rng(seed);
    let g = random_base(&mut r, 10, 10);
    let n = r.random_range(1..=8u64);
    let depth = r.random_range(2..=4usize);
    let mut t = vec![Ace::Inf];
    for _ in 1..depth {
        t.push(if r.random_bool(0.4) { Ace::Inf } else { Ace::Finite(r.random_range(0..5)) });
    }
    (g, n, qcforge::AceSpectrum::new(t).unwrap())
}

/// Runs the swap algorithm on one instance and, on success, rechecks the
/// result independently. `Ok(true)` is a checked success, `Ok(false)` a
/// reported failure.
pub fn swap_soundness(seed: u64) -> Result<bool, String> {
    use qcforge::swap::{algorithm1, verify_target, Algorithm1Config};
    use qcforge::walks::find_problematic_walks;
    use qcforge::Ace;

    let (g, n, target) = swap_instance(seed);
    let walks = find_problematic_walks(&g, &target, n).map_err(|e| e.to_string())?;
    let report = algorithm1(&g, &target, n, &walks, &Algorithm1Config::default(), seed).map_err(|e| e.to_string())?;
    if !report.success {
        return Ok(false);
    }
    let a = ShiftAssignment::from_file(&report.shifts, &g).map_err(|e| e.to_string())?;
    let code = expand(&g, &a).unwrap();
    if !verify_target(&code, &target, None).map_err(|e| e.to_string())?.pass {
        return Err(format!("seed {seed}: success but verify_target fails"));
    }
    let max_len = target.max_len();
    for c in brute_cycles(code.expanded(), max_len) {
        if Ace::Finite(c.ace) < target.at_len(c.len()) {
            return Err(format!("seed {seed}: lifted cycle of length {} has ACE {} below {}", c.len(), c.ace, target));
        }
    }
    for p in walks.walks() {
        let w = p.walk.len() as u64;
        let d = walk_shift(&g, p.walk.walk(), &a).unwrap();
        let order = n / gcd(n, d);
        let ok = w * order > max_len as u64 || Ace::Finite(order * p.walk.ace()) >= target.at_len((w * order) as usize);
        if !ok {
            return Err(format!("seed {seed}: walk {} has order {order}, condition fails", p.walk.walk().notation()));
        }
    }
    Ok(true)
}

/// Codes used for decoder regression: the 9-bit toy lift, a designed lift of a
/// small PEG base and a random lift of a (3,6)-regular PEG base.
pub fn decoder_corpus() -> Vec<(&'static str, TannerGraph)> {
    use qcforge::graph::{example_graph, peg_construct};
    use qcforge::swap::{greedy_optimize, GreedyConfig};

    let toy = expand(&example_graph(), &ShiftAssignment::new(3, vec![1, 0, 0, 0, 1, 0, 0]).unwrap()).unwrap();
    let small = peg_construct(8, 5, &[2, 2, 2, 3, 3, 3, 4, 2], 11).unwrap();
    let design = greedy_optimize(&small, &GreedyConfig::new(6, 4, 3, 2)).unwrap();
    let designed = expand(&small, &ShiftAssignment::from_file(&design.shifts, &small).unwrap()).unwrap();
    let regular = peg_construct(16, 8, &[3; 16], 3).unwrap();
    let a = random_assignment(&mut rng(9), &regular, 8);
    let random = expand(&regular, &a).unwrap();
    vec![
        ("toy", toy.expanded().clone()),
        ("designed", designed.expanded().clone()),
        ("random", random.expanded().clone()),
    ]
}

/// Noise-free input for random codewords decodes to that codeword in one iteration.
pub fn check_early_exit(g: &TannerGraph, seed: u64) -> Result<(), String> {
    use qcforge::sim::BpDecoder;
    let dec = BpDecoder::new(g);
    let basis = codeword_basis(g);
    let mut r = rng(seed);
    for _ in 0..20 {
        let c = random_codeword(&mut r, &basis, g.n_var());
        let llr: Vec<f64> = c.iter().map(|&b| if b == 1 { -5.0 } else { 5.0 }).collect();
        let out = dec.decode(&llr, 50).map_err(|e| e.to_string())?;
        if !out.converged || out.iterations != 1 || out.bits != c {
            return Err(format!("clean codeword took {} iterations (converged {})", out.iterations, out.converged));
        }
    }
    Ok(())
}

/// Flipping the channel LLRs on the support of a codeword flips the decoded
/// bits by that codeword and leaves the iteration count unchanged.
pub fn check_symmetry(g: &TannerGraph, seed: u64, frames: usize) -> Result<(), String> {
    use qcforge::sim::BpDecoder;
    use rand_distr::{Distribution, Normal};
    let dec = BpDecoder::new(g);
    let basis = codeword_basis(g);
    let mut r = rng(seed);
    let noise = Normal::new(0.0, 0.9).unwrap();
    for f in 0..frames {
        let llr: Vec<f64> = (0..g.n_var()).map(|_| 2.0 * (1.0 + noise.sample(&mut r)) / 0.81).collect();
        let c = random_codeword(&mut r, &basis, g.n_var());
        let flipped: Vec<f64> = llr.iter().zip(&c).map(|(&l, &b)| if b == 1 { -l } else { l }).collect();
        let a = dec.decode(&llr, 30).map_err(|e| e.to_string())?;
        let b = dec.decode(&flipped, 30).map_err(|e| e.to_string())?;
        if a.converged != b.converged || a.iterations != b.iterations {
            return Err(format!("frame {f}: flipped input changed the decoder trajectory"));
        }
        if a.converged {
            let shifted: Vec<u8> = a.bits.iter().zip(&c).map(|(x, y)| x ^ y).collect();
            if shifted != b.bits {
                return Err(format!("frame {f}: decisions are not flipped by the codeword"));
            }
        }
    }
    Ok(())
}

/// FER at 0..=4 dB; fails when a higher-SNR point is significantly worse
/// (disjoint 95% Wilson intervals) than the point before it.
pub fn check_fer_monotone(g: &TannerGraph, seed: u64, frames: u64) -> Result<Vec<f64>, String> {
    use qcforge::sim::{monte_carlo, wilson_interval, SimConfig};
    let cfg = SimConfig {
        ebn0_db: vec![0.0, 1.0, 2.0, 3.0, 4.0],
        max_frames: frames,
        max_frame_errors: 200,
        max_iterations: 50,
        seed,
        ..SimConfig::default()
    };
    let res = monte_carlo(g, &cfg).map_err(|e| e.to_string())?;
    for w in res.points.windows(2) {
        let (_, hi_prev) = wilson_interval(w[0].frame_errors, w[0].frames, 1.96);
        let (lo_next, _) = wilson_interval(w[1].frame_errors, w[1].frames, 1.96);
        if lo_next > hi_prev {
            return Err(format!("FER rises from {:.3e} at {} dB to {:.3e} at {} dB", w[0].fer(), w[0].ebn0_db, w[1].fer(), w[1].ebn0_db));
        }
    }
    Ok(res.points.iter().map(|p| p.fer()).collect())
}
