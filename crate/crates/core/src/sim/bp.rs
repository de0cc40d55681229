use crate::error::{Error, Result};
use crate::graph::TannerGraph;

/// Magnitude limit applied to every message.
pub const LLR_CLAMP: f64 = 30.0;

/// Flooding sum-product decoder over the Tanner graph of a code.
///
/// Messages live on edges. Each iteration updates all checks (tanh rule), then
/// all variables, then tests the syndrome of the hard decisions, so a decode
/// takes at least one iteration. A variable whose total LLR is exactly 0 is
/// still erased: it is reported as bit 0 but blocks convergence.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    n_var: usize,
    edge_var: Vec<usize>,
    var_edges: Vec<Vec<usize>>,
    chk_edges: Vec<Vec<usize>>,
}

/// Per-thread message buffers.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    tanh: Vec<f64>,
    prefix: Vec<f64>,
    total: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub bits: Vec<u8>,
    /// Whether the hard decisions satisfy every check with no erased position.
    pub converged: bool,
    pub iterations: usize,
}

impl BpDecoder {
    pub fn new(g: &TannerGraph) -> Self {
        Self {
            n_var: g.n_var(),
            edge_var: g.edges().iter().map(|e| e.var).collect(),
            var_edges: (0..g.n_var()).map(|v| g.var_edges(v).to_vec()).collect(),
            chk_edges: (0..g.n_chk()).map(|c| g.chk_edges(c).to_vec()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n_var
    }

    pub fn workspace(&self) -> Workspace {
        let e = self.edge_var.len();
        let max_chk = self.chk_edges.iter().map(Vec::len).max().unwrap_or(0);
        Workspace {
            v2c: vec![0.0; e],
            c2v: vec![0.0; e],
            tanh: vec![0.0; max_chk],
            prefix: vec![0.0; max_chk + 1],
            total: vec![0.0; self.n_var],
        }
    }

    pub fn decode(&self, llr: &[f64], max_iter: usize) -> Result<Decoded> {
        let mut ws = self.workspace();
        self.decode_with(llr, max_iter, &mut ws)
    }

    pub fn decode_with(&self, llr: &[f64], max_iter: usize, ws: &mut Workspace) -> Result<Decoded> {
        if llr.len() != self.n_var {
            return Err(Error::Dimension {
                expected: self.n_var,
                got: llr.len(),
            });
        }
        if max_iter == 0 {
            return Err(Error::Config("at least one iteration is required".into()));
        }
        if ws.v2c.len() != self.edge_var.len() || ws.total.len() != self.n_var {
            *ws = self.workspace();
        }
        for (e, &v) in self.edge_var.iter().enumerate() {
            ws.v2c[e] = llr[v].clamp(-LLR_CLAMP, LLR_CLAMP);
        }
        let mut bits = vec![0u8; self.n_var];
        for it in 1..=max_iter {
            self.check_update(ws);
            let mut erased = false;
            for (v, edges) in self.var_edges.iter().enumerate() {
                let total = llr[v] + edges.iter().map(|&e| ws.c2v[e]).sum::<f64>();
                ws.total[v] = total;
                bits[v] = u8::from(total < 0.0);
                erased |= total == 0.0;
                for &e in edges {
                    ws.v2c[e] = (total - ws.c2v[e]).clamp(-LLR_CLAMP, LLR_CLAMP);
                }
            }
            if !erased && self.syndrome_ok(&bits) {
                return Ok(Decoded {
                    bits,
                    converged: true,
                    iterations: it,
                });
            }
        }
        Ok(Decoded {
            bits,
            converged: false,
            iterations: max_iter,
        })
    }

    /// `c2v_e = 2·atanh(∏_{e' ≠ e} tanh(v2c_e' / 2))`, using prefix and suffix
    /// products so no division is needed.
    fn check_update(&self, ws: &mut Workspace) {
        for edges in &self.chk_edges {
            let d = edges.len();
            for (i, &e) in edges.iter().enumerate() {
                ws.tanh[i] = (ws.v2c[e] / 2.0).tanh();
            }
            ws.prefix[0] = 1.0;
            for i in 0..d {
                ws.prefix[i + 1] = ws.prefix[i] * ws.tanh[i];
            }
            let mut suffix = 1.0;
            for i in (0..d).rev() {
                let p = ws.prefix[i] * suffix;
                ws.c2v[edges[i]] = (2.0 * p.atanh()).clamp(-LLR_CLAMP, LLR_CLAMP);
                suffix *= ws.tanh[i];
            }
        }
    }

    /// Whether `bits` satisfies every check.
    pub fn syndrome_ok(&self, bits: &[u8]) -> bool {
        self.chk_edges
            .iter()
            .all(|edges| edges.iter().fold(0u8, |acc, &e| acc ^ bits[self.edge_var[e]]) == 0)
    }

    /// Syndrome bit of every check.
    pub fn syndrome(&self, bits: &[u8]) -> Vec<u8> {
        self.chk_edges
            .iter()
            .map(|edges| edges.iter().fold(0u8, |acc, &e| acc ^ bits[self.edge_var[e]]))
            .collect()
    }
}
