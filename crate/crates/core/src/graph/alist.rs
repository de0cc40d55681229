//! MacKay alist reader/writer.
//!
//! Layout: `n m`, `max_col_weight max_row_weight`, the n column weights, the m
//! row weights, then one line per column and one per row listing 1-based
//! neighbor indices. Zero padding up to the maximum weight is accepted on input
//! and always written on output.

use super::TannerGraph;
use crate::error::{Error, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Alist {
        line,
        msg: msg.into(),
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next non-blank line parsed as integers.
    fn next_ints(&mut self, what: &str) -> Result<Vec<usize>> {
        for (idx, line) in self.inner.by_ref() {
            self.last = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            return line
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| err(idx + 1, format!("`{t}` is not a nonnegative integer")))
                })
                .collect();
        }
        Err(err(self.last + 1, format!("unexpected end of input, expected {what}")))
    }

    fn exact(&mut self, count: usize, what: &str) -> Result<Vec<usize>> {
        let v = self.next_ints(what)?;
        if v.len() != count {
            return Err(err(
                self.last,
                format!("expected {count} values for {what}, found {}", v.len()),
            ));
        }
        Ok(v)
    }
}

/// Parses an alist document into a simple Tanner graph.
///
/// Edges are numbered column by column in the order the column lists give them.
pub fn load_alist(text: &str) -> Result<TannerGraph> {
    let mut lines = Lines::new(text);
    let header = lines.exact(2, "`n m` header")?;
    let (n, m) = (header[0], header[1]);
    let maxw = lines.exact(2, "maximum weights")?;
    let (max_col, max_row) = (maxw[0], maxw[1]);
    let col_w = lines.exact(n, "column weights")?;
    let row_w = lines.exact(m, "row weights")?;
    if col_w.iter().copied().max().unwrap_or(0) != max_col {
        return Err(err(lines.last, "maximum column weight does not match the column weights"));
    }
    if row_w.iter().copied().max().unwrap_or(0) != max_row {
        return Err(err(lines.last, "maximum row weight does not match the row weights"));
    }

    let mut cols = Vec::with_capacity(n);
    for (j, &w) in col_w.iter().enumerate() {
        let raw = lines.next_ints("column neighbor list")?;
        cols.push(neighbors(&raw, w, m, lines.last, &format!("column {}", j + 1))?);
    }
    let mut rows = Vec::with_capacity(m);
    for (i, &w) in row_w.iter().enumerate() {
        let raw = lines.next_ints("row neighbor list")?;
        rows.push(neighbors(&raw, w, n, lines.last, &format!("row {}", i + 1))?);
    }

    let mut from_cols: Vec<(usize, usize)> = cols
        .iter()
        .enumerate()
        .flat_map(|(v, cs)| cs.iter().map(move |&c| (c, v)))
        .collect();
    let mut from_rows: Vec<(usize, usize)> = rows
        .iter()
        .enumerate()
        .flat_map(|(c, vs)| vs.iter().map(move |&v| (c, v)))
        .collect();
    from_cols.sort_unstable();
    from_rows.sort_unstable();
    if from_cols != from_rows {
        return Err(err(lines.last, "column and row neighbor lists disagree"));
    }

    TannerGraph::new(
        n,
        m,
        cols.iter()
            .enumerate()
            .flat_map(|(v, cs)| cs.iter().map(move |&c| (v, c))),
    )
}

fn neighbors(raw: &[usize], weight: usize, bound: usize, line: usize, what: &str) -> Result<Vec<usize>> {
    let (list, pad) = raw.split_at(raw.len().min(weight));
    if list.len() != weight || list.contains(&0) {
        return Err(err(
            line,
            format!("{what}: expected {weight} nonzero indices, found {:?}", raw),
        ));
    }
    if pad.iter().any(|&p| p != 0) {
        return Err(err(line, format!("{what}: more neighbors than its weight {weight}")));
    }
    let mut out = Vec::with_capacity(weight);
    for &x in list {
        if x > bound {
            return Err(err(line, format!("{what}: index {x} out of range 1..={bound}")));
        }
        if out.contains(&(x - 1)) {
            return Err(err(line, format!("{what}: duplicate index {x}")));
        }
        out.push(x - 1);
    }
    Ok(out)
}

/// Writes the canonical alist form: column lists in edge order, row lists in
/// ascending variable order, both zero-padded to the maximum weight.
pub fn store_alist(g: &TannerGraph) -> Result<String> {
    if g.has_parallel_edges() {
        return Err(Error::ParallelEdges);
    }
    let n = g.n_var();
    let m = g.n_chk();
    let col_w: Vec<usize> = (0..n).map(|v| g.var_degree(v)).collect();
    let row_w: Vec<usize> = (0..m).map(|c| g.chk_degree(c)).collect();
    let max_col = col_w.iter().copied().max().unwrap_or(0);
    let max_row = row_w.iter().copied().max().unwrap_or(0);

    let mut out = String::new();
    let line = |out: &mut String, vals: &mut dyn Iterator<Item = usize>| {
        let parts: Vec<String> = vals.map(|x| x.to_string()).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    };
    line(&mut out, &mut [n, m].into_iter());
    line(&mut out, &mut [max_col, max_row].into_iter());
    line(&mut out, &mut col_w.iter().copied());
    line(&mut out, &mut row_w.iter().copied());
    for v in 0..n {
        let list: Vec<usize> = g.var_edges(v).iter().map(|&e| g.edge(e).chk + 1).collect();
        line(&mut out, &mut padded(list, max_col));
    }
    for c in 0..m {
        let mut list: Vec<usize> = g.chk_edges(c).iter().map(|&e| g.edge(e).var + 1).collect();
        list.sort_unstable();
        line(&mut out, &mut padded(list, max_row));
    }
    Ok(out)
}

fn padded(mut list: Vec<usize>, width: usize) -> std::vec::IntoIter<usize> {
    list.resize(width, 0);
    list.into_iter()
}
