//! Plain-text edge lists.
//!
//! The first line holds `n m`; each of the following `m` lines holds one edge
//! `u v` with `0 <= u < v < n`. Fields are separated by whitespace and lines
//! end with LF.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn read_edge_list<R: Read>(reader: R) -> Result<Graph> {
    let mut lines = BufReader::new(reader).lines().enumerate();
    let (n, m) = loop {
        let Some((idx, line)) = lines.next() else {
            return Err(Error::Parse { line: 1, message: "missing header".into() });
        };
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        break parse_pair(&line, idx + 1)?;
    };
    if n > u32::MAX as usize {
        return Err(Error::Parse { line: 1, message: format!("vertex count {n} too large") });
    }

    let mut pairs = Vec::with_capacity(m);
    for (idx, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let (u, v) = parse_pair(&line, line_no)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if u > v {
            return Err(Error::Parse { line: line_no, message: format!("edge {u} {v} must be written with u < v") });
        }
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        pairs.push((u as u32, v as u32));
    }
    if pairs.len() != m {
        return Err(Error::Parse { line: 1, message: format!("header declares {m} edges, found {}", pairs.len()) });
    }
    pairs.sort_unstable();
    if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateEdge(w[0].0 as usize, w[0].1 as usize));
    }
    Ok(Graph::from_sorted_pairs(n, &pairs))
}

fn parse_pair(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let mut fields = line.split_whitespace();
    let mut next = || -> Result<usize> {
        let field =
            fields.next().ok_or_else(|| Error::Parse { line: line_no, message: "expected two integers".into() })?;
        field
            .parse()
            .map_err(|_| Error::Parse { line: line_no, message: format!("not a non-negative integer: {field:?}") })
    };
    let pair = (next()?, next()?);
    if fields.next().is_some() {
        return Err(Error::Parse { line: line_no, message: "trailing fields".into() });
    }
    Ok(pair)
}

/// Writes edges in lexicographic order.
pub fn write_edge_list<W: Write>(g: &Graph, writer: W) -> Result<()> {
    let mut w = BufWriter::new(writer);
    writeln!(w, "{} {}", g.n(), g.m())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
    read_edge_list(File::open(path)?)
}

pub fn save_edge_list(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    write_edge_list(g, File::create(path)?)
}
