//! Line-oriented text format.
//!
//! ```text
//! n m
//! id u v length [mass_u mass_v]
//! ```
//!
//! One line per edge. Mass columns appear on every line or on none; a plain
//! [`Multigraph`] omits the length column as well. Floats are written in
//! shortest round-trip form, so reading back is bit-exact. Blank lines and
//! lines starting with `#` are ignored.

use std::fmt::Write as _;

use super::{EdgeLengthGraph, Multigraph};
use crate::{Error, Result};

pub fn write_multigraph(g: &Multigraph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.num_edges());
    for e in g.edges() {
        writeln!(s, "{} {} {}", e.id, e.u, e.v).unwrap();
    }
    s
}

pub fn write_edge_length_graph(g: &EdgeLengthGraph) -> Result<String> {
    let mut s = format!("{} {}\n", g.n(), g.edges().len());
    if let Some(m) = g.masses() {
        let deg = g.graph().degrees();
        if let Some(v) = (0..g.n()).find(|&v| deg[v] == 0 && m[v] != 0.0) {
            return Err(Error::Domain(format!("isolated vertex {v} carries mass and cannot be written")));
        }
    }
    for (e, l) in g.edge_lengths() {
        write!(s, "{} {} {} {}", e.id, e.u, e.v, l).unwrap();
        if let Some(m) = g.masses() {
            write!(s, " {} {}", m[e.u], m[e.v]).unwrap();
        }
        s.push('\n');
    }
    Ok(s)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.split_whitespace().collect()))
}

fn parse<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse { line, msg: format!("cannot parse {tok:?}") })
}

fn header<'a>(lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>) -> Result<(usize, usize)> {
    let (line, toks) = lines.next().ok_or(Error::Parse { line: 0, msg: "missing header".into() })?;
    if toks.len() != 2 {
        return Err(Error::Parse { line, msg: "header must be `n m`".into() });
    }
    Ok((parse(toks[0], line)?, parse(toks[1], line)?))
}

pub fn read_multigraph(text: &str) -> Result<Multigraph> {
    let mut lines = content_lines(text);
    let (n, m) = header(&mut lines)?;
    let mut g = Multigraph::new(n);
    for (line, toks) in lines {
        if toks.len() != 3 {
            return Err(Error::Parse { line, msg: "expected `id u v`".into() });
        }
        g.add_edge_with_id(parse(toks[0], line)?, parse(toks[1], line)?, parse(toks[2], line)?)
            .map_err(|e| Error::Parse { line, msg: e.to_string() })?;
    }
    if g.num_edges() != m {
        return Err(Error::Parse { line: 1, msg: format!("header announces {m} edges, found {}", g.num_edges()) });
    }
    Ok(g)
}

pub fn read_edge_length_graph(text: &str) -> Result<EdgeLengthGraph> {
    let mut lines = content_lines(text);
    let (n, m) = header(&mut lines)?;
    let mut g = EdgeLengthGraph::new(n);
    let mut masses: Option<Vec<Option<f64>>> = None;
    let mut with_mass = None;
    for (line, toks) in lines {
        let has_mass = match toks.len() {
            4 => false,
            6 => true,
            _ => return Err(Error::Parse { line, msg: "expected `id u v length [mass_u mass_v]`".into() }),
        };
        if *with_mass.get_or_insert(has_mass) != has_mass {
            return Err(Error::Parse { line, msg: "mass columns must appear on every line or none".into() });
        }
        let (id, u, v): (usize, usize, usize) = (parse(toks[0], line)?, parse(toks[1], line)?, parse(toks[2], line)?);
        let l: f64 = parse(toks[3], line)?;
        g.add_edge_with_id(id, u, v, l).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        if has_mass {
            let ms = masses.get_or_insert_with(|| vec![None; n]);
            for (x, tok) in [(u, toks[4]), (v, toks[5])] {
                let val: f64 = parse(tok, line)?;
                match ms[x] {
                    Some(prev) if prev.to_bits() != val.to_bits() => {
                        return Err(Error::Parse { line, msg: format!("inconsistent mass for vertex {x}") })
                    }
                    _ => ms[x] = Some(val),
                }
            }
        }
    }
    if g.edges().len() != m {
        return Err(Error::Parse { line: 1, msg: format!("header announces {m} edges, found {}", g.edges().len()) });
    }
    if let Some(ms) = masses {
        g.set_masses(ms.into_iter().map(|x| x.unwrap_or(0.0)).collect())
            .map_err(|e| Error::Parse { line: 0, msg: e.to_string() })?;
    }
    Ok(g)
}
