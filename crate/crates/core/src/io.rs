//! Text formats: colorings, edge lists (family directories) and certificates.
//! All formats are 1-indexed on disk and 0-indexed in memory.
//!
//! Coloring:
//! ```text
//! n <N>
//! <N-1 chars from {R,B}: colors of (1,2), (1,3), ..., (1,N)>
//! <N-2 chars: colors of (2,3), ..., (2,N)>
//! ...
//! ```
//!
//! Certificate:
//! ```text
//! certificate n=<N> pieces=<P>
//! piece <id> color=<R|B> family=<name> n=<m>
//! map 1:<h> 2:<h> ... m:<h>
//! ```

use std::fmt::Write as _;

use crate::certificate::{CertificatePiece, PartitionCertificate};
use crate::error::{Error, Result};
use crate::graph::{Color, ColoredCompleteGraph, Graph};

pub fn write_coloring(g: &ColoredCompleteGraph) -> String {
    let n = g.vertex_count();
    let mut out = format!("n {n}\n");
    for i in 0..n.saturating_sub(1) {
        for j in i + 1..n {
            out.push(g.color(i, j).as_char());
        }
        out.push('\n');
    }
    out
}

pub fn read_coloring(text: &str) -> Result<ColoredCompleteGraph> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end_matches('\r')));
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty coloring file"))?;
    let n = header
        .strip_prefix("n ")
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::parse(1, format!("expected `n <N>` with N >= 1, got `{header}`")))?;
    let mut rows: Vec<Vec<Color>> = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| Error::parse(i + 1, format!("missing row for vertex {i}")))?;
        if line.chars().count() != n - i {
            return Err(Error::parse(
                lineno,
                format!("row {i} must have {} characters, found {}", n - i, line.chars().count()),
            ));
        }
        let row = line
            .chars()
            .map(|c| Color::from_char(c).ok_or_else(|| Error::parse(lineno, format!("invalid color character `{c}`"))))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    if let Some((lineno, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::parse(lineno, format!("unexpected trailing line `{extra}`")));
    }
    ColoredCompleteGraph::from_fn(n, |u, v| rows[u][v - u - 1])
}

/// `<n> <m>` then `m` lines `<u> <v>`.
pub fn write_edges(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", u + 1, v + 1);
    }
    out
}

pub fn read_edges(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty edge file"))?;
    let nums = |lineno: usize, s: &str| -> Result<(usize, usize)> {
        let mut it = s.split_whitespace().map(str::parse::<usize>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
            _ => Err(Error::parse(lineno, format!("expected two integers, got `{s}`"))),
        }
    };
    let (n, m) = nums(hl, header)?;
    let mut g = Graph::empty(n);
    let mut count = 0;
    for (lineno, line) in lines {
        let (u, v) = nums(lineno, line)?;
        if u == 0 || v == 0 {
            return Err(Error::parse(lineno, "vertices are 1-indexed"));
        }
        g.add_edge(u - 1, v - 1).map_err(|e| Error::parse(lineno, e.to_string()))?;
        count += 1;
    }
    if count != m {
        return Err(Error::parse(hl, format!("header promises {m} edges, found {count}")));
    }
    Ok(g)
}

pub fn write_certificate(cert: &PartitionCertificate) -> String {
    let mut out = format!("certificate n={} pieces={}\n", cert.host_n, cert.pieces.len());
    for (id, p) in cert.pieces.iter().enumerate() {
        let _ = writeln!(
            out,
            "piece {} color={} family={} n={}",
            id + 1,
            p.color.as_char(),
            p.family,
            p.n
        );
        out.push_str("map");
        for &(f, h) in &p.pairs {
            let _ = write!(out, " {}:{}", f + 1, h + 1);
        }
        out.push('\n');
    }
    out
}

fn field<'a>(lineno: usize, token: Option<&'a str>, key: &str) -> Result<&'a str> {
    token
        .and_then(|t| t.strip_prefix(key))
        .and_then(|t| t.strip_prefix('='))
        .ok_or_else(|| Error::parse(lineno, format!("expected `{key}=...`")))
}

fn number(lineno: usize, s: &str) -> Result<usize> {
    s.parse::<usize>()
        .map_err(|_| Error::parse(lineno, format!("`{s}` is not a nonnegative integer")))
}

/// Parses the certificate format. Only syntax is checked here; disjointness,
/// bijectivity and colors are the verifier's job.
pub fn read_certificate(text: &str) -> Result<PartitionCertificate> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "empty certificate"))?;
    let mut tok = header.split_whitespace();
    if tok.next() != Some("certificate") {
        return Err(Error::parse(hl, "expected `certificate n=<N> pieces=<P>`"));
    }
    let host_n = number(hl, field(hl, tok.next(), "n")?)?;
    let count = number(hl, field(hl, tok.next(), "pieces")?)?;
    let mut pieces = Vec::with_capacity(count);
    while let Some((pl, line)) = lines.next() {
        let mut tok = line.split_whitespace();
        if tok.next() != Some("piece") {
            return Err(Error::parse(pl, format!("expected `piece ...`, got `{line}`")));
        }
        let id = number(pl, tok.next().unwrap_or(""))?;
        if id != pieces.len() + 1 {
            return Err(Error::parse(pl, format!("piece ids must run 1..P in order, got {id}")));
        }
        let color = field(pl, tok.next(), "color")?;
        let color = match color {
            "R" => Color::Red,
            "B" => Color::Blue,
            _ => return Err(Error::parse(pl, format!("invalid color `{color}`"))),
        };
        let family = field(pl, tok.next(), "family")?.to_string();
        let n = number(pl, field(pl, tok.next(), "n")?)?;
        if tok.next().is_some() {
            return Err(Error::parse(pl, "trailing tokens after piece header"));
        }
        let (ml, map) = lines
            .next()
            .ok_or_else(|| Error::parse(pl + 1, format!("piece {id} has no map line")))?;
        let mut tok = map.split_whitespace();
        if tok.next() != Some("map") {
            return Err(Error::parse(ml, "expected `map ...`"));
        }
        let mut pairs = Vec::with_capacity(n);
        for t in tok {
            let (f, h) = t
                .split_once(':')
                .ok_or_else(|| Error::parse(ml, format!("expected `<family>:<host>`, got `{t}`")))?;
            let (f, h) = (number(ml, f)?, number(ml, h)?);
            if f == 0 || h == 0 {
                return Err(Error::parse(ml, "vertices are 1-indexed"));
            }
            pairs.push((f - 1, h - 1));
        }
        pieces.push(CertificatePiece { color, family, n, pairs });
    }
    if pieces.len() != count {
        return Err(Error::parse(hl, format!("header promises {count} pieces, found {}", pieces.len())));
    }
    Ok(PartitionCertificate { host_n, pieces })
}
