//! Line-oriented edge-list format.
//!
//! ```text
//! # comment
//! n 4
//! 0 1
//! 1 2 3/2
//! 2 3 0.25
//! ```
//!
//! The header `n <count>` must precede the edges. Weights may be integers,
//! `p/q` fractions or finite decimals; a missing weight means 1.

use std::collections::HashSet;
use std::io::BufRead;

use num_integer::Integer;
use num_traits::Zero;

use super::{EdgeStream, Weight, WeightedEdge};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    /// Largest admissible reduced denominator.
    pub max_denominator: i128,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            max_denominator: 1 << 20,
        }
    }
}

pub fn parse_edge_list(text: &str) -> Result<EdgeStream> {
    parse_edge_list_with(text, ParseOptions::default())
}

pub fn parse_edge_list_with(text: &str, options: ParseOptions) -> Result<EdgeStream> {
    let mut reader = EdgeReader::with_options(text.as_bytes(), options)?;
    let n = reader.n();
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    while let Some(item) = reader.next() {
        let e = item?;
        if !seen.insert(e.key()) {
            return Err(Error::parse(
                reader.line(),
                format!("duplicate pair {} {}", e.key().0, e.key().1),
            ));
        }
        edges.push(e);
    }
    Ok(EdgeStream { n, edges })
}

/// Canonical text form: header, then edges in arrival order.
pub fn serialize_edge_list(stream: &EdgeStream) -> String {
    let mut out = format!("n {}\n", stream.n);
    for e in &stream.edges {
        out.push_str(&format!("{} {} {}\n", e.u, e.v, e.w));
    }
    out
}

/// Forward-only reader over an edge list.
///
/// Validates syntax, range, self-loops and weights line by line. Duplicate
/// pairs are not detected here since that needs memory linear in the stream;
/// [`parse_edge_list`] adds the check.
pub struct EdgeReader<R> {
    input: R,
    n: usize,
    line: usize,
    buf: String,
    options: ParseOptions,
}

impl<R: BufRead> EdgeReader<R> {
    pub fn new(input: R) -> Result<Self> {
        Self::with_options(input, ParseOptions::default())
    }

    pub fn with_options(input: R, options: ParseOptions) -> Result<Self> {
        let mut reader = EdgeReader {
            input,
            n: 0,
            line: 0,
            buf: String::new(),
            options,
        };
        let header = reader
            .next_content_line()?
            .ok_or_else(|| Error::parse(reader.line.max(1), "missing header `n <count>`"))?;
        let mut parts = header.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some("n"), Some(count), None) => {
                reader.n = count.parse().map_err(|_| {
                    Error::parse(reader.line, format!("bad vertex count `{count}`"))
                })?;
            }
            _ => return Err(Error::parse(reader.line, "expected header `n <count>`")),
        }
        Ok(reader)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Line number of the most recently read line (1-based).
    pub fn line(&self) -> usize {
        self.line
    }

    fn next_content_line(&mut self) -> Result<Option<String>> {
        loop {
            self.buf.clear();
            let read = self
                .input
                .read_line(&mut self.buf)
                .map_err(|e| Error::parse(self.line + 1, e.to_string()))?;
            if read == 0 {
                return Ok(None);
            }
            self.line += 1;
            let content = self.buf.split('#').next().unwrap_or("").trim();
            if !content.is_empty() {
                return Ok(Some(content.to_string()));
            }
        }
    }

    fn parse_edge(&self, content: &str) -> Result<WeightedEdge> {
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::parse(
                self.line,
                format!("expected `u v [w]`, got `{content}`"),
            ));
        }
        let vertex = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(self.line, format!("bad vertex id `{s}`")))
        };
        let u = vertex(fields[0])?;
        let v = vertex(fields[1])?;
        let w = match fields.get(2) {
            Some(s) => parse_weight(s, self.options.max_denominator)
                .map_err(|m| Error::parse(self.line, m))?,
            None => Weight::from_integer(1),
        };
        let edge = WeightedEdge::new(u, v, w);
        edge.validate(self.n)
            .map_err(|m| Error::parse(self.line, m))?;
        Ok(edge)
    }
}

impl<R: BufRead> Iterator for EdgeReader<R> {
    type Item = Result<WeightedEdge>;

    fn next(&mut self) -> Option<Self::Item> {
        match self.next_content_line() {
            Ok(Some(content)) => Some(self.parse_edge(&content)),
            Ok(None) => None,
            Err(e) => Some(Err(e)),
        }
    }
}

pub(crate) fn parse_weight(s: &str, max_denominator: i128) -> std::result::Result<Weight, String> {
    let bad = || format!("bad weight `{s}`");
    let w = if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.parse().map_err(|_| bad())?;
        let q: i128 = q.parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Weight::new(p, q)
    } else if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: i128 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let scale = 10i128.pow(frac.len() as u32);
        let frac: i128 = frac.parse().map_err(|_| bad())?;
        let num = int.abs() * scale + frac;
        Weight::new(if negative { -num } else { num }, scale)
    } else {
        Weight::from_integer(s.parse().map_err(|_| bad())?)
    };
    if w < Weight::zero() {
        return Err(format!("negative weight {w}"));
    }
    if w.is_zero() {
        return Err("zero weight".to_string());
    }
    if w.denom().abs() > max_denominator {
        return Err(format!(
            "weight {w} has denominator above the bound {max_denominator}"
        ));
    }
    debug_assert!(w.numer().gcd(w.denom()) == 1);
    Ok(w)
}
