//! Plain-text polytope files.
//!
//! ```text
//! 4 3            rows, then 1 + dimension
//! 0 1 0          b a1 ... an, meaning b + a.x >= 0
//! 0 0 1
//! 1 -1 0
//! 1 0 -1
//! linearity 1 2  optional: rows 2 (1-based) are equalities
//! ```
//!
//! A vertex file starts with a line `vrep`, followed by the same header and
//! rows `1 v1 ... vn`. Entries are integers or `p/q`. Blank lines and lines
//! starting with `#` are skipped.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use integrale_core::polyhedra::{Halfspace, HalfspaceRep, VertexRep};
use integrale_core::{GeometryError, Rational};
use num_traits::One;

/// What a polytope file describes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolytopeFile {
    Halfspaces(HalfspaceRep),
    Vertices(VertexRep),
}

impl PolytopeFile {
    pub fn dim(&self) -> usize {
        match self {
            Self::Halfspaces(h) => h.dim(),
            Self::Vertices(v) => v.dim(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid polytope: {0}")]
    Geometry(#[from] GeometryError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

fn parse_rational(token: &str, line: usize) -> Result<Rational, FormatError> {
    if token.contains("/-") || token.contains("/+") {
        return Err(syntax(line, format!("bad number '{token}'")));
    }
    Rational::from_str(token).map_err(|_| syntax(line, format!("bad number '{token}'")))
}

fn parse_count(token: Option<&str>, line: usize, what: &str) -> Result<usize, FormatError> {
    let t = token.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    t.parse()
        .map_err(|_| syntax(line, format!("{what} must be a non-negative integer, found '{t}'")))
}

/// Parses a polytope file, detecting the vertex form by its `vrep` marker.
pub fn parse_polytope(text: &str) -> Result<PolytopeFile, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .peekable();

    let is_vrep = lines.peek().is_some_and(|(_, l)| l.eq_ignore_ascii_case("vrep"));
    if is_vrep {
        lines.next();
    }

    let (hline, header) = lines.next().ok_or_else(|| syntax(1, "empty file"))?;
    let mut head = header.split_whitespace();
    let m = parse_count(head.next(), hline, "row count")?;
    let cols = parse_count(head.next(), hline, "column count")?;
    if head.next().is_some() {
        return Err(syntax(hline, "header has more than two numbers"));
    }
    if cols == 0 {
        return Err(syntax(hline, "column count must be at least 1"));
    }
    let dim = cols - 1;

    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| syntax(hline, format!("expected {m} rows")))?;
        let entries = l
            .split_whitespace()
            .map(|t| parse_rational(t, ln))
            .collect::<Result<Vec<_>, _>>()?;
        if entries.len() != cols {
            return Err(syntax(ln, format!("expected {cols} entries, found {}", entries.len())));
        }
        rows.push((ln, entries));
    }

    let mut equalities = BTreeSet::new();
    if let Some((ln, l)) = lines.next() {
        let mut parts = l.split_whitespace();
        if parts.next() != Some("linearity") {
            return Err(syntax(ln, format!("unexpected line '{l}'")));
        }
        if is_vrep {
            return Err(syntax(ln, "a vertex file cannot have a linearity line"));
        }
        let k = parse_count(parts.next(), ln, "linearity count")?;
        for _ in 0..k {
            let i = parse_count(parts.next(), ln, "row index")?;
            if i == 0 || i > m {
                return Err(syntax(ln, format!("row index {i} out of range 1..={m}")));
            }
            equalities.insert(i - 1);
        }
        if parts.next().is_some() {
            return Err(syntax(ln, format!("linearity line lists more than {k} rows")));
        }
    }
    if let Some((ln, l)) = lines.next() {
        return Err(syntax(ln, format!("unexpected line '{l}'")));
    }

    if is_vrep {
        let mut vertices = Vec::with_capacity(m);
        for (ln, r) in rows {
            if !r[0].is_one() {
                return Err(syntax(ln, "vertex rows must start with 1"));
            }
            vertices.push(r[1..].to_vec());
        }
        Ok(PolytopeFile::Vertices(VertexRep::new(dim, vertices)?))
    } else {
        let rows = rows
            .into_iter()
            .map(|(_, r)| Halfspace::new(r[0].clone(), r[1..].to_vec()))
            .collect();
        Ok(PolytopeFile::Halfspaces(HalfspaceRep::new(dim, rows, equalities)?))
    }
}

/// Writes `h` in the halfspace file format.
pub fn write_hrep(h: &HalfspaceRep) -> String {
    let mut out = format!("{} {}\n", h.rows().len(), h.dim() + 1);
    for row in h.rows() {
        let _ = writeln!(out, "{row}");
    }
    if !h.equalities().is_empty() {
        let _ = write!(out, "linearity {}", h.equalities().len());
        for i in h.equalities() {
            let _ = write!(out, " {}", i + 1);
        }
        out.push('\n');
    }
    out
}

/// Writes `v` in the vertex file format.
pub fn write_vrep(v: &VertexRep) -> String {
    let mut out = format!("vrep\n{} {}\n", v.vertices().len(), v.dim() + 1);
    for p in v.vertices() {
        out.push('1');
        for x in p {
            let _ = write!(out, " {x}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn halfspace_file() {
        let text = "4 3\n0 1 0\n0 0 1\n1 -1 0\n1 0 -1\n";
        let PolytopeFile::Halfspaces(h) = parse_polytope(text).unwrap() else {
            panic!("expected halfspaces");
        };
        assert_eq!(h.dim(), 2);
        assert_eq!(h.rows().len(), 4);
        assert_eq!(h.rows()[2].offset, q(1, 1));
        assert_eq!(parse_polytope(&write_hrep(&h)).unwrap(), PolytopeFile::Halfspaces(h));
    }

    #[test]
    fn linearity_and_fractions() {
        let text = "# x + y = 1/2 with x, y >= 0\n3 3\n-1/2 1 1\n0 1 0\n0 0 1\nlinearity 1 1\n";
        let PolytopeFile::Halfspaces(h) = parse_polytope(text).unwrap() else {
            panic!("expected halfspaces");
        };
        assert!(h.is_equality(0));
        assert_eq!(h.rows()[0].offset, q(-1, 2));
        assert_eq!(parse_polytope(&write_hrep(&h)).unwrap(), PolytopeFile::Halfspaces(h));
    }

    #[test]
    fn vertex_file() {
        let text = "vrep\n3 3\n1 0 0\n1 1/2 0\n1 0 1/2\n";
        let PolytopeFile::Vertices(v) = parse_polytope(text).unwrap() else {
            panic!("expected vertices");
        };
        assert_eq!(v.vertices().len(), 3);
        assert!(v.vertices().contains(&vec![q(1, 2), q(0, 1)]));
        assert_eq!(parse_polytope(&write_vrep(&v)).unwrap(), PolytopeFile::Vertices(v));
    }

    #[test]
    fn malformed_files() {
        let err = |t: &str| parse_polytope(t).unwrap_err();
        assert_eq!(err("2 3\n0 1 0\n"), syntax(1, "expected 2 rows"));
        assert_eq!(err("1 3\n0 1\n"), syntax(2, "expected 3 entries, found 2"));
        assert!(matches!(err("1 2\n0 x\n"), FormatError::Syntax { line: 2, .. }));
        assert!(matches!(err("1 2\n0 1/0\n"), FormatError::Syntax { line: 2, .. }));
        assert!(matches!(err("1 2\n1 1\nlinearity 1 2\n"), FormatError::Syntax { line: 3, .. }));
        assert!(matches!(err("vrep\n1 2\n2 1\n"), FormatError::Syntax { line: 3, .. }));
        assert!(matches!(err("1 2\n1 1\nextra\n"), FormatError::Syntax { line: 3, .. }));
        assert_eq!(err(""), syntax(1, "empty file"));
    }
}
