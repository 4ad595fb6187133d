//! Deterministic text formats: point clouds, polylines and CSV tables.
//!
//! Floats are written with Rust's shortest round-trip formatting, so equal
//! inputs produce byte-identical files.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::necklace::LimitPoint;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("cannot parse {kind} at line {line}: {detail}")]
    Parse {
        kind: &'static str,
        line: usize,
        detail: String,
    },
}

fn join_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Point cloud with radius and address columns: one point per line,
/// whitespace-separated reals, then the bead radius and the address string.
pub fn write_limit_points(w: &mut impl Write, dim: usize, points: &[LimitPoint]) -> io::Result<()> {
    let coords: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    writeln!(w, "# {} radius address", coords.join(" "))?;
    for p in points {
        writeln!(w, "{} {} {}", join_floats(&p.center), p.radius, p.address)?;
    }
    Ok(())
}

/// Bare point cloud: one point per line, whitespace-separated reals.
pub fn write_point_cloud(w: &mut impl Write, dim: usize, points: &[Vec<f64>]) -> io::Result<()> {
    let coords: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    writeln!(w, "# {}", coords.join(" "))?;
    for p in points {
        writeln!(w, "{}", join_floats(p))?;
    }
    Ok(())
}

/// Polyline: ordered vertex list with a closure flag in the header.
pub fn write_polyline(
    w: &mut impl Write,
    vertices: &[Vec<f64>],
    closed: bool,
) -> io::Result<()> {
    let dim = vertices.first().map(Vec::len).unwrap_or(0);
    writeln!(w, "# polyline dim={dim} closed={closed} vertices={}", vertices.len())?;
    for v in vertices {
        writeln!(w, "{}", join_floats(v))?;
    }
    Ok(())
}

/// Read a polyline file back: returns the vertex list and the closure flag.
/// Lines starting with `#` are headers/comments; `closed=` in a header sets
/// the flag (default: open).
pub fn read_polyline(r: impl BufRead) -> Result<(Vec<Vec<f64>>, bool), FormatError> {
    let mut vertices = Vec::new();
    let mut closed = false;
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            for token in rest.split_whitespace() {
                if let Some(value) = token.strip_prefix("closed=") {
                    closed = value == "true" || value == "1";
                }
            }
            continue;
        }
        let coords: Result<Vec<f64>, _> =
            line.split_whitespace().map(str::parse::<f64>).collect();
        match coords {
            Ok(c) if !c.is_empty() => vertices.push(c),
            _ => {
                return Err(FormatError::Parse {
                    kind: "polyline",
                    line: idx + 1,
                    detail: line.to_string(),
                })
            }
        }
    }
    if let Some(first) = vertices.first() {
        if vertices.iter().any(|v| v.len() != first.len()) {
            return Err(FormatError::Parse {
                kind: "polyline",
                line: 0,
                detail: "inconsistent vertex dimensions".into(),
            });
        }
    }
    Ok((vertices, closed))
}

/// Comma-separated table with a header row.
pub fn write_csv<W: Write>(
    w: &mut W,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> io::Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}
