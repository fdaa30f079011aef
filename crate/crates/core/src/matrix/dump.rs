//! Coordinate-format text dumps: a `# rows=<n> cols=<m>` header followed by
//! `row col value` lines.

use std::io::{BufRead, Write};

use sprs::TriMat;

use crate::error::{Error, Result};
use crate::matrix::relation::SparseMatrix;

pub fn write_coo(mut out: impl Write, m: &SparseMatrix) -> Result<()> {
    writeln!(out, "# rows={} cols={}", m.rows(), m.cols())?;
    let mut entries: Vec<(usize, usize, f64)> = m.iter().map(|(&v, (r, c))| (r, c, v)).collect();
    entries.sort_by_key(|&(r, c, _)| (r, c));
    for (r, c, v) in entries {
        writeln!(out, "{r} {c} {v}")?;
    }
    Ok(())
}

pub fn read_coo(input: impl BufRead) -> Result<SparseMatrix> {
    let bad = |line: usize, message: String| Error::Parse {
        file: "<coo>".into(),
        line,
        message,
    };
    let mut lines = input.lines().enumerate();
    let (rows, cols) = loop {
        let Some((i, line)) = lines.next() else {
            return Err(bad(0, "missing header".into()));
        };
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let header = line
            .strip_prefix("# rows=")
            .and_then(|s| s.split_once(" cols="))
            .and_then(|(r, c)| Some((r.parse().ok()?, c.trim().parse().ok()?)));
        break header.ok_or_else(|| bad(i + 1, format!("bad header {line:?}")))?;
    };
    let mut tri = TriMat::new((rows, cols));
    for (i, line) in lines {
        let line = line?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let parsed = (f.len() == 3)
            .then(|| Some((f[0].parse().ok()?, f[1].parse().ok()?, f[2].parse().ok()?)))
            .flatten();
        let (r, c, v): (usize, usize, f64) =
            parsed.ok_or_else(|| bad(i + 1, format!("expected `row col value`, got {line:?}")))?;
        if r >= rows || c >= cols {
            return Err(bad(i + 1, format!("entry ({r}, {c}) outside {rows}x{cols}")));
        }
        tri.add_triplet(r, c, v);
    }
    Ok(tri.to_csr())
}
