//! alist parity-check files.
//!
//! ```text
//! n m
//! max_column_degree max_row_degree
//! <n column degrees>
//! <m row degrees>
//! <n lines: 1-based row indices of each column>
//! <m lines: 1-based column indices of each row>
//! ```
//!
//! Column and row lists may carry trailing `0` padding up to the maximum
//! degree; a `0` inside the declared degree is an error.

use std::fmt::Write as _;
use std::path::Path;

use super::{LinearCode, SparseParityCheck};
use crate::error::{Error, Result};

pub fn read_alist(path: impl AsRef<Path>) -> Result<LinearCode> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    LinearCode::from_sparse(parse_alist(&text)?)
}

pub fn write_alist(code: &LinearCode, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_alist_string(code.sparse())).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn to_alist_string(h: &SparseParityCheck) -> String {
    let join = |xs: &mut dyn Iterator<Item = usize>| xs.map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let col_deg: Vec<usize> = h.vars().iter().map(Vec::len).collect();
    let row_deg: Vec<usize> = h.checks().iter().map(Vec::len).collect();
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", h.n(), h.num_checks());
    let _ = writeln!(
        out,
        "{} {}",
        col_deg.iter().max().copied().unwrap_or(0),
        row_deg.iter().max().copied().unwrap_or(0)
    );
    let _ = writeln!(out, "{}", join(&mut col_deg.iter().copied()));
    let _ = writeln!(out, "{}", join(&mut row_deg.iter().copied()));
    for checks in h.vars() {
        let _ = writeln!(out, "{}", join(&mut checks.iter().map(|c| c + 1)));
    }
    for vars in h.checks() {
        let _ = writeln!(out, "{}", join(&mut vars.iter().map(|v| v + 1)));
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Alist {
            line: self.last,
            message: message.into(),
        }
    }

    /// Next line's whitespace-separated integers. Blank lines count as empty
    /// lists only where a list is expected, so callers decide.
    fn numbers(&mut self, what: &str) -> Result<Vec<usize>> {
        let Some((i, line)) = self.inner.next() else {
            return Err(Error::Alist {
                line: self.last + 1,
                message: format!("unexpected end of file, expected {what}"),
            });
        };
        self.last = i + 1;
        line.split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| self.err(format!("{tok:?} is not a non-negative integer ({what})")))
            })
            .collect()
    }

    fn exactly(&mut self, count: usize, what: &str) -> Result<Vec<usize>> {
        let xs = self.numbers(what)?;
        if xs.len() != count {
            return Err(self.err(format!("expected {count} values for {what}, found {}", xs.len())));
        }
        Ok(xs)
    }

    /// An index list of declared length `degree`, entries in `1..=bound`,
    /// optionally zero-padded. Returns 0-based indices.
    fn index_list(&mut self, degree: usize, bound: usize, what: &str) -> Result<Vec<usize>> {
        let xs = self.numbers(what)?;
        if xs.len() < degree {
            return Err(self.err(format!("{what}: degree {degree} but only {} entries", xs.len())));
        }
        let (entries, padding) = xs.split_at(degree);
        if padding.iter().any(|&p| p != 0) {
            return Err(self.err(format!("{what}: more nonzero entries than the declared degree {degree}")));
        }
        let mut out = Vec::with_capacity(degree);
        for &x in entries {
            if x == 0 || x > bound {
                return Err(self.err(format!("{what}: index {x} outside 1..={bound}")));
            }
            if out.contains(&(x - 1)) {
                return Err(self.err(format!("{what}: index {x} repeated")));
            }
            out.push(x - 1);
        }
        Ok(out)
    }
}

pub fn parse_alist(text: &str) -> Result<SparseParityCheck> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };
    let header = lines.exactly(2, "n m")?;
    let (n, m) = (header[0], header[1]);
    if n == 0 {
        return Err(lines.err("block length n must be positive"));
    }
    let maxes = lines.exactly(2, "maximum degrees")?;
    let col_deg = lines.exactly(n, "column degrees")?;
    let row_deg = lines.exactly(m, "row degrees")?;
    if col_deg.iter().max().copied().unwrap_or(0) > maxes[0] || row_deg.iter().max().copied().unwrap_or(0) > maxes[1] {
        return Err(lines.err("a degree exceeds the declared maximum"));
    }
    if col_deg.iter().sum::<usize>() != row_deg.iter().sum::<usize>() {
        return Err(lines.err("column and row degree totals differ"));
    }
    let mut cols = Vec::with_capacity(n);
    for (j, &d) in col_deg.iter().enumerate() {
        cols.push(lines.index_list(d, m, &format!("column {}", j + 1))?);
    }
    let mut rows = Vec::with_capacity(m);
    for (i, &d) in row_deg.iter().enumerate() {
        rows.push(lines.index_list(d, n, &format!("row {}", i + 1))?);
    }
    for (j, checks) in cols.iter().enumerate() {
        for &i in checks {
            if !rows[i].contains(&j) {
                return Err(Error::Alist {
                    line: lines.last,
                    message: format!("column {} lists row {} but that row omits the column", j + 1, i + 1),
                });
            }
        }
    }
    for row in &mut rows {
        row.sort_unstable();
    }
    SparseParityCheck::from_checks(n, rows)
}
