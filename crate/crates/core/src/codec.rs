//! Text codec shared by tree codes, permutations and lattice points:
//! `"n:t0,t1,...,t(n-1)"` with plain decimal entries.
//!
//! The grammar is strict (no whitespace, no sign, no leading zeros) so that
//! parsing and printing are inverse to each other byte for byte.

use crate::error::{Error, Result};

/// Print a table in `n:t0,...,t(n-1)` form.
pub fn format_table(table: &[usize]) -> String {
    let mut out = format!("{}:", table.len());
    for (i, v) in table.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&v.to_string());
    }
    out
}

/// Parse `n:t0,...,t(n-1)` into its entries. Entries are not range-checked
/// here; callers validate against their own invariants. Columns in errors
/// are 1-based.
pub fn parse_table(text: &str) -> Result<Vec<usize>> {
    let colon = text.find(':').ok_or_else(|| Error::Parse {
        column: text.len() + 1,
        message: "missing ':' after modulus".into(),
    })?;
    let n = parse_number(&text[..colon], 1)?;
    if n == 0 {
        return Err(Error::Parse {
            column: 1,
            message: "modulus must be at least 1".into(),
        });
    }
    let mut entries = Vec::with_capacity(n);
    let mut column = colon + 2;
    for field in text[colon + 1..].split(',') {
        entries.push(parse_number(field, column)?);
        column += field.len() + 1;
    }
    if entries.len() != n {
        return Err(Error::Parse {
            column: text.len() + 1,
            message: format!("expected {n} entries, found {}", entries.len()),
        });
    }
    Ok(entries)
}

fn parse_number(field: &str, column: usize) -> Result<usize> {
    if field.is_empty() {
        return Err(Error::Parse {
            column,
            message: "empty entry".into(),
        });
    }
    if let Some(pos) = field.bytes().position(|b| !b.is_ascii_digit()) {
        return Err(Error::Parse {
            column: column + pos,
            message: format!("unexpected character {:?}", field[pos..].chars().next().unwrap()),
        });
    }
    if field.len() > 1 && field.starts_with('0') {
        return Err(Error::Parse {
            column,
            message: "leading zero".into(),
        });
    }
    field.parse().map_err(|_| Error::Parse {
        column,
        message: "number too large".into(),
    })
}
