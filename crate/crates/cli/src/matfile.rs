//! Text format for 4×4 complex matrices: four rows of four whitespace
//! separated `a+bi` / `a-bi` entries. Lines starting with `#` and blank lines
//! are ignored.

use qtwm_core::{ComplexMatrix, C64};

use crate::error::CliError;

fn parse_entry(tok: &str) -> Option<C64> {
    let body = tok.strip_suffix('i')?;
    // The imaginary part starts at the last sign that is not a leading sign
    // or part of an exponent.
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'))?;
    let re: f64 = body[..split].parse().ok()?;
    let im: f64 = body[split..].parse().ok()?;
    let is_number = |s: &str| s.trim_start_matches(['+', '-']).starts_with(|c: char| c.is_ascii_digit() || c == '.');
    if !is_number(&body[..split]) || !is_number(&body[split..]) || !re.is_finite() || !im.is_finite() {
        return None;
    }
    Some(C64::new(re, im))
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, CliError> {
    let mut data = Vec::with_capacity(16);
    let mut rows = 0;
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let lineno = lineno + 1;
        rows += 1;
        if rows > 4 {
            return Err(CliError::Input(format!("line {lineno}: more than 4 matrix rows")));
        }
        let mut count = 0;
        let mut offset = 0;
        for tok in line.split_whitespace() {
            let col = line[offset..].find(tok).map_or(offset, |i| offset + i) + 1;
            offset = col - 1 + tok.len();
            count += 1;
            if count > 4 {
                return Err(CliError::Input(format!("line {lineno}, column {col}: more than 4 entries in a row")));
            }
            let z = parse_entry(tok).ok_or_else(|| {
                CliError::Input(format!("line {lineno}, column {col}: `{tok}` is not of the form a+bi or a-bi"))
            })?;
            data.push(z);
        }
        if count < 4 {
            return Err(CliError::Input(format!("line {lineno}: expected 4 entries, found {count}")));
        }
    }
    if rows < 4 {
        return Err(CliError::Input(format!("expected 4 matrix rows, found {rows}")));
    }
    ComplexMatrix::new(4, 4, data).map_err(|e| CliError::Input(e.to_string()))
}

pub fn format_matrix(m: &ComplexMatrix) -> String {
    let mut s = String::new();
    for i in 0..m.dim() {
        let row: Vec<String> = (0..m.dim())
            .map(|j| {
                let z = m[(i, j)];
                format!("{}{}{}i", z.re, if z.im.is_sign_negative() { "-" } else { "+" }, z.im.abs())
            })
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}
