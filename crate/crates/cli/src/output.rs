//! CSV and JSON dataset emission.

use std::io::Write;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::eval::Row;
use crate::spec::Protocol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

const VALUE_COLUMNS: [&str; 7] = ["q_opt", "f", "F", "P_succ", "f_baseline", "F_baseline", "classical"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub protocol: String,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

impl Dataset {
    pub fn new(protocol: Protocol, rows: Vec<Row>) -> Self {
        let columns = protocol.params().iter().chain(VALUE_COLUMNS.iter()).map(|s| s.to_string()).collect();
        Self { protocol: protocol.name().to_string(), columns, rows }
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)
            }
        }
    }

    fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        let n_params = self.columns.len() - VALUE_COLUMNS.len();
        for row in &self.rows {
            let mut cells: Vec<String> = self.columns[..n_params].iter().map(|c| fmt_g(row.params[c])).collect();
            cells.push(row.q_opt.map(fmt_g).unwrap_or_default());
            for v in [row.f, row.fidelity, row.p_succ, row.f_baseline, row.fidelity_baseline] {
                cells.push(fmt_g(v));
            }
            cells.push(row.classical.to_string());
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Twelve significant digits, `%g` style: fixed notation for exponents in
/// `[-4, 12)`, scientific otherwise, trailing zeros dropped.
pub fn fmt_g(x: f64) -> String {
    const DIGITS: usize = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..DIGITS as i32).contains(&exp) {
        let decimals = (DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
