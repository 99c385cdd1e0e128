//! Sweep specifications: protocol, grid axes and pinned parameters.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Protocol {
    Case1,
    Case1Baseline,
    Case1BobOnly,
    Case2,
    Case2Baseline,
    Werner,
    Badziag,
}

impl Protocol {
    /// Parameter names in column order.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            Protocol::Case1 => &["D2", "p2"],
            Protocol::Case1Baseline | Protocol::Case1BobOnly => &["D2"],
            Protocol::Case2 => &["D", "p"],
            Protocol::Case2Baseline | Protocol::Badziag => &["D"],
            Protocol::Werner => &["gamma", "D2", "p2"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Case1 => "case1",
            Protocol::Case1Baseline => "case1-baseline",
            Protocol::Case1BobOnly => "case1-bob-only",
            Protocol::Case2 => "case2",
            Protocol::Case2Baseline => "case2-baseline",
            Protocol::Werner => "werner",
            Protocol::Badziag => "badziag",
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Protocol as ValueEnum>::from_str(s, false)
    }
}

fn parse_unit(name: &str, text: &str) -> Result<f64, String> {
    let v: f64 = text.trim().parse().map_err(|_| format!("{name}: `{text}` is not a number"))?;
    if !(0.0..=1.0).contains(&v) {
        return Err(format!("{name}: {v} is outside [0, 1]"));
    }
    Ok(v)
}

/// `PARAM=min:max:steps`, inclusive of both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct GridAxis {
    pub param: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl GridAxis {
    pub fn values(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..self.steps)
            .map(|i| if i == n { self.max } else { self.min + (self.max - self.min) * i as f64 / n as f64 })
            .collect()
    }
}

impl FromStr for GridAxis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (param, range) = s.split_once('=').ok_or_else(|| format!("`{s}`: expected PARAM=MIN:MAX:STEPS"))?;
        let parts: Vec<&str> = range.split(':').collect();
        let [min, max, steps] = parts[..] else {
            return Err(format!("`{s}`: expected PARAM=MIN:MAX:STEPS"));
        };
        let param = param.trim().to_string();
        let min = parse_unit(&format!("{param} min"), min)?;
        let max = parse_unit(&format!("{param} max"), max)?;
        if min > max {
            return Err(format!("{param}: min {min} exceeds max {max}"));
        }
        let steps: usize = steps.trim().parse().map_err(|_| format!("{param}: steps `{steps}` is not an integer"))?;
        if steps < 2 {
            return Err(format!("{param}: steps must be at least 2, got {steps}"));
        }
        Ok(Self { param, min, max, steps })
    }
}

/// `PARAM=value`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pin {
    pub param: String,
    pub value: f64,
}

impl FromStr for Pin {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (param, value) = s.split_once('=').ok_or_else(|| format!("`{s}`: expected PARAM=VALUE"))?;
        let param = param.trim().to_string();
        let value = parse_unit(&param, value)?;
        Ok(Self { param, value })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub protocol: Protocol,
    pub grid: Vec<GridAxis>,
    pub fixed: Vec<Pin>,
}

/// One parameter assignment, keyed by name.
pub type Point = BTreeMap<String, f64>;

impl SweepSpec {
    /// Check that swept and pinned parameters are disjoint, known to the
    /// protocol, and together cover all of its parameters.
    pub fn new(protocol: Protocol, grid: Vec<GridAxis>, fixed: Vec<Pin>) -> Result<Self, CliError> {
        let names =
            grid.iter().map(|a| ("--grid", a.param.as_str())).chain(fixed.iter().map(|p| ("--fix", p.param.as_str())));
        check_names(protocol, names)?;
        if grid.is_empty() {
            return Err(CliError::Usage("a sweep needs at least one --grid axis".into()));
        }
        Ok(Self { protocol, grid, fixed })
    }

    /// All grid points, row-major with the first `--grid` axis outermost.
    pub fn points(&self) -> Vec<Point> {
        let axes: Vec<Vec<f64>> = self.grid.iter().map(GridAxis::values).collect();
        let total: usize = axes.iter().map(Vec::len).product();
        let mut out = Vec::with_capacity(total);
        for mut index in 0..total {
            let mut point: Point = self.fixed.iter().map(|p| (p.param.clone(), p.value)).collect();
            for (axis, values) in self.grid.iter().zip(&axes).rev() {
                point.insert(axis.param.clone(), values[index % values.len()]);
                index /= values.len();
            }
            out.push(point);
        }
        out
    }
}

fn check_names<'a>(protocol: Protocol, names: impl Iterator<Item = (&'a str, &'a str)>) -> Result<(), CliError> {
    let known = protocol.params();
    let mut seen: Vec<&str> = Vec::new();
    for (flag, name) in names {
        if !known.contains(&name) {
            return Err(CliError::Usage(format!(
                "{flag} {name}: unknown parameter for {protocol} (expected one of {})",
                known.join(", ")
            )));
        }
        if seen.contains(&name) {
            return Err(CliError::Usage(format!("{flag} {name}: parameter given more than once")));
        }
        seen.push(name);
    }
    let missing: Vec<&str> = known.iter().copied().filter(|k| !seen.contains(k)).collect();
    if !missing.is_empty() {
        return Err(CliError::Usage(format!(
            "{protocol}: missing parameter(s) {}; sweep with --grid or pin with --fix",
            missing.join(", ")
        )));
    }
    Ok(())
}

/// A single fully pinned point.
pub fn point_from_pins(protocol: Protocol, pins: &[Pin]) -> Result<Point, CliError> {
    check_names(protocol, pins.iter().map(|p| ("--fix", p.param.as_str())))?;
    Ok(pins.iter().map(|p| (p.param.clone(), p.value)).collect())
}
