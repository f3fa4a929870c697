//! Text formats: spectrum CSV, two-column distributions and inference reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use qgrating_core::{InferenceResult, NumberDistribution, Phase, Spectrum, Statistic};

/// Distributions read from files may be off from unit mass by this much and are
/// renormalized; anything further is rejected.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line,
        message: message.into(),
    }
}

/// Header line listing the state, geometry and cavity parameters.
pub fn spectrum_header(spectrum: &Spectrum, extra: &[(&str, String)]) -> String {
    let m = spectrum.meta();
    let p = &m.params;
    let mut h = format!(
        "# state={} geometry={} kappa={} delta0={} delta1={} eta0={}",
        m.state,
        m.geometry,
        p.kappa(),
        p.delta0(),
        p.delta1(),
        p.eta0()
    );
    if m.extended {
        h.push_str(" extended=true");
    }
    for (k, v) in extra {
        let _ = write!(h, " {k}={v}");
    }
    h
}

/// Header, column names, then `delta_p,photon_number` rows with 15
/// significant digits.
pub fn write_spectrum(spectrum: &Spectrum, extra: &[(&str, String)]) -> String {
    let mut out = spectrum_header(spectrum, extra);
    out.push_str("\ndelta_p,photon_number\n");
    for (x, y) in spectrum.detunings().iter().zip(spectrum.values()) {
        let _ = writeln!(out, "{x:.14e},{y:.14e}");
    }
    out
}

/// Spectrum read back from CSV. Header `key=value` pairs are kept as strings.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumFile {
    pub header: BTreeMap<String, String>,
    pub detunings: Vec<f64>,
    pub values: Vec<f64>,
}

impl SpectrumFile {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.header.get(key).map(String::as_str)
    }
}

fn parse_field(field: &str, line: usize, what: &str) -> Result<f64, FormatError> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| err(line, format!("{what} {:?} is not a number", field.trim())))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(err(line, format!("{what} {v} is not finite")))
    }
}

pub fn read_spectrum(text: &str) -> Result<SpectrumFile, FormatError> {
    let mut header = BTreeMap::new();
    let (mut detunings, mut values) = (Vec::new(), Vec::new());
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let n = i + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            for token in rest.split_whitespace() {
                if let Some((k, v)) = token.split_once('=') {
                    header.insert(k.to_string(), v.to_string());
                }
            }
            continue;
        }
        if line.starts_with("delta_p") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(err(
                n,
                format!("expected 2 comma-separated columns, found {}", fields.len()),
            ));
        }
        let x = parse_field(fields[0], n, "detuning")?;
        let y = parse_field(fields[1], n, "photon number")?;
        if y < 0.0 {
            return Err(err(n, format!("photon number {y} is negative")));
        }
        if let Some(&prev) = detunings.last() {
            if x <= prev {
                return Err(err(
                    n,
                    format!("detuning {x} does not increase (previous {prev})"),
                ));
            }
        }
        detunings.push(x);
        values.push(y);
    }
    if detunings.is_empty() {
        return Err(err(text.lines().count().max(1), "no data rows"));
    }
    Ok(SpectrumFile {
        header,
        detunings,
        values,
    })
}

/// `q,p` rows for every value in the stored support.
pub fn write_distribution(dist: &NumberDistribution) -> String {
    let mut out = format!("# statistic={}", dist.statistic().name());
    if let Statistic::OddSiteCount { region_atoms } = dist.statistic() {
        let _ = write!(out, " region_atoms={region_atoms}");
    }
    out.push_str("\nq,p\n");
    for (q, p) in dist.iter() {
        let _ = writeln!(out, "{q},{p:.14e}");
    }
    out
}

/// Reads `q,p` (or whitespace-separated) rows. Values of `q` may come in any
/// order and must not repeat; missing values have probability zero. A total
/// within [`DISTRIBUTION_TOLERANCE`] of one is renormalized.
pub fn read_distribution(
    text: &str,
    statistic: Statistic,
) -> Result<NumberDistribution, FormatError> {
    let mut entries: BTreeMap<u32, f64> = BTreeMap::new();
    let mut last_line = 1;
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        last_line = n;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line == "q,p" {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if fields.len() != 2 {
            return Err(err(
                n,
                format!("expected 2 columns q,p, found {}", fields.len()),
            ));
        }
        let q: u32 = fields[0]
            .parse()
            .map_err(|_| err(n, format!("q {:?} is not a nonnegative integer", fields[0])))?;
        let p = parse_field(fields[1], n, "probability")?;
        if p < 0.0 {
            return Err(err(n, format!("probability {p} is negative")));
        }
        if entries.insert(q, p).is_some() {
            return Err(err(n, format!("q = {q} appears twice")));
        }
    }
    let (Some((&lo, _)), Some((&hi, _))) = (entries.first_key_value(), entries.last_key_value())
    else {
        return Err(err(last_line, "no distribution rows"));
    };
    let total: f64 = entries.values().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(err(
            last_line,
            format!("probabilities sum to {total}, expected 1 within {DISTRIBUTION_TOLERANCE:e}"),
        ));
    }
    let mut probs = vec![0.0; (hi - lo) as usize + 1];
    for (q, p) in entries {
        probs[(q - lo) as usize] = p;
    }
    NumberDistribution::normalized(lo, probs, statistic).map_err(|e| err(last_line, e.to_string()))
}

/// `key: value` report of an inference run.
pub fn write_inference(result: &InferenceResult, phase: Option<Phase>, threshold: f64) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "method: {}", result.method.name());
    let _ = writeln!(out, "mean: {:.10}", result.mean);
    let _ = writeln!(out, "variance: {:.10}", result.variance);
    let fano = if result.mean > 0.0 {
        result.variance / result.mean
    } else {
        f64::NAN
    };
    let _ = writeln!(out, "variance_over_mean: {fano:.10}");
    let _ = writeln!(out, "residual: {:.6e}", result.residual);
    let _ = writeln!(out, "condition: {:.6e}", result.condition);
    let _ = writeln!(out, "phase_threshold: {threshold}");
    match phase {
        Some(p) => {
            let _ = writeln!(out, "phase: {}", p.name());
        }
        None => out.push_str("phase: indeterminate\n"),
    }
    out
}
