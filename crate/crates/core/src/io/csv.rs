//! One sample per line, with an optional `h=<spacing>` first line.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::Signal1D;
use crate::metrics::StepStats;

pub fn parse_signal_csv(text: &str) -> Result<Signal1D> {
    let mut h = 1.0;
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: i + 1,
            message,
        };
        if let Some(spacing) = line.strip_prefix("h=") {
            if !values.is_empty() {
                return Err(parse_err("spacing header after the first sample".into()));
            }
            h = spacing
                .trim()
                .parse::<f64>()
                .map_err(|e| parse_err(format!("bad spacing {spacing:?}: {e}")))?;
            if !(h > 0.0 && h.is_finite()) {
                return Err(parse_err(format!("spacing must be positive, got {h}")));
            }
            continue;
        }
        let v = line
            .parse::<f64>()
            .map_err(|e| parse_err(format!("bad sample {line:?}: {e}")))?;
        if !v.is_finite() {
            return Err(parse_err(format!("sample {line:?} is not finite")));
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::Format("signal file has no samples".into()));
    }
    Signal1D::new(values, h)
}

pub fn read_signal_csv(path: &Path) -> Result<Signal1D> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_signal_csv(&text)
}

/// Header line then each sample with 17 significant digits.
pub fn format_signal_csv(signal: &Signal1D) -> String {
    let mut out = String::with_capacity(24 * (signal.len() + 1));
    let _ = writeln!(out, "h={:.16e}", signal.h());
    for v in signal.values() {
        let _ = writeln!(out, "{v:.16e}");
    }
    out
}

pub fn write_signal_csv(path: &Path, signal: &Signal1D) -> Result<()> {
    std::fs::write(path, format_signal_csv(signal)).map_err(|e| Error::io(path, e))
}

/// `step,mean,l2,tv` rows.
pub fn write_metrics_csv(path: &Path, stats: &[StepStats]) -> Result<()> {
    let mut out = String::from("step,mean,l2,tv\n");
    for s in stats {
        let _ = writeln!(out, "{},{:.16e},{:.16e},{:.16e}", s.step, s.mean, s.l2, s.tv);
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}
