//! Plain-text run configuration: `key=value` lines, `#` comments.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Every setting a run can take. Unset keys fall back to the defaults of the
/// selected pipeline; [`RunConfig::merge`] lets command-line values win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub mode: Option<String>,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub truth: Option<PathBuf>,
    pub metrics: Option<PathBuf>,
    pub l: Option<usize>,
    pub tau: Option<f64>,
    pub steps: Option<usize>,
    pub sigma0: Option<f64>,
    pub q1: Option<usize>,
    pub q2: Option<usize>,
    pub modes: Option<usize>,
    pub bmesh: Option<usize>,
    pub eps_tv: Option<f64>,
    pub eps_g: Option<f64>,
    pub edge_stop: Option<String>,
    pub lambda: Option<f64>,
    pub refresh_every: Option<usize>,
    pub snapshot_stride: Option<usize>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub kind: Option<String>,
    pub noise: Option<f64>,
    pub time: Option<f64>,
    pub h: Option<f64>,
    pub size: Option<usize>,
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| Error::Parse {
        line,
        message: format!("bad value {value:?} for {key}: {e}"),
    })
}

macro_rules! config_keys {
    ($($field:ident => $key:literal),* $(,)?) => {
        impl RunConfig {
            /// Recognized keys, in file order.
            pub const KEYS: &'static [&'static str] = &[$($key),*];

            fn set(&mut self, line: usize, key: &str, value: &str) -> Result<()> {
                match key {
                    $($key => self.$field = Some(parse_value(line, key, value)?),)*
                    _ => {
                        return Err(Error::Parse {
                            line,
                            message: format!("unknown key {key:?}"),
                        })
                    }
                }
                Ok(())
            }

            /// Values of `other` replace ours where set.
            pub fn merge(&mut self, other: &RunConfig) {
                $(if other.$field.is_some() {
                    self.$field = other.$field.clone();
                })*
            }

            pub fn to_config_string(&self) -> String {
                let mut out = String::new();
                $(if let Some(v) = &self.$field {
                    let _ = writeln!(out, "{}={}", $key, Show(v));
                })*
                out
            }
        }
    };
}

config_keys! {
    mode => "mode",
    input => "in",
    output => "out",
    truth => "truth",
    metrics => "metrics",
    l => "l",
    tau => "tau",
    steps => "steps",
    sigma0 => "sigma0",
    q1 => "q1",
    q2 => "q2",
    modes => "modes",
    bmesh => "bmesh",
    eps_tv => "eps_tv",
    eps_g => "eps_g",
    edge_stop => "edge_stop",
    lambda => "lambda",
    refresh_every => "refresh_every",
    snapshot_stride => "snapshot_stride",
    seed => "seed",
    threads => "threads",
    kind => "kind",
    noise => "noise",
    time => "time",
    h => "h",
    size => "size",
}

struct Show<'a, T>(&'a T);

trait ConfigValue {
    fn show(&self) -> String;
}

impl ConfigValue for PathBuf {
    fn show(&self) -> String {
        self.display().to_string()
    }
}

impl ConfigValue for f64 {
    fn show(&self) -> String {
        // shortest representation that parses back to the same value
        format!("{self:?}")
    }
}

macro_rules! plain_value {
    ($($t:ty),*) => {$(
        impl ConfigValue for $t {
            fn show(&self) -> String {
                self.to_string()
            }
        }
    )*};
}

plain_value!(usize, u64, String);

impl<T: ConfigValue> std::fmt::Display for Show<'_, T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0.show())
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: i + 1,
                message: format!("expected key=value, got {line:?}"),
            })?;
            // accept the flag spelling with dashes too
            let key = key.trim().replace('-', "_");
            cfg.set(i + 1, &key, value.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}
