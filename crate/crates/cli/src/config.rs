//! Run configuration: defaults, a flat `key = value` file, then flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use scarmat_core::checks::{Suite, DEFAULT_SEED};
use scarmat_core::sc::ScarScMode;
use scarmat_core::scar::EhrenfestConvention;
use scarmat_core::PhasePoint;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Table,
    Coherent,
    Scar,
    Props,
    Weyl,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Table => "table",
            Command::Coherent => "coherent",
            Command::Scar => "scar",
            Command::Props => "props",
            Command::Weyl => "weyl",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "pretty" => Ok(Format::Pretty),
            _ => Err(CliError::Config(format!("unknown format `{s}`"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Pretty => "pretty",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub p: f64,
    pub q: f64,
}

impl From<PhasePoint> for Point {
    fn from(x: PhasePoint) -> Self {
        Point { p: x.p, q: x.q }
    }
}

impl From<Point> for PhasePoint {
    fn from(x: Point) -> Self {
        PhasePoint::new(x.p, x.q)
    }
}

/// Everything a run depends on, echoed into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(rename = "N")]
    pub n_list: Vec<usize>,
    pub t: Vec<i64>,
    pub x1: Point,
    pub x2: Point,
    pub phi1: f64,
    pub phi2: f64,
    pub t_convention: String,
    pub normalize: bool,
    /// Scar time-sum cutoff; `None` keeps `⌈T/2 + 2⌉`.
    pub cutoff: Option<usize>,
    pub mode: String,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub skip: Vec<String>,
    pub breakdown: bool,
}

impl RunConfig {
    pub fn defaults(command: Command) -> Self {
        let (n_list, t) = match command {
            Command::Table => (vec![100, 101, 104, 200], vec![0, 1]),
            Command::Coherent | Command::Scar => (vec![100], vec![1]),
            Command::Props | Command::Weyl => (vec![7], vec![]),
        };
        Self {
            command,
            n_list,
            t,
            x1: PhasePoint::ORIGIN.into(),
            x2: PhasePoint::new(0.5, 0.5).into(),
            phi1: 0.0,
            phi2: 0.0,
            t_convention: EhrenfestConvention::default().name().to_string(),
            normalize: true,
            cutoff: None,
            mode: ScarScMode::default().name().to_string(),
            format: Format::Pretty,
            output: None,
            seed: DEFAULT_SEED,
            skip: Vec::new(),
            breakdown: false,
        }
    }

    pub fn convention(&self) -> Result<EhrenfestConvention, CliError> {
        Ok(self.t_convention.parse()?)
    }

    pub fn scar_mode(&self) -> Result<ScarScMode, CliError> {
        Ok(self.mode.parse()?)
    }

    pub fn skipped(&self) -> Result<Vec<Suite>, CliError> {
        self.skip.iter().map(|s| Ok(s.parse()?)).collect()
    }

    /// Applies one `key = value` setting; keys are the long flag names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let bad = |what: &str| CliError::Config(format!("invalid {what} `{value}` for `{key}`"));
        match key {
            "N" => self.n_list = parse_list(value).map_err(|_| bad("integer list"))?,
            "t" => self.t = parse_list(value).map_err(|_| bad("integer list"))?,
            "x1" => self.x1 = parse_point(value).ok_or_else(|| bad("point"))?,
            "x2" => self.x2 = parse_point(value).ok_or_else(|| bad("point"))?,
            "phi1" => self.phi1 = value.parse().map_err(|_| bad("number"))?,
            "phi2" => self.phi2 = value.parse().map_err(|_| bad("number"))?,
            "T-convention" => {
                value.parse::<EhrenfestConvention>()?;
                self.t_convention = value.to_string();
            }
            "normalize" => self.normalize = value.parse().map_err(|_| bad("boolean"))?,
            "cutoff" => self.cutoff = Some(value.parse().map_err(|_| bad("integer"))?),
            "mode" => {
                value.parse::<ScarScMode>()?;
                self.mode = value.to_string();
            }
            "format" => self.format = value.parse()?,
            "out" => self.output = Some(PathBuf::from(value)),
            "seed" => self.seed = value.parse().map_err(|_| bad("integer"))?,
            "skip" => {
                let names: Vec<String> = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                for s in &names {
                    s.parse::<Suite>()?;
                }
                self.skip = names;
            }
            "breakdown" => self.breakdown = value.parse().map_err(|_| bad("boolean"))?,
            _ => return Err(CliError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Applies a config file's settings in order.
    pub fn apply_file_text(&mut self, text: &str) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", i + 1)))?;
            self.set(k.trim(), v.trim())
                .map_err(|e| CliError::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        self.apply_file_text(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.n_list.is_empty() {
            return Err(CliError::Config("empty N list".into()));
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| n < 2) {
            return Err(CliError::Config(format!("N must be at least 2, got {n}")));
        }
        self.convention()?;
        self.scar_mode()?;
        self.skipped()?;
        Ok(())
    }
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, T::Err> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(str::parse)
        .collect()
}

fn parse_point(s: &str) -> Option<Point> {
    let (p, q) = s.split_once(',')?;
    Some(Point {
        p: p.trim().parse().ok()?,
        q: q.trim().parse().ok()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_settings() {
        let mut c = RunConfig::defaults(Command::Table);
        c.apply_file_text(
            "# comment\nN = 100, 104\nT-convention = logN\n\nnormalize = false # trailing\nx2 = 0.5,0.5\n",
        )
        .unwrap();
        assert_eq!(c.n_list, vec![100, 104]);
        assert_eq!(c.t_convention, "logN");
        assert!(!c.normalize);
        assert!(c.apply_file_text("bogus = 1").is_err());
        assert!(c.apply_file_text("mode = fast").is_err());
        assert!(c.apply_file_text("N").is_err());
    }
}
