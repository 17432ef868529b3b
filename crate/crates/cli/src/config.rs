use std::path::{Path, PathBuf};

use codeswitch::compiler::{Corrections, RelocationMode};
use codeswitch::gadgets::RoundStrategy;
use codeswitch::sim::{NoiseModel, DEFAULT_CAPACITY};
use serde::Deserialize;

use crate::Failure;

/// Defaults for every subcommand. Flags override file values.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Maximum number of simultaneously entangled qubits.
    pub cap: usize,
    pub noise: NoiseConfig,
    pub strategy: RoundStrategy,
    pub corrections: Corrections,
    pub relocation: RelocationMode,
    pub seed: u64,
    pub shots: usize,
    pub bootstrap: usize,
    /// Worker threads; 0 means available parallelism.
    pub threads: usize,
    /// Relative output paths are resolved against this directory.
    pub output_dir: PathBuf,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub p1: f64,
    pub p2: f64,
    pub p_meas: f64,
    pub p_prep: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cap: DEFAULT_CAPACITY,
            noise: NoiseConfig::default(),
            strategy: RoundStrategy::Sequential,
            corrections: Corrections::Apply,
            relocation: RelocationMode::Swap,
            seed: 0,
            shots: 1000,
            bootstrap: 1000,
            threads: 0,
            output_dir: PathBuf::from("."),
        }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Config, Failure> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = crate::read(path)?;
        toml::from_str(&text).map_err(|e| Failure::schema(format!("{}: {e}", path.display())))
    }

    pub fn noise(&self, flag: Option<&str>) -> Result<NoiseModel, Failure> {
        let n = match flag {
            Some(s) => parse_noise(s)?,
            None => self.noise,
        };
        NoiseModel::new(n.p1, n.p2, n.p_meas, n.p_prep).map_err(Failure::usage_from)
    }

    pub fn output(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.output_dir.join(path)
        }
    }
}

/// `p1,p2,pm,pp`; missing trailing rates are zero.
pub fn parse_noise(s: &str) -> Result<NoiseConfig, Failure> {
    let vals = s
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::usage(format!("--noise '{s}': {e}")))?;
    if vals.is_empty() || vals.len() > 4 {
        return Err(Failure::usage(format!(
            "--noise '{s}': expected 1 to 4 rates"
        )));
    }
    let get = |i: usize| vals.get(i).copied().unwrap_or(0.0);
    Ok(NoiseConfig {
        p1: get(0),
        p2: get(1),
        p_meas: get(2),
        p_prep: get(3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let c: Config = toml::from_str("").unwrap();
        assert_eq!(c, Config::default());
    }

    #[test]
    fn fields_parse() {
        let c: Config = toml::from_str(
            "cap = 20\nstrategy = \"mid\"\ncorrections = \"frame\"\nrelocation = \"teleport\"\n[noise]\np2 = 0.01\n",
        )
        .unwrap();
        assert_eq!(c.cap, 20);
        assert_eq!(c.strategy, RoundStrategy::Mid);
        assert_eq!(c.corrections, Corrections::Frame);
        assert_eq!(c.relocation, RelocationMode::Teleport);
        assert_eq!(c.noise.p2, 0.01);
        assert!(toml::from_str::<Config>("bogus = 1").is_err());
    }

    #[test]
    fn noise_flag() {
        let n = parse_noise("0.001,0.002").unwrap();
        assert_eq!((n.p1, n.p2, n.p_meas, n.p_prep), (0.001, 0.002, 0.0, 0.0));
        assert!(parse_noise("a").is_err());
        assert!(parse_noise("0,0,0,0,0").is_err());
    }
}
