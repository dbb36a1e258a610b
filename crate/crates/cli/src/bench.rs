use std::path::Path;

use anyhow::{bail, Context, Result};
use quatcomp::completion::Method;
use serde::Deserialize;

use crate::run::{seeded_pattern, Input, MaskSource, RunSpec};

/// Benchmark grid, read from TOML (or JSON when the extension is `json`).
///
/// Every input is paired with every missing rate and every pattern, and each
/// of those instances is solved by every method on the same mask.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub inputs: Vec<String>,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub missing_rates: Vec<f64>,
    #[serde(default)]
    pub patterns: Vec<String>,
    pub rank: usize,
    #[serde(default)]
    pub seed: u64,
    pub max_outer: Option<usize>,
}

impl BenchConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: BenchConfig = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text)?
        } else {
            toml::from_str(&text)?
        };
        if cfg.inputs.is_empty() || cfg.methods.is_empty() {
            bail!("bench config needs at least one input and one method");
        }
        if cfg.missing_rates.is_empty() && cfg.patterns.is_empty() {
            bail!("bench config needs missing_rates or patterns");
        }
        Ok(cfg)
    }

    /// Run specs grouped by instance; all specs in a group share one mask.
    pub fn expand(&self) -> Result<Vec<Vec<RunSpec>>> {
        let masks = self
            .missing_rates
            .iter()
            .map(|p| format!("random:p={p}"))
            .chain(self.patterns.iter().cloned());
        let masks: Vec<String> = masks.collect();
        let mut groups = Vec::new();
        let mut instance = 0u64;
        for input in &self.inputs {
            let input: Input = input.parse()?;
            for m in &masks {
                let seed = self.seed.wrapping_add(instance);
                instance += 1;
                let mask = MaskSource::Pattern(seeded_pattern(m, seed));
                let group = self
                    .methods
                    .iter()
                    .map(|&method| {
                        let mut config = method.default_config(self.rank);
                        config.seed = seed;
                        if let Some(n) = self.max_outer {
                            config.max_outer = n;
                        }
                        RunSpec { input: input.clone(), mask: mask.clone(), method, config }
                    })
                    .collect::<Vec<_>>();
                groups.push(group);
            }
        }
        Ok(groups)
    }
}
