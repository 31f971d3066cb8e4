//! Flat key-value run configuration.
//!
//! Grammar: one `key = value` per line, `#` starts a comment, blank
//! lines ignored. Unknown keys are rejected so typos fail loudly.
//! `to_text` writes every field back out; parse(to_text(c)) == c, and
//! reports embed the normalized form.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use uniformize_core::{GeneratorKind, GeneratorSpec, Quadrature};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub generator: GeneratorSpec,
    pub eps: Vec<f64>,
    pub h: f64,
    pub seed: u64,
    pub pair_sample: usize,
    pub pair_exhaustive_limit: usize,
    pub out: String,
    pub checks: CheckSet,
    pub quadrature: Quadrature,
    pub delta_max_block: usize,
    pub delta_force: bool,
    /// Boundary origin; None means the graph base point.
    pub origin: Option<u32>,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            generator: GeneratorSpec::new(GeneratorKind::RegularTree {
                branching: 2,
                radius: 6,
            }),
            eps: vec![0.1, 0.3, 0.5, 1.0],
            h: uniformize_core::tolerances::DEFAULT_H,
            seed: 0,
            pair_sample: 5000,
            pair_exhaustive_limit: 200,
            out: "out".to_string(),
            checks: CheckSet::all(),
            quadrature: Quadrature::Trapezoid,
            delta_max_block: uniformize_core::tolerances::DELTA_GLOBAL_BLOCK_LIMIT,
            delta_force: false,
            origin: None,
            threads: 0,
        }
    }
}

pub const CHECK_NAMES: &[&str] = &[
    "delta",
    "harnack",
    "diameter",
    "bilipschitz",
    "boundary-bound",
    "uniform",
    "gh",
    "visual",
    "proxies",
    "qi",
    "roads",
    "cauchy",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSet(BTreeSet<String>);

impl CheckSet {
    pub fn all() -> Self {
        Self(CHECK_NAMES.iter().map(|s| s.to_string()).collect())
    }

    pub fn parse(text: &str) -> Result<Self> {
        if text.trim() == "all" {
            return Ok(Self::all());
        }
        let mut set = BTreeSet::new();
        for name in text.split(',') {
            let name = name.trim();
            if !CHECK_NAMES.contains(&name) {
                bail!(
                    "unknown check `{name}` (known: {})",
                    CHECK_NAMES.join(", ")
                );
            }
            set.insert(name.to_string());
        }
        Ok(Self(set))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.contains(name)
    }

    pub fn to_text(&self) -> String {
        if self.0.len() == CHECK_NAMES.len() {
            "all".to_string()
        } else {
            self.0.iter().cloned().collect::<Vec<_>>().join(",")
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut kind = "tree".to_string();
        let (mut branching, mut radius) = (2u32, 6u32);
        let (mut p, mut q, mut rings) = (7u32, 3u32, 3u32);
        let mut side = 6u32;
        let (mut n, mut prob) = (40u32, 0.1f64);
        let mut gnp_seed: Option<u64> = None;
        let mut edge_length = 1.0f64;
        let mut subdivision = 1u32;

        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`, got `{raw}`", idx + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let ctx = || format!("line {}: bad value for `{key}`", idx + 1);
            match key {
                "generator" => kind = value.to_string(),
                "branching" => branching = value.parse().with_context(ctx)?,
                "radius" => radius = value.parse().with_context(ctx)?,
                "p" => p = value.parse().with_context(ctx)?,
                "q" => q = value.parse().with_context(ctx)?,
                "rings" => rings = value.parse().with_context(ctx)?,
                "side" => side = value.parse().with_context(ctx)?,
                "n" => n = value.parse().with_context(ctx)?,
                "prob" => prob = value.parse().with_context(ctx)?,
                "gnp_seed" => gnp_seed = Some(value.parse().with_context(ctx)?),
                "edge_length" => edge_length = value.parse().with_context(ctx)?,
                "subdivision" => subdivision = value.parse().with_context(ctx)?,
                "eps" => {
                    cfg.eps = value
                        .split(',')
                        .map(|t| t.trim().parse::<f64>())
                        .collect::<std::result::Result<_, _>>()
                        .with_context(ctx)?;
                }
                "h" => cfg.h = value.parse().with_context(ctx)?,
                "seed" => cfg.seed = value.parse().with_context(ctx)?,
                "pair_sample" => cfg.pair_sample = value.parse().with_context(ctx)?,
                "pair_exhaustive_limit" => {
                    cfg.pair_exhaustive_limit = value.parse().with_context(ctx)?
                }
                "out" => cfg.out = value.to_string(),
                "checks" => cfg.checks = CheckSet::parse(value)?,
                "quadrature" => {
                    cfg.quadrature = match value {
                        "trapezoid" => Quadrature::Trapezoid,
                        "exact-tree" => Quadrature::ExactTree,
                        other => bail!("line {}: unknown quadrature `{other}`", idx + 1),
                    }
                }
                "delta_max_block" => cfg.delta_max_block = value.parse().with_context(ctx)?,
                "delta_force" => cfg.delta_force = value.parse().with_context(ctx)?,
                "origin" => {
                    cfg.origin = match value {
                        "base" => None,
                        other => Some(other.parse().with_context(ctx)?),
                    }
                }
                "threads" => cfg.threads = value.parse().with_context(ctx)?,
                other => bail!("line {}: unknown key `{other}`", idx + 1),
            }
        }

        let kind = match kind.as_str() {
            "tree" => GeneratorKind::RegularTree { branching, radius },
            "tiling" => GeneratorKind::HyperbolicTiling { p, q, rings },
            "grid" => GeneratorKind::EuclideanGrid { side },
            "gnp" => GeneratorKind::RandomGnp {
                n,
                prob,
                seed: gnp_seed.unwrap_or(cfg.seed),
            },
            other => bail!("unknown generator `{other}` (tree|tiling|grid|gnp)"),
        };
        cfg.generator = GeneratorSpec {
            kind,
            edge_length,
            subdivision,
        };
        if cfg.eps.is_empty() {
            bail!("eps list must not be empty");
        }
        for &e in &cfg.eps {
            if !(e > 0.0) || !e.is_finite() {
                bail!("eps values must be positive, got {e}");
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self.generator.kind {
            GeneratorKind::RegularTree { branching, radius } => {
                let _ = writeln!(out, "generator = tree");
                let _ = writeln!(out, "branching = {branching}");
                let _ = writeln!(out, "radius = {radius}");
            }
            GeneratorKind::HyperbolicTiling { p, q, rings } => {
                let _ = writeln!(out, "generator = tiling");
                let _ = writeln!(out, "p = {p}");
                let _ = writeln!(out, "q = {q}");
                let _ = writeln!(out, "rings = {rings}");
            }
            GeneratorKind::EuclideanGrid { side } => {
                let _ = writeln!(out, "generator = grid");
                let _ = writeln!(out, "side = {side}");
            }
            GeneratorKind::RandomGnp { n, prob, seed } => {
                let _ = writeln!(out, "generator = gnp");
                let _ = writeln!(out, "n = {n}");
                let _ = writeln!(out, "prob = {prob}");
                let _ = writeln!(out, "gnp_seed = {seed}");
            }
        }
        let _ = writeln!(out, "edge_length = {}", self.generator.edge_length);
        let _ = writeln!(out, "subdivision = {}", self.generator.subdivision);
        let eps: Vec<String> = self.eps.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "eps = {}", eps.join(","));
        let _ = writeln!(out, "h = {}", self.h);
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "pair_sample = {}", self.pair_sample);
        let _ = writeln!(out, "pair_exhaustive_limit = {}", self.pair_exhaustive_limit);
        let _ = writeln!(out, "out = {}", self.out);
        let _ = writeln!(out, "checks = {}", self.checks.to_text());
        let quad = match self.quadrature {
            Quadrature::Trapezoid => "trapezoid",
            Quadrature::ExactTree => "exact-tree",
        };
        let _ = writeln!(out, "quadrature = {quad}");
        let _ = writeln!(out, "delta_max_block = {}", self.delta_max_block);
        let _ = writeln!(out, "delta_force = {}", self.delta_force);
        match self.origin {
            None => {
                let _ = writeln!(out, "origin = base");
            }
            Some(o) => {
                let _ = writeln!(out, "origin = {o}");
            }
        }
        let _ = writeln!(out, "threads = {}", self.threads);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_default() {
        let cfg = RunConfig::default();
        let text = cfg.to_text();
        let back = RunConfig::parse(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn round_trip_tiling_with_overrides() {
        let text = "\
generator = tiling
p = 7
q = 3
rings = 4
eps = 0.05,0.3
h = 0.05
seed = 11
checks = harnack,diameter
quadrature = exact-tree
origin = 3
# trailing comment
";
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.eps, vec![0.05, 0.3]);
        assert_eq!(cfg.origin, Some(3));
        assert!(cfg.checks.contains("harnack"));
        assert!(!cfg.checks.contains("uniform"));
        let back = RunConfig::parse(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_unknown_keys_and_values() {
        assert!(RunConfig::parse("fnord = 1").is_err());
        assert!(RunConfig::parse("generator = dodecahedron").is_err());
        assert!(RunConfig::parse("eps = ").is_err());
        assert!(RunConfig::parse("eps = -0.5").is_err());
        assert!(RunConfig::parse("checks = harnack,bogus").is_err());
        assert!(RunConfig::parse("radius").is_err());
    }
}
