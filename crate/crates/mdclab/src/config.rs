use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Params,
    Lattice,
    Reduction,
    P3,
    Prop1d,
    Uniqueness1d,
    Surface,
    Uniqueness2d,
    /// Deliberately perturbed Lagrangians and parameters that must be detected.
    Probes,
}

impl Suite {
    pub const STANDARD: [Suite; 8] = [
        Suite::Params,
        Suite::Lattice,
        Suite::Reduction,
        Suite::P3,
        Suite::Prop1d,
        Suite::Uniqueness1d,
        Suite::Surface,
        Suite::Uniqueness2d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Params => "params",
            Suite::Lattice => "lattice",
            Suite::Reduction => "reduction",
            Suite::P3 => "p3",
            Suite::Prop1d => "prop1d",
            Suite::Uniqueness1d => "uniqueness1d",
            Suite::Surface => "surface",
            Suite::Uniqueness2d => "uniqueness2d",
            Suite::Probes => "probes",
        }
    }

    /// Position used to derive the suite's random stream.
    pub fn stream(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::STANDARD
            .into_iter()
            .chain([Suite::Probes])
            .find(|x| x.name() == s)
            .ok_or_else(|| ConfigError::Invalid(format!("unknown suite {s:?}")))
    }
}

/// Uniform sampling box for `(p, q, r)`; draws closer than the guard to a
/// degenerate point are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSpec {
    pub count: usize,
    pub p: [f64; 2],
    pub q: [f64; 2],
    pub r: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamSpec {
    pub explicit: Vec<[f64; 3]>,
    pub sample: Option<SampleSpec>,
}

impl Default for ParamSpec {
    fn default() -> Self {
        ParamSpec {
            explicit: vec![[3.0, 2.0, 1.0]],
            sample: Some(SampleSpec { count: 4, p: [0.2, 3.0], q: [0.2, 3.0], r: [0.2, 3.0] }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    pub params: ParamSpec,
    pub hbar: f64,
    /// Overrides for [`default_tolerances`].
    pub tolerances: BTreeMap<String, f64>,
    pub suites: Vec<Suite>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            trials: 20,
            params: ParamSpec::default(),
            hbar: 1.0,
            tolerances: BTreeMap::new(),
            suites: Suite::STANDARD.to_vec(),
        }
    }
}

pub fn default_tolerances() -> BTreeMap<String, f64> {
    [
        ("identity", 1e-12),
        ("cube", 1e-12),
        ("closure", 1e-10),
        ("offshell", 1e-3),
        ("det", 1e-12),
        ("commutator", 1e-12),
        ("orbit", 1e-9),
        ("momentum", 1e-10),
        ("oneform", 1e-10),
        ("perturbation", 1e-4),
        ("joint", 1e-8),
        ("tridiagonal", 1e-12),
        ("propagator", 1e-9),
        ("ub", 1e-11),
        ("path", 1e-10),
        ("random_path", 1e-9),
        ("kernel_invariant", 1e-12),
        ("uniqueness", 1e-5),
        ("moves", 1e-12),
        ("surface", 1e-10),
        ("flow", 1e-10),
        ("multiform", 1e-8),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let c: SuiteConfig = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        if !(self.hbar > 0.0 && self.hbar.is_finite()) {
            return bad("hbar must be positive".into());
        }
        let known = default_tolerances();
        for (k, v) in &self.tolerances {
            if !known.contains_key(k) {
                return bad(format!("unknown tolerance {k:?}"));
            }
            if !(*v > 0.0 && v.is_finite()) {
                return bad(format!("tolerance {k:?} must be positive"));
            }
        }
        for t in &self.params.explicit {
            if let Err(e) = mdc_core::params::LatticeParams::with_hbar(t[0], t[1], t[2], self.hbar) {
                return bad(format!("parameters {t:?}: {e}"));
            }
        }
        if let Some(s) = &self.params.sample {
            for (name, [lo, hi]) in [("p", s.p), ("q", s.q), ("r", s.r)] {
                if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                    return bad(format!("sampling range for {name} is empty"));
                }
            }
        }
        if self.params.explicit.is_empty() && self.params.sample.as_ref().is_none_or(|s| s.count == 0) {
            return bad("no parameter triples".into());
        }
        if self.suites.is_empty() {
            return bad("no suites selected".into());
        }
        Ok(())
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| default_tolerances()[name])
    }
}
