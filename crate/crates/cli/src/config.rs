//! Experiment configuration: flat `key=value` files overridden by
//! command-line flags.

use std::collections::BTreeMap;
use std::path::PathBuf;

use mce_core::estimator::Restriction;
use mce_core::models::{InitialValue, ModelKind};
use mce_core::{RiemannRule, SdeModel};

use crate::CliError;

/// Keys that never influence results and are left out of the echoed
/// configuration.
const NON_RESULT_KEYS: &[&str] = &["workers", "out", "cache", "config"];

const MODEL_PARAMS: &[&str] = &["sigma_bar", "x0", "a", "b", "T", "L", "delta"];

const KNOWN_KEYS: &[&str] = &[
    "model",
    "seed",
    "seeds",
    "n_min",
    "n_max",
    "steps",
    "samples",
    "payoff_power",
    "workers",
    "scale",
    "out",
    "cache",
    "reference",
    "reference_seed",
    "reference_samples",
    "reference_steps",
    "event",
    "threshold",
    "grid_min",
    "grid_max",
    "grid_step",
    "pairs",
    "riemann_points",
    "rule",
    "max_exponent",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Desk,
    Paper,
}

/// Where the `abs_error` reference comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceSource {
    /// Published values (0.4945 for Ginzburg–Landau, 0.4529 for cubic);
    /// closed form for GBM.
    Published,
    /// Computed at the configured scale (and cached when a cache file is set).
    Computed,
    Value(f64),
}

/// Canonical form of a key: lower-case except `T`/`L`, dashes as
/// underscores.
pub fn normalize_key(key: &str) -> String {
    let k = key.trim().replace('-', "_");
    match k.as_str() {
        "T" | "L" => k,
        "t" => "T".into(),
        "l" => "L".into(),
        _ => k.to_lowercase(),
    }
}

/// Parses `key=value` lines; `#` starts a comment line.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config line {}: expected key=value, got {line:?}", i + 1)));
        };
        out.insert(normalize_key(k), v.trim().to_string());
    }
    Ok(out)
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    settings: BTreeMap<String, String>,
}

impl ExperimentConfig {
    /// Layers `defaults < file < flags` and validates the key names.
    pub fn resolve(
        defaults: &[(&str, &str)],
        file: BTreeMap<String, String>,
        flags: BTreeMap<String, String>,
    ) -> Result<Self, CliError> {
        let mut settings: BTreeMap<String, String> =
            defaults.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        for (k, v) in file.into_iter().chain(flags) {
            if !KNOWN_KEYS.contains(&k.as_str()) && !MODEL_PARAMS.contains(&k.as_str()) {
                return Err(CliError::Usage(format!("unknown configuration key {k:?}")));
            }
            settings.insert(k, v);
        }
        Ok(Self { settings })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.settings.get(key).map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.settings.insert(key.to_string(), value.into());
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| CliError::Usage(format!("invalid value {v:?} for {key}"))),
        }
    }

    fn require<T: std::str::FromStr>(&self, key: &str) -> Result<T, CliError> {
        self.parse(key)?.ok_or_else(|| CliError::Usage(format!("missing setting {key}")))
    }

    /// `key=value` lines of every setting that can affect results.
    pub fn echo(&self) -> Vec<String> {
        self.settings
            .iter()
            .filter(|(k, _)| !NON_RESULT_KEYS.contains(&k.as_str()))
            .map(|(k, v)| format!("{k}={v}"))
            .collect()
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.require("seed")
    }

    /// `seed, seed + 1, ..., seed + seeds - 1`.
    pub fn seed_list(&self) -> Result<Vec<u64>, CliError> {
        let first = self.seed()?;
        let count: u64 = self.parse("seeds")?.unwrap_or(1);
        if count == 0 {
            return Err(CliError::Usage("seeds must be at least 1".into()));
        }
        Ok((0..count).map(|i| first + i).collect())
    }

    pub fn workers(&self) -> Result<usize, CliError> {
        Ok(self.parse("workers")?.unwrap_or(0))
    }

    pub fn scale(&self) -> Result<Scale, CliError> {
        match self.get("scale").unwrap_or("desk") {
            "desk" => Ok(Scale::Desk),
            "paper" => Ok(Scale::Paper),
            other => Err(CliError::Usage(format!("scale must be desk or paper, got {other:?}"))),
        }
    }

    pub fn out(&self) -> Option<PathBuf> {
        self.get("out").map(PathBuf::from)
    }

    pub fn cache(&self) -> Option<PathBuf> {
        self.get("cache").map(PathBuf::from)
    }

    /// Step counts: the explicit `steps` list, or the powers of two from
    /// `n_min` to `n_max`.
    pub fn steps(&self) -> Result<Vec<usize>, CliError> {
        if let Some(list) = self.get("steps") {
            let steps: Vec<usize> = list
                .split([',', ' '])
                .filter(|s| !s.is_empty())
                .map(|s| s.trim().parse().map_err(|_| CliError::Usage(format!("invalid step count {s:?}"))))
                .collect::<Result<_, _>>()?;
            if steps.is_empty() || steps.contains(&0) {
                return Err(CliError::Usage("steps must list positive integers".into()));
            }
            return Ok(steps);
        }
        let lo: usize = self.require("n_min")?;
        let hi: usize = self.require("n_max")?;
        if !lo.is_power_of_two() || !hi.is_power_of_two() || lo > hi {
            return Err(CliError::Usage(format!(
                "n-min ({lo}) and n-max ({hi}) must be powers of two with n-min <= n-max"
            )));
        }
        Ok((lo.trailing_zeros()..=hi.trailing_zeros()).map(|k| 1usize << k).collect())
    }

    /// Powers of two only, as exponents.
    pub fn exponents(&self) -> Result<Vec<u32>, CliError> {
        self.steps()?
            .into_iter()
            .map(|n| {
                if n.is_power_of_two() {
                    Ok(n.trailing_zeros())
                } else {
                    Err(CliError::Usage(format!("N = {n} is not a power of two")))
                }
            })
            .collect()
    }

    /// Explicit sample count, if any (otherwise `N^2`).
    pub fn samples(&self) -> Result<Option<u64>, CliError> {
        let s: Option<u64> = self.parse("samples")?;
        if s == Some(0) {
            return Err(CliError::Usage("samples must be at least 1".into()));
        }
        Ok(s)
    }

    pub fn payoff_power(&self) -> Result<u32, CliError> {
        let p: u32 = self.parse("payoff_power")?.unwrap_or(2);
        if p == 0 {
            return Err(CliError::Usage("payoff power must be at least 1".into()));
        }
        Ok(p)
    }

    pub fn reference(&self) -> Result<ReferenceSource, CliError> {
        match self.get("reference").unwrap_or("published") {
            "published" | "paper" => Ok(ReferenceSource::Published),
            "computed" => Ok(ReferenceSource::Computed),
            v => v.parse::<f64>().ok().filter(|x| x.is_finite()).map(ReferenceSource::Value).ok_or_else(|| {
                CliError::Usage(format!("reference must be published, computed or a number, got {v:?}"))
            }),
        }
    }

    pub fn reference_seed(&self) -> Result<u64, CliError> {
        Ok(self.parse("reference_seed")?.unwrap_or(9_999))
    }

    /// Restriction event; `auto` picks the Brownian-sup event where it
    /// applies and the dominator event elsewhere.
    pub fn event(&self, model: &SdeModel) -> Result<Restriction, CliError> {
        match self.get("event").unwrap_or("auto") {
            "auto" => Ok(if intro_applicable(model) { Restriction::BrownianSup } else { Restriction::Dominator }),
            "dominator" => Ok(Restriction::Dominator),
            "brownian-sup" | "brownian_sup" => Ok(Restriction::BrownianSup),
            v => Err(CliError::Usage(format!("event must be dominator or brownian-sup, got {v:?}"))),
        }
    }

    pub fn rule(&self) -> Result<RiemannRule, CliError> {
        match self.get("rule").unwrap_or("left") {
            "left" => Ok(RiemannRule::Left),
            "trapezoid" => Ok(RiemannRule::Trapezoid),
            v => Err(CliError::Usage(format!("rule must be left or trapezoid, got {v:?}"))),
        }
    }

    pub fn float(&self, key: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.parse(key)?.unwrap_or(default))
    }

    pub fn int(&self, key: &str, default: u64) -> Result<u64, CliError> {
        Ok(self.parse(key)?.unwrap_or(default))
    }

    pub fn model_name(&self) -> Result<ModelName, CliError> {
        ModelName::parse(self.get("model").unwrap_or("ginzburg"))
    }

    /// Builds the configured model with its parameter overrides.
    pub fn model(&self) -> Result<SdeModel, CliError> {
        let name = self.model_name()?;
        let allowed: &[&str] = match name {
            ModelName::Cubic => &["sigma_bar", "x0", "T", "L", "delta"],
            ModelName::GinzburgLandau => &["x0", "T", "L", "delta"],
            ModelName::Gbm => &["a", "b", "x0", "T", "L", "delta"],
        };
        for p in MODEL_PARAMS {
            if self.get(p).is_some() && !allowed.contains(p) {
                return Err(CliError::Usage(format!("parameter {p} does not apply to model {}", name.as_str())));
            }
        }
        let t = self.float("T", 1.0)?;
        let mut model = match name {
            ModelName::Cubic => SdeModel::cubic(self.float("sigma_bar", 1.0)?, self.float("x0", 0.0)?, t)?,
            ModelName::GinzburgLandau => {
                let m = SdeModel::ginzburg_landau().with_horizon(t)?;
                m.with_initial(InitialValue::Constant(self.float("x0", 1.0)?))
            }
            ModelName::Gbm => SdeModel::gbm(self.float("a", 0.0)?, self.float("b", 0.0)?, self.float("x0", 1.0)?, t)?,
        };
        if self.get("L").is_some() || self.get("delta").is_some() {
            let l = self.float("L", model.growth_l())?;
            let d = self.float("delta", model.growth_delta())?;
            model = model.with_growth(l, d)?;
        }
        Ok(model)
    }
}

/// Cubic model with unit noise started at 0.
pub fn intro_applicable(model: &SdeModel) -> bool {
    matches!(model.kind(), ModelKind::Cubic { sigma_bar } if sigma_bar == 1.0)
        && model.initial().constant() == Some(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelName {
    Cubic,
    GinzburgLandau,
    Gbm,
}

impl ModelName {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "cubic" => Ok(ModelName::Cubic),
            "ginzburg" | "ginzburg_landau" | "ginzburg-landau" | "gl" => Ok(ModelName::GinzburgLandau),
            "gbm" => Ok(ModelName::Gbm),
            other => Err(CliError::Usage(format!("unknown model {other:?} (expected cubic, ginzburg or gbm)"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::Cubic => "cubic",
            ModelName::GinzburgLandau => "ginzburg",
            ModelName::Gbm => "gbm",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(file: &str, flags: &[(&str, &str)]) -> Result<ExperimentConfig, CliError> {
        let flags = flags.iter().map(|(k, v)| (normalize_key(k), v.to_string())).collect();
        ExperimentConfig::resolve(&[("seed", "0"), ("n_min", "1"), ("n_max", "512")], parse_kv(file)?, flags)
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let c = cfg("# comment\nseed = 5\nn-max=64\nmodel=cubic\n", &[("seed", "7")]).unwrap();
        assert_eq!(c.seed().unwrap(), 7);
        assert_eq!(c.steps().unwrap(), vec![1, 2, 4, 8, 16, 32, 64]);
        assert_eq!(c.model_name().unwrap(), ModelName::Cubic);
    }

    #[test]
    fn echo_excludes_worker_count() {
        let a = cfg("workers=1", &[]).unwrap();
        let b = cfg("workers=8\nout=/tmp/x.csv", &[]).unwrap();
        assert_eq!(a.echo(), b.echo());
        assert_eq!(a.workers().unwrap(), 1);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_kv("no equals sign").is_err());
        assert!(cfg("bogus=1", &[]).is_err());
        assert!(cfg("n_min=3", &[]).unwrap().steps().is_err());
        assert!(cfg("n_min=64\nn_max=8", &[]).unwrap().steps().is_err());
        assert!(cfg("model=heston", &[]).unwrap().model().is_err());
        assert!(cfg("model=cubic\na=1", &[]).unwrap().model().is_err());
        assert!(cfg("scale=huge", &[]).unwrap().scale().is_err());
        assert!(cfg("reference=soon", &[]).unwrap().reference().is_err());
    }

    #[test]
    fn model_overrides() {
        let m = cfg("model=cubic\nsigma_bar=0\nx0=10", &[]).unwrap().model().unwrap();
        assert_eq!(m.sigma(3.0), 0.0);
        assert_eq!(m.initial(), InitialValue::Constant(10.0));
        let m = cfg("model=gbm\na=0.5\nb=0.25\nL=3", &[]).unwrap().model().unwrap();
        assert_eq!(m.mu(2.0), 1.0);
        assert_eq!(m.growth_l(), 3.0);
        let c = cfg("steps=10, 20", &[]).unwrap();
        assert_eq!(c.steps().unwrap(), vec![10, 20]);
        assert!(c.exponents().is_err());
    }
}
