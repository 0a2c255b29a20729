//! Reference values: the explicit Ginzburg–Landau terminal value, its Monte
//! Carlo second moment, closed-form GBM moments, and a high-resolution
//! Monte Carlo Euler value for the cubic model.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::brownian::{derive_seed, BrownianPath, RandomStream};
use crate::error::{invalid, Result};
use crate::estimator::{mce_balanced, mean_and_se};
use crate::models::SdeModel;
use crate::parallel::{map_chunks, RunConfig};
use crate::sum::KahanSum;

/// Riemann points for the Ginzburg–Landau integral; a power of two so the
/// nodes sit on the dyadic path grid.
pub const DEFAULT_RIEMANN_POINTS: usize = 4096;
/// Desk-scale sample count of the Ginzburg–Landau reference.
pub const DESK_GL_SAMPLES: u64 = 1_000_000;
pub const PAPER_GL_SAMPLES: u64 = 10_000_000;
/// Step count of the desk-scale cubic reference.
pub const DESK_CUBIC_STEPS: usize = 1 << 10;
pub const PAPER_CUBIC_STEPS: usize = 1 << 12;

/// Quadrature for `∫_0^T exp(2 W_s) ds`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RiemannRule {
    #[default]
    Left,
    Trapezoid,
}

impl fmt::Display for RiemannRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RiemannRule::Left => "left",
            RiemannRule::Trapezoid => "trapezoid",
        })
    }
}

/// Terminal value of `dX = (X/2 - X^3) dt + X dW`, `X_0 = 1`:
/// `X_T = exp(W_T) / sqrt(1 + 2 ∫_0^T exp(2 W_s) ds)`, with the integral
/// replaced by a Riemann sum on `points` equal subintervals.
pub fn gl_exact_terminal(path: &BrownianPath, points: usize, rule: RiemannRule) -> Result<f64> {
    if points == 0 || !points.is_power_of_two() {
        return invalid(format!("Riemann points must be a power of two, got {points}"));
    }
    if points > path.intervals() {
        return invalid(format!("path grid of {} intervals is too coarse for {points} points", path.intervals()));
    }
    let stride = path.intervals() / points;
    let w = path.values();
    let dt = path.horizon() / points as f64;
    // Positive summands: plain summation loses nothing relevant here.
    let nodes = w.iter().step_by(stride).map(|v| (2.0 * v).exp());
    let sum: f64 = match rule {
        RiemannRule::Left => nodes.take(points).sum(),
        RiemannRule::Trapezoid => {
            let mut inner = 0.0;
            let (mut first, mut last) = (0.0, 0.0);
            for (k, e) in nodes.enumerate() {
                match k {
                    0 => first = e,
                    k if k == points => last = e,
                    _ => inner += e,
                }
            }
            inner + 0.5 * (first + last)
        }
    };
    let integral = sum * dt;
    Ok(w[path.intervals()].exp() / (1.0 + 2.0 * integral).sqrt())
}

/// How a reference value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    ExplicitMc,
    ClosedForm,
    HighNMce,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ExplicitMc => "explicit_mc",
            Method::ClosedForm => "closed_form",
            Method::HighNMce => "high_N_mce",
        })
    }
}

/// A reference value together with everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceValue {
    pub value: f64,
    pub std_error: Option<f64>,
    pub method: Method,
    /// Ordered `name=value` parameters (sample count, points, N, seed, ...).
    pub params: Vec<(String, String)>,
}

impl ReferenceValue {
    /// Cache key: method plus parameters.
    pub fn key(&self) -> String {
        cache_key(self.method, &self.params)
    }
}

fn cache_key(method: Method, params: &[(String, String)]) -> String {
    let mut key = method.to_string();
    for (k, v) in params {
        key.push(' ');
        key.push_str(k);
        key.push('=');
        key.push_str(v);
    }
    key
}

fn params(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Seed used for the Ginzburg–Landau reference paths, kept apart from the
/// replicate streams of the estimators.
fn gl_reference_seed(seed: u64) -> u64 {
    derive_seed(seed, 0x91_5e_fe_4e)
}

/// Mean of `gl_exact_terminal(path_m)^2` over `samples` independent paths.
pub fn gl_second_moment_reference(
    samples: u64,
    seed: u64,
    points: usize,
    rule: RiemannRule,
    config: &RunConfig,
) -> Result<ReferenceValue> {
    if samples == 0 {
        return invalid("reference needs at least one sample");
    }
    if points == 0 || !points.is_power_of_two() {
        return invalid(format!("Riemann points must be a power of two, got {points}"));
    }
    let depth = points.trailing_zeros();
    let stream_seed = gl_reference_seed(seed);
    let partials = map_chunks(config, 1, samples, |range| {
        let mut path = BrownianPath::from_values(1.0, vec![0.0, 0.0]).expect("static");
        let (mut s, mut sq) = (KahanSum::new(), KahanSum::new());
        for m in range {
            path.resample(RandomStream::new(stream_seed, m), 1.0, depth).expect("valid depth");
            let x = gl_exact_terminal(&path, points, rule).expect("aligned grid");
            s.add(x * x);
            sq.add(x * x * x * x);
        }
        (s, sq)
    });
    let (mut s, mut sq) = (KahanSum::new(), KahanSum::new());
    for (a, b) in &partials {
        s.merge(a);
        sq.merge(b);
    }
    let (mean, std_error) = mean_and_se(s.value(), sq.value(), samples);
    Ok(ReferenceValue {
        value: mean,
        std_error: Some(std_error),
        method: Method::ExplicitMc,
        params: gl_reference_params(samples, seed, points, rule),
    })
}

/// `E[X_T^p] = x0^p exp(p a T + p (p - 1) b^2 T / 2)` for GBM.
pub fn gbm_moment(a: f64, b: f64, x0: f64, horizon: f64, p: u32) -> Result<f64> {
    if p == 0 {
        return invalid("moment order must be at least 1");
    }
    let p_f = p as f64;
    Ok(x0.powi(p as i32) * (p_f * a * horizon + p_f * (p_f - 1.0) * b * b * horizon / 2.0).exp())
}

/// [`gbm_moment`] packaged as a reference value.
pub fn gbm_reference(a: f64, b: f64, x0: f64, horizon: f64, p: u32) -> Result<ReferenceValue> {
    Ok(ReferenceValue {
        value: gbm_moment(a, b, x0, horizon, p)?,
        std_error: None,
        method: Method::ClosedForm,
        params: params(&[
            ("model", "gbm".into()),
            ("a", a.to_string()),
            ("b", b.to_string()),
            ("x0", x0.to_string()),
            ("T", horizon.to_string()),
            ("p", p.to_string()),
        ]),
    })
}

/// Balanced (`M = N^2`) Monte Carlo Euler estimate of `E[X_1^2]` for
/// `dX = -X^3 dt + dW`, `X_0 = 0`.
pub fn cubic_reference(seed: u64, steps: usize, config: &RunConfig) -> Result<ReferenceValue> {
    if steps == 0 || !steps.is_power_of_two() {
        return invalid(format!("N must be a power of two, got {steps}"));
    }
    let model = SdeModel::cubic(1.0, 0.0, 1.0)?;
    let est = mce_balanced(&model, |x| x * x, steps, seed, config)?;
    Ok(ReferenceValue {
        value: est.value,
        std_error: Some(est.value_std_error),
        method: Method::HighNMce,
        params: cubic_reference_params(seed, steps),
    })
}

/// Reference values persisted as `key<TAB>value<TAB>std_error` lines, keyed
/// by method and parameters. Floats are written in shortest round-trip form.
#[derive(Debug, Clone, Default)]
pub struct ReferenceCache {
    path: Option<PathBuf>,
    entries: BTreeMap<String, (f64, Option<f64>)>,
}

impl ReferenceCache {
    /// In-memory cache that is never written.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads `path` if it exists; later [`Self::save`] calls write back to it.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = BTreeMap::new();
        if path.exists() {
            let text = fs::read_to_string(&path)
                .map_err(|e| crate::Error::InvalidArgument(format!("reading {}: {e}", path.display())))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let fields: Vec<&str> = line.split('\t').collect();
                let parsed = match fields.as_slice() {
                    [key, value, se] => value.parse::<f64>().ok().and_then(|v| {
                        let se = if *se == "-" { Some(None) } else { se.parse::<f64>().ok().map(Some) };
                        se.map(|se| (key.to_string(), (v, se)))
                    }),
                    _ => None,
                };
                match parsed {
                    Some((k, v)) => {
                        entries.insert(k, v);
                    }
                    None => return invalid(format!("{}:{}: malformed cache line", path.display(), lineno + 1)),
                }
            }
        }
        Ok(Self { path: Some(path), entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn lookup(&self, method: Method, params: &[(String, String)]) -> Option<ReferenceValue> {
        self.entries.get(&cache_key(method, params)).map(|&(value, std_error)| ReferenceValue {
            value,
            std_error,
            method,
            params: params.to_vec(),
        })
    }

    pub fn insert(&mut self, reference: &ReferenceValue) {
        self.entries.insert(reference.key(), (reference.value, reference.std_error));
    }

    /// Returns the cached value for `(method, params)` or computes, stores
    /// and persists it.
    pub fn get_or_compute(
        &mut self,
        method: Method,
        params: &[(String, String)],
        compute: impl FnOnce() -> Result<ReferenceValue>,
    ) -> Result<ReferenceValue> {
        if let Some(hit) = self.lookup(method, params) {
            return Ok(hit);
        }
        let fresh = compute()?;
        self.insert(&fresh);
        self.save()?;
        Ok(fresh)
    }

    pub fn save(&self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let mut out = String::from("# reference values: key\tvalue\tstd_error\n");
        for (key, (value, se)) in &self.entries {
            let se = se.map_or_else(|| "-".to_string(), |s| format!("{s:?}"));
            out.push_str(&format!("{key}\t{value:?}\t{se}\n"));
        }
        fs::write(path, out).map_err(|e| crate::Error::InvalidArgument(format!("writing {}: {e}", path.display())))
    }
}

/// Parameters under which [`gl_second_moment_reference`] caches its value.
pub fn gl_reference_params(samples: u64, seed: u64, points: usize, rule: RiemannRule) -> Vec<(String, String)> {
    params(&[
        ("model", "ginzburg_landau".into()),
        ("samples", samples.to_string()),
        ("riemann_points", points.to_string()),
        ("rule", rule.to_string()),
        ("seed", seed.to_string()),
    ])
}

/// Parameters under which [`cubic_reference`] caches its value.
pub fn cubic_reference_params(seed: u64, steps: usize) -> Vec<(String, String)> {
    params(&[
        ("model", "cubic".into()),
        ("N", steps.to_string()),
        ("samples", (steps as u64 * steps as u64).to_string()),
        ("seed", seed.to_string()),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_path_gives_inverse_sqrt_three() {
        let flat = BrownianPath::from_values(1.0, vec![0.0; 17]).unwrap();
        let x = gl_exact_terminal(&flat, 16, RiemannRule::Left).unwrap();
        assert!((x - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((x * x - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn linear_path_converges_to_one() {
        // W_s = s: the integral is (e^2 - 1) / 2 and X_1 = e / e = 1.
        let mut prev_err = f64::INFINITY;
        for depth in [4u32, 6, 8, 10, 12] {
            let n = 1usize << depth;
            let w: Vec<f64> = (0..=n).map(|k| k as f64 / n as f64).collect();
            let path = BrownianPath::from_values(1.0, w).unwrap();
            let err = (gl_exact_terminal(&path, n, RiemannRule::Left).unwrap() - 1.0).abs();
            assert!(err < prev_err);
            prev_err = err;
            let trap = (gl_exact_terminal(&path, n, RiemannRule::Trapezoid).unwrap() - 1.0).abs();
            assert!(trap < err);
        }
        assert!(prev_err < 1e-3);
    }

    #[test]
    fn riemann_grid_must_fit_the_path() {
        let flat = BrownianPath::from_values(1.0, vec![0.0; 9]).unwrap();
        assert!(gl_exact_terminal(&flat, 16, RiemannRule::Left).is_err());
        assert!(gl_exact_terminal(&flat, 3, RiemannRule::Left).is_err());
        assert!(gl_exact_terminal(&flat, 8, RiemannRule::Left).is_ok());
    }

    #[test]
    fn riemann_refinements_settle_on_fixed_paths() {
        for m in 0..20 {
            let path = BrownianPath::sample(RandomStream::new(17, m), 1.0, 13).unwrap();
            let vals: Vec<f64> =
                (6..=13).map(|d| gl_exact_terminal(&path, 1 << d, RiemannRule::Left).unwrap()).collect();
            let diffs: Vec<f64> = vals.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
            // Differences shrink roughly like the grid step (up to Brownian
            // roughness); compare coarse against fine halves.
            assert!(diffs[diffs.len() - 1] < diffs[0], "{diffs:?}");
        }
    }

    #[test]
    fn gbm_moment_examples() {
        assert_eq!(gbm_moment(0.0, 0.0, 3.0, 1.0, 4).unwrap(), 81.0);
        assert!((gbm_moment(0.3, 2.0, 2.0, 1.5, 1).unwrap() - 2.0 * (0.45f64).exp()).abs() < 1e-14);
        assert!((gbm_moment(0.0, 1.0, 1.0, 1.0, 2).unwrap() - std::f64::consts::E).abs() < 1e-15);
        assert!(gbm_moment(0.0, 1.0, 1.0, 1.0, 0).is_err());
    }

    #[test]
    fn small_gl_reference_is_reproducible() {
        let cfg = RunConfig::with_workers(2);
        let a = gl_second_moment_reference(3000, 4, 256, RiemannRule::Left, &cfg).unwrap();
        let b = gl_second_moment_reference(3000, 4, 256, RiemannRule::Left, &RunConfig::with_workers(1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.method, Method::ExplicitMc);
        assert!(a.std_error.unwrap() > 0.0);
        assert!((a.value - 0.4945).abs() < 6.0 * a.std_error.unwrap() + 0.01);
    }

    #[test]
    fn cache_round_trips_through_a_file() {
        let dir = std::env::temp_dir().join(format!("mce-cache-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let file = dir.join("refs.tsv");
        let _ = fs::remove_file(&file);
        let mut cache = ReferenceCache::open(&file).unwrap();
        assert!(cache.is_empty());
        let params = gl_reference_params(10, 1, 16, RiemannRule::Left);
        let mut calls = 0;
        let first = cache
            .get_or_compute(Method::ExplicitMc, &params, || {
                calls += 1;
                gl_second_moment_reference(10, 1, 16, RiemannRule::Left, &RunConfig::default())
            })
            .unwrap();
        let reopened = ReferenceCache::open(&file).unwrap();
        assert_eq!(reopened.len(), 1);
        let mut reopened = reopened;
        let second = reopened.get_or_compute(Method::ExplicitMc, &params, || unreachable!("cached")).unwrap();
        assert_eq!(first, second);
        assert_eq!(first.value.to_bits(), second.value.to_bits());
        assert_eq!(calls, 1);
        fs::write(&file, "garbage line\n").unwrap();
        assert!(ReferenceCache::open(&file).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }
}
