//! SDE coefficient models and their growth/Lipschitz metadata.

use std::fmt;
use std::sync::Arc;

use crate::brownian::{Lane, RandomStream};
use crate::error::{invalid, Result};

/// Highest coefficient derivative the models expose.
pub const MAX_ORDER: u8 = 4;

/// A scalar coefficient function with analytic derivatives of orders 0..=4.
pub trait Coefficient: Send + Sync + fmt::Debug {
    /// `order`-th derivative at `x`; `order <= MAX_ORDER` is guaranteed by
    /// callers.
    fn derivative(&self, order: u8, x: f64) -> f64;

    #[inline]
    fn value(&self, x: f64) -> f64 {
        self.derivative(0, x)
    }
}

/// Highest polynomial degree stored inline.
pub const MAX_DEGREE: usize = 7;

/// Polynomial `c[0] + c[1] x + ... + c[d] x^d` with `d <= MAX_DEGREE`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Polynomial {
    len: usize,
    /// Coefficients of the derivatives of orders 0..=MAX_ORDER.
    derivs: [[f64; MAX_DEGREE + 1]; MAX_ORDER as usize + 1],
}

impl Polynomial {
    /// Panics if more than `MAX_DEGREE + 1` coefficients are given.
    pub fn new(coeffs: &[f64]) -> Self {
        assert!(coeffs.len() <= MAX_DEGREE + 1, "polynomial degree above {MAX_DEGREE}");
        let mut derivs = [[0.0; MAX_DEGREE + 1]; MAX_ORDER as usize + 1];
        derivs[0][..coeffs.len()].copy_from_slice(coeffs);
        for k in 1..derivs.len() {
            for i in 1..=MAX_DEGREE {
                derivs[k][i - 1] = derivs[k - 1][i] * i as f64;
            }
        }
        Self { len: coeffs.len().max(1), derivs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(&[c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.derivs[0][..self.len]
    }

    #[inline(always)]
    fn eval(&self, order: u8, x: f64) -> f64 {
        self.derivs[order as usize][..self.len].iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

impl Coefficient for Polynomial {
    #[inline]
    fn derivative(&self, order: u8, x: f64) -> f64 {
        self.eval(order, x)
    }
}

/// Coefficient storage: polynomials inline, anything else behind a trait
/// object.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
enum CoefficientFn {
    Poly(Polynomial),
    Dyn(Arc<dyn Coefficient>),
}

impl CoefficientFn {
    #[inline(always)]
    fn derivative(&self, order: u8, x: f64) -> f64 {
        match self {
            CoefficientFn::Poly(p) => p.eval(order, x),
            CoefficientFn::Dyn(f) => f.derivative(order, x),
        }
    }

    fn as_dyn(&self) -> &dyn Coefficient {
        match self {
            CoefficientFn::Poly(p) => p,
            CoefficientFn::Dyn(f) => f.as_ref(),
        }
    }
}

impl From<Polynomial> for CoefficientFn {
    fn from(p: Polynomial) -> Self {
        CoefficientFn::Poly(p)
    }
}

/// Which coefficient of the SDE.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Drift,
    Diffusion,
}

/// Law of the initial value ξ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialValue {
    Constant(f64),
    Normal { mean: f64, std_dev: f64 },
}

impl InitialValue {
    /// Realizes ξ for one replicate; constants ignore the stream.
    pub fn sample(&self, stream: &RandomStream) -> f64 {
        match *self {
            InitialValue::Constant(x) => x,
            InitialValue::Normal { mean, std_dev } => mean + std_dev * stream.normal(Lane::Initial, 0),
        }
    }

    /// `|ξ|` when ξ is deterministic.
    pub fn constant(&self) -> Option<f64> {
        match *self {
            InitialValue::Constant(x) => Some(x),
            InitialValue::Normal { .. } => None,
        }
    }
}

/// Identity of a model, used where an experiment only applies to one family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelKind {
    /// `dX = -X^3 dt + σ̄ dW`.
    Cubic {
        sigma_bar: f64,
    },
    /// `dX = (X/2 - X^3) dt + X dW`.
    GinzburgLandau,
    /// `dX = a X dt + b X dW`.
    Gbm {
        a: f64,
        b: f64,
    },
    Custom,
}

/// One-dimensional SDE `dX = μ(X) dt + σ(X) dW` on `[0, T]`.
#[derive(Debug, Clone)]
pub struct SdeModel {
    name: String,
    kind: ModelKind,
    drift: CoefficientFn,
    diffusion: CoefficientFn,
    growth_l: f64,
    growth_delta: f64,
    sup_mu_prime_unit: f64,
    initial: InitialValue,
    horizon: f64,
}

/// Points used when `sup_{[-1,1]} |μ'|` has no closed form.
pub const SUP_GRID_POINTS: usize = 10_001;

impl SdeModel {
    /// Builds a polynomial model, computing `sup_{[-1,1]} |μ'|` on a grid.
    pub fn polynomial(
        name: impl Into<String>,
        drift: Polynomial,
        diffusion: Polynomial,
        growth_l: f64,
        growth_delta: f64,
        initial: InitialValue,
        horizon: f64,
    ) -> Result<Self> {
        let sup = grid_sup_abs(|x| drift.eval(1, x), SUP_GRID_POINTS);
        Self::with_sup(
            name,
            ModelKind::Custom,
            drift.into(),
            diffusion.into(),
            growth_l,
            growth_delta,
            sup,
            initial,
            horizon,
        )
    }

    /// Builds a model from arbitrary coefficient functions, computing
    /// `sup_{[-1,1]} |μ'|` on a grid.
    pub fn new(
        name: impl Into<String>,
        drift: Arc<dyn Coefficient>,
        diffusion: Arc<dyn Coefficient>,
        growth_l: f64,
        growth_delta: f64,
        initial: InitialValue,
        horizon: f64,
    ) -> Result<Self> {
        let sup = grid_sup_abs(|x| drift.derivative(1, x), SUP_GRID_POINTS);
        let (drift, diffusion) = (CoefficientFn::Dyn(drift), CoefficientFn::Dyn(diffusion));
        Self::with_sup(name, ModelKind::Custom, drift, diffusion, growth_l, growth_delta, sup, initial, horizon)
    }

    #[allow(clippy::too_many_arguments)]
    fn with_sup(
        name: impl Into<String>,
        kind: ModelKind,
        drift: CoefficientFn,
        diffusion: CoefficientFn,
        growth_l: f64,
        growth_delta: f64,
        sup_mu_prime_unit: f64,
        initial: InitialValue,
        horizon: f64,
    ) -> Result<Self> {
        if !(growth_l > 0.0 && growth_l.is_finite()) {
            return invalid(format!("growth constant L must be positive, got {growth_l}"));
        }
        if !(growth_delta > 1.0 && growth_delta.is_finite()) {
            return invalid(format!("growth exponent delta must exceed 1, got {growth_delta}"));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return invalid(format!("horizon T must be positive, got {horizon}"));
        }
        if !(sup_mu_prime_unit >= 0.0) {
            return invalid("sup of |mu'| over [-1,1] must be nonnegative");
        }
        Ok(Self {
            name: name.into(),
            kind,
            drift,
            diffusion,
            growth_l,
            growth_delta,
            sup_mu_prime_unit,
            initial,
            horizon,
        })
    }

    /// `dX = -X^3 dt + σ̄ dW`, `X_0 = x0`, with L = 6, δ = 3.
    pub fn cubic(sigma_bar: f64, x0: f64, horizon: f64) -> Result<Self> {
        Self::with_sup(
            "cubic",
            ModelKind::Cubic { sigma_bar },
            Polynomial::new(&[0.0, 0.0, 0.0, -1.0]).into(),
            Polynomial::constant(sigma_bar).into(),
            6.0,
            3.0,
            3.0,
            InitialValue::Constant(x0),
            horizon,
        )
    }

    /// `dX = (X/2 - X^3) dt + X dW`, `X_0 = 1`, `T = 1`, with L = 6, δ = 3.
    pub fn ginzburg_landau() -> Self {
        Self::with_sup(
            "ginzburg_landau",
            ModelKind::GinzburgLandau,
            Polynomial::new(&[0.0, 0.5, 0.0, -1.0]).into(),
            Polynomial::new(&[0.0, 1.0]).into(),
            6.0,
            3.0,
            2.5,
            InitialValue::Constant(1.0),
            1.0,
        )
        .expect("built-in constants are valid")
    }

    /// Geometric Brownian motion `dX = a X dt + b X dW`. Linear coefficients
    /// satisfy the growth bound with `L = max(|a| + |b|, 1)` and δ = 2.
    pub fn gbm(a: f64, b: f64, x0: f64, horizon: f64) -> Result<Self> {
        let l = (a.abs() + b.abs()).max(1.0);
        Self::with_sup(
            "gbm",
            ModelKind::Gbm { a, b },
            Polynomial::new(&[0.0, a]).into(),
            Polynomial::new(&[0.0, b]).into(),
            l,
            2.0,
            a.abs(),
            InitialValue::Constant(x0),
            horizon,
        )
    }

    pub fn with_initial(mut self, initial: InitialValue) -> Self {
        self.initial = initial;
        self
    }

    pub fn with_horizon(mut self, horizon: f64) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return invalid(format!("horizon T must be positive, got {horizon}"));
        }
        self.horizon = horizon;
        Ok(self)
    }

    /// Overrides the growth constants (L, δ).
    pub fn with_growth(mut self, growth_l: f64, growth_delta: f64) -> Result<Self> {
        if !(growth_l > 0.0 && growth_l.is_finite()) || !(growth_delta > 1.0 && growth_delta.is_finite()) {
            return invalid(format!("invalid growth constants L={growth_l}, delta={growth_delta}"));
        }
        self.growth_l = growth_l;
        self.growth_delta = growth_delta;
        Ok(self)
    }

    /// Same drift, zero diffusion.
    pub fn without_noise(&self) -> Self {
        let mut m = self.clone();
        m.diffusion = Polynomial::constant(0.0).into();
        if let ModelKind::Cubic { .. } = m.kind {
            m.kind = ModelKind::Cubic { sigma_bar: 0.0 };
        }
        m
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn growth_l(&self) -> f64 {
        self.growth_l
    }

    pub fn growth_delta(&self) -> f64 {
        self.growth_delta
    }

    pub fn sup_mu_prime_unit(&self) -> f64 {
        self.sup_mu_prime_unit
    }

    pub fn initial(&self) -> InitialValue {
        self.initial
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    #[inline(always)]
    pub fn mu(&self, x: f64) -> f64 {
        self.drift.derivative(0, x)
    }

    #[inline(always)]
    pub fn sigma(&self, x: f64) -> f64 {
        self.diffusion.derivative(0, x)
    }

    pub fn drift(&self) -> &dyn Coefficient {
        self.drift.as_dyn()
    }

    pub fn diffusion(&self) -> &dyn Coefficient {
        self.diffusion.as_dyn()
    }

    /// `μ^(order)(x)` or `σ^(order)(x)`.
    pub fn eval_coefficient(&self, which: Which, order: u8, x: f64) -> Result<f64> {
        if order > MAX_ORDER {
            return invalid(format!("derivative order {order} outside 0..={MAX_ORDER}"));
        }
        Ok(match which {
            Which::Drift => self.drift.derivative(order, x),
            Which::Diffusion => self.diffusion.derivative(order, x),
        })
    }

    /// Checks the polynomial-growth, one-sided Lipschitz and diffusion
    /// Lipschitz inequalities on `grid` and on `pair_samples` pairs of grid
    /// points. Passing only certifies the tested set, not all of ℝ.
    pub fn validate_growth(&self, grid: &[f64], pair_samples: usize) -> Result<ValidationReport> {
        if grid.is_empty() {
            return invalid("validation grid is empty");
        }
        let l = self.growth_l;
        let mut violations = Vec::new();
        for &x in grid {
            let bound = l * (1.0 + x.abs().powf(self.growth_delta));
            for order in 0..=MAX_ORDER {
                let lhs = self.drift.derivative(order, x).abs() + self.diffusion.derivative(order, x).abs();
                if lhs > bound * (1.0 + SLACK) {
                    violations.push(Violation::Growth { x, order, lhs, bound });
                }
            }
        }
        let pairs = sample_pairs(grid, pair_samples);
        for &(x, y) in &pairs {
            let d = x - y;
            let onesided = d * (self.mu(x) - self.mu(y));
            let rhs = l * d * d;
            if onesided > rhs + SLACK * (rhs + onesided.abs()) {
                violations.push(Violation::OneSidedLipschitz { x, y, lhs: onesided, bound: rhs });
            }
            let lip = (self.sigma(x) - self.sigma(y)).abs();
            let rhs = l * d.abs();
            if lip > rhs * (1.0 + SLACK) + f64::MIN_POSITIVE {
                violations.push(Violation::DiffusionLipschitz { x, y, lhs: lip, bound: rhs });
            }
        }
        let lo = grid.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(ValidationReport { range: (lo, hi), points: grid.len(), pairs: pairs.len(), violations })
    }
}

const SLACK: f64 = 1e-12;

/// All ordered pairs when they fit in the budget, otherwise a reproducible
/// pseudo-random selection.
fn sample_pairs(grid: &[f64], budget: usize) -> Vec<(f64, f64)> {
    let n = grid.len();
    if n.saturating_mul(n) <= budget {
        return grid.iter().flat_map(|&x| grid.iter().map(move |&y| (x, y))).collect();
    }
    let stream = RandomStream::new(0x7a11d, 0);
    (0..budget as u64)
        .map(|k| {
            let i = (stream.uniform(Lane::Fresh, 2 * k) * n as f64) as usize;
            let j = (stream.uniform(Lane::Fresh, 2 * k + 1) * n as f64) as usize;
            (grid[i.min(n - 1)], grid[j.min(n - 1)])
        })
        .collect()
}

fn grid_sup_abs(f: impl Fn(f64) -> f64, points: usize) -> f64 {
    (0..points).map(|i| -1.0 + 2.0 * i as f64 / (points - 1) as f64).fold(0.0, |m, x| m.max(f(x).abs()))
}

/// Uniform grid `lo, lo + step, ..., hi`.
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Growth { x: f64, order: u8, lhs: f64, bound: f64 },
    OneSidedLipschitz { x: f64, y: f64, lhs: f64, bound: f64 },
    DiffusionLipschitz { x: f64, y: f64, lhs: f64, bound: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    /// Smallest and largest tested point.
    pub range: (f64, f64),
    pub points: usize,
    pub pairs: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn one_sided_violations(&self) -> usize {
        self.violations.iter().filter(|v| matches!(v, Violation::OneSidedLipschitz { .. })).count()
    }
}

/// The three built-in models with their default parameters.
pub fn builtin_models() -> Vec<SdeModel> {
    vec![
        SdeModel::cubic(1.0, 0.0, 1.0).expect("valid defaults"),
        SdeModel::ginzburg_landau(),
        SdeModel::gbm(0.0, 0.0, 1.0, 1.0).expect("valid defaults"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exploding() -> SdeModel {
        SdeModel::new(
            "exploding",
            Arc::new(Polynomial::new(&[0.0, 0.0, 0.0, 1.0])),
            Arc::new(Polynomial::constant(1.0)),
            6.0,
            3.0,
            InitialValue::Constant(0.0),
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn coefficient_values() {
        let cubic = SdeModel::cubic(1.0, 0.0, 1.0).unwrap();
        assert_eq!(cubic.eval_coefficient(Which::Drift, 0, 2.0).unwrap(), -8.0);
        assert_eq!(cubic.eval_coefficient(Which::Drift, 1, 1.0).unwrap(), -3.0);
        assert_eq!(cubic.eval_coefficient(Which::Drift, 3, 7.0).unwrap(), -6.0);
        assert_eq!(cubic.eval_coefficient(Which::Drift, 4, 7.0).unwrap(), 0.0);
        assert_eq!(cubic.eval_coefficient(Which::Diffusion, 0, 7.0).unwrap(), 1.0);
        let gl = SdeModel::ginzburg_landau();
        assert_eq!(gl.eval_coefficient(Which::Drift, 0, 1.0).unwrap(), -0.5);
        assert_eq!(gl.eval_coefficient(Which::Diffusion, 1, -4.0).unwrap(), 1.0);
        assert!(matches!(cubic.eval_coefficient(Which::Drift, 5, 0.0), Err(crate::Error::InvalidArgument(_))));
    }

    #[test]
    fn builtin_defaults() {
        let models = builtin_models();
        let cubic = &models[0];
        assert_eq!(cubic.horizon(), 1.0);
        assert_eq!(cubic.sigma(123.0), 1.0);
        assert_eq!(cubic.initial(), InitialValue::Constant(0.0));
        let gl = &models[1];
        assert_eq!(gl.initial(), InitialValue::Constant(1.0));
        assert_eq!(gl.horizon(), 1.0);
        let gbm = &models[2];
        assert_eq!(gbm.mu(3.0), 0.0);
        assert_eq!(gbm.sigma(3.0), 0.0);
    }

    #[test]
    fn builtins_pass_growth_checks() {
        let grid = uniform_grid(-10.0, 10.0, 0.1);
        assert_eq!(grid.len(), 201);
        for model in builtin_models() {
            let report = model.validate_growth(&grid, 201 * 201).unwrap();
            assert!(report.passed(), "{}: {:?}", model.name(), &report.violations[..3.min(report.violations.len())]);
            assert_eq!(report.pairs, 201 * 201);
        }
        let gbm = SdeModel::gbm(0.5, 0.5, 1.0, 1.0).unwrap();
        assert!(gbm.validate_growth(&grid, 5_000).unwrap().passed());
    }

    #[test]
    fn exploding_drift_fails_one_sided_lipschitz() {
        let grid = uniform_grid(-10.0, 10.0, 0.5);
        let report = exploding().validate_growth(&grid, 10_000).unwrap();
        assert!(report.one_sided_violations() > 0);
        for v in &report.violations {
            if let Violation::OneSidedLipschitz { x, y, .. } = v {
                // (x-y)(x^3-y^3) > 6 (x-y)^2  <=>  x^2 + xy + y^2 > 6
                assert!(x * x + x * y + y * y > 6.0);
            }
        }
    }

    #[test]
    fn closed_form_sups_dominate_grid() {
        for model in builtin_models() {
            let grid = grid_sup_abs(|x| model.drift().derivative(1, x), SUP_GRID_POINTS);
            assert!(model.sup_mu_prime_unit() >= grid, "{}", model.name());
        }
        assert_eq!(exploding().sup_mu_prime_unit(), 3.0);
    }

    #[test]
    fn invalid_metadata_rejected() {
        assert!(SdeModel::cubic(1.0, 0.0, 0.0).is_err());
        assert!(SdeModel::cubic(1.0, 0.0, 1.0).unwrap().with_growth(6.0, 1.0).is_err());
        assert!(SdeModel::cubic(1.0, 0.0, 1.0).unwrap().with_growth(0.0, 3.0).is_err());
        assert!(SdeModel::ginzburg_landau().validate_growth(&[], 10).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-4;
        for model in builtin_models().into_iter().chain([exploding(), SdeModel::gbm(0.3, -0.7, 1.0, 1.0).unwrap()]) {
            for which in [Which::Drift, Which::Diffusion] {
                for k in 1..=MAX_ORDER {
                    for i in 0..=100 {
                        let x = -5.0 + 0.1 * i as f64;
                        let fd = (model.eval_coefficient(which, k - 1, x + h).unwrap()
                            - model.eval_coefficient(which, k - 1, x - h).unwrap())
                            / (2.0 * h);
                        let exact = model.eval_coefficient(which, k, x).unwrap();
                        assert!(
                            (fd - exact).abs() <= 1e-5 * exact.abs().max(1.0),
                            "{} {which:?} order {k} at {x}: {fd} vs {exact}",
                            model.name()
                        );
                    }
                }
            }
        }
    }
}
