//! The dominating process of the Euler scheme and the events on which it
//! controls the scheme.
//!
//! For a trajectory `Y` with increments `ΔW_n` define
//!
//! ```text
//! α_n = T L / N + σ̃(Y_n) ΔW_n        β_n = T μ(0) / N + σ(0) ΔW_n
//! D_{v,v} = T|μ(0)| + |σ(0)| + |ξ| + 1
//! D_{v,w+1} = e^{α_w} D_{v,w} + sgn(Y_w) β_w      (v <= w)
//! ```
//!
//! with `D_{v,w} = D_{v,v}` for `v > w`, `sgn(0) = +1`, and `τ_n` the last
//! index `k <= n` where `Y` changed sign. On the event `Ω_{N,n}` (all
//! `|D_{v,w}|, v, w <= n` at most `r_N` and all increments up to `n` at most
//! `N^{-1/4}`) one has `|Y_n| <= D_{τ_n, n}`.

use crate::brownian::BrownianPath;
use crate::error::{invalid, Result};
use crate::euler::EulerTrajectory;
use crate::models::{ModelKind, SdeModel};

/// Absolute slack allowed on top of `|Y_n| <= D_{τ_n,n}`.
pub const DOMINATION_TOLERANCE: f64 = 1e-9;

/// `(σ(x) - σ(0)) / x`, and 0 at the origin.
#[inline]
pub fn sigma_tilde(model: &SdeModel, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        (model.sigma(x) - model.sigma(0.0)) / x
    }
}

/// `sgn` with `sgn(0) = +1`.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Radius below which the drift step alone cannot change the sign of `Y`:
///
/// `r_N = min(N^{1/4} / L, max(0, N / (T (sup_{[-1,1]} |μ'| + 3L)) - 1)^{1/(δ-1)})`.
pub fn radius_rn(model: &SdeModel, steps: usize) -> f64 {
    let n = steps as f64;
    let l = model.growth_l();
    let first = n.powf(0.25) / l;
    let inner = n / (model.horizon() * (model.sup_mu_prime_unit() + 3.0 * l)) - 1.0;
    let second = inner.max(0.0).powf(1.0 / (model.growth_delta() - 1.0));
    first.min(second)
}

/// `(α_n, β_n)` for state `y_n` and increment `dw`.
#[inline]
pub fn alpha_beta(model: &SdeModel, steps: usize, y_n: f64, dw: f64) -> (f64, f64) {
    let t_over_n = model.horizon() / steps as f64;
    let alpha = t_over_n * model.growth_l() + sigma_tilde(model, y_n) * dw;
    let beta = t_over_n * model.mu(0.0) + model.sigma(0.0) * dw;
    (alpha, beta)
}

/// `D_{v,v} = T|μ(0)| + |σ(0)| + |ξ| + 1`.
#[inline]
pub fn base_value(model: &SdeModel, xi: f64) -> f64 {
    model.horizon() * model.mu(0.0).abs() + model.sigma(0.0).abs() + xi.abs() + 1.0
}

/// Increment bound `N^{-1/4}` of the good event.
#[inline]
pub fn increment_bound(steps: usize) -> f64 {
    (steps as f64).powf(-0.25)
}

/// Everything the dominating-process construction derives from one
/// trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct DominatorTrace {
    pub steps: usize,
    pub r_n: f64,
    pub base: f64,
    /// `α_0..α_{N-1}`; NaN past a non-finite `Y`.
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    /// `sgn(Y_0)..sgn(Y_N)`.
    pub sgn_y: Vec<f64>,
    /// `τ_0..τ_N`.
    pub tau: Vec<usize>,
    /// `D_{τ_n, n}` for `n = 0..=N`.
    pub d_tau: Vec<f64>,
    /// `sup_{v,w <= n} |D_{v,w}|` for `n = 0..=N`.
    pub prefix_sup: Vec<f64>,
    /// `sup_{v,w} |D_{v,w}|` over the valid range.
    pub sup_d: f64,
    /// Membership in `Ω_{N,n}`, `n = 0..=N`.
    pub omega_flags: Vec<bool>,
    /// All increments within `N^{-1/4}`.
    pub increment_flag: bool,
    /// Last index with finite `Y`; entries past it are undefined.
    pub valid_until: usize,
    table: Vec<f64>,
}

impl DominatorTrace {
    /// `D_{v,w}` from the stored table; `None` past the valid range.
    pub fn d(&self, v: usize, w: usize) -> Option<f64> {
        if v > self.steps || w > self.valid_until {
            return None;
        }
        if v >= w {
            return Some(self.base);
        }
        Some(self.table[v * (self.steps + 1) + w])
    }

    /// `Ω_N = Ω_{N,N}`.
    pub fn in_omega(&self) -> bool {
        self.omega_flags[self.steps]
    }

    /// Largest `n` with `Ω_{N,n}`, if any.
    pub fn last_in_event(&self) -> Option<usize> {
        self.omega_flags.iter().rposition(|&f| f)
    }
}

/// Builds the full dominator trace of a trajectory in `O(N^2)`.
pub fn dominator_table(traj: &EulerTrajectory) -> DominatorTrace {
    let model = traj.model();
    let n = traj.steps();
    let ys = traj.values();
    let incs = traj.increments();
    let valid_until = traj.first_non_finite().map_or(n, |j| j - 1);
    let r_n = radius_rn(model, n);
    let base = base_value(model, traj.xi());

    let mut alpha = vec![f64::NAN; n];
    let mut beta = vec![f64::NAN; n];
    let mut growth = vec![f64::NAN; n];
    for k in 0..valid_until {
        let (a, b) = alpha_beta(model, n, ys[k], incs[k]);
        alpha[k] = a;
        beta[k] = b;
        growth[k] = a.exp();
    }
    let sgn_y: Vec<f64> = ys.iter().map(|&y| sgn(y)).collect();
    let mut tau = vec![0usize; n + 1];
    for k in 1..=n {
        tau[k] = if sgn_y[k - 1] != sgn_y[k] { k } else { tau[k - 1] };
    }

    let width = n + 1;
    let mut table = vec![base; width * width];
    for v in 0..valid_until {
        let mut d = base;
        for w in v..valid_until {
            d = growth[w] * d + sgn_y[w] * beta[w];
            table[v * width + w + 1] = d;
        }
    }
    for row in table.chunks_mut(width) {
        for x in row.iter_mut().skip(valid_until + 1) {
            *x = f64::NAN;
        }
    }

    let mut prefix_sup = vec![f64::NAN; n + 1];
    let mut running = base.abs();
    for w in 0..=valid_until {
        for v in 0..=w {
            running = running.max(table[v * width + w].abs());
        }
        prefix_sup[w] = running;
    }
    let sup_d = prefix_sup[valid_until];

    let inc_bound = increment_bound(n);
    let mut omega_flags = vec![false; n + 1];
    let mut incs_ok = true;
    for k in 0..=valid_until {
        if k > 0 {
            incs_ok &= incs[k - 1].abs() <= inc_bound;
        }
        omega_flags[k] = incs_ok && prefix_sup[k] <= r_n;
    }
    let increment_flag = incs.iter().all(|d| d.abs() <= inc_bound);

    let d_tau = (0..=n).map(|k| if k <= valid_until { table[tau[k] * width + k] } else { f64::NAN }).collect();

    DominatorTrace {
        steps: n,
        r_n,
        base,
        alpha,
        beta,
        sgn_y,
        tau,
        d_tau,
        prefix_sup,
        sup_d,
        omega_flags,
        increment_flag,
        valid_until,
        table,
    }
}

/// Steps `n` in `Ω_{N,n}` where `|Y_n| > D_{τ_n,n} + tolerance`. Steps outside
/// the event are never reported.
pub fn check_domination(trace: &DominatorTrace, traj: &EulerTrajectory) -> Vec<usize> {
    traj.values()
        .iter()
        .enumerate()
        .filter(|&(k, y)| trace.omega_flags[k] && !(y.abs() <= trace.d_tau[k] + DOMINATION_TOLERANCE))
        .map(|(k, _)| k)
        .collect()
}

/// Scratch buffers for [`omega_member`].
#[derive(Debug, Default, Clone)]
pub struct OmegaScratch {
    ys: Vec<f64>,
    growth: Vec<f64>,
    beta: Vec<f64>,
    alpha: Vec<f64>,
}

/// Membership of one replicate in `Ω_N^m`, with early exits. Agrees with
/// `dominator_table(..).in_omega()`.
pub fn omega_member(model: &SdeModel, xi: f64, increments: &[f64], scratch: &mut OmegaScratch) -> bool {
    let n = increments.len();
    let r_n = radius_rn(model, n);
    let base = base_value(model, xi);
    if !(base <= r_n) {
        return false;
    }
    let bound = increment_bound(n);
    if increments.iter().any(|d| !(d.abs() <= bound)) {
        return false;
    }
    let h = model.horizon() / n as f64;
    scratch.ys.clear();
    scratch.ys.push(xi);
    let mut y = xi;
    for &dw in increments {
        y = y + h * model.mu(y) + model.sigma(y) * dw;
        if !y.is_finite() {
            return false;
        }
        scratch.ys.push(y);
    }
    scratch.growth.clear();
    scratch.beta.clear();
    scratch.alpha.clear();
    let mut beta_zero = true;
    for (k, &dw) in increments.iter().enumerate() {
        let (a, b) = alpha_beta(model, n, scratch.ys[k], dw);
        scratch.alpha.push(a);
        scratch.growth.push(a.exp());
        scratch.beta.push(sgn(scratch.ys[k]) * b);
        beta_zero &= b == 0.0;
    }
    if beta_zero {
        // D_{v,w} = base · Π e^{α_l}: the supremum sits on the maximal
        // partial sum of α (empty sum included).
        let (mut best, mut current) = (0.0f64, 0.0f64);
        for &a in &scratch.alpha {
            current = (current + a).max(0.0);
            best = best.max(current);
        }
        return base * best.exp() <= r_n;
    }
    for v in 0..n {
        let mut d = base;
        for w in v..n {
            d = scratch.growth[w] * d + scratch.beta[w];
            if !(d.abs() <= r_n) {
                return false;
            }
        }
    }
    true
}

/// Result of the pathwise bound `|Y_N| <= 2 sup |W|` on `{sup |W| <= sqrt(N / 2T)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntroDomination {
    pub in_event: bool,
    /// Evaluated only inside the event.
    pub bound_holds: Option<bool>,
    pub bound: f64,
}

/// Checks the sup-of-Brownian-motion domination for the cubic model with
/// unit noise started at 0. The supremum is taken over the path grid.
pub fn intro_domination(traj: &EulerTrajectory, path: &BrownianPath) -> Result<IntroDomination> {
    let model = traj.model();
    let applicable = matches!(model.kind(), ModelKind::Cubic { sigma_bar } if sigma_bar == 1.0)
        && model.initial().constant() == Some(0.0)
        && traj.xi() == 0.0;
    if !applicable {
        return invalid(format!("{} is not the cubic model with unit noise started at 0", model.name()));
    }
    if path.horizon() != model.horizon() {
        return invalid("path and model horizons differ");
    }
    let sup = path.sup_abs();
    let in_event = sup <= intro_event_radius(traj.steps(), model.horizon());
    let bound = 2.0 * sup;
    let bound_holds = in_event.then(|| traj.terminal().abs() <= bound);
    Ok(IntroDomination { in_event, bound_holds, bound })
}

/// `sqrt(N / (2T))`.
pub fn intro_event_radius(steps: usize, horizon: f64) -> f64 {
    (steps as f64 / (2.0 * horizon)).sqrt()
}
