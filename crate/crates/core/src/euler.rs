//! The explicit Euler–Maruyama scheme, its piecewise interpolation, and the
//! drift-only blow-up experiment.

use crate::brownian::BrownianPath;
use crate::error::{invalid, Result};
use crate::models::SdeModel;

/// Euler values `Y_0..=Y_N` driven by given Brownian increments.
#[derive(Debug, Clone)]
pub struct EulerTrajectory {
    model: SdeModel,
    steps: usize,
    xi: f64,
    values: Vec<f64>,
    increments: Vec<f64>,
    first_non_finite: Option<usize>,
}

impl EulerTrajectory {
    pub fn model(&self) -> &SdeModel {
        &self.model
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn step_size(&self) -> f64 {
        self.model.horizon() / self.steps as f64
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    pub fn terminal(&self) -> f64 {
        self.values[self.steps]
    }

    /// True when every `Y_n` is finite.
    pub fn is_finite(&self) -> bool {
        self.first_non_finite.is_none()
    }

    /// Index of the first overflowed (±∞ or NaN) value.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.first_non_finite
    }
}

/// Runs `Y_{n+1} = Y_n + (T/N) μ(Y_n) + σ(Y_n) ΔW_n` from `Y_0 = xi`.
/// Overflow is not an error; it is recorded on the trajectory.
pub fn euler_path(model: &SdeModel, steps: usize, increments: &[f64], xi: f64) -> Result<EulerTrajectory> {
    if steps == 0 {
        return invalid("the Euler scheme needs at least one step");
    }
    if increments.len() != steps {
        return invalid(format!("expected {steps} increments, got {}", increments.len()));
    }
    let h = model.horizon() / steps as f64;
    let mut values = Vec::with_capacity(steps + 1);
    values.push(xi);
    let mut y = xi;
    for &dw in increments {
        y = step(model, h, y, dw);
        values.push(y);
    }
    let first_non_finite = values.iter().position(|v| !v.is_finite());
    Ok(EulerTrajectory { model: model.clone(), steps, xi, values, increments: increments.to_vec(), first_non_finite })
}

#[inline(always)]
fn step(model: &SdeModel, h: f64, y: f64, dw: f64) -> f64 {
    y + h * model.mu(y) + model.sigma(y) * dw
}

/// Terminal value `Y_N` only, without storing the trajectory. Bit-identical
/// to `euler_path(..).terminal()`.
#[inline]
pub fn euler_terminal(model: &SdeModel, increments: &[f64], xi: f64) -> f64 {
    let h = model.horizon() / increments.len() as f64;
    increments.iter().fold(xi, |y, &dw| step(model, h, y, dw))
}

/// Interpolated value at grid index `k` of `path`:
/// `Y_n + (t - t_n) μ(Y_n) + σ(Y_n) (W_t - W_{t_n})` for `t_n <= t <= t_{n+1}`.
/// Grid times of the Euler scheme return the stored `Y_n`.
pub fn interpolate_index(traj: &EulerTrajectory, path: &BrownianPath, k: usize) -> Result<f64> {
    let n = traj.steps;
    if !n.is_power_of_two() || n > path.intervals() {
        return invalid(format!("path of depth {} cannot resolve {n} steps", path.depth()));
    }
    if path.horizon() != traj.model.horizon() {
        return invalid("path and trajectory horizons differ");
    }
    if k > path.intervals() {
        return invalid(format!("grid index {k} beyond the path"));
    }
    let stride = path.intervals() / n;
    let (step_index, offset) = (k / stride, k % stride);
    let y = traj.values[step_index];
    if offset == 0 {
        return Ok(y);
    }
    let dt = offset as f64 * path.grid_step();
    let dw = path.values()[k] - path.values()[step_index * stride];
    Ok(y + dt * traj.model.mu(y) + traj.model.sigma(y) * dw)
}

/// [`interpolate_index`] at time `t`, which must lie on the path grid.
pub fn interpolate(traj: &EulerTrajectory, path: &BrownianPath, t: f64) -> Result<f64> {
    match path.grid_index(t) {
        Some(k) => interpolate_index(traj, path, k),
        None => invalid(format!("time {t} is not on the dyadic grid of depth {}", path.depth())),
    }
}

/// Outcome of the deterministic blow-up experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    /// First `n` with `|Y_n| >= threshold`.
    pub steps_to_exceed: Option<usize>,
    pub values: Vec<f64>,
}

/// Drift-only Euler recursion `Y_{n+1} = Y_n + (T/N) μ(Y_n)` over `N` steps.
/// Arithmetic saturates at ±∞ (and NaN past that) without trapping.
pub fn divergence_demo(model: &SdeModel, x0: f64, steps: usize, threshold: f64) -> Result<DivergenceReport> {
    if !(threshold > x0.abs()) {
        return invalid(format!("threshold {threshold} must exceed |x0| = {}", x0.abs()));
    }
    if steps == 0 {
        return invalid("need at least one step");
    }
    let h = model.horizon() / steps as f64;
    let mut values = Vec::with_capacity(steps + 1);
    let mut y = x0;
    values.push(y);
    let mut hit = None;
    for n in 1..=steps {
        y += h * model.mu(y);
        values.push(y);
        // NaN counts as having exceeded: it only arises after overflow.
        if hit.is_none() && !(y.abs() < threshold) {
            hit = Some(n);
        }
    }
    Ok(DivergenceReport { steps_to_exceed: hit, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brownian::RandomStream;

    #[test]
    fn single_deterministic_step() {
        let m = SdeModel::cubic(0.0, 2.0, 1.0).unwrap();
        let t = euler_path(&m, 1, &[0.7], 2.0).unwrap();
        assert_eq!(t.values(), &[2.0, -6.0]);
    }

    #[test]
    fn zero_coefficients_freeze_the_state() {
        let m = SdeModel::gbm(0.0, 0.0, 1.0, 1.0).unwrap();
        let t = euler_path(&m, 4, &[0.3, -2.0, 5.0, 0.1], 1.0).unwrap();
        assert!(t.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn additive_noise_step() {
        let m = SdeModel::cubic(1.0, 0.0, 1.0).unwrap();
        let t = euler_path(&m, 1, &[0.3], 0.0).unwrap();
        assert_eq!(t.terminal(), 0.3);
    }

    #[test]
    fn rejects_bad_lengths() {
        let m = SdeModel::ginzburg_landau();
        assert!(euler_path(&m, 3, &[0.1, 0.2], 1.0).is_err());
        assert!(euler_path(&m, 0, &[], 1.0).is_err());
    }

    #[test]
    fn overflow_is_flagged_not_trapped() {
        let m = SdeModel::cubic(1.0, 0.0, 1.0).unwrap();
        let t = euler_path(&m, 8, &[0.0; 8], 1e100).unwrap();
        assert!(!t.is_finite());
        assert_eq!(t.first_non_finite(), Some(2));
    }

    #[test]
    fn terminal_only_matches_full_path() {
        let m = SdeModel::ginzburg_landau();
        for r in 0..20 {
            let p = BrownianPath::sample(RandomStream::new(9, r), 1.0, 6).unwrap();
            let inc = p.increments(64).unwrap();
            let full = euler_path(&m, 64, &inc, 1.0).unwrap();
            assert_eq!(full.terminal().to_bits(), euler_terminal(&m, &inc, 1.0).to_bits());
        }
    }

    #[test]
    fn interpolation_hits_grid_values() {
        let m = SdeModel::ginzburg_landau();
        let p = BrownianPath::sample(RandomStream::new(2, 2), 1.0, 6).unwrap();
        let t = euler_path(&m, 8, &p.increments(8).unwrap(), 1.0).unwrap();
        for n in 0..=8 {
            let time = n as f64 / 8.0;
            assert_eq!(interpolate(&t, &p, time).unwrap(), t.values()[n]);
        }
        // Interior point in [t_2, t_3].
        let k = 2 * 8 + 3;
        let y = t.values()[2];
        let expected = y + (3.0 / 64.0) * m.mu(y) + m.sigma(y) * (p.values()[k] - p.values()[16]);
        assert_eq!(interpolate_index(&t, &p, k).unwrap(), expected);
        assert!(interpolate(&t, &p, 0.3).is_err());
    }

    #[test]
    fn interpolation_of_frozen_model_is_flat() {
        let m = SdeModel::gbm(0.0, 0.0, 1.0, 1.0).unwrap();
        let p = BrownianPath::sample(RandomStream::new(2, 5), 1.0, 5).unwrap();
        let t = euler_path(&m, 4, &p.increments(4).unwrap(), 1.0).unwrap();
        for k in 0..=32 {
            assert_eq!(interpolate_index(&t, &p, k).unwrap(), 1.0);
        }
    }

    #[test]
    fn interpolation_endpoint_reproduces_next_step() {
        // Along a step the formula evaluated at t_{n+1} is exactly the Euler
        // update.
        let m = SdeModel::cubic(1.0, 0.0, 1.0).unwrap();
        let p = BrownianPath::sample(RandomStream::new(4, 1), 1.0, 4).unwrap();
        let t = euler_path(&m, 4, &p.increments(4).unwrap(), 0.0).unwrap();
        for n in 0..4 {
            let y = t.values()[n];
            let dw = p.values()[4 * (n + 1)] - p.values()[4 * n];
            assert_eq!(y + 0.25 * m.mu(y) + m.sigma(y) * dw, t.values()[n + 1]);
        }
    }

    #[test]
    fn divergence_from_large_start() {
        let m = SdeModel::cubic(0.0, 10.0, 1.0).unwrap();
        let r = divergence_demo(&m, 10.0, 10, 1e50).unwrap();
        assert_eq!(r.values[1], -90.0);
        assert!(r.steps_to_exceed.unwrap() <= 6);
        assert_eq!(r.steps_to_exceed, Some(5));
    }

    #[test]
    fn small_start_decays() {
        let m = SdeModel::cubic(0.0, 0.1, 1.0).unwrap();
        let r = divergence_demo(&m, 0.1, 100, 10.0).unwrap();
        assert_eq!(r.steps_to_exceed, None);
        assert!(r.values.windows(2).all(|w| w[1].abs() <= w[0].abs()));
    }

    #[test]
    fn period_two_boundary_oscillates() {
        let m = SdeModel::cubic(0.0, 0.0, 1.0).unwrap();
        // x* = sqrt(2N/T) maps to -x*; with N = 2 that is exactly 2.
        let r = divergence_demo(&m, 2.0, 2, 3.0).unwrap();
        assert_eq!(r.values, vec![2.0, -2.0, 2.0]);
        assert!(divergence_demo(&m, 2.0, 2, 1.0).is_err());
    }
}
