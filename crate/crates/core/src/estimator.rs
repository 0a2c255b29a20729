//! Monte Carlo Euler estimation with `M = N^2` balancing, restricted
//! (good-event) estimators, coupled sweeps over `N = 2^k`, and convergence
//! order fitting against the effort `N^3`.

use crate::brownian::{derive_seed, BrownianPath, RandomStream};
use crate::dominator::{intro_event_radius, omega_member, OmegaScratch};
use crate::error::{invalid, Error, Result};
use crate::euler::euler_terminal;
use crate::models::{ModelKind, SdeModel};
use crate::parallel::{map_chunks, RunConfig};
use crate::sum::KahanSum;

/// Largest sweep exponent accepted unless raised explicitly.
pub const DEFAULT_MAX_EXPONENT: u32 = 10;

/// Event used to restrict the estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Restriction {
    /// `Ω_N^m`: dominating process within `r_N`, increments within
    /// `N^{-1/4}`.
    #[default]
    Dominator,
    /// `{sup |W| <= sqrt(N / 2T)}` with the supremum over a grid four times
    /// finer than the Euler grid. Only for the cubic model with unit noise
    /// started at 0.
    BrownianSup,
}

impl Restriction {
    fn check(self, model: &SdeModel) -> Result<()> {
        match self {
            Restriction::Dominator => Ok(()),
            Restriction::BrownianSup => {
                let ok = matches!(model.kind(), ModelKind::Cubic { sigma_bar } if sigma_bar == 1.0)
                    && model.initial().constant() == Some(0.0);
                if ok {
                    Ok(())
                } else {
                    invalid(format!("the Brownian-sup event does not apply to {}", model.name()))
                }
            }
        }
    }
}

/// Extra grid levels used for the Brownian supremum.
const SUP_REFINEMENT: u32 = 2;

/// Result of one Monte Carlo Euler run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub steps: usize,
    pub samples: u64,
    /// `(1/M) Σ f(Y_N^m)`; non-finite if any term is.
    pub value: f64,
    /// Standard error of the unrestricted terms.
    pub value_std_error: f64,
    /// `(1/M) Σ 1_{Ω_N^m} f(Y_N^m)` over finite terms.
    pub restricted_value: f64,
    /// Standard error of the restricted terms.
    pub std_error: f64,
    /// Replicates outside the event or with a non-finite payoff.
    pub excluded_count: u64,
    pub non_finite_count: u64,
    /// `(1/M) Σ |f(Y_N^m)|` over finite terms.
    pub mean_abs_finite: f64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Accumulator {
    all: KahanSum,
    all_sq: KahanSum,
    restricted: KahanSum,
    restricted_sq: KahanSum,
    abs_finite: KahanSum,
    excluded: u64,
    non_finite: u64,
}

impl Accumulator {
    #[inline]
    fn push(&mut self, term: f64, member: bool) {
        self.all.add(term);
        self.all_sq.add(term * term);
        if !term.is_finite() {
            self.non_finite += 1;
            self.excluded += 1;
            return;
        }
        self.abs_finite.add(term.abs());
        if member {
            self.restricted.add(term);
            self.restricted_sq.add(term * term);
        } else {
            self.excluded += 1;
        }
    }

    fn merge(&mut self, other: &Accumulator) {
        self.all.merge(&other.all);
        self.all_sq.merge(&other.all_sq);
        self.restricted.merge(&other.restricted);
        self.restricted_sq.merge(&other.restricted_sq);
        self.abs_finite.merge(&other.abs_finite);
        self.excluded += other.excluded;
        self.non_finite += other.non_finite;
    }

    fn finish(&self, steps: usize, samples: u64) -> McEstimate {
        let m = samples as f64;
        let (mean, std_error) = mean_and_se(self.restricted.value(), self.restricted_sq.value(), samples);
        let (value, value_std_error) = mean_and_se(self.all.value(), self.all_sq.value(), samples);
        McEstimate {
            steps,
            samples,
            value,
            value_std_error,
            restricted_value: mean,
            std_error,
            excluded_count: self.excluded,
            non_finite_count: self.non_finite,
            mean_abs_finite: self.abs_finite.value() / m,
        }
    }
}

/// Sample mean and its standard error from a sum and a sum of squares.
pub(crate) fn mean_and_se(sum: f64, sum_sq: f64, samples: u64) -> (f64, f64) {
    let m = samples as f64;
    let mean = sum / m;
    if samples < 2 || !mean.is_finite() {
        return (mean, if mean.is_finite() { 0.0 } else { f64::NAN });
    }
    let var = (sum_sq - m * mean * mean) / (m - 1.0);
    (mean, (var.max(0.0) / m).sqrt())
}

/// Per-worker buffers for one replicate.
struct ReplicateBuffers {
    path: BrownianPath,
    incs: Vec<f64>,
    scratch: OmegaScratch,
}

impl ReplicateBuffers {
    fn new() -> Self {
        Self {
            path: BrownianPath::from_values(1.0, vec![0.0, 0.0]).expect("static"),
            incs: Vec::new(),
            scratch: OmegaScratch::default(),
        }
    }
}

/// Simulates `Y_N` for replicate stream `stream` and decides event
/// membership. Power-of-two `N` uses the dyadic path (coupled across `N`);
/// other `N` use fresh increments.
fn replicate(
    model: &SdeModel,
    steps: usize,
    restriction: Restriction,
    stream: RandomStream,
    buf: &mut ReplicateBuffers,
) -> (f64, bool) {
    let xi = model.initial().sample(&stream);
    if steps.is_power_of_two() {
        let extra = if restriction == Restriction::BrownianSup { SUP_REFINEMENT } else { 0 };
        let depth = steps.trailing_zeros() + extra;
        buf.path.resample(stream, model.horizon(), depth).expect("valid depth");
        buf.incs.resize(steps, 0.0);
        buf.path.increments_into(steps, &mut buf.incs).expect("power of two");
    } else {
        buf.incs = stream.fresh_increments(model.horizon(), steps);
    }
    let y = euler_terminal(model, &buf.incs, xi);
    let member = match restriction {
        Restriction::Dominator => omega_member(model, xi, &buf.incs, &mut buf.scratch),
        Restriction::BrownianSup => y.is_finite() && buf.path.sup_abs() <= intro_event_radius(steps, model.horizon()),
    };
    (y, member)
}

fn run<F>(
    model: &SdeModel,
    f: &F,
    steps: usize,
    samples: u64,
    seed: u64,
    restriction: Restriction,
    config: &RunConfig,
) -> Result<McEstimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    if steps == 0 {
        return invalid("N must be at least 1");
    }
    if samples == 0 {
        return invalid("M must be at least 1");
    }
    if steps.is_power_of_two() && steps.trailing_zeros() > crate::brownian::MAX_DEPTH - SUP_REFINEMENT {
        return invalid(format!("N = {steps} is too large"));
    }
    restriction.check(model)?;
    let partials = map_chunks(config, 1, samples, |range| {
        let mut buf = ReplicateBuffers::new();
        let mut acc = Accumulator::default();
        for m in range {
            let (y, member) = replicate(model, steps, restriction, RandomStream::new(seed, m), &mut buf);
            acc.push(f(y), member);
        }
        acc
    });
    let mut total = Accumulator::default();
    for p in &partials {
        total.merge(p);
    }
    Ok(total.finish(steps, samples))
}

/// Monte Carlo Euler estimate of `E[f(X_T)]` from replicates `m = 1..=M`
/// (stream `(seed, m)`), restricted to `Ω_N^m`.
pub fn mce<F>(model: &SdeModel, f: F, steps: usize, samples: u64, seed: u64, config: &RunConfig) -> Result<McEstimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    run(model, &f, steps, samples, seed, Restriction::Dominator, config)
}

/// [`mce`] with the balanced sample count `M = N^2`.
pub fn mce_balanced<F>(model: &SdeModel, f: F, steps: usize, seed: u64, config: &RunConfig) -> Result<McEstimate>
where
    F: Fn(f64) -> f64 + Sync,
{
    mce(model, f, steps, balanced_samples(steps), seed, config)
}

/// `M = N^2`.
pub fn balanced_samples(steps: usize) -> u64 {
    (steps as u64) * (steps as u64)
}

/// One row of a convergence sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub seed: u64,
    pub steps: usize,
    /// `N^2`.
    pub samples: u64,
    pub estimate: f64,
    pub restricted: f64,
    pub excluded_count: u64,
    pub abs_error: Option<f64>,
    /// `N^3`.
    pub effort: f64,
}

/// Monte Carlo Euler estimates for several `N = 2^k` on one sampled ω:
/// replicate `m` draws one dyadic path from stream `(seed, m)` and feeds it
/// to every `N` with `N^2 >= m`.
pub fn coupled_sweep<F>(
    model: &SdeModel,
    f: F,
    exponents: &[u32],
    seed: u64,
    max_exponent: u32,
    config: &RunConfig,
) -> Result<Vec<ConvergenceRow>>
where
    F: Fn(f64) -> f64 + Sync,
{
    let mut exps = exponents.to_vec();
    exps.sort_unstable();
    exps.dedup();
    let Some(&kmax) = exps.last() else {
        return invalid("empty list of step counts");
    };
    if kmax > max_exponent {
        return invalid(format!("N = 2^{kmax} exceeds the configured bound 2^{max_exponent}"));
    }
    let steps: Vec<usize> = exps.iter().map(|&k| 1usize << k).collect();
    let total = balanced_samples(*steps.last().unwrap());
    let partials = map_chunks(config, 1, total, |range| {
        let mut path = BrownianPath::from_values(1.0, vec![0.0, 0.0]).expect("static");
        let mut incs = Vec::new();
        let mut scratch = OmegaScratch::default();
        let mut accs = vec![Accumulator::default(); steps.len()];
        for m in range {
            let stream = RandomStream::new(seed, m);
            let xi = model.initial().sample(&stream);
            path.resample(stream, model.horizon(), kmax).expect("valid depth");
            for (acc, &n) in accs.iter_mut().zip(&steps) {
                if balanced_samples(n) < m {
                    continue;
                }
                incs.resize(n, 0.0);
                path.increments_into(n, &mut incs).expect("power of two");
                let y = euler_terminal(model, &incs, xi);
                let member = omega_member(model, xi, &incs, &mut scratch);
                acc.push(f(y), member);
            }
        }
        accs
    });
    let mut totals = vec![Accumulator::default(); steps.len()];
    for p in &partials {
        for (t, a) in totals.iter_mut().zip(p) {
            t.merge(a);
        }
    }
    Ok(steps
        .iter()
        .zip(&totals)
        .map(|(&n, acc)| {
            let est = acc.finish(n, balanced_samples(n));
            ConvergenceRow {
                seed,
                steps: n,
                samples: est.samples,
                estimate: est.value,
                restricted: est.restricted_value,
                excluded_count: est.excluded_count,
                abs_error: None,
                effort: (n as f64).powi(3),
            }
        })
        .collect())
}

/// Fills `abs_error = |estimate - reference|`.
pub fn error_rows(rows: &[ConvergenceRow], reference: f64) -> Result<Vec<ConvergenceRow>> {
    if !reference.is_finite() {
        return invalid("reference value must be finite");
    }
    Ok(rows.iter().map(|r| ConvergenceRow { abs_error: Some((r.estimate - reference).abs()), ..*r }).collect())
}

/// Per-`N` median of `abs_error` across sweeps with identical step lists.
pub fn median_errors(sweeps: &[Vec<ConvergenceRow>]) -> Result<Vec<(usize, f64)>> {
    let Some(first) = sweeps.first() else {
        return invalid("no sweeps");
    };
    let mut out = Vec::with_capacity(first.len());
    for (i, row) in first.iter().enumerate() {
        let mut errs = Vec::with_capacity(sweeps.len());
        for sweep in sweeps {
            let r = sweep.get(i).filter(|r| r.steps == row.steps);
            match r.and_then(|r| r.abs_error) {
                Some(e) => errs.push(e),
                None => return invalid("sweeps disagree on step counts or lack errors"),
            }
        }
        out.push((row.steps, median(&mut errs)));
    }
    Ok(out)
}

pub fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

/// Least-squares line through `(log10 effort, log10 error)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// `(effort, error)` pairs that entered the fit.
    pub points: Vec<(f64, f64)>,
}

impl OrderFit {
    /// Convergence order with respect to effort, `-slope`.
    pub fn order(&self) -> f64 {
        -self.slope
    }
}

/// Fits the error decay against effort; zero errors are dropped.
pub fn fit_order(points: &[(f64, f64)]) -> Result<OrderFit> {
    let used: Vec<(f64, f64)> =
        points.iter().copied().filter(|&(effort, err)| err > 0.0 && err.is_finite() && effort > 0.0).collect();
    if used.len() < 3 {
        return Err(Error::InsufficientData(format!("need at least 3 rows with positive error, got {}", used.len())));
    }
    let xs: Vec<f64> = used.iter().map(|p| p.0.log10()).collect();
    let ys: Vec<f64> = used.iter().map(|p| p.1.log10()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all rows share one effort".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(OrderFit { slope, intercept, r_squared, points: used })
}

/// [`fit_order`] on rows carrying `abs_error`.
pub fn fit_rows(rows: &[ConvergenceRow]) -> Result<OrderFit> {
    let pts: Vec<(f64, f64)> = rows.iter().filter_map(|r| r.abs_error.map(|e| (r.effort, e))).collect();
    fit_order(&pts)
}

/// Restricted moment and finiteness share at one `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRow {
    pub steps: usize,
    pub samples: u64,
    pub p: f64,
    /// `(1/M) Σ 1_{Ω} |Y_N|^p`.
    pub restricted_moment: f64,
    pub std_error: f64,
    /// Share of replicates with finite `|Y_N|^p`.
    pub finite_fraction: f64,
    pub excluded_count: u64,
}

/// Restricted absolute moments for each `N`. Every `N` gets its own
/// independent replicates (seed derived from `seed` and `N`).
pub fn moment_diagnostics(
    model: &SdeModel,
    p: f64,
    steps: &[usize],
    samples: u64,
    seed: u64,
    restriction: Restriction,
    config: &RunConfig,
) -> Result<Vec<MomentRow>> {
    if !(p >= 1.0) {
        return invalid(format!("moment exponent must be at least 1, got {p}"));
    }
    steps
        .iter()
        .map(|&n| {
            let est =
                run(model, &|y: f64| y.abs().powf(p), n, samples, derive_seed(seed, n as u64), restriction, config)?;
            Ok(MomentRow {
                steps: n,
                samples,
                p,
                restricted_moment: est.restricted_value,
                std_error: est.std_error,
                finite_fraction: 1.0 - est.non_finite_count as f64 / samples as f64,
                excluded_count: est.excluded_count,
            })
        })
        .collect()
}

/// Estimated probability of leaving the good event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaProbability {
    pub steps: usize,
    pub samples: u64,
    pub p_complement: f64,
    /// Binomial standard error `sqrt(p (1 - p) / M)`.
    pub std_error: f64,
}

impl OmegaProbability {
    /// `p ± k·se` clamped to [0, 1].
    pub fn interval(&self, k: f64) -> (f64, f64) {
        ((self.p_complement - k * self.std_error).max(0.0), (self.p_complement + k * self.std_error).min(1.0))
    }
}

/// Fraction of replicates outside `Ω_N^m` (stream `(seed, m)`).
pub fn prob_omega_complement(
    model: &SdeModel,
    steps: usize,
    samples: u64,
    seed: u64,
    config: &RunConfig,
) -> Result<OmegaProbability> {
    let est = run(model, &|_| 1.0, steps, samples, seed, Restriction::Dominator, config)?;
    let p = est.excluded_count as f64 / samples as f64;
    Ok(OmegaProbability { steps, samples, p_complement: p, std_error: (p * (1.0 - p) / samples as f64).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x: f64) -> f64 {
        x * x
    }

    #[test]
    fn constant_model_gives_exact_value() {
        let m = SdeModel::gbm(0.0, 0.0, 1.0, 1.0).unwrap();
        for n in [1, 3, 16] {
            let e = mce(&m, square, n, 500, 1, &RunConfig::with_workers(1)).unwrap();
            assert_eq!(e.value, 1.0);
            assert_eq!(e.non_finite_count, 0);
            assert!(e.excluded_count <= e.samples);
        }
    }

    #[test]
    fn no_exclusions_means_restricted_equals_value() {
        // gbm(0, 0) at N = 1024 lies in the event on every path.
        let m = SdeModel::gbm(0.0, 0.0, 1.0, 1.0).unwrap();
        let e = mce(&m, square, 1024, 20, 3, &RunConfig::with_workers(1)).unwrap();
        assert_eq!(e.excluded_count, 0);
        assert_eq!(e.restricted_value, e.value);
        assert_eq!(e.std_error, 0.0);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let m = SdeModel::ginzburg_landau();
        let a = mce(&m, square, 16, 9000, 5, &RunConfig::with_workers(1)).unwrap();
        let b = mce(&m, square, 16, 9000, 5, &RunConfig::with_workers(3)).unwrap();
        assert_eq!(a, b);
        let a = coupled_sweep(&m, square, &[0, 3, 6], 2, 10, &RunConfig::with_workers(1)).unwrap();
        let b = coupled_sweep(&m, square, &[6, 3, 0], 2, 10, &RunConfig::with_workers(4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_rows_match_independent_mce_runs() {
        // Replicates m <= N^2 of the sweep are exactly the replicates of a
        // balanced mce run at that N.
        let m = SdeModel::cubic(1.0, 0.0, 1.0).unwrap();
        let rows = coupled_sweep(&m, square, &[1, 2, 4], 8, 10, &RunConfig::default()).unwrap();
        for row in &rows {
            let e = mce_balanced(&m, square, row.steps, 8, &RunConfig::default()).unwrap();
            assert_eq!(row.estimate, e.value);
            assert_eq!(row.samples, row.steps as u64 * row.steps as u64);
            assert_eq!(row.effort, (row.steps as f64).powi(3));
        }
    }

    #[test]
    fn single_row_sweep_of_frozen_model() {
        let m = SdeModel::gbm(0.0, 0.0, 2.0, 1.0).unwrap();
        let rows = coupled_sweep(&m, square, &[0], 0, 10, &RunConfig::default()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].estimate, 4.0);
        assert!(coupled_sweep(&m, square, &[11], 0, 10, &RunConfig::default()).is_err());
        assert!(coupled_sweep(&m, square, &[], 0, 10, &RunConfig::default()).is_err());
    }

    #[test]
    fn error_rows_examples() {
        let row = ConvergenceRow {
            seed: 0,
            steps: 512,
            samples: 512 * 512,
            estimate: 0.4935,
            restricted: 0.0,
            excluded_count: 0,
            abs_error: None,
            effort: 512f64.powi(3),
        };
        let e = error_rows(&[row], 0.4945).unwrap();
        assert!((e[0].abs_error.unwrap() - 0.0010).abs() < 1e-12);
        let e = error_rows(&[ConvergenceRow { estimate: 1.4516, ..row }], 0.4529).unwrap();
        assert!((e[0].abs_error.unwrap() - 0.9987).abs() < 1e-12);
        let e = error_rows(&[row], 0.4935).unwrap();
        assert_eq!(e[0].abs_error, Some(0.0));
        assert!(error_rows(&[row], f64::NAN).is_err());
    }

    #[test]
    fn fit_recovers_exact_power_law() {
        let pts: Vec<(f64, f64)> = (0..10)
            .map(|k| {
                let effort = 8f64.powi(k);
                (effort, effort.powf(-1.0 / 3.0))
            })
            .collect();
        let fit = fit_order(&pts).unwrap();
        assert!((fit.slope + 1.0 / 3.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);

        let flat: Vec<(f64, f64)> = (1..6).map(|k| (k as f64 * 10.0, 0.25)).collect();
        let fit = fit_order(&flat).unwrap();
        assert!(fit.slope.abs() < 1e-12);

        let sparse = [(1.0, 0.5), (8.0, 0.0), (64.0, 0.1)];
        assert!(matches!(fit_order(&sparse), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn moment_diagnostics_of_frozen_model() {
        let m = SdeModel::gbm(0.0, 0.0, 1.0, 1.0).unwrap();
        let rows =
            moment_diagnostics(&m, 2.0, &[64, 1024], 50, 1, Restriction::Dominator, &RunConfig::default()).unwrap();
        // Outside the event for N = 64 (r_N too small), inside for N = 1024.
        assert_eq!(rows[0].restricted_moment, 0.0);
        assert_eq!(rows[0].excluded_count, 50);
        assert_eq!(rows[1].restricted_moment, 1.0);
        assert!(rows.iter().all(|r| r.finite_fraction == 1.0));
        assert!(moment_diagnostics(&m, 0.5, &[4], 5, 1, Restriction::Dominator, &RunConfig::default()).is_err());
        assert!(moment_diagnostics(&m, 2.0, &[4], 5, 1, Restriction::BrownianSup, &RunConfig::default()).is_err());
    }

    #[test]
    fn deterministic_blow_up_has_no_finite_samples() {
        let m = SdeModel::cubic(0.0, 10.0, 1.0).unwrap();
        let rows = moment_diagnostics(&m, 2.0, &[10], 20, 0, Restriction::Dominator, &RunConfig::default()).unwrap();
        assert_eq!(rows[0].finite_fraction, 0.0);
        assert_eq!(rows[0].restricted_moment, 0.0);
        let e = mce(&m, square, 10, 20, 0, &RunConfig::default()).unwrap();
        assert!(!e.value.is_finite());
        assert_eq!(e.non_finite_count, 20);
    }

    #[test]
    fn omega_probability_of_frozen_model_is_degenerate() {
        let m = SdeModel::gbm(0.0, 0.0, 1.0, 1.0).unwrap();
        let p = prob_omega_complement(&m, 64, 100, 0, &RunConfig::default()).unwrap();
        assert_eq!((p.p_complement, p.std_error), (1.0, 0.0));
        let p = prob_omega_complement(&m, 1024, 10, 0, &RunConfig::default()).unwrap();
        assert_eq!((p.p_complement, p.std_error), (0.0, 0.0));
        let (lo, hi) = p.interval(3.0);
        assert!(lo >= 0.0 && hi <= 1.0);
    }

    #[test]
    fn median_of_sweeps() {
        let row = |e: f64| ConvergenceRow {
            seed: 0,
            steps: 4,
            samples: 16,
            estimate: 0.0,
            restricted: 0.0,
            excluded_count: 0,
            abs_error: Some(e),
            effort: 64.0,
        };
        let sweeps = vec![vec![row(0.3)], vec![row(0.1)], vec![row(0.2)]];
        assert_eq!(median_errors(&sweeps).unwrap(), vec![(4, 0.2)]);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
