//! Counter-based random streams and dyadically refinable Brownian paths.
//!
//! Every draw is a pure function of `(seed, replicate, lane, index)`, so any
//! replicate can be regenerated in isolation, in any order, on any thread.
//! Paths are built coarse-to-fine (Lévy midpoint construction) and the draw
//! used for a grid point depends only on its dyadic position, which makes
//! deepening a path leave every existing grid value untouched.

use crate::error::{invalid, Result};
use crate::normal;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives an independent experiment seed from `seed` and a tag, e.g. to
/// give every step count of a diagnostic its own replicates.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    mix64(seed ^ mix64(tag.wrapping_add(GOLDEN)).rotate_left(17))
}

/// Independent sub-sequences carried by one replicate stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lane {
    /// Brownian increments / midpoints.
    Brownian,
    /// The random initial value ξ.
    Initial,
    /// Fresh (uncoupled) increments for arbitrary step counts.
    Fresh,
}

impl Lane {
    fn tag(self) -> u64 {
        match self {
            Lane::Brownian => 0x42,
            Lane::Initial => 0x1e,
            Lane::Fresh => 0xf5,
        }
    }
}

/// Replayable random stream for replicate `m` of an experiment seeded with
/// `seed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RandomStream {
    seed: u64,
    replicate: u64,
    key: u64,
}

impl RandomStream {
    pub fn new(seed: u64, replicate: u64) -> Self {
        let key = mix64(mix64(seed ^ 0x6a09_e667_f3bc_c908).wrapping_add(replicate.wrapping_mul(GOLDEN)) ^ replicate);
        Self { seed, replicate, key }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replicate(&self) -> u64 {
        self.replicate
    }

    #[inline]
    fn bits(&self, lane: Lane, index: u64) -> u64 {
        let lane_key = self.key ^ lane.tag().wrapping_mul(0xd1b5_4a32_d192_ed03);
        mix64(mix64(lane_key.wrapping_add(index.wrapping_mul(GOLDEN))) ^ lane_key)
    }

    /// Uniform draw on the open interval (0, 1).
    #[inline]
    pub fn uniform(&self, lane: Lane, index: u64) -> f64 {
        ((self.bits(lane, index) >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal draw via the inverse CDF.
    #[inline]
    pub fn normal(&self, lane: Lane, index: u64) -> f64 {
        normal::inverse_cdf(self.uniform(lane, index))
    }

    /// `n` i.i.d. N(0, T/n) increments, not coupled to any dyadic path.
    pub fn fresh_increments(&self, horizon: f64, n: usize) -> Vec<f64> {
        let sd = (horizon / n as f64).sqrt();
        (0..n as u64).map(|i| sd * self.normal(Lane::Fresh, i)).collect()
    }
}

/// Grid values are integer multiples of `2^-40`. For `|W| < 2^12` every
/// increment and every sum of adjacent increments is then computed without
/// rounding, so coarse increments equal pairwise sums of fine ones exactly.
const QUANTUM_BITS: i32 = 40;

#[inline]
fn quantize(x: f64) -> f64 {
    let scale = (1u64 << QUANTUM_BITS) as f64;
    (x * scale).round() / scale
}

/// Fills the midpoints of levels `from + 1..=to` in a grid of `2^to + 1`
/// values whose level-`from` points are already set. The draw for the
/// midpoint `(2j + 1) / 2^level` is `Brownian` index `2^(level-1) + j`.
fn fill_levels(values: &mut [f64], stream: &RandomStream, horizon: f64, from: u32, to: u32) {
    for level in from + 1..=to {
        // Midpoints of intervals of length T / 2^(level-1); the bridge
        // variance at a midpoint is a quarter of the interval length.
        let sd = (horizon / (1u64 << (level + 1)) as f64).sqrt();
        let half = 1usize << (to - level);
        let base = 1u64 << (level - 1);
        for j in 0..(1usize << (level - 1)) {
            let mid = (2 * j + 1) * half;
            let z = stream.normal(Lane::Brownian, base + j as u64);
            values[mid] = quantize(0.5 * (values[mid - half] + values[mid + half]) + sd * z);
        }
    }
}

/// A Brownian path sampled at the dyadic grid `k T / 2^depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownianPath {
    horizon: f64,
    depth: u32,
    values: Vec<f64>,
    stream: Option<RandomStream>,
}

/// Largest supported depth; 2^24 grid intervals.
pub const MAX_DEPTH: u32 = 24;

impl BrownianPath {
    /// Samples a path at the given depth: `W_T` first, then conditional
    /// midpoints level by level.
    pub fn sample(stream: RandomStream, horizon: f64, depth: u32) -> Result<Self> {
        let mut path = BrownianPath { horizon, depth: 0, values: Vec::new(), stream: Some(stream) };
        path.resample(stream, horizon, depth)?;
        Ok(path)
    }

    /// Re-samples this path in place from another stream, reusing the grid
    /// buffer. Produces exactly what [`Self::sample`] would.
    pub fn resample(&mut self, stream: RandomStream, horizon: f64, depth: u32) -> Result<()> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return invalid(format!("horizon must be positive, got {horizon}"));
        }
        if depth > MAX_DEPTH {
            return invalid(format!("depth {depth} exceeds the maximum {MAX_DEPTH}"));
        }
        let n = 1usize << depth;
        self.values.clear();
        self.values.resize(n + 1, 0.0);
        self.values[n] = quantize(horizon.sqrt() * stream.normal(Lane::Brownian, 0));
        self.horizon = horizon;
        self.depth = depth;
        self.stream = Some(stream);
        fill_levels(&mut self.values, &stream, horizon, 0, depth);
        Ok(())
    }

    /// Wraps explicit grid values (for synthetic paths in tests and
    /// diagnostics). The path cannot be refined.
    pub fn from_values(horizon: f64, values: Vec<f64>) -> Result<Self> {
        let intervals = values.len().saturating_sub(1);
        if intervals == 0 || !intervals.is_power_of_two() {
            return invalid(format!("need 2^d + 1 grid values, got {}", values.len()));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return invalid(format!("horizon must be positive, got {horizon}"));
        }
        if values[0] != 0.0 {
            return invalid("a Brownian path starts at 0");
        }
        Ok(BrownianPath { horizon, depth: intervals.trailing_zeros(), values, stream: None })
    }

    /// Deepens the grid to `depth`, keeping all existing values bit-exactly.
    pub fn refine_to(&mut self, depth: u32) -> Result<()> {
        if depth > MAX_DEPTH {
            return invalid(format!("depth {depth} exceeds the maximum {MAX_DEPTH}"));
        }
        if depth <= self.depth {
            return Ok(());
        }
        let Some(stream) = self.stream else {
            return invalid("synthetic paths cannot be refined");
        };
        let spread = 1usize << (depth - self.depth);
        let mut fine = vec![0.0; (1usize << depth) + 1];
        for (k, v) in self.values.iter().enumerate() {
            fine[k * spread] = *v;
        }
        fill_levels(&mut fine, &stream, self.horizon, self.depth, depth);
        self.values = fine;
        self.depth = depth;
        Ok(())
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Grid values `W_{k T / 2^depth}` for `k = 0..=2^depth`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn stream(&self) -> Option<RandomStream> {
        self.stream
    }

    /// Number of finest grid intervals, `2^depth`.
    pub fn intervals(&self) -> usize {
        self.values.len() - 1
    }

    /// Spacing of the finest grid.
    pub fn grid_step(&self) -> f64 {
        self.horizon / self.intervals() as f64
    }

    /// Grid index of time `t`, if `t` lies exactly on the grid.
    pub fn grid_index(&self, t: f64) -> Option<usize> {
        let k = (t / self.grid_step()).round();
        if !(0.0..=self.intervals() as f64).contains(&k) {
            return None;
        }
        let k = k as usize;
        (k as f64 * self.grid_step() == t).then_some(k)
    }

    fn stride(&self, n: usize) -> Result<usize> {
        if n == 0 || !n.is_power_of_two() || n > self.intervals() {
            return invalid(format!("step count {n} must be a power of two no larger than {}", self.intervals()));
        }
        Ok(self.intervals() / n)
    }

    /// `W_{t_{n+1}} - W_{t_n}` on the uniform grid with `n` steps.
    pub fn increments(&self, n: usize) -> Result<Vec<f64>> {
        let mut out = vec![0.0; n];
        self.increments_into(n, &mut out)?;
        Ok(out)
    }

    /// Allocation-free form of [`Self::increments`]; `out` must have length `n`.
    pub fn increments_into(&self, n: usize, out: &mut [f64]) -> Result<()> {
        let stride = self.stride(n)?;
        if out.len() != n {
            return invalid(format!("output buffer has length {}, expected {n}", out.len()));
        }
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.values[(i + 1) * stride] - self.values[i * stride];
        }
        Ok(())
    }

    /// Grid maximum of `|W|`. This approximates the pathwise supremum from
    /// below; refining can only increase it.
    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Grid maximum of `|W|` over `[0, t_k]` on the `n`-step grid.
    pub fn sup_abs_until(&self, n: usize, k: usize) -> Result<f64> {
        let stride = self.stride(n)?;
        Ok(self.values[..=k.min(n) * stride].iter().fold(0.0, |m, v| m.max(v.abs())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn normals(s: &RandomStream, n: u64) -> Vec<f64> {
        (0..n).map(|i| s.normal(Lane::Brownian, i)).collect()
    }

    #[test]
    fn streams_replay_and_separate() {
        let a = RandomStream::new(1, 1);
        assert_eq!(normals(&a, 64), normals(&RandomStream::new(1, 1), 64));
        assert_ne!(normals(&a, 64), normals(&RandomStream::new(1, 2), 64));
        assert_ne!(normals(&a, 64), normals(&RandomStream::new(2, 1), 64));
        assert_ne!(a.normal(Lane::Brownian, 3), a.normal(Lane::Initial, 3));
    }

    #[test]
    fn depth_zero_has_endpoint_only() {
        let s = RandomStream::new(5, 9);
        let p = BrownianPath::sample(s, 2.0, 0).unwrap();
        assert_eq!(p.values().len(), 2);
        assert_eq!(p.values()[0], 0.0);
        assert_eq!(p.values()[1], quantize(2f64.sqrt() * s.normal(Lane::Brownian, 0)));
    }

    #[test]
    fn refining_matches_direct_sampling_bit_exactly() {
        let s = RandomStream::new(11, 4);
        let mut p = BrownianPath::sample(s, 1.0, 3).unwrap();
        let direct = BrownianPath::sample(s, 1.0, 5).unwrap();
        let coarse = p.values().to_vec();
        p.refine_to(5).unwrap();
        assert_eq!(p, direct);
        for (k, v) in coarse.iter().enumerate() {
            assert_eq!(p.values()[4 * k].to_bits(), v.to_bits());
        }
    }

    #[test]
    fn increments_telescope_and_nest() {
        let p = BrownianPath::sample(RandomStream::new(3, 3), 1.0, 2).unwrap();
        let fine = p.increments(4).unwrap();
        assert_eq!(fine, p.values().windows(2).map(|w| w[1] - w[0]).collect::<Vec<_>>());
        let half = p.increments(2).unwrap();
        assert_eq!(half[0], p.values()[2] - p.values()[0]);
        assert_eq!(half, vec![fine[0] + fine[1], fine[2] + fine[3]]);
        let sum: f64 = fine.iter().sum();
        assert_eq!(sum, p.values()[4]);
        assert!(p.increments(3).is_err());
        assert!(p.increments(8).is_err());
        assert!(p.increments(0).is_err());
    }

    #[test]
    fn sup_abs_on_synthetic_paths() {
        let zero = BrownianPath::from_values(1.0, vec![0.0; 5]).unwrap();
        assert_eq!(zero.sup_abs(), 0.0);
        let p = BrownianPath::from_values(1.0, vec![0.0, -1.0, 0.5]).unwrap();
        assert_eq!(p.sup_abs(), 1.0);
        assert!(BrownianPath::from_values(1.0, vec![0.0, 1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn sup_abs_never_decreases_under_refinement() {
        for m in 0..50 {
            let mut p = BrownianPath::sample(RandomStream::new(0, m), 1.0, 2).unwrap();
            let mut prev = p.sup_abs();
            for d in 3..9 {
                p.refine_to(d).unwrap();
                assert!(p.sup_abs() >= prev);
                prev = p.sup_abs();
            }
        }
    }

    #[test]
    fn grid_index_lookup() {
        let p = BrownianPath::sample(RandomStream::new(0, 0), 1.0, 3).unwrap();
        assert_eq!(p.grid_index(0.375), Some(3));
        assert_eq!(p.grid_index(1.0), Some(8));
        assert_eq!(p.grid_index(0.3), None);
        assert_eq!(p.grid_index(1.5), None);
    }

    #[test]
    fn fresh_increments_have_requested_length() {
        let s = RandomStream::new(1, 1);
        let v = s.fresh_increments(1.0, 7);
        assert_eq!(v.len(), 7);
        assert_eq!(v, s.fresh_increments(1.0, 7));
    }
}
