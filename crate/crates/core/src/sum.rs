//! Compensated summation with a fixed merge order.

/// Kahan–Babuška (Neumaier) accumulator.
///
/// Partial sums produced by independent workers are combined with
/// [`KahanSum::merge`] in replicate order, which makes totals independent of
/// how the work was scheduled.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another partial sum into this one.
    pub fn merge(&mut self, other: &KahanSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        let v = self.sum + self.comp;
        // Non-finite inputs poison the compensation term with NaN.
        if self.sum.is_finite() {
            v
        } else {
            self.sum
        }
    }
}

impl Extend<f64> for KahanSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = KahanSum::new();
        s.extend(iter);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_sum() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        let naive: f64 = xs.iter().sum();
        let k: KahanSum = xs.iter().copied().collect();
        assert_eq!(naive, 0.0);
        assert_eq!(k.value(), 2.0);
    }

    #[test]
    fn many_tenths() {
        let k: KahanSum = std::iter::repeat_n(0.1, 1_000_000).collect();
        assert!((k.value() - 100_000.0).abs() < 1e-9);
    }

    #[test]
    fn merge_in_fixed_order_is_reproducible() {
        let xs: Vec<f64> = (0..10_000).map(|i| ((i as f64) * 0.37).sin() * 1e3).collect();
        let merged = |chunk: usize| {
            let mut total = KahanSum::new();
            for c in xs.chunks(chunk) {
                total.merge(&c.iter().copied().collect());
            }
            total.value()
        };
        assert_eq!(merged(128), merged(128));
        let exact: KahanSum = xs.iter().copied().collect();
        assert!((merged(128) - exact.value()).abs() < 1e-9);
    }

    #[test]
    fn infinity_propagates() {
        let k: KahanSum = [1.0, f64::INFINITY, 2.0].into_iter().collect();
        assert_eq!(k.value(), f64::INFINITY);
    }
}
