//! Compensated (Neumaier) summation.
//!
//! Quadrature sums here can mix tens of thousands of terms spanning many
//! orders of magnitude; plain accumulation adds avoidable rounding on top of
//! the double-precision limits already visible at high harmonic order.

/// Neumaier-compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation_naive_sum_loses() {
        // 1 + tiny - 1 repeated: naive sum drops the tiny part entirely.
        let tiny = 1e-17;
        let mut kahan = KahanSum::new();
        let mut naive = 0.0;
        for _ in 0..1000 {
            for v in [1.0, tiny, -1.0] {
                kahan.add(v);
                naive += v;
            }
        }
        let exact = 1000.0 * tiny;
        assert!((kahan.value() - exact).abs() < 1e-25);
        assert!((naive - exact).abs() > 1e-15 * exact.abs() || naive == 0.0);
    }

    #[test]
    fn handles_terms_larger_than_running_sum() {
        let mut acc = KahanSum::new();
        acc.add(1.0);
        acc.add(1e100);
        acc.add(1.0);
        acc.add(-1e100);
        assert_eq!(acc.value(), 2.0);
    }
}
