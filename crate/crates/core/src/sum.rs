//! Compensated summation.
//!
//! All the force and kernel sums in this crate run through [`Neumaier`],
//! in a fixed index order, so results are reproducible on one platform and
//! accurate to a few ulps of the result regardless of cancellation.

use std::iter::FromIterator;
use std::ops::AddAssign;

/// Kahan–Babuška–Neumaier accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl AddAssign<f64> for Neumaier {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for Neumaier {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Neumaier::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

impl Extend<f64> for Neumaier {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Compensated sum of an iterator, in iteration order.
pub fn csum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().collect::<Neumaier>().value()
}

/// Per-component compensated accumulator for 3-vectors.
#[derive(Clone, Copy, Debug, Default)]
pub struct Neumaier3([Neumaier; 3]);

impl Neumaier3 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: [f64; 3]) {
        for (acc, c) in self.0.iter_mut().zip(v) {
            acc.add(c);
        }
    }

    pub fn value(&self) -> [f64; 3] {
        [self.0[0].value(), self.0[1].value(), self.0[2].value()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let values = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(values.iter().sum::<f64>(), 0.0);
        assert_eq!(csum(values), 2.0);
    }

    #[test]
    fn tenths_sum_exactly() {
        let s = csum(std::iter::repeat_n(0.1, 10));
        assert_eq!(s, 1.0);
    }

    #[test]
    fn vector_accumulator() {
        let mut acc = Neumaier3::new();
        acc.add([1e16, 1.0, -2.0]);
        acc.add([1.0, 1.0, 2.0]);
        acc.add([-1e16, 0.5, 0.0]);
        assert_eq!(acc.value(), [1.0, 2.5, 0.0]);
    }
}
