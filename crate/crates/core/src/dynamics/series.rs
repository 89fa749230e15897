use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Uniform time grid `t_start..=t_end` with `n_points` samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid<T: Real> {
    t_start: T,
    t_end: T,
    n_points: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t_start: T, t_end: T, n_points: usize) -> Result<Self> {
        if !(t_start >= T::zero()) || !t_start.is_finite() {
            return Err(invalid("t_start", "must be finite and non-negative"));
        }
        if !(t_end > t_start) || !t_end.is_finite() {
            return Err(invalid("t_end", "must be finite and exceed t_start"));
        }
        if n_points < 2 {
            return Err(invalid("n_points", "need at least two points"));
        }
        Ok(Self {
            t_start,
            t_end,
            n_points,
        })
    }

    pub fn t_start(&self) -> T {
        self.t_start
    }

    pub fn t_end(&self) -> T {
        self.t_end
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> T {
        (self.t_end - self.t_start) / T::from_usize_lossy(self.n_points - 1)
    }

    pub fn times(&self) -> Vec<T> {
        let last = self.n_points - 1;
        (0..self.n_points)
            .map(|i| {
                if i == last {
                    self.t_end
                } else {
                    self.t_start + self.step() * T::from_usize_lossy(i)
                }
            })
            .collect()
    }
}

/// Real observable sampled on strictly increasing times.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries<T: Real> {
    times: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> TimeSeries<T> {
    pub fn new(times: Vec<T>, values: Vec<T>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(invalid("values", "length differs from times"));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("times", "must be strictly increasing"));
        }
        Ok(Self { times, values })
    }

    pub fn from_fn(grid: &TimeGrid<T>, f: impl Fn(T) -> T) -> Self {
        let times = grid.times();
        let values = times.iter().map(|&t| f(t)).collect();
        Self { times, values }
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            times: self.times.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn min(&self) -> T {
        self.values.iter().fold(T::infinity(), |m, &v| m.min(v))
    }

    pub fn max(&self) -> T {
        self.values.iter().fold(T::neg_infinity(), |m, &v| m.max(v))
    }

    /// `max - min` over samples with `t >= from`.
    pub fn peak_to_peak_after(&self, from: T) -> T {
        let (lo, hi) = self
            .times
            .iter()
            .zip(&self.values)
            .filter(|(t, _)| **t >= from)
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), (_, &v)| {
                (lo.min(v), hi.max(v))
            });
        hi - lo
    }

    /// `max |a - b|` over matching samples.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |m, (a, b)| m.max((*a - *b).abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(0.0, 1.0, 2).is_ok());
        assert!(TimeGrid::new(-1.0, 1.0, 10).is_err());
        assert!(TimeGrid::new(1.0, 1.0, 10).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = TimeGrid::new(0.5, 3.7, 17).unwrap();
        let t = g.times();
        assert_eq!(t.len(), 17);
        assert_eq!(t[0], 0.5);
        assert_eq!(t[16], 3.7);
    }

    #[test]
    fn series_validation() {
        assert!(TimeSeries::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(TimeSeries::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        let s = TimeSeries::new(vec![0.0, 1.0, 2.0], vec![3.0, -1.0, 2.0]).unwrap();
        assert_eq!(s.peak_to_peak_after(1.0), 3.0);
    }
}
