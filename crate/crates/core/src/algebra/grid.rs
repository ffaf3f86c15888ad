use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform grid `t0, t0 + h, ..., t1` with `steps` intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    t0: T,
    t1: T,
    steps: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t0: T, t1: T, steps: usize) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite()) {
            return Err(Error::InvalidGrid("endpoints must be finite"));
        }
        if t1 <= t0 {
            return Err(Error::InvalidGrid("t1 must exceed t0"));
        }
        if steps == 0 {
            return Err(Error::InvalidGrid("steps must be at least 1"));
        }
        Ok(Self { t0, t1, steps })
    }

    pub fn t0(&self) -> T {
        self.t0
    }

    pub fn t1(&self) -> T {
        self.t1
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Number of samples, `steps + 1`.
    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> T {
        (self.t1 - self.t0) / T::of(self.steps as f64)
    }

    pub fn time(&self, j: usize) -> T {
        if j == self.steps {
            return self.t1;
        }
        self.t0 + self.step() * T::of(j as f64)
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len()).map(move |j| self.time(j))
    }

    /// Same interval with twice as many steps.
    pub fn refined(&self) -> Self {
        Self { steps: self.steps * 2, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(0.0, 1.0, 0).is_err());
        assert!(TimeGrid::new(1.0, 1.0, 4).is_err());
        assert!(TimeGrid::new(0.0, f64::NAN, 4).is_err());
        let g = TimeGrid::new(0.0, 2.0, 4).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g.step(), 0.5);
        assert_eq!(g.times().collect::<Vec<_>>(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(g.refined().steps(), 8);
    }
}
