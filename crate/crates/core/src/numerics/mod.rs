//! Shared numerical kernels: special functions, adaptive quadrature,
//! one-sided stable variates and densities, numerical Laplace inversion,
//! and deterministic RNG streams.

pub mod laplace;
pub mod quad;
pub mod special;
pub mod stable;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A strictly increasing time grid with nonnegative first point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    points: Vec<f64>,
}

impl Grid {
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("grid must be nonempty"));
        }
        if !points[0].is_finite() || points[0] < 0.0 {
            return Err(Error::domain("grid must start at a finite time >= 0"));
        }
        for w in points.windows(2) {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(Error::domain("grid must be strictly increasing and finite"));
            }
        }
        Ok(Grid { points })
    }

    /// Uniform grid with `steps` intervals covering [start, end].
    pub fn uniform(start: f64, end: f64, steps: usize) -> Result<Self> {
        if steps == 0 || !(end > start) {
            return Err(Error::domain("uniform grid needs end > start and steps >= 1"));
        }
        let dt = (end - start) / steps as f64;
        let points = (0..=steps).map(|i| start + i as f64 * dt).collect();
        Grid::new(points)
    }

    /// Time grid from `start:end:step` range syntax (endpoint included when it
    /// lands on a step).
    pub fn from_range(start: f64, end: f64, step: f64) -> Result<Self> {
        Grid::new(range_points(start, end, step)?)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction
    }

    pub fn first(&self) -> f64 {
        self.points[0]
    }

    pub fn last(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// Constant step size if the grid is uniform to relative tolerance 1e-9.
    pub fn uniform_step(&self) -> Option<f64> {
        if self.points.len() < 2 {
            return None;
        }
        let dt = self.points[1] - self.points[0];
        let ok = self
            .points
            .windows(2)
            .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.max(1e-300));
        ok.then_some(dt)
    }
}

/// Points for `start:end:step` range syntax with no sign constraint (used for
/// spatial grids, which may be negative).
pub fn range_points(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(end > start) {
        return Err(Error::domain("range needs end > start and step > 0"));
    }
    let n = (((end - start) / step).round() as usize).max(1);
    let mut points: Vec<f64> = (0..=n).map(|i| start + i as f64 * step).collect();
    while points.last().map(|&t| t > end + 1e-12 * step) == Some(true) {
        points.pop();
    }
    Ok(points)
}

/// A reproducible random stream: identical (seed, stream) pairs yield identical
/// draw sequences, distinct stream ids yield independent sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngStream { seed, stream }
    }

    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// Derived stream for worker `k`; stream ids are spaced so nested fan-out
    /// from distinct parents never collides in practice.
    pub fn substream(&self, k: u64) -> Self {
        RngStream {
            seed: self.seed,
            stream: self
                .stream
                .wrapping_mul(0x9e37_79b9_7f4a_7c15)
                .wrapping_add(k),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn grid_rejects_bad_inputs() {
        assert!(Grid::new(vec![]).is_err());
        assert!(Grid::new(vec![-1.0, 0.0]).is_err());
        assert!(Grid::new(vec![0.0, 0.0]).is_err());
        assert!(Grid::new(vec![0.0, 2.0, 1.0]).is_err());
        assert!(Grid::new(vec![0.0, 1.0, 2.0]).is_ok());
    }

    #[test]
    fn uniform_grid_has_constant_step() {
        let g = Grid::uniform(0.0, 1.0, 10).unwrap();
        assert_eq!(g.len(), 11);
        assert!((g.uniform_step().unwrap() - 0.1).abs() < 1e-15);
    }

    #[test]
    fn range_grid_matches_cli_syntax() {
        let g = Grid::from_range(0.0, 20.0, 0.5).unwrap();
        assert_eq!(g.len(), 41);
        assert!((g.last() - 20.0).abs() < 1e-12);
        // spatial ranges may be negative
        let xs = range_points(-3.0, 3.0, 0.05).unwrap();
        assert_eq!(xs.len(), 121);
        assert!((xs[0] + 3.0).abs() < 1e-12);
        assert!((xs[120] - 3.0).abs() < 1e-12);
        assert!(Grid::from_range(-3.0, 3.0, 0.05).is_err());
    }

    #[test]
    fn rng_streams_are_reproducible_and_distinct() {
        let draws = |s: RngStream| -> Vec<f64> {
            let mut rng = s.rng();
            (0..8).map(|_| rng.random::<f64>()).collect()
        };
        let a = draws(RngStream::new(7, 0));
        let b = draws(RngStream::new(7, 0));
        let c = draws(RngStream::new(7, 1));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    proptest::proptest! {
        #[test]
        fn grid_accepts_any_sorted_positive(points in proptest::collection::vec(0.0f64..1e6, 2..50)) {
            let mut p = points;
            p.sort_by(f64::total_cmp);
            p.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
            if p.len() >= 2 {
                let g = Grid::new(p.clone()).unwrap();
                proptest::prop_assert_eq!(g.points(), &p[..]);
            }
        }
    }
}
