use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic collocation grid on `[-L, L)`.
///
/// Collocation points are `x_i = -L + i*h` with `h = 2L/n`, and the spectral
/// wavenumbers are `xi_k = pi*k/L` over the symmetric index set
/// `{0, +-1, ..., +-(n/2-1), n/2}` (the Nyquist index `n/2` is unpaired).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    half_length: f64,
    point_count: usize,
}

impl Grid {
    /// Build a grid with half-length `L > 0` and an even number `n >= 8` of points.
    pub fn new(half_length: f64, point_count: usize) -> Result<Self> {
        if !half_length.is_finite() || half_length <= 0.0 {
            return Err(Error::InvalidGrid(format!(
                "half-length must be positive and finite, got {half_length}"
            )));
        }
        if point_count < 8 {
            return Err(Error::InvalidGrid(format!(
                "need at least 8 points, got {point_count}"
            )));
        }
        if point_count % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "point count must be even, got {point_count}"
            )));
        }
        Ok(Grid {
            half_length,
            point_count,
        })
    }

    /// Default domain for algebraically decaying profiles with the given speeds:
    /// `L = 256 * max(1, 1/min c_j)`, spacing fine enough for the narrowest soliton.
    ///
    /// Solitons of speed `c` have width `~1/c`, so the spacing targets
    /// `h <= min(1/8, 1/(8 c_max))` rounded down to a power-of-two point count.
    pub fn default_for_speeds(speeds: &[f64]) -> Result<Self> {
        if speeds.is_empty() || speeds.iter().any(|c| !c.is_finite() || *c <= 0.0) {
            return Err(Error::InvalidParams(
                "speeds must be positive and finite".into(),
            ));
        }
        let c_min = speeds.iter().cloned().fold(f64::INFINITY, f64::min);
        let c_max = speeds.iter().cloned().fold(0.0f64, f64::max);
        let half_length = 256.0 * (1.0f64).max(1.0 / c_min);
        let target_h = (0.125f64).min(0.125 / c_max);
        let mut n = 8usize;
        while 2.0 * half_length / (n as f64) > target_h {
            n *= 2;
        }
        Grid::new(half_length, n)
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    /// Grid spacing `h = 2L/n`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.point_count as f64
    }

    /// `i`-th collocation point `x_i = -L + i*h`.
    pub fn point(&self, i: usize) -> f64 {
        -self.half_length + i as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.point_count).map(|i| self.point(i)).collect()
    }

    /// Index of the unpaired Nyquist mode.
    pub fn nyquist_index(&self) -> usize {
        self.point_count / 2
    }

    /// Wavenumber of DFT bin `k`: `pi*m/L` with `m = k` for `k <= n/2`, else `k - n`.
    pub fn wavenumber(&self, k: usize) -> f64 {
        let n = self.point_count;
        debug_assert!(k < n);
        let m = if k <= n / 2 {
            k as isize
        } else {
            k as isize - n as isize
        };
        std::f64::consts::PI * m as f64 / self.half_length
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.point_count).map(|k| self.wavenumber(k)).collect()
    }

    /// Largest resolved wavenumber `pi/h`.
    pub fn max_wavenumber(&self) -> f64 {
        std::f64::consts::PI / self.spacing()
    }

    pub(crate) fn check_same(&self, other: &Grid) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(
                self.half_length,
                self.point_count,
                other.half_length,
                other.point_count,
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn spacing_and_points() {
        let g = Grid::new(PI, 8).unwrap();
        assert!((g.spacing() - PI / 4.0).abs() < 1e-15);
        assert!((g.point(0) + PI).abs() < 1e-15);
        assert!((g.point(4)).abs() < 1e-15);
        let g = Grid::new(256.0, 4096).unwrap();
        assert_eq!(g.spacing(), 0.125);
    }

    #[test]
    fn wavenumber_symmetric_set() {
        let g = Grid::new(PI, 8).unwrap();
        let xs: Vec<f64> = g.wavenumbers();
        // xi in {0, 1, 2, 3, 4, -3, -2, -1} for L = pi.
        let expect = [0.0, 1.0, 2.0, 3.0, 4.0, -3.0, -2.0, -1.0];
        for (a, b) in xs.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
        // Symmetric about zero except the Nyquist index.
        for k in 1..4 {
            assert_eq!(g.wavenumber(k), -g.wavenumber(8 - k));
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Grid::new(1.0, 7).is_err());
        assert!(Grid::new(1.0, 6).is_err());
        assert!(Grid::new(-1.0, 16).is_err());
        assert!(Grid::new(f64::NAN, 16).is_err());
    }

    #[test]
    fn default_domain_scales_with_slowest_soliton() {
        let g = Grid::default_for_speeds(&[1.0, 2.0]).unwrap();
        assert_eq!(g.half_length(), 256.0);
        assert!(g.spacing() <= 0.0625 + 1e-15);
        let g = Grid::default_for_speeds(&[0.5]).unwrap();
        assert_eq!(g.half_length(), 512.0);
    }
}
