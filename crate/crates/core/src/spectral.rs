//! Fourier-collocation operators: Hilbert transform, analytic-signal
//! projections, spectral differentiation, quadrature, and Sobolev norms.
//!
//! Conventions on the discrete symbol set:
//! - the Hilbert transform multiplies mode `xi` by `i*sgn(xi)` with
//!   `sgn(0) = 0` (the mean is annihilated) and the unpaired Nyquist mode
//!   zeroed, which keeps `H` real-preserving and exactly skew-symmetric;
//! - the projections `P+ = (1 - iH)/2` and `P- = -(1 + iH)/2` inherit those
//!   choices, so the zero and Nyquist modes split half/half and
//!   `P+ - P- = 1` holds exactly;
//! - odd-order derivatives zero the Nyquist mode for the same reason.

use num_complex::Complex64;

use crate::error::Result;
use crate::fft;
use crate::field::{ComplexField, RealField};
use crate::grid::Grid;

/// Apply a Fourier multiplier `m(xi)` to a complex spectrum in place.
fn apply_multiplier(grid: &Grid, spectrum: &mut [Complex64], m: impl Fn(f64, bool) -> Complex64) {
    let nyq = grid.nyquist_index();
    for (k, v) in spectrum.iter_mut().enumerate() {
        *v *= m(grid.wavenumber(k), k == nyq);
    }
}

fn real_multiplier_op(u: &RealField, m: impl Fn(f64, bool) -> Complex64) -> RealField {
    let grid = u.grid();
    let mut spec = fft::forward_real(u.values());
    apply_multiplier(&grid, &mut spec, m);
    RealField::new(grid, fft::inverse_to_real(spec)).expect("multiplier output stays finite")
}

fn complex_multiplier_op(u: &ComplexField, m: impl Fn(f64, bool) -> Complex64) -> ComplexField {
    let grid = u.grid();
    let mut spec = u.values().to_vec();
    fft::forward(&mut spec);
    apply_multiplier(&grid, &mut spec, m);
    fft::inverse(&mut spec);
    ComplexField::new(grid, spec).expect("multiplier output stays finite")
}

fn hilbert_symbol(xi: f64, nyquist: bool) -> Complex64 {
    if nyquist || xi == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(0.0, xi.signum())
    }
}

/// Symbol of `P+`: the indicator of `xi > 0`, with the zero and Nyquist modes
/// split half/half.
fn plus_symbol(xi: f64, nyquist: bool) -> Complex64 {
    let v = if nyquist || xi == 0.0 {
        0.5
    } else if xi > 0.0 {
        1.0
    } else {
        0.0
    };
    Complex64::new(v, 0.0)
}

/// Symbol of `P- = P+ - 1`: minus the indicator of `xi < 0` plus the same
/// half-weight convention at the zero and Nyquist modes.
fn minus_symbol(xi: f64, nyquist: bool) -> Complex64 {
    plus_symbol(xi, nyquist) - Complex64::new(1.0, 0.0)
}

fn derivative_symbol(order: usize) -> impl Fn(f64, bool) -> Complex64 {
    move |xi, nyquist| {
        if nyquist && order % 2 == 1 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, xi).powu(order as u32)
        }
    }
}

impl RealField {
    /// Hilbert transform with Fourier symbol `i*sgn(xi)`.
    pub fn hilbert(&self) -> RealField {
        real_multiplier_op(self, hilbert_symbol)
    }

    /// Projection onto positive frequencies, `P+ = (1 - iH)/2`.
    pub fn project_plus(&self) -> ComplexField {
        complex_multiplier_op(&self.to_complex(), plus_symbol)
    }

    /// Projection `P- = -(1 + iH)/2`, so that `P+ - P- = 1`.
    pub fn project_minus(&self) -> ComplexField {
        complex_multiplier_op(&self.to_complex(), minus_symbol)
    }

    /// Spectral derivative of the given order (multiplier `(i*xi)^order`).
    pub fn derivative(&self, order: usize) -> RealField {
        real_multiplier_op(self, derivative_symbol(order))
    }

    /// Periodic trapezoid rule `h * sum(u_i)`.
    pub fn integrate(&self) -> f64 {
        self.grid().spacing() * self.values().iter().sum::<f64>()
    }

    /// Discrete L2 pairing `h * sum(u_i v_i)`.
    pub fn inner(&self, other: &RealField) -> Result<f64> {
        self.grid().check_same(&other.grid())?;
        Ok(self.grid().spacing()
            * self
                .values()
                .iter()
                .zip(other.values().iter())
                .map(|(a, b)| a * b)
                .sum::<f64>())
    }

    pub fn l2_norm(&self) -> f64 {
        self.inner(self).expect("same grid").sqrt()
    }

    /// Sobolev norm: the weighted spectral sum `(h/n) sum (1+xi^2)^s |u_hat|^2`,
    /// square-rooted. For `s = 0` this equals the L2 norm to roundoff.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        let grid = self.grid();
        let spec = fft::forward_real(self.values());
        let scale = grid.spacing() / grid.point_count() as f64;
        let mut acc = 0.0;
        for (k, v) in spec.iter().enumerate() {
            let xi = grid.wavenumber(k);
            acc += (1.0 + xi * xi).powf(s) * v.norm_sqr();
        }
        (scale * acc).sqrt()
    }

    /// Dealias by zeroing all modes with `|xi| > fraction * xi_max`.
    pub fn dealias(&self, fraction: f64) -> RealField {
        let cut = fraction * self.grid().max_wavenumber();
        real_multiplier_op(self, |xi, _| {
            if xi.abs() > cut {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
    }

    pub fn mean(&self) -> f64 {
        self.values().iter().sum::<f64>() / self.len() as f64
    }
}

impl ComplexField {
    pub fn hilbert(&self) -> ComplexField {
        complex_multiplier_op(self, hilbert_symbol)
    }

    pub fn project_plus(&self) -> ComplexField {
        complex_multiplier_op(self, plus_symbol)
    }

    pub fn project_minus(&self) -> ComplexField {
        complex_multiplier_op(self, minus_symbol)
    }

    pub fn derivative(&self, order: usize) -> ComplexField {
        complex_multiplier_op(self, derivative_symbol(order))
    }

    pub fn integrate(&self) -> Complex64 {
        self.grid().spacing() * self.values().iter().sum::<Complex64>()
    }

    /// Hermitian pairing `h * sum(conj(u_i) v_i)`.
    pub fn inner(&self, other: &ComplexField) -> Result<Complex64> {
        self.grid().check_same(&other.grid())?;
        Ok(self.grid().spacing()
            * self
                .values()
                .iter()
                .zip(other.values().iter())
                .map(|(a, b)| a.conj() * b)
                .sum::<Complex64>())
    }

    pub fn l2_norm(&self) -> f64 {
        self.inner(self).expect("same grid").re.sqrt()
    }
}
