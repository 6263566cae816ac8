//! Shared FFT plumbing: cached plans plus forward/inverse helpers.
//!
//! Forward transforms are the plain unnormalized DFT; the inverse divides by
//! `n`, so `inverse(forward(u)) == u` up to roundoff.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

thread_local! {
    static PLANS: RefCell<PlanCache> = RefCell::new(PlanCache::new());
}

struct PlanCache {
    planner: FftPlanner<f64>,
    forward: HashMap<usize, Arc<dyn Fft<f64>>>,
    inverse: HashMap<usize, Arc<dyn Fft<f64>>>,
}

impl PlanCache {
    fn new() -> Self {
        PlanCache {
            planner: FftPlanner::new(),
            forward: HashMap::new(),
            inverse: HashMap::new(),
        }
    }
}

pub fn forward(buf: &mut [Complex64]) {
    let n = buf.len();
    PLANS.with(|cache| {
        let mut cache = cache.borrow_mut();
        let PlanCache {
            planner, forward, ..
        } = &mut *cache;
        let plan = forward
            .entry(n)
            .or_insert_with(|| planner.plan_fft_forward(n))
            .clone();
        plan.process(buf);
    });
}

pub fn inverse(buf: &mut [Complex64]) {
    let n = buf.len();
    PLANS.with(|cache| {
        let mut cache = cache.borrow_mut();
        let PlanCache {
            planner, inverse, ..
        } = &mut *cache;
        let plan = inverse
            .entry(n)
            .or_insert_with(|| planner.plan_fft_inverse(n))
            .clone();
        plan.process(buf);
    });
    let scale = 1.0 / n as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Forward DFT of a real sample vector.
pub fn forward_real(values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward(&mut buf);
    buf
}

/// Inverse DFT, returning the real part (caller guarantees conjugate symmetry).
pub fn inverse_to_real(mut spectrum: Vec<Complex64>) -> Vec<f64> {
    inverse(&mut spectrum);
    spectrum.into_iter().map(|v| v.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let u: Vec<f64> = (0..16).map(|i| (i as f64 * 0.37).sin()).collect();
        let spec = forward_real(&u);
        let back = inverse_to_real(spec);
        for (a, b) in u.iter().zip(back.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
