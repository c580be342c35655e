//! Normalized harmonic-oscillator eigenfunctions `<x|n>`.
//!
//! The three-term recurrence runs on the normalized functions directly, with
//! the Gaussian factor carried as a separate log-scale so neither the
//! polynomial growth nor the Gaussian decay over/underflows for `n <= 200`.

use std::f64::consts::PI;

use ndarray::Array2;

use crate::gaussian::OscillatorParams;

const RESCALE: f64 = 1e150;

/// Largest quantum number with a verified stable evaluation.
pub const MAX_N: usize = 200;

fn fill_row(n_max: usize, xi: f64, out: &mut impl FnMut(usize, f64)) {
    let ln_rescale = RESCALE.ln();
    // log of pi^(-1/4) exp(-xi^2/2)
    let mut log_scale = -0.25 * PI.ln() - 0.5 * xi * xi;
    let mut prev = 0.0f64;
    let mut cur = 1.0f64;
    out(0, log_scale.exp());
    for n in 0..n_max {
        let next = (2.0 / (n as f64 + 1.0)).sqrt() * xi * cur - (n as f64 / (n as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += ln_rescale;
        }
        let scale = log_scale.exp();
        let value = if cur == 0.0 {
            0.0
        } else if scale.is_normal() {
            cur * scale
        } else {
            cur.signum() * (cur.abs().ln() + log_scale).exp()
        };
        out(n + 1, value);
    }
}

/// `<x|n>` for the oscillator `basis`.
pub fn hermite_function(n: usize, x: f64, basis: &OscillatorParams) -> f64 {
    let inv_len = (basis.mass * basis.omega / basis.hbar).sqrt();
    let mut value = 0.0;
    fill_row(n, x * inv_len, &mut |k, v| {
        if k == n {
            value = v;
        }
    });
    value * inv_len.sqrt()
}

/// Table `[n, i] = <xs[i]|n>` for `n = 0..=n_max`.
pub fn hermite_table(n_max: usize, xs: &[f64], basis: &OscillatorParams) -> Array2<f64> {
    let inv_len = (basis.mass * basis.omega / basis.hbar).sqrt();
    let norm = inv_len.sqrt();
    let mut table = Array2::zeros((n_max + 1, xs.len()));
    for (i, &x) in xs.iter().enumerate() {
        fill_row(n_max, x * inv_len, &mut |k, v| table[[k, i]] = v * norm);
    }
    table
}
