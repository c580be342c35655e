//! Phase-space and density-matrix reconstructions of Gaussian mixtures.
//!
//! Every reconstruction is an equal-weight average over pure Gaussian states.
//! Parallel evaluation splits the states into fixed-size chunks and sums the
//! chunk results in chunk order, so results do not depend on the thread count.

use std::f64::consts::PI;

use ndarray::{Array1, Array2, Zip};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{uncertainty_invariant, wavefunction_hbar, GaussianState, OscillatorParams};
use crate::hermite::{hermite_table, MAX_N};

const CHUNK: usize = 512;

/// Uniform grid of `points` nodes covering `[min, max]` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && max > min) || points < 2 {
            return Err(Error::InvalidConfig(format!(
                "axis needs max > min and >= 2 points (got [{min}, {max}], {points})"
            )));
        }
        Ok(Self { min, max, points })
    }

    /// The default phase-space axis, `[-12, 12]` with 241 nodes.
    pub fn default_phase_space() -> Self {
        Self { min: -12.0, max: 12.0, points: 241 }
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.min + i as f64 * self.step()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.node(i)).collect()
    }

    fn trapezoid_weights(&self) -> Array1<f64> {
        let h = self.step();
        Array1::from_shape_fn(self.points, |i| if i == 0 || i + 1 == self.points { 0.5 * h } else { h })
    }

    fn covers(&self, lo: f64, hi: f64) -> bool {
        self.min <= lo && self.max >= hi
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub x_axis: Axis,
    pub p_axis: Axis,
    /// `values[[i, j]] = W(x_i, p_j)`.
    pub values: Array2<f64>,
    pub coverage_warnings: Vec<String>,
}

impl WignerGrid {
    /// Trapezoidal integral over the grid; close to 1 when the grid covers the mixture.
    pub fn normalization(&self) -> f64 {
        let wx = self.x_axis.trapezoid_weights();
        let wp = self.p_axis.trapezoid_weights();
        wx.dot(&self.values.dot(&wp))
    }

    pub fn value_at_nearest(&self, x: f64, p: f64) -> f64 {
        let idx = |a: &Axis, v: f64| (((v - a.min) / a.step()).round().max(0.0) as usize).min(a.points - 1);
        self.values[[idx(&self.x_axis, x), idx(&self.p_axis, p)]]
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn coverage_warning(state: &GaussianState, x: &Axis, p: &Axis) -> Option<String> {
    let (sx, sp) = (state.var_x.sqrt(), state.var_p.sqrt());
    let ok_x = x.covers(state.mean_x - 6.0 * sx, state.mean_x + 6.0 * sx);
    let ok_p = p.covers(state.mean_p - 6.0 * sp, state.mean_p + 6.0 * sp);
    (!ok_x || !ok_p).then(|| {
        format!(
            "grid x[{}, {}] p[{}, {}] does not cover 6 sigma of state at ({}, {})",
            x.min, x.max, p.min, p.max, state.mean_x, state.mean_p
        )
    })
}

fn add_wigner(state: &GaussianState, x: &[f64], p: &[f64], weight: f64, out: &mut Array2<f64>) -> Result<()> {
    let det = uncertainty_invariant(state);
    if det.is_nan() || det <= 0.0 {
        return Err(Error::InvalidState(format!("covariance determinant {det} is not positive")));
    }
    // Inverse covariance [[vp, -c], [-c, vx]] / det.
    let (ixx, ipp, ixp) = (state.var_p / det, state.var_x / det, -state.cov_xp / det);
    let pref = weight / (2.0 * PI * det.sqrt());
    for (i, &xi) in x.iter().enumerate() {
        let dx = xi - state.mean_x;
        let qx = ixx * dx * dx;
        let cx = 2.0 * ixp * dx;
        let mut row = out.row_mut(i);
        for (j, &pj) in p.iter().enumerate() {
            let dp = pj - state.mean_p;
            row[j] += pref * (-0.5 * (qx + cx * dp + ipp * dp * dp)).exp();
        }
    }
    Ok(())
}

/// Closed-form Wigner function of one Gaussian state.
pub fn wigner_of_state(state: &GaussianState, x_axis: &Axis, p_axis: &Axis) -> Result<WignerGrid> {
    ensemble_wigner(std::slice::from_ref(state), x_axis, p_axis)
}

/// Equal-weight average of the per-state Wigner functions.
pub fn ensemble_wigner(states: &[GaussianState], x_axis: &Axis, p_axis: &Axis) -> Result<WignerGrid> {
    if states.is_empty() {
        return Err(Error::Empty("ensemble_wigner needs at least one state"));
    }
    let xs = x_axis.nodes();
    let ps = p_axis.nodes();
    let weight = 1.0 / states.len() as f64;
    let partials: Vec<Array2<f64>> = states
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = Array2::zeros((xs.len(), ps.len()));
            for s in chunk {
                add_wigner(s, &xs, &ps, weight, &mut acc)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let values = sum_in_order(partials);

    let uncovered = states.iter().filter_map(|s| coverage_warning(s, x_axis, p_axis)).count();
    let coverage_warnings = match uncovered {
        0 => Vec::new(),
        1 => states.iter().filter_map(|s| coverage_warning(s, x_axis, p_axis)).take(1).collect(),
        n => vec![format!("{n} of {} states extend beyond 6 sigma of the grid", states.len())],
    };
    Ok(WignerGrid { x_axis: *x_axis, p_axis: *p_axis, values, coverage_warnings })
}

fn sum_in_order<T: Clone + std::ops::AddAssign>(parts: Vec<Array2<T>>) -> Array2<T> {
    let mut it = parts.into_iter();
    let mut total = it.next().expect("at least one chunk");
    for part in it {
        total += &part;
    }
    total
}

/// Per-state x-coherence `∫∫ (x1 - x2)^2 rho(x1, x2) dx1 dx2`.
///
/// Through the Wigner representation this is `-2 pi hbar^3 f''(0)` with `f`
/// the normal momentum marginal, which gives
/// `2 pi hbar^3 f(0) (1/var_p - mean_p^2/var_p^2)`.
pub fn coherence_x_state(state: &GaussianState, hbar: f64) -> f64 {
    let vp = state.var_p;
    let p0 = state.mean_p;
    let f0 = (-0.5 * p0 * p0 / vp).exp() / (2.0 * PI * vp).sqrt();
    2.0 * PI * hbar.powi(3) * f0 * (1.0 / vp - p0 * p0 / (vp * vp))
}

/// Ensemble average of [`coherence_x_state`].
pub fn coherence_x(states: &[GaussianState], hbar: f64) -> Result<f64> {
    if states.is_empty() {
        return Err(Error::Empty("coherence_x needs at least one state"));
    }
    Ok(states.iter().map(|s| coherence_x_state(s, hbar)).sum::<f64>() / states.len() as f64)
}

/// `rho(x1, x2)` as the average of `psi(x1) psi*(x2)`; rows index `x1`.
pub fn position_density_matrix(
    states: &[GaussianState],
    hbar: f64,
    x1_axis: &Axis,
    x2_axis: &Axis,
) -> Result<Array2<Complex64>> {
    if states.is_empty() {
        return Err(Error::Empty("position_density_matrix needs at least one state"));
    }
    let x1 = x1_axis.nodes();
    let x2 = x2_axis.nodes();
    let weight = 1.0 / states.len() as f64;
    let partials: Vec<Array2<Complex64>> = states
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = Array2::<Complex64>::zeros((x1.len(), x2.len()));
            for s in chunk {
                let a: Vec<Complex64> = x1.iter().map(|&x| wavefunction_hbar(s, hbar, x)).collect();
                let b: Vec<Complex64> = x2.iter().map(|&x| wavefunction_hbar(s, hbar, x).conj()).collect();
                for (i, ai) in a.iter().enumerate() {
                    let wa = ai * weight;
                    let mut row = acc.row_mut(i);
                    for (j, bj) in b.iter().enumerate() {
                        row[j] += wa * bj;
                    }
                }
            }
            acc
        })
        .collect();
    Ok(sum_in_order(partials))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    pub n_max: usize,
    pub basis_omega: f64,
    /// `values[[n1, n2]] = <n1|rho|n2>`.
    pub values: Array2<Complex64>,
    /// Probability weight outside `n <= n_max`, i.e. `1 - trace`.
    pub leakage: f64,
}

impl FockMatrix {
    pub fn diagonal(&self) -> Vec<f64> {
        (0..=self.n_max).map(|n| self.values[[n, n]].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let v = &self.values;
        let mut worst = 0.0f64;
        for i in 0..=self.n_max {
            for j in 0..=self.n_max {
                worst = worst.max((v[[i, j]] - v[[j, i]].conj()).norm());
            }
        }
        worst
    }
}

/// Checks that `quad` resolves the basis functions up to `n_max` with at
/// least ten nodes per local oscillation and spans their classical region.
pub fn check_fock_quadrature(basis: &OscillatorParams, n_max: usize, quad: &Axis) -> Result<()> {
    if n_max > MAX_N {
        return Err(Error::Resolution(format!("n_max {n_max} exceeds the supported {MAX_N}")));
    }
    let len = (basis.hbar / (basis.mass * basis.omega)).sqrt();
    let k_max = (2.0 * n_max as f64 + 1.0).sqrt() / len;
    let per_oscillation = 2.0 * PI / (k_max * quad.step());
    if per_oscillation < 10.0 {
        return Err(Error::Resolution(format!(
            "{per_oscillation:.2} nodes per oscillation of <x|{n_max}> (need >= 10); refine the grid"
        )));
    }
    let reach = len * ((2.0 * n_max as f64 + 1.0).sqrt() + 6.0);
    if !quad.covers(-reach, reach) {
        return Err(Error::Resolution(format!(
            "grid [{}, {}] does not span +-{reach:.3} needed by <x|{n_max}>",
            quad.min, quad.max
        )));
    }
    Ok(())
}

/// Number-state density matrix in the eigenbasis of `basis`.
///
/// For a pure-state mixture `<n1|rho|n2>` is the average of `c_n1 c_n2*` with
/// `c_n = ∫ <n|x> psi(x) dx`, evaluated by trapezoidal quadrature on `quad`.
pub fn fock_density_matrix(
    states: &[GaussianState],
    basis: &OscillatorParams,
    n_max: usize,
    quad: &Axis,
) -> Result<FockMatrix> {
    if states.is_empty() {
        return Err(Error::Empty("fock_density_matrix needs at least one state"));
    }
    basis.validate()?;
    check_fock_quadrature(basis, n_max, quad)?;
    let xs = quad.nodes();
    let weights = quad.trapezoid_weights();
    let mut table = hermite_table(n_max, &xs, basis);
    Zip::from(table.rows_mut()).for_each(|mut row| row *= &weights);
    let hbar = basis.hbar;
    let dim = n_max + 1;
    let weight = 1.0 / states.len() as f64;

    let partials: Vec<Array2<Complex64>> = states
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = Array2::<Complex64>::zeros((dim, dim));
            let mut psi = vec![Complex64::new(0.0, 0.0); xs.len()];
            let mut coeffs = vec![Complex64::new(0.0, 0.0); dim];
            for s in chunk {
                for (v, &x) in psi.iter_mut().zip(&xs) {
                    *v = wavefunction_hbar(s, hbar, x);
                }
                for (c, row) in coeffs.iter_mut().zip(table.rows()) {
                    *c = row.iter().zip(&psi).map(|(h, v)| v * *h).sum();
                }
                for i in 0..dim {
                    let ci = coeffs[i] * weight;
                    for j in 0..dim {
                        acc[[i, j]] += ci * coeffs[j].conj();
                    }
                }
            }
            acc
        })
        .collect();
    let values = sum_in_order(partials);
    let trace: f64 = (0..dim).map(|n| values[[n, n]].re).sum();
    Ok(FockMatrix { n_max, basis_omega: basis.omega, values, leakage: 1.0 - trace })
}
