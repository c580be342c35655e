//! Pure Gaussian wave packets described by their first and second moments,
//! and their exact evolution in a fixed harmonic potential.
//!
//! Between frequency switches the moment equations are linear with constant
//! coefficients, so a step of any length is a symplectic rotation of phase
//! space. The covariance matrix transforms by congruence with that rotation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// One harmonic potential level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub omega: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl OscillatorParams {
    pub fn new(omega: f64, mass: f64, hbar: f64) -> Result<Self> {
        let p = Self { omega, mass, hbar };
        p.validate()?;
        Ok(p)
    }

    /// Unit mass and unit action scale.
    pub fn scaled(omega: f64) -> Result<Self> {
        Self::new(omega, 1.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("omega", self.omega), ("mass", self.mass), ("hbar", self.hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Position variance of this level's ground state, `hbar / (2 m omega)`.
    pub fn ground_var_x(&self) -> f64 {
        self.hbar / (2.0 * self.mass * self.omega)
    }

    /// Momentum variance of this level's ground state, `hbar m omega / 2`.
    pub fn ground_var_p(&self) -> f64 {
        0.5 * self.hbar * self.mass * self.omega
    }

    /// Classical turning point `sqrt(2E / (m omega^2))` for energy `energy`.
    pub fn turning_point(&self, energy: f64) -> f64 {
        (2.0 * energy / (self.mass * self.omega * self.omega)).sqrt()
    }

    /// Precomputed rotation for a fixed step, reused across many steps.
    pub fn step(&self, dt: f64) -> Propagator {
        Propagator::new(self, dt)
    }
}

/// A pure Gaussian state: means plus central second moments.
///
/// `cov_xp` is the symmetrized covariance `<(xp+px)/2> - <x><p>` and is signed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub cov_xp: f64,
}

impl GaussianState {
    pub fn new(mean_x: f64, mean_p: f64, var_x: f64, var_p: f64, cov_xp: f64) -> Result<Self> {
        let s = Self { mean_x, mean_p, var_x, var_p, cov_xp };
        s.validate()?;
        Ok(s)
    }

    /// Minimum-uncertainty state with the given position width and covariance;
    /// the momentum variance is fixed by `var_x var_p - cov^2 = hbar^2 / 4`.
    pub fn pure(mean_x: f64, mean_p: f64, var_x: f64, cov_xp: f64, hbar: f64) -> Result<Self> {
        if !(var_x.is_finite() && var_x > 0.0) {
            return Err(Error::InvalidState(format!("var_x must be > 0, got {var_x}")));
        }
        let var_p = (0.25 * hbar * hbar + cov_xp * cov_xp) / var_x;
        Self::new(mean_x, mean_p, var_x, var_p, cov_xp)
    }

    /// Initial packet used throughout the reference runs: displaced to
    /// `<x> = 2` at rest with unit-action vacuum widths.
    pub fn reference_initial() -> Self {
        Self { mean_x: 2.0, mean_p: 0.0, var_x: 0.5, var_p: 0.5, cov_xp: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("mean_x", self.mean_x),
            ("mean_p", self.mean_p),
            ("var_x", self.var_x),
            ("var_p", self.var_p),
            ("cov_xp", self.cov_xp),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidState(format!("{name} is not finite ({v})")));
        }
        if self.var_x <= 0.0 || self.var_p <= 0.0 {
            return Err(Error::InvalidState(format!(
                "variances must be positive (var_x {}, var_p {})",
                self.var_x, self.var_p
            )));
        }
        Ok(())
    }

    /// Checks the Heisenberg bound `det >= hbar^2/4 - tol`.
    pub fn check_uncertainty(&self, hbar: f64, tol: f64) -> Result<()> {
        let det = uncertainty_invariant(self);
        if det < 0.25 * hbar * hbar - tol {
            return Err(Error::InvalidState(format!(
                "uncertainty product {det} below hbar^2/4 = {}",
                0.25 * hbar * hbar
            )));
        }
        Ok(())
    }

    /// Raw `<x^2>`.
    pub fn mean_x2(&self) -> f64 {
        self.var_x + self.mean_x * self.mean_x
    }

    /// Raw `<p^2>`.
    pub fn mean_p2(&self) -> f64 {
        self.var_p + self.mean_p * self.mean_p
    }

    /// Raw symmetrized `<xp>`.
    pub fn mean_xp(&self) -> f64 {
        self.cov_xp + self.mean_x * self.mean_p
    }
}

/// Exact rotation by a fixed `dt` in one potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    // [[a, b], [c, d]] acting on (x, p)
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Propagator {
    fn new(params: &OscillatorParams, dt: f64) -> Self {
        let mw = params.mass * params.omega;
        let (s, c) = (params.omega * dt).sin_cos();
        Self { a: c, b: s / mw, c: -mw * s, d: c }
    }

    #[inline]
    pub fn apply(&self, st: &GaussianState) -> GaussianState {
        let Self { a, b, c, d } = *self;
        let (vx, vp, cxp) = (st.var_x, st.var_p, st.cov_xp);
        GaussianState {
            mean_x: a * st.mean_x + b * st.mean_p,
            mean_p: c * st.mean_x + d * st.mean_p,
            var_x: a * a * vx + 2.0 * a * b * cxp + b * b * vp,
            var_p: c * c * vx + 2.0 * c * d * cxp + d * d * vp,
            cov_xp: a * c * vx + (a * d + b * c) * cxp + b * d * vp,
        }
    }
}

/// Advances `state` by `dt` under `params`. Negative `dt` runs backwards.
pub fn propagate(state: &GaussianState, params: &OscillatorParams, dt: f64) -> Result<GaussianState> {
    params.validate()?;
    if !dt.is_finite() {
        return Err(Error::InvalidParams(format!("dt must be finite, got {dt}")));
    }
    Ok(params.step(dt).apply(state))
}

/// `<p^2>/2m + m omega^2 <x^2>/2` with raw second moments.
pub fn energy(state: &GaussianState, params: &OscillatorParams) -> f64 {
    let m = params.mass;
    let w = params.omega;
    state.mean_p2() / (2.0 * m) + 0.5 * m * w * w * state.mean_x2()
}

/// `var_x var_p - cov_xp^2`; equals `hbar^2/4` for pure states.
pub fn uncertainty_invariant(state: &GaussianState) -> f64 {
    state.var_x * state.var_p - state.cov_xp * state.cov_xp
}

/// Position-space amplitude of the Gaussian packet with zero global phase.
///
/// Only `mean_x`, `mean_p`, `var_x` and `cov_xp` enter; for a pure state the
/// momentum variance is implied by them.
pub fn wavefunction(state: &GaussianState, params: &OscillatorParams, x: f64) -> Complex64 {
    wavefunction_hbar(state, params.hbar, x)
}

pub(crate) fn wavefunction_hbar(state: &GaussianState, hbar: f64, x: f64) -> Complex64 {
    let d = x - state.mean_x;
    let norm = (2.0 * PI * state.var_x).powf(-0.25);
    let re = -d * d / (4.0 * state.var_x);
    let im = state.cov_xp * d * d / (2.0 * hbar * state.var_x) + state.mean_p * d / hbar;
    norm * Complex64::new(0.0, im).exp() * re.exp()
}
