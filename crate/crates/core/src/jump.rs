//! Jump rules between the two potential levels and per-step event sampling.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gaussian::{GaussianState, OscillatorParams};

/// Largest `rate * dt` accepted by [`sample_jump`]. Beyond this the per-step
/// Bernoulli approximation of the jump process is too coarse.
pub const MAX_RATE_DT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    One,
    Two,
}

impl Level {
    pub fn other(self) -> Self {
        match self {
            Level::One => Level::Two,
            Level::Two => Level::One,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Level::One => 1,
            Level::Two => 2,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(Level::One),
            2 => Some(Level::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JumpKind {
    /// Switching rate `nu`, independent of the state.
    ConstantRate,
    /// Switching rate `nu |<ground of destination | state>|^2`.
    GroundOverlap,
}

impl JumpKind {
    pub fn name(self) -> &'static str {
        match self {
            JumpKind::ConstantRate => "constant",
            JumpKind::GroundOverlap => "overlap",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpModel {
    pub kind: JumpKind,
    pub nu: f64,
}

impl JumpModel {
    pub fn new(kind: JumpKind, nu: f64) -> Result<Self> {
        if !(nu.is_finite() && nu >= 0.0) {
            return Err(Error::InvalidConfig(format!("nu must be finite and >= 0, got {nu}")));
        }
        Ok(Self { kind, nu })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpEvent {
    pub time: f64,
    pub from_level: Level,
    pub to_level: Level,
    pub mean_x_at_jump: f64,
}

/// Vacuum of the given level.
pub fn ground_state(params: &OscillatorParams) -> GaussianState {
    GaussianState {
        mean_x: 0.0,
        mean_p: 0.0,
        var_x: params.ground_var_x(),
        var_p: params.ground_var_p(),
        cov_xp: 0.0,
    }
}

/// `|<ground(target) | state>|^2` for the zero-phase packet amplitude.
///
/// The state amplitude is `N_a exp(-A d^2 + i k d)` with `d = x - <x>`,
/// `A = 1/(4 var_x) - i cov/(2 hbar var_x)` and `k = <p>/hbar`; the target
/// ground state is `N_b exp(-B x^2)` with `B = 1/(4 b)`. The product
/// integrates to a single complex Gaussian integral.
pub fn ground_overlap(state: &GaussianState, source: &OscillatorParams, target: &OscillatorParams) -> f64 {
    overlap_with_vacuum(state, source.hbar, target.ground_var_x())
}

pub(crate) fn overlap_with_vacuum(state: &GaussianState, hbar: f64, b: f64) -> f64 {
    let a = state.var_x;
    let x0 = state.mean_x;
    let big_a = Complex64::new(1.0 / (4.0 * a), -state.cov_xp / (2.0 * hbar * a));
    let big_b = 1.0 / (4.0 * b);
    let k = state.mean_p / hbar;
    let sum = big_a + big_b;
    let lin = Complex64::new(-2.0 * big_b * x0, k);
    let expo = lin * lin / (4.0 * sum) - big_b * x0 * x0;
    // N_a^2 N_b^2 = 1 / (2 pi sqrt(a b))
    let value = PI / sum.norm() * (2.0 * expo.re).exp() / (2.0 * PI * (a * b).sqrt());
    value.clamp(0.0, 1.0)
}

/// Per-unit-time switching rate out of the current level.
pub fn jump_rate(
    model: &JumpModel,
    state: &GaussianState,
    source: &OscillatorParams,
    target: &OscillatorParams,
) -> f64 {
    match model.kind {
        JumpKind::ConstantRate => model.nu,
        JumpKind::GroundOverlap => {
            if model.nu == 0.0 {
                0.0
            } else {
                model.nu * ground_overlap(state, source, target)
            }
        }
    }
}

/// Bernoulli trial with success probability `rate * dt`.
pub fn sample_jump<R: Rng + ?Sized>(rate: f64, dt: f64, rng: &mut R) -> Result<bool> {
    let prob = rate * dt;
    if !(prob.is_finite() && rate >= 0.0 && dt >= 0.0) || prob > MAX_RATE_DT {
        return Err(Error::StepTooCoarse { rate, dt, product: prob, cap: MAX_RATE_DT });
    }
    // Always consume one draw so the stream position does not depend on the rate.
    let u: f64 = rng.random();
    Ok(u < prob)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{uncertainty_invariant, wavefunction};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(w: f64) -> OscillatorParams {
        OscillatorParams::scaled(w).unwrap()
    }

    /// Trapezoidal quadrature of `|∫ g(x) psi(x) dx|^2`, independent of the
    /// closed form.
    fn overlap_by_quadrature(s: &GaussianState, src: &OscillatorParams, tgt: &OscillatorParams) -> f64 {
        let g = ground_state(tgt);
        let lo = (s.mean_x - 12.0 * s.var_x.sqrt()).min(-12.0 * g.var_x.sqrt());
        let hi = (s.mean_x + 12.0 * s.var_x.sqrt()).max(12.0 * g.var_x.sqrt());
        let n = 6000;
        let h = (hi - lo) / n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..=n {
            let x = lo + i as f64 * h;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            acc += w * wavefunction(&g, tgt, x).conj() * wavefunction(s, src, x);
        }
        (acc * h).norm_sqr()
    }

    #[test]
    fn ground_state_widths() {
        let g = ground_state(&params(1.0));
        assert_eq!((g.var_x, g.var_p, g.cov_xp, g.mean_x, g.mean_p), (0.5, 0.5, 0.0, 0.0, 0.0));
        let g = ground_state(&params(1.2));
        assert_relative_eq!(g.var_x, 1.0 / 2.4, epsilon = 1e-15);
        assert_relative_eq!(g.var_p, 0.6, epsilon = 1e-15);
        for w in [0.3, 0.7, 1.2, 5.0] {
            let p = OscillatorParams::new(w, 1.7, 0.6).unwrap();
            assert_relative_eq!(uncertainty_invariant(&ground_state(&p)), 0.09, epsilon = 1e-15);
        }
    }

    #[test]
    fn self_overlap_is_one() {
        for w in [0.5, 1.0, 1.2] {
            let p = params(w);
            assert_relative_eq!(ground_overlap(&ground_state(&p), &p, &p), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn reference_state_overlap() {
        let s = GaussianState::reference_initial();
        let (src, tgt) = (params(0.7), params(1.2));
        let (a, b, x0) = (0.5f64, 1.0 / 2.4, 2.0f64);
        let expected = 2.0 * (a * b).sqrt() / (a + b) * (-x0 * x0 / (2.0 * (a + b))).exp();
        let got = ground_overlap(&s, &src, &tgt);
        assert_relative_eq!(got, expected, epsilon = 1e-14);
        assert!((got - 0.1124).abs() < 1e-4);
        assert!((got - overlap_by_quadrature(&s, &src, &tgt)).abs() < 1e-10);
    }

    #[test]
    fn chirped_moving_state_matches_quadrature() {
        let (src, tgt) = (params(0.7), params(1.2));
        let s = GaussianState::pure(-0.7, 1.3, 0.9, -0.6, 1.0).unwrap();
        let q = overlap_by_quadrature(&s, &src, &tgt);
        assert!((ground_overlap(&s, &src, &tgt) - q).abs() < 1e-10);
    }

    #[test]
    fn overlap_decays_with_displacement() {
        let (src, tgt) = (params(0.7), params(1.2));
        let mut prev = 1.0;
        for i in 0..40 {
            let s = GaussianState::pure(i as f64 * 0.5, 0.0, 0.5, 0.0, 1.0).unwrap();
            let v = ground_overlap(&s, &src, &tgt);
            assert!(v <= prev);
            prev = v;
        }
        assert!(prev < 1e-30);
    }

    #[test]
    fn rates() {
        let s = GaussianState::reference_initial();
        let (src, tgt) = (params(0.7), params(1.2));
        let c = JumpModel::new(JumpKind::ConstantRate, 0.8).unwrap();
        assert_eq!(jump_rate(&c, &s, &src, &tgt), 0.8);
        let o = JumpModel::new(JumpKind::GroundOverlap, 0.8).unwrap();
        let r = jump_rate(&o, &s, &src, &tgt);
        assert!((r - 0.0899).abs() < 1e-4, "{r}");
        let z = JumpModel::new(JumpKind::GroundOverlap, 0.0).unwrap();
        assert_eq!(jump_rate(&z, &s, &src, &tgt), 0.0);
        assert!(JumpModel::new(JumpKind::ConstantRate, -0.1).is_err());
    }

    #[test]
    fn sample_jump_zero_rate_never_fires() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!((0..10_000).all(|_| !sample_jump(0.0, 0.05, &mut rng).unwrap()));
    }

    #[test]
    fn sample_jump_frequency_within_binomial_band() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let n = 1_000_000;
        let hits = (0..n).filter(|_| sample_jump(0.8, 0.01, &mut rng).unwrap()).count();
        let freq = hits as f64 / n as f64;
        // 4 sigma of Binomial(1e6, 0.008) is ~3.6e-4; the stated band is 3e-4.
        assert!((freq - 0.008).abs() < 3e-4, "{freq}");
    }

    #[test]
    fn sample_jump_rejects_coarse_step() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(sample_jump(2.0, 0.1, &mut rng), Err(Error::StepTooCoarse { .. })));
        assert!(sample_jump(1.0, 0.1, &mut rng).is_ok());
        assert!(sample_jump(-1.0, 0.01, &mut rng).is_err());
    }

    #[test]
    fn sample_jump_is_reproducible() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..1000).map(|_| sample_jump(5.0, 0.01, &mut rng).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
        assert_ne!(draw(9), draw(10));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_state() -> impl Strategy<Value = GaussianState> {
            (-3.0..3.0f64, -2.0..2.0f64, 0.2..2.0f64, -1.0..1.0f64)
                .prop_map(|(x, p, vx, c)| GaussianState::pure(x, p, vx, c, 1.0).unwrap())
        }

        proptest! {
            #[test]
            fn overlap_bounded(s in arb_state(), w1 in 0.3..2.0f64, w2 in 0.3..2.0f64) {
                let v = ground_overlap(&s, &params(w1), &params(w2));
                prop_assert!((0.0..=1.0).contains(&v));
            }

            #[test]
            fn overlap_symmetric_for_real_gaussians(x in -3.0..3.0f64, va in 0.1..2.0f64, w in 0.3..2.0f64) {
                let tgt = params(w);
                let s = GaussianState::pure(x, 0.0, va, 0.0, 1.0).unwrap();
                // Swap roles: the target vacuum displaced against the undisplaced
                // ground state of width va.
                let b = tgt.ground_var_x();
                let swapped = GaussianState::pure(x, 0.0, b, 0.0, 1.0).unwrap();
                let lhs = ground_overlap(&s, &tgt, &tgt);
                let rhs = overlap_with_vacuum(&swapped, 1.0, va);
                prop_assert!((lhs - rhs).abs() < 1e-13);
            }

            #[test]
            fn overlap_rate_never_exceeds_constant(s in arb_state(), nu in 0.0..5.0f64) {
                let (src, tgt) = (params(0.7), params(1.2));
                let o = JumpModel::new(JumpKind::GroundOverlap, nu).unwrap();
                let c = JumpModel::new(JumpKind::ConstantRate, nu).unwrap();
                prop_assert!(jump_rate(&o, &s, &src, &tgt) <= jump_rate(&c, &s, &src, &tgt));
            }
        }
    }
}
