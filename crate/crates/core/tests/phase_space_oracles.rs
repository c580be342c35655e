//! Independent quadrature oracles for the phase-space reconstructions.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stosc_core::{
    coherence_x, ensemble_wigner, fock_density_matrix, ground_state, hermite_table, position_density_matrix, Axis,
    GaussianState, OscillatorParams,
};

fn random_states(n: usize, seed: u64) -> Vec<GaussianState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            GaussianState::pure(
                rng.random_range(-2.0..2.0),
                rng.random_range(-1.5..1.5),
                rng.random_range(0.3..1.5),
                rng.random_range(-0.6..0.6),
                1.0,
            )
            .unwrap()
        })
        .collect()
}

fn trapz_weights(n: usize, h: f64) -> Vec<f64> {
    (0..n).map(|i| if i == 0 || i + 1 == n { 0.5 * h } else { h }).collect()
}

#[test]
fn hermite_orthonormality_up_to_30() {
    for omega in [0.7, 1.0, 1.2] {
        let b = OscillatorParams::scaled(omega).unwrap();
        let ax = Axis::new(-25.0, 25.0, 5001).unwrap();
        let t = hermite_table(30, &ax.nodes(), &b);
        let w = trapz_weights(ax.points, ax.step());
        for m in 0..=30 {
            for n in 0..=30 {
                let s: f64 = (0..ax.points).map(|i| t[[m, i]] * t[[n, i]] * w[i]).sum();
                let expect = if m == n { 1.0 } else { 0.0 };
                assert!((s - expect).abs() < 1e-8, "omega {omega} <{m}|{n}> = {s}");
            }
        }
    }
}

/// Photon-number distribution of a squeezed vacuum with squeeze parameter
/// `r`: `p(2k) = (2k)! / (2^k k!)^2 tanh(r)^(2k) / cosh(r)`.
fn squeezed_vacuum_population(n: usize, r: f64) -> f64 {
    if n % 2 == 1 {
        return 0.0;
    }
    let k = n / 2;
    let mut ratio = 1.0; // (2k)! / (2^k k!)^2, built incrementally
    for j in 1..=k {
        ratio *= (2 * j - 1) as f64 / (2 * j) as f64;
    }
    ratio * r.tanh().powi(2 * k as i32) / r.cosh()
}

#[test]
fn squeezed_vacuum_in_other_basis() {
    let basis = OscillatorParams::scaled(0.7).unwrap();
    let other = OscillatorParams::scaled(1.2).unwrap();
    let quad = Axis::new(-20.0, 20.0, 2001).unwrap();
    let f = fock_density_matrix(&[ground_state(&other)], &basis, 30, &quad).unwrap();
    let r = 0.5 * (1.2f64 / 0.7).ln();
    for (n, p) in f.diagonal().iter().enumerate() {
        if n % 2 == 1 {
            assert!(p.abs() < 1e-8, "odd population p({n}) = {p}");
        }
        assert!((p - squeezed_vacuum_population(n, r)).abs() < 1e-8, "p({n})");
    }
    assert!(f.hermiticity_residual() < 1e-12);
    assert!((f.trace() + f.leakage - 1.0).abs() < 1e-12);
}

#[test]
fn fock_matrix_of_mixture_is_consistent() {
    let states = random_states(60, 3);
    let basis = OscillatorParams::scaled(1.0).unwrap();
    let quad = Axis::new(-20.0, 20.0, 2001).unwrap();
    let f = fock_density_matrix(&states, &basis, 40, &quad).unwrap();
    assert!(f.hermiticity_residual() < 1e-10);
    assert!(f.diagonal().iter().all(|p| *p > -1e-10));
    assert!(f.leakage >= -1e-10 && f.leakage < 1e-6, "leakage {}", f.leakage);
    // <H> in the basis oscillator is sum (n + 1/2) p_n.
    let fock_energy: f64 = f.diagonal().iter().enumerate().map(|(n, p)| (n as f64 + 0.5) * p).sum();
    let direct: f64 = states.iter().map(|s| stosc_core::energy(s, &basis)).sum::<f64>() / states.len() as f64;
    assert!((fock_energy - direct).abs() < 1e-5, "{fock_energy} vs {direct}");
}

#[test]
fn position_matrix_transforms_to_wigner() {
    // W(X, P) = (2 pi hbar)^-1 ∫ dy rho(X + y/2, X - y/2) exp(-i P y / hbar)
    let states = random_states(12, 7);
    let ax = Axis::new(-10.0, 10.0, 501).unwrap();
    let h = ax.step();
    let rho = position_density_matrix(&states, 1.0, &ax, &ax).unwrap();
    let p_axis = Axis::new(-4.0, 4.0, 41).unwrap();
    let x_sub = Axis::new(-2.0, 2.0, 11).unwrap();
    let w = ensemble_wigner(&states, &x_sub, &p_axis).unwrap();
    let mut worst = 0.0f64;
    for i in 0..x_sub.points {
        let center = ((x_sub.node(i) - ax.min) / h).round() as usize;
        let reach = center.min(ax.points - 1 - center);
        for j in 0..p_axis.points {
            let p = p_axis.node(j);
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..=reach {
                let y = 2.0 * k as f64 * h;
                let wt = if k == 0 || k == reach { 0.5 } else { 1.0 };
                acc += wt * rho[[center + k, center - k]] * Complex64::from_polar(1.0, -p * y);
            }
            // integrand is Hermitian in y, so the full integral is twice the real part
            let value = 2.0 * acc.re * 2.0 * h / (2.0 * PI);
            worst = worst.max((value - w.values[[i, j]]).abs());
        }
    }
    assert!(worst < 1e-6, "max deviation {worst}");
}

#[test]
fn wigner_inverts_to_position_matrix() {
    // rho(x1, x2) = ∫ dP exp(i P (x1 - x2) / hbar) W((x1 + x2)/2, P)
    let states = random_states(10, 11);
    let x = Axis::new(-4.0, 4.0, 41).unwrap();
    let mid = Axis::new(-4.0, 4.0, 81).unwrap();
    let p = Axis::new(-14.0, 14.0, 1401).unwrap();
    let w = ensemble_wigner(&states, &mid, &p).unwrap();
    let rho = position_density_matrix(&states, 1.0, &x, &x).unwrap();
    let pw = trapz_weights(p.points, p.step());
    let mut worst = 0.0f64;
    for a in 0..x.points {
        for b in 0..x.points {
            let d = x.node(a) - x.node(b);
            let row = w.values.row(a + b);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..p.points {
                acc += Complex64::from_polar(pw[j] * row[j], p.node(j) * d);
            }
            worst = worst.max((acc - rho[[a, b]]).norm());
        }
    }
    assert!(worst < 1e-6, "max deviation {worst}");
}

#[test]
fn coherence_closed_form_matches_double_quadrature() {
    for (n, seed) in [(1, 1), (17, 2), (100, 3)] {
        let states = random_states(n, seed);
        let ax = Axis::new(-12.0, 12.0, 801).unwrap();
        let rho = position_density_matrix(&states, 1.0, &ax, &ax).unwrap();
        let w = trapz_weights(ax.points, ax.step());
        let xs = ax.nodes();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..ax.points {
            for j in 0..ax.points {
                let d = xs[i] - xs[j];
                acc += rho[[i, j]] * (d * d * w[i] * w[j]);
            }
        }
        let closed = coherence_x(&states, 1.0).unwrap();
        assert!(acc.im.abs() < 1e-10);
        assert!((acc.re - closed).abs() < 1e-6, "n={n}: quadrature {} vs closed {closed}", acc.re);
    }
}

#[test]
fn coherence_scales_with_hbar() {
    // The closed form tracks the double integral for hbar != 1 as well.
    let hbar = 0.6;
    let s = GaussianState::pure(0.4, 0.3, 0.5, 0.2, hbar).unwrap();
    let ax = Axis::new(-10.0, 10.0, 801).unwrap();
    let rho = position_density_matrix(&[s], hbar, &ax, &ax).unwrap();
    let w = trapz_weights(ax.points, ax.step());
    let xs = ax.nodes();
    let mut acc = 0.0;
    for i in 0..ax.points {
        for j in 0..ax.points {
            acc += (rho[[i, j]] * ((xs[i] - xs[j]).powi(2) * w[i] * w[j])).re;
        }
    }
    assert!((acc - coherence_x(&[s], hbar).unwrap()).abs() < 1e-8);
}
