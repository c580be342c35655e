use stosc_core::{
    energy, ensemble_observables, ensemble_wigner, fock_density_matrix, jump_histogram, run_ensemble_with,
    EnsembleAccumulator, EnsembleOptions, FockMatrix, Histogram, Level, ObservableRow, WignerGrid,
};

use crate::manifest::{RunManifest, Variant};
use crate::CliError;

#[derive(Debug, Clone)]
pub struct VariantResult {
    pub variant: Variant,
    pub accumulator: EnsembleAccumulator,
    pub observables: Vec<ObservableRow>,
    pub jumps_12: Histogram,
    pub jumps_21: Histogram,
    /// Classical turning points in each level at the initial ensemble energy.
    pub turning_points: [f64; 2],
    pub wigner: Vec<(f64, WignerGrid)>,
    pub fock: Vec<(f64, FockMatrix)>,
}

#[derive(Debug, Clone)]
pub struct RunResults {
    pub variants: Vec<VariantResult>,
}

impl RunResults {
    pub fn get(&self, label: &str) -> Option<&VariantResult> {
        self.variants.iter().find(|v| v.variant.label == label)
    }
}

/// Simulates every variant of `m` on the current rayon pool.
pub fn run_manifest(m: &RunManifest) -> Result<RunResults, CliError> {
    let mut snapshot_times = Vec::new();
    if m.outputs.wigner {
        snapshot_times.extend_from_slice(&m.wigner_times);
    }
    if m.outputs.fock {
        snapshot_times.extend(m.fock_times.iter().filter(|t| !snapshot_times.contains(t)).collect::<Vec<_>>());
    }
    let options = EnsembleOptions { snapshot_times };

    let mut variants = Vec::new();
    for variant in m.variants() {
        let cfg = &variant.config;
        let acc = run_ensemble_with(cfg, &options)?;
        let observables = ensemble_observables(&acc)?;
        let e0 = energy(&cfg.initial_state, &cfg.params(cfg.initial_level));
        let turning_points = [cfg.params(Level::One).turning_point(e0), cfg.params(Level::Two).turning_point(e0)];

        let mut wigner = Vec::new();
        if m.outputs.wigner {
            for &t in &m.wigner_times {
                let snap = acc.snapshot_at(t).expect("snapshot requested");
                wigner.push((t, ensemble_wigner(&snap.states, &m.wigner_x, &m.wigner_p)?));
            }
        }
        let mut fock = Vec::new();
        if m.outputs.fock {
            let basis = cfg.params(m.fock_basis);
            for &t in &m.fock_times {
                let snap = acc.snapshot_at(t).expect("snapshot requested");
                fock.push((t, fock_density_matrix(&snap.states, &basis, m.fock_n_max, &m.fock_quadrature)?));
            }
        }
        variants.push(VariantResult {
            jumps_12: jump_histogram(&acc, Level::One, &m.jump_bins),
            jumps_21: jump_histogram(&acc, Level::Two, &m.jump_bins),
            variant,
            accumulator: acc,
            observables,
            turning_points,
            wigner,
            fock,
        });
    }
    Ok(RunResults { variants })
}
