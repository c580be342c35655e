//! Run manifests: what to simulate and which artifacts to write.

use std::fmt::Write as _;
use std::path::PathBuf;

use stosc_core::{Axis, BinSpec, GaussianState, JumpKind, Level, SimulationConfig};

pub const FORMAT_VERSION: u32 = 1;

/// Named initial packets. The squeezed variants keep the configured means
/// and replace the widths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialKind {
    Reference,
    XSqueezed,
    PSqueezed,
}

impl InitialKind {
    pub fn name(self) -> &'static str {
        match self {
            InitialKind::Reference => "reference",
            InitialKind::XSqueezed => "x-squeezed",
            InitialKind::PSqueezed => "p-squeezed",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "reference" => Some(InitialKind::Reference),
            "x-squeezed" => Some(InitialKind::XSqueezed),
            "p-squeezed" => Some(InitialKind::PSqueezed),
            _ => None,
        }
    }

    pub fn apply(self, base: &GaussianState) -> GaussianState {
        match self {
            InitialKind::Reference => *base,
            InitialKind::XSqueezed => GaussianState { var_x: 0.25, var_p: 1.0, cov_xp: 0.0, ..*base },
            InitialKind::PSqueezed => GaussianState { var_x: 1.0, var_p: 0.25, cov_xp: 0.0, ..*base },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Outputs {
    pub observables: bool,
    pub jumps: bool,
    pub wigner: bool,
    pub fock: bool,
}

impl Outputs {
    pub fn names(&self) -> Vec<&'static str> {
        [
            (self.observables, "observables"),
            (self.jumps, "jumps"),
            (self.wigner, "wigner"),
            (self.fock, "fock"),
        ]
        .into_iter()
        .filter_map(|(on, n)| on.then_some(n))
        .collect()
    }

    pub fn all() -> Self {
        Self { observables: true, jumps: true, wigner: true, fock: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    /// Shared parameters. `model` and `initial_state` are overridden per variant.
    pub config: SimulationConfig,
    pub models: Vec<JumpKind>,
    pub initial: Vec<InitialKind>,
    pub outputs: Outputs,
    pub jump_bins: BinSpec,
    pub wigner_times: Vec<f64>,
    pub wigner_x: Axis,
    pub wigner_p: Axis,
    pub fock_times: Vec<f64>,
    pub fock_n_max: usize,
    pub fock_basis: Level,
    pub fock_quadrature: Axis,
    pub output_dir: PathBuf,
    pub format_version: u32,
}

/// One concrete simulation inside a manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    pub label: String,
    pub model: JumpKind,
    pub initial: InitialKind,
    pub config: SimulationConfig,
}

impl Default for RunManifest {
    fn default() -> Self {
        Self {
            config: SimulationConfig::default(),
            models: vec![JumpKind::ConstantRate, JumpKind::GroundOverlap],
            initial: vec![InitialKind::Reference],
            outputs: Outputs::all(),
            jump_bins: BinSpec { min: -6.0, max: 6.0, bins: 60 },
            wigner_times: vec![0.0, 10.0, 20.0, 30.0],
            wigner_x: Axis::default_phase_space(),
            wigner_p: Axis::default_phase_space(),
            fock_times: vec![30.0],
            fock_n_max: 40,
            fock_basis: Level::One,
            fock_quadrature: Axis { min: -20.0, max: 20.0, points: 1601 },
            output_dir: PathBuf::from("out"),
            format_version: FORMAT_VERSION,
        }
    }
}

/// SplitMix64 finalizer; decorrelates per-variant seeds from the master seed.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RunManifest {
    /// Every (model, initial state) pair, in that nesting order. Each variant
    /// gets its own seed derived from the master seed and its position.
    pub fn variants(&self) -> Vec<Variant> {
        let mut out = Vec::new();
        for &model in &self.models {
            for &initial in &self.initial {
                let k = out.len() as u64;
                let config = SimulationConfig {
                    model,
                    initial_state: initial.apply(&self.config.initial_state),
                    master_seed: splitmix64(self.config.master_seed ^ splitmix64(k)),
                    ..self.config.clone()
                };
                out.push(Variant { label: format!("{}_{}", model.name(), initial.name()), model, initial, config });
            }
        }
        out
    }

    /// Effective configuration in the same `key = value` format the parser reads.
    pub fn to_config_text(&self) -> String {
        let c = &self.config;
        let s = &c.initial_state;
        let list = |v: &[f64]| v.iter().map(|t| fmt_f64(*t)).collect::<Vec<_>>().join(", ");
        let mut o = String::new();
        let _ = writeln!(o, "# effective configuration");
        let _ = writeln!(o, "format_version = {}", self.format_version);
        let _ = writeln!(o, "omega1 = {}", fmt_f64(c.omega1));
        let _ = writeln!(o, "omega2 = {}", fmt_f64(c.omega2));
        let _ = writeln!(o, "mass = {}", fmt_f64(c.mass));
        let _ = writeln!(o, "hbar = {}", fmt_f64(c.hbar));
        let _ = writeln!(o, "nu = {}", fmt_f64(c.nu));
        let models: Vec<_> = self.models.iter().map(|m| m.name()).collect();
        let _ = writeln!(o, "model = {}", models.join(", "));
        let initial: Vec<_> = self.initial.iter().map(|i| i.name()).collect();
        let _ = writeln!(o, "initial = {}", initial.join(", "));
        let _ = writeln!(o, "mean_x = {}", fmt_f64(s.mean_x));
        let _ = writeln!(o, "mean_p = {}", fmt_f64(s.mean_p));
        let _ = writeln!(o, "var_x = {}", fmt_f64(s.var_x));
        let _ = writeln!(o, "var_p = {}", fmt_f64(s.var_p));
        let _ = writeln!(o, "cov_xp = {}", fmt_f64(s.cov_xp));
        let _ = writeln!(o, "initial_level = {}", c.initial_level.index());
        let _ = writeln!(o, "t_final = {}", fmt_f64(c.t_final));
        let _ = writeln!(o, "dt = {}", fmt_f64(c.dt));
        let _ = writeln!(o, "sample_stride = {}", c.sample_stride);
        let _ = writeln!(o, "n_trajectories = {}", c.n_trajectories);
        let _ = writeln!(o, "seed = {}", c.master_seed);
        let _ = writeln!(o, "outputs = {}", self.outputs.names().join(", "));
        let _ = writeln!(o, "jump_x_min = {}", fmt_f64(self.jump_bins.min));
        let _ = writeln!(o, "jump_x_max = {}", fmt_f64(self.jump_bins.max));
        let _ = writeln!(o, "jump_bins = {}", self.jump_bins.bins);
        let _ = writeln!(o, "wigner_times = {}", list(&self.wigner_times));
        let _ = writeln!(o, "wigner_x_min = {}", fmt_f64(self.wigner_x.min));
        let _ = writeln!(o, "wigner_x_max = {}", fmt_f64(self.wigner_x.max));
        let _ = writeln!(o, "wigner_x_points = {}", self.wigner_x.points);
        let _ = writeln!(o, "wigner_p_min = {}", fmt_f64(self.wigner_p.min));
        let _ = writeln!(o, "wigner_p_max = {}", fmt_f64(self.wigner_p.max));
        let _ = writeln!(o, "wigner_p_points = {}", self.wigner_p.points);
        let _ = writeln!(o, "fock_times = {}", list(&self.fock_times));
        let _ = writeln!(o, "fock_n_max = {}", self.fock_n_max);
        let _ = writeln!(o, "fock_basis = {}", self.fock_basis.index());
        let _ = writeln!(o, "fock_x_min = {}", fmt_f64(self.fock_quadrature.min));
        let _ = writeln!(o, "fock_x_max = {}", fmt_f64(self.fock_quadrature.max));
        let _ = writeln!(o, "fock_points = {}", self.fock_quadrature.points);
        let _ = writeln!(o, "output_dir = {}", self.output_dir.display());
        o
    }
}

/// Shortest text that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}
