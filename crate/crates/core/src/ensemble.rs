//! Stochastic trajectories and their deterministic parallel reduction.
//!
//! Trajectory `i` draws from ChaCha8 stream `i` keyed by the master seed, so
//! any trajectory can be regenerated alone. Trajectories are accumulated in
//! fixed blocks of [`BLOCK`] indices and the block accumulators are merged
//! pairwise in index order. The reduction tree depends only on the ensemble
//! size, never on the worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{energy, GaussianState, OscillatorParams};
use crate::jump::{jump_rate, sample_jump, JumpEvent, JumpKind, JumpModel, Level, MAX_RATE_DT};
use crate::phase_space::coherence_x_state;

/// Trajectories per leaf of the reduction tree.
pub const BLOCK: u64 = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub omega1: f64,
    pub omega2: f64,
    pub mass: f64,
    pub hbar: f64,
    pub nu: f64,
    pub model: JumpKind,
    pub initial_state: GaussianState,
    pub initial_level: Level,
    pub t_final: f64,
    pub dt: f64,
    pub sample_stride: usize,
    pub n_trajectories: u64,
    pub master_seed: u64,
}

impl Default for SimulationConfig {
    /// Reference parameters: `omega = 0.7 / 1.2`, `nu = 0.8`, overlap model,
    /// 30000 trajectories to `t = 30`.
    fn default() -> Self {
        Self {
            omega1: 0.7,
            omega2: 1.2,
            mass: 1.0,
            hbar: 1.0,
            nu: 0.8,
            model: JumpKind::GroundOverlap,
            initial_state: GaussianState::reference_initial(),
            initial_level: Level::One,
            t_final: 30.0,
            dt: 0.01,
            sample_stride: 10,
            n_trajectories: 30_000,
            master_seed: 0,
        }
    }
}

impl SimulationConfig {
    pub fn params(&self, level: Level) -> OscillatorParams {
        let omega = match level {
            Level::One => self.omega1,
            Level::Two => self.omega2,
        };
        OscillatorParams { omega, mass: self.mass, hbar: self.hbar }
    }

    pub fn jump_model(&self) -> JumpModel {
        JumpModel { kind: self.model, nu: self.nu }
    }

    pub fn validate(&self) -> Result<()> {
        self.params(Level::One).validate()?;
        self.params(Level::Two).validate()?;
        JumpModel::new(self.model, self.nu)?;
        self.initial_state.validate()?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidConfig(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            return Err(Error::InvalidConfig(format!("t_final must be >= 0, got {}", self.t_final)));
        }
        if self.sample_stride == 0 {
            return Err(Error::InvalidConfig("sample_stride must be >= 1".into()));
        }
        if self.n_trajectories == 0 {
            return Err(Error::InvalidConfig("n_trajectories must be >= 1".into()));
        }
        if self.nu * self.dt > MAX_RATE_DT {
            return Err(Error::InvalidConfig(format!("nu*dt exceeds {MAX_RATE_DT} ({})", self.nu * self.dt)));
        }
        let steps = self.t_final / self.dt;
        if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
            return Err(Error::InvalidConfig(format!(
                "t_final {} is not a whole number of dt {} steps",
                self.t_final, self.dt
            )));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        (self.t_final / self.dt).round() as usize
    }

    /// Times at which trajectories are sampled: every `sample_stride` steps.
    pub fn sample_times(&self) -> Vec<f64> {
        (0..=self.n_steps())
            .step_by(self.sample_stride)
            .map(|k| k as f64 * self.dt)
            .collect()
    }

    /// Index into [`Self::sample_times`] for `t`, if `t` is a sample time.
    pub fn sample_index(&self, t: f64) -> Option<usize> {
        let k = t / (self.dt * self.sample_stride as f64);
        let idx = k.round();
        let ok = idx >= 0.0 && (k - idx).abs() < 1e-6 && idx as usize * self.sample_stride <= self.n_steps();
        ok.then_some(idx as usize)
    }

    /// Random stream for one trajectory.
    pub fn rng_for(&self, trajectory_index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(trajectory_index);
        rng
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub sample_times: Vec<f64>,
    pub states: Vec<GaussianState>,
    pub levels: Vec<Level>,
    pub jumps: Vec<JumpEvent>,
}

/// One realization of the switching process.
///
/// Each step propagates exactly in the current level, then tests for a switch
/// with probability `rate * dt` evaluated on the propagated state. A switch
/// keeps all moments and changes only the governing frequency.
pub fn simulate_trajectory(config: &SimulationConfig, trajectory_index: u64) -> Result<Trajectory> {
    config.validate()?;
    run_trajectory(config, trajectory_index)
}

fn run_trajectory(config: &SimulationConfig, trajectory_index: u64) -> Result<Trajectory> {
    let mut rng = config.rng_for(trajectory_index);
    let params = [config.params(Level::One), config.params(Level::Two)];
    let steps = [params[0].step(config.dt), params[1].step(config.dt)];
    let slot = |l: Level| (l.index() - 1) as usize;
    let model = config.jump_model();
    let n_steps = config.n_steps();
    let n_samples = n_steps / config.sample_stride + 1;

    let mut out = Trajectory {
        sample_times: Vec::with_capacity(n_samples),
        states: Vec::with_capacity(n_samples),
        levels: Vec::with_capacity(n_samples),
        jumps: Vec::new(),
    };
    let mut state = config.initial_state;
    let mut level = config.initial_level;
    for k in 0..=n_steps {
        if k % config.sample_stride == 0 {
            out.sample_times.push(k as f64 * config.dt);
            out.states.push(state);
            out.levels.push(level);
        }
        if k == n_steps {
            break;
        }
        state = steps[slot(level)].apply(&state);
        let target = level.other();
        let rate = jump_rate(&model, &state, &params[slot(level)], &params[slot(target)]);
        if sample_jump(rate, config.dt, &mut rng)? {
            out.jumps.push(JumpEvent {
                time: (k + 1) as f64 * config.dt,
                from_level: level,
                to_level: target,
                mean_x_at_jump: state.mean_x,
            });
            level = target;
        }
    }
    Ok(out)
}

/// Per-sample sums over trajectories.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SampleSums {
    pub mean_x: f64,
    pub mean_p: f64,
    pub x2: f64,
    pub p2: f64,
    pub xp: f64,
    pub energy: f64,
    pub coherence: f64,
    pub var_x: f64,
    pub var_p: f64,
}

impl SampleSums {
    fn add_state(&mut self, s: &GaussianState, params: &OscillatorParams) {
        self.mean_x += s.mean_x;
        self.mean_p += s.mean_p;
        self.x2 += s.mean_x2();
        self.p2 += s.mean_p2();
        self.xp += s.mean_xp();
        self.energy += energy(s, params);
        self.coherence += coherence_x_state(s, params.hbar);
        self.var_x += s.var_x;
        self.var_p += s.var_p;
    }

    fn merge(&mut self, o: &SampleSums) {
        self.mean_x += o.mean_x;
        self.mean_p += o.mean_p;
        self.x2 += o.x2;
        self.p2 += o.p2;
        self.xp += o.xp;
        self.energy += o.energy;
        self.coherence += o.coherence;
        self.var_x += o.var_x;
        self.var_p += o.var_p;
    }
}

/// States of every trajectory at one sample time, in trajectory order.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub sample_index: usize,
    pub time: f64,
    pub states: Vec<GaussianState>,
    pub levels: Vec<Level>,
}

/// Mergeable ensemble sums covering a contiguous range of trajectory indices.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleAccumulator {
    pub sample_times: Vec<f64>,
    pub sums: Vec<SampleSums>,
    /// Jump positions `mean_x`, in trajectory order then time order.
    pub jumps_12: Vec<f64>,
    pub jumps_21: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
    pub count: u64,
    /// Half-open range of trajectory indices folded in; `None` while empty.
    pub index_range: Option<(u64, u64)>,
}

impl EnsembleAccumulator {
    pub fn empty(sample_times: Vec<f64>, snapshot_indices: &[usize]) -> Self {
        let snapshots = snapshot_indices
            .iter()
            .map(|&i| Snapshot { sample_index: i, time: sample_times[i], states: Vec::new(), levels: Vec::new() })
            .collect();
        Self {
            sums: vec![SampleSums::default(); sample_times.len()],
            sample_times,
            jumps_12: Vec::new(),
            jumps_21: Vec::new(),
            snapshots,
            count: 0,
            index_range: None,
        }
    }

    /// Folds in trajectory `index`, which must directly follow the current range.
    pub fn push(&mut self, config: &SimulationConfig, index: u64, traj: &Trajectory) {
        assert_eq!(traj.states.len(), self.sums.len(), "sample grids differ");
        self.index_range = match self.index_range {
            None => Some((index, index + 1)),
            Some((lo, hi)) => {
                assert_eq!(hi, index, "trajectories must be pushed in index order");
                Some((lo, hi + 1))
            }
        };
        let params = [config.params(Level::One), config.params(Level::Two)];
        for ((sum, s), l) in self.sums.iter_mut().zip(&traj.states).zip(&traj.levels) {
            sum.add_state(s, &params[(l.index() - 1) as usize]);
        }
        for ev in &traj.jumps {
            match ev.from_level {
                Level::One => self.jumps_12.push(ev.mean_x_at_jump),
                Level::Two => self.jumps_21.push(ev.mean_x_at_jump),
            }
        }
        for snap in &mut self.snapshots {
            snap.states.push(traj.states[snap.sample_index]);
            snap.levels.push(traj.levels[snap.sample_index]);
        }
        self.count += 1;
    }

    /// Combines two accumulators over disjoint index ranges. The lower range
    /// comes first in the concatenated records, so `merge(a, b) == merge(b, a)`.
    pub fn merge(self, other: Self) -> Self {
        assert_eq!(self.sample_times, other.sample_times, "sample grids differ");
        let (mut lo, hi) = match (self.index_range, other.index_range) {
            (None, _) => return other,
            (_, None) => return self,
            (Some(a), Some(b)) => {
                assert!(a.1 <= b.0 || b.1 <= a.0, "overlapping trajectory ranges");
                if a.0 < b.0 { (self, other) } else { (other, self) }
            }
        };
        for (a, b) in lo.sums.iter_mut().zip(&hi.sums) {
            a.merge(b);
        }
        lo.jumps_12.extend_from_slice(&hi.jumps_12);
        lo.jumps_21.extend_from_slice(&hi.jumps_21);
        for (a, b) in lo.snapshots.iter_mut().zip(hi.snapshots) {
            a.states.extend(b.states);
            a.levels.extend(b.levels);
        }
        let (a, b) = (lo.index_range.unwrap(), hi.index_range.unwrap());
        lo.index_range = Some((a.0.min(b.0), a.1.max(b.1)));
        lo.count += hi.count;
        lo
    }

    pub fn snapshot_at(&self, time: f64) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| (s.time - time).abs() < 1e-9)
    }

    pub fn jumps_from(&self, from: Level) -> &[f64] {
        match from {
            Level::One => &self.jumps_12,
            Level::Two => &self.jumps_21,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnsembleOptions {
    /// Sample times at which every trajectory's state is retained.
    pub snapshot_times: Vec<f64>,
}

pub fn run_ensemble(config: &SimulationConfig) -> Result<EnsembleAccumulator> {
    run_ensemble_with(config, &EnsembleOptions::default())
}

/// Runs all trajectories on the current rayon pool and reduces them.
pub fn run_ensemble_with(config: &SimulationConfig, options: &EnsembleOptions) -> Result<EnsembleAccumulator> {
    config.validate()?;
    let times = config.sample_times();
    let snap_idx = options
        .snapshot_times
        .iter()
        .map(|&t| {
            config
                .sample_index(t)
                .ok_or_else(|| Error::InvalidConfig(format!("snapshot time {t} is not a sample time")))
        })
        .collect::<Result<Vec<_>>>()?;

    let n = config.n_trajectories;
    let n_blocks = n.div_ceil(BLOCK);
    let leaves: Vec<EnsembleAccumulator> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = EnsembleAccumulator::empty(times.clone(), &snap_idx);
            for i in b * BLOCK..((b + 1) * BLOCK).min(n) {
                let traj = run_trajectory(config, i)
                    .map_err(|e| Error::Trajectory { index: i, source: Box::new(e) })?;
                acc.push(config, i, &traj);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(tree_reduce(leaves))
}

/// Pairwise reduction `((0,1),(2,3)),...` in index order.
pub fn tree_reduce(mut level: Vec<EnsembleAccumulator>) -> EnsembleAccumulator {
    assert!(!level.is_empty());
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => a.merge(b),
                None => a,
            });
        }
        level = next;
    }
    level.pop().unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRow {
    pub time: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    /// Variance of the mixture: averaged raw moment minus squared mean.
    pub var_x: f64,
    pub var_p: f64,
    pub cov_xp: f64,
    pub energy: f64,
    pub coherence: f64,
    /// Average of the per-trajectory variances.
    pub traj_var_x: f64,
    pub traj_var_p: f64,
}

pub fn ensemble_observables(acc: &EnsembleAccumulator) -> Result<Vec<ObservableRow>> {
    if acc.count == 0 {
        return Err(Error::Empty("ensemble accumulator holds no trajectories"));
    }
    let n = acc.count as f64;
    Ok(acc
        .sample_times
        .iter()
        .zip(&acc.sums)
        .map(|(&time, s)| {
            let (mx, mp) = (s.mean_x / n, s.mean_p / n);
            ObservableRow {
                time,
                mean_x: mx,
                mean_p: mp,
                var_x: s.x2 / n - mx * mx,
                var_p: s.p2 / n - mp * mp,
                cov_xp: s.xp / n - mx * mp,
                energy: s.energy / n,
                coherence: s.coherence / n,
                traj_var_x: s.var_x / n,
                traj_var_p: s.var_p / n,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinSpec {
    pub min: f64,
    pub max: f64,
    pub bins: usize,
}

impl BinSpec {
    pub fn new(min: f64, max: f64, bins: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && max > min) || bins == 0 {
            return Err(Error::InvalidConfig(format!("bad bin spec [{min}, {max}] x {bins}")));
        }
        Ok(Self { min, max, bins })
    }

    pub fn width(&self) -> f64 {
        (self.max - self.min) / self.bins as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub spec: BinSpec,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.underflow + self.overflow
    }

    pub fn edges(&self, bin: usize) -> (f64, f64) {
        let w = self.spec.width();
        (self.spec.min + bin as f64 * w, self.spec.min + (bin + 1) as f64 * w)
    }
}

/// Histogram of jump positions for jumps leaving `from`. Bins are half-open
/// `[left, right)` except the last, which includes `max`.
pub fn jump_histogram(acc: &EnsembleAccumulator, from: Level, spec: &BinSpec) -> Histogram {
    let mut h = Histogram { spec: *spec, counts: vec![0; spec.bins], underflow: 0, overflow: 0 };
    for &x in acc.jumps_from(from) {
        if x < spec.min {
            h.underflow += 1;
        } else if x > spec.max {
            h.overflow += 1;
        } else {
            let b = (((x - spec.min) / spec.width()) as usize).min(spec.bins - 1);
            h.counts[b] += 1;
        }
    }
    h
}

/// Fraction of jumps leaving `from` with `|mean_x| < radius`; `None` without jumps.
pub fn jump_fraction_within(acc: &EnsembleAccumulator, from: Level, radius: f64) -> Option<f64> {
    let xs = acc.jumps_from(from);
    (!xs.is_empty()).then(|| xs.iter().filter(|x| x.abs() < radius).count() as f64 / xs.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::uncertainty_invariant;

    fn small(model: JumpKind, nu: f64, n: u64) -> SimulationConfig {
        SimulationConfig { model, nu, n_trajectories: n, t_final: 10.0, ..Default::default() }
    }

    #[test]
    fn validation() {
        assert!(SimulationConfig::default().validate().is_ok());
        let bad = SimulationConfig { dt: 0.5, ..Default::default() };
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig(m)) if m.contains("nu*dt")));
        assert!(SimulationConfig { n_trajectories: 0, ..Default::default() }.validate().is_err());
        assert!(SimulationConfig { t_final: 30.005, ..Default::default() }.validate().is_err());
        assert!(SimulationConfig { omega2: 0.0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn sample_grid() {
        let c = SimulationConfig::default();
        let t = c.sample_times();
        assert_eq!(t.len(), 301);
        assert_eq!(t[0], 0.0);
        assert!((t[300] - 30.0).abs() < 1e-12);
        assert_eq!(c.sample_index(30.0), Some(300));
        assert_eq!(c.sample_index(2.5), Some(25));
        assert_eq!(c.sample_index(2.55), None);
        assert_eq!(c.sample_index(30.1), None);
    }

    #[test]
    fn no_jumps_follows_closed_form() {
        let c = small(JumpKind::ConstantRate, 0.0, 1);
        let tr = simulate_trajectory(&c, 0).unwrap();
        assert!(tr.jumps.is_empty());
        for (t, s) in tr.sample_times.iter().zip(&tr.states) {
            assert!((s.mean_x - 2.0 * (0.7 * t).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn jumps_alternate_and_levels_track_them() {
        let c = small(JumpKind::ConstantRate, 5.0, 1);
        let tr = simulate_trajectory(&c, 3).unwrap();
        assert!(tr.jumps.len() > 10);
        let mut expect = Level::One;
        for ev in &tr.jumps {
            assert_eq!(ev.from_level, expect);
            assert_ne!(ev.from_level, ev.to_level);
            expect = ev.to_level;
        }
        for (t, l) in tr.sample_times.iter().zip(&tr.levels) {
            let n_before = tr.jumps.iter().filter(|e| e.time <= *t + 1e-12).count();
            let lvl = if n_before % 2 == 0 { Level::One } else { Level::Two };
            assert_eq!(*l, lvl);
        }
        for s in &tr.states {
            assert!((uncertainty_invariant(s) - 0.25).abs() < 1e-9);
        }
    }

    #[test]
    fn trajectory_is_deterministic() {
        let c = small(JumpKind::GroundOverlap, 0.8, 1);
        assert_eq!(simulate_trajectory(&c, 17).unwrap(), simulate_trajectory(&c, 17).unwrap());
        let c2 = SimulationConfig { master_seed: 1, ..c.clone() };
        let a = simulate_trajectory(&SimulationConfig { nu: 8.0, ..c.clone() }, 17).unwrap();
        let b = simulate_trajectory(&SimulationConfig { nu: 8.0, ..c2 }, 17).unwrap();
        assert_ne!(a.jumps, b.jumps);
    }

    #[test]
    fn single_trajectory_ensemble_matches_trajectory() {
        let c = small(JumpKind::ConstantRate, 0.8, 1);
        let acc = run_ensemble(&c).unwrap();
        let obs = ensemble_observables(&acc).unwrap();
        let tr = simulate_trajectory(&c, 0).unwrap();
        for ((row, s), l) in obs.iter().zip(&tr.states).zip(&tr.levels) {
            assert!((row.mean_x - s.mean_x).abs() < 1e-12);
            assert!((row.var_x - s.var_x).abs() < 1e-9);
            assert!((row.traj_var_x - s.var_x).abs() < 1e-15);
            assert!((row.energy - energy(s, &c.params(*l))).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_limit_has_no_spread() {
        let c = small(JumpKind::GroundOverlap, 0.0, 200);
        let obs = ensemble_observables(&run_ensemble(&c).unwrap()).unwrap();
        for row in &obs {
            assert!((row.var_x - row.traj_var_x).abs() < 1e-9);
        }
    }

    #[test]
    fn mixture_variance_identity() {
        let a = 1.3;
        let w = 0.6;
        let mk = |x| Trajectory {
            sample_times: vec![0.0],
            states: vec![GaussianState::pure(x, 0.0, w, 0.0, 1.0).unwrap()],
            levels: vec![Level::One],
            jumps: vec![],
        };
        let cfg = SimulationConfig { t_final: 0.0, ..Default::default() };
        let mut acc = EnsembleAccumulator::empty(vec![0.0], &[]);
        acc.push(&cfg, 0, &mk(a));
        acc.push(&cfg, 1, &mk(-a));
        let obs = ensemble_observables(&acc).unwrap();
        assert!((obs[0].var_x - (w + a * a)).abs() < 1e-15);
        assert!(obs[0].mean_x.abs() < 1e-15);
    }

    #[test]
    fn empty_accumulator_is_an_error() {
        let acc = EnsembleAccumulator::empty(vec![0.0], &[]);
        assert!(matches!(ensemble_observables(&acc), Err(Error::Empty(_))));
    }

    #[test]
    fn merge_commutes_and_counts_add() {
        let c = small(JumpKind::ConstantRate, 0.8, 1);
        let times = c.sample_times();
        let build = |range: std::ops::Range<u64>| {
            let mut acc = EnsembleAccumulator::empty(times.clone(), &[5]);
            for i in range {
                acc.push(&c, i, &simulate_trajectory(&c, i).unwrap());
            }
            acc
        };
        let (a, b, d) = (build(0..5), build(5..9), build(9..12));
        assert_eq!(a.clone().merge(b.clone()), b.clone().merge(a.clone()));
        let left = a.clone().merge(b.clone()).merge(d.clone());
        let right = a.clone().merge(b.clone().merge(d.clone()));
        assert_eq!(left.count, 12);
        assert_eq!(left.jumps_12, right.jumps_12);
        assert_eq!(left.snapshots, right.snapshots);
        for (x, y) in left.sums.iter().zip(&right.sums) {
            assert!((x.energy - y.energy).abs() < 1e-12 * x.energy.abs().max(1.0));
        }
        assert_eq!(left.snapshots[0].states.len(), 12);
        let empty = EnsembleAccumulator::empty(times.clone(), &[5]);
        assert_eq!(empty.merge(a.clone()), a);
    }

    #[test]
    fn ensemble_independent_of_thread_count() {
        let c = small(JumpKind::GroundOverlap, 0.8, 300);
        let opts = EnsembleOptions { snapshot_times: vec![5.0] };
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| run_ensemble_with(&c, &opts).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn snapshot_time_must_be_sampled() {
        let c = small(JumpKind::ConstantRate, 0.8, 2);
        let opts = EnsembleOptions { snapshot_times: vec![0.05] };
        assert!(run_ensemble_with(&c, &opts).is_err());
    }

    #[test]
    fn histogram_counts_and_totals() {
        let c = small(JumpKind::ConstantRate, 0.0, 10);
        let acc = run_ensemble(&c).unwrap();
        let spec = BinSpec::new(-5.0, 5.0, 20).unwrap();
        assert_eq!(jump_histogram(&acc, Level::One, &spec).total(), 0);
        assert_eq!(jump_fraction_within(&acc, Level::One, 1.0), None);

        let mut acc = EnsembleAccumulator::empty(vec![0.0], &[]);
        let tr = Trajectory {
            sample_times: vec![0.0],
            states: vec![GaussianState::reference_initial()],
            levels: vec![Level::One],
            jumps: vec![JumpEvent { time: 1.0, from_level: Level::One, to_level: Level::Two, mean_x_at_jump: 1.26 }],
        };
        acc.push(&c, 0, &tr);
        let h = jump_histogram(&acc, Level::One, &spec);
        assert_eq!(h.total(), 1);
        let (l, r) = h.edges(12);
        assert!((l, r) == (1.0, 1.5));
        assert_eq!(h.counts[12], 1);
        assert_eq!(jump_histogram(&acc, Level::Two, &spec).total(), 0);

        let c = small(JumpKind::ConstantRate, 0.8, 50);
        let acc = run_ensemble(&c).unwrap();
        let narrow = BinSpec::new(-1.0, 1.0, 4).unwrap();
        for lvl in [Level::One, Level::Two] {
            assert_eq!(jump_histogram(&acc, lvl, &narrow).total(), acc.jumps_from(lvl).len() as u64);
        }
    }

    #[test]
    fn forced_jump_lands_in_expected_bin() {
        // nu*dt at the cap: the first step almost surely does not jump, but
        // every recorded event carries the propagated centroid at its time.
        let c = SimulationConfig { nu: 10.0, n_trajectories: 1, t_final: 2.0, ..Default::default() };
        let c = SimulationConfig { model: JumpKind::ConstantRate, ..c };
        let tr = simulate_trajectory(&c, 0).unwrap();
        let first = tr.jumps[0];
        let expected = 2.0 * (0.7 * first.time).cos();
        assert!((first.mean_x_at_jump - expected).abs() < 1e-12);
        let mut acc = EnsembleAccumulator::empty(c.sample_times(), &[]);
        acc.push(&c, 0, &tr);
        let spec = BinSpec::new(-3.0, 3.0, 60).unwrap();
        let h = jump_histogram(&acc, Level::One, &spec);
        let bin = ((expected + 3.0) / 0.1) as usize;
        assert!(h.counts[bin] >= 1);
    }
}
