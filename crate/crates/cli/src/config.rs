//! Line-oriented `key = value` configuration documents.
//!
//! Blank lines and `#` comments are ignored. Every key is optional; missing
//! keys take the values of the `full` preset. Unknown and repeated keys are
//! rejected.

use std::collections::HashMap;
use std::path::PathBuf;
use std::str::FromStr;

use stosc_core::{Axis, BinSpec, Error as CoreError, JumpKind, Level};

use crate::manifest::{InitialKind, Outputs, RunManifest, FORMAT_VERSION};
use crate::ConfigError;

const KEYS: &[&str] = &[
    "format_version",
    "omega1",
    "omega2",
    "mass",
    "hbar",
    "nu",
    "model",
    "initial",
    "mean_x",
    "mean_p",
    "var_x",
    "var_p",
    "cov_xp",
    "initial_level",
    "t_final",
    "dt",
    "sample_stride",
    "n_trajectories",
    "seed",
    "outputs",
    "jump_x_min",
    "jump_x_max",
    "jump_bins",
    "wigner_times",
    "wigner_x_min",
    "wigner_x_max",
    "wigner_x_points",
    "wigner_p_min",
    "wigner_p_max",
    "wigner_p_points",
    "fock_times",
    "fock_n_max",
    "fock_basis",
    "fock_x_min",
    "fock_x_max",
    "fock_points",
    "output_dir",
];

struct Entry {
    line: usize,
    value: String,
}

struct Doc {
    entries: HashMap<String, Entry>,
}

impl Doc {
    fn get<T: FromStr>(&self, key: &str, what: &str) -> Result<Option<T>, ConfigError> {
        match self.entries.get(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|_| ConfigError::new(e.line, key, format!("expected {what}, got `{}`", e.value))),
        }
    }

    fn f64(&self, key: &str, slot: &mut f64) -> Result<(), ConfigError> {
        if let Some(v) = self.get::<f64>(key, "a number")? {
            if !v.is_finite() {
                return Err(self.err(key, format!("must be finite, got {v}")));
            }
            *slot = v;
        }
        Ok(())
    }

    fn usize(&self, key: &str, slot: &mut usize) -> Result<(), ConfigError> {
        if let Some(v) = self.get::<usize>(key, "a non-negative integer")? {
            *slot = v;
        }
        Ok(())
    }

    fn list(&self, key: &str) -> Option<(usize, Vec<String>)> {
        self.entries.get(key).map(|e| {
            let items = e.value.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            (e.line, items)
        })
    }

    fn times(&self, key: &str, slot: &mut Vec<f64>) -> Result<(), ConfigError> {
        if let Some((line, items)) = self.list(key) {
            *slot = items
                .iter()
                .map(|s| s.parse::<f64>().map_err(|_| ConfigError::new(line, key, format!("`{s}` is not a time"))))
                .collect::<Result<_, _>>()?;
        }
        Ok(())
    }

    fn line(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |e| e.line)
    }

    fn err(&self, key: &str, msg: impl Into<String>) -> ConfigError {
        ConfigError::new(self.line(key), key, msg)
    }

    /// The first key among `keys` present in the document, else the first one.
    fn blame<'a>(&self, keys: &[&'a str]) -> &'a str {
        keys.iter().copied().find(|k| self.entries.contains_key(*k)).unwrap_or(keys[0])
    }
}

fn tokenize(text: &str) -> Result<Doc, ConfigError> {
    let mut entries = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(ConfigError::new(line, content, "expected `key = value`"));
        };
        let (key, value) = (k.trim(), v.trim());
        if !KEYS.contains(&key) {
            return Err(ConfigError::new(line, key, "unknown key"));
        }
        if entries.contains_key(key) {
            return Err(ConfigError::new(line, key, "key given more than once"));
        }
        entries.insert(key.to_string(), Entry { line, value: value.to_string() });
    }
    Ok(Doc { entries })
}

fn axis(doc: &Doc, prefix: &str, default: Axis) -> Result<Axis, ConfigError> {
    let (kmin, kmax, kpts) = (format!("{prefix}_min"), format!("{prefix}_max"), format!("{prefix}_points"));
    let mut a = default;
    doc.f64(&kmin, &mut a.min)?;
    doc.f64(&kmax, &mut a.max)?;
    doc.usize(&kpts, &mut a.points)?;
    Axis::new(a.min, a.max, a.points).map_err(|e| doc.err(doc.blame(&[&kmin, &kmax, &kpts]), e.to_string()))
}

/// Parses a configuration document into a validated manifest.
pub fn parse_config(text: &str) -> Result<RunManifest, ConfigError> {
    let doc = tokenize(text)?;
    let mut m = RunManifest::default();

    if let Some(v) = doc.get::<u32>("format_version", "an integer")? {
        if v != FORMAT_VERSION {
            return Err(doc.err("format_version", format!("unsupported version {v} (expected {FORMAT_VERSION})")));
        }
    }

    let c = &mut m.config;
    doc.f64("omega1", &mut c.omega1)?;
    doc.f64("omega2", &mut c.omega2)?;
    doc.f64("mass", &mut c.mass)?;
    doc.f64("hbar", &mut c.hbar)?;
    doc.f64("nu", &mut c.nu)?;
    doc.f64("mean_x", &mut c.initial_state.mean_x)?;
    doc.f64("mean_p", &mut c.initial_state.mean_p)?;
    doc.f64("var_x", &mut c.initial_state.var_x)?;
    doc.f64("var_p", &mut c.initial_state.var_p)?;
    doc.f64("cov_xp", &mut c.initial_state.cov_xp)?;
    doc.f64("t_final", &mut c.t_final)?;
    doc.f64("dt", &mut c.dt)?;
    doc.usize("sample_stride", &mut c.sample_stride)?;
    if let Some(n) = doc.get::<u64>("n_trajectories", "a positive integer")? {
        c.n_trajectories = n;
    }
    if let Some(s) = doc.get::<u64>("seed", "an unsigned 64-bit integer")? {
        c.master_seed = s;
    }
    if let Some(l) = doc.get::<u8>("initial_level", "1 or 2")? {
        c.initial_level = Level::from_index(l).ok_or_else(|| doc.err("initial_level", "must be 1 or 2"))?;
    }

    if let Some((line, items)) = doc.list("model") {
        let mut models = Vec::new();
        for it in &items {
            match it.as_str() {
                "constant" => models.push(JumpKind::ConstantRate),
                "overlap" => models.push(JumpKind::GroundOverlap),
                "both" => models.extend([JumpKind::ConstantRate, JumpKind::GroundOverlap]),
                other => {
                    return Err(ConfigError::new(line, "model", format!("unknown model `{other}` (constant, overlap, both)")))
                }
            }
        }
        m.models = dedup_nonempty(models).ok_or_else(|| ConfigError::new(line, "model", "no model given"))?;
    }
    if let Some((line, items)) = doc.list("initial") {
        let kinds = items
            .iter()
            .map(|s| {
                InitialKind::parse(s).ok_or_else(|| {
                    ConfigError::new(line, "initial", format!("unknown initial state `{s}` (reference, x-squeezed, p-squeezed)"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        m.initial = dedup_nonempty(kinds).ok_or_else(|| ConfigError::new(line, "initial", "no initial state given"))?;
    }
    if let Some((line, items)) = doc.list("outputs") {
        let mut o = Outputs::default();
        for it in &items {
            match it.as_str() {
                "observables" => o.observables = true,
                "jumps" => o.jumps = true,
                "wigner" => o.wigner = true,
                "fock" => o.fock = true,
                other => {
                    return Err(ConfigError::new(
                        line,
                        "outputs",
                        format!("unknown artifact `{other}` (observables, jumps, wigner, fock)"),
                    ))
                }
            }
        }
        m.outputs = o;
    }

    let mut bins = m.jump_bins;
    doc.f64("jump_x_min", &mut bins.min)?;
    doc.f64("jump_x_max", &mut bins.max)?;
    doc.usize("jump_bins", &mut bins.bins)?;
    m.jump_bins = BinSpec::new(bins.min, bins.max, bins.bins)
        .map_err(|e| doc.err(doc.blame(&["jump_x_min", "jump_x_max", "jump_bins"]), e.to_string()))?;

    doc.times("wigner_times", &mut m.wigner_times)?;
    m.wigner_x = axis(&doc, "wigner_x", m.wigner_x)?;
    m.wigner_p = axis(&doc, "wigner_p", m.wigner_p)?;
    doc.times("fock_times", &mut m.fock_times)?;
    doc.usize("fock_n_max", &mut m.fock_n_max)?;
    if let Some(l) = doc.get::<u8>("fock_basis", "1 or 2")? {
        m.fock_basis = Level::from_index(l).ok_or_else(|| doc.err("fock_basis", "must be 1 or 2"))?;
    }
    let fock_default = m.fock_quadrature;
    m.fock_quadrature = {
        let mut a = fock_default;
        doc.f64("fock_x_min", &mut a.min)?;
        doc.f64("fock_x_max", &mut a.max)?;
        doc.usize("fock_points", &mut a.points)?;
        Axis::new(a.min, a.max, a.points)
            .map_err(|e| doc.err(doc.blame(&["fock_x_min", "fock_x_max", "fock_points"]), e.to_string()))?
    };
    if let Some(e) = doc.entries.get("output_dir") {
        if e.value.is_empty() {
            return Err(ConfigError::new(e.line, "output_dir", "must not be empty"));
        }
        m.output_dir = PathBuf::from(&e.value);
    }

    validate_manifest(&m).map_err(|(keys, msg)| doc.err(doc.blame(&keys), msg))?;
    Ok(m)
}

fn dedup_nonempty<T: PartialEq>(items: Vec<T>) -> Option<Vec<T>> {
    let mut out: Vec<T> = Vec::new();
    for it in items {
        if !out.contains(&it) {
            out.push(it);
        }
    }
    (!out.is_empty()).then_some(out)
}

/// Cross-field checks. On failure returns the keys to blame, most specific first.
pub fn validate_manifest(m: &RunManifest) -> Result<(), (Vec<&'static str>, String)> {
    let c = &m.config;
    if c.nu * c.dt > stosc_core::jump::MAX_RATE_DT {
        return Err((vec!["dt", "nu"], format!("nu*dt exceeds {} ({})", stosc_core::jump::MAX_RATE_DT, c.nu * c.dt)));
    }
    for v in m.variants() {
        if let Err(e) = v.config.validate() {
            let keys = match &e {
                CoreError::InvalidParams(s) if s.contains("omega") => vec!["omega1", "omega2"],
                CoreError::InvalidParams(s) if s.contains("mass") => vec!["mass"],
                CoreError::InvalidParams(_) => vec!["hbar"],
                CoreError::InvalidState(_) => vec!["var_x", "var_p", "mean_x", "mean_p", "cov_xp"],
                CoreError::InvalidConfig(s) if s.contains("t_final") => vec!["t_final", "dt"],
                CoreError::InvalidConfig(s) if s.contains("stride") => vec!["sample_stride"],
                CoreError::InvalidConfig(s) if s.contains("n_trajectories") => vec!["n_trajectories"],
                CoreError::InvalidConfig(s) if s.contains("nu") => vec!["nu"],
                _ => vec!["dt"],
            };
            return Err((keys, e.to_string()));
        }
        if let Err(e) = v.config.initial_state.check_uncertainty(c.hbar, 1e-12) {
            return Err((vec!["var_x", "var_p", "cov_xp", "initial"], e.to_string()));
        }
    }
    for (key, times, on) in [
        ("wigner_times", &m.wigner_times, m.outputs.wigner),
        ("fock_times", &m.fock_times, m.outputs.fock),
    ] {
        for &t in times.iter().filter(|_| on) {
            if t > c.t_final + 1e-9 {
                return Err((vec![key], format!("time {t} is after t_final {}", c.t_final)));
            }
            if c.sample_index(t).is_none() {
                return Err((vec![key], format!("time {t} is not a sample time (every {} units)", c.dt * c.sample_stride as f64)));
            }
        }
    }
    if m.outputs.fock {
        let basis = c.params(m.fock_basis);
        stosc_core::phase_space::check_fock_quadrature(&basis, m.fock_n_max, &m.fock_quadrature)
            .map_err(|e| (vec!["fock_points", "fock_x_max", "fock_n_max"], e.to_string()))?;
    }
    Ok(())
}
