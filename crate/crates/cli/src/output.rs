//! Plain-text artifacts: CSV tables plus `.meta` sidecars.
//!
//! Every file opens with a `#` comment carrying the format version and the
//! seeds. Floats are written with 17 significant digits so they parse back
//! to the identical `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use stosc_core::Histogram;

use crate::manifest::{RunManifest, Variant};
use crate::run::{RunResults, VariantResult};
use crate::CliError;

pub fn fmt_sci(v: f64) -> String {
    format!("{v:.16e}")
}

fn header(m: &RunManifest, variant: Option<&Variant>) -> String {
    match variant {
        Some(v) => format!(
            "# stosc format_version={} master_seed={} variant={} variant_seed={}\n",
            m.format_version, m.config.master_seed, v.label, v.config.master_seed
        ),
        None => format!("# stosc format_version={} master_seed={}\n", m.format_version, m.config.master_seed),
    }
}

fn io_err(path: &Path, source: std::io::Error) -> CliError {
    CliError::Io { path: path.to_path_buf(), source }
}

/// Creates `dir` and checks that a file can be written there.
pub fn preflight(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let probe = dir.join(".stosc-write-probe");
    fs::write(&probe, b"").map_err(|e| io_err(&probe, e))?;
    fs::remove_file(&probe).map_err(|e| io_err(&probe, e))
}

fn time_tag(t: f64) -> String {
    let r = (t * 1e6).round() / 1e6;
    format!("t{r}")
}

struct Writer<'a> {
    dir: &'a Path,
    written: Vec<PathBuf>,
}

impl Writer<'_> {
    fn put(&mut self, name: &str, body: String) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|e| io_err(&path, e))?;
        self.written.push(path);
        Ok(())
    }
}

pub fn observables_csv(m: &RunManifest, r: &VariantResult) -> String {
    let mut s = header(m, Some(&r.variant));
    s.push_str("time,mean_x,mean_p,var_x,var_p,energy,coherence\n");
    for o in &r.observables {
        let row = [o.time, o.mean_x, o.mean_p, o.var_x, o.var_p, o.energy, o.coherence];
        let _ = writeln!(s, "{}", row.map(fmt_sci).join(","));
    }
    s
}

fn energy_csv(m: &RunManifest, results: &RunResults) -> String {
    let mut s = header(m, None);
    s.push_str("time");
    for r in &results.variants {
        let _ = write!(s, ",{}", r.variant.label);
    }
    s.push('\n');
    let Some(first) = results.variants.first() else { return s };
    for (i, o) in first.observables.iter().enumerate() {
        s.push_str(&fmt_sci(o.time));
        for r in &results.variants {
            let _ = write!(s, ",{}", fmt_sci(r.observables[i].energy));
        }
        s.push('\n');
    }
    s
}

fn histogram_csv(m: &RunManifest, r: &VariantResult, h: &Histogram, turning: f64) -> String {
    let mut s = header(m, Some(&r.variant));
    let _ = writeln!(
        s,
        "# turning_point={} underflow={} overflow={} total={}",
        fmt_sci(turning),
        h.underflow,
        h.overflow,
        h.total()
    );
    s.push_str("bin_left,bin_right,count\n");
    for (i, c) in h.counts.iter().enumerate() {
        let (l, rr) = h.edges(i);
        let _ = writeln!(s, "{},{},{c}", fmt_sci(l), fmt_sci(rr));
    }
    s
}

/// Writes every requested artifact for `results` into `dir`.
pub fn write_outputs(m: &RunManifest, results: &RunResults, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    preflight(dir)?;
    let mut w = Writer { dir, written: Vec::new() };
    let mut conf = header(m, None);
    conf.push_str(&m.to_config_text());
    w.put("effective.conf", conf)?;

    if m.outputs.observables {
        w.put("energy.csv", energy_csv(m, results))?;
    }
    for r in &results.variants {
        let label = &r.variant.label;
        if m.outputs.observables {
            w.put(&format!("{label}_observables.csv"), observables_csv(m, r))?;
        }
        if m.outputs.jumps {
            w.put(&format!("{label}_jumps_1to2.csv"), histogram_csv(m, r, &r.jumps_12, r.turning_points[0]))?;
            w.put(&format!("{label}_jumps_2to1.csv"), histogram_csv(m, r, &r.jumps_21, r.turning_points[1]))?;
        }
        for (t, g) in &r.wigner {
            let tag = time_tag(*t);
            let mut s = header(m, Some(&r.variant));
            s.push_str("x,p,W\n");
            for i in 0..g.x_axis.points {
                let x = fmt_sci(g.x_axis.node(i));
                for j in 0..g.p_axis.points {
                    let _ = writeln!(s, "{x},{},{}", fmt_sci(g.p_axis.node(j)), fmt_sci(g.values[[i, j]]));
                }
            }
            w.put(&format!("{label}_wigner_{tag}.csv"), s)?;

            let norm = g.normalization();
            let mut meta = header(m, Some(&r.variant));
            let _ = writeln!(meta, "time = {}", fmt_sci(*t));
            let _ = writeln!(meta, "x_axis = {}, {}, {}", fmt_sci(g.x_axis.min), fmt_sci(g.x_axis.max), g.x_axis.points);
            let _ = writeln!(meta, "p_axis = {}, {}, {}", fmt_sci(g.p_axis.min), fmt_sci(g.p_axis.max), g.p_axis.points);
            let _ = writeln!(meta, "normalization = {}", fmt_sci(norm));
            let _ = writeln!(meta, "normalization_residual = {}", fmt_sci(norm - 1.0));
            for warning in &g.coverage_warnings {
                let _ = writeln!(meta, "coverage_warning = {warning}");
            }
            w.put(&format!("{label}_wigner_{tag}.meta"), meta)?;
        }
        for (t, f) in &r.fock {
            let tag = time_tag(*t);
            let mut s = header(m, Some(&r.variant));
            s.push_str("row,col,re,im\n");
            for ((i, j), v) in f.values.indexed_iter() {
                let _ = writeln!(s, "{i},{j},{},{}", fmt_sci(v.re), fmt_sci(v.im));
            }
            w.put(&format!("{label}_fock_{tag}.csv"), s)?;

            let mut d = header(m, Some(&r.variant));
            d.push_str("n,population,ln_population\n");
            for (n, p) in f.diagonal().iter().enumerate() {
                let _ = writeln!(d, "{n},{},{}", fmt_sci(*p), fmt_sci(p.ln()));
            }
            w.put(&format!("{label}_fock_diag_{tag}.csv"), d)?;

            let mut meta = header(m, Some(&r.variant));
            let _ = writeln!(meta, "time = {}", fmt_sci(*t));
            let _ = writeln!(meta, "basis_omega = {}", fmt_sci(f.basis_omega));
            let _ = writeln!(meta, "n_max = {}", f.n_max);
            let _ = writeln!(meta, "trace = {}", fmt_sci(f.trace()));
            let _ = writeln!(meta, "leakage = {}", fmt_sci(f.leakage));
            let _ = writeln!(meta, "hermiticity_residual = {}", fmt_sci(f.hermiticity_residual()));
            w.put(&format!("{label}_fock_{tag}.meta"), meta)?;
        }
    }
    Ok(w.written)
}

/// Reads a CSV written by this module back into rows of numbers.
pub fn read_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().map(|h| h.split(',').map(str::to_string).collect()).unwrap_or_default();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse::<f64>().expect("numeric field")).collect())
        .collect();
    (header, rows)
}
