//! Hard-coded run manifests: `full` plus one per plot, `fig1` to `fig15`.

use stosc_core::JumpKind;

use crate::manifest::{InitialKind, Outputs, RunManifest};
use crate::CliError;

pub const PRESETS: &[&str] = &[
    "full", "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12",
    "fig13", "fig14", "fig15",
];

pub fn describe(name: &str) -> &'static str {
    match name {
        "full" => "both jump models, every artifact",
        "fig1" => "ensemble energy vs time, both models",
        "fig2" => "jump positions, level 1 -> 2, both models",
        "fig3" => "jump positions, level 2 -> 1, both models",
        "fig4" => "ensemble position vs time, both models",
        "fig5" => "ensemble momentum vs time, both models",
        "fig6" => "position variance vs time, both models",
        "fig7" => "x-coherence vs time, both models",
        "fig8" => "Fock diagonal at t=30 in the omega1 basis, both models",
        "fig9" => "Wigner function at t = 0, 2, 4, 6, overlap model",
        "fig10" => "Wigner function at t=30, overlap model",
        "fig11" => "energy vs time, squeezed initial states, overlap model",
        "fig12" => "jump positions, squeezed initial states, overlap model",
        "fig13" => "ensemble position, squeezed initial states, overlap model",
        "fig14" => "position variance, squeezed initial states, overlap model",
        "fig15" => "x-coherence, squeezed initial states, overlap model",
        _ => "",
    }
}

pub fn preset(name: &str) -> Result<RunManifest, CliError> {
    let both = vec![JumpKind::ConstantRate, JumpKind::GroundOverlap];
    let overlap = vec![JumpKind::GroundOverlap];
    let squeezed = vec![InitialKind::XSqueezed, InitialKind::PSqueezed];
    let observables = Outputs { observables: true, ..Default::default() };
    let jumps = Outputs { jumps: true, ..Default::default() };
    let base = RunManifest { output_dir: format!("out/{name}").into(), ..RunManifest::default() };

    let m = match name {
        "full" => RunManifest::default(),
        "fig1" | "fig4" | "fig5" | "fig6" | "fig7" => RunManifest { models: both, outputs: observables, ..base },
        "fig2" | "fig3" => RunManifest { models: both, outputs: jumps, ..base },
        "fig8" => RunManifest {
            models: both,
            outputs: Outputs { fock: true, ..Default::default() },
            fock_times: vec![30.0],
            ..base
        },
        "fig9" => RunManifest {
            models: overlap,
            outputs: Outputs { wigner: true, ..Default::default() },
            wigner_times: vec![0.0, 2.0, 4.0, 6.0],
            ..base
        },
        "fig10" => RunManifest {
            models: overlap,
            outputs: Outputs { wigner: true, ..Default::default() },
            wigner_times: vec![30.0],
            ..base
        },
        "fig11" | "fig13" | "fig14" | "fig15" => {
            RunManifest { models: overlap, initial: squeezed, outputs: observables, ..base }
        }
        "fig12" => RunManifest { models: overlap, initial: squeezed, outputs: jumps, ..base },
        _ => {
            return Err(CliError::UnknownPreset { name: name.to_string(), valid: PRESETS.join(", ") });
        }
    };
    Ok(m)
}
