use std::path::PathBuf;

use clap::{Parser, ValueEnum};

/// Truncated-Fock-space experiments for squeezed-cat states.
#[derive(Parser, Debug)]
#[command(name = "sqcat", version, about)]
pub struct Args {
    /// Which experiment to run.
    #[arg(long, value_enum)]
    pub experiment: Experiment,

    /// Single squeezing value (wigner, minus-convert).
    #[arg(long)]
    pub r: Option<f64>,

    /// Squeezing sweep range.
    #[arg(long)]
    pub r_min: Option<f64>,
    #[arg(long)]
    pub r_max: Option<f64>,
    #[arg(long)]
    pub r_step: Option<f64>,

    /// Resource-squeezing sweep range (herald-surface).
    #[arg(long)]
    pub q_min: Option<f64>,
    #[arg(long)]
    pub q_max: Option<f64>,
    #[arg(long)]
    pub q_step: Option<f64>,

    /// Coherent amplitude of the plotted state (coherent / coherent-cat).
    #[arg(long)]
    pub a: Option<f64>,

    /// Probe amplitude for the cross-Kerr demo.
    #[arg(long)]
    pub alpha: Option<f64>,

    /// State plotted by the wigner experiment.
    #[arg(long, value_enum)]
    pub state: Option<StateKind>,

    /// Photon-number cutoff (per mode); each experiment has its own default.
    #[arg(long)]
    pub cutoff: Option<usize>,

    /// Displacement realization for the heralded scheme.
    #[arg(long, value_enum, default_value_t = DispMode::Series6)]
    pub displacement_mode: DispMode,

    /// Phase-space grid step (wigner).
    #[arg(long)]
    pub grid_step: Option<f64>,

    /// Phase-space window half-width (wigner).
    #[arg(long)]
    pub alpha_max: Option<f64>,

    /// Transmittance scan step (minus-convert).
    #[arg(long)]
    pub t_step: Option<f64>,

    /// Truncation-leakage gate for the entropy curves.
    #[arg(long)]
    pub leakage_tol: Option<f64>,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Output file path.
    #[arg(long)]
    pub out: PathBuf,

    /// Cap the worker thread count.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    HeraldSurface,
    Wigner,
    Entropy,
    KerrDemo,
    MinusConvert,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DispMode {
    Exact,
    Series6,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateKind {
    Vacuum,
    Coherent,
    Squeezed,
    SqueezedCatPlus,
    SqueezedCatMinus,
    CoherentCatPlus,
    CoherentCatMinus,
}

impl StateKind {
    pub fn descriptor(&self) -> &'static str {
        match self {
            StateKind::Vacuum => "vacuum",
            StateKind::Coherent => "coherent",
            StateKind::Squeezed => "squeezed",
            StateKind::SqueezedCatPlus => "squeezed-cat-plus",
            StateKind::SqueezedCatMinus => "squeezed-cat-minus",
            StateKind::CoherentCatPlus => "coherent-cat-plus",
            StateKind::CoherentCatMinus => "coherent-cat-minus",
        }
    }
}

/// Inclusive grid `min, min+step, ..., max` (with a step/2 endpoint guard).
pub fn grid(min: f64, max: f64, step: f64, name: &str) -> Result<Vec<f64>, String> {
    if !(min.is_finite() && max.is_finite() && step.is_finite() && step > 0.0) {
        return Err(format!("invalid {name} range: [{min}, {max}] step {step}"));
    }
    if max < min {
        return Err(format!("empty {name} range: [{min}, {max}]"));
    }
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let x = min + step * k as f64;
        if x > max + step / 2.0 {
            break;
        }
        out.push(x);
        k += 1;
    }
    if out.is_empty() {
        return Err(format!("empty {name} range: [{min}, {max}] step {step}"));
    }
    Ok(out)
}
