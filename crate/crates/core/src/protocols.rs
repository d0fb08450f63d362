//! Heralded generation protocols for the squeezed-cat states.
//!
//! Three procedures are covered:
//!
//! 1. Ideal cross-Kerr heralding: a squeezed state picks up a
//!    photon-number-dependent phase on a coherent probe; distinguishing the
//!    probe's two phases heralds `|r> pm |-r>`.
//! 2. The four-detector linear-optical scheme: a two-mode squeezed vacuum
//!    feeds one arm of a three-beam-splitter network, weak displacements
//!    are applied to the four network arms, and detecting exactly one
//!    photon in each arm projects the idler onto an approximate `|r;+>`.
//! 3. Conversion of the plus cat into the minus cat with a `|2>` ancilla, a
//!    tunable-transmittance beam splitter, and a vacuum herald.

use ndarray::Array1;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::layout::{ModeId, ModeLayout};
use crate::fock::operator::{beam_splitter, displacement, DisplacementMode};
use crate::fock::state::FockVector;
use crate::fock::states::{coherent, number_state, squeezed_cat, two_mode_squeezed_vacuum, vacuum, Sign};

/// Maximum coherent-probe truncation leakage accepted by the cross-Kerr
/// pipeline.
pub const KERR_PROBE_LEAK_TOL: f64 = 1e-8;

/// Truncation and validity diagnostics attached to a heralded outcome.
#[derive(Debug, Clone)]
pub struct HeraldDiagnostics {
    /// Weight of the pre-measurement state on basis states with any mode at
    /// its cutoff.
    pub boundary_weight: f64,
    /// Constructor-recorded truncation deficit of the input state.
    pub input_leakage: f64,
    /// Cutoffs used, per mode.
    pub cutoffs: Vec<(ModeId, usize)>,
    /// For coherent-state discrimination: the branch non-orthogonality
    /// bound `e^{-2 alpha^2}`.
    pub nonorthogonality: Option<f64>,
}

/// Post-measurement normalized state plus heralding probability.
#[derive(Debug, Clone)]
pub struct HeraldResult {
    pub probability: f64,
    /// `None` when the outcome has probability zero or no modes remain.
    pub state: Option<FockVector>,
    pub diagnostics: HeraldDiagnostics,
}

impl HeraldResult {
    /// The heralded state, or an error for an impossible outcome.
    pub fn state(&self) -> Result<&FockVector> {
        self.state.as_ref().ok_or(Error::ZeroProbability)
    }
}

/// Displacement parameters of the four-detector scheme.
#[derive(Debug, Clone)]
pub struct SchemeParams {
    /// Target squeezing of the output cat.
    pub r: f64,
    /// Resource two-mode squeezing weight, in (0, 1).
    pub q: f64,
    /// Common displacement scale `c = 6^{-1/4} tanh^{-1/2}(r)`.
    pub c: f64,
    /// The four displacement amplitudes `c q e^{i theta}`,
    /// `theta = pi/4, 3pi/4, 5pi/4, 7pi/4`.
    pub alphas: [C64; 4],
    /// Transmittance for the plus-to-minus conversion stage.
    pub conversion_transmittance: f64,
}

/// Beam-splitter matrices of the network: mode 4 sequentially couples to
/// modes 1, 2, 3 so that a source photon is spread evenly (amplitude 1/2
/// into each of the four arms).
pub const SCHEME_BS_1: [[f64; 2]; 2] = [[0.8660254037844386, -0.5], [0.5, 0.8660254037844386]];
pub const SCHEME_BS_2: [[f64; 2]; 2] = [
    [0.816496580927726, -0.5773502691896258],
    [0.5773502691896258, 0.816496580927726],
];
pub const SCHEME_BS_3: [[f64; 2]; 2] = [
    [std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2],
    [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2],
];

/// Cutoffs and displacement realization for a scheme run.
#[derive(Debug, Clone, Copy)]
pub struct SchemeConfig {
    /// Photon-number cutoff used for all five modes.
    pub cutoff: usize,
    pub displacement: DisplacementMode,
}

impl Default for SchemeConfig {
    fn default() -> Self {
        Self { cutoff: 5, displacement: DisplacementMode::Series6 }
    }
}

/// Solve the displacement amplitudes that cancel the heralded one-, two-,
/// and three-photon idler components: the four amplitudes are the roots of
/// `x^4 + prod(alpha) = 0` with `prod(alpha) = q^4 tanh^{-2}(r) / 6`.
pub fn solve_displacements(r: f64, q: f64) -> Result<SchemeParams> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "target squeezing r must be positive and finite (got {r}); the displacement scale diverges at r = 0"
        )));
    }
    if !(q.is_finite() && q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "resource squeezing weight q must lie in (0, 1), got {q}"
        )));
    }
    let c = 6f64.powf(-0.25) / r.tanh().sqrt();
    let modulus = c * q;
    let mut alphas = [C64::from(0.0); 4];
    for (k, alpha) in alphas.iter_mut().enumerate() {
        let theta = std::f64::consts::FRAC_PI_4 * (2 * k + 1) as f64;
        *alpha = C64::from_polar(modulus, theta);
    }
    let params = SchemeParams {
        r,
        q,
        c,
        alphas,
        conversion_transmittance: ratio_matching_transmittance(),
    };
    let (e1, e2, e3, e4) = params.symmetric_functions();
    let target = q.powi(4) / (6.0 * r.tanh().powi(2));
    let tol = 1e-12 * target.max(1.0);
    if e1.norm() > tol || e2.norm() > tol || e3.norm() > tol || (e4 - C64::from(target)).norm() > tol
    {
        return Err(Error::InvalidParameter(
            "displacement roots violate their defining symmetric-function conditions".into(),
        ));
    }
    Ok(params)
}

impl SchemeParams {
    /// Elementary symmetric functions `(e1, e2, e3, e4)` of the four
    /// displacement amplitudes.
    pub fn symmetric_functions(&self) -> (C64, C64, C64, C64) {
        let a = &self.alphas;
        let e1 = a[0] + a[1] + a[2] + a[3];
        let e2 = a[0] * a[1] + a[0] * a[2] + a[0] * a[3] + a[1] * a[2] + a[1] * a[3] + a[2] * a[3];
        let e3 = a[0] * a[1] * a[2] + a[0] * a[1] * a[3] + a[0] * a[2] * a[3] + a[1] * a[2] * a[3];
        let e4 = a[0] * a[1] * a[2] * a[3];
        (e1, e2, e3, e4)
    }
}

const DETECTOR_MODES: [ModeId; 4] = [ModeId('1'), ModeId('2'), ModeId('3'), ModeId('4')];
const IDLER_MODE: ModeId = ModeId('A');

/// Run the four-detector scheme: beam-splitter network on the two-mode
/// squeezed source, weak displacements on the four arms, then projection of
/// every arm onto a single photon. Returns the idler state and the
/// four-click probability.
pub fn run_plus_scheme(params: &SchemeParams, config: &SchemeConfig) -> Result<HeraldResult> {
    let c = config.cutoff;
    let layout = ModeLayout::new(vec![
        (ModeId('1'), c),
        (ModeId('2'), c),
        (ModeId('3'), c),
        (ModeId('4'), c),
        (IDLER_MODE, c),
    ])?;
    let vac123 = vacuum(ModeLayout::new(vec![
        (ModeId('1'), c),
        (ModeId('2'), c),
        (ModeId('3'), c),
    ])?)?;
    let tmsv = two_mode_squeezed_vacuum(params.q, ModeLayout::pair('4', c, 'A', c)?)?;
    let mut state = vac123.tensor(&tmsv)?;

    for (matrix, mode) in [
        (SCHEME_BS_1, ModeId('1')),
        (SCHEME_BS_2, ModeId('2')),
        (SCHEME_BS_3, ModeId('3')),
    ] {
        let bs = beam_splitter(&layout, (mode, ModeId('4')), matrix)?;
        state = bs.apply(&state)?;
    }
    for (k, &alpha) in params.alphas.iter().enumerate() {
        let d = displacement(&layout, DETECTOR_MODES[k], alpha, config.displacement)?;
        state = d.apply(&state)?;
    }
    state.project_fock(&DETECTOR_MODES.map(|m| (m, 1usize)))
}

/// Pure-state fidelity `|<a|b>|^2` on normalized directions.
pub fn fidelity(a: &FockVector, b: &FockVector) -> Result<f64> {
    let ov = a.overlap(b)?;
    Ok(ov.norm_sqr() / (a.norm2() * b.norm2()))
}

/// Fidelity of a heralded single-mode state with the exact normalized
/// `|r;+>`: overlap taken against the exact state's amplitudes, so weight
/// of the target beyond the stored cutoff counts against the fidelity.
pub fn plus_target_fidelity(state: &FockVector, r: f64) -> Result<f64> {
    let target = squeezed_cat(r, Sign::Plus, state.layout().clone())?;
    Ok((1.0 - target.leakage()) * fidelity(state, &target)?)
}

/// Heralded idler amplitudes on `|0>..|4>` to leading (fourth) order, with
/// the displacement amplitudes entering through their elementary symmetric
/// functions. The n-photon source term carries the even-spread amplitude
/// `sqrt(n!)/2^n` of the beam-splitter network.
pub fn perturbative_plus_coefficients(params: &SchemeParams) -> [C64; 5] {
    let (e1, e2, e3, e4) = params.symmetric_functions();
    let q = params.q;
    let pref = (1.0 - q * q).sqrt();
    let spread = |n: u32| ((1..=n).product::<u32>() as f64).sqrt() / 2f64.powi(n as i32);
    [
        C64::from(pref) * e4,
        C64::from(pref * spread(1) * q) * e3,
        C64::from(pref * spread(2) * q * q) * e2,
        C64::from(pref * spread(3) * q.powi(3)) * e1,
        C64::from(pref * spread(4) * q.powi(4)),
    ]
}

/// The leading-order heralded idler state as a normalized vector; oracle
/// for [`run_plus_scheme`] at small `q`.
pub fn perturbative_plus_state(params: &SchemeParams, cutoff: usize) -> Result<FockVector> {
    if cutoff < 4 {
        return Err(Error::InvalidParameter(
            "perturbative idler state needs cutoff >= 4".into(),
        ));
    }
    let coeffs = perturbative_plus_coefficients(params);
    let layout = ModeLayout::single('A', cutoff)?;
    let mut amps = Array1::zeros(cutoff + 1);
    for (n, &a) in coeffs.iter().enumerate() {
        amps[n] = a;
    }
    let n2: f64 = amps.iter().map(|a: &C64| a.norm_sqr()).sum();
    let amps = amps.mapv(|a| a / C64::from(n2.sqrt()));
    FockVector::from_raw(layout, amps, 0.0)
}

/// Evolve `|psi>_1 |alpha>_2` under the cross-Kerr phase
/// `n_1 -> alpha e^{-i kappa tau n_1}` on the probe, expanding every probe
/// coherent state in the truncated Fock basis.
pub fn cross_kerr_evolve(
    state1: &FockVector,
    alpha: C64,
    kappa_tau: f64,
    probe_mode: ModeId,
    probe_cutoff: usize,
) -> Result<FockVector> {
    if state1.layout().n_modes() != 1 {
        return Err(Error::ModeCountMismatch { expected: 1, got: state1.layout().n_modes() });
    }
    if !alpha.is_finite() || !kappa_tau.is_finite() {
        return Err(Error::InvalidParameter("non-finite cross-Kerr parameters".into()));
    }
    let signal_mode = state1.layout().modes()[0].0;
    if signal_mode == probe_mode {
        return Err(Error::DuplicateMode(probe_mode));
    }
    let probe_layout = ModeLayout::single(probe_mode, probe_cutoff)?;
    let reference = coherent(probe_layout.clone(), alpha)?;
    if reference.leakage() > KERR_PROBE_LEAK_TOL {
        return Err(Error::ExcessiveLeakage {
            leakage: reference.leakage(),
            tol: KERR_PROBE_LEAK_TOL,
        });
    }
    let layout = state1.layout().concat(&probe_layout)?;
    let d2 = probe_cutoff + 1;
    let mut amps = Array1::zeros(layout.dim());
    for (n, &cn) in state1.amps().iter().enumerate() {
        if cn.norm_sqr() == 0.0 {
            continue;
        }
        let rotated = alpha * C64::from_polar(1.0, -kappa_tau * n as f64);
        let probe = coherent(probe_layout.clone(), rotated)?;
        for (k, &pk) in probe.amps().iter().enumerate() {
            amps[n * d2 + k] = cn * pk;
        }
    }
    FockVector::from_raw(layout, amps, state1.leakage() + reference.leakage())
}

/// Herald one cross-Kerr branch by projecting the probe mode onto the
/// coherent state `|+alpha>` (plus) or `|-alpha>` (minus). Ideal homodyne
/// discrimination is modeled as this projection; the branch
/// non-orthogonality `e^{-2 alpha^2}` is reported in the diagnostics.
pub fn cross_kerr_herald(
    state12: &FockVector,
    probe_mode: ModeId,
    alpha: f64,
    sign: Sign,
) -> Result<HeraldResult> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::InvalidParameter(
            "probe amplitude must be real and positive; the branches are indistinguishable at alpha = 0".into(),
        ));
    }
    let probe_cutoff = state12.layout().cutoff(probe_mode)?;
    let probe_layout = ModeLayout::single(probe_mode, probe_cutoff)?;
    let probe = coherent(probe_layout, C64::from(sign.factor() * alpha))?;
    let boundary_weight = state12.boundary_weight();
    let (probability, state) = state12.project_onto_mode_vector(probe_mode, probe.amps())?;
    if state.is_none() {
        return Err(Error::ZeroProbability);
    }
    Ok(HeraldResult {
        probability,
        state,
        diagnostics: HeraldDiagnostics {
            boundary_weight,
            input_leakage: state12.leakage(),
            cutoffs: state12.layout().modes().to_vec(),
            nonorthogonality: Some((-2.0 * alpha * alpha).exp()),
        },
    })
}

/// Transmittance that matches the converted `|6>/|2>` amplitude ratio to the
/// minus cat's: `sqrt(15) T^2 (c4/c0) = (sqrt(10)/4) tanh^2 r` with
/// `c4/c0 = (sqrt(6)/4) tanh^2 r` gives `T^2 = 1/3` for every `r`.
pub fn ratio_matching_transmittance() -> f64 {
    3f64.powf(-0.5)
}

/// Convert a plus-cat-like state into a minus-cat-like one: mix with a
/// `|2>` ancilla on a transmittance-`T` beam splitter and herald on vacuum
/// in the ancilla arm. On an input `c0|0> + c4|4>` the unnormalized output
/// is `c0 (1-T) |2> + sqrt(15) c4 T^2 (1-T) |6>`.
pub fn convert_to_minus(state_a: &FockVector, t: f64) -> Result<HeraldResult> {
    if state_a.layout().n_modes() != 1 {
        return Err(Error::ModeCountMismatch { expected: 1, got: state_a.layout().n_modes() });
    }
    if !(t.is_finite() && t > 0.0 && t < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "transmittance must lie in (0, 1), got {t}"
        )));
    }
    let a_id = state_a.layout().modes()[0].0;
    let cutoff = state_a.layout().modes()[0].1;
    if cutoff < 2 {
        return Err(Error::InvalidParameter(
            "conversion ancilla carries two photons; cutoff must be >= 2".into(),
        ));
    }
    let b_id = if a_id == ModeId('b') { ModeId('c') } else { ModeId('b') };
    let ancilla = number_state(ModeLayout::single(b_id, cutoff)?, &[2])?;
    let joint_layout = state_a.layout().concat(ancilla.layout())?;
    let joint = state_a.tensor(&ancilla)?;
    // a^dag -> sqrt(T) a^dag + sqrt(1-T) b^dag, b^dag -> -sqrt(1-T) a^dag + sqrt(T) b^dag
    let bs = beam_splitter(
        &joint_layout,
        (a_id, b_id),
        [[t.sqrt(), (1.0 - t).sqrt()], [-(1.0 - t).sqrt(), t.sqrt()]],
    )?;
    let mixed = bs.apply(&joint)?;
    let herald = mixed.project_fock(&[(b_id, 0)])?;
    if herald.state.is_none() {
        return Err(Error::ZeroProbability);
    }
    Ok(herald)
}

/// Brute-force search for the transmittance maximizing the fidelity of the
/// converted state with `target`, on a grid of the given step.
pub fn scan_conversion_transmittance(
    state_a: &FockVector,
    target: &FockVector,
    step: f64,
) -> Result<(f64, f64)> {
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::InvalidParameter(format!("invalid scan step {step}")));
    }
    let mut best = (0.0, -1.0);
    let mut t = step;
    while t < 1.0 - step / 2.0 {
        let herald = convert_to_minus(state_a, t)?;
        let f = fidelity(herald.state()?, target)?;
        if f > best.1 {
            best = (t, f);
        }
        t += step;
    }
    if best.1 < 0.0 {
        return Err(Error::EmptyRange("transmittance scan".into()));
    }
    Ok(best)
}
