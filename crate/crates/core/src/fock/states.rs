//! State constructors. Every builder computes the exact state's amplitudes
//! on the truncated basis, renormalizes, and records the pre-normalization
//! deficit as the vector's leakage.

use ndarray::Array1;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::layout::ModeLayout;
use crate::fock::state::FockVector;

/// Relative sign in a two-branch superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Squeezing parameter `zeta = r e^{i phi}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    pub r: f64,
    pub phi: f64,
}

impl SqueezeParams {
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        if !r.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "non-finite squeeze parameters r={r}, phi={phi}"
            )));
        }
        Ok(Self { r, phi })
    }

    pub fn zeta(&self) -> C64 {
        C64::from_polar(self.r, self.phi)
    }

    /// Two-mode squeezing weight `q = tanh(r)`, in (-1, 1) for finite `r`.
    pub fn q(&self) -> f64 {
        self.r.tanh()
    }
}

pub fn vacuum(layout: ModeLayout) -> Result<FockVector> {
    let mut amps = Array1::zeros(layout.dim());
    amps[0] = C64::from(1.0);
    FockVector::from_raw(layout, amps, 0.0)
}

/// Product Fock state `|n_1, ..., n_k>`.
pub fn number_state(layout: ModeLayout, occ: &[usize]) -> Result<FockVector> {
    if occ.len() != layout.n_modes() {
        return Err(Error::ModeCountMismatch {
            expected: layout.n_modes(),
            got: occ.len(),
        });
    }
    for (&(id, cutoff), &n) in layout.modes().iter().zip(occ) {
        if n > cutoff {
            return Err(Error::OutcomeExceedsCutoff { mode: id, n, cutoff });
        }
    }
    let idx = layout.index_of(occ);
    let mut amps = Array1::zeros(layout.dim());
    amps[idx] = C64::from(1.0);
    FockVector::from_raw(layout, amps, 0.0)
}

/// Exact coherent-state amplitudes `e^{-|a|^2/2} a^n / sqrt(n!)` on the
/// truncated basis, renormalized.
pub fn coherent(layout: ModeLayout, alpha: C64) -> Result<FockVector> {
    require_single(&layout)?;
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter("non-finite alpha".into()));
    }
    let d = layout.dim();
    let mut amps = Array1::zeros(d);
    let mut a = C64::from((-alpha.norm_sqr() / 2.0).exp());
    amps[0] = a;
    for n in 1..d {
        a *= alpha / C64::from((n as f64).sqrt());
        amps[n] = a;
    }
    FockVector::from_truncated(layout, amps)
}

/// Squeezed-vacuum amplitudes on even Fock levels,
/// `c_{2n} = (cosh r)^{-1/2} (-e^{i phi} tanh r)^n sqrt((2n)!)/(2^n n!)`,
/// via the stable ratio recurrence, then renormalized.
pub fn squeezed_vacuum(r: f64, phi: f64, layout: ModeLayout) -> Result<FockVector> {
    require_single(&layout)?;
    let params = SqueezeParams::new(r, phi)?;
    let d = layout.dim();
    let mut amps = Array1::zeros(d);
    if r == 0.0 {
        amps[0] = C64::from(1.0);
        return FockVector::from_raw(layout, amps, 0.0);
    }
    let step = -C64::from_polar(r.tanh(), params.phi);
    let mut c = C64::from(1.0 / r.cosh().sqrt());
    amps[0] = c;
    let mut k = 1usize;
    while 2 * k < d {
        c *= step * C64::from(((2 * k - 1) as f64 / (2 * k) as f64).sqrt());
        amps[2 * k] = c;
        k += 1;
    }
    FockVector::from_truncated(layout, amps)
}

/// Normalization factor `N_pm(r) = 2 [1 pm (cosh r sqrt(1 + tanh^2 r))^{-1}]`
/// of the superposition `|r> pm |-r>`.
pub fn cat_normalization(r: f64, sign: Sign) -> f64 {
    2.0 * (1.0 + sign.factor() / (r.cosh() * (1.0 + r.tanh().powi(2)).sqrt()))
}

/// Superposition of oppositely squeezed states
/// `|r; pm> = N_pm^{-1/2} (|r> pm |-r>)`, built from the exact closed-form
/// amplitudes and renormalized over the truncation. The plus branch is
/// supported on `n = 0 mod 4`, the minus branch on `n = 2 mod 4`.
pub fn squeezed_cat(r: f64, sign: Sign, layout: ModeLayout) -> Result<FockVector> {
    require_single(&layout)?;
    if !r.is_finite() {
        return Err(Error::InvalidParameter("non-finite r".into()));
    }
    if r == 0.0 && sign == Sign::Minus {
        return Err(Error::InvalidParameter(
            "|r;-> is undefined at r = 0 (the branches cancel)".into(),
        ));
    }
    let d = layout.dim();
    let mut amps: Array1<C64> = Array1::zeros(d);
    if r == 0.0 {
        amps[0] = C64::from(1.0);
        return FockVector::from_raw(layout, amps, 0.0);
    }
    let norm = cat_normalization(r, sign).sqrt();
    // c_{2k}(r) +- c_{2k}(-r): equal for even k, opposite for odd k.
    let t = r.tanh();
    let mut c = 1.0 / r.cosh().sqrt();
    let keep_even_k = sign == Sign::Plus;
    if keep_even_k {
        amps[0] = C64::from(2.0 * c / norm);
    }
    let mut k = 1usize;
    while 2 * k < d {
        c *= -t * ((2 * k - 1) as f64 / (2 * k) as f64).sqrt();
        if k.is_multiple_of(2) == keep_even_k {
            amps[2 * k] = C64::from(2.0 * c / norm);
        }
        k += 1;
    }
    let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let leakage = (1.0 - n2).max(0.0);
    let scale = C64::from(1.0 / n2.sqrt());
    let amps = amps.mapv(|a| a * scale);
    FockVector::from_raw(layout, amps, leakage)
}

/// Coherent-state cat `prop |a> pm |-a>` with real `a`, normalized by
/// `2 [1 pm e^{-2 a^2}]`.
pub fn coherent_cat(a: f64, sign: Sign, layout: ModeLayout) -> Result<FockVector> {
    require_single(&layout)?;
    if !a.is_finite() {
        return Err(Error::InvalidParameter("non-finite a".into()));
    }
    if a == 0.0 && sign == Sign::Minus {
        return Err(Error::InvalidParameter(
            "odd coherent cat is undefined at a = 0".into(),
        ));
    }
    let d = layout.dim();
    let norm = (2.0 * (1.0 + sign.factor() * (-2.0 * a * a).exp())).sqrt();
    let mut amps = Array1::zeros(d);
    let mut c = (-a * a / 2.0).exp();
    for n in 0..d {
        if n > 0 {
            c *= a / (n as f64).sqrt();
        }
        let branch = 1.0 + sign.factor() * if n % 2 == 0 { 1.0 } else { -1.0 };
        amps[n] = C64::from(c * branch / norm);
    }
    let n2: f64 = amps.iter().map(|x| x.norm_sqr()).sum();
    let leakage = (1.0 - n2).max(0.0);
    let scale = C64::from(1.0 / n2.sqrt());
    FockVector::from_raw(layout, amps.mapv(|x| x * scale), leakage)
}

/// Two-mode squeezed vacuum `sqrt(1 - q^2) sum_n q^n |n, n>` on a two-mode
/// layout, renormalized over the truncation.
pub fn two_mode_squeezed_vacuum(q: f64, layout: ModeLayout) -> Result<FockVector> {
    if layout.n_modes() != 2 {
        return Err(Error::ModeCountMismatch {
            expected: 2,
            got: layout.n_modes(),
        });
    }
    if !(q.is_finite() && q.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "two-mode squeezing weight |q| must be < 1, got {q}"
        )));
    }
    let (c1, c2) = (layout.modes()[0].1, layout.modes()[1].1);
    let nmax = c1.min(c2);
    let mut amps = Array1::zeros(layout.dim());
    let pref = (1.0 - q * q).sqrt();
    let mut w = pref;
    for n in 0..=nmax {
        if n > 0 {
            w *= q;
        }
        amps[layout.index_of(&[n, n])] = C64::from(w);
    }
    FockVector::from_truncated(layout, amps)
}

fn require_single(layout: &ModeLayout) -> Result<()> {
    if layout.n_modes() != 1 {
        return Err(Error::ModeCountMismatch {
            expected: 1,
            got: layout.n_modes(),
        });
    }
    Ok(())
}
