//! Phase-space and entanglement characterization.
//!
//! Wigner values are computed through the displaced-parity identity
//! `W(alpha) = (2/pi) <psi| D(alpha) P D(alpha)^dag |psi>` with `P` the
//! photon-number parity. The displacement here is the same truncated-
//! generator exponential as [`crate::fock::displacement`], evaluated fast
//! through one eigendecomposition: `alpha a^dag - alpha* a` is unitarily
//! equivalent (by diagonal phase matrices) to `|alpha|` times a fixed real
//! symmetric tridiagonal matrix, so a single symmetric eigensolve per
//! cutoff turns every displacement into two dense mat-vecs.
//!
//! Entanglement entropies come from the Schmidt decomposition of the
//! two-mode amplitude matrix: the eigenvalues of `A A^dag` are the squared
//! Schmidt coefficients.

use nalgebra::DMatrix;
use ndarray::{Array1, Array2, ArrayView1};
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::layout::ModeLayout;
use crate::fock::state::FockVector;
use crate::fock::states::{squeezed_cat, two_mode_squeezed_vacuum, vacuum, Sign};
use crate::fock::operator::expm;

/// Squared Schmidt values below this are dropped before the entropy sum
/// (singular values below 1e-12).
const SCHMIDT_WEIGHT_FLOOR: f64 = 1e-24;

/// Uniform grid `min, min+step, ..., <= max (+ step/2 guard)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl GridRange {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && step.is_finite() && step > 0.0 && max >= min) {
            return Err(Error::EmptyRange(format!(
                "grid range [{min}, {max}] step {step}"
            )));
        }
        Ok(Self { min, max, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let x = self.min + self.step * k as f64;
            if x > self.max + self.step / 2.0 {
                break;
            }
            out.push(x);
            k += 1;
        }
        out
    }
}

/// Rectangular phase-space grid of Wigner values.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    pub re_range: GridRange,
    pub im_range: GridRange,
    /// `values[(i, j)]` is `W(re_i + i im_j)`.
    pub values: Array2<f64>,
    pub state_descriptor: String,
    pub cutoff: usize,
}

impl WignerGrid {
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Riemann sum of the grid over its window.
    pub fn integral(&self) -> f64 {
        self.values.sum() * self.re_range.step * self.im_range.step
    }
}

/// Displaced-parity Wigner evaluator for one single-mode cutoff.
pub struct DisplacedParity {
    cutoff: usize,
    eigvals: Vec<f64>,
    /// Orthogonal eigenvectors of the tridiagonal form, column-major.
    eigvecs: Vec<f64>,
}

impl DisplacedParity {
    pub fn new(cutoff: usize) -> Self {
        let d = cutoff + 1;
        let mut t = DMatrix::<f64>::zeros(d, d);
        for n in 0..cutoff {
            let v = -((n + 1) as f64).sqrt();
            t[(n + 1, n)] = v;
            t[(n, n + 1)] = v;
        }
        let eig = t.symmetric_eigen();
        let eigvals = eig.eigenvalues.iter().copied().collect();
        let eigvecs = eig.eigenvectors.as_slice().to_vec();
        Self { cutoff, eigvals, eigvecs }
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Apply `D(alpha) = exp(alpha a^dag - alpha* a)` (truncated-generator
    /// exponential) to single-mode amplitudes.
    pub fn displace(&self, alpha: C64, amps: ArrayView1<'_, C64>) -> Array1<C64> {
        let d = self.cutoff + 1;
        assert_eq!(amps.len(), d, "amplitude length does not match cutoff");
        let phi = if alpha == C64::from(0.0) { 0.0 } else { alpha.arg() };
        let m = alpha.norm();
        // v = U R^dag psi, with R = diag(e^{i n phi}), U = diag(i^n)
        let mut v: Vec<C64> = (0..d)
            .map(|n| {
                let r = C64::from_polar(1.0, -(n as f64) * phi);
                let u = C64::from_polar(1.0, std::f64::consts::FRAC_PI_2 * n as f64);
                u * r * amps[n]
            })
            .collect();
        // w = Q^T v
        let mut w = vec![C64::from(0.0); d];
        for (k, wk) in w.iter_mut().enumerate() {
            let col = &self.eigvecs[k * d..(k + 1) * d];
            *wk = col.iter().zip(&v).map(|(&q, &x)| C64::from(q) * x).sum();
        }
        // w *= e^{-i m mu}
        for (k, wk) in w.iter_mut().enumerate() {
            *wk *= C64::from_polar(1.0, -m * self.eigvals[k]);
        }
        // v = Q w
        for x in v.iter_mut() {
            *x = C64::from(0.0);
        }
        for (k, &wk) in w.iter().enumerate() {
            let col = &self.eigvecs[k * d..(k + 1) * d];
            for (n, &q) in col.iter().enumerate() {
                v[n] += C64::from(q) * wk;
            }
        }
        // out = R U^dag v
        Array1::from_iter((0..d).map(|n| {
            let r = C64::from_polar(1.0, (n as f64) * phi);
            let u = C64::from_polar(1.0, -std::f64::consts::FRAC_PI_2 * n as f64);
            r * u * v[n]
        }))
    }

    /// Wigner value at one phase-space point.
    pub fn wigner(&self, amps: ArrayView1<'_, C64>, alpha: C64) -> f64 {
        let displaced = self.displace(-alpha, amps);
        let parity_sum: f64 = displaced
            .iter()
            .enumerate()
            .map(|(n, a)| if n % 2 == 0 { a.norm_sqr() } else { -a.norm_sqr() })
            .sum();
        (2.0 / std::f64::consts::PI) * parity_sum
    }

    /// Characteristic function `chi(xi) = <psi| D(xi) |psi>`.
    pub fn characteristic(&self, amps: ArrayView1<'_, C64>, xi: C64) -> C64 {
        let displaced = self.displace(xi, amps);
        amps.iter().zip(displaced.iter()).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Wigner value of a single-mode state by displaced parity. Builds a fresh
/// evaluator; use [`DisplacedParity`] directly for many points.
pub fn wigner_value(state: &FockVector, alpha: C64) -> Result<f64> {
    if state.layout().n_modes() != 1 {
        return Err(Error::ModeCountMismatch { expected: 1, got: state.layout().n_modes() });
    }
    let cutoff = state.layout().modes()[0].1;
    Ok(DisplacedParity::new(cutoff).wigner(state.amps(), alpha))
}

/// Wigner values over a rectangular grid, evaluated in parallel; the result
/// is independent of the evaluation order and worker count.
pub fn wigner_grid(
    state: &FockVector,
    re_range: GridRange,
    im_range: GridRange,
    descriptor: impl Into<String>,
) -> Result<WignerGrid> {
    if state.layout().n_modes() != 1 {
        return Err(Error::ModeCountMismatch { expected: 1, got: state.layout().n_modes() });
    }
    let cutoff = state.layout().modes()[0].1;
    let re = re_range.points();
    let im = im_range.points();
    if re.is_empty() || im.is_empty() {
        return Err(Error::EmptyRange("wigner grid".into()));
    }
    let evaluator = DisplacedParity::new(cutoff);
    let amps = state.amps();
    let rows: Vec<Vec<f64>> = re
        .par_iter()
        .map(|&x| im.iter().map(|&y| evaluator.wigner(amps, C64::new(x, y))).collect())
        .collect();
    let mut values = Array2::zeros((re.len(), im.len()));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, w) in row.into_iter().enumerate() {
            values[(i, j)] = w;
        }
    }
    Ok(WignerGrid {
        re_range,
        im_range,
        values,
        state_descriptor: descriptor.into(),
        cutoff,
    })
}

/// Closed-form Wigner function of the odd coherent cat
/// `prop |a> - |-a>` (real `a`):
/// `[e^{-2|alpha-a|^2} + e^{-2|alpha+a|^2} - 2 e^{-2|alpha|^2} cos(4 a alpha_i)]
///  / (pi (1 - e^{-2 a^2}))`.
pub fn coherent_cat_wigner_closed_form(a: f64, alpha: C64) -> f64 {
    let (x, y) = (alpha.re, alpha.im);
    let norm = std::f64::consts::PI * (1.0 - (-2.0 * a * a).exp());
    let g_minus = (-2.0 * ((x - a).powi(2) + y * y)).exp();
    let g_plus = (-2.0 * ((x + a).powi(2) + y * y)).exp();
    let fringe = 2.0 * (-2.0 * (x * x + y * y)).exp() * (4.0 * a * y).cos();
    (g_minus + g_plus - fringe) / norm
}

/// Two-mode output of a balanced beam splitter fed with `|r; sign>` in mode
/// `a` and vacuum in mode `b`, on a `(cutoff, cutoff)` layout.
///
/// Built per total-photon sector: the photon number of the input cat is
/// conserved by the splitter, and every populated sector fits under the
/// cutoffs, so the construction is exact for the truncated cat.
pub fn make_bs_output_state(r: f64, sign: Sign, cutoff: usize) -> Result<FockVector> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::InvalidParameter(format!("invalid squeezing {r}")));
    }
    let cat = squeezed_cat(r, sign, ModeLayout::single('a', cutoff)?)?;
    let layout = ModeLayout::pair('a', cutoff, 'b', cutoff)?;
    let d = cutoff + 1;
    let mut amps = Array1::zeros(layout.dim());
    let theta = std::f64::consts::FRAC_PI_4;
    for (n, &cn) in cat.amps().iter().enumerate() {
        if cn.norm_sqr() == 0.0 {
            continue;
        }
        // sector of total photon number n: basis |p, n-p>, p = 0..n
        let mut gen: Array2<C64> = Array2::zeros((n + 1, n + 1));
        for p in 0..=n {
            if p < n {
                gen[(p + 1, p)] += C64::from(theta * (((p + 1) * (n - p)) as f64).sqrt());
            }
            if p >= 1 {
                gen[(p - 1, p)] -= C64::from(theta * ((p * (n - p + 1)) as f64).sqrt());
            }
        }
        let block = expm(&gen);
        for p in 0..=n {
            amps[p * d + (n - p)] += cn * block[(p, n)];
        }
    }
    FockVector::from_raw(layout, amps, cat.leakage())
}

/// Entropy of entanglement (base 2) of a bipartite pure state: Shannon
/// entropy of the squared Schmidt coefficients of the amplitude matrix.
pub fn entanglement_entropy(state: &FockVector) -> Result<f64> {
    if state.layout().n_modes() != 2 {
        return Err(Error::ModeCountMismatch { expected: 2, got: state.layout().n_modes() });
    }
    let norm2 = state.norm2();
    if (norm2 - 1.0).abs() > 1e-6 {
        return Err(Error::NotNormalized { norm2 });
    }
    let d1 = state.layout().modes()[0].1 + 1;
    let d2 = state.layout().modes()[1].1 + 1;
    let amps = state.amps();

    // rho_a = A A^dag, Hermitian d1 x d1
    let mut rho = vec![C64::from(0.0); d1 * d1];
    for i in 0..d1 {
        for j in 0..=i {
            let mut acc = C64::from(0.0);
            for k in 0..d2 {
                acc += amps[i * d2 + k] * amps[j * d2 + k].conj();
            }
            rho[i * d1 + j] = acc;
            rho[j * d1 + i] = acc.conj();
        }
    }
    // Real-symmetric embedding [[X, -Y], [Y, X]] doubles each eigenvalue.
    // Entries far below the Schmidt floor are zeroed: squaring them inside
    // the eigensolver underflows and poisons the shifts with NaN.
    let n = d1;
    let floor = |x: f64| if x.abs() < 1e-150 { 0.0 } else { x };
    let mut emb = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = rho[i * n + j];
            emb[(i, j)] = floor(z.re);
            emb[(n + i, n + j)] = floor(z.re);
            emb[(i, n + j)] = floor(-z.im);
            emb[(n + i, j)] = floor(z.im);
        }
    }
    let mut lambdas: Vec<f64> = emb.symmetric_eigen().eigenvalues.iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    let mut entropy = 0.0;
    for pair in lambdas.chunks(2) {
        let lam = pair[0];
        if lam >= SCHMIDT_WEIGHT_FLOOR {
            entropy -= lam * lam.log2();
        }
    }
    Ok(entropy)
}

/// Beam-splitter and resource entanglement entropies against squeezing.
#[derive(Debug, Clone)]
pub struct EntropyCurve {
    pub r_values: Vec<f64>,
    pub s_minus: Vec<f64>,
    pub s_plus: Vec<f64>,
    pub s_tmsv: Vec<f64>,
    /// How the two-mode-squeezed-vacuum weight relates to `r`.
    pub mapping_note: String,
}

impl EntropyCurve {
    /// Grid-level sign-change bracket of `s_minus - s_tmsv`, linearly
    /// interpolated.
    pub fn crossover(&self) -> Option<f64> {
        let gap: Vec<f64> = self
            .s_minus
            .iter()
            .zip(&self.s_tmsv)
            .map(|(a, b)| a - b)
            .collect();
        for k in 0..gap.len().saturating_sub(1) {
            if gap[k] > 0.0 && gap[k + 1] <= 0.0 {
                let t = gap[k] / (gap[k] - gap[k + 1]);
                return Some(self.r_values[k] + t * (self.r_values[k + 1] - self.r_values[k]));
            }
        }
        None
    }
}

/// Entropies `S_minus(r)`, `S_plus(r)` of the balanced-splitter outputs and
/// `S_tmsv` of the two-mode squeezed vacuum at `q = tanh r`, per grid point.
/// Errors when the cat state at the largest `r` loses more than
/// `leakage_tol` of its weight to the cutoff.
pub fn entropy_curves(r_values: &[f64], cutoff: usize, leakage_tol: f64) -> Result<EntropyCurve> {
    if r_values.is_empty() {
        return Err(Error::EmptyRange("entropy r grid".into()));
    }
    for &r in r_values {
        if !(r.is_finite() && r > 0.0 && r <= 1.5) {
            return Err(Error::InvalidParameter(format!(
                "entropy grid squeezing must lie in (0, 1.5], got {r}"
            )));
        }
    }
    let r_max = r_values.iter().copied().fold(0.0, f64::max);
    let worst = squeezed_cat(r_max, Sign::Minus, ModeLayout::single('a', cutoff)?)?;
    if worst.leakage() > leakage_tol {
        return Err(Error::ExcessiveLeakage { leakage: worst.leakage(), tol: leakage_tol });
    }

    let rows: Vec<(f64, f64, f64)> = r_values
        .par_iter()
        .map(|&r| -> Result<(f64, f64, f64)> {
            let s_minus = entanglement_entropy(&make_bs_output_state(r, Sign::Minus, cutoff)?)?;
            let s_plus = entanglement_entropy(&make_bs_output_state(r, Sign::Plus, cutoff)?)?;
            let tmsv = two_mode_squeezed_vacuum(r.tanh(), ModeLayout::pair('a', cutoff, 'b', cutoff)?)?;
            let s_tmsv = entanglement_entropy(&tmsv)?;
            Ok((s_minus, s_plus, s_tmsv))
        })
        .collect::<Result<_>>()?;

    Ok(EntropyCurve {
        r_values: r_values.to_vec(),
        s_minus: rows.iter().map(|x| x.0).collect(),
        s_plus: rows.iter().map(|x| x.1).collect(),
        s_tmsv: rows.iter().map(|x| x.2).collect(),
        mapping_note: "q = tanh r".into(),
    })
}

/// Bisect the root of `S_minus(r) - S_tmsv(tanh r)` in `[lo, hi]`.
pub fn find_entropy_crossover(cutoff: usize, lo: f64, hi: f64) -> Result<f64> {
    let gap = |r: f64| -> Result<f64> {
        let s_minus = entanglement_entropy(&make_bs_output_state(r, Sign::Minus, cutoff)?)?;
        let tmsv = two_mode_squeezed_vacuum(r.tanh(), ModeLayout::pair('a', cutoff, 'b', cutoff)?)?;
        Ok(s_minus - entanglement_entropy(&tmsv)?)
    };
    let (mut a, mut b) = (lo, hi);
    let (ga, gb) = (gap(a)?, gap(b)?);
    if !(ga > 0.0 && gb < 0.0) {
        return Err(Error::InvalidParameter(format!(
            "no sign change of the entropy gap on [{lo}, {hi}] (gap: {ga:.4}, {gb:.4})"
        )));
    }
    for _ in 0..50 {
        let mid = 0.5 * (a + b);
        if gap(mid)? > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Vacuum two-mode state helper.
pub fn vacuum_pair(cutoff: usize) -> Result<FockVector> {
    vacuum(ModeLayout::pair('a', cutoff, 'b', cutoff)?)
}
