//! Pure multimode states as complex amplitude vectors over a truncated
//! product Fock basis.

use ndarray::{Array1, ArrayView1};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::layout::{ModeId, ModeLayout};
use crate::protocols::{HeraldDiagnostics, HeraldResult};

/// Probability below which a heralding outcome is reported as impossible.
const IMPOSSIBLE: f64 = 1e-300;

/// Pure state over a [`ModeLayout`], with the pre-normalization weight lost
/// to truncation recorded at construction time.
#[derive(Debug, Clone)]
pub struct FockVector {
    layout: ModeLayout,
    amps: Array1<C64>,
    leakage: f64,
}

impl FockVector {
    /// Wrap raw amplitudes without renormalizing. The caller is responsible
    /// for the norm; `leakage` should be the truncation deficit if known.
    pub fn from_raw(layout: ModeLayout, amps: Array1<C64>, leakage: f64) -> Result<Self> {
        if amps.len() != layout.dim() {
            return Err(Error::ModeCountMismatch {
                expected: layout.dim(),
                got: amps.len(),
            });
        }
        Ok(Self { layout, amps, leakage })
    }

    /// [`Self::from_raw`] over a plain vector.
    pub fn from_vec(layout: ModeLayout, amps: Vec<C64>, leakage: f64) -> Result<Self> {
        Self::from_raw(layout, Array1::from_vec(amps), leakage)
    }

    /// Normalize truncated amplitudes, recording `1 - norm^2` as leakage.
    ///
    /// This is the constructor policy used by all state builders: the input
    /// amplitudes are the exact state's coefficients restricted to the
    /// truncated basis.
    pub fn from_truncated(layout: ModeLayout, mut amps: Array1<C64>) -> Result<Self> {
        if amps.len() != layout.dim() {
            return Err(Error::ModeCountMismatch {
                expected: layout.dim(),
                got: amps.len(),
            });
        }
        let n2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if !n2.is_finite() || n2 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "cannot normalize amplitudes with norm^2 = {n2}"
            )));
        }
        let scale = C64::from(1.0 / n2.sqrt());
        for a in amps.iter_mut() {
            *a *= scale;
        }
        Ok(Self {
            layout,
            amps,
            leakage: (1.0 - n2).max(0.0),
        })
    }

    pub fn layout(&self) -> &ModeLayout {
        &self.layout
    }

    pub fn amps(&self) -> ArrayView1<'_, C64> {
        self.amps.view()
    }

    /// Amplitude of one occupation tuple.
    pub fn amp(&self, occ: &[usize]) -> C64 {
        self.amps[self.layout.index_of(occ)]
    }

    /// Pre-normalization truncation deficit recorded by the constructor.
    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    pub fn norm2(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm2() - 1.0).abs() <= 1e-10
    }

    /// Weight on basis states that have at least one mode at its cutoff;
    /// the live truncation diagnostic.
    pub fn boundary_weight(&self) -> f64 {
        let n = self.layout.n_modes();
        self.amps
            .iter()
            .enumerate()
            .filter(|(idx, _)| {
                (0..n).any(|p| self.layout.occupation_in(*idx, p) == self.layout.modes()[p].1)
            })
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Inner product `<self|other>`, conjugating `self`.
    pub fn overlap(&self, other: &Self) -> Result<C64> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product with a state on disjoint modes; `self`'s modes come
    /// first in the combined layout.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let layout = self.layout.concat(&other.layout)?;
        let mut amps = Array1::zeros(layout.dim());
        let d2 = other.layout.dim();
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (j, b) in other.amps.iter().enumerate() {
                amps[i * d2 + j] = a * b;
            }
        }
        FockVector::from_raw(layout, amps, self.leakage + other.leakage)
    }

    /// Project listed modes onto definite photon numbers; the heralded state
    /// lives on the remaining modes and is renormalized, with the outcome
    /// probability reported separately.
    pub fn project_fock(&self, outcomes: &[(ModeId, usize)]) -> Result<HeraldResult> {
        let mut fixed: Vec<(usize, usize)> = Vec::with_capacity(outcomes.len());
        for &(id, n) in outcomes {
            let pos = self.layout.position(id)?;
            let cutoff = self.layout.modes()[pos].1;
            if n > cutoff {
                return Err(Error::OutcomeExceedsCutoff { mode: id, n, cutoff });
            }
            fixed.push((pos, n));
        }
        let measured: Vec<usize> = fixed.iter().map(|&(p, _)| p).collect();
        let kept_layout = self.layout.without(&measured)?;

        let base: usize = fixed
            .iter()
            .map(|&(p, n)| n * self.layout.strides()[p])
            .sum();
        let kept: Vec<usize> = (0..self.layout.n_modes())
            .filter(|p| !measured.contains(p))
            .collect();

        let mut amps = Array1::zeros(kept_layout.dim().max(1));
        let mut occ = vec![0usize; kept.len()];
        for out_idx in 0..kept_layout.dim() {
            let mut rem = out_idx;
            for (k, &p) in kept.iter().enumerate() {
                let d = self.layout.modes()[p].1 + 1;
                let s = kept_layout.strides()[k];
                occ[k] = (rem / s) % d;
                rem %= s;
            }
            let src: usize = base
                + kept
                    .iter()
                    .zip(&occ)
                    .map(|(&p, &n)| n * self.layout.strides()[p])
                    .sum::<usize>();
            amps[out_idx] = self.amps[src];
        }

        let probability: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let diagnostics = HeraldDiagnostics {
            boundary_weight: self.boundary_weight(),
            input_leakage: self.leakage,
            cutoffs: self.layout.modes().to_vec(),
            nonorthogonality: None,
        };
        if probability < IMPOSSIBLE || kept.is_empty() {
            let state = None;
            return Ok(HeraldResult {
                probability: if probability < IMPOSSIBLE { 0.0 } else { probability },
                state,
                diagnostics,
            });
        }
        let scale = C64::from(1.0 / probability.sqrt());
        let amps = amps.mapv(|a| a * scale);
        Ok(HeraldResult {
            probability,
            state: Some(FockVector::from_raw(kept_layout, amps, self.leakage)?),
            diagnostics,
        })
    }

    /// Project one mode onto an arbitrary single-mode state (given by its
    /// amplitudes over that mode's truncated basis), returning the outcome
    /// probability and the renormalized remainder.
    pub fn project_onto_mode_vector(
        &self,
        mode: ModeId,
        probe: ArrayView1<'_, C64>,
    ) -> Result<(f64, Option<FockVector>)> {
        let pos = self.layout.position(mode)?;
        let d = self.layout.modes()[pos].1 + 1;
        if probe.len() != d {
            return Err(Error::ModeCountMismatch { expected: d, got: probe.len() });
        }
        let kept_layout = self.layout.without(&[pos])?;
        if kept_layout.n_modes() == 0 {
            let stride = self.layout.strides()[pos];
            let amp: C64 = (0..d)
                .map(|k| probe[k].conj() * self.amps[k * stride])
                .sum();
            return Ok((amp.norm_sqr(), None));
        }
        let stride = self.layout.strides()[pos];
        let kept: Vec<usize> = (0..self.layout.n_modes()).filter(|&p| p != pos).collect();
        let mut amps = Array1::zeros(kept_layout.dim());
        let mut occ = vec![0usize; kept.len()];
        for out_idx in 0..kept_layout.dim() {
            let mut rem = out_idx;
            for (k, &p) in kept.iter().enumerate() {
                let dk = self.layout.modes()[p].1 + 1;
                let s = kept_layout.strides()[k];
                occ[k] = (rem / s) % dk;
                rem %= s;
            }
            let base: usize = kept
                .iter()
                .zip(&occ)
                .map(|(&p, &n)| n * self.layout.strides()[p])
                .sum();
            amps[out_idx] = (0..d).map(|k| probe[k].conj() * self.amps[base + k * stride]).sum();
        }
        let p: f64 = amps.iter().map(|a: &C64| a.norm_sqr()).sum();
        if p < IMPOSSIBLE {
            return Ok((0.0, None));
        }
        let scale = C64::from(1.0 / p.sqrt());
        let amps = amps.mapv(|a| a * scale);
        Ok((p, Some(FockVector::from_raw(kept_layout, amps, self.leakage)?)))
    }
}
