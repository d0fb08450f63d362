//! Dense operators acting on one or two designated modes of a layout.
//!
//! All exact Gaussian operators are matrix exponentials of their truncated
//! generators, so they are unitary on the retained subspace by construction.
//! Generators that conserve a charge (total photon number for beam
//! splitters, photon-number difference for two-mode squeezers, parity for
//! single-mode squeezers) are exponentiated block by block, which keeps the
//! cost low and makes the conserved structure explicit.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::layout::{ModeId, ModeLayout};
use crate::fock::state::FockVector;

/// How displacement operators are realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DisplacementMode {
    /// Matrix exponential of the truncated generator; unitary on the
    /// retained subspace.
    Exact,
    /// Six-term Taylor polynomial of the truncated generator. Not unitary;
    /// used to reproduce small-displacement heralding numerics.
    Series6,
}

/// Dense complex matrix on the subspace of one or two target modes.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    layout: ModeLayout,
    targets: Vec<ModeId>,
    matrix: Array2<C64>,
}

impl OperatorMatrix {
    /// Wrap an explicit matrix. For two targets the sub-basis is row-major
    /// `(n_first, n_second)` in the order given, regardless of the modes'
    /// positions in the layout.
    pub fn from_matrix(layout: ModeLayout, targets: &[ModeId], matrix: Array2<C64>) -> Result<Self> {
        if targets.is_empty() || targets.len() > 2 {
            return Err(Error::ModeCountMismatch { expected: 2, got: targets.len() });
        }
        let mut dim = 1usize;
        for &t in targets {
            dim *= layout.cutoff(t)? + 1;
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::DuplicateMode(targets[0]));
        }
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::ModeCountMismatch { expected: dim, got: matrix.nrows() });
        }
        Ok(Self { layout, targets: targets.to_vec(), matrix })
    }

    pub fn layout(&self) -> &ModeLayout {
        &self.layout
    }

    pub fn targets(&self) -> &[ModeId] {
        &self.targets
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    /// Hermitian adjoint.
    pub fn dagger(&self) -> Self {
        let n = self.matrix.nrows();
        let mut m = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.matrix[(j, i)].conj();
            }
        }
        Self { layout: self.layout.clone(), targets: self.targets.clone(), matrix: m }
    }

    /// `max_ij |(U^dag U - I)_ij|` on the retained subspace.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.matrix.nrows();
        let prod = self.dagger().matrix.dot(&self.matrix);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { C64::from(1.0) } else { C64::from(0.0) };
                worst = worst.max((prod[(i, j)] - want).norm());
            }
        }
        worst
    }

    /// Apply to a state on the same layout; only target-mode amplitudes are
    /// transformed.
    pub fn apply(&self, state: &FockVector) -> Result<FockVector> {
        if *state.layout() != self.layout {
            return Err(Error::LayoutMismatch);
        }
        let layout = &self.layout;
        let positions: Vec<usize> = self
            .targets
            .iter()
            .map(|&t| layout.position(t))
            .collect::<Result<_>>()?;
        let dims: Vec<usize> = positions.iter().map(|&p| layout.modes()[p].1 + 1).collect();
        let strides: Vec<usize> = positions.iter().map(|&p| layout.strides()[p]).collect();
        let sub_dim: usize = dims.iter().product();

        let rest: Vec<usize> = (0..layout.n_modes()).filter(|p| !positions.contains(p)).collect();
        let rest_dims: Vec<usize> = rest.iter().map(|&p| layout.modes()[p].1 + 1).collect();
        let rest_strides: Vec<usize> = rest.iter().map(|&p| layout.strides()[p]).collect();
        let rest_count: usize = rest_dims.iter().product::<usize>().max(1);

        let src = state.amps();
        let mut out = Array1::zeros(layout.dim());
        let mut gather: Array1<C64> = Array1::zeros(sub_dim);
        let mut odo = vec![0usize; rest.len()];
        for _ in 0..rest_count {
            let base: usize = odo.iter().zip(&rest_strides).map(|(&n, &s)| n * s).sum();
            if self.targets.len() == 1 {
                for m in 0..dims[0] {
                    gather[m] = src[base + m * strides[0]];
                }
            } else {
                for m in 0..dims[0] {
                    for n in 0..dims[1] {
                        gather[m * dims[1] + n] = src[base + m * strides[0] + n * strides[1]];
                    }
                }
            }
            let transformed = self.matrix.dot(&gather);
            if self.targets.len() == 1 {
                for m in 0..dims[0] {
                    out[base + m * strides[0]] = transformed[m];
                }
            } else {
                for m in 0..dims[0] {
                    for n in 0..dims[1] {
                        out[base + m * strides[0] + n * strides[1]] = transformed[m * dims[1] + n];
                    }
                }
            }
            // advance odometer over the untouched modes
            for k in (0..odo.len()).rev() {
                odo[k] += 1;
                if odo[k] < rest_dims[k] {
                    break;
                }
                odo[k] = 0;
            }
        }
        FockVector::from_raw(layout.clone(), out, state.leakage())
    }
}

/// Scaling-and-squaring Taylor exponential of a dense complex matrix.
pub fn expm(a: &Array2<C64>) -> Array2<C64> {
    let n = a.nrows();
    let norm: f64 = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = C64::from(1.0 / f64::powi(2.0, squarings as i32));
    let scaled = a.mapv(|x| x * scale);

    let mut result = Array2::eye(n);
    let mut term: Array2<C64> = Array2::eye(n);
    for k in 1..=40 {
        term = term.dot(&scaled).mapv(|x| x / C64::from(k as f64));
        result += &term;
        let worst = term.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if worst < 1e-22 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

/// Exponentiate a generator block by block along a conserved integer charge
/// of the sub-basis. Off-block entries of the generator must vanish.
fn exp_conserving(gen: &Array2<C64>, charge: impl Fn(usize) -> i64) -> Array2<C64> {
    let dim = gen.nrows();
    let mut groups: std::collections::BTreeMap<i64, Vec<usize>> = Default::default();
    for idx in 0..dim {
        groups.entry(charge(idx)).or_default().push(idx);
    }
    let mut out = Array2::zeros((dim, dim));
    for members in groups.values() {
        let k = members.len();
        let mut block = Array2::zeros((k, k));
        for (bi, &i) in members.iter().enumerate() {
            for (bj, &j) in members.iter().enumerate() {
                block[(bi, bj)] = gen[(i, j)];
            }
        }
        let e = expm(&block);
        for (bi, &i) in members.iter().enumerate() {
            for (bj, &j) in members.iter().enumerate() {
                out[(i, j)] = e[(bi, bj)];
            }
        }
    }
    out
}

/// Identity on one mode.
pub fn identity(layout: &ModeLayout, mode: ModeId) -> Result<OperatorMatrix> {
    let d = layout.cutoff(mode)? + 1;
    OperatorMatrix::from_matrix(layout.clone(), &[mode], Array2::eye(d))
}

fn displacement_generator(alpha: C64, d: usize) -> Array2<C64> {
    let mut g: Array2<C64> = Array2::zeros((d, d));
    for n in 0..d - 1 {
        let amp = ((n + 1) as f64).sqrt();
        g[(n + 1, n)] += alpha * C64::from(amp);
        g[(n, n + 1)] -= alpha.conj() * C64::from(amp);
    }
    g
}

/// Displacement operator `exp(alpha a^dag - alpha* a)` on the truncated
/// space, either as the exact matrix exponential or as the six-term Taylor
/// polynomial of the same generator.
pub fn displacement(
    layout: &ModeLayout,
    mode: ModeId,
    alpha: C64,
    disp: DisplacementMode,
) -> Result<OperatorMatrix> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter("non-finite alpha".into()));
    }
    let d = layout.cutoff(mode)? + 1;
    let g = displacement_generator(alpha, d);
    let m = match disp {
        DisplacementMode::Exact => expm(&g),
        DisplacementMode::Series6 => {
            let mut acc: Array2<C64> = Array2::eye(d);
            let mut term: Array2<C64> = Array2::eye(d);
            for k in 1..=5 {
                term = term.dot(&g).mapv(|x| x / C64::from(k as f64));
                acc += &term;
            }
            acc
        }
    };
    OperatorMatrix::from_matrix(layout.clone(), &[mode], m)
}

/// Single-mode squeezer `S(zeta) = exp[(zeta* a^2 - zeta a^dag^2)/2]`,
/// exponentiated on the two parity blocks it conserves.
pub fn single_mode_squeezer(layout: &ModeLayout, mode: ModeId, zeta: C64) -> Result<OperatorMatrix> {
    if !zeta.is_finite() {
        return Err(Error::InvalidParameter("non-finite zeta".into()));
    }
    let d = layout.cutoff(mode)? + 1;
    let mut g: Array2<C64> = Array2::zeros((d, d));
    for n in 0..d.saturating_sub(2) {
        let amp = (((n + 1) * (n + 2)) as f64).sqrt() / 2.0;
        g[(n + 2, n)] -= zeta * C64::from(amp);
        g[(n, n + 2)] += zeta.conj() * C64::from(amp);
    }
    let m = exp_conserving(&g, |idx| (idx % 2) as i64);
    OperatorMatrix::from_matrix(layout.clone(), &[mode], m)
}

/// Two-mode squeezer `S_ab(zeta) = exp(zeta* a b - zeta a^dag b^dag)`.
/// `S_ab(-s)|0,0>` has positive coefficients `q^n`, `q = tanh s`. The
/// generator conserves the photon-number difference between the two modes
/// and is exponentiated per difference block.
pub fn two_mode_squeezer(
    layout: &ModeLayout,
    modes: (ModeId, ModeId),
    zeta: C64,
) -> Result<OperatorMatrix> {
    if !zeta.is_finite() {
        return Err(Error::InvalidParameter("non-finite zeta".into()));
    }
    let d1 = layout.cutoff(modes.0)? + 1;
    let d2 = layout.cutoff(modes.1)? + 1;
    let dim = d1 * d2;
    let mut g: Array2<C64> = Array2::zeros((dim, dim));
    for m in 0..d1 - 1 {
        for n in 0..d2 - 1 {
            let amp = (((m + 1) * (n + 1)) as f64).sqrt();
            g[((m + 1) * d2 + n + 1, m * d2 + n)] -= zeta * C64::from(amp);
            g[(m * d2 + n, (m + 1) * d2 + n + 1)] += zeta.conj() * C64::from(amp);
        }
    }
    let mat = exp_conserving(&g, |idx| (idx / d2) as i64 - (idx % d2) as i64);
    OperatorMatrix::from_matrix(layout.clone(), &[modes.0, modes.1], mat)
}

/// Fock-space beam splitter for a real orthogonal 2x2 mode transformation.
///
/// Convention: the creation operators transform by the matrix itself,
/// `U a_i^dag U^dag = sum_j B[i][j] a_j^dag` for the ordered pair of target
/// modes. On the single-photon sector the operator therefore acts as `B^T`.
/// The generator conserves total photon number and is exponentiated per
/// total-photon block, so sectors that fit under both cutoffs are exact.
pub fn beam_splitter(
    layout: &ModeLayout,
    modes: (ModeId, ModeId),
    b: [[f64; 2]; 2],
) -> Result<OperatorMatrix> {
    let ortho_dev = orthogonality_deviation(&b);
    if ortho_dev > 1e-12 {
        return Err(Error::NonOrthogonal(ortho_dev));
    }
    let det = b[0][0] * b[1][1] - b[0][1] * b[1][0];
    // Factor a reflection out of improper transformations: B = Brot * diag(1,-1),
    // realized as parity on the second mode applied after the rotation.
    let (rot, reflect) = if det > 0.0 {
        (b, false)
    } else {
        ([[b[0][0], -b[0][1]], [b[1][0], -b[1][1]]], true)
    };
    let theta = rot[1][0].atan2(rot[0][0]);

    let d1 = layout.cutoff(modes.0)? + 1;
    let d2 = layout.cutoff(modes.1)? + 1;
    let dim = d1 * d2;
    // theta (a^dag b - a b^dag)
    let mut g: Array2<C64> = Array2::zeros((dim, dim));
    for m in 0..d1 {
        for n in 0..d2 {
            if m + 1 < d1 && n >= 1 {
                let amp = (((m + 1) * n) as f64).sqrt();
                g[((m + 1) * d2 + n - 1, m * d2 + n)] += C64::from(theta * amp);
            }
            if m >= 1 && n + 1 < d2 {
                let amp = ((m * (n + 1)) as f64).sqrt();
                g[((m - 1) * d2 + n + 1, m * d2 + n)] -= C64::from(theta * amp);
            }
        }
    }
    let mut mat = exp_conserving(&g, |idx| (idx / d2 + idx % d2) as i64);
    if reflect {
        for i in 0..dim {
            if (i % d2) % 2 == 1 {
                for j in 0..dim {
                    mat[(i, j)] = -mat[(i, j)];
                }
            }
        }
    }
    OperatorMatrix::from_matrix(layout.clone(), &[modes.0, modes.1], mat)
}

fn orthogonality_deviation(b: &[[f64; 2]; 2]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let dot: f64 = (0..2).map(|k| b[k][i] * b[k][j]).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - want).abs());
        }
    }
    for row in b {
        for x in row {
            if !x.is_finite() {
                return f64::INFINITY;
            }
        }
    }
    worst
}

/// 50:50 beam-splitter matrix used throughout.
pub const BALANCED_BS: [[f64; 2]; 2] = [
    [std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2],
    [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2],
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::states::{number_state, two_mode_squeezed_vacuum, vacuum};

    #[test]
    fn displacement_at_zero_is_identity() {
        let l = ModeLayout::single('a', 12).unwrap();
        for mode in [DisplacementMode::Exact, DisplacementMode::Series6] {
            let d = displacement(&l, ModeId('a'), C64::from(0.0), mode).unwrap();
            assert!(d.unitarity_error() < 1e-14);
            let v = number_state(l.clone(), &[3]).unwrap();
            let w = d.apply(&v).unwrap();
            assert!((w.amp(&[3]) - C64::from(1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn displacement_vacuum_overlap() {
        let l = ModeLayout::single('a', 30).unwrap();
        let alpha = C64::new(0.7, 0.4);
        let d = displacement(&l, ModeId('a'), alpha, DisplacementMode::Exact).unwrap();
        let got = d.matrix()[(0, 0)];
        let expect = (-alpha.norm_sqr() / 2.0).exp();
        assert!((got - C64::from(expect)).norm() < 1e-12);
    }

    #[test]
    fn displacement_inverse_property() {
        let l = ModeLayout::single('a', 25).unwrap();
        let alpha = C64::new(0.9, -0.4);
        let d = displacement(&l, ModeId('a'), alpha, DisplacementMode::Exact).unwrap();
        let dinv = displacement(&l, ModeId('a'), -alpha, DisplacementMode::Exact).unwrap();
        let prod = d.matrix().dot(dinv.matrix());
        let mut worst = 0.0f64;
        for i in 0..prod.nrows() {
            for j in 0..prod.ncols() {
                let want = if i == j { C64::from(1.0) } else { C64::from(0.0) };
                worst = worst.max((prod[(i, j)] - want).norm());
            }
        }
        assert!(worst < 1e-9, "D(a) D(-a) deviates from identity by {worst}");
    }

    #[test]
    fn beam_splitter_single_photon_sector_is_transpose() {
        let l = ModeLayout::pair('1', 4, '4', 4).unwrap();
        let b = [[3f64.sqrt() / 2.0, -0.5], [0.5, 3f64.sqrt() / 2.0]];
        let u = beam_splitter(&l, (ModeId('1'), ModeId('4')), b).unwrap();
        // |1,0> -> B[0][0] |1,0> + B[0][1] |0,1>, i.e. the sector matrix is B^T.
        let v = number_state(l.clone(), &[1, 0]).unwrap();
        let w = u.apply(&v).unwrap();
        assert!((w.amp(&[1, 0]) - C64::from(b[0][0])).norm() < 1e-12);
        assert!((w.amp(&[0, 1]) - C64::from(b[0][1])).norm() < 1e-12);
        let v = number_state(l.clone(), &[0, 1]).unwrap();
        let w = u.apply(&v).unwrap();
        assert!((w.amp(&[1, 0]) - C64::from(b[1][0])).norm() < 1e-12);
        assert!((w.amp(&[0, 1]) - C64::from(b[1][1])).norm() < 1e-12);
    }

    #[test]
    fn balanced_splitter_splits_single_photon_evenly() {
        let l = ModeLayout::pair('3', 3, '4', 3).unwrap();
        let u = beam_splitter(&l, (ModeId('3'), ModeId('4')), BALANCED_BS).unwrap();
        let v = number_state(l.clone(), &[1, 0]).unwrap();
        let w = u.apply(&v).unwrap();
        assert!((w.amp(&[1, 0]).norm_sqr() - 0.5).abs() < 1e-12);
        assert!((w.amp(&[0, 1]).norm_sqr() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn beam_splitter_preserves_vacuum() {
        let l = ModeLayout::pair('3', 3, '4', 3).unwrap();
        let u = beam_splitter(&l, (ModeId('3'), ModeId('4')), BALANCED_BS).unwrap();
        let v = vacuum(l).unwrap();
        let w = u.apply(&v).unwrap();
        assert!((w.amp(&[0, 0]) - C64::from(1.0)).norm() < 1e-14);
    }

    #[test]
    fn beam_splitter_rejects_non_orthogonal() {
        let l = ModeLayout::pair('a', 3, 'b', 3).unwrap();
        let b = [[0.9, -0.5], [0.5, 0.9]];
        assert!(matches!(
            beam_splitter(&l, (ModeId('a'), ModeId('b')), b),
            Err(Error::NonOrthogonal(_))
        ));
    }

    #[test]
    fn improper_transformation_is_unitary_and_correct_on_single_photon() {
        let l = ModeLayout::pair('a', 3, 'b', 3).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = [[s, s], [s, -s]]; // det = -1
        let u = beam_splitter(&l, (ModeId('a'), ModeId('b')), b).unwrap();
        assert!(u.unitarity_error() < 1e-12);
        let v = number_state(l.clone(), &[0, 1]).unwrap();
        let w = u.apply(&v).unwrap();
        assert!((w.amp(&[1, 0]) - C64::from(b[1][0])).norm() < 1e-12);
        assert!((w.amp(&[0, 1]) - C64::from(b[1][1])).norm() < 1e-12);
    }

    #[test]
    fn two_mode_squeezer_generates_tmsv() {
        let l = ModeLayout::pair('4', 20, 'A', 20).unwrap();
        let s = 0.3;
        let u = two_mode_squeezer(&l, (ModeId('4'), ModeId('A')), C64::from(-s)).unwrap();
        let out = u.apply(&vacuum(l.clone()).unwrap()).unwrap();
        let want = two_mode_squeezed_vacuum(s.tanh(), l).unwrap();
        let dev: f64 = out
            .amps()
            .iter()
            .zip(want.amps().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-9, "TMSV deviation {dev}");
    }

    #[test]
    fn squeezer_inverse_property() {
        let l = ModeLayout::pair('a', 20, 'b', 20).unwrap();
        let s = 0.3;
        let fwd = two_mode_squeezer(&l, (ModeId('a'), ModeId('b')), C64::from(s)).unwrap();
        let bwd = two_mode_squeezer(&l, (ModeId('a'), ModeId('b')), C64::from(-s)).unwrap();
        let prod = fwd.matrix().dot(bwd.matrix());
        let mut worst = 0.0f64;
        for i in 0..prod.nrows() {
            for j in 0..prod.ncols() {
                let want = if i == j { C64::from(1.0) } else { C64::from(0.0) };
                worst = worst.max((prod[(i, j)] - want).norm());
            }
        }
        assert!(worst < 1e-8, "S(s) S(-s) off identity by {worst}");
    }

    #[test]
    fn single_mode_squeezer_matches_closed_form_amplitudes() {
        let l = ModeLayout::single('a', 40).unwrap();
        let r = 0.5;
        let u = single_mode_squeezer(&l, ModeId('a'), C64::from(r)).unwrap();
        let out = u.apply(&vacuum(l.clone()).unwrap()).unwrap();
        let want = crate::fock::states::squeezed_vacuum(r, 0.0, l).unwrap();
        let ratio = (out.amp(&[2]) / out.amp(&[0])).re;
        assert!((ratio - (-r.tanh() / 2f64.sqrt())).abs() < 1e-10);
        let f = out.overlap(&want).unwrap().norm_sqr();
        assert!(f > 1.0 - 1e-12);
    }

    #[test]
    fn apply_on_non_target_modes_is_identity() {
        let l = ModeLayout::new(vec![
            (ModeId('1'), 2),
            (ModeId('2'), 2),
            (ModeId('3'), 2),
        ])
        .unwrap();
        let d = displacement(&l, ModeId('2'), C64::from(0.4), DisplacementMode::Exact).unwrap();
        let v = number_state(l.clone(), &[1, 0, 2]).unwrap();
        let w = d.apply(&v).unwrap();
        // modes 1 and 3 untouched: amplitude stays within the (1, *, 2) slice
        let mut slice_weight = 0.0;
        for n in 0..=2 {
            slice_weight += w.amp(&[1, n, 2]).norm_sqr();
        }
        assert!((slice_weight - 1.0).abs() < 1e-12);
    }

    #[test]
    fn composition_matches_sequential_application() {
        let l = ModeLayout::pair('a', 6, 'b', 6).unwrap();
        let u1 = beam_splitter(&l, (ModeId('a'), ModeId('b')), BALANCED_BS).unwrap();
        let u2 = two_mode_squeezer(&l, (ModeId('a'), ModeId('b')), C64::from(0.2)).unwrap();
        let v = number_state(l.clone(), &[2, 1]).unwrap();
        let seq = u1.apply(&u2.apply(&v).unwrap()).unwrap();
        let prod = OperatorMatrix::from_matrix(
            l,
            &[ModeId('a'), ModeId('b')],
            u1.matrix().dot(u2.matrix()),
        )
        .unwrap();
        let once = prod.apply(&v).unwrap();
        let dev: f64 = seq
            .amps()
            .iter()
            .zip(once.amps().iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(dev < 1e-10);
    }
}
