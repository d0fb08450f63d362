//! Invariant checks: unitarity, superselection structure, heralding
//! completeness, Wigner bound/symmetry, entropy invariances, and
//! reproducibility of the deterministic pipeline.

use ndarray::Array1;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use sqcat::analysis::{entanglement_entropy, wigner_grid, DisplacedParity, GridRange};
use sqcat::fock::{
    beam_splitter, coherent, displacement, single_mode_squeezer, squeezed_cat, squeezed_vacuum,
    two_mode_squeezer, vacuum, DisplacementMode, FockVector, ModeId, ModeLayout, Sign,
    BALANCED_BS,
};
use sqcat::protocols::{run_plus_scheme, solve_displacements, SchemeConfig};

fn single(id: char, cutoff: usize) -> ModeLayout {
    ModeLayout::single(id, cutoff).unwrap()
}

fn pair(cutoff: usize) -> ModeLayout {
    ModeLayout::pair('a', cutoff, 'b', cutoff).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_operators_are_unitary(
        re in -1.2f64..1.2,
        im in -1.2f64..1.2,
        r in 0.05f64..0.9,
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        let l1 = single('a', 25);
        let alpha = C64::new(re, im);
        let d = displacement(&l1, ModeId('a'), alpha, DisplacementMode::Exact).unwrap();
        prop_assert!(d.unitarity_error() <= 1e-9, "displacement: {}", d.unitarity_error());

        let s = single_mode_squeezer(&l1, ModeId('a'), C64::from_polar(r, theta)).unwrap();
        prop_assert!(s.unitarity_error() <= 1e-9, "squeezer: {}", s.unitarity_error());

        let l2 = pair(12);
        let s2 = two_mode_squeezer(&l2, (ModeId('a'), ModeId('b')), C64::from_polar(r, theta)).unwrap();
        prop_assert!(s2.unitarity_error() <= 1e-9, "two-mode squeezer: {}", s2.unitarity_error());

        let (c, s_) = (theta.cos(), theta.sin());
        let bs = beam_splitter(&l2, (ModeId('a'), ModeId('b')), [[c, -s_], [s_, c]]).unwrap();
        prop_assert!(bs.unitarity_error() <= 1e-9, "beam splitter: {}", bs.unitarity_error());
    }

    #[test]
    fn squeezing_parity_superselection(r in 0.05f64..1.4, phi in 0.0f64..std::f64::consts::TAU) {
        let sv = squeezed_vacuum(r, phi, single('a', 31)).unwrap();
        for n in (1..=31).step_by(2) {
            prop_assert_eq!(sv.amp(&[n]), C64::from(0.0));
        }
        let plus = squeezed_cat(r, Sign::Plus, single('a', 30)).unwrap();
        let minus = squeezed_cat(r, Sign::Minus, single('a', 30)).unwrap();
        for n in 0..=30 {
            if n % 4 != 0 {
                prop_assert_eq!(plus.amp(&[n]), C64::from(0.0));
            }
            if n % 4 != 2 {
                prop_assert_eq!(minus.amp(&[n]), C64::from(0.0));
            }
        }
    }

    #[test]
    fn heralding_completeness(re in -0.8f64..0.8, im in -0.8f64..0.8) {
        // leak-free two-mode state: coherent light split on a balanced coupler
        let cutoff = 24;
        let l = pair(cutoff);
        let alpha = C64::new(re, im);
        let input = coherent(single('a', cutoff), alpha).unwrap()
            .tensor(&vacuum(single('b', cutoff)).unwrap()).unwrap();
        let bs = beam_splitter(&l, (ModeId('a'), ModeId('b')), BALANCED_BS).unwrap();
        let state = bs.apply(&input).unwrap();
        let mut total = 0.0;
        for n in 0..=cutoff {
            total += state.project_fock(&[(ModeId('a'), n)]).unwrap().probability;
        }
        prop_assert!((total - 1.0).abs() <= 1e-9, "completeness defect {}", (total - 1.0).abs());
    }

    #[test]
    fn wigner_bound_on_random_states(seed in proptest::collection::vec(-1.0f64..1.0, 42)) {
        // any normalized state: |W| <= 2/pi since the displaced state stays normalized
        let cutoff = 20;
        let amps: Array1<C64> = Array1::from_iter(
            seed.chunks(2).take(cutoff + 1).map(|c| C64::new(c[0], c[1])),
        );
        prop_assume!(amps.iter().map(|a| a.norm_sqr()).sum::<f64>() > 1e-3);
        let state = FockVector::from_truncated(single('a', cutoff), amps).unwrap();
        let ev = DisplacedParity::new(cutoff);
        for alpha in [C64::new(0.0, 0.0), C64::new(0.7, -0.3), C64::new(-1.8, 2.2)] {
            let w = ev.wigner(state.amps(), alpha);
            prop_assert!(w.abs() <= 2.0 / std::f64::consts::PI + 1e-6);
        }
    }

    #[test]
    fn entropy_invariant_under_local_phase_rotations(
        r in 0.1f64..1.0,
        pa in 0.0f64..std::f64::consts::TAU,
        pb in 0.0f64..std::f64::consts::TAU,
    ) {
        let base = sqcat::make_bs_output_state(r, Sign::Minus, 16).unwrap();
        let s0 = entanglement_entropy(&base).unwrap();
        let l = base.layout().clone();
        let rotated: Array1<C64> = Array1::from_iter(base.amps().iter().enumerate().map(|(idx, &a)| {
            let occ = l.occupation_of(idx);
            a * C64::from_polar(1.0, pa * occ[0] as f64 + pb * occ[1] as f64)
        }));
        let rotated = FockVector::from_raw(l, rotated, 0.0).unwrap();
        let s1 = entanglement_entropy(&rotated).unwrap();
        prop_assert!((s0 - s1).abs() <= 1e-10, "entropy shifted by {}", (s0 - s1).abs());
    }
}

/// Wigner grids of real-amplitude parity-even states are symmetric under
/// both axis reflections.
#[test]
fn wigner_grid_symmetry() {
    let cutoff = 60;
    for (r, sign) in [(0.5, Sign::Minus), (0.8, Sign::Plus)] {
        let cat = squeezed_cat(r, sign, single('a', cutoff)).unwrap();
        let range = GridRange::new(-1.5, 1.5, 0.25).unwrap();
        let grid = wigner_grid(&cat, range, range, "cat").unwrap();
        let n = grid.values.nrows();
        for i in 0..n {
            for j in 0..n {
                let w = grid.values[(i, j)];
                assert!((w - grid.values[(n - 1 - i, j)]).abs() < 1e-10);
                assert!((w - grid.values[(i, n - 1 - j)]).abs() < 1e-10);
            }
        }
    }
}

/// P grows with q while the target fidelity falls, over the resource range.
#[test]
fn herald_probability_fidelity_tradeoff() {
    for r in [0.3, 0.9] {
        let mut last_p = 0.0;
        let mut last_f = f64::INFINITY;
        let mut q = 0.1;
        while q <= 0.7 + 1e-9 {
            let params = solve_displacements(r, q).unwrap();
            let herald = run_plus_scheme(&params, &SchemeConfig::default()).unwrap();
            let f = sqcat::plus_target_fidelity(herald.state().unwrap(), r).unwrap();
            assert!(herald.probability > last_p, "P not increasing at r={r}, q={q}");
            assert!(f < last_f, "F not decreasing at r={r}, q={q}");
            last_p = herald.probability;
            last_f = f;
            q += 0.1;
        }
    }
}

/// Identical configurations reproduce heralded outcomes bit for bit.
#[test]
fn herald_pipeline_is_bit_reproducible() {
    let params = solve_displacements(0.6, 0.4).unwrap();
    let cfg = SchemeConfig::default();
    let a = run_plus_scheme(&params, &cfg).unwrap();
    let b = run_plus_scheme(&params, &cfg).unwrap();
    assert_eq!(a.probability.to_bits(), b.probability.to_bits());
    for (x, y) in a
        .state()
        .unwrap()
        .amps()
        .iter()
        .zip(b.state().unwrap().amps().iter())
    {
        assert_eq!(x.re.to_bits(), y.re.to_bits());
        assert_eq!(x.im.to_bits(), y.im.to_bits());
    }
    assert!(a.probability <= 1.0);
}

/// Converted minus-branch support sits on n = 2 mod 4 when the input only
/// occupies {0, 4}.
#[test]
fn conversion_output_support() {
    let cat5 = squeezed_cat(0.6, Sign::Plus, single('a', 5)).unwrap();
    let mut amps = Array1::zeros(9);
    amps[0] = cat5.amp(&[0]);
    amps[4] = cat5.amp(&[4]);
    let input = FockVector::from_raw(single('a', 8), amps, 0.0).unwrap();
    let out = sqcat::convert_to_minus(&input, 0.5).unwrap();
    let state = out.state().unwrap();
    for n in 0..=8 {
        if n % 4 != 2 {
            assert!(state.amp(&[n]).norm() < 1e-14, "support at n={n}");
        }
    }
}

/// Wigner normalization: the grid integral over an adequate window is 1
/// within 1e-3 for the states plotted. The window and evaluation cutoff
/// scale with the anti-squeezed width e^r.
#[test]
fn wigner_normalization_integral() {
    let cases = [
        // (r, sign, evaluation cutoff, window half-width)
        (0.5, Sign::Minus, 120, 4.0),
        (1.0, Sign::Minus, 200, 6.0),
        (1.0, Sign::Plus, 200, 6.0),
    ];
    for (r, sign, cutoff, half) in cases {
        let cat = squeezed_cat(r, sign, single('a', cutoff)).unwrap();
        let range = GridRange::new(-half, half, 0.05).unwrap();
        let grid = wigner_grid(&cat, range, range, "cat").unwrap();
        let integral = grid.integral();
        assert!(
            (integral - 1.0).abs() < 1e-3,
            "r={r} {sign:?}: integral {integral}"
        );
        assert!(grid.max() <= 2.0 / std::f64::consts::PI + 1e-6);
        assert!(grid.min() >= -2.0 / std::f64::consts::PI - 1e-6);
    }
}

/// The first negative fringe of |r;-> moves toward the origin as r grows.
#[test]
fn fringe_distance_shrinks_with_squeezing() {
    let mut last = f64::INFINITY;
    for (r, cutoff) in [(0.5, 120), (1.0, 160), (1.5, 320)] {
        let cat = squeezed_cat(r, Sign::Minus, single('a', cutoff)).unwrap();
        let ev = DisplacedParity::new(cutoff);
        let mut nearest = f64::INFINITY;
        let step = 0.02;
        let mut x = 0.0;
        while x <= 1.2 {
            let mut y = 0.0;
            while y <= 1.2 {
                if ev.wigner(cat.amps(), C64::new(x, y)) < -1e-3 {
                    nearest = nearest.min((x * x + y * y).sqrt());
                }
                y += step;
            }
            x += step;
        }
        assert!(nearest < last, "fringe distance not shrinking at r={r}");
        last = nearest;
    }
}
