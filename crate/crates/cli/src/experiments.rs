use num_complex::Complex64 as C64;
use serde_json::json;

use sqcat::analysis::{entropy_curves, wigner_grid, wigner_value, GridRange};
use sqcat::fock::{
    coherent, coherent_cat, squeezed_cat, squeezed_vacuum, vacuum, DisplacementMode, FockVector,
    ModeId, ModeLayout, Sign,
};
use sqcat::protocols::{
    convert_to_minus, cross_kerr_evolve, cross_kerr_herald, fidelity, plus_target_fidelity,
    ratio_matching_transmittance, run_plus_scheme, scan_conversion_transmittance,
    solve_displacements, SchemeConfig,
};

use crate::config::{grid, Args, DispMode, StateKind};
use crate::report::Report;

/// CLI failure modes, mapped onto exit codes by `main`.
pub enum Failure {
    /// Invalid request (exit 2).
    Usage(String),
    /// Numerical-validity breach: leakage or tolerance (exit 3).
    Numeric(String),
}

impl From<sqcat::Error> for Failure {
    fn from(e: sqcat::Error) -> Self {
        match e {
            sqcat::Error::ExcessiveLeakage { .. }
            | sqcat::Error::NotNormalized { .. }
            | sqcat::Error::ZeroProbability => Failure::Numeric(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

impl From<String> for Failure {
    fn from(msg: String) -> Self {
        Failure::Usage(msg)
    }
}

fn disp(mode: DispMode) -> DisplacementMode {
    match mode {
        DispMode::Exact => DisplacementMode::Exact,
        DispMode::Series6 => DisplacementMode::Series6,
    }
}

fn disp_name(mode: DispMode) -> &'static str {
    match mode {
        DispMode::Exact => "exact",
        DispMode::Series6 => "series6",
    }
}

/// Sweep of the four-detector scheme over (r, q): success probability,
/// fidelity to the exact plus cat, and the boundary-weight diagnostic.
pub fn herald_surface(args: &Args) -> Result<Report, Failure> {
    let r_values = grid(
        args.r_min.unwrap_or(0.27),
        args.r_max.unwrap_or(0.92),
        args.r_step.unwrap_or(0.02),
        "r",
    )?;
    let q_values = grid(
        args.q_min.unwrap_or(0.1),
        args.q_max.unwrap_or(0.7),
        args.q_step.unwrap_or(0.05),
        "q",
    )?;
    for &r in &r_values {
        if !(0.26..=0.92).contains(&r) {
            return Err(usage(format!("r = {r} outside the scheme window [0.26, 0.92]")));
        }
    }
    for &q in &q_values {
        if !(q > 0.0 && q <= 0.9) {
            return Err(usage(format!("q = {q} outside (0, 0.9]")));
        }
    }
    let cutoff = args.cutoff.unwrap_or(5);
    let cfg = SchemeConfig { cutoff, displacement: disp(args.displacement_mode) };

    let mut rows = Vec::new();
    for &r in &r_values {
        for &q in &q_values {
            let params = solve_displacements(r, q).map_err(Failure::from)?;
            let herald = run_plus_scheme(&params, &cfg).map_err(Failure::from)?;
            let f = plus_target_fidelity(herald.state().map_err(Failure::from)?, r)
                .map_err(Failure::from)?;
            rows.push(vec![r, q, herald.probability, f, herald.diagnostics.boundary_weight]);
        }
    }
    Ok(Report {
        config: json!({
            "experiment": "herald-surface",
            "r": { "min": r_values[0], "max": r_values[r_values.len()-1], "step": args.r_step.unwrap_or(0.02) },
            "q": { "min": q_values[0], "max": q_values[q_values.len()-1], "step": args.q_step.unwrap_or(0.05) },
            "cutoff": cutoff,
            "displacement_mode": disp_name(args.displacement_mode),
        }),
        metadata: json!({ "points": rows.len() }),
        columns: vec!["r", "q", "p", "fidelity", "leakage"],
        rows,
    })
}

fn build_state(kind: StateKind, r: f64, a: f64, cutoff: usize) -> Result<FockVector, Failure> {
    let layout = ModeLayout::single('a', cutoff).map_err(Failure::from)?;
    let state = match kind {
        StateKind::Vacuum => vacuum(layout),
        StateKind::Coherent => coherent(layout, C64::from(a)),
        StateKind::Squeezed => squeezed_vacuum(r, 0.0, layout),
        StateKind::SqueezedCatPlus => squeezed_cat(r, Sign::Plus, layout),
        StateKind::SqueezedCatMinus => squeezed_cat(r, Sign::Minus, layout),
        StateKind::CoherentCatPlus => coherent_cat(a, Sign::Plus, layout),
        StateKind::CoherentCatMinus => coherent_cat(a, Sign::Minus, layout),
    };
    state.map_err(Failure::from)
}

/// Wigner grid of a chosen state, row-major over (Re, Im), with the origin
/// value in the metadata.
pub fn wigner(args: &Args) -> Result<Report, Failure> {
    let kind = args.state.unwrap_or(StateKind::SqueezedCatMinus);
    let r = args.r.unwrap_or(1.0);
    let a = args.a.unwrap_or(1.0);
    let cutoff = args.cutoff.unwrap_or(40);
    let step = args.grid_step.unwrap_or(0.02);
    let half = args.alpha_max.unwrap_or(3.0);
    let state = build_state(kind, r, a, cutoff)?;
    let range = GridRange::new(-half, half, step).map_err(Failure::from)?;
    let grid = wigner_grid(&state, range, range, kind.descriptor()).map_err(Failure::from)?;
    let w0 = wigner_value(&state, C64::from(0.0)).map_err(Failure::from)?;

    let re = range.points();
    let im = range.points();
    let mut rows = Vec::with_capacity(re.len() * im.len());
    for (i, &x) in re.iter().enumerate() {
        for (j, &y) in im.iter().enumerate() {
            rows.push(vec![x, y, grid.values[(i, j)]]);
        }
    }
    Ok(Report {
        config: json!({
            "experiment": "wigner",
            "state": kind.descriptor(),
            "r": r,
            "a": a,
            "cutoff": cutoff,
            "grid_step": step,
            "alpha_max": half,
        }),
        metadata: json!({
            "w_origin": w0,
            "w_min": grid.min(),
            "w_max": grid.max(),
            "state_leakage": state.leakage(),
        }),
        columns: vec!["re", "im", "w"],
        rows,
    })
}

/// Entanglement entropies of the balanced-splitter outputs and of the
/// two-mode squeezed vacuum at q = tanh r, with the located crossover in
/// the metadata.
pub fn entropy(args: &Args) -> Result<Report, Failure> {
    let r_values = grid(
        args.r_min.unwrap_or(0.05),
        args.r_max.unwrap_or(1.2),
        args.r_step.unwrap_or(0.01),
        "r",
    )?;
    let cutoff = args.cutoff.unwrap_or(100);
    let tol = args.leakage_tol.unwrap_or(1e-6);
    let curve = entropy_curves(&r_values, cutoff, tol).map_err(Failure::from)?;
    let rows: Vec<Vec<f64>> = (0..curve.r_values.len())
        .map(|k| vec![curve.r_values[k], curve.s_minus[k], curve.s_plus[k], curve.s_tmsv[k]])
        .collect();
    Ok(Report {
        config: json!({
            "experiment": "entropy",
            "r": { "min": r_values[0], "max": r_values[r_values.len()-1], "step": args.r_step.unwrap_or(0.01) },
            "cutoff": cutoff,
            "leakage_tol": tol,
        }),
        metadata: json!({
            "crossover": curve.crossover(),
            "mapping": curve.mapping_note,
        }),
        columns: vec!["r", "s_minus", "s_plus", "s_tmsv"],
        rows,
    })
}

/// Cross-Kerr heralding demo: both branch probabilities and fidelities
/// against the corresponding cat targets, per squeezing value.
pub fn kerr_demo(args: &Args) -> Result<Report, Failure> {
    let alpha = args.alpha.unwrap_or(3.0);
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(usage(format!(
            "probe amplitude must be positive (got {alpha}); the branches are indistinguishable at alpha = 0"
        )));
    }
    let r_values = grid(
        args.r_min.unwrap_or(0.1),
        args.r_max.unwrap_or(1.0),
        args.r_step.unwrap_or(0.1),
        "r",
    )?;
    let signal_cutoff = args.cutoff.unwrap_or(40);
    // grow the probe cutoff until the coherent tail is negligible
    let mut probe_cutoff = 16;
    loop {
        let probe = coherent(
            ModeLayout::single('2', probe_cutoff).map_err(Failure::from)?,
            C64::from(alpha),
        )
        .map_err(Failure::from)?;
        if probe.leakage() < 1e-9 || probe_cutoff > 400 {
            break;
        }
        probe_cutoff += 4;
    }

    let mut rows = Vec::new();
    for &r in &r_values {
        let sv = squeezed_vacuum(r, 0.0, ModeLayout::single('1', signal_cutoff).map_err(Failure::from)?)
            .map_err(Failure::from)?;
        let out = cross_kerr_evolve(
            &sv,
            C64::from(alpha),
            std::f64::consts::FRAC_PI_2,
            ModeId('2'),
            probe_cutoff,
        )
        .map_err(Failure::from)?;
        let mut row = vec![r, alpha];
        let mut fids = Vec::new();
        for sign in [Sign::Plus, Sign::Minus] {
            let herald = cross_kerr_herald(&out, ModeId('2'), alpha, sign).map_err(Failure::from)?;
            let target = squeezed_cat(r, sign, ModeLayout::single('1', signal_cutoff).map_err(Failure::from)?)
                .map_err(Failure::from)?;
            let f = fidelity(herald.state().map_err(Failure::from)?, &target).map_err(Failure::from)?;
            row.push(herald.probability);
            fids.push(f);
        }
        row.push(row[2] + row[3]);
        row.extend(fids);
        rows.push(row);
    }
    Ok(Report {
        config: json!({
            "experiment": "kerr-demo",
            "alpha": alpha,
            "r": { "min": r_values[0], "max": r_values[r_values.len()-1], "step": args.r_step.unwrap_or(0.1) },
            "signal_cutoff": signal_cutoff,
            "probe_cutoff": probe_cutoff,
        }),
        metadata: json!({
            "branch_nonorthogonality": (-2.0 * alpha * alpha).exp(),
        }),
        columns: vec!["r", "alpha", "p_plus", "p_minus", "p_sum", "f_plus", "f_minus"],
        rows,
    })
}

/// Plus-to-minus conversion sweep over the transmittance, with the scanned
/// and analytic optima in the metadata.
pub fn minus_convert(args: &Args) -> Result<Report, Failure> {
    let r = args.r.unwrap_or(0.5);
    let cutoff = args.cutoff.unwrap_or(8);
    let step = args.t_step.unwrap_or(1e-3);
    if cutoff < 6 {
        return Err(usage("minus conversion needs cutoff >= 6 to hold the |6> component"));
    }
    // two-component input c0|0> + c4|4>
    let cat5 = squeezed_cat(r, Sign::Plus, ModeLayout::single('a', 5).map_err(Failure::from)?)
        .map_err(Failure::from)?;
    let mut amps = vec![C64::from(0.0); cutoff + 1];
    amps[0] = cat5.amp(&[0]);
    amps[4] = cat5.amp(&[4]);
    let input = FockVector::from_vec(
        ModeLayout::single('a', cutoff).map_err(Failure::from)?,
        amps,
        0.0,
    )
    .map_err(Failure::from)?;
    let target = squeezed_cat(r, Sign::Minus, ModeLayout::single('a', cutoff).map_err(Failure::from)?)
        .map_err(Failure::from)?;

    let table = grid(step, 1.0 - step, step, "T")?;
    let mut rows = Vec::new();
    for &t in &table {
        let herald = convert_to_minus(&input, t).map_err(Failure::from)?;
        let scale = herald.probability.sqrt();
        let state = herald.state().map_err(Failure::from)?;
        let f = fidelity(state, &target).map_err(Failure::from)?;
        rows.push(vec![
            t,
            state.amp(&[2]).re * scale,
            state.amp(&[6]).re * scale,
            herald.probability,
            f,
        ]);
    }
    let (t_scan, f_scan) = scan_conversion_transmittance(&input, &target, step).map_err(Failure::from)?;
    Ok(Report {
        config: json!({
            "experiment": "minus-convert",
            "r": r,
            "cutoff": cutoff,
            "t_step": step,
        }),
        metadata: json!({
            "t_optimal_scan": t_scan,
            "fidelity_at_optimum": f_scan,
            "t_optimal_analytic": ratio_matching_transmittance(),
            "input_c0": cat5.amp(&[0]).re,
            "input_c4": cat5.amp(&[4]).re,
        }),
        columns: vec!["t", "amp2", "amp6", "probability", "fidelity"],
        rows,
    })
}
