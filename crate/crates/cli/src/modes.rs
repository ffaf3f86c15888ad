//! Per-mode evaluation. Every mode produces one row per sweep point (or per
//! gauge in `gauge-check`); complex quantities are split into `_re`/`_im`
//! columns and flags are written as 0 or 1.
//!
//! `mzi-scalar`: transmission, chi, z, `2 + 1/z + z`, the squared-modulus
//! intensity and visibility, and the polar angle and magnitude of the
//! interference term (angle continued along a trailing chi sweep).
//!
//! `mzi-internal`: channel-0 intensity from the closed form and from the
//! product-space output state, relative phase and visibility continued
//! along the grid and at the endpoint alone, the trace of the evolved state
//! and the largest binormalization defect.
//!
//! `gate`: closed-form relative phase, visibility, geometric phase and
//! solid angle with branch flags and the ideal-gate phase, plus optional
//! pipeline, expansion and cyclic-phase columns.
//!
//! `robustness`: deviation from the lossless value of each requested
//! quantity per gamma, with the fitted log-log slope and intercept.
//!
//! `gauge-check`: per random gauge, the geometric phase in that gauge, its
//! phase-factor distance to the ungauged value, the state deviation and the
//! gauged binormalization defect, next to the parallel-transport defect,
//! phase and factors. Draw order per gauge is `wa`, `wb`, then `a_k` for
//! every pair, then `b_k` for every pair.

use crate::config::{
    check_axes, matrix, vector, Axis, GateMode, GaugeCheck, MziInternal, MziScalar, PropagatorKind, Robustness,
    Scenario, ScenarioConfig, StateSpec, Sweepable,
};
use crate::error::CliError;
use crate::rng::SplitMix64;
use crate::table::ResultTable;
use qdissip::gate::{
    gate_hamiltonian, geometric_phase_pipeline, hamiltonian, phase_visibility_pipeline, tilted_basis, RobustnessFit,
};
use qdissip::*;
use rayon::prelude::*;
use std::result::Result;

/// Subdivisions per chi interval when continuing the polar angle.
const POLAR_REFINE: usize = 64;

pub fn run(config: &ScenarioConfig) -> Result<ResultTable, CliError> {
    match &config.scenario {
        Scenario::MziScalar(p) => mzi_scalar(p),
        Scenario::MziInternal(p) => mzi_internal(p),
        Scenario::Gate(p) => gate(p),
        Scenario::Robustness(p) => robustness(p),
        Scenario::GaugeCheck(p) => gauge_check(p, config.seed),
    }
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn complex_columns(stem: &str) -> [String; 2] {
    [format!("{stem}_re"), format!("{stem}_im")]
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn cartesian(axes: &[Axis]) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::new()];
    for a in axes {
        points = points
            .into_iter()
            .flat_map(|p: Vec<f64>| {
                a.values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    points
}

fn label(index: usize, axes: &[Axis], values: &[f64]) -> String {
    if axes.is_empty() {
        return "the configured point".into();
    }
    let parts: Vec<String> = axes.iter().zip(values).map(|(a, v)| format!("{} = {v}", a.name)).collect();
    format!("sweep point {index} ({})", parts.join(", "))
}

/// Evaluates `row` at every sweep point in parallel and reports the first
/// failure in sweep order.
fn sweep<P, F>(base: &P, axes: &[Axis], columns: Vec<String>, row: F) -> Result<ResultTable, CliError>
where
    P: Sweepable + Sync,
    F: Fn(&P) -> qdissip::Result<Vec<f64>> + Sync,
{
    let points = cartesian(axes);
    let rows: Vec<qdissip::Result<Vec<f64>>> = points
        .par_iter()
        .map(|values| {
            let mut p = base.clone();
            for (a, &v) in axes.iter().zip(values) {
                p.set(&a.name, v);
            }
            row(&p)
        })
        .collect();
    let mut table = ResultTable::new(columns);
    for (i, r) in rows.into_iter().enumerate() {
        table.push(r.map_err(|e| CliError::compute(label(i, axes, &points[i]), e))?);
    }
    Ok(table)
}

fn mzi_scalar(p: &MziScalar) -> Result<ResultTable, CliError> {
    let axes = check_axes::<MziScalar>(&p.sweeps)?;
    let columns = names(&[
        "transmission",
        "chi",
        "z_re",
        "z_im",
        "intensity_re",
        "intensity_im",
        "standard_intensity",
        "standard_visibility",
        "polar_theta",
        "polar_magnitude",
    ]);
    let mut table = sweep(p, &axes, columns, |q| {
        let setting = AbsorberSetting::new(q.transmission, q.chi)?;
        let z = setting.z();
        let intensity = scalar_intensity(z)?;
        let (standard, nu) = standard_intensity(&setting);
        let polar = polar_interference(&setting);
        Ok(vec![
            q.transmission,
            q.chi,
            z.re,
            z.im,
            intensity.re,
            intensity.im,
            standard,
            nu,
            polar.theta,
            polar.magnitude,
        ])
    })?;
    if let Some(last) = axes.last().filter(|a| a.name == "chi" && a.values.len() > 1) {
        let chis = &last.values;
        let dense: Vec<f64> = chis
            .windows(2)
            .flat_map(|w| (0..POLAR_REFINE).map(move |j| w[0] + (w[1] - w[0]) * j as f64 / POLAR_REFINE as f64))
            .chain(chis.last().copied())
            .collect();
        let theta_col = 8;
        for start in (0..table.rows().len()).step_by(chis.len()) {
            let transmission = table.rows()[start][0];
            let tracked = polar_interference_sweep(transmission, &dense)
                .map_err(|e| CliError::compute(format!("the chi sweep starting at sweep point {start}"), e))?;
            for j in 0..chis.len() {
                table.set(start + j, theta_col, tracked[j * POLAR_REFINE].theta);
            }
        }
    }
    Ok(table)
}

fn build_state(s: &StateSpec) -> Result<DensityOperator, CliError> {
    let fail = |e| CliError::compute("state construction", e);
    if let Some(m) = &s.matrix {
        return decompose_density(&matrix(m, "parameters.state.matrix")?, s.tolerance).map_err(fail);
    }
    let weights = s.weights.clone().unwrap_or_default();
    let alphas: Vec<Vec<Complex64>> = s.alphas.iter().flatten().map(vector).collect();
    let mut betas: Vec<Vec<Complex64>> = match &s.betas {
        Some(b) => b.iter().map(vector).collect(),
        None => alphas.clone(),
    };
    if s.binormalize {
        for (a, b) in alphas.iter().zip(betas.iter_mut()) {
            *b = binormalize(a, b).map_err(fail)?.beta().to_vec();
        }
    }
    assemble_density(weights, alphas, betas).map_err(fail)
}

fn mzi_internal(p: &MziInternal) -> Result<ResultTable, CliError> {
    let axes = check_axes::<MziInternal>(&p.sweeps)?;
    let h0 = matrix(&p.hamiltonian, "parameters.hamiltonian")?;
    let drive = match &p.drive {
        Some(d) => Some((matrix(&d.matrix, "parameters.drive.matrix")?, d.frequency, d.phase)),
        None => None,
    };
    let rho = build_state(&p.state)?;
    let mut columns = names(&["t1", "transmission", "chi"]);
    for stem in [
        "intensity",
        "block_intensity",
        "relative_phase",
        "visibility",
        "endpoint_relative_phase",
        "endpoint_visibility",
        "trace",
    ] {
        columns.extend(complex_columns(stem));
    }
    columns.push("binorm_defect".into());
    sweep(p, &axes, columns, |q| match &drive {
        None => internal_row(q, &ConstantHamiltonian::new(h0.clone()), &rho, Some(&h0)),
        Some((h1, nu, phase)) => {
            let (h0, h1, nu, phase) = (h0.clone(), h1.clone(), *nu, *phase);
            let h = FnHamiltonian::new(h0.dim(), move |t: f64| h0.add_scaled(&h1, cplx((nu * t + phase).sin(), 0.0)));
            internal_row(q, &h, &rho, None)
        }
    })
}

fn internal_row<H: Hamiltonian<f64>>(
    q: &MziInternal,
    h: &H,
    rho: &DensityOperator,
    constant: Option<&Matrix>,
) -> qdissip::Result<Vec<f64>> {
    let (t0, t1) = (q.grid.t0, q.grid.t1);
    let grid = match q.grid.steps {
        Some(steps) => TimeGrid::new(t0, t1, steps)?,
        None => default_grid(h, t0, t1)?,
    };
    let (pair, left, right) = match (q.propagator, constant) {
        (PropagatorKind::Exact, Some(h0)) => {
            let pair = PropagatorPair::exact(h0, grid)?;
            let (l, r) = evolve_constant(h0, t1 - t0)?;
            (pair, l, r)
        }
        _ => {
            let pair = evolve(h, grid)?;
            let (l, r) = (pair.final_left().clone(), pair.final_right().clone());
            (pair, l, r)
        }
    };
    let z = AbsorberSetting::new(q.transmission, q.chi)?.z();
    let arms = ArmConfiguration::new(z, left.clone(), right.clone())?;
    let intensity = channel0_intensity(rho, &arms)?;
    let block = channel0_block_trace(&output_state(rho, &arms)?, rho.dim()) * 4.0;
    let path = relative_phase_visibility_along(rho, pair.left_samples(), pair.right_samples())?;
    let tracked = path.last().expect("grid has samples");
    let endpoint = relative_phase_visibility(rho, &left, &right)?;
    let trace = evolve_density(rho, &left, &right)?.matrix_form().trace();
    let mut row = vec![t1, q.transmission, q.chi];
    for c in [intensity, block, tracked.phase, tracked.visibility, endpoint.phase, endpoint.visibility, trace] {
        row.extend([c.re, c.im]);
    }
    row.push(binorm_defect(&pair));
    Ok(row)
}

fn gate(p: &GateMode) -> Result<ResultTable, CliError> {
    let axes = check_axes::<GateMode>(&p.sweeps)?;
    let mut columns = names(&["eta", "gamma", "theta", "r", "tau"]);
    for stem in ["relative_phase", "visibility", "geometric_phase", "solid_angle"] {
        columns.extend(complex_columns(stem));
    }
    columns.extend(names(&["pole_crossing", "branch_unwound", "ideal_gate_phase"]));
    if p.pipeline {
        for stem in ["pipeline_relative_phase", "pipeline_visibility", "pipeline_geometric_phase"] {
            columns.extend(complex_columns(stem));
        }
    }
    if p.expansions {
        columns.extend(complex_columns("solid_angle_expansion"));
        columns.extend(names(&[
            "solid_angle_coefficient",
            "im_relative_phase_expansion",
            "im_relative_phase_coefficient",
        ]));
    }
    if p.cyclic {
        for stem in ["cyclic_zeta", "cyclic_geometric_phase", "cyclic_geometric_phase_rephased"] {
            columns.extend(complex_columns(stem));
        }
    }
    sweep(p, &axes, columns, gate_row)
}

fn gate_row(q: &GateMode) -> qdissip::Result<Vec<f64>> {
    let tau = q.tau();
    let p = GateParams::new(q.eta, q.gamma, q.theta, q.r, tau)?;
    let rep = gate_report(&p)?;
    let (plus, minus) = tilted_basis(q.theta);
    let ideal = ideal_gate(q.theta).sandwich(&minus, &minus).arg();
    let mut row = vec![q.eta, q.gamma, q.theta, q.r, tau];
    for c in [rep.phi, rep.visibility, rep.gamma, rep.omega] {
        row.extend([c.re, c.im]);
    }
    row.extend([flag(rep.pole_crossing), flag(rep.branch_unwound), ideal]);
    if q.pipeline {
        if rep.pole_crossing {
            row.extend([f64::NAN; 6]);
        } else {
            let pv = phase_visibility_pipeline(&p, q.pipeline_steps)?;
            let g = geometric_phase_pipeline(&p, q.pipeline_steps)?;
            row.extend([pv.phase.re, pv.phase.im, pv.visibility.re, pv.visibility.im, g.re, g.im]);
        }
    }
    if q.expansions {
        match omega_expansion(&p) {
            Ok(e) => row.extend([e.approximation.re, e.approximation.im, e.coefficient]),
            Err(Error::ExpansionSingular(_)) => row.extend([f64::NAN; 3]),
            Err(e) => return Err(e),
        }
        match phi_expansion(&p) {
            Ok(e) => row.extend([e.im_phi, e.coefficient]),
            Err(Error::ExpansionSingular(_)) => row.extend([f64::NAN; 2]),
            Err(e) => return Err(e),
        }
    }
    if q.cyclic {
        let h = gate_hamiltonian(&p);
        let pair = evolve(&h, TimeGrid::new(0.0, tau, q.pipeline_steps)?)?;
        match cyclic_pure_phase(&pair, &h, &plus, &plus) {
            Ok(c) => {
                row.extend([c.zeta.re, c.zeta.im, c.gamma.re, c.gamma.im, c.gamma_rephased.re, c.gamma_rephased.im])
            }
            Err(Error::NotCyclic { .. }) => row.extend([f64::NAN; 6]),
            Err(e) => return Err(e),
        }
    }
    Ok(row)
}

fn robustness(p: &Robustness) -> Result<ResultTable, CliError> {
    let axes = check_axes::<Robustness>(&p.sweeps)?;
    let gammas = &axes[0].values;
    let template = GateParams::new(p.eta, 0.0, p.theta, p.r, p.tau())
        .map_err(|e| CliError::compute("the lossless template", e))?;
    let fits: Vec<Result<RobustnessFit<f64>, CliError>> = p
        .quantities
        .par_iter()
        .map(|&q| {
            let q = Quantity::from(q);
            robustness_order(&template, q, gammas).map_err(|e| CliError::compute(format!("the {} fit", q.name()), e))
        })
        .collect();
    let fits = fits.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut columns = vec!["gamma".to_string()];
    for &q in &p.quantities {
        let name = Quantity::from(q).name();
        columns.extend([format!("deviation_{name}"), format!("slope_{name}"), format!("intercept_{name}")]);
    }
    let mut table = ResultTable::new(columns);
    for (j, &g) in gammas.iter().enumerate() {
        let mut row = vec![g];
        for fit in &fits {
            row.extend([fit.deviations[j], fit.slope, fit.intercept]);
        }
        table.push(row);
    }
    Ok(table)
}

struct GaugeDraw {
    wa: f64,
    wb: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

fn gauge_check(p: &GaugeCheck, seed: u64) -> Result<ResultTable, CliError> {
    let baseline = |e| CliError::compute("the ungauged baseline", e);
    let tau = p.tau();
    let params = GateParams::new(p.eta, p.gamma, p.theta, p.r, tau).map_err(baseline)?;
    let h = gate_hamiltonian(&params);
    let rho = input_state(&params).map_err(baseline)?;
    let n = rho.dim();
    let grid = TimeGrid::new(0.0, tau, p.steps).map_err(baseline)?;
    let pair = match p.propagator {
        PropagatorKind::Exact => PropagatorPair::exact(&hamiltonian(&params), grid),
        PropagatorKind::Rk4 => evolve(&h, grid),
    }
    .map_err(baseline)?;
    let base_conn = connection(&pair, &rho, &h).map_err(baseline)?;
    let base = geometric_phase(&pair, &rho, &base_conn).map_err(baseline)?;

    let transport = |e| CliError::compute("the parallel-transport gauge", e);
    let parallel = GaugeFunction::parallel(&base_conn).map_err(transport)?;
    let transport_defect = parallel_defect(&pair, &rho, &parallel, &h).map_err(transport)?;
    let parallel_pair = gauge_transform(&pair, &rho, &parallel).map_err(transport)?;
    let parallel_conn = connection_in_gauge(&pair, &rho, &h, &parallel).map_err(transport)?;
    let parallel_phase = geometric_phase(&parallel_pair, &rho, &parallel_conn).map_err(transport)?;
    let factors = parallel_factors(&base_conn);

    let rho_matrix = rho.matrix_form();
    let states: Vec<Matrix> = (0..pair.len())
        .map(|j| pair.left(j).try_mul(&rho_matrix)?.try_mul(&pair.right(j).adjoint()))
        .collect::<qdissip::Result<_>>()
        .map_err(baseline)?;

    let mut rng = SplitMix64::new(seed);
    let draws: Vec<GaugeDraw> = (0..p.gauges)
        .map(|_| {
            let wa = rng.uniform(p.min_frequency, p.max_frequency);
            let wb = rng.uniform(p.min_frequency, p.max_frequency);
            let a = (0..n).map(|_| rng.uniform(-p.max_log_amplitude, p.max_log_amplitude)).collect();
            let b = (0..n).map(|_| rng.uniform(-p.max_phase_amplitude, p.max_phase_amplitude)).collect();
            GaugeDraw { wa, wb, a, b }
        })
        .collect();

    let i = cplx(0.0, 1.0);
    let phase_distance = |g: Complex64| ((i * g).exp() - (i * base).exp()).norm();
    let mut columns = names(&["gauge", "wa", "wb"]);
    columns.extend((0..n).map(|k| format!("a_{k}")));
    columns.extend((0..n).map(|k| format!("b_{k}")));
    columns.extend(complex_columns("geometric_phase"));
    columns.extend(complex_columns("baseline_geometric_phase"));
    columns.extend(names(&["delta_phase_factor", "state_deviation", "gauged_binorm_defect", "parallel_defect"]));
    columns.extend(complex_columns("parallel_geometric_phase"));
    columns.push("parallel_delta_phase_factor".into());
    for k in 0..n {
        columns.extend(complex_columns(&format!("parallel_factor_{k}")));
    }

    let rows: Vec<qdissip::Result<Vec<f64>>> = draws
        .par_iter()
        .enumerate()
        .map(|(index, d)| {
            let g = GaugeFunction::from_fn(pair.grid(), n, |k, t| {
                let e = cplx(d.a[k] * (d.wa * t).sin(), d.b[k] * (d.wb * t).sin());
                let de = cplx(d.a[k] * d.wa * (d.wa * t).cos(), d.b[k] * d.wb * (d.wb * t).cos());
                (e.exp(), de * e.exp())
            })?;
            let gauged = gauge_transform(&pair, &rho, &g)?;
            let conn = connection_in_gauge(&pair, &rho, &h, &g)?;
            let phase = geometric_phase(&gauged, &rho, &conn)?;
            let mut deviation: f64 = 0.0;
            for (j, state) in states.iter().enumerate() {
                let other = gauged.left(j).try_mul(&rho_matrix)?.try_mul(&gauged.right(j).adjoint())?;
                deviation = deviation.max(state.max_abs_diff(&other));
            }
            let mut row = vec![index as f64, d.wa, d.wb];
            row.extend(&d.a);
            row.extend(&d.b);
            row.extend([phase.re, phase.im, base.re, base.im]);
            row.extend([phase_distance(phase), deviation, binorm_defect(&gauged), transport_defect]);
            row.extend([parallel_phase.re, parallel_phase.im, phase_distance(parallel_phase)]);
            for f in &factors {
                row.extend([f.re, f.im]);
            }
            Ok(row)
        })
        .collect();
    let mut table = ResultTable::new(columns);
    for (index, r) in rows.into_iter().enumerate() {
        table.push(r.map_err(|e| CliError::compute(format!("gauge {index}"), e))?);
    }
    Ok(table)
}
