//! Closed-form-vs-numerics checks. Each check produces a
//! [`VerificationReport`]; `passed` is a pure function of the recorded
//! metrics and tolerances (metric <= tolerance for every metric that has
//! one).

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{geometric_phase, quasienergy, FloquetMode, ModeIndex};
use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::numerics::{
    fold_quasienergy, kinetic_apply_spectral, monodromy_spectrum, potential_1d, propagate_1d,
    propagate_coupled, spectral_translate, Grid1D, Grid2D, KineticOrder,
};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub model: ModelSpec,
    pub metrics: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    pub passed: bool,
    pub runtime_seconds: f64,
}

/// Builder that accumulates metrics and evaluates the pass verdict.
struct ReportBuilder {
    check_name: String,
    model: ModelSpec,
    metrics: BTreeMap<String, f64>,
    tolerances: BTreeMap<String, f64>,
    started: Instant,
}

impl ReportBuilder {
    fn new(check_name: &str, model: &ModelSpec) -> Self {
        ReportBuilder {
            check_name: check_name.to_string(),
            model: model.clone(),
            metrics: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            started: Instant::now(),
        }
    }

    fn metric(&mut self, name: &str, value: f64) -> &mut Self {
        self.metrics.insert(name.to_string(), value);
        self
    }

    /// Record a metric together with the tolerance it must stay below.
    fn bounded(&mut self, name: &str, value: f64, tol: f64) -> &mut Self {
        self.metrics.insert(name.to_string(), value);
        self.tolerances.insert(name.to_string(), tol);
        self
    }

    fn finish(self) -> VerificationReport {
        let passed = self
            .tolerances
            .iter()
            .all(|(k, &tol)| self.metrics.get(k).is_some_and(|&v| v.is_finite() && v <= tol));
        VerificationReport {
            check_name: self.check_name,
            model: self.model,
            metrics: self.metrics,
            tolerances: self.tolerances,
            passed,
            runtime_seconds: self.started.elapsed().as_secs_f64(),
        }
    }
}

/// Default 1D verification grid for a variant; the linear wall models live
/// on [0, L], the oscillators on a symmetric box.
pub fn default_grid(spec: &ModelSpec) -> Result<Grid1D> {
    match spec {
        ModelSpec::LinearSingleDrive { .. } | ModelSpec::LinearDualDrive { .. } => {
            Grid1D::new(0.0, 16.0, 512)
        }
        ModelSpec::HarmonicDriven { .. } => Grid1D::new(-8.0, 8.0, 512),
        ModelSpec::CoupledDriven { .. } => Err(Error::UnsupportedVariant(
            "coupled pair needs a 2D grid; use default_grid_2d".into(),
        )),
    }
}

pub fn default_grid_2d(_spec: &ModelSpec) -> Result<Grid2D> {
    Ok(Grid2D { g1: Grid1D::new(-7.0, 7.0, 128)?, g2: Grid1D::new(-7.0, 7.0, 128)? })
}

/// Fold an angle into (-pi, pi].
pub fn fold_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut r = a.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r -= two_pi;
    }
    r
}

/// 4th-order finite-difference Floquet residual, with the spatial stencil
/// evaluated by calling the closed form at neighbouring points (so the
/// walls of the grid play no role) and the time derivative by 4th-order
/// central differences with dt = T / 4096. Reports the max over `t_samples`
/// equispaced times of ||r||_2 / ||u||_2 and the energy-scaled variant
/// ||r||_2 / (|E_n| ||u||_2).
pub fn floquet_residual(
    spec: &ModelSpec,
    index: ModeIndex,
    grid: &Grid1D,
    t_samples: usize,
    tol: f64,
) -> Result<VerificationReport> {
    let mode = FloquetMode::build(spec, index)?;
    let mut rb = ReportBuilder::new("floquet_residual", spec);
    let period = mode.period();
    let dt = period / 4096.0;
    let energy = mode.quasienergy();
    let hbar = spec.hbar();
    let v = potential_1d(spec)?;
    let m = match *spec {
        ModelSpec::LinearSingleDrive { m, .. }
        | ModelSpec::LinearDualDrive { m, .. }
        | ModelSpec::HarmonicDriven { m, .. } => m,
        ModelSpec::CoupledDriven { .. } => unreachable!("potential_1d rejected it"),
    };
    let h = grid.step();
    let kin = hbar * hbar / (2.0 * m);

    let mut worst = 0.0_f64;
    for s in 0..t_samples {
        let t = period * s as f64 / t_samples as f64;
        let mut r2 = 0.0;
        let mut u2 = 0.0;
        for i in 0..grid.n {
            let x = grid.point(i);
            let u = |dx: f64| mode.eval(&[x + dx], t).unwrap();
            let u0 = u(0.0);
            // 4th-order second derivative
            let d2 = (-u(2.0 * h) + 16.0 * u(h) - 30.0 * u0 + 16.0 * u(-h) - u(-2.0 * h))
                / (12.0 * h * h);
            let du_dt = (-mode.eval(&[x], t + 2.0 * dt)? + 8.0 * mode.eval(&[x], t + dt)?
                - 8.0 * mode.eval(&[x], t - dt)?
                + mode.eval(&[x], t - 2.0 * dt)?)
                / Complex64::from(12.0 * dt);
            let r = -kin * d2 + v(x, t) * u0 - Complex64::new(0.0, hbar) * du_dt - energy * u0;
            r2 += r.norm_sqr();
            u2 += u0.norm_sqr();
        }
        let rel = (r2 / u2).sqrt();
        worst = worst.max(rel);
    }
    rb.bounded("residual_rel", worst, tol);
    rb.metric("residual_energy_scaled", worst / energy.abs());
    rb.metric("quasienergy", energy);
    Ok(rb.finish())
}

/// 2D residual for the coupled pair, same construction per axis.
pub fn floquet_residual_2d(
    spec: &ModelSpec,
    index: ModeIndex,
    grid: &Grid2D,
    t_samples: usize,
    tol: f64,
) -> Result<VerificationReport> {
    let (m1, m2, omega1, omega2, g, lambda, omega, hbar) = match *spec {
        ModelSpec::CoupledDriven { m1, m2, omega1, omega2, g, lambda, omega, hbar } => {
            (m1, m2, omega1, omega2, g, lambda, omega, hbar)
        }
        _ => {
            return Err(Error::UnsupportedVariant(
                "floquet_residual_2d only accepts the coupled pair".into(),
            ))
        }
    };
    let mode = FloquetMode::build(spec, index)?;
    let mut rb = ReportBuilder::new("floquet_residual_2d", spec);
    let period = mode.period();
    let dt = period / 4096.0;
    let energy = mode.quasienergy();
    let h1 = grid.g1.step();
    let h2 = grid.g2.step();
    let k1 = hbar * hbar / (2.0 * m1);
    let k2 = hbar * hbar / (2.0 * m2);

    let mut worst = 0.0_f64;
    for s in 0..t_samples {
        let t = period * s as f64 / t_samples as f64;
        let mut r2 = 0.0;
        let mut u2 = 0.0;
        for i1 in 0..grid.g1.n {
            let x1 = grid.g1.point(i1);
            for i2 in 0..grid.g2.n {
                let x2 = grid.g2.point(i2);
                let u = |d1: f64, d2: f64| mode.eval(&[x1 + d1, x2 + d2], t).unwrap();
                let u0 = u(0.0, 0.0);
                let dxx1 = (-u(2.0 * h1, 0.0) + 16.0 * u(h1, 0.0) - 30.0 * u0
                    + 16.0 * u(-h1, 0.0)
                    - u(-2.0 * h1, 0.0))
                    / (12.0 * h1 * h1);
                let dxx2 = (-u(0.0, 2.0 * h2) + 16.0 * u(0.0, h2) - 30.0 * u0
                    + 16.0 * u(0.0, -h2)
                    - u(0.0, -2.0 * h2))
                    / (12.0 * h2 * h2);
                let du_dt = (-mode.eval(&[x1, x2], t + 2.0 * dt)?
                    + 8.0 * mode.eval(&[x1, x2], t + dt)?
                    - 8.0 * mode.eval(&[x1, x2], t - dt)?
                    + mode.eval(&[x1, x2], t - 2.0 * dt)?)
                    / Complex64::from(12.0 * dt);
                let pot = 0.5 * m1 * omega1 * omega1 * x1 * x1
                    + 0.5 * m2 * omega2 * omega2 * x2 * x2
                    + g * x1 * x2
                    + lambda * x1 * (omega * t).cos();
                let r = -k1 * dxx1 - k2 * dxx2 + pot * u0
                    - Complex64::new(0.0, hbar) * du_dt
                    - energy * u0;
                r2 += r.norm_sqr();
                u2 += u0.norm_sqr();
            }
        }
        worst = worst.max((r2 / u2).sqrt());
    }
    rb.bounded("residual_rel", worst, tol);
    rb.metric("residual_energy_scaled", worst / energy.abs());
    rb.metric("quasienergy", energy);
    Ok(rb.finish())
}

/// Propagate the analytic mode numerically over one period and compare
/// against e^{-i E T / hbar} u(x, 0).
pub fn period_fidelity(
    spec: &ModelSpec,
    index: ModeIndex,
    grid: &Grid1D,
    steps: usize,
    order: KineticOrder,
    infidelity_tol: f64,
    phase_tol: f64,
) -> Result<VerificationReport> {
    let mode = FloquetMode::build(spec, index)?;
    let mut rb = ReportBuilder::new("period_fidelity", spec);
    let period = mode.period();
    let hbar = spec.hbar();

    let mut psi = grid.sample(|x| mode.eval(&[x], 0.0).unwrap());
    let n0 = grid.norm(&psi);
    for p in psi.iter_mut() {
        *p /= n0;
    }
    let psi0 = psi.clone();
    propagate_1d(spec, grid, &mut psi, 0.0, period, steps, order)?;
    let overlap = grid.inner(&psi0, &psi);
    let fidelity = overlap.norm() / grid.norm(&psi);
    let phase_err = fold_angle(overlap.arg() + mode.quasienergy() * period / hbar).abs();
    rb.metric("fidelity", fidelity);
    rb.bounded("infidelity", 1.0 - fidelity, infidelity_tol);
    rb.bounded("phase_error_rad", phase_err, phase_tol);
    rb.metric("norm_drift", (grid.norm(&psi) - 1.0).abs());
    Ok(rb.finish())
}

/// 2D version for the coupled pair.
pub fn period_fidelity_2d(
    spec: &ModelSpec,
    index: ModeIndex,
    grid: &Grid2D,
    steps: usize,
    order: KineticOrder,
    infidelity_tol: f64,
    phase_tol: f64,
) -> Result<VerificationReport> {
    let mode = FloquetMode::build(spec, index)?;
    let mut rb = ReportBuilder::new("period_fidelity_2d", spec);
    let period = mode.period();
    let hbar = spec.hbar();
    let mut psi = grid.sample(|x1, x2| mode.eval(&[x1, x2], 0.0).unwrap());
    let n0 = grid.norm(&psi);
    for p in psi.iter_mut() {
        *p /= n0;
    }
    let psi0 = psi.clone();
    propagate_coupled(spec, grid, &mut psi, 0.0, period, steps, order)?;
    let overlap = grid.inner(&psi0, &psi);
    let fidelity = overlap.norm() / grid.norm(&psi);
    let phase_err = fold_angle(overlap.arg() + mode.quasienergy() * period / hbar).abs();
    rb.metric("fidelity", fidelity);
    rb.bounded("infidelity", 1.0 - fidelity, infidelity_tol);
    rb.bounded("phase_error_rad", phase_err, phase_tol);
    Ok(rb.finish())
}

fn simpson_weights(n_intervals: usize) -> Vec<f64> {
    assert!(n_intervals >= 2 && n_intervals % 2 == 0);
    let mut w = vec![0.0; n_intervals + 1];
    w[0] = 1.0;
    w[n_intervals] = 1.0;
    for (i, wi) in w.iter_mut().enumerate().take(n_intervals).skip(1) {
        *wi = if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    w
}

/// <u(t)|H(t)|u(t)> / <u|u> for the 1D variants, with a spectral kinetic
/// term on the grid.
fn energy_expectation_1d(spec: &ModelSpec, grid: &Grid1D, mode: &FloquetMode, t: f64) -> Result<f64> {
    let v = potential_1d(spec)?;
    let m = match *spec {
        ModelSpec::LinearSingleDrive { m, .. }
        | ModelSpec::LinearDualDrive { m, .. }
        | ModelSpec::HarmonicDriven { m, .. } => m,
        ModelSpec::CoupledDriven { .. } => unreachable!(),
    };
    let hbar = spec.hbar();
    let psi = grid.sample(|x| mode.eval(&[x], t).unwrap());
    let mut hpsi = kinetic_apply_spectral(grid, &psi, m, hbar);
    for (i, hp) in hpsi.iter_mut().enumerate() {
        *hp += v(grid.point(i), t) * psi[i];
    }
    Ok(grid.inner(&psi, &hpsi).re / grid.inner(&psi, &psi).re)
}

/// Same for the coupled pair: spectral kinetic along each axis.
fn energy_expectation_2d(spec: &ModelSpec, grid: &Grid2D, mode: &FloquetMode, t: f64) -> Result<f64> {
    let (m1, m2, omega1, omega2, g, lambda, omega, hbar) = match *spec {
        ModelSpec::CoupledDriven { m1, m2, omega1, omega2, g, lambda, omega, hbar } => {
            (m1, m2, omega1, omega2, g, lambda, omega, hbar)
        }
        _ => return Err(Error::UnsupportedVariant("2D expectation needs the coupled pair".into())),
    };
    let (n1, n2) = (grid.g1.n, grid.g2.n);
    let psi = grid.sample(|x1, x2| mode.eval(&[x1, x2], t).unwrap());
    let mut hpsi = vec![Complex64::default(); psi.len()];
    // kinetic along x2: rows are contiguous
    for i1 in 0..n1 {
        let row = &psi[i1 * n2..(i1 + 1) * n2];
        let k = kinetic_apply_spectral(&grid.g2, row, m2, hbar);
        hpsi[i1 * n2..(i1 + 1) * n2].copy_from_slice(&k);
    }
    // kinetic along x1: gather columns
    let mut col = vec![Complex64::default(); n1];
    for i2 in 0..n2 {
        for i1 in 0..n1 {
            col[i1] = psi[i1 * n2 + i2];
        }
        let k = kinetic_apply_spectral(&grid.g1, &col, m1, hbar);
        for i1 in 0..n1 {
            hpsi[i1 * n2 + i2] += k[i1];
        }
    }
    let c = (omega * t).cos();
    for i1 in 0..n1 {
        let x1 = grid.g1.point(i1);
        for i2 in 0..n2 {
            let x2 = grid.g2.point(i2);
            let pot = 0.5 * m1 * omega1 * omega1 * x1 * x1
                + 0.5 * m2 * omega2 * omega2 * x2 * x2
                + g * x1 * x2
                + lambda * x1 * c;
            hpsi[i1 * n2 + i2] += pot * psi[i1 * n2 + i2];
        }
    }
    Ok(grid.inner(&psi, &hpsi).re / grid.inner(&psi, &psi).re)
}

/// Numerical geometric phase over one period: gamma = chi - delta with
/// chi = -E_n T / hbar and delta = -(1/hbar) \int <H> dt by Simpson over
/// `t_steps` intervals (>= 256). In strict mode chi is instead extracted
/// from arg<psi(0)|psi(T)> of a numerically propagated state (1D only).
pub fn berry_phase_numeric(
    spec: &ModelSpec,
    index: ModeIndex,
    grid_1d: Option<&Grid1D>,
    grid_2d: Option<&Grid2D>,
    t_steps: usize,
    rel_tol: f64,
    strict: bool,
) -> Result<VerificationReport> {
    match spec {
        ModelSpec::HarmonicDriven { .. } | ModelSpec::CoupledDriven { .. } => {}
        _ => {
            return Err(Error::UnsupportedVariant(
                "geometric phase check applies to the oscillator variants".into(),
            ))
        }
    }
    if t_steps < 256 || t_steps % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "t_steps must be an even number >= 256, got {t_steps}"
        )));
    }
    let mode = FloquetMode::build(spec, index)?;
    let mut rb = ReportBuilder::new("berry_phase_numeric", spec);
    let period = mode.period();
    let hbar = spec.hbar();
    let dt = period / t_steps as f64;
    let w = simpson_weights(t_steps);
    let mut integral = 0.0;
    for (k, wk) in w.iter().enumerate() {
        let t = k as f64 * dt;
        let e = match spec {
            ModelSpec::CoupledDriven { .. } => {
                let g2 = grid_2d.ok_or_else(|| {
                    Error::InvalidParameter("coupled Berry check needs a 2D grid".into())
                })?;
                energy_expectation_2d(spec, g2, &mode, t)?
            }
            _ => {
                let g1 = grid_1d.ok_or_else(|| {
                    Error::InvalidParameter("1D Berry check needs a 1D grid".into())
                })?;
                energy_expectation_1d(spec, g1, &mode, t)?
            }
        };
        integral += wk * e;
    }
    integral *= dt / 3.0;
    let delta = -integral / hbar;
    let chi = if strict {
        let g1 = grid_1d.ok_or_else(|| {
            Error::InvalidParameter("strict mode needs a 1D grid".into())
        })?;
        let mut psi = g1.sample(|x| mode.eval(&[x], 0.0).unwrap());
        let n0 = g1.norm(&psi);
        for p in psi.iter_mut() {
            *p /= n0;
        }
        let psi0 = psi.clone();
        propagate_1d(spec, g1, &mut psi, 0.0, period, 8192, KineticOrder::Fourth)?;
        // unwrap the overall phase onto the branch of -E T / hbar
        let raw = g1.inner(&psi0, &psi).arg();
        let target = -mode.quasienergy() * period / hbar;
        raw + 2.0 * std::f64::consts::PI * ((target - raw) / (2.0 * std::f64::consts::PI)).round()
    } else {
        -mode.quasienergy() * period / hbar
    };
    let gamma = chi - delta;
    let gamma_exact = geometric_phase(spec);
    rb.metric("gamma_numeric", gamma);
    rb.metric("gamma_analytic", gamma_exact);
    rb.metric("dynamical_phase", delta);
    rb.metric("overall_phase", chi);
    let abs_err = (gamma - gamma_exact).abs();
    rb.metric("abs_error_rad", abs_err);
    if gamma_exact.abs() > 0.0 {
        rb.bounded("rel_error", abs_err / gamma_exact.abs(), rel_tol);
    } else {
        rb.bounded("abs_error_rad_bound", abs_err, 1e-10);
    }
    Ok(rb.finish())
}

/// Reduction / limit checks appropriate to the variant:
/// - dual drive with lambda2 = 0 equals the single-drive mode pointwise;
/// - coupled with g = 0 reduces to two independent driven oscillators
///   (quasienergy, time phase, geometric phase);
/// - coupled with g != 0 factorizes through the normal-mode rotation
///   (quasienergy from the two effective 1D modes);
/// - lambda = 0 reduces every quasienergy to the undriven spectrum, with
///   the linear-spectrum zeros certified by |Ai(a_n)| directly.
pub fn limit_suite(spec: &ModelSpec) -> Result<VerificationReport> {
    let mut rb = ReportBuilder::new("limit_suite", spec);
    match *spec {
        ModelSpec::LinearSingleDrive { m, g, omega, hbar, .. } => {
            let undriven = ModelSpec::LinearSingleDrive { m, g, lambda: 0.0, omega, hbar };
            let mut worst_e = 0.0_f64;
            let mut worst_ai = 0.0_f64;
            for n in 1..=5 {
                let e = quasienergy(&undriven, ModeIndex::new(n))?;
                let a_n = crate::specfun::airy_zero(n)?;
                let expect = -(m * g * g * hbar * hbar / 2.0).cbrt() * a_n;
                worst_e = worst_e.max((e - expect).abs());
                worst_ai = worst_ai
                    .max(crate::specfun::airy_ai(a_n).abs() / crate::specfun::airy_ai_prime(a_n).abs());
            }
            rb.bounded("lambda0_quasienergy_dev", worst_e, 1e-12);
            rb.bounded("airy_zero_defect", worst_ai, 1e-10);
        }
        ModelSpec::LinearDualDrive { m, g, lambda1, omega1, omega2, hbar, .. } => {
            let single =
                ModelSpec::LinearSingleDrive { m, g, lambda: lambda1, omega: omega1, hbar };
            let collapsed = ModelSpec::LinearDualDrive {
                m,
                g,
                lambda1,
                lambda2: 0.0,
                omega1,
                omega2,
                hbar,
            };
            let ms = FloquetMode::build(&single, ModeIndex::new(1))?;
            let md = FloquetMode::build(&collapsed, ModeIndex::new(1))?;
            rb.bounded(
                "lambda2_0_quasienergy_dev",
                (ms.quasienergy() - md.quasienergy()).abs(),
                1e-12,
            );
            let mut state = 0x6A09E667F3BCC909u64;
            let mut rnd = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64
            };
            let mut worst = 0.0_f64;
            for _ in 0..100 {
                let x = rnd() * 8.0;
                let t = rnd() * ms.period();
                let du = (ms.eval(&[x], t)? - md.eval(&[x], t)?).norm();
                worst = worst.max(du);
            }
            rb.bounded("lambda2_0_mode_dev", worst, 1e-12);
        }
        ModelSpec::HarmonicDriven { m, omega_m, omega, hbar, .. } => {
            let undriven = ModelSpec::HarmonicDriven { m, omega_m, lambda: 0.0, omega, hbar };
            let mut worst = 0.0_f64;
            for n in 0..5 {
                let e = quasienergy(&undriven, ModeIndex::new(n))?;
                worst = worst.max((e - hbar * omega_m * (n as f64 + 0.5)).abs());
            }
            rb.bounded("lambda0_quasienergy_dev", worst, 1e-12);
            rb.bounded("lambda0_geometric_phase", geometric_phase(&undriven).abs(), 1e-12);
        }
        ModelSpec::CoupledDriven { m1, m2, omega1, omega2, g: _, lambda, omega, hbar } => {
            // g -> 0: oscillator 1 is a driven oscillator, 2 undriven
            let uncoupled = ModelSpec::CoupledDriven {
                m1,
                m2,
                omega1,
                omega2,
                g: 0.0,
                lambda,
                omega,
                hbar,
            };
            let osc1 = ModelSpec::HarmonicDriven { m: m1, omega_m: omega1, lambda, omega, hbar };
            let ec = quasienergy(&uncoupled, ModeIndex::pair(0, 0))?;
            let e1 = quasienergy(&osc1, ModeIndex::new(0))?;
            let e2 = hbar * omega2 * 0.5;
            rb.bounded("g0_quasienergy_dev", (ec - (e1 + e2)).abs(), 1e-12);
            rb.bounded(
                "g0_geometric_phase_dev",
                (geometric_phase(&uncoupled) - geometric_phase(&osc1)).abs(),
                1e-12,
            );
            let mc = FloquetMode::build(&uncoupled, ModeIndex::pair(0, 0))?;
            let m1d = FloquetMode::build(&osc1, ModeIndex::new(0))?;
            let mut worst = 0.0_f64;
            for k in 0..7 {
                let t = mc.period() * k as f64 / 7.0;
                let dp = (mc.time_phase(t) - m1d.time_phase(t)).norm();
                worst = worst.max(dp);
            }
            rb.bounded("g0_time_phase_dev", worst, 1e-12);

            // g != 0: factorized quasienergy through the rotation
            let mode = FloquetMode::build(spec, ModeIndex::pair(0, 0))?;
            let nm = mode.normal.as_ref().expect("coupled mode carries normal data");
            let eff1 = ModelSpec::HarmonicDriven {
                m: nm.mass,
                omega_m: nm.omega_1,
                lambda: lambda * nm.theta.cos() / nm.eta,
                omega,
                hbar,
            };
            let eff2 = ModelSpec::HarmonicDriven {
                m: nm.mass,
                omega_m: nm.omega_2,
                lambda: lambda * nm.theta.sin() * nm.eta,
                omega,
                hbar,
            };
            let ef = quasienergy(&eff1, ModeIndex::new(0))? + quasienergy(&eff2, ModeIndex::new(0))?;
            rb.bounded("factorized_quasienergy_dev", (mode.quasienergy() - ef).abs(), 1e-10);
        }
    }
    Ok(rb.finish())
}

/// Compare the closed-form argument translation against a discrete
/// Fourier-multiplier implementation of e^{i beta B(t) p}.
pub fn momentum_shift_crosscheck(
    spec: &ModelSpec,
    index: ModeIndex,
    grid: &Grid1D,
    t: f64,
    tol: f64,
) -> Result<VerificationReport> {
    let mode = FloquetMode::build(spec, index)?;
    if spec.dim() != 1 {
        return Err(Error::UnsupportedVariant("momentum shift crosscheck is 1D".into()));
    }
    let mut rb = ReportBuilder::new("momentum_shift_crosscheck", spec);
    let hbar = spec.hbar();
    let shift = hbar * mode.plan.shift_coeff(0, t);
    // unshifted profile sampled on the grid, then translated spectrally
    let base = grid.sample(|x| mode.eval(&[x], t).unwrap() / mode.time_phase(t)
        / Complex64::from_polar(1.0, mode.plan.phase_coeff(0, t) * x));
    // base is phi_n(x + shift) by construction; compare translating
    // phi_n(x) sampled directly
    let profile: Vec<Complex64> = {
        let a0 = grid.sample(|x| {
            // phi_n(x): evaluate the mode at t but undo phase and shift by
            // sampling at x - shift
            mode.eval(&[x - shift], t).unwrap() / mode.time_phase(t)
                / Complex64::from_polar(1.0, mode.plan.phase_coeff(0, t) * (x - shift))
        });
        a0
    };
    let translated = spectral_translate(grid, &profile, shift);
    let mut worst = 0.0_f64;
    // skip the outermost points: the spectral shift wraps around the box
    let guard = (grid.n / 16).max(2);
    for i in guard..grid.n - guard {
        worst = worst.max((translated[i] - base[i]).norm());
    }
    rb.metric("shift", shift);
    rb.bounded("max_pointwise_dev", worst, tol);
    Ok(rb.finish())
}

/// Compare the lowest `k` analytic quasienergies (folded into the
/// monodromy branch) against the numerically extracted eigenphases.
pub fn monodromy_check(
    spec: &ModelSpec,
    grid: &Grid1D,
    steps: usize,
    order: KineticOrder,
    k: usize,
    phase_tol_rad: f64,
) -> Result<VerificationReport> {
    let mut rb = ReportBuilder::new("monodromy_check", spec);
    let plan = spec.separate()?;
    let period = plan.period;
    let hbar = spec.hbar();
    let omega_eff = 2.0 * std::f64::consts::PI / period;
    let ms = monodromy_spectrum(spec, grid, steps, order)?;
    let first_index = match spec {
        ModelSpec::LinearSingleDrive { .. } | ModelSpec::LinearDualDrive { .. } => 1,
        _ => 0,
    };
    let mut worst_rad = 0.0_f64;
    for j in 0..k {
        let idx = ModeIndex::new(first_index + j as u32);
        let target = fold_quasienergy(quasienergy(spec, idx)?, hbar, omega_eff);
        let best = ms
            .quasienergies
            .iter()
            .map(|&q| (q - target).abs())
            .fold(f64::INFINITY, f64::min);
        worst_rad = worst_rad.max(best * period / hbar);
        rb.metric(&format!("eigenphase_error_rad_{j}"), best * period / hbar);
    }
    let unitarity = ms
        .modulus_defects
        .iter()
        .fold(0.0_f64, |acc, d| acc.max(d.abs()));
    rb.bounded("max_eigenphase_error_rad", worst_rad, phase_tol_rad);
    rb.bounded("unitarity_defect", unitarity, 1e-8);
    Ok(rb.finish())
}

/// Gauge invariance: the physical solution e^{-i E t / hbar} u(x, t) must
/// not change when (E, u) are replaced by the s-shifted representatives
/// (E + s hbar Omega, u e^{i s Omega t}).
pub fn gauge_invariance(spec: &ModelSpec, index: ModeIndex, tol: f64) -> Result<VerificationReport> {
    let mode = FloquetMode::build(spec, index)?;
    let mut rb = ReportBuilder::new("gauge_invariance", spec);
    let hbar = spec.hbar();
    let omega_eff = 2.0 * std::f64::consts::PI / mode.period();
    let dim = spec.dim();
    let mut worst = 0.0_f64;
    for s in [-2i32, -1, 1, 2] {
        for k in 0..5 {
            let t = mode.period() * (0.13 + k as f64 / 5.0);
            let x = [0.4 + 0.3 * k as f64, -0.5 + 0.2 * k as f64];
            let psi = mode.wavefunction(&x[..dim], t)?;
            let e_s = mode.quasienergy() + s as f64 * hbar * omega_eff;
            let u_s =
                mode.eval(&x[..dim], t)? * Complex64::from_polar(1.0, s as f64 * omega_eff * t);
            let psi_s = Complex64::from_polar(1.0, -e_s * t / hbar) * u_s;
            worst = worst.max((psi - psi_s).norm());
        }
    }
    rb.bounded("max_pointwise_dev", worst, tol);
    Ok(rb.finish())
}

/// Numerical hygiene: norm conservation over one period, second-order
/// convergence in dt (halving ratio near 4), and monodromy unitarity on a
/// small grid.
pub fn hygiene_check(spec: &ModelSpec, grid: &Grid1D) -> Result<VerificationReport> {
    let mode_index = match spec {
        ModelSpec::LinearSingleDrive { .. } | ModelSpec::LinearDualDrive { .. } => ModeIndex::new(1),
        _ => ModeIndex::new(0),
    };
    let mode = FloquetMode::build(spec, mode_index)?;
    let mut rb = ReportBuilder::new("hygiene_check", spec);
    let period = mode.period();

    let mut psi = grid.sample(|x| mode.eval(&[x], 0.0).unwrap());
    let n0 = grid.norm(&psi);
    for p in psi.iter_mut() {
        *p /= n0;
    }
    let psi0 = psi.clone();
    propagate_1d(spec, grid, &mut psi, 0.0, period, 4096, KineticOrder::Fourth)?;
    rb.bounded("norm_drift", (grid.norm(&psi) - 1.0).abs(), 1e-10);

    // dt-halving: compare both coarse solutions against a fine reference
    let run = |steps: usize| -> Result<Vec<Complex64>> {
        let mut p = psi0.clone();
        propagate_1d(spec, grid, &mut p, 0.0, period, steps, KineticOrder::Fourth)?;
        Ok(p)
    };
    let reference = run(4096)?;
    let diff_norm = |a: &[Complex64], b: &[Complex64]| -> f64 {
        (a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>() * grid.step()).sqrt()
    };
    let e1 = diff_norm(&run(256)?, &reference);
    let e2 = diff_norm(&run(512)?, &reference);
    let ratio = e1 / e2;
    rb.metric("dt_halving_ratio", ratio);
    rb.bounded("dt_halving_ratio_low", 3.5 - ratio, 0.0);
    rb.bounded("dt_halving_ratio_high", ratio - 4.5, 0.0);

    let small = Grid1D::new(grid.min, grid.max, 96)?;
    let ms = monodromy_spectrum(spec, &small, 1024, KineticOrder::Fourth)?;
    let unit = ms.modulus_defects.iter().fold(0.0_f64, |a, d| a.max(d.abs()));
    rb.bounded("monodromy_unitarity_defect", unit, 1e-8);
    Ok(rb.finish())
}
