//! Independent numerical machinery: grids, Crank-Nicolson propagation in
//! one and two dimensions, spectral kinetic application, and monodromy
//! eigenphases. Nothing in here knows the closed-form solutions; it only
//! sees the Hamiltonian, so it can serve as an oracle for them.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelSpec;

/// Uniform 1D grid with Dirichlet walls just outside the first and last
/// points: x_i = min + (i + 1) h with h = (max - min) / (n + 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::InvalidGrid(format!("bad interval [{min}, {max}]")));
        }
        if n < 8 {
            return Err(Error::InvalidGrid(format!("need at least 8 points, got {n}")));
        }
        Ok(Grid1D { min, max, n })
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.n + 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.min + (i + 1) as f64 * self.step()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }

    /// Trapezoid inner product <a|b>; with Dirichlet walls this is just
    /// h * sum conj(a) b.
    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let s: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
        s * self.step()
    }

    pub fn norm(&self, a: &[Complex64]) -> f64 {
        self.inner(a, a).re.max(0.0).sqrt()
    }

    /// Sample a function onto the grid.
    pub fn sample(&self, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        (0..self.n).map(|i| f(self.point(i))).collect()
    }
}

/// Finite-difference order of the kinetic stencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KineticOrder {
    /// three-point Laplacian, O(h^2)
    Second,
    /// five-point Laplacian, O(h^4)
    Fourth,
}

/// Pentadiagonal complex system solver (LU without pivoting; the
/// Crank-Nicolson matrices are strongly diagonally dominant).
struct PentaLU {
    n: usize,
    // factored bands: l2, l1 below, d on, u1, u2 above
    l2: Vec<Complex64>,
    l1: Vec<Complex64>,
    d: Vec<Complex64>,
    u1: Vec<Complex64>,
    u2: Vec<Complex64>,
}

impl PentaLU {
    /// Factor a pentadiagonal matrix given by its bands. `d` has length n,
    /// `u1`/`l1` length n-1, `u2`/`l2` length n-2.
    fn factor(
        l2: &[Complex64],
        l1: &[Complex64],
        d: &[Complex64],
        u1: &[Complex64],
        u2: &[Complex64],
    ) -> Result<Self> {
        let n = d.len();
        let mut f = PentaLU {
            n,
            l2: l2.to_vec(),
            l1: l1.to_vec(),
            d: d.to_vec(),
            u1: u1.to_vec(),
            u2: u2.to_vec(),
        };
        for i in 0..n {
            let piv = f.d[i];
            if piv.norm() < 1e-300 {
                return Err(Error::Numerical("singular pentadiagonal pivot".into()));
            }
            if i + 1 < n {
                let m1 = f.l1[i] / piv;
                f.l1[i] = m1;
                f.d[i + 1] -= m1 * f.u1[i];
                if i + 2 < n {
                    f.u1[i + 1] -= m1 * f.u2[i];
                }
            }
            if i + 2 < n {
                let m2 = f.l2[i] / piv;
                f.l2[i] = m2;
                f.l1[i + 1] -= m2 * f.u1[i];
                f.d[i + 2] -= m2 * f.u2[i];
            }
        }
        Ok(f)
    }

    fn solve(&self, rhs: &mut [Complex64]) {
        let n = self.n;
        // forward
        for i in 0..n {
            if i + 1 < n {
                let m1 = self.l1[i];
                rhs[i + 1] = rhs[i + 1] - m1 * rhs[i];
            }
            if i + 2 < n {
                let m2 = self.l2[i];
                rhs[i + 2] = rhs[i + 2] - m2 * rhs[i];
            }
        }
        // back substitution
        for i in (0..n).rev() {
            let mut v = rhs[i];
            if i + 1 < n {
                v -= self.u1[i] * rhs[i + 1];
            }
            if i + 2 < n {
                v -= self.u2[i] * rhs[i + 2];
            }
            rhs[i] = v / self.d[i];
        }
    }
}

/// Kinetic stencil coefficients: (on-diagonal, +-1, +-2) of -hbar^2/(2m) d2/dx2.
fn kinetic_bands(order: KineticOrder, m: f64, hbar: f64, h: f64) -> (f64, f64, f64) {
    let c = hbar * hbar / (2.0 * m * h * h);
    match order {
        KineticOrder::Second => (2.0 * c, -c, 0.0),
        KineticOrder::Fourth => (30.0 * c / 12.0, -16.0 * c / 12.0, c / 12.0),
    }
}

/// One Crank-Nicolson step over `dt` with the potential evaluated at the
/// midpoint (2nd order accurate for time-dependent Hamiltonians):
/// (1 + i dt H / 2 hbar) psi' = (1 - i dt H / 2 hbar) psi.
fn cn_step_1d(
    psi: &mut [Complex64],
    v_mid: &[f64],
    m: f64,
    hbar: f64,
    h: f64,
    dt: f64,
    order: KineticOrder,
) -> Result<()> {
    let n = psi.len();
    let (k0, k1, k2) = kinetic_bands(order, m, hbar, h);
    let mu = Complex64::new(0.0, dt / (2.0 * hbar));
    let one = Complex64::new(1.0, 0.0);

    // rhs = (1 - mu H) psi
    let mut rhs = vec![Complex64::default(); n];
    for i in 0..n {
        let mut hp = (k0 + v_mid[i]) * psi[i];
        if i >= 1 {
            hp += k1 * psi[i - 1];
        }
        if i + 1 < n {
            hp += k1 * psi[i + 1];
        }
        if k2 != 0.0 {
            if i >= 2 {
                hp += k2 * psi[i - 2];
            }
            if i + 2 < n {
                hp += k2 * psi[i + 2];
            }
        }
        rhs[i] = psi[i] - mu * hp;
    }

    // bands of (1 + mu H)
    let d: Vec<Complex64> = (0..n).map(|i| one + mu * (k0 + v_mid[i])).collect();
    let off1 = vec![mu * k1; n.saturating_sub(1)];
    let off2 = vec![mu * k2; n.saturating_sub(2)];
    let lu = PentaLU::factor(&off2, &off1, &d, &off1, &off2)?;
    lu.solve(&mut rhs);
    psi.copy_from_slice(&rhs);
    Ok(())
}

/// Time-dependent 1D potential of a model variant.
pub fn potential_1d(spec: &ModelSpec) -> Result<Box<dyn Fn(f64, f64) -> f64 + Sync + Send>> {
    match *spec {
        ModelSpec::LinearSingleDrive { m, g, lambda, omega, .. } => {
            Ok(Box::new(move |x, t| m * g * x + lambda * x * (omega * t).cos()))
        }
        ModelSpec::LinearDualDrive { m, g, lambda1, lambda2, omega1, omega2, .. } => {
            Ok(Box::new(move |x, t| {
                m * g * x + x * (lambda1 * (omega1 * t).cos() + lambda2 * (omega2 * t).cos())
            }))
        }
        ModelSpec::HarmonicDriven { m, omega_m, lambda, omega, .. } => Ok(Box::new(move |x, t| {
            0.5 * m * omega_m * omega_m * x * x + lambda * x * (omega * t).cos()
        })),
        ModelSpec::CoupledDriven { .. } => Err(Error::UnsupportedVariant(
            "coupled pair is two-dimensional; use the 2D propagator".into(),
        )),
    }
}

fn mass_1d(spec: &ModelSpec) -> Result<f64> {
    match *spec {
        ModelSpec::LinearSingleDrive { m, .. }
        | ModelSpec::LinearDualDrive { m, .. }
        | ModelSpec::HarmonicDriven { m, .. } => Ok(m),
        ModelSpec::CoupledDriven { .. } => Err(Error::UnsupportedVariant(
            "coupled pair is two-dimensional; use the 2D propagator".into(),
        )),
    }
}

/// Propagate a 1D state from `t0` over `steps` uniform Crank-Nicolson
/// steps covering total time `duration`.
pub fn propagate_1d(
    spec: &ModelSpec,
    grid: &Grid1D,
    psi: &mut [Complex64],
    t0: f64,
    duration: f64,
    steps: usize,
    order: KineticOrder,
) -> Result<()> {
    if psi.len() != grid.n {
        return Err(Error::DimensionMismatch { expected: grid.n, got: psi.len() });
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be positive".into()));
    }
    let v = potential_1d(spec)?;
    let m = mass_1d(spec)?;
    let hbar = spec.hbar();
    let h = grid.step();
    let dt = duration / steps as f64;
    let xs = grid.points();
    let mut v_mid = vec![0.0; grid.n];
    for k in 0..steps {
        let tm = t0 + (k as f64 + 0.5) * dt;
        for (vm, &x) in v_mid.iter_mut().zip(&xs) {
            *vm = v(x, tm);
        }
        cn_step_1d(psi, &v_mid, m, hbar, h, dt, order)?;
    }
    Ok(())
}

/// Generic 1D propagation with an arbitrary scalar potential; used by
/// tests and by the 2D splitting below.
pub fn propagate_potential_1d(
    grid: &Grid1D,
    psi: &mut [Complex64],
    potential: &(impl Fn(f64, f64) -> f64 + ?Sized),
    m: f64,
    hbar: f64,
    t0: f64,
    duration: f64,
    steps: usize,
    order: KineticOrder,
) -> Result<()> {
    if psi.len() != grid.n {
        return Err(Error::DimensionMismatch { expected: grid.n, got: psi.len() });
    }
    let h = grid.step();
    let dt = duration / steps as f64;
    let xs = grid.points();
    let mut v_mid = vec![0.0; grid.n];
    for k in 0..steps {
        let tm = t0 + (k as f64 + 0.5) * dt;
        for (vm, &x) in v_mid.iter_mut().zip(&xs) {
            *vm = potential(x, tm);
        }
        cn_step_1d(psi, &v_mid, m, hbar, h, dt, order)?;
    }
    Ok(())
}

/// Row-major 2D state on a pair of grids: index = i1 * n2 + i2.
pub struct Grid2D {
    pub g1: Grid1D,
    pub g2: Grid1D,
}

impl Grid2D {
    pub fn len(&self) -> usize {
        self.g1.n * self.g2.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn inner(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let s: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
        s * self.g1.step() * self.g2.step()
    }

    pub fn norm(&self, a: &[Complex64]) -> f64 {
        self.inner(a, a).re.max(0.0).sqrt()
    }

    pub fn sample(&self, f: impl Fn(f64, f64) -> Complex64) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.len());
        for i1 in 0..self.g1.n {
            let x1 = self.g1.point(i1);
            for i2 in 0..self.g2.n {
                out.push(f(x1, self.g2.point(i2)));
            }
        }
        out
    }
}

/// Propagate the coupled pair with Strang splitting per step:
/// half-step of the diagonal part (g x1 x2 + drive), full Crank-Nicolson
/// steps of the two decoupled oscillators, half-step of the diagonal part.
/// The two oscillator Hamiltonians commute, so the only splitting error is
/// against the diagonal part: O(dt^2) overall.
pub fn propagate_coupled(
    spec: &ModelSpec,
    grid: &Grid2D,
    psi: &mut [Complex64],
    t0: f64,
    duration: f64,
    steps: usize,
    order: KineticOrder,
) -> Result<()> {
    let (m1, m2, omega1, omega2, g, lambda, omega, hbar) = match *spec {
        ModelSpec::CoupledDriven { m1, m2, omega1, omega2, g, lambda, omega, hbar } => {
            (m1, m2, omega1, omega2, g, lambda, omega, hbar)
        }
        _ => {
            return Err(Error::UnsupportedVariant(
                "propagate_coupled only accepts the coupled pair".into(),
            ))
        }
    };
    if psi.len() != grid.len() {
        return Err(Error::DimensionMismatch { expected: grid.len(), got: psi.len() });
    }
    let (n1, n2) = (grid.g1.n, grid.g2.n);
    let dt = duration / steps as f64;
    let xs1 = grid.g1.points();
    let xs2 = grid.g2.points();
    let h1 = grid.g1.step();
    let h2 = grid.g2.step();

    let diag_phase = |psi: &mut [Complex64], t: f64, tau: f64| {
        let c = (omega * t).cos();
        psi.par_chunks_mut(n2).enumerate().for_each(|(i1, row)| {
            let x1 = xs1[i1];
            for (i2, p) in row.iter_mut().enumerate() {
                let v = g * x1 * xs2[i2] + lambda * x1 * c;
                *p *= Complex64::from_polar(1.0, -v * tau / hbar);
            }
        });
    };

    let mut scratch = vec![Complex64::default(); n1];
    for k in 0..steps {
        let tm = t0 + (k as f64 + 0.5) * dt;
        diag_phase(psi, tm, 0.5 * dt);
        // oscillator 2: rows are contiguous
        {
            let v2: Vec<f64> =
                xs2.iter().map(|&x| 0.5 * m2 * omega2 * omega2 * x * x).collect();
            psi.par_chunks_mut(n2)
                .try_for_each(|row| cn_step_1d(row, &v2, m2, hbar, h2, dt, order))?;
        }
        // oscillator 1: gather columns
        {
            let v1: Vec<f64> =
                xs1.iter().map(|&x| 0.5 * m1 * omega1 * omega1 * x * x).collect();
            for i2 in 0..n2 {
                for i1 in 0..n1 {
                    scratch[i1] = psi[i1 * n2 + i2];
                }
                cn_step_1d(&mut scratch, &v1, m1, hbar, h1, dt, order)?;
                for i1 in 0..n1 {
                    psi[i1 * n2 + i2] = scratch[i1];
                }
            }
        }
        diag_phase(psi, tm, 0.5 * dt);
    }
    Ok(())
}

/// Apply the instantaneous Hamiltonian to a 1D state, with a spectral
/// (FFT) kinetic term. The state must vanish near the grid edges for the
/// implicit periodic extension to be harmless.
pub fn hamiltonian_apply_spectral(
    spec: &ModelSpec,
    grid: &Grid1D,
    psi: &[Complex64],
    t: f64,
) -> Result<Vec<Complex64>> {
    let v = potential_1d(spec)?;
    let m = mass_1d(spec)?;
    let hbar = spec.hbar();
    let mut out = kinetic_apply_spectral(grid, psi, m, hbar);
    for (i, o) in out.iter_mut().enumerate() {
        *o += v(grid.point(i), t) * psi[i];
    }
    Ok(out)
}

/// -hbar^2/(2m) d2/dx2 via FFT on the periodic extension of the grid.
pub fn kinetic_apply_spectral(grid: &Grid1D, psi: &[Complex64], m: f64, hbar: f64) -> Vec<Complex64> {
    let n = psi.len();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf = psi.to_vec();
    fwd.process(&mut buf);
    let period = grid.step() * n as f64;
    for (j, b) in buf.iter_mut().enumerate() {
        let kj = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
        let k = 2.0 * std::f64::consts::PI * kj / period;
        *b *= hbar * hbar * k * k / (2.0 * m) / n as f64;
    }
    inv.process(&mut buf);
    buf
}

/// Translate a state by `shift` in x via the spectral shift theorem; the
/// independent counterpart of the argument shift in the closed forms.
pub fn spectral_translate(grid: &Grid1D, psi: &[Complex64], shift: f64) -> Vec<Complex64> {
    let n = psi.len();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut buf = psi.to_vec();
    fwd.process(&mut buf);
    let period = grid.step() * n as f64;
    for (j, b) in buf.iter_mut().enumerate() {
        let kj = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
        let k = 2.0 * std::f64::consts::PI * kj / period;
        // f(x + shift) has spectrum e^{i k shift} F(k)
        *b *= Complex64::from_polar(1.0 / n as f64, k * shift);
    }
    inv.process(&mut buf);
    buf
}

/// Quasienergies (gauge branch centred on zero) extracted from the
/// one-period propagator: eigenphases of U(T) divided by -T/hbar,
/// reported in (-hbar omega / 2, hbar omega / 2] and sorted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonodromySpectrum {
    pub quasienergies: Vec<f64>,
    /// |eigenvalue| - 1 for each kept eigenvalue; unitarity defect.
    pub modulus_defects: Vec<f64>,
}

/// Build the full one-period propagator column by column and diagonalize
/// it. `steps` Crank-Nicolson steps per period.
pub fn monodromy_spectrum(
    spec: &ModelSpec,
    grid: &Grid1D,
    steps: usize,
    order: KineticOrder,
) -> Result<MonodromySpectrum> {
    let plan = spec.separate()?;
    let period = plan.period;
    let hbar = spec.hbar();
    let n = grid.n;

    let columns: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut col = vec![Complex64::default(); n];
            col[j] = Complex64::new(1.0, 0.0);
            propagate_1d(spec, grid, &mut col, 0.0, period, steps, order).map(|_| col)
        })
        .collect::<Result<_>>()?;

    let mut u = faer::Mat::<faer::c64>::zeros(n, n);
    for (j, col) in columns.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            u[(i, j)] = v;
        }
    }
    let eig = u
        .eigenvalues()
        .map_err(|e| Error::Numerical(format!("monodromy eigendecomposition failed: {e:?}")))?;

    let omega_drive = 2.0 * std::f64::consts::PI / period;
    let mut quasi = Vec::with_capacity(n);
    let mut defects = Vec::with_capacity(n);
    for ev in eig {
        defects.push(ev.norm() - 1.0);
        let theta = ev.arg(); // in (-pi, pi]
        let e = -hbar * theta / period; // in [-hbar omega/2, hbar omega/2)
        debug_assert!(e.abs() <= 0.5 * hbar * omega_drive + 1e-12);
        quasi.push(e);
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| quasi[a].total_cmp(&quasi[b]));
    Ok(MonodromySpectrum {
        quasienergies: idx.iter().map(|&i| quasi[i]).collect(),
        modulus_defects: idx.iter().map(|&i| defects[i]).collect(),
    })
}

/// Reduce an energy to the monodromy gauge branch (-hbar omega/2, hbar omega/2].
pub fn fold_quasienergy(e: f64, hbar: f64, omega: f64) -> f64 {
    let q = hbar * omega;
    let mut r = e.rem_euclid(q);
    if r > 0.5 * q {
        r -= q;
    }
    r
}
