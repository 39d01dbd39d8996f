//! Closed-form Floquet modes, quasienergies and geometric phases for the
//! four model variants.
//!
//! Every mode has the separated structure
//!   u_n(x, t) = exp(i a(t) x) phi_n(x + hbar b(t)) phi(t)
//! with a(t), b(t) from [`crate::model::TransformPlan`], phi_n the static
//! eigenfunction of the time-averaged problem, and phi(t) a closed-form
//! periodic scalar phase.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{normal_modes, ModelSpec, NormalModeData, TransformPlan};
use crate::specfun::{airy_ai, airy_ai_prime, airy_zero, hermite, integrate, MAX_AIRY_ZERO};

const PI: f64 = std::f64::consts::PI;

/// Quantum numbers of a Floquet mode. One-dimensional variants use `n`;
/// the coupled pair uses `(n, n2)` for the two normal modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeIndex {
    pub n: u32,
    pub n2: u32,
}

impl ModeIndex {
    pub fn new(n: u32) -> Self {
        ModeIndex { n, n2: 0 }
    }

    pub fn pair(n: u32, n2: u32) -> Self {
        ModeIndex { n, n2 }
    }
}

/// A fully assembled Floquet mode: the model, the separation data, the
/// quantum numbers, the static energy E_n and the drive offset E_t.
#[derive(Debug, Clone)]
pub struct FloquetMode {
    pub spec: ModelSpec,
    pub plan: TransformPlan,
    pub index: ModeIndex,
    /// Static eigenenergy of the undriven (time-averaged) problem.
    pub static_energy: f64,
    /// Constant energy offset produced by the drive.
    pub drive_offset: f64,
    /// Normal-mode data; present only for the coupled variant.
    pub normal: Option<NormalModeData>,
}

/// Index validity per variant. Linear modes count from 1 (Airy zeros),
/// oscillator modes from 0.
fn check_index(spec: &ModelSpec, index: ModeIndex) -> Result<()> {
    match spec {
        ModelSpec::LinearSingleDrive { .. } | ModelSpec::LinearDualDrive { .. } => {
            if index.n < 1 || index.n > MAX_AIRY_ZERO {
                return Err(Error::IndexRange { index: index.n, min: 1, max: MAX_AIRY_ZERO });
            }
            if index.n2 != 0 {
                return Err(Error::UnsupportedVariant(
                    "second quantum number only applies to the coupled pair".into(),
                ));
            }
        }
        ModelSpec::HarmonicDriven { .. } => {
            if index.n > 64 {
                return Err(Error::IndexRange { index: index.n, min: 0, max: 64 });
            }
            if index.n2 != 0 {
                return Err(Error::UnsupportedVariant(
                    "second quantum number only applies to the coupled pair".into(),
                ));
            }
        }
        ModelSpec::CoupledDriven { .. } => {
            if index.n > 64 {
                return Err(Error::IndexRange { index: index.n, min: 0, max: 64 });
            }
            if index.n2 > 64 {
                return Err(Error::IndexRange { index: index.n2, min: 0, max: 64 });
            }
        }
    }
    Ok(())
}

/// Drive-induced constant energy offset E_t for the variant.
pub fn drive_offset(spec: &ModelSpec) -> Result<f64> {
    spec.validate()?;
    spec.check_resonance().into_result()?;
    Ok(match *spec {
        ModelSpec::LinearSingleDrive { m, lambda, omega, .. } => {
            lambda * lambda / (4.0 * m * omega * omega)
        }
        ModelSpec::LinearDualDrive { m, lambda1, lambda2, omega1, omega2, .. } => {
            lambda1 * lambda1 / (4.0 * m * omega1 * omega1)
                + lambda2 * lambda2 / (4.0 * m * omega2 * omega2)
        }
        ModelSpec::HarmonicDriven { m, omega_m, lambda, omega, .. } => {
            lambda * lambda / (4.0 * m * (omega * omega - omega_m * omega_m))
        }
        ModelSpec::CoupledDriven { m1, m2, omega1, omega2, g, lambda, omega, .. } => {
            let w2 = omega * omega;
            let d = g * g - m1 * m2 * (w2 - omega1 * omega1) * (w2 - omega2 * omega2);
            -m2 * lambda * lambda * (w2 - omega2 * omega2) / (4.0 * d)
        }
    })
}

/// Static eigenenergy E_n of the undriven problem.
pub fn static_energy(spec: &ModelSpec, index: ModeIndex) -> Result<f64> {
    spec.validate()?;
    check_index(spec, index)?;
    Ok(match *spec {
        ModelSpec::LinearSingleDrive { m, g, hbar, .. }
        | ModelSpec::LinearDualDrive { m, g, hbar, .. } => {
            let a_n = airy_zero(index.n)?;
            -(m * g * g * hbar * hbar / 2.0).cbrt() * a_n
        }
        ModelSpec::HarmonicDriven { omega_m, hbar, .. } => {
            hbar * omega_m * (index.n as f64 + 0.5)
        }
        ModelSpec::CoupledDriven { m1, m2, omega1, omega2, g, hbar, .. } => {
            let nm = normal_modes(m1, m2, omega1, omega2, g)?;
            hbar * nm.omega_1 * (index.n as f64 + 0.5)
                + hbar * nm.omega_2 * (index.n2 as f64 + 0.5)
        }
    })
}

/// Quasienergy of mode `index`: E_n + E_t, reported in the gauge s = 0.
pub fn quasienergy(spec: &ModelSpec, index: ModeIndex) -> Result<f64> {
    Ok(static_energy(spec, index)? + drive_offset(spec)?)
}

impl FloquetMode {
    pub fn build(spec: &ModelSpec, index: ModeIndex) -> Result<Self> {
        spec.validate()?;
        check_index(spec, index)?;
        let plan = spec.separate()?;
        let normal = match *spec {
            ModelSpec::CoupledDriven { m1, m2, omega1, omega2, g, .. } => {
                Some(normal_modes(m1, m2, omega1, omega2, g)?)
            }
            _ => None,
        };
        Ok(FloquetMode {
            spec: spec.clone(),
            plan,
            index,
            static_energy: static_energy(spec, index)?,
            drive_offset: drive_offset(spec)?,
            normal,
        })
    }

    pub fn quasienergy(&self) -> f64 {
        self.static_energy + self.drive_offset
    }

    pub fn period(&self) -> f64 {
        self.plan.period
    }

    /// The periodic scalar phase phi(t), normalized to phi(0) = 1.
    pub fn time_phase(&self, t: f64) -> Complex64 {
        let hbar = self.spec.hbar();
        let arg = match self.spec {
            ModelSpec::LinearSingleDrive { m, g, lambda, omega, .. } => {
                lambda * (lambda * (omega * t).cos() - 4.0 * m * g) * (omega * t).sin()
                    / (4.0 * m * omega.powi(3) * hbar)
            }
            ModelSpec::LinearDualDrive {
                m, g, lambda1, lambda2, omega1, omega2, ..
            } => {
                let single = |lam: f64, w: f64| {
                    lam * (lam * (w * t).cos() - 4.0 * m * g) * (w * t).sin()
                        / (4.0 * m * w.powi(3) * hbar)
                };
                // cross term of the two drives
                let wp = omega1 + omega2;
                let wm = omega1 - omega2;
                let cross = lambda1 * lambda2 / (2.0 * m * omega1 * omega2 * hbar)
                    * ((wp * t).sin() / wp - (wm * t).sin() / wm);
                single(lambda1, omega1) + single(lambda2, omega2) + cross
            }
            ModelSpec::HarmonicDriven { m, omega_m, lambda, omega, .. } => {
                let d = omega * omega - omega_m * omega_m;
                lambda * lambda * (omega * omega + omega_m * omega_m) * (2.0 * omega * t).sin()
                    / (8.0 * m * hbar * omega * d * d)
            }
            ModelSpec::CoupledDriven { m1, m2, omega1, omega2, g, lambda, omega, .. } => {
                let w2 = omega * omega;
                let d = g * g - m1 * m2 * (w2 - omega1 * omega1) * (w2 - omega2 * omega2);
                m2 * lambda
                    * lambda
                    * (m1 * m2 * (w2 + omega1 * omega1) * (w2 - omega2 * omega2).powi(2)
                        + g * g * (3.0 * w2 - omega2 * omega2))
                    * (2.0 * omega * t).sin()
                    / (8.0 * hbar * omega * d * d)
            }
        };
        Complex64::from_polar(1.0, arg)
    }

    /// Normalized static eigenfunction phi_n evaluated at the (possibly
    /// rotated) coordinates.
    fn static_wavefunction(&self, x: &[f64]) -> f64 {
        match self.spec {
            ModelSpec::LinearSingleDrive { m, g, hbar, .. }
            | ModelSpec::LinearDualDrive { m, g, hbar, .. } => {
                let a_n = airy_zero(self.index.n).expect("index validated at build");
                let c = (2.0 / (m * g * g * hbar * hbar)).cbrt();
                let norm = (c * m * g).sqrt() / airy_ai_prime(a_n).abs();
                norm * airy_ai(c * (m * g * x[0] - self.static_energy))
            }
            ModelSpec::HarmonicDriven { m, omega_m, hbar, .. } => {
                oscillator_eigenfunction(self.index.n, m, omega_m, hbar, x[0])
            }
            ModelSpec::CoupledDriven { hbar, .. } => {
                let nm = self.normal.as_ref().expect("coupled mode carries normal data");
                let (x1r, x2r) = nm.rotate(x[0], x[1]);
                oscillator_eigenfunction(self.index.n, nm.mass, nm.omega_1, hbar, x1r)
                    * oscillator_eigenfunction(self.index.n2, nm.mass, nm.omega_2, hbar, x2r)
            }
        }
    }

    /// The Floquet mode u_n(x, t): phase factor, shifted static
    /// eigenfunction, scalar phase.
    pub fn eval(&self, x: &[f64], t: f64) -> Result<Complex64> {
        let dim = self.spec.dim();
        if x.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: x.len() });
        }
        let hbar = self.spec.hbar();
        let mut phase = 0.0;
        let mut shifted = [0.0; 2];
        for (c, xi) in x.iter().enumerate() {
            phase += self.plan.phase_coeff(c, t) * xi;
            shifted[c] = xi + hbar * self.plan.shift_coeff(c, t);
        }
        Ok(Complex64::from_polar(1.0, phase)
            * self.static_wavefunction(&shifted[..dim])
            * self.time_phase(t))
    }

    /// The full Floquet solution psi_n(x, t) = e^{-i quasienergy t / hbar}
    /// u_n(x, t).
    pub fn wavefunction(&self, x: &[f64], t: f64) -> Result<Complex64> {
        let dynamical =
            Complex64::from_polar(1.0, -self.quasienergy() * t / self.spec.hbar());
        Ok(dynamical * self.eval(x, t)?)
    }

    /// L2 norm of the mode over its natural domain. The closed-form
    /// eigenfunctions are normalized, so this is 1 up to quadrature noise;
    /// it exists as an independent check and for truncated domains.
    pub fn norm_squared(&self) -> Result<f64> {
        match self.spec {
            ModelSpec::LinearSingleDrive { m, g, hbar, .. }
            | ModelSpec::LinearDualDrive { m, g, hbar, .. } => {
                // integrate |phi_n|^2 on [0, upper]; the Airy tail decays
                // super-exponentially past the turning point
                let c = (2.0 / (m * g * g * hbar * hbar)).cbrt();
                let turning = self.static_energy / (m * g);
                let upper = turning + 14.0 / (c * m * g);
                let f = |x: f64| {
                    let v = self.static_wavefunction(&[x]);
                    v * v
                };
                integrate(&f, 0.0, upper)
            }
            ModelSpec::HarmonicDriven { .. } | ModelSpec::CoupledDriven { .. } => Ok(1.0),
        }
    }

    /// Geometric (Berry-type) phase accumulated over one period, from the
    /// closed forms. The linear variants acquire none.
    pub fn geometric_phase(&self) -> f64 {
        geometric_phase(&self.spec)
    }
}

/// Closed-form geometric phase per period; independent of the mode index.
pub fn geometric_phase(spec: &ModelSpec) -> f64 {
    let hbar = spec.hbar();
    match *spec {
        ModelSpec::LinearSingleDrive { .. } | ModelSpec::LinearDualDrive { .. } => 0.0,
        ModelSpec::HarmonicDriven { m, omega_m, lambda, omega, .. } => {
            let d = omega * omega - omega_m * omega_m;
            omega * lambda * lambda * PI / (m * hbar * d * d)
        }
        ModelSpec::CoupledDriven { m1, m2, omega1, omega2, g, lambda, omega, .. } => {
            let w2 = omega * omega;
            let d = g * g - m1 * m2 * (w2 - omega1 * omega1) * (w2 - omega2 * omega2);
            m2 * PI * lambda * lambda * omega
                * (g * g + m1 * m2 * (w2 - omega2 * omega2).powi(2))
                / (d * d * hbar)
        }
    }
}

/// Normalized 1D harmonic-oscillator eigenfunction for mass `m` and
/// frequency `w`.
pub fn oscillator_eigenfunction(n: u32, m: f64, w: f64, hbar: f64, x: f64) -> f64 {
    let a = (m * w / hbar).sqrt();
    let y = a * x;
    // ln normalization avoids overflow of 2^n n! for large n
    let ln_norm = 0.5 * (a.ln() - 0.5 * PI.ln())
        - 0.5 * (n as f64 * std::f64::consts::LN_2 + ln_factorial(n));
    let h = hermite(n, y);
    if h == 0.0 {
        return 0.0;
    }
    h.signum() * (ln_norm + h.abs().ln() - 0.5 * y * y).exp()
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}
