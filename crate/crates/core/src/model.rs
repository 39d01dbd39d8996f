//! The four driven-model variants, parameter validation, separation
//! coefficients (phase/shift transform data) and the normal-mode reduction
//! of the coupled pair.

use serde::{Deserialize, Serialize};

use crate::error::{Error, ResonanceDiagnostic, Result};

/// Relative threshold below which a separation denominator counts as
/// resonant.
pub const EPS_RESONANCE: f64 = 1e-9;

/// Largest p, q accepted when reducing a dual-drive frequency ratio.
pub const MAX_COMMENSURATE: u32 = 64;

/// A periodically driven model. All parameters are plain SI-consistent
/// numbers; shipped configs use hbar = m = 1 units but nothing here assumes
/// that.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum ModelSpec {
    /// p^2/2m + m g x + lambda x cos(omega t)
    LinearSingleDrive { m: f64, g: f64, lambda: f64, omega: f64, hbar: f64 },
    /// p^2/2m + m g x + x (lambda1 cos(omega1 t) + lambda2 cos(omega2 t))
    LinearDualDrive {
        m: f64,
        g: f64,
        lambda1: f64,
        lambda2: f64,
        omega1: f64,
        omega2: f64,
        hbar: f64,
    },
    /// p^2/2m + m omega_m^2 x^2 / 2 + lambda x cos(omega t)
    HarmonicDriven { m: f64, omega_m: f64, lambda: f64, omega: f64, hbar: f64 },
    /// two oscillators + g x1 x2 coupling, drive lambda x1 cos(omega t)
    CoupledDriven {
        m1: f64,
        m2: f64,
        omega1: f64,
        omega2: f64,
        g: f64,
        lambda: f64,
        omega: f64,
        hbar: f64,
    },
}

/// One drive's contribution to the separation transform: the mode picks up
/// a phase e^{i alpha sin(omega t) x} and an argument shift beta hbar
/// cos(omega t) on coordinate `coord`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveShift {
    pub coord: usize,
    pub alpha: f64,
    pub beta: f64,
    pub omega: f64,
}

/// Full separation data: all drive shifts plus the common period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformPlan {
    pub shifts: Vec<DriveShift>,
    pub period: f64,
}

impl TransformPlan {
    /// Phase coefficient a(t) on `coord`: sum of alpha sin(omega t).
    pub fn phase_coeff(&self, coord: usize, t: f64) -> f64 {
        self.shifts
            .iter()
            .filter(|s| s.coord == coord)
            .map(|s| s.alpha * (s.omega * t).sin())
            .sum()
    }

    /// Shift coefficient b(t) on `coord`: sum of beta cos(omega t). The
    /// spatial argument shift is hbar * b(t).
    pub fn shift_coeff(&self, coord: usize, t: f64) -> f64 {
        self.shifts
            .iter()
            .filter(|s| s.coord == coord)
            .map(|s| s.beta * (s.omega * t).cos())
            .sum()
    }
}

/// Normal-mode reduction of the coupled pair: rotation angle, mass-ratio
/// scale, common mass and the two decoupled frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalModeData {
    pub theta: f64,
    pub eta: f64,
    pub mass: f64,
    pub omega_1: f64,
    pub omega_2: f64,
}

impl NormalModeData {
    /// Lab coordinates -> rotated coordinates.
    pub fn rotate(&self, x1: f64, x2: f64) -> (f64, f64) {
        let (s, c) = self.theta.sin_cos();
        let big_x1 = self.eta * x1 * c - x2 / self.eta * s;
        let big_x2 = x2 / self.eta * c + self.eta * x1 * s;
        (big_x1, big_x2)
    }
}

/// Outcome of the resonance scan; `Resonant` carries the diagnostic rather
/// than an error so callers can report it.
#[derive(Debug, Clone, PartialEq)]
pub enum ResonanceCheck {
    Ok,
    Resonant(ResonanceDiagnostic),
}

impl ResonanceCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, ResonanceCheck::Ok)
    }

    pub fn into_result(self) -> Result<()> {
        match self {
            ResonanceCheck::Ok => Ok(()),
            ResonanceCheck::Resonant(d) => Err(Error::Resonance(d)),
        }
    }
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
    }
    Ok(())
}

fn require_finite(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")));
    }
    Ok(())
}

impl ModelSpec {
    /// Spatial dimensionality: 2 for the coupled pair, 1 otherwise.
    pub fn dim(&self) -> usize {
        match self {
            ModelSpec::CoupledDriven { .. } => 2,
            _ => 1,
        }
    }

    pub fn hbar(&self) -> f64 {
        match *self {
            ModelSpec::LinearSingleDrive { hbar, .. }
            | ModelSpec::LinearDualDrive { hbar, .. }
            | ModelSpec::HarmonicDriven { hbar, .. }
            | ModelSpec::CoupledDriven { hbar, .. } => hbar,
        }
    }

    /// Structural validation: positivity of masses, frequencies, hbar and
    /// (for the coupled pair) a stable normal-mode spectrum.
    pub fn validate(&self) -> Result<()> {
        match *self {
            ModelSpec::LinearSingleDrive { m, g, lambda, omega, hbar } => {
                require_positive("m", m)?;
                require_positive("g", g)?;
                require_positive("omega", omega)?;
                require_positive("hbar", hbar)?;
                require_finite("lambda", lambda)
            }
            ModelSpec::LinearDualDrive { m, g, lambda1, lambda2, omega1, omega2, hbar } => {
                require_positive("m", m)?;
                require_positive("g", g)?;
                require_positive("omega1", omega1)?;
                require_positive("omega2", omega2)?;
                require_positive("hbar", hbar)?;
                require_finite("lambda1", lambda1)?;
                require_finite("lambda2", lambda2)
            }
            ModelSpec::HarmonicDriven { m, omega_m, lambda, omega, hbar } => {
                require_positive("m", m)?;
                require_positive("omega_m", omega_m)?;
                require_positive("omega", omega)?;
                require_positive("hbar", hbar)?;
                require_finite("lambda", lambda)
            }
            ModelSpec::CoupledDriven { m1, m2, omega1, omega2, g, lambda, omega, hbar } => {
                require_positive("m1", m1)?;
                require_positive("m2", m2)?;
                require_positive("omega1", omega1)?;
                require_positive("omega2", omega2)?;
                require_positive("omega", omega)?;
                require_positive("hbar", hbar)?;
                require_finite("g", g)?;
                require_finite("lambda", lambda)?;
                normal_modes(m1, m2, omega1, omega2, g).map(|_| ())
            }
        }
    }

    /// Scans every separation denominator of the variant. The linear models
    /// only divide by powers of the drive frequency, so they are never
    /// resonant for omega > 0.
    pub fn check_resonance(&self) -> ResonanceCheck {
        match *self {
            ModelSpec::LinearSingleDrive { .. } | ModelSpec::LinearDualDrive { .. } => {
                ResonanceCheck::Ok
            }
            ModelSpec::HarmonicDriven { omega_m, omega, .. } => {
                let denom = omega_m * omega_m - omega * omega;
                let scale = omega_m * omega_m + omega * omega;
                if denom.abs() <= EPS_RESONANCE * scale {
                    ResonanceCheck::Resonant(ResonanceDiagnostic {
                        denominator: "omega_m^2 - omega^2".into(),
                        value: denom,
                        scale,
                    })
                } else {
                    ResonanceCheck::Ok
                }
            }
            ModelSpec::CoupledDriven { m1, m2, omega1, omega2, g, omega, .. } => {
                let w2 = omega * omega;
                let denom = g * g - m1 * m2 * (w2 - omega1 * omega1) * (w2 - omega2 * omega2);
                let scale = g * g + m1 * m2 * (w2 + omega1 * omega1) * (w2 + omega2 * omega2);
                if denom.abs() <= EPS_RESONANCE * scale {
                    ResonanceCheck::Resonant(ResonanceDiagnostic {
                        denominator: "g^2 - m1 m2 (omega^2-omega1^2)(omega^2-omega2^2)".into(),
                        value: denom,
                        scale,
                    })
                } else {
                    ResonanceCheck::Ok
                }
            }
        }
    }

    /// Computes the separation coefficients for the variant.
    pub fn separate(&self) -> Result<TransformPlan> {
        self.validate()?;
        self.check_resonance().into_result()?;
        match *self {
            ModelSpec::LinearSingleDrive { m, lambda, omega, hbar, .. } => Ok(TransformPlan {
                shifts: vec![DriveShift {
                    coord: 0,
                    alpha: -lambda / (hbar * omega),
                    beta: -lambda / (m * hbar * omega * omega),
                    omega,
                }],
                period: 2.0 * std::f64::consts::PI / omega,
            }),
            ModelSpec::LinearDualDrive { m, lambda1, lambda2, omega1, omega2, hbar, .. } => {
                let period = common_period(omega1, omega2)?;
                Ok(TransformPlan {
                    shifts: vec![
                        DriveShift {
                            coord: 0,
                            alpha: -lambda1 / (hbar * omega1),
                            beta: -lambda1 / (m * hbar * omega1 * omega1),
                            omega: omega1,
                        },
                        DriveShift {
                            coord: 0,
                            alpha: -lambda2 / (hbar * omega2),
                            beta: -lambda2 / (m * hbar * omega2 * omega2),
                            omega: omega2,
                        },
                    ],
                    period,
                })
            }
            ModelSpec::HarmonicDriven { m, omega_m, lambda, omega, hbar } => {
                let denom = omega_m * omega_m - omega * omega;
                Ok(TransformPlan {
                    shifts: vec![DriveShift {
                        coord: 0,
                        alpha: lambda * omega / (hbar * denom),
                        beta: lambda / (m * hbar * denom),
                        omega,
                    }],
                    period: 2.0 * std::f64::consts::PI / omega,
                })
            }
            ModelSpec::CoupledDriven { m1, m2, omega1, omega2, g, lambda, omega, hbar } => {
                let w2 = omega * omega;
                let denom = g * g - m1 * m2 * (w2 - omega1 * omega1) * (w2 - omega2 * omega2);
                Ok(TransformPlan {
                    shifts: vec![
                        DriveShift {
                            coord: 0,
                            alpha: m1 * m2 * lambda * omega * (w2 - omega2 * omega2)
                                / (denom * hbar),
                            beta: m2 * lambda * (w2 - omega2 * omega2) / (denom * hbar),
                            omega,
                        },
                        DriveShift {
                            coord: 1,
                            alpha: g * m2 * lambda * omega / (denom * hbar),
                            beta: g * lambda / (denom * hbar),
                            omega,
                        },
                    ],
                    period: 2.0 * std::f64::consts::PI / omega,
                })
            }
        }
    }
}

/// Common period of two drive frequencies: requires omega1/omega2 = p/q in
/// lowest terms with p, q <= 64; returns 2 pi q / omega2 (= 2 pi p / omega1).
pub fn common_period(omega1: f64, omega2: f64) -> Result<f64> {
    let err = || Error::Incommensurate { omega1, omega2, max_ratio: MAX_COMMENSURATE };
    if omega1 <= 0.0 || omega2 <= 0.0 {
        return Err(err());
    }
    // equal frequencies are excluded: the dual-drive phase has an
    // undefined sin((w1-w2)t)/(w1-w2) factor there
    if (omega1 - omega2).abs() <= 1e-9 * (omega1 + omega2) {
        return Err(Error::InvalidParameter(format!(
            "dual-drive frequencies must differ, got omega1 = {omega1}, omega2 = {omega2}"
        )));
    }
    let ratio = omega1 / omega2;
    for q in 1..=MAX_COMMENSURATE {
        let p = ratio * q as f64;
        let p_round = p.round();
        if p_round >= 1.0
            && p_round <= MAX_COMMENSURATE as f64
            && (p - p_round).abs() < 1e-9 * q as f64
        {
            return Ok(2.0 * std::f64::consts::PI * q as f64 / omega2);
        }
    }
    Err(err())
}

/// Normal-mode reduction of two bilinearly coupled oscillators.
///
/// theta = arctan(2g / (sqrt(m1 m2)(omega2^2 - omega1^2))) / 2, with the
/// equal-frequency limit pinned to +-pi/4 by the sign of g.
pub fn normal_modes(m1: f64, m2: f64, omega1: f64, omega2: f64, g: f64) -> Result<NormalModeData> {
    let mass = (m1 * m2).sqrt();
    let eta = (m1 / m2).powf(0.25);
    let freq_gap = omega2 * omega2 - omega1 * omega1;
    let theta = if g == 0.0 {
        0.0
    } else if freq_gap == 0.0 {
        std::f64::consts::FRAC_PI_4.copysign(g)
    } else {
        0.5 * (2.0 * g / (mass * freq_gap)).atan()
    };
    let (s2, c2) = (2.0 * theta).sin_cos();
    let half_sum = 0.5 * (omega1 * omega1 + omega2 * omega2);
    let half_gap = 0.5 * freq_gap;
    // Omega_i^2 = mean -+ (half_gap cos 2theta + (g/M) sin 2theta)
    let split = half_gap * c2 + g / mass * s2;
    let omega_1_sq = half_sum - split;
    let omega_2_sq = half_sum + split;
    if omega_1_sq <= 0.0 {
        return Err(Error::UnstableSpectrum { index: 1, value: omega_1_sq });
    }
    if omega_2_sq <= 0.0 {
        return Err(Error::UnstableSpectrum { index: 2, value: omega_2_sq });
    }
    Ok(NormalModeData {
        theta,
        eta,
        mass,
        omega_1: omega_1_sq.sqrt(),
        omega_2: omega_2_sq.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn harmonic_default() -> ModelSpec {
        ModelSpec::HarmonicDriven { m: 1.0, omega_m: 1.0, lambda: 0.5, omega: 2.0, hbar: 1.0 }
    }

    pub fn coupled_default() -> ModelSpec {
        ModelSpec::CoupledDriven {
            m1: 1.0,
            m2: 1.0,
            omega1: 1.0,
            omega2: 1.5,
            g: 0.3,
            lambda: 0.4,
            omega: 2.5,
            hbar: 1.0,
        }
    }

    #[test]
    fn harmonic_resonance_detected() {
        let spec =
            ModelSpec::HarmonicDriven { m: 1.0, omega_m: 1.0, lambda: 0.5, omega: 1.0, hbar: 1.0 };
        match spec.check_resonance() {
            ResonanceCheck::Resonant(d) => assert_eq!(d.value, 0.0),
            ResonanceCheck::Ok => panic!("omega = omega_m must be resonant"),
        }
    }

    #[test]
    fn linear_never_resonant() {
        for omega in [0.1, 1.0, 17.0] {
            let spec =
                ModelSpec::LinearSingleDrive { m: 1.0, g: 1.0, lambda: 0.4, omega, hbar: 1.0 };
            assert!(spec.check_resonance().is_ok());
        }
    }

    #[test]
    fn coupled_resonance_at_denominator_root() {
        // g^2 = m1 m2 (omega^2-omega1^2)(omega^2-omega2^2) = (9-1)(9-4) = 40
        let spec = ModelSpec::CoupledDriven {
            m1: 1.0,
            m2: 1.0,
            omega1: 1.0,
            omega2: 2.0,
            g: 40.0_f64.sqrt(),
            lambda: 0.1,
            omega: 3.0,
            hbar: 1.0,
        };
        match spec.check_resonance() {
            ResonanceCheck::Resonant(d) => assert!(d.value.abs() < 1e-9 * d.scale),
            ResonanceCheck::Ok => panic!("denominator root must be resonant"),
        }
    }

    #[test]
    fn linear_separation_coefficients() {
        let spec =
            ModelSpec::LinearSingleDrive { m: 1.0, g: 1.0, lambda: 0.4, omega: 3.0, hbar: 1.0 };
        let plan = spec.separate().unwrap();
        assert_eq!(plan.shifts.len(), 1);
        let s = plan.shifts[0];
        assert!((s.alpha - (-0.4 / 3.0)).abs() < 1e-15);
        assert!((s.beta - (-0.4 / 9.0)).abs() < 1e-15);
        assert!((plan.period - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-15);
        // A(0) = 0, B(0) = 1
        assert_eq!(plan.phase_coeff(0, 0.0), 0.0);
        assert!((plan.shift_coeff(0, 0.0) - s.beta).abs() < 1e-15);
    }

    #[test]
    fn harmonic_separation_coefficients() {
        let plan = harmonic_default().separate().unwrap();
        let s = plan.shifts[0];
        assert!((s.alpha - (-1.0 / 3.0)).abs() < 1e-15);
        assert!((s.beta - (-1.0 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn coupled_with_zero_coupling_matches_harmonic() {
        let coupled = ModelSpec::CoupledDriven {
            m1: 1.0,
            m2: 1.0,
            omega1: 1.0,
            omega2: 1.5,
            g: 0.0,
            lambda: 0.5,
            omega: 2.0,
            hbar: 1.0,
        };
        let plan = coupled.separate().unwrap();
        let harmonic = harmonic_default().separate().unwrap();
        assert!((plan.shifts[0].alpha - harmonic.shifts[0].alpha).abs() < 1e-14);
        assert!((plan.shifts[0].beta - harmonic.shifts[0].beta).abs() < 1e-14);
        assert_eq!(plan.shifts[1].alpha, 0.0);
        assert_eq!(plan.shifts[1].beta, 0.0);
    }

    #[test]
    fn dual_drive_common_period() {
        let spec = ModelSpec::LinearDualDrive {
            m: 1.0,
            g: 1.0,
            lambda1: 0.3,
            lambda2: 0.3,
            omega1: 2.0,
            omega2: 3.0,
            hbar: 1.0,
        };
        let plan = spec.separate().unwrap();
        assert!((plan.period - 2.0 * std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(plan.shifts.len(), 2);
    }

    #[test]
    fn incommensurate_dual_drive_rejected() {
        assert!(common_period(1.0, std::f64::consts::SQRT_2).is_err());
        // equal frequencies excluded
        assert!(common_period(2.0, 2.0).is_err());
    }

    /// Separation conditions from the transformed Floquet Hamiltonian:
    /// drive + hbar da/dt - (stiffness) hbar b = 0 per coordinate and
    /// a/m + db/dt = 0 per drive entry, at random times.
    #[test]
    fn coefficient_matching_residuals() {
        let mut rng_state = 0x2545F4914F6CDD1Du64;
        let mut rand01 = move || {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            (rng_state >> 11) as f64 / (1u64 << 53) as f64
        };

        let specs = vec![
            ModelSpec::LinearSingleDrive { m: 1.3, g: 0.8, lambda: 0.4, omega: 3.0, hbar: 0.9 },
            ModelSpec::LinearDualDrive {
                m: 1.0,
                g: 1.0,
                lambda1: 0.3,
                lambda2: 0.7,
                omega1: 2.0,
                omega2: 3.0,
                hbar: 1.0,
            },
            harmonic_default(),
            coupled_default(),
        ];

        for spec in specs {
            let hbar = spec.hbar();
            let plan = spec.separate().unwrap();
            let eps = 1e-6;
            for _ in 0..100 {
                let t = rand01() * plan.period;
                for coord in 0..spec.dim() {
                    let da = (plan.phase_coeff(coord, t + eps) - plan.phase_coeff(coord, t - eps))
                        / (2.0 * eps);
                    let db = (plan.shift_coeff(coord, t + eps) - plan.shift_coeff(coord, t - eps))
                        / (2.0 * eps);
                    let b = plan.shift_coeff(coord, t);
                    let a = plan.phase_coeff(coord, t);
                    // x-coefficient: drive + hbar da/dt - stiffness terms
                    let (drive, stiffness) = match spec {
                        ModelSpec::LinearSingleDrive { lambda, omega, .. } => {
                            (lambda * (omega * t).cos(), 0.0)
                        }
                        ModelSpec::LinearDualDrive {
                            lambda1, lambda2, omega1, omega2, ..
                        } => (
                            lambda1 * (omega1 * t).cos() + lambda2 * (omega2 * t).cos(),
                            0.0,
                        ),
                        ModelSpec::HarmonicDriven { m, omega_m, lambda, omega, .. } => (
                            lambda * (omega * t).cos(),
                            m * omega_m * omega_m * hbar * b,
                        ),
                        ModelSpec::CoupledDriven {
                            m1, m2, omega1, omega2, g, lambda, omega, ..
                        } => {
                            let other = plan.shift_coeff(1 - coord, t);
                            let (mass, freq, drv) = if coord == 0 {
                                (m1, omega1, lambda * (omega * t).cos())
                            } else {
                                (m2, omega2, 0.0)
                            };
                            (drv, mass * freq * freq * hbar * b + g * hbar * other)
                        }
                    };
                    let cx = drive + hbar * da - stiffness;
                    assert!(cx.abs() < 1e-6, "x-residual {cx:e} for {spec:?} at t={t}");
                    // p-coefficient
                    let mass = match spec {
                        ModelSpec::LinearSingleDrive { m, .. }
                        | ModelSpec::LinearDualDrive { m, .. }
                        | ModelSpec::HarmonicDriven { m, .. } => m,
                        ModelSpec::CoupledDriven { m1, m2, .. } => {
                            if coord == 0 {
                                m1
                            } else {
                                m2
                            }
                        }
                    };
                    let cp = a / mass + db;
                    assert!(cp.abs() < 1e-6, "p-residual {cp:e} for {spec:?} at t={t}");
                }
            }
        }
    }

    /// Exact (analytic derivative) version of the matching conditions, to
    /// the 1e-12 the closed forms promise.
    #[test]
    fn coefficient_matching_exact() {
        let spec = coupled_default();
        let (m1, m2, o1, o2, g, lambda, omega, hbar) = match spec {
            ModelSpec::CoupledDriven { m1, m2, omega1, omega2, g, lambda, omega, hbar } => {
                (m1, m2, omega1, omega2, g, lambda, omega, hbar)
            }
            _ => unreachable!(),
        };
        let plan = spec.separate().unwrap();
        let (a1, b1) = (plan.shifts[0].alpha, plan.shifts[0].beta);
        let (a2, b2) = (plan.shifts[1].alpha, plan.shifts[1].beta);
        // cos(omega t) coefficients of the two x-conditions
        let c1 = lambda + a1 * hbar * omega - m1 * o1 * o1 * hbar * b1 - g * hbar * b2;
        let c2 = a2 * hbar * omega - m2 * o2 * o2 * hbar * b2 - g * hbar * b1;
        assert!(c1.abs() < 1e-12 * lambda.abs());
        assert!(c2.abs() < 1e-12 * lambda.abs());
        // p-conditions
        assert!((a1 / m1 - omega * b1).abs() < 1e-12);
        assert!((a2 / m2 - omega * b2).abs() < 1e-12);
    }

    #[test]
    fn lambda_sign_flip_flips_coefficients() {
        for lambda in [0.2, 0.9] {
            let plus =
                ModelSpec::HarmonicDriven { m: 1.0, omega_m: 1.0, lambda, omega: 2.0, hbar: 1.0 }
                    .separate()
                    .unwrap();
            let minus = ModelSpec::HarmonicDriven {
                m: 1.0,
                omega_m: 1.0,
                lambda: -lambda,
                omega: 2.0,
                hbar: 1.0,
            }
            .separate()
            .unwrap();
            assert_eq!(plus.shifts[0].alpha, -minus.shifts[0].alpha);
            assert_eq!(plus.shifts[0].beta, -minus.shifts[0].beta);
        }
    }

    #[test]
    fn normal_modes_decoupled_limit() {
        let nm = normal_modes(1.0, 1.0, 1.0, 2.0, 0.0).unwrap();
        assert_eq!(nm.theta, 0.0);
        assert!((nm.omega_1 - 1.0).abs() < 1e-15);
        assert!((nm.omega_2 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn normal_modes_degenerate_frequencies() {
        let nm = normal_modes(1.0, 1.0, 1.0, 1.0, 0.2).unwrap();
        assert!((nm.theta - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!((nm.omega_1 - 0.8_f64.sqrt()).abs() < 1e-12);
        assert!((nm.omega_2 - 1.2_f64.sqrt()).abs() < 1e-12);
        let nm_neg = normal_modes(1.0, 1.0, 1.0, 1.0, -0.2).unwrap();
        assert!((nm_neg.theta + std::f64::consts::FRAC_PI_4).abs() < 1e-15);
    }

    /// Closed-form 2x2 eigenvalue oracle for the mass-weighted stiffness
    /// matrix [[o1^2, g/M], [g/M, o2^2]].
    fn stiffness_eigenvalues(m1: f64, m2: f64, o1: f64, o2: f64, g: f64) -> (f64, f64) {
        let gm = g / (m1 * m2).sqrt();
        let tr = o1 * o1 + o2 * o2;
        let det = o1 * o1 * o2 * o2 - gm * gm;
        let disc = (tr * tr / 4.0 - det).sqrt();
        (tr / 2.0 - disc, tr / 2.0 + disc)
    }

    #[test]
    fn normal_modes_match_eigen_oracle() {
        for (m1, m2, o1, o2, g) in [
            (1.0, 4.0, 1.0, 2.0, 0.5),
            (1.0, 1.0, 1.0, 1.5, 0.3),
            (2.0, 3.0, 0.7, 1.1, -0.4),
        ] {
            let nm = normal_modes(m1, m2, o1, o2, g).unwrap();
            let (lo, hi) = stiffness_eigenvalues(m1, m2, o1, o2, g);
            let (w1s, w2s) = (nm.omega_1 * nm.omega_1, nm.omega_2 * nm.omega_2);
            let got_lo = w1s.min(w2s);
            let got_hi = w1s.max(w2s);
            assert!((got_lo - lo).abs() < 1e-10, "low eigenvalue: {got_lo} vs {lo}");
            assert!((got_hi - hi).abs() < 1e-10, "high eigenvalue: {got_hi} vs {hi}");
            // trace and determinant identities, relative 1e-12
            let tr = o1 * o1 + o2 * o2;
            let det = o1 * o1 * o2 * o2 - g * g / (m1 * m2);
            assert!((w1s + w2s - tr).abs() < 1e-12 * tr.abs());
            assert!((w1s * w2s - det).abs() < 1e-12 * det.abs());
        }
    }

    #[test]
    fn unstable_spectrum_rejected() {
        // strong coupling drives the lower normal mode negative
        let res = normal_modes(1.0, 1.0, 1.0, 1.0, 2.0);
        assert!(matches!(res, Err(Error::UnstableSpectrum { index: 1, .. })));
    }

    #[test]
    fn example_eigenvalues() {
        let nm = normal_modes(1.0, 4.0, 1.0, 2.0, 0.5).unwrap();
        let (lo, hi) = stiffness_eigenvalues(1.0, 4.0, 1.0, 2.0, 0.5);
        assert!((nm.omega_1 * nm.omega_1 - lo).abs() < 1e-10);
        assert!((nm.omega_2 * nm.omega_2 - hi).abs() < 1e-10);
        // frozen from the closed-form oracle
        assert!((lo - 0.9793093674254451).abs() < 1e-12);
        assert!((hi - 4.020690632574555).abs() < 1e-12);
    }
}
