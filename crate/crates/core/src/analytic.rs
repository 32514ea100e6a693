//! Idealized oscillator-type eigenstates and their closed-form
//! number-operator matrix elements.
//!
//! Elements are reported as a modulus and a symbolic phase. Off-diagonal
//! moduli are √(m_eff Ω τ̄ / 2) with τ̄ = max(τ, τ'), times 2 for n̂_2 in E1.

#![allow(clippy::too_many_arguments)]

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::dynrep::{ChartDensity, Label, TorusGrid, Transversal};
use crate::model::Site;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseTag {
    Zero,
    PlusReal,
    MinusReal,
    PlusImag,
    MinusImag,
}

impl PhaseTag {
    /// ξ in radians (π for a negative real value).
    pub fn angle(self) -> f64 {
        match self {
            PhaseTag::Zero | PhaseTag::PlusReal => 0.0,
            PhaseTag::MinusReal => PI,
            PhaseTag::PlusImag => PI / 2.0,
            PhaseTag::MinusImag => -PI / 2.0,
        }
    }

    pub fn unit(self) -> Complex64 {
        match self {
            PhaseTag::Zero => Complex64::new(0.0, 0.0),
            PhaseTag::PlusReal => Complex64::new(1.0, 0.0),
            PhaseTag::MinusReal => Complex64::new(-1.0, 0.0),
            PhaseTag::PlusImag => Complex64::new(0.0, 1.0),
            PhaseTag::MinusImag => Complex64::new(0.0, -1.0),
        }
    }
}

impl fmt::Display for PhaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseTag::Zero => "0",
            PhaseTag::PlusReal => "+1",
            PhaseTag::MinusReal => "-1",
            PhaseTag::PlusImag => "+i",
            PhaseTag::MinusImag => "-i",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixElementResult {
    pub modulus: f64,
    pub phase: PhaseTag,
}

impl MatrixElementResult {
    pub const ZERO: MatrixElementResult = MatrixElementResult { modulus: 0.0, phase: PhaseTag::Zero };

    pub fn real(x: f64) -> Self {
        Self::tagged(x, PhaseTag::PlusReal, PhaseTag::MinusReal)
    }

    pub fn imag(y: f64) -> Self {
        Self::tagged(y, PhaseTag::PlusImag, PhaseTag::MinusImag)
    }

    fn tagged(x: f64, plus: PhaseTag, minus: PhaseTag) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else if x > 0.0 {
            MatrixElementResult { modulus: x, phase: plus }
        } else {
            MatrixElementResult { modulus: -x, phase: minus }
        }
    }

    pub fn value(&self) -> Complex64 {
        self.phase.unit() * self.modulus
    }
}

fn check_oscillator(m_eff: f64, omega: f64) -> Result<()> {
    if !(m_eff > 0.0 && m_eff.is_finite() && omega > 0.0 && omega.is_finite()) {
        return Err(Error::arg(format!("m_eff and omega must be positive and finite, got {m_eff}, {omega}")));
    }
    Ok(())
}

/// sgn(b − a) as ±1.
fn step_sign(a: u32, b: u32) -> f64 {
    if b > a {
        1.0
    } else {
        -1.0
    }
}

fn ladder_modulus(m_eff: f64, omega: f64, tau_p: u32, tau: u32) -> f64 {
    (m_eff * omega * tau_p.max(tau) as f64 / 2.0).sqrt()
}

/// ⟨τd', τa'|n̂_k|τd, τa⟩ for type E1.
pub fn ideal_element_e1(
    tau_d_p: u32,
    tau_a_p: u32,
    tau_d: u32,
    tau_a: u32,
    site: Site,
    m_eff: f64,
    omega_d: f64,
    n: u32,
) -> Result<MatrixElementResult> {
    check_oscillator(m_eff, omega_d)?;
    if tau_a_p != tau_a {
        return Err(Error::Unsupported(format!(
            "E1 elements with changing antisymmetric number ({tau_a} -> {tau_a_p})"
        )));
    }
    if tau_d_p == tau_d {
        return Ok(MatrixElementResult::real(n as f64 / 3.0));
    }
    if tau_d_p.abs_diff(tau_d) > 1 {
        return Ok(MatrixElementResult::ZERO);
    }
    let amp = step_sign(tau_d, tau_d_p) * ladder_modulus(m_eff, omega_d, tau_d_p, tau_d);
    Ok(match site {
        Site::One | Site::Three => MatrixElementResult::imag(amp),
        Site::Two => MatrixElementResult::imag(-2.0 * amp),
    })
}

/// ⟨λ', τ'|n̂_k|λ, τ⟩ for type C (site 3 decoupled, sites 1 and 2 entangled
/// with occupation split `alpha` = (α1, α2)).
pub fn ideal_element_c(
    lambda_p: u32,
    tau_p: u32,
    lambda: u32,
    tau: u32,
    site: Site,
    alpha: [u32; 2],
    m_eff: f64,
    omega: f64,
) -> Result<MatrixElementResult> {
    check_oscillator(m_eff, omega)?;
    if lambda_p != lambda || tau_p.abs_diff(tau) > 1 {
        return Ok(MatrixElementResult::ZERO);
    }
    let diagonal = tau_p == tau;
    Ok(match site {
        Site::Three => {
            if diagonal {
                MatrixElementResult::real(lambda as f64)
            } else {
                MatrixElementResult::ZERO
            }
        }
        Site::One | Site::Two => {
            if diagonal {
                MatrixElementResult::real(alpha[site.index()] as f64)
            } else {
                let r_sign = if site == Site::One { -1.0 } else { 1.0 };
                // sgn(τ − τ')
                let s = step_sign(tau_p, tau);
                MatrixElementResult::real(r_sign * s * ladder_modulus(m_eff, omega, tau_p, tau))
            }
        }
    })
}

/// Type B: site 1 decoupled, sites 2 and 3 entangled with split
/// `alpha` = (α2, α3). Mirror image of [`ideal_element_c`] under 1 ↔ 3.
pub fn ideal_element_b(
    lambda_p: u32,
    tau_p: u32,
    lambda: u32,
    tau: u32,
    site: Site,
    alpha: [u32; 2],
    m_eff: f64,
    omega: f64,
) -> Result<MatrixElementResult> {
    let mirrored = match site {
        Site::One => Site::Three,
        Site::Two => Site::Two,
        Site::Three => Site::One,
    };
    ideal_element_c(lambda_p, tau_p, lambda, tau, mirrored, [alpha[1], alpha[0]], m_eff, omega)
}

/// ⟨λ', τ'|n̂_k|λ, τ⟩ for type D (sites 1 and 3 phase locked, λ particles
/// between them).
pub fn ideal_element_d(
    lambda_p: u32,
    tau_p: u32,
    lambda: u32,
    tau: u32,
    site: Site,
    m_eff: f64,
    omega: f64,
    n: u32,
) -> Result<MatrixElementResult> {
    check_oscillator(m_eff, omega)?;
    if lambda > n || lambda_p > n {
        return Err(Error::arg(format!("lambda exceeds particle number {n}")));
    }
    if lambda_p != lambda || tau_p.abs_diff(tau) > 1 {
        return Ok(MatrixElementResult::ZERO);
    }
    let diagonal = tau_p == tau;
    Ok(match site {
        Site::Two => {
            if diagonal {
                MatrixElementResult::real((n - lambda) as f64)
            } else {
                MatrixElementResult::ZERO
            }
        }
        Site::One | Site::Three => {
            if diagonal {
                MatrixElementResult::real(lambda as f64 / 2.0)
            } else {
                let r = site.number() as f64;
                let amp = (2.0 - r) * step_sign(tau, tau_p) * ladder_modulus(m_eff, omega, tau_p, tau);
                MatrixElementResult::imag(amp)
            }
        }
    })
}

/// Half peak-to-peak amplitude 2|c_a||c_b||M| of the oscillating term.
pub fn predicted_amplitude(elem: &MatrixElementResult, mag_a: f64, mag_b: f64) -> f64 {
    2.0 * mag_a * mag_b * elem.modulus
}

/// Normalised Hermite function χ_τ with length scale (m_eff Ω)^{-1/2}.
pub fn oscillator_eigenfunction(tau: u32, m_eff: f64, omega: f64, x: f64) -> f64 {
    let mo = m_eff * omega;
    let xi = mo.sqrt() * x;
    let psi0 = (mo / PI).powf(0.25) * (-0.5 * xi * xi).exp();
    if tau == 0 {
        return psi0;
    }
    let mut prev = psi0;
    let mut cur = std::f64::consts::SQRT_2 * xi * psi0;
    for k in 1..tau {
        let k = k as f64;
        let next = (2.0 / (k + 1.0)).sqrt() * xi * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Parameters of an idealized eigenstate, used to synthesise its density on
/// the chart.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealizedState {
    pub label: Label,
    /// (λ, τ) for B/C/D, (τ_d, τ_a) for E1.
    pub quantum_numbers: (u32, u32),
    pub m_eff: f64,
    pub omega: f64,
    /// Antisymmetric-mode parameters for E1.
    pub m_eff_a: Option<f64>,
    pub omega_a: Option<f64>,
    pub alpha: Option<[u32; 2]>,
    pub n: u32,
}

impl IdealizedState {
    pub fn validate(&self) -> Result<()> {
        check_oscillator(self.m_eff, self.omega)?;
        match self.label {
            Label::B | Label::C | Label::D => {
                if self.quantum_numbers.0 > self.n {
                    return Err(Error::arg(format!("lambda {} exceeds N = {}", self.quantum_numbers.0, self.n)));
                }
            }
            Label::E1 => {
                check_oscillator(self.m_eff_a.unwrap_or(self.m_eff), self.omega_a.unwrap_or(self.omega))?;
            }
            other => return Err(Error::Unsupported(format!("no idealized form for type {other}"))),
        }
        Ok(())
    }

    /// RMS width √((2τ+1)/(m_eff Ω)) of the transversal profile.
    pub fn width(&self) -> f64 {
        let tau = match self.label {
            Label::E1 => self.quantum_numbers.0,
            _ => self.quantum_numbers.1,
        };
        ((2 * tau + 1) as f64 / (self.m_eff * self.omega)).sqrt()
    }

    /// |Φ|² on the chart, truncated to [−π, π) and normalised by quadrature.
    pub fn density(&self, grid: TorusGrid) -> Result<ChartDensity> {
        self.validate()?;
        let w = self.width();
        if w > PI / 3.0 {
            log::warn!("idealized state width {w:.3} is not small against pi; truncation is significant");
        }
        let (q1, q2) = self.quantum_numbers;
        let profile: Box<dyn Fn(f64, f64) -> f64> = match self.label {
            Label::C => self.single(q2, Transversal::Phi12),
            Label::B => self.single(q2, Transversal::Phi32),
            Label::D => self.single(q2, Transversal::Antisymmetric),
            _ => {
                let (m, o) = (self.m_eff, self.omega);
                let (ma, oa) = (self.m_eff_a.unwrap_or(m), self.omega_a.unwrap_or(o));
                Box::new(move |u, v| {
                    let xd = crate::dynrep::wrap_angle(Transversal::Diagonal.at(u, v));
                    let xa = crate::dynrep::wrap_angle(Transversal::Antisymmetric.at(u, v));
                    oscillator_eigenfunction(q1, m, o, xd) * oscillator_eigenfunction(q2, ma, oa, xa)
                })
            }
        };
        let mut d = ChartDensity::from_fn(grid, |u, v| profile(u, v).powi(2));
        let total = d.integral();
        d.values.iter_mut().for_each(|x| *x /= total);
        Ok(d)
    }

    fn single(&self, tau: u32, coord: Transversal) -> Box<dyn Fn(f64, f64) -> f64> {
        let (m, o) = (self.m_eff, self.omega);
        Box::new(move |u, v| oscillator_eigenfunction(tau, m, o, crate::dynrep::wrap_angle(coord.at(u, v))))
    }

    /// ⟨other|n̂_k|self⟩ between idealized states of the same type.
    pub fn element(&self, other: &IdealizedState, site: Site) -> Result<MatrixElementResult> {
        if other.label != self.label {
            return Ok(MatrixElementResult::ZERO);
        }
        let (p1, p2) = other.quantum_numbers;
        let (q1, q2) = self.quantum_numbers;
        let alpha = self.alpha.unwrap_or([0, 0]);
        match self.label {
            Label::C => ideal_element_c(p1, p2, q1, q2, site, alpha, self.m_eff, self.omega),
            Label::B => ideal_element_b(p1, p2, q1, q2, site, alpha, self.m_eff, self.omega),
            Label::D => ideal_element_d(p1, p2, q1, q2, site, self.m_eff, self.omega, self.n),
            Label::E1 => ideal_element_e1(p1, p2, q1, q2, site, self.m_eff, self.omega, self.n),
            other => Err(Error::Unsupported(format!("no idealized form for type {other}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moduli(f: impl Fn(Site) -> MatrixElementResult) -> [f64; 3] {
        Site::ALL.map(|s| f(s).modulus)
    }

    #[test]
    fn e1_diagonal_and_selection() {
        for s in Site::ALL {
            let e = ideal_element_e1(2, 1, 2, 1, s, 0.7, 1.8, 30).unwrap();
            assert_eq!(e.modulus, 10.0);
            assert_eq!(e.phase, PhaseTag::PlusReal);
            assert_eq!(ideal_element_e1(3, 0, 1, 0, s, 0.7, 1.8, 30).unwrap(), MatrixElementResult::ZERO);
        }
        assert!(matches!(ideal_element_e1(1, 1, 0, 0, Site::One, 0.7, 1.8, 30), Err(Error::Unsupported(_))));
    }

    #[test]
    fn e1_step_up() {
        let m = moduli(|s| ideal_element_e1(1, 0, 0, 0, s, 0.7, 1.8, 30).unwrap());
        assert!((m[0] - 0.63f64.sqrt()).abs() < 1e-14);
        assert!((m[1] - 2.0 * 0.63f64.sqrt()).abs() < 1e-14);
        assert_eq!(m[0], m[2]);
        let k1 = ideal_element_e1(1, 0, 0, 0, Site::One, 0.7, 1.8, 30).unwrap();
        let k2 = ideal_element_e1(1, 0, 0, 0, Site::Two, 0.7, 1.8, 30).unwrap();
        assert_eq!(k1.phase, PhaseTag::PlusImag);
        assert_eq!(k2.phase, PhaseTag::MinusImag);
        let down = ideal_element_e1(0, 0, 1, 0, Site::One, 0.7, 1.8, 30).unwrap();
        assert_eq!(down.phase, PhaseTag::MinusImag);
    }

    #[test]
    fn c_elements() {
        let e = ideal_element_c(24, 3, 24, 3, Site::Three, [3, 3], 1.8, 0.3).unwrap();
        assert_eq!(e.modulus, 24.0);
        let e = ideal_element_c(24, 3, 24, 3, Site::One, [2, 4], 1.8, 0.3).unwrap();
        assert_eq!(e.modulus, 2.0);
        let k1 = ideal_element_c(0, 4, 0, 3, Site::One, [15, 15], 2.1, 1.8).unwrap();
        let k2 = ideal_element_c(0, 4, 0, 3, Site::Two, [15, 15], 2.1, 1.8).unwrap();
        assert!((k1.modulus - 7.56f64.sqrt()).abs() < 1e-14);
        assert_eq!(k1.modulus, k2.modulus);
        assert_eq!(k1.value() + k2.value(), Complex64::new(0.0, 0.0));
        assert_eq!(ideal_element_c(1, 4, 0, 3, Site::One, [15, 15], 2.1, 1.8).unwrap(), MatrixElementResult::ZERO);
        assert_eq!(ideal_element_c(0, 5, 0, 3, Site::Two, [15, 15], 2.1, 1.8).unwrap(), MatrixElementResult::ZERO);
    }

    #[test]
    fn b_mirrors_c() {
        for (b, c) in [(Site::One, Site::Three), (Site::Two, Site::Two), (Site::Three, Site::One)] {
            for (tp, t) in [(2, 2), (3, 2), (2, 3)] {
                let eb = ideal_element_b(7, tp, 7, t, b, [10, 13], 1.1, 0.9).unwrap();
                let ec = ideal_element_c(7, tp, 7, t, c, [13, 10], 1.1, 0.9).unwrap();
                assert_eq!(eb, ec);
            }
        }
        assert_eq!(ideal_element_b(7, 2, 7, 2, Site::One, [10, 13], 1.1, 0.9).unwrap().modulus, 7.0);
    }

    #[test]
    fn d_elements() {
        let e = ideal_element_d(4, 1, 4, 1, Site::Two, 0.7, 0.6, 30).unwrap();
        assert_eq!(e.modulus, 26.0);
        let k1 = ideal_element_d(4, 1, 4, 0, Site::One, 0.7, 0.6, 30).unwrap();
        let k3 = ideal_element_d(4, 1, 4, 0, Site::Three, 0.7, 0.6, 30).unwrap();
        assert!((k1.modulus - 0.21f64.sqrt()).abs() < 1e-14);
        assert_eq!(k1.phase, PhaseTag::PlusImag);
        assert_eq!(k3.phase, PhaseTag::MinusImag);
        let k2 = ideal_element_d(4, 1, 4, 0, Site::Two, 0.7, 0.6, 30).unwrap();
        assert_eq!(k2, MatrixElementResult::ZERO);
        assert!(ideal_element_d(31, 0, 31, 0, Site::Two, 0.7, 0.6, 30).is_err());
    }

    #[test]
    fn amplitude() {
        let m = MatrixElementResult::real(2.0);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((predicted_amplitude(&m, s, s) - 2.0).abs() < 1e-15);
        assert_eq!(predicted_amplitude(&m, 1.0, 0.0), 0.0);
    }

    #[test]
    fn eigenfunction_values() {
        let v = oscillator_eigenfunction(0, 2.0, 0.5, 0.0);
        assert!((v - (1.0 / PI).powf(0.25)).abs() < 1e-15);
        for tau in [1, 3, 5] {
            assert!(oscillator_eigenfunction(tau, 1.3, 0.8, 0.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_oscillator() {
        assert!(ideal_element_c(0, 0, 0, 0, Site::One, [1, 1], -1.0, 1.0).is_err());
        assert!(ideal_element_d(0, 0, 0, 0, Site::One, 1.0, f64::NAN, 3).is_err());
    }
}
