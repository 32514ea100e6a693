//! Effective oscillator parameters of a ladder family.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::field::ChartDensity;
use crate::{Error, Result};

/// Relative-phase combination along which a family is oscillator-localised,
/// written as x = a·u + b·v on the chart (u = φ1 − φ3, v = φ2 − φ3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transversal {
    /// φ1 − φ2 (type C).
    Phi12,
    /// φ3 − φ2 (type B).
    Phi32,
    /// x_a = φ1 − φ3 (type D and the E1 antisymmetric mode).
    Antisymmetric,
    /// x_d = φ1 + φ3 − 2φ2 (E1 diagonal mode).
    Diagonal,
}

impl Transversal {
    pub fn chart_coefficients(self) -> (i32, i32) {
        match self {
            Transversal::Phi12 => (1, -1),
            Transversal::Phi32 => (0, -1),
            Transversal::Antisymmetric => (1, 0),
            Transversal::Diagonal => (1, -2),
        }
    }

    pub fn at(self, u: f64, v: f64) -> f64 {
        let (a, b) = self.chart_coefficients();
        a as f64 * u + b as f64 * v
    }
}

/// Wraps an angle into [−π, π).
pub fn wrap_angle(x: f64) -> f64 {
    (x + PI).rem_euclid(TAU) - PI
}

/// Circular centre and second moment of `density` along `coord`.
///
/// The centre is arg ⟨e^{ix}⟩; distances are wrapped into [−π, π) around it.
pub fn transversal_moment(density: &ChartDensity, coord: Transversal) -> (f64, f64) {
    let pts = density.grid.points();
    let mut total = 0.0;
    let mut z = Complex64::new(0.0, 0.0);
    for (iu, &u) in pts.iter().enumerate() {
        for (iv, &v) in pts.iter().enumerate() {
            let rho = density.at(iu, iv);
            total += rho;
            z += Complex64::from_polar(rho, coord.at(u, v));
        }
    }
    let centre = z.arg();
    let mut second = 0.0;
    for (iu, &u) in pts.iter().enumerate() {
        for (iv, &v) in pts.iter().enumerate() {
            let d = wrap_angle(coord.at(u, v) - centre);
            second += density.at(iu, iv) * d * d;
        }
    }
    (centre, second / total)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorFit {
    pub m_eff: f64,
    pub omega: f64,
    /// Ladder level whose density fixed the width.
    pub tau: u32,
    pub second_moment: f64,
}

impl OscillatorFit {
    /// m_eff·Ω, the only combination entering the idealized amplitudes.
    pub fn stiffness(&self) -> f64 {
        self.m_eff * self.omega
    }
}

/// m_eff from ⟨x²⟩_τ = (2τ+1)/(2 m_eff Ω).
pub fn fit_from_moment(tau: u32, omega: f64, second_moment: f64) -> Result<OscillatorFit> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InsufficientData(format!("level spacing {omega} is not positive")));
    }
    if !(second_moment > 0.0 && second_moment.is_finite()) {
        return Err(Error::InsufficientData(format!(
            "transversal second moment {second_moment} is not positive"
        )));
    }
    let m_eff = (2.0 * tau as f64 + 1.0) / (2.0 * omega * second_moment);
    Ok(OscillatorFit { m_eff, omega, tau, second_moment })
}

/// Fit from energies of levels τ and τ+1 and the density of level τ.
pub fn fit_from_density(
    density: &ChartDensity,
    coord: Transversal,
    tau: u32,
    energy_tau: f64,
    energy_next: f64,
) -> Result<OscillatorFit> {
    let (_, x2) = transversal_moment(density, coord);
    fit_from_moment(tau, energy_next - energy_tau, x2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynrep::field::TorusGrid;

    #[test]
    fn wrap() {
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
        assert!((wrap_angle(-PI) + PI).abs() < 1e-15);
        assert!((wrap_angle(PI) + PI).abs() < 1e-15);
    }

    #[test]
    fn wrapped_gaussian_centre() {
        let grid = TorusGrid::new(128).unwrap();
        let d = ChartDensity::from_fn(grid, |u, _| {
            let x = wrap_angle(u - PI);
            (-x * x / 0.1).exp()
        });
        let (c, x2) = transversal_moment(&d, Transversal::Antisymmetric);
        assert!((c.abs() - PI).abs() < 1e-10);
        assert!((x2 - 0.05).abs() < 1e-8);
    }

    #[test]
    fn non_positive_spacing() {
        assert!(fit_from_moment(0, 0.0, 1.0).is_err());
        assert!(fit_from_moment(0, 1.0, 0.0).is_err());
        let f = fit_from_moment(1, 2.0, 0.25).unwrap();
        assert!((f.m_eff - 3.0).abs() < 1e-15);
    }
}
