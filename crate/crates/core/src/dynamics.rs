//! Two-eigenstate superpositions and their particle-number dynamics.
//!
//! With c = |c| e^{−iγ},
//! ⟨n̂_k⟩(t) = |c_a|²⟨a|n̂_k|a⟩ + |c_b|²⟨b|n̂_k|b⟩
//!            + 2|c_a||c_b||M_k| cos(Ω t + Δγ + ξ_k),
//! where Ω = E_a − E_b, Δγ = γ_a − γ_b and M_k = ⟨a|n̂_k|b⟩ = ±|M_k|.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::eigen::EigenSolution;
use crate::matrix::dot;
use crate::model::{NumberOperators, Site};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionSpec {
    pub a: usize,
    pub b: usize,
    pub mag_a: f64,
    pub mag_b: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
}

impl SuperpositionSpec {
    /// Equal-weight superposition with zero phases.
    pub fn equal(a: usize, b: usize) -> Self {
        SuperpositionSpec { a, b, mag_a: FRAC_1_SQRT_2, mag_b: FRAC_1_SQRT_2, gamma_a: 0.0, gamma_b: 0.0 }
    }

    /// A single eigenstate.
    pub fn stationary(a: usize) -> Self {
        SuperpositionSpec { a, b: a, mag_a: 1.0, mag_b: 0.0, gamma_a: 0.0, gamma_b: 0.0 }
    }

    pub fn delta_gamma(&self) -> f64 {
        self.gamma_a - self.gamma_b
    }

    pub fn validate(&self, len: usize) -> Result<()> {
        for idx in [self.a, self.b] {
            if idx >= len {
                return Err(Error::arg(format!("eigenstate index {idx} out of range (have {len})")));
            }
        }
        let all = [self.mag_a, self.mag_b, self.gamma_a, self.gamma_b];
        if all.iter().any(|x| !x.is_finite()) || self.mag_a < 0.0 || self.mag_b < 0.0 {
            return Err(Error::arg("magnitudes must be non-negative and all values finite"));
        }
        let norm = self.mag_a * self.mag_a + self.mag_b * self.mag_b;
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::arg(format!("|c_a|^2 + |c_b|^2 = {norm}, expected 1")));
        }
        if self.a == self.b && self.mag_b != 0.0 {
            return Err(Error::arg("the two eigenstates must differ unless mag_b = 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Sample instants in units of T = 2π/Δ.
    pub times: Vec<f64>,
    pub n: [Vec<f64>; 3],
    /// E_a − E_b.
    pub beat_frequency: f64,
    /// T in physical units, for converting `times` back.
    pub time_unit: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn series(&self, site: Site) -> &[f64] {
        &self.n[site.index()]
    }

    pub fn physical_times(&self) -> Vec<f64> {
        self.times.iter().map(|t| t * self.time_unit).collect()
    }

    /// Largest deviation of Σ_k n_k(t) from `n`.
    pub fn conservation_error(&self, n: f64) -> f64 {
        (0..self.len()).map(|i| (self.n[0][i] + self.n[1][i] + self.n[2][i] - n).abs()).fold(0.0, f64::max)
    }
}

/// `samples` evenly spaced instants from 0 to `t_max` (inclusive), in units of T.
pub fn time_grid(t_max: f64, samples: usize) -> Result<Vec<f64>> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::arg(format!("t_max must be positive, got {t_max}")));
    }
    if samples < 2 {
        return Err(Error::arg("need at least two samples"));
    }
    let step = t_max / (samples - 1) as f64;
    Ok((0..samples).map(|i| i as f64 * step).collect())
}

/// c_a v_a + c_b v_b with c = |c| e^{−iγ}.
pub fn build_superposition_state(spec: &SuperpositionSpec, eig: &EigenSolution) -> Result<Vec<Complex64>> {
    spec.validate(eig.len())?;
    let ca = Complex64::from_polar(spec.mag_a, -spec.gamma_a);
    let cb = Complex64::from_polar(spec.mag_b, -spec.gamma_b);
    let va = eig.vector(spec.a);
    let vb = eig.vector(spec.b);
    Ok(va.iter().zip(vb).map(|(&x, &y)| ca * x + cb * y).collect())
}

/// Closed-form trajectory from the exact matrix elements.
pub fn closed_form_trajectory(
    spec: &SuperpositionSpec,
    eig: &EigenSolution,
    ops: &NumberOperators,
    time_unit: f64,
    times: &[f64],
) -> Result<Trajectory> {
    spec.validate(eig.len())?;
    let va = eig.vector(spec.a);
    let vb = eig.vector(spec.b);
    let omega = eig.energies[spec.a] - eig.energies[spec.b];
    let (pa, pb) = (spec.mag_a * spec.mag_a, spec.mag_b * spec.mag_b);
    let cross = 2.0 * spec.mag_a * spec.mag_b;
    let dg = spec.delta_gamma();

    let mut n: [Vec<f64>; 3] = Default::default();
    for site in Site::ALL {
        let offset = pa * ops.element(va, va, site) + pb * ops.element(vb, vb, site);
        let m = ops.element(va, vb, site);
        let xi = if m < 0.0 { PI } else { 0.0 };
        let amp = cross * m.abs();
        n[site.index()] =
            times.iter().map(|&t| offset + amp * (omega * t * time_unit + dg + xi).cos()).collect();
    }
    Ok(Trajectory { times: times.to_vec(), n, beat_frequency: omega, time_unit })
}

/// Σ_k e^{−iE_k t} ⟨Φ_k|Ψ⟩ |Φ_k⟩.
pub fn spectral_propagate(initial: &[Complex64], eig: &EigenSolution, t: f64) -> Result<Vec<Complex64>> {
    if initial.len() != eig.vectors.first().map_or(0, |v| v.len()) {
        return Err(Error::arg("initial state length does not match the basis"));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); initial.len()];
    for (e, v) in eig.energies.iter().zip(&eig.vectors) {
        let overlap: Complex64 = v.iter().zip(initial).map(|(&x, z)| z * x).sum();
        let c = overlap * Complex64::from_polar(1.0, -e * t);
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(v) {
            *o += c * x;
        }
    }
    Ok(out)
}

/// ⟨Ψ|n̂_k|Ψ⟩ for a complex state.
pub fn number_expectations(ops: &NumberOperators, psi: &[Complex64]) -> [f64; 3] {
    let p: Vec<f64> = psi.iter().map(|z| z.norm_sqr()).collect();
    Site::ALL.map(|s| dot(ops.occupations(s), &p))
}

/// Trajectory of an arbitrary initial state by spectral propagation.
pub fn propagated_trajectory(
    initial: &[Complex64],
    eig: &EigenSolution,
    ops: &NumberOperators,
    time_unit: f64,
    times: &[f64],
) -> Result<Trajectory> {
    // overlaps once, then phases per time
    let overlaps: Vec<Complex64> =
        eig.vectors.iter().map(|v| v.iter().zip(initial).map(|(&x, z)| z * x).sum()).collect();
    let active: Vec<usize> = (0..overlaps.len()).filter(|&k| overlaps[k].norm_sqr() > 0.0).collect();
    let mut n: [Vec<f64>; 3] = Default::default();
    let mut psi = vec![Complex64::new(0.0, 0.0); initial.len()];
    for &t in times {
        psi.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for &k in &active {
            let c = overlaps[k] * Complex64::from_polar(1.0, -eig.energies[k] * t * time_unit);
            for (o, &x) in psi.iter_mut().zip(&eig.vectors[k]) {
                *o += c * x;
            }
        }
        let e = number_expectations(ops, &psi);
        for k in 0..3 {
            n[k].push(e[k]);
        }
    }
    let significant: Vec<usize> = active.iter().copied().filter(|&k| overlaps[k].norm_sqr() > 1e-20).collect();
    let beat_frequency = match significant.as_slice() {
        [a, b] => eig.energies[*b] - eig.energies[*a],
        _ => 0.0,
    };
    Ok(Trajectory { times: times.to_vec(), n, beat_frequency, time_unit })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineFit {
    pub offset: f64,
    /// Non-negative amplitude A of A cos(Ω t + φ0).
    pub amplitude: f64,
    /// φ0 in (−π, π].
    pub phase: f64,
}

/// Least-squares fit of A cos(Ω t + φ0) + B at fixed Ω.
///
/// `times` and `omega` must use consistent units.
pub fn fit_cosine(series: &[f64], times: &[f64], omega: f64) -> Result<CosineFit> {
    if series.len() != times.len() {
        return Err(Error::arg("series and times differ in length"));
    }
    if series.len() < 8 {
        return Err(Error::InsufficientData(format!("need at least 8 samples, got {}", series.len())));
    }
    if !omega.is_finite() {
        return Err(Error::arg("beat frequency is not finite"));
    }
    let (t0, t1) = times.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &t| (a.min(t), b.max(t)));
    if omega != 0.0 && (t1 - t0) * omega.abs() < 2.0 * PI {
        log::warn!("samples span less than one beat period");
    }

    // normal equations for [cos, sin, 1]
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for (&y, &t) in series.iter().zip(times) {
        let row = [(omega * t).cos(), (omega * t).sin(), 1.0];
        for i in 0..3 {
            atb[i] += row[i] * y;
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let x = solve3(ata, atb).ok_or_else(|| {
        Error::InsufficientData("degenerate sampling: cosine and sine columns are not independent".into())
    })?;
    let (a, b, c) = (x[0], x[1], x[2]);
    Ok(CosineFit { offset: c, amplitude: a.hypot(b), phase: (-b).atan2(a) })
}

/// Gaussian elimination with partial pivoting; None if (near) singular.
fn solve3(mut m: [[f64; 3]; 3], mut r: [f64; 3]) -> Option<[f64; 3]> {
    let scale = m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() <= 1e-10 * scale {
            return None;
        }
        m.swap(col, piv);
        r.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            r[row] -= f * r[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|k| m[i][k] * x[k]).sum();
        x[i] = (r[i] - s) / m[i][i];
    }
    Some(x)
}
