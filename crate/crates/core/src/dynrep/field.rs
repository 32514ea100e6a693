//! Eigenstates on the angle torus.
//!
//! Because every Fock state carries the same total N, the torus function
//! factorises as Φ(φ) = e^{iNφ3} F(u, v) with u = φ1 − φ3 and v = φ2 − φ3,
//! and only the chart function F has to be sampled.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::model::{FockBasis, Site};
use crate::{Error, Result};

pub const MIN_RESOLUTION: usize = 32;
pub const DEFAULT_RESOLUTION: usize = 256;

/// Uniform grid on [−π, π) used for both chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusGrid {
    resolution: usize,
}

impl TorusGrid {
    pub fn new(resolution: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION {
            return Err(Error::param(format!(
                "grid resolution must be at least {MIN_RESOLUTION}, got {resolution}"
            )));
        }
        Ok(TorusGrid { resolution })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.resolution as f64
    }

    pub fn point(&self, j: usize) -> f64 {
        -PI + self.spacing() * j as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.resolution).map(|j| self.point(j)).collect()
    }
}

impl Default for TorusGrid {
    fn default() -> Self {
        TorusGrid { resolution: DEFAULT_RESOLUTION }
    }
}

/// Chart samples F(u_i, v_j), stored row-major with u as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct DynRepField {
    grid: TorusGrid,
    /// Coefficient of the cyclic coordinate φ3 (the total particle number).
    pub winding: u32,
    values: Vec<Complex64>,
}

impl DynRepField {
    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, iu: usize, iv: usize) -> Complex64 {
        self.values[iu * self.grid.resolution + iv]
    }

    /// Full torus value at chart node (iu, iv) and an arbitrary φ3.
    pub fn torus_value(&self, iu: usize, iv: usize, phi3: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.winding as f64 * phi3) * self.at(iu, iv)
    }

    /// |Φ|² normalised so that its trapezoid integral over the chart is ⟨v|v⟩.
    pub fn density(&self) -> ChartDensity {
        let scale = 1.0 / (TAU * TAU);
        ChartDensity {
            grid: self.grid,
            values: self.values.iter().map(|z| z.norm_sqr() * scale).collect(),
        }
    }

    /// Spectral −i∂/∂φ_k applied to the field, returned as chart samples of
    /// the same e^{iNφ3}-factored form.
    pub fn momentum(&self, site: Site) -> DynRepField {
        let du = self.spectral_derivative(Axis::U);
        let dv = self.spectral_derivative(Axis::V);
        let n = self.winding as f64;
        let values = match site {
            Site::One => du,
            Site::Two => dv,
            Site::Three => self
                .values
                .iter()
                .zip(du.iter().zip(&dv))
                .map(|(f, (a, b))| f * n - a - b)
                .collect(),
        };
        DynRepField { grid: self.grid, winding: self.winding, values }
    }

    /// −i∂F/∂(axis) by FFT along that axis.
    fn spectral_derivative(&self, axis: Axis) -> Vec<Complex64> {
        let r = self.grid.resolution;
        let mut planner = FftPlanner::<f64>::new();
        let forward = planner.plan_fft_forward(r);
        let inverse = planner.plan_fft_inverse(r);
        let wavenumber = |j: usize| -> f64 {
            if j < r / 2 {
                j as f64
            } else if j == r / 2 {
                0.0
            } else {
                j as f64 - r as f64
            }
        };

        let mut out = self.values.clone();
        let mut line = vec![Complex64::new(0.0, 0.0); r];
        for fixed in 0..r {
            for (j, z) in line.iter_mut().enumerate() {
                *z = out[index(axis, fixed, j, r)];
            }
            forward.process(&mut line);
            for (j, z) in line.iter_mut().enumerate() {
                *z *= wavenumber(j) / r as f64;
            }
            inverse.process(&mut line);
            for (j, z) in line.iter().enumerate() {
                out[index(axis, fixed, j, r)] = *z;
            }
        }
        out
    }
}

#[derive(Clone, Copy)]
enum Axis {
    U,
    V,
}

fn index(axis: Axis, fixed: usize, running: usize, r: usize) -> usize {
    match axis {
        Axis::U => running * r + fixed,
        Axis::V => fixed * r + running,
    }
}

/// A real density on the chart, same layout as [`DynRepField`].
#[derive(Debug, Clone, PartialEq)]
pub struct ChartDensity {
    pub grid: TorusGrid,
    pub values: Vec<f64>,
}

impl ChartDensity {
    pub fn from_fn(grid: TorusGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let pts = grid.points();
        let mut values = Vec::with_capacity(pts.len() * pts.len());
        for &u in &pts {
            for &v in &pts {
                values.push(f(u, v));
            }
        }
        ChartDensity { grid, values }
    }

    pub fn at(&self, iu: usize, iv: usize) -> f64 {
        self.values[iu * self.grid.resolution() + iv]
    }

    /// Trapezoid quadrature over the chart.
    pub fn integral(&self) -> f64 {
        let h = self.grid.spacing();
        self.values.iter().sum::<f64>() * h * h
    }

    /// Participation ratio (Σρ)² / (R² Σρ²): the fraction of the chart the
    /// density effectively covers. 1 for a uniform density.
    pub fn participation_fraction(&self) -> f64 {
        let sum: f64 = self.values.iter().sum();
        let sq: f64 = self.values.iter().map(|x| x * x).sum();
        if sq == 0.0 {
            return 0.0;
        }
        sum * sum / (self.values.len() as f64 * sq)
    }
}

/// Samples the chart function F of coefficient vector `v` on `grid`.
pub fn evaluate_dynrep(basis: &FockBasis, v: &[f64], grid: TorusGrid) -> Result<DynRepField> {
    if v.len() != basis.len() {
        return Err(Error::arg(format!(
            "vector length {} does not match basis size {}",
            v.len(),
            basis.len()
        )));
    }
    let n = basis.n_particles() as usize;
    let r = grid.resolution();
    let pts = grid.points();
    // phase[q][j] = e^{i q x_j}
    let phase: Vec<Vec<Complex64>> = (0..=n)
        .map(|q| pts.iter().map(|&x| Complex64::from_polar(1.0, q as f64 * x)).collect())
        .collect();

    // g[n1][j] = Σ_{n2} c(n1, n2) e^{i n2 v_j}
    let mut g = vec![vec![Complex64::new(0.0, 0.0); r]; n + 1];
    for (state, &c) in basis.states().iter().zip(v) {
        if c == 0.0 {
            continue;
        }
        let row = &mut g[state.n1 as usize];
        for (acc, p) in row.iter_mut().zip(&phase[state.n2 as usize]) {
            *acc += p * c;
        }
    }

    let mut values = vec![Complex64::new(0.0, 0.0); r * r];
    for iu in 0..r {
        let out = &mut values[iu * r..(iu + 1) * r];
        for (n1, row) in g.iter().enumerate() {
            let p = phase[n1][iu];
            for (acc, gv) in out.iter_mut().zip(row) {
                *acc += p * gv;
            }
        }
    }
    Ok(DynRepField { grid, winding: basis.n_particles(), values })
}

/// F(u, v) at an arbitrary chart point.
pub fn chart_value(basis: &FockBasis, v: &[f64], u: f64, w: f64) -> Complex64 {
    basis
        .states()
        .iter()
        .zip(v)
        .map(|(s, &c)| Complex64::from_polar(c, s.n1 as f64 * u + s.n2 as f64 * w))
        .sum()
}

/// Φ(φ1, φ2, φ3) through the factorised form.
pub fn torus_value(basis: &FockBasis, v: &[f64], phi: [f64; 3]) -> Complex64 {
    let f = chart_value(basis, v, phi[0] - phi[2], phi[1] - phi[2]);
    Complex64::from_polar(1.0, basis.n_particles() as f64 * phi[2]) * f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(TorusGrid::new(16).is_err());
        let g = TorusGrid::new(32).unwrap();
        assert_eq!(g.point(0), -PI);
        assert!((g.point(16)).abs() < 1e-15);
    }

    #[test]
    fn fock_state_is_flat() {
        let basis = FockBasis::enumerate(4).unwrap();
        let mut v = vec![0.0; basis.len()];
        v[3] = 1.0;
        let field = evaluate_dynrep(&basis, &v, TorusGrid::new(32).unwrap()).unwrap();
        for z in field.values() {
            assert!((z.norm() - 1.0).abs() < 1e-13);
        }
        assert!((field.density().integral() - 1.0).abs() < 1e-12);
        assert!((field.density().participation_fraction() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn length_mismatch() {
        let basis = FockBasis::enumerate(2).unwrap();
        assert!(evaluate_dynrep(&basis, &[1.0], TorusGrid::default()).is_err());
    }
}
