//! Fock basis, Hamiltonian assembly and exact number-operator matrix elements.
//!
//! The Hamiltonian is the three-site Bose-Hubbard model with on-site energies
//! `eps_k = eps_bar + (k - 2) * delta` and the interaction written as
//! `zeta * (n_k + 1/2)^2`. That form differs from the `U/2 n(n-1)` convention
//! only by an N-dependent constant and a relabeling of the on-site energies,
//! so beat frequencies agree with other codes while absolute energies do not.

use std::fmt;

use crate::matrix::{dot, DenseMatrix};
use crate::{Error, Result};

/// One of the three wells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    One,
    Two,
    Three,
}

impl Site {
    pub const ALL: [Site; 3] = [Site::One, Site::Two, Site::Three];

    /// Zero-based index.
    pub fn index(self) -> usize {
        match self {
            Site::One => 0,
            Site::Two => 1,
            Site::Three => 2,
        }
    }

    /// One-based well number as used in the physics literature.
    pub fn number(self) -> usize {
        self.index() + 1
    }

    pub fn from_number(k: usize) -> Result<Site> {
        match k {
            1 => Ok(Site::One),
            2 => Ok(Site::Two),
            3 => Ok(Site::Three),
            _ => Err(Error::arg(format!("site number must be 1, 2 or 3, got {k}"))),
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub n_particles: u32,
    pub epsilon_bar: f64,
    pub delta: f64,
    pub kappa12: f64,
    pub kappa23: f64,
    pub zeta: f64,
}

impl Default for ModelParams {
    /// N = 30, Δ = 0.1, κ12 = κ23 = 0.25, ζ = 0.1, ε̄ = 0.
    fn default() -> Self {
        ModelParams {
            n_particles: 30,
            epsilon_bar: 0.0,
            delta: 0.1,
            kappa12: 0.25,
            kappa23: 0.25,
            zeta: 0.1,
        }
    }
}

impl ModelParams {
    pub fn with_particles(n_particles: u32) -> Self {
        ModelParams { n_particles, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_particles < 1 {
            return Err(Error::param("N must be at least 1"));
        }
        let fields = [
            ("epsilon_bar", self.epsilon_bar),
            ("delta", self.delta),
            ("kappa12", self.kappa12),
            ("kappa23", self.kappa23),
            ("zeta", self.zeta),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::param(format!("{name} must be finite, got {value}")));
            }
        }
        Ok(())
    }

    /// On-site energy of well `k`: ε̄ + (k − 2)Δ.
    pub fn site_energy(&self, site: Site) -> f64 {
        self.epsilon_bar + (site.number() as f64 - 2.0) * self.delta
    }

    /// Unit of time used for trajectories, T = 2π/|Δ|.
    pub fn time_unit(&self) -> Result<f64> {
        if self.delta == 0.0 {
            return Err(Error::param("time unit 2π/Δ is undefined for Δ = 0"));
        }
        Ok(std::f64::consts::TAU / self.delta.abs())
    }
}

/// Occupations (n1, n2, n3) of the three wells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FockState {
    pub n1: u32,
    pub n2: u32,
    pub n3: u32,
}

impl FockState {
    pub fn new(n1: u32, n2: u32, n3: u32) -> Self {
        FockState { n1, n2, n3 }
    }

    pub fn total(&self) -> u32 {
        self.n1 + self.n2 + self.n3
    }

    pub fn occupation(&self, site: Site) -> u32 {
        match site {
            Site::One => self.n1,
            Site::Two => self.n2,
            Site::Three => self.n3,
        }
    }

    pub fn as_array(&self) -> [u32; 3] {
        [self.n1, self.n2, self.n3]
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.n1, self.n2, self.n3)
    }
}

/// All Fock states with n1 + n2 + n3 = N, ordered lexicographically
/// descending in (n1, n2): (N,0,0), (N−1,1,0), (N−1,0,1), ...
#[derive(Debug, Clone, PartialEq)]
pub struct FockBasis {
    n_particles: u32,
    states: Vec<FockState>,
}

impl FockBasis {
    pub fn enumerate(n_particles: u32) -> Result<Self> {
        if n_particles < 1 {
            return Err(Error::param("N must be at least 1"));
        }
        let n = n_particles;
        let states = (0..=n)
            .rev()
            .flat_map(|n1| (0..=n - n1).rev().map(move |n2| FockState::new(n1, n2, n - n1 - n2)))
            .collect();
        Ok(FockBasis { n_particles, states })
    }

    /// Dimension (N+1)(N+2)/2.
    pub fn dimension_for(n_particles: u32) -> usize {
        let n = n_particles as usize;
        (n + 1) * (n + 2) / 2
    }

    pub fn n_particles(&self) -> u32 {
        self.n_particles
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn state(&self, index: usize) -> FockState {
        self.states[index]
    }

    /// Position of `state` in the basis, `None` if it has the wrong total.
    pub fn index_of(&self, state: &FockState) -> Option<usize> {
        let n = self.n_particles as usize;
        if state.total() != self.n_particles {
            return None;
        }
        let n1 = state.n1 as usize;
        let n2 = state.n2 as usize;
        // Blocks with larger n1 hold (N - n1' + 1) states each.
        let m = n - n1;
        let before = m * (m + 1) / 2;
        Some(before + (m - n2))
    }

    /// Occupation of `site` for every basis state, as floats.
    pub fn occupations(&self, site: Site) -> Vec<f64> {
        self.states.iter().map(|s| s.occupation(site) as f64).collect()
    }
}

/// Matrix element ⟨m|H|n⟩ of the trimer Hamiltonian.
pub fn hamiltonian_element(m: &FockState, n: &FockState, p: &ModelParams) -> Result<f64> {
    if m.total() != p.n_particles || n.total() != p.n_particles {
        return Err(Error::arg(format!(
            "states {m} and {n} must both hold N = {} particles",
            p.n_particles
        )));
    }
    Ok(element_unchecked(m, n, p))
}

fn diagonal_energy(n: &FockState, p: &ModelParams) -> f64 {
    Site::ALL
        .iter()
        .map(|&k| {
            let occ = n.occupation(k) as f64 + 0.5;
            p.site_energy(k) * occ + p.zeta * occ * occ
        })
        .sum()
}

/// Amplitude for one boson hopping from well `from` to well `to` of `n`,
/// landing in `m`; zero if `m` is not reachable by that hop.
fn hop(m: [u32; 3], n: [u32; 3], from: usize, to: usize) -> f64 {
    let spectator = 3 - from - to;
    if m[spectator] != n[spectator] || n[from] == 0 || m[from] + 1 != n[from] || m[to] != n[to] + 1 {
        return 0.0;
    }
    // √(n_from (n_to + 1)); the integer product makes (m,n) and (n,m) bit-identical.
    ((n[from] as u64 * m[to] as u64) as f64).sqrt()
}

fn element_unchecked(m: &FockState, n: &FockState, p: &ModelParams) -> f64 {
    if m == n {
        return diagonal_energy(n, p);
    }
    let (ma, na) = (m.as_array(), n.as_array());
    let h12 = hop(ma, na, 1, 0) + hop(ma, na, 0, 1);
    let h23 = hop(ma, na, 2, 1) + hop(ma, na, 1, 2);
    -p.kappa12 * h12 - p.kappa23 * h23
}

/// Dense Hamiltonian over `basis`. Only the diagonal and the four hopping
/// neighbours of each state are filled; symmetry is exact.
pub fn build_hamiltonian(basis: &FockBasis, p: &ModelParams) -> Result<DenseMatrix> {
    p.validate()?;
    if basis.n_particles() != p.n_particles {
        return Err(Error::arg(format!(
            "basis has N = {} but parameters have N = {}",
            basis.n_particles(),
            p.n_particles
        )));
    }
    let mut h = DenseMatrix::zeros(basis.len());
    for (i, n) in basis.states().iter().enumerate() {
        h[(i, i)] = diagonal_energy(n, p);
        // Hops that raise the index: 1→2 and 2→3 (and their combinations).
        let [n1, n2, n3] = n.as_array();
        let mut neighbours = Vec::with_capacity(2);
        if n1 > 0 {
            neighbours.push(FockState::new(n1 - 1, n2 + 1, n3));
        }
        if n2 > 0 {
            neighbours.push(FockState::new(n1, n2 - 1, n3 + 1));
        }
        for m in neighbours {
            let j = basis.index_of(&m).expect("neighbour lies in the basis");
            let value = element_unchecked(&m, n, p);
            h[(i, j)] = value;
            h[(j, i)] = value;
        }
    }
    Ok(h)
}

/// ⟨a|n̂_k|b⟩ for real coefficient vectors over the same basis.
pub fn number_matrix_element(basis: &FockBasis, a: &[f64], b: &[f64], site: Site) -> Result<f64> {
    if a.len() != basis.len() || b.len() != basis.len() {
        return Err(Error::arg(format!(
            "vectors of length {} and {} do not match basis dimension {}",
            a.len(),
            b.len(),
            basis.len()
        )));
    }
    Ok(basis
        .states()
        .iter()
        .zip(a.iter().zip(b))
        .map(|(s, (x, y))| x * y * s.occupation(site) as f64)
        .sum())
}

/// Precomputed occupation columns for repeated matrix-element evaluation.
#[derive(Debug, Clone)]
pub struct NumberOperators {
    occ: [Vec<f64>; 3],
}

impl NumberOperators {
    pub fn new(basis: &FockBasis) -> Self {
        NumberOperators {
            occ: [
                basis.occupations(Site::One),
                basis.occupations(Site::Two),
                basis.occupations(Site::Three),
            ],
        }
    }

    pub fn occupations(&self, site: Site) -> &[f64] {
        &self.occ[site.index()]
    }

    /// (⟨a|n̂_1|b⟩, ⟨a|n̂_2|b⟩, ⟨a|n̂_3|b⟩).
    pub fn elements(&self, a: &[f64], b: &[f64]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (k, occ) in self.occ.iter().enumerate() {
            out[k] = a.iter().zip(b).zip(occ).map(|((x, y), n)| x * y * n).sum();
        }
        out
    }

    /// Weighted copy `n_k ⊙ v`.
    pub fn apply(&self, site: Site, v: &[f64]) -> Vec<f64> {
        v.iter().zip(self.occupations(site)).map(|(x, n)| x * n).collect()
    }

    pub fn element(&self, a: &[f64], b: &[f64], site: Site) -> f64 {
        dot(&self.apply(site, a), b)
    }
}
