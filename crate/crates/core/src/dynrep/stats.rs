use crate::eigen::EigenSolution;
use crate::matrix::dot;
use crate::model::{FockBasis, NumberOperators, Site};
use crate::{Error, Result};

/// Exact occupation moments of one state in the Fock basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteStatistics {
    pub mean: [f64; 3],
    pub var: [f64; 3],
    pub cov: [[f64; 3]; 3],
}

impl SiteStatistics {
    pub fn total(&self) -> f64 {
        self.mean.iter().sum()
    }

    /// Sites whose occupation variance is below `v_thresh`.
    pub fn sharp_sites(&self, v_thresh: f64) -> Vec<usize> {
        (0..3).filter(|&k| self.var[k] < v_thresh).collect()
    }
}

pub fn site_statistics(basis: &FockBasis, v: &[f64]) -> Result<SiteStatistics> {
    if v.len() != basis.len() {
        return Err(Error::arg(format!(
            "vector length {} does not match basis size {}",
            v.len(),
            basis.len()
        )));
    }
    let mut norm = 0.0;
    let mut first = [0.0; 3];
    let mut second = [[0.0; 3]; 3];
    for (state, &c) in basis.states().iter().zip(v) {
        let p = c * c;
        if p == 0.0 {
            continue;
        }
        norm += p;
        let n = state.as_array().map(f64::from);
        for a in 0..3 {
            first[a] += p * n[a];
            for b in 0..3 {
                second[a][b] += p * n[a] * n[b];
            }
        }
    }
    let mean = first.map(|x| x / norm);
    let mut cov = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            cov[a][b] = second[a][b] / norm - mean[a] * mean[b];
        }
    }
    let var = [cov[0][0].max(0.0), cov[1][1].max(0.0), cov[2][2].max(0.0)];
    Ok(SiteStatistics { mean, var, cov })
}

/// All number-operator matrix elements ⟨i|n̂_k|j⟩ between eigenstates.
#[derive(Debug, Clone)]
pub struct TransitionTable {
    len: usize,
    data: Vec<[f64; 3]>,
}

impl TransitionTable {
    pub fn new(basis: &FockBasis, eig: &EigenSolution) -> Self {
        let ops = NumberOperators::new(basis);
        let len = eig.len();
        let weighted: Vec<[Vec<f64>; 3]> = eig
            .vectors
            .iter()
            .map(|v| {
                [
                    ops.apply(Site::One, v),
                    ops.apply(Site::Two, v),
                    ops.apply(Site::Three, v),
                ]
            })
            .collect();
        let mut data = vec![[0.0; 3]; len * len];
        for i in 0..len {
            for j in i..len {
                let vj = &eig.vectors[j];
                let m = [0, 1, 2].map(|k| dot(&weighted[i][k], vj));
                data[i * len + j] = m;
                data[j * len + i] = m;
            }
        }
        TransitionTable { len, data }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize, j: usize) -> [f64; 3] {
        self.data[i * self.len + j]
    }

    /// Euclidean norm of the three elements.
    pub fn strength(&self, i: usize, j: usize) -> f64 {
        let m = self.get(i, j);
        (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt()
    }

    /// Diagonal element ⟨i|n̂_k|i⟩.
    pub fn means(&self, i: usize) -> [f64; 3] {
        self.get(i, i)
    }
}
