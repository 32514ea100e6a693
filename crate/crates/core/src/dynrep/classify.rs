//! Eigenstate classification into the types A, B, C, D, E1 and E2.
//!
//! A state is characterised by the transitions n̂_k induces to its neighbours.
//! Ladder states of types B, C and D couple to their ladder neighbours only
//! through one relative-number mode, and the spectator site keeps its
//! occupation across the transition:
//!
//! | type | mode (Δn1, Δn2, Δn3) | spectator |
//! |------|----------------------|-----------|
//! | C    | (1, −1, 0)           | site 3    |
//! | B    | (0, 1, −1)           | site 1    |
//! | D    | (1, 0, −1)           | site 2    |
//!
//! E1 states sit near the fully phase-locked point and couple through the
//! diagonal mode (1, −2, 1) and the antisymmetric mode (1, 0, −1). States
//! whose transitions are spread over unaligned directions are E2. States with
//! no transitions above `min_strength` fall back to occupation variances.

use std::fmt;
use std::str::FromStr;

use super::field::{evaluate_dynrep, TorusGrid};
use super::stats::{site_statistics, SiteStatistics, TransitionTable};
use crate::eigen::EigenSolution;
use crate::model::FockBasis;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    A,
    B,
    C,
    D,
    E1,
    E2,
}

impl Label {
    pub const ALL: [Label; 6] = [Label::A, Label::B, Label::C, Label::D, Label::E1, Label::E2];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::A => "A",
            Label::B => "B",
            Label::C => "C",
            Label::D => "D",
            Label::E1 => "E1",
            Label::E2 => "E2",
        }
    }

    /// B, C and D: one decoupled site or one phase-locked pair.
    pub fn is_ladder(self) -> bool {
        matches!(self, Label::B | Label::C | Label::D)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(Label::A),
            "B" => Ok(Label::B),
            "C" => Ok(Label::C),
            "D" => Ok(Label::D),
            "E1" | "E" => Ok(Label::E1),
            "E2" => Ok(Label::E2),
            other => Err(Error::arg(format!("unknown class label '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// Variance below which a site counts as having a sharp occupation.
    pub v_thresh: f64,
    /// Chart participation fraction below which a state counts as localized.
    pub loc_thresh: f64,
    /// Smallest transition strength |(M1, M2, M3)| that counts as an edge.
    pub min_strength: f64,
    /// Cosine between a transition and a mode direction to call it aligned.
    pub align_cos: f64,
    /// Largest allowed change of the spectator occupation along an edge.
    pub spectator_tol: f64,
    /// Gaussian width (particles) damping unaligned edges by mean distance.
    pub drift_width: f64,
    /// Weight fraction a mode needs to decide the label.
    pub dominance: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            v_thresh: 0.1,
            loc_thresh: 0.05,
            min_strength: 0.25,
            align_cos: 0.95,
            spectator_tol: 0.3,
            drift_width: 0.5,
            dominance: 0.8,
        }
    }
}

impl Thresholds {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("v_thresh", self.v_thresh),
            ("loc_thresh", self.loc_thresh),
            ("min_strength", self.min_strength),
            ("align_cos", self.align_cos),
            ("spectator_tol", self.spectator_tol),
            ("drift_width", self.drift_width),
            ("dominance", self.dominance),
        ];
        for (name, x) in checks {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::param(format!("{name} must be positive and finite, got {x}")));
            }
        }
        for (name, x) in [("align_cos", self.align_cos), ("dominance", self.dominance)] {
            if x > 1.0 {
                return Err(Error::param(format!("{name} must not exceed 1, got {x}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuantumNumbers {
    /// Type A: occupations of sites 1 and 3.
    Sharp { lambda1: u32, lambda2: u32 },
    /// Types B, C, D.
    Ladder { lambda: u32, tau: u32 },
    /// Type E1, within a connected cluster of E1 states.
    Locked { tau_d: u32, tau_a: u32 },
    None,
}

impl QuantumNumbers {
    pub fn pair(&self) -> Option<(u32, u32)> {
        match *self {
            QuantumNumbers::Sharp { lambda1, lambda2 } => Some((lambda1, lambda2)),
            QuantumNumbers::Ladder { lambda, tau } => Some((lambda, tau)),
            QuantumNumbers::Locked { tau_d, tau_a } => Some((tau_d, tau_a)),
            QuantumNumbers::None => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenstateClass {
    pub index: usize,
    pub energy: f64,
    pub label: Label,
    pub qn: QuantumNumbers,
    pub confidence: f64,
    /// E1 cluster id; cluster 0 contains the lowest-energy E1 state.
    pub cluster: Option<u32>,
}

/// Transition directions in (n1, n2, n3) space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    C,
    B,
    D,
    Diagonal,
}

impl Mode {
    const ALL: [Mode; 4] = [Mode::C, Mode::B, Mode::D, Mode::Diagonal];

    fn direction(self) -> [f64; 3] {
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        let s6 = 1.0 / 6f64.sqrt();
        match self {
            Mode::C => [s2, -s2, 0.0],
            Mode::B => [0.0, s2, -s2],
            Mode::D => [s2, 0.0, -s2],
            Mode::Diagonal => [s6, -2.0 * s6, s6],
        }
    }

    fn slot(self) -> usize {
        self as usize
    }

    pub(crate) fn for_label(label: Label) -> Option<Mode> {
        match label {
            Label::B => Some(Mode::B),
            Label::C => Some(Mode::C),
            Label::D => Some(Mode::D),
            _ => None,
        }
    }

    /// |t·u| / |t| for transition vector `t`.
    pub(crate) fn alignment(self, t: [f64; 3]) -> f64 {
        let u = self.direction();
        let s = norm(t);
        if s == 0.0 {
            return 0.0;
        }
        (t[0] * u[0] + t[1] * u[1] + t[2] * u[2]).abs() / s
    }

    /// Whether the mean occupations of the two ends are compatible with a
    /// transition in this mode.
    pub(crate) fn spectator_ok(self, mi: [f64; 3], mj: [f64; 3], tol: f64) -> bool {
        let d = [mj[0] - mi[0], mj[1] - mi[1], mj[2] - mi[2]];
        match self {
            Mode::C => d[2].abs() < tol,
            Mode::B => d[0].abs() < tol,
            Mode::D => d[1].abs() < tol,
            Mode::Diagonal => d.iter().all(|x| x.abs() < tol),
        }
    }
}

fn norm(t: [f64; 3]) -> f64 {
    (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt()
}

/// Accumulated edge weight per mode plus the unaligned remainder.
#[derive(Debug, Clone, Copy, Default)]
struct ModeWeights {
    aligned: [f64; 4],
    irregular: f64,
}

impl ModeWeights {
    fn total(&self) -> f64 {
        self.aligned.iter().sum::<f64>() + self.irregular
    }
}

fn mode_weights(i: usize, tr: &TransitionTable, th: &Thresholds) -> ModeWeights {
    let mut w = ModeWeights::default();
    let mi = tr.means(i);
    for j in 0..tr.len() {
        if j == i {
            continue;
        }
        let t = tr.get(i, j);
        let s = norm(t);
        if s < th.min_strength {
            continue;
        }
        let (best, cos) = Mode::ALL
            .iter()
            .map(|&m| (m, m.alignment(t)))
            .fold((Mode::C, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        let mj = tr.means(j);
        if cos >= th.align_cos {
            if best.spectator_ok(mi, mj, th.spectator_tol) {
                w.aligned[best.slot()] += s * s;
            }
        } else {
            let d2: f64 = (0..3).map(|k| (mj[k] - mi[k]).powi(2)).sum();
            w.irregular += s * s * (-d2 / (2.0 * th.drift_width * th.drift_width)).exp();
        }
    }
    w
}

fn round_count(x: f64, n: u32) -> u32 {
    x.round().clamp(0.0, n as f64) as u32
}

fn ladder_lambda(label: Label, mean: [f64; 3], n: u32) -> u32 {
    match label {
        Label::B => round_count(mean[0], n),
        Label::C => round_count(mean[2], n),
        Label::D => round_count(mean[0] + mean[2], n),
        _ => 0,
    }
}

/// Labels every eigenstate and assigns its geometric quantum numbers.
pub fn classify_eigenstates(
    basis: &FockBasis,
    eig: &EigenSolution,
    transitions: &TransitionTable,
    grid: TorusGrid,
    th: &Thresholds,
) -> Result<Vec<EigenstateClass>> {
    th.validate()?;
    if eig.len() != basis.len() || transitions.len() != eig.len() {
        return Err(Error::arg("eigen solution, basis and transition table sizes differ"));
    }
    let n = basis.n_particles();
    let stats: Vec<SiteStatistics> =
        eig.vectors.iter().map(|v| site_statistics(basis, v)).collect::<Result<_>>()?;

    let mut classes = Vec::with_capacity(eig.len());
    for (i, st) in stats.iter().enumerate() {
        let w = mode_weights(i, transitions, th);
        let total = w.total();
        let (label, confidence) = if total > 0.0 {
            label_from_weights(&w, total, th)
        } else {
            label_from_variances(basis, eig, i, st, grid, th)?
        };
        let qn = match label {
            Label::A => QuantumNumbers::Sharp {
                lambda1: round_count(st.mean[0], n),
                lambda2: round_count(st.mean[2], n),
            },
            Label::B | Label::C | Label::D => {
                QuantumNumbers::Ladder { lambda: ladder_lambda(label, st.mean, n), tau: 0 }
            }
            Label::E1 => QuantumNumbers::Locked { tau_d: 0, tau_a: 0 },
            Label::E2 => QuantumNumbers::None,
        };
        classes.push(EigenstateClass {
            index: i,
            energy: eig.energies[i],
            label,
            qn,
            confidence: confidence.clamp(0.0, 1.0),
            cluster: None,
        });
    }

    assign_ladder_taus(&mut classes);
    assign_locked_numbers(&mut classes, transitions, th);
    Ok(classes)
}

fn label_from_weights(w: &ModeWeights, total: f64, th: &Thresholds) -> (Label, f64) {
    let f = w.aligned.map(|x| x / total);
    let fd = f[Mode::Diagonal.slot()];
    let locked = fd + f[Mode::D.slot()];
    if locked >= th.dominance && fd >= 0.2 * locked {
        return (Label::E1, locked);
    }
    let ladder = [(Label::C, f[Mode::C.slot()]), (Label::B, f[Mode::B.slot()]), (Label::D, f[Mode::D.slot()])];
    let (label, best) = ladder.iter().fold((Label::C, -1.0), |a, &x| if x.1 > a.1 { x } else { a });
    if best >= th.dominance {
        (label, best)
    } else {
        (Label::E2, 1.0 - best.max(locked))
    }
}

fn label_from_variances(
    basis: &FockBasis,
    eig: &EigenSolution,
    i: usize,
    st: &SiteStatistics,
    grid: TorusGrid,
    th: &Thresholds,
) -> Result<(Label, f64)> {
    let sharp = st.sharp_sites(th.v_thresh);
    let margin = |k: usize| 1.0 - st.var[k] / th.v_thresh;
    match sharp.len() {
        3 => Ok((Label::A, (0..3).map(margin).fold(1.0, f64::min))),
        1 => {
            let label = [Label::B, Label::D, Label::C][sharp[0]];
            Ok((label, margin(sharp[0])))
        }
        _ => {
            let pr = evaluate_dynrep(basis, &eig.vectors[i], grid)?.density().participation_fraction();
            let conf = ((pr - th.loc_thresh).abs() / th.loc_thresh).min(1.0);
            if pr < th.loc_thresh {
                Ok((Label::E1, conf))
            } else {
                Ok((Label::E2, conf))
            }
        }
    }
}

fn assign_ladder_taus(classes: &mut [EigenstateClass]) {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<(Label, u32), Vec<usize>> = BTreeMap::new();
    for c in classes.iter() {
        if let QuantumNumbers::Ladder { lambda, .. } = c.qn {
            groups.entry((c.label, lambda)).or_default().push(c.index);
        }
    }
    for ((_, lambda), members) in groups {
        // classes are indexed by eigenstate and eigenstates are energy-ordered
        for (tau, idx) in members.into_iter().enumerate() {
            classes[idx].qn = QuantumNumbers::Ladder { lambda, tau: tau as u32 };
        }
    }
}

/// E1 numbers: walk the E1 states upward in energy, attaching each to its
/// strongest diagonal or antisymmetric ladder neighbour below it.
fn assign_locked_numbers(classes: &mut [EigenstateClass], tr: &TransitionTable, th: &Thresholds) {
    let e1: Vec<usize> = classes.iter().filter(|c| c.label == Label::E1).map(|c| c.index).collect();
    let mut assigned: Vec<(usize, u32, (u32, u32))> = Vec::new();
    let mut next_cluster = 0;

    for &i in &e1 {
        let mut candidates: Vec<(f64, usize, u32, (u32, u32))> = Vec::new();
        for &(j, cluster, (td, ta)) in &assigned {
            if classes[j].energy >= classes[i].energy {
                continue;
            }
            let t = tr.get(i, j);
            let s = norm(t);
            if s < th.min_strength {
                continue;
            }
            for (mode, step) in [(Mode::Diagonal, (1, 0)), (Mode::D, (0, 1))] {
                if mode.alignment(t) >= th.align_cos
                    && mode.spectator_ok(tr.means(j), tr.means(i), th.spectator_tol)
                {
                    candidates.push((s, j, cluster, (td + step.0, ta + step.1)));
                }
            }
        }
        candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

        let used = |cluster: u32, qn: (u32, u32)| assigned.iter().any(|&(_, c, q)| c == cluster && q == qn);
        let pick = candidates
            .iter()
            .find(|c| !used(c.2, c.3))
            .map(|c| (c.2, c.3, 1.0))
            .or_else(|| candidates.first().map(|c| (c.2, c.3, 0.5)));
        let (cluster, qn, factor) = match pick {
            Some(p) => p,
            None => {
                next_cluster += 1;
                (next_cluster - 1, (0, 0), 1.0)
            }
        };
        classes[i].qn = QuantumNumbers::Locked { tau_d: qn.0, tau_a: qn.1 };
        classes[i].cluster = Some(cluster);
        classes[i].confidence *= factor;
        assigned.push((i, cluster, qn));
    }
}

/// Counts per label, in [`Label::ALL`] order.
pub fn label_counts(classes: &[EigenstateClass]) -> [(Label, usize); 6] {
    Label::ALL.map(|l| (l, classes.iter().filter(|c| c.label == l).count()))
}
