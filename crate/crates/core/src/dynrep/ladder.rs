//! Ladder families and resolution of (class, quantum numbers) to eigenstates.

use std::collections::BTreeMap;
use std::fmt;

use super::classify::{EigenstateClass, Label, Mode, QuantumNumbers, Thresholds};
use super::field::{evaluate_dynrep, TorusGrid};
use super::fit::{fit_from_density, OscillatorFit, Transversal};
use super::stats::TransitionTable;
use crate::eigen::EigenSolution;
use crate::model::FockBasis;
use crate::{Error, Result};

/// Which quantum number an E1 family ladders in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum E1Axis {
    /// τ_a fixed, ladder in τ_d.
    Diagonal { tau_a: u32 },
    /// τ_d fixed, ladder in τ_a.
    Antisymmetric { tau_d: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKey {
    Ladder { label: Label, lambda: u32 },
    Locked { cluster: u32, axis: E1Axis },
}

impl FamilyKey {
    pub fn label(&self) -> Label {
        match self {
            FamilyKey::Ladder { label, .. } => *label,
            FamilyKey::Locked { .. } => Label::E1,
        }
    }

    pub fn transversal(&self) -> Transversal {
        match self {
            FamilyKey::Ladder { label: Label::B, .. } => Transversal::Phi32,
            FamilyKey::Ladder { label: Label::C, .. } => Transversal::Phi12,
            FamilyKey::Ladder { .. } => Transversal::Antisymmetric,
            FamilyKey::Locked { axis: E1Axis::Diagonal { .. }, .. } => Transversal::Diagonal,
            FamilyKey::Locked { axis: E1Axis::Antisymmetric { .. }, .. } => Transversal::Antisymmetric,
        }
    }
}

impl fmt::Display for FamilyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKey::Ladder { label, lambda } => write!(f, "{label} lambda={lambda}"),
            FamilyKey::Locked { cluster, axis: E1Axis::Diagonal { tau_a } } => {
                write!(f, "E1 cluster={cluster} ta={tau_a}")
            }
            FamilyKey::Locked { cluster, axis: E1Axis::Antisymmetric { tau_d } } => {
                write!(f, "E1 cluster={cluster} td={tau_d}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LadderFamily {
    pub id: usize,
    pub key: FamilyKey,
    /// Eigenstate indices; `members[τ]` has ladder number τ.
    pub members: Vec<usize>,
    pub energies: Vec<f64>,
    /// False if a ladder step lacks its transition or levels were dropped.
    pub complete: bool,
    pub fit: Option<OscillatorFit>,
    /// Occupation split (α1, α2) of the entangled pair for B and C families:
    /// sites (1, 2) for C and (2, 3) for B.
    pub alpha: Option<[u32; 2]>,
}

impl LadderFamily {
    pub fn label(&self) -> Label {
        self.key.label()
    }

    pub fn lambda(&self) -> Option<u32> {
        match self.key {
            FamilyKey::Ladder { lambda, .. } => Some(lambda),
            FamilyKey::Locked { .. } => None,
        }
    }

    pub fn member(&self, tau: u32) -> Option<usize> {
        self.members.get(tau as usize).copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Groups classified states into families, in key order, and fits the
/// oscillator parameters of every family with at least two members.
pub fn build_ladders(
    classes: &[EigenstateClass],
    basis: &FockBasis,
    eig: &EigenSolution,
    transitions: &TransitionTable,
    grid: TorusGrid,
    th: &Thresholds,
) -> Result<Vec<LadderFamily>> {
    let n = basis.n_particles();
    let mut groups: BTreeMap<FamilyKey, Vec<(u32, usize)>> = BTreeMap::new();
    for c in classes {
        match (c.qn, c.cluster) {
            (QuantumNumbers::Ladder { lambda, tau }, _) => {
                groups.entry(FamilyKey::Ladder { label: c.label, lambda }).or_default().push((tau, c.index));
            }
            (QuantumNumbers::Locked { tau_d, tau_a }, Some(cluster)) => {
                let diag = FamilyKey::Locked { cluster, axis: E1Axis::Diagonal { tau_a } };
                let anti = FamilyKey::Locked { cluster, axis: E1Axis::Antisymmetric { tau_d } };
                groups.entry(diag).or_default().push((tau_d, c.index));
                groups.entry(anti).or_default().push((tau_a, c.index));
            }
            _ => {}
        }
    }

    let mut families = Vec::with_capacity(groups.len());
    for (key, mut entries) in groups {
        // lowest energy first among duplicate quantum numbers
        entries.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut members: Vec<usize> = Vec::new();
        let mut complete = true;
        let mut last_tau = None;
        for (tau, idx) in entries {
            if last_tau == Some(tau) {
                continue;
            }
            let expected = members.len() as u32;
            let rising = members.last().is_none_or(|&p| eig.energies[idx] > eig.energies[p]);
            if tau != expected || !rising {
                complete = false;
                break;
            }
            members.push(idx);
            last_tau = Some(tau);
        }
        if members.len() < 2 && matches!(key, FamilyKey::Locked { .. }) {
            // isolated E1 states are represented by the other axis
            continue;
        }

        if let Some(mode) = Mode::for_label(key.label()) {
            for w in members.windows(2) {
                let t = transitions.get(w[0], w[1]);
                let s = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
                if s < th.min_strength || mode.alignment(t) < th.align_cos {
                    complete = false;
                }
            }
        }

        let alpha = match key {
            FamilyKey::Ladder { label: Label::C, lambda } => {
                Some(split(transitions.means(members[0])[0], n - lambda.min(n)))
            }
            FamilyKey::Ladder { label: Label::B, lambda } => {
                Some(split(transitions.means(members[0])[1], n - lambda.min(n)))
            }
            _ => None,
        };

        let fit = if members.len() >= 2 {
            let density = evaluate_dynrep(basis, &eig.vectors[members[0]], grid)?.density();
            let e0 = eig.energies[members[0]];
            let e1 = eig.energies[members[1]];
            match fit_from_density(&density, key.transversal(), 0, e0, e1) {
                Ok(f) => Some(f),
                Err(e) => {
                    log::warn!("family {key}: oscillator fit failed: {e}");
                    None
                }
            }
        } else {
            None
        };

        let energies = members.iter().map(|&m| eig.energies[m]).collect();
        families.push(LadderFamily { id: families.len(), key, members, energies, complete, fit, alpha });
    }
    Ok(families)
}

/// Splits `total` as (round(first), rest) so the parts always sum to `total`.
fn split(first: f64, total: u32) -> [u32; 2] {
    let a = first.round().clamp(0.0, total as f64) as u32;
    [a, total - a]
}

/// Oscillator fit of `family` at level τ: Ω from levels τ and τ+1, width from
/// the density of level τ.
pub fn fit_oscillator_at(
    family: &LadderFamily,
    tau: u32,
    basis: &FockBasis,
    eig: &EigenSolution,
    grid: TorusGrid,
) -> Result<OscillatorFit> {
    let (Some(a), Some(b)) = (family.member(tau), family.member(tau + 1)) else {
        return Err(Error::InsufficientData(format!(
            "family {} has {} member(s); level {tau} needs {}",
            family.key,
            family.len(),
            tau + 2
        )));
    };
    let density = evaluate_dynrep(basis, &eig.vectors[a], grid)?.density();
    fit_from_density(&density, family.key.transversal(), tau, eig.energies[a], eig.energies[b])
}

/// Lowest-pair oscillator fit of `family`.
pub fn fit_oscillator(
    family: &LadderFamily,
    basis: &FockBasis,
    eig: &EigenSolution,
    grid: TorusGrid,
) -> Result<OscillatorFit> {
    fit_oscillator_at(family, 0, basis, eig, grid)
}

/// Finds the eigenstate with class `label` and quantum numbers (q1, q2):
/// (λ1, λ2) for A, (λ, τ) for B/C/D and (τ_d, τ_a) for E1 in the main cluster.
pub fn resolve_state(
    classes: &[EigenstateClass],
    families: &[LadderFamily],
    label: Label,
    q1: u32,
    q2: u32,
) -> Result<usize> {
    match label {
        Label::A => {
            let want = QuantumNumbers::Sharp { lambda1: q1, lambda2: q2 };
            classes.iter().find(|c| c.label == Label::A && c.qn == want).map(|c| c.index).ok_or_else(|| {
                let have: Vec<String> = classes
                    .iter()
                    .filter(|c| c.label == Label::A)
                    .filter_map(|c| c.qn.pair())
                    .map(|(a, b)| format!("A:{a},{b}"))
                    .collect();
                Error::Resolve(format!("no A state ({q1},{q2}); available: {}", list_or_none(&have)))
            })
        }
        Label::B | Label::C | Label::D => {
            let fam = families.iter().find(|f| f.key == FamilyKey::Ladder { label, lambda: q1 });
            match fam {
                Some(f) => f.member(q2).ok_or_else(|| {
                    Error::Resolve(format!(
                        "{label} family lambda={q1} has levels 0..={}; level {q2} does not exist",
                        f.len() - 1
                    ))
                }),
                None => {
                    let mut lambdas: Vec<u32> =
                        families.iter().filter(|f| f.label() == label).filter_map(|f| f.lambda()).collect();
                    lambdas.sort_by_key(|l| (l.abs_diff(q1), *l));
                    let near: Vec<String> = lambdas
                        .iter()
                        .take(5)
                        .map(|&l| {
                            let f = families.iter().find(|f| f.key == FamilyKey::Ladder { label, lambda: l });
                            format!("{label}:{l},0..{}", f.map_or(0, |f| f.len() - 1))
                        })
                        .collect();
                    Err(Error::Resolve(format!(
                        "no {label} family with lambda={q1}; nearest: {}",
                        list_or_none(&near)
                    )))
                }
            }
        }
        Label::E1 => {
            let want = QuantumNumbers::Locked { tau_d: q1, tau_a: q2 };
            classes.iter().find(|c| c.cluster == Some(0) && c.qn == want).map(|c| c.index).ok_or_else(|| {
                let mut have: Vec<(u32, u32)> =
                    classes.iter().filter(|c| c.cluster == Some(0)).filter_map(|c| c.qn.pair()).collect();
                have.sort_by_key(|&(a, b)| (a.abs_diff(q1) + b.abs_diff(q2), a, b));
                have.dedup();
                let near: Vec<String> = have.iter().take(6).map(|(a, b)| format!("E1:{a},{b}")).collect();
                Error::Resolve(format!("no E1 state ({q1},{q2}); nearest: {}", list_or_none(&near)))
            })
        }
        Label::E2 => Err(Error::Resolve("E2 states carry no quantum numbers; use #index".into())),
    }
}

fn list_or_none(items: &[String]) -> String {
    if items.is_empty() {
        "none".to_string()
    } else {
        items.join(", ")
    }
}
