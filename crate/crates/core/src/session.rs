//! A diagonalized and classified system, ready for resolving state specs,
//! simulating superpositions and comparing against the idealized elements.

use crate::analytic::{
    ideal_element_b, ideal_element_c, ideal_element_d, ideal_element_e1, predicted_amplitude, MatrixElementResult,
};
use crate::dynamics::{closed_form_trajectory, time_grid, SuperpositionSpec, Trajectory};
use crate::dynrep::ladder::E1Axis;
use crate::dynrep::{
    build_ladders, classify_eigenstates, resolve_state, EigenstateClass, FamilyKey, Label, LadderFamily,
    OscillatorFit, QuantumNumbers, Thresholds, TorusGrid, TransitionTable,
};
use crate::eigen::{diagonalize, EigenSolution};
use crate::io::{RunConfig, StateSpec, Target};
use crate::model::{build_hamiltonian, FockBasis, ModelParams, NumberOperators, Site};
use crate::{Error, Result};

pub struct Session {
    pub params: ModelParams,
    pub basis: FockBasis,
    pub eig: EigenSolution,
    pub ops: NumberOperators,
    pub transitions: TransitionTable,
    pub grid: TorusGrid,
    pub thresholds: Thresholds,
    pub classes: Vec<EigenstateClass>,
    pub families: Vec<LadderFamily>,
}

/// Exact spectrum of the model defined by `params`.
pub fn solve(params: &ModelParams, tol: f64) -> Result<EigenSolution> {
    params.validate()?;
    let basis = FockBasis::enumerate(params.n_particles)?;
    let h = build_hamiltonian(&basis, params)?;
    diagonalize(&h, tol)
}

impl Session {
    pub fn new(params: ModelParams, eig: EigenSolution, grid: TorusGrid, thresholds: Thresholds) -> Result<Self> {
        params.validate()?;
        let basis = FockBasis::enumerate(params.n_particles)?;
        if eig.len() != basis.len() {
            return Err(Error::arg(format!(
                "eigen solution has {} states, basis has {}",
                eig.len(),
                basis.len()
            )));
        }
        let ops = NumberOperators::new(&basis);
        let transitions = TransitionTable::new(&basis, &eig);
        let classes = classify_eigenstates(&basis, &eig, &transitions, grid, &thresholds)?;
        let families = build_ladders(&classes, &basis, &eig, &transitions, grid, &thresholds)?;
        Ok(Session { params, basis, eig, ops, transitions, grid, thresholds, classes, families })
    }

    /// Diagonalizes from scratch with the settings of `cfg`.
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let eig = solve(&cfg.params, cfg.tol)?;
        Session::new(cfg.params, eig, cfg.grid()?, cfg.thresholds)
    }

    pub fn time_unit(&self) -> Result<f64> {
        self.params.time_unit()
    }

    pub fn family(&self, key: FamilyKey) -> Option<&LadderFamily> {
        self.families.iter().find(|f| f.key == key)
    }

    pub fn resolve_target(&self, target: &Target) -> Result<usize> {
        match *target {
            Target::Index(i) if i < self.eig.len() => Ok(i),
            Target::Index(i) => {
                Err(Error::Resolve(format!("index {i} out of range (0..{})", self.eig.len())))
            }
            Target::Class { label, q1, q2 } => resolve_state(&self.classes, &self.families, label, q1, q2),
        }
    }

    pub fn resolve(&self, spec: &StateSpec) -> Result<SuperpositionSpec> {
        for t in &spec.terms {
            if let Target::Index(_) = t.target {
                self.resolve_target(&t.target)?;
            }
        }
        let sp = spec.to_superposition(|t| self.resolve_target(t))?;
        sp.validate(self.eig.len())?;
        Ok(sp)
    }

    /// Closed-form trajectory over `samples` points in [0, t_max·T].
    pub fn trajectory(&self, sp: &SuperpositionSpec, t_max: f64, samples: usize) -> Result<Trajectory> {
        let times = time_grid(t_max, samples)?;
        closed_form_trajectory(sp, &self.eig, &self.ops, self.time_unit()?, &times)
    }

    /// Exact elements and offsets of a two-state superposition next to the
    /// idealized predictions for its family.
    pub fn compare(&self, sp: &SuperpositionSpec) -> Result<Comparison> {
        sp.validate(self.eig.len())?;
        let (va, vb) = (self.eig.vector(sp.a), self.eig.vector(sp.b));
        let ca = &self.classes[sp.a];
        let cb = &self.classes[sp.b];
        let prediction = self.predict(ca, cb);
        let (family, fit, note) = match &prediction {
            Ok(p) => (Some(p.family), Some(p.fit), None),
            Err(e) => (None, None, Some(e.to_string())),
        };

        let sites = Site::ALL.map(|site| {
            let m = self.ops.element(va, vb, site);
            let exact_amplitude = 2.0 * sp.mag_a * sp.mag_b * m.abs();
            let exact_offset = sp.mag_a.powi(2) * self.ops.element(va, va, site)
                + sp.mag_b.powi(2) * self.ops.element(vb, vb, site);
            let (analytic, analytic_amplitude, analytic_offset) = match &prediction {
                Ok(p) => {
                    let e = p.elements[site.index()];
                    let off = sp.mag_a.powi(2) * p.diag_a[site.index()] + sp.mag_b.powi(2) * p.diag_b[site.index()];
                    (Some(e), Some(predicted_amplitude(&e, sp.mag_a, sp.mag_b)), Some(off))
                }
                Err(_) => (None, None, None),
            };
            SiteComparison { site, exact_element: m, exact_amplitude, exact_offset, analytic, analytic_amplitude, analytic_offset }
        });
        Ok(Comparison { spec: *sp, family, fit, sites, note })
    }

    fn predict(&self, ca: &EigenstateClass, cb: &EigenstateClass) -> Result<Prediction> {
        let n = self.params.n_particles;
        if ca.label != cb.label {
            return Err(Error::Unsupported(format!(
                "states {} ({}) and {} ({}) belong to different classes",
                ca.index, ca.label, cb.index, cb.label
            )));
        }
        match (ca.qn, cb.qn) {
            (QuantumNumbers::Ladder { lambda: la, tau: ta }, QuantumNumbers::Ladder { lambda: lb, tau: tb }) => {
                let key = FamilyKey::Ladder { label: ca.label, lambda: lb };
                let fam = self.family(key).ok_or_else(|| Error::Resolve(format!("no family {key}")))?;
                let fit = family_fit(fam)?;
                let alpha = fam.alpha.unwrap_or([0, 0]);
                let (m, o) = (fit.m_eff, fit.omega);
                let elem = |lp, tp, l, t, s| -> Result<MatrixElementResult> {
                    match ca.label {
                        Label::C => ideal_element_c(lp, tp, l, t, s, alpha, m, o),
                        Label::B => ideal_element_b(lp, tp, l, t, s, alpha, m, o),
                        _ => ideal_element_d(lp, tp, l, t, s, m, o, n),
                    }
                };
                let mut elements = [MatrixElementResult::ZERO; 3];
                let mut diag_a = [0.0; 3];
                let mut diag_b = [0.0; 3];
                for s in Site::ALL {
                    elements[s.index()] = elem(la, ta, lb, tb, s)?;
                    diag_a[s.index()] = elem(la, ta, la, ta, s)?.value().re;
                    diag_b[s.index()] = elem(lb, tb, lb, tb, s)?.value().re;
                }
                Ok(Prediction { family: key, fit, elements, diag_a, diag_b })
            }
            (QuantumNumbers::Locked { tau_d: da, tau_a: aa }, QuantumNumbers::Locked { tau_d: db, tau_a: ab }) => {
                let cluster = cb.cluster.unwrap_or(0);
                if ca.cluster != cb.cluster {
                    return Err(Error::Unsupported("E1 states from different clusters".into()));
                }
                let key = FamilyKey::Locked { cluster, axis: E1Axis::Diagonal { tau_a: ab } };
                let fam = self.family(key).ok_or_else(|| Error::Resolve(format!("no family {key}")))?;
                let fit = family_fit(fam)?;
                let mut elements = [MatrixElementResult::ZERO; 3];
                for s in Site::ALL {
                    elements[s.index()] = ideal_element_e1(da, aa, db, ab, s, fit.m_eff, fit.omega, n)?;
                }
                let third = n as f64 / 3.0;
                Ok(Prediction { family: key, fit, elements, diag_a: [third; 3], diag_b: [third; 3] })
            }
            _ => Err(Error::Unsupported(format!("no idealized elements for type {}", ca.label))),
        }
    }
}

fn family_fit(fam: &LadderFamily) -> Result<OscillatorFit> {
    fam.fit.ok_or_else(|| Error::InsufficientData(format!("family {} has no oscillator fit", fam.key)))
}

struct Prediction {
    family: FamilyKey,
    fit: OscillatorFit,
    elements: [MatrixElementResult; 3],
    diag_a: [f64; 3],
    diag_b: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteComparison {
    pub site: Site,
    /// ⟨a|n̂_k|b⟩, real.
    pub exact_element: f64,
    pub exact_amplitude: f64,
    pub exact_offset: f64,
    pub analytic: Option<MatrixElementResult>,
    pub analytic_amplitude: Option<f64>,
    pub analytic_offset: Option<f64>,
}

impl SiteComparison {
    /// (analytic − exact)/exact for the amplitude.
    pub fn amplitude_rel_error(&self) -> Option<f64> {
        self.analytic_amplitude.map(|a| rel_error(a, self.exact_amplitude))
    }

    pub fn offset_rel_error(&self) -> Option<f64> {
        self.analytic_offset.map(|a| rel_error(a, self.exact_offset))
    }
}

fn rel_error(predicted: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        if predicted == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (predicted - exact) / exact.abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub spec: SuperpositionSpec,
    pub family: Option<FamilyKey>,
    pub fit: Option<OscillatorFit>,
    pub sites: [SiteComparison; 3],
    /// Why no analytic prediction is available, if so.
    pub note: Option<String>,
}
