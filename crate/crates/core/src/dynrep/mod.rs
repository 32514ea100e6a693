//! Torus (dynamical) representation of eigenstates, classification and
//! ladder families.

pub mod classify;
pub mod field;
pub mod fit;
pub mod ladder;
pub mod stats;

pub use classify::{classify_eigenstates, label_counts, EigenstateClass, Label, QuantumNumbers, Thresholds};
pub use field::{chart_value, evaluate_dynrep, torus_value, ChartDensity, DynRepField, TorusGrid};
pub use fit::{fit_from_density, fit_from_moment, transversal_moment, wrap_angle, OscillatorFit, Transversal};
pub use ladder::{
    build_ladders, fit_oscillator, fit_oscillator_at, resolve_state, E1Axis, FamilyKey, LadderFamily,
};
pub use stats::{site_statistics, SiteStatistics, TransitionTable};
