#![allow(dead_code)]

use std::sync::OnceLock;

use trimer_core::dynrep::{Thresholds, TorusGrid};
use trimer_core::model::ModelParams;
use trimer_core::session::{solve, Session};

/// The default N = 30 system, diagonalized and classified once per test binary.
pub fn defaults() -> &'static Session {
    static S: OnceLock<Session> = OnceLock::new();
    S.get_or_init(|| {
        let p = ModelParams::default();
        let eig = solve(&p, 1e-10).expect("diagonalization");
        Session::new(p, eig, TorusGrid::default(), Thresholds::default()).expect("classification")
    })
}
