//! CSV rendering with 12 significant digits and a '.' decimal point.

use std::fmt::Write as _;

use crate::dynamics::Trajectory;
use crate::dynrep::{ChartDensity, EigenstateClass, FamilyKey, LadderFamily};
use crate::dynrep::ladder::E1Axis;

/// `%.12g`-style formatting.
pub fn fmt_g12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa.to_string());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut s = String::from("t_over_T,n1,n2,n3\n");
    for i in 0..traj.len() {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            fmt_g12(traj.times[i]),
            fmt_g12(traj.n[0][i]),
            fmt_g12(traj.n[1][i]),
            fmt_g12(traj.n[2][i])
        );
    }
    s
}

pub fn classification_csv(classes: &[EigenstateClass]) -> String {
    let mut s = String::from("index,energy,label,qn1,qn2,confidence\n");
    for c in classes {
        let (q1, q2) = c.qn.pair().map_or((String::new(), String::new()), |(a, b)| (a.to_string(), b.to_string()));
        let _ = writeln!(s, "{},{},{},{q1},{q2},{}", c.index, fmt_g12(c.energy), c.label, fmt_g12(c.confidence));
    }
    s
}

pub fn families_csv(families: &[LadderFamily]) -> String {
    let mut s = String::from("family_id,label,lambda,members,omega,m_eff\n");
    for f in families {
        let lambda = match f.key {
            FamilyKey::Ladder { lambda, .. } => lambda.to_string(),
            FamilyKey::Locked { axis: E1Axis::Diagonal { tau_a }, .. } => format!("ta={tau_a}"),
            FamilyKey::Locked { axis: E1Axis::Antisymmetric { tau_d }, .. } => format!("td={tau_d}"),
        };
        let members: Vec<String> = f.members.iter().map(|m| m.to_string()).collect();
        let (omega, m_eff) = f.fit.map_or((String::new(), String::new()), |fit| (fmt_g12(fit.omega), fmt_g12(fit.m_eff)));
        let _ = writeln!(s, "{},{},{lambda},{},{omega},{m_eff}", f.id, f.label(), members.join(";"));
    }
    s
}

pub fn density_csv(density: &ChartDensity) -> String {
    let pts = density.grid.points();
    let mut s = String::from("u,v,density\n");
    for (iu, &u) in pts.iter().enumerate() {
        for (iv, &v) in pts.iter().enumerate() {
            let _ = writeln!(s, "{},{},{}", fmt_g12(u), fmt_g12(v), fmt_g12(density.at(iu, iv)));
        }
    }
    s
}
