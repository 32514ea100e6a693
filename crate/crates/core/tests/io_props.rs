mod common;

use proptest::prelude::*;
use trimer_core::dynrep::Label;
use trimer_core::io::csv::{classification_csv, families_csv, fmt_g12};
use trimer_core::io::*;
use trimer_core::model::{ModelParams, Site};
use trimer_core::session::solve;
use trimer_core::Error;

#[test]
fn empty_config_gives_defaults() {
    let cfg = parse_config("").unwrap();
    assert_eq!(cfg, RunConfig::default());
    let p = cfg.params;
    assert_eq!((p.n_particles, p.delta, p.kappa12, p.kappa23, p.zeta, p.epsilon_bar), (30, 0.1, 0.25, 0.25, 0.1, 0.0));
}

#[test]
fn config_overrides_and_errors() {
    let cfg = parse_config("# small system\nN=2\n").unwrap();
    assert_eq!(cfg.params, ModelParams { n_particles: 2, ..ModelParams::default() });
    assert_eq!(cfg.thresholds, RunConfig::default().thresholds);

    assert!(matches!(parse_config("N=-1"), Err(Error::InvalidParameter(_))));
    assert!(matches!(parse_config("N=0"), Err(Error::InvalidParameter(_))));
    assert!(matches!(parse_config("delta = 0.1\nbogus = 3"), Err(Error::Parse { line: 2, .. })));
    assert!(matches!(parse_config("\n\nzeta"), Err(Error::Parse { line: 3, .. })));
    assert!(matches!(parse_config("kappa12 = abc"), Err(Error::Parse { line: 1, .. })));
    assert!(matches!(parse_config("kappa12 = inf"), Err(Error::InvalidParameter(_))));
    assert!(matches!(parse_config("zeta = NaN"), Err(Error::InvalidParameter(_))));
    assert!(parse_config("grid_resolution = 8").is_err());
}

#[test]
fn resolved_config_round_trips() {
    let cfg = parse_config("N = 7\nkappa23 = 0.3\nv_thresh = 0.05\nt_max = 12.5\nout_dir = results").unwrap();
    assert_eq!(parse_config(&cfg.to_text()).unwrap(), cfg);
}

#[test]
fn state_spec_examples() {
    let s = parse_state_spec("D:30,2 + D:30,3").unwrap();
    assert_eq!(s.terms.len(), 2);
    assert_eq!(s.terms[0].target, Target::Class { label: Label::D, q1: 30, q2: 2 });
    let m = s.magnitudes().unwrap();
    assert!((m[0] - m[1]).abs() < 1e-15 && (m[0] * m[0] + m[1] * m[1] - 1.0).abs() < 1e-15);

    let s = parse_state_spec("#0").unwrap();
    let sp = s.to_superposition(|_| unreachable!()).unwrap();
    assert_eq!((sp.a, sp.mag_a, sp.mag_b), (0, 1.0, 0.0));

    let s = parse_state_spec("E1:0,0 + E1:1,0").unwrap();
    assert_eq!(s.terms[1].target, Target::Class { label: Label::E1, q1: 1, q2: 0 });
    assert_eq!(parse_state_spec("E:1,0").unwrap().terms[0].target, s.terms[1].target);

    let s = parse_state_spec("w=0.6 g=0.1 C:0,3 + #7").unwrap();
    assert_eq!(s.to_string(), "w=0.6 g=0.1 C:0,3 + #7");
    assert!((s.magnitudes().unwrap()[1] - 0.8).abs() < 1e-15);
}

#[test]
fn state_spec_rejects_bad_input() {
    for bad in ["", "X:1,2", "C:1", "C:a,2", "C:1,2 + C:1,3 + C:1,4", "#", "#-1", "C:1,2 +", "w=2 C:1,2"] {
        let r = parse_state_spec(bad).and_then(|s| s.magnitudes().map(|_| s));
        assert!(r.is_err(), "accepted '{bad}'");
    }
    assert!(parse_state_spec("w=0.5 C:0,1 + w=0.5 C:0,2").unwrap().magnitudes().is_err());
}

#[test]
fn scenario_specs_resolve_at_defaults() {
    let s = common::defaults();
    for text in ["E1:0,0 + E1:1,0", "C:0,3 + C:0,4", "C:24,4 + C:24,5", "D:4,0 + D:4,1", "D:30,2 + D:30,3"] {
        let sp = s.resolve(&parse_state_spec(text).unwrap()).unwrap();
        assert_ne!(sp.a, sp.b, "{text}");
    }
    let err = s.resolve(&parse_state_spec("C:24,40").unwrap()).unwrap_err();
    assert!(matches!(err, Error::Resolve(_)));
    assert!(err.to_string().contains("24"), "{err}");
    assert!(matches!(s.resolve(&parse_state_spec("#496").unwrap()), Err(Error::Resolve(_))));
}

#[test]
fn cache_round_trip_at_defaults() {
    let s = common::defaults();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sub/eigen.cache");
    save_cache(&path, &s.params, &s.eig).unwrap();
    let back = load_cache(&path, &s.params).unwrap();
    assert_eq!(back.energies.len(), s.eig.energies.len());
    for (a, b) in back.energies.iter().zip(&s.eig.energies) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
    assert_eq!(back.tol, s.eig.tol);
    assert_eq!(back.max_residual, s.eig.max_residual);
    for (a, b) in [(0, 1), (216, 217), (456, 457), (10, 400)] {
        for site in Site::ALL {
            let x = s.ops.element(s.eig.vector(a), s.eig.vector(b), site);
            let y = s.ops.element(back.vector(a), back.vector(b), site);
            assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn cache_rejects_mismatch_and_damage() {
    let p = ModelParams::with_particles(4);
    let eig = solve(&p, 1e-10).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.bin");

    let missing = load_cache(&path, &p).unwrap_err();
    assert!(matches!(missing, Error::Cache { .. }));
    assert!(missing.to_string().contains("diagonalize"), "{missing}");

    save_cache(&path, &p, &eig).unwrap();
    assert_eq!(load_cache(&path, &p).unwrap(), eig);
    let other = ModelParams { zeta: 0.1000001, ..p };
    assert!(matches!(load_cache(&path, &other), Err(Error::Cache { .. })));
    assert!(matches!(load_cache(&path, &ModelParams::with_particles(5)), Err(Error::Cache { .. })));

    let bytes = std::fs::read(&path).unwrap();
    std::fs::write(&path, &bytes[..bytes.len() - 8]).unwrap();
    assert!(matches!(load_cache(&path, &p), Err(Error::Cache { .. })));
    std::fs::write(&path, b"garbage\n").unwrap();
    assert!(matches!(load_cache(&path, &p), Err(Error::Cache { .. })));
}

#[test]
fn csv_output_is_stable() {
    let s = common::defaults();
    let c = classification_csv(&s.classes);
    assert_eq!(c.lines().count(), 497);
    assert!(c.starts_with("index,energy,label,qn1,qn2,confidence\n"));
    assert_eq!(c, classification_csv(&s.classes));
    let f = families_csv(&s.families);
    assert_eq!(f.lines().count(), s.families.len() + 1);
    assert!(c.lines().all(|l| l.split(',').count() == 6));
    assert_eq!(fmt_g12(0.2987), "0.2987");
}

fn arb_label() -> impl Strategy<Value = Label> {
    prop::sample::select(vec![Label::A, Label::B, Label::C, Label::D, Label::E1])
}

fn arb_term() -> impl Strategy<Value = Term> {
    let target = prop_oneof![
        (arb_label(), 0u32..100, 0u32..100).prop_map(|(label, q1, q2)| Target::Class { label, q1, q2 }),
        (0usize..10_000).prop_map(Target::Index),
    ];
    (target, prop::option::of(0.0..=1.0f64), prop::option::of(-10.0..10.0f64))
        .prop_map(|(target, weight, phase)| Term { target, weight, phase })
}

proptest! {
    #[test]
    fn state_spec_round_trip(terms in prop::collection::vec(arb_term(), 1..=2)) {
        let spec = StateSpec { terms };
        let text = spec.to_string();
        prop_assert_eq!(parse_state_spec(&text).unwrap(), spec);
    }

    #[test]
    fn g12_parses_back_to_twelve_digits(x in prop::num::f64::NORMAL) {
        let y: f64 = fmt_g12(x).parse().unwrap();
        prop_assert!(((y - x) / x).abs() < 1e-11);
    }
}
