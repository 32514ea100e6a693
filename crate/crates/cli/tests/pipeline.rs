use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use trimer_cli::{exit_code, run, Cli};
use trimer_core::Error;

struct Workspace {
    _dir: tempfile::TempDir,
    root: PathBuf,
    config: PathBuf,
}

impl Workspace {
    fn new(extra: &str) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        let config = root.join("run.cfg");
        let text = format!(
            "cache_path = {}\nout_dir = {}\n{extra}",
            root.join("eigen.cache").display(),
            root.join("out").display()
        );
        fs::write(&config, text).unwrap();
        Workspace { _dir: dir, root, config }
    }

    fn run(&self, args: &[&str]) -> Result<String, Error> {
        let mut argv = vec!["trimer", "--config", self.config.to_str().unwrap()];
        argv.extend_from_slice(args);
        let cli = Cli::try_parse_from(argv).expect("valid arguments");
        let mut out = Vec::new();
        run(&cli, &mut out)?;
        Ok(String::from_utf8(out).unwrap())
    }

    fn out(&self, name: &str) -> PathBuf {
        self.root.join("out").join(name)
    }
}

fn columns(path: &Path) -> Vec<Vec<f64>> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t_over_T,n1,n2,n3"));
    let mut cols = vec![Vec::new(); 4];
    for l in lines {
        for (c, v) in cols.iter_mut().zip(l.split(',')) {
            c.push(v.parse::<f64>().unwrap());
        }
    }
    cols
}

#[test]
fn commands_need_a_cache() {
    let ws = Workspace::new("");
    for args in [&["classify"][..], &["simulate", "--state", "#0"], &["compare", "--state", "#0 + #1"], &["grid", "--index", "0"]] {
        let err = ws.run(args).unwrap_err();
        assert!(err.to_string().contains("diagonalize"), "{err}");
        assert_eq!(exit_code(&err), 3);
    }
    assert!(ws.out("config.resolved").exists());
}

#[test]
fn full_pipeline_at_defaults() {
    let ws = Workspace::new("");
    let msg = ws.run(&["diagonalize"]).unwrap();
    assert!(msg.starts_with("496 eigenstates"), "{msg}");

    let msg = ws.run(&["classify"]).unwrap();
    assert!(msg.contains("A=") && msg.contains("E2="), "{msg}");
    let first = fs::read(ws.out("classification.csv")).unwrap();
    let fam = fs::read(ws.out("families.csv")).unwrap();
    ws.run(&["classify"]).unwrap();
    assert_eq!(fs::read(ws.out("classification.csv")).unwrap(), first);
    assert_eq!(fs::read(ws.out("families.csv")).unwrap(), fam);

    ws.run(&["simulate", "--state", "C:0,3 + C:0,4"]).unwrap();
    let bytes = fs::read(ws.out("trajectory.csv")).unwrap();
    let cols = columns(&ws.out("trajectory.csv"));
    assert_eq!(cols[0].len(), 2000);
    assert!((cols[0].last().unwrap() - 4.0).abs() < 1e-12);
    assert!(cols[3].iter().all(|&n3| (n3 - 0.2).abs() < 0.1));
    ws.run(&["simulate", "--state", "C:0,3 + C:0,4"]).unwrap();
    assert_eq!(fs::read(ws.out("trajectory.csv")).unwrap(), bytes);

    let single = ws.root.join("single.csv");
    ws.run(&["simulate", "--state", "#5", "--tmax", "2", "--samples", "50", "--output", single.to_str().unwrap()])
        .unwrap();
    let cols = columns(&single);
    assert_eq!(cols[0].len(), 50);
    for c in &cols[1..] {
        assert!(c.iter().all(|&x| x == c[0]));
    }

    let report = ws.run(&["compare", "--state", "D:4,0 + D:4,1"]).unwrap();
    let row = report.lines().find(|l| l.starts_with("1,")).expect("site 1 row");
    let f: Vec<&str> = row.split(',').collect();
    let exact: f64 = f[2].parse().unwrap();
    let predicted: f64 = f[3].parse().unwrap();
    assert!((exact - 0.49).abs() < 0.05, "{report}");
    assert!(predicted > 0.0 && f[4].ends_with('%'), "{report}");

    let report = ws.run(&["compare", "--state", "#0 + #1"]).unwrap();
    assert!(report.contains("n/a"), "{report}");

    ws.run(&["grid", "--index", "0"]).unwrap();
    let grid = fs::read_to_string(ws.out("density_0.csv")).unwrap();
    assert_eq!(grid.lines().count(), 256 * 256 + 1);
    let err = ws.run(&["grid", "--index", "496"]).unwrap_err();
    assert_eq!(exit_code(&err), 2);

    let err = ws.run(&["simulate", "--state", "C:24,40"]).unwrap_err();
    assert_eq!(exit_code(&err), 4);
    assert!(err.to_string().contains("24"), "{err}");
    let err = ws.run(&["simulate", "--state", "Q:1,2"]).unwrap_err();
    assert_eq!(exit_code(&err), 2);
}

#[test]
fn cache_from_other_parameters_is_refused() {
    let ws = Workspace::new("N = 6\n");
    ws.run(&["diagonalize"]).unwrap();
    ws.run(&["classify"]).unwrap();
    fs::write(
        &ws.config,
        format!(
            "cache_path = {}\nout_dir = {}\nN = 6\nzeta = 0.2\n",
            ws.root.join("eigen.cache").display(),
            ws.root.join("out").display()
        ),
    )
    .unwrap();
    let err = ws.run(&["simulate", "--state", "#0"]).unwrap_err();
    assert_eq!(exit_code(&err), 3);
}

#[test]
fn bad_config_is_a_parse_error() {
    let ws = Workspace::new("colour = blue\n");
    let err = ws.run(&["diagonalize"]).unwrap_err();
    assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    assert_eq!(exit_code(&err), 2);
}
