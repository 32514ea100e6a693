//! Eigendata cache.
//!
//! Layout: a UTF-8 header of `key value` lines terminated by `end\n`,
//! followed by little-endian f64 data: L energies, then the L eigenvectors
//! one after another (L values each).
//!
//! ```text
//! TRIMER-EIGEN
//! version 1
//! N 30
//! epsilon_bar 0
//! delta 0.1
//! kappa12 0.25
//! kappa23 0.25
//! zeta 0.1
//! tol 0.0000000001
//! max_residual ...
//! dimension 496
//! end
//! ```
//!
//! Parameters are written as shortest round-trip decimals and compared
//! exactly on load.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::eigen::EigenSolution;
use crate::model::{FockBasis, ModelParams};
use crate::{Error, Result};

const MAGIC: &str = "TRIMER-EIGEN";
const VERSION: u32 = 1;

fn header(params: &ModelParams, eig: &EigenSolution) -> String {
    format!(
        "{MAGIC}\nversion {VERSION}\nN {}\nepsilon_bar {}\ndelta {}\nkappa12 {}\nkappa23 {}\nzeta {}\ntol {}\nmax_residual {}\ndimension {}\nend\n",
        params.n_particles,
        params.epsilon_bar,
        params.delta,
        params.kappa12,
        params.kappa23,
        params.zeta,
        eig.tol,
        eig.max_residual,
        eig.len()
    )
}

pub fn save_cache(path: &Path, params: &ModelParams, eig: &EigenSolution) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(fs::File::create(path)?);
    w.write_all(header(params, eig).as_bytes())?;
    for e in &eig.energies {
        w.write_all(&e.to_le_bytes())?;
    }
    for v in &eig.vectors {
        for x in v {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Loads a cache written for exactly `params`.
pub fn load_cache(path: &Path, params: &ModelParams) -> Result<EigenSolution> {
    let cache_err = |message: String| Error::Cache { path: path.to_path_buf(), message };
    let file = fs::File::open(path).map_err(|e| {
        cache_err(format!("cannot open ({e}); run the `diagonalize` command first to create it"))
    })?;
    let mut r = BufReader::new(file);

    let mut fields: Vec<(String, String)> = Vec::new();
    let mut line = String::new();
    let mut first = true;
    loop {
        line.clear();
        if r.read_line(&mut line)? == 0 {
            return Err(cache_err("truncated header".into()));
        }
        let l = line.trim_end();
        if first {
            if l != MAGIC {
                return Err(cache_err("not an eigendata cache (bad magic)".into()));
            }
            first = false;
            continue;
        }
        if l == "end" {
            break;
        }
        let (k, v) = l.split_once(' ').ok_or_else(|| cache_err(format!("malformed header line '{l}'")))?;
        fields.push((k.to_string(), v.to_string()));
    }
    let get = |key: &str| -> Result<&str> {
        fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| cache_err(format!("header lacks '{key}'")))
    };
    let num = |key: &str| -> Result<f64> {
        get(key)?.parse::<f64>().map_err(|_| cache_err(format!("bad value for '{key}'")))
    };

    let version: u32 = get("version")?.parse().map_err(|_| cache_err("bad version".into()))?;
    if version != VERSION {
        return Err(cache_err(format!("unsupported format version {version}")));
    }
    let n: u32 = get("N")?.parse().map_err(|_| cache_err("bad N".into()))?;
    let stored = ModelParams {
        n_particles: n,
        epsilon_bar: num("epsilon_bar")?,
        delta: num("delta")?,
        kappa12: num("kappa12")?,
        kappa23: num("kappa23")?,
        zeta: num("zeta")?,
    };
    if stored != *params {
        return Err(cache_err(format!(
            "parameters {stored:?} do not match the configuration {params:?}; rerun `diagonalize`"
        )));
    }
    let dim: usize = get("dimension")?.parse().map_err(|_| cache_err("bad dimension".into()))?;
    if dim != FockBasis::dimension_for(n) {
        return Err(cache_err(format!("dimension {dim} inconsistent with N = {n}")));
    }
    let tol = num("tol")?;
    let max_residual = num("max_residual")?;

    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != 8 * dim * (dim + 1) {
        return Err(cache_err(format!("expected {} data bytes, found {}", 8 * dim * (dim + 1), bytes.len())));
    }
    let values: Vec<f64> =
        bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8"))).collect();
    let energies = values[..dim].to_vec();
    let vectors = values[dim..].chunks_exact(dim).map(|c| c.to_vec()).collect();
    Ok(EigenSolution { energies, vectors, tol, max_residual })
}
