mod common;

use proptest::prelude::*;
use trimer_core::eigen::{diagonalize, DEFAULT_TOL};
use trimer_core::matrix::DenseMatrix;
use trimer_core::model::{
    build_hamiltonian, hamiltonian_element, number_matrix_element, FockBasis, ModelParams, NumberOperators, Site,
};

fn params() -> impl Strategy<Value = ModelParams> {
    (1u32..=7, -1.0..1.0f64, -0.5..0.5f64, 0.01..1.0f64, 0.01..1.0f64, -0.3..0.3f64).prop_map(
        |(n, eb, d, k12, k23, z)| ModelParams {
            n_particles: n,
            epsilon_bar: eb,
            delta: d,
            kappa12: k12,
            kappa23: k23,
            zeta: z,
        },
    )
}

/// det(H − xI) by Gaussian elimination with partial pivoting.
fn shifted_det(h: &DenseMatrix, x: f64) -> f64 {
    let n = h.dim();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| h[(i, j)] - if i == j { x } else { 0.0 }).collect()).collect();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

/// Roots of the characteristic polynomial by sign scanning and bisection.
fn brute_force_spectrum(h: &DenseMatrix) -> Vec<f64> {
    let bound: f64 = (0..h.dim()).map(|i| h.row(i).iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max) + 1.0;
    let steps = 200_000;
    let dx = 2.0 * bound / steps as f64;
    let mut roots = Vec::new();
    let mut x0 = -bound;
    let mut f0 = shifted_det(h, x0);
    for s in 1..=steps {
        let x1 = -bound + s as f64 * dx;
        let f1 = shifted_det(h, x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0.signum() != f1.signum() && f1 != 0.0 {
            let (mut lo, mut hi, mut flo) = (x0, x1, f0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = shifted_det(h, mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if fm.signum() == flo.signum() {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    roots
}

#[test]
fn n2_spectrum_matches_characteristic_polynomial() {
    let p = ModelParams::with_particles(2);
    let basis = FockBasis::enumerate(2).unwrap();
    let h = build_hamiltonian(&basis, &p).unwrap();
    let sol = diagonalize(&h, DEFAULT_TOL).unwrap();
    let roots = brute_force_spectrum(&h);
    assert_eq!(roots.len(), 6, "roots {roots:?}");
    for (e, r) in sol.energies.iter().zip(&roots) {
        assert!((e - r).abs() < 1e-10, "{e} vs {r}");
    }
}

#[test]
fn n30_defaults_residuals() {
    let s = common::defaults();
    assert_eq!(s.eig.len(), 496);
    assert!(s.eig.max_residual <= 1e-10);
    assert!(s.eig.energies.windows(2).all(|w| w[0] <= w[1]));
    assert!(s.eig.orthonormality_error() <= 10.0 * 1e-10);
    let h = build_hamiltonian(&s.basis, &s.params).unwrap();
    let sum: f64 = s.eig.energies.iter().sum();
    assert!(((sum - h.trace()) / h.trace()).abs() < 1e-10);
}

#[test]
fn n30_every_eigenvector_holds_n_particles() {
    let s = common::defaults();
    for v in &s.eig.vectors {
        let total: f64 = Site::ALL.iter().map(|&k| s.ops.element(v, v, k)).sum();
        assert!((total - 30.0).abs() < 1e-9);
    }
}

#[test]
fn d30_pair_element_amplitude() {
    use trimer_core::dynrep::{resolve_state, Label};
    let s = common::defaults();
    let a = resolve_state(&s.classes, &s.families, Label::D, 30, 2).unwrap();
    let b = resolve_state(&s.classes, &s.families, Label::D, 30, 3).unwrap();
    let m = number_matrix_element(&s.basis, s.eig.vector(a), s.eig.vector(b), Site::One).unwrap();
    // equal weights: the amplitude 2|c_a||c_b||M| equals |M|
    assert!((m.abs() - 1.3).abs() / 1.3 < 0.15, "{m}");
}

#[test]
fn number_element_length_mismatch() {
    let basis = FockBasis::enumerate(2).unwrap();
    assert!(number_matrix_element(&basis, &[1.0; 6], &[1.0; 5], Site::One).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hamiltonian_matches_elements(p in params()) {
        let basis = FockBasis::enumerate(p.n_particles).unwrap();
        let h = build_hamiltonian(&basis, &p).unwrap();
        prop_assert!(h.is_symmetric());
        for (i, m) in basis.states().iter().enumerate() {
            prop_assert!(h.row_nnz(i) <= 5);
            for (j, n) in basis.states().iter().enumerate() {
                prop_assert_eq!(h[(i, j)], hamiltonian_element(m, n, &p).unwrap());
            }
        }
    }

    #[test]
    fn spectrum_contract(p in params()) {
        let basis = FockBasis::enumerate(p.n_particles).unwrap();
        let h = build_hamiltonian(&basis, &p).unwrap();
        let sol = diagonalize(&h, DEFAULT_TOL).unwrap();
        prop_assert_eq!(sol.len(), basis.len());
        prop_assert!(sol.max_residual <= DEFAULT_TOL);
        prop_assert!(sol.orthonormality_error() <= 10.0 * DEFAULT_TOL);
        prop_assert!(sol.energies.windows(2).all(|w| w[0] <= w[1]));
        let sum: f64 = sol.energies.iter().sum();
        let tr = h.trace();
        prop_assert!((sum - tr).abs() <= 1e-10 * tr.abs().max(1.0));
        let ops = NumberOperators::new(&basis);
        for (a, va) in sol.vectors.iter().enumerate() {
            let total: [f64; 3] = ops.elements(va, va);
            prop_assert!((total.iter().sum::<f64>() - p.n_particles as f64).abs() < 1e-9);
            let b = (a + 1) % sol.len();
            if b != a {
                let off = ops.elements(va, &sol.vectors[b]);
                prop_assert!(off.iter().sum::<f64>().abs() < 1e-9);
            }
            let pivot = va.iter().cloned().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
            prop_assert!(pivot > 0.0);
        }
    }

    #[test]
    fn index_of_inverts_states(n in 1u32..40) {
        let basis = FockBasis::enumerate(n).unwrap();
        prop_assert_eq!(basis.len(), ((n + 1) * (n + 2) / 2) as usize);
        for (i, s) in basis.states().iter().enumerate() {
            prop_assert_eq!(basis.index_of(s), Some(i));
        }
    }
}
