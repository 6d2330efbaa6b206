use dfs_forge_core::basis::{build_dfs_basis, build_six_qubit_basis, change_of_basis, tam_basis, QUBIT_A, QUBIT_B};
use dfs_forge_core::cg::clebsch_gordan;
use dfs_forge_core::operators::{spin_component, spin_squared, Axis, CMatrix};
use dfs_forge_core::spin::HalfInt;
use nalgebra::DVector;
use num_complex::Complex64;

/// Index of a ket string `q1 q2 q3` with q1 as bit 0.
fn ket(s: &str) -> usize {
    s.chars().enumerate().map(|(i, c)| usize::from(c == '1') << i).sum()
}

fn expected(terms: &[(&str, f64)]) -> DVector<f64> {
    let mut v = DVector::zeros(8);
    for (k, a) in terms {
        v[ket(k)] += a;
    }
    v
}

#[test]
fn single_dfs_vectors_match_closed_forms() {
    let r2 = 0.5f64.sqrt();
    let r3 = (1.0f64 / 3.0).sqrt();
    let r6 = (1.0f64 / 6.0).sqrt();
    let r23 = (2.0f64 / 3.0).sqrt();
    let forms = [
        expected(&[("010", r2), ("100", -r2)]),
        expected(&[("011", r2), ("101", -r2)]),
        expected(&[("001", r23), ("010", -r6), ("100", -r6)]),
        expected(&[("011", r6), ("101", r6), ("110", -r23)]),
        expected(&[("000", 1.0)]),
        expected(&[("001", r3), ("010", r3), ("100", r3)]),
        expected(&[("011", r3), ("101", r3), ("110", r3)]),
        expected(&[("111", 1.0)]),
    ];
    for (v, want) in build_dfs_basis().iter().zip(forms) {
        let got = v.amplitudes.map(|z| z.re);
        assert!((got - want).amax() < 1e-12, "vector {}", v.index);
        assert!(v.amplitudes.iter().all(|z| z.im == 0.0));
    }
}

#[test]
fn cg_orthogonality_small_spins() {
    let spins: Vec<HalfInt> = (0..=3).map(HalfInt::from_twice).collect();
    for &j1 in &spins {
        for &j2 in &spins {
            let mut totals = Vec::new();
            let mut j = (j1 - j2).abs();
            while j <= j1 + j2 {
                totals.push(j);
                j = j + HalfInt::ONE;
            }
            for &ja in &totals {
                for ma in ja.projections() {
                    for &jb in &totals {
                        for mb in jb.projections() {
                            let mut sum = 0.0;
                            for m1 in j1.projections() {
                                for m2 in j2.projections() {
                                    sum += clebsch_gordan(j1, m1, j2, m2, ja, ma).unwrap()
                                        * clebsch_gordan(j1, m1, j2, m2, jb, mb).unwrap();
                                }
                            }
                            let delta = if ja == jb && ma == mb { 1.0 } else { 0.0 };
                            assert!((sum - delta).abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }
}

fn residual(op: &CMatrix, v: &DVector<Complex64>, eigenvalue: f64) -> f64 {
    (op * v - v * Complex64::new(eigenvalue, 0.0)).norm()
}

#[test]
fn every_vector_is_a_simultaneous_eigenvector() {
    let all: Vec<usize> = (0..6).collect();
    let s2 = spin_squared(6, &all);
    let sz = spin_component(6, &all, Axis::Z);
    let sa = spin_squared(6, &QUBIT_A);
    let sb = spin_squared(6, &QUBIT_B);
    let sa12 = spin_squared(6, &QUBIT_A[..2]);
    let sb12 = spin_squared(6, &QUBIT_B[..2]);
    let basis = build_six_qubit_basis();
    assert_eq!(basis.len(), 64);
    for v in &basis {
        let l = &v.labels;
        let a = &v.amplitudes;
        let worst = [
            residual(&s2, a, l.s_tot.casimir()),
            residual(&sz, a, l.sz_tot.value()),
            residual(&sa, a, l.s_a.casimir()),
            residual(&sb, a, l.s_b.casimir()),
            residual(&sa12, a, l.s_a12.casimir()),
            residual(&sb12, a, l.s_b12.casimir()),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        assert!(worst < 1e-10, "vector {} residual {worst:e}", v.index);
    }
}

#[test]
fn change_of_basis_is_orthogonal_and_diagonalizes_totals() {
    let v = change_of_basis();
    assert!((&v * v.adjoint() - CMatrix::identity(64, 64)).norm() < 1e-12);
    let all: Vec<usize> = (0..6).collect();
    let s2 = &v * spin_squared(6, &all) * v.adjoint();
    let sz = &v * spin_component(6, &all, Axis::Z) * v.adjoint();
    for (i, b) in tam_basis().vectors.iter().enumerate() {
        for j in 0..64 {
            let (d2, dz) = if i == j { (b.labels.s_tot.casimir(), b.labels.sz_tot.value()) } else { (0.0, 0.0) };
            assert!((s2[(i, j)].re - d2).abs() < 1e-10 && s2[(i, j)].im.abs() < 1e-12);
            assert!((sz[(i, j)].re - dz).abs() < 1e-10);
        }
    }
}

#[test]
fn sector_dimensions() {
    let tam = tam_basis();
    let count = |s: i32| tam.sectors.iter().filter(|x| x.s_tot == s).map(|x| x.len()).sum::<usize>();
    assert_eq!([count(0), count(1), count(2), count(3)], [5, 27, 25, 7]);
    assert_eq!(tam.sector(1, -1).unwrap().len(), 9);
    assert_eq!(tam.sector(2, -2).unwrap().len(), 5);
}

#[test]
fn spin_zero_vector_is_contracted_singlets() {
    // first spin-0 vector: both DFS pairs in singlets, third qubits coupled to 0
    let tam = tam_basis();
    let v = &tam.vectors[0];
    assert_eq!(v.labels.s_a12, HalfInt::ZERO);
    assert_eq!(v.labels.s_b12, HalfInt::ZERO);
    let r2 = 0.5f64.sqrt();
    let mut want = DVector::<f64>::zeros(64);
    // singlet(A1,A2) x singlet(B2,B1) x singlet(B3,A3), each (|ud> - |du>)/sqrt2
    for a in 0..2usize {
        for b in 0..2usize {
            for c in 0..2usize {
                let (a1, a2) = (a, 1 - a);
                let (b2, b1) = (b, 1 - b);
                let (b3, a3) = (c, 1 - c);
                let sign = [1.0, -1.0][a] * [1.0, -1.0][b] * [1.0, -1.0][c];
                let idx = a3 | a2 << 1 | a1 << 2 | b1 << 3 | b2 << 4 | b3 << 5;
                want[idx] += sign * r2 * r2 * r2;
            }
        }
    }
    let got = v.amplitudes.map(|z| z.re);
    let overlap = got.dot(&want);
    assert!((overlap.abs() - 1.0).abs() < 1e-12, "overlap {overlap}");
}
