mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use penning_core::angmom::projections;
use penning_core::states::atomic_phase_state;
use penning_core::{
    clebsch_gordan, couple, d_matrix, hopf_state, rotate_axis, wigner_d, Axis, ControlParams, ProductState,
    Superposition, TwiceInt,
};
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn t(x: i32) -> TwiceInt {
    TwiceInt(x)
}

fn theta_grid() -> impl Iterator<Item = f64> {
    (0..25).map(|k| -PI + 2.0 * PI * k as f64 / 24.0)
}

#[test]
fn d_matches_matrix_exponential() {
    for j2 in 0..=8 {
        for theta in [0.3, FRAC_PI_2, 2.2, PI] {
            let oracle = common::expm_d(j2, theta);
            let d = d_matrix(t(j2), theta).unwrap();
            for (r, row) in oracle.iter().enumerate() {
                for (c, want) in row.iter().enumerate() {
                    assert!((d.at(r, c) - want).abs() < 1e-11, "2j={j2} θ={theta} ({r},{c}): {} vs {want}", d.at(r, c));
                }
            }
        }
    }
}

#[test]
fn d_orthonormal_rows_and_columns() {
    for j2 in 0..=8 {
        for theta in theta_grid() {
            let d = d_matrix(t(j2), theta).unwrap();
            let n = d.dim();
            for a in 0..n {
                for b in 0..n {
                    let cols: f64 = (0..n).map(|k| d.at(k, a) * d.at(k, b)).sum();
                    let rows: f64 = (0..n).map(|k| d.at(a, k) * d.at(b, k)).sum();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((cols - want).abs() < TOL && (rows - want).abs() < TOL, "2j={j2} θ={theta}");
                }
            }
        }
    }
}

#[test]
fn d_index_swap_symmetry() {
    for j2 in 0..=8 {
        for theta in theta_grid() {
            for mp in projections(t(j2)) {
                for m in projections(t(j2)) {
                    let sign = if ((mp.0 - m.0) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                    let lhs = wigner_d(t(j2), mp, m, theta).unwrap();
                    let rhs = sign * wigner_d(t(j2), m, mp, theta).unwrap();
                    assert!((lhs - rhs).abs() < TOL);
                }
            }
        }
    }
}

#[test]
fn d_composition() {
    for j2 in 0..=8 {
        for (a, b) in [(0.3, 0.9), (FRAC_PI_2, FRAC_PI_2), (-1.1, 2.5)] {
            let prod = d_matrix(t(j2), a).unwrap().product(&d_matrix(t(j2), b).unwrap());
            let direct = d_matrix(t(j2), a + b).unwrap();
            for (x, y) in prod.entries().iter().zip(direct.entries()) {
                assert!((x - y).abs() < TOL);
            }
        }
    }
}

#[test]
fn quarter_turn_row_for_m0() {
    let d = d_matrix(t(4), FRAC_PI_2).unwrap();
    let r38 = (3.0f64 / 8.0).sqrt();
    let want = [r38, 0.0, -0.5, 0.0, r38];
    for (k, m_p) in projections(t(4)).enumerate() {
        assert!((d.get(m_p, t(0)).unwrap() - want[k]).abs() < TOL);
    }
}

#[test]
fn cg_matches_racah_oracle() {
    for j1 in 0i32..=4 {
        for j2 in 0..=4 {
            let mut jj = (j1 - j2).abs();
            while jj <= j1 + j2 {
                for m1 in projections(t(j1)) {
                    for m2 in projections(t(j2)) {
                        let mm = m1.0 + m2.0;
                        if mm.abs() > jj {
                            continue;
                        }
                        let got = clebsch_gordan(t(j1), m1, t(j2), m2, t(jj), t(mm)).unwrap();
                        let want = common::racah_cg(j1, m1.0, j2, m2.0, jj, mm);
                        assert!((got - want).abs() < TOL, "<{j1} {} {j2} {} | {jj} {mm}>: {got} vs {want}", m1.0, m2.0);
                    }
                }
                jj += 2;
            }
        }
    }
}

#[test]
fn cg_orthogonality() {
    for j1 in 0i32..=4 {
        for j2 in 0..=4 {
            let totals: Vec<i32> = ((j1 - j2).abs()..=j1 + j2).step_by(2).collect();
            for &ja in &totals {
                for ma in projections(t(ja)) {
                    for &jb in &totals {
                        for mb in projections(t(jb)) {
                            let mut sum = 0.0;
                            for m1 in projections(t(j1)) {
                                for m2 in projections(t(j2)) {
                                    sum += clebsch_gordan(t(j1), m1, t(j2), m2, t(ja), ma).unwrap()
                                        * clebsch_gordan(t(j1), m1, t(j2), m2, t(jb), mb).unwrap();
                                }
                            }
                            let want = if ja == jb && ma == mb { 1.0 } else { 0.0 };
                            assert!((sum - want).abs() < TOL);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn cg_exact_zero_off_shell() {
    for m1 in projections(t(2)) {
        for m2 in projections(t(1)) {
            for mm in projections(t(3)) {
                if mm.0 != m1.0 + m2.0 {
                    assert_eq!(clebsch_gordan(t(2), m1, t(1), m2, t(3), mm).unwrap(), 0.0);
                }
            }
        }
    }
}

#[test]
fn hopf_unit_norm_on_grid() {
    for i in 0..10 {
        for k in 0..10 {
            let p = ControlParams::new(PI * i as f64 / 9.0, 2.0 * PI * k as f64 / 10.0).unwrap();
            assert!((hopf_state(p).unwrap().norm_sqr() - 1.0).abs() < TOL);
        }
    }
}

#[test]
fn he_li_coupling_projection_resums() {
    let cs = couple(&atomic_phase_state(0.8)).unwrap();
    let total: f64 =
        [1, 3].iter().map(|&s| cs.project(|l| l.s.0 == s).iter().map(|(_, a)| a.norm_sqr()).sum::<f64>()).sum();
    assert!((total - 1.0).abs() < TOL);
}

fn arb_superposition(j2: i32, axis: Axis) -> impl Strategy<Value = Superposition> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), (j2 + 1) as usize).prop_filter_map("nonzero", move |raw| {
        let norm: f64 = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
        if norm < 1e-3 {
            return None;
        }
        let amps: Vec<(i32, Complex64)> =
            projections(TwiceInt(j2)).zip(raw).map(|(m, (a, b))| (m.0, Complex64::new(a / norm, b / norm))).collect();
        Superposition::from_amplitudes(TwiceInt(j2), axis, &amps).ok()
    })
}

proptest! {
    #[test]
    fn rotate_axis_is_unitary(
        (a, b) in (0i32..=4).prop_flat_map(|j| (arb_superposition(j, Axis::X), arb_superposition(j, Axis::X)))
    ) {
        let before = a.inner(&b);
        let za = rotate_axis(&a, Axis::X, Axis::Z).unwrap();
        let zb = rotate_axis(&b, Axis::X, Axis::Z).unwrap();
        prop_assert!((za.inner(&zb) - before).norm() < TOL);
        let back = rotate_axis(&za, Axis::Z, Axis::X).unwrap();
        for (l, amp) in a.terms() {
            prop_assert!((back.amplitude(l.j, l.m) - amp).norm() < TOL);
        }
    }

    #[test]
    fn couple_preserves_norm(
        a in (0i32..=4).prop_flat_map(|j| arb_superposition(j, Axis::Z)),
        b in (0i32..=4).prop_flat_map(|j| arb_superposition(j, Axis::Z)),
    ) {
        let p = ProductState::new(a, b).unwrap();
        let cs = couple(&p).unwrap();
        prop_assert!((cs.norm_sqr() - 1.0).abs() < TOL);
    }
}
