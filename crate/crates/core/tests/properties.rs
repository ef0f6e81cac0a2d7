use std::f64::consts::PI;

use boundfloq::dynamics::{propagate, rates_from_u, solve_thermal, solve_u, Propagation, StateSpec};
use boundfloq::floquet::{
    fold_quasienergy, one_period_propagator, quasienergy_spectrum, stroboscopic_evolve, Piece, PiecewiseModel,
};
use boundfloq::linalg::herm_eigen;
use boundfloq::metrics::speed::{non_markovianity_from_distance, qsl_from_population};
use boundfloq::metrics::concurrence;
use boundfloq::quad::QuadConfig;
use boundfloq::spectra::{Ohmic, SpectralDensity};
use boundfloq::topology::{chern_number, two_band_floquet, DrivenHaldane};
use faer::{c64, Mat};
use proptest::prelude::*;

fn unitary2(a: f64, b: f64, c: f64, th: f64) -> Mat<c64> {
    let (s, co) = th.sin_cos();
    let g = c64::cis(a);
    Mat::from_fn(2, 2, |i, j| {
        g * match (i, j) {
            (0, 0) => c64::cis(b) * co,
            (0, 1) => c64::cis(c) * s,
            (1, 0) => -c64::cis(-c) * s,
            _ => c64::cis(-b) * co,
        }
    })
}

fn kron(a: &Mat<c64>, b: &Mat<c64>) -> Mat<c64> {
    Mat::from_fn(4, 4, |i, j| a[(i / 2, j / 2)] * b[(i % 2, j % 2)])
}

fn density(entries: &[f64]) -> Mat<c64> {
    let a = Mat::from_fn(4, 4, |i, j| c64::new(entries[2 * (4 * i + j)], entries[2 * (4 * i + j) + 1]));
    let rho = &a * a.adjoint();
    let tr: f64 = (0..4).map(|i| rho[(i, i)].re).sum();
    Mat::from_fn(4, 4, |i, j| rho[(i, j)] / tr)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ohmic_binding_matches_closed_form(eta in 0.01f64..2.0, s in 0.3f64..3.0, w0 in 0.05f64..3.0) {
        let o = Ohmic::new(eta, s, 1.0);
        // stay clear of the threshold where the root approaches E = 0
        prop_assume!((o.inverse_moment() - w0).abs() > 1e-3 * w0);
        let b = SpectralDensity::Ohmic(o).bound_state(w0).unwrap();
        prop_assert_eq!(b.is_some(), w0 < eta * libm::tgamma(s));
        if let Some(b) = b {
            prop_assert!(b.residue > 0.0 && b.residue <= 1.0);
            prop_assert!(b.energy < 0.0);
            let sd = SpectralDensity::Ohmic(o);
            let m2 = sd.inverse_square_moment(b.energy, &QuadConfig::default()).unwrap();
            prop_assert!((b.residue * (1.0 + m2) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn pole_function_decreases_below_band(eta in 0.01f64..1.0, s in 0.5f64..3.0, e in -5.0f64..-0.05) {
        let sd = SpectralDensity::ohmic(eta, s, 1.0);
        let cfg = QuadConfig::default();
        let d = 1e-3;
        let y0 = sd.pole_function(1.0, e - d, &cfg).unwrap();
        let y1 = sd.pole_function(1.0, e + d, &cfg).unwrap();
        prop_assert!(y1 < y0);
    }

    #[test]
    fn kernel_is_conjugate_symmetric(eta in 0.0f64..2.0, s in 0.2f64..3.0, x in 0.0f64..30.0) {
        let sd = SpectralDensity::ohmic(eta, s, 1.7);
        let a = sd.kernel_f(x).unwrap();
        let b = sd.kernel_f(-x).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-14 * (1.0 + a.norm()));
    }

    #[test]
    fn concurrence_invariant_under_local_unitaries(
        entries in prop::collection::vec(-1.0f64..1.0, 32),
        angles in prop::collection::vec(0.0f64..(2.0 * PI), 8),
    ) {
        let rho = density(&entries);
        let c0 = concurrence(rho.as_ref()).unwrap();
        let u = kron(
            &unitary2(angles[0], angles[1], angles[2], angles[3]),
            &unitary2(angles[4], angles[5], angles[6], angles[7]),
        );
        let rotated = &(&u * &rho) * u.adjoint();
        let c1 = concurrence(rotated.as_ref()).unwrap();
        prop_assert!((0.0..=1.0).contains(&c0));
        prop_assert!((c0 - c1).abs() < 1e-10, "{} vs {}", c0, c1);
    }

    #[test]
    fn speed_limit_never_exceeds_horizon(pop in prop::collection::vec(0.0f64..1.0, 2..200), tau in 0.1f64..10.0) {
        let mut pop = pop;
        pop[0] = 1.0;
        let q = qsl_from_population(&pop, tau);
        prop_assert!(q.time <= tau * (1.0 + 1e-12));
        let n = non_markovianity_from_distance(&pop);
        prop_assert!(n.backflow_form >= 0.0);
        prop_assert!((n.backflow_form - n.variation_form).abs() < 1e-10);
    }

    #[test]
    fn monotone_decay_has_no_backflow(rates in prop::collection::vec(0.0f64..0.3, 1..100)) {
        let mut d = vec![1.0];
        for r in &rates {
            let last = *d.last().unwrap();
            d.push(last * (1.0 - r));
        }
        prop_assert_eq!(non_markovianity_from_distance(&d).backflow_form, 0.0);
    }

    #[test]
    fn two_band_identity(h in prop::collection::vec(-3.0f64..3.0, 6), t1 in 0.01f64..3.0, t2 in 0.0f64..3.0) {
        let f = two_band_floquet([h[0], h[1], h[2]], [h[3], h[4], h[5]], t1, t2);
        let r2: f64 = f.r.iter().map(|x| x * x).sum();
        prop_assert!((f.eps * f.eps + r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn refolding_leaves_spectrum_unchanged(e in -100.0f64..100.0, t in 0.05f64..5.0, shift in -5i32..5) {
        let w = 2.0 * PI / t;
        let a = fold_quasienergy(e, t);
        let b = fold_quasienergy(e + shift as f64 * w, t);
        prop_assert!(a > -PI / t && a <= PI / t * (1.0 + 1e-15));
        let d = (a - b).abs();
        prop_assert!(d < 1e-9 || (w - d).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn amplitude_bounded_and_rates_consistent(eta in 0.01f64..1.0, s in 0.5f64..3.0, cutoff in 1.0f64..10.0) {
        let sd = SpectralDensity::ohmic(eta, s, cutoff);
        let traj = solve_u(&sd, 1.0, 10.0, 0.01).unwrap();
        let rates = rates_from_u(&traj);
        for (k, u) in traj.u.iter().enumerate() {
            prop_assert!(u.norm() <= 1.0 + 1e-8);
            if let Some(g) = rates.decay[k] {
                // d|u|²/dt = 2Re(u*u̇) = −γ|u|²
                let lhs = 2.0 * (u.conj() * traj.du[k]).re;
                prop_assert!((lhs + g * u.norm_sqr()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn propagated_states_are_physical(eta in 0.01f64..1.0, s in 0.5f64..2.0, p in 0.0f64..1.0, phase in 0.0f64..(2.0 * PI)) {
        let sd = SpectralDensity::ohmic(eta, s, 5.0);
        let traj = solve_u(&sd, 1.0, 5.0, 0.01).unwrap();
        let rates = rates_from_u(&traj);
        let coh = (p * (1.0 - p)).sqrt();
        let q = [
            [num_complex::Complex64::new(1.0 - p, 0.0), num_complex::Complex64::from_polar(coh, -phase)],
            [num_complex::Complex64::from_polar(coh, phase), num_complex::Complex64::new(p, 0.0)],
        ];
        for spec in [StateSpec::Qubit(q), StateSpec::Bell, StateSpec::Ghz(3)] {
            let Propagation::States(states) = propagate(&traj, &rates, &spec).unwrap() else {
                panic!("expected density matrices");
            };
            for rho in states.iter().step_by(50) {
                let tr: f64 = (0..rho.nrows()).map(|i| rho[(i, i)].re).sum();
                prop_assert!((tr - 1.0).abs() < 1e-12);
                let (vals, _) = herm_eigen(rho.as_ref()).unwrap();
                prop_assert!(vals.iter().all(|&v| v >= -1e-10));
            }
        }
    }

    #[test]
    fn floquet_modes_complete_and_norm_conserved(
        diag in prop::collection::vec(-2.0f64..2.0, 6),
        off in prop::collection::vec(-1.0f64..1.0, 5),
        d1 in 0.1f64..2.0,
        d2 in 0.1f64..2.0,
    ) {
        let n = 6;
        let h1 = Mat::from_fn(n, n, |i, j| if i == j { diag[i] } else if i.abs_diff(j) == 1 { off[i.min(j)] } else { 0.0 });
        let h2 = Mat::from_fn(n, n, |i, j| if i == j { -diag[i] } else if i.abs_diff(j) == 1 { 0.5 * off[i.min(j)] } else { 0.0 });
        let m = PiecewiseModel::new(
            vec![Piece { hamiltonian: h1, duration: d1 }, Piece { hamiltonian: h2, duration: d2 }],
            vec![0],
        ).unwrap();
        let spec = quasienergy_spectrum(one_period_propagator(&m).unwrap().as_ref(), m.period).unwrap();
        let psi = m.unit_vector(0);
        let total: f64 = spec.overlaps(&psi).iter().map(|c| c.norm_sqr()).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        let rec = stroboscopic_evolve(&m, &psi, 30, 4).unwrap();
        prop_assert!(rec.max_norm_defect < 1e-12);
    }
}

#[test]
fn zero_temperature_limit_of_thermal_pipeline() {
    let sd = SpectralDensity::ohmic(0.3, 1.0, 5.0);
    let traj = solve_u(&sd, 1.0, 8.0, 0.01).unwrap();
    let (hot, rates) = solve_thermal(&sd, f64::INFINITY, &traj).unwrap();
    assert_eq!(hot.u, traj.u);
    assert!(hot.v.unwrap().iter().all(|&v| v == 0.0));
    let cold = rates_from_u(&traj);
    assert_eq!(rates.decay, cold.decay);
    assert_eq!(rates.frequency, cold.frequency);
    // thermal noise fades as the bath cools
    let peak = |beta: f64| {
        let (t, _) = solve_thermal(&sd, beta, &traj).unwrap();
        t.v.unwrap().iter().fold(0.0f64, |m, v| m.max(v.abs()))
    };
    let (warm, cold, colder) = (peak(10.0), peak(100.0), peak(1000.0));
    eprintln!("{warm} {cold} {colder}");
    assert!(cold < 0.2 * warm && colder < 0.2 * cold);
}

#[test]
fn chern_numbers_stable_under_refinement() {
    for &(t1, t2) in &[(0.3, 0.4), (0.9, 1.2), (1.3, 1.2), (0.6, 1.7), (1.8, 0.5)] {
        let m = DrivenHaldane::reference(t1, t2);
        let (Ok(a), Ok(b)) = (chern_number(&m, 30), chern_number(&m, 60)) else {
            continue;
        };
        assert_eq!(a.value, b.value, "T = ({t1}, {t2})");
    }
}
