mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use common::{c, dense_propagator, expm, grid};
use mqdimer_core::circuits::{
    dimer_marginals, pure_ground_circuit, purification_prep_circuit, thermal_full_circuit,
    ThermalExperimentSpec, ANCILLA_QUBITS, DIMER_QUBITS, PURE_READOUT,
};
use mqdimer_core::gates::{apply_gate, circuit_unitary, Circuit, Gate};
use mqdimer_core::linalg::phase_invariant_distance;
use mqdimer_core::measurement::{
    estimate_pure_from_histogram, estimate_thermal_from_probabilities,
    estimate_thermal_intensities, sample, sample_distribution,
};
use mqdimer_core::nmr::{
    analytic_intensities_pure, analytic_intensities_thermal, general_coherence_intensities,
    propagator, thermal_density, ThermalParameters,
};
use mqdimer_core::state::{
    coherence_decompose, density_from_pure, CollectiveSpinZ, DensityMatrix, StateVector,
};
use mqdimer_core::sweep::{run_sweep, Experiment, SweepConfig};
use mqdimer_core::{CMatrix, C64};
use proptest::prelude::*;

fn raw_state(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1 << n)
        .prop_filter("non-zero", |v| {
            v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(|v| {
            let amps: Vec<C64> = v.into_iter().map(|(a, b)| c(a, b)).collect();
            let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            amps.into_iter().map(|z| z / norm).collect()
        })
}

fn state(n: usize) -> impl Strategy<Value = StateVector> {
    raw_state(n).prop_map(|a| StateVector::from_amplitudes(a).unwrap())
}

fn gate(n: usize) -> impl Strategy<Value = Gate> {
    let angle = -10.0..10.0f64;
    prop_oneof![
        (1..=n, angle.clone()).prop_map(|(q, a)| Gate::rx(q, a)),
        (1..=n, angle.clone()).prop_map(|(q, a)| Gate::ry(q, a)),
        (1..=n, angle).prop_map(|(q, a)| Gate::rz(q, a)),
        (1..=n, 1..n.max(2)).prop_map(move |(ctl, off)| {
            let tgt = (ctl - 1 + off) % n + 1;
            Gate::cnot(ctl, tgt)
        }),
    ]
}

fn circuit(max_qubits: usize, max_gates: usize) -> impl Strategy<Value = Circuit> {
    (2..=max_qubits).prop_flat_map(move |n| {
        prop::collection::vec(gate(n), 0..=max_gates)
            .prop_map(move |gs| Circuit::from_gates(n, gs).unwrap())
    })
}

fn circuit_with_state() -> impl Strategy<Value = (Circuit, StateVector)> {
    (2..=4usize).prop_flat_map(|n| {
        (
            prop::collection::vec(gate(n), 0..=20)
                .prop_map(move |gs| Circuit::from_gates(n, gs).unwrap()),
            state(n),
        )
    })
}

fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

proptest! {
    #[test]
    fn gates_preserve_norm((circ, psi) in circuit_with_state()) {
        let out = circ.apply(&psi).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
        let p: f64 = out.probabilities().iter().sum();
        prop_assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circuit_unitaries_are_unitary(circ in circuit(4, 20)) {
        let u = circuit_unitary(&circ);
        let id = CMatrix::identity(u.dim());
        prop_assert!(u.adjoint().matmul(&u).max_abs_diff(&id) < 1e-12);
    }

    #[test]
    fn bit_sliced_and_kronecker_paths_agree((circ, psi) in circuit_with_state()) {
        let direct = circ.apply(&psi).unwrap();
        let via_u = circuit_unitary(&circ).matvec(psi.amplitudes());
        for (a, b) in direct.amplitudes().iter().zip(&via_u) {
            prop_assert!((a - b).norm() < 1e-12);
        }
        let mut stepwise = psi.clone();
        for g in circ.gates() {
            stepwise = apply_gate(&stepwise, g).unwrap();
        }
        prop_assert_eq!(stepwise, direct);
    }

    #[test]
    fn composition_multiplies_unitaries(
        (a, b) in (2..=4usize).prop_flat_map(|n| (
            prop::collection::vec(gate(n), 0..=10),
            prop::collection::vec(gate(n), 0..=10),
        ).prop_map(move |(x, y)| (
            Circuit::from_gates(n, x).unwrap(),
            Circuit::from_gates(n, y).unwrap(),
        )))
    ) {
        let ua = circuit_unitary(&a);
        let ub = circuit_unitary(&b);
        let joined = a.clone().then(&b).unwrap();
        prop_assert!(circuit_unitary(&joined).max_abs_diff(&ub.matmul(&ua)) < 1e-12);
        let undone = joined.clone().then(&joined.inverse()).unwrap();
        prop_assert!(circuit_unitary(&undone).max_abs_diff(&CMatrix::identity(ua.dim())) < 1e-12);
    }

    #[test]
    fn density_gates_match_pure_states((circ, psi) in circuit_with_state()) {
        let mut rho = density_from_pure(&psi);
        for g in circ.gates() {
            rho = mqdimer_core::gates::apply_gate_to_density(&rho, g).unwrap();
        }
        let want = density_from_pure(&circ.apply(&psi).unwrap());
        prop_assert!(rho.matrix().max_abs_diff(want.matrix()) < 1e-12);
    }

    #[test]
    fn partial_trace_of_product_state(a in raw_state(2), b in raw_state(1)) {
        let psi = StateVector::from_amplitudes(kron_vec(&a, &b)).unwrap();
        let rho = density_from_pure(&psi);
        let ra = rho.partial_trace(&[1, 2]).unwrap();
        let rb = rho.partial_trace(&[3]).unwrap();
        prop_assert!(ra.matrix().max_abs_diff(&CMatrix::outer(&a, &a)) < 1e-12);
        prop_assert!(rb.matrix().max_abs_diff(&CMatrix::outer(&b, &b)) < 1e-12);
        let prod = ra.matrix().kron(rb.matrix());
        prop_assert!(prod.max_abs_diff(rho.matrix()) < 1e-12);
        // listing the kept qubits in reverse order transposes the factors
        let swapped = rho.partial_trace(&[3, 1, 2]).unwrap();
        prop_assert!(swapped.matrix().max_abs_diff(&rb.matrix().kron(ra.matrix())) < 1e-12);
    }

    #[test]
    fn marginals_sum_to_one(psi in state(3), q in 1..=3usize) {
        let m = psi.marginal_probabilities(&[q]).unwrap();
        prop_assert!((m.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let full = psi.marginal_probabilities(&[1, 2, 3]).unwrap();
        for (x, y) in full.iter().zip(psi.probabilities()) {
            prop_assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn coherence_blocks_reconstruct(psi in state(3), phi in state(3), w in 0.0..1.0f64) {
        let m = density_from_pure(&psi).matrix().scale(c(w, 0.0))
            .add(&density_from_pure(&phi).matrix().scale(c(1.0 - w, 0.0)));
        let rho = DensityMatrix::from_matrix(m).unwrap();
        let iz = CollectiveSpinZ::new(3).unwrap();
        let dec = coherence_decompose(&rho, &iz).unwrap();
        prop_assert_eq!(dec.orders().collect::<Vec<_>>(), (-3..=3).collect::<Vec<_>>());
        prop_assert!(dec.reconstruct().max_abs_diff(rho.matrix()) < 1e-14);
        for n in 1..=3 {
            let up = dec.block(n).unwrap();
            let down = dec.block(-n).unwrap();
            prop_assert!(up.adjoint().max_abs_diff(down) < 1e-15);
        }
    }

    #[test]
    fn propagator_matches_exponential(tau in 0.0..4.0 * PI) {
        let exact = propagator(tau).unwrap();
        prop_assert!(exact.max_abs_diff(&dense_propagator(tau)) < 1e-12);
    }

    #[test]
    fn sum_rules_and_period(tau in -20.0..20.0f64, beta in 0.05..30.0f64) {
        let pure = analytic_intensities_pure(tau).unwrap();
        prop_assert!((pure.total() - 1.0).abs() < 1e-12);
        let shifted = analytic_intensities_pure(tau + PI).unwrap();
        prop_assert!((shifted.j0 - pure.j0).abs() < 1e-12);
        prop_assert!((shifted.j2() - pure.j2()).abs() < 1e-12);

        let params = ThermalParameters::new(beta).unwrap();
        let th = analytic_intensities_thermal(&params, tau).unwrap();
        prop_assert!((th.total() - (beta / 2.0).tanh()).abs() < 1e-12);
        prop_assert!((th.j0 + 2.0 * th.j2() - (beta / 2.0).tanh()).abs() < 1e-12);
    }

    #[test]
    fn thermal_circuit_marginals(beta in 0.05..20.0f64, tau in 0.0..2.0 * PI) {
        let spec = ThermalExperimentSpec::new(beta, tau).unwrap();
        let psi = spec.circuit().run();
        let got = psi.marginal_probabilities(&DIMER_QUBITS).unwrap();
        let want = dimer_marginals(spec.theta(), tau);
        for k in 0..4 {
            prop_assert!((got[k] - want[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn histogram_counts_are_consistent(
        dist in prop::collection::vec(0.0..1.0f64, 4).prop_filter("mass", |v| v.iter().sum::<f64>() > 1e-3),
        shots in 1..5000u64,
        seed in any::<u64>(),
    ) {
        let h = sample_distribution(&dist, &[2, 3], shots, seed).unwrap();
        prop_assert_eq!(h.counts().values().sum::<u64>(), shots);
        prop_assert_eq!(h.counts().len(), 4);
        for (k, &p) in dist.iter().enumerate() {
            if p == 0.0 {
                prop_assert_eq!(h.frequencies()[k], 0.0);
            }
        }
        prop_assert_eq!(sample_distribution(&dist, &[2, 3], shots, seed).unwrap(), h);
    }
}

#[test]
fn general_form_agrees_with_closed_forms() {
    let params = ThermalParameters::new(2.12).unwrap();
    let rho_thermal = thermal_density(&params);
    let ground = density_from_pure(
        &StateVector::from_amplitudes(vec![c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]).unwrap(),
    );
    for tau in grid(0.0, 2.0 * PI, 64) {
        let g = general_coherence_intensities(&ground, tau).unwrap();
        let a = analytic_intensities_pure(tau).unwrap();
        assert!((g.j0 - a.j0).abs() < 1e-12);
        assert!((g.j_plus2 - a.j_plus2).abs() < 1e-12);
        assert!((g.j_minus2 - a.j_minus2).abs() < 1e-12);

        let g = general_coherence_intensities(&rho_thermal, tau).unwrap();
        let a = analytic_intensities_thermal(&params, tau).unwrap();
        assert!((g.j0 - a.j0).abs() < 1e-12);
        assert!((g.j_plus2 - a.j_plus2).abs() < 1e-12);
        assert!((g.j_minus2 - a.j_minus2).abs() < 1e-12);
    }
}

#[test]
fn pure_circuit_reproduces_evolved_state() {
    for tau in grid(0.0, 2.0 * PI, 33) {
        let psi = pure_ground_circuit(tau).unwrap().run();
        let want = dense_propagator(tau).matvec(&[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
        let want = StateVector::from_amplitudes(want).unwrap();
        assert!(psi.distance_up_to_phase(&want) < 1e-12, "τ = {tau}");
    }
}

#[test]
fn thermal_propagator_block_matches_exponential() {
    for tau in grid(0.0, 4.0 * PI, 25) {
        let circ = mqdimer_core::circuits::dimer_propagator_circuit(tau).unwrap();
        // dimer factor with both ancillas held at |0⟩
        let u = circ.unitary();
        let idx = |d: usize| (d >> 1) << 2 | (d & 1) << 1;
        let mut block = CMatrix::zeros(4);
        for r in 0..4 {
            for col in 0..4 {
                block[(r, col)] = u[(idx(r), idx(col))];
            }
        }
        assert!(phase_invariant_distance(&block, &dense_propagator(tau)) < 1e-12);
    }
}

#[test]
fn purification_reproduces_thermal_state() {
    for beta in grid(0.1, 10.0, 20) {
        let params = ThermalParameters::new(beta).unwrap();
        let psi = purification_prep_circuit(&params).run();
        let rho = density_from_pure(&psi);
        let red = rho.partial_trace(&DIMER_QUBITS).unwrap();
        assert!(
            red.matrix().max_abs_diff(thermal_density(&params).matrix()) < 1e-12,
            "β = {beta}"
        );
        // ancillas carry the same populations
        let anc = rho.partial_trace(&ANCILLA_QUBITS).unwrap();
        assert!((anc.diagonal()[0] - red.diagonal()[0]).abs() < 1e-12);
    }
}

#[test]
fn estimators_recover_intensities_from_exact_probabilities() {
    for beta in [0.5, 2.12, 5.0] {
        let params = ThermalParameters::new(beta).unwrap();
        for tau in grid(0.0, 2.0 * PI, 17) {
            let p = thermal_full_circuit(&params, tau)
                .unwrap()
                .run()
                .marginal_probabilities(&DIMER_QUBITS)
                .unwrap();
            let est = estimate_thermal_from_probabilities(&[p[0], p[1], p[2], p[3]], tau, &params)
                .unwrap();
            let want = analytic_intensities_thermal(&params, tau).unwrap();
            assert!((est.j0 - want.j0).abs() < 1e-12);
            assert!((est.j2() - want.j2()).abs() < 1e-12);
        }
    }
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, v.sqrt())
}

#[test]
fn sampled_estimates_are_statistically_sound() {
    const REPS: u64 = 200;
    const SHOTS: u64 = 4096;
    let sd_bound = 2.0 / (SHOTS as f64).sqrt();

    for tau in [0.3, 0.7, 1.1, 2.0, 2.6] {
        let psi = pure_ground_circuit(tau).unwrap().run();
        let want = analytic_intensities_pure(tau).unwrap();
        let (mut j0, mut j2) = (Vec::new(), Vec::new());
        for s in 0..REPS {
            let h = sample(&psi, &PURE_READOUT, SHOTS, 1000 + s).unwrap();
            let r = estimate_pure_from_histogram(&h, tau).unwrap();
            j0.push(r.j0);
            j2.push(r.j2());
        }
        for (xs, target) in [(&j0, want.j0), (&j2, want.j2())] {
            let (m, sd) = mean_sd(xs);
            let se = sd / (REPS as f64).sqrt();
            assert!(
                (m - target).abs() <= 3.0 * se + 1e-12,
                "τ={tau}: {m} vs {target} (se {se})"
            );
            assert!(sd <= sd_bound, "τ={tau}: sd {sd}");
        }
    }

    // At τ = π/2 the J0 estimate is a square of a zero-mean fluctuation,
    // so its mean sits at 4a(1−a)/N rather than 0.
    let tau = FRAC_PI_2;
    let psi = pure_ground_circuit(tau).unwrap().run();
    let mut j0 = Vec::new();
    for s in 0..REPS {
        let h = sample(&psi, &PURE_READOUT, SHOTS, 5000 + s).unwrap();
        j0.push(estimate_pure_from_histogram(&h, tau).unwrap().j0);
    }
    let (m, sd) = mean_sd(&j0);
    let bias = 1.0 / SHOTS as f64;
    assert!((m - bias).abs() <= 3.0 * sd / (REPS as f64).sqrt() + 1e-12);
    assert!(sd <= sd_bound);

    // the thermal estimator is linear in the frequencies, hence unbiased
    let beta = 2.12;
    let params = ThermalParameters::new(beta).unwrap();
    for tau in [0.4, 1.3, 2.9] {
        let psi = thermal_full_circuit(&params, tau).unwrap().run();
        let want = analytic_intensities_thermal(&params, tau).unwrap();
        let mut j0 = Vec::new();
        for s in 0..REPS {
            let h = sample(&psi, &DIMER_QUBITS, SHOTS, 9000 + s).unwrap();
            j0.push(estimate_thermal_intensities(&h, tau, beta).unwrap().j0);
        }
        let (m, sd) = mean_sd(&j0);
        assert!((m - want.j0).abs() <= 3.0 * sd / (REPS as f64).sqrt() + 1e-12);
        assert!(sd <= sd_bound);
    }
}

fn max_deviation(noise: f64) -> f64 {
    let cfg = SweepConfig {
        experiment: Experiment::Pure,
        points: 33,
        noise_p: noise,
        ..SweepConfig::default()
    };
    run_sweep(&cfg)
        .unwrap()
        .iter()
        .map(|r| {
            (r.simulated.j0 - r.analytic.j0)
                .abs()
                .max((r.simulated.j2() - r.analytic.j2()).abs())
        })
        .fold(0.0, f64::max)
}

fn sum_rule_defect(experiment: Experiment, noise: f64) -> f64 {
    let cfg = SweepConfig {
        experiment,
        points: 33,
        noise_p: noise,
        ..SweepConfig::default()
    };
    run_sweep(&cfg)
        .unwrap()
        .iter()
        .map(|r| (r.simulated.total() - r.analytic.total()).abs())
        .fold(0.0, f64::max)
}

#[test]
fn deviation_grows_with_noise() {
    let levels = [0.0, 0.01, 0.02, 0.05, 0.1];
    let devs: Vec<f64> = levels.iter().map(|&p| max_deviation(p)).collect();
    assert!(devs[0] < 1e-12);
    for w in devs.windows(2) {
        assert!(w[1] > w[0], "{devs:?}");
    }
    let defects: Vec<f64> = [0.0, 0.01, 0.05]
        .iter()
        .map(|&p| sum_rule_defect(Experiment::Pure, p))
        .collect();
    assert!(defects[0] < 1e-12);
    assert!(
        defects[0] <= defects[1] && defects[1] <= defects[2],
        "{defects:?}"
    );
    assert!(defects[2] > 0.0);
    // the thermal sum is pinned by construction of its J±2 estimate
    for p in [0.0, 0.01, 0.05] {
        assert!(sum_rule_defect(Experiment::Thermal, p) < 1e-12);
    }
}

#[test]
fn seeded_sweeps_are_reproducible() {
    let cfg = SweepConfig {
        experiment: Experiment::Thermal,
        shots: 1024,
        seed: 42,
        points: 9,
        ..SweepConfig::default()
    };
    assert_eq!(run_sweep(&cfg).unwrap(), run_sweep(&cfg).unwrap());
    let other = SweepConfig { seed: 43, ..cfg };
    assert_ne!(run_sweep(&cfg).unwrap(), run_sweep(&other).unwrap());
}

#[test]
fn noisy_states_stay_physical() {
    let params = ThermalParameters::new(2.12).unwrap();
    let circ = thermal_full_circuit(&params, 1.0).unwrap();
    for p in [0.0, 0.02, 0.3, 1.0] {
        let rho = mqdimer_core::measurement::run_noisy(
            &circ,
            &mqdimer_core::measurement::NoiseModel::new(p).unwrap(),
        )
        .unwrap();
        rho.validate().unwrap();
        assert!(rho.purity() <= 1.0 + 1e-12);
    }
}

#[test]
fn series_exponential_sanity() {
    // exp of a diagonal generator, to keep the oracle itself honest
    let d = CMatrix::from_diagonal(&[c(0.0, 1.3), c(-0.4, 0.0)]);
    let e = expm(&d);
    assert!((e[(0, 0)] - C64::from_polar(1.0, 1.3)).norm() < 1e-14);
    assert!((e[(1, 1)] - c((-0.4f64).exp(), 0.0)).norm() < 1e-14);
}
