//! Property tests over randomized excitation sets and cavities.

use polariton::quadratic::build_quadratic_matrix;
use polariton::spectrum::{
    broaden, linear_grid, lower_polariton_metrics, polariton_dipoles, stick_spectrum,
    sweep_coupling, window_strength,
};
use polariton::*;
use proptest::prelude::*;

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn dipole() -> impl Strategy<Value = [f64; 3]> {
    [-1.5f64..1.5, -1.5f64..1.5, -1.5f64..1.5]
}

fn excitations(max: usize) -> impl Strategy<Value = ExcitationSet> {
    prop::collection::vec((1.0f64..8.0, dipole()), 1..=max)
        .prop_map(|lines| ExcitationSet::from_lines(&lines, "prop").unwrap())
}

fn polarization() -> impl Strategy<Value = [f64; 3]> {
    [-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0]
        .prop_filter("nonzero", |v| v.iter().map(|c| c * c).sum::<f64>() > 1e-2)
        .prop_map(unit)
}

fn modes(max: usize, max_strength: f64) -> impl Strategy<Value = Vec<PhotonMode>> {
    prop::collection::vec((1.0f64..8.0, polarization(), 0.0..max_strength), 1..=max).prop_map(
        |raw| {
            raw.into_iter()
                .map(|(e, p, s)| PhotonMode::new(e, p, s).unwrap())
                .collect()
        },
    )
}

fn model() -> impl Strategy<Value = Model> {
    prop_oneof![Just(Model::Rwa), Just(Model::Quadratic)]
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dipole_sign_flip_leaves_absorption_unchanged(
        set in excitations(6),
        modes in modes(3, 1.0),
        model in model(),
        pick in any::<prop::sample::Index>(),
    ) {
        let flipped = set.with_flipped_dipole(pick.index(set.len()));
        let a = solve(model, &set, &modes).unwrap();
        let b = solve(model, &flipped, &modes).unwrap();
        for axis in Axis::ALL {
            let sa = stick_spectrum(&a, &set, axis).unwrap();
            let sb = stick_spectrum(&b, &flipped, axis).unwrap();
            let scale = sa.iter().map(|s| s.strength).fold(0.0, f64::max).max(1e-300);
            for (x, y) in sa.iter().zip(&sb) {
                prop_assert!(rel_close(x.energy, y.energy, 1e-12));
                prop_assert!((x.strength - y.strength).abs() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn single_mode_energies_interlace_bare_excitations(set in excitations(8), mode in modes(1, 2.0)) {
        let sol = solve_rwa(&set, &mode).unwrap();
        let bare = set.energies();
        let e = &sol.energies;
        let slack = 1e-12 * e.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for i in 0..bare.len() {
            prop_assert!(e[i] <= bare[i] + slack);
            prop_assert!(bare[i] <= e[i + 1] + slack);
        }
    }

    #[test]
    fn rwa_trace_is_conserved(set in excitations(6), modes in modes(4, 2.0)) {
        let sol = solve_rwa(&set, &modes).unwrap();
        let bare: f64 = set.energies().iter().sum::<f64>() + modes.iter().map(|m| m.energy).sum::<f64>();
        prop_assert!(rel_close(sol.energies.iter().sum(), bare, 1e-10));
    }

    #[test]
    fn quadratic_trace_of_k_is_conserved(set in excitations(6), modes in modes(3, 1.0)) {
        let form = build_quadratic_matrix(&set, &modes).unwrap();
        let sol = solve_quadratic(&set, &modes).unwrap();
        let sum_sq: f64 = sol.energies.iter().map(|w| w * w).sum();
        prop_assert!(rel_close(sum_sq, form.matrix.trace(), 1e-10));
    }

    #[test]
    fn quadratic_raw_vectors_are_orthonormal(set in excitations(6), modes in modes(3, 1.0)) {
        let form = build_quadratic_matrix(&set, &modes).unwrap();
        let v = form.eigen().unwrap().vectors;
        let n = v.nrows();
        let defect = (v.transpose() * &v - nalgebra::DMatrix::<f64>::identity(n, n)).amax();
        prop_assert!(defect < 1e-10, "{defect}");
        let sol = solve_quadratic(&set, &modes).unwrap();
        for l in 0..sol.len() {
            let c = sol.el_proj.column(l).norm_squared() + sol.ph_proj.column(l).norm_squared();
            prop_assert!((c - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn rwa_dipole_strength_sum_rule(set in excitations(8), modes in modes(4, 2.0)) {
        let sol = solve_rwa(&set, &modes).unwrap();
        for axis in Axis::ALL {
            let mu = polariton_dipoles(&sol, &set, axis).unwrap();
            let lhs: f64 = mu.iter().map(|m| m * m).sum();
            let rhs: f64 = set.iter().map(|e| e.dipole[axis.index()].powi(2)).sum();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1e-300), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn zero_coupling_reproduces_bare_energies(set in excitations(6), modes in modes(3, 1.0), model in model()) {
        let dark: Vec<PhotonMode> = modes.iter().map(|m| PhotonMode { strength: 0.0, ..*m }).collect();
        let sol = solve(model, &set, &dark).unwrap();
        let mut bare: Vec<f64> = set.energies();
        bare.extend(dark.iter().map(|m| m.energy));
        bare.sort_by(f64::total_cmp);
        prop_assert_eq!(sol.energies, bare);
        for c in sol.el_proj.iter().chain(sol.ph_proj.iter()) {
            prop_assert!(*c == 0.0 || *c == 1.0);
        }
    }

    #[test]
    fn weak_coupling_models_agree(set in excitations(6), modes in modes(3, 0.05)) {
        let g_max = set
            .iter()
            .flat_map(|e| modes.iter().map(move |m| coupling_rate(e, m).abs()))
            .fold(0.0, f64::max);
        let w_min = set.energies().into_iter().chain(modes.iter().map(|m| m.energy)).fold(f64::INFINITY, f64::min);
        prop_assume!(g_max / w_min <= 1e-2);
        let q = solve_quadratic(&set, &modes).unwrap();
        let r = solve_rwa(&set, &modes).unwrap();
        let bound = 10.0 * g_max * g_max / w_min;
        for (a, b) in q.energies.iter().zip(&r.energies) {
            prop_assert!((a - b).abs() <= bound + 1e-12, "{a} {b} {bound}");
        }
    }

    #[test]
    fn lower_polariton_redshifts_monotonically(
        energy in 1.0f64..6.0,
        detuning in -0.3f64..0.3,
        d in 0.05f64..2.0,
        model in model(),
    ) {
        let set = ExcitationSet::from_lines(&[(energy, [d, 0.0, 0.0])], "prop").unwrap();
        let cav = CavitySpec::lossless(energy + detuning, 0.01, [1.0, 0.0, 0.0]);
        let points = sweep_coupling(&set, &cav, &linear_grid(0.01, 1.0, 25), model).unwrap();
        // At very weak mixing a blue-detuned cavity can leave the exciton below the
        // photonic threshold, so the photon-like upper branch is picked; only the
        // lowest branch is required to redshift.
        for w in points.windows(2).filter(|w| w[0].metrics.state == 0 && w[1].metrics.state == 0) {
            prop_assert!(w[1].metrics.lower_energy <= w[0].metrics.lower_energy + 1e-12);
        }
        prop_assert_eq!(points.last().unwrap().metrics.state, 0);
    }

    #[test]
    fn broadened_isolated_line_peaks_at_stick(
        energy in 1.0f64..5.0,
        strength in 1e-6f64..10.0,
        gamma in 1e-3f64..0.05,
        step in 1e-4f64..1e-3,
    ) {
        let stick = Stick { energy, strength, photonic_weight: 0.0 };
        let grid = broaden(&[stick], gamma, step, (energy - 0.5, energy + 0.5)).unwrap();
        let (i, _) = grid.peak().unwrap();
        prop_assert!((grid.axis[i] - energy).abs() <= step);
        prop_assert!(grid.values.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn spectra_are_nonnegative(set in excitations(5), modes in modes(2, 1.0), model in model()) {
        let sol = solve(model, &set, &modes).unwrap();
        let sticks = stick_spectrum(&sol, &set, Axis::X).unwrap();
        prop_assert!(sticks.iter().all(|s| s.strength >= 0.0 && (0.0..=1.0).contains(&s.photonic_weight)));
        let grid = broaden(&sticks, 0.01, 0.005, (0.5, 9.0)).unwrap();
        prop_assert!(grid.values.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn coupling_is_linear(
        energy in 0.5f64..8.0,
        d in dipole(),
        pol in polarization(),
        strength in 0.0f64..2.0,
        alpha in -5.0f64..5.0,
    ) {
        let exc = Excitation::new(0, energy, d);
        let base = coupling_rate(&exc, &PhotonMode::new(energy, pol, strength).unwrap());
        // Rounding in the dot product scales with the terms, not their (possibly cancelling) sum.
        let abs_exc = Excitation::new(0, energy, d.map(f64::abs));
        let scale = coupling_rate(&abs_exc, &PhotonMode::new(energy, pol.map(f64::abs), strength).unwrap()).abs();
        let tol = 1e-12 * (alpha.abs() * scale).max(1e-300);
        let scaled_dipole = Excitation::new(0, energy, [alpha * d[0], alpha * d[1], alpha * d[2]]);
        let a = coupling_rate(&scaled_dipole, &PhotonMode::new(energy, pol, strength).unwrap());
        prop_assert!((a - alpha * base).abs() <= tol);
        if alpha > 0.0 {
            let b = coupling_rate(&exc, &PhotonMode::new(energy, pol, alpha * strength).unwrap());
            prop_assert!((b - alpha * base).abs() <= tol);
        }
    }
}

#[test]
fn halving_bath_spacing_moves_lower_polariton_by_less_than_two_steps() {
    let set = BundledSystem::Chb.excitations();
    let solve_at = |spacing: f64| {
        let cav = CavitySpec::lossy(4.0, 0.493, [1.0, 0.0, 0.0], 0.05, spacing);
        let modes = cav.modes().unwrap();
        let sol = solve_rwa(&set, &modes).unwrap();
        lower_polariton_metrics(&sol, &set, Axis::X)
            .unwrap()
            .lower_energy
    };
    let coarse = solve_at(0.002);
    let fine = solve_at(0.001);
    assert!((coarse - fine).abs() < 2.0 * 0.002, "{coarse} vs {fine}");
}

#[test]
fn continuum_absorption_is_quenched_along_the_sweep() {
    let set = ContinuumParams::hbn_like().generate().unwrap();
    let lambdas = linear_grid(0.010, 0.986, 12);
    let totals: Vec<f64> = lambdas
        .iter()
        .map(|&l| {
            let modes = CavitySpec::lossless(4.0, l, [1.0, 0.0, 0.0])
                .modes()
                .unwrap();
            let sol = solve_quadratic(&set, &modes).unwrap();
            window_strength(&stick_spectrum(&sol, &set, Axis::X).unwrap(), 4.25, 9.0)
        })
        .collect();
    for w in totals.windows(2) {
        assert!(w[1] < w[0], "{totals:?}");
    }
}

#[test]
fn resonant_two_level_is_half_light_half_matter() {
    for sys in BundledSystem::ALL {
        let set = sys.excitations();
        let modes = sys.resonant_cavity(0.5).modes().unwrap();
        let sol = solve_rwa(&set, &modes).unwrap();
        for w in spectrum::photonic_weights(&sol) {
            assert!((w - 0.5).abs() < 1e-14, "{sys}: {w}");
        }
    }
}
