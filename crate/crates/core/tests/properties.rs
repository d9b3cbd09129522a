use std::collections::BTreeMap;
use std::f64::consts::PI;

use proptest::prelude::*;
use stationary_wigner::analysis::{current, density, symmetry_error};
use stationary_wigner::csv::{read_table, write_profile};
use stationary_wigner::*;

fn grid(m: usize) -> VelocityGrid {
    VelocityGrid::new(PI, PI / 2.0, m, true).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-30.0..30.0f64, 1..5)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn system(coeffs: Vec<f64>, m: usize, nx: usize, table: &BTreeMap<i64, f64>) -> WignerSystem {
    let g = grid(m);
    let b = BoundaryData::tabulated(&g, table).unwrap();
    let p = FourierPotential::new(1.0, coeffs).unwrap();
    WignerSystem::new(p, g, SpatialMesh::new(1.0, nx).unwrap(), b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coupling_is_skew(c in coeffs(), x in -0.5..0.5f64, seed in prop::collection::vec(-1.0..1.0f64, 24)) {
        let g = grid(6);
        let p = FourierPotential::new(1.0, c).unwrap();
        let (f, h) = seed.split_at(12);
        let af = p.apply_coupling(&g, x, f).unwrap();
        let ah = p.apply_coupling(&g, x, h).unwrap();
        let scale = 1.0 + p.coupling_bound();
        prop_assert!((dot(h, &af) + dot(f, &ah)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn coupling_is_odd_and_periodic(c in coeffs(), x in -0.5..0.5f64, f in prop::collection::vec(-1.0..1.0f64, 12)) {
        let g = grid(6);
        let p = FourierPotential::new(1.0, c).unwrap();
        let plus = p.apply_coupling(&g, x, &f).unwrap();
        let minus = p.apply_coupling(&g, -x, &f).unwrap();
        let shifted = p.apply_coupling(&g, x + 1.0, &f).unwrap();
        for k in 0..f.len() {
            prop_assert_eq!(plus[k], -minus[k]);
            prop_assert!((plus[k] - shifted[k]).abs() <= 1e-11 * (1.0 + p.coupling_bound()));
        }
    }

    #[test]
    fn coupling_respects_bound(c in coeffs(), x in -0.5..0.5f64, f in prop::collection::vec(-1.0..1.0f64, 12)) {
        let g = grid(6);
        let p = FourierPotential::new(1.0, c).unwrap();
        let norm = dot(&f, &f).sqrt();
        prop_assume!(norm > 1e-6);
        let af = p.apply_coupling(&g, x, &f).unwrap();
        prop_assert!(dot(&af, &af).sqrt() <= p.coupling_bound() * norm * (1.0 + 1e-12));
    }

    #[test]
    fn symmetry_error_scales_with_boundary_data(
        c in coeffs(),
        a in 0.0..2.0f64,
        b in 0.0..2.0f64,
        lambda in 0.1..10.0f64,
    ) {
        let base: BTreeMap<i64, f64> = [(0, a), (1, b), (-1, b), (-2, a)].into();
        let scaled: BTreeMap<i64, f64> = base.iter().map(|(k, v)| (*k, lambda * v)).collect();
        for scheme in Scheme::ALL {
            let s1 = solve_bvp(&system(c.clone(), 8, 16, &base), scheme, DEFAULT_REL_TOL).unwrap();
            let s2 = solve_bvp(&system(c.clone(), 8, 16, &scaled), scheme, DEFAULT_REL_TOL).unwrap();
            let (e1, e2) = (symmetry_error(&s1), symmetry_error(&s2));
            prop_assert!((e2 - lambda * e1).abs() <= 1e-9 * (1.0 + lambda * e1), "{scheme}: {e2} vs {lambda} * {e1}");
            let mass: f64 = s1.values().iter().map(|v| v.abs()).sum();
            let n1 = density(&s1);
            let n2 = density(&s2);
            let j1 = current(&s1);
            let j2 = current(&s2);
            for k in 0..n1.len() {
                prop_assert!((n2[k] - lambda * n1[k]).abs() <= 1e-10 * lambda * (1.0 + mass));
                prop_assert!((j2[k] - lambda * j1[k]).abs() <= 1e-10 * lambda * (1.0 + mass) * 40.0);
            }
        }
    }

    #[test]
    fn symmetry_error_vanishes_iff_mirrored(
        half in prop::collection::vec(-5.0..5.0f64, 4 * 3),
        middle in prop::collection::vec(-5.0..5.0f64, 4),
        poke in 0usize..20,
        delta in prop_oneof![-1.0..-1e-3f64, 1e-3..1.0f64],
    ) {
        // nv = 4, Nx = 4: nodes 0, 1 mirrored onto 4, 3; node 2 is its own mirror.
        let sys = system(vec![0.0], 2, 4, &[(0, 1.0)].into());
        let mut values = vec![0.0; 20];
        for p in 0..4 {
            for j in 0..2 {
                values[j * 4 + p] = half[j * 4 + p];
                values[(4 - j) * 4 + p] = half[j * 4 + p];
            }
            values[8 + p] = middle[p];
        }
        let sol = DiscreteSolution::from_values(values.clone(), sys.clone(), Method::Oracle).unwrap();
        prop_assert_eq!(symmetry_error(&sol), 0.0);
        let j = poke / 4;
        prop_assume!(j != 2);
        values[poke] += delta;
        let sol = DiscreteSolution::from_values(values, sys, Method::Oracle).unwrap();
        prop_assert!(symmetry_error(&sol) > 0.0);
    }

    #[test]
    fn solutions_are_mirror_symmetric(
        c in prop::collection::vec(-8.0..8.0f64, 2..4),
        inflow in prop::collection::vec(0.0..1.0f64, 4),
    ) {
        let table: BTreeMap<i64, f64> = [0, 1, -1, -2].into_iter().zip(inflow).collect();
        let sys = system(c, 10, 20, &table);
        let opts = stationary_wigner::propagator::PropagatorOptions::default();
        let sols = [
            solve_bvp(&sys, Scheme::Central, DEFAULT_REL_TOL).unwrap(),
            stationary_wigner::propagator::solve_bvp_shooting(&sys, &opts).unwrap(),
        ];
        for sol in &sols {
            let mass = stationary_wigner::analysis::total_mass(sol);
            prop_assert!(symmetry_error(sol) <= 1e-9 * (1.0 + mass), "{}: {}", sol.method(), symmetry_error(sol));
        }
    }

    #[test]
    fn csv_round_trip(values in prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 1..50)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.csv");
        let x: Vec<f64> = (0..values.len()).map(|k| k as f64 / 7.0 - 0.5).collect();
        write_profile(&x, &values, &path).unwrap();
        let t = read_table(&path).unwrap();
        prop_assert_eq!(t.column("x").unwrap(), x);
        prop_assert_eq!(t.column("value").unwrap(), values);
    }
}
