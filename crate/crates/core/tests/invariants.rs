use num_complex::Complex64;
use proptest::prelude::*;
use qhsd_core::betti::{check_periodicity, cyclic_betti, gysin_circle_bundle, lefschetz_transfer, BettiTable};
use qhsd_core::report::CheckStatus;
use qhsd_core::smalldual::{
    enumerate_seidel_contributions, hyperplane_defect, make_profile, CurveClassData, SmallDualError,
};
use qhsd_core::subcrit::{affine_line, find_critical_points, segre_p1xp2_chart, TOL_GRAD, TOL_PAIR};

proptest! {
    #[test]
    fn profile_arithmetic(n in 1i64..40, k in 0i64..40) {
        prop_assume!(k <= n);
        match make_profile(n, k, true) {
            Ok(p) => {
                prop_assert!(k == 0 || (n - k) % 2 == 0);
                prop_assert_eq!(p.subcritical_index_bound, n - k);
                if (n + k) % 2 == 0 {
                    prop_assert_eq!(2 * p.c_x.unwrap(), n + k + 2);
                    prop_assert_eq!(2 * p.c_sigma.unwrap(), n + k);
                    prop_assert_eq!(p.ein_c1_coefficient, p.c_x);
                    prop_assert_eq!(p.maslov_sphere, p.q_degree_sigma());
                    // the section is again a small-dual manifold one step down
                    if k >= 2 {
                        let s = make_profile(n - 1, hyperplane_defect(k), true).unwrap();
                        prop_assert_eq!(s.c_x, p.c_sigma);
                    }
                } else {
                    prop_assert!(p.c_x.is_none());
                }
            }
            Err(SmallDualError::ParityViolation { .. }) => prop_assert!(k > 0 && (n - k) % 2 != 0),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn seidel_candidates_match_brute_force(
        gens in prop::collection::vec((1i64..=3, -2i64..=5), 1..=3),
        n in 2i64..=6,
        c_sigma in 1i64..=3,
        d_min in -5i64..=0,
    ) {
        let named: Vec<(String, i64, i64)> = gens.iter().enumerate().map(|(i, &(h, c))| (format!("g{i}"), h, c)).collect();
        let refs: Vec<(&str, i64, i64)> = named.iter().map(|(s, h, c)| (s.as_str(), *h, *c)).collect();
        let cone = CurveClassData::new(&refs);
        let profile = make_profile(n, 0, false).unwrap().with_chern(c_sigma + 1, c_sigma);
        let out = enumerate_seidel_contributions(&profile, &cone, d_min).unwrap();

        prop_assert!(out.classes[0].is_fiber_term());
        let nef = gens.iter().all(|&(h, c)| c - h >= 2);
        prop_assert_eq!(out.short_circuit, nef);
        for c in &out.classes[1..] {
            prop_assert_eq!(c.h_value, 1 - c.d);
            prop_assert!(3 - c.d - n <= c.c1_value && c.c1_value <= 2 - c.d);
            prop_assert!(2 - 2 * n <= 2 * c.vertical_chern && c.vertical_chern <= 0);
            prop_assert_eq!(c.q_exp * c_sigma, c.c1_value - c.h_value);
            prop_assert_eq!(c.t_exp, 2 - c.d);
        }
        prop_assert!(out.classes[1..].windows(2).all(|w| w[0].d >= w[1].d));

        if !nef {
            // every multiplicity vector in a box large enough to hold h = 1 - d_min
            let bound = 1 - d_min;
            let mut count_ok = 0;
            let mut count_bad = 0;
            let mut m = vec![0i64; gens.len()];
            loop {
                let h: i64 = m.iter().zip(&gens).map(|(a, g)| a * g.0).sum();
                let c1: i64 = m.iter().zip(&gens).map(|(a, g)| a * g.1).sum();
                let d = 1 - h;
                if d >= d_min && d <= 0 && 3 - d - n <= c1 && c1 <= 2 - d {
                    if (c1 - h) % c_sigma == 0 { count_ok += 1 } else { count_bad += 1 }
                }
                let mut i = 0;
                while i < m.len() {
                    m[i] += 1;
                    if m[i] <= bound { break; }
                    m[i] = 0;
                    i += 1;
                }
                if i == m.len() { break; }
            }
            prop_assert_eq!(out.classes.len() - 1, count_ok);
            prop_assert_eq!(out.rejected.len(), count_bad);
        }
    }
}

fn pd_table() -> impl Strategy<Value = BettiTable> {
    (1usize..=6).prop_flat_map(|n| {
        prop::collection::vec(0u64..=3, n).prop_map(move |half| {
            let mut r = vec![0u64; 2 * n + 1];
            r[0] = 1;
            for (j, v) in half.iter().enumerate().skip(1) {
                r[j] = *v;
            }
            r[n] = half[0] + 1;
            for j in 0..n {
                r[2 * n - j] = r[j];
            }
            BettiTable::new(r)
        })
    })
}

proptest! {
    #[test]
    fn cyclic_sums_preserve_totals(t in pd_table(), c in 1usize..8) {
        let cy = cyclic_betti(&t, c).unwrap();
        prop_assert_eq!(cy.values.len(), 2 * c);
        prop_assert_eq!(cy.values.iter().sum::<u64>(), t.total());
        for (i, v) in cy.values.iter().enumerate() {
            let direct: u64 = t.ranks().iter().enumerate().filter(|(j, _)| j % (2 * c) == i).map(|(_, b)| b).sum();
            prop_assert_eq!(*v, direct);
        }
    }

    #[test]
    fn duality_always_checked(t in pd_table(), c in 1usize..8) {
        let r = check_periodicity(&t, c).unwrap();
        prop_assert_eq!(r.get("poincare_duality").unwrap().status, CheckStatus::Pass);
    }

    #[test]
    fn gysin_total_rank_is_even(t in pd_table()) {
        let ranks: Vec<u64> = vec![0; t.ranks().len().saturating_sub(2)];
        // zero Euler class: the bundle is a product, H(X x S^1)
        let p = gysin_circle_bundle(&t, &ranks).unwrap();
        prop_assert_eq!(p.total(), 2 * t.total());
        prop_assert_eq!(p.euler_characteristic(), 0);
    }
}

#[test]
fn transfer_of_projective_spaces_with_every_defect_parity() {
    for n in 2..=8usize {
        let cpn = BettiTable::new((0..=2 * n).map(|j| u64::from(j % 2 == 0)).collect());
        let sigma = lefschetz_transfer(&cpn, n, n).unwrap().complete().unwrap();
        assert_eq!(sigma.complex_dim(), Some(n - 1));
        assert_eq!(sigma.total(), n as u64);
        assert!(check_periodicity(&sigma, n).unwrap().passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn line_has_a_unique_foot_point(w in prop::array::uniform4(-5.0f64..5.0)) {
        let w0 = [Complex64::new(w[0], w[1]), Complex64::new(w[2], w[3])];
        let recs = find_critical_points(&affine_line(), &w0, 6, 1).unwrap();
        prop_assert_eq!(recs.len(), 1);
        prop_assert_eq!(recs[0].morse_index, 0);
        prop_assert!((recs[0].phi - (w[2] * w[2] + w[3] * w[3])).abs() < 1e-9);
    }

    #[test]
    fn segre_spectral_invariants(w in prop::collection::vec(-2.0f64..2.0, 10), seed in 0u64..1000) {
        let model = segre_p1xp2_chart();
        let w0: Vec<Complex64> = w.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
        let recs = find_critical_points(&model, &w0, 12, seed).unwrap();
        for r in recs.iter().filter(|r| !r.degenerate) {
            prop_assert!(r.grad_residual <= TOL_GRAD);
            prop_assert!(r.pairing_residual <= TOL_PAIR);
            prop_assert_eq!(r.morse_index, r.index_from_re_g);
            prop_assert!(r.morse_index <= 2 && r.g_rank <= 2);
            prop_assert!(r.eigenvalues.windows(2).all(|e| e[0] <= e[1]));
        }
    }
}
