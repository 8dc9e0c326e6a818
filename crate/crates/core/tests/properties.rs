use mdc_core::lattice2form::{closure_residual, CubeSample};
use mdc_core::oscgauss::{HalfInt, OscKernel, Var, DEFAULT_TOL};
use mdc_core::params::{check_sij_identity, check_stt_identity, derive, EdgeParams, LatticeParams};
use mdc_core::qprop1d::*;
use mdc_core::qsurface::moves::LABELINGS;
use mdc_core::qsurface::*;
use mdc_core::reduction::{self, p3};
use mdc_core::{Complex64, Mat};
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_4, PI};

fn separated() -> impl Strategy<Value = LatticeParams> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64)
        .prop_filter_map("guard", |(p, q, r)| LatticeParams::new(p, q, r).ok().filter(|lp| lp.well_separated()))
}

fn positive() -> impl Strategy<Value = LatticeParams> {
    (0.2..3.0f64, 0.2..3.0f64, 0.2..3.0f64)
        .prop_filter_map("guard", |(p, q, r)| LatticeParams::new(p, q, r).ok().filter(|lp| lp.well_separated()))
}

fn x(i: u32) -> Var {
    Var::Visit(i)
}

/// `int exp(i/hbar (a x^2/2 + l x)) dx` along the rotated contour `x = e^{i phi} t`.
fn fresnel_quadrature(a: f64, l: f64, hbar: f64) -> Complex64 {
    let phi = a.signum() * FRAC_PI_4;
    let rot = Complex64::from_polar(1.0, phi);
    let centre = -l * phi.sin() / a.abs();
    let width = 12.0 * (hbar / a.abs()).sqrt();
    let n = 20_000;
    let h = 2.0 * width / n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let t = centre - width + k as f64 * h;
        let z = rot * t;
        let e = Complex64::i() / hbar * (0.5 * a * z * z + l * z);
        let w = if k == 0 || k == n { 0.5 } else { 1.0 };
        sum += w * e.exp();
    }
    sum * rot * h
}

fn sym3(v: [f64; 6]) -> Mat {
    Mat::from_rows(&[[v[0], v[1], v[2]], [v[1], v[3], v[4]], [v[2], v[4], v[5]]])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parameter_identities(lp in separated()) {
        prop_assert!(check_stt_identity(&lp).unwrap() <= 1e-12);
        prop_assert!(check_sij_identity(lp.p, lp.q, lp.r).unwrap() <= 1e-12);
    }

    #[test]
    fn edge_coefficients_antisymmetric(lp in separated()) {
        let e = EdgeParams::from_lattice(&lp).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    prop_assert!((e.s[i][j] + e.s[j][i]).abs() <= 1e-12 * e.s[i][j].abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn cube_closes(lp in separated(), u in prop::array::uniform4(-1.0..1.0f64)) {
        let (cube, spread) = CubeSample::fill(u[0], u[1], u[2], u[3], lp.directions()).unwrap();
        prop_assert!(spread <= 1e-11);
        prop_assert!(closure_residual(&cube, lp.directions()).unwrap() <= 1e-10);
    }

    #[test]
    fn reduction_maps_unimodular_and_commuting(lp in positive()) {
        let (s, t, tp) = (lp.s(), lp.t(), lp.tprime());
        prop_assert!((reduction::hat_matrix(s).det() - 1.0).abs() <= 1e-12);
        if let Ok(m) = reduction::bar_matrix(t, tp) {
            prop_assert!((m.det() - 1.0).abs() <= 1e-12);
            prop_assert!(reduction::commutator_residual(s, t, tp).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn p3_invariants_in_involution(lp in separated()) {
        let s = lp.s();
        let b = p3::poisson_bracket(&p3::QuadraticObservable::i1(), &p3::QuadraticObservable::i2(s));
        prop_assert_eq!(b.max_abs(), 0.0);
        prop_assert!(p3::commutator_residual(s, lp.t(), lp.tprime()).map(|c| c <= 1e-10).unwrap_or(true));
    }

    #[test]
    fn fresnel_matches_quadrature(a in prop_oneof![-3.0..-0.5f64, 0.5..3.0f64], b0 in -2.0..2.0f64, cpl in -1.0..1.0f64, y in -1.0..1.0f64, hbar in 0.5..2.0f64) {
        let k = OscKernel::new(vec![x(0), x(1)], Mat::from_rows(&[[a, cpl], [cpl, 0.3]]), vec![b0, 0.1], 0.2).unwrap();
        let m = k.marginalize(&x(0), DEFAULT_TOL).unwrap();
        prop_assert_eq!(m.pihbar, HalfInt::HALF);
        let got = m.eval_smooth(&[y], hbar);
        let rest = Complex64::from_polar(1.0, (0.5 * 0.3 * y * y + 0.1 * y + 0.2) / hbar);
        let want = rest * fresnel_quadrature(a, b0 + cpl * y, hbar);
        prop_assert!((got - want).norm() <= 1e-8 * want.norm(), "{got} vs {want}");
    }

    #[test]
    fn marginal_is_schur_complement(v in prop::array::uniform6(-2.0..2.0f64), lin in prop::array::uniform3(-1.0..1.0f64)) {
        let a = sym3(v);
        let axx = v[0] * v[3] - v[1] * v[1];
        prop_assume!(v[0].abs() > 0.1 && v[3].abs() > 0.1 && axx.abs() > 0.1);
        let k = OscKernel::new(vec![x(0), x(1), x(2)], a, lin.to_vec(), 0.0).unwrap();
        let ab = k.marginalize(&x(0), DEFAULT_TOL).and_then(|k| k.marginalize(&x(1), DEFAULT_TOL)).unwrap();
        let ba = k.marginalize(&x(1), DEFAULT_TOL).and_then(|k| k.marginalize(&x(0), DEFAULT_TOL)).unwrap();
        let d = ab.compare(&ba).unwrap();
        prop_assert!(d.exponent_diff <= 1e-9 && d.amp_deviation() <= 1e-9);
        prop_assert_eq!(ab.pihbar, HalfInt::ONE);
        // independent 2x2 elimination
        let inv = [[v[3] / axx, -v[1] / axx], [-v[1] / axx, v[0] / axx]];
        let col = [v[2], v[4]];
        let mut schur = v[5];
        let mut lin_y = lin[2];
        let mut c = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                schur -= col[i] * inv[i][j] * col[j];
                lin_y -= col[i] * inv[i][j] * lin[j];
                c -= 0.5 * lin[i] * inv[i][j] * lin[j];
            }
        }
        prop_assert!((ab.a[(0, 0)] - schur).abs() <= 1e-9 * schur.abs().max(1.0));
        prop_assert!((ab.b[0] - lin_y).abs() <= 1e-9 * lin_y.abs().max(1.0));
        prop_assert!((ab.c - c).abs() <= 1e-9 * c.abs().max(1.0));
        let sig = if axx < 0.0 { 0.0 } else { 2.0 * v[0].signum() };
        let want = Complex64::from_polar(1.0 / axx.abs().sqrt(), sig * FRAC_PI_4);
        prop_assert!((ab.amp - want).norm() <= 1e-9 * want.norm());
    }

    #[test]
    fn conjugation_commutes_with_marginals(v in prop::array::uniform6(-2.0..2.0f64)) {
        prop_assume!(v[0].abs() > 0.1);
        let k = OscKernel::new(vec![x(0), x(1), x(2)], sym3(v), vec![0.3, -0.1, 0.2], 0.5).unwrap();
        let lhs = k.conj().marginalize(&x(0), DEFAULT_TOL).unwrap();
        let rhs = k.marginalize(&x(0), DEFAULT_TOL).unwrap().conj();
        let d = lhs.compare(&rhs).unwrap();
        prop_assert!(d.exponent_diff <= 1e-12 && d.amp_deviation() <= 1e-12);
    }

    #[test]
    fn absent_variable_gives_volume(v in prop::array::uniform6(-2.0..2.0f64)) {
        let k = OscKernel::new(vec![x(0), x(1), x(2)], sym3(v), vec![0.0; 3], 0.0).unwrap();
        let free = OscKernel::new(vec![x(9)], Mat::zeros(1, 1), vec![0.0], 0.0).unwrap();
        let joined = k.glue(&free, &[], DEFAULT_TOL).unwrap().marginalize(&x(9), DEFAULT_TOL).unwrap();
        prop_assert_eq!(joined.vol, 1);
        prop_assert!(joined.compare(&k).unwrap().exponent_diff == 0.0);
    }

    #[test]
    fn random_paths_match_closed_form(n in -3i32..=3, m in -3i32..=3, detours in 0usize..3, seed in any::<u64>()) {
        prop_assume!(n != 0 || m != 0);
        let d = derive(&LatticeParams::new(3.0, 2.0, 1.0).unwrap()).unwrap();
        let want = match multi_time_closed_form(n, m, &d) {
            Ok(k) => k,
            Err(_) => return Ok(()),
        };
        let mut state = seed;
        let path = TimePath::random(n, m, detours, |k| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % k as u64) as usize
        });
        prop_assert_eq!(path.endpoint(), (n, m));
        let got = path_kernel(&path, &PathLagrangians::canonical(&d)).unwrap();
        prop_assert!(got.compare(&want).unwrap().exponent_diff <= 1e-9);
    }

    #[test]
    fn iterated_kernel_matches_closed_form(lp in positive(), n in 1u32..8) {
        let Ok(d) = derive(&lp) else { return Ok(()) };
        prop_assume!(d.is_elliptic());
        for dir in [Direction::Hat, Direction::Bar] {
            if let (Ok(a), Ok(b)) = (n_step_kernel(n, dir, &d), n_step_closed_form(n, dir, &d)) {
                let diff = a.compare(&b).unwrap();
                let scale = b.a.max_abs().max(1.0);
                prop_assert!(diff.exponent_diff <= 1e-9 * scale);
                prop_assert!(diff.amp_deviation() <= 1e-6);
            }
        }
    }

    #[test]
    fn moves_hold_for_any_edge_params(lp in separated()) {
        let k = LatticeLagrangianCoeffs::canonical(&EdgeParams::from_lattice(&lp).unwrap());
        let scale = k.b.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
        for m in Move::ALL {
            for labels in LABELINGS {
                let d = elementary_move_check(m, labels, &k, 1e-9).unwrap();
                prop_assert!(d.exponent_diff <= 1e-9 * scale * scale);
            }
        }
    }

    #[test]
    fn interior_labels_and_order_are_invisible(perm in Just((0..4u32).collect::<Vec<_>>()).prop_shuffle(), m in 0usize..3, l in 0usize..6) {
        let k = LatticeLagrangianCoeffs::canonical(&EdgeParams::new([3.0, 2.0, 1.0]).unwrap());
        let (_, second) = elementary_move_surfaces(Move::ALL[m], LABELINGS[l]).unwrap();
        let reference = surface_kernel(&second, &k, 1e-9).unwrap();
        let labels: Vec<Var> = second.interior.iter().map(|v| Var::Site(*v)).collect();
        let renamed = surface_exponent(&second, &k)
            .unwrap()
            .map_vars(|v| match labels.iter().position(|w| w == v) {
                Some(i) => Var::Visit(100 + i as u32),
                None => v.clone(),
            })
            .unwrap();
        let order: Vec<Var> = perm.iter().filter(|&&i| (i as usize) < labels.len()).map(|&i| Var::Visit(100 + i)).collect();
        let got = renamed.marginalize_greedy(&order, 1e-9).unwrap();
        let d = got.compare(&reference).unwrap();
        prop_assert!(d.exponent_diff <= 1e-12 && d.amp_deviation() <= 1e-12 && d.vol_diff == 0);
    }

    #[test]
    fn reversal_conjugates(m in 0usize..3, l in 0usize..6, second in any::<bool>()) {
        let k = LatticeLagrangianCoeffs::canonical(&EdgeParams::new([3.0, 2.0, 1.0]).unwrap());
        let pair = elementary_move_surfaces(Move::ALL[m], LABELINGS[l]).unwrap();
        let s = if second { pair.1 } else { pair.0 };
        let fwd = surface_kernel(&s, &k, 1e-9).unwrap();
        let back = surface_kernel(&s.reversed(), &k, 1e-9).unwrap();
        let d = back.compare(&fwd.conj()).unwrap();
        prop_assert!(d.exponent_diff <= 1e-12 && d.amp_deviation() <= 1e-12);
    }

    #[test]
    fn deformations_keep_the_boundary_kernel(seed in any::<u64>()) {
        let k = LatticeLagrangianCoeffs::canonical(&EdgeParams::new([3.0, 2.0, 1.0]).unwrap());
        let start = flat_patch(2, 1, 1, 3).unwrap();
        let mut state = seed;
        let (end, _) = random_deformation(&start, 4, |_| true, |n| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % n as u64) as usize
        });
        prop_assert!(end.is_valid());
        let a = surface_kernel(&start.to_surface(), &k, 1e-9).unwrap();
        let b = surface_kernel(&end.to_surface(), &k, 1e-9).unwrap();
        prop_assert!(a.compare(&b).unwrap().exponent_diff <= 1e-10);
    }

    #[test]
    fn uniform_scaling_stays_critical(f in prop_oneof![-3.0..-0.2f64, 0.2..3.0f64]) {
        let k = LatticeLagrangianCoeffs::canonical(&EdgeParams::new([3.0, 2.0, 1.0]).unwrap()).scaled(f);
        let rep = uniqueness_scan_2form(&k, 1e-9);
        prop_assert_eq!(rep.branch, Branch::Critical);
        prop_assert!(rep.move_mismatch <= 1e-9);
    }
}

#[test]
fn fresnel_quadrature_oracle_sanity() {
    let got = fresnel_quadrature(1.0, 0.0, 1.0);
    let want = Complex64::from_polar((2.0 * PI).sqrt(), FRAC_PI_4);
    assert!((got - want).norm() < 1e-10);
}
