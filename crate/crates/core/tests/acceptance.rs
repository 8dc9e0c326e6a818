//! Acceptance run: one line per criterion, nonzero exit if any fails.

use mdc_core::lattice2form::{closure_residual, CubeSample};
use mdc_core::params::{check_sij_identity, check_stt_identity, derive, DerivedParams, EdgeParams, LatticeParams};
use mdc_core::qprop1d::*;
use mdc_core::qsurface::moves::LABELINGS;
use mdc_core::qsurface::uniqueness::perturbations;
use mdc_core::qsurface::*;
use mdc_core::reduction::flows::{central_difference, continuous_flow_residual, continuous_multiform_residual, FlowSolution, JointFlow};
use mdc_core::reduction::{self, p3, State2, StepLagrangian};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(42);
    r.set_stream(stream);
    r
}

fn sample_params(r: &mut ChaCha8Rng) -> LatticeParams {
    sample_in(r, -3.0, 3.0)
}

fn sample_in(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> LatticeParams {
    loop {
        let (p, q, rr) = (r.random_range(lo..hi), r.random_range(lo..hi), r.random_range(lo..hi));
        if let Ok(lp) = LatticeParams::new(p, q, rr) {
            if lp.well_separated() {
                return lp;
            }
        }
    }
}

fn sample_elliptic(r: &mut ChaCha8Rng) -> (LatticeParams, DerivedParams) {
    loop {
        let lp = sample_params(r);
        if let Ok(d) = derive(&lp) {
            if d.is_elliptic() && d.b.abs() < 0.95 && d.a.abs() < 0.95 {
                return (lp, d);
            }
        }
    }
}

fn d321() -> DerivedParams {
    derive(&LatticeParams::new(3.0, 2.0, 1.0).unwrap()).unwrap()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    v[v.len() / 2]
}

fn c1_parameter_identities() -> Outcome {
    let mut r = rng(1);
    let (mut stt, mut sij): (f64, f64) = (0.0, 0.0);
    for _ in 0..1000 {
        let lp = sample_params(&mut r);
        stt = stt.max(check_stt_identity(&lp).unwrap());
        sij = sij.max(check_sij_identity(lp.p, lp.q, lp.r).unwrap());
    }
    let lp = LatticeParams::new(3.0, 2.0, 1.0).unwrap();
    let e = EdgeParams::from_lattice(&lp).unwrap();
    let (s, t, tp) = (lp.s(), lp.t(), lp.tprime());
    let explicit = (s * t * tp - 1.0 / 30.0).abs() < 1e-16
        && (s - t + tp - 1.0 / 30.0).abs() < 1e-15
        && e.s[0][1] == 5.0
        && e.s[1][2] == 3.0
        && e.s[2][0] == -2.0;
    outcome(stt <= 1e-12 && sij <= 1e-12 && explicit, format!("stt {stt:.1e}, sij {sij:.1e}, (3,2,1) explicit {explicit}"))
}

fn c2_mdc() -> Outcome {
    let mut r = rng(2);
    let (mut spread, mut on): (f64, f64) = (0.0, 0.0);
    let mut off = Vec::new();
    for _ in 0..1000 {
        let lp = sample_params(&mut r);
        let p = lp.directions();
        let u: [f64; 4] = core::array::from_fn(|_| r.random_range(-1.0..1.0));
        let (cube, sp) = CubeSample::fill(u[0], u[1], u[2], u[3], p).unwrap();
        spread = spread.max(sp);
        on = on.max(closure_residual(&cube, p).unwrap());
        let moved = CubeSample { u12: cube.u12 + 0.1, ..cube };
        off.push(closure_residual(&moved, p).unwrap());
    }
    let least = off.iter().cloned().fold(f64::INFINITY, f64::min);
    let off = median(off);
    outcome(
        spread <= 1e-12 && on <= 1e-10 && off >= 1e-3,
        format!("cube spread {spread:.1e}, closure on-shell {on:.1e}, off-shell median {off:.1e} (min {least:.1e})"),
    )
}

fn c3_reduction() -> Outcome {
    let mut r = rng(3);
    let (mut det, mut comm, mut inv, mut mom, mut common): (f64, f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for _ in 0..1000 {
        let lp = sample_in(&mut r, 0.2, 3.0);
        let (s, t, tp) = (lp.s(), lp.t(), lp.tprime());
        let Ok(tm) = reduction::bar_matrix(t, tp) else { continue };
        det = det.max((reduction::hat_matrix(s).det() - 1.0).abs()).max((tm.det() - 1.0).abs());
        comm = comm.max(reduction::commutator_residual(s, t, tp).unwrap());
    }
    for _ in 0..50 {
        let (_, d) = sample_elliptic(&mut r);
        let ib = |st: State2| reduction::invariant_eval(st.x, reduction::hat_map(st, d.s).x, d.b);
        let ia = |st: State2| reduction::invariant_eval(st.x, reduction::bar_map(st, d.t, d.tprime).unwrap().x, d.a);
        let st0 = State2::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let (ib0, ia0) = (ib(st0), ia(st0));
        let (mut h, mut b) = (st0, st0);
        for _ in 0..100 {
            h = reduction::hat_map(h, d.s);
            b = reduction::bar_map(b, d.t, d.tprime).unwrap();
            inv = inv.max((ib(h) - ib0).abs()).max((ia(h) - ia0).abs()).max((ib(b) - ib0).abs()).max((ia(b) - ia0).abs());
        }
        let xs = |st: State2| {
            let xh = reduction::hat_map(st, d.s).x;
            let xb = reduction::bar_map(st, d.t, d.tprime).unwrap().x;
            (reduction::momentum_b(st.x, xh, &d), reduction::momentum_a(st.x, xb, &d))
        };
        let hamiltonian = |st: State2| reduction::invariant_common(st.x, xs(st).0, d.big_p);
        let (kb, ka) = (hamiltonian(st0) / ib0, hamiltonian(st0) / ia0);
        for _ in 0..10 {
            let st = State2::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
            let (xb, xa) = xs(st);
            mom = mom.max((xa - xb).abs());
            let h = hamiltonian(st);
            common = common.max((h - kb * ib(st)).abs() / h.abs().max(1.0)).max((h - ka * ia(st)).abs() / h.abs().max(1.0));
        }
    }
    outcome(
        det <= 1e-12 && comm <= 1e-12 && inv <= 1e-9 && mom <= 1e-10 && common <= 1e-10,
        format!("det {det:.1e}, commutator {comm:.1e}, invariant drift {inv:.1e}, X_a-X_b {mom:.1e}, common invariant {common:.1e}"),
    )
}

fn c4_oneform_closure() -> Outcome {
    let mut r = rng(4);
    let d = d321();
    let (lb, la) = (StepLagrangian::hat(&d), StepLagrangian::bar(&d));
    let states: Vec<State2> = (0..200).map(|_| State2::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).collect();
    let box_l = |lb: &StepLagrangian, la: &StepLagrangian| -> Vec<f64> {
        states.iter().map(|st| reduction::oneform_closure_residual(*st, &d, lb, la).unwrap()).collect()
    };
    let on = box_l(&lb, &la).into_iter().fold(0.0, f64::max);
    let eps = 1e-2;
    let mut weakest = f64::INFINITY;
    for which in 0..6 {
        let (mut pb, mut pa) = (lb, la);
        let target = if which < 3 { &mut pb } else { &mut pa };
        match which % 3 {
            0 => target.alpha += eps,
            1 => target.coef += eps,
            _ => target.half += eps,
        }
        weakest = weakest.min(median(box_l(&pb, &pa)));
    }
    outcome(on <= 1e-10 && weakest > 1e-4, format!("on-shell {on:.1e}, weakest perturbed median {weakest:.1e}"))
}

fn c5_p3() -> Outcome {
    let mut r = rng(5);
    let (mut comm, mut bracket, mut inv, mut joint): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let mut cases = vec![d321()];
    while cases.len() < 6 {
        let (_, d) = sample_elliptic(&mut r);
        if p3::JointSolution::new(&d, [0.0; 4]).is_ok() {
            cases.push(d);
        }
    }
    for d in &cases {
        comm = comm.max(p3::commutator_residual(d.s, d.t, d.tprime).unwrap());
        bracket = bracket.max(p3::poisson_bracket(&p3::QuadraticObservable::i1(), &p3::QuadraticObservable::i2(d.s)).max_abs());
        let st0: [f64; 4] = core::array::from_fn(|_| r.random_range(-1.0..1.0));
        let i0 = p3::invariants(&st0, d.s);
        let (mut h, mut b) = (st0, st0);
        for _ in 0..100 {
            h = p3::hat_map(&h, d.s);
            b = p3::bar_map(&b, d.t, d.tprime).unwrap();
            for st in [h, b] {
                let i = p3::invariants(&st, d.s);
                inv = inv.max((i.0 - i0.0).abs()).max((i.1 - i0.1).abs());
            }
        }
        let amps: [f64; 4] = core::array::from_fn(|_| r.random_range(-1.0..1.0));
        let sol = p3::JointSolution::new(d, amps).unwrap();
        joint = joint.max(p3::joint_solution_residual(&sol, d, 5));
    }
    outcome(
        comm <= 1e-12 && bracket == 0.0 && inv <= 1e-9 && joint <= 1e-8,
        format!("commutator {comm:.1e}, bracket {bracket:e}, invariant drift {inv:.1e}, joint solution {joint:.1e} over {} parameter sets", cases.len()),
    )
}

fn c6_propagators() -> Outcome {
    let d = d321();
    let mut det: f64 = 0.0;
    for n in 2..=20 {
        det = det.max(tridiagonal_det(n, &d).unwrap().max_rel_diff());
    }
    let two = tridiagonal_det(2, &d).unwrap();
    let exact = (two.recursion - mdc_core::Complex64::new(0.0, -8.5)).norm() <= 4.0 * f64::EPSILON * 8.5;
    let mut iter: f64 = 0.0;
    let mut skipped = 0;
    for dir in [Direction::Hat, Direction::Bar] {
        for n in 1..=20 {
            match (n_step_kernel(n, dir, &d), n_step_closed_form(n, dir, &d)) {
                (Ok(a), Ok(b)) => iter = iter.max(a.compare(&b).unwrap().exponent_diff),
                _ => skipped += 1,
            }
        }
    }
    let mut ub: f64 = 0.0;
    for dir in [Direction::Hat, Direction::Bar] {
        let diff = ub_factorization_kernel(dir, &d).unwrap().compare(&one_step_kernel(dir, &d).unwrap()).unwrap();
        ub = ub.max(diff.exponent_diff).max(diff.amp_deviation());
    }
    outcome(
        det <= 1e-12 && exact && iter <= 1e-9 && ub <= 1e-11,
        format!("det recursion vs closed {det:.1e}, N=2 det {} (exact {exact}), N-step {iter:.1e} ({skipped} caustic skips), U_b {ub:.1e}", two.recursion),
    )
}

fn c7_path_independence() -> Outcome {
    let d = d321();
    let l = PathLagrangians::canonical(&d);
    use Step::*;
    let pairs = [
        (vec![HatFwd, BarFwd], vec![BarFwd, HatFwd]),
        (vec![BarFwd, HatFwd, BarBack], vec![HatFwd]),
        (vec![HatFwd, HatFwd, BarFwd, HatBack, BarBack, BarFwd], vec![HatFwd, BarFwd]),
    ];
    let mut local: f64 = 0.0;
    for (x, y) in pairs {
        let diff = path_kernel(&TimePath::new(x), &l).unwrap().compare(&path_kernel(&TimePath::new(y), &l).unwrap()).unwrap();
        local = local.max(diff.exponent_diff).max(diff.amp_deviation());
    }
    let mut r = rng(7);
    let mut random: f64 = 0.0;
    let mut count = 0;
    for (n, m) in [(1, 1), (2, 1), (3, 2), (-1, 2), (2, -3)] {
        let want = multi_time_closed_form(n, m, &d).unwrap();
        for _ in 0..50 {
            let detours = r.random_range(0..3);
            let path = TimePath::random(n, m, detours, |k| r.random_range(0..k));
            let diff = path_kernel(&path, &l).unwrap().compare(&want).unwrap();
            random = random.max(diff.exponent_diff);
            count += 1;
        }
    }
    outcome(local <= 1e-10 && random <= 1e-9, format!("local moves {local:.1e}, {count} random paths {random:.1e}"))
}

fn c8_oneform_uniqueness() -> Outcome {
    let d = d321();
    let base = OscLagrangianCoeffs::path_independent(d.a, d.b, 1.3, 0.4).unwrap();
    let pass = uniqueness_scan_1form(&base, 1e-10).unwrap();
    let canonical = uniqueness_scan_1form(&OscLagrangianCoeffs::canonical(&d), 1e-10).unwrap();
    let mut weakest = f64::INFINITY;
    for which in 0..4 {
        let mut c = base;
        match which {
            0 => c.alpha += 1e-3,
            1 => c.beta += 1e-3,
            2 => c.a0 += 1e-3,
            _ => c.b0 += 1e-3,
        }
        weakest = weakest.min(uniqueness_scan_1form(&c, 1e-10).map(|u| u.mismatch).unwrap_or(f64::INFINITY));
    }
    outcome(
        pass.pass && canonical.pass && weakest > 1e-5,
        format!("path-independent family {:.1e}, canonical {:.1e}, weakest perturbation {weakest:.1e}", pass.mismatch, canonical.mismatch),
    )
}

fn c9_surface_independence() -> Outcome {
    let d = d321();
    let _ = d;
    let e = EdgeParams::new([3.0, 2.0, 1.0]).unwrap();
    let k = LatticeLagrangianCoeffs::canonical(&e);
    let (flat, pop) = popup_surfaces([0, 0, 0]);
    let (kf, kp) = (surface_kernel(&flat, &k, 1e-9).unwrap(), surface_kernel(&pop, &k, 1e-9).unwrap());
    let popup = kf.compare(&kp).unwrap();
    let popup_ok = popup.exponent_diff <= 1e-12 && kp.vol == 2;
    let mut moves: f64 = 0.0;
    for m in Move::ALL {
        for labels in LABELINGS {
            moves = moves.max(elementary_move_check(m, labels, &k, 1e-9).map(|x| x.exponent_diff).unwrap_or(f64::INFINITY));
        }
    }
    let start = flat_patch(3, 2, 1, 4).unwrap();
    let k0 = surface_kernel(&start.to_surface(), &k, 1e-9).unwrap();
    let mut r = rng(9);
    let mut deform: f64 = 0.0;
    let mut steps = 0;
    for _ in 0..20 {
        let (end, log) = random_deformation(&start, 8, |_| true, |n| r.random_range(0..n));
        steps += log.steps.len();
        deform = deform.max(surface_kernel(&end.to_surface(), &k, 1e-9).and_then(|ke| k0.compare(&ke)).map(|x| x.exponent_diff).unwrap_or(f64::INFINITY));
    }
    outcome(
        popup_ok && moves <= 1e-12 && deform <= 1e-10,
        format!(
            "pop-up exponent {:.1e} vol {} amp ratio {:.3}, moves {moves:.1e}, 20 sequences ({steps} steps) {deform:.1e}",
            popup.exponent_diff, kp.vol, popup.amp_ratio.re
        ),
    )
}

fn c10_twoform_uniqueness() -> Outcome {
    let e = EdgeParams::new([3.0, 2.0, 1.0]).unwrap();
    let k = LatticeLagrangianCoeffs::canonical(&e);
    let base = uniqueness_scan_2form(&k, 1e-9);
    let scaled = uniqueness_scan_2form(&k.scaled(2.5), 1e-9);
    let mut weakest = f64::INFINITY;
    let mut critical_hits = 0;
    let grid = perturbations(&k, 1e-2);
    for (_, _, _, p) in &grid {
        let rep = uniqueness_scan_2form(p, 1e-9);
        weakest = weakest.min(rep.move_mismatch);
        critical_hits += rep.critical as usize;
    }
    let mut asym = k;
    asym.c[0][1] += 0.3;
    let rejected = uniqueness_scan_2form(&asym, 1e-9).delta_rejected;
    outcome(
        base.critical && scaled.move_mismatch <= 1e-9 && critical_hits == 0 && weakest > 1e-5 && rejected,
        format!(
            "canonical critical {} (mismatch {:.1e}), {} perturbations weakest {weakest:.1e}, asymmetric c rejected {rejected}",
            base.critical,
            base.move_mismatch,
            grid.len()
        ),
    )
}

fn c11_quantum_invariant() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    let d = d321();
    for dir in [Direction::Hat, Direction::Bar] {
        for n in 1..=10 {
            match invariant_kernel_residual(n, dir, &d) {
                Ok(v) => worst = worst.max(v),
                Err(_) => skipped += 1,
            }
        }
    }
    outcome(worst <= 1e-12 && skipped == 0, format!("coefficient residual {worst:.1e}, {skipped} skipped"))
}

fn c12_flows() -> Outcome {
    let d = d321();
    let mut r = rng(12);
    let mut analytic: f64 = 0.0;
    let mut fd_ok = true;
    let mut fd_worst: f64 = 0.0;
    let mut ratios = (f64::INFINITY, 0.0f64);
    let h = 1e-5;
    for coeff in [d.b, d.a] {
        for m in 1..=6 {
            let sol = FlowSolution::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
            let (x, y, z) = continuous_flow_residual(coeff, m, &sol).unwrap();
            analytic = analytic.max(x).max(y).max(z);
            let exact = sol.d1(coeff, m);
            let e1 = (central_difference(coeff, m, &sol, h) - exact).abs();
            let e2 = (central_difference(coeff, m, &sol, 4.0 * h) - exact).abs();
            fd_worst = fd_worst.max(e1);
            // quadrupling h scales the truncation error by 16
            if e2 > 1e-9 {
                let q = e2 / e1;
                ratios = (ratios.0.min(q), ratios.1.max(q));
                fd_ok &= (12.0..=20.0).contains(&q);
            }
        }
    }
    let mut multi: f64 = 0.0;
    for _ in 0..20 {
        let j = JointFlow { m: 2, n: 3, c1: r.random_range(-1.0..1.0), c2: r.random_range(-1.0..1.0) };
        let (x, y) = continuous_multiform_residual(d.a, d.b, &j).unwrap();
        multi = multi.max(x).max(y);
    }
    outcome(
        analytic <= 1e-10 && fd_ok && multi <= 1e-8,
        format!(
            "analytic {analytic:.1e}, finite difference {fd_worst:.1e}, error ratio under h -> 4h in [{:.1}, {:.1}], multiform {multi:.1e}",
            ratios.0, ratios.1
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        ("parameter identities", c1_parameter_identities),
        ("multidimensional consistency", c2_mdc),
        ("reduction maps", c3_reduction),
        ("1-form closure", c4_oneform_closure),
        ("P=3 system", c5_p3),
        ("propagators", c6_propagators),
        ("path independence", c7_path_independence),
        ("1-form uniqueness", c8_oneform_uniqueness),
        ("surface independence", c9_surface_independence),
        ("2-form uniqueness", c10_twoform_uniqueness),
        ("quantum invariant", c11_quantum_invariant),
        ("continuous flows", c12_flows),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += !o.pass as usize;
        println!("criterion {:>2} {:<30} {}  {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
