//! Numerical checks grouped by suite. Every check records its residual, so a
//! report doubles as a residual sweep over the parameter triples.

use crate::config::{Suite, SuiteConfig};
use crate::report::{CheckRecord, SuiteReport, SuiteResult};
use mdc_core::lattice2form::{closure_residual, el_corner_residual, CubeSample};
use mdc_core::params::{check_sij_identity, check_stt_identity, derive, AlternativeForms, DerivedParams, EdgeParams, LatticeParams, GUARD};
use mdc_core::qprop1d::{
    invariant_kernel_residual, multi_time_closed_form, n_step_closed_form, n_step_kernel, one_step_kernel, path_kernel,
    tridiagonal_det, ub_factorization_kernel, uniqueness_scan_1form, Direction, OscLagrangianCoeffs, PathLagrangians, Step,
    TimePath,
};
use mdc_core::qsurface::moves::LABELINGS;
use mdc_core::qsurface::uniqueness::perturbations;
use mdc_core::qsurface::{
    elementary_move_check, flat_patch, popup_surfaces, random_deformation, surface_kernel, uniqueness_scan_2form,
    LatticeLagrangianCoeffs, Move,
};
use mdc_core::reduction::flows::{continuous_flow_residual, continuous_multiform_residual, FlowSolution, JointFlow};
use mdc_core::reduction::{self, p3, solutions, State2, StepLagrangian};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const MARGINAL_TOL: f64 = 1e-9;

/// Below this `|p_i|` one map is close to the identity and perturbations of its
/// Lagrangian barely show along orbits, so probes are skipped.
pub const PROBE_MIN_DIRECTION: f64 = 0.25;

/// Everything a suite needs for one parameter triple.
pub struct Ctx<'a> {
    pub cfg: &'a SuiteConfig,
    pub lp: LatticeParams,
    pub rng: ChaCha8Rng,
}

impl Ctx<'_> {
    fn tag(&self) -> Option<[f64; 3]> {
        Some([self.lp.p, self.lp.q, self.lp.r])
    }

    fn tol(&self, name: &str) -> f64 {
        self.cfg.tolerance(name)
    }

    fn check(&self, name: &str, reference: &str, residual: f64, tol: &str) -> CheckRecord {
        CheckRecord::check(name, reference, self.tag(), residual, self.tol(tol))
    }

    fn expect_fail(&self, name: &str, reference: &str, residual: f64, tol: &str) -> CheckRecord {
        CheckRecord::expect_fail(name, reference, self.tag(), residual, self.tol(tol))
    }

    fn error(&self, name: &str, reference: &str, e: impl std::fmt::Display) -> CheckRecord {
        CheckRecord::error(name, reference, self.tag(), e.to_string())
    }

    fn skip(&self, name: &str, why: &str) -> CheckRecord {
        let mut r = CheckRecord::info(name, why, self.tag(), f64::NAN);
        r.status = format!("skipped: {why}");
        r
    }

    fn unit(&mut self) -> f64 {
        self.rng.random_range(-1.0..1.0)
    }

    fn elliptic(&self) -> Option<DerivedParams> {
        derive(&self.lp).ok().filter(|d| d.is_elliptic())
    }
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn is_caustic(e: &mdc_core::Error) -> bool {
    matches!(e, mdc_core::Error::Caustic(_) | mdc_core::Error::NearCaustic { .. })
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Explicit triples followed by the sampled ones. Sampling uses its own stream,
/// so every suite sees the same triples.
pub fn parameter_triples(cfg: &SuiteConfig) -> Vec<LatticeParams> {
    let mut out: Vec<LatticeParams> =
        cfg.params.explicit.iter().filter_map(|t| LatticeParams::with_hbar(t[0], t[1], t[2], cfg.hbar).ok()).collect();
    if let Some(s) = &cfg.params.sample {
        let mut r = rng_for(cfg.seed, 0);
        let mut drawn = 0;
        let mut attempts = 0;
        while drawn < s.count && attempts < 1000 * s.count {
            attempts += 1;
            let (p, q, rr) = (r.random_range(s.p[0]..s.p[1]), r.random_range(s.q[0]..s.q[1]), r.random_range(s.r[0]..s.r[1]));
            if let Ok(lp) = LatticeParams::with_hbar(p, q, rr, cfg.hbar) {
                if lp.well_separated() && [p, q, rr].iter().all(|x| x.abs() >= GUARD) {
                    out.push(lp);
                    drawn += 1;
                }
            }
        }
    }
    out
}

pub fn run(cfg: &SuiteConfig) -> SuiteReport {
    let triples = parameter_triples(cfg);
    let results = cfg.suites.par_iter().map(|&s| run_suite(cfg, s, &triples)).collect();
    SuiteReport::new(cfg.clone(), results)
}

pub fn run_suite(cfg: &SuiteConfig, suite: Suite, triples: &[LatticeParams]) -> SuiteResult {
    let body: fn(&mut Ctx) -> Vec<CheckRecord> = match suite {
        Suite::Params => params,
        Suite::Lattice => lattice,
        Suite::Reduction => reduction_suite,
        Suite::P3 => p3_suite,
        Suite::Prop1d => prop1d,
        Suite::Uniqueness1d => uniqueness1d,
        Suite::Surface => surface,
        Suite::Uniqueness2d => uniqueness2d,
        Suite::Probes => probes,
    };
    let records: Vec<Vec<CheckRecord>> = triples
        .par_iter()
        .enumerate()
        .map(|(i, lp)| {
            let mut ctx = Ctx { cfg, lp: *lp, rng: rng_for(cfg.seed, (suite.stream() << 32) | i as u64) };
            body(&mut ctx)
        })
        .collect();
    SuiteResult::new(suite.name(), records.into_iter().flatten().collect())
}

fn params(c: &mut Ctx) -> Vec<CheckRecord> {
    let lp = c.lp;
    let mut out = vec![
        match check_stt_identity(&lp) {
            Ok(v) => c.check("stt_identity", "s t t' = s - t + t'", v, "identity"),
            Err(e) => c.error("stt_identity", "s t t' = s - t + t'", e),
        },
        match check_sij_identity(lp.p, lp.q, lp.r) {
            Ok(v) => c.check("sij_identity", "s12 s23 + s23 s31 + s31 s12 = -1", v, "identity"),
            Err(e) => c.error("sij_identity", "s12 s23 + s23 s31 + s31 s12 = -1", e),
        },
    ];
    match derive(&lp) {
        Ok(d) => {
            let consistency = max_of([
                (d.big_p * (1.0 - d.b) - d.big_q * (1.0 + d.b)).abs() / d.big_p.abs().max(d.big_q),
                (d.big_r * (1.0 + d.a) - d.big_p * (1.0 - d.a)).abs() / d.big_p.abs().max(d.big_r.abs()),
            ]);
            out.push(c.check("oscillator_coefficients", "P, R from b, a", consistency, "identity"));
            let alt = AlternativeForms::new(&lp);
            let rel = |x: f64, y: f64| (x - y).abs() / y.abs().max(1.0);
            out.push(c.check("b_closed_form", "2b = 1 + 2s - s^2", rel(alt.b_alt, 2.0 * d.b), "identity"));
            out.push(c.check("p_closed_form", "P = p^2 + 2pq", rel(alt.p_closed, d.big_p), "identity"));
            out.push(c.check("two_a_closed_form", "2a from t, t'", rel(alt.two_a_alt, 2.0 * d.a), "identity"));
            out.push(CheckRecord::info("b_alternative_gap", "1 + 2s - s^2 against b", c.tag(), (alt.b_alt - d.b).abs()));
            out.push(CheckRecord::info("p_alternative_gap", "p^2 + pq against P", c.tag(), (alt.p_alt - d.big_p).abs()));
            if let (Some(mu), Some(nu)) = (d.mu, d.nu) {
                let v = max_of([(mu.cos() + d.b).abs(), (nu.cos() + d.a).abs()]);
                out.push(c.check("angles", "cos mu = -b, cos nu = -a", v, "identity"));
            }
        }
        Err(e) => out.push(c.error("oscillator_coefficients", "P, R from b, a", e)),
    }
    out
}

fn lattice(c: &mut Ctx) -> Vec<CheckRecord> {
    let p = c.lp.directions();
    let (mut spread, mut closure, mut corner) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..c.cfg.trials {
        let u: [f64; 4] = std::array::from_fn(|_| c.unit());
        match CubeSample::fill(u[0], u[1], u[2], u[3], p) {
            Ok((cube, sp)) => {
                spread = spread.max(sp);
                closure = closure.max(closure_residual(&cube, p).unwrap_or(f64::INFINITY));
                let faces = [
                    (cube.u1, cube.u2, cube.u12, 0, 1),
                    (cube.u2, cube.u3, cube.u23, 1, 2),
                    (cube.u3, cube.u1, cube.u31, 2, 0),
                ];
                for (ui, uj, uij, i, j) in faces {
                    corner = corner.max(el_corner_residual(cube.u, ui, uj, uij, p[i], p[j]).map(f64::abs).unwrap_or(f64::INFINITY));
                }
            }
            Err(e) => return vec![c.error("cube", "three-way u123", e)],
        }
    }
    vec![
        c.check("cube", "three-way u123", spread, "cube"),
        c.check("closure", "2-form closure on solutions", closure, "closure"),
        c.check("el_corner", "corner Euler-Lagrange equation", corner, "identity"),
    ]
}

fn reduction_suite(c: &mut Ctx) -> Vec<CheckRecord> {
    let (s, t, tp) = (c.lp.s(), c.lp.t(), c.lp.tprime());
    let mut out = Vec::new();
    match reduction::bar_matrix(t, tp) {
        Ok(m) => {
            let h = reduction::hat_matrix(s);
            let det = max_of([(h.det() - 1.0).abs() / h.max_abs().powi(2).max(1.0), (m.det() - 1.0).abs() / m.max_abs().powi(2).max(1.0)]);
            out.push(c.check("det", "unimodular maps", det, "det"));
            out.push(match reduction::commutator_residual(s, t, tp) {
                Ok(v) => c.check("commutator", "maps commute", v / (h.max_abs() * m.max_abs()).max(1.0), "commutator"),
                Err(e) => c.error("commutator", "maps commute", e),
            });
        }
        Err(e) => out.push(c.error("det", "unimodular maps", e)),
    }
    let d = match derive(&c.lp) {
        Ok(d) => d,
        Err(e) => {
            out.push(c.error("orbit", "conserved invariants", e));
            return out;
        }
    };
    let ib = |st: State2| reduction::invariant_eval(st.x, reduction::hat_map(st, d.s).x, d.b);
    let ia = |st: State2| reduction::invariant_eval(st.x, reduction::bar_map(st, d.t, d.tprime).unwrap().x, d.a);
    let norm2 = |st: State2| st.x * st.x + st.y * st.y;
    let coef = 1.0 + d.b.abs() + d.a.abs();
    let steps = if d.is_elliptic() { 100 } else { 20 };
    let (mut drift, mut mom, mut closure) = (0.0f64, 0.0f64, 0.0f64);
    let (lb, la) = (StepLagrangian::hat(&d), StepLagrangian::bar(&d));
    for _ in 0..c.cfg.trials {
        let st0 = State2::new(c.unit(), c.unit());
        let (ib0, ia0) = (ib(st0), ia(st0));
        let mut scale = ib0.abs().max(ia0.abs()).max(1.0);
        let (mut h, mut b) = (st0, st0);
        for _ in 0..steps {
            h = reduction::hat_map(h, d.s);
            b = reduction::bar_map(b, d.t, d.tprime).unwrap();
            scale = scale.max(coef * norm2(h).max(norm2(b)));
            drift = drift.max(max_of([(ib(h) - ib0).abs(), (ia(h) - ia0).abs(), (ib(b) - ib0).abs(), (ia(b) - ia0).abs()]) / scale);
        }
        let xh = reduction::hat_map(st0, d.s);
        let xb = reduction::bar_map(st0, d.t, d.tprime).unwrap();
        let (pb, pa) = (reduction::momentum_b(st0.x, xh.x, &d), reduction::momentum_a(st0.x, xb.x, &d));
        mom = mom.max((pa - pb).abs() / pa.abs().max(1.0));
        let xhb = reduction::hat_map(xb, d.s);
        let size = max_of([1.0, st0.x * st0.x, xh.x * xh.x, xb.x * xb.x, xhb.x * xhb.x]);
        let lscale = (lb.alpha.abs() + la.alpha.abs()).max(1.0) * coef * size;
        closure = closure.max(reduction::oneform_closure_residual(st0, &d, &lb, &la).unwrap_or(f64::INFINITY) / lscale);
    }
    out.push(c.check("orbit", "conserved invariants", drift, "orbit"));
    out.push(c.check("momentum", "X_a = X_b", mom, "momentum"));
    out.push(c.check("oneform", "1-form closure", closure, "oneform"));
    if !d.is_elliptic() {
        out.push(c.skip("joint_solution", "hyperbolic regime"));
        return out;
    }
    let (c1, c2) = (c.unit(), c.unit());
    out.push(match solutions::solution_residuals((5, 5), c1, c2, &d) {
        Ok(r) => c.check("joint_solution", "explicit joint solution", r.max(), "joint"),
        Err(e) => c.error("joint_solution", "explicit joint solution", e),
    });
    let mut flow = 0.0f64;
    for coeff in [d.b, d.a] {
        for m in 1..=4 {
            let sol = FlowSolution::new(c.unit(), c.unit());
            let (x, y, z) = continuous_flow_residual(coeff, m, &sol).unwrap_or((f64::INFINITY, 0.0, 0.0));
            let w = 1.0 - coeff * coeff;
            let mf = m as f64;
            let scale = max_of([1.0, sol.d1(coeff, m).abs(), (w * sol.d2(coeff, m)).abs(), mf * mf * sol.value(coeff, m).abs(), mf / w]);
            flow = max_of([flow, x / scale, y / scale, z / scale]);
        }
    }
    let j = JointFlow { m: 2, n: 3, c1: c.unit(), c2: c.unit() };
    let multi = continuous_multiform_residual(d.a, d.b, &j).map(|(x, y)| x.max(y)).unwrap_or(f64::INFINITY);
    out.push(c.check("flow", "continuous flow equations", flow, "flow"));
    out.push(c.check("multiform", "continuous multiform closure", multi, "multiform"));
    out
}

fn p3_suite(c: &mut Ctx) -> Vec<CheckRecord> {
    let (s, t, tp) = (c.lp.s(), c.lp.t(), c.lp.tprime());
    let mut out = vec![
        match p3::commutator_residual(s, t, tp).and_then(|v| Ok(v / (p3::hat_matrix(s).max_abs() * p3::bar_matrix(t, tp)?.max_abs()).max(1.0))) {
            Ok(v) => c.check("commutator", "P=3 maps commute", v, "commutator"),
            Err(e) => c.error("commutator", "P=3 maps commute", e),
        },
        c.check(
            "involution",
            "{I1, I2} = 0",
            p3::poisson_bracket(&p3::QuadraticObservable::i1(), &p3::QuadraticObservable::i2(s)).max_abs(),
            "identity",
        ),
    ];
    let mut drift = 0.0f64;
    for _ in 0..c.cfg.trials {
        let st0: [f64; 4] = std::array::from_fn(|_| c.unit());
        let i0 = p3::invariants(&st0, s);
        let norm2 = |z: &[f64; 4]| z.iter().map(|x| x * x).sum::<f64>();
        let mut scale = i0.0.abs().max(i0.1.abs()).max(norm2(&st0)).max(1.0);
        let (mut h, mut b) = (st0, st0);
        for _ in 0..50 {
            h = p3::hat_map(&h, s);
            b = match p3::bar_map(&b, t, tp) {
                Ok(x) => x,
                Err(e) => return vec![c.error("invariants", "conserved I1, I2", e)],
            };
            for st in [h, b] {
                scale = scale.max(norm2(&st));
                let i = p3::invariants(&st, s);
                drift = drift.max((i.0 - i0.0).abs().max((i.1 - i0.1).abs()) / scale);
            }
        }
    }
    out.push(c.check("invariants", "conserved I1, I2", drift, "orbit"));
    let Some(d) = c.elliptic() else {
        out.push(c.skip("joint_solution", "hyperbolic regime"));
        return out;
    };
    let amps: [f64; 4] = std::array::from_fn(|_| c.unit());
    match p3::JointSolution::new(&d, amps) {
        Ok(sol) => out.push(c.check("joint_solution", "P=3 joint solution", p3::joint_solution_residual(&sol, &d, 5), "joint")),
        Err(e) => out.push(c.skip("joint_solution", &format!("no real frequencies: {e}"))),
    }
    out
}

fn prop1d(c: &mut Ctx) -> Vec<CheckRecord> {
    let Some(d) = c.elliptic() else {
        return vec![c.skip("propagators", "hyperbolic regime")];
    };
    let mut out = Vec::new();
    let mut det = 0.0f64;
    for n in 2..=12 {
        match tridiagonal_det(n, &d) {
            Ok(t) => {
                let scale = (0.5 * ((d.big_p + d.big_q) / (d.hbar * d.q)).abs()).powi(n as i32 - 1) / d.sin_mu().abs();
                det = det.max((t.recursion - t.closed).norm().max((t.explicit - t.closed).norm()) / scale);
            }
            Err(e) if is_caustic(&e) => {}
            Err(e) => return vec![c.error("tridiagonal", "determinant recursion", e)],
        }
    }
    out.push(c.check("tridiagonal", "determinant recursion", det, "tridiagonal"));
    let (mut iter, mut inv, mut ub) = (0.0f64, 0.0f64, 0.0f64);
    for dir in [Direction::Hat, Direction::Bar] {
        for n in 1..=12 {
            if let (Ok(a), Ok(b)) = (n_step_kernel(n, dir, &d), n_step_closed_form(n, dir, &d)) {
                iter = iter.max(a.compare(&b).map(|x| x.exponent_diff / b.a.max_abs().max(1.0)).unwrap_or(f64::INFINITY));
            }
            if let Ok(v) = invariant_kernel_residual(n, dir, &d) {
                inv = inv.max(v);
            }
        }
        ub = match (ub_factorization_kernel(dir, &d), one_step_kernel(dir, &d)) {
            (Ok(x), Ok(y)) => x.compare(&y).map(|k| ub.max(k.exponent_diff / y.a.max_abs()).max(k.amp_deviation())).unwrap_or(f64::INFINITY),
            (Err(e), _) | (_, Err(e)) if is_caustic(&e) => ub,
            _ => f64::INFINITY,
        };
    }
    out.push(c.check("propagator", "N-step kernel closed form", iter, "propagator"));
    out.push(c.check("kernel_invariant", "kernel intertwines the invariant", inv, "kernel_invariant"));
    out.push(c.check("ub", "U_b factorization", ub, "ub"));
    let l = PathLagrangians::canonical(&d);
    use Step::*;
    let pairs = [
        (vec![HatFwd, BarFwd], vec![BarFwd, HatFwd]),
        (vec![BarFwd, HatFwd, BarBack], vec![HatFwd]),
        (vec![HatFwd, HatFwd, BarFwd, HatBack, BarBack, BarFwd], vec![HatFwd, BarFwd]),
    ];
    let mut local = 0.0f64;
    for (x, y) in pairs {
        local = match (path_kernel(&TimePath::new(x), &l), path_kernel(&TimePath::new(y), &l)) {
            (Ok(kx), Ok(ky)) => kx
                .compare(&ky)
                .map(|k| local.max(k.exponent_diff / ky.a.max_abs().max(1.0)).max(k.amp_deviation()))
                .unwrap_or(f64::INFINITY),
            _ => f64::INFINITY,
        };
    }
    out.push(c.check("path", "local path moves", local, "path"));
    let mut random = 0.0f64;
    for _ in 0..c.cfg.trials {
        let (n, m) = (c.rng.random_range(-2..=3), c.rng.random_range(-2..=3));
        let Ok(want) = multi_time_closed_form(n, m, &d) else { continue };
        let detours = c.rng.random_range(0..3);
        let rng = &mut c.rng;
        let path = TimePath::random(n, m, detours, |k| rng.random_range(0..k));
        random = match path_kernel(&path, &l).and_then(|k| k.compare(&want)) {
            Ok(k) => random.max(k.exponent_diff / want.a.max_abs().max(1.0)),
            Err(e) if is_caustic(&e) => random,
            Err(_) => f64::INFINITY,
        };
    }
    out.push(c.check("random_path", "random paths match the closed form", random, "random_path"));
    out
}

fn uniqueness1d(c: &mut Ctx) -> Vec<CheckRecord> {
    let Some(d) = c.elliptic() else {
        return vec![c.skip("uniqueness", "hyperbolic regime")];
    };
    let tol = c.tol("uniqueness");
    let mut out = Vec::new();
    let canonical = uniqueness_scan_1form(&OscLagrangianCoeffs::canonical(&d), tol);
    out.push(match canonical {
        Ok(u) => c.check("canonical", "canonical 1-form is path independent", u.mismatch, "uniqueness"),
        Err(e) => c.error("canonical", "canonical 1-form is path independent", e),
    });
    let mut worst = 0.0f64;
    for _ in 0..c.cfg.trials {
        let gamma = c.rng.random_range(0.3..3.0);
        let f = c.unit();
        worst = match OscLagrangianCoeffs::path_independent(d.a, d.b, gamma, f).and_then(|k| uniqueness_scan_1form(&k, tol)) {
            Ok(u) => worst.max(u.mismatch),
            Err(mdc_core::Error::DegenerateCoeffs) => worst,
            Err(_) => f64::INFINITY,
        };
    }
    out.push(c.check("family", "path independent family", worst, "uniqueness"));
    out
}

/// Canonical 2-form coefficients and their scale.
fn surface_coeffs(c: &Ctx) -> mdc_core::Result<(LatticeLagrangianCoeffs, f64)> {
    let e = EdgeParams::new(c.lp.directions())?;
    let scale = max_of(e.s.iter().flatten().map(|x| x.abs())).max(1.0);
    Ok((LatticeLagrangianCoeffs::canonical(&e), scale))
}

fn surface(c: &mut Ctx) -> Vec<CheckRecord> {
    let (k, scale) = match surface_coeffs(c) {
        Ok(x) => x,
        Err(e) => return vec![c.error("surface", "canonical 2-form", e)],
    };
    let mut out = Vec::new();
    let (flat, pop) = popup_surfaces([0, 0, 0]);
    out.push(match (surface_kernel(&flat, &k, MARGINAL_TOL), surface_kernel(&pop, &k, MARGINAL_TOL)) {
        (Ok(kf), Ok(kp)) => match kf.compare(&kp) {
            Ok(diff) if kp.vol == kf.vol + 2 => c.check("popup", "pop-up leaves the kernel unchanged", diff.exponent_diff / scale, "surface"),
            Ok(diff) => CheckRecord::error("popup", "pop-up leaves the kernel unchanged", c.tag(), format!("volume power changed by {}", diff.vol_diff)),
            Err(e) => c.error("popup", "pop-up leaves the kernel unchanged", e),
        },
        (Err(e), _) | (_, Err(e)) => c.error("popup", "pop-up leaves the kernel unchanged", e),
    });
    let mut moves = 0.0f64;
    for m in Move::ALL {
        for labels in LABELINGS {
            moves = moves.max(elementary_move_check(m, labels, &k, MARGINAL_TOL).map(|x| x.exponent_diff / scale).unwrap_or(f64::INFINITY));
        }
    }
    out.push(c.check("moves", "elementary moves", moves, "moves"));
    let start = match flat_patch(2, 1, 1, 3) {
        Ok(s) => s,
        Err(e) => return [out, vec![c.error("deformations", "random deformations", e)]].concat(),
    };
    let k0 = match surface_kernel(&start.to_surface(), &k, MARGINAL_TOL) {
        Ok(x) => x,
        Err(e) => return [out, vec![c.error("deformations", "random deformations", e)]].concat(),
    };
    let mut deform = 0.0f64;
    for _ in 0..c.cfg.trials.min(10) {
        let rng = &mut c.rng;
        let (end, _) = random_deformation(&start, 6, |_| true, |n| rng.random_range(0..n));
        deform = deform.max(
            surface_kernel(&end.to_surface(), &k, MARGINAL_TOL)
                .and_then(|ke| k0.compare(&ke))
                .map(|x| x.exponent_diff / scale)
                .unwrap_or(f64::INFINITY),
        );
    }
    out.push(c.check("deformations", "random deformations", deform, "surface"));
    out
}

fn uniqueness2d(c: &mut Ctx) -> Vec<CheckRecord> {
    let (k, scale) = match surface_coeffs(c) {
        Ok(x) => x,
        Err(e) => return vec![c.error("critical", "canonical 2-form is critical", e)],
    };
    let base = uniqueness_scan_2form(&k, MARGINAL_TOL);
    let mut out = vec![c.check("critical", "canonical 2-form is critical", base.move_mismatch / scale, "moves")];
    out.push(c.check("lambda", "critical branch lambda = 0", base.lambda.abs(), "identity"));
    let factor = c.rng.random_range(0.5..3.0);
    let scaled = uniqueness_scan_2form(&k.scaled(factor), MARGINAL_TOL);
    out.push(c.check("scaled", "uniform scaling stays critical", scaled.move_mismatch / (scale * factor), "moves"));
    out
}

/// Perturbed inputs whose residuals must rise above the tolerance.
fn probes(c: &mut Ctx) -> Vec<CheckRecord> {
    let p = c.lp.directions();
    if p.iter().any(|x| x.abs() < PROBE_MIN_DIRECTION) {
        return vec![c.skip("probes", "direction parameter too small to resolve perturbations")];
    }
    let mut out = Vec::new();
    let mut off = Vec::new();
    for _ in 0..c.cfg.trials {
        let u: [f64; 4] = std::array::from_fn(|_| c.unit());
        if let Ok((cube, _)) = CubeSample::fill(u[0], u[1], u[2], u[3], p) {
            let moved = CubeSample { u12: cube.u12 + 1.0, ..cube };
            off.push(closure_residual(&moved, p).unwrap_or(0.0));
        }
    }
    if !off.is_empty() {
        out.push(c.expect_fail("offshell_closure", "closure fails off solutions", max_of(off), "offshell"));
    }
    if let Some(d) = c.elliptic() {
        let (lb, la) = (StepLagrangian::hat(&d), StepLagrangian::bar(&d));
        let states: Vec<State2> = (0..c.cfg.trials).map(|_| State2::new(c.unit(), c.unit())).collect();
        let mut weakest = f64::INFINITY;
        for which in 0..6 {
            let (mut pb, mut pa) = (lb, la);
            let target = if which < 3 { &mut pb } else { &mut pa };
            let scale = target.alpha.abs();
            match which % 3 {
                0 => target.alpha *= 1.01,
                1 => target.coef += 1e-2,
                _ => target.half += 1e-2,
            }
            let r = states.iter().map(|st| reduction::oneform_closure_residual(*st, &d, &pb, &pa).unwrap_or(0.0) / scale);
            weakest = weakest.min(max_of(r));
        }
        out.push(c.expect_fail("oneform_perturbed", "perturbed 1-form is not closed", weakest, "perturbation"));
        let tol = c.tol("uniqueness");
        if let Ok(base) = OscLagrangianCoeffs::path_independent(d.a, d.b, 1.3, 0.4) {
            let mut weakest = f64::INFINITY;
            for which in 0..4 {
                let mut k = base;
                match which {
                    0 => k.alpha *= 1.01,
                    1 => k.beta *= 1.01,
                    2 => k.a0 += 1e-2,
                    _ => k.b0 += 1e-2,
                }
                let scale = if which % 2 == 0 { k.alpha.abs() } else { k.beta.abs() };
                weakest = weakest.min(uniqueness_scan_1form(&k, tol).map(|u| u.mismatch / scale).unwrap_or(f64::INFINITY));
            }
            out.push(c.expect_fail("oneform_uniqueness", "perturbed coefficients break path independence", weakest, "uniqueness"));
        }
    }
    if let Ok((k, scale)) = surface_coeffs(c) {
        let weakest = perturbations(&k, 1e-2)
            .iter()
            .map(|(_, _, _, q)| uniqueness_scan_2form(q, MARGINAL_TOL).move_mismatch / scale)
            .fold(f64::INFINITY, f64::min);
        out.push(c.expect_fail("twoform_uniqueness", "perturbed 2-form breaks the moves", weakest, "uniqueness"));
    }
    out
}
