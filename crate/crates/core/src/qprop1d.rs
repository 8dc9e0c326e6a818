//! Propagators of the reduced oscillator.
//!
//! One time step in either lattice direction is the exact Gaussian kernel
//! `sqrt(alpha / 2 pi i hbar) exp(i L(x, x') / hbar)`. Kernels along a time
//! path are products of step kernels integrated over every interior visit.
//! Endpoints are always named `xi` and `xf`.

#[allow(unused_imports)]
use num_traits::Float;
use crate::oscgauss::{HalfInt, OscKernel, Var, DEFAULT_TOL};
use crate::params::DerivedParams;
use crate::reduction::StepLagrangian;
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use num_complex::Complex64;

pub const CAUSTIC_GUARD: f64 = 1e-6;

pub fn xi() -> Var {
    Var::named("xi")
}

pub fn xf() -> Var {
    Var::named("xf")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Hat,
    Bar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    HatFwd,
    HatBack,
    BarFwd,
    BarBack,
}

impl Step {
    pub const ALL: [Step; 4] = [Step::HatFwd, Step::HatBack, Step::BarFwd, Step::BarBack];

    pub fn direction(self) -> Direction {
        match self {
            Step::HatFwd | Step::HatBack => Direction::Hat,
            Step::BarFwd | Step::BarBack => Direction::Bar,
        }
    }

    pub fn is_forward(self) -> bool {
        matches!(self, Step::HatFwd | Step::BarFwd)
    }

    /// Lattice displacement `(dn, dm)`.
    pub fn delta(self) -> (i32, i32) {
        match self {
            Step::HatFwd => (1, 0),
            Step::HatBack => (-1, 0),
            Step::BarFwd => (0, 1),
            Step::BarBack => (0, -1),
        }
    }

    pub fn reverse(self) -> Step {
        match self {
            Step::HatFwd => Step::HatBack,
            Step::HatBack => Step::HatFwd,
            Step::BarFwd => Step::BarBack,
            Step::BarBack => Step::BarFwd,
        }
    }
}

/// Sequence of unit steps; every visit is a fresh integration variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TimePath {
    pub steps: Vec<Step>,
}

impl TimePath {
    pub fn new(steps: Vec<Step>) -> Self {
        TimePath { steps }
    }

    /// All hat steps first, then all bar steps (negative counts go backwards).
    pub fn monotone(n: i32, m: i32) -> Self {
        let mut steps = Vec::new();
        let h = if n >= 0 { Step::HatFwd } else { Step::HatBack };
        let b = if m >= 0 { Step::BarFwd } else { Step::BarBack };
        steps.extend(core::iter::repeat_n(h, n.unsigned_abs() as usize));
        steps.extend(core::iter::repeat_n(b, m.unsigned_abs() as usize));
        TimePath { steps }
    }

    pub fn endpoint(&self) -> (i32, i32) {
        self.steps.iter().fold((0, 0), |(n, m), s| {
            let (dn, dm) = s.delta();
            (n + dn, m + dm)
        })
    }

    /// Lattice points visited, starting at the origin.
    pub fn visits(&self) -> Vec<(i32, i32)> {
        let mut out = vec![(0, 0)];
        for s in &self.steps {
            let (n, m) = *out.last().expect("nonempty");
            let (dn, dm) = s.delta();
            out.push((n + dn, m + dm));
        }
        out
    }

    /// Random path to `(n, m)` with `detours` back-and-forth excursions,
    /// driven by `pick(k)` returning an index in `0..k`.
    pub fn random(n: i32, m: i32, detours: usize, mut pick: impl FnMut(usize) -> usize) -> Self {
        let mut steps = TimePath::monotone(n, m).steps;
        for i in (1..steps.len()).rev() {
            steps.swap(i, pick(i + 1));
        }
        for _ in 0..detours {
            let s = Step::ALL[pick(4)];
            let at = pick(steps.len() + 1);
            steps.insert(at, s);
            let back = at + 1 + pick(steps.len() - at);
            steps.insert(back, s.reverse());
        }
        TimePath { steps }
    }
}

/// The pair of step Lagrangians used along a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLagrangians {
    pub hat: StepLagrangian,
    pub bar: StepLagrangian,
}

impl PathLagrangians {
    pub fn canonical(d: &DerivedParams) -> Self {
        PathLagrangians { hat: StepLagrangian::hat(d), bar: StepLagrangian::bar(d) }
    }

    pub fn get(&self, dir: Direction) -> StepLagrangian {
        match dir {
            Direction::Hat => self.hat,
            Direction::Bar => self.bar,
        }
    }
}

/// `L_a = alpha (x x~ + (a - a0) x^2 + a0 x~^2)`,
/// `L_b = beta (x x^ + (b - b0) x^2 + b0 x^^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscLagrangianCoeffs {
    pub alpha: f64,
    pub beta: f64,
    pub a0: f64,
    pub b0: f64,
    pub a: f64,
    pub b: f64,
    pub gamma: f64,
    pub f: f64,
}

impl OscLagrangianCoeffs {
    /// Coefficients tied together by the path independence conditions
    /// `alpha sqrt|1 - a^2| = beta sqrt|1 - b^2| = gamma`,
    /// `a0 = a/2 + f/(2 alpha)`, `b0 = b/2 + f/(2 beta)`.
    pub fn path_independent(a: f64, b: f64, gamma: f64, f: f64) -> Result<Self> {
        let (wa, wb) = ((1.0 - a * a).abs().sqrt(), (1.0 - b * b).abs().sqrt());
        if wa == 0.0 || wb == 0.0 {
            return Err(Error::DegenerateCoeffs);
        }
        let (alpha, beta) = (gamma / wa, gamma / wb);
        Ok(OscLagrangianCoeffs {
            alpha,
            beta,
            a0: 0.5 * a + f / (2.0 * alpha),
            b0: 0.5 * b + f / (2.0 * beta),
            a,
            b,
            gamma,
            f,
        })
    }

    /// `alpha = (P+R)/r`, `beta = (P+Q)/q`, `a0 = a/2`, `b0 = b/2`.
    pub fn canonical(d: &DerivedParams) -> Self {
        let (la, lb) = (StepLagrangian::bar(d), StepLagrangian::hat(d));
        OscLagrangianCoeffs { alpha: la.alpha, beta: lb.alpha, a0: la.half, b0: lb.half, a: d.a, b: d.b, gamma: 1.0, f: 0.0 }
    }

    pub fn lagrangians(&self) -> PathLagrangians {
        PathLagrangians {
            hat: StepLagrangian { alpha: self.beta, coef: self.b, half: self.b0 },
            bar: StepLagrangian { alpha: self.alpha, coef: self.a, half: self.a0 },
        }
    }
}

fn step_amplitude(alpha: f64) -> Complex64 {
    Complex64::from_polar(alpha.abs().sqrt(), alpha.signum() * FRAC_PI_4)
}

/// `sqrt(alpha) e^{i pi/4} (2 pi hbar)^{-1/2} exp(i L(x_from, x_to) / hbar)`;
/// a backward step uses `-L(x_to, x_from)` and the conjugate amplitude.
pub fn step_kernel(l: &StepLagrangian, forward: bool, from: Var, to: Var) -> Result<OscKernel> {
    let [axx, axy, ayy] = l.quadratic();
    let (quad, amp) = if forward {
        ([(0, 0, 0.5 * axx), (0, 1, axy), (1, 1, 0.5 * ayy)], step_amplitude(l.alpha))
    } else {
        ([(1, 1, -0.5 * axx), (0, 1, -axy), (0, 0, -0.5 * ayy)], step_amplitude(l.alpha).conj())
    };
    Ok(OscKernel::from_monomials(vec![from, to], &quad, &[], 0.0)?.with_amplitude(amp, HalfInt::from_halves(-1)))
}

fn require_elliptic(d: &DerivedParams) -> Result<()> {
    if d.is_elliptic() && d.q != 0.0 && d.r != 0.0 {
        Ok(())
    } else {
        Err(Error::OutOfRegime)
    }
}

/// One time step from `xi` to `xf`.
pub fn one_step_kernel(dir: Direction, d: &DerivedParams) -> Result<OscKernel> {
    require_elliptic(d)?;
    step_kernel(&PathLagrangians::canonical(d).get(dir), true, xi(), xf())
}

/// `e^{iV(xf)/2hbar} e^{iT(X)/hbar} e^{iV(xi)/2hbar}` with momentum eigenstates
/// inserted: plane waves `e^{i(xf - xi)X/hbar} / (2 pi hbar)`, `T = X^2/(2 alpha)`,
/// `V/2 = (alpha (c - h) + alpha/2) xi^2` and `(alpha h + alpha/2) xf^2`.
pub fn ub_factorization_kernel(dir: Direction, d: &DerivedParams) -> Result<OscKernel> {
    require_elliptic(d)?;
    let l = PathLagrangians::canonical(d).get(dir);
    let x = Var::Momentum(0);
    let vi = l.alpha * (l.coef - l.half) + 0.5 * l.alpha;
    let vf = l.alpha * l.half + 0.5 * l.alpha;
    let k = OscKernel::from_monomials(
        vec![xi(), xf(), x.clone()],
        &[(0, 0, vi), (1, 1, vf), (2, 2, 0.5 / l.alpha), (1, 2, 1.0), (0, 2, -1.0)],
        &[],
        0.0,
    )?
    .with_amplitude(Complex64::new(1.0, 0.0), HalfInt::from_halves(-2));
    k.marginalize(&x, DEFAULT_TOL)
}

fn angle(dir: Direction, d: &DerivedParams) -> Result<f64> {
    match dir {
        Direction::Hat => d.mu(),
        Direction::Bar => d.nu(),
    }
}

fn check_caustic(theta: f64) -> Result<()> {
    let s = theta.sin();
    if s.abs() < CAUSTIC_GUARD {
        Err(Error::Caustic(s.abs()))
    } else {
        Ok(())
    }
}

/// Glues `n` one-step kernels, integrating the `n - 1` interior points.
pub fn n_step_kernel(n: u32, dir: Direction, d: &DerivedParams) -> Result<OscKernel> {
    if n == 0 {
        return Err(Error::DegenerateParams("at least one step"));
    }
    require_elliptic(d)?;
    check_caustic(angle(dir, d)? * n as f64)?;
    let l = PathLagrangians::canonical(d).get(dir);
    let mut k = step_kernel(&l, true, xi(), Var::Visit(1))?;
    for j in 1..n {
        let next = step_kernel(&l, true, Var::Visit(j), Var::Visit(j + 1))?;
        k = k.glue(&next, &[Var::Visit(j)], DEFAULT_TOL)?;
    }
    let k = k.rename(&Var::Visit(n), xf())?;
    if !k.constraints.is_empty() {
        return Err(Error::Caustic(0.0));
    }
    Ok(k)
}

/// Phase of the Gaussian prefactor after a total rotation `theta`:
/// `pi/4` plus `pi/2` for each zero of `sin` passed, odd in `theta`.
fn maslov_phase(theta: f64) -> f64 {
    theta.signum() * (FRAC_PI_4 + FRAC_PI_2 * (theta.abs() / PI).floor())
}

/// `(sqrt(P)/sin th)[2 xi xf - (xi^2 + xf^2) cos th]` with prefactor
/// `|2 sqrt(P)/sin th|^{1/2} (2 pi hbar)^{-1/2}` and the phase of the
/// metaplectic lift of the rotation.
pub fn closed_form_kernel(theta: f64, big_p: f64) -> Result<OscKernel> {
    check_caustic(theta)?;
    let (s, c) = theta.sin_cos();
    let w = 2.0 * big_p.sqrt() / s;
    let amp = Complex64::from_polar(w.abs().sqrt(), maslov_phase(theta));
    Ok(OscKernel::from_monomials(vec![xi(), xf()], &[(0, 1, w), (0, 0, -0.5 * w * c), (1, 1, -0.5 * w * c)], &[], 0.0)?
        .with_amplitude(amp, HalfInt::from_halves(-1)))
}

pub fn n_step_closed_form(n: u32, dir: Direction, d: &DerivedParams) -> Result<OscKernel> {
    require_elliptic(d)?;
    closed_form_kernel(angle(dir, d)? * n as f64, d.big_p)
}

/// Closed form after `n` hat steps and `m` bar steps: rotation `mu n + nu m`.
pub fn multi_time_closed_form(n: i32, m: i32, d: &DerivedParams) -> Result<OscKernel> {
    require_elliptic(d)?;
    closed_form_kernel(d.mu()? * n as f64 + d.nu()? * m as f64, d.big_p)
}

/// Three evaluations of the determinant of the `(N-1)`-square tridiagonal
/// matrix `k tridiag(-1/2, cos mu, -1/2)`, `k = i(P+Q)/(hbar q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TridiagonalDet {
    /// `X_n = a X_{n-1} - beta^2 X_{n-2}`
    pub recursion: Complex64,
    /// `(k/2)^{N-1} sin(mu N) / sin mu`
    pub closed: Complex64,
    /// `((a + w)^N - (a - w)^N) / (2^N w)`, `w = sqrt(a^2 - 4 beta^2)`
    pub explicit: Complex64,
}

impl TridiagonalDet {
    /// Largest relative deviation from the closed form.
    pub fn max_rel_diff(&self) -> f64 {
        let s = self.closed.norm();
        ((self.recursion - self.closed).norm() / s).max((self.explicit - self.closed).norm() / s)
    }
}

pub fn tridiagonal_det(n: u32, d: &DerivedParams) -> Result<TridiagonalDet> {
    if n < 2 {
        return Err(Error::DegenerateParams("N >= 2"));
    }
    let mu = d.mu()?;
    let k = Complex64::new(0.0, (d.big_p + d.big_q) / (d.hbar * d.q));
    let a = k * (-d.b);
    let beta = k * -0.5;
    let mut prev = Complex64::new(1.0, 0.0);
    let mut cur = a;
    for _ in 2..n {
        let next = a * cur - beta * beta * prev;
        prev = cur;
        cur = next;
    }
    let closed = (k * 0.5).powi(n as i32 - 1) * ((mu * n as f64).sin() / mu.sin());
    let w = (a * a - beta * beta * 4.0).sqrt();
    let explicit = ((a + w).powi(n as i32) - (a - w).powi(n as i32)) / (w * 2f64.powi(n as i32));
    Ok(TridiagonalDet { recursion: cur, closed, explicit })
}

/// Kernel along `path`: sum of step Lagrangians (backward steps negated),
/// every interior visit integrated in order.
pub fn path_kernel(path: &TimePath, l: &PathLagrangians) -> Result<OscKernel> {
    let len = path.steps.len() as u32;
    if len == 0 {
        return Err(Error::DegenerateParams("empty path"));
    }
    let mut k = OscKernel::unit();
    for (j, s) in path.steps.iter().enumerate() {
        let j = j as u32;
        let step = step_kernel(&l.get(s.direction()), s.is_forward(), Var::Visit(j), Var::Visit(j + 1))?;
        k = k.glue(&step, &[], DEFAULT_TOL)?;
    }
    let interior: Vec<Var> = (1..len).map(Var::Visit).collect();
    k.marginalize_all(&interior, DEFAULT_TOL)?
        .rename(&Var::Visit(0), xi())?
        .rename(&Var::Visit(len), xf())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniquenessResult {
    pub pass: bool,
    pub mismatch: f64,
}

/// Compares the two corner kernels `L_b(x, x^) + L_a(x^, x^~)` and
/// `L_a(x, x~) + L_b(x~, x^~)` after the Gaussian integral.
pub fn uniqueness_scan_1form(c: &OscLagrangianCoeffs, tol: f64) -> Result<UniquenessResult> {
    if (c.a * c.a - 1.0).abs() < 1e-14 || (c.b * c.b - 1.0).abs() < 1e-14 {
        return Err(Error::DegenerateCoeffs);
    }
    let pivot_lr = c.beta * c.b0 + c.alpha * (c.a - c.a0);
    let pivot_ul = c.alpha * c.a0 + c.beta * (c.b - c.b0);
    let scale = c.alpha.abs().max(c.beta.abs());
    if pivot_lr.abs() <= 100.0 * DEFAULT_TOL * scale || pivot_ul.abs() <= 100.0 * DEFAULT_TOL * scale {
        return Err(Error::DegenerateCoeffs);
    }
    let l = c.lagrangians();
    let lr = path_kernel(&TimePath::new(vec![Step::HatFwd, Step::BarFwd]), &l)?;
    let ul = path_kernel(&TimePath::new(vec![Step::BarFwd, Step::HatFwd]), &l)?;
    let mismatch = lr.compare(&ul)?.exponent_diff;
    Ok(UniquenessResult { pass: mismatch <= tol, mismatch })
}

/// Coefficient residuals of `(-hbar^2 d_x^2 + 4P x^2) K = (-hbar^2 d_y^2 + 4P y^2) K`
/// for `K = exp(i(A11 x^2/2 + A12 x y + A22 y^2/2)/hbar)`, relative to the
/// size of the coefficients.
pub fn kernel_invariant_residual(k: &OscKernel, big_p: f64, hbar: f64) -> Result<f64> {
    if k.dim() != 2 {
        return Err(Error::VariableMismatch);
    }
    let (a11, a12, a22) = (k.a[(0, 0)], k.a[(0, 1)], k.a[(1, 1)]);
    let scale = (a12 * a12).max(a11 * a11).max(a22 * a22).max(4.0 * big_p);
    let r = [
        (hbar * (a11 - a22)).abs() / scale.sqrt(),
        (a11 * a11 + 4.0 * big_p - a12 * a12).abs() / scale,
        (2.0 * a12 * (a11 - a22)).abs() / scale,
        (a12 * a12 - a22 * a22 - 4.0 * big_p).abs() / scale,
    ];
    Ok(r.iter().fold(0.0f64, |m, v| m.max(*v)))
}

/// Invariant identity on the `n`-step closed-form kernel.
pub fn invariant_kernel_residual(n: u32, dir: Direction, d: &DerivedParams) -> Result<f64> {
    let k = n_step_closed_form(n, dir, d)?;
    kernel_invariant_residual(&k, d.big_p, d.hbar)
}
