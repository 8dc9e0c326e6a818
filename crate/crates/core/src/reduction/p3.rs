//! The six-vertex staircase: two coupled oscillators `(x1, x2)` with
//! `x1 = u2 - u0`, `x2 = u4 - u2`, `y1 = u3 - u1`, `y2 = u5 - u3`.

#[allow(unused_imports)]
use num_traits::Float;
use crate::linalg::Mat;
use crate::params::DerivedParams;
use crate::reduction::maps::{lift, project};
use crate::{Error, Result};

pub type State4 = [f64; 4];

fn differences6() -> Mat {
    Mat::from_rows(&[
        [-1.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, -1.0, 0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0, 0.0, 1.0],
    ])
}

/// Vertex map of the hat evolution on the staircase `u0 .. u5`, `u6 = u0`:
/// `u_{2k+1}^ = u_{2k+2}`, `u_{2k}^ = u_{2k+1} - s (u_{2k} - u_{2k+2})`.
pub fn hat_lift(s: f64) -> Mat {
    let mut old = Mat::zeros(6, 6);
    for k in 0..3 {
        let (e, o, n) = (2 * k, 2 * k + 1, (2 * k + 2) % 6);
        old[(o, n)] = 1.0;
        old[(e, o)] = 1.0;
        old[(e, e)] = -s;
        old[(e, n)] += s;
    }
    old
}

/// Vertex map of the bar evolution: on every staircase edge `i -> j`
/// `u_i~ - k u_j~ = u_j - k u_i`, with `k = t` on `p` edges and `k = t'` on `q` edges.
pub fn bar_lift(t: f64, tp: f64) -> Result<Mat> {
    let mut new = Mat::zeros(6, 6);
    let mut old = Mat::zeros(6, 6);
    for i in 0..6 {
        let j = (i + 1) % 6;
        let k = if i % 2 == 0 { t } else { tp };
        new[(i, i)] = 1.0;
        new[(i, j)] = -k;
        old[(i, j)] = 1.0;
        old[(i, i)] = -k;
    }
    if (1.0 - (t * tp).powi(3)).abs() < 1e-14 {
        return Err(Error::DegenerateParams("1 - (t t')^3 = 0"));
    }
    lift(&new, &old)
}

pub fn hat_matrix(s: f64) -> Mat {
    project(&hat_lift(s), &differences6())
}

pub fn bar_matrix(t: f64, tp: f64) -> Result<Mat> {
    Ok(project(&bar_lift(t, tp)?, &differences6()))
}

fn apply(m: &Mat, st: &State4) -> State4 {
    let v = m.apply(st);
    [v[0], v[1], v[2], v[3]]
}

pub fn hat_map(st: &State4, s: f64) -> State4 {
    apply(&hat_matrix(s), st)
}

pub fn bar_map(st: &State4, t: f64, tp: f64) -> Result<State4> {
    Ok(apply(&bar_matrix(t, tp)?, st))
}

pub fn commutator_residual(s: f64, t: f64, tp: f64) -> Result<f64> {
    let a = hat_matrix(s);
    let b = bar_matrix(t, tp)?;
    Ok((&(&a * &b) - &(&b * &a)).max_abs())
}

/// Residuals of the hat equations
/// `x1^ + x2^ + x1_ + s(2x1 + x2) = 0`, `x2^ + x1_ + x2_ + s(x1 + 2x2) = 0`.
pub fn hat_equations(prev: [f64; 2], x: [f64; 2], next: [f64; 2], s: f64) -> [f64; 2] {
    [
        next[0] + next[1] + prev[0] + s * (2.0 * x[0] + x[1]),
        next[1] + prev[0] + prev[1] + s * (x[0] + 2.0 * x[1]),
    ]
}

/// Residuals of the bar equations
/// `(1+tt')(x1~ + x1_) + x2~ + tt' x2_ + (t+t')(2x1 + x2) = 0` and
/// `(1+tt')(x2~ + x2_) + tt' x1~ + x1_ + (t+t')(x1 + 2x2) = 0`.
pub fn bar_equations(prev: [f64; 2], x: [f64; 2], next: [f64; 2], t: f64, tp: f64) -> [f64; 2] {
    let k = t * tp;
    [
        (1.0 + k) * (next[0] + prev[0]) + next[1] + k * prev[1] + (t + tp) * (2.0 * x[0] + x[1]),
        (1.0 + k) * (next[1] + prev[1]) + k * next[0] + prev[0] + (t + tp) * (x[0] + 2.0 * x[1]),
    ]
}

fn pos(st: &State4) -> [f64; 2] {
    [st[0], st[1]]
}

/// `L1(x, x^) = x1(x1^ + x2^) + x2 x2^ + s/2 (q(x) + q(x^))`, `q(x) = x1^2 + x1 x2 + x2^2`.
pub fn lagrangian_hat(x: [f64; 2], xn: [f64; 2], s: f64) -> f64 {
    x[0] * (xn[0] + xn[1]) + x[1] * xn[1] + 0.5 * s * (quad(x) + quad(xn))
}

/// `L2(x, x~) = (1+tt')/(1-tt') (x1 x1~ + x2 x2~) + (x1 x2~ + tt' x2 x1~)/(1-tt')
///  + (t+t')/(2(1-tt')) (q(x) + q(x~))`.
pub fn lagrangian_bar(x: [f64; 2], xn: [f64; 2], t: f64, tp: f64) -> f64 {
    let k = t * tp;
    let w = 1.0 - k;
    (1.0 + k) / w * (x[0] * xn[0] + x[1] * xn[1])
        + (x[0] * xn[1] + k * x[1] * xn[0]) / w
        + 0.5 * (t + tp) / w * (quad(x) + quad(xn))
}

fn quad(x: [f64; 2]) -> f64 {
    x[0] * x[0] + x[0] * x[1] + x[1] * x[1]
}

fn grad_quad(x: [f64; 2]) -> [f64; 2] {
    [2.0 * x[0] + x[1], x[0] + 2.0 * x[1]]
}

/// Gradients `(dL1/dx, dL1/dx^)`.
pub fn lagrangian_hat_grad(x: [f64; 2], xn: [f64; 2], s: f64) -> ([f64; 2], [f64; 2]) {
    let (gx, gn) = (grad_quad(x), grad_quad(xn));
    (
        [xn[0] + xn[1] + 0.5 * s * gx[0], xn[1] + 0.5 * s * gx[1]],
        [x[0] + 0.5 * s * gn[0], x[0] + x[1] + 0.5 * s * gn[1]],
    )
}

/// Gradients `(dL2/dx, dL2/dx~)`.
pub fn lagrangian_bar_grad(x: [f64; 2], xn: [f64; 2], t: f64, tp: f64) -> ([f64; 2], [f64; 2]) {
    let k = t * tp;
    let w = 1.0 - k;
    let (c, h) = ((1.0 + k) / w, 0.5 * (t + tp) / w);
    let (gx, gn) = (grad_quad(x), grad_quad(xn));
    (
        [c * xn[0] + xn[1] / w + h * gx[0], c * xn[1] + k * xn[0] / w + h * gx[1]],
        [c * x[0] + k * x[1] / w + h * gn[0], c * x[1] + x[0] / w + h * gn[1]],
    )
}

/// Momenta `X_i = -dL1/dx_i`:
/// `X1 = -(x1^ + x2^ + s(2x1 + x2)/2)`, `X2 = -(x2^ + s(x1 + 2x2)/2)`.
pub fn momenta(st: &State4, s: f64) -> [f64; 2] {
    let x = pos(st);
    let xh = pos(&hat_map(st, s));
    let (g, _) = lagrangian_hat_grad(x, xh, s);
    [-g[0], -g[1]]
}

/// Symmetric matrix `M` of a quadratic observable `z^T M z` on `z = (x1, x2, X1, X2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticObservable {
    pub m: Mat,
}

impl QuadraticObservable {
    pub fn eval(&self, z: &[f64; 4]) -> f64 {
        let v = self.m.apply(z);
        (0..4).map(|i| z[i] * v[i]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.max_abs()
    }

    /// `I1 = x1 X1 - 2 x1 X2 + 2 x2 X1 - x2 X2`.
    pub fn i1() -> Self {
        let mut m = Mat::zeros(4, 4);
        for (i, j, v) in [(0, 2, 0.5), (0, 3, -1.0), (1, 2, 1.0), (1, 3, -0.5)] {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        QuadraticObservable { m }
    }

    /// `I2 = (1 - 3s^2/4)(x1^2 + x1 x2 + x2^2) + X1^2 - X1 X2 + X2^2`.
    pub fn i2(s: f64) -> Self {
        let k = 1.0 - 0.75 * s * s;
        let mut m = Mat::zeros(4, 4);
        for (i, j, v) in [(0, 0, k), (1, 1, k), (0, 1, 0.5 * k), (2, 2, 1.0), (3, 3, 1.0), (2, 3, -0.5)] {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        QuadraticObservable { m }
    }
}

fn symplectic_j() -> Mat {
    let mut j = Mat::zeros(4, 4);
    for i in 0..2 {
        j[(i, i + 2)] = 1.0;
        j[(i + 2, i)] = -1.0;
    }
    j
}

/// Canonical bracket of two quadratic observables, again quadratic:
/// `{F, G} = z^T 2(M J N - N J M) z`.
pub fn poisson_bracket(f: &QuadraticObservable, g: &QuadraticObservable) -> QuadraticObservable {
    let j = symplectic_j();
    let a = &(&f.m * &j) * &g.m;
    let b = &(&g.m * &j) * &f.m;
    QuadraticObservable { m: (&a - &b).scale(2.0) }
}

/// Linear change of coordinates `(x1, x2, y1, y2) -> (x1, x2, X1, X2)`.
pub fn canonical_coordinates(s: f64) -> Mat {
    let h = hat_matrix(s);
    let mut c = Mat::zeros(4, 4);
    c[(0, 0)] = 1.0;
    c[(1, 1)] = 1.0;
    for k in 0..4 {
        c[(2, k)] = -(h[(0, k)] + h[(1, k)]);
        c[(3, k)] = -h[(1, k)];
    }
    c[(2, 0)] -= s;
    c[(2, 1)] -= 0.5 * s;
    c[(3, 0)] -= 0.5 * s;
    c[(3, 1)] -= s;
    c
}

/// `max |M^T J M - J|` for a map written in canonical coordinates.
pub fn symplectic_residual(map: &Mat, s: f64) -> f64 {
    let c = canonical_coordinates(s);
    let ci = c.inverse().expect("momenta are a valid coordinate change");
    let m = &(&c * map) * &ci;
    let j = symplectic_j();
    (&(&(&m.transpose() * &j) * &m) - &j).max_abs()
}

/// `(I1, I2)` at a state, with momenta from the hat Lagrangian.
pub fn invariants(st: &State4, s: f64) -> (f64, f64) {
    let x = pos(st);
    let xx = momenta(st, s);
    let z = [x[0], x[1], xx[0], xx[1]];
    (QuadraticObservable::i1().eval(&z), QuadraticObservable::i2(s).eval(&z))
}

/// `cos mu_pm = -3s/4 pm sqrt(1 - 3s^2/4)/2`.
pub fn cos_mu(s: f64) -> [f64; 2] {
    let r = 0.5 * (1.0 - 0.75 * s * s).sqrt();
    [-0.75 * s + r, -0.75 * s - r]
}

fn nu_parts(t: f64, tp: f64) -> (f64, f64, f64) {
    let k = t * tp;
    let d = 1.0 + k + k * k;
    let centre = -3.0 * (t + tp) * (1.0 + k) / (4.0 * d);
    let root = (d - 0.75 * (t + tp) * (t + tp)).sqrt();
    (centre, (1.0 - k) / d, root)
}

/// `cos nu_pm = -3(t+t')(1+tt')/(4D) pm ((1-tt')/D) sqrt(D - 3(t+t')^2/4) / 2`,
/// `D = 1 + tt' + t^2 t'^2`. These are the eigen-angles of the bar map.
pub fn cos_nu(t: f64, tp: f64) -> [f64; 2] {
    let (c, w, root) = nu_parts(t, tp);
    [c + 0.5 * w * root, c - 0.5 * w * root]
}

/// The same expression with the factor `(1-tt')/D` squared.
pub fn cos_nu_squared_variant(t: f64, tp: f64) -> [f64; 2] {
    let (c, w, root) = nu_parts(t, tp);
    [c + 0.5 * w * w * root, c - 0.5 * w * w * root]
}

/// Mode amplitudes `x2 = A cos(th) + B sin(th)`, `th = mu m + nu n`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mode {
    pub mu: f64,
    pub nu: f64,
    pub cos_amp: f64,
    pub sin_amp: f64,
}

impl Mode {
    fn x2(&self, m: i32, n: i32) -> f64 {
        let th = self.mu * m as f64 + self.nu * n as f64;
        self.cos_amp * th.cos() + self.sin_amp * th.sin()
    }

    /// `x1 = -k (x2^ + s x2)` with `k = 2(cos mu + s)/(1 + 2 s cos mu + s^2)`.
    fn x1(&self, m: i32, n: i32, s: f64) -> f64 {
        let c = self.mu.cos();
        let k = 2.0 * (c + s) / (1.0 + 2.0 * s * c + s * s);
        -k * (self.x2(m + 1, n) + s * self.x2(m, n))
    }
}

/// Joint solution of both evolutions built from two modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointSolution {
    pub modes: [Mode; 2],
    pub s: f64,
}

impl JointSolution {
    /// Modes from the closed-form cosines. `amps = [A+, B+, A-, B-]`.
    pub fn new(d: &DerivedParams, amps: [f64; 4]) -> Result<Self> {
        Self::from_cosines(d, cos_mu(d.s), cos_nu(d.t, d.tprime), amps)
    }

    /// Each `mu` is paired with the `nu` root and sign under which its mode
    /// best solves the bar evolution.
    pub fn from_cosines(d: &DerivedParams, cmu: [f64; 2], cnu: [f64; 2], amps: [f64; 4]) -> Result<Self> {
        let ok = |c: f64| c.is_finite() && c.abs() <= 1.0;
        if !cmu.iter().chain(cnu.iter()).all(|&c| ok(c)) {
            return Err(Error::OutOfRegime);
        }
        let candidates = [cnu[0].acos(), -cnu[0].acos(), cnu[1].acos(), -cnu[1].acos()];
        let mode = |k: usize| {
            let mu = cmu[k].acos();
            let fit = |nu: f64| {
                let probe = JointSolution { modes: [Mode { mu, nu, cos_amp: 1.0, sin_amp: 1.0 }, Mode::default()], s: d.s };
                bar_residual(&probe, d, 2)
            };
            let nu = candidates.into_iter().min_by(|a, b| fit(*a).total_cmp(&fit(*b))).expect("four candidates");
            Mode { mu, nu, cos_amp: amps[2 * k], sin_amp: amps[2 * k + 1] }
        };
        Ok(JointSolution { modes: [mode(0), mode(1)], s: d.s })
    }

    pub fn at(&self, m: i32, n: i32) -> [f64; 2] {
        let mut x = [0.0; 2];
        for md in &self.modes {
            x[0] += md.x1(m, n, self.s);
            x[1] += md.x2(m, n);
        }
        x
    }
}

fn bar_residual(sol: &JointSolution, d: &DerivedParams, size: i32) -> f64 {
    let mut worst: f64 = 0.0;
    for m in 0..size {
        for n in 0..size {
            let b = bar_equations(sol.at(m, n - 1), sol.at(m, n), sol.at(m, n + 1), d.t, d.tprime);
            worst = worst.max(b[0].abs()).max(b[1].abs());
        }
    }
    worst
}

/// Max residual of the hat and bar second order equations over `0 <= m, n < size`.
pub fn joint_solution_residual(sol: &JointSolution, d: &DerivedParams, size: i32) -> f64 {
    let mut worst = bar_residual(sol, d, size);
    for m in 0..size {
        for n in 0..size {
            let h = hat_equations(sol.at(m - 1, n), sol.at(m, n), sol.at(m + 1, n), d.s);
            worst = worst.max(h[0].abs()).max(h[1].abs());
        }
    }
    worst
}
