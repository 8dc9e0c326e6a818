#[allow(unused_imports)]
use num_traits::Float;
use crate::linalg::Mat;
use crate::params::DerivedParams;
use crate::{Error, Result};

/// Reduced coordinates `x = u1 - u0`, `y = u2 - u1`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State2 {
    pub x: f64,
    pub y: f64,
}

impl State2 {
    pub fn new(x: f64, y: f64) -> Self {
        State2 { x, y }
    }

    fn apply(self, m: &Mat) -> Self {
        let v = m.apply(&[self.x, self.y]);
        State2 { x: v[0], y: v[1] }
    }
}

/// Solves `new * u_shifted = old * u` for the lift `u -> u_shifted`.
pub(crate) fn lift(new: &Mat, old: &Mat) -> Result<Mat> {
    let inv = new.inverse().ok_or(Error::DegenerateParams("singular staircase system"))?;
    Ok(&inv * old)
}

/// Projects a vertex map onto difference coordinates `e`: `E U E^T (E E^T)^-1`.
pub(crate) fn project(u: &Mat, e: &Mat) -> Mat {
    let et = e.transpose();
    let gram = (e * &et).inverse().expect("difference coordinates are independent");
    let right = &et * &gram;
    &(e * u) * &right
}

fn differences3() -> Mat {
    Mat::from_rows(&[[-1.0, 1.0, 0.0], [0.0, -1.0, 1.0]])
}

/// Vertex map of the hat evolution:
/// `u0^ = u1 + s(u1^ - u2^)`, `u1^ = u2 + s(u0 - u1)`, `u2^ = u0`.
pub fn hat_lift(s: f64) -> Mat {
    let new = Mat::from_rows(&[[1.0, -s, s], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
    let old = Mat::from_rows(&[[0.0, 1.0, 0.0], [s, -s, 1.0], [1.0, 0.0, 0.0]]);
    lift(&new, &old).expect("unit triangular")
}

/// Vertex map of the bar evolution:
/// `u0~ = u1 + t(u1~ - u0)`, `u1~ = u2 + t(u2~ - u1)`, `u2~ = u0 + t'(u0~ - u2)`.
pub fn bar_lift(t: f64, tp: f64) -> Result<Mat> {
    let new = Mat::from_rows(&[[1.0, -t, 0.0], [0.0, 1.0, -t], [-tp, 0.0, 1.0]]);
    let old = Mat::from_rows(&[[-t, 1.0, 0.0], [0.0, -t, 1.0], [1.0, 0.0, -tp]]);
    if (1.0 - t * t * tp).abs() < 1e-14 {
        return Err(Error::DegenerateParams("1 - t^2 t' = 0"));
    }
    lift(&new, &old)
}

pub fn hat_matrix(s: f64) -> Mat {
    project(&hat_lift(s), &differences3())
}

pub fn bar_matrix(t: f64, tp: f64) -> Result<Mat> {
    Ok(project(&bar_lift(t, tp)?, &differences3()))
}

pub fn hat_map(st: State2, s: f64) -> State2 {
    st.apply(&hat_matrix(s))
}

pub fn bar_map(st: State2, t: f64, tp: f64) -> Result<State2> {
    Ok(st.apply(&bar_matrix(t, tp)?))
}

/// Max-norm of `S T - T S`.
pub fn commutator_residual(s: f64, t: f64, tp: f64) -> Result<f64> {
    let sm = hat_matrix(s);
    let tm = bar_matrix(t, tp)?;
    Ok((&(&sm * &tm) - &(&tm * &sm)).max_abs())
}

/// Residuals of the two corner equations
/// `((P-Q)/q - (P-R)/r) x = (P+R)/r x~ - (P+Q)/q x^` and
/// `((P-Q)/q - (P-R)/r) x^~ = (P+R)/r x^ - (P+Q)/q x~`.
pub fn corner_residuals(x: f64, xh: f64, xb: f64, xhb: f64, d: &DerivedParams) -> (f64, f64) {
    let (p, q, r) = (d.big_p, d.big_q, d.big_r);
    let k = (p - q) / d.q - (p - r) / d.r;
    let ka = (p + r) / d.r;
    let kb = (p + q) / d.q;
    ((k * x - ka * xb + kb * xh).abs(), (k * xhb - ka * xh + kb * xb).abs())
}

/// `I_c(x, x') = x^2 + x'^2 + 2 c x x'`.
pub fn invariant_eval(x: f64, xn: f64, c: f64) -> f64 {
    x * x + xn * xn + 2.0 * c * x * xn
}

/// `X^2 / 2 + 2 P x^2`.
pub fn invariant_common(x: f64, big_x: f64, big_p: f64) -> f64 {
    0.5 * big_x * big_x + 2.0 * big_p * x * x
}

/// Quadratic step Lagrangian `alpha (x x' + (c - h) x^2 + h x'^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepLagrangian {
    pub alpha: f64,
    pub coef: f64,
    pub half: f64,
}

impl StepLagrangian {
    /// `(1/q)[(P+Q) x x^ + (P-Q)(x^2 + x^^2)/2]`.
    pub fn hat(d: &DerivedParams) -> Self {
        StepLagrangian { alpha: (d.big_p + d.big_q) / d.q, coef: d.b, half: 0.5 * d.b }
    }

    /// `(1/r)[(P+R) x x~ + (P-R)(x^2 + x~^2)/2]`.
    pub fn bar(d: &DerivedParams) -> Self {
        StepLagrangian { alpha: (d.big_p + d.big_r) / d.r, coef: d.a, half: 0.5 * d.a }
    }

    pub fn eval(&self, x: f64, xn: f64) -> f64 {
        self.alpha * (x * xn + (self.coef - self.half) * x * x + self.half * xn * xn)
    }

    /// `(A_xx, A_xx', A_x'x')` of the quadratic form `x^T A x / 2`.
    pub fn quadratic(&self) -> [f64; 3] {
        [2.0 * self.alpha * (self.coef - self.half), self.alpha, 2.0 * self.alpha * self.half]
    }

    /// `X = -dL/dx` at the earlier point.
    pub fn momentum(&self, x: f64, xn: f64) -> f64 {
        -self.alpha * (xn + 2.0 * (self.coef - self.half) * x)
    }

    /// `X' = dL/dx'` at the later point.
    pub fn momentum_next(&self, x: f64, xn: f64) -> f64 {
        self.alpha * (x + 2.0 * self.half * xn)
    }
}

/// `X_b = -((P+Q)/q) x^ - ((P-Q)/q) x`.
pub fn momentum_b(x: f64, xh: f64, d: &DerivedParams) -> f64 {
    StepLagrangian::hat(d).momentum(x, xh)
}

/// `X_a = -((P+R)/r) x~ - ((P-R)/r) x`.
pub fn momentum_a(x: f64, xb: f64, d: &DerivedParams) -> f64 {
    StepLagrangian::bar(d).momentum(x, xb)
}

/// `|L_a(x^, x^~) - L_a(x, x~) - L_b(x~, x^~) + L_b(x, x^)|` with every
/// shifted point produced by the maps.
pub fn oneform_closure_residual(
    st: State2,
    d: &DerivedParams,
    lb: &StepLagrangian,
    la: &StepLagrangian,
) -> Result<f64> {
    let h = hat_map(st, d.s);
    let b = bar_map(st, d.t, d.tprime)?;
    let hb = hat_map(b, d.s);
    let v = la.eval(h.x, hb.x) - la.eval(st.x, b.x) - lb.eval(b.x, hb.x) + lb.eval(st.x, h.x);
    Ok(v.abs())
}
