//! Continuous flows in the oscillator coefficients.
//!
//! With `mu(b) = acos(-b)` the solution `x_m(b) = c1 sin(m mu) + c2 cos(m mu)`
//! is a function of `b`; its `b`-derivatives satisfy first order
//! differential-difference equations and a second order equation in `b`.

#[allow(unused_imports)]
use num_traits::Float;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSolution {
    pub c1: f64,
    pub c2: f64,
}

impl FlowSolution {
    pub fn new(c1: f64, c2: f64) -> Self {
        FlowSolution { c1, c2 }
    }

    pub fn value(&self, b: f64, m: i32) -> f64 {
        let th = m as f64 * (-b).acos();
        self.c1 * th.sin() + self.c2 * th.cos()
    }

    /// `c1 cos(m mu) - c2 sin(m mu)`.
    fn conj(&self, b: f64, m: i32) -> f64 {
        let th = m as f64 * (-b).acos();
        self.c1 * th.cos() - self.c2 * th.sin()
    }

    /// `dx/db = m g / sqrt(1 - b^2)`.
    pub fn d1(&self, b: f64, m: i32) -> f64 {
        m as f64 * self.conj(b, m) / (1.0 - b * b).sqrt()
    }

    /// `d2x/db2 = -m^2 x / (1 - b^2) + m b g / (1 - b^2)^(3/2)`.
    pub fn d2(&self, b: f64, m: i32) -> f64 {
        let w = 1.0 - b * b;
        let mf = m as f64;
        -mf * mf * self.value(b, m) / w + mf * b * self.conj(b, m) / (w * w.sqrt())
    }
}

fn check_regime(b: f64) -> Result<()> {
    if b.abs() >= 1.0 || !b.is_finite() {
        return Err(Error::OutOfRegime);
    }
    Ok(())
}

/// Residuals of `dx/db = m(bx + x^)/(1-b^2)`, `dx/db = -m(bx + x_)/(1-b^2)` and
/// `(1-b^2) x'' - b x' + m^2 x = 0` with analytic derivatives.
pub fn continuous_flow_residual(b: f64, m: i32, sol: &FlowSolution) -> Result<(f64, f64, f64)> {
    check_regime(b)?;
    let w = 1.0 - b * b;
    let mf = m as f64;
    let x = sol.value(b, m);
    let d1 = sol.d1(b, m);
    let d2 = sol.d2(b, m);
    let fwd = d1 - mf * (b * x + sol.value(b, m + 1)) / w;
    let bwd = d1 + mf * (b * x + sol.value(b, m - 1)) / w;
    let second = w * d2 - b * d1 + mf * mf * x;
    Ok((fwd.abs(), bwd.abs(), second.abs()))
}

/// Central difference estimate of `dx/db`.
pub fn central_difference(b: f64, m: i32, sol: &FlowSolution, h: f64) -> f64 {
    (sol.value(b + h, m) - sol.value(b - h, m)) / (2.0 * h)
}

/// Joint solution `c1 sin(m mu(b) + n nu(a)) + c2 cos(..)` as a function of
/// the continuous coefficients `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointFlow {
    pub m: i32,
    pub n: i32,
    pub c1: f64,
    pub c2: f64,
}

impl JointFlow {
    fn phase(&self, a: f64, b: f64) -> f64 {
        self.m as f64 * (-b).acos() + self.n as f64 * (-a).acos()
    }

    pub fn value(&self, a: f64, b: f64) -> f64 {
        let th = self.phase(a, b);
        self.c1 * th.sin() + self.c2 * th.cos()
    }

    fn conj(&self, a: f64, b: f64) -> f64 {
        let th = self.phase(a, b);
        self.c1 * th.cos() - self.c2 * th.sin()
    }

    pub fn d_b(&self, a: f64, b: f64) -> f64 {
        self.m as f64 * self.conj(a, b) / (1.0 - b * b).sqrt()
    }

    pub fn d_a(&self, a: f64, b: f64) -> f64 {
        self.n as f64 * self.conj(a, b) / (1.0 - a * a).sqrt()
    }
}

/// Residuals of `dL_a/dx_a = dL_b/dx_b` and `d/da (dL_b/dx) = d/db (dL_a/dx)` for
/// `L_b = sqrt(1-b^2) x_b^2 / 2m - m x^2 / (2 sqrt(1-b^2))` and its `a` analogue.
pub fn continuous_multiform_residual(a: f64, b: f64, j: &JointFlow) -> Result<(f64, f64)> {
    check_regime(a)?;
    check_regime(b)?;
    if j.m == 0 || j.n == 0 {
        return Err(Error::DegenerateParams("m and n must be nonzero"));
    }
    let (wa, wb) = ((1.0 - a * a).sqrt(), (1.0 - b * b).sqrt());
    let (m, n) = (j.m as f64, j.n as f64);
    let (xa, xb) = (j.d_a(a, b), j.d_b(a, b));
    let momenta = wa * xa / n - wb * xb / m;
    // dL_b/dx = -m x / wb, so d/da of it is -m x_a / wb
    let cross = -m * xa / wb + n * xb / wa;
    Ok((momenta.abs(), cross.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_zero_is_constant_in_b() {
        let sol = FlowSolution::new(1.0, 0.4);
        let (a, b, c) = continuous_flow_residual(0.3, 0, &sol).unwrap();
        assert_eq!((a, b, c), (0.0, 0.0, 0.0));
        assert_eq!(sol.d1(0.3, 0), 0.0);
    }

    #[test]
    fn out_of_regime() {
        assert_eq!(continuous_flow_residual(1.0, 2, &FlowSolution::new(1.0, 0.0)), Err(Error::OutOfRegime));
    }
}
