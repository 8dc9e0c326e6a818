//! Closed-form solutions of the reduced oscillator on the `(m, n)` lattice.

#[allow(unused_imports)]
use num_traits::Float;
use crate::params::DerivedParams;
use crate::reduction::maps::corner_residuals;
use crate::Result;

/// `x_{m,n} = c1 sin(mu m + nu n) + c2 cos(mu m + nu n)`.
pub fn explicit_solution(m: i32, n: i32, c1: f64, c2: f64, mu: f64, nu: f64) -> f64 {
    let th = mu * m as f64 + nu * n as f64;
    c1 * th.sin() + c2 * th.cos()
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolutionResiduals {
    /// `x^ + 2b x + x_ = 0`
    pub hat: f64,
    /// `x~ + 2a x + x_ = 0` in the bar direction
    pub bar: f64,
    pub corner: f64,
    pub corner_shifted: f64,
}

impl SolutionResiduals {
    pub fn max(&self) -> f64 {
        self.hat.max(self.bar).max(self.corner).max(self.corner_shifted)
    }
}

/// Max residuals of both oscillator equations and both corner equations on the
/// joint solution over `0 <= m < size.0`, `0 <= n < size.1`.
pub fn solution_residuals(size: (i32, i32), c1: f64, c2: f64, d: &DerivedParams) -> Result<SolutionResiduals> {
    let (mu, nu) = (d.mu()?, d.nu()?);
    let x = |m: i32, n: i32| explicit_solution(m, n, c1, c2, mu, nu);
    let mut out = SolutionResiduals::default();
    for m in 0..size.0 {
        for n in 0..size.1 {
            out.hat = out.hat.max((x(m + 1, n) + 2.0 * d.b * x(m, n) + x(m - 1, n)).abs());
            out.bar = out.bar.max((x(m, n + 1) + 2.0 * d.a * x(m, n) + x(m, n - 1)).abs());
            let (c, cs) = corner_residuals(x(m, n), x(m + 1, n), x(m, n + 1), x(m + 1, n + 1), d);
            out.corner = out.corner.max(c);
            out.corner_shifted = out.corner_shifted.max(cs);
        }
    }
    Ok(out)
}

/// `A lambda^m + B lambda^-m` with `lambda = -b + sqrt(b^2 - 1)`, for `|b| > 1`.
pub fn hyperbolic_solution(m: i32, big_a: f64, big_b: f64, b: f64) -> f64 {
    let lambda = -b + (b * b - 1.0).sqrt();
    big_a * lambda.powi(m) + big_b * lambda.powi(-m)
}

/// Max `|x_{m+1} + 2b x_m + x_{m-1}|` over `0 <= m < len`, relative to the largest sample.
pub fn hyperbolic_residual(len: i32, big_a: f64, big_b: f64, b: f64) -> f64 {
    let x = |m| hyperbolic_solution(m, big_a, big_b, b);
    let mut worst: f64 = 0.0;
    for m in 0..len {
        let scale = x(m + 1).abs().max(x(m).abs()).max(x(m - 1).abs()).max(1.0);
        worst = worst.max((x(m + 1) + 2.0 * b * x(m) + x(m - 1)).abs() / scale);
    }
    worst
}
