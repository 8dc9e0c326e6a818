//! The linear quad equation on plaquettes and cubes, its Lagrangian 2-form
//! and the closure relation.

#[allow(unused_imports)]
use num_traits::Float;
use crate::params::edge_coefficient;
use crate::{Error, Result};

/// Solves `(p_i + p_j)(u_i - u_j) = (p_i - p_j)(u - u_ij)` for `u_ij`.
pub fn quad_solve(u: f64, ui: f64, uj: f64, pi: f64, pj: f64) -> Result<f64> {
    let s = edge_coefficient(pi, pj)?;
    Ok(u - s * (ui - uj))
}

/// `L(u, u_i, u_j) = u (u_i - u_j) - s_ij (u_i - u_j)^2 / 2`.
pub fn lagrangian_2form(u: f64, ui: f64, uj: f64, pi: f64, pj: f64) -> Result<f64> {
    let s = edge_coefficient(pi, pj)?;
    let d = ui - uj;
    Ok(u * d - 0.5 * s * d * d)
}

/// Vertex values on a unit cube. `u31` is the value shifted in directions 3 and 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubeSample {
    pub u: f64,
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    pub u12: f64,
    pub u23: f64,
    pub u31: f64,
    pub u123: f64,
}

impl CubeSample {
    /// Fills the cube from `(u, u1, u2, u3)` and returns it with the spread of
    /// the three routes to `u123`.
    pub fn fill(u: f64, u1: f64, u2: f64, u3: f64, p: [f64; 3]) -> Result<(Self, f64)> {
        let u12 = quad_solve(u, u1, u2, p[0], p[1])?;
        let u23 = quad_solve(u, u2, u3, p[1], p[2])?;
        let u31 = quad_solve(u, u3, u1, p[2], p[0])?;
        let routes = [
            quad_solve(u1, u12, u31, p[1], p[2])?,
            quad_solve(u2, u23, u12, p[2], p[0])?,
            quad_solve(u3, u31, u23, p[0], p[1])?,
        ];
        let hi = routes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = routes.iter().cloned().fold(f64::INFINITY, f64::min);
        let cube = CubeSample { u, u1, u2, u3, u12, u23, u31, u123: routes[0] };
        Ok((cube, hi - lo))
    }
}

/// `|L23(u1) - L23(u) + L31(u2) - L31(u) + L12(u3) - L12(u)|`.
pub fn closure_residual(c: &CubeSample, p: [f64; 3]) -> Result<f64> {
    closure_with(c, |u, ui, uj, i, j| lagrangian_2form(u, ui, uj, p[i], p[j]))
}

fn closure_with<F>(c: &CubeSample, mut l: F) -> Result<f64>
where
    F: FnMut(f64, f64, f64, usize, usize) -> Result<f64>,
{
    let sum = l(c.u1, c.u12, c.u31, 1, 2)? - l(c.u, c.u2, c.u3, 1, 2)?
        + l(c.u2, c.u23, c.u12, 2, 0)?
        - l(c.u, c.u3, c.u1, 2, 0)?
        + l(c.u3, c.u31, c.u23, 0, 1)?
        - l(c.u, c.u1, c.u2, 0, 1)?;
    Ok(sum.abs())
}

/// Corner Euler-Lagrange residual `d/du_i [A(u,u_i) - A(u_i,u_ij) + C(u_i,u_j)]`
/// with `A(x, y) = x y` and `C = -s_ij (u_i - u_j)^2 / 2`.
pub fn el_corner_residual(u: f64, ui: f64, uj: f64, uij: f64, pi: f64, pj: f64) -> Result<f64> {
    let s = edge_coefficient(pi, pj)?;
    Ok(u - uij - s * (ui - uj))
}

/// General quadratic three-point Lagrangian
/// `(a_i u^2/2 + c_i u u_i) - (a_j u^2/2 + c_j u u_j) + (b_ij u_i^2/2 - b_ji u_j^2/2 + delta_ij u_i u_j)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadLagrangianCoeffs {
    pub a: [f64; 3],
    pub b: [[f64; 3]; 3],
    pub c: [f64; 3],
    pub delta: [[f64; 3]; 3],
}

impl QuadLagrangianCoeffs {
    /// `u (u_i - u_j) - delta_ij (u_i - u_j)^2 / 2 + a_i (u^2 - u_j^2)/2 - a_j (u^2 - u_i^2)/2`
    /// with `delta_ij = s_ij`.
    pub fn canonical(p: [f64; 3], a: [f64; 3]) -> Result<Self> {
        let mut delta = [[0.0; 3]; 3];
        let mut b = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    delta[i][j] = edge_coefficient(p[i], p[j])?;
                    b[i][j] = a[j] - delta[i][j];
                }
            }
        }
        Ok(QuadLagrangianCoeffs { a, b, c: [1.0; 3], delta })
    }

    pub fn eval(&self, u: f64, ui: f64, uj: f64, i: usize, j: usize) -> f64 {
        (0.5 * self.a[i] * u * u + self.c[i] * u * ui) - (0.5 * self.a[j] * u * u + self.c[j] * u * uj)
            + (0.5 * self.b[i][j] * ui * ui - 0.5 * self.b[j][i] * uj * uj + self.delta[i][j] * ui * uj)
    }

    /// Coefficients `(u, u_ij, u_i, u_j)` of the equation of motion
    /// `c_i u - c_j u_ij - (a_j - b_ij) u_i + delta_ij u_j = 0`.
    pub fn equation(&self, i: usize, j: usize) -> [f64; 4] {
        [self.c[i], -self.c[j], -(self.a[j] - self.b[i][j]), self.delta[i][j]]
    }

    /// Solves the equation of motion of face `(i, j)` for `u_ij`.
    pub fn solve(&self, u: f64, ui: f64, uj: f64, i: usize, j: usize) -> Result<f64> {
        let e = self.equation(i, j);
        if e[1] == 0.0 {
            return Err(Error::DegenerateCoeffs);
        }
        Ok(-(e[0] * u + e[2] * ui + e[3] * uj) / e[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadClassification {
    /// Equations of faces `(i, j)` and `(j, i)` are proportional for every pair.
    pub symmetric_quad: bool,
    /// Cube fills agree and the closure relation holds on every probe.
    pub closure_ok: bool,
    /// `c_i = c_j` and `a_j - b_ij = delta_ij` for every ordered pair.
    pub coefficient_conditions: bool,
    pub max_closure: f64,
    pub max_spread: f64,
}

/// Classifies a general quadratic Lagrangian. `probes` are initial values
/// `(u, u1, u2, u3)` of cubes filled with the Lagrangian's own equations.
pub fn classify_general_quad_lagrangian(
    k: &QuadLagrangianCoeffs,
    probes: &[[f64; 4]],
    tol: f64,
) -> QuadClassification {
    let mut symmetric_quad = true;
    let mut coefficient_conditions = true;
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        let e = k.equation(i, j);
        let f = k.equation(j, i);
        // same variables in the order (u, u_ij, u_i, u_j)
        let g = [f[0], f[1], f[3], f[2]];
        let scale = e.iter().chain(&g).fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
        for x in 0..4 {
            for y in x + 1..4 {
                if (e[x] * g[y] - e[y] * g[x]).abs() > tol * scale * scale {
                    symmetric_quad = false;
                }
            }
        }
        for (m, n) in [(i, j), (j, i)] {
            if (k.c[m] - k.c[n]).abs() > tol || (k.a[n] - k.b[m][n] - k.delta[m][n]).abs() > tol {
                coefficient_conditions = false;
            }
        }
    }
    let mut max_closure: f64 = 0.0;
    let mut max_spread: f64 = 0.0;
    let mut solvable = true;
    for pr in probes {
        let [u, u1, u2, u3] = *pr;
        let fill = || -> Result<(CubeSample, f64)> {
            let u12 = k.solve(u, u1, u2, 0, 1)?;
            let u23 = k.solve(u, u2, u3, 1, 2)?;
            let u31 = k.solve(u, u3, u1, 2, 0)?;
            let routes = [
                k.solve(u1, u12, u31, 1, 2)?,
                k.solve(u2, u23, u12, 2, 0)?,
                k.solve(u3, u31, u23, 0, 1)?,
            ];
            let hi = routes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = routes.iter().cloned().fold(f64::INFINITY, f64::min);
            Ok((CubeSample { u, u1, u2, u3, u12, u23, u31, u123: routes[0] }, hi - lo))
        };
        match fill() {
            Ok((cube, spread)) => {
                max_spread = max_spread.max(spread);
                let res = closure_with(&cube, |a, b, c, i, j| Ok(k.eval(a, b, c, i, j))).unwrap_or(f64::INFINITY);
                max_closure = max_closure.max(res);
            }
            Err(_) => solvable = false,
        }
    }
    let closure_ok = solvable && max_closure <= tol && max_spread <= tol;
    QuadClassification { symmetric_quad, closure_ok, coefficient_conditions, max_closure, max_spread }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quad_solve_examples() {
        assert_eq!(quad_solve(0.0, 1.0, 0.0, 3.0, 2.0).unwrap(), -5.0);
        assert_eq!(quad_solve(0.7, 1.3, 1.3, 3.0, 2.0).unwrap(), 0.7);
        assert!(quad_solve(0.0, 1.0, 0.0, 2.0, 2.0).is_err());
    }

    #[test]
    fn lagrangian_example_and_antisymmetry() {
        assert_eq!(lagrangian_2form(1.0, 1.0, 0.0, 3.0, 2.0).unwrap(), -1.5);
        let l = lagrangian_2form(0.3, -1.1, 2.0, 3.0, 2.0).unwrap();
        let m = lagrangian_2form(0.3, 2.0, -1.1, 2.0, 3.0).unwrap();
        assert!((l + m).abs() < 1e-15);
    }

    #[test]
    fn zero_cube_closes() {
        let (c, spread) = CubeSample::fill(0.0, 0.0, 0.0, 0.0, [3.0, 2.0, 1.0]).unwrap();
        assert_eq!(spread, 0.0);
        assert_eq!(closure_residual(&c, [3.0, 2.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn corner_equation_on_shell() {
        let uij = quad_solve(0.4, -0.2, 1.7, 3.0, 2.0).unwrap();
        assert!(el_corner_residual(0.4, -0.2, 1.7, uij, 3.0, 2.0).unwrap().abs() < 1e-15);
        let off = el_corner_residual(0.4, -0.2, 1.7, uij + 0.25, 3.0, 2.0).unwrap();
        assert!((off + 0.25).abs() < 1e-15);
    }
}
