//! Classification of general quadratic 2-form Lagrangians by the behaviour
//! of their elementary-move kernels.

#[allow(unused_imports)]
use num_traits::Float;
use super::moves::{elementary_move_check, elementary_move_surfaces, Move, LABELINGS};
use super::{surface_kernel, LatticeLagrangianCoeffs};
use crate::linalg::Mat;
use crate::oscgauss::Var;
use crate::{Error, Result};
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `cyclic sum of a_ij = 0` and `det A = 0`: volume factors on both sides of move a.
    Critical,
    /// Both nonzero: Gaussian integrals on both sides.
    Gaussian,
    /// Exactly one of the two vanishes.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Conditions {
    /// `a_ij = a_i - a_j`
    pub a_separates: bool,
    /// `c_ij = c_i`
    pub c_single_index: bool,
    /// `b_ij = -d_ij`
    pub b_equals_minus_d: bool,
    pub c_symmetric: bool,
    pub c_constant: bool,
    pub a_zero: bool,
    /// `Lambda = 1 - c^2`
    pub lambda_critical: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.a_separates
            && self.c_single_index
            && self.b_equals_minus_d
            && self.c_symmetric
            && self.c_constant
            && self.a_zero
            && self.lambda_critical
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoFormReport {
    /// `a_12 + a_23 + a_31`
    pub script_a: f64,
    pub det_a: f64,
    /// `d_12 d_23 + d_23 d_31 + d_31 d_12 + 1`
    pub lambda: f64,
    pub branch: Branch,
    pub conditions: Conditions,
    /// Largest exponent mismatch over moves a, b, c and all labellings;
    /// infinite when a kernel runs into a delta constraint.
    pub move_mismatch: f64,
    pub move_a_mismatch: f64,
    pub delta_rejected: bool,
    /// Distance between the Gaussian closed form for the first configuration
    /// of move a and the computed kernel, when that integral is Gaussian.
    pub gaussian_formula_residual: Option<f64>,
    pub critical: bool,
}

/// Matrix of the three quadratic integrals in the second configuration of move a.
pub fn matrix_a(k: &LatticeLagrangianCoeffs, [i, j, kk]: [usize; 3]) -> Mat {
    let (b, d) = (&k.b, &k.d);
    Mat::from_rows(&[
        [b[j][kk] - b[i][kk], d[kk][i], d[j][kk]],
        [d[kk][i], b[kk][i] - b[j][i], d[i][j]],
        [d[j][kk], d[i][j], b[i][j] - b[kk][j]],
    ])
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()))
}

fn conditions(k: &LatticeLagrangianCoeffs, script_a: f64, lambda: f64, tol: f64) -> Conditions {
    let off = || (0..3).flat_map(|i| (0..3).filter(move |&j| j != i).map(move |j| (i, j)));
    let c0 = k.c[0][1];
    Conditions {
        a_separates: script_a.abs() <= tol,
        c_single_index: (0..3).all(|i| off().filter(|p| p.0 == i).all(|(_, j)| close(k.c[i][j], k.c[i][(i + 1) % 3], tol))),
        b_equals_minus_d: off().all(|(i, j)| close(k.b[i][j], -k.d[i][j], tol)),
        c_symmetric: off().all(|(i, j)| close(k.c[i][j], k.c[j][i], tol)),
        c_constant: off().all(|(i, j)| close(k.c[i][j], c0, tol)),
        a_zero: off().all(|(i, j)| k.a[i][j].abs() <= tol),
        lambda_critical: close(lambda, 1.0 - c0 * c0, tol),
    }
}

/// `|K_(ai)| - closed form` for `script_a != 0`: coefficients
/// `(b_ij - b_ik - (c_ij - c_ik)^2 / script_a)` on `u_i^2` and
/// `d_ij - (c_ij - c_ik)(c_jk - c_ji) / script_a` on `u_i u_j`.
fn gaussian_formula_residual(k: &LatticeLagrangianCoeffs, script_a: f64, tol: f64) -> Result<f64> {
    let (first, _) = elementary_move_surfaces(Move::A, [0, 1, 2])?;
    let ker = surface_kernel(&first, k, tol)?;
    let (a, c) = (script_a, &k.c);
    let mut worst: f64 = 0.0;
    for [i, j, kk] in [[0, 1, 2], [1, 2, 0], [2, 0, 1]] {
        let vi = ker.index(&Var::Site(unit(i))).ok_or(Error::VariableMismatch)?;
        let vj = ker.index(&Var::Site(unit(j))).ok_or(Error::VariableMismatch)?;
        let sq = k.b[i][j] - k.b[i][kk] - (c[i][j] - c[i][kk]).powi(2) / a;
        let cross = k.d[i][j] - (c[i][j] - c[i][kk]) * (c[j][kk] - c[j][i]) / a;
        worst = worst.max((ker.a[(vi, vi)] - sq).abs()).max((ker.a[(vi, vj)] - cross).abs());
    }
    Ok(worst)
}

fn unit(d: usize) -> [i32; 3] {
    let mut v = [0; 3];
    v[d] = 1;
    v
}

/// Branch, conditions and move behaviour of a coefficient set.
pub fn uniqueness_scan_2form(k: &LatticeLagrangianCoeffs, tol: f64) -> TwoFormReport {
    let script_a = k.a[0][1] + k.a[1][2] + k.a[2][0];
    let det_a = matrix_a(k, [0, 1, 2]).det();
    let d = &k.d;
    let lambda = d[0][1] * d[1][2] + d[1][2] * d[2][0] + d[2][0] * d[0][1] + 1.0;
    let scale = matrix_a(k, [0, 1, 2]).max_abs().max(1.0);
    let branch = match (script_a.abs() <= tol, det_a.abs() <= tol * scale.powi(3)) {
        (true, true) => Branch::Critical,
        (false, false) => Branch::Gaussian,
        _ => Branch::Mixed,
    };
    let conditions = conditions(k, script_a, lambda, tol);
    let mut move_mismatch: f64 = 0.0;
    let mut move_a_mismatch: f64 = 0.0;
    let mut delta_rejected = false;
    for m in Move::ALL {
        for labels in LABELINGS {
            let e = match elementary_move_check(m, labels, k, 1e-9) {
                Ok(diff) => diff.exponent_diff,
                Err(Error::DeltaConstraint) => {
                    delta_rejected = true;
                    f64::INFINITY
                }
                Err(_) => f64::INFINITY,
            };
            move_mismatch = move_mismatch.max(e);
            if m == Move::A {
                move_a_mismatch = move_a_mismatch.max(e);
            }
        }
    }
    let gaussian_formula_residual = if script_a.abs() > tol { gaussian_formula_residual(k, script_a, 1e-9).ok() } else { None };
    TwoFormReport {
        script_a,
        det_a,
        lambda,
        branch,
        conditions,
        move_mismatch,
        move_a_mismatch,
        delta_rejected,
        gaussian_formula_residual,
        critical: branch == Branch::Critical && conditions.all() && move_mismatch <= tol,
    }
}

/// Which table a perturbation touched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    A,
    B,
    C,
    D,
}

/// Single-coefficient perturbations by `eps`; `a` and `d` entries move with
/// their antisymmetric partner.
pub fn perturbations(k: &LatticeLagrangianCoeffs, eps: f64) -> Vec<(Table, usize, usize, LatticeLagrangianCoeffs)> {
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            if i < j {
                let mut p = *k;
                p.a[i][j] += eps;
                p.a[j][i] -= eps;
                out.push((Table::A, i, j, p));
                let mut p = *k;
                p.d[i][j] += eps;
                p.d[j][i] -= eps;
                out.push((Table::D, i, j, p));
            }
            let mut p = *k;
            p.b[i][j] += eps;
            out.push((Table::B, i, j, p));
            let mut p = *k;
            p.c[i][j] += eps;
            out.push((Table::C, i, j, p));
        }
    }
    out
}
