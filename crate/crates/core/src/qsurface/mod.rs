//! Surface propagators of the quad lattice in `Z^3`.
//!
//! A surface is a set of oriented plaquettes. Each plaquette carries the
//! three-point Lagrangian `L_ij(u, u_i, u_j)`; the propagator of a surface is
//! the exponential of the summed action integrated over the interior vertices.

pub mod deform;
pub mod moves;
pub mod uniqueness;

#[allow(unused_imports)]
use num_traits::Float;
use crate::oscgauss::{OscKernel, Var};
use crate::params::EdgeParams;
use crate::{Error, Result};
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

pub type Vertex = [i32; 3];

pub use deform::{flat_patch, random_deformation, DeformationLog, SurfaceChain};
pub use moves::{elementary_move_check, elementary_move_surfaces, popup_surfaces, Move};
pub use uniqueness::{uniqueness_scan_2form, Branch, TwoFormReport};

pub fn shift(v: Vertex, dir: usize) -> Vertex {
    let mut w = v;
    w[dir] += 1;
    w
}

/// Plaquette at `base` spanned by directions `plane = (i, j)` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedPlaquette {
    pub base: Vertex,
    pub plane: (u8, u8),
    pub sign: i8,
}

impl OrientedPlaquette {
    pub fn new(base: Vertex, plane: (u8, u8), sign: i8) -> Result<Self> {
        let ok = |d: u8| (1..=3).contains(&d);
        if !ok(plane.0) || !ok(plane.1) || plane.0 == plane.1 {
            return Err(Error::InvalidSurface("plane must be two distinct directions in 1..=3"));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidSurface("sign must be +1 or -1"));
        }
        Ok(OrientedPlaquette { base, plane, sign })
    }

    fn dirs(&self) -> (usize, usize) {
        (self.plane.0 as usize - 1, self.plane.1 as usize - 1)
    }

    /// `(u, u_i, u_j)`, the vertices the Lagrangian depends on.
    pub fn lagrangian_vertices(&self) -> [Vertex; 3] {
        let (i, j) = self.dirs();
        [self.base, shift(self.base, i), shift(self.base, j)]
    }

    /// All four corners of the square.
    pub fn corners(&self) -> [Vertex; 4] {
        let (i, j) = self.dirs();
        [self.base, shift(self.base, i), shift(self.base, j), shift(shift(self.base, i), j)]
    }

    /// Same plaquette written in the cyclic plane `(1,2)`, `(2,3)` or `(3,1)`.
    pub fn normalized(&self) -> Self {
        let cyclic = matches!(self.plane, (1, 2) | (2, 3) | (3, 1));
        if cyclic {
            *self
        } else {
            OrientedPlaquette { base: self.base, plane: (self.plane.1, self.plane.0), sign: -self.sign }
        }
    }
}

/// `L_ij = a_ij u^2/2 + b_ij u_i^2/2 - b_ji u_j^2/2 + c_ij u u_i - c_ji u u_j + d_ij u_i u_j`,
/// tables indexed by 0-based directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeLagrangianCoeffs {
    pub a: [[f64; 3]; 3],
    pub b: [[f64; 3]; 3],
    pub c: [[f64; 3]; 3],
    pub d: [[f64; 3]; 3],
}

impl LatticeLagrangianCoeffs {
    /// `u (u_i - u_j) - s_ij (u_i - u_j)^2 / 2`.
    pub fn canonical(e: &EdgeParams) -> Self {
        let mut k = LatticeLagrangianCoeffs { a: [[0.0; 3]; 3], b: [[0.0; 3]; 3], c: [[1.0; 3]; 3], d: [[0.0; 3]; 3] };
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    k.b[i][j] = -e.s[i][j];
                    k.d[i][j] = e.s[i][j];
                }
            }
        }
        k
    }

    /// Largest violation of `a_ji = -a_ij`, `d_ji = -d_ij`.
    pub fn antisymmetry_defect(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    m = m.max((self.a[i][j] + self.a[j][i]).abs()).max((self.d[i][j] + self.d[j][i]).abs());
                }
            }
        }
        m
    }

    pub fn scaled(&self, k: f64) -> Self {
        let f = |t: [[f64; 3]; 3]| t.map(|r| r.map(|v| v * k));
        LatticeLagrangianCoeffs { a: f(self.a), b: f(self.b), c: f(self.c), d: f(self.d) }
    }

    pub fn eval(&self, i: usize, j: usize, u: f64, ui: f64, uj: f64) -> f64 {
        0.5 * self.a[i][j] * u * u + 0.5 * self.b[i][j] * ui * ui - 0.5 * self.b[j][i] * uj * uj
            + self.c[i][j] * u * ui
            - self.c[j][i] * u * uj
            + self.d[i][j] * ui * uj
    }

    /// Monomials `(p, q, k)` meaning `k x_p x_q` over `(u, u_i, u_j)`.
    fn monomials(&self, i: usize, j: usize) -> [(usize, usize, f64); 6] {
        [
            (0, 0, 0.5 * self.a[i][j]),
            (1, 1, 0.5 * self.b[i][j]),
            (2, 2, -0.5 * self.b[j][i]),
            (0, 1, self.c[i][j]),
            (0, 2, -self.c[j][i]),
            (1, 2, self.d[i][j]),
        ]
    }
}

/// Plaquettes plus an explicit split of vertices into integrated and fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    pub plaquettes: Vec<OrientedPlaquette>,
    pub interior: Vec<Vertex>,
    pub boundary: Vec<Vertex>,
}

impl Surface {
    pub fn new(plaquettes: Vec<OrientedPlaquette>, interior: Vec<Vertex>, boundary: Vec<Vertex>) -> Result<Self> {
        let s = Surface { plaquettes, interior, boundary };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let inner: BTreeSet<Vertex> = self.interior.iter().copied().collect();
        let outer: BTreeSet<Vertex> = self.boundary.iter().copied().collect();
        if inner.len() != self.interior.len() || outer.len() != self.boundary.len() {
            return Err(Error::InvalidSurface("repeated vertex"));
        }
        if inner.intersection(&outer).next().is_some() {
            return Err(Error::InvalidSurface("vertex both interior and boundary"));
        }
        for p in &self.plaquettes {
            for v in p.lagrangian_vertices() {
                if !inner.contains(&v) && !outer.contains(&v) {
                    return Err(Error::MissingVertex(v));
                }
            }
        }
        Ok(())
    }

    /// Every plaquette orientation reversed.
    pub fn reversed(&self) -> Self {
        let mut s = self.clone();
        s.plaquettes.iter_mut().for_each(|p| p.sign = -p.sign);
        s
    }
}

/// `sum sign * L_ij(u, u_i, u_j)` over the plaquettes.
pub fn surface_action(s: &Surface, k: &LatticeLagrangianCoeffs, value: impl Fn(Vertex) -> Option<f64>) -> Result<f64> {
    let mut total = 0.0;
    for p in &s.plaquettes {
        let [v0, v1, v2] = p.lagrangian_vertices();
        let get = |v: Vertex| value(v).ok_or(Error::MissingVertex(v));
        let (i, j) = p.dirs();
        total += p.sign as f64 * k.eval(i, j, get(v0)?, get(v1)?, get(v2)?);
    }
    Ok(total)
}

/// Action as a quadratic form over boundary then interior sites.
pub fn surface_exponent(s: &Surface, k: &LatticeLagrangianCoeffs) -> Result<OscKernel> {
    s.validate()?;
    let vars: Vec<Vertex> = s.boundary.iter().chain(&s.interior).copied().collect();
    let at = |v: Vertex| vars.iter().position(|w| *w == v).expect("validated");
    let mut quad = Vec::new();
    for p in &s.plaquettes {
        let idx = p.lagrangian_vertices().map(at);
        let (i, j) = p.dirs();
        for (x, y, c) in k.monomials(i, j) {
            quad.push((idx[x], idx[y], p.sign as f64 * c));
        }
    }
    OscKernel::from_monomials(vars.into_iter().map(Var::Site).collect(), &quad, &[], 0.0)
}

/// Boundary kernel: every interior vertex integrated. A delta left over
/// between boundary values is reported as [`Error::DeltaConstraint`].
pub fn surface_kernel(s: &Surface, k: &LatticeLagrangianCoeffs, tol: f64) -> Result<OscKernel> {
    let e = surface_exponent(s, k)?;
    let inner: Vec<Var> = s.interior.iter().copied().map(Var::Site).collect();
    let out = e.marginalize_greedy(&inner, tol)?;
    if !out.constraints.is_empty() {
        return Err(Error::DeltaConstraint);
    }
    if out.vars.iter().any(|v| !matches!(v, Var::Site(x) if s.boundary.contains(x))) {
        return Err(Error::InvalidSurface("kernel depends on a non-boundary vertex"));
    }
    Ok(out)
}
