//! The pop-up cube and the three elementary moves, each as a pair of
//! surfaces over the same boundary.

use super::{surface_kernel, LatticeLagrangianCoeffs, OrientedPlaquette, Surface, Vertex};
use crate::oscgauss::KernelDiff;
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    A,
    B,
    C,
}

impl Move {
    pub const ALL: [Move; 3] = [Move::A, Move::B, Move::C];
}

/// All six orderings of the directions, 0-based.
pub const LABELINGS: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];

struct Cube {
    base: Vertex,
}

impl Cube {
    fn v(&self, dirs: &[usize]) -> Vertex {
        let mut w = self.base;
        for &d in dirs {
            w[d] += 1;
        }
        w
    }

    fn l(&self, i: usize, j: usize, at: &[usize], sign: i8) -> OrientedPlaquette {
        OrientedPlaquette { base: self.v(at), plane: (i as u8 + 1, j as u8 + 1), sign }
    }
}

/// Flat plaquette `L_12(u)` and the pop-up cube
/// `L_23(u_1) + L_31(u_2) + L_12(u_3) - L_23(u) - L_31(u)` over `{u, u_1, u_2, u_12}`.
pub fn popup_surfaces(base: Vertex) -> (Surface, Surface) {
    let c = Cube { base };
    let boundary = vec![c.v(&[]), c.v(&[0]), c.v(&[1]), c.v(&[0, 1])];
    let flat = Surface { plaquettes: vec![c.l(0, 1, &[], 1)], interior: Vec::new(), boundary: boundary.clone() };
    let pop = Surface {
        plaquettes: vec![
            c.l(1, 2, &[0], 1),
            c.l(2, 0, &[1], 1),
            c.l(0, 1, &[2], 1),
            c.l(1, 2, &[], -1),
            c.l(2, 0, &[], -1),
        ],
        interior: vec![c.v(&[2]), c.v(&[2, 0]), c.v(&[1, 2]), c.v(&[0, 1, 2])],
        boundary,
    };
    (flat, pop)
}

/// Both configurations of a move for the labelling `(i, j, k)`.
pub fn elementary_move_surfaces(m: Move, [i, j, k]: [usize; 3]) -> Result<(Surface, Surface)> {
    let mut seen = [false; 3];
    for d in [i, j, k] {
        if d > 2 || seen[d] {
            return Err(Error::InvalidSurface("labelling must be a permutation of the directions"));
        }
        seen[d] = true;
    }
    let c = Cube { base: [0, 0, 0] };
    let surface = |plaquettes: Vec<OrientedPlaquette>, interior: Vec<Vertex>, boundary: Vec<Vertex>| Surface {
        plaquettes,
        interior,
        boundary,
    };
    Ok(match m {
        Move::A => {
            let boundary = vec![c.v(&[i]), c.v(&[j]), c.v(&[k])];
            (
                surface(vec![c.l(i, j, &[], 1), c.l(j, k, &[], 1), c.l(k, i, &[], 1)], vec![c.v(&[])], boundary.clone()),
                surface(
                    vec![c.l(i, j, &[k], 1), c.l(j, k, &[i], 1), c.l(k, i, &[j], 1)],
                    vec![c.v(&[i, j]), c.v(&[j, k]), c.v(&[k, i]), c.v(&[i, j, k])],
                    boundary,
                ),
            )
        }
        Move::B => {
            let boundary = vec![c.v(&[]), c.v(&[j]), c.v(&[k]), c.v(&[i, j]), c.v(&[i, k])];
            (
                surface(vec![c.l(i, j, &[], 1), c.l(k, i, &[], 1), c.l(j, k, &[i], -1)], vec![c.v(&[i])], boundary.clone()),
                surface(vec![c.l(i, j, &[k], 1), c.l(k, i, &[j], 1), c.l(j, k, &[], -1)], vec![c.v(&[j, k])], boundary),
            )
        }
        Move::C => {
            let boundary = vec![c.v(&[j]), c.v(&[k]), c.v(&[i, j]), c.v(&[i, k])];
            (
                surface(
                    vec![c.l(i, j, &[k], 1), c.l(k, i, &[j], 1)],
                    vec![c.v(&[j, k]), c.v(&[i, j, k])],
                    boundary.clone(),
                ),
                surface(
                    vec![c.l(i, j, &[], 1), c.l(j, k, &[], 1), c.l(k, i, &[], 1), c.l(j, k, &[i], -1)],
                    vec![c.v(&[]), c.v(&[i])],
                    boundary,
                ),
            )
        }
    })
}

/// Compares the boundary kernels of the two configurations of a move.
pub fn elementary_move_check(m: Move, labels: [usize; 3], k: &LatticeLagrangianCoeffs, tol: f64) -> Result<KernelDiff> {
    let (first, second) = elementary_move_surfaces(m, labels)?;
    surface_kernel(&first, k, tol)?.compare(&surface_kernel(&second, k, tol)?)
}
