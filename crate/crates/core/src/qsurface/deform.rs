//! Surfaces as 2-chains and their deformation across unit cubes.
//!
//! Adding `eps * boundary(C)` for a unit cube `C` replaces the faces that
//! `C` shares with the surface by the remaining faces of `C`. A step is kept
//! only when the result is again an embedded disk with the same boundary
//! edges inside the bounding box.

use super::{shift, OrientedPlaquette, Surface, Vertex};
use crate::{Error, Result};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

type FaceKey = (Vertex, (u8, u8));
type Edge = (Vertex, usize);

/// Oriented faces in cyclic planes with coefficients `+1` or `-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceChain {
    pub faces: BTreeMap<FaceKey, i8>,
    /// Vertices held fixed.
    pub perimeter: BTreeSet<Vertex>,
    boundary_edges: BTreeSet<Edge>,
    /// Inclusive vertex coordinate range of the box.
    pub bounds: (i32, i32),
}

/// One accepted deformation: cube base, sign and number of faces replaced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeformationStep {
    pub cube: Vertex,
    pub eps: i8,
    pub shared: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DeformationLog {
    pub steps: Vec<DeformationStep>,
}

fn dirs(plane: (u8, u8)) -> (usize, usize) {
    (plane.0 as usize - 1, plane.1 as usize - 1)
}

fn face_edges((base, plane): &FaceKey) -> [Edge; 4] {
    let (i, j) = dirs(*plane);
    [(*base, i), (*base, j), (shift(*base, i), j), (shift(*base, j), i)]
}

fn face_corners((base, plane): &FaceKey) -> [Vertex; 4] {
    let (i, j) = dirs(*plane);
    [*base, shift(*base, i), shift(*base, j), shift(shift(*base, i), j)]
}

/// `L23(c+e1) - L23(c) + L31(c+e2) - L31(c) + L12(c+e3) - L12(c)`.
pub fn cube_boundary(c: Vertex) -> [(FaceKey, i8); 6] {
    [
        ((shift(c, 0), (2, 3)), 1),
        ((c, (2, 3)), -1),
        ((shift(c, 1), (3, 1)), 1),
        ((c, (3, 1)), -1),
        ((shift(c, 2), (1, 2)), 1),
        ((c, (1, 2)), -1),
    ]
}

/// Square `n x n` patch of `L_12` plaquettes at height `z`, lower corner at
/// `(offset, offset)`, in the box `[0, bound]^3`.
pub fn flat_patch(n: i32, z: i32, offset: i32, bound: i32) -> Result<SurfaceChain> {
    if n < 1 || offset < 0 || offset + n > bound || z < 0 || z > bound {
        return Err(Error::InvalidSurface("patch does not fit in the box"));
    }
    let mut faces = BTreeMap::new();
    for x in offset..offset + n {
        for y in offset..offset + n {
            faces.insert(([x, y, z], (1, 2)), 1);
        }
    }
    let mut counts: BTreeMap<Edge, usize> = BTreeMap::new();
    for f in faces.keys() {
        for e in face_edges(f) {
            *counts.entry(e).or_default() += 1;
        }
    }
    let boundary_edges: BTreeSet<Edge> = counts.into_iter().filter(|(_, c)| *c == 1).map(|(e, _)| e).collect();
    let perimeter = boundary_edges.iter().flat_map(|&(v, d)| [v, shift(v, d)]).collect();
    Ok(SurfaceChain { faces, perimeter, boundary_edges, bounds: (0, bound) })
}

impl SurfaceChain {
    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.faces.keys().flat_map(face_corners).collect()
    }

    /// `self + eps * boundary(C)` if that is again a valid surface.
    pub fn deformed(&self, cube: Vertex, eps: i8) -> Option<(SurfaceChain, usize)> {
        let (lo, hi) = self.bounds;
        if cube.iter().any(|&x| x < lo || x + 1 > hi) {
            return None;
        }
        let mut faces = self.faces.clone();
        let mut shared = 0;
        for (key, s) in cube_boundary(cube) {
            let v = faces.get(&key).copied().unwrap_or(0) + eps * s;
            if self.faces.contains_key(&key) {
                if v != 0 {
                    return None;
                }
                shared += 1;
                faces.remove(&key);
            } else {
                faces.insert(key, v);
            }
        }
        if shared == 0 {
            return None;
        }
        let out = SurfaceChain { faces, ..self.clone() };
        out.is_valid().then_some((out, shared))
    }

    /// Embedded disk with the original boundary edges.
    pub fn is_valid(&self) -> bool {
        let (lo, hi) = self.bounds;
        let mut counts: BTreeMap<Edge, usize> = BTreeMap::new();
        for f in self.faces.keys() {
            if face_corners(f).iter().flatten().any(|&x| x < lo || x > hi) {
                return false;
            }
            for e in face_edges(f) {
                *counts.entry(e).or_default() += 1;
            }
        }
        for (e, c) in &counts {
            let fixed = self.boundary_edges.contains(e);
            if *c > 2 || (*c == 1) != fixed {
                return false;
            }
        }
        if self.boundary_edges.iter().any(|e| !counts.contains_key(e)) {
            return false;
        }
        let verts = self.vertices();
        for v in &verts {
            if !self.link_connected(*v) {
                return false;
            }
        }
        verts.len() as i64 - counts.len() as i64 + self.faces.len() as i64 == 1
    }

    /// Faces around `v` form a single fan through shared edges.
    fn link_connected(&self, v: Vertex) -> bool {
        let around: Vec<&FaceKey> = self.faces.keys().filter(|f| face_corners(f).contains(&v)).collect();
        if around.is_empty() {
            return true;
        }
        let touches = |f: &FaceKey, e: &Edge| face_edges(f).contains(e);
        let at_v = |f: &FaceKey| -> Vec<Edge> {
            face_edges(f).into_iter().filter(|&(a, d)| a == v || shift(a, d) == v).collect()
        };
        let mut seen = alloc::vec![false; around.len()];
        let mut stack = alloc::vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for e in at_v(around[i]) {
                for (j, g) in around.iter().enumerate() {
                    if !seen[j] && touches(g, &e) {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Cubes with a face on the surface, in a fixed order.
    pub fn candidate_cubes(&self) -> BTreeSet<Vertex> {
        let mut out = BTreeSet::new();
        for (base, plane) in self.faces.keys() {
            let (i, j) = dirs(*plane);
            let n = 3 - i - j;
            out.insert(*base);
            let mut below = *base;
            below[n] -= 1;
            out.insert(below);
        }
        out
    }

    /// Every valid deformation, in a fixed order.
    pub fn applicable(&self) -> Vec<(DeformationStep, SurfaceChain)> {
        let mut out = Vec::new();
        for cube in self.candidate_cubes() {
            for eps in [1i8, -1] {
                if let Some((next, shared)) = self.deformed(cube, eps) {
                    out.push((DeformationStep { cube, eps, shared }, next));
                }
            }
        }
        out
    }

    /// Surface with every non-perimeter vertex integrated.
    pub fn to_surface(&self) -> Surface {
        let plaquettes = self
            .faces
            .iter()
            .map(|(&(base, plane), &sign)| OrientedPlaquette { base, plane, sign })
            .collect();
        let verts = self.vertices();
        Surface {
            plaquettes,
            interior: verts.iter().filter(|v| !self.perimeter.contains(*v)).copied().collect(),
            boundary: self.perimeter.iter().copied().collect(),
        }
    }
}

/// Applies `steps` random valid deformations; `pick(k)` returns an index in `0..k`.
/// `allow` filters steps by the number of replaced faces.
pub fn random_deformation(
    start: &SurfaceChain,
    steps: usize,
    allow: impl Fn(usize) -> bool,
    mut pick: impl FnMut(usize) -> usize,
) -> (SurfaceChain, DeformationLog) {
    let mut cur = start.clone();
    let mut log = DeformationLog::default();
    for _ in 0..steps {
        let mut options = cur.applicable();
        options.retain(|(s, _)| allow(s.shared));
        if options.is_empty() {
            break;
        }
        let (step, next) = options.swap_remove(pick(options.len()));
        log.steps.push(step);
        cur = next;
    }
    (cur, log)
}
