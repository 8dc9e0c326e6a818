//! Oscillatory Gaussian kernels
//! `amp (2 pi hbar)^k V^v exp[(i/hbar)(x^T A x / 2 + B^T x + c)]`
//! times a product of affine delta constraints.
//!
//! Integration of a variable is exact: a Fresnel integral when the variable
//! carries a quadratic term, a volume factor when it is absent, and a delta
//! function when it appears only linearly. Exponents are stored in action
//! units; `hbar` only enters when a kernel is evaluated.

#[allow(unused_imports)]
use num_traits::Float;
use crate::linalg::Mat;
use crate::{Error, Result};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, PI};
use core::fmt;
use core::ops::{Add, AddAssign, Neg, Sub};
use num_complex::Complex64;

pub const DEFAULT_TOL: f64 = 1e-9;

/// Integration variable label.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Named(String),
    /// Lattice vertex in `Z^3`.
    Site([i32; 3]),
    /// `k`-th visit of a time path.
    Visit(u32),
    /// Inserted momentum.
    Momentum(u32),
}

impl Var {
    pub fn named(s: &str) -> Self {
        Var::Named(s.into())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Named(s) => write!(f, "{s}"),
            Var::Site([a, b, c]) => write!(f, "u({a},{b},{c})"),
            Var::Visit(k) => write!(f, "x{k}"),
            Var::Momentum(k) => write!(f, "X{k}"),
        }
    }
}

/// Half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub fn from_halves(n: i32) -> Self {
        HalfInt(n)
    }

    pub fn halves(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 + o.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt(self.0 - o.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl AddAssign for HalfInt {
    fn add_assign(&mut self, o: HalfInt) {
        self.0 += o.0;
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// `delta(pivot * eliminated + sum terms + constant)`. The eliminated variable
/// no longer appears in the exponent or in any other constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub eliminated: Var,
    pub pivot: f64,
    pub terms: Vec<(Var, f64)>,
    pub constant: f64,
}

impl Constraint {
    /// `eliminated = sum e_k w_k + e0`.
    fn solution(&self) -> (Vec<(Var, f64)>, f64) {
        let terms = self.terms.iter().map(|(v, k)| (v.clone(), -k / self.pivot)).collect();
        (terms, -self.constant / self.pivot)
    }

    fn coefficient(&self, v: &Var) -> Option<f64> {
        self.terms.iter().find(|(w, _)| w == v).map(|(_, k)| *k)
    }

    fn substitute(&mut self, w: &Var, expr: &[(Var, f64)], e0: f64) {
        let Some(pos) = self.terms.iter().position(|(v, _)| v == w) else {
            return;
        };
        let (_, k) = self.terms.remove(pos);
        self.constant += k * e0;
        for (v, e) in expr {
            merge_term(&mut self.terms, v, k * e);
        }
        self.terms.retain(|(_, k)| *k != 0.0);
    }
}

fn merge_term(terms: &mut Vec<(Var, f64)>, v: &Var, k: f64) {
    match terms.iter_mut().find(|(w, _)| w == v) {
        Some(t) => t.1 += k,
        None => terms.push((v.clone(), k)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OscKernel {
    pub vars: Vec<Var>,
    pub a: Mat,
    pub b: Vec<f64>,
    pub c: f64,
    pub amp: Complex64,
    /// Power of `2 pi hbar`.
    pub pihbar: HalfInt,
    /// Power of the volume factor `V`.
    pub vol: u32,
    pub constraints: Vec<Constraint>,
}

/// Difference between two kernels over the same variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelDiff {
    /// Max-norm over `A`, `B` and `c`.
    pub exponent_diff: f64,
    /// `amp_1 / amp_2`.
    pub amp_ratio: Complex64,
    pub pihbar_diff: HalfInt,
    pub vol_diff: i64,
    pub constraints: (usize, usize),
}

impl KernelDiff {
    pub fn exponent_equal(&self, tol: f64) -> bool {
        self.exponent_diff <= tol
    }

    /// `|amp_ratio - 1|`.
    pub fn amp_deviation(&self) -> f64 {
        (self.amp_ratio - Complex64::new(1.0, 0.0)).norm()
    }
}

impl OscKernel {
    /// Unit amplitude, no powers, exponent `x^T A x / 2 + B^T x + c`.
    /// `a` is symmetrized.
    pub fn new(vars: Vec<Var>, a: Mat, b: Vec<f64>, c: f64) -> Result<Self> {
        let n = vars.len();
        if a.rows() != n || a.cols() != n || b.len() != n {
            return Err(Error::VariableMismatch);
        }
        for i in 0..n {
            if vars[i + 1..].contains(&vars[i]) {
                return Err(Error::VariableMismatch);
            }
        }
        let mut a = a;
        for i in 0..n {
            for j in i + 1..n {
                let m = 0.5 * (a[(i, j)] + a[(j, i)]);
                a[(i, j)] = m;
                a[(j, i)] = m;
            }
        }
        Ok(OscKernel {
            vars,
            a,
            b,
            c,
            amp: Complex64::new(1.0, 0.0),
            pihbar: HalfInt::ZERO,
            vol: 0,
            constraints: Vec::new(),
        })
    }

    /// Kernel with no variables and value 1.
    pub fn unit() -> Self {
        OscKernel::new(Vec::new(), Mat::zeros(0, 0), Vec::new(), 0.0).expect("empty kernel")
    }

    /// Builds an exponent from a list of monomials: `(i, j, k)` adds `k x_i x_j`,
    /// `(i, i, k)` adds `k x_i^2`.
    pub fn from_monomials(vars: Vec<Var>, quad: &[(usize, usize, f64)], linear: &[(usize, f64)], c: f64) -> Result<Self> {
        let n = vars.len();
        let mut a = Mat::zeros(n, n);
        for &(i, j, k) in quad {
            if i >= n || j >= n {
                return Err(Error::VariableMismatch);
            }
            if i == j {
                a[(i, i)] += 2.0 * k;
            } else {
                a[(i, j)] += k;
                a[(j, i)] += k;
            }
        }
        let mut b = vec![0.0; n];
        for &(i, k) in linear {
            b[i] += k;
        }
        OscKernel::new(vars, a, b, c)
    }

    pub fn with_amplitude(mut self, amp: Complex64, pihbar: HalfInt) -> Self {
        self.amp = amp;
        self.pihbar = pihbar;
        self
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn index(&self, v: &Var) -> Option<usize> {
        self.vars.iter().position(|w| w == v)
    }

    /// Live variables together with the ones eliminated by constraints.
    pub fn all_vars(&self) -> Vec<Var> {
        let mut out = self.vars.clone();
        out.extend(self.constraints.iter().map(|c| c.eliminated.clone()));
        out
    }

    /// `x^T A x / 2 + B^T x + c` at an assignment of the live variables.
    pub fn exponent(&self, x: &[f64]) -> f64 {
        let ax = self.a.apply(x);
        let mut s = self.c;
        for i in 0..x.len() {
            s += 0.5 * x[i] * ax[i] + self.b[i] * x[i];
        }
        s
    }

    /// Value of the smooth part (constraints and volume factors left out).
    pub fn eval_smooth(&self, x: &[f64], hbar: f64) -> Complex64 {
        let pref = (2.0 * PI * hbar).powf(self.pihbar.value());
        self.amp * pref * Complex64::from_polar(1.0, self.exponent(x) / hbar)
    }

    /// Negated exponent and conjugated amplitude.
    pub fn conj(&self) -> Self {
        let mut k = self.clone();
        k.a = k.a.scale(-1.0);
        k.b.iter_mut().for_each(|v| *v = -*v);
        k.c = -k.c;
        k.amp = k.amp.conj();
        k
    }

    pub fn rename(&self, from: &Var, to: Var) -> Result<Self> {
        self.map_vars(|v| if v == from { to.clone() } else { v.clone() })
    }

    /// Relabels every variable; the map must stay injective.
    pub fn map_vars(&self, f: impl Fn(&Var) -> Var) -> Result<Self> {
        let mut k = self.clone();
        k.vars = k.vars.iter().map(&f).collect();
        for c in &mut k.constraints {
            c.eliminated = f(&c.eliminated);
            for t in &mut c.terms {
                t.0 = f(&t.0);
            }
        }
        let all = k.all_vars();
        for i in 0..all.len() {
            if all[i + 1..].contains(&all[i]) {
                return Err(Error::VariableMismatch);
            }
        }
        Ok(k)
    }

    fn scale(&self) -> f64 {
        let m = self.a.max_abs();
        if m > 0.0 {
            return m;
        }
        let m = self.b.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if m > 0.0 {
            m
        } else {
            1.0
        }
    }

    fn push_var(&mut self, v: Var) -> usize {
        let n = self.dim();
        let mut a = Mat::zeros(n + 1, n + 1);
        for i in 0..n {
            for j in 0..n {
                a[(i, j)] = self.a[(i, j)];
            }
        }
        self.a = a;
        self.b.push(0.0);
        self.vars.push(v);
        n
    }

    fn ensure_var(&mut self, v: &Var) -> usize {
        match self.index(v) {
            Some(i) => i,
            None => self.push_var(v.clone()),
        }
    }

    fn remove_index(&mut self, w: usize) {
        let n = self.dim();
        let keep: Vec<usize> = (0..n).filter(|&i| i != w).collect();
        let mut a = Mat::zeros(n - 1, n - 1);
        for (ii, &i) in keep.iter().enumerate() {
            for (jj, &j) in keep.iter().enumerate() {
                a[(ii, jj)] = self.a[(i, j)];
            }
        }
        self.a = a;
        self.b.remove(w);
        self.vars.remove(w);
    }

    /// Replaces the live variable `w` by `sum e_k v_k + e0` in the exponent
    /// and in every constraint. Variables in `expr` are added if absent.
    pub fn substitute(&mut self, w: &Var, expr: &[(Var, f64)], e0: f64) -> Result<()> {
        if expr.iter().any(|(v, _)| v == w) {
            return Err(Error::DegenerateCoeffs);
        }
        if self.index(w).is_some() {
            let idx: Vec<(usize, f64)> = expr.iter().map(|(v, e)| (self.ensure_var(v), *e)).collect();
            let wi = self.index(w).expect("present");
            let n = self.dim();
            let mut e = vec![0.0; n];
            for &(i, k) in &idx {
                e[i] += k;
            }
            let aww = self.a[(wi, wi)];
            let bw = self.b[wi];
            let row: Vec<f64> = (0..n).map(|j| if j == wi { 0.0 } else { self.a[(wi, j)] }).collect();
            for i in 0..n {
                for j in 0..n {
                    self.a[(i, j)] += aww * e[i] * e[j] + row[j] * e[i] + row[i] * e[j];
                }
                self.b[i] += aww * e0 * e[i] + row[i] * e0 + bw * e[i];
            }
            self.c += 0.5 * aww * e0 * e0 + bw * e0;
            self.remove_index(wi);
        }
        for c in &mut self.constraints {
            c.substitute(w, expr, e0);
        }
        Ok(())
    }

    /// Imposes `delta(sum k_v v + constant)`; returns the eliminated variable.
    fn add_constraint(&mut self, terms: Vec<(Var, f64)>, constant: f64, prefer: &[Var], tol: f64) -> Result<Var> {
        let mut terms = terms;
        let mut constant = constant;
        while let Some((pos, ci)) = terms
            .iter()
            .enumerate()
            .find_map(|(p, (v, _))| self.constraints.iter().position(|c| &c.eliminated == v).map(|ci| (p, ci)))
        {
            let (_, k) = terms.remove(pos);
            let (expr, e0) = self.constraints[ci].solution();
            constant += k * e0;
            for (v, e) in &expr {
                merge_term(&mut terms, v, k * e);
            }
        }
        let big = terms.iter().fold(0.0f64, |m, (_, k)| m.max(k.abs()));
        terms.retain(|(_, k)| k.abs() > tol * big);
        let pick = |pool: &mut dyn Iterator<Item = &(Var, f64)>| {
            pool.fold(None::<&(Var, f64)>, |best, t| match best {
                Some(b) if b.1.abs() >= t.1.abs() => Some(b),
                _ => Some(t),
            })
            .cloned()
        };
        let chosen = pick(&mut terms.iter().filter(|(v, _)| prefer.contains(v))).or_else(|| pick(&mut terms.iter()));
        let Some((w, pivot)) = chosen else {
            return Err(Error::DeltaConstraint);
        };
        let rest: Vec<(Var, f64)> = terms.into_iter().filter(|(v, _)| v != &w).collect();
        let con = Constraint { eliminated: w.clone(), pivot, terms: rest, constant };
        let (expr, e0) = con.solution();
        self.substitute(&w, &expr, e0)?;
        self.constraints.push(con);
        Ok(w)
    }

    /// Integrates out `v` over the real line.
    pub fn marginalize(&self, v: &Var, tol: f64) -> Result<Self> {
        self.marginalize_with(v, &[], tol)
    }

    /// As [`marginalize`](Self::marginalize); a delta produced on the way is
    /// solved preferably for a variable in `prefer`.
    pub fn marginalize_with(&self, v: &Var, prefer: &[Var], tol: f64) -> Result<Self> {
        let mut k = self.clone();
        k.integrate(v, prefer, tol)?;
        Ok(k)
    }

    fn integrate(&mut self, v: &Var, prefer: &[Var], tol: f64) -> Result<()> {
        if let Some(ci) = self.constraints.iter().position(|c| &c.eliminated == v) {
            let c = self.constraints.remove(ci);
            self.amp /= c.pivot.abs();
            return Ok(());
        }
        let Some(vi) = self.index(v) else {
            return Err(Error::UnknownVariable(v.clone()));
        };
        if let Some(ci) = self.constraints.iter().position(|c| c.coefficient(v).is_some()) {
            let old = self.constraints.remove(ci);
            let kv = old.coefficient(v).expect("checked");
            let mut terms: Vec<(Var, f64)> = old.terms.iter().filter(|(w, _)| w != v).cloned().collect();
            terms.push((old.eliminated.clone(), old.pivot));
            self.push_var(old.eliminated.clone());
            let con = Constraint { eliminated: v.clone(), pivot: kv, terms, constant: old.constant };
            let (expr, e0) = con.solution();
            self.substitute(v, &expr, e0)?;
            self.amp /= kv.abs();
            return Ok(());
        }
        let scale = self.scale();
        let avv = self.a[(vi, vi)];
        let rel = avv.abs() / scale;
        if rel > 100.0 * tol {
            self.gaussian(vi);
            return Ok(());
        }
        if rel > tol {
            return Err(Error::NearCaustic { var: v.clone(), pivot: avv });
        }
        let n = self.dim();
        let coupling: Vec<(Var, f64)> = (0..n)
            .filter(|&j| j != vi && self.a[(vi, j)].abs() > tol * scale)
            .map(|j| (self.vars[j].clone(), self.a[(vi, j)]))
            .collect();
        let bv = self.b[vi];
        let bv = if bv.abs() > tol * scale { bv } else { 0.0 };
        self.remove_index(vi);
        if coupling.is_empty() {
            if bv != 0.0 {
                return Err(Error::DeltaConstraint);
            }
            self.vol += 1;
            return Ok(());
        }
        self.pihbar += HalfInt::ONE;
        self.add_constraint(coupling, bv, prefer, tol)?;
        Ok(())
    }

    fn gaussian(&mut self, vi: usize) {
        let n = self.dim();
        let avv = self.a[(vi, vi)];
        let bv = self.b[vi];
        let col: Vec<f64> = (0..n).map(|j| self.a[(j, vi)]).collect();
        for i in 0..n {
            for j in 0..n {
                self.a[(i, j)] -= col[i] * col[j] / avv;
            }
            self.b[i] -= bv * col[i] / avv;
        }
        self.c -= bv * bv / (2.0 * avv);
        self.amp *= Complex64::from_polar(1.0 / avv.abs().sqrt(), avv.signum() * FRAC_PI_4);
        self.pihbar += HalfInt::HALF;
        self.remove_index(vi);
    }

    /// Integrates out every variable of `vs` in order, solving deltas for the
    /// variables still pending.
    pub fn marginalize_all(&self, vs: &[Var], tol: f64) -> Result<Self> {
        let mut k = self.clone();
        for (i, v) in vs.iter().enumerate() {
            k.integrate(v, &vs[i + 1..], tol)?;
        }
        Ok(k)
    }

    /// Integrates out `vs` choosing the order: pending constraints first, then
    /// the largest quadratic pivot, then volume factors, then deltas.
    pub fn marginalize_greedy(&self, vs: &[Var], tol: f64) -> Result<Self> {
        let mut k = self.clone();
        let mut left: Vec<Var> = vs.to_vec();
        while !left.is_empty() {
            let in_constraint = |v: &Var, k: &OscKernel| {
                k.constraints.iter().any(|c| &c.eliminated == v || c.coefficient(v).is_some())
            };
            let pos = match left.iter().position(|v| in_constraint(v, &k)) {
                Some(p) => p,
                None => {
                    let diag = |v: &Var| k.index(v).map_or(0.0, |i| k.a[(i, i)].abs());
                    let best = (0..left.len()).fold(0, |b, i| if diag(&left[i]) > diag(&left[b]) { i } else { b });
                    if diag(&left[best]) > 100.0 * tol * k.scale() {
                        best
                    } else {
                        let empty = |v: &Var| match k.index(v) {
                            Some(i) => (0..k.dim()).all(|j| k.a[(i, j)] == 0.0) && k.b[i] == 0.0,
                            None => false,
                        };
                        left.iter().position(empty).unwrap_or(best)
                    }
                }
            };
            let v = left.remove(pos);
            k.integrate(&v, &left, tol)?;
        }
        Ok(k)
    }

    /// Product of two kernels over the union of their variables, then
    /// integration over `shared`.
    pub fn glue(&self, other: &OscKernel, shared: &[Var], tol: f64) -> Result<Self> {
        for v in shared {
            let has = |k: &OscKernel| k.all_vars().contains(v);
            if !has(self) || !has(other) {
                return Err(Error::UnknownVariable(v.clone()));
            }
        }
        let mut out = self.clone();
        let mut rhs = other.clone();
        for c in &out.constraints {
            if rhs.index(&c.eliminated).is_some() {
                let (expr, e0) = c.solution();
                rhs.substitute(&c.eliminated, &expr, e0)?;
            }
        }
        for v in &rhs.vars {
            out.ensure_var(v);
        }
        let map: Vec<usize> = rhs.vars.iter().map(|v| out.index(v).expect("added")).collect();
        for i in 0..rhs.dim() {
            for j in 0..rhs.dim() {
                out.a[(map[i], map[j])] += rhs.a[(i, j)];
            }
            out.b[map[i]] += rhs.b[i];
        }
        out.c += rhs.c;
        out.amp *= rhs.amp;
        out.pihbar += rhs.pihbar;
        out.vol += rhs.vol;
        for c in rhs.constraints {
            let mut terms = c.terms;
            terms.push((c.eliminated, c.pivot));
            out.add_constraint(terms, c.constant, shared, tol)?;
        }
        out.marginalize_all(shared, tol)
    }

    /// Aligns `other` to this kernel's variable order and compares.
    pub fn compare(&self, other: &OscKernel) -> Result<KernelDiff> {
        let mut mine = self.vars.clone();
        let mut theirs = other.vars.clone();
        mine.sort();
        theirs.sort();
        if mine != theirs {
            return Err(Error::VariableMismatch);
        }
        let map: Vec<usize> = self.vars.iter().map(|v| other.index(v).expect("same set")).collect();
        let mut d = (self.c - other.c).abs();
        for i in 0..self.dim() {
            d = d.max((self.b[i] - other.b[map[i]]).abs());
            for j in 0..self.dim() {
                d = d.max((self.a[(i, j)] - other.a[(map[i], map[j])]).abs());
            }
        }
        Ok(KernelDiff {
            exponent_diff: d,
            amp_ratio: self.amp / other.amp,
            pihbar_diff: self.pihbar - other.pihbar,
            vol_diff: self.vol as i64 - other.vol as i64,
            constraints: (self.constraints.len(), other.constraints.len()),
        })
    }

    /// Reordered copy with variables sorted.
    pub fn canonical(&self) -> Self {
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&i, &j| self.vars[i].cmp(&self.vars[j]));
        let n = self.dim();
        let mut a = Mat::zeros(n, n);
        for (ii, &i) in order.iter().enumerate() {
            for (jj, &j) in order.iter().enumerate() {
                a[(ii, jj)] = self.a[(i, j)];
            }
        }
        let mut k = self.clone();
        k.vars = order.iter().map(|&i| self.vars[i].clone()).collect();
        k.b = order.iter().map(|&i| self.b[i]).collect();
        k.a = a;
        k
    }

    pub fn label(&self) -> String {
        format!("K[{}]", self.vars.iter().map(|v| format!("{v}")).collect::<Vec<_>>().join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(a: f64, b0: f64) -> OscKernel {
        OscKernel::new(vec![Var::named("x")], Mat::from_rows(&[[a]]), vec![b0], 0.0).unwrap()
    }

    #[test]
    fn fresnel_single_variable() {
        let k = one(-2.0, 3.0).marginalize(&Var::named("x"), DEFAULT_TOL).unwrap();
        assert_eq!(k.dim(), 0);
        assert!((k.c - 2.25).abs() < 1e-15);
        assert_eq!(k.pihbar, HalfInt::HALF);
        let want = Complex64::from_polar(0.5f64.sqrt(), -FRAC_PI_4);
        assert!((k.amp - want).norm() < 1e-15);
    }

    #[test]
    fn linear_only_is_delta_error() {
        assert_eq!(one(0.0, 2.0).marginalize(&Var::named("x"), DEFAULT_TOL), Err(Error::DeltaConstraint));
    }

    #[test]
    fn absent_variable_gives_volume() {
        let k = one(0.0, 0.0).marginalize(&Var::named("x"), DEFAULT_TOL).unwrap();
        assert_eq!(k.vol, 1);
        assert_eq!(k.pihbar, HalfInt::ZERO);
    }

    #[test]
    fn near_caustic_band_errors() {
        let k = OscKernel::from_monomials(vec![Var::named("x"), Var::named("y")], &[(0, 0, 1e-8), (1, 1, 1.0)], &[], 0.0).unwrap();
        assert!(matches!(k.marginalize(&Var::named("x"), DEFAULT_TOL), Err(Error::NearCaustic { .. })));
    }

    #[test]
    fn delta_then_integrate() {
        // exp(i x (y - z)) over x, then y: leaves y = z, weight 2 pi hbar
        let v = |s: &str| Var::named(s);
        let k = OscKernel::from_monomials(vec![v("x"), v("y"), v("z")], &[(0, 1, 1.0), (0, 2, -1.0), (1, 1, 0.5)], &[], 0.0).unwrap();
        let k = k.marginalize_all(&[v("x"), v("y")], DEFAULT_TOL).unwrap();
        assert_eq!(k.vars, vec![v("z")]);
        assert!(k.constraints.is_empty());
        assert!((k.a[(0, 0)] - 1.0).abs() < 1e-15);
        assert_eq!(k.pihbar, HalfInt::ONE);
        assert!((k.amp - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn halfint_display() {
        assert_eq!(format!("{}", HalfInt::from_halves(-1)), "-1/2");
        assert_eq!(format!("{}", HalfInt::from_halves(4)), "2");
    }
}
