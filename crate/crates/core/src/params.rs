//! Lattice parameters and the coefficients derived from them.
//!
//! `b` and `a` are read off the spectra of the reduced hat and bar maps
//! (`b = -tr S / 2`, `a = -tr T / 2`), and `P`, `R` are then fixed by
//! `b = (P - Q)/(P + Q)`, `a = (P - R)/(P + R)` with `Q = q^2`.

#[allow(unused_imports)]
use num_traits::Float;
use crate::reduction::maps;
use crate::{Error, Result};

/// Guard radius used when sampling parameter triples.
pub const GUARD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeParams {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub hbar: f64,
}

impl LatticeParams {
    pub fn new(p: f64, q: f64, r: f64) -> Result<Self> {
        Self::with_hbar(p, q, r, 1.0)
    }

    pub fn with_hbar(p: f64, q: f64, r: f64, hbar: f64) -> Result<Self> {
        let lp = LatticeParams { p, q, r, hbar };
        lp.validate()?;
        Ok(lp)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.p, self.q, self.r, self.hbar].iter().all(|x| x.is_finite()) {
            return Err(Error::DegenerateParams("non-finite parameter"));
        }
        if self.hbar <= 0.0 {
            return Err(Error::DegenerateParams("hbar must be positive"));
        }
        if self.p + self.q == 0.0 || self.p + self.r == 0.0 || self.q + self.r == 0.0 {
            return Err(Error::DegenerateParams("p_i + p_j = 0"));
        }
        Ok(())
    }

    /// True when every pairwise gap and sum is at least [`GUARD`].
    pub fn well_separated(&self) -> bool {
        let (p, q, r) = (self.p, self.q, self.r);
        [p - q, p - r, q - r, p + q, p + r, q + r].iter().all(|d| d.abs() >= GUARD)
    }

    pub fn directions(&self) -> [f64; 3] {
        [self.p, self.q, self.r]
    }

    pub fn s(&self) -> f64 {
        (self.p - self.q) / (self.p + self.q)
    }

    pub fn t(&self) -> f64 {
        (self.p - self.r) / (self.p + self.r)
    }

    pub fn tprime(&self) -> f64 {
        (self.q - self.r) / (self.q + self.r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Elliptic,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub q: f64,
    pub r: f64,
    pub s: f64,
    pub t: f64,
    pub tprime: f64,
    pub b: f64,
    pub a: f64,
    pub big_p: f64,
    pub big_q: f64,
    pub big_r: f64,
    /// Signed angle with `cos mu = -b` and `sin mu = 2 q sqrt(P) / (P + Q)`.
    /// Lies in `(0, pi)` when `q > 0`.
    pub mu: Option<f64>,
    /// Signed angle with `cos nu = -a` and `sin nu = 2 r sqrt(P) / (P + R)`.
    pub nu: Option<f64>,
    pub regime: Regime,
    pub hbar: f64,
}

impl DerivedParams {
    pub fn is_elliptic(&self) -> bool {
        self.regime == Regime::Elliptic
    }

    pub fn mu(&self) -> Result<f64> {
        self.mu.ok_or(Error::OutOfRegime)
    }

    pub fn nu(&self) -> Result<f64> {
        self.nu.ok_or(Error::OutOfRegime)
    }

    pub fn sin_mu(&self) -> f64 {
        2.0 * self.q * self.big_p.sqrt() / (self.big_p + self.big_q)
    }

    pub fn sin_nu(&self) -> f64 {
        2.0 * self.r * self.big_p.sqrt() / (self.big_p + self.big_r)
    }
}

pub fn derive(lp: &LatticeParams) -> Result<DerivedParams> {
    lp.validate()?;
    if lp.q == 0.0 || lp.r == 0.0 {
        return Err(Error::DegenerateParams("q and r must be nonzero"));
    }
    let (s, t, tprime) = (lp.s(), lp.t(), lp.tprime());
    let b = -0.5 * maps::hat_matrix(s).trace();
    let a = -0.5 * maps::bar_matrix(t, tprime)?.trace();
    if (1.0 - b).abs() < 1e-300 || (1.0 + a).abs() < 1e-300 {
        return Err(Error::DegenerateParams("oscillator coefficient at the pole"));
    }
    let big_q = lp.q * lp.q;
    let big_p = big_q * (1.0 + b) / (1.0 - b);
    let big_r = big_p * (1.0 - a) / (1.0 + a);
    let elliptic = b.abs() < 1.0 && a.abs() < 1.0 && big_p > 0.0;
    let mut d = DerivedParams {
        q: lp.q,
        r: lp.r,
        s,
        t,
        tprime,
        b,
        a,
        big_p,
        big_q,
        big_r,
        mu: None,
        nu: None,
        regime: if elliptic { Regime::Elliptic } else { Regime::Hyperbolic },
        hbar: lp.hbar,
    };
    if elliptic {
        d.mu = Some(d.sin_mu().atan2(-b));
        d.nu = Some(d.sin_nu().atan2(-a));
    }
    Ok(d)
}

/// `|s t t' - (s - t + t')|`.
pub fn check_stt_identity(lp: &LatticeParams) -> Result<f64> {
    lp.validate()?;
    let (s, t, tp) = (lp.s(), lp.t(), lp.tprime());
    Ok((s * t * tp - s + t - tp).abs())
}

/// Edge coefficients `s_ij = (p_i + p_j)/(p_i - p_j)` of the 2-form Lagrangian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeParams {
    pub s: [[f64; 3]; 3],
    pub lambda: f64,
}

impl EdgeParams {
    pub fn new(p: [f64; 3]) -> Result<Self> {
        let mut s = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    s[i][j] = edge_coefficient(p[i], p[j])?;
                }
            }
        }
        let lambda = s[0][1] * s[1][2] + s[1][2] * s[2][0] + s[2][0] * s[0][1] + 1.0;
        Ok(EdgeParams { s, lambda })
    }

    pub fn from_lattice(lp: &LatticeParams) -> Result<Self> {
        Self::new(lp.directions())
    }
}

pub fn edge_coefficient(pi: f64, pj: f64) -> Result<f64> {
    if pi == pj {
        return Err(Error::DegenerateParams("p_i = p_j"));
    }
    Ok((pi + pj) / (pi - pj))
}

/// `|s12 s23 + s23 s31 + s31 s12 + 1|`.
pub fn check_sij_identity(p1: f64, p2: f64, p3: f64) -> Result<f64> {
    Ok(EdgeParams::new([p1, p2, p3])?.lambda.abs())
}

/// Alternative closed forms, evaluated next to the map-spectrum values so
/// the discrepancies stay visible in reports.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlternativeForms {
    /// `1 + 2s - s^2`, offered for `b`; it equals `2b`.
    pub b_alt: f64,
    /// `p^2 + pq`, offered for `P`; it is short by `pq`.
    pub p_alt: f64,
    /// `p^2 + 2pq`, the value consistent with the spectrum.
    pub p_closed: f64,
    /// `((2t + 1 - t^2) - t'(2t - 1 + t^2)) / (1 - t^2 t')`, offered for `2a`.
    pub two_a_alt: f64,
}

impl AlternativeForms {
    pub fn new(lp: &LatticeParams) -> Self {
        let (s, t, tp) = (lp.s(), lp.t(), lp.tprime());
        AlternativeForms {
            b_alt: 1.0 + 2.0 * s - s * s,
            p_alt: lp.p * lp.p + lp.p * lp.q,
            p_closed: lp.p * lp.p + 2.0 * lp.p * lp.q,
            two_a_alt: ((2.0 * t + 1.0 - t * t) - tp * (2.0 * t - 1.0 + t * t)) / (1.0 - t * t * tp),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternative_forms_at_321() {
        let f = AlternativeForms::new(&LatticeParams::new(3.0, 2.0, 1.0).unwrap());
        assert!((f.b_alt - 1.36).abs() < 1e-15);
        assert_eq!((f.p_alt, f.p_closed), (15.0, 21.0));
        assert!((f.two_a_alt - 20.0 / 11.0).abs() < 1e-14);
    }

    #[test]
    fn derived_values_at_321() {
        let d = derive(&LatticeParams::new(3.0, 2.0, 1.0).unwrap()).unwrap();
        assert!((d.s - 0.2).abs() < 1e-15);
        assert!((d.t - 0.5).abs() < 1e-15);
        assert!((d.tprime - 1.0 / 3.0).abs() < 1e-15);
        assert!((d.b - 0.68).abs() < 1e-14);
        assert!((d.a - 10.0 / 11.0).abs() < 1e-14);
        assert!((d.big_p - 21.0).abs() < 1e-12);
        assert!((d.big_r - 1.0).abs() < 1e-12);
        assert!((d.mu.unwrap() - (core::f64::consts::PI - 0.68f64.acos())).abs() < 1e-14);
    }

    #[test]
    fn equal_p_q_is_not_degenerate() {
        let d = derive(&LatticeParams::new(2.0, 2.0, 1.0).unwrap()).unwrap();
        assert_eq!(d.s, 0.0);
        assert!((d.b - 0.5).abs() < 1e-15);
        assert!(EdgeParams::new([2.0, 2.0, 1.0]).is_err());
    }

    #[test]
    fn opposite_parameters_are_degenerate() {
        assert!(LatticeParams::new(1.0, -1.0, 2.0).is_err());
    }

    #[test]
    fn edge_values_at_321() {
        let e = EdgeParams::new([3.0, 2.0, 1.0]).unwrap();
        assert_eq!(e.s[0][1], 5.0);
        assert_eq!(e.s[1][2], 3.0);
        assert_eq!(e.s[2][0], -2.0);
        assert_eq!(e.lambda, 0.0);
    }
}
