//! JSON forms of kernels and surfaces, and the residual sweep CSV.

use crate::report::{CheckRecord, Expect, SuiteReport};
use mdc_core::oscgauss::OscKernel;
use mdc_core::params::{derive, EdgeParams, LatticeParams};
use mdc_core::qsurface::{surface_kernel, LatticeLagrangianCoeffs, OrientedPlaquette, Surface};
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarJson {
    pub modulus: f64,
    /// Argument in radians.
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintJson {
    pub eliminated: String,
    pub pivot: f64,
    pub terms: Vec<(String, f64)>,
    pub constant: f64,
}

/// Kernel with variables in sorted order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelJson {
    pub vars: Vec<String>,
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: f64,
    pub amp: PolarJson,
    /// Power of `2 pi hbar`, e.g. `"-1/2"`.
    pub pihbar: String,
    pub vol: u32,
    pub constraints: Vec<ConstraintJson>,
}

impl From<&OscKernel> for KernelJson {
    fn from(k: &OscKernel) -> Self {
        let k = k.canonical();
        let n = k.dim();
        KernelJson {
            vars: k.vars.iter().map(|v| v.to_string()).collect(),
            a: (0..n).map(|i| (0..n).map(|j| k.a[(i, j)]).collect()).collect(),
            b: k.b.clone(),
            c: k.c,
            amp: PolarJson { modulus: k.amp.norm(), phase: k.amp.arg() },
            pihbar: k.pihbar.to_string(),
            vol: k.vol,
            constraints: k
                .constraints
                .iter()
                .map(|c| ConstraintJson {
                    eliminated: c.eliminated.to_string(),
                    pivot: c.pivot,
                    terms: c.terms.iter().map(|(v, x)| (v.to_string(), *x)).collect(),
                    constant: c.constant,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaquetteJson {
    pub base: [i32; 3],
    pub plane: [u8; 2],
    pub sign: i8,
}

/// Surface description: plaquettes plus explicit interior and boundary
/// vertices. `params` picks the canonical Lagrangian, `(3, 2, 1)` if absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceJson {
    pub plaquettes: Vec<PlaquetteJson>,
    pub interior: Vec<[i32; 3]>,
    pub boundary: Vec<[i32; 3]>,
    #[serde(default)]
    pub params: Option<[f64; 3]>,
}

impl SurfaceJson {
    pub fn to_surface(&self) -> mdc_core::Result<Surface> {
        let plaquettes = self
            .plaquettes
            .iter()
            .map(|p| OrientedPlaquette::new(p.base, (p.plane[0], p.plane[1]), p.sign))
            .collect::<mdc_core::Result<Vec<_>>>()?;
        Surface::new(plaquettes, self.interior.clone(), self.boundary.clone())
    }

    pub fn coefficients(&self) -> mdc_core::Result<LatticeLagrangianCoeffs> {
        Ok(LatticeLagrangianCoeffs::canonical(&EdgeParams::new(self.params.unwrap_or([3.0, 2.0, 1.0]))?))
    }

    pub fn kernel(&self, tol: f64) -> mdc_core::Result<OscKernel> {
        surface_kernel(&self.to_surface()?, &self.coefficients()?, tol)
    }
}

const CSV_HEADER: [&str; 13] = ["p", "q", "r", "s", "t", "tprime", "b", "a", "P", "mu", "nu", "residual_name", "residual"];

/// One row per parameter-tagged, non-informational record.
pub fn write_sweep_csv<W: Write>(report: &SuiteReport, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for rec in report.records().filter(|r| r.expect != Expect::Info) {
        if let Some(row) = sweep_row(rec) {
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn sweep_row(rec: &CheckRecord) -> Option<Vec<String>> {
    let [p, q, r] = rec.params?;
    let lp = LatticeParams::new(p, q, r).ok()?;
    let d = derive(&lp).ok();
    let num = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    Some(vec![
        p.to_string(),
        q.to_string(),
        r.to_string(),
        lp.s().to_string(),
        lp.t().to_string(),
        lp.tprime().to_string(),
        num(d.map(|d| d.b)),
        num(d.map(|d| d.a)),
        num(d.map(|d| d.big_p)),
        num(d.and_then(|d| d.mu)),
        num(d.and_then(|d| d.nu)),
        rec.name.clone(),
        rec.residual.map(|r| r.to_string()).unwrap_or_else(|| "inf".into()),
    ])
}
