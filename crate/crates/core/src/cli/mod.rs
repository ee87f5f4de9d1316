//! Command line front end: JSON system descriptions and the text reports printed by the binary.
//!
//! Vectors, points and Gram matrices are read in ambient coordinates; the lattice basis maps
//! lattice coordinates to ambient ones. Polynomials are reported in ambient variables.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::affineseries::{affine_eval, AffineSystem};
use crate::arrangement::{is_regular, tope_of, System};
use crate::berseries::{ber_eval, ber_tope_poly, fourier_partial_sum_q};
use crate::error::{Error, Result};
use crate::eulermaclaurin::{em_verify, TestFunction};
use crate::exactlinalg::{fmt_vec, parse_rat, parse_vec, to_f64, to_q, MatQ, Rat};
use crate::polynomials::MultiPolyQ;
use crate::splines::{decomposition_terms, sufficient_radius, Gram};
use crate::wallcross::{jump, jump_by_subtraction};

/// One entry of the list: a vector, how many times it occurs, and an optional affine constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiEntry {
    pub vector: Vec<String>,
    #[serde(default = "one_u32")]
    pub multiplicity: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<String>,
}

fn one_u32() -> u32 {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDescription {
    pub dimension: usize,
    /// Rows are the lattice basis vectors; the standard lattice when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_basis: Option<Vec<Vec<String>>>,
    pub phi: Vec<PhiEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<String>>>,
}

impl SystemDescription {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("malformed system description: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn load(&self) -> Result<Loaded> {
        let r = self.dimension;
        if r == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        let basis: Vec<Vec<Rat>> = match &self.lattice_basis {
            Some(rows) => rows.iter().map(|row| parse_row(row, r)).collect::<Result<_>>()?,
            None => (0..r).map(|i| (0..r).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect(),
        };
        if basis.len() != r {
            return Err(Error::DimensionMismatch { expected: r, found: basis.len() });
        }
        let mut phi = Vec::new();
        let mut z = Vec::new();
        let any_z = self.phi.iter().any(|e| e.z.is_some());
        for e in &self.phi {
            if e.multiplicity == 0 {
                return Err(Error::InvalidInput("multiplicities must be at least 1".into()));
            }
            let v = parse_row(&e.vector, r)?;
            let zv = match &e.z {
                Some(s) => parse_rat(s)?,
                None => Rat::zero(),
            };
            for _ in 0..e.multiplicity {
                phi.push(v.clone());
                z.push(zv.clone());
            }
        }
        let sys = System::with_lattice(&phi, &basis, false)?;
        let gram = match &self.gram {
            Some(rows) => {
                let m: Vec<Vec<Rat>> = rows.iter().map(|row| parse_row(row, r)).collect::<Result<_>>()?;
                if m.len() != r {
                    return Err(Error::DimensionMismatch { expected: r, found: m.len() });
                }
                Some(MatQ::from_rows(&m))
            }
            None => None,
        };
        let gram = Gram::new(sys.gram_to_lattice(&gram.unwrap_or_else(|| MatQ::identity(r))))?;
        Ok(Loaded { sys, z: any_z.then_some(z), gram })
    }
}

fn parse_row(row: &[String], r: usize) -> Result<Vec<Rat>> {
    if row.len() != r {
        return Err(Error::DimensionMismatch { expected: r, found: row.len() });
    }
    row.iter().map(|s| parse_rat(s)).collect()
}

/// A validated description: the system in lattice coordinates plus the optional data.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub sys: System,
    pub z: Option<Vec<Rat>>,
    /// Gram matrix in lattice coordinates.
    pub gram: Gram,
}

impl Loaded {
    fn point(&self, text: &str) -> Result<Vec<Rat>> {
        let v = parse_vec(text)?;
        if v.len() != self.sys.rank() {
            return Err(Error::DimensionMismatch { expected: self.sys.rank(), found: v.len() });
        }
        Ok(self.sys.to_lattice_coords(&v))
    }

    fn ambient(&self, p: &MultiPolyQ) -> MultiPolyQ {
        self.sys.poly_to_ambient(p)
    }
}

fn fmt_complex(c: Complex64) -> String {
    format!("{:.15e} {:+.15e}i", c.re, c.im)
}

/// Tope key, tope polynomial and value at `at`.
pub fn cmd_ber(desc: &SystemDescription, at: &str) -> Result<String> {
    let l = desc.load()?;
    let v = l.point(at)?;
    let tope = tope_of(&l.sys, &v)?;
    let key: Vec<String> = tope.key.iter().map(|k| k.to_string()).collect();
    let p = ber_tope_poly(&l.sys, &v)?;
    let value = p.eval(&v);
    Ok(format!("tope: [{}]\npolynomial: {}\nvalue: {}\n", key.join(","), l.ambient(&p), value))
}

/// Jump between the topes of `at1` and `at2`, by residues and by subtraction.
pub fn cmd_jump(desc: &SystemDescription, at1: &str, at2: &str) -> Result<String> {
    let l = desc.load()?;
    let t1 = tope_of(&l.sys, &l.point(at1)?)?;
    let t2 = tope_of(&l.sys, &l.point(at2)?)?;
    let j = jump(&l.sys, &t1, &t2)?;
    let check = jump_by_subtraction(&l.sys, &t1, &t2)?;
    if j != check {
        return Err(Error::Internal(format!("jump {} differs from the difference {}", l.ambient(&j), l.ambient(&check))));
    }
    Ok(format!("jump: {}\nsubtraction check: ok\n", l.ambient(&j)))
}

/// Per-term table of the decomposition at `at`, the total, and the direct value.
pub fn cmd_decompose(desc: &SystemDescription, beta: &str, at: &str, radius: Option<&str>) -> Result<String> {
    let l = desc.load()?;
    let v = l.point(at)?;
    let b = l.point(beta)?;
    let radius = match radius {
        Some(s) => parse_rat(s)?,
        None => sufficient_radius(&v, &b, &l.gram),
    };
    let terms = decomposition_terms(&l.sys, &b, &v, &radius, &l.gram)?;
    let mut out = String::new();
    out.push_str("affine subspace\tvalue\tpolynomial\n");
    let mut total = Rat::zero();
    for (t, value) in &terms {
        let poly = l.ambient(&t.polynomial(&l.sys, &v)?);
        let lambda = l.sys.to_ambient(&to_q(&t.lambda));
        let span: Vec<String> = t.subspace.basis_q().iter().map(|d| fmt_vec(&l.sys.to_ambient(d))).collect();
        out.push_str(&format!("{} + span[{}]\t{}\t{}\n", fmt_vec(&lambda), span.join(", "), value, poly));
        total += value;
    }
    let direct = ber_eval(&l.sys, &v)?;
    let status = if direct == total { "match" } else { "MISMATCH" };
    out.push_str(&format!("terms: {}\ntotal: {}\nber: {} ({})\n", terms.len(), total, direct, status));
    if direct != total {
        return Err(Error::Internal(out));
    }
    Ok(out)
}

/// Euler-MacLaurin check with `f = exp(-a |v - c|^2)`; `gaussian` is `"a,c1,...,cr"`, lattice coordinates.
pub fn cmd_em(desc: &SystemDescription, gaussian: &str, radius: u32, step: f64) -> Result<String> {
    let l = desc.load()?;
    let parts = parse_vec(gaussian)?;
    if parts.len() != l.sys.rank() + 1 {
        return Err(Error::DimensionMismatch { expected: l.sys.rank() + 1, found: parts.len() });
    }
    let f = TestFunction::gaussian(parts[1..].to_vec(), parts[0].clone())?;
    let rep = em_verify(&l.sys, &f, radius, step)?;
    Ok(format!("lhs: {:.15e}\nrhs: {:.15e}\nabs_error: {:.3e}\n", rep.lhs, rep.rhs, rep.abs_error))
}

/// Symmetric partial Fourier sum over `|γ_i| <= n`, next to the exact value when available.
pub fn cmd_fourier(desc: &SystemDescription, at: &str, n: i64, cesaro: bool) -> Result<String> {
    let l = desc.load()?;
    let v = l.point(at)?;
    let s = fourier_partial_sum_q(&l.sys, &v, n, cesaro)?;
    let mut out = format!("partial_sum: {}\n", fmt_complex(s));
    if l.sys.spans() && is_regular(&l.sys, &v)? {
        let exact = ber_eval(&l.sys, &v)?;
        out.push_str(&format!("exact: {} ({:.15e})\n", exact, to_f64(&exact)));
    }
    Ok(out)
}

/// Value of the affine series at `at`; constants default to 0.
pub fn cmd_affine(desc: &SystemDescription, at: &str) -> Result<String> {
    let l = desc.load()?;
    let v = l.point(at)?;
    let z = l.z.clone().unwrap_or_else(|| vec![Rat::zero(); l.sys.len()]);
    let asys = AffineSystem::new(l.sys.clone(), z)?;
    let value = affine_eval(&asys, &v)?;
    Ok(format!("value: {}\n", fmt_complex(value)))
}

/// CSV samples `t_i = a + (b - a) i / (n - 1)` of a one-dimensional series; at a wall the mean of
/// the two one-sided limits is reported, which is where the Fourier series converges.
pub fn cmd_plot1d(desc: &SystemDescription, range: &str, samples: usize) -> Result<String> {
    let l = desc.load()?;
    if l.sys.rank() != 1 {
        return Err(Error::InvalidInput("plot1d needs a one-dimensional system".into()));
    }
    let (a, b) = range
        .split_once("..")
        .ok_or_else(|| Error::InvalidInput(format!("range '{range}' is not of the form a..b")))?;
    let (a, b) = (parse_rat(a)?, parse_rat(b)?);
    if samples < 2 || b <= a {
        return Err(Error::InvalidInput("need at least two samples on a nonempty range".into()));
    }
    let mut out = String::from("t,value\n");
    let last = Rat::from_integer((samples as i64 - 1).into());
    for i in 0..samples {
        let t = &a + (&b - &a) * Rat::from_integer((i as i64).into()) / &last;
        let x = l.sys.to_lattice_coords(&[t.clone()]);
        let value = if is_regular(&l.sys, &x)? {
            ber_eval(&l.sys, &x)?
        } else {
            // walls sit at integers in lattice coordinates
            let eps = Rat::new(1.into(), 4.into());
            let lo = ber_tope_poly(&l.sys, &[&x[0] - &eps])?.eval(&x);
            let hi = ber_tope_poly(&l.sys, &[&x[0] + &eps])?.eval(&x);
            (lo + hi) / Rat::from_integer(2.into())
        };
        out.push_str(&format!("{},{}\n", to_f64(&t), to_f64(&value)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    const A2: &str = r#"{"dimension": 2, "phi": [{"vector": ["1","0"]}, {"vector": ["0","1"]}, {"vector": ["1","1"]}]}"#;

    #[test]
    fn round_trip() {
        let d = SystemDescription::parse(A2).unwrap();
        let again = SystemDescription::parse(&d.to_json()).unwrap();
        assert_eq!(d, again);
        let with_all = r#"{"dimension": 1, "lattice_basis": [["1/2"]], "phi": [{"vector": ["1"], "multiplicity": 3, "z": "1/3"}], "gram": [["2"]]}"#;
        let d = SystemDescription::parse(with_all).unwrap();
        assert_eq!(SystemDescription::parse(&d.to_json()).unwrap(), d);
        assert!(SystemDescription::parse(r#"{"dimension": 1, "phi": [], "extra": 1}"#).is_err());
    }

    #[test]
    fn validation() {
        let zero_mult = r#"{"dimension": 1, "phi": [{"vector": ["1"], "multiplicity": 0}]}"#;
        assert!(SystemDescription::parse(zero_mult).unwrap().load().is_err());
        let bad_dim = r#"{"dimension": 2, "phi": [{"vector": ["1"]}]}"#;
        assert!(matches!(SystemDescription::parse(bad_dim).unwrap().load(), Err(Error::DimensionMismatch { .. })));
        let not_integral = r#"{"dimension": 1, "phi": [{"vector": ["1/2"]}]}"#;
        assert!(matches!(SystemDescription::parse(not_integral).unwrap().load(), Err(Error::NotIntegral(_))));
    }

    #[test]
    fn ber_output() {
        let d = SystemDescription::parse(A2).unwrap();
        let out = cmd_ber(&d, "1/5,1/2").unwrap();
        let expect = (&(&MultiPolyQ::linear(&[Rat::one(), -Rat::from_integer(2.into())], Rat::one())
            * &MultiPolyQ::linear(&[Rat::one(), Rat::one()], -Rat::one()))
            * &MultiPolyQ::linear(&[Rat::from_integer(2.into()), -Rat::one()], Rat::zero()))
            .scale(&Rat::new((-1).into(), 6.into()));
        assert!(out.contains(&format!("polynomial: {expect}")), "{out}");
        assert!(matches!(cmd_ber(&d, "1/2,1/2"), Err(Error::Irregular(_))));
    }
}
