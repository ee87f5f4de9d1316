use num_complex::Complex64;
use rayon::prelude::*;

use super::series::series;
use crate::arrangement::{directions_of, AdmissibleSubspace, System};
use crate::error::{Error, Result};
use crate::exactlinalg::{dot_z, to_f64, Int, LatticeQuotient, Rat};
use crate::polynomials::{MultiPolyQ, PiPolynomial};

/// `(Φ \ s)` projected to `V/s`, with the image of `Λ` normalized to `Z^{r-d}`.
#[derive(Clone, Debug)]
pub struct QuotientSystem {
    pub system: System,
    pub chart: LatticeQuotient,
}

impl QuotientSystem {
    pub fn project(&self, v: &[Rat]) -> Vec<Rat> {
        self.chart.project(v)
    }
}

pub fn quotient_system(sys: &System, s: &AdmissibleSubspace) -> Result<QuotientSystem> {
    let (system, chart) = sys.projection(&s.basis_q())?;
    Ok(QuotientSystem { system, chart })
}

/// Tope polynomial of `Σ_γ θ(L)(γ) e^{2iπ⟨v,γ⟩}`, `θ(L) = 1/∏⟨a,γ⟩`, with explicit powers of `2iπ`.
pub fn theta_series_tope_poly(list: &[Vec<Int>], witness: &[Rat]) -> Result<PiPolynomial> {
    if witness.is_empty() {
        return Err(Error::InvalidInput("the list must span a space of positive dimension".into()));
    }
    let h = directions_of(list);
    let p = series(&h, list, witness)?;
    Ok(PiPolynomial::single(list.len() as i32, p))
}

/// Tope polynomial of `Σ_γ P(γ) θ(L)(γ) e^{2iπ⟨v,γ⟩}`; the monomial `γ^α` acts as `(2iπ)^{-|α|} ∂^α`.
pub fn poly_prefactor_series(p: &MultiPolyQ, list: &[Vec<Int>], witness: &[Rat]) -> Result<PiPolynomial> {
    let base = theta_series_tope_poly(list, witness)?;
    let (k, b) = base.as_single().map(|(k, b)| (k, b.clone())).unwrap_or((list.len() as i32, MultiPolyQ::zero(witness.len())));
    let mut out = PiPolynomial::zero(witness.len());
    for (alpha, c) in p.terms() {
        let deg: u32 = alpha.iter().sum();
        out.add_part(k - deg as i32, &b.partial(alpha).scale(c));
    }
    Ok(out)
}

/// Symmetric box partial sum of the defining Fourier series at `v`; a numeric oracle only.
/// With `cesaro` the terms are damped by `∏(1 - |γ_i|/(N+1))`, which helps conditionally
/// convergent cases.
pub fn fourier_partial_sum(sys: &System, v: &[f64], radius: i64, cesaro: bool) -> Result<Complex64> {
    let r = sys.rank();
    if sys.is_empty() || r == 0 {
        return Err(Error::InvalidInput("the series of an empty list is a delta distribution".into()));
    }
    if v.len() != r {
        return Err(Error::DimensionMismatch { expected: r, found: v.len() });
    }
    if sys.contains_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let phi: Vec<Vec<i64>> = sys
        .phi()
        .iter()
        .map(|p| p.iter().map(|x| i64::try_from(x).expect("small entries")).collect())
        .collect();
    let side = (2 * radius + 1) as usize;
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    // sum over slices of the first coordinate in parallel, then combine in order
    let slices: Vec<Complex64> = (0..side)
        .into_par_iter()
        .map(|first| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut g = vec![0i64; r];
            g[0] = first as i64 - radius;
            let inner = side.pow(r as u32 - 1);
            for idx in 0..inner {
                let mut rem = idx;
                for c in (1..r).rev() {
                    g[c] = (rem % side) as i64 - radius;
                    rem /= side;
                }
                let mut denom = Complex64::new(1.0, 0.0);
                let mut regular = true;
                for p in &phi {
                    let d: i64 = p.iter().zip(&g).map(|(a, b)| a * b).sum();
                    if d == 0 {
                        regular = false;
                        break;
                    }
                    denom *= two_pi_i * d as f64;
                }
                if !regular {
                    continue;
                }
                let phase: f64 = v.iter().zip(&g).map(|(x, &k)| x * k as f64).sum();
                let mut w = 1.0;
                if cesaro {
                    for &k in &g {
                        w *= 1.0 - (k.abs() as f64) / (radius as f64 + 1.0);
                    }
                }
                acc += (two_pi_i * phase).exp() / denom * w;
            }
            acc
        })
        .collect();
    Ok(slices.into_iter().sum())
}

pub fn fourier_partial_sum_q(sys: &System, v: &[Rat], radius: i64, cesaro: bool) -> Result<Complex64> {
    let vf: Vec<f64> = v.iter().map(to_f64).collect();
    fourier_partial_sum(sys, &vf, radius, cesaro)
}

/// `⟨φ, γ⟩` helper shared with tests.
pub fn pairing(a: &[Int], b: &[Int]) -> Int {
    dot_z(a, b)
}
