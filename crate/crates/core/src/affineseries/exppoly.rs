use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::Zero;

use crate::exactlinalg::{to_f64, Rat};

/// `Σ_w e^{2iπ w t} p_w(t)` in one variable; polynomial coefficients ascending.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExpPolyC {
    terms: BTreeMap<Rat, Vec<Complex64>>,
}

impl ExpPolyC {
    pub fn zero() -> Self {
        ExpPolyC::default()
    }

    pub fn single(freq: Rat, coeffs: Vec<Complex64>) -> Self {
        let mut e = ExpPolyC::zero();
        e.add_term(freq, &coeffs);
        e
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, &Vec<Complex64>)> {
        self.terms.iter()
    }

    fn add_term(&mut self, freq: Rat, coeffs: &[Complex64]) {
        let slot = self.terms.entry(freq).or_default();
        if slot.len() < coeffs.len() {
            slot.resize(coeffs.len(), Complex64::zero());
        }
        for (s, c) in slot.iter_mut().zip(coeffs) {
            *s += c;
        }
    }

    pub fn sub(&self, other: &ExpPolyC) -> ExpPolyC {
        let mut out = self.clone();
        for (w, p) in &other.terms {
            let neg: Vec<Complex64> = p.iter().map(|c| -c).collect();
            out.add_term(w.clone(), &neg);
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> ExpPolyC {
        ExpPolyC { terms: self.terms.iter().map(|(w, p)| (w.clone(), p.iter().map(|x| x * c).collect())).collect() }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|(w, p)| {
                let poly = p.iter().rev().fold(Complex64::zero(), |acc, c| acc * t + c);
                Complex64::from_polar(1.0, 2.0 * PI * to_f64(w) * t) * poly
            })
            .sum()
    }

    /// Evaluation at a rational point, reducing the phase `w t` modulo 1 exactly.
    pub fn eval_q(&self, t: &Rat) -> Complex64 {
        let tf = to_f64(t);
        self.terms
            .iter()
            .map(|(w, p)| {
                let wt = w * t;
                let frac = &wt - wt.floor();
                let poly = p.iter().rev().fold(Complex64::zero(), |acc, c| acc * tf + c);
                Complex64::from_polar(1.0, 2.0 * PI * to_f64(&frac)) * poly
            })
            .sum()
    }

    /// `d/dt`.
    pub fn derivative(&self) -> ExpPolyC {
        let mut out = ExpPolyC::zero();
        for (w, p) in &self.terms {
            let a = Complex64::new(0.0, 2.0 * PI * to_f64(w));
            let mut d: Vec<Complex64> = p.iter().map(|c| c * a).collect();
            for j in 1..p.len() {
                d[j - 1] += p[j] * j as f64;
            }
            out.add_term(w.clone(), &d);
        }
        out
    }

    /// Largest coefficient modulus, after merging equal frequencies.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().flat_map(|p| p.iter().map(|c| c.norm())).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ExpPolyC, tol: f64) -> bool {
        self.sub(other).max_abs_coeff() <= tol
    }
}

impl std::fmt::Display for ExpPolyC {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (w, p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let poly: Vec<String> = p
                .iter()
                .enumerate()
                .filter(|(_, c)| c.norm() > 0.0)
                .map(|(j, c)| match j {
                    0 => format!("({:.12}{:+.12}i)", c.re, c.im),
                    1 => format!("({:.12}{:+.12}i)*t", c.re, c.im),
                    _ => format!("({:.12}{:+.12}i)*t^{j}", c.re, c.im),
                })
                .collect();
            let poly = if poly.is_empty() { "0".to_string() } else { poly.join(" + ") };
            if w.is_zero() {
                write!(f, "{poly}")?;
            } else {
                write!(f, "exp(2*pi*i*({w})*t)*[{poly}]")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
