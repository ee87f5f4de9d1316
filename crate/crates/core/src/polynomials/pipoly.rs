use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use super::poly::MultiPolyQ;
use crate::exactlinalg::Rat;

/// `Σ_k (2iπ)^k · p_k(v)`.
#[derive(Clone, PartialEq, Eq)]
pub struct PiPolynomial {
    nvars: usize,
    parts: BTreeMap<i32, MultiPolyQ>,
}

impl PiPolynomial {
    pub fn zero(nvars: usize) -> Self {
        PiPolynomial { nvars, parts: BTreeMap::new() }
    }

    pub fn single(power: i32, p: MultiPolyQ) -> Self {
        let mut out = Self::zero(p.nvars());
        out.add_part(power, &p);
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add_part(&mut self, power: i32, p: &MultiPolyQ) {
        assert_eq!(p.nvars(), self.nvars, "variable count mismatch");
        let cur = self.parts.remove(&power).unwrap_or_else(|| MultiPolyQ::zero(self.nvars));
        let sum = &cur + p;
        if !sum.is_zero() {
            self.parts.insert(power, sum);
        }
    }

    pub fn part(&self, power: i32) -> MultiPolyQ {
        self.parts.get(&power).cloned().unwrap_or_else(|| MultiPolyQ::zero(self.nvars))
    }

    pub fn parts(&self) -> impl Iterator<Item = (&i32, &MultiPolyQ)> {
        self.parts.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.nvars);
        for (k, p) in &self.parts {
            out.add_part(*k, &p.scale(c));
        }
        out
    }

    /// Multiply by `(2iπ)^k`.
    pub fn shift_power(&self, k: i32) -> Self {
        PiPolynomial {
            nvars: self.nvars,
            parts: self.parts.iter().map(|(j, p)| (j + k, p.clone())).collect(),
        }
    }

    /// The unique part when only one power occurs.
    pub fn as_single(&self) -> Option<(i32, &MultiPolyQ)> {
        if self.parts.len() == 1 {
            self.parts.iter().next().map(|(k, p)| (*k, p))
        } else {
            None
        }
    }
}

impl Add for &PiPolynomial {
    type Output = PiPolynomial;
    fn add(self, rhs: &PiPolynomial) -> PiPolynomial {
        let mut out = self.clone();
        for (k, p) in &rhs.parts {
            out.add_part(*k, p);
        }
        out
    }
}

impl fmt::Display for PiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        let pieces: Vec<String> =
            self.parts.iter().rev().map(|(k, p)| format!("(2iπ)^{k}*({p})")).collect();
        f.write_str(&pieces.join(" + "))
    }
}

impl fmt::Debug for PiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PiPolynomial({self})")
    }
}
