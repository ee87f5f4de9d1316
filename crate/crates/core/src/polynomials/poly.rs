use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactlinalg::{from_int, to_f64, MatQ, Rat};

/// Sparse polynomial in `nvars` variables with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPolyQ {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MultiPolyQ {
    pub fn zero(nvars: usize) -> Self {
        MultiPolyQ { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rat::one())
    }

    pub fn monomial(exp: Vec<u32>, c: Rat) -> Self {
        let mut p = Self::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// `Σ coeffs[i] * v_i + c`.
    pub fn linear(coeffs: &[Rat], c: Rat) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(n, c);
        for (i, a) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, a.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &[u32]) -> Rat {
        self.terms.get(exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: Rat) {
        assert_eq!(exp.len(), self.nvars, "exponent length");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPolyQ {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, v: &[Rat]) -> Rat {
        assert_eq!(v.len(), self.nvars, "evaluation point dimension");
        let mut total = Rat::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (x, &k) in v.iter().zip(e) {
                if k > 0 {
                    m *= num_traits::pow(x.clone(), k as usize);
                }
            }
            total += m;
        }
        total
    }

    pub fn eval_f64(&self, v: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                to_f64(c) * v.iter().zip(e).map(|(x, &k)| x.powi(k as i32)).product::<f64>()
            })
            .sum()
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c * Rat::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Derivative along the constant vector `dir`.
    pub fn directional_derivative(&self, dir: &[Rat]) -> Self {
        let mut out = Self::zero(self.nvars);
        for (i, d) in dir.iter().enumerate() {
            if !d.is_zero() {
                out = &out + &self.derivative(i).scale(d);
            }
        }
        out
    }

    /// `∂^α`.
    pub fn partial(&self, alpha: &[u32]) -> Self {
        let mut p = self.clone();
        for (i, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                p = p.derivative(i);
            }
        }
        p
    }

    /// Substitute each variable by a polynomial (all in a common variable count).
    pub fn substitute(&self, images: &[MultiPolyQ]) -> Self {
        assert_eq!(images.len(), self.nvars, "substitution arity");
        let m = images.first().map_or(0, |p| p.nvars);
        let maxdeg: Vec<u32> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<MultiPolyQ>> = images
            .iter()
            .zip(&maxdeg)
            .map(|(p, &d)| {
                let mut v = vec![MultiPolyQ::one(m)];
                for k in 1..=d as usize {
                    let next = &v[k - 1] * p;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = MultiPolyQ::zero(m);
        for (e, c) in &self.terms {
            let mut t = MultiPolyQ::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Composition `f(A v + b)`; `A` has `nvars` rows.
    pub fn affine_substitute(&self, a: &MatQ, b: &[Rat]) -> Self {
        assert_eq!(a.rows(), self.nvars, "affine map rows");
        let images: Vec<MultiPolyQ> =
            (0..a.rows()).map(|i| MultiPolyQ::linear(&a.row(i), b[i].clone())).collect();
        if images.is_empty() {
            return MultiPolyQ::constant(a.cols(), self.coeff(&[]));
        }
        self.substitute(&images)
    }

    /// `f(v + shift)`.
    pub fn translate(&self, shift: &[Rat]) -> Self {
        self.affine_substitute(&MatQ::identity(self.nvars), shift)
    }

    /// Lossless reinterpretation as a polynomial in more variables (appended, unused).
    pub fn pad_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        MultiPolyQ {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2.resize(nvars, 0);
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Rename variables: `f` printed with explicit names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut order: Vec<(&Vec<u32>, &Rat)> = self.terms.iter().collect();
        order.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (k, (e, c)) in order.into_iter().enumerate() {
            let neg = c.is_negative();
            let body = term_body(e, &c.abs(), names);
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }

    pub fn default_names(nvars: usize) -> Vec<String> {
        if nvars == 1 {
            vec!["t".into()]
        } else {
            (1..=nvars).map(|i| format!("v{i}")).collect()
        }
    }
}

fn term_body(e: &[u32], c: &Rat, names: &[String]) -> String {
    let mono: Vec<String> = e
        .iter()
        .zip(names)
        .filter(|(k, _)| **k > 0)
        .map(|(&k, n)| if k == 1 { n.clone() } else { format!("{n}^{k}") })
        .collect();
    let num = c.numer();
    let den = c.denom();
    let mut s = String::new();
    if mono.is_empty() {
        s.push_str(&num.to_string());
    } else {
        if !num.is_one() {
            s.push_str(&num.to_string());
            s.push('*');
        }
        s.push_str(&mono.join("*"));
    }
    if !den.is_one() {
        s.push('/');
        s.push_str(&den.to_string());
    }
    s
}

impl fmt::Display for MultiPolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&Self::default_names(self.nvars)))
    }
}

impl fmt::Debug for MultiPolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPolyQ({})", self)
    }
}

impl Add for &MultiPolyQ {
    type Output = MultiPolyQ;
    fn add(self, rhs: &MultiPolyQ) -> MultiPolyQ {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPolyQ {
    type Output = MultiPolyQ;
    fn sub(self, rhs: &MultiPolyQ) -> MultiPolyQ {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MultiPolyQ {
    type Output = MultiPolyQ;
    fn neg(self) -> MultiPolyQ {
        self.scale(&-Rat::one())
    }
}

impl Mul for &MultiPolyQ {
    type Output = MultiPolyQ;
    fn mul(self, rhs: &MultiPolyQ) -> MultiPolyQ {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = MultiPolyQ::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Add for MultiPolyQ {
    type Output = MultiPolyQ;
    fn add(self, rhs: MultiPolyQ) -> MultiPolyQ {
        &self + &rhs
    }
}

impl Sub for MultiPolyQ {
    type Output = MultiPolyQ;
    fn sub(self, rhs: MultiPolyQ) -> MultiPolyQ {
        &self - &rhs
    }
}

impl Mul for MultiPolyQ {
    type Output = MultiPolyQ;
    fn mul(self, rhs: MultiPolyQ) -> MultiPolyQ {
        &self * &rhs
    }
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rat> {
    let mut b = vec![Rat::one()];
    for m in 1..=n {
        let mut s = Rat::zero();
        for (j, bj) in b.iter().enumerate() {
            s += from_int(&crate::exactlinalg::binomial(m as u32 + 1, j as u32)) * bj;
        }
        b.push(-s / Rat::from_integer((m as i64 + 1).into()));
    }
    b
}

/// `B(k, t)` as a univariate polynomial.
pub fn bernoulli_polynomial(k: u32) -> MultiPolyQ {
    let b = bernoulli_numbers(k as usize);
    let mut p = MultiPolyQ::zero(1);
    for j in 0..=k {
        let c = from_int(&crate::exactlinalg::binomial(k, j)) * &b[j as usize];
        p.add_term(vec![k - j], c);
    }
    p
}

/// `P(∂) f`, where `P` is a polynomial in the dual variables.
pub fn apply_diff_operator(p: &MultiPolyQ, f: &MultiPolyQ) -> MultiPolyQ {
    assert_eq!(p.nvars(), f.nvars(), "variable count mismatch");
    let mut out = MultiPolyQ::zero(f.nvars());
    for (alpha, c) in p.terms() {
        out = &out + &f.partial(alpha).scale(c);
    }
    out
}

/// All exponent vectors of length `n` with total degree at most `d`, ordered by degree then lex.
pub fn exponents_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.iter().sum::<u32>().cmp(&b.iter().sum()).then_with(|| a.cmp(b)));
    out
}

/// Recover a polynomial of total degree `<= d` from its values on `center + step*α`, `|α| <= d`.
/// `values` is called at each node in the order of [`exponents_up_to`].
pub fn interpolate<F>(n: usize, d: u32, center: &[Rat], step: &Rat, mut values: F) -> Result<MultiPolyQ>
where
    F: FnMut(&[Rat]) -> Result<Rat>,
{
    let exps = exponents_up_to(n, d);
    let m = exps.len();
    let mut a = MatQ::zeros(m, m);
    let mut rhs = Vec::with_capacity(m);
    for (i, alpha) in exps.iter().enumerate() {
        let node: Vec<Rat> =
            (0..n).map(|k| &center[k] + step * Rat::from_integer(alpha[k].into())).collect();
        rhs.push(values(&node)?);
        for (j, beta) in exps.iter().enumerate() {
            a[(i, j)] = alpha
                .iter()
                .zip(beta)
                .map(|(&x, &y)| num_traits::pow(Rat::from_integer(x.into()), y as usize))
                .product();
        }
    }
    let coeffs = a
        .solve(&rhs)
        .ok_or_else(|| Error::Internal("interpolation system is singular".into()))?;
    let mut local = MultiPolyQ::zero(n);
    for (e, c) in exps.into_iter().zip(coeffs) {
        local.add_term(e, c);
    }
    // local variable u = (v - center) / step
    let inv = Rat::one() / step;
    let mut scale = MatQ::zeros(n, n);
    for i in 0..n {
        scale[(i, i)] = inv.clone();
    }
    let shift: Vec<Rat> = center.iter().map(|c| -c * &inv).collect();
    Ok(local.affine_substitute(&scale, &shift))
}
