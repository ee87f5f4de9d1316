use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::exactlinalg::{factorial, from_int, to_q, Int, Rat};
use crate::polynomials::MultiPolyQ;

/// Truncated Laurent series in `z` whose coefficients are polynomials in `(v, x)`:
/// the first `r` variables are `v`, the last `r` are the auxiliary `x`.
/// Terms of `x`-degree above `max_x_degree` are discarded on multiplication.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedLaurent {
    pub r: usize,
    pub max_x_degree: u32,
    pub coeffs: BTreeMap<i32, MultiPolyQ>,
}

impl TruncatedLaurent {
    pub fn constant(r: usize, max_x_degree: u32, c: MultiPolyQ) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        TruncatedLaurent { r, max_x_degree, coeffs }
    }

    fn truncate(&self, p: &MultiPolyQ) -> MultiPolyQ {
        let mut out = MultiPolyQ::zero(2 * self.r);
        for (e, c) in p.terms() {
            if e[self.r..].iter().sum::<u32>() <= self.max_x_degree {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &TruncatedLaurent) -> TruncatedLaurent {
        let mut coeffs: BTreeMap<i32, MultiPolyQ> = BTreeMap::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let prod = self.truncate(&(a * b));
                if prod.is_zero() {
                    continue;
                }
                let slot = coeffs.entry(i + j).or_insert_with(|| MultiPolyQ::zero(2 * self.r));
                *slot = &*slot + &prod;
            }
        }
        coeffs.retain(|_, p| !p.is_zero());
        TruncatedLaurent { r: self.r, max_x_degree: self.max_x_degree, coeffs }
    }

    pub fn min_z_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn coeff(&self, k: i32) -> MultiPolyQ {
        self.coeffs.get(&k).cloned().unwrap_or_else(|| MultiPolyQ::zero(2 * self.r))
    }
}

/// `x`-part of a covector pairing `⟨ψ, x⟩` inside the `(v, x)` ring.
fn x_form(psi: &[Int], r: usize) -> MultiPolyQ {
    let mut coeffs = vec![Rat::zero(); 2 * r];
    for (i, c) in psi.iter().enumerate() {
        coeffs[r + i] = from_int(c);
    }
    MultiPolyQ::linear(&coeffs, Rat::zero())
}

/// `1/⟨ψ, x + zE⟩ = Σ_m (-1)^m ⟨ψ,x⟩^m / (a^{m+1} z^{m+1})` with `a = ⟨ψ, E⟩`.
pub fn inverse_form(psi: &[Int], a: &Rat, r: usize, max_x_degree: u32) -> TruncatedLaurent {
    let l = x_form(psi, r);
    let mut coeffs = BTreeMap::new();
    let mut power = MultiPolyQ::one(2 * r);
    let mut a_pow = a.clone();
    for m in 0..=max_x_degree {
        let sign = if m % 2 == 0 { Rat::one() } else { -Rat::one() };
        coeffs.insert(-(m as i32) - 1, power.scale(&(sign / &a_pow)));
        power = &power * &l;
        a_pow *= a;
    }
    TruncatedLaurent { r, max_x_degree, coeffs }
}

/// `e^{⟨v, x⟩}` truncated at `x`-degree `max_x_degree`.
pub fn exp_vx(r: usize, max_x_degree: u32) -> TruncatedLaurent {
    let mut vx = MultiPolyQ::zero(2 * r);
    for i in 0..r {
        let mut e = vec![0u32; 2 * r];
        e[i] = 1;
        e[r + i] = 1;
        vx.add_term(e, Rat::one());
    }
    let mut total = MultiPolyQ::zero(2 * r);
    let mut power = MultiPolyQ::one(2 * r);
    for k in 0..=max_x_degree {
        total = &total + &power.scale(&(Rat::one() / from_int(&factorial(k))));
        power = &power * &vx;
    }
    TruncatedLaurent::constant(r, max_x_degree, total)
}

/// `Res_{z=0} P(∂_x) [ e^{⟨v, x + zE⟩} / ∏_ψ ⟨ψ, x + zE⟩ ]` at `x = 0`, a polynomial in `v`.
/// `p` is a polynomial on `V` (variables `v`), read as a differential operator in `x`.
pub fn residue_kernel(p: &MultiPolyQ, psi: &[Vec<Int>], e: &[Rat]) -> Option<MultiPolyQ> {
    let r = e.len();
    let d = p.degree().unwrap_or(0);
    let mut series = exp_vx(r, d);
    for s in psi {
        let a: Rat = to_q(s).iter().zip(e).fold(Rat::zero(), |acc, (x, y)| acc + x * y);
        if a.is_zero() {
            return None;
        }
        series = series.mul(&inverse_form(s, &a, r, d));
    }
    // e^{z⟨v,E⟩}: the z^{-1} coefficient collects ⟨v,E⟩^j/j! against z^{-1-j}
    let ve = MultiPolyQ::linear(&e.iter().cloned().chain(std::iter::repeat_n(Rat::zero(), r)).collect::<Vec<_>>(), Rat::zero());
    let mut residue = MultiPolyQ::zero(2 * r);
    let lowest = series.min_z_exponent().unwrap_or(0);
    let mut ve_pow = MultiPolyQ::one(2 * r);
    for j in 0..=(-1 - lowest).max(-1) {
        let c = series.coeff(-1 - j);
        if !c.is_zero() {
            residue = &residue + &(&c * &ve_pow).scale(&(Rat::one() / from_int(&factorial(j as u32))));
        }
        ve_pow = &ve_pow * &ve;
    }
    // apply P(∂_x) and set x = 0: x^α contributes α! times the coefficient of v^α in P
    let mut out = MultiPolyQ::zero(r);
    for (exp, c) in residue.terms() {
        let alpha = &exp[r..];
        let pc = p.coeff(alpha);
        if pc.is_zero() {
            continue;
        }
        let fact: Int = alpha.iter().map(|&k| factorial(k)).product();
        out.add_term(exp[..r].to_vec(), c * &pc * from_int(&fact));
    }
    Some(out)
}
