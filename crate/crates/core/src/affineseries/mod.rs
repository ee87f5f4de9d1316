//! Series with affine denominators `⟨φ,γ⟩ + z`, evaluated in complex floating point.

mod exppoly;

pub use exppoly::ExpPolyC;

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arrangement::{is_regular, System};
use crate::error::{Error, Result};
use crate::exactlinalg::{
    binomial, coset_representatives, dot_z, dot_zq, factorial, floor, fmt_vec, from_int, lattice_quotient,
    primitive_direction, rank_of_z, to_f64, to_q, Int, MatQ, Rat,
};
use crate::polynomials::bernoulli_polynomial;

/// One affine element `[φ, z]`, standing for the form `γ ↦ ⟨φ,γ⟩ + z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePair {
    pub phi: Vec<Int>,
    pub z: Rat,
}

impl AffinePair {
    pub fn new(phi: Vec<Int>, z: Rat) -> Result<Self> {
        if phi.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroVector);
        }
        Ok(AffinePair { phi, z })
    }

    /// Same affine hyperplane of `Γ ⊗ R`, written with a primitive vector part.
    fn hyperplane(&self) -> AffinePair {
        let (p, c) = primitive_direction(&self.phi).expect("nonzero");
        AffinePair { phi: p, z: &self.z / c }
    }

    fn value(&self, x: &[Rat]) -> Rat {
        dot_zq(&self.phi, x) + &self.z
    }
}

/// `Φ̃` over a lattice; the vector parts live in `sys` (lattice coordinates), `z[i]` pairs with `sys.phi()[i]`.
#[derive(Clone, Debug)]
pub struct AffineSystem {
    pub sys: System,
    pub z: Vec<Rat>,
}

impl AffineSystem {
    pub fn new(sys: System, z: Vec<Rat>) -> Result<Self> {
        if z.len() != sys.len() {
            return Err(Error::DimensionMismatch { expected: sys.len(), found: z.len() });
        }
        if sys.contains_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(AffineSystem { sys, z })
    }

    pub fn from_i64(rank: usize, pairs: &[(&[i64], Rat)]) -> Result<Self> {
        let phi: Vec<&[i64]> = pairs.iter().map(|(p, _)| *p).collect();
        let sys = System::from_i64(rank, &phi)?;
        Self::new(sys, pairs.iter().map(|(_, z)| z.clone()).collect())
    }

    pub fn pairs(&self) -> Vec<AffinePair> {
        self.sys.phi().iter().zip(&self.z).map(|(p, z)| AffinePair { phi: p.clone(), z: z.clone() }).collect()
    }

    pub fn rank(&self) -> usize {
        self.sys.rank()
    }
}

fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

fn cis(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * x)
}

/// Coefficients `g_j` of `1/(1 - q e^u) = Σ g_j u^j`, for `q ≠ 1`.
fn inverse_series(q: Complex64, n: usize) -> Vec<Complex64> {
    let h0 = Complex64::one() - q;
    let mut inv_fact = vec![1.0f64; n + 1];
    for j in 1..=n {
        inv_fact[j] = inv_fact[j - 1] / j as f64;
    }
    let mut g = Vec::with_capacity(n + 1);
    g.push(Complex64::one() / h0);
    for j in 1..=n {
        let mut s = Complex64::zero();
        for i in 1..=j {
            s += -q * inv_fact[i] * g[j - i];
        }
        g.push(-s / h0);
    }
    g
}

/// Polynomial `p(s)` with `B̃([[ω,z]]^k)(t) = e^{-2iπzt} p(t)` for `0 < t < 1`, ascending coefficients.
fn unit_interval_poly(k: u32, z: &Rat) -> Vec<Complex64> {
    let k = k as usize;
    if z.is_integer() {
        // -B(k, s)/k!
        let b = bernoulli_polynomial(k as u32);
        let f = to_f64(&from_int(&factorial(k as u32)));
        return (0..=k).map(|j| Complex64::new(-to_f64(&b.coeff(&[j as u32])) / f, 0.0)).collect();
    }
    // Res_{u=0} e^{su} / (u^k (1 - e^{-2iπz} e^u)) = Σ_m s^m/m! g_{k-1-m}
    let g = inverse_series(cis(-to_f64(z)), k);
    let mut out = Vec::with_capacity(k);
    let mut fact = 1.0f64;
    for m in 0..k {
        if m > 0 {
            fact *= m as f64;
        }
        out.push(g[k - 1 - m] / fact);
    }
    out
}

/// `B̃([[ω,z]]^k)` on the unit interval containing `t`: `Σ_{n+z≠0} e^{2iπnt}/(2iπ(n+z))^k`.
pub fn affine_1d(k: u32, z: &Rat, t: &Rat) -> Result<ExpPolyC> {
    if k == 0 {
        return Err(Error::InvalidInput("multiplicity must be at least 1".into()));
    }
    if t.is_integer() {
        return Err(Error::Irregular(t.to_string()));
    }
    let n = floor(t);
    let p = unit_interval_poly(k, z);
    // e^{-2iπz(t-n)} p(t-n) = e^{-2iπzt} · e^{2iπzn} p(t-n)
    let nf = to_f64(&from_int(&n));
    let phase = cis(to_f64(&(z * from_int(&n)).fract()));
    let mut shifted = vec![Complex64::zero(); p.len()];
    for (j, c) in p.iter().enumerate() {
        for i in 0..=j {
            let b = to_f64(&from_int(&binomial(j as u32, i as u32)));
            shifted[i] += c * b * (-nf).powi((j - i) as i32);
        }
    }
    Ok(ExpPolyC::single(-z.clone(), shifted.into_iter().map(|c| c * phase).collect()))
}

/// Jump `B̃(τ⁺) - B̃(τ⁻)` of `[[ω,z]]^k` across the point separating the unit intervals of `t_plus`
/// and `t_minus`, from the cone kernels on either side: `e^{-2iπz(t-n)} (t-n)^{k-1}/(k-1)!`.
pub fn affine_jump_1d(k: u32, z: &Rat, t_plus: &Rat, t_minus: &Rat) -> Result<ExpPolyC> {
    if k == 0 {
        return Err(Error::InvalidInput("multiplicity must be at least 1".into()));
    }
    for t in [t_plus, t_minus] {
        if t.is_integer() {
            return Err(Error::Irregular(t.to_string()));
        }
    }
    let (a, b) = (floor(t_plus), floor(t_minus));
    let gap = &a - &b;
    if gap.abs() != Int::one() {
        return Err(Error::NotAdjacent(format!("{t_plus} and {t_minus}")));
    }
    let n = a.clone().max(b);
    let nf = to_f64(&from_int(&n));
    let km = (k - 1) as usize;
    let fact = to_f64(&from_int(&factorial(k - 1)));
    let mut coeffs = vec![Complex64::zero(); km + 1];
    for i in 0..=km {
        let c = to_f64(&from_int(&binomial(km as u32, i as u32))) * (-nf).powi((km - i) as i32) / fact;
        coeffs[i] = Complex64::new(c, 0.0);
    }
    let phase = cis(to_f64(&(z * from_int(&n)).fract()));
    let sign = if gap.is_positive() { 1.0 } else { -1.0 };
    Ok(ExpPolyC::single(-z.clone(), coeffs.into_iter().map(|c| c * phase * sign).collect()))
}

/// `coefficient · (2iπ)^{-drop} / ∏ (⟨σ_i,·⟩ + z_i)^{n_i}` with `σ` a basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFractionTerm {
    pub coefficient: Rat,
    /// Number of elimination steps with a nonzero constant; each lowers the total degree by one.
    pub drop: u32,
    pub basis: Vec<AffinePair>,
    pub n: Vec<u32>,
}

/// Rewrite `1/∏ ℓ_a` over the affine forms of `list` as a combination of basis terms.
///
/// For `a = Σ c_i σ_i` and `δ = z_a - Σ c_i z_i`, either `ℓ_a = Σ c_i ℓ_i` (`δ = 0`, handled as in the
/// linear case, merging into a higher multiplicity when `a` is parallel to one `σ_i`) or
/// `1 = (ℓ_a - Σ c_i ℓ_i)/δ`, which lowers the total degree and keeps a basis in every piece.
pub fn affine_partial_fractions(list: &[AffinePair], r: usize) -> Result<Vec<AffineFractionTerm>> {
    let vecs: Vec<Vec<Int>> = list.iter().map(|p| p.phi.clone()).collect();
    if rank_of_z(&vecs, r) != r {
        return Err(Error::NotSpanning);
    }
    let mut basis: Vec<usize> = Vec::new();
    let mut rest = Vec::new();
    for i in 0..list.len() {
        let mut cand: Vec<Vec<Int>> = basis.iter().map(|&j| vecs[j].clone()).collect();
        cand.push(vecs[i].clone());
        if basis.len() < r && rank_of_z(&cand, r) == cand.len() {
            basis.push(i);
        } else {
            rest.push(i);
        }
    }
    let mut terms = vec![AffineFractionTerm {
        coefficient: Rat::one(),
        drop: 0,
        basis: basis.iter().map(|&i| list[i].clone()).collect(),
        n: vec![1; r],
    }];
    for a in rest {
        let mut next = Vec::new();
        for t in terms {
            absorb(t, &list[a], 1, &mut next);
        }
        terms = merge_terms(next);
    }
    Ok(terms)
}

fn merge_terms(terms: Vec<AffineFractionTerm>) -> Vec<AffineFractionTerm> {
    let mut out: Vec<AffineFractionTerm> = Vec::new();
    for t in terms {
        if let Some(o) = out.iter_mut().find(|o| o.drop == t.drop && o.basis == t.basis && o.n == t.n) {
            o.coefficient += t.coefficient;
        } else {
            out.push(t);
        }
    }
    out.retain(|t| !t.coefficient.is_zero());
    out
}

fn absorb(t: AffineFractionTerm, a: &AffinePair, big_n: u32, out: &mut Vec<AffineFractionTerm>) {
    let r = t.basis.len();
    let sig = MatQ::from_cols(&t.basis.iter().map(|p| to_q(&p.phi)).collect::<Vec<_>>(), r);
    let c = sig.solve(&to_q(&a.phi)).expect("basis spans");
    let nz: Vec<usize> = (0..r).filter(|&i| !c[i].is_zero()).collect();
    let delta = nz.iter().fold(a.z.clone(), |acc, &i| acc - &c[i] * &t.basis[i].z);
    if delta.is_zero() {
        if nz.len() == 1 {
            let i = nz[0];
            let mut n = t.n.clone();
            n[i] += big_n;
            let coefficient = t.coefficient / num_traits::pow(c[i].clone(), big_n as usize);
            out.push(AffineFractionTerm { coefficient, drop: t.drop, basis: t.basis, n });
            return;
        }
        for i in nz {
            let mut n = t.n.clone();
            n[i] -= 1;
            let coefficient = &t.coefficient * &c[i];
            if n[i] == 0 {
                let mut basis = t.basis.clone();
                basis[i] = a.clone();
                n[i] = big_n + 1;
                out.push(AffineFractionTerm { coefficient, drop: t.drop, basis, n });
            } else {
                let sub = AffineFractionTerm { coefficient, drop: t.drop, basis: t.basis.clone(), n };
                absorb(sub, a, big_n + 1, out);
            }
        }
        return;
    }
    // 1/(ℓ_a^N ∏ℓ^n) = (1/δ)[1/(ℓ_a^{N-1} ∏ℓ^n) - Σ c_i/(ℓ_a^N ∏ℓ^{n - e_i})]
    let base = &t.coefficient / &delta;
    let first = AffineFractionTerm { coefficient: base.clone(), drop: t.drop + 1, basis: t.basis.clone(), n: t.n.clone() };
    if big_n == 1 {
        out.push(first);
    } else {
        absorb(first, a, big_n - 1, out);
    }
    for i in nz {
        let mut n = t.n.clone();
        n[i] -= 1;
        let coefficient = -&base * &c[i];
        if n[i] == 0 {
            let mut basis = t.basis.clone();
            basis[i] = a.clone();
            n[i] = big_n;
            out.push(AffineFractionTerm { coefficient, drop: t.drop + 1, basis, n });
        } else {
            let sub = AffineFractionTerm { coefficient, drop: t.drop + 1, basis: t.basis.clone(), n };
            absorb(sub, a, big_n, out);
        }
    }
}

/// Exact check of `Σ terms = 1/∏ ℓ_a` at a few rational points where no form vanishes.
pub fn verify_affine_partial_fractions(list: &[AffinePair], r: usize, terms: &[AffineFractionTerm]) -> Result<()> {
    let mut checked = 0;
    let mut seed = 0i64;
    while checked < 3 && seed < 200 {
        seed += 1;
        let x: Vec<Rat> = (0..r).map(|i| Rat::new(Int::from((seed * (7 + 5 * i as i64)) % 23 - 11), Int::from(3 + i as i64 + seed % 5))).collect();
        let vals: Vec<Rat> = list.iter().map(|p| p.value(&x)).collect();
        if vals.iter().any(|v| v.is_zero()) {
            continue;
        }
        let mut rhs = Rat::zero();
        let mut ok = true;
        for t in terms {
            let mut den = Rat::one();
            for (p, &k) in t.basis.iter().zip(&t.n) {
                den *= num_traits::pow(p.value(&x), k as usize);
            }
            if den.is_zero() {
                ok = false;
                break;
            }
            rhs += &t.coefficient / den;
        }
        if !ok {
            continue;
        }
        let lhs = Rat::one() / vals.iter().fold(Rat::one(), |acc, v| acc * v);
        if lhs != rhs {
            return Err(Error::Internal("affine partial fraction expansion does not reproduce the product".into()));
        }
        checked += 1;
    }
    Ok(())
}

fn dedup_hyperplanes(list: impl IntoIterator<Item = AffinePair>) -> Vec<AffinePair> {
    let mut out: Vec<AffinePair> = Vec::new();
    for p in list {
        let h = p.hyperplane();
        if !out.contains(&h) {
            out.push(h);
        }
    }
    out
}

/// `Σ_{γ ∈ Z^r, regular for h} e^{2iπ⟨v,γ⟩} / ∏_{a ∈ list} 2iπ(⟨a,γ⟩ + z_a)` at `v`.
fn series_value(h: &[AffinePair], list: &[AffinePair], v: &[Rat]) -> Result<Complex64> {
    let r = v.len();
    if r == 0 {
        return Ok(Complex64::one());
    }
    let terms = affine_partial_fractions(list, r)?;
    verify_affine_partial_fractions(list, r, &terms)?;
    let parts: Vec<Complex64> = terms
        .par_iter()
        .map(|t| {
            let scale = to_f64(&t.coefficient) / two_pi_i().powi(t.drop as i32);
            basis_value(h, t, v).map(|x| x * scale)
        })
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().sum())
}

fn basis_value(h: &[AffinePair], t: &AffineFractionTerm, v: &[Rat]) -> Result<Complex64> {
    let r = v.len();
    let own: Vec<AffinePair> = t.basis.iter().map(|p| p.hyperplane()).collect();
    let Some(pos) = h.iter().position(|p| !own.contains(p)) else {
        return independent_value(&t.basis, &t.n, v);
    };
    // drop the condition ⟨φ,γ⟩ + z ≠ 0 and subtract the sum over that affine sublattice
    let hp = &h[pos];
    let h_rest: Vec<AffinePair> = h.iter().enumerate().filter(|(i, _)| *i != pos).map(|(_, p)| p.clone()).collect();
    let full = basis_value(&h_rest, t, v)?;
    if !hp.z.is_integer() {
        return Ok(full);
    }
    let q = lattice_quotient(&[to_q(&hp.phi)], r);
    // covector g with ⟨φ, g⟩ = 1, then γ_z = -z g
    let g: Vec<Int> = q.kernel_coords.row(0);
    let s = dot_z(&g, &hp.phi);
    let gz: Vec<Int> = g.iter().map(|x| -(x * &s) * hp.z.to_integer()).collect();
    let gzq = to_q(&gz);
    let mut constant = Complex64::one();
    let mut l0 = Vec::new();
    for (p, &k) in t.basis.iter().zip(&t.n) {
        let img = q.project_z(&p.phi);
        let z0 = &p.z + dot_zq(&p.phi, &gzq);
        if img.iter().all(|x| x.is_zero()) {
            if z0.is_zero() {
                return Ok(full);
            }
            constant /= (two_pi_i() * to_f64(&z0)).powi(k as i32);
        } else {
            for _ in 0..k {
                l0.push(AffinePair { phi: img.clone(), z: z0.clone() });
            }
        }
    }
    let mut h0 = Vec::new();
    for p in &h_rest {
        let img = q.project_z(&p.phi);
        let z0 = &p.z + dot_zq(&p.phi, &gzq);
        if img.iter().all(|x| x.is_zero()) {
            if z0.is_zero() {
                return Ok(full);
            }
        } else {
            h0.push(AffinePair { phi: img, z: z0 });
        }
    }
    let h0 = dedup_hyperplanes(h0);
    let v0 = q.project(v);
    let phase = cis(to_f64(&dot_zq(&gz, v).fract()));
    let sub = series_value(&h0, &l0, &v0)?;
    Ok(full - phase * constant * sub)
}

/// Independent list: product of one-dimensional factors in basis coordinates, averaged over
/// `Z^r / ⊕ Z σ_i`.
fn independent_value(basis: &[AffinePair], n: &[u32], v: &[Rat]) -> Result<Complex64> {
    let r = v.len();
    let sigma: Vec<Vec<Int>> = basis.iter().map(|p| p.phi.clone()).collect();
    let m = MatQ::from_cols(&sigma.iter().map(|s| to_q(s)).collect::<Vec<_>>(), r);
    let minv = m.inverse().map_err(|_| Error::RankDeficient)?;
    let index = to_f64(&m.det().abs());
    let reps = coset_representatives(&sigma)?;
    let mut total = Complex64::zero();
    for lam in reps {
        let wl: Vec<Rat> = v.iter().zip(&lam).map(|(a, b)| a + b).collect();
        let tw = minv.mul_vec(&wl);
        let mut prod = Complex64::one();
        for i in 0..r {
            let f = affine_1d(n[i], &basis[i].z, &tw[i]).map_err(|_| Error::Irregular(fmt_vec(v)))?;
            prod *= f.eval_q(&tw[i]);
        }
        total += prod;
    }
    Ok(total / index)
}

/// `B̃(Φ̃, Λ)(v)` at a regular point (lattice coordinates).
pub fn affine_eval(asys: &AffineSystem, v: &[Rat]) -> Result<Complex64> {
    let sys = &asys.sys;
    if v.len() != sys.rank() {
        return Err(Error::DimensionMismatch { expected: sys.rank(), found: v.len() });
    }
    sys.require_spanning()?;
    if !is_regular(sys, v)? {
        return Err(Error::Irregular(fmt_vec(v)));
    }
    let pairs = asys.pairs();
    let h = dedup_hyperplanes(pairs.iter().cloned());
    series_value(&h, &pairs, v)
}

/// Truncated Fourier sum over `γ ∈ [-radius, radius]^r`, regular terms only.
pub fn affine_partial_sum(asys: &AffineSystem, v: &[f64], radius: i64) -> Result<Complex64> {
    let r = asys.rank();
    if v.len() != r {
        return Err(Error::DimensionMismatch { expected: r, found: v.len() });
    }
    let pairs: Vec<(Vec<f64>, f64)> = asys
        .pairs()
        .iter()
        .map(|p| (p.phi.iter().map(|x| to_f64(&from_int(x))).collect(), to_f64(&p.z)))
        .collect();
    let side = (2 * radius + 1) as usize;
    let total = side.pow(r as u32);
    let sum = (0..total)
        .into_par_iter()
        .map(|idx| {
            let mut rest = idx;
            let gamma: Vec<f64> = (0..r)
                .map(|_| {
                    let k = (rest % side) as i64 - radius;
                    rest /= side;
                    k as f64
                })
                .collect();
            let mut den = Complex64::one();
            for (phi, z) in &pairs {
                let l: f64 = phi.iter().zip(&gamma).map(|(a, b)| a * b).sum::<f64>() + z;
                if l.abs() < 1e-12 {
                    return Complex64::zero();
                }
                den *= two_pi_i() * l;
            }
            let ph: f64 = v.iter().zip(&gamma).map(|(a, b)| a * b).sum();
            cis(ph) / den
        })
        .sum();
    Ok(sum)
}
