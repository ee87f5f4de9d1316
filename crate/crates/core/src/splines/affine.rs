use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::spline::{conv_eval, fiber, valid_bases, SplineSpec};
use crate::arrangement::{is_regular, tope_of, AdmissibleSubspace, System};
use crate::berseries::ber_tope_poly;
use crate::error::{Error, Result};
use crate::exactlinalg::{dot_q, fmt_vec, from_int, to_f64, to_q, Int, LatticeQuotient, MatQ, Rat};
use crate::polynomials::{interpolate, MultiPolyQ};

/// Positive definite rational scalar product, in lattice coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Gram(MatQ);

impl Gram {
    pub fn identity(r: usize) -> Self {
        Gram(MatQ::identity(r))
    }

    pub fn new(m: MatQ) -> Result<Self> {
        let n = m.rows();
        if m.cols() != n {
            return Err(Error::InvalidInput("scalar product matrix is not square".into()));
        }
        if m.transpose() != m {
            return Err(Error::InvalidInput("scalar product matrix is not symmetric".into()));
        }
        for k in 1..=n {
            if !m.block(0..k, 0..k).det().is_positive() {
                return Err(Error::InvalidInput("scalar product matrix is not positive definite".into()));
            }
        }
        Ok(Gram(m))
    }

    pub fn matrix(&self) -> &MatQ {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.rows()
    }

    pub fn inner(&self, a: &[Rat], b: &[Rat]) -> Rat {
        dot_q(a, &self.0.mul_vec(b))
    }

    /// Induced product on `V/s` in the coordinates of `chart`: `(P G⁻¹ Pᵀ)⁻¹`.
    pub fn quotient(&self, chart: &LatticeQuotient) -> Gram {
        let p = chart.projection.to_q();
        if p.rows() == 0 {
            return Gram(MatQ::zeros(0, 0));
        }
        let ginv = self.0.inverse().expect("positive definite");
        let m = &(&p * &ginv) * &p.transpose();
        Gram(m.inverse().expect("projection is surjective"))
    }

    /// Orthogonal projection of `x` onto `λ + span(kernel)`.
    pub fn project_affine(&self, kernel: &MatQ, lambda: &[Rat], x: &[Rat]) -> Vec<Rat> {
        let d = kernel.cols();
        if d == 0 {
            return lambda.to_vec();
        }
        let rel: Vec<Rat> = x.iter().zip(lambda).map(|(a, b)| a - b).collect();
        let kt_g = &kernel.transpose() * &self.0;
        let normal = &kt_g * kernel;
        let coef = normal.inverse().expect("kernel has full rank").mul_vec(&kt_g.mul_vec(&rel));
        let shift = kernel.mul_vec(&coef);
        lambda.iter().zip(shift).map(|(a, b)| a + b).collect()
    }
}

/// One summand of the decomposition: `Ber(Φ∩s, Λ∩s, τ(β0)) * T(Φ∖s, β1)` on `a = λ + s`.
#[derive(Clone, Debug)]
pub struct AffineTerm {
    pub subspace: AdmissibleSubspace,
    pub chart: LatticeQuotient,
    pub lambda: Vec<Int>,
    pub beta: Vec<Rat>,
    pub beta0: Vec<Rat>,
    pub beta1: Vec<Rat>,
    /// `(Φ ∩ s, Λ ∩ s)` in the coordinates of `chart.kernel`.
    pub restricted: System,
    /// Tope polynomial of the restricted system at `β0 - λ`, in the same coordinates.
    pub tope_poly: MultiPolyQ,
    /// `Φ ∖ s` polarized by the covector `G β1`.
    pub spline: SplineSpec,
}

impl AffineTerm {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    pub fn codim(&self) -> usize {
        self.chart.rank()
    }

    /// Whether `v ∈ a + cone(polarized Φ∖s)`.
    pub fn supports(&self, v: &[Rat]) -> Result<bool> {
        let m = self.codim();
        if m == 0 {
            return Ok(true);
        }
        let rel: Vec<Rat> = v.iter().zip(&self.lambda).map(|(a, b)| a - from_int(b)).collect();
        let psi_bar: Vec<Vec<Int>> = self.spline.flipped.iter().map(|p| self.chart.project_z(p)).collect();
        let j = valid_bases(&psi_bar, m)
            .into_iter()
            .next()
            .ok_or_else(|| Error::Internal("complement does not span the quotient".into()))?;
        Ok(!fiber(&psi_bar, &self.chart.project(&rel), &j)?.polytope.is_empty())
    }

    pub fn eval(&self, v: &[Rat]) -> Result<Rat> {
        conv_eval(&self.chart, &self.lambda, &self.tope_poly, &self.spline, v)
    }

    /// Total degree of the term's local polynomials.
    pub fn degree(&self) -> u32 {
        (self.restricted.len() + self.spline.list.len() - self.codim()) as u32
    }

    /// The polynomial agreeing with this term on the tope of `sys` containing `v`.
    pub fn polynomial(&self, sys: &System, v: &[Rat]) -> Result<MultiPolyQ> {
        chamber_polynomial(sys, v, self.degree(), |x| self.eval(x))
    }

    /// `λ + span(...)` for display.
    pub fn describe(&self) -> String {
        let basis: Vec<String> = self.subspace.basis_q().iter().map(|b| fmt_vec(b)).collect();
        format!("{} + span[{}]", fmt_vec(&to_q(&self.lambda)), basis.join(", "))
    }
}

/// Recover the polynomial of a function known to be polynomial of degree `<= degree` on the
/// tope of `v`, from exact values on a small simplex-shaped grid inside that tope.
pub fn chamber_polynomial<F>(sys: &System, v: &[Rat], degree: u32, f: F) -> Result<MultiPolyQ>
where
    F: Fn(&[Rat]) -> Result<Rat>,
{
    let key = tope_of(sys, v)?.key;
    let r = v.len();
    let mut step = Rat::new(Int::one(), Int::from(64));
    for _ in 0..60 {
        let nodes: Vec<Vec<Rat>> = crate::polynomials::exponents_up_to(r, degree)
            .iter()
            .map(|a| v.iter().zip(a).map(|(c, &k)| c + &step * Rat::from_integer(k.into())).collect())
            .collect();
        let inside = nodes.iter().all(|p| {
            is_regular(sys, p).unwrap_or(false) && tope_of(sys, p).map(|t| t.key == key).unwrap_or(false)
        });
        if inside {
            return interpolate(r, degree, v, &step, |x| f(x));
        }
        step /= Rat::from_integer(Int::from(2));
    }
    Err(Error::NonGeneric(format!("{} is too close to a wall", fmt_vec(v))))
}

enum Failure {
    Tope,
    Polarization,
}

fn build(
    sys: &System,
    s: &AdmissibleSubspace,
    lambda: &[Int],
    beta: &[Rat],
    gram: &Gram,
) -> Result<std::result::Result<AffineTerm, Failure>> {
    let r = sys.rank();
    let (restricted, chart) = sys.restriction(&s.basis_q())?;
    if restricted.len() < s.dim() || (s.dim() > 0 && !restricted.spans()) {
        return Err(Error::InvalidInput("subspace is not spanned by elements of the list".into()));
    }
    let lam_q = to_q(lambda);
    let kernel = chart.kernel.to_q();
    let beta0 = if s.dim() == r { beta.to_vec() } else { gram.project_affine(&kernel, &lam_q, beta) };
    let beta1: Vec<Rat> = beta0.iter().zip(beta).map(|(a, b)| a - b).collect();
    let tope_poly = if s.dim() == 0 {
        MultiPolyQ::one(0)
    } else {
        let rel: Vec<Rat> = beta0.iter().zip(&lam_q).map(|(a, b)| a - b).collect();
        let w = chart.kernel_coords.to_q().mul_vec(&rel);
        if !is_regular(&restricted, &w)? {
            return Ok(Err(Failure::Tope));
        }
        ber_tope_poly(&restricted, &w)?
    };
    let inside = sys.members_in(&s.basis_q());
    let psi: Vec<Vec<Int>> =
        (0..sys.len()).filter(|i| !inside.contains(i)).map(|i| sys.phi()[i].clone()).collect();
    let u = gram.matrix().mul_vec(&beta1);
    let spline = match SplineSpec::polarize(&psi, &u) {
        Ok(sp) => sp,
        Err(Error::InvalidPolarization(_)) => return Ok(Err(Failure::Polarization)),
        Err(e) => return Err(e),
    };
    Ok(Ok(AffineTerm {
        subspace: s.clone(),
        chart,
        lambda: lambda.to_vec(),
        beta: beta.to_vec(),
        beta0,
        beta1,
        restricted,
        tope_poly,
        spline,
    }))
}

/// Deterministic nudges `β + 2^{-k} d_j` with `d_j = (1, 1/(j+3), 1/(j+3)^2, ...)`.
fn perturbations(beta: &[Rat]) -> impl Iterator<Item = Vec<Rat>> + '_ {
    (1..=24u32).flat_map(move |k| {
        (0..4i64).map(move |j| {
            let eps = Rat::new(Int::one(), num_traits::pow(Int::from(2), k as usize));
            let base = Rat::new(Int::one(), Int::from(j + 3));
            let mut c = Rat::one();
            beta.iter()
                .map(|b| {
                    let out = b + &eps * &c;
                    c *= &base;
                    out
                })
                .collect()
        })
    })
}

pub fn affine_term(sys: &System, s: &AdmissibleSubspace, lambda: &[Int], beta: &[Rat], gram: &Gram) -> Result<AffineTerm> {
    let r = sys.rank();
    if lambda.len() != r || beta.len() != r || gram.rank() != r {
        return Err(Error::DimensionMismatch { expected: r, found: beta.len() });
    }
    match build(sys, s, lambda, beta, gram)? {
        Ok(t) => Ok(t),
        Err(kind) => {
            let condition = match kind {
                Failure::Tope => format!(
                    "projection of beta onto the affine subspace {} + span lies on a wall",
                    fmt_vec(&to_q(lambda))
                ),
                Failure::Polarization => format!(
                    "beta1 is orthogonal to an element outside the subspace through {}",
                    fmt_vec(&to_q(lambda))
                ),
            };
            let suggestion = perturbations(beta)
                .find(|b| matches!(build(sys, s, lambda, b, gram), Ok(Ok(_))));
            Err(Error::Genericity { condition, suggestion })
        }
    }
}

/// A radius beyond which no translate can contribute at `v`: `‖v - β‖ / 2`, rounded up.
pub fn sufficient_radius(v: &[Rat], beta: &[Rat], gram: &Gram) -> Rat {
    let d: Vec<Rat> = v.iter().zip(beta).map(|(a, b)| a - b).collect();
    let half = to_f64(&gram.inner(&d, &d)).sqrt() / 2.0;
    Rat::from_integer(Int::from(half.ceil() as i64 + 1))
}

/// Lattice points `x ∈ Z^m` with `(x - c)ᵀ G (x - c) <= radius²`, lexicographic.
fn ellipsoid_points(g: &Gram, center: &[Rat], radius: &Rat) -> Vec<Vec<Int>> {
    let m = center.len();
    let ginv = g.matrix().inverse().expect("positive definite");
    let rf = to_f64(radius);
    let ranges: Vec<(i64, i64)> = (0..m)
        .map(|i| {
            let half = rf * to_f64(&ginv[(i, i)]).sqrt();
            let c = to_f64(&center[i]);
            ((c - half).floor() as i64 - 1, (c + half).ceil() as i64 + 1)
        })
        .collect();
    let r2 = radius * radius;
    let mut out = Vec::new();
    let mut cur: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let x: Vec<Rat> = cur.iter().map(|&k| Rat::from_integer(k.into())).collect();
        let d: Vec<Rat> = x.iter().zip(center).map(|(a, b)| a - b).collect();
        if g.inner(&d, &d) <= r2 {
            out.push(cur.iter().map(|&k| Int::from(k)).collect());
        }
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < ranges[i].1 {
                cur[i] += 1;
                for k in i + 1..m {
                    cur[k] = ranges[k].0;
                }
                break;
            }
        }
    }
}

/// Admissible affine subspaces whose term is nonzero near `v`, in subspace order then
/// lexicographic order of the quotient lattice point.
pub fn contributing_affines(sys: &System, beta: &[Rat], v: &[Rat], radius: &Rat, gram: &Gram) -> Result<Vec<AffineTerm>> {
    let r = sys.rank();
    if beta.len() != r || v.len() != r {
        return Err(Error::DimensionMismatch { expected: r, found: v.len() });
    }
    sys.require_spanning()?;
    if !radius.is_positive() {
        return Err(Error::InvalidInput("radius must be positive".into()));
    }
    let mut out = Vec::new();
    for s in sys.admissible_subspaces() {
        let chart = crate::exactlinalg::lattice_quotient(&s.basis_q(), r);
        let m = chart.rank();
        if m == 0 {
            out.push(affine_term(sys, s, &vec![Int::zero(); r], beta, gram)?);
            continue;
        }
        let gq = gram.quotient(&chart);
        let vb = chart.project(v);
        let bb = chart.project(beta);
        let center: Vec<Rat> = vb.iter().zip(&bb).map(|(a, b)| (a + b) / Rat::from_integer(2.into())).collect();
        let section = chart.section.to_q();
        for x in ellipsoid_points(&gq, &center, radius) {
            let xq = to_q(&x);
            // ⟨v̄ - λ̄, λ̄ - β̄⟩ >= 0 is necessary for v to lie in the support
            let a: Vec<Rat> = vb.iter().zip(&xq).map(|(p, q)| p - q).collect();
            let b: Vec<Rat> = xq.iter().zip(&bb).map(|(p, q)| p - q).collect();
            if gq.inner(&a, &b).is_negative() {
                continue;
            }
            let lambda: Vec<Int> = section.mul_vec(&xq).into_iter().map(|c| c.to_integer()).collect();
            let term = affine_term(sys, s, &lambda, beta, gram)?;
            if term.supports(v)? {
                out.push(term);
            }
        }
    }
    Ok(out)
}

/// The decomposition terms at `v` together with their values.
pub fn decomposition_terms(sys: &System, beta: &[Rat], v: &[Rat], radius: &Rat, gram: &Gram) -> Result<Vec<(AffineTerm, Rat)>> {
    if !is_regular(sys, v)? {
        return Err(Error::Irregular(fmt_vec(v)));
    }
    if sys.contains_zero() {
        return Err(Error::InvalidInput("the list contains the zero vector".into()));
    }
    let terms = contributing_affines(sys, beta, v, radius, gram)?;
    let values: Vec<Rat> = terms.par_iter().map(|t| t.eval(v)).collect::<Result<_>>()?;
    Ok(terms.into_iter().zip(values).collect())
}

/// `Σ_a A(Φ, Λ, a, β)(v)`.
pub fn decomposition_eval(sys: &System, beta: &[Rat], v: &[Rat], radius: &Rat, gram: &Gram) -> Result<Rat> {
    Ok(decomposition_terms(sys, beta, v, radius, gram)?.into_iter().fold(Rat::zero(), |acc, (_, x)| acc + x))
}
