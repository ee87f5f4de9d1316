use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::partial::{partial_fractions, PartialFractionTerm};
use crate::arrangement::{directions_of, is_regular, System};
use crate::error::{Error, Result};
use crate::exactlinalg::{
    coset_representatives, factorial, floor, fmt_vec, from_int, lattice_quotient, primitive_direction,
    to_q, Int, MatQ, Rat,
};
use crate::polynomials::{bernoulli_polynomial, MultiPolyQ};

/// Tope polynomial of `Σ_γ e^{2iπ⟨v,γ⟩} / ∏⟨2iπσ_i,γ⟩^{n_i}` over all `γ` with `⟨σ_i,γ⟩ ≠ 0`,
/// on the tope of `witness`; `σ` is a basis.
pub fn independent_tope_poly(sigma: &[Vec<Int>], n: &[u32], witness: &[Rat]) -> Result<MultiPolyQ> {
    let r = witness.len();
    if sigma.len() != r || n.len() != r {
        return Err(Error::DimensionMismatch { expected: r, found: sigma.len() });
    }
    if r == 0 {
        return Ok(MultiPolyQ::one(0));
    }
    let m = MatQ::from_cols(&sigma.iter().map(|v| to_q(v)).collect::<Vec<_>>(), r);
    let minv = m.inverse().map_err(|_| Error::RankDeficient)?;
    let index = m.det().abs();
    let reps = coset_representatives(sigma)?;
    let bern: Vec<MultiPolyQ> = n.iter().map(|&k| bernoulli_polynomial(k)).collect();
    let mut sign = Rat::one();
    for &k in n {
        sign /= from_int(&factorial(k));
    }
    if r % 2 == 1 {
        sign = -sign;
    }
    let mut total = MultiPolyQ::zero(r);
    for lam in reps {
        let wl: Vec<Rat> = witness.iter().zip(&lam).map(|(a, b)| a + b).collect();
        let tw = minv.mul_vec(&wl);
        let mut prod = MultiPolyQ::constant(r, sign.clone());
        for i in 0..r {
            if tw[i].is_integer() {
                return Err(Error::Internal(format!(
                    "witness {} lies on a cell wall of an extracted basis",
                    fmt_vec(witness)
                )));
            }
            let mi = from_int(&floor(&tw[i]));
            // t_i(v + λ) - m_i as an affine form in v
            let shift = minv.row(i).iter().zip(&lam).fold(-mi, |acc, (a, l)| acc + a * l);
            let form = MultiPolyQ::linear(&minv.row(i), shift);
            prod = &prod * &bern[i].substitute(&[form]);
        }
        total = &total + &prod;
    }
    Ok(total.scale(&(Rat::one() / index)))
}

/// Tope polynomial at `w` of `Σ_{γ regular for H} e^{2iπ⟨v,γ⟩} / ∏_{a∈L}⟨2iπa,γ⟩`,
/// where `H` lists the distinct primitive directions defining regularity (a superset of those of `L`).
pub fn series(h: &[Vec<Int>], list: &[Vec<Int>], w: &[Rat]) -> Result<MultiPolyQ> {
    let r = w.len();
    if r == 0 {
        return Ok(MultiPolyQ::one(0));
    }
    let terms = partial_fractions(list, r)?;
    let parts: Vec<MultiPolyQ> = terms
        .par_iter()
        .map(|t| series_basis(h, list, t, w).map(|p| p.scale(&t.coefficient)))
        .collect::<Result<_>>()?;
    Ok(parts.iter().fold(MultiPolyQ::zero(r), |acc, p| &acc + p))
}

fn series_basis(h: &[Vec<Int>], list: &[Vec<Int>], t: &PartialFractionTerm, w: &[Rat]) -> Result<MultiPolyQ> {
    let r = w.len();
    let sigma = t.basis(list);
    let sdirs: Vec<Vec<Int>> = sigma.iter().map(|v| primitive_direction(v).expect("nonzero").0).collect();
    let Some(pos) = h.iter().position(|d| !sdirs.contains(d)) else {
        return independent_tope_poly(&sigma, &t.n, w);
    };
    // Inclusion-exclusion on one extra direction φ: sum over ⟨φ,γ⟩ ≠ 0 equals the sum
    // without that condition minus the sum over γ ⊥ φ, computed on V/Rφ.
    let phi = &h[pos];
    let h_rest: Vec<Vec<Int>> = h.iter().enumerate().filter(|(i, _)| *i != pos).map(|(_, d)| d.clone()).collect();
    let full = series_basis(&h_rest, list, t, w)?;
    let q = lattice_quotient(&[to_q(phi)], r);
    let h0 = directions_of(&h_rest.iter().map(|d| q.project_z(d)).collect::<Vec<_>>());
    let mut l0 = Vec::new();
    for (s, &k) in sigma.iter().zip(&t.n) {
        let img = q.project_z(s);
        for _ in 0..k {
            l0.push(img.clone());
        }
    }
    let w0 = q.project(w);
    let sub = series(&h0, &l0, &w0)?;
    let pq = q.projection.to_q();
    let lifted = sub.affine_substitute(&pq, &vec![Rat::zero(); r - 1]);
    Ok(&full - &lifted)
}

fn check_ber_input(sys: &System, witness: &[Rat]) -> Result<()> {
    if witness.len() != sys.rank() {
        return Err(Error::DimensionMismatch { expected: sys.rank(), found: witness.len() });
    }
    sys.require_spanning()?;
    if !is_regular(sys, witness)? {
        return Err(Error::Irregular(fmt_vec(witness)));
    }
    Ok(())
}

/// `Ber(Φ, Λ, τ)` for the tope `τ` containing `witness` (lattice coordinates).
pub fn ber_tope_poly(sys: &System, witness: &[Rat]) -> Result<MultiPolyQ> {
    if sys.contains_zero() {
        return Ok(MultiPolyQ::zero(sys.rank()));
    }
    check_ber_input(sys, witness)?;
    series(&sys.directions(), sys.phi(), witness)
}

pub fn ber_eval(sys: &System, v: &[Rat]) -> Result<Rat> {
    if sys.contains_zero() {
        return Ok(Rat::zero());
    }
    Ok(ber_tope_poly(sys, v)?.eval(v))
}

/// Replace rational vectors by primitive lattice vectors on the same rays; the series of the
/// original list equals the returned factor times the series of the new list.
pub fn rescale_to_primitive(list: &[Vec<Rat>]) -> Result<(Vec<Vec<Int>>, Rat)> {
    let mut factor = Rat::one();
    let mut out = Vec::with_capacity(list.len());
    for v in list {
        let (p, c) = crate::exactlinalg::primitive_on_ray(v).ok_or(Error::ZeroVector)?;
        factor /= c;
        out.push(p);
    }
    Ok((out, factor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::{qvec, rat, ri, zvec};

    fn t() -> MultiPolyQ {
        MultiPolyQ::var(1, 0)
    }

    fn lin(a: i64, b: i64, c: (i64, i64)) -> MultiPolyQ {
        MultiPolyQ::linear(&[ri(a), ri(b)], rat(c.0, c.1))
    }

    #[test]
    fn independent_examples() {
        let half = qvec(&[(1, 2)]);
        let p = independent_tope_poly(&[zvec(&[1])], &[2], &half).unwrap();
        assert_eq!(p, bernoulli_polynomial(2).scale(&rat(-1, 2)));
        let p = independent_tope_poly(&[zvec(&[1])], &[2], &qvec(&[(3, 2)])).unwrap();
        assert_eq!(p, bernoulli_polynomial(2).translate(&[ri(-1)]).scale(&rat(-1, 2)));
        let p = independent_tope_poly(&[zvec(&[1, 0]), zvec(&[0, 1])], &[1, 1], &qvec(&[(1, 2), (1, 2)])).unwrap();
        assert_eq!(p, &lin(1, 0, (-1, 2)) * &lin(0, 1, (-1, 2)));
        // index-2 basis {2ω}: (1/2)(1/2 - t)
        let p = independent_tope_poly(&[zvec(&[2])], &[1], &qvec(&[(1, 4)])).unwrap();
        assert_eq!(p, (&MultiPolyQ::constant(1, rat(1, 2)) - &t()).scale(&rat(1, 2)));
    }

    #[test]
    fn one_dim_bernoulli() {
        for k in 1..=6u32 {
            let sys = System::new(1, vec![zvec(&[1]); k as usize]).unwrap();
            let p = ber_tope_poly(&sys, &qvec(&[(1, 2)])).unwrap();
            let expect = bernoulli_polynomial(k).scale(&(-Rat::one() / from_int(&factorial(k))));
            assert_eq!(p, expect);
        }
    }

    #[test]
    fn a2_polynomials() {
        let sys = System::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let p = ber_tope_poly(&sys, &qvec(&[(1, 5), (1, 2)])).unwrap();
        let expect = (&(&lin(1, -2, (1, 1)) * &lin(1, 1, (-1, 1))) * &lin(2, -1, (0, 1))).scale(&rat(-1, 6));
        assert_eq!(p, expect);
        let p = ber_tope_poly(&sys, &qvec(&[(1, 2), (1, 5)])).unwrap();
        let expect = (&(&lin(1, -2, (0, 1)) * &lin(1, 1, (-1, 1))) * &lin(2, -1, (-1, 1))).scale(&rat(-1, 6));
        assert_eq!(p, expect);
    }

    #[test]
    fn eval_and_errors() {
        let sys = System::from_i64(1, &[&[1], &[1]]).unwrap();
        assert_eq!(ber_eval(&sys, &qvec(&[(3, 10)])).unwrap(), rat(13, 600));
        let z = System::new_allow_zero(1, vec![zvec(&[0]), zvec(&[1])]).unwrap();
        assert_eq!(ber_eval(&z, &qvec(&[(3, 10)])).unwrap(), ri(0));
        assert!(matches!(ber_eval(&sys, &qvec(&[(1, 1)])), Err(Error::Irregular(_))));
        let ns = System::from_i64(2, &[&[1, 0]]).unwrap();
        assert_eq!(ber_tope_poly(&ns, &qvec(&[(1, 3), (1, 3)])).unwrap_err(), Error::NotSpanning);
    }

    #[test]
    fn rescale() {
        let (l, f) = rescale_to_primitive(&[qvec(&[(2, 1)]), qvec(&[(-1, 3)])]).unwrap();
        assert_eq!(l, vec![zvec(&[1]), zvec(&[-1])]);
        assert_eq!(f, rat(3, 2));
    }
}
