use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arrangement::directions_of;
use crate::error::{Error, Result};
use crate::exactlinalg::{primitive_direction, rank_of_z, to_q, Int, MatQ, Rat};
use crate::polynomials::MultiPolyQ;

/// `coefficient / ∏ ⟨L[sigma[i]], x⟩^{n[i]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractionTerm {
    pub coefficient: Rat,
    /// Indices into the input list of an independent basis.
    pub sigma: Vec<usize>,
    pub n: Vec<u32>,
}

impl PartialFractionTerm {
    pub fn basis(&self, list: &[Vec<Int>]) -> Vec<Vec<Int>> {
        self.sigma.iter().map(|&i| list[i].clone()).collect()
    }
}

/// Rewrite `1/∏_{a ∈ L} ⟨a, x⟩` as a combination of `1/∏ ⟨σ_i, x⟩^{n_i}` over bases `σ ⊂ L`.
pub fn partial_fractions(list: &[Vec<Int>], r: usize) -> Result<Vec<PartialFractionTerm>> {
    let terms = partial_fractions_unchecked(list, r)?;
    verify_partial_fractions(list, r, &terms)?;
    Ok(terms)
}

pub(crate) fn partial_fractions_unchecked(list: &[Vec<Int>], r: usize) -> Result<Vec<PartialFractionTerm>> {
    if rank_of_z(list, r) != r {
        return Err(Error::NotSpanning);
    }
    let mut basis: Vec<usize> = Vec::new();
    let mut rest = Vec::new();
    for i in 0..list.len() {
        let mut cand: Vec<Vec<Int>> = basis.iter().map(|&j| list[j].clone()).collect();
        cand.push(list[i].clone());
        if basis.len() < r && rank_of_z(&cand, r) == cand.len() {
            basis.push(i);
        } else {
            rest.push(i);
        }
    }
    let mut terms = vec![PartialFractionTerm { coefficient: Rat::one(), sigma: basis, n: vec![1; r] }];
    for a in rest {
        let mut next = Vec::new();
        for t in terms {
            absorb(list, r, t, a, 1, &mut next);
        }
        terms = next;
    }
    Ok(terms)
}

/// Multiply `term` by `1/⟨a,x⟩^big_n` and reduce back to basis form.
fn absorb(list: &[Vec<Int>], r: usize, t: PartialFractionTerm, a: usize, big_n: u32, out: &mut Vec<PartialFractionTerm>) {
    let sig = MatQ::from_cols(&t.sigma.iter().map(|&i| to_q(&list[i])).collect::<Vec<_>>(), r);
    let c = sig.solve(&to_q(&list[a])).expect("basis spans");
    let nz: Vec<usize> = (0..r).filter(|&i| !c[i].is_zero()).collect();
    if nz.len() == 1 {
        let i = nz[0];
        let mut n = t.n.clone();
        n[i] += big_n;
        let coefficient = t.coefficient / num_traits::pow(c[i].clone(), big_n as usize);
        out.push(PartialFractionTerm { coefficient, sigma: t.sigma, n });
        return;
    }
    // 1 = Σ c_i σ_i / a : each piece lowers the exponent of one σ_i
    for i in nz {
        let mut n = t.n.clone();
        n[i] -= 1;
        let coefficient = &t.coefficient * &c[i];
        if n[i] == 0 {
            let mut sigma = t.sigma.clone();
            sigma[i] = a;
            n[i] = big_n + 1;
            out.push(PartialFractionTerm { coefficient, sigma, n });
        } else {
            let sub = PartialFractionTerm { coefficient, sigma: t.sigma.clone(), n };
            absorb(list, r, sub, a, big_n + 1, out);
        }
    }
}

/// Check `Σ c θ(σ,n) = θ(L)` by clearing denominators over primitive directions.
pub fn verify_partial_fractions(list: &[Vec<Int>], r: usize, terms: &[PartialFractionTerm]) -> Result<()> {
    let dirs = directions_of(list);
    // (scale, exponents per direction)
    let split = |vecs: &[(Vec<Int>, u32)]| -> (Rat, Vec<u32>) {
        let mut scale = Rat::one();
        let mut ex = vec![0u32; dirs.len()];
        for (v, k) in vecs {
            let (p, c) = primitive_direction(v).expect("nonzero");
            let d = dirs.iter().position(|x| *x == p).expect("direction of the list");
            ex[d] += k;
            scale *= num_traits::pow(c, *k as usize);
        }
        (scale, ex)
    };
    let (lscale, lex) = split(&list.iter().map(|v| (v.clone(), 1)).collect::<Vec<_>>());
    let mut parts = vec![(Rat::one() / lscale, lex)];
    for t in terms {
        let vecs: Vec<(Vec<Int>, u32)> =
            t.sigma.iter().zip(&t.n).map(|(&i, &k)| (list[i].clone(), k)).collect();
        let (s, ex) = split(&vecs);
        parts.push((-&t.coefficient / s, ex));
    }
    let mut max = vec![0u32; dirs.len()];
    for (_, ex) in &parts {
        for (m, e) in max.iter_mut().zip(ex) {
            *m = (*m).max(*e);
        }
    }
    let forms: Vec<MultiPolyQ> = dirs.iter().map(|d| MultiPolyQ::linear(&to_q(d), Rat::zero())).collect();
    let mut cache: BTreeMap<(usize, u32), MultiPolyQ> = BTreeMap::new();
    let mut total = MultiPolyQ::zero(r);
    for (c, ex) in parts {
        let mut num = MultiPolyQ::constant(r, c);
        for (d, (m, e)) in max.iter().zip(&ex).enumerate() {
            let k = m - e;
            if k > 0 {
                let f = cache.entry((d, k)).or_insert_with(|| forms[d].pow(k)).clone();
                num = &num * &f;
            }
        }
        total = &total + &num;
    }
    if total.is_zero() {
        Ok(())
    } else {
        Err(Error::Internal("partial fraction expansion does not reproduce the product".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::zvec;
    use proptest::prelude::*;

    #[test]
    fn trivial_cases() {
        let l = vec![zvec(&[1, 0]), zvec(&[0, 1])];
        let t = partial_fractions(&l, 2).unwrap();
        assert_eq!(t, vec![PartialFractionTerm { coefficient: Rat::one(), sigma: vec![0, 1], n: vec![1, 1] }]);
        let l = vec![zvec(&[1]), zvec(&[1])];
        let t = partial_fractions(&l, 1).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].n, vec![2]);
        assert_eq!(t[0].coefficient, Rat::one());
    }

    #[test]
    fn a2_expansion() {
        let l = vec![zvec(&[1, 0]), zvec(&[0, 1]), zvec(&[1, 1])];
        let t = partial_fractions(&l, 2).unwrap();
        // 1/(x1 x2 (x1+x2)) = 1/(x1 (x1+x2)^2) + 1/(x2 (x1+x2)^2)
        assert_eq!(t.len(), 2);
        for term in &t {
            assert_eq!(term.coefficient, Rat::one());
            assert!(term.sigma.contains(&2));
            let k = term.sigma.iter().position(|&i| i == 2).unwrap();
            assert_eq!(term.n[k], 2);
        }
        assert!(partial_fractions(&[zvec(&[1, 1])], 2).is_err());
    }

    #[test]
    fn wrong_expansion_rejected() {
        let l = vec![zvec(&[1, 0]), zvec(&[0, 1]), zvec(&[1, 1])];
        let bad = vec![PartialFractionTerm { coefficient: Rat::one(), sigma: vec![0, 2], n: vec![1, 2] }];
        assert!(verify_partial_fractions(&l, 2, &bad).is_err());
    }

    proptest! {
        #[test]
        fn postcondition_random(vs in proptest::collection::vec(proptest::collection::vec(-2i64..3, 2), 2..6)) {
            let l: Vec<Vec<Int>> = vs.iter().filter(|v| v.iter().any(|&x| x != 0)).map(|v| zvec(v)).collect();
            prop_assume!(rank_of_z(&l, 2) == 2);
            let t = partial_fractions_unchecked(&l, 2).unwrap();
            prop_assert!(verify_partial_fractions(&l, 2, &t).is_ok());
            for term in &t {
                prop_assert_eq!(term.n.iter().sum::<u32>() as usize, l.len());
            }
        }

        #[test]
        fn postcondition_random_3d(vs in proptest::collection::vec(proptest::collection::vec(-1i64..2, 3), 3..6)) {
            let l: Vec<Vec<Int>> = vs.iter().filter(|v| v.iter().any(|&x| x != 0)).map(|v| zvec(v)).collect();
            prop_assume!(rank_of_z(&l, 3) == 3);
            prop_assert!(partial_fractions(&l, 3).is_ok());
        }
    }
}
