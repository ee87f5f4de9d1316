use num_traits::{One, Signed, Zero};

use super::polytope::Polytope;
use crate::arrangement::System;
use crate::error::{Error, Result};
use crate::exactlinalg::{dot_zq, fmt_vec, from_int, lattice_quotient, rank_of_z, to_q, Int, LatticeQuotient, MatQ, Rat};
use crate::polynomials::MultiPolyQ;

/// A list polarized by a covector `u`: elements with `⟨x,u⟩ < 0` are negated, and the
/// spline picks up the sign `(-1)^{#negated}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplineSpec {
    pub list: Vec<Vec<Int>>,
    pub u: Vec<Rat>,
    pub sign: i32,
    pub flipped: Vec<Vec<Int>>,
}

impl SplineSpec {
    pub fn polarize(list: &[Vec<Int>], u: &[Rat]) -> Result<Self> {
        let mut sign = 1;
        let mut flipped = Vec::with_capacity(list.len());
        for x in list {
            let p = dot_zq(x, u);
            if p.is_zero() {
                return Err(Error::InvalidPolarization(format!(
                    "{} vanishes on {}",
                    fmt_vec(u),
                    fmt_vec(&to_q(x))
                )));
            }
            if p.is_negative() {
                sign = -sign;
                flipped.push(x.iter().map(|c| -c.clone()).collect());
            } else {
                flipped.push(x.clone());
            }
        }
        Ok(SplineSpec { list: list.to_vec(), u: u.to_vec(), sign, flipped })
    }

    /// The list itself, valid when it already lies in an open half space.
    pub fn unpolarized(list: &[Vec<Int>]) -> Self {
        SplineSpec { list: list.to_vec(), u: Vec::new(), sign: 1, flipped: list.to_vec() }
    }

    pub fn sign_q(&self) -> Rat {
        Rat::from_integer(self.sign.into())
    }
}

/// Whether no nontrivial nonnegative combination of the list vanishes.
pub fn is_pointed(list: &[Vec<Int>], r: usize) -> bool {
    let q = list.len();
    if q == 0 {
        return true;
    }
    // {t >= 0, Σ t_i x_i = 0, Σ t_i = 1} is empty
    let mut ineqs = Vec::new();
    for i in 0..q {
        let mut a = vec![Rat::zero(); q];
        a[i] = -Rat::one();
        ineqs.push((a, Rat::zero()));
    }
    for k in 0..r {
        let row: Vec<Rat> = list.iter().map(|x| from_int(&x[k])).collect();
        ineqs.push((row.clone(), Rat::zero()));
        ineqs.push((row.iter().map(|c| -c).collect(), Rat::zero()));
    }
    ineqs.push((vec![Rat::one(); q], Rat::one()));
    ineqs.push((vec![-Rat::one(); q], -Rat::one()));
    Polytope::new(q, ineqs).is_empty()
}

/// Fiber of `t ↦ Σ t_i ψ̄_i` over a target in `Z^m ⊗ Q`, parametrized by the coordinates
/// `t_i`, `i ∉ J`, after solving for `t_J` exactly.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub basis: Vec<usize>,
    pub free: Vec<usize>,
    /// `|det ψ̄_J|`.
    pub index: Int,
    pub polytope: Polytope,
    /// All of `t` as `lin · t_free + offset`.
    pub lin: MatQ,
    pub offset: Vec<Rat>,
}

/// Index sets `J` such that `{ψ̄_j}` is a basis, in lexicographic order.
pub fn valid_bases(psi_bar: &[Vec<Int>], m: usize) -> Vec<Vec<usize>> {
    crate::arrangement::combinations(psi_bar.len(), m)
        .into_iter()
        .filter(|j| rank_of_z(&j.iter().map(|&i| psi_bar[i].clone()).collect::<Vec<_>>(), m) == m)
        .collect()
}

pub fn fiber(psi_bar: &[Vec<Int>], target: &[Rat], basis: &[usize]) -> Result<Fiber> {
    let m = target.len();
    let q = psi_bar.len();
    if basis.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: basis.len() });
    }
    let free: Vec<usize> = (0..q).filter(|i| !basis.contains(i)).collect();
    let n = free.len();
    let mj = MatQ::from_cols(&basis.iter().map(|&i| to_q(&psi_bar[i])).collect::<Vec<_>>(), m);
    let inv = mj.inverse().map_err(|_| Error::InvalidInput("chosen elements do not form a basis".into()))?;
    let index = mj.det().abs().to_integer();
    // t_J = inv·target - inv·Ψ̄_free·t_free
    let tj0 = inv.mul_vec(target);
    let pf = MatQ::from_cols(&free.iter().map(|&i| to_q(&psi_bar[i])).collect::<Vec<_>>(), m);
    let coupling = if n == 0 { MatQ::zeros(m, 0) } else { &inv * &pf };
    let mut lin = MatQ::zeros(q, n);
    let mut offset = vec![Rat::zero(); q];
    for (k, &i) in free.iter().enumerate() {
        lin[(i, k)] = Rat::one();
    }
    for (row, &j) in basis.iter().enumerate() {
        offset[j] = tj0[row].clone();
        for k in 0..n {
            lin[(j, k)] = -coupling[(row, k)].clone();
        }
    }
    // -t_i <= 0 for every i
    let ineqs: Vec<(Vec<Rat>, Rat)> =
        (0..q).map(|i| (lin.row(i).iter().map(|c| -c).collect(), offset[i].clone())).collect();
    Ok(Fiber { basis: basis.to_vec(), free, index, polytope: Polytope::new(n, ineqs), lin, offset })
}

/// Walls of the spline of a spanning list: `⟨E, x⟩ = 0` for the linear walls.
pub fn on_linear_wall(list: &[Vec<Int>], m: usize, x: &[Rat]) -> Result<bool> {
    if m == 0 {
        return Ok(false);
    }
    let sys = System::new(m, list.to_vec())?;
    Ok(sys.walls()?.iter().any(|w| w.pairing(x).is_zero()))
}

/// Density of `f·ds * T(Ψ)` at `v`, where `f` lives on `λ + s` in the coordinates of `chart.kernel`
/// and `Ψ` is the polarized list (its sign included).
pub fn conv_eval(chart: &LatticeQuotient, lambda: &[Int], f: &MultiPolyQ, spline: &SplineSpec, v: &[Rat]) -> Result<Rat> {
    let psi_bar: Vec<Vec<Int>> = spline.flipped.iter().map(|p| chart.project_z(p)).collect();
    let m = chart.rank();
    let j = valid_bases(&psi_bar, m)
        .into_iter()
        .next()
        .ok_or_else(|| Error::InvalidInput("projected list does not span the quotient".into()))?;
    conv_eval_with_basis(chart, lambda, f, spline, v, &j)
}

pub fn conv_eval_with_basis(
    chart: &LatticeQuotient,
    lambda: &[Int],
    f: &MultiPolyQ,
    spline: &SplineSpec,
    v: &[Rat],
    basis: &[usize],
) -> Result<Rat> {
    let r = chart.dim();
    let m = chart.rank();
    let d = r - m;
    if v.len() != r || lambda.len() != r {
        return Err(Error::DimensionMismatch { expected: r, found: v.len() });
    }
    if f.nvars() != d {
        return Err(Error::DimensionMismatch { expected: d, found: f.nvars() });
    }
    let rel: Vec<Rat> = v.iter().zip(lambda).map(|(a, b)| a - from_int(b)).collect();
    let kc = chart.kernel_coords.to_q();
    let psi = &spline.flipped;
    if m == 0 {
        // a = V: no spline factor unless Ψ is empty
        if !psi.is_empty() {
            return Err(Error::InvalidInput("elements outside the whole space".into()));
        }
        return Ok(spline.sign_q() * f.eval(&kc.mul_vec(&rel)));
    }
    let psi_bar: Vec<Vec<Int>> = psi.iter().map(|p| chart.project_z(p)).collect();
    let target = chart.project(&rel);
    if on_linear_wall(&psi_bar, m, &target)? {
        return Err(Error::NonGeneric(format!("{} lies on a wall of the spline", fmt_vec(v))));
    }
    let fib = fiber(&psi_bar, &target, basis)?;
    // point of s reached from v: rel - Σ t_i ψ_i = rel - Ψ(lin·x + offset)
    let big_psi = MatQ::from_cols(&psi.iter().map(|p| to_q(p)).collect::<Vec<_>>(), r);
    let base: Vec<Rat> = rel.iter().zip(big_psi.mul_vec(&fib.offset)).map(|(a, b)| a - b).collect();
    let n = fib.free.len();
    let g = if d == 0 {
        MultiPolyQ::constant(n, f.eval(&[]))
    } else {
        let a = if n == 0 { MatQ::zeros(d, 0) } else { (&(&kc * &big_psi) * &fib.lin).map(|c| -c) };
        f.affine_substitute(&a, &kc.mul_vec(&base))
    };
    let integral = fib.polytope.integrate(&g);
    Ok(spline.sign_q() * integral / from_int(&fib.index))
}

/// Density of the multispline `T(X)` at `v` (lattice coordinates).
pub fn spline_eval(list: &[Vec<Int>], v: &[Rat]) -> Result<Rat> {
    let r = v.len();
    for x in list {
        if x.len() != r {
            return Err(Error::DimensionMismatch { expected: r, found: x.len() });
        }
        if x.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroVector);
        }
    }
    if rank_of_z(list, r) != r {
        return Err(Error::NotSpanning);
    }
    if !is_pointed(list, r) {
        return Err(Error::NotPointed);
    }
    let chart = lattice_quotient(&[], r);
    conv_eval(&chart, &vec![Int::zero(); r], &MultiPolyQ::one(0), &SplineSpec::unpolarized(list), v)
}

/// `T(X, u) = (-1)^{#flips} T(flipped X)` at `v`.
pub fn polarized_spline_eval(list: &[Vec<Int>], u: &[Rat], v: &[Rat]) -> Result<Rat> {
    let spec = SplineSpec::polarize(list, u)?;
    Ok(spec.sign_q() * spline_eval(&spec.flipped, v)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::{qvec, rat, ri, zvec};

    #[test]
    fn examples() {
        assert_eq!(spline_eval(&[zvec(&[1, 0]), zvec(&[0, 1])], &qvec(&[(1, 2), (1, 2)])).unwrap(), ri(1));
        assert_eq!(spline_eval(&[zvec(&[1]), zvec(&[1])], &qvec(&[(7, 2)])).unwrap(), rat(7, 2));
        assert_eq!(spline_eval(&[zvec(&[1, 0]), zvec(&[0, 1]), zvec(&[1, 1])], &qvec(&[(1, 1), (2, 1)])).unwrap(), ri(1));
        assert_eq!(spline_eval(&[zvec(&[1]), zvec(&[1])], &qvec(&[(-7, 2)])).unwrap(), ri(0));
        // index 2: T([2]) = 1/2 on the positive axis
        assert_eq!(spline_eval(&[zvec(&[2])], &qvec(&[(3, 1)])).unwrap(), rat(1, 2));
    }

    #[test]
    fn polarized_examples() {
        let x = [zvec(&[1]), zvec(&[1])];
        assert_eq!(polarized_spline_eval(&x, &[ri(-1)], &qvec(&[(-2, 1)])).unwrap(), ri(2));
        assert_eq!(polarized_spline_eval(&x, &[ri(1)], &qvec(&[(-2, 1)])).unwrap(), ri(0));
        let y = [zvec(&[1, 0]), zvec(&[1, -1])];
        let v = qvec(&[(3, 1), (-1, 1)]);
        assert_eq!(polarized_spline_eval(&y, &[ri(1), ri(0)], &v).unwrap(), spline_eval(&y, &v).unwrap());
        let three = [zvec(&[1]), zvec(&[1]), zvec(&[1])];
        // T(Φ_3, -ω*) (t) = -t^2/2 for t < 0
        assert_eq!(polarized_spline_eval(&three, &[ri(-1)], &qvec(&[(-3, 1)])).unwrap(), rat(-9, 2));
    }

    #[test]
    fn errors() {
        assert_eq!(spline_eval(&[zvec(&[1]), zvec(&[-1])], &qvec(&[(1, 2)])).unwrap_err(), Error::NotPointed);
        assert!(matches!(
            spline_eval(&[zvec(&[1, 0]), zvec(&[0, 1]), zvec(&[1, 1])], &qvec(&[(1, 1), (1, 1)])),
            Err(Error::NonGeneric(_))
        ));
        assert_eq!(spline_eval(&[zvec(&[1, 0])], &qvec(&[(1, 1), (0, 1)])).unwrap_err(), Error::NotSpanning);
        assert!(matches!(SplineSpec::polarize(&[zvec(&[0, 1])], &[ri(1), ri(0)]), Err(Error::InvalidPolarization(_))));
        assert!(is_pointed(&[zvec(&[1, 0]), zvec(&[1, 1])], 2));
    }

    #[test]
    fn basis_choice_does_not_matter() {
        let x = [zvec(&[1, 0]), zvec(&[0, 1]), zvec(&[1, 1]), zvec(&[1, 2])];
        let chart = lattice_quotient(&[], 2);
        let v = qvec(&[(7, 3), (5, 2)]);
        let spec = SplineSpec::unpolarized(&x);
        let vals: Vec<Rat> = valid_bases(&x, 2)
            .iter()
            .map(|j| conv_eval_with_basis(&chart, &[Int::zero(), Int::zero()], &MultiPolyQ::one(0), &spec, &v, j).unwrap())
            .collect();
        assert_eq!(vals.len(), 6);
        assert!(vals.iter().all(|x| *x == vals[0]));
    }
}
