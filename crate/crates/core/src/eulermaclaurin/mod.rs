//! Numerical check of the Euler-MacLaurin identity: a lattice sum of `f` equals a signed sum,
//! over admissible subspaces `s`, of integrals of the quotient series against `∂_{Φ∖s} f`.

use gauss_quad::GaussLegendre;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::arrangement::{AdmissibleSubspace, System};
use crate::berseries::{ber_tope_poly, quotient_system, QuotientSystem};
use crate::error::{Error, Result};
use crate::exactlinalg::{floor, to_f64, to_q, Int, Rat};
use crate::polynomials::MultiPolyQ;
use crate::splines::Polytope;

/// `f(v) = p(v) · exp(-a‖v - c‖²)` in lattice coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct TestFunction {
    pub p: MultiPolyQ,
    pub center: Vec<Rat>,
    pub width: Rat,
}

impl TestFunction {
    pub fn new(p: MultiPolyQ, center: Vec<Rat>, width: Rat) -> Result<Self> {
        if !width.is_positive() {
            return Err(Error::InvalidInput("gaussian width must be positive".into()));
        }
        if p.nvars() != center.len() {
            return Err(Error::DimensionMismatch { expected: center.len(), found: p.nvars() });
        }
        Ok(TestFunction { p, center, width })
    }

    pub fn gaussian(center: Vec<Rat>, width: Rat) -> Result<Self> {
        Self::new(MultiPolyQ::one(center.len()), center, width)
    }

    /// `∂_d f`, again of the same form.
    pub fn derivative(&self, d: &[Rat]) -> TestFunction {
        let r = self.center.len();
        // ∂_d exp(-a‖v-c‖²) = -2a⟨d, v - c⟩ exp(...)
        let shift = -self.center.iter().zip(d).fold(Rat::zero(), |acc, (c, x)| acc + c * x);
        let form = MultiPolyQ::linear(d, shift).scale(&(-Rat::from_integer(2.into()) * &self.width));
        let p = &self.p.directional_derivative(d) + &(&form * &self.p);
        debug_assert_eq!(p.nvars(), r);
        TestFunction { p, center: self.center.clone(), width: self.width.clone() }
    }

    pub fn derivative_along(&self, list: &[Vec<Int>]) -> TestFunction {
        list.iter().fold(self.clone(), |f, x| f.derivative(&to_q(x)))
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        FastPoly::new(&self.p).eval(x) * self.envelope(x)
    }

    fn envelope(&self, x: &[f64]) -> f64 {
        let a = to_f64(&self.width);
        let d2: f64 = x.iter().zip(&self.center).map(|(y, c)| (y - to_f64(c)).powi(2)).sum();
        (-a * d2).exp()
    }
}

/// Polynomial with `f64` coefficients for inner loops.
#[derive(Clone, Debug)]
struct FastPoly {
    terms: Vec<(Vec<i32>, f64)>,
}

impl FastPoly {
    fn new(p: &MultiPolyQ) -> Self {
        FastPoly { terms: p.terms().map(|(e, c)| (e.iter().map(|&k| k as i32).collect(), to_f64(c))).collect() }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c * e.iter().zip(x).map(|(&k, y)| y.powi(k)).product::<f64>())
            .sum()
    }
}

/// One summand: `(-1)^{|Φ∖s|} ∫ B(Φ/s) ∂_{Φ∖s} f`.
#[derive(Clone, Debug)]
pub struct EmTerm {
    pub subspace: AdmissibleSubspace,
    pub sign: i32,
    pub quotient: QuotientSystem,
    /// `Φ ∖ s`.
    pub complement: Vec<Vec<Int>>,
}

impl EmTerm {
    /// `B(Φ/s)` on `V` near `w` (constant 1 when `s = V`).
    fn local_series(&self, w: &[Rat]) -> Result<MultiPolyQ> {
        let r = w.len();
        if self.quotient.system.rank() == 0 {
            return Ok(MultiPolyQ::one(r));
        }
        let p = ber_tope_poly(&self.quotient.system, &self.quotient.project(w))?;
        Ok(p.affine_substitute(&self.quotient.chart.projection.to_q(), &vec![Rat::zero(); self.quotient.system.rank()]))
    }
}

pub fn em_terms(sys: &System) -> Result<Vec<EmTerm>> {
    sys.require_spanning()?;
    sys.admissible_subspaces()
        .iter()
        .map(|s| {
            let quotient = quotient_system(sys, s)?;
            let inside = sys.members_in(&s.basis_q());
            let complement: Vec<Vec<Int>> =
                (0..sys.len()).filter(|i| !inside.contains(i)).map(|i| sys.phi()[i].clone()).collect();
            let sign = if complement.len() % 2 == 0 { 1 } else { -1 };
            Ok(EmTerm { subspace: s.clone(), sign, quotient, complement })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmReport {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_error: f64,
    /// Signed value of each term, in the order of [`em_terms`].
    pub terms: Vec<f64>,
}

/// Quadrature node inside the unit cell with its weight.
struct Node {
    x: Vec<f64>,
    weight: f64,
    /// Value of each term's quotient series at the node.
    series: Vec<f64>,
}

/// Pieces of `[0,1)^r` cut by the affine walls, each triangulated.
fn cell_pieces(sys: &System) -> Result<Vec<(Vec<Rat>, Vec<Vec<Vec<Rat>>>)>> {
    let r = sys.rank();
    let walls = sys.walls()?;
    let mut levels: Vec<Vec<i64>> = Vec::new();
    for w in walls {
        let lo: i64 = w.normal.iter().map(|c| c.min(&Int::zero()).clone()).sum::<Int>().try_into().unwrap_or(0);
        let hi: i64 = w.normal.iter().map(|c| c.max(&Int::zero()).clone()).sum::<Int>().try_into().unwrap_or(0);
        levels.push((lo..hi).collect());
    }
    let mut base = Vec::new();
    for i in 0..r {
        let mut a = vec![Rat::zero(); r];
        a[i] = Rat::from_integer(1.into());
        base.push((a.clone(), Rat::from_integer(1.into())));
        a[i] = Rat::from_integer((-1).into());
        base.push((a, Rat::zero()));
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; walls.len()];
    loop {
        let mut ineqs = base.clone();
        for (k, w) in walls.iter().enumerate() {
            let l = Rat::from_integer(levels[k][idx[k]].into());
            let e = to_q(&w.normal);
            ineqs.push((e.clone(), &l + Rat::from_integer(1.into())));
            ineqs.push((e.iter().map(|c| -c).collect(), -l));
        }
        let poly = Polytope::new(r, ineqs);
        let simplices = poly.triangulate();
        if !simplices.is_empty() {
            let verts = poly.vertices();
            let n = Rat::from_integer((verts.len() as i64).into());
            let centroid: Vec<Rat> =
                (0..r).map(|i| verts.iter().fold(Rat::zero(), |acc, v| acc + &v[i]) / &n).collect();
            out.push((centroid, simplices));
        }
        // odometer over level choices
        let mut k = walls.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            if idx[k] + 1 < levels[k].len() {
                idx[k] += 1;
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Collapsed Gauss rule on the simplex with the given vertices.
fn simplex_nodes(simplex: &[Vec<Rat>], rule: &GaussLegendre) -> Vec<(Vec<f64>, f64)> {
    let r = simplex.len() - 1;
    let v: Vec<Vec<f64>> = simplex.iter().map(|p| p.iter().map(to_f64).collect()).collect();
    let edges: Vec<Vec<f64>> = v[1..].iter().map(|p| p.iter().zip(&v[0]).map(|(a, b)| a - b).collect()).collect();
    let vol = {
        let cols: Vec<Vec<Rat>> = simplex[1..].iter().map(|p| p.iter().zip(&simplex[0]).map(|(a, b)| a - b).collect()).collect();
        to_f64(&crate::exactlinalg::MatQ::from_cols(&cols, r).det().abs())
    };
    let pts: Vec<(f64, f64)> = rule.iter().map(|(x, w)| ((x + 1.0) / 2.0, w / 2.0)).collect();
    let mut out = Vec::new();
    let total = pts.len().pow(r as u32);
    for idx in 0..total {
        let mut rest = idx;
        let mut remaining = 1.0;
        let mut weight = vol;
        let mut lam = Vec::with_capacity(r);
        for j in 0..r {
            let (u, w) = pts[rest % pts.len()];
            rest /= pts.len();
            lam.push(remaining * u);
            // Jacobian of the collapsed coordinates: ∏ (1 - u_j)^{r-1-j}
            weight *= w * (1.0 - u).powi((r - 1 - j) as i32);
            remaining *= 1.0 - u;
        }
        let x: Vec<f64> =
            (0..r).map(|i| v[0][i] + lam.iter().zip(&edges).map(|(l, e)| l * e[i]).sum::<f64>()).collect();
        out.push((x, weight));
    }
    out
}

/// Gauss points per direction for a nominal node spacing `step`.
pub fn gauss_points(step: f64) -> usize {
    ((1.0 / step).ceil() as usize).clamp(2, 64)
}

/// Both sides of the identity for `f`, truncated to the cells `k` with `|k_i - ⌊c_i⌋| <= radius`.
/// Integrals are taken piecewise on the tope pieces of each unit cell with a collapsed
/// Gauss-Legendre rule of [`gauss_points`]`(quad_step)` points per direction.
pub fn em_verify(sys: &System, f: &TestFunction, lattice_radius: u32, quad_step: f64) -> Result<EmReport> {
    let r = sys.rank();
    if f.center.len() != r {
        return Err(Error::DimensionMismatch { expected: r, found: f.center.len() });
    }
    if !(quad_step > 0.0) {
        return Err(Error::InvalidInput("quadrature step must be positive".into()));
    }
    let terms = em_terms(sys)?;
    let derivs: Vec<FastPoly> = terms.iter().map(|t| FastPoly::new(&f.derivative_along(&t.complement).p)).collect();
    let rule = GaussLegendre::new(gauss_points(quad_step).try_into().expect("nonzero"));
    let mut nodes = Vec::new();
    for (witness, simplices) in cell_pieces(sys)? {
        let local: Vec<FastPoly> =
            terms.iter().map(|t| t.local_series(&witness).map(|p| FastPoly::new(&p))).collect::<Result<_>>()?;
        for s in &simplices {
            for (x, weight) in simplex_nodes(s, &rule) {
                let series = local.iter().map(|p| p.eval(&x)).collect();
                nodes.push(Node { x, weight, series });
            }
        }
    }
    let base: Vec<i64> = f.center.iter().map(|c| floor(c).try_into().unwrap_or(0)).collect();
    let rad = lattice_radius as i64;
    let cells: Vec<Vec<i64>> = (0..(2 * rad + 1).pow(r as u32))
        .map(|mut idx| {
            base.iter()
                .map(|b| {
                    let k = idx % (2 * rad + 1);
                    idx /= 2 * rad + 1;
                    b - rad + k
                })
                .collect()
        })
        .collect();
    let per_cell: Vec<(f64, Vec<f64>)> = cells
        .par_iter()
        .map(|k| {
            let kf: Vec<f64> = k.iter().map(|&x| x as f64).collect();
            let lhs = f.eval_f64(&kf);
            let mut acc = vec![0.0; terms.len()];
            let mut x = vec![0.0; r];
            for node in &nodes {
                for i in 0..r {
                    x[i] = kf[i] + node.x[i];
                }
                let e = f.envelope(&x) * node.weight;
                if e == 0.0 {
                    continue;
                }
                for (t, a) in acc.iter_mut().enumerate() {
                    *a += e * node.series[t] * derivs[t].eval(&x);
                }
            }
            (lhs, acc)
        })
        .collect();
    let mut lhs = 0.0;
    let mut values = vec![0.0; terms.len()];
    for (l, acc) in per_cell {
        lhs += l;
        for (v, a) in values.iter_mut().zip(acc) {
            *v += a;
        }
    }
    for (v, t) in values.iter_mut().zip(&terms) {
        *v *= t.sign as f64;
    }
    let rhs: f64 = values.iter().sum();
    Ok(EmReport { lhs, rhs, abs_error: (lhs - rhs).abs(), terms: values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::{qvec, ri};

    #[test]
    fn term_lists() {
        let one = System::from_i64(1, &[&[1], &[1], &[1]]).unwrap();
        let t = em_terms(&one).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].sign, -1);
        assert_eq!(t[1].sign, 1);
        let a2 = System::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let t = em_terms(&a2).unwrap();
        assert_eq!(t.len(), 5);
        for term in &t {
            if term.subspace.dim() < 2 {
                // the kept elements Φ ∩ s never span
                let kept: Vec<Vec<Int>> =
                    a2.members_in(&term.subspace.basis_q()).iter().map(|&i| a2.phi()[i].clone()).collect();
                assert!(crate::exactlinalg::rank_of_z(&kept, 2) < 2);
            }
        }
    }

    #[test]
    fn derivative_of_gaussian() {
        let f = TestFunction::gaussian(qvec(&[(1, 2)]), ri(1)).unwrap();
        let d = f.derivative(&[ri(1)]);
        // d/dt e^{-(t-1/2)^2} = -2(t - 1/2) e^{...}
        assert_eq!(d.p, MultiPolyQ::linear(&[ri(-2)], ri(1)));
        let x = [0.3];
        let h = 1e-6;
        let num = (f.eval_f64(&[x[0] + h]) - f.eval_f64(&[x[0] - h])) / (2.0 * h);
        assert!((num - d.eval_f64(&x)).abs() < 1e-8);
        assert!(TestFunction::gaussian(vec![ri(0)], ri(0)).is_err());
    }

    #[test]
    fn cell_pieces_of_a2() {
        let a2 = System::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let pieces = cell_pieces(&a2).unwrap();
        assert_eq!(pieces.len(), 2);
        let b2 = System::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, -1]]).unwrap();
        assert_eq!(cell_pieces(&b2).unwrap().len(), 4);
    }

    #[test]
    fn classical_one_dim() {
        let one = System::from_i64(1, &[&[1]]).unwrap();
        let f = TestFunction::gaussian(vec![ri(0)], ri(1)).unwrap();
        let rep = em_verify(&one, &f, 8, 1.0 / 16.0).unwrap();
        assert!(rep.abs_error < 1e-12, "{rep:?}");
    }
}
