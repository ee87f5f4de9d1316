use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::arrangement::combinations;
use crate::exactlinalg::{factorial, from_int, rank_of, MatQ, Rat};
use crate::polynomials::MultiPolyQ;

/// `{x ∈ Q^n : a·x <= b}` for a list of rows `(a, b)`. Callers guarantee boundedness.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    n: usize,
    ineqs: Vec<(Vec<Rat>, Rat)>,
}

impl Polytope {
    pub fn new(n: usize, ineqs: Vec<(Vec<Rat>, Rat)>) -> Self {
        for (a, _) in &ineqs {
            assert_eq!(a.len(), n, "inequality length");
        }
        Polytope { n, ineqs }
    }

    pub fn dim_ambient(&self) -> usize {
        self.n
    }

    pub fn inequalities(&self) -> &[(Vec<Rat>, Rat)] {
        &self.ineqs
    }

    fn slack(&self, i: usize, x: &[Rat]) -> Rat {
        let (a, b) = &self.ineqs[i];
        b - a.iter().zip(x).fold(Rat::zero(), |acc, (p, q)| acc + p * q)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        (0..self.ineqs.len()).all(|i| !self.slack(i, x).is_negative())
    }

    /// Distinct vertices in lexicographic order.
    pub fn vertices(&self) -> Vec<Vec<Rat>> {
        let mut out: BTreeSet<Vec<Rat>> = BTreeSet::new();
        if self.n == 0 {
            if self.contains(&[]) {
                out.insert(Vec::new());
            }
            return out.into_iter().collect();
        }
        for idx in combinations(self.ineqs.len(), self.n) {
            let a = MatQ::from_rows(&idx.iter().map(|&i| self.ineqs[i].0.clone()).collect::<Vec<_>>());
            let Ok(inv) = a.inverse() else { continue };
            let b: Vec<Rat> = idx.iter().map(|&i| self.ineqs[i].1.clone()).collect();
            let x = inv.mul_vec(&b);
            if self.contains(&x) {
                out.insert(x);
            }
        }
        out.into_iter().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices().is_empty()
    }

    /// Affine dimension of the polytope, `None` when empty.
    pub fn dimension(&self) -> Option<usize> {
        affine_dim(&self.vertices())
    }

    /// Full-dimensional simplices covering the polytope (empty when it is lower dimensional).
    pub fn triangulate(&self) -> Vec<Vec<Vec<Rat>>> {
        let verts = self.vertices();
        if affine_dim(&verts) != Some(self.n) {
            return Vec::new();
        }
        let tight: Vec<Vec<bool>> = verts
            .iter()
            .map(|v| (0..self.ineqs.len()).map(|i| self.slack(i, v).is_zero()).collect())
            .collect();
        let all: Vec<usize> = (0..verts.len()).collect();
        let mut simplices = Vec::new();
        self.cone_split(&verts, &tight, &all, self.n, &mut Vec::new(), &mut simplices);
        simplices.into_iter().map(|s| s.into_iter().map(|i| verts[i].clone()).collect()).collect()
    }

    /// Pulling triangulation: cone from the first vertex over the facets avoiding it.
    fn cone_split(
        &self,
        verts: &[Vec<Rat>],
        tight: &[Vec<bool>],
        face: &[usize],
        k: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == 0 {
            let mut s = prefix.clone();
            s.push(face[0]);
            out.push(s);
            return;
        }
        let apex = face[0];
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for c in 0..self.ineqs.len() {
            if tight[apex][c] {
                continue;
            }
            let facet: Vec<usize> = face.iter().copied().filter(|&i| tight[i][c]).collect();
            if facet.len() < k || seen.contains(&facet) {
                continue;
            }
            let pts: Vec<Vec<Rat>> = facet.iter().map(|&i| verts[i].clone()).collect();
            if affine_dim(&pts) != Some(k - 1) {
                continue;
            }
            seen.insert(facet.clone());
            prefix.push(apex);
            self.cone_split(verts, tight, &facet, k - 1, prefix, out);
            prefix.pop();
        }
    }

    /// Exact `∫ f` over the polytope (Lebesgue measure on `Q^n`; for `n = 0`, evaluation at the point).
    pub fn integrate(&self, f: &MultiPolyQ) -> Rat {
        if self.n == 0 {
            return if self.contains(&[]) { f.eval(&[]) } else { Rat::zero() };
        }
        self.triangulate().iter().fold(Rat::zero(), |acc, s| acc + simplex_integral(s, f))
    }

    pub fn volume(&self) -> Rat {
        self.integrate(&MultiPolyQ::one(self.n))
    }
}

pub fn affine_dim(points: &[Vec<Rat>]) -> Option<usize> {
    let first = points.first()?;
    let diffs: Vec<Vec<Rat>> =
        points[1..].iter().map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect()).collect();
    Some(if diffs.is_empty() { 0 } else { rank_of(&diffs, first.len()) })
}

/// `∫_Δ f` over the simplex with the given `n + 1` vertices, from `∫ λ^α = α!/(n+|α|)!`
/// on the standard simplex.
pub fn simplex_integral(vertices: &[Vec<Rat>], f: &MultiPolyQ) -> Rat {
    let n = vertices.len() - 1;
    let p0 = &vertices[0];
    let cols: Vec<Vec<Rat>> =
        vertices[1..].iter().map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
    let a = MatQ::from_cols(&cols, n);
    let jac = a.det().abs();
    let g = f.affine_substitute(&a, p0);
    let mut total = Rat::zero();
    for (alpha, c) in g.terms() {
        let mut num = Rat::one();
        for &k in alpha {
            num *= from_int(&factorial(k));
        }
        let deg: u32 = alpha.iter().sum();
        total += c * num / from_int(&factorial(n as u32 + deg));
    }
    total * jac
}
