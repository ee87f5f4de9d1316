use super::system::System;
use crate::exactlinalg::{rank_of_z, to_q, Int, MatQ, Rat};

/// A subspace spanned by elements of `Φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleSubspace {
    /// Independent primitive directions of `Φ` spanning the subspace.
    pub basis: Vec<Vec<Int>>,
    /// Reduced row echelon form of the basis; canonical key.
    pub key: Vec<Vec<Rat>>,
}

impl AdmissibleSubspace {
    pub fn new(basis: Vec<Vec<Int>>) -> Self {
        let key = canonical_key(&basis);
        AdmissibleSubspace { basis, key }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_q(&self) -> Vec<Vec<Rat>> {
        self.basis.iter().map(|v| to_q(v)).collect()
    }

    pub fn contains(&self, v: &[Int], r: usize) -> bool {
        let mut ext = self.basis.clone();
        ext.push(v.to_vec());
        rank_of_z(&ext, r) == self.dim()
    }
}

fn canonical_key(basis: &[Vec<Int>]) -> Vec<Vec<Rat>> {
    if basis.is_empty() {
        return Vec::new();
    }
    let rows: Vec<Vec<Rat>> = basis.iter().map(|v| to_q(v)).collect();
    let rref = MatQ::from_rows(&rows).rref();
    (0..rref.pivots.len()).map(|i| rref.matrix.row(i)).collect()
}

pub(super) fn compute_subspaces(sys: &System) -> Vec<AdmissibleSubspace> {
    let r = sys.rank();
    let dirs = sys.directions();
    let mut found = vec![AdmissibleSubspace::new(Vec::new())];
    let mut frontier = found.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for s in &frontier {
            for d in &dirs {
                if s.contains(d, r) {
                    continue;
                }
                let mut b = s.basis.clone();
                b.push(d.clone());
                let cand = AdmissibleSubspace::new(b);
                if !found.iter().any(|f| f.key == cand.key) {
                    found.push(cand.clone());
                    next.push(cand);
                }
            }
        }
        frontier = next;
    }
    found.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.key.cmp(&b.key)));
    found
}
