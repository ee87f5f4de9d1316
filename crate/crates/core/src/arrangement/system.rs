use std::sync::OnceLock;

use num_traits::Zero;

use super::subspace::AdmissibleSubspace;
use super::walls::Wall;
use crate::error::{Error, Result};
use crate::exactlinalg::{
    fmt_vec, lattice_quotient, primitive_direction, rank_of_z, to_q, Int, LatticeQuotient, MatQ,
    Rat,
};
use crate::polynomials::MultiPolyQ;

/// A list of lattice vectors `Φ` in coordinates where the lattice is `Z^r`.
#[derive(Debug)]
pub struct System {
    rank: usize,
    phi: Vec<Vec<Int>>,
    contains_zero: bool,
    /// Columns are the lattice basis in the caller's ambient coordinates.
    basis: MatQ,
    basis_inv: MatQ,
    walls: OnceLock<Vec<Wall>>,
    subspaces: OnceLock<Vec<AdmissibleSubspace>>,
}

impl Clone for System {
    fn clone(&self) -> Self {
        System {
            rank: self.rank,
            phi: self.phi.clone(),
            contains_zero: self.contains_zero,
            basis: self.basis.clone(),
            basis_inv: self.basis_inv.clone(),
            walls: OnceLock::new(),
            subspaces: OnceLock::new(),
        }
    }
}

impl PartialEq for System {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.phi == other.phi && self.basis == other.basis
    }
}

impl System {
    /// `Φ` given directly in lattice coordinates (`Λ = Z^r`).
    pub fn new(rank: usize, phi: Vec<Vec<Int>>) -> Result<Self> {
        Self::build(rank, phi, false)
    }

    /// Like [`System::new`] but accepts the zero vector, in which case every series vanishes.
    pub fn new_allow_zero(rank: usize, phi: Vec<Vec<Int>>) -> Result<Self> {
        Self::build(rank, phi, true)
    }

    pub fn from_i64(rank: usize, phi: &[&[i64]]) -> Result<Self> {
        Self::new(rank, phi.iter().map(|v| v.iter().map(|&x| Int::from(x)).collect()).collect())
    }

    fn build(rank: usize, phi: Vec<Vec<Int>>, allow_zero: bool) -> Result<Self> {
        let mut contains_zero = false;
        for v in &phi {
            if v.len() != rank {
                return Err(Error::DimensionMismatch { expected: rank, found: v.len() });
            }
            if v.iter().all(|x| x.is_zero()) {
                if !allow_zero {
                    return Err(Error::ZeroVector);
                }
                contains_zero = true;
            }
        }
        Ok(System {
            rank,
            phi,
            contains_zero,
            basis: MatQ::identity(rank),
            basis_inv: MatQ::identity(rank),
            walls: OnceLock::new(),
            subspaces: OnceLock::new(),
        })
    }

    /// `Φ` and the lattice basis (as columns) in ambient coordinates.
    pub fn with_lattice(phi_ambient: &[Vec<Rat>], lattice_basis: &[Vec<Rat>], allow_zero: bool) -> Result<Self> {
        let r = lattice_basis.len();
        for b in lattice_basis {
            if b.len() != r {
                return Err(Error::DimensionMismatch { expected: r, found: b.len() });
            }
        }
        let basis = MatQ::from_cols(lattice_basis, r);
        let basis_inv = basis
            .inverse()
            .map_err(|_| Error::InvalidInput("lattice basis is singular".into()))?;
        let mut phi = Vec::with_capacity(phi_ambient.len());
        for v in phi_ambient {
            if v.len() != r {
                return Err(Error::DimensionMismatch { expected: r, found: v.len() });
            }
            let x = basis_inv.mul_vec(v);
            if !x.iter().all(|c| c.is_integer()) {
                return Err(Error::NotIntegral(fmt_vec(v)));
            }
            phi.push(x.into_iter().map(|c| c.to_integer()).collect());
        }
        let mut s = Self::build(r, phi, allow_zero)?;
        s.basis = basis;
        s.basis_inv = basis_inv;
        Ok(s)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn phi(&self) -> &[Vec<Int>] {
        &self.phi
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains_zero
    }

    pub fn lattice_basis(&self) -> &MatQ {
        &self.basis
    }

    pub fn spans(&self) -> bool {
        rank_of_z(&self.phi, self.rank) == self.rank
    }

    pub fn require_spanning(&self) -> Result<()> {
        if self.spans() {
            Ok(())
        } else {
            Err(Error::NotSpanning)
        }
    }

    /// Distinct primitive directions of the nonzero elements, first nonzero entry positive,
    /// in order of first appearance.
    pub fn directions(&self) -> Vec<Vec<Int>> {
        directions_of(&self.phi)
    }

    pub fn to_lattice_coords(&self, ambient: &[Rat]) -> Vec<Rat> {
        self.basis_inv.mul_vec(ambient)
    }

    pub fn to_ambient(&self, x: &[Rat]) -> Vec<Rat> {
        self.basis.mul_vec(x)
    }

    /// Re-express a polynomial in lattice coordinates as a polynomial of ambient coordinates.
    pub fn poly_to_ambient(&self, p: &MultiPolyQ) -> MultiPolyQ {
        p.affine_substitute(&self.basis_inv, &vec![Rat::zero(); self.rank])
    }

    pub fn poly_from_ambient(&self, p: &MultiPolyQ) -> MultiPolyQ {
        p.affine_substitute(&self.basis, &vec![Rat::zero(); self.rank])
    }

    /// Covector (ambient) to lattice coordinates: `x ↦ Bᵀ x`.
    pub fn covector_to_lattice(&self, e: &[Rat]) -> Vec<Rat> {
        self.basis.transpose().mul_vec(e)
    }

    /// Gram matrix given in ambient coordinates, expressed in lattice coordinates.
    pub fn gram_to_lattice(&self, g: &MatQ) -> MatQ {
        &(&self.basis.transpose() * g) * &self.basis
    }

    pub fn walls(&self) -> Result<&[Wall]> {
        self.require_spanning()?;
        Ok(self.walls.get_or_init(|| super::walls::compute_walls(self)))
    }

    pub fn admissible_subspaces(&self) -> &[AdmissibleSubspace] {
        self.subspaces.get_or_init(|| super::subspace::compute_subspaces(self))
    }

    /// Elements of `Φ` lying in the span of `s`, with their indices.
    pub fn members_in(&self, s: &[Vec<Rat>]) -> Vec<usize> {
        let d = crate::exactlinalg::rank_of(s, self.rank);
        (0..self.phi.len())
            .filter(|&i| {
                let mut ext = s.to_vec();
                ext.push(to_q(&self.phi[i]));
                crate::exactlinalg::rank_of(&ext, self.rank) == d
            })
            .collect()
    }

    /// `(Φ ∩ s, Λ ∩ s)` in coordinates of a basis of `Λ ∩ s`, plus the chart used.
    pub fn restriction(&self, s: &[Vec<Rat>]) -> Result<(System, LatticeQuotient)> {
        let q = lattice_quotient(s, self.rank);
        let kc = &q.kernel_coords;
        let members: Vec<Vec<Int>> =
            self.members_in(s).into_iter().map(|i| kc.mul_vec(&self.phi[i])).collect();
        let sub = System::build(kc.rows(), members, self.contains_zero)?;
        Ok((sub, q))
    }

    /// `(Φ \ s)` projected onto `V/s` with lattice the image of `Λ`.
    pub fn projection(&self, s: &[Vec<Rat>]) -> Result<(System, LatticeQuotient)> {
        let q = lattice_quotient(s, self.rank);
        let inside = self.members_in(s);
        let proj: Vec<Vec<Int>> = (0..self.phi.len())
            .filter(|i| !inside.contains(i))
            .map(|i| q.project_z(&self.phi[i]))
            .collect();
        let sub = System::build(q.rank(), proj, false)?;
        Ok((sub, q))
    }
}

pub fn directions_of(list: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let mut out: Vec<Vec<Int>> = Vec::new();
    for v in list {
        if let Some((p, _)) = primitive_direction(v) {
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out
}
