use num_traits::Zero;

use super::laurent::residue_kernel;
use crate::arrangement::{facet_witness, tope_of, Tope, Wall, WallFrame, System};
use crate::berseries::ber_tope_poly;
use crate::error::{Error, Result};
use crate::exactlinalg::{fmt_vec, from_int, to_q, Int, MatQ, Rat};
use crate::polynomials::MultiPolyQ;

/// Extend a polynomial in `Λ ∩ W` coordinates to `V` by ignoring the `⟨E, v⟩` coordinate
/// of the lattice basis `[K, λ0]`.
pub fn extend_from_wall(f: &MultiPolyQ, frame: &WallFrame) -> Result<MultiPolyQ> {
    let r = frame.lambda0.len();
    if f.nvars() + 1 != r {
        return Err(Error::DimensionMismatch { expected: r - 1, found: f.nvars() });
    }
    if r == 1 {
        return Ok(MultiPolyQ::constant(1, f.coeff(&[])));
    }
    let mut cols: Vec<Vec<Rat>> = frame.chart.kernel.col_vecs().iter().map(|c| to_q(c)).collect();
    cols.push(to_q(&frame.lambda0));
    let m = MatQ::from_cols(&cols, r);
    let minv = m.inverse()?;
    let a = minv.block(0..r - 1, 0..r);
    Ok(f.affine_substitute(&a, &vec![Rat::zero(); r - 1]))
}

/// `Pol(P, Ψ, E)` for a polynomial `P` already defined on `V`.
pub fn residue_pol_extended(p: &MultiPolyQ, psi: &[Vec<Int>], e: &[Int]) -> Result<MultiPolyQ> {
    residue_kernel(p, psi, &to_q(e))
        .ok_or_else(|| Error::InvalidPolarization(format!("E = {} vanishes on an element", fmt_vec(&to_q(e)))))
}

/// `Pol(f, Φ \ W, ±E)`: the polynomial on `V` determined by `f` on the wall (in `Λ ∩ W` coordinates).
pub fn residue_pol(sys: &System, wall: &Wall, f: &MultiPolyQ, e_sign: i32) -> Result<MultiPolyQ> {
    let frame = WallFrame::new(sys, wall)?;
    let p = extend_from_wall(f, &frame)?;
    let psi = outside(sys, wall);
    let e: Vec<Int> = wall.normal.iter().map(|x| if e_sign >= 0 { x.clone() } else { -x.clone() }).collect();
    residue_pol_extended(&p, &psi, &e)
}

fn outside(sys: &System, wall: &Wall) -> Vec<Vec<Int>> {
    (0..sys.len()).filter(|i| !wall.members.contains(i)).map(|i| sys.phi()[i].clone()).collect()
}

/// `Ber(τ1) - Ber(τ2)` for adjacent topes, computed from the wall polynomial by residues.
pub fn jump(sys: &System, t1: &Tope, t2: &Tope) -> Result<MultiPolyQ> {
    let fw = facet_witness(sys, t1, t2)?;
    let frame = &fw.frame;
    let f = if frame.restricted.rank() == 0 {
        MultiPolyQ::one(0)
    } else {
        ber_tope_poly(&frame.restricted, &frame.wall_coords(&fw.point))?
    };
    let sign = if fw.first_above { 1 } else { -1 };
    let j0 = residue_pol(sys, &frame.wall, &f, sign)?;
    // periodicity: the jump across ⟨E,v⟩ = k is the jump across ⟨E,v⟩ = 0 moved by k λ0
    let shift: Vec<Rat> = frame.lambda0.iter().map(|l| -from_int(l) * from_int(&fw.level)).collect();
    Ok(j0.translate(&shift))
}

pub fn jump_at(sys: &System, w1: &[Rat], w2: &[Rat]) -> Result<MultiPolyQ> {
    jump(sys, &tope_of(sys, w1)?, &tope_of(sys, w2)?)
}

pub fn jump_by_subtraction(sys: &System, t1: &Tope, t2: &Tope) -> Result<MultiPolyQ> {
    Ok(&ber_tope_poly(sys, &t1.witness)? - &ber_tope_poly(sys, &t2.witness)?)
}

/// Whether the residue polynomial of `P` vanishes to order `|Ψ| - 1` along the wall `⟨E, v⟩ = 0`:
/// every derivative of order below that, taken in the direction `λ0`, restricts to zero.
pub fn vanishes_to_order_on_wall(pol: &MultiPolyQ, frame: &WallFrame, order: u32) -> bool {
    let dir = to_q(&frame.lambda0);
    let mut d = pol.clone();
    for _ in 0..order {
        if !restrict_is_zero(&d, frame) {
            return false;
        }
        d = d.directional_derivative(&dir);
    }
    true
}

fn restrict_is_zero(p: &MultiPolyQ, frame: &WallFrame) -> bool {
    let k = frame.chart.kernel.to_q();
    if k.cols() == 0 {
        return p.eval(&vec![Rat::zero(); p.nvars()]).is_zero();
    }
    p.affine_substitute(&k, &vec![Rat::zero(); k.rows()]).is_zero()
}
