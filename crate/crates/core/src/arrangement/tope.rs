use num_traits::One;

use super::system::System;
use super::walls::Wall;
use crate::error::{Error, Result};
use crate::exactlinalg::{dot_zq, floor, fmt_vec, from_int, to_q, Int, LatticeQuotient, Rat};

/// Connected component of the regular set, addressed by the floor of every wall equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tope {
    pub key: Vec<Int>,
    pub witness: Vec<Rat>,
}

impl Tope {
    pub fn same_region(&self, other: &Tope) -> bool {
        self.key == other.key
    }
}

pub fn is_regular(sys: &System, v: &[Rat]) -> Result<bool> {
    if v.len() != sys.rank() {
        return Err(Error::DimensionMismatch { expected: sys.rank(), found: v.len() });
    }
    Ok(sys.walls()?.iter().all(|w| !w.pairing(v).is_integer()))
}

pub fn tope_of(sys: &System, v: &[Rat]) -> Result<Tope> {
    if !is_regular(sys, v)? {
        return Err(Error::Irregular(fmt_vec(v)));
    }
    let key = sys.walls()?.iter().map(|w| floor(&w.pairing(v))).collect();
    Ok(Tope { key, witness: v.to_vec() })
}

/// Coordinates adapted to a wall: `Λ = (Λ ∩ W) ⊕ Z λ0` with `⟨E, λ0⟩ = 1`.
#[derive(Clone, Debug)]
pub struct WallFrame {
    pub wall: Wall,
    pub chart: LatticeQuotient,
    pub lambda0: Vec<Int>,
    /// `(Φ ∩ W, Λ ∩ W)` in coordinates of `chart.kernel`.
    pub restricted: System,
}

impl WallFrame {
    pub fn new(sys: &System, wall: &Wall) -> Result<Self> {
        let (restricted, chart) = sys.restriction(&wall.span_q())?;
        let c = chart.section.col(0);
        let e = crate::exactlinalg::dot_z(&wall.normal, &c);
        let lambda0 = if e.is_one() {
            c
        } else if e == -Int::one() {
            c.iter().map(|x| -x.clone()).collect()
        } else {
            return Err(Error::Internal("wall equation is not primitive on the lattice".into()));
        };
        Ok(WallFrame { wall: wall.clone(), chart, lambda0, restricted })
    }

    /// Coordinates in `Λ ∩ W` of `p - k λ0`, where `k = ⟨E, p⟩` must be an integer.
    pub fn wall_coords(&self, p: &[Rat]) -> Vec<Rat> {
        let k = dot_zq(&self.wall.normal, p);
        let shifted: Vec<Rat> = p.iter().zip(&self.lambda0).map(|(x, l)| x - &k * from_int(l)).collect();
        self.chart.kernel_coords.to_q().mul_vec(&shifted)
    }
}

/// A point on the common facet of two adjacent topes.
#[derive(Clone, Debug)]
pub struct FacetWitness {
    pub wall_index: usize,
    pub frame: WallFrame,
    /// Integer level `k` of the affine wall `⟨E, v⟩ = k` separating the topes.
    pub level: Int,
    pub point: Vec<Rat>,
    /// Whether the first tope lies on the side `⟨E, v⟩ > k`.
    pub first_above: bool,
}

pub fn facet_witness(sys: &System, t1: &Tope, t2: &Tope) -> Result<FacetWitness> {
    let walls = sys.walls()?;
    if t1.key.len() != walls.len() || t2.key.len() != walls.len() {
        return Err(Error::NotAdjacent("tope keys do not match this system".into()));
    }
    let diffs: Vec<usize> = (0..walls.len()).filter(|&i| t1.key[i] != t2.key[i]).collect();
    if diffs.len() != 1 {
        return Err(Error::NotAdjacent(format!("keys differ on {} walls", diffs.len())));
    }
    let i = diffs[0];
    let gap = &t1.key[i] - &t2.key[i];
    if gap != Int::one() && gap != -Int::one() {
        return Err(Error::NotAdjacent("keys differ by more than one level".into()));
    }
    let first_above = gap == Int::one();
    let level = t1.key[i].clone().max(t2.key[i].clone());
    let wall = &walls[i];
    let frame = WallFrame::new(sys, wall)?;
    // crossing of the segment with the separating affine wall
    let a = wall.pairing(&t1.witness);
    let b = wall.pairing(&t2.witness);
    let s = (from_int(&level) - &a) / (&b - &a);
    let cross: Vec<Rat> =
        t1.witness.iter().zip(&t2.witness).map(|(x, y)| x + &s * (y - x)).collect();
    let ok = |p: &[Rat]| -> Result<bool> {
        let inside = walls.iter().enumerate().all(|(j, w)| {
            j == i || {
                let e = w.pairing(p);
                !e.is_integer() && floor(&e) == t1.key[j]
            }
        });
        Ok(inside && (frame.restricted.rank() == 0 || is_regular(&frame.restricted, &frame.wall_coords(p))?))
    };
    if ok(&cross)? {
        return Ok(FacetWitness { wall_index: i, frame, level, point: cross, first_above });
    }
    // deterministic nudges inside the wall along lattice directions of Λ ∩ W
    let dirs: Vec<Vec<Rat>> = frame.chart.kernel.col_vecs().iter().map(|c| to_q(c)).collect();
    let mut combos: Vec<Vec<Rat>> = dirs.clone();
    if dirs.len() > 1 {
        for k in 0..dirs.len() {
            let mut d = dirs[k].clone();
            for (m, other) in dirs.iter().enumerate() {
                if m != k {
                    for (x, y) in d.iter_mut().zip(other) {
                        *x += y * Rat::new((m as i64 + 2).into(), 1.into());
                    }
                }
            }
            combos.push(d);
        }
    }
    for j in 1..=40u32 {
        let eps = Rat::new(Int::one(), num_traits::pow(Int::from(2), j as usize));
        for d in &combos {
            for sign in [1i64, -1] {
                let p: Vec<Rat> = cross
                    .iter()
                    .zip(d)
                    .map(|(x, y)| x + &eps * y * Rat::from_integer(sign.into()))
                    .collect();
                if ok(&p)? {
                    return Ok(FacetWitness { wall_index: i, frame, level, point: p, first_above });
                }
            }
        }
    }
    Err(Error::DegenerateFacet(format!("no regular point found near {}", fmt_vec(&cross))))
}

/// Distinct topes met by a grid of `grid^r` points in the box `[lo, hi)`, in key order.
/// The grid is shifted by small distinct rationals per coordinate so that it avoids walls;
/// points that still land on a wall are skipped.
pub fn topes_in_box(sys: &System, lo: &[Rat], hi: &[Rat], grid: u32) -> Result<Vec<Tope>> {
    let r = sys.rank();
    if lo.len() != r || hi.len() != r {
        return Err(Error::DimensionMismatch { expected: r, found: lo.len().min(hi.len()) });
    }
    let g = grid.max(1) as usize;
    let mut found: std::collections::BTreeMap<Vec<Int>, Tope> = std::collections::BTreeMap::new();
    let total = g.pow(r as u32);
    for idx in 0..total {
        let mut rest = idx;
        let mut p = Vec::with_capacity(r);
        for i in 0..r {
            let k = rest % g;
            rest /= g;
            let jitter = Rat::new(Int::one(), Int::from(97 * (2 * i as i64 + 3) * g as i64));
            let frac = Rat::new(Int::from(2 * k as i64 + 1), Int::from(2 * g as i64)) + jitter;
            p.push(&lo[i] + (&hi[i] - &lo[i]) * frac);
        }
        if is_regular(sys, &p)? {
            let t = tope_of(sys, &p)?;
            found.entry(t.key.clone()).or_insert(t);
        }
    }
    Ok(found.into_values().collect())
}

/// Pairs `(i, j)`, `i < j`, of topes in `topes` sharing a facet.
pub fn adjacent_pairs(sys: &System, topes: &[Tope]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..topes.len() {
        for j in i + 1..topes.len() {
            if facet_witness(sys, &topes[i], &topes[j]).is_ok() {
                out.push((i, j));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::{qvec, rat, zvec};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn a2() -> System {
        System::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    #[test]
    fn regularity_examples() {
        let s = a2();
        assert!(is_regular(&s, &qvec(&[(1, 2), (1, 3)])).unwrap());
        assert!(!is_regular(&s, &qvec(&[(1, 2), (1, 2)])).unwrap());
        assert!(!is_regular(&s, &qvec(&[(1, 1), (1, 3)])).unwrap());
        assert!(matches!(tope_of(&s, &qvec(&[(1, 2), (1, 2)])), Err(Error::Irregular(_))));
    }

    #[test]
    fn a2_facet() {
        let s = a2();
        let t1 = tope_of(&s, &qvec(&[(1, 5), (1, 2)])).unwrap();
        let t2 = tope_of(&s, &qvec(&[(1, 2), (1, 5)])).unwrap();
        let f = facet_witness(&s, &t1, &t2).unwrap();
        assert_eq!(f.frame.wall.normal, zvec(&[1, -1]));
        assert_eq!(f.level, Int::zero());
        assert_eq!(f.point, qvec(&[(7, 20), (7, 20)]));
        assert!(f.first_above == (f.frame.wall.pairing(&t1.witness) > rat(0, 1)));
        let far = tope_of(&s, &qvec(&[(7, 5), (1, 5)])).unwrap();
        assert!(matches!(facet_witness(&s, &t1, &far), Err(Error::NotAdjacent(_))));
    }

    proptest! {
        #[test]
        fn keys_match_segment_test(a in (-30i64..30, -30i64..30), b in (-30i64..30, -30i64..30)) {
            let s = System::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, -1]]).unwrap();
            let p = vec![rat(2 * a.0 + 1, 14), rat(2 * a.1 + 1, 22)];
            let q = vec![rat(2 * b.0 + 1, 14), rat(2 * b.1 + 1, 22)];
            prop_assume!(is_regular(&s, &p).unwrap() && is_regular(&s, &q).unwrap());
            let same = tope_of(&s, &p).unwrap().key == tope_of(&s, &q).unwrap().key;
            let hits = s.walls().unwrap().iter().any(|w| {
                let (x, y) = (w.pairing(&p), w.pairing(&q));
                let (lo, hi) = if x < y { (x, y) } else { (y, x) };
                lo.ceil() <= hi
            });
            prop_assert_eq!(same, !hits);
        }
    }
}
