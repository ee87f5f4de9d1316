use num_traits::Zero;

use super::system::System;
use super::combinations;
use crate::exactlinalg::{dot_zq, primitive_equation, rank_of_z, to_q, Int, Rat};

/// A hyperplane spanned by elements of `Φ`, with primitive integer equation `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub normal: Vec<Int>,
    /// `r-1` independent elements of `Φ` spanning the wall.
    pub span: Vec<Vec<Int>>,
    /// Indices of the elements of `Φ` lying in the wall.
    pub members: Vec<usize>,
}

impl Wall {
    pub fn pairing(&self, v: &[Rat]) -> Rat {
        dot_zq(&self.normal, v)
    }

    pub fn span_q(&self) -> Vec<Vec<Rat>> {
        self.span.iter().map(|v| to_q(v)).collect()
    }
}

pub(super) fn compute_walls(sys: &System) -> Vec<Wall> {
    let r = sys.rank();
    if r == 0 {
        return Vec::new();
    }
    let dirs = sys.directions();
    let mut walls: Vec<Wall> = Vec::new();
    for combo in combinations(dirs.len(), r - 1) {
        let span: Vec<Vec<Int>> = combo.iter().map(|&i| dirs[i].clone()).collect();
        if rank_of_z(&span, r) != r - 1 {
            continue;
        }
        let q: Vec<Vec<Rat>> = span.iter().map(|v| to_q(v)).collect();
        let normal = primitive_equation(&q, r).expect("independent r-1 vectors span a hyperplane");
        if walls.iter().any(|w| w.normal == normal) {
            continue;
        }
        let members = (0..sys.len())
            .filter(|&i| crate::exactlinalg::dot_z(&normal, &sys.phi()[i]).is_zero())
            .collect();
        walls.push(Wall { normal, span, members });
    }
    walls.sort_by(|a, b| a.normal.cmp(&b.normal));
    walls
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::zvec;

    #[test]
    fn wall_counts() {
        let s = System::from_i64(2, &[&[1, 0], &[0, 1]]).unwrap();
        let normals: Vec<_> = s.walls().unwrap().iter().map(|w| w.normal.clone()).collect();
        assert_eq!(normals, vec![zvec(&[0, 1]), zvec(&[1, 0])]);
        let a2 = System::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        assert_eq!(a2.walls().unwrap().len(), 3);
        let b2 = System::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, -1]]).unwrap();
        assert_eq!(b2.walls().unwrap().len(), 4);
        let one = System::from_i64(1, &[&[1], &[1]]).unwrap();
        assert_eq!(one.walls().unwrap()[0].normal, zvec(&[1]));
        assert!(System::from_i64(2, &[&[1, 0]]).unwrap().walls().is_err());
    }

    #[test]
    fn normals_are_primitive_and_vanish_on_members() {
        let s = System::from_i64(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[0, 2, 2]]).unwrap();
        for w in s.walls().unwrap() {
            assert_eq!(crate::exactlinalg::gcd_all(&w.normal), Int::from(1));
            for &m in &w.members {
                assert!(crate::exactlinalg::dot_z(&w.normal, &s.phi()[m]).is_zero());
            }
        }
    }
}
