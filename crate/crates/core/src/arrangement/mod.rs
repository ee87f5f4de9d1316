//! Walls, regularity, topes and admissible subspaces of a vector list.

pub mod subspace;
pub mod system;
pub mod tope;
pub mod walls;

pub use subspace::AdmissibleSubspace;
pub use system::{directions_of, System};
pub use tope::{adjacent_pairs, facet_witness, topes_in_box, is_regular, tope_of, FacetWitness, Tope, WallFrame};
pub use walls::Wall;

/// All `k`-element index subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}
