use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{MatQ, MatZ};
use super::rat::{floor, from_int, primitive_direction, primitive_on_ray, Int, Rat};
use crate::error::{Error, Result};

fn col_op(m: &mut MatZ, c: usize, j: usize, a: [&Int; 4]) {
    // (col_c, col_j) <- (a0*col_c + a1*col_j, a2*col_c + a3*col_j)
    for i in 0..m.rows() {
        let x = m[(i, c)].clone();
        let y = m[(i, j)].clone();
        m[(i, c)] = a[0] * &x + a[1] * &y;
        m[(i, j)] = a[2] * &x + a[3] * &y;
    }
}

fn row_op(m: &mut MatZ, r: usize, j: usize, a: [&Int; 4]) {
    for k in 0..m.cols() {
        let x = m[(r, k)].clone();
        let y = m[(j, k)].clone();
        m[(r, k)] = a[0] * &x + a[1] * &y;
        m[(j, k)] = a[2] * &x + a[3] * &y;
    }
}

fn negate_col(m: &mut MatZ, c: usize) {
    for i in 0..m.rows() {
        m[(i, c)] = -m[(i, c)].clone();
    }
}

fn axpy_col(m: &mut MatZ, dst: usize, src: usize, q: &Int) {
    for i in 0..m.rows() {
        let d = q * &m[(i, src)];
        m[(i, dst)] -= d;
    }
}

/// Column-style Hermite normal form: returns `(H, U)` with `M * U = H`, `U` unimodular,
/// `H` lower echelon with positive pivots and entries left of each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(m: &MatZ) -> (MatZ, MatZ) {
    let n = m.cols();
    let mut h = m.clone();
    let mut u = MatZ::identity(n);
    let mut c = 0;
    for i in 0..m.rows() {
        if c == n {
            break;
        }
        for j in c + 1..n {
            if h[(i, j)].is_zero() {
                continue;
            }
            let a = h[(i, c)].clone();
            let b = h[(i, j)].clone();
            let e = a.extended_gcd(&b);
            let (ag, bg) = (&a / &e.gcd, &b / &e.gcd);
            let nb = -bg;
            let coeffs = [&e.x, &e.y, &nb, &ag];
            col_op(&mut h, c, j, coeffs);
            col_op(&mut u, c, j, coeffs);
        }
        if h[(i, c)].is_zero() {
            continue;
        }
        if h[(i, c)].is_negative() {
            negate_col(&mut h, c);
            negate_col(&mut u, c);
        }
        let piv = h[(i, c)].clone();
        for j in 0..c {
            let q = h[(i, j)].div_floor(&piv);
            if !q.is_zero() {
                axpy_col(&mut h, j, c, &q);
                axpy_col(&mut u, j, c, &q);
            }
        }
        c += 1;
    }
    (h, u)
}

/// Smith normal form: `(L, D, R)` with `L * M * R = D` diagonal, `L`, `R` unimodular,
/// nonnegative diagonal with each entry dividing the next.
pub fn smith_normal_form(m: &MatZ) -> (MatZ, MatZ, MatZ) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut l = MatZ::identity(rows);
    let mut r = MatZ::identity(cols);
    let one = Int::one();
    let zero = Int::zero();
    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the trailing block goes to (t,t)
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[(i, j)].is_zero()
                        && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { return (l, d, r) };
            d.swap_rows(t, bi);
            l.swap_rows(t, bi);
            d.swap_cols(t, bj);
            r.swap_cols(t, bj);
            let mut clean = true;
            for i in t + 1..rows {
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                let nq = -q;
                row_op(&mut d, i, t, [&one, &nq, &zero, &one]);
                row_op(&mut l, i, t, [&one, &nq, &zero, &one]);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                axpy_col(&mut d, j, t, &q);
                axpy_col(&mut r, j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: pull in a row containing a non-multiple
            let p = d[(t, t)].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&d[(i, j)] % &p).is_zero()));
            match bad {
                Some(i) => {
                    row_op(&mut d, t, i, [&one, &one, &zero, &one]);
                    row_op(&mut l, t, i, [&one, &one, &zero, &one]);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            for k in 0..cols {
                d[(t, k)] = -d[(t, k)].clone();
            }
            for k in 0..rows {
                l[(t, k)] = -l[(t, k)].clone();
            }
        }
    }
    (l, d, r)
}

/// Representatives of `Z^r / Λ'` reduced into the half-open parallelepiped of `sub_basis`.
pub fn coset_representatives(sub_basis: &[Vec<Int>]) -> Result<Vec<Vec<Rat>>> {
    let r = sub_basis.first().map_or(0, |v| v.len());
    if sub_basis.len() != r {
        return Err(Error::RankDeficient);
    }
    if r == 0 {
        return Ok(vec![vec![]]);
    }
    let s = MatZ::from_cols(sub_basis, r);
    let sq = s.to_q();
    let sinv = sq.inverse().map_err(|_| Error::RankDeficient)?;
    let (l, d, _) = smith_normal_form(&s);
    let linv = l.to_q().inverse()?;
    let diag: Vec<Int> = (0..r).map(|i| d[(i, i)].clone()).collect();
    let mut reps = Vec::new();
    let mut y = vec![Int::zero(); r];
    loop {
        let x = linv.mul_vec(&y.iter().map(from_int).collect::<Vec<_>>());
        let t = sinv.mul_vec(&x);
        let shift: Vec<Rat> = t.iter().map(|ti| from_int(&floor(ti))).collect();
        let red = sq.mul_vec(&shift);
        reps.push(x.iter().zip(&red).map(|(a, b)| a - b).collect());
        // odometer over the Smith box, last coordinate fastest
        let mut k = r;
        loop {
            if k == 0 {
                return Ok(reps);
            }
            k -= 1;
            y[k] += 1;
            if y[k] < diag[k] {
                break;
            }
            y[k] = Int::zero();
        }
    }
}

/// Integer covectors cutting out `span(s)`.
fn annihilator(s: &[Vec<Rat>], r: usize) -> Vec<Vec<Int>> {
    if s.is_empty() {
        return MatZ::identity(r).row_vecs();
    }
    let a = MatQ::from_rows(s);
    a.nullspace().iter().filter_map(|v| primitive_on_ray(v).map(|p| p.0)).collect()
}

/// Primitive integer equation of the hyperplane spanned by `w`.
pub fn primitive_equation(w: &[Vec<Rat>], r: usize) -> Result<Vec<Int>> {
    let ann = annihilator(w, r);
    if ann.len() != 1 {
        return Err(Error::InvalidInput(format!(
            "vectors span a subspace of codimension {}, not a hyperplane",
            ann.len()
        )));
    }
    Ok(primitive_direction(&ann[0]).expect("nonzero").0)
}

/// Chart on `V/s` in which the image of `Z^r` is `Z^{r-d}`.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    /// `(r-d) x r` integer projection, surjective onto `Z^{r-d}`, kernel `Z^r ∩ s`.
    pub projection: MatZ,
    /// `r x (r-d)` integer section with `projection * section = I`.
    pub section: MatZ,
    /// `r x d`, columns a basis of `Z^r ∩ s`.
    pub kernel: MatZ,
    /// `d x r`, coordinates along `kernel` complementary to `section`.
    pub kernel_coords: MatZ,
}

impl LatticeQuotient {
    pub fn rank(&self) -> usize {
        self.projection.rows()
    }

    pub fn dim(&self) -> usize {
        self.projection.cols()
    }

    pub fn project(&self, v: &[Rat]) -> Vec<Rat> {
        self.projection.to_q().mul_vec(v)
    }

    pub fn project_z(&self, v: &[Int]) -> Vec<Int> {
        self.projection.mul_vec(v)
    }
}

pub fn lattice_quotient(s: &[Vec<Rat>], r: usize) -> LatticeQuotient {
    let ann = annihilator(s, r);
    let k = ann.len();
    let (_, u) = if k == 0 {
        (MatZ::zeros(0, r), MatZ::identity(r))
    } else {
        hermite_normal_form(&MatZ::from_rows(&ann))
    };
    let uinv = u.to_q().inverse().expect("unimodular").map(|x| x.to_integer());
    LatticeQuotient {
        projection: uinv.block(0..k, 0..r),
        section: u.block(0..r, 0..k),
        kernel: u.block(0..r, k..r),
        kernel_coords: uinv.block(k..r, 0..r),
    }
}

/// Saturated basis of `Z^r ∩ span(s)`.
pub fn lattice_intersect(s: &[Vec<Rat>], r: usize) -> Vec<Vec<Int>> {
    lattice_quotient(s, r).kernel.col_vecs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::rat::{qvec, ri, to_q, zvec};
    use proptest::prelude::*;

    fn z(rows: &[&[i64]]) -> MatZ {
        MatZ::from_rows(&rows.iter().map(|r| zvec(r)).collect::<Vec<_>>())
    }

    fn det_z(m: &MatZ) -> Int {
        m.to_q().det().to_integer()
    }

    #[test]
    fn hnf_examples() {
        let (h, _) = hermite_normal_form(&MatZ::identity(2));
        assert_eq!(h, MatZ::identity(2));
        let swap = z(&[&[0, 1], &[1, 0]]);
        let (h, u) = hermite_normal_form(&swap);
        assert_eq!(h, MatZ::identity(2));
        assert_eq!(&swap * &u, h);
        let (h, _) = hermite_normal_form(&z(&[&[2, 2], &[0, 2]]));
        assert_eq!(h, z(&[&[2, 0], &[0, 2]]));
    }

    #[test]
    fn cosets_examples() {
        assert_eq!(coset_representatives(&[zvec(&[1, 0]), zvec(&[0, 1])]).unwrap().len(), 1);
        let reps = coset_representatives(&[zvec(&[2])]).unwrap();
        assert_eq!(reps, vec![vec![ri(0)], vec![ri(1)]]);
        let reps = coset_representatives(&[zvec(&[1, 0]), zvec(&[1, 2])]).unwrap();
        assert_eq!(reps.len(), 2);
        assert_eq!(reps[0], qvec(&[(0, 1), (0, 1)]));
        // second coset contains e2; parallelepiped reduction picks (1,1) = e2 + e1
        let diff: Vec<Rat> = reps[1].iter().zip(&qvec(&[(0, 1), (1, 1)])).map(|(a, b)| a - b).collect();
        let s = MatZ::from_cols(&[zvec(&[1, 0]), zvec(&[1, 2])], 2).to_q();
        assert!(s.inverse().unwrap().mul_vec(&diff).iter().all(|x| x.is_integer()));
        assert!(coset_representatives(&[zvec(&[1, 1])]).is_err());
    }

    #[test]
    fn equations() {
        assert_eq!(primitive_equation(&[qvec(&[(1, 1), (1, 1)])], 2).unwrap(), zvec(&[1, -1]));
        assert_eq!(primitive_equation(&[qvec(&[(1, 1), (0, 1)])], 2).unwrap(), zvec(&[0, 1]));
        let w = vec![qvec(&[(1, 1), (1, 1), (0, 1)]), qvec(&[(0, 1), (0, 1), (1, 1)])];
        assert_eq!(primitive_equation(&w, 3).unwrap(), zvec(&[1, -1, 0]));
        assert!(primitive_equation(&[qvec(&[(1, 1), (0, 1), (0, 1)])], 3).is_err());
    }

    #[test]
    fn quotient_examples() {
        let q = lattice_quotient(&[qvec(&[(1, 1), (1, 1)])], 2);
        assert_eq!(q.kernel.col_vecs().len(), 1);
        let k = &q.kernel.col_vecs()[0];
        assert!(k == &zvec(&[1, 1]) || k == &zvec(&[-1, -1]));
        let p1 = q.project_z(&zvec(&[1, 0]));
        let p2 = q.project_z(&zvec(&[0, 1]));
        assert_eq!(p1[0].abs(), Int::one());
        assert_eq!(&p1[0] + &p2[0], Int::zero());

        let q0 = lattice_quotient(&[], 2);
        assert_eq!(q0.projection.to_q().det().abs(), ri(1));
        assert!(lattice_intersect(&[], 2).is_empty());

        let qv = lattice_quotient(&[qvec(&[(1, 1), (0, 1)]), qvec(&[(0, 1), (1, 1)])], 2);
        assert_eq!(qv.rank(), 0);
        assert_eq!(qv.kernel.to_q().det().abs(), ri(1));
    }

    proptest! {
        #[test]
        fn hnf_is_unimodular_transform(entries in proptest::collection::vec(-6i64..7, 6)) {
            let m = MatZ::from_rows(&[zvec(&entries[0..3]), zvec(&entries[3..6])]);
            let (h, u) = hermite_normal_form(&m);
            prop_assert_eq!(&m * &u, h.clone());
            prop_assert_eq!(det_z(&u).abs(), Int::one());
            for i in 0..h.rows() {
                for j in i + 1..h.cols() {
                    prop_assert!(h[(i, j)].is_zero());
                }
            }
        }

        #[test]
        fn snf_diagonalizes(entries in proptest::collection::vec(-6i64..7, 9)) {
            let m = MatZ::from_rows(&[zvec(&entries[0..3]), zvec(&entries[3..6]), zvec(&entries[6..9])]);
            let (l, d, r) = smith_normal_form(&m);
            prop_assert_eq!(&(&l * &m) * &r, d.clone());
            prop_assert_eq!(det_z(&l).abs(), Int::one());
            prop_assert_eq!(det_z(&r).abs(), Int::one());
            for i in 0..3 {
                for j in 0..3 {
                    if i != j { prop_assert!(d[(i, j)].is_zero()); }
                }
                prop_assert!(!d[(i, i)].is_negative());
            }
            for i in 0..2 {
                if !d[(i, i)].is_zero() {
                    prop_assert!((&d[(i + 1, i + 1)] % &d[(i, i)]).is_zero());
                }
            }
        }

        #[test]
        fn coset_count_is_index(a in -4i64..5, b in -4i64..5, c in -4i64..5, e in -4i64..5) {
            let basis = vec![zvec(&[a, b]), zvec(&[c, e])];
            let det = a * e - b * c;
            prop_assume!(det != 0);
            let reps = coset_representatives(&basis).unwrap();
            prop_assert_eq!(reps.len() as i64, det.abs());
            let s = MatZ::from_cols(&basis, 2).to_q();
            let sinv = s.inverse().unwrap();
            for (i, x) in reps.iter().enumerate() {
                let t = sinv.mul_vec(x);
                prop_assert!(t.iter().all(|ti| *ti >= ri(0) && *ti < ri(1)));
                for y in &reps[..i] {
                    let diff: Vec<Rat> = x.iter().zip(y).map(|(p, q)| p - q).collect();
                    prop_assert!(!sinv.mul_vec(&diff).iter().all(|v| v.is_integer()));
                }
            }
        }

        #[test]
        fn intersection_is_saturated(a in -5i64..6, b in -5i64..6, c in -5i64..6) {
            prop_assume!(a != 0 || b != 0 || c != 0);
            let s = vec![to_q(&zvec(&[a, b, c]))];
            let q = lattice_quotient(&s, 3);
            let k = q.kernel.col_vecs();
            prop_assert_eq!(k.len(), 1);
            // the kernel generator is primitive and lies on the line
            let (prim, _) = primitive_direction(&zvec(&[a, b, c])).unwrap();
            let kk = primitive_direction(&k[0]).unwrap();
            prop_assert_eq!(kk.1.abs(), ri(1));
            prop_assert_eq!(kk.0, prim);
            // Smith form of the kernel basis has unit invariant factor
            let (_, d, _) = smith_normal_form(&q.kernel);
            prop_assert_eq!(d[(0, 0)].clone(), Int::one());
            prop_assert_eq!(&q.projection * &q.section, MatZ::identity(2));
            prop_assert_eq!(&q.kernel_coords * &q.kernel, MatZ::identity(1));
        }
    }
}
