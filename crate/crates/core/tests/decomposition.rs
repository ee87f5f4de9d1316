use multiber::arrangement::{AdmissibleSubspace, System};
use multiber::berseries::{ber_eval, ber_tope_poly};
use multiber::exactlinalg::{lattice_quotient, qvec, rat, ri, to_q, Int, MatQ, Rat};
use multiber::polynomials::MultiPolyQ;
use multiber::splines::{
    affine_term, chamber_polynomial, contributing_affines, decomposition_eval, decomposition_terms,
    polarized_spline_eval, spline_eval, sufficient_radius, AffineTerm, Gram,
};
use proptest::prelude::*;

fn a2() -> System {
    System::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap()
}

fn lin(a: i64, b: i64, c: (i64, i64)) -> MultiPolyQ {
    MultiPolyQ::linear(&[ri(a), ri(b)], rat(c.0, c.1))
}

fn prod(fs: &[MultiPolyQ], c: Rat) -> MultiPolyQ {
    fs.iter().fold(MultiPolyQ::constant(2, c), |acc, f| &acc * f)
}

/// `a = λ + s` contains the point `p` and has direction spanned by `dir` (empty for a point).
fn is_affine(t: &AffineTerm, p: &[i64], dir: &[i64]) -> bool {
    let r = t.lambda.len();
    let rel: Vec<Rat> = t.lambda.iter().zip(p).map(|(a, b)| Rat::from_integer(a - Int::from(*b))).collect();
    let same_dir = if dir.is_empty() {
        t.dim() == 0
    } else {
        t.dim() == 1 && t.subspace.contains(&dir.iter().map(|&x| Int::from(x)).collect::<Vec<_>>(), r)
    };
    let on = t.chart.project(&rel).iter().all(|c| c == &ri(0));
    same_dir && on
}

fn paper_v() -> Vec<Rat> {
    qvec(&[(9, 5), (1, 4)])
}

fn total_poly() -> MultiPolyQ {
    prod(&[lin(1, -2, (-1, 1)), lin(2, -1, (-3, 1)), lin(1, 1, (-2, 1))], rat(-1, 6))
}

#[test]
fn a2_first_beta() {
    let sys = a2();
    let beta = qvec(&[(3, 7), (2, 11)]);
    let v = paper_v();
    let g = Gram::identity(2);
    let terms = contributing_affines(&sys, &beta, &v, &ri(6), &g).unwrap();
    assert_eq!(terms.len(), 4);
    let expected: Vec<(Vec<i64>, Vec<i64>, MultiPolyQ)> = vec![
        (vec![0, 0], vec![1, 0], prod(&[lin(1, -2, (0, 1)), lin(1, 1, (-1, 1)), lin(2, -1, (-1, 1))], rat(-1, 6))),
        (vec![1, 0], vec![0, 1], prod(&[lin(1, 0, (-1, 1)), lin(1, -2, (0, 1))], rat(1, 2))),
        (vec![0, -1], vec![1, 1], prod(&[lin(-1, -1, (0, 1)), lin(1, -1, (-1, 1))], rat(-1, 2))),
        (vec![1, 0], vec![], prod(&[lin(1, -1, (-1, 1))], ri(-1))),
    ];
    for (p, dir, poly) in &expected {
        let t = if dir == &vec![1, 0] {
            terms.iter().find(|t| t.dim() == 2).unwrap()
        } else {
            terms.iter().find(|t| is_affine(t, p, dir)).unwrap_or_else(|| panic!("no term through {p:?}"))
        };
        assert_eq!(&t.polynomial(&sys, &v).unwrap(), poly, "term through {p:?}");
    }
    let total = decomposition_eval(&sys, &beta, &v, &ri(6), &g).unwrap();
    assert_eq!(total, rat(-7, 8000));
    assert_eq!(total_poly().eval(&v), total);
    assert_eq!(ber_tope_poly(&sys, &v).unwrap(), total_poly());
    let sum = chamber_polynomial(&sys, &v, 3, |x| decomposition_eval(&sys, &beta, x, &ri(6), &g)).unwrap();
    assert_eq!(sum, total_poly());
}

#[test]
fn a2_second_beta() {
    let sys = a2();
    let beta = qvec(&[(5, 7), (4, 11)]);
    let v = paper_v();
    let g = Gram::identity(2);
    let terms = contributing_affines(&sys, &beta, &v, &ri(6), &g).unwrap();
    assert_eq!(terms.len(), 3);
    let line = terms.iter().find(|t| is_affine(t, &[1, 0], &[1, 1])).unwrap();
    assert_eq!(line.polynomial(&sys, &v).unwrap(), prod(&[lin(-1, -1, (2, 1)), lin(1, -1, (-1, 1))], rat(-1, 2)));
    let vert = terms.iter().find(|t| is_affine(t, &[1, 0], &[0, 1])).unwrap();
    assert_eq!(vert.polynomial(&sys, &v).unwrap(), prod(&[lin(1, 0, (-1, 1)), lin(1, -2, (0, 1))], rat(1, 2)));
    assert_eq!(decomposition_eval(&sys, &beta, &v, &ri(6), &g).unwrap(), rat(-7, 8000));
}

#[test]
fn one_dim_random_points() {
    let sys = System::from_i64(1, &[&[1], &[1]]).unwrap();
    let g = Gram::identity(1);
    let beta = qvec(&[(1, 2)]);
    let mut rng_state = 12345u64;
    for _ in 0..20 {
        // t = p/q in (-5, 5) \ Z
        rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let q = 2 + (rng_state >> 33) % 17;
        let p = ((rng_state >> 13) % (10 * q - 1)) as i64 - (5 * q) as i64 + 1;
        let t = rat(p, q as i64);
        if t.is_integer() {
            continue;
        }
        let v = vec![t];
        let d = decomposition_eval(&sys, &beta, &v, &ri(12), &g).unwrap();
        assert_eq!(d, ber_eval(&sys, &v).unwrap());
    }
    // t = 2.3: -B(2,2.3)/2 + 1.3 + 0.3 = -B(2,0.3)/2
    let terms = decomposition_terms(&sys, &beta, &qvec(&[(23, 10)]), &ri(12), &g).unwrap();
    let vals: Vec<Rat> = terms.iter().map(|(_, x)| x.clone()).collect();
    assert_eq!(vals, vec![rat(13, 10), rat(3, 10), rat(-947, 600)]);
    assert_eq!(vals.iter().fold(ri(0), |a, b| a + b), rat(13, 600));
}

#[test]
fn spline_homogeneity_and_derivative() {
    let x = vec![vec![Int::from(1), Int::from(0)], vec![Int::from(0), Int::from(1)], vec![Int::from(1), Int::from(1)], vec![Int::from(1), Int::from(2)]];
    let sys = System::new(2, x.clone()).unwrap();
    let v = qvec(&[(7, 5), (11, 13)]);
    for c in [rat(1, 3), rat(5, 2), ri(7)] {
        let cv: Vec<Rat> = v.iter().map(|a| a * &c).collect();
        let lhs = spline_eval(&x, &cv).unwrap();
        let rhs = spline_eval(&x, &v).unwrap() * num_traits::pow(c.clone(), x.len() - 2);
        assert_eq!(lhs, rhs);
    }
    let full = chamber_polynomial(&sys, &v, 2, |p| spline_eval(&x, p)).unwrap();
    for k in 0..x.len() {
        let rest: Vec<Vec<Int>> = x.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, y)| y.clone()).collect();
        let part = chamber_polynomial(&sys, &v, 1, |p| spline_eval(&rest, p)).unwrap();
        assert_eq!(full.directional_derivative(&to_q(&x[k])), part);
    }
    // polarized version agrees with the flipped list
    let y = vec![vec![Int::from(1), Int::from(0)], vec![Int::from(-1), Int::from(1)], vec![Int::from(0), Int::from(1)]];
    let u = qvec(&[(1, 1), (3, 1)]);
    let w = qvec(&[(-1, 3), (5, 2)]);
    let flipped = vec![y[0].clone(), vec![Int::from(1), Int::from(-1)], y[2].clone()];
    assert_eq!(polarized_spline_eval(&y, &u, &w).unwrap(), spline_eval(&y, &w).unwrap());
    assert_eq!(polarized_spline_eval(&flipped, &u, &w).unwrap(), -spline_eval(&y, &w).unwrap());
}

#[test]
fn representative_independence() {
    let sys = a2();
    let g = Gram::identity(2);
    let beta = qvec(&[(3, 7), (2, 11)]);
    let s = sys.admissible_subspaces().iter().find(|s| s.dim() == 1 && s.contains(&[Int::from(1), Int::from(1)], 2)).unwrap();
    let t1 = affine_term(&sys, s, &[Int::from(0), Int::from(-1)], &beta, &g).unwrap();
    let t2 = affine_term(&sys, s, &[Int::from(3), Int::from(2)], &beta, &g).unwrap();
    for v in [paper_v(), qvec(&[(13, 4), (2, 7)])] {
        assert_eq!(t1.eval(&v).unwrap(), t2.eval(&v).unwrap());
    }
    let whole = sys.admissible_subspaces().iter().find(|s| s.dim() == 2).unwrap();
    let t = affine_term(&sys, whole, &[Int::from(0), Int::from(0)], &beta, &g).unwrap();
    assert_eq!(t.beta0, beta);
}

#[test]
fn b2_and_gram_variants() {
    let sys = System::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, -1]]).unwrap();
    let grams = [Gram::identity(2), Gram::new(MatQ::from_rows(&[vec![ri(2), ri(1)], vec![ri(1), ri(3)]])).unwrap()];
    for g in &grams {
        for (beta, v) in [
            (qvec(&[(3, 7), (2, 11)]), qvec(&[(9, 5), (1, 4)])),
            (qvec(&[(-5, 13), (7, 9)]), qvec(&[(-13, 6), (31, 10)])),
        ] {
            let radius = sufficient_radius(&v, &beta, g);
            assert_eq!(decomposition_eval(&sys, &beta, &v, &radius, g).unwrap(), ber_eval(&sys, &v).unwrap());
        }
    }
}

/// Term of the quotient by `φ`, evaluated on `V` through the projection.
fn quotient_value(sys: &System, k: usize, s: &AdmissibleSubspace, lambda: &[Int], beta: &[Rat], g: &Gram, x: &[Rat]) -> Rat {
    let r = sys.rank();
    let phi = to_q(&sys.phi()[k]);
    let q = lattice_quotient(&[phi], r);
    let rest: Vec<Vec<Int>> =
        sys.phi().iter().enumerate().filter(|(i, _)| *i != k).map(|(_, v)| q.project_z(v)).collect();
    let sys0 = System::new(r - 1, rest).unwrap();
    let img: Vec<Vec<Int>> = s.basis.iter().map(|b| q.project_z(b)).filter(|b| b.iter().any(|c| c != &Int::from(0))).collect();
    let s0 = sys0
        .admissible_subspaces()
        .iter()
        .find(|t| t.dim() == multiber::exactlinalg::rank_of_z(&img, r - 1) && img.iter().all(|b| t.contains(b, r - 1)))
        .unwrap()
        .clone();
    let g0 = g.quotient(&q);
    let term = affine_term(&sys0, &s0, &q.project_z(lambda), &q.project(beta), &g0).unwrap();
    term.eval(&q.project(x)).unwrap()
}

#[test]
fn term_recurrence() {
    let sys = a2();
    let g = Gram::identity(2);
    let beta = qvec(&[(3, 7), (2, 11)]);
    let points = [paper_v(), qvec(&[(-3, 5), (17, 10)]), qvec(&[(5, 2), (12, 5)])];
    for s in sys.admissible_subspaces() {
        for lam in [[0i64, 0], [1, 0], [0, -1], [1, 1]] {
            let lambda: Vec<Int> = lam.iter().map(|&x| Int::from(x)).collect();
            let term = affine_term(&sys, s, &lambda, &beta, &g).unwrap();
            for v in &points {
                let base = term.polynomial(&sys, v).unwrap();
                for k in 0..sys.len() {
                    let lhs = base.directional_derivative(&to_q(&sys.phi()[k]));
                    let rest: Vec<Vec<Int>> =
                        sys.phi().iter().enumerate().filter(|(i, _)| *i != k).map(|(_, x)| x.clone()).collect();
                    let sub = System::new(2, rest).unwrap();
                    let in_s = s.contains(&sys.phi()[k], 2);
                    let sub_spans = sub.members_in(&s.basis_q()).len() >= s.dim()
                        && multiber::exactlinalg::rank_of_z(
                            &sub.members_in(&s.basis_q()).iter().map(|&i| sub.phi()[i].clone()).collect::<Vec<_>>(),
                            2,
                        ) == s.dim();
                    let first = if sub_spans {
                        let t = affine_term(&sub, s, &lambda, &beta, &g).unwrap();
                        chamber_polynomial(&sys, v, term.degree(), |x| t.eval(x)).unwrap()
                    } else {
                        MultiPolyQ::zero(2)
                    };
                    let rhs = if in_s {
                        let corr = chamber_polynomial(&sys, v, term.degree(), |x| {
                            Ok(quotient_value(&sys, k, s, &lambda, &beta, &g, x))
                        })
                        .unwrap();
                        &first - &corr
                    } else {
                        first
                    };
                    assert_eq!(lhs, rhs, "s dim {} λ {lam:?} φ {k} v {v:?}", s.dim());
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn beta_independence(b1 in 1i64..40, b2 in 1i64..40, v1 in -30i64..30, v2 in -30i64..30) {
        let sys = a2();
        let g = Gram::identity(2);
        let beta = vec![rat(2 * b1 + 1, 41), rat(2 * b2 + 1, 43)];
        let v = vec![rat(2 * v1 + 1, 14), rat(2 * v2 + 1, 18)];
        prop_assume!(multiber::arrangement::is_regular(&sys, &v).unwrap());
        let radius = sufficient_radius(&v, &beta, &g);
        let d = decomposition_eval(&sys, &beta, &v, &radius, &g);
        prop_assume!(d.is_ok());
        prop_assert_eq!(d.unwrap(), ber_eval(&sys, &v).unwrap());
    }

    #[test]
    fn radius_stability(extra in 1i64..5) {
        let sys = a2();
        let g = Gram::identity(2);
        let beta = qvec(&[(3, 7), (2, 11)]);
        let v = paper_v();
        let r0 = sufficient_radius(&v, &beta, &g);
        let base = decomposition_eval(&sys, &beta, &v, &r0, &g).unwrap();
        let n0 = contributing_affines(&sys, &beta, &v, &r0, &g).unwrap().len();
        let bigger = &r0 + ri(extra * 3);
        prop_assert_eq!(decomposition_eval(&sys, &beta, &v, &bigger, &g).unwrap(), base);
        prop_assert_eq!(contributing_affines(&sys, &beta, &v, &bigger, &g).unwrap().len(), n0);
    }
}
