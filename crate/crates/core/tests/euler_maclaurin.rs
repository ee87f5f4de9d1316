use multiber::arrangement::System;
use multiber::eulermaclaurin::{em_terms, em_verify, TestFunction};
use multiber::exactlinalg::{qvec, rat, ri};
use multiber::polynomials::MultiPolyQ;

const STEP: f64 = 1.0 / 16.0;

#[test]
fn one_dim_phi1_and_phi2() {
    let f = TestFunction::gaussian(vec![ri(0)], ri(1)).unwrap();
    for k in 1..=3usize {
        let sys = System::from_i64(1, &vec![&[1i64][..]; k]).unwrap();
        let rep = em_verify(&sys, &f, 8, STEP).unwrap();
        assert!(rep.abs_error <= 1e-8, "k = {k}: {rep:?}");
    }
    // off-center polynomial weight
    let g = TestFunction::new(MultiPolyQ::linear(&[ri(3)], ri(1)), qvec(&[(1, 3)]), rat(1, 2)).unwrap();
    let sys = System::from_i64(1, &[&[1], &[1]]).unwrap();
    assert!(em_verify(&sys, &g, 10, STEP).unwrap().abs_error <= 1e-8);
}

#[test]
fn a2_and_b2() {
    let f = TestFunction::gaussian(vec![ri(0), ri(0)], ri(1)).unwrap();
    let a2 = System::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
    let rep = em_verify(&a2, &f, 8, STEP).unwrap();
    assert!(rep.abs_error <= 1e-6, "{rep:?}");
    // the s = V term is the plain integral π
    assert!((rep.terms.last().unwrap() - std::f64::consts::PI).abs() < 1e-10);
    let b2 = System::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, -1]]).unwrap();
    let g = TestFunction::gaussian(qvec(&[(1, 5), (-2, 7)]), rat(3, 4)).unwrap();
    assert!(em_verify(&b2, &g, 8, STEP).unwrap().abs_error <= 1e-6);
}

#[test]
fn error_shrinks_with_radius() {
    let f = TestFunction::gaussian(vec![ri(0), ri(0)], rat(1, 2)).unwrap();
    let a2 = System::from_i64(2, &[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
    let errs: Vec<f64> = (1..=6).map(|r| em_verify(&a2, &f, r, STEP).unwrap().abs_error).collect();
    for w in errs.windows(2) {
        assert!(w[1] <= w[0] + 1e-13, "{errs:?}");
    }
    assert!(errs[5] < 1e-8);
}

#[test]
fn tensor_product_terms() {
    // separable f on Z^2 with the coordinate basis: each term is a product of 1-D terms
    let f2 = TestFunction::gaussian(qvec(&[(1, 3), (-1, 4)]), ri(1)).unwrap();
    let sys2 = System::from_i64(2, &[&[1, 0], &[0, 1]]).unwrap();
    let rep2 = em_verify(&sys2, &f2, 8, STEP).unwrap();
    let one = System::from_i64(1, &[&[1]]).unwrap();
    let fx = TestFunction::gaussian(qvec(&[(1, 3)]), ri(1)).unwrap();
    let fy = TestFunction::gaussian(qvec(&[(-1, 4)]), ri(1)).unwrap();
    let rx = em_verify(&one, &fx, 8, STEP).unwrap();
    let ry = em_verify(&one, &fy, 8, STEP).unwrap();
    let terms = em_terms(&sys2).unwrap();
    for (t, value) in terms.iter().zip(&rep2.terms) {
        // 1-D terms are ordered as [s = 0, s = V]
        let x_in = t.subspace.contains(&[1.into(), 0.into()], 2);
        let y_in = t.subspace.contains(&[0.into(), 1.into()], 2);
        let expect = rx.terms[usize::from(x_in)] * ry.terms[usize::from(y_in)];
        assert!((value - expect).abs() < 1e-12, "{value} vs {expect}");
    }
}
