use std::ffi::{CStr, CString};
use std::ptr;

use multiber_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

const A2: &str = r#"{"dimension": 2, "phi": [{"vector": ["1","0"]}, {"vector": ["0","1"]}, {"vector": ["1","1"]}]}"#;

unsafe fn system(json: &str) -> *mut MbSystem {
    let mut sys = ptr::null_mut();
    assert_eq!(mb_system_from_json(c(json).as_ptr(), &mut sys), MbStatus::Ok);
    assert!(!sys.is_null());
    sys
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    mb_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = mb_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_owned()
}

#[test]
fn ber_roundtrip() {
    unsafe {
        let sys = system(A2);
        let mut r = 0usize;
        assert_eq!(mb_system_rank(sys, &mut r), MbStatus::Ok);
        assert_eq!(r, 2);
        let mut out = ptr::null_mut();
        let mut approx = 0.0;
        assert_eq!(mb_ber_eval(sys, c("1/5,1/2").as_ptr(), &mut out, &mut approx), MbStatus::Ok);
        assert_eq!(take(out), "-1/1000");
        assert_eq!(approx, -0.001);
        assert!(mb_last_error().is_null());
        assert_eq!(mb_ber_tope_poly(sys, c("1/5,1/2").as_ptr(), &mut out), MbStatus::Ok);
        assert!(take(out).starts_with("-v1^3/3"));
        mb_system_free(sys);
    }
}

#[test]
fn jump_and_decomposition() {
    unsafe {
        let sys = system(r#"{"dimension": 1, "phi": [{"vector": ["1"], "multiplicity": 3}]}"#);
        let mut out = ptr::null_mut();
        assert_eq!(mb_jump(sys, c("1/2").as_ptr(), c("-1/2").as_ptr(), &mut out), MbStatus::Ok);
        assert_eq!(take(out), "t^2/2");
        mb_system_free(sys);
        let sys = system(A2);
        assert_eq!(mb_decompose_eval(sys, c("3/7,2/11").as_ptr(), c("9/5,1/4").as_ptr(), ptr::null(), &mut out), MbStatus::Ok);
        assert_eq!(take(out), "-7/8000");
        assert_eq!(
            mb_decompose_eval(sys, c("0,0").as_ptr(), c("9/5,1/4").as_ptr(), c("4").as_ptr(), &mut out),
            MbStatus::Genericity
        );
        assert!(last_error().contains("try beta"));
        mb_system_free(sys);
    }
}

#[test]
fn affine_and_em() {
    unsafe {
        let sys = system(r#"{"dimension": 1, "phi": [{"vector": ["1"], "z": "1/2"}]}"#);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(mb_affine_eval(sys, c("1/3").as_ptr(), &mut re, &mut im), MbStatus::Ok);
        // e^{-iπ/3}/2
        assert!((re - 0.25).abs() < 1e-12 && (im + 0.75f64.sqrt() / 2.0).abs() < 1e-12);
        mb_system_free(sys);
        let sys = system(r#"{"dimension": 1, "phi": [{"vector": ["1"]}]}"#);
        let mut err = 1.0;
        assert_eq!(mb_em_error(sys, c("1/2,1/3").as_ptr(), 8, 0.0625, &mut err), MbStatus::Ok);
        assert!(err < 1e-8);
        assert_eq!(mb_em_error(sys, c("1/2,1/3").as_ptr(), 8, 0.0, &mut err), MbStatus::Validation);
        mb_system_free(sys);
    }
}

#[test]
fn error_statuses() {
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(mb_system_from_json(ptr::null(), &mut sys), MbStatus::NullPointer);
        assert!(last_error().contains("json"));
        assert_eq!(mb_system_from_json(c("{").as_ptr(), &mut sys), MbStatus::Validation);
        assert_eq!(mb_system_from_json(c(A2).as_ptr(), ptr::null_mut()), MbStatus::NullPointer);
        let bad = [0x7bu8, 0xff, 0x7d, 0];
        assert_eq!(mb_system_from_json(bad.as_ptr() as *const _, &mut sys), MbStatus::Utf8);
        let sys = system(A2);
        let mut out = ptr::null_mut();
        assert_eq!(mb_ber_eval(sys, c("1/2,1/2").as_ptr(), &mut out, ptr::null_mut()), MbStatus::Genericity);
        assert!(last_error().contains("affine wall"));
        assert_eq!(mb_ber_eval(sys, c("1/2").as_ptr(), &mut out, ptr::null_mut()), MbStatus::Validation);
        assert_eq!(mb_ber_eval(ptr::null(), c("1/2").as_ptr(), &mut out, ptr::null_mut()), MbStatus::NullPointer);
        let mut r = 0usize;
        assert_eq!(mb_system_rank(sys, &mut r), MbStatus::Ok);
        assert!(mb_last_error().is_null());
        mb_system_free(sys);
        mb_system_free(ptr::null_mut());
        mb_string_free(ptr::null_mut());
    }
}

#[test]
fn errors_are_per_thread() {
    unsafe {
        let mut sys = ptr::null_mut();
        assert_eq!(mb_system_from_json(ptr::null(), &mut sys), MbStatus::NullPointer);
        std::thread::spawn(|| assert!(mb_last_error().is_null())).join().unwrap();
        assert!(!mb_last_error().is_null());
    }
}
