use std::ffi::{c_char, CStr, CString};
use std::ptr;

use polyzeta_ffi::*;

unsafe fn take_string(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    pz_string_free(s);
    out
}

unsafe fn poly(text: &str) -> *mut PzPoly {
    let c = CString::new(text).unwrap();
    let mut p = ptr::null_mut();
    assert_eq!(pz_poly_parse(c.as_ptr(), &mut p), PzStatus::Ok);
    p
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(pz_last_error_message()).to_str().unwrap().to_owned() }
}

#[test]
fn poly_round_trip_and_transforms() {
    unsafe {
        let p = poly("ab");
        let mut s = ptr::null_mut();
        assert_eq!(pz_poly_to_string(p, &mut s), PzStatus::Ok);
        assert_eq!(take_string(s), "ab");
        let mut img = ptr::null_mut();
        assert_eq!(pz_poly_transform(p, PzTransform::Box, &mut img), PzStatus::Ok);
        assert_eq!(pz_poly_to_string(img, &mut s), PzStatus::Ok);
        assert_eq!(take_string(s), "2*aa + 2*ab");
        pz_poly_free(img);
        assert_eq!(pz_poly_transform(p, PzTransform::Nabla, &mut img), PzStatus::Ok);
        assert_eq!(pz_poly_to_string(img, &mut s), PzStatus::Ok);
        assert_eq!(take_string(s), "-3*aa");
        pz_poly_free(img);
        let q = poly("a");
        let mut sh = ptr::null_mut();
        assert_eq!(pz_poly_shuffle(q, q, &mut sh), PzStatus::Ok);
        assert_eq!(pz_poly_to_string(sh, &mut s), PzStatus::Ok);
        assert_eq!(take_string(s), "2*aa");
        pz_poly_free(sh);
        pz_poly_free(q);
        pz_poly_free(p);
    }
}

#[test]
fn zeta_values_and_errors() {
    unsafe {
        let mut v = ptr::null_mut();
        assert_eq!(pz_zeta([2u32].as_ptr(), 1, ptr::null(), 30, &mut v), PzStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(pz_value_to_string(v, &mut s), PzStatus::Ok);
        assert_eq!(take_string(s), "1.644934066848226436472415166646");
        assert_eq!(pz_value_error_bound(v, &mut s), PzStatus::Ok);
        assert!(take_string(s).contains("e-"));
        assert!(pz_value_terms_used(v) > 0);
        pz_value_free(v);

        let cor12 = CString::new("cor12").unwrap();
        assert_eq!(pz_zeta([3u32].as_ptr(), 1, cor12.as_ptr(), 20, &mut v), PzStatus::Ok);
        assert_eq!(pz_value_to_string(v, &mut s), PzStatus::Ok);
        assert_eq!(take_string(s), "1.20205690315959428540");
        pz_value_free(v);

        assert_eq!(pz_zeta([1u32].as_ptr(), 1, ptr::null(), 10, &mut v), PzStatus::Divergent);
        assert!(last_error().contains("divergent"));
        let bogus = CString::new("bogus").unwrap();
        assert_eq!(pz_zeta([2u32].as_ptr(), 1, bogus.as_ptr(), 10, &mut v), PzStatus::Parse);
        assert_eq!(pz_zeta([2u32, 3].as_ptr(), 2, cor12.as_ptr(), 10, &mut v), PzStatus::Precondition);
        assert_eq!(pz_zeta(ptr::null(), 1, ptr::null(), 10, &mut v), PzStatus::NullPointer);
        assert_eq!(pz_zeta([2u32].as_ptr(), 1, ptr::null(), 10, ptr::null_mut()), PzStatus::NullPointer);
        let mut p = ptr::null_mut();
        let bad = CString::new("abc").unwrap();
        assert_eq!(pz_poly_parse(bad.as_ptr(), &mut p), PzStatus::Parse);
        assert!(p.is_null());
    }
}

#[test]
fn regularized_values() {
    unsafe {
        let ba = poly("ba");
        let mut v = ptr::null_mut();
        let mut s = ptr::null_mut();
        assert_eq!(pz_zeta_reg(ba, PzSign::None, 10, &mut v), PzStatus::Ok);
        assert_eq!(pz_value_to_string(v, &mut s), PzStatus::Ok);
        assert_eq!(take_string(s), "-1.6449340668");
        pz_value_free(v);
        let a = poly("a");
        assert_eq!(pz_zeta_reg(a, PzSign::Plus, 6, &mut v), PzStatus::Ok);
        assert_eq!(pz_value_to_string(v, &mut s), PzStatus::Ok);
        assert_eq!(take_string(s), "0.000000 + 3.141593i");
        pz_value_free(v);
        pz_poly_free(a);
        pz_poly_free(ba);
    }
}

#[test]
fn series_handles() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(pz_series_random_grouplike(5, 7, &mut g), PzStatus::Ok);
        let mut ok = false;
        assert_eq!(pz_series_is_grouplike(g, &mut ok), PzStatus::Ok);
        assert!(ok);
        let mut sg = ptr::null_mut();
        assert_eq!(pz_series_transform(g, PzTransform::Sigma, &mut sg), PzStatus::Ok);
        let mut gs = ptr::null_mut();
        assert_eq!(pz_series_mul(g, sg, &mut gs), PzStatus::Ok);
        // <box(ab), g> = <ab, g σ(g)>
        let ab = poly("ab");
        let mut box_ab = ptr::null_mut();
        assert_eq!(pz_poly_transform(ab, PzTransform::Box, &mut box_ab), PzStatus::Ok);
        let (mut lhs, mut rhs) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(pz_series_pair(box_ab, g, &mut lhs), PzStatus::Ok);
        assert_eq!(pz_series_pair(ab, gs, &mut rhs), PzStatus::Ok);
        assert_eq!(take_string(lhs), take_string(rhs));
        let mut inv = ptr::null_mut();
        assert_eq!(pz_series_inv(g, &mut inv), PzStatus::Ok);
        let mut one = ptr::null_mut();
        assert_eq!(pz_series_mul(g, inv, &mut one), PzStatus::Ok);
        let unit = poly("1");
        let mut c = ptr::null_mut();
        assert_eq!(pz_series_pair(unit, one, &mut c), PzStatus::Ok);
        assert_eq!(take_string(c), "1");
        let mut x = ptr::null_mut();
        assert_eq!(pz_series_transform(g, PzTransform::Box, &mut x), PzStatus::Precondition);
        let long = poly("aaaaaa");
        assert_eq!(pz_series_pair(long, g, &mut c), PzStatus::Precondition);
        assert_eq!(pz_series_random_grouplike(13, 0, &mut x), PzStatus::Precondition);
        for p in [ab, box_ab, unit, long] {
            pz_poly_free(p);
        }
        for s in [g, sg, gs, inv, one] {
            pz_series_free(s);
        }
        pz_series_free(ptr::null_mut());
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(pz_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
