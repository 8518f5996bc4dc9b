use std::ffi::{CStr, CString};
use std::ptr;

use cubelin_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    cubelin_string_free(p);
    s
}

unsafe fn last_error() -> Option<String> {
    let p = cubelin_last_error_message();
    (!p.is_null()).then(|| CStr::from_ptr(p).to_string_lossy().into_owned())
}

unsafe fn example(name: &str) -> *mut CubelinMatrix {
    let mut m = ptr::null_mut();
    assert_eq!(cubelin_matrix_example(cstr(name).as_ptr(), &mut m), CubelinStatus::Ok);
    m
}

#[test]
fn parse_dim_and_round_trip() {
    unsafe {
        let mut m = ptr::null_mut();
        let json = cstr(r#"[["1","i"],["-1/2+3i","0"]]"#);
        assert_eq!(cubelin_matrix_parse(json.as_ptr(), &mut m), CubelinStatus::Ok);
        let (mut r, mut c) = (0usize, 0usize);
        assert_eq!(cubelin_matrix_dim(m, &mut r, &mut c), CubelinStatus::Ok);
        assert_eq!((r, c), (2, 2));
        let mut out = ptr::null_mut();
        assert_eq!(cubelin_matrix_to_json(m, &mut out), CubelinStatus::Ok);
        assert_eq!(take_string(out), r#"[["1","i"],["-1/2+3i","0"]]"#);
        cubelin_matrix_free(m);
    }
}

#[test]
fn verify_rank_two_example() {
    unsafe {
        let m = example("paper-example");
        let mut cert = CubelinCertificate::default();
        assert_eq!(cubelin_verify(m, &mut cert), CubelinStatus::Ok);
        assert_eq!(
            cert,
            CubelinCertificate {
                trace_condition_holds: true,
                delta: 0,
                rank: 2,
                bound_times_two: 4,
                theorem_satisfied: true
            }
        );
        let mut keller = false;
        assert_eq!(cubelin_is_keller(m, &mut keller), CubelinStatus::Ok);
        assert!(keller);
        cubelin_matrix_free(m);
    }
}

#[test]
fn invert_reduce_corollary_json() {
    unsafe {
        let m = example("shear-2");
        let mut out = ptr::null_mut();
        assert_eq!(cubelin_invert(m, 0, &mut out), CubelinStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["status"], "Invertible");
        assert_eq!(v["inverse"], serde_json::json!(["-x2^3 + x1", "x2"]));

        assert_eq!(cubelin_reduce(m, &mut out), CubelinStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["rank"], 1);

        assert_eq!(cubelin_corollary(m, &mut out), CubelinStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["outcome"], "diagonal_has_zero");
        cubelin_matrix_free(m);

        let p = example("paper-example");
        assert_eq!(cubelin_corollary(p, &mut out), CubelinStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["outcome"], "verified");
        assert_eq!(v["f_inverse_degree"], 9);
        cubelin_matrix_free(p);
    }
}

#[test]
fn search_summary() {
    unsafe {
        let cfg =
            cstr(r#"{"n":2,"alphabet":["0","1"],"mode":"enumerate","filters":[],"checks":["rank_bound","invert"]}"#);
        let mut out = ptr::null_mut();
        assert_eq!(cubelin_search(cfg.as_ptr(), 2, &mut out), CubelinStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["totals"]["candidates"], 16);
        assert_eq!(v["totals"]["trace_zero"], 4);
        assert_eq!(v["totals"]["keller"], 3);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(cubelin_matrix_parse(ptr::null(), &mut m), CubelinStatus::NullPointer);
        assert!(last_error().unwrap().contains("null"));

        let bad = cstr(r#"[["1","2"],["3"]]"#);
        assert_eq!(cubelin_matrix_parse(bad.as_ptr(), &mut m), CubelinStatus::ParseError);
        assert!(m.is_null());
        assert!(last_error().is_some());

        let lit = cstr(r#"[["1+"]]"#);
        assert_eq!(cubelin_matrix_parse(lit.as_ptr(), &mut m), CubelinStatus::ParseError);

        let utf8 = [0xffu8, 0];
        assert_eq!(cubelin_matrix_parse(utf8.as_ptr().cast(), &mut m), CubelinStatus::InvalidUtf8);

        assert_eq!(cubelin_matrix_example(cstr("nope").as_ptr(), &mut m), CubelinStatus::InvalidInput);
        assert!(last_error().unwrap().contains("paper-example"));

        let mut cert = CubelinCertificate::default();
        assert_eq!(cubelin_verify(ptr::null(), &mut cert), CubelinStatus::NullPointer);

        let rect = cstr(r#"[["1","0","0"],["0","1","0"]]"#);
        assert_eq!(cubelin_matrix_parse(rect.as_ptr(), &mut m), CubelinStatus::Ok);
        assert_eq!(cubelin_verify(m, &mut cert), CubelinStatus::InvalidInput);
        cubelin_matrix_free(m);

        let big = format!("[{}]", vec![format!("[{}]", ["\"0\""; 10].join(",")); 10].join(","));
        let big = cstr(&big);
        assert_eq!(cubelin_matrix_parse(big.as_ptr(), &mut m), CubelinStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(cubelin_corollary(m, &mut out), CubelinStatus::Unsupported);
        assert!(out.is_null());
        cubelin_matrix_free(m);

        let cfg = cstr(r#"{"n":3,"alphabet":["0","1","-1"],"mode":"enumerate","ceiling":1000}"#);
        assert_eq!(cubelin_search(cfg.as_ptr(), 1, &mut out), CubelinStatus::InvalidInput);
        assert!(last_error().unwrap().contains("1000"));

        // success clears the previous message
        let ok = example("zero-3");
        assert!(last_error().is_none());
        cubelin_matrix_free(ok);
        cubelin_matrix_free(ptr::null_mut());
        cubelin_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches_package() {
    let v = unsafe { CStr::from_ptr(cubelin_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
