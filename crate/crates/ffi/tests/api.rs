//! The C ABI exercised from Rust through the same symbols C callers use.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use pmds_ffi::*;

const GF3: &str = "field gf(3)\nparams m=2 l=2 r=1,1 k=3\n1 0 1 0 1 1\n0 1 2 0 1 1\n0 0 0 1 1 2\n";

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    let len = unsafe { pmds_last_error_message(buf.as_mut_ptr(), buf.len()) };
    assert!(len <= buf.len());
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

fn parse(text: &str) -> *mut PmdsCode {
    let c = CString::new(text).unwrap();
    let mut code = ptr::null_mut();
    assert_eq!(unsafe { pmds_code_parse(c.as_ptr(), &mut code) }, PmdsStatus::Ok);
    code
}

#[test]
fn parse_verify_encode_decode() {
    let code = parse(GF3);
    let (mut k, mut n, mut q) = (0, 0, 0);
    unsafe {
        assert_eq!(pmds_code_dims(code, &mut k, &mut n, &mut q), PmdsStatus::Ok);
        assert_eq!((k, n, q), (3, 6, 3));
        for mode in [PmdsVerifyMode::Oracle, PmdsVerifyMode::Classify, PmdsVerifyMode::Mr] {
            let mut ok = false;
            assert_eq!(pmds_code_verify(code, mode, &mut ok), PmdsStatus::Ok);
            assert!(ok);
        }
        let mut cw = [0u32; 6];
        assert_eq!(pmds_code_encode(code, [1, 1, 1].as_ptr(), 3, cw.as_mut_ptr(), 6), PmdsStatus::Ok);
        assert_eq!(cw, [1, 1, 0, 1, 0, 1]);

        let mut dec = ptr::null_mut();
        assert_eq!(pmds_decoder_new(code, &mut dec), PmdsStatus::Ok);
        let erased = [0u8, 0, 1, 1, 0, 1];
        let garbage = [1u32, 1, 9, 9, 0, 9];
        let mut out = [0u32; 6];
        assert_eq!(pmds_decode(dec, garbage.as_ptr(), erased.as_ptr(), 6, out.as_mut_ptr()), PmdsStatus::Ok);
        assert_eq!(out, cw);

        let four = [1u8, 1, 0, 1, 0, 1];
        assert_eq!(pmds_decode(dec, cw.as_ptr(), four.as_ptr(), 6, out.as_mut_ptr()), PmdsStatus::Uncorrectable);
        assert!(last_error().contains("not correctable"), "{}", last_error());
        let bad = [2u32, 1, 0, 1, 0, 0];
        let one = [0u8, 0, 0, 0, 0, 1];
        assert_eq!(pmds_decode(dec, bad.as_ptr(), one.as_ptr(), 6, out.as_mut_ptr()), PmdsStatus::Inconsistent);
        assert_eq!(pmds_decode(dec, cw.as_ptr(), one.as_ptr(), 5, out.as_mut_ptr()), PmdsStatus::InvalidArgument);
        pmds_decoder_free(dec);
        pmds_code_free(code);
    }
}

#[test]
fn text_round_trip_with_size_query() {
    let code = parse(GF3);
    unsafe {
        let mut needed = 0;
        assert_eq!(pmds_code_to_text(code, ptr::null_mut(), 0, &mut needed), PmdsStatus::BufferTooSmall);
        assert_eq!(needed, GF3.len() + 1);
        let mut buf = vec![0 as c_char; needed];
        assert_eq!(pmds_code_to_text(code, buf.as_mut_ptr(), needed, &mut needed), PmdsStatus::Ok);
        assert_eq!(CStr::from_ptr(buf.as_ptr()).to_str().unwrap(), GF3);
        pmds_code_free(code);
    }
}

#[test]
fn construct_and_errors() {
    let field = CString::new("gf(3)").unwrap();
    let mut code = ptr::null_mut();
    unsafe {
        assert_eq!(pmds_code_construct(2, 2, [1usize, 1].as_ptr(), 1, field.as_ptr(), &mut code), PmdsStatus::Ok);
        let mut ok = false;
        assert_eq!(pmds_code_verify(code, PmdsVerifyMode::Oracle, &mut ok), PmdsStatus::Ok);
        assert!(ok);
        pmds_code_free(code);

        assert_eq!(
            pmds_code_construct(2, 2, [2usize, 2].as_ptr(), 1, field.as_ptr(), &mut code),
            PmdsStatus::FieldTooSmall
        );
        assert!(last_error().contains("q >= 4"), "{}", last_error());
        assert_eq!(
            pmds_code_construct(4, 1, [1usize; 4].as_ptr(), 2, field.as_ptr(), &mut code),
            PmdsStatus::Ok
        );
        assert_eq!(pmds_code_verify(code, PmdsVerifyMode::Classify, &mut ok), PmdsStatus::Unsupported);
        pmds_code_free(code);
        assert_eq!(
            pmds_code_construct(2, 3, [1usize, 1].as_ptr(), 2, field.as_ptr(), &mut code),
            PmdsStatus::Unsupported
        );
        let bad = CString::new("gf(6)").unwrap();
        assert_eq!(
            pmds_code_construct(2, 2, [1usize, 1].as_ptr(), 1, bad.as_ptr(), &mut code),
            PmdsStatus::InvalidArgument
        );

        let text = CString::new("field gf(3)\n1 0\n").unwrap();
        assert_eq!(pmds_code_parse(text.as_ptr(), &mut code), PmdsStatus::Parse);
        assert_eq!(pmds_code_parse(ptr::null(), &mut code), PmdsStatus::NullPointer);
        assert_eq!(pmds_code_dims(ptr::null(), ptr::null_mut(), ptr::null_mut(), ptr::null_mut()), PmdsStatus::NullPointer);
        pmds_code_free(ptr::null_mut());
        pmds_decoder_free(ptr::null_mut());
    }
}

#[test]
fn mutated_code_is_not_pmds() {
    let code = parse(&GF3.replace("0 1 2 0 1 1", "0 1 0 0 1 1"));
    let mut ok = true;
    unsafe {
        assert_eq!(pmds_code_verify(code, PmdsVerifyMode::Oracle, &mut ok), PmdsStatus::Ok);
        assert!(!ok);
        pmds_code_free(code);
    }
}

#[test]
fn errors_are_per_thread() {
    let field = CString::new("gf(3)").unwrap();
    let mut code = ptr::null_mut();
    unsafe {
        pmds_code_construct(2, 2, [2usize, 2].as_ptr(), 1, field.as_ptr(), &mut code);
    }
    assert!(!last_error().is_empty());
    let other = std::thread::spawn(last_error).join().unwrap();
    assert!(other.is_empty());
}

#[test]
fn misc() {
    assert_eq!(pmds_field_size_bound_s1(3, 2), 4);
    assert_eq!(pmds_field_size_bound_s1(2, 2), 4);
    assert_eq!(pmds_field_size_bound_s1(0, 2), 0);
    let v = unsafe { CStr::from_ptr(pmds_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
