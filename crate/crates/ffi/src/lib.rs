//! C ABI over the `pmds` library.
//!
//! Codes and decoders are opaque handles created and freed through this
//! interface. Every fallible function returns a [`PmdsStatus`]; on failure
//! a description is kept per thread and can be read with
//! [`pmds_last_error_message`]. Field elements are canonical integers
//! (polynomial-basis bit packing for binary fields).

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pmds::classify::classify_s1;
use pmds::construct::{build_ell1_general_s, build_s1};
use pmds::decode::{decode_generic, encode, DecodeError, ReceivedWord, StructuredParityCheck};
use pmds::field::FieldSpec;
use pmds::format::CodeFile;
use pmds::pmds::{field_size_bound_s1, mr_check, pmds_oracle, PmdsParams};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmdsStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments are inconsistent (lengths, parameters, non-field values).
    InvalidArgument = 2,
    /// Text could not be parsed as a code file.
    Parse = 3,
    /// The field is too small for the requested construction.
    FieldTooSmall = 4,
    /// The erasure pattern cannot be corrected.
    Uncorrectable = 5,
    /// The received word agrees with no codeword.
    Inconsistent = 6,
    /// The output buffer is too small; the required size was reported.
    BufferTooSmall = 7,
    /// The operation is not available for these parameters.
    Unsupported = 8,
    /// An internal panic was caught.
    Panic = 9,
}

/// Which PMDS check [`pmds_code_verify`] runs.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmdsVerifyMode {
    /// Brute-force block and puncture checks.
    Oracle = 0,
    /// Standard-form classification; needs one global parity.
    Classify = 1,
    /// Every erasure pattern against the correctable family.
    Mr = 2,
}

/// A generator matrix with its block parameters.
pub struct PmdsCode {
    file: CodeFile,
}

/// Decoder state for one code; safe to share between threads for reading.
pub struct PmdsDecoder {
    g: pmds::matrix::Matrix,
    structured: Option<StructuredParityCheck>,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into().into_bytes());
}

fn fail(status: PmdsStatus, msg: impl Into<String>) -> PmdsStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning panics into [`PmdsStatus::Panic`].
fn guard(f: impl FnOnce() -> PmdsStatus) -> PmdsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == PmdsStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(PmdsStatus::Panic, "internal panic"),
    }
}

/// Copies `s` with a terminating NUL into `buf` if it fits; always
/// reports the required size (including the NUL) through `needed`.
unsafe fn write_str(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> PmdsStatus {
    let total = s.len() + 1;
    if !needed.is_null() {
        *needed = total;
    }
    if buf.is_null() || len < total {
        return fail(PmdsStatus::BufferTooSmall, format!("need {total} bytes"));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf.cast::<u8>(), s.len());
    *buf.add(s.len()) = 0;
    PmdsStatus::Ok
}

unsafe fn cstr<'a>(p: *const c_char) -> Result<&'a str, PmdsStatus> {
    if p.is_null() {
        return Err(fail(PmdsStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(PmdsStatus::InvalidArgument, "string is not UTF-8"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pmds_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf`. Returns the
/// message length including the NUL; copies nothing if `len` is too small.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn pmds_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let total = e.len() + 1;
        if !buf.is_null() && len >= total {
            ptr::copy_nonoverlapping(e.as_ptr(), buf.cast::<u8>(), e.len());
            *buf.add(e.len()) = 0;
        }
        total
    })
}

/// Parses a code file (`field`, `params` and matrix rows).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pmds_code_parse(text: *const c_char, out: *mut *mut PmdsCode) -> PmdsStatus {
    guard(|| {
        if out.is_null() {
            return fail(PmdsStatus::NullPointer, "null output handle");
        }
        let text = match cstr(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match CodeFile::parse(text) {
            Ok(file) => {
                *out = Box::into_raw(Box::new(PmdsCode { file }));
                PmdsStatus::Ok
            }
            Err(e) => fail(PmdsStatus::Parse, e.to_string()),
        }
    })
}

/// Builds a PMDS code with `m` blocks of locality `ell`, local redundancies
/// `r[0..m]` and `s` global parities over the field named by `field`
/// (e.g. `"gf(7)"`, `"gf(2^3)"`). Supported: `s = 1`, and `ell = 1` with
/// any `1 <= s < m`.
///
/// # Safety
/// `r` must be valid for `m` reads, `field` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pmds_code_construct(
    m: usize,
    ell: usize,
    r: *const usize,
    s: usize,
    field: *const c_char,
    out: *mut *mut PmdsCode,
) -> PmdsStatus {
    guard(|| {
        if out.is_null() || r.is_null() {
            return fail(PmdsStatus::NullPointer, "null argument");
        }
        let field: FieldSpec = match cstr(field).map(str::parse) {
            Ok(Ok(f)) => f,
            Ok(Err(e)) => return fail(PmdsStatus::InvalidArgument, e.to_string()),
            Err(s) => return s,
        };
        let r = std::slice::from_raw_parts(r, m).to_vec();
        let params = match PmdsParams::with_s(m, ell, r, s) {
            Ok(p) => p,
            Err(e) => return fail(PmdsStatus::InvalidArgument, e.to_string()),
        };
        let built = if s == 1 {
            build_s1(&params, &field)
        } else if ell == 1 {
            build_ell1_general_s(m, s, &params.r, &field)
        } else {
            return fail(PmdsStatus::Unsupported, "constructions cover s = 1, and l = 1 with any s");
        };
        match built {
            Ok(g) => {
                let file = CodeFile::new(params, g).expect("builder output matches parameters");
                *out = Box::into_raw(Box::new(PmdsCode { file }));
                PmdsStatus::Ok
            }
            Err(e @ pmds::construct::ConstructError::FieldTooSmall { .. }) => {
                fail(PmdsStatus::FieldTooSmall, e.to_string())
            }
            Err(e) => fail(PmdsStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Frees a code. Null is ignored.
///
/// # Safety
/// `code` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pmds_code_free(code: *mut PmdsCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Reports the dimension `k`, length `n` and field order `q`. Null
/// outputs are skipped.
///
/// # Safety
/// `code` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn pmds_code_dims(code: *const PmdsCode, k: *mut usize, n: *mut usize, q: *mut u32) -> PmdsStatus {
    guard(|| {
        let Some(code) = code.as_ref() else {
            return fail(PmdsStatus::NullPointer, "null code");
        };
        let p = &code.file.params;
        if !k.is_null() {
            *k = p.k;
        }
        if !n.is_null() {
            *n = p.n();
        }
        if !q.is_null() {
            *q = code.file.field().order();
        }
        PmdsStatus::Ok
    })
}

/// Writes the canonical code file text, NUL-terminated, into `buf`.
/// `needed` receives the required size including the NUL, so a first call
/// with a null buffer can size the second.
///
/// # Safety
/// `code` must be live; `buf` null or valid for `len` bytes; `needed` null or writable.
#[no_mangle]
pub unsafe extern "C" fn pmds_code_to_text(
    code: *const PmdsCode,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> PmdsStatus {
    guard(|| {
        let Some(code) = code.as_ref() else {
            return fail(PmdsStatus::NullPointer, "null code");
        };
        write_str(&code.file.to_text(), buf, len, needed)
    })
}

/// Checks whether the code is PMDS (or, for [`PmdsVerifyMode::Mr`],
/// maximally recoverable) and stores the verdict in `is_pmds`.
///
/// # Safety
/// `code` must be live and `is_pmds` writable.
#[no_mangle]
pub unsafe extern "C" fn pmds_code_verify(code: *const PmdsCode, mode: PmdsVerifyMode, is_pmds: *mut bool) -> PmdsStatus {
    guard(|| {
        let Some(code) = code.as_ref() else {
            return fail(PmdsStatus::NullPointer, "null code");
        };
        if is_pmds.is_null() {
            return fail(PmdsStatus::NullPointer, "null output");
        }
        let (g, p) = (&code.file.matrix, &code.file.params);
        let verdict = match mode {
            PmdsVerifyMode::Oracle => pmds_oracle(g, p).map(|v| v.is_pmds),
            PmdsVerifyMode::Classify if p.s() != 1 => {
                return fail(PmdsStatus::Unsupported, "classification needs s = 1");
            }
            PmdsVerifyMode::Classify => classify_s1(g, p).map(|v| v.is_pmds),
            PmdsVerifyMode::Mr => mr_check(g, p).map(|v| v.holds),
        };
        match verdict {
            Ok(v) => {
                *is_pmds = v;
                PmdsStatus::Ok
            }
            Err(e) => fail(PmdsStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// `codeword[0..n] = message[0..k] · G`.
///
/// # Safety
/// `message` valid for `k` reads, `codeword` for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn pmds_code_encode(
    code: *const PmdsCode,
    message: *const u32,
    k: usize,
    codeword: *mut u32,
    n: usize,
) -> PmdsStatus {
    guard(|| {
        let Some(code) = code.as_ref() else {
            return fail(PmdsStatus::NullPointer, "null code");
        };
        if message.is_null() || codeword.is_null() {
            return fail(PmdsStatus::NullPointer, "null buffer");
        }
        let p = &code.file.params;
        if k != p.k || n != p.n() {
            return fail(PmdsStatus::InvalidArgument, format!("expected k={}, n={}", p.k, p.n()));
        }
        let msg = std::slice::from_raw_parts(message, k);
        let f = code.file.field();
        if let Some(v) = msg.iter().find(|&&v| !f.contains(v)) {
            return fail(PmdsStatus::InvalidArgument, format!("{v} is not an element of {f}"));
        }
        match encode(&code.file.matrix, msg) {
            Ok(cw) => {
                std::slice::from_raw_parts_mut(codeword, n).copy_from_slice(&cw);
                PmdsStatus::Ok
            }
            Err(e) => fail(PmdsStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Prepares a decoder. Codes with one global parity that admit a block
/// standard form get the structured decoder; every code gets the generic
/// rank-based fallback.
///
/// # Safety
/// `code` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pmds_decoder_new(code: *const PmdsCode, out: *mut *mut PmdsDecoder) -> PmdsStatus {
    guard(|| {
        let Some(code) = code.as_ref() else {
            return fail(PmdsStatus::NullPointer, "null code");
        };
        if out.is_null() {
            return fail(PmdsStatus::NullPointer, "null output handle");
        }
        let p = &code.file.params;
        let structured = (p.s() == 1)
            .then(|| StructuredParityCheck::from_generator(&code.file.matrix, p).ok())
            .flatten();
        *out = Box::into_raw(Box::new(PmdsDecoder {
            g: code.file.matrix.clone(),
            structured,
        }));
        PmdsStatus::Ok
    })
}

/// Frees a decoder. Null is ignored.
///
/// # Safety
/// `decoder` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn pmds_decoder_free(decoder: *mut PmdsDecoder) {
    if !decoder.is_null() {
        drop(Box::from_raw(decoder));
    }
}

/// Recovers a codeword. `values[i]` is ignored where `erased[i]` is
/// nonzero. On success `codeword[0..n]` holds the result.
///
/// # Safety
/// `values`, `erased` valid for `n` reads and `codeword` for `n` writes.
#[no_mangle]
pub unsafe extern "C" fn pmds_decode(
    decoder: *const PmdsDecoder,
    values: *const u32,
    erased: *const u8,
    n: usize,
    codeword: *mut u32,
) -> PmdsStatus {
    guard(|| {
        let Some(d) = decoder.as_ref() else {
            return fail(PmdsStatus::NullPointer, "null decoder");
        };
        if values.is_null() || erased.is_null() || codeword.is_null() {
            return fail(PmdsStatus::NullPointer, "null buffer");
        }
        if n != d.g.cols() {
            return fail(PmdsStatus::InvalidArgument, format!("expected n={}", d.g.cols()));
        }
        let values = std::slice::from_raw_parts(values, n);
        let erased = std::slice::from_raw_parts(erased, n);
        let f = d.g.field();
        let word: Vec<Option<u32>> = values.iter().zip(erased).map(|(&v, &e)| (e == 0).then_some(v)).collect();
        if let Some(v) = word.iter().flatten().find(|&&v| !f.contains(v)) {
            return fail(PmdsStatus::InvalidArgument, format!("{v} is not an element of {f}"));
        }
        let rw = ReceivedWord::new(word);
        let result = match &d.structured {
            Some(h) => match h.decode_erasures(&rw) {
                Ok(out) => Ok(out.codeword),
                Err(DecodeError::OutsideFamily { .. }) => decode_generic(&d.g, &rw),
                Err(e) => Err(e),
            },
            None => decode_generic(&d.g, &rw),
        };
        match result {
            Ok(cw) => {
                std::slice::from_raw_parts_mut(codeword, n).copy_from_slice(&cw);
                PmdsStatus::Ok
            }
            Err(e @ DecodeError::Uncorrectable { .. }) => fail(PmdsStatus::Uncorrectable, e.to_string()),
            Err(e @ DecodeError::Inconsistent) => fail(PmdsStatus::Inconsistent, e.to_string()),
            Err(e) => fail(PmdsStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Smallest field order admitting a PMDS code with one global parity,
/// locality `ell` and largest local redundancy `max_r` (0 if either is 0).
#[no_mangle]
pub extern "C" fn pmds_field_size_bound_s1(ell: usize, max_r: usize) -> usize {
    if ell == 0 || max_r == 0 {
        0
    } else {
        field_size_bound_s1(ell, max_r)
    }
}
