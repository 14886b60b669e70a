//! C ABI for the hecke-shuffle library.
//!
//! Conventions:
//! - All entry points return an `HsStatus` code; results come back through
//!   out-pointers. `HS_OK` (0) means success.
//! - `HsContext` is an opaque handle created by `hs_context_new` and
//!   released by `hs_context_free`.
//! - Complex numbers pass as separate `re`/`im` doubles; λ* characters pass
//!   as flat `int64_t` arrays whose length must be `copies × unit_rank`.
//! - `hs_last_error_message` returns a thread-local, NUL-terminated
//!   description of the most recent failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use hecke_shuffle::error::Error;
use hecke_shuffle::intertwiner::{
    assemble_rank2, complex_local_closed, mw_character, padic_local_closed, real_local_closed,
};
use hecke_shuffle::lfunction::{
    l_dirichlet, l_euler, l_star, phi_k, LContext, SpectralPoint, TruncationPolicy,
};
use hecke_shuffle::numberfield::{make_field, unit_lattice};
use hecke_shuffle::shuffle::Permutation;
use hecke_shuffle::Complex64;

/// Status codes returned by every FFI entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsStatus {
    HsOk = 0,
    /// A precondition or argument-domain violation (bad flag, wrong length,
    /// parameter outside the operation's window).
    HsErrInvalidArgument = 1,
    /// The requested field discriminant is not whitelisted.
    HsErrNotWhitelisted = 2,
    /// A truncated evaluation could not meet its tolerance.
    HsErrNotConverged = 3,
    /// Evaluation too close to a pole.
    HsErrPole = 4,
    /// Analytic continuation is not available at the requested point.
    HsErrContinuation = 5,
    /// Cache I/O failure.
    HsErrIo = 6,
    /// A required pointer was NULL.
    HsErrNullPointer = 7,
    /// An internal panic was caught at the boundary.
    HsErrPanic = 8,
}

/// L-function evaluation route for `hs_lfunction`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsLVariant {
    HsLEuler = 0,
    HsLDirichlet = 1,
    HsLCompleted = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|c| *c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

fn status_of(err: &Error) -> HsStatus {
    match err {
        Error::NotWhitelisted(_) => HsStatus::HsErrNotWhitelisted,
        Error::PreconditionViolated(_) | Error::DomainError(_) => HsStatus::HsErrInvalidArgument,
        Error::TailNotConverged { .. }
        | Error::QuadratureNotConverged(_)
        | Error::TruncationNotConverged(_)
        | Error::GeneratorSearchFailed { .. } => HsStatus::HsErrNotConverged,
        Error::PoleProximity(_) | Error::PoleAt(_) => HsStatus::HsErrPole,
        Error::ContinuationUnavailable(_) => HsStatus::HsErrContinuation,
        Error::CacheIo(_) => HsStatus::HsErrIo,
    }
}

/// Opaque evaluation context: field data, prime tables, and the
/// truncation policy used by every evaluation made through it.
pub struct HsContext {
    ctx: LContext,
    policy: TruncationPolicy,
}

fn guard<F: FnOnce() -> HsStatus>(f: F) -> HsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic caught at FFI boundary");
            HsStatus::HsErrPanic
        }
    }
}

unsafe fn write_complex(re: *mut f64, im: *mut f64, v: Complex64) -> HsStatus {
    if re.is_null() || im.is_null() {
        set_error("output pointer is NULL");
        return HsStatus::HsErrNullPointer;
    }
    *re = v.re;
    *im = v.im;
    HsStatus::HsOk
}

unsafe fn read_lambda(
    ctx: &LContext,
    lambda: *const i64,
    len: usize,
    copies: usize,
) -> Result<Vec<Vec<i64>>, HsStatus> {
    let rank = ctx.lattice.rank;
    if len != rank * copies {
        set_error(&format!(
            "lambda length {len} != copies {copies} x unit rank {rank}"
        ));
        return Err(HsStatus::HsErrInvalidArgument);
    }
    if len > 0 && lambda.is_null() {
        set_error("lambda pointer is NULL");
        return Err(HsStatus::HsErrNullPointer);
    }
    if rank == 0 {
        return Ok(vec![Vec::new(); copies]);
    }
    let flat = std::slice::from_raw_parts(lambda, len);
    Ok(flat.chunks(rank).map(|c| c.to_vec()).collect())
}

/// Description of the most recent error on this thread (empty if none).
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn hs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Create a context for the field selected by `d` (0 = rationals,
/// otherwise a whitelisted squarefree quadratic discriminant parameter),
/// with Euler products and ideal sums truncated at `norm_bound` and the
/// given tail tolerance. `cache_dir` may be NULL; if set, prime tables are
/// cached there. On success writes the handle to `out`.
///
/// # Safety
/// `out` must be a valid pointer; `cache_dir`, when non-NULL, must point
/// to a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn hs_context_new(
    d: i64,
    norm_bound: u64,
    tail_tolerance: f64,
    cache_dir: *const c_char,
    out: *mut *mut HsContext,
) -> HsStatus {
    guard(|| {
        if out.is_null() {
            set_error("out pointer is NULL");
            return HsStatus::HsErrNullPointer;
        }
        let cache: Option<PathBuf> = if cache_dir.is_null() {
            None
        } else {
            match CStr::from_ptr(cache_dir).to_str() {
                Ok(s) => Some(PathBuf::from(s)),
                Err(_) => {
                    set_error("cache_dir is not valid UTF-8");
                    return HsStatus::HsErrInvalidArgument;
                }
            }
        };
        let field = match make_field(d) {
            Ok(f) => f,
            Err(e) => {
                set_error(&e.to_string());
                return status_of(&e);
            }
        };
        let lattice = unit_lattice(&field);
        match LContext::new(field, lattice, norm_bound, cache.as_deref()) {
            Ok(ctx) => {
                let handle = Box::new(HsContext {
                    ctx,
                    policy: TruncationPolicy {
                        norm_bound,
                        tail_tolerance,
                    },
                });
                *out = Box::into_raw(handle);
                HsStatus::HsOk
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Release a context created by `hs_context_new`. NULL is a no-op.
///
/// # Safety
/// `handle` must be NULL or a pointer returned by `hs_context_new` that
/// has not already been freed.
#[no_mangle]
pub unsafe extern "C" fn hs_context_free(handle: *mut HsContext) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Unit-lattice rank of the context's field (0 or 1 for degree ≤ 2).
///
/// # Safety
/// `handle` must be a live context handle.
#[no_mangle]
pub unsafe extern "C" fn hs_context_unit_rank(handle: *const HsContext) -> u64 {
    if handle.is_null() {
        return u64::MAX;
    }
    (*handle).ctx.lattice.rank as u64
}

macro_rules! try_ffi {
    ($expr:expr) => {
        match $expr {
            Ok(v) => v,
            Err(e) => {
                set_error(&e.to_string());
                return status_of(&e);
            }
        }
    };
}

/// Evaluate L_K(λ*, s) by the chosen route. `lambda` is `unit_rank` long.
/// Writes the value and a rigorous truncation-tail estimate.
///
/// # Safety
/// `handle` must be live; array and output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hs_lfunction(
    handle: *const HsContext,
    lambda: *const i64,
    lambda_len: usize,
    s_re: f64,
    s_im: f64,
    variant: HsLVariant,
    out_re: *mut f64,
    out_im: *mut f64,
    out_tail: *mut f64,
) -> HsStatus {
    guard(|| {
        if handle.is_null() {
            set_error("context handle is NULL");
            return HsStatus::HsErrNullPointer;
        }
        let h = &*handle;
        let lam = match read_lambda(&h.ctx, lambda, lambda_len, 1) {
            Ok(l) => l,
            Err(status) => return status,
        };
        let z = SpectralPoint::new(lam[0].clone(), Complex64::new(s_re, s_im));
        let value = try_ffi!(match variant {
            HsLVariant::HsLEuler => l_euler(&h.ctx, &z, &h.policy),
            HsLVariant::HsLDirichlet => l_dirichlet(&h.ctx, &z, &h.policy),
            HsLVariant::HsLCompleted => l_star(&h.ctx, &z, &h.policy),
        });
        if !out_tail.is_null() {
            *out_tail = value.tail_bound;
        }
        write_complex(out_re, out_im, value.value)
    })
}

/// Evaluate the kernel Φ_K(λ*, s).
///
/// # Safety
/// Same contract as `hs_lfunction`.
#[no_mangle]
pub unsafe extern "C" fn hs_phi(
    handle: *const HsContext,
    lambda: *const i64,
    lambda_len: usize,
    s_re: f64,
    s_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    out_tail: *mut f64,
) -> HsStatus {
    guard(|| {
        if handle.is_null() {
            set_error("context handle is NULL");
            return HsStatus::HsErrNullPointer;
        }
        let h = &*handle;
        let lam = match read_lambda(&h.ctx, lambda, lambda_len, 1) {
            Ok(l) => l,
            Err(status) => return status,
        };
        let z = SpectralPoint::new(lam[0].clone(), Complex64::new(s_re, s_im));
        let value = try_ffi!(phi_k(&h.ctx, &z, &h.policy));
        if !out_tail.is_null() {
            *out_tail = value.tail_bound;
        }
        write_complex(out_re, out_im, value.value)
    })
}

/// Kernel Φ_{K,w⁻¹}(λ*, s) of the intertwiner M_w on the character
/// 𝓒(λ*, s). `w_images` has length `n`; `lambda` is `n × unit_rank` flat;
/// `s` is `n` interleaved (re, im) pairs, i.e. `2n` doubles.
///
/// # Safety
/// `handle` must be live; arrays must have the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn hs_mw_kernel(
    handle: *const HsContext,
    w_images: *const usize,
    n: usize,
    lambda: *const i64,
    lambda_len: usize,
    s_interleaved: *const f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HsStatus {
    guard(|| {
        if handle.is_null() || (n > 0 && (w_images.is_null() || s_interleaved.is_null())) {
            set_error("required pointer is NULL");
            return HsStatus::HsErrNullPointer;
        }
        let h = &*handle;
        let images = std::slice::from_raw_parts(w_images, n).to_vec();
        let w = try_ffi!(Permutation::from_images(images));
        let lam = match read_lambda(&h.ctx, lambda, lambda_len, n) {
            Ok(l) => l,
            Err(status) => return status,
        };
        let s: Vec<Complex64> = std::slice::from_raw_parts(s_interleaved, 2 * n)
            .chunks(2)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect();
        let (_, _, kernel) = try_ffi!(mw_character(&h.ctx, &w, &lam, &s, &h.policy));
        write_complex(out_re, out_im, kernel)
    })
}

/// Rank-2 assembled intertwiner constant at (λ*₁, s₁), (λ*₂, s₂);
/// `lambda` is `2 × unit_rank` flat, s passes as two (re, im) pairs.
///
/// # Safety
/// Same contract as `hs_mw_kernel`.
#[no_mangle]
pub unsafe extern "C" fn hs_assemble_rank2(
    handle: *const HsContext,
    lambda: *const i64,
    lambda_len: usize,
    s1_re: f64,
    s1_im: f64,
    s2_re: f64,
    s2_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
    out_tail: *mut f64,
) -> HsStatus {
    guard(|| {
        if handle.is_null() {
            set_error("context handle is NULL");
            return HsStatus::HsErrNullPointer;
        }
        let h = &*handle;
        let lam = match read_lambda(&h.ctx, lambda, lambda_len, 2) {
            Ok(l) => l,
            Err(status) => return status,
        };
        let z1 = SpectralPoint::new(lam[0].clone(), Complex64::new(s1_re, s1_im));
        let z2 = SpectralPoint::new(lam[1].clone(), Complex64::new(s2_re, s2_im));
        let value = try_ffi!(assemble_rank2(&h.ctx, &z1, &z2, &h.policy));
        if !out_tail.is_null() {
            *out_tail = value.tail_bound;
        }
        write_complex(out_re, out_im, value.value)
    })
}

/// Real-place local factor √π Γ(sdiff/2 + πiΔ)/Γ((sdiff+1)/2 + πiΔ).
///
/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hs_local_real(
    lamdiff: f64,
    sdiff_re: f64,
    sdiff_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HsStatus {
    guard(|| {
        let v = try_ffi!(real_local_closed(lamdiff, Complex64::new(sdiff_re, sdiff_im)));
        write_complex(out_re, out_im, v)
    })
}

/// Complex-place local factor π/(sdiff + πiΔ).
///
/// # Safety
/// Output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hs_local_complex(
    lamdiff: f64,
    sdiff_re: f64,
    sdiff_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HsStatus {
    guard(|| {
        let v = try_ffi!(complex_local_closed(
            lamdiff,
            Complex64::new(sdiff_re, sdiff_im)
        ));
        write_complex(out_re, out_im, v)
    })
}

/// p-adic local factor at the first prime ideal above `p` in the context's
/// prime table. `lambda` is `unit_rank` long.
///
/// # Safety
/// `handle` must be live; arrays and output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn hs_local_padic(
    handle: *const HsContext,
    p: u64,
    lambda: *const i64,
    lambda_len: usize,
    sdiff_re: f64,
    sdiff_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HsStatus {
    guard(|| {
        if handle.is_null() {
            set_error("context handle is NULL");
            return HsStatus::HsErrNullPointer;
        }
        let h = &*handle;
        let lam = match read_lambda(&h.ctx, lambda, lambda_len, 1) {
            Ok(l) => l,
            Err(status) => return status,
        };
        let Some(prime) = h.ctx.primes.iter().find(|q| q.p == p) else {
            set_error(&format!("no prime ideal above {p} within the norm bound"));
            return HsStatus::HsErrInvalidArgument;
        };
        let vee = h.ctx.lattice.lambda_vee(&lam[0]);
        let v = try_ffi!(padic_local_closed(
            prime,
            &vee,
            Complex64::new(sdiff_re, sdiff_im)
        ));
        write_complex(out_re, out_im, v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn context_round_trip_and_phi() {
        unsafe {
            let mut handle: *mut HsContext = ptr::null_mut();
            let st = hs_context_new(0, 2_000, 1e12, ptr::null(), &mut handle);
            assert_eq!(st, HsStatus::HsOk);
            assert_eq!(hs_context_unit_rank(handle), 0);
            let (mut re, mut im, mut tail) = (0.0, 0.0, 0.0);
            let st = hs_phi(handle, ptr::null(), 0, 2.5, 0.0, &mut re, &mut im, &mut tail);
            assert_eq!(st, HsStatus::HsOk);
            // Φ over the rationals at 2.5 = ξ(2.5)/ξ(3.5)
            assert!((re - 2.0812112477734983).abs() < 1e-9, "{re}");
            assert!(im.abs() < 1e-12);
            hs_context_free(handle);
        }
    }

    #[test]
    fn local_factor_values() {
        unsafe {
            let (mut re, mut im) = (0.0, 0.0);
            assert_eq!(
                hs_local_real(0.0, 2.0, 0.0, &mut re, &mut im),
                HsStatus::HsOk
            );
            assert!((re - 2.0).abs() < 1e-12);
            assert_eq!(
                hs_local_complex(0.0, 1.0, 0.0, &mut re, &mut im),
                HsStatus::HsOk
            );
            assert!((re - std::f64::consts::PI).abs() < 1e-12);
        }
    }

    #[test]
    fn error_codes_and_messages() {
        unsafe {
            let mut handle: *mut HsContext = ptr::null_mut();
            // 10 is squarefree but not in the real whitelist? (it is not)
            let st = hs_context_new(10, 100, 1.0, ptr::null(), &mut handle);
            assert_eq!(st, HsStatus::HsErrNotWhitelisted);
            let msg = CStr::from_ptr(hs_last_error_message());
            assert!(!msg.to_bytes().is_empty());

            let st = hs_context_new(0, 100, 1.0, ptr::null(), ptr::null_mut());
            assert_eq!(st, HsStatus::HsErrNullPointer);

            let st = hs_context_new(0, 2_000, 1e12, ptr::null(), &mut handle);
            assert_eq!(st, HsStatus::HsOk);
            let (mut re, mut im, mut tail) = (0.0, 0.0, 0.0);
            // Euler product outside its half-plane → invalid argument
            let st = hs_lfunction(
                handle,
                ptr::null(),
                0,
                0.5,
                0.0,
                HsLVariant::HsLEuler,
                &mut re,
                &mut im,
                &mut tail,
            );
            assert_eq!(st, HsStatus::HsErrInvalidArgument);
            hs_context_free(handle);
        }
    }

    #[test]
    fn mw_kernel_matches_library() {
        unsafe {
            let mut handle: *mut HsContext = ptr::null_mut();
            assert_eq!(
                hs_context_new(0, 2_000, 1e12, ptr::null(), &mut handle),
                HsStatus::HsOk
            );
            let images = [1usize, 0];
            let s = [0.2, 0.05, 1.9, 0.21]; // (s1, s2) interleaved
            let (mut re, mut im) = (0.0, 0.0);
            let st = hs_mw_kernel(
                handle,
                images.as_ptr(),
                2,
                ptr::null(),
                0,
                s.as_ptr(),
                &mut re,
                &mut im,
            );
            assert_eq!(st, HsStatus::HsOk);
            let ctx = (*handle).ctx.clone();
            let pol = (*handle).policy;
            let want = phi_k(
                &ctx,
                &SpectralPoint::new(
                    vec![],
                    Complex64::new(1.9, 0.21) - Complex64::new(0.2, 0.05),
                ),
                &pol,
            )
            .unwrap()
            .value;
            assert!((Complex64::new(re, im) - want).norm() < 1e-12);
            hs_context_free(handle);
        }
    }

    #[test]
    fn header_is_generated() {
        let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("include")
            .join("hecke_shuffle.h");
        let text = std::fs::read_to_string(header).expect("generated header");
        for symbol in [
            "hs_context_new",
            "hs_context_free",
            "hs_lfunction",
            "hs_phi",
            "hs_mw_kernel",
            "hs_assemble_rank2",
            "hs_local_real",
            "hs_local_complex",
            "hs_local_padic",
            "hs_last_error_message",
            "typedef struct HsContext HsContext;",
        ] {
            assert!(text.contains(symbol), "header missing {symbol}");
        }
    }
}
