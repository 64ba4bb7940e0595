//! C interface to `enonet`.
//!
//! Every fallible function returns an [`EnonetStatus`]; on failure the
//! message is kept per thread and can be fetched with
//! [`enonet_last_error`]. Objects are opaque handles released with the
//! matching `*_free` function. Buffers are caller-owned `(pointer, length)`
//! pairs; when a buffer is too short nothing is written and
//! `ENONET_STATUS_BUFFER_TOO_SMALL` is returned.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use enonet::claw::{solve, Euler, EulerState, Problem, GAMMA};
use enonet::eno_core::{predict_fine_level, GhostPolicy};
use enonet::eno_sr::enosr_predict;
use enonet::multires::container::{from_bytes, to_bytes, Container};
use enonet::multires::{decode, encode, MultiResRep, ThresholdSchedule};
use enonet::relunet::targets::Target;
use enonet::relunet::{network_from_json, network_to_json, MlpNetwork};
use enonet::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnonetStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    Parse = 4,
    StateInvalid = 5,
    Io = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnonetGhost {
    ConstantExtrapolate = 0,
    Reflect = 1,
    Periodic = 2,
}

impl From<EnonetGhost> for GhostPolicy {
    fn from(g: EnonetGhost) -> Self {
        match g {
            EnonetGhost::ConstantExtrapolate => GhostPolicy::ConstantExtrapolate,
            EnonetGhost::Reflect => GhostPolicy::Reflect,
            EnonetGhost::Periodic => GhostPolicy::Periodic,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnonetProblem {
    Sod = 0,
    ShockEntropy = 1,
}

/// A ReLU network.
pub struct EnonetNetwork(MlpNetwork);

/// A one-dimensional multiresolution representation.
pub struct EnonetMultiRes(MultiResRep);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

struct Failure(EnonetStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::InvalidArgument(_) => EnonetStatus::InvalidArgument,
            Error::Unsupported(_) => EnonetStatus::Unsupported,
            Error::LayerParse { .. } | Error::Parse(_) | Error::Json(_) => EnonetStatus::Parse,
            Error::StateInvalid { .. } => EnonetStatus::StateInvalid,
            Error::Io(_) => EnonetStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

type FfiResult = Result<(), Failure>;

fn null(what: &str) -> Failure {
    Failure(EnonetStatus::NullPointer, format!("{what} is null"))
}

fn too_small(what: &str, need: usize, got: usize) -> Failure {
    Failure(EnonetStatus::BufferTooSmall, format!("{what} needs {need} elements, got {got}"))
}

fn guarded(f: impl FnOnce() -> FfiResult) -> EnonetStatus {
    let (status, msg) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => (EnonetStatus::Ok, String::new()),
        Ok(Err(Failure(s, m))) => (s, m),
        Err(_) => (EnonetStatus::Panic, "internal panic".to_string()),
    };
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
    status
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out(src: &[f64], out: *mut f64, len: usize, what: &str) -> FfiResult {
    if len < src.len() {
        return Err(too_small(what, src.len(), len));
    }
    if src.is_empty() {
        return Ok(());
    }
    if out.is_null() {
        return Err(null(what));
    }
    ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    Ok(())
}

unsafe fn c_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(EnonetStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn set_handle<T>(out: *mut *mut T, value: T) -> FfiResult {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn handle<'a, T>(h: *const T, what: &str) -> Result<&'a T, Failure> {
    h.as_ref().ok_or_else(|| null(what))
}

/// Copies the message of the last failed call on this thread into `buf`
/// (NUL-terminated, truncated to `len`). Returns the full length including
/// the terminator; `buf` may be null to query it.
#[no_mangle]
pub unsafe extern "C" fn enonet_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len() + 1
    })
}

/// Builds a named network: `interp3`, `interp4`, `interpN` (order `p`),
/// `rec2`, `rec3`, `sr-class`, `sr-reg`, `trained3` or `trained4`.
/// `guard` and `eps` are used by the ENO-SR networks only.
#[no_mangle]
pub unsafe extern "C" fn enonet_network_build(
    name: *const c_char,
    p: usize,
    guard: f64,
    eps: f64,
    out: *mut *mut EnonetNetwork,
) -> EnonetStatus {
    guarded(|| {
        let target = Target::parse(c_str(name, "name")?, p)?;
        set_handle(out, EnonetNetwork(target.network(guard, eps)?))
    })
}

/// Parses a network from its JSON description.
#[no_mangle]
pub unsafe extern "C" fn enonet_network_from_json(json: *const c_char, out: *mut *mut EnonetNetwork) -> EnonetStatus {
    guarded(|| set_handle(out, EnonetNetwork(network_from_json(c_str(json, "json")?)?)))
}

/// Writes the JSON description of `net` into `buf` (NUL-terminated).
/// `needed` receives the required size including the terminator.
#[no_mangle]
pub unsafe extern "C" fn enonet_network_to_json(
    net: *const EnonetNetwork,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> EnonetStatus {
    guarded(|| {
        let text = network_to_json(&handle(net, "network")?.0);
        let need = text.len() + 1;
        if !needed.is_null() {
            *needed = need;
        }
        if len < need {
            return Err(too_small("json buffer", need, len));
        }
        if buf.is_null() {
            return Err(null("json buffer"));
        }
        ptr::copy_nonoverlapping(text.as_ptr().cast::<c_char>(), buf, text.len());
        *buf.add(text.len()) = 0;
        Ok(())
    })
}

/// Input width, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn enonet_network_input_width(net: *const EnonetNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.input_width())
}

/// Output width, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn enonet_network_output_width(net: *const EnonetNetwork) -> usize {
    net.as_ref().map_or(0, |n| n.0.output_width())
}

/// Raw network outputs for one input vector.
#[no_mangle]
pub unsafe extern "C" fn enonet_network_forward(
    net: *const EnonetNetwork,
    input: *const f64,
    input_len: usize,
    out: *mut f64,
    out_len: usize,
) -> EnonetStatus {
    guarded(|| {
        let net = &handle(net, "network")?.0;
        let y = net.forward(slice(input, input_len, "input")?)?;
        write_out(&y, out, out_len, "output")
    })
}

/// Class chosen by the network's output rule.
#[no_mangle]
pub unsafe extern "C" fn enonet_network_classify(
    net: *const EnonetNetwork,
    input: *const f64,
    input_len: usize,
    class_out: *mut usize,
) -> EnonetStatus {
    guarded(|| {
        let net = &handle(net, "network")?.0;
        let c = net.classify(slice(input, input_len, "input")?)?;
        if class_out.is_null() {
            return Err(null("class output"));
        }
        *class_out = c;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn enonet_network_free(net: *mut EnonetNetwork) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Refines `n` node values to `2n - 1` with ENO of order `p`.
#[no_mangle]
pub unsafe extern "C" fn enonet_eno_predict(
    coarse: *const f64,
    n: usize,
    p: usize,
    ghost: EnonetGhost,
    out: *mut f64,
    out_len: usize,
) -> EnonetStatus {
    guarded(|| {
        let fine = predict_fine_level(slice(coarse, n, "coarse")?, p, ghost.into())?;
        write_out(&fine, out, out_len, "fine")
    })
}

/// Refines `n` node values to `2n - 1` with second-order ENO-SR.
#[no_mangle]
pub unsafe extern "C" fn enonet_enosr_predict(
    coarse: *const f64,
    n: usize,
    ghost: EnonetGhost,
    guard: f64,
    out: *mut f64,
    out_len: usize,
) -> EnonetStatus {
    guarded(|| {
        let mid = enosr_predict(slice(coarse, n, "coarse")?, ghost.into(), guard)?;
        write_out(&mid, out, out_len, "fine")
    })
}

/// Encodes `n` node values over `k` levels with thresholds `eps * t^(K-k)`.
#[no_mangle]
pub unsafe extern "C" fn enonet_multires_encode(
    fine: *const f64,
    n: usize,
    p: usize,
    eps: f64,
    t: f64,
    k: usize,
    ghost: EnonetGhost,
    out: *mut *mut EnonetMultiRes,
) -> EnonetStatus {
    guarded(|| {
        let schedule = ThresholdSchedule::new(eps, t, k)?;
        let rep = encode(slice(fine, n, "fine")?, p, schedule, ghost.into())?;
        set_handle(out, EnonetMultiRes(rep))
    })
}

/// Number of values produced by [`enonet_multires_decode`].
#[no_mangle]
pub unsafe extern "C" fn enonet_multires_len(rep: *const EnonetMultiRes) -> usize {
    rep.as_ref().map_or(0, |r| (r.0.n0 << r.0.levels()) + 1)
}

/// Fraction of detail coefficients that are zero; NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn enonet_multires_compression_rate(rep: *const EnonetMultiRes) -> f64 {
    rep.as_ref().map_or(f64::NAN, |r| r.0.compression_rate())
}

#[no_mangle]
pub unsafe extern "C" fn enonet_multires_decode(rep: *const EnonetMultiRes, out: *mut f64, out_len: usize) -> EnonetStatus {
    guarded(|| {
        let values = decode(&handle(rep, "representation")?.0)?;
        write_out(&values, out, out_len, "decoded")
    })
}

/// Serializes to the `ENOMR1` container format. `needed` receives the byte
/// count.
#[no_mangle]
pub unsafe extern "C" fn enonet_multires_to_bytes(
    rep: *const EnonetMultiRes,
    buf: *mut u8,
    len: usize,
    needed: *mut usize,
) -> EnonetStatus {
    guarded(|| {
        let bytes = to_bytes(&Container::OneD(handle(rep, "representation")?.0.clone()));
        if !needed.is_null() {
            *needed = bytes.len();
        }
        if len < bytes.len() {
            return Err(too_small("byte buffer", bytes.len(), len));
        }
        if buf.is_null() {
            return Err(null("byte buffer"));
        }
        ptr::copy_nonoverlapping(bytes.as_ptr(), buf, bytes.len());
        Ok(())
    })
}

/// Parses a one-dimensional `ENOMR1` container.
#[no_mangle]
pub unsafe extern "C" fn enonet_multires_from_bytes(
    buf: *const u8,
    len: usize,
    out: *mut *mut EnonetMultiRes,
) -> EnonetStatus {
    guarded(|| {
        if buf.is_null() {
            return Err(null("byte buffer"));
        }
        match from_bytes(std::slice::from_raw_parts(buf, len))? {
            Container::OneD(rep) => set_handle(out, EnonetMultiRes(rep)),
            Container::TwoD(_) => Err(Failure(EnonetStatus::Unsupported, "2D containers are not exposed".into())),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn enonet_multires_free(rep: *mut EnonetMultiRes) {
    if !rep.is_null() {
        drop(Box::from_raw(rep));
    }
}

/// Solves a shock-tube problem on `n` cells with ENO of order `p` and writes
/// density, velocity and pressure at the cell centers. Each output buffer
/// needs `n` elements.
#[no_mangle]
pub unsafe extern "C" fn enonet_euler_solve(
    problem: EnonetProblem,
    n: usize,
    p: usize,
    cfl: f64,
    t_final: f64,
    rho: *mut f64,
    velocity: *mut f64,
    pressure: *mut f64,
    len: usize,
) -> EnonetStatus {
    guarded(|| {
        let problem = match problem {
            EnonetProblem::Sod => Problem::Sod,
            EnonetProblem::ShockEntropy => Problem::ShockEntropy,
        };
        let mut config = problem.default_config(p);
        config.n = n;
        config.cfl = cfl;
        config.t_final = t_final;
        if len < n {
            return Err(too_small("field buffers", n, len));
        }
        let u = solve(&Euler::default(), config, problem.initial(&config.centers()).fields())?;
        let s = EulerState::from_fields(&u, GAMMA);
        write_out(&s.rho, rho, len, "rho")?;
        write_out(&s.velocity(), velocity, len, "velocity")?;
        write_out(&s.pressure(), pressure, len, "pressure")
    })
}
