//! C interface to `qosc`.
//!
//! Every function returns a [`QoscStatus`]; results go through out
//! pointers. On failure the message is available from
//! [`qosc_last_error_message`] until the next call on the same thread.
//! Handles are opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, c_void, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qosc::fock::{
    build_annihilator, build_creator, build_number, build_scale, build_scale_product, FockSpace, LinearMap,
    ModeOperators, OperatorMatrix,
};
use qosc::qcore::{self, QParam};
use qosc::suite::{self, Command, RunConfig};
use qosc::{qqm, Complex64, QoscError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QoscStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Pole = 4,
    Convergence = 5,
    InsufficientCutoff = 6,
    Evaluation = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QoscComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for QoscComplex {
    fn from(z: Complex64) -> Self {
        QoscComplex { re: z.re, im: z.im }
    }
}

impl From<QoscComplex> for Complex64 {
    fn from(z: QoscComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QoscOperatorKind {
    /// `a_i`
    Annihilator = 0,
    /// `a†_i`
    Creator = 1,
    /// `N_i`
    Number = 2,
    /// `q^{N_i}`
    Scale = 3,
    /// `q^{N_i + ... + N_n}`; mode `n + 1` is the identity.
    ScaleProduct = 4,
    /// `(a_i + a†_i)/sqrt(2)`
    Position = 5,
    /// `-i (a_i - a†_i)/sqrt(2)`
    Momentum = 6,
    /// Sum of `(a_i a†_i + a†_i a_i)/2`; the mode argument is ignored.
    Hamiltonian = 7,
}

/// Truncated Fock space.
pub struct QoscSpace {
    space: FockSpace,
}

/// Sparse operator on a [`QoscSpace`].
pub struct QoscOperator {
    op: OperatorMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(err: &QoscError) -> QoscStatus {
    match err {
        QoscError::Domain { .. } => QoscStatus::Domain,
        QoscError::Pole { .. } => QoscStatus::Pole,
        QoscError::Convergence { .. } => QoscStatus::Convergence,
        QoscError::InsufficientCutoff { .. } => QoscStatus::InsufficientCutoff,
        QoscError::Evaluation { .. } => QoscStatus::Evaluation,
        _ => QoscStatus::InvalidArgument,
    }
}

fn fail(status: QoscStatus, msg: impl Into<String>) -> QoscStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> Result<(), QoscStatus>) -> QoscStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QoscStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(QoscStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: qosc::Result<T>) -> Result<T, QoscStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), QoscStatus> {
    if p.is_null() {
        Err(fail(QoscStatus::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

fn qparam(q: f64) -> Result<QParam, QoscStatus> {
    lift(QParam::new(q))
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library; valid until the next call.
#[no_mangle]
pub extern "C" fn qosc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// `[x] = (q^x - 1)/(q - 1)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qosc_q_number(q: f64, x: f64, out: *mut f64) -> QoscStatus {
    guard(|| {
        non_null(out, "out")?;
        let qp = qparam(q)?;
        if !x.is_finite() {
            return Err(fail(QoscStatus::InvalidArgument, format!("x = {x} is not finite")));
        }
        *out = qcore::q_number(x, &qp);
        Ok(())
    })
}

/// `[m]! = [1][2]...[m]`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qosc_q_factorial(q: f64, m: usize, out: *mut f64) -> QoscStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = qcore::q_factorial(m, &qparam(q)?);
        Ok(())
    })
}

/// `exp_q(x)` from its power series; needs `|x| < 1/(1-q)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qosc_q_exp_series(q: f64, x: QoscComplex, tol: f64, out: *mut QoscComplex) -> QoscStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lift(qcore::q_exp_series(x.into(), &qparam(q)?, tol))?.into();
        Ok(())
    })
}

/// `exp_q(x)` from its infinite product.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qosc_q_exp_product(q: f64, x: QoscComplex, tol: f64, out: *mut QoscComplex) -> QoscStatus {
    guard(|| {
        non_null(out, "out")?;
        *out = lift(qcore::q_exp_product(x.into(), &qparam(q)?, tol))?.into();
        Ok(())
    })
}

/// Jackson integral of `f` over `[0, 1/(1-q)]`. `f(x, user)` is called
/// at each node; a non-finite return aborts the integral.
///
/// # Safety
/// `out` must be valid for writes; `f` is called with `user` unchanged.
#[no_mangle]
pub unsafe extern "C" fn qosc_jackson_integral(
    q: f64,
    f: Option<extern "C" fn(x: f64, user: *mut c_void) -> f64>,
    user: *mut c_void,
    tol: f64,
    out: *mut f64,
) -> QoscStatus {
    guard(|| {
        non_null(out, "out")?;
        let Some(f) = f else {
            return Err(fail(QoscStatus::NullPointer, "f is null"));
        };
        let qp = qparam(q)?;
        *out = lift(qcore::jackson_integral(|x| Ok(f(x, user)), &qp, tol))?;
        Ok(())
    })
}

/// Creates the space of `n_modes` modes with occupations `0..=cutoff`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qosc_space_new(n_modes: usize, cutoff: usize, out: *mut *mut QoscSpace) -> QoscStatus {
    guard(|| {
        non_null(out, "out")?;
        let space = lift(FockSpace::new(n_modes, cutoff))?;
        *out = Box::into_raw(Box::new(QoscSpace { space }));
        Ok(())
    })
}

/// # Safety
/// `space` must come from [`qosc_space_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qosc_space_free(space: *mut QoscSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Basis dimension `(cutoff + 1)^n_modes`, or 0 for a null handle.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qosc_space_dim(space: *const QoscSpace) -> usize {
    space.as_ref().map_or(0, |s| s.space.dim())
}

/// Basis index of the occupation vector `occupations[0..n_modes]`.
///
/// # Safety
/// `space` must be a live handle, `occupations` must hold `n_modes`
/// entries and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qosc_space_index(
    space: *const QoscSpace,
    occupations: *const usize,
    n_modes: usize,
    out: *mut usize,
) -> QoscStatus {
    guard(|| {
        non_null(space, "space")?;
        non_null(occupations, "occupations")?;
        non_null(out, "out")?;
        let nu = qosc::fock::MultiIndex(std::slice::from_raw_parts(occupations, n_modes).to_vec());
        *out = lift((*space).space.encode(&nu))?;
        Ok(())
    })
}

fn build(space: &FockSpace, qp: &QParam, kind: QoscOperatorKind, mode: usize) -> qosc::Result<OperatorMatrix> {
    match kind {
        QoscOperatorKind::Annihilator => build_annihilator(space, qp, mode),
        QoscOperatorKind::Creator => build_creator(space, qp, mode),
        QoscOperatorKind::Number => build_number(space, mode),
        QoscOperatorKind::Scale => build_scale(space, qp, mode),
        QoscOperatorKind::ScaleProduct => build_scale_product(space, qp, mode),
        QoscOperatorKind::Position => {
            space.check_mode(mode)?;
            qqm::build_position(&ModeOperators::new(space, qp)?, mode)
        }
        QoscOperatorKind::Momentum => {
            space.check_mode(mode)?;
            qqm::build_momentum(&ModeOperators::new(space, qp)?, mode)
        }
        QoscOperatorKind::Hamiltonian => qqm::build_hamiltonian(space, qp),
    }
}

/// Builds operator `kind` for 1-based `mode`.
///
/// # Safety
/// `space` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qosc_operator_new(
    space: *const QoscSpace,
    q: f64,
    kind: QoscOperatorKind,
    mode: usize,
    out: *mut *mut QoscOperator,
) -> QoscStatus {
    guard(|| {
        non_null(space, "space")?;
        non_null(out, "out")?;
        let op = lift(build(&(*space).space, &qparam(q)?, kind, mode))?;
        *out = Box::into_raw(Box::new(QoscOperator { op }));
        Ok(())
    })
}

/// # Safety
/// `op` must come from [`qosc_operator_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn qosc_operator_free(op: *mut QoscOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// # Safety
/// `op` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qosc_operator_dim(op: *const QoscOperator) -> usize {
    op.as_ref().map_or(0, |o| o.op.dim())
}

/// Stored nonzero count, or 0 for a null handle.
///
/// # Safety
/// `op` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qosc_operator_nnz(op: *const QoscOperator) -> usize {
    op.as_ref().map_or(0, |o| o.op.nnz())
}

/// Copies the nonzero entries as coordinate triplets. `written` receives
/// the nonzero count; with `capacity` below it nothing is copied and
/// `BufferTooSmall` is returned.
///
/// # Safety
/// `op` must be a live handle; `rows`, `cols` and `values` must each hold
/// `capacity` elements; `written` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qosc_operator_entries(
    op: *const QoscOperator,
    rows: *mut usize,
    cols: *mut usize,
    values: *mut QoscComplex,
    capacity: usize,
    written: *mut usize,
) -> QoscStatus {
    guard(|| {
        non_null(op, "op")?;
        non_null(written, "written")?;
        let op = &(*op).op;
        *written = op.nnz();
        if capacity < op.nnz() {
            return Err(fail(
                QoscStatus::BufferTooSmall,
                format!("capacity {capacity} below nonzero count {}", op.nnz()),
            ));
        }
        non_null(rows, "rows")?;
        non_null(cols, "cols")?;
        non_null(values, "values")?;
        for (k, (r, c, v)) in op.entries().enumerate() {
            *rows.add(k) = r;
            *cols.add(k) = c;
            *values.add(k) = v.into();
        }
        Ok(())
    })
}

/// `output = op * input`, both of length `len == dim`.
///
/// # Safety
/// `op` must be a live handle; `input` and `output` must hold `len`
/// elements and must not overlap.
#[no_mangle]
pub unsafe extern "C" fn qosc_operator_apply(
    op: *const QoscOperator,
    input: *const QoscComplex,
    output: *mut QoscComplex,
    len: usize,
) -> QoscStatus {
    guard(|| {
        non_null(op, "op")?;
        non_null(input, "input")?;
        non_null(output, "output")?;
        let op = &(*op).op;
        if len != op.dim() {
            return Err(fail(
                QoscStatus::InvalidArgument,
                format!("vector length {len} does not match dimension {}", op.dim()),
            ));
        }
        let x: Vec<Complex64> = std::slice::from_raw_parts(input, len).iter().map(|&z| z.into()).collect();
        for (k, y) in op.apply(&x).into_iter().enumerate() {
            *output.add(k) = y.into();
        }
        Ok(())
    })
}

fn parse_config(json: *const c_char) -> Result<RunConfig, QoscStatus> {
    let mut merged = serde_json::to_value(RunConfig::default()).expect("default config serializes");
    if !json.is_null() {
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|e| fail(QoscStatus::InvalidArgument, format!("config is not UTF-8: {e}")))?;
        let given: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| fail(QoscStatus::InvalidArgument, format!("config is not JSON: {e}")))?;
        let serde_json::Value::Object(fields) = given else {
            return Err(fail(QoscStatus::InvalidArgument, "config must be a JSON object"));
        };
        merged.as_object_mut().expect("config is an object").extend(fields);
    }
    serde_json::from_value(merged).map_err(|e| fail(QoscStatus::InvalidArgument, format!("config: {e}")))
}

/// Runs a verification command (`"relations"`, `"spectrum"`, `"report"`,
/// ...) and returns the JSON report. `config_json` is a JSON object whose
/// fields override the defaults (`q`, `modes`, `cutoff`, `tol`, `margin`,
/// `z`, `s`, `t`, `levels`, `degeneracy_tol`, `sweep`); null means all
/// defaults. `passed` receives 1 when every check passed. The report must
/// be released with [`qosc_string_free`].
///
/// # Safety
/// `command` must be a NUL-terminated string, `config_json` null or
/// NUL-terminated, and `report_json` and `passed` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qosc_run(
    command: *const c_char,
    config_json: *const c_char,
    report_json: *mut *mut c_char,
    passed: *mut i32,
) -> QoscStatus {
    guard(|| {
        non_null(command, "command")?;
        non_null(report_json, "report_json")?;
        non_null(passed, "passed")?;
        let name = CStr::from_ptr(command)
            .to_str()
            .map_err(|_| fail(QoscStatus::InvalidArgument, "command is not UTF-8"))?;
        let command: Command = serde_json::from_value(serde_json::Value::String(name.to_string()))
            .map_err(|_| fail(QoscStatus::InvalidArgument, format!("unknown command {name:?}")))?;
        let config = parse_config(config_json)?;
        let report = lift(suite::run(command, &config))?;
        let text = serde_json::to_string(&report).expect("report serializes");
        *report_json = CString::new(text).expect("JSON has no NUL").into_raw();
        *passed = i32::from(report.passed());
        Ok(())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn qosc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
