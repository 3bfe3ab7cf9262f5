//! C ABI for the firegraph engine.
//!
//! Graphs and sessions are opaque handles. Every call returns an
//! [`FgStatus`]; on failure the message is available from
//! [`fg_last_error`] until the next call on the same thread. Strings
//! returned through out-pointers are owned by the caller and released with
//! [`fg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use firegraph::certify;
use firegraph::families::make;
use firegraph::game::{run, RunOptions};
use firegraph::service::{parse_fire, CreateRequest, FireInput, Session};
use firegraph::{BudgetSeq, Error, FamilySpec, GameTrace, LazyGraph, Strategy};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidSpec = 3,
    InvalidKey = 4,
    InvalidArgument = 5,
    ProtectionOverlap = 6,
    BudgetExceeded = 7,
    ResourceLimit = 8,
    Malformed = 9,
    BufferTooSmall = 10,
    Panic = 11,
    Other = 99,
}

/// Opaque lazy graph.
pub struct FgGraph {
    inner: LazyGraph,
}

/// Opaque game session.
pub struct FgSession {
    inner: Session,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> FgStatus {
    match e {
        Error::InvalidSpec { .. } => FgStatus::InvalidSpec,
        Error::InvalidKey { .. } => FgStatus::InvalidKey,
        Error::ProtectionOverlap { .. } => FgStatus::ProtectionOverlap,
        Error::BudgetExceeded { .. } => FgStatus::BudgetExceeded,
        Error::ResourceLimit { .. } => FgStatus::ResourceLimit,
        Error::Malformed { .. } | Error::Json(_) => FgStatus::Malformed,
        Error::InvalidArgument(_) => FgStatus::InvalidArgument,
        _ => FgStatus::Other,
    }
}

enum Failure {
    Status(FgStatus, String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FgStatus::Ok,
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Ok(Err(Failure::Engine(e))) => {
            set_error(format!("{}: {e}", e.kind()));
            status_of(&e)
        }
        Err(_) => {
            set_error("panic inside firegraph".into());
            FgStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Status(FgStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(FgStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn null(what: &str) -> Failure {
    Failure::Status(FgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let c = CString::new(s).map_err(|_| Failure::Status(FgStatus::Other, "interior NUL in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call.
#[no_mangle]
pub extern "C" fn fg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a graph from a family spec such as `square` or `tree:delta=3`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fg_graph_new(spec: *const c_char, out: *mut *mut FgGraph) -> FgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let spec: FamilySpec = text(spec, "spec")?.parse()?;
        let g = make(&spec)?;
        *out = Box::into_raw(Box::new(FgGraph { inner: g }));
        Ok(())
    })
}

/// # Safety
/// `g` must come from [`fg_graph_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fg_graph_free(g: *mut FgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Writes `s_0 .. s_n` about the base vertex into `buf` (length `len >= n+1`).
///
/// # Safety
/// `g` must be a live graph and `buf` writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn fg_graph_sphere_sizes(g: *const FgGraph, n: usize, buf: *mut u64, len: usize) -> FgStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < n + 1 {
            return Err(Failure::Status(
                FgStatus::BufferTooSmall,
                format!("need {} slots", n + 1),
            ));
        }
        let sizes = g.inner.base_ball(n)?.sphere_sizes();
        for (i, s) in sizes.iter().enumerate().take(n + 1) {
            *buf.add(i) = *s as u64;
        }
        Ok(())
    })
}

/// Sorted neighbors of `key`, separated by `;`.
///
/// # Safety
/// `g` must be a live graph; `key` NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_graph_neighbors(g: *const FgGraph, key: *const c_char, out: *mut *mut c_char) -> FgStatus {
    guard(|| {
        let g = g.as_ref().ok_or_else(|| null("graph"))?;
        let v = g.inner.parse_key(text(key, "key")?)?;
        let list: Vec<String> = g.inner.neighbors(&v).iter().map(ToString::to_string).collect();
        put_string(out, list.join(";"))
    })
}

/// Runs a game and returns the JSON-lines trace. `strategy_json` may be NULL
/// (no protections); otherwise it is a strategy document whose budget and
/// radius are replaced by `budget` and `r`.
///
/// # Safety
/// String arguments must be NUL-terminated (or NULL where allowed); `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fg_simulate(
    spec: *const c_char,
    x0: *const c_char,
    budget: *const c_char,
    r: u32,
    strategy_json: *const c_char,
    out: *mut *mut c_char,
) -> FgStatus {
    guard(|| {
        let g = make(&text(spec, "spec")?.parse()?)?;
        let x0 = parse_fire(&g, text(x0, "x0")?)?;
        let budget: BudgetSeq = text(budget, "budget")?.parse()?;
        let mut strategy = if strategy_json.is_null() {
            Strategy::new(r, budget.clone(), Vec::new())
        } else {
            serde_json::from_str(text(strategy_json, "strategy")?).map_err(Error::from)?
        };
        strategy.budget = budget;
        strategy.r = r;
        let trace = run(&g, &x0, &strategy, RunOptions::default())?;
        put_string(out, trace.to_jsonl())
    })
}

/// Re-validates a certificate document or replays a trace; `*valid` is set
/// to 1 when it checks out.
///
/// # Safety
/// `doc` NUL-terminated; `valid` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_check(doc: *const c_char, valid: *mut i32) -> FgStatus {
    guard(|| {
        if valid.is_null() {
            return Err(null("valid"));
        }
        let doc = text(doc, "doc")?;
        let is_cert = serde_json::from_str::<serde_json::Value>(doc)
            .map(|v| v.get("kind").is_some())
            .unwrap_or(false);
        let ok = if is_cert {
            certify::check(doc)?.valid
        } else {
            let trace = GameTrace::from_jsonl(doc)?;
            let g = make(&trace.header.family.parse()?)?;
            trace.replay(&g)?.to_jsonl() == doc
        };
        *valid = i32::from(ok);
        Ok(())
    })
}

/// Starts a session. `budget` uses the budget grammar (`2`, `poly:1,1`, ...).
///
/// # Safety
/// Strings NUL-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_session_new(
    spec: *const c_char,
    x0: *const c_char,
    budget: *const c_char,
    r: u32,
    out: *mut *mut FgSession,
) -> FgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let req = CreateRequest {
            family: text(spec, "spec")?.to_string(),
            x0: FireInput::Text(text(x0, "x0")?.to_string()),
            budget: text(budget, "budget")?.parse()?,
            r,
        };
        let session = Session::create("ffi".into(), &req)?;
        *out = Box::into_raw(Box::new(FgSession { inner: session }));
        Ok(())
    })
}

/// # Safety
/// `s` must come from [`fg_session_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fg_session_free(s: *mut FgSession) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Protects the `;`-separated keys, then spreads. A rejected move leaves the
/// session unchanged.
///
/// # Safety
/// `s` live; `keys` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn fg_session_protect(s: *mut FgSession, keys: *const c_char) -> FgStatus {
    guard(|| {
        let s = s.as_mut().ok_or_else(|| null("session"))?;
        let keys: Vec<String> = text(keys, "keys")?
            .split(';')
            .map(str::trim)
            .filter(|k| !k.is_empty())
            .map(str::to_string)
            .collect();
        s.inner.protect(&keys)?;
        Ok(())
    })
}

/// # Safety
/// `s` live.
#[no_mangle]
pub unsafe extern "C" fn fg_session_undo(s: *mut FgSession) -> FgStatus {
    guard(|| {
        let s = s.as_mut().ok_or_else(|| null("session"))?;
        s.inner.undo()?;
        Ok(())
    })
}

/// Current state as JSON.
///
/// # Safety
/// `s` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_session_state_json(s: *const FgSession, out: *mut *mut c_char) -> FgStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("session"))?;
        put_string(out, serde_json::to_string(&s.inner.view()).map_err(Error::from)?)
    })
}

/// JSON-lines trace of the moves so far.
///
/// # Safety
/// `s` live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_session_trace(s: *const FgSession, out: *mut *mut c_char) -> FgStatus {
    guard(|| {
        let s = s.as_ref().ok_or_else(|| null("session"))?;
        put_string(out, s.inner.trace()?.to_jsonl())
    })
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn fg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
