//! C ABI over `rainbow-core`.
//!
//! Every object crosses the boundary as an opaque handle owned by the
//! caller and released with its `rb_*_free` function. Functions return an
//! [`RbStatus`]; results go through out-pointers. After a failure,
//! [`rb_last_error`] describes it until the next call on the same thread.
//! Strings handed out by the library are released with [`rb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rainbow_core::biclique::CoverOptions;
use rainbow_core::exact::{count_satisfying_2colorings, solve_subset_rainbow};
use rainbow_core::format::{parse_instance, write_instance};
use rainbow_core::maxrb::{derandomized_approx, solve_max_rainbow};
use rainbow_core::reduction::cnf::parse_dimacs;
use rainbow_core::reduction::pipeline::{compile, CompileOptions, Compiled};
use rainbow_core::reduction::trace::write_trace;
use rainbow_core::verify::verify_requests;
use rainbow_core::{Coloring, Config, Error, Instance};

/// Outcome of a call. Decision functions use `RB_STATUS_OK` for YES and `RB_STATUS_NO`
/// for NO.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RbStatus {
    Ok = 0,
    No = 1,
    Usage = 2,
    Resource = 3,
    Capability = 4,
    Parse = 5,
    NullPointer = 6,
    Utf8 = 7,
    Internal = 70,
    Panic = 71,
}

impl From<&Error> for RbStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Usage(_) => RbStatus::Usage,
            Error::Resource(_) => RbStatus::Resource,
            Error::Capability(_) => RbStatus::Capability,
            Error::Parse { .. } => RbStatus::Parse,
            Error::Internal(_) => RbStatus::Internal,
        }
    }
}

/// Parsed instance.
pub struct RbInstance(Instance);

/// Total edge coloring, one color in `1..=k` per edge in edge order.
pub struct RbColoring(Coloring);

/// Search budgets and worker count.
pub struct RbConfig(Config);

/// Output of the formula compiler.
pub struct RbCompiled(Compiled);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(RbStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(RbStatus::from(&e), e.to_string())
    }
}

type FfiResult = std::result::Result<RbStatus, Fail>;

fn guard(f: impl FnOnce() -> FfiResult) -> RbStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside the library".into());
            RbStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(RbStatus::NullPointer, "null pointer argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(RbStatus::Utf8, "string is not UTF-8".into()))
}

unsafe fn get<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = CString::new(s).map_err(|_| Fail(RbStatus::Internal, "string with nul".into()))?.into_raw();
    Ok(())
}

unsafe fn config_or_default(cfg: *const RbConfig) -> Config {
    cfg.as_ref().map_or_else(Config::default, |c| c.0.clone())
}

/// Message of the last failure on this thread, or null. Valid until the
/// next library call on the same thread.
#[no_mangle]
pub extern "C" fn rb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` is null or was returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Default budgets, one worker.
#[no_mangle]
pub extern "C" fn rb_config_new() -> *mut RbConfig {
    Box::into_raw(Box::new(RbConfig(Config::default())))
}

/// # Safety
/// `cfg` is null or a live handle from [`rb_config_new`].
#[no_mangle]
pub unsafe extern "C" fn rb_config_free(cfg: *mut RbConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// # Safety
/// `cfg` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn rb_config_set_workers(cfg: *mut RbConfig, workers: usize) -> RbStatus {
    guard(|| {
        let c = cfg.as_mut().ok_or_else(null)?;
        if workers == 0 {
            return Err(Fail(RbStatus::Usage, "worker count must be positive".into()));
        }
        c.0.workers = workers;
        Ok(RbStatus::Ok)
    })
}

/// # Safety
/// `cfg` is a live handle.
#[no_mangle]
pub unsafe extern "C" fn rb_config_set_search_nodes(cfg: *mut RbConfig, nodes: u64) -> RbStatus {
    guard(|| {
        let c = cfg.as_mut().ok_or_else(null)?;
        if nodes == 0 {
            return Err(Fail(RbStatus::Usage, "node budget must be positive".into()));
        }
        c.0.budgets.search_nodes = nodes;
        Ok(RbStatus::Ok)
    })
}

/// Parses the instance text format.
///
/// # Safety
/// `text` is a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rb_instance_parse(text: *const c_char, out: *mut *mut RbInstance) -> RbStatus {
    guard(|| {
        let inst = parse_instance(self::text(text)?)?;
        put(out, RbInstance(inst))?;
        Ok(RbStatus::Ok)
    })
}

/// # Safety
/// `inst` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rb_instance_free(inst: *mut RbInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Serializes an instance; free the string with [`rb_string_free`].
///
/// # Safety
/// `inst` is a live handle; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn rb_instance_write(inst: *const RbInstance, out: *mut *mut c_char) -> RbStatus {
    guard(|| {
        put_string(out, write_instance(&get(inst)?.0))?;
        Ok(RbStatus::Ok)
    })
}

/// Vertex count, or 0 for a null handle.
///
/// # Safety
/// `inst` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rb_instance_vertices(inst: *const RbInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.graph.n())
}

/// Edge count, or 0 for a null handle.
///
/// # Safety
/// `inst` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rb_instance_edges(inst: *const RbInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.graph.m())
}

/// Color count, or 0 for a null handle.
///
/// # Safety
/// `inst` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rb_instance_colors(inst: *const RbInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.k)
}

/// Request count, or 0 for a null handle.
///
/// # Safety
/// `inst` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rb_instance_requests(inst: *const RbInstance) -> usize {
    inst.as_ref().map_or(0, |i| i.0.request_count())
}

/// # Safety
/// `c` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rb_coloring_free(c: *mut RbColoring) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Number of edges colored, or 0 for a null handle.
///
/// # Safety
/// `c` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rb_coloring_len(c: *const RbColoring) -> usize {
    c.as_ref().map_or(0, |c| c.0.len())
}

/// Colors in edge order; valid while the handle lives.
///
/// # Safety
/// `c` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rb_coloring_data(c: *const RbColoring) -> *const u8 {
    c.as_ref().map_or(ptr::null(), |c| c.0.as_ptr())
}

/// Decides the instance. On `RB_STATUS_OK` a satisfying coloring is stored in
/// `out`; on `RB_STATUS_NO` `out` is set to null. `cfg` may be null.
///
/// # Safety
/// `inst` is a live handle, `cfg` null or live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rb_solve(inst: *const RbInstance, cfg: *const RbConfig, out: *mut *mut RbColoring) -> RbStatus {
    guard(|| {
        let inst = &get(inst)?.0;
        if out.is_null() {
            return Err(null());
        }
        match solve_subset_rainbow(inst, &config_or_default(cfg))? {
            Some(c) => {
                put(out, RbColoring(c))?;
                Ok(RbStatus::Ok)
            }
            None => {
                *out = ptr::null_mut();
                Ok(RbStatus::No)
            }
        }
    })
}

/// Counts requests that `colors` satisfies. `len` must equal the edge count.
///
/// # Safety
/// `inst` is live; `colors` points to `len` bytes; `satisfied` is writable.
#[no_mangle]
pub unsafe extern "C" fn rb_verify(
    inst: *const RbInstance,
    colors: *const u8,
    len: usize,
    satisfied: *mut usize,
) -> RbStatus {
    guard(|| {
        let inst = &get(inst)?.0;
        if colors.is_null() || satisfied.is_null() {
            return Err(null());
        }
        if len != inst.graph.m() {
            return Err(Fail(RbStatus::Usage, format!("coloring has {len} entries for {} edges", inst.graph.m())));
        }
        let c = std::slice::from_raw_parts(colors, len);
        if c.iter().any(|&x| x == 0 || x as usize > inst.k) {
            return Err(Fail(RbStatus::Usage, format!("color outside 1..={}", inst.k)));
        }
        let req = inst.request_pairs();
        let n = verify_requests(&inst.graph, c, &req, inst.k).len();
        *satisfied = n;
        Ok(if n == req.len() && inst.precoloring.is_extended_by(c) { RbStatus::Ok } else { RbStatus::No })
    })
}

/// Number of 2-colorings satisfying every request, as a decimal string.
///
/// # Safety
/// `inst` is live, `cfg` null or live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rb_count_2colorings(
    inst: *const RbInstance,
    cfg: *const RbConfig,
    out: *mut *mut c_char,
) -> RbStatus {
    guard(|| {
        let inst = &get(inst)?.0;
        if inst.k != 2 || inst.has_precoloring() {
            return Err(Fail(RbStatus::Usage, "counting needs k = 2 and no precoloring".into()));
        }
        let n = count_satisfying_2colorings(&inst.graph, &inst.request_pairs(), &config_or_default(cfg))?;
        put_string(out, n.to_string())?;
        Ok(RbStatus::Ok)
    })
}

/// Coloring by conditional expectations over one short path per feasible
/// request.
///
/// # Safety
/// `inst` is live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rb_approx(inst: *const RbInstance, out: *mut *mut RbColoring) -> RbStatus {
    guard(|| {
        let inst = &get(inst)?.0;
        let c = derandomized_approx(&inst.graph, &inst.feasible_requests(), inst.k)?;
        put(out, RbColoring(c))?;
        Ok(RbStatus::Ok)
    })
}

/// Whether some coloring satisfies at least `q` anti-edges of the instance
/// graph. The witness goes to `out` on `RB_STATUS_OK`; null on `RB_STATUS_NO`.
///
/// # Safety
/// `inst` is live, `cfg` null or live, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rb_max_solve(
    inst: *const RbInstance,
    q: usize,
    cfg: *const RbConfig,
    out: *mut *mut RbColoring,
) -> RbStatus {
    guard(|| {
        let inst = &get(inst)?.0;
        if out.is_null() {
            return Err(null());
        }
        let r = solve_max_rainbow(&inst.graph, inst.k, q, &config_or_default(cfg))?;
        match r.coloring {
            Some(c) if r.yes => {
                put(out, RbColoring(c))?;
                Ok(RbStatus::Ok)
            }
            _ => {
                *out = ptr::null_mut();
                Ok(RbStatus::No)
            }
        }
    })
}

/// Compiles a DIMACS formula. `target` is one of `sr2c-ext`, `srkc-ext`,
/// `srkc`, `rkc`.
///
/// # Safety
/// `dimacs` and `target` are nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rb_compile(
    dimacs: *const c_char,
    k: usize,
    target: *const c_char,
    seed: u64,
    out: *mut *mut RbCompiled,
) -> RbStatus {
    guard(|| {
        let phi = parse_dimacs(text(dimacs)?)?;
        let opts = CompileOptions {
            k,
            target: text(target)?.parse()?,
            cover: CoverOptions { seed, ..CoverOptions::default() },
        };
        put(out, RbCompiled(compile(&phi, &opts)?))?;
        Ok(RbStatus::Ok)
    })
}

/// # Safety
/// `c` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rb_compiled_free(c: *mut RbCompiled) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Copy of the final instance.
///
/// # Safety
/// `c` is live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rb_compiled_instance(c: *const RbCompiled, out: *mut *mut RbInstance) -> RbStatus {
    guard(|| {
        put(out, RbInstance(get(c)?.0.instance().clone()))?;
        Ok(RbStatus::Ok)
    })
}

/// Trace text of the compilation.
///
/// # Safety
/// `c` is live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rb_compiled_trace(c: *const RbCompiled, out: *mut *mut c_char) -> RbStatus {
    guard(|| {
        put_string(out, write_trace(&get(c)?.0.trace))?;
        Ok(RbStatus::Ok)
    })
}

/// Size report, one stage per line followed by its checks. Returns `RB_STATUS_NO`
/// when a check disagrees with its stated count.
///
/// # Safety
/// `c` is live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rb_compiled_report(c: *const RbCompiled, out: *mut *mut c_char) -> RbStatus {
    guard(|| {
        let rep = &get(c)?.0.report;
        let s: String = rep.iter().map(|r| format!("{r}\n")).collect();
        put_string(out, s)?;
        Ok(if rep.iter().all(|r| r.passed()) { RbStatus::Ok } else { RbStatus::No })
    })
}

/// Coloring of the final instance for a model of the source formula;
/// `model[i]` nonzero means variable `i + 1` is true.
///
/// # Safety
/// `c` live; `model` points to `nvars` bytes; `cfg` null or live; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rb_compiled_lift(
    c: *const RbCompiled,
    model: *const u8,
    nvars: usize,
    cfg: *const RbConfig,
    out: *mut *mut RbColoring,
) -> RbStatus {
    guard(|| {
        let c = &get(c)?.0;
        if model.is_null() && nvars > 0 {
            return Err(null());
        }
        let xi: Vec<bool> =
            if nvars == 0 { Vec::new() } else { std::slice::from_raw_parts(model, nvars).iter().map(|&b| b != 0).collect() };
        put(out, RbColoring(c.lift(&xi, &config_or_default(cfg))?))?;
        Ok(RbStatus::Ok)
    })
}
