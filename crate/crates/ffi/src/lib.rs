//! C ABI over the colormatch core: graph generation and parsing, maximum
//! matchings, color profiles, exact profile enumeration, and recoloring
//! walks, behind opaque handles.
//!
//! Conventions:
//! - Every fallible call returns a `CM_*` status code; `0` is success. On
//!   failure, [`cm_last_error`] returns a thread-local message that stays
//!   valid until the next library call on the same thread.
//! - Objects returned through `out` parameters are owned by the caller and
//!   must be released with their matching `*_free` function. Strings are
//!   released with [`cm_string_free`].
//! - Vertices and colors are 0-based across this ABI (text formats emitted
//!   and parsed by the library remain 1-based, matching the CLI).
//! - Handles are not synchronized; share them across threads only behind
//!   the caller's own locking. No call unwinds across the boundary: panics
//!   are caught and reported as `CM_ERR_PANIC`.

use colormatch::{
    maximum_matching, profile, ColorLaw, ColoredBipartiteGraph, Error, Matching,
};
use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Success.
pub const CM_OK: c_int = 0;
/// I/O failure.
pub const CM_ERR_IO: c_int = 1;
/// Invalid argument, parse failure, or internal consistency violation.
pub const CM_ERR_ARGUMENT: c_int = 2;
/// Parameters leave the model's domain (e.g. an edge probability above 1).
pub const CM_ERR_MODEL_DOMAIN: c_int = 3;
/// Structured experiment failure (e.g. a recoloring walk dead-ended).
pub const CM_ERR_EXPERIMENT: c_int = 4;
/// An internal panic was caught at the boundary.
pub const CM_ERR_PANIC: c_int = 5;

/// A randomly colored bipartite graph (opaque).
pub struct CmGraph(ColoredBipartiteGraph);

/// A (partial or perfect) matching (opaque).
pub struct CmMatching(Matching);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let owned = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

fn code_of(e: &Error) -> c_int {
    e.exit_code() as c_int
}

fn fail(e: &Error) -> c_int {
    set_error(&e.to_string());
    code_of(e)
}

fn guard(f: impl FnOnce() -> c_int) -> c_int {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic");
            CM_ERR_PANIC
        }
    }
}

/// # Safety
/// `out` must be valid for a single pointer write.
unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> c_int {
    if out.is_null() {
        set_error("out pointer is null");
        return CM_ERR_ARGUMENT;
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    CM_OK
}

/// # Safety
/// `out` must be valid for a single pointer write.
unsafe fn write_string(out: *mut *mut c_char, s: String) -> c_int {
    if out.is_null() {
        set_error("out pointer is null");
        return CM_ERR_ARGUMENT;
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            CM_OK
        }
        Err(_) => {
            set_error("produced text contained an interior NUL");
            CM_ERR_ARGUMENT
        }
    }
}

/// # Safety
/// `ptr` must be null or a valid, live handle of type `T`.
unsafe fn deref<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, c_int> {
    if ptr.is_null() {
        set_error(&format!("{what} handle is null"));
        return Err(CM_ERR_ARGUMENT);
    }
    Ok(unsafe { &*ptr })
}

/// Message for the most recent failure on this thread. Empty if the last
/// call succeeded. The pointer stays valid until the next library call on
/// the same thread; copy the string if it must outlive that.
#[no_mangle]
pub extern "C" fn cm_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Sample a graph on `n + n` vertices: each of the `n²` possible edges is
/// kept with probability `p` and colored by the law `alphas[0..q]`
/// (positive weights summing to 1). Identical `(n, p, alphas, seed)` give
/// identical graphs on every platform.
///
/// # Safety
/// `alphas` must point to `q` readable doubles; `out` must be valid for a
/// pointer write.
#[no_mangle]
pub unsafe extern "C" fn cm_graph_generate(
    n: usize,
    p: f64,
    alphas: *const f64,
    q: usize,
    seed: u64,
    out: *mut *mut CmGraph,
) -> c_int {
    guard(|| {
        if alphas.is_null() || q == 0 {
            set_error("alphas must point to at least one weight");
            return CM_ERR_ARGUMENT;
        }
        let weights = unsafe { std::slice::from_raw_parts(alphas, q) }.to_vec();
        let law = match ColorLaw::new(weights) {
            Ok(l) => l,
            Err(e) => return fail(&e),
        };
        match ColoredBipartiteGraph::generate_with_p(n, p, &law, seed) {
            Ok(g) => unsafe { write_handle(out, CmGraph(g)) },
            Err(e) => fail(&e),
        }
    })
}

/// Parse a graph from its text form (`n q` header, then 1-based
/// `a b color` lines; `#` starts a comment).
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be valid for a
/// pointer write.
#[no_mangle]
pub unsafe extern "C" fn cm_graph_from_text(
    text: *const c_char,
    out: *mut *mut CmGraph,
) -> c_int {
    guard(|| {
        if text.is_null() {
            set_error("text pointer is null");
            return CM_ERR_ARGUMENT;
        }
        let s = match unsafe { CStr::from_ptr(text) }.to_str() {
            Ok(s) => s,
            Err(_) => {
                set_error("text is not valid UTF-8");
                return CM_ERR_ARGUMENT;
            }
        };
        match ColoredBipartiteGraph::from_text(s) {
            Ok(g) => unsafe { write_handle(out, CmGraph(g)) },
            Err(e) => fail(&e),
        }
    })
}

/// Render the graph's canonical text form. Free the string with
/// [`cm_string_free`].
///
/// # Safety
/// `g` must be a live graph handle; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn cm_graph_to_text(g: *const CmGraph, out: *mut *mut c_char) -> c_int {
    guard(|| {
        let g = match unsafe { deref(g, "graph") } {
            Ok(g) => g,
            Err(c) => return c,
        };
        unsafe { write_string(out, g.0.to_text()) }
    })
}

/// Vertices per side; `0` for a null handle.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn cm_graph_n(g: *const CmGraph) -> usize {
    if g.is_null() {
        return 0;
    }
    unsafe { &*g }.0.n()
}

/// Number of colors; `0` for a null handle.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn cm_graph_q(g: *const CmGraph) -> usize {
    if g.is_null() {
        return 0;
    }
    unsafe { &*g }.0.q()
}

/// Number of edges; `0` for a null handle.
///
/// # Safety
/// `g` must be null or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn cm_graph_edge_count(g: *const CmGraph) -> usize {
    if g.is_null() {
        return 0;
    }
    unsafe { &*g }.0.edge_count()
}

/// Release a graph handle. Null is a no-op.
///
/// # Safety
/// `g` must be null or an owned graph handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cm_graph_free(g: *mut CmGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Compute a maximum matching (deterministic for a given graph).
///
/// # Safety
/// `g` must be a live graph handle; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn cm_maximum_matching(
    g: *const CmGraph,
    out: *mut *mut CmMatching,
) -> c_int {
    guard(|| {
        let g = match unsafe { deref(g, "graph") } {
            Ok(g) => g,
            Err(c) => return c,
        };
        unsafe { write_handle(out, CmMatching(maximum_matching(&g.0))) }
    })
}

/// Number of matched pairs; `0` for a null handle.
///
/// # Safety
/// `m` must be null or a live matching handle.
#[no_mangle]
pub unsafe extern "C" fn cm_matching_size(m: *const CmMatching) -> usize {
    if m.is_null() {
        return 0;
    }
    unsafe { &*m }.0.size()
}

/// Whether every vertex is matched; `false` for a null handle.
///
/// # Safety
/// `m` must be null or a live matching handle.
#[no_mangle]
pub unsafe extern "C" fn cm_matching_is_perfect(m: *const CmMatching) -> bool {
    if m.is_null() {
        return false;
    }
    unsafe { &*m }.0.is_perfect()
}

/// Render the matching's text form (1-based `a b` lines). Free the string
/// with [`cm_string_free`].
///
/// # Safety
/// `m` must be a live matching handle; `out` must be valid for a pointer
/// write.
#[no_mangle]
pub unsafe extern "C" fn cm_matching_to_text(
    m: *const CmMatching,
    out: *mut *mut c_char,
) -> c_int {
    guard(|| {
        let m = match unsafe { deref(m, "matching") } {
            Ok(m) => m,
            Err(c) => return c,
        };
        unsafe { write_string(out, m.0.to_text()) }
    })
}

/// Release a matching handle. Null is a no-op.
///
/// # Safety
/// `m` must be null or an owned matching handle not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cm_matching_free(m: *mut CmMatching) {
    if !m.is_null() {
        drop(unsafe { Box::from_raw(m) });
    }
}

/// Per-color edge counts of a perfect matching of `g`, written to
/// `out_counts[0..q]`.
///
/// # Safety
/// `g` and `m` must be live handles; `out_counts` must be valid for
/// `cm_graph_q(g)` writes.
#[no_mangle]
pub unsafe extern "C" fn cm_profile(
    g: *const CmGraph,
    m: *const CmMatching,
    out_counts: *mut usize,
) -> c_int {
    guard(|| {
        let g = match unsafe { deref(g, "graph") } {
            Ok(g) => g,
            Err(c) => return c,
        };
        let m = match unsafe { deref(m, "matching") } {
            Ok(m) => m,
            Err(c) => return c,
        };
        if out_counts.is_null() {
            set_error("out_counts pointer is null");
            return CM_ERR_ARGUMENT;
        }
        match profile(&g.0, &m.0) {
            Ok(p) => {
                let dst = unsafe { std::slice::from_raw_parts_mut(out_counts, g.0.q()) };
                dst.copy_from_slice(p.counts());
                CM_OK
            }
            Err(e) => fail(&e),
        }
    })
}

/// Enumerate every color profile realized by some perfect matching, as a
/// JSON array of `q`-vectors in lexicographic order (e.g. `[[0,2],[2,0]]`).
/// Exact but exponential: graphs above the library's size cap are rejected.
/// Free the string with [`cm_string_free`].
///
/// # Safety
/// `g` must be a live graph handle; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn cm_mcp_json(g: *const CmGraph, out: *mut *mut c_char) -> c_int {
    guard(|| {
        let g = match unsafe { deref(g, "graph") } {
            Ok(g) => g,
            Err(c) => return c,
        };
        let set = match colormatch::oracle::mcp_subset_dp(&g.0) {
            Ok(s) => s,
            Err(e) => return fail(&e),
        };
        let json = match serde_json::to_string(set.profiles()) {
            Ok(j) => j,
            Err(e) => {
                set_error(&format!("serialization failed: {e}"));
                return CM_ERR_ARGUMENT;
            }
        };
        unsafe { write_string(out, json) }
    })
}

/// Walk the perfect matching `m` toward the target profile
/// `target[0..q]` by alternating-cycle swaps. On success writes the final
/// matching to `out`. A dead end returns `CM_ERR_EXPERIMENT` (with the
/// reached profile in the error message) and writes nothing.
///
/// # Safety
/// `g` and `m` must be live handles; `target` must point to `q` readable
/// values; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn cm_recolor_to_target(
    g: *const CmGraph,
    m: *const CmMatching,
    target: *const usize,
    q: usize,
    out: *mut *mut CmMatching,
) -> c_int {
    guard(|| {
        let g = match unsafe { deref(g, "graph") } {
            Ok(g) => g,
            Err(c) => return c,
        };
        let m = match unsafe { deref(m, "matching") } {
            Ok(m) => m,
            Err(c) => return c,
        };
        if target.is_null() {
            set_error("target pointer is null");
            return CM_ERR_ARGUMENT;
        }
        if q != g.0.q() {
            set_error(&format!(
                "target has {q} counts, the graph has {} colors",
                g.0.q()
            ));
            return CM_ERR_ARGUMENT;
        }
        let counts = unsafe { std::slice::from_raw_parts(target, q) }.to_vec();
        let want = colormatch::ColorProfile::new(counts);
        match colormatch::recolor::recolor_to_target(&g.0, &m.0, &want) {
            Ok(outcome) => {
                if let Some(failure) = &outcome.failure {
                    set_error(&format!(
                        "recoloring dead-ended at profile {}",
                        failure.profile_reached
                    ));
                    return CM_ERR_EXPERIMENT;
                }
                unsafe { write_handle(out, CmMatching(outcome.matching)) }
            }
            Err(e) => fail(&e),
        }
    })
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must be null or a string obtained from this library, not used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn cm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
