//! C interface to `planar_diameter`.
//!
//! Graphs live behind opaque `PdGraph` handles created by the `pd_graph_*`
//! constructors and released with `pd_graph_free`. Every fallible call
//! returns a `PdStatus`; on failure `pd_last_error_message` describes the
//! error for the calling thread. Strings returned by the library are freed
//! with `pd_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use planar_diameter::harness::{gen_face_split, gen_grid, parse_graph, read_graph};
use planar_diameter::oracle::exact_marked_diameter;
use planar_diameter::{approximate_diameter, EmbeddedGraph, Error, RunConfig, RunReport};

/// Result codes. `PD_STATUS_OK` is zero.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Io = 4,
    InvalidGraph = 5,
    InvalidConfig = 6,
    NotConnected = 7,
    Internal = 8,
}

/// An embedded planar graph.
pub struct PdGraph {
    graph: EmbeddedGraph,
}

/// Run settings; obtain defaults from `pd_config_default`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PdConfig {
    /// Target accuracy in (0, 0.7].
    pub eps: f64,
    /// Graphs with at most this many vertices are solved exactly.
    pub halt_size: usize,
    /// Recursion depth budget; 0 selects the default.
    pub depth_cap: usize,
    pub seed: u64,
    /// Nonzero to perturb lengths (seeded) before solving.
    pub perturb: u8,
    /// Nonzero to use the asymptotic halting size instead of `halt_size`.
    pub paper_halt: u8,
}

impl From<&PdConfig> for RunConfig {
    fn from(c: &PdConfig) -> Self {
        RunConfig {
            halt_size: c.halt_size,
            depth_cap: (c.depth_cap > 0).then_some(c.depth_cap),
            seed: c.seed,
            perturbation: c.perturb != 0,
            paper_halt_rule: c.paper_halt != 0,
            ..RunConfig::new(c.eps)
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> PdStatus {
    match e {
        Error::Parse { .. } => PdStatus::Parse,
        Error::Io(_) => PdStatus::Io,
        Error::BadEpsilon(_) | Error::InvalidConfig(_) => PdStatus::InvalidConfig,
        Error::NotConnected => PdStatus::NotConnected,
        Error::VertexOutOfRange { .. }
        | Error::SelfLoop { .. }
        | Error::NegativeLength { .. }
        | Error::MalformedRotation { .. }
        | Error::NonPlanarEmbedding(_)
        | Error::NoMarkedVertices => PdStatus::InvalidGraph,
        _ => PdStatus::Internal,
    }
}

/// Runs `f`, recording any error or panic for `pd_last_error_message`.
fn guard(f: impl FnOnce() -> Result<(), (PdStatus, String)>) -> PdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            PdStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PdStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (PdStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (PdStatus, String) {
    (PdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (PdStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| (PdStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn emit_graph(out: *mut *mut PdGraph, graph: EmbeddedGraph) {
    *out = Box::into_raw(Box::new(PdGraph { graph }));
}

unsafe fn graph_ref<'a>(g: *const PdGraph) -> Result<&'a EmbeddedGraph, (PdStatus, String)> {
    g.as_ref().map(|h| &h.graph).ok_or_else(|| null("graph"))
}

fn weights(min: u32, max: u32) -> Result<(u32, u32), (PdStatus, String)> {
    if min > max {
        return Err((PdStatus::InvalidConfig, format!("min weight {min} exceeds max weight {max}")));
    }
    Ok((min, max))
}

fn run(g: &EmbeddedGraph, cfg: *const PdConfig) -> Result<RunReport, (PdStatus, String)> {
    let cfg = unsafe { cfg.as_ref() }.ok_or_else(|| null("config"))?;
    approximate_diameter(g, &RunConfig::from(cfg)).map_err(lib_err)
}

/// Default settings for accuracy `eps`.
#[no_mangle]
pub extern "C" fn pd_config_default(eps: f64) -> PdConfig {
    let d = RunConfig::new(eps);
    PdConfig {
        eps,
        halt_size: d.halt_size,
        depth_cap: 0,
        seed: d.seed,
        perturb: 0,
        paper_halt: 0,
    }
}

/// Parses a graph from a NUL-terminated JSON document.
///
/// # Safety
/// `json` must be null or a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_graph_from_json(json: *const c_char, out: *mut *mut PdGraph) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        emit_graph(out, parse_graph(text).map_err(lib_err)?);
        Ok(())
    })
}

/// Reads a graph file.
///
/// # Safety
/// `path` must be null or a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_graph_read_file(path: *const c_char, out: *mut *mut PdGraph) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let path = read_str(path, "path")?;
        emit_graph(out, read_graph(path).map_err(lib_err)?);
        Ok(())
    })
}

/// A `width` x `height` grid with integer lengths in `[min_weight, max_weight]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_graph_gen_grid(
    width: usize,
    height: usize,
    min_weight: u32,
    max_weight: u32,
    seed: u64,
    out: *mut *mut PdGraph,
) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if width == 0 || height == 0 {
            return Err((PdStatus::InvalidConfig, "grid sides must be positive".into()));
        }
        let w = weights(min_weight, max_weight)?;
        emit_graph(out, gen_grid(width, height, w, seed));
        Ok(())
    })
}

/// A random maximal planar graph on `n >= 3` vertices.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_graph_gen_face_split(
    n: usize,
    min_weight: u32,
    max_weight: u32,
    seed: u64,
    out: *mut *mut PdGraph,
) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if n < 3 {
            return Err((PdStatus::InvalidConfig, "face-split graphs need n >= 3".into()));
        }
        let w = weights(min_weight, max_weight)?;
        emit_graph(out, gen_face_split(n, w, seed));
        Ok(())
    })
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn pd_graph_vertex_count(g: *const PdGraph) -> usize {
    g.as_ref().map_or(0, |h| h.graph.vertex_count())
}

/// Releases a graph. Null is ignored.
///
/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pd_graph_free(g: *mut PdGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Writes `d'` with `d <= d' <= (1 + eps) d` to `out`.
///
/// # Safety
/// `g` and `cfg` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_approx_diameter(
    g: *const PdGraph,
    cfg: *const PdConfig,
    out: *mut f64,
) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = run(graph_ref(g)?, cfg)?.d_prime;
        Ok(())
    })
}

/// Writes the exact marked diameter to `out` (quadratic time).
///
/// # Safety
/// `g` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_exact_diameter(g: *const PdGraph, out: *mut f64) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = exact_marked_diameter(graph_ref(g)?).map_err(lib_err)?;
        Ok(())
    })
}

/// Writes the full run report as a JSON string to `out`; free it with
/// `pd_string_free`.
///
/// # Safety
/// `g` and `cfg` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_approx_report_json(
    g: *const PdGraph,
    cfg: *const PdConfig,
    out: *mut *mut c_char,
) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let report = run(graph_ref(g)?, cfg)?;
        let text = serde_json::to_string(&report).map_err(|e| (PdStatus::Internal, e.to_string()))?;
        *out = CString::new(text)
            .map_err(|e| (PdStatus::Internal, e.to_string()))?
            .into_raw();
        Ok(())
    })
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn pd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

