//! C ABI for curvscape.
//!
//! Objects cross the boundary as opaque handles that the caller releases
//! with the matching `cs_*_free`. Every fallible call returns a
//! [`CsStatus`]; on failure a description is available from
//! [`cs_last_error`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use curvscape::curvature::{curvature, CurvatureKind, EdgeFunction, MeasureConfig, MeasureKind};
use curvscape::graph::{load_graph_set, named_graph, read_graph_file, Graph, GraphSet};
use curvscape::landscape::{set_distance, DistanceMode, Norm, PipelineConfig};
use curvscape::persistence::{bottleneck_all, diagram_of, PersistenceDiagram};
use curvscape::stats::permutation_test;
use curvscape::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Malformed or unreadable input.
    Input = 3,
    /// Parameters outside their domain.
    Domain = 4,
    /// The computation failed, e.g. a disconnected pair.
    Computation = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsCurvature {
    Frc = 0,
    Orc = 1,
    Rec = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsMeasure {
    Uniform = 0,
    RandomWalk = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsNorm {
    L1 = 0,
    L2 = 1,
    Sup = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsDistanceMode {
    NormOfDiff = 0,
    Alg2 = 1,
}

/// Pipeline options. `cap_padding <= 0` selects the automatic padding.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CsPipelineConfig {
    pub kind: CsCurvature,
    pub measure: CsMeasure,
    pub rw_steps: usize,
    pub self_mass: f64,
    pub resolution: usize,
    pub cap_padding: f64,
    pub norm: CsNorm,
    pub mode: CsDistanceMode,
    pub max_depth: usize,
}

/// A simple undirected graph.
pub struct CsGraph(Graph);

/// An ordered collection of graphs.
pub struct CsGraphSet(GraphSet);

/// Curvature values indexed by edge, sorted by `(u, v)`.
pub struct CsEdgeFunction(EdgeFunction);

/// Dimension 0 and 1 persistence pairs.
pub struct CsDiagram(PersistenceDiagram);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn classify(e: &Error) -> CsStatus {
    if e.is_input_error() {
        return CsStatus::Input;
    }
    match e {
        Error::Domain(_) | Error::LengthMismatch(..) => CsStatus::Domain,
        Error::AtGraph { source, .. } => classify(source),
        _ => CsStatus::Computation,
    }
}

struct Fail(CsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(classify(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(CsStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(CsStatus::InvalidArgument, msg.into())
}

// Runs `f` behind a panic guard and turns its outcome into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CsStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_last_error(&msg);
            code
        }
        Err(_) => {
            set_last_error("internal panic");
            CsStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    // SAFETY: caller passes a live handle created by this library or null.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn borrow_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    // SAFETY: as for `borrow`, and the caller holds no other reference.
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: non-null and, per the contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn put_handle<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    // SAFETY: non-null and valid for writes per the contract.
    unsafe { out.write(Box::into_raw(Box::new(value))) };
    Ok(())
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null NUL-terminated string per the contract.
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        // SAFETY: `p` came from `Box::into_raw` in this library.
        drop(unsafe { Box::from_raw(p) });
    }
}

impl CsPipelineConfig {
    fn to_pipeline(self) -> PipelineConfig {
        PipelineConfig {
            kind: match self.kind {
                CsCurvature::Frc => CurvatureKind::Frc,
                CsCurvature::Orc => CurvatureKind::Orc,
                CsCurvature::Rec => CurvatureKind::Rec,
            },
            measure: self.measure_config(),
            resolution: self.resolution,
            cap_padding: (self.cap_padding > 0.0).then_some(self.cap_padding),
            norm: match self.norm {
                CsNorm::L1 => Norm::L1,
                CsNorm::L2 => Norm::L2,
                CsNorm::Sup => Norm::Sup,
            },
            mode: match self.mode {
                CsDistanceMode::NormOfDiff => DistanceMode::NormOfDiff,
                CsDistanceMode::Alg2 => DistanceMode::Alg2,
            },
            max_depth: self.max_depth,
        }
    }

    fn measure_config(self) -> MeasureConfig {
        MeasureConfig {
            kind: match self.measure {
                CsMeasure::Uniform => MeasureKind::Uniform,
                CsMeasure::RandomWalk => MeasureKind::RandomWalk,
            },
            steps: self.rw_steps,
            self_mass: self.self_mass,
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failure on this thread; empty if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn cs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Default pipeline: ORC with the uniform measure, 1000 grid points, automatic
/// padding, sup norm, norm of the difference, depth 64.
#[no_mangle]
pub extern "C" fn cs_pipeline_config_default() -> CsPipelineConfig {
    let d = PipelineConfig::default();
    CsPipelineConfig {
        kind: CsCurvature::Orc,
        measure: CsMeasure::Uniform,
        rw_steps: d.measure.steps,
        self_mass: d.measure.self_mass,
        resolution: d.resolution,
        cap_padding: 0.0,
        norm: CsNorm::Sup,
        mode: CsDistanceMode::NormOfDiff,
        max_depth: d.max_depth,
    }
}

/// Builds a graph on `n` vertices from `m` edges given as `2m` endpoints.
///
/// # Safety
/// `endpoints` must point to `2 * m` readable values (it may be null when
/// `m == 0`); `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_new(
    n: usize,
    endpoints: *const usize,
    m: usize,
    out: *mut *mut CsGraph,
) -> CsStatus {
    guard(|| {
        let flat: &[usize] = if m == 0 {
            &[]
        } else if endpoints.is_null() {
            return Err(null("endpoints"));
        } else {
            // SAFETY: caller guarantees 2m readable values.
            unsafe { std::slice::from_raw_parts(endpoints, 2 * m) }
        };
        let g = Graph::new(n, flat.chunks_exact(2).map(|e| (e[0], e[1])))?;
        unsafe { put_handle(out, CsGraph(g)) }
    })
}

/// Reads a graph from an edge-list or single-graph JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_read(path: *const c_char, out: *mut *mut CsGraph) -> CsStatus {
    guard(|| {
        let path = unsafe { text(path, "path") }?;
        let g = read_graph_file(Path::new(path))?;
        unsafe { put_handle(out, CsGraph(g)) }
    })
}

/// One of the built-in graphs (`k3`, `rook4x4`, `shrikhande`, ...).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_named(name: *const c_char, out: *mut *mut CsGraph) -> CsStatus {
    guard(|| {
        let name = unsafe { text(name, "name") }?;
        unsafe { put_handle(out, CsGraph(named_graph(name)?)) }
    })
}

/// # Safety
/// `g` must be a live graph handle or null.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_vertex_count(g: *const CsGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.0.n())
}

/// # Safety
/// `g` must be a live graph handle or null.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_edge_count(g: *const CsGraph) -> usize {
    unsafe { g.as_ref() }.map_or(0, |g| g.0.edge_count())
}

/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_free(g: *mut CsGraph) {
    unsafe { free(g) }
}

/// An empty graph set.
#[no_mangle]
pub extern "C" fn cs_graph_set_new() -> *mut CsGraphSet {
    Box::into_raw(Box::new(CsGraphSet(GraphSet::default())))
}

/// Loads a graph set from a directory, a JSON-lines file or a single graph file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_set_read(path: *const c_char, out: *mut *mut CsGraphSet) -> CsStatus {
    guard(|| {
        let path = unsafe { text(path, "path") }?;
        let set = load_graph_set(Path::new(path))?;
        unsafe { put_handle(out, CsGraphSet(set)) }
    })
}

/// Appends a copy of `g`; the caller keeps ownership of `g`.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_set_push(set: *mut CsGraphSet, g: *const CsGraph) -> CsStatus {
    guard(|| {
        let set = unsafe { borrow_mut(set, "set") }?;
        let g = unsafe { borrow(g, "graph") }?;
        set.0.graphs.push(g.0.clone());
        Ok(())
    })
}

/// # Safety
/// `set` must be a live set handle or null.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_set_len(set: *const CsGraphSet) -> usize {
    unsafe { set.as_ref() }.map_or(0, |s| s.0.len())
}

/// # Safety
/// `set` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_set_free(set: *mut CsGraphSet) {
    unsafe { free(set) }
}

/// Edge curvature of `g`. Only the measure fields of `cfg` matter for ORC.
///
/// # Safety
/// `g` and `cfg` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cs_curvature(
    g: *const CsGraph,
    cfg: *const CsPipelineConfig,
    out: *mut *mut CsEdgeFunction,
) -> CsStatus {
    guard(|| {
        let g = unsafe { borrow(g, "graph") }?;
        let cfg = unsafe { borrow(cfg, "config") }?.to_pipeline();
        let f = curvature(&g.0, cfg.kind, &cfg.measure)?;
        unsafe { put_handle(out, CsEdgeFunction(f)) }
    })
}

/// # Safety
/// `f` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cs_edge_function_len(f: *const CsEdgeFunction) -> usize {
    unsafe { f.as_ref() }.map_or(0, |f| f.0.len())
}

/// The `i`-th entry in `(u, v)` order.
///
/// # Safety
/// `f` must be live; the output pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cs_edge_function_get(
    f: *const CsEdgeFunction,
    i: usize,
    u: *mut usize,
    v: *mut usize,
    value: *mut f64,
) -> CsStatus {
    guard(|| {
        let f = unsafe { borrow(f, "edge function") }?;
        let &((a, b), x) = f
            .0
            .entries()
            .get(i)
            .ok_or_else(|| invalid(format!("index {i} out of range for {} edges", f.0.len())))?;
        unsafe {
            put(u, a)?;
            put(v, b)?;
            put(value, x)
        }
    })
}

/// # Safety
/// `f` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cs_edge_function_free(f: *mut CsEdgeFunction) {
    unsafe { free(f) }
}

/// Persistence diagram of the sublevel filtration of `f` on `g`.
///
/// # Safety
/// `g` and `f` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cs_diagram(
    g: *const CsGraph,
    f: *const CsEdgeFunction,
    out: *mut *mut CsDiagram,
) -> CsStatus {
    guard(|| {
        let g = unsafe { borrow(g, "graph") }?;
        let f = unsafe { borrow(f, "edge function") }?;
        let d = diagram_of(&g.0, &f.0)?;
        unsafe { put_handle(out, CsDiagram(d)) }
    })
}

/// Number of pairs in dimension `dim` (0 or 1); 0 for other dimensions.
///
/// # Safety
/// `d` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn cs_diagram_len(d: *const CsDiagram, dim: usize) -> usize {
    match unsafe { d.as_ref() } {
        Some(d) if dim < 2 => d.0.dim(dim).len(),
        _ => 0,
    }
}

/// The `i`-th pair of dimension `dim`; essential classes die at `INFINITY`.
///
/// # Safety
/// `d` must be live; the output pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cs_diagram_pair(
    d: *const CsDiagram,
    dim: usize,
    i: usize,
    birth: *mut f64,
    death: *mut f64,
) -> CsStatus {
    guard(|| {
        let d = unsafe { borrow(d, "diagram") }?;
        if dim > 1 {
            return Err(invalid(format!("dimension {dim} is not 0 or 1")));
        }
        let &(b, e) = d.0.dim(dim).get(i).ok_or_else(|| invalid(format!("index {i} out of range")))?;
        unsafe {
            put(birth, b)?;
            put(death, e)
        }
    })
}

/// Bottleneck distance over both dimensions; `INFINITY` when the numbers of
/// essential classes differ.
///
/// # Safety
/// `a` and `b` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cs_bottleneck(a: *const CsDiagram, b: *const CsDiagram, out: *mut f64) -> CsStatus {
    guard(|| {
        let a = unsafe { borrow(a, "diagram") }?;
        let b = unsafe { borrow(b, "diagram") }?;
        unsafe { put(out, bottleneck_all(&a.0, &b.0).value()) }
    })
}

/// # Safety
/// `d` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cs_diagram_free(d: *mut CsDiagram) {
    unsafe { free(d) }
}

/// Distance between the average landscapes of two graph sets.
///
/// # Safety
/// All handles must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cs_set_distance(
    a: *const CsGraphSet,
    b: *const CsGraphSet,
    cfg: *const CsPipelineConfig,
    out: *mut f64,
) -> CsStatus {
    guard(|| {
        let a = unsafe { borrow(a, "set a") }?;
        let b = unsafe { borrow(b, "set b") }?;
        let cfg = unsafe { borrow(cfg, "config") }?.to_pipeline();
        let r = set_distance(&a.0, &b.0, &cfg)?;
        unsafe { put(out, r.distance) }
    })
}

/// Two-sample permutation test; writes the observed distance and the share
/// of permutations with a strictly larger distance.
///
/// # Safety
/// All handles must be live; the output pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cs_permutation_test(
    a: *const CsGraphSet,
    b: *const CsGraphSet,
    cfg: *const CsPipelineConfig,
    permutations: usize,
    seed: u64,
    observed: *mut f64,
    fraction_higher: *mut f64,
) -> CsStatus {
    guard(|| {
        let a = unsafe { borrow(a, "set a") }?;
        let b = unsafe { borrow(b, "set b") }?;
        let cfg = unsafe { borrow(cfg, "config") }?.to_pipeline();
        let r = permutation_test(&a.0, &b.0, &cfg, permutations, seed)?;
        unsafe {
            put(observed, r.observed_distance)?;
            put(fraction_higher, r.fraction_higher)
        }
    })
}
