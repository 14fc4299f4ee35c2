//! C ABI over the `sociogram` library.
//!
//! Graphs live behind an opaque `SgGraph` handle created by one of the
//! `sg_graph_*` constructors and released with `sg_graph_free`. Every
//! fallible call returns an `SgStatus`; on failure the message is kept per
//! thread and can be fetched with `sg_last_error`. Per-vertex results are
//! written into caller-owned arrays indexed like `sg_graph_vertex_name`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sociogram::centrality::{
    betweenness, eigenvector_centrality, pagerank, Directedness, EigenParams, PageRankParams,
};
use sociogram::classify::{
    classify_archetype, features, generate_archetype, Archetype, ClassifierConfig,
};
use sociogram::community::cnm_partition;
use sociogram::layout::{fr_layout, LayoutParams};
use sociogram::metrics::{asymmetry_strength, graph_stats};
use sociogram::outcome::log10_ratio;
use sociogram::statfit::{fit, FitModel};
use sociogram::{build_graph, parse_edge_csv, Dedup, Error, Metric, Sociogram, Undefined};

/// Opaque graph handle.
pub struct SgGraph {
    inner: Sociogram,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgStatus {
    Ok = 0,
    NullPointer,
    InvalidUtf8,
    Io,
    Format,
    UnknownVertex,
    UndefinedMetric,
    Contract,
    SingularFit,
    Config,
    BufferTooSmall,
    Panic,
}

/// Why an `SgMetric` has no value; `SG_UNDEFINED_DEFINED` when it has one.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgUndefined {
    Defined = 0,
    EmptyGraph,
    TooFewVertices,
    NoEdges,
    NoReachablePairs,
    ZeroDenominator,
    ZeroNumerator,
    InfiniteAsymmetry,
    EmptyCorpus,
    ZeroVariance,
    TooFewPoints,
    StageSkipped,
}

/// A value that may be undefined. `value` is NaN unless `reason` is
/// `SG_UNDEFINED_DEFINED`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgMetric {
    pub value: f64,
    pub reason: SgUndefined,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgDedup {
    KeepAll = 0,
    CollapsePairs = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgGraphStats {
    pub c_global: SgMetric,
    pub rho: SgMetric,
    pub diameter: SgMetric,
    pub d_avg: SgMetric,
    pub max_edges: u64,
    pub r_vertex: SgMetric,
    pub n_in: SgMetric,
    pub n_out: SgMetric,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgArchetype {
    Unified = 0,
    InHub,
    OutHub,
    MultiTopic,
    Polarized,
    Fragmented,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgArchetypeLabel {
    pub kind: SgArchetype,
    pub confidence: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SgFitModel {
    PowerLaw = 0,
    StretchedPowerLaw,
    Exponential,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgFitResult {
    pub model: SgFitModel,
    pub scale: f64,
    pub exponent: f64,
    pub r_squared: f64,
    pub n_points: usize,
    pub flat: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SgLayoutParams {
    pub repulsion: f64,
    pub iterations: usize,
    pub seed: u64,
    pub width: f64,
    pub height: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(SgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        let mut root = &e;
        while let Error::Stage { source, .. } = root {
            root = source;
        }
        let status = match root {
            Error::Io(_) => SgStatus::Io,
            Error::Format(_) => SgStatus::Format,
            Error::UnknownVertex(_) => SgStatus::UnknownVertex,
            Error::Undefined(_) => SgStatus::UndefinedMetric,
            Error::Contract(_) => SgStatus::Contract,
            Error::SingularFit(_) => SgStatus::SingularFit,
            Error::Config(_) => SgStatus::Config,
            Error::Stage { .. } => unreachable!("unwrapped above"),
        };
        Failure(status, msg)
    }
}

fn null(name: &str) -> Failure {
    Failure(SgStatus::NullPointer, format!("`{name}` is NULL"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SgStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside sociogram".into());
            SgStatus::Panic
        }
    }
}

fn undefined_code(u: Undefined) -> SgUndefined {
    match u {
        Undefined::EmptyGraph => SgUndefined::EmptyGraph,
        Undefined::TooFewVertices => SgUndefined::TooFewVertices,
        Undefined::NoEdges => SgUndefined::NoEdges,
        Undefined::NoReachablePairs => SgUndefined::NoReachablePairs,
        Undefined::ZeroDenominator => SgUndefined::ZeroDenominator,
        Undefined::ZeroNumerator => SgUndefined::ZeroNumerator,
        Undefined::InfiniteAsymmetry => SgUndefined::InfiniteAsymmetry,
        Undefined::EmptyCorpus => SgUndefined::EmptyCorpus,
        Undefined::ZeroVariance => SgUndefined::ZeroVariance,
        Undefined::TooFewPoints => SgUndefined::TooFewPoints,
        Undefined::StageSkipped => SgUndefined::StageSkipped,
    }
}

fn metric<T: Copy + Into<f64>>(m: Metric<T>) -> SgMetric {
    match m {
        Metric::Value(v) => SgMetric {
            value: v.into(),
            reason: SgUndefined::Defined,
        },
        Metric::Undefined(u) => SgMetric {
            value: f64::NAN,
            reason: undefined_code(u),
        },
    }
}

unsafe fn graph_ref<'a>(g: *const SgGraph) -> Result<&'a Sociogram, Failure> {
    g.as_ref().map(|g| &g.inner).ok_or_else(|| null("graph"))
}

/// Caller array of at least `n` elements.
unsafe fn out_slice<'a, T>(out: *mut T, len: usize, n: usize) -> Result<&'a mut [T], Failure> {
    if out.is_null() && n > 0 {
        return Err(null("out"));
    }
    if len < n {
        return Err(Failure(
            SgStatus::BufferTooSmall,
            format!("buffer holds {len} values, {n} needed"),
        ));
    }
    if n == 0 {
        return Ok(&mut []);
    }
    Ok(std::slice::from_raw_parts_mut(out, n))
}

fn dedup(d: SgDedup) -> Dedup {
    match d {
        SgDedup::KeepAll => Dedup::KeepAll,
        SgDedup::CollapsePairs => Dedup::CollapsePairs,
    }
}

unsafe fn store_graph(out: *mut *mut SgGraph, g: Sociogram) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(SgGraph { inner: g }));
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copy of the calling thread's last error message, or NULL when there is
/// none. Release it with `sg_string_free`.
#[no_mangle]
pub extern "C" fn sg_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |s| s.clone().into_raw())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn sg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Reads an edge CSV from `path`. Rows that fail to parse are skipped.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_graph_from_csv_path(
    path: *const c_char,
    dedup_mode: SgDedup,
    out: *mut *mut SgGraph,
) -> SgStatus {
    guard(|| {
        if path.is_null() {
            return Err(null("path"));
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|e| Failure(SgStatus::InvalidUtf8, format!("path: {e}")))?;
        let file = std::fs::File::open(path).map_err(|e| Failure::from(Error::Io(e)))?;
        let doc = parse_edge_csv(file)?;
        store_graph(out, build_graph(&doc, dedup(dedup_mode)))
    })
}

/// Parses an edge CSV held in memory.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_graph_from_csv_buffer(
    data: *const u8,
    len: usize,
    dedup_mode: SgDedup,
    out: *mut *mut SgGraph,
) -> SgStatus {
    guard(|| {
        if data.is_null() && len > 0 {
            return Err(null("data"));
        }
        let bytes: &[u8] = if len == 0 {
            &[]
        } else {
            std::slice::from_raw_parts(data, len)
        };
        let doc = parse_edge_csv(bytes)?;
        store_graph(out, build_graph(&doc, dedup(dedup_mode)))
    })
}

/// Seeded synthetic graph of the given archetype (`size` >= 5).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_graph_generate(
    kind: SgArchetype,
    size: usize,
    seed: u64,
    out: *mut *mut SgGraph,
) -> SgStatus {
    guard(|| {
        let kind = match kind {
            SgArchetype::Unified => Archetype::Unified,
            SgArchetype::InHub => Archetype::InHub,
            SgArchetype::OutHub => Archetype::OutHub,
            SgArchetype::MultiTopic => Archetype::MultiTopic,
            SgArchetype::Polarized => Archetype::Polarized,
            SgArchetype::Fragmented => Archetype::Fragmented,
        };
        store_graph(out, generate_archetype(kind, size, seed)?)
    })
}

/// # Safety
/// `g` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sg_graph_free(g: *mut SgGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be NULL or a live handle. Returns 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn sg_graph_vertex_count(g: *const SgGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.vertex_count())
}

/// Edges read, duplicates included.
///
/// # Safety
/// `g` must be NULL or a live handle. Returns 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn sg_graph_edge_count(g: *const SgGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.total_edge_count())
}

/// Distinct ordered (source, target) pairs.
///
/// # Safety
/// `g` must be NULL or a live handle. Returns 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn sg_graph_unique_edge_count(g: *const SgGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.unique_edge_count())
}

/// Copies the id of vertex `v` into `buf` with a trailing NUL. `needed`
/// (if not NULL) receives the required size including the NUL, also when
/// the buffer is too small.
///
/// # Safety
/// `g` must be a live handle; `buf` must hold `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn sg_graph_vertex_name(
    g: *const SgGraph,
    v: usize,
    buf: *mut c_char,
    cap: usize,
    needed: *mut usize,
) -> SgStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if v >= g.vertex_count() {
            return Err(Failure(
                SgStatus::UnknownVertex,
                format!("vertex index {v} out of range"),
            ));
        }
        let name = g.vertex_name(v).as_bytes();
        if let Some(n) = needed.as_mut() {
            *n = name.len() + 1;
        }
        let dst = out_slice(buf.cast::<u8>(), cap, name.len() + 1)?;
        dst[..name.len()].copy_from_slice(name);
        dst[name.len()] = 0;
        Ok(())
    })
}

/// Clustering, density, geodesics and vertex asymmetry in one call.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_graph_stats(g: *const SgGraph, out: *mut SgGraphStats) -> SgStatus {
    guard(|| {
        let s = graph_stats(graph_ref(g)?)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = SgGraphStats {
            c_global: metric(s.c_global),
            rho: metric(s.rho),
            diameter: metric(s.diameter),
            d_avg: metric(s.d_avg),
            max_edges: s.max_edges,
            r_vertex: metric(s.r_vertex),
            n_in: metric(s.n_in.map(|x| x as f64)),
            n_out: metric(s.n_out.map(|x| x as f64)),
        };
        Ok(())
    })
}

/// Raw betweenness per vertex; the undirected view unless `directed`.
///
/// # Safety
/// `g` must be a live handle; `out` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sg_betweenness(
    g: *const SgGraph,
    directed: bool,
    out: *mut f64,
    len: usize,
) -> SgStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let dst = out_slice(out, len, g.vertex_count())?;
        let mode = if directed {
            Directedness::Directed
        } else {
            Directedness::Undirected
        };
        dst.copy_from_slice(&betweenness(g, mode));
        Ok(())
    })
}

/// PageRank with the given damping and default tolerance.
///
/// # Safety
/// `g` must be a live handle; `out` must hold `len` doubles; `converged`
/// may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sg_pagerank(
    g: *const SgGraph,
    damping: f64,
    out: *mut f64,
    len: usize,
    converged: *mut bool,
) -> SgStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let dst = out_slice(out, len, g.vertex_count())?;
        let r = pagerank(
            g,
            &PageRankParams {
                damping,
                ..Default::default()
            },
        )?;
        dst.copy_from_slice(&r.scores);
        if let Some(c) = converged.as_mut() {
            *c = r.converged;
        }
        Ok(())
    })
}

/// Max-normalized eigenvector centrality of the undirected view.
///
/// # Safety
/// `g` must be a live handle; `out` must hold `len` doubles; `converged`
/// may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sg_eigenvector(
    g: *const SgGraph,
    out: *mut f64,
    len: usize,
    converged: *mut bool,
) -> SgStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let dst = out_slice(out, len, g.vertex_count())?;
        let r = eigenvector_centrality(g, &EigenParams::default())?;
        dst.copy_from_slice(&r.scores);
        if let Some(c) = converged.as_mut() {
            *c = r.converged;
        }
        Ok(())
    })
}

/// Greedy modularity grouping: block index per vertex (block 0 is the
/// largest) and the partition's modularity.
///
/// # Safety
/// `g` must be a live handle; `labels` must hold `len` values;
/// `modularity` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn sg_cnm_labels(
    g: *const SgGraph,
    labels: *mut usize,
    len: usize,
    modularity: *mut SgMetric,
) -> SgStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let dst = out_slice(labels, len, g.vertex_count())?;
        let grouping = cnm_partition(g);
        dst.copy_from_slice(&grouping.block_of(g.vertex_count()));
        if let Some(q) = modularity.as_mut() {
            *q = metric(grouping.modularity);
        }
        Ok(())
    })
}

/// Archetype of the whole graph under the default thresholds.
///
/// # Safety
/// `g` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_classify(g: *const SgGraph, out: *mut SgArchetypeLabel) -> SgStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if g.is_empty() {
            return Err(Error::Undefined(Undefined::EmptyGraph).into());
        }
        let label = classify_archetype(&features(g), &ClassifierConfig::default());
        let kind = match label.kind {
            Archetype::Unified => SgArchetype::Unified,
            Archetype::InHub => SgArchetype::InHub,
            Archetype::OutHub => SgArchetype::OutHub,
            Archetype::MultiTopic => SgArchetype::MultiTopic,
            Archetype::Polarized => SgArchetype::Polarized,
            Archetype::Fragmented => SgArchetype::Fragmented,
        };
        *out.as_mut().ok_or_else(|| null("out"))? = SgArchetypeLabel {
            kind,
            confidence: label.confidence,
        };
        Ok(())
    })
}

/// Log-space least-squares fit of `n` points.
///
/// # Safety
/// `xs` and `ys` must hold `n` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sg_fit(
    model: SgFitModel,
    xs: *const f64,
    ys: *const f64,
    n: usize,
    out: *mut SgFitResult,
) -> SgStatus {
    guard(|| {
        if n > 0 && (xs.is_null() || ys.is_null()) {
            return Err(null("xs/ys"));
        }
        let points: Vec<(f64, f64)> = if n == 0 {
            Vec::new()
        } else {
            let (xs, ys) = (
                std::slice::from_raw_parts(xs, n),
                std::slice::from_raw_parts(ys, n),
            );
            xs.iter().copied().zip(ys.iter().copied()).collect()
        };
        let m = match model {
            SgFitModel::PowerLaw => FitModel::PowerLaw,
            SgFitModel::StretchedPowerLaw => FitModel::StretchedPowerLaw,
            SgFitModel::Exponential => FitModel::Exponential,
        };
        let r = fit(m, &points)?;
        *out.as_mut().ok_or_else(|| null("out"))? = SgFitResult {
            model,
            scale: r.scale,
            exponent: r.exponent,
            r_squared: r.r_squared,
            n_points: r.n_points,
            flat: r.flat,
        };
        Ok(())
    })
}

/// `log10(n_in / n_out)`.
#[no_mangle]
pub extern "C" fn sg_asymmetry_strength(n_in: u64, n_out: u64) -> SgMetric {
    metric(asymmetry_strength(n_in, n_out))
}

/// `log10(numerator / denominator)` of two lexicon score fractions.
#[no_mangle]
pub extern "C" fn sg_sentiment_ratio(numerator: f64, denominator: f64) -> SgMetric {
    metric(log10_ratio(
        numerator,
        denominator,
        Undefined::ZeroDenominator,
    ))
}

/// Default layout parameters.
#[no_mangle]
pub extern "C" fn sg_layout_params_default() -> SgLayoutParams {
    let p = LayoutParams::default();
    SgLayoutParams {
        repulsion: p.repulsion,
        iterations: p.iterations,
        seed: p.seed,
        width: p.width,
        height: p.height,
    }
}

/// Seeded force-directed layout; coordinates go to `xs` and `ys`.
///
/// # Safety
/// `g` must be a live handle; `params` readable; `xs`/`ys` must hold `len`
/// doubles each.
#[no_mangle]
pub unsafe extern "C" fn sg_layout(
    g: *const SgGraph,
    params: *const SgLayoutParams,
    xs: *mut f64,
    ys: *mut f64,
    len: usize,
) -> SgStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let p = params.as_ref().ok_or_else(|| null("params"))?;
        let n = g.vertex_count();
        let xs = out_slice(xs, len, n)?;
        let ys = out_slice(ys, len, n)?;
        let params = LayoutParams {
            repulsion: p.repulsion,
            iterations: p.iterations,
            seed: p.seed,
            width: p.width,
            height: p.height,
        };
        let r = fr_layout(g, &params)?;
        for (v, (x, y)) in r.positions.into_iter().enumerate() {
            xs[v] = x;
            ys[v] = y;
        }
        Ok(())
    })
}
