//! C ABI for `lstree`.
//!
//! Handles are opaque and owned by the caller until passed to the matching
//! `_free`. Every fallible call returns an [`LstStatus`]; on failure the
//! message is available from [`lst_last_error_message`] on the same thread.
//! Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lstree::io::{parse_graph, Format};
use lstree::{build_low_stretch_tree, Error, Graph, Mode, Params, Schedule, SpanningTree};

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LstStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Precondition = 3,
    Disconnected = 4,
    Parse = 5,
    Params = 6,
    Domain = 7,
    Io = 8,
    Internal = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LstFormat {
    Edges = 0,
    Dimacs = 1,
}

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LstMode {
    Demo = 0,
    Paper = 1,
}

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum LstSchedule {
    Basic = 0,
    Iterated = 1,
    Fixed = 2,
}

/// Build parameters. Enum-valued fields hold `LstMode` / `LstSchedule`
/// values; anything else is rejected.
#[repr(C)]
#[derive(Copy, Clone, Debug)]
pub struct LstParams {
    pub c: f64,
    pub eps: f64,
    pub base_radius: f64,
    pub contraction: f64,
    pub seed: u64,
    pub mode: u32,
    pub schedule: u32,
    /// Depth of the iterated schedule.
    pub t: u32,
    pub shuffle: bool,
    pub random_root: bool,
}

/// Opaque graph handle.
pub struct LstGraph {
    inner: Graph,
}

/// Opaque spanning-tree handle.
pub struct LstTree {
    inner: SpanningTree,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> LstStatus {
    match e {
        Error::Precondition(_) => LstStatus::Precondition,
        Error::Disconnected { .. } => LstStatus::Disconnected,
        Error::Internal(_) => LstStatus::Internal,
        Error::Parse { .. } => LstStatus::Parse,
        Error::Domain(_) => LstStatus::Domain,
        Error::Params(_) => LstStatus::Params,
        Error::Io(_) => LstStatus::Io,
    }
}

struct Fail(LstStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null() -> Fail {
    Fail(LstStatus::NullPointer, "null pointer argument".into())
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(LstStatus::InvalidArgument, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> LstStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LstStatus::Ok,
        Ok(Err(Fail(s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("panic inside lstree".into());
            LstStatus::Panic
        }
    }
}

unsafe fn as_ref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

unsafe fn as_mut<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(null)
}

fn to_params(p: &LstParams) -> Result<Params, Fail> {
    let mode = match p.mode {
        0 => Mode::Demo,
        1 => Mode::Paper,
        m => return Err(invalid(format!("unknown mode {m}"))),
    };
    let schedule = match p.schedule {
        0 => Schedule::Basic,
        1 => Schedule::Iterated { t: p.t },
        2 => Schedule::Fixed { eps: p.eps },
        s => return Err(invalid(format!("unknown schedule {s}"))),
    };
    Ok(Params {
        c: p.c,
        schedule,
        base_radius: p.base_radius,
        seed: p.seed,
        mode,
        contraction: p.contraction,
        per_component: false,
        shuffle: p.shuffle,
        random_root: p.random_root,
    })
}

/// Message of the last failed call on this thread, or NULL. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn lst_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lst_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// An edgeless graph on `n` vertices.
///
/// # Safety
/// `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn lst_graph_new(n: usize, out: *mut *mut LstGraph) -> LstStatus {
    guard(|| {
        let out = as_mut(out)?;
        *out = Box::into_raw(Box::new(LstGraph { inner: Graph::empty(n) }));
        Ok(())
    })
}

/// Adds edge `{u, v}` of length `len`.
///
/// # Safety
/// `g` must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn lst_graph_add_edge(g: *mut LstGraph, u: usize, v: usize, len: f64) -> LstStatus {
    guard(|| {
        let g = as_mut(g)?;
        g.inner.add_edge(u, v, len)?;
        Ok(())
    })
}

/// Parses a NUL-terminated graph text. Vertex labels are remapped to
/// `0..n` in ascending order (DIMACS ids become `id - 1`).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lst_graph_parse(text: *const c_char, format: u32, out: *mut *mut LstGraph) -> LstStatus {
    guard(|| {
        let out = as_mut(out)?;
        if text.is_null() {
            return Err(null());
        }
        let text = CStr::from_ptr(text).to_str().map_err(|_| invalid("input is not UTF-8"))?;
        let format = match format {
            0 => Format::Edges,
            1 => Format::Dimacs,
            f => return Err(invalid(format!("unknown format {f}"))),
        };
        let pg = parse_graph(text, format)?;
        *out = Box::into_raw(Box::new(LstGraph { inner: pg.graph }));
        Ok(())
    })
}

/// # Safety
/// `g` must be NULL or a live handle; it is dead afterwards.
#[no_mangle]
pub unsafe extern "C" fn lst_graph_free(g: *mut LstGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be NULL or a live handle. NULL gives 0.
#[no_mangle]
pub unsafe extern "C" fn lst_graph_vertex_count(g: *const LstGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.vertex_count())
}

/// # Safety
/// `g` must be NULL or a live handle. NULL gives 0.
#[no_mangle]
pub unsafe extern "C" fn lst_graph_edge_count(g: *const LstGraph) -> usize {
    g.as_ref().map_or(0, |g| g.inner.edge_count())
}

/// Demo parameters: c = 2, fixed eps = 1/2, base radius 1, seed 0.
///
/// # Safety
/// `out` must be valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lst_params_default(out: *mut LstParams) -> LstStatus {
    guard(|| {
        let out = as_mut(out)?;
        let p = Params::default();
        *out = LstParams {
            c: p.c,
            eps: match p.schedule {
                Schedule::Fixed { eps } => eps,
                _ => 0.5,
            },
            base_radius: p.base_radius,
            contraction: p.contraction,
            seed: p.seed,
            mode: LstMode::Demo as u32,
            schedule: LstSchedule::Fixed as u32,
            t: 1,
            shuffle: p.shuffle,
            random_root: p.random_root,
        };
        Ok(())
    })
}

/// Builds a low-stretch spanning tree of a connected graph. A negative
/// `root` selects the default root.
///
/// # Safety
/// `g` and `params` must be live, `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lst_build_tree(
    g: *const LstGraph,
    params: *const LstParams,
    root: i64,
    out: *mut *mut LstTree,
) -> LstStatus {
    guard(|| {
        let g = as_ref(g)?;
        let p = to_params(as_ref(params)?)?;
        let out = as_mut(out)?;
        let root = (root >= 0).then_some(root as usize);
        let (t, _) = build_low_stretch_tree(&g.inner, root, &p)?;
        *out = Box::into_raw(Box::new(LstTree { inner: t }));
        Ok(())
    })
}

/// # Safety
/// `t` must be NULL or a live handle; it is dead afterwards.
#[no_mangle]
pub unsafe extern "C" fn lst_tree_free(t: *mut LstTree) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// # Safety
/// `t` must be NULL or a live handle. NULL gives 0.
#[no_mangle]
pub unsafe extern "C" fn lst_tree_edge_count(t: *const LstTree) -> usize {
    t.as_ref().map_or(0, |t| t.inner.edge_count())
}

/// # Safety
/// `t` must be live and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lst_tree_root(t: *const LstTree, out: *mut usize) -> LstStatus {
    guard(|| {
        *as_mut(out)? = as_ref(t)?.inner.root();
        Ok(())
    })
}

/// Copies the tree edges, `u < v` in ascending order, into three arrays of
/// capacity `cap`. Fails without writing if `cap` is too small.
///
/// # Safety
/// Each array must be valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn lst_tree_edges(
    t: *const LstTree,
    us: *mut usize,
    vs: *mut usize,
    lens: *mut f64,
    cap: usize,
) -> LstStatus {
    guard(|| {
        let t = as_ref(t)?;
        if us.is_null() || vs.is_null() || lens.is_null() {
            return Err(null());
        }
        let edges = t.inner.edges();
        if edges.len() > cap {
            return Err(invalid(format!("capacity {cap} below edge count {}", edges.len())));
        }
        for (i, (u, v, w)) in edges.into_iter().enumerate() {
            *us.add(i) = u;
            *vs.add(i) = v;
            *lens.add(i) = w;
        }
        Ok(())
    })
}

/// Tree distance between `u` and `v`.
///
/// # Safety
/// `t` must be live and `out` valid for a write.
#[no_mangle]
pub unsafe extern "C" fn lst_tree_distance(t: *const LstTree, u: usize, v: usize, out: *mut f64) -> LstStatus {
    guard(|| {
        let t = as_ref(t)?;
        let out = as_mut(out)?;
        *out = t.inner.distance(u, v)?;
        Ok(())
    })
}

/// Average and maximum stretch of `t` over the edges of `g`.
///
/// # Safety
/// `g`, `t` must be live; `avg`, `max` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn lst_stretch(
    g: *const LstGraph,
    t: *const LstTree,
    avg: *mut f64,
    max: *mut f64,
) -> LstStatus {
    guard(|| {
        let (g, t) = (as_ref(g)?, as_ref(t)?);
        let (avg, max) = (as_mut(avg)?, as_mut(max)?);
        let r = lstree::harness::stretch_report(&g.inner, &t.inner)?;
        *avg = r.avg_stretch;
        *max = r.max_stretch;
        Ok(())
    })
}
