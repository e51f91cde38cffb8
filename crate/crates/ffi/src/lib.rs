//! C interface to shadowlab.
//!
//! Curves and voxel sets cross the boundary as opaque handles. Every call
//! returns a [`ShadowlabStatus`]; on failure the message is kept per thread
//! and can be fetched with [`shadowlab_last_error`]. Strings handed out by
//! the library are owned by the caller and released with
//! [`shadowlab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use shadowlab::arrangement::{classify, shadow_complex, Classification};
use shadowlab::compat::{self, CompatError, ShadowBitmap};
use shadowlab::curve::{parse_curve, PolyChain};
use shadowlab::sphere::{self, SphereError, SphereModel, VoxelSet};
use shadowlab::theorem_lab::{self as lab, Mode, SearchConfig, SearchError};
use shadowlab::{strands, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShadowlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    Budget = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShadowlabClassification {
    Empty = 0,
    Point = 1,
    Path = 2,
    Cycle = 3,
    Tree = 4,
    Other = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShadowlabSearchMode {
    PathShadowCycles = 0,
    ConvexShadowPaths = 1,
    MinVertexPaths = 2,
    BranchCensus = 3,
}

/// Topology of one shadow.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShadowlabTopology {
    pub classification: ShadowlabClassification,
    pub component_count: usize,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub branch_point_count: usize,
    pub has_cycle: bool,
}

/// Opaque simple polygonal curve.
pub struct ShadowlabCurve(PolyChain);

/// Opaque voxel set.
pub struct ShadowlabVoxels(VoxelSet);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(ShadowlabStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Curve(shadowlab::CurveError::Parse { .. })
            | Error::Sphere(SphereError::Parse { .. })
            | Error::Compat(CompatError::Parse { .. }) => ShadowlabStatus::Parse,
            Error::Search(SearchError::BudgetExceeded { .. })
            | Error::Compat(CompatError::BudgetExceeded { .. })
            | Error::Sphere(SphereError::TooLarge { .. }) => ShadowlabStatus::Budget,
            _ => ShadowlabStatus::Validation,
        };
        Failure(status, e.to_string())
    }
}

macro_rules! into_failure {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Error::from(e).into()
            }
        }
    )*};
}
into_failure!(shadowlab::CurveError, strands::StrandError, SearchError, SphereError, CompatError);

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ShadowlabStatus {
    let (status, msg) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => (ShadowlabStatus::Ok, None),
        Ok(Err(Failure(s, m))) => (s, Some(m)),
        Err(_) => (ShadowlabStatus::Panic, Some("internal panic".to_string())),
    };
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = msg.map(|m| CString::new(m.replace('\0', " ")).expect("no interior nul"));
    });
    status
}

fn null() -> Failure {
    Failure(ShadowlabStatus::NullPointer, "null pointer argument".into())
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(ShadowlabStatus::InvalidUtf8, "input is not UTF-8".into()))
}

unsafe fn out<T>(p: *mut T, value: T) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null());
    }
    p.write(value);
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn out_string(p: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(ShadowlabStatus::Validation, "interior nul".into()))?;
    out(p, c.into_raw())
}

fn class(c: Classification) -> ShadowlabClassification {
    match c {
        Classification::Empty => ShadowlabClassification::Empty,
        Classification::Point => ShadowlabClassification::Point,
        Classification::Path => ShadowlabClassification::Path,
        Classification::Cycle => ShadowlabClassification::Cycle,
        Classification::Tree => ShadowlabClassification::Tree,
        Classification::Other => ShadowlabClassification::Other,
    }
}

/// Message of the last failed call on this thread, or NULL. Free it with
/// `shadowlab_string_free`.
#[no_mangle]
pub extern "C" fn shadowlab_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |m| m.clone().into_raw()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn shadowlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses curve-file text.
///
/// # Safety
/// `text` must be a nul-terminated string; `curve` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shadowlab_curve_parse(text: *const c_char, curve: *mut *mut ShadowlabCurve) -> ShadowlabStatus {
    guard(|| {
        let chain = parse_curve(c_str(text)?)?;
        out(curve, Box::into_raw(Box::new(ShadowlabCurve(chain))))
    })
}

/// # Safety
/// `curve` must come from `shadowlab_curve_parse` or be NULL.
#[no_mangle]
pub unsafe extern "C" fn shadowlab_curve_free(curve: *mut ShadowlabCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn shadowlab_curve_dim(curve: *const ShadowlabCurve, dim: *mut usize) -> ShadowlabStatus {
    guard(|| out(dim, handle(curve)?.0.dim()))
}

/// Topology of the x_axis shadow of a spatial curve.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn shadowlab_curve_classify(
    curve: *const ShadowlabCurve,
    axis: usize,
    report: *mut ShadowlabTopology,
) -> ShadowlabStatus {
    guard(|| {
        let cx = shadow_complex(&handle(curve)?.0, axis)?;
        let r = classify(&cx);
        out(
            report,
            ShadowlabTopology {
                classification: class(r.classification),
                component_count: r.component_count,
                vertex_count: r.vertex_count,
                edge_count: r.edge_count,
                branch_point_count: r.branch_point_count,
                has_cycle: r.has_cycle,
            },
        )
    })
}

/// The x_axis-strands of the curve as a JSON array.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn shadowlab_curve_strands_json(
    curve: *const ShadowlabCurve,
    axis: usize,
    json: *mut *mut c_char,
) -> ShadowlabStatus {
    guard(|| {
        let list = strands::strands(&handle(curve)?.0, axis)?;
        out_string(json, serde_json::to_string(&list).expect("strands serialize"))
    })
}

/// Runs a seeded or exhaustive search and returns its JSON report. `n` is
/// the vertex count for `MinVertexPaths` and ignored otherwise.
///
/// # Safety
/// `json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shadowlab_search_json(
    mode: ShadowlabSearchMode,
    grid_max: i64,
    max_length: usize,
    samples: u64,
    seed: u64,
    n: usize,
    json: *mut *mut c_char,
) -> ShadowlabStatus {
    guard(|| {
        let m = match mode {
            ShadowlabSearchMode::PathShadowCycles => Mode::PathShadowCycles,
            ShadowlabSearchMode::ConvexShadowPaths => Mode::ConvexShadowPaths,
            ShadowlabSearchMode::MinVertexPaths => Mode::MinVertexPaths,
            ShadowlabSearchMode::BranchCensus => Mode::BranchCensus,
        };
        let mut cfg = SearchConfig::new(m, grid_max, max_length, samples, seed);
        cfg.budget = lab::budget_from_env();
        let report = match mode {
            ShadowlabSearchMode::PathShadowCycles => lab::search_path_shadow_cycles(&cfg)?,
            ShadowlabSearchMode::ConvexShadowPaths => lab::search_convex_shadow_paths(&cfg)?,
            ShadowlabSearchMode::MinVertexPaths => lab::enumerate_min_vertex_paths(n, &cfg)?,
            ShadowlabSearchMode::BranchCensus => lab::min_branch_point_census(&cfg)?,
        };
        out_string(json, report.to_json())
    })
}

/// Voxelized S_{d+1} over the shipped tree-shadow base cycle.
///
/// # Safety
/// `voxels` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shadowlab_sphere_build(d: usize, resolution: u32, voxels: *mut *mut ShadowlabVoxels) -> ShadowlabStatus {
    guard(|| {
        let model = SphereModel::new(SphereModel::rickard(1).base(), d)?;
        let v = sphere::build_sphere(&model, resolution)?;
        out(voxels, Box::into_raw(Box::new(ShadowlabVoxels(v))))
    })
}

/// Parses voxel-file text.
///
/// # Safety
/// `text` must be a nul-terminated string; `voxels` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shadowlab_voxels_parse(text: *const c_char, voxels: *mut *mut ShadowlabVoxels) -> ShadowlabStatus {
    guard(|| {
        let v = sphere::parse_voxels(c_str(text)?)?;
        out(voxels, Box::into_raw(Box::new(ShadowlabVoxels(v))))
    })
}

/// # Safety
/// `voxels` must come from this library or be NULL.
#[no_mangle]
pub unsafe extern "C" fn shadowlab_voxels_free(voxels: *mut ShadowlabVoxels) {
    if !voxels.is_null() {
        drop(Box::from_raw(voxels));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn shadowlab_voxels_len(voxels: *const ShadowlabVoxels, len: *mut usize) -> ShadowlabStatus {
    guard(|| out(len, handle(voxels)?.0.len()))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn shadowlab_voxels_dim(voxels: *const ShadowlabVoxels, dim: *mut usize) -> ShadowlabStatus {
    guard(|| out(dim, handle(voxels)?.0.dim()))
}

/// New handle holding the x_axis shadow.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn shadowlab_voxels_shadow(
    voxels: *const ShadowlabVoxels,
    axis: usize,
    shadow: *mut *mut ShadowlabVoxels,
) -> ShadowlabStatus {
    guard(|| {
        let s = handle(voxels)?.0.shadow(axis)?;
        out(shadow, Box::into_raw(Box::new(ShadowlabVoxels(s))))
    })
}

/// Writes up to `capacity` Betti numbers (b_0 first) into `betti` and their
/// count into `count`.
///
/// # Safety
/// `betti` must have room for `capacity` values; other pointers valid.
#[no_mangle]
pub unsafe extern "C" fn shadowlab_voxels_betti(
    voxels: *const ShadowlabVoxels,
    betti: *mut usize,
    capacity: usize,
    count: *mut usize,
) -> ShadowlabStatus {
    guard(|| {
        let b = sphere::betti(&handle(voxels)?.0)?;
        if betti.is_null() && capacity > 0 {
            return Err(null());
        }
        if b.len() > capacity {
            return Err(Failure(
                ShadowlabStatus::Validation,
                format!("{} Betti numbers do not fit in {capacity}", b.len()),
            ));
        }
        ptr::copy_nonoverlapping(b.as_ptr(), betti, b.len());
        out(count, b.len())
    })
}

/// Largest voxel set compatible with three bitmap texts, as JSON.
///
/// # Safety
/// Inputs must be nul-terminated strings; `json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn shadowlab_compat_largest_json(
    s1: *const c_char,
    s2: *const c_char,
    s3: *const c_char,
    json: *mut *mut c_char,
) -> ShadowlabStatus {
    guard(|| {
        let [a, b, c] = [c_str(s1)?, c_str(s2)?, c_str(s3)?];
        let r = compat::largest_compatible(
            &ShadowBitmap::parse(a)?,
            &ShadowBitmap::parse(b)?,
            &ShadowBitmap::parse(c)?,
        )?;
        out_string(json, serde_json::to_string(&r).expect("result serializes"))
    })
}
