//! C ABI for `tropjac`.
//!
//! Graphs and divisors are opaque handles created from JSON and released
//! with their `_free` function. Every fallible call returns a [`TjStatus`];
//! on failure [`tj_last_error`] describes what went wrong on the calling
//! thread. Strings handed out by the library are released with
//! [`tj_string_free`].

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::{json, Value};
use tropjac::cli::CliError;
use tropjac::divisor::{self, Multidegree, PLDivisor, TargetKind};
use tropjac::enumerate;
use tropjac::graph::TropicalGraph;
use tropjac::rubber;

/// Status codes; the nonzero values match the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TjStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Invariant = 3,
    NotATree = 4,
    DegenerateDivisor = 5,
    OutOfSupportedRange = 6,
    Panic = 7,
}

/// Opaque validated graph.
pub struct TjGraph {
    inner: TropicalGraph,
}

/// Opaque PL divisor with its minimal monoid.
pub struct TjDivisor {
    inner: PLDivisor,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(code: i32) -> TjStatus {
    match code {
        2 => TjStatus::Parse,
        4 => TjStatus::NotATree,
        5 => TjStatus::DegenerateDivisor,
        6 => TjStatus::OutOfSupportedRange,
        _ => TjStatus::Invariant,
    }
}

struct Failure(TjStatus, String);

impl<E: Into<CliError>> From<E> for Failure {
    fn from(e: E) -> Self {
        let e: CliError = e.into();
        Failure(status_of(e.code), e.message)
    }
}

fn null() -> Failure {
    Failure(TjStatus::NullPointer, "null pointer argument".into())
}

fn parse_failure(message: impl Into<String>) -> Failure {
    Failure(TjStatus::Parse, message.into())
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> TjStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            TjStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            TjStatus::Panic
        }
    }
}

/// # Safety
/// `s` is null or a valid nul-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| parse_failure(format!("invalid UTF-8: {e}")))
}

/// # Safety
/// `out` is null or valid for writes.
unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    let c = CString::new(text).map_err(|_| parse_failure("output contains a nul byte"))?;
    *out = c.into_raw();
    Ok(())
}

/// # Safety
/// `p` is null or a pointer produced by this library and not yet freed.
unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn target_for(graph: &TropicalGraph, spec: &str) -> Result<Multidegree, Failure> {
    Ok(match spec {
        "zero" => divisor::target_multidegree(graph, TargetKind::Zero)?,
        "canonical" => divisor::target_multidegree(graph, TargetKind::Canonical)?,
        text => {
            let map: BTreeMap<String, i64> =
                serde_json::from_str(text).map_err(|e| parse_failure(format!("target: {e}")))?;
            Multidegree::from_map(graph, &map)?
        }
    })
}

/// Message for the most recent failure on this thread, or null after a
/// success. Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn tj_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn tj_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tj_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates a graph description.
///
/// # Safety
/// `json` is a nul-terminated string; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tj_graph_from_json(json: *const c_char, out: *mut *mut TjGraph) -> TjStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let inner = TropicalGraph::from_json(read_str(json)?)?;
        *out = Box::into_raw(Box::new(TjGraph { inner }));
        Ok(())
    })
}

/// # Safety
/// `graph` is null or a handle from [`tj_graph_from_json`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tj_graph_free(graph: *mut TjGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Writes the number of vertices, edges, legs and the genus.
///
/// # Safety
/// `graph` is a live handle; each out pointer is null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tj_graph_stats(
    graph: *const TjGraph,
    vertices: *mut usize,
    edges: *mut usize,
    legs: *mut usize,
    genus: *mut u32,
) -> TjStatus {
    guard(|| {
        let g = &borrow(graph)?.inner;
        if let Some(v) = vertices.as_mut() {
            *v = g.num_vertices();
        }
        if let Some(e) = edges.as_mut() {
            *e = g.num_edges();
        }
        if let Some(l) = legs.as_mut() {
            *l = g.legs().len();
        }
        if let Some(x) = genus.as_mut() {
            *x = g.genus();
        }
        Ok(())
    })
}

/// Canonical JSON of the graph.
///
/// # Safety
/// `graph` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tj_graph_to_json(graph: *const TjGraph, out: *mut *mut c_char) -> TjStatus {
    guard(|| write_string(out, borrow(graph)?.inner.to_json()))
}

/// Builds a divisor from `{"edge-id": slope, …}`.
///
/// # Safety
/// `graph` is a live handle; `slopes_json` is nul-terminated; `out` is valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn tj_divisor_new(
    graph: *const TjGraph,
    slopes_json: *const c_char,
    out: *mut *mut TjDivisor,
) -> TjStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let g = &borrow(graph)?.inner;
        let slopes: BTreeMap<String, i64> =
            serde_json::from_str(read_str(slopes_json)?).map_err(|e| parse_failure(format!("slopes: {e}")))?;
        let inner = PLDivisor::new(g, &slopes)?;
        *out = Box::into_raw(Box::new(TjDivisor { inner }));
        Ok(())
    })
}

/// The tree twist for `target` (`"zero"`, `"canonical"`, or a JSON map from
/// vertex ids to degrees).
///
/// # Safety
/// `graph` is a live handle; `target` is nul-terminated; `out` is valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn tj_tree_twist(
    graph: *const TjGraph,
    target: *const c_char,
    out: *mut *mut TjDivisor,
) -> TjStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let g = &borrow(graph)?.inner;
        let t = target_for(g, read_str(target)?)?;
        let inner = divisor::tree_twist(g, &t)?;
        *out = Box::into_raw(Box::new(TjDivisor { inner }));
        Ok(())
    })
}

/// # Safety
/// `d` is null or a divisor handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tj_divisor_free(d: *mut TjDivisor) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Graph, slopes, minimal monoid, values and diagnostics as JSON.
///
/// # Safety
/// `d` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tj_divisor_to_json(d: *const TjDivisor, out: *mut *mut c_char) -> TjStatus {
    guard(|| {
        let record = serde_json::to_value(borrow(d)?.inner.to_record()).expect("records serialize");
        write_string(out, pretty(&record))
    })
}

/// Writes the degree of vertex `index` (graph order).
///
/// # Safety
/// `d` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tj_divisor_degree(d: *const TjDivisor, index: usize, out: *mut i64) -> TjStatus {
    guard(|| {
        let d = &borrow(d)?.inner;
        if out.is_null() {
            return Err(null());
        }
        if index >= d.graph().num_vertices() {
            return Err(Failure(TjStatus::Invariant, format!("vertex index {index} out of range")));
        }
        *out = d.multidegree().get(index);
        Ok(())
    })
}

/// Whether the vertex values are totally ordered in the base monoid.
///
/// # Safety
/// `d` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tj_divisor_is_aligned(d: *const TjDivisor, out: *mut bool) -> TjStatus {
    guard(|| {
        let d = &borrow(d)?.inner;
        if out.is_null() {
            return Err(null());
        }
        *out = rubber::is_aligned(d)?;
        Ok(())
    })
}

/// All slope assignments with the target multidegree, as a JSON array.
///
/// # Safety
/// `graph` is a live handle; `target` is nul-terminated; `out` is valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn tj_enumerate_json(
    graph: *const TjGraph,
    target: *const c_char,
    out: *mut *mut c_char,
) -> TjStatus {
    guard(|| {
        let g = &borrow(graph)?.inner;
        let t = target_for(g, read_str(target)?)?;
        let found = enumerate::enumerate_slopes(g, &t)?;
        write_string(out, pretty(&serde_json::to_value(found).expect("assignments serialize")))
    })
}

/// Cells of the base-cone subdivision with rubber data and ranks for each
/// maximal cell.
///
/// # Safety
/// `d` is a live handle; `out` is valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tj_rubber_json(d: *const TjDivisor, out: *mut *mut c_char) -> TjStatus {
    guard(|| {
        let d = &borrow(d)?.inner;
        let g = d.graph();
        let fan = rubber::rub_subdivision(d)?;
        let mut cells = Vec::new();
        for (k, c) in fan.cells.iter().enumerate().filter(|(_, c)| c.is_maximal()) {
            let rd = rubber::subdivide_curve(d, c)?;
            let ranks = rubber::obstruction_ranks(&rd, g.genus() as i64, g.legs().len() as i64);
            cells.push(json!({
                "cell": k,
                "rubber": serde_json::to_value(rd.to_record(g)).expect("records serialize"),
                "ranks": serde_json::to_value(ranks).expect("ranks serialize"),
            }));
        }
        let report = json!({
            "aligned": rubber::is_aligned(d)?,
            "fan": serde_json::to_value(fan.to_record(g)).expect("records serialize"),
            "cells": cells,
        });
        write_string(out, pretty(&report))
    })
}
