use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::Path;
use std::process::Command;
use std::ptr;

use tropjac_ffi::*;

const THETA: &str = r#"{
  "vertices": [{"id": "v", "genus": 0}, {"id": "w", "genus": 0}],
  "edges": [{"id": "e1", "ends": ["v", "w"]}, {"id": "e2", "ends": ["v", "w"]}],
  "legs": [{"id": "p", "vertex": "v", "weight": 3}, {"id": "q", "vertex": "w", "weight": -3}]
}"#;

const TREE: &str = r#"{
  "vertices": [{"id": "a", "genus": 1}, {"id": "b", "genus": 1}],
  "edges": [{"id": "e", "ends": ["a", "b"]}],
  "legs": [{"id": "x", "vertex": "a", "weight": 5}, {"id": "y", "vertex": "b", "weight": -5}]
}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    tj_string_free(s);
    out
}

unsafe fn graph(json: &str) -> *mut TjGraph {
    let mut g = ptr::null_mut();
    assert_eq!(tj_graph_from_json(c(json).as_ptr(), &mut g), TjStatus::Ok);
    g
}

#[test]
fn graph_round_trip() {
    unsafe {
        let g = graph(THETA);
        let (mut nv, mut ne, mut nl, mut genus) = (0usize, 0usize, 0usize, 0u32);
        assert_eq!(tj_graph_stats(g, &mut nv, &mut ne, &mut nl, &mut genus), TjStatus::Ok);
        assert_eq!((nv, ne, nl, genus), (2, 2, 2, 1));
        let mut s = ptr::null_mut();
        assert_eq!(tj_graph_to_json(g, &mut s), TjStatus::Ok);
        let text = take(s);
        let g2 = graph(&text);
        let mut s2 = ptr::null_mut();
        assert_eq!(tj_graph_to_json(g2, &mut s2), TjStatus::Ok);
        assert_eq!(take(s2), text);
        tj_graph_free(g);
        tj_graph_free(g2);
    }
}

#[test]
fn errors_carry_status_and_message() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(tj_graph_from_json(c("").as_ptr(), &mut g), TjStatus::Parse);
        assert!(g.is_null());
        assert!(!tj_last_error().is_null());
        let dangling = r#"{"vertices":[{"id":"v","genus":0}],"edges":[{"id":"e","ends":["v","z"]}],"legs":[]}"#;
        assert_eq!(tj_graph_from_json(c(dangling).as_ptr(), &mut g), TjStatus::Invariant);
        let msg = CStr::from_ptr(tj_last_error()).to_str().unwrap();
        assert!(msg.contains('z'), "{msg}");
        assert_eq!(tj_graph_from_json(ptr::null(), &mut g), TjStatus::NullPointer);

        let theta = graph(THETA);
        let mut d = ptr::null_mut();
        assert_eq!(tj_tree_twist(theta, c("zero").as_ptr(), &mut d), TjStatus::NotATree);
        assert!(d.is_null());
        tj_graph_free(theta);
        // A success clears the message.
        tj_graph_free(graph(THETA));
        assert!(tj_last_error().is_null());
    }
}

#[test]
fn divisor_queries() {
    unsafe {
        let g = graph(THETA);
        let mut d = ptr::null_mut();
        assert_eq!(tj_divisor_new(g, c(r#"{"e1":-1,"e2":-2}"#).as_ptr(), &mut d), TjStatus::Ok);
        let (mut dv, mut dw) = (1i64, 1i64);
        assert_eq!(tj_divisor_degree(d, 0, &mut dv), TjStatus::Ok);
        assert_eq!(tj_divisor_degree(d, 1, &mut dw), TjStatus::Ok);
        assert_eq!((dv, dw), (0, 0));
        assert_eq!(tj_divisor_degree(d, 2, &mut dv), TjStatus::Invariant);
        let mut aligned = false;
        assert_eq!(tj_divisor_is_aligned(d, &mut aligned), TjStatus::Ok);
        assert!(aligned);

        let mut s = ptr::null_mut();
        assert_eq!(tj_divisor_to_json(d, &mut s), TjStatus::Ok);
        let record: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(record["derived"]["sharp"], true);

        assert_eq!(tj_rubber_json(d, &mut s), TjStatus::Ok);
        let rubber: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(rubber["fan"]["maximal_cells"], 1);
        assert_eq!(rubber["cells"][0]["ranks"]["primary_obstruction_rank"], 2);
        tj_divisor_free(d);

        let mut bad = ptr::null_mut();
        assert_eq!(tj_divisor_new(g, c(r#"{"e1":0,"e2":-3}"#).as_ptr(), &mut bad), TjStatus::Ok);
        assert_eq!(tj_rubber_json(bad, &mut s), TjStatus::DegenerateDivisor);
        tj_divisor_free(bad);
        tj_graph_free(g);
    }
}

#[test]
fn enumeration_and_twist() {
    unsafe {
        let g = graph(THETA);
        let mut s = ptr::null_mut();
        assert_eq!(tj_enumerate_json(g, c("zero").as_ptr(), &mut s), TjStatus::Ok);
        let list: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        let slopes: Vec<&serde_json::Value> = list.as_array().unwrap().iter().map(|a| &a["slopes"]).collect();
        assert_eq!(slopes.len(), 4);
        assert_eq!(slopes[0], &serde_json::json!([-3, 0]));
        tj_graph_free(g);

        let t = graph(TREE);
        let mut d = ptr::null_mut();
        assert_eq!(tj_tree_twist(t, c("zero").as_ptr(), &mut d), TjStatus::Ok);
        let mut deg = 1;
        assert_eq!(tj_divisor_degree(d, 0, &mut deg), TjStatus::Ok);
        assert_eq!(deg, 0);
        tj_divisor_free(d);
        tj_graph_free(t);
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(tj_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_is_valid_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/tropjac.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in ["tj_graph_from_json", "tj_rubber_json", "tj_last_error", "TJ_STATUS_DEGENERATE_DIVISOR"] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-x", "c", "-std=c99"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler; skipping syntax check");
        return;
    };
    assert!(status.success());
}
