use std::ffi::{CStr, CString};
use std::ptr;

use firegraph_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    fg_string_free(p);
    s
}

#[test]
fn graph_handle_and_spheres() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(fg_graph_new(c("orthant:d=3").as_ptr(), &mut g), FgStatus::Ok);
        let mut buf = [0u64; 4];
        assert_eq!(fg_graph_sphere_sizes(g, 3, buf.as_mut_ptr(), buf.len()), FgStatus::Ok);
        assert_eq!(buf, [1, 3, 6, 10]);
        assert_eq!(
            fg_graph_sphere_sizes(g, 9, buf.as_mut_ptr(), buf.len()),
            FgStatus::BufferTooSmall
        );
        let mut out = ptr::null_mut();
        assert_eq!(fg_graph_neighbors(g, c("(0,0,0)").as_ptr(), &mut out), FgStatus::Ok);
        assert_eq!(take(out), "(0,0,1);(0,1,0);(1,0,0)");
        fg_graph_free(g);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(fg_graph_new(c("nonsense").as_ptr(), &mut g), FgStatus::InvalidSpec);
        assert!(g.is_null());
        let msg = CStr::from_ptr(fg_last_error()).to_str().unwrap();
        assert!(msg.starts_with("invalid_spec"));
        assert_eq!(fg_graph_new(ptr::null(), &mut g), FgStatus::NullPointer);
    }
}

#[test]
fn simulate_and_check_round_trip() {
    unsafe {
        let strategy = c(r#"{"r":1,"budget":"1","schedule":[["(1)"],["(-2)"]]}"#);
        let mut out = ptr::null_mut();
        let status = fg_simulate(
            c("lattice:d=1").as_ptr(),
            c("(0)").as_ptr(),
            c("1").as_ptr(),
            1,
            strategy.as_ptr(),
            &mut out,
        );
        assert_eq!(status, FgStatus::Ok);
        let trace = take(out);
        assert!(trace.contains("\"outcome\":\"contained\""));
        let mut valid = 0;
        assert_eq!(fg_check(c(&trace).as_ptr(), &mut valid), FgStatus::Ok);
        assert_eq!(valid, 1);
        let tampered = trace.replace("\"burned_total\":2", "\"burned_total\":3");
        assert_eq!(fg_check(c(&tampered).as_ptr(), &mut valid), FgStatus::Ok);
        assert_eq!(valid, 0);
    }
}

#[test]
fn session_lifecycle() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(
            fg_session_new(c("square").as_ptr(), c("ball:0").as_ptr(), c("2").as_ptr(), 1, &mut s),
            FgStatus::Ok
        );
        assert_eq!(fg_session_protect(s, c("(0,0)").as_ptr()), FgStatus::ProtectionOverlap);
        assert_eq!(fg_session_protect(s, c("(1,0);(0,1)").as_ptr()), FgStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(fg_session_state_json(s, &mut out), FgStatus::Ok);
        let state: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(state["turn"], 1);
        assert_eq!(state["burning"].as_array().unwrap().len(), 3);
        assert_eq!(fg_session_undo(s), FgStatus::Ok);
        assert_eq!(fg_session_undo(s), FgStatus::InvalidArgument);
        assert_eq!(fg_session_trace(s, &mut out), FgStatus::Ok);
        assert!(take(out).starts_with("{\"family\":\"square\""));
        fg_session_free(s);
    }
}

#[test]
fn header_is_generated() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/firegraph.h")).unwrap();
    for name in [
        "fg_graph_new",
        "fg_session_protect",
        "fg_string_free",
        "FG_STATUS_PROTECTION_OVERLAP",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
    let version = unsafe { CStr::from_ptr(fg_version()) };
    assert_eq!(version.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
