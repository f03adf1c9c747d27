use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use lstree_ffi::*;

fn params() -> LstParams {
    let mut p = std::mem::MaybeUninit::uninit();
    assert_eq!(unsafe { lst_params_default(p.as_mut_ptr()) }, LstStatus::Ok);
    unsafe { p.assume_init() }
}

fn last_error() -> String {
    let p = lst_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn grid(k: usize) -> *mut LstGraph {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(lst_graph_new(k * k, &mut g), LstStatus::Ok);
        for r in 0..k {
            for c in 0..k {
                let v = r * k + c;
                if c + 1 < k {
                    assert_eq!(lst_graph_add_edge(g, v, v + 1, 1.0), LstStatus::Ok);
                }
                if r + 1 < k {
                    assert_eq!(lst_graph_add_edge(g, v, v + k, 1.0), LstStatus::Ok);
                }
            }
        }
    }
    g
}

#[test]
fn build_and_measure() {
    let g = grid(6);
    let mut p = params();
    p.seed = 11;
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(lst_graph_vertex_count(g), 36);
        assert_eq!(lst_graph_edge_count(g), 60);
        assert_eq!(lst_build_tree(g, &p, -1, &mut t), LstStatus::Ok);
        let m = lst_tree_edge_count(t);
        assert_eq!(m, 35);
        let (mut us, mut vs, mut ws) = (vec![0usize; m], vec![0usize; m], vec![0f64; m]);
        assert_eq!(lst_tree_edges(t, us.as_mut_ptr(), vs.as_mut_ptr(), ws.as_mut_ptr(), m), LstStatus::Ok);
        assert!(us.iter().zip(&vs).all(|(u, v)| u < v));
        assert_eq!(
            lst_tree_edges(t, us.as_mut_ptr(), vs.as_mut_ptr(), ws.as_mut_ptr(), m - 1),
            LstStatus::InvalidArgument
        );
        let mut d = 0.0;
        assert_eq!(lst_tree_distance(t, 0, 35, &mut d), LstStatus::Ok);
        assert!(d >= 10.0);
        let (mut avg, mut max) = (0.0, 0.0);
        assert_eq!(lst_stretch(g, t, &mut avg, &mut max), LstStatus::Ok);
        assert!(avg >= 1.0 && max >= avg);

        // same parameters, same tree
        let mut t2 = ptr::null_mut();
        assert_eq!(lst_build_tree(g, &p, -1, &mut t2), LstStatus::Ok);
        let (mut us2, mut vs2, mut ws2) = (vec![0usize; m], vec![0usize; m], vec![0f64; m]);
        lst_tree_edges(t2, us2.as_mut_ptr(), vs2.as_mut_ptr(), ws2.as_mut_ptr(), m);
        assert_eq!((us, vs), (us2, vs2));
        lst_tree_free(t2);
        lst_tree_free(t);
        lst_graph_free(g);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        let text = CString::new("0 0\n").unwrap();
        assert_eq!(lst_graph_parse(text.as_ptr(), LstFormat::Edges as u32, &mut g), LstStatus::Parse);
        assert!(last_error().contains("line 1"));
        assert!(g.is_null());

        let text = CString::new("0 1\n2 3\n").unwrap();
        assert_eq!(lst_graph_parse(text.as_ptr(), 7, &mut g), LstStatus::InvalidArgument);
        assert_eq!(lst_graph_parse(text.as_ptr(), LstFormat::Edges as u32, &mut g), LstStatus::Ok);
        let mut t = ptr::null_mut();
        assert_eq!(lst_build_tree(g, &params(), -1, &mut t), LstStatus::Disconnected);
        assert_eq!(lst_build_tree(g, ptr::null(), -1, &mut t), LstStatus::NullPointer);
        let mut p = params();
        p.mode = 9;
        assert_eq!(lst_build_tree(g, &p, -1, &mut t), LstStatus::InvalidArgument);
        p = params();
        p.c = 1.0;
        assert_eq!(lst_build_tree(g, &p, -1, &mut t), LstStatus::Params);
        assert_eq!(lst_graph_add_edge(g, 0, 0, 1.0), LstStatus::Precondition);
        assert_eq!(lst_graph_add_edge(g, 1, 2, -1.0), LstStatus::Precondition);
        lst_graph_free(g);
        lst_graph_free(ptr::null_mut());
        lst_tree_free(ptr::null_mut());
        assert_eq!(lst_graph_vertex_count(ptr::null()), 0);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(lst_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn have(tool: &str) -> bool {
    Command::new(tool).arg("--version").output().is_ok()
}

/// Compiles and runs a C program against the generated header and the
/// static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("lstree.h").exists());
    if !have("cc") {
        eprintln!("no C compiler; skipping");
        return;
    }
    // tests live in target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("liblstree_ffi.a");
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = manifest.join("tests/c/smoke.c");
    if !lib.exists() {
        let st = Command::new("cc")
            .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
            .arg(&header_dir)
            .arg(&src)
            .status()
            .unwrap();
        assert!(st.success());
        return;
    }
    let bin = tmp.join("lstree_smoke");
    let st = Command::new("cc")
        .args(["-Wall", "-Werror", "-I"])
        .arg(&header_dir)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(st.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("3 "), "{text}");
}
